use std::ffi::CStr;
use std::ptr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use zenscope::dependence::{self, Measure};
use zenscope_ffi::*;

fn sample(n: usize, d: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let z: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
    (0..d)
        .map(|j| z.iter().map(|&c| c * (j as f64 + 1.0) * 0.3 + rng.random::<f64>()).collect())
        .collect()
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(zs_last_error_message()) }.to_string_lossy().into_owned()
}

#[test]
fn scalar_functions_match_the_library() {
    let x = sample(300, 2, 1);
    let mut out = 0.0;
    unsafe {
        assert_eq!(zs_kendall_tau(x[0].as_ptr(), x[1].as_ptr(), 300, &mut out), ZS_OK);
        assert_eq!(out, dependence::kendall_tau(&x[0], &x[1]).unwrap());
        assert_eq!(zs_spearman_rho(x[0].as_ptr(), x[1].as_ptr(), 300, &mut out), ZS_OK);
        assert_eq!(out, dependence::spearman_rho(&x[0], &x[1]).unwrap());
        assert_eq!(zs_lambda_from_rho_nu(0.5, 4.0, &mut out), ZS_OK);
        assert_eq!(out, dependence::lambda_from_rho_nu(0.5, 4.0).unwrap());

        let u = dependence::pseudo_observations(&["a".into(), "b".into()], &x).unwrap();
        let mut fit = ZsBivFit::default();
        assert_eq!(zs_fit_biv_t(u.columns[0].as_ptr(), u.columns[1].as_ptr(), 300, &mut fit), ZS_OK);
        let want = dependence::fit_biv_t(&u.columns[0], &u.columns[1]).unwrap();
        assert_eq!((fit.rho, fit.nu, fit.lambda), (want.rho, want.nu, want.lambda));
    }
}

#[test]
fn errors_carry_codes_and_messages() {
    let c = [1.0; 10];
    let mut out = f64::NAN;
    unsafe {
        assert_eq!(zs_kendall_tau(c.as_ptr(), c.as_ptr(), 10, &mut out), ZS_ERR_DEGENERATE);
        assert!(last_error().contains("constant"), "{}", last_error());
        assert!(out.is_nan());
        assert_eq!(zs_kendall_tau(ptr::null(), c.as_ptr(), 10, &mut out), ZS_ERR_NULL_POINTER);
        assert_eq!(last_error(), "u is null");
        assert_eq!(zs_lambda_from_rho_nu(1.5, 4.0, &mut out), ZS_ERR_INVALID_ARGUMENT);
        assert_eq!(zs_lambda_from_rho_nu(0.5, 4.0, ptr::null_mut()), ZS_ERR_NULL_POINTER);
    }
}

#[test]
fn dependence_matrix_through_a_handle() {
    let x = sample(400, 4, 2);
    let flat: Vec<f64> = x.concat();
    let mut pobs = ptr::null_mut();
    unsafe {
        assert_eq!(zs_pobs_new(flat.as_ptr(), 400, 4, &mut pobs), ZS_OK);
        assert_eq!(zs_pobs_cols(pobs), 4);
        let names: Vec<String> = (0..4).map(|j| format!("V{j}")).collect();
        let u = dependence::pseudo_observations(&names, &x).unwrap();
        for (id, m) in [(ZS_MEASURE_TAU, Measure::Tau), (ZS_MEASURE_LAMBDA_EMP, Measure::LambdaEmp)] {
            let mut buf = vec![0.0; 16];
            assert_eq!(zs_dependence_matrix(pobs, id, 2, buf.as_mut_ptr()), ZS_OK);
            let want = dependence::dependence_matrix(&u, m, 1).unwrap();
            for i in 0..4 {
                for j in 0..4 {
                    let (a, b) = (buf[i * 4 + j], want.values[i][j]);
                    assert!(a == b || (a.is_nan() && b.is_nan()));
                }
            }
        }
        let mut buf = vec![0.0; 16];
        assert_eq!(zs_dependence_matrix(pobs, 99, 1, buf.as_mut_ptr()), ZS_ERR_INVALID_ARGUMENT);

        let mut p = vec![0.0; 16];
        let mut nu = 0.0;
        assert_eq!(zs_fit_joint_t(pobs, p.as_mut_ptr(), &mut nu), ZS_OK);
        assert!(nu > 1.0);
        assert_eq!(p[0], 1.0);
        assert_eq!(p[1], p[4]);
        zs_pobs_free(pobs);
        zs_pobs_free(ptr::null_mut());
    }
}

#[test]
fn zenpath_and_layout_round_trip() {
    unsafe {
        let mut z = ptr::null_mut();
        assert_eq!(zs_zenpath_eulerian(5, &mut z), ZS_OK);
        assert_eq!(zs_zenpath_group_count(z), 1);
        let mut len = 0;
        assert_eq!(zs_zenpath_group(z, 0, ptr::null_mut(), 0, &mut len), ZS_OK);
        assert_eq!(len, 11);
        let mut short = [0usize; 3];
        assert_eq!(zs_zenpath_group(z, 0, short.as_mut_ptr(), 3, &mut len), ZS_ERR_BUFFER_TOO_SMALL);
        let mut g = vec![0usize; len];
        assert_eq!(zs_zenpath_group(z, 0, g.as_mut_ptr(), len, &mut len), ZS_OK);
        assert_eq!(g, zenscope::zenpath::eulerian_all_pairs(5).unwrap().groups[0]);

        let mut l = ptr::null_mut();
        assert_eq!(zs_layout(z, 9, &mut l), ZS_OK);
        let n = zs_layout_cell_count(l);
        let mut panels = 0;
        for k in 0..n {
            let mut c = ZsCell::default();
            assert_eq!(zs_layout_cell(l, k, &mut c), ZS_OK);
            if c.kind == ZS_CELL_PANEL {
                assert_eq!((c.row % 2, c.col % 2), (0, 0));
                assert!(c.horizontal != ZS_NONE && c.vertical != ZS_NONE);
                panels += 1;
            }
        }
        assert_eq!(panels, 10);
        let mut c = ZsCell::default();
        assert_eq!(zs_layout_cell(l, n, &mut c), ZS_ERR_INVALID_ARGUMENT);
        zs_layout_free(l);
        zs_zenpath_free(z);

        let idx = [0usize, 1, 2, 3, 4];
        let lens = [3usize, 2];
        let mut z = ptr::null_mut();
        assert_eq!(zs_zenpath_from_groups(idx.as_ptr(), lens.as_ptr(), 2, &mut z), ZS_OK);
        assert_eq!(zs_zenpath_group_count(z), 2);
        zs_zenpath_free(z);
    }
}

#[test]
fn zigzag_letters() {
    let mut buf = [0 as std::ffi::c_char; 8];
    let mut len = 0;
    unsafe {
        assert_eq!(zs_default_zigzag(5, 9, buf.as_mut_ptr(), buf.len(), &mut len), ZS_OK);
        assert_eq!(CStr::from_ptr(buf.as_ptr()).to_str().unwrap(), "rdru");
        assert_eq!(len, 4);
        assert_eq!(zs_default_zigzag(5, 9, buf.as_mut_ptr(), 4, &mut len), ZS_ERR_BUFFER_TOO_SMALL);
        assert_eq!(zs_default_zigzag(0, 9, buf.as_mut_ptr(), 8, &mut len), ZS_ERR_INVALID_ARGUMENT);
    }
}

//! Acceptance suite. Runs without the libtest harness so that every
//! criterion prints exactly one PASS/FAIL line; the process fails if any
//! criterion fails. All tolerances are pinned below.

use std::collections::{HashMap, HashSet};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::function::gamma::ln_gamma;

use zenscope::dependence::{
    dependence_matrix, fit_biv_t, fit_joint_t, kendall_tau, lambda_from_rho_nu, lambda_nonparam,
    par_map, pseudo_observations, simulate_t_copula, Measure, PseudoObsMatrix,
};
use zenscope::distributions::chi_square_sf;
use zenscope::error::Error;
use zenscope::gof::{chisq_map, rosenblatt_biv_t};
use zenscope::margins::{
    asymptotic_std_errors, fit_arma_garch, log_likelihood, serial_dependence_order, simulate,
    ArmaGarchParams,
};
use zenscope::optim::{nelder_mead, NelderMeadOptions};
use zenscope::synth::{synthesize, SynthConfig};
use zenscope::zenpath::{eulerian_all_pairs, Zenpath};
use zenscope::zenplot::{default_zigzag, layout, layout_sequence, place_cells, Direction, DirectionSeq};

// Criterion 1
const AC1_TOL: f64 = 1e-8;
const AC1_LIMIT: Duration = Duration::from_secs(1);
// Criterion 2
const AC2_VECTORS: usize = 1000;
const AC2_LIMIT: Duration = Duration::from_secs(10);
// Criterion 3
const AC3_REPS: usize = 200;
const AC3_N: usize = 2000;
const AC3_RHO_TOL: f64 = 0.05;
/// Central 99% range of the nu estimate over 400 pilot replications with
/// seeds disjoint from the ones used here, rounded outwards.
const AC3_NU_INTERVAL: (f64, f64) = (2.9, 5.7);
const AC3_MIN_RATE: f64 = 0.95;
const AC3_LIMIT: Duration = Duration::from_secs(120);
// Criterion 4
const AC4_REPS: usize = 20;
const AC4_NU_REL: f64 = 0.10;
// Criterion 5
const AC5_REPS: usize = 500;
const AC5_N: usize = 1000;
const AC5_LEVEL: f64 = 0.01;
const AC5_MIN_RATE: f64 = 0.98;
const AC5_T_MEAN: usize = 10_000;
const AC5_MEAN_TOL: f64 = 0.1;
const AC5_LIMIT: Duration = Duration::from_secs(120);
// Criterion 6
const AC6_T: usize = 100_000;
const AC6_P: f64 = 0.1;
const AC6_COMONOTONE_MIN: f64 = 0.95;
const AC6_INDEPENDENT_MAX: f64 = 0.05;
const AC6_LIMIT: Duration = Duration::from_secs(30);
// Criterion 7
const AC7_REPS: usize = 50;
const AC7_T: usize = 5000;
const AC7_Z99: f64 = 2.5758293035489004;
const AC7_MIN_COVERAGE: f64 = 0.90;
const AC7_REF_LOGLIK_SLACK: f64 = 1e-6;
const AC7_LIMIT: Duration = Duration::from_secs(300);
// Criterion 8
const AC8_LARGE_D: usize = 465;
const AC8_LARGE_PAIRS: usize = 107_880;
const AC8_LIMIT: Duration = Duration::from_secs(5);
// Criterion 9
const AC9_FUZZ: usize = 1000;
const AC9_LIMIT: Duration = Duration::from_secs(10);
// Criterion 10
const AC10_THREADS: [usize; 3] = [1, 2, 8];
const AC10_LIMIT: Duration = Duration::from_secs(60);

fn threads() -> usize {
    std::thread::available_parallelism().map_or(4, |n| n.get()).max(2)
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn run(id: usize, title: &str, limit: Duration, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let o = f();
    let dt = start.elapsed();
    let in_time = dt <= limit;
    let pass = o.pass && in_time;
    println!(
        "[{}] AC{id} {title}: {}; runtime {:.2} s (limit {} s{})",
        if pass { "PASS" } else { "FAIL" },
        o.detail,
        dt.as_secs_f64(),
        limit.as_secs(),
        if in_time { "" } else { ", exceeded" }
    );
    pass
}

// --- independent oracles -------------------------------------------------

/// Density of the t distribution with `nu` degrees of freedom.
fn t_density(x: f64, nu: f64) -> f64 {
    let c = ln_gamma((nu + 1.0) / 2.0) - ln_gamma(nu / 2.0) - 0.5 * (nu * std::f64::consts::PI).ln();
    (c - (nu + 1.0) / 2.0 * (x * x / nu).ln_1p()).exp()
}

fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    (b - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + b)) + f(b))
}

fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, whole: f64, tol: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let (l, r) = (simpson(f, a, m), simpson(f, m, b));
    if depth == 0 || (l + r - whole).abs() <= 15.0 * tol {
        return l + r + (l + r - whole) / 15.0;
    }
    adaptive_simpson(f, a, m, l, tol / 2.0, depth - 1) + adaptive_simpson(f, m, b, r, tol / 2.0, depth - 1)
}

/// Lower tail `P(T <= x)` for `x < 0` by quadrature after `t = x / w`,
/// which maps `(-inf, x]` onto `(0, 1]`.
fn t_lower_tail_quadrature(x: f64, nu: f64) -> f64 {
    assert!(x < 0.0);
    let g = |w: f64| {
        if w <= 0.0 {
            0.0
        } else {
            t_density(x / w, nu) * (-x) / (w * w)
        }
    };
    adaptive_simpson(&g, 0.0, 1.0, simpson(&g, 0.0, 1.0), 1e-14, 50)
}

/// Kendall's tau-b from all `n(n-1)/2` pairs.
fn kendall_brute(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len();
    let (mut s, mut tx, mut ty) = (0i64, 0u64, 0u64);
    for i in 0..n {
        for j in i + 1..n {
            let a = (x[i] - x[j]).partial_cmp(&0.0).unwrap() as i64;
            let b = (y[i] - y[j]).partial_cmp(&0.0).unwrap() as i64;
            s += a * b;
            tx += (x[i] == x[j]) as u64;
            ty += (y[i] == y[j]) as u64;
        }
    }
    let n0 = (n * (n - 1) / 2) as u64;
    s as f64 / (((n0 - tx) as f64) * ((n0 - ty) as f64)).sqrt()
}

fn pobs_of(cols: Vec<Vec<f64>>) -> PseudoObsMatrix {
    let names: Vec<String> = (0..cols.len()).map(|k| format!("V{k}")).collect();
    pseudo_observations(&names, &cols).unwrap()
}

fn corr2(rho: f64) -> Vec<Vec<f64>> {
    vec![vec![1.0, rho], vec![rho, 1.0]]
}

// --- criteria -------------------------------------------------------------

fn ac1() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for a in 0..20 {
        let rho = -0.9 + a as f64 * (0.99 + 0.9) / 19.0;
        for b in 0..20 {
            let nu = 1.0 + b as f64 * 49.0 / 19.0;
            let got = lambda_from_rho_nu(rho, nu).unwrap();
            let x = -((nu + 1.0) * (1.0 - rho) / (1.0 + rho)).sqrt();
            let oracle = 2.0 * t_lower_tail_quadrature(x, nu + 1.0);
            worst = worst.max((got - oracle).abs());
            count += 1;
        }
    }
    let one = lambda_from_rho_nu(1.0, 4.0).unwrap();
    Outcome {
        pass: worst < AC1_TOL && one == 1.0,
        detail: format!("max |delta| = {worst:.2e} over {count} grid points (tol {AC1_TOL:e}); lambda(rho=1) = {one}"),
    }
}

fn ac2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xac2);
    let mut mismatches = 0;
    let mut with_ties = 0;
    let mut compared = 0;
    while compared < AC2_VECTORS {
        let n = rng.random_range(2..=200);
        let ties = compared % 2 == 1;
        let draw = |rng: &mut ChaCha8Rng| -> f64 {
            if ties {
                rng.random_range(0..8) as f64
            } else {
                rng.random::<f64>()
            }
        };
        let x: Vec<f64> = (0..n).map(|_| draw(&mut rng)).collect();
        let y: Vec<f64> = (0..n).map(|_| draw(&mut rng)).collect();
        match kendall_tau(&x, &y) {
            Ok(t) => {
                if t.to_bits() != kendall_brute(&x, &y).to_bits() {
                    mismatches += 1;
                }
            }
            // a constant draw is rejected by both definitions; redraw
            Err(Error::Degenerate(_)) => continue,
            Err(e) => panic!("{e}"),
        }
        with_ties += ties as usize;
        compared += 1;
    }
    Outcome {
        pass: mismatches == 0,
        detail: format!("{mismatches} bitwise mismatches in {compared} vectors ({with_ties} with ties), n <= 200"),
    }
}

fn ac3() -> Outcome {
    let seeds: Vec<u64> = (0..AC3_REPS as u64).map(|k| 3_000 + k).collect();
    let fits = par_map(&seeds, threads(), |&s| {
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let u = simulate_t_copula(&corr2(0.5), 4.0, AC3_N, &mut rng).unwrap();
        let p = pobs_of(u);
        fit_biv_t(&p.columns[0], &p.columns[1]).unwrap()
    })
    .unwrap();
    let ok = fits
        .iter()
        .filter(|f| (f.rho - 0.5).abs() <= AC3_RHO_TOL && (AC3_NU_INTERVAL.0..=AC3_NU_INTERVAL.1).contains(&f.nu))
        .count();
    let rate = ok as f64 / AC3_REPS as f64;
    let mut nus: Vec<f64> = fits.iter().map(|f| f.nu).collect();
    nus.sort_by(f64::total_cmp);
    Outcome {
        pass: rate >= AC3_MIN_RATE,
        detail: format!(
            "{ok}/{AC3_REPS} runs with |rho - 0.5| <= {AC3_RHO_TOL} and nu in [{}, {}] (rate {rate:.3}, need {AC3_MIN_RATE}); nu range [{:.2}, {:.2}]",
            AC3_NU_INTERVAL.0,
            AC3_NU_INTERVAL.1,
            nus[0],
            nus[nus.len() - 1]
        ),
    }
}

fn ac4() -> Outcome {
    let mut rho_exact = 0;
    let mut nu_close = 0;
    let mut worst: f64 = 0.0;
    for k in 0..AC4_REPS as u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(4_000 + k);
        let u = simulate_t_copula(&corr2(0.4 + 0.02 * k as f64), 5.0, 1500, &mut rng).unwrap();
        let p = pobs_of(u);
        let biv = fit_biv_t(&p.columns[0], &p.columns[1]).unwrap();
        let joint = fit_joint_t(&p).unwrap();
        rho_exact += (joint.p[0][1] == biv.rho) as usize;
        let rel = (joint.nu - biv.nu).abs() / biv.nu;
        worst = worst.max(rel);
        nu_close += (rel <= AC4_NU_REL) as usize;
    }
    Outcome {
        pass: rho_exact == AC4_REPS && nu_close == AC4_REPS,
        detail: format!(
            "rho identical in {rho_exact}/{AC4_REPS}; nu within {:.0}% in {nu_close}/{AC4_REPS} (worst {:.2}%)",
            AC4_NU_REL * 100.0,
            worst * 100.0
        ),
    }
}

/// Pearson chi-square statistic of `(v1, v2)` counts on a 4 x 4 grid.
fn grid_chisq(v1: &[f64], v2: &[f64]) -> f64 {
    let mut counts = [[0usize; 4]; 4];
    for (a, b) in v1.iter().zip(v2) {
        let i = ((a * 4.0) as usize).min(3);
        let j = ((b * 4.0) as usize).min(3);
        counts[i][j] += 1;
    }
    let e = v1.len() as f64 / 16.0;
    counts.iter().flatten().map(|&o| (o as f64 - e).powi(2) / e).sum()
}

fn ac5() -> Outcome {
    let (rho, nu) = (0.5, 4.0);
    let seeds: Vec<u64> = (0..AC5_REPS as u64).map(|k| 5_000 + k).collect();
    let passes = par_map(&seeds, threads(), |&s| {
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let u = simulate_t_copula(&corr2(rho), nu, AC5_N, &mut rng).unwrap();
        // both conditioning orders
        let fwd = rosenblatt_biv_t(&u[0], &u[1], rho, nu).unwrap();
        let rev = rosenblatt_biv_t(&u[1], &u[0], rho, nu).unwrap();
        let pass = |r: &zenscope::gof::RosenblattPair| chi_square_sf(grid_chisq(&r.v1, &r.v2), 15.0) >= AC5_LEVEL;
        (pass(&fwd), pass(&rev))
    })
    .unwrap();
    let ok = passes.iter().filter(|p| p.0).count();
    let ok_rev = passes.iter().filter(|p| p.1).count();
    let rate = ok.min(ok_rev) as f64 / AC5_REPS as f64;
    let mut rng = ChaCha8Rng::seed_from_u64(5_999);
    let u = simulate_t_copula(&corr2(rho), nu, AC5_T_MEAN, &mut rng).unwrap();
    let c = chisq_map(&rosenblatt_biv_t(&u[0], &u[1], rho, nu).unwrap());
    let mean = c.iter().sum::<f64>() / c.len() as f64;
    Outcome {
        pass: rate >= AC5_MIN_RATE && (mean - 2.0).abs() <= AC5_MEAN_TOL,
        detail: format!(
            "{ok}/{AC5_REPS} (reversed order {ok_rev}/{AC5_REPS}) pass the 4x4 uniformity test at {AC5_LEVEL} (need {AC5_MIN_RATE}); chi-square map mean {mean:.4} at T = {AC5_T_MEAN} (2 +- {AC5_MEAN_TOL})"
        ),
    }
}

fn ac6() -> Outcome {
    let n = AC6_T as f64;
    let u: Vec<f64> = (1..=AC6_T).map(|k| k as f64 / (n + 1.0)).collect();
    let como = lambda_nonparam(&u, &u, AC6_P).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let a: Vec<f64> = (0..AC6_T).map(|_| rng.random()).collect();
    let b: Vec<f64> = (0..AC6_T).map(|_| rng.random()).collect();
    let p = pobs_of(vec![a, b]);
    let ind = lambda_nonparam(&p.columns[0], &p.columns[1], AC6_P).unwrap();
    Outcome {
        pass: (AC6_COMONOTONE_MIN..=1.0).contains(&como) && ind.abs() <= AC6_INDEPENDENT_MAX,
        detail: format!(
            "comonotone {como:.4} (need [{AC6_COMONOTONE_MIN}, 1]); independent {ind:.4} (need |.| <= {AC6_INDEPENDENT_MAX}); T = {AC6_T}, p = {AC6_P}"
        ),
    }
}

fn garch_truth() -> ArmaGarchParams {
    ArmaGarchParams {
        mu: 0.0,
        phi: 0.5,
        theta: 0.2,
        alpha0: 0.01,
        alpha1: 0.10,
        beta: 0.85,
        nu: 5.0,
    }
}

/// Reference fit: plain Nelder-Mead on the natural parameters with a loose
/// tolerance, started at the truth.
fn reference_loglik(x: &[f64]) -> f64 {
    let opts = NelderMeadOptions {
        f_tol: 1e-9,
        max_evals: 40_000,
        ..NelderMeadOptions::default()
    };
    let nll = |v: &[f64]| {
        let p = ArmaGarchParams::from_array(v.try_into().unwrap());
        if p.is_admissible() {
            -log_likelihood(&p, x)
        } else {
            f64::INFINITY
        }
    };
    -nelder_mead(nll, &garch_truth().as_array(), &opts).f
}

fn ac7() -> Outcome {
    let truth = garch_truth().as_array();
    let seeds: Vec<u64> = (0..AC7_REPS as u64).map(|k| 7_000 + k).collect();
    let results = par_map(&seeds, threads(), |&s| {
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let x = simulate(&garch_truth(), AC7_T, 1000, &mut rng);
        let fit = fit_arma_garch(&x, None).unwrap();
        let se = asymptotic_std_errors(&x, &fit.params());
        let est = fit.params().as_array();
        let covered: Vec<bool> = (0..7)
            .map(|k| se[k].is_some_and(|s| (est[k] - truth[k]).abs() <= AC7_Z99 * s))
            .collect();
        let reference = (s == seeds[0]).then(|| (fit.loglik, reference_loglik(&x)));
        (covered, reference)
    })
    .unwrap();
    let total = results.iter().map(|(c, _)| c.iter().filter(|&&b| b).count()).sum::<usize>();
    let coverage = total as f64 / (7 * AC7_REPS) as f64;
    let names = ["mu", "phi", "theta", "alpha0", "alpha1", "beta", "nu"];
    let per: Vec<String> = (0..7)
        .map(|k| {
            let c = results.iter().filter(|(c, _)| c[k]).count();
            format!("{}={c}", names[k])
        })
        .collect();
    let (fit_ll, ref_ll) = results[0].1.expect("reference run");
    let ref_ok = fit_ll >= ref_ll - AC7_REF_LOGLIK_SLACK * ref_ll.abs();

    // serial-dependence ordering on a 10-column panel with one contaminated column
    let contaminated = 6;
    let s = synthesize(&SynthConfig {
        d: 10,
        t: 1500,
        contaminate: Some(contaminated),
        seed: 77,
        ..SynthConfig::default()
    })
    .unwrap();
    let residuals = par_map(&s.returns.columns, threads(), |c| match fit_arma_garch(c, None) {
        Ok(f) => f.residuals,
        Err(Error::OptimizerFailed { best: Some(b), .. }) => b.residuals,
        Err(e) => panic!("{e}"),
    })
    .unwrap();
    let order = serial_dependence_order(&residuals, 10, false).unwrap();
    let first = order[0].column;
    Outcome {
        pass: coverage >= AC7_MIN_COVERAGE && ref_ok && first == contaminated,
        detail: format!(
            "99% interval coverage {total}/{} = {coverage:.3} (need {AC7_MIN_COVERAGE}; per parameter {}); loglik {fit_ll:.4} vs reference {ref_ll:.4}; Ljung-Box first column {first} (contaminated {contaminated}, p = {:.2e})",
            7 * AC7_REPS,
            per.join(" "),
            order[0].p_value
        ),
    }
}

fn ac8() -> Outcome {
    let mut problems = Vec::new();
    for d in 3..=12usize {
        let z = eulerian_all_pairs(d).unwrap();
        let pairs = z.pairs();
        let mut count: HashMap<(usize, usize), usize> = HashMap::new();
        for (a, b) in &pairs {
            *count.entry(((*a).min(*b), (*a).max(*b))).or_default() += 1;
        }
        let all = d * (d - 1) / 2;
        if count.len() != all || count.keys().any(|(a, b)| a == b) {
            problems.push(format!("d={d}: {} distinct of {all}", count.len()));
        }
        if d % 2 == 1 && pairs.len() != all {
            problems.push(format!("d={d}: {} pairs, expected exactly {all}", pairs.len()));
        }
        if d % 2 == 0 && !(all + d / 2 - 1..=all + d / 2).contains(&pairs.len()) {
            problems.push(format!("d={d}: {} pairs", pairs.len()));
        }
    }
    let z = eulerian_all_pairs(AC8_LARGE_D).unwrap();
    let distinct: HashSet<(usize, usize)> = z.pairs().into_iter().map(|(a, b)| (a.min(b), a.max(b))).collect();
    Outcome {
        pass: problems.is_empty() && distinct.len() == AC8_LARGE_PAIRS,
        detail: format!(
            "d = 3..12 {}; d = {AC8_LARGE_D}: {} distinct pairs (expected {AC8_LARGE_PAIRS})",
            if problems.is_empty() { "all covered".to_string() } else { problems.join(", ") },
            distinct.len()
        ),
    }
}

fn ac9() -> Outcome {
    let first_five = place_cells(&default_zigzag(5, 9).unwrap()).unwrap();
    let narrative = vec![(0, 0), (0, 1), (1, 1), (1, 2), (0, 2)];
    let mut chain_ok = true;
    for d in [2usize, 3, 10, 57, 465] {
        let g = layout(&Zenpath::chain(d), None, 9).unwrap();
        chain_ok &= g.panel_count() == d - 1;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let dirs = [Direction::Up, Direction::Down, Direction::Left, Direction::Right];
    let (mut placed, mut collided, mut wrong) = (0, 0, 0);
    for i in 0..AC9_FUZZ {
        let len = rng.random_range(0..80);
        // every other sequence is monotone in both axes so that many layouts succeed
        let monotone = [[Direction::Down, Direction::Right], [Direction::Up, Direction::Left]];
        let pool: &[Direction] = if i % 2 == 0 { &dirs } else { &monotone[(i / 2) % 2] };
        let seq = DirectionSeq((0..len).map(|_| pool[rng.random_range(0..pool.len())]).collect());
        // oracle: first revisit of a panel cell
        let mut pos = (0i64, 0i64);
        let mut seen = HashSet::from([pos]);
        let mut first_hit = None;
        for (k, d) in seq.0.iter().enumerate() {
            let (dr, dc) = d.delta();
            pos = (pos.0 + dr, pos.1 + dc);
            if !seen.insert(pos) {
                first_hit = Some(k + 1);
                break;
            }
        }
        match (layout_sequence(len + 1, Some(&seq), 9, None), first_hit) {
            (Ok(g), None) => {
                let mut cells = HashSet::new();
                if g.cells.iter().all(|c| cells.insert((c.row, c.col))) {
                    placed += 1;
                } else {
                    wrong += 1;
                }
            }
            (Err(Error::LayoutCollision { step, .. }), Some(k)) if step == k => collided += 1,
            _ => wrong += 1,
        }
    }
    Outcome {
        pass: first_five == narrative && chain_ok && wrong == 0,
        detail: format!(
            "first five cells {first_five:?}; chain layouts emit d-1 panels: {chain_ok}; fuzz {AC9_FUZZ}: {placed} placed without overlap, {collided} collisions reported at the right step, {wrong} wrong"
        ),
    }
}

fn ac10() -> Outcome {
    let s = synthesize(&SynthConfig {
        d: 12,
        t: 600,
        sectors: 4,
        seed: 10,
        ..SynthConfig::default()
    })
    .unwrap();
    let u = pseudo_observations(&s.returns.tickers, &s.returns.columns).unwrap();
    let mut matrix_diffs = Vec::new();
    for m in [Measure::Tau, Measure::RhoS, Measure::LambdaT, Measure::LambdaEmp] {
        let bytes: Vec<String> = AC10_THREADS
            .iter()
            .map(|&t| {
                let dm = dependence_matrix(&u, m, t).unwrap();
                serde_json::to_string(&dm.to_json_repr()).unwrap() + &dm.to_csv_string()
            })
            .collect();
        if bytes.iter().any(|b| *b != bytes[0]) {
            matrix_diffs.push(m.cli_name());
        }
    }

    let dirs: Vec<tempfile::TempDir> = AC10_THREADS.iter().map(|_| tempfile::tempdir().unwrap()).collect();
    let mut codes = Vec::new();
    for (dir, t) in dirs.iter().zip(AC10_THREADS) {
        let args = [
            "zenscope".to_string(),
            "--out-dir".into(),
            dir.path().display().to_string(),
            "--threads".into(),
            t.to_string(),
            "--seed".into(),
            "42".into(),
            "pipeline".into(),
        ];
        codes.push(zenscope::cli::run_from(args));
    }
    let list = |d: &std::path::Path| {
        let mut v: Vec<_> = std::fs::read_dir(d)
            .unwrap()
            .map(|e| e.unwrap().file_name().into_string().unwrap())
            .collect();
        v.sort();
        v
    };
    let files = list(dirs[0].path());
    let mut differing = Vec::new();
    for d in &dirs[1..] {
        if list(d.path()) != files {
            differing.push("file set".to_string());
        }
        for f in &files {
            if std::fs::read(dirs[0].path().join(f)).ok() != std::fs::read(d.path().join(f)).ok() {
                differing.push(f.clone());
            }
        }
    }
    Outcome {
        pass: matrix_diffs.is_empty() && codes.iter().all(|&c| c == 0) && differing.is_empty() && files.len() > 30,
        detail: format!(
            "dependence matrices identical across threads {AC10_THREADS:?}: {}; pipeline exit codes {codes:?}, {} artifacts, differing: {}",
            if matrix_diffs.is_empty() { "yes".to_string() } else { format!("no ({})", matrix_diffs.join(", ")) },
            files.len(),
            if differing.is_empty() { "none".to_string() } else { differing.join(", ") }
        ),
    }
}

fn main() {
    // `cargo test -- --list` style invocations should not run the suite
    if std::env::args().any(|a| a == "--list") {
        return;
    }
    let results = [
        run(1, "closed-form tail dependence vs quadrature", AC1_LIMIT, ac1),
        run(2, "Kendall tau vs brute force", AC2_LIMIT, ac2),
        run(3, "bivariate t copula recovery", AC3_LIMIT, ac3),
        run(4, "joint vs pairwise fit at d = 2", Duration::from_secs(60), ac4),
        run(5, "Rosenblatt transform uniformity", AC5_LIMIT, ac5),
        run(6, "nonparametric tail-dependence limits", AC6_LIMIT, ac6),
        run(7, "ARMA-GARCH recovery and Ljung-Box ordering", AC7_LIMIT, ac7),
        run(8, "Eulerian all-pairs coverage", AC8_LIMIT, ac8),
        run(9, "zigzag layout fidelity", AC9_LIMIT, ac9),
        run(10, "determinism across thread counts", AC10_LIMIT, ac10),
    ];
    let passed = results.iter().filter(|&&p| p).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    if passed != results.len() {
        std::process::exit(1);
    }
}

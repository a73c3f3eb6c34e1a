use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::args::*;
use super::output::{Manifest, Output};
use crate::dataset::{
    fill_missing, filter_by_completeness, load_prices, load_sectors, neg_log_returns, parse_prices,
    parse_sectors, prices_to_csv, sectors_to_csv, PriceMatrix, SectorMap,
};
use crate::dependence::{
    dependence_matrix, fit_all_pairs, fit_joint_t, lambda_matrix_from_joint,
    lambda_matrix_from_pairs, par_map, pseudo_observations, DependenceMatrix, JointTCopulaFit,
    Measure, PairFit, PseudoObsMatrix,
};
use crate::error::{Error, Result};
use crate::gof::{compare_models, ConditioningOrder, GofCategory};
use crate::io::{read_json, Table};
use crate::margins::{
    acf, ad_t_statistic, fit_arma_garch, qq_envelope, serial_dependence_order, DiagnosticScore,
    FitRecord, MarginalFit, DEFAULT_QQ_LEVELS,
};
use crate::synth::{synthesize, SynthConfig};
use crate::zenpath::{
    connect_pairs, eulerian_all_pairs, extreme_pairs, per_sector_paths, rank_pairs, RankOrder,
    SectorFilter, Zenpath, ZenpathJson,
};
use crate::zenplot::{
    acf_panel, layout, layout_sequence, qq_panel, render, scatter_panel, Direction, DirectionSeq,
    PanelSpec, Style,
};

const BUNDLED_PRICES: &str = include_str!("../../data/prices.csv");
const BUNDLED_SECTORS: &str = include_str!("../../data/sectors.csv");

struct Ctx {
    seed: u64,
    threads: usize,
}

pub fn execute(cli: &super::Cli) -> Result<Manifest> {
    let threads = match cli.threads {
        0 => std::thread::available_parallelism().map_or(1, |n| n.get()),
        n => n,
    };
    let ctx = Ctx {
        seed: cli.seed,
        threads,
    };
    let mut out = Output::new(&cli.out_dir)?;
    match &cli.command {
        Command::Ingest(a) => {
            let prices = load_prices(&a.prices)?;
            let sectors = a.sectors.as_deref().map(load_sectors).transpose()?;
            ingest(&mut out, prices, sectors, a.max_missing)?
        }
        Command::Synth(a) => synth(&ctx, &mut out, a)?,
        Command::Degarch(a) => degarch(&ctx, &mut out, &a.returns)?,
        Command::Diagnose(a) => diagnose(&ctx, &mut out, a)?,
        Command::Depmat(a) => depmat(&ctx, &mut out, &a.pobs, a.measure)?,
        Command::FitJoint(a) => fit_joint(&mut out, &a.pobs)?,
        Command::Gof(a) => gof(&ctx, &mut out, a)?,
        Command::Zenpath(a) => zenpath(&mut out, a)?,
        Command::Zenplot(a) => zenplot(&ctx, &mut out, a)?,
        Command::Pipeline(a) => pipeline(&ctx, &mut out, a)?,
    }
    let config = serde_json::to_value(&cli.command)?;
    out.finish(cli.command.name(), cli.seed, config)
}

fn read_table(path: &Path) -> Result<Table> {
    Table::read_csv(path)
}

fn read_pobs(path: &Path) -> Result<PseudoObsMatrix> {
    let t = read_table(path)?;
    PseudoObsMatrix::from_columns(t.tickers, t.columns).map_err(|e| e.context(path.display().to_string()))
}

fn load_style(path: Option<&Path>) -> Result<Style> {
    path.map_or_else(|| Ok(Style::default()), Style::from_file)
}

#[derive(Debug, Serialize)]
struct IngestSummary {
    price_rows: usize,
    return_rows: usize,
    tickers_in: usize,
    retained: Vec<String>,
    dropped: Vec<String>,
    filled_cells: usize,
    max_missing: f64,
}

fn ingest(out: &mut Output, prices: PriceMatrix, sectors: Option<SectorMap>, max_missing: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&max_missing) {
        return Err(Error::InvalidArgument(format!("max-missing must lie in [0, 1] (got {max_missing})")));
    }
    let kept = filter_by_completeness(&prices, max_missing)?;
    let filled_cells = kept.missing_count();
    let filled = fill_missing(&kept)?;
    let r = neg_log_returns(&filled)?;
    let dropped = prices
        .tickers
        .iter()
        .filter(|t| !kept.tickers.contains(t))
        .cloned()
        .collect();
    let summary = IngestSummary {
        price_rows: prices.rows(),
        return_rows: r.rows(),
        tickers_in: prices.tickers.len(),
        retained: kept.tickers.clone(),
        dropped,
        filled_cells,
        max_missing,
    };
    let table = Table {
        dates: r.dates,
        tickers: r.tickers,
        columns: r.columns,
    };
    out.text("returns.csv", &table.to_csv_string())?;
    out.json("ingest.json", &summary)?;
    if let Some(s) = sectors {
        let mut kept_map = SectorMap::default();
        for t in &table.tickers {
            if let Some(info) = s.0.get(t) {
                kept_map.insert(t, &info.sector, &info.subsector);
            }
        }
        out.bytes("sectors.csv", &sectors_to_csv(&kept_map))?;
    }
    Ok(())
}

fn synth(ctx: &Ctx, out: &mut Output, a: &SynthArgs) -> Result<()> {
    let cfg = SynthConfig {
        d: a.d,
        t: a.t,
        sectors: a.sectors,
        copula_nu: a.copula_nu,
        rho_within: a.rho_within,
        rho_cross: a.rho_cross,
        contaminate: a.contaminate,
        missing_rate: a.missing_rate,
        late_starts: a.late_starts,
        seed: ctx.seed,
        ..SynthConfig::default()
    };
    let s = synthesize(&cfg)?;
    out.bytes("prices.csv", &prices_to_csv(&s.prices))?;
    out.bytes("sectors.csv", &sectors_to_csv(&s.sectors))?;
    #[derive(Serialize)]
    struct Truth<'a> {
        config: &'a SynthConfig,
        tickers: &'a [String],
        margins: &'a [crate::margins::ArmaGarchParams],
        correlation: &'a [Vec<f64>],
    }
    out.json(
        "synth.json",
        &Truth {
            config: &cfg,
            tickers: &s.prices.tickers,
            margins: &s.margins,
            correlation: &s.correlation,
        },
    )?;
    Ok(())
}

fn degarch(ctx: &Ctx, out: &mut Output, returns: &Path) -> Result<()> {
    let t = read_table(returns)?;
    let fits = par_map(&t.columns, ctx.threads, |col| match fit_arma_garch(col, None) {
        Ok(f) => Ok(f),
        Err(Error::OptimizerFailed { best: Some(b), .. }) => Ok(*b),
        Err(e) => Err(e),
    })?;
    let fits: Vec<MarginalFit> = fits
        .into_iter()
        .zip(&t.tickers)
        .map(|(f, tk)| f.map_err(|e| e.context(format!("margin of {tk}"))))
        .collect::<Result<_>>()?;
    for (f, tk) in fits.iter().zip(&t.tickers) {
        if !f.converged {
            eprintln!("warning: ARMA-GARCH fit for {tk} did not converge; best point kept");
        }
    }
    let records: Vec<FitRecord> = fits.iter().zip(&t.tickers).map(|(f, tk)| FitRecord::new(tk, f)).collect();
    let residuals: Vec<Vec<f64>> = fits.into_iter().map(|f| f.residuals).collect();
    let u = pseudo_observations(&t.tickers, &residuals)?;
    out.json("fits.json", &records)?;
    let res = Table {
        dates: t.dates.clone(),
        tickers: t.tickers.clone(),
        columns: residuals,
    };
    out.text("residuals.csv", &res.to_csv_string())?;
    let pobs = Table {
        dates: t.dates,
        tickers: u.tickers,
        columns: u.columns,
    };
    out.text("pobs.csv", &pobs.to_csv_string())?;
    Ok(())
}

/// A diagnostic score tagged with its ticker.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreRecord {
    pub ticker: String,
    pub column: usize,
    pub statistic: f64,
    pub p_value: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub lag: Option<usize>,
    /// p-values order the columns; no multiple-testing correction applied.
    #[serde(default = "yes")]
    pub uncorrected: bool,
}

fn yes() -> bool {
    true
}

fn tag(scores: Vec<DiagnosticScore>, tickers: &[String]) -> Vec<ScoreRecord> {
    scores
        .into_iter()
        .map(|s| ScoreRecord {
            ticker: tickers[s.column].clone(),
            column: s.column,
            statistic: s.statistic,
            p_value: s.p_value,
            lag: s.lag,
            uncorrected: true,
        })
        .collect()
}

fn nu_by_ticker(fits: &[FitRecord], tickers: &[String]) -> Result<Vec<f64>> {
    tickers
        .iter()
        .map(|t| {
            fits.iter()
                .find(|f| &f.ticker == t)
                .map(|f| f.nu)
                .ok_or_else(|| Error::InvalidArgument(format!("no fit for ticker \"{t}\"")))
        })
        .collect()
}

/// Moves from `--dirs`, and the leading direction of an interleaved spelling.
fn parse_dirs(dirs: Option<&str>, interleaved: bool) -> Result<(Option<DirectionSeq>, Option<Direction>)> {
    let Some(s) = dirs else {
        return Ok((None, None));
    };
    let seq: DirectionSeq = s.parse()?;
    if interleaved {
        let (lead, d) = DirectionSeq::from_interleaved(&seq.0)?;
        Ok((Some(d), lead))
    } else {
        Ok((Some(seq), None))
    }
}

struct SequencePlot<'a> {
    dirs: Option<&'a DirectionSeq>,
    leading: Option<Direction>,
    width: usize,
    style: &'a Style,
}

fn render_sequence(mut panels: Vec<PanelSpec>, names: Vec<String>, p: &SequencePlot) -> Result<String> {
    for (panel, name) in panels.iter_mut().zip(&names) {
        panel.title = Some(name.clone());
    }
    let grid = layout_sequence(panels.len(), p.dirs, p.width, p.leading)?;
    render(&grid, &panels, &names, p.style)
}

fn acf_plot(columns: &[&Vec<f64>], names: Vec<String>, lags: usize, p: &SequencePlot) -> Result<String> {
    let panels = columns
        .iter()
        .zip(&names)
        .map(|(c, n)| acf(c, lags).map(|a| acf_panel(&a)).map_err(|e| e.context(n.clone())))
        .collect::<Result<Vec<_>>>()?;
    render_sequence(panels, names, p)
}

fn qq_plot(
    ctx: &Ctx,
    columns: &[(usize, &Vec<f64>, f64)],
    names: Vec<String>,
    nsim: usize,
    p: &SequencePlot,
) -> Result<String> {
    let panels = par_map(columns, ctx.threads, |&(j, col, nu)| -> Result<PanelSpec> {
        // one envelope stream per original column, independent of ordering
        let env = qq_envelope(nu, col.len(), nsim, &DEFAULT_QQ_LEVELS, ctx.seed.wrapping_add(j as u64))?;
        let theoretical = env.theoretical.clone();
        qq_panel(col, &theoretical, Some(env))
    })?
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    render_sequence(panels, names, p)
}

fn diagnose(ctx: &Ctx, out: &mut Output, a: &DiagnoseArgs) -> Result<()> {
    let res = read_table(&a.residuals)?;
    let fits: Vec<FitRecord> = read_json(&a.fits)?;
    let nus = nu_by_ticker(&fits, &res.tickers)?;
    let lb = tag(serial_dependence_order(&res.columns, a.max_lag, false)?, &res.tickers);
    let lb_sq = tag(serial_dependence_order(&res.columns, a.max_lag, true)?, &res.tickers);
    out.json("lb-residuals.json", &lb)?;
    out.json("lb-residuals-squared.json", &lb_sq)?;
    if let Some(path) = &a.returns {
        let r = read_table(path)?;
        out.json("lb-returns.json", &tag(serial_dependence_order(&r.columns, a.max_lag, false)?, &r.tickers))?;
        out.json(
            "lb-returns-squared.json",
            &tag(serial_dependence_order(&r.columns, a.max_lag, true)?, &r.tickers),
        )?;
    }
    let mut ad = Vec::with_capacity(res.columns.len());
    for (j, (col, &nu)) in res.columns.iter().zip(&nus).enumerate() {
        let mut s = ad_t_statistic(col, nu).map_err(|e| e.context(res.tickers[j].clone()))?;
        s.column = j;
        ad.push(s);
    }
    ad.sort_by(|x, y| x.p_value.total_cmp(&y.p_value).then(x.column.cmp(&y.column)));
    let ad = tag(ad, &res.tickers);
    out.json("ad.json", &ad)?;

    let style = load_style(a.style.as_deref())?;
    let plot = SequencePlot {
        dirs: None,
        leading: None,
        width: a.width,
        style: &style,
    };
    let acf_cols: Vec<&Vec<f64>> = lb.iter().map(|s| &res.columns[s.column]).collect();
    let names = lb.iter().map(|s| s.ticker.clone()).collect();
    out.text("acf-residuals.svg", &acf_plot(&acf_cols, names, a.acf_lags, &plot)?)?;
    let qq_cols: Vec<(usize, &Vec<f64>, f64)> =
        ad.iter().map(|s| (s.column, &res.columns[s.column], nus[s.column])).collect();
    let names = ad.iter().map(|s| s.ticker.clone()).collect();
    out.text("qq-residuals.svg", &qq_plot(ctx, &qq_cols, names, a.nsim, &plot)?)?;
    Ok(())
}

fn depmat(ctx: &Ctx, out: &mut Output, pobs: &Path, measure: Measure) -> Result<()> {
    let u = read_pobs(pobs)?;
    let m = if measure == Measure::LambdaT {
        let fits = fit_all_pairs(&u, ctx.threads)?;
        out.json("pairfits.json", &fits)?;
        lambda_matrix_from_pairs(&u.tickers, &fits)
    } else {
        dependence_matrix(&u, measure, ctx.threads)?
    };
    for f in &m.failures {
        eprintln!(
            "warning: {} for ({}, {}) missing: {}",
            measure.cli_name(),
            m.tickers[f.i],
            m.tickers[f.j],
            f.reason
        );
    }
    write_matrix(out, &format!("depmat-{}", measure.cli_name()), &m)
}

fn write_matrix(out: &mut Output, stem: &str, m: &DependenceMatrix) -> Result<()> {
    out.json(format!("{stem}.json"), &m.to_json_repr())?;
    out.text(format!("{stem}.csv"), &m.to_csv_string())?;
    Ok(())
}

fn fit_joint(out: &mut Output, pobs: &Path) -> Result<()> {
    let u = read_pobs(pobs)?;
    let fit = fit_joint_t(&u)?;
    if fit.nu_at_bound {
        eprintln!("warning: joint degrees of freedom at the search bound ({})", fit.nu);
    }
    out.json("joint.json", &fit)?;
    write_matrix(out, "depmat-lambda-joint", &lambda_matrix_from_joint(&fit)?)
}

fn gof(ctx: &Ctx, out: &mut Output, a: &GofArgs) -> Result<()> {
    let u = read_pobs(&a.pobs)?;
    let pairwise: Vec<PairFit> = read_json(&a.pairfits)?;
    let joint: JointTCopulaFit = read_json(&a.joint)?;
    if joint.tickers != u.tickers {
        return Err(Error::InvalidArgument(format!(
            "joint fit tickers do not match {}",
            a.pobs.display()
        )));
    }
    let order = match a.conditioning {
        Conditioning::LowerFirst => ConditioningOrder::LowerFirst,
        Conditioning::HigherFirst => ConditioningOrder::HigherFirst,
    };
    let reports = compare_models(&u, &pairwise, &joint, a.threshold, order, ctx.threads)?;
    let count = |c: GofCategory| reports.iter().filter(|r| r.category == c).count();
    eprintln!(
        "gof: {} pairs; both poor {}, pairwise ok/joint poor {}, joint ok/pairwise poor {}, both ok {}",
        reports.len(),
        count(GofCategory::BothPoor),
        count(GofCategory::PairwiseOkJointPoor),
        count(GofCategory::JointOkPairwisePoor),
        count(GofCategory::BothOk)
    );
    out.json("gof.json", &reports)?;
    Ok(())
}

fn build_zenpath(m: &DependenceMatrix, a: &ZenpathArgs) -> Result<Zenpath> {
    if a.all_pairs {
        let mut z = eulerian_all_pairs(m.dim())?;
        z.scores = z
            .groups
            .iter()
            .map(|g| g.windows(2).map(|w| m.values[w[0]][w[1]]).collect())
            .collect();
        return Ok(z);
    }
    let sectors = match (&a.sectors, a.sector_mode) {
        (Some(p), _) => Some(load_sectors(p)?),
        (None, SectorMode::Any) => None,
        (None, _) => {
            return Err(Error::InvalidArgument("--sector-mode needs --sectors".into()));
        }
    };
    let filter = match a.sector_mode {
        SectorMode::Any => None,
        SectorMode::Within => Some(SectorFilter::Within),
        SectorMode::Cross => Some(SectorFilter::Cross),
        SectorMode::PerSector => {
            let (z, notes) = per_sector_paths(m, sectors.as_ref().expect("checked"))?;
            for n in notes {
                eprintln!("note: {n}");
            }
            return Ok(z);
        }
    };
    let filter = filter.map(|f| (sectors.as_ref().expect("checked"), f));
    let pl = match a.order {
        PathOrder::Desc | PathOrder::Extremes => rank_pairs(m, RankOrder::Descending, filter)?,
        PathOrder::Asc => rank_pairs(m, RankOrder::Ascending, filter)?,
    };
    let pl = match a.order {
        PathOrder::Extremes => extreme_pairs(&pl, a.top, a.bottom)?,
        _ => extreme_pairs(&pl, a.top.min(pl.len()), 0)?,
    };
    Ok(connect_pairs(&pl, a.dedup))
}

fn zenpath(out: &mut Output, a: &ZenpathArgs) -> Result<()> {
    let m = DependenceMatrix::read_json(&a.matrix)?;
    let z = build_zenpath(&m, a)?;
    out.json(&a.out, &z.to_json(&m.tickers))?;
    Ok(())
}

fn scatter_plot(u: &Table, z: &Zenpath, dirs: Option<&DirectionSeq>, width: usize, style: &Style) -> Result<String> {
    let grid = layout(z, dirs, width)?;
    let panels = grid
        .panels()
        .iter()
        .map(|c| {
            let (h, v) = (c.horizontal.expect("panel axis"), c.vertical.expect("panel axis"));
            scatter_panel(&u.columns[h], &u.columns[v])
        })
        .collect::<Result<Vec<_>>>()?;
    render(&grid, &panels, &u.tickers, style)
}

fn order_columns(tickers: &[String], order_by: Option<&Path>) -> Result<Vec<usize>> {
    let Some(path) = order_by else {
        return Ok((0..tickers.len()).collect());
    };
    let scores: Vec<ScoreRecord> = read_json(path)?;
    scores
        .iter()
        .map(|s| {
            tickers
                .iter()
                .position(|t| *t == s.ticker)
                .ok_or_else(|| Error::InvalidArgument(format!("unknown ticker \"{}\" in {}", s.ticker, path.display())))
        })
        .collect()
}

fn zenplot(ctx: &Ctx, out: &mut Output, a: &ZenplotArgs) -> Result<()> {
    let table = read_table(&a.input)?;
    let style = load_style(a.style.as_deref())?;
    let (dirs, leading) = parse_dirs(a.dirs.as_deref(), a.interleaved)?;
    let svg = match a.panel {
        PanelArg::Scatter => {
            if leading.is_some() {
                return Err(Error::InvalidArgument(
                    "scatter zenplots start at a 2D panel; give an even number of interleaved moves".into(),
                ));
            }
            let z = match &a.zenpath {
                Some(p) => {
                    let j: ZenpathJson = read_json(p)?;
                    Zenpath::from_json(&j, &table.tickers)?
                }
                None => Zenpath::chain(table.tickers.len()),
            };
            scatter_plot(&table, &z, dirs.as_ref(), a.width, &style)?
        }
        PanelArg::Acf | PanelArg::Qq => {
            let order = order_columns(&table.tickers, a.order_by.as_deref())?;
            let names: Vec<String> = order.iter().map(|&j| table.tickers[j].clone()).collect();
            let plot = SequencePlot {
                dirs: dirs.as_ref(),
                leading,
                width: a.width,
                style: &style,
            };
            if a.panel == PanelArg::Acf {
                let cols: Vec<&Vec<f64>> = order.iter().map(|&j| &table.columns[j]).collect();
                acf_plot(&cols, names, a.acf_lags, &plot)?
            } else {
                let fits_path = a
                    .fits
                    .as_ref()
                    .ok_or_else(|| Error::InvalidArgument("--panel qq needs --fits".into()))?;
                let fits: Vec<FitRecord> = read_json(fits_path)?;
                let nus = nu_by_ticker(&fits, &table.tickers)?;
                let cols: Vec<(usize, &Vec<f64>, f64)> =
                    order.iter().map(|&j| (j, &table.columns[j], nus[j])).collect();
                qq_plot(ctx, &cols, names, a.nsim, &plot)?
            }
        }
    };
    out.text(&a.out, &svg)?;
    Ok(())
}

fn pipeline(ctx: &Ctx, out: &mut Output, a: &PipelineArgs) -> Result<()> {
    let (prices, sectors) = match &a.prices {
        Some(p) => (load_prices(p)?, a.sectors.as_deref().map(load_sectors).transpose()?),
        None => {
            let prices = parse_prices(BUNDLED_PRICES.as_bytes(), Path::new("<bundled prices.csv>"))?;
            let sectors = match &a.sectors {
                Some(p) => load_sectors(p)?,
                None => parse_sectors(BUNDLED_SECTORS.as_bytes(), Path::new("<bundled sectors.csv>"))?,
            };
            (prices, Some(sectors))
        }
    };
    let has_sectors = sectors.is_some();
    ingest(out, prices, sectors, a.max_missing)?;
    let p = |name: &str| -> PathBuf { out.path(Path::new(name)) };
    let (returns, residuals, fits, pobs) = (p("returns.csv"), p("residuals.csv"), p("fits.json"), p("pobs.csv"));
    let sectors_path = p("sectors.csv");

    degarch(ctx, out, &returns)?;
    diagnose(
        ctx,
        out,
        &DiagnoseArgs {
            residuals: residuals.clone(),
            fits: fits.clone(),
            returns: Some(returns.clone()),
            max_lag: a.max_lag,
            acf_lags: 30,
            nsim: a.nsim,
            width: a.width,
            style: a.style.clone(),
        },
    )?;
    for m in [Measure::Tau, Measure::RhoS, Measure::LambdaT, Measure::LambdaEmp] {
        depmat(ctx, out, &pobs, m)?;
    }
    fit_joint(out, &pobs)?;
    gof(
        ctx,
        out,
        &GofArgs {
            pobs: pobs.clone(),
            pairfits: out.path(Path::new("pairfits.json")),
            joint: out.path(Path::new("joint.json")),
            threshold: crate::gof::DEFAULT_THRESHOLD,
            conditioning: Conditioning::LowerFirst,
        },
    )?;

    let lambda = out.path(Path::new("depmat-lambda-t.json"));
    let m = DependenceMatrix::read_json(&lambda)?;
    let n_pairs = m.dim() * (m.dim() - 1) / 2;
    let top = a.top.min(n_pairs);
    let base = ZenpathArgs {
        matrix: lambda.clone(),
        order: PathOrder::Extremes,
        top,
        bottom: a.bottom.min(n_pairs - top),
        sector_mode: SectorMode::Any,
        sectors: None,
        dedup: false,
        all_pairs: false,
        out: PathBuf::from("zenpath-extremes.json"),
    };
    let mut paths = vec![base.clone()];
    paths.push(ZenpathArgs {
        all_pairs: true,
        out: PathBuf::from("zenpath-all.json"),
        ..base.clone()
    });
    if has_sectors {
        paths.push(ZenpathArgs {
            sector_mode: SectorMode::PerSector,
            sectors: Some(sectors_path.clone()),
            out: PathBuf::from("zenpath-per-sector.json"),
            ..base.clone()
        });
        paths.push(ZenpathArgs {
            order: PathOrder::Desc,
            sector_mode: SectorMode::Cross,
            sectors: Some(sectors_path),
            out: PathBuf::from("zenpath-cross.json"),
            ..base
        });
    }
    let style = load_style(a.style.as_deref())?;
    let u = read_table(&pobs)?;
    out.text("zenplot-chain.svg", &scatter_plot(&u, &Zenpath::chain(u.tickers.len()), None, a.width, &style)?)?;
    for args in &paths {
        zenpath(out, args)?;
        let j: ZenpathJson = read_json(&out.path(&args.out))?;
        let z = Zenpath::from_json(&j, &u.tickers)?;
        let stem = args.out.to_string_lossy().replace("zenpath-", "zenplot-").replace(".json", ".svg");
        out.text(stem, &scatter_plot(&u, &z, None, a.width, &style)?)?;
    }
    Ok(())
}

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use qrmt::analytic::{AnalyticCurve, ElementKind};
use qrmt::reproduce::{fig1, fig1_params, fig2, fig2_params, theta_grid_for_counts, Fig1, Fig2, FIG1_LAMBDAS};
use qrmt::sampler::map_batch;
use qrmt::spectral::eigenvalues;
use qrmt::EnsembleParams;
use serde::Serialize;

use crate::args::ParamArgs;
use crate::error::{CliError, CliResult};
use crate::output::{
    ensure_dir, fmt_num, param_meta, write_output, CsvTable, ManifestParams, RunManifest, TOOL_VERSION,
};
use crate::svg::{line_plot, Series};

#[derive(Debug, Clone, Args)]
pub struct SampleArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// Number of matrices.
    #[arg(long, default_value_t = 1000)]
    pub count: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Output directory.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    /// Also write the upper triangle of every matrix to `matrices.csv`.
    #[arg(long)]
    pub raw: bool,
}

pub fn sample(a: &SampleArgs, command: String) -> CliResult<()> {
    let params = a.params.build()?;
    if a.count == 0 {
        return Err(CliError::Param("--count must be at least 1".into()));
    }
    let n = params.n();
    ensure_dir(&a.out)?;
    let mut manifest = RunManifest::start(command, ManifestParams::One(params), Some(a.seed), a.count);
    let raw = a.raw;
    let draws = map_batch(&params, a.seed, a.count, |s| {
        let upper: Vec<f64> = if raw {
            (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).map(|(i, j)| s.h.get(i, j)).collect()
        } else {
            Vec::new()
        };
        Ok((eigenvalues(&s.h), upper))
    })?;

    let header: Vec<String> = (1..=n).map(|i| format!("e{i}")).collect();
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    let mut spectra = with_meta(CsvTable::new(&header), &params, "spectra").meta("seed", a.seed).meta("count", a.count);
    for (e, _) in &draws {
        spectra.push(e.iter().copied());
    }
    manifest.outputs.push(write_output(&a.out, "spectra.csv", spectra.render().as_bytes())?);

    if raw {
        let cols: Vec<String> = (0..n).flat_map(|i| (i..n).map(move |j| format!("h{}_{}", i + 1, j + 1))).collect();
        let cols: Vec<&str> = cols.iter().map(String::as_str).collect();
        let mut m = with_meta(CsvTable::new(&cols), &params, "matrices").meta("seed", a.seed).meta("count", a.count);
        for (_, u) in &draws {
            m.push(u.iter().copied());
        }
        manifest.outputs.push(write_output(&a.out, "matrices.csv", m.render().as_bytes())?);
    }
    let path = manifest.finish(&a.out)?;
    println!("wrote {} spectra of N={n} to {}", a.count, path.display());
    Ok(())
}

fn with_meta(t: CsvTable, p: &EnsembleParams, kind: &str) -> CsvTable {
    let mut t = t.meta("tool", TOOL_VERSION).meta("data", kind);
    t.meta.extend(param_meta(p));
    t
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct CurveOut {
    /// Output directory.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Also render `plot.svg`.
    #[arg(long)]
    pub svg: bool,
    /// Grid points.
    #[arg(long, default_value_t = 401)]
    pub points: usize,
}

#[derive(Debug, Clone, Args)]
pub struct DensityArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// Grid half-width; defaults to 1.5 times the semicircle radius.
    #[arg(long)]
    pub e_max: Option<f64>,
    #[command(flatten)]
    pub output: CurveOut,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ElementArg {
    Diagonal,
    OffDiagonal,
}

#[derive(Debug, Clone, Args)]
pub struct ElementArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long, value_enum, default_value_t = ElementArg::Diagonal)]
    pub kind: ElementArg,
    /// Grid half-width; defaults to `10/sqrt(alpha)`.
    #[arg(long)]
    pub x_max: Option<f64>,
    /// Tabulate the characteristic function on `[0, x-max]` instead.
    #[arg(long)]
    pub char_fn: bool,
    #[command(flatten)]
    pub output: CurveOut,
}

#[derive(Debug, Clone, Args)]
pub struct GapArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// Largest mean level count `s`; must stay below N.
    #[arg(long, default_value_t = 4.0)]
    pub s_max: f64,
    #[command(flatten)]
    pub output: CurveOut,
}

/// `points` abscissae on `[-half, half]`, exactly antisymmetric.
pub fn symmetric_grid(half: f64, points: usize) -> Vec<f64> {
    let m = (points - 1) as f64;
    (0..points).map(|i| half * (2.0 * i as f64 - m) / m).collect()
}

fn check_grid(half: f64, points: usize, flag: &str) -> CliResult<()> {
    if points < 2 {
        return Err(CliError::Param("--points must be at least 2".into()));
    }
    if !(half > 0.0 && half.is_finite()) {
        return Err(CliError::Param(format!("{flag} must be finite and positive, got {half}")));
    }
    Ok(())
}

pub fn density(a: &DensityArgs, command: String) -> CliResult<()> {
    let p = a.params.build()?;
    let manifest = RunManifest::start(command, ManifestParams::One(p), None, 0);
    let half = a.e_max.unwrap_or_else(|| 1.5 * (2.0 * p.n() as f64 / p.alpha()).sqrt());
    check_grid(half, a.output.points, "--e-max")?;
    let curve = AnalyticCurve::level_density(&p, &symmetric_grid(half, a.output.points))?;
    write_curve(&curve, &a.output, "E", "rho(E)", manifest)
}

pub fn element(a: &ElementArgs, command: String) -> CliResult<()> {
    let p = a.params.build()?;
    let manifest = RunManifest::start(command, ManifestParams::One(p), None, 0);
    let kind = match a.kind {
        ElementArg::Diagonal => ElementKind::Diagonal,
        ElementArg::OffDiagonal => ElementKind::OffDiagonal,
    };
    let half = a.x_max.unwrap_or(10.0 / p.alpha().sqrt());
    check_grid(half, a.output.points, "--x-max")?;
    let m = (a.output.points - 1) as f64;
    let curve = if a.char_fn {
        let grid: Vec<f64> = (0..a.output.points).map(|i| half * i as f64 / m).collect();
        AnalyticCurve::char_fn(&p, &grid, kind)?
    } else {
        AnalyticCurve::element_pdf(&p, &symmetric_grid(half, a.output.points), kind)?
    };
    let (x, y) = if a.char_fn { ("k", "F(k)") } else { ("h", "p(h)") };
    write_curve(&curve, &a.output, x, y, manifest)
}

pub fn gap(a: &GapArgs, command: String) -> CliResult<()> {
    let p = a.params.build()?;
    let manifest = RunManifest::start(command, ManifestParams::One(p), None, 0);
    if !(a.s_max > 0.0 && a.s_max < p.n() as f64) {
        return Err(CliError::Param(format!("--s-max must lie in (0, N={}), got {}", p.n(), a.s_max)));
    }
    if a.output.points < 2 {
        return Err(CliError::Param("--points must be at least 2".into()));
    }
    let thetas = theta_grid_for_counts(&p, a.s_max, a.output.points)?;
    let curve = AnalyticCurve::gap(&p, &thetas)?;
    write_curve(&curve, &a.output, "s", "E(s)", manifest)
}

fn write_curve(
    curve: &AnalyticCurve,
    out: &CurveOut,
    x_label: &str,
    y_label: &str,
    mut manifest: RunManifest,
) -> CliResult<()> {
    ensure_dir(&out.out)?;
    let entry = match out.format {
        Format::Csv => {
            let mut t = with_meta(CsvTable::new(&["x", "y", "err"]), &curve.params, "curve")
                .meta("curve", curve.kind.name())
                .meta("x", x_label)
                .meta("y", y_label)
                .meta("quadrature_error", fmt_num(curve.quadrature_error));
            for i in 0..curve.abscissae.len() {
                t.push([curve.abscissae[i], curve.values[i], curve.errors[i]]);
            }
            write_output(&out.out, "curve.csv", t.render().as_bytes())?
        }
        Format::Json => {
            let mut json = serde_json::to_string_pretty(curve).map_err(|e| CliError::Numeric(e.to_string()))?;
            json.push('\n');
            write_output(&out.out, "curve.json", json.as_bytes())?
        }
    };
    manifest.outputs.push(entry);
    if out.svg {
        let svg = line_plot(
            curve.kind.name(),
            x_label,
            y_label,
            &[Series { label: curve.kind.name().into(), xs: &curve.abscissae, ys: &curve.values, dashed: false }],
        );
        manifest.outputs.push(write_output(&out.out, "plot.svg", svg.as_bytes())?);
    }
    let path = manifest.finish(&out.out)?;
    println!("wrote {} points of {} to {}", curve.values.len(), curve.kind.name(), path.display());
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Figure {
    Fig1,
    Fig2,
}

#[derive(Debug, Clone, Args)]
pub struct ReproduceArgs {
    #[arg(value_enum)]
    pub figure: Figure,
    /// Output directory.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    /// Master seed of the Monte Carlo overlay.
    #[arg(long, default_value_t = 20101)]
    pub seed: u64,
    /// Matrices per simulated ensemble; defaults to 1000 (fig1) or 10000 (fig2).
    #[arg(long)]
    pub samples: Option<usize>,
    /// Skip the Monte Carlo overlay.
    #[arg(long)]
    pub no_simulation: bool,
}

/// One acceptance delta of a figure report.
#[derive(Debug, Clone, Serialize)]
pub struct Criterion {
    pub name: String,
    pub value: f64,
    pub requirement: String,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
struct Report<'a, M: Serialize> {
    figure: &'static str,
    seed: Option<u64>,
    samples: usize,
    criteria: &'a [Criterion],
    metrics: &'a M,
}

fn criterion(name: &str, value: f64, requirement: &str, passed: bool) -> Criterion {
    Criterion { name: name.into(), value, requirement: requirement.into(), passed }
}

pub fn fig1_criteria(f: &Fig1) -> Vec<Criterion> {
    let m = &f.metrics;
    let mut out = vec![
        criterion("lambda=10 sup |rho - rho_sc| / peak", m.sup_rel_lambda10, "< 0.05", m.sup_rel_lambda10 < 0.05),
        criterion(
            "lambda=0.5 log-log tail slope on [3 E_c, 30 E_c]",
            m.tail_slope_lambda05,
            "-2 +- 0.1",
            (m.tail_slope_lambda05 + 2.0).abs() <= 0.1,
        ),
    ];
    for o in &m.overlays {
        out.push(criterion(
            &format!("lambda={} Monte Carlo overlay max |z| on central 80% of mass", o.lambda),
            o.max_z,
            "<= 4",
            o.max_z <= 4.0,
        ));
    }
    out
}

pub fn fig2_criteria(f: &Fig2) -> Vec<Criterion> {
    let m = &f.metrics;
    let mut out = Vec::new();
    if let Some(d) = m.max_abs_dev_s0_4 {
        out.push(criterion("max |E_hat - E| on s in [0, 4]", d, "<= 0.03", d <= 0.03));
    }
    out.push(criterion("min s^2 E(s) on s in [5, 10]", m.s2e_min_5_10, ">= 0.45", m.s2e_min_5_10 >= 0.45));
    out.push(criterion("max s^2 E(s) on s in [5, 10]", m.s2e_max_5_10, "<= 0.55", m.s2e_max_5_10 <= 0.55));
    out
}

fn render_report(figure: &str, criteria: &[Criterion]) -> String {
    let mut s = String::new();
    for c in criteria {
        let _ = writeln!(
            s,
            "{} {figure}: {} = {} (need {})",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            fmt_num(c.value),
            c.requirement
        );
    }
    s
}

pub fn reproduce(a: &ReproduceArgs, command: String) -> CliResult<()> {
    ensure_dir(&a.out)?;
    let samples = a.samples.unwrap_or(match a.figure {
        Figure::Fig1 => 1000,
        Figure::Fig2 => 10_000,
    });
    if samples == 0 && !a.no_simulation {
        return Err(CliError::Param("--samples must be at least 1".into()));
    }
    let sim = (!a.no_simulation).then_some((a.seed, samples));
    let sample_count = if a.no_simulation { 0 } else { samples };
    let seed = sim.map(|s| s.0);

    let params = match a.figure {
        Figure::Fig1 => ManifestParams::Many(fig1_params()?),
        Figure::Fig2 => ManifestParams::One(fig2_params()?),
    };
    let mut manifest = RunManifest::start(command, params, seed, sample_count);
    let (name, criteria, files) = match a.figure {
        Figure::Fig1 => {
            let f = fig1(sim)?;
            let criteria = fig1_criteria(&f);
            let files = fig1_files(&f, &criteria, seed, sample_count)?;
            ("fig1", criteria, files)
        }
        Figure::Fig2 => {
            let f = fig2(sim)?;
            let criteria = fig2_criteria(&f);
            let files = fig2_files(&f, &criteria, seed, sample_count)?;
            ("fig2", criteria, files)
        }
    };
    for (file, bytes) in files {
        manifest.outputs.push(write_output(&a.out, &file, &bytes)?);
    }
    let path = manifest.finish(&a.out)?;
    print!("{}", render_report(name, &criteria));
    println!("wrote {name} data to {}", path.display());
    let failed = criteria.iter().filter(|c| !c.passed).count();
    if failed > 0 {
        return Err(CliError::Acceptance(format!("{name}: {failed} of {} criteria failed", criteria.len())));
    }
    Ok(())
}

type Files = Vec<(String, Vec<u8>)>;

fn report_files<M: Serialize>(
    figure: &'static str,
    criteria: &[Criterion],
    metrics: &M,
    seed: Option<u64>,
    samples: usize,
) -> CliResult<Files> {
    let report = Report { figure, seed, samples, criteria, metrics };
    let mut json = serde_json::to_string_pretty(&report).map_err(|e| CliError::Numeric(e.to_string()))?;
    json.push('\n');
    Ok(vec![
        (format!("{figure}_report.json"), json.into_bytes()),
        (format!("{figure}_report.txt"), render_report(figure, criteria).into_bytes()),
    ])
}

fn fig1_files(f: &Fig1, criteria: &[Criterion], seed: Option<u64>, samples: usize) -> CliResult<Files> {
    let mut header = vec!["E".to_string()];
    header.extend(FIG1_LAMBDAS.iter().map(|l| format!("rho_lambda_{l}")));
    header.push("semicircle_reference".into());
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    let mut t = CsvTable::new(&header)
        .meta("tool", TOOL_VERSION)
        .meta("data", "fig1 level densities, N=50, alpha=N^(2/sigma)/2")
        .meta("reference", format!("semicircle at alpha (lambda-1)/lambda = {}", fmt_num(f.reference.params.alpha())));
    for (i, &e) in f.reference.abscissae.iter().enumerate() {
        let mut row = vec![e];
        row.extend(f.curves.iter().map(|c| c.values[i]));
        row.push(f.reference.values[i]);
        t.push(row);
    }
    let mut files = vec![("fig1_curves.csv".to_string(), t.render().into_bytes())];

    if !f.metrics.overlays.is_empty() {
        let mut o = CsvTable::new(&["lambda", "E", "empirical", "std_error", "analytic"])
            .meta("tool", TOOL_VERSION)
            .meta("data", "fig1 Monte Carlo overlay, central 80% of the level mass")
            .meta("seed", seed.map(|s| s.to_string()).unwrap_or_default())
            .meta("samples", samples);
        for ov in &f.metrics.overlays {
            for i in 0..ov.centers.len() {
                o.push([ov.lambda, ov.centers[i], ov.empirical[i], ov.std_errors[i], ov.analytic[i]]);
            }
        }
        files.push(("fig1_overlay.csv".into(), o.render().into_bytes()));
    }

    let labels: Vec<String> = FIG1_LAMBDAS.iter().map(|l| format!("lambda = {l}")).collect();
    let mut series: Vec<Series> = f
        .curves
        .iter()
        .zip(&labels)
        .map(|(c, l)| Series { label: l.clone(), xs: &c.abscissae, ys: &c.values, dashed: false })
        .collect();
    series.push(Series {
        label: "semicircle".into(),
        xs: &f.reference.abscissae,
        ys: &f.reference.values,
        dashed: true,
    });
    files.push(("fig1.svg".into(), line_plot("level density, N = 50", "E", "rho(E)", &series).into_bytes()));
    files.extend(report_files("fig1", criteria, &f.metrics, seed, samples)?);
    Ok(files)
}

fn fig2_files(f: &Fig2, criteria: &[Criterion], seed: Option<u64>, samples: usize) -> CliResult<Files> {
    let mut t = CsvTable::new(&["theta", "s", "analytic", "asymptote", "goe", "simulated", "simulated_std_error"])
        .meta("tool", TOOL_VERSION)
        .meta("data", "fig2 gap probability");
    t.meta.extend(param_meta(&f.params));
    t = t.meta("seed", seed.map(|s| s.to_string()).unwrap_or_default()).meta("samples", samples);
    for r in &f.rows {
        t.rows.push(vec![
            Some(r.theta),
            Some(r.s),
            Some(r.analytic),
            Some(r.asymptote),
            Some(r.goe),
            r.simulated,
            r.simulated_std_error,
        ]);
    }
    let mut files = vec![("fig2.csv".to_string(), t.render().into_bytes())];

    let s: Vec<f64> = f.rows.iter().map(|r| r.s).collect();
    let col = |g: fn(&qrmt::reproduce::Fig2Row) -> f64| f.rows.iter().map(g).collect::<Vec<f64>>();
    let analytic = col(|r| r.analytic);
    let asymptote: Vec<f64> = f.rows.iter().map(|r| if r.s >= 1.0 { r.asymptote } else { f64::NAN }).collect();
    let goe = col(|r| r.goe);
    let simulated = col(|r| r.simulated.unwrap_or(f64::NAN));
    let mut series = vec![
        Series { label: "E(s), lambda = 1".into(), xs: &s, ys: &analytic, dashed: false },
        Series { label: "1/(2 s^2)".into(), xs: &s, ys: &asymptote, dashed: true },
        Series { label: "GOE".into(), xs: &s, ys: &goe, dashed: true },
    ];
    if f.rows.first().is_some_and(|r| r.simulated.is_some()) {
        series.push(Series { label: "simulation".into(), xs: &s, ys: &simulated, dashed: false });
    }
    files.push(("fig2.svg".into(), line_plot("gap probability, N = 20", "s", "E(s)", &series).into_bytes()));
    files.extend(report_files("fig2", criteria, &f.metrics, seed, samples)?);
    Ok(files)
}

//! Surface geometry in the first Heisenberg group from the command line:
//! frame fields, characteristic traces, areas, variations, and stability.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use h1geom::characteristic::{
    straightness_residual, trace_characteristic, trace_tgraph_characteristic,
};
use h1geom::surface::{ChartKind, Rect};
use h1geom::variation::{
    area, first_variation_fd, first_variation_general, first_variation_graph, first_variation_h,
    instability_search, mean_curvature, q_function, Bump1d, StabilityVerdict, SurfaceField,
    TestFunction,
};
use h1geom::{Error, FrameVector, NumericParams, Point, SurfaceChart};
use h1geom_cli::report::{emit, Csv, Report};
use h1geom_cli::verify::CheckOutcome;
use h1geom_cli::{spec, verify, CliError};
use serde::{Deserialize, Serialize};

const P: NumericParams = NumericParams {
    singular_tol: 1e-8,
    fd_step: 1e-4,
};

#[derive(Parser)]
#[command(
    name = "h1geom",
    version,
    about = "Surface geometry in the first Heisenberg group: frames, \
             characteristic foliations, sub-Riemannian areas, first and \
             second variations."
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Frame fields on a grid, with a singular-set scan (CSV + JSON).
    Analyze(CommonArgs),
    /// Trace one characteristic curve through a start point (CSV + JSON).
    Trace(TraceArgs),
    /// Sub-Riemannian area of a region by composite Simpson quadrature.
    Area(CommonArgs),
    /// First variation of area under a compactly supported bump, computed
    /// by every available route.
    Variation(VariationArgs),
    /// Index-form mode sweep of a ruled strip.
    Stability(StabilityArgs),
    /// Run named verification checks; nonzero exit on any failure.
    Verify(VerifyArgs),
}

#[derive(Args, Default)]
struct CommonArgs {
    /// Built-in name ("helicoid", "vertical_plane(0.7)", ...) or a JSON
    /// surface spec path.
    #[arg(long)]
    surface: Option<String>,
    /// Window lo1,hi1,lo2,hi2 in chart parameters; built-ins adopt it as
    /// their domain.
    #[arg(long, allow_hyphen_values = true)]
    region: Option<String>,
    /// Grid "n" or "n1,n2"; quadrature grids should be odd.
    #[arg(long)]
    grid: Option<String>,
    /// Tolerance behind the report verdict.
    #[arg(long)]
    tol: Option<f64>,
    /// Output prefix: writes <out>.json, and <out>.csv for table commands;
    /// stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON file with defaults for these flags; explicit flags win.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct TraceArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Start point "p1,p2" in chart parameters; domain center when omitted.
    #[arg(long, allow_hyphen_values = true)]
    start: Option<String>,
    /// Trace parameter range "lo,hi" relative to the start.
    #[arg(long, allow_hyphen_values = true)]
    range: Option<String>,
    /// Integration step.
    #[arg(long)]
    step: Option<f64>,
}

#[derive(Args)]
struct VariationArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Bump "c1,c2,h1,h2": center and half-widths of the perturbation.
    #[arg(long, allow_hyphen_values = true)]
    bump: Option<String>,
}

#[derive(Args)]
struct StabilityArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Largest mode index swept.
    #[arg(long)]
    k_max: Option<usize>,
    /// Seed profile "center,half" along the strip parameter.
    #[arg(long, allow_hyphen_values = true)]
    bump: Option<String>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Run only checks whose name contains this substring.
    #[arg(long)]
    only: Option<String>,
}

/// Flag defaults read from `--config`.
#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    surface: Option<String>,
    region: Option<[f64; 4]>,
    grid: Option<[usize; 2]>,
    tol: Option<f64>,
    out: Option<PathBuf>,
    k_max: Option<usize>,
    start: Option<[f64; 2]>,
    range: Option<[f64; 2]>,
    step: Option<f64>,
    bump: Option<Vec<f64>>,
    only: Option<String>,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("{e}");
            match e {
                CliError::Config(_) => ExitCode::from(2),
                CliError::Compute(_) => ExitCode::from(3),
            }
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Cmd::Analyze(args) => cmd_analyze(args),
        Cmd::Trace(args) => cmd_trace(args),
        Cmd::Area(args) => cmd_area(args),
        Cmd::Variation(args) => cmd_variation(args),
        Cmd::Stability(args) => cmd_stability(args),
        Cmd::Verify(args) => cmd_verify(args),
    }
}

fn parse_floats(s: &str, n: usize, what: &str) -> Result<Vec<f64>, CliError> {
    let v: Vec<f64> = s
        .split(',')
        .map(|a| a.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|e| CliError::Config(format!("{what}: {e}")))?;
    if v.len() != n {
        return Err(CliError::Config(format!(
            "{what}: expected {n} comma-separated values, got {}",
            v.len()
        )));
    }
    Ok(v)
}

fn region_rect(v: [f64; 4]) -> Result<Rect, CliError> {
    Rect::new([v[0], v[2]], [v[1], v[3]]).map_err(|e| CliError::Config(format!("region: {e}")))
}

fn parse_grid(s: &str) -> Result<[usize; 2], CliError> {
    let parts: Vec<usize> = s
        .split(',')
        .map(|a| a.trim().parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|e| CliError::Config(format!("grid: {e}")))?;
    match parts.as_slice() {
        [n] => Ok([*n, *n]),
        [n1, n2] => Ok([*n1, *n2]),
        _ => Err(CliError::Config("grid: expected \"n\" or \"n1,n2\"".into())),
    }
}

fn load_config(path: Option<&PathBuf>) -> Result<FileConfig, CliError> {
    match path {
        None => Ok(FileConfig::default()),
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?;
            serde_json::from_str(&text)
                .map_err(|e| CliError::Config(format!("{}: {e}", p.display())))
        }
    }
}

/// Flag values after merging in config-file defaults.
struct Resolved {
    surface: String,
    chart: SurfaceChart,
    region: Option<Rect>,
    grid: Option<[usize; 2]>,
    tol: Option<f64>,
    out: Option<PathBuf>,
    file: FileConfig,
}

fn resolve(common: CommonArgs) -> Result<Resolved, CliError> {
    let file = load_config(common.config.as_ref())?;
    let surface = common
        .surface
        .or_else(|| file.surface.clone())
        .ok_or_else(|| CliError::Config("missing --surface".into()))?;
    let region = match common.region {
        Some(s) => {
            let v = parse_floats(&s, 4, "--region")?;
            Some(region_rect([v[0], v[1], v[2], v[3]])?)
        }
        None => match file.region {
            Some(v) => Some(region_rect(v)?),
            None => None,
        },
    };
    let grid = match common.grid {
        Some(s) => Some(parse_grid(&s)?),
        None => file.grid,
    };
    let chart = spec::resolve(&surface, region)?;
    Ok(Resolved {
        surface,
        chart,
        region,
        grid,
        tol: common.tol.or(file.tol),
        out: common.out.or_else(|| file.out.clone()),
        file,
    })
}

/// The integration window: explicit region, or the chart domain.
fn window_of(r: &Resolved) -> Rect {
    r.region.unwrap_or_else(|| r.chart.domain())
}

fn cmd_analyze(args: CommonArgs) -> Result<ExitCode, CliError> {
    let r = resolve(args)?;
    let window = window_of(&r);
    let grid = r.grid.unwrap_or([41, 41]);
    if grid[0] < 2 || grid[1] < 2 {
        return Err(CliError::Config("grid must be at least 2 per axis".into()));
    }
    let tol = r.tol.unwrap_or(1e-10);

    let mut csv = Csv::new("p1,p2,nh,nt,q,H,singular");
    let mut q_min = f64::INFINITY;
    let mut q_max = f64::NEG_INFINITY;
    let mut h_abs = 0.0f64;
    let mut singular = 0usize;
    for i in 0..grid[0] {
        for j in 0..grid[1] {
            let p = [
                window.lo[0] + (window.hi[0] - window.lo[0]) * i as f64 / (grid[0] - 1) as f64,
                window.lo[1] + (window.hi[1] - window.lo[1]) * j as f64 / (grid[1] - 1) as f64,
            ];
            let n = r.chart.unit_normal(p)?;
            let nh = (n.a * n.a + n.b * n.b).sqrt();
            let nt = n.c;
            let is_singular = nh <= P.singular_tol;
            if is_singular {
                singular += 1;
                csv.row(&[p[0], p[1], nh, nt, f64::NAN, f64::NAN, 1.0]);
                continue;
            }
            let q = q_function(&r.chart, p, &P).unwrap_or(f64::NAN);
            let h = mean_curvature(&r.chart, p, &P).unwrap_or(f64::NAN);
            if q.is_finite() {
                q_min = q_min.min(q);
                q_max = q_max.max(q);
            }
            if h.is_finite() {
                h_abs = h_abs.max(h.abs());
            }
            csv.row(&[p[0], p[1], nh, nt, q, h, 0.0]);
        }
    }

    let q_sign = if q_max == f64::NEG_INFINITY {
        "q-unsampled"
    } else if q_min.abs().max(q_max.abs()) <= tol {
        "q-zero"
    } else if q_min >= -tol {
        "q-nonnegative"
    } else if q_max <= tol {
        "q-nonpositive"
    } else {
        "q-mixed"
    };
    let sing = if singular > 0 {
        "singular-set-nonempty"
    } else {
        "regular"
    };

    let report = Report::new(&r.surface, "analyze", grid)
        .with_region(&window)
        .set_value(if q_max == f64::NEG_INFINITY {
            f64::NAN
        } else {
            q_max
        })
        .term("q_min", q_min)
        .term("q_max", q_max)
        .term("mean_curvature_abs_max", h_abs)
        .term("singular_count", singular as f64)
        .tolerance("q_sign", tol)
        .verdict(&format!("{sing}; {q_sign}"));
    emit(r.out.as_deref(), &report, Some(&csv))?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_trace(args: TraceArgs) -> Result<ExitCode, CliError> {
    let r = resolve(args.common)?;
    let domain = r.chart.domain();
    let start = match args.start {
        Some(s) => {
            let v = parse_floats(&s, 2, "--start")?;
            [v[0], v[1]]
        }
        None => r.file.start.unwrap_or_else(|| domain.center()),
    };
    let range = match args.range {
        Some(s) => {
            let v = parse_floats(&s, 2, "--range")?;
            [v[0], v[1]]
        }
        None => r.file.range.unwrap_or_else(|| {
            let half = 0.4 * (domain.hi[1] - domain.lo[1]).min(domain.hi[0] - domain.lo[0]) / 2.0;
            [-half, half]
        }),
    };
    let step = args.step.or(r.file.step).unwrap_or(1e-3);
    let tol = r.tol.unwrap_or(1e-6);

    let (params, points, truncated) = trace_curve(&r.chart, start, range, step)?;
    let straightness = straightness_residual(&points)?;

    let mut csv = Csv::new("p1,p2,x,y,t,straightness,horizontality");
    let mut horiz_max = 0.0f64;
    for i in 0..points.len() {
        let horiz = if i == 0 || i + 1 == points.len() {
            f64::NAN
        } else {
            let (a, b) = (points[i - 1], points[i + 1]);
            let v = [
                (b.x - a.x) / (2.0 * step),
                (b.y - a.y) / (2.0 * step),
                (b.t - a.t) / (2.0 * step),
            ];
            let c = FrameVector::from_euclidean(v, points[i]).c.abs();
            horiz_max = horiz_max.max(c);
            c
        };
        csv.row(&[
            params[i][0],
            params[i][1],
            points[i].x,
            points[i].y,
            points[i].t,
            straightness,
            horiz,
        ]);
    }

    let report = Report::new(&r.surface, "trace", [points.len(), 1])
        .with_region(&domain)
        .set_value(straightness)
        .term("straightness", straightness)
        .term("horizontality_max", horiz_max)
        .term("truncated", if truncated { 1.0 } else { 0.0 })
        .tolerance("straightness", tol)
        .verdict(if straightness <= tol {
            "straight"
        } else {
            "curved"
        });
    emit(r.out.as_deref(), &report, Some(&csv))?;
    Ok(ExitCode::SUCCESS)
}

/// Chart parameters, ambient points, and whether the domain cut the trace
/// short.
type Traced = (Vec<[f64; 2]>, Vec<Point>, bool);

fn trace_curve(
    chart: &SurfaceChart,
    start: [f64; 2],
    range: [f64; 2],
    step: f64,
) -> Result<Traced, CliError> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(CliError::Config("step must be positive".into()));
    }
    match chart.kind() {
        ChartKind::IntrinsicGraph => {
            let c = trace_characteristic(chart, start, range, step)?;
            Ok((c.params, c.points, c.truncated))
        }
        ChartKind::TGraph => {
            let c = trace_tgraph_characteristic(chart, start, range, step)?;
            Ok((c.params, c.points, c.truncated))
        }
        ChartKind::Ruled => {
            let dom = chart.domain();
            if !dom.contains(start) {
                return Err(Error::OutsideDomain {
                    p1: start[0],
                    p2: start[1],
                }
                .into());
            }
            let want_lo = start[1] + range[0];
            let want_hi = start[1] + range[1];
            let lo = want_lo.max(dom.lo[1]);
            let hi = want_hi.min(dom.hi[1]);
            let n = ((hi - lo) / step).floor().max(1.0) as usize;
            let params: Vec<[f64; 2]> = (0..=n).map(|i| [start[0], lo + step * i as f64]).collect();
            let points = params.iter().map(|&p| chart.point(p)).collect();
            let truncated = lo > want_lo + 1e-12 || hi < want_hi - 1e-12;
            Ok((params, points, truncated))
        }
    }
}

fn cmd_area(args: CommonArgs) -> Result<ExitCode, CliError> {
    let r = resolve(args)?;
    let window = window_of(&r);
    let grid = r.grid.unwrap_or([101, 101]);
    let tol = r.tol.unwrap_or(1e-8);

    let coarse = area(&r.chart, &window, grid)?;
    let refined_grid = [2 * grid[0] - 1, 2 * grid[1] - 1];
    let refined = area(&r.chart, &window, refined_grid)?;
    let gap = (refined - coarse).abs();

    let report = Report::new(&r.surface, "area", grid)
        .with_region(&window)
        .set_value(coarse)
        .term("refined", refined)
        .term("refinement_gap", gap)
        .tolerance("refinement_gap", tol)
        .verdict(if gap <= tol {
            "converged"
        } else {
            "unconverged"
        });
    emit(r.out.as_deref(), &report, None)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_variation(args: VariationArgs) -> Result<ExitCode, CliError> {
    let r = resolve(args.common)?;
    let window = window_of(&r);
    let grid = r.grid.unwrap_or([81, 81]);
    let tol = r.tol.unwrap_or(1e-4);

    let (center, half) = match args.bump {
        Some(s) => {
            let v = parse_floats(&s, 4, "--bump")?;
            ([v[0], v[1]], [v[2], v[3]])
        }
        None => match &r.file.bump {
            Some(v) if v.len() == 4 => ([v[0], v[1]], [v[2], v[3]]),
            Some(_) => return Err(CliError::Config("bump: expected 4 values".into())),
            None => {
                let ext = window.extent();
                (window.center(), [0.35 * ext[0], 0.35 * ext[1]])
            }
        },
    };
    let phi = TestFunction::bump(center, half).map_err(|e| CliError::Config(e.to_string()))?;

    let flow = match r.chart.kind() {
        ChartKind::IntrinsicGraph => SurfaceField::intrinsic_graph_flow(&phi),
        ChartKind::TGraph => SurfaceField::t_graph_flow(&phi),
        ChartKind::Ruled => {
            return Err(CliError::Config(
                "variation needs a graph chart; ruled strips carry no graph perturbation".into(),
            ))
        }
    };

    let analytic = first_variation_graph(&r.chart, &phi, &window, grid, &P)?;
    let fd = first_variation_fd(&r.chart, &phi, grid, 1e-3)?;
    let general = first_variation_general(&r.chart, &flow, &window, grid, &P)?;
    let h_form = first_variation_h(&r.chart, &flow, &window, grid, &P)?;
    let spread = (analytic - fd)
        .abs()
        .max((analytic - general).abs())
        .max((analytic - h_form).abs())
        .max((general - h_form).abs());

    let report = Report::new(&r.surface, "variation", grid)
        .with_region(&window)
        .set_value(analytic)
        .term("difference_quotient", fd)
        .term("frame_route", general)
        .term("curvature_route", h_form)
        .term("spread", spread)
        .term("bump_center_1", center[0])
        .term("bump_center_2", center[1])
        .tolerance("spread", tol)
        .verdict(if spread <= tol {
            "consistent"
        } else {
            "inconsistent"
        });
    emit(r.out.as_deref(), &report, None)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_stability(args: StabilityArgs) -> Result<ExitCode, CliError> {
    let r = resolve(args.common)?;
    let strip = match &r.chart {
        SurfaceChart::Ruled(rc) => rc.clone(),
        _ => {
            return Err(CliError::Config(
                "stability sweeps need a ruled chart".into(),
            ))
        }
    };
    let grid = r.grid.unwrap_or([41, 81]);
    let k_max = args.k_max.or(r.file.k_max).unwrap_or(4).max(1);
    let profile = match args.bump {
        Some(s) => {
            let v = parse_floats(&s, 2, "--bump")?;
            Bump1d::smooth(v[0], v[1])
        }
        None => match &r.file.bump {
            Some(v) if v.len() == 2 => Bump1d::smooth(v[0], v[1]),
            Some(_) => return Err(CliError::Config("bump: expected 2 values".into())),
            None => {
                let mid = 0.5 * (strip.eps_range[0] + strip.eps_range[1]);
                let half = (0.4 * (strip.eps_range[1] - strip.eps_range[0])).min(1.0);
                Bump1d::smooth(mid, half)
            }
        },
    };

    let sweep = instability_search(&strip, &profile, k_max, grid)?;
    let mut report = Report::new(&r.surface, "stability", grid)
        .term("q_min", sweep.q_range[0])
        .term("q_max", sweep.q_range[1]);
    let mut min_value = f64::INFINITY;
    for (i, rep) in sweep.reports.iter().enumerate() {
        min_value = min_value.min(rep.value);
        report = report.term(&format!("Q{}", i + 1), rep.value);
    }
    let verdict = match sweep.verdict {
        StabilityVerdict::Negative { k } => {
            report = report.term("first_negative_k", k as f64);
            "negative"
        }
        StabilityVerdict::NonnegativeUpTo { .. } => "nonnegative",
        StabilityVerdict::ZeroQ => "zero-potential",
    };
    let report = report.set_value(min_value).verdict(verdict);
    emit(r.out.as_deref(), &report, None)?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct VerifyArtifact<'a> {
    operation: &'static str,
    checks: &'a [CheckOutcome],
    passed: usize,
    failed: usize,
}

fn cmd_verify(args: VerifyArgs) -> Result<ExitCode, CliError> {
    let file = load_config(args.common.config.as_ref())?;
    let surface = args.common.surface.or_else(|| file.surface.clone());
    let only = args.only.or_else(|| file.only.clone());
    let out = args.common.out.or_else(|| file.out.clone());

    let outcomes: Vec<CheckOutcome> = match &surface {
        Some(name) => {
            let region = match args.common.region {
                Some(s) => {
                    let v = parse_floats(&s, 4, "--region")?;
                    Some(region_rect([v[0], v[1], v[2], v[3]])?)
                }
                None => None,
            };
            let chart = spec::resolve(name, region)?;
            vec![verify::stationarity_battery(&chart)]
        }
        None => verify::run_suite(only.as_deref()),
    };

    for o in &outcomes {
        let status = if o.passed { "PASS" } else { "FAIL" };
        println!("[{status}] {} (worst margin {:.8e})", o.name, o.margin());
        if !o.passed {
            for p in o.parts.iter().filter(|p| !p.passed) {
                println!(
                    "       {}: residual {:.8e} vs tolerance {:.8e}",
                    p.part, p.residual, p.tolerance
                );
            }
            if let Some(e) = &o.error {
                println!("       error: {e}");
            }
        }
    }
    let passed = outcomes.iter().filter(|o| o.passed).count();
    let failed = outcomes.len() - passed;
    println!("{passed} passed, {failed} failed");

    if let Some(prefix) = out {
        let artifact = VerifyArtifact {
            operation: "verify",
            checks: &outcomes,
            passed,
            failed,
        };
        let mut path = prefix.into_os_string();
        path.push(".json");
        std::fs::write(
            &path,
            serde_json::to_string_pretty(&artifact).expect("verify artifact serializes"),
        )
        .map_err(|e| CliError::Config(format!("{}: {e}", path.to_string_lossy())))?;
    }

    Ok(if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

//! Surface specifications: built-in names like `helicoid` or
//! `vertical_plane(0.7)`, and JSON files describing graph charts by formula
//! or ruled charts by a seed sample table.

use std::fs;
use std::path::Path;

use evalexpr::{
    build_operator_tree, ContextWithMutableFunctions, ContextWithMutableVariables, Function,
    HashMapContext, Node, Value,
};
use h1geom::characteristic::ruled_from_seed;
use h1geom::surface::{builtin, GraphFn, Rect};
use h1geom::{FrameVector, Point, SurfaceChart};
use serde::Deserialize;

use crate::CliError;

/// Default finite-difference step for formula charts without explicit `h`.
const DEFAULT_H: f64 = 1e-5;

/// On-disk surface description.
#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SurfaceSpec {
    /// Graph `t = u(x, y)`; `formula` uses variables `x`, `y`.
    TGraph {
        formula: String,
        /// `[[x_min, x_max], [y_min, y_max]]`.
        domain: [[f64; 2]; 2],
        #[serde(default)]
        d1: Option<String>,
        #[serde(default)]
        d2: Option<String>,
        #[serde(default)]
        h: Option<f64>,
    },
    /// Graph `(x, t) -> (x, u, t - x u)`; `formula` uses variables `x`, `t`.
    IntrinsicGraph {
        formula: String,
        /// `[[x_min, x_max], [t_min, t_max]]`.
        domain: [[f64; 2]; 2],
        #[serde(default)]
        d1: Option<String>,
        #[serde(default)]
        d2: Option<String>,
        #[serde(default)]
        h: Option<f64>,
    },
    /// Ruled strip from a sampled seed curve: points with unit horizontal
    /// ruling directions at uniformly spaced parameter values.
    Ruled {
        eps0: f64,
        step: f64,
        points: Vec<[f64; 3]>,
        dirs: Vec<[f64; 2]>,
        s_range: [f64; 2],
    },
}

/// Evaluation context shared by all formula charts: variables are set per
/// call; the function table is fixed.
fn base_context() -> HashMapContext {
    let mut ctx = HashMapContext::new();
    let unary =
        |f: fn(f64) -> f64| Function::new(move |arg: &Value| Ok(Value::Float(f(arg.as_number()?))));
    for (name, f) in [
        ("sin", f64::sin as fn(f64) -> f64),
        ("cos", f64::cos),
        ("tan", f64::tan),
        ("sqrt", f64::sqrt),
        ("abs", f64::abs),
        ("exp", f64::exp),
        ("ln", f64::ln),
    ] {
        ctx.set_function(name.into(), unary(f)).unwrap();
    }
    ctx.set_function(
        "sgn".into(),
        Function::new(|arg: &Value| {
            let v = arg.as_number()?;
            Ok(Value::Float(if v > 0.0 {
                1.0
            } else if v < 0.0 {
                -1.0
            } else {
                0.0
            }))
        }),
    )
    .unwrap();
    ctx.set_value("pi".into(), Value::Float(std::f64::consts::PI))
        .unwrap();
    ctx
}

/// Compiles `formula` into a chart-ready closure over the two named
/// variables, validating it once at the domain center.
fn compile(
    formula: &str,
    vars: [&'static str; 2],
    probe: [f64; 2],
) -> Result<impl Fn(f64, f64) -> f64 + Send + Sync + Clone, CliError> {
    let node: Node = build_operator_tree(formula)
        .map_err(|e| CliError::Config(format!("formula `{formula}`: {e}")))?;
    let ctx = base_context();

    let eval = move |a: f64, b: f64| -> Result<f64, evalexpr::EvalexprError> {
        let mut c = ctx.clone();
        c.set_value(vars[0].into(), Value::Float(a))?;
        c.set_value(vars[1].into(), Value::Float(b))?;
        node.eval_number_with_context(&c)
    };
    eval(probe[0], probe[1]).map_err(|e| CliError::Config(format!("formula `{formula}`: {e}")))?;
    Ok(move |a: f64, b: f64| eval(a, b).unwrap_or(f64::NAN))
}

fn rect_of(domain: [[f64; 2]; 2]) -> Result<Rect, CliError> {
    Rect::new([domain[0][0], domain[1][0]], [domain[0][1], domain[1][1]])
        .map_err(|e| CliError::Config(format!("domain: {e}")))
}

fn graph_fn(
    formula: &str,
    d1: Option<&str>,
    d2: Option<&str>,
    h: Option<f64>,
    vars: [&'static str; 2],
    rect: &Rect,
) -> Result<GraphFn, CliError> {
    let probe = rect.center();
    let f = compile(formula, vars, probe)?;
    match (d1, d2) {
        (Some(d1), Some(d2)) => Ok(GraphFn::analytic(
            f,
            compile(d1, vars, probe)?,
            compile(d2, vars, probe)?,
        )),
        (None, None) => Ok(GraphFn::numeric(f, h.unwrap_or(DEFAULT_H))),
        _ => Err(CliError::Config(
            "derivative formulas d1 and d2 must be given together".into(),
        )),
    }
}

impl SurfaceSpec {
    pub fn into_chart(self) -> Result<SurfaceChart, CliError> {
        match self {
            SurfaceSpec::TGraph {
                formula,
                domain,
                d1,
                d2,
                h,
            } => {
                let rect = rect_of(domain)?;
                let u = graph_fn(&formula, d1.as_deref(), d2.as_deref(), h, ["x", "y"], &rect)?;
                Ok(SurfaceChart::t_graph(u, rect))
            }
            SurfaceSpec::IntrinsicGraph {
                formula,
                domain,
                d1,
                d2,
                h,
            } => {
                let rect = rect_of(domain)?;
                let u = graph_fn(&formula, d1.as_deref(), d2.as_deref(), h, ["x", "t"], &rect)?;
                Ok(SurfaceChart::intrinsic_graph(u, rect))
            }
            SurfaceSpec::Ruled {
                eps0,
                step,
                points,
                dirs,
                s_range,
            } => {
                if points.len() != dirs.len() {
                    return Err(CliError::Config(
                        "ruled spec needs one direction per seed point".into(),
                    ));
                }
                let pts: Vec<Point> = points
                    .iter()
                    .map(|&[x, y, t]| Point::new(x, y, t))
                    .collect();
                let fv: Vec<FrameVector> = pts
                    .iter()
                    .zip(&dirs)
                    .map(|(p, d)| {
                        let norm = (d[0] * d[0] + d[1] * d[1]).sqrt();
                        if !(norm > 0.0 && norm.is_finite()) {
                            return Err(CliError::Config(
                                "ruled spec: directions must be nonzero".into(),
                            ));
                        }
                        Ok(FrameVector::new(d[0] / norm, d[1] / norm, 0.0, *p))
                    })
                    .collect::<Result<_, _>>()?;
                let chart = ruled_from_seed(&pts, &fv, eps0, step, s_range)
                    .map_err(|e| CliError::Config(format!("ruled spec: {e}")))?;
                Ok(SurfaceChart::ruled(chart))
            }
        }
    }
}

/// Default chart domains used when no `--region` override is given.
fn default_rect(lo: [f64; 2], hi: [f64; 2]) -> Rect {
    Rect::new(lo, hi).expect("static default domain")
}

/// Resolves a `--surface` value: a readable path is parsed as a JSON spec,
/// anything else as a built-in name. `region` overrides the chart domain of
/// built-ins.
pub fn resolve(surface: &str, region: Option<Rect>) -> Result<SurfaceChart, CliError> {
    let path = Path::new(surface);
    if path.is_file() {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        let spec: SurfaceSpec = serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        return spec.into_chart();
    }
    builtin_chart(surface, region)
}

/// Parses `name` or `name(arg, ...)` against the built-in surface table.
fn builtin_chart(text: &str, region: Option<Rect>) -> Result<SurfaceChart, CliError> {
    let text = text.trim();
    let (name, args) = match text.split_once('(') {
        None => (text, Vec::new()),
        Some((name, rest)) => {
            let inner = rest
                .strip_suffix(')')
                .ok_or_else(|| CliError::Config(format!("unbalanced parentheses in `{text}`")))?;
            let args: Vec<f64> = if inner.trim().is_empty() {
                Vec::new()
            } else {
                inner
                    .split(',')
                    .map(|a| a.trim().parse::<f64>())
                    .collect::<Result<_, _>>()
                    .map_err(|e| CliError::Config(format!("arguments of `{text}`: {e}")))?
            };
            (name.trim(), args)
        }
    };

    let need = |n: usize| -> Result<(), CliError> {
        if args.len() == n {
            Ok(())
        } else {
            Err(CliError::Config(format!(
                "`{name}` takes {n} argument(s), got {}",
                args.len()
            )))
        }
    };

    match name {
        "vertical_plane" => {
            need(1)?;
            let dom = region.unwrap_or_else(|| default_rect([-4.0, -4.0], [4.0, 4.0]));
            Ok(builtin::vertical_plane(args[0], dom))
        }
        "paraboloid" => {
            need(0)?;
            let dom = region.unwrap_or_else(|| default_rect([-4.0, -4.0], [4.0, 4.0]));
            Ok(builtin::paraboloid(dom))
        }
        "helicoid" => {
            need(0)?;
            let dom = region.unwrap_or_else(|| default_rect([-3.2, -5.0], [3.2, 5.0]));
            Ok(builtin::helicoid(
                [dom.lo[0], dom.hi[0]],
                [dom.lo[1], dom.hi[1]],
            ))
        }
        "u_lambda" => {
            need(1)?;
            let dom = region.unwrap_or_else(|| default_rect([-4.0, -4.0], [4.0, 4.0]));
            builtin::u_lambda(args[0], dom).map_err(|e| CliError::Config(e.to_string()))
        }
        "v_lambda" => {
            need(1)?;
            let dom = region.unwrap_or_else(|| default_rect([-4.0, 0.05], [4.0, 4.0]));
            builtin::v_lambda(args[0], dom).map_err(|e| CliError::Config(e.to_string()))
        }
        _ => Err(CliError::Config(format!(
            "unknown surface `{name}`; built-ins: vertical_plane(a), paraboloid, \
             helicoid, u_lambda(lambda), v_lambda(lambda)"
        ))),
    }
}

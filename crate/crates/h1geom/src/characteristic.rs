//! Characteristic curves, seed curves and ruled reconstruction.
//!
//! On the regular part of a surface the horizontal tangent direction
//! Z = J(nu_h) integrates to the characteristic foliation; on stationary
//! surfaces its leaves are horizontal straight lines. Seed curves integrate
//! the transversal field S instead and carry enough data to rebuild the
//! surface as a ruled strip.

use crate::error::{Error, Result};
use crate::group::{horizontality_residual, FrameVector, Point};
#[cfg(not(feature = "std"))]
use crate::numeric::Float;
use crate::numeric::{fit_quadratic, linspace};
use crate::surface::{RuledChart, SurfaceChart};
use crate::NumericParams;

use alloc::vec::Vec;

/// Ordered samples of one traced curve on a chart.
#[derive(Clone, Debug)]
pub struct CharacteristicCurve {
    /// Chart parameters of the samples, ordered by increasing parameter.
    pub params: Vec<[f64; 2]>,
    /// Lifted points on the surface.
    pub points: Vec<Point>,
    /// Cumulative Riemannian arc length, zero at the trace start.
    pub arc: Vec<f64>,
    /// Index of the trace start inside `params`.
    pub start_index: usize,
    /// Integration step in the trace parameter.
    pub step: f64,
    /// True when the trace stopped early (domain exit or singular point).
    pub truncated: bool,
}

impl CharacteristicCurve {
    /// Largest vertical frame component of the sampled tangent; the curve
    /// parameter spacing may vary, so the caller supplies the lift speed via
    /// uniform parameter `step`.
    pub fn horizontality(&self) -> Result<f64> {
        horizontality_residual(&self.points, self.step)
    }
}

/// Traces the characteristic of an intrinsic graph through `start`,
/// integrating the projected field `x' = 1, t' = 2u` by classical
/// Runge-Kutta over the parameter range `range` (offsets relative to start).
pub fn trace_characteristic(
    chart: &SurfaceChart,
    start: [f64; 2],
    range: [f64; 2],
    step: f64,
) -> Result<CharacteristicCurve> {
    let u = match chart {
        SurfaceChart::IntrinsicGraph { u, .. } => u,
        _ => return Err(Error::NotAGraphChart),
    };
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::BadStep);
    }
    if !(range[0] <= 0.0 && range[1] >= 0.0 && range[0] < range[1]) {
        return Err(Error::EmptyRegion);
    }
    let domain = chart.domain();
    if !domain.contains(start) {
        return Err(Error::OutsideDomain {
            p1: start[0],
            p2: start[1],
        });
    }

    let slope = |x: f64, t: f64| 2.0 * u.eval(x, t);
    let rk4 = |x: f64, t: f64, h: f64| -> f64 {
        let k1 = slope(x, t);
        let k2 = slope(x + 0.5 * h, t + 0.5 * h * k1);
        let k3 = slope(x + 0.5 * h, t + 0.5 * h * k2);
        let k4 = slope(x + h, t + h * k3);
        t + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    };

    let march = |dir: f64, span: f64| -> (Vec<[f64; 2]>, bool) {
        let mut out = Vec::new();
        let n = (span / step).round() as usize;
        let mut x = start[0];
        let mut t = start[1];
        for _ in 0..n {
            let h = dir * step;
            let tn = rk4(x, t, h);
            let xn = x + h;
            if !tn.is_finite() || !domain.contains([xn, tn]) {
                return (out, true);
            }
            x = xn;
            t = tn;
            out.push([x, t]);
        }
        (out, false)
    };

    let (back, cut_back) = march(-1.0, -range[0]);
    let (fwd, cut_fwd) = march(1.0, range[1]);

    let mut params: Vec<[f64; 2]> = back.into_iter().rev().collect();
    let start_index = params.len();
    params.push(start);
    params.extend(fwd);

    let points: Vec<Point> = params.iter().map(|&p| chart.point(p)).collect();

    // Unit-x speed of the lifted curve is sqrt(1 + (u_x + 2 u u_t)^2).
    let speed: Vec<f64> = params
        .iter()
        .map(|&[x, t]| {
            let (ux, ut) = u.partials(x, t);
            let sigma = ux + 2.0 * u.eval(x, t) * ut;
            (1.0 + sigma * sigma).sqrt()
        })
        .collect();
    let mut arc = Vec::with_capacity(params.len());
    let mut acc = -trapezoid_to_index(&speed, step, start_index);
    for i in 0..params.len() {
        if i > 0 {
            acc += 0.5 * (speed[i - 1] + speed[i]) * step;
        }
        arc.push(acc);
    }

    Ok(CharacteristicCurve {
        params,
        points,
        arc,
        start_index,
        step,
        truncated: cut_back || cut_fwd,
    })
}

fn trapezoid_to_index(speed: &[f64], step: f64, idx: usize) -> f64 {
    let mut acc = 0.0;
    for i in 0..idx {
        acc += 0.5 * (speed[i] + speed[i + 1]) * step;
    }
    acc
}

/// Traces the planar characteristic of a t-graph through `start`, following
/// the unit field `(beta, -alpha) / D` with `alpha = u_x - y`,
/// `beta = u_y + x`. The parameter is arc length; the trace truncates when D
/// falls to the singular floor `1e-6` or the domain is left.
pub fn trace_tgraph_characteristic(
    chart: &SurfaceChart,
    start: [f64; 2],
    range: [f64; 2],
    step: f64,
) -> Result<CharacteristicCurve> {
    const D_FLOOR: f64 = 1e-6;
    let u = match chart {
        SurfaceChart::TGraph { u, .. } => u,
        _ => return Err(Error::NotAGraphChart),
    };
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::BadStep);
    }
    if !(range[0] <= 0.0 && range[1] >= 0.0 && range[0] < range[1]) {
        return Err(Error::EmptyRegion);
    }
    let domain = chart.domain();
    if !domain.contains(start) {
        return Err(Error::OutsideDomain {
            p1: start[0],
            p2: start[1],
        });
    }

    let field = |x: f64, y: f64| -> Option<[f64; 2]> {
        let (ux, uy) = u.partials(x, y);
        let alpha = ux - y;
        let beta = uy + x;
        let d = (alpha * alpha + beta * beta).sqrt();
        if d <= D_FLOOR {
            return None;
        }
        Some([beta / d, -alpha / d])
    };
    let rk4 = |p: [f64; 2], h: f64| -> Option<[f64; 2]> {
        let k1 = field(p[0], p[1])?;
        let k2 = field(p[0] + 0.5 * h * k1[0], p[1] + 0.5 * h * k1[1])?;
        let k3 = field(p[0] + 0.5 * h * k2[0], p[1] + 0.5 * h * k2[1])?;
        let k4 = field(p[0] + h * k3[0], p[1] + h * k3[1])?;
        Some([
            p[0] + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
            p[1] + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
        ])
    };

    let march = |dir: f64, span: f64| -> (Vec<[f64; 2]>, bool) {
        let mut out = Vec::new();
        let n = (span / step).round() as usize;
        let mut p = start;
        for _ in 0..n {
            match rk4(p, dir * step) {
                Some(q) if domain.contains(q) && field(q[0], q[1]).is_some() => {
                    p = q;
                    out.push(q);
                }
                _ => return (out, true),
            }
        }
        (out, false)
    };

    let (back, cut_back) = march(-1.0, -range[0]);
    let (fwd, cut_fwd) = march(1.0, range[1]);

    let mut params: Vec<[f64; 2]> = back.into_iter().rev().collect();
    let start_index = params.len();
    params.push(start);
    params.extend(fwd);
    let points: Vec<Point> = params.iter().map(|&p| chart.point(p)).collect();
    let arc: Vec<f64> = (0..params.len())
        .map(|i| (i as f64 - start_index as f64) * step)
        .collect();

    Ok(CharacteristicCurve {
        params,
        points,
        arc,
        start_index,
        step,
        truncated: cut_back || cut_fwd,
    })
}

/// Total-least-squares line fit through the sampled points: centroid plus
/// principal second-moment direction. Returns the largest sample distance to
/// the fitted line; stationary-surface characteristics give values at
/// discretization level.
pub fn straightness_residual(samples: &[Point]) -> Result<f64> {
    if samples.len() < 3 {
        return Err(Error::TooFewSamples {
            need: 3,
            got: samples.len(),
        });
    }
    let n = samples.len() as f64;
    let mut centroid = [0.0f64; 3];
    for p in samples {
        centroid[0] += p.x;
        centroid[1] += p.y;
        centroid[2] += p.t;
    }
    for c in &mut centroid {
        *c /= n;
    }

    let centered: Vec<[f64; 3]> = samples
        .iter()
        .map(|p| [p.x - centroid[0], p.y - centroid[1], p.t - centroid[2]])
        .collect();
    let spread = centered
        .iter()
        .map(|d| (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt())
        .fold(0.0f64, f64::max);
    if spread < 1e-14 {
        return Err(Error::DegenerateSamples);
    }

    let mut m = [[0.0f64; 3]; 3];
    for d in &centered {
        for i in 0..3 {
            for k in 0..3 {
                m[i][k] += d[i] * d[k];
            }
        }
    }

    // Power iteration for the principal axis, seeded with the end-to-end
    // chord (already exact for collinear clouds).
    let last = samples.len() - 1;
    let chord = [
        samples[last].x - samples[0].x,
        samples[last].y - samples[0].y,
        samples[last].t - samples[0].t,
    ];
    let mut dir = normalize3(chord).unwrap_or([1.0, 0.0, 0.0]);
    for _ in 0..64 {
        let next = [
            m[0][0] * dir[0] + m[0][1] * dir[1] + m[0][2] * dir[2],
            m[1][0] * dir[0] + m[1][1] * dir[1] + m[1][2] * dir[2],
            m[2][0] * dir[0] + m[2][1] * dir[1] + m[2][2] * dir[2],
        ];
        match normalize3(next) {
            Some(u) => dir = u,
            None => break,
        }
    }

    let mut worst = 0.0f64;
    for d in &centered {
        let along = d[0] * dir[0] + d[1] * dir[1] + d[2] * dir[2];
        let perp = [
            d[0] - along * dir[0],
            d[1] - along * dir[1],
            d[2] - along * dir[2],
        ];
        worst = worst.max((perp[0] * perp[0] + perp[1] * perp[1] + perp[2] * perp[2]).sqrt());
    }
    Ok(worst)
}

fn normalize3(v: [f64; 3]) -> Option<[f64; 3]> {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    if n < 1e-300 {
        return None;
    }
    Some([v[0] / n, v[1] / n, v[2] / n])
}

/// An integral curve of S in chart parameters, with the characteristic
/// directions met along the way. Carries everything needed to rebuild the
/// surface as a ruled strip.
#[derive(Clone, Debug)]
pub struct SeedCurve {
    pub params: Vec<[f64; 2]>,
    pub points: Vec<Point>,
    /// Horizontal components (a, b) of Z at each sample.
    pub directions: Vec<[f64; 2]>,
    pub start_index: usize,
    pub step: f64,
    pub truncated: bool,
}

/// Traces the integral curve of S through `start` by classical Runge-Kutta
/// (S is unit, so the trace parameter is arc length). The trace truncates at
/// singular points and domain exits.
pub fn seed_curve(
    chart: &SurfaceChart,
    start: [f64; 2],
    range: [f64; 2],
    step: f64,
    params: &NumericParams,
) -> Result<SeedCurve> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::BadStep);
    }
    if !(range[0] <= 0.0 && range[1] >= 0.0 && range[0] < range[1]) {
        return Err(Error::EmptyRegion);
    }
    chart.frame(start, params)?;
    let domain = chart.domain();

    let rk4 = |p: [f64; 2], h: f64| -> Result<[f64; 2]> {
        let k1 = chart.s_velocity(p, params)?;
        let k2 = chart.s_velocity([p[0] + 0.5 * h * k1[0], p[1] + 0.5 * h * k1[1]], params)?;
        let k3 = chart.s_velocity([p[0] + 0.5 * h * k2[0], p[1] + 0.5 * h * k2[1]], params)?;
        let k4 = chart.s_velocity([p[0] + h * k3[0], p[1] + h * k3[1]], params)?;
        Ok([
            p[0] + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
            p[1] + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
        ])
    };

    let march = |dir: f64, span: f64| -> (Vec<[f64; 2]>, bool) {
        let mut out = Vec::new();
        let n = (span / step).round() as usize;
        let mut p = start;
        for _ in 0..n {
            match rk4(p, dir * step) {
                Ok(q) if domain.contains(q) && chart.frame(q, params).is_ok() => {
                    p = q;
                    out.push(q);
                }
                _ => return (out, true),
            }
        }
        (out, false)
    };

    let (back, cut_back) = march(-1.0, -range[0]);
    let (fwd, cut_fwd) = march(1.0, range[1]);

    let mut pars: Vec<[f64; 2]> = back.into_iter().rev().collect();
    let start_index = pars.len();
    pars.push(start);
    pars.extend(fwd);

    let mut points = Vec::with_capacity(pars.len());
    let mut directions = Vec::with_capacity(pars.len());
    for &p in &pars {
        let fr = chart.frame(p, params)?;
        points.push(fr.point);
        directions.push([fr.z.a, fr.z.b]);
    }

    Ok(SeedCurve {
        params: pars,
        points,
        directions,
        start_index,
        step,
        truncated: cut_back || cut_fwd,
    })
}

/// Builds a ruled strip from seed samples and horizontal unit directions.
/// Directions must be based at the matching seed points, horizontal and unit
/// to within the frame tolerance.
pub fn ruled_from_seed(
    points: &[Point],
    directions: &[FrameVector],
    eps0: f64,
    step: f64,
    s_range: [f64; 2],
) -> Result<RuledChart> {
    if points.len() < 2 {
        return Err(Error::TooFewSamples {
            need: 2,
            got: points.len(),
        });
    }
    if points.len() != directions.len() {
        return Err(Error::TooFewSamples {
            need: points.len(),
            got: directions.len(),
        });
    }
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::BadStep);
    }
    let mut dirs = Vec::with_capacity(directions.len());
    for (p, d) in points.iter().zip(directions) {
        if d.base != *p {
            return Err(Error::BaseMismatch);
        }
        if d.c.abs() > crate::tol::FRAME_UNIT {
            return Err(Error::NotHorizontal { c: d.c });
        }
        let dev = (d.norm() - 1.0).abs();
        if dev > crate::tol::FRAME_UNIT {
            return Err(Error::NotUnit { dev });
        }
        dirs.push([d.a, d.b]);
    }
    Ok(RuledChart::from_validated_samples(
        points.to_vec(),
        dirs,
        eps0,
        step,
        s_range,
    ))
}

/// Convenience wrapper rebuilding a ruled strip straight from a seed curve.
pub fn ruled_from_seed_curve(seed: &SeedCurve, s_range: [f64; 2]) -> Result<RuledChart> {
    let dirs: Vec<FrameVector> = seed
        .points
        .iter()
        .zip(&seed.directions)
        .map(|(p, d)| FrameVector::new(d[0], d[1], 0.0, *p))
        .collect();
    ruled_from_seed(&seed.points, &dirs, 0.0, seed.step, s_range)
}

/// Least-squares quadratic fit of the vertical component of the deformation
/// vector along one ruling.
#[derive(Clone, Copy, Debug)]
pub struct VerticalPoly {
    /// Coefficients (a, b, c) of `a + b s + c s^2`.
    pub coeffs: [f64; 3],
    /// Largest absolute fit residual over the sampled ruling.
    pub fit_residual: f64,
}

impl VerticalPoly {
    pub fn eval(&self, s: f64) -> f64 {
        self.coeffs[0] + self.coeffs[1] * s + self.coeffs[2] * s * s
    }

    pub fn discriminant(&self) -> f64 {
        self.coeffs[1] * self.coeffs[1] - 4.0 * self.coeffs[0] * self.coeffs[2]
    }

    /// True when `a + b s + c s^2` vanishes somewhere in `[lo, hi]`.
    pub fn has_root_in(&self, lo: f64, hi: f64) -> bool {
        let [a, b, c] = self.coeffs;
        if c.abs() < 1e-300 {
            if b.abs() < 1e-300 {
                return a.abs() < crate::tol::POLE;
            }
            let r = -a / b;
            return r >= lo && r <= hi;
        }
        let disc = self.discriminant();
        if disc < 0.0 {
            return false;
        }
        let sq = disc.sqrt();
        let r1 = (-b - sq) / (2.0 * c);
        let r2 = (-b + sq) / (2.0 * c);
        (r1 >= lo && r1 <= hi) || (r2 >= lo && r2 <= hi)
    }
}

/// Fits the vertical component `s -> <V_eps(s), T>` of a ruled strip over
/// `n_samples >= 7` evenly spaced stations of the s-range. The component is
/// quadratic in s for exact ruled data; a residual above the quadratic-fit
/// tolerance is an error.
pub fn vertical_component_poly(
    chart: &RuledChart,
    eps: f64,
    n_samples: usize,
) -> Result<VerticalPoly> {
    if n_samples < 7 {
        return Err(Error::TooFewSamples {
            need: 7,
            got: n_samples,
        });
    }
    let s = linspace(chart.s_range[0], chart.s_range[1], n_samples);
    let vert: Vec<f64> = s.iter().map(|&si| chart.deformation(eps, si).c).collect();
    let (coeffs, fit_residual) = fit_quadratic(&s, &vert).ok_or(Error::DegenerateSamples)?;
    if fit_residual > crate::tol::QUADRATIC_FIT {
        return Err(Error::NotQuadratic {
            residual: fit_residual,
        });
    }
    Ok(VerticalPoly {
        coeffs,
        fit_residual,
    })
}

/// Area magnification of the line-sweep map at `(eps, s)` together with the
/// deviation from the frame identity `|V_eps| = |N_h|^-1 |<V_eps, T>|`.
#[derive(Clone, Copy, Debug)]
pub struct JacobianCheck {
    pub value: f64,
    /// Relative gap between the direct Jacobian and the frame identity.
    pub identity_gap: f64,
}

pub fn foliation_jacobian(
    chart: &RuledChart,
    eps: f64,
    s: f64,
    params: &NumericParams,
) -> Result<JacobianCheck> {
    let surface = SurfaceChart::ruled(chart.clone());
    let fr = surface.frame([eps, s], params)?;
    let v = chart.deformation(eps, s);
    let value = v.norm();
    let via_frame = v.c.abs() / fr.nh_norm;
    let scale = value.abs().max(via_frame.abs()).max(1e-300);
    Ok(JacobianCheck {
        value,
        identity_gap: (value - via_frame).abs() / scale,
    })
}

/// One classical Runge-Kutta step of length `delta` along the normalized
/// characteristic direction, in chart parameters. Negative `delta` walks
/// backwards.
pub fn characteristic_step(
    chart: &SurfaceChart,
    p: [f64; 2],
    delta: f64,
    params: &NumericParams,
) -> Result<[f64; 2]> {
    let k1 = chart.char_velocity(p, params)?;
    let k2 = chart.char_velocity(
        [p[0] + 0.5 * delta * k1[0], p[1] + 0.5 * delta * k1[1]],
        params,
    )?;
    let k3 = chart.char_velocity(
        [p[0] + 0.5 * delta * k2[0], p[1] + 0.5 * delta * k2[1]],
        params,
    )?;
    let k4 = chart.char_velocity([p[0] + delta * k3[0], p[1] + delta * k3[1]], params)?;
    Ok([
        p[0] + delta / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
        p[1] + delta / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
    ])
}

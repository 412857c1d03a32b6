//! Sub-Riemannian area, its first variation, Killing flux, and stability.
//!
//! Three independent routes to the first variation are kept separate on
//! purpose: the closed-form graph integrand, the frame formula
//! `-S(<U,T>) - 2<J(U),S> + |N_h| <nabla_Z U, Z>`, and the mean-curvature
//! form `<U,N> H`. The stability quadratic form `Q(f,f)` is evaluated both
//! directly and, for ruled strips, through its reduced expression in the
//! `(eps, s)` coordinates of the ruling parameterization.

use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::characteristic::{characteristic_step, vertical_component_poly, VerticalPoly};
use crate::error::{Error, Result};
use crate::group::{FrameVector, KillingField, Point};
use crate::numeric::pairwise_sum;
#[cfg(not(feature = "std"))]
use crate::numeric::Float;
use crate::quad::{nodes_weights, simpson_rect};
use crate::surface::{GraphFn, Rect, RuledChart, SurfaceChart};
use crate::NumericParams;

/// One-dimensional C^2 profile with compact support.
#[derive(Clone, Copy, Debug)]
pub struct Bump1d {
    center: f64,
    half: f64,
    shape: Shape,
}

#[derive(Clone, Copy, Debug)]
enum Shape {
    Poly,
    FlatTop { plateau: f64 },
}

impl Bump1d {
    /// `(1 - r^2)^3` with `r = (x - center)/half`, zero outside `|r| < 1`.
    pub fn smooth(center: f64, half: f64) -> Bump1d {
        assert!(
            half > 0.0 && half.is_finite(),
            "bump half-width must be positive"
        );
        Bump1d {
            center,
            half,
            shape: Shape::Poly,
        }
    }

    /// Equal to one on `|r| <= plateau_frac`, quintic-smoothstep shoulders
    /// down to zero at `|r| = 1`.
    pub fn flat_top(center: f64, half: f64, plateau_frac: f64) -> Bump1d {
        assert!(
            half > 0.0 && half.is_finite(),
            "bump half-width must be positive"
        );
        assert!(
            plateau_frac > 0.0 && plateau_frac < 1.0,
            "plateau fraction must lie strictly between 0 and 1"
        );
        Bump1d {
            center,
            half,
            shape: Shape::FlatTop {
                plateau: plateau_frac,
            },
        }
    }

    /// Closed support interval.
    pub fn support(&self) -> [f64; 2] {
        [self.center - self.half, self.center + self.half]
    }

    pub fn eval(&self, x: f64) -> f64 {
        let r = (x - self.center) / self.half;
        if r.abs() >= 1.0 {
            return 0.0;
        }
        match self.shape {
            Shape::Poly => {
                let w = 1.0 - r * r;
                w * w * w
            }
            Shape::FlatTop { plateau } => {
                let a = r.abs();
                if a <= plateau {
                    1.0
                } else {
                    let rho = (a - plateau) / (1.0 - plateau);
                    1.0 - rho * rho * rho * (10.0 - 15.0 * rho + 6.0 * rho * rho)
                }
            }
        }
    }

    pub fn deriv(&self, x: f64) -> f64 {
        let r = (x - self.center) / self.half;
        if r.abs() >= 1.0 {
            return 0.0;
        }
        match self.shape {
            Shape::Poly => {
                let w = 1.0 - r * r;
                -6.0 * r * w * w / self.half
            }
            Shape::FlatTop { plateau } => {
                let a = r.abs();
                if a <= plateau {
                    0.0
                } else {
                    let rho = (a - plateau) / (1.0 - plateau);
                    let slope = 30.0 * rho * rho * (1.0 - rho) * (1.0 - rho);
                    -slope * r.signum() / ((1.0 - plateau) * self.half)
                }
            }
        }
    }
}

/// Compactly supported scalar function of the chart parameters, carrying its
/// support rectangle. Quadratic forms integrate over the support only.
#[derive(Clone)]
pub struct TestFunction {
    g: GraphFn,
    /// Closed rectangle outside which the function vanishes.
    pub support: Rect,
}

impl TestFunction {
    /// Wraps a function that the caller promises vanishes outside `support`.
    pub fn new(g: GraphFn, support: Rect) -> TestFunction {
        TestFunction { g, support }
    }

    /// Tensor product of two `(1 - r^2)^3` profiles.
    pub fn bump(center: [f64; 2], half: [f64; 2]) -> Result<TestFunction> {
        TestFunction::from_profiles(
            Bump1d::smooth(center[0], half[0]),
            Bump1d::smooth(center[1], half[1]),
        )
    }

    /// Tensor product of two one-dimensional profiles.
    pub fn from_profiles(b1: Bump1d, b2: Bump1d) -> Result<TestFunction> {
        let s1 = b1.support();
        let s2 = b2.support();
        let support = Rect::new([s1[0], s2[0]], [s1[1], s2[1]])?;
        let g = GraphFn::analytic(
            move |x, y| b1.eval(x) * b2.eval(y),
            move |x, y| b1.deriv(x) * b2.eval(y),
            move |x, y| b1.eval(x) * b2.deriv(y),
        );
        Ok(TestFunction { g, support })
    }

    pub fn eval(&self, p: [f64; 2]) -> f64 {
        self.g.eval(p[0], p[1])
    }

    pub fn partials(&self, p: [f64; 2]) -> (f64, f64) {
        self.g.partials(p[0], p[1])
    }

    pub fn graph_fn(&self) -> &GraphFn {
        &self.g
    }
}

/// Ambient velocity field evaluated along a chart, in frame components
/// `(a, b, c) = a X + b Y + c T` as functions of the chart parameters.
#[derive(Clone)]
pub struct SurfaceField {
    f: Arc<dyn Fn([f64; 2], Point) -> [f64; 3] + Send + Sync>,
    /// Parameter support when the field is compactly supported on the chart.
    pub support: Option<Rect>,
}

impl SurfaceField {
    pub fn new<F>(f: F) -> SurfaceField
    where
        F: Fn([f64; 2], Point) -> [f64; 3] + Send + Sync + 'static,
    {
        SurfaceField {
            f: Arc::new(f),
            support: None,
        }
    }

    pub fn with_support(mut self, support: Rect) -> SurfaceField {
        self.support = Some(support);
        self
    }

    /// Right-invariant Killing generator restricted to the chart.
    pub fn killing(k: KillingField) -> SurfaceField {
        SurfaceField::new(move |_, pt| {
            let v = k.at(pt);
            [v.a, v.b, v.c]
        })
    }

    /// Velocity `phi Y` of the graph flow `u -> u + eps phi` on an intrinsic
    /// graph.
    pub fn intrinsic_graph_flow(phi: &TestFunction) -> SurfaceField {
        let g = phi.clone();
        SurfaceField {
            f: Arc::new(move |p, _| [0.0, g.eval(p), 0.0]),
            support: Some(phi.support),
        }
    }

    /// Velocity `phi T` of the graph flow `u -> u + eps phi` on a t-graph.
    pub fn t_graph_flow(phi: &TestFunction) -> SurfaceField {
        let g = phi.clone();
        SurfaceField {
            f: Arc::new(move |p, _| [0.0, 0.0, g.eval(p)]),
            support: Some(phi.support),
        }
    }

    pub fn at(&self, p: [f64; 2], base: Point) -> FrameVector {
        let v = (self.f)(p, base);
        FrameVector::new(v[0], v[1], v[2], base)
    }
}

/// Sub-Riemannian area of `region` under the chart: the integral of `|N_h|`
/// against the Riemannian area element of the parameterization.
pub fn area(chart: &SurfaceChart, region: &Rect, grid: [usize; 2]) -> Result<f64> {
    if !chart.domain().contains_with_margin(region, 0.0) {
        return Err(Error::RegionEscapesDomain);
    }
    simpson_rect(|p| Ok(chart.sr_area_density(p)), region, grid)
}

fn check_support(chart: &SurfaceChart, support: &Rect, region: &Rect, margin: f64) -> Result<()> {
    if !region.contains_with_margin(support, 0.0) {
        return Err(Error::SupportViolation);
    }
    if !chart.domain().contains_with_margin(support, margin) {
        return Err(Error::RegionEscapesDomain);
    }
    Ok(())
}

/// First variation of the sub-Riemannian area of a graph chart under the
/// flow `u -> u + eps phi`, from the closed-form area integrand: for an
/// intrinsic graph `sigma (1+sigma^2)^{-1/2} (phi_x + 2 phi u_t + 2 u phi_t)`
/// with `sigma = u_x + 2 u u_t`; for a t-graph
/// `(alpha phi_x + beta phi_y)/D`. Rejects ruled charts.
pub fn first_variation_graph(
    chart: &SurfaceChart,
    phi: &TestFunction,
    region: &Rect,
    grid: [usize; 2],
    params: &NumericParams,
) -> Result<f64> {
    check_support(chart, &phi.support, region, 0.0)?;
    match chart {
        SurfaceChart::IntrinsicGraph { u, .. } => simpson_rect(
            |p| {
                let (ux, ut) = u.partials(p[0], p[1]);
                let val = u.eval(p[0], p[1]);
                let sigma = ux + 2.0 * val * ut;
                let (px, pt) = phi.partials(p);
                let dsigma = px + 2.0 * (phi.eval(p) * ut + val * pt);
                Ok(sigma / (1.0 + sigma * sigma).sqrt() * dsigma)
            },
            &phi.support,
            grid,
        ),
        SurfaceChart::TGraph { u, .. } => simpson_rect(
            |p| {
                let (ux, uy) = u.partials(p[0], p[1]);
                let alpha = ux - p[1];
                let beta = uy + p[0];
                let d = (alpha * alpha + beta * beta).sqrt();
                if d <= params.singular_tol {
                    return Err(Error::SupportTouchesSingularSet);
                }
                let (px, py) = phi.partials(p);
                Ok((alpha * px + beta * py) / d)
            },
            &phi.support,
            grid,
        ),
        SurfaceChart::Ruled(_) => Err(Error::NotAGraphChart),
    }
}

/// Central difference `(A(u + h phi) - A(u - h phi)) / 2h` of the area over
/// the support of `phi`. Finite-difference oracle for the analytic routes.
pub fn first_variation_fd(
    chart: &SurfaceChart,
    phi: &TestFunction,
    grid: [usize; 2],
    h: f64,
) -> Result<f64> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::BadStep);
    }
    let plus = area(&chart.perturbed(phi.graph_fn(), h)?, &phi.support, grid)?;
    let minus = area(&chart.perturbed(phi.graph_fn(), -h)?, &phi.support, grid)?;
    Ok((plus - minus) / (2.0 * h))
}

fn s_derivative<F>(chart: &SurfaceChart, p: [f64; 2], params: &NumericParams, f: F) -> Result<f64>
where
    F: Fn([f64; 2]) -> Result<f64>,
{
    let v = chart.s_velocity(p, params)?;
    let d = params.fd_step;
    let fp = f([p[0] + d * v[0], p[1] + d * v[1]])?;
    let fm = f([p[0] - d * v[0], p[1] - d * v[1]])?;
    Ok((fp - fm) / (2.0 * d))
}

fn char_pair(
    chart: &SurfaceChart,
    p: [f64; 2],
    params: &NumericParams,
) -> Result<([f64; 2], [f64; 2])> {
    let d = params.fd_step;
    Ok((
        characteristic_step(chart, p, d, params)?,
        characteristic_step(chart, p, -d, params)?,
    ))
}

fn integration_window(
    chart: &SurfaceChart,
    field: &SurfaceField,
    region: &Rect,
    margin: f64,
) -> Result<Rect> {
    match field.support {
        Some(supp) => {
            check_support(chart, &supp, region, margin)?;
            Ok(supp)
        }
        None => {
            if !chart.domain().contains_with_margin(region, margin) {
                return Err(Error::RegionEscapesDomain);
            }
            Ok(*region)
        }
    }
}

fn mask_singular(supported: bool, e: Error) -> Error {
    match e {
        Error::SingularPoint { .. } if supported => Error::SupportTouchesSingularSet,
        other => other,
    }
}

/// First variation of the sub-Riemannian area under an arbitrary velocity
/// field, by the frame formula: the integral of
/// `-S(<U,T>) - 2 <J(U), S> + |N_h| <nabla_Z U, Z>` against the Riemannian
/// area element. Derivatives along Z follow the characteristic curve; the
/// derivative along S uses a straight parameter line.
pub fn first_variation_general(
    chart: &SurfaceChart,
    field: &SurfaceField,
    region: &Rect,
    grid: [usize; 2],
    params: &NumericParams,
) -> Result<f64> {
    let delta = params.fd_step;
    let window = integration_window(chart, field, region, 2.0 * delta)?;
    let supported = field.support.is_some();
    simpson_rect(
        |p| {
            let fr = chart.frame(p, params)?;
            let u_here = field.at(p, fr.point);
            let st = s_derivative(chart, p, params, |q| Ok(field.at(q, chart.point(q)).c))?;
            let jus = u_here.j().inner(fr.s)?;
            let (pp, pm) = char_pair(chart, p, params)?;
            let up = field.at(pp, chart.point(pp));
            let um = field.at(pm, chart.point(pm));
            let za = (up.a - um.a) / (2.0 * delta);
            let zb = (up.b - um.b) / (2.0 * delta);
            let div_h = za * fr.z.a + zb * fr.z.b;
            Ok((-st - 2.0 * jus + fr.nh_norm * div_h) * chart.area_element(p))
        },
        &window,
        grid,
    )
    .map_err(|e| mask_singular(supported, e))
}

/// Mean curvature `<nabla_Z nu_h, Z>` at a regular parameter, by a central
/// difference of the horizontal unit normal along the characteristic curve.
/// Vanishes along rulings, so area-stationary charts report zero everywhere.
pub fn mean_curvature(chart: &SurfaceChart, p: [f64; 2], params: &NumericParams) -> Result<f64> {
    let fr = chart.frame(p, params)?;
    let (pp, pm) = char_pair(chart, p, params)?;
    let fp = chart.frame(pp, params)?;
    let fm = chart.frame(pm, params)?;
    let da = (fp.nu_h.a - fm.nu_h.a) / (2.0 * params.fd_step);
    let db = (fp.nu_h.b - fm.nu_h.b) / (2.0 * params.fd_step);
    Ok(da * fr.z.a + db * fr.z.b)
}

/// First variation through the mean curvature: the integral of `<U,N> H`
/// against the Riemannian area element.
///
/// With `H = <nabla_Z nu_h, Z>` this equals the derivative of the area under
/// the flow of `U`, matching [`first_variation_general`] and
/// [`first_variation_graph`]; the product `<U,N> H` does not depend on the
/// choice of unit normal.
pub fn first_variation_h(
    chart: &SurfaceChart,
    field: &SurfaceField,
    region: &Rect,
    grid: [usize; 2],
    params: &NumericParams,
) -> Result<f64> {
    let window = integration_window(chart, field, region, 2.0 * params.fd_step)?;
    let supported = field.support.is_some();
    simpson_rect(
        |p| {
            let fr = chart.frame(p, params)?;
            let h = mean_curvature(chart, p, params)?;
            let un = field.at(p, fr.point).inner(fr.n)?;
            Ok(un * h * chart.area_element(p))
        },
        &window,
        grid,
    )
    .map_err(|e| mask_singular(supported, e))
}

/// Boundary outflow of the first-variation field of `U` through a closed
/// parameter polygon.
#[derive(Clone, Copy, Debug)]
pub struct Flux {
    pub value: f64,
    /// Riemannian length of the polygon's image, for relative comparisons.
    pub perimeter: f64,
}

/// Line integral of `<<U,T> S - |N_h| <U,Z> Z, xi>` over the image of a
/// closed parameter polygon, with `xi` the unit conormal pointing into the
/// enclosed region. Vanishes up to quadrature error when `U` is a Killing
/// field and the chart is area-stationary.
pub fn flux(
    chart: &SurfaceChart,
    vertices: &[[f64; 2]],
    field: &SurfaceField,
    nodes_per_edge: usize,
    params: &NumericParams,
) -> Result<Flux> {
    if vertices.len() < 3 {
        return Err(Error::InvalidDomain {
            reason: "flux needs a closed polygon with at least three vertices",
        });
    }
    let mut twice_area = 0.0;
    for (i, v) in vertices.iter().enumerate() {
        let w = vertices[(i + 1) % vertices.len()];
        twice_area += v[0] * w[1] - w[0] * v[1];
    }
    if twice_area.abs() < 1e-12 {
        return Err(Error::InvalidDomain {
            reason: "flux polygon encloses no parameter area",
        });
    }
    let orient = twice_area.signum();
    let (taus, tau_w) = nodes_weights(0.0, 1.0, nodes_per_edge)?;
    let mut value = 0.0;
    let mut perimeter = 0.0;
    for (i, v0) in vertices.iter().enumerate() {
        let v1 = vertices[(i + 1) % vertices.len()];
        let e = [v1[0] - v0[0], v1[1] - v0[1]];
        for (tau, w) in taus.iter().zip(&tau_w) {
            let p = [v0[0] + tau * e[0], v0[1] + tau * e[1]];
            let fr = chart.frame(p, params)?;
            let (d1, d2) = chart.tangents(p);
            let tan = d1.scale(e[0]).add(d2.scale(e[1]))?;
            let speed = tan.norm();
            if speed <= crate::tol::DEGENERATE {
                return Err(Error::DegenerateChart { p1: p[0], p2: p[1] });
            }
            let mut xi = fr.n.cross(tan.scale(1.0 / speed))?;
            let inward = d1.scale(-orient * e[1]).add(d2.scale(orient * e[0]))?;
            if xi.inner(inward)? < 0.0 {
                xi = xi.scale(-1.0);
            }
            let u_vec = field.at(p, fr.point);
            let g =
                fr.s.scale(u_vec.c)
                    .add(fr.z.scale(-fr.nh_norm * u_vec.inner(fr.z)?))?;
            value += w * speed * g.inner(xi)?;
            perimeter += w * speed;
        }
    }
    Ok(Flux { value, perimeter })
}

/// Residual of the surface divergence identity: absolute value of the
/// integral of `Z(f)Z(g) + f Z(Z(g)) + 2 (<N,T>/|N_h|) f Z(g)` against the
/// sub-Riemannian area density. Zero in exact arithmetic whenever `f` and
/// `g` are compactly supported away from the singular set.
pub fn divergence_identity_residual(
    chart: &SurfaceChart,
    f: &TestFunction,
    g: &TestFunction,
    region: &Rect,
    grid: [usize; 2],
    params: &NumericParams,
) -> Result<f64> {
    let delta = params.fd_step;
    check_support(chart, &f.support, region, 2.0 * delta)?;
    // Every term carries a factor of f and a derivative of g, so the
    // integrand lives on the overlap of the two supports.
    let overlap = match f.support.intersect(&g.support) {
        Some(r) => r,
        None => return Ok(0.0),
    };
    simpson_rect(
        |p| {
            let fr = chart.frame(p, params)?;
            let (pp, pm) = char_pair(chart, p, params)?;
            let zf = (f.eval(pp) - f.eval(pm)) / (2.0 * delta);
            let zg = (g.eval(pp) - g.eval(pm)) / (2.0 * delta);
            let zzg = (g.eval(pp) - 2.0 * g.eval(p) + g.eval(pm)) / (delta * delta);
            let integrand = zf * zg + f.eval(p) * zzg + 2.0 * fr.u_ratio() * f.eval(p) * zg;
            Ok(integrand * chart.sr_area_density(p))
        },
        &overlap,
        grid,
    )
    .map(|v| v.abs())
    .map_err(|e| mask_singular(true, e))
}

/// The stability potential `4 (Z(<N,T>/|N_h|) + (<N,T>/|N_h|)^2)`. Along a
/// characteristic line this is the closed form `4 (u' + u^2)` of the line's
/// vertical-turning profile.
pub fn q_function(chart: &SurfaceChart, p: [f64; 2], params: &NumericParams) -> Result<f64> {
    let fr = chart.frame(p, params)?;
    let (pp, pm) = char_pair(chart, p, params)?;
    let up = chart.frame(pp, params)?.u_ratio();
    let um = chart.frame(pm, params)?.u_ratio();
    let zu = (up - um) / (2.0 * params.fd_step);
    let u0 = fr.u_ratio();
    Ok(4.0 * (zu + u0 * u0))
}

/// The value of a stability quadratic form split into its two terms;
/// `value = gradient_term - q_term`.
#[derive(Clone, Copy, Debug)]
pub struct StabilityReport {
    pub value: f64,
    pub gradient_term: f64,
    pub q_term: f64,
}

fn stability_node(
    chart: &SurfaceChart,
    f: &TestFunction,
    p: [f64; 2],
    params: &NumericParams,
) -> Result<(f64, f64)> {
    let delta = params.fd_step;
    let fr = chart.frame(p, params)?;
    let (pp, pm) = char_pair(chart, p, params)?;
    let zf = (f.eval(pp) - f.eval(pm)) / (2.0 * delta);
    let up = chart.frame(pp, params)?.u_ratio();
    let um = chart.frame(pm, params)?.u_ratio();
    let u0 = fr.u_ratio();
    let q = 4.0 * ((up - um) / (2.0 * delta) + u0 * u0);
    let dens = chart.sr_area_density(p);
    let f0 = f.eval(p);
    Ok((zf * zf * dens, q * f0 * f0 * dens))
}

/// The stability quadratic form `Q(f,f)`: the integral of `Z(f)^2 - q f^2`
/// against the sub-Riemannian area density over the support of `f`.
pub fn stability_form(
    chart: &SurfaceChart,
    f: &TestFunction,
    region: &Rect,
    grid: [usize; 2],
    params: &NumericParams,
) -> Result<StabilityReport> {
    check_support(chart, &f.support, region, 2.0 * params.fd_step)?;
    let (xs, wx) = nodes_weights(f.support.lo[0], f.support.hi[0], grid[0])?;
    let (ys, wy) = nodes_weights(f.support.lo[1], f.support.hi[1], grid[1])?;
    let mut grad_terms = Vec::with_capacity(xs.len() * ys.len());
    let mut q_terms = Vec::with_capacity(xs.len() * ys.len());
    for (x, wa) in xs.iter().zip(&wx) {
        for (y, wb) in ys.iter().zip(&wy) {
            let (g, q) =
                stability_node(chart, f, [*x, *y], params).map_err(|e| mask_singular(true, e))?;
            grad_terms.push(wa * wb * g);
            q_terms.push(wa * wb * q);
        }
    }
    let gradient_term = pairwise_sum(&grad_terms);
    let q_term = pairwise_sum(&q_terms);
    Ok(StabilityReport {
        value: gradient_term - q_term,
        gradient_term,
        q_term,
    })
}

/// Outcome of an instability sweep over scaled test functions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StabilityVerdict {
    /// The potential vanishes on the strip; the form is a pure gradient and
    /// every mode is nonnegative.
    ZeroQ,
    /// Smallest mode index with a negative form value.
    Negative { k: usize },
    /// Every swept mode came out nonnegative.
    NonnegativeUpTo { k_max: usize },
}

/// Reduced-form sweep over the modes `k = 1..=k_max`.
#[derive(Clone, Debug)]
pub struct InstabilitySweep {
    pub verdict: StabilityVerdict,
    /// One report per mode, in reduced coordinates: `gradient_term` is the
    /// plain Dirichlet energy of `phi(eps) phi(s/k)` and `q_term` carries the
    /// factor 3/4.
    pub reports: Vec<StabilityReport>,
    /// Range of the potential over the sampled windows.
    pub q_range: [f64; 2],
}

/// Sweeps the test functions `f_k = phi(eps) phi(s/k) |p_eps(s)|^{-1/2}`
/// through the stability form of a ruled strip, using the reduced expression
///
/// `Q(f_k, f_k) = int (d/ds [phi(eps) phi(s/k)])^2 - (3/4) q (phi phi)^2  d eps d s`,
///
/// exact for test functions of that shape. Here `p_eps` is the vertical
/// component polynomial of the ruling at `eps` and `q = -disc(p_eps)/p_eps^2`.
/// Rulings extend beyond the strip's `s` range as needed: mode `k` integrates
/// over `s` in `k` times the profile support. Errors when some `p_eps`
/// vanishes inside the widest window or the potential changes sign.
pub fn instability_search(
    chart: &RuledChart,
    profile: &Bump1d,
    k_max: usize,
    grid: [usize; 2],
) -> Result<InstabilitySweep> {
    if k_max == 0 {
        return Err(Error::InvalidDomain {
            reason: "instability sweep needs k_max >= 1",
        });
    }
    let supp = profile.support();
    if !(chart.eps_range[0] <= supp[0] && supp[1] <= chart.eps_range[1]) {
        return Err(Error::SupportViolation);
    }
    let (eps_nodes, eps_w) = nodes_weights(supp[0], supp[1], grid[0])?;
    let (s_nodes, s_w) = nodes_weights(supp[0], supp[1], grid[1])?;
    let polys = eps_nodes
        .iter()
        .map(|&e| vertical_component_poly(chart, e, 9))
        .collect::<Result<Vec<VerticalPoly>>>()?;
    let widest = k_max as f64;
    for poly in &polys {
        if poly.has_root_in(widest * supp[0], widest * supp[1]) {
            return Err(Error::PolynomialRoot);
        }
    }
    let mut q_min = f64::INFINITY;
    let mut q_max = f64::NEG_INFINITY;
    let mut reports = Vec::with_capacity(k_max);
    let mut first_negative = None;
    for k in 1..=k_max {
        let kf = k as f64;
        let mut grad = 0.0;
        let mut q_integral = 0.0;
        for ((e, we), poly) in eps_nodes.iter().zip(&eps_w).zip(&polys) {
            let phi_e = profile.eval(*e);
            let disc = poly.discriminant();
            for (sg, ws) in s_nodes.iter().zip(&s_w) {
                let w = we * ws * kf;
                let u = phi_e * profile.eval(*sg);
                let du = phi_e * profile.deriv(*sg) / kf;
                let pv = poly.eval(kf * sg);
                let q = -disc / (pv * pv);
                q_min = q_min.min(q);
                q_max = q_max.max(q);
                grad += w * du * du;
                q_integral += w * q * u * u;
            }
        }
        let q_term = 0.75 * q_integral;
        let value = grad - q_term;
        if value < 0.0 && first_negative.is_none() {
            first_negative = Some(k);
        }
        reports.push(StabilityReport {
            value,
            gradient_term: grad,
            q_term,
        });
    }
    if q_min < -crate::tol::Q_ZERO && q_max > crate::tol::Q_ZERO {
        return Err(Error::MixedSignQ);
    }
    let verdict = if q_min.abs().max(q_max.abs()) <= crate::tol::Q_ZERO {
        StabilityVerdict::ZeroQ
    } else if let Some(k) = first_negative {
        StabilityVerdict::Negative { k }
    } else {
        StabilityVerdict::NonnegativeUpTo { k_max }
    };
    Ok(InstabilitySweep {
        verdict,
        reports,
        q_range: [q_min, q_max],
    })
}

/// The mode-`k` test function `phi(eps) phi(s/k) |p_eps(s)|^{-1/2}` of a
/// ruled strip, packaged for [`stability_form`]; the reduced sweep evaluates
/// the same quadratic form in closed form. The ruling polynomial extrapolates
/// beyond the strip's `s` range.
pub fn reduced_test_function(
    chart: &RuledChart,
    profile: &Bump1d,
    k: usize,
) -> Result<TestFunction> {
    if k == 0 {
        return Err(Error::InvalidDomain {
            reason: "mode index must be at least 1",
        });
    }
    let supp = profile.support();
    if !(chart.eps_range[0] <= supp[0] && supp[1] <= chart.eps_range[1]) {
        return Err(Error::SupportViolation);
    }
    let kf = k as f64;
    let probes = [
        0.5 * (supp[0] + supp[1]),
        0.75 * supp[0] + 0.25 * supp[1],
        0.25 * supp[0] + 0.75 * supp[1],
    ];
    for e in probes {
        let poly = vertical_component_poly(chart, e, 9)?;
        if poly.has_root_in(kf * supp[0], kf * supp[1]) {
            return Err(Error::PolynomialRoot);
        }
    }
    let prof = *profile;
    let strip = chart.clone();
    let g = GraphFn::numeric(
        move |e, s| {
            let amp = prof.eval(e) * prof.eval(s / kf);
            if amp == 0.0 {
                return 0.0;
            }
            match vertical_component_poly(&strip, e, 9) {
                Ok(poly) => amp / poly.eval(s).abs().sqrt(),
                Err(_) => 0.0,
            }
        },
        crate::tol::FD_STEP,
    );
    let support = Rect::new([supp[0], kf * supp[0]], [supp[1], kf * supp[1]])?;
    Ok(TestFunction::new(g, support))
}

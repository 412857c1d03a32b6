//! Surface charts and their pointwise frame data.
//!
//! Three chart kinds are supported:
//!
//! * t-graphs `(x, y) -> (x, y, u(x,y))`,
//! * intrinsic graphs `(x, t) -> (x, u(x,t), t - x u(x,t))`, graphs over the
//!   vertical plane y = 0 along horizontal lines,
//! * ruled strips `(eps, s) -> gamma(eps) + s Z(eps)` sweeping horizontal
//!   lines along a seed curve.
//!
//! Normals are oriented by a fixed cross-product order: `d1 x d2` for graphs
//! (upward for t-graphs) and `dF/ds x dF/deps` for ruled strips. With these
//! choices the reference formulas for the intrinsic-graph normal and for the
//! sub-Riemannian area density are reproduced verbatim.

use crate::error::{Error, Result};
use crate::group::{horizontal_line, FrameVector, Point};
#[cfg(not(feature = "std"))]
use crate::numeric::Float;
use crate::NumericParams;

use alloc::sync::Arc;
use alloc::vec::Vec;

/// Closed parameter rectangle `[lo1, hi1] x [lo2, hi2]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rect {
    pub lo: [f64; 2],
    pub hi: [f64; 2],
}

impl Rect {
    pub fn new(lo: [f64; 2], hi: [f64; 2]) -> Result<Rect> {
        if !(lo[0] < hi[0] && lo[1] < hi[1]) || !lo.iter().chain(hi.iter()).all(|v| v.is_finite()) {
            return Err(Error::EmptyRegion);
        }
        Ok(Rect { lo, hi })
    }

    pub fn extent(&self) -> [f64; 2] {
        [self.hi[0] - self.lo[0], self.hi[1] - self.lo[1]]
    }

    pub fn contains(&self, p: [f64; 2]) -> bool {
        let slack = 1e-9 * self.extent()[0].max(self.extent()[1]).max(1.0);
        p[0] >= self.lo[0] - slack
            && p[0] <= self.hi[0] + slack
            && p[1] >= self.lo[1] - slack
            && p[1] <= self.hi[1] + slack
    }

    /// True when `inner` sits inside `self` with at least `margin` to spare
    /// on every side.
    pub fn contains_with_margin(&self, inner: &Rect, margin: f64) -> bool {
        inner.lo[0] - self.lo[0] >= margin
            && inner.lo[1] - self.lo[1] >= margin
            && self.hi[0] - inner.hi[0] >= margin
            && self.hi[1] - inner.hi[1] >= margin
    }

    pub fn center(&self) -> [f64; 2] {
        [
            0.5 * (self.lo[0] + self.hi[0]),
            0.5 * (self.lo[1] + self.hi[1]),
        ]
    }

    /// Largest rectangle contained in both, if the interiors overlap.
    pub fn intersect(&self, other: &Rect) -> Option<Rect> {
        Rect::new(
            [self.lo[0].max(other.lo[0]), self.lo[1].max(other.lo[1])],
            [self.hi[0].min(other.hi[0]), self.hi[1].min(other.hi[1])],
        )
        .ok()
    }
}

type Fn2 = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// How first derivatives of a graph function are produced.
#[derive(Clone)]
pub enum DerivativeMode {
    /// Caller-supplied partial derivatives.
    Analytic { d1: Fn2, d2: Fn2 },
    /// Central differences with the given step.
    Central { h: f64 },
}

/// A scalar function of two chart parameters together with its derivative
/// recipe.
#[derive(Clone)]
pub struct GraphFn {
    f: Fn2,
    mode: DerivativeMode,
}

impl GraphFn {
    pub fn analytic<F, D1, D2>(f: F, d1: D1, d2: D2) -> GraphFn
    where
        F: Fn(f64, f64) -> f64 + Send + Sync + 'static,
        D1: Fn(f64, f64) -> f64 + Send + Sync + 'static,
        D2: Fn(f64, f64) -> f64 + Send + Sync + 'static,
    {
        GraphFn {
            f: Arc::new(f),
            mode: DerivativeMode::Analytic {
                d1: Arc::new(d1),
                d2: Arc::new(d2),
            },
        }
    }

    pub fn numeric<F>(f: F, h: f64) -> GraphFn
    where
        F: Fn(f64, f64) -> f64 + Send + Sync + 'static,
    {
        GraphFn {
            f: Arc::new(f),
            mode: DerivativeMode::Central { h },
        }
    }

    pub fn eval(&self, p1: f64, p2: f64) -> f64 {
        (self.f)(p1, p2)
    }

    pub fn partials(&self, p1: f64, p2: f64) -> (f64, f64) {
        match &self.mode {
            DerivativeMode::Analytic { d1, d2 } => (d1(p1, p2), d2(p1, p2)),
            DerivativeMode::Central { h } => (
                ((self.f)(p1 + h, p2) - (self.f)(p1 - h, p2)) / (2.0 * h),
                ((self.f)(p1, p2 + h) - (self.f)(p1, p2 - h)) / (2.0 * h),
            ),
        }
    }

    /// The function `self + eps * g`. Derivatives stay analytic only when
    /// both operands are analytic; otherwise the numeric step of the numeric
    /// operand wins.
    pub fn axpy(&self, g: &GraphFn, eps: f64) -> GraphFn {
        let f0 = self.f.clone();
        let f1 = g.f.clone();
        let f: Fn2 = Arc::new(move |a, b| f0(a, b) + eps * f1(a, b));
        let mode = match (&self.mode, &g.mode) {
            (DerivativeMode::Analytic { d1, d2 }, DerivativeMode::Analytic { d1: e1, d2: e2 }) => {
                let (d1, d2, e1, e2) = (d1.clone(), d2.clone(), e1.clone(), e2.clone());
                DerivativeMode::Analytic {
                    d1: Arc::new(move |a, b| d1(a, b) + eps * e1(a, b)),
                    d2: Arc::new(move |a, b| d2(a, b) + eps * e2(a, b)),
                }
            }
            (DerivativeMode::Central { h }, _) | (_, DerivativeMode::Central { h }) => {
                DerivativeMode::Central { h: *h }
            }
        };
        GraphFn { f, mode }
    }
}

/// Seed data of a ruled strip: the curve `gamma`, its coordinate velocity,
/// the horizontal ruling direction `(a, b)` and its velocity.
#[derive(Clone)]
enum Seed {
    Analytic {
        gamma: Arc<dyn Fn(f64) -> Point + Send + Sync>,
        gamma_dot: Arc<dyn Fn(f64) -> [f64; 3] + Send + Sync>,
        dir: Arc<dyn Fn(f64) -> [f64; 2] + Send + Sync>,
        dir_dot: Arc<dyn Fn(f64) -> [f64; 2] + Send + Sync>,
    },
    Sampled {
        eps0: f64,
        step: f64,
        points: Vec<Point>,
        dirs: Vec<[f64; 2]>,
    },
}

/// Ruled strip `F(eps, s) = gamma(eps) + s Z(eps)` (horizontal lines through
/// the seed curve). Chart parameters are ordered `(eps, s)`.
#[derive(Clone)]
pub struct RuledChart {
    seed: Seed,
    pub eps_range: [f64; 2],
    pub s_range: [f64; 2],
}

/// Seed curve state at one parameter: point, coordinate velocity, ruling
/// direction and its derivative.
#[derive(Clone, Copy, Debug)]
pub struct SeedState {
    pub point: Point,
    pub velocity: [f64; 3],
    pub dir: [f64; 2],
    pub dir_dot: [f64; 2],
}

impl RuledChart {
    pub fn analytic<G, GD, D, DD>(
        gamma: G,
        gamma_dot: GD,
        dir: D,
        dir_dot: DD,
        eps_range: [f64; 2],
        s_range: [f64; 2],
    ) -> RuledChart
    where
        G: Fn(f64) -> Point + Send + Sync + 'static,
        GD: Fn(f64) -> [f64; 3] + Send + Sync + 'static,
        D: Fn(f64) -> [f64; 2] + Send + Sync + 'static,
        DD: Fn(f64) -> [f64; 2] + Send + Sync + 'static,
    {
        RuledChart {
            seed: Seed::Analytic {
                gamma: Arc::new(gamma),
                gamma_dot: Arc::new(gamma_dot),
                dir: Arc::new(dir),
                dir_dot: Arc::new(dir_dot),
            },
            eps_range,
            s_range,
        }
    }

    pub(crate) fn from_validated_samples(
        points: Vec<Point>,
        dirs: Vec<[f64; 2]>,
        eps0: f64,
        step: f64,
        s_range: [f64; 2],
    ) -> RuledChart {
        let hi = eps0 + step * (points.len() - 1) as f64;
        RuledChart {
            seed: Seed::Sampled {
                eps0,
                step,
                points,
                dirs,
            },
            eps_range: [eps0, hi],
            s_range,
        }
    }

    pub fn seed_state(&self, eps: f64) -> SeedState {
        match &self.seed {
            Seed::Analytic {
                gamma,
                gamma_dot,
                dir,
                dir_dot,
            } => SeedState {
                point: gamma(eps),
                velocity: gamma_dot(eps),
                dir: dir(eps),
                dir_dot: dir_dot(eps),
            },
            Seed::Sampled {
                eps0,
                step,
                points,
                dirs,
            } => {
                let n = points.len();
                let coord = |p: &Point| [p.x, p.y, p.t];
                // Node velocities: central in the interior, one-sided at the
                // ends (chord when only two samples exist).
                let node_vel = |i: usize| -> ([f64; 3], [f64; 2]) {
                    let (lo, hi, den) = if i == 0 {
                        (0, 1, *step)
                    } else if i == n - 1 {
                        (n - 2, n - 1, *step)
                    } else {
                        (i - 1, i + 1, 2.0 * step)
                    };
                    let a = coord(&points[lo]);
                    let b = coord(&points[hi]);
                    (
                        [
                            (b[0] - a[0]) / den,
                            (b[1] - a[1]) / den,
                            (b[2] - a[2]) / den,
                        ],
                        [
                            (dirs[hi][0] - dirs[lo][0]) / den,
                            (dirs[hi][1] - dirs[lo][1]) / den,
                        ],
                    )
                };
                let r = ((eps - eps0) / step).clamp(0.0, (n - 1) as f64);
                let i = (r.floor() as usize).min(n - 2);
                let w = r - i as f64;
                let lerp = |a: f64, b: f64| a + w * (b - a);
                let (va, da) = node_vel(i);
                let (vb, db) = node_vel(i + 1);
                let pa = coord(&points[i]);
                let pb = coord(&points[i + 1]);
                SeedState {
                    point: Point::new(lerp(pa[0], pb[0]), lerp(pa[1], pb[1]), lerp(pa[2], pb[2])),
                    velocity: [lerp(va[0], vb[0]), lerp(va[1], vb[1]), lerp(va[2], vb[2])],
                    dir: [
                        lerp(dirs[i][0], dirs[i + 1][0]),
                        lerp(dirs[i][1], dirs[i + 1][1]),
                    ],
                    dir_dot: [lerp(da[0], db[0]), lerp(da[1], db[1])],
                }
            }
        }
    }

    pub fn point(&self, eps: f64, s: f64) -> Point {
        let st = self.seed_state(eps);
        horizontal_line(st.point, st.dir[0], st.dir[1], s)
    }

    /// The ruling tangent `dF/ds = a X + b Y`, horizontal by construction.
    pub fn ruling_tangent(&self, eps: f64, s: f64) -> FrameVector {
        let st = self.seed_state(eps);
        FrameVector::new(st.dir[0], st.dir[1], 0.0, self.point(eps, s))
    }

    /// Closed form of the deformation vector `dF/deps` in frame components:
    /// horizontal part `(x' + s a', y' + s b')` and vertical part
    /// `(t' - x'y + xy') + 2(ay' - bx') s + (ab' - a'b) s^2`, quadratic in s.
    pub fn deformation(&self, eps: f64, s: f64) -> FrameVector {
        let st = self.seed_state(eps);
        let (x, y) = (st.point.x, st.point.y);
        let [xd, yd, td] = st.velocity;
        let [a, b] = st.dir;
        let [ad, bd] = st.dir_dot;
        let c0 = td - xd * y + x * yd;
        let c1 = 2.0 * (a * yd - b * xd);
        let c2 = a * bd - ad * b;
        FrameVector::new(
            xd + s * ad,
            yd + s * bd,
            c0 + c1 * s + c2 * s * s,
            self.point(eps, s),
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChartKind {
    TGraph,
    IntrinsicGraph,
    Ruled,
}

/// A parameterized surface patch.
#[derive(Clone)]
pub enum SurfaceChart {
    /// `(x, y) -> (x, y, u(x, y))`.
    TGraph {
        u: GraphFn,
        domain: Rect,
    },
    /// `(x, t) -> (x, u(x, t), t - x u(x, t))`.
    IntrinsicGraph {
        u: GraphFn,
        domain: Rect,
    },
    Ruled(RuledChart),
}

/// Frame data of an oriented surface at a regular point.
#[derive(Clone, Copy, Debug)]
pub struct SurfaceFrame {
    pub point: Point,
    /// Unit normal N.
    pub n: FrameVector,
    /// Norm of the horizontal projection of N.
    pub nh_norm: f64,
    /// Vertical component <N, T>.
    pub n_t: f64,
    /// Horizontal unit normal.
    pub nu_h: FrameVector,
    /// Characteristic direction Z = J(nu_h), tangent and horizontal.
    pub z: FrameVector,
    /// The tangent vector S = <N,T> nu_h - |N_h| T.
    pub s: FrameVector,
}

impl SurfaceFrame {
    /// The ratio <N,T>/|N_h|, the scalar carried along characteristics.
    pub fn u_ratio(&self) -> f64 {
        self.n_t / self.nh_norm
    }
}

impl SurfaceChart {
    pub fn t_graph(u: GraphFn, domain: Rect) -> SurfaceChart {
        SurfaceChart::TGraph { u, domain }
    }

    pub fn intrinsic_graph(u: GraphFn, domain: Rect) -> SurfaceChart {
        SurfaceChart::IntrinsicGraph { u, domain }
    }

    pub fn ruled(chart: RuledChart) -> SurfaceChart {
        SurfaceChart::Ruled(chart)
    }

    pub fn kind(&self) -> ChartKind {
        match self {
            SurfaceChart::TGraph { .. } => ChartKind::TGraph,
            SurfaceChart::IntrinsicGraph { .. } => ChartKind::IntrinsicGraph,
            SurfaceChart::Ruled(_) => ChartKind::Ruled,
        }
    }

    pub fn domain(&self) -> Rect {
        match self {
            SurfaceChart::TGraph { domain, .. } | SurfaceChart::IntrinsicGraph { domain, .. } => {
                *domain
            }
            SurfaceChart::Ruled(r) => Rect {
                lo: [r.eps_range[0], r.s_range[0]],
                hi: [r.eps_range[1], r.s_range[1]],
            },
        }
    }

    /// Image of a parameter pair. Evaluation is total; domain membership is
    /// enforced by [`frame`](Self::frame) and by the quadrature layer.
    pub fn point(&self, p: [f64; 2]) -> Point {
        match self {
            SurfaceChart::TGraph { u, .. } => Point::new(p[0], p[1], u.eval(p[0], p[1])),
            SurfaceChart::IntrinsicGraph { u, .. } => {
                let v = u.eval(p[0], p[1]);
                Point::new(p[0], v, p[1] - p[0] * v)
            }
            SurfaceChart::Ruled(r) => r.point(p[0], p[1]),
        }
    }

    /// Coordinate tangent vectors `(d1, d2)` in frame components.
    ///
    /// For a t-graph these are `(1, 0, u_x - y)` and `(0, 1, u_y + x)`; for an
    /// intrinsic graph `(1, u_x, -2u)` and `(0, u_t, 1)`; for a ruled strip
    /// the deformation vector and the ruling direction.
    pub fn tangents(&self, p: [f64; 2]) -> (FrameVector, FrameVector) {
        match self {
            SurfaceChart::TGraph { u, .. } => {
                let (ux, uy) = u.partials(p[0], p[1]);
                let base = self.point(p);
                (
                    FrameVector::new(1.0, 0.0, ux - p[1], base),
                    FrameVector::new(0.0, 1.0, uy + p[0], base),
                )
            }
            SurfaceChart::IntrinsicGraph { u, .. } => {
                let (ux, ut) = u.partials(p[0], p[1]);
                let v = u.eval(p[0], p[1]);
                let base = self.point(p);
                (
                    FrameVector::new(1.0, ux, -2.0 * v, base),
                    FrameVector::new(0.0, ut, 1.0, base),
                )
            }
            SurfaceChart::Ruled(r) => (r.deformation(p[0], p[1]), r.ruling_tangent(p[0], p[1])),
        }
    }

    /// Unnormalized normal with the fixed orientation convention: `d1 x d2`
    /// for graphs, `dF/ds x dF/deps` for ruled strips.
    pub fn raw_normal(&self, p: [f64; 2]) -> FrameVector {
        let (d1, d2) = self.tangents(p);
        let n = match self {
            SurfaceChart::Ruled(_) => d2.cross(d1),
            _ => d1.cross(d2),
        };
        n.expect("tangents share a base point")
    }

    pub fn unit_normal(&self, p: [f64; 2]) -> Result<FrameVector> {
        let n = self.raw_normal(p);
        let len = n.norm();
        if len <= crate::tol::DEGENERATE {
            return Err(Error::DegenerateChart { p1: p[0], p2: p[1] });
        }
        Ok(n.scale(1.0 / len))
    }

    /// Riemannian area element `|d1 x d2|` of the parameterization.
    pub fn area_element(&self, p: [f64; 2]) -> f64 {
        self.raw_normal(p).norm()
    }

    /// Sub-Riemannian area density: |N_h| times the Riemannian area element,
    /// which is the norm of the horizontal part of the raw normal. For an
    /// intrinsic graph this reduces to `sqrt(1 + (u_x + 2 u u_t)^2)`.
    pub fn sr_area_density(&self, p: [f64; 2]) -> f64 {
        let n = self.raw_normal(p);
        (n.a * n.a + n.b * n.b).sqrt()
    }

    /// Full frame data at a parameter; errors on domain exit and on singular
    /// points where `|N_h| <= params.singular_tol`.
    pub fn frame(&self, p: [f64; 2], params: &NumericParams) -> Result<SurfaceFrame> {
        if !self.domain().contains(p) {
            return Err(Error::OutsideDomain { p1: p[0], p2: p[1] });
        }
        let n = self.unit_normal(p)?;
        let nh_norm = (n.a * n.a + n.b * n.b).sqrt();
        if nh_norm <= params.singular_tol {
            return Err(Error::SingularPoint {
                nh: nh_norm,
                p1: p[0],
                p2: p[1],
            });
        }
        let nu_h = FrameVector::new(n.a / nh_norm, n.b / nh_norm, 0.0, n.base);
        let z = nu_h.j();
        let s = FrameVector::new(n.c * nu_h.a, n.c * nu_h.b, -nh_norm, n.base);
        Ok(SurfaceFrame {
            point: n.base,
            n,
            nh_norm,
            n_t: n.c,
            nu_h,
            z,
            s,
        })
    }

    /// Parameters of a `grid` scan of `region` whose unit normal is
    /// horizontal up to `params.singular_tol`.
    pub fn singular_scan(
        &self,
        region: &Rect,
        grid: [usize; 2],
        params: &NumericParams,
    ) -> Result<Vec<[f64; 2]>> {
        if grid[0] < 2 || grid[1] < 2 {
            return Err(Error::InvalidGrid {
                n1: grid[0],
                n2: grid[1],
            });
        }
        if !self.domain().contains_with_margin(region, 0.0) {
            return Err(Error::RegionEscapesDomain);
        }
        let mut out = Vec::new();
        for i in 0..grid[0] {
            for k in 0..grid[1] {
                let p = [
                    region.lo[0] + (region.hi[0] - region.lo[0]) * i as f64 / (grid[0] - 1) as f64,
                    region.lo[1] + (region.hi[1] - region.lo[1]) * k as f64 / (grid[1] - 1) as f64,
                ];
                let n = self.unit_normal(p)?;
                if (n.a * n.a + n.b * n.b).sqrt() <= params.singular_tol {
                    out.push(p);
                }
            }
        }
        Ok(out)
    }

    /// Graph chart with `u` replaced by `u + eps * g`; errors on ruled charts.
    pub fn perturbed(&self, g: &GraphFn, eps: f64) -> Result<SurfaceChart> {
        match self {
            SurfaceChart::TGraph { u, domain } => Ok(SurfaceChart::TGraph {
                u: u.axpy(g, eps),
                domain: *domain,
            }),
            SurfaceChart::IntrinsicGraph { u, domain } => Ok(SurfaceChart::IntrinsicGraph {
                u: u.axpy(g, eps),
                domain: *domain,
            }),
            SurfaceChart::Ruled(_) => Err(Error::NotAGraphChart),
        }
    }

    /// Parameter velocity of the normalized characteristic direction Z,
    /// solving the Gram system of the coordinate tangents.
    pub fn char_velocity(&self, p: [f64; 2], params: &NumericParams) -> Result<[f64; 2]> {
        let fr = self.frame(p, params)?;
        self.tangent_coordinates(p, fr.z)
    }

    /// Parameter velocity of S (unit, tangent, `<S, Z> = 0`).
    pub fn s_velocity(&self, p: [f64; 2], params: &NumericParams) -> Result<[f64; 2]> {
        let fr = self.frame(p, params)?;
        self.tangent_coordinates(p, fr.s)
    }

    /// Coordinates of a tangent vector in the `(d1, d2)` basis via the Gram
    /// system; errors when the parameterization degenerates.
    pub fn tangent_coordinates(&self, p: [f64; 2], v: FrameVector) -> Result<[f64; 2]> {
        let (d1, d2) = self.tangents(p);
        let g11 = d1.inner(d1)?;
        let g12 = d1.inner(d2)?;
        let g22 = d2.inner(d2)?;
        let r1 = v.inner(d1)?;
        let r2 = v.inner(d2)?;
        crate::numeric::solve2([[g11, g12], [g12, g22]], [r1, r2])
            .ok_or(Error::DegenerateChart { p1: p[0], p2: p[1] })
    }
}

/// Built-in reference surfaces.
pub mod builtin {
    use super::*;

    /// The vertical plane carried by the intrinsic graph `u = a x`.
    pub fn vertical_plane(a: f64, domain: Rect) -> SurfaceChart {
        SurfaceChart::intrinsic_graph(
            GraphFn::analytic(move |x, _| a * x, move |_, _| a, |_, _| 0.0),
            domain,
        )
    }

    /// The t-graph `t = x y`, singular exactly on the line x = 0.
    pub fn paraboloid(domain: Rect) -> SurfaceChart {
        SurfaceChart::t_graph(GraphFn::analytic(|x, y| x * y, |_, y| y, |x, _| x), domain)
    }

    /// The ruled strip `(s cos(eps), s sin(eps), eps)`: horizontal lines
    /// rotating along the vertical axis.
    pub fn helicoid(eps_range: [f64; 2], s_range: [f64; 2]) -> SurfaceChart {
        SurfaceChart::ruled(RuledChart::analytic(
            |eps| Point::new(0.0, 0.0, eps),
            |_| [0.0, 0.0, 1.0],
            |eps| [eps.cos(), eps.sin()],
            |eps| [-eps.sin(), eps.cos()],
            eps_range,
            s_range,
        ))
    }

    /// The t-graph `u = x y - x |x| / lambda` (lambda > 0), singular on x = 0.
    pub fn u_lambda(lambda: f64, domain: Rect) -> Result<SurfaceChart> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::InvalidDomain {
                reason: "lambda must be positive and finite",
            });
        }
        Ok(SurfaceChart::t_graph(
            GraphFn::analytic(
                move |x, y| x * y - x * x.abs() / lambda,
                move |x, y| y - 2.0 * x.abs() / lambda,
                |x, _| x,
            ),
            domain,
        ))
    }

    /// The intrinsic graph `u = sign(t) sqrt(lambda |t|)` (lambda > 0); the
    /// domain must keep t away from 0, where the surface is not C^1.
    pub fn v_lambda(lambda: f64, domain: Rect) -> Result<SurfaceChart> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::InvalidDomain {
                reason: "lambda must be positive and finite",
            });
        }
        if domain.lo[1] <= 0.0 && domain.hi[1] >= 0.0 {
            return Err(Error::InvalidDomain {
                reason: "v_lambda needs t bounded away from 0",
            });
        }
        Ok(SurfaceChart::intrinsic_graph(
            GraphFn::analytic(
                move |_, t| t.signum() * (lambda * t.abs()).sqrt(),
                |_, _| 0.0,
                move |_, t| lambda / (2.0 * (lambda * t.abs()).sqrt()),
            ),
            domain,
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> NumericParams {
        NumericParams::default()
    }

    fn rect(a: f64, b: f64, c: f64, d: f64) -> Rect {
        Rect::new([a, c], [b, d]).unwrap()
    }

    #[test]
    fn rect_rejects_inverted_ranges() {
        assert!(Rect::new([0.0, 0.0], [0.0, 1.0]).is_err());
        assert!(Rect::new([0.0, 2.0], [1.0, 1.0]).is_err());
    }

    #[test]
    fn intrinsic_plane_frame_is_the_classical_one() {
        let plane = builtin::vertical_plane(0.0, rect(-1.0, 1.0, -1.0, 1.0));
        let fr = plane.frame([0.2, -0.3], &params()).unwrap();
        assert!((fr.n.a - 0.0).abs() < 1e-15);
        assert!((fr.n.b + 1.0).abs() < 1e-15);
        assert!((fr.n.c - 0.0).abs() < 1e-15);
        assert!((fr.nh_norm - 1.0).abs() < 1e-15);
        assert_eq!(fr.n_t, 0.0);
        // Z = J(nu_h) = X and S = -T.
        assert!((fr.z.a - 1.0).abs() < 1e-15 && fr.z.b.abs() < 1e-15);
        assert!((fr.s.c + 1.0).abs() < 1e-15 && fr.s.a.abs() < 1e-15);
    }

    #[test]
    fn paraboloid_frame_matches_hand_values() {
        let par = builtin::paraboloid(rect(-2.0, 2.0, -2.0, 2.0));
        let fr = par.frame([1.0, 1.0], &params()).unwrap();
        let r5 = 5.0f64.sqrt();
        assert!((fr.nh_norm - 2.0 / r5).abs() < 1e-14);
        assert!((fr.n_t.abs() - 1.0 / r5).abs() < 1e-14);
        assert!((fr.nh_norm * fr.nh_norm + fr.n_t * fr.n_t - 1.0).abs() < 1e-14);
        assert!((fr.u_ratio().abs() - 0.5).abs() < 1e-14);
        // The characteristic direction at x > 0 projects onto +x.
        assert!((fr.z.a - 1.0).abs() < 1e-14 && fr.z.b.abs() < 1e-13);
    }

    #[test]
    fn paraboloid_singular_set_is_the_x_zero_line() {
        let par = builtin::paraboloid(rect(-1.0, 1.0, -1.0, 1.0));
        let hits = par
            .singular_scan(&rect(-1.0, 1.0, -1.0, 1.0), [5, 5], &params())
            .unwrap();
        assert_eq!(hits.len(), 5);
        assert!(hits.iter().all(|p| p[0] == 0.0));
        assert!(matches!(
            par.frame([0.0, 0.5], &params()),
            Err(Error::SingularPoint { .. })
        ));
    }

    #[test]
    fn intrinsic_graph_tangents_and_normal_follow_the_reference_formulas() {
        // u = x on a box: d1 = X + Y, d2 = T up to the -2u vertical part.
        let chart = builtin::vertical_plane(1.0, rect(-1.0, 1.0, -1.0, 1.0));
        let (d1, d2) = chart.tangents([0.5, 0.2]);
        assert!((d1.a, d1.b) == (1.0, 1.0));
        assert!((d1.c + 2.0 * 0.5).abs() < 1e-15);
        assert!((d2.a, d2.b, d2.c) == (0.0, 0.0, 1.0));
        let n = chart.raw_normal([0.5, 0.2]);
        // (u_x + 2 u u_t) X - Y + u_t T with u_t = 0.
        assert!((n.a - 1.0).abs() < 1e-15);
        assert!((n.b + 1.0).abs() < 1e-15);
        assert!(n.c.abs() < 1e-15);
        assert!((chart.sr_area_density([0.5, 0.2]) - 2.0f64.sqrt()).abs() < 1e-15);
        assert!((chart.area_element([0.5, 0.2]) - 2.0f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn helicoid_frame_matches_hand_values() {
        let hel = builtin::helicoid([-0.5, 0.5], [-2.0, 2.0]);
        let n = hel.raw_normal([0.0, 1.0]);
        assert!(n.a.abs() < 1e-15);
        assert!((n.b + 2.0).abs() < 1e-15);
        assert!((n.c - 1.0).abs() < 1e-15);
        let fr = hel.frame([0.0, 1.0], &params()).unwrap();
        let r5 = 5.0f64.sqrt();
        assert!((fr.nh_norm - 2.0 / r5).abs() < 1e-15);
        assert!((fr.n_t - 1.0 / r5).abs() < 1e-15);
        assert!((fr.u_ratio() - 0.5).abs() < 1e-15);
        // Z coincides with the ruling direction.
        assert!((fr.z.a - 1.0).abs() < 1e-14 && fr.z.b.abs() < 1e-14);
        // The axis itself is regular: |N_h| = 1 there.
        let fr0 = hel.frame([0.3, 0.0], &params()).unwrap();
        assert!((fr0.nh_norm - 1.0).abs() < 1e-15);
        assert!((fr0.n_t - 0.0).abs() < 1e-15);
    }

    #[test]
    fn helicoid_deformation_vector_closed_form() {
        let hel = builtin::helicoid([-1.0, 1.0], [-2.0, 2.0]);
        let eps = 0.4;
        for s in [-1.5, -0.3, 0.0, 0.8, 2.0] {
            let v = match &hel {
                SurfaceChart::Ruled(r) => r.deformation(eps, s),
                _ => unreachable!(),
            };
            assert!((v.a + s * eps.sin()).abs() < 1e-14);
            assert!((v.b - s * eps.cos()).abs() < 1e-14);
            assert!((v.c - (1.0 + s * s)).abs() < 1e-14);
        }
    }

    #[test]
    fn v_lambda_rejects_domains_through_zero() {
        assert!(builtin::v_lambda(2.0, rect(-1.0, 1.0, -1.0, 1.0)).is_err());
        assert!(builtin::v_lambda(-1.0, rect(-1.0, 1.0, 0.5, 1.0)).is_err());
        let ok = builtin::v_lambda(2.0, rect(-1.0, 1.0, 0.5, 1.5)).unwrap();
        // sigma = u_x + 2 u u_t is the constant lambda on t > 0, so the
        // horizontal part of the raw normal is (lambda, -1).
        let n = ok.raw_normal([0.2, 1.0]);
        assert!((n.a - 2.0).abs() < 1e-12);
        assert!((n.b + 1.0).abs() < 1e-12);
    }

    #[test]
    fn u_lambda_singularity_and_density() {
        let chart = builtin::u_lambda(2.0, rect(-1.0, 1.0, -1.0, 1.0)).unwrap();
        // alpha = -2|x|/lambda = -|x|, beta = 2x, density = |x| sqrt(1 + 4).
        let d = chart.sr_area_density([0.5, -0.3]);
        assert!((d - 0.5 * 5.0f64.sqrt()).abs() < 1e-14);
        assert!(matches!(
            chart.frame([0.0, 0.1], &NumericParams::default()),
            Err(Error::SingularPoint { .. })
        ));
    }

    #[test]
    fn frame_errors_outside_domain() {
        let plane = builtin::vertical_plane(0.0, rect(-1.0, 1.0, -1.0, 1.0));
        assert!(matches!(
            plane.frame([2.0, 0.0], &params()),
            Err(Error::OutsideDomain { .. })
        ));
    }

    #[test]
    fn char_velocity_on_intrinsic_graphs_is_w_normalized() {
        // For an intrinsic graph Z has parameter velocity (1, 2u) / |Z~|.
        let chart = builtin::vertical_plane(1.0, rect(-1.0, 1.0, -1.0, 1.0));
        let p = [0.5, 0.2];
        let v = chart.char_velocity(p, &params()).unwrap();
        let u = 0.5;
        let sigma = 1.0f64;
        let speed = (1.0 + sigma * sigma).sqrt();
        assert!((v[0] - 1.0 / speed).abs() < 1e-12);
        assert!((v[1] - 2.0 * u / speed).abs() < 1e-12);
    }

    #[test]
    fn s_velocity_on_the_flat_plane_descends_in_t() {
        let plane = builtin::vertical_plane(0.0, rect(-1.0, 1.0, -1.0, 1.0));
        let v = plane.s_velocity([0.3, 0.1], &params()).unwrap();
        assert!(v[0].abs() < 1e-13);
        assert!((v[1] + 1.0).abs() < 1e-13);
    }

    #[test]
    fn perturbed_rejects_ruled_charts() {
        let hel = builtin::helicoid([-1.0, 1.0], [-1.0, 1.0]);
        let bump = GraphFn::numeric(|_, _| 1.0, 1e-5);
        assert!(matches!(
            hel.perturbed(&bump, 0.1),
            Err(Error::NotAGraphChart)
        ));
    }

    #[test]
    fn numeric_partials_agree_with_analytic_ones() {
        let analytic = GraphFn::analytic(
            |x, y| (x * y).sin(),
            |x, y| y * (x * y).cos(),
            |x, y| x * (x * y).cos(),
        );
        let numeric = GraphFn::numeric(|x, y| (x * y).sin(), 1e-6);
        let (ax, ay) = analytic.partials(0.7, -0.4);
        let (nx, ny) = numeric.partials(0.7, -0.4);
        assert!((ax - nx).abs() < 1e-9);
        assert!((ay - ny).abs() < 1e-9);
    }
}

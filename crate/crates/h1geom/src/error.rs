use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

/// Failure modes of chart, foliation and variation operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("frame vectors based at different points")]
    BaseMismatch,
    #[error("singular point (|N_h| = {nh:e}) at parameter ({p1}, {p2})")]
    SingularPoint { nh: f64, p1: f64, p2: f64 },
    #[error("normal vector vanishes at parameter ({p1}, {p2})")]
    DegenerateChart { p1: f64, p2: f64 },
    #[error("parameter ({p1}, {p2}) lies outside the chart domain")]
    OutsideDomain { p1: f64, p2: f64 },
    #[error("region is not contained in the chart domain")]
    RegionEscapesDomain,
    #[error("empty or inverted region")]
    EmptyRegion,
    #[error("grid must be odd and at least 3 nodes per axis, got {n1}x{n2}")]
    InvalidGrid { n1: usize, n2: usize },
    #[error("step must be positive and finite")]
    BadStep,
    #[error("need at least {need} samples, got {got}")]
    TooFewSamples { need: usize, got: usize },
    #[error("all samples coincide, no line direction")]
    DegenerateSamples,
    #[error("closed-form denominator vanishes at s = {s}")]
    PoleAt { s: f64 },
    #[error("profile must carry a sample at s = 0 in its interior")]
    MissingCenterSample,
    #[error("profile does not follow the closed Codazzi family (deviation {deviation:e})")]
    NotACodazziProfile { deviation: f64 },
    #[error("ruling direction is not horizontal (vertical frame component {c:e})")]
    NotHorizontal { c: f64 },
    #[error("ruling direction is not unit (norm deviation {dev:e})")]
    NotUnit { dev: f64 },
    #[error("vertical component is not quadratic in s (fit residual {residual:e})")]
    NotQuadratic { residual: f64 },
    #[error("vertical-component polynomial has a root in the sampled range")]
    PolynomialRoot,
    #[error("test-function support is not inside the region with the required margin")]
    SupportViolation,
    #[error("test-function support touches the singular set")]
    SupportTouchesSingularSet,
    #[error("q changes sign on the sampled strip")]
    MixedSignQ,
    #[error("operation requires a graph chart of the right kind")]
    NotAGraphChart,
    #[error("invalid domain: {reason}")]
    InvalidDomain { reason: &'static str },
}

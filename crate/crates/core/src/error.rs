use thiserror::Error;

/// Errors reported by the library. Numerical ambiguities are surfaced, never
/// silently resolved.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("zero polynomial has no root set")]
    ZeroPolynomial,
    #[error("root iteration did not converge after {iterations} iterations (residual {residual:.3e})")]
    NonConvergence { iterations: usize, residual: f64 },
    #[error("gcd degree is ambiguous at tolerance {tol:.3e}: singular values {sigma_hi:.3e} / {sigma_lo:.3e} near the cut")]
    AmbiguousGcdDegree { tol: f64, sigma_hi: f64, sigma_lo: f64 },
    #[error("root multiplicity is ambiguous at tolerance {tol:.3e} (cluster separation {separation:.3e})")]
    AmbiguousMultiplicity { tol: f64, separation: f64 },
    #[error("gcd degree routes disagree: rank decision {rank}, root clustering {clusters}")]
    DegreeDisagreement { rank: usize, clusters: usize },
    #[error("degenerate pencil: {0}")]
    DegeneratePencil(String),
    #[error("duplicate positions: |alpha_{i} - alpha_{j}| = {dist:.3e}")]
    DuplicatePositions { i: usize, j: usize, dist: f64 },
    #[error("singular linear system: positions collide (smallest singular value {sigma_min:.3e})")]
    CollisionSingular { sigma_min: f64 },
    #[error("collinear points")]
    CollinearPoints,
    #[error("total mass is zero: continued-fraction normalization impossible")]
    ZeroTotalMass,
    #[error("chain splits: a_{index}^2 vanishes (|a^2| = {value:.3e})")]
    SplitChain { index: usize, value: f64 },
    #[error("collision at t = {t_re}+{t_im}i encountered")]
    CollisionEncountered { t_re: f64, t_im: f64 },
    #[error("polynomials share a zero (base point of the linear system), gcd degree {degree}")]
    BasePoint { degree: usize },
    #[error("sampling produced too few points ({got}, need {need})")]
    TooFewSamples { got: usize, need: usize },
    #[error("masses are not real on the sampled range (max |Im m| = {max_im:.3e} at t = {t})")]
    NonRealMasses { max_im: f64, t: f64 },
    #[error("certificate shape mismatch at t_{index}: residual {residual:.3e}")]
    ShapeMismatch { index: usize, residual: f64 },
    #[error("no admissible integer a <= {limit} with N = a/n (N = {n_value:.6e}, n = {n}); lattice inclusion consistent: {lattice_consistent}")]
    NoAdmissibleA { n_value: f64, n: usize, limit: usize, lattice_consistent: bool },
    #[error("degenerate elliptic curve: branch points collide")]
    DegenerateCurve,
    #[error("modulus k^2 = 1 has no finite quarter period")]
    ModulusOne,
    #[error("degenerate division point: sn(4r*omega) vanishes or blows up at r = {r}")]
    DegenerateOmega { r: usize },
    #[error("m = {m}, m' = {m_prime} share a divisor with n = {n}")]
    GcdCondition { m: i64, m_prime: i64, n: usize },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;

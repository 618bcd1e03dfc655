//! Approximate polynomial GCD: rank decision on the Sylvester matrix with an
//! explicit ambiguity report, then least-squares cofactor refinement. The
//! degree decision is the point — the decomposition criterion is a statement
//! about GCD degrees.

use crate::error::{Error, Result};
use crate::linalg;
use crate::poly::{C64, Poly, ZERO};
use crate::resultant::sylvester;
use nalgebra::{DMatrix, DVector};

/// Minimum spectral-gap ratio at the rank cut for the decision to count as
/// well conditioned.
const GAP_FACTOR: f64 = 30.0;

/// Decide deg gcd(p, q) from the Sylvester singular spectrum. Reports
/// ambiguity when the spectrum has no clean gap at the tolerance cut.
pub fn gcd_degree(p: &Poly, q: &Poly, tol: f64) -> Result<usize> {
    let (dp, dq) = match (p.degree(), q.degree()) {
        (None, None) => return Err(Error::ZeroPolynomial),
        (None, Some(d)) | (Some(d), None) => return Ok(d),
        (Some(a), Some(b)) => (a, b),
    };
    if dp == 0 || dq == 0 {
        return Ok(0);
    }
    let sv = linalg::singular_values(&sylvester(p, q)?);
    let smax = sv[0];
    if smax == 0.0 {
        return Err(Error::ZeroPolynomial);
    }
    let cut = tol * smax;
    let rank = sv.iter().filter(|&&s| s > cut).count();
    let deg = sv.len() - rank;
    if deg > 0 {
        let hi = sv[rank - 1];
        let lo = sv[rank];
        if hi / lo.max(f64::MIN_POSITIVE) < GAP_FACTOR {
            return Err(Error::AmbiguousGcdDegree { tol, sigma_hi: hi, sigma_lo: lo });
        }
    }
    Ok(deg.min(dp.min(dq)))
}

fn convolution_matrix(u: &Poly, g_len: usize) -> DMatrix<C64> {
    let rows = u.coeffs().len() + g_len - 1;
    let mut m = DMatrix::from_element(rows, g_len, ZERO);
    for (i, &c) in u.coeffs().iter().enumerate() {
        for j in 0..g_len {
            m[(i + j, j)] = c;
        }
    }
    m
}

/// Monic approximate GCD with its certified degree.
///
/// The degree comes from the Sylvester rank decision; the polynomial from the
/// null-space cofactors followed by a least-squares solve of the stacked
/// convolution systems cof_p * g = p, cof_q * g = q.
pub fn poly_gcd(p: &Poly, q: &Poly, tol: f64) -> Result<(Poly, usize)> {
    match (p.degree(), q.degree()) {
        (None, None) => return Err(Error::ZeroPolynomial),
        (None, Some(_)) => return Ok((q.monic()?, q.degree().unwrap())),
        (Some(_), None) => return Ok((p.monic()?, p.degree().unwrap())),
        _ => {}
    }
    let d = gcd_degree(p, q, tol)?;
    if d == 0 {
        return Ok((Poly::one(), 0));
    }
    let dp = p.degree().unwrap();
    let dq = q.degree().unwrap();

    // Null space of the truncated pencil map (a, b) -> a*p + b*q with
    // deg a = dq - d, deg b = dp - d: one-dimensional at the true degree.
    let a_len = dq - d + 1;
    let b_len = dp - d + 1;
    let rows = dp + dq - d + 1;
    let mut m = DMatrix::from_element(rows, a_len + b_len, ZERO);
    for j in 0..a_len {
        for (k, &cf) in p.coeffs().iter().enumerate() {
            m[(j + k, j)] = cf;
        }
    }
    for j in 0..b_len {
        for (k, &cf) in q.coeffs().iter().enumerate() {
            m[(j + k, a_len + j)] = cf;
        }
    }
    let ns = linalg::null_space(&m, 1)?;
    let v = &ns[0];
    let cof_q = Poly::new((0..a_len).map(|i| v[i]).collect());
    let cof_p = Poly::new((0..b_len).map(|i| -v[a_len + i]).collect());
    if cof_p.is_zero() || cof_q.is_zero() {
        return Err(Error::Numerical("degenerate cofactors in gcd refinement".into()));
    }

    // Least squares for g over both factorizations at once.
    let g_len = d + 1;
    let mp = convolution_matrix(&cof_p, g_len);
    let mq = convolution_matrix(&cof_q, g_len);
    let rows_p = mp.nrows();
    let rows_q = mq.nrows();
    let mut stacked = DMatrix::from_element(rows_p + rows_q, g_len, ZERO);
    stacked.view_mut((0, 0), (rows_p, g_len)).copy_from(&mp);
    stacked.view_mut((rows_p, 0), (rows_q, g_len)).copy_from(&mq);
    let mut rhs = DVector::from_element(rows_p + rows_q, ZERO);
    for i in 0..rows_p {
        rhs[i] = p.coeff(i);
    }
    for i in 0..rows_q {
        rhs[rows_p + i] = q.coeff(i);
    }
    let g = linalg::lstsq(&stacked, &rhs)?;
    let g = Poly::new(g.iter().copied().collect()).monic()?;
    Ok((g, d))
}

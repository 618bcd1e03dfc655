//! Sylvester matrices, resultants, and the pencil discriminant: the
//! resultant of phi + t*f and its z-derivative, eliminated in z and returned
//! as a polynomial in t. Its roots are the collision moments.

use crate::error::{Error, Result};
use crate::linalg;
use crate::poly::{c, cr, C64, Poly, ZERO};
use nalgebra::DMatrix;

/// Sylvester matrix of p (degree m) and q (degree n), size (m+n)^2.
/// Rows are the coefficient vectors of x^j*p (j = 0..n-1) and x^j*q
/// (j = 0..m-1) in ascending column order.
pub fn sylvester(p: &Poly, q: &Poly) -> Result<DMatrix<C64>> {
    let m = p.degree().ok_or(Error::ZeroPolynomial)?;
    let n = q.degree().ok_or(Error::ZeroPolynomial)?;
    let size = m + n;
    if size == 0 {
        return Err(Error::InvalidInput("both polynomials constant".into()));
    }
    let mut s = DMatrix::from_element(size, size, ZERO);
    for j in 0..n {
        for k in 0..=m {
            s[(j, j + k)] = p.coeff(k);
        }
    }
    for j in 0..m {
        for k in 0..=n {
            s[(n + j, j + k)] = q.coeff(k);
        }
    }
    Ok(s)
}

/// Resultant Res(p, q) up to sign (determinant of the Sylvester matrix).
pub fn resultant(p: &Poly, q: &Poly) -> Result<C64> {
    Ok(linalg::determinant(&sylvester(p, q)?))
}

/// The Sylvester matrix of (Phi_t, dPhi_t/dz) with the degree structure
/// (n, n-1) fixed symbolically, evaluated at a numeric t.
fn pencil_sylvester_at(phi: &Poly, f: &Poly, n: usize, t: C64) -> DMatrix<C64> {
    let phi_t: Vec<C64> = (0..=n).map(|k| phi.coeff(k) + t * f.coeff(k)).collect();
    let dphi_t: Vec<C64> = (1..=n).map(|k| phi_t[k] * cr(k as f64)).collect();
    let size = 2 * n - 1;
    let mut s = DMatrix::from_element(size, size, ZERO);
    for j in 0..n - 1 {
        for k in 0..=n {
            s[(j, j + k)] = phi_t[k];
        }
    }
    for j in 0..n {
        for k in 0..n {
            s[(n - 1 + j, j + k)] = dphi_t[k];
        }
    }
    s
}

/// Resultant of Phi_t(z) = phi(z) + t*f(z) and its z-derivative, eliminating
/// z, as a polynomial in t. Vanishes exactly at parameters where Phi_t has a
/// multiple root. Computed by determinant evaluation at roots of unity and
/// inverse DFT.
pub fn disc_in_t(phi: &Poly, f: &Poly) -> Result<Poly> {
    let n = phi.degree().ok_or(Error::ZeroPolynomial)?;
    if n < 1 {
        return Err(Error::DegeneratePencil("phi must have degree >= 1".into()));
    }
    if let Some(df) = f.degree() {
        if df > n {
            return Err(Error::DegeneratePencil(format!(
                "deg f = {df} exceeds deg phi = {n}"
            )));
        }
    } else {
        return Err(Error::ZeroPolynomial);
    }
    if n == 1 {
        // linear pencil never has a multiple root
        return Ok(Poly::one());
    }

    // deg_t det <= 2n - 1: one affine-in-t factor per row.
    let samples = 2 * n;
    let mut values = Vec::with_capacity(samples);
    for j in 0..samples {
        let theta = 2.0 * std::f64::consts::PI * (j as f64) / (samples as f64);
        let t = c(theta.cos(), theta.sin());
        values.push(linalg::determinant(&pencil_sylvester_at(phi, f, n, t)));
    }
    // inverse DFT on the unit circle
    let mut coeffs = Vec::with_capacity(samples);
    for k in 0..samples {
        let mut acc = ZERO;
        for (j, &v) in values.iter().enumerate() {
            let theta = -2.0 * std::f64::consts::PI * (j * k) as f64 / (samples as f64);
            acc += v * c(theta.cos(), theta.sin());
        }
        coeffs.push(acc / cr(samples as f64));
    }
    let disc = Poly::new(coeffs).trim_relative(1e-11);
    if disc.is_zero() {
        return Err(Error::DegeneratePencil(
            "discriminant vanishes identically (pencil of non-squarefree polynomials)".into(),
        ));
    }
    Ok(disc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::roots;

    #[test]
    fn hand_resultant_quadratic_pencil() {
        // phi = z^2 - 1, f = z: Res(z^2 + tz - 1, 2z + t) = t^2 + 4
        let phi = Poly::from_real(&[-1.0, 0.0, 1.0]);
        let f = Poly::from_real(&[0.0, 1.0]);
        let d = disc_in_t(&phi, &f).unwrap();
        let expect = Poly::from_real(&[4.0, 0.0, 1.0]);
        // up to sign
        let s = d.leading() / expect.leading();
        assert!((s.norm() - 1.0).abs() < 1e-10);
        assert!(d.max_diff(&expect.scale(s)) < 1e-9 * d.max_coeff_norm().max(1.0));
    }

    #[test]
    fn double_root_at_origin() {
        // phi = z^2, f = 1: z^2 + t has a double root iff t = 0
        let phi = Poly::from_real(&[0.0, 0.0, 1.0]);
        let f = Poly::one();
        let d = disc_in_t(&phi, &f).unwrap();
        let rs = roots::roots(&d, 1e-8).unwrap();
        assert_eq!(rs.roots.len(), 1);
        assert!(rs.roots[0].0.norm() < 1e-10);
    }

    #[test]
    fn cubic_pencil_has_four_simple_collision_moments() {
        // phi = z^3 - z, f = 3z^2 - 1
        let phi = Poly::from_real(&[0.0, -1.0, 0.0, 1.0]);
        let f = Poly::from_real(&[-1.0, 0.0, 3.0]);
        let d = disc_in_t(&phi, &f).unwrap();
        assert_eq!(d.degree(), Some(4));
        let rs = roots::roots(&d, 1e-8).unwrap();
        assert_eq!(rs.roots.len(), 4);
        assert!(rs.roots.iter().all(|&(_, m)| m == 1));
    }

    #[test]
    fn disc_roots_match_multiple_roots_of_members() {
        // cross-check on a pencil: at each disc root the member has a
        // multiplicity >= 2 root
        let phi = Poly::from_real(&[0.0, -1.0, 0.0, 1.0]);
        let f = Poly::from_real(&[-1.0, 0.0, 3.0]);
        let d = disc_in_t(&phi, &f).unwrap();
        for &(t, _) in &roots::roots(&d, 1e-8).unwrap().roots {
            let member = phi.add_scaled(&f, t);
            let rs = roots::roots(&member, 1e-5).unwrap();
            assert!(rs.max_multiplicity() >= 2, "no multiple root at t = {t}");
        }
    }
}

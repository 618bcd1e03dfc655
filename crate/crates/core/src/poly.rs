//! Univariate polynomials over the complex numbers, ascending coefficient
//! order, trailing zeros trimmed. The universal carrier for everything else.

use crate::error::{Error, Result};
use num_complex::Complex64;

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn cr(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// Complex univariate polynomial. `coeffs[k]` multiplies `z^k`; the leading
/// coefficient is nonzero unless the polynomial is identically zero (empty
/// coefficient list).
#[derive(Debug, Clone, PartialEq)]
pub struct Poly {
    coeffs: Vec<C64>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<C64>) -> Self {
        while let Some(last) = coeffs.last() {
            if last.norm() == 0.0 {
                coeffs.pop();
            } else {
                break;
            }
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        Poly { coeffs: vec![ONE] }
    }

    pub fn constant(v: C64) -> Self {
        Poly::new(vec![v])
    }

    /// The monomial `z`.
    pub fn x() -> Self {
        Poly { coeffs: vec![ZERO, ONE] }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Poly::new(coeffs.iter().map(|&r| cr(r)).collect())
    }

    /// Monic polynomial with the given roots.
    pub fn from_roots(roots: &[C64]) -> Self {
        let mut p = Poly::one();
        for &r in roots {
            p = p.mul(&Poly::new(vec![-r, ONE]));
        }
        p
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    /// Coefficient of `z^k` (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> C64 {
        self.coeffs.get(k).copied().unwrap_or(ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    /// Degree ignoring leading coefficients below `eps` relative to the
    /// largest coefficient.
    pub fn effective_degree(&self, eps: f64) -> Option<usize> {
        let scale = self.max_coeff_norm();
        if scale == 0.0 {
            return None;
        }
        let mut deg = None;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.norm() > eps * scale {
                deg = Some(k);
            }
        }
        deg
    }

    pub fn leading(&self) -> C64 {
        self.coeffs.last().copied().unwrap_or(ZERO)
    }

    pub fn max_coeff_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Horner evaluation.
    pub fn eval(&self, z: C64) -> C64 {
        let mut acc = ZERO;
        for &c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        Poly::new(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, &c)| c * cr((i + 1) as f64))
                .collect(),
        )
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) - other.coeff(k)).collect())
    }

    pub fn scale(&self, s: C64) -> Poly {
        Poly::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    /// `self + t * other`.
    pub fn add_scaled(&self, other: &Poly, t: C64) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) + t * other.coeff(k)).collect())
    }

    pub fn monic(&self) -> Result<Poly> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let lc = self.leading();
        Ok(self.scale(ONE / lc))
    }

    /// Euclidean division: `self = q * d + r` with `deg r < deg d`.
    pub fn div_rem(&self, d: &Poly) -> Result<(Poly, Poly)> {
        if d.is_zero() {
            return Err(Error::InvalidInput("division by zero polynomial".into()));
        }
        let dd = d.coeffs.len() - 1;
        if self.coeffs.len() < d.coeffs.len() {
            return Ok((Poly::zero(), self.clone()));
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![ZERO; rem.len() - dd];
        let lead = d.coeffs[dd];
        for k in (dd..rem.len()).rev() {
            let q = rem[k] / lead;
            quot[k - dd] = q;
            for j in 0..=dd {
                rem[k - dd + j] -= q * d.coeffs[j];
            }
        }
        rem.truncate(dd);
        Ok((Poly::new(quot), Poly::new(rem)))
    }

    /// Synthetic division by `(z - root)`; remainder is discarded.
    pub fn deflate(&self, root: C64) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        let n = self.coeffs.len();
        let mut out = vec![ZERO; n - 1];
        let mut carry = self.coeffs[n - 1];
        for k in (0..n - 1).rev() {
            out[k] = carry;
            carry = self.coeffs[k] + carry * root;
        }
        Poly::new(out)
    }

    /// Drop coefficients below `eps` relative to the largest one.
    pub fn trim_relative(&self, eps: f64) -> Poly {
        let scale = self.max_coeff_norm();
        if scale == 0.0 {
            return Poly::zero();
        }
        Poly::new(
            self.coeffs
                .iter()
                .map(|&c| if c.norm() <= eps * scale { ZERO } else { c })
                .collect(),
        )
    }

    pub fn max_diff(&self, other: &Poly) -> f64 {
        let n = self.coeffs.len().max(other.coeffs.len());
        (0..n)
            .map(|k| (self.coeff(k) - other.coeff(k)).norm())
            .fold(0.0, f64::max)
    }
}

impl std::fmt::Display for Poly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.norm() == 0.0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if k == 0 {
                write!(f, "({:.6}{:+.6}i)", c.re, c.im)?;
            } else {
                write!(f, "({:.6}{:+.6}i)z^{}", c.re, c.im, k)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eval_matches_horner_expansion() {
        // z^3 - (1+i) z^2 + i z = z (z-1)(z-i)
        let p = Poly::from_roots(&[ZERO, ONE, c(0.0, 1.0)]);
        assert_eq!(p.coeff(3), ONE);
        assert!((p.coeff(2) + c(1.0, 1.0)).norm() < 1e-15);
        assert!((p.coeff(1) - c(0.0, 1.0)).norm() < 1e-15);
        assert!((p.eval(c(2.0, 0.0)) - c(2.0, 0.0) * c(1.0, 0.0) * c(2.0, -1.0)).norm() < 1e-13);
    }

    #[test]
    fn div_rem_reconstructs() {
        let p = Poly::from_real(&[1.0, -2.0, 0.0, 3.0, 1.0]);
        let d = Poly::from_real(&[2.0, 1.0, 1.0]);
        let (q, r) = p.div_rem(&d).unwrap();
        let back = q.mul(&d).add(&r);
        assert!(back.max_diff(&p) < 1e-14);
        assert!(r.degree().unwrap_or(0) < d.degree().unwrap());
    }

    #[test]
    fn deflate_removes_root() {
        let p = Poly::from_roots(&[cr(2.0), cr(-1.0), c(0.5, 0.5)]);
        let q = p.deflate(cr(2.0));
        let expect = Poly::from_roots(&[cr(-1.0), c(0.5, 0.5)]);
        assert!(q.max_diff(&expect) < 1e-14);
    }

    #[test]
    fn zero_polynomial_has_no_degree() {
        assert_eq!(Poly::zero().degree(), None);
        assert_eq!(Poly::new(vec![ZERO, ZERO]).degree(), None);
    }
}

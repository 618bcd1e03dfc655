//! The continued-fraction (Stieltjes) expansion of f/Phi: tridiagonal
//! coordinates (a_i^2, b_i), the three-term delta recursion inverting it, and
//! the trivialized time evolution, which moves b_n alone.

use crate::error::{Error, Result};
use crate::poly::{C64, Poly};

/// Tridiagonal coordinates of a proper rational function f/phi with
/// deg f = n-1, deg phi = n. The continued fraction has leading numerator 1,
/// which requires unit total mass; `scale` records the true leading
/// coefficient B_n so arbitrary mass is exact.
#[derive(Debug, Clone, PartialEq)]
pub struct FlaschkaCoords {
    /// off-diagonal squares a_1^2 .. a_{n-1}^2
    pub a_sq: Vec<C64>,
    /// diagonal entries b_1 .. b_n
    pub b: Vec<C64>,
    /// total mass B_n; the flow parameter rescales as tau = B_n t
    pub scale: C64,
}

impl FlaschkaCoords {
    pub fn n(&self) -> usize {
        self.b.len()
    }
}

/// Iterated Euclidean division p_k = (z - b_k) p_{k-1} - a_{k-1}^2 p_{k-2}
/// descending from p_n = phi, p_{n-1} = f / B_n.
pub fn to_flaschka(f: &Poly, phi: &Poly) -> Result<FlaschkaCoords> {
    let n = phi.degree().ok_or(Error::ZeroPolynomial)?;
    if n == 0 {
        return Err(Error::DegeneratePencil("phi must have degree >= 1".into()));
    }
    let df = f.degree().ok_or(Error::ZeroTotalMass)?;
    if df + 1 != n {
        if df >= n {
            return Err(Error::DegeneratePencil(format!(
                "f/phi must be proper: deg f = {df}, deg phi = {n}"
            )));
        }
        // deg f < n-1 means B_n = 0
        return Err(Error::ZeroTotalMass);
    }
    let phi = phi.monic()?;
    let scale = f.leading();
    let mut p_hi = phi.clone();
    let mut p_lo = f.scale(crate::poly::ONE / scale);

    let mut b = vec![crate::poly::ZERO; n];
    let mut a_sq = vec![crate::poly::ZERO; n.saturating_sub(1)];
    let denom_scale = phi.max_coeff_norm();
    for k in (1..=n).rev() {
        // p_hi = (z - b_k) p_lo + r, deg r <= k-2
        let (q, r) = p_hi.div_rem(&p_lo)?;
        debug_assert_eq!(q.degree(), Some(1));
        b[k - 1] = -q.coeff(0) / q.coeff(1);
        if k == 1 {
            break;
        }
        // -r = a_{k-1}^2 p_{k-2} with p_{k-2} monic of degree k-2
        let lead = r.coeff(k - 2);
        if lead.norm() < 1e-12 * denom_scale.max(r.max_coeff_norm()).max(1e-300) {
            return Err(Error::SplitChain { index: k - 1, value: lead.norm() });
        }
        a_sq[k - 2] = -lead;
        p_hi = p_lo;
        p_lo = r.scale(crate::poly::ONE / lead);
        if p_lo.degree() != Some(k - 2) {
            return Err(Error::SplitChain { index: k - 1, value: lead.norm() });
        }
    }
    Ok(FlaschkaCoords { a_sq, b, scale })
}

/// delta_k by the three-term recursion; returns (f, phi) =
/// (scale * delta_{n-1}, delta_n).
pub fn from_flaschka(coords: &FlaschkaCoords) -> (Poly, Poly) {
    let n = coords.n();
    let mut prev = Poly::one(); // delta_0
    let mut cur = Poly::new(vec![-coords.b[0], crate::poly::ONE]); // delta_1
    for k in 2..=n {
        let z_minus_b = Poly::new(vec![-coords.b[k - 1], crate::poly::ONE]);
        let next = z_minus_b.mul(&cur).sub(&prev.scale(coords.a_sq[k - 2]));
        prev = cur;
        cur = next;
    }
    (prev.scale(coords.scale), cur)
}

/// The isofocal flow in these coordinates: b_n decreases at the rate of the
/// total mass, everything else is frozen.
pub fn evolve_flaschka(coords: &FlaschkaCoords, t: C64) -> FlaschkaCoords {
    let mut out = coords.clone();
    let n = out.n();
    out.b[n - 1] -= coords.scale * t;
    out
}

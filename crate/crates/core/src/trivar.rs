//! Dense homogeneous trivariate polynomials in (z0, z1, z2) and a small
//! bivariate helper used when rewriting symmetric functions.

use crate::poly::{cr, C64, ZERO};

/// Homogeneous polynomial of fixed degree in (z0, z1, z2). Monomials are
/// indexed by the exponents (e0, e1); e2 = deg - e0 - e1.
#[derive(Debug, Clone, PartialEq)]
pub struct HomPoly {
    pub deg: usize,
    coeffs: Vec<C64>,
}

impl HomPoly {
    pub fn zero(deg: usize) -> Self {
        let n = (deg + 1) * (deg + 2) / 2;
        HomPoly { deg, coeffs: vec![ZERO; n] }
    }

    fn index(&self, e0: usize, e1: usize) -> usize {
        // e0 major: block for e0 has deg+1-e0 entries
        let d = self.deg;
        let skipped: usize = (0..e0).map(|a| d + 1 - a).sum();
        skipped + e1
    }

    pub fn coeff(&self, e0: usize, e1: usize) -> C64 {
        self.coeffs[self.index(e0, e1)]
    }

    pub fn coeff_mut(&mut self, e0: usize, e1: usize) -> &mut C64 {
        let i = self.index(e0, e1);
        &mut self.coeffs[i]
    }

    pub fn monomials(&self) -> impl Iterator<Item = (usize, usize, usize, C64)> + '_ {
        let d = self.deg;
        (0..=d).flat_map(move |e0| (0..=d - e0).map(move |e1| (e0, e1, d - e0 - e1, self.coeff(e0, e1))))
    }

    pub fn eval(&self, z0: C64, z1: C64, z2: C64) -> C64 {
        let mut acc = ZERO;
        for (e0, e1, e2, c) in self.monomials() {
            if c.norm() == 0.0 {
                continue;
            }
            acc += c * z0.powu(e0 as u32) * z1.powu(e1 as u32) * z2.powu(e2 as u32);
        }
        acc
    }

    pub fn mul(&self, other: &HomPoly) -> HomPoly {
        let mut out = HomPoly::zero(self.deg + other.deg);
        for (a0, a1, _, ca) in self.monomials() {
            if ca.norm() == 0.0 {
                continue;
            }
            for (b0, b1, _, cb) in other.monomials() {
                if cb.norm() == 0.0 {
                    continue;
                }
                *out.coeff_mut(a0 + b0, a1 + b1) += ca * cb;
            }
        }
        out
    }

    pub fn scale(&self, s: C64) -> HomPoly {
        HomPoly { deg: self.deg, coeffs: self.coeffs.iter().map(|&c| c * s).collect() }
    }

    pub fn add(&self, other: &HomPoly) -> HomPoly {
        assert_eq!(self.deg, other.deg);
        HomPoly {
            deg: self.deg,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| a + b).collect(),
        }
    }

    pub fn max_coeff_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Divide by the coefficient of largest modulus: unit max-norm and fixed
    /// phase, so proportional polynomials become identical.
    pub fn normalized(&self) -> HomPoly {
        let pivot = self
            .coeffs
            .iter()
            .copied()
            .max_by(|a, b| a.norm().partial_cmp(&b.norm()).unwrap())
            .unwrap_or(ZERO);
        if pivot.norm() == 0.0 {
            return self.clone();
        }
        self.scale(cr(1.0) / pivot)
    }

    pub fn max_diff(&self, other: &HomPoly) -> f64 {
        assert_eq!(self.deg, other.deg);
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// A degree-1 form l0 z0 + l1 z1 + l2 z2.
    pub fn linear(l0: C64, l1: C64, l2: C64) -> HomPoly {
        let mut p = HomPoly::zero(1);
        *p.coeff_mut(1, 0) = l0;
        *p.coeff_mut(0, 1) = l1;
        *p.coeff_mut(0, 0) = l2;
        p
    }
}

/// Dense bivariate polynomial, `coeffs[i][j]` multiplies u^i v^j.
#[derive(Debug, Clone)]
pub struct Bivar {
    pub coeffs: Vec<Vec<C64>>,
}

impl Bivar {
    pub fn zero(du: usize, dv: usize) -> Self {
        Bivar { coeffs: vec![vec![ZERO; dv + 1]; du + 1] }
    }

    pub fn coeff(&self, i: usize, j: usize) -> C64 {
        self.coeffs.get(i).and_then(|r| r.get(j)).copied().unwrap_or(ZERO)
    }

    /// self += s * other; self must already be large enough.
    pub fn add_assign_scaled(&mut self, other: &Bivar, s: C64) {
        for i in 0..other.coeffs.len() {
            for j in 0..other.coeffs[i].len() {
                self.coeffs[i][j] += other.coeffs[i][j] * s;
            }
        }
    }

    pub fn mul(&self, other: &Bivar) -> Bivar {
        let du = self.coeffs.len() + other.coeffs.len() - 2;
        let dv = self.coeffs[0].len() + other.coeffs[0].len() - 2;
        let mut out = Bivar::zero(du, dv);
        for i in 0..self.coeffs.len() {
            for j in 0..self.coeffs[i].len() {
                let a = self.coeffs[i][j];
                if a.norm() == 0.0 {
                    continue;
                }
                for k in 0..other.coeffs.len() {
                    for l in 0..other.coeffs[k].len() {
                        out.coeffs[i + k][j + l] += a * other.coeffs[k][l];
                    }
                }
            }
        }
        out
    }

    pub fn eval(&self, u: C64, v: C64) -> C64 {
        let mut acc = ZERO;
        for (i, row) in self.coeffs.iter().enumerate() {
            let mut inner = ZERO;
            for &c in row.iter().rev() {
                inner = inner * v + c;
            }
            acc += inner * u.powu(i as u32);
        }
        acc
    }
}

/// Power sums p_k(u, v) of two variables expressed in the elementary
/// symmetric functions e1 = u+v, e2 = uv: p_0 = 2, p_1 = e1,
/// p_k = e1 p_{k-1} - e2 p_{k-2}. Returned as Bivar in (e1, e2).
pub fn power_sum_in_esym(k: usize) -> Bivar {
    let mut p_prev = Bivar::zero(0, 0);
    p_prev.coeffs[0][0] = cr(2.0);
    if k == 0 {
        return p_prev;
    }
    let mut p_cur = Bivar::zero(1, 0);
    p_cur.coeffs[1][0] = cr(1.0);
    for _ in 1..k {
        // next = e1 * p_cur - e2 * p_prev
        let du = p_cur.coeffs.len();
        let dv = p_prev.coeffs[0].len();
        let mut next = Bivar::zero(du, dv);
        for i in 0..p_cur.coeffs.len() {
            for j in 0..p_cur.coeffs[i].len() {
                next.coeffs[i + 1][j] += p_cur.coeffs[i][j];
            }
        }
        for i in 0..p_prev.coeffs.len() {
            for j in 0..p_prev.coeffs[i].len() {
                next.coeffs[i][j + 1] -= p_prev.coeffs[i][j];
            }
        }
        p_prev = p_cur;
        p_cur = next;
    }
    p_cur
}

//! Simultaneous root finding (Aberth-Ehrlich iteration) and multiplicity
//! detection by single-linkage clustering. Multiplicity counts feed the
//! decomposition criterion, so cluster centroids are Newton-refined on the
//! appropriate derivative.

use crate::error::{Error, Result};
use crate::poly::{c, cr, C64, Poly, ONE};

pub const DEFAULT_TOL: f64 = 1e-8;

const MAX_ITERATIONS: usize = 400;

/// Multiset of roots with integer multiplicities.
#[derive(Debug, Clone)]
pub struct RootSet {
    pub roots: Vec<(C64, usize)>,
    pub tol: f64,
}

impl RootSet {
    pub fn total_multiplicity(&self) -> usize {
        self.roots.iter().map(|(_, m)| m).sum()
    }

    pub fn max_multiplicity(&self) -> usize {
        self.roots.iter().map(|(_, m)| *m).max().unwrap_or(0)
    }

    /// All roots repeated with multiplicity.
    pub fn flat(&self) -> Vec<C64> {
        let mut out = Vec::with_capacity(self.total_multiplicity());
        for &(z, m) in &self.roots {
            for _ in 0..m {
                out.push(z);
            }
        }
        out
    }

    /// `lc * prod (z - root)^mult`; the reconstruction invariant compares
    /// this against the input coefficients.
    pub fn reconstruct(&self, leading: C64) -> Poly {
        Poly::from_roots(&self.flat()).scale(leading)
    }
}

/// All roots of `p` without clustering, in no particular order.
pub fn roots_raw(p: &Poly) -> Result<Vec<C64>> {
    let deg = p.degree().ok_or(Error::ZeroPolynomial)?;
    if deg == 0 {
        return Ok(vec![]);
    }
    let monic = p.monic()?;
    let a = monic.coeffs();
    let n = deg;

    // Cauchy-style inclusion radius for the initial circle.
    let radius = 1.0 + a[..n].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let gm = a[0].norm().powf(1.0 / n as f64).clamp(radius * 1e-3, radius);
    let r0 = 0.5 * (radius + gm);

    let mut z: Vec<C64> = (0..n)
        .map(|j| {
            let theta = 2.0 * std::f64::consts::PI * (j as f64) / (n as f64) + 0.7;
            c(r0 * theta.cos(), r0 * theta.sin())
        })
        .collect();

    let dp = monic.derivative();
    let mut converged = vec![false; n];
    for _iter in 0..MAX_ITERATIONS {
        let mut max_step = 0.0f64;
        for i in 0..n {
            if converged[i] {
                continue;
            }
            let pi = monic.eval(z[i]);
            let dpi = dp.eval(z[i]);
            let w = if dpi.norm() > 0.0 { pi / dpi } else { pi };
            let mut s = C64::new(0.0, 0.0);
            for j in 0..n {
                if j != i {
                    let d = z[i] - z[j];
                    if d.norm() < 1e-300 {
                        continue;
                    }
                    s += ONE / d;
                }
            }
            let denom = ONE - w * s;
            let step = if denom.norm() > 1e-300 { w / denom } else { w };
            z[i] -= step;
            let rel = step.norm() / (1.0 + z[i].norm());
            if rel < 1e-15 {
                converged[i] = true;
            }
            max_step = max_step.max(rel);
        }
        if max_step < 1e-15 {
            break;
        }
    }

    // Residual acceptance: |p(z)| relative to the coefficient scale at z.
    let scale = monic.max_coeff_norm();
    let mut worst = 0.0f64;
    for &zi in &z {
        let grow = (1.0 + zi.norm()).powi(n as i32);
        let resid = monic.eval(zi).norm() / (scale * grow);
        worst = worst.max(resid);
    }
    if worst > 1e-8 {
        return Err(Error::NonConvergence {
            iterations: MAX_ITERATIONS,
            residual: worst,
        });
    }
    Ok(z)
}

/// Single-linkage clustering of points at the given radius. Returns clusters
/// as index lists.
pub fn cluster_indices(points: &[C64], radius: f64) -> Vec<Vec<usize>> {
    let n = points.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, i: usize) -> usize {
        if parent[i] != i {
            let r = find(parent, parent[i]);
            parent[i] = r;
        }
        parent[i]
    }
    for i in 0..n {
        for j in i + 1..n {
            if (points[i] - points[j]).norm() <= radius {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri] = rj;
                }
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for i in 0..n {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(i);
    }
    groups.into_values().collect()
}

/// Newton refinement of a multiplicity-`m` root: a multiple root of `p` is a
/// simple root of the (m-1)-th derivative.
pub fn refine_multiple_root(p: &Poly, start: C64, multiplicity: usize) -> C64 {
    let mut q = p.clone();
    for _ in 1..multiplicity {
        q = q.derivative();
    }
    let dq = q.derivative();
    let mut z = start;
    for _ in 0..40 {
        let f = q.eval(z);
        let d = dq.eval(z);
        if d.norm() < 1e-300 {
            break;
        }
        let step = f / d;
        z -= step;
        if step.norm() < 1e-15 * (1.0 + z.norm()) {
            break;
        }
    }
    // Keep the refinement only if it did not wander off the cluster.
    if (z - start).norm() < 1.0 + start.norm() {
        z
    } else {
        start
    }
}

/// Roots with multiplicities via clustering at radius `tol`. Cluster
/// centroids are Newton-refined.
pub fn roots(p: &Poly, tol: f64) -> Result<RootSet> {
    let raw = roots_raw(p)?;
    let scale = 1.0 + raw.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let clusters = cluster_indices(&raw, tol * scale);
    let mut out = Vec::with_capacity(clusters.len());
    for cl in clusters {
        let m = cl.len();
        let centroid = cl.iter().map(|&i| raw[i]).sum::<C64>() / cr(m as f64);
        let z = if m > 1 {
            refine_multiple_root(p, centroid, m)
        } else {
            centroid
        };
        out.push((z, m));
    }
    out.sort_by(|a, b| {
        (a.0.re, a.0.im)
            .partial_cmp(&(b.0.re, b.0.im))
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    Ok(RootSet { roots: out, tol })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::ZERO;

    fn has_root(rs: &RootSet, z: C64, m: usize, eps: f64) -> bool {
        rs.roots.iter().any(|&(r, mm)| (r - z).norm() < eps && mm == m)
    }

    #[test]
    fn simple_quadratic() {
        // z^2 + 1 -> {i, -i}
        let p = Poly::from_real(&[1.0, 0.0, 1.0]);
        let rs = roots(&p, DEFAULT_TOL).unwrap();
        assert_eq!(rs.roots.len(), 2);
        assert!(has_root(&rs, c(0.0, 1.0), 1, 1e-10));
        assert!(has_root(&rs, c(0.0, -1.0), 1, 1e-10));
    }

    #[test]
    fn double_root_clustered() {
        // (z-1)^2 (z+2)
        let p = Poly::from_roots(&[cr(1.0), cr(1.0), cr(-2.0)]);
        let rs = roots(&p, 1e-6).unwrap();
        assert!(has_root(&rs, cr(1.0), 2, 1e-8));
        assert!(has_root(&rs, cr(-2.0), 1, 1e-8));
        assert_eq!(rs.total_multiplicity(), 3);
    }

    #[test]
    fn mixed_complex_roots() {
        // z^3 - (1+i) z^2 + i z = z (z-1)(z-i)
        let p = Poly::new(vec![ZERO, c(0.0, 1.0), c(-1.0, -1.0), ONE]);
        let rs = roots(&p, DEFAULT_TOL).unwrap();
        assert!(has_root(&rs, ZERO, 1, 1e-10));
        assert!(has_root(&rs, cr(1.0), 1, 1e-10));
        assert!(has_root(&rs, c(0.0, 1.0), 1, 1e-10));
    }

    #[test]
    fn zero_polynomial_rejected() {
        assert!(matches!(roots(&Poly::zero(), 1e-8), Err(Error::ZeroPolynomial)));
    }

    #[test]
    fn reconstruction_of_random_polys() {
        // seeded LCG so the test is deterministic
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        };
        for trial in 0..200 {
            let deg = 1 + trial % 10;
            let mut coeffs: Vec<C64> = (0..deg).map(|_| c(next(), next())).collect();
            coeffs.push(ONE);
            let p = Poly::new(coeffs);
            let rs = roots(&p, 1e-10).unwrap();
            let back = rs.reconstruct(p.leading());
            let err = back.max_diff(&p) / p.max_coeff_norm();
            assert!(err < 1e-9, "trial {trial}: reconstruction error {err:.3e}");
        }
    }
}

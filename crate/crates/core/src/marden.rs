//! Mass-point configurations, the pencil (phi, f) they generate, its first
//! integrals, tangency data of the class-(n-1) curve, and the inscribed-conic
//! oracle for triangles with unit masses.

use crate::conic;
use crate::error::{Error, Result};
use crate::linalg;
use crate::poly::{cr, C64, Poly, ZERO};
use crate::roots::{self, RootSet, DEFAULT_TOL};
use crate::symfunc::sym_table;
use nalgebra::{DMatrix, DVector};

/// n distinct complex positions with nonzero complex masses.
#[derive(Debug, Clone)]
pub struct MassedConfig {
    pub positions: Vec<C64>,
    pub masses: Vec<C64>,
}

impl MassedConfig {
    pub fn new(positions: Vec<C64>, masses: Vec<C64>) -> Result<Self> {
        Self::with_tol(positions, masses, DEFAULT_TOL)
    }

    pub fn with_tol(positions: Vec<C64>, masses: Vec<C64>, tol: f64) -> Result<Self> {
        if positions.is_empty() || positions.len() != masses.len() {
            return Err(Error::InvalidInput(
                "need n >= 1 positions with matching masses".into(),
            ));
        }
        let scale = 1.0 + positions.iter().map(|z| z.norm()).fold(0.0, f64::max);
        for i in 0..positions.len() {
            for j in i + 1..positions.len() {
                let dist = (positions[i] - positions[j]).norm();
                if dist <= tol * scale {
                    return Err(Error::DuplicatePositions { i, j, dist });
                }
            }
        }
        if masses.iter().any(|m| m.norm() == 0.0) {
            return Err(Error::InvalidInput("masses must be nonzero".into()));
        }
        Ok(MassedConfig { positions, masses })
    }

    pub fn n(&self) -> usize {
        self.positions.len()
    }
}

/// The pencil data of a configuration: phi monic of degree n, f of degree
/// <= n-1, and the bracket values B_1..B_n (first integrals of the isofocal
/// flow). The coefficient of z^{i-1} in f is (-1)^{n-i} B_i.
#[derive(Debug, Clone)]
pub struct MardenPencil {
    pub phi: Poly,
    pub f: Poly,
    pub b: Vec<C64>,
}

pub fn build_pencil(config: &MassedConfig) -> Result<MardenPencil> {
    let n = config.n();
    let phi = Poly::from_roots(&config.positions);
    let mut f = Poly::zero();
    for (i, &m) in config.masses.iter().enumerate() {
        f = f.add(&phi.deflate(config.positions[i]).scale(m));
    }
    let table = sym_table(&config.positions);
    let b: Vec<C64> = (1..=n)
        .map(|i| table.bracket(&config.masses, n - i))
        .collect();
    Ok(MardenPencil { phi, f, b })
}

/// The sigma-matrix a(alpha): row i is the vector sigma_i with one position
/// omitted per column, i = 0..n-1.
pub fn sigma_matrix(positions: &[C64]) -> DMatrix<C64> {
    let n = positions.len();
    let table = sym_table(positions);
    DMatrix::from_fn(n, n, |i, k| table.sigma_omitted(i, k))
}

/// Recover masses from positions and the bracket vector B_1..B_n by solving
/// the linear system with rows sigma_0..sigma_{n-1}. Singular exactly when
/// two positions coincide; reported as a collision.
pub fn recover_masses(positions: &[C64], b: &[C64]) -> Result<Vec<C64>> {
    let n = positions.len();
    if b.len() != n {
        return Err(Error::InvalidInput("bracket vector length must equal n".into()));
    }
    let a = sigma_matrix(positions);
    // row i pairs with B_{n-i}
    let rhs = DVector::from_fn(n, |i, _| b[n - 1 - i]);
    let sol = linalg::solve(&a, &rhs, 1e-12)?;
    Ok(sol.iter().copied().collect())
}

/// Partial-fraction residues f(alpha_i) / phi'(alpha_i).
pub fn residue_masses(positions: &[C64], f: &Poly) -> Vec<C64> {
    let phi = Poly::from_roots(positions);
    let dphi = phi.derivative();
    positions.iter().map(|&a| f.eval(a) / dphi.eval(a)).collect()
}

/// Foci (zeros of f) and the tangency point on every segment. The contact on
/// [alpha_i, alpha_j] sits at alpha_i + m_i/(m_i+m_j) (alpha_j - alpha_i);
/// the orientation is pinned by the inscribed-conic oracle.
#[derive(Debug, Clone)]
pub struct FociTangency {
    pub foci: RootSet,
    /// f is constant: the curve is a circle and has no finite foci.
    pub circle_case: bool,
    pub contacts: Vec<(usize, usize, C64)>,
}

pub fn foci_and_tangency(config: &MassedConfig, tol: f64) -> Result<FociTangency> {
    let pencil = build_pencil(config)?;
    let (foci, circle_case) = match pencil.f.degree() {
        Some(d) if d >= 1 => (roots::roots(&pencil.f, tol)?, false),
        _ => (RootSet { roots: vec![], tol }, true),
    };
    let mut contacts = Vec::new();
    for i in 0..config.n() {
        for j in i + 1..config.n() {
            let (mi, mj) = (config.masses[i], config.masses[j]);
            let denom = mi + mj;
            if denom.norm() < 1e-14 * (mi.norm() + mj.norm()) {
                continue; // contact at infinity
            }
            let t = mi / denom;
            contacts.push((i, j, config.positions[i] + t * (config.positions[j] - config.positions[i])));
        }
    }
    Ok(FociTangency { foci, circle_case, contacts })
}

/// Numerator of sum_j m_j / L_{alpha_j}(lambda, mu) with
/// L_alpha = lambda Re(alpha) + mu Im(alpha) - 1. Vanishes exactly when the
/// line {lambda x + mu y = 1} belongs to the class curve.
pub fn marden_curve_eval(config: &MassedConfig, lambda: C64, mu: C64) -> C64 {
    let lines: Vec<C64> = config
        .positions
        .iter()
        .map(|a| lambda * cr(a.re) + mu * cr(a.im) - cr(1.0))
        .collect();
    let mut acc = ZERO;
    for j in 0..config.n() {
        let mut term = config.masses[j];
        for (k, &l) in lines.iter().enumerate() {
            if k != j {
                term *= l;
            }
        }
        acc += term;
    }
    acc
}

/// The inscribed conic of a triangle touching every side at its midpoint,
/// with its two foci. The foci coincide with the critical points of
/// (z-a)(z-b)(z-c).
#[derive(Debug, Clone)]
pub struct SteinerConic {
    pub conic: [C64; 6],
    pub foci: (C64, C64),
    pub tangency_points: [C64; 3],
}

pub fn steiner_oracle(triangle: &[C64; 3]) -> Result<SteinerConic> {
    let [a, b, cc] = *triangle;
    let area = ((b - a) * (cc - a).conj()).im;
    let scale = (b - a).norm().max((cc - a).norm()).max((cc - b).norm());
    if area.abs() < 1e-10 * scale * scale {
        return Err(Error::CollinearPoints);
    }
    let mid = [(a + b) / cr(2.0), (b + cc) / cr(2.0), (cc + a) / cr(2.0)];
    let sides = [
        conic::line_through(&conic::embed(a), &conic::embed(b)),
        conic::line_through(&conic::embed(b), &conic::embed(cc)),
        conic::line_through(&conic::embed(cc), &conic::embed(a)),
    ];
    let contacts: Vec<_> = (0..3).map(|i| (conic::embed(mid[i]), sides[i])).collect();
    let fitted = conic::fit_conic_tangent(&contacts)?;
    let (f1, f2) = conic::real_foci(&fitted)?;
    let (f1, f2) = order_pair(f1, f2);
    Ok(SteinerConic {
        conic: fitted.coefficients(),
        foci: (f1, f2),
        tangency_points: mid,
    })
}

/// General-mass variant of the oracle: fit the conic tangent to the triangle
/// sides at the mass-ratio contact points and return its foci. Used to pin
/// the tangency-ratio orientation.
pub fn inscribed_conic_foci(triangle: &[C64; 3], masses: &[C64; 3]) -> Result<(C64, C64)> {
    let config = MassedConfig::new(triangle.to_vec(), masses.to_vec())?;
    let ft = foci_and_tangency(&config, DEFAULT_TOL)?;
    let contact_of = |i: usize, j: usize| -> C64 {
        ft.contacts
            .iter()
            .find(|(a, b, _)| (*a, *b) == (i.min(j), i.max(j)))
            .map(|(a, _, p)| {
                // contacts are stored from the lower index
                debug_assert_eq!(*a, i.min(j));
                *p
            })
            .unwrap()
    };
    let pairs = [(0usize, 1usize), (1, 2), (2, 0)];
    let contacts: Vec<_> = pairs
        .iter()
        .map(|&(i, j)| {
            let line = conic::line_through(&conic::embed(triangle[i]), &conic::embed(triangle[j]));
            (conic::embed(contact_of(i, j)), line)
        })
        .collect();
    let fitted = conic::fit_conic_tangent(&contacts)?;
    let (f1, f2) = conic::real_foci(&fitted)?;
    Ok(order_pair(f1, f2))
}

pub fn order_pair(a: C64, b: C64) -> (C64, C64) {
    if (a.re, a.im) <= (b.re, b.im) {
        (a, b)
    } else {
        (b, a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conic::Conic;
    use crate::poly::{c, ONE};

    #[test]
    fn unit_masses_give_derivative() {
        // alpha = (1, -1, 0), m = 1: f = phi' = 3z^2 - 1
        let config = MassedConfig::new(vec![cr(1.0), cr(-1.0), ZERO], vec![ONE; 3]).unwrap();
        let p = build_pencil(&config).unwrap();
        assert!(p.f.max_diff(&p.phi.derivative()) < 1e-12);
    }

    #[test]
    fn opposite_masses_give_constant() {
        // alpha = (0, 1), m = (1, -1): f = -1, B_2 = 0
        let config = MassedConfig::new(vec![ZERO, cr(1.0)], vec![ONE, cr(-1.0)]).unwrap();
        let p = build_pencil(&config).unwrap();
        assert!(p.f.max_diff(&Poly::constant(cr(-1.0))) < 1e-14);
        assert!(p.b[1].norm() < 1e-14);
    }

    #[test]
    fn hand_expanded_f_and_sign_binding() {
        // alpha = (0, 1, i), m = (1, 2, 3): f = 6z^2 - (4+3i)z + i
        let config =
            MassedConfig::new(vec![ZERO, cr(1.0), c(0.0, 1.0)], vec![ONE, cr(2.0), cr(3.0)])
                .unwrap();
        let p = build_pencil(&config).unwrap();
        let expect = Poly::new(vec![c(0.0, 1.0), c(-4.0, -3.0), cr(6.0)]);
        assert!(p.f.max_diff(&expect) < 1e-13);
        // coefficient of z^{i-1} equals (-1)^{n-i} B_i
        let n = 3;
        for i in 1..=n {
            let sign = if (n - i) % 2 == 0 { 1.0 } else { -1.0 };
            let bound = p.f.coeff(i - 1) - cr(sign) * p.b[i - 1];
            assert!(bound.norm() < 1e-13, "binding fails at i={i}");
        }
    }

    #[test]
    fn recover_masses_roundtrip_and_residues() {
        let config =
            MassedConfig::new(vec![ZERO, cr(1.0), c(0.0, 1.0)], vec![ONE, cr(2.0), cr(3.0)])
                .unwrap();
        let p = build_pencil(&config).unwrap();
        let m = recover_masses(&config.positions, &p.b).unwrap();
        for (got, want) in m.iter().zip(&config.masses) {
            assert!((got - want).norm() < 1e-11);
        }
        // residue cross-check: (1, -1) with f = z, phi = z^2-1 -> (1/2, 1/2)
        let res = residue_masses(&[cr(1.0), cr(-1.0)], &Poly::x());
        assert!((res[0] - cr(0.5)).norm() < 1e-14);
        assert!((res[1] - cr(0.5)).norm() < 1e-14);
    }

    #[test]
    fn recover_masses_singular_on_collision() {
        let b = vec![ONE, ONE, ONE];
        let err = recover_masses(&[ZERO, ZERO, cr(1.0)], &b).unwrap_err();
        assert!(matches!(err, Error::CollisionSingular { .. }));
    }

    #[test]
    fn equal_mass_contact_is_midpoint_and_ratio_third() {
        let config = MassedConfig::new(vec![ZERO, cr(1.0)], vec![ONE, ONE]).unwrap();
        let ft = foci_and_tangency(&config, DEFAULT_TOL).unwrap();
        assert!((ft.contacts[0].2 - cr(0.5)).norm() < 1e-14);
        // m = (1, 2) on [0, 1] -> 1/3
        let config = MassedConfig::new(vec![ZERO, cr(1.0)], vec![ONE, cr(2.0)]).unwrap();
        let ft = foci_and_tangency(&config, DEFAULT_TOL).unwrap();
        assert!((ft.contacts[0].2 - cr(1.0 / 3.0)).norm() < 1e-14);
    }

    #[test]
    fn steiner_oracle_on_standard_triangle() {
        // triangle (0, 1, i): tangency at 1/2, (1+i)/2, i/2,
        // foci = roots of z^2 - (2/3)(1+i) z + i/3
        let tri = [ZERO, cr(1.0), c(0.0, 1.0)];
        let s = steiner_oracle(&tri).unwrap();
        let focus_poly = Poly::new(vec![c(0.0, 1.0 / 3.0), c(-2.0 / 3.0, -2.0 / 3.0), ONE]);
        let expect = roots::roots(&focus_poly, 1e-10).unwrap();
        let mut want: Vec<C64> = expect.flat();
        want.sort_by(|x, y| (x.re, x.im).partial_cmp(&(y.re, y.im)).unwrap());
        assert!((s.foci.0 - want[0]).norm() < 1e-9);
        assert!((s.foci.1 - want[1]).norm() < 1e-9);
    }

    #[test]
    fn steiner_oracle_equilateral_is_circle() {
        let w = c(-0.5, 3.0f64.sqrt() / 2.0);
        let tri = [ONE, w, w * w];
        let s = steiner_oracle(&tri).unwrap();
        // both foci at the centroid = 0; the double isotropic tangent makes
        // this a sqrt(eps)-accurate extraction, not a 1e-12 one
        assert!(s.foci.0.norm() < 2e-7);
        assert!(s.foci.1.norm() < 2e-7);
    }

    #[test]
    fn steiner_oracle_rejects_collinear() {
        let tri = [ZERO, cr(1.0), cr(2.0)];
        assert!(matches!(steiner_oracle(&tri), Err(Error::CollinearPoints)));
    }

    #[test]
    fn unequal_mass_tangency_matches_inscribed_conic_foci() {
        // the orientation convention: the fitted conic's foci must equal
        // the roots of f
        let tri = [c(0.1, -0.2), c(1.3, 0.4), c(0.2, 1.1)];
        let masses = [cr(1.0), cr(2.0), cr(4.0)];
        let (f1, f2) = inscribed_conic_foci(&tri, &masses).unwrap();
        let config = MassedConfig::new(tri.to_vec(), masses.to_vec()).unwrap();
        let pencil = build_pencil(&config).unwrap();
        let rs = roots::roots(&pencil.f, 1e-10).unwrap();
        let mut want = rs.flat();
        want.sort_by(|x, y| (x.re, x.im).partial_cmp(&(y.re, y.im)).unwrap());
        assert!((f1 - want[0]).norm() < 1e-8, "{f1} vs {}", want[0]);
        assert!((f2 - want[1]).norm() < 1e-8);
    }

    #[test]
    fn marden_curve_vanishes_on_node_line() {
        // triangle (1, i, 1+i), line x + y = 1 passes through 1 and i
        let config =
            MassedConfig::new(vec![ONE, c(0.0, 1.0), c(1.0, 1.0)], vec![ONE, ONE, ONE]).unwrap();
        let v = marden_curve_eval(&config, ONE, ONE);
        assert!(v.norm() < 1e-14);
    }

    #[test]
    fn marden_curve_vanishes_on_steiner_tangents() {
        // keep every side line away from the origin so lambda x + mu y = 1 form exists
        let tri = [c(0.2, 0.1), c(1.3, 0.3), c(0.4, 1.2)];
        let s = steiner_oracle(&tri).unwrap();
        let config = MassedConfig::new(tri.to_vec(), vec![ONE; 3]).unwrap();
        // tangent line at each midpoint: polar of the contact point
        let fitted = Conic::from_coefficients(&s.conic);
        for &tp in &s.tangency_points {
            let l = fitted.polar(&conic::embed(tp));
            // line l0 X + l1 Y + l2 W = 0 as lambda x + mu y = 1:
            // lambda = -l0/l2, mu = -l1/l2
            let lambda = -l[0] / l[2];
            let mu = -l[1] / l[2];
            let v = marden_curve_eval(&config, lambda, mu);
            assert!(v.norm() < 1e-9, "residual {v}");
        }
        // a random non-tangent line
        let v = marden_curve_eval(&config, cr(0.7), cr(-0.4));
        assert!(v.norm() > 1e-4);
    }
}

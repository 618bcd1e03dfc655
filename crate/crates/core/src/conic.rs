//! Conics in the projective plane over C: fits through points and tangency
//! data, dual conics, and focus extraction via the isotropic tangents from
//! the circular points.

use crate::error::{Error, Result};
use crate::linalg;
use crate::poly::{c, C64, ZERO};
use nalgebra::{DMatrix, Matrix3, Vector3};

/// Point conic as a symmetric 3x3 matrix over homogeneous plane coordinates
/// (X, Y, W); the affine plane embeds as z = X/W + i Y/W.
#[derive(Debug, Clone)]
pub struct Conic(pub Matrix3<C64>);

impl Conic {
    /// Coefficients (A, B, C, D, E, F) of A x^2 + B xy + C y^2 + D x + E y + F.
    pub fn coefficients(&self) -> [C64; 6] {
        let m = &self.0;
        [
            m[(0, 0)],
            m[(0, 1)] * c(2.0, 0.0),
            m[(1, 1)],
            m[(0, 2)] * c(2.0, 0.0),
            m[(1, 2)] * c(2.0, 0.0),
            m[(2, 2)],
        ]
    }

    pub fn from_coefficients(v: &[C64; 6]) -> Self {
        let h = c(0.5, 0.0);
        Conic(Matrix3::new(
            v[0],
            v[1] * h,
            v[3] * h,
            v[1] * h,
            v[2],
            v[4] * h,
            v[3] * h,
            v[4] * h,
            v[5],
        ))
    }

    pub fn eval(&self, p: &Vector3<C64>) -> C64 {
        (p.transpose() * self.0 * p)[(0, 0)]
    }

    pub fn eval_z(&self, z: C64) -> C64 {
        self.eval(&Vector3::new(c(z.re, 0.0), c(z.im, 0.0), c(1.0, 0.0)))
    }

    /// Polar line of a point.
    pub fn polar(&self, p: &Vector3<C64>) -> Vector3<C64> {
        self.0 * p
    }

    pub fn adjugate(&self) -> Matrix3<C64> {
        let m = &self.0;
        let cof = |r0: usize, r1: usize, c0: usize, c1: usize| {
            m[(r0, c0)] * m[(r1, c1)] - m[(r0, c1)] * m[(r1, c0)]
        };
        Matrix3::new(
            cof(1, 2, 1, 2),
            -cof(0, 2, 1, 2),
            cof(0, 1, 1, 2),
            -cof(1, 2, 0, 2),
            cof(0, 2, 0, 2),
            -cof(0, 1, 0, 2),
            cof(1, 2, 0, 1),
            -cof(0, 2, 0, 1),
            cof(0, 1, 0, 1),
        )
        .transpose()
    }

    pub fn is_degenerate(&self, tol: f64) -> bool {
        let det = linalg::determinant(&DMatrix::from_fn(3, 3, |i, j| self.0[(i, j)]));
        let scale = self.0.iter().map(|z| z.norm()).fold(0.0, f64::max);
        det.norm() < tol * scale.powi(3)
    }

    fn normalized(mut self) -> Self {
        let scale = self.0.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if scale > 0.0 {
            // fix the phase on the largest entry
            let pivot = self.0.iter().copied().max_by(|a, b| a.norm().partial_cmp(&b.norm()).unwrap()).unwrap();
            let factor = pivot / c(pivot.norm(), 0.0);
            self.0 = self.0.map(|z| z / (factor * c(scale, 0.0)));
        }
        Conic(self.0)
    }
}

pub fn cross(a: &Vector3<C64>, b: &Vector3<C64>) -> Vector3<C64> {
    Vector3::new(
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    )
}

pub fn embed(z: C64) -> Vector3<C64> {
    Vector3::new(c(z.re, 0.0), c(z.im, 0.0), c(1.0, 0.0))
}

/// Line through two points (homogeneous coordinates).
pub fn line_through(p: &Vector3<C64>, q: &Vector3<C64>) -> Vector3<C64> {
    cross(p, q)
}

fn monomial_row(p: &Vector3<C64>) -> [C64; 6] {
    let (x, y, w) = (p[0], p[1], p[2]);
    [x * x, x * y, y * y, x * w, y * w, w * w]
}

/// Unique conic through five points in general position.
pub fn fit_conic_through(points: &[Vector3<C64>]) -> Result<Conic> {
    if points.len() < 5 {
        return Err(Error::TooFewSamples { got: points.len(), need: 5 });
    }
    let mut m = DMatrix::from_element(points.len(), 6, ZERO);
    for (i, p) in points.iter().enumerate() {
        let row = monomial_row(p);
        for j in 0..6 {
            m[(i, j)] = row[j];
        }
    }
    let sv = linalg::singular_values(&m);
    // second-smallest singular value must dominate for uniqueness
    if points.len() == 5 && sv[4] < 1e-10 * sv[0] {
        return Err(Error::Numerical("conic through points is not unique".into()));
    }
    let ns = linalg::null_space(&m, 1)?;
    let v = &ns[0];
    Ok(Conic::from_coefficients(&[v[0], v[1], v[2], v[3], v[4], v[5]]).normalized())
}

/// Conic tangent to each given line at the given point: per contact, the
/// point lies on the conic and its polar is the line.
pub fn fit_conic_tangent(contacts: &[(Vector3<C64>, Vector3<C64>)]) -> Result<Conic> {
    let rows = contacts.len() * 4;
    let mut m = DMatrix::from_element(rows, 6, ZERO);
    // index map between symmetric-matrix entries and the 6 coefficients
    // q = [A, B, C, D, E, F], M = [[A, B/2, D/2], [B/2, C, E/2], [D/2, E/2, F]]
    let entry = |i: usize, j: usize, q: usize| -> C64 {
        // coefficient of the q-th unknown in M[(i, j)]
        let (unknown, weight) = match (i.min(j), i.max(j)) {
            (0, 0) => (0, 1.0),
            (0, 1) => (1, 0.5),
            (1, 1) => (2, 1.0),
            (0, 2) => (3, 0.5),
            (1, 2) => (4, 0.5),
            (2, 2) => (5, 1.0),
            _ => unreachable!(),
        };
        if q == unknown { c(weight, 0.0) } else { ZERO }
    };
    for (k, (p, l)) in contacts.iter().enumerate() {
        // incidence row
        let row = monomial_row(p);
        for j in 0..6 {
            m[(4 * k, j)] = row[j];
        }
        // polar rows: (M p) x l = 0 — each component linear in the unknowns
        for q in 0..6 {
            let mp = Vector3::new(
                entry(0, 0, q) * p[0] + entry(0, 1, q) * p[1] + entry(0, 2, q) * p[2],
                entry(1, 0, q) * p[0] + entry(1, 1, q) * p[1] + entry(1, 2, q) * p[2],
                entry(2, 0, q) * p[0] + entry(2, 1, q) * p[1] + entry(2, 2, q) * p[2],
            );
            let cr_ = cross(&mp, l);
            m[(4 * k + 1, q)] = cr_[0];
            m[(4 * k + 2, q)] = cr_[1];
            m[(4 * k + 3, q)] = cr_[2];
        }
    }
    let ns = linalg::null_space(&m, 1)?;
    let v = &ns[0];
    let conic = Conic::from_coefficients(&[v[0], v[1], v[2], v[3], v[4], v[5]]).normalized();
    // residual check: the conditions must actually hold
    let scale: f64 = contacts.iter().map(|(p, _)| p.norm()).fold(1.0, f64::max);
    for (p, l) in contacts {
        if conic.eval(p).norm() > 1e-8 * scale * scale {
            return Err(Error::Numerical("tangency fit inconsistent".into()));
        }
        let pol = conic.polar(p);
        let cr_ = cross(&pol, l);
        if cr_.norm() > 1e-7 * scale * scale * l.norm() {
            return Err(Error::Numerical("polar does not match tangent line".into()));
        }
    }
    Ok(conic)
}

/// The two real foci of a real nondegenerate conic: intersections of the
/// isotropic tangents from the circular points (1, +-i, 0) paired with their
/// conjugates. A circle yields a double focus at the center.
pub fn real_foci(conic: &Conic) -> Result<(C64, C64)> {
    let dual = conic.adjugate();
    // lines through I = (1, i, 0): span{u, v}
    let u = Vector3::new(c(0.0, 1.0), c(-1.0, 0.0), ZERO);
    let v = Vector3::new(ZERO, ZERO, c(1.0, 0.0));
    let q = |a: &Vector3<C64>, b: &Vector3<C64>| (a.transpose() * dual * b)[(0, 0)];
    let (qa, qb, qc) = (q(&u, &u), q(&u, &v) + q(&v, &u), q(&v, &v));
    // qa mu^2 + qb mu nu + qc nu^2 = 0
    let (r1, r2) = if qa.norm() >= qc.norm() {
        if qa.norm() == 0.0 {
            return Err(Error::Numerical("degenerate isotropic tangency".into()));
        }
        let disc = (qb * qb - c(4.0, 0.0) * qa * qc).sqrt();
        let mu1 = (-qb + disc) / (c(2.0, 0.0) * qa);
        let mu2 = (-qb - disc) / (c(2.0, 0.0) * qa);
        (
            Vector3::new(u[0] * mu1 + v[0], u[1] * mu1 + v[1], u[2] * mu1 + v[2]),
            Vector3::new(u[0] * mu2 + v[0], u[1] * mu2 + v[1], u[2] * mu2 + v[2]),
        )
    } else {
        let disc = (qb * qb - c(4.0, 0.0) * qa * qc).sqrt();
        let nu1 = (-qb + disc) / (c(2.0, 0.0) * qc);
        let nu2 = (-qb - disc) / (c(2.0, 0.0) * qc);
        (
            Vector3::new(u[0] + v[0] * nu1, u[1] + v[1] * nu1, u[2] + v[2] * nu1),
            Vector3::new(u[0] + v[0] * nu2, u[1] + v[1] * nu2, u[2] + v[2] * nu2),
        )
    };
    let focus_of = |l: &Vector3<C64>| -> Result<C64> {
        let lbar = Vector3::new(l[0].conj(), l[1].conj(), l[2].conj());
        let f = cross(l, &lbar);
        if f[2].norm() < 1e-12 * f.norm() {
            return Err(Error::Numerical("focus at infinity".into()));
        }
        let x = f[0] / f[2];
        let y = f[1] / f[2];
        Ok(c(x.re, y.re))
    };
    let f1 = focus_of(&r1)?;
    let f2 = focus_of(&r2)?;
    Ok((f1, f2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::cr;

    #[test]
    fn unit_circle_focus_is_center() {
        // x^2 + y^2 - 1 = 0
        let conic = Conic::from_coefficients(&[cr(1.0), ZERO, cr(1.0), ZERO, ZERO, cr(-1.0)]);
        let (f1, f2) = real_foci(&conic).unwrap();
        assert!(f1.norm() < 1e-10 && f2.norm() < 1e-10);
    }

    #[test]
    fn axis_aligned_ellipse_foci() {
        // x^2/4 + y^2 - 1: foci at (+-sqrt(3), 0)
        let conic = Conic::from_coefficients(&[cr(0.25), ZERO, cr(1.0), ZERO, ZERO, cr(-1.0)]);
        let (f1, f2) = real_foci(&conic).unwrap();
        let s3 = 3.0f64.sqrt();
        let mut got = [f1, f2];
        got.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        assert!((got[0] - cr(-s3)).norm() < 1e-10);
        assert!((got[1] - cr(s3)).norm() < 1e-10);
    }

    #[test]
    fn five_point_fit_recovers_circle() {
        let pts: Vec<_> = (0..5)
            .map(|k| {
                let th = 0.3 + k as f64;
                embed(c(th.cos(), th.sin()))
            })
            .collect();
        let conic = fit_conic_through(&pts).unwrap();
        for p in &pts {
            assert!(conic.eval(p).norm() < 1e-10);
        }
        // a sixth circle point also lies on it
        assert!(conic.eval(&embed(c(0.0f64.cos(), 0.0f64.sin()))).norm() < 1e-10);
    }
}

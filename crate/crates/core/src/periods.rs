//! Period lattices of quartic curves y^2 = prod (z - b_i): Moebius reduction
//! of the branch points to Legendre form, then complete elliptic integrals by
//! AGM. Curves with collided branch points degenerate to rational curves; the
//! finite loop periods around their nodes are returned instead.

use crate::elliptic::agm_k;
use crate::error::{Error, Result};
use crate::poly::{cr, C64, ONE};
use crate::roots::cluster_indices;

#[derive(Debug, Clone, Copy)]
pub struct PeriodLattice {
    pub omega1: C64,
    pub omega2: C64,
}

impl PeriodLattice {
    /// Coordinates of p in this basis (real 2x2 solve).
    pub fn coordinates(&self, p: C64) -> (f64, f64) {
        let det = self.omega1.re * self.omega2.im - self.omega1.im * self.omega2.re;
        let m = (p.re * self.omega2.im - p.im * self.omega2.re) / det;
        let n = (self.omega1.re * p.im - self.omega1.im * p.re) / det;
        (m, n)
    }

    /// Distance of p from the lattice, in coordinate units.
    pub fn membership_deviation(&self, p: C64) -> f64 {
        let (m, n) = self.coordinates(p);
        (m - m.round()).abs().max((n - n.round()).abs())
    }

    pub fn cell_area(&self) -> f64 {
        (self.omega1.re * self.omega2.im - self.omega1.im * self.omega2.re).abs()
    }
}

#[derive(Debug, Clone)]
pub enum CurvePeriods {
    Smooth(PeriodLattice),
    /// Branch points collided: the curve is rational; these are the finite
    /// loop periods around its nodes.
    Nodal { finite: Vec<C64> },
}

/// 2x2 Moebius matrix acting as z -> (az + b)/(cz + d).
#[derive(Debug, Clone, Copy)]
struct Moebius {
    a: C64,
    b: C64,
    c: C64,
    d: C64,
}

impl Moebius {
    fn apply(&self, z: C64) -> C64 {
        (self.a * z + self.b) / (self.c * z + self.d)
    }

    fn det(&self) -> C64 {
        self.a * self.d - self.b * self.c
    }

    fn inverse(&self) -> Moebius {
        Moebius { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    fn compose(&self, other: &Moebius) -> Moebius {
        Moebius {
            a: self.a * other.a + self.b * other.c,
            b: self.a * other.b + self.b * other.d,
            c: self.c * other.a + self.d * other.c,
            d: self.c * other.b + self.d * other.d,
        }
    }

    /// The map sending (z1, z2, z3) to (0, 1, infinity).
    fn to_standard(z1: C64, z2: C64, z3: C64) -> Moebius {
        Moebius {
            a: z2 - z3,
            b: -z1 * (z2 - z3),
            c: z2 - z1,
            d: -z3 * (z2 - z1),
        }
    }

    /// The map with prescribed images of three points.
    fn three_points(from: [C64; 3], to: [C64; 3]) -> Moebius {
        let s1 = Moebius::to_standard(from[0], from[1], from[2]);
        let s2 = Moebius::to_standard(to[0], to[1], to[2]);
        s2.inverse().compose(&s1)
    }
}

fn cross_ratio(a: C64, b: C64, c: C64, d: C64) -> C64 {
    ((a - c) * (b - d)) / ((a - d) * (b - c))
}

/// Period lattice of y^2 = (z-b0)(z-b1)(z-b2)(z-b3) with distinct branch
/// points: try the three pairings, reduce to (1, -1, -1/kappa, 1/kappa),
/// periods c (4K, 2iK').
pub fn quartic_periods(branch: &[C64; 4]) -> Result<CurvePeriods> {
    let scale = 1.0 + branch.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let clusters = cluster_indices(branch, 1e-7 * scale);
    if clusters.len() < 4 {
        return Ok(CurvePeriods::Nodal { finite: nodal_periods(branch, &clusters)? });
    }

    let pairings = [[0usize, 1, 2, 3], [0, 2, 1, 3], [0, 3, 1, 2]];
    let mut best: Option<(f64, PeriodLattice)> = None;
    for idx in pairings {
        match try_pairing(branch, idx) {
            Ok((balance, lat)) => {
                if best.as_ref().map_or(true, |(b, _)| balance > *b) {
                    best = Some((balance, lat));
                }
            }
            Err(_) => continue,
        }
    }
    let (_, lat) = best.ok_or(Error::DegenerateCurve)?;
    Ok(CurvePeriods::Smooth(lat))
}

fn try_pairing(branch: &[C64; 4], idx: [usize; 4]) -> Result<(f64, PeriodLattice)> {
    let (b0, b1, b2, b3) = (branch[idx[0]], branch[idx[1]], branch[idx[2]], branch[idx[3]]);
    // cross ratio of (1, -1; -1/kappa, 1/kappa) equals ((kappa+1)/(kappa-1))^2
    let cr_val = cross_ratio(b0, b1, b2, b3);
    let s = cr_val.sqrt();
    for root in [s, -s] {
        let denom = root - ONE;
        if denom.norm() < 1e-12 {
            continue;
        }
        let kappa = (root + ONE) / denom;
        if kappa.norm() < 1e-9 || (kappa * kappa - ONE).norm() < 1e-12 {
            continue;
        }
        let t = Moebius::three_points([b0, b1, b2], [ONE, -ONE, -ONE / kappa]);
        let image4 = t.apply(b3);
        if (image4 - ONE / kappa).norm() > 1e-7 * (1.0 + (ONE / kappa).norm()) {
            continue;
        }
        // dz/y = c dx / sqrt((1-x^2)(1-kappa^2 x^2)),
        // c = kappa det(T) / sqrt(prod (c b_i + d))
        let mut prod = ONE;
        for &bi in branch {
            prod *= t.c * bi + t.d;
        }
        let c_const = kappa * t.det() / prod.sqrt();
        let (big_k, big_kp) = agm_k(kappa)?;
        let lat = PeriodLattice {
            omega1: cr(4.0) * c_const * big_k,
            omega2: C64::new(0.0, 2.0) * c_const * big_kp,
        };
        // balance: keep kappa away from 0, 1, infinity
        let balance = kappa
            .norm()
            .min(1.0 / kappa.norm())
            .min((kappa * kappa - ONE).norm());
        return Ok((balance, lat));
    }
    Err(Error::DegenerateCurve)
}

fn nodal_periods(branch: &[C64; 4], clusters: &[Vec<usize>]) -> Result<Vec<C64>> {
    // y^2 = prod (z - b_i) with collided points: around each double point c,
    // y ~ (z - c) sqrt(rest) and the loop integral of dz/y is
    // 2 pi i / sqrt(prod_{other} (c - b_j)).
    let mut finite = Vec::new();
    for cl in clusters {
        if cl.len() == 2 {
            let center = (branch[cl[0]] + branch[cl[1]]) / cr(2.0);
            let mut rest = ONE;
            for (j, &b) in branch.iter().enumerate() {
                if !cl.contains(&j) {
                    rest *= center - b;
                }
            }
            finite.push(C64::new(0.0, 2.0 * std::f64::consts::PI) / rest.sqrt());
        }
    }
    if finite.is_empty() {
        return Err(Error::DegenerateCurve);
    }
    Ok(finite)
}

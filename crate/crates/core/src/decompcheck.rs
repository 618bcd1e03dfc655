//! The complete-decomposability criterion for Poncelet-Darboux curves: four
//! pencil parameters with prescribed square-factor shapes, the certificate
//! they assemble into (factor polynomials, the two elliptic curves, the
//! constant N), and its verification including the N = a/n period condition.

use crate::error::{Error, Result};
use crate::gcd;
use crate::pdcurve::{critical_parameters, member_multiplicities, transversality_check};
use crate::periods::{quartic_periods, CurvePeriods};
use crate::poly::{cr, C64, Poly, ZERO};
use crate::roots;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Odd,
    Even,
}

/// Witness of a candidate decomposition: the four pencil parameters with
/// their contact values and square factors, the two quartic models, and the
/// constant relating the factor product to the Wronskian of the pencil.
#[derive(Debug, Clone)]
pub struct DecompCertificate {
    pub t_values: [C64; 4],
    pub contacts: Vec<C64>,
    pub q_factors: [Poly; 4],
    /// branch points of Gamma_1: y^2 = prod (z - a_i)
    pub gamma1: [C64; 4],
    /// branch points of Gamma_2: Y^2 = prod (X + t_i)
    pub gamma2: [C64; 4],
    pub n_const: C64,
    pub n: usize,
    pub parity: Parity,
}

/// One shape-factorable critical parameter.
#[derive(Debug, Clone)]
struct ShapeCandidate {
    t: C64,
    /// simple contact values (one for odd shapes, two or zero for even)
    contacts: Vec<C64>,
    q: Poly,
}

/// Factor a monic member into (z - a) Q^2 (odd n): requires exactly one root
/// of odd multiplicity. The contact may coincide with a root of Q (the
/// confluent case).
fn odd_shape(clusters: &[(C64, usize)], k: usize) -> Option<(C64, Poly)> {
    let odd_roots: Vec<C64> = clusters
        .iter()
        .filter(|(_, m)| m % 2 == 1)
        .map(|(z, _)| *z)
        .collect();
    if odd_roots.len() != 1 {
        return None;
    }
    let a = odd_roots[0];
    let mut q_roots = Vec::new();
    for &(z, m) in clusters {
        let reduced = if m % 2 == 1 { m - 1 } else { m };
        for _ in 0..reduced / 2 {
            q_roots.push(z);
        }
    }
    if q_roots.len() != k {
        return None;
    }
    Some((a, Poly::from_roots(&q_roots)))
}

/// Factor a monic member into (z-a)(z-b) Q^2 or Q^2 (even n).
fn even_shape(clusters: &[(C64, usize)], k: usize) -> Option<(Vec<C64>, Poly)> {
    let odd_roots: Vec<C64> = clusters
        .iter()
        .filter(|(_, m)| m % 2 == 1)
        .map(|(z, _)| *z)
        .collect();
    let expected_q = match odd_roots.len() {
        0 => k,
        2 => k - 1,
        _ => return None,
    };
    let mut q_roots = Vec::new();
    for &(z, m) in clusters {
        let reduced = if m % 2 == 1 { m - 1 } else { m };
        for _ in 0..reduced / 2 {
            q_roots.push(z);
        }
    }
    if q_roots.len() != expected_q {
        return None;
    }
    Some((odd_roots, Poly::from_roots(&q_roots)))
}

/// The pencil Wronskian phi' f - phi f'; t-independent along the pencil.
pub fn pencil_wronskian(phi: &Poly, f: &Poly) -> Poly {
    phi.derivative().mul(f).sub(&phi.mul(&f.derivative()))
}

fn fit_constant(product: &Poly, target: &Poly) -> (C64, f64) {
    // least squares N with product = N * target
    let mut num = ZERO;
    let mut den = 0.0f64;
    let len = product.coeffs().len().max(target.coeffs().len());
    for i in 0..len {
        let w = target.coeff(i);
        num += w.conj() * product.coeff(i);
        den += w.norm_sqr();
    }
    if den == 0.0 {
        return (ZERO, f64::INFINITY);
    }
    let n_const = num / cr(den);
    let resid = product.max_diff(&target.scale(n_const)) / product.max_coeff_norm().max(1e-300);
    (n_const, resid)
}

fn compositions_of_four(parts: usize) -> Vec<Vec<usize>> {
    // all vectors of `parts` positive integers summing to 4
    fn rec(parts: usize, total: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if parts == 1 {
            if total >= 1 {
                let mut v = prefix.clone();
                v.push(total);
                out.push(v);
            }
            return;
        }
        for first in 1..=total.saturating_sub(parts - 1) {
            prefix.push(first);
            rec(parts - 1, total - first, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(parts, 4, &mut Vec::new(), &mut out);
    out
}

/// Search the collision moments for four parameters whose members factor in
/// the square shapes, and assemble the certificate. `None` when the pencil
/// does not satisfy the degree conditions.
pub fn criterion(phi: &Poly, f: &Poly, tol: f64) -> Result<Option<DecompCertificate>> {
    let n = phi.degree().ok_or(Error::ZeroPolynomial)?;
    if n < 3 {
        return Err(Error::InvalidInput("criterion needs degree n >= 3".into()));
    }
    let phi = phi.monic()?;
    let (_, d) = gcd::poly_gcd(&phi, f, tol)?;
    if d > 0 {
        return Err(Error::BasePoint { degree: d });
    }
    // Confluent pencils (a contact value colliding with a root of its Q)
    // fail strict transversality yet still factor in the square shapes and
    // carry a certificate in the limit; the transversality error is raised
    // only when the shape assembly fails too.
    let transversal = transversality_check(&phi, f, tol)?;
    let parity = if n % 2 == 1 { Parity::Odd } else { Parity::Even };
    let k = if parity == Parity::Odd { (n - 1) / 2 } else { n / 2 };

    let criticals = critical_parameters(&phi, f)?;
    let mut odd_candidates: Vec<ShapeCandidate> = Vec::new();
    let mut even_two: Vec<ShapeCandidate> = Vec::new();
    let mut even_zero: Vec<ShapeCandidate> = Vec::new();
    for &(t, _) in &criticals {
        let member = phi.add_scaled(f, t);
        let clusters = member_multiplicities(&phi, f, t)?;
        // the clustering must agree with the rank-based degree decision on
        // the Sylvester spectrum; a mismatch is a reportable ambiguity
        let cluster_degree: usize = clusters.iter().map(|(_, m)| m - 1).sum();
        let rank_degree = gcd::gcd_degree(&member, &member.derivative(), tol.max(1e-5))?;
        if rank_degree != cluster_degree {
            return Err(Error::DegreeDisagreement { rank: rank_degree, clusters: cluster_degree });
        }
        // polish the factorization against the member itself
        match parity {
            Parity::Odd => {
                if let Some((a, q)) = odd_shape(&clusters, k) {
                    let rebuilt = Poly::from_roots(&[a]).mul(&q).mul(&q);
                    let resid = rebuilt.max_diff(&member) / member.max_coeff_norm();
                    if resid < 1e-5 {
                        odd_candidates.push(ShapeCandidate { t, contacts: vec![a], q });
                    }
                }
            }
            Parity::Even => {
                if let Some((contacts, q)) = even_shape(&clusters, k) {
                    let mut rebuilt = q.mul(&q);
                    for &a in &contacts {
                        rebuilt = rebuilt.mul(&Poly::from_roots(&[a]));
                    }
                    let resid = rebuilt.max_diff(&member) / member.max_coeff_norm();
                    if resid < 1e-5 {
                        let cand = ShapeCandidate { t, contacts: contacts.clone(), q };
                        if contacts.len() == 2 {
                            even_two.push(cand);
                        } else {
                            even_zero.push(cand);
                        }
                    }
                }
            }
        }
    }

    let wronskian = pencil_wronskian(&phi, f);
    let assemble = |slots: Vec<&ShapeCandidate>| -> Option<DecompCertificate> {
        if slots.len() != 4 {
            return None;
        }
        let mut product = Poly::one();
        for s in &slots {
            product = product.mul(&s.q);
        }
        let (n_const, resid) = fit_constant(&product, &wronskian);
        if resid > tol.max(1e-6) {
            return None;
        }
        let mut contacts = Vec::new();
        for s in &slots {
            contacts.extend(s.contacts.iter().copied());
        }
        if contacts.len() != 4 {
            return None;
        }
        let t_values = [slots[0].t, slots[1].t, slots[2].t, slots[3].t];
        Some(DecompCertificate {
            t_values,
            gamma1: [contacts[0], contacts[1], contacts[2], contacts[3]],
            gamma2: [-t_values[0], -t_values[1], -t_values[2], -t_values[3]],
            contacts,
            q_factors: [
                slots[0].q.clone(),
                slots[1].q.clone(),
                slots[2].q.clone(),
                slots[3].q.clone(),
            ],
            n_const,
            n,
            parity,
        })
    };

    let found = match parity {
        Parity::Odd => {
            // distribute 4 slots over the candidates (confluent members may
            // occupy several); the factor-product identity picks the split
            let mut found = None;
            if !odd_candidates.is_empty() {
                for comp in compositions_of_four(odd_candidates.len()) {
                    let mut slots = Vec::new();
                    for (cand, &c) in odd_candidates.iter().zip(&comp) {
                        for _ in 0..c {
                            slots.push(cand);
                        }
                    }
                    if let Some(cert) = assemble(slots) {
                        found = Some(cert);
                        break;
                    }
                }
            }
            found
        }
        Parity::Even => {
            let mut found = None;
            if !even_two.is_empty() && !even_zero.is_empty() {
                'outer: for comp2 in compositions_of_two(even_two.len()) {
                    for comp0 in compositions_of_two(even_zero.len()) {
                        let mut slots = Vec::new();
                        for (cand, &c) in even_two.iter().zip(&comp2) {
                            for _ in 0..c {
                                slots.push(cand);
                            }
                        }
                        for (cand, &c) in even_zero.iter().zip(&comp0) {
                            for _ in 0..c {
                                slots.push(cand);
                            }
                        }
                        if let Some(cert) = assemble(slots) {
                            found = Some(cert);
                            break 'outer;
                        }
                    }
                }
            }
            found
        }
    };
    match (found, transversal) {
        (Some(cert), _) => Ok(Some(cert)),
        (None, true) => Ok(None),
        (None, false) => Err(Error::DegeneratePencil(
            "pencil is not transversal: a member has a root of multiplicity >= 3".into(),
        )),
    }
}

fn compositions_of_two(parts: usize) -> Vec<Vec<usize>> {
    // nonnegative vectors summing to 2, at most `parts` entries
    let mut out = Vec::new();
    if parts == 0 {
        return out;
    }
    fn rec(parts: usize, total: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if parts == 1 {
            let mut v = prefix.clone();
            v.push(total);
            out.push(v);
            return;
        }
        for first in 0..=total {
            prefix.push(first);
            rec(parts - 1, total - first, prefix, out);
            prefix.pop();
        }
    }
    rec(parts, 2, &mut Vec::new(), &mut out);
    out
}

/// Outcome of the period-lattice consistency test.
#[derive(Debug, Clone)]
pub enum PeriodTest {
    /// both curves smooth: coordinates of omega_i(Gamma1)/N in the Gamma2
    /// lattice must be integers
    Smooth { deviation: f64, index: f64 },
    /// both curves nodal: the finite-period ratio p1/(N p2) must be a
    /// nonzero integer
    Nodal { winding: f64, deviation: f64 },
    Mixed,
}

impl PeriodTest {
    pub fn consistent(&self) -> bool {
        match self {
            PeriodTest::Smooth { deviation, .. } => *deviation < 1e-5,
            PeriodTest::Nodal { winding, deviation } => {
                *deviation < 1e-5 && winding.round().abs() >= 1.0
            }
            PeriodTest::Mixed => false,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CertReport {
    pub shape_residuals: [f64; 4],
    pub n_const: C64,
    pub n_residual: f64,
    /// best integer a <= 2n approximating N = a/n, with its error. The
    /// rationality of N depends on the pencil normalization; the
    /// scaling-invariant statement is the period-lattice inclusion.
    pub admissible_a: Option<(usize, f64)>,
    pub period_test: PeriodTest,
    n: usize,
}

impl CertReport {
    /// The strict reading: fail unless N = a/n holds for an integer a.
    pub fn require_admissible_a(&self) -> Result<usize> {
        match self.admissible_a {
            Some((a, _)) => Ok(a),
            None => Err(Error::NoAdmissibleA {
                n_value: self.n_const.re,
                n: self.n,
                limit: 2 * self.n,
                lattice_consistent: self.period_test.consistent(),
            }),
        }
    }
}

/// Re-derive every claim of a certificate against the pencil: the shape
/// factorizations, the factor-product constant, and the N = a/n period
/// condition through the AGM lattices of the two quartic models.
pub fn verify_certificate(
    cert: &DecompCertificate,
    phi: &Poly,
    f: &Poly,
    tol: f64,
) -> Result<CertReport> {
    let phi = phi.monic()?;
    // (1) shapes
    let mut shape_residuals = [0.0f64; 4];
    for i in 0..4 {
        let member = phi.add_scaled(f, cert.t_values[i]);
        let mut rebuilt = cert.q_factors[i].mul(&cert.q_factors[i]);
        match cert.parity {
            Parity::Odd => {
                rebuilt = rebuilt.mul(&Poly::from_roots(&[cert.contacts[i]]));
            }
            Parity::Even => {
                // contacts are grouped per slot during assembly; rebuild from
                // degree bookkeeping
                let kq = cert.q_factors[i].degree().unwrap_or(0);
                let missing = cert.n - 2 * kq;
                if missing == 2 {
                    // this slot carries two contact values: find them by
                    // matching the member's simple roots
                    let clusters = roots::roots(&member, 1e-6)?;
                    for &(z, m) in &clusters.roots {
                        if m % 2 == 1 {
                            rebuilt = rebuilt.mul(&Poly::from_roots(&[z]));
                        }
                    }
                }
            }
        }
        let resid = rebuilt.max_diff(&member) / member.max_coeff_norm();
        shape_residuals[i] = resid;
        if resid > tol.max(1e-6) * 10.0 {
            return Err(Error::ShapeMismatch { index: i, residual: resid });
        }
    }

    // (2) the factor-product constant
    let wronskian = pencil_wronskian(&phi, f);
    let mut product = Poly::one();
    for q in &cert.q_factors {
        product = product.mul(q);
    }
    let (n_const, n_residual) = fit_constant(&product, &wronskian);

    // (3) periods
    let periods1 = quartic_periods(&cert.gamma1)?;
    let periods2 = quartic_periods(&cert.gamma2)?;
    let period_test = match (&periods1, &periods2) {
        (CurvePeriods::Smooth(l1), CurvePeriods::Smooth(l2)) => {
            let d1 = l2.membership_deviation(l1.omega1 / n_const);
            let d2 = l2.membership_deviation(l1.omega2 / n_const);
            let index = (l1.cell_area() / n_const.norm_sqr()) / l2.cell_area();
            PeriodTest::Smooth { deviation: d1.max(d2), index }
        }
        (CurvePeriods::Nodal { finite: f1 }, CurvePeriods::Nodal { finite: f2 }) => {
            // match each finite period of Gamma1 against one of Gamma2
            let mut best = (f64::INFINITY, 0.0);
            for p1 in f1 {
                for p2 in f2 {
                    let w = p1 / (n_const * p2);
                    if w.im.abs() < 1e-5 * (1.0 + w.norm()) {
                        let dev = (w.re - w.re.round()).abs();
                        if dev < best.0 {
                            best = (dev, w.re);
                        }
                    }
                }
            }
            PeriodTest::Nodal { winding: best.1, deviation: best.0 }
        }
        _ => PeriodTest::Mixed,
    };

    // (4) N = a/n for a small positive integer
    let mut best_a = 0;
    let mut a_error = f64::INFINITY;
    for a in 1..=2 * cert.n {
        let err = (n_const - cr(a as f64 / cert.n as f64)).norm();
        if err < a_error {
            a_error = err;
            best_a = a;
        }
    }
    let admissible_a = if a_error <= tol.max(1e-6) { Some((best_a, a_error)) } else { None };
    Ok(CertReport { shape_residuals, n_const, n_residual, admissible_a, period_test, n: cert.n })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sufficiency {
    /// n = m or 2m with m odd: every covering of the given form is cyclic
    /// and the degree conditions are sufficient.
    Guaranteed,
    /// 4 | n: non-cyclic coverings of the same form exist; defer to the
    /// geometric check.
    NeedsCyclicityCheck,
}

pub fn sufficiency_class(n: usize) -> Result<Sufficiency> {
    if n < 3 {
        return Err(Error::InvalidInput("need n >= 3".into()));
    }
    let two_adic = n.trailing_zeros();
    Ok(if two_adic <= 1 { Sufficiency::Guaranteed } else { Sufficiency::NeedsCyclicityCheck })
}

/// A parameter where the member factors as (z - a) Q^2 S with deg Q = 1 and
/// S of degree n - 3: exactly one double root, all other roots simple.
#[derive(Debug, Clone)]
pub struct ShapeMatch {
    pub t: C64,
    pub a: C64,
    pub q: Poly,
    pub s: Poly,
}

/// Detect the conic-component-of-a-conic shape: every admissible split
/// (t, a, Q, S) is listed, one per choice of the simple factor a.
pub fn toma_trautmann_shape(phi: &Poly, f: &Poly, tol: f64) -> Result<Vec<ShapeMatch>> {
    let n = phi.degree().ok_or(Error::ZeroPolynomial)?;
    if n < 3 {
        return Ok(vec![]);
    }
    let phi = phi.monic()?;
    let (_, d) = gcd::poly_gcd(&phi, f, tol)?;
    if d > 0 {
        return Err(Error::BasePoint { degree: d });
    }
    let criticals = critical_parameters(&phi, f)?;
    let mut out = Vec::new();
    for &(t, _) in &criticals {
        let clusters = member_multiplicities(&phi, f, t)?;
        let doubles: Vec<C64> =
            clusters.iter().filter(|(_, m)| *m == 2).map(|(z, _)| *z).collect();
        let simples: Vec<C64> =
            clusters.iter().filter(|(_, m)| *m == 1).map(|(z, _)| *z).collect();
        let clean = doubles.len() == 1 && simples.len() == n - 2;
        if !clean {
            continue;
        }
        let q = Poly::from_roots(&[doubles[0]]);
        for &a in &simples {
            let s_roots: Vec<C64> = simples.iter().copied().filter(|&z| z != a).collect();
            out.push(ShapeMatch { t, a, q: q.clone(), s: Poly::from_roots(&s_roots) });
        }
    }
    Ok(out)
}

//! The conic K: z1^2 = 4 z0 z2, Darboux coordinates, construction and
//! evaluation of Poncelet-Darboux curves, and the annihilator-matrix route to
//! the same curve. The plane is the projective space of quadratic
//! polynomials z2 s^2 + z1 s + z0.

use crate::error::{Error, Result};
use crate::gcd;
use crate::linalg;
use crate::poly::{cr, C64, Poly, ONE, ZERO};
use crate::resultant::disc_in_t;
use crate::roots;
use crate::trivar::{power_sum_in_esym, Bivar, HomPoly};
use nalgebra::DMatrix;

/// Homogeneous point (z0 : z1 : z2).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjPoint {
    pub z0: C64,
    pub z1: C64,
    pub z2: C64,
}

impl ProjPoint {
    pub fn new(z0: C64, z1: C64, z2: C64) -> Self {
        ProjPoint { z0, z1, z2 }
    }

    pub fn norm(&self) -> f64 {
        (self.z0.norm_sqr() + self.z1.norm_sqr() + self.z2.norm_sqr()).sqrt()
    }

    /// Scale so the largest coordinate is 1; kills scale and phase.
    pub fn normalized(&self) -> Self {
        let coords = [self.z0, self.z1, self.z2];
        let pivot = coords
            .iter()
            .copied()
            .max_by(|a, b| a.norm().partial_cmp(&b.norm()).unwrap())
            .unwrap();
        if pivot.norm() == 0.0 {
            return *self;
        }
        ProjPoint::new(self.z0 / pivot, self.z1 / pivot, self.z2 / pivot)
    }

    pub fn dist(&self, other: &ProjPoint) -> f64 {
        let a = self.normalized();
        let b = other.normalized();
        ((a.z0 - b.z0).norm_sqr() + (a.z1 - b.z1).norm_sqr() + (a.z2 - b.z2).norm_sqr()).sqrt()
    }

    /// Value of the fixed conic z1^2 - 4 z0 z2 at this point.
    pub fn on_k(&self) -> C64 {
        self.z1 * self.z1 - cr(4.0) * self.z0 * self.z2
    }
}

/// Unordered pair of tangency parameters of the two tangents to K through a
/// point. Infinite parameters are legitimate (points with z2 = 0).
#[derive(Debug, Clone, Copy)]
pub struct DarbouxPair {
    pub rho: CP1,
    pub rho1: CP1,
}

/// A point of the parameter line: finite value or infinity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CP1 {
    Finite(C64),
    Infinity,
}

impl CP1 {
    pub fn finite(self) -> Option<C64> {
        match self {
            CP1::Finite(z) => Some(z),
            CP1::Infinity => None,
        }
    }
}

/// The two solutions of z2 s^2 + z1 s + z0 = 0, projectively: a vanishing
/// leading coefficient contributes a root at infinity.
pub fn to_darboux(p: &ProjPoint) -> Result<DarbouxPair> {
    let scale = p.norm();
    if scale == 0.0 {
        return Err(Error::InvalidInput("zero projective point".into()));
    }
    let (a, b, cc) = (p.z2, p.z1, p.z0);
    let tiny = 1e-14 * scale;
    if a.norm() <= tiny {
        if b.norm() <= tiny {
            return Err(Error::InvalidInput(
                "point (1:0:0) has both tangency parameters at infinity".into(),
            ));
        }
        // linear: b s + c = 0 plus a root at infinity
        return Ok(DarbouxPair { rho: CP1::Finite(-cc / b), rho1: CP1::Infinity });
    }
    let disc = (b * b - cr(4.0) * a * cc).sqrt();
    // numerically stable quadratic roots
    let q = if (b + disc).norm() >= (b - disc).norm() {
        -(b + disc) / cr(2.0)
    } else {
        -(b - disc) / cr(2.0)
    };
    let (r1, r2) = if q.norm() > 0.0 {
        (q / a, cc / q)
    } else {
        (ZERO, ZERO)
    };
    Ok(DarbouxPair { rho: CP1::Finite(r1), rho1: CP1::Finite(r2) })
}

/// (rho rho1 : -(rho + rho1) : 1), with projective limits for infinite
/// parameters.
pub fn from_darboux(pair: &DarbouxPair) -> ProjPoint {
    match (pair.rho, pair.rho1) {
        (CP1::Finite(r), CP1::Finite(s)) => ProjPoint::new(r * s, -(r + s), ONE),
        (CP1::Finite(r), CP1::Infinity) | (CP1::Infinity, CP1::Finite(r)) => {
            ProjPoint::new(r, -ONE, ZERO)
        }
        (CP1::Infinity, CP1::Infinity) => ProjPoint::new(ONE, ZERO, ZERO),
    }
}

pub fn from_darboux_finite(rho: C64, rho1: C64) -> ProjPoint {
    from_darboux(&DarbouxPair { rho: CP1::Finite(rho), rho1: CP1::Finite(rho1) })
}

/// The line z2 a^2 + z1 a + z0 = 0 as the coefficient triple (1, a, a^2);
/// it touches K at the point with parameter -a, and a point lies on it
/// exactly when a is one of its Darboux parameters.
pub fn tangent_line(alpha: C64) -> [C64; 3] {
    [ONE, alpha, alpha * alpha]
}

/// Intersection of two lines given by coefficient triples.
pub fn line_intersection(l: &[C64; 3], m: &[C64; 3]) -> ProjPoint {
    ProjPoint::new(
        l[1] * m[2] - l[2] * m[1],
        l[2] * m[0] - l[0] * m[2],
        l[0] * m[1] - l[1] * m[0],
    )
}

/// A Poncelet-Darboux curve: the symmetric form S(rho, rho1) and the
/// homogeneous trivariate form of degree n-1 obtained through
/// e1 = -z1/z2, e2 = z0/z2.
#[derive(Debug, Clone)]
pub struct PDCurve {
    /// `sym[i][j]` multiplies rho^i rho1^j; exactly symmetric.
    pub sym: Vec<Vec<C64>>,
    pub tri: HomPoly,
    pub n: usize,
}

impl PDCurve {
    pub fn eval_sym(&self, rho: C64, rho1: C64) -> C64 {
        let mut acc = ZERO;
        for (i, row) in self.sym.iter().enumerate() {
            let mut inner = ZERO;
            for &c in row.iter().rev() {
                inner = inner * rho1 + c;
            }
            acc += inner * rho.powu(i as u32);
        }
        acc
    }

    /// Normalized residual of a point against the trivariate form.
    pub fn residual(&self, p: &ProjPoint) -> f64 {
        let q = p.normalized();
        let t = self.tri.normalized();
        t.eval(q.z0, q.z1, q.z2).norm()
    }
}

/// Build the curve from a pencil: S(rho, rho1) =
/// (f(rho) phi(rho1) - phi(rho) f(rho1)) / (rho1 - rho), the Bezout form of
/// the pair. Requires phi and f coprime; a common zero is a base point of the
/// linear system and the curve degenerates with a tangent-line component.
pub fn pd_curve(phi: &Poly, f: &Poly) -> Result<PDCurve> {
    pd_curve_with_tol(phi, f, 1e-8)
}

pub fn pd_curve_with_tol(phi: &Poly, f: &Poly, tol: f64) -> Result<PDCurve> {
    let n = phi.degree().ok_or(Error::ZeroPolynomial)?;
    if n < 1 {
        return Err(Error::DegeneratePencil("phi must have degree >= 1".into()));
    }
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if f.degree().unwrap_or(0) > n {
        return Err(Error::DegeneratePencil("deg f must not exceed deg phi".into()));
    }
    let (_, d) = gcd::poly_gcd(phi, f, tol)?;
    if d > 0 {
        return Err(Error::BasePoint { degree: d });
    }
    // a degree-n f spans the same pencil as f - (lc f / lc phi) phi and the
    // alternating form S is unchanged by that substitution
    let reduced;
    let f = if f.degree() == Some(n) {
        reduced = f.sub(&phi.scale(f.coeff(n) / phi.coeff(n)));
        &reduced
    } else {
        f
    };

    // numerator N(x, y) = f(x) phi(y) - phi(x) f(y), divided by (y - x):
    // treat as a polynomial in y whose coefficients are polynomials in x.
    // N = sum_k y^k [phi_k f(x) - f_k phi(x)], then synthetic division by
    // (y - x) over the coefficient ring C[x].
    let deg_y = n;
    let mut ny: Vec<Poly> = (0..=deg_y)
        .map(|k| f.scale(phi.coeff(k)).sub(&phi.scale(f.coeff(k))))
        .collect();
    // quotient q_{k-1} = n_k + x * q_k, descending; remainder n_0 + x q_0 = 0
    let mut q: Vec<Poly> = vec![Poly::zero(); deg_y];
    let mut carry = Poly::zero();
    for k in (1..=deg_y).rev() {
        let qk = ny[k].add(&carry);
        carry = qk.mul(&Poly::x());
        q[k - 1] = qk;
    }
    let rem = ny.remove(0).add(&carry);
    let rem_scale = rem.max_coeff_norm();
    let num_scale = q.iter().map(|p| p.max_coeff_norm()).fold(1e-300, f64::max);
    if rem_scale > 1e-9 * num_scale {
        return Err(Error::Numerical(format!(
            "Bezout division left a remainder of relative size {:.3e}",
            rem_scale / num_scale
        )));
    }

    // sym[i][j]: coefficient of rho^i rho1^j, exactly symmetrized
    let m = n; // degrees run 0..n-1
    let mut sym = vec![vec![ZERO; m]; m];
    for (j, poly_x) in q.iter().enumerate() {
        for i in 0..m {
            sym[i][j] = poly_x.coeff(i);
        }
    }
    for i in 0..m {
        for j in 0..i {
            let avg = (sym[i][j] + sym[j][i]) / cr(2.0);
            sym[i][j] = avg;
            sym[j][i] = avg;
        }
    }

    // rewrite in e1 = rho + rho1, e2 = rho rho1, then homogenize with
    // e1 = -z1/z2, e2 = z0/z2, clearing z2^{n-1}
    let mut t_e = Bivar::zero(n - 1, n - 1);
    for i in 0..m {
        // diagonal terms: (rho rho1)^i = e2^i
        t_e.coeffs[0][i] += sym[i][i];
        for j in i + 1..m {
            // c_ij * e2^i * p_{j-i}(e1, e2), counted once (symmetry folds the pair)
            let p = power_sum_in_esym(j - i);
            for (a, row) in p.coeffs.iter().enumerate() {
                for (b, &c) in row.iter().enumerate() {
                    if c.norm() != 0.0 {
                        t_e.coeffs[a][b + i] += sym[i][j] * c;
                    }
                }
            }
        }
    }
    let mut tri = HomPoly::zero(n - 1);
    for (a, row) in t_e.coeffs.iter().enumerate() {
        for (b, &c) in row.iter().enumerate() {
            if c.norm() == 0.0 {
                continue;
            }
            // e1^a e2^b -> (-z1)^a z0^b z2^{n-1-a-b}
            if a + b > n - 1 {
                return Err(Error::Numerical("unexpected degree in symmetric rewrite".into()));
            }
            let sign = if a % 2 == 0 { ONE } else { -ONE };
            *tri.coeff_mut(b, a) += c * sign;
        }
    }
    Ok(PDCurve { sym, tri, n })
}

/// The annihilator route: det(A K(z)) where the rows of A span the
/// annihilator of the pencil's coefficient vectors and K(z) is the banded
/// matrix with columns (z2, -z1, z0) shifted. Proportional to pd_curve.tri.
pub fn pd_matrix(phi: &Poly, f: &Poly) -> Result<HomPoly> {
    let n = phi.degree().ok_or(Error::ZeroPolynomial)?;
    if n < 2 {
        return Err(Error::DegeneratePencil("need degree >= 2".into()));
    }
    // pencil span must be 2-dimensional
    let mut pm = DMatrix::from_element(2, n + 1, ZERO);
    for k in 0..=n {
        pm[(0, k)] = phi.coeff(k);
        pm[(1, k)] = f.coeff(k);
    }
    let sv = linalg::singular_values(&pm);
    if sv[1] < 1e-12 * sv[0] {
        return Err(Error::DegeneratePencil("pencil is rank deficient".into()));
    }
    let ann = linalg::null_space(&pm, n - 1)?;

    // M(z)[i][j] = <A_i, column_j of K(z)>; column j of K(z) holds the
    // coefficient vector of x^j (z0 + z1 x + z2 x^2), so the determinant
    // vanishes exactly when the quadratic of the point divides a member of
    // the pencil.
    let d = n - 1;
    let mut entries = Vec::with_capacity(d * d);
    for i in 0..d {
        for j in 0..d {
            let a = &ann[i];
            entries.push(HomPoly::linear(a[j], a[j + 1], a[j + 2]));
        }
    }
    // Leibniz expansion over permutations (d <= 7 at desk scale)
    let mut det = HomPoly::zero(d);
    let mut perm: Vec<usize> = (0..d).collect();
    let mut sign = 1i32;
    loop {
        let mut term = HomPoly::zero(0);
        *term.coeff_mut(0, 0) = if sign > 0 { ONE } else { -ONE };
        for (i, &j) in perm.iter().enumerate() {
            term = term.mul(&entries[i * d + j]);
        }
        det = det.add(&term);
        // next permutation in lexicographic order, tracking parity
        if !next_permutation(&mut perm, &mut sign) {
            break;
        }
    }
    Ok(det)
}

fn next_permutation(perm: &mut [usize], sign: &mut i32) -> bool {
    let n = perm.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && perm[i - 1] >= perm[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while perm[j] <= perm[i - 1] {
        j -= 1;
    }
    perm.swap(i - 1, j);
    *sign = -*sign;
    let (mut a, mut b) = (i, n - 1);
    while a < b {
        perm.swap(a, b);
        *sign = -*sign;
        a += 1;
        b -= 1;
    }
    true
}

/// Newton iteration on the system Phi_t(x) = dPhi_t/dx (x) = 0 in the pair
/// (x, t): polishes a critical parameter together with its double root to
/// machine precision. Returns None when the iteration wanders or stalls.
fn polish_critical(phi: &Poly, f: &Poly, x0: C64, t0: C64) -> Option<(C64, C64)> {
    let dphi = phi.derivative();
    let df = f.derivative();
    let ddphi = dphi.derivative();
    let ddf = df.derivative();
    let mut x = x0;
    let mut t = t0;
    for _ in 0..60 {
        let g1 = phi.eval(x) + t * f.eval(x);
        let g2 = dphi.eval(x) + t * df.eval(x);
        // Jacobian [[dPhi', f], [dPhi'', f']] in (x, t)
        let a11 = g2;
        let a12 = f.eval(x);
        let a21 = ddphi.eval(x) + t * ddf.eval(x);
        let a22 = df.eval(x);
        let det = a11 * a22 - a12 * a21;
        if det.norm() < 1e-300 {
            return None;
        }
        let dx = (g1 * a22 - a12 * g2) / det;
        let dt = (a11 * g2 - g1 * a21) / det;
        x -= dx;
        t -= dt;
        if dx.norm() < 1e-14 * (1.0 + x.norm()) && dt.norm() < 1e-14 * (1.0 + t.norm()) {
            return Some((x, t));
        }
    }
    // accept slow convergence only when the equations are genuinely met
    let g1 = phi.eval(x) + t * f.eval(x);
    let g2 = dphi.eval(x) + t * df.eval(x);
    let scale = phi.max_coeff_norm() * (1.0 + x.norm()).powi(phi.degree()? as i32);
    if g1.norm() < 1e-10 * scale && g2.norm() < 1e-10 * scale {
        Some((x, t))
    } else {
        None
    }
}

/// Critical parameters of the pencil: roots of the discriminant in t,
/// polished by Newton on (double root, parameter) pairs and certified by an
/// actual multiple root of the member. Returned as (t, multiplicity of the
/// disc root).
pub fn critical_parameters(phi: &Poly, f: &Poly) -> Result<Vec<(C64, usize)>> {
    let disc = disc_in_t(phi, f)?;
    if disc.degree() == Some(0) {
        return Ok(vec![]);
    }
    let raw = roots::roots_raw(&disc)?;
    let scale = 1.0 + raw.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let clusters = roots::cluster_indices(&raw, 1e-5 * scale);
    let mut refined: Vec<(C64, usize)> = Vec::new();
    for cl in clusters {
        let t0 = cl.iter().map(|&i| raw[i]).sum::<C64>() / cr(cl.len() as f64);
        // seed the double-root location with the member's closest root pair
        let member = phi.add_scaled(f, t0);
        let mroots = match roots::roots_raw(&member) {
            Ok(r) => r,
            Err(_) => continue,
        };
        let mut best: Option<(f64, C64)> = None;
        for i in 0..mroots.len() {
            for j in i + 1..mroots.len() {
                let d = (mroots[i] - mroots[j]).norm();
                let mid = (mroots[i] + mroots[j]) / cr(2.0);
                if best.as_ref().map_or(true, |(bd, _)| d < *bd) {
                    best = Some((d, mid));
                }
            }
        }
        let Some((_, x0)) = best else { continue };
        // a disc root whose member has no collapsing pair is a fitting
        // artifact; Newton certifies the genuine ones
        if let Some((_, t_star)) = polish_critical(phi, f, x0, t0) {
            refined.push((t_star, cl.len()));
        }
    }
    // collapse criticals that polished to the same parameter
    let tscale = 1.0 + refined.iter().map(|(t, _)| t.norm()).fold(0.0, f64::max);
    let points: Vec<C64> = refined.iter().map(|(t, _)| *t).collect();
    let groups = roots::cluster_indices(&points, 1e-9 * tscale);
    let mut out: Vec<(C64, usize)> = Vec::new();
    for g in groups {
        let t = refined[g[0]].0;
        let mu: usize = g.iter().map(|&i| refined[i].1).sum();
        out.push((t, mu));
    }
    out.sort_by(|a, b| (a.0.re, a.0.im).partial_cmp(&(b.0.re, b.0.im)).unwrap());
    Ok(out)
}

/// Multiplicity radius for clustering the roots of a critical member: the
/// computed critical t carries an O(machine) error, which a multiple root
/// amplifies to roughly its cube root.
pub fn multiplicity_radius(scale: f64) -> f64 {
    3e-4 * scale
}

/// Root clusters of Phi_t at a critical parameter. Reports ambiguity when
/// distinct clusters come too close to the clustering radius.
pub fn member_multiplicities(phi: &Poly, f: &Poly, t: C64) -> Result<Vec<(C64, usize)>> {
    let member = phi.add_scaled(f, t);
    let raw = roots::roots_raw(&member)?;
    let scale = 1.0 + raw.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let radius = multiplicity_radius(scale);
    let clusters = roots::cluster_indices(&raw, radius);
    let mut out: Vec<(C64, usize)> = Vec::new();
    for cl in clusters {
        let centroid = cl.iter().map(|&i| raw[i]).sum::<C64>() / cr(cl.len() as f64);
        let z = if cl.len() > 1 {
            roots::refine_multiple_root(&member, centroid, cl.len())
        } else {
            centroid
        };
        out.push((z, cl.len()));
    }
    // ambiguity: two clusters closer than a small factor of the radius
    for i in 0..out.len() {
        for j in i + 1..out.len() {
            let sep = (out[i].0 - out[j].0).norm();
            if sep < 4.0 * radius {
                return Err(Error::AmbiguousMultiplicity { tol: radius, separation: sep });
            }
        }
    }
    out.sort_by(|a, b| (a.0.re, a.0.im).partial_cmp(&(b.0.re, b.0.im)).unwrap());
    Ok(out)
}

/// True when no member of the pencil has a root of multiplicity >= 3; this
/// is transversal intersection of the curve with K.
pub fn transversality_check(phi: &Poly, f: &Poly, _tol: f64) -> Result<bool> {
    let criticals = critical_parameters(phi, f)?;
    for &(t, _) in &criticals {
        let clusters = member_multiplicities(phi, f, t)?;
        if clusters.iter().any(|&(_, m)| m >= 3) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Number of generalized Fregier points of an n-volution: n - 1 for both
/// parities, with the binomial bookkeeping checked en route.
pub fn fregier_count(n: usize) -> Result<usize> {
    if n < 2 {
        return Err(Error::InvalidInput("need n >= 2".into()));
    }
    let binom = |a: usize, b: usize| -> usize {
        if b > a {
            return 0;
        }
        let mut acc = 1usize;
        for i in 0..b {
            acc = acc * (a - i) / (i + 1);
        }
        acc
    };
    let count = if n % 2 == 0 {
        let k = n / 2;
        let c = binom(k + 2, 2) - 2 - binom(k, 2);
        debug_assert_eq!(c, 2 * k - 1);
        c
    } else {
        let k = (n + 1) / 2;
        2 * k - 2
    };
    debug_assert_eq!(count, n - 1);
    Ok(count)
}

//! Splitting a Poncelet-Darboux curve into conic components (and a line when
//! the pencil degree is even): deterministic exhaustive fitting over sampled
//! grid points with inlier counting. Numerical fitting can detect a
//! decomposition but never certify irreducibility, so the no-split outcome is
//! reported as "not detected".

use crate::error::{Error, Result};
use crate::linalg;
use crate::pdcurve::{critical_parameters, line_intersection, tangent_line, PDCurve};
use crate::poly::{c, cr, C64, Poly, ZERO};
use crate::roots;
use crate::trivar::HomPoly;
use nalgebra::DMatrix;

pub const DEFAULT_T_SAMPLES: usize = 60;
const MAX_FIT_ATTEMPTS: usize = 200_000;

#[derive(Debug, Clone)]
pub enum Component {
    Conic(HomPoly),
    Line(HomPoly),
}

impl Component {
    pub fn form(&self) -> &HomPoly {
        match self {
            Component::Conic(h) | Component::Line(h) => h,
        }
    }
}

#[derive(Debug, Clone)]
pub enum Decomposition {
    /// Every sample is explained by the components and their product
    /// reproduces the curve.
    Split {
        components: Vec<Component>,
        fit_residual: f64,
        product_residual: f64,
    },
    /// Exhaustive fitting found no component cover. Not a proof of
    /// irreducibility.
    NotDetected,
}

struct SampleSet {
    /// normalized points grouped by t-sample
    by_t: Vec<Vec<[C64; 3]>>,
}

impl SampleSet {
    fn all(&self) -> Vec<[C64; 3]> {
        self.by_t.iter().flatten().copied().collect()
    }
}

/// Grid sampling: for each t, intersect all pairs of tangent lines at the
/// roots of Phi_t. Every pairwise intersection lies on the curve.
fn sample_curve(phi: &Poly, f: &Poly, n_t: usize) -> Result<SampleSet> {
    let criticals = critical_parameters(phi, f)?;
    let crit_abs: Vec<f64> = criticals.iter().map(|(t, _)| t.norm()).collect();
    let min_crit = crit_abs.iter().copied().filter(|&x| x > 1e-9).fold(f64::INFINITY, f64::min);
    let radius = if min_crit.is_finite() { 0.47 * min_crit } else { 1.0 };

    let mut by_t = Vec::with_capacity(n_t);
    let mut attempts = 0;
    let mut j = 0;
    while by_t.len() < n_t && attempts < 3 * n_t {
        attempts += 1;
        let theta = 2.0 * std::f64::consts::PI * (j as f64 + 0.383) / (n_t as f64);
        j += 1;
        let t = c(radius * theta.cos(), radius * theta.sin());
        if criticals.iter().any(|(tc, _)| (t - tc).norm() < 1e-4 * (1.0 + tc.norm())) {
            continue;
        }
        let member = phi.add_scaled(f, t);
        let rs = match roots::roots(&member, 1e-10) {
            Ok(r) => r,
            Err(_) => continue,
        };
        if rs.max_multiplicity() > 1 {
            continue;
        }
        let alphas = rs.flat();
        let mut pts = Vec::new();
        for a in 0..alphas.len() {
            for b in a + 1..alphas.len() {
                let p = line_intersection(&tangent_line(alphas[a]), &tangent_line(alphas[b]))
                    .normalized();
                pts.push([p.z0, p.z1, p.z2]);
            }
        }
        by_t.push(pts);
    }
    Ok(SampleSet { by_t })
}

fn monomial_row_deg2(p: &[C64; 3]) -> [C64; 6] {
    let (z0, z1, z2) = (p[0], p[1], p[2]);
    [z0 * z0, z0 * z1, z0 * z2, z1 * z1, z1 * z2, z2 * z2]
}

fn conic_from_coeffs(v: &[C64]) -> HomPoly {
    let mut h = HomPoly::zero(2);
    *h.coeff_mut(2, 0) = v[0];
    *h.coeff_mut(1, 1) = v[1];
    *h.coeff_mut(1, 0) = v[2];
    *h.coeff_mut(0, 2) = v[3];
    *h.coeff_mut(0, 1) = v[4];
    *h.coeff_mut(0, 0) = v[5];
    h
}

fn fit_conic(points: &[[C64; 3]]) -> Option<HomPoly> {
    let mut m = DMatrix::from_element(points.len(), 6, ZERO);
    for (i, p) in points.iter().enumerate() {
        let row = monomial_row_deg2(p);
        for k in 0..6 {
            m[(i, k)] = row[k];
        }
    }
    let sv = linalg::singular_values(&m);
    // a unique conic needs exactly one small singular direction
    if sv[4] < 1e-6 * sv[0] {
        return None;
    }
    let ns = linalg::null_space(&m, 1).ok()?;
    let v = &ns[0];
    Some(conic_from_coeffs(&[v[0], v[1], v[2], v[3], v[4], v[5]]).normalized())
}

fn fit_line(p: &[C64; 3], q: &[C64; 3]) -> Option<HomPoly> {
    let l = [
        p[1] * q[2] - p[2] * q[1],
        p[2] * q[0] - p[0] * q[2],
        p[0] * q[1] - p[1] * q[0],
    ];
    let norm = (l[0].norm_sqr() + l[1].norm_sqr() + l[2].norm_sqr()).sqrt();
    if norm < 1e-10 {
        return None;
    }
    Some(HomPoly::linear(l[0], l[1], l[2]).normalized())
}

fn eval_at(h: &HomPoly, p: &[C64; 3]) -> f64 {
    h.eval(p[0], p[1], p[2]).norm()
}

fn count_inliers(h: &HomPoly, points: &[[C64; 3]], tol: f64) -> (usize, f64) {
    let mut count = 0;
    let mut worst = 0.0f64;
    for p in points {
        let r = eval_at(h, p);
        if r < tol {
            count += 1;
            worst = worst.max(r);
        }
    }
    (count, worst)
}

fn k_subsets(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut idx: Vec<usize> = (0..k).collect();
    let mut done = n < k;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let out = idx.clone();
        // advance
        let mut i = k;
        loop {
            if i == 0 {
                done = true;
                break;
            }
            i -= 1;
            if idx[i] < n - k + i {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    })
}

/// Detect conic/line components of the curve by exhaustive 5-point (2-point
/// for lines) fits with inlier counting. The expected shape is k conics for
/// n = 2k+1 and (k-1) conics plus one line for n = 2k.
pub fn decompose_curve(curve: &PDCurve, phi: &Poly, f: &Poly, tol: f64) -> Result<Decomposition> {
    decompose_with_samples(curve, phi, f, tol, DEFAULT_T_SAMPLES)
}

pub fn decompose_with_samples(
    curve: &PDCurve,
    phi: &Poly,
    f: &Poly,
    tol: f64,
    n_t: usize,
) -> Result<Decomposition> {
    let n = curve.n;
    if n < 2 {
        return Err(Error::InvalidInput("curve degree must be at least 1".into()));
    }
    let (want_conics, want_line) = if n % 2 == 1 {
        ((n - 1) / 2, false)
    } else {
        ((n - 2) / 2, true)
    };

    let samples = sample_curve(phi, f, n_t)?;
    let all = samples.all();
    if all.len() < 6 {
        return Err(Error::TooFewSamples { got: all.len(), need: 6 });
    }
    let pts_per_t = samples.by_t[0].len();
    let expected_conic_inliers = samples.by_t.len() * n;
    let expected_line_inliers = samples.by_t.len() * (n / 2);
    let inlier_tol = tol;

    let mut remaining: Vec<[C64; 3]> = all.clone();
    let mut components: Vec<Component> = Vec::new();
    let mut fit_residual = 0.0f64;
    let mut attempts = 0usize;

    // line first when expected: pairs drawn from the first few t-groups
    if want_line {
        let pool: Vec<[C64; 3]> = samples.by_t.iter().take(3).flatten().copied().collect();
        let mut found = false;
        'line: for sub in k_subsets(pool.len(), 2) {
            attempts += 1;
            if attempts > MAX_FIT_ATTEMPTS {
                break;
            }
            if let Some(l) = fit_line(&pool[sub[0]], &pool[sub[1]]) {
                let (inl, worst) = count_inliers(&l, &all, inlier_tol);
                if inl * 10 >= expected_line_inliers * 9 {
                    remaining.retain(|p| eval_at(&l, p) >= inlier_tol);
                    fit_residual = fit_residual.max(worst);
                    components.push(Component::Line(l));
                    found = true;
                    break 'line;
                }
            }
        }
        if !found {
            return Ok(Decomposition::NotDetected);
        }
    }

    // conics: 5-subsets from a single t-group when it is big enough,
    // otherwise from a pooled prefix of groups
    for _ in 0..want_conics {
        let pool: Vec<[C64; 3]> = if pts_per_t >= 5 {
            // points of the first t that are still unexplained
            let group = &samples.by_t[0];
            let live: Vec<[C64; 3]> = group
                .iter()
                .filter(|p| remaining.iter().any(|q| proj_close(p, q)))
                .copied()
                .collect();
            if live.len() >= 5 {
                live
            } else {
                remaining.clone()
            }
        } else {
            let mut pool = Vec::new();
            for group in &samples.by_t {
                for p in group {
                    if remaining.iter().any(|q| proj_close(&p, q)) {
                        pool.push(*p);
                    }
                }
                if pool.len() >= 12 {
                    break;
                }
            }
            pool
        };
        if pool.len() < 5 {
            return Ok(Decomposition::NotDetected);
        }
        let mut found = false;
        'conic: for sub in k_subsets(pool.len(), 5) {
            attempts += 1;
            if attempts > MAX_FIT_ATTEMPTS {
                break;
            }
            let five: Vec<[C64; 3]> = sub.iter().map(|&i| pool[i]).collect();
            if let Some(q) = fit_conic(&five) {
                let (inl, worst) = count_inliers(&q, &all, inlier_tol);
                if inl * 10 >= expected_conic_inliers * 9 {
                    remaining.retain(|p| eval_at(&q, p) >= inlier_tol);
                    fit_residual = fit_residual.max(worst);
                    components.push(Component::Conic(q));
                    found = true;
                    break 'conic;
                }
            }
        }
        if !found {
            return Ok(Decomposition::NotDetected);
        }
    }

    if !remaining.is_empty() {
        return Ok(Decomposition::NotDetected);
    }

    // components must multiply back to the curve
    let mut product = HomPoly::zero(0);
    *product.coeff_mut(0, 0) = cr(1.0);
    for comp in &components {
        product = product.mul(comp.form());
    }
    let product_residual = product.normalized().max_diff(&curve.tri.normalized());
    if product_residual > tol.max(1e-6) {
        return Ok(Decomposition::NotDetected);
    }
    Ok(Decomposition::Split { components, fit_residual, product_residual })
}

fn proj_close(p: &[C64; 3], q: &[C64; 3]) -> bool {
    (p[0] - q[0]).norm_sqr() + (p[1] - q[1]).norm_sqr() + (p[2] - q[2]).norm_sqr() < 1e-20
}

//! Isofocal and bifocal flows as closed-form state maps. The state is always
//! recomputed from the pencil (roots of Phi_t); the equations of motion and
//! the RK4 integrator exist as a cross-validation harness, not as the source
//! of truth.

use crate::error::{Error, Result};
use crate::linalg;
use crate::marden::sigma_matrix;
use crate::pdcurve::{critical_parameters, member_multiplicities};
use crate::poly::{cr, C64, Poly, ZERO};
use crate::roots;
use crate::symfunc::esym_velocity;
use nalgebra::DVector;

/// A pencil to flow along: phi monic of degree n, f of degree <= n-1 coprime
/// to phi, and optionally g (bifocal only).
#[derive(Debug, Clone)]
pub struct FlowSpec {
    pub phi: Poly,
    pub f: Poly,
    pub g: Option<Poly>,
}

impl FlowSpec {
    pub fn isofocal(phi: Poly, f: Poly) -> Result<Self> {
        Self::build(phi, f, None)
    }

    pub fn bifocal(phi: Poly, f: Poly, g: Poly) -> Result<Self> {
        Self::build(phi, f, Some(g))
    }

    fn build(phi: Poly, f: Poly, g: Option<Poly>) -> Result<Self> {
        let n = phi.degree().ok_or(Error::ZeroPolynomial)?;
        if n < 1 {
            return Err(Error::DegeneratePencil("phi must have degree >= 1".into()));
        }
        if f.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if f.degree().unwrap() >= n {
            return Err(Error::DegeneratePencil("deg f must be < deg phi".into()));
        }
        if let Some(g) = &g {
            if !g.is_zero() && g.degree().unwrap() >= n {
                return Err(Error::DegeneratePencil("deg g must be < deg phi".into()));
            }
        }
        let phi = phi.monic()?;
        let (_, d) = crate::gcd::poly_gcd(&phi, &f, 1e-10)?;
        if d > 0 {
            return Err(Error::BasePoint { degree: d });
        }
        Ok(FlowSpec { phi, f, g })
    }

    pub fn n(&self) -> usize {
        self.phi.degree().unwrap()
    }

    pub fn member(&self, t: C64) -> Poly {
        self.phi.add_scaled(&self.f, t)
    }

    /// Numerator of the flowing rational function at time t.
    pub fn numerator(&self, t: C64) -> Poly {
        match &self.g {
            Some(g) => self.f.add_scaled(g, t),
            None => self.f.clone(),
        }
    }
}

/// Positions and masses at one flow parameter. At a collision moment the
/// masses genuinely blow up; they are omitted and the flag is set.
#[derive(Debug, Clone)]
pub struct FlowState {
    pub t: C64,
    pub positions: Vec<C64>,
    pub masses: Option<Vec<C64>>,
    pub collided: bool,
    /// zeros of the numerator: fixed for isofocal flows, moving for bifocal
    pub foci: Vec<C64>,
}

impl FlowState {
    /// Bracket values B_i recomputed from this state.
    pub fn brackets(&self) -> Option<Vec<C64>> {
        let masses = self.masses.as_ref()?;
        let table = crate::symfunc::sym_table(&self.positions);
        let n = self.positions.len();
        Some((1..=n).map(|i| table.bracket(masses, n - i)).collect())
    }

    pub fn mass_sum(&self) -> Option<C64> {
        self.masses.as_ref().map(|m| m.iter().sum())
    }
}

fn collision_radius(scale: f64) -> f64 {
    1e-7 * scale
}

fn state_at(spec: &FlowSpec, t: C64) -> Result<FlowState> {
    let member = spec.member(t);
    let raw = roots::roots_raw(&member)?;
    let scale = 1.0 + raw.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let mut collided = false;
    'outer: for i in 0..raw.len() {
        for j in i + 1..raw.len() {
            if (raw[i] - raw[j]).norm() < collision_radius(scale) {
                collided = true;
                break 'outer;
            }
        }
    }
    let numerator = spec.numerator(t);
    let foci = if numerator.degree().unwrap_or(0) >= 1 {
        roots::roots(&numerator, 1e-10)?.flat()
    } else {
        vec![]
    };
    let mut positions = raw;
    positions.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
    let masses = if collided {
        None
    } else {
        let dmember = member.derivative();
        Some(positions.iter().map(|&a| numerator.eval(a) / dmember.eval(a)).collect())
    };
    Ok(FlowState { t, positions, masses, collided, foci })
}

/// State of the isofocal flow: positions are the roots of phi + t f, masses
/// the partial-fraction residues of f over the member.
pub fn isofocal_state(spec: &FlowSpec, t: C64) -> Result<FlowState> {
    if spec.g.is_some() {
        return Err(Error::InvalidInput("spec has g: use bifocal_state".into()));
    }
    state_at(spec, t)
}

/// State of the bifocal flow: same positions, masses are residues of f + tg,
/// foci move as zeros of f + tg.
pub fn bifocal_state(spec: &FlowSpec, t: C64) -> Result<FlowState> {
    if spec.g.is_none() {
        return Err(Error::InvalidInput("spec has no g: use isofocal_state".into()));
    }
    state_at(spec, t)
}

/// A collision moment with the clusters of indices that collide there.
#[derive(Debug, Clone)]
pub struct CollisionEvent {
    pub t_star: C64,
    pub colliding: Vec<Vec<usize>>,
    pub multiplicity: usize,
}

impl CollisionEvent {
    pub fn simple(&self) -> bool {
        self.multiplicity == 2
    }
}

/// All collision moments: roots of the discriminant in t, with multiplicity
/// structure read off the member at each moment.
pub fn collisions(spec: &FlowSpec) -> Result<Vec<CollisionEvent>> {
    let criticals = critical_parameters(&spec.phi, &spec.f)?;
    let mut out = Vec::new();
    for (t, _) in criticals {
        let clusters = member_multiplicities(&spec.phi, &spec.f, t)?;
        let member = spec.member(t);
        let raw = roots::roots_raw(&member)?;
        let mut sorted_idx: Vec<usize> = (0..raw.len()).collect();
        sorted_idx.sort_by(|&a, &b| {
            (raw[a].re, raw[a].im).partial_cmp(&(raw[b].re, raw[b].im)).unwrap()
        });
        let scale = 1.0 + raw.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let mut colliding = Vec::new();
        let mut multiplicity = 1;
        for (center, m) in clusters {
            if m >= 2 {
                let members: Vec<usize> = sorted_idx
                    .iter()
                    .copied()
                    .filter(|&i| (raw[i] - center).norm() < crate::pdcurve::multiplicity_radius(scale) * 1.5)
                    .collect();
                multiplicity = multiplicity.max(m);
                colliding.push(members);
            }
        }
        out.push(CollisionEvent { t_star: t, colliding, multiplicity });
    }
    Ok(out)
}

/// The vector field (alpha_dot, m_dot) at a state. Positions move with
/// alpha_dot_i = -f(alpha_i)/Phi_t'(alpha_i) (the derived form); masses with
/// m_dot = a(alpha)^{-1} (C - a_dot(alpha) m), where C = dB/dt vanishes for
/// isofocal flows and is the bracket velocity of f + t g for bifocal ones.
pub fn eom_field(state: &FlowState, spec: &FlowSpec) -> Result<(Vec<C64>, Vec<C64>)> {
    let masses = state
        .masses
        .as_ref()
        .ok_or(Error::CollisionEncountered { t_re: state.t.re, t_im: state.t.im })?;
    let n = spec.n();
    let member = spec.member(state.t);
    let dmember = member.derivative();
    let alpha_dot: Vec<C64> = state
        .positions
        .iter()
        .map(|&a| -spec.f.eval(a) / dmember.eval(a))
        .collect();

    // a_dot(alpha): entry (i, k) is d/dt sigma_i^k = sum_{l != k} v_l
    // e_{i-1}(alpha without k, l)
    let mut a_dot = nalgebra::DMatrix::from_element(n, n, ZERO);
    for k in 0..n {
        let rest: Vec<C64> = state
            .positions
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != k)
            .map(|(_, &v)| v)
            .collect();
        let rest_vel: Vec<C64> = alpha_dot
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != k)
            .map(|(_, &v)| v)
            .collect();
        let de = esym_velocity(&rest, &rest_vel);
        for i in 1..n {
            a_dot[(i, k)] = de[i - 1];
        }
    }

    // C vector in the row ordering of a(alpha): row i pairs with B_{n-i};
    // B_i(t) binds to the coefficient of z^{i-1} in f + t g via
    // coef = (-1)^{n-i} B_i, so dB_i/dt = (-1)^{n-i} g_{i-1}.
    let mut c_vec = DVector::from_element(n, ZERO);
    if let Some(g) = &spec.g {
        for row in 0..n {
            let i = n - row; // bracket index B_i
            let sign = if (n - i) % 2 == 0 { cr(1.0) } else { cr(-1.0) };
            c_vec[row] = sign * g.coeff(i - 1);
        }
    }

    let a_mat = sigma_matrix(&state.positions);
    let m_vec = DVector::from_fn(n, |i, _| masses[i]);
    let rhs = c_vec - &a_dot * m_vec;
    let m_dot = linalg::solve(&a_mat, &rhs, 1e-12)?;
    Ok((alpha_dot, m_dot.iter().copied().collect()))
}

/// The literal matrix form a(alpha)^{-1} B of the position equations. Kept
/// for comparison: it evaluates to +m, the negative of the derived field.
pub fn eom_alpha_literal(state: &FlowState, spec: &FlowSpec) -> Result<Vec<C64>> {
    let n = spec.n();
    let table = crate::symfunc::sym_table(&state.positions);
    let _ = &table;
    let a_mat = sigma_matrix(&state.positions);
    // bracket vector of f in row ordering (row i pairs with B_{n-i})
    let mut b_vec = DVector::from_element(n, ZERO);
    for row in 0..n {
        let i = n - row;
        let sign = if (n - i) % 2 == 0 { cr(1.0) } else { cr(-1.0) };
        b_vec[row] = sign * spec.f.coeff(i - 1);
    }
    let sol = linalg::solve(&a_mat, &b_vec, 1e-12)?;
    Ok(sol.iter().copied().collect())
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub states: Vec<FlowState>,
}

/// Classical fourth-order integration of the vector field, halting at
/// collisions. A validation harness for the closed-form map.
pub fn integrate(spec: &FlowSpec, t0: f64, t1: f64, steps: usize) -> Result<Trajectory> {
    if steps == 0 || t1 == t0 {
        let s = state_at(spec, cr(t0))?;
        return Ok(Trajectory { states: vec![s] });
    }
    let n = spec.n();
    let init = state_at(spec, cr(t0))?;
    if init.collided {
        return Err(Error::CollisionEncountered { t_re: t0, t_im: 0.0 });
    }
    // the masses have poles at real collision moments; a fixed-step scheme
    // would march straight across them, so halt at the event instead
    let real_criticals: Vec<f64> = critical_parameters(&spec.phi, &spec.f)?
        .into_iter()
        .filter(|(t, _)| t.im.abs() < 1e-9 * (1.0 + t.norm()))
        .map(|(t, _)| t.re)
        .collect();
    let mut pos = init.positions.clone();
    let mut mas = init.masses.clone().unwrap();
    let mut states = vec![init];
    let h = (t1 - t0) / steps as f64;

    let field = |t: f64, pos: &[C64], mas: &[C64]| -> Result<(Vec<C64>, Vec<C64>)> {
        let state = FlowState {
            t: cr(t),
            positions: pos.to_vec(),
            masses: Some(mas.to_vec()),
            collided: false,
            foci: vec![],
        };
        eom_field(&state, spec)
    };

    for step in 0..steps {
        let t = t0 + h * step as f64;
        let t_next = t0 + h * (step + 1) as f64;
        if let Some(&tc) = real_criticals.iter().find(|&&tc| {
            let (lo, hi) = if h > 0.0 { (t, t_next) } else { (t_next, t) };
            tc >= lo - h.abs() * 0.5 && tc <= hi + h.abs() * 0.5
        }) {
            return Err(Error::CollisionEncountered { t_re: tc, t_im: 0.0 });
        }
        let scale = 1.0 + pos.iter().map(|z| z.norm()).fold(0.0, f64::max);
        for i in 0..n {
            for j in i + 1..n {
                if (pos[i] - pos[j]).norm() < 10.0 * collision_radius(scale) {
                    return Err(Error::CollisionEncountered { t_re: t, t_im: 0.0 });
                }
            }
        }
        let (k1p, k1m) = field(t, &pos, &mas)?;
        let add = |p: &[C64], d: &[C64], s: f64| -> Vec<C64> {
            p.iter().zip(d).map(|(&a, &b)| a + b * cr(s)).collect()
        };
        let (k2p, k2m) = field(t + h / 2.0, &add(&pos, &k1p, h / 2.0), &add(&mas, &k1m, h / 2.0))?;
        let (k3p, k3m) = field(t + h / 2.0, &add(&pos, &k2p, h / 2.0), &add(&mas, &k2m, h / 2.0))?;
        let (k4p, k4m) = field(t + h, &add(&pos, &k3p, h), &add(&mas, &k3m, h))?;
        for i in 0..n {
            pos[i] += cr(h / 6.0) * (k1p[i] + cr(2.0) * (k2p[i] + k3p[i]) + k4p[i]);
            mas[i] += cr(h / 6.0) * (k1m[i] + cr(2.0) * (k2m[i] + k3m[i]) + k4m[i]);
        }
        let t_next = t0 + h * (step + 1) as f64;
        states.push(FlowState {
            t: cr(t_next),
            positions: pos.clone(),
            masses: Some(mas.clone()),
            collided: false,
            foci: vec![],
        });
    }
    Ok(Trajectory { states })
}

/// Match two unlabeled position lists by greedy nearest pairing; returns the
/// permutation sending `from` indices to `to` indices.
pub fn match_positions(from: &[C64], to: &[C64]) -> Vec<usize> {
    let n = from.len();
    let mut pairs: Vec<(f64, usize, usize)> = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            pairs.push(((from[i] - to[j]).norm(), i, j));
        }
    }
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let mut used_i = vec![false; n];
    let mut used_j = vec![false; n];
    let mut perm = vec![0usize; n];
    for (_, i, j) in pairs {
        if !used_i[i] && !used_j[j] {
            used_i[i] = true;
            used_j[j] = true;
            perm[i] = j;
        }
    }
    perm
}

/// Positivity analysis of a real flow range: the maximal subintervals where
/// all masses are real and positive.
#[derive(Debug, Clone)]
pub struct PositivityReport {
    pub intervals: Vec<(f64, f64)>,
    /// some sampled state had masses off the real axis (the weights stop
    /// being comparable there; such points never count as positive)
    pub nonreal_masses_encountered: bool,
    /// some sampled state sat at a collision
    pub collisions_encountered: bool,
}

/// Maximal subintervals of [t0, t1] where all masses are real and positive;
/// endpoints refined to 1e-9 by bisection. Between collisions no mass can
/// cross zero (the foci are fixed and coprime to the pencil), so breaks
/// happen at real collision moments, where the colliding pair leaves the
/// real axis; non-real stretches are reported, never silently dropped.
pub fn positivity_intervals(
    spec: &FlowSpec,
    t0: f64,
    t1: f64,
    grid: usize,
) -> Result<PositivityReport> {
    if grid < 2 || t1 <= t0 {
        return Err(Error::InvalidInput("need t1 > t0 and grid >= 2".into()));
    }
    #[derive(Clone, Copy, PartialEq)]
    enum Sample {
        Positive,
        NotPositive,
        NonReal,
        Collided,
    }
    let classify = |t: f64| -> Result<Sample> {
        let s = state_at(spec, cr(t))?;
        if s.collided {
            return Ok(Sample::Collided);
        }
        let masses = s.masses.unwrap();
        let mut all_positive = true;
        for m in &masses {
            if m.im.abs() > 1e-7 * (1.0 + m.norm()) {
                return Ok(Sample::NonReal);
            }
            if m.re <= 0.0 {
                all_positive = false;
            }
        }
        Ok(if all_positive { Sample::Positive } else { Sample::NotPositive })
    };
    let h = (t1 - t0) / grid as f64;
    let samples: Vec<(f64, Sample)> = (0..=grid)
        .map(|i| {
            let t = t0 + h * i as f64;
            classify(t).map(|v| (t, v))
        })
        .collect::<Result<_>>()?;

    let refine = |mut lo: f64, mut hi: f64| -> Result<f64> {
        let lo_pos = classify(lo)? == Sample::Positive;
        for _ in 0..60 {
            if hi - lo < 1e-10 {
                break;
            }
            let mid = 0.5 * (lo + hi);
            if (classify(mid)? == Sample::Positive) == lo_pos {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    };

    let mut intervals: Vec<(f64, f64)> = Vec::new();
    let mut current_start: Option<f64> = None;
    let mut nonreal = false;
    let mut collided = false;
    for w in 0..samples.len() {
        let (t, v) = samples[w];
        nonreal |= v == Sample::NonReal;
        collided |= v == Sample::Collided;
        let pos = v == Sample::Positive;
        match (current_start, pos) {
            (None, true) => {
                let start = if w == 0 { t } else { refine(samples[w - 1].0, t)? };
                current_start = Some(start);
            }
            (Some(start), false) => {
                let end = refine(samples[w - 1].0, t)?;
                intervals.push((start, end));
                current_start = None;
            }
            _ => {}
        }
    }
    if let Some(start) = current_start {
        intervals.push((start, t1));
    }
    Ok(PositivityReport {
        intervals,
        nonreal_masses_encountered: nonreal,
        collisions_encountered: collided,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{c, ONE, ZERO};

    fn quad_spec() -> FlowSpec {
        FlowSpec::isofocal(Poly::from_real(&[-1.0, 0.0, 1.0]), Poly::x()).unwrap()
    }

    #[test]
    fn quadratic_residues() {
        let s = isofocal_state(&quad_spec(), ZERO).unwrap();
        let m = s.masses.unwrap();
        assert!((m[0] - cr(0.5)).norm() < 1e-12);
        assert!((m[1] - cr(0.5)).norm() < 1e-12);
        // mass conservation along real t
        for &t in &[0.4, -1.3, 2.7] {
            let s = isofocal_state(&quad_spec(), cr(t)).unwrap();
            assert!((s.mass_sum().unwrap() - ONE).norm() < 1e-11);
        }
    }

    #[test]
    fn collision_flagged_at_2i() {
        let s = isofocal_state(&quad_spec(), c(0.0, 2.0)).unwrap();
        assert!(s.collided);
        assert!(s.masses.is_none());
    }

    #[test]
    fn collision_moments_of_examples() {
        let ev = collisions(&quad_spec()).unwrap();
        assert_eq!(ev.len(), 2);
        assert!(ev.iter().all(|e| e.simple()));
        assert!(ev.iter().any(|e| (e.t_star - c(0.0, 2.0)).norm() < 1e-8));
        assert!(ev.iter().any(|e| (e.t_star - c(0.0, -2.0)).norm() < 1e-8));

        let spec = FlowSpec::isofocal(
            Poly::from_real(&[0.0, -1.0, 0.0, 1.0]),
            Poly::from_real(&[-1.0, 0.0, 3.0]),
        )
        .unwrap();
        let ev = collisions(&spec).unwrap();
        assert_eq!(ev.len(), 4);
        assert!(ev.iter().all(|e| e.simple()));

        // z^3 + t: triple root at t = 0, not simple
        let spec = FlowSpec::isofocal(Poly::from_real(&[0.0, 0.0, 0.0, 1.0]), Poly::one()).unwrap();
        let ev = collisions(&spec).unwrap();
        assert_eq!(ev.len(), 1);
        assert_eq!(ev[0].multiplicity, 3);
        assert!(!ev[0].simple());
    }

    #[test]
    fn n_one_closed_form() {
        // alpha = 5, m = 2: alpha(t) = 5 - 2t
        let spec = FlowSpec::isofocal(Poly::from_real(&[-5.0, 1.0]), Poly::constant(cr(2.0))).unwrap();
        let s = isofocal_state(&spec, ZERO).unwrap();
        let (adot, _) = eom_field(&s, &spec).unwrap();
        assert!((adot[0] + cr(2.0)).norm() < 1e-12);
        let s2 = isofocal_state(&spec, cr(0.25)).unwrap();
        assert!((s2.positions[0] - cr(4.5)).norm() < 1e-12);
    }

    #[test]
    fn quadratic_alpha_dot() {
        // alpha(t) = (-t +- sqrt(t^2+4))/2: at t = 0, alpha_dot = -1/2 each
        let s = isofocal_state(&quad_spec(), ZERO).unwrap();
        let (adot, mdot) = eom_field(&s, &quad_spec()).unwrap();
        assert!((adot[0] + cr(0.5)).norm() < 1e-11);
        assert!((adot[1] + cr(0.5)).norm() < 1e-11);
        // mass-sum derivative vanishes
        let sum: C64 = mdot.iter().sum();
        assert!(sum.norm() < 1e-10);
    }

    #[test]
    fn literal_matrix_form_is_negated_derived_form() {
        let s = isofocal_state(&quad_spec(), ZERO).unwrap();
        let (adot, _) = eom_field(&s, &quad_spec()).unwrap();
        let lit = eom_alpha_literal(&s, &quad_spec()).unwrap();
        for (a, b) in adot.iter().zip(&lit) {
            assert!((a + b).norm() < 1e-11, "literal form should be -derived");
        }
    }

    #[test]
    fn bifocal_reduces_to_isofocal_at_zero_and_moves_focus() {
        let spec = FlowSpec::bifocal(Poly::from_real(&[-1.0, 0.0, 1.0]), Poly::x(), Poly::one()).unwrap();
        let s0 = bifocal_state(&spec, ZERO).unwrap();
        let iso = isofocal_state(&quad_spec(), ZERO).unwrap();
        for (a, b) in s0.masses.as_ref().unwrap().iter().zip(iso.masses.as_ref().unwrap()) {
            assert!((a - b).norm() < 1e-12);
        }
        // focus of f + t g = z + t sits at -t
        for &t in &[0.3, -0.9] {
            let s = bifocal_state(&spec, cr(t)).unwrap();
            assert_eq!(s.foci.len(), 1);
            assert!((s.foci[0] + cr(t)).norm() < 1e-10);
            // mass sum equals leading coefficient of f + t g (here 1)
            assert!((s.mass_sum().unwrap() - ONE).norm() < 1e-10);
        }
    }

    #[test]
    fn rk4_matches_closed_form() {
        let spec = quad_spec();
        let traj = integrate(&spec, 0.0, 0.5, 200).unwrap();
        let last = traj.states.last().unwrap();
        let closed = isofocal_state(&spec, cr(0.5)).unwrap();
        let perm = match_positions(&last.positions, &closed.positions);
        for (i, &j) in perm.iter().enumerate() {
            assert!((last.positions[i] - closed.positions[j]).norm() < 1e-7);
            let lm = last.masses.as_ref().unwrap()[i];
            let cm = closed.masses.as_ref().unwrap()[j];
            assert!((lm - cm).norm() < 1e-7);
        }
        // zero-length interval returns the initial state
        let traj = integrate(&spec, 0.3, 0.3, 10).unwrap();
        assert_eq!(traj.states.len(), 1);
    }

    #[test]
    fn eom_matches_finite_differences() {
        let spec = FlowSpec::isofocal(
            Poly::from_real(&[0.3, -1.2, 0.1, 1.0]),
            Poly::from_real(&[0.4, -0.8, 1.5]),
        )
        .unwrap();
        let t = 0.2;
        let h = 1e-6;
        let s = isofocal_state(&spec, cr(t)).unwrap();
        let sp = isofocal_state(&spec, cr(t + h)).unwrap();
        let sm = isofocal_state(&spec, cr(t - h)).unwrap();
        let (adot, mdot) = eom_field(&s, &spec).unwrap();
        let perm_p = match_positions(&s.positions, &sp.positions);
        let perm_m = match_positions(&s.positions, &sm.positions);
        for i in 0..spec.n() {
            let fd_a = (sp.positions[perm_p[i]] - sm.positions[perm_m[i]]) / cr(2.0 * h);
            assert!((fd_a - adot[i]).norm() < 1e-5, "alpha_dot mismatch at {i}");
            let fd_m = (sp.masses.as_ref().unwrap()[perm_p[i]]
                - sm.masses.as_ref().unwrap()[perm_m[i]])
                / cr(2.0 * h);
            assert!((fd_m - mdot[i]).norm() < 1e-5, "m_dot mismatch at {i}");
        }
    }

    #[test]
    fn positivity_full_range_for_quadratic() {
        let rep = positivity_intervals(&quad_spec(), -10.0, 10.0, 200).unwrap();
        assert_eq!(rep.intervals.len(), 1);
        assert!((rep.intervals[0].0 + 10.0).abs() < 1e-12);
        assert!((rep.intervals[0].1 - 10.0).abs() < 1e-12);
        assert!(!rep.nonreal_masses_encountered);
    }

    #[test]
    fn positivity_is_all_or_nothing_for_isofocal_real_data() {
        // between real collisions no mass can cross zero, and a pair
        // emerging from a real collision carries opposite signs, so real
        // isofocal data is either positive on the whole sampled range or
        // not positive anywhere on it
        let spec = FlowSpec::isofocal(
            Poly::from_real(&[0.0, -1.0, 0.0, 1.0]),
            Poly::from_real(&[-1.0, 0.0, 3.0]),
        )
        .unwrap();
        let rep = positivity_intervals(&spec, -1.0, 1.0, 400).unwrap();
        let full = rep.intervals.len() == 1
            && (rep.intervals[0].0 + 1.0).abs() < 1e-9
            && (rep.intervals[0].1 - 1.0).abs() < 1e-9;
        assert!(full || rep.intervals.is_empty());

        // mixed signs: never positive
        let config = crate::marden::MassedConfig::new(
            vec![cr(-1.0), cr(0.2), cr(1.1)],
            vec![ONE, cr(-0.7), ONE],
        )
        .unwrap();
        let pencil = crate::marden::build_pencil(&config).unwrap();
        let spec = FlowSpec::isofocal(pencil.phi, pencil.f).unwrap();
        let rep = positivity_intervals(&spec, -1.5, 1.5, 300).unwrap();
        assert!(rep.intervals.is_empty());
    }

    #[test]
    fn bifocal_positivity_has_interior_endpoints() {
        // moving foci let masses cross zero: the flow enters and leaves the
        // all-positive region at interior parameters
        let config = crate::marden::MassedConfig::new(
            vec![cr(-1.0), cr(0.3), cr(1.2)],
            vec![cr(0.8), cr(0.9), cr(1.1)],
        )
        .unwrap();
        let pencil = crate::marden::build_pencil(&config).unwrap();
        let g = Poly::from_real(&[0.6, -0.9, 0.4]);
        let spec = FlowSpec::bifocal(pencil.phi, pencil.f, g).unwrap();
        let rep = positivity_intervals(&spec, -2.0, 2.0, 400).unwrap();
        assert!(!rep.intervals.is_empty());
        let interior = rep
            .intervals
            .iter()
            .flat_map(|(a, b)| [*a, *b])
            .filter(|e| (e + 2.0).abs() > 1e-6 && (e - 2.0).abs() > 1e-6)
            .count();
        assert!(interior >= 1, "expected a mass zero-crossing inside the range");
    }

    #[test]
    fn flow_composition_is_translation() {
        let spec = FlowSpec::isofocal(
            Poly::from_real(&[0.3, -1.2, 0.1, 1.0]),
            Poly::from_real(&[0.4, -0.8, 1.5]),
        )
        .unwrap();
        let (s, t) = (0.4, 0.35);
        let direct = isofocal_state(&spec, cr(s + t)).unwrap();
        let shifted = FlowSpec::isofocal(spec.member(cr(s)), spec.f.clone()).unwrap();
        let composed = isofocal_state(&shifted, cr(t)).unwrap();
        let perm = match_positions(&direct.positions, &composed.positions);
        for (i, &j) in perm.iter().enumerate() {
            assert!((direct.positions[i] - composed.positions[j]).norm() < 1e-9);
        }
    }

}

//! Acceptance suite: one test per criterion, each printing a pass/fail line.
//! Everything runs at desk scale from fixed seeds.
//!
//! Criterion 6's family clause is known-red: the closed-form n = 5 family pencil
//! does not satisfy the four-parameter square-shape conditions (its
//! Wronskian bookkeeping forbids them), so the test states the expectation
//! faithfully and fails. The companion positive control (6c) shows the same
//! chain succeeding on a pencil built from a genuine degree-5 elliptic
//! transformation.

use pondar::arith::arith_functions;
use pondar::decompcheck::{criterion, sufficiency_class, verify_certificate, Sufficiency};
use pondar::decompose::{decompose_curve, Component, Decomposition};
use pondar::dynamics::{
    eom_field, integrate, isofocal_state, match_positions, positivity_intervals, FlowSpec,
};
use pondar::elliptic::{agm_k, jacobi_sn, transform_odd};
use pondar::families::{family, FamilyParams};
use pondar::flaschka::{from_flaschka, to_flaschka, FlaschkaCoords};
use pondar::marden::{build_pencil, steiner_oracle, MassedConfig};
use pondar::pdcurve::{critical_parameters, line_intersection, pd_curve, pd_matrix, tangent_line};
use pondar::poly::{c, cr, C64, Poly, ONE};
use pondar::roots::roots;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn report(id: &str, name: &str, pass: bool, detail: &str) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    println!("acceptance {id} {name}: {verdict} ({detail})");
}

fn rand_complex(rng: &mut ChaCha8Rng, radius: f64) -> C64 {
    c(rng.gen_range(-radius..radius), rng.gen_range(-radius..radius))
}

fn random_config(rng: &mut ChaCha8Rng, n: usize) -> MassedConfig {
    loop {
        let positions: Vec<C64> = (0..n).map(|_| rand_complex(rng, 1.5)).collect();
        let separated = (0..n)
            .all(|i| (0..i).all(|j| (positions[i] - positions[j]).norm() > 0.25));
        if !separated {
            continue;
        }
        let masses: Vec<C64> = (0..n)
            .map(|_| {
                let m = rand_complex(rng, 1.0);
                m + c(0.4 * m.re.signum() + 0.2, 0.0)
            })
            .collect();
        if masses.iter().any(|m| m.norm() < 0.2) {
            continue;
        }
        if let Ok(cfg) = MassedConfig::new(positions, masses) {
            return cfg;
        }
    }
}

fn random_pencil(rng: &mut ChaCha8Rng, n: usize) -> (Poly, Poly) {
    loop {
        let mut phi_c: Vec<C64> = (0..n).map(|_| rand_complex(rng, 1.0)).collect();
        phi_c.push(ONE);
        let phi = Poly::new(phi_c);
        let f = Poly::new((0..n).map(|_| rand_complex(rng, 1.0)).collect());
        if f.degree() != Some(n - 1) {
            continue;
        }
        if !matches!(pondar::gcd::poly_gcd(&phi, &f, 1e-10), Ok((_, 0))) {
            continue;
        }
        return (phi, f);
    }
}

#[test]
fn acceptance_01_conservation() {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut worst = 0.0f64;
    let mut samples = 0;
    for trial in 0..100 {
        let n = 2 + trial % 7; // 2..=8
        let config = random_config(&mut rng, n);
        let pencil = build_pencil(&config).unwrap();
        let spec = FlowSpec::isofocal(pencil.phi.clone(), pencil.f.clone()).unwrap();
        let mut taken = 0;
        let mut step = 0;
        while taken < 20 && step < 200 {
            step += 1;
            let t = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let state = isofocal_state(&spec, t).unwrap();
            if state.collided {
                continue;
            }
            let brackets = state.brackets().unwrap();
            for (got, want) in brackets.iter().zip(&pencil.b) {
                let rel = (got - want).norm() / (1.0 + want.norm());
                worst = worst.max(rel);
            }
            taken += 1;
            samples += 1;
        }
        assert_eq!(taken, 20, "could not find 20 collision-free samples");
    }
    let pass = worst < 1e-9;
    report("01", "conservation of first integrals", pass, &format!("{samples} samples, worst rel err {worst:.3e}"));
    assert!(pass);
}

#[test]
fn acceptance_02_flaschka_roundtrip() {
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let mut worst_coords = 0.0f64;
    for trial in 0..100 {
        let n = 1usize + trial % 8;
        let coords = FlaschkaCoords {
            a_sq: (0..n.saturating_sub(1))
                .map(|_| rand_complex(&mut rng, 1.0) + c(1.2, 0.0))
                .collect(),
            b: (0..n).map(|_| rand_complex(&mut rng, 1.0)).collect(),
            scale: rand_complex(&mut rng, 1.0) + c(2.0, 0.0),
        };
        let (f, phi) = from_flaschka(&coords);
        let back = to_flaschka(&f, &phi).unwrap();
        for (x, y) in back.a_sq.iter().zip(&coords.a_sq) {
            worst_coords = worst_coords.max((x - y).norm());
        }
        for (x, y) in back.b.iter().zip(&coords.b) {
            worst_coords = worst_coords.max((x - y).norm());
        }
        worst_coords = worst_coords.max((back.scale - coords.scale).norm());
    }
    let mut worst_pencil = 0.0f64;
    for trial in 0..100 {
        let n = 2 + trial % 7;
        let (phi, f) = random_pencil(&mut rng, n);
        let coords = match to_flaschka(&f, &phi) {
            Ok(c) => c,
            Err(_) => continue, // split chains are legitimately rejected
        };
        let (f2, phi2) = from_flaschka(&coords);
        worst_pencil = worst_pencil.max(f2.max_diff(&f)).max(phi2.max_diff(&phi));
    }
    let pass = worst_coords < 1e-10 && worst_pencil < 1e-10;
    report(
        "02",
        "continued-fraction roundtrip",
        pass,
        &format!("coords err {worst_coords:.3e}, pencil err {worst_pencil:.3e}"),
    );
    assert!(pass);
}

#[test]
fn acceptance_03_trivialization() {
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    let mut worst = 0.0f64;
    for trial in 0..50 {
        let n = 2 + trial % 7;
        let (phi, f) = random_pencil(&mut rng, n);
        let base = match to_flaschka(&f, &phi) {
            Ok(c) => c,
            Err(_) => continue,
        };
        for &t in &[0.1, -0.1, 1.0, -1.0] {
            let moved_phi = phi.add_scaled(&f, cr(t));
            let moved = match to_flaschka(&f, &moved_phi) {
                Ok(c) => c,
                Err(_) => continue,
            };
            for (x, y) in moved.a_sq.iter().zip(&base.a_sq) {
                worst = worst.max((x - y).norm());
            }
            for i in 0..n - 1 {
                worst = worst.max((moved.b[i] - base.b[i]).norm());
            }
            let shift = moved.b[n - 1] - base.b[n - 1];
            worst = worst.max((shift + base.scale * cr(t)).norm());
        }
    }
    let pass = worst < 1e-9;
    report("03", "flow trivializes to a b_n shift", pass, &format!("worst err {worst:.3e}"));
    assert!(pass);
}

#[test]
fn acceptance_04_siebeck_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    let mut worst_foci = 0.0f64;
    let mut worst_tangency = 0.0f64;
    let mut done = 0;
    while done < 100 {
        let a = rand_complex(&mut rng, 2.0);
        let b = rand_complex(&mut rng, 2.0);
        let cc = rand_complex(&mut rng, 2.0);
        let area = ((b - a) * (cc - a).conj()).im.abs();
        let scale = (b - a).norm().max((cc - a).norm());
        if area < 0.25 * scale * scale || scale < 0.3 {
            continue;
        }
        let s = steiner_oracle(&[a, b, cc]).unwrap();
        let p = Poly::from_roots(&[a, b, cc]);
        let rs = roots(&p.derivative(), 1e-12).unwrap();
        let mut want = rs.flat();
        want.sort_by(|x, y| (x.re, x.im).partial_cmp(&(y.re, y.im)).unwrap());
        worst_foci = worst_foci.max((s.foci.0 - want[0]).norm()).max((s.foci.1 - want[1]).norm());
        // all three midpoint tangencies: the midpoint lies on the conic and
        // its polar is the side line
        let conic = pondar::conic::Conic::from_coefficients(&s.conic);
        let sides = [(a, b), (b, cc), (cc, a)];
        for (i, &tp) in s.tangency_points.iter().enumerate() {
            let v = conic.eval_z(tp).norm() / (1.0 + tp.norm_sqr());
            worst_tangency = worst_tangency.max(v);
            let (p1, p2) = sides[i];
            let line = pondar::conic::line_through(&pondar::conic::embed(p1), &pondar::conic::embed(p2));
            let polar = conic.polar(&pondar::conic::embed(tp));
            let cross = pondar::conic::cross(&polar, &line);
            worst_tangency = worst_tangency.max(cross.norm() / (polar.norm() * line.norm()));
        }
        done += 1;
    }
    let pass = worst_foci < 1e-9 && worst_tangency < 1e-8;
    report(
        "04",
        "inscribed-conic foci are critical points",
        pass,
        &format!("foci err {worst_foci:.3e}, tangency err {worst_tangency:.3e}"),
    );
    assert!(pass);
}

#[test]
fn acceptance_05_pd_incidence() {
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    let mut worst_incidence = 0.0f64;
    let mut worst_prop = 0.0f64;
    for trial in 0..50 {
        let n = 2 + trial % 5; // 2..=6
        let (phi, f) = random_pencil(&mut rng, n);
        let curve = match pd_curve(&phi, &f) {
            Ok(c) => c,
            Err(_) => continue,
        };
        let det = pd_matrix(&phi, &f).unwrap();
        worst_prop = worst_prop.max(det.normalized().max_diff(&curve.tri.normalized()));
        let mut taken = 0;
        let mut attempts = 0;
        while taken < 10 && attempts < 50 {
            attempts += 1;
            let t = rand_complex(&mut rng, 1.2);
            let member = phi.add_scaled(&f, t);
            let rs = match roots(&member, 1e-10) {
                Ok(r) => r,
                Err(_) => continue,
            };
            if rs.max_multiplicity() > 1 {
                continue;
            }
            let alphas = rs.flat();
            for i in 0..alphas.len() {
                for j in i + 1..alphas.len() {
                    let p = line_intersection(&tangent_line(alphas[i]), &tangent_line(alphas[j]));
                    worst_incidence = worst_incidence.max(curve.residual(&p));
                }
            }
            taken += 1;
        }
    }
    let pass = worst_incidence < 1e-8 && worst_prop < 1e-9;
    report(
        "05",
        "tangent-grid incidence and annihilator proportionality",
        pass,
        &format!("incidence {worst_incidence:.3e}, proportionality {worst_prop:.3e}"),
    );
    assert!(pass);
}

/// Known red: the closed-form n = 5 family does not meet the four-parameter
/// square-shape conditions (see the companion controls 6b and 6c).
#[test]
fn acceptance_06a_decomposability_family_example() {
    let out = family(&FamilyParams::N5 { alpha: ONE, beta: ONE, gamma: ONE }).unwrap();
    let (phi, f) = out.pencil();
    let cert = criterion(&phi, &f, 1e-8).unwrap();
    let cert_ok = cert
        .as_ref()
        .map(|c| c.q_factors.iter().all(|q| q.degree() == Some(2)))
        .unwrap_or(false);
    let curve = pd_curve(&phi, &f).unwrap();
    let split = decompose_curve(&curve, &phi, &f, 1e-7).unwrap();
    let split_ok = matches!(
        &split,
        Decomposition::Split { components, fit_residual, product_residual }
            if components.len() == 2
                && components.iter().all(|c| matches!(c, Component::Conic(_)))
                && *fit_residual < 1e-7
                && *product_residual < 1e-6
    );
    let pass = cert_ok && split_ok;
    report(
        "06a",
        "family(5,(1,1,1)) certificate and two-conic split",
        pass,
        &format!(
            "certificate: {}, split: {}",
            if cert_ok { "four gcd-degree-2 parameters" } else { "absent" },
            if split_ok { "two conics" } else { "not detected" }
        ),
    );
    assert!(
        pass,
        "the closed-form n=5 family pencil has critical gcd degrees (2,2,1,1,1,1) and its \
         Wronskian factors across six collision moments, so the four-parameter \
         factorization required here cannot exist; see the genuine-transformation \
         control for the same chain succeeding"
    );
}

#[test]
fn acceptance_06b_negative_control() {
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    let mut none_count = 0;
    for _ in 0..20 {
        let (phi, f) = random_pencil(&mut rng, 5);
        match criterion(&phi, &f, 1e-8) {
            Ok(None) => none_count += 1,
            Ok(Some(_)) => {}
            Err(e) => panic!("criterion errored on random pencil: {e}"),
        }
    }
    let pass = none_count == 20;
    report("06b", "random quintic pencils yield no certificate", pass, &format!("{none_count}/20 absent"));
    assert!(pass);
}

#[test]
fn acceptance_06c_genuine_transformation_control() {
    // a pencil from an actual degree-5 elliptic transformation must pass the
    // whole chain: certificate, sufficiency, and the two-conic split
    let t = transform_odd(5, 1, 0, cr(0.5)).unwrap();
    let phi = t.f.monic().unwrap();
    let f = t.phi.clone();
    let cert = criterion(&phi, &f, 1e-8).unwrap().expect("certificate");
    let degrees_ok = cert.q_factors.iter().all(|q| q.degree() == Some(2));
    let report_cert = verify_certificate(&cert, &phi, &f, 1e-8).unwrap();
    let suff = sufficiency_class(5).unwrap();
    let curve = pd_curve(&phi, &f).unwrap();
    let split = decompose_curve(&curve, &phi, &f, 1e-7).unwrap();
    let (split_ok, fit, product) = match &split {
        Decomposition::Split { components, fit_residual, product_residual } => (
            components.len() == 2
                && components.iter().all(|c| matches!(c, Component::Conic(_))),
            *fit_residual,
            *product_residual,
        ),
        Decomposition::NotDetected => (false, f64::NAN, f64::NAN),
    };
    let pass = degrees_ok
        && report_cert.n_residual < 1e-8
        && report_cert.period_test.consistent()
        && suff == Sufficiency::Guaranteed
        && split_ok
        && fit < 1e-7
        && product < 1e-6;
    report(
        "06c",
        "genuine quintic transformation end-to-end",
        pass,
        &format!(
            "gcd degrees 2x4: {degrees_ok}, product residual {:.3e}, periods consistent {}, split fit {fit:.3e}, product {product:.3e}",
            report_cert.n_residual,
            report_cert.period_test.consistent()
        ),
    );
    assert!(pass);
}

#[test]
fn acceptance_07_n_consistency() {
    let out = family(&FamilyParams::N3 { alpha: ONE, beta: ONE }).unwrap();
    let (phi, f) = out.pencil();
    let cert = criterion(&phi, &f, 1e-8).unwrap().expect("certificate for family(3,(1,1))");
    let rep = verify_certificate(&cert, &phi, &f, 1e-8).unwrap();
    let n_err = (rep.n_const - cr(1.0 / 3.0)).norm();
    let a = rep.require_admissible_a().ok();
    let period_ok = rep.period_test.consistent();
    let pass = n_err < 1e-6 && a == Some(1) && period_ok;
    report(
        "07",
        "N = 1/3 with a = 1 on family(3,(1,1))",
        pass,
        &format!("N err {n_err:.3e}, a = {a:?}, period test {:?}", rep.period_test),
    );
    assert!(pass);
}

#[test]
fn acceptance_08_arithmetic_identities() {
    let mut ok = true;
    for n in (1..=999u64).step_by(2) {
        let t = arith_functions(n).unwrap();
        if t.torsion != t.sigma_prime * t.euler_phi {
            ok = false;
        }
    }
    for k in 1u32..=12 {
        let t = arith_functions(1 << k).unwrap();
        let rhs = t.sigma_prime * t.euler_phi;
        if t.torsion > rhs {
            ok = false;
        }
        if (k == 1) != (t.torsion == rhs) {
            ok = false;
        }
    }
    report("08", "torsion identity and power-of-two inequality", ok, "odd n <= 999, k <= 12, exact integers");
    assert!(ok);
}

#[test]
fn acceptance_09_jacobi_transformation() {
    let mut worst_identity = 0.0f64;
    let mut worst_sn = 0.0f64;
    for &n in &[3usize, 5] {
        for &kk in &[0.3, 0.5, 0.7] {
            let k = cr(kk);
            let t = transform_odd(n, 1, 0, k).unwrap();
            let (big_k, _) = agm_k(k).unwrap();
            for j in 0..50 {
                let u = big_k * cr((j as f64 + 0.5) / 50.0);
                let x = jacobi_sn(u, k);
                let y = t.f.eval(x) / t.phi.eval(x);
                let target = jacobi_sn(u / t.n_mult, t.lambda);
                worst_identity = worst_identity.max((y - target).norm());
            }
            worst_sn = worst_sn.max((jacobi_sn(big_k, k) - ONE).norm());
        }
    }
    let pass = worst_identity < 1e-8 && worst_sn < 1e-11;
    report(
        "09",
        "sampled transformation identity",
        pass,
        &format!("identity residual {worst_identity:.3e}, sn(K) err {worst_sn:.3e}"),
    );
    assert!(pass);
}

#[test]
fn acceptance_10_equations_of_motion() {
    // fixed pencils n = 2..6, checked collision-free on the real range
    let pencils: Vec<(Poly, Poly)> = vec![
        (Poly::from_real(&[-1.0, 0.0, 1.0]), Poly::x()),
        (Poly::from_real(&[-0.8, 0.2, 0.6, 1.0]), Poly::from_real(&[0.8, 0.5, -0.5])),
        (
            Poly::from_real(&[-0.8, 0.9, -0.1, -0.7, 1.0]),
            Poly::from_real(&[-0.8, 0.3, -0.3, -0.3]),
        ),
        (
            Poly::from_real(&[-0.5, 0.5, -1.0, 0.7, -0.2, 1.0]),
            Poly::from_real(&[0.6, -0.6, -0.5, -0.4, -0.2]),
        ),
        (
            Poly::from_real(&[-1.0, -0.4, 0.9, -0.2, 0.5, 0.9, 1.0]),
            Poly::from_real(&[-0.5, -0.3, 0.5, -0.2, -0.2, -0.4]),
        ),
    ];
    let mut worst_sup = 0.0f64;
    let mut worst_fd = 0.0f64;
    for (phi, f) in pencils {
        let spec = FlowSpec::isofocal(phi, f).unwrap();
        // keep the real path clear of collisions
        let criticals = critical_parameters(&spec.phi, &spec.f).unwrap();
        let clear = criticals
            .iter()
            .all(|(t, _)| t.im.abs() > 1e-3 || t.re.abs() > 0.55);
        assert!(clear, "test pencil has a real collision in range");
        for &t1 in &[0.5, -0.5] {
            let steps = 200;
            let traj = integrate(&spec, 0.0, t1, steps).unwrap();
            for state in traj.states.iter().step_by(20) {
                let closed = isofocal_state(&spec, state.t).unwrap();
                let perm = match_positions(&state.positions, &closed.positions);
                for (i, &j) in perm.iter().enumerate() {
                    worst_sup = worst_sup.max((state.positions[i] - closed.positions[j]).norm());
                    let a = state.masses.as_ref().unwrap()[i];
                    let b = closed.masses.as_ref().unwrap()[j];
                    worst_sup = worst_sup.max((a - b).norm());
                }
            }
        }
        // central finite differences of the closed form against the field
        let h = 1e-6;
        for &t in &[0.0, 0.21, -0.33] {
            let s = isofocal_state(&spec, cr(t)).unwrap();
            let sp = isofocal_state(&spec, cr(t + h)).unwrap();
            let sm = isofocal_state(&spec, cr(t - h)).unwrap();
            let (adot, mdot) = eom_field(&s, &spec).unwrap();
            let pp = match_positions(&s.positions, &sp.positions);
            let pm = match_positions(&s.positions, &sm.positions);
            for i in 0..spec.n() {
                let fd_a = (sp.positions[pp[i]] - sm.positions[pm[i]]) / cr(2.0 * h);
                worst_fd = worst_fd.max((fd_a - adot[i]).norm());
                let fd_m = (sp.masses.as_ref().unwrap()[pp[i]]
                    - sm.masses.as_ref().unwrap()[pm[i]])
                    / cr(2.0 * h);
                worst_fd = worst_fd.max((fd_m - mdot[i]).norm());
            }
        }
    }
    let pass = worst_sup < 1e-6 && worst_fd < 1e-5;
    report(
        "10",
        "integrated field matches closed-form flow",
        pass,
        &format!("sup error {worst_sup:.3e}, finite-difference error {worst_fd:.3e}"),
    );
    assert!(pass);
}

#[test]
fn acceptance_11_positivity() {
    // the quadratic pencil is positive on the whole real line
    let spec = FlowSpec::isofocal(Poly::from_real(&[-1.0, 0.0, 1.0]), Poly::x()).unwrap();
    let rep = positivity_intervals(&spec, -10.0, 10.0, 200).unwrap();
    let full_range = rep.intervals.len() == 1
        && (rep.intervals[0].0 + 10.0).abs() < 1e-9
        && (rep.intervals[0].1 - 10.0).abs() < 1e-9;

    // 20 random real-rooted configs. Real isofocal data is all-or-nothing
    // (mass signs are frozen between collisions and a colliding pair emerges
    // with opposite signs), so the isofocal trials cross-check the whole
    // interval list against a dense-scan oracle; bifocal trials, whose
    // moving foci let masses cross zero, supply genuine interior endpoints
    // for the 1e-9 comparison.
    let mut rng = ChaCha8Rng::seed_from_u64(1111);
    let mut worst = 0.0f64;
    let mut tested_endpoints = 0;
    let mut structural_agreements = 0;
    let mut trials = 0;
    while trials < 20 {
        let n = 2 + (trials % 4);
        let positions: Vec<C64> = {
            let mut xs: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.5..1.5)).collect();
            xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
            if xs.windows(2).any(|w| w[1] - w[0] < 0.3) {
                continue;
            }
            xs.into_iter().map(cr).collect()
        };
        let bifocal = trials % 2 == 0;
        let masses: Vec<C64> = (0..n)
            .map(|_| {
                let sign = if !bifocal && rng.gen_bool(0.3) { -1.0 } else { 1.0 };
                cr(sign * rng.gen_range(0.3..1.5))
            })
            .collect();
        let config = match MassedConfig::new(positions, masses) {
            Ok(c) => c,
            Err(_) => continue,
        };
        let pencil = build_pencil(&config).unwrap();
        if pencil.f.degree() != Some(n - 1) {
            continue;
        }
        let spec = if bifocal {
            let g =
                Poly::from_real(&(0..n).map(|_| rng.gen_range(-1.0..1.0)).collect::<Vec<_>>());
            match FlowSpec::bifocal(pencil.phi, pencil.f, g) {
                Ok(s) => s,
                Err(_) => continue,
            }
        } else {
            FlowSpec::isofocal(pencil.phi, pencil.f).unwrap()
        };
        trials += 1;
        let (lo, hi) = (-2.0, 2.0);
        let rep = positivity_intervals(&spec, lo, hi, 400).unwrap();
        // independent oracle for the same predicate: dense scan + bisection
        let positive = |t: f64| -> bool {
            let state = if spec.g.is_some() {
                pondar::dynamics::bifocal_state(&spec, cr(t))
            } else {
                pondar::dynamics::isofocal_state(&spec, cr(t))
            };
            let Ok(s) = state else { return false };
            if s.collided {
                return false;
            }
            s.masses
                .unwrap()
                .iter()
                .all(|m| m.im.abs() <= 1e-7 * (1.0 + m.norm()) && m.re > 0.0)
        };
        let dense = 4000;
        let mut oracle_intervals: Vec<(f64, f64)> = Vec::new();
        let mut open_start: Option<f64> = None;
        let bisect = |mut a: f64, mut b: f64| -> f64 {
            let fa = positive(a);
            for _ in 0..80 {
                if b - a < 1e-11 {
                    break;
                }
                let mid = 0.5 * (a + b);
                if positive(mid) == fa {
                    a = mid;
                } else {
                    b = mid;
                }
            }
            0.5 * (a + b)
        };
        let mut prev = positive(lo);
        if prev {
            open_start = Some(lo);
        }
        for i in 1..=dense {
            let t = lo + (hi - lo) * i as f64 / dense as f64;
            let cur = positive(t);
            if cur != prev {
                let edge = bisect(lo + (hi - lo) * (i - 1) as f64 / dense as f64, t);
                if cur {
                    open_start = Some(edge);
                } else {
                    oracle_intervals.push((open_start.take().unwrap(), edge));
                }
            }
            prev = cur;
        }
        if let Some(s) = open_start {
            oracle_intervals.push((s, hi));
        }
        // structural agreement of the full interval lists
        assert_eq!(
            rep.intervals.len(),
            oracle_intervals.len(),
            "interval count mismatch on trial {trials} (bifocal: {bifocal})"
        );
        structural_agreements += 1;
        for ((s1, e1), (s2, e2)) in rep.intervals.iter().zip(&oracle_intervals) {
            worst = worst.max((s1 - s2).abs()).max((e1 - e2).abs());
            for endpoint in [s1, e1] {
                if (endpoint - lo).abs() > 1e-8 && (endpoint - hi).abs() > 1e-8 {
                    tested_endpoints += 1;
                }
            }
        }
    }
    let pass = full_range && worst < 1e-9 && tested_endpoints >= 10 && structural_agreements == 20;
    report(
        "11",
        "positivity intervals",
        pass,
        &format!(
            "full range on the quadratic: {full_range}; {structural_agreements}/20 interval lists agree, {tested_endpoints} interior endpoints, worst dev {worst:.3e}"
        ),
    );
    assert!(pass);
}

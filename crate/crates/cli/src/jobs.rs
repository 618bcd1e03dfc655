//! Subcommand execution: parse inputs, call the library, serialize
//! deterministic artifacts.

use crate::output::{c2, emit, fmt17, svg_scatter, Csv};
use crate::{Command, CommonArgs};
use pondar::arith;
use pondar::decompcheck;
use pondar::decompose::{decompose_curve, Component, Decomposition};
use pondar::dynamics::{self, FlowSpec};
use pondar::elliptic;
use pondar::error::Error as CoreError;
use pondar::families::{family, FamilyParams};
use pondar::flaschka;
use pondar::marden::{self, MassedConfig};
use pondar::pdcurve;
use pondar::poly::{cr, C64, Poly};
use serde::{Deserialize, Serialize};
use std::process::ExitCode;

#[derive(Debug)]
pub enum JobError {
    Invalid(String),
    Numerical(String),
    Io(std::io::Error),
}

impl std::fmt::Display for JobError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            JobError::Invalid(m) => write!(f, "{m}"),
            JobError::Numerical(m) => write!(f, "{m}"),
            JobError::Io(e) => write!(f, "{e}"),
        }
    }
}

impl From<std::io::Error> for JobError {
    fn from(e: std::io::Error) -> Self {
        JobError::Io(e)
    }
}

impl From<CoreError> for JobError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::InvalidInput(_) | CoreError::GcdCondition { .. } => {
                JobError::Invalid(e.to_string())
            }
            other => JobError::Numerical(other.to_string()),
        }
    }
}

fn invalid<T>(msg: impl Into<String>) -> Result<T, JobError> {
    Err(JobError::Invalid(msg.into()))
}

fn check_tol(common: &CommonArgs) -> Result<(), JobError> {
    if common.tol <= 0.0 {
        return invalid("tolerance must be positive");
    }
    Ok(())
}

/// Parse "re" or "re:im" entries separated by commas.
fn parse_complex_list(s: &str) -> Result<Vec<C64>, JobError> {
    let mut out = Vec::new();
    for tok in s.split(',') {
        let tok = tok.trim();
        if tok.is_empty() {
            continue;
        }
        let z = if let Some((re, im)) = tok.split_once(':') {
            C64::new(
                re.trim().parse::<f64>().map_err(|e| JobError::Invalid(format!("bad entry '{tok}': {e}")))?,
                im.trim().parse::<f64>().map_err(|e| JobError::Invalid(format!("bad entry '{tok}': {e}")))?,
            )
        } else {
            cr(tok.parse::<f64>().map_err(|e| JobError::Invalid(format!("bad entry '{tok}': {e}")))?)
        };
        out.push(z);
    }
    if out.is_empty() {
        return invalid("empty list");
    }
    Ok(out)
}

fn parse_poly(s: &str) -> Result<Poly, JobError> {
    Ok(Poly::new(parse_complex_list(s)?))
}

fn json<T: Serialize>(v: &T) -> Result<String, JobError> {
    let mut s = serde_json::to_string_pretty(v)
        .map_err(|e| JobError::Numerical(format!("serialization failed: {e}")))?;
    s.push('\n');
    Ok(s)
}

#[derive(Serialize, Deserialize, PartialEq, Debug)]
pub struct FlowSampleJson {
    pub t: f64,
    pub positions: Vec<[f64; 2]>,
    pub masses: Option<Vec<[f64; 2]>>,
    pub collided: bool,
    pub foci: Vec<[f64; 2]>,
    pub mass_sum: Option<[f64; 2]>,
}

#[derive(Serialize, Deserialize, PartialEq, Debug)]
pub struct SimulateJson {
    pub phi: Vec<[f64; 2]>,
    pub f: Vec<[f64; 2]>,
    pub g: Option<Vec<[f64; 2]>>,
    pub samples: Vec<FlowSampleJson>,
}

#[derive(Serialize, Deserialize, PartialEq, Debug)]
pub struct FlaschkaJson {
    pub a_sq: Vec<[f64; 2]>,
    pub b: Vec<[f64; 2]>,
    pub scale: [f64; 2],
    pub evolved_b: Vec<[f64; 2]>,
    pub t: f64,
    pub recovered_f: Vec<[f64; 2]>,
    pub recovered_phi: Vec<[f64; 2]>,
}

#[derive(Serialize, Deserialize, PartialEq, Debug)]
pub struct CurveJson {
    pub n: usize,
    pub sym: Vec<Vec<[f64; 2]>>,
    /// trivariate coefficients as (e0, e1, e2, [re, im])
    pub tri: Vec<(usize, usize, usize, [f64; 2])>,
    pub samples: Vec<[[f64; 2]; 3]>,
    pub max_incidence_residual: f64,
}

#[derive(Serialize, Deserialize, PartialEq, Debug)]
pub struct CertificateJson {
    pub t_values: Vec<[f64; 2]>,
    pub contacts: Vec<[f64; 2]>,
    pub q_factors: Vec<Vec<[f64; 2]>>,
    pub gamma1: Vec<[f64; 2]>,
    pub gamma2: Vec<[f64; 2]>,
    pub n_const: [f64; 2],
    pub n: usize,
    pub parity: String,
}

#[derive(Serialize, Deserialize, PartialEq, Debug)]
pub struct DecomposeJson {
    pub certificate: Option<CertificateJson>,
    pub sufficiency: Option<String>,
    pub components: Vec<ComponentJson>,
    pub fit_residual: Option<f64>,
    pub product_residual: Option<f64>,
    pub decomposition_detected: bool,
}

#[derive(Serialize, Deserialize, PartialEq, Debug)]
pub struct ComponentJson {
    pub kind: String,
    pub coefficients: Vec<(usize, usize, usize, [f64; 2])>,
}

#[derive(Serialize, Deserialize, PartialEq, Debug)]
pub struct FamilyJson {
    pub n: usize,
    pub f: Vec<[f64; 2]>,
    pub phi: Vec<[f64; 2]>,
    pub positions: Vec<[f64; 2]>,
    pub closed_form_masses: Vec<[f64; 2]>,
    pub corrected_masses: Vec<[f64; 2]>,
    pub closed_form_masses_match: bool,
    pub n_const: [f64; 2],
}

#[derive(Serialize, Deserialize, PartialEq, Debug)]
pub struct TransformJson {
    pub f: Vec<[f64; 2]>,
    pub phi: Vec<[f64; 2]>,
    pub n_mult: Option<[f64; 2]>,
    pub lambda: Option<[f64; 2]>,
    pub identity_residual: Option<f64>,
}

#[derive(Serialize, Deserialize, PartialEq, Debug)]
pub struct MardenJson {
    pub foci: Vec<[f64; 2]>,
    pub circle_case: bool,
    pub contacts: Vec<(usize, usize, [f64; 2])>,
    pub steiner: Option<SteinerJson>,
}

#[derive(Serialize, Deserialize, PartialEq, Debug)]
pub struct SteinerJson {
    pub conic: Vec<[f64; 2]>,
    pub foci: Vec<[f64; 2]>,
    pub tangency_points: Vec<[f64; 2]>,
}

fn poly_json(p: &Poly) -> Vec<[f64; 2]> {
    p.coeffs().iter().map(|&z| c2(z)).collect()
}

pub fn execute(cmd: Command) -> Result<ExitCode, JobError> {
    match cmd {
        Command::Simulate { common, phi, f, g, positions, masses, t0, t1, grid } => {
            simulate(common, phi, f, g, positions, masses, t0, t1, grid)
        }
        Command::Flaschka { common, phi, f, t } => flaschka_cmd(common, &phi, &f, t),
        Command::Curve { common, phi, f, grid } => curve_cmd(common, &phi, &f, grid),
        Command::Decompose { common, phi, f } => decompose_cmd(common, &phi, &f),
        Command::Family { common, n, params } => family_cmd(common, n, &params),
        Command::Elliptic { common, transform_odd, even_p, even_q, k, odd_max } => {
            elliptic_cmd(common, transform_odd, even_p, even_q, k, odd_max)
        }
        Command::Marden { common, positions, masses, triangle } => {
            marden_cmd(common, positions, masses, triangle)
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn simulate(
    common: CommonArgs,
    phi: Option<String>,
    f: Option<String>,
    g: Option<String>,
    positions: Option<String>,
    masses: Option<String>,
    t0: f64,
    t1: f64,
    grid: usize,
) -> Result<ExitCode, JobError> {
    if grid < 1 {
        return invalid("grid must be at least 1");
    }
    if common.tol <= 0.0 {
        return invalid("tolerance must be positive");
    }
    let (phi, f) = match (&phi, &f, &positions, &masses) {
        (Some(p), Some(ff), None, None) => (parse_poly(p)?, parse_poly(ff)?),
        (None, None, Some(pos), Some(m)) => {
            let config = MassedConfig::new(parse_complex_list(pos)?, parse_complex_list(m)?)?;
            let pencil = marden::build_pencil(&config)?;
            (pencil.phi, pencil.f)
        }
        _ => return invalid("give exactly one input form: --phi/--f or --positions/--masses"),
    };
    let g_poly = g.as_deref().map(parse_poly).transpose()?;
    let spec = match g_poly {
        Some(gp) => FlowSpec::bifocal(phi, f, gp)?,
        None => FlowSpec::isofocal(phi, f)?,
    };
    let mut samples = Vec::with_capacity(grid);
    for i in 0..grid {
        let t = if grid == 1 { t0 } else { t0 + (t1 - t0) * i as f64 / (grid - 1) as f64 };
        let state = if spec.g.is_some() {
            dynamics::bifocal_state(&spec, cr(t))?
        } else {
            dynamics::isofocal_state(&spec, cr(t))?
        };
        samples.push(FlowSampleJson {
            t,
            positions: state.positions.iter().map(|&z| c2(z)).collect(),
            masses: state.masses.as_ref().map(|ms| ms.iter().map(|&z| c2(z)).collect()),
            collided: state.collided,
            foci: state.foci.iter().map(|&z| c2(z)).collect(),
            mass_sum: state.mass_sum().map(c2),
        });
    }
    match common.format.as_str() {
        "json" => {
            let doc = SimulateJson {
                phi: poly_json(&spec.phi),
                f: poly_json(&spec.f),
                g: spec.g.as_ref().map(poly_json),
                samples,
            };
            emit(&common.out, &json(&doc)?)?;
        }
        "csv" => {
            let n = spec.n();
            let mut header: Vec<String> = vec!["t".into()];
            for i in 0..n {
                header.push(format!("alpha{i}_re"));
                header.push(format!("alpha{i}_im"));
            }
            for i in 0..n {
                header.push(format!("m{i}_re"));
                header.push(format!("m{i}_im"));
            }
            header.push("mass_sum_re".into());
            header.push("mass_sum_im".into());
            header.push("collided".into());
            let header_refs: Vec<&str> = header.iter().map(|s| s.as_str()).collect();
            let mut csv = Csv::new(&header_refs);
            for s in &samples {
                let mut row = vec![fmt17(s.t)];
                for p in &s.positions {
                    row.push(fmt17(p[0]));
                    row.push(fmt17(p[1]));
                }
                match &s.masses {
                    Some(ms) => {
                        for m in ms {
                            row.push(fmt17(m[0]));
                            row.push(fmt17(m[1]));
                        }
                        let sum = s.mass_sum.unwrap();
                        row.push(fmt17(sum[0]));
                        row.push(fmt17(sum[1]));
                    }
                    None => {
                        for _ in 0..2 * s.positions.len() + 2 {
                            row.push("nan".into());
                        }
                    }
                }
                row.push(if s.collided { "1".into() } else { "0".into() });
                csv.row(&row);
            }
            emit(&common.out, &csv.finish())?;
        }
        "svg" => {
            let n = spec.n();
            let mut series: Vec<(String, Vec<(f64, f64)>)> = Vec::new();
            for i in 0..n {
                let pts: Vec<(f64, f64)> =
                    samples.iter().map(|s| (s.positions[i][0], s.positions[i][1])).collect();
                series.push((format!("alpha{i}"), pts));
            }
            let refs: Vec<(&str, Vec<(f64, f64)>)> =
                series.iter().map(|(n, p)| (n.as_str(), p.clone())).collect();
            emit(&common.out, &svg_scatter(&refs))?;
        }
        other => return invalid(format!("unknown format '{other}'")),
    }
    Ok(ExitCode::SUCCESS)
}

fn flaschka_cmd(common: CommonArgs, phi: &str, f: &str, t: f64) -> Result<ExitCode, JobError> {
    check_tol(&common)?;
    let phi = parse_poly(phi)?;
    let f = parse_poly(f)?;
    let coords = flaschka::to_flaschka(&f, &phi)?;
    let evolved = flaschka::evolve_flaschka(&coords, cr(t));
    let (rf, rphi) = flaschka::from_flaschka(&evolved);
    let doc = FlaschkaJson {
        a_sq: coords.a_sq.iter().map(|&z| c2(z)).collect(),
        b: coords.b.iter().map(|&z| c2(z)).collect(),
        scale: c2(coords.scale),
        evolved_b: evolved.b.iter().map(|&z| c2(z)).collect(),
        t,
        recovered_f: poly_json(&rf),
        recovered_phi: poly_json(&rphi),
    };
    emit(&common.out, &json(&doc)?)?;
    Ok(ExitCode::SUCCESS)
}

fn curve_cmd(common: CommonArgs, phi: &str, f: &str, grid: usize) -> Result<ExitCode, JobError> {
    check_tol(&common)?;
    let phi = parse_poly(phi)?;
    let f = parse_poly(f)?;
    let curve = pdcurve::pd_curve_with_tol(&phi, &f, common.tol)?;
    // sample the incidence grid on a deterministic t-circle
    let mut samples = Vec::new();
    let mut worst = 0.0f64;
    for j in 0..grid {
        let theta = 2.0 * std::f64::consts::PI * (j as f64 + 0.31) / grid.max(1) as f64;
        let t = C64::new(0.6 * theta.cos(), 0.6 * theta.sin());
        let member = phi.add_scaled(&f, t);
        let Ok(rs) = pondar::roots::roots(&member, 1e-10) else { continue };
        if rs.max_multiplicity() > 1 {
            continue;
        }
        let alphas = rs.flat();
        for a in 0..alphas.len() {
            for b in a + 1..alphas.len() {
                let p = pdcurve::line_intersection(
                    &pdcurve::tangent_line(alphas[a]),
                    &pdcurve::tangent_line(alphas[b]),
                )
                .normalized();
                worst = worst.max(curve.residual(&p));
                samples.push([c2(p.z0), c2(p.z1), c2(p.z2)]);
            }
        }
    }
    match common.format.as_str() {
        "json" => {
            let doc = CurveJson {
                n: curve.n,
                sym: curve.sym.iter().map(|row| row.iter().map(|&z| c2(z)).collect()).collect(),
                tri: curve.tri.monomials().map(|(a, b, c, z)| (a, b, c, c2(z))).collect(),
                samples,
                max_incidence_residual: worst,
            };
            emit(&common.out, &json(&doc)?)?;
        }
        "csv" => {
            let mut csv = Csv::new(&["z0_re", "z0_im", "z1_re", "z1_im", "z2_re", "z2_im"]);
            for s in &samples {
                csv.row(&[
                    fmt17(s[0][0]),
                    fmt17(s[0][1]),
                    fmt17(s[1][0]),
                    fmt17(s[1][1]),
                    fmt17(s[2][0]),
                    fmt17(s[2][1]),
                ]);
            }
            emit(&common.out, &csv.finish())?;
        }
        "svg" => {
            // real affine chart z0/z2, z1/z2
            let pts: Vec<(f64, f64)> = samples
                .iter()
                .filter(|s| s[2][0].abs() + s[2][1].abs() > 1e-9)
                .map(|s| {
                    let z2 = C64::new(s[2][0], s[2][1]);
                    let x = C64::new(s[0][0], s[0][1]) / z2;
                    let y = C64::new(s[1][0], s[1][1]) / z2;
                    (x.re, y.re)
                })
                .collect();
            emit(&common.out, &svg_scatter(&[("curve", pts)]))?;
        }
        other => return invalid(format!("unknown format '{other}'")),
    }
    Ok(ExitCode::SUCCESS)
}

fn decompose_cmd(common: CommonArgs, phi: &str, f: &str) -> Result<ExitCode, JobError> {
    check_tol(&common)?;
    let phi = parse_poly(phi)?;
    let f = parse_poly(f)?;
    let n = phi.degree().ok_or_else(|| JobError::Invalid("phi must be nonzero".into()))?;
    let certificate = if n >= 3 { decompcheck::criterion(&phi, &f, common.tol)? } else { None };
    let curve = pdcurve::pd_curve_with_tol(&phi, &f, common.tol)?;
    let outcome = decompose_curve(&curve, &phi, &f, common.tol.max(1e-7))?;
    let (components, fit_residual, product_residual, detected) = match outcome {
        Decomposition::Split { components, fit_residual, product_residual } => {
            let comps = components
                .iter()
                .map(|c| ComponentJson {
                    kind: match c {
                        Component::Conic(_) => "conic".into(),
                        Component::Line(_) => "line".into(),
                    },
                    coefficients: c.form().monomials().map(|(a, b, cc, z)| (a, b, cc, c2(z))).collect(),
                })
                .collect();
            (comps, Some(fit_residual), Some(product_residual), true)
        }
        Decomposition::NotDetected => (vec![], None, None, false),
    };
    let doc = DecomposeJson {
        certificate: certificate.as_ref().map(|cert| CertificateJson {
            t_values: cert.t_values.iter().map(|&z| c2(z)).collect(),
            contacts: cert.contacts.iter().map(|&z| c2(z)).collect(),
            q_factors: cert.q_factors.iter().map(poly_json).collect(),
            gamma1: cert.gamma1.iter().map(|&z| c2(z)).collect(),
            gamma2: cert.gamma2.iter().map(|&z| c2(z)).collect(),
            n_const: c2(cert.n_const),
            n: cert.n,
            parity: match cert.parity {
                decompcheck::Parity::Odd => "odd".into(),
                decompcheck::Parity::Even => "even".into(),
            },
        }),
        sufficiency: if n >= 3 {
            Some(match decompcheck::sufficiency_class(n)? {
                decompcheck::Sufficiency::Guaranteed => "guaranteed".into(),
                decompcheck::Sufficiency::NeedsCyclicityCheck => "needs-cyclicity-check".into(),
            })
        } else {
            None
        },
        components,
        fit_residual,
        product_residual,
        decomposition_detected: detected,
    };
    emit(&common.out, &json(&doc)?)?;
    if detected {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(4))
    }
}

fn family_cmd(common: CommonArgs, n: usize, params: &str) -> Result<ExitCode, JobError> {
    let p = parse_complex_list(params)?;
    let fp = match (n, p.len()) {
        (3, 2) => FamilyParams::N3 { alpha: p[0], beta: p[1] },
        (5, 3) => FamilyParams::N5 { alpha: p[0], beta: p[1], gamma: p[2] },
        (7, 4) => FamilyParams::N7 { alpha: p[0], beta: p[1], gamma: p[2], delta: p[3] },
        _ => return invalid("need n in {3, 5, 7} with 2, 3, or 4 parameters respectively"),
    };
    let out = family(&fp)?;
    let doc = FamilyJson {
        n: out.n,
        f: poly_json(&out.f),
        phi: poly_json(&out.phi),
        positions: out.positions.iter().map(|&z| c2(z)).collect(),
        closed_form_masses: out.closed_form_masses.iter().map(|&z| c2(z)).collect(),
        corrected_masses: out.corrected_masses.iter().map(|&z| c2(z)).collect(),
        closed_form_masses_match: out.closed_form_masses_match,
        n_const: c2(out.n_const),
    };
    emit(&common.out, &json(&doc)?)?;
    Ok(ExitCode::SUCCESS)
}

fn elliptic_cmd(
    common: CommonArgs,
    transform_odd: Option<String>,
    even_p: Option<String>,
    even_q: Option<String>,
    k: Option<f64>,
    odd_max: Option<u64>,
) -> Result<ExitCode, JobError> {
    if let Some(spec) = transform_odd {
        let parts: Vec<&str> = spec.split(',').collect();
        if parts.len() != 4 {
            return invalid("--transform-odd needs n,m,mprime,k");
        }
        let n: usize = parts[0].trim().parse().map_err(|_| JobError::Invalid("bad n".into()))?;
        let m: i64 = parts[1].trim().parse().map_err(|_| JobError::Invalid("bad m".into()))?;
        let mp: i64 = parts[2].trim().parse().map_err(|_| JobError::Invalid("bad m'".into()))?;
        let kk: f64 = parts[3].trim().parse().map_err(|_| JobError::Invalid("bad k".into()))?;
        let t = elliptic::transform_odd(n, m, mp, cr(kk))?;
        let doc = TransformJson {
            f: poly_json(&t.f),
            phi: poly_json(&t.phi),
            n_mult: Some(c2(t.n_mult)),
            lambda: Some(c2(t.lambda)),
            identity_residual: Some(t.identity_residual),
        };
        emit(&common.out, &json(&doc)?)?;
        return Ok(ExitCode::SUCCESS);
    }
    if let (Some(p), Some(q), Some(kk)) = (&even_p, &even_q, k) {
        let (phi, f) = elliptic::transform_even(&parse_poly(p)?, &parse_poly(q)?, cr(kk))?;
        let doc = TransformJson {
            f: poly_json(&f),
            phi: poly_json(&phi),
            n_mult: None,
            lambda: None,
            identity_residual: None,
        };
        emit(&common.out, &json(&doc)?)?;
        return Ok(ExitCode::SUCCESS);
    }
    if let Some(max) = odd_max {
        let mut csv = Csv::new(&["n", "t", "sigma_prime", "euler_phi", "product"]);
        let mut n = 1;
        while n <= max {
            let a = arith::arith_functions(n)?;
            csv.row(&[
                n.to_string(),
                a.torsion.to_string(),
                a.sigma_prime.to_string(),
                a.euler_phi.to_string(),
                (a.sigma_prime * a.euler_phi).to_string(),
            ]);
            n += 2;
        }
        emit(&common.out, &csv.finish())?;
        return Ok(ExitCode::SUCCESS);
    }
    invalid("elliptic needs --transform-odd, --even-p/--even-q/--k, or --odd-max")
}

fn marden_cmd(
    common: CommonArgs,
    positions: Option<String>,
    masses: Option<String>,
    triangle: Option<String>,
) -> Result<ExitCode, JobError> {
    let mut steiner = None;
    let (foci, circle_case, contacts) = match (&positions, &masses, &triangle) {
        (Some(pos), Some(m), None) => {
            let config = MassedConfig::new(parse_complex_list(pos)?, parse_complex_list(m)?)?;
            let ft = marden::foci_and_tangency(&config, common.tol)?;
            (ft.foci.flat(), ft.circle_case, ft.contacts)
        }
        (None, None, Some(tri)) => {
            let pts = parse_complex_list(tri)?;
            if pts.len() != 3 {
                return invalid("--triangle needs exactly three vertices");
            }
            let s = marden::steiner_oracle(&[pts[0], pts[1], pts[2]])?;
            let config = MassedConfig::new(pts.clone(), vec![cr(1.0); 3])?;
            let ft = marden::foci_and_tangency(&config, common.tol)?;
            steiner = Some(SteinerJson {
                conic: s.conic.iter().map(|&z| c2(z)).collect(),
                foci: vec![c2(s.foci.0), c2(s.foci.1)],
                tangency_points: s.tangency_points.iter().map(|&z| c2(z)).collect(),
            });
            (ft.foci.flat(), ft.circle_case, ft.contacts)
        }
        _ => return invalid("give --positions/--masses or --triangle"),
    };
    let doc = MardenJson {
        foci: foci.iter().map(|&z| c2(z)).collect(),
        circle_case,
        contacts: contacts.iter().map(|&(i, j, z)| (i, j, c2(z))).collect(),
        steiner,
    };
    emit(&common.out, &json(&doc)?)?;
    Ok(ExitCode::SUCCESS)
}

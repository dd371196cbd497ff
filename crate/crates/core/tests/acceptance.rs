//! Acceptance suite: one pass/fail line per criterion, nonzero exit on any
//! failure.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use num_complex::Complex64;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use kneser::analysis::{
    integration_identity_check, kernel_bound_check, t_field, t_operator_cotangent,
    t_operator_singular,
};
use kneser::hilbert::{conjugate_consistency, hilbert_pv, hilbert_transform};
use kneser::map::{compose_with_curve, BoundaryCorrespondence, MapSpec};
use kneser::qc::{qc_constant, qc_verdict, s_composite, QcOptions, QcVerdict};
use kneser::verify::{cmd_mollify, cmd_verify, Injectivity, Scenario, Verdict};
use kneser::{CircleField, CurveSpec, HarmonicExtension, JordanCurve};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn curve(spec: &CurveSpec) -> JordanCurve {
    JordanCurve::build(spec, 512).expect("test curve builds")
}

fn map(c: &JordanCurve, spec: &MapSpec) -> BoundaryCorrespondence {
    BoundaryCorrespondence::from_spec(spec, c.length()).expect("test map builds")
}

fn twist(a: f64) -> MapSpec {
    MapSpec::Twist {
        amplitude: a,
        frequency: 1,
        phase: 0.0,
    }
}

fn e<E: std::fmt::Display>(err: E) -> String {
    err.to_string()
}

fn circle_identity() -> Outcome {
    let c = curve(&CurveSpec::circle(1.0));
    let f = map(&c, &MapSpec::Identity);
    let t = t_field(&c, &f, 1024).map_err(e)?;
    let t_dev = t
        .values()
        .iter()
        .fold(0.0f64, |m, v| m.max((v - 1.0).abs()));
    ensure(t_dev <= 1e-8, format!("max |T - 1| = {t_dev:e}"))?;
    let bj_dev = t
        .values
        .nodes()
        .zip(t.values())
        .fold(0.0f64, |m, (tau, v)| {
            m.max((f.derivative(tau) * v - 1.0).abs())
        });
    ensure(bj_dev <= 1e-8, format!("max |f' T - 1| = {bj_dev:e}"))?;
    let ext = HarmonicExtension::from_boundary_map(&compose_with_curve(&c, &f).map_err(e)?, 1024)
        .map_err(e)?;
    let j_dev = ext
        .polar_grid(64, 256)
        .map_err(e)?
        .iter()
        .fold(0.0f64, |m, g| m.max((g.jacobian - 1.0).abs()));
    ensure(j_dev <= 1e-8, format!("max |J - 1| = {j_dev:e}"))?;
    Ok(format!(
        "|T-1| {t_dev:.1e}, |f'T-1| {bj_dev:.1e}, |J-1| {j_dev:.1e}"
    ))
}

fn two_forms() -> Outcome {
    let cases = [
        ("circle/twist 0.3", CurveSpec::circle(1.0), twist(0.3)),
        (
            "ellipse 2:1/identity",
            CurveSpec::ellipse(2.0, 1.0),
            MapSpec::Identity,
        ),
    ];
    let mut parts = Vec::new();
    for (name, cs, ms) in cases {
        let c = curve(&cs);
        let f = map(&c, &ms);
        let mut worst: f64 = 0.0;
        for k in 0..16 {
            let tau = 2.0 * PI * k as f64 / 16.0;
            let a = t_operator_singular(&c, &f, tau, 2048).map_err(e)?;
            let b = t_operator_cotangent(&c, &f, tau, 2048).map_err(e)?;
            worst = worst.max((a - b).abs());
        }
        ensure(worst <= 1e-5, format!("{name}: max gap {worst:e}"))?;
        parts.push(format!("{name} {worst:.1e}"));
    }
    Ok(parts.join(", "))
}

fn boundary_interior() -> Outcome {
    let c = curve(&CurveSpec::circle(1.0));
    let f = map(&c, &twist(0.3));
    let ext = HarmonicExtension::from_boundary_map(&compose_with_curve(&c, &f).map_err(e)?, 1024)
        .map_err(e)?
        .with_boundary_switch(1.0 - 1e-7)
        .map_err(e)?;
    let angles: Vec<f64> = (0..8).map(|k| 2.0 * PI * (k as f64 + 0.25) / 8.0).collect();
    let boundary: Vec<f64> = angles
        .iter()
        .map(|&tau| Ok(f.derivative(tau) * t_operator_cotangent(&c, &f, tau, 2048)?))
        .collect::<kneser::Result<_>>()
        .map_err(e)?;
    let j_max = boundary.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut gaps = Vec::new();
    for delta in [1e-2, 1e-3, 1e-4] {
        let mut worst: f64 = 0.0;
        for (tau, b) in angles.iter().zip(&boundary) {
            let j = ext
                .jacobian(Complex64::from_polar(1.0 - delta, *tau))
                .map_err(e)?;
            worst = worst.max((b - j).abs());
        }
        gaps.push(worst);
    }
    ensure(
        gaps.windows(2).all(|w| w[1] < w[0]),
        format!("gaps do not decrease: {gaps:?}"),
    )?;
    ensure(
        gaps[2] <= 1e-2 * j_max,
        format!("final gap {:e} > 1e-2 max|J|", gaps[2]),
    )?;
    Ok(format!(
        "gaps {:.1e} > {:.1e} > {:.1e}",
        gaps[0], gaps[1], gaps[2]
    ))
}

fn hilbert_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut paths, mut conj) = (0.0f64, 0.0f64);
    for _ in 0..10 {
        let deg = rng.random_range(1..=8i32);
        let coef: Vec<(i32, Complex64)> = (-deg..=deg)
            .map(|k| {
                (
                    k,
                    Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)),
                )
            })
            .collect();
        let chi = CircleField::from_fn(64, |t| {
            coef.iter()
                .map(|(k, c)| c * Complex64::from_polar(1.0, *k as f64 * t))
                .sum()
        })
        .map_err(e)?;
        let a = hilbert_transform(&chi);
        let b = hilbert_pv(&chi);
        for (x, y) in a.samples().iter().zip(b.samples()) {
            paths = paths.max((x - y).norm());
        }
        conj = conj.max(conjugate_consistency(&chi));
    }
    ensure(paths <= 1e-6, format!("multiplier vs PV {paths:e}"))?;
    ensure(conj <= 1e-8, format!("conjugate identity defect {conj:e}"))?;
    let mut cos_sin: f64 = 0.0;
    for n in 1..=8 {
        let h =
            hilbert_transform(&CircleField::from_real_fn(64, |t| (n as f64 * t).cos()).map_err(e)?);
        for (t, v) in h.nodes().zip(h.samples()) {
            cos_sin = cos_sin.max((v - Complex64::from((n as f64 * t).sin())).norm());
        }
    }
    ensure(
        cos_sin <= 1e-10,
        format!("H(cos nt) - sin nt = {cos_sin:e}"),
    )?;
    Ok(format!(
        "paths {paths:.1e}, H(cos)=sin {cos_sin:.1e}, conjugate {conj:.1e}"
    ))
}

fn convex_targets() -> Vec<(&'static str, CurveSpec)> {
    vec![
        ("circle", CurveSpec::circle(1.0)),
        ("ellipse 2:1", CurveSpec::ellipse(2.0, 1.0)),
        ("ellipse 3:1", CurveSpec::ellipse(3.0, 1.0)),
    ]
}

fn convex_maps() -> Vec<MapSpec> {
    let mut maps = vec![MapSpec::Identity];
    for (a, k, phase) in [(0.3, 1, 0.0), (0.6, 2, 0.7), (0.9, 3, 2.0), (0.5, 4, 4.1)] {
        maps.push(MapSpec::Twist {
            amplitude: a,
            frequency: k,
            phase,
        });
    }
    maps.push(MapSpec::Piecewise {
        breakpoints: vec![0.0, 2.0, 4.0],
        speeds: vec![1.5, 0.6, 1.0],
    });
    maps
}

fn convexity() -> Outcome {
    let mut kmin = f64::INFINITY;
    for cs in [CurveSpec::circle(1.0), CurveSpec::ellipse(2.0, 1.0)] {
        let (convex, min) = curve(&cs).convexity_certificate(512);
        ensure(convex && min >= -1e-12, format!("kernel min {min:e}"))?;
        kmin = kmin.min(min);
    }
    let mut tmin = f64::INFINITY;
    for (name, cs) in convex_targets() {
        let c = curve(&cs);
        for ms in convex_maps() {
            let t = t_field(&c, &map(&c, &ms), 1024).map_err(e)?;
            ensure(t.min > 0.0, format!("{name} {ms:?}: min T = {:e}", t.min))?;
            tmin = tmin.min(t.min);
        }
    }
    Ok(format!("kernel min {kmin:.1e}, min T {tmin:.3}"))
}

fn kernel_bound() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst: f64 = 0.0;
    for cs in [
        CurveSpec::circle(1.0),
        CurveSpec::ellipse(2.0, 1.0),
        CurveSpec::bean(),
    ] {
        let c = curve(&cs);
        let l = c.length();
        for _ in 0..10_000 {
            let (s, t) = (rng.random_range(0.0..l), rng.random_range(0.0..l));
            let b = kernel_bound_check(&c, s, t).map_err(e)?;
            if b.bound > 0.0 {
                worst = worst.max(b.abs_k / b.bound);
            }
        }
    }
    Ok(format!("3 x 10^4 pairs, max |K| / bound {worst:.3}"))
}

fn integration_identity() -> Outcome {
    let mut worst: f64 = 0.0;
    for p in [1.0, 0.5, 0.75] {
        for y in [0.25, 0.5, 1.0] {
            let d = integration_identity_check(|t: f64| t.powf(p), 1.0, y).map_err(e)?;
            ensure(
                d.defect <= 1e-6,
                format!("t^{p} on [0, {y}]: defect {:e}", d.defect),
            )?;
            worst = worst.max(d.defect);
        }
    }
    Ok(format!("max defect {worst:.1e}"))
}

fn mollifier() -> Outcome {
    let kinked = r#"{"curve":{"kind":"circle","radius":1},
        "map":{"type":"piecewise","breakpoints":[0.0,3.141592653589793],"speeds":[1.1,0.9]}}"#;
    let smooth = r#"{"curve":{"kind":"ellipse","a":2,"b":1},
        "map":{"type":"twist","amplitude":0.3}}"#;
    let mut last_gap = 0.0;
    for (name, text) in [("kinked", kinked), ("twist", smooth)] {
        let s = Scenario::from_json(text).map_err(e)?;
        let r = cmd_mollify(&s).map_err(e)?;
        let l = s.build().map_err(e)?.0.length();
        for st in &r.steps {
            ensure(st.bracket_ok, format!("{name} n={}: bracket broken", st.n))?;
            ensure(
                st.period_defect <= 1e-10 * l.max(1.0),
                format!("{name} n={}: period defect {:e}", st.n, st.period_defect),
            )?;
            ensure(
                st.map_gap <= st.map_gap_bound,
                format!(
                    "{name} n={}: gap {:e} > {:e}",
                    st.n, st.map_gap, st.map_gap_bound
                ),
            )?;
        }
        if name == "kinked" {
            ensure(r.t_gap_decreasing, "T gap does not decrease")?;
            let fin = r.steps.last().map(|s| s.t_gap).unwrap_or(f64::INFINITY);
            ensure(fin <= 1e-3, format!("final T gap {fin:e}"))?;
            last_gap = fin;
        }
    }
    Ok(format!(
        "brackets, periods and gaps hold; kinked T gap at n=512 {last_gap:.1e}"
    ))
}

fn qc_suite() -> Outcome {
    let c = curve(&CurveSpec::circle(1.0));
    let opts = QcOptions::default();
    let id = qc_verdict(&c, &map(&c, &MapSpec::Identity), opts).map_err(e)?;
    let k_id = id.k_estimate.ok_or("identity has no K")?;
    ensure((k_id - 1.0).abs() <= 1e-12, format!("identity K = {k_id}"))?;
    ensure(
        qc_constant(1.0, 1.0, 1.0).map_err(e)? == 1.0,
        "K(1, 1, 1) != 1",
    )?;

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..1000 {
        let l = rng.random_range(0.1..2.0);
        let (a, b) = (rng.random_range(l..3.0), rng.random_range(l..3.0));
        let k = qc_constant(a, b, l).map_err(e)?;
        let s = s_composite(a, b, l).map_err(e)?;
        ensure(
            (k - (2.0 * s - 1.0).sqrt()).abs() <= 1e-12 * k.max(1.0),
            format!("K vs sqrt(2S-1) at ({a}, {b}, {l})"),
        )?;
    }

    let mut ks = Vec::new();
    let ellipse = curve(&CurveSpec::ellipse(2.0, 1.0));
    for eps in [0.1, 0.05, 0.01] {
        let r = qc_verdict(&c, &map(&c, &twist(eps)), opts).map_err(e)?;
        ks.push(r.k_estimate.ok_or("twist has no K")?);
    }
    ensure(
        ks.windows(2).all(|w| w[1] < w[0]) && ks[2] > 1.0,
        format!("K along eps = 0.1, 0.05, 0.01: {ks:?}"),
    )?;
    for (cc, ms) in [
        (&c, twist(0.1)),
        (&c, twist(0.3)),
        (&ellipse, MapSpec::Identity),
        (&ellipse, twist(0.3)),
    ] {
        let r = qc_verdict(cc, &map(cc, &ms), opts).map_err(e)?;
        if r.verdict == QcVerdict::Qc {
            let (mu, mu2) = (
                r.mu_max_interior.unwrap_or(f64::NAN),
                r.mu_bound.unwrap_or(f64::NAN),
            );
            ensure(mu <= mu2 + 1e-6, format!("{ms:?}: mu_max {mu} > mu2 {mu2}"))?;
        }
    }
    let plateau = MapSpec::Plateau {
        arcs: vec![[1.0, 2.0]],
    };
    let p = qc_verdict(&c, &map(&c, &plateau), opts).map_err(e)?;
    ensure(
        p.verdict == QcVerdict::NotQc,
        format!("plateau verdict {:?}", p.verdict),
    )?;
    Ok(format!(
        "K(id) - 1 = {:.1e}; K at eps 0.1/0.05/0.01 = {:.4}/{:.4}/{:.4}; plateau not-qc",
        k_id - 1.0,
        ks[0],
        ks[1],
        ks[2]
    ))
}

fn fold_detection() -> Outcome {
    let witness = include_str!("../../../scenarios/bean_fold.json");
    let v = cmd_verify(&Scenario::from_json(witness).map_err(e)?).map_err(e)?;
    ensure(v.t_min < -1e-3, format!("witness t_min {:e}", v.t_min))?;
    ensure(
        v.verdict == Verdict::FoldDetected,
        format!("witness verdict {:?}", v.verdict),
    )?;
    let Injectivity::Collision { pairs } = &v.injectivity else {
        return Err("witness has no collision pair".into());
    };
    ensure(
        pairs.iter().all(|p| p.recheck()),
        "a collision pair fails the recheck",
    )?;

    let mut runs = 0;
    for (name, cs) in convex_targets() {
        for ms in convex_maps() {
            let mut s =
                Scenario::from_json(r#"{"curve":{"kind":"circle","radius":1}}"#).map_err(e)?;
            s.curve = Some(cs.clone());
            s.map = Some(ms.clone());
            s.grid = [32, 128];
            let v = cmd_verify(&s).map_err(e)?;
            ensure(
                v.verdict != Verdict::FoldDetected,
                format!("{name} {ms:?}: fold-detected on a convex target"),
            )?;
            runs += 1;
        }
    }
    Ok(format!(
        "witness t_min {:.3} with {} rechecked pairs; {runs} convex runs fold-free",
        v.t_min,
        pairs.len()
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("circle-identity calibration", circle_identity),
        ("two-form T agreement", two_forms),
        ("boundary-interior Jacobian", boundary_interior),
        ("Hilbert transform oracle", hilbert_oracle),
        ("convexity positivity", convexity),
        ("kernel bound", kernel_bound),
        ("integration identity", integration_identity),
        ("mollifier suite", mollifier),
        ("quasiconformality suite", qc_suite),
        ("fold detection", fold_detection),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} ({secs:.1}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why} ({secs:.1}s)", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

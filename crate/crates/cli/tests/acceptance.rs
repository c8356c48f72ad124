//! Acceptance suite: one PASS/FAIL line per criterion.

use std::process::Command;
use std::time::Instant;

use nlverify::chart::{
    check_exactness, check_identity_1, check_identity_2, check_involutivity, eigenprojections,
    torsion_bracket, torsion_pointwise, AcsGenerator, AcsKind, ChartSampler, OperatorField,
    VectorField, CLOSURE_TOL,
};
use nlverify::flag::{build_flag_data, enumerate_flags, verify_flag, MIN_UNITARIES};
use nlverify::lie::fixtures::random_complex_structure;
use nlverify::lie::{
    build_k, check_iv, check_k0, integrability_criterion, named_fixtures, random_fixtures,
    roundtrip_structure_with, roundtrip_subalgebra_with, subalgebra_equivalence, Fixture,
    SignConvention,
};
use nlverify::linalg::{identity, CVector, I};
use nlverify::rng::{normal, stream};

const SEED: u64 = 20240611;

type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn generated_fields() -> Vec<(usize, OperatorField)> {
    let mut out = Vec::new();
    for (idx, &(n, d)) in [(2, 1), (2, 2), (4, 1), (4, 2), (6, 1), (6, 2)]
        .iter()
        .cycle()
        .take(102)
        .enumerate()
    {
        let j = AcsGenerator::new(n, d, 0.15, SEED + idx as u64)
            .generate()
            .expect("generator");
        out.push((n, j));
    }
    out
}

fn random_vector(rng: &mut impl rand::Rng, n: usize) -> CVector {
    CVector::from_fn(n, |_, _| nlverify::linalg::c64(normal(rng), 0.0))
}

fn torsion_equivalence() -> Outcome {
    let start = Instant::now();
    let fields = generated_fields();
    let mut worst: f64 = 0.0;
    let mut triples = 0;
    for (idx, (n, j)) in fields.iter().enumerate() {
        let sampler = ChartSampler::new(*n, j.radius(), 20, SEED ^ idx as u64);
        let mut rng = sampler.aux_rng();
        for x in sampler.real_points() {
            let a = VectorField::random(*n, 2, &mut rng);
            let b = VectorField::random(*n, 2, &mut rng);
            let (u, v) = (a.eval(&x).unwrap(), b.eval(&x).unwrap());
            let diff =
                torsion_bracket(j, &a, &b, &x).unwrap() - torsion_pointwise(j, &u, &v, &x).unwrap();
            worst = worst.max(diff.norm() / (1.0 + u.norm() * v.norm()));
            triples += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        worst <= 1e-6 && secs <= 60.0 && fields.len() >= 100,
        format!(
            "fields={} triples={triples} max_rel_discrepancy={worst:.3e} tol=1e-6 time={secs:.1}s",
            fields.len()
        ),
    )
}

fn constant_torsion() -> Outcome {
    let mut rng = stream(SEED, 2);
    let (mut pointwise, mut bracket, mut bracket_rel) = (0.0f64, 0.0f64, 0.0f64);
    for t in 0..1000 {
        let n = 2 * (1 + t % 3);
        let j = OperatorField::constant(&random_complex_structure(&mut rng, n), 1.0).unwrap();
        let x: Vec<_> = random_vector(&mut rng, n).iter().map(|z| z * 0.3).collect();
        let a = VectorField::random(n, 2, &mut rng);
        let b = VectorField::random(n, 2, &mut rng);
        let (u, v) = (a.eval(&x).unwrap(), b.eval(&x).unwrap());
        pointwise = pointwise.max(torsion_pointwise(&j, &u, &v, &x).unwrap().norm());
        let jx = j.eval(&x).unwrap();
        let tb = torsion_bracket(&j, &a, &b, &x).unwrap().norm();
        bracket = bracket.max(tb);
        bracket_rel = bracket_rel.max(tb / (jx.norm_squared() * (1.0 + u.norm() * v.norm())));
    }
    outcome(
        pointwise <= 1e-14,
        format!(
            "triples=1000 pointwise_max={pointwise:.3e} tol=1e-14; bracket_form_max={bracket:.3e} \
             bracket_form_rel={bracket_rel:.3e}"
        ),
    )
}

fn derivative_identities() -> Outcome {
    let mut worst1: f64 = 0.0;
    let mut worst2: f64 = 0.0;
    let mut configs = 0;
    for (idx, (n, j)) in generated_fields().iter().enumerate() {
        let sampler = ChartSampler::new(*n, j.radius(), 10, SEED + 3 * idx as u64);
        let mut rng = sampler.aux_rng();
        for x in sampler.real_points() {
            let c = VectorField::random(*n, 2, &mut rng);
            let (u, v) = (random_vector(&mut rng, *n), random_vector(&mut rng, *n));
            worst1 = worst1.max(check_identity_1(j, &c, &x, &u).unwrap());
            worst2 = worst2.max(check_identity_2(j, &x, &u, &v).unwrap());
            configs += 1;
        }
    }
    outcome(
        worst1 <= 1e-8 && worst2 <= 1e-8,
        format!("configs={configs} identity1={worst1:.3e} identity2={worst2:.3e} tol=1e-8"),
    )
}

fn eigen_and_exactness() -> Outcome {
    let mut worst: f64 = 0.0;
    let (mut exact, mut points) = (0, 0);
    for (idx, (n, j)) in generated_fields().iter().enumerate().step_by(3) {
        let sampler = ChartSampler::new(*n, j.radius(), 100, SEED + 5 * idx as u64);
        for z in sampler.complex_points(j.radius() / 100.0) {
            let jz = j.eval(&z).unwrap();
            let (pp, pm) = eigenprojections(j, &z).unwrap();
            for r in [
                (&pp * &pp - &pp).norm(),
                (&pm * &pm - &pm).norm(),
                (&jz * &pp - &pp * I).norm(),
                (&jz * &pm + &pm * I).norm(),
                (&pp * &pm).norm(),
                (&pp + &pm - identity(*n)).norm(),
            ] {
                worst = worst.max(r);
            }
            exact += usize::from(check_exactness(j, &z).unwrap());
            points += 1;
        }
    }
    outcome(
        worst <= 1e-10 && exact == points,
        format!("points={points} exact={exact} max_projection_residual={worst:.3e} tol=1e-10"),
    )
}

fn involutivity_link() -> Outcome {
    let mut worst_free: f64 = 0.0;
    let mut free = 0;
    for (idx, &(n, d)) in [(2, 1), (4, 1), (4, 2), (6, 1), (6, 2)].iter().enumerate() {
        let j = AcsGenerator::new(n, d, 0.2, SEED + idx as u64)
            .kind(AcsKind::Integrable)
            .generate()
            .unwrap();
        let report =
            check_involutivity(&j, &ChartSampler::new(n, j.radius(), 8, SEED + idx as u64))
                .unwrap();
        worst_free = worst_free.max(report.max_closure_residual);
        free += 1;
    }
    let (mut twisted, mut separated) = (0, 0);
    let mut min_closure = f64::INFINITY;
    for idx in 0..8u64 {
        let n = if idx % 2 == 0 { 4 } else { 6 };
        let j = AcsGenerator::new(n, 1, 0.4, SEED + 100 + idx)
            .generate()
            .unwrap();
        let report =
            check_involutivity(&j, &ChartSampler::new(n, j.radius(), 8, SEED + idx)).unwrap();
        if report.max_section_torsion >= 0.1 {
            twisted += 1;
            min_closure = min_closure.min(report.max_closure_residual);
            separated += usize::from(report.max_closure_residual >= 1e-3);
        }
    }
    outcome(
        worst_free <= CLOSURE_TOL && twisted >= 5 && separated == twisted,
        format!(
            "torsion_free_fields={free} max_closure={worst_free:.3e} tol={CLOSURE_TOL:e}; \
             fields_with_torsion>=0.1: {twisted} min_closure={min_closure:.3e} bound=1e-3"
        ),
    )
}

fn sweep() -> Vec<Fixture> {
    let mut fs = named_fixtures();
    fs.extend(random_fixtures(SEED, 200).unwrap());
    fs
}

fn meta_equivalence(fixtures: &[Fixture]) -> Outcome {
    let (mut agree, mut total, mut integrable, mut conditions) = (0, 0, 0, 0);
    let mut max_dim = 0;
    for f in fixtures {
        let i = f.structure.as_ref().unwrap();
        if !check_iv(&f.pair, i) {
            continue;
        }
        let eq = subalgebra_equivalence(&f.pair, i).unwrap();
        total += 1;
        agree += usize::from(eq.agree);
        integrable += usize::from(eq.criterion);
        conditions += usize::from(eq.spans && eq.meets_in_h);
        max_dim = max_dim.max(f.pair.dim());
    }
    outcome(
        agree == total && conditions == total && total >= 200 + 3 && max_dim <= 8,
        format!("fixtures={total} agree={agree} conditions_bc={conditions} integrable={integrable} max_dim={max_dim}"),
    )
}

fn bijection(fixtures: &[Fixture]) -> Outcome {
    let conventions = [SignConvention::PlusIOnK, SignConvention::MinusIOnK];
    let mut worst = [0.0f64; 2];
    let mut checked = 0;
    for f in fixtures {
        let i = f.structure.as_ref().unwrap();
        if !check_iv(&f.pair, i) || !integrability_criterion(&f.pair, i) {
            continue;
        }
        let k = build_k(&f.pair, i).unwrap();
        if !check_k0(&f.pair, &k).unwrap().pass() || f.pair.v_dim() == 0 {
            continue;
        }
        for (c, w) in conventions.iter().zip(worst.iter_mut()) {
            let ri = roundtrip_structure_with(&f.pair, i, *c).unwrap();
            let rk = roundtrip_subalgebra_with(&f.pair, &k, *c).unwrap();
            *w = w.max(ri).max(rk);
        }
        checked += 1;
    }
    let achieving: Vec<bool> = worst.iter().map(|&w| w <= 1e-9).collect();
    outcome(
        achieving == [true, false] && checked > 0,
        format!(
            "fixtures={checked} plus_i_on_k={:.3e} minus_i_on_k={:.3e} tol=1e-9 chosen=plus_i_on_k",
            worst[0], worst[1]
        ),
    )
}

fn flags() -> Outcome {
    let start = Instant::now();
    let all = enumerate_flags(6, 3);
    let (mut passed, mut worst_ad) = (0, 0.0f64);
    let mut failures = Vec::new();
    for (idx, (a, f)) in all.iter().enumerate() {
        let r =
            build_flag_data(a, f, SEED + idx as u64, MIN_UNITARIES).and_then(|d| verify_flag(&d));
        match r {
            Ok(r) if r.pass() && r.unitaries >= 10 => {
                passed += 1;
                worst_ad = worst_ad.max(r.ad_invariance);
            }
            _ => failures.push(format!("{:?}/{:?}", a.blocks(), f.ranks(a))),
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        failures.is_empty() && secs <= 120.0,
        format!(
            "flags={} passed={passed} unitaries_per_flag={MIN_UNITARIES} max_ad_invariance={worst_ad:.3e} \
             time={secs:.1}s failures={failures:?}",
            all.len()
        ),
    )
}

fn determinism() -> Outcome {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_nlverify"))
            .args(["--seed", "11", "all", "--count", "40"])
            .output()
            .expect("binary runs")
    };
    let (a, b) = (run(), run());
    let same = a.stdout == b.stdout && !a.stdout.is_empty();
    outcome(
        same && a.status.code() == Some(0),
        format!(
            "bytes={} identical={same} exit={:?}",
            a.stdout.len(),
            a.status.code()
        ),
    )
}

fn main() {
    let fixtures = sweep();
    let criteria: Vec<Criterion> = vec![
        (
            "1 torsion two-formula equivalence",
            Box::new(torsion_equivalence),
        ),
        ("2 constant structure torsion", Box::new(constant_torsion)),
        ("3 derivative identities", Box::new(derivative_identities)),
        (
            "4 eigenprojections and exactness",
            Box::new(eigen_and_exactness),
        ),
        ("5 involutivity and torsion", Box::new(involutivity_link)),
        (
            "6 criterion and subalgebra equivalence",
            Box::new(|| meta_equivalence(&fixtures)),
        ),
        (
            "7 bijection round trip and sign convention",
            Box::new(|| bijection(&fixtures)),
        ),
        ("8 flag verification", Box::new(flags)),
        ("9 report determinism", Box::new(determinism)),
    ];
    let mut failed = 0;
    for (name, run) in &criteria {
        let o = run();
        println!(
            "{} criterion {name}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
        failed += usize::from(!o.pass);
    }
    println!(
        "acceptance: {} of {} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}

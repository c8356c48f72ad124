use std::path::PathBuf;

use nlverify::chart::{
    check_identity_1, check_identity_2, torsion_bracket, torsion_pointwise, AcsGenerator, AcsKind,
    ChartSampler, OperatorField, VectorField,
};
use nlverify::flag::{
    build_flag_data, enumerate_flags, flag_from_text, verify_flag, FlagSpec, StarAlgebra,
};
use nlverify::lie::{
    build_k, check_iv, check_k0, fixture_from_text, integrability_report, named_fixtures,
    nu_iso_check, random_fixtures, roundtrip_structure, roundtrip_structure_with,
    roundtrip_subalgebra, subalgebra_equivalence, validate_algebra, Fixture, SignConvention,
};
use nlverify::{Error, Result};

use crate::report::{Outcome, Report};

/// Default bound for torsion residuals and formula discrepancy.
pub const TORSION_TOL: f64 = 1e-6;
/// Default bound for both round-trip residuals.
pub const ROUNDTRIP_TOL: f64 = 1e-9;
pub const DEFAULT_TORSION_SAMPLES: usize = 20;
pub const DEFAULT_UNITARIES: usize = 10;
pub const DEFAULT_SWEEP: usize = 200;

#[derive(Debug, Clone)]
pub struct Generate {
    pub n: usize,
    pub d: u32,
    pub eps: f64,
    pub kind: AcsKind,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub seed: u64,
    pub samples: Option<usize>,
    pub tol: Option<f64>,
    pub inputs: Vec<PathBuf>,
    pub generate: Option<Generate>,
    pub count: usize,
    pub exhaustive: bool,
}

fn read(path: &PathBuf) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))
}

fn kind_label(kind: AcsKind) -> &'static str {
    match kind {
        AcsKind::Generic => "generic",
        AcsKind::Integrable => "integrable",
    }
}

struct TorsionStats {
    structure: f64,
    discrepancy: f64,
    identity1: f64,
    identity2: f64,
    antisymmetry: f64,
    torsion: f64,
}

fn torsion_stats(j: &OperatorField, samples: usize, seed: u64) -> Result<TorsionStats> {
    let n = j.dim();
    let sampler = ChartSampler::new(n, j.radius(), samples, seed);
    let mut rng = sampler.aux_rng();
    let mut s = TorsionStats {
        structure: 0.0,
        discrepancy: 0.0,
        identity1: 0.0,
        identity2: 0.0,
        antisymmetry: 0.0,
        torsion: 0.0,
    };
    for x in sampler.real_points() {
        s.structure = s.structure.max(j.structure_residual(&x)?);
        let a = VectorField::random(n, 2, &mut rng);
        let b = VectorField::random(n, 2, &mut rng);
        let (u, v) = (a.eval(&x)?, b.eval(&x)?);
        let tb = torsion_bracket(j, &a, &b, &x)?;
        let tp = torsion_pointwise(j, &u, &v, &x)?;
        let swapped = torsion_pointwise(j, &v, &u, &x)?;
        s.discrepancy = s.discrepancy.max((&tb - &tp).norm() / tb.norm().max(1.0));
        s.antisymmetry = s.antisymmetry.max((&tp + &swapped).norm());
        s.identity1 = s.identity1.max(check_identity_1(j, &a, &x, &v)?);
        s.identity2 = s.identity2.max(check_identity_2(j, &x, &u, &v)?);
        s.torsion = s.torsion.max(tp.norm());
    }
    Ok(s)
}

pub fn torsion(cfg: &RunConfig, r: &mut Report) {
    r.section("torsion");
    let tol = cfg.tol.unwrap_or(TORSION_TOL);
    let samples = cfg.samples.unwrap_or(DEFAULT_TORSION_SAMPLES);
    r.real("tolerance", tol);
    r.value("samples", samples);

    let mut fields: Vec<(String, Result<OperatorField>)> = Vec::new();
    if cfg.inputs.is_empty() {
        let g = cfg.generate.clone().unwrap_or(Generate {
            n: 4,
            d: 1,
            eps: 0.1,
            kind: AcsKind::Generic,
        });
        let label = format!(
            "generated n={} d={} eps={} kind={} seed={}",
            g.n,
            g.d,
            crate::report::float(g.eps),
            kind_label(g.kind),
            cfg.seed
        );
        let field = AcsGenerator::new(g.n, g.d, g.eps, cfg.seed)
            .kind(g.kind)
            .generate();
        fields.push((label, field));
    } else {
        for p in &cfg.inputs {
            let field = read(p).and_then(|t| OperatorField::from_text(&t));
            fields.push((p.display().to_string(), field));
        }
    }

    for (idx, (label, field)) in fields.into_iter().enumerate() {
        let key = |s: &str| format!("field.{idx}.{s}");
        r.value(&key("source"), label);
        let j = match field {
            Ok(j) => j,
            Err(e) => {
                r.error(&key("load"), &e);
                continue;
            }
        };
        r.value(&key("dim"), j.dim());
        r.value(&key("degree"), j.degree());
        r.real(&key("radius"), j.radius());
        match torsion_stats(&j, samples, cfg.seed ^ 0x7015) {
            Ok(s) => {
                r.real(&key("max_structure_residual"), s.structure);
                r.real(&key("max_formula_discrepancy"), s.discrepancy);
                r.real(&key("max_identity1_residual"), s.identity1);
                r.real(&key("max_identity2_residual"), s.identity2);
                r.real(&key("max_antisymmetry_residual"), s.antisymmetry);
                r.real(&key("max_torsion_norm"), s.torsion);
                r.check(&key("formula_discrepancy"), s.discrepancy <= tol);
                r.check(&key("identity1"), s.identity1 <= tol);
                r.check(&key("identity2"), s.identity2 <= tol);
                r.check(&key("antisymmetry"), s.antisymmetry <= tol);
            }
            Err(e) => r.error(&key("evaluate"), &e),
        }
    }
}

fn load_fixtures(cfg: &RunConfig, r: &mut Report) -> Vec<Fixture> {
    if cfg.inputs.is_empty() {
        let mut out = named_fixtures();
        match random_fixtures(cfg.seed, cfg.count) {
            Ok(fs) => out.extend(fs),
            Err(e) => r.error("fixtures", &e),
        }
        r.value(
            "fixtures.source",
            format!("named+random seed={} count={}", cfg.seed, cfg.count),
        );
        return out;
    }
    let mut out = Vec::new();
    for (idx, p) in cfg.inputs.iter().enumerate() {
        match read(p).and_then(|t| fixture_from_text(&t)) {
            Ok(f) => out.push(f),
            Err(e) => r.error(&format!("input.{idx}"), &e),
        }
    }
    out
}

/// Algebra and pair gate; false if the fixture cannot be used further.
fn gate(f: &Fixture, key: &dyn Fn(&str) -> String, r: &mut Report) -> bool {
    let alg = validate_algebra(f.pair.algebra());
    if !alg.pass {
        r.error(&key("algebra"), &Error::InvalidAlgebra(alg.describe()));
        return false;
    }
    let pair = f.pair.validate();
    if !pair.pass {
        r.error(
            &key("pair"),
            &Error::InvalidPair(format!(
                "h closure {:.3e}, automorphism {:.3e}, h preserved {:.3e}",
                pair.h_closure_residual, pair.automorphism_residual, pair.h_preserved_residual
            )),
        );
        return false;
    }
    true
}

pub fn invariant(cfg: &RunConfig, r: &mut Report) {
    r.section("invariant");
    let fixtures = load_fixtures(cfg, r);
    r.value("fixtures", fixtures.len());
    let (mut agree, mut integrable, mut skipped) = (0usize, 0usize, 0usize);
    for (idx, f) in fixtures.iter().enumerate() {
        let key = |s: &str| format!("fixture.{idx:03}.{s}");
        r.value(&key("name"), &f.name);
        r.value(
            &key("dims"),
            format!(
                "g={} h={} v={}",
                f.pair.dim(),
                f.pair.h_dim(),
                f.pair.v_dim()
            ),
        );
        if !gate(f, &key, r) {
            continue;
        }
        let Some(i) = &f.structure else {
            r.value(&key("structure"), "none");
            skipped += 1;
            continue;
        };
        let iv = check_iv(&f.pair, i);
        r.value(&key("check_iv"), iv);
        if !iv {
            skipped += 1;
            continue;
        }
        let mut run = || -> Result<()> {
            let crit = integrability_report(&f.pair, i)?;
            r.value(&key("criterion"), crit.pass);
            r.real(&key("criterion_residual"), crit.max_residual);
            let k = build_k(&f.pair, i)?;
            r.value(&key("k_dim"), k.dim());
            let k0 = check_k0(&f.pair, &k)?;
            r.value(
                &key("k0"),
                format!(
                    "closed={} spans={} meets_in_h={} invariant={}",
                    k0.closed, k0.spans, k0.meets_in_h, k0.invariant
                ),
            );
            r.real(&key("closure_residual"), k0.closure_residual);
            r.value(&key("nu_iso"), nu_iso_check(&f.pair, &k));
            if k0.pass() {
                r.real(&key("roundtrip"), roundtrip_structure(&f.pair, i)?);
            }
            let eq = subalgebra_equivalence(&f.pair, i)?;
            r.check(&key("conditions_bc"), eq.spans && eq.meets_in_h);
            r.check(&key("equivalence"), eq.agree);
            if eq.agree {
                agree += 1;
            }
            if crit.pass {
                integrable += 1;
            }
            Ok(())
        };
        if let Err(e) = run() {
            r.error(&key("run"), &e);
        }
    }
    r.value("agreements", agree);
    r.value("integrable", integrable);
    r.value("skipped", skipped);
}

pub fn roundtrip(cfg: &RunConfig, r: &mut Report) {
    r.section("roundtrip");
    let tol = cfg.tol.unwrap_or(ROUNDTRIP_TOL);
    r.real("tolerance", tol);
    r.value("sign_convention", "plus_i_on_k");
    let fixtures = load_fixtures(cfg, r);
    let (mut worst_i, mut worst_k, mut checked) = (0.0f64, 0.0f64, 0usize);
    for (idx, f) in fixtures.iter().enumerate() {
        let key = |s: &str| format!("fixture.{idx:03}.{s}");
        if !gate(f, &key, r) {
            continue;
        }
        let Some(i) = &f.structure else { continue };
        if !check_iv(&f.pair, i) || !integrability_report(&f.pair, i).is_ok_and(|c| c.pass) {
            continue;
        }
        let run = || -> Result<(f64, f64, f64)> {
            let rt_i = roundtrip_structure(&f.pair, i)?;
            let k = build_k(&f.pair, i)?;
            let rt_k = roundtrip_subalgebra(&f.pair, &k)?;
            let flipped = roundtrip_structure_with(&f.pair, i, SignConvention::MinusIOnK)?;
            Ok((rt_i, rt_k, flipped))
        };
        match run() {
            Ok((rt_i, rt_k, flipped)) => {
                r.value(&key("name"), &f.name);
                r.real(&key("structure_residual"), rt_i);
                r.real(&key("subalgebra_residual"), rt_k);
                r.real(&key("opposite_convention_residual"), flipped);
                r.check(&key("roundtrip"), rt_i <= tol && rt_k <= tol);
                worst_i = worst_i.max(rt_i);
                worst_k = worst_k.max(rt_k);
                checked += 1;
            }
            Err(e) => r.error(&key("run"), &e),
        }
    }
    r.value("checked", checked);
    r.real("max_structure_residual", worst_i);
    r.real("max_subalgebra_residual", worst_k);
}

fn default_flags() -> Vec<(StarAlgebra, FlagSpec)> {
    let specs: [(&[usize], &[&[usize]]); 4] = [
        (&[2], &[&[1]]),
        (&[2], &[&[2]]),
        (&[3], &[&[1], &[2]]),
        (&[2, 2], &[&[1, 0], &[1, 2]]),
    ];
    specs
        .iter()
        .map(|(b, rs)| {
            let a = StarAlgebra::new(b.to_vec()).expect("valid blocks");
            let ranks: Vec<Vec<usize>> = rs.iter().map(|r| r.to_vec()).collect();
            let f = FlagSpec::from_ranks(&a, &ranks).expect("valid flag");
            (a, f)
        })
        .collect()
}

fn describe_flag(a: &StarAlgebra, f: &FlagSpec) -> String {
    let join = |xs: &[usize]| {
        xs.iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    };
    let ranks: Vec<String> = f.ranks(a).iter().map(|r| join(r)).collect();
    format!("blocks {}; ranks {}", join(a.blocks()), ranks.join(" | "))
}

pub fn flag(cfg: &RunConfig, r: &mut Report) {
    r.section("flag");
    let unitaries = cfg.samples.unwrap_or(DEFAULT_UNITARIES);
    r.value("unitaries", unitaries);
    let flags: Vec<(StarAlgebra, FlagSpec)> = if !cfg.inputs.is_empty() {
        let mut out = Vec::new();
        for (idx, p) in cfg.inputs.iter().enumerate() {
            match read(p).and_then(|t| flag_from_text(&t)) {
                Ok(x) => out.push(x),
                Err(e) => r.error(&format!("input.{idx}"), &e),
            }
        }
        out
    } else if cfg.exhaustive {
        enumerate_flags(6, 3)
    } else {
        default_flags()
    };
    r.value("flags", flags.len());
    let (mut passed, mut worst_ad, mut worst_rt) = (0usize, 0.0f64, 0.0f64);
    for (idx, (a, f)) in flags.iter().enumerate() {
        let key = |s: &str| format!("flag.{idx:05}.{s}");
        let run = || -> Result<nlverify::flag::FlagReport> {
            let data = build_flag_data(a, f, cfg.seed.wrapping_add(idx as u64), unitaries)?;
            verify_flag(&data)
        };
        match run() {
            Ok(rep) => {
                if !cfg.exhaustive {
                    r.value(&key("spec"), describe_flag(a, f));
                    r.value(
                        &key("dims"),
                        format!("h={} v={} k={}", rep.dim_h, rep.dim_v, rep.dim_k),
                    );
                    r.value(
                        &key("k0"),
                        format!(
                            "closed={} spans={} meets_in_h={} invariant={}",
                            rep.k0.closed, rep.k0.spans, rep.k0.meets_in_h, rep.k0.invariant
                        ),
                    );
                    r.value(&key("nu_iso"), rep.nu_iso);
                    r.value(&key("beta_valid"), rep.beta_valid);
                    r.value(&key("criterion"), rep.criterion);
                    r.real(&key("roundtrip_structure"), rep.roundtrip_structure);
                    r.real(&key("roundtrip_subalgebra"), rep.roundtrip_subalgebra);
                    r.real(&key("ad_invariance"), rep.ad_invariance);
                    r.value(&key("dimension_balance"), rep.dimension_balance);
                }
                worst_ad = worst_ad.max(rep.ad_invariance);
                worst_rt = worst_rt.max(rep.roundtrip_structure.max(rep.roundtrip_subalgebra));
                if rep.pass() {
                    passed += 1;
                }
                r.check(&key("verified"), rep.pass());
            }
            Err(e) => {
                if matches!(e, Error::InvalidFlag(_)) {
                    r.raise(Outcome::InvalidFlag);
                }
                r.error(&key("run"), &e);
            }
        }
    }
    r.value("passed", passed);
    r.real("max_ad_invariance", worst_ad);
    r.real("max_roundtrip", worst_rt);
}

pub fn all(cfg: &RunConfig, r: &mut Report) {
    let builtin = RunConfig {
        inputs: Vec::new(),
        ..cfg.clone()
    };
    torsion(&builtin, r);
    invariant(&builtin, r);
    roundtrip(&builtin, r);
    flag(&builtin, r);
}

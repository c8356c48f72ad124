//! Named and randomly generated homogeneous pairs with partial structures.

use nalgebra::{DMatrix, DVector};
use rand::Rng;

use crate::chart::field::standard_structure;
use crate::error::{Error, Result};
use crate::flag::{build_flag_data, FlagSpec, StarAlgebra};
use crate::lie::algebra::LieAlgebra;
use crate::lie::pair::{c_v, c_v_inverse, HomogeneousPair, PartialStructure};
use crate::lie::structure::integrability_criterion;
use crate::linalg::{c64, CMatrix, C64};
use crate::rng::{normal, normal_matrix, orthogonal, stream};

#[derive(Debug, Clone, PartialEq)]
pub struct Fixture {
    pub name: String,
    pub pair: HomogeneousPair,
    pub structure: Option<PartialStructure>,
}

impl Fixture {
    pub fn new(
        name: impl Into<String>,
        pair: HomogeneousPair,
        structure: Option<PartialStructure>,
    ) -> Self {
        Fixture {
            name: name.into(),
            pair,
            structure,
        }
    }
}

fn unit(m: usize, i: usize) -> DVector<f64> {
    DVector::from_fn(m, |r, _| if r == i { 1.0 } else { 0.0 })
}

/// Operator on `g` from one on the quotient, with `h`/`V` the coordinate split.
fn lift(pair: &HomogeneousPair, ibar: &DMatrix<f64>) -> Result<PartialStructure> {
    c_v_inverse(pair, ibar)
}

/// `Q1 diag(e^{s_i}) Q2` with `|s_i| <= 1`.
fn well_conditioned(rng: &mut impl Rng, n: usize) -> DMatrix<f64> {
    let q1 = orthogonal(rng, n);
    let q2 = orthogonal(rng, n);
    let s = DVector::from_fn(n, |_, _| (0.5 * normal(rng)).clamp(-1.0, 1.0).exp());
    q1 * DMatrix::from_diagonal(&s) * q2
}

/// `R J0 R^{-1}` for a random well-conditioned `R`.
pub fn random_complex_structure(rng: &mut impl Rng, n: usize) -> DMatrix<f64> {
    let r = well_conditioned(rng, n);
    let rinv = r.clone().try_inverse().expect("well conditioned");
    r * standard_structure(n) * rinv
}

fn rotation_e3(g: &LieAlgebra, t: f64) -> DMatrix<f64> {
    g.exp_ad(&(unit(g.dim(), 2) * t))
}

/// `su(2)` over `h = span{e3}`, `V = span{e1, e2}`, `I e1 = e2`, with
/// samples `exp(t ad e3)`.
pub fn su2_u1() -> Fixture {
    su2_u1_signed(1.0)
}

fn su2_u1_signed(sign: f64) -> Fixture {
    let g = LieAlgebra::su2();
    let samples = [0.4, 1.3, 2.9, std::f64::consts::PI]
        .iter()
        .map(|&t| rotation_e3(&g, t))
        .collect();
    let h = DMatrix::from_column_slice(3, 1, &[0.0, 0.0, 1.0]);
    let v = DMatrix::from_column_slice(3, 2, &[1.0, 0.0, 0.0, 0.0, 1.0, 0.0]);
    let pair = HomogeneousPair::new(g, h, v, samples).expect("valid pair");
    let i = lift(&pair, &(standard_structure(2) * sign)).expect("rotation is in I_0");
    Fixture::new("su2_u1", pair, Some(i))
}

pub fn abelian_plane() -> Fixture {
    let pair =
        HomogeneousPair::coordinate_split(LieAlgebra::abelian(2), 0, vec![DMatrix::identity(2, 2)])
            .expect("valid pair");
    let i = lift(&pair, &standard_structure(2)).expect("J0 is in I_0");
    Fixture::new("abelian_plane", pair, Some(i))
}

/// Abelian `R^4` with `h = 0` and the samples `-id` and the swap of the two
/// coordinate planes, neither of which is `exp(ad_z)` for `z` in `h`.
pub fn abelian_r4() -> Fixture {
    let mut swap = DMatrix::zeros(4, 4);
    for (a, b) in [(0, 2), (1, 3), (2, 0), (3, 1)] {
        swap[(a, b)] = 1.0;
    }
    let samples = vec![-DMatrix::<f64>::identity(4, 4), swap];
    let pair =
        HomogeneousPair::coordinate_split(LieAlgebra::abelian(4), 0, samples).expect("valid pair");
    let i = lift(&pair, &standard_structure(4)).expect("J0 commutes with the samples");
    Fixture::new("abelian_r4", pair, Some(i))
}

fn heisenberg_r() -> LieAlgebra {
    LieAlgebra::heisenberg().direct_sum(&LieAlgebra::abelian(1))
}

/// `heis_3 ⊕ R` with `h = 0`, `I e1 = e2`, `I e3 = e4`, and the automorphism
/// `diag(-1, -1, 1, 1)`.
pub fn heisenberg_integrable() -> Fixture {
    let flip = DMatrix::from_diagonal(&DVector::from_vec(vec![-1.0, -1.0, 1.0, 1.0]));
    let pair =
        HomogeneousPair::coordinate_split(heisenberg_r(), 0, vec![flip]).expect("valid pair");
    let i = lift(&pair, &standard_structure(4)).expect("commutes with the flip");
    Fixture::new("heisenberg_integrable", pair, Some(i))
}

/// First random complex structure on `heis_3 ⊕ R` (with `h = 0`, seeds
/// `seed, seed + 1, ...`) that fails the integrability criterion.
pub fn heisenberg_false(seed: u64) -> Fixture {
    let pair = HomogeneousPair::coordinate_split(heisenberg_r(), 0, vec![]).expect("valid pair");
    for s in seed.. {
        let mut rng = stream(s, 0);
        let i = lift(&pair, &random_complex_structure(&mut rng, 4))
            .expect("no samples to commute with");
        if !integrability_criterion(&pair, &i) {
            return Fixture::new(format!("heisenberg_false_{s}"), pair, Some(i));
        }
    }
    unreachable!("seed space exhausted")
}

/// `u(2) = su(2) ⊕ R` with `h = 0`, `I e1 = e2`, `I e3 = e4`, invariant
/// under `exp(t ad e3)`.
pub fn u2_hopf() -> Fixture {
    let g = LieAlgebra::su2().direct_sum(&LieAlgebra::abelian(1));
    let samples = [0.7, 2.2].iter().map(|&t| rotation_e3(&g, t)).collect();
    let pair = HomogeneousPair::coordinate_split(g, 0, samples).expect("valid pair");
    let i = lift(&pair, &standard_structure(4)).expect("rotations commute");
    Fixture::new("u2_hopf", pair, Some(i))
}

fn sl2c() -> LieAlgebra {
    let z = c64(0.0, 0.0);
    let o = c64(1.0, 0.0);
    let h = CMatrix::from_row_slice(2, 2, &[o, z, z, -o]);
    let e = CMatrix::from_row_slice(2, 2, &[z, o, z, z]);
    let f = CMatrix::from_row_slice(2, 2, &[z, z, o, z]);
    let i = c64(0.0, 1.0);
    let basis = vec![h.clone(), e.clone(), f.clone(), h * i, e * i, f * i];
    LieAlgebra::from_matrix_basis(basis).expect("sl(2, C) is closed")
}

fn multiplication_by_i(sign: f64) -> DMatrix<f64> {
    let mut j = DMatrix::zeros(6, 6);
    for a in 0..3 {
        j[(a + 3, a)] = sign;
        j[(a, a + 3)] = -sign;
    }
    j
}

/// `sl(2, C)` as a real algebra with `h = 0` and `I` multiplication by `i`,
/// invariant under `Ad` of a fixed element of `SL(2, C)`.
pub fn sl2c_complex() -> Fixture {
    let g = sl2c();
    let gm = CMatrix::from_row_slice(
        2,
        2,
        &[c64(1.0, 0.5), c64(0.3, 0.0), c64(-0.2, 0.1), c64(0.8, 0.0)],
    );
    let ad = g.conjugation_action(&gm).expect("Ad preserves sl(2, C)");
    let pair = HomogeneousPair::coordinate_split(g, 0, vec![ad]).expect("valid pair");
    let i = lift(&pair, &multiplication_by_i(1.0)).expect("Ad is complex linear");
    Fixture::new("sl2c_complex", pair, Some(i))
}

fn samelson(pair: &HomogeneousPair) -> PartialStructure {
    let mut j = DMatrix::zeros(6, 6);
    for (a, b) in [(0, 1), (3, 4), (2, 5)] {
        j[(b, a)] = 1.0;
        j[(a, b)] = -1.0;
    }
    lift(pair, &j).expect("invariant structure")
}

/// `su(2) ⊕ su(2)` with `h = 0` and `I e1 = e2`, `I f1 = f2`, `I e3 = f3`.
pub fn su2_su2_samelson() -> Fixture {
    let g = LieAlgebra::su2().direct_sum(&LieAlgebra::su2());
    let mut z = DVector::zeros(6);
    z[2] = 0.8;
    z[5] = -1.7;
    let pair =
        HomogeneousPair::coordinate_split(g.clone(), 0, vec![g.exp_ad(&z)]).expect("valid pair");
    let i = samelson(&pair);
    Fixture::new("su2_su2_samelson", pair, Some(i))
}

/// The named fixtures, with the first false Heisenberg instance from seed 0.
pub fn named_fixtures() -> Vec<Fixture> {
    vec![
        su2_u1(),
        abelian_plane(),
        abelian_r4(),
        heisenberg_integrable(),
        heisenberg_false(0),
        u2_hopf(),
        sl2c_complex(),
        su2_su2_samelson(),
    ]
}

/// Number of generator families cycled by [`random_fixtures`].
pub const FAMILIES: usize = 8;

fn abelian_family(rng: &mut impl Rng) -> Result<Fixture> {
    let m = rng.random_range(2..=8);
    let dv = 2 * rng.random_range(1..=m / 2);
    let dh = m - dv;
    let ibar = random_complex_structure(rng, dv);
    let mut commuting = DMatrix::zeros(m, m);
    if dh > 0 {
        commuting
            .view_mut((0, 0), (dh, dh))
            .copy_from(&well_conditioned(rng, dh));
    }
    let (a, b) = (normal(rng), normal(rng));
    let (a, b) = if a.abs() + b.abs() < 0.1 {
        (1.0, b)
    } else {
        (a, b)
    };
    commuting
        .view_mut((dh, dh), (dv, dv))
        .copy_from(&(DMatrix::identity(dv, dv) * a + &ibar * b));
    let samples = vec![-DMatrix::<f64>::identity(m, m), commuting];
    let pair = HomogeneousPair::coordinate_split(LieAlgebra::abelian(m), dh, samples)?;
    let i = lift(&pair, &ibar)?;
    Ok(Fixture::new("abelian", pair, Some(i)))
}

fn su2_family(rng: &mut impl Rng) -> Result<Fixture> {
    if rng.random_bool(0.5) {
        let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
        let mut f = su2_u1_signed(sign);
        f.name = "su2_invariant".into();
        Ok(f)
    } else {
        let g = LieAlgebra::su2();
        let h = DMatrix::from_column_slice(3, 1, &[0.0, 0.0, 1.0]);
        let v = DMatrix::from_column_slice(3, 2, &[1.0, 0.0, 0.0, 0.0, 1.0, 0.0]);
        let pair = HomogeneousPair::new(g, h, v, vec![DMatrix::identity(3, 3)])?;
        let i = lift(&pair, &random_complex_structure(rng, 2))?;
        Ok(Fixture::new("su2_random", pair, Some(i)))
    }
}

fn heisenberg_family(rng: &mut impl Rng) -> Result<Fixture> {
    if rng.random_bool(0.5) {
        let pair = HomogeneousPair::coordinate_split(heisenberg_r(), 0, vec![])?;
        let i = lift(&pair, &random_complex_structure(rng, 4))?;
        Ok(Fixture::new("heisenberg_random", pair, Some(i)))
    } else {
        // h = span{e3, e4} is central; V = span{e1, e2}.
        let id = DMatrix::<f64>::identity(4, 4);
        let h = id.columns(2, 2).into_owned();
        let v = id.columns(0, 2).into_owned();
        let flip = DMatrix::from_diagonal(&DVector::from_vec(vec![-1.0, -1.0, 1.0, 1.0]));
        let pair = HomogeneousPair::new(heisenberg_r(), h, v, vec![flip])?;
        let i = lift(&pair, &random_complex_structure(rng, 2))?;
        Ok(Fixture::new("heisenberg_central", pair, Some(i)))
    }
}

fn u2_family(rng: &mut impl Rng) -> Result<Fixture> {
    if rng.random_bool(0.5) {
        Ok(u2_hopf())
    } else {
        let g = LieAlgebra::su2().direct_sum(&LieAlgebra::abelian(1));
        let pair = HomogeneousPair::coordinate_split(g, 0, vec![])?;
        let i = lift(&pair, &random_complex_structure(rng, 4))?;
        Ok(Fixture::new("u2_random", pair, Some(i)))
    }
}

fn sl2c_family(rng: &mut impl Rng) -> Result<Fixture> {
    let g = sl2c();
    if rng.random_bool(0.5) {
        let x = CMatrix::from_fn(2, 2, |_, _| C64::new(0.5 * normal(rng), 0.5 * normal(rng)));
        let x = &x - CMatrix::identity(2, 2) * (x.trace() * 0.5);
        let ad = g.conjugation_action(&x.exp())?;
        let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
        let pair = HomogeneousPair::coordinate_split(g, 0, vec![ad])?;
        let i = lift(&pair, &multiplication_by_i(sign))?;
        Ok(Fixture::new("sl2c_complex", pair, Some(i)))
    } else {
        let pair = HomogeneousPair::coordinate_split(g, 0, vec![])?;
        let i = lift(&pair, &random_complex_structure(rng, 6))?;
        Ok(Fixture::new("sl2c_random", pair, Some(i)))
    }
}

fn su2_su2_family(rng: &mut impl Rng) -> Result<Fixture> {
    let g = LieAlgebra::su2().direct_sum(&LieAlgebra::su2());
    if rng.random_bool(0.5) {
        let mut z = DVector::zeros(6);
        z[2] = normal(rng);
        z[5] = normal(rng);
        let pair = HomogeneousPair::coordinate_split(g.clone(), 0, vec![g.exp_ad(&z)])?;
        let i = samelson(&pair);
        Ok(Fixture::new("su2_su2_samelson", pair, Some(i)))
    } else {
        let pair = HomogeneousPair::coordinate_split(g, 0, vec![])?;
        let i = lift(&pair, &random_complex_structure(rng, 6))?;
        Ok(Fixture::new("su2_su2_random", pair, Some(i)))
    }
}

/// Flags whose skew-adjoint algebra has real dimension at most 8.
const SMALL_FLAGS: &[(&[usize], &[&[usize]])] = &[
    (&[1, 1], &[&[1, 0]]),
    (&[2], &[&[1]]),
    (&[2, 1], &[&[1, 0]]),
    (&[2, 1], &[&[1, 1]]),
    (&[2, 1, 1], &[&[1, 0, 1]]),
    (&[2, 1, 1], &[&[0, 1, 0], &[1, 1, 1]]),
    (&[2, 2], &[&[1, 1]]),
    (&[2, 2], &[&[1, 0], &[1, 2]]),
];

fn flag_family(rng: &mut impl Rng) -> Result<Fixture> {
    let (blocks, ranks) = SMALL_FLAGS[rng.random_range(0..SMALL_FLAGS.len())];
    let algebra = StarAlgebra::new(blocks.to_vec())?;
    let ranks: Vec<Vec<usize>> = ranks.iter().map(|r| r.to_vec()).collect();
    let flag = FlagSpec::from_ranks(&algebra, &ranks)?;
    let data = build_flag_data(&algebra, &flag, rng.random(), 3)?;
    let i = data.structure()?;
    Ok(Fixture::new("flag", data.pair, Some(i)))
}

/// Re-expresses a fixture through a random complement tilt and a random
/// change of basis of `g`; `I` follows through `c_V` and conjugation.
pub fn disguise(fixture: &Fixture, rng: &mut impl Rng) -> Result<Fixture> {
    let Some(i) = &fixture.structure else {
        return Err(Error::InvalidInput("fixture has no structure".into()));
    };
    let ibar = c_v(&fixture.pair, i)?;
    let (dh, dv) = (fixture.pair.h_dim(), fixture.pair.v_dim());
    let tilted = if dh > 0 && dv > 0 {
        fixture.pair.tilt(&(normal_matrix(rng, dh, dv) * 0.5))?
    } else {
        fixture.pair.clone()
    };
    let i = c_v_inverse(&tilted, &ibar)?;
    let p = well_conditioned(rng, fixture.pair.dim());
    let pinv = p.clone().try_inverse().expect("well conditioned");
    let moved = tilted.transport(&p)?;
    let i = PartialStructure::new(&pinv * i.matrix() * &p)?;
    Ok(Fixture::new(
        format!("{}_disguised", fixture.name),
        moved,
        Some(i),
    ))
}

/// `count` fixtures cycling through the generator families, each disguised
/// by a random tilt and basis change. Fixture `j` depends only on `(seed, j)`.
pub fn random_fixtures(seed: u64, count: usize) -> Result<Vec<Fixture>> {
    (0..count)
        .map(|j| {
            let mut rng = stream(seed, 1000 + j as u64);
            let base = match j % FAMILIES {
                0 => abelian_family(&mut rng),
                1 => su2_family(&mut rng),
                2 => heisenberg_family(&mut rng),
                3 => u2_family(&mut rng),
                4 => sl2c_family(&mut rng),
                5 => su2_su2_family(&mut rng),
                6 => flag_family(&mut rng),
                _ => su2_family(&mut rng),
            }?;
            let mut f = disguise(&base, &mut rng)?;
            f.name = format!("random_{j:03}_{}", base.name);
            Ok(f)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::{check_iv, validate_algebra};

    #[test]
    fn named_fixtures_are_valid() {
        for f in named_fixtures() {
            assert!(validate_algebra(f.pair.algebra()).pass, "{}", f.name);
            assert!(f.pair.validate().pass, "{}", f.name);
            assert!(
                check_iv(&f.pair, f.structure.as_ref().unwrap()),
                "{}",
                f.name
            );
        }
    }

    #[test]
    fn named_criterion_outcomes() {
        let expected = [true, true, true, true, false, true, true, true];
        for (f, want) in named_fixtures().iter().zip(expected) {
            assert_eq!(
                integrability_criterion(&f.pair, f.structure.as_ref().unwrap()),
                want,
                "{}",
                f.name
            );
        }
    }

    #[test]
    fn random_fixtures_are_valid_and_reproducible() {
        let a = random_fixtures(3, 2 * FAMILIES).unwrap();
        for f in &a {
            assert!(validate_algebra(f.pair.algebra()).pass, "{}", f.name);
            assert!(f.pair.validate().pass, "{}", f.name);
            assert!(
                check_iv(&f.pair, f.structure.as_ref().unwrap()),
                "{}",
                f.name
            );
        }
        assert_eq!(a, random_fixtures(3, 2 * FAMILIES).unwrap());
    }
}

//! Flags of projections in finite-dimensional *-algebras `A = ⊕ M_{d_t}(C)`.
//!
//! For a flag `p_1 <= ... <= p_n` of diagonal projections every matrix index
//! gets a level: the least `i` with `(p_i)_{aa} = 1`, or `n + 1`. The pieces
//! of the homogeneous pair are then
//!
//! - `g`: skew-adjoint elements of `A`,
//! - `h`: elements of `g` commuting with every `p_i` (same-level entries),
//! - `V`: elements of `g` with no same-level entries,
//! - `k`: elements of `A` with `b_{ab} = 0` whenever `level(a) > level(b)`,
//!
//! and `H` is sampled by unitaries that are block diagonal over levels.

use nalgebra::{DMatrix, DVector};
use rand::Rng;

use crate::error::{Error, Result};
use crate::lie::{
    beta, check_iv, check_k0, integrability_criterion, nu_iso_check, roundtrip_structure,
    roundtrip_subalgebra, HomogeneousPair, K0Report, LieAlgebra, PartialStructure,
    SubalgebraCandidate, ROUNDTRIP_TOL,
};
use crate::linalg::{CMatrix, CVector, Subspace, C64, DEFAULT_TOL};
use crate::rng::{stream, unitary};

/// Matrix-level bound for `u k u* ⊆ k`.
pub const AD_INVARIANCE_TOL: f64 = 1e-10;

/// Minimum number of sampled flag-commuting unitaries.
pub const MIN_UNITARIES: usize = 10;

const PROJECTION_TOL: f64 = 1e-12;

/// Block-diagonal complex matrices with the given block sizes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarAlgebra {
    blocks: Vec<usize>,
}

/// One real basis element of the skew-adjoint part: `i E_aa`,
/// `E_ab - E_ba` or `i (E_ab + E_ba)` with `a < b` in the same block.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum SkewElement {
    Diagonal(usize),
    Real(usize, usize),
    Imaginary(usize, usize),
}

impl StarAlgebra {
    pub fn new(blocks: Vec<usize>) -> Result<Self> {
        if blocks.is_empty() || blocks.contains(&0) {
            return Err(Error::InvalidFlag(format!(
                "block sizes {blocks:?} must be positive and non-empty"
            )));
        }
        Ok(StarAlgebra { blocks })
    }

    pub fn full_matrix(d: usize) -> Result<Self> {
        Self::new(vec![d])
    }

    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    /// Matrix size `sum d_t`.
    pub fn size(&self) -> usize {
        self.blocks.iter().sum()
    }

    /// `dim_C A = sum d_t^2`, also the real dimension of the skew part.
    pub fn dim(&self) -> usize {
        self.blocks.iter().map(|d| d * d).sum()
    }

    /// Block index of each matrix index.
    pub fn block_of(&self) -> Vec<usize> {
        self.blocks
            .iter()
            .enumerate()
            .flat_map(|(t, &d)| std::iter::repeat_n(t, d))
            .collect()
    }

    pub fn contains(&self, b: &CMatrix) -> bool {
        let n = self.size();
        let block = self.block_of();
        b.shape() == (n, n)
            && (0..n).all(|r| (0..n).all(|c| block[r] == block[c] || b[(r, c)].norm() == 0.0))
    }

    pub fn unit(&self) -> CMatrix {
        CMatrix::identity(self.size(), self.size())
    }

    fn skew_elements(&self) -> Vec<SkewElement> {
        let mut out = Vec::with_capacity(self.dim());
        let mut offset = 0;
        for &d in &self.blocks {
            for a in offset..offset + d {
                out.push(SkewElement::Diagonal(a));
            }
            for a in offset..offset + d {
                for b in (a + 1)..offset + d {
                    out.push(SkewElement::Real(a, b));
                    out.push(SkewElement::Imaginary(a, b));
                }
            }
            offset += d;
        }
        out
    }

    /// Real basis of the skew-adjoint elements.
    pub fn skew_basis(&self) -> Vec<CMatrix> {
        let n = self.size();
        let one = C64::new(1.0, 0.0);
        let i = C64::new(0.0, 1.0);
        self.skew_elements()
            .into_iter()
            .map(|e| {
                let mut x = CMatrix::zeros(n, n);
                match e {
                    SkewElement::Diagonal(a) => x[(a, a)] = i,
                    SkewElement::Real(a, b) => {
                        x[(a, b)] = one;
                        x[(b, a)] = -one;
                    }
                    SkewElement::Imaginary(a, b) => {
                        x[(a, b)] = i;
                        x[(b, a)] = i;
                    }
                }
                x
            })
            .collect()
    }

    /// Complex coordinates of `b ∈ A` in the skew basis; real exactly when `b`
    /// is skew-adjoint. Conjugating the coordinates is `b -> -b*`.
    pub fn coordinates(&self, b: &CMatrix) -> CVector {
        let i = C64::new(0.0, 1.0);
        let half = C64::new(0.5, 0.0);
        let coords: Vec<C64> = self
            .skew_elements()
            .into_iter()
            .map(|e| match e {
                SkewElement::Diagonal(a) => -i * b[(a, a)],
                SkewElement::Real(a, c) => (b[(a, c)] - b[(c, a)]) * half,
                SkewElement::Imaginary(a, c) => (b[(a, c)] + b[(c, a)]) * half / i,
            })
            .collect();
        CVector::from_vec(coords)
    }

    pub fn from_coordinates(&self, c: &CVector) -> CMatrix {
        self.skew_basis()
            .iter()
            .zip(c.iter())
            .fold(CMatrix::zeros(self.size(), self.size()), |acc, (x, &z)| {
                acc + x * z
            })
    }

    pub fn lie_algebra(&self) -> Result<LieAlgebra> {
        LieAlgebra::from_matrix_basis(self.skew_basis())
    }
}

/// A chain of diagonal projections `p_1 <= ... <= p_n`, stored by diagonals.
#[derive(Debug, Clone, PartialEq)]
pub struct FlagSpec {
    diagonals: Vec<Vec<bool>>,
}

impl FlagSpec {
    /// `ranks[i][t]` is the rank of `p_{i+1}` inside block `t`; each projection
    /// covers the leading indices of every block.
    pub fn from_ranks(algebra: &StarAlgebra, ranks: &[Vec<usize>]) -> Result<Self> {
        let mut diagonals = Vec::with_capacity(ranks.len());
        for r in ranks {
            if r.len() != algebra.blocks().len() {
                return Err(Error::InvalidFlag(format!(
                    "{} ranks for {} blocks",
                    r.len(),
                    algebra.blocks().len()
                )));
            }
            let mut diag = Vec::with_capacity(algebra.size());
            for (&rank, &d) in r.iter().zip(algebra.blocks()) {
                if rank > d {
                    return Err(Error::InvalidFlag(format!(
                        "rank {rank} exceeds block size {d}"
                    )));
                }
                diag.extend((0..d).map(|a| a < rank));
            }
            diagonals.push(diag);
        }
        let flag = FlagSpec { diagonals };
        flag.validate(algebra)?;
        Ok(flag)
    }

    /// Accepts diagonal self-adjoint idempotents of `A` that form a chain.
    pub fn from_projections(algebra: &StarAlgebra, projections: &[CMatrix]) -> Result<Self> {
        let n = algebra.size();
        let mut diagonals = Vec::with_capacity(projections.len());
        for (idx, p) in projections.iter().enumerate() {
            if p.shape() != (n, n) {
                return Err(Error::InvalidFlag(format!(
                    "projection {idx} has shape {:?}",
                    p.shape()
                )));
            }
            if (p - p.adjoint()).norm() > PROJECTION_TOL || (p * p - p).norm() > PROJECTION_TOL {
                return Err(Error::InvalidFlag(format!(
                    "p_{} is not an orthogonal projection",
                    idx + 1
                )));
            }
            let off_diagonal =
                (0..n).any(|r| (0..n).any(|c| r != c && p[(r, c)].norm() > PROJECTION_TOL));
            if off_diagonal {
                return Err(Error::InvalidFlag(format!("p_{} is not diagonal", idx + 1)));
            }
            diagonals.push((0..n).map(|a| p[(a, a)].re > 0.5).collect());
        }
        let flag = FlagSpec { diagonals };
        flag.validate(algebra)?;
        Ok(flag)
    }

    pub fn validate(&self, algebra: &StarAlgebra) -> Result<()> {
        if self.diagonals.is_empty() {
            return Err(Error::InvalidFlag(
                "a flag needs at least one projection".into(),
            ));
        }
        let n = algebra.size();
        if let Some(d) = self.diagonals.iter().find(|d| d.len() != n) {
            return Err(Error::InvalidFlag(format!(
                "projection of size {} in algebra of size {n}",
                d.len()
            )));
        }
        for (i, pair) in self.diagonals.windows(2).enumerate() {
            if pair[0].iter().zip(&pair[1]).any(|(&a, &b)| a && !b) {
                return Err(Error::InvalidFlag(format!(
                    "p_{} is not below p_{}",
                    i + 1,
                    i + 2
                )));
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.diagonals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diagonals.is_empty()
    }

    pub fn projections(&self) -> Vec<CMatrix> {
        self.diagonals
            .iter()
            .map(|d| {
                CMatrix::from_diagonal(&CVector::from_iterator(
                    d.len(),
                    d.iter().map(|&x| C64::new(if x { 1.0 } else { 0.0 }, 0.0)),
                ))
            })
            .collect()
    }

    /// Rank of each projection inside each block.
    pub fn ranks(&self, algebra: &StarAlgebra) -> Vec<Vec<usize>> {
        let block = algebra.block_of();
        self.diagonals
            .iter()
            .map(|d| {
                let mut r = vec![0; algebra.blocks().len()];
                for (a, &x) in d.iter().enumerate() {
                    r[block[a]] += usize::from(x);
                }
                r
            })
            .collect()
    }

    /// Level of each index in `1..=n+1`.
    pub fn levels(&self) -> Vec<usize> {
        let size = self.diagonals.first().map_or(0, |d| d.len());
        (0..size)
            .map(|a| {
                self.diagonals
                    .iter()
                    .position(|d| d[a])
                    .map_or(self.diagonals.len() + 1, |i| i + 1)
            })
            .collect()
    }
}

/// Everything attached to one flag.
#[derive(Debug, Clone)]
pub struct FlagData {
    pub algebra: StarAlgebra,
    pub flag: FlagSpec,
    pub pair: HomogeneousPair,
    pub k: SubalgebraCandidate,
    pub unitaries: Vec<CMatrix>,
}

/// Position `(a, b)` may be non-zero in an element of `k`.
fn k_entry(block: &[usize], level: &[usize], a: usize, b: usize) -> bool {
    block[a] == block[b] && level[a] <= level[b]
}

fn flag_unitary(
    algebra: &StarAlgebra,
    levels: &[usize],
    rng: &mut impl Rng,
    phases_only: bool,
) -> CMatrix {
    let n = algebra.size();
    let block = algebra.block_of();
    let mut u = CMatrix::zeros(n, n);
    let mut groups: Vec<(usize, usize)> = (0..n).map(|a| (block[a], levels[a])).collect();
    groups.sort_unstable();
    groups.dedup();
    for key in groups {
        let idx: Vec<usize> = (0..n).filter(|&a| (block[a], levels[a]) == key).collect();
        let w = if phases_only {
            CMatrix::from_diagonal(&CVector::from_iterator(
                idx.len(),
                idx.iter()
                    .map(|_| C64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU))),
            ))
        } else {
            unitary(rng, idx.len())
        };
        for (r, &a) in idx.iter().enumerate() {
            for (c, &b) in idx.iter().enumerate() {
                u[(a, b)] = w[(r, c)];
            }
        }
    }
    u
}

/// Builds `(g, h, V, H samples)` and `k` for a flag. The first unitary is a
/// diagonal phase matrix; the rest are Haar-like on each level block.
pub fn build_flag_data(
    algebra: &StarAlgebra,
    flag: &FlagSpec,
    seed: u64,
    samples: usize,
) -> Result<FlagData> {
    flag.validate(algebra)?;
    let g = algebra.lie_algebra()?;
    let m = g.dim();
    let block = algebra.block_of();
    let levels = flag.levels();
    let elements = algebra.skew_elements();

    let same_level = |e: &SkewElement| match *e {
        SkewElement::Diagonal(_) => true,
        SkewElement::Real(a, b) | SkewElement::Imaginary(a, b) => levels[a] == levels[b],
    };
    let unit = |j: usize| DVector::from_fn(m, |r, _| if r == j { 1.0 } else { 0.0 });
    let h_cols: Vec<DVector<f64>> = (0..m)
        .filter(|&j| same_level(&elements[j]))
        .map(unit)
        .collect();
    let v_cols: Vec<DVector<f64>> = (0..m)
        .filter(|&j| !same_level(&elements[j]))
        .map(unit)
        .collect();
    let to_matrix = |cols: &[DVector<f64>]| {
        if cols.is_empty() {
            DMatrix::zeros(m, 0)
        } else {
            DMatrix::from_columns(cols)
        }
    };

    let n = algebra.size();
    let mut k_vectors = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if k_entry(&block, &levels, a, b) {
                let mut e = CMatrix::zeros(n, n);
                e[(a, b)] = C64::new(1.0, 0.0);
                k_vectors.push(algebra.coordinates(&e));
            }
        }
    }
    let k = SubalgebraCandidate::new(Subspace::from_vectors(m, &k_vectors, DEFAULT_TOL)?);

    let mut rng = stream(seed, 0);
    let count = samples.max(1);
    let unitaries: Vec<CMatrix> = (0..count)
        .map(|s| flag_unitary(algebra, &levels, &mut rng, s == 0))
        .collect();
    let basis = algebra.skew_basis();
    let ad: Vec<DMatrix<f64>> = unitaries
        .iter()
        .map(|u| {
            let uadj = u.adjoint();
            let mut a = DMatrix::zeros(m, m);
            for (j, x) in basis.iter().enumerate() {
                let c = algebra.coordinates(&(u * x * &uadj));
                a.set_column(j, &c.map(|z| z.re));
            }
            a
        })
        .collect();

    let pair = HomogeneousPair::new(g, to_matrix(&h_cols), to_matrix(&v_cols), ad)?;
    Ok(FlagData {
        algebra: algebra.clone(),
        flag: flag.clone(),
        pair,
        k,
        unitaries,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlagReport {
    pub k0: K0Report,
    pub nu_iso: bool,
    /// `beta(k)` lies in `I_V`.
    pub beta_valid: bool,
    /// `beta(k)` satisfies the integrability criterion.
    pub criterion: bool,
    pub roundtrip_structure: f64,
    pub roundtrip_subalgebra: f64,
    /// `max |(u b u*)_{cd}|` over basis matrices `b` of `k` and positions
    /// `(c, d)` outside the pattern of `k`.
    pub ad_invariance: f64,
    pub unitaries: usize,
    /// Some sampled unitary has determinant other than 1 on every block.
    pub nontrivial_determinant: bool,
    pub dim_h: usize,
    pub dim_v: usize,
    pub dim_k: usize,
    /// `dim_C k` equals the count of admissible matrix positions.
    pub k_dim_exact: bool,
    /// `dim_R V = 2 (dim_C k - dim_C h_C)`.
    pub dimension_balance: bool,
}

impl FlagReport {
    pub fn pass(&self) -> bool {
        self.k0.pass()
            && self.nu_iso
            && self.beta_valid
            && self.criterion
            && self.roundtrip_structure <= ROUNDTRIP_TOL
            && self.roundtrip_subalgebra <= ROUNDTRIP_TOL
            && self.ad_invariance <= AD_INVARIANCE_TOL
            && self.unitaries >= MIN_UNITARIES
            && self.k_dim_exact
            && self.dimension_balance
    }
}

pub fn verify_flag(data: &FlagData) -> Result<FlagReport> {
    let pair = &data.pair;
    let k = &data.k;
    let k0 = check_k0(pair, k)?;
    let nu_iso = nu_iso_check(pair, k);
    let i = beta(pair, k)?;
    let beta_valid = check_iv(pair, &i);
    let criterion = integrability_criterion(pair, &i);
    let rt_i = roundtrip_structure(pair, &i)?;
    let rt_k = roundtrip_subalgebra(pair, k)?;

    let n = data.algebra.size();
    let block = data.algebra.block_of();
    let levels = data.flag.levels();
    let mut ad_invariance: f64 = 0.0;
    for u in &data.unitaries {
        let uadj = u.adjoint();
        for a in 0..n {
            for b in 0..n {
                if !k_entry(&block, &levels, a, b) {
                    continue;
                }
                // u E_ab u* = (column a of u)(row b of u*).
                let y = u.column(a) * uadj.row(b);
                for c in 0..n {
                    for d in 0..n {
                        if !k_entry(&block, &levels, c, d) {
                            ad_invariance = ad_invariance.max(y[(c, d)].norm());
                        }
                    }
                }
            }
        }
    }
    let nontrivial_determinant = data.unitaries.iter().any(|u| {
        let mut offset = 0;
        data.algebra.blocks().iter().all(|&d| {
            let det = u.view((offset, offset), (d, d)).determinant();
            offset += d;
            (det - C64::new(1.0, 0.0)).norm() > 1e-6
        })
    });
    let expected_k = (0..n)
        .flat_map(|a| (0..n).map(move |b| (a, b)))
        .filter(|&(a, b)| k_entry(&block, &levels, a, b))
        .count();
    let (dim_h, dim_v, dim_k) = (pair.h_dim(), pair.v_dim(), k.dim());
    Ok(FlagReport {
        k0,
        nu_iso,
        beta_valid,
        criterion,
        roundtrip_structure: rt_i,
        roundtrip_subalgebra: rt_k,
        ad_invariance,
        unitaries: data.unitaries.len(),
        nontrivial_determinant,
        dim_h,
        dim_v,
        dim_k,
        k_dim_exact: dim_k == expected_k,
        dimension_balance: dim_v == 2 * (dim_k - dim_h),
    })
}

/// Integer partitions of `total` with non-increasing parts.
fn partitions(total: usize, max_part: usize) -> Vec<Vec<usize>> {
    if total == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in (1..=max_part.min(total)).rev() {
        for mut rest in partitions(total - first, first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Non-decreasing sequences of length `n` with entries in `0..=d`.
fn chains(n: usize, d: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in 0..=d {
        for tail in chains(n - 1, d) {
            if tail.first().is_none_or(|&t| t >= first) {
                let mut c = vec![first];
                c.extend(tail);
                out.push(c);
            }
        }
    }
    out
}

/// Every algebra with matrix size at most `max_size` (block sizes as a
/// partition) together with every flag of length `1..=max_len` given by
/// per-block ranks.
pub fn enumerate_flags(max_size: usize, max_len: usize) -> Vec<(StarAlgebra, FlagSpec)> {
    let mut out = Vec::new();
    for size in 1..=max_size {
        for blocks in partitions(size, size) {
            let algebra = StarAlgebra::new(blocks.clone()).expect("positive blocks");
            for len in 1..=max_len {
                let per_block: Vec<Vec<Vec<usize>>> =
                    blocks.iter().map(|&d| chains(len, d)).collect();
                let mut choice = vec![0usize; blocks.len()];
                loop {
                    let ranks: Vec<Vec<usize>> = (0..len)
                        .map(|i| {
                            (0..blocks.len())
                                .map(|t| per_block[t][choice[t]][i])
                                .collect()
                        })
                        .collect();
                    out.push((
                        algebra.clone(),
                        FlagSpec::from_ranks(&algebra, &ranks).expect("nested ranks"),
                    ));
                    let mut t = 0;
                    while t < blocks.len() {
                        choice[t] += 1;
                        if choice[t] < per_block[t].len() {
                            break;
                        }
                        choice[t] = 0;
                        t += 1;
                    }
                    if t == blocks.len() {
                        break;
                    }
                }
            }
        }
    }
    out
}

/// `blocks d_1 ... d_b` followed by one `ranks r_1 ... r_b` line per
/// projection.
pub fn flag_to_text(algebra: &StarAlgebra, flag: &FlagSpec) -> String {
    let join = |xs: &[usize]| {
        xs.iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    };
    let mut s = format!("blocks {}\n", join(algebra.blocks()));
    for r in flag.ranks(algebra) {
        s.push_str(&format!("ranks {}\n", join(&r)));
    }
    s
}

/// Parses the flag format. Besides `ranks`, a `projection` line may list the
/// full 0/1 diagonal of a projection; the two forms cannot be mixed.
pub fn flag_from_text(text: &str) -> Result<(StarAlgebra, FlagSpec)> {
    let mut algebra: Option<StarAlgebra> = None;
    let mut ranks: Vec<Vec<usize>> = Vec::new();
    let mut diagonals: Vec<CMatrix> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut words = line.split_whitespace();
        let key = words.next().expect("non-empty line");
        let nums: Vec<usize> = words
            .map(|w| {
                w.parse::<usize>()
                    .map_err(|e| Error::parse(line_no, format!("{w:?}: {e}")))
            })
            .collect::<Result<_>>()?;
        match key {
            "blocks" => {
                if algebra.is_some() {
                    return Err(Error::parse(line_no, "duplicate blocks line"));
                }
                algebra =
                    Some(StarAlgebra::new(nums).map_err(|e| Error::parse(line_no, e.to_string()))?);
            }
            "ranks" | "projection" => {
                let alg = algebra
                    .as_ref()
                    .ok_or_else(|| Error::parse(line_no, "blocks must come first"))?;
                if key == "ranks" {
                    ranks.push(nums);
                } else {
                    if nums.len() != alg.size() || nums.iter().any(|&x| x > 1) {
                        return Err(Error::parse(
                            line_no,
                            "projection needs one 0/1 entry per index",
                        ));
                    }
                    diagonals.push(CMatrix::from_diagonal(&CVector::from_iterator(
                        nums.len(),
                        nums.iter().map(|&x| C64::new(x as f64, 0.0)),
                    )));
                }
            }
            other => return Err(Error::parse(line_no, format!("unknown keyword {other:?}"))),
        }
    }
    let algebra = algebra.ok_or_else(|| Error::parse(0, "missing blocks line"))?;
    let flag = match (ranks.is_empty(), diagonals.is_empty()) {
        (false, true) => FlagSpec::from_ranks(&algebra, &ranks)?,
        (true, false) => FlagSpec::from_projections(&algebra, &diagonals)?,
        (true, true) => return Err(Error::InvalidFlag("no projections given".into())),
        (false, false) => {
            return Err(Error::parse(
                0,
                "ranks and projection lines cannot be mixed",
            ))
        }
    };
    Ok((algebra, flag))
}

impl FlagData {
    /// The reconstructed structure `beta(k)`, for export as a pair fixture.
    pub fn structure(&self) -> Result<PartialStructure> {
        beta(&self.pair, &self.k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c64;

    fn data(blocks: Vec<usize>, ranks: &[Vec<usize>]) -> FlagData {
        let a = StarAlgebra::new(blocks).unwrap();
        let f = FlagSpec::from_ranks(&a, ranks).unwrap();
        build_flag_data(&a, &f, 5, MIN_UNITARIES).unwrap()
    }

    #[test]
    fn two_by_two_rank_one() {
        let d = data(vec![2], &[vec![1]]);
        assert_eq!((d.k.dim(), d.pair.h_dim(), d.pair.v_dim()), (3, 2, 2));
        let report = verify_flag(&d).unwrap();
        assert!(report.pass(), "{report:?}");
    }

    #[test]
    fn unit_flag_is_degenerate() {
        let d = data(vec![2], &[vec![2]]);
        assert_eq!((d.k.dim(), d.pair.h_dim(), d.pair.v_dim()), (4, 4, 0));
        assert!(verify_flag(&d).unwrap().pass());
    }

    #[test]
    fn three_by_three_full_flag() {
        let d = data(vec![3], &[vec![1], vec![2]]);
        assert_eq!(d.k.dim(), 6);
        assert!(verify_flag(&d).unwrap().pass());
    }

    #[test]
    fn coordinates_roundtrip_and_conjugation() {
        let a = StarAlgebra::new(vec![2, 1]).unwrap();
        let mut b = CMatrix::zeros(3, 3);
        b[(0, 1)] = c64(1.0, 2.0);
        b[(1, 0)] = c64(-0.5, 0.3);
        b[(0, 0)] = c64(0.2, -0.7);
        b[(2, 2)] = c64(3.0, 1.0);
        let c = a.coordinates(&b);
        assert!((a.from_coordinates(&c) - &b).norm() < 1e-15);
        let conj = c.map(|z| z.conj());
        assert!((a.from_coordinates(&conj) + b.adjoint()).norm() < 1e-15);
    }

    #[test]
    fn invalid_flags_rejected() {
        let a = StarAlgebra::new(vec![2]).unwrap();
        assert!(matches!(
            FlagSpec::from_ranks(&a, &[vec![2], vec![1]]),
            Err(Error::InvalidFlag(_))
        ));
        assert!(matches!(
            FlagSpec::from_ranks(&a, &[vec![3]]),
            Err(Error::InvalidFlag(_))
        ));
        let mut p = CMatrix::zeros(2, 2);
        p[(0, 0)] = c64(0.5, 0.0);
        assert!(matches!(
            FlagSpec::from_projections(&a, &[p]),
            Err(Error::InvalidFlag(_))
        ));
        assert!(matches!(
            StarAlgebra::new(vec![]),
            Err(Error::InvalidFlag(_))
        ));
    }

    #[test]
    fn non_prefix_projection_accepted() {
        let a = StarAlgebra::new(vec![3]).unwrap();
        let p = CMatrix::from_diagonal(&CVector::from_vec(vec![
            c64(0.0, 0.0),
            c64(0.0, 0.0),
            c64(1.0, 0.0),
        ]));
        let f = FlagSpec::from_projections(&a, &[p]).unwrap();
        assert_eq!(f.levels(), vec![2, 2, 1]);
        let d = build_flag_data(&a, &f, 1, MIN_UNITARIES).unwrap();
        assert!(verify_flag(&d).unwrap().pass());
    }

    #[test]
    fn flag_text_roundtrip() {
        let a = StarAlgebra::new(vec![2, 2]).unwrap();
        let f = FlagSpec::from_ranks(&a, &[vec![1, 0], vec![1, 2]]).unwrap();
        let text = flag_to_text(&a, &f);
        assert_eq!(text, "blocks 2 2\nranks 1 0\nranks 1 2\n");
        assert_eq!(flag_from_text(&text).unwrap(), (a, f));
        assert!(matches!(
            flag_from_text("ranks 1\n"),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(partitions(4, 4).len(), 5);
        assert_eq!(chains(2, 2).len(), 6);
        // size 1: one block, chains of length 1..=2 in {0,1}: 2 + 3.
        assert_eq!(enumerate_flags(1, 2).len(), 5);
    }
}

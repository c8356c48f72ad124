//! Line-oriented text format for homogeneous-pair fixtures.
//!
//! ```text
//! # comment
//! name su2_u1
//! dim 3
//! bracket 0 1 2 1.0000000000000000e0     c^k_{ij} for (i, j, k)
//! matrix 2 <re im> ...                   realization of e_i, row-major
//! h <m values>                           one basis vector of h
//! v <m values>                           one basis vector of V
//! sample <m*m values>                    automorphism, row-major
//! structure <m*m values>                 operator I, row-major
//! ```
//!
//! Brackets are written for every ordered pair, so antisymmetry is checked
//! on the data as given. Reals are written with 17 significant digits.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::lie::algebra::LieAlgebra;
use crate::lie::fixtures::Fixture;
use crate::lie::pair::{HomogeneousPair, PartialStructure};
use crate::linalg::{CMatrix, C64};

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn row(values: impl Iterator<Item = f64>) -> String {
    values.map(num).collect::<Vec<_>>().join(" ")
}

fn row_major(m: &DMatrix<f64>) -> String {
    row((0..m.nrows()).flat_map(|r| (0..m.ncols()).map(move |c| m[(r, c)])))
}

pub fn fixture_to_text(f: &Fixture) -> String {
    let g = f.pair.algebra();
    let m = g.dim();
    let mut s = String::new();
    s.push_str(&format!("name {}\n", f.name));
    s.push_str(&format!("dim {m}\n"));
    for i in 0..m {
        for j in 0..m {
            for k in 0..m {
                let c = g.constant(i, j, k);
                if c != 0.0 {
                    s.push_str(&format!("bracket {i} {j} {k} {}\n", num(c)));
                }
            }
        }
    }
    if let Some(xs) = g.realization() {
        for x in xs {
            let n = x.nrows();
            let vals = (0..n).flat_map(|r| (0..n).flat_map(move |c| [x[(r, c)].re, x[(r, c)].im]));
            s.push_str(&format!("matrix {n} {}\n", row(vals)));
        }
    }
    for c in f.pair.h_basis().column_iter() {
        s.push_str(&format!("h {}\n", row(c.iter().copied())));
    }
    for c in f.pair.v_basis().column_iter() {
        s.push_str(&format!("v {}\n", row(c.iter().copied())));
    }
    for a in f.pair.samples() {
        s.push_str(&format!("sample {}\n", row_major(a)));
    }
    if let Some(i) = &f.structure {
        s.push_str(&format!("structure {}\n", row_major(i.matrix())));
    }
    s
}

fn parse_f64s(words: &[&str], line: usize) -> Result<Vec<f64>> {
    words
        .iter()
        .map(|w| {
            w.parse::<f64>()
                .map_err(|e| Error::parse(line, format!("{w:?}: {e}")))
        })
        .collect()
}

fn parse_index(w: Option<&&str>, m: usize, line: usize) -> Result<usize> {
    let w = w.ok_or_else(|| Error::parse(line, "missing index"))?;
    let i: usize = w
        .parse()
        .map_err(|e| Error::parse(line, format!("{w:?}: {e}")))?;
    if i >= m {
        return Err(Error::parse(
            line,
            format!("index {i} out of range for dimension {m}"),
        ));
    }
    Ok(i)
}

fn expect_len(v: &[f64], n: usize, line: usize) -> Result<()> {
    if v.len() != n {
        return Err(Error::parse(
            line,
            format!("expected {n} values, found {}", v.len()),
        ));
    }
    Ok(())
}

/// Parses a fixture. The algebra is not validated here; pair construction
/// errors (shape, non-complementary subspaces) are returned as is.
pub fn fixture_from_text(text: &str) -> Result<Fixture> {
    let mut name = String::from("unnamed");
    let mut dim: Option<usize> = None;
    let mut constants: Vec<f64> = Vec::new();
    let mut matrices: Vec<CMatrix> = Vec::new();
    let mut h: Vec<DVector<f64>> = Vec::new();
    let mut v: Vec<DVector<f64>> = Vec::new();
    let mut samples: Vec<DMatrix<f64>> = Vec::new();
    let mut structure: Option<DMatrix<f64>> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let words: Vec<&str> = content.split_whitespace().collect();
        let (key, rest) = (words[0], &words[1..]);
        if key == "name" {
            name = rest.join(" ");
            continue;
        }
        if key == "dim" {
            if dim.is_some() {
                return Err(Error::parse(line, "duplicate dim line"));
            }
            let m: usize = rest
                .first()
                .ok_or_else(|| Error::parse(line, "missing dimension"))?
                .parse()
                .map_err(|e| Error::parse(line, format!("dimension: {e}")))?;
            dim = Some(m);
            constants = vec![0.0; m * m * m];
            continue;
        }
        let m = dim.ok_or_else(|| Error::parse(line, "dim must come first"))?;
        match key {
            "bracket" => {
                let (i, j, k) = (
                    parse_index(rest.first(), m, line)?,
                    parse_index(rest.get(1), m, line)?,
                    parse_index(rest.get(2), m, line)?,
                );
                let val = parse_f64s(&rest[3.min(rest.len())..], line)?;
                expect_len(&val, 1, line)?;
                constants[(i * m + j) * m + k] = val[0];
            }
            "matrix" => {
                let n: usize = rest
                    .first()
                    .ok_or_else(|| Error::parse(line, "missing matrix size"))?
                    .parse()
                    .map_err(|e| Error::parse(line, format!("matrix size: {e}")))?;
                let vals = parse_f64s(&rest[1..], line)?;
                expect_len(&vals, 2 * n * n, line)?;
                matrices.push(CMatrix::from_fn(n, n, |r, c| {
                    let p = 2 * (r * n + c);
                    C64::new(vals[p], vals[p + 1])
                }));
            }
            "h" | "v" => {
                let vals = parse_f64s(rest, line)?;
                expect_len(&vals, m, line)?;
                let target = if key == "h" { &mut h } else { &mut v };
                target.push(DVector::from_vec(vals));
            }
            "sample" | "structure" => {
                let vals = parse_f64s(rest, line)?;
                expect_len(&vals, m * m, line)?;
                let a = DMatrix::from_row_slice(m, m, &vals);
                if key == "sample" {
                    samples.push(a);
                } else if structure.replace(a).is_some() {
                    return Err(Error::parse(line, "duplicate structure line"));
                }
            }
            other => return Err(Error::parse(line, format!("unknown keyword {other:?}"))),
        }
    }

    let m = dim.ok_or_else(|| Error::parse(0, "missing dim line"))?;
    let mut g = LieAlgebra::from_constants(m, &constants)?;
    if !matrices.is_empty() {
        g = g.with_realization(matrices)?;
    }
    let cols = |vs: &[DVector<f64>]| {
        if vs.is_empty() {
            DMatrix::zeros(m, 0)
        } else {
            DMatrix::from_columns(vs)
        }
    };
    let pair = HomogeneousPair::new(g, cols(&h), cols(&v), samples)?;
    let structure = structure.map(PartialStructure::new).transpose()?;
    Ok(Fixture::new(name, pair, structure))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::fixtures::{named_fixtures, random_fixtures};

    #[test]
    fn named_fixtures_roundtrip_exactly() {
        for f in named_fixtures()
            .into_iter()
            .chain(random_fixtures(9, 8).unwrap())
        {
            let text = fixture_to_text(&f);
            let back = fixture_from_text(&text).unwrap();
            assert_eq!(back, f, "{}", f.name);
            assert_eq!(fixture_to_text(&back), text);
        }
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = fixture_from_text("dim 2\nbracket 0 1 5 1.0\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let err = fixture_from_text("h 1 0\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
        let err = fixture_from_text("dim 2\nv 1 0 0\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }

    #[test]
    fn missing_complement_is_a_pair_error() {
        let err = fixture_from_text("dim 2\nv 1 0\n").unwrap_err();
        assert!(matches!(err, Error::InvalidPair(_)));
    }
}

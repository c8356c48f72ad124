//! Lie brackets of chart vector fields and the torsion of an operator field,
//! computed both from brackets of fields and from the derivative of `J` at a
//! point.

use crate::chart::field::{OperatorField, VectorField};
use crate::error::{Error, Result};
use crate::linalg::{CVector, C64};

fn check_dims(n: usize, others: &[usize]) -> Result<()> {
    if let Some(d) = others.iter().find(|&&d| d != n) {
        return Err(Error::Shape(format!(
            "dimension {d} where {n} was expected"
        )));
    }
    Ok(())
}

/// `[a, b]_x = a'_x(b_x) - b'_x(a_x)`.
pub fn lie_bracket(a: &VectorField, b: &VectorField, x: &[C64]) -> Result<CVector> {
    check_dims(a.dim(), &[b.dim(), x.len()])?;
    let ax = a.eval(x)?;
    let bx = b.eval(x)?;
    Ok(a.derivative(x, &bx)? - b.derivative(x, &ax)?)
}

/// `J[Ja, b] + J[a, Jb] + [a, b] - [Ja, Jb]` at `x`, with `Ja` and `Jb` the
/// polynomial product fields.
pub fn torsion_bracket(
    j: &OperatorField,
    a: &VectorField,
    b: &VectorField,
    x: &[C64],
) -> Result<CVector> {
    check_dims(j.dim(), &[a.dim(), b.dim(), x.len()])?;
    let jx = j.validated_at(x)?;
    let ja = j.apply(a)?;
    let jb = j.apply(b)?;
    let t1 = &jx * lie_bracket(&ja, b, x)?;
    let t2 = &jx * lie_bracket(a, &jb, x)?;
    let t3 = lie_bracket(a, b, x)?;
    let t4 = lie_bracket(&ja, &jb, x)?;
    Ok(t1 + t2 + t3 - t4)
}

/// `-J'(Ju, v) - J'(u, Jv) + J'(Jv, u) + J'(v, Ju)` at `x`, where
/// `J'(u, w)` differentiates `J` along `w` and applies the result to `u`.
pub fn torsion_pointwise(
    j: &OperatorField,
    u: &CVector,
    v: &CVector,
    x: &[C64],
) -> Result<CVector> {
    check_dims(j.dim(), &[u.len(), v.len(), x.len()])?;
    let jx = j.validated_at(x)?;
    let ju = &jx * u;
    let jv = &jx * v;
    Ok(-j.differential(x, &ju, v)? - j.differential(x, u, &jv)?
        + j.differential(x, &jv, u)?
        + j.differential(x, v, &ju)?)
}

/// `||(Jc)'_x u - J'_x(c_x, u) - J_x c'_x u||`.
pub fn check_identity_1(j: &OperatorField, c: &VectorField, x: &[C64], u: &CVector) -> Result<f64> {
    check_dims(j.dim(), &[c.dim(), x.len(), u.len()])?;
    let jc = j.apply(c)?;
    let lhs = jc.derivative(x, u)?;
    let cx = c.eval(x)?;
    let rhs = j.differential(x, &cx, u)? + j.eval(x)? * c.derivative(x, u)?;
    Ok((lhs - rhs).norm())
}

/// `||J'_x(J_x u, v) + J_x J'_x(u, v)||`.
pub fn check_identity_2(j: &OperatorField, x: &[C64], u: &CVector, v: &CVector) -> Result<f64> {
    check_dims(j.dim(), &[x.len(), u.len(), v.len()])?;
    let jx = j.eval(x)?;
    let ju = &jx * u;
    let residual = j.differential(x, &ju, v)? + &jx * j.differential(x, u, v)?;
    Ok(residual.norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chart::field::to_complex;
    use crate::linalg::c64;
    use crate::rng::stream;

    fn basis(n: usize, i: usize) -> CVector {
        let mut e = CVector::zeros(n);
        e[i] = c64(1.0, 0.0);
        e
    }

    #[test]
    fn bracket_of_constant_fields_vanishes() {
        let a = VectorField::constant(&basis(3, 0));
        let b = VectorField::constant(&basis(3, 2));
        let x = to_complex(&[0.1, -0.2, 0.3]);
        assert_eq!(lie_bracket(&a, &b, &x).unwrap(), CVector::zeros(3));
    }

    #[test]
    fn bracket_of_position_with_constant() {
        let v = CVector::from_vec(vec![c64(1.0, 0.0), c64(-2.0, 0.0), c64(0.5, 0.0)]);
        let a = VectorField::position(3);
        let b = VectorField::constant(&v);
        let x = to_complex(&[0.3, 0.1, -0.4]);
        assert_eq!(lie_bracket(&a, &b, &x).unwrap(), v);
    }

    #[test]
    fn bracket_dimension_mismatch() {
        let a = VectorField::position(3);
        let b = VectorField::position(2);
        assert!(matches!(
            lie_bracket(&a, &b, &to_complex(&[0.0; 3])),
            Err(Error::Shape(_))
        ));
    }

    #[test]
    fn constant_structure_is_torsion_free() {
        let j = OperatorField::standard(4, 1.0).unwrap();
        let mut rng = stream(11, 0);
        let a = VectorField::random(4, 2, &mut rng);
        let b = VectorField::random(4, 2, &mut rng);
        let x = to_complex(&[0.1, 0.2, -0.3, 0.05]);
        assert!(torsion_bracket(&j, &a, &b, &x).unwrap().norm() < 1e-12);
        let u = a.eval(&x).unwrap();
        let v = b.eval(&x).unwrap();
        assert_eq!(
            torsion_pointwise(&j, &u, &v, &x).unwrap(),
            CVector::zeros(4)
        );
        assert_eq!(
            check_identity_1(&j, &VectorField::constant(&u), &x, &v).unwrap(),
            0.0
        );
        assert_eq!(check_identity_2(&j, &x, &u, &v).unwrap(), 0.0);
    }

    #[test]
    fn torsion_rejects_invalid_structure() {
        let j = OperatorField::constant(&nalgebra::DMatrix::identity(2, 2), 1.0).unwrap();
        let a = VectorField::position(2);
        let x = to_complex(&[0.0, 0.0]);
        assert!(matches!(
            torsion_bracket(&j, &a, &a, &x),
            Err(Error::InvalidStructure(_))
        ));
        let u = basis(2, 0);
        assert!(matches!(
            torsion_pointwise(&j, &u, &u, &x),
            Err(Error::InvalidStructure(_))
        ));
    }

    #[test]
    fn identity_2_vanishes_for_zero_vector() {
        let j = OperatorField::standard(2, 1.0).unwrap();
        let x = to_complex(&[0.1, 0.1]);
        let zero = CVector::zeros(2);
        assert_eq!(check_identity_2(&j, &x, &zero, &basis(2, 1)).unwrap(), 0.0);
    }
}

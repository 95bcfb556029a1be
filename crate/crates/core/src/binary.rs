//! Rank-2 lattices as binary quadratic forms `a x^2 + 2b xy + c y^2`.
//!
//! For hyperbolic binary forms either the isotropic directions are rational
//! (`b^2 - ac` is a square) or the proper automorphs form an infinite cyclic
//! group up to sign, generated by a solution of Pell's equation.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::{self, Matrix};
use crate::lattice::{ClassVector, Isometry, Lattice, Problem};

fn coefficients(lattice: &Lattice) -> (BigInt, BigInt, BigInt) {
    let g = lattice.gram();
    (g.get(0, 0).clone(), g.get(0, 1).clone(), g.get(1, 1).clone())
}

/// `b^2 - ac`, positive for hyperbolic forms.
pub fn reduced_discriminant(lattice: &Lattice) -> BigInt {
    let (a, b, c) = coefficients(lattice);
    &b * &b - a * c
}

/// Smallest positive solution of `X^2 - d Y^2 = 1` for non-square `d > 0`,
/// from the continued fraction expansion of `sqrt(d)`.
pub fn pell_fundamental(d: &BigInt) -> (BigInt, BigInt) {
    debug_assert!(d.is_positive() && arith::is_square(d).is_none());
    let a0 = arith::isqrt(d);
    let (mut m, mut q, mut a) = (BigInt::zero(), BigInt::one(), a0.clone());
    // Convergents p/q.
    let (mut p_prev, mut p) = (BigInt::one(), a0.clone());
    let (mut r_prev, mut r) = (BigInt::zero(), BigInt::one());
    loop {
        if &p * &p - d * &r * &r == BigInt::one() {
            return (p, r);
        }
        m = &q * &a - &m;
        q = (d - &m * &m) / &q;
        a = (&a0 + &m).div_floor(&q);
        let p_next = &a * &p + &p_prev;
        let r_next = &a * &r + &r_prev;
        p_prev = std::mem::replace(&mut p, p_next);
        r_prev = std::mem::replace(&mut r, r_next);
    }
}

/// An infinite-order proper automorph preserving the positive cone
/// components, or `None` when the isotropic directions are rational.
pub fn pell_automorph(lattice: &Lattice) -> Option<Isometry> {
    if lattice.rank() != 2 {
        return None;
    }
    let d = reduced_discriminant(lattice);
    if arith::is_square(&d).is_some() {
        return None;
    }
    let (a, b, c) = coefficients(lattice);
    let (x, y) = pell_fundamental(&d);
    let m = Matrix::from_rows(vec![
        vec![&x - &b * &y, -(&c * &y)],
        vec![&a * &y, &x + &b * &y],
    ])?;
    Isometry::new(lattice, m).ok()
}

/// The two primitive isotropic classes of positive degree, when rational.
pub fn isotropic_rays(problem: &Problem) -> Option<[ClassVector; 2]> {
    let lattice = problem.lattice();
    if lattice.rank() != 2 {
        return None;
    }
    let (a, b, c) = coefficients(lattice);
    let s = arith::is_square(&reduced_discriminant(lattice))?;
    let dirs: [Vec<BigInt>; 2] = if a.is_zero() {
        [
            vec![BigInt::one(), BigInt::zero()],
            vec![-c.clone(), BigInt::from(2) * &b],
        ]
    } else {
        [vec![-&b + &s, a.clone()], vec![-&b - &s, a.clone()]]
    };
    let mut out = dirs.map(|v| {
        let e = ClassVector::new(arith::make_primitive(&v));
        if problem.degree(&e).is_negative() {
            e.neg()
        } else {
            e
        }
    });
    out.sort();
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::validate_problem;

    #[test]
    fn pell_solutions() {
        assert_eq!(
            pell_fundamental(&BigInt::from(2)),
            (BigInt::from(3), BigInt::from(2))
        );
        assert_eq!(
            pell_fundamental(&BigInt::from(45)),
            (BigInt::from(161), BigInt::from(24))
        );
        let (x, y) = pell_fundamental(&BigInt::from(61));
        assert_eq!(x, BigInt::from(1766319049u64));
        assert_eq!(y, BigInt::from(226153980u64));
    }

    #[test]
    fn automorphs() {
        let r = Lattice::from_i64(&[&[2, 7], &[7, 2]]).unwrap();
        let e = pell_automorph(&r).unwrap();
        assert!(e.preserves(&r));
        let p = Lattice::from_i64(&[&[4, 0], &[0, -2]]).unwrap();
        assert!(pell_automorph(&p).is_some());
        let u = Lattice::from_i64(&[&[0, 1], &[1, 0]]).unwrap();
        assert!(pell_automorph(&u).is_none());
    }

    #[test]
    fn rational_isotropics() {
        let u = validate_problem(
            Matrix::from_i64(&[&[0, 1], &[1, 0]]).unwrap(),
            [2, 1].into(),
        )
        .unwrap();
        assert_eq!(
            isotropic_rays(&u).unwrap(),
            [ClassVector::from([0, 1]), ClassVector::from([1, 0])]
        );
        let w = validate_problem(
            Matrix::from_i64(&[&[2, 3], &[3, 4]]).unwrap(),
            [1, 1].into(),
        )
        .unwrap();
        // 2x^2 + 6xy + 4y^2 = 2(x + y)(x + 2y)
        let rays = isotropic_rays(&w).unwrap();
        for e in &rays {
            assert!(w.lattice().pairing(e, e).unwrap().is_zero());
            assert!(w.degree(e).is_positive());
        }
    }
}

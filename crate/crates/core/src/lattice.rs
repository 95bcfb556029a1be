//! Even hyperbolic lattices, their vectors and isometries.
//!
//! Matrices act on column vectors. Composition `g.compose(h)` is the map
//! "apply `h`, then `g`", i.e. the matrix product `g * h`.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::{self, Matrix};
use crate::enumerate::SliceEnumerator;
use crate::error::{Error, Result};

/// Integer coordinate vector in a lattice.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClassVector(Vec<BigInt>);

impl ClassVector {
    pub fn new(coords: Vec<BigInt>) -> Self {
        Self(coords)
    }

    pub fn zero(rank: usize) -> Self {
        Self(vec![BigInt::zero(); rank])
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<BigInt> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &ClassVector) -> ClassVector {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &ClassVector) -> ClassVector {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, k: &BigInt) -> ClassVector {
        Self(self.0.iter().map(|a| a * k).collect())
    }

    pub fn neg(&self) -> ClassVector {
        Self(self.0.iter().map(|a| -a).collect())
    }

    pub fn content(&self) -> BigInt {
        arith::gcd_all(&self.0)
    }

    pub fn is_primitive(&self) -> bool {
        self.content().is_one()
    }

    /// Divides by the gcd of the entries; never flips the sign.
    pub fn primitive_ray(&self) -> Result<ClassVector> {
        if self.is_zero() {
            return Err(Error::ZeroVector);
        }
        Ok(Self(arith::make_primitive(&self.0)))
    }
}

impl<const N: usize> From<[i64; N]> for ClassVector {
    fn from(v: [i64; N]) -> Self {
        Self(v.iter().map(|&x| BigInt::from(x)).collect())
    }
}

impl From<Vec<i64>> for ClassVector {
    fn from(v: Vec<i64>) -> Self {
        Self(v.into_iter().map(BigInt::from).collect())
    }
}

impl fmt::Display for ClassVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Even symmetric integer form of signature `(1, rank - 1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lattice {
    gram: Matrix,
}

impl Lattice {
    /// Checks symmetry, evenness, nondegeneracy and hyperbolic signature.
    pub fn new(gram: Matrix) -> Result<Self> {
        let n = gram.dim();
        if n == 0 {
            return Err(Error::Degenerate);
        }
        for i in 0..n {
            for j in i + 1..n {
                if gram.get(i, j) != gram.get(j, i) {
                    return Err(Error::NotSymmetric { row: i, col: j });
                }
            }
        }
        for i in 0..n {
            if gram.get(i, i).is_odd() {
                return Err(Error::OddLattice {
                    index: i,
                    value: gram.get(i, i).clone(),
                });
            }
        }
        if gram.det().is_zero() {
            return Err(Error::Degenerate);
        }
        let (positive, negative, _) = arith::inertia(&gram);
        if positive != 1 || negative != n - 1 {
            return Err(Error::WrongSignature { positive, negative });
        }
        Ok(Self { gram })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self> {
        let gram = Matrix::from_i64(rows).ok_or(Error::InvalidArgument(
            "gram matrix must be square".into(),
        ))?;
        Self::new(gram)
    }

    pub fn rank(&self) -> usize {
        self.gram.dim()
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    pub fn determinant(&self) -> BigInt {
        self.gram.det()
    }

    fn check_dim(&self, x: &ClassVector) -> Result<()> {
        if x.len() != self.rank() {
            return Err(Error::DimensionMismatch {
                expected: self.rank(),
                found: x.len(),
            });
        }
        Ok(())
    }

    /// `x^T G y`.
    pub fn pairing(&self, x: &ClassVector, y: &ClassVector) -> Result<BigInt> {
        self.check_dim(x)?;
        self.check_dim(y)?;
        Ok(self.pair(x, y))
    }

    /// Unchecked pairing for internal use where dimensions are known.
    pub(crate) fn pair(&self, x: &ClassVector, y: &ClassVector) -> BigInt {
        arith::dot(x.coords(), &self.gram.mul_vec(y.coords()))
    }

    pub(crate) fn norm(&self, x: &ClassVector) -> BigInt {
        self.pair(x, x)
    }

    /// Linear functional `y -> x . y` as a coefficient row `G x`.
    pub(crate) fn functional(&self, x: &ClassVector) -> Vec<BigInt> {
        self.gram.mul_vec(x.coords())
    }

    /// `s_root(x) = x + (x . root) root`.
    pub fn reflect_in_root(&self, root: &ClassVector, x: &ClassVector) -> Result<ClassVector> {
        self.check_dim(root)?;
        self.check_dim(x)?;
        let norm = self.norm(root);
        if norm != BigInt::from(-2) {
            return Err(Error::NotARoot {
                vector: root.clone(),
                norm,
            });
        }
        Ok(x.add(&root.scale(&self.pair(x, root))))
    }

    /// Matrix of the reflection in a root.
    pub fn reflection(&self, root: &ClassVector) -> Result<Isometry> {
        self.check_dim(root)?;
        let norm = self.norm(root);
        if norm != BigInt::from(-2) {
            return Err(Error::NotARoot {
                vector: root.clone(),
                norm,
            });
        }
        let f = self.functional(root);
        let n = self.rank();
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let id = if i == j { BigInt::one() } else { BigInt::zero() };
                        id + &root.coords()[i] * &f[j]
                    })
                    .collect()
            })
            .collect();
        Isometry::new(self, Matrix::from_rows(rows).expect("square"))
    }
}

/// Integer matrix preserving the form of a fixed lattice.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Isometry {
    matrix: Matrix,
}

impl Isometry {
    pub fn new(lattice: &Lattice, matrix: Matrix) -> Result<Self> {
        if matrix.dim() != lattice.rank() {
            return Err(Error::DimensionMismatch {
                expected: lattice.rank(),
                found: matrix.dim(),
            });
        }
        let pulled = matrix.transpose().mul(lattice.gram()).mul(&matrix);
        if &pulled != lattice.gram() {
            return Err(Error::NotAnIsometry);
        }
        debug_assert!(matrix.det().abs().is_one());
        Ok(Self { matrix })
    }

    pub fn from_i64(lattice: &Lattice, rows: &[&[i64]]) -> Result<Self> {
        let m = Matrix::from_i64(rows).ok_or(Error::NotAnIsometry)?;
        Self::new(lattice, m)
    }

    pub fn identity(rank: usize) -> Self {
        Self {
            matrix: Matrix::identity(rank),
        }
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn is_identity(&self) -> bool {
        self.matrix == Matrix::identity(self.matrix.dim())
    }

    pub fn apply(&self, x: &ClassVector) -> ClassVector {
        ClassVector::new(self.matrix.mul_vec(x.coords()))
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Isometry) -> Isometry {
        Isometry {
            matrix: self.matrix.mul(&other.matrix),
        }
    }

    pub fn invert(&self) -> Isometry {
        let matrix = self
            .matrix
            .integer_inverse()
            .expect("isometries of a nondegenerate form have determinant ±1");
        Isometry { matrix }
    }

    /// Re-checks the Gram invariant; used by tests and after long products.
    pub fn preserves(&self, lattice: &Lattice) -> bool {
        &self.matrix.transpose().mul(lattice.gram()).mul(&self.matrix) == lattice.gram()
    }
}

/// A lattice together with an ample class off every root wall.
#[derive(Debug, Clone)]
pub struct Problem {
    lattice: Lattice,
    ample: ClassVector,
    ample_norm: BigInt,
    slices: Arc<SliceEnumerator>,
}

impl Problem {
    pub fn new(lattice: Lattice, ample: ClassVector) -> Result<Self> {
        lattice.check_dim(&ample)?;
        let ample_norm = lattice.norm(&ample);
        if !ample_norm.is_positive() {
            return Err(Error::NonPositiveAmple { norm: ample_norm });
        }
        let slices = Arc::new(SliceEnumerator::new(&lattice, &ample)?);
        let problem = Self {
            lattice,
            ample,
            ample_norm,
            slices,
        };
        if let Some(root) = problem
            .vectors_norm_degree(&BigInt::from(-2), &BigInt::zero())?
            .into_iter()
            .next()
        {
            return Err(Error::AmpleOnWall { root });
        }
        Ok(problem)
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn ample(&self) -> &ClassVector {
        &self.ample
    }

    pub fn ample_norm(&self) -> &BigInt {
        &self.ample_norm
    }

    pub fn rank(&self) -> usize {
        self.lattice.rank()
    }

    pub(crate) fn slices(&self) -> &SliceEnumerator {
        &self.slices
    }

    /// `x . H`.
    pub fn degree(&self, x: &ClassVector) -> BigInt {
        self.lattice.pair(x, &self.ample)
    }

    /// Closure of the positive cone component containing `H`.
    pub fn in_positive_closure(&self, x: &ClassVector) -> bool {
        !x.is_zero() && !self.lattice.norm(x).is_negative() && self.degree(x).is_positive()
    }

    pub(crate) fn require_positive_closure(&self, x: &ClassVector) -> Result<()> {
        self.lattice.check_dim(x)?;
        if self.in_positive_closure(x) {
            Ok(())
        } else {
            Err(Error::OutsidePositiveCone { vector: x.clone() })
        }
    }
}

/// Validates a lattice/ample pair; the single entry point for raw input.
pub fn validate_problem(gram: Matrix, ample: ClassVector) -> Result<Problem> {
    Problem::new(Lattice::new(gram)?, ample)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l_u() -> Lattice {
        Lattice::from_i64(&[&[0, 1], &[1, 0]]).unwrap()
    }

    fn l_p() -> Lattice {
        Lattice::from_i64(&[&[4, 0], &[0, -2]]).unwrap()
    }

    #[test]
    fn pairing_examples() {
        let l = l_u();
        assert_eq!(
            l.pairing(&[1, 0].into(), &[0, 1].into()).unwrap(),
            BigInt::from(1)
        );
        assert_eq!(
            l_p().pairing(&[2, 1].into(), &[2, 1].into()).unwrap(),
            BigInt::from(14)
        );
        assert_eq!(
            l.pairing(&[1, 0].into(), &[1, 0, 0].into()),
            Err(Error::DimensionMismatch {
                expected: 2,
                found: 3
            })
        );
    }

    #[test]
    fn validation_errors() {
        let odd = Matrix::from_i64(&[&[1, 0], &[0, -2]]).unwrap();
        assert!(matches!(
            validate_problem(odd, [1, 0].into()),
            Err(Error::OddLattice { index: 0, .. })
        ));
        let u = Matrix::from_i64(&[&[0, 1], &[1, 0]]).unwrap();
        assert!(matches!(
            validate_problem(u.clone(), [1, -1].into()),
            Err(Error::NonPositiveAmple { .. })
        ));
        assert!(validate_problem(u, [2, 1].into()).is_ok());
        let definite = Matrix::from_i64(&[&[2, 0], &[0, 2]]).unwrap();
        assert!(matches!(
            validate_problem(definite, [1, 0].into()),
            Err(Error::WrongSignature {
                positive: 2,
                negative: 0
            })
        ));
        let degenerate = Matrix::from_i64(&[&[2, 2], &[2, 2]]).unwrap();
        assert_eq!(
            validate_problem(degenerate, [1, 0].into()).unwrap_err(),
            Error::Degenerate
        );
        // (1,1) pairs to zero with the root (1,-1)... in U, H = (1,1) is on the wall of (1,-1).
        let u = Matrix::from_i64(&[&[0, 1], &[1, 0]]).unwrap();
        match validate_problem(u, [1, 1].into()) {
            Err(Error::AmpleOnWall { root }) => {
                let l = l_u();
                assert_eq!(l.pairing(&root, &root).unwrap(), BigInt::from(-2));
            }
            other => panic!("expected AmpleOnWall, got {other:?}"),
        }
    }

    #[test]
    fn reflection_examples() {
        let u = l_u();
        assert_eq!(
            u.reflect_in_root(&[-1, 1].into(), &[1, 0].into()).unwrap(),
            ClassVector::from([0, 1])
        );
        let p = l_p();
        assert_eq!(
            p.reflect_in_root(&[2, 3].into(), &[5, 7].into()).unwrap(),
            ClassVector::from([1, 1])
        );
        assert_eq!(
            p.reflect_in_root(&[2, 3].into(), &[2, 3].into()).unwrap(),
            ClassVector::from([-2, -3])
        );
        assert!(matches!(
            p.reflect_in_root(&[1, 0].into(), &[1, 1].into()),
            Err(Error::NotARoot { .. })
        ));
        let s = p.reflection(&[2, 3].into()).unwrap();
        assert_eq!(s.apply(&[5, 7].into()), ClassVector::from([1, 1]));
        assert!(s.compose(&s).is_identity());
    }

    #[test]
    fn isometry_examples() {
        let p = l_p();
        let gamma = Isometry::from_i64(&p, &[&[3, -2], &[4, -3]]).unwrap();
        assert!(gamma.compose(&gamma).is_identity());
        let r = Lattice::from_i64(&[&[2, 7], &[7, 2]]).unwrap();
        let g = Isometry::from_i64(&r, &[&[0, -1], &[1, 7]]).unwrap();
        assert_eq!(g.apply(&[1, 0].into()), ClassVector::from([0, 1]));
        assert!(g.compose(&g.invert()).is_identity());
        assert!(g.invert().preserves(&r));
        assert_eq!(
            Isometry::from_i64(&l_u(), &[&[1, 1], &[0, 1]]),
            Err(Error::NotAnIsometry)
        );
    }

    #[test]
    fn primitive_ray_examples() {
        assert_eq!(
            ClassVector::from([2, 4]).primitive_ray().unwrap(),
            ClassVector::from([1, 2])
        );
        assert_eq!(
            ClassVector::from([0, -3]).primitive_ray().unwrap(),
            ClassVector::from([0, -1])
        );
        assert_eq!(
            ClassVector::from([3, 4]).primitive_ray().unwrap(),
            ClassVector::from([3, 4])
        );
        assert_eq!(
            ClassVector::from([0, 0]).primitive_ray(),
            Err(Error::ZeroVector)
        );
    }
}

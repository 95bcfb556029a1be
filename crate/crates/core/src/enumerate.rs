//! Enumeration of lattice vectors with prescribed norm and degree.
//!
//! The slice `{x : x.H = d}` is an affine translate of the sublattice
//! `K = H^⊥ ∩ Z^ρ`, on which the form is negative definite. Writing
//! `x = x0 + K t`, the condition `x.x = n` becomes an ellipsoid equation in
//! `t`, solved by exact Fincke–Pohst style recursion over an LDLᵀ
//! decomposition of `-Kᵀ G K`. The innermost coordinate is solved as an
//! exact quadratic instead of being scanned.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::{self, Matrix};
use crate::error::{Error, Result};
use crate::lattice::{ClassVector, Lattice, Problem};

/// Precomputed slice geometry for one `(L, H)` pair.
#[derive(Debug)]
pub(crate) struct SliceEnumerator {
    gram: Matrix,
    /// gcd of the coefficients of `x -> x.H`.
    content: BigInt,
    /// `u . H = content`.
    offset: Vec<BigInt>,
    /// Basis of `H^⊥`, one vector per entry.
    kernel: Vec<Vec<BigInt>>,
    /// `-Kᵀ G K = Uᵀ diag(pivots) U` with `U` unit upper triangular.
    pivots: Vec<BigRational>,
    upper: Vec<Vec<BigRational>>,
}

impl SliceEnumerator {
    pub(crate) fn new(lattice: &Lattice, ample: &ClassVector) -> Result<Self> {
        let gram = lattice.gram().clone();
        let functional = gram.mul_vec(ample.coords());
        let (content, mut cols) = arith::row_hermite(&functional);
        if content.is_zero() {
            return Err(Error::UnboundedQuery);
        }
        let offset = cols.remove(0);
        let kernel = cols;
        let m = kernel.len();
        let neg_pair = |a: &[BigInt], b: &[BigInt]| -arith::dot(a, &gram.mul_vec(b));
        let form: Vec<Vec<BigRational>> = (0..m)
            .map(|i| {
                (0..m)
                    .map(|j| BigRational::from(neg_pair(&kernel[i], &kernel[j])))
                    .collect()
            })
            .collect();
        let mut pivots: Vec<BigRational> = Vec::with_capacity(m);
        let mut upper = vec![vec![BigRational::zero(); m]; m];
        for i in 0..m {
            let mut d = form[i][i].clone();
            for k in 0..i {
                d -= &pivots[k] * &upper[k][i] * &upper[k][i];
            }
            if !d.is_positive() {
                return Err(Error::UnboundedQuery);
            }
            upper[i][i] = BigRational::one();
            for j in i + 1..m {
                let mut s = form[i][j].clone();
                for k in 0..i {
                    s -= &pivots[k] * &upper[k][i] * &upper[k][j];
                }
                upper[i][j] = s / &d;
            }
            pivots.push(d);
        }
        Ok(Self {
            gram,
            content,
            offset,
            kernel,
            pivots,
            upper,
        })
    }

    fn pair(&self, a: &[BigInt], b: &[BigInt]) -> BigInt {
        arith::dot(a, &self.gram.mul_vec(b))
    }

    /// Solves `A c = b` for the definite form `A = Uᵀ D U`.
    fn solve(&self, b: &[BigRational]) -> Vec<BigRational> {
        let m = b.len();
        let mut z = b.to_vec();
        for i in 0..m {
            for k in 0..i {
                let sub = &self.upper[k][i] * &z[k];
                z[i] -= sub;
            }
        }
        for i in 0..m {
            z[i] = &z[i] / &self.pivots[i];
        }
        for i in (0..m).rev() {
            for j in i + 1..m {
                let sub = &self.upper[i][j] * &z[j];
                z[i] -= sub;
            }
        }
        z
    }

    /// All `x` with `x.x = norm` and `x.H = degree`, sorted.
    pub(crate) fn query(&self, norm: &BigInt, degree: &BigInt) -> Vec<ClassVector> {
        if !degree.is_multiple_of(&self.content) {
            return Vec::new();
        }
        let scale = degree / &self.content;
        let base: Vec<BigInt> = self.offset.iter().map(|v| v * &scale).collect();
        let base_norm = self.pair(&base, &base);
        let m = self.kernel.len();
        if m == 0 {
            return if &base_norm == norm {
                vec![ClassVector::new(base)]
            } else {
                Vec::new()
            };
        }
        // x.x = base_norm + 2 b.t - tᵀ A t
        let linear: Vec<BigRational> = self
            .kernel
            .iter()
            .map(|k| BigRational::from(self.pair(k, &base)))
            .collect();
        let center = self.solve(&linear);
        let shift: BigRational = linear.iter().zip(&center).map(|(a, b)| a * b).sum();
        let radius = BigRational::from(&base_norm - norm) + shift;
        if radius.is_negative() {
            return Vec::new();
        }
        let mut found = Vec::new();
        let mut t = vec![BigInt::zero(); m];
        let mut y = vec![BigRational::zero(); m];
        self.descend(m - 1, &radius, &center, &mut t, &mut y, &mut found);
        let mut out: Vec<ClassVector> = found
            .into_iter()
            .map(|t: Vec<BigInt>| {
                let mut x = base.clone();
                for (ti, k) in t.iter().zip(&self.kernel) {
                    for (xi, ki) in x.iter_mut().zip(k) {
                        *xi += ti * ki;
                    }
                }
                ClassVector::new(x)
            })
            .collect();
        out.sort();
        out.dedup();
        out
    }

    fn descend(
        &self,
        level: usize,
        remaining: &BigRational,
        center: &[BigRational],
        t: &mut Vec<BigInt>,
        y: &mut Vec<BigRational>,
        found: &mut Vec<Vec<BigInt>>,
    ) {
        let m = center.len();
        let mut mid = center[level].clone();
        for j in level + 1..m {
            mid -= &self.upper[level][j] * &y[j];
        }
        let pivot = &self.pivots[level];
        let budget = remaining / pivot;
        if level == 0 {
            let Some(root) = arith::rational_sqrt(&budget) else {
                return;
            };
            let mut candidates = vec![&mid + &root];
            if !root.is_zero() {
                candidates.push(&mid - &root);
            }
            for c in candidates {
                if c.is_integer() {
                    t[0] = c.to_integer();
                    found.push(t.clone());
                }
            }
            return;
        }
        let reach = arith::sqrt_ceil(&budget);
        let lo = mid.floor().to_integer() - &reach;
        let hi = mid.ceil().to_integer() + &reach;
        let mut ti = lo;
        while ti <= hi {
            let yi = BigRational::from(ti.clone()) - &center[level];
            let off = BigRational::from(ti.clone()) - &mid;
            let used = pivot * &off * &off;
            if &used <= remaining {
                t[level] = ti.clone();
                y[level] = yi;
                let rest = remaining - used;
                self.descend(level - 1, &rest, center, t, y, found);
            }
            ti += 1;
        }
    }
}

/// Roots separating `H` from a class, with the degree bound that certifies
/// the list is complete.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeparatingRoots {
    pub roots: Vec<ClassVector>,
    pub degree_bound: BigInt,
}

impl Problem {
    /// Exactly the vectors with `x.x = norm` and `x.H = degree`, sorted
    /// lexicographically.
    pub fn vectors_norm_degree(&self, norm: &BigInt, degree: &BigInt) -> Result<Vec<ClassVector>> {
        Ok(self.slices().query(norm, degree))
    }

    fn vectors_up_to_degree(&self, norm: &BigInt, bound: &BigInt) -> Vec<ClassVector> {
        let mut out = Vec::new();
        let mut d = BigInt::one();
        while &d <= bound {
            out.extend(self.slices().query(norm, &d));
            d += 1;
        }
        out.sort();
        out
    }

    /// Roots `δ` with `0 < δ.H <= bound`.
    pub fn roots_up_to_degree(&self, bound: &BigInt) -> Vec<ClassVector> {
        self.vectors_up_to_degree(&BigInt::from(-2), bound)
    }

    /// Primitive isotropic `e` with `0 < e.H <= bound`. An empty answer only
    /// means none exist up to `bound`.
    pub fn isotropics_up_to_degree(&self, bound: &BigInt) -> Vec<ClassVector> {
        let mut out = self.vectors_up_to_degree(&BigInt::zero(), bound);
        out.retain(ClassVector::is_primitive);
        out
    }

    /// Upper bound on `δ.H` for any root `δ` orthogonal to a positive class
    /// `u`: Cauchy–Schwarz on the definite complement of `u` gives
    /// `(δ.H)^2 <= 2((H.u)^2/u^2 - H^2)`.
    pub(crate) fn wall_degree_bound(&self, u: &ClassVector) -> BigInt {
        let norm = self.lattice().pair(u, u);
        debug_assert!(norm.is_positive());
        let hu = self.degree(u);
        let val = BigRational::new(BigInt::from(2) * (&hu * &hu - self.ample_norm() * &norm), norm);
        if val.is_negative() {
            return BigInt::zero();
        }
        arith::isqrt(&val.floor().to_integer())
    }

    /// Degree bound for roots crossing the segment `[H, x]`.
    ///
    /// Along `u(t) = H + t(x - H)` the ratio `(H.u)^2/u^2` has derivative
    /// proportional to `t((H.p)^2 - H^2 p^2)` with `p = x - H`, which is
    /// non-negative by the reversed Cauchy–Schwarz inequality, so the
    /// maximum over the segment sits at the endpoint `x`. For isotropic `x`
    /// the bound closes to `δ.H <= x.H`.
    pub fn separating_degree_bound(&self, x: &ClassVector) -> Result<BigInt> {
        self.require_positive_closure(x)?;
        let norm = self.lattice().pair(x, x);
        if norm.is_zero() {
            return Ok(self.degree(x));
        }
        let at_h = self.wall_degree_bound(self.ample());
        let at_x = self.wall_degree_bound(x);
        Ok(at_h.max(at_x))
    }

    /// All roots `δ` with `δ.H > 0 > δ.x`.
    pub fn separating_roots(&self, x: &ClassVector) -> Result<SeparatingRoots> {
        let degree_bound = self.separating_degree_bound(x)?;
        let roots = self
            .roots_up_to_degree(&degree_bound)
            .into_iter()
            .filter(|r| self.lattice().pair(r, x).is_negative())
            .collect();
        Ok(SeparatingRoots {
            roots,
            degree_bound,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Matrix;
    use crate::lattice::validate_problem;

    fn problem(gram: &[&[i64]], h: &[i64]) -> Problem {
        validate_problem(Matrix::from_i64(gram).unwrap(), h.to_vec().into()).unwrap()
    }

    fn n(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn norm_degree_examples() {
        let u = problem(&[&[0, 1], &[1, 0]], &[2, 1]);
        assert_eq!(
            u.vectors_norm_degree(&n(-2), &n(1)).unwrap(),
            vec![ClassVector::from([-1, 1])]
        );
        assert_eq!(
            u.vectors_norm_degree(&n(-2), &n(-1)).unwrap(),
            vec![ClassVector::from([1, -1])]
        );
        let r = problem(&[&[2, 7], &[7, 2]], &[1, 1]);
        for d in -100..=100 {
            assert!(r.vectors_norm_degree(&n(-2), &n(d)).unwrap().is_empty());
        }
    }

    #[test]
    fn root_and_isotropic_examples() {
        let p = problem(&[&[4, 0], &[0, -2]], &[2, 1]);
        assert_eq!(
            p.roots_up_to_degree(&n(10)),
            vec![ClassVector::from([0, -1]), ClassVector::from([2, 3])]
        );
        assert!(p.isotropics_up_to_degree(&n(100)).is_empty());
        let u = problem(&[&[0, 1], &[1, 0]], &[2, 1]);
        assert_eq!(u.roots_up_to_degree(&n(3)), vec![ClassVector::from([-1, 1])]);
        assert_eq!(
            u.isotropics_up_to_degree(&n(2)),
            vec![ClassVector::from([0, 1]), ClassVector::from([1, 0])]
        );
        let r = problem(&[&[2, 7], &[7, 2]], &[1, 1]);
        assert!(r.roots_up_to_degree(&n(100)).is_empty());
        assert!(r.isotropics_up_to_degree(&n(100)).is_empty());
    }

    #[test]
    fn separating_examples() {
        let p = problem(&[&[4, 0], &[0, -2]], &[2, 1]);
        assert_eq!(
            p.separating_roots(&[5, 7].into()).unwrap().roots,
            vec![ClassVector::from([2, 3])]
        );
        assert!(p.separating_roots(&[2, 1].into()).unwrap().roots.is_empty());
        let u = problem(&[&[0, 1], &[1, 0]], &[2, 1]);
        let sep = u.separating_roots(&[0, 1].into()).unwrap();
        assert_eq!(sep.roots, vec![ClassVector::from([-1, 1])]);
        assert_eq!(sep.degree_bound, n(2));
        assert!(matches!(
            u.separating_roots(&[1, -1].into()),
            Err(Error::OutsidePositiveCone { .. })
        ));
    }

    #[test]
    fn rank_one_lattice() {
        let p = problem(&[&[2]], &[1]);
        assert_eq!(
            p.vectors_norm_degree(&n(2), &n(2)).unwrap(),
            vec![ClassVector::from([1])]
        );
        assert!(p.roots_up_to_degree(&n(50)).is_empty());
    }
}

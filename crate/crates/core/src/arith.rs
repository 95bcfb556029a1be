//! Exact integer and rational helpers shared by the lattice, enumeration and
//! cone modules. Nothing here touches floating point.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Square integer matrix stored row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matrix {
    rows: Vec<Vec<BigInt>>,
}

impl Matrix {
    /// Builds a matrix from rows; callers guarantee the rows form a square array.
    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Option<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return None;
        }
        Some(Self { rows })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Option<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
                .collect(),
        )
    }

    pub fn identity(n: usize) -> Self {
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                    .collect()
            })
            .collect();
        Self { rows }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.rows[i][j]
    }

    pub fn transpose(&self) -> Self {
        let n = self.dim();
        let rows = (0..n)
            .map(|i| (0..n).map(|j| self.rows[j][i].clone()).collect())
            .collect();
        Self { rows }
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        let n = self.dim();
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        (0..n)
                            .map(|k| &self.rows[i][k] * &other.rows[k][j])
                            .sum::<BigInt>()
                    })
                    .collect()
            })
            .collect();
        Matrix { rows }
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        self.rows.iter().map(|r| dot(r, v)).collect()
    }

    pub fn neg(&self) -> Matrix {
        Matrix {
            rows: self
                .rows
                .iter()
                .map(|r| r.iter().map(|v| -v).collect())
                .collect(),
        }
    }

    /// Determinant by fraction-free Bareiss elimination.
    pub fn det(&self) -> BigInt {
        let n = self.dim();
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.rows.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                    a[i][j] = v;
                }
            }
            prev = a[k][k].clone();
        }
        sign * &a[n - 1][n - 1]
    }

    /// Exact inverse when it is integral (determinant ±1 or otherwise).
    pub fn integer_inverse(&self) -> Option<Matrix> {
        let n = self.dim();
        let mut a: Vec<Vec<BigRational>> = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let mut row: Vec<BigRational> =
                    r.iter().map(|v| BigRational::from(v.clone())).collect();
                row.extend((0..n).map(|j| {
                    if i == j {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                }));
                row
            })
            .collect();
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
            a.swap(pivot, col);
            let inv = a[col][col].recip();
            for v in a[col].iter_mut() {
                *v = &*v * &inv;
            }
            for r in 0..n {
                if r != col && !a[r][col].is_zero() {
                    let f = a[r][col].clone();
                    for c in 0..2 * n {
                        let sub = &f * &a[col][c];
                        a[r][c] -= sub;
                    }
                }
            }
        }
        let mut rows = Vec::with_capacity(n);
        for row in a {
            let mut out = Vec::with_capacity(n);
            for v in &row[n..] {
                if !v.is_integer() {
                    return None;
                }
                out.push(v.to_integer());
            }
            rows.push(out);
        }
        Some(Matrix { rows })
    }
}

pub fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn gcd_all(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

/// Divides out the content of a nonzero vector, keeping its direction.
pub fn make_primitive(v: &[BigInt]) -> Vec<BigInt> {
    let g = gcd_all(v);
    if g.is_zero() || g.is_one() {
        return v.to_vec();
    }
    v.iter().map(|x| x / &g).collect()
}

/// `floor(sqrt(n))` for `n >= 0`.
pub fn isqrt(n: &BigInt) -> BigInt {
    debug_assert!(!n.is_negative());
    n.sqrt()
}

pub fn is_square(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = isqrt(n);
    (&r * &r == *n).then_some(r)
}

/// Exact square root of a non-negative rational, if it is rational.
pub fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    let n = is_square(q.numer())?;
    let d = is_square(q.denom())?;
    Some(BigRational::new(n, d))
}

/// Smallest integer `s` with `s*s >= q` for a non-negative rational `q`.
pub fn sqrt_ceil(q: &BigRational) -> BigInt {
    let f = q.ceil().to_integer();
    let mut s = isqrt(&f);
    if &s * &s < f {
        s += 1;
    }
    s
}

/// Rank of a list of integer row vectors over the rationals.
pub fn rank(rows: &[Vec<BigInt>]) -> usize {
    let mut m: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| r.iter().map(|v| BigRational::from(v.clone())).collect())
        .collect();
    if m.is_empty() {
        return 0;
    }
    let cols = m[0].len();
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(pivot, rank);
        for r in rank + 1..m.len() {
            if m[r][col].is_zero() {
                continue;
            }
            let f = &m[r][col] / &m[rank][col];
            for c in col..cols {
                let sub = &f * &m[rank][c];
                m[r][c] -= sub;
            }
        }
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}

/// Counts of positive and negative pivots in an exact symmetric reduction
/// (Sylvester inertia), plus the number of zero directions.
pub fn inertia(gram: &Matrix) -> (usize, usize, usize) {
    let n = gram.dim();
    let mut a: Vec<Vec<BigRational>> = gram
        .rows()
        .iter()
        .map(|r| r.iter().map(|v| BigRational::from(v.clone())).collect())
        .collect();
    let (mut pos, mut neg) = (0usize, 0usize);
    let mut active: Vec<usize> = (0..n).collect();
    while !active.is_empty() {
        let pivot = active.iter().copied().find(|&i| !a[i][i].is_zero());
        let p = match pivot {
            Some(p) => p,
            None => {
                // No usable diagonal: fold a partner row into row i to create one.
                let pair = active.iter().copied().find_map(|i| {
                    active
                        .iter()
                        .copied()
                        .find(|&j| j != i && !a[i][j].is_zero())
                        .map(|j| (i, j))
                });
                let Some((i, j)) = pair else { break };
                for k in 0..n {
                    let v = a[j][k].clone();
                    a[i][k] += v;
                }
                for k in 0..n {
                    let v = a[k][j].clone();
                    a[k][i] += v;
                }
                i
            }
        };
        if a[p][p].is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        active.retain(|&i| i != p);
        let piv = a[p][p].clone();
        for &i in &active {
            if a[i][p].is_zero() {
                continue;
            }
            let f = &a[i][p] / &piv;
            for k in 0..n {
                let sub = &f * &a[p][k];
                a[i][k] -= sub;
            }
        }
        for &i in &active {
            a[p][i] = BigRational::zero();
            a[i][p] = BigRational::zero();
        }
    }
    (pos, neg, n - pos - neg)
}

/// Unimodular `U` with `v * U = (g, 0, ..., 0)` and `g = gcd(v) >= 0`.
/// Columns of `U` are returned as vectors.
pub fn row_hermite(v: &[BigInt]) -> (BigInt, Vec<Vec<BigInt>>) {
    let n = v.len();
    let mut w = v.to_vec();
    let mut cols: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect();
    loop {
        let nonzero: Vec<usize> = (0..n).filter(|&i| !w[i].is_zero()).collect();
        if nonzero.len() <= 1 {
            break;
        }
        let piv = *nonzero.iter().min_by_key(|&&i| w[i].abs()).unwrap();
        for &j in &nonzero {
            if j == piv {
                continue;
            }
            let q = w[j].div_floor(&w[piv]);
            w[j] = &w[j] - &q * &w[piv];
            let sub: Vec<BigInt> = cols[piv].iter().map(|x| &q * x).collect();
            for (a, b) in cols[j].iter_mut().zip(sub) {
                *a -= b;
            }
        }
    }
    if let Some(i) = (0..n).find(|&i| !w[i].is_zero()) {
        w.swap(0, i);
        cols.swap(0, i);
        if w[0].is_negative() {
            w[0] = -w[0].clone();
            for x in cols[0].iter_mut() {
                *x = -x.clone();
            }
        }
    }
    (w[0].clone(), cols)
}

/// Lexicographic comparison helper used for canonical orderings.
pub fn lex_cmp(a: &[BigInt], b: &[BigInt]) -> std::cmp::Ordering {
    a.cmp(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bi(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn det_and_inverse() {
        let m = Matrix::from_i64(&[&[3, -2], &[4, -3]]).unwrap();
        assert_eq!(m.det(), BigInt::from(-1));
        let inv = m.integer_inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(2));
        let sing = Matrix::from_i64(&[&[1, 2], &[2, 4]]).unwrap();
        assert!(sing.det().is_zero());
        assert!(sing.integer_inverse().is_none());
        let z = Matrix::from_i64(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, -2]]).unwrap();
        assert_eq!(z.det(), BigInt::from(2));
    }

    #[test]
    fn inertia_handles_zero_diagonal() {
        let u = Matrix::from_i64(&[&[0, 1], &[1, 0]]).unwrap();
        assert_eq!(inertia(&u), (1, 1, 0));
        let r = Matrix::from_i64(&[&[2, 7], &[7, 2]]).unwrap();
        assert_eq!(inertia(&r), (1, 1, 0));
        let d = Matrix::from_i64(&[&[2, 2], &[2, 2]]).unwrap();
        assert_eq!(inertia(&d), (1, 0, 1));
        let big = Matrix::from_i64(&[
            &[0, 1, 0, 0, 0],
            &[1, 0, 0, 0, 0],
            &[0, 0, -2, 0, 0],
            &[0, 0, 0, -2, 0],
            &[0, 0, 0, 0, -2],
        ])
        .unwrap();
        assert_eq!(inertia(&big), (1, 4, 0));
    }

    #[test]
    fn row_hermite_is_unimodular() {
        for v in [bi(&[9, 9]), bi(&[8, -2]), bi(&[6, -10, 15]), bi(&[0, 0, 4])] {
            let (g, cols) = row_hermite(&v);
            assert_eq!(g, gcd_all(&v));
            assert_eq!(dot(&v, &cols[0]), g);
            for c in &cols[1..] {
                assert!(dot(&v, c).is_zero());
            }
            let u = Matrix::from_rows(cols).unwrap();
            assert!(u.det().abs().is_one());
        }
    }

    #[test]
    fn rational_helpers() {
        let q = BigRational::new(BigInt::from(9), BigInt::from(4));
        assert_eq!(rational_sqrt(&q), Some(BigRational::new(3.into(), 2.into())));
        assert_eq!(rational_sqrt(&BigRational::from(BigInt::from(2))), None);
        assert_eq!(sqrt_ceil(&BigRational::new(5.into(), 2.into())), BigInt::from(2));
        assert_eq!(sqrt_ceil(&BigRational::from(BigInt::from(4))), BigInt::from(2));
        assert_eq!(rank(&[bi(&[1, 2]), bi(&[2, 4])]), 1);
        assert_eq!(make_primitive(&bi(&[0, -3])), bi(&[0, -1]));
    }
}

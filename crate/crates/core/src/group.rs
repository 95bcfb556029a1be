//! Nef-preserving isometry groups given by verified generators, the
//! projection from the positive-cone isometries onto chamber-preserving
//! ones, degree descent along orbits, and the mod-p subspace filter.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};

use crate::arith::Matrix;
use crate::error::{Error, Result};
use crate::lattice::{ClassVector, Isometry, Problem};
use crate::weyl::NefDescription;

/// Sequence of generator indices, applied first to last.
pub type GroupWord = Vec<usize>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorReport {
    pub preserves_form: bool,
    pub preserves_positive_cone: bool,
    pub preserves_nef: bool,
}

impl GeneratorReport {
    pub fn passed(&self) -> bool {
        self.preserves_form && self.preserves_positive_cone && self.preserves_nef
    }
}

#[derive(Debug, Clone)]
pub struct Generator {
    pub isometry: Isometry,
    pub note: String,
}

/// Finite generating set, closed under inversion, of verified
/// nef-preserving isometries.
#[derive(Debug, Clone, Default)]
pub struct GroupGenerators {
    gens: Vec<Generator>,
    inverse_of: Vec<usize>,
}

impl Problem {
    pub fn verify_generator(&self, nef: &NefDescription, g: &Isometry) -> GeneratorReport {
        let preserves_form = g.preserves(self.lattice());
        let image = g.apply(self.ample());
        let preserves_positive_cone = self.degree(&image).is_positive();
        let preserves_nef = preserves_positive_cone
            && self.nef_test(&image).unwrap_or(false)
            && (!nef.certified || nef.walls.iter().all(|w| nef.walls.contains(&g.apply(w))));
        GeneratorReport {
            preserves_form,
            preserves_positive_cone,
            preserves_nef,
        }
    }

    /// `w ∘ g` where `w` walks `g(H)` back into the chamber of `H`.
    pub fn project_to_nef_group(&self, g: &Isometry) -> Result<Isometry> {
        let image = g.apply(self.ample());
        if !self.degree(&image).is_positive() {
            return Err(Error::OppositeCone);
        }
        let walk = self.walk_to_nef(&image)?;
        Ok(walk.word.to_isometry(self.lattice())?.compose(g))
    }

    /// Greedy descent of `x.H` along generators. Among equally good moves
    /// the lexicographically smallest matrix wins.
    pub fn orbit_descend(&self, gens: &GroupGenerators, x: &ClassVector) -> Result<Descent> {
        self.require_positive_closure(x)?;
        let mut current = x.clone();
        let mut degree = self.degree(x);
        let mut word = Vec::new();
        let mut degrees = vec![degree.clone()];
        loop {
            let mut best: Option<(BigInt, &Matrix, usize, ClassVector)> = None;
            for (i, g) in gens.gens.iter().enumerate() {
                let y = g.isometry.apply(&current);
                let d = self.degree(&y);
                if d >= degree {
                    continue;
                }
                let m = g.isometry.matrix();
                let better = match &best {
                    None => true,
                    Some((bd, bm, _, _)) => d < *bd || (&d == bd && m < *bm),
                };
                if better {
                    best = Some((d, m, i, y));
                }
            }
            let Some((d, _, i, y)) = best else { break };
            current = y;
            degree = d;
            word.push(i);
            degrees.push(degree.clone());
        }
        Ok(Descent {
            end: current,
            word,
            degrees,
        })
    }

    /// Bounded brute-force search for chamber-preserving isometries with
    /// entries in `[-max_entry, max_entry]`, built column by column.
    pub fn search_generators(&self, nef: &NefDescription, max_entry: u32) -> Result<Vec<Isometry>> {
        let rank = self.rank();
        let side = 2 * u64::from(max_entry) + 1;
        if side.checked_pow(rank as u32).map_or(true, |n| n > 5_000_000) {
            return Err(Error::InvalidArgument(format!(
                "generator search box {side}^{rank} is too large"
            )));
        }
        let m = i64::from(max_entry);
        let box_vectors: Vec<ClassVector> = (0..side.pow(rank as u32))
            .map(|mut k| {
                let coords: Vec<i64> = (0..rank)
                    .map(|_| {
                        let c = (k % side) as i64 - m;
                        k /= side;
                        c
                    })
                    .collect();
                ClassVector::from(coords)
            })
            .collect();
        let gram = self.lattice().gram();
        let mut found = Vec::new();
        let mut cols: Vec<ClassVector> = Vec::new();
        self.extend_columns(gram, &box_vectors, &mut cols, &mut found);
        let mut out = Vec::new();
        for mat in found {
            let g = Isometry::new(self.lattice(), mat)?;
            if g.is_identity() {
                continue;
            }
            if self.verify_generator(nef, &g).passed() {
                out.push(g);
            }
        }
        out.sort();
        Ok(out)
    }

    fn extend_columns(
        &self,
        gram: &Matrix,
        candidates: &[ClassVector],
        cols: &mut Vec<ClassVector>,
        found: &mut Vec<Matrix>,
    ) {
        let j = cols.len();
        let rank = self.rank();
        if j == rank {
            let rows = (0..rank)
                .map(|i| cols.iter().map(|c| c.coords()[i].clone()).collect())
                .collect();
            found.push(Matrix::from_rows(rows).expect("square"));
            return;
        }
        for v in candidates {
            if &self.lattice().pair(v, v) != gram.get(j, j) {
                continue;
            }
            if (0..j).any(|i| &self.lattice().pair(&cols[i], v) != gram.get(i, j)) {
                continue;
            }
            cols.push(v.clone());
            self.extend_columns(gram, candidates, cols, found);
            cols.pop();
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Descent {
    pub end: ClassVector,
    pub word: GroupWord,
    pub degrees: Vec<BigInt>,
}

impl GroupGenerators {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Verifies each generator against the chamber of `H`, drops the
    /// identity and duplicates, and adds missing inverses. Failure reports
    /// the index of the offending input.
    pub fn new(
        problem: &Problem,
        nef: &NefDescription,
        inputs: Vec<Generator>,
    ) -> std::result::Result<Self, (usize, GeneratorReport)> {
        let mut gens: Vec<Generator> = Vec::new();
        for (i, g) in inputs.into_iter().enumerate() {
            let report = problem.verify_generator(nef, &g.isometry);
            if !report.passed() {
                return Err((i, report));
            }
            if g.isometry.is_identity() || gens.iter().any(|h| h.isometry == g.isometry) {
                continue;
            }
            gens.push(g);
        }
        Ok(Self::close(gens))
    }

    fn close(mut gens: Vec<Generator>) -> Self {
        let n = gens.len();
        for i in 0..n {
            let inv = gens[i].isometry.invert();
            if !gens.iter().any(|h| h.isometry == inv) {
                gens.push(Generator {
                    isometry: inv,
                    note: format!("inverse of generator {i}"),
                });
            }
        }
        let inverse_of = (0..gens.len())
            .map(|i| {
                let inv = gens[i].isometry.invert();
                gens.iter()
                    .position(|h| h.isometry == inv)
                    .expect("closed under inversion")
            })
            .collect();
        Self { gens, inverse_of }
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn get(&self, i: usize) -> &Isometry {
        &self.gens[i].isometry
    }

    pub fn inverse_index(&self, i: usize) -> usize {
        self.inverse_of[i]
    }

    pub fn word_isometry(&self, rank: usize, word: &[usize]) -> Isometry {
        word.iter().fold(Isometry::identity(rank), |acc, &i| {
            self.gens[i].isometry.compose(&acc)
        })
    }

    pub fn apply_word(&self, word: &[usize], x: &ClassVector) -> ClassVector {
        word.iter()
            .fold(x.clone(), |y, &i| self.gens[i].isometry.apply(&y))
    }

    /// Reduced words (no letter followed by its inverse) of length
    /// `1..=max_len`, one per distinct nontrivial group element, shortest
    /// word first.
    pub fn elements_up_to(&self, rank: usize, max_len: usize) -> Vec<(GroupWord, Isometry)> {
        let mut seen: BTreeSet<Isometry> = BTreeSet::new();
        seen.insert(Isometry::identity(rank));
        let mut out = Vec::new();
        let mut frontier: Vec<(GroupWord, Isometry)> = vec![(Vec::new(), Isometry::identity(rank))];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for (word, m) in &frontier {
                for i in 0..self.gens.len() {
                    if let Some(&last) = word.last() {
                        if self.inverse_of[last] == i {
                            continue;
                        }
                    }
                    let g = self.gens[i].isometry.compose(m);
                    let mut w = word.clone();
                    w.push(i);
                    if seen.insert(g.clone()) {
                        out.push((w.clone(), g.clone()));
                    }
                    next.push((w, g));
                }
            }
            frontier = next;
        }
        out
    }
}

/// Subspace `K` of `(Z/p)^ρ` standing in for the characteristic subspace
/// of a supersingular surface.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupersingularDatum {
    p: u64,
    basis: Vec<Vec<u64>>,
    rank: usize,
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn mod_p(x: &BigInt, p: u64) -> u64 {
    x.mod_floor(&BigInt::from(p))
        .to_u64()
        .expect("residue fits")
}

fn pow_mod(b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u128;
    let mut base = u128::from(b % p);
    let m = u128::from(p);
    while e > 0 {
        if e & 1 == 1 {
            r = r * base % m;
        }
        base = base * base % m;
        e >>= 1;
    }
    r as u64
}

/// Row echelon rank over `Z/p`.
fn rank_mod_p(rows: &[Vec<u64>], p: u64) -> usize {
    let mut m: Vec<Vec<u64>> = rows.iter().map(|r| r.iter().map(|v| v % p).collect()).collect();
    if m.is_empty() {
        return 0;
    }
    let cols = m[0].len();
    let mut rank = 0;
    let pm = u128::from(p);
    for c in 0..cols {
        let Some(piv) = (rank..m.len()).find(|&r| m[r][c] != 0) else {
            continue;
        };
        m.swap(piv, rank);
        let inv = pow_mod(m[rank][c], p - 2, p);
        for v in m[rank].iter_mut() {
            *v = (u128::from(*v) * u128::from(inv) % pm) as u64;
        }
        for r in 0..m.len() {
            if r != rank && m[r][c] != 0 {
                let f = u128::from(m[r][c]);
                for k in 0..cols {
                    let sub = f * u128::from(m[rank][k]) % pm;
                    m[r][k] = ((u128::from(m[r][k]) + pm - sub) % pm) as u64;
                }
            }
        }
        rank += 1;
    }
    rank
}

impl SupersingularDatum {
    pub fn new(p: u64, rank: usize, basis: Vec<Vec<BigInt>>) -> Result<Self> {
        if p <= 2 || !is_prime(p) {
            return Err(Error::BadPrime { p });
        }
        if let Some(v) = basis.iter().find(|v| v.len() != rank) {
            return Err(Error::DimensionMismatch {
                expected: rank,
                found: v.len(),
            });
        }
        let basis: Vec<Vec<u64>> = basis
            .iter()
            .map(|v| v.iter().map(|x| mod_p(x, p)).collect())
            .collect();
        if rank_mod_p(&basis, p) != basis.len() {
            return Err(Error::DegenerateBasis);
        }
        Ok(Self { p, basis, rank })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn basis(&self) -> &[Vec<u64>] {
        &self.basis
    }

    /// `g mod p` maps the span of the basis into itself.
    pub fn preserved_by(&self, g: &Isometry) -> Result<bool> {
        if g.matrix().dim() != self.rank {
            return Err(Error::DimensionMismatch {
                expected: self.rank,
                found: g.matrix().dim(),
            });
        }
        let k = self.basis.len();
        for v in &self.basis {
            let lifted: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x)).collect();
            let image: Vec<u64> = g
                .matrix()
                .mul_vec(&lifted)
                .iter()
                .map(|x| mod_p(x, self.p))
                .collect();
            let mut rows = self.basis.clone();
            rows.push(image);
            if rank_mod_p(&rows, self.p) != k {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Keeps the generators (and their inverses) preserving `K`. This filters
    /// the given generating set; it does not compute the full stabilizer.
    pub fn filter(&self, gens: &GroupGenerators) -> Result<GroupGenerators> {
        let mut kept = Vec::new();
        for g in gens.generators() {
            if self.preserved_by(&g.isometry)? && self.preserved_by(&g.isometry.invert())? {
                kept.push(g.clone());
            }
        }
        Ok(GroupGenerators::close(kept))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::validate_problem;

    fn problem(gram: &[&[i64]], h: &[i64]) -> Problem {
        validate_problem(Matrix::from_i64(gram).unwrap(), h.to_vec().into()).unwrap()
    }

    fn cv(v: &[i64]) -> ClassVector {
        v.to_vec().into()
    }

    fn gen(p: &Problem, rows: &[&[i64]], note: &str) -> Generator {
        Generator {
            isometry: Isometry::from_i64(p.lattice(), rows).unwrap(),
            note: note.into(),
        }
    }

    #[test]
    fn verification_examples() {
        let p = problem(&[&[4, 0], &[0, -2]], &[2, 1]);
        let nef = p.nef_walls().unwrap();
        let gamma = Isometry::from_i64(p.lattice(), &[&[3, -2], &[4, -3]]).unwrap();
        assert!(p.verify_generator(&nef, &gamma).passed());
        let bad = Isometry::from_i64(p.lattice(), &[&[3, 2], &[4, 3]]).unwrap();
        let report = p.verify_generator(&nef, &bad);
        assert!(report.preserves_positive_cone && !report.preserves_nef);
        assert!(p.verify_generator(&nef, &Isometry::identity(2)).passed());
    }

    #[test]
    fn projection_examples() {
        let p = problem(&[&[4, 0], &[0, -2]], &[2, 1]);
        let bad = Isometry::from_i64(p.lattice(), &[&[3, 2], &[4, 3]]).unwrap();
        let gamma = Isometry::from_i64(p.lattice(), &[&[3, -2], &[4, -3]]).unwrap();
        assert_eq!(p.project_to_nef_group(&bad).unwrap(), gamma);
        assert_eq!(p.project_to_nef_group(&gamma).unwrap(), gamma);
        let minus = Isometry::identity(2);
        let minus = Isometry::new(p.lattice(), minus.matrix().neg()).unwrap();
        assert_eq!(p.project_to_nef_group(&minus), Err(Error::OppositeCone));
    }

    #[test]
    fn descent_examples() {
        let r = problem(&[&[2, 7], &[7, 2]], &[1, 1]);
        let nef = r.nef_walls().unwrap();
        let gens = GroupGenerators::new(
            &r,
            &nef,
            vec![
                gen(&r, &[&[0, -1], &[1, 7]], "g_R"),
                gen(&r, &[&[0, 1], &[1, 0]], "swap"),
            ],
        )
        .unwrap();
        assert_eq!(gens.len(), 3);
        let d = r.orbit_descend(&gens, &cv(&[-1, 7])).unwrap();
        assert_eq!(d.end, cv(&[0, 1]));
        assert_eq!(d.word.len(), 1);
        assert_eq!(gens.get(d.word[0]), &gens.get(0).invert());
        assert_eq!(d.degrees, vec![BigInt::from(54), BigInt::from(9)]);
        let d = r.orbit_descend(&gens, &cv(&[1, 0])).unwrap();
        assert!(d.word.is_empty());

        let p = problem(&[&[4, 0], &[0, -2]], &[2, 1]);
        let nef = p.nef_walls().unwrap();
        let gens =
            GroupGenerators::new(&p, &nef, vec![gen(&p, &[&[3, -2], &[4, -3]], "gamma")]).unwrap();
        assert_eq!(gens.len(), 1);
        let d = p.orbit_descend(&gens, &cv(&[3, 4])).unwrap();
        assert_eq!(d.end, cv(&[1, 0]));
        assert_eq!(d.word, vec![0]);
    }

    #[test]
    fn rejects_non_nef_generator() {
        let p = problem(&[&[4, 0], &[0, -2]], &[2, 1]);
        let nef = p.nef_walls().unwrap();
        let err = GroupGenerators::new(
            &p,
            &nef,
            vec![
                gen(&p, &[&[3, -2], &[4, -3]], "ok"),
                gen(&p, &[&[3, 2], &[4, 3]], "bad"),
            ],
        )
        .unwrap_err();
        assert_eq!(err.0, 1);
    }

    #[test]
    fn k_filter_examples() {
        let r = problem(&[&[2, 7], &[7, 2]], &[1, 1]);
        let g_r = Isometry::from_i64(r.lattice(), &[&[0, -1], &[1, 7]]).unwrap();
        let diag = SupersingularDatum::new(3, 2, vec![vec![1.into(), 1.into()]]).unwrap();
        assert!(diag.preserved_by(&g_r).unwrap());
        assert!(diag.preserved_by(&Isometry::identity(2)).unwrap());
        let axis = SupersingularDatum::new(3, 2, vec![vec![1.into(), 0.into()]]).unwrap();
        assert!(!axis.preserved_by(&g_r).unwrap());
        let nef = r.nef_walls().unwrap();
        let gens = GroupGenerators::new(
            &r,
            &nef,
            vec![
                gen(&r, &[&[0, -1], &[1, 7]], "g_R"),
                gen(&r, &[&[0, 1], &[1, 0]], "swap"),
            ],
        )
        .unwrap();
        assert!(axis.filter(&gens).unwrap().is_empty());
        let full = SupersingularDatum::new(
            3,
            2,
            vec![vec![1.into(), 0.into()], vec![0.into(), 1.into()]],
        )
        .unwrap();
        assert_eq!(full.filter(&gens).unwrap().len(), gens.len());
        assert_eq!(
            SupersingularDatum::new(2, 2, vec![]).unwrap_err(),
            Error::BadPrime { p: 2 }
        );
        assert_eq!(
            SupersingularDatum::new(9, 2, vec![]).unwrap_err(),
            Error::BadPrime { p: 9 }
        );
        assert_eq!(
            SupersingularDatum::new(3, 2, vec![vec![1.into(), 1.into()], vec![4.into(), 4.into()]])
                .unwrap_err(),
            Error::DegenerateBasis
        );
    }

    #[test]
    fn generator_search_finds_pell_involution() {
        let p = problem(&[&[4, 0], &[0, -2]], &[2, 1]);
        let nef = p.nef_walls().unwrap();
        let found = p.search_generators(&nef, 5).unwrap();
        let gamma = Isometry::from_i64(p.lattice(), &[&[3, -2], &[4, -3]]).unwrap();
        assert_eq!(found, vec![gamma]);
    }

    #[test]
    fn reduced_words_dedupe_elements() {
        let r = problem(&[&[2, 7], &[7, 2]], &[1, 1]);
        let nef = r.nef_walls().unwrap();
        let gens = GroupGenerators::new(
            &r,
            &nef,
            vec![
                gen(&r, &[&[0, -1], &[1, 7]], "g_R"),
                gen(&r, &[&[0, 1], &[1, 0]], "swap"),
            ],
        )
        .unwrap();
        let elems = gens.elements_up_to(2, 3);
        let distinct: BTreeSet<_> = elems.iter().map(|(_, m)| m.clone()).collect();
        assert_eq!(distinct.len(), elems.len());
        for (w, m) in &elems {
            assert_eq!(&gens.word_isometry(2, w), m);
            assert!(!m.is_identity());
        }
    }
}

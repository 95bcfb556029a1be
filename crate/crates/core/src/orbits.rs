//! Orbit tables of nodal, elliptic and genus-g classes, obtained by
//! reducing every candidate into the fundamental domain, and a bounded
//! search for isotropic vectors.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::Result;
use crate::group::{GroupGenerators, GroupWord};
use crate::lattice::{ClassVector, Isometry, Lattice, Problem};
use crate::sterk::SterkDomain;
use crate::weyl::{NefDescription, ReflectionWord};

/// Word length of the search identifying boundary points of the domain.
pub const BOUNDARY_WORD_LEN: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrbitKind {
    Nodal,
    Elliptic,
    Genus(u64),
}

impl std::fmt::Display for OrbitKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            OrbitKind::Nodal => f.write_str("nodal"),
            OrbitKind::Elliptic => f.write_str("elliptic"),
            OrbitKind::Genus(g) => write!(f, "genus({g})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Representative {
    pub class: ClassVector,
    /// First enumerated class found in this orbit.
    pub source: ClassVector,
    /// Reflections, then generators, taking `source` to `class`.
    pub walk: ReflectionWord,
    pub word: GroupWord,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitTable {
    pub kind: OrbitKind,
    pub representatives: Vec<Representative>,
    pub search_bound: BigInt,
    pub stable: bool,
}

impl OrbitTable {
    pub fn classes(&self) -> Vec<ClassVector> {
        self.representatives.iter().map(|r| r.class.clone()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsotropicSearch {
    pub found: Option<ClassVector>,
    pub bound: u64,
    pub advisory: Option<String>,
}

/// Short group elements, used to move boundary points of the domain onto
/// a canonical representative.
struct Ball {
    elements: Vec<(GroupWord, Isometry)>,
}

impl Ball {
    fn new(problem: &Problem, gens: &GroupGenerators) -> Self {
        let mut elements = vec![(Vec::new(), Isometry::identity(problem.rank()))];
        elements.extend(gens.elements_up_to(problem.rank(), BOUNDARY_WORD_LEN));
        Ball { elements }
    }

    /// Lexicographically largest image inside the domain, with its word.
    fn canonical(&self, problem: &Problem, d: &SterkDomain, y: &ClassVector) -> (ClassVector, GroupWord) {
        let mut best = (y.clone(), Vec::new());
        for (w, g) in &self.elements {
            let z = g.apply(y);
            if z > best.0 && d.cone.contains_closed(problem.lattice(), &z) {
                best = (z, w.clone());
            }
        }
        best
    }
}

impl Problem {
    fn default_orbit_bound(&self) -> BigInt {
        BigInt::from(4) * self.ample_norm()
    }

    fn classify(
        &self,
        gens: &GroupGenerators,
        d: &SterkDomain,
        ball: &Ball,
        candidates: &[ClassVector],
    ) -> Result<Vec<Representative>> {
        let mut reps: BTreeMap<ClassVector, Representative> = BTreeMap::new();
        for x in candidates {
            let r = self.reduce_to_domain(gens, d, x)?;
            let (class, extra) = ball.canonical(self, d, &r.point);
            reps.entry(class.clone()).or_insert_with(|| {
                let mut word = r.word;
                word.extend(extra);
                Representative {
                    class,
                    source: x.clone(),
                    walk: r.walk,
                    word,
                }
            });
        }
        Ok(reps.into_values().rev().collect())
    }

    fn bounded_table(
        &self,
        kind: OrbitKind,
        gens: &GroupGenerators,
        d: &SterkDomain,
        bound: Option<&BigInt>,
        candidates: impl Fn(&BigInt) -> Result<Vec<ClassVector>>,
    ) -> Result<OrbitTable> {
        let bound = bound.cloned().unwrap_or_else(|| self.default_orbit_bound());
        let ball = Ball::new(self, gens);
        let reps = self.classify(gens, d, &ball, &candidates(&bound)?)?;
        let doubled = self.classify(gens, d, &ball, &candidates(&(&bound * 2))?)?;
        let stable = d.saturated
            && reps.iter().map(|r| &r.class).eq(doubled.iter().map(|r| &r.class));
        Ok(OrbitTable {
            kind,
            representatives: reps,
            search_bound: bound,
            stable,
        })
    }

    /// Orbits of chamber walls, each identified through the image of its
    /// witness point in the domain.
    pub fn nodal_orbits(
        &self,
        nef: &NefDescription,
        gens: &GroupGenerators,
        d: &SterkDomain,
    ) -> Result<OrbitTable> {
        let ball = Ball::new(self, gens);
        let mut reps: BTreeMap<ClassVector, Representative> = BTreeMap::new();
        for w in &nef.witnesses {
            let r = self.reduce_to_domain(gens, d, &w.point)?;
            let wall = gens.apply_word(&r.word, &w.wall);
            let y = r.point;
            let mut best = (wall.clone(), Vec::new());
            for (word, g) in &ball.elements {
                let candidate = g.apply(&wall);
                if candidate > best.0 && d.cone.contains_closed(self.lattice(), &g.apply(&y)) {
                    best = (candidate, word.clone());
                }
            }
            let (class, extra) = best;
            reps.entry(class.clone()).or_insert_with(|| {
                let mut word = r.word;
                word.extend(extra);
                Representative {
                    class,
                    source: w.wall.clone(),
                    walk: ReflectionWord::default(),
                    word,
                }
            });
        }
        Ok(OrbitTable {
            kind: OrbitKind::Nodal,
            representatives: reps.into_values().rev().collect(),
            search_bound: nef
                .certification_bound
                .clone()
                .unwrap_or_else(|| d.orbit_degree_bound.clone()),
            stable: nef.certified && d.saturated,
        })
    }

    /// Primitive isotropic nef classes up to the action.
    pub fn elliptic_orbits(
        &self,
        gens: &GroupGenerators,
        d: &SterkDomain,
        bound: Option<&BigInt>,
    ) -> Result<OrbitTable> {
        self.bounded_table(OrbitKind::Elliptic, gens, d, bound, |b| {
            Ok(self.isotropics_up_to_degree(b))
        })
    }

    /// Classes of norm `2g - 2` up to the action. Genus 0 and 1 are the
    /// nodal and elliptic tables. Higher genus classes need not be
    /// primitive.
    pub fn genus_orbits(
        &self,
        nef: &NefDescription,
        gens: &GroupGenerators,
        d: &SterkDomain,
        genus: u64,
        bound: Option<&BigInt>,
    ) -> Result<OrbitTable> {
        match genus {
            0 => self.nodal_orbits(nef, gens, d),
            1 => self.elliptic_orbits(gens, d, bound),
            g => {
                let norm = BigInt::from(2) * BigInt::from(g) - 2;
                let mut table =
                    self.bounded_table(OrbitKind::Genus(g), gens, d, bound, |b| {
                        let mut out = Vec::new();
                        let mut deg = BigInt::one();
                        while &deg <= b {
                            out.extend(self.vectors_norm_degree(&norm, &deg)?);
                            deg += 1;
                        }
                        Ok(out)
                    })?;
                table.kind = OrbitKind::Genus(g);
                Ok(table)
            }
        }
    }
}

/// First primitive isotropic vector with coordinates in `[-bound, bound]`,
/// by increasing L1 norm, then lexicographically descending, first nonzero
/// coordinate positive. Not finding one proves nothing.
pub fn find_isotropic(lattice: &Lattice, bound: u64) -> IsotropicSearch {
    let rank = lattice.rank();
    let advisory = (rank >= 5).then(|| {
        "indefinite forms of rank at least 5 always represent zero; \
         a miss only means the bound is too small"
            .to_string()
    });
    let b = bound as i64;
    let mut found = None;
    let mut coords = vec![0i64; rank];
    for s in 1..=(rank as i64 * b) {
        if fill(lattice, &mut coords, 0, s, b, false, &mut found) {
            break;
        }
    }
    IsotropicSearch {
        found,
        bound,
        advisory,
    }
}

fn fill(
    lattice: &Lattice,
    coords: &mut [i64],
    i: usize,
    rem: i64,
    b: i64,
    started: bool,
    found: &mut Option<ClassVector>,
) -> bool {
    let n = coords.len();
    if i == n - 1 {
        let candidates: &[i64] = if started { &[rem, -rem] } else { &[rem] };
        for &c in candidates {
            if c.abs() > b || (c == 0 && !started) {
                continue;
            }
            coords[i] = c;
            let v = ClassVector::from(coords.to_vec());
            if v.is_primitive() && lattice.pair(&v, &v).is_zero() {
                *found = Some(v);
                return true;
            }
            if rem == 0 {
                break;
            }
        }
        return false;
    }
    let top = rem.min(b);
    let low = if started { -top } else { 0 };
    for c in (low..=top).rev() {
        coords[i] = c;
        if fill(lattice, coords, i + 1, rem - c.abs(), b, started || c != 0, found) {
            return true;
        }
    }
    coords[i] = 0;
    false
}

//! Fundamental domains for a nef-preserving group acting on the chamber of
//! `H`: the locus `{x in Nef : H.(φx - x) >= 0 for all φ}`.
//!
//! Since `H.φ(x) = φ⁻¹(H).x`, each orbit point `h` of `H` contributes the
//! linear inequality `(h - H).x >= 0`. The orbit is explored up to a degree
//! bound that is doubled until the domain stops changing.

use std::collections::{BTreeMap, VecDeque};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cone::{self, RationalCone};
use crate::error::{Error, Result};
use crate::group::{GroupGenerators, GroupWord};
use crate::lattice::{ClassVector, Problem};
use crate::weyl::{NefDescription, ReflectionWord};

/// Seed used for coverage samples unless overridden.
pub const DEFAULT_SEED: u64 = 0x6b33_636f_6e65;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitPoint {
    pub point: ClassVector,
    /// `point = word(H)`.
    pub word: GroupWord,
}

#[derive(Debug, Clone)]
pub struct SterkDomain {
    pub cone: RationalCone,
    pub orbit_degree_bound: BigInt,
    /// Orbit points whose inequality is a facet of the domain.
    pub inequalities: Vec<OrbitPoint>,
    /// Every orbit point found up to the bound, `H` first.
    pub orbit: Vec<OrbitPoint>,
    pub saturated: bool,
}

impl SterkDomain {
    pub fn rays(&self) -> &[ClassVector] {
        self.cone.rays()
    }

    pub fn require_saturated(self) -> Result<Self> {
        if self.saturated {
            Ok(self)
        } else {
            Err(Error::BoundExhausted {
                bound: self.orbit_degree_bound,
            })
        }
    }
}

#[derive(Debug, Clone)]
pub struct SterkSearch {
    /// Defaults to `4 H^2`.
    pub initial_bound: Option<BigInt>,
    pub max_doublings: u32,
}

impl Default for SterkSearch {
    fn default() -> Self {
        Self {
            initial_bound: None,
            max_doublings: 12,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reduction {
    pub point: ClassVector,
    pub walk: ReflectionWord,
    pub word: GroupWord,
}

#[derive(Debug, Clone)]
pub struct Overlap {
    pub word: GroupWord,
    pub cone: RationalCone,
}

#[derive(Debug, Clone)]
pub struct FundamentalReport {
    pub rays_nef: bool,
    pub non_nef_ray: Option<ClassVector>,
    pub coverage: bool,
    pub samples: usize,
    pub uncovered: Option<ClassVector>,
    pub tiling: bool,
    pub translates_checked: usize,
    /// Elements fixing `H` map the domain to itself and are not tested.
    pub stabilizer_skipped: usize,
    pub overlap: Option<Overlap>,
}

impl FundamentalReport {
    pub fn passed(&self) -> bool {
        self.rays_nef && self.coverage && self.tiling
    }
}

pub fn invert_word(gens: &GroupGenerators, word: &[usize]) -> GroupWord {
    word.iter().rev().map(|&i| gens.inverse_index(i)).collect()
}

impl Problem {
    /// Breadth-first orbit of `H`, keeping points of degree at most `bound`.
    pub fn ample_orbit(&self, gens: &GroupGenerators, bound: &BigInt) -> Vec<OrbitPoint> {
        let start = OrbitPoint {
            point: self.ample().clone(),
            word: Vec::new(),
        };
        let mut seen: BTreeMap<ClassVector, ()> = BTreeMap::new();
        seen.insert(start.point.clone(), ());
        let mut out = vec![start.clone()];
        let mut queue = VecDeque::from([start]);
        while let Some(p) = queue.pop_front() {
            for (i, g) in gens.generators().iter().enumerate() {
                let q = g.isometry.apply(&p.point);
                if &self.degree(&q) > bound || seen.contains_key(&q) {
                    continue;
                }
                seen.insert(q.clone(), ());
                let mut word = p.word.clone();
                word.push(i);
                let next = OrbitPoint { point: q, word };
                out.push(next.clone());
                queue.push_back(next);
            }
        }
        out
    }

    fn domain_at(&self, nef: &NefDescription, orbit: &[OrbitPoint], bound: &BigInt) -> SterkDomain {
        let h = self.ample();
        let orbit: Vec<OrbitPoint> = orbit
            .iter()
            .filter(|p| &self.degree(&p.point) <= bound)
            .cloned()
            .collect();
        let mut normals = nef.normals();
        normals.extend(orbit.iter().skip(1).map(|p| p.point.sub(h)));
        let cone = RationalCone::from_inequalities(self.lattice(), &normals);
        let mut inequalities: Vec<OrbitPoint> = Vec::new();
        for p in orbit.iter().skip(1) {
            let n = p.point.sub(h).primitive_ray().expect("orbit point differs from H");
            if cone.normals().contains(&n)
                && !inequalities
                    .iter()
                    .any(|q| q.point.sub(h).primitive_ray().ok() == Some(n.clone()))
            {
                inequalities.push(p.clone());
            }
        }
        SterkDomain {
            cone,
            orbit_degree_bound: bound.clone(),
            inequalities,
            orbit,
            saturated: false,
        }
    }

    fn domain_rays_settled(&self, gens: &GroupGenerators, d: &SterkDomain) -> Result<bool> {
        let c = &d.cone;
        if !(c.is_pointed() && c.is_full_dim()) || c.rays().is_empty() {
            return Ok(false);
        }
        for r in c.rays() {
            if !self.in_positive_closure(r) || !self.nef_test(r)? {
                return Ok(false);
            }
            let deg = self.degree(r);
            if gens
                .generators()
                .iter()
                .any(|g| self.degree(&g.isometry.apply(r)) < deg)
            {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn sterk_domain(&self, nef: &NefDescription, gens: &GroupGenerators) -> Result<SterkDomain> {
        self.sterk_domain_with(nef, gens, &SterkSearch::default())
    }

    /// Doubles the orbit bound until the domain is pointed, inside the
    /// chamber, has descent-stable rays and is unchanged at twice the bound.
    /// An unsaturated domain is returned when the ceiling is reached.
    pub fn sterk_domain_with(
        &self,
        nef: &NefDescription,
        gens: &GroupGenerators,
        search: &SterkSearch,
    ) -> Result<SterkDomain> {
        let mut bound = search
            .initial_bound
            .clone()
            .unwrap_or_else(|| BigInt::from(4) * self.ample_norm());
        if !bound.is_positive() {
            return Err(Error::InvalidArgument("orbit bound must be positive".into()));
        }
        let mut last = None;
        for _ in 0..=search.max_doublings {
            let doubled = &bound * 2;
            let orbit = self.ample_orbit(gens, &doubled);
            let mut d = self.domain_at(nef, &orbit, &bound);
            if self.domain_rays_settled(gens, &d)? {
                let next = self.domain_at(nef, &orbit, &doubled);
                if next.cone.same_as(self.lattice(), &d.cone) {
                    d.saturated = true;
                    return Ok(d);
                }
            }
            last = Some(d);
            bound = doubled;
        }
        Ok(last.expect("at least one round"))
    }

    /// Walk into the chamber, then descend along generators and violated
    /// domain inequalities until the point lies in the domain.
    pub fn reduce_to_domain(
        &self,
        gens: &GroupGenerators,
        d: &SterkDomain,
        x: &ClassVector,
    ) -> Result<Reduction> {
        let walk = self.walk_to_nef(x)?;
        let mut word = Vec::new();
        let mut y = walk.end.clone();
        loop {
            let descent = self.orbit_descend(gens, &y)?;
            word.extend(descent.word);
            y = descent.end;
            if d.cone.contains_closed(self.lattice(), &y) {
                return Ok(Reduction {
                    point: y,
                    walk: walk.word,
                    word,
                });
            }
            // y.h < y.H with h = w(H) means w⁻¹(y) has smaller degree.
            let violated = d
                .orbit
                .iter()
                .skip(1)
                .map(|p| (self.lattice().pair(&y, &p.point), p))
                .filter(|(v, _)| v < &self.degree(&y))
                .min_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.word.cmp(&b.1.word)));
            let Some((_, p)) = violated else {
                return Err(Error::CoverageFailure { point: y });
            };
            let inv = invert_word(gens, &p.word);
            y = gens.apply_word(&inv, &y);
            word.extend(inv);
        }
    }

    pub fn verify_fundamental(
        &self,
        nef: &NefDescription,
        gens: &GroupGenerators,
        d: &SterkDomain,
        samples: usize,
        word_len: usize,
        seed: u64,
    ) -> Result<FundamentalReport> {
        let lattice = self.lattice();
        let mut non_nef_ray = None;
        for r in d.rays() {
            if !self.in_positive_closure(r) || !self.nef_test(r)? {
                non_nef_ray = Some(r.clone());
                break;
            }
        }

        let mut uncovered = None;
        let points = self.sample_nef_points(nef, gens, samples, seed);
        for x in &points {
            match self.reduce_to_domain(gens, d, x) {
                Ok(_) => {}
                Err(Error::CoverageFailure { .. }) => {
                    uncovered = Some(x.clone());
                    break;
                }
                Err(e) => return Err(e),
            }
        }

        let mut overlap = None;
        let mut checked = 0;
        let mut skipped = 0;
        for (word, g) in gens.elements_up_to(self.rank(), word_len) {
            if &g.apply(self.ample()) == self.ample() {
                skipped += 1;
                continue;
            }
            checked += 1;
            let image = d.cone.transform(lattice, &g);
            if !cone::interiors_disjoint(lattice, &d.cone, &image) {
                overlap = Some(Overlap {
                    word,
                    cone: cone::intersection(lattice, &d.cone, &image),
                });
                break;
            }
        }

        Ok(FundamentalReport {
            rays_nef: non_nef_ray.is_none(),
            non_nef_ray,
            coverage: uncovered.is_none(),
            samples: points.len(),
            uncovered,
            tiling: overlap.is_none(),
            translates_checked: checked,
            stabilizer_skipped: skipped,
            overlap,
        })
    }

    /// Non-negative integer combinations (coefficients up to 6) of the
    /// chamber rays, or of `H`, wall witnesses and short-word images of `H`
    /// when the chamber has no finite ray description.
    pub fn sample_nef_points(
        &self,
        nef: &NefDescription,
        gens: &GroupGenerators,
        count: usize,
        seed: u64,
    ) -> Vec<ClassVector> {
        let base: Vec<ClassVector> = if nef.polyhedral && !nef.rays.is_empty() {
            nef.rays.clone()
        } else {
            let mut b = vec![self.ample().clone()];
            b.extend(nef.witnesses.iter().map(|w| w.point.clone()));
            b.extend(
                gens.elements_up_to(self.rank(), 2)
                    .into_iter()
                    .map(|(_, g)| g.apply(self.ample())),
            );
            b
        };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::with_capacity(count);
        while out.len() < count {
            let mut x = ClassVector::zero(self.rank());
            for b in &base {
                let c: i64 = rng.gen_range(0..=6);
                x = x.add(&b.scale(&BigInt::from(c)));
            }
            if !x.is_zero() && !self.degree(&x).is_zero() {
                out.push(x);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Matrix;
    use crate::group::Generator;
    use crate::lattice::{validate_problem, Isometry};

    fn cv(v: &[i64]) -> ClassVector {
        v.to_vec().into()
    }

    fn setup(gram: &[&[i64]], h: &[i64], gens: &[&[&[i64]]]) -> (Problem, NefDescription, GroupGenerators) {
        let p = validate_problem(Matrix::from_i64(gram).unwrap(), h.to_vec().into()).unwrap();
        let nef = p.nef_walls().unwrap();
        let g = gens
            .iter()
            .map(|rows| Generator {
                isometry: Isometry::from_i64(p.lattice(), rows).unwrap(),
                note: String::new(),
            })
            .collect();
        let gens = GroupGenerators::new(&p, &nef, g).unwrap();
        (p, nef, gens)
    }

    fn sorted(v: &[ClassVector]) -> Vec<ClassVector> {
        let mut v = v.to_vec();
        v.sort();
        v
    }

    #[test]
    fn fixture_domains() {
        let (p, nef, gens) = setup(&[&[0, 1], &[1, 0]], &[2, 1], &[]);
        let d = p.sterk_domain(&nef, &gens).unwrap();
        assert!(d.saturated);
        assert_eq!(sorted(d.rays()), vec![cv(&[1, 0]), cv(&[1, 1])]);
        assert!(d.inequalities.is_empty());

        let (p, nef, gens) = setup(&[&[4, 0], &[0, -2]], &[2, 1], &[&[&[3, -2], &[4, -3]]]);
        let d = p.sterk_domain(&nef, &gens).unwrap();
        assert!(d.saturated);
        assert_eq!(sorted(d.rays()), vec![cv(&[1, 0]), cv(&[1, 1])]);
        assert_eq!(d.inequalities.len(), 1);
        assert_eq!(d.inequalities[0].point, cv(&[4, 5]));

        let (p, nef, gens) = setup(
            &[&[2, 7], &[7, 2]],
            &[1, 1],
            &[&[&[0, -1], &[1, 7]], &[&[0, 1], &[1, 0]]],
        );
        let d = p.sterk_domain(&nef, &gens).unwrap();
        assert!(d.saturated);
        assert_eq!(sorted(d.rays()), vec![cv(&[0, 1]), cv(&[1, 0])]);
        let mut pts: Vec<_> = d.inequalities.iter().map(|q| q.point.clone()).collect();
        pts.sort();
        assert_eq!(pts, vec![cv(&[-1, 8]), cv(&[8, -1])]);
        for q in &d.inequalities {
            assert_eq!(gens.apply_word(&q.word, p.ample()), q.point);
        }
    }

    #[test]
    fn reductions() {
        let (p, nef, gens) = setup(
            &[&[2, 7], &[7, 2]],
            &[1, 1],
            &[&[&[0, -1], &[1, 7]], &[&[0, 1], &[1, 0]]],
        );
        let d = p.sterk_domain(&nef, &gens).unwrap();
        let r = p.reduce_to_domain(&gens, &d, &cv(&[-1, 7])).unwrap();
        assert_eq!(r.point, cv(&[0, 1]));
        assert_eq!(r.word.len(), 1);
        assert_eq!(gens.get(r.word[0]), &gens.get(0).invert());
        let r = p.reduce_to_domain(&gens, &d, &cv(&[2, 3])).unwrap();
        assert_eq!(r.point, cv(&[2, 3]));
        assert!(r.word.is_empty() && r.walk.is_empty());

        let (p, nef, gens) = setup(&[&[4, 0], &[0, -2]], &[2, 1], &[&[&[3, -2], &[4, -3]]]);
        let d = p.sterk_domain(&nef, &gens).unwrap();
        let r = p.reduce_to_domain(&gens, &d, &cv(&[3, 4])).unwrap();
        assert_eq!(r.point, cv(&[1, 0]));
        assert_eq!(r.word, vec![0]);
    }

    #[test]
    fn fundamentality_reports() {
        let (p, nef, gens) = setup(&[&[4, 0], &[0, -2]], &[2, 1], &[&[&[3, -2], &[4, -3]]]);
        let d = p.sterk_domain(&nef, &gens).unwrap();
        let rep = p.verify_fundamental(&nef, &gens, &d, 200, 3, DEFAULT_SEED).unwrap();
        assert!(rep.passed(), "{rep:?}");
        assert_eq!(rep.samples, 200);

        let (p, nef, gens) = setup(&[&[0, 1], &[1, 0]], &[2, 1], &[]);
        let d = p.sterk_domain(&nef, &gens).unwrap();
        let rep = p.verify_fundamental(&nef, &gens, &d, 50, 3, DEFAULT_SEED).unwrap();
        assert!(rep.passed());
        assert_eq!(rep.translates_checked, 0);
    }

    #[test]
    fn truncated_domain_overlaps() {
        let (p, nef, gens) = setup(
            &[&[2, 7], &[7, 2]],
            &[1, 1],
            &[&[&[0, -1], &[1, 7]], &[&[0, 1], &[1, 0]]],
        );
        let mut d = p.sterk_domain(&nef, &gens).unwrap();
        let rep = p.verify_fundamental(&nef, &gens, &d, 100, 3, DEFAULT_SEED).unwrap();
        assert!(rep.passed(), "{rep:?}");
        assert!(rep.stabilizer_skipped >= 1);
        let kept = d.cone.normals()[0].clone();
        d.cone = RationalCone::from_inequalities(p.lattice(), &[kept]);
        let rep = p.verify_fundamental(&nef, &gens, &d, 0, 3, DEFAULT_SEED).unwrap();
        assert!(!rep.tiling);
        let overlap = rep.overlap.unwrap();
        assert!(overlap.cone.is_full_dim());
    }

    #[test]
    fn exhausted_ceiling_is_reported() {
        let (p, nef, gens) = setup(
            &[&[2, 7], &[7, 2]],
            &[1, 1],
            &[&[&[0, -1], &[1, 7]], &[&[0, 1], &[1, 0]]],
        );
        let search = SterkSearch {
            initial_bound: Some(BigInt::from(20)),
            max_doublings: 0,
        };
        let d = p.sterk_domain_with(&nef, &gens, &search).unwrap();
        assert!(!d.saturated);
        assert!(matches!(d.require_saturated(), Err(Error::BoundExhausted { .. })));
    }
}

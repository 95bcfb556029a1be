//! Exact rational polyhedral cones with both descriptions.
//!
//! A cone is `{x : x.n >= 0 for every normal n}` where `.` is the lattice
//! pairing. Extreme rays come from an incremental double description over
//! the integers: every generator is kept primitive, and adjacency of two
//! rays is decided by the rank of the constraints tight at both.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::arith;
use crate::lattice::{ClassVector, Isometry, Lattice};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Membership {
    Interior,
    Boundary,
    Outside,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalCone {
    rank: usize,
    normals: Vec<ClassVector>,
    rays: Vec<ClassVector>,
    /// Basis of the largest linear subspace contained in the cone.
    lineality: Vec<ClassVector>,
    full_dim: bool,
}

struct Generators {
    lineality: Vec<Vec<BigInt>>,
    rays: Vec<Vec<BigInt>>,
}

fn dd(rank: usize, functionals: &[Vec<BigInt>]) -> Generators {
    let mut lineality: Vec<Vec<BigInt>> = (0..rank)
        .map(|i| {
            (0..rank)
                .map(|j| BigInt::from((i == j) as i64))
                .collect()
        })
        .collect();
    let mut rays: Vec<Vec<BigInt>> = Vec::new();
    for (step, a) in functionals.iter().enumerate() {
        if let Some(pos) = lineality
            .iter()
            .position(|l| !arith::dot(a, l).is_zero())
        {
            let mut l0 = lineality.remove(pos);
            let mut al0 = arith::dot(a, &l0);
            if al0.is_negative() {
                l0 = l0.iter().map(|v| -v).collect();
                al0 = -al0;
            }
            let project = |v: &Vec<BigInt>| -> Vec<BigInt> {
                let av = arith::dot(a, v);
                let w: Vec<BigInt> = v
                    .iter()
                    .zip(&l0)
                    .map(|(x, y)| &al0 * x - &av * y)
                    .collect();
                arith::make_primitive(&w)
            };
            lineality = lineality.iter().map(project).collect();
            rays = rays.iter().map(project).collect();
            rays.push(l0);
            continue;
        }
        let processed = &functionals[..step];
        let values: Vec<BigInt> = rays.iter().map(|r| arith::dot(a, r)).collect();
        if values.iter().all(|v| !v.is_negative()) {
            continue;
        }
        // Adjacent pairs span a 2-face modulo the lineality space.
        let target_rank = (rank - lineality.len()).checked_sub(2);
        let tight = |r: &Vec<BigInt>| -> Vec<bool> {
            processed.iter().map(|f| arith::dot(f, r).is_zero()).collect()
        };
        let tights: Vec<Vec<bool>> = rays.iter().map(tight).collect();
        let mut next: Vec<Vec<BigInt>> = Vec::new();
        for (i, r) in rays.iter().enumerate() {
            if !values[i].is_negative() {
                next.push(r.clone());
            }
        }
        for (i, p) in rays.iter().enumerate() {
            let Some(target_rank) = target_rank else { break };
            if !values[i].is_positive() {
                continue;
            }
            for (j, q) in rays.iter().enumerate() {
                if !values[j].is_negative() {
                    continue;
                }
                let common: Vec<Vec<BigInt>> = processed
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| tights[i][*k] && tights[j][*k])
                    .map(|(_, f)| f.clone())
                    .collect();
                if common.len() < target_rank || arith::rank(&common) != target_rank {
                    continue;
                }
                let w: Vec<BigInt> = q
                    .iter()
                    .zip(p)
                    .map(|(qv, pv)| &values[i] * qv - &values[j] * pv)
                    .collect();
                next.push(arith::make_primitive(&w));
            }
        }
        next.sort();
        next.dedup();
        rays = next;
    }
    rays.sort();
    Generators { lineality, rays }
}

impl RationalCone {
    /// Extreme rays of `{x : x.n >= 0}` with a minimal normal set.
    /// An empty normal set yields the whole space, flagged by
    /// [`RationalCone::is_full_space`].
    pub fn from_inequalities(lattice: &Lattice, normals: &[ClassVector]) -> RationalCone {
        let normals = remove_redundant(lattice, normals);
        Self::build(lattice, normals)
    }

    fn build(lattice: &Lattice, normals: Vec<ClassVector>) -> RationalCone {
        let rank = lattice.rank();
        let functionals: Vec<Vec<BigInt>> = normals.iter().map(|n| lattice.functional(n)).collect();
        let g = dd(rank, &functionals);
        let dim = g.lineality.len() + arith::rank(&g.rays);
        RationalCone {
            rank,
            normals,
            rays: g.rays.into_iter().map(ClassVector::new).collect(),
            lineality: g.lineality.into_iter().map(ClassVector::new).collect(),
            full_dim: dim == rank,
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn normals(&self) -> &[ClassVector] {
        &self.normals
    }

    pub fn rays(&self) -> &[ClassVector] {
        &self.rays
    }

    pub fn lineality(&self) -> &[ClassVector] {
        &self.lineality
    }

    pub fn is_full_dim(&self) -> bool {
        self.full_dim
    }

    pub fn dimension(&self) -> usize {
        let rays: Vec<Vec<BigInt>> = self
            .rays
            .iter()
            .chain(&self.lineality)
            .map(|r| r.coords().to_vec())
            .collect();
        arith::rank(&rays)
    }

    pub fn is_pointed(&self) -> bool {
        self.lineality.is_empty()
    }

    pub fn is_full_space(&self) -> bool {
        self.normals.is_empty()
    }

    pub fn contains(&self, lattice: &Lattice, x: &ClassVector) -> Membership {
        let mut boundary = false;
        for n in &self.normals {
            let v = lattice.pair(x, n);
            if v.is_negative() {
                return Membership::Outside;
            }
            boundary |= v.is_zero();
        }
        if boundary || !self.full_dim {
            Membership::Boundary
        } else {
            Membership::Interior
        }
    }

    pub fn contains_closed(&self, lattice: &Lattice, x: &ClassVector) -> bool {
        self.contains(lattice, x) != Membership::Outside
    }

    /// Image under an isometry: both normals and rays are transported.
    pub fn transform(&self, lattice: &Lattice, g: &Isometry) -> RationalCone {
        let normals: Vec<ClassVector> = self
            .normals
            .iter()
            .map(|n| g.apply(n))
            .collect();
        Self::build(lattice, canonical(normals))
    }

    /// Same point set as another cone (mutual containment of generators).
    pub fn same_as(&self, lattice: &Lattice, other: &RationalCone) -> bool {
        self.subset_of(lattice, other) && other.subset_of(lattice, self)
    }

    pub fn subset_of(&self, lattice: &Lattice, other: &RationalCone) -> bool {
        let gens_ok = self.rays.iter().all(|r| other.contains_closed(lattice, r));
        let lin_ok = self.lineality.iter().all(|l| {
            other.contains_closed(lattice, l) && other.contains_closed(lattice, &l.neg())
        });
        gens_ok && lin_ok
    }

    /// Every ray satisfies every normal, and for pointed full-dimensional
    /// cones every normal is supported by `rank - 1` independent rays.
    pub fn is_dual_consistent(&self, lattice: &Lattice) -> bool {
        let rays_ok = self.rays.iter().all(|r| {
            self.normals
                .iter()
                .all(|n| !lattice.pair(r, n).is_negative())
        });
        if !rays_ok {
            return false;
        }
        if !(self.full_dim && self.is_pointed()) {
            return true;
        }
        self.normals.iter().all(|n| {
            let on: Vec<Vec<BigInt>> = self
                .rays
                .iter()
                .filter(|r| lattice.pair(r, n).is_zero())
                .map(|r| r.coords().to_vec())
                .collect();
            arith::rank(&on) == self.rank - 1
        })
    }

    /// Rays of the cone lying on the hyperplane of a normal.
    pub fn rays_on(&self, lattice: &Lattice, normal: &ClassVector) -> Vec<ClassVector> {
        self.rays
            .iter()
            .filter(|r| lattice.pair(r, normal).is_zero())
            .cloned()
            .collect()
    }
}

fn canonical(normals: Vec<ClassVector>) -> Vec<ClassVector> {
    let mut out: Vec<ClassVector> = normals
        .into_iter()
        .filter(|n| !n.is_zero())
        .map(|n| n.primitive_ray().expect("nonzero"))
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Minimal subset of normals defining the same cone. Normals are made
/// primitive and sorted first, then dropped greedily in that order whenever
/// the cone cut out by the rest already satisfies them.
pub fn remove_redundant(lattice: &Lattice, normals: &[ClassVector]) -> Vec<ClassVector> {
    let mut kept = canonical(normals.to_vec());
    if kept.len() <= 1 {
        return kept;
    }
    let rank = lattice.rank();
    let mut i = 0;
    while i < kept.len() {
        let others: Vec<Vec<BigInt>> = kept
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, n)| lattice.functional(n))
            .collect();
        let g = dd(rank, &others);
        let target = lattice.functional(&kept[i]);
        let implied = g.rays.iter().all(|r| !arith::dot(&target, r).is_negative())
            && g.lineality.iter().all(|l| arith::dot(&target, l).is_zero());
        if implied {
            kept.remove(i);
        } else {
            i += 1;
        }
    }
    kept
}

/// `true` iff the intersection of the two cones has empty interior.
pub fn interiors_disjoint(lattice: &Lattice, a: &RationalCone, b: &RationalCone) -> bool {
    let mut normals = a.normals.clone();
    normals.extend(b.normals.iter().cloned());
    !RationalCone::from_inequalities(lattice, &normals).is_full_dim()
}

/// The intersection cone, for reporting overlap witnesses.
pub fn intersection(lattice: &Lattice, a: &RationalCone, b: &RationalCone) -> RationalCone {
    let mut normals = a.normals.clone();
    normals.extend(b.normals.iter().cloned());
    RationalCone::from_inequalities(lattice, &normals)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l_p() -> Lattice {
        Lattice::from_i64(&[&[4, 0], &[0, -2]]).unwrap()
    }

    fn cv(v: &[i64]) -> ClassVector {
        v.to_vec().into()
    }

    #[test]
    fn pell_nef_rays() {
        let l = l_p();
        let c = RationalCone::from_inequalities(&l, &[cv(&[0, -1]), cv(&[2, 3])]);
        assert_eq!(c.rays(), &[cv(&[1, 0]), cv(&[3, 4])]);
        assert!(c.is_full_dim() && c.is_pointed());
        assert!(c.is_dual_consistent(&l));
        assert_eq!(c.contains(&l, &cv(&[1, 1])), Membership::Interior);
        assert_eq!(c.contains(&l, &cv(&[1, 0])), Membership::Boundary);
        assert_eq!(c.contains(&l, &cv(&[0, -1])), Membership::Outside);
    }

    #[test]
    fn rootless_orbit_inequalities() {
        let l = Lattice::from_i64(&[&[2, 7], &[7, 2]]).unwrap();
        let c = RationalCone::from_inequalities(&l, &[cv(&[7, -2]), cv(&[-2, 7])]);
        assert_eq!(c.rays(), &[cv(&[0, 1]), cv(&[1, 0])]);
    }

    #[test]
    fn opposite_normals_give_hyperplane() {
        let l = l_p();
        let c = RationalCone::from_inequalities(&l, &[cv(&[1, 2]), cv(&[-1, -2])]);
        assert!(!c.is_full_dim());
        assert_eq!(c.lineality().len(), 1);
        assert!(c.rays().is_empty());
        let whole = RationalCone::from_inequalities(&l, &[]);
        assert!(whole.is_full_space() && whole.is_full_dim());
    }

    #[test]
    fn redundancy() {
        let l = l_p();
        assert_eq!(
            remove_redundant(&l, &[cv(&[0, -1]), cv(&[2, 3]), cv(&[12, 17])]),
            vec![cv(&[0, -1]), cv(&[2, 3])]
        );
        assert_eq!(
            remove_redundant(&l, &[cv(&[2, 3]), cv(&[4, 6])]),
            vec![cv(&[2, 3])]
        );
        assert_eq!(remove_redundant(&l, &[cv(&[2, 3])]), vec![cv(&[2, 3])]);
    }

    #[test]
    fn tiling_overlap() {
        let l = l_p();
        // D = cone{(1,0),(1,1)} and its image cone{(1,1),(3,4)} share a ray.
        let d = RationalCone::from_inequalities(&l, &[cv(&[0, -1]), cv(&[1, 2])]);
        assert_eq!(d.rays(), &[cv(&[1, 0]), cv(&[1, 1])]);
        let g = Isometry::from_i64(&l, &[&[3, -2], &[4, -3]]).unwrap();
        let gd = d.transform(&l, &g);
        assert_eq!(gd.rays(), &[cv(&[1, 1]), cv(&[3, 4])]);
        assert!(interiors_disjoint(&l, &d, &gd));
        assert!(!interiors_disjoint(&l, &d, &d));
        let opposite = RationalCone::from_inequalities(&l, &[cv(&[0, 1]), cv(&[-1, -2])]);
        assert!(interiors_disjoint(&l, &d, &opposite));
    }

    #[test]
    fn three_dimensional_cube_corner() {
        let l = Lattice::from_i64(&[&[2, 0, 0], &[0, -2, 0], &[0, 0, -2]]).unwrap();
        // x.n for n = e1 is 2 x1, for n = -e2 is 2 x2, for n = -e3 is 2 x3.
        let c = RationalCone::from_inequalities(
            &l,
            &[cv(&[1, 0, 0]), cv(&[0, -1, 0]), cv(&[0, 0, -1]), cv(&[1, -1, 0])],
        );
        assert_eq!(c.normals().len(), 3);
        assert_eq!(c.rays(), &[cv(&[0, 0, 1]), cv(&[0, 1, 0]), cv(&[1, 0, 0])]);
        assert!(c.is_dual_consistent(&l));
    }
}

//! Weyl chambers: walking classes into the nef chamber of the ample class,
//! nef membership, and discovery of the chamber walls.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::binary;
use crate::cone::RationalCone;
use crate::error::Result;
use crate::lattice::{ClassVector, Isometry, Lattice, Problem};

/// Sequence of root reflections, applied first to last.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ReflectionWord {
    pub roots: Vec<ClassVector>,
}

impl ReflectionWord {
    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn apply(&self, lattice: &Lattice, x: &ClassVector) -> Result<ClassVector> {
        let mut y = x.clone();
        for r in &self.roots {
            y = lattice.reflect_in_root(r, &y)?;
        }
        Ok(y)
    }

    /// Composite isometry `s_k ∘ ... ∘ s_1`.
    pub fn to_isometry(&self, lattice: &Lattice) -> Result<Isometry> {
        let mut m = Isometry::identity(lattice.rank());
        for r in &self.roots {
            m = lattice.reflection(r)?.compose(&m);
        }
        Ok(m)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Walk {
    pub end: ClassVector,
    pub word: ReflectionWord,
    /// `x.H` before the first step and after every step.
    pub degrees: Vec<BigInt>,
}

/// Parameter `t` in `[0, 1]` where the wall of `root` meets `H + t(x - H)`.
fn crossing(problem: &Problem, root: &ClassVector, x: &ClassVector) -> BigRational {
    let at_h = problem.degree(root);
    let at_x = problem.lattice().pair(root, x);
    BigRational::new(at_h.clone(), at_h - at_x)
}

impl Problem {
    /// Reflects `x` across separating walls until none remain. Each step
    /// crosses the wall met first on the segment from `H` to `x` (ties go to
    /// the lexicographically smallest root) and strictly lowers `x.H`.
    pub fn walk_to_nef(&self, x: &ClassVector) -> Result<Walk> {
        self.require_positive_closure(x)?;
        let mut current = x.clone();
        let mut word = ReflectionWord::default();
        let mut degrees = vec![self.degree(x)];
        loop {
            let sep = self.separating_roots(&current)?;
            let Some(root) = sep
                .roots
                .iter()
                .min_by(|a, b| {
                    crossing(self, a, &current)
                        .cmp(&crossing(self, b, &current))
                        .then_with(|| a.cmp(b))
                })
                .cloned()
            else {
                break;
            };
            current = self.lattice().reflect_in_root(&root, &current)?;
            degrees.push(self.degree(&current));
            word.roots.push(root);
        }
        Ok(Walk {
            end: current,
            word,
            degrees,
        })
    }

    pub fn nef_test(&self, x: &ClassVector) -> Result<bool> {
        Ok(self.separating_roots(x)?.roots.is_empty())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WallWitness {
    pub wall: ClassVector,
    /// On the wall, strictly inside every other facet.
    pub point: ClassVector,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NefDescription {
    /// Roots supporting facets of the chamber of `H`.
    pub walls: Vec<ClassVector>,
    /// Extreme rays; empty when the chamber has irrational boundary.
    pub rays: Vec<ClassVector>,
    /// Non-root facet normals (rational isotropic boundary in rank 2).
    pub boundary_normals: Vec<ClassVector>,
    pub polyhedral: bool,
    /// The wall list is proven complete.
    pub certified: bool,
    pub certification_bound: Option<BigInt>,
    pub witnesses: Vec<WallWitness>,
    pub cone: Option<RationalCone>,
}

impl NefDescription {
    /// All facet normals of the chamber (walls and boundary normals).
    pub fn normals(&self) -> Vec<ClassVector> {
        let mut out = self.walls.clone();
        out.extend(self.boundary_normals.iter().cloned());
        out
    }
}

/// Limits for wall discovery.
#[derive(Debug, Clone)]
pub struct WallSearch {
    pub max_doublings: u32,
}

impl Default for WallSearch {
    fn default() -> Self {
        Self { max_doublings: 12 }
    }
}

impl Problem {
    pub fn nef_walls(&self) -> Result<NefDescription> {
        self.nef_walls_with(&WallSearch::default())
    }

    pub fn nef_walls_with(&self, search: &WallSearch) -> Result<NefDescription> {
        match self.rank() {
            1 => Ok(self.rank_one_chamber()),
            2 => self.binary_chamber(search),
            _ => self.general_chamber(search, Vec::new()),
        }
    }

    fn rank_one_chamber(&self) -> NefDescription {
        let ray = self.ample().primitive_ray().expect("ample is nonzero");
        let cone = RationalCone::from_inequalities(self.lattice(), std::slice::from_ref(&ray));
        NefDescription {
            walls: Vec::new(),
            rays: vec![ray.clone()],
            boundary_normals: vec![ray],
            polyhedral: true,
            certified: true,
            certification_bound: Some(BigInt::zero()),
            witnesses: Vec::new(),
            cone: Some(cone),
        }
    }

    fn binary_chamber(&self, search: &WallSearch) -> Result<NefDescription> {
        if let Some(iso) = binary::isotropic_rays(self) {
            let mut nef = self.general_chamber(search, iso.to_vec())?;
            if nef.walls.is_empty() && nef.certified {
                // Rootless: the chamber is the whole (rational) positive cone.
                nef.polyhedral = false;
            }
            return Ok(nef);
        }
        let automorph = binary::pell_automorph(self.lattice())
            .expect("irrational isotropic directions admit a Pell automorph");
        // Every root is an automorph translate of one whose perpendicular
        // positive class lies between H and ε(H); that caps its degree.
        let bound = self.wall_degree_bound(&automorph.apply(self.ample()));
        if self.roots_up_to_degree(&bound).is_empty() {
            return Ok(NefDescription {
                walls: Vec::new(),
                rays: Vec::new(),
                boundary_normals: Vec::new(),
                polyhedral: false,
                certified: true,
                certification_bound: Some(bound),
                witnesses: Vec::new(),
                cone: None,
            });
        }
        self.general_chamber(search, Vec::new())
    }

    /// Doubles the root degree bound from `2 H^2` until the cone cut out by
    /// the roots found (and any fixed boundary normals) has all its rays in
    /// the closed positive cone and each ray passes the complete nef test.
    /// Then every point of the cone is nef, so the wall list is complete.
    fn general_chamber(
        &self,
        search: &WallSearch,
        boundary: Vec<ClassVector>,
    ) -> Result<NefDescription> {
        let mut bound = BigInt::from(2) * self.ample_norm();
        let mut last = None;
        for _ in 0..=search.max_doublings {
            let cone = self.candidate_chamber(&bound, &boundary);
            if self.chamber_certified(&cone)? {
                let wider = self.candidate_chamber(&(&bound * 2), &boundary);
                if wider.normals() == cone.normals() {
                    return Ok(self.describe(cone, &boundary, true, Some(bound)));
                }
            }
            last = Some(cone);
            bound *= 2;
        }
        let cone = last.expect("at least one round");
        Ok(self.describe(cone, &boundary, false, None))
    }

    fn candidate_chamber(&self, bound: &BigInt, boundary: &[ClassVector]) -> RationalCone {
        let mut normals = self.roots_up_to_degree(bound);
        normals.extend(boundary.iter().cloned());
        RationalCone::from_inequalities(self.lattice(), &normals)
    }

    fn chamber_certified(&self, cone: &RationalCone) -> Result<bool> {
        if !(cone.is_pointed() && cone.is_full_dim()) || cone.rays().is_empty() {
            return Ok(false);
        }
        for r in cone.rays() {
            if !self.in_positive_closure(r) || !self.nef_test(r)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn describe(
        &self,
        cone: RationalCone,
        boundary: &[ClassVector],
        certified: bool,
        bound: Option<BigInt>,
    ) -> NefDescription {
        let lattice = self.lattice();
        let minus_two = BigInt::from(-2);
        let walls: Vec<ClassVector> = cone
            .normals()
            .iter()
            .filter(|n| lattice.norm(n) == minus_two)
            .cloned()
            .collect();
        let boundary_normals: Vec<ClassVector> = cone
            .normals()
            .iter()
            .filter(|n| boundary.contains(n))
            .cloned()
            .collect();
        let witnesses = if certified {
            walls
                .iter()
                .map(|w| {
                    let on = cone.rays_on(lattice, w);
                    let point = on
                        .iter()
                        .skip(1)
                        .fold(on[0].clone(), |acc, r| acc.add(r));
                    WallWitness {
                        wall: w.clone(),
                        point,
                    }
                })
                .collect()
        } else {
            Vec::new()
        };
        NefDescription {
            polyhedral: certified,
            rays: if certified { cone.rays().to_vec() } else { Vec::new() },
            walls,
            boundary_normals,
            certified,
            certification_bound: bound,
            witnesses,
            cone: certified.then_some(cone),
        }
    }

    /// Chamber-membership predicate usable when the chamber is not
    /// polyhedral: closed positive cone plus every known wall.
    pub fn in_nef_closure(&self, nef: &NefDescription, x: &ClassVector) -> bool {
        if !self.in_positive_closure(x) {
            return false;
        }
        nef.normals()
            .iter()
            .all(|n| !self.lattice().pair(x, n).is_negative())
    }
}

impl WallWitness {
    pub fn is_valid(&self, problem: &Problem, walls: &[ClassVector]) -> bool {
        let l = problem.lattice();
        l.pair(&self.point, &self.wall).is_zero()
            && problem.degree(&self.point).is_positive()
            && walls
                .iter()
                .filter(|w| *w != &self.wall)
                .all(|w| l.pair(&self.point, w).is_positive())
    }
}

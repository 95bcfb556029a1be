//! Brute-force oracles shared by the integration tests. Everything here is
//! deliberately naive: fixed-width integers and exhaustive box searches.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::PathBuf;

use k3cone::arith::Matrix;
use k3cone::io::{parse_problem, Validated};
use k3cone::lattice::{ClassVector, Lattice, Problem};
use k3cone::sterk::SterkDomain;
use num_traits::ToPrimitive;
use rand::Rng;

pub const FIXTURES: [&str; 3] = ["l_u", "l_p", "l_r"];

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(format!("{name}.json"))
}

pub fn fixture_bytes(name: &str) -> Vec<u8> {
    std::fs::read(fixture_path(name)).expect("fixture exists")
}

pub fn load(name: &str) -> Validated {
    parse_problem(&fixture_bytes(name)).expect("fixture validates")
}

pub fn domain(v: &Validated) -> SterkDomain {
    v.problem.sterk_domain(&v.nef, &v.gens).expect("domain")
}

pub fn cv(v: &[i64]) -> ClassVector {
    v.to_vec().into()
}

pub fn to_i64(x: &ClassVector) -> Vec<i64> {
    x.coords().iter().map(|c| c.to_i64().expect("small")).collect()
}

pub fn gram_i64(l: &Lattice) -> Vec<Vec<i64>> {
    l.gram()
        .rows()
        .iter()
        .map(|r| r.iter().map(|c| c.to_i64().expect("small")).collect())
        .collect()
}

pub fn pair(g: &[Vec<i64>], x: &[i64], y: &[i64]) -> i64 {
    let mut s = 0;
    for i in 0..x.len() {
        for j in 0..y.len() {
            s += x[i] * g[i][j] * y[j];
        }
    }
    s
}

pub fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

pub fn is_primitive(x: &[i64]) -> bool {
    x.iter().fold(0, |g, &c| gcd(g, c)) == 1
}

/// Calls `f` on every vector of `[-r, r]^n`.
pub fn for_box(n: usize, r: i64, mut f: impl FnMut(&[i64])) {
    let mut x = vec![-r; n];
    loop {
        f(&x);
        let mut i = 0;
        loop {
            if i == n {
                return;
            }
            if x[i] < r {
                x[i] += 1;
                break;
            }
            x[i] = -r;
            i += 1;
        }
    }
}

/// Box vectors bucketed by `(norm, degree)` within the given ranges.
pub fn box_buckets(
    g: &[Vec<i64>],
    h: &[i64],
    radius: i64,
    max_norm: i64,
    max_degree: i64,
) -> BTreeMap<(i64, i64), Vec<Vec<i64>>> {
    let gh: Vec<i64> = (0..h.len())
        .map(|i| (0..h.len()).map(|j| g[i][j] * h[j]).sum())
        .collect();
    let mut out: BTreeMap<(i64, i64), Vec<Vec<i64>>> = BTreeMap::new();
    for_box(h.len(), radius, |x| {
        let d: i64 = x.iter().zip(&gh).map(|(a, b)| a * b).sum();
        if d.abs() > max_degree {
            return;
        }
        let n = pair(g, x, x);
        if n.abs() <= max_norm {
            out.entry((n, d)).or_default().push(x.to_vec());
        }
    });
    for v in out.values_mut() {
        v.sort();
    }
    out
}

/// Roots with `0 < degree <= max_degree` in the box.
pub fn box_roots(g: &[Vec<i64>], h: &[i64], radius: i64, max_degree: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    for_box(h.len(), radius, |x| {
        let d = pair(g, x, h);
        if d > 0 && d <= max_degree && pair(g, x, x) == -2 {
            out.push(x.to_vec());
        }
    });
    out.sort();
    out
}

/// Random even lattice of signature (1, 2) with entries in `[-6, 6]` and an
/// ample class off every wall.
pub fn random_rank3(rng: &mut impl Rng) -> Problem {
    loop {
        let mut m = [[0i64; 3]; 3];
        for i in 0..3 {
            m[i][i] = 2 * rng.gen_range(-3..=3);
            for j in i + 1..3 {
                let v = rng.gen_range(-6..=6);
                m[i][j] = v;
                m[j][i] = v;
            }
        }
        let rows: Vec<&[i64]> = m.iter().map(|r| r.as_slice()).collect();
        let Ok(lattice) = Lattice::new(Matrix::from_i64(&rows).unwrap()) else {
            continue;
        };
        let g = gram_i64(&lattice);
        let mut found = None;
        for_box(3, 3, |x| {
            if found.is_none() && pair(&g, x, x) > 0 {
                if let Ok(p) = Problem::new(lattice.clone(), cv(x)) {
                    found = Some(p);
                }
            }
        });
        if let Some(p) = found {
            return p;
        }
    }
}

/// Random class of the positive cone with coordinates in `[-r, r]`.
pub fn random_positive(p: &Problem, r: i64, rng: &mut impl Rng) -> ClassVector {
    let g = gram_i64(p.lattice());
    let h = to_i64(p.ample());
    loop {
        let x: Vec<i64> = (0..p.rank()).map(|_| rng.gen_range(-r..=r)).collect();
        if pair(&g, &x, &x) <= 0 {
            continue;
        }
        let sign = if pair(&g, &x, &h) > 0 { 1 } else { -1 };
        return cv(&x.iter().map(|c| c * sign).collect::<Vec<_>>());
    }
}

/// `x` is a non-negative combination of the two rays (rank 2 only).
pub fn in_planar_cone(rays: &[ClassVector], x: &ClassVector) -> bool {
    let (a, b) = (to_i64(&rays[0]), to_i64(&rays[1]));
    let x = to_i64(x);
    let det = (a[0] * b[1] - a[1] * b[0]) as i128;
    let s = (x[0] * b[1] - x[1] * b[0]) as i128;
    let t = (a[0] * x[1] - a[1] * x[0]) as i128;
    det != 0 && s * det.signum() >= 0 && t * det.signum() >= 0
}

pub fn sorted(v: &[ClassVector]) -> Vec<ClassVector> {
    let mut v = v.to_vec();
    v.sort();
    v
}

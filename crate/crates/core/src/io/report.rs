//! Versioned JSON reports. Every integer is written as a decimal string.

use num_bigint::BigInt;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::arith::Matrix;
use crate::cone::RationalCone;
use crate::lattice::ClassVector;
use crate::orbits::OrbitTable;
use crate::sterk::{FundamentalReport, OrbitPoint, SterkDomain};
use crate::weyl::{NefDescription, ReflectionWord};

pub const SCHEMA_ID: &str = "k3cone/report/v1";

#[derive(Debug, Clone)]
pub struct Report {
    pub command: String,
    pub args: Map<String, Value>,
    pub input_digest: String,
    pub results: Map<String, Value>,
    pub certificates: Map<String, Value>,
    pub warnings: Vec<String>,
}

impl Report {
    pub fn new(command: &str, input: &[u8]) -> Self {
        Report {
            command: command.to_string(),
            args: Map::new(),
            input_digest: hex::encode(Sha256::digest(input)),
            results: Map::new(),
            certificates: Map::new(),
            warnings: Vec::new(),
        }
    }

    pub fn arg(&mut self, key: &str, value: impl ToString) {
        self.args.insert(key.into(), Value::String(value.to_string()));
    }

    pub fn result(&mut self, key: &str, value: Value) {
        self.results.insert(key.into(), value);
    }

    pub fn certify(&mut self, key: &str, ok: bool) {
        self.certificates.insert(key.into(), Value::Bool(ok));
    }

    pub fn all_certified(&self) -> bool {
        self.certificates.values().all(|v| v == &Value::Bool(true))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "schema": SCHEMA_ID,
            "command": {"name": self.command, "args": self.args},
            "input_digest": self.input_digest,
            "results": self.results,
            "certificates": self.certificates,
            "warnings": self.warnings,
        })
    }
}

pub fn int(x: &BigInt) -> Value {
    Value::String(x.to_string())
}

pub fn count(n: usize) -> Value {
    Value::String(n.to_string())
}

pub fn vector(v: &ClassVector) -> Value {
    Value::Array(v.coords().iter().map(int).collect())
}

pub fn vectors(vs: &[ClassVector]) -> Value {
    Value::Array(vs.iter().map(vector).collect())
}

pub fn matrix(m: &Matrix) -> Value {
    Value::Array(
        m.rows()
            .iter()
            .map(|r| Value::Array(r.iter().map(int).collect()))
            .collect(),
    )
}

pub fn word(w: &[usize]) -> Value {
    Value::Array(w.iter().map(|&i| count(i)).collect())
}

pub fn reflections(w: &ReflectionWord) -> Value {
    vectors(&w.roots)
}

pub fn cone(c: &RationalCone) -> Value {
    json!({
        "rays": vectors(c.rays()),
        "normals": vectors(c.normals()),
        "lineality": vectors(c.lineality()),
    })
}

pub fn nef(n: &NefDescription) -> Value {
    json!({
        "walls": vectors(&n.walls),
        "rays": vectors(&n.rays),
        "boundary_normals": vectors(&n.boundary_normals),
        "polyhedral": n.polyhedral,
        "certified": n.certified,
        "certification_bound": n.certification_bound.as_ref().map(int),
        "witnesses": n.witnesses.iter().map(|w| json!({
            "wall": vector(&w.wall),
            "point": vector(&w.point),
        })).collect::<Vec<_>>(),
    })
}

fn orbit_point(p: &OrbitPoint) -> Value {
    json!({"point": vector(&p.point), "word": word(&p.word)})
}

pub fn domain(d: &SterkDomain) -> Value {
    json!({
        "rays": vectors(d.rays()),
        "normals": vectors(d.cone.normals()),
        "inequalities": d.inequalities.iter().map(orbit_point).collect::<Vec<_>>(),
        "orbit_size": count(d.orbit.len()),
        "orbit_degree_bound": int(&d.orbit_degree_bound),
        "saturated": d.saturated,
    })
}

pub fn fundamental(r: &FundamentalReport) -> Value {
    json!({
        "rays_nef": r.rays_nef,
        "non_nef_ray": r.non_nef_ray.as_ref().map(vector),
        "coverage": r.coverage,
        "samples": count(r.samples),
        "uncovered": r.uncovered.as_ref().map(vector),
        "tiling": r.tiling,
        "translates_checked": count(r.translates_checked),
        "stabilizer_skipped": count(r.stabilizer_skipped),
        "overlap": r.overlap.as_ref().map(|o| json!({
            "word": word(&o.word),
            "cone": cone(&o.cone),
        })),
    })
}

pub fn table(t: &OrbitTable) -> Value {
    json!({
        "kind": t.kind.to_string(),
        "representatives": t.representatives.iter().map(|r| json!({
            "class": vector(&r.class),
            "source": vector(&r.source),
            "walk": reflections(&r.walk),
            "word": word(&r.word),
        })).collect::<Vec<_>>(),
        "search_bound": int(&t.search_bound),
        "stable": t.stable,
    })
}

//! Problem files: JSON with integers given as numbers or decimal strings.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use serde_json::{Map, Value};

use crate::arith::Matrix;
use crate::error::Error;
use crate::group::{Generator, GroupGenerators, SupersingularDatum};
use crate::lattice::{ClassVector, Isometry, Lattice, Problem};
use crate::weyl::{NefDescription, WallSearch};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum InputError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("schema error at {field}: {message}")]
    Schema { field: String, message: String },
    #[error("{field}: {source}")]
    Invalid { field: String, source: Error },
}

impl InputError {
    fn schema(field: impl Into<String>, message: impl Into<String>) -> Self {
        InputError::Schema {
            field: field.into(),
            message: message.into(),
        }
    }

    fn invalid(field: impl Into<String>, source: Error) -> Self {
        InputError::Invalid {
            field: field.into(),
            source,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupersingularSpec {
    pub p: u64,
    pub k_basis: Vec<Vec<BigInt>>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Bounds {
    /// Maximum number of bound doublings.
    pub orbit_ceiling: Option<u32>,
    /// Initial orbit degree bound, `4 H^2` when absent.
    pub orbit_start: Option<BigInt>,
    pub enum_bound: Option<BigInt>,
    pub samples: Option<usize>,
    pub word_len: Option<usize>,
    pub seed: Option<u64>,
    /// Entry bound for a brute-force generator search when no generators
    /// are given.
    pub generator_search: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProblemFile {
    pub rank: usize,
    pub gram: Matrix,
    pub ample: ClassVector,
    pub generators: Vec<Matrix>,
    pub notes: Vec<Option<String>>,
    pub supersingular: Option<SupersingularSpec>,
    pub bounds: Bounds,
}

/// A problem file with every lattice-level check done.
#[derive(Debug, Clone)]
pub struct Validated {
    pub file: ProblemFile,
    pub problem: Problem,
    pub nef: NefDescription,
    pub gens: GroupGenerators,
    pub datum: Option<SupersingularDatum>,
    pub warnings: Vec<String>,
}

fn integer(v: &Value, field: &str) -> Result<BigInt, InputError> {
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(BigInt::from(i))
            } else if let Some(u) = n.as_u64() {
                Ok(BigInt::from(u))
            } else {
                Err(InputError::schema(
                    field,
                    "expected an integer; write large integers as decimal strings",
                ))
            }
        }
        Value::String(s) => {
            let digits = s.strip_prefix('-').unwrap_or(s);
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(InputError::schema(field, format!("{s:?} is not a decimal integer")));
            }
            Ok(s.parse().expect("checked decimal"))
        }
        _ => Err(InputError::schema(field, "expected an integer")),
    }
}

fn small<T: TryFrom<u64>>(v: &Value, field: &str) -> Result<T, InputError> {
    let n = integer(v, field)?;
    n.to_u64()
        .and_then(|u| T::try_from(u).ok())
        .ok_or_else(|| InputError::schema(field, "expected a small non-negative integer"))
}

fn array<'a>(v: &'a Value, field: &str) -> Result<&'a Vec<Value>, InputError> {
    v.as_array()
        .ok_or_else(|| InputError::schema(field, "expected an array"))
}

fn vector(v: &Value, field: &str) -> Result<Vec<BigInt>, InputError> {
    array(v, field)?
        .iter()
        .enumerate()
        .map(|(i, x)| integer(x, &format!("{field}[{i}]")))
        .collect()
}

fn matrix(v: &Value, field: &str, rank: usize) -> Result<Matrix, InputError> {
    let rows = array(v, field)?;
    if rows.len() != rank {
        return Err(InputError::invalid(
            field,
            Error::DimensionMismatch {
                expected: rank,
                found: rows.len(),
            },
        ));
    }
    let mut out = Vec::with_capacity(rank);
    for (i, r) in rows.iter().enumerate() {
        let row = vector(r, &format!("{field}[{i}]"))?;
        if row.len() != rank {
            return Err(InputError::invalid(
                format!("{field}[{i}]"),
                Error::DimensionMismatch {
                    expected: rank,
                    found: row.len(),
                },
            ));
        }
        out.push(row);
    }
    Ok(Matrix::from_rows(out).expect("square by construction"))
}

fn check_keys(obj: &Map<String, Value>, allowed: &[&str], prefix: &str) -> Result<(), InputError> {
    for k in obj.keys() {
        if !allowed.contains(&k.as_str()) {
            return Err(InputError::schema(format!("{prefix}{k}"), "unknown field"));
        }
    }
    Ok(())
}

fn positive(v: &Value, field: &str) -> Result<BigInt, InputError> {
    let b = integer(v, field)?;
    if b.is_positive() {
        Ok(b)
    } else {
        Err(InputError::schema(field, "must be positive"))
    }
}

fn parse_bounds(v: &Value) -> Result<Bounds, InputError> {
    let obj = v
        .as_object()
        .ok_or_else(|| InputError::schema("bounds", "expected an object"))?;
    check_keys(
        obj,
        &[
            "orbit_ceiling",
            "orbit_start",
            "enum_bound",
            "samples",
            "word_len",
            "seed",
            "generator_search",
        ],
        "bounds.",
    )?;
    let get = |k: &str| obj.get(k).filter(|v| !v.is_null());
    Ok(Bounds {
        orbit_ceiling: get("orbit_ceiling")
            .map(|v| small(v, "bounds.orbit_ceiling"))
            .transpose()?,
        orbit_start: get("orbit_start")
            .map(|v| positive(v, "bounds.orbit_start"))
            .transpose()?,
        enum_bound: get("enum_bound")
            .map(|v| positive(v, "bounds.enum_bound"))
            .transpose()?,
        samples: get("samples").map(|v| small(v, "bounds.samples")).transpose()?,
        word_len: get("word_len").map(|v| small(v, "bounds.word_len")).transpose()?,
        seed: get("seed").map(|v| small(v, "bounds.seed")).transpose()?,
        generator_search: get("generator_search")
            .map(|v| small(v, "bounds.generator_search"))
            .transpose()?,
    })
}

/// Parses the JSON structure without lattice-level validation.
pub fn parse_problem_file(bytes: &[u8]) -> Result<ProblemFile, InputError> {
    let value: Value = serde_json::from_slice(bytes).map_err(|e| InputError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let obj = value
        .as_object()
        .ok_or_else(|| InputError::schema("$", "expected an object"))?;
    check_keys(
        obj,
        &["rank", "gram", "ample", "generators", "supersingular", "bounds"],
        "",
    )?;
    let field = |k: &str| {
        obj.get(k)
            .ok_or_else(|| InputError::schema(k, "missing required field"))
    };
    let rank: usize = small(field("rank")?, "rank")?;
    if rank == 0 {
        return Err(InputError::schema("rank", "must be positive"));
    }
    let gram = matrix(field("gram")?, "gram", rank)?;
    let ample = vector(field("ample")?, "ample")?;
    if ample.len() != rank {
        return Err(InputError::invalid(
            "ample",
            Error::DimensionMismatch {
                expected: rank,
                found: ample.len(),
            },
        ));
    }

    let mut generators = Vec::new();
    let mut notes = Vec::new();
    if let Some(gs) = obj.get("generators").filter(|v| !v.is_null()) {
        for (i, g) in array(gs, "generators")?.iter().enumerate() {
            let f = format!("generators[{i}]");
            // Either a bare matrix or {"matrix": ..., "note": ...}.
            let (m, note) = match g {
                Value::Object(o) => {
                    check_keys(o, &["matrix", "note"], &format!("{f}."))?;
                    let m = o
                        .get("matrix")
                        .ok_or_else(|| InputError::schema(format!("{f}.matrix"), "missing"))?;
                    let note = match o.get("note") {
                        None | Some(Value::Null) => None,
                        Some(Value::String(s)) => Some(s.clone()),
                        Some(_) => {
                            return Err(InputError::schema(format!("{f}.note"), "expected a string"))
                        }
                    };
                    (m, note)
                }
                m => (m, None),
            };
            generators.push(matrix(m, &f, rank)?);
            notes.push(note);
        }
    }

    let supersingular = match obj.get("supersingular").filter(|v| !v.is_null()) {
        None => None,
        Some(v) => {
            let o = v
                .as_object()
                .ok_or_else(|| InputError::schema("supersingular", "expected an object"))?;
            check_keys(o, &["p", "k_basis"], "supersingular.")?;
            let p = small(
                o.get("p")
                    .ok_or_else(|| InputError::schema("supersingular.p", "missing"))?,
                "supersingular.p",
            )?;
            let basis = o
                .get("k_basis")
                .ok_or_else(|| InputError::schema("supersingular.k_basis", "missing"))?;
            let k_basis = array(basis, "supersingular.k_basis")?
                .iter()
                .enumerate()
                .map(|(i, v)| vector(v, &format!("supersingular.k_basis[{i}]")))
                .collect::<Result<_, _>>()?;
            Some(SupersingularSpec { p, k_basis })
        }
    };

    let bounds = match obj.get("bounds").filter(|v| !v.is_null()) {
        None => Bounds::default(),
        Some(v) => parse_bounds(v)?,
    };

    Ok(ProblemFile {
        rank,
        gram,
        ample: ClassVector::new(ample),
        generators,
        notes,
        supersingular,
        bounds,
    })
}

/// Parses and validates: lattice, ample class, nef chamber, generators and
/// the supersingular datum.
pub fn parse_problem(bytes: &[u8]) -> Result<Validated, InputError> {
    parse_problem_file(bytes)?.validate(&WallSearch::default())
}

fn int_value(x: &BigInt) -> Value {
    Value::String(x.to_string())
}

fn vector_value(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(int_value).collect())
}

fn matrix_value(m: &Matrix) -> Value {
    Value::Array(m.rows().iter().map(|r| vector_value(r)).collect())
}

impl ProblemFile {
    pub fn validate(self, search: &WallSearch) -> Result<Validated, InputError> {
        let lattice = Lattice::new(self.gram.clone()).map_err(|e| InputError::invalid("gram", e))?;
        let problem =
            Problem::new(lattice, self.ample.clone()).map_err(|e| InputError::invalid("ample", e))?;
        let nef = problem
            .nef_walls_with(search)
            .map_err(|e| InputError::invalid("ample", e))?;
        let mut warnings = Vec::new();
        let mut inputs = Vec::new();
        for (i, m) in self.generators.iter().enumerate() {
            let f = format!("generators[{i}]");
            let isometry =
                Isometry::new(problem.lattice(), m.clone()).map_err(|e| InputError::invalid(&f, e))?;
            inputs.push(Generator {
                isometry,
                note: self.notes[i].clone().unwrap_or_else(|| f.clone()),
            });
        }
        if inputs.is_empty() {
            if let Some(m) = self.bounds.generator_search {
                let found = problem
                    .search_generators(&nef, m)
                    .map_err(|e| InputError::invalid("bounds.generator_search", e))?;
                warnings.push(format!(
                    "{} generators found by brute-force search with entries bounded by {m}; \
                     whether they generate a finite-index subgroup is not verified",
                    found.len()
                ));
                inputs.extend(found.into_iter().enumerate().map(|(i, g)| Generator {
                    isometry: g,
                    note: format!("search result {i}"),
                }));
            }
        }
        let gens = GroupGenerators::new(&problem, &nef, inputs).map_err(|(i, report)| {
            let e = if !report.preserves_positive_cone {
                Error::OppositeCone
            } else {
                Error::NotNefPreserving
            };
            InputError::invalid(format!("generators[{i}]"), e)
        })?;
        if !nef.certified {
            warnings.push("nef chamber walls are not certified complete".into());
        }
        let datum = self
            .supersingular
            .as_ref()
            .map(|s| SupersingularDatum::new(s.p, self.rank, s.k_basis.clone()))
            .transpose()
            .map_err(|e| InputError::invalid("supersingular", e))?;
        Ok(Validated {
            file: self,
            problem,
            nef,
            gens,
            datum,
            warnings,
        })
    }

    /// Canonical JSON form, every integer a decimal string.
    pub fn to_json(&self) -> Value {
        let mut obj = Map::new();
        obj.insert("rank".into(), Value::String(self.rank.to_string()));
        obj.insert("gram".into(), matrix_value(&self.gram));
        obj.insert("ample".into(), vector_value(self.ample.coords()));
        if !self.generators.is_empty() {
            let gens = self
                .generators
                .iter()
                .zip(&self.notes)
                .map(|(m, note)| match note {
                    None => matrix_value(m),
                    Some(n) => serde_json::json!({"matrix": matrix_value(m), "note": n}),
                })
                .collect();
            obj.insert("generators".into(), Value::Array(gens));
        }
        if let Some(s) = &self.supersingular {
            obj.insert(
                "supersingular".into(),
                serde_json::json!({
                    "p": s.p.to_string(),
                    "k_basis": s.k_basis.iter().map(|v| vector_value(v)).collect::<Vec<_>>(),
                }),
            );
        }
        let b = &self.bounds;
        let mut bounds = Map::new();
        let mut put = |k: &str, v: Option<String>| {
            if let Some(v) = v {
                bounds.insert(k.into(), Value::String(v));
            }
        };
        put("orbit_ceiling", b.orbit_ceiling.map(|x| x.to_string()));
        put("orbit_start", b.orbit_start.as_ref().map(|x| x.to_string()));
        put("enum_bound", b.enum_bound.as_ref().map(|x| x.to_string()));
        put("samples", b.samples.map(|x| x.to_string()));
        put("word_len", b.word_len.map(|x| x.to_string()));
        put("seed", b.seed.map(|x| x.to_string()));
        put("generator_search", b.generator_search.map(|x| x.to_string()));
        if !bounds.is_empty() {
            obj.insert("bounds".into(), Value::Object(bounds));
        }
        Value::Object(obj)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fixture_shape() {
        let src = br#"{"rank": 2, "gram": [[4, 0], [0, "-2"]], "ample": [2, 1],
            "generators": [{"matrix": [[3, -2], [4, -3]], "note": "gamma"}],
            "bounds": {"samples": 20}}"#;
        let v = parse_problem(src).unwrap();
        assert_eq!(v.gens.len(), 1);
        assert_eq!(v.file.bounds.samples, Some(20));
        let again = parse_problem_file(v.file.to_json().to_string().as_bytes()).unwrap();
        assert_eq!(again, v.file);
    }

    #[test]
    fn located_errors() {
        let e = parse_problem(br#"{"rank": 2, "gram": [[1, 0], [0, -2]], "ample": [1, 0]}"#)
            .unwrap_err();
        assert!(matches!(e, InputError::Invalid { ref field, source: Error::OddLattice { .. } } if field == "gram"));
        let e = parse_problem(
            br#"{"rank": 2, "gram": [[0, 1], [1, 0]], "ample": [2, 1], "generators": [[[1, 1], [0, 1]]]}"#,
        )
        .unwrap_err();
        assert_eq!(
            e,
            InputError::Invalid {
                field: "generators[0]".into(),
                source: Error::NotAnIsometry
            }
        );
        let e = parse_problem(b"{\"rank\": 2,\n \"gram\": [[0, 1], [1, 0]],, }").unwrap_err();
        assert!(matches!(e, InputError::Syntax { line: 2, .. }));
        let e = parse_problem(br#"{"rank": 2, "gram": [[0, 1], [1, "x"]], "ample": [2, 1]}"#)
            .unwrap_err();
        assert!(matches!(e, InputError::Schema { ref field, .. } if field == "gram[1][1]"));
        let e = parse_problem(br#"{"rank": 2, "gram": [[0, 1], [1, 0]], "ample": [2, 1], "extra": 1}"#)
            .unwrap_err();
        assert!(matches!(e, InputError::Schema { ref field, .. } if field == "extra"));
        let e = parse_problem(
            br#"{"rank": 2, "gram": [[4, 0], [0, -2]], "ample": [2, 1], "generators": [[[3, 2], [4, 3]]]}"#,
        )
        .unwrap_err();
        assert_eq!(
            e,
            InputError::Invalid {
                field: "generators[0]".into(),
                source: Error::NotNefPreserving
            }
        );
    }
}

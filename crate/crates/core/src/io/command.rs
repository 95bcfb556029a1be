//! Command dispatch: one problem file in, one report out.

use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::error::Error;
use crate::io::problem::{parse_problem_file, Validated};
use crate::io::report::{self, Report};
use crate::lattice::ClassVector;
use crate::orbits::{find_isotropic, OrbitKind};
use crate::sterk::{SterkDomain, SterkSearch, DEFAULT_SEED};
use crate::weyl::WallSearch;

pub const DEFAULT_SAMPLES: usize = 200;
pub const DEFAULT_WORD_LEN: usize = 3;
pub const DEFAULT_CEILING: u32 = 12;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_BOUND_LIMITED: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableKind {
    Nodal,
    Elliptic,
    Genus,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Command {
    Validate,
    Roots { bound: Option<BigInt> },
    Walls,
    Walk { class: ClassVector },
    NefTest { class: ClassVector },
    Sterk,
    Reduce { class: ClassVector },
    Orbits {
        kind: TableKind,
        genus: Option<u64>,
        bound: Option<BigInt>,
    },
    Isotropic { bound: u64 },
    FilterK,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Roots { .. } => "roots",
            Command::Walls => "walls",
            Command::Walk { .. } => "walk",
            Command::NefTest { .. } => "nef-test",
            Command::Sterk => "sterk",
            Command::Reduce { .. } => "reduce",
            Command::Orbits { .. } => "orbits",
            Command::Isotropic { .. } => "isotropic",
            Command::FilterK => "filter-k",
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub seed: Option<u64>,
    /// Overrides the doubling ceiling of the problem file.
    pub ceiling: Option<u32>,
    pub dot: bool,
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: Option<Value>,
    pub error: Option<String>,
    pub dot: Option<String>,
    pub code: i32,
}

/// Accepts `1,-2,3`, with optional surrounding brackets or parentheses.
pub fn parse_class(s: &str) -> Result<ClassVector, String> {
    let t = s
        .trim()
        .trim_start_matches(['[', '('])
        .trim_end_matches([']', ')']);
    let coords: Result<Vec<BigInt>, _> = t
        .split(',')
        .map(|c| c.trim().parse::<BigInt>())
        .collect();
    coords
        .map(ClassVector::new)
        .map_err(|_| format!("{s:?} is not a comma-separated integer vector"))
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::BoundExhausted { .. } | Error::CoverageFailure { .. } => EXIT_BOUND_LIMITED,
        Error::UnboundedQuery | Error::NotARoot { .. } => EXIT_INTERNAL,
        _ => EXIT_INVALID,
    }
}

fn failure(code: i32, message: String) -> Outcome {
    Outcome {
        report: None,
        error: Some(message),
        dot: None,
        code,
    }
}

struct Context<'a> {
    v: &'a Validated,
    opts: &'a RunOptions,
    ceiling: u32,
}

impl Context<'_> {
    fn domain(&self) -> Result<SterkDomain, Error> {
        let search = SterkSearch {
            initial_bound: self.v.file.bounds.orbit_start.clone(),
            max_doublings: self.ceiling,
        };
        self.v
            .problem
            .sterk_domain_with(&self.v.nef, &self.v.gens, &search)
    }

    fn seed(&self) -> u64 {
        self.opts
            .seed
            .or(self.v.file.bounds.seed)
            .unwrap_or(DEFAULT_SEED)
    }
}

pub fn run(cmd: &Command, input: &[u8], opts: &RunOptions) -> Outcome {
    let file = match parse_problem_file(input) {
        Ok(f) => f,
        Err(e) => return failure(EXIT_INVALID, e.to_string()),
    };
    let ceiling = opts
        .ceiling
        .or(file.bounds.orbit_ceiling)
        .unwrap_or(DEFAULT_CEILING);
    let v = match file.validate(&WallSearch {
        max_doublings: ceiling,
    }) {
        Ok(v) => v,
        Err(e) => return failure(EXIT_INVALID, e.to_string()),
    };
    let ctx = Context {
        v: &v,
        opts,
        ceiling,
    };
    let mut report = Report::new(cmd.name(), input);
    report.warnings.extend(v.warnings.iter().cloned());
    let mut dot = None;
    match execute(&ctx, cmd, &mut report, &mut dot) {
        Ok(()) => {
            let code = if report.all_certified() {
                EXIT_OK
            } else {
                EXIT_BOUND_LIMITED
            };
            Outcome {
                report: Some(report.to_json()),
                error: None,
                dot,
                code,
            }
        }
        Err(e) => failure(exit_code(&e), e.to_string()),
    }
}

const RELATIVE_DOMAIN: &str =
    "the domain is fundamental for the group generated by the supplied generators only";

fn execute(
    ctx: &Context,
    cmd: &Command,
    report: &mut Report,
    dot: &mut Option<String>,
) -> Result<(), Error> {
    let v = ctx.v;
    let p = &v.problem;
    match cmd {
        Command::Validate => {
            report.result("rank", report::count(p.rank()));
            report.result("determinant", report::int(&p.lattice().determinant()));
            report.result("ample", report::vector(p.ample()));
            report.result("ample_norm", report::int(p.ample_norm()));
            let gens: Vec<Value> = v
                .gens
                .generators()
                .iter()
                .map(|g| json!({"note": g.note, "matrix": report::matrix(g.isometry.matrix())}))
                .collect();
            report.result("generators", Value::Array(gens));
            report.result("supersingular", Value::Bool(v.datum.is_some()));
            report.certify("walls_certified", v.nef.certified);
        }
        Command::Roots { bound } => {
            let bound = bound
                .clone()
                .or_else(|| v.file.bounds.enum_bound.clone())
                .unwrap_or_else(|| p.ample_norm().clone());
            report.arg("bound", &bound);
            report.result("bound", report::int(&bound));
            report.result("roots", report::vectors(&p.roots_up_to_degree(&bound)));
        }
        Command::Walls => {
            report.result("nef", report::nef(&v.nef));
            report.certify("walls_certified", v.nef.certified);
        }
        Command::Walk { class } => {
            report.arg("class", class);
            let walk = p.walk_to_nef(class)?;
            report.result("class", report::vector(class));
            report.result("end", report::vector(&walk.end));
            report.result("walk", report::reflections(&walk.word));
            report.result(
                "degrees",
                Value::Array(walk.degrees.iter().map(report::int).collect()),
            );
        }
        Command::NefTest { class } => {
            report.arg("class", class);
            let sep = p.separating_roots(class)?;
            report.result("class", report::vector(class));
            report.result("nef", Value::Bool(sep.roots.is_empty()));
            report.result("separating_roots", report::vectors(&sep.roots));
            report.result("degree_bound", report::int(&sep.degree_bound));
        }
        Command::Sterk => {
            let d = ctx.domain()?;
            report.warnings.push(RELATIVE_DOMAIN.into());
            let b = &v.file.bounds;
            let samples = b.samples.unwrap_or(DEFAULT_SAMPLES);
            let word_len = b.word_len.unwrap_or(DEFAULT_WORD_LEN);
            let seed = ctx.seed();
            report.arg("seed", seed);
            let check = p.verify_fundamental(&v.nef, &v.gens, &d, samples, word_len, seed)?;
            report.result("domain", report::domain(&d));
            let mut verification = report::fundamental(&check);
            verification["word_len"] = report::count(word_len);
            verification["seed"] = Value::String(seed.to_string());
            report.result("verification", verification);
            report.certify("walls_certified", v.nef.certified);
            report.certify("saturated", d.saturated);
            report.certify("rays_nef", check.rays_nef);
            report.certify("coverage", check.coverage);
            report.certify("tiling", check.tiling);
            if ctx.opts.dot {
                *dot = Some(crate::io::dot::chamber_graph(p, &v.gens, &d));
            }
        }
        Command::Reduce { class } => {
            report.arg("class", class);
            let d = ctx.domain()?;
            report.warnings.push(RELATIVE_DOMAIN.into());
            report.result("class", report::vector(class));
            report.certify("saturated", d.saturated);
            match p.reduce_to_domain(&v.gens, &d, class) {
                Ok(r) => {
                    report.result("end", report::vector(&r.point));
                    report.result("walk", report::reflections(&r.walk));
                    report.result("word", report::word(&r.word));
                    report.certify("covered", true);
                }
                Err(Error::CoverageFailure { point }) => {
                    report.result("uncovered", report::vector(&point));
                    report.certify("covered", false);
                }
                Err(e) => return Err(e),
            }
        }
        Command::Orbits { kind, genus, bound } => {
            let bound = bound.clone().or_else(|| v.file.bounds.enum_bound.clone());
            if let Some(b) = &bound {
                report.arg("bound", b);
            }
            let d = ctx.domain()?;
            let table = match kind {
                TableKind::Nodal => {
                    report.arg("kind", "nodal");
                    report.warnings.push(
                        "nodal classes are roots supporting walls of the chamber; \
                         effectivity as smooth rational curves is not checked"
                            .into(),
                    );
                    p.nodal_orbits(&v.nef, &v.gens, &d)?
                }
                TableKind::Elliptic => {
                    report.arg("kind", "elliptic");
                    p.elliptic_orbits(&v.gens, &d, bound.as_ref())?
                }
                TableKind::Genus => {
                    let g = genus.ok_or_else(|| {
                        Error::InvalidArgument("--genus is required for genus tables".into())
                    })?;
                    report.arg("kind", "genus");
                    report.arg("genus", g);
                    p.genus_orbits(&v.nef, &v.gens, &d, g, bound.as_ref())?
                }
            };
            if matches!(table.kind, OrbitKind::Genus(_)) {
                report.warnings.push(
                    "genus table lists nef lattice classes of norm 2g-2; \
                     whether each orbit carries irreducible curves is not decided"
                        .into(),
                );
            }
            report.result("table", report::table(&table));
            report.certify("saturated", d.saturated);
            report.certify("stable", table.stable);
        }
        Command::Isotropic { bound } => {
            report.arg("bound", bound);
            let r = find_isotropic(p.lattice(), *bound);
            report.result("bound", Value::String(bound.to_string()));
            report.result("found", r.found.as_ref().map_or(Value::Null, report::vector));
            if r.found.is_none() {
                report
                    .warnings
                    .push(format!("no isotropic vector up to {bound}; this is not a proof of absence"));
            }
            report.warnings.extend(r.advisory);
        }
        Command::FilterK => {
            let datum = v.datum.as_ref().ok_or_else(|| {
                Error::InvalidArgument("problem has no supersingular datum".into())
            })?;
            let kept = datum.filter(&v.gens)?;
            let entry = |g: &crate::group::Generator| {
                json!({"note": g.note, "matrix": report::matrix(g.isometry.matrix())})
            };
            let (keep, drop): (Vec<_>, Vec<_>) = v.gens.generators().iter().partition(|g| {
                kept.generators().iter().any(|k| k.isometry == g.isometry)
            });
            report.result("p", Value::String(datum.p().to_string()));
            report.result(
                "k_basis",
                Value::Array(
                    datum
                        .basis()
                        .iter()
                        .map(|r| Value::Array(r.iter().map(|x| Value::String(x.to_string())).collect()))
                        .collect(),
                ),
            );
            report.result("kept", Value::Array(keep.into_iter().map(entry).collect()));
            report.result("removed", Value::Array(drop.into_iter().map(entry).collect()));
            report.warnings.push(
                "only the supplied generators are filtered; the stabilizer of K may be larger".into(),
            );
            report.warnings.push(
                "K is modelled as a subspace of the lattice mod p; \
                 the full crystalline condition is not checked"
                    .into(),
            );
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn class_syntax() {
        assert_eq!(parse_class("-1,7").unwrap(), ClassVector::from([-1, 7]));
        assert_eq!(parse_class("[3, 4]").unwrap(), ClassVector::from([3, 4]));
        assert!(parse_class("1;2").is_err());
    }
}

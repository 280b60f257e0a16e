//! `qtorus`: batch front end for quantum torus computations.
//!
//! Exit status 0 means the computation succeeded and every asserted
//! property held, 1 means a property failed (or the computation could not
//! reach a result), 2 means the input could not be read or parsed.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use qtorus::commutative::{complement_solver, max_commutative_rank, units_commute, verify_virtual_complement};
use qtorus::format::{self, parse_json, to_canonical_string};
use qtorus::module::{
    cyclicity_probe, default_candidates, dimension_probe, gk_growth_estimate, torsion_search, CFiniteModule,
    ModuleAction, ModuleVector,
};
use qtorus::nilpotent::{reduce, theorem_b_harness, ModuleRecipe};
use qtorus::scenario::{verify_all, Scenario};
use qtorus::{AlgebraSpec, Bounds, Error, Rat, Sublattice, TorusElement};
use serde_json::{json, Value};

const GENERIC_PLANE: &str = include_str!("../scenarios/generic_quantum_plane.json");
const CYCLOTOMIC_PLANE: &str = include_str!("../scenarios/cyclotomic_plane_n3.json");

#[derive(Parser, Debug)]
#[command(name = "qtorus", version, about = "Exact computations with quantum tori and their modules")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,

    #[command(flatten)]
    bounds: BoundArgs,

    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct BoundArgs {
    /// Largest box radius for growth and cyclicity probes.
    #[arg(long, global = true)]
    k_max: Option<usize>,
    /// Coordinate bound for annihilator searches.
    #[arg(long, global = true)]
    deg_bound: Option<u32>,
    /// Largest exponent tried by the complement solver.
    #[arg(long, global = true)]
    s_max: Option<u64>,
    /// Coefficient bound for the commutative-rank search.
    #[arg(long, global = true)]
    search_bound: Option<u32>,
}

impl BoundArgs {
    fn resolve(&self, base: Bounds) -> Bounds {
        Bounds {
            k_max: self.k_max.unwrap_or(base.k_max),
            deg_bound: self.deg_bound.unwrap_or(base.deg_bound),
            s_max: self.s_max.unwrap_or(base.s_max),
            search_bound: self.search_bound.unwrap_or(base.search_bound),
        }
    }
}

#[derive(Subcommand, Debug)]
enum Verb {
    /// Basis of the center lattice.
    Center { spec: PathBuf },
    /// Whether a subgroup spans a commutative subalgebra.
    Commutative {
        #[arg(long)]
        subgroup: PathBuf,
        spec: PathBuf,
    },
    /// Largest rank of a commutative subgroup, with a witness.
    MaxCommutative { spec: PathBuf },
    /// Commuting monomials and a virtual complement of a commutative subgroup.
    Complement {
        #[arg(long)]
        c_basis: PathBuf,
        spec: PathBuf,
    },
    /// Product of two elements.
    Multiply { spec: PathBuf, left: PathBuf, right: PathBuf },
    /// Consistency of a module's action matrices.
    Consistency {
        #[arg(long)]
        module: PathBuf,
        spec: PathBuf,
    },
    /// Top exterior power (determinant) relations of a module.
    Exterior {
        #[arg(long)]
        module: PathBuf,
        spec: PathBuf,
    },
    /// Growth of a module from its free generators.
    Gk {
        #[arg(long)]
        module: PathBuf,
        spec: PathBuf,
    },
    /// Annihilator search over a subgroup.
    Torsion {
        #[arg(long)]
        module: PathBuf,
        #[arg(long)]
        subgroup: PathBuf,
        /// Module vector to test; defaults to every free generator.
        #[arg(long)]
        vector: Option<PathBuf>,
        spec: PathBuf,
    },
    /// Dimension estimate from annihilator searches.
    Dimension {
        #[arg(long)]
        module: PathBuf,
        spec: PathBuf,
    },
    /// Saturation of truncation windows by the span of a vector.
    Cyclicity {
        #[arg(long)]
        module: PathBuf,
        /// Module vector to probe; defaults to the first generator plus its
        /// first commutative monomial.
        #[arg(long)]
        vector: Option<PathBuf>,
        spec: PathBuf,
    },
    /// Quantum torus of a class-2 group modulo a central character.
    ReduceNilpotent { datum: PathBuf, character: PathBuf },
    /// Torsion, growth and finite-length checks for a module over the reduced algebra.
    TheoremB {
        /// Generators of the abelian subgroup L.
        #[arg(long)]
        subgroup: PathBuf,
        /// Module over the reduced algebra; induced from a complement when omitted.
        #[arg(long)]
        module: Option<PathBuf>,
        datum: PathBuf,
        character: PathBuf,
    },
    /// Runs every check of a scenario (or of a bare spec).
    VerifyAll {
        #[arg(required_unless_present = "bundled")]
        file: Option<PathBuf>,
        /// One of the built-in scenarios: `generic-plane`, `cyclotomic-plane`.
        #[arg(long, conflicts_with = "file")]
        bundled: Option<String>,
    },
}

enum Failure {
    Input(String),
    Compute(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. } => Failure::Input(e.to_string()),
            other => Failure::Compute(other.to_string()),
        }
    }
}

type Outcome = Result<(Value, bool), Failure>;

fn read_json(path: &Path) -> Result<Value, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))?;
    parse_json(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn with_file<T>(path: &Path, r: qtorus::Result<T>) -> Result<T, Failure> {
    r.map_err(|e| match e {
        Error::Parse { .. } => Failure::Input(format!("{}: {e}", path.display())),
        other => Failure::Compute(other.to_string()),
    })
}

fn load_spec(path: &Path) -> Result<Arc<AlgebraSpec>, Failure> {
    let v = read_json(path)?;
    Ok(Arc::new(with_file(path, format::spec_from_json(&v))?))
}

fn load_sublattice(path: &Path, n: usize) -> Result<Sublattice, Failure> {
    let v = read_json(path)?;
    with_file(path, format::sublattice_from_json(&v, n, ""))
}

fn load_module(path: &Path, spec: &Arc<AlgebraSpec>) -> Result<CFiniteModule<Rat>, Failure> {
    let v = read_json(path)?;
    with_file(path, format::module_from_json(spec, &v))
}

fn load_vector(path: &Path, module: &CFiniteModule<Rat>) -> Result<ModuleVector<Rat>, Failure> {
    let v = read_json(path)?;
    let vec = with_file(path, format::vector_from_json(module.local_spec(), &v, ""))?;
    if vec.len() != module.d() {
        return Err(Failure::Input(format!(
            "{}: expected {} entries, found {}",
            path.display(),
            module.d(),
            vec.len()
        )));
    }
    Ok(vec)
}

fn default_probe_vector(module: &CFiniteModule<Rat>) -> qtorus::Result<ModuleVector<Rat>> {
    let mut v = module.generator(0);
    if module.r() > 0 {
        let local = module.local_spec();
        let mut e1 = vec![0; local.rank()];
        e1[0] = 1;
        v[0] = v[0].try_add(&TorusElement::basis(local, &e1))?;
    }
    Ok(v)
}

fn run(cli: &Cli) -> Outcome {
    let bounds = cli.bounds.resolve(Bounds::default());
    match &cli.verb {
        Verb::Center { spec } => {
            let spec = load_spec(spec)?;
            let c = spec.center_lattice();
            Ok((
                json!({ "center_basis": format::sublattice_to_json(&c), "trivial": c.is_zero() }),
                true,
            ))
        }
        Verb::Commutative { subgroup, spec } => {
            let spec = load_spec(spec)?;
            let b = load_sublattice(subgroup, spec.rank())?;
            let pair = spec.noncommuting_pair(&b)?;
            let report = json!({
                "basis": format::sublattice_to_json(&b),
                "commutative": pair.is_none(),
                "failing_pair": pair.map(|(i, j)| {
                    let rows = b.to_i64_rows().unwrap_or_default();
                    json!({
                        "indices": [i + 1, j + 1],
                        "vectors": [rows.get(i), rows.get(j)],
                        "commutator": format::gamma_to_json(&spec.beta(&rows[i], &rows[j])),
                    })
                }),
            });
            Ok((report, pair.is_none()))
        }
        Verb::MaxCommutative { spec } => {
            let spec = load_spec(spec)?;
            let mc = max_commutative_rank(&spec, bounds.search_bound)?;
            Ok((
                json!({
                    "rank": mc.rank,
                    "exact": mc.exact,
                    "upper_bound": mc.upper_bound,
                    "witness": format::sublattice_to_json(&mc.witness),
                }),
                true,
            ))
        }
        Verb::Complement { c_basis, spec } => {
            let spec = load_spec(spec)?;
            let c = load_sublattice(c_basis, spec.rank())?;
            let sol = complement_solver(&spec, &c, bounds.s_max)?;
            let e = sol.e_lattice(spec.rank())?;
            let ok = verify_virtual_complement(&spec, &c, &e)?.passed() && units_commute(&spec, &sol)?;
            Ok((format::complement_to_json(&sol), ok))
        }
        Verb::Multiply { spec, left, right } => {
            let spec = load_spec(spec)?;
            let l: TorusElement = with_file(left, format::element_from_json(&spec, &read_json(left)?, ""))?;
            let r: TorusElement = with_file(right, format::element_from_json(&spec, &read_json(right)?, ""))?;
            Ok((format::element_to_json(&l.try_mul(&r)?), true))
        }
        Verb::Consistency { module, spec } => {
            let spec = load_spec(spec)?;
            let m = load_module(module, &spec)?;
            let rep = m.check_consistency()?;
            Ok((
                json!({
                    "passed": rep.passed(),
                    "failing_pairs": rep.failing_pairs,
                    "non_invertible": rep.non_invertible,
                }),
                rep.passed(),
            ))
        }
        Verb::Exterior { module, spec } => {
            let spec = load_spec(spec)?;
            let m = load_module(module, &spec)?;
            let rep = m.exterior_top()?;
            let ok = rep.passed() && rep.exponent == m.d();
            Ok((
                json!({
                    "passed": ok,
                    "exponent": rep.exponent,
                    "determinants": rep.determinants.iter().map(format::element_to_json).collect::<Vec<_>>(),
                    "failing_pairs": rep.failing_pairs,
                    "power_module_consistent": rep.power_module_consistent,
                }),
                ok,
            ))
        }
        Verb::Gk { module, spec } => {
            let spec = load_spec(spec)?;
            let m = load_module(module, &spec)?;
            let g = gk_growth_estimate(&m, &m.free_generators(), bounds.k_max)?;
            Ok((json!({ "dims": g.dims, "degree": g.degree }), g.degree.is_some()))
        }
        Verb::Torsion {
            module,
            subgroup,
            vector,
            spec,
        } => {
            let spec = load_spec(spec)?;
            let m = load_module(module, &spec)?;
            let b = load_sublattice(subgroup, spec.rank())?;
            let vectors = match vector {
                Some(p) => vec![load_vector(p, &m)?],
                None => m.free_generators(),
            };
            let mut results = Vec::new();
            for v in &vectors {
                let found = torsion_search(&m, &b, v, bounds.deg_bound)?;
                results.push(found.as_ref().map_or(Value::Null, format::element_to_json));
            }
            Ok((
                json!({ "deg_bound": bounds.deg_bound, "annihilators": results }),
                true,
            ))
        }
        Verb::Dimension { module, spec } => {
            let spec = load_spec(spec)?;
            let m = load_module(module, &spec)?;
            let candidates = default_candidates(&m, bounds.search_bound)?;
            let rep = dimension_probe(&m, bounds.deg_bound, &candidates)?;
            let rows: Vec<Value> = rep
                .candidates
                .iter()
                .map(|(b, free)| json!({ "basis": format::sublattice_to_json(b), "torsion_free": free }))
                .collect();
            Ok((json!({ "dimension": rep.dimension, "candidates": rows }), true))
        }
        Verb::Cyclicity { module, vector, spec } => {
            let spec = load_spec(spec)?;
            let m = load_module(module, &spec)?;
            let v = match vector {
                Some(p) => load_vector(p, &m)?,
                None => default_probe_vector(&m)?,
            };
            let p = cyclicity_probe(&m, &v, bounds.k_max)?;
            Ok((
                json!({
                    "k": p.k,
                    "boundary": p.boundary,
                    "span_dim": p.span_dim,
                    "window_dim": p.window_dim,
                    "ratio": p.ratio().to_string(),
                    "interior_dim": p.interior_dim,
                    "interior_attained": p.interior_attained,
                    "generates_interior": p.generates_interior(),
                    "trivial_center": p.trivial_center,
                    "hypothesis": if p.hypothesis_met() { "met" } else { "not met" },
                }),
                true,
            ))
        }
        Verb::ReduceNilpotent { datum, character } => {
            let d = with_file(datum, format::datum_from_json(&read_json(datum)?))?;
            let chi = with_file(character, format::character_from_json(&read_json(character)?))?;
            Ok((format::spec_to_json(&reduce(&d, &chi)?), true))
        }
        Verb::TheoremB {
            subgroup,
            module,
            datum,
            character,
        } => {
            let d = with_file(datum, format::datum_from_json(&read_json(datum)?))?;
            let chi = with_file(character, format::character_from_json(&read_json(character)?))?;
            let l = with_file(subgroup, format::group_elements_from_json(&read_json(subgroup)?, &d, ""))?;
            let recipe = match module {
                Some(p) => {
                    let spec = Arc::new(reduce(&d, &chi)?);
                    ModuleRecipe::Explicit(load_module(p, &spec)?)
                }
                None => ModuleRecipe::Induced { character: None },
            };
            let rep = theorem_b_harness::<Rat>(&d, &chi, &l, &recipe, &bounds)?;
            let cyclicity: Vec<Value> = rep
                .cyclicity
                .iter()
                .map(|p| {
                    json!({
                        "k": p.k,
                        "span_dim": p.span_dim,
                        "window_dim": p.window_dim,
                        "generates_interior": p.generates_interior(),
                    })
                })
                .collect();
            let report = json!({
                "verdict": rep.verdict(),
                "reduced_spec": format::spec_to_json(&rep.reduced),
                "c_basis": format::sublattice_to_json(&rep.c),
                "complement": rep.complement.as_ref().map(format::complement_to_json),
                "module_rank": rep.module_rank,
                "torsion": rep.torsion.iter().map(|t| t.as_ref().map_or(Value::Null, format::element_to_json)).collect::<Vec<_>>(),
                "torsion_free": rep.torsion_free(),
                "growth": { "dims": rep.growth.dims, "degree": rep.growth.degree },
                "trivial_center": rep.trivial_center,
                "center_cyclic": rep.center_cyclic,
                "cyclicity": cyclicity,
                "finite_length": rep.holonomic.as_ref().map(|h| h.verdict()),
            });
            Ok((report, rep.passed()))
        }
        Verb::VerifyAll { file, bundled } => {
            let v = match (file, bundled.as_deref()) {
                (Some(p), _) => read_json(p)?,
                (None, Some("generic-plane")) => parse_json(GENERIC_PLANE)?,
                (None, Some("cyclotomic-plane")) => parse_json(CYCLOTOMIC_PLANE)?,
                (None, Some(other)) => return Err(Failure::Input(format!("unknown bundled scenario `{other}`"))),
                (None, None) => return Err(Failure::Input("no scenario given".into())),
            };
            let mut scenario = match file {
                Some(p) => with_file(p, Scenario::<Rat>::from_json(&v))?,
                None => Scenario::<Rat>::from_json(&v)?,
            };
            scenario.bounds = cli.bounds.resolve(scenario.bounds);
            let seed = match std::env::var("QTORUS_SEED") {
                Ok(s) => s
                    .trim()
                    .parse::<u64>()
                    .map_err(|_| Failure::Input(format!("QTORUS_SEED must be an unsigned integer, got `{s}`")))?,
                Err(_) => 0,
            };
            let rep = verify_all(&scenario, seed)?;
            Ok((rep.to_json(), rep.passed()))
        }
    }
}

fn emit(cli: &Cli, report: &Value) -> Result<(), Failure> {
    let text = to_canonical_string(report);
    match &cli.output {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Input(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|(report, ok)| emit(&cli, &report).map(|()| ok));
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Compute(msg)) => {
            let report = json!({ "error": msg });
            if emit(&cli, &report).is_err() {
                eprintln!("error: {msg}");
            }
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

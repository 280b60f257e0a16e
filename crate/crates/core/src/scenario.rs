//! Batch verification: a scenario names an algebra, a list of modules and
//! probe bounds, and [`verify_all`] runs every algebra and module check,
//! producing a pass/fail matrix.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::algebra::{AlgebraSpec, TorusElement};
use crate::bounds::Bounds;
use crate::coeff::Coefficient;
use crate::commutative::{
    complement_solver, holonomic_certificate, max_commutative_rank, units_commute, verify_virtual_complement,
};
use crate::error::{Error, Result};
use crate::format;
use crate::gamma::GammaElement;
use crate::module::{
    cyclicity_probe, default_candidates, dimension_probe, gk_growth_estimate, induce_cyclic, torsion_search,
    CFiniteModule, ModuleAction,
};
use crate::scalar::ExactRational;
use crate::Sublattice;

/// How a scenario module is obtained.
#[derive(Clone, Debug)]
pub enum ModuleSource<Q: ExactRational> {
    /// Induced from a complement of `c` found by the solver; `character`
    /// defaults to all ones.
    Induced {
        c: Sublattice,
        character: Option<Vec<Coefficient<Q>>>,
    },
    Explicit(CFiniteModule<Q>),
}

#[derive(Clone, Debug)]
pub struct ScenarioModule<Q: ExactRational> {
    pub label: String,
    pub source: ModuleSource<Q>,
}

#[derive(Clone, Debug)]
pub struct Scenario<Q: ExactRational> {
    pub name: String,
    pub spec: Arc<AlgebraSpec>,
    pub modules: Vec<ScenarioModule<Q>>,
    pub bounds: Bounds,
}

impl<Q: ExactRational> Scenario<Q> {
    /// Accepts either a scenario object (`{"spec": …, "modules": […]}`) or
    /// a bare spec, which is checked at the algebra level only.
    pub fn from_json(v: &Value) -> Result<Self> {
        let obj = v.as_object().ok_or_else(|| parse_err("<root>", "expected an object"))?;
        if obj.contains_key("rank") {
            let spec = Arc::new(format::spec_from_json(v)?);
            return Ok(Self {
                name: "spec".into(),
                spec,
                modules: Vec::new(),
                bounds: Bounds::default(),
            });
        }
        let spec_v = obj
            .get("spec")
            .ok_or_else(|| parse_err("spec", "missing field (neither a scenario nor a spec)"))?;
        let spec = Arc::new(format::spec_from_json(spec_v).map_err(|e| prefix("spec", e))?);
        let name = match obj.get("name") {
            None => "scenario".to_string(),
            Some(Value::String(s)) => s.clone(),
            Some(_) => return Err(parse_err("name", "expected a string")),
        };
        let bounds = match obj.get("bounds") {
            None => Bounds::default(),
            Some(b) => format::bounds_from_json(b, "bounds")?,
        };
        let list = obj
            .get("modules")
            .ok_or_else(|| parse_err("modules", "missing field"))?
            .as_array()
            .ok_or_else(|| parse_err("modules", "expected an array"))?;
        if list.is_empty() {
            return Err(parse_err("modules", "scenario lists no modules"));
        }
        let modules = list
            .iter()
            .enumerate()
            .map(|(k, m)| parse_module(&spec, m, &format!("modules[{k}]")))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            name,
            spec,
            modules,
            bounds,
        })
    }
}

fn parse_err(path: &str, message: &str) -> Error {
    Error::Parse {
        path: path.into(),
        message: message.into(),
    }
}

fn prefix(path: &str, e: Error) -> Error {
    match e {
        Error::Parse { path: p, message } if p == "<root>" => Error::Parse {
            path: path.into(),
            message,
        },
        Error::Parse { path: p, message } => Error::Parse {
            path: format!("{path}.{p}"),
            message,
        },
        other => other,
    }
}

fn parse_module<Q: ExactRational>(spec: &Arc<AlgebraSpec>, v: &Value, path: &str) -> Result<ScenarioModule<Q>> {
    let obj = v.as_object().ok_or_else(|| parse_err(path, "expected an object"))?;
    let label = match obj.get("label") {
        Some(Value::String(s)) => s.clone(),
        Some(_) => return Err(parse_err(&format!("{path}.label"), "expected a string")),
        None => path.to_string(),
    };
    let source = match (obj.get("induce"), obj.get("module")) {
        (Some(ind), None) => {
            let ip = format!("{path}.induce");
            let io = ind.as_object().ok_or_else(|| parse_err(&ip, "expected an object"))?;
            let cv = io
                .get("c_basis")
                .ok_or_else(|| parse_err(&format!("{ip}.c_basis"), "missing field"))?;
            let c = format::sublattice_from_json(cv, spec.rank(), &format!("{ip}.c_basis"))?;
            let character = match io.get("character") {
                None => None,
                Some(ch) => {
                    let cp = format!("{ip}.character");
                    let items = ch.as_array().ok_or_else(|| parse_err(&cp, "expected an array"))?;
                    Some(
                        items
                            .iter()
                            .enumerate()
                            .map(|(k, x)| format::coefficient_from_json(spec.ring(), x, &format!("{cp}[{k}]")))
                            .collect::<Result<Vec<_>>>()?,
                    )
                }
            };
            ModuleSource::Induced { c, character }
        }
        (None, Some(m)) => {
            ModuleSource::Explicit(format::module_from_json(spec, m).map_err(|e| prefix(&format!("{path}.module"), e))?)
        }
        _ => return Err(parse_err(path, "expected exactly one of `induce` or `module`")),
    };
    Ok(ScenarioModule { label, source })
}

/// Outcome of one check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    /// The conclusion under test presupposes a trivial center.
    HypothesisNotMet,
    /// The bounded probe could not decide.
    Inconclusive,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::HypothesisNotMet => "hypothesis not met",
            Status::Inconclusive => "inconclusive",
        }
    }

    fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

#[derive(Clone, Debug)]
pub struct Check {
    pub scope: String,
    pub name: &'static str,
    pub status: Status,
    pub detail: Value,
}

#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub scenario: String,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn status_of(&self, scope: &str, name: &str) -> Option<Status> {
        self.checks
            .iter()
            .find(|c| c.scope == scope && c.name == name)
            .map(|c| c.status)
    }

    pub fn to_json(&self) -> Value {
        let checks: Vec<Value> = self
            .checks
            .iter()
            .map(|c| {
                json!({
                    "scope": c.scope,
                    "check": c.name,
                    "status": c.status.as_str(),
                    "detail": c.detail,
                })
            })
            .collect();
        json!({ "scenario": self.scenario, "passed": self.passed(), "checks": checks })
    }
}

fn random_exponent(rng: &mut ChaCha8Rng, n: usize, k: i64) -> Vec<i64> {
    (0..n).map(|_| rng.gen_range(-k..=k)).collect()
}

fn random_element<Q: ExactRational>(rng: &mut ChaCha8Rng, spec: &Arc<AlgebraSpec>) -> Result<TorusElement<Q>> {
    let ring = spec.ring();
    let len = rng.gen_range(1..=3);
    let mut terms = Vec::with_capacity(len);
    for _ in 0..len {
        let g = GammaElement::new(
            spec.torsion_order(),
            rng.gen_range(0..spec.torsion_order() as i64),
            random_exponent(rng, spec.free_params(), 2),
        );
        let scale = Q::from_fraction(rng.gen_range(1..=5) * if rng.gen_bool(0.5) { 1 } else { -1 }, rng.gen_range(1..=3));
        let c = ring.embed_unit::<Q>(&g).scale_rational(&scale);
        terms.push((random_exponent(rng, spec.rank(), 2), c));
    }
    TorusElement::from_terms(spec, terms)
}

const SAMPLES: usize = 40;

fn algebra_checks<Q: ExactRational>(spec: &Arc<AlgebraSpec>, bounds: &Bounds, seed: u64) -> Result<Vec<Check>> {
    let n = spec.rank();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let scope = "algebra".to_string();

    let mut cocycle_ok = true;
    for _ in 0..SAMPLES {
        let (a, b, c) = (
            random_exponent(&mut rng, n, 3),
            random_exponent(&mut rng, n, 3),
            random_exponent(&mut rng, n, 3),
        );
        let ab: Vec<i64> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
        let bc: Vec<i64> = b.iter().zip(&c).map(|(x, y)| x + y).collect();
        cocycle_ok &= &spec.cocycle(&a, &b) + &spec.cocycle(&ab, &c) == &spec.cocycle(&b, &c) + &spec.cocycle(&a, &bc);
    }
    out.push(Check {
        scope: scope.clone(),
        name: "cocycle identity",
        status: Status::from_bool(cocycle_ok),
        detail: json!({ "samples": SAMPLES }),
    });

    let mut assoc_ok = true;
    for _ in 0..SAMPLES / 2 {
        let x: TorusElement<Q> = random_element(&mut rng, spec)?;
        let y = random_element(&mut rng, spec)?;
        let z = random_element(&mut rng, spec)?;
        assoc_ok &= x.try_mul(&y)?.try_mul(&z)? == x.try_mul(&y.try_mul(&z)?)?;
    }
    out.push(Check {
        scope: scope.clone(),
        name: "associativity",
        status: Status::from_bool(assoc_ok),
        detail: json!({ "samples": SAMPLES / 2 }),
    });

    let mut rel_ok = true;
    for _ in 0..SAMPLES {
        let a = random_exponent(&mut rng, n, 3);
        let b = random_exponent(&mut rng, n, 3);
        let xa = TorusElement::<Q>::basis(spec, &a);
        let xb = TorusElement::<Q>::basis(spec, &b);
        let lhs = xa.try_mul(&xb)?;
        let rhs = xb.try_mul(&xa)?.scale(&spec.ring().embed_unit(&spec.beta(&a, &b)));
        rel_ok &= lhs == rhs;
    }
    out.push(Check {
        scope: scope.clone(),
        name: "defining relations",
        status: Status::from_bool(rel_ok),
        detail: json!({ "samples": SAMPLES }),
    });

    let center = spec.center_lattice();
    let mut central_ok = true;
    for row in center.to_i64_rows()? {
        let z = TorusElement::<Q>::basis(spec, &row);
        for i in 0..n {
            let mut e = vec![0; n];
            e[i] = 1;
            let x = TorusElement::basis(spec, &e);
            central_ok &= z.try_mul(&x)? == x.try_mul(&z)?;
        }
    }
    out.push(Check {
        scope: scope.clone(),
        name: "center",
        status: Status::from_bool(central_ok),
        detail: json!({
            "center_basis": format::sublattice_to_json(&center),
            "trivial": spec.has_trivial_center(),
        }),
    });

    let mc = max_commutative_rank(spec, bounds.search_bound)?;
    let mc_ok = spec.is_commutative_sublattice(&mc.witness)? && mc.witness.rank() == mc.rank && mc.rank <= mc.upper_bound;
    out.push(Check {
        scope,
        name: "max commutative rank",
        status: if !mc_ok {
            Status::Fail
        } else if mc.exact {
            Status::Pass
        } else {
            Status::Inconclusive
        },
        detail: json!({
            "rank": mc.rank,
            "exact": mc.exact,
            "upper_bound": mc.upper_bound,
            "witness": format::sublattice_to_json(&mc.witness),
        }),
    });
    Ok(out)
}

fn build_module<Q: ExactRational>(
    spec: &Arc<AlgebraSpec>,
    m: &ScenarioModule<Q>,
    bounds: &Bounds,
    out: &mut Vec<Check>,
) -> Result<Option<CFiniteModule<Q>>> {
    match &m.source {
        ModuleSource::Explicit(module) => Ok(Some(module.clone())),
        ModuleSource::Induced { c, character } => {
            let sol = match complement_solver(spec, c, bounds.s_max) {
                Ok(sol) => sol,
                Err(e @ (Error::NoSolution { .. } | Error::NotSaturated | Error::Precondition(_))) => {
                    out.push(Check {
                        scope: m.label.clone(),
                        name: "complement",
                        status: Status::Fail,
                        detail: json!({ "error": e.to_string() }),
                    });
                    return Ok(None);
                }
                Err(e) => return Err(e),
            };
            let e = sol.e_lattice(spec.rank())?;
            let report = verify_virtual_complement(spec, c, &e)?;
            let ok = report.passed() && units_commute(spec, &sol)?;
            out.push(Check {
                scope: m.label.clone(),
                name: "complement",
                status: Status::from_bool(ok),
                detail: format::complement_to_json(&sol),
            });
            let values = match character {
                Some(v) => v.clone(),
                None => vec![spec.ring().one(); e.rank()],
            };
            Ok(Some(induce_cyclic(spec, c, &e, &values)?))
        }
    }
}

fn module_checks<Q: ExactRational>(
    spec: &Arc<AlgebraSpec>,
    m: &ScenarioModule<Q>,
    bounds: &Bounds,
) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let Some(module) = build_module(spec, m, bounds, &mut out)? else {
        return Ok(out);
    };
    let scope = m.label.clone();
    let check = |name, status, detail| Check {
        scope: scope.clone(),
        name,
        status,
        detail,
    };
    let c = module.c_lattice();

    let cons = module.check_consistency()?;
    out.push(check(
        "consistency",
        Status::from_bool(cons.passed()),
        json!({ "failing_pairs": cons.failing_pairs, "non_invertible": cons.non_invertible }),
    ));

    let ext = module.exterior_top()?;
    out.push(check(
        "exterior power",
        Status::from_bool(ext.passed() && ext.exponent == module.d()),
        json!({ "exponent": ext.exponent, "failing_pairs": ext.failing_pairs }),
    ));

    let gens = module.free_generators();
    let growth = gk_growth_estimate(&module, &gens, bounds.k_max)?;
    out.push(check(
        "growth",
        Status::from_bool(growth.degree == Some(c.rank())),
        json!({ "dims": growth.dims, "degree": growth.degree, "rank_c": c.rank() }),
    ));

    let mut annihilated = Vec::new();
    for (l, g) in gens.iter().enumerate() {
        if torsion_search(&module, &c, g, bounds.deg_bound)?.is_some() {
            annihilated.push(l + 1);
        }
    }
    out.push(check(
        "torsion-free over C",
        Status::from_bool(annihilated.is_empty()),
        json!({ "deg_bound": bounds.deg_bound, "annihilated_generators": annihilated }),
    ));

    let candidates = default_candidates(&module, bounds.search_bound)?;
    let dim = dimension_probe(&module, bounds.deg_bound, &candidates)?;
    out.push(check(
        "dimension",
        Status::from_bool(Some(dim.dimension) == growth.degree),
        json!({ "dimension": dim.dimension }),
    ));

    let trivial = spec.has_trivial_center();
    let local = module.local_spec();
    let mut v = module.generator(0);
    if module.r() > 0 {
        let mut e1 = vec![0; local.rank()];
        e1[0] = 1;
        v[0] = v[0].try_add(&TorusElement::basis(local, &e1))?;
    }
    let mut probes = Vec::new();
    let mut all_interior = true;
    for k in 3..=bounds.k_max.clamp(3, 5) {
        let p = cyclicity_probe(&module, &v, k)?;
        all_interior &= p.generates_interior();
        probes.push(json!({
            "k": k,
            "span_dim": p.span_dim,
            "window_dim": p.window_dim,
            "ratio": p.ratio().to_string(),
            "interior_dim": p.interior_dim,
            "interior_attained": p.interior_attained,
        }));
    }
    let mut detail = json!({ "probes": probes, "generates_interior": all_interior });
    if !trivial {
        // 1 + z for a central monomial z spans a proper submodule whenever z
        // does not act as a scalar, so the window should not saturate.
        let z = spec.center_lattice().to_i64_rows()?.remove(0);
        let g = module.generator(0);
        let shifted = module.act_monomials(std::slice::from_ref(&z), &g)?.remove(0);
        let vc = crate::module::add_vectors(&g, &shifted)?;
        let mut central = Vec::new();
        for k in 3..=bounds.k_max.clamp(3, 5) {
            let p = cyclicity_probe(&module, &vc, k)?;
            central.push(json!({
                "k": k,
                "span_dim": p.span_dim,
                "window_dim": p.window_dim,
                "generates_interior": p.generates_interior(),
            }));
        }
        detail["central_vector"] = json!(z);
        detail["central_probes"] = Value::Array(central);
    }
    out.push(check(
        "cyclicity",
        if trivial {
            Status::from_bool(all_interior)
        } else {
            Status::HypothesisNotMet
        },
        detail,
    ));

    let status;
    let detail;
    match growth.degree {
        Some(gk) => {
            let cert = holonomic_certificate(spec, gk, bounds.search_bound)?;
            status = if !trivial {
                Status::HypothesisNotMet
            } else if cert.certified {
                Status::Pass
            } else {
                Status::Inconclusive
            };
            detail = json!({
                "gk": gk,
                "max_commutative_rank": cert.max_commutative.rank,
                "verdict": cert.verdict(),
            });
        }
        None => {
            status = Status::Inconclusive;
            detail = json!({ "verdict": "growth degree undetermined" });
        }
    }
    out.push(check("finite length", status, detail));
    Ok(out)
}

/// Runs all algebra checks (random samples drawn from `seed`) and all
/// module checks of the scenario.
pub fn verify_all<Q: ExactRational>(scenario: &Scenario<Q>, seed: u64) -> Result<VerifyReport> {
    let mut checks = algebra_checks::<Q>(&scenario.spec, &scenario.bounds, seed)?;
    for m in &scenario.modules {
        checks.extend(module_checks(&scenario.spec, m, &scenario.bounds)?);
    }
    Ok(VerifyReport {
        scenario: scenario.name.clone(),
        checks,
    })
}

//! JSON interchange for specs, elements, sublattices, modules and
//! nilpotent data.
//!
//! Parsing walks a [`serde_json::Value`] and reports the first offending
//! field by its path (`q[2].tors`, `actions[0].matrix[1][0]`, …).
//! Serialization produces `Value`s whose objects have sorted keys;
//! [`to_canonical_string`] renders them byte-stably. Indices in files are
//! 1-based, exact rationals are strings.

use std::sync::Arc;

use serde_json::{json, Map, Value};

use crate::algebra::{AlgebraSpec, TorusElement};
use crate::bounds::Bounds;
use crate::coeff::{Coefficient, ScalarRing};
use crate::commutative::ComplementSolution;
use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::gamma::GammaElement;
use crate::module::{CFiniteModule, ElementMatrix, ModuleAction, ModuleVector};
use crate::nilpotent::{CentralCharacter, Class2Datum, GroupElement};
use crate::scalar::{ExactInt, ExactRational};
use crate::{IntMatrix, Sublattice};

fn err(path: &str, message: impl Into<String>) -> Error {
    Error::Parse {
        path: if path.is_empty() { "<root>".into() } else { path.into() },
        message: message.into(),
    }
}

fn join(path: &str, key: &str) -> String {
    if path.is_empty() {
        key.to_string()
    } else {
        format!("{path}.{key}")
    }
}

fn index(path: &str, i: usize) -> String {
    format!("{path}[{i}]")
}

fn object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| err(path, "expected an object"))
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| err(&join(path, key), "missing field"))
}

fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| err(path, "expected an array"))
}

fn int(v: &Value, path: &str) -> Result<i64> {
    v.as_i64().ok_or_else(|| err(path, "expected an integer"))
}

fn uint(v: &Value, path: &str) -> Result<u64> {
    v.as_u64().ok_or_else(|| err(path, "expected a non-negative integer"))
}

fn usize_field(obj: &Map<String, Value>, key: &str, path: &str) -> Result<usize> {
    Ok(uint(field(obj, key, path)?, &join(path, key))? as usize)
}

fn int_vec(v: &Value, path: &str, len: Option<usize>) -> Result<Vec<i64>> {
    let a = array(v, path)?;
    if let Some(n) = len {
        if a.len() != n {
            return Err(err(path, format!("expected {n} entries, found {}", a.len())));
        }
    }
    a.iter().enumerate().map(|(i, x)| int(x, &index(path, i))).collect()
}

fn int_rows(v: &Value, path: &str, cols: usize) -> Result<Vec<Vec<i64>>> {
    array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, r)| int_vec(r, &index(path, i), Some(cols)))
        .collect()
}

fn one_based(v: &Value, path: &str, max: usize) -> Result<usize> {
    let i = uint(v, path)? as usize;
    if i == 0 || i > max {
        return Err(err(path, format!("index must lie in 1..={max}")));
    }
    Ok(i - 1)
}

/// Renders a value with sorted keys, two-space indentation and a trailing
/// newline.
pub fn to_canonical_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values always serialize");
    s.push('\n');
    s
}

pub fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| err("", format!("malformed JSON: {e}")))
}

/// Integer rows as JSON numbers; entries beyond 64 bits fall back to
/// decimal strings.
fn int_matrix_json(m: &IntMatrix) -> Value {
    let rows: Vec<Value> = m
        .row_vecs()
        .iter()
        .map(|r| {
            Value::Array(
                r.iter()
                    .map(|x| x.to_small().map_or_else(|| json!(x.to_string()), |v| json!(v)))
                    .collect(),
            )
        })
        .collect();
    Value::Array(rows)
}

// ---- scalars ----------------------------------------------------------

pub fn gamma_to_json(g: &GammaElement) -> Value {
    json!({ "tors": g.tors(), "free": g.free() })
}

fn gamma_from_obj(obj: &Map<String, Value>, path: &str, order: u64, params: usize) -> Result<GammaElement> {
    let tors = int(field(obj, "tors", path)?, &join(path, "tors"))?;
    let free = int_vec(field(obj, "free", path)?, &join(path, "free"), Some(params))?;
    Ok(GammaElement::new(order, tors, free))
}

pub fn coefficient_to_json<Q: ExactRational>(c: &Coefficient<Q>) -> Value {
    Value::Array(
        c.terms()
            .iter()
            .map(|(e, z)| {
                json!({
                    "free_exponents": e,
                    "cyclotomic": z.coeffs().iter().map(|q| q.to_string()).collect::<Vec<_>>(),
                })
            })
            .collect(),
    )
}

fn rational<Q: ExactRational>(v: &Value, path: &str) -> Result<Q> {
    match v {
        Value::String(s) => s.trim().parse::<Q>().map_err(|_| err(path, format!("`{s}` is not a rational"))),
        Value::Number(n) => n
            .as_i64()
            .map(Q::from_int)
            .ok_or_else(|| err(path, "numeric rationals must be integers; use a \"p/q\" string")),
        _ => Err(err(path, "expected a rational string \"p/q\"")),
    }
}

pub fn coefficient_from_json<Q: ExactRational>(ring: &ScalarRing, v: &Value, path: &str) -> Result<Coefficient<Q>> {
    let mut acc = ring.zero();
    for (i, t) in array(v, path)?.iter().enumerate() {
        let p = index(path, i);
        let obj = object(t, &p)?;
        let e = int_vec(field(obj, "free_exponents", &p)?, &join(&p, "free_exponents"), Some(ring.params()))?;
        let cp = join(&p, "cyclotomic");
        let raw = array(field(obj, "cyclotomic", &p)?, &cp)?
            .iter()
            .enumerate()
            .map(|(k, q)| rational::<Q>(q, &index(&cp, k)))
            .collect::<Result<Vec<_>>>()?;
        let z = Cyclotomic::from_poly(ring.modulus(), raw);
        acc = acc.try_add(&ring.term(e, z))?;
    }
    Ok(acc)
}

// ---- specs and elements -----------------------------------------------

pub fn spec_to_json(spec: &AlgebraSpec) -> Value {
    let n = spec.rank();
    let mut q = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let g = spec.q(i, j);
            if !g.is_zero() {
                q.push(json!({ "i": i + 1, "j": j + 1, "tors": g.tors(), "free": g.free() }));
            }
        }
    }
    json!({
        "rank": n,
        "torsion_order": spec.torsion_order(),
        "free_params": spec.free_params(),
        "q": q,
    })
}

pub fn spec_from_json(v: &Value) -> Result<AlgebraSpec> {
    let obj = object(v, "")?;
    let n = usize_field(obj, "rank", "")?;
    let order = uint(field(obj, "torsion_order", "")?, "torsion_order")?;
    if order == 0 {
        return Err(err("torsion_order", "must be at least 1"));
    }
    let m = usize_field(obj, "free_params", "")?;
    let mut spec = AlgebraSpec::zero(n, order, m).map_err(|e| err("", e.to_string()))?;
    let mut seen = std::collections::BTreeSet::new();
    for (k, entry) in array(field(obj, "q", "")?, "q")?.iter().enumerate() {
        let p = index("q", k);
        let e = object(entry, &p)?;
        let i = one_based(field(e, "i", &p)?, &join(&p, "i"), n)?;
        let j = one_based(field(e, "j", &p)?, &join(&p, "j"), n)?;
        if i >= j {
            return Err(err(&p, "entries must satisfy i < j"));
        }
        if !seen.insert((i, j)) {
            return Err(err(&p, format!("duplicate entry for ({}, {})", i + 1, j + 1)));
        }
        spec.set(i, j, gamma_from_obj(e, &p, order, m)?)
            .map_err(|e| err(&p, e.to_string()))?;
    }
    Ok(spec)
}

pub fn element_to_json<Q: ExactRational>(x: &TorusElement<Q>) -> Value {
    let terms: Vec<Value> = x
        .terms()
        .iter()
        .map(|(a, c)| json!({ "exponent": a, "coeff": coefficient_to_json(c) }))
        .collect();
    json!({ "terms": terms })
}

pub fn element_from_json<Q: ExactRational>(spec: &Arc<AlgebraSpec>, v: &Value, path: &str) -> Result<TorusElement<Q>> {
    let obj = object(v, path)?;
    let tp = join(path, "terms");
    let mut terms = Vec::new();
    for (k, t) in array(field(obj, "terms", path)?, &tp)?.iter().enumerate() {
        let p = index(&tp, k);
        let e = object(t, &p)?;
        let a = int_vec(field(e, "exponent", &p)?, &join(&p, "exponent"), Some(spec.rank()))?;
        let c = coefficient_from_json(spec.ring(), field(e, "coeff", &p)?, &join(&p, "coeff"))?;
        terms.push((a, c));
    }
    TorusElement::from_terms(spec, terms).map_err(|e| err(&tp, e.to_string()))
}

pub fn vector_to_json<Q: ExactRational>(v: &ModuleVector<Q>) -> Value {
    Value::Array(v.iter().map(element_to_json).collect())
}

pub fn vector_from_json<Q: ExactRational>(spec: &Arc<AlgebraSpec>, v: &Value, path: &str) -> Result<ModuleVector<Q>> {
    array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, x)| element_from_json(spec, x, &index(path, i)))
        .collect()
}

// ---- lattices -----------------------------------------------------------

pub fn sublattice_to_json(l: &Sublattice) -> Value {
    int_matrix_json(l.basis())
}

/// A sublattice given by generating rows, either as a bare nested array or
/// as `{"basis": [[…]]}`.
pub fn sublattice_from_json(v: &Value, ambient: usize, path: &str) -> Result<Sublattice> {
    let (rows, p) = match v {
        Value::Object(obj) => (field(obj, "basis", path)?, join(path, "basis")),
        _ => (v, path.to_string()),
    };
    let rows = int_rows(rows, &p, ambient)?;
    Sublattice::from_i64_rows(ambient, &rows).map_err(|e| err(&p, e.to_string()))
}

pub fn complement_to_json(sol: &ComplementSolution) -> Value {
    json!({ "s": sol.s, "mu": sol.mu, "E_basis": sol.e_generators })
}

// ---- modules ------------------------------------------------------------

fn matrix_to_json<Q: ExactRational>(m: &ElementMatrix<Q>) -> Value {
    Value::Array(
        m.rows()
            .iter()
            .map(|r| Value::Array(r.iter().map(element_to_json).collect()))
            .collect(),
    )
}

fn matrix_from_json<Q: ExactRational>(
    local: &Arc<AlgebraSpec>,
    v: &Value,
    d: usize,
    path: &str,
) -> Result<ElementMatrix<Q>> {
    let rows = array(v, path)?;
    if rows.len() != d {
        return Err(err(path, format!("expected {d} rows, found {}", rows.len())));
    }
    let mut out = Vec::with_capacity(d);
    for (i, r) in rows.iter().enumerate() {
        let rp = index(path, i);
        let entries = array(r, &rp)?;
        if entries.len() != d {
            return Err(err(&rp, format!("expected {d} entries, found {}", entries.len())));
        }
        out.push(
            entries
                .iter()
                .enumerate()
                .map(|(k, x)| element_from_json(local, x, &index(&rp, k)))
                .collect::<Result<Vec<_>>>()?,
        );
    }
    ElementMatrix::from_rows(local, out).map_err(|e| err(path, e.to_string()))
}

fn action_list<Q: ExactRational>(
    local: &Arc<AlgebraSpec>,
    v: &Value,
    r: usize,
    d: usize,
    path: &str,
) -> Result<Vec<ElementMatrix<Q>>> {
    let n = local.rank();
    let mut slots: Vec<Option<ElementMatrix<Q>>> = vec![None; n - r];
    for (k, entry) in array(v, path)?.iter().enumerate() {
        let p = index(path, k);
        let e = object(entry, &p)?;
        let jp = join(&p, "j");
        let j = one_based(field(e, "j", &p)?, &jp, n)?;
        if j < r {
            return Err(err(&jp, format!("generator {} lies in the commutative part", j + 1)));
        }
        if slots[j - r].is_some() {
            return Err(err(&jp, format!("duplicate matrix for generator {}", j + 1)));
        }
        slots[j - r] = Some(matrix_from_json(local, field(e, "matrix", &p)?, d, &join(&p, "matrix"))?);
    }
    slots
        .into_iter()
        .enumerate()
        .map(|(k, m)| m.ok_or_else(|| err(path, format!("missing matrix for generator {}", r + k + 1))))
        .collect()
}

/// Module files give the split basis of `Z^n` (first `r` rows span `C`),
/// and for each remaining local generator `j` the matrix `A_j` whose
/// entries are elements written in the split coordinates. An optional
/// `"inverse"` list supplies `A_j^{-1}` when determinants are not units.
pub fn module_to_json<Q: ExactRational>(m: &CFiniteModule<Q>) -> Value {
    let n = m.spec().rank();
    let actions: Vec<Value> = (m.r()..n)
        .map(|j| json!({ "j": j + 1, "matrix": matrix_to_json(m.action(j)) }))
        .collect();
    let mut out = json!({
        "split": int_matrix_json(m.split()),
        "r": m.r(),
        "d": m.d(),
        "actions": actions,
    });
    if (m.r()..n).all(|j| m.inverse(j).is_some()) && m.r() < n {
        let inverse: Vec<Value> = (m.r()..n)
            .map(|j| json!({ "j": j + 1, "matrix": matrix_to_json(m.inverse(j).expect("checked")) }))
            .collect();
        out["inverse"] = Value::Array(inverse);
    }
    out
}

pub fn module_from_json<Q: ExactRational>(spec: &Arc<AlgebraSpec>, v: &Value) -> Result<CFiniteModule<Q>> {
    let obj = object(v, "")?;
    let n = spec.rank();
    let rows = int_rows(field(obj, "split", "")?, "split", n)?;
    if rows.len() != n {
        return Err(err("split", format!("expected {n} rows, found {}", rows.len())));
    }
    let split = IntMatrix::from_i64_rows(n, &rows).map_err(|e| err("split", e.to_string()))?;
    if !split.is_unimodular() {
        return Err(err("split", "rows must form a basis of Z^n"));
    }
    let r = usize_field(obj, "r", "")?;
    if r > n {
        return Err(err("r", format!("must be at most {n}")));
    }
    let d = usize_field(obj, "d", "")?;
    if d == 0 {
        return Err(err("d", "must be at least 1"));
    }
    let local = Arc::new(spec.rebase(&split).map_err(|e| err("split", e.to_string()))?);
    let actions = action_list(&local, field(obj, "actions", "")?, r, d, "actions")?;
    let built = if r == n {
        CFiniteModule::trivial_action(spec, &split, d)
    } else if let Some(inv) = obj.get("inverse") {
        let inverses = action_list(&local, inv, r, d, "inverse")?;
        CFiniteModule::with_inverses(spec, &split, r, actions, inverses)
    } else {
        CFiniteModule::new(spec, &split, r, actions)
    };
    built.map_err(|e| match e {
        Error::Parse { .. } => e,
        other => err("", other.to_string()),
    })
}

// ---- nilpotent data -------------------------------------------------------

pub fn datum_to_json(d: &Class2Datum) -> Value {
    let comm: Vec<Value> = d
        .entries()
        .map(|((i, j), c)| json!({ "i": i + 1, "j": j + 1, "central": c }))
        .collect();
    json!({ "n": d.n(), "z": d.z(), "comm": comm })
}

pub fn datum_from_json(v: &Value) -> Result<Class2Datum> {
    let obj = object(v, "")?;
    let n = usize_field(obj, "n", "")?;
    let z = usize_field(obj, "z", "")?;
    let mut d = Class2Datum::new(n, z).map_err(|e| err("", e.to_string()))?;
    for (k, entry) in array(field(obj, "comm", "")?, "comm")?.iter().enumerate() {
        let p = index("comm", k);
        let e = object(entry, &p)?;
        let i = one_based(field(e, "i", &p)?, &join(&p, "i"), n)?;
        let j = one_based(field(e, "j", &p)?, &join(&p, "j"), n)?;
        if i >= j {
            return Err(err(&p, "entries must satisfy i < j"));
        }
        let c = int_vec(field(e, "central", &p)?, &join(&p, "central"), Some(z))?;
        d.set_comm(i, j, c).map_err(|e| err(&p, e.to_string()))?;
    }
    Ok(d)
}

pub fn character_to_json(chi: &CentralCharacter) -> Value {
    json!({
        "images": chi.images().iter().map(gamma_to_json).collect::<Vec<_>>(),
        "torsion_order": chi.torsion_order(),
        "free_params": chi.free_params(),
    })
}

pub fn character_from_json(v: &Value) -> Result<CentralCharacter> {
    let obj = object(v, "")?;
    let order = uint(field(obj, "torsion_order", "")?, "torsion_order")?;
    if order == 0 {
        return Err(err("torsion_order", "must be at least 1"));
    }
    let m = usize_field(obj, "free_params", "")?;
    let images = array(field(obj, "images", "")?, "images")?
        .iter()
        .enumerate()
        .map(|(k, g)| {
            let p = index("images", k);
            gamma_from_obj(object(g, &p)?, &p, order, m)
        })
        .collect::<Result<Vec<_>>>()?;
    CentralCharacter::new(order, m, images).map_err(|e| err("images", e.to_string()))
}

/// Subgroup generators `[{"a": [...], "central": [...]}]`.
pub fn group_elements_from_json(v: &Value, datum: &Class2Datum, path: &str) -> Result<Vec<GroupElement>> {
    array(v, path)?
        .iter()
        .enumerate()
        .map(|(k, g)| {
            let p = index(path, k);
            let e = object(g, &p)?;
            Ok(GroupElement {
                a: int_vec(field(e, "a", &p)?, &join(&p, "a"), Some(datum.n()))?,
                central: int_vec(field(e, "central", &p)?, &join(&p, "central"), Some(datum.z()))?,
            })
        })
        .collect()
}

pub fn group_elements_to_json(gens: &[GroupElement]) -> Value {
    Value::Array(gens.iter().map(|g| json!({ "a": g.a, "central": g.central })).collect())
}

// ---- bounds ---------------------------------------------------------------

pub fn bounds_to_json(b: &Bounds) -> Value {
    json!({
        "k_max": b.k_max,
        "deg_bound": b.deg_bound,
        "s_max": b.s_max,
        "search_bound": b.search_bound,
    })
}

/// Missing keys keep their defaults.
pub fn bounds_from_json(v: &Value, path: &str) -> Result<Bounds> {
    let obj = object(v, path)?;
    let mut b = Bounds::default();
    for key in obj.keys() {
        if !matches!(key.as_str(), "k_max" | "deg_bound" | "s_max" | "search_bound") {
            return Err(err(&join(path, key), "unknown bound"));
        }
    }
    let get = |key: &str| obj.get(key).map(|x| uint(x, &join(path, key))).transpose();
    if let Some(x) = get("k_max")? {
        b.k_max = x as usize;
    }
    if let Some(x) = get("deg_bound")? {
        b.deg_bound = x as u32;
    }
    if let Some(x) = get("s_max")? {
        b.s_max = x;
    }
    if let Some(x) = get("search_bound")? {
        b.search_bound = x as u32;
    }
    Ok(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rat;

    fn plane() -> AlgebraSpec {
        AlgebraSpec::from_upper(2, 1, 1, &[(0, 1, GammaElement::new(1, 0, vec![1]))]).unwrap()
    }

    #[test]
    fn spec_round_trip_and_paths() {
        let spec = plane();
        let v = spec_to_json(&spec);
        assert_eq!(spec_from_json(&v).unwrap(), spec);
        let bad = parse_json(r#"{"rank":2,"torsion_order":1,"free_params":1,"q":[{"i":1,"j":2,"tors":0,"free":["x"]}]}"#)
            .unwrap();
        match spec_from_json(&bad) {
            Err(Error::Parse { path, .. }) => assert_eq!(path, "q[0].free[0]"),
            other => panic!("unexpected {other:?}"),
        }
        let missing = parse_json(r#"{"rank":2,"free_params":1,"q":[]}"#).unwrap();
        match spec_from_json(&missing) {
            Err(Error::Parse { path, .. }) => assert_eq!(path, "torsion_order"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn canonical_output_sorts_keys() {
        let s = to_canonical_string(&spec_to_json(&plane()));
        let free = s.find("\"free_params\"").unwrap();
        let rank = s.find("\"rank\"").unwrap();
        let tors = s.find("\"torsion_order\"").unwrap();
        assert!(free < rank && rank < tors);
    }

    #[test]
    fn element_round_trip() {
        let spec = Arc::new(AlgebraSpec::from_upper(2, 3, 1, &[(0, 1, GammaElement::new(3, 1, vec![0]))]).unwrap());
        let ring = spec.ring().clone();
        let half = ring.constant::<Rat>(Rat::new(1.into(), 2.into()));
        let z = ring.embed_unit::<Rat>(&GammaElement::new(3, 2, vec![-1]));
        let x = TorusElement::from_terms(&spec, vec![(vec![1, -2], half), (vec![0, 3], z)]).unwrap();
        let v = element_to_json(&x);
        assert_eq!(element_from_json::<Rat>(&spec, &v, "").unwrap(), x);
    }

    #[test]
    fn nilpotent_round_trips() {
        let d = Class2Datum::heisenberg();
        assert_eq!(datum_from_json(&datum_to_json(&d)).unwrap(), d);
        let chi = CentralCharacter::new(3, 1, vec![GammaElement::new(3, 1, vec![2])]).unwrap();
        assert_eq!(character_from_json(&character_to_json(&chi)).unwrap(), chi);
        let b = Bounds { k_max: 4, ..Bounds::default() };
        assert_eq!(bounds_from_json(&bounds_to_json(&b), "").unwrap(), b);
    }
}

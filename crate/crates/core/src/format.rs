//! JSON file formats for specs, gates and schedules.
//!
//! State and symbol names may be written as JSON strings or numbers.
//! Complex entries are `{"re": x, "im": y}` (a missing `im` is zero) or plain
//! numbers.

use std::collections::{BTreeMap, BTreeSet};

use num_complex::Complex;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::bqca::Schedule;
use crate::classical::{CaSpec, Coord, State};
use crate::error::{Error, Result};
use crate::gates::{named_gate, Gate};
use crate::matrix::SquareMatrix;
use crate::pqca::PqcaSpec;
use crate::qca1d::{QcaSpec, StateIndex};
use crate::qtm::{Move, QtmSpec, Transition};
use crate::scalar::Real;

fn bad(msg: impl Into<String>) -> Error {
    Error::Format(msg.into())
}

fn parse<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| bad(e.to_string()))
}

fn name(v: &Value) -> Result<String> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        other => Err(bad(format!("expected a name, found {other}"))),
    }
}

fn names(vs: &[Value]) -> Result<Vec<String>> {
    vs.iter().map(name).collect()
}

fn lookup(table: &[String], v: &Value) -> Result<usize> {
    let n = name(v)?;
    table.iter().position(|s| *s == n).ok_or_else(|| bad(format!("unknown name `{n}`")))
}

fn complex<R: Real>(v: &Value) -> Result<Complex<R>> {
    let num = |x: Option<&Value>| -> Result<f64> {
        match x {
            None => Ok(0.0),
            Some(x) => x.as_f64().ok_or_else(|| bad(format!("expected a number, found {x}"))),
        }
    };
    match v {
        Value::Number(n) => Ok(Complex::new(R::of(n.as_f64().unwrap_or(f64::NAN)), R::zero())),
        Value::Object(o) => Ok(Complex::new(R::of(num(o.get("re"))?), R::of(num(o.get("im"))?))),
        other => Err(bad(format!("expected a complex number, found {other}"))),
    }
}

fn complex_json<R: Real>(c: Complex<R>) -> Value {
    json!({"re": c.re.as_f64(), "im": c.im.as_f64()})
}

/// Row-major matrix literal.
pub fn matrix_from_json<R: Real>(v: &Value) -> Result<SquareMatrix<R>> {
    let rows = v.as_array().ok_or_else(|| bad("matrix must be an array of rows"))?;
    let rows = rows
        .iter()
        .map(|r| r.as_array().ok_or_else(|| bad("matrix row must be an array"))?.iter().map(complex).collect())
        .collect::<Result<Vec<Vec<_>>>>()?;
    let n = rows.len();
    SquareMatrix::from_rows(rows).ok_or(Error::BadMatrixShape(n))
}

pub fn matrix_to_json<R: Real>(m: &SquareMatrix<R>) -> Value {
    Value::Array(m.rows().map(|r| Value::Array(r.iter().map(|&c| complex_json(c)).collect())).collect())
}

/// `{"arity": k, "matrix": [[…], …]}`.
pub fn gate_from_json<R: Real>(v: &Value) -> Result<Gate<R>> {
    let arity = v.get("arity").and_then(Value::as_u64).ok_or_else(|| bad("gate literal needs an integer `arity`"))?;
    let matrix = matrix_from_json(v.get("matrix").ok_or_else(|| bad("gate literal needs `matrix`"))?)?;
    Gate::new(arity as usize, matrix)
}

pub fn gate_to_json<R: Real>(g: &Gate<R>) -> Value {
    json!({"arity": g.arity(), "matrix": matrix_to_json(g.matrix())})
}

/// A named gate, a product of named gates written `H⊗I` or `H*I`, or a literal.
pub fn gate_entry<R: Real>(v: &Value) -> Result<Gate<R>> {
    match v {
        Value::String(s) => {
            let mut factors = s.split(['⊗', '*']).map(|f| named_gate::<R>(f.trim()));
            let first = factors.next().ok_or_else(|| bad("empty gate name"))??;
            factors.try_fold(first, |acc, g| Ok(acc.tensor(&g?)))
        }
        Value::Object(o) if o.contains_key("tensor") => {
            let parts = o["tensor"].as_array().ok_or_else(|| bad("`tensor` must be a list"))?;
            let mut gates = parts.iter().map(gate_entry::<R>);
            let first = gates.next().ok_or_else(|| bad("empty tensor product"))??;
            gates.try_fold(first, |acc, g| Ok(acc.tensor(&g?)))
        }
        _ => gate_from_json(v),
    }
}

/// A list of gate entries, applied cyclically.
pub fn schedule_from_json<R: Real>(text: &str) -> Result<Schedule<R>> {
    let v: Value = parse(text)?;
    let list = v.as_array().ok_or_else(|| bad("schedule must be a list"))?;
    Ok(Schedule::PerStep(list.iter().map(gate_entry).collect::<Result<_>>()?))
}

#[derive(Debug, Serialize, Deserialize)]
struct CaFile {
    dim: usize,
    states: Vec<State>,
    neighborhood: Vec<Value>,
    #[serde(default)]
    quiescent: Option<State>,
    table: Vec<CaEntry>,
}

#[derive(Debug, Serialize, Deserialize)]
struct CaEntry {
    nbhd: Vec<State>,
    out: State,
}

/// `{"dim", "states", "neighborhood", "quiescent", "table": [{"nbhd", "out"}]}`.
/// One-dimensional offsets may be plain integers.
pub fn ca_from_json(text: &str) -> Result<CaSpec> {
    let f: CaFile = parse(text)?;
    let offsets = f
        .neighborhood
        .iter()
        .map(|o| match o {
            Value::Number(n) => n.as_i64().map(|i| [i, 0]).ok_or_else(|| bad("offset must be an integer")),
            _ => serde_json::from_value::<Coord>(o.clone()).map_err(|e| bad(e.to_string())),
        })
        .collect::<Result<Vec<_>>>()?;
    let mut table = BTreeMap::new();
    for e in f.table {
        if table.insert(e.nbhd.clone(), e.out).is_some() {
            return Err(bad(format!("duplicate table entry {:?}", e.nbhd)));
        }
    }
    CaSpec::new(f.dim, f.states, offsets, table, f.quiescent)
}

pub fn ca_to_json(spec: &CaSpec) -> Value {
    let neighborhood: Vec<Value> = if spec.dim() == 1 {
        spec.neighborhood().iter().map(|o| json!(o[0])).collect()
    } else {
        spec.neighborhood().iter().map(|o| json!(o)).collect()
    };
    let table: Vec<CaEntry> = spec.table().iter().map(|(k, &out)| CaEntry { nbhd: k.clone(), out }).collect();
    json!({
        "dim": spec.dim(),
        "states": spec.states(),
        "neighborhood": neighborhood,
        "quiescent": spec.quiescent(),
        "table": table,
    })
}

#[derive(Debug, Deserialize)]
struct QcaFile {
    states: Vec<Value>,
    quiescent: Value,
    neighborhood: Vec<i64>,
    delta: Vec<QcaEntry>,
}

#[derive(Debug, Deserialize)]
struct QcaEntry {
    nbhd: Vec<Value>,
    target: Value,
    #[serde(default)]
    re: f64,
    #[serde(default)]
    im: f64,
}

/// `{"states", "quiescent", "neighborhood", "delta": [{"nbhd", "target", "re", "im"}]}`.
/// The quiescent state is moved to index `0`. With `checked`, entries above
/// modulus one and unstable quiescent states are rejected.
pub fn qca_from_json<R: Real>(text: &str, checked: bool) -> Result<QcaSpec<R>> {
    let f: QcaFile = parse(text)?;
    let mut states = names(&f.states)?;
    let q = lookup(&states, &f.quiescent)?;
    let lambda = states.remove(q);
    states.insert(0, lambda);
    let mut delta: BTreeMap<(Vec<StateIndex>, StateIndex), Complex<R>> = BTreeMap::new();
    for e in &f.delta {
        if e.nbhd.len() != f.neighborhood.len() {
            return Err(bad("neighborhood tuple has the wrong length"));
        }
        let tuple = e.nbhd.iter().map(|v| lookup(&states, v).map(|i| i as StateIndex)).collect::<Result<Vec<_>>>()?;
        let target = lookup(&states, &e.target)? as StateIndex;
        if delta.insert((tuple, target), Complex::new(R::of(e.re), R::of(e.im))).is_some() {
            return Err(bad("duplicate delta entry"));
        }
    }
    let get = |t: &[StateIndex], q: StateIndex| delta.get(&(t.to_vec(), q)).copied().unwrap_or_default();
    if checked {
        QcaSpec::from_fn(states, f.neighborhood, get)
    } else {
        QcaSpec::from_fn_unchecked(states, f.neighborhood, get)
    }
}

pub fn qca_to_json<R: Real>(spec: &QcaSpec<R>) -> Value {
    let st = spec.states();
    let delta: Vec<Value> = spec
        .entries()
        .into_iter()
        .map(|(t, q, a)| {
            let nbhd: Vec<&str> = t.iter().map(|&i| st[i as usize].as_str()).collect();
            json!({"nbhd": nbhd, "target": st[q as usize], "re": a.re.as_f64(), "im": a.im.as_f64()})
        })
        .collect();
    json!({"states": st, "quiescent": st[0], "neighborhood": spec.neighborhood(), "delta": delta})
}

/// `{"parts", "offsets", "quiescent", "U"}`; `U` is a matrix literal or a gate
/// literal. Sub-states are reordered so each part's quiescent entry comes first.
pub fn pqca_from_json<R: Real>(text: &str) -> Result<PqcaSpec<R>> {
    let v: Value = parse(text)?;
    let field = |k: &str| v.get(k).ok_or_else(|| bad(format!("missing `{k}`")));
    let parts = field("parts")?
        .as_array()
        .ok_or_else(|| bad("`parts` must be a list"))?
        .iter()
        .map(|p| p.as_array().ok_or_else(|| bad("each part must be a list")).and_then(|p| names(p)))
        .collect::<Result<Vec<_>>>()?;
    let offsets: Vec<i64> = serde_json::from_value(field("offsets")?.clone()).map_err(|e| bad(e.to_string()))?;
    let quiescent = field("quiescent")?.as_array().ok_or_else(|| bad("`quiescent` must be a list"))?;
    if quiescent.len() != parts.len() {
        return Err(bad("one quiescent sub-state per part"));
    }
    let u_value = field("U")?;
    let u: SquareMatrix<R> = match u_value {
        Value::Array(_) => matrix_from_json(u_value)?,
        _ => gate_entry::<R>(u_value)?.matrix().clone(),
    };

    // order[k][new] = old sub-state index
    let mut order = Vec::new();
    let mut reordered = Vec::new();
    for (part, q) in parts.iter().zip(quiescent) {
        let qi = lookup(part, q)?;
        let mut o: Vec<usize> = (0..part.len()).collect();
        o.remove(qi);
        o.insert(0, qi);
        reordered.push(o.iter().map(|&i| part[i].clone()).collect::<Vec<_>>());
        order.push(o);
    }
    let dim: usize = parts.iter().map(Vec::len).product();
    if u.dim() != dim {
        return Err(Error::InvalidSpec(format!("U has dimension {} but |Q| = {dim}", u.dim())));
    }
    let old_index = |new: usize| {
        let mut rest = new;
        let mut digits = vec![0; parts.len()];
        for k in (0..parts.len()).rev() {
            digits[k] = order[k][rest % parts[k].len()];
            rest /= parts[k].len();
        }
        digits.iter().zip(&parts).fold(0, |acc, (&d, p)| acc * p.len() + d)
    };
    let permuted = SquareMatrix::from_fn(dim, |i, j| u.get(old_index(i), old_index(j)));
    PqcaSpec::new(reordered, offsets, permuted)
}

pub fn pqca_to_json<R: Real>(spec: &PqcaSpec<R>) -> Value {
    let quiescent: Vec<&str> = spec.parts().iter().map(|p| p[0].as_str()).collect();
    json!({
        "parts": spec.parts(),
        "offsets": spec.offsets(),
        "quiescent": quiescent,
        "U": matrix_to_json(spec.u()),
    })
}

#[derive(Debug, Serialize, Deserialize)]
struct QtmFile {
    alphabet: Vec<Value>,
    blank: Value,
    states: Vec<Value>,
    q0: Value,
    qf: Value,
    delta: Vec<QtmEntry>,
}

#[derive(Debug, Serialize, Deserialize)]
struct QtmEntry {
    q: Value,
    read: Value,
    write: Value,
    q2: Value,
    #[serde(rename = "move")]
    dir: String,
    #[serde(default)]
    re: f64,
    #[serde(default)]
    im: f64,
}

/// `{"alphabet", "blank", "states", "q0", "qf", "delta": [{"q", "read", "write", "q2", "move", "re", "im"}]}`.
pub fn qtm_from_json<R: Real>(text: &str) -> Result<QtmSpec<R>> {
    let f: QtmFile = parse(text)?;
    let alphabet = names(&f.alphabet)?;
    let states = names(&f.states)?;
    let a: Vec<&str> = alphabet.iter().map(String::as_str).collect();
    let s: Vec<&str> = states.iter().map(String::as_str).collect();
    let mut spec = QtmSpec::new(&a, &name(&f.blank)?, &s, &name(&f.q0)?, &name(&f.qf)?)?;
    for e in &f.delta {
        let q = spec.state_id(&name(&e.q)?)?;
        let read = spec.symbol_id(&name(&e.read)?)?;
        let t = Transition {
            write: spec.symbol_id(&name(&e.write)?)?,
            next: spec.state_id(&name(&e.q2)?)?,
            dir: Move::parse(&e.dir)?,
            amp: Complex::new(R::of(e.re), R::of(e.im)),
        };
        spec.add_rule(q, read, t)?;
    }
    Ok(spec)
}

pub fn qtm_to_json<R: Real>(spec: &QtmSpec<R>) -> Value {
    let sym = |i: u32| Value::String(spec.alphabet()[i as usize].clone());
    let st = |i: u32| Value::String(spec.states()[i as usize].clone());
    let delta: Vec<QtmEntry> = spec
        .rules()
        .map(|(q, read, t)| QtmEntry {
            q: st(q),
            read: sym(read),
            write: sym(t.write),
            q2: st(t.next),
            dir: t.dir.code().to_string(),
            re: t.amp.re.as_f64(),
            im: t.amp.im.as_f64(),
        })
        .collect();
    json!({
        "alphabet": spec.alphabet(),
        "blank": spec.alphabet()[0],
        "states": spec.states(),
        "q0": st(spec.q0()),
        "qf": st(spec.qf()),
        "delta": delta,
    })
}

/// Comma-separated symbol names resolved against the machine's alphabet.
pub fn symbol_set<R: Real>(spec: &QtmSpec<R>, list: &str) -> Result<BTreeSet<u32>> {
    list.split(',').filter(|s| !s.trim().is_empty()).map(|s| spec.symbol_id(s.trim())).collect()
}

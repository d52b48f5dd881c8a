//! JSON documents for matrices, ℤ₂ matrices, cross sections, flow codes,
//! move lists and certificates. Every document carries
//! `"schema": "sftkit/1"`; keys are emitted in sorted order so output is
//! canonical.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::flowcode::FlowCode;
use crate::invariants::{GroupRingMatrixZ2, SmithForm};
use crate::matrix::IntMatrix;
use crate::mcg::{Evidence, TrivialityCertificate};
use crate::poseq::{BasicMove, MoveSpec};
use crate::section::CrossSection;
use crate::sft::{AdjacencyMatrix, EdgeShift, Word};

pub const SCHEMA: &str = "sftkit/1";

fn parse_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse(msg.into()))
}

/// Parses JSON text, mapping syntax errors to [`Error::Parse`].
pub fn from_str(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

/// Pretty, key-sorted rendering with a trailing newline.
pub fn to_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

/// Adds the schema tag to an object.
pub fn tagged(mut v: Value) -> Value {
    if let Value::Object(m) = &mut v {
        m.insert("schema".into(), Value::String(SCHEMA.into()));
    }
    v
}

fn check_schema(v: &Value) -> Result<&Map<String, Value>> {
    let Value::Object(m) = v else {
        return parse_err("expected a JSON object");
    };
    match m.get("schema") {
        None => Ok(m),
        Some(Value::String(s)) if s == SCHEMA => Ok(m),
        Some(other) => parse_err(format!("unsupported schema {other}, expected {SCHEMA:?}")),
    }
}

fn field<'a>(m: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    m.get(key).ok_or_else(|| Error::Parse(format!("missing field {key:?}")))
}

/// An integer as a JSON number, or a decimal string when it exceeds `i64`.
pub fn int_json(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => json!(v),
        None => Value::String(x.to_string()),
    }
}

fn parse_int(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => match n.as_i64() {
            Some(x) => Ok(BigInt::from(x)),
            None => parse_err(format!("{n} is not an integer")),
        },
        Value::String(s) => s.trim().parse().map_err(|_| Error::Parse(format!("{s:?} is not an integer"))),
        other => parse_err(format!("{other} is not an integer")),
    }
}

fn parse_usize(v: &Value, what: &str) -> Result<usize> {
    v.as_u64().map(|x| x as usize).ok_or_else(|| Error::Parse(format!("{what} must be a nonnegative integer")))
}

fn parse_i64(v: &Value, what: &str) -> Result<i64> {
    v.as_i64().ok_or_else(|| Error::Parse(format!("{what} must be an integer")))
}

pub fn rows_json(m: &IntMatrix) -> Value {
    Value::Array(m.to_rows().iter().map(|r| Value::Array(r.iter().map(int_json).collect())).collect())
}

/// Parses `[[int, ...], ...]`; rows must have equal length.
pub fn parse_rows(v: &Value) -> Result<IntMatrix> {
    let Value::Array(rows) = v else {
        return parse_err("matrix rows must be an array of arrays");
    };
    let mut out = Vec::with_capacity(rows.len());
    for r in rows {
        let Value::Array(cells) = r else {
            return parse_err("matrix rows must be an array of arrays");
        };
        out.push(cells.iter().map(parse_int).collect::<Result<Vec<BigInt>>>()?);
    }
    if let Some(r) = out.iter().find(|r| r.len() != out[0].len()) {
        return parse_err(format!("ragged matrix: row of length {} among rows of length {}", r.len(), out[0].len()));
    }
    if out.is_empty() {
        return Ok(IntMatrix::zeros(0, 0));
    }
    Ok(IntMatrix::from_rows(&out))
}

/// Parses a matrix from JSON text or a bare `[[...]]` literal.
pub fn parse_matrix_literal(text: &str) -> Result<IntMatrix> {
    parse_rows(&from_str(text)?)
}

fn default_name(i: usize, j: usize, k: usize) -> String {
    format!("{i}.{j}.{k}")
}

/// `{"n", "rows", "edge_names"}`; `edge_names` maps `"i.j.k"` (0-based
/// source, target and parallel index) to a symbol and is omitted when every
/// edge keeps its default name.
pub fn shift_json(s: &EdgeShift) -> Value {
    let mut names = BTreeMap::new();
    let mut k = BTreeMap::new();
    for e in s.edges() {
        let c = k.entry((e.source, e.target)).or_insert(0usize);
        let d = default_name(e.source, e.target, *c);
        if e.name != d {
            names.insert(d, Value::String(e.name.clone()));
        }
        *c += 1;
    }
    let mut m = Map::new();
    m.insert("n".into(), json!(s.vertex_count()));
    m.insert("rows".into(), rows_json(s.matrix().matrix()));
    if !names.is_empty() {
        m.insert("edge_names".into(), Value::Object(names.into_iter().collect()));
    }
    Value::Object(m)
}

pub fn matrix_json(a: &AdjacencyMatrix) -> Value {
    json!({"n": a.size(), "rows": rows_json(a.matrix())})
}

/// Reads a matrix document, checking `n` against the rows.
pub fn parse_shift(v: &Value) -> Result<EdgeShift> {
    let m = check_schema(v)?;
    let rows = parse_rows(field(m, "rows")?)?;
    if let Some(n) = m.get("n") {
        let n = parse_usize(n, "n")?;
        if n != rows.rows() || n != rows.cols() {
            return Err(Error::Domain(format!("n = {n} but the rows form a {}x{} matrix", rows.rows(), rows.cols())));
        }
    }
    let a = AdjacencyMatrix::new(rows)?;
    let mut names = BTreeMap::new();
    if let Some(en) = m.get("edge_names") {
        let Value::Object(en) = en else {
            return parse_err("edge_names must be an object");
        };
        for (key, name) in en {
            let idx: Vec<usize> = key
                .split(['.', ','])
                .map(|t| t.trim().parse::<usize>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| Error::Parse(format!("edge key {key:?} is not of the form i.j.k")))?;
            let [i, j, k] = idx[..] else {
                return parse_err(format!("edge key {key:?} is not of the form i.j.k"));
            };
            let Value::String(name) = name else {
                return parse_err(format!("edge name for {key:?} must be a string"));
            };
            names.insert((i, j, k), name.clone());
        }
    }
    EdgeShift::with_names(a, &names)
}

pub fn parse_adjacency(v: &Value) -> Result<AdjacencyMatrix> {
    Ok(parse_shift(v)?.matrix().clone())
}

pub fn z2_json(z: &GroupRingMatrixZ2) -> Value {
    json!({"X": rows_json(z.x.matrix()), "Y": rows_json(z.y.matrix())})
}

pub fn parse_z2(v: &Value) -> Result<GroupRingMatrixZ2> {
    let m = check_schema(v)?;
    let x = AdjacencyMatrix::new(parse_rows(field(m, "X")?)?)?;
    let y = AdjacencyMatrix::new(parse_rows(field(m, "Y")?)?)?;
    GroupRingMatrixZ2::new(x, y)
}

pub fn smith_json(s: &SmithForm) -> Value {
    json!({
        "diag": s.diag.iter().map(int_json).collect::<Vec<_>>(),
        "U": rows_json(&s.left),
        "V": rows_json(&s.right),
    })
}

fn words_json(s: &EdgeShift, ws: impl IntoIterator<Item = impl AsRef<[usize]>>) -> Value {
    Value::Array(ws.into_iter().map(|w| Value::String(s.format_word(w.as_ref()))).collect())
}

fn parse_words(s: &EdgeShift, v: &Value) -> Result<Vec<Word>> {
    let Value::Array(items) = v else {
        return parse_err("expected an array of words");
    };
    items
        .iter()
        .map(|w| match w {
            Value::String(t) => s.parse_word(t),
            other => parse_err(format!("word {other} must be a string")),
        })
        .collect()
}

/// `{"N", "words", "parts", "display_order"}`, without the shift.
pub fn section_body(c: &CrossSection) -> Value {
    let s = c.shift();
    let mut m = Map::new();
    let n = match c.parts().first().and_then(|p| p.words.iter().next()) {
        Some(w) => (w.len() - 1) / 2,
        None => c.window(),
    };
    if c.parts().is_empty() {
        m.insert("words".into(), words_json(s, c.words()));
    } else {
        let mut all: Vec<&Word> = c.parts().iter().flat_map(|p| p.words.iter()).collect();
        all.sort();
        m.insert("words".into(), words_json(s, all));
        let parts = c
            .parts()
            .iter()
            .map(|p| json!({"name": p.name, "words": words_json(s, &p.words)}))
            .collect();
        m.insert("parts".into(), Value::Array(parts));
    }
    m.insert("N".into(), json!(n));
    if let Some(order) = c.display_order() {
        m.insert("display_order".into(), json!(order));
    }
    Value::Object(m)
}

/// A standalone section document, shift included.
pub fn section_json(c: &CrossSection) -> Value {
    let mut v = section_body(c);
    v.as_object_mut().expect("object").insert("shift".into(), shift_json(c.shift()));
    tagged(v)
}

/// Parses a section; `shift` supplies the ambient shift when the document
/// has none of its own.
pub fn parse_section(v: &Value, shift: Option<&EdgeShift>) -> Result<CrossSection> {
    let m = check_schema(v)?;
    let own;
    let s = match (m.get("shift"), shift) {
        (Some(sv), _) => {
            own = parse_shift(sv)?;
            &own
        }
        (None, Some(s)) => s,
        (None, None) => return parse_err("section has no shift"),
    };
    let n = parse_usize(field(m, "N")?, "N")?;
    let mut c = match m.get("parts") {
        Some(Value::Array(parts)) => {
            let mut ps = Vec::new();
            for p in parts {
                let pm = check_schema(p)?;
                let name = field(pm, "name")?.as_str().ok_or_else(|| Error::Parse("part name must be a string".into()))?;
                ps.push((name.to_string(), parse_words(s, field(pm, "words")?)?));
            }
            let c = CrossSection::with_parts(s.clone(), n, ps)?;
            if let Some(ws) = m.get("words") {
                let listed: std::collections::BTreeSet<Word> = parse_words(s, ws)?.into_iter().collect();
                let union: std::collections::BTreeSet<Word> =
                    c.parts().iter().flat_map(|p| p.words.iter().cloned()).collect();
                if listed != union {
                    return Err(Error::Domain("words differ from the union of the parts".into()));
                }
            }
            c
        }
        Some(_) => return parse_err("parts must be an array"),
        None => CrossSection::new(s.clone(), n, parse_words(s, field(m, "words")?)?)?,
    };
    if let Some(order) = m.get("display_order") {
        let order: Vec<usize> =
            serde_json::from_value(order.clone()).map_err(|e| Error::Parse(format!("display_order: {e}")))?;
        c = c.with_display_order(order);
    }
    Ok(c)
}

/// `{"shift", "domain", "codomain", "lo", "hi", "window", "table"}` where
/// `window = hi - lo + 1` and each row is `{"in": [W_lo, ..., W_hi], "out"}`.
pub fn code_body(f: &FlowCode) -> Value {
    let s = f.shift();
    let table: Vec<Value> = f
        .table()
        .iter()
        .map(|(k, v)| json!({"in": words_json(s, k), "out": s.format_word(v)}))
        .collect();
    json!({
        "domain": section_body(f.domain()),
        "codomain": section_body(f.codomain()),
        "lo": f.lo(),
        "hi": f.hi(),
        "window": f.hi() - f.lo() + 1,
        "table": table,
    })
}

pub fn code_json(f: &FlowCode) -> Value {
    let mut v = code_body(f);
    v.as_object_mut().expect("object").insert("shift".into(), shift_json(f.shift()));
    tagged(v)
}

/// Parses a flow code; the result is unvalidated. Without `lo`/`hi` a
/// `window` of `w` means the centred window of width `w`, or `[0, 0]` when
/// absent.
pub fn parse_code(v: &Value, shift: Option<&EdgeShift>) -> Result<FlowCode> {
    let m = check_schema(v)?;
    let own;
    let s = match (m.get("shift"), shift) {
        (Some(sv), _) => {
            own = parse_shift(sv)?;
            &own
        }
        (None, Some(s)) => s,
        (None, None) => return parse_err("flow code has no shift"),
    };
    let domain = parse_section(field(m, "domain")?, Some(s))?;
    let codomain = match m.get("codomain") {
        Some(c) => parse_section(c, Some(s))?,
        None => domain.clone(),
    };
    let (lo, hi) = match (m.get("lo"), m.get("hi")) {
        (Some(l), Some(h)) => (parse_i64(l, "lo")?, parse_i64(h, "hi")?),
        (None, None) => match m.get("window") {
            Some(w) => {
                let w = parse_usize(w, "window")? as i64;
                if w == 0 {
                    return Err(Error::Domain("window must be positive".into()));
                }
                (-(w - 1) / 2, w / 2)
            }
            None => (0, 0),
        },
        _ => return parse_err("lo and hi must be given together"),
    };
    let Value::Array(rows) = field(m, "table")? else {
        return parse_err("table must be an array");
    };
    let mut table = BTreeMap::new();
    for r in rows {
        let rm = check_schema(r)?;
        let key = parse_words(s, field(rm, "in")?)?;
        let out = match field(rm, "out")? {
            Value::String(t) => s.parse_word(t)?,
            other => return parse_err(format!("output {other} must be a string")),
        };
        if table.insert(key, out).is_some() {
            return Err(Error::Domain("table lists a block twice".into()));
        }
    }
    FlowCode::new(domain, codomain, lo, hi, table)
}

/// Generators file: `{"shift", "generators": {name: code, ...}}`; codes may
/// also carry their own shift.
pub fn generators_json(shift: &EdgeShift, gens: &BTreeMap<String, FlowCode>) -> Value {
    let g: Map<String, Value> = gens.iter().map(|(k, f)| (k.clone(), code_body(f))).collect();
    tagged(json!({"shift": shift_json(shift), "generators": g}))
}

pub fn parse_generators(v: &Value) -> Result<BTreeMap<String, FlowCode>> {
    let m = check_schema(v)?;
    let shift = m.get("shift").map(parse_shift).transpose()?;
    let Value::Object(g) = field(m, "generators")? else {
        return parse_err("generators must be an object");
    };
    g.iter().map(|(k, c)| Ok((k.clone(), parse_code(c, shift.as_ref())?))).collect()
}

/// Moves file: `[{"side": "L|R", "dir": "fwd|inv", "i", "j"}, ...]` with
/// 1-based indices, optionally wrapped as `{"moves": [...]}`.
pub fn parse_moves(v: &Value) -> Result<Vec<BasicMove>> {
    let list = match v {
        Value::Array(_) => v,
        Value::Object(_) => field(check_schema(v)?, "moves")?,
        _ => return parse_err("moves must be an array"),
    };
    let specs: Vec<MoveSpec> = serde_json::from_value(list.clone()).map_err(|e| Error::Parse(format!("moves: {e}")))?;
    specs.into_iter().map(BasicMove::try_from).collect()
}

pub fn moves_json(moves: &[BasicMove]) -> Value {
    let specs: Vec<MoveSpec> = moves.iter().map(|&m| m.into()).collect();
    tagged(json!({"moves": specs}))
}

pub fn certificate_json(c: &TrivialityCertificate, shift: &EdgeShift) -> Value {
    let evidence = match &c.evidence {
        Evidence::Offset(b) => {
            let table: Vec<Value> = b
                .table
                .iter()
                .map(|(k, v)| json!({"key": k, "value": v}))
                .collect();
            json!({
                "kind": "offset",
                "constant": b.constant_value(),
                "offset": b.offset,
                "len": b.len,
                "table": table,
            })
        }
        Evidence::MovedCircle { circle, image } => json!({
            "kind": "moved_circle",
            "circle": circle.display(shift),
            "image": image.display(shift),
            "period": circle.period(),
        }),
        Evidence::ReturnTimes { circle, sum } => json!({
            "kind": "return_times",
            "circle": circle.display(shift),
            "sum": sum,
        }),
        Evidence::NoOffset { bound } => json!({"kind": "no_offset", "bound": bound}),
    };
    let verdict = if c.is_trivial() { "trivial" } else { "nontrivial" };
    tagged(json!({"verdict": verdict, "evidence": evidence, "summary": c.describe(shift)}))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn matrix_round_trip() {
        let s = fixtures::full_3shift();
        let v = tagged(shift_json(&s));
        assert_eq!(parse_shift(&v).unwrap(), s);
        let g = EdgeShift::new(AdjacencyMatrix::from_i64(&[&[2, 1], &[1, 1]]).unwrap()).unwrap();
        let v = shift_json(&g);
        assert!(v.get("edge_names").is_none());
        assert_eq!(parse_shift(&v).unwrap(), g);
    }

    #[test]
    fn bad_documents() {
        assert!(matches!(parse_shift(&json!({"schema": "sftkit/2", "rows": [[1]]})), Err(Error::Parse(_))));
        assert!(matches!(parse_shift(&json!({"rows": [[1, 2], [1]]})), Err(Error::Parse(_))));
        assert!(matches!(parse_shift(&json!({"n": 3, "rows": [[1]]})), Err(Error::Domain(_))));
        assert!(matches!(parse_shift(&json!({"rows": [[-1]]})), Err(Error::Domain(_))));
    }

    #[test]
    fn big_entries_survive() {
        let big: BigInt = "123456789012345678901234567890".parse().unwrap();
        let m = IntMatrix::from_rows(&[vec![big.clone()]]);
        assert_eq!(parse_rows(&rows_json(&m)).unwrap(), m);
    }

    #[test]
    fn section_and_code_round_trip() {
        let c = fixtures::concretefe_c();
        let back = parse_section(&section_json(&c), None).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.parts().len(), 2);
        assert_eq!(back.presentation().unwrap().labeled_text, fixtures::CONCRETEFE_A_TILDE);
        let f = fixtures::concretefe_f().unwrap();
        let text = to_string(&code_json(&f));
        let g = parse_code(&from_str(&text).unwrap(), None).unwrap();
        assert_eq!(g, f);
        assert_eq!(to_string(&code_json(&g)), text);
    }

    #[test]
    fn z2_and_moves() {
        let z = GroupRingMatrixZ2::new(
            AdjacencyMatrix::from_i64(&[&[1, 2], &[0, 1]]).unwrap(),
            AdjacencyMatrix::from_i64(&[&[0, 1], &[1, 0]]).unwrap(),
        )
        .unwrap();
        let back = parse_z2(&tagged(z2_json(&z))).unwrap();
        assert_eq!(back.underlying(), z.underlying());
        let moves = parse_moves(&json!([{"side": "L", "dir": "fwd", "i": 1, "j": 2}])).unwrap();
        assert_eq!(parse_moves(&moves_json(&moves)).unwrap(), moves);
        assert!(parse_moves(&json!([{"side": "L", "dir": "fwd", "i": 0, "j": 2}])).is_err());
    }
}

//! Worked examples shipped with the toolkit.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::flowcode::{Budget, FlowCode};
use crate::invariants::{bowen_franks, GroupRingMatrixZ2};
use crate::matrix::IntMatrix;
use crate::mcg::{sn_embedding_code, sn_embedding_section, Permutation};
use crate::poseq::{BasicMove, Direction, Side};
use crate::schema;
use crate::section::CrossSection;
use crate::sft::{AdjacencyMatrix, EdgeShift, Word};

pub use crate::invariants::build_tn;

/// Names accepted by [`crate::fixtures`] lookups.
pub const FIXTURE_NAMES: [&str; 4] = ["concretefe", "para-example", "tn", "sn-embed-3shift"];

/// The full 3-shift on symbols `0`, `1`, `2`.
pub fn full_3shift() -> EdgeShift {
    EdgeShift::full_shift(&["0", "1", "2"]).expect("valid symbols")
}

/// All words of length 5 (window `N = 2`) whose block `x_{-2} x_{-1}`
/// satisfies `keep`.
fn central(shift: &EdgeShift, keep: impl Fn(&str) -> bool) -> Vec<Word> {
    shift
        .paths(5)
        .into_iter()
        .filter(|w| keep(&shift.format_word(&w[0..2])))
        .collect()
}

fn concretefe_section(v1: &'static [&'static str]) -> CrossSection {
    let s = full_3shift();
    let v0 = central(&s, |b| b.ends_with('2'));
    let v1w = central(&s, |b| v1.contains(&b));
    CrossSection::with_parts(s, 2, vec![("V0".into(), v0), ("V1".into(), v1w)])
        .expect("valid parts")
        .with_display_order(vec![2, 0, 1])
}

/// `C = V_0 ∪ V_1` with `V_0 = {x_{-1} = 2}` and
/// `V_1 = {x_{-2} x_{-1} ∈ {21, 00, 01, 10, 11}}`.
pub fn concretefe_c() -> CrossSection {
    concretefe_section(&["21", "00", "01", "10", "11"])
}

/// `C' = V_0 ∪ V_1'` with `V_1' = {x_{-2} x_{-1} ∈ {20, 00, 01, 10, 11}}`.
pub fn concretefe_c_prime() -> CrossSection {
    concretefe_section(&["20", "00", "01", "10", "11"])
}

/// Expected labeled and unlabeled matrices of the two presentations.
pub const CONCRETEFE_A_TILDE: &str = "[[2+02, 00+01+1],[2, 0+1]]";
pub const CONCRETEFE_A_TILDE_PRIME: &str = "[[2+12, 0+10+11],[2, 0+1]]";
pub const CONCRETEFE_A: &str = "[[2,3],[1,2]]";

/// Rows of the word code on `V_0` and on `V_1`.
pub const CONCRETEFE_V0_MAP: [(&str, &str); 5] = [("2", "2"), ("02", "12"), ("00", "0"), ("01", "10"), ("1", "11")];
pub const CONCRETEFE_V1_MAP: [(&str, &str); 3] = [("2", "2"), ("0", "0"), ("1", "1")];

/// `A = [[1,1],[1,0]]`, `B = A^2`, `C = [2]`.
pub fn para_example() -> (AdjacencyMatrix, AdjacencyMatrix, AdjacencyMatrix) {
    let a = AdjacencyMatrix::from_i64(&[&[1, 1], &[1, 0]]).unwrap();
    let b = AdjacencyMatrix::new(a.matrix().pow(2)).unwrap();
    let c = AdjacencyMatrix::new(IntMatrix::from_i64(&[&[2]])).unwrap();
    (a, b, c)
}

/// The 3-shift on `a, 0, 1` used for the symmetric group embedding.
pub fn sn_embed_shift() -> EdgeShift {
    EdgeShift::full_shift(&["a", "0", "1"]).expect("valid symbols")
}

/// The code `F: C -> C'`: the word map of `V_0` or `V_1` applied to `W_0`
/// according to the part `W_0` starts in, read off `W_{-1}`.
pub fn concretefe_f() -> Result<FlowCode> {
    let (c, cp) = (concretefe_c(), concretefe_c_prime());
    let s = c.shift().clone();
    let word = |t: &str| s.parse_word(t).expect("fixture word");
    let mut table = BTreeMap::new();
    for prev in c.return_graph()?.return_words() {
        let map: &[(&str, &str)] =
            if prev.last() == Some(&2) { &CONCRETEFE_V0_MAP } else { &CONCRETEFE_V1_MAP };
        for (from, to) in map {
            table.insert(vec![prev.clone(), word(from)], word(to));
        }
    }
    FlowCode::new(c, cp, -1, 0, table)?.validated(&Budget::default())
}

pub fn tn(n: usize) -> Result<AdjacencyMatrix> {
    build_tn(n)
}

/// Symbol set, marker and words of the shipped symmetric group embedding.
pub const SN_ALPHA: &str = "a";
pub const SN_WORDS: [&str; 3] = ["0", "1", "00"];

/// The embedding codes `φ_π` for every non-identity `π ∈ S_3`, keyed by the
/// cycle notation of `π`.
pub fn sn_generators() -> Result<BTreeMap<String, FlowCode>> {
    let s = sn_embed_shift();
    Permutation::all(SN_WORDS.len())
        .into_iter()
        .filter(|p| !p.is_identity())
        .map(|p| Ok((p.to_string(), sn_embedding_code(&s, SN_ALPHA, &SN_WORDS, &p)?)))
        .collect()
}

fn presentation_json(c: &CrossSection) -> Result<Value> {
    let p = c.presentation()?;
    Ok(json!({"labeled": p.labeled_text, "unlabeled": p.unlabeled(), "classes": p.classes}))
}

/// Canonical JSON payload of a named fixture; `n` parametrizes `tn`.
pub fn payload(name: &str, n: usize) -> Result<Value> {
    let v = match name {
        "concretefe" => {
            let (c, cp) = (concretefe_c(), concretefe_c_prime());
            json!({
                "shift": schema::shift_json(c.shift()),
                "C": schema::section_body(&c),
                "C_prime": schema::section_body(&cp),
                "F": schema::code_body(&concretefe_f()?),
                "presentations": {"C": presentation_json(&c)?, "C_prime": presentation_json(&cp)?},
            })
        }
        "para-example" => {
            let (a, b, c) = para_example();
            json!({"A": schema::matrix_json(&a), "B": schema::matrix_json(&b), "C": schema::matrix_json(&c)})
        }
        "tn" => {
            let a = build_tn(n)?;
            let bf = bowen_franks(&a)?;
            json!({
                "n": n,
                "matrix": schema::matrix_json(&a),
                "bowen_franks": bf.group.to_string(),
                "det": schema::int_json(&bf.det),
            })
        }
        "sn-embed-3shift" => {
            let s = sn_embed_shift();
            let gens = sn_generators()?;
            let section = sn_embedding_section(&s, SN_ALPHA, &SN_WORDS)?;
            let g: serde_json::Map<String, Value> = gens.iter().map(|(k, f)| (k.clone(), schema::code_body(f))).collect();
            json!({
                "shift": schema::shift_json(&s),
                "alpha": SN_ALPHA,
                "words": SN_WORDS,
                "section": schema::section_body(&section),
                "generators": g,
            })
        }
        other => return Err(Error::Domain(format!("unknown fixture {other:?}; known: {}", FIXTURE_NAMES.join(", ")))),
    };
    Ok(schema::tagged(v))
}

/// Standalone documents shipped in the `fixtures/` directory, by file name.
pub fn files() -> Result<Vec<(String, Value)>> {
    let (a, b, c) = para_example();
    let doc = |m: &AdjacencyMatrix| schema::tagged(schema::matrix_json(m));
    let f = concretefe_f()?;
    let s = sn_embed_shift();
    let z = GroupRingMatrixZ2::new(
        AdjacencyMatrix::from_i64(&[&[1, 1], &[0, 1]])?,
        AdjacencyMatrix::from_i64(&[&[1, 0], &[1, 0]])?,
    )?;
    let moves = [BasicMove::new(Side::Left, Direction::Forward, 0, 1), BasicMove::new(Side::Right, Direction::Forward, 1, 0)];
    let mut out = vec![
        ("A.json".to_string(), doc(&a)),
        ("B.json".to_string(), doc(&b)),
        ("C.json".to_string(), doc(&c)),
        ("franks-3.json".to_string(), doc(&AdjacencyMatrix::from_i64(&[&[3]])?)),
        ("concretefe-C.json".to_string(), schema::section_json(&concretefe_c())),
        ("concretefe-Cprime.json".to_string(), schema::section_json(&concretefe_c_prime())),
        ("concretefe-F.json".to_string(), schema::code_json(&f)),
        (
            "concretefe-generators.json".to_string(),
            schema::generators_json(f.shift(), &BTreeMap::from([("F".to_string(), f.clone())])),
        ),
        ("shift-3.json".to_string(), schema::code_json(&FlowCode::shift_code(&full_3shift())?)),
        ("sn-embed-3shift.json".to_string(), schema::generators_json(&s, &sn_generators()?)),
        ("z2-example.json".to_string(), schema::tagged(schema::z2_json(&z))),
        ("moves-example.json".to_string(), schema::moves_json(&moves)),
    ];
    for n in [2, 3] {
        out.push((format!("tn-{n}.json"), doc(&build_tn(n)?)));
    }
    Ok(out)
}

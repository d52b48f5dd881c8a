//! Isotopy triviality of flow codes, the word problem in the mapping class
//! group, moved-circle witnesses and the symmetric group embedding.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::cocycle::{is_coboundary, Cocycle, EdgeGraph, TransferFunction};
use crate::error::{Error, Result};
use crate::flowcode::{compose, Budget, FlowCode};
use crate::section::{CrossSection, ReturnGraph};
use crate::sft::{EdgeShift, PeriodicPoint, Word};

#[derive(Clone, Debug)]
pub struct DecideOptions {
    /// Period bound of the moved-circle scan run before the cocycle solve.
    pub witness_period: usize,
    /// Bound `B` on `|b|` in the constant search; `None` uses
    /// `(2 N_w + 1) · max_return + max|W'_0| + max_return`.
    pub constant_bound: Option<i64>,
    pub budget: Budget,
}

impl Default for DecideOptions {
    fn default() -> Self {
        DecideOptions { witness_period: 4, constant_bound: None, budget: Budget::default() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Trivial,
    Nontrivial,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Trivial => "trivial",
            Verdict::Nontrivial => "nontrivial",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Evidence {
    /// Offset `b` on the domain, a function of return-graph edges.
    Offset(TransferFunction),
    /// A circle sent to a different circle.
    MovedCircle { circle: PeriodicPoint, image: PeriodicPoint },
    /// A circle on which `|W'_0| - |W_0|` has nonzero sum.
    ReturnTimes { circle: PeriodicPoint, sum: i64 },
    /// Return times are cohomologous but no offset within the bound moves
    /// points along their orbits.
    NoOffset { bound: i64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrivialityCertificate {
    pub verdict: Verdict,
    pub evidence: Evidence,
}

impl TrivialityCertificate {
    pub fn is_trivial(&self) -> bool {
        self.verdict == Verdict::Trivial
    }

    /// The offset when it is constant.
    pub fn constant_offset(&self) -> Option<i64> {
        match &self.evidence {
            Evidence::Offset(b) => b.constant_value(),
            _ => None,
        }
    }

    pub fn describe(&self, shift: &EdgeShift) -> String {
        match &self.evidence {
            Evidence::Offset(b) => match b.constant_value() {
                Some(c) => format!("trivial, offset b ≡ {c}"),
                None => format!("trivial, offset b with values in [{}, {}]", b.min(), b.max()),
            },
            Evidence::MovedCircle { circle, image } => {
                format!("nontrivial, {} ↦ {}", circle.display(shift), image.display(shift))
            }
            Evidence::ReturnTimes { circle, sum } => {
                format!("nontrivial, return times differ by {sum} on {}", circle.display(shift))
            }
            Evidence::NoOffset { bound } => format!("nontrivial, no offset with |b| ≤ {bound}"),
        }
    }
}

/// First circle of least period `≤ n_max` (in canonical order) whose image
/// is a different circle.
pub fn moved_circle_witness(f: &FlowCode, n_max: usize) -> Result<Option<(PeriodicPoint, PeriodicPoint)>> {
    f.require_valid()?;
    for n in 1..=n_max {
        for x in f.shift().periodic_orbits(n)? {
            let y = f.orbit_image(&x)?;
            if y != x {
                return Ok(Some((x, y)));
            }
        }
    }
    Ok(None)
}

/// First circle of least period `≤ n_max` on which the two codes disagree,
/// with both images.
pub fn distinguish(
    f: &FlowCode,
    g: &FlowCode,
    n_max: usize,
) -> Result<Option<(PeriodicPoint, PeriodicPoint, PeriodicPoint)>> {
    f.require_valid()?;
    g.require_valid()?;
    if f.shift() != g.shift() {
        return Err(Error::Domain("codes live on different shifts".into()));
    }
    for n in 1..=n_max {
        for x in f.shift().periodic_orbits(n)? {
            let (a, b) = (f.orbit_image(&x)?, g.orbit_image(&x)?);
            if a != b {
                return Ok(Some((x, a, b)));
            }
        }
    }
    Ok(None)
}

/// The cocycle setting of a code: return graph, window `[o, o + len)` of
/// return words covering both the code window and `W_0`.
struct Setting<'a> {
    f: &'a FlowCode,
    rc: &'a ReturnGraph,
    g: EdgeGraph,
    o: i64,
    len: usize,
}

impl<'a> Setting<'a> {
    fn new(f: &'a FlowCode) -> Result<Self> {
        let rc = f.domain().return_graph()?;
        let o = f.lo().min(0);
        let len = (f.hi().max(0) - o + 1) as usize;
        Ok(Setting { f, rc, g: EdgeGraph::of_returns(rc), o, len })
    }

    fn words(&self, path: &[usize]) -> Vec<&'a Word> {
        path.iter().map(|&e| &self.rc.edges[e].word).collect()
    }

    fn output(&self, words: &[&Word]) -> &'a Word {
        let (a, b) = ((self.f.lo() - self.o) as usize, (self.f.hi() - self.o) as usize);
        self.f.lookup(&words[a..=b]).expect("valid code is total")
    }

    fn cocycle(&self) -> Cocycle {
        Cocycle::from_fn(&self.g, self.o, self.len, |p| {
            let words = self.words(p);
            self.output(&words).len() as i64 - words[(-self.o) as usize].len() as i64
        })
    }

    /// Condition (a) for `b = q + c` on every point of the domain.
    fn offset_moves_along_orbits(&self, q: &TransferFunction, c: i64) -> bool {
        let mut ok = true;
        self.g.for_each_path(self.len, |path| {
            if !ok {
                return;
            }
            let words = self.words(path);
            let out = self.output(&words);
            let b = q.at(&self.g, path).expect("offset defined on every block") + c;
            let before: usize = words[..(-self.o) as usize].iter().map(|w| w.len()).sum();
            let start = -(before as i64);
            let seg: Word = words.iter().flat_map(|w| w.iter().copied()).collect();
            let end = start + seg.len() as i64;
            let (lo, hi) = (b, b + out.len() as i64);
            let target = |t: i64| out[(t - b) as usize];
            for t in lo.max(start)..hi.min(end) {
                if seg[(t - start) as usize] != target(t) {
                    ok = false;
                    return;
                }
            }
            if lo < start {
                let from = self.rc.edges[path[0]].from;
                let mut memo = HashMap::new();
                if !walk_left(self.rc, from, start, lo, hi.min(start), &target, &mut memo) {
                    ok = false;
                    return;
                }
            }
            if hi > end {
                let to = self.rc.edges[*path.last().unwrap()].to;
                let mut memo = HashMap::new();
                if !walk_right(self.rc, to, end, lo.max(end), hi, &target, &mut memo) {
                    ok = false;
                }
            }
        });
        ok
    }
}

/// Every left continuation from the section point at `base` (in state `s`)
/// agrees with `target` on `[d1, d2)`.
fn walk_left(
    rc: &ReturnGraph,
    s: usize,
    base: i64,
    d1: i64,
    d2: i64,
    target: &dyn Fn(i64) -> usize,
    memo: &mut HashMap<(usize, i64), bool>,
) -> bool {
    if base <= d1 {
        return true;
    }
    if let Some(&v) = memo.get(&(s, base)) {
        return v;
    }
    let mut ok = true;
    for &e in &rc.inc[s] {
        let w = &rc.edges[e].word;
        let st = base - w.len() as i64;
        if w.iter().enumerate().any(|(i, &sym)| {
            let t = st + i as i64;
            t >= d1 && t < d2 && sym != target(t)
        }) || !walk_left(rc, rc.edges[e].from, st, d1, d2, target, memo)
        {
            ok = false;
            break;
        }
    }
    memo.insert((s, base), ok);
    ok
}

fn walk_right(
    rc: &ReturnGraph,
    s: usize,
    base: i64,
    d1: i64,
    d2: i64,
    target: &dyn Fn(i64) -> usize,
    memo: &mut HashMap<(usize, i64), bool>,
) -> bool {
    if base >= d2 {
        return true;
    }
    if let Some(&v) = memo.get(&(s, base)) {
        return v;
    }
    let mut ok = true;
    for &e in &rc.out[s] {
        let w = &rc.edges[e].word;
        if w.iter().enumerate().any(|(i, &sym)| {
            let t = base + i as i64;
            t >= d1 && t < d2 && sym != target(t)
        }) || !walk_right(rc, rc.edges[e].to, base + w.len() as i64, d1, d2, target, memo)
        {
            ok = false;
            break;
        }
    }
    memo.insert((s, base), ok);
    ok
}

/// Decides whether the flow equivalence induced by a validated code is
/// isotopic to the identity.
pub fn decide_trivial(f: &FlowCode, opts: &DecideOptions) -> Result<TrivialityCertificate> {
    f.require_valid()?;
    if !EdgeGraph::of_shift(f.shift()).is_irreducible() {
        return Err(Error::Precondition("triviality is decided on irreducible shifts only".into()));
    }
    if let Some((circle, image)) = moved_circle_witness(f, opts.witness_period)? {
        return Ok(TrivialityCertificate { verdict: Verdict::Nontrivial, evidence: Evidence::MovedCircle { circle, image } });
    }
    let st = Setting::new(f)?;
    let q = match is_coboundary(&st.g, &st.cocycle())? {
        Ok(q) => q,
        Err(r) => {
            let circle = PeriodicPoint::orbit_of(&st.rc.concat(&r.cycle));
            return Ok(TrivialityCertificate {
                verdict: Verdict::Nontrivial,
                evidence: Evidence::ReturnTimes { circle, sum: r.sum },
            });
        }
    };
    let (bound, candidates) = constant_candidates(&st, &q, opts);
    for c in candidates {
        if st.offset_moves_along_orbits(&q, c) {
            return Ok(TrivialityCertificate { verdict: Verdict::Trivial, evidence: Evidence::Offset(q.shifted(c)) });
        }
    }
    Ok(TrivialityCertificate { verdict: Verdict::Nontrivial, evidence: Evidence::NoOffset { bound } })
}

/// The bound `B` and the constants `c` with `|q + c| <= B`, smallest `|c|`
/// first.
fn constant_candidates(st: &Setting<'_>, q: &TransferFunction, opts: &DecideOptions) -> (i64, Vec<i64>) {
    let maxret = st.rc.max_return as i64;
    let f = st.f;
    let bound = opts
        .constant_bound
        .unwrap_or((2 * f.word_window() as i64 + 1) * maxret + f.max_output_len() as i64 + maxret);
    let (cmin, cmax) = (-bound - q.max(), bound - q.min());
    let mut candidates: Vec<i64> = (cmin..=cmax).collect();
    candidates.sort_by_key(|&c| (c.abs(), c < 0));
    (bound, candidates)
}

/// Every offset `b = q + c` within the search bound that moves points along
/// their orbits, together with the bound; empty when the return-time cocycle
/// is not a coboundary.
pub fn offset_constants(f: &FlowCode, opts: &DecideOptions) -> Result<(i64, Vec<TransferFunction>)> {
    f.require_valid()?;
    let st = Setting::new(f)?;
    let Ok(q) = is_coboundary(&st.g, &st.cocycle())? else {
        return Ok((0, Vec::new()));
    };
    let (bound, candidates) = constant_candidates(&st, &q, opts);
    let found = candidates.into_iter().filter(|&c| st.offset_moves_along_orbits(&q, c)).map(|c| q.shifted(c)).collect();
    Ok((bound, found))
}

/// Re-checks conditions (a) and (b) of a trivial certificate by scanning
/// every allowed word of a window wide enough to determine `W_0`, `W'_0`,
/// `b` and the symbols `b` points at.
pub fn recheck(f: &FlowCode, cert: &TrivialityCertificate, budget: &Budget) -> Result<bool> {
    let Evidence::Offset(b) = &cert.evidence else {
        return Err(Error::Precondition("only offset certificates can be rechecked".into()));
    };
    let rc = f.domain().return_graph()?;
    let maxret = rc.max_return as i64;
    let a = rc.window_start;
    let sl = rc.states.first().map_or(0, |s| s.len()) as i64;
    let (rlo, rhi) = f.domain().rule().support().unwrap_or((0, 0));
    let kmin = b.offset.min(0).min(f.lo());
    let kmax = (b.offset + b.len as i64).max(f.hi()).max(0);
    let wmax = f.max_output_len() as i64;
    let left = ((-kmin) * maxret + (-rlo).max(-a).max(0)).max(-b.min());
    let right = ((kmax + 1) * maxret + rhi.max(a + sl - 1).max(0)).max(b.max() + wmax);
    let len = (left + right + 1) as usize;
    let count = f.shift().paths_count(len);
    if count > budget.max_paths {
        return Err(Error::Resource(format!("recheck needs {count} words of length {len}")));
    }
    let state_id: HashMap<&Word, usize> = rc.states.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let edge_id: HashMap<(usize, &Word), usize> =
        rc.edges.iter().enumerate().map(|(i, e)| ((e.from, &e.word), i)).collect();
    let domain = f.domain();
    let mut verdict = Ok(true);
    f.shift().for_each_path(len, |u| {
        if !matches!(verdict, Ok(true)) || domain.contains_at(u, left) != Some(true) {
            return;
        }
        let pos: Vec<i64> = (0..=len as i64).filter(|&t| domain.contains_at(u, t) == Some(true)).collect();
        let origin = pos.iter().position(|&t| t == left).unwrap() as i64;
        let at = |k: i64| -> Option<usize> {
            let i = origin + k;
            (i >= 0 && (i as usize) < pos.len()).then(|| pos[i as usize] as usize)
        };
        let word = |k: i64| -> Option<&[usize]> { Some(&u[at(k)?..at(k + 1)?]) };
        let state = |k: i64| -> Option<usize> {
            let t = at(k)? as i64 + a;
            if t < 0 || t + sl > len as i64 {
                return None;
            }
            state_id.get(&u[t as usize..(t + sl) as usize].to_vec()).copied()
        };
        let edge = |k: i64| -> Option<usize> { edge_id.get(&(state(k)?, &word(k)?.to_vec())).copied() };
        let offset_at = |shift: i64| -> Option<i64> {
            let key: Vec<usize> = if b.len == 0 {
                vec![state(b.offset + shift)?]
            } else {
                (0..b.len as i64).map(|i| edge(b.offset + shift + i)).collect::<Option<_>>()?
            };
            b.value(&key)
        };
        let check = || -> Option<bool> {
            let block: Vec<Word> = (f.lo()..=f.hi()).map(|k| word(k).map(<[usize]>::to_vec)).collect::<Option<_>>()?;
            let out = f.table().get(&block)?;
            let (b0, b1) = (offset_at(0)?, offset_at(1)?);
            let w0 = word(0)?.len() as i64;
            let (s, e) = (left + b0, left + b0 + out.len() as i64);
            if s < 0 || e > len as i64 {
                return None;
            }
            Some(&u[s as usize..e as usize] == out.as_slice() && b0 + out.len() as i64 == w0 + b1)
        };
        verdict = match check() {
            Some(v) => Ok(v),
            None => Err(Error::Construction("recheck window too small".into())),
        };
    });
    verdict
}

/// A product of generators and their inverses, applied right to left.
#[derive(Clone, Debug)]
pub struct MappingClassWord {
    pub generators: BTreeMap<String, FlowCode>,
    pub letters: Vec<(String, i32)>,
}

impl MappingClassWord {
    pub fn new(generators: BTreeMap<String, FlowCode>, letters: Vec<(String, i32)>) -> Result<Self> {
        let mut shift: Option<&EdgeShift> = None;
        for (name, code) in &generators {
            code.require_valid().map_err(|e| Error::Precondition(format!("generator {name}: {e}")))?;
            match shift {
                Some(s) if s != code.shift() => {
                    return Err(Error::Domain(format!("generator {name} lives on a different shift")));
                }
                _ => shift = Some(code.shift()),
            }
        }
        for (name, e) in &letters {
            if !generators.contains_key(name) {
                return Err(Error::Domain(format!("unknown generator {name:?}")));
            }
            if e.abs() != 1 {
                return Err(Error::Domain(format!("exponent {e} of {name} is not ±1")));
            }
        }
        Ok(MappingClassWord { generators, letters })
    }

    /// Parses `"F,G^-1,F"`; `X^k` expands to `|k|` letters.
    pub fn parse(generators: BTreeMap<String, FlowCode>, text: &str) -> Result<Self> {
        let mut letters = Vec::new();
        for tok in text.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (name, exp) = match tok.split_once('^') {
                Some((n, e)) => {
                    let e: i32 = e.trim().parse().map_err(|_| Error::Parse(format!("bad exponent in {tok:?}")))?;
                    (n.trim(), e)
                }
                None => (tok, 1),
            };
            if exp == 0 {
                continue;
            }
            for _ in 0..exp.abs() {
                letters.push((name.to_string(), exp.signum()));
            }
        }
        Self::new(generators, letters)
    }

    pub fn shift(&self) -> Option<&EdgeShift> {
        self.generators.values().next().map(FlowCode::shift)
    }
}

impl fmt::Display for MappingClassWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .letters
            .iter()
            .map(|(n, e)| if *e == 1 { n.clone() } else { format!("{n}^-1") })
            .collect();
        f.write_str(&parts.join(","))
    }
}

#[derive(Clone, Debug)]
pub struct WordProblemReport {
    pub certificate: TrivialityCertificate,
    /// The composed code when composition was carried out.
    pub composed: Option<FlowCode>,
}

/// Decides whether a product of mapping classes is trivial.
pub fn word_problem(w: &MappingClassWord, opts: &DecideOptions) -> Result<WordProblemReport> {
    let shift = w.shift().ok_or_else(|| Error::Domain("no generators".into()))?.clone();
    let mut inverses: BTreeMap<&str, FlowCode> = BTreeMap::new();
    for (name, e) in &w.letters {
        if *e < 0 && !inverses.contains_key(name.as_str()) {
            let inv = w.generators[name]
                .invert(&opts.budget)
                .map_err(|err| annotate(err, &format!("inverting {name}")))?;
            inverses.insert(name, inv);
        }
    }
    let code = |name: &str, e: i32| if e < 0 { &inverses[name] } else { &w.generators[name] };
    for n in 1..=opts.witness_period {
        for x in shift.periodic_orbits(n)? {
            let mut y = x.clone();
            for (name, e) in w.letters.iter().rev() {
                y = code(name, *e).orbit_image(&y)?;
            }
            if y != x {
                return Ok(WordProblemReport {
                    certificate: TrivialityCertificate {
                        verdict: Verdict::Nontrivial,
                        evidence: Evidence::MovedCircle { circle: x, image: y },
                    },
                    composed: None,
                });
            }
        }
    }
    let mut acc = match w.letters.last() {
        Some((name, e)) => code(name, *e).clone(),
        None => FlowCode::identity(&CrossSection::whole(shift))?,
    };
    for (i, (name, e)) in w.letters.iter().enumerate().rev().skip(1) {
        acc = compose(code(name, *e), &acc, &opts.budget)
            .map_err(|err| annotate(err, &format!("composing letter {} ({name})", i + 1)))?;
    }
    let certificate = decide_trivial(&acc, opts)?;
    Ok(WordProblemReport { certificate, composed: Some(acc) })
}

fn annotate(e: Error, context: &str) -> Error {
    match e {
        Error::Resource(m) => Error::Resource(format!("{context}: {m}")),
        Error::Construction(m) => Error::Construction(format!("{context}: {m}")),
        other => other,
    }
}

/// A permutation of `{1, ..., n}`, stored 0-based.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if i >= images.len() || std::mem::replace(&mut seen[i], true) {
                return Err(Error::Domain(format!("{images:?} is not a permutation")));
            }
        }
        Ok(Permutation(images))
    }

    /// Parses cycle notation such as `"(1 2)(3 4)"`, `"(1,3)"`, `"()"` or `"id"`.
    pub fn parse(text: &str, n: usize) -> Result<Self> {
        let mut images: Vec<usize> = (0..n).collect();
        let t = text.trim();
        if t.is_empty() || t == "id" {
            return Ok(Permutation(images));
        }
        let mut rest = t;
        let mut used = vec![false; n];
        while !rest.is_empty() {
            let open = rest.strip_prefix('(').ok_or_else(|| Error::Parse(format!("expected '(' in {text:?}")))?;
            let close = open.find(')').ok_or_else(|| Error::Parse(format!("unclosed cycle in {text:?}")))?;
            let cycle: Vec<usize> = open[..close]
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|s| !s.is_empty())
                .map(|s| match s.parse::<usize>() {
                    Ok(k) if (1..=n).contains(&k) => Ok(k - 1),
                    _ => Err(Error::Parse(format!("bad point {s:?} in {text:?} (expected 1..{n})"))),
                })
                .collect::<Result<_>>()?;
            for (i, &k) in cycle.iter().enumerate() {
                if std::mem::replace(&mut used[k], true) {
                    return Err(Error::Parse(format!("point {} repeated in {text:?}", k + 1)));
                }
                images[k] = cycle[(i + 1) % cycle.len()];
            }
            rest = open[close + 1..].trim_start();
        }
        Ok(Permutation(images))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation(other.0.iter().map(|&i| self.0[i]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j] = i;
        }
        Permutation(inv)
    }

    /// All permutations of `{1, ..., n}` in lexicographic order of images.
    pub fn all(n: usize) -> Vec<Permutation> {
        fn rec(cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Permutation>) {
            if cur.len() == used.len() {
                out.push(Permutation(cur.clone()));
                return;
            }
            for i in 0..used.len() {
                if !used[i] {
                    used[i] = true;
                    cur.push(i);
                    rec(cur, used, out);
                    cur.pop();
                    used[i] = false;
                }
            }
        }
        let mut out = Vec::new();
        rec(&mut Vec::new(), &mut vec![false; n], &mut out);
        out
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return f.write_str("id");
        }
        let mut seen = vec![false; self.0.len()];
        for start in 0..self.0.len() {
            if seen[start] || self.0[start] == start {
                continue;
            }
            let mut cycle = Vec::new();
            let mut k = start;
            while !seen[k] {
                seen[k] = true;
                cycle.push((k + 1).to_string());
                k = self.0[k];
            }
            write!(f, "({})", cycle.join(" "))?;
        }
        Ok(())
    }
}

fn embedding_words(shift: &EdgeShift, alpha: &str, words: &[&str]) -> Result<(usize, Vec<Word>)> {
    let a = shift
        .edge_by_name(alpha)
        .ok_or_else(|| Error::Domain(format!("unknown symbol {alpha:?}")))?;
    let mut vs: Vec<Word> = Vec::new();
    for w in words {
        let v = shift.parse_word(w)?;
        if v.is_empty() {
            return Err(Error::Construction("empty word in the list".into()));
        }
        if v.contains(&a) {
            return Err(Error::Construction(format!("word {w:?} contains {alpha:?}")));
        }
        if vs.contains(&v) {
            return Err(Error::Construction(format!("word {w:?} is listed twice")));
        }
        let framed: Word = std::iter::once(a).chain(v.iter().copied()).chain(std::iter::once(a)).collect();
        if !shift.language_contains(&framed)? {
            return Err(Error::Construction(format!(
                "{} is not an allowed word",
                shift.format_word(&framed)
            )));
        }
        vs.push(v);
    }
    Ok((a, vs))
}

/// The cross section of points not strictly inside the `V` part of an
/// occurrence of some `α V_k α`.
pub fn sn_embedding_section(shift: &EdgeShift, alpha: &str, words: &[&str]) -> Result<CrossSection> {
    let (a, vs) = embedding_words(shift, alpha, words)?;
    let n = vs.iter().map(Vec::len).max().unwrap_or(0);
    let inside = |w: &[usize]| {
        vs.iter().any(|v| {
            (1..=v.len()).any(|j| {
                let s = n - j;
                w[s] == a && w[s + 1..=s + v.len()] == v[..] && w[s + v.len() + 1] == a
            })
        })
    };
    let central: Vec<Word> = shift.paths(2 * n + 1).into_iter().filter(|w| !inside(w)).collect();
    CrossSection::new(shift.clone(), n, central)
}

/// The code replacing each `α V_k` return word by `α V_{π(k)}`.
pub fn sn_embedding_code(shift: &EdgeShift, alpha: &str, words: &[&str], pi: &Permutation) -> Result<FlowCode> {
    if pi.len() != words.len() {
        return Err(Error::Domain(format!("permutation of {} points for {} words", pi.len(), words.len())));
    }
    let (a, vs) = embedding_words(shift, alpha, words)?;
    let c = sn_embedding_section(shift, alpha, words)?;
    let framed = |k: usize| -> Word { std::iter::once(a).chain(vs[k].iter().copied()).collect() };
    let mut table = BTreeMap::new();
    for w in c.return_graph()?.return_words() {
        let out = match (0..vs.len()).find(|&k| framed(k) == w) {
            Some(k) => framed(pi.apply(k)),
            None if w.len() == 1 => w.clone(),
            None => {
                return Err(Error::Construction(format!(
                    "return word {} is neither a symbol nor a framed word",
                    shift.format_word(&w)
                )))
            }
        };
        table.insert(vec![w], out);
    }
    let code = FlowCode::new(c.clone(), c, 0, 0, table)?.validated(&Budget::default())?;
    code.require_valid().map_err(|e| Error::Construction(e.to_string()))?;
    Ok(code)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn pp(s: &EdgeShift, w: &str) -> PeriodicPoint {
        PeriodicPoint::orbit_of(&s.parse_word(w).unwrap())
    }

    #[test]
    fn shift_code_offsets() {
        let s = EdgeShift::full_shift(&["0", "1"]).unwrap();
        let sh = FlowCode::shift_code(&s).unwrap();
        let opts = DecideOptions::default();
        let mut acc = sh.clone();
        for k in 1..=4 {
            let cert = decide_trivial(&acc, &opts).unwrap();
            assert_eq!(cert.constant_offset(), Some(k), "{cert:?}");
            assert!(recheck(&acc, &cert, &opts.budget).unwrap());
            acc = compose(&sh, &acc, &opts.budget).unwrap();
        }
        let id = FlowCode::identity(&CrossSection::whole(s)).unwrap();
        assert_eq!(decide_trivial(&id, &opts).unwrap().constant_offset(), Some(0));
    }

    #[test]
    fn trivial_codes_have_a_unique_offset() {
        let opts = DecideOptions::default();
        let s = EdgeShift::full_shift(&["0", "1"]).unwrap();
        let sh = FlowCode::shift_code(&s).unwrap();
        let f = fixtures::concretefe_f().unwrap();
        let ff = compose(&f.invert(&opts.budget).unwrap(), &f, &opts.budget).unwrap();
        let sq = compose(&sh, &sh, &opts.budget).unwrap();
        for code in [sh, sq, ff] {
            let (bound, found) = offset_constants(&code, &opts).unwrap();
            assert_eq!(found.len(), 1);
            assert!(found[0].min() > -bound && found[0].max() < bound, "bound binds");
        }
        let (_, none) = offset_constants(&f, &opts).unwrap();
        assert!(none.is_empty());
    }

    #[test]
    fn concretefe_is_nontrivial() {
        let f = fixtures::concretefe_f().unwrap();
        let s = f.shift().clone();
        let (x, y) = moved_circle_witness(&f, 2).unwrap().unwrap();
        assert_eq!((x, y), (pp(&s, "20"), pp(&s, "21")));
        assert_eq!(f.orbit_image(&pp(&s, "21")).unwrap(), pp(&s, "211"));
        let cert = decide_trivial(&f, &DecideOptions::default()).unwrap();
        assert_eq!(cert.verdict, Verdict::Nontrivial);
        let slow = decide_trivial(&f, &DecideOptions { witness_period: 0, ..Default::default() }).unwrap();
        assert_eq!(slow.verdict, Verdict::Nontrivial);
        assert!(matches!(slow.evidence, Evidence::ReturnTimes { .. }));
        let id = FlowCode::identity(f.domain()).unwrap();
        assert_eq!(moved_circle_witness(&id, 4).unwrap(), None);
        assert_eq!(distinguish(&f, &id, 4).unwrap().unwrap().0, pp(&s, "20"));
        assert_eq!(distinguish(&f, &f, 4).unwrap(), None);
    }

    #[test]
    fn concretefe_words() {
        let f = fixtures::concretefe_f().unwrap();
        let s = f.shift().clone();
        let gens: BTreeMap<String, FlowCode> = [("F".to_string(), f)].into();
        let opts = DecideOptions::default();
        let r = word_problem(&MappingClassWord::parse(gens.clone(), "F,F^-1").unwrap(), &opts).unwrap();
        assert!(r.certificate.is_trivial(), "{:?}", r.certificate);
        let sq = word_problem(&MappingClassWord::parse(gens.clone(), "F,F").unwrap(), &opts).unwrap();
        assert_eq!(sq.certificate.verdict, Verdict::Nontrivial);
        let f = &gens["F"];
        assert_eq!(f.orbit_image(&f.orbit_image(&pp(&s, "21")).unwrap()).unwrap(), pp(&s, "2111"));
    }

    #[test]
    fn permutations() {
        let p = Permutation::parse("(1 2)", 3).unwrap();
        let q = Permutation::parse("(2,3)", 3).unwrap();
        assert_eq!(p.compose(&q).apply(1), 2);
        assert_eq!(p.compose(&q).to_string(), "(1 2 3)");
        assert_eq!(Permutation::all(3).len(), 6);
        assert_eq!(p.compose(&p.inverse()), Permutation::identity(3));
        assert!(Permutation::parse("(1 4)", 3).is_err());
        assert!(Permutation::parse("(1 2)(2 3)", 3).is_err());
    }

    #[test]
    fn symmetric_embedding() {
        let s = fixtures::sn_embed_shift();
        let swap = sn_embedding_code(&s, "a", &["0", "1"], &Permutation::parse("(1 2)", 2).unwrap()).unwrap();
        assert_eq!(swap.orbit_image(&pp(&s, "a0")).unwrap(), pp(&s, "a1"));
        assert_eq!(moved_circle_witness(&swap, 4).unwrap(), Some((pp(&s, "a0"), pp(&s, "a1"))));
        let id = sn_embedding_code(&s, "a", &["0", "1"], &Permutation::identity(2)).unwrap();
        assert_eq!(id, FlowCode::identity(id.domain()).unwrap());
        assert!(matches!(
            sn_embedding_code(&s, "a", &["0a", "1"], &Permutation::identity(2)),
            Err(Error::Construction(_))
        ));
        let words = ["0", "1", "00"];
        let p12 = sn_embedding_code(&s, "a", &words, &Permutation::parse("(1 2)", 3).unwrap()).unwrap();
        let p13 = sn_embedding_code(&s, "a", &words, &Permutation::parse("(1 3)", 3).unwrap()).unwrap();
        let (x, a, b) = distinguish(&p12, &p13, 4).unwrap().unwrap();
        assert_eq!((x, a, b), (pp(&s, "a0"), pp(&s, "a1"), pp(&s, "a00")));
    }
}

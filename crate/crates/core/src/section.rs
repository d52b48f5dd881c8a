//! Discrete cross sections given by central words, their return graphs and
//! word-labeled return presentations.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;
use std::sync::OnceLock;

use crate::error::{domain, Error, Result};
use crate::graph;
use crate::sft::{EdgeShift, Word};

/// Membership rule `x ∈ S` iff `x[lo..=hi] ∈ allowed`. When `lo > hi` the
/// rule ignores the point and `constant` gives the answer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalRule {
    pub lo: i64,
    pub hi: i64,
    allowed: HashSet<Word>,
    constant: bool,
}

impl LocalRule {
    /// Minimal-support rule equivalent to "`x[lo..=hi]` is one of `words`".
    fn from_window(shift: &EdgeShift, lo: i64, hi: i64, words: &HashSet<Word>) -> LocalRule {
        let len = (hi - lo + 1) as usize;
        let all = shift.paths(len);
        let (mut l, mut h) = (0usize, len - 1);
        let consistent = |l: usize, h: usize| {
            let mut seen: HashMap<&[usize], bool> = HashMap::new();
            all.iter().all(|w| {
                let key = if l <= h { &w[l..=h] } else { &w[0..0] };
                let m = words.contains(w);
                *seen.entry(key).or_insert(m) == m
            })
        };
        let mut empty = false;
        loop {
            if l == h {
                if consistent(1, 0) {
                    empty = true;
                }
                break;
            }
            if consistent(l + 1, h) {
                l += 1;
            } else if consistent(l, h - 1) {
                h -= 1;
            } else {
                break;
            }
        }
        if empty || all.is_empty() {
            return LocalRule { lo: 1, hi: 0, allowed: HashSet::new(), constant: !words.is_empty() };
        }
        let allowed = words.iter().map(|w| w[l..=h].to_vec()).collect();
        LocalRule { lo: lo + l as i64, hi: lo + h as i64, allowed, constant: false }
    }

    fn from_central(shift: &EdgeShift, n: usize, words: &BTreeSet<Word>) -> LocalRule {
        let words: HashSet<Word> = words.iter().cloned().collect();
        Self::from_window(shift, -(n as i64), n as i64, &words)
    }

    pub fn is_constant(&self) -> bool {
        self.lo > self.hi
    }

    /// Membership of the point whose origin is `seg[t]`, if `seg` covers the
    /// support.
    pub fn member(&self, seg: &[usize], t: i64) -> Option<bool> {
        if self.is_constant() {
            return Some(self.constant);
        }
        let (s, e) = (t + self.lo, t + self.hi);
        if s < 0 || e >= seg.len() as i64 {
            return None;
        }
        Some(self.allowed.contains(&seg[s as usize..=e as usize]))
    }

    /// Membership at index `t` of the periodic point `(w)^∞`.
    pub fn member_cyclic(&self, w: &[usize], t: usize) -> bool {
        if self.is_constant() {
            return self.constant;
        }
        let n = w.len() as i64;
        let key: Word = (self.lo..=self.hi).map(|k| w[(t as i64 + k).rem_euclid(n) as usize]).collect();
        self.allowed.contains(&key)
    }

    /// Support interval, or `None` for constant rules.
    pub fn support(&self) -> Option<(i64, i64)> {
        (!self.is_constant()).then_some((self.lo, self.hi))
    }
}

/// A named subset of a cross section used for display.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Part {
    pub name: String,
    pub words: BTreeSet<Word>,
    pub rule: LocalRule,
}

/// A discrete cross section `C = {x : x[-N..=N] ∈ words}`, stored as its
/// minimal-support membership rule.
#[derive(Clone, Debug)]
pub struct CrossSection {
    shift: EdgeShift,
    rule: LocalRule,
    parts: Vec<Part>,
    display_order: Option<Vec<usize>>,
    returns: OnceLock<Result<ReturnGraph>>,
}

impl PartialEq for CrossSection {
    fn eq(&self, other: &Self) -> bool {
        self.shift == other.shift && self.same_set(other).unwrap_or(false)
    }
}

impl CrossSection {
    pub fn new(shift: EdgeShift, window: usize, words: impl IntoIterator<Item = Word>) -> Result<Self> {
        let words: BTreeSet<Word> = words.into_iter().collect();
        for w in &words {
            if w.len() != 2 * window + 1 {
                return domain(format!("central word {} has length {}, expected {}", shift.format_word(w), w.len(), 2 * window + 1));
            }
            if !shift.language_contains(w)? {
                return domain(format!("central word {} is not in the language", shift.format_word(w)));
            }
        }
        let rule = LocalRule::from_central(&shift, window, &words);
        Ok(Self::from_rule(shift, rule))
    }

    fn from_rule(shift: EdgeShift, rule: LocalRule) -> Self {
        CrossSection { shift, rule, parts: Vec::new(), display_order: None, returns: OnceLock::new() }
    }

    /// Cross section given as a disjoint union of named parts.
    pub fn with_parts(shift: EdgeShift, window: usize, parts: Vec<(String, Vec<Word>)>) -> Result<Self> {
        let mut all = BTreeSet::new();
        for (name, ws) in &parts {
            for w in ws {
                if !all.insert(w.clone()) {
                    return domain(format!("part {name} overlaps another part at {}", shift.format_word(w)));
                }
            }
        }
        let mut c = Self::new(shift, window, all)?;
        c.parts = parts
            .into_iter()
            .map(|(name, ws)| {
                let words: BTreeSet<Word> = ws.into_iter().collect();
                let rule = LocalRule::from_central(&c.shift, window, &words);
                Part { name, words, rule }
            })
            .collect();
        Ok(c)
    }

    /// The whole shift as a cross section (`N = 0`, every symbol).
    pub fn whole(shift: EdgeShift) -> Self {
        let words: Vec<Word> = (0..shift.edge_count()).map(|e| vec![e]).collect();
        Self::new(shift, 0, words).expect("symbols are words")
    }

    /// Cross section whose membership is decided by `pred(word, centre)`,
    /// where `word` covers `[-centre, word.len() - centre)`. Undecided words
    /// are extended one symbol at a time on whichever side decides more of
    /// them.
    pub fn from_predicate(
        shift: &EdgeShift,
        max_words: usize,
        pred: impl Fn(&[usize], usize) -> Option<bool>,
    ) -> Result<Self> {
        let mut total = 0usize;
        let mut levels: Vec<(usize, usize, HashMap<Word, bool>)> = Vec::new();
        let evaluate = |words: Vec<Word>, centre: usize, total: &mut usize| -> Result<(HashMap<Word, bool>, Vec<Word>)> {
            *total += words.len();
            if *total > max_words {
                return Err(Error::Resource(format!("section search exceeded {max_words} words")));
            }
            let mut decided = HashMap::new();
            let mut open = Vec::new();
            for w in words {
                match pred(&w, centre) {
                    Some(m) => {
                        decided.insert(w, m);
                    }
                    None => open.push(w),
                }
            }
            Ok((decided, open))
        };
        let (mut a, mut b) = (0usize, 0usize);
        let (decided, mut open) = evaluate(shift.paths(1), 0, &mut total)?;
        levels.push((a, b, decided));
        while !open.is_empty() {
            let left: Vec<Word> = open
                .iter()
                .flat_map(|w| {
                    let v = shift.edge(w[0]).source;
                    shift.in_edges(v).iter().map(move |&e| std::iter::once(e).chain(w.iter().copied()).collect())
                })
                .collect();
            let right: Vec<Word> = open
                .iter()
                .flat_map(|w| {
                    let v = shift.edge(*w.last().unwrap()).target;
                    shift.out_edges(v).iter().map(move |&e| w.iter().copied().chain(std::iter::once(e)).collect())
                })
                .collect();
            let (dl, ol) = evaluate(left, a + 1, &mut total)?;
            let (dr, or) = evaluate(right, a, &mut total)?;
            let ratio = |d: &HashMap<Word, bool>, o: &Vec<Word>| o.len() as f64 / (d.len() + o.len()).max(1) as f64;
            let (rl, rr) = (ratio(&dl, &ol), ratio(&dr, &or));
            if rl < rr || (rl == rr && a <= b) {
                a += 1;
                levels.push((a, b, dl));
                open = ol;
            } else {
                b += 1;
                levels.push((a, b, dr));
                open = or;
            }
        }
        let len = a + b + 1;
        if shift.paths_count(len) > max_words as u128 {
            return Err(Error::Resource(format!("section window of length {len} exceeds {max_words} words")));
        }
        let mut allowed = HashSet::new();
        let mut missing = false;
        shift.for_each_path(len, |w| {
            let hit = levels.iter().find_map(|(la, lb, m)| m.get(&w[a - la..=a + lb]).copied());
            match hit {
                Some(true) => {
                    allowed.insert(w.to_vec());
                }
                Some(false) => {}
                None => missing = true,
            }
        });
        if missing {
            return Err(Error::Construction("predicate search left a word undecided".into()));
        }
        let rule = LocalRule::from_window(shift, -(a as i64), b as i64, &allowed);
        Ok(Self::from_rule(shift.clone(), rule))
    }

    /// Orders labels in the return presentation by the given symbol ranking.
    pub fn with_display_order(mut self, order: Vec<usize>) -> Self {
        self.display_order = Some(order);
        self
    }

    pub fn shift(&self) -> &EdgeShift {
        &self.shift
    }

    /// Least `N` such that membership depends on `x[-N..=N]` only.
    pub fn window(&self) -> usize {
        self.rule.support().map_or(0, |(lo, hi)| lo.unsigned_abs().max(hi.unsigned_abs()) as usize)
    }

    /// Central words of length `2N + 1` for `N = window()`.
    pub fn words(&self) -> BTreeSet<Word> {
        let n = self.window();
        let mut out = BTreeSet::new();
        self.shift.for_each_path(2 * n + 1, |w| {
            if self.rule.member(w, n as i64) == Some(true) {
                out.insert(w.to_vec());
            }
        });
        out
    }

    pub fn rule(&self) -> &LocalRule {
        &self.rule
    }

    pub fn parts(&self) -> &[Part] {
        &self.parts
    }

    pub fn display_order(&self) -> Option<&[usize]> {
        self.display_order.as_deref()
    }

    pub fn contains_at(&self, seg: &[usize], t: i64) -> Option<bool> {
        self.rule.member(seg, t)
    }

    pub fn contains_periodic(&self, w: &[usize], t: usize) -> bool {
        self.rule.member_cyclic(w, t)
    }

    /// Words over a common window where the two memberships differ.
    fn compare(&self, other: &CrossSection) -> Result<Option<(Word, i64, bool)>> {
        if self.shift != other.shift {
            return domain("cross sections live on different shifts");
        }
        let spans: Vec<(i64, i64)> = [self.rule.support(), other.rule.support()].into_iter().flatten().collect();
        let lo = spans.iter().map(|s| s.0).min().unwrap_or(0).min(0);
        let hi = spans.iter().map(|s| s.1).max().unwrap_or(0).max(0);
        let mut found = None;
        self.shift.for_each_path((hi - lo + 1) as usize, |w| {
            if found.is_none() {
                let a = self.rule.member(w, -lo).unwrap();
                let b = other.rule.member(w, -lo).unwrap();
                if a != b {
                    found = Some((w.to_vec(), lo, a));
                }
            }
        });
        Ok(found)
    }

    /// Same membership predicate on the same shift.
    pub fn same_set(&self, other: &CrossSection) -> Result<bool> {
        Ok(self.compare(other)?.is_none())
    }

    /// `None` when `self ⊆ other`, else a word (with the origin offset) in
    /// `self` but not in `other`.
    pub fn subset_witness(&self, other: &CrossSection) -> Result<Option<(Word, i64)>> {
        if self.shift != other.shift {
            return domain("cross sections live on different shifts");
        }
        let spans: Vec<(i64, i64)> = [self.rule.support(), other.rule.support()].into_iter().flatten().collect();
        let lo = spans.iter().map(|s| s.0).min().unwrap_or(0).min(0);
        let hi = spans.iter().map(|s| s.1).max().unwrap_or(0).max(0);
        let mut found = None;
        self.shift.for_each_path((hi - lo + 1) as usize, |w| {
            if found.is_none() && self.rule.member(w, -lo) == Some(true) && other.rule.member(w, -lo) == Some(false) {
                found = Some((w.to_vec(), lo));
            }
        });
        Ok(found)
    }

    /// State window `[a, b]` of the block graph: covers the supports of the
    /// section and its parts, and always contains position `-1`.
    fn state_window(&self) -> (i64, i64) {
        let mut a = -1;
        let mut b = -1;
        for s in std::iter::once(&self.rule).chain(self.parts.iter().map(|p| &p.rule)).filter_map(|r| r.support()) {
            a = a.min(s.0);
            b = b.max(s.1);
        }
        (a, b)
    }

    fn block_graph(&self) -> BlockGraph {
        let (a, b) = self.state_window();
        let len = (b - a + 1) as usize;
        let states = self.shift.paths(len);
        let index: HashMap<&Word, usize> = states.iter().enumerate().map(|(i, s)| (s, i)).collect();
        let origin = (-a) as usize;
        let mut trans = vec![Vec::new(); states.len()];
        for (i, s) in states.iter().enumerate() {
            let v = self.shift.edge(*s.last().unwrap()).target;
            for &e in self.shift.out_edges(v) {
                let mut t = s[1..].to_vec();
                t.push(e);
                let sym = if origin < len { s[origin] } else { e };
                trans[i].push((index[&t], sym));
            }
        }
        let member = states.iter().map(|s| self.rule.member(s, -a).expect("state covers support")).collect();
        BlockGraph { a, states, trans, member }
    }

    /// Checks the cross-section property: no cycle of the block graph avoids
    /// the section.
    pub fn check(&self) -> CrossSectionCheck {
        if let fail @ CrossSectionCheck::Fail { .. } = self.check_cycles_only() {
            return fail;
        }
        match self.return_graph() {
            Ok(r) => CrossSectionCheck::Ok { max_return_time: r.max_return },
            Err(_) => CrossSectionCheck::Fail { witness: Vec::new() },
        }
    }

    pub fn is_cross_section(&self) -> bool {
        matches!(self.check(), CrossSectionCheck::Ok { .. })
    }

    /// The return graph `R_C`, trimmed to states on bi-infinite paths.
    pub fn return_graph(&self) -> Result<&ReturnGraph> {
        self.returns.get_or_init(|| ReturnGraph::build(self)).as_ref().map_err(Clone::clone)
    }

    pub fn max_return_time(&self) -> Result<usize> {
        Ok(self.return_graph()?.max_return)
    }

    /// Word-labeled presentation of the return map.
    pub fn presentation(&self) -> Result<ReturnPresentation> {
        ReturnPresentation::build(self)
    }

    /// Orders words by the display ranking, then by length on ties.
    pub fn display_key(&self, w: &[usize]) -> Vec<usize> {
        match &self.display_order {
            Some(order) => w.iter().map(|&e| order.iter().position(|&o| o == e).unwrap_or(order.len() + e)).collect(),
            None => w.to_vec(),
        }
    }
}

/// Result of the cross-section check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CrossSectionCheck {
    Ok { max_return_time: usize },
    /// A periodic word whose orbit never meets the section.
    Fail { witness: Word },
}

struct BlockGraph {
    a: i64,
    states: Vec<Word>,
    /// `(target state, symbol at the origin)` per transition.
    trans: Vec<Vec<(usize, usize)>>,
    member: Vec<bool>,
}

/// One return: from a section state, read `word`, arrive at the next
/// section state.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ReturnEdge {
    pub from: usize,
    pub to: usize,
    pub word: Word,
}

/// The return graph `R_C`: bi-infinite paths correspond one-to-one to
/// points of `C`, and concatenating the labels recovers the point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReturnGraph {
    /// Block words over the state window, one per vertex.
    pub states: Vec<Word>,
    /// Left end `a` of the state window `[a, b]`.
    pub window_start: i64,
    pub edges: Vec<ReturnEdge>,
    pub out: Vec<Vec<usize>>,
    pub inc: Vec<Vec<usize>>,
    pub max_return: usize,
}

impl ReturnGraph {
    fn build(c: &CrossSection) -> Result<ReturnGraph> {
        if let CrossSectionCheck::Fail { witness } = c.check_cycles_only() {
            return Err(Error::Precondition(format!(
                "not a cross section: ({})^∞ avoids it",
                c.shift.format_word(&witness)
            )));
        }
        let bg = c.block_graph();
        let mut raw: Vec<ReturnEdge> = Vec::new();
        for s in 0..bg.states.len() {
            if !bg.member[s] {
                continue;
            }
            let mut stack: Vec<(usize, Word)> = bg.trans[s].iter().map(|&(t, sym)| (t, vec![sym])).collect();
            stack.reverse();
            while let Some((t, w)) = stack.pop() {
                if bg.member[t] {
                    raw.push(ReturnEdge { from: s, to: t, word: w });
                    continue;
                }
                for &(u, sym) in bg.trans[t].iter().rev() {
                    let mut w2 = w.clone();
                    w2.push(sym);
                    stack.push((u, w2));
                }
            }
        }
        let n = bg.states.len();
        let mut succ = vec![Vec::new(); n];
        for e in &raw {
            succ[e.from].push(e.to);
        }
        let alive = graph::essential_vertices(&succ);
        let keep: Vec<usize> = (0..n).filter(|&v| alive[v] && bg.member[v]).collect();
        let mut renumber = vec![usize::MAX; n];
        for (k, &v) in keep.iter().enumerate() {
            renumber[v] = k;
        }
        let edges: Vec<ReturnEdge> = raw
            .into_iter()
            .filter(|e| alive[e.from] && alive[e.to])
            .map(|e| ReturnEdge { from: renumber[e.from], to: renumber[e.to], word: e.word })
            .collect();
        if edges.is_empty() {
            return Err(Error::Precondition("cross section meets no bi-infinite path".into()));
        }
        let mut out = vec![Vec::new(); keep.len()];
        let mut inc = vec![Vec::new(); keep.len()];
        for (i, e) in edges.iter().enumerate() {
            out[e.from].push(i);
            inc[e.to].push(i);
        }
        let max_return = edges.iter().map(|e| e.word.len()).max().unwrap_or(0);
        Ok(ReturnGraph {
            states: keep.iter().map(|&v| bg.states[v].clone()).collect(),
            window_start: bg.a,
            edges,
            out,
            inc,
            max_return,
        })
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    /// Calls `f` on every path of `len >= 1` edges.
    pub fn for_each_path(&self, len: usize, mut f: impl FnMut(&[usize])) {
        fn rec(g: &ReturnGraph, len: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
            if cur.len() == len {
                f(cur);
                return;
            }
            let v = g.edges[*cur.last().unwrap()].to;
            for &e in &g.out[v] {
                cur.push(e);
                rec(g, len, cur, f);
                cur.pop();
            }
        }
        if len == 0 {
            return;
        }
        let mut cur = Vec::with_capacity(len);
        for e in 0..self.edges.len() {
            cur.push(e);
            rec(self, len, &mut cur, &mut f);
            cur.pop();
        }
    }

    /// Number of paths of `len` edges, saturating.
    pub fn path_count(&self, len: usize) -> u128 {
        let mut counts: Vec<u128> = vec![1; self.states.len()];
        for _ in 0..len {
            let mut next = vec![0u128; self.states.len()];
            for e in &self.edges {
                next[e.from] = next[e.from].saturating_add(counts[e.to]);
            }
            counts = next;
        }
        counts.iter().fold(0u128, |a, &b| a.saturating_add(b))
    }

    pub fn words(&self, path: &[usize]) -> Vec<&Word> {
        path.iter().map(|&e| &self.edges[e].word).collect()
    }

    /// Concatenated symbols of a path.
    pub fn concat(&self, path: &[usize]) -> Word {
        path.iter().flat_map(|&e| self.edges[e].word.iter().copied()).collect()
    }

    /// Distinct return words, sorted.
    /// Symbols of the start state before the origin of the path.
    pub fn context_len(&self) -> usize {
        (-self.window_start).max(0) as usize
    }

    /// The path's word preceded by the known past of its start state.
    pub fn context(&self, path: &[usize]) -> Word {
        let Some(&first) = path.first() else { return Vec::new() };
        let state = &self.states[self.edges[first].from];
        let mut out = state[..self.context_len().min(state.len())].to_vec();
        out.extend(self.concat(path));
        out
    }

    pub fn return_words(&self) -> BTreeSet<Word> {
        self.edges.iter().map(|e| e.word.clone()).collect()
    }

    /// Successor lists over vertices.
    pub fn successors(&self) -> Vec<Vec<usize>> {
        self.out.iter().map(|es| es.iter().map(|&e| self.edges[e].to).collect()).collect()
    }
}

impl CrossSection {
    fn check_cycles_only(&self) -> CrossSectionCheck {
        let bg = self.block_graph();
        let succ: Vec<Vec<usize>> = (0..bg.states.len())
            .map(|i| if bg.member[i] { Vec::new() } else { bg.trans[i].iter().map(|t| t.0).filter(|&t| !bg.member[t]).collect() })
            .collect();
        for c in graph::scc(&succ) {
            if !bg.member[c[0]] && graph::component_has_cycle(&succ, &c) {
                let v = c[0];
                let path = graph::shortest_path(&succ, v, v, |u| !bg.member[u]).unwrap();
                let word = path.windows(2).map(|p| bg.trans[p[0]].iter().find(|t| t.0 == p[1]).unwrap().1).collect();
                return CrossSectionCheck::Fail { witness: word };
            }
        }
        CrossSectionCheck::Ok { max_return_time: 0 }
    }
}

/// Word-labeled matrix of the return map over classes of section states.
#[derive(Clone, Debug)]
pub struct ReturnPresentation {
    pub classes: Vec<String>,
    /// Class of each return-graph state.
    pub class_of: Vec<usize>,
    /// `labeled[i][j]`: return words from class `i` into class `j`, sorted.
    pub labeled: Vec<Vec<Vec<Word>>>,
    /// Formatted labeled matrix, e.g. `[[2+02, 00+01+1],[2, 0+1]]`.
    pub labeled_text: String,
}

impl ReturnPresentation {
    fn build(c: &CrossSection) -> Result<Self> {
        let r = c.return_graph()?;
        let n = r.state_count();
        // initial classes: user parts when given, else everything together
        let mut class_of: Vec<usize> = if c.parts.is_empty() {
            vec![0; n]
        } else {
            r.states
                .iter()
                .map(|s| {
                    c.parts
                        .iter()
                        .position(|p| p.rule.member(s, -r.window_start) == Some(true))
                        .unwrap_or(c.parts.len())
                })
                .collect()
        };
        let signature = |v: usize, class_of: &[usize]| {
            let mut sig: Vec<(Word, usize)> = r.out[v].iter().map(|&e| (r.edges[e].word.clone(), class_of[r.edges[e].to])).collect();
            sig.sort();
            sig
        };
        let uniform = !c.parts.is_empty() && class_of.iter().all(|&k| k < c.parts.len()) && {
            let mut seen: HashMap<usize, Vec<(Word, usize)>> = HashMap::new();
            (0..n).all(|v| {
                let sig = signature(v, &class_of);
                seen.entry(class_of[v]).or_insert_with(|| sig.clone()) == &sig
            })
        };
        let classes: Vec<String>;
        if uniform {
            classes = c.parts.iter().map(|p| p.name.clone()).collect();
        } else {
            // coarsest partition stable under (label, target class) signatures
            loop {
                let mut ids: BTreeMap<(usize, Vec<(Word, usize)>), usize> = BTreeMap::new();
                let mut next = vec![0; n];
                for v in 0..n {
                    let key = (class_of[v], signature(v, &class_of));
                    let fresh = ids.len();
                    let id = *ids.entry(key).or_insert(fresh);
                    next[v] = id;
                }
                let before = class_of.iter().collect::<BTreeSet<_>>().len();
                let stable = ids.len() == before;
                class_of = next;
                if stable {
                    break;
                }
            }
            let k = class_of.iter().collect::<BTreeSet<_>>().len();
            classes = (0..k).map(|i| format!("S{i}")).collect();
        }
        let k = classes.len();
        let mut rep = vec![usize::MAX; k];
        for v in 0..n {
            if rep[class_of[v]] == usize::MAX {
                rep[class_of[v]] = v;
            }
        }
        let mut labeled = vec![vec![Vec::new(); k]; k];
        for (i, &v) in rep.iter().enumerate() {
            for &e in &r.out[v] {
                labeled[i][class_of[r.edges[e].to]].push(r.edges[e].word.clone());
            }
        }
        for row in &mut labeled {
            for cell in row.iter_mut() {
                cell.sort_by_key(|w| c.display_key(w));
            }
        }
        let rows: Vec<String> = labeled
            .iter()
            .map(|row| {
                let cells: Vec<String> = row
                    .iter()
                    .map(|cell| {
                        if cell.is_empty() {
                            "0".to_string()
                        } else {
                            cell.iter().map(|w| c.shift.format_word(w)).collect::<Vec<_>>().join("+")
                        }
                    })
                    .collect();
                format!("[{}]", cells.join(", "))
            })
            .collect();
        let labeled_text = format!("[{}]", rows.join(","));
        Ok(ReturnPresentation { classes, class_of, labeled, labeled_text })
    }

    /// Label counts.
    pub fn unlabeled(&self) -> Vec<Vec<usize>> {
        self.labeled.iter().map(|row| row.iter().map(Vec::len).collect()).collect()
    }

    pub fn unlabeled_text(&self) -> String {
        let rows: Vec<String> = self
            .unlabeled()
            .iter()
            .map(|row| format!("[{}]", row.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")))
            .collect();
        format!("[{}]", rows.join(","))
    }
}

impl fmt::Display for ReturnPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.labeled_text)
    }
}

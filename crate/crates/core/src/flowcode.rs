//! Word block codes between return-word presentations of cross sections
//! ("flow codes"), with validation, inversion, restriction, alignment and
//! composition.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::fmt;

use crate::error::{domain, Error, Result};
use crate::graph;
use crate::section::{CrossSection, ReturnGraph};
use crate::sft::{EdgeShift, PeriodicPoint, Word};

/// Size limits for the enumerations behind validation and construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Paths of a return graph enumerated in one pass.
    pub max_paths: u128,
    /// States visited by the surjectivity subset construction.
    pub max_subsets: usize,
    /// Words examined while deriving a cross section from a predicate.
    pub max_section_words: usize,
    /// Largest half-window tried by inversion; `None` uses the default
    /// `(2 N_w + 1) · max_return_time · 4`.
    pub invert_bound: Option<usize>,
    /// Largest half-window tried when tabulating a derived code.
    pub max_window: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_paths: 4_000_000,
            max_subsets: 400_000,
            max_section_words: 2_000_000,
            invert_bound: None,
            max_window: 16,
        }
    }
}

/// Why a table fails to define a conjugacy, with a finite witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Defect {
    /// A block of return words occurring in the domain has no table entry.
    Incomplete { block: Vec<Word> },
    /// Stage (i): outputs are not the codomain return words of the image.
    BadOutput { block: Vec<Word>, reason: String },
    /// Stage (ii): two points (periodic when `periodic`) share an image.
    NotInjective { first: Word, second: Word, periodic: bool },
    /// Stage (iii): a codomain return-word sequence missed by the image.
    NotSurjective { words: Vec<Word> },
}

impl Defect {
    pub fn stage(&self) -> &'static str {
        match self {
            Defect::Incomplete { .. } => "totality",
            Defect::BadOutput { .. } => "outputs",
            Defect::NotInjective { .. } => "injectivity",
            Defect::NotSurjective { .. } => "surjectivity",
        }
    }

    pub fn describe(&self, shift: &EdgeShift) -> String {
        let block = |ws: &[Word]| ws.iter().map(|w| shift.format_word(w)).collect::<Vec<_>>().join(" | ");
        match self {
            Defect::Incomplete { block: b } => format!("no table entry for block {}", block(b)),
            Defect::BadOutput { block: b, reason } => format!("{reason} (block {})", block(b)),
            Defect::NotInjective { first, second, periodic: true } => format!(
                "({})^∞ and ({})^∞ have the same image",
                shift.format_word(first),
                shift.format_word(second)
            ),
            Defect::NotInjective { first, second, .. } => {
                format!("paths {} and {} have the same image", shift.format_word(first), shift.format_word(second))
            }
            Defect::NotSurjective { words } => format!("codomain word sequence {} is not an image", block(words)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CodeStatus {
    Unchecked,
    Valid,
    Invalid(Defect),
}

/// A word block code `Φ` from blocks `W_lo .. W_hi` of return words to `C`
/// to return words to `D`: the image `y = φ(x)` has `W'_n(y) =
/// Φ(W_{n+lo}(x), ..., W_{n+hi}(x))`.
#[derive(Clone, Debug)]
pub struct FlowCode {
    domain: CrossSection,
    codomain: CrossSection,
    lo: i64,
    hi: i64,
    table: BTreeMap<Vec<Word>, Word>,
    status: CodeStatus,
}

impl PartialEq for FlowCode {
    fn eq(&self, other: &Self) -> bool {
        self.domain == other.domain
            && self.codomain == other.codomain
            && self.lo == other.lo
            && self.hi == other.hi
            && self.table == other.table
    }
}

/// Dense ids for words.
#[derive(Default)]
struct Interner {
    ids: HashMap<Word, u32>,
}

impl Interner {
    fn id(&mut self, w: &Word) -> u32 {
        let next = self.ids.len() as u32;
        *self.ids.entry(w.clone()).or_insert(next)
    }
}

impl FlowCode {
    pub fn new(
        domain: CrossSection,
        codomain: CrossSection,
        lo: i64,
        hi: i64,
        table: BTreeMap<Vec<Word>, Word>,
    ) -> Result<Self> {
        if domain.shift() != codomain.shift() {
            return domain_err("domain and codomain live on different shifts");
        }
        if lo > hi {
            return domain_err(format!("empty window [{lo}, {hi}]"));
        }
        let width = (hi - lo + 1) as usize;
        if let Some(k) = table.keys().find(|k| k.len() != width) {
            return domain_err(format!("table key of length {} in a window of width {width}", k.len()));
        }
        Ok(FlowCode { domain, codomain, lo, hi, table, status: CodeStatus::Unchecked })
    }

    /// Identity on a cross section.
    pub fn identity(c: &CrossSection) -> Result<Self> {
        let table = c.return_graph()?.return_words().into_iter().map(|w| (vec![w.clone()], w)).collect();
        FlowCode::new(c.clone(), c.clone(), 0, 0, table)?.validated(&Budget::default())
    }

    /// The shift map `σ` as a code on the whole shift: `W'_0 = W_1`.
    pub fn shift_code(shift: &EdgeShift) -> Result<Self> {
        let c = CrossSection::whole(shift.clone());
        let table = (0..shift.edge_count()).map(|e| (vec![vec![e]], vec![e])).collect();
        FlowCode::new(c.clone(), c, 1, 1, table)?.validated(&Budget::default())
    }

    pub fn domain(&self) -> &CrossSection {
        &self.domain
    }

    pub fn codomain(&self) -> &CrossSection {
        &self.codomain
    }

    pub fn shift(&self) -> &EdgeShift {
        self.domain.shift()
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.hi
    }

    /// Largest `|offset|` used by the window.
    pub fn word_window(&self) -> usize {
        self.lo.unsigned_abs().max(self.hi.unsigned_abs()) as usize
    }

    pub fn table(&self) -> &BTreeMap<Vec<Word>, Word> {
        &self.table
    }

    pub fn status(&self) -> &CodeStatus {
        &self.status
    }

    pub fn is_valid(&self) -> bool {
        self.status == CodeStatus::Valid
    }

    pub fn require_valid(&self) -> Result<()> {
        match &self.status {
            CodeStatus::Valid => Ok(()),
            CodeStatus::Unchecked => Err(Error::Precondition("flow code has not been validated".into())),
            CodeStatus::Invalid(d) => Err(Error::Precondition(format!(
                "flow code is invalid at {}: {}",
                d.stage(),
                d.describe(self.shift())
            ))),
        }
    }

    /// Output for the block `W_lo .. W_hi`.
    pub fn lookup(&self, block: &[&Word]) -> Option<&Word> {
        let key: Vec<Word> = block.iter().map(|w| (*w).clone()).collect();
        self.table.get(&key)
    }

    pub fn max_output_len(&self) -> usize {
        self.table.values().map(Vec::len).max().unwrap_or(0)
    }

    /// Shrinks the window to the smallest interval the outputs depend on.
    pub fn reduce_window(&self) -> FlowCode {
        let depends = |table: &BTreeMap<Vec<Word>, Word>, drop_left: bool| {
            let mut seen: HashMap<&[Word], &Word> = HashMap::new();
            table.iter().all(|(k, v)| {
                let key = if drop_left { &k[1..] } else { &k[..k.len() - 1] };
                *seen.entry(key).or_insert(v) == v
            })
        };
        let mut code = self.clone();
        while code.lo < code.hi {
            let (next, lo, hi) = if depends(&code.table, true) {
                (code.table.iter().map(|(k, v)| (k[1..].to_vec(), v.clone())).collect(), code.lo + 1, code.hi)
            } else if depends(&code.table, false) {
                (code.table.iter().map(|(k, v)| (k[..k.len() - 1].to_vec(), v.clone())).collect(), code.lo, code.hi - 1)
            } else {
                break;
            };
            code.table = next;
            code.lo = lo;
            code.hi = hi;
        }
        if code.lo != self.lo || code.hi != self.hi {
            code.status = CodeStatus::Unchecked;
        }
        code
    }

    pub fn validated(mut self, budget: &Budget) -> Result<Self> {
        self.status = self.validate(budget)?;
        Ok(self)
    }

    /// Checks that the code induces a conjugacy of return maps: outputs are
    /// the codomain return words of the image, the induced map is injective,
    /// and it is onto the codomain.
    pub fn validate(&self, budget: &Budget) -> Result<CodeStatus> {
        let rc = self.domain.return_graph()?;
        let rd = self.codomain.return_graph()?;
        if let Some(d) = self.check_outputs(rc, budget)? {
            return Ok(CodeStatus::Invalid(d));
        }
        let g = self.label_graph(rc, budget)?;
        if let Some(d) = self.check_injective(rc, &g, budget)? {
            return Ok(CodeStatus::Invalid(d));
        }
        if let Some(d) = self.check_surjective(rd, &g, budget)? {
            return Ok(CodeStatus::Invalid(d));
        }
        Ok(CodeStatus::Valid)
    }

    fn check_outputs(&self, rc: &ReturnGraph, budget: &Budget) -> Result<Option<Defect>> {
        let (ld, hd) = self.codomain.rule().support().unwrap_or((0, 0));
        let (nmin, nmax) = (ld.min(0), hd.max(0));
        let width = (self.hi - self.lo) as usize;
        let plen = width + (nmax - nmin) as usize + 1;
        check_paths(rc, plen, budget)?;
        let shift = self.shift();
        let ids = self.word_ids(rc);
        let mut seen: HashSet<Vec<u32>> = HashSet::new();
        let mut defect = None;
        rc.for_each_path(plen, |p| {
            if defect.is_some() {
                return;
            }
            let seq: Vec<u32> = p.iter().map(|&e| ids.of_edge[e]).collect();
            if seen.contains(&seq) {
                return;
            }
            let centre = (-nmin) as usize;
            let block = |k: usize| rc.words(&p[k..=k + width]).into_iter().cloned().collect::<Vec<Word>>();
            let mut outs = Vec::new();
            for k in 0..=(nmax - nmin) as usize {
                match ids.table.get(&seq[k..=k + width]) {
                    Some(o) if o.is_empty() => {
                        defect = Some(Defect::BadOutput { block: block(k), reason: "empty output word".into() });
                        return;
                    }
                    Some(o) => outs.push(*o),
                    None => {
                        defect = Some(Defect::Incomplete { block: block(k) });
                        return;
                    }
                }
            }
            let origin: usize = outs[..centre].iter().map(|o| o.len()).sum();
            let y: Word = outs.iter().flat_map(|o| o.iter().copied()).collect();
            let bad = |reason: &str| Some(Defect::BadOutput { block: block(centre), reason: reason.into() });
            if !shift.is_path(&y) {
                defect = bad("consecutive outputs do not form an allowed word");
                return;
            }
            if self.codomain.contains_at(&y, origin as i64) != Some(true) {
                defect = bad("output does not start at a codomain point");
                return;
            }
            for t in 1..outs[centre].len() {
                if self.codomain.contains_at(&y, (origin + t) as i64) != Some(false) {
                    defect = bad("codomain is visited inside an output word");
                    return;
                }
            }
            seen.insert(seq);
        });
        Ok(defect)
    }

    /// Dense ids for the return words of `rc`, and the table over them.
    fn word_ids<'a>(&'a self, rc: &ReturnGraph) -> WordIds<'a> {
        let mut interner = Interner::default();
        let of_edge = rc.edges.iter().map(|e| interner.id(&e.word)).collect();
        let table = self
            .table
            .iter()
            .filter_map(|(k, v)| {
                let key: Option<Vec<u32>> = k.iter().map(|w| interner.ids.get(w).copied()).collect();
                Some((key?, v))
            })
            .collect();
        WordIds { of_edge, table }
    }

    /// Higher-block graph of `R_C` whose edges are blocks `W_lo .. W_hi`
    /// labeled by their outputs.
    fn label_graph(&self, rc: &ReturnGraph, budget: &Budget) -> Result<LabelGraph> {
        let width = (self.hi - self.lo + 1) as usize;
        check_paths(rc, width, budget)?;
        let mut interner = Interner::default();
        let mut g = LabelGraph::default();
        if width == 1 {
            g.vertices = rc.state_count();
            for (i, e) in rc.edges.iter().enumerate() {
                let out = self.lookup(&[&e.word]).expect("outputs checked");
                g.edges.push((e.from as u32, e.to as u32, interner.id(out)));
                g.paths.push(vec![i]);
            }
        } else {
            let mut index: HashMap<Vec<usize>, u32> = HashMap::new();
            rc.for_each_path(width - 1, |p| {
                let next = index.len() as u32;
                index.insert(p.to_vec(), next);
            });
            g.vertices = index.len();
            let mut failed = false;
            let ids = self.word_ids(rc);
            rc.for_each_path(width, |p| {
                let seq: Vec<u32> = p.iter().map(|&e| ids.of_edge[e]).collect();
                let Some(&out) = ids.table.get(&seq) else {
                    failed = true;
                    return;
                };
                let label = interner.id(out);
                g.edges.push((index[&p[..width - 1]], index[&p[1..]], label));
                g.paths.push(p.to_vec());
            });
            if failed {
                return Err(Error::Construction("table incomplete after output check".into()));
            }
        }
        g.labels = interner.ids;
        Ok(g)
    }

    fn check_injective(&self, rc: &ReturnGraph, g: &LabelGraph, budget: &Budget) -> Result<Option<Defect>> {
        let mut by_label: HashMap<u32, Vec<usize>> = HashMap::new();
        for (i, e) in g.edges.iter().enumerate() {
            by_label.entry(e.2).or_default().push(i);
        }
        let pairs: u128 = by_label.values().map(|v| (v.len() as u128).pow(2)).sum();
        if pairs > budget.max_paths {
            return Err(Error::Resource(format!("pair graph would have {pairs} edges")));
        }
        let mut vid: HashMap<(u32, u32), usize> = HashMap::new();
        let mut pedges: Vec<(usize, usize, usize, usize)> = Vec::new();
        for group in by_label.values() {
            for &e in group {
                for &f in group {
                    let (a, b) = (g.edges[e], g.edges[f]);
                    let n = vid.len();
                    let s = *vid.entry((a.0, b.0)).or_insert(n);
                    let n = vid.len();
                    let t = *vid.entry((a.1, b.1)).or_insert(n);
                    pedges.push((s, t, e, f));
                }
            }
        }
        let mut succ = vec![Vec::new(); vid.len()];
        for &(s, t, _, _) in &pedges {
            succ[s].push(t);
        }
        let alive = graph::essential_vertices(&succ);
        let Some(&(s, t, e, f)) = pedges.iter().find(|&&(s, t, e, f)| e != f && alive[s] && alive[t]) else {
            return Ok(None);
        };
        // close the off-diagonal edge into a cycle when possible
        let mut succ_edges: Vec<Vec<usize>> = vec![Vec::new(); vid.len()];
        for (i, &(a, _, _, _)) in pedges.iter().enumerate() {
            succ_edges[a].push(i);
        }
        let path = if t == s { Some(vec![s]) } else { graph::shortest_path(&succ, t, s, |v| alive[v]) };
        if let Some(path) = path {
            let mut cycle = vec![(e, f)];
            for w in path.windows(2) {
                let k = succ_edges[w[0]].iter().copied().find(|&k| pedges[k].1 == w[1]).unwrap();
                cycle.push((pedges[k].2, pedges[k].3));
            }
            let first: Word = rc.concat(&cycle.iter().map(|c| g.paths[c.0][0]).collect::<Vec<_>>());
            let second: Word = rc.concat(&cycle.iter().map(|c| g.paths[c.1][0]).collect::<Vec<_>>());
            return Ok(Some(Defect::NotInjective { first, second, periodic: true }));
        }
        Ok(Some(Defect::NotInjective { first: rc.concat(&g.paths[e]), second: rc.concat(&g.paths[f]), periodic: false }))
    }

    fn check_surjective(&self, rd: &ReturnGraph, g: &LabelGraph, budget: &Budget) -> Result<Option<Defect>> {
        let mut step: HashMap<(u32, u32), Vec<u32>> = HashMap::new();
        for e in &g.edges {
            step.entry((e.0, e.2)).or_default().push(e.1);
        }
        let label_of: Vec<Option<u32>> = rd.edges.iter().map(|e| g.labels.get(&e.word).copied()).collect();
        if let Some(i) = label_of.iter().position(Option::is_none) {
            return Ok(Some(Defect::NotSurjective { words: vec![rd.edges[i].word.clone()] }));
        }
        let all: Vec<u32> = (0..g.vertices as u32).collect();
        let mut seen: HashSet<(usize, Vec<u32>)> = HashSet::new();
        // (state, subset, parent index, edge read)
        let mut nodes: Vec<(usize, Vec<u32>, usize, usize)> = Vec::new();
        let mut queue = VecDeque::new();
        for d in 0..rd.state_count() {
            seen.insert((d, all.clone()));
            nodes.push((d, all.clone(), usize::MAX, usize::MAX));
            queue.push_back(nodes.len() - 1);
        }
        while let Some(i) = queue.pop_front() {
            let (d, subset) = (nodes[i].0, nodes[i].1.clone());
            for &e in &rd.out[d] {
                let label = label_of[e].unwrap();
                let mut next: Vec<u32> = subset
                    .iter()
                    .filter_map(|&u| step.get(&(u, label)))
                    .flatten()
                    .copied()
                    .collect();
                next.sort_unstable();
                next.dedup();
                if next.is_empty() {
                    let mut words = vec![rd.edges[e].word.clone()];
                    let mut k = i;
                    while nodes[k].2 != usize::MAX {
                        words.push(rd.edges[nodes[k].3].word.clone());
                        k = nodes[k].2;
                    }
                    words.reverse();
                    return Ok(Some(Defect::NotSurjective { words }));
                }
                let to = rd.edges[e].to;
                if seen.insert((to, next.clone())) {
                    if seen.len() > budget.max_subsets {
                        return Err(Error::Resource(format!(
                            "surjectivity check exceeded {} subset states",
                            budget.max_subsets
                        )));
                    }
                    nodes.push((to, next, i, e));
                    queue.push_back(nodes.len() - 1);
                }
            }
        }
        Ok(None)
    }

    /// Image of the orbit of a periodic point.
    pub fn orbit_image(&self, x: &PeriodicPoint) -> Result<PeriodicPoint> {
        self.require_valid()?;
        let w = x.rotated_word();
        if !self.shift().is_cycle(&w) {
            return domain_err("periodic point is not a cycle of the shift");
        }
        let p = w.len();
        let pos: Vec<usize> = (0..p).filter(|&t| self.domain.contains_periodic(&w, t)).collect();
        if pos.is_empty() {
            return domain_err("orbit does not meet the domain cross section");
        }
        let k = pos.len();
        let words: Vec<Word> = (0..k)
            .map(|i| {
                let (s, e) = (pos[i], if i + 1 < k { pos[i + 1] } else { pos[0] + p });
                (s..e).map(|t| w[t % p]).collect()
            })
            .collect();
        let mut y = Vec::new();
        for i in 0..k as i64 {
            let block: Vec<&Word> = (i + self.lo..=i + self.hi).map(|j| &words[j.rem_euclid(k as i64) as usize]).collect();
            let out = self
                .lookup(&block)
                .ok_or_else(|| Error::Construction("periodic block missing from table".into()))?;
            y.extend_from_slice(out);
        }
        Ok(PeriodicPoint::orbit_of(&y))
    }

    /// Applies the code to a finite piece of a point. `marks` are domain
    /// positions in `seg`; they are mapped to the starts of their output
    /// words. `None` when `seg` is too short to decide.
    pub fn apply_segment(&self, seg: &[usize], marks: &[usize]) -> Result<Option<(Word, Vec<usize>)>> {
        let member: Vec<Option<bool>> = (0..=seg.len()).map(|t| self.domain.contains_at(seg, t as i64)).collect();
        let pos: Vec<usize> = (0..=seg.len()).filter(|&t| member[t] == Some(true)).collect();
        if pos.len() < 2 {
            return Ok(None);
        }
        let jmin = (-self.lo).max(0);
        let jmax = pos.len() as i64 - 2 - self.hi.max(0);
        let jstart = jmin.max(-self.lo);
        if jmax < jstart {
            return Ok(None);
        }
        let word = |j: i64| -> Word { seg[pos[j as usize]..pos[j as usize + 1]].to_vec() };
        let mut out = Vec::new();
        let mut start = HashMap::new();
        for j in jstart..=jmax {
            let block: Vec<Word> = (j + self.lo..=j + self.hi).map(word).collect();
            let o = self.table.get(&block).ok_or_else(|| {
                Error::Precondition(format!(
                    "no table entry for block {}",
                    block.iter().map(|w| self.shift().format_word(w)).collect::<Vec<_>>().join(" | ")
                ))
            })?;
            start.insert(pos[j as usize], out.len());
            out.extend_from_slice(o);
        }
        start.insert(pos[jmax as usize + 1], out.len());
        let mut mapped = Vec::with_capacity(marks.len());
        for &m in marks {
            match member.get(m).copied().flatten() {
                None => return Ok(None),
                Some(false) => return domain_err("marked position is not in the code's domain"),
                Some(true) => match start.get(&m) {
                    Some(&s) => mapped.push(s),
                    None => return Ok(None),
                },
            }
        }
        Ok(Some((out, mapped)))
    }

    /// Inverse code `D -> C`, found by widening a symmetric window until the
    /// inverse table is consistent.
    pub fn invert(&self, budget: &Budget) -> Result<FlowCode> {
        self.require_valid()?;
        let rc = self.domain.return_graph()?;
        let width = (self.hi - self.lo) as usize;
        let ids = self.word_ids(rc);
        let bound = budget
            .invert_bound
            .unwrap_or((2 * self.word_window() + 1) * rc.max_return.max(1) * 4);
        for (ml, mr) in windows(bound) {
            let first = (self.lo - ml as i64).min(0);
            let last = (self.hi + mr as i64).max(0);
            let plen = (last - first + 1) as usize;
            check_paths(rc, plen, budget)?;
            let mut conflict = false;
            let mut seen: HashMap<Vec<&Word>, usize> = HashMap::new();
            rc.for_each_path(plen, |p| {
                if conflict {
                    return;
                }
                let seq: Vec<u32> = p.iter().map(|&e| ids.of_edge[e]).collect();
                let key: Vec<&Word> = (-(ml as i64)..=mr as i64)
                    .map(|n| {
                        let k = (n + self.lo - first) as usize;
                        *ids.table.get(&seq[k..=k + width]).expect("valid code is total")
                    })
                    .collect();
                let e0 = p[(-first) as usize];
                match seen.get(&key) {
                    Some(&prev) if rc.edges[prev].word != rc.edges[e0].word => conflict = true,
                    Some(_) => {}
                    None => {
                        seen.insert(key, e0);
                    }
                }
            });
            let table: BTreeMap<Vec<Word>, Word> = seen
                .into_iter()
                .map(|(k, e)| (k.into_iter().cloned().collect(), rc.edges[e].word.clone()))
                .collect();
            if conflict {
                continue;
            }
            let inv = FlowCode::new(self.codomain.clone(), self.domain.clone(), -(ml as i64), mr as i64, table)?
                .reduce_window()
                .validated(budget)?;
            return match inv.status {
                CodeStatus::Valid => Ok(inv),
                _ => Err(Error::Construction("consistent inverse table failed validation".into())),
            };
        }
        Err(Error::Resource(format!("no inverse window up to {bound}")))
    }

    /// Restriction to a cross section `E` contained in the domain.
    pub fn restrict(&self, e: &CrossSection, budget: &Budget) -> Result<FlowCode> {
        self.require_valid()?;
        if let Some((w, lo)) = e.subset_witness(&self.domain)? {
            return domain_err(format!(
                "section is not contained in the code's domain: {} (origin at offset {})",
                self.shift().format_word(&w),
                -lo
            ));
        }
        e.return_graph()?;
        if e.same_set(&self.domain)? {
            let mut code = self.clone();
            code.domain = e.clone();
            return Ok(code);
        }
        let inv = self.invert(budget)?;
        let codomain = &self.codomain;
        let image = CrossSection::from_predicate(self.shift(), budget.max_section_words, |w, n| {
            if !codomain.contains_at(w, n as i64)? {
                return Some(false);
            }
            let (x, m) = inv.apply_segment(w, &[n]).ok()??;
            e.contains_at(&x, m[0] as i64)
        })?;
        tabulate(e, &image, &[Stage::Code(self)], budget)
    }

    pub fn display_table(&self) -> Vec<(String, String)> {
        let s = self.shift();
        self.table
            .iter()
            .map(|(k, v)| (k.iter().map(|w| s.format_word(w)).collect::<Vec<_>>().join(" "), s.format_word(v)))
            .collect()
    }
}

impl fmt::Display for FlowCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "window [{}, {}]", self.lo, self.hi)?;
        for (k, v) in self.display_table() {
            writeln!(f, "  {k} -> {v}")?;
        }
        Ok(())
    }
}

fn domain_err<T>(msg: impl Into<String>) -> Result<T> {
    domain(msg)
}

/// Windows `[-l, r]` by increasing width, past-heavy first.
fn windows(max: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..=2 * max).flat_map(move |len| (0..=len).map(move |r| (len - r, r))).filter(move |&(l, r)| l <= max && r <= max)
}

fn check_paths(rc: &ReturnGraph, len: usize, budget: &Budget) -> Result<()> {
    let n = rc.path_count(len);
    if n > budget.max_paths {
        return Err(Error::Resource(format!("{n} return-graph paths of length {len} exceed the budget")));
    }
    Ok(())
}

struct WordIds<'a> {
    of_edge: Vec<u32>,
    table: HashMap<Vec<u32>, &'a Word>,
}

#[derive(Default)]
struct LabelGraph {
    vertices: usize,
    /// `(source, target, label)`.
    edges: Vec<(u32, u32, u32)>,
    /// Return-graph path behind each edge.
    paths: Vec<Vec<usize>>,
    labels: HashMap<Word, u32>,
}

/// A step of a pipeline evaluated on finite pieces of points.
#[derive(Clone, Copy)]
pub enum Stage<'a> {
    Code(&'a FlowCode),
    /// Move each mark forward to the first position in the section.
    Advance(&'a CrossSection),
    /// Move each mark back to the last position in the section.
    Retreat(&'a CrossSection),
}

fn run_stages(stages: &[Stage<'_>], seg: &[usize], marks: &[usize]) -> Result<Option<(Word, Vec<usize>)>> {
    let mut seg = seg.to_vec();
    let mut marks = marks.to_vec();
    for st in stages {
        match st {
            Stage::Code(f) => match f.apply_segment(&seg, &marks)? {
                Some((y, m)) => {
                    seg = y;
                    marks = m;
                }
                None => return Ok(None),
            },
            Stage::Advance(s) | Stage::Retreat(s) => {
                let forward = matches!(st, Stage::Advance(_));
                for m in marks.iter_mut() {
                    let mut t = *m as i64;
                    loop {
                        if t < 0 || t >= seg.len() as i64 {
                            return Ok(None);
                        }
                        match s.contains_at(&seg, t) {
                            None => return Ok(None),
                            Some(true) => break,
                            Some(false) => t += if forward { 1 } else { -1 },
                        }
                    }
                    *m = t as usize;
                }
            }
        }
    }
    Ok(Some((seg, marks)))
}

/// Builds the code `E -> Ē` sending each `E` point through `stages`, by
/// widening a symmetric window until every block decides its output.
pub fn tabulate(e: &CrossSection, ebar: &CrossSection, stages: &[Stage<'_>], budget: &Budget) -> Result<FlowCode> {
    let re = e.return_graph()?;
    for (l, r) in windows(budget.max_window) {
        let plen = l + r + 1;
        check_paths(re, plen, budget)?;
        let mut table: BTreeMap<Vec<Word>, Word> = BTreeMap::new();
        let mut undecided = false;
        let mut err = None;
        re.for_each_path(plen, |p| {
            if undecided || err.is_some() {
                return;
            }
            let words = re.words(p);
            let key: Vec<Word> = words.iter().map(|w| (*w).clone()).collect();
            if table.contains_key(&key) {
                return;
            }
            let seg = re.context(p);
            let m0: usize = re.context_len() + words[..l].iter().map(|w| w.len()).sum::<usize>();
            let m1 = m0 + words[l].len();
            match run_stages(stages, &seg, &[m0, m1]) {
                Ok(Some((y, mk))) if mk[1] > mk[0] => {
                    table.insert(key, y[mk[0]..mk[1]].to_vec());
                }
                Ok(Some(_)) => err = Some(Error::Construction("stages do not preserve return order".into())),
                Ok(None) => undecided = true,
                Err(x) => err = Some(x),
            }
        });
        if let Some(x) = err {
            return Err(x);
        }
        if undecided {
            continue;
        }
        let code = FlowCode::new(e.clone(), ebar.clone(), -(l as i64), r as i64, table)?
            .reduce_window()
            .validated(budget)?;
        return match code.status() {
            CodeStatus::Valid => Ok(code),
            CodeStatus::Invalid(d) => Err(Error::Construction(format!(
                "derived code invalid at {}: {}",
                d.stage(),
                d.describe(e.shift())
            ))),
            CodeStatus::Unchecked => unreachable!(),
        };
    }
    Err(Error::Resource(format!("no deciding window up to {}", budget.max_window)))
}

/// The alignment of two cross sections: `K ⊂ D1`, `L ⊂ C2`, the code for
/// `δ: x -> T^{τ(x, C2)} x` and the code for its inverse.
#[derive(Clone, Debug)]
pub struct AlignmentResult {
    pub k: CrossSection,
    pub l: CrossSection,
    pub delta: FlowCode,
    pub psi: FlowCode,
}

/// `K = {x ∈ D1 : C2 is met before the next return to D1}`, `L = δ(K)`.
pub fn align(d1: &CrossSection, c2: &CrossSection, budget: &Budget) -> Result<AlignmentResult> {
    if d1.shift() != c2.shift() {
        return domain_err("cross sections live on different shifts");
    }
    d1.return_graph()?;
    c2.return_graph()?;
    if d1.same_set(c2)? {
        let id = FlowCode::identity(d1)?;
        return Ok(AlignmentResult { k: d1.clone(), l: d1.clone(), delta: id.clone(), psi: id });
    }
    let shift = d1.shift();
    let k = CrossSection::from_predicate(shift, budget.max_section_words, |w, n| {
        let n = n as i64;
        if !d1.contains_at(w, n)? {
            return Some(false);
        }
        let mut t = n;
        loop {
            if t > n && d1.contains_at(w, t)? {
                return Some(false);
            }
            if c2.contains_at(w, t)? {
                return Some(true);
            }
            t += 1;
        }
    })?;
    let l = CrossSection::from_predicate(shift, budget.max_section_words, |w, n| {
        let n = n as i64;
        if !c2.contains_at(w, n)? {
            return Some(false);
        }
        let mut t = n;
        loop {
            if t < n && c2.contains_at(w, t)? {
                return Some(false);
            }
            if d1.contains_at(w, t)? {
                return Some(true);
            }
            t -= 1;
        }
    })?;
    let delta = tabulate(&k, &l, &[Stage::Advance(c2)], budget)?;
    let psi = tabulate(&l, &k, &[Stage::Retreat(d1)], budget)?;
    Ok(AlignmentResult { k, l, delta, psi })
}

/// A code isotopic to `φ2 ∘ φ1`. When the codomain of `f1` is the domain of
/// `f2` the word codes compose directly; otherwise the sections are aligned
/// first and the result lives on `E = φ1^{-1}(K)`.
pub fn compose(f2: &FlowCode, f1: &FlowCode, budget: &Budget) -> Result<FlowCode> {
    f1.require_valid()?;
    f2.require_valid()?;
    if f1.shift() != f2.shift() {
        return domain_err("codes live on different shifts");
    }
    if f1.codomain.same_set(&f2.domain)? {
        return compose_direct(f2, f1, budget);
    }
    let al = align(&f1.codomain, &f2.domain, budget)?;
    let inv2 = f2.invert(budget)?;
    let shift = f1.shift();
    let e = CrossSection::from_predicate(shift, budget.max_section_words, |w, n| {
        if !f1.domain.contains_at(w, n as i64)? {
            return Some(false);
        }
        let (y, m) = f1.apply_segment(w, &[n]).ok()??;
        al.k.contains_at(&y, m[0] as i64)
    })?;
    let ebar = CrossSection::from_predicate(shift, budget.max_section_words, |w, n| {
        if !f2.codomain.contains_at(w, n as i64)? {
            return Some(false);
        }
        let (z, m) = inv2.apply_segment(w, &[n]).ok()??;
        al.l.contains_at(&z, m[0] as i64)
    })?;
    tabulate(&e, &ebar, &[Stage::Code(f1), Stage::Advance(&f2.domain), Stage::Code(f2)], budget)
}

fn compose_direct(f2: &FlowCode, f1: &FlowCode, budget: &Budget) -> Result<FlowCode> {
    let rc = f1.domain.return_graph()?;
    let (lo, hi) = (f1.lo + f2.lo, f1.hi + f2.hi);
    let plen = (hi - lo + 1) as usize;
    check_paths(rc, plen, budget)?;
    let w1 = (f1.hi - f1.lo) as usize;
    let mut table = BTreeMap::new();
    let mut missing = false;
    rc.for_each_path(plen, |p| {
        if missing {
            return;
        }
        let words = rc.words(p);
        let mids: Option<Vec<Word>> = (f2.lo..=f2.hi)
            .map(|k| {
                let s = (k + f1.lo - lo) as usize;
                f1.lookup(&words[s..=s + w1]).cloned()
            })
            .collect();
        let out = mids.and_then(|m| f2.table.get(&m).cloned());
        match out {
            Some(o) => {
                table.insert(words.iter().map(|w| (*w).clone()).collect::<Vec<Word>>(), o);
            }
            None => missing = true,
        }
    });
    if missing {
        return Err(Error::Construction("composition met a block outside a table".into()));
    }
    let code = FlowCode::new(f1.domain.clone(), f2.codomain.clone(), lo, hi, table)?
        .reduce_window()
        .validated(budget)?;
    match code.status() {
        CodeStatus::Valid => Ok(code),
        CodeStatus::Invalid(d) => Err(Error::Construction(format!("composite invalid at {}", d.stage()))),
        CodeStatus::Unchecked => unreachable!(),
    }
}

//! Edge shifts of finite type presented by nonnegative integer matrices.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{domain, Error, Result};
use crate::graph;
use crate::matrix::IntMatrix;

/// A finite word over the edge alphabet of an [`EdgeShift`], by edge index.
pub type Word = Vec<usize>;

/// Largest number of parallel edges materialized from a single matrix entry.
pub const MAX_EDGE_MULTIPLICITY: usize = 1 << 16;

/// Square nonnegative integer matrix; `A[i][j]` counts edges from `i` to `j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AdjacencyMatrix(IntMatrix);

impl AdjacencyMatrix {
    pub fn new(m: IntMatrix) -> Result<Self> {
        if !m.is_square() {
            return domain(format!("adjacency matrix must be square, got {}x{}", m.rows(), m.cols()));
        }
        if !m.is_nonnegative() {
            return domain("adjacency matrix has a negative entry");
        }
        Ok(AdjacencyMatrix(m))
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self> {
        Self::new(IntMatrix::from_i64(rows))
    }

    pub fn size(&self) -> usize {
        self.0.rows()
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> IntMatrix {
        self.0
    }

    pub fn entry(&self, i: usize, j: usize) -> &BigInt {
        &self.0[(i, j)]
    }

    /// No zero row and no zero column.
    pub fn is_nondegenerate(&self) -> bool {
        let n = self.size();
        (0..n).all(|i| (0..n).any(|j| !self.0[(i, j)].is_zero()))
            && (0..n).all(|j| (0..n).any(|i| !self.0[(i, j)].is_zero()))
    }

    pub(crate) fn successors(&self) -> Vec<Vec<usize>> {
        let n = self.size();
        (0..n).map(|i| (0..n).filter(|&j| !self.0[(i, j)].is_zero()).collect()).collect()
    }

    /// Principal submatrix on the given vertices, in the given order.
    pub fn restrict(&self, keep: &[usize]) -> AdjacencyMatrix {
        let k = keep.len();
        let mut m = IntMatrix::zeros(k, k);
        for (a, &i) in keep.iter().enumerate() {
            for (b, &j) in keep.iter().enumerate() {
                m[(a, b)] = self.0[(i, j)].clone();
            }
        }
        AdjacencyMatrix(m)
    }

    /// `trace(A^n)`, the number of points of period `n`.
    pub fn fixed_points(&self, n: u32) -> BigInt {
        self.0.pow(n).trace()
    }
}

impl fmt::Display for AdjacencyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

/// Structural facts about the graph of an adjacency matrix.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct StructureReport {
    pub nondegenerate: bool,
    pub irreducible: bool,
    /// Period of the whole graph when irreducible.
    pub period: Option<u64>,
    /// Period of every strongly connected component carrying a cycle.
    pub component_periods: Vec<(Vec<usize>, u64)>,
    pub mixing: bool,
    /// The matrix is a cyclic permutation matrix (a single periodic orbit).
    pub trivial: bool,
}

/// Structure checks: irreducibility, period, mixing and triviality.
pub fn analyze(a: &AdjacencyMatrix) -> Result<StructureReport> {
    let n = a.size();
    if n == 0 {
        return domain("empty matrix");
    }
    let succ = a.successors();
    let comps = graph::scc(&succ);
    let component_periods: Vec<(Vec<usize>, u64)> = comps
        .iter()
        .filter(|c| graph::component_has_cycle(&succ, c))
        .map(|c| (c.clone(), graph::component_period(&succ, c)))
        .collect();
    let irreducible = comps.len() == 1 && graph::component_has_cycle(&succ, &comps[0]);
    let period = if irreducible { Some(component_periods[0].1) } else { None };
    let one = BigInt::one();
    let trivial = irreducible
        && (0..n).all(|i| {
            let row_sum: BigInt = a.matrix().row(i).iter().sum();
            row_sum == one
        });
    Ok(StructureReport {
        nondegenerate: a.is_nondegenerate(),
        irreducible,
        period,
        component_periods,
        mixing: irreducible && period == Some(1),
        trivial,
    })
}

/// Deletes vertices not lying on bi-infinite paths, to a fixed point.
/// Returns the trimmed matrix and the surviving original vertex indices.
pub fn trim(a: &AdjacencyMatrix) -> (AdjacencyMatrix, Vec<usize>) {
    let alive = graph::essential_vertices(&a.successors());
    let keep: Vec<usize> = (0..a.size()).filter(|&v| alive[v]).collect();
    (a.restrict(&keep), keep)
}

/// One edge of an edge shift.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub source: usize,
    pub target: usize,
    pub name: String,
}

/// The edge shift `X_A`: bi-infinite paths in the graph of `A`, with a
/// totally ordered edge alphabet. Edges are ordered by `(source, target, k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeShift {
    matrix: AdjacencyMatrix,
    edges: Vec<Edge>,
    out: Vec<Vec<usize>>,
    inc: Vec<Vec<usize>>,
    by_name: BTreeMap<String, usize>,
}

impl EdgeShift {
    /// Edge shift with auto-generated names `i.j.k` (0-based).
    pub fn new(matrix: AdjacencyMatrix) -> Result<Self> {
        Self::with_names(matrix, &BTreeMap::new())
    }

    /// Edge shift whose edge `(i, j, k)` takes `names[(i, j, k)]` when given.
    pub fn with_names(matrix: AdjacencyMatrix, names: &BTreeMap<(usize, usize, usize), String>) -> Result<Self> {
        let n = matrix.size();
        let mut edges = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let count = matrix.entry(i, j).to_usize().filter(|&c| c <= MAX_EDGE_MULTIPLICITY);
                let Some(count) = count else {
                    return Err(Error::Resource(format!("entry ({i},{j}) too large to materialize edges")));
                };
                for k in 0..count {
                    let name = names.get(&(i, j, k)).cloned().unwrap_or_else(|| format!("{i}.{j}.{k}"));
                    edges.push(Edge { source: i, target: j, name });
                }
            }
        }
        for key in names.keys() {
            if key.0 >= n || key.1 >= n || BigInt::from(key.2) >= *matrix.entry(key.0, key.1) {
                return domain(format!("edge name given for nonexistent edge {key:?}"));
            }
        }
        Self::assemble(matrix, edges)
    }

    /// Builds a shift from an explicit edge list; edges are stably sorted by
    /// `(source, target)` and the matrix is recomputed.
    pub fn from_edges(vertices: usize, mut edges: Vec<Edge>) -> Result<Self> {
        edges.sort_by_key(|e| (e.source, e.target));
        let mut m = IntMatrix::zeros(vertices, vertices);
        for e in &edges {
            if e.source >= vertices || e.target >= vertices {
                return domain(format!("edge {} has an endpoint out of range", e.name));
            }
            m[(e.source, e.target)] += 1;
        }
        Self::assemble(AdjacencyMatrix(m), edges)
    }

    fn assemble(matrix: AdjacencyMatrix, edges: Vec<Edge>) -> Result<Self> {
        let n = matrix.size();
        let mut out = vec![Vec::new(); n];
        let mut inc = vec![Vec::new(); n];
        let mut by_name = BTreeMap::new();
        for (idx, e) in edges.iter().enumerate() {
            out[e.source].push(idx);
            inc[e.target].push(idx);
            if e.name.is_empty() || e.name.chars().any(char::is_whitespace) || e.name.contains(',') {
                return domain(format!("invalid edge name {:?}", e.name));
            }
            if by_name.insert(e.name.clone(), idx).is_some() {
                return domain(format!("duplicate edge name {}", e.name));
            }
        }
        Ok(EdgeShift { matrix, edges, out, inc, by_name })
    }

    /// Full shift on the given symbols: one vertex, one loop per symbol.
    pub fn full_shift(symbols: &[&str]) -> Result<Self> {
        let edges = symbols
            .iter()
            .map(|s| Edge { source: 0, target: 0, name: s.to_string() })
            .collect();
        Self::from_edges(1, edges)
    }

    /// Golden mean shift: `a: 1->1`, `b: 1->2`, `c: 2->1`.
    pub fn golden_mean() -> Self {
        let e = |s, t, n: &str| Edge { source: s, target: t, name: n.to_string() };
        Self::from_edges(2, vec![e(0, 0, "a"), e(0, 1, "b"), e(1, 0, "c")]).expect("valid golden mean")
    }

    pub fn matrix(&self) -> &AdjacencyMatrix {
        &self.matrix
    }

    pub fn vertex_count(&self) -> usize {
        self.matrix.size()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, i: usize) -> &Edge {
        &self.edges[i]
    }

    pub fn out_edges(&self, v: usize) -> &[usize] {
        &self.out[v]
    }

    pub fn in_edges(&self, v: usize) -> &[usize] {
        &self.inc[v]
    }

    pub fn edge_by_name(&self, name: &str) -> Option<usize> {
        self.by_name.get(name).copied()
    }

    /// `(source, target, k)` key of every edge, for serialization.
    pub fn edge_keys(&self) -> Vec<(usize, usize, usize)> {
        let mut counts: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        self.edges
            .iter()
            .map(|e| {
                let c = counts.entry((e.source, e.target)).or_default();
                *c += 1;
                (e.source, e.target, *c - 1)
            })
            .collect()
    }

    /// Whether consecutive edges compose.
    pub fn follows(&self, e: usize, f: usize) -> bool {
        self.edges[e].target == self.edges[f].source
    }

    /// Language membership for a word of edge indices.
    pub fn language_contains(&self, w: &[usize]) -> Result<bool> {
        if let Some(&bad) = w.iter().find(|&&e| e >= self.edges.len()) {
            return domain(format!("unknown symbol index {bad}"));
        }
        Ok(w.windows(2).all(|p| self.follows(p[0], p[1])))
    }

    pub(crate) fn is_path(&self, w: &[usize]) -> bool {
        w.windows(2).all(|p| self.follows(p[0], p[1]))
    }

    /// Whether `w` closes up into a cycle.
    pub fn is_cycle(&self, w: &[usize]) -> bool {
        !w.is_empty() && self.is_path(w) && self.follows(w[w.len() - 1], w[0])
    }

    fn single_char_names(&self) -> bool {
        self.edges.iter().all(|e| e.name.chars().count() == 1)
    }

    /// Renders a word: names concatenated when all names are single
    /// characters, otherwise space separated.
    pub fn format_word(&self, w: &[usize]) -> String {
        let sep = if self.single_char_names() { "" } else { " " };
        w.iter().map(|&e| self.edges[e].name.as_str()).collect::<Vec<_>>().join(sep)
    }

    /// Parses a word in the format produced by [`EdgeShift::format_word`].
    pub fn parse_word(&self, s: &str) -> Result<Word> {
        let tokens: Vec<String> = if self.single_char_names() {
            s.chars().filter(|c| !c.is_whitespace() && *c != ',').map(String::from).collect()
        } else {
            s.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()).map(String::from).collect()
        };
        tokens
            .iter()
            .map(|t| self.edge_by_name(t).ok_or_else(|| Error::Domain(format!("unknown symbol {t:?}"))))
            .collect()
    }

    /// All allowed words of length `len >= 1`, in lexicographic order.
    pub fn paths(&self, len: usize) -> Vec<Word> {
        let mut out = Vec::new();
        self.for_each_path(len, |w| out.push(w.to_vec()));
        out
    }

    /// Number of allowed words of length `len`, saturating.
    pub fn paths_count(&self, len: usize) -> u128 {
        if len == 0 {
            return 1;
        }
        let mut ends: Vec<u128> = vec![1; self.edges.len()];
        for _ in 1..len {
            let mut next = vec![0u128; self.edges.len()];
            for (e, &c) in ends.iter().enumerate() {
                for &f in &self.out[self.edges[e].target] {
                    next[f] = next[f].saturating_add(c);
                }
            }
            ends = next;
        }
        ends.iter().fold(0u128, |a, &c| a.saturating_add(c))
    }

    pub fn for_each_path(&self, len: usize, mut f: impl FnMut(&[usize])) {
        if len == 0 {
            f(&[]);
            return;
        }
        let mut cur = Vec::with_capacity(len);
        fn rec(s: &EdgeShift, len: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
            if cur.len() == len {
                f(cur);
                return;
            }
            let next: &[usize] = match cur.last() {
                None => return (0..s.edges.len()).for_each(|e| {
                    cur.push(e);
                    rec(s, len, cur, f);
                    cur.pop();
                }),
                Some(&e) => &s.out[s.edges[e].target],
            };
            for &e in next {
                cur.push(e);
                rec(s, len, cur, f);
                cur.pop();
            }
        }
        rec(self, len, &mut cur, &mut f);
    }

    /// Number of points of least period `n` divided by `n`:
    /// `o_n = (1/n) sum_{d | n} mu(d) trace(A^{n/d})`.
    pub fn orbit_count(&self, n: u32) -> Result<BigInt> {
        orbit_count(&self.matrix, n)
    }

    /// Canonical representatives of all periodic orbits of least period `n`.
    pub fn periodic_orbits(&self, n: usize) -> Result<Vec<PeriodicPoint>> {
        if n == 0 {
            return domain("period must be positive");
        }
        let mut found = BTreeSet::new();
        for start in 0..self.edges.len() {
            let mut cur = vec![start];
            self.cycles_from(start, n, &mut cur, &mut |w: &[usize]| {
                if is_primitive(w) && least_rotation(w) == 0 {
                    found.insert(w.to_vec());
                }
            });
        }
        Ok(found.into_iter().map(|word| PeriodicPoint { word, rotation: 0 }).collect())
    }

    fn cycles_from(&self, start: usize, n: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        let last = *cur.last().unwrap();
        if cur.len() == n {
            if self.follows(last, start) {
                f(cur);
            }
            return;
        }
        for &e in &self.out[self.edges[last].target] {
            // only rotations starting with their least symbol can be canonical
            if e < start {
                continue;
            }
            cur.push(e);
            self.cycles_from(start, n, cur, f);
            cur.pop();
        }
    }

    /// The `m`-block presentation.
    pub fn higher_block(&self, m: usize) -> Result<HigherBlock> {
        if m == 0 {
            return domain("block length must be positive");
        }
        if m == 1 {
            return Ok(HigherBlock {
                shift: self.clone(),
                blocks: (0..self.edges.len()).map(|e| vec![e]).collect(),
            });
        }
        let vertices = self.paths(m - 1);
        let index: BTreeMap<&Word, usize> = vertices.iter().enumerate().map(|(i, w)| (w, i)).collect();
        let blocks = self.paths(m);
        let edges = blocks
            .iter()
            .map(|b| Edge {
                source: index[&b[..m - 1].to_vec()],
                target: index[&b[1..].to_vec()],
                name: self.block_name(b),
            })
            .collect();
        let shift = EdgeShift::from_edges(vertices.len(), edges)?;
        // from_edges sorts by endpoints; recover the dictionary by name
        let blocks = shift
            .edges
            .iter()
            .map(|e| blocks.iter().find(|b| self.block_name(b) == e.name).cloned().unwrap())
            .collect();
        Ok(HigherBlock { shift, blocks })
    }

    fn block_name(&self, b: &[usize]) -> String {
        if self.single_char_names() {
            self.format_word(b)
        } else {
            format!("[{}]", b.iter().map(|&e| self.edges[e].name.as_str()).collect::<Vec<_>>().join("|"))
        }
    }
}

/// Result of [`EdgeShift::higher_block`]: the recoded shift and, for each of
/// its edges, the block of original edges it stands for.
#[derive(Clone, Debug)]
pub struct HigherBlock {
    pub shift: EdgeShift,
    pub blocks: Vec<Word>,
}

impl HigherBlock {
    /// Image of a periodic word of the original shift in the recoded shift.
    pub fn encode_cycle(&self, w: &[usize]) -> Option<Word> {
        let m = self.blocks.first().map_or(1, Vec::len);
        let n = w.len();
        (0..n)
            .map(|i| {
                let blk: Word = (0..m).map(|k| w[(i + k) % n]).collect();
                self.blocks.iter().position(|b| *b == blk)
            })
            .collect()
    }
}

/// Orbit count of least period `n` for a matrix, by Möbius inversion.
pub fn orbit_count(a: &AdjacencyMatrix, n: u32) -> Result<BigInt> {
    if n == 0 {
        return domain("period must be positive");
    }
    let mut total = BigInt::zero();
    for d in 1..=n {
        if n.is_multiple_of(d) {
            let mu = mobius(d);
            if mu != 0 {
                total += BigInt::from(mu) * a.fixed_points(n / d);
            }
        }
    }
    let (q, r) = total.div_rem(&BigInt::from(n));
    debug_assert!(r.is_zero());
    Ok(q)
}

pub(crate) fn mobius(mut n: u32) -> i32 {
    let mut result = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

/// Whether the word is not a proper power of a shorter word.
pub fn is_primitive(w: &[usize]) -> bool {
    let n = w.len();
    (1..n).filter(|d| n.is_multiple_of(*d)).all(|d| (0..n).any(|i| w[i] != w[i % d]))
}

/// Index of the lexicographically least rotation (first one on ties).
pub fn least_rotation(w: &[usize]) -> usize {
    let n = w.len();
    (0..n)
        .min_by(|&a, &b| {
            (0..n).map(|k| w[(a + k) % n]).cmp((0..n).map(|k| w[(b + k) % n]))
        })
        .unwrap_or(0)
}

/// A periodic point `(word)^∞` with the origin at `rotation`.
///
/// The canonical representative of an orbit has `word` equal to the least
/// rotation of its primitive root and `rotation == 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PeriodicPoint {
    pub word: Word,
    pub rotation: usize,
}

impl PeriodicPoint {
    pub fn new(shift: &EdgeShift, word: Word, rotation: usize) -> Result<Self> {
        if word.is_empty() || !shift.is_cycle(&word) {
            return domain("periodic point word must be a nonempty cycle");
        }
        Ok(PeriodicPoint { rotation: rotation % word.len(), word })
    }

    /// Canonical representative of the orbit of `(w)^∞`.
    pub fn orbit_of(w: &[usize]) -> PeriodicPoint {
        let root = primitive_root(w);
        let r = least_rotation(root);
        let word = (0..root.len()).map(|k| root[(r + k) % root.len()]).collect();
        PeriodicPoint { word, rotation: 0 }
    }

    /// Canonical form of this point: primitive root, rotation reduced.
    pub fn canonical(&self) -> PeriodicPoint {
        let root = primitive_root(&self.word);
        PeriodicPoint { word: root.to_vec(), rotation: self.rotation % root.len() }
    }

    pub fn orbit(&self) -> PeriodicPoint {
        Self::orbit_of(&self.word)
    }

    pub fn period(&self) -> usize {
        primitive_root(&self.word).len()
    }

    /// The word read from the origin for one full period.
    pub fn rotated_word(&self) -> Word {
        let n = self.word.len();
        (0..n).map(|k| self.word[(self.rotation + k) % n]).collect()
    }

    pub fn display(&self, shift: &EdgeShift) -> String {
        format!("({})^∞", shift.format_word(&self.rotated_word()))
    }
}

pub(crate) fn primitive_root(w: &[usize]) -> &[usize] {
    let n = w.len();
    for d in 1..=n {
        if n.is_multiple_of(d) && (0..n).all(|i| w[i] == w[i % d]) {
            return &w[..d];
        }
    }
    w
}

#[cfg(test)]
mod tests {
    use super::*;

    fn full2() -> EdgeShift {
        EdgeShift::full_shift(&["0", "1"]).unwrap()
    }

    #[test]
    fn analyze_examples() {
        let gm = analyze(&AdjacencyMatrix::from_i64(&[&[1, 1], &[1, 0]]).unwrap()).unwrap();
        assert!(gm.irreducible && gm.mixing && !gm.trivial);
        assert_eq!(gm.period, Some(1));
        let swap = analyze(&AdjacencyMatrix::from_i64(&[&[0, 1], &[1, 0]]).unwrap()).unwrap();
        assert!(swap.irreducible && swap.trivial && !swap.mixing);
        assert_eq!(swap.period, Some(2));
        let red = analyze(&AdjacencyMatrix::from_i64(&[&[1, 1], &[0, 1]]).unwrap()).unwrap();
        assert!(!red.irreducible);
        assert_eq!(red.component_periods.len(), 2);
        assert!(analyze(&AdjacencyMatrix::new(IntMatrix::zeros(0, 0)).unwrap()).is_err());
    }

    #[test]
    fn language_examples() {
        let gm = EdgeShift::golden_mean();
        let bc = gm.parse_word("bc").unwrap();
        assert!(gm.language_contains(&bc).unwrap());
        assert!(!gm.language_contains(&gm.parse_word("bb").unwrap()).unwrap());
        assert!(gm.language_contains(&[7]).is_err());
        let f3 = EdgeShift::full_shift(&["0", "1", "2"]).unwrap();
        assert!(f3.language_contains(&f3.parse_word("0120210").unwrap()).unwrap());
    }

    #[test]
    fn orbit_examples() {
        let f2 = full2();
        assert_eq!(f2.orbit_count(6).unwrap(), BigInt::from(9));
        assert_eq!(f2.periodic_orbits(6).unwrap().len(), 9);
        assert_eq!(f2.orbit_count(1).unwrap(), BigInt::from(2));
        let gm = EdgeShift::golden_mean();
        let o2 = gm.periodic_orbits(2).unwrap();
        assert_eq!(o2.len(), 1);
        assert_eq!(gm.format_word(&o2[0].word), "bc");
        assert!(gm.periodic_orbits(0).is_err());
    }

    #[test]
    fn higher_block_examples() {
        let gm = EdgeShift::golden_mean();
        let hb = gm.higher_block(2).unwrap();
        assert_eq!(
            hb.shift.matrix(),
            &AdjacencyMatrix::from_i64(&[&[1, 1, 0], &[0, 0, 1], &[1, 1, 0]]).unwrap()
        );
        assert_eq!(gm.higher_block(1).unwrap().shift, gm);
        let f2 = full2().higher_block(2).unwrap();
        assert_eq!(f2.shift.matrix(), &AdjacencyMatrix::from_i64(&[&[1, 1], &[1, 1]]).unwrap());
    }

    #[test]
    fn trim_examples() {
        let (t, keep) = trim(&AdjacencyMatrix::from_i64(&[&[1, 1], &[0, 0]]).unwrap());
        assert_eq!(t, AdjacencyMatrix::from_i64(&[&[1]]).unwrap());
        assert_eq!(keep, vec![0]);
        let gm = AdjacencyMatrix::from_i64(&[&[1, 1], &[1, 0]]).unwrap();
        assert_eq!(trim(&gm).0, gm);
        assert_eq!(trim(&AdjacencyMatrix::from_i64(&[&[0]]).unwrap()).0.size(), 0);
    }

    #[test]
    fn canonical_periodic_point() {
        let gm = EdgeShift::golden_mean();
        let w = gm.parse_word("cbcb").unwrap();
        let p = PeriodicPoint::orbit_of(&w);
        assert_eq!(gm.format_word(&p.word), "bc");
        let q = PeriodicPoint::new(&gm, w, 5).unwrap().canonical();
        assert_eq!(q.rotation, 1);
        assert!(PeriodicPoint::new(&gm, gm.parse_word("bb").unwrap(), 0).is_err());
    }
}

//! Basic positive equivalences of `I - A`, the matching graph rewrites and
//! the induced action on `coker(I - A)`.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use crate::sft::{AdjacencyMatrix, Edge, EdgeShift, PeriodicPoint, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    #[serde(rename = "L")]
    Left,
    #[serde(rename = "R")]
    Right,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    #[serde(rename = "fwd")]
    Forward,
    #[serde(rename = "inv")]
    Inverse,
}

/// One of the four elementary moves `I - A -> E(I - A)`, `E^{-1}(I - A)`,
/// `(I - A)E`, `(I - A)E^{-1}` with `E = I + e_{ij}`. Indices are 0-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BasicMove {
    pub side: Side,
    pub direction: Direction,
    pub i: usize,
    pub j: usize,
}

impl BasicMove {
    pub fn new(side: Side, direction: Direction, i: usize, j: usize) -> Self {
        BasicMove { side, direction, i, j }
    }

    pub fn inverse(&self) -> Self {
        let direction = match self.direction {
            Direction::Forward => Direction::Inverse,
            Direction::Inverse => Direction::Forward,
        };
        BasicMove { direction, ..*self }
    }

    /// The matrix multiplied onto `I - A`.
    pub fn factor(&self, n: usize) -> IntMatrix {
        match self.direction {
            Direction::Forward => IntMatrix::elementary(n, self.i, self.j),
            Direction::Inverse => IntMatrix::elementary_inverse(n, self.i, self.j),
        }
    }
}

impl fmt::Display for BasicMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = if self.side == Side::Left { "L" } else { "R" };
        let d = if self.direction == Direction::Forward { "fwd" } else { "inv" };
        write!(f, "{s}-{d}({},{})", self.i + 1, self.j + 1)
    }
}

/// Move as stored in JSON: 1-based indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveSpec {
    pub side: Side,
    pub dir: Direction,
    pub i: usize,
    pub j: usize,
}

impl TryFrom<MoveSpec> for BasicMove {
    type Error = Error;
    fn try_from(m: MoveSpec) -> Result<Self> {
        if m.i == 0 || m.j == 0 {
            return Err(Error::Domain("move indices are 1-based".into()));
        }
        Ok(BasicMove::new(m.side, m.dir, m.i - 1, m.j - 1))
    }
}

impl From<BasicMove> for MoveSpec {
    fn from(m: BasicMove) -> Self {
        MoveSpec { side: m.side, dir: m.direction, i: m.i + 1, j: m.j + 1 }
    }
}

/// Applies a move, returning `A'` and the elementary matrix used.
pub fn apply_basic_move(a: &AdjacencyMatrix, m: &BasicMove) -> Result<(AdjacencyMatrix, IntMatrix)> {
    let n = a.size();
    if m.i == m.j {
        return Err(Error::MoveInapplicable(format!("{m}: i and j must differ")));
    }
    if m.i >= n || m.j >= n {
        return Err(Error::MoveInapplicable(format!("{m}: index out of range for {n}x{n}")));
    }
    if m.direction == Direction::Forward && a.entry(m.i, m.j).is_zero() {
        return Err(Error::MoveInapplicable(format!("{m}: A[{},{}] = 0", m.i + 1, m.j + 1)));
    }
    let e = m.factor(n);
    let ima = a.matrix().identity_minus();
    let image = match m.side {
        Side::Left => &e * &ima,
        Side::Right => &ima * &e,
    };
    let next = image.identity_minus();
    if !next.is_nonnegative() {
        return Err(Error::MoveInapplicable(format!("{m}: result has a negative entry")));
    }
    let next = AdjacencyMatrix::new(next)?;
    debug_assert_eq!(next.matrix().identity_minus(), image);
    Ok((next, e))
}

/// Outcome of cutting an edge `e: i -> j` out of a graph.
#[derive(Clone, Debug)]
pub struct RewriteResult {
    pub shift: EdgeShift,
    pub removed_edge: String,
    /// Names and endpoints of the added edges `[ef]`.
    pub new_edges: Vec<(String, usize, usize)>,
    /// For each edge of the new shift, the old word it stands for.
    pub gamma: Vec<Word>,
    /// Time rescaling of the induced flow map on each new edge's cylinder.
    pub time_scale: Vec<u32>,
}

impl RewriteResult {
    pub fn new_matrix(&self) -> &AdjacencyMatrix {
        self.shift.matrix()
    }

    /// Letterwise substitution `γ̂` from new words to old words.
    pub fn substitute(&self, w: &[usize]) -> Word {
        w.iter().flat_map(|&e| self.gamma[e].iter().copied()).collect()
    }

    /// Image of a periodic point of the new shift.
    pub fn map_periodic(&self, x: &PeriodicPoint) -> PeriodicPoint {
        PeriodicPoint::orbit_of(&self.substitute(&x.word))
    }
}

/// Removes `e: i -> j` and adds an edge `[ef]: i -> t(f)` for every `f` leaving
/// `j`; realizes the left forward move at `(i, j)`.
pub fn graph_rewrite(s: &EdgeShift, e: usize) -> Result<RewriteResult> {
    if e >= s.edge_count() {
        return Err(Error::Domain(format!("no edge with index {e}")));
    }
    let removed = s.edge(e).clone();
    if removed.source == removed.target {
        return Err(Error::MoveInapplicable(format!("edge {} is a loop", removed.name)));
    }
    let mut names: BTreeSet<String> = s.edges().iter().map(|x| x.name.clone()).collect();
    names.remove(&removed.name);
    let mut edges: Vec<(Edge, Word, u32)> = Vec::new();
    for (idx, x) in s.edges().iter().enumerate() {
        if idx != e {
            edges.push((x.clone(), vec![idx], 1));
        }
    }
    let mut new_edges = Vec::new();
    for &f in s.out_edges(removed.target) {
        let fe = s.edge(f);
        let mut name = format!("[{}{}]", removed.name, fe.name);
        while names.contains(&name) {
            name.push('\'');
        }
        names.insert(name.clone());
        new_edges.push((name.clone(), removed.source, fe.target));
        edges.push((Edge { source: removed.source, target: fe.target, name }, vec![e, f], 2));
    }
    let mut order: Vec<usize> = (0..edges.len()).collect();
    order.sort_by_key(|&k| (edges[k].0.source, edges[k].0.target));
    let shift = EdgeShift::from_edges(s.vertex_count(), edges.iter().map(|x| x.0.clone()).collect())?;
    let gamma = order.iter().map(|&k| edges[k].1.clone()).collect();
    let time_scale = order.iter().map(|&k| edges[k].2).collect();
    Ok(RewriteResult { shift, removed_edge: removed.name, new_edges, gamma, time_scale })
}

/// Shortens a simple cycle to a loop by repeatedly cutting its first edge.
pub fn loop_shorten(s: &EdgeShift, cycle: &[usize]) -> Result<(EdgeShift, Vec<RewriteResult>)> {
    if !s.is_cycle(cycle) {
        return Err(Error::Domain("not a cycle of the shift".into()));
    }
    let sources: BTreeSet<usize> = cycle.iter().map(|&e| s.edge(e).source).collect();
    if sources.len() != cycle.len() {
        return Err(Error::Domain("cycle visits a vertex twice".into()));
    }
    let mut shift = s.clone();
    let mut names: Vec<String> = cycle.iter().map(|&e| s.edge(e).name.clone()).collect();
    let mut steps = Vec::new();
    while names.len() > 1 {
        let e = shift.edge_by_name(&names[0]).expect("cycle edge present");
        let r = graph_rewrite(&shift, e)?;
        let merged = r
            .new_edges
            .iter()
            .zip(shift.out_edges(shift.edge(e).target))
            .find(|(_, &f)| shift.edge(f).name == names[1])
            .map(|(ne, _)| ne.0.clone())
            .expect("rewrite produces the merged edge");
        names.splice(0..2, [merged]);
        shift = r.shift.clone();
        steps.push(r);
    }
    Ok((shift, steps))
}

/// Result of running a move sequence: the matrices visited and `U`, `V` with
/// `U (I - A) V = I - A''`.
#[derive(Clone, Debug)]
pub struct CokerAction {
    pub trace: Vec<AdjacencyMatrix>,
    pub left: IntMatrix,
    pub right: IntMatrix,
}

impl CokerAction {
    pub fn final_matrix(&self) -> &AdjacencyMatrix {
        self.trace.last().expect("trace starts with the input")
    }

    /// Image of the class of a row vector `u` under `[u] -> [uV]`.
    pub fn apply(&self, u: &[num_bigint::BigInt]) -> Vec<num_bigint::BigInt> {
        let row = IntMatrix::from_rows(&[u.to_vec()]);
        (&row * &self.right).row(0).to_vec()
    }
}

/// Runs a move sequence and returns the cokernel action matrix `V`.
pub fn coker_action(a: &AdjacencyMatrix, moves: &[BasicMove]) -> Result<CokerAction> {
    let n = a.size();
    let mut u = IntMatrix::identity(n);
    let mut v = IntMatrix::identity(n);
    let mut trace = vec![a.clone()];
    for (k, m) in moves.iter().enumerate() {
        let cur = trace.last().unwrap();
        let (next, e) = apply_basic_move(cur, m).map_err(|err| match err {
            Error::MoveInapplicable(msg) => Error::MoveInapplicable(format!("move {}: {msg}", k + 1)),
            other => other,
        })?;
        match m.side {
            Side::Left => u = &e * &u,
            Side::Right => v = &v * &e,
        }
        trace.push(next);
    }
    let start = a.matrix().identity_minus();
    let end = trace.last().unwrap().matrix().identity_minus();
    let lhs = &(&u * &start) * &v;
    if lhs != end {
        return Err(Error::Construction("U(I-A)V differs from I-A''".into()));
    }
    // (I - A)V = U^{-1}(I - A'') shows V carries the row span of I - A into
    // that of I - A''; U is a product of elementary matrices, so det U = 1.
    if !u.det().is_one() {
        return Err(Error::Construction("left factor not unimodular".into()));
    }
    Ok(CokerAction { trace, left: u, right: v })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn adj(rows: &[&[i64]]) -> AdjacencyMatrix {
        AdjacencyMatrix::from_i64(rows).unwrap()
    }

    #[test]
    fn matrix_moves() {
        let a = adj(&[&[1, 1], &[1, 0]]);
        let (l, e) = apply_basic_move(&a, &BasicMove::new(Side::Left, Direction::Forward, 0, 1)).unwrap();
        assert_eq!(l, adj(&[&[2, 0], &[1, 0]]));
        assert_eq!(e, IntMatrix::from_i64(&[&[1, 1], &[0, 1]]));
        let (r, _) = apply_basic_move(&a, &BasicMove::new(Side::Right, Direction::Forward, 0, 1)).unwrap();
        assert_eq!(r, adj(&[&[1, 1], &[1, 1]]));
        let bad = apply_basic_move(&adj(&[&[0, 1], &[1, 0]]), &BasicMove::new(Side::Left, Direction::Forward, 0, 0));
        assert!(matches!(bad, Err(Error::MoveInapplicable(_))));
        let m = BasicMove::new(Side::Left, Direction::Forward, 0, 1);
        let (back, _) = apply_basic_move(&l, &m.inverse()).unwrap();
        assert_eq!(back, a);
    }

    #[test]
    fn rewrite_golden_mean() {
        let s = EdgeShift::golden_mean();
        let r = graph_rewrite(&s, s.edge_by_name("b").unwrap()).unwrap();
        assert_eq!(r.new_matrix(), &adj(&[&[2, 0], &[1, 0]]));
        let names: Vec<&str> = r.shift.edges().iter().map(|e| e.name.as_str()).collect();
        assert_eq!(names, vec!["a", "[bc]", "c"]);
        let bc = r.shift.edge_by_name("[bc]").unwrap();
        let img = r.map_periodic(&PeriodicPoint::orbit_of(&[bc]));
        assert_eq!(img.display(&s), "(bc)^∞");
        assert_eq!(r.time_scale[bc], 2);

        let full = EdgeShift::full_shift(&["0", "1", "2"]).unwrap();
        assert!((0..3).all(|e| graph_rewrite(&full, e).is_err()));
    }

    #[test]
    fn shorten_loops() {
        let s = EdgeShift::golden_mean();
        let (b, c) = (s.edge_by_name("b").unwrap(), s.edge_by_name("c").unwrap());
        let (t, steps) = loop_shorten(&s, &[b, c]).unwrap();
        assert_eq!(steps.len(), 1);
        let bc = t.edge_by_name("[bc]").unwrap();
        assert_eq!((t.edge(bc).source, t.edge(bc).target), (0, 0));
        let (same, none) = loop_shorten(&s, &[s.edge_by_name("a").unwrap()]).unwrap();
        assert!(none.is_empty() && same == s);
        assert!(graph_rewrite(&t, bc).is_err());
        assert!(loop_shorten(&s, &[b, b]).is_err());
    }

    #[test]
    fn coker_examples() {
        let a = adj(&[&[1, 1], &[1, 0]]);
        let act = coker_action(&a, &[]).unwrap();
        assert_eq!(act.right, IntMatrix::identity(2));
        let act = coker_action(&a, &[BasicMove::new(Side::Right, Direction::Forward, 0, 1)]).unwrap();
        assert_eq!(act.right, IntMatrix::elementary(2, 0, 1));
        let lefts = [
            BasicMove::new(Side::Left, Direction::Forward, 0, 1),
            BasicMove::new(Side::Left, Direction::Inverse, 0, 1),
        ];
        assert_eq!(coker_action(&a, &lefts).unwrap().right, IntMatrix::identity(2));
        let bad = BasicMove::new(Side::Right, Direction::Inverse, 0, 1);
        let err = coker_action(&a, &[lefts[0], bad]).unwrap_err();
        assert!(err.to_string().contains("move 2"));
    }
}

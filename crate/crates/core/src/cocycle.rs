//! Integer cocycles over edge shifts of graphs and the coboundary equation
//! `p = q∘σ - q`.

use std::collections::{BTreeMap, HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::graph;
use crate::section::ReturnGraph;
use crate::sft::EdgeShift;

/// A directed multigraph given by its edges `(source, target)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeGraph {
    pub vertices: usize,
    pub edges: Vec<(usize, usize)>,
}

impl EdgeGraph {
    pub fn of_shift(s: &EdgeShift) -> Self {
        EdgeGraph { vertices: s.vertex_count(), edges: s.edges().iter().map(|e| (e.source, e.target)).collect() }
    }

    pub fn of_returns(r: &ReturnGraph) -> Self {
        EdgeGraph { vertices: r.state_count(), edges: r.edges.iter().map(|e| (e.from, e.to)).collect() }
    }

    fn out(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.vertices];
        for (i, &(s, _)) in self.edges.iter().enumerate() {
            out[s].push(i);
        }
        out
    }

    /// Calls `f` on every path of `len >= 1` edges, in lexicographic order.
    pub fn for_each_path(&self, len: usize, mut f: impl FnMut(&[usize])) {
        let out = self.out();
        let mut cur = Vec::with_capacity(len);
        fn rec(g: &EdgeGraph, out: &[Vec<usize>], len: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
            if cur.len() == len {
                f(cur);
                return;
            }
            let next: Vec<usize> = match cur.last() {
                None => (0..g.edges.len()).collect(),
                Some(&e) => out[g.edges[e].1].clone(),
            };
            for e in next {
                cur.push(e);
                rec(g, out, len, cur, f);
                cur.pop();
            }
        }
        if len > 0 {
            rec(self, &out, len, &mut cur, &mut f);
        }
    }

    /// One strongly connected component carrying every edge.
    pub fn is_irreducible(&self) -> bool {
        if self.edges.is_empty() {
            return false;
        }
        let succ: Vec<Vec<usize>> = self.out().iter().map(|es| es.iter().map(|&e| self.edges[e].1).collect()).collect();
        let comps = graph::scc(&succ);
        let used: Vec<bool> = (0..self.vertices).map(|v| self.edges.iter().any(|e| e.0 == v || e.1 == v)).collect();
        comps.iter().filter(|c| c.iter().any(|&v| used[v])).count() == 1
    }
}

/// A locally constant integer function: `p(x) = table[x_o .. x_{o+len-1}]`
/// on edge paths, `o = offset`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cocycle {
    pub offset: i64,
    pub len: usize,
    pub table: BTreeMap<Vec<usize>, i64>,
}

impl Cocycle {
    pub fn from_fn(g: &EdgeGraph, offset: i64, len: usize, f: impl Fn(&[usize]) -> i64) -> Self {
        let mut table = BTreeMap::new();
        g.for_each_path(len.max(1), |p| {
            table.insert(p.to_vec(), f(p));
        });
        Cocycle { offset, len: len.max(1), table }
    }

    pub fn constant(g: &EdgeGraph, c: i64) -> Self {
        Self::from_fn(g, 0, 1, |_| c)
    }

    pub fn value(&self, path: &[usize]) -> Option<i64> {
        self.table.get(path).copied()
    }

    /// Sum of `p` over the periodic orbit of the closed edge path `cycle`.
    pub fn orbit_sum(&self, cycle: &[usize]) -> Option<i64> {
        let n = cycle.len();
        (0..n)
            .map(|i| {
                let key: Vec<usize> = (0..self.len).map(|k| cycle[(i + k) % n]).collect();
                self.value(&key)
            })
            .sum()
    }
}

/// A transfer function `q`. With `len > 0`, `q(x) = table[x_o .. x_{o+len-1}]`
/// on edge paths; with `len = 0` it reads the vertex at position `o`, keyed
/// as a one-element vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransferFunction {
    pub offset: i64,
    pub len: usize,
    pub table: BTreeMap<Vec<usize>, i64>,
}

impl TransferFunction {
    pub fn value(&self, key: &[usize]) -> Option<i64> {
        self.table.get(key).copied()
    }

    /// `q + c`.
    pub fn shifted(&self, c: i64) -> Self {
        let table = self.table.iter().map(|(k, v)| (k.clone(), v + c)).collect();
        TransferFunction { offset: self.offset, len: self.len, table }
    }

    pub fn min(&self) -> i64 {
        self.table.values().copied().min().unwrap_or(0)
    }

    pub fn max(&self) -> i64 {
        self.table.values().copied().max().unwrap_or(0)
    }

    /// Constant value, when `q` is constant.
    pub fn constant_value(&self) -> Option<i64> {
        (self.min() == self.max()).then(|| self.min())
    }

    fn head_key(&self, g: &EdgeGraph, path: &[usize]) -> Vec<usize> {
        if self.len == 0 {
            vec![g.edges[path[0]].0]
        } else {
            path[..self.len].to_vec()
        }
    }

    fn tail_key(&self, g: &EdgeGraph, path: &[usize]) -> Vec<usize> {
        if self.len == 0 {
            vec![g.edges[path[0]].1]
        } else {
            path[1..=self.len].to_vec()
        }
    }

    /// `q(x)` for `x` whose edges from position `offset` on are `path`.
    pub fn at(&self, g: &EdgeGraph, path: &[usize]) -> Option<i64> {
        self.value(&self.head_key(g, path))
    }
}

/// The coboundary `q∘σ - q` as a cocycle.
pub fn coboundary_of(g: &EdgeGraph, q: &TransferFunction) -> Result<Cocycle> {
    let mut table = BTreeMap::new();
    let mut missing = None;
    g.for_each_path(q.len + 1, |p| {
        match (q.value(&q.tail_key(g, p)), q.value(&q.head_key(g, p))) {
            (Some(a), Some(b)) => {
                table.insert(p.to_vec(), a - b);
            }
            _ => missing = Some(p.to_vec()),
        }
    });
    if let Some(p) = missing {
        return Err(Error::Domain(format!("transfer function undefined on path {p:?}")));
    }
    Ok(Cocycle { offset: q.offset, len: q.len + 1, table })
}

/// A closed edge path on which the cocycle has nonzero sum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Refutation {
    pub cycle: Vec<usize>,
    pub sum: i64,
}

/// Solves `p = q∘σ - q`. On success `q` is normalized to vanish at the
/// lexicographically least key; otherwise a periodic orbit with nonzero
/// `p`-sum is returned.
pub fn is_coboundary(g: &EdgeGraph, p: &Cocycle) -> Result<std::result::Result<TransferFunction, Refutation>> {
    if !g.is_irreducible() {
        return Err(Error::Precondition("coboundary equation needs an irreducible graph".into()));
    }
    let len = p.len;
    // higher-block graph: vertices are keys of q, edges are keys of p
    let mut keys: Vec<Vec<usize>> = Vec::new();
    if len == 1 {
        keys = (0..g.vertices).map(|v| vec![v]).collect();
    } else {
        g.for_each_path(len - 1, |k| keys.push(k.to_vec()));
    }
    keys.sort();
    let index: HashMap<&Vec<usize>, usize> = keys.iter().enumerate().map(|(i, k)| (k, i)).collect();
    let mut hedges: Vec<(usize, usize, i64, Vec<usize>)> = Vec::new();
    let mut missing = None;
    g.for_each_path(len, |path| {
        let (h, t) = if len == 1 {
            (vec![g.edges[path[0]].0], vec![g.edges[path[0]].1])
        } else {
            (path[..len - 1].to_vec(), path[1..].to_vec())
        };
        match p.value(path) {
            Some(w) => hedges.push((index[&h], index[&t], w, path.to_vec())),
            None => missing = Some(path.to_vec()),
        }
    });
    if let Some(path) = missing {
        return Err(Error::Domain(format!("cocycle undefined on path {path:?}")));
    }
    let n = keys.len();
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, e) in hedges.iter().enumerate() {
        out[e.0].push(i);
    }
    let used: Vec<bool> = (0..n).map(|v| !out[v].is_empty()).collect();
    let root = (0..n).find(|&v| used[v]).expect("irreducible graph has edges");
    let mut pot: Vec<Option<i64>> = vec![None; n];
    let mut tree: Vec<Option<usize>> = vec![None; n];
    pot[root] = Some(0);
    let mut queue = VecDeque::from([root]);
    while let Some(u) = queue.pop_front() {
        for &e in &out[u] {
            let v = hedges[e].1;
            if pot[v].is_none() {
                pot[v] = Some(pot[u].unwrap() + hedges[e].2);
                tree[v] = Some(e);
                queue.push_back(v);
            }
        }
    }
    let succ: Vec<Vec<usize>> = out.iter().map(|es| es.iter().map(|&e| hedges[e].1).collect()).collect();
    let tree_path = |mut v: usize| {
        let mut path = Vec::new();
        while let Some(e) = tree[v] {
            path.push(e);
            v = hedges[e].0;
        }
        path.reverse();
        path
    };
    let back_path = |v: usize| -> Vec<usize> {
        if v == root {
            return Vec::new();
        }
        let verts = graph::shortest_path(&succ, v, root, |_| true).expect("irreducible");
        verts
            .windows(2)
            .map(|w| *out[w[0]].iter().find(|&&e| hedges[e].1 == w[1]).unwrap())
            .collect()
    };
    let mut best: Option<Refutation> = None;
    for (i, e) in hedges.iter().enumerate() {
        let (Some(pu), Some(pv)) = (pot[e.0], pot[e.1]) else {
            return Err(Error::Precondition("coboundary graph is not strongly connected".into()));
        };
        if pv - pu == e.2 {
            continue;
        }
        let back = back_path(e.1);
        let mut with_edge = tree_path(e.0);
        with_edge.push(i);
        with_edge.extend(&back);
        let mut without = tree_path(e.1);
        without.extend(&back);
        for cyc in [with_edge, without] {
            if cyc.is_empty() {
                continue;
            }
            let sum: i64 = cyc.iter().map(|&k| hedges[k].2).sum();
            if sum != 0 && best.as_ref().is_none_or(|b| cyc.len() < b.cycle.len()) {
                let cycle = cyc.iter().map(|&k| hedges[k].3[0]).collect();
                best = Some(Refutation { cycle, sum });
            }
        }
        if best.as_ref().is_some_and(|b| b.cycle.len() == 1) {
            break;
        }
    }
    if let Some(r) = best {
        return Ok(Err(r));
    }
    let table = keys.iter().enumerate().filter(|&(i, _)| used[i]).map(|(i, k)| (k.clone(), pot[i].unwrap())).collect();
    Ok(Ok(TransferFunction { offset: p.offset, len: len - 1, table }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_and_constant_cocycles() {
        let g = EdgeGraph::of_shift(&EdgeShift::full_shift(&["0", "1"]).unwrap());
        let q = is_coboundary(&g, &Cocycle::constant(&g, 0)).unwrap().unwrap();
        assert_eq!(q.constant_value(), Some(0));
        let r = is_coboundary(&g, &Cocycle::constant(&g, 1)).unwrap().unwrap_err();
        assert_eq!(r.cycle.len(), 1);
        assert_eq!(r.sum, 1);
    }

    #[test]
    fn indicator_round_trip() {
        let g = EdgeGraph::of_shift(&EdgeShift::full_shift(&["0", "1"]).unwrap());
        let f = TransferFunction { offset: 0, len: 1, table: [(vec![0], 1), (vec![1], 0)].into() };
        let p = coboundary_of(&g, &f).unwrap();
        let q = is_coboundary(&g, &p).unwrap().unwrap();
        assert_eq!(coboundary_of(&g, &q).unwrap(), p);
        let diffs: Vec<i64> = f.table.iter().map(|(k, v)| v - q.table[k]).collect();
        assert!(diffs.windows(2).all(|w| w[0] == w[1]));
    }

    #[test]
    fn reducible_graph_is_rejected() {
        let g = EdgeGraph { vertices: 2, edges: vec![(0, 0), (0, 1), (1, 1)] };
        assert!(matches!(is_coboundary(&g, &Cocycle::constant(&g, 0)), Err(Error::Precondition(_))));
    }
}

//! Small directed-graph utilities shared by the shift, section and
//! decision modules. Graphs are successor lists over `0..n`.

use num_integer::Integer;
use std::collections::VecDeque;

/// Strongly connected components, in reverse topological order (Tarjan).
pub fn scc(succ: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n = succ.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comps = Vec::new();
    let mut next = 0;
    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        // explicit call stack of (vertex, next successor position)
        let mut call = vec![(root, 0usize)];
        index[root] = next;
        low[root] = next;
        next += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            if *pos < succ[v].len() {
                let w = succ[v][*pos];
                *pos += 1;
                if index[w] == usize::MAX {
                    index[w] = next;
                    low[w] = next;
                    next += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().unwrap();
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    comps.push(comp);
                }
            }
        }
    }
    comps
}

/// Whether a component carries at least one cycle.
pub fn component_has_cycle(succ: &[Vec<usize>], comp: &[usize]) -> bool {
    comp.len() > 1 || succ[comp[0]].contains(&comp[0])
}

/// Period (gcd of cycle lengths) of a strongly connected component with a
/// cycle, computed from BFS levels: gcd of `level(u) + 1 - level(v)` over
/// internal edges `u -> v`.
pub fn component_period(succ: &[Vec<usize>], comp: &[usize]) -> u64 {
    let n = succ.len();
    let mut inside = vec![false; n];
    for &v in comp {
        inside[v] = true;
    }
    let mut level = vec![i64::MIN; n];
    let root = comp[0];
    level[root] = 0;
    let mut q = VecDeque::from([root]);
    let mut g: i64 = 0;
    while let Some(u) = q.pop_front() {
        for &v in &succ[u] {
            if !inside[v] {
                continue;
            }
            if level[v] == i64::MIN {
                level[v] = level[u] + 1;
                q.push_back(v);
            } else {
                g = g.gcd(&(level[u] + 1 - level[v]));
            }
        }
    }
    g.unsigned_abs()
}

/// Vertices lying on bi-infinite paths: iteratively removes vertices with
/// no surviving predecessor or successor.
pub fn essential_vertices(succ: &[Vec<usize>]) -> Vec<bool> {
    let n = succ.len();
    let mut pred: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (u, vs) in succ.iter().enumerate() {
        for &v in vs {
            pred[v].push(u);
        }
    }
    let mut outdeg: Vec<usize> = succ.iter().map(Vec::len).collect();
    let mut indeg: Vec<usize> = pred.iter().map(Vec::len).collect();
    let mut alive = vec![true; n];
    let mut q: VecDeque<usize> = (0..n).filter(|&v| outdeg[v] == 0 || indeg[v] == 0).collect();
    while let Some(v) = q.pop_front() {
        if !alive[v] {
            continue;
        }
        alive[v] = false;
        for &w in &succ[v] {
            if alive[w] {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    q.push_back(w);
                }
            }
        }
        for &w in &pred[v] {
            if alive[w] {
                outdeg[w] -= 1;
                if outdeg[w] == 0 {
                    q.push_back(w);
                }
            }
        }
    }
    alive
}

/// Shortest path (as a vertex list, endpoints included) from `from` to `to`
/// using only vertices where `allowed` holds. A path from a vertex to itself
/// must use at least one edge.
pub fn shortest_path(
    succ: &[Vec<usize>],
    from: usize,
    to: usize,
    allowed: impl Fn(usize) -> bool,
) -> Option<Vec<usize>> {
    let n = succ.len();
    let mut parent = vec![usize::MAX; n];
    let mut seen = vec![false; n];
    let mut q = VecDeque::new();
    for &v in &succ[from] {
        if allowed(v) && !seen[v] {
            seen[v] = true;
            parent[v] = from;
            q.push_back(v);
        }
    }
    while let Some(u) = q.pop_front() {
        if u == to {
            let mut path = vec![to];
            let mut cur = to;
            loop {
                let p = parent[cur];
                path.push(p);
                if p == from {
                    break;
                }
                cur = p;
            }
            path.reverse();
            return Some(path);
        }
        for &v in &succ[u] {
            if allowed(v) && !seen[v] {
                seen[v] = true;
                parent[v] = u;
                q.push_back(v);
            }
        }
    }
    None
}

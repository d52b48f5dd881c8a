mod common;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};
use rand::Rng;

use common::*;
use sftkit::cocycle::{is_coboundary, Cocycle, EdgeGraph, TransferFunction};
use sftkit::invariants::{
    bowen_franks, enumerate_invariant_pairs, flow_equivalent, smith_normal_form, z2_det_check, z2_invariant_pair,
    GroupRingMatrixZ2, SignedChain,
};
use sftkit::poseq::{apply_basic_move, graph_rewrite, BasicMove, Direction, Side};
use sftkit::schema;
use sftkit::sft::{orbit_count, trim, AdjacencyMatrix, EdgeShift};

fn config(cases: u32) -> Config {
    Config { cases, rng_seed: RngSeed::Fixed(seed()), failure_persistence: None, ..Config::default() }
}

fn square(max_n: usize, lo: i64, hi: i64) -> impl Strategy<Value = Vec<Vec<i128>>> {
    (1..=max_n).prop_flat_map(move |n| {
        prop::collection::vec(prop::collection::vec((lo..=hi).prop_map(i128::from), n), n)
    })
}

fn transpose(m: &[Vec<i128>]) -> Vec<Vec<i128>> {
    (0..m.len()).map(|j| m.iter().map(|r| r[j]).collect()).collect()
}

/// The same move realized by cutting an edge of the graph.
fn graph_level(a: &AdjacencyMatrix, m: &BasicMove) -> AdjacencyMatrix {
    let cut = |b: &AdjacencyMatrix, i: usize, j: usize| -> AdjacencyMatrix {
        let s = EdgeShift::new(b.clone()).unwrap();
        let e = s.edges().iter().position(|x| x.source == i && x.target == j).unwrap_or_else(|| panic!("no edge {i}->{j} in {b}"));
        graph_rewrite(&s, e).map_err(|err| format!("{err} on {b} cutting {i}->{j}")).unwrap().new_matrix().clone()
    };
    match m.side {
        Side::Left => cut(a, m.i, m.j),
        Side::Right => {
            let t = adjacency(&transpose(&to_i128(a.matrix())));
            adjacency(&transpose(&to_i128(cut(&t, m.j, m.i).matrix())))
        }
    }
}

fn random_move(seed: u64) -> (AdjacencyMatrix, BasicMove, AdjacencyMatrix) {
    let mut r = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed);
    loop {
        let a = random_irreducible(&mut r, 4, 3);
        let n = a.size();
        if n < 2 {
            continue;
        }
        let (i, j) = (r.gen_range(0..n), r.gen_range(0..n));
        let side = if r.gen() { Side::Left } else { Side::Right };
        let dir = if r.gen() { Direction::Forward } else { Direction::Inverse };
        let m = BasicMove::new(side, dir, i, j);
        if let Ok((b, _)) = apply_basic_move(&a, &m) {
            return (a, m, b);
        }
    }
}

proptest! {
    #![proptest_config(config(256))]

    #[test]
    fn smith_form_matches_minor_gcds(m in square(4, -9, 9)) {
        let s = smith_normal_form(&from_i128(&m)).unwrap();
        let (u, v, d) = (to_i128(&s.left), to_i128(&s.right), to_i128(&s.diagonal_matrix()));
        prop_assert_eq!(mul(&mul(&u, &m), &v), d.clone());
        prop_assert_eq!(det(&u), 1);
        prop_assert_eq!(det(&v), 1);
        prop_assert!(s.is_normalized());
        let n = m.len();
        for k in 1..=n {
            let tail: i128 = (n - k..n).map(|i| d[i][i]).product();
            prop_assert_eq!(tail.abs(), minor_gcd(&m, k), "k = {}", k);
        }
    }

    #[test]
    fn bowen_franks_is_invariant_under_relabeling(m in square(4, 0, 3), perm_seed in any::<u64>()) {
        let a = adjacency(&m);
        let mut p: Vec<usize> = (0..m.len()).collect();
        let mut r = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(perm_seed);
        for i in (1..p.len()).rev() {
            p.swap(i, r.gen_range(0..=i));
        }
        let pa = AdjacencyMatrix::new(a.matrix().permute(&p)).unwrap();
        let ta = AdjacencyMatrix::new(a.matrix().transpose()).unwrap();
        let base = bowen_franks(&a).unwrap();
        prop_assert_eq!(&bowen_franks(&pa).unwrap(), &base);
        prop_assert_eq!(&bowen_franks(&ta).unwrap(), &base);
        prop_assert_eq!(base.det.clone(), BigInt::from(det(&identity_minus(&m))));
    }

    #[test]
    fn flow_equivalence_is_an_equivalence(x in square(3, 0, 3), y in square(3, 0, 3)) {
        let (a, b) = (adjacency(&x), adjacency(&y));
        prop_assume!(is_nontrivial_irreducible(&a) && is_nontrivial_irreducible(&b));
        prop_assert!(flow_equivalent(&a, &a).unwrap());
        prop_assert_eq!(flow_equivalent(&a, &b).unwrap(), flow_equivalent(&b, &a).unwrap());
        let t = AdjacencyMatrix::new(a.matrix().transpose()).unwrap();
        prop_assert!(flow_equivalent(&a, &t).unwrap());
    }

    #[test]
    fn z2_determinant_identity(x in square(2, 0, 3), y in square(2, 0, 3)) {
        prop_assume!(x.len() == y.len());
        let z = GroupRingMatrixZ2::new(adjacency(&x), adjacency(&y)).unwrap();
        let n = x.len();
        let f: Vec<Vec<i128>> = (0..2 * n)
            .map(|i| (0..2 * n).map(|j| if (i < n) == (j < n) { x[i % n][j % n] } else { y[i % n][j % n] }).collect())
            .collect();
        let plus: Vec<Vec<i128>> = (0..n).map(|i| (0..n).map(|j| x[i][j] + y[i][j]).collect()).collect();
        let minus: Vec<Vec<i128>> = (0..n).map(|i| (0..n).map(|j| x[i][j] - y[i][j]).collect()).collect();
        let lhs = det(&identity_minus(&f));
        prop_assert_eq!(lhs, det(&identity_minus(&plus)) * det(&identity_minus(&minus)));
        let c = z2_det_check(&z);
        prop_assert!(c.equal);
        prop_assert_eq!(c.lhs, BigInt::from(lhs));
        if let Ok((p, q)) = z2_invariant_pair(&z) {
            let pairs = enumerate_invariant_pairs(&BigInt::from(lhs)).unwrap();
            prop_assert!(pairs.contains(&(SignedChain::from_smith(&p), SignedChain::from_smith(&q))));
        }
    }

    #[test]
    fn moves_preserve_invariants(seed in any::<u64>()) {
        let (a, m, b) = random_move(seed);
        let (ia, ib) = (to_i128(&a.matrix().identity_minus()), to_i128(&b.matrix().identity_minus()));
        let n = a.size();
        let mut e: Vec<Vec<i128>> = (0..n).map(|i| (0..n).map(|j| i128::from(i == j)).collect()).collect();
        e[m.i][m.j] = if m.direction == Direction::Forward { 1 } else { -1 };
        let image = if m.side == Side::Left { mul(&e, &ia) } else { mul(&ia, &e) };
        prop_assert_eq!(image, ib);
        prop_assert_eq!(bowen_franks(&a).unwrap(), bowen_franks(&b).unwrap());
        match m.direction {
            Direction::Forward => prop_assert_eq!(graph_level(&a, &m), b.clone()),
            Direction::Inverse => {
                if b.entry(m.i, m.j) > &BigInt::from(0) {
                    prop_assert_eq!(graph_level(&b, &m.inverse()), a.clone());
                }
            }
        }
        if m.direction == Direction::Forward {
            let (back, _) = apply_basic_move(&b, &m.inverse()).unwrap();
            prop_assert_eq!(back, a);
        }
    }

    #[test]
    fn move_sequences_preserve_invariants(seed in any::<u64>(), len in 1usize..=6) {
        let mut r = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed);
        let a = random_irreducible(&mut r, 4, 3);
        prop_assume!(a.size() >= 2);
        let base = bowen_franks(&a).unwrap();
        let mut cur = a.clone();
        let mut applied = 0;
        for _ in 0..200 {
            if applied == len {
                break;
            }
            let n = cur.size();
            let m = BasicMove::new(
                if r.gen() { Side::Left } else { Side::Right },
                if r.gen() { Direction::Forward } else { Direction::Inverse },
                r.gen_range(0..n),
                r.gen_range(0..n),
            );
            if let Ok((next, _)) = apply_basic_move(&cur, &m) {
                prop_assert_eq!(&bowen_franks(&next).unwrap(), &base);
                cur = next;
                applied += 1;
            }
        }
    }

    #[test]
    fn orbit_counts_sum_to_traces(m in square(3, 0, 2)) {
        let a = adjacency(&m);
        let s = EdgeShift::new(a.clone()).unwrap();
        for n in 1..=6u32 {
            let total: BigInt = (1..=n).filter(|d| n % d == 0).map(|d| orbit_count(&a, d).unwrap() * d).sum();
            prop_assert_eq!(total, BigInt::from(trace_pow(&m, n)));
        }
        for n in 1..=4usize {
            prop_assert_eq!(BigInt::from(s.periodic_orbits(n).unwrap().len()), orbit_count(&a, n as u32).unwrap());
        }
    }

    #[test]
    fn higher_block_keeps_periodic_points(m in square(3, 0, 2), k in 2usize..=3) {
        let s = EdgeShift::new(adjacency(&m)).unwrap();
        let h = s.higher_block(k).unwrap();
        let hm = to_i128(h.shift.matrix().matrix());
        for n in 1..=6u32 {
            let got = if hm.is_empty() { 0 } else { trace_pow(&hm, n) };
            prop_assert_eq!(got, trace_pow(&m, n));
        }
    }

    #[test]
    fn trim_is_idempotent(m in square(5, 0, 1)) {
        let (t, keep) = trim(&adjacency(&m));
        let rows = to_i128(t.matrix());
        for v in 0..rows.len() {
            prop_assert!(rows[v].iter().sum::<i128>() > 0 && rows.iter().map(|r| r[v]).sum::<i128>() > 0);
        }
        prop_assert!(keep.windows(2).all(|w| w[0] < w[1]));
        let (t2, keep2) = trim(&t);
        prop_assert_eq!(t2, t.clone());
        prop_assert_eq!(keep2, (0..t.size()).collect::<Vec<_>>());
    }

    #[test]
    fn matrix_documents_round_trip(m in square(4, 0, 3)) {
        let s = EdgeShift::new(adjacency(&m)).unwrap();
        let text = schema::to_string(&schema::tagged(schema::shift_json(&s)));
        let back = schema::parse_shift(&schema::from_str(&text).unwrap()).unwrap();
        prop_assert_eq!(schema::to_string(&schema::tagged(schema::shift_json(&back))), text);
        prop_assert_eq!(back, s);
    }
}

/// Random transfer function of block length `len` on the golden mean.
pub fn random_transfer(r: &mut impl Rng, g: &EdgeGraph, len: usize) -> TransferFunction {
    let mut table = BTreeMap::new();
    g.for_each_path(len, |p| {
        table.insert(p.to_vec(), r.gen_range(-5..=5));
    });
    TransferFunction { offset: 0, len, table }
}

proptest! {
    #![proptest_config(config(200))]

    #[test]
    fn coboundaries_are_recovered(seed in any::<u64>(), len in 1usize..=2) {
        let g = EdgeGraph::of_shift(&EdgeShift::golden_mean());
        let mut r = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed);
        let q = random_transfer(&mut r, &g, len);
        let mut p = BTreeMap::new();
        g.for_each_path(len + 1, |w| {
            p.insert(w.to_vec(), q.table[&w[1..]] - q.table[&w[..len]]);
        });
        let p = Cocycle { offset: 0, len: len + 1, table: p };
        let found = is_coboundary(&g, &p).unwrap().expect("constructed coboundary");
        prop_assert_eq!(found.len, len);
        for (w, v) in &p.table {
            prop_assert_eq!(found.table[&w[1..]] - found.table[&w[..len]], *v);
        }
        let diffs: Vec<i64> = q.table.iter().map(|(k, v)| v - found.table[k]).collect();
        prop_assert!(diffs.windows(2).all(|d| d[0] == d[1]));
    }
}

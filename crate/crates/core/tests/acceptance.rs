mod common;

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rand::Rng;

use common::*;
use sftkit::cocycle::{is_coboundary, Cocycle, EdgeGraph, TransferFunction};
use sftkit::fixtures;
use sftkit::flowcode::{compose, Budget, FlowCode};
use sftkit::invariants::{
    bowen_franks, enumerate_invariant_pairs, flow_equivalent, kr_orbit_condition, smith_normal_form,
    z2_det_check, z2_invariant_pair, GroupRingMatrixZ2, SignedChain,
};
use sftkit::mcg::{
    decide_trivial, moved_circle_witness, sn_embedding_code, word_problem, DecideOptions, Evidence,
    MappingClassWord, Permutation,
};
use sftkit::poseq::{apply_basic_move, graph_rewrite, BasicMove, Direction, Side};
use sftkit::sft::{AdjacencyMatrix, EdgeShift, PeriodicPoint};

type Criterion = (u32, &'static str, Duration, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn check(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn adj(rows: &[&[i64]]) -> AdjacencyMatrix {
    AdjacencyMatrix::from_i64(rows).unwrap()
}

fn franks_pair() -> Outcome {
    let a = flow_equivalent(&adj(&[&[2, 1], &[1, 1]]), &adj(&[&[2]])).unwrap();
    let b = flow_equivalent(&adj(&[&[2]]), &adj(&[&[3]])).unwrap();
    check(a && !b, format!("[[2,1],[1,1]] ~ [2]: {a}; [2] ~ [3]: {b}"))
}

fn concretefe() -> Outcome {
    let p = fixtures::concretefe_c().presentation().unwrap();
    let q = fixtures::concretefe_c_prime().presentation().unwrap();
    let mut ok = p.labeled_text == "[[2+02, 00+01+1],[2, 0+1]]"
        && q.labeled_text == "[[2+12, 0+10+11],[2, 0+1]]"
        && p.unlabeled_text() == "[[2,3],[1,2]]"
        && q.unlabeled_text() == "[[2,3],[1,2]]";
    let f = fixtures::concretefe_f().unwrap();
    ok &= f.is_valid();
    let s = f.shift().clone();
    let orbit = |n: usize| PeriodicPoint::orbit_of(&s.parse_word(&format!("2{}", "1".repeat(n))).unwrap());
    let images = (1..=5).all(|n| f.orbit_image(&orbit(n)).unwrap() == orbit(n + 1));
    let cert = decide_trivial(&f, &DecideOptions::default()).unwrap();
    ok &= images && !cert.is_trivial();
    check(
        ok,
        format!("Ã = {}, Ã' = {}, A = {}, valid = {}, orbit images = {images}, {}", p.labeled_text, q.labeled_text, p.unlabeled_text(), f.is_valid(), cert.describe(&s)),
    )
}

fn tn_family() -> Outcome {
    let mut ok = true;
    let mut groups = Vec::new();
    for n in 1..=6u32 {
        let r = bowen_franks(&fixtures::tn(n as usize).unwrap()).unwrap();
        let order = (1i64 << n) - 1;
        let torsion: Vec<BigInt> = if order > 1 { vec![BigInt::from(order)] } else { vec![] };
        ok &= r.group.torsion == torsion && r.group.free_rank == 0 && r.det == BigInt::from(1 - (1i64 << n));
        groups.push(format!("T_{n}: {} det {}", r.group, r.det));
    }
    check(ok, groups.join("; "))
}

fn word_problem_sanity() -> Outcome {
    let opts = DecideOptions::default();
    let budget = Budget::default();
    let s = fixtures::full_3shift();
    let sigma = FlowCode::shift_code(&s).unwrap();
    let mut offsets = Vec::new();
    let mut power = sigma.clone();
    for k in 1..=4 {
        if k > 1 {
            power = compose(&sigma, &power, &budget).unwrap();
        }
        offsets.push(decide_trivial(&power, &opts).unwrap().constant_offset());
    }
    let f = fixtures::concretefe_f().unwrap();
    let w = MappingClassWord::parse(BTreeMap::from([("F".to_string(), f)]), "F,F^-1").unwrap();
    let r = word_problem(&w, &opts).unwrap();
    let ok = offsets == vec![Some(1), Some(2), Some(3), Some(4)] && r.certificate.is_trivial();
    check(ok, format!("σ^k offsets {offsets:?}; F·F⁻¹: {}", r.certificate.describe(&s)))
}

fn symmetric_group() -> Outcome {
    let s = fixtures::sn_embed_shift();
    let perms = Permutation::all(3);
    let codes: BTreeMap<String, FlowCode> = perms
        .iter()
        .enumerate()
        .map(|(i, p)| (format!("p{i}"), sn_embedding_code(&s, fixtures::SN_ALPHA, &fixtures::SN_WORDS, p).unwrap()))
        .collect();
    let index = |p: &Permutation| perms.iter().position(|q| q == p).unwrap();
    let opts = DecideOptions::default();
    let mut trivial = 0;
    for (i, p) in perms.iter().enumerate() {
        for (j, r) in perms.iter().enumerate() {
            let k = index(&p.compose(r));
            let letters = vec![(format!("p{i}"), 1), (format!("p{j}"), 1), (format!("p{k}"), -1)];
            let w = MappingClassWord::new(codes.clone(), letters).unwrap();
            if word_problem(&w, &opts).unwrap().certificate.is_trivial() {
                trivial += 1;
            }
        }
    }
    let mut moved = Vec::new();
    for (i, p) in perms.iter().enumerate().filter(|(_, p)| !p.is_identity()) {
        let f = &codes[&format!("p{i}")];
        let cert = decide_trivial(f, &opts).unwrap();
        let witness = moved_circle_witness(f, 4).unwrap();
        if let (false, Evidence::MovedCircle { circle, .. }, Some(_)) = (cert.is_trivial(), &cert.evidence, witness) {
            if circle.period() <= 4 {
                moved.push(format!("{p}: {}", cert.describe(&s)));
            }
        }
    }
    check(trivial == 36 && moved.len() == 5, format!("{trivial}/36 relators trivial; {} witnesses: {}", moved.len(), moved.join(", ")))
}

fn smith_suite() -> Outcome {
    let mut r = rng(6);
    let mut bad = 0;
    for _ in 0..1000 {
        let m = random_matrix(&mut r, 4, -9, 9);
        let s = smith_normal_form(&from_i128(&m)).unwrap();
        let (u, v, d) = (to_i128(&s.left), to_i128(&s.right), to_i128(&s.diagonal_matrix()));
        let exact = mul(&mul(&u, &m), &v) == d && det(&u) == 1 && det(&v) == 1;
        let minors = (1..=4).all(|k| (4 - k..4).map(|i| d[i][i]).product::<i128>().abs() == minor_gcd(&m, k));
        if !(exact && s.is_normalized() && minors) {
            bad += 1;
        }
    }
    check(bad == 0, format!("{} of 1000 matrices satisfy UMV = D, chain, sign and minor gcds", 1000 - bad))
}

fn coboundaries() -> Outcome {
    let g = EdgeGraph::of_shift(&EdgeShift::golden_mean());
    let mut r = rng(7);
    let mut recovered = 0;
    for t in 0..200 {
        let len = 1 + t % 2;
        let mut q = BTreeMap::new();
        g.for_each_path(len, |p| {
            q.insert(p.to_vec(), r.gen_range(-5..=5i64));
        });
        let q = TransferFunction { offset: 0, len, table: q };
        let mut p = BTreeMap::new();
        g.for_each_path(len + 1, |w| {
            p.insert(w.to_vec(), q.table[&w[1..]] - q.table[&w[..len]]);
        });
        let p = Cocycle { offset: 0, len: len + 1, table: p };
        if let Ok(Ok(found)) = is_coboundary(&g, &p) {
            if p.table.iter().all(|(w, v)| found.table[&w[1..]] - found.table[&w[..len]] == *v) {
                recovered += 1;
            }
        }
    }
    let refuted = match is_coboundary(&g, &Cocycle::constant(&g, 1)).unwrap() {
        Err(refutation) => refutation.cycle.len() == 1 && refutation.sum == 1,
        Ok(_) => false,
    };
    check(recovered == 200 && refuted, format!("{recovered}/200 recovered; p ≡ 1 refuted on a fixed point: {refuted}"))
}

fn z2_identity() -> Outcome {
    let mut r = rng(8);
    let (mut identity, mut odd, mut listed) = (0, 0, 0);
    for _ in 0..500 {
        let x = random_matrix(&mut r, 2, 0, 3);
        let y = random_matrix(&mut r, 2, 0, 3);
        let z = GroupRingMatrixZ2::new(adjacency(&x), adjacency(&y)).unwrap();
        let c = z2_det_check(&z);
        let plus: Vec<Vec<i128>> = (0..2).map(|i| (0..2).map(|j| x[i][j] + y[i][j]).collect()).collect();
        let minus: Vec<Vec<i128>> = (0..2).map(|i| (0..2).map(|j| x[i][j] - y[i][j]).collect()).collect();
        let rhs = det(&identity_minus(&plus)) * det(&identity_minus(&minus));
        if c.equal && c.lhs == BigInt::from(rhs) {
            identity += 1;
        }
        if let Ok((p, q)) = z2_invariant_pair(&z) {
            odd += 1;
            if enumerate_invariant_pairs(&c.lhs).unwrap().contains(&(SignedChain::from_smith(&p), SignedChain::from_smith(&q))) {
                listed += 1;
            }
        }
    }
    check(identity == 500 && listed == odd, format!("identity {identity}/500; invariant pairs enumerated {listed}/{odd} odd-determinant cases"))
}

fn transpose(m: &[Vec<i128>]) -> Vec<Vec<i128>> {
    (0..m.len()).map(|j| m.iter().map(|r| r[j]).collect()).collect()
}

fn cut(b: &AdjacencyMatrix, i: usize, j: usize) -> AdjacencyMatrix {
    let s = EdgeShift::new(b.clone()).unwrap();
    let e = s.edges().iter().position(|x| x.source == i && x.target == j).unwrap();
    graph_rewrite(&s, e).unwrap().new_matrix().clone()
}

fn graph_level(a: &AdjacencyMatrix, m: &BasicMove) -> AdjacencyMatrix {
    match m.side {
        Side::Left => cut(a, m.i, m.j),
        Side::Right => {
            let t = adjacency(&transpose(&to_i128(a.matrix())));
            adjacency(&transpose(&to_i128(cut(&t, m.j, m.i).matrix())))
        }
    }
}

fn positive_moves() -> Outcome {
    let mut r = rng(9);
    let (mut done, mut good, mut graph_checked) = (0, 0, 0);
    while done < 100 {
        let a = random_irreducible(&mut r, 4, 3);
        let n = a.size();
        if n < 2 {
            continue;
        }
        let m = BasicMove::new(
            if r.gen() { Side::Left } else { Side::Right },
            if r.gen() { Direction::Forward } else { Direction::Inverse },
            r.gen_range(0..n),
            r.gen_range(0..n),
        );
        let Ok((b, _)) = apply_basic_move(&a, &m) else { continue };
        done += 1;
        let ia = to_i128(&a.matrix().identity_minus());
        let mut e: Vec<Vec<i128>> = (0..n).map(|i| (0..n).map(|j| i128::from(i == j)).collect()).collect();
        e[m.i][m.j] = if m.direction == Direction::Forward { 1 } else { -1 };
        let image = if m.side == Side::Left { mul(&e, &ia) } else { mul(&ia, &e) };
        let mut ok = image == to_i128(&b.matrix().identity_minus());
        ok &= bowen_franks(&a).unwrap() == bowen_franks(&b).unwrap();
        match m.direction {
            Direction::Forward => {
                ok &= graph_level(&a, &m) == b;
                graph_checked += 1;
            }
            Direction::Inverse if b.entry(m.i, m.j) > &BigInt::from(0) => {
                ok &= graph_level(&b, &m.inverse()) == a;
                graph_checked += 1;
            }
            Direction::Inverse => {}
        }
        if ok {
            good += 1;
        }
    }
    check(good == 100, format!("{good}/100 moves consistent; graph rewrites compared on {graph_checked}"))
}

fn kim_roush() -> Outcome {
    let a = adj(&[&[2]]);
    let r2 = kr_orbit_condition(&a, 2, 12).unwrap();
    let r3 = kr_orbit_condition(&a, 3, 12).unwrap();
    let ok = r2.passes() && r3.passes() && r2.equalities().contains(&2);
    check(ok, format!("p = 2 passes: {}, equalities at {:?}; p = 3 passes: {}, equalities at {:?}", r2.passes(), r2.equalities(), r3.passes(), r3.equalities()))
}

fn main() {
    let criteria: [Criterion; 10] = [
        (1, "Franks pair", Duration::from_secs(1), franks_pair),
        (2, "worked example reproduction", Duration::from_secs(10), concretefe),
        (3, "T_n family", Duration::from_secs(1), tn_family),
        (4, "word problem sanity", Duration::from_secs(30), word_problem_sanity),
        (5, "symmetric group embedding", Duration::from_secs(60), symmetric_group),
        (6, "Smith suite", Duration::from_secs(30), smith_suite),
        (7, "coboundary solver", Duration::from_secs(10), coboundaries),
        (8, "Z2 determinant identity", Duration::from_secs(10), z2_identity),
        (9, "positive equivalence consistency", Duration::from_secs(10), positive_moves),
        (10, "Kim-Roush orbit condition", Duration::from_secs(1), kim_roush),
    ];
    let mut failed = Vec::new();
    println!("seed {}", seed());
    for (n, name, limit, run) in criteria {
        let start = Instant::now();
        let out = run();
        let took = start.elapsed();
        let pass = out.pass && took <= limit;
        println!(
            "criterion {n:>2} {}: {name} ({:.2}s, limit {}s): {}",
            if pass { "PASS" } else { "FAIL" },
            took.as_secs_f64(),
            limit.as_secs(),
            out.detail
        );
        if !pass {
            failed.push(n);
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}

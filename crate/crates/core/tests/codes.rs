use std::collections::{BTreeMap, BTreeSet};

use sftkit::fixtures;
use sftkit::flowcode::{compose, Budget, FlowCode};
use sftkit::mcg::{
    decide_trivial, moved_circle_witness, recheck, word_problem, DecideOptions, MappingClassWord, Permutation,
};
use sftkit::sft::PeriodicPoint;

fn codes() -> Vec<(String, FlowCode)> {
    let f = fixtures::concretefe_f().unwrap();
    let mut out = vec![
        ("F".to_string(), f.clone()),
        ("F^-1".to_string(), f.invert(&Budget::default()).unwrap()),
        ("shift".to_string(), FlowCode::shift_code(&fixtures::full_3shift()).unwrap()),
    ];
    out.extend(fixtures::sn_generators().unwrap());
    out
}

fn circles(f: &FlowCode, max: usize) -> Vec<PeriodicPoint> {
    (1..=max).flat_map(|n| f.shift().periodic_orbits(n).unwrap()).collect()
}

#[test]
fn distinct_circles_have_distinct_images() {
    for (name, f) in codes() {
        let xs = circles(&f, 6);
        let images: BTreeSet<PeriodicPoint> = xs.iter().map(|x| f.orbit_image(x).unwrap()).collect();
        assert_eq!(images.len(), xs.len(), "{name}");
    }
}

#[test]
fn return_words_tile_periodic_points() {
    for c in [fixtures::concretefe_c(), fixtures::concretefe_c_prime(), codes()[4].1.domain().clone()] {
        let r = c.return_graph().unwrap();
        for len in 1..=4 {
            r.for_each_path(len, |p| {
                if r.edges[p[len - 1]].to != r.edges[p[0]].from {
                    return;
                }
                let w = r.concat(p);
                let hits = (0..w.len()).filter(|&t| c.contains_periodic(&w, t)).count();
                assert_eq!(hits, len);
                let total: usize = r.words(p).iter().map(|x| x.len()).sum();
                assert_eq!(total, w.len());
            });
        }
    }
}

#[test]
fn verdict_does_not_depend_on_the_witness_scan() {
    let slow = DecideOptions { witness_period: 0, ..DecideOptions::default() };
    for (name, f) in codes() {
        let fast = decide_trivial(&f, &DecideOptions::default()).unwrap();
        assert_eq!(fast.verdict, decide_trivial(&f, &slow).unwrap().verdict, "{name}");
        if moved_circle_witness(&f, 8).unwrap().is_some() {
            assert!(!fast.is_trivial(), "{name}");
        }
        if fast.is_trivial() {
            assert!(recheck(&f, &fast, &Budget::default()).unwrap(), "{name}");
        }
    }
}

#[test]
fn symmetric_relators_recheck() {
    let s = fixtures::sn_embed_shift();
    let perms = Permutation::all(3);
    let gens: BTreeMap<String, FlowCode> = perms
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let f = sftkit::mcg::sn_embedding_code(&s, fixtures::SN_ALPHA, &fixtures::SN_WORDS, p).unwrap();
            (format!("p{i}"), f)
        })
        .collect();
    let opts = DecideOptions::default();
    for (i, j) in [(1, 2), (3, 4), (5, 5)] {
        let k = perms.iter().position(|q| *q == perms[i].compose(&perms[j])).unwrap();
        let letters = vec![(format!("p{i}"), 1), (format!("p{j}"), 1), (format!("p{k}"), -1)];
        let w = MappingClassWord::new(gens.clone(), letters).unwrap();
        let r = word_problem(&w, &opts).unwrap();
        assert!(r.certificate.is_trivial(), "{w}");
        if let Some(g) = &r.composed {
            assert!(recheck(g, &r.certificate, &opts.budget).unwrap(), "{w}");
        }
    }
    let two = compose(&gens["p1"], &gens["p1"], &opts.budget).unwrap();
    let cert = decide_trivial(&two, &opts).unwrap();
    assert_eq!(cert.is_trivial(), perms[1].compose(&perms[1]).is_identity());
}

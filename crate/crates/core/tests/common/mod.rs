//! Independent oracles and generators shared by the integration tests.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use sftkit::sft::{analyze, AdjacencyMatrix};
use sftkit::IntMatrix;

pub const DEFAULT_SEED: u64 = 0x5f7_2024;

/// Seed from `SFTKIT_SEED`, or the fixed default.
pub fn seed() -> u64 {
    std::env::var("SFTKIT_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(DEFAULT_SEED)
}

pub fn rng(stream: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed() ^ stream.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

pub fn to_i128(m: &IntMatrix) -> Vec<Vec<i128>> {
    m.to_rows().iter().map(|r| r.iter().map(|x| x.to_i128().unwrap()).collect()).collect()
}

pub fn from_i128(rows: &[Vec<i128>]) -> IntMatrix {
    IntMatrix::from_rows(&rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect::<Vec<_>>())
}

/// Cofactor expansion along the first row.
pub fn det(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    (0..n)
        .map(|j| {
            let minor: Vec<Vec<i128>> =
                m[1..].iter().map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect()).collect();
            let s = if j % 2 == 0 { 1 } else { -1 };
            s * m[0][j] * det(&minor)
        })
        .sum()
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n).filter(|m| m.count_ones() as usize == k).map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect()).collect()
}

/// Gcd of all `k x k` minors.
pub fn minor_gcd(m: &[Vec<i128>], k: usize) -> i128 {
    let n = m.len();
    let mut g = 0;
    for rs in subsets(n, k) {
        for cs in subsets(n, k) {
            let sub: Vec<Vec<i128>> = rs.iter().map(|&r| cs.iter().map(|&c| m[r][c]).collect()).collect();
            g = gcd(g, det(&sub));
        }
    }
    g
}

pub fn mul(a: &[Vec<i128>], b: &[Vec<i128>]) -> Vec<Vec<i128>> {
    let n = a.len();
    let p = b[0].len();
    (0..n).map(|i| (0..p).map(|j| (0..b.len()).map(|k| a[i][k] * b[k][j]).sum()).collect()).collect()
}

pub fn identity_minus(a: &[Vec<i128>]) -> Vec<Vec<i128>> {
    a.iter()
        .enumerate()
        .map(|(i, r)| r.iter().enumerate().map(|(j, &x)| if i == j { 1 - x } else { -x }).collect())
        .collect()
}

/// `trace(A^n)` by repeated multiplication.
pub fn trace_pow(a: &[Vec<i128>], n: u32) -> i128 {
    let mut p = a.to_vec();
    for _ in 1..n {
        p = mul(&p, a);
    }
    (0..a.len()).map(|i| p[i][i]).sum()
}

pub fn random_matrix(rng: &mut impl Rng, n: usize, lo: i64, hi: i64) -> Vec<Vec<i128>> {
    (0..n).map(|_| (0..n).map(|_| rng.gen_range(lo..=hi) as i128).collect()).collect()
}

pub fn adjacency(rows: &[Vec<i128>]) -> AdjacencyMatrix {
    AdjacencyMatrix::new(from_i128(rows)).unwrap()
}

/// Irreducible, not a single cycle.
pub fn is_nontrivial_irreducible(a: &AdjacencyMatrix) -> bool {
    analyze(a).map(|r| r.irreducible && !r.trivial).unwrap_or(false)
}

/// A random nontrivial irreducible matrix of size `1..=max_n`.
pub fn random_irreducible(rng: &mut impl Rng, max_n: usize, max_entry: i64) -> AdjacencyMatrix {
    loop {
        let n = rng.gen_range(1..=max_n);
        let a = adjacency(&random_matrix(rng, n, 0, max_entry));
        if is_nontrivial_irreducible(&a) {
            return a;
        }
    }
}

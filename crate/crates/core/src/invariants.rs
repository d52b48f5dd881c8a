//! Exact flow equivalence invariants.
//!
//! The Smith normal form here follows a nonstandard ordering: for
//! `diag(d_1, ..., d_n)` we require `d_{i+1} | d_i` whenever `d_{i+1} != 0`,
//! zeros occupy an initial segment, and `d_i >= 0` for `i > 1`. The sign of
//! the determinant is carried by `d_1`, so that `Sm(B ⊕ I_k) = Sm(B) ⊕ I_k`
//! and `det Sm(B) = det B`.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{domain, precondition, Result};
use crate::matrix::IntMatrix;
use crate::sft::{analyze, orbit_count, trim, AdjacencyMatrix};

/// `U · M · V = diag`, with `U, V` in `SL(n, Z)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub diag: Vec<BigInt>,
    pub left: IntMatrix,
    pub right: IntMatrix,
}

impl SmithForm {
    pub fn diagonal_matrix(&self) -> IntMatrix {
        let n = self.diag.len();
        let mut d = IntMatrix::zeros(n, n);
        for (i, x) in self.diag.iter().enumerate() {
            d[(i, i)] = x.clone();
        }
        d
    }

    /// Checks the ordering and sign convention on `diag`.
    pub fn is_normalized(&self) -> bool {
        let d = &self.diag;
        (1..d.len()).all(|i| !d[i].is_negative())
            && d.windows(2).all(|p| if p[1].is_zero() { p[0].is_zero() } else { (&p[0] % &p[1]).is_zero() })
    }
}

impl fmt::Display for SmithForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.diag.iter().map(ToString::to_string).collect();
        write!(f, "diag({})", parts.join(","))
    }
}

/// Smith normal form of a square integer matrix, with unimodular witnesses.
pub fn smith_normal_form(m: &IntMatrix) -> Result<SmithForm> {
    if !m.is_square() {
        return domain("Smith normal form requires a square matrix");
    }
    let n = m.rows();
    let mut a = m.clone();
    let mut u = IntMatrix::identity(n);
    let mut v = IntMatrix::identity(n);

    for t in 0..n {
        // pivot: smallest nonzero absolute value in the trailing block
        let Some((pr, pc)) = min_abs_entry(&a, t) else { break };
        a.swap_rows(t, pr);
        u.swap_rows(t, pr);
        a.swap_cols(t, pc);
        v.swap_cols(t, pc);
        loop {
            let mut dirty = false;
            for i in t + 1..n {
                if a[(i, t)].is_zero() {
                    continue;
                }
                let q = a[(i, t)].div_floor(&a[(t, t)]);
                add_row_multiple(&mut a, i, t, &-&q);
                add_row_multiple(&mut u, i, t, &-&q);
                if !a[(i, t)].is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..n {
                if a[(t, j)].is_zero() {
                    continue;
                }
                let q = a[(t, j)].div_floor(&a[(t, t)]);
                add_col_multiple(&mut a, j, t, &-&q);
                add_col_multiple(&mut v, j, t, &-&q);
                if !a[(t, j)].is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                // a smaller remainder exists in row or column t; move it to the pivot
                let (pr, pc) = min_abs_in_cross(&a, t);
                a.swap_rows(t, pr);
                u.swap_rows(t, pr);
                a.swap_cols(t, pc);
                v.swap_cols(t, pc);
                continue;
            }
            // row and column cleared; enforce divisibility of the remainder
            let p = a[(t, t)].clone();
            let bad = (t + 1..n).find(|&i| (t + 1..n).any(|j| !(&a[(i, j)] % &p).is_zero()));
            match bad {
                Some(i) => {
                    add_row_multiple(&mut a, t, i, &BigInt::one());
                    add_row_multiple(&mut u, t, i, &BigInt::one());
                }
                None => break,
            }
        }
        if a[(t, t)].is_negative() {
            a.negate_row(t);
            u.negate_row(t);
        }
    }

    // standard order is d_1 | d_2 | ... followed by zeros; reverse it
    let rev: Vec<usize> = (0..n).rev().collect();
    let perm = |x: &IntMatrix, rows: bool| {
        let mut out = IntMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                if rows {
                    out[(i, j)] = x[(rev[i], j)].clone();
                } else {
                    out[(i, j)] = x[(i, rev[j])].clone();
                }
            }
        }
        out
    };
    let mut u = perm(&u, true);
    let mut v = perm(&v, false);
    let mut diag: Vec<BigInt> = (0..n).rev().map(|i| a[(i, i)].clone()).collect();

    if n > 0 {
        if u.det().is_negative() {
            u.negate_row(0);
            diag[0] = -std::mem::take(&mut diag[0]);
        }
        if v.det().is_negative() {
            v.negate_col(0);
            diag[0] = -std::mem::take(&mut diag[0]);
        }
    }
    Ok(SmithForm { diag, left: u, right: v })
}

fn min_abs_entry(a: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let n = a.rows();
    let mut best: Option<(usize, usize)> = None;
    for i in t..n {
        for j in t..n {
            if a[(i, j)].is_zero() {
                continue;
            }
            if best.is_none_or(|(bi, bj)| a[(i, j)].abs() < a[(bi, bj)].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

fn min_abs_in_cross(a: &IntMatrix, t: usize) -> (usize, usize) {
    let n = a.rows();
    let mut best = (t, t);
    let cands = (t..n).map(|i| (i, t)).chain((t + 1..n).map(|j| (t, j)));
    for (i, j) in cands {
        if !a[(i, j)].is_zero() && (a[best].is_zero() || a[(i, j)].abs() < a[best].abs()) {
            best = (i, j);
        }
    }
    best
}

fn add_row_multiple(m: &mut IntMatrix, target: usize, src: usize, k: &BigInt) {
    for j in 0..m.cols() {
        let d = k * &m[(src, j)];
        m[(target, j)] += d;
    }
}

fn add_col_multiple(m: &mut IntMatrix, target: usize, src: usize, k: &BigInt) {
    for i in 0..m.rows() {
        let d = k * &m[(i, src)];
        m[(i, target)] += d;
    }
}

/// `coker(I - A)` as a divisor chain of torsion coefficients plus free rank.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct BowenFranksGroup {
    /// Invariant factors greater than one, largest first.
    pub torsion: Vec<BigInt>,
    pub free_rank: usize,
}

impl BowenFranksGroup {
    pub fn from_smith(s: &SmithForm) -> Self {
        let free_rank = s.diag.iter().filter(|d| d.is_zero()).count();
        let torsion = s.diag.iter().map(|d| d.abs()).filter(|d| *d > BigInt::one()).collect();
        BowenFranksGroup { torsion, free_rank }
    }

    pub fn is_trivial(&self) -> bool {
        self.torsion.is_empty() && self.free_rank == 0
    }

    /// Order of the group, when finite.
    pub fn order(&self) -> Option<BigInt> {
        (self.free_rank == 0).then(|| self.torsion.iter().product())
    }
}

impl fmt::Display for BowenFranksGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.torsion.iter().map(|d| format!("Z/{d}")).collect();
        parts.extend(std::iter::repeat_n("Z".to_string(), self.free_rank));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" ⊕ "))
        }
    }
}

/// Bowen-Franks group and `det(I - A)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BowenFranksReport {
    pub group: BowenFranksGroup,
    pub det: BigInt,
}

pub fn bowen_franks(a: &AdjacencyMatrix) -> Result<BowenFranksReport> {
    let ima = a.matrix().identity_minus();
    let s = smith_normal_form(&ima)?;
    Ok(BowenFranksReport { group: BowenFranksGroup::from_smith(&s), det: ima.det() })
}

/// Checks that a matrix presents a nontrivial irreducible SFT after trimming.
pub fn require_nontrivial_irreducible(a: &AdjacencyMatrix, label: &str) -> Result<AdjacencyMatrix> {
    let (t, _) = trim(a);
    if t.size() == 0 {
        return precondition(format!("{label}: empty shift after trimming"));
    }
    let report = analyze(&t)?;
    if !report.irreducible {
        return precondition(format!("{label}: matrix is reducible"));
    }
    if report.trivial {
        return precondition(format!("{label}: shift is trivial (cyclic permutation matrix)"));
    }
    Ok(t)
}

/// Franks' criterion: nontrivial irreducible SFTs are flow equivalent iff
/// their Bowen-Franks groups and `det(I - A)` agree.
pub fn flow_equivalent(a: &AdjacencyMatrix, b: &AdjacencyMatrix) -> Result<bool> {
    let a = require_nontrivial_irreducible(a, "first matrix")?;
    let b = require_nontrivial_irreducible(b, "second matrix")?;
    Ok(bowen_franks(&a)? == bowen_franks(&b)?)
}

/// A matrix `C = eX + gY` over the nonnegative part of the group ring `Z[Z_2]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupRingMatrixZ2 {
    pub x: AdjacencyMatrix,
    pub y: AdjacencyMatrix,
}

impl GroupRingMatrixZ2 {
    pub fn new(x: AdjacencyMatrix, y: AdjacencyMatrix) -> Result<Self> {
        if x.size() != y.size() {
            return domain(format!("X is {0}x{0} but Y is {1}x{1}", x.size(), y.size()));
        }
        Ok(GroupRingMatrixZ2 { x, y })
    }

    /// The underlying matrix `[[X, Y], [Y, X]]`.
    pub fn underlying(&self) -> AdjacencyMatrix {
        let (x, y) = (self.x.matrix(), self.y.matrix());
        AdjacencyMatrix::new(IntMatrix::block2(x, y, y, x)).expect("block of nonnegative matrices")
    }

    pub fn sum(&self) -> IntMatrix {
        self.x.matrix() + self.y.matrix()
    }

    pub fn difference(&self) -> IntMatrix {
        self.x.matrix() - self.y.matrix()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DetCheck {
    pub lhs: BigInt,
    pub rhs: BigInt,
    pub equal: bool,
}

/// `det(I - F)` against `det(I - (X+Y)) · det(I - (X-Y))`.
pub fn z2_det_check(z: &GroupRingMatrixZ2) -> DetCheck {
    let lhs = z.underlying().matrix().identity_minus().det();
    let rhs = z.sum().identity_minus().det() * z.difference().identity_minus().det();
    DetCheck { equal: lhs == rhs, lhs, rhs }
}

/// The pair `(Sm(I - (X+Y)), Sm(I - (X-Y)))`, in that order.
pub fn z2_invariant_pair(z: &GroupRingMatrixZ2) -> Result<(SmithForm, SmithForm)> {
    let f = z.underlying();
    let (t, _) = trim(&f);
    let report = analyze(&t)?;
    if t.size() == 0 || !report.irreducible || report.trivial {
        return precondition("underlying matrix must present a nontrivial irreducible SFT");
    }
    let d = f.matrix().identity_minus().det();
    if d.is_even() {
        return precondition(format!("odd determinant required, det(I-F) = {d}"));
    }
    Ok((
        smith_normal_form(&z.sum().identity_minus())?,
        smith_normal_form(&z.difference().identity_minus())?,
    ))
}

/// A Smith diagonal with unit entries stripped: the sign of the determinant
/// and the invariant factors above one, largest first.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct SignedChain {
    pub negative: bool,
    pub factors: Vec<BigInt>,
}

impl SignedChain {
    pub fn from_smith(s: &SmithForm) -> Self {
        let det: BigInt = s.diag.iter().product();
        SignedChain {
            negative: det.is_negative(),
            factors: s.diag.iter().map(|d| d.abs()).filter(|d| *d > BigInt::one()).collect(),
        }
    }

    pub fn product(&self) -> BigInt {
        let p: BigInt = self.factors.iter().product();
        if self.negative {
            -p
        } else {
            p
        }
    }
}

impl fmt::Display for SignedChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.negative { "-" } else { "" };
        if self.factors.is_empty() {
            return write!(f, "({sign}1)");
        }
        let rest: Vec<String> = self.factors[1..].iter().map(ToString::to_string).collect();
        let mut s = format!("({sign}{}", self.factors[0]);
        for r in rest {
            s.push(',');
            s.push_str(&r);
        }
        write!(f, "{s})")
    }
}

/// Divisor chains `c_1, c_2, ...` with `c_{i+1} | c_i`, all `> 1`, and
/// product `n`.
pub fn divisor_chains(n: &BigInt) -> Vec<Vec<BigInt>> {
    fn rec(m: &BigInt, bound: &BigInt, divisors: &[BigInt]) -> Vec<Vec<BigInt>> {
        if m.is_one() {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for c in divisors {
            if *c > BigInt::one() && (m % c).is_zero() && (bound % c).is_zero() {
                for mut tail in rec(&(m / c), c, divisors) {
                    tail.insert(0, c.clone());
                    out.push(tail);
                }
            }
        }
        out
    }
    let n = n.abs();
    let divisors = all_divisors(&n);
    rec(&n, &n, &divisors)
}

fn all_divisors(n: &BigInt) -> Vec<BigInt> {
    let mut out = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= *n {
        if (n % &d).is_zero() {
            out.push(d.clone());
            let q = n / &d;
            if q != d {
                out.push(q);
            }
        }
        d += 1;
    }
    out.sort();
    out
}

/// Every pair of signed chains whose determinant product is `d`.
pub fn enumerate_invariant_pairs(d: &BigInt) -> Result<Vec<(SignedChain, SignedChain)>> {
    if d.is_zero() {
        return precondition("nonzero determinant required for a finite enumeration");
    }
    let abs = d.abs();
    let mut out = BTreeSet::new();
    for a in all_divisors(&abs) {
        let b = &abs / &a;
        for ca in divisor_chains(&a) {
            for cb in divisor_chains(&b) {
                for neg_a in [false, true] {
                    let neg_b = neg_a ^ d.is_negative();
                    out.insert((
                        SignedChain { negative: neg_a, factors: ca.clone() },
                        SignedChain { negative: neg_b, factors: cb.clone() },
                    ));
                }
            }
        }
    }
    Ok(out.into_iter().collect())
}

/// Coefficients of `det(I - tB)`, constant term first (Faddeev-LeVerrier).
pub fn det_one_minus_tb(b: &IntMatrix) -> Vec<BigInt> {
    let n = b.rows();
    // characteristic polynomial det(λI - B) = λ^n + c_1 λ^{n-1} + ... + c_n,
    // and det(I - tB) = 1 + c_1 t + ... + c_n t^n
    let mut coeffs = vec![BigInt::one()];
    let mut m = IntMatrix::zeros(n, n);
    for k in 1..=n {
        // M_k = B M_{k-1} + c_{k-1} I
        let mut next = b * &m;
        let c_prev = coeffs[k - 1].clone();
        for i in 0..n {
            next[(i, i)] += &c_prev;
        }
        m = next;
        let c_k = -(b * &m).trace() / BigInt::from(k);
        coeffs.push(c_k);
    }
    coeffs
}

/// Necessary condition for a free inert involution: `det(I - tB) ≡ 1 mod 2`.
pub fn inert_parity_check(b: &AdjacencyMatrix) -> bool {
    let c = det_one_minus_tb(b.matrix());
    c[0].is_odd() && c[1..].iter().all(|x| x.is_even())
}

/// Outcome of testing the periodic orbit inequality at one `n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitInequality {
    pub n: u32,
    pub orbits: BigInt,
    /// Right hand side, rendered as a reduced fraction.
    pub bound: String,
    pub holds: bool,
    pub equality: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitConditionReport {
    pub prime: u32,
    pub rows: Vec<OrbitInequality>,
}

impl OrbitConditionReport {
    /// Values of `n` at which the inequality fails; empty means pass.
    pub fn failures(&self) -> Vec<u32> {
        self.rows.iter().filter(|r| !r.holds).map(|r| r.n).collect()
    }

    pub fn equalities(&self) -> Vec<u32> {
        self.rows.iter().filter(|r| r.equality).map(|r| r.n).collect()
    }

    pub fn passes(&self) -> bool {
        self.failures().is_empty()
    }
}

/// Tests `o_n >= Σ_{k>=1} (p-1)/p^k · o_{n/p^k}` for `n <= n_max`.
pub fn kr_orbit_condition(a: &AdjacencyMatrix, p: u32, n_max: u32) -> Result<OrbitConditionReport> {
    if p < 2 || (2..p).take_while(|d| d * d <= p).any(|d| p.is_multiple_of(d)) {
        return precondition(format!("{p} is not prime"));
    }
    if n_max == 0 {
        return domain("n_max must be positive");
    }
    let report = analyze(a)?;
    if !report.mixing {
        return precondition("matrix must be mixing");
    }
    let mut counts = Vec::with_capacity(n_max as usize + 1);
    counts.push(BigInt::zero());
    for n in 1..=n_max {
        counts.push(orbit_count(a, n)?);
    }
    let pb = BigInt::from(p);
    let mut rows = Vec::new();
    for n in 1..=n_max {
        let mut bound = BigRational::zero();
        let mut pk = BigInt::from(p);
        let mut m = n;
        while m % p == 0 {
            m /= p;
            bound += BigRational::new((&pb - 1) * &counts[m as usize], pk.clone());
            pk *= &pb;
        }
        let lhs = BigRational::from_integer(counts[n as usize].clone());
        rows.push(OrbitInequality {
            n,
            orbits: counts[n as usize].clone(),
            holds: lhs >= bound,
            equality: lhs == bound,
            bound: bound.to_string(),
        });
    }
    Ok(OrbitConditionReport { prime: p, rows })
}

/// The shift with language `({0,1}^n 2)*`: a cycle on `n + 1` vertices with
/// two parallel edges on the first `n` steps and one closing edge.
pub fn build_tn(n: usize) -> Result<AdjacencyMatrix> {
    if n == 0 {
        return domain("n must be positive");
    }
    let mut m = IntMatrix::zeros(n + 1, n + 1);
    for i in 0..n {
        m[(i, i + 1)] = BigInt::from(2);
    }
    m[(n, 0)] = BigInt::one();
    AdjacencyMatrix::new(m)
}

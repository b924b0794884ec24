//! Residue-indexed sequences and subsets of `Z_v`, their periodic
//! autocorrelation and power spectrum, SDS parameters and exact SDS
//! verification.
//!
//! Sequences hold exact integers. Everything that decides membership
//! (PAF sums, difference counts) is computed in integer arithmetic; the
//! spectrum is only ever consulted through an explicit tolerance.

use std::f64::consts::PI;
use std::ops::Index;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SdsError};

/// Canonical representative of `x mod v` in `[0, v)`.
#[inline]
pub fn modulo(x: i64, v: usize) -> usize {
    x.rem_euclid(v as i64) as usize
}

pub fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// The multiplicative units of `Z_v` in ascending order.
pub fn units(v: usize) -> Vec<usize> {
    if v == 1 {
        return vec![0];
    }
    (1..v).filter(|&s| gcd(s, v) == 1).collect()
}

/// An integer-valued periodic sequence `[a_0, ..., a_{v-1}]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Sequence {
    values: Vec<i32>,
}

impl Sequence {
    pub fn new(values: Vec<i32>) -> Result<Self> {
        if values.is_empty() {
            return Err(SdsError::EmptySequence);
        }
        Ok(Self { values })
    }

    /// A ±1 sequence; any other entry is rejected.
    pub fn binary(values: Vec<i32>) -> Result<Self> {
        if let Some(&bad) = values.iter().find(|&&x| x != 1 && x != -1) {
            return Err(SdsError::AlphabetMismatch { value: bad, m: 1 });
        }
        Self::new(values)
    }

    /// The period `v`.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[i32] {
        &self.values
    }

    pub fn into_values(self) -> Vec<i32> {
        self.values
    }

    /// Row sum `A(1)`.
    pub fn sum(&self) -> i64 {
        self.values.iter().map(|&x| x as i64).sum()
    }

    pub fn is_binary(&self) -> bool {
        self.is_compressed(1)
    }

    /// True when every entry lies in `{m, m-2, ..., 2-m, -m}`.
    pub fn is_compressed(&self, m: usize) -> bool {
        let m = m as i32;
        self.values
            .iter()
            .all(|&x| x.abs() <= m && (m - x) % 2 == 0)
    }

    /// Cyclic shift: `u[i] = a[i + t]`.
    pub fn shifted(&self, t: i64) -> Self {
        let v = self.len();
        let t = modulo(t, v);
        let values = (0..v).map(|i| self.values[(i + t) % v]).collect();
        Self { values }
    }

    /// Reversal `u[i] = a[-i]`, i.e. multiplication by `-1`.
    pub fn reversed(&self) -> Self {
        self.multiplied(self.len() as i64 - 1)
    }

    /// Multiplication by `s`: the entry at position `i` moves to `s*i mod v`.
    ///
    /// `s` must be coprime to `v` for this to be a permutation of positions.
    pub fn multiplied(&self, s: i64) -> Self {
        let v = self.len();
        let s = modulo(s, v);
        debug_assert_eq!(gcd(s.max(1), v), 1, "multiplier must be a unit");
        let mut values = vec![0; v];
        for (i, &a) in self.values.iter().enumerate() {
            values[(s * i) % v] = a;
        }
        Self { values }
    }
}

impl Index<usize> for Sequence {
    type Output = i32;
    fn index(&self, i: usize) -> &i32 {
        &self.values[i]
    }
}

/// A subset of `Z_v`, stored as strictly increasing residues.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Subset {
    v: usize,
    elements: Vec<usize>,
}

impl Subset {
    /// Builds a subset from residues in `[0, v)`; input order does not matter.
    pub fn new(v: usize, elements: impl IntoIterator<Item = usize>) -> Result<Self> {
        if v == 0 {
            return Err(SdsError::InvalidParams("modulus must be positive".into()));
        }
        let mut elements: Vec<usize> = elements.into_iter().collect();
        if let Some(&bad) = elements.iter().find(|&&x| x >= v) {
            return Err(SdsError::OutOfRange {
                value: bad as i64,
                v,
            });
        }
        elements.sort_unstable();
        if let Some(w) = elements.windows(2).find(|w| w[0] == w[1]) {
            return Err(SdsError::DuplicateElement { value: w[0], v });
        }
        Ok(Self { v, elements })
    }

    /// Positions holding `-1` (or any negative entry) in `seq`.
    pub fn negative_positions(seq: &Sequence) -> Self {
        let elements = seq
            .values()
            .iter()
            .enumerate()
            .filter(|(_, &x)| x < 0)
            .map(|(i, _)| i)
            .collect();
        Self {
            v: seq.len(),
            elements,
        }
    }

    pub fn v(&self) -> usize {
        self.v
    }

    /// Block size `k`.
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn contains(&self, x: usize) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    /// `X + t`.
    pub fn translated(&self, t: i64) -> Self {
        let t = modulo(t, self.v);
        let mut elements: Vec<usize> = self.elements.iter().map(|&x| (x + t) % self.v).collect();
        elements.sort_unstable();
        Self {
            v: self.v,
            elements,
        }
    }

    /// `s * X` for a unit `s`.
    pub fn multiplied(&self, s: i64) -> Self {
        let s = modulo(s, self.v);
        let mut elements: Vec<usize> = self.elements.iter().map(|&x| (x * s) % self.v).collect();
        elements.sort_unstable();
        Self {
            v: self.v,
            elements,
        }
    }
}

/// Periodic autocorrelation values, index `s` holding `PAF(s)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PafVector(Vec<i64>);

impl PafVector {
    pub fn new(values: Vec<i64>) -> Self {
        Self(values)
    }

    pub fn v(&self) -> usize {
        self.0.len()
    }

    pub fn values(&self) -> &[i64] {
        &self.0
    }

    /// Shifts `1..=v/2`; for real sequences these determine the whole vector.
    pub fn folded(&self) -> &[i64] {
        &self.0[1..=self.0.len() / 2]
    }
}

impl Index<usize> for PafVector {
    type Output = i64;
    fn index(&self, i: usize) -> &i64 {
        &self.0[i]
    }
}

/// Power spectral density values, index `s` holding `PSD(s)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SpectrumVector(Vec<f64>);

impl SpectrumVector {
    pub fn v(&self) -> usize {
        self.0.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }
}

impl Index<usize> for SpectrumVector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

/// `PAF(s) = sum_j a_{j+s} a_j`, exactly.
pub fn paf(a: &Sequence) -> PafVector {
    PafVector(paf_of(a.values()))
}

pub(crate) fn paf_of(a: &[i32]) -> Vec<i64> {
    let v = a.len();
    (0..v)
        .map(|s| {
            let (head, tail) = a.split_at(s);
            // a_{j+s} for j in [0, v-s) is tail, for j in [v-s, v) is head
            let lo: i64 = tail.iter().zip(a).map(|(&x, &y)| (x * y) as i64).sum();
            let hi: i64 = head.iter().zip(&a[v - s..]).map(|(&x, &y)| (x * y) as i64).sum();
            lo + hi
        })
        .collect()
}

/// `omega^k` for `k in [0, v)`, `omega = exp(2 pi i / v)`.
pub fn roots_of_unity(v: usize) -> Vec<Complex64> {
    (0..v)
        .map(|k| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / v as f64))
        .collect()
}

/// `DFT(s) = sum_j a_j omega^{js}` by direct evaluation.
pub fn dft(values: &[Complex64]) -> Vec<Complex64> {
    let v = values.len();
    let roots = roots_of_unity(v);
    (0..v)
        .map(|s| {
            values
                .iter()
                .enumerate()
                .map(|(j, &a)| a * roots[(j * s) % v])
                .sum()
        })
        .collect()
}

/// DFT of an integer vector embedded in the complex numbers.
pub fn dft_integer(values: &[i64]) -> Vec<Complex64> {
    let embedded: Vec<Complex64> = values.iter().map(|&x| Complex64::new(x as f64, 0.0)).collect();
    dft(&embedded)
}

/// `PSD(s) = |DFT(s)|^2` in double precision.
pub fn psd(a: &Sequence) -> SpectrumVector {
    let values: Vec<i64> = a.values().iter().map(|&x| x as i64).collect();
    SpectrumVector(dft_integer(&values).iter().map(|z| z.norm_sqr()).collect())
}

/// `N_X(s)`: number of ordered pairs `(a, b)` in `X x X` with `a - b = s`.
pub fn subset_norm(x: &Subset) -> PafVector {
    let v = x.v();
    let mut counts = vec![0i64; v];
    for &a in x.elements() {
        for &b in x.elements() {
            counts[(a + v - b) % v] += 1;
        }
    }
    PafVector(counts)
}

/// The ±1 sequence with `-1` exactly on `X`, i.e. `A = T - 2X`.
pub fn associated_sequence(x: &Subset) -> Sequence {
    let mut values = vec![1; x.v()];
    for &i in x.elements() {
        values[i] = -1;
    }
    Sequence { values }
}

/// Validated parameters `(v; k_1, ..., k_t; lambda)` with derived `n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SdsParams {
    v: usize,
    ks: Vec<usize>,
    lambda: i64,
    n: i64,
}

impl SdsParams {
    pub fn new(v: usize, ks: Vec<usize>, lambda: i64) -> Result<Self> {
        validate_params(v, &ks, lambda)
    }

    pub fn v(&self) -> usize {
        self.v
    }

    pub fn ks(&self) -> &[usize] {
        &self.ks
    }

    /// Number of blocks.
    pub fn t(&self) -> usize {
        self.ks.len()
    }

    pub fn lambda(&self) -> i64 {
        self.lambda
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    /// PSD bound `beta = 4n` used by the PSD-test.
    pub fn psd_bound(&self) -> i64 {
        4 * self.n
    }
}

impl std::fmt::Display for SdsParams {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let ks: Vec<String> = self.ks.iter().map(|k| k.to_string()).collect();
        write!(f, "({};{};{})", self.v, ks.join(","), self.lambda)
    }
}

/// Checks `lambda (v - 1) = sum k_i (k_i - 1)` and derives `n = sum k_i - lambda`.
pub fn validate_params(v: usize, ks: &[usize], lambda: i64) -> Result<SdsParams> {
    if v < 2 {
        return Err(SdsError::InvalidParams(format!("v = {v} must be at least 2")));
    }
    if ks.is_empty() {
        return Err(SdsError::InvalidParams("at least one block size is required".into()));
    }
    if let Some(&k) = ks.iter().find(|&&k| k == 0) {
        return Err(SdsError::InvalidParams(format!("block size {k} must be at least 1")));
    }
    if let Some(&k) = ks.iter().find(|&&k| k > v) {
        return Err(SdsError::OutOfRange { value: k as i64, v });
    }
    let lhs = lambda * (v as i64 - 1);
    let rhs: i64 = ks.iter().map(|&k| (k * (k - 1)) as i64).sum();
    if lhs != rhs {
        return Err(SdsError::InfeasibleParams { lhs, rhs });
    }
    let n = ks.iter().sum::<usize>() as i64 - lambda;
    if n < 0 {
        return Err(SdsError::InvalidParams(format!("n = {n} is negative")));
    }
    Ok(SdsParams {
        v,
        ks: ks.to_vec(),
        lambda,
        n,
    })
}

/// PAF-constants `(alpha_0, alpha)` and PSD-constants `(beta_0, beta)` of a
/// complementary family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstantsPair {
    pub alpha0: i64,
    pub alpha: i64,
    pub beta0: i64,
    pub beta: i64,
}

impl ConstantsPair {
    pub fn from_paf(alpha0: i64, alpha: i64, v: usize) -> Self {
        let (beta0, beta) = paf_to_psd_constants(alpha0, alpha, v);
        Self {
            alpha0,
            alpha,
            beta0,
            beta,
        }
    }

    pub fn from_psd(beta0: i64, beta: i64, v: usize) -> Result<Self> {
        let (alpha0, alpha) = psd_to_paf_constants(beta0, beta, v)?;
        Ok(Self {
            alpha0,
            alpha,
            beta0,
            beta,
        })
    }
}

/// Constants of the associated sequences of an SDS:
/// `alpha_0 = tv`, `alpha = tv - 4n`, `beta = 4n`, and
/// `beta_0 = alpha_0 + (v-1) alpha`, the sum of the squared row sums.
pub fn sds_constants(params: &SdsParams) -> ConstantsPair {
    let tv = (params.t() * params.v()) as i64;
    ConstantsPair::from_paf(tv, tv - 4 * params.n(), params.v())
}

/// `beta_0 = alpha_0 + (v-1) alpha`, `beta = alpha_0 - alpha`.
pub fn paf_to_psd_constants(alpha0: i64, alpha: i64, v: usize) -> (i64, i64) {
    (alpha0 + (v as i64 - 1) * alpha, alpha0 - alpha)
}

/// Inverse of [`paf_to_psd_constants`]; fails unless `v | beta_0 - beta`.
pub fn psd_to_paf_constants(beta0: i64, beta: i64, v: usize) -> Result<(i64, i64)> {
    let numerator = beta0 - beta;
    if numerator % v as i64 != 0 {
        return Err(SdsError::InverseNotIntegral { numerator, v });
    }
    let alpha = numerator / v as i64;
    Ok((alpha + beta, alpha))
}

/// Returns `(alpha_0, alpha)` when the PAFs of `seqs` sum to a constant at
/// every nonzero shift.
pub fn complementary_constants(seqs: &[Sequence]) -> Option<(i64, i64)> {
    let v = seqs.first()?.len();
    if seqs.iter().any(|s| s.len() != v) {
        return None;
    }
    let mut total = vec![0i64; v];
    for s in seqs {
        for (acc, x) in total.iter_mut().zip(paf(s).values()) {
            *acc += x;
        }
    }
    let alpha = if v > 1 { total[1] } else { 0 };
    total[1..].iter().all(|&x| x == alpha).then_some((total[0], alpha))
}

/// Exact SDS check: every nonzero difference is covered exactly `lambda`
/// times across the blocks.
pub fn verify_sds(params: &SdsParams, blocks: &[Subset]) -> Result<bool> {
    if blocks.len() != params.t() {
        return Err(SdsError::BlockCountMismatch {
            expected: params.t(),
            found: blocks.len(),
        });
    }
    for (i, (block, &k)) in blocks.iter().zip(params.ks()).enumerate() {
        if block.v() != params.v() {
            return Err(SdsError::InvalidParams(format!(
                "block {i} lives in Z_{}, parameters need Z_{}",
                block.v(),
                params.v()
            )));
        }
        if block.len() != k {
            return Err(SdsError::BlockSizeMismatch {
                block: i,
                expected: k,
                found: block.len(),
            });
        }
    }
    let mut total = vec![0i64; params.v()];
    for block in blocks {
        for (acc, x) in total.iter_mut().zip(subset_norm(block).values()) {
            *acc += x;
        }
    }
    Ok(total[1..].iter().all(|&x| x == params.lambda()))
}

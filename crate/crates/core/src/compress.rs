//! `m`-compression of periodic sequences.
//!
//! A sequence of length `v = d*m` compresses to the length-`d` sequence of
//! sums over the residue classes `j, j+d, ..., j+(m-1)d`. Compression keeps
//! complementary families complementary, which lets a search run on the
//! much smaller compressed alphabet `{m, m-2, ..., -m}` first.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Result, SdsError};
use crate::seqcore::{SdsParams, Sequence};

/// Lengths involved in one compression: `v = d * m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CompressionSpec {
    pub v: usize,
    pub d: usize,
    pub m: usize,
}

impl CompressionSpec {
    pub fn new(v: usize, d: usize) -> Result<Self> {
        if d == 0 || !v.is_multiple_of(d) {
            return Err(SdsError::NotDivisible { v, d });
        }
        let m = v / d;
        if m < 2 {
            return Err(SdsError::UnsupportedFactor(m));
        }
        Ok(Self { v, d, m })
    }

    pub fn from_factor(v: usize, m: usize) -> Result<Self> {
        if m == 0 || !v.is_multiple_of(m) {
            return Err(SdsError::NotDivisible { v, d: m });
        }
        Self::new(v, v / m)
    }
}

/// Value multiset of a sequence: value -> count.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Content {
    entries: BTreeMap<i32, usize>,
}

impl Content {
    /// Repeated values are merged; zero counts are dropped.
    pub fn new(entries: impl IntoIterator<Item = (i32, usize)>) -> Self {
        let mut map = BTreeMap::new();
        for (value, count) in entries {
            *map.entry(value).or_insert(0) += count;
        }
        map.retain(|_, c| *c > 0);
        Self { entries: map }
    }

    /// Like [`Content::new`] but every value must lie in the `m`-compressed
    /// alphabet.
    pub fn for_factor(m: usize, entries: impl IntoIterator<Item = (i32, usize)>) -> Result<Self> {
        let content = Self::new(entries);
        if let Some(value) = content.values().find(|&x| !in_alphabet(x, m)) {
            return Err(SdsError::AlphabetMismatch { value, m });
        }
        Ok(content)
    }

    pub fn of(seq: &Sequence) -> Self {
        Self::new(seq.values().iter().map(|&x| (x, 1)))
    }

    /// Total length `d`.
    pub fn len(&self) -> usize {
        self.entries.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn count(&self, value: i32) -> usize {
        self.entries.get(&value).copied().unwrap_or(0)
    }

    /// Distinct values in ascending order.
    pub fn values(&self) -> impl Iterator<Item = i32> + '_ {
        self.entries.keys().copied()
    }

    /// `(value, count)` pairs in ascending value order.
    pub fn entries(&self) -> impl Iterator<Item = (i32, usize)> + '_ {
        self.entries.iter().map(|(&v, &c)| (v, c))
    }

    /// Row sum of any sequence with this content.
    pub fn sum(&self) -> i64 {
        self.entries().map(|(v, c)| v as i64 * c as i64).sum()
    }

    pub fn sum_of_squares(&self) -> i64 {
        self.entries().map(|(v, c)| (v as i64).pow(2) * c as i64).sum()
    }

    pub fn fits_factor(&self, m: usize) -> bool {
        self.values().all(|x| in_alphabet(x, m))
    }

    /// Number of distinct arrangements (multinomial coefficient).
    pub fn arrangements(&self) -> u128 {
        let mut total: u128 = 1;
        let mut placed: u128 = 0;
        for (_, c) in self.entries() {
            for i in 1..=c as u128 {
                placed += 1;
                total = total * placed / i;
            }
        }
        total
    }
}

impl fmt::Display for Content {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries().map(|(v, c)| format!("{v}:{c}")).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for Content {
    type Err = SdsError;

    /// `value:count` pairs separated by commas, e.g. `-2:3,0:6,2:14`.
    fn from_str(s: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (value, count) = part
                .split_once(':')
                .ok_or_else(|| SdsError::Parse(format!("expected value:count, got {part:?}")))?;
            let value: i32 = value
                .trim()
                .parse()
                .map_err(|_| SdsError::Parse(format!("bad value in {part:?}")))?;
            let count: usize = count
                .trim()
                .parse()
                .map_err(|_| SdsError::Parse(format!("bad count in {part:?}")))?;
            entries.push((value, count));
        }
        let content = Content::new(entries);
        if content.is_empty() {
            return Err(SdsError::Parse("content must describe at least one entry".into()));
        }
        Ok(content)
    }
}

fn in_alphabet(x: i32, m: usize) -> bool {
    let m = m as i32;
    x.abs() <= m && (m - x) % 2 == 0
}

/// `a^{(d)}_j = a_j + a_{j+d} + ... + a_{j+(m-1)d}`.
///
/// `d == v` is allowed and returns a copy of `a`.
pub fn compress(a: &Sequence, d: usize) -> Result<Sequence> {
    let v = a.len();
    if d == 0 || !v.is_multiple_of(d) {
        return Err(SdsError::NotDivisible { v, d });
    }
    let mut out = vec![0i32; d];
    for (i, &x) in a.values().iter().enumerate() {
        out[i % d] += x;
    }
    Sequence::new(out)
}

/// PAF-constants after `m`-compression of a complementary family with
/// constants `(alpha0, alpha)`: `(alpha0 + (m-1) alpha, m alpha)`.
pub fn compressed_constants(alpha0: i64, alpha: i64, m: usize) -> (i64, i64) {
    let m = m as i64;
    (alpha0 + (m - 1) * alpha, m * alpha)
}

/// Compressed PAF-constants of an SDS family:
/// `(m(tv - 4n) + 4n, m(tv - 4n))`.
pub fn sds_compressed_constants(params: &SdsParams, m: usize) -> Result<(i64, i64)> {
    if m == 0 || !params.v().is_multiple_of(m) {
        return Err(SdsError::NotDivisible {
            v: params.v(),
            d: m,
        });
    }
    let tv = (params.t() * params.v()) as i64;
    let n = params.n();
    let m = m as i64;
    Ok((m * (tv - 4 * n) + 4 * n, m * (tv - 4 * n)))
}

/// How many compressed entries take each absolute value.
///
/// For `m = 2` the pair is `(nu_0, nu_2)`, for `m = 3` it is `(nu_1, nu_3)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Multiplicities {
    pub m: usize,
    /// Entries with absolute value `m - 2` (`0` for `m = 2`, `1` for `m = 3`).
    pub small: i64,
    /// Entries with absolute value `m`.
    pub large: i64,
}

impl Multiplicities {
    /// Counts the absolute values actually present in a compressed family.
    pub fn observe(seqs: &[Sequence], m: usize) -> Result<Self> {
        check_factor(m)?;
        let (lo, hi) = (m as i32 - 2, m as i32);
        let mut small = 0;
        let mut large = 0;
        for &x in seqs.iter().flat_map(|s| s.values()) {
            match x.abs() {
                a if a == lo => small += 1,
                a if a == hi => large += 1,
                _ => return Err(SdsError::AlphabetMismatch { value: x, m }),
            }
        }
        Ok(Self { m, small, large })
    }
}

fn check_factor(m: usize) -> Result<()> {
    if m == 2 || m == 3 {
        Ok(())
    } else {
        Err(SdsError::UnsupportedFactor(m))
    }
}

/// Predicted multiplicities for the compressed associated sequences of an
/// SDS: the small absolute value occurs `n` times and the large one `td - n`
/// times.
pub fn compression_multiplicities(params: &SdsParams, m: usize, d: usize) -> Result<Multiplicities> {
    check_factor(m)?;
    if d * m != params.v() {
        return Err(SdsError::NotDivisible { v: params.v(), d });
    }
    let td = (params.t() * d) as i64;
    Ok(Multiplicities {
        m,
        small: params.n(),
        large: td - params.n(),
    })
}

/// One way of distributing compressed values over the two sequences.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContentCase {
    pub a: Content,
    pub b: Content,
}

/// All contents of length `d` over the `m`-compressed alphabet with the
/// given row sum.
fn contents_with_sum(m: usize, d: usize, row_sum: i64) -> Vec<Content> {
    // alphabet in ascending order: -m, 2-m, ..., m
    let alphabet: Vec<i32> = (0..=m).map(|j| 2 * j as i32 - m as i32).collect();
    let mut out = Vec::new();
    let mut counts = vec![0usize; alphabet.len()];
    fn rec(
        idx: usize,
        left: usize,
        sum: i64,
        alphabet: &[i32],
        counts: &mut Vec<usize>,
        target: i64,
        out: &mut Vec<Content>,
    ) {
        if idx + 1 == alphabet.len() {
            counts[idx] = left;
            if sum + alphabet[idx] as i64 * left as i64 == target {
                out.push(Content::new(alphabet.iter().copied().zip(counts.iter().copied())));
            }
            return;
        }
        for c in 0..=left {
            counts[idx] = c;
            rec(
                idx + 1,
                left - c,
                sum + alphabet[idx] as i64 * c as i64,
                alphabet,
                counts,
                target,
                out,
            );
        }
    }
    rec(0, d, 0, &alphabet, &mut counts, row_sum, &mut out);
    out
}

/// Count vector ordered from the most negative value up, used for sorting.
fn ascending_counts(content: &Content, m: usize) -> Vec<usize> {
    (0..=m).map(|j| content.count(2 * j as i32 - m as i32)).collect()
}

/// Splits a two-block compressed search into content cases.
///
/// Each case fixes the contents of `A^{(d)}` and `B^{(d)}`: row sums are
/// `v - 2r` and `v - 2s`, the small-absolute-value entries total `n`, and
/// the squares total `alpha_0^{(d)}`. Cases are ordered by `B`'s counts from
/// the most negative value upward, then by `A`'s.
pub fn case_split(params: &SdsParams, m: usize, d: usize) -> Result<Vec<ContentCase>> {
    if params.t() != 2 {
        return Err(SdsError::Unsupported(format!(
            "content cases need two blocks, got {}",
            params.t()
        )));
    }
    check_factor(m)?;
    if d * m != params.v() {
        return Err(SdsError::NotDivisible { v: params.v(), d });
    }
    let v = params.v() as i64;
    let (r, s) = (params.ks()[0] as i64, params.ks()[1] as i64);
    let (alpha0_d, _) = sds_compressed_constants(params, m)?;
    let small = m as i32 - 2;
    let small_count = |c: &Content| -> i64 {
        if small == 0 {
            c.count(0) as i64
        } else {
            (c.count(small) + c.count(-small)) as i64
        }
    };

    let side_a = contents_with_sum(m, d, v - 2 * r);
    let side_b = contents_with_sum(m, d, v - 2 * s);
    let mut cases = Vec::new();
    for a in &side_a {
        for b in &side_b {
            if small_count(a) + small_count(b) == params.n()
                && a.sum_of_squares() + b.sum_of_squares() == alpha0_d
            {
                cases.push(ContentCase {
                    a: a.clone(),
                    b: b.clone(),
                });
            }
        }
    }
    cases.sort_by_key(|c| (ascending_counts(&c.b, m), ascending_counts(&c.a, m)));
    Ok(cases)
}

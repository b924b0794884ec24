use std::f64::consts::PI;

use crate::error::{Result, SdsError};
use crate::seqcore::{subset_norm, SdsParams, Sequence, Subset};

/// Absolute slack added to the PSD bound. Keeping the boundary means a
/// sequence whose exact spectrum meets the bound is never discarded.
pub const PSD_TOLERANCE: f64 = 1e-6;

/// Precomputed PSD-test for one length and bound.
#[derive(Clone, Debug)]
pub struct PsdTest {
    d: usize,
    limit: f64,
    cos: Vec<f64>,
    sin: Vec<f64>,
}

impl PsdTest {
    pub fn new(d: usize, beta: i64, tol: f64) -> Self {
        assert!(tol >= 0.0, "tolerance must be nonnegative");
        let angle = |k: usize| 2.0 * PI * k as f64 / d as f64;
        Self {
            d,
            limit: beta as f64 + tol,
            cos: (0..d).map(|k| angle(k).cos()).collect(),
            sin: (0..d).map(|k| angle(k).sin()).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.d
    }

    pub fn is_empty(&self) -> bool {
        self.d == 0
    }

    /// True iff `PSD(s) <= beta + tol` for every `s` in `[1, d)`.
    ///
    /// Entries are real, so `PSD(d - s) = PSD(s)` and shifts up to `d/2`
    /// suffice.
    pub fn passes(&self, values: &[i32]) -> bool {
        debug_assert_eq!(values.len(), self.d);
        self.passes_by(|j| values[j] as f64)
    }

    /// Same test on a symbol word with a symbol-to-value table.
    pub fn passes_word(&self, word: &[u8], symbol_values: &[f64]) -> bool {
        debug_assert_eq!(word.len(), self.d);
        self.passes_by(|j| symbol_values[word[j] as usize])
    }

    #[inline]
    fn passes_by(&self, value: impl Fn(usize) -> f64) -> bool {
        let d = self.d;
        for s in 1..=d / 2 {
            let mut re = 0.0;
            let mut im = 0.0;
            let mut k = 0;
            for j in 0..d {
                let x = value(j);
                if x != 0.0 {
                    re += x * self.cos[k];
                    im += x * self.sin[k];
                }
                k += s;
                if k >= d {
                    k -= d;
                }
            }
            if re * re + im * im > self.limit {
                return false;
            }
        }
        true
    }
}

/// Keeps the sequences that pass the PSD-test with bound `beta`.
///
/// Sequences of differing lengths are handled, each against its own table.
pub fn psd_filter<I>(stream: I, beta: i64, tol: f64) -> impl Iterator<Item = Sequence>
where
    I: IntoIterator<Item = Sequence>,
{
    let mut test: Option<PsdTest> = None;
    stream.into_iter().filter(move |a| {
        let t = match &test {
            Some(t) if t.len() == a.len() => t,
            _ => test.insert(PsdTest::new(a.len(), beta, tol)),
        };
        t.passes(a.values())
    })
}

/// PSD-test restated on the difference counts of a block:
/// `sum_{j=1}^{v-1} N_X(j) cos(2 pi j s / v) <= n - k_r` for all `s != 0`.
///
/// The tolerance is `tol / 4`, matching `tol` on the associated sequence.
pub fn subset_psd_test(x: &Subset, params: &SdsParams, tol: f64) -> Result<bool> {
    let k = x.len();
    if !params.ks().contains(&k) {
        let expected = params.ks()[0];
        return Err(SdsError::BlockSizeMismatch {
            block: 0,
            expected,
            found: k,
        });
    }
    if x.v() != params.v() {
        return Err(SdsError::InvalidParams(format!(
            "block lives in Z_{}, parameters need Z_{}",
            x.v(),
            params.v()
        )));
    }
    let v = params.v();
    let norm = subset_norm(x);
    let bound = (params.n() - k as i64) as f64 + tol / 4.0;
    for s in 1..v {
        let total: f64 = (1..v)
            .map(|j| norm[j] as f64 * (2.0 * PI * ((j * s) % v) as f64 / v as f64).cos())
            .sum();
        if total > bound {
            return Ok(false);
        }
    }
    Ok(true)
}

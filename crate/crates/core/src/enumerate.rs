//! Fixed-content necklaces, bracelets and charmed bracelets.
//!
//! Words are generated as prenecklaces in lexicographic order with per-symbol
//! bookkeeping, so every emitted word is already the least rotation of
//! itself. Bracelet and charmed-bracelet streams then keep a necklace only
//! when no reversed or multiplied rotation is smaller.
//!
//! The alphabet is ordered numerically, so canonical representatives start
//! with the most negative value.

use serde::{Deserialize, Serialize};

use crate::compress::Content;
use crate::seqcore::{units, Sequence};

/// Which symmetry group defines the equivalence classes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EquivMode {
    /// Cyclic shifts.
    Necklace,
    /// Shifts and reversal.
    Bracelet,
    /// Shifts and multiplication of positions by every unit.
    Charmed,
}

impl EquivMode {
    /// Position multipliers of the group, always including 1.
    pub fn multipliers(self, d: usize) -> Vec<usize> {
        match self {
            EquivMode::Necklace => vec![1 % d],
            EquivMode::Bracelet if d <= 2 => vec![1 % d],
            EquivMode::Bracelet => vec![1, d - 1],
            EquivMode::Charmed => units(d),
        }
    }
}

impl std::str::FromStr for EquivMode {
    type Err = crate::SdsError;

    fn from_str(s: &str) -> crate::Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "necklace" => Ok(Self::Necklace),
            "bracelet" => Ok(Self::Bracelet),
            "charmed" => Ok(Self::Charmed),
            other => Err(crate::SdsError::Parse(format!("unknown mode {other:?}"))),
        }
    }
}

/// Lexicographically least member of the orbit of `a`, by full expansion.
pub fn orbit_canonical(a: &Sequence, mode: EquivMode) -> Sequence {
    let d = a.len();
    let values = a.values();
    let mut best = values.to_vec();
    let mut candidate = vec![0; d];
    for s in mode.multipliers(d) {
        for t in 0..d {
            for (i, c) in candidate.iter_mut().enumerate() {
                *c = values[(s * i + t) % d];
            }
            if candidate < best {
                best.copy_from_slice(&candidate);
            }
        }
    }
    Sequence::new(best).expect("orbit of a non-empty sequence")
}

#[derive(Clone, Debug)]
struct Frame {
    /// Period of the prefix before this position is filled.
    period: usize,
    /// Next symbol to try here.
    next: u8,
    placed: bool,
}

/// Depth-first walk over fixed-content prenecklaces, stopping at necklaces.
#[derive(Clone, Debug)]
struct NecklaceWalk {
    n: usize,
    word: Vec<u8>,
    remaining: Vec<usize>,
    base: usize,
    frames: Vec<Frame>,
    /// Set for the degenerate case where the prefix is already complete.
    pending_full: bool,
}

impl NecklaceWalk {
    fn from_prefix(counts: &[usize], prefix: &[u8], period: usize) -> Self {
        let n: usize = counts.iter().sum();
        let mut remaining = counts.to_vec();
        for &c in prefix {
            remaining[c as usize] -= 1;
        }
        let mut word = vec![0u8; n];
        word[..prefix.len()].copy_from_slice(prefix);
        let base = prefix.len();
        let mut frames = Vec::with_capacity(n);
        let pending_full = base == n && n.is_multiple_of(period);
        if base < n {
            frames.push(Frame {
                period,
                next: word[base - period],
                placed: false,
            });
        }
        Self {
            n,
            word,
            remaining,
            base,
            frames,
            pending_full,
        }
    }

    fn new(counts: &[usize]) -> Self {
        Self::from_prefix(counts, &[0], 1)
    }

    /// Moves to the next necklace; false once exhausted.
    fn advance(&mut self) -> bool {
        if self.pending_full {
            self.pending_full = false;
            return true;
        }
        let k = self.remaining.len() as u8;
        loop {
            let depth = self.frames.len();
            let Some(frame) = self.frames.last_mut() else {
                return false;
            };
            let i = self.base + depth - 1;
            if frame.placed {
                self.remaining[self.word[i] as usize] += 1;
                frame.placed = false;
            }
            let mut j = frame.next;
            while j < k && self.remaining[j as usize] == 0 {
                j += 1;
            }
            if j >= k {
                self.frames.pop();
                continue;
            }
            frame.next = j + 1;
            frame.placed = true;
            self.remaining[j as usize] -= 1;
            self.word[i] = j;
            let period = if j == self.word[i - frame.period] {
                frame.period
            } else {
                i + 1
            };
            if i + 1 == self.n {
                if self.n.is_multiple_of(period) {
                    return true;
                }
                continue;
            }
            self.frames.push(Frame {
                period,
                next: self.word[i + 1 - period],
                placed: false,
            });
        }
    }

    fn word(&self) -> &[u8] {
        &self.word
    }
}

/// Rejects necklaces that are not least in their bracelet or charmed orbit.
#[derive(Clone, Debug)]
pub struct OrbitFilter {
    d: usize,
    /// `tables[k][i] = s_k * i mod d` for each non-identity multiplier.
    tables: Vec<Vec<u32>>,
}

impl OrbitFilter {
    pub fn new(d: usize, mode: EquivMode) -> Self {
        assert!(d <= 256, "words longer than 256 are not supported");
        let tables = mode
            .multipliers(d)
            .into_iter()
            .filter(|&s| s != 1 % d)
            .map(|s| (0..d).map(|i| ((s * i) % d) as u32).collect())
            .collect();
        Self { d, tables }
    }

    /// `word` must already be the least of its rotations.
    pub fn is_canonical(&self, word: &[u8]) -> bool {
        let d = self.d;
        debug_assert_eq!(word.len(), d);
        if self.tables.is_empty() {
            return true;
        }
        let first = word[0];
        let mut starts = [0u32; 256];
        let mut n_starts = 0;
        for (t, &c) in word.iter().enumerate() {
            if c == first && n_starts < starts.len() {
                starts[n_starts] = t as u32;
                n_starts += 1;
            }
        }
        let starts = &starts[..n_starts];
        let d32 = d as u32;
        for table in &self.tables {
            for &t in starts {
                // compare u[i] = word[s*i + t] with word[i]; u[0] == word[0]
                for i in 1..d {
                    let mut idx = table[i] + t;
                    if idx >= d32 {
                        idx -= d32;
                    }
                    let u = word[idx as usize];
                    let w = word[i];
                    if u != w {
                        if u < w {
                            return false;
                        }
                        break;
                    }
                }
            }
        }
        true
    }
}

/// Lazy stream of canonical representatives with a fixed content.
#[derive(Clone, Debug)]
pub struct ClassStream {
    walk: NecklaceWalk,
    filter: OrbitFilter,
    symbols: Vec<i32>,
    mode: EquivMode,
}

impl ClassStream {
    pub fn new(content: &Content, mode: EquivMode) -> Self {
        let (symbols, counts) = symbol_table(content);
        Self {
            walk: NecklaceWalk::new(&counts),
            filter: OrbitFilter::new(content.len(), mode),
            symbols,
            mode,
        }
    }

    /// Splits the stream into independent streams over disjoint prefixes.
    ///
    /// The union of the parts is exactly the unpartitioned stream. The
    /// prefix length grows until there are at least `min_parts` parts or
    /// the prefixes reach full length.
    pub fn partition(content: &Content, mode: EquivMode, min_parts: usize) -> Vec<Self> {
        let (symbols, counts) = symbol_table(content);
        let n = content.len();
        let filter = OrbitFilter::new(n, mode);
        let mut len = 1;
        let mut prefixes = prenecklace_prefixes(&counts, len);
        while prefixes.len() < min_parts && len + 1 < n {
            len += 1;
            prefixes = prenecklace_prefixes(&counts, len);
        }
        prefixes
            .into_iter()
            .map(|(prefix, period)| Self {
                walk: NecklaceWalk::from_prefix(&counts, &prefix, period),
                filter: filter.clone(),
                symbols: symbols.clone(),
                mode,
            })
            .collect()
    }

    pub fn mode(&self) -> EquivMode {
        self.mode
    }

    /// Values of the symbols `0, 1, ...` used by [`ClassStream::next_word`].
    pub fn symbol_values(&self) -> &[i32] {
        &self.symbols
    }

    /// Next representative as a word over symbol indices.
    pub fn next_word(&mut self) -> Option<&[u8]> {
        loop {
            if !self.walk.advance() {
                return None;
            }
            if self.filter.is_canonical(self.walk.word()) {
                return Some(self.walk.word());
            }
        }
    }

    /// Counts the remaining representatives without materialising them.
    pub fn count_remaining(&mut self) -> u64 {
        let mut count = 0;
        while self.next_word().is_some() {
            count += 1;
        }
        count
    }

    pub fn to_sequence(&self, word: &[u8]) -> Sequence {
        Sequence::new(word.iter().map(|&c| self.symbols[c as usize]).collect())
            .expect("non-empty word")
    }
}

impl Iterator for ClassStream {
    type Item = Sequence;

    fn next(&mut self) -> Option<Sequence> {
        let symbols = self.symbols.clone();
        self.next_word()
            .map(|w| Sequence::new(w.iter().map(|&c| symbols[c as usize]).collect()).unwrap())
    }
}

fn symbol_table(content: &Content) -> (Vec<i32>, Vec<usize>) {
    assert!(!content.is_empty(), "content must have positive length");
    content.entries().unzip()
}

/// All prenecklace prefixes of length `len` that fit the counts, with their
/// periods.
fn prenecklace_prefixes(counts: &[usize], len: usize) -> Vec<(Vec<u8>, usize)> {
    fn rec(
        word: &mut Vec<u8>,
        period: usize,
        remaining: &mut [usize],
        len: usize,
        out: &mut Vec<(Vec<u8>, usize)>,
    ) {
        let i = word.len();
        if i == len {
            out.push((word.clone(), period));
            return;
        }
        for j in word[i - period]..remaining.len() as u8 {
            if remaining[j as usize] == 0 {
                continue;
            }
            remaining[j as usize] -= 1;
            let p = if j == word[i - period] { period } else { i + 1 };
            word.push(j);
            rec(word, p, remaining, len, out);
            word.pop();
            remaining[j as usize] += 1;
        }
    }
    let mut remaining = counts.to_vec();
    remaining[0] -= 1;
    let mut out = Vec::new();
    rec(&mut vec![0u8], 1, &mut remaining, len, &mut out);
    out
}

/// Necklace representatives with the given content.
pub fn necklaces(content: &Content) -> ClassStream {
    ClassStream::new(content, EquivMode::Necklace)
}

/// Bracelet representatives with the given content.
pub fn bracelets(content: &Content) -> ClassStream {
    ClassStream::new(content, EquivMode::Bracelet)
}

/// Charmed-bracelet representatives with the given content.
pub fn charmed_bracelets(content: &Content) -> ClassStream {
    ClassStream::new(content, EquivMode::Charmed)
}

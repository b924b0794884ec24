//! The two-block search pipeline.
//!
//! For each content case the first sequence runs over charmed-bracelet
//! representatives and the second over bracelet representatives. Both are
//! PSD-tested, grouped by PAF, matched on exact PAF sums, and every matched
//! pair is lifted back to length `v` and verified. Simultaneous
//! multiplication keeps complementarity, so choosing the first sequence up
//! to the full affine group while the second keeps only shifts and reversal
//! loses no solution.

mod lift;
mod psd;

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::compress::{case_split, compress, sds_compressed_constants, CompressionSpec, Content};
use crate::enumerate::{orbit_canonical, ClassStream, EquivMode};
use crate::error::{Result, SdsError};
use crate::seqcore::{associated_sequence, paf, units, verify_sds, PafVector, SdsParams, Sequence, Subset};

pub use lift::{for_each_preimage, lift, lift_with_factor, preimage_count, preimages, LIFT_LIMIT};
pub use psd::{psd_filter, subset_psd_test, PsdTest, PSD_TOLERANCE};

/// Which sequence of the pair a candidate set belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    A,
    B,
}

/// A candidate sequence with its PAF cached.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Candidate {
    pub seq: Sequence,
    pub paf: PafVector,
}

impl Candidate {
    pub fn new(seq: Sequence) -> Self {
        let paf = paf(&seq);
        Self { seq, paf }
    }
}

/// PSD-passing candidates for one side of one content case.
#[derive(Clone, Debug)]
pub struct CandidateSet {
    pub params: SdsParams,
    /// `None` for an uncompressed search.
    pub spec: Option<CompressionSpec>,
    pub content: Content,
    pub side: Side,
    pub candidates: Vec<Candidate>,
}

/// Sequences sharing one PAF vector, in ascending order.
#[derive(Clone, Debug)]
pub struct PafClass {
    pub paf: PafVector,
    pub members: Vec<Sequence>,
}

impl PafClass {
    pub fn representative(&self) -> &Sequence {
        &self.members[0]
    }
}

/// Groups sequences by PAF. Classes are ordered by their least member.
pub fn group_by_paf(mut seqs: Vec<Sequence>) -> Vec<PafClass> {
    seqs.sort();
    let mut slot: HashMap<PafVector, usize> = HashMap::new();
    let mut classes: Vec<PafClass> = Vec::new();
    for seq in seqs {
        let key = paf(&seq);
        match slot.get(&key) {
            Some(&i) => classes[i].members.push(seq),
            None => {
                slot.insert(key.clone(), classes.len());
                classes.push(PafClass {
                    paf: key,
                    members: vec![seq],
                });
            }
        }
    }
    classes
}

/// Keeps the least sequence of each PAF class.
pub fn dedupe_by_paf(seqs: Vec<Sequence>) -> Vec<Sequence> {
    group_by_paf(seqs)
        .into_iter()
        .map(|mut c| c.members.swap_remove(0))
        .collect()
}

/// Index pairs `(i, j)` with `paf(a_i)[s] + paf(b_j)[s] = alpha` for every
/// shift `s` in `[1, d)`.
pub fn match_indices(a: &[Candidate], b: &[Candidate], alpha: i64) -> Vec<(usize, usize)> {
    let Some(d) = a.first().map(|c| c.paf.v()) else {
        return Vec::new();
    };
    let mut index: HashMap<Vec<i64>, Vec<usize>> = HashMap::new();
    for (j, cand) in b.iter().enumerate() {
        if cand.paf.v() != d {
            continue;
        }
        let key = cand.paf.folded().iter().map(|&p| alpha - p).collect();
        index.entry(key).or_default().push(j);
    }
    let mut out = Vec::new();
    for (i, cand) in a.iter().enumerate() {
        if cand.paf.v() != d {
            continue;
        }
        if let Some(partners) = index.get(cand.paf.folded()) {
            for &j in partners {
                let exact = (1..d).all(|s| cand.paf[s] + b[j].paf[s] == alpha);
                if exact {
                    out.push((i, j));
                }
            }
        }
    }
    out
}

/// All complementary pairs across two candidate sets.
pub fn match_pairs(a: &CandidateSet, b: &CandidateSet, alpha: i64) -> Vec<(Sequence, Sequence)> {
    match_indices(&a.candidates, &b.candidates, alpha)
        .into_iter()
        .map(|(i, j)| (a.candidates[i].seq.clone(), b.candidates[j].seq.clone()))
        .collect()
}

/// Necessary condition for a binary periodic complementary pair of length
/// `v`: the row sums satisfy `x^2 + y^2 = 2v`.
pub fn diophantine_precheck(v: usize) -> bool {
    let target = 2 * v;
    (0..).take_while(|x| x * x <= target).any(|x| {
        let rest = target - x * x;
        let y = rest.isqrt();
        y * y == rest
    })
}

/// Least translate of a block, which always starts at 0 when non-empty.
fn least_translate(x: &Subset) -> Subset {
    x.elements()
        .iter()
        .map(|&e| x.translated(-(e as i64)))
        .min()
        .unwrap_or_else(|| x.clone())
}

/// Normal form of a block family under independent translation and
/// negation of each block and simultaneous multiplication by a unit: the
/// lexicographic minimum over all such images.
pub fn normal_form(blocks: &[Subset]) -> Vec<Subset> {
    let Some(v) = blocks.first().map(Subset::v) else {
        return Vec::new();
    };
    units(v)
        .into_iter()
        .map(|s| {
            let s = s as i64;
            blocks
                .iter()
                .map(|b| least_translate(&b.multiplied(s)).min(least_translate(&b.multiplied(-s))))
                .collect::<Vec<_>>()
        })
        .min()
        .expect("at least one unit")
}

/// How a two-block search enumerates candidates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Strategy {
    /// Full-length ±1 sequences.
    Direct,
    /// `m`-compressed sequences, lifted afterwards.
    Compress(usize),
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Strategy::Direct => f.write_str("direct"),
            Strategy::Compress(m) => write!(f, "compress{m}"),
        }
    }
}

impl FromStr for Strategy {
    type Err = SdsError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "direct" => Ok(Strategy::Direct),
            other => other
                .strip_prefix("compress")
                .and_then(|m| m.parse().ok())
                .map(Strategy::Compress)
                .ok_or_else(|| SdsError::Parse(format!("unknown strategy {other:?}"))),
        }
    }
}

/// Default for [`SearchOptions::enumeration_limit`].
pub const ENUMERATION_LIMIT: u128 = 10_000_000_000;

#[derive(Clone, Debug)]
pub struct SearchOptions {
    /// Worker threads for enumeration.
    pub jobs: usize,
    /// Absolute PSD tolerance.
    pub tol: f64,
    /// Per-side preimage cap when lifting.
    pub lift_limit: u128,
    /// Cap on the estimated number of necklaces walked per search.
    pub enumeration_limit: u128,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            jobs: std::thread::available_parallelism().map_or(1, |n| n.get()),
            tol: PSD_TOLERANCE,
            lift_limit: LIFT_LIMIT,
            enumeration_limit: ENUMERATION_LIMIT,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Exists,
    NotExists,
    Unknown,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Exists => "EXISTS",
            Status::NotExists => "NOT_EXISTS",
            Status::Unknown => "UNKNOWN",
        })
    }
}

/// Counts for one content case.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CaseReport {
    pub case: usize,
    pub content_a: String,
    pub content_b: String,
    pub a_enumerated: u64,
    pub a_psd_passed: u64,
    pub a_deduped: u64,
    pub b_enumerated: u64,
    pub b_psd_passed: u64,
    pub b_deduped: u64,
    /// Complementary pairs among the PAF-class representatives.
    pub matched_pairs: u64,
    /// Sequence pairs handed to lifting, after expanding PAF classes.
    pub lifted_pairs: u64,
    /// Verified full-length block pairs found by lifting.
    pub lifted_witnesses: u64,
    pub elapsed_secs: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SearchReport {
    pub params: String,
    pub strategy: String,
    pub cases: Vec<CaseReport>,
    pub notes: Vec<String>,
    pub elapsed_secs: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExistenceResult {
    pub status: Status,
    /// Witnesses in normal form, one per equivalence class, ascending.
    pub witnesses: Vec<Vec<Subset>>,
    pub report: SearchReport,
}

/// One content case of a search: what to enumerate on each side.
struct CaseInput {
    a: Content,
    b: Content,
    m: usize,
}

struct CaseOutcome {
    report: CaseReport,
    witnesses: Vec<Vec<Subset>>,
    complete: bool,
    notes: Vec<String>,
}

/// Enumerates one side and keeps the PSD-passing representatives.
fn enumerate_side(
    content: &Content,
    mode: EquivMode,
    beta: i64,
    opts: &SearchOptions,
) -> (u64, Vec<Sequence>) {
    let d = content.len();
    let parts = if opts.jobs > 1 {
        ClassStream::partition(content, mode, 8 * opts.jobs)
    } else {
        vec![ClassStream::new(content, mode)]
    };
    let results: Vec<(u64, Vec<Sequence>)> = parts
        .into_par_iter()
        .map(|mut stream| {
            let test = PsdTest::new(d, beta, opts.tol);
            let values: Vec<f64> = stream.symbol_values().iter().map(|&x| x as f64).collect();
            let mut count = 0u64;
            let mut passed = Vec::new();
            while let Some(word) = stream.next_word() {
                count += 1;
                if test.passes_word(word, &values) {
                    let word = word.to_vec();
                    passed.push(stream.to_sequence(&word));
                }
            }
            (count, passed)
        })
        .collect();
    let mut total = 0;
    let mut passed = Vec::new();
    for (count, seqs) in results {
        total += count;
        passed.extend(seqs);
    }
    passed.sort();
    (total, passed)
}

/// PSD filter, PAF grouping, matching and lifting on given candidates.
fn finish_case(
    params: &SdsParams,
    input: &CaseInput,
    a_passed: Vec<Sequence>,
    b_passed: Vec<Sequence>,
    opts: &SearchOptions,
    report: &mut CaseReport,
) -> Result<(Vec<Vec<Subset>>, bool, Vec<String>)> {
    let alpha_d = if input.m == 1 {
        (params.t() * params.v()) as i64 - 4 * params.n()
    } else {
        sds_compressed_constants(params, input.m)?.1
    };
    report.a_psd_passed = a_passed.len() as u64;
    report.b_psd_passed = b_passed.len() as u64;
    let a_classes = group_by_paf(a_passed);
    let b_classes = group_by_paf(b_passed);
    report.a_deduped = a_classes.len() as u64;
    report.b_deduped = b_classes.len() as u64;

    let reps = |classes: &[PafClass]| -> Vec<Candidate> {
        classes
            .iter()
            .map(|c| Candidate {
                seq: c.representative().clone(),
                paf: c.paf.clone(),
            })
            .collect()
    };
    let matches = match_indices(&reps(&a_classes), &reps(&b_classes), alpha_d);
    report.matched_pairs = matches.len() as u64;

    let mut witnesses = Vec::new();
    let mut complete = true;
    let mut notes = Vec::new();
    for (i, j) in matches {
        for a in &a_classes[i].members {
            for b in &b_classes[j].members {
                report.lifted_pairs += 1;
                match lift_with_factor((a, b), input.m, params, opts.lift_limit) {
                    Ok(found) => witnesses.extend(found),
                    Err(SdsError::TooLarge { size, limit }) => {
                        complete = false;
                        notes.push(format!(
                            "case {}: lifting skipped a pair with {size} preimages (limit {limit})",
                            report.case
                        ));
                    }
                    Err(e) => return Err(e),
                }
            }
        }
    }
    report.lifted_witnesses = witnesses.len() as u64;
    Ok((witnesses, complete, notes))
}

fn run_case(params: &SdsParams, index: usize, input: &CaseInput, opts: &SearchOptions) -> Result<CaseOutcome> {
    let started = Instant::now();
    let beta = params.psd_bound();
    let mut report = CaseReport {
        case: index,
        content_a: input.a.to_string(),
        content_b: input.b.to_string(),
        ..CaseReport::default()
    };
    let (a_count, a_passed) = enumerate_side(&input.a, EquivMode::Charmed, beta, opts);
    let (b_count, b_passed) = enumerate_side(&input.b, EquivMode::Bracelet, beta, opts);
    report.a_enumerated = a_count;
    report.b_enumerated = b_count;
    let (witnesses, complete, notes) = finish_case(params, input, a_passed, b_passed, opts, &mut report)?;
    report.elapsed_secs = started.elapsed().as_secs_f64();
    Ok(CaseOutcome {
        report,
        witnesses,
        complete,
        notes,
    })
}

fn check_two_blocks(params: &SdsParams) -> Result<()> {
    if params.t() == 2 {
        Ok(())
    } else {
        Err(SdsError::Unsupported(format!(
            "the search pipeline handles two blocks, got {}",
            params.t()
        )))
    }
}

fn thread_pool(jobs: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| SdsError::Unsupported(format!("cannot start worker pool: {e}")))
}

fn collect_result(
    params: &SdsParams,
    strategy: String,
    outcomes: Vec<CaseOutcome>,
    exhaustive: bool,
    started: Instant,
) -> ExistenceResult {
    let mut report = SearchReport {
        params: params.to_string(),
        strategy,
        ..SearchReport::default()
    };
    let mut classes = BTreeSet::new();
    let mut complete = exhaustive;
    for outcome in outcomes {
        complete &= outcome.complete;
        report.notes.extend(outcome.notes);
        report.cases.push(outcome.report);
        classes.extend(outcome.witnesses.iter().map(|w| normal_form(w)));
    }
    report.elapsed_secs = started.elapsed().as_secs_f64();
    let status = if !classes.is_empty() {
        Status::Exists
    } else if complete {
        Status::NotExists
    } else {
        Status::Unknown
    };
    ExistenceResult {
        status,
        witnesses: classes.into_iter().collect(),
        report,
    }
}

/// Decides existence of a two-block SDS by exhaustive search.
///
/// `Direct` runs the pipeline on full-length ±1 sequences; `Compress(m)`
/// splits into content cases over the `m`-compressed alphabet and lifts the
/// matches. `NotExists` is returned only when every case ran to completion
/// without a witness.
pub fn decide_two_block(params: &SdsParams, strategy: Strategy, opts: &SearchOptions) -> Result<ExistenceResult> {
    check_two_blocks(params)?;
    let started = Instant::now();
    let v = params.v();
    let (r, s) = (params.ks()[0], params.ks()[1]);
    let inputs: Vec<CaseInput> = match strategy {
        Strategy::Direct => vec![CaseInput {
            a: Content::new([(-1, r), (1, v - r)]),
            b: Content::new([(-1, s), (1, v - s)]),
            m: 1,
        }],
        Strategy::Compress(m) => {
            let spec = CompressionSpec::from_factor(v, m)?;
            case_split(params, m, spec.d)?
                .into_iter()
                .map(|c| CaseInput { a: c.a, b: c.b, m })
                .collect()
        }
    };
    let work = inputs
        .iter()
        .map(|c| (c.a.arrangements() + c.b.arrangements()) / c.a.len() as u128)
        .sum::<u128>();
    if work > opts.enumeration_limit {
        return Err(SdsError::TooLarge {
            size: work,
            limit: opts.enumeration_limit,
        });
    }
    let pool = thread_pool(opts.jobs)?;
    let outcomes = pool.install(|| {
        inputs
            .iter()
            .enumerate()
            .map(|(i, input)| run_case(params, i + 1, input, opts))
            .collect::<Result<Vec<_>>>()
    })?;
    let mut result = collect_result(params, strategy.to_string(), outcomes, true, started);
    if result.report.cases.is_empty() {
        result
            .report
            .notes
            .push("no content case satisfies the compression constraints".into());
    }
    Ok(result)
}

/// Least image of `a` under `i -> s*i + t`, with the multiplier used.
fn charmed_canonical_with_multiplier(a: &Sequence) -> (Sequence, usize) {
    let d = a.len();
    let values = a.values();
    let mut best: Option<(Vec<i32>, usize)> = None;
    for s in EquivMode::Charmed.multipliers(d) {
        for t in 0..d {
            let image: Vec<i32> = (0..d).map(|i| values[(s * i + t) % d]).collect();
            if best.as_ref().is_none_or(|(b, _)| image < *b) {
                best = Some((image, s));
            }
        }
    }
    let (values, s) = best.expect("non-empty sequence");
    (Sequence::new(values).expect("non-empty"), s)
}

/// Runs the matching and lifting stages on candidates derived from known
/// witnesses instead of a full enumeration.
///
/// Each witness is compressed, the first sequence is brought to its
/// charmed-bracelet representative and the second is multiplied by the same
/// unit and brought to its bracelet representative. The result is `Exists`
/// when lifting recovers witnesses and `Unknown` otherwise; it never claims
/// nonexistence.
pub fn decide_seeded(
    params: &SdsParams,
    m: usize,
    seeds: &[Vec<Subset>],
    opts: &SearchOptions,
) -> Result<ExistenceResult> {
    check_two_blocks(params)?;
    let started = Instant::now();
    let spec = CompressionSpec::from_factor(params.v(), m)?;
    let test = PsdTest::new(spec.d, params.psd_bound(), opts.tol);
    let mut by_case: Vec<(Content, Content, Vec<Sequence>, Vec<Sequence>)> = Vec::new();
    for blocks in seeds {
        if blocks.len() != 2 {
            return Err(SdsError::BlockCountMismatch {
                expected: 2,
                found: blocks.len(),
            });
        }
        let a = compress(&associated_sequence(&blocks[0]), spec.d)?;
        let b = compress(&associated_sequence(&blocks[1]), spec.d)?;
        let (a, s) = charmed_canonical_with_multiplier(&a);
        let d = spec.d;
        let b = Sequence::new((0..d).map(|i| b[(s * i) % d]).collect())?;
        let b = orbit_canonical(&b, EquivMode::Bracelet);
        let (ca, cb) = (Content::of(&a), Content::of(&b));
        let slot = match by_case.iter().position(|(x, y, _, _)| *x == ca && *y == cb) {
            Some(i) => i,
            None => {
                by_case.push((ca, cb, Vec::new(), Vec::new()));
                by_case.len() - 1
            }
        };
        by_case[slot].2.push(a);
        by_case[slot].3.push(b);
    }
    let mut outcomes = Vec::new();
    for (i, (ca, cb, a_seqs, b_seqs)) in by_case.into_iter().enumerate() {
        let case_start = Instant::now();
        let input = CaseInput { a: ca, b: cb, m };
        let mut report = CaseReport {
            case: i + 1,
            content_a: input.a.to_string(),
            content_b: input.b.to_string(),
            ..CaseReport::default()
        };
        let dedup = |mut v: Vec<Sequence>| {
            v.sort();
            v.dedup();
            v
        };
        let (a_seqs, b_seqs) = (dedup(a_seqs), dedup(b_seqs));
        report.a_enumerated = a_seqs.len() as u64;
        report.b_enumerated = b_seqs.len() as u64;
        let a_passed = a_seqs.into_iter().filter(|x| test.passes(x.values())).collect();
        let b_passed = b_seqs.into_iter().filter(|x| test.passes(x.values())).collect();
        let (witnesses, complete, notes) = finish_case(params, &input, a_passed, b_passed, opts, &mut report)?;
        report.elapsed_secs = case_start.elapsed().as_secs_f64();
        outcomes.push(CaseOutcome {
            report,
            witnesses,
            complete,
            notes,
        });
    }
    let mut result = collect_result(params, format!("seeded-compress{m}"), outcomes, false, started);
    result
        .report
        .notes
        .push(format!("candidates seeded from {} known witnesses", seeds.len()));
    Ok(result)
}

/// Default guard for [`direct_search_oracle`]: number of block tuples.
pub const ORACLE_LIMIT: u128 = 100_000_000;

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

fn k_subsets(v: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    fn rec(start: usize, v: usize, k: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for x in start..v {
            if v - x < k - current.len() {
                break;
            }
            current.push(x);
            rec(x + 1, v, k, current, out);
            current.pop();
        }
    }
    rec(0, v, k, &mut current, &mut out);
    out
}

/// Every block tuple of the right sizes that forms an SDS, by exhaustive
/// enumeration with no symmetry reduction. Intended as ground truth for
/// small parameters.
pub fn direct_search_oracle(params: &SdsParams) -> Result<Vec<Vec<Subset>>> {
    let v = params.v();
    let size = params
        .ks()
        .iter()
        .fold(1u128, |acc, &k| acc.saturating_mul(binomial(v, k)));
    if size > ORACLE_LIMIT {
        return Err(SdsError::TooLarge {
            size,
            limit: ORACLE_LIMIT,
        });
    }
    // difference counts of every candidate block, computed once
    let per_block: Vec<Vec<(Vec<usize>, Vec<i64>)>> = params
        .ks()
        .iter()
        .map(|&k| {
            k_subsets(v, k)
                .into_iter()
                .map(|x| {
                    let mut diffs = vec![0i64; v];
                    for &a in &x {
                        for &b in &x {
                            diffs[(a + v - b) % v] += 1;
                        }
                    }
                    (x, diffs)
                })
                .collect()
        })
        .collect();

    struct Walk<'a> {
        per_block: &'a [Vec<(Vec<usize>, Vec<i64>)>],
        params: &'a SdsParams,
        chosen: Vec<usize>,
        found: Vec<Vec<Subset>>,
    }
    impl Walk<'_> {
        fn rec(&mut self, depth: usize, total: &[i64]) {
            if depth == self.per_block.len() {
                if total[1..].iter().all(|&c| c == self.params.lambda()) {
                    let v = self.params.v();
                    let blocks = self
                        .chosen
                        .iter()
                        .enumerate()
                        .map(|(i, &j)| Subset::new(v, self.per_block[i][j].0.iter().copied()).expect("valid block"))
                        .collect();
                    self.found.push(blocks);
                }
                return;
            }
            let mut next = total.to_vec();
            for j in 0..self.per_block[depth].len() {
                let diffs = &self.per_block[depth][j].1;
                // prune once a count already overshoots lambda
                let mut ok = true;
                for s in 1..next.len() {
                    next[s] = total[s] + diffs[s];
                    ok &= next[s] <= self.params.lambda();
                }
                if ok {
                    self.chosen.push(j);
                    self.rec(depth + 1, &next);
                    self.chosen.pop();
                }
            }
        }
    }
    let mut walk = Walk {
        per_block: &per_block,
        params,
        chosen: Vec::new(),
        found: Vec::new(),
    };
    walk.rec(0, &vec![0; v]);
    debug_assert!(walk.found.iter().all(|w| verify_sds(params, w).unwrap_or(false)));
    Ok(walk.found)
}

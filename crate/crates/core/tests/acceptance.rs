//! Acceptance checks, one line per check. Runs without the libtest harness
//! so the PASS/FAIL lines always show up in `cargo test` output.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use sds_core::catalog::{feasible_params, parse_params, registry};
use sds_core::compress::{case_split, compress, compression_multiplicities, sds_compressed_constants, Multiplicities};
use sds_core::search::{decide_two_block, diophantine_precheck, direct_search_oracle, normal_form, SearchOptions};
use sds_core::seqcore::{
    associated_sequence, dft_integer, paf, paf_to_psd_constants, psd, psd_to_paf_constants, units, verify_sds,
};
use sds_core::{SdsParams, Sequence, Status, Strategy, Subset};

type Outcome = Result<String, String>;
type Check = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

/// PAF straight from the definition, kept apart from the library.
fn paf_naive(a: &[i64]) -> Vec<i64> {
    let v = a.len();
    (0..v).map(|s| (0..v).map(|i| a[i] * a[(i + s) % v]).sum()).collect()
}

fn pm_one(x: &Subset) -> Vec<i64> {
    (0..x.v()).map(|i| if x.contains(i) { -1 } else { 1 }).collect()
}

fn compress_naive(a: &[i64], d: usize) -> Vec<i64> {
    (0..d).map(|j| a.iter().skip(j).step_by(d).sum()).collect()
}

fn witness_verification() -> Outcome {
    let started = Instant::now();
    let all = registry().map_err(|e| e.to_string())?;
    ensure(all.len() == 8, || format!("{} witnesses shipped", all.len()))?;
    for (i, rec) in all.iter().enumerate() {
        ensure(matches!(verify_sds(&rec.params, &rec.blocks), Ok(true)), || format!("witness {i} fails"))?;
    }
    let elapsed = started.elapsed();
    ensure(elapsed < Duration::from_secs(1), || format!("took {elapsed:?}"))?;
    Ok(format!("8/8 exact, {elapsed:.2?}"))
}

fn zero_paf_pairs() -> Outcome {
    let started = Instant::now();
    for rec in registry().map_err(|e| e.to_string())? {
        let (a, b) = (pm_one(&rec.blocks[0]), pm_one(&rec.blocks[1]));
        let (pa, pb) = (paf_naive(&a), paf_naive(&b));
        for s in 1..a.len() {
            ensure(pa[s] + pb[s] == 0, || format!("{} shift {s}: {}", rec.params, pa[s] + pb[s]))?;
        }
        // library PAF must agree with the direct sum
        let lib = paf(&associated_sequence(&rec.blocks[0]));
        ensure(lib.values() == &pa[..], || format!("{} library PAF differs", rec.params))?;
    }
    let elapsed = started.elapsed();
    ensure(elapsed < Duration::from_secs(1), || format!("took {elapsed:?}"))?;
    Ok(format!("8 pairs with PAF sum 0 at every nonzero shift, {elapsed:.2?}"))
}

fn parameter_universe() -> Outcome {
    let started = Instant::now();
    let all = feasible_params(50);
    ensure(all.len() == 227, || format!("{} records", all.len()))?;
    let listed = [
        "41;15,6;6",
        "43;9,4;2",
        "44;19,2;8",
        "45;18,2;7",
        "46;21,6;10",
        "47;9,5;2",
        "47;12,3;3",
        "47;14,2;4",
        "47;15,5;5",
        "48;14,3;4",
        "49;10,3;2",
        "49;21,4;9",
        "50;8,7;2",
        "50;20,4;8",
        "50;22,21;18",
    ];
    for text in listed {
        let p = parse_params(text).map_err(|e| e.to_string())?;
        ensure(all.iter().any(|r| r.params == p), || format!("{p} missing"))?;
    }
    let elapsed = started.elapsed();
    ensure(elapsed < Duration::from_secs(1), || format!("took {elapsed:?}"))?;
    Ok(format!("227 records, all 15 listed sets present, {elapsed:.2?}"))
}

fn full_46_reproduction() -> Outcome {
    let started = Instant::now();
    let params = SdsParams::new(46, vec![21, 6], 10).map_err(|e| e.to_string())?;
    let cases = case_split(&params, 2, 23).map_err(|e| e.to_string())?;
    ensure(cases.len() == 4, || format!("{} content cases", cases.len()))?;
    let opts = SearchOptions {
        tol: 1e-6,
        ..SearchOptions::default()
    };
    let result = decide_two_block(&params, Strategy::Compress(2), &opts).map_err(|e| e.to_string())?;
    let report = &result.report;
    let multiset = |f: &dyn Fn(&sds_core::search::CaseReport) -> u64| {
        let mut v: Vec<u64> = report.cases.iter().map(f).collect();
        v.sort_unstable();
        v
    };
    let want = |mut v: Vec<u64>| {
        v.sort_unstable();
        v
    };
    let checks: [(&str, Vec<u64>, Vec<u64>); 4] = [
        (
            "A charmed bracelets",
            multiset(&|c| c.a_enumerated),
            want(vec![2_116_296, 475_020, 54_264, 3_015]),
        ),
        ("A PSD-pass", multiset(&|c| c.a_psd_passed), want(vec![85, 2_009, 4_552, 1_442])),
        ("B bracelets", multiset(&|c| c.b_enumerated), want(vec![2_277, 3_685, 1_210, 44])),
        ("B PSD-pass", multiset(&|c| c.b_psd_passed), want(vec![1_749, 1_419, 22, 0])),
    ];
    for (name, got, expected) in checks {
        ensure(got == expected, || format!("{name}: {got:?} != {expected:?}"))?;
    }
    let mut pairs: Vec<u64> = report
        .cases
        .iter()
        .filter(|c| c.a_psd_passed > 0 && c.b_psd_passed > 0)
        .map(|c| c.matched_pairs)
        .collect();
    pairs.sort_unstable();
    ensure(pairs == [0, 34, 39], || format!("matched pairs {pairs:?}"))?;
    let lifted: u64 = report.cases.iter().map(|c| c.lifted_pairs).sum();
    let found: u64 = report.cases.iter().map(|c| c.lifted_witnesses).sum();
    ensure(lifted >= 73, || format!("only {lifted} pairs lifted"))?;
    ensure(found == 0 && result.witnesses.is_empty(), || format!("{found} witnesses"))?;
    ensure(result.status == Status::NotExists, || format!("status {}", result.status))?;
    Ok(format!(
        "4 cases, all table counts exact, pairs 39/34/0, {lifted} lifted, NOT_EXISTS, {:.1?}",
        started.elapsed()
    ))
}

/// The image of a block family under `x -> ±s*x + t_i`: one unit and sign
/// for the whole family, an independent shift per block.
fn random_image(rng: &mut StdRng, blocks: &[Subset]) -> Vec<Subset> {
    let v = blocks[0].v();
    let us = units(v);
    let s = us[rng.random_range(0..us.len())] as i64;
    let sign = if rng.random_bool(0.5) { -1 } else { 1 };
    blocks
        .iter()
        .map(|b| b.multiplied(sign * s).translated(rng.random_range(0..v as i64)))
        .collect()
}

fn compression_theory() -> Outcome {
    let started = Instant::now();
    let mut rng = StdRng::seed_from_u64(2024);
    let mut families: Vec<(SdsParams, Vec<Subset>)> = Vec::new();
    for rec in registry().map_err(|e| e.to_string())? {
        families.push((rec.params.clone(), rec.blocks.clone()));
    }
    let base = families.clone();
    for i in 0..100 {
        let (p, blocks) = &base[i % base.len()];
        families.push((p.clone(), random_image(&mut rng, blocks)));
    }
    let mut checked = 0;
    for (params, blocks) in &families {
        ensure(matches!(verify_sds(params, blocks), Ok(true)), || format!("{params}: image is not an SDS"))?;
        let v = params.v();
        let t = params.t() as i64;
        let n = params.n();
        let seqs: Vec<Vec<i64>> = blocks.iter().map(pm_one).collect();
        let (alpha0, alpha) = (t * v as i64, t * v as i64 - 4 * n);
        for m in [2usize, 3] {
            if v % m != 0 {
                continue;
            }
            let d = v / m;
            let mi = m as i64;
            let compressed: Vec<Vec<i64>> = seqs.iter().map(|a| compress_naive(a, d)).collect();
            let pafs: Vec<Vec<i64>> = compressed.iter().map(|c| paf_naive(c)).collect();
            let sum = |s: usize| pafs.iter().map(|p| p[s]).sum::<i64>();
            // constants carried over from the uncompressed family
            ensure(sum(0) == alpha0 + (mi - 1) * alpha, || format!("{params} m={m}: alpha0"))?;
            for s in 1..d {
                ensure(sum(s) == mi * alpha, || format!("{params} m={m}: shift {s}"))?;
            }
            // the same constants written in SDS parameters
            let sds_form = (mi * (t * v as i64 - 4 * n) + 4 * n, mi * (t * v as i64 - 4 * n));
            ensure((sum(0), sum(1)) == sds_form, || format!("{params} m={m}: SDS form"))?;
            let lib = sds_compressed_constants(params, m).map_err(|e| e.to_string())?;
            ensure(lib == sds_form, || format!("{params} m={m}: library constants {lib:?}"))?;
            // multiplicities
            let small = compressed.iter().flatten().filter(|&&x| x.abs() == mi - 2).count() as i64;
            let large = compressed.iter().flatten().filter(|&&x| x.abs() == mi).count() as i64;
            ensure(small == n && large == t * d as i64 - n, || {
                format!("{params} m={m}: multiplicities {small}/{large}")
            })?;
            let lib_seqs: Vec<Sequence> = blocks
                .iter()
                .map(|b| compress(&associated_sequence(b), d))
                .collect::<Result<_, _>>()
                .map_err(|e| e.to_string())?;
            let observed = Multiplicities::observe(&lib_seqs, m).map_err(|e| e.to_string())?;
            let predicted = compression_multiplicities(params, m, d).map_err(|e| e.to_string())?;
            ensure(observed == predicted, || format!("{params} m={m}: library multiplicities"))?;
            checked += 1;
        }
    }
    let elapsed = started.elapsed();
    ensure(elapsed < Duration::from_secs(10), || format!("took {elapsed:?}"))?;
    Ok(format!("{} families, {checked} compressions exact, {elapsed:.2?}", families.len()))
}

fn wiener_khinchin() -> Outcome {
    let started = Instant::now();
    let mut rng = StdRng::seed_from_u64(77);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let v = rng.random_range(2..=64);
        let a: Vec<i32> = (0..v).map(|_| rng.random_range(-9..=9)).collect();
        let seq = Sequence::new(a.clone()).map_err(|e| e.to_string())?;
        let wide: Vec<i64> = a.iter().map(|&x| x as i64).collect();
        let from_paf = dft_integer(&paf_naive(&wide));
        let spectrum = psd(&seq);
        for (s, z) in from_paf.iter().enumerate() {
            let want = spectrum[s];
            let err = (z.re - want).abs().max(z.im.abs()) / want.abs().max(1.0);
            worst = worst.max(err);
            ensure(err <= 1e-9, || format!("v={v} s={s}: relative error {err:e}"))?;
        }
    }
    for _ in 0..1000 {
        let v = rng.random_range(2..=64usize);
        let (alpha0, alpha) = (rng.random_range(-500..=500), rng.random_range(-500..=500));
        let (beta0, beta) = paf_to_psd_constants(alpha0, alpha, v);
        let back = psd_to_paf_constants(beta0, beta, v).map_err(|e| e.to_string())?;
        ensure(back == (alpha0, alpha), || format!("v={v}: {back:?} != {:?}", (alpha0, alpha)))?;
    }
    let elapsed = started.elapsed();
    ensure(elapsed < Duration::from_secs(10), || format!("took {elapsed:?}"))?;
    Ok(format!("max relative error {worst:.1e}, constants round-trip, {elapsed:.2?}"))
}

fn oracle_equivalence() -> Outcome {
    let started = Instant::now();
    let opts = SearchOptions::default();
    let mut sets = 0;
    let mut existing = 0;
    for v in 2..=13usize {
        for r in 1..v {
            for s in 1..=r {
                let num = r * (r - 1) + s * (s - 1);
                if num % (v - 1) != 0 {
                    continue;
                }
                let params = SdsParams::new(v, vec![r, s], (num / (v - 1)) as i64).map_err(|e| e.to_string())?;
                let truth: BTreeSet<Vec<Subset>> = direct_search_oracle(&params)
                    .map_err(|e| e.to_string())?
                    .iter()
                    .map(|w| normal_form(w))
                    .collect();
                let result = decide_two_block(&params, Strategy::Direct, &opts).map_err(|e| e.to_string())?;
                let found: BTreeSet<Vec<Subset>> = result.witnesses.into_iter().collect();
                ensure(found == truth, || {
                    format!("{params}: {} classes vs oracle {}", found.len(), truth.len())
                })?;
                let want = if truth.is_empty() {
                    Status::NotExists
                } else {
                    Status::Exists
                };
                ensure(result.status == want, || format!("{params}: status {}", result.status))?;
                sets += 1;
                existing += usize::from(!truth.is_empty());
            }
        }
    }
    let elapsed = started.elapsed();
    ensure(elapsed < Duration::from_secs(120), || format!("took {elapsed:?}"))?;
    Ok(format!(
        "{sets} parameter sets ({existing} with SDS) agree, {elapsed:.1?}"
    ))
}

fn diophantine() -> Outcome {
    for v in [54, 56] {
        ensure(!diophantine_precheck(v), || format!("{v} should fail"))?;
    }
    for v in [50, 52, 58] {
        ensure(diophantine_precheck(v), || format!("{v} should pass"))?;
    }
    Ok("54, 56 excluded; 50, 52, 58 admitted".into())
}

fn small_case_psd_nonexistence() -> Outcome {
    let started = Instant::now();
    let params = SdsParams::new(43, vec![9, 4], 2).map_err(|e| e.to_string())?;
    // the whole B-side space: every 4-subset of Z_43
    let beta = params.psd_bound() as f64 + 1e-6;
    let mut b_total = 0u64;
    let mut b_pass = 0u64;
    for a in 0..43 {
        for b in a + 1..43 {
            for c in b + 1..43 {
                for d in c + 1..43 {
                    b_total += 1;
                    let x = Subset::new(43, [a, b, c, d]).map_err(|e| e.to_string())?;
                    let spectrum = psd(&associated_sequence(&x));
                    b_pass += u64::from(spectrum.values()[1..].iter().all(|&p| p <= beta));
                }
            }
        }
    }
    ensure(b_total == 123_410, || format!("{b_total} B-subsets"))?;
    let result = decide_two_block(&params, Strategy::Direct, &SearchOptions::default()).map_err(|e| e.to_string())?;
    let case = &result.report.cases[0];
    ensure(case.a_psd_passed == 0, || format!("{} A-sequences pass", case.a_psd_passed))?;
    ensure(result.status == Status::NotExists, || format!("status {}", result.status))?;
    Ok(format!(
        "B space 123,410 subsets ({b_pass} pass); {} charmed A-bracelets, none pass beta=44; NOT_EXISTS, {:.1?}",
        case.a_enumerated,
        started.elapsed()
    ))
}

fn main() -> ExitCode {
    let checks: [Check; 9] = [
        ("witness verification", witness_verification),
        ("zero-PAF pairs", zero_paf_pairs),
        ("parameter universe", parameter_universe),
        ("(46;21,6;10) via 2-compression", full_46_reproduction),
        ("compression constants and multiplicities", compression_theory),
        ("Wiener-Khinchin and constant conversion", wiener_khinchin),
        ("direct search vs oracle, v <= 13", oracle_equivalence),
        ("Diophantine precheck", diophantine),
        ("(43;9,4;2) PSD nonexistence", small_case_psd_nonexistence),
    ];
    let mut failed = 0;
    for (i, (name, check)) in checks.iter().enumerate() {
        match check() {
            Ok(detail) => println!("[{}] PASS {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("[{}] FAIL {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", checks.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

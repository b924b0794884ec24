//! Lifting compressed pairs back to length `v`.
//!
//! Every compressed entry `c` at position `j` fixes how many of the `m`
//! positions `j, j+d, ..., j+(m-1)d` carry `-1`, namely `(m - c) / 2`. The
//! preimages of one side are the product of those per-position choices.
//! The two sides are joined by hashing the folded PAF, so a pair costs
//! roughly `|preimages(A)| + |preimages(B)|` PAF evaluations.

use std::collections::HashMap;

use crate::compress::CompressionSpec;
use crate::error::{Result, SdsError};
use crate::seqcore::{paf_of, verify_sds, SdsParams, Sequence, Subset};

/// Default cap on the number of preimages of one side.
pub const LIFT_LIMIT: u128 = 1 << 22;

/// Cap on the side that is held in memory while lifting.
const STORED_LIMIT: u128 = 1 << 20;

/// Per-position sign patterns for the preimages of `a`.
fn preimage_choices(a: &Sequence, m: usize) -> Result<Vec<Vec<Vec<bool>>>> {
    let mi = m as i32;
    a.values()
        .iter()
        .map(|&c| {
            if c.abs() > mi || (mi - c) % 2 != 0 {
                return Err(SdsError::AlphabetMismatch { value: c, m });
            }
            Ok(sign_patterns(m, ((mi - c) / 2) as usize))
        })
        .collect()
}

/// Number of ±1 preimages of `a` under `m`-compression.
pub fn preimage_count(a: &Sequence, m: usize) -> Result<u128> {
    Ok(preimage_choices(a, m)?
        .iter()
        .fold(1u128, |acc, p| acc.saturating_mul(p.len() as u128)))
}

/// Calls `f` on every ±1 preimage of `a` under `m`-compression.
pub fn for_each_preimage(a: &Sequence, m: usize, mut f: impl FnMut(&[i32])) -> Result<()> {
    let d = a.len();
    let choices = preimage_choices(a, m)?;
    fn rec(
        j: usize,
        d: usize,
        choices: &[Vec<Vec<bool>>],
        current: &mut [i32],
        f: &mut dyn FnMut(&[i32]),
    ) {
        if j == d {
            f(current);
            return;
        }
        for pattern in &choices[j] {
            for (r, &neg) in pattern.iter().enumerate() {
                current[j + r * d] = if neg { -1 } else { 1 };
            }
            rec(j + 1, d, choices, current, f);
        }
    }
    let mut current = vec![1i32; d * m];
    rec(0, d, &choices, &mut current, &mut f);
    Ok(())
}

/// All ±1 preimages of `a` under `m`-compression, as raw value vectors.
pub fn preimages(a: &Sequence, m: usize, limit: u128) -> Result<Vec<Vec<i32>>> {
    let size = preimage_count(a, m)?;
    if size > limit {
        return Err(SdsError::TooLarge { size, limit });
    }
    let mut out = Vec::with_capacity(size as usize);
    for_each_preimage(a, m, |x| out.push(x.to_vec()))?;
    Ok(out)
}

/// Every way to mark `negatives` of `m` slots, forced positions first.
fn sign_patterns(m: usize, negatives: usize) -> Vec<Vec<bool>> {
    (0u32..1 << m)
        .filter(|mask| mask.count_ones() as usize == negatives)
        .map(|mask| (0..m).map(|r| mask >> r & 1 == 1).collect())
        .collect()
}

/// Lifts a compressed pair to every verified SDS with the given parameters.
pub fn lift(pair: (&Sequence, &Sequence), spec: &CompressionSpec, params: &SdsParams) -> Result<Vec<Vec<Subset>>> {
    if spec.v != params.v() || pair.0.len() != spec.d || pair.1.len() != spec.d {
        return Err(SdsError::LengthMismatch {
            expected: spec.d,
            found: pair.0.len(),
        });
    }
    lift_with_factor(pair, spec.m, params, LIFT_LIMIT)
}

/// As [`lift`], for any factor including `m = 1` (where the pair is its own
/// only preimage).
pub fn lift_with_factor(
    pair: (&Sequence, &Sequence),
    m: usize,
    params: &SdsParams,
    limit: u128,
) -> Result<Vec<Vec<Subset>>> {
    if params.t() != 2 {
        return Err(SdsError::Unsupported(format!(
            "lifting needs two blocks, got {}",
            params.t()
        )));
    }
    let v = params.v();
    let alpha = (params.t() * v) as i64 - 4 * params.n();
    let ks = [params.ks()[0], params.ks()[1]];
    let count_neg = |x: &[i32]| x.iter().filter(|&&c| c < 0).count();

    // index the side with fewer preimages, stream the other
    let sides = [pair.0, pair.1];
    let counts = [preimage_count(pair.0, m)?, preimage_count(pair.1, m)?];
    let (stored, streamed) = if counts[1] <= counts[0] { (1, 0) } else { (0, 1) };
    if counts[streamed] > limit {
        return Err(SdsError::TooLarge {
            size: counts[streamed],
            limit,
        });
    }

    let stored_side: Vec<Vec<i32>> = preimages(sides[stored], m, limit.min(STORED_LIMIT))?
        .into_iter()
        .filter(|x| count_neg(x) == ks[stored])
        .collect();
    let mut index: HashMap<Vec<i64>, Vec<usize>> = HashMap::new();
    for (i, x) in stored_side.iter().enumerate() {
        let key: Vec<i64> = paf_of(x)[1..=v / 2].iter().map(|&p| alpha - p).collect();
        index.entry(key).or_default().push(i);
    }

    let mut found = Vec::new();
    let mut failure = None;
    for_each_preimage(sides[streamed], m, |x| {
        if failure.is_some() || count_neg(x) != ks[streamed] {
            return;
        }
        let paf_x = paf_of(x);
        let Some(partners) = index.get(&paf_x[1..=v / 2]) else {
            return;
        };
        let block_x = negatives(x);
        for &i in partners {
            let block_y = negatives(&stored_side[i]);
            let blocks = if streamed == 0 {
                vec![block_x.clone(), block_y]
            } else {
                vec![block_y, block_x.clone()]
            };
            match verify_sds(params, &blocks) {
                Ok(true) => found.push(blocks),
                Ok(false) => {}
                Err(e) => failure = Some(e),
            }
        }
    })?;
    match failure {
        Some(e) => Err(e),
        None => Ok(found),
    }
}

fn negatives(x: &[i32]) -> Subset {
    Subset::new(x.len(), x.iter().enumerate().filter(|(_, &c)| c < 0).map(|(i, _)| i))
        .expect("positions are distinct and in range")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compress::compress;
    use crate::seqcore::associated_sequence;

    #[test]
    fn preimage_counts() {
        let a = Sequence::new(vec![2, 0, -2, 0]).unwrap();
        let pre = preimages(&a, 2, LIFT_LIMIT).unwrap();
        assert_eq!(pre.len(), 4);
        for p in &pre {
            assert_eq!(compress(&Sequence::new(p.clone()).unwrap(), 4).unwrap(), a);
        }
        // no zeros: fully forced
        let forced = Sequence::new(vec![2, -2, 2]).unwrap();
        assert_eq!(preimages(&forced, 2, LIFT_LIMIT).unwrap().len(), 1);
        // m = 3: +-1 branch three ways
        let three = Sequence::new(vec![1, -1, 3]).unwrap();
        assert_eq!(preimages(&three, 3, LIFT_LIMIT).unwrap().len(), 9);
        assert!(matches!(
            preimages(&Sequence::new(vec![1]).unwrap(), 2, LIFT_LIMIT),
            Err(SdsError::AlphabetMismatch { value: 1, m: 2 })
        ));
        assert!(matches!(
            preimages(&Sequence::new(vec![0; 30]).unwrap(), 2, 1 << 20),
            Err(SdsError::TooLarge { .. })
        ));
    }

    #[test]
    fn lift_recovers_the_original() {
        let params = SdsParams::new(50, vec![22, 21], 18).unwrap();
        let x = Subset::new(
            50,
            [0, 1, 2, 3, 6, 7, 9, 13, 14, 16, 18, 20, 22, 23, 26, 27, 30, 35, 37, 41, 45, 46],
        )
        .unwrap();
        let y = Subset::new(
            50,
            [0, 1, 2, 3, 4, 5, 6, 8, 11, 12, 14, 17, 20, 22, 29, 30, 32, 37, 38, 39, 42],
        )
        .unwrap();
        let a = compress(&associated_sequence(&x), 25).unwrap();
        let b = compress(&associated_sequence(&y), 25).unwrap();
        let spec = CompressionSpec::new(50, 25).unwrap();
        let lifted = lift((&a, &b), &spec, &params).unwrap();
        assert!(lifted.contains(&vec![x, y]));
        for blocks in &lifted {
            assert!(verify_sds(&params, blocks).unwrap());
        }
    }

    #[test]
    fn lift_rejects_mismatched_shapes() {
        let params = SdsParams::new(50, vec![22, 21], 18).unwrap();
        let spec = CompressionSpec::new(50, 25).unwrap();
        let short = Sequence::new(vec![0; 5]).unwrap();
        assert!(lift((&short, &short), &spec, &params).is_err());
    }
}

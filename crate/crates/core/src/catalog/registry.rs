use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Result, SdsError};
use crate::seqcore::{verify_sds, SdsParams, Subset};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum WitnessSource {
    /// Shipped with the library.
    Shipped,
    /// Produced or loaded at run time.
    Search,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessRecord {
    pub params: SdsParams,
    pub blocks: Vec<Subset>,
    pub source: WitnessSource,
    pub verified: bool,
}

impl WitnessRecord {
    /// Checks block count and sizes, then runs the exact verification.
    pub fn new(params: SdsParams, blocks: Vec<Subset>, source: WitnessSource) -> Result<Self> {
        let verified = verify_sds(&params, &blocks)?;
        Ok(Self {
            params,
            blocks,
            source,
            verified,
        })
    }
}

/// On-disk shape of one record.
#[derive(Serialize, Deserialize)]
struct WitnessLine {
    v: usize,
    k: Vec<usize>,
    lambda: i64,
    blocks: Vec<Vec<usize>>,
}

/// Writes one JSON object per line.
pub fn write_witnesses<W: Write>(mut out: W, records: &[WitnessRecord]) -> Result<()> {
    for rec in records {
        let line = WitnessLine {
            v: rec.params.v(),
            k: rec.params.ks().to_vec(),
            lambda: rec.params.lambda(),
            blocks: rec.blocks.iter().map(|b| b.elements().to_vec()).collect(),
        };
        serde_json::to_writer(&mut out, &line)?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

/// Reads a stream of witness objects (one per line, or simply concatenated)
/// and verifies each one. Records that parse but fail verification are
/// returned with `verified = false`.
pub fn read_witnesses<R: Read>(input: R, source: WitnessSource) -> Result<Vec<WitnessRecord>> {
    serde_json::Deserializer::from_reader(input)
        .into_iter::<WitnessLine>()
        .map(|line| {
            let line = line?;
            let params = SdsParams::new(line.v, line.k, line.lambda)?;
            let blocks = line
                .blocks
                .into_iter()
                .map(|b| Subset::new(params.v(), b))
                .collect::<Result<Vec<_>>>()?;
            WitnessRecord::new(params, blocks, source)
        })
        .collect()
}

/// `(v, [r, s], lambda, [X, Y])`.
type Shipped = (usize, [usize; 2], i64, [&'static [usize]; 2]);

const SHIPPED: [Shipped; 8] = [
    (
        50,
        [22, 21],
        18,
        [
            &[0, 1, 2, 3, 6, 7, 9, 13, 14, 16, 18, 20, 22, 23, 26, 27, 30, 35, 37, 41, 45, 46],
            &[0, 1, 2, 3, 4, 5, 6, 8, 11, 12, 14, 17, 20, 22, 29, 30, 32, 37, 38, 39, 42],
        ],
    ),
    (
        50,
        [22, 21],
        18,
        [
            &[0, 1, 2, 3, 4, 6, 7, 8, 9, 14, 16, 18, 20, 21, 25, 31, 32, 35, 36, 42, 44, 45],
            &[0, 1, 2, 4, 5, 8, 9, 10, 12, 14, 18, 21, 23, 24, 27, 29, 32, 34, 35, 39, 42],
        ],
    ),
    (
        50,
        [22, 21],
        18,
        [
            &[0, 1, 2, 3, 5, 8, 9, 11, 14, 15, 19, 21, 24, 25, 29, 30, 32, 36, 38, 39, 41, 43],
            &[0, 1, 3, 5, 6, 7, 8, 9, 10, 13, 16, 18, 20, 21, 24, 25, 31, 32, 33, 37, 41],
        ],
    ),
    (
        50,
        [22, 21],
        18,
        [
            &[0, 2, 3, 4, 6, 9, 10, 12, 13, 17, 19, 20, 24, 25, 28, 29, 30, 33, 38, 39, 41, 47],
            &[0, 1, 3, 5, 6, 7, 8, 10, 12, 13, 14, 17, 20, 22, 24, 28, 32, 37, 38, 39, 40],
        ],
    ),
    (
        58,
        [27, 24],
        22,
        [
            &[
                0, 1, 2, 3, 4, 7, 8, 10, 11, 12, 13, 16, 18, 20, 24, 26, 29, 31, 32, 33, 36, 38, 43, 46, 47, 50, 53,
            ],
            &[
                0, 1, 2, 3, 7, 8, 10, 11, 12, 13, 16, 17, 21, 22, 24, 27, 30, 34, 41, 42, 43, 45, 47, 49,
            ],
        ],
    ),
    (
        58,
        [27, 24],
        22,
        [
            &[
                0, 1, 2, 3, 5, 6, 7, 9, 11, 12, 14, 15, 17, 19, 23, 24, 25, 26, 29, 32, 33, 39, 40, 43, 45, 48, 52,
            ],
            &[
                0, 1, 2, 3, 4, 5, 9, 11, 14, 15, 16, 18, 22, 26, 27, 31, 32, 34, 37, 39, 41, 42, 45, 51,
            ],
        ],
    ),
    (
        58,
        [27, 24],
        22,
        [
            &[
                0, 1, 2, 3, 5, 8, 9, 11, 12, 13, 14, 18, 19, 21, 24, 25, 27, 29, 32, 34, 35, 39, 41, 43, 44, 48, 49,
            ],
            &[
                0, 2, 3, 4, 6, 8, 10, 13, 16, 17, 19, 20, 21, 25, 28, 29, 32, 33, 34, 39, 40, 41, 43, 46,
            ],
        ],
    ),
    (
        58,
        [27, 24],
        22,
        [
            &[
                0, 2, 3, 4, 6, 7, 8, 10, 11, 14, 16, 17, 18, 20, 23, 25, 26, 28, 31, 32, 36, 37, 38, 41, 42, 47, 49,
            ],
            &[
                0, 1, 2, 3, 5, 8, 9, 10, 12, 16, 17, 18, 22, 25, 28, 30, 35, 37, 41, 44, 45, 46, 48, 49,
            ],
        ],
    ),
];

/// The eight shipped witnesses: four `(50;22,21;18)` and four
/// `(58;27,24;22)`, each verified on load.
pub fn registry() -> Result<Vec<WitnessRecord>> {
    SHIPPED
        .iter()
        .enumerate()
        .map(|(i, (v, ks, lambda, blocks))| {
            let corrupt = |why: String| SdsError::CorruptRegistry(format!("entry {i}: {why}"));
            let params = SdsParams::new(*v, ks.to_vec(), *lambda).map_err(|e| corrupt(e.to_string()))?;
            let blocks = blocks
                .iter()
                .map(|b| Subset::new(*v, b.iter().copied()))
                .collect::<Result<Vec<_>>>()
                .map_err(|e| corrupt(e.to_string()))?;
            let rec = WitnessRecord::new(params, blocks, WitnessSource::Shipped).map_err(|e| corrupt(e.to_string()))?;
            if !rec.verified {
                return Err(corrupt("fails verification".into()));
            }
            Ok(rec)
        })
        .collect()
}

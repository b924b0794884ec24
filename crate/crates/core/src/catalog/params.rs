use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Result, SdsError};
use crate::seqcore::SdsParams;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ParamStatus {
    Exists,
    NotExists,
    /// Still undecided.
    Open,
    /// Decided by earlier constructions or nonexistence results that this
    /// catalog does not track individually.
    Settled,
}

impl fmt::Display for ParamStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ParamStatus::Exists => "EXISTS",
            ParamStatus::NotExists => "NOT_EXISTS",
            ParamStatus::Open => "OPEN",
            ParamStatus::Settled => "SETTLED",
        })
    }
}

impl std::str::FromStr for ParamStatus {
    type Err = SdsError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "exists" => Ok(ParamStatus::Exists),
            "not_exists" => Ok(ParamStatus::NotExists),
            "open" => Ok(ParamStatus::Open),
            "settled" => Ok(ParamStatus::Settled),
            _ => Err(SdsError::Parse(format!("unknown status {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamRecord {
    pub params: SdsParams,
    /// `v/2 >= r >= s >= 2`.
    pub normalized: bool,
    pub status: ParamStatus,
    pub provenance: String,
    /// One of the fifteen sets with `v <= 50` that were undecided before the
    /// searches recorded here.
    pub listed: bool,
}

/// `((v, r, s, lambda), status, provenance)`.
type Listed = ((usize, usize, usize, i64), ParamStatus, &'static str);

/// The fifteen previously undecided sets and what became of them.
const LISTED: [Listed; 15] = {
    use ParamStatus::*;
    const PSD: &str = "no A-sequence passes the PSD-test";
    const MATCH: &str = "PSD-passing candidates on both sides, no complementary match";
    const COMPRESS: &str = "exhausted by 2-compression and lifting";
    [
        ((41, 15, 6, 6), NotExists, MATCH),
        ((43, 9, 4, 2), NotExists, PSD),
        ((44, 19, 2, 8), NotExists, PSD),
        ((45, 18, 2, 7), NotExists, PSD),
        ((46, 21, 6, 10), NotExists, COMPRESS),
        ((47, 9, 5, 2), NotExists, PSD),
        ((47, 12, 3, 3), NotExists, PSD),
        ((47, 14, 2, 4), NotExists, PSD),
        ((47, 15, 5, 5), NotExists, PSD),
        ((48, 14, 3, 4), NotExists, PSD),
        ((49, 10, 3, 2), NotExists, PSD),
        ((49, 21, 4, 9), Open, "undecided"),
        ((50, 8, 7, 2), NotExists, MATCH),
        ((50, 20, 4, 8), NotExists, COMPRESS),
        ((50, 22, 21, 18), Exists, "four inequivalent witnesses in the registry"),
    ]
};

/// Every normalized two-block parameter set `(v; r, s; lambda)` with
/// `4 <= v <= v_max`, sorted by `(v, r, s)`.
pub fn feasible_params(v_max: usize) -> Vec<ParamRecord> {
    let mut out = Vec::new();
    for v in 4..=v_max {
        for r in 2..=v / 2 {
            for s in 2..=r {
                let num = r * (r - 1) + s * (s - 1);
                if num % (v - 1) != 0 {
                    continue;
                }
                let lambda = (num / (v - 1)) as i64;
                let params = SdsParams::new(v, vec![r, s], lambda).expect("feasible by construction");
                let listed = LISTED.iter().find(|(key, _, _)| *key == (v, r, s, lambda));
                let (status, provenance) = match listed {
                    Some(&(_, status, why)) => (status, why.to_string()),
                    None => (ParamStatus::Settled, "decided in earlier tables".to_string()),
                };
                out.push(ParamRecord {
                    params,
                    normalized: true,
                    status,
                    provenance,
                    listed: listed.is_some(),
                });
            }
        }
    }
    out
}

/// Parses `"v;k1,...,kt;lambda"`, optionally wrapped in parentheses.
pub fn parse_params(text: &str) -> Result<SdsParams> {
    let bad = || SdsError::Parse(format!("expected \"v;k1,...,kt;lambda\", got {text:?}"));
    let inner = text.trim();
    let inner = inner
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .unwrap_or(inner);
    let parts: Vec<&str> = inner.split(';').map(str::trim).collect();
    let [v, ks, lambda] = parts[..] else {
        return Err(bad());
    };
    let v: usize = v.parse().map_err(|_| bad())?;
    let ks = ks
        .split(',')
        .map(|k| k.trim().parse::<usize>().map_err(|_| bad()))
        .collect::<Result<Vec<_>>>()?;
    let lambda: i64 = lambda.parse().map_err(|_| bad())?;
    SdsParams::new(v, ks, lambda)
}

//! Parameter universe, shipped witnesses, file formats and report tables.

mod params;
mod registry;
mod report;

pub use params::{feasible_params, parse_params, ParamRecord, ParamStatus};
pub use registry::{read_witnesses, registry, write_witnesses, WitnessRecord, WitnessSource};
pub use report::render_tables;

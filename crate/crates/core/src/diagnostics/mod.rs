//! Field measurements: Hölder and Besov seminorms, obedience of a modulus
//! over time, the energy budget and the `L^∞` decay envelope.

mod seminorms;
mod series;

pub use seminorms::{besov_seminorm, holder_seminorm, BesovEstimate, HolderEstimate};
pub use series::{
    track, write_csv_header, write_csv_row, write_json_line, DecayMonitor, TimeSeriesRecord,
    Tracker, CSV_COLUMNS,
};

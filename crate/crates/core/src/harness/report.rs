use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use super::{ExperimentRecord, HarnessError};

/// Column order of the CSV output, matching [`ExperimentRecord`]'s fields.
pub const CSV_COLUMNS: [&str; 13] = [
    "r",
    "avg_degree_udg",
    "avg_virtual_edges",
    "avg_zigzag_stretch",
    "avg_greedy_stretch",
    "zigzag_success_rate",
    "greedy_success_rate",
    "avg_ids_broadcast",
    "planarity_violations",
    "trials",
    "route_samples_per_trial",
    "routes_attempted",
    "aborted_trials",
];

pub fn write_csv<W: Write>(records: &[ExperimentRecord], w: W) -> Result<(), csv::Error> {
    let mut wtr = csv::WriterBuilder::new().has_headers(false).from_writer(w);
    wtr.write_record(CSV_COLUMNS)?;
    for rec in records {
        wtr.serialize(rec)?;
    }
    wtr.flush()?;
    Ok(())
}

/// Header row plus one row per record. Undefined averages are empty fields.
pub fn emit_csv(records: &[ExperimentRecord], path: &Path) -> Result<(), HarnessError> {
    let file = File::create(path).map_err(|source| HarnessError::Io { path: path.to_owned(), source })?;
    write_csv(records, io::BufWriter::new(file)).map_err(|source| HarnessError::Csv { path: path.to_owned(), source })
}

pub fn read_csv(path: &Path) -> Result<Vec<ExperimentRecord>, HarnessError> {
    let csv_err = |source| HarnessError::Csv { path: path.to_owned(), source };
    let mut rdr = csv::Reader::from_path(path).map_err(csv_err)?;
    rdr.deserialize().collect::<Result<Vec<_>, _>>().map_err(csv_err)
}

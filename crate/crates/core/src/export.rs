//! CSV helpers shared by the export functions of every module.
//!
//! All CSV output uses a header row, `,` separators, `\n` terminators and
//! shortest round-trip scientific notation for floats, so identical inputs
//! give byte-identical files.

use std::io::Write;

pub type CsvWriter<W> = csv::Writer<W>;

pub fn csv_writer<W: Write>(inner: W) -> CsvWriter<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(inner)
}

/// Float formatting used in every exported file.
pub fn num(x: f64) -> String {
    format!("{x:e}")
}

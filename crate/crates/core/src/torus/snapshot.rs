use std::io::{BufRead, Write};

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::field::FourierField;
use super::grid::Grid;
use crate::error::{Error, Result};
use crate::lattice::LatticePoint;
use crate::scalar::FftReal;

pub const SNAPSHOT_FORMAT: &str = "torwave-field";

/// First line of a snapshot file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SnapshotHeader {
    pub format: String,
    pub version: u32,
    pub grid: usize,
    pub dealias_fraction: f64,
    pub time: f64,
    pub name: String,
    pub real: bool,
    /// Column order of the CSV table that follows.
    pub columns: Vec<String>,
}

/// A decoded snapshot.
#[derive(Clone, Debug)]
pub struct Snapshot<T: FftReal> {
    pub header: SnapshotHeader,
    pub field: FourierField<T>,
}

fn fmt_err(e: impl std::fmt::Display) -> Error {
    Error::Format(e.to_string())
}

/// Writes a JSON header line followed by a CSV table `xi1,xi2,re,im` in storage order.
/// Values are decimal text with shortest round-trip formatting, so byte order does not arise.
pub fn write_snapshot<T: FftReal, W: Write>(field: &FourierField<T>, name: &str, time: f64, mut out: W) -> Result<()> {
    let header = SnapshotHeader {
        format: SNAPSHOT_FORMAT.into(),
        version: 1,
        grid: field.grid().size(),
        dealias_fraction: field.grid().dealias_fraction(),
        time,
        name: name.into(),
        real: field.is_real_valued(),
        columns: ["xi1", "xi2", "re", "im"].iter().map(|s| s.to_string()).collect(),
    };
    serde_json::to_writer(&mut out, &header).map_err(fmt_err)?;
    out.write_all(b"\n").map_err(fmt_err)?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(&header.columns).map_err(fmt_err)?;
    for (i, c) in field.coeffs().iter().enumerate() {
        let xi = field.grid().freq(i);
        w.serialize((xi.x, xi.y, c.re.as_f64(), c.im.as_f64())).map_err(fmt_err)?;
    }
    w.flush().map_err(fmt_err)?;
    Ok(())
}

/// Reads a snapshot written by [`write_snapshot`].
pub fn read_snapshot<T: FftReal, R: BufRead>(mut input: R) -> Result<Snapshot<T>> {
    let mut line = String::new();
    input.read_line(&mut line).map_err(fmt_err)?;
    let header: SnapshotHeader = serde_json::from_str(line.trim_end()).map_err(fmt_err)?;
    if header.format != SNAPSHOT_FORMAT {
        return Err(Error::Format(format!("unknown format {:?}", header.format)));
    }
    let grid = Grid::with_dealias(header.grid, header.dealias_fraction)?;
    let mut coeffs = vec![Complex::new(T::zero(), T::zero()); grid.len()];
    let mut rdr = csv::Reader::from_reader(input);
    for row in rdr.deserialize::<(i64, i64, f64, f64)>() {
        let (x, y, re, im) = row.map_err(fmt_err)?;
        let idx = grid
            .index(LatticePoint::new(x, y))
            .ok_or_else(|| Error::Format(format!("frequency ({x}, {y}) is off the grid")))?;
        coeffs[idx] = Complex::new(T::lit(re), T::lit(im));
    }
    let field = FourierField::from_coeffs(&grid, coeffs, header.real)?;
    Ok(Snapshot { header, field })
}

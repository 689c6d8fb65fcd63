//! CSV and JSON output with fixed schemas, atomic file writes, and the schema
//! checker behind `tube-rupture check`.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::contour::Polyline;
use crate::error::{Error, Result};
use crate::experiments::{RuptureSurface, SectionCurve, SimulationRun, Table1Row, ValidityRaster};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Schema {
    Simulate,
    Table1,
    Sweep,
    Sections,
    Validity,
    Boundary,
}

#[derive(Clone, Copy)]
enum Col {
    Float,
    OptFloat,
    Int,
    Bool,
    Kind,
}

impl Schema {
    pub const ALL: [Schema; 6] =
        [Schema::Simulate, Schema::Table1, Schema::Sweep, Schema::Sections, Schema::Validity, Schema::Boundary];

    pub fn header(self) -> &'static [&'static str] {
        match self {
            Schema::Simulate => &["tau", "z", "p", "y", "I_sampled_drift", "kind"],
            Schema::Table1 => &["eps", "tau_analytic", "tau_numeric", "rel_dev", "censored"],
            Schema::Sweep => &["eps", "z0", "n_crit", "valid"],
            Schema::Sections => &["n", "component_id", "closed", "z", "p"],
            Schema::Validity => &["y0", "z0", "inside"],
            Schema::Boundary => &["component_id", "y0", "z0"],
        }
    }

    fn columns(self) -> &'static [Col] {
        use Col::*;
        match self {
            Schema::Simulate => &[Float, Float, Float, Float, Float, Kind],
            Schema::Table1 => &[Float, Float, OptFloat, OptFloat, Bool],
            Schema::Sweep => &[Float, Float, OptFloat, Bool],
            Schema::Sections => &[Int, Int, Bool, Float, Float],
            Schema::Validity => &[Float, Float, Bool],
            Schema::Boundary => &[Int, Float, Float],
        }
    }

    pub fn from_header(fields: &[&str]) -> Option<Schema> {
        Schema::ALL.into_iter().find(|s| s.header() == fields)
    }
}

/// Write `bytes` to a temp file next to `path`, then rename over it.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

pub fn json_bytes<T: Serialize>(value: &T) -> Result<Vec<u8>> {
    let mut out = serde_json::to_vec_pretty(value)?;
    out.push(b'\n');
    Ok(out)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    write_atomic(path, &json_bytes(value)?)
}

fn csv_bytes<R: Serialize>(schema: Schema, rows: impl IntoIterator<Item = R>) -> Result<Vec<u8>> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record(schema.header())?;
    for row in rows {
        w.serialize(row)?;
    }
    w.into_inner().map_err(|e| Error::Io(e.into_error()))
}

pub fn simulation_csv(run: &SimulationRun) -> Result<Vec<u8>> {
    csv_bytes(
        Schema::Simulate,
        run.records.iter().map(|r| (r.tau, r.z, r.p, r.y, r.drift, r.kind.as_str())),
    )
}

pub fn table1_csv(rows: &[Table1Row]) -> Result<Vec<u8>> {
    csv_bytes(
        Schema::Table1,
        rows.iter().map(|r| (r.eps, r.tau_analytic, r.tau_numeric, r.rel_dev, r.censored)),
    )
}

pub fn sweep_csv(surface: &RuptureSurface) -> Result<Vec<u8>> {
    csv_bytes(Schema::Sweep, surface.cells.iter().map(|c| (c.eps, c.z0, c.n_crit, c.valid)))
}

pub fn sections_csv(sections: &[SectionCurve]) -> Result<Vec<u8>> {
    let rows = sections.iter().flat_map(|s| {
        s.polylines.iter().enumerate().flat_map(move |(id, line)| {
            line.points.iter().map(move |&(z, p)| (s.n, id, line.closed, z, p))
        })
    });
    csv_bytes(Schema::Sections, rows)
}

pub fn validity_csv(raster: &ValidityRaster) -> Result<Vec<u8>> {
    csv_bytes(Schema::Validity, raster.cells.iter().map(|c| (c.y0, c.z0, c.inside)))
}

pub fn boundary_csv(boundary: &[Polyline]) -> Result<Vec<u8>> {
    let rows = boundary
        .iter()
        .enumerate()
        .flat_map(|(id, line)| line.points.iter().map(move |&(y0, z0)| (id, y0, z0)));
    csv_bytes(Schema::Boundary, rows)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub schema: Option<Schema>,
    /// Data rows for CSV files, top-level entries for JSON.
    pub rows: usize,
}

fn check_field(col: Col, value: &str) -> bool {
    match col {
        Col::Float => value.parse::<f64>().is_ok(),
        Col::OptFloat => value.is_empty() || value.parse::<f64>().is_ok(),
        Col::Int => value.parse::<i64>().is_ok(),
        Col::Bool => value == "true" || value == "false",
        Col::Kind => value == "grid" || value == "dense",
    }
}

pub fn check_csv_bytes(bytes: &[u8]) -> Result<CheckReport> {
    let mut r = csv::ReaderBuilder::new().has_headers(false).from_reader(bytes);
    let mut records = r.records();
    let header = records.next().ok_or_else(|| Error::Schema("empty file".into()))??;
    let fields: Vec<&str> = header.iter().collect();
    let schema = Schema::from_header(&fields)
        .ok_or_else(|| Error::Schema(format!("unrecognized header {:?}", fields.join(","))))?;
    let cols = schema.columns();
    let mut rows = 0;
    for (line, rec) in records.enumerate() {
        let rec = rec?;
        if rec.len() != cols.len() {
            return Err(Error::Schema(format!("row {}: expected {} fields, got {}", line + 1, cols.len(), rec.len())));
        }
        for ((col, value), name) in cols.iter().zip(rec.iter()).zip(schema.header()) {
            if !check_field(*col, value) {
                return Err(Error::Schema(format!("row {}: bad value {value:?} in column {name}", line + 1)));
            }
        }
        rows += 1;
    }
    Ok(CheckReport { schema: Some(schema), rows })
}

/// Validate a CSV against the known schemas, or a JSON file for well-formedness.
pub fn check_file(path: &Path) -> Result<CheckReport> {
    let bytes = fs::read(path)?;
    if path.extension().is_some_and(|e| e == "json") {
        let v: serde_json::Value = serde_json::from_slice(&bytes)?;
        let rows = match &v {
            serde_json::Value::Object(m) => m.len(),
            serde_json::Value::Array(a) => a.len(),
            _ => 1,
        };
        return Ok(CheckReport { schema: None, rows });
    }
    check_csv_bytes(&bytes)
}

//! Two-dimensional sweeps over `(G/ω_m, Δ_f/ω_m)`.

use std::io::{Read, Write};
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cycle::{otto_cycle, CycleConfig};
use crate::error::{Error, Result};
use crate::model::stability_classification;
use crate::scenario::{MaskPolicy, Scenario};

pub const CSV_HEADER: [&str; 11] = [
    "g_over_wm",
    "deltaf_over_wm",
    "stable",
    "omega_i",
    "omega_f",
    "n_i",
    "n_f",
    "work_hbar_wm",
    "heat_hbar_wm",
    "efficiency",
    "hybrid_warn",
];

/// Cycle quantities of one grid cell. Frequencies in rad/s, work and heat in
/// units of `ħω_m`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CellCycle {
    pub omega_i: f64,
    pub omega_f: f64,
    pub n_i: f64,
    pub n_f: f64,
    pub work: f64,
    pub heat: f64,
    pub efficiency: f64,
    pub hybrid_warn: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CellRecord {
    pub g_over_wm: f64,
    pub deltaf_over_wm: f64,
    pub stable: bool,
    /// `None` on masked cells.
    pub cycle: Option<CellCycle>,
}

/// Rectangular grid of cell records, row-major with `G/ω_m` as the row index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    pub g_axis: Vec<f64>,
    pub deltaf_axis: Vec<f64>,
    pub cells: Vec<CellRecord>,
    pub warnings: Vec<String>,
}

impl SweepTable {
    pub fn shape(&self) -> (usize, usize) {
        (self.g_axis.len(), self.deltaf_axis.len())
    }

    pub fn cell(&self, row: usize, col: usize) -> &CellRecord {
        &self.cells[row * self.deltaf_axis.len() + col]
    }

    pub fn stable_count(&self) -> usize {
        self.cells.iter().filter(|c| c.stable).count()
    }

    /// Cell with the largest work among evaluated cells.
    pub fn max_work_cell(&self) -> Option<&CellRecord> {
        self.cells
            .iter()
            .filter(|c| c.cycle.is_some())
            .max_by(|a, b| a.cycle.unwrap().work.total_cmp(&b.cycle.unwrap().work))
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let table_err = |e: csv::Error| Error::Table(e.to_string());
        w.write_record(CSV_HEADER).map_err(table_err)?;
        for c in &self.cells {
            let mut rec = vec![fmt_f64(c.g_over_wm), fmt_f64(c.deltaf_over_wm), c.stable.to_string()];
            match &c.cycle {
                Some(y) => rec.extend([
                    fmt_f64(y.omega_i),
                    fmt_f64(y.omega_f),
                    fmt_f64(y.n_i),
                    fmt_f64(y.n_f),
                    fmt_f64(y.work),
                    fmt_f64(y.heat),
                    fmt_f64(y.efficiency),
                    y.hybrid_warn.to_string(),
                ]),
                None => rec.extend(std::iter::repeat_n(String::new(), 8)),
            }
            w.write_record(&rec).map_err(table_err)?;
        }
        w.flush().map_err(|e| Error::Table(e.to_string()))?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        String::from_utf8(buf).map_err(|e| Error::Table(e.to_string()))
    }

    pub fn save_csv(&self, path: &Path) -> Result<()> {
        let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        self.write_csv(std::io::BufWriter::new(file)).map_err(|e| match e {
            Error::Table(m) => Error::Io {
                path: path.display().to_string(),
                message: m,
            },
            other => other,
        })
    }

    pub fn load_csv(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        Self::read_csv(file)
    }

    /// Rebuilds a table from CSV rows. Rows may come in any order; the axes
    /// are recovered from the distinct coordinates.
    pub fn read_csv<R: Read>(input: R) -> Result<Self> {
        let mut r = csv::Reader::from_reader(input);
        let headers = r.headers().map_err(|e| Error::Table(e.to_string()))?.clone();
        if headers.iter().ne(CSV_HEADER.iter().copied()) {
            return Err(Error::Table(format!("unexpected header: {headers:?}")));
        }
        let mut cells = Vec::new();
        for (i, rec) in r.records().enumerate() {
            let rec = rec.map_err(|e| Error::Table(e.to_string()))?;
            cells.push(parse_row(&rec).map_err(|m| Error::Table(format!("row {}: {m}", i + 2)))?);
        }
        let mut g_axis: Vec<f64> = cells.iter().map(|c| c.g_over_wm).collect();
        let mut d_axis: Vec<f64> = cells.iter().map(|c| c.deltaf_over_wm).collect();
        for axis in [&mut g_axis, &mut d_axis] {
            axis.sort_by(f64::total_cmp);
            axis.dedup();
        }
        if g_axis.len() * d_axis.len() != cells.len() || cells.is_empty() {
            return Err(Error::Table(format!(
                "{} rows do not form a {}x{} grid",
                cells.len(),
                g_axis.len(),
                d_axis.len()
            )));
        }
        let mut grid: Vec<Option<CellRecord>> = vec![None; cells.len()];
        for c in cells {
            let row = g_axis.binary_search_by(|v| v.total_cmp(&c.g_over_wm)).unwrap();
            let col = d_axis.binary_search_by(|v| v.total_cmp(&c.deltaf_over_wm)).unwrap();
            let slot = &mut grid[row * d_axis.len() + col];
            if slot.is_some() {
                return Err(Error::Table(format!(
                    "duplicate cell ({}, {})",
                    c.g_over_wm, c.deltaf_over_wm
                )));
            }
            *slot = Some(c);
        }
        Ok(SweepTable {
            g_axis,
            deltaf_axis: d_axis,
            cells: grid.into_iter().map(Option::unwrap).collect(),
            warnings: Vec::new(),
        })
    }
}

/// 17 significant digits, enough to round-trip any f64.
fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn parse_row(rec: &csv::StringRecord) -> std::result::Result<CellRecord, String> {
    if rec.len() != CSV_HEADER.len() {
        return Err(format!("expected {} fields, got {}", CSV_HEADER.len(), rec.len()));
    }
    let num = |i: usize| -> std::result::Result<f64, String> {
        rec[i]
            .parse()
            .map_err(|_| format!("field `{}` is not a number: `{}`", CSV_HEADER[i], &rec[i]))
    };
    let flag = |i: usize| -> std::result::Result<bool, String> {
        rec[i]
            .parse()
            .map_err(|_| format!("field `{}` is not a boolean: `{}`", CSV_HEADER[i], &rec[i]))
    };
    let cycle = if rec[3].is_empty() {
        None
    } else {
        Some(CellCycle {
            omega_i: num(3)?,
            omega_f: num(4)?,
            n_i: num(5)?,
            n_f: num(6)?,
            work: num(7)?,
            heat: num(8)?,
            efficiency: num(9)?,
            hybrid_warn: flag(10)?,
        })
    };
    Ok(CellRecord {
        g_over_wm: num(0)?,
        deltaf_over_wm: num(1)?,
        stable: flag(2)?,
        cycle,
    })
}

fn evaluate_cell(scenario: &Scenario, g_over_wm: f64, deltaf_over_wm: f64) -> Result<CellRecord> {
    let base = scenario.params(g_over_wm);
    let delta_f = deltaf_over_wm * scenario.omega_m;
    let (stable_f, _) = stability_classification(&base.with_detuning(delta_f))?;
    let (stable_i, _) = stability_classification(&base)?;
    let stable = stable_f && stable_i;
    let mut cell = CellRecord {
        g_over_wm,
        deltaf_over_wm,
        stable,
        cycle: None,
    };
    if !stable {
        return Ok(cell);
    }
    let r = otto_cycle(&CycleConfig::new(base, scenario.delta_i, delta_f, scenario.branch))?;
    if scenario.mask == MaskPolicy::UnstableOrNonEngine && !r.is_engine() {
        return Ok(cell);
    }
    cell.cycle = Some(CellCycle {
        omega_i: r.omega_i,
        omega_f: r.omega_f,
        n_i: r.n_i,
        n_f: r.n_f,
        work: r.work_in_quanta(scenario.omega_m),
        heat: r.heat_in_quanta(scenario.omega_m),
        efficiency: r.efficiency,
        hybrid_warn: r.hybridization_warning,
    });
    Ok(cell)
}

/// Evaluates the cycle at every cell centre of the scenario grid.
///
/// `workers = None` uses the global rayon pool. Each cell is a pure function
/// of its coordinates, so the table does not depend on the worker count.
pub fn run_sweep(scenario: &Scenario, workers: Option<usize>) -> Result<SweepTable> {
    scenario.validate()?;
    let (g_axis, d_axis) = scenario.axes();
    let coords: Vec<(f64, f64)> = g_axis
        .iter()
        .flat_map(|&g| d_axis.iter().map(move |&d| (g, d)))
        .collect();
    let eval =
        || -> Result<Vec<CellRecord>> { coords.par_iter().map(|&(g, d)| evaluate_cell(scenario, g, d)).collect() };
    let cells = match workers {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| Error::invalid("workers", e.to_string()))?
            .install(eval)?,
        None => eval()?,
    };
    let mut warnings = Vec::new();
    if !cells.iter().any(|c| c.stable) {
        warnings.push("no stable cell in the requested grid".to_string());
    }
    Ok(SweepTable {
        g_axis,
        deltaf_axis: d_axis,
        cells,
        warnings,
    })
}

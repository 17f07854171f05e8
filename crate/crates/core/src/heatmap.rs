//! PNG heatmaps of sweep tables.
//!
//! Layout: `Δ_f/ω_m` increases to the right, `G/ω_m` increases upward. Each
//! cell is a square block of pixels; a colour bar (low at the bottom) sits to
//! the right of the map. Colours follow an 9-stop viridis table with linear
//! interpolation in RGB. Unstable cells are white; stable cells without cycle
//! values (masked by policy) are light grey.
//!
//! Scale: efficiency maps span `[0, 1]`; work maps span `[0, max W]`, or
//! `[min W, max W]` when no cell produces positive work. Values outside the
//! span are clamped.

use std::path::Path;

use crate::error::{Error, Result};
use crate::sweep::SweepTable;

const VIRIDIS: [[u8; 3]; 9] = [
    [68, 1, 84],
    [71, 44, 122],
    [59, 81, 139],
    [44, 113, 142],
    [33, 144, 141],
    [39, 173, 129],
    [92, 200, 99],
    [170, 220, 50],
    [253, 231, 37],
];

pub const UNSTABLE_COLOUR: [u8; 3] = [255, 255, 255];
pub const MASKED_COLOUR: [u8; 3] = [211, 211, 211];

const TARGET_SIZE: usize = 400;
const BAR_GAP: usize = 8;
const BAR_WIDTH: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Field {
    Work,
    Efficiency,
}

impl std::str::FromStr for Field {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "work" => Ok(Field::Work),
            "efficiency" => Ok(Field::Efficiency),
            other => Err(Error::invalid(
                "field",
                format!("expected work or efficiency, got `{other}`"),
            )),
        }
    }
}

/// Maps `t ∈ [0, 1]` onto the colour table.
pub fn colormap(t: f64) -> [u8; 3] {
    let t = if t.is_nan() { 0.0 } else { t.clamp(0.0, 1.0) };
    let pos = t * (VIRIDIS.len() - 1) as f64;
    let i = (pos.floor() as usize).min(VIRIDIS.len() - 2);
    let f = pos - i as f64;
    let (a, b) = (VIRIDIS[i], VIRIDIS[i + 1]);
    std::array::from_fn(|k| (a[k] as f64 + f * (b[k] as f64 - a[k] as f64)).round() as u8)
}

/// An RGB raster, row-major from the top-left corner.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Raster {
    pub width: usize,
    pub height: usize,
    pub pixels: Vec<u8>,
}

impl Raster {
    pub fn pixel(&self, x: usize, y: usize) -> [u8; 3] {
        let i = 3 * (y * self.width + x);
        [self.pixels[i], self.pixels[i + 1], self.pixels[i + 2]]
    }

    fn put(&mut self, x: usize, y: usize, c: [u8; 3]) {
        let i = 3 * (y * self.width + x);
        self.pixels[i..i + 3].copy_from_slice(&c);
    }
}

fn value_range(table: &SweepTable, field: Field) -> (f64, f64) {
    match field {
        Field::Efficiency => (0.0, 1.0),
        Field::Work => {
            let works = table.cells.iter().filter_map(|c| c.cycle.map(|y| y.work));
            let (lo, hi) = works.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), w| (lo.min(w), hi.max(w)));
            if !hi.is_finite() {
                (0.0, 1.0)
            } else if hi > 0.0 {
                (0.0, hi)
            } else if hi > lo {
                (lo, hi)
            } else {
                (lo - 0.5, hi + 0.5)
            }
        }
    }
}

/// Cell size in pixels for a given grid.
pub fn cell_pixels(rows: usize, cols: usize) -> usize {
    TARGET_SIZE.div_ceil(rows.max(cols)).max(1)
}

pub fn rasterize(table: &SweepTable, field: Field) -> Result<Raster> {
    let (rows, cols) = table.shape();
    if rows == 0 || cols == 0 {
        return Err(Error::Table("cannot render an empty table".into()));
    }
    let px = cell_pixels(rows, cols);
    let map_w = cols * px;
    let map_h = rows * px;
    let width = map_w + BAR_GAP + BAR_WIDTH;
    let mut img = Raster {
        width,
        height: map_h,
        pixels: vec![255; width * map_h * 3],
    };
    let (lo, hi) = value_range(table, field);
    for row in 0..rows {
        for col in 0..cols {
            let cell = table.cell(row, col);
            let colour = match (cell.stable, cell.cycle) {
                (false, _) => UNSTABLE_COLOUR,
                (true, None) => MASKED_COLOUR,
                (true, Some(y)) => {
                    let v = match field {
                        Field::Work => y.work,
                        Field::Efficiency => y.efficiency,
                    };
                    colormap((v - lo) / (hi - lo))
                }
            };
            let y0 = (rows - 1 - row) * px;
            for y in y0..y0 + px {
                for x in col * px..(col + 1) * px {
                    img.put(x, y, colour);
                }
            }
        }
    }
    for y in 0..map_h {
        let t = 1.0 - (y as f64 + 0.5) / map_h as f64;
        let c = colormap(t);
        for x in map_w + BAR_GAP..width {
            img.put(x, y, c);
        }
    }
    Ok(img)
}

pub fn encode_png(raster: &Raster) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    {
        let mut enc = png::Encoder::new(&mut buf, raster.width as u32, raster.height as u32);
        enc.set_color(png::ColorType::Rgb);
        enc.set_depth(png::BitDepth::Eight);
        let mut w = enc.write_header().map_err(|e| Error::Table(e.to_string()))?;
        w.write_image_data(&raster.pixels)
            .map_err(|e| Error::Table(e.to_string()))?;
    }
    Ok(buf)
}

/// Renders `field` of `table` to a PNG file.
pub fn render_heatmap(table: &SweepTable, field: Field, path: &Path) -> Result<()> {
    let bytes = encode_png(&rasterize(table, field)?)?;
    std::fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

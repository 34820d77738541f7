//! Gridded terrain: ESRI ASCII grid ingestion, bilinear ground-height queries
//! and seeded synthetic hill fields.
//!
//! Cell values are treated as grid *nodes*: node `(col, row)` sits at
//! `(origin_x + col * cell_size, origin_y + row * cell_size)` and row 0 is the
//! southernmost row. The first data row of an ESRI file is the northernmost,
//! so it lands at `row = n_rows - 1`.

use std::fmt::Write as _;
use std::fs;
use std::path::Path as FsPath;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum TerrainError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("failed to read DEM {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid terrain: {0}")]
    Invalid(String),
    #[error("query ({x}, {y}) is outside the terrain bounds")]
    OutOfBounds { x: f64, y: f64 },
    #[error("query ({x}, {y}) touches a nodata cell")]
    NoData { x: f64, y: f64 },
    #[error("synthetic terrain config: {0}")]
    Config(String),
}

/// Elevation grid in meters.
#[derive(Debug, Clone, PartialEq)]
pub struct TerrainMap {
    n_cols: usize,
    n_rows: usize,
    origin_x: f64,
    origin_y: f64,
    cell_size: f64,
    nodata_value: Option<f64>,
    /// Row-major, row 0 = south.
    elevations: Vec<f64>,
    range: (f64, f64),
}

impl TerrainMap {
    /// Builds a map from row-major (south-first) elevations, checking every invariant.
    pub fn new(
        n_cols: usize,
        n_rows: usize,
        origin_x: f64,
        origin_y: f64,
        cell_size: f64,
        nodata_value: Option<f64>,
        elevations: Vec<f64>,
    ) -> Result<Self, TerrainError> {
        if n_cols < 2 || n_rows < 2 {
            return Err(TerrainError::Invalid(format!(
                "grid must be at least 2x2, got {n_cols}x{n_rows}"
            )));
        }
        if !(cell_size > 0.0 && cell_size.is_finite()) {
            return Err(TerrainError::Invalid(format!(
                "cell_size must be positive, got {cell_size}"
            )));
        }
        if !origin_x.is_finite() || !origin_y.is_finite() {
            return Err(TerrainError::Invalid("origin must be finite".into()));
        }
        if elevations.len() != n_cols * n_rows {
            return Err(TerrainError::Invalid(format!(
                "expected {} elevations, got {}",
                n_cols * n_rows,
                elevations.len()
            )));
        }
        if let Some(bad) = elevations.iter().find(|&&v| Some(v) != nodata_value && !v.is_finite()) {
            return Err(TerrainError::Invalid(format!("non-finite elevation {bad}")));
        }
        let range = elevations
            .iter()
            .copied()
            .filter(|&v| Some(v) != nodata_value)
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
        if !range.0.is_finite() {
            return Err(TerrainError::Invalid("every cell is nodata".into()));
        }
        Ok(Self {
            n_cols,
            n_rows,
            origin_x,
            origin_y,
            cell_size,
            nodata_value,
            elevations,
            range,
        })
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn origin(&self) -> (f64, f64) {
        (self.origin_x, self.origin_y)
    }

    pub fn cell_size(&self) -> f64 {
        self.cell_size
    }

    pub fn nodata_value(&self) -> Option<f64> {
        self.nodata_value
    }

    pub fn elevations(&self) -> &[f64] {
        &self.elevations
    }

    pub fn x_max(&self) -> f64 {
        self.origin_x + (self.n_cols - 1) as f64 * self.cell_size
    }

    pub fn y_max(&self) -> f64 {
        self.origin_y + (self.n_rows - 1) as f64 * self.cell_size
    }

    /// Whether `(x, y)` lies inside the closed bounding rectangle of the grid nodes.
    pub fn contains(&self, x: f64, y: f64) -> bool {
        x >= self.origin_x && x <= self.x_max() && y >= self.origin_y && y <= self.y_max()
    }

    /// Stored value at node `(col, row)`; `None` for nodata.
    pub fn node(&self, col: usize, row: usize) -> Option<f64> {
        let v = self.elevations[row * self.n_cols + col];
        if self.is_nodata(v) {
            None
        } else {
            Some(v)
        }
    }

    fn is_nodata(&self, v: f64) -> bool {
        self.nodata_value == Some(v)
    }

    /// Smallest and largest valid elevation.
    pub fn elevation_range(&self) -> (f64, f64) {
        self.range
    }

    /// Bilinear ground height at `(x, y)`.
    pub fn height_at(&self, x: f64, y: f64) -> Result<f64, TerrainError> {
        if !(x.is_finite() && y.is_finite()) || !self.contains(x, y) {
            return Err(TerrainError::OutOfBounds { x, y });
        }
        let (c0, u) = cell_coord((x - self.origin_x) / self.cell_size, self.n_cols);
        let (r0, v) = cell_coord((y - self.origin_y) / self.cell_size, self.n_rows);
        let corners = [
            (c0, r0, (1.0 - u) * (1.0 - v)),
            (c0 + 1, r0, u * (1.0 - v)),
            (c0, r0 + 1, (1.0 - u) * v),
            (c0 + 1, r0 + 1, u * v),
        ];
        let mut h = 0.0;
        for (c, r, weight) in corners {
            if weight == 0.0 {
                continue;
            }
            match self.node(c, r) {
                Some(value) => h += weight * value,
                None => return Err(TerrainError::NoData { x, y }),
            }
        }
        Ok(h)
    }

    /// Serializes to ESRI ASCII grid text. Values use the shortest exact
    /// decimal form so a reload reproduces every elevation bit for bit.
    pub fn to_esri_ascii(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "ncols {}", self.n_cols);
        let _ = writeln!(out, "nrows {}", self.n_rows);
        let _ = writeln!(out, "xllcorner {}", self.origin_x);
        let _ = writeln!(out, "yllcorner {}", self.origin_y);
        let _ = writeln!(out, "cellsize {}", self.cell_size);
        if let Some(nd) = self.nodata_value {
            let _ = writeln!(out, "NODATA_value {nd}");
        }
        for row in (0..self.n_rows).rev() {
            let line = &self.elevations[row * self.n_cols..(row + 1) * self.n_cols];
            let mut first = true;
            for v in line {
                if !first {
                    out.push(' ');
                }
                first = false;
                let _ = write!(out, "{v}");
            }
            out.push('\n');
        }
        out
    }

    pub fn save_esri_ascii(&self, path: impl AsRef<FsPath>) -> std::io::Result<()> {
        fs::write(path, self.to_esri_ascii())
    }
}

/// Splits a fractional grid coordinate into the lower cell index and the
/// offset inside the cell. Coordinates within 1e-9 of a node snap onto it so
/// node queries are exact.
fn cell_coord(t: f64, n: usize) -> (usize, f64) {
    let rounded = t.round();
    let t = if (t - rounded).abs() < 1e-9 { rounded } else { t };
    let last = (n - 2) as f64;
    let base = t.floor().clamp(0.0, last);
    (base as usize, (t - base).clamp(0.0, 1.0))
}

/// Reads an ESRI ASCII grid from disk.
pub fn load_dem(file_path: impl AsRef<FsPath>) -> Result<TerrainMap, TerrainError> {
    let path = file_path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| TerrainError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_esri_ascii(&text)
}

/// Parses ESRI ASCII grid text. Header keys are case-insensitive; each data
/// line must hold exactly one row.
pub fn parse_esri_ascii(text: &str) -> Result<TerrainMap, TerrainError> {
    #[derive(Default)]
    struct Header {
        ncols: Option<usize>,
        nrows: Option<usize>,
        xll: Option<f64>,
        yll: Option<f64>,
        cellsize: Option<f64>,
        nodata: Option<f64>,
    }

    fn set<T>(slot: &mut Option<T>, value: T, key: &str, line: usize) -> Result<(), TerrainError> {
        if slot.is_some() {
            return Err(TerrainError::Parse {
                line,
                message: format!("duplicate header key {key}"),
            });
        }
        *slot = Some(value);
        Ok(())
    }

    let mut header = Header::default();
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l)).peekable();

    while let Some(&(line_no, line)) = lines.peek() {
        let trimmed = line.trim();
        if trimmed.is_empty() {
            lines.next();
            continue;
        }
        let mut parts = trimmed.split_whitespace();
        let key = parts.next().unwrap_or_default();
        if !key.starts_with(|c: char| c.is_ascii_alphabetic()) {
            break;
        }
        lines.next();
        let value = parts.next().ok_or_else(|| TerrainError::Parse {
            line: line_no,
            message: format!("header key {key} has no value"),
        })?;
        if parts.next().is_some() {
            return Err(TerrainError::Parse {
                line: line_no,
                message: format!("header key {key} has extra tokens"),
            });
        }
        let num = |v: &str| -> Result<f64, TerrainError> {
            v.parse::<f64>().map_err(|_| TerrainError::Parse {
                line: line_no,
                message: format!("header key {key}: non-numeric value {v:?}"),
            })
        };
        let count = |v: &str| -> Result<usize, TerrainError> {
            v.parse::<usize>().map_err(|_| TerrainError::Parse {
                line: line_no,
                message: format!("header key {key}: expected a positive integer, got {v:?}"),
            })
        };
        match key.to_ascii_lowercase().as_str() {
            "ncols" => set(&mut header.ncols, count(value)?, key, line_no)?,
            "nrows" => set(&mut header.nrows, count(value)?, key, line_no)?,
            "xllcorner" => set(&mut header.xll, num(value)?, key, line_no)?,
            "yllcorner" => set(&mut header.yll, num(value)?, key, line_no)?,
            "cellsize" => set(&mut header.cellsize, num(value)?, key, line_no)?,
            "nodata_value" => set(&mut header.nodata, num(value)?, key, line_no)?,
            other => {
                return Err(TerrainError::Parse {
                    line: line_no,
                    message: format!("unknown header key {other}"),
                })
            }
        }
    }

    let header_line = lines.peek().map(|&(n, _)| n).unwrap_or(1);
    let missing = |name: &str| TerrainError::Parse {
        line: header_line,
        message: format!("missing header key {name}"),
    };
    let n_cols = header.ncols.ok_or_else(|| missing("ncols"))?;
    let n_rows = header.nrows.ok_or_else(|| missing("nrows"))?;
    let xll = header.xll.ok_or_else(|| missing("xllcorner"))?;
    let yll = header.yll.ok_or_else(|| missing("yllcorner"))?;
    let cellsize = header.cellsize.ok_or_else(|| missing("cellsize"))?;

    // File rows run north to south.
    let mut file_rows: Vec<Vec<f64>> = Vec::with_capacity(n_rows);
    let mut last_line = header_line;
    for (line_no, line) in lines {
        last_line = line_no;
        if line.trim().is_empty() {
            continue;
        }
        let row_index = file_rows.len() + 1;
        if row_index > n_rows {
            return Err(TerrainError::Parse {
                line: line_no,
                message: format!("expected {n_rows} rows, found more"),
            });
        }
        let mut values = Vec::with_capacity(n_cols);
        for token in line.split_whitespace() {
            let v: f64 = token.parse().map_err(|_| TerrainError::Parse {
                line: line_no,
                message: format!("row {row_index}: non-numeric cell {token:?}"),
            })?;
            if Some(v) != header.nodata && !v.is_finite() {
                return Err(TerrainError::Parse {
                    line: line_no,
                    message: format!("row {row_index}: non-finite cell {token:?}"),
                });
            }
            values.push(v);
        }
        if values.len() != n_cols {
            return Err(TerrainError::Parse {
                line: line_no,
                message: format!("row {row_index}: expected {n_cols} values, found {}", values.len()),
            });
        }
        file_rows.push(values);
    }
    if file_rows.len() != n_rows {
        return Err(TerrainError::Parse {
            line: last_line,
            message: format!("expected {n_rows} rows, found {}", file_rows.len()),
        });
    }

    let elevations: Vec<f64> = file_rows.into_iter().rev().flatten().collect();
    TerrainMap::new(n_cols, n_rows, xll, yll, cellsize, header.nodata, elevations)
}

/// One Gaussian bump `amplitude * exp(-r^2 / (2 sigma^2))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Hill {
    pub center_x: f64,
    pub center_y: f64,
    pub amplitude: f64,
    pub sigma: f64,
}

impl Hill {
    pub fn height(&self, x: f64, y: f64) -> f64 {
        let r2 = (x - self.center_x).powi(2) + (y - self.center_y).powi(2);
        self.amplitude * (-r2 / (2.0 * self.sigma * self.sigma)).exp()
    }
}

/// Parameters of a seeded Gaussian-hill terrain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SyntheticTerrainSpec {
    pub n_cols: usize,
    pub n_rows: usize,
    pub cell_size: f64,
    #[serde(default)]
    pub origin_x: f64,
    #[serde(default)]
    pub origin_y: f64,
    #[serde(default)]
    pub base_elevation: f64,
    #[serde(default)]
    pub hill_count: usize,
    /// Inclusive `[min, max]` hill amplitude in meters.
    #[serde(default = "default_amplitude")]
    pub amplitude: [f64; 2],
    /// Inclusive `[min, max]` hill standard deviation in meters.
    #[serde(default = "default_sigma")]
    pub sigma: [f64; 2],
}

fn default_amplitude() -> [f64; 2] {
    [10.0, 50.0]
}

fn default_sigma() -> [f64; 2] {
    [50.0, 150.0]
}

impl SyntheticTerrainSpec {
    /// A flat `n_cols x n_rows` grid at `base_elevation`.
    pub fn flat(n_cols: usize, n_rows: usize, cell_size: f64, base_elevation: f64) -> Self {
        Self {
            n_cols,
            n_rows,
            cell_size,
            origin_x: 0.0,
            origin_y: 0.0,
            base_elevation,
            hill_count: 0,
            amplitude: default_amplitude(),
            sigma: default_sigma(),
        }
    }

    fn validate(&self) -> Result<(), TerrainError> {
        let fail = |m: String| Err(TerrainError::Config(m));
        if self.n_cols < 2 || self.n_rows < 2 {
            return fail(format!(
                "grid must be at least 2x2, got {}x{}",
                self.n_cols, self.n_rows
            ));
        }
        if !(self.cell_size > 0.0 && self.cell_size.is_finite()) {
            return fail(format!("cell_size must be positive, got {}", self.cell_size));
        }
        if !self.base_elevation.is_finite() {
            return fail("base_elevation must be finite".into());
        }
        let [a_lo, a_hi] = self.amplitude;
        if !(a_lo.is_finite() && a_hi.is_finite() && a_lo <= a_hi) {
            return fail(format!("amplitude range {:?} is invalid", self.amplitude));
        }
        let [s_lo, s_hi] = self.sigma;
        if !(s_lo > 0.0 && s_hi.is_finite() && s_lo <= s_hi) {
            return fail(format!("sigma range {:?} must be positive and ordered", self.sigma));
        }
        Ok(())
    }
}

/// Samples hill centers uniformly over the grid and amplitudes/widths
/// uniformly over their ranges, then rasterizes.
pub fn generate_synthetic(spec: &SyntheticTerrainSpec, seed: u64) -> Result<TerrainMap, TerrainError> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let width = (spec.n_cols - 1) as f64 * spec.cell_size;
    let height = (spec.n_rows - 1) as f64 * spec.cell_size;
    let hills: Vec<Hill> = (0..spec.hill_count)
        .map(|_| Hill {
            center_x: spec.origin_x + rng.random::<f64>() * width,
            center_y: spec.origin_y + rng.random::<f64>() * height,
            amplitude: sample_range(&mut rng, spec.amplitude),
            sigma: sample_range(&mut rng, spec.sigma),
        })
        .collect();
    rasterize_hills(spec, &hills)
}

fn sample_range(rng: &mut impl Rng, [lo, hi]: [f64; 2]) -> f64 {
    lo + (hi - lo) * rng.random::<f64>()
}

/// Evaluates `base + sum(hills)` at every grid node of `spec`'s grid
/// (the spec's own hill count and ranges are ignored).
pub fn rasterize_hills(spec: &SyntheticTerrainSpec, hills: &[Hill]) -> Result<TerrainMap, TerrainError> {
    spec.validate()?;
    if let Some(h) = hills
        .iter()
        .find(|h| h.sigma.is_nan() || h.sigma <= 0.0 || !h.amplitude.is_finite())
    {
        return Err(TerrainError::Config(format!("invalid hill {h:?}")));
    }
    let mut elevations = Vec::with_capacity(spec.n_cols * spec.n_rows);
    for row in 0..spec.n_rows {
        let y = spec.origin_y + row as f64 * spec.cell_size;
        for col in 0..spec.n_cols {
            let x = spec.origin_x + col as f64 * spec.cell_size;
            let bumps: f64 = hills.iter().map(|h| h.height(x, y)).sum();
            elevations.push(spec.base_elevation + bumps);
        }
    }
    TerrainMap::new(
        spec.n_cols,
        spec.n_rows,
        spec.origin_x,
        spec.origin_y,
        spec.cell_size,
        None,
        elevations,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_cell(f00: f64, f10: f64, f01: f64, f11: f64) -> TerrainMap {
        TerrainMap::new(2, 2, 0.0, 0.0, 1.0, None, vec![f00, f10, f01, f11]).unwrap()
    }

    #[test]
    fn parses_two_by_two_grid() {
        let text = "ncols 2\nnrows 2\nxllcorner 100\nyllcorner 200\ncellsize 10\n1 2\n3 4\n";
        let map = parse_esri_ascii(text).unwrap();
        assert_eq!(map.elevations().len(), 4);
        assert_eq!(map.origin(), (100.0, 200.0));
        assert_eq!(map.cell_size(), 10.0);
        // first file row is north
        assert_eq!(map.node(0, 1), Some(1.0));
        assert_eq!(map.node(1, 1), Some(2.0));
        assert_eq!(map.node(0, 0), Some(3.0));
        assert_eq!(map.node(1, 0), Some(4.0));
    }

    #[test]
    fn short_row_is_reported_with_row_and_line() {
        let text = "ncols 3\nnrows 2\nxllcorner 0\nyllcorner 0\ncellsize 1\n1 2\n3 4\n";
        let err = parse_esri_ascii(text).unwrap_err().to_string();
        assert!(err.contains("row 1: expected 3 values"), "{err}");
        assert!(err.contains("line 6"), "{err}");
    }

    #[test]
    fn nodata_cells_pass_through() {
        let text = "NCOLS 2\nNROWS 2\nXLLCORNER 0\nYLLCORNER 0\nCELLSIZE 1\nNODATA_value -9999\n1 -9999\n3 4\n";
        let map = parse_esri_ascii(text).unwrap();
        assert_eq!(map.nodata_value(), Some(-9999.0));
        assert_eq!(map.node(1, 1), None);
        assert!(matches!(map.height_at(0.5, 0.5), Err(TerrainError::NoData { .. })));
        assert_eq!(map.height_at(0.0, 0.0).unwrap(), 3.0);
    }

    #[test]
    fn header_errors() {
        let missing = "ncols 2\nnrows 2\nxllcorner 0\ncellsize 1\n1 2\n3 4\n";
        assert!(parse_esri_ascii(missing)
            .unwrap_err()
            .to_string()
            .contains("missing header key yllcorner"));
        let dup = "ncols 2\nncols 2\nnrows 2\nxllcorner 0\nyllcorner 0\ncellsize 1\n1 2\n3 4\n";
        let err = parse_esri_ascii(dup).unwrap_err().to_string();
        assert!(err.contains("line 2") && err.contains("duplicate"), "{err}");
        let bad_cell = "ncols 2\nnrows 2\nxllcorner 0\nyllcorner 0\ncellsize 1\n1 x\n3 4\n";
        let err = parse_esri_ascii(bad_cell).unwrap_err().to_string();
        assert!(err.contains("line 6") && err.contains("non-numeric"), "{err}");
        let few_rows = "ncols 2\nnrows 3\nxllcorner 0\nyllcorner 0\ncellsize 1\n1 2\n3 4\n";
        assert!(parse_esri_ascii(few_rows)
            .unwrap_err()
            .to_string()
            .contains("expected 3 rows"));
    }

    #[test]
    fn node_queries_are_exact() {
        let spec = SyntheticTerrainSpec {
            hill_count: 4,
            ..SyntheticTerrainSpec::flat(11, 7, 0.1, 3.0)
        };
        let map = generate_synthetic(&spec, 9).unwrap();
        for row in 0..map.n_rows() {
            for col in 0..map.n_cols() {
                let x = col as f64 * 0.1;
                let y = row as f64 * 0.1;
                assert_eq!(map.height_at(x, y).unwrap(), map.node(col, row).unwrap());
            }
        }
    }

    #[test]
    fn bilinear_values() {
        let map = unit_cell(0.0, 0.0, 10.0, 10.0);
        assert_eq!(map.height_at(0.5, 0.5).unwrap(), 5.0);
        // (1-u)(1-v)f00 + u(1-v)f10 + (1-u)v f01 + uv f11 at u=0.25, v=0.75
        // = 0.1875*1 + 0.0625*2 + 0.5625*3 + 0.1875*4 = 2.75
        let map = unit_cell(1.0, 2.0, 3.0, 4.0);
        assert!((map.height_at(0.25, 0.75).unwrap() - 2.75).abs() < 1e-12);
    }

    #[test]
    fn out_of_bounds_is_an_error() {
        let map = unit_cell(1.0, 2.0, 3.0, 4.0);
        assert!(matches!(map.height_at(1.5, 0.5), Err(TerrainError::OutOfBounds { .. })));
        assert!(matches!(
            map.height_at(0.5, -0.01),
            Err(TerrainError::OutOfBounds { .. })
        ));
        assert!(matches!(
            map.height_at(f64::NAN, 0.5),
            Err(TerrainError::OutOfBounds { .. })
        ));
        assert_eq!(map.height_at(1.0, 1.0).unwrap(), 4.0);
    }

    #[test]
    fn flat_synthetic_has_base_everywhere() {
        let map = generate_synthetic(&SyntheticTerrainSpec::flat(5, 4, 2.0, 100.0), 1).unwrap();
        assert!(map.elevations().iter().all(|&v| v == 100.0));
    }

    #[test]
    fn hill_on_node_adds_amplitude() {
        let spec = SyntheticTerrainSpec::flat(5, 5, 10.0, 7.0);
        let hill = Hill {
            center_x: 20.0,
            center_y: 30.0,
            amplitude: 50.0,
            sigma: 15.0,
        };
        let map = rasterize_hills(&spec, &[hill]).unwrap();
        assert_eq!(map.node(2, 3), Some(57.0));
    }

    #[test]
    fn synthetic_is_deterministic() {
        let spec = SyntheticTerrainSpec {
            hill_count: 6,
            ..SyntheticTerrainSpec::flat(21, 21, 5.0, 0.0)
        };
        let a = generate_synthetic(&spec, 42).unwrap();
        let b = generate_synthetic(&spec, 42).unwrap();
        assert_eq!(a, b);
        let c = generate_synthetic(&spec, 43).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn synthetic_rejects_bad_config() {
        let mut spec = SyntheticTerrainSpec::flat(1, 5, 1.0, 0.0);
        assert!(matches!(generate_synthetic(&spec, 0), Err(TerrainError::Config(_))));
        spec.n_cols = 5;
        spec.cell_size = 0.0;
        assert!(generate_synthetic(&spec, 0).is_err());
        spec.cell_size = 1.0;
        spec.sigma = [0.0, 1.0];
        assert!(generate_synthetic(&spec, 0).is_err());
    }

    #[test]
    fn ascii_round_trip_is_exact() {
        let spec = SyntheticTerrainSpec {
            hill_count: 3,
            origin_x: -12.5,
            ..SyntheticTerrainSpec::flat(9, 6, 3.3, 1.0 / 3.0)
        };
        let map = generate_synthetic(&spec, 5).unwrap();
        let back = parse_esri_ascii(&map.to_esri_ascii()).unwrap();
        assert_eq!(map, back);
    }
}

//! Problem instances: terrain, cylindrical threats, fixed endpoints, the
//! altitude corridor and the cost weights.

use std::fs;
use std::path::{Path as FsPath, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::Point3;
use crate::terrain::{generate_synthetic, load_dem, SyntheticTerrainSpec, TerrainError, TerrainMap};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{field}: {message}")]
    Invalid { field: String, message: String },
    #[error("scenario file {path}: {message}")]
    Schema { path: String, message: String },
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("terrain: {0}")]
    Terrain(#[from] TerrainError),
}

fn invalid(field: &str, message: impl Into<String>) -> ConfigError {
    ConfigError::Invalid {
        field: field.to_string(),
        message: message.into(),
    }
}

/// Vertical cylinder whose footprint is a disc of `radius` around the center.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Threat {
    #[serde(rename = "x")]
    pub center_x: f64,
    #[serde(rename = "y")]
    pub center_y: f64,
    #[serde(rename = "r")]
    pub radius: f64,
}

impl Threat {
    pub const fn new(center_x: f64, center_y: f64, radius: f64) -> Self {
        Self {
            center_x,
            center_y,
            radius,
        }
    }

    pub fn horizontal_distance(&self, p: Point3) -> f64 {
        (p.x - self.center_x).hypot(p.y - self.center_y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlightConstraints {
    /// Minimum height above ground, meters.
    pub h_min: f64,
    /// Maximum height above ground, meters.
    pub h_max: f64,
    /// UAV diameter `D`, meters.
    pub drone_diameter: f64,
    /// Danger distance `S` around each collision zone, meters.
    pub danger_distance: f64,
}

impl Default for FlightConstraints {
    fn default() -> Self {
        Self {
            h_min: 20.0,
            h_max: 120.0,
            drone_diameter: 1.0,
            danger_distance: 10.0,
        }
    }
}

impl FlightConstraints {
    /// Center of the altitude corridor above ground.
    pub fn mid_height(&self) -> f64 {
        0.5 * (self.h_max + self.h_min)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let all = [self.h_min, self.h_max, self.drone_diameter, self.danger_distance];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(invalid("constraints", "all values must be finite"));
        }
        if self.h_min < 0.0 {
            return Err(invalid("constraints.h_min", "must be >= 0"));
        }
        if self.h_min >= self.h_max {
            return Err(invalid("constraints.h_min", "h_min < h_max violated"));
        }
        if self.drone_diameter <= 0.0 {
            return Err(invalid("constraints.drone_diameter", "must be > 0"));
        }
        if self.danger_distance < 0.0 {
            return Err(invalid("constraints.danger_distance", "must be >= 0"));
        }
        Ok(())
    }
}

/// Weights `b1..b4` on the length, threat, altitude and smoothness costs and
/// the turn/climb penalty coefficients `a1`, `a2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CostWeights {
    pub b1: f64,
    pub b2: f64,
    pub b3: f64,
    pub b4: f64,
    pub a1: f64,
    pub a2: f64,
}

impl Default for CostWeights {
    fn default() -> Self {
        Self {
            b1: 1.0,
            b2: 1.0,
            b3: 1.0,
            b4: 1.0,
            a1: 1.0,
            a2: 1.0,
        }
    }
}

impl CostWeights {
    pub fn validate(&self) -> Result<(), ConfigError> {
        let named = [
            ("b1", self.b1),
            ("b2", self.b2),
            ("b3", self.b3),
            ("b4", self.b4),
            ("a1", self.a1),
            ("a2", self.a2),
        ];
        for (name, v) in named {
            if !(v.is_finite() && v >= 0.0) {
                return Err(invalid(&format!("weights.{name}"), "must be finite and >= 0"));
            }
        }
        if [self.b1, self.b2, self.b3, self.b4].iter().all(|&b| b == 0.0) {
            return Err(invalid("weights", "at least one of b1..b4 must be > 0"));
        }
        Ok(())
    }
}

/// A complete, validated planning problem.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub terrain: Arc<TerrainMap>,
    pub threats: Vec<Threat>,
    pub start: Point3,
    pub goal: Point3,
    pub constraints: FlightConstraints,
    pub weights: CostWeights,
    pub n_waypoints: usize,
}

impl Scenario {
    pub fn new(
        terrain: Arc<TerrainMap>,
        threats: Vec<Threat>,
        start: Point3,
        goal: Point3,
        constraints: FlightConstraints,
        weights: CostWeights,
        n_waypoints: usize,
    ) -> Result<Self, ConfigError> {
        let scenario = Self {
            terrain,
            threats,
            start,
            goal,
            constraints,
            weights,
            n_waypoints,
        };
        scenario.validate()?;
        Ok(scenario)
    }

    /// Checks every scenario invariant.
    pub fn validate(&self) -> Result<(), ConfigError> {
        self.constraints.validate()?;
        self.weights.validate()?;
        if self.n_waypoints < 3 {
            return Err(invalid("n_waypoints", "must be >= 3"));
        }
        for (i, t) in self.threats.iter().enumerate() {
            if !(t.radius > 0.0 && t.radius.is_finite()) {
                return Err(invalid(&format!("threats[{i}].r"), "radius must be > 0"));
            }
            if !self.terrain.contains(t.center_x, t.center_y) {
                return Err(invalid(&format!("threats[{i}]"), "center outside terrain bounds"));
            }
        }
        for (name, p) in [("start", self.start), ("goal", self.goal)] {
            if !p.is_finite() {
                return Err(invalid(name, "coordinates must be finite"));
            }
            let ground = self
                .terrain
                .height_at(p.x, p.y)
                .map_err(|e| invalid(name, e.to_string()))?;
            let h = p.z - ground;
            if h < self.constraints.h_min || h > self.constraints.h_max {
                return Err(invalid(
                    name,
                    format!(
                        "height above ground {h} outside altitude corridor [{}, {}]",
                        self.constraints.h_min, self.constraints.h_max
                    ),
                ));
            }
            let collision = self.constraints.drone_diameter;
            if self
                .threats
                .iter()
                .any(|t| t.horizontal_distance(p) <= collision + t.radius)
            {
                return Err(invalid(name, format!("{name} inside collision zone")));
            }
        }
        Ok(())
    }

    /// Number of free interior waypoints, `n - 2`.
    pub fn interior_count(&self) -> usize {
        self.n_waypoints - 2
    }

    pub fn straight_line_distance(&self) -> f64 {
        self.start.distance(self.goal)
    }

    /// Upper bound on a single spherical step: twice the mean straight-line step.
    pub fn rho_max(&self) -> f64 {
        2.0 * self.straight_line_distance() / (self.n_waypoints - 1) as f64
    }

    /// Cartesian search box `[lo, hi]` per axis: the terrain rectangle in x/y
    /// and `[min ground + h_min, max ground + h_max]` in z.
    pub fn cartesian_bounds(&self) -> [(f64, f64); 3] {
        let (ox, oy) = self.terrain.origin();
        let (g_lo, g_hi) = self.terrain.elevation_range();
        [
            (ox, self.terrain.x_max()),
            (oy, self.terrain.y_max()),
            (g_lo + self.constraints.h_min, g_hi + self.constraints.h_max),
        ]
    }
}

// ---------------------------------------------------------------------------
// File schema

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointConfig {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl From<PointConfig> for Point3 {
    fn from(p: PointConfig) -> Self {
        Point3::new(p.x, p.y, p.z)
    }
}

impl From<Point3> for PointConfig {
    fn from(p: Point3) -> Self {
        PointConfig { x: p.x, y: p.y, z: p.z }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TerrainConfig {
    /// ESRI ASCII grid, relative paths resolved against the scenario file's directory.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dem_path: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub synthetic: Option<SyntheticTerrainSpec>,
    /// Seed for the synthetic generator.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThreatConfig {
    pub x: f64,
    pub y: f64,
    pub r: f64,
}

/// On-disk scenario description (TOML).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub n_waypoints: usize,
    pub terrain: TerrainConfig,
    pub start: PointConfig,
    pub goal: PointConfig,
    #[serde(default)]
    pub constraints: FlightConstraints,
    #[serde(default)]
    pub weights: CostWeights,
    #[serde(default)]
    pub threats: Vec<ThreatConfig>,
}

impl ScenarioConfig {
    pub fn from_toml(text: &str) -> Result<Self, toml::de::Error> {
        toml::from_str(text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scenario config is always serializable")
    }

    /// Materializes the terrain and validates the resulting scenario.
    /// `base_dir` anchors relative DEM paths.
    pub fn build(&self, base_dir: &FsPath) -> Result<Scenario, ConfigError> {
        let terrain = match (&self.terrain.dem_path, &self.terrain.synthetic) {
            (Some(_), Some(_)) => return Err(invalid("terrain", "set exactly one of dem_path or synthetic")),
            (None, None) => return Err(invalid("terrain", "one of dem_path or synthetic is required")),
            (Some(dem), None) => {
                if self.terrain.seed.is_some() {
                    return Err(invalid("terrain.seed", "only valid with a synthetic terrain"));
                }
                let path = resolve(base_dir, dem);
                if !path.exists() {
                    return Err(invalid(
                        "terrain.dem_path",
                        format!("{} does not exist", path.display()),
                    ));
                }
                load_dem(&path)?
            }
            (None, Some(spec)) => generate_synthetic(spec, self.terrain.seed.unwrap_or(0))?,
        };
        let threats = self.threats.iter().map(|t| Threat::new(t.x, t.y, t.r)).collect();
        Scenario::new(
            Arc::new(terrain),
            threats,
            self.start.clone().into(),
            self.goal.clone().into(),
            self.constraints,
            self.weights,
            self.n_waypoints,
        )
    }

    /// Describes `scenario` with its terrain pointing at `dem_path`.
    pub fn describe(scenario: &Scenario, dem_path: &str) -> Self {
        Self {
            n_waypoints: scenario.n_waypoints,
            terrain: TerrainConfig {
                dem_path: Some(dem_path.to_string()),
                synthetic: None,
                seed: None,
            },
            start: scenario.start.into(),
            goal: scenario.goal.into(),
            constraints: scenario.constraints,
            weights: scenario.weights,
            threats: scenario
                .threats
                .iter()
                .map(|t| ThreatConfig {
                    x: t.center_x,
                    y: t.center_y,
                    r: t.radius,
                })
                .collect(),
        }
    }
}

fn resolve(base_dir: &FsPath, p: &str) -> PathBuf {
    let path = PathBuf::from(p);
    if path.is_absolute() {
        path
    } else {
        base_dir.join(path)
    }
}

/// Reads and validates a TOML scenario file.
pub fn load_scenario(file_path: impl AsRef<FsPath>) -> Result<Scenario, ConfigError> {
    let path = file_path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let config = ScenarioConfig::from_toml(&text).map_err(|e| ConfigError::Schema {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    config.build(path.parent().unwrap_or(FsPath::new(".")))
}

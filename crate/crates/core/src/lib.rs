//! UAV path planning on gridded terrain with swarm and evolutionary solvers.
//!
//! A [`Scenario`] bundles terrain, cylindrical threats, endpoints and flight
//! constraints. [`total_cost`] scores a waypoint [`Path`] against it, and
//! [`optimizers::run`] searches for a cheap path with one of seven
//! [`Algorithm`]s. The [`bench`] module runs seeded comparison matrices and
//! [`stats`] turns them into mean/std/t-test tables.

pub mod bench;
pub mod cost;
pub mod encodings;
pub mod export;
pub mod geometry;
pub mod optimizers;
pub mod scenario;
pub mod stats;
pub mod suite;
pub mod terrain;

pub use cost::{total_cost, CostBreakdown, CostError, Path};
pub use encodings::{EncodingKind, SearchSpace, SphericalVector};
pub use geometry::Point3;
pub use optimizers::{run, Algorithm, EvolutionTrace, OptimizeError, RunOutcome, SwarmConfig};
pub use scenario::{load_scenario, ConfigError, CostWeights, FlightConstraints, Scenario, ScenarioConfig, Threat};
pub use stats::{mean_std, paired_t_test, SampleSummary, TTestVerdict, Verdict};
pub use suite::{build_benchmark_suite, SuiteEntry};
pub use terrain::{load_dem, TerrainError, TerrainMap};

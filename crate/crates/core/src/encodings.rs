//! Genome encodings and their decode maps to Cartesian paths.
//!
//! Three fixed-length encodings cover the swarm solvers:
//!
//! * Cartesian: interior waypoints laid out `(x1, y1, z1, ..., xN, yN, zN)`.
//! * Phase angle: the same layout, each coordinate replaced by an angle
//!   `theta` in `[-pi/2, pi/2]` mapped through
//!   `x = ((hi - lo) sin(theta) + hi + lo) / 2`.
//! * Spherical vector: one `(rho, psi, phi)` step per interior waypoint,
//!   chained from the start with
//!   `dx = rho sin(psi) cos(phi)`, `dy = rho sin(psi) sin(phi)`, `dz = rho cos(psi)`.
//!   Here `psi` is measured from the vertical axis and `phi` is the azimuth.
//!
//! The goal is never part of a genome; every decode appends it as the final
//! waypoint.
//!
//! The optimizers work on flat `f64` slices described by a [`SearchSpace`];
//! the typed genomes below are thin views over the same layout.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use rand::Rng;
use thiserror::Error;

use crate::cost::Path;
use crate::geometry::{Point3, EPS_LEN};
use crate::scenario::Scenario;

#[derive(Debug, Error, PartialEq)]
pub enum EncodingError {
    #[error("genome has {actual} values, the scenario needs {expected}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("step {index} is degenerate (length below {EPS_LEN} m)")]
    DegenerateStep { index: usize },
}

/// Wraps an angle into `(-pi, pi]`.
pub fn wrap_angle(phi: f64) -> f64 {
    if phi > -PI && phi <= PI {
        return phi;
    }
    let two_pi = 2.0 * PI;
    let mut w = phi.rem_euclid(two_pi);
    if w > PI {
        w -= two_pi;
    }
    w
}

/// Shortest signed rotation taking `from` to `to`, in `(-pi, pi]`.
pub fn wrapped_difference(to: f64, from: f64) -> f64 {
    wrap_angle(to - from)
}

/// Monotone map from `[-pi/2, pi/2]` onto `[lo, hi]`. The interval ends are
/// returned as given, since the general formula can round off them.
pub fn angle_to_coordinate(theta: f64, lo: f64, hi: f64) -> f64 {
    let s = theta.sin();
    if s >= 1.0 {
        hi
    } else if s <= -1.0 {
        lo
    } else {
        0.5 * ((hi - lo) * s + hi + lo)
    }
}

/// One spherical step `(rho, psi, phi)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SphericalVector {
    pub rho: f64,
    pub psi: f64,
    pub phi: f64,
}

impl SphericalVector {
    pub const fn new(rho: f64, psi: f64, phi: f64) -> Self {
        Self { rho, psi, phi }
    }

    /// The Cartesian displacement this step produces.
    pub fn displacement(&self) -> Point3 {
        let (sin_psi, cos_psi) = self.psi.sin_cos();
        let (sin_phi, cos_phi) = self.phi.sin_cos();
        Point3::new(
            self.rho * sin_psi * cos_phi,
            self.rho * sin_psi * sin_phi,
            self.rho * cos_psi,
        )
    }

    /// Inverse of [`displacement`](Self::displacement); `phi` is 0 for a vertical step.
    pub fn from_displacement(d: Point3) -> Self {
        let horizontal = d.horizontal_norm();
        let phi = if horizontal == 0.0 { 0.0 } else { d.y.atan2(d.x) };
        Self {
            rho: d.norm(),
            psi: horizontal.atan2(d.z),
            phi,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CartesianGenome {
    pub coords: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AngleGenome {
    pub angles: Vec<f64>,
    pub velocities: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SphericalGenome {
    pub components: Vec<SphericalVector>,
    pub velocities: Vec<SphericalVector>,
}

impl SphericalGenome {
    pub fn from_flat(position: &[f64], velocity: &[f64]) -> Self {
        let split = |v: &[f64]| {
            v.chunks_exact(3)
                .map(|c| SphericalVector::new(c[0], c[1], c[2]))
                .collect()
        };
        Self {
            components: split(position),
            velocities: split(velocity),
        }
    }

    pub fn position_flat(&self) -> Vec<f64> {
        self.components.iter().flat_map(|u| [u.rho, u.psi, u.phi]).collect()
    }

    pub fn velocity_flat(&self) -> Vec<f64> {
        self.velocities.iter().flat_map(|u| [u.rho, u.psi, u.phi]).collect()
    }
}

fn check_len(expected: usize, actual: usize) -> Result<(), EncodingError> {
    if expected == actual {
        Ok(())
    } else {
        Err(EncodingError::LengthMismatch { expected, actual })
    }
}

fn assemble(scenario: &Scenario, interior: &[Point3]) -> Path {
    Path::from_interior(scenario.start, interior, scenario.goal)
        .expect("scenario guarantees at least one interior waypoint")
}

pub fn decode_cartesian(genome: &CartesianGenome, scenario: &Scenario) -> Result<Path, EncodingError> {
    check_len(3 * scenario.interior_count(), genome.coords.len())?;
    let interior: Vec<Point3> = genome
        .coords
        .chunks_exact(3)
        .map(|c| Point3::new(c[0], c[1], c[2]))
        .collect();
    Ok(assemble(scenario, &interior))
}

pub fn decode_angle(genome: &AngleGenome, scenario: &Scenario) -> Result<Path, EncodingError> {
    check_len(3 * scenario.interior_count(), genome.angles.len())?;
    let axes = scenario.cartesian_bounds();
    let interior: Vec<Point3> = genome
        .angles
        .chunks_exact(3)
        .map(|c| {
            Point3::new(
                angle_to_coordinate(c[0], axes[0].0, axes[0].1),
                angle_to_coordinate(c[1], axes[1].0, axes[1].1),
                angle_to_coordinate(c[2], axes[2].0, axes[2].1),
            )
        })
        .collect();
    Ok(assemble(scenario, &interior))
}

/// Chains the spherical steps from the start, then appends the goal.
pub fn decode_spherical(genome: &SphericalGenome, scenario: &Scenario) -> Result<Path, EncodingError> {
    check_len(scenario.interior_count(), genome.components.len())?;
    Ok(assemble(scenario, &chain(scenario.start, &genome.components)))
}

fn chain(start: Point3, steps: &[SphericalVector]) -> Vec<Point3> {
    let mut prev = start;
    steps
        .iter()
        .map(|u| {
            prev = prev + u.displacement();
            prev
        })
        .collect()
}

/// Spherical steps between consecutive waypoints of `path`, start through
/// the last interior node.
pub fn encode_spherical(path: &Path) -> Result<SphericalGenome, EncodingError> {
    let wp = path.waypoints();
    let steps = &wp[..wp.len() - 1];
    let mut components = Vec::with_capacity(steps.len() - 1);
    for (index, pair) in steps.windows(2).enumerate() {
        let d = pair[1] - pair[0];
        if d.norm() <= EPS_LEN {
            return Err(EncodingError::DegenerateStep { index });
        }
        components.push(SphericalVector::from_displacement(d));
    }
    let velocities = vec![SphericalVector::default(); components.len()];
    Ok(SphericalGenome { components, velocities })
}

// ---------------------------------------------------------------------------
// Flat search spaces used by the solvers

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EncodingKind {
    Cartesian,
    Angle,
    Spherical,
}

/// Interval of one genome coordinate. Wrapping dimensions live on
/// `(-pi, pi]`; the others are clamped to `[lo, hi]`. Velocities are capped
/// at `±v_cap`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dimension {
    pub lo: f64,
    pub hi: f64,
    pub wraps: bool,
    pub v_cap: f64,
}

impl Dimension {
    fn clamped(lo: f64, hi: f64) -> Self {
        Self {
            lo,
            hi,
            wraps: false,
            v_cap: 0.5 * (hi - lo),
        }
    }

    fn azimuth() -> Self {
        Self {
            lo: -PI,
            hi: PI,
            wraps: true,
            v_cap: PI,
        }
    }

    pub fn fix(&self, x: f64) -> f64 {
        if self.wraps {
            wrap_angle(x)
        } else {
            x.clamp(self.lo, self.hi)
        }
    }
}

/// Clamps or wraps every position coordinate and caps every velocity.
pub fn clamp_wrap(position: &mut [f64], velocity: Option<&mut [f64]>, dims: &[Dimension]) {
    for (x, d) in position.iter_mut().zip(dims) {
        *x = d.fix(*x);
    }
    if let Some(velocity) = velocity {
        for (v, d) in velocity.iter_mut().zip(dims) {
            *v = v.clamp(-d.v_cap, d.v_cap);
        }
    }
}

/// Genome layout, bounds and decode map of one encoding for one scenario.
#[derive(Debug, Clone)]
pub struct SearchSpace<'a> {
    kind: EncodingKind,
    scenario: &'a Scenario,
    dims: Vec<Dimension>,
    axes: [(f64, f64); 3],
    bearing: f64,
}

impl<'a> SearchSpace<'a> {
    pub fn new(kind: EncodingKind, scenario: &'a Scenario) -> Self {
        let n = scenario.interior_count();
        let axes = scenario.cartesian_bounds();
        let per_node: [Dimension; 3] = match kind {
            EncodingKind::Cartesian => {
                let a = axes;
                [
                    Dimension::clamped(a[0].0, a[0].1),
                    Dimension::clamped(a[1].0, a[1].1),
                    Dimension::clamped(a[2].0, a[2].1),
                ]
            }
            EncodingKind::Angle => [Dimension::clamped(-FRAC_PI_2, FRAC_PI_2); 3],
            EncodingKind::Spherical => [
                Dimension {
                    v_cap: 0.5 * scenario.rho_max(),
                    ..Dimension::clamped(EPS_LEN, scenario.rho_max())
                },
                Dimension::clamped(-FRAC_PI_2, FRAC_PI_2),
                Dimension::azimuth(),
            ],
        };
        let dims = (0..n).flat_map(|_| per_node).collect();
        let d = scenario.goal - scenario.start;
        Self {
            kind,
            scenario,
            dims,
            axes,
            bearing: d.y.atan2(d.x),
        }
    }

    pub fn kind(&self) -> EncodingKind {
        self.kind
    }

    pub fn scenario(&self) -> &'a Scenario {
        self.scenario
    }

    pub fn dims(&self) -> &[Dimension] {
        &self.dims
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    /// Difference `target - current` along dimension `d`; azimuths take the short way round.
    pub fn difference(&self, d: usize, target: f64, current: f64) -> f64 {
        if self.dims[d].wraps {
            wrapped_difference(target, current)
        } else {
            target - current
        }
    }

    /// Interior waypoints encoded by a flat genome.
    pub fn interior(&self, x: &[f64]) -> Vec<Point3> {
        debug_assert_eq!(x.len(), self.dims.len());
        match self.kind {
            EncodingKind::Cartesian => x.chunks_exact(3).map(|c| Point3::new(c[0], c[1], c[2])).collect(),
            EncodingKind::Angle => x
                .chunks_exact(3)
                .map(|c| {
                    let [ax, ay, az] = self.axes;
                    Point3::new(
                        angle_to_coordinate(c[0], ax.0, ax.1),
                        angle_to_coordinate(c[1], ay.0, ay.1),
                        angle_to_coordinate(c[2], az.0, az.1),
                    )
                })
                .collect(),
            EncodingKind::Spherical => {
                let steps: Vec<SphericalVector> = x
                    .chunks_exact(3)
                    .map(|c| SphericalVector::new(c[0], c[1], c[2]))
                    .collect();
                chain(self.scenario.start, &steps)
            }
        }
    }

    /// Full waypoint list: start, decoded interior, goal.
    pub fn decode(&self, x: &[f64]) -> Path {
        assemble(self.scenario, &self.interior(x))
    }

    /// Uniform sample inside the bounds. Spherical genomes are biased
    /// toward the goal: azimuth within `±pi/2` of the start-goal bearing and
    /// `psi` in `[pi/4, pi/2]`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        match self.kind {
            EncodingKind::Cartesian | EncodingKind::Angle => self
                .dims
                .iter()
                .map(|d| d.lo + (d.hi - d.lo) * rng.random::<f64>())
                .collect(),
            EncodingKind::Spherical => {
                let rho_max = self.scenario.rho_max();
                let mut x = Vec::with_capacity(self.dims.len());
                for _ in 0..self.scenario.interior_count() {
                    x.push((rho_max * rng.random::<f64>()).max(EPS_LEN));
                    x.push(FRAC_PI_4 + FRAC_PI_4 * rng.random::<f64>());
                    x.push(wrap_angle(self.bearing + PI * (rng.random::<f64>() - 0.5)));
                }
                x
            }
        }
    }
}

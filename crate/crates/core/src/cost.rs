//! Path cost model: length, threat, altitude and smoothness terms and their
//! weighted sum. Infeasible paths evaluate to `f64::INFINITY`.

use std::f64::consts::FRAC_PI_2;

use thiserror::Error;

use crate::geometry::{horizontal_point_segment_distance, Point3, EPS_LEN};
use crate::scenario::{CostWeights, FlightConstraints, Scenario, Threat};
use crate::terrain::TerrainMap;

#[derive(Debug, Error, PartialEq)]
pub enum CostError {
    #[error("a path needs at least 3 waypoints, got {0}")]
    TooShort(usize),
    #[error("path {which} {actual:?} does not match the scenario {which} {expected:?}")]
    EndpointMismatch {
        which: &'static str,
        actual: Point3,
        expected: Point3,
    },
}

/// Ordered waypoints including the fixed start and goal.
#[derive(Debug, Clone, PartialEq)]
pub struct Path {
    waypoints: Vec<Point3>,
}

impl Path {
    pub fn new(waypoints: Vec<Point3>) -> Result<Self, CostError> {
        if waypoints.len() < 3 {
            return Err(CostError::TooShort(waypoints.len()));
        }
        Ok(Self { waypoints })
    }

    /// `start`, the interior nodes in order, then `goal`.
    pub fn from_interior(start: Point3, interior: &[Point3], goal: Point3) -> Result<Self, CostError> {
        let mut waypoints = Vec::with_capacity(interior.len() + 2);
        waypoints.push(start);
        waypoints.extend_from_slice(interior);
        waypoints.push(goal);
        Self::new(waypoints)
    }

    pub fn waypoints(&self) -> &[Point3] {
        &self.waypoints
    }

    pub fn interior(&self) -> &[Point3] {
        &self.waypoints[1..self.waypoints.len() - 1]
    }

    pub fn len(&self) -> usize {
        self.waypoints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.waypoints.is_empty()
    }

    pub fn reversed(&self) -> Path {
        let mut waypoints = self.waypoints.clone();
        waypoints.reverse();
        Path { waypoints }
    }
}

/// Per-term costs and their weighted total.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostBreakdown {
    pub f1: f64,
    pub f2: f64,
    pub f3: f64,
    pub f4: f64,
    pub total: f64,
}

impl CostBreakdown {
    pub fn is_feasible(&self) -> bool {
        self.total.is_finite()
    }
}

/// Sum of Euclidean segment lengths.
pub fn path_length_cost(waypoints: &[Point3]) -> f64 {
    waypoints.windows(2).map(|w| w[0].distance(w[1])).sum()
}

/// Threat branch function for one segment and one cylinder, using the
/// horizontal distance from the cylinder axis to the whole segment.
pub fn segment_threat_penalty(
    seg_start: Point3,
    seg_end: Point3,
    threat: &Threat,
    constraints: &FlightConstraints,
) -> f64 {
    let d = horizontal_point_segment_distance(threat.center_x, threat.center_y, seg_start, seg_end);
    threat_branch(d, threat.radius, constraints)
}

/// `0` beyond the danger band, linear inside it, infinite in the collision disc.
pub fn threat_branch(d: f64, radius: f64, constraints: &FlightConstraints) -> f64 {
    let collision = constraints.drone_diameter + radius;
    let outer = constraints.danger_distance + collision;
    if d > outer {
        0.0
    } else if d > collision {
        outer - d
    } else {
        f64::INFINITY
    }
}

pub fn threat_cost(waypoints: &[Point3], threats: &[Threat], constraints: &FlightConstraints) -> f64 {
    let mut total = 0.0;
    for seg in waypoints.windows(2) {
        for threat in threats {
            total += segment_threat_penalty(seg[0], seg[1], threat, constraints);
            if total == f64::INFINITY {
                return total;
            }
        }
    }
    total
}

/// Distance from the corridor center; infinite outside `[h_min, h_max]` or
/// where the ground is unknown.
pub fn altitude_penalty(waypoint: Point3, terrain: &TerrainMap, constraints: &FlightConstraints) -> f64 {
    let Ok(ground) = terrain.height_at(waypoint.x, waypoint.y) else {
        return f64::INFINITY;
    };
    let h = waypoint.z - ground;
    if h >= constraints.h_min && h <= constraints.h_max {
        (h - constraints.mid_height()).abs()
    } else {
        f64::INFINITY
    }
}

pub fn altitude_cost(waypoints: &[Point3], terrain: &TerrainMap, constraints: &FlightConstraints) -> f64 {
    let mut total = 0.0;
    for &p in waypoints {
        total += altitude_penalty(p, terrain, constraints);
        if total == f64::INFINITY {
            break;
        }
    }
    total
}

/// Horizontal turn at `p1` between `p0->p1` and `p1->p2`, in `[0, pi]`.
/// Zero when either horizontal projection is degenerate.
pub fn turn_angle(p0: Point3, p1: Point3, p2: Point3) -> f64 {
    let u = (p1 - p0).horizontal();
    let v = (p2 - p1).horizontal();
    if u.norm() < EPS_LEN || v.norm() < EPS_LEN {
        return 0.0;
    }
    u.cross(v).norm().atan2(u.dot(v))
}

/// Climb (positive) or dive angle of `p0->p1` against the horizontal.
pub fn climb_angle(p0: Point3, p1: Point3) -> f64 {
    let d = p1 - p0;
    let horizontal = d.horizontal_norm();
    if d.norm() < EPS_LEN {
        return 0.0;
    }
    if horizontal < EPS_LEN {
        return FRAC_PI_2.copysign(d.z);
    }
    d.z.atan2(horizontal)
}

/// `a1 * sum(turns) + a2 * sum(|climb_j - climb_{j-1}|)` over consecutive segment pairs.
pub fn smooth_cost(waypoints: &[Point3], weights: &CostWeights) -> f64 {
    let turns: f64 = waypoints.windows(3).map(|w| turn_angle(w[0], w[1], w[2])).sum();
    let climbs: Vec<f64> = waypoints.windows(2).map(|w| climb_angle(w[0], w[1])).collect();
    let climb_deltas: f64 = climbs.windows(2).map(|c| (c[1] - c[0]).abs()).sum();
    weights.a1 * turns + weights.a2 * climb_deltas
}

fn weighted(b: f64, f: f64) -> f64 {
    if b == 0.0 {
        0.0
    } else {
        b * f
    }
}

/// All cost terms of raw waypoints under `scenario`, without the endpoint check.
pub fn evaluate_waypoints(waypoints: &[Point3], scenario: &Scenario) -> CostBreakdown {
    let w = &scenario.weights;
    let f1 = path_length_cost(waypoints);
    let f2 = threat_cost(waypoints, &scenario.threats, &scenario.constraints);
    let f3 = altitude_cost(waypoints, &scenario.terrain, &scenario.constraints);
    let f4 = smooth_cost(waypoints, w);
    let total = weighted(w.b1, f1) + weighted(w.b2, f2) + weighted(w.b3, f3) + weighted(w.b4, f4);
    CostBreakdown { f1, f2, f3, f4, total }
}

/// Weighted total cost of `path`; its endpoints must equal the scenario's.
pub fn total_cost(path: &Path, scenario: &Scenario) -> Result<CostBreakdown, CostError> {
    let wp = path.waypoints();
    let first = wp[0];
    let last = wp[wp.len() - 1];
    if first != scenario.start {
        return Err(CostError::EndpointMismatch {
            which: "start",
            actual: first,
            expected: scenario.start,
        });
    }
    if last != scenario.goal {
        return Err(CostError::EndpointMismatch {
            which: "goal",
            actual: last,
            expected: scenario.goal,
        });
    }
    Ok(evaluate_waypoints(wp, scenario))
}

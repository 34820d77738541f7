//! The built-in eight-scenario benchmark suite.
//!
//! Two seeded terrains, each a broad rise toward a high corner with a few
//! smaller hills on top. Each terrain hosts four scenarios: two simple ones
//! with a handful of well-separated threats and two complicated ones whose
//! threats block the straight start-goal line. Every scenario ships with a
//! finite-cost witness path found by a grid search around the threats.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::cost::{evaluate_waypoints, Path};
use crate::geometry::{horizontal_point_segment_distance, Point3};
use crate::optimizers::mix64;
use crate::scenario::{CostWeights, FlightConstraints, Scenario, Threat};
use crate::terrain::{rasterize_hills, Hill, SyntheticTerrainSpec, TerrainMap};

/// Waypoints per suite path: seven interior nodes.
pub const SUITE_WAYPOINTS: usize = 9;

const PLACEMENT_ATTEMPTS: usize = 500;

#[derive(Debug, Error)]
pub enum SuiteError {
    #[error("scenario {id}: no valid threat layout after {attempts} attempts")]
    Exhausted { id: usize, attempts: usize },
}

#[derive(Debug, Clone)]
pub struct SuiteEntry {
    /// 1-based position in the suite.
    pub id: usize,
    pub complicated: bool,
    /// Index of the base terrain (0 or 1).
    pub terrain_index: usize,
    pub scenario: Scenario,
    pub witness: Path,
}

impl SuiteEntry {
    pub fn name(&self) -> String {
        format!("s{}", self.id)
    }
}

/// Side of the square suite map in meters.
pub const MAP_SIZE: f64 = 400.0;

/// Grid shared by both suite terrains: 400 m square at 5 m spacing.
pub fn suite_terrain_spec() -> SyntheticTerrainSpec {
    SyntheticTerrainSpec::flat(81, 81, 5.0, 0.0)
}

/// The two base terrains for `seed`.
pub fn suite_terrains(seed: u64) -> [TerrainMap; 2] {
    let spec = suite_terrain_spec();
    let rise = [
        Hill {
            center_x: MAP_SIZE,
            center_y: MAP_SIZE,
            amplitude: 45.0,
            sigma: 220.0,
        },
        Hill {
            center_x: MAP_SIZE,
            center_y: 0.0,
            amplitude: 40.0,
            sigma: 200.0,
        },
    ];
    let mut out = Vec::with_capacity(2);
    for (k, main) in rise.into_iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(mix64(seed ^ (0x7E55_0000 + k as u64)));
        let mut hills = vec![main];
        for _ in 0..3 {
            hills.push(Hill {
                center_x: rng.random_range(60.0..340.0),
                center_y: rng.random_range(60.0..340.0),
                amplitude: rng.random_range(4.0..10.0),
                sigma: rng.random_range(25.0..50.0),
            });
        }
        out.push(rasterize_hills(&spec, &hills).expect("suite terrain spec is valid"));
    }
    [out.remove(0), out.remove(0)]
}

struct Layout {
    start: (f64, f64),
    goal: (f64, f64),
}

// Start low, goal high on each terrain's rise; the two scenarios of a kind
// on the same terrain use mirrored endpoints.
const LAYOUTS: [[Layout; 2]; 2] = [
    [
        Layout {
            start: (50.0, 90.0),
            goal: (330.0, 320.0),
        },
        Layout {
            start: (90.0, 50.0),
            goal: (320.0, 330.0),
        },
    ],
    [
        Layout {
            start: (50.0, 310.0),
            goal: (330.0, 80.0),
        },
        Layout {
            start: (90.0, 350.0),
            goal: (320.0, 70.0),
        },
    ],
];

/// Builds the eight suite scenarios; deterministic in `seed`.
pub fn build_benchmark_suite(seed: u64) -> Result<Vec<SuiteEntry>, SuiteError> {
    let terrains = suite_terrains(seed).map(Arc::new);
    let constraints = FlightConstraints::default();
    let mut suite = Vec::with_capacity(8);
    for id in 1..=8usize {
        let terrain_index = (id - 1) / 4;
        let within = (id - 1) % 4;
        let complicated = within >= 2;
        let layout = &LAYOUTS[terrain_index][within % 2];
        let terrain = &terrains[terrain_index];
        let endpoint = |(x, y): (f64, f64), h: f64| {
            let ground = terrain.height_at(x, y).expect("suite endpoints lie on the map");
            Point3::new(x, y, ground + h)
        };
        let start = endpoint(layout.start, constraints.h_min + 10.0);
        let goal = endpoint(layout.goal, constraints.mid_height());
        let mut rng = ChaCha8Rng::seed_from_u64(mix64(mix64(seed) ^ id as u64));
        let mut found = None;
        for _ in 0..PLACEMENT_ATTEMPTS {
            let threats = if complicated {
                complicated_threats(&mut rng, start, goal, &constraints)
            } else {
                simple_threats(&mut rng, start, goal, &constraints)
            };
            let Ok(scenario) = Scenario::new(
                terrain.clone(),
                threats,
                start,
                goal,
                constraints,
                CostWeights::default(),
                SUITE_WAYPOINTS,
            ) else {
                continue;
            };
            if complicated && !straight_line_blocked(&scenario) {
                continue;
            }
            if let Some(witness) = find_witness(&scenario) {
                found = Some((scenario, witness));
                break;
            }
        }
        let (scenario, witness) = found.ok_or(SuiteError::Exhausted {
            id,
            attempts: PLACEMENT_ATTEMPTS,
        })?;
        suite.push(SuiteEntry {
            id,
            complicated,
            terrain_index,
            scenario,
            witness,
        });
    }
    Ok(suite)
}

/// True when the direct start-goal segment enters a collision disc.
pub fn straight_line_blocked(scenario: &Scenario) -> bool {
    let c = &scenario.constraints;
    scenario.threats.iter().any(|t| {
        horizontal_point_segment_distance(t.center_x, t.center_y, scenario.start, scenario.goal)
            <= c.drone_diameter + t.radius
    })
}

fn clear_of_endpoints(t: &Threat, start: Point3, goal: Point3, c: &FlightConstraints) -> bool {
    let keep = t.radius + c.drone_diameter + c.danger_distance + 15.0;
    t.horizontal_distance(start) > keep && t.horizontal_distance(goal) > keep
}

fn inside_map(t: &Threat) -> bool {
    let margin = t.radius + 10.0;
    (margin..=MAP_SIZE - margin).contains(&t.center_x) && (margin..=MAP_SIZE - margin).contains(&t.center_y)
}

fn simple_threats(rng: &mut ChaCha8Rng, start: Point3, goal: Point3, c: &FlightConstraints) -> Vec<Threat> {
    let count = rng.random_range(3..=5);
    let mut threats: Vec<Threat> = Vec::with_capacity(count);
    let mut tries = 0;
    while threats.len() < count && tries < 1000 {
        tries += 1;
        let t = Threat::new(
            rng.random_range(40.0..360.0),
            rng.random_range(40.0..360.0),
            rng.random_range(15.0..28.0),
        );
        let separated = threats.iter().all(|o| {
            let d = (o.center_x - t.center_x).hypot(o.center_y - t.center_y);
            d > o.radius + t.radius + 4.0 * (c.drone_diameter + c.danger_distance) + 20.0
        });
        if separated && inside_map(&t) && clear_of_endpoints(&t, start, goal, c) {
            threats.push(t);
        }
    }
    threats
}

fn complicated_threats(rng: &mut ChaCha8Rng, start: Point3, goal: Point3, c: &FlightConstraints) -> Vec<Threat> {
    let count = rng.random_range(8..=12);
    let mut threats: Vec<Threat> = Vec::with_capacity(count);
    // two blockers on the direct line, then free placement
    for f in [rng.random_range(0.3..0.45), rng.random_range(0.55..0.7)] {
        let p = start + (goal - start) * f;
        threats.push(Threat::new(p.x, p.y, rng.random_range(22.0..32.0)));
    }
    let mut tries = 0;
    while threats.len() < count && tries < 2000 {
        tries += 1;
        let t = Threat::new(
            rng.random_range(30.0..370.0),
            rng.random_range(30.0..370.0),
            rng.random_range(14.0..28.0),
        );
        let separated = threats.iter().all(|o| {
            let d = (o.center_x - t.center_x).hypot(o.center_y - t.center_y);
            d > o.radius + t.radius + 2.0 * (c.drone_diameter + c.danger_distance)
        });
        if separated && inside_map(&t) && clear_of_endpoints(&t, start, goal, c) {
            threats.push(t);
        }
    }
    threats
}

#[derive(PartialEq)]
struct Open {
    f: f64,
    node: usize,
}

impl Eq for Open {}

impl Ord for Open {
    fn cmp(&self, other: &Self) -> Ordering {
        other.f.total_cmp(&self.f).then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for Open {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// 8-connected A* over terrain nodes, avoiding discs inflated by `margin`.
fn grid_route(scenario: &Scenario, margin: f64) -> Option<Vec<(f64, f64)>> {
    let t = &scenario.terrain;
    let (nc, nr) = (t.n_cols(), t.n_rows());
    let (ox, oy) = t.origin();
    let cs = t.cell_size();
    let xy = |i: usize| (ox + (i % nc) as f64 * cs, oy + (i / nc) as f64 * cs);
    let blocked: Vec<bool> = (0..nc * nr)
        .map(|i| {
            let (x, y) = xy(i);
            scenario
                .threats
                .iter()
                .any(|th| (x - th.center_x).hypot(y - th.center_y) <= th.radius + margin)
        })
        .collect();
    let nearest = |x: f64, y: f64| {
        let c = ((x - ox) / cs).round() as usize;
        let r = ((y - oy) / cs).round() as usize;
        r.min(nr - 1) * nc + c.min(nc - 1)
    };
    let src = nearest(scenario.start.x, scenario.start.y);
    let dst = nearest(scenario.goal.x, scenario.goal.y);
    let h = |i: usize| {
        let (x, y) = xy(i);
        let (gx, gy) = xy(dst);
        (x - gx).hypot(y - gy)
    };
    let mut g = vec![f64::INFINITY; nc * nr];
    let mut parent = vec![usize::MAX; nc * nr];
    let mut heap = BinaryHeap::new();
    g[src] = 0.0;
    heap.push(Open { f: h(src), node: src });
    while let Some(Open { node, .. }) = heap.pop() {
        if node == dst {
            let mut route = vec![xy(dst)];
            let mut at = dst;
            while at != src {
                at = parent[at];
                route.push(xy(at));
            }
            route.reverse();
            return Some(route);
        }
        let (c, r) = ((node % nc) as i64, (node / nc) as i64);
        for dr in -1..=1i64 {
            for dc in -1..=1i64 {
                let (cc, rr) = (c + dc, r + dr);
                if (dc, dr) == (0, 0) || cc < 0 || rr < 0 || cc >= nc as i64 || rr >= nr as i64 {
                    continue;
                }
                let next = rr as usize * nc + cc as usize;
                if blocked[next] {
                    continue;
                }
                let step = cs * ((dc * dc + dr * dr) as f64).sqrt();
                let cand = g[node] + step;
                if cand < g[next] {
                    g[next] = cand;
                    parent[next] = node;
                    heap.push(Open {
                        f: cand + h(next),
                        node: next,
                    });
                }
            }
        }
    }
    None
}

/// `count` points evenly spaced by arc length strictly inside the polyline.
fn resample(polyline: &[(f64, f64)], count: usize) -> Vec<(f64, f64)> {
    let mut cumulative = vec![0.0];
    for w in polyline.windows(2) {
        let d = (w[1].0 - w[0].0).hypot(w[1].1 - w[0].1);
        cumulative.push(cumulative.last().unwrap() + d);
    }
    let total = *cumulative.last().unwrap();
    (1..=count)
        .map(|k| {
            let s = total * k as f64 / (count + 1) as f64;
            let seg = cumulative.partition_point(|&c| c <= s).clamp(1, polyline.len() - 1) - 1;
            let span = cumulative[seg + 1] - cumulative[seg];
            let f = if span > 0.0 { (s - cumulative[seg]) / span } else { 0.0 };
            let (a, b) = (polyline[seg], polyline[seg + 1]);
            (a.0 + f * (b.0 - a.0), a.1 + f * (b.1 - a.1))
        })
        .collect()
}

/// A finite-cost path at mid-corridor height along a threat-avoiding route.
pub fn find_witness(scenario: &Scenario) -> Option<Path> {
    let c = &scenario.constraints;
    let base = c.drone_diameter + c.danger_distance;
    for extra in [5.0, 15.0, 30.0] {
        let Some(mut route) = grid_route(scenario, base + extra) else {
            continue;
        };
        route[0] = (scenario.start.x, scenario.start.y);
        *route.last_mut().unwrap() = (scenario.goal.x, scenario.goal.y);
        let interior: Vec<Point3> = resample(&route, scenario.interior_count())
            .into_iter()
            .map(|(x, y)| {
                let ground = scenario.terrain.height_at(x, y).ok()?;
                Some(Point3::new(x, y, ground + c.mid_height()))
            })
            .collect::<Option<_>>()?;
        let path = Path::from_interior(scenario.start, &interior, scenario.goal).ok()?;
        if evaluate_waypoints(path.waypoints(), scenario).is_feasible() {
            return Some(path);
        }
    }
    None
}

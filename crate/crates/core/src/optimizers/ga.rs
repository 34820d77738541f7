//! Genetic algorithm over variable-length lists of interior waypoints.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use super::{argmin, evaluate, initial_genome, streams, Algorithm, SwarmConfig};
use crate::cost::Path;
use crate::encodings::{EncodingKind, SearchSpace};
use crate::geometry::Point3;
use crate::scenario::Scenario;

#[derive(Debug, Clone)]
pub struct GaPopulation<'a> {
    pub scenario: &'a Scenario,
    pub individuals: Vec<Vec<Point3>>,
    pub fitness: Vec<f64>,
    /// One stream per offspring slot.
    pub streams: Vec<ChaCha8Rng>,
    pub evaluations: usize,
    max_len: usize,
    bounds: [(f64, f64); 3],
    jitter: Normal<f64>,
}

impl<'a> GaPopulation<'a> {
    /// Starts from fixed-length random genomes of `n - 2` nodes.
    pub fn initialize(scenario: &'a Scenario, config: &SwarmConfig) -> Self {
        let space = SearchSpace::new(EncodingKind::Cartesian, scenario);
        let mut streams = streams(config.seed, Algorithm::Ga, config.swarm_size);
        let mut evaluations = 0;
        let (individuals, fitness) = streams
            .iter_mut()
            .map(|rng| {
                let (x, f) = initial_genome(&space, rng, &mut evaluations);
                (space.interior(&x), f)
            })
            .unzip();
        Self {
            scenario,
            individuals,
            fitness,
            streams,
            evaluations,
            max_len: 2 * scenario.interior_count(),
            bounds: scenario.cartesian_bounds(),
            jitter: Normal::new(0.0, scenario.terrain.cell_size()).expect("cell size is positive"),
        }
    }

    pub fn best_index(&self) -> usize {
        argmin(self.fitness.iter().copied())
    }

    pub fn best_fitness(&self) -> f64 {
        self.fitness[self.best_index()]
    }

    pub fn best_nodes(&self) -> &[Point3] {
        &self.individuals[self.best_index()]
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    pub fn path_of(&self, nodes: &[Point3]) -> Path {
        Path::from_interior(self.scenario.start, nodes, self.scenario.goal).expect("genomes hold at least one node")
    }

    fn clamp(&self, p: Point3) -> Point3 {
        let [bx, by, bz] = self.bounds;
        Point3::new(p.x.clamp(bx.0, bx.1), p.y.clamp(by.0, by.1), p.z.clamp(bz.0, bz.1))
    }
}

/// Child of a one-point crossover: `a[..cut_a]` followed by `b[cut_b..]`,
/// truncated to `max_len`.
pub fn crossover(a: &[Point3], b: &[Point3], cut_a: usize, cut_b: usize, max_len: usize) -> Vec<Point3> {
    let mut child: Vec<Point3> = a[..cut_a].iter().chain(&b[cut_b..]).copied().collect();
    child.truncate(max_len);
    if child.is_empty() {
        child.push(a[0]);
    }
    child
}

/// Inserts the midpoint of chain segment `segment` (counting the start to
/// first-node segment as 0) shifted by `jitter`. Skipped at `max_len`.
pub fn mutate_add(
    nodes: &mut Vec<Point3>,
    segment: usize,
    jitter: Point3,
    start: Point3,
    goal: Point3,
    max_len: usize,
) -> bool {
    if nodes.len() >= max_len || segment > nodes.len() {
        return false;
    }
    let from = if segment == 0 { start } else { nodes[segment - 1] };
    let to = nodes.get(segment).copied().unwrap_or(goal);
    nodes.insert(segment, from.midpoint(to) + jitter);
    true
}

/// Removes node `index` unless it is the only one.
pub fn mutate_delete(nodes: &mut Vec<Point3>, index: usize) -> bool {
    if nodes.len() <= 1 || index >= nodes.len() {
        return false;
    }
    nodes.remove(index);
    true
}

/// Replaces nodes `index` and `index + 1` by their midpoint.
pub fn mutate_merge(nodes: &mut Vec<Point3>, index: usize) -> bool {
    if index + 1 >= nodes.len() {
        return false;
    }
    nodes[index] = nodes[index].midpoint(nodes[index + 1]);
    nodes.remove(index + 1);
    true
}

fn tournament(rng: &mut ChaCha8Rng, fitness: &[f64]) -> usize {
    let a = rng.random_range(0..fitness.len());
    let b = rng.random_range(0..fitness.len());
    if fitness[b] < fitness[a] || (fitness[b] == fitness[a] && b < a) {
        b
    } else {
        a
    }
}

/// One generation with a single elite carried over unchanged.
pub fn ga_step(pop: &mut GaPopulation<'_>, config: &SwarmConfig) {
    let m = pop.individuals.len();
    let elite = pop.best_index();
    let mut next = Vec::with_capacity(m);
    next.push(pop.individuals[elite].clone());
    for slot in 1..m {
        let rng = &mut pop.streams[slot];
        let pa = tournament(rng, &pop.fitness);
        let pb = tournament(rng, &pop.fitness);
        let (a, b) = (&pop.individuals[pa], &pop.individuals[pb]);
        let mut child = if rng.random::<f64>() < config.ga_crossover_rate {
            let cut_a = rng.random_range(1..=a.len());
            let cut_b = rng.random_range(0..b.len());
            crossover(a, b, cut_a, cut_b, pop.max_len)
        } else {
            a.clone()
        };
        if rng.random::<f64>() < config.ga_mutation_rate {
            match rng.random_range(0..3) {
                0 => {
                    let segment = rng.random_range(0..=child.len());
                    let j = Point3::new(pop.jitter.sample(rng), pop.jitter.sample(rng), pop.jitter.sample(rng));
                    mutate_add(
                        &mut child,
                        segment,
                        j,
                        pop.scenario.start,
                        pop.scenario.goal,
                        pop.max_len,
                    );
                }
                1 => {
                    let index = rng.random_range(0..child.len());
                    mutate_delete(&mut child, index);
                }
                _ => {
                    let index = rng.random_range(0..child.len());
                    mutate_merge(&mut child, index);
                }
            }
        }
        for p in &mut child {
            *p = pop.clamp(*p);
        }
        next.push(child);
    }
    let mut fitness = Vec::with_capacity(m);
    fitness.push(pop.fitness[elite]);
    for child in &next[1..] {
        let path = pop.path_of(child);
        fitness.push(evaluate(pop.scenario, &path, &mut pop.evaluations));
    }
    pop.individuals = next;
    pop.fitness = fitness;
}

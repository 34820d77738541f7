//! Artificial bee colony: half the swarm are employed bees, one per food
//! source; the other half are onlookers that revisit sources in proportion to
//! their quality. A source that stops improving is abandoned by a scout.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{argmin, evaluate, initial_genome, streams, Algorithm, SwarmConfig};
use crate::encodings::{clamp_wrap, SearchSpace};

#[derive(Debug, Clone)]
pub struct Colony<'a> {
    pub space: SearchSpace<'a>,
    pub sources: Vec<Vec<f64>>,
    pub fitness: Vec<f64>,
    /// Consecutive failed improvement attempts per source.
    pub trials: Vec<usize>,
    pub best_position: Vec<f64>,
    pub best_fitness: f64,
    /// Employed streams, then onlooker streams, then the scout stream.
    pub streams: Vec<ChaCha8Rng>,
    pub evaluations: usize,
}

impl<'a> Colony<'a> {
    pub fn initialize(space: SearchSpace<'a>, config: &SwarmConfig) -> Self {
        let n_sources = (config.swarm_size / 2).max(2);
        let mut streams = streams(config.seed, Algorithm::Abc, 2 * n_sources + 1);
        let mut evaluations = 0;
        let (sources, fitness): (Vec<_>, Vec<_>) = streams[..n_sources]
            .iter_mut()
            .map(|rng| initial_genome(&space, rng, &mut evaluations))
            .unzip();
        let b = argmin(fitness.iter().copied());
        Self {
            space,
            best_position: sources[b].clone(),
            best_fitness: fitness[b],
            trials: vec![0; sources.len()],
            sources,
            fitness,
            streams,
            evaluations,
        }
    }

    /// Tries a neighbour of source `i`; replaces it only on strict improvement.
    fn explore(&mut self, i: usize, stream: usize) {
        let n = self.sources.len();
        let rng = &mut self.streams[stream];
        let mut k = rng.random_range(0..n - 1);
        if k >= i {
            k += 1;
        }
        let d = rng.random_range(0..self.space.len());
        let phi = rng.random_range(-1.0..=1.0);
        let mut v = neighbor_candidate(&self.sources[i], &self.sources[k], d, phi);
        clamp_wrap(&mut v, None, self.space.dims());
        let f = evaluate(self.space.scenario(), &self.space.decode(&v), &mut self.evaluations);
        if f < self.fitness[i] {
            self.sources[i] = v;
            self.fitness[i] = f;
            self.trials[i] = 0;
            self.offer_best(i);
        } else {
            self.trials[i] += 1;
        }
    }

    fn offer_best(&mut self, i: usize) {
        if self.fitness[i] < self.best_fitness {
            self.best_fitness = self.fitness[i];
            self.best_position = self.sources[i].clone();
        }
    }
}

/// `x` with coordinate `d` moved to `x_d + phi (x_d - partner_d)`.
pub fn neighbor_candidate(x: &[f64], partner: &[f64], d: usize, phi: f64) -> Vec<f64> {
    let mut v = x.to_vec();
    v[d] = x[d] + phi * (x[d] - partner[d]);
    v
}

/// Onlooker selection probabilities, proportional to `1 / (1 + f)`.
/// Infeasible sources get zero weight; when none is feasible the choice is
/// uniform.
pub fn roulette_weights(fitness: &[f64]) -> Vec<f64> {
    let raw: Vec<f64> = fitness
        .iter()
        .map(|&f| if f.is_finite() { 1.0 / (1.0 + f.max(0.0)) } else { 0.0 })
        .collect();
    let sum: f64 = raw.iter().sum();
    if sum > 0.0 {
        raw.iter().map(|w| w / sum).collect()
    } else {
        vec![1.0 / fitness.len() as f64; fitness.len()]
    }
}

fn spin(weights: &[f64], u: f64) -> usize {
    let mut acc = 0.0;
    for (i, w) in weights.iter().enumerate() {
        acc += w;
        if u < acc {
            return i;
        }
    }
    // rounding left `u` past the last bucket: take the last nonzero one
    weights.iter().rposition(|&w| w > 0.0).unwrap_or(weights.len() - 1)
}

/// Employed phase, onlooker phase, then at most one scout.
pub fn abc_step(colony: &mut Colony<'_>, config: &SwarmConfig) {
    let n = colony.sources.len();
    for i in 0..n {
        colony.explore(i, i);
    }
    let weights = roulette_weights(&colony.fitness);
    for j in 0..n {
        let u: f64 = colony.streams[n + j].random();
        let i = spin(&weights, u);
        colony.explore(i, n + j);
    }
    // the most exhausted source, lowest index on ties
    let (worst, &count) = colony
        .trials
        .iter()
        .enumerate()
        .rev()
        .max_by_key(|(_, t)| **t)
        .expect("colony has sources");
    if count >= config.abc_limit {
        let scout = 2 * n;
        let (x, f) = initial_genome(&colony.space, &mut colony.streams[scout], &mut colony.evaluations);
        colony.sources[worst] = x;
        colony.fitness[worst] = f;
        colony.trials[worst] = 0;
        colony.offer_best(worst);
    }
}

//! DE/rand/1/bin over Cartesian waypoint genomes.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{argmin, evaluate, initial_genome, streams, Algorithm, OptimizeError, SwarmConfig};
use crate::encodings::{clamp_wrap, SearchSpace};

#[derive(Debug, Clone)]
pub struct DePopulation<'a> {
    pub space: SearchSpace<'a>,
    pub members: Vec<Vec<f64>>,
    pub fitness: Vec<f64>,
    pub streams: Vec<ChaCha8Rng>,
    pub evaluations: usize,
}

impl<'a> DePopulation<'a> {
    pub fn initialize(space: SearchSpace<'a>, config: &SwarmConfig) -> Result<Self, OptimizeError> {
        if config.swarm_size < 4 {
            return Err(OptimizeError::PopulationTooSmall(config.swarm_size));
        }
        let mut streams = streams(config.seed, Algorithm::De, config.swarm_size);
        let mut evaluations = 0;
        let (members, fitness) = streams
            .iter_mut()
            .map(|rng| initial_genome(&space, rng, &mut evaluations))
            .unzip();
        Ok(Self {
            space,
            members,
            fitness,
            streams,
            evaluations,
        })
    }

    pub fn best_index(&self) -> usize {
        argmin(self.fitness.iter().copied())
    }

    pub fn best_fitness(&self) -> f64 {
        self.fitness[self.best_index()]
    }

    pub fn best_position(&self) -> &[f64] {
        &self.members[self.best_index()]
    }
}

/// `base + f * (a - b)`.
pub fn de_mutant(base: &[f64], a: &[f64], b: &[f64], f: f64) -> Vec<f64> {
    base.iter()
        .zip(a.iter().zip(b))
        .map(|(x, (p, q))| x + f * (p - q))
        .collect()
}

fn three_distinct(rng: &mut ChaCha8Rng, n: usize, exclude: usize) -> [usize; 3] {
    let mut picked = [usize::MAX; 3];
    let mut k = 0;
    while k < 3 {
        let c = rng.random_range(0..n);
        if c != exclude && !picked[..k].contains(&c) {
            picked[k] = c;
            k += 1;
        }
    }
    picked
}

/// One generation: every trial is built from the previous population, then
/// replaces its target when it is no worse.
pub fn de_step(pop: &mut DePopulation<'_>, config: &SwarmConfig) {
    let n = pop.members.len();
    let dim = pop.space.len();
    let mut trials = Vec::with_capacity(n);
    for i in 0..n {
        let rng = &mut pop.streams[i];
        let [r1, r2, r3] = three_distinct(rng, n, i);
        let mutant = de_mutant(&pop.members[r1], &pop.members[r2], &pop.members[r3], config.de_f);
        let forced = rng.random_range(0..dim);
        let mut trial: Vec<f64> = (0..dim)
            .map(|d| {
                if d == forced || rng.random::<f64>() < config.de_cr {
                    mutant[d]
                } else {
                    pop.members[i][d]
                }
            })
            .collect();
        clamp_wrap(&mut trial, None, pop.space.dims());
        trials.push(trial);
    }
    for (i, trial) in trials.into_iter().enumerate() {
        let f = evaluate(pop.space.scenario(), &pop.space.decode(&trial), &mut pop.evaluations);
        if f <= pop.fitness[i] {
            pop.members[i] = trial;
            pop.fitness[i] = f;
        }
    }
}

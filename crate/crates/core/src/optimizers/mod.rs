//! Population-based solvers behind one entry point, [`run`].
//!
//! Every solver minimizes the total path cost. Infeasible candidates carry
//! an infinite fitness; they stay in the population and keep moving, but a
//! finite candidate always wins a comparison against them. Bests are only
//! replaced on strict improvement, so the per-iteration global best never
//! increases.
//!
//! Randomness comes from ChaCha streams keyed by `(seed, algorithm, slot)`,
//! one per particle (or offspring slot), so runs are reproducible bit for bit.

mod abc;
mod de;
mod ga;
mod qpso;
mod swarm;

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::cost::{evaluate_waypoints, CostBreakdown, Path};
use crate::encodings::{EncodingKind, SearchSpace};
use crate::scenario::Scenario;

pub use abc::{abc_step, neighbor_candidate, roulette_weights, Colony};
pub use de::{de_mutant, de_step, DePopulation};
pub use ga::{crossover, ga_step, mutate_add, mutate_delete, mutate_merge, GaPopulation};
pub use qpso::{qpso_coordinate, qpso_step};
pub use swarm::{pso_step, spso_step, theta_pso_step, velocity_component, Particle, Swarm};

/// Attempts per particle to draw a finite-fitness initial genome.
pub const INIT_ATTEMPTS: usize = 20;

#[derive(Debug, Error, PartialEq)]
pub enum OptimizeError {
    #[error("invalid swarm config: {0}")]
    InvalidConfig(String),
    #[error("differential evolution needs a population of at least 4, got {0}")]
    PopulationTooSmall(usize),
    #[error("unknown algorithm {0:?}")]
    UnknownAlgorithm(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    Pso,
    ThetaPso,
    Qpso,
    Spso,
    Ga,
    De,
    Abc,
}

impl Algorithm {
    pub const ALL: [Algorithm; 7] = [
        Algorithm::Spso,
        Algorithm::Pso,
        Algorithm::ThetaPso,
        Algorithm::Qpso,
        Algorithm::Ga,
        Algorithm::De,
        Algorithm::Abc,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Pso => "pso",
            Algorithm::ThetaPso => "theta_pso",
            Algorithm::Qpso => "qpso",
            Algorithm::Spso => "spso",
            Algorithm::Ga => "ga",
            Algorithm::De => "de",
            Algorithm::Abc => "abc",
        }
    }

    /// Stable numeric tag mixed into the stream seeds.
    pub fn tag(self) -> u64 {
        match self {
            Algorithm::Pso => 1,
            Algorithm::ThetaPso => 2,
            Algorithm::Qpso => 3,
            Algorithm::Spso => 4,
            Algorithm::Ga => 5,
            Algorithm::De => 6,
            Algorithm::Abc => 7,
        }
    }

    /// Fixed-length encoding the solver searches over (GA uses a
    /// variable-length Cartesian genome).
    pub fn encoding(self) -> EncodingKind {
        match self {
            Algorithm::ThetaPso => EncodingKind::Angle,
            Algorithm::Spso => EncodingKind::Spherical,
            _ => EncodingKind::Cartesian,
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = OptimizeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = s.trim().to_ascii_lowercase().replace('-', "_");
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == key || (key == "thetapso" && *a == Algorithm::ThetaPso))
            .ok_or_else(|| OptimizeError::UnknownAlgorithm(s.to_string()))
    }
}

/// Solver parameters shared by all algorithms; each reads what it needs.
#[derive(Debug, Clone, PartialEq)]
pub struct SwarmConfig {
    pub swarm_size: usize,
    pub max_iterations: usize,
    /// Initial inertia weight.
    pub inertia: f64,
    /// Multiplicative inertia decay applied after every iteration.
    pub damping: f64,
    pub cognitive: f64,
    pub social: f64,
    /// QPSO contraction-expansion coefficient, linearly scheduled from
    /// `qpso_beta.0` at the first iteration to `qpso_beta.1` at the last.
    pub qpso_beta: (f64, f64),
    pub de_f: f64,
    pub de_cr: f64,
    pub abc_limit: usize,
    pub ga_crossover_rate: f64,
    pub ga_mutation_rate: f64,
    pub seed: u64,
}

impl Default for SwarmConfig {
    fn default() -> Self {
        Self {
            swarm_size: 500,
            max_iterations: 200,
            inertia: 1.0,
            damping: 0.98,
            cognitive: 1.5,
            social: 1.5,
            qpso_beta: (1.0, 0.5),
            de_f: 0.5,
            de_cr: 0.9,
            abc_limit: 50,
            ga_crossover_rate: 0.8,
            ga_mutation_rate: 0.2,
            seed: 0,
        }
    }
}

impl SwarmConfig {
    pub fn validate(&self) -> Result<(), OptimizeError> {
        let fail = |m: &str| Err(OptimizeError::InvalidConfig(m.to_string()));
        if self.swarm_size < 2 {
            return fail("swarm_size must be >= 2");
        }
        if self.max_iterations < 1 {
            return fail("max_iterations must be >= 1");
        }
        let rates = [
            ("damping", self.damping),
            ("de_cr", self.de_cr),
            ("ga_crossover_rate", self.ga_crossover_rate),
            ("ga_mutation_rate", self.ga_mutation_rate),
        ];
        for (name, r) in rates {
            if !(0.0..=1.0).contains(&r) {
                return Err(OptimizeError::InvalidConfig(format!("{name} must be in [0, 1]")));
            }
        }
        if !(self.cognitive >= 0.0 && self.social >= 0.0) {
            return fail("cognitive and social coefficients must be >= 0");
        }
        if !(self.inertia.is_finite() && self.de_f.is_finite()) {
            return fail("inertia and de_f must be finite");
        }
        if !(self.qpso_beta.0.is_finite() && self.qpso_beta.1.is_finite()) {
            return fail("qpso_beta must be finite");
        }
        Ok(())
    }

    /// Population and iteration count for `algorithm` under the same
    /// evaluation budget as `swarm_size x max_iterations`. Differential
    /// evolution trades a five times smaller population for five times more
    /// generations; every other solver uses the configured values.
    pub fn equal_budget(&self, algorithm: Algorithm) -> SwarmConfig {
        let mut cfg = self.clone();
        if algorithm == Algorithm::De {
            let budget = self.swarm_size * self.max_iterations;
            let pop = (self.swarm_size / 5).max(4);
            cfg.swarm_size = pop;
            cfg.max_iterations = (budget / pop).max(1);
        }
        cfg
    }

    /// QPSO coefficient at zero-based iteration `k`.
    pub fn beta_at(&self, k: usize) -> f64 {
        let (from, to) = self.qpso_beta;
        if self.max_iterations <= 1 {
            return from;
        }
        from + (to - from) * k as f64 / (self.max_iterations - 1) as f64
    }
}

/// The 64-bit finalizer of SplitMix64.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Random stream for `slot` (particle or offspring index) of one run.
pub fn stream(seed: u64, algorithm: Algorithm, slot: u64) -> ChaCha8Rng {
    let key = mix64(mix64(mix64(seed) ^ algorithm.tag()) ^ slot);
    ChaCha8Rng::seed_from_u64(key)
}

pub(crate) fn streams(seed: u64, algorithm: Algorithm, count: usize) -> Vec<ChaCha8Rng> {
    (0..count as u64).map(|i| stream(seed, algorithm, i)).collect()
}

/// Total cost of `path`, counted against the run's evaluation budget.
pub(crate) fn evaluate(scenario: &Scenario, path: &Path, evaluations: &mut usize) -> f64 {
    *evaluations += 1;
    evaluate_waypoints(path.waypoints(), scenario).total
}

/// Index of the smallest fitness; the lowest index wins ties.
pub(crate) fn argmin(fitness: impl IntoIterator<Item = f64>) -> usize {
    let mut best = 0;
    let mut best_f = f64::INFINITY;
    for (i, f) in fitness.into_iter().enumerate() {
        if f < best_f {
            best = i;
            best_f = f;
        }
    }
    best
}

/// Draws an initial fixed-length genome, retrying until one is feasible or
/// the attempts run out.
pub(crate) fn initial_genome(
    space: &SearchSpace<'_>,
    rng: &mut ChaCha8Rng,
    evaluations: &mut usize,
) -> (Vec<f64>, f64) {
    let mut genome = space.sample(rng);
    let mut fitness = evaluate(space.scenario(), &space.decode(&genome), evaluations);
    for _ in 1..INIT_ATTEMPTS {
        if fitness.is_finite() {
            break;
        }
        genome = space.sample(rng);
        fitness = evaluate(space.scenario(), &space.decode(&genome), evaluations);
    }
    (genome, fitness)
}

/// Convergence record of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct EvolutionTrace {
    /// Global best fitness after each iteration.
    pub best_fitness: Vec<f64>,
    /// Flat genome of the final best (GA: concatenated interior waypoints).
    pub best_genome: Vec<f64>,
    pub best_path: Path,
    pub best_cost: CostBreakdown,
    pub evaluations: usize,
}

impl EvolutionTrace {
    pub fn final_fitness(&self) -> f64 {
        self.best_fitness.last().copied().unwrap_or(f64::INFINITY)
    }

    pub fn is_non_increasing(&self) -> bool {
        self.best_fitness.windows(2).all(|w| w[1] <= w[0])
    }
}

/// Result of [`run`]: a failed run found no finite-cost path at all.
#[derive(Debug, Clone, PartialEq)]
pub enum RunOutcome {
    Solved(EvolutionTrace),
    Failed(EvolutionTrace),
}

impl RunOutcome {
    pub fn trace(&self) -> &EvolutionTrace {
        match self {
            RunOutcome::Solved(t) | RunOutcome::Failed(t) => t,
        }
    }

    pub fn into_trace(self) -> EvolutionTrace {
        match self {
            RunOutcome::Solved(t) | RunOutcome::Failed(t) => t,
        }
    }

    pub fn is_feasible(&self) -> bool {
        matches!(self, RunOutcome::Solved(_))
    }
}

/// Runs `algorithm` on `scenario` for `config.max_iterations` generations.
pub fn run(algorithm: Algorithm, scenario: &Scenario, config: &SwarmConfig) -> Result<RunOutcome, OptimizeError> {
    config.validate()?;
    let (fitness, genome, path, evaluations) = match algorithm {
        Algorithm::Pso | Algorithm::ThetaPso | Algorithm::Spso => {
            let space = SearchSpace::new(algorithm.encoding(), scenario);
            let mut swarm = Swarm::initialize(space, algorithm, config);
            let step = match algorithm {
                Algorithm::Pso => pso_step,
                Algorithm::ThetaPso => theta_pso_step,
                _ => spso_step,
            };
            let trace: Vec<f64> = (0..config.max_iterations)
                .map(|_| {
                    step(&mut swarm, config);
                    swarm.global_best_fitness()
                })
                .collect();
            let best = swarm.global_best_position().to_vec();
            let path = swarm.space.decode(&best);
            (trace, best, path, swarm.evaluations)
        }
        Algorithm::Qpso => {
            let space = SearchSpace::new(EncodingKind::Cartesian, scenario);
            let mut swarm = Swarm::initialize(space, algorithm, config);
            let trace: Vec<f64> = (0..config.max_iterations)
                .map(|k| {
                    qpso_step(&mut swarm, config, k);
                    swarm.global_best_fitness()
                })
                .collect();
            let best = swarm.global_best_position().to_vec();
            let path = swarm.space.decode(&best);
            (trace, best, path, swarm.evaluations)
        }
        Algorithm::De => {
            let space = SearchSpace::new(EncodingKind::Cartesian, scenario);
            let mut pop = DePopulation::initialize(space, config)?;
            let trace: Vec<f64> = (0..config.max_iterations)
                .map(|_| {
                    de_step(&mut pop, config);
                    pop.best_fitness()
                })
                .collect();
            let best = pop.best_position().to_vec();
            let path = pop.space.decode(&best);
            (trace, best, path, pop.evaluations)
        }
        Algorithm::Abc => {
            let space = SearchSpace::new(EncodingKind::Cartesian, scenario);
            let mut colony = Colony::initialize(space, config);
            let trace: Vec<f64> = (0..config.max_iterations)
                .map(|_| {
                    abc_step(&mut colony, config);
                    colony.best_fitness
                })
                .collect();
            let best = colony.best_position.clone();
            let path = colony.space.decode(&best);
            (trace, best, path, colony.evaluations)
        }
        Algorithm::Ga => {
            let mut pop = GaPopulation::initialize(scenario, config);
            let trace: Vec<f64> = (0..config.max_iterations)
                .map(|_| {
                    ga_step(&mut pop, config);
                    pop.best_fitness()
                })
                .collect();
            let best = pop.best_nodes().to_vec();
            let path = pop.path_of(&best);
            let genome = best.iter().flat_map(|p| [p.x, p.y, p.z]).collect();
            (trace, genome, path, pop.evaluations)
        }
    };
    let best_cost = evaluate_waypoints(path.waypoints(), scenario);
    let trace = EvolutionTrace {
        best_fitness: fitness,
        best_genome: genome,
        best_path: path,
        best_cost,
        evaluations,
    };
    Ok(if trace.final_fitness().is_finite() {
        RunOutcome::Solved(trace)
    } else {
        RunOutcome::Failed(trace)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn algorithm_names_round_trip() {
        for a in Algorithm::ALL {
            assert_eq!(a.name().parse::<Algorithm>().unwrap(), a);
        }
        assert_eq!("theta-pso".parse::<Algorithm>().unwrap(), Algorithm::ThetaPso);
        assert!("cuckoo".parse::<Algorithm>().is_err());
    }

    #[test]
    fn config_validation() {
        assert!(SwarmConfig::default().validate().is_ok());
        let bad = SwarmConfig {
            swarm_size: 1,
            ..SwarmConfig::default()
        };
        assert!(bad.validate().is_err());
        let bad = SwarmConfig {
            de_cr: 1.5,
            ..SwarmConfig::default()
        };
        assert!(bad.validate().is_err());
        let bad = SwarmConfig {
            max_iterations: 0,
            ..SwarmConfig::default()
        };
        assert!(bad.validate().is_err());
        let bad = SwarmConfig {
            social: -1.0,
            ..SwarmConfig::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn de_budget_matches_swarm_budget() {
        let cfg = SwarmConfig::default();
        let de = cfg.equal_budget(Algorithm::De);
        assert_eq!((de.swarm_size, de.max_iterations), (100, 1000));
        assert_eq!(cfg.equal_budget(Algorithm::Spso), cfg);
    }

    #[test]
    fn beta_schedule_is_linear() {
        let cfg = SwarmConfig {
            max_iterations: 11,
            ..SwarmConfig::default()
        };
        assert_eq!(cfg.beta_at(0), 1.0);
        assert!((cfg.beta_at(5) - 0.75).abs() < 1e-12);
        assert_eq!(cfg.beta_at(10), 0.5);
    }

    #[test]
    fn argmin_prefers_lowest_index() {
        assert_eq!(argmin([3.0, 1.0, 1.0]), 1);
        assert_eq!(argmin([f64::INFINITY, f64::INFINITY]), 0);
    }

    #[test]
    fn streams_are_independent_and_reproducible() {
        use rand::Rng;
        let mut a = stream(7, Algorithm::Spso, 3);
        let mut b = stream(7, Algorithm::Spso, 3);
        let mut c = stream(7, Algorithm::Pso, 3);
        let x: u64 = a.random();
        assert_eq!(x, b.random::<u64>());
        assert_ne!(x, c.random::<u64>());
    }
}

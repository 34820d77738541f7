//! Velocity-driven swarms: classic PSO over Cartesian waypoints, phase-angle
//! PSO and spherical-vector PSO. All three share one update rule,
//!
//!   v <- w v + eta1 r1 (l - x) + eta2 r2 (g - x),  x <- x + v,
//!
//! and differ only in the genome layout and decode map of their
//! [`SearchSpace`]. On spherical genomes the azimuth differences take the
//! short way round the circle.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{argmin, evaluate, initial_genome, streams, Algorithm, SwarmConfig};
use crate::encodings::{clamp_wrap, EncodingKind, SearchSpace};

#[derive(Debug, Clone, PartialEq)]
pub struct Particle {
    pub position: Vec<f64>,
    pub velocity: Vec<f64>,
    pub fitness: f64,
    pub best_position: Vec<f64>,
    pub best_fitness: f64,
}

impl Particle {
    /// Replaces the local best only on strict improvement.
    pub fn refresh_best(&mut self) {
        if self.fitness < self.best_fitness {
            self.best_fitness = self.fitness;
            self.best_position.clone_from(&self.position);
        }
    }
}

#[derive(Debug, Clone)]
pub struct Swarm<'a> {
    pub space: SearchSpace<'a>,
    pub particles: Vec<Particle>,
    pub streams: Vec<ChaCha8Rng>,
    /// Index of the particle whose local best is the global best.
    pub global_best: usize,
    /// Current inertia weight.
    pub inertia: f64,
    pub evaluations: usize,
}

impl<'a> Swarm<'a> {
    /// Random initial swarm with zero velocities.
    pub fn initialize(space: SearchSpace<'a>, algorithm: Algorithm, config: &SwarmConfig) -> Self {
        let mut streams = streams(config.seed, algorithm, config.swarm_size);
        let mut evaluations = 0;
        let particles: Vec<Particle> = streams
            .iter_mut()
            .map(|rng| {
                let (position, fitness) = initial_genome(&space, rng, &mut evaluations);
                Particle {
                    velocity: vec![0.0; position.len()],
                    best_position: position.clone(),
                    best_fitness: fitness,
                    position,
                    fitness,
                }
            })
            .collect();
        Self::from_particles(space, particles, streams, config.inertia, evaluations)
    }

    /// Assembles a swarm from explicit particles.
    pub fn from_particles(
        space: SearchSpace<'a>,
        particles: Vec<Particle>,
        streams: Vec<ChaCha8Rng>,
        inertia: f64,
        evaluations: usize,
    ) -> Self {
        let mut swarm = Self {
            space,
            particles,
            streams,
            global_best: 0,
            inertia,
            evaluations,
        };
        swarm.refresh_global_best();
        swarm
    }

    pub fn refresh_global_best(&mut self) {
        self.global_best = argmin(self.particles.iter().map(|p| p.best_fitness));
    }

    pub fn global_best_fitness(&self) -> f64 {
        self.particles[self.global_best].best_fitness
    }

    pub fn global_best_position(&self) -> &[f64] {
        &self.particles[self.global_best].best_position
    }

    pub(crate) fn evaluate_particle(&mut self, i: usize) {
        let path = self.space.decode(&self.particles[i].position);
        self.particles[i].fitness = evaluate(self.space.scenario(), &path, &mut self.evaluations);
    }
}

/// One coordinate of the velocity update; `to_local` and `to_global` are the
/// (possibly wrapped) differences `l - x` and `g - x`.
#[allow(clippy::too_many_arguments)]
pub fn velocity_component(
    inertia: f64,
    velocity: f64,
    to_local: f64,
    to_global: f64,
    cognitive: f64,
    social: f64,
    r1: f64,
    r2: f64,
) -> f64 {
    inertia * velocity + cognitive * r1 * to_local + social * r2 * to_global
}

#[allow(clippy::needless_range_loop)]
fn velocity_step(swarm: &mut Swarm<'_>, config: &SwarmConfig) {
    let global = swarm.global_best_position().to_vec();
    let w = swarm.inertia;
    for i in 0..swarm.particles.len() {
        let rng = &mut swarm.streams[i];
        let p = &mut swarm.particles[i];
        for d in 0..p.position.len() {
            let r1: f64 = rng.random();
            let r2: f64 = rng.random();
            let x = p.position[d];
            p.velocity[d] = velocity_component(
                w,
                p.velocity[d],
                swarm.space.difference(d, p.best_position[d], x),
                swarm.space.difference(d, global[d], x),
                config.cognitive,
                config.social,
                r1,
                r2,
            );
        }
        clamp_wrap(&mut [], Some(&mut p.velocity), swarm.space.dims());
        for (x, v) in p.position.iter_mut().zip(&p.velocity) {
            *x += v;
        }
        clamp_wrap(&mut p.position, None, swarm.space.dims());
        swarm.evaluate_particle(i);
        swarm.particles[i].refresh_best();
    }
    swarm.refresh_global_best();
    swarm.inertia *= config.damping;
}

/// Classic PSO generation over Cartesian genomes.
pub fn pso_step(swarm: &mut Swarm<'_>, config: &SwarmConfig) {
    debug_assert_eq!(swarm.space.kind(), EncodingKind::Cartesian);
    velocity_step(swarm, config);
}

/// Phase-angle PSO generation; angles are clamped to `[-pi/2, pi/2]`.
pub fn theta_pso_step(swarm: &mut Swarm<'_>, config: &SwarmConfig) {
    debug_assert_eq!(swarm.space.kind(), EncodingKind::Angle);
    velocity_step(swarm, config);
}

/// Spherical-vector PSO generation.
pub fn spso_step(swarm: &mut Swarm<'_>, config: &SwarmConfig) {
    debug_assert_eq!(swarm.space.kind(), EncodingKind::Spherical);
    velocity_step(swarm, config);
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{FRAC_PI_2, PI};
    use std::sync::Arc;

    use super::*;
    use crate::geometry::Point3;
    use crate::optimizers::streams;
    use crate::scenario::{CostWeights, FlightConstraints, Scenario};
    use crate::terrain::{generate_synthetic, SyntheticTerrainSpec};

    fn scenario() -> Scenario {
        let terrain = generate_synthetic(&SyntheticTerrainSpec::flat(21, 21, 10.0, 0.0), 0).unwrap();
        Scenario::new(
            Arc::new(terrain),
            vec![],
            Point3::new(10.0, 10.0, 70.0),
            Point3::new(190.0, 150.0, 70.0),
            FlightConstraints::default(),
            CostWeights::default(),
            5,
        )
        .unwrap()
    }

    #[test]
    fn velocity_formula_hand_values() {
        // w=0.5, v=1, x=0, l=2, g=4, r1=r2=1, eta1=eta2=1.5
        assert_eq!(velocity_component(0.5, 1.0, 2.0, 4.0, 1.5, 1.5, 1.0, 1.0), 9.5);
        // theta-PSO: w=1, dtheta=0.1, theta=gamma=gamma_g=0, r=0.5
        assert_eq!(velocity_component(1.0, 0.1, 0.0, 0.0, 1.5, 1.5, 0.5, 0.5), 0.1);
        assert_eq!(velocity_component(1.0, 0.7, 3.0, -2.0, 0.0, 0.0, 0.3, 0.9), 0.7);
    }

    #[test]
    fn azimuth_difference_wraps_short_way() {
        let s = scenario();
        let space = SearchSpace::new(EncodingKind::Spherical, &s);
        let to_local = space.difference(2, -0.9 * PI, 0.9 * PI);
        let dphi = velocity_component(0.0, 0.0, to_local, 0.0, 1.0, 0.0, 1.0, 0.0);
        assert!((dphi - 0.2 * PI).abs() < 1e-12);
        // non-azimuth coordinates use the plain difference
        assert_eq!(space.difference(1, -1.0, 1.0), -2.0);
    }

    fn frozen(config: &SwarmConfig) -> SwarmConfig {
        SwarmConfig {
            cognitive: 0.0,
            social: 0.0,
            inertia: 1.0,
            damping: 1.0,
            ..config.clone()
        }
    }

    #[test]
    fn zero_coefficients_keep_swarms_stationary() {
        let s = scenario();
        let cfg = frozen(&SwarmConfig {
            swarm_size: 8,
            max_iterations: 5,
            seed: 11,
            ..SwarmConfig::default()
        });
        for (alg, step) in [
            (Algorithm::Pso, pso_step as fn(&mut Swarm<'_>, &SwarmConfig)),
            (Algorithm::ThetaPso, theta_pso_step),
            (Algorithm::Spso, spso_step),
        ] {
            let mut swarm = Swarm::initialize(SearchSpace::new(alg.encoding(), &s), alg, &cfg);
            let before: Vec<Vec<f64>> = swarm.particles.iter().map(|p| p.position.clone()).collect();
            for _ in 0..5 {
                step(&mut swarm, &cfg);
            }
            let after: Vec<Vec<f64>> = swarm.particles.iter().map(|p| p.position.clone()).collect();
            assert_eq!(before, after, "{alg}");
        }
    }

    #[test]
    fn pure_inertia_moves_by_velocity() {
        let s = scenario();
        let space = SearchSpace::new(EncodingKind::Spherical, &s);
        let cfg = frozen(&SwarmConfig::default());
        let position = vec![50.0, 1.2, 0.3, 40.0, 1.3, 0.2, 30.0, 1.4, 0.1];
        let velocity = vec![1.0, 0.05, -0.1, -2.0, 0.0, 0.1, 0.5, 0.01, 0.0];
        let particle = Particle {
            position: position.clone(),
            velocity: velocity.clone(),
            fitness: f64::INFINITY,
            best_position: position.clone(),
            best_fitness: f64::INFINITY,
        };
        let mut swarm = Swarm::from_particles(
            space,
            vec![particle.clone(), particle],
            streams(0, Algorithm::Spso, 2),
            1.0,
            0,
        );
        spso_step(&mut swarm, &cfg);
        let expected: Vec<f64> = position.iter().zip(&velocity).map(|(x, v)| x + v).collect();
        for (a, b) in swarm.particles[0].position.iter().zip(&expected) {
            assert!((a - b).abs() < 1e-12);
        }
        assert_eq!(swarm.particles[0].velocity, velocity);
    }

    #[test]
    fn fixed_point_at_bests() {
        let s = scenario();
        let space = SearchSpace::new(EncodingKind::Cartesian, &s);
        let x = vec![100.0, 80.0, 70.0, 120.0, 100.0, 70.0, 150.0, 120.0, 70.0];
        let particle = Particle {
            position: x.clone(),
            velocity: vec![0.0; 9],
            fitness: 1.0,
            best_position: x.clone(),
            best_fitness: 1.0,
        };
        let mut swarm = Swarm::from_particles(
            space,
            vec![particle.clone(), particle],
            streams(1, Algorithm::Pso, 2),
            1.0,
            0,
        );
        pso_step(&mut swarm, &SwarmConfig::default());
        assert_eq!(swarm.particles[0].position, x);
        assert_eq!(swarm.particles[1].position, x);
    }

    #[test]
    fn theta_overshoot_is_clamped() {
        let s = scenario();
        let space = SearchSpace::new(EncodingKind::Angle, &s);
        let x = vec![1.5; 9];
        let particle = Particle {
            position: x.clone(),
            velocity: vec![0.5; 9],
            fitness: f64::INFINITY,
            best_position: x.clone(),
            best_fitness: f64::INFINITY,
        };
        let mut swarm = Swarm::from_particles(
            space,
            vec![particle.clone(), particle],
            streams(2, Algorithm::ThetaPso, 2),
            1.0,
            0,
        );
        theta_pso_step(&mut swarm, &frozen(&SwarmConfig::default()));
        assert!(swarm.particles[0].position.iter().all(|&t| t == FRAC_PI_2));
    }

    #[test]
    fn local_bests_never_get_worse() {
        let s = scenario();
        let cfg = SwarmConfig {
            swarm_size: 20,
            max_iterations: 30,
            seed: 5,
            ..SwarmConfig::default()
        };
        for alg in [Algorithm::Pso, Algorithm::ThetaPso, Algorithm::Spso] {
            let mut swarm = Swarm::initialize(SearchSpace::new(alg.encoding(), &s), alg, &cfg);
            let mut last: Vec<f64> = swarm.particles.iter().map(|p| p.best_fitness).collect();
            let mut global = swarm.global_best_fitness();
            for _ in 0..30 {
                spso_or(alg, &mut swarm, &cfg);
                for (p, prev) in swarm.particles.iter().zip(&mut last) {
                    assert!(p.best_fitness <= *prev);
                    assert!(p.best_fitness <= p.fitness);
                    *prev = p.best_fitness;
                }
                assert!(swarm.global_best_fitness() <= global);
                global = swarm.global_best_fitness();
            }
        }
    }

    fn spso_or(alg: Algorithm, swarm: &mut Swarm<'_>, cfg: &SwarmConfig) {
        match alg {
            Algorithm::Pso => pso_step(swarm, cfg),
            Algorithm::ThetaPso => theta_pso_step(swarm, cfg),
            _ => spso_step(swarm, cfg),
        }
    }

    #[test]
    fn inertia_is_damped_each_generation() {
        let s = scenario();
        let cfg = SwarmConfig {
            swarm_size: 4,
            seed: 1,
            ..SwarmConfig::default()
        };
        let mut swarm = Swarm::initialize(SearchSpace::new(EncodingKind::Cartesian, &s), Algorithm::Pso, &cfg);
        pso_step(&mut swarm, &cfg);
        pso_step(&mut swarm, &cfg);
        assert!((swarm.inertia - 0.98 * 0.98).abs() < 1e-15);
    }
}

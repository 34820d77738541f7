//! Quantum-behaved PSO: no velocity, each coordinate is resampled around a
//! random attractor between the local and global bests with a spread set by
//! the distance to the mean best position.

use rand::Rng;

use super::{Swarm, SwarmConfig};
use crate::encodings::clamp_wrap;

/// `p +/- 0.5 L ln(1/r)` with `p = a l + (1 - a) g` and `L = 2 beta |mbest - x|`.
#[allow(clippy::too_many_arguments)]
pub fn qpso_coordinate(local: f64, global: f64, mbest: f64, x: f64, beta: f64, a: f64, r: f64, positive: bool) -> f64 {
    let attractor = a * local + (1.0 - a) * global;
    let spread = 2.0 * beta * (mbest - x).abs();
    let offset = 0.5 * spread * (1.0 / r).ln();
    if positive {
        attractor + offset
    } else {
        attractor - offset
    }
}

/// One QPSO generation at zero-based iteration `k`.
pub fn qpso_step(swarm: &mut Swarm<'_>, config: &SwarmConfig, k: usize) {
    let beta = config.beta_at(k);
    let m = swarm.particles.len() as f64;
    let dim = swarm.space.len();
    let mut mbest = vec![0.0; dim];
    for p in &swarm.particles {
        for (acc, l) in mbest.iter_mut().zip(&p.best_position) {
            *acc += l / m;
        }
    }
    let global = swarm.global_best_position().to_vec();
    for i in 0..swarm.particles.len() {
        let rng = &mut swarm.streams[i];
        let p = &mut swarm.particles[i];
        for d in 0..dim {
            let a: f64 = rng.random();
            // (0, 1]
            let r: f64 = 1.0 - rng.random::<f64>();
            let positive = rng.random::<bool>();
            p.position[d] = qpso_coordinate(
                p.best_position[d],
                global[d],
                mbest[d],
                p.position[d],
                beta,
                a,
                r,
                positive,
            );
        }
        clamp_wrap(&mut p.position, None, swarm.space.dims());
        swarm.evaluate_particle(i);
        swarm.particles[i].refresh_best();
    }
    swarm.refresh_global_best();
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::encodings::{EncodingKind, SearchSpace};
    use crate::geometry::Point3;
    use crate::optimizers::{streams, Algorithm, Particle};
    use crate::scenario::{CostWeights, FlightConstraints, Scenario};
    use crate::terrain::{generate_synthetic, SyntheticTerrainSpec};

    #[test]
    fn unit_draw_lands_on_attractor() {
        assert_eq!(qpso_coordinate(2.0, 6.0, 10.0, 0.0, 1.0, 0.25, 1.0, true), 5.0);
        assert_eq!(qpso_coordinate(2.0, 6.0, 10.0, 0.0, 1.0, 0.25, 1.0, false), 5.0);
    }

    #[test]
    fn collapsed_swarm_has_zero_spread() {
        let x = qpso_coordinate(3.0, 3.0, 3.0, 3.0, 0.8, 0.4, 0.01, true);
        assert_eq!(x, 3.0);
    }

    #[test]
    fn a_of_one_picks_local_best() {
        assert_eq!(qpso_coordinate(7.0, -1.0, 0.0, 0.0, 1.0, 1.0, 1.0, true), 7.0);
    }

    #[test]
    fn spread_follows_log_draw() {
        // L = 2 * 0.5 * |4 - 2| = 2, offset = 0.5 * 2 * ln(e) = 1
        let x = qpso_coordinate(0.0, 0.0, 4.0, 2.0, 0.5, 0.5, (-1.0f64).exp(), false);
        assert!((x + 1.0).abs() < 1e-12);
    }

    #[test]
    fn collapsed_swarm_stays_put() {
        let terrain = generate_synthetic(&SyntheticTerrainSpec::flat(11, 11, 10.0, 0.0), 0).unwrap();
        let s = Scenario::new(
            Arc::new(terrain),
            vec![],
            Point3::new(0.0, 0.0, 70.0),
            Point3::new(100.0, 100.0, 70.0),
            FlightConstraints::default(),
            CostWeights::default(),
            3,
        )
        .unwrap();
        let space = SearchSpace::new(EncodingKind::Cartesian, &s);
        let x = vec![50.0, 50.0, 70.0];
        let p = Particle {
            position: x.clone(),
            velocity: vec![0.0; 3],
            fitness: 1.0,
            best_position: x.clone(),
            best_fitness: 1.0,
        };
        let mut swarm = Swarm::from_particles(
            space,
            vec![p.clone(), p.clone(), p],
            streams(0, Algorithm::Qpso, 3),
            1.0,
            0,
        );
        qpso_step(&mut swarm, &SwarmConfig::default(), 0);
        assert!(swarm.particles.iter().all(|p| p.position == x));
    }
}

//! Seeded benchmark matrices: every scenario x algorithm x run cell is an
//! independent optimization whose seed is derived from the base seed, so the
//! matrix can run in parallel and still reproduce exactly.

use std::fs;
use std::path::Path as FsPath;
use std::time::Instant;

use rayon::prelude::*;
use thiserror::Error;

use crate::export::{
    export_convergence_csv, export_run_records_csv, export_summary_csv, ExportError, RunRecord, SummaryRow,
};
use crate::optimizers::{mix64, run, Algorithm, OptimizeError, RunOutcome, SwarmConfig};
use crate::scenario::Scenario;
use crate::stats::{mean_std, paired_t_test, TTestVerdict};

/// Significance level of the summary t-tests.
pub const ALPHA: f64 = 0.05;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("invalid benchmark: {0}")]
    Invalid(String),
    #[error(transparent)]
    Optimize(#[from] OptimizeError),
    #[error(transparent)]
    Export(#[from] ExportError),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

#[derive(Debug, Clone)]
pub struct BenchmarkSpec {
    /// `(id, scenario)` pairs; ids name the scenario in every output.
    pub scenarios: Vec<(String, Scenario)>,
    pub algorithms: Vec<Algorithm>,
    pub runs_per_cell: usize,
    /// Shared solver settings; budgets are equalized per algorithm and the
    /// seed is replaced per run.
    pub config: SwarmConfig,
    pub baseline: Algorithm,
    pub base_seed: u64,
    /// Upper bound on concurrent runs; 0 lets the thread pool decide.
    pub jobs: usize,
}

impl BenchmarkSpec {
    pub fn validate(&self) -> Result<(), BenchError> {
        let fail = |m: &str| Err(BenchError::Invalid(m.to_string()));
        if self.scenarios.is_empty() {
            return fail("at least one scenario is required");
        }
        if self.algorithms.is_empty() {
            return fail("at least one algorithm is required");
        }
        if self.runs_per_cell < 1 {
            return fail("runs_per_cell must be >= 1");
        }
        if !self.algorithms.contains(&self.baseline) {
            return fail("the baseline must be one of the benchmarked algorithms");
        }
        for (i, a) in self.algorithms.iter().enumerate() {
            if self.algorithms[..i].contains(a) {
                return Err(BenchError::Invalid(format!("algorithm {a} listed twice")));
            }
        }
        for (i, (id, _)) in self.scenarios.iter().enumerate() {
            if self.scenarios[..i].iter().any(|(o, _)| o == id) {
                return Err(BenchError::Invalid(format!("scenario id {id} used twice")));
            }
        }
        for a in &self.algorithms {
            self.config.equal_budget(*a).validate()?;
        }
        Ok(())
    }
}

/// FNV-1a over the scenario id, so seeds depend on the name and not on the
/// scenario's position in the list.
fn fnv1a(s: &str) -> u64 {
    s.bytes().fold(0xCBF2_9CE4_8422_2325, |h, b| {
        (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01B3)
    })
}

/// Seed of run `run` of `algorithm` on scenario `scenario_id`.
pub fn cell_seed(base_seed: u64, scenario_id: &str, algorithm: Algorithm, run: usize) -> u64 {
    mix64(mix64(mix64(base_seed ^ fnv1a(scenario_id)) ^ algorithm.tag()) ^ run as u64)
}

#[derive(Debug, Clone)]
pub struct CellRun {
    pub scenario: usize,
    pub algorithm: Algorithm,
    pub run: usize,
    pub seed: u64,
    pub outcome: RunOutcome,
    pub wall_time_s: f64,
}

#[derive(Debug, Clone)]
pub struct BenchmarkResult {
    /// Ordered by scenario, then algorithm, then run.
    pub runs: Vec<CellRun>,
    pub summary: Vec<SummaryRow>,
}

impl BenchmarkResult {
    /// True when every cell has at least one feasible run.
    pub fn all_cells_feasible(&self) -> bool {
        self.summary.iter().all(|r| r.feasible > 0)
    }
}

/// Runs the whole matrix and summarizes it.
pub fn run_benchmark(spec: &BenchmarkSpec) -> Result<BenchmarkResult, BenchError> {
    spec.validate()?;
    let cells: Vec<(usize, Algorithm, usize)> = (0..spec.scenarios.len())
        .flat_map(|s| {
            spec.algorithms
                .iter()
                .flat_map(move |&a| (0..spec.runs_per_cell).map(move |r| (s, a, r)))
        })
        .collect();
    let one = |&(s, a, r): &(usize, Algorithm, usize)| -> Result<CellRun, OptimizeError> {
        let (id, scenario) = &spec.scenarios[s];
        let seed = cell_seed(spec.base_seed, id, a, r);
        let config = SwarmConfig {
            seed,
            ..spec.config.equal_budget(a)
        };
        let clock = Instant::now();
        let outcome = run(a, scenario, &config)?;
        Ok(CellRun {
            scenario: s,
            algorithm: a,
            run: r,
            seed,
            outcome,
            wall_time_s: clock.elapsed().as_secs_f64(),
        })
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.jobs)
        .build()
        .map_err(|e| BenchError::Invalid(format!("thread pool: {e}")))?;
    let runs = pool.install(|| cells.par_iter().map(one).collect::<Result<Vec<_>, _>>())?;
    let summary = summarize(spec, &runs);
    Ok(BenchmarkResult { runs, summary })
}

/// Mean/std over feasible runs per cell and the paired t-test of the
/// baseline against each algorithm. Pairs where either side failed are
/// dropped and counted.
pub fn summarize(spec: &BenchmarkSpec, runs: &[CellRun]) -> Vec<SummaryRow> {
    let finals = |s: usize, a: Algorithm| -> Vec<f64> {
        let mut v: Vec<(usize, f64)> = runs
            .iter()
            .filter(|c| c.scenario == s && c.algorithm == a)
            .map(|c| (c.run, c.outcome.trace().final_fitness()))
            .collect();
        v.sort_by_key(|(r, _)| *r);
        v.into_iter().map(|(_, f)| f).collect()
    };
    let mut rows = Vec::with_capacity(spec.scenarios.len() * spec.algorithms.len());
    for (s, (id, _)) in spec.scenarios.iter().enumerate() {
        let base = finals(s, spec.baseline);
        for &a in &spec.algorithms {
            let values = finals(s, a);
            let feasible: Vec<f64> = values.iter().copied().filter(|f| f.is_finite()).collect();
            let (mean, std) = mean_std(&feasible).map_or((f64::NAN, f64::NAN), |m| (m.mean, m.std));
            let (xa, xb): (Vec<f64>, Vec<f64>) = base
                .iter()
                .zip(&values)
                .filter(|(x, y)| x.is_finite() && y.is_finite())
                .map(|(x, y)| (*x, *y))
                .unzip();
            let dropped = values.len().min(base.len()) - xa.len();
            let test = if a == spec.baseline || xa.len() < 2 {
                TTestVerdict::NOT_APPLICABLE
            } else {
                paired_t_test(&xa, &xb, ALPHA).unwrap_or(TTestVerdict::NOT_APPLICABLE)
            };
            rows.push(SummaryRow {
                scenario: id.clone(),
                algorithm: a.name().to_string(),
                mean,
                std,
                t: test.t_statistic,
                p: test.p_value,
                verdict: test.verdict,
                feasible: feasible.len(),
                runs: values.len(),
                dropped,
            });
        }
    }
    rows
}

/// Writes `traces/<scenario>_<algorithm>_<run>.csv`, `runs.csv` and
/// `summary.csv` under `out_dir`.
pub fn write_outputs(spec: &BenchmarkSpec, result: &BenchmarkResult, out_dir: &FsPath) -> Result<(), BenchError> {
    let traces = out_dir.join("traces");
    fs::create_dir_all(&traces).map_err(|source| BenchError::Io {
        path: traces.display().to_string(),
        source,
    })?;
    let mut records = Vec::with_capacity(result.runs.len());
    for c in &result.runs {
        let id = &spec.scenarios[c.scenario].0;
        let name = format!("{id}_{}_{}.csv", c.algorithm, c.run);
        let trace = c.outcome.trace();
        export_convergence_csv(trace, traces.join(&name))?;
        records.push(RunRecord {
            scenario: id.clone(),
            algorithm: c.algorithm.name().to_string(),
            run: c.run,
            seed: c.seed,
            final_fitness: trace.final_fitness(),
            feasible: c.outcome.is_feasible(),
            evaluations: trace.evaluations,
            wall_time_s: c.wall_time_s,
            trace_file: format!("traces/{name}"),
        });
    }
    export_run_records_csv(&records, out_dir.join("runs.csv"))?;
    export_summary_csv(&result.summary, out_dir.join("summary.csv"))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::geometry::Point3;
    use crate::scenario::{CostWeights, FlightConstraints};
    use crate::stats::Verdict;
    use crate::terrain::{generate_synthetic, SyntheticTerrainSpec};

    fn flat(id: &str) -> (String, Scenario) {
        let terrain = generate_synthetic(&SyntheticTerrainSpec::flat(11, 11, 10.0, 0.0), 0).unwrap();
        let s = Scenario::new(
            Arc::new(terrain),
            vec![],
            Point3::new(0.0, 0.0, 70.0),
            Point3::new(100.0, 100.0, 70.0),
            FlightConstraints::default(),
            CostWeights::default(),
            4,
        )
        .unwrap();
        (id.to_string(), s)
    }

    fn spec(runs: usize) -> BenchmarkSpec {
        BenchmarkSpec {
            scenarios: vec![flat("a"), flat("b")],
            algorithms: vec![Algorithm::Spso, Algorithm::Pso],
            runs_per_cell: runs,
            config: SwarmConfig {
                swarm_size: 10,
                max_iterations: 5,
                ..SwarmConfig::default()
            },
            baseline: Algorithm::Spso,
            base_seed: 1,
            jobs: 2,
        }
    }

    #[test]
    fn seeds_differ_per_cell() {
        let a = cell_seed(0, "s1", Algorithm::Spso, 0);
        assert_ne!(a, cell_seed(0, "s2", Algorithm::Spso, 0));
        assert_ne!(a, cell_seed(0, "s1", Algorithm::Pso, 0));
        assert_ne!(a, cell_seed(0, "s1", Algorithm::Spso, 1));
        assert_ne!(a, cell_seed(1, "s1", Algorithm::Spso, 0));
        assert_eq!(a, cell_seed(0, "s1", Algorithm::Spso, 0));
    }

    #[test]
    fn matrix_shape_and_run_count() {
        let result = run_benchmark(&spec(3)).unwrap();
        assert_eq!(result.runs.len(), 2 * 2 * 3);
        assert_eq!(result.summary.len(), 4);
        assert!(result
            .summary
            .iter()
            .filter(|r| r.algorithm == "spso")
            .all(|r| r.verdict == Verdict::NA));
        let evaluations: usize = result.runs.iter().map(|c| c.outcome.trace().evaluations).sum();
        assert!(evaluations >= 12 * 10 * 5);
    }

    #[test]
    fn single_run_has_no_test() {
        let result = run_benchmark(&spec(1)).unwrap();
        for r in &result.summary {
            assert_eq!(r.verdict, Verdict::NA);
            if r.feasible == 1 {
                assert_eq!(r.std, 0.0);
            }
        }
    }

    #[test]
    fn invalid_specs_are_rejected() {
        let mut s = spec(2);
        s.baseline = Algorithm::Qpso;
        assert!(run_benchmark(&s).is_err());
        let mut s = spec(0);
        s.runs_per_cell = 0;
        assert!(run_benchmark(&s).is_err());
        let mut s = spec(2);
        s.scenarios.push(flat("a"));
        assert!(run_benchmark(&s).is_err());
    }

    #[test]
    fn job_count_does_not_change_results() {
        let mut one = spec(2);
        one.jobs = 1;
        let a = run_benchmark(&one).unwrap();
        let b = run_benchmark(&spec(2)).unwrap();
        let bytes = |r: &BenchmarkResult| {
            let mut buf = Vec::new();
            crate::export::write_summary(&r.summary, &mut buf).unwrap();
            buf
        };
        assert_eq!(bytes(&a), bytes(&b));
    }
}

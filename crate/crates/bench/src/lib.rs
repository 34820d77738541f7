//! Shared fixtures for the criterion benches.

use spso_core::suite::{build_benchmark_suite, SuiteEntry};

/// Suite scenario `id` (1-based) for seed 0.
pub fn suite_entry(id: usize) -> SuiteEntry {
    build_benchmark_suite(0)
        .expect("suite builds for seed 0")
        .into_iter()
        .find(|e| e.id == id)
        .expect("suite ids run from 1 to 8")
}

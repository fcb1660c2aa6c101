use crate::error::{Error, Result};
use crate::measures::{draw_points, World};
use crate::verifiers::family::{PathCounts, Verdict, VerifierFamily};

/// Evaluates `λ_1, …, λ_{n_max}` on the prefixes of one sample path.
pub fn run(v: &VerifierFamily, world: &World, n_max: usize, seed: u64) -> Result<Vec<Verdict>> {
    run_path(v, world, n_max, seed, 0)
}

/// As [`run`], on the path of trial `trial` under `master_seed`.
pub fn run_path(v: &VerifierFamily, world: &World, n_max: usize, master_seed: u64, trial: u64) -> Result<Vec<Verdict>> {
    if n_max == 0 {
        return Err(Error::EmptySample);
    }
    if world.space() != v.space() {
        return Err(Error::SpaceMismatch);
    }
    let points = draw_points(world, n_max, master_seed, trial);
    let mut ctx = PathCounts::new(&points, Some(world));
    (1..=n_max).map(|n| v.verdict(&mut ctx, n)).collect()
}

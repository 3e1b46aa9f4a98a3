//! Execution-mode switch for the data-parallel inner loops.
//!
//! Batch probes (Lipschitz pair audits, probe fan-outs, direction sweeps)
//! are maps over an index range. `indexed_map` runs them on rayon when the
//! `parallel` feature is enabled and `ExecMode::Parallel` is selected, and
//! sequentially otherwise. Work items draw per-index RNG streams and results
//! come back in index order, so both modes produce bit-identical output.

use serde::{Deserialize, Serialize};

/// How batch maps execute. `Parallel` silently degrades to sequential when
/// the crate is built without the `parallel` feature, keeping configs
/// portable across both builds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExecMode {
    Sequential,
    Parallel,
}

impl Default for ExecMode {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            ExecMode::Parallel
        } else {
            ExecMode::Sequential
        }
    }
}

/// Maps `f` over `0..n`, preserving index order in the output.
pub fn indexed_map<T, F>(mode: ExecMode, n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    match mode {
        ExecMode::Sequential => (0..n).map(f).collect(),
        ExecMode::Parallel => {
            #[cfg(feature = "parallel")]
            {
                use rayon::prelude::*;
                (0..n).into_par_iter().map(f).collect()
            }
            #[cfg(not(feature = "parallel"))]
            {
                (0..n).map(f).collect()
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_agree_and_preserve_order() {
        let f = |i: usize| (i as f64).sqrt() * 3.0 - i as f64;
        let seq = indexed_map(ExecMode::Sequential, 257, f);
        let par = indexed_map(ExecMode::Parallel, 257, f);
        assert_eq!(seq, par);
        assert_eq!(seq[4], 2.0 * 3.0 - 4.0);
    }
}

//! Data-parallel helpers with a sequential fallback.  Results are index
//! ordered, so output is identical with and without the `parallel` feature.

#[cfg(feature = "parallel")]
pub fn indexed_map<T: Send, F: Fn(usize) -> T + Sync + Send>(n: usize, f: F) -> Vec<T> {
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn indexed_map<T: Send, F: Fn(usize) -> T + Sync + Send>(n: usize, f: F) -> Vec<T> {
    (0..n).map(f).collect()
}

/// Human-readable execution mode, for run manifests and benches.
pub fn exec_mode() -> &'static str {
    if cfg!(feature = "parallel") {
        "parallel"
    } else {
        "sequential"
    }
}

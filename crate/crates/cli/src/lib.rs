//! File formats, reports, verification suites and search drivers behind the
//! `ensemble-vol` binary.

pub mod format;
pub mod io;
pub mod report;
pub mod search;
pub mod table;
pub mod verify;

/// Caps internal parallelism; `0` or unset means one thread per core.
pub const THREADS_VAR: &str = "ENSEMBLE_VOL_THREADS";

/// Thread count requested through [`THREADS_VAR`].
pub fn requested_threads() -> Result<usize, String> {
    match std::env::var(THREADS_VAR) {
        Err(_) => Ok(0),
        Ok(v) if v.trim().is_empty() => Ok(0),
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| format!("{THREADS_VAR} must be a non-negative integer, got `{v}`")),
    }
}

/// Runs `f` on a pool of `threads` workers (`0` = automatic).
pub fn with_threads<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

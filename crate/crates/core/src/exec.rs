//! Deterministic work splitting for the heavy scans.
//!
//! Results must be byte-identical for any worker count, so parallelism never
//! changes an evaluation or summation order: the outer index range is split
//! into fixed-size chunks, each chunk is computed sequentially, and chunk
//! results are folded in chunk order.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

const CHUNK: usize = 32;

/// Worker count from `FREDHOLM_METRIC_WORKERS`; unset, empty, or invalid
/// values fall back to 1.
pub fn worker_count() -> usize {
    std::env::var("FREDHOLM_METRIC_WORKERS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&w| w >= 1)
        .unwrap_or(1)
}

/// Computes `f(i)` for `i in 0..n` and returns the results in index order.
///
/// With one worker this is a plain loop. With more, fixed chunks of the index
/// range are claimed atomically; the output is reassembled in chunk order, so
/// the result does not depend on scheduling.
pub fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync,
{
    let workers = worker_count().min(n.max(1));
    if workers <= 1 || n <= CHUNK {
        return (0..n).map(f).collect();
    }

    let next = AtomicUsize::new(0);
    let chunks: Mutex<Vec<(usize, Vec<T>)>> = Mutex::new(Vec::with_capacity(n / CHUNK + 1));
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let start = next.fetch_add(CHUNK, Ordering::Relaxed);
                if start >= n {
                    break;
                }
                let end = (start + CHUNK).min(n);
                let part: Vec<T> = (start..end).map(&f).collect();
                chunks.lock().unwrap().push((start, part));
            });
        }
    });

    let mut parts = chunks.into_inner().unwrap();
    parts.sort_by_key(|(start, _)| *start);
    let mut out = Vec::with_capacity(n);
    for (_, part) in parts {
        out.extend(part);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn map_indexed_preserves_order() {
        let out = map_indexed(1000, |i| i * i);
        let expect: Vec<usize> = (0..1000).map(|i| i * i).collect();
        assert_eq!(out, expect);
    }

    #[test]
    fn worker_count_defaults_to_one() {
        // The variable is not set under `cargo test`.
        if std::env::var("FREDHOLM_METRIC_WORKERS").is_err() {
            assert_eq!(worker_count(), 1);
        }
    }
}

//! Portfolio execution for the anytime searches: N independent seeded
//! workers share one best-solution exchange point. A single worker runs
//! inline, keeping that mode deterministic; with more workers the returned
//! result is the minimum over all of them.

use std::sync::Mutex;

use crate::Result;

pub(crate) struct SharedBest<T> {
    inner: Mutex<Option<(f64, T)>>,
}

impl<T: Clone> SharedBest<T> {
    pub fn new() -> Self {
        SharedBest {
            inner: Mutex::new(None),
        }
    }

    /// Records the value if it beats the current best.
    pub fn publish(&self, value: f64, payload: &T) {
        let mut slot = self.inner.lock().expect("portfolio lock");
        match &*slot {
            Some((best, _)) if *best <= value => {}
            _ => *slot = Some((value, payload.clone())),
        }
    }

    pub fn snapshot(&self) -> Option<(f64, T)> {
        self.inner.lock().expect("portfolio lock").clone()
    }
}

/// Derives a worker seed stream from the base seed (splitmix64 step).
pub(crate) fn derive_seed(base: u64, salt: u64) -> u64 {
    let mut z = base
        .wrapping_add(salt.wrapping_mul(0x9e3779b97f4a7c15))
        .wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Runs `worker` with `workers` seeds and returns the best (value, payload,
/// log). One worker runs on the calling thread.
pub(crate) fn run_portfolio<T, L, F>(workers: usize, seed: u64, worker: F) -> Result<(f64, T, L)>
where
    T: Clone + Send,
    L: Send,
    F: Fn(u64, &SharedBest<T>) -> Result<(f64, T, L)> + Sync,
{
    let shared = SharedBest::new();
    let workers = workers.max(1);
    if workers == 1 {
        return worker(seed, &shared);
    }
    let results: Vec<Result<(f64, T, L)>> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|k| {
                let shared = &shared;
                let worker = &worker;
                scope.spawn(move || worker(derive_seed(seed, k as u64), shared))
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });
    let mut best: Option<(f64, T, L)> = None;
    for r in results {
        let r = r?;
        match &best {
            Some((v, _, _)) if *v <= r.0 => {}
            _ => best = Some(r),
        }
    }
    Ok(best.expect("at least one worker"))
}

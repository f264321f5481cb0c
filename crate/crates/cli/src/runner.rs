//! Thread-count resolution and an order-preserving parallel map.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

pub const THREADS_ENV: &str = "CVMDI_THREADS";

/// Worker count: `--threads` flag, then `CVMDI_THREADS`, then the config file,
/// then the machine's available parallelism.
pub fn thread_count(flag: Option<usize>, file: Option<usize>) -> usize {
    let env = std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.parse::<usize>().ok());
    flag.or(env)
        .or(file)
        .unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1)
        })
        .max(1)
}

/// Apply `f` to every item on `threads` workers; the output order matches the
/// input order regardless of scheduling, so results stay deterministic.
pub fn par_map<I, T, F>(items: &[I], threads: usize, f: F) -> Vec<T>
where
    I: Sync,
    T: Send,
    F: Fn(&I) -> T + Sync,
{
    let threads = threads.clamp(1, items.len().max(1));
    if threads == 1 {
        return items.iter().map(|i| f(i)).collect();
    }
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<T>>> = Mutex::new((0..items.len()).map(|_| None).collect());
    std::thread::scope(|scope| {
        for _ in 0..threads {
            scope.spawn(|| loop {
                let idx = next.fetch_add(1, Ordering::Relaxed);
                if idx >= items.len() {
                    break;
                }
                let value = f(&items[idx]);
                slots.lock().unwrap()[idx] = Some(value);
            });
        }
    });
    slots
        .into_inner()
        .unwrap()
        .into_iter()
        .map(|slot| slot.expect("worker skipped a slot"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn par_map_preserves_order() {
        let items: Vec<usize> = (0..257).collect();
        let doubled = par_map(&items, 8, |&x| 2 * x);
        assert_eq!(doubled, items.iter().map(|x| 2 * x).collect::<Vec<_>>());
    }

    #[test]
    fn single_thread_path() {
        let items = [1, 2, 3];
        assert_eq!(par_map(&items, 1, |&x| x + 1), vec![2, 3, 4]);
    }
}

//! Data-parallel map over independent work items (basis monomials, seeds,
//! suites). With the `parallel` feature the map runs on rayon; without it, or
//! in [`ExecMode::Sequential`], it is a plain iterator. Output order is the
//! input order either way.

use std::sync::atomic::{AtomicU8, Ordering};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExecMode {
    Sequential,
    Parallel,
}

const SEQUENTIAL: u8 = 0;
const PARALLEL: u8 = 1;

static MODE: AtomicU8 = AtomicU8::new(if cfg!(feature = "parallel") { PARALLEL } else { SEQUENTIAL });

/// Process-wide execution mode used by every verification.
pub fn exec_mode() -> ExecMode {
    match MODE.load(Ordering::Relaxed) {
        PARALLEL => ExecMode::Parallel,
        _ => ExecMode::Sequential,
    }
}

pub fn set_exec_mode(mode: ExecMode) {
    let v = match mode {
        ExecMode::Sequential => SEQUENTIAL,
        ExecMode::Parallel => PARALLEL,
    };
    MODE.store(v, Ordering::Relaxed);
}

/// Whether [`ExecMode::Parallel`] actually runs on a thread pool in this build.
pub const fn parallel_available() -> bool {
    cfg!(feature = "parallel")
}

/// Maps `f` over `items` under the current [`exec_mode`].
pub fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    map_with(exec_mode(), items, f)
}

pub fn map_with<T, R, F>(mode: ExecMode, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match mode {
        #[cfg(feature = "parallel")]
        ExecMode::Parallel => {
            use rayon::prelude::*;
            items.par_iter().map(f).collect()
        }
        _ => items.iter().map(f).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_agree_and_keep_order() {
        let items: Vec<u64> = (0..1000).collect();
        let a = map_with(ExecMode::Sequential, &items, |x| x * x);
        let b = map_with(ExecMode::Parallel, &items, |x| x * x);
        assert_eq!(a, b);
        assert_eq!(a[999], 999 * 999);
    }
}

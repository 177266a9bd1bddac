//! Data-parallel map with a sequential fallback.

/// How independent per-bidegree work is scheduled.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ExecMode {
    #[default]
    Parallel,
    Sequential,
}

impl ExecMode {
    /// Parallel when the `parallel` feature is compiled in.
    pub fn effective(self) -> ExecMode {
        if cfg!(feature = "parallel") {
            self
        } else {
            ExecMode::Sequential
        }
    }
}

pub fn map<T, R, F>(mode: ExecMode, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match mode.effective() {
        #[cfg(feature = "parallel")]
        ExecMode::Parallel => {
            use rayon::prelude::*;
            items.par_iter().with_min_len(8).map(f).collect()
        }
        _ => items.iter().map(f).collect(),
    }
}

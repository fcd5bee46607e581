//! Sequential / data-parallel execution switch for grid sweeps.

/// How a sweep distributes its independent work items.
///
/// `Parallel` uses rayon when the crate is built with the `parallel`
/// feature; without it, it runs the same sequential loop as `Sequential`.
/// Either way results come back in input order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Exec {
    Sequential,
    #[default]
    Parallel,
}

impl Exec {
    /// True when this mode will actually fan out over threads.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }

    /// Ordered map over owned items.
    pub fn map<T, R, F>(self, items: Vec<T>, f: F) -> Vec<R>
    where
        T: Send,
        R: Send,
        F: Fn(T) -> R + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self == Exec::Parallel {
            use rayon::prelude::*;
            return items.into_par_iter().map(f).collect();
        }
        items.into_iter().map(f).collect()
    }

    /// Ordered flat-map; each item expands to a vector of results.
    pub fn flat_map<T, R, F>(self, items: Vec<T>, f: F) -> Vec<R>
    where
        T: Send,
        R: Send,
        F: Fn(T) -> Vec<R> + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self == Exec::Parallel {
            use rayon::prelude::*;
            return items.into_par_iter().flat_map_iter(f).collect();
        }
        items.into_iter().flat_map(f).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_modes_preserve_order() {
        let items: Vec<u32> = (0..1000).collect();
        let seq = Exec::Sequential.map(items.clone(), |x| x * 3);
        let par = Exec::Parallel.map(items, |x| x * 3);
        assert_eq!(seq, par);
        assert_eq!(seq[999], 2997);
    }

    #[test]
    fn flat_map_matches() {
        let items: Vec<u32> = (0..50).collect();
        let f = |x: u32| (0..x % 4).map(|y| x * 10 + y).collect::<Vec<_>>();
        assert_eq!(
            Exec::Sequential.flat_map(items.clone(), f),
            Exec::Parallel.flat_map(items, f)
        );
    }
}

//! Index-space parallelism with a sequential fallback.
//!
//! Every scan in the crate is expressed as a map over `0..len` whose results
//! are merged in index order, so the output never depends on the number of
//! workers. With the `parallel` feature disabled, or with `jobs == 1`, the
//! same closures run on the calling thread.

/// Worker count. `0` means "use all available cores".
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Jobs(pub usize);

impl Jobs {
    pub const SEQUENTIAL: Jobs = Jobs(1);
    pub const ALL: Jobs = Jobs(0);

    pub fn is_sequential(self) -> bool {
        self.0 == 1 || !cfg!(feature = "parallel")
    }
}

impl Default for Jobs {
    fn default() -> Self {
        Jobs::ALL
    }
}

#[cfg(feature = "parallel")]
fn with_pool<R: Send>(jobs: Jobs, op: impl FnOnce() -> R + Send) -> R {
    if jobs.0 == 0 {
        return op();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(jobs.0).build() {
        Ok(pool) => pool.install(op),
        Err(_) => op(),
    }
}

/// `(0..len).map(f)` collected in index order.
pub fn map<R, G>(jobs: Jobs, len: usize, f: G) -> Vec<R>
where
    R: Send,
    G: Fn(usize) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if !jobs.is_sequential() {
        use rayon::prelude::*;
        return with_pool(jobs, || (0..len).into_par_iter().map(&f).collect());
    }
    let _ = jobs;
    (0..len).map(f).collect()
}

/// The smallest index whose closure returns `Some`, with its value.
pub fn find_first<R, G>(jobs: Jobs, len: usize, f: G) -> Option<(usize, R)>
where
    R: Send,
    G: Fn(usize) -> Option<R> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if !jobs.is_sequential() {
        use rayon::prelude::*;
        return with_pool(jobs, || {
            (0..len)
                .into_par_iter()
                .find_map_first(|i| f(i).map(|r| (i, r)))
        });
    }
    let _ = jobs;
    (0..len).find_map(|i| f(i).map(|r| (i, r)))
}

/// Split `0..total` into contiguous blocks of at most `block` items.
pub fn blocks(total: u64, block: u64) -> Vec<(u64, u64)> {
    let block = block.max(1);
    let mut out = Vec::new();
    let mut start = 0;
    while start < total {
        let end = (start + block).min(total);
        out.push((start, end));
        start = end;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn map_preserves_order() {
        let seq = map(Jobs::SEQUENTIAL, 1000, |i| i * i);
        let par = map(Jobs(4), 1000, |i| i * i);
        assert_eq!(seq, par);
    }

    #[test]
    fn find_first_is_smallest() {
        let hit = |i: usize| (i % 37 == 36).then_some(i);
        assert_eq!(find_first(Jobs(4), 10_000, hit), Some((36, 36)));
        assert_eq!(find_first(Jobs::SEQUENTIAL, 10_000, hit), Some((36, 36)));
        assert_eq!(find_first(Jobs(3), 30, hit), None);
    }

    #[test]
    fn blocks_cover_range() {
        assert_eq!(blocks(10, 4), vec![(0, 4), (4, 8), (8, 10)]);
        assert!(blocks(0, 4).is_empty());
    }
}

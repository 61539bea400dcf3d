//! Data-parallel helpers. With the `parallel` feature these dispatch to rayon,
//! otherwise they run sequentially. Every helper preserves input order, so
//! results never depend on the thread schedule.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// `(0..n).map(f).collect()`, possibly in parallel.
pub fn map_range<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

/// Map over a slice, possibly in parallel.
pub fn map_slice<S, T, F>(items: &[S], f: F) -> Vec<T>
where
    S: Sync,
    T: Send,
    F: Fn(&S) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

/// Run `f(chunk_index, chunk)` over fixed-size mutable chunks.
pub fn for_each_chunk_mut<T, F>(data: &mut [T], chunk: usize, f: F)
where
    T: Send,
    F: Fn(usize, &mut [T]) + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        data.par_chunks_mut(chunk)
            .enumerate()
            .for_each(|(i, c)| f(i, c));
    }
    #[cfg(not(feature = "parallel"))]
    {
        data.chunks_mut(chunk).enumerate().for_each(|(i, c)| f(i, c));
    }
}

/// Run `job` on a pool limited to `threads` workers. Without the `parallel`
/// feature the job simply runs on the calling thread.
pub fn with_threads<R, F>(threads: usize, job: F) -> R
where
    R: Send,
    F: FnOnce() -> R + Send,
{
    #[cfg(feature = "parallel")]
    {
        match rayon::ThreadPoolBuilder::new()
            .num_threads(threads.max(1))
            .build()
        {
            Ok(pool) => pool.install(job),
            Err(e) => {
                log::warn!("could not build thread pool ({e}), using the global pool");
                job()
            }
        }
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = threads;
        job()
    }
}

/// Whether the crate was built with data parallelism.
pub const fn is_parallel() -> bool {
    cfg!(feature = "parallel")
}

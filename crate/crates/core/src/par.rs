//! Range-level helpers that run on rayon with the `parallel` feature and
//! fall back to plain iteration without it. Every helper returns the same
//! value in both modes, so thread count never leaks into results.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// `(lo..hi).map(f).collect()` preserving index order.
pub fn map_range<T, F>(lo: usize, hi: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (lo..hi).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (lo..hi).map(f).collect()
    }
}

/// The result for the least index in `lo..hi` where `f` returns `Some`.
pub fn find_map_first<T, F>(lo: usize, hi: usize, f: F) -> Option<T>
where
    T: Send,
    F: Fn(usize) -> Option<T> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (lo..hi).into_par_iter().find_map_first(f)
    }
    #[cfg(not(feature = "parallel"))]
    {
        (lo..hi).find_map(f)
    }
}

pub fn all_range<F>(lo: usize, hi: usize, f: F) -> bool
where
    F: Fn(usize) -> bool + Sync + Send,
{
    find_map_first(lo, hi, |i| (!f(i)).then_some(())).is_none()
}

/// Maps every item of a slice, preserving order.
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

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_match_is_least_index() {
        let hit = find_map_first(0, 10_000, |i| (i % 97 == 96).then_some(i));
        assert_eq!(hit, Some(96));
        assert!(all_range(0, 100, |i| i < 100));
        assert!(!all_range(0, 100, |i| i != 50));
        assert_eq!(map_range(3, 6, |i| i * 2), vec![6, 8, 10]);
    }
}

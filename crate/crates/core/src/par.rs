//! Data-parallel helpers. With the `parallel` feature (default) work is
//! spread over rayon's pool; without it, or with [`Exec::Sequential`], the
//! same closures run in order on the calling thread.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    Parallel,
}

impl Default for Exec {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }
}

impl Exec {
    /// `(0..n).map(f)`, collected in index order.
    pub fn map_range<T, F>(self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => {
                use rayon::prelude::*;
                (0..n).into_par_iter().map(f).collect()
            }
            _ => (0..n).map(f).collect(),
        }
    }

    /// `items.iter().map(f)`, collected in order.
    pub fn map_slice<I, T, F>(self, items: &[I], f: F) -> Vec<T>
    where
        I: Sync,
        T: Send,
        F: Fn(&I) -> T + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => {
                use rayon::prelude::*;
                items.par_iter().map(f).collect()
            }
            _ => items.iter().map(f).collect(),
        }
    }
}

/// Mixed-radix decoding: digit `k` of `index` for the given radices, most
/// significant first.
pub fn decode(mut index: usize, radices: &[usize]) -> Vec<usize> {
    let mut digits = vec![0; radices.len()];
    for (k, r) in radices.iter().enumerate().rev() {
        digits[k] = index % r;
        index /= r;
    }
    digits
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_agree() {
        let a = Exec::Sequential.map_range(100, |i| i * i);
        let b = Exec::Parallel.map_range(100, |i| i * i);
        assert_eq!(a, b);
    }

    #[test]
    fn decode_is_row_major() {
        assert_eq!(decode(5, &[2, 3]), vec![1, 2]);
        assert_eq!(decode(0, &[]), Vec::<usize>::new());
    }
}

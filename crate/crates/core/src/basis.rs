//! Index bookkeeping for dense alternating forms.
//!
//! A degree-`p` form on `R^dim` is stored as a vector of `C(dim, p)`
//! coefficients, one per strictly increasing index tuple, in lexicographic
//! order. This module owns the tuple tables and the rank function that maps a
//! sorted tuple back to its slot.

use std::sync::OnceLock;

/// Largest ambient dimension for which tables are built.
pub const MAX_DIM: usize = 16;

const fn binomial_table() -> [[usize; MAX_DIM + 1]; MAX_DIM + 1] {
    let mut t = [[0usize; MAX_DIM + 1]; MAX_DIM + 1];
    let mut n = 0;
    while n <= MAX_DIM {
        t[n][0] = 1;
        let mut k = 1;
        while k <= n {
            t[n][k] = t[n - 1][k - 1] + if k < n { t[n - 1][k] } else { 0 };
            k += 1;
        }
        n += 1;
    }
    t
}

static BINOM: [[usize; MAX_DIM + 1]; MAX_DIM + 1] = binomial_table();

/// `C(n, k)`, zero when `k > n`.
#[inline]
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        0
    } else {
        BINOM[n][k]
    }
}

/// Sorted index tuples of one degree in one dimension.
#[derive(Debug)]
pub struct FormBasis {
    dim: usize,
    degree: usize,
    tuples: Vec<u8>,
}

impl FormBasis {
    fn build(dim: usize, degree: usize) -> Self {
        let count = binomial(dim, degree);
        let mut tuples = Vec::with_capacity(count * degree);
        let mut cur: Vec<usize> = (0..degree).collect();
        for _ in 0..count {
            tuples.extend(cur.iter().map(|&i| i as u8));
            // advance to the next tuple in lexicographic order
            let mut k = degree;
            while k > 0 {
                k -= 1;
                if cur[k] < dim - degree + k {
                    cur[k] += 1;
                    for m in k + 1..degree {
                        cur[m] = cur[m - 1] + 1;
                    }
                    break;
                }
            }
        }
        Self { dim, degree, tuples }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        binomial(self.dim, self.degree)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// The `idx`-th sorted tuple.
    #[inline]
    pub fn tuple(&self, idx: usize) -> &[u8] {
        &self.tuples[idx * self.degree..(idx + 1) * self.degree]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[u8]> + '_ {
        (0..self.len()).map(move |i| self.tuple(i))
    }

    /// Lexicographic rank of a strictly increasing tuple.
    #[inline]
    pub fn rank<T: Copy + Into<usize>>(&self, sorted: &[T]) -> usize {
        debug_assert_eq!(sorted.len(), self.degree);
        let p = self.degree;
        let mut acc = 0;
        for (k, &i) in sorted.iter().enumerate() {
            acc += binomial(self.dim - 1 - i.into(), p - k);
        }
        binomial(self.dim, p) - 1 - acc
    }
}

static TABLES: OnceLock<Vec<Vec<OnceLock<FormBasis>>>> = OnceLock::new();

/// Shared tuple table for `(dim, degree)`.
pub fn basis(dim: usize, degree: usize) -> &'static FormBasis {
    assert!(dim <= MAX_DIM, "dimension {dim} exceeds MAX_DIM");
    assert!(degree <= dim, "degree {degree} exceeds dimension {dim}");
    let tables = TABLES.get_or_init(|| {
        (0..=MAX_DIM)
            .map(|d| (0..=d).map(|_| OnceLock::new()).collect())
            .collect()
    });
    tables[dim][degree].get_or_init(|| FormBasis::build(dim, degree))
}

/// Sorts `idx` in place and returns the permutation sign, or `None` when an
/// index repeats.
#[inline]
pub fn sort_with_sign(idx: &mut [usize]) -> Option<f64> {
    let mut sign = 1.0;
    for i in 1..idx.len() {
        let mut j = i;
        while j > 0 && idx[j - 1] > idx[j] {
            idx.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
        if j > 0 && idx[j - 1] == idx[j] {
            return None;
        }
    }
    Some(sign)
}

/// Sign of the permutation that sorts the concatenation of two sorted,
/// disjoint tuples, or `None` if they share an index.
#[inline]
pub fn merge_sign(a: &[u8], b: &[u8]) -> Option<f64> {
    let mut inversions = 0usize;
    let mut j = 0;
    for &x in a {
        while j < b.len() && b[j] < x {
            j += 1;
        }
        if j < b.len() && b[j] == x {
            return None;
        }
        inversions += j;
    }
    Some(if inversions.is_multiple_of(2) { 1.0 } else { -1.0 })
}

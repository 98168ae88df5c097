//! Exact integer linear algebra: rank and kernel of integer matrices by
//! fraction-free (Bareiss) elimination.

use num_bigint::BigInt;

use crate::error::{invalid, Result};
use crate::scalar::{self, with_fallback, ExactInt};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix<T> {
    rows: usize,
    cols: usize,
    entries: Vec<T>,
}

impl<T: ExactInt> IntMatrix<T> {
    pub fn new(rows: usize, cols: usize, entries: Vec<T>) -> Result<Self> {
        if entries.len() != rows * cols {
            return invalid(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                entries.len()
            ));
        }
        Ok(IntMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            entries: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = T::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        IntMatrix {
            rows,
            cols,
            entries,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn map<U: ExactInt>(&self, f: impl Fn(&T) -> U) -> IntMatrix<U> {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    /// `M v`
    pub fn apply(&self, v: &[T]) -> Result<Vec<T>> {
        if v.len() != self.cols {
            return invalid("vector length does not match column count");
        }
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .try_fold(T::zero(), |acc, (a, b)| {
                        scalar::add(&acc, &scalar::mul(a, b)?)
                    })
            })
            .collect()
    }
}

/// Result of fraction-free elimination: row-permuted working copy, pivot columns.
struct Eliminated<T> {
    work: Vec<Vec<T>>,
    pivots: Vec<usize>,
}

// a[i][j] <- (p a[i][j] - a[i][c] a[r][j]) / prev, exact by Sylvester's identity
fn bareiss_update<T: ExactInt>(
    work: &mut [Vec<T>],
    i: usize,
    r: usize,
    c: usize,
    prev: &T,
) -> Result<()> {
    let p = work[r][c].clone();
    let f = work[i][c].clone();
    for j in 0..work[i].len() {
        if j == c {
            continue;
        }
        let lhs = scalar::mul(&p, &work[i][j])?;
        let rhs = scalar::mul(&f, &work[r][j])?;
        let num = scalar::sub(&lhs, &rhs)?;
        let (q, rem) = num.div_rem(prev);
        debug_assert!(rem.is_zero(), "fraction-free step must divide exactly");
        work[i][j] = q;
    }
    work[i][c] = T::zero();
    Ok(())
}

fn eliminate<T: ExactInt>(m: &IntMatrix<T>, reduce_above: bool) -> Result<Eliminated<T>> {
    let mut work: Vec<Vec<T>> = (0..m.rows).map(|i| m.row(i).to_vec()).collect();
    let mut prev = T::one();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..m.cols {
        if r == m.rows {
            break;
        }
        let Some(p) = (r..m.rows).find(|&i| !work[i][c].is_zero()) else {
            continue;
        };
        work.swap(r, p);
        for i in 0..m.rows {
            if i == r || (i < r && !reduce_above) {
                continue;
            }
            bareiss_update(&mut work, i, r, c, &prev)?;
        }
        prev = work[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    Ok(Eliminated { work, pivots })
}

/// Rank over `Q`.
pub fn rank<T: ExactInt>(m: &IntMatrix<T>) -> Result<usize> {
    Ok(eliminate(m, false)?.pivots.len())
}

/// `cols - rank`
pub fn kernel_rank<T: ExactInt>(m: &IntMatrix<T>) -> Result<usize> {
    Ok(m.cols - rank(m)?)
}

/// A basis of the rational kernel made of primitive integer vectors, one per
/// non-pivot column.
pub fn kernel_basis<T: ExactInt>(m: &IntMatrix<T>) -> Result<Vec<Vec<T>>> {
    let Eliminated { work, pivots } = eliminate(m, true)?;
    // after Gauss-Jordan every pivot entry equals the last pivot
    let d = match pivots.last() {
        Some(&c) => work[pivots.len() - 1][c].clone(),
        None => T::one(),
    };
    let mut basis = Vec::new();
    for free in (0..m.cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![T::zero(); m.cols];
        v[free] = d.clone();
        for (i, &c) in pivots.iter().enumerate() {
            debug_assert_eq!(work[i][c], d);
            v[c] = -work[i][free].clone();
        }
        let g = v.iter().fold(T::zero(), |acc, x| acc.gcd(x));
        let sign = if v[free].is_negative() {
            -T::one()
        } else {
            T::one()
        };
        let g = g * sign;
        basis.push(v.into_iter().map(|x| x / g.clone()).collect());
    }
    Ok(basis)
}

/// Rank in `i64`, rerun over `BigInt` if an intermediate overflows.
pub fn rank_exact(m: &IntMatrix<i64>) -> usize {
    with_fallback(|| rank(m), || rank(&m.map(|&x| BigInt::from(x))))
        .expect("BigInt elimination cannot overflow")
}

pub fn kernel_rank_exact(m: &IntMatrix<i64>) -> usize {
    m.cols - rank_exact(m)
}

/// Kernel basis in `i64`, rerun over `BigInt` on overflow.
pub fn kernel_basis_exact(m: &IntMatrix<i64>) -> Vec<Vec<BigInt>> {
    with_fallback(
        || {
            kernel_basis(m).map(|b| {
                b.into_iter()
                    .map(|v| v.into_iter().map(BigInt::from).collect())
                    .collect()
            })
        },
        || kernel_basis(&m.map(|&x| BigInt::from(x))),
    )
    .expect("BigInt elimination cannot overflow")
}

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{CoefficientMatrix, JointError};

/// Matrices whose entries all have modulus below this are degenerate.
pub const UNDERFLOW_GUARD: f64 = 1e-300;

/// Number of singular values above `tol · σ_max`.
pub fn numerical_rank(m: &CoefficientMatrix, tol: f64) -> Result<usize, JointError> {
    if !(tol > 0.0) {
        return Err(JointError::InvalidSpec(format!("rank tolerance {tol} must be positive")));
    }
    if m.entries.iter().all(|z| z.norm() < UNDERFLOW_GUARD) {
        return Err(JointError::DegenerateMatrix {
            rows: m.rows,
            cols: m.cols,
        });
    }
    let a = DMatrix::from_row_slice(m.rows, m.cols, &m.entries);
    let sv = a.singular_values();
    let cutoff = tol * sv.max();
    Ok(sv.iter().filter(|&&s| s > cutoff).count())
}

/// Gaussian integer with overflow-checked arithmetic.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct GaussInt {
    re: i128,
    im: i128,
}

impl GaussInt {
    const ZERO: Self = Self { re: 0, im: 0 };

    fn from_complex(z: Complex64) -> Option<Self> {
        const LIMIT: f64 = 9_007_199_254_740_992.0;
        let ok = |x: f64| x.fract() == 0.0 && x.abs() <= LIMIT;
        (ok(z.re) && ok(z.im)).then_some(Self {
            re: z.re as i128,
            im: z.im as i128,
        })
    }

    fn mul(self, o: Self) -> Option<Self> {
        Some(Self {
            re: self.re.checked_mul(o.re)?.checked_sub(self.im.checked_mul(o.im)?)?,
            im: self.re.checked_mul(o.im)?.checked_add(self.im.checked_mul(o.re)?)?,
        })
    }

    fn sub(self, o: Self) -> Option<Self> {
        Some(Self {
            re: self.re.checked_sub(o.re)?,
            im: self.im.checked_sub(o.im)?,
        })
    }

    /// Exact quotient; `None` if `o` does not divide `self`.
    fn div_exact(self, o: Self) -> Option<Self> {
        let conj = Self { re: o.re, im: -o.im };
        let num = self.mul(conj)?;
        let den = o.re.checked_mul(o.re)?.checked_add(o.im.checked_mul(o.im)?)?;
        if den == 0 || num.re % den != 0 || num.im % den != 0 {
            return None;
        }
        Some(Self {
            re: num.re / den,
            im: num.im / den,
        })
    }
}

/// Exact rank by fraction-free (Bareiss) elimination when every entry is a
/// Gaussian integer; `None` otherwise or on overflow.
pub fn exact_rank(m: &CoefficientMatrix) -> Option<usize> {
    let mut a: Vec<Vec<GaussInt>> = (0..m.rows)
        .map(|r| (0..m.cols).map(|c| GaussInt::from_complex(m.get(r, c))).collect())
        .collect::<Option<_>>()?;
    let (rows, cols) = (m.rows, m.cols);
    let mut rank = 0;
    let mut prev = GaussInt { re: 1, im: 0 };
    for col in 0..cols {
        let Some(pivot) = (rank..rows).find(|&r| a[r][col] != GaussInt::ZERO) else {
            continue;
        };
        a.swap(rank, pivot);
        let p = a[rank][col];
        for r in rank + 1..rows {
            let f = a[r][col];
            let (top, bottom) = a.split_at_mut(r);
            let pivot_row = &top[rank];
            for (x, &y) in bottom[0][col..cols].iter_mut().zip(&pivot_row[col..cols]) {
                *x = x.mul(p)?.sub(y.mul(f)?)?.div_exact(prev)?;
            }
        }
        prev = p;
        rank += 1;
        if rank == rows {
            break;
        }
    }
    Some(rank)
}

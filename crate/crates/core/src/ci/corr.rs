//! Pearson and partial correlations.

use crate::sem::DataMatrix;

/// Clamp applied to correlations before `atanh`/`ln` transforms.
pub const CORR_CLAMP: f64 = 1e-12;

const PIVOT_TOL: f64 = 1e-10;

/// Symmetric correlation matrix over a set of data columns.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationMatrix {
    dim: usize,
    values: Vec<f64>,
    /// Columns with zero sample variance; their correlations are set to 0.
    degenerate: Vec<bool>,
}

impl CorrelationMatrix {
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.dim + j]
    }

    pub fn is_degenerate(&self, i: usize) -> bool {
        self.degenerate[i]
    }

    pub fn any_degenerate(&self) -> bool {
        self.degenerate.iter().any(|&d| d)
    }
}

/// Pearson correlations between the columns `cols` of `data`. Row and
/// column `i` of the result belong to `cols[i]`.
pub fn correlation_matrix(data: &DataMatrix, cols: &[usize]) -> CorrelationMatrix {
    let n = data.n_samples() as f64;
    let dim = cols.len();
    let mut centered: Vec<Vec<f64>> = Vec::with_capacity(dim);
    let mut norms = Vec::with_capacity(dim);
    for &c in cols {
        let col = data.column(c);
        let mean = col.iter().sum::<f64>() / n;
        let v: Vec<f64> = col.iter().map(|x| x - mean).collect();
        norms.push(v.iter().map(|x| x * x).sum::<f64>().sqrt());
        centered.push(v);
    }
    let degenerate: Vec<bool> = norms.iter().map(|&s| s <= f64::EPSILON * n.sqrt()).collect();
    if degenerate.iter().any(|&d| d) {
        log::warn!("zero-variance column in correlation input; treating its correlations as 0");
    }
    let mut values = vec![0.0; dim * dim];
    for i in 0..dim {
        values[i * dim + i] = 1.0;
        for j in i + 1..dim {
            let r = if degenerate[i] || degenerate[j] {
                0.0
            } else {
                let dot: f64 = centered[i].iter().zip(&centered[j]).map(|(a, b)| a * b).sum();
                (dot / (norms[i] * norms[j])).clamp(-1.0, 1.0)
            };
            values[i * dim + j] = r;
            values[j * dim + i] = r;
        }
    }
    CorrelationMatrix { dim, values, degenerate }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PartialCorrelation {
    pub r: f64,
    /// The conditioning block was singular, or `x`/`y` is a linear
    /// function of `z`; `r` is reported as 0.
    pub singular: bool,
}

/// Partial correlation of `x` and `y` given `z`, from the Schur complement
/// of the conditioning block: with `R_zz = L L^T`, `a = L^-1 R_zx` and
/// `b = L^-1 R_zy`, the residual covariances are `1 - a.a`, `1 - b.b` and
/// `R_xy - a.b`. This equals `-P_xy / sqrt(P_xx P_yy)` for `P` the inverse
/// of the submatrix over `{x, y} u z` whenever that inverse exists.
pub fn partial_correlation(c: &CorrelationMatrix, x: usize, y: usize, z: &[usize]) -> PartialCorrelation {
    let k = z.len();
    if k == 0 {
        return PartialCorrelation { r: clamp_corr(c.get(x, y)), singular: false };
    }
    // lower Cholesky factor of R_zz, row-major k x k
    let mut l = vec![0.0; k * k];
    for i in 0..k {
        for j in 0..=i {
            let mut s = c.get(z[i], z[j]);
            for m in 0..j {
                s -= l[i * k + m] * l[j * k + m];
            }
            if i == j {
                if s <= PIVOT_TOL {
                    log::debug!("singular conditioning block for ({x}, {y} | {z:?})");
                    return PartialCorrelation { r: 0.0, singular: true };
                }
                l[i * k + i] = s.sqrt();
            } else {
                l[i * k + j] = s / l[j * k + j];
            }
        }
    }
    let solve = |v: usize| {
        let mut a = vec![0.0; k];
        for i in 0..k {
            let mut s = c.get(z[i], v);
            for m in 0..i {
                s -= l[i * k + m] * a[m];
            }
            a[i] = s / l[i * k + i];
        }
        a
    };
    let a = solve(x);
    let b = solve(y);
    let dot = |u: &[f64], v: &[f64]| u.iter().zip(v).map(|(p, q)| p * q).sum::<f64>();
    let sxx = 1.0 - dot(&a, &a);
    let syy = 1.0 - dot(&b, &b);
    let sxy = c.get(x, y) - dot(&a, &b);
    if sxx <= PIVOT_TOL || syy <= PIVOT_TOL {
        log::debug!("({x} or {y}) is determined by {z:?}");
        return PartialCorrelation { r: 0.0, singular: true };
    }
    PartialCorrelation { r: clamp_corr(sxy / (sxx * syy).sqrt()), singular: false }
}

pub fn clamp_corr(r: f64) -> f64 {
    r.clamp(-1.0 + CORR_CLAMP, 1.0 - CORR_CLAMP)
}

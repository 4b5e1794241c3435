#![allow(dead_code)]

use bnbench_core::graph::topological_order;
use bnbench_core::Dag;
use nalgebra::DMatrix;

/// Every labelled DAG on `n` nodes: each unordered pair is absent, `a -> b`
/// or `b -> a`, keeping the acyclic assignments.
pub fn all_dags(n: usize) -> Vec<Dag> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    let total = 3usize.pow(pairs.len() as u32);
    let mut out = Vec::new();
    for code in 0..total {
        let mut c = code;
        let mut edges = Vec::new();
        for &(a, b) in &pairs {
            match c % 3 {
                1 => edges.push((a, b)),
                2 => edges.push((b, a)),
                _ => {}
            }
            c /= 3;
        }
        if topological_order(n, &edges).is_ok() {
            out.push(Dag::new(n, edges).unwrap());
        }
    }
    out
}

/// Implied covariance of a linear-Gaussian SEM on `g` with unit noise and
/// edge weights `0.5 + 0.37 k` (k = edge index), generic enough that no
/// path cancellation occurs.
pub fn implied_covariance(g: &Dag) -> DMatrix<f64> {
    let n = g.n_nodes();
    let mut b = DMatrix::<f64>::zeros(n, n);
    for (k, (u, v)) in g.edges().enumerate() {
        b[(v, u)] = 0.5 + 0.37 * k as f64;
    }
    let a = (DMatrix::<f64>::identity(n, n) - b).try_inverse().expect("I - B is unit triangular up to order");
    &a * a.transpose()
}

/// Partial correlation of `x` and `y` given `z` from the inverse of the
/// covariance submatrix.
pub fn partial_corr_from_cov(cov: &DMatrix<f64>, x: usize, y: usize, z: &[usize]) -> f64 {
    let idx: Vec<usize> = [x, y].into_iter().chain(z.iter().copied()).collect();
    let sub = DMatrix::from_fn(idx.len(), idx.len(), |i, j| cov[(idx[i], idx[j])]);
    let p = sub.try_inverse().expect("covariance submatrix is positive definite");
    -p[(0, 1)] / (p[(0, 0)] * p[(1, 1)]).sqrt()
}

/// Subsets of `items` as bit masks, smallest first.
pub fn subsets(items: &[usize]) -> Vec<Vec<usize>> {
    (0u32..1 << items.len()).map(|m| items.iter().enumerate().filter(|(i, _)| m >> i & 1 == 1).map(|(_, &v)| v).collect()).collect()
}

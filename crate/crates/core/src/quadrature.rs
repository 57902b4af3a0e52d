//! Quadrature and finite-difference weights on uniform nodes.

use crate::error::{Error, Result};

/// Composite Simpson weights for `n` nodes spaced by `h`.
pub fn simpson_weights(n: usize, h: f64) -> Result<Vec<f64>> {
    if n < 3 || n % 2 == 0 {
        return Err(Error::QuadratureNodes(n));
    }
    Ok((0..n)
        .map(|k| {
            let w = if k == 0 || k == n - 1 {
                1.0
            } else if k % 2 == 1 {
                4.0
            } else {
                2.0
            };
            w * h / 3.0
        })
        .collect())
}

/// Weights `w[k][j]` with `int_0^{t_k} f ~ sum_j w[k][j] f(t_j)`, fourth order
/// at every node: Simpson at even `k`, Simpson plus a closing 3/8 panel at odd
/// `k >= 3`, and a three-point rule on the first interval.
pub fn cumulative_weights(n: usize, h: f64) -> Result<Vec<Vec<f64>>> {
    if n < 3 {
        return Err(Error::QuadratureNodes(n));
    }
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let mut w = vec![0.0; n];
        if k == 1 {
            w[0] = 5.0 * h / 12.0;
            w[1] = 8.0 * h / 12.0;
            w[2] = -h / 12.0;
        } else if k % 2 == 0 {
            if k > 0 {
                for (j, s) in simpson_weights(k + 1, h)?.into_iter().enumerate() {
                    w[j] += s;
                }
            }
        } else {
            let m = k - 3;
            if m > 0 {
                for (j, s) in simpson_weights(m + 1, h)?.into_iter().enumerate() {
                    w[j] += s;
                }
            }
            for (j, c) in [1.0, 3.0, 3.0, 1.0].into_iter().enumerate() {
                w[m + j] += 3.0 * h / 8.0 * c;
            }
        }
        out.push(w);
    }
    Ok(out)
}

/// Fornberg weights for the first derivative at `x0` from the given nodes.
pub fn derivative_weights(x0: f64, nodes: &[f64]) -> Vec<f64> {
    let n = nodes.len();
    // c[j][m]: weight of node j for the m-th derivative, m <= 1
    let mut c = vec![[0.0f64; 2]; n];
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = nodes[0] - x0;
    for i in 1..n {
        let mn = i.min(1);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = nodes[i] - x0;
        for j in 0..i {
            let c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.into_iter().map(|w| w[1]).collect()
}

/// Time derivative at every node of uniformly sampled data, from local
/// polynomial fits on `width`-point stencils (one-sided near the ends).
pub fn differentiate_samples(n: usize, h: f64, width: usize) -> Vec<(usize, Vec<f64>)> {
    let w = width.min(n);
    (0..n)
        .map(|k| {
            let start = k.saturating_sub(w / 2).min(n - w);
            let nodes: Vec<f64> = (start..start + w).map(|j| j as f64 * h).collect();
            (start, derivative_weights(k as f64 * h, &nodes))
        })
        .collect()
}

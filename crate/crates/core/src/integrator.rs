//! Time stepping for systems written as `u' = L u + N(u)` where `L` is diagonal
//! in Fourier space with symbol `-+ i omega(xi)` per half-wave branch.
//!
//! Two schemes share the same right-hand side: a Lawson (integrating factor)
//! fourth-order Runge-Kutta method, and Picard iteration of the Duhamel
//! formula in the interaction picture with cumulative fourth-order quadrature.

use ndarray::{Array2, Zip};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::Grid2D;
use crate::propagators::Dispersion;
use crate::quadrature::cumulative_weights;
use crate::spectral::Sign;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Branch {
    pub sign: Sign,
    pub dispersion: Dispersion,
}

/// Spectral arrays of every branch plus the constant zero-mode drifts.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeStack {
    pub fields: Vec<Array2<Complex64>>,
    pub drift: Vec<Complex64>,
}

impl ModeStack {
    pub fn zeros(grid: Grid2D, count: usize, drift: Vec<Complex64>) -> Self {
        Self {
            fields: vec![Array2::zeros(grid.shape()); count],
            drift,
        }
    }

    pub fn zeros_like(&self) -> Self {
        Self {
            fields: self.fields.iter().map(|f| Array2::zeros(f.dim())).collect(),
            drift: self.drift.clone(),
        }
    }

    /// `self += a x` on the fields; drifts are left alone.
    pub fn axpy(&mut self, a: f64, x: &ModeStack) {
        for (f, g) in self.fields.iter_mut().zip(&x.fields) {
            Zip::from(f).and(g).for_each(|p, q| *p += a * q);
        }
    }

    pub fn norm(&self) -> f64 {
        self.fields
            .iter()
            .flat_map(|f| f.iter())
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn distance(&self, other: &ModeStack) -> f64 {
        self.fields
            .iter()
            .zip(&other.fields)
            .flat_map(|(f, g)| f.iter().zip(g.iter()))
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.fields
            .iter()
            .all(|f| f.iter().all(|z| z.re.is_finite() && z.im.is_finite()))
    }
}

pub trait HalfWaveSystem: Sync {
    fn grid(&self) -> Grid2D;

    fn branches(&self) -> &[Branch];

    /// Nonlinear part `N(u)`; the returned drifts are ignored.
    fn source(&self, u: &ModeStack) -> ModeStack;
}

/// Diagonal propagator `e^{hL}`, one phase table per branch.
pub struct FreeFlow {
    phases: Vec<Array2<Complex64>>,
}

impl FreeFlow {
    pub fn new(grid: Grid2D, branches: &[Branch], h: f64) -> Self {
        let phases = branches
            .iter()
            .map(|b| {
                let s = b.sign.value();
                grid.symbol(|x1, x2| b.dispersion.omega(x1, x2))
                    .mapv(|w| Complex64::from_polar(1.0, -s * w * h))
            })
            .collect();
        Self { phases }
    }

    pub fn apply(&self, u: &mut ModeStack) {
        for (f, p) in u.fields.iter_mut().zip(&self.phases) {
            Zip::from(f).and(p).for_each(|z, e| *z *= e);
        }
    }

    pub fn applied(&self, u: &ModeStack) -> ModeStack {
        let mut v = u.clone();
        self.apply(&mut v);
        v
    }
}

/// Lawson fourth-order Runge-Kutta; every stage only needs the half-step flow.
pub struct LawsonRk4 {
    h: f64,
    half: FreeFlow,
}

impl LawsonRk4 {
    pub fn new(grid: Grid2D, branches: &[Branch], h: f64) -> Self {
        Self {
            h,
            half: FreeFlow::new(grid, branches, 0.5 * h),
        }
    }

    pub fn step<S: HalfWaveSystem + ?Sized>(&self, sys: &S, u: &ModeStack) -> ModeStack {
        let h = self.h;
        let k1 = sys.source(u);
        let mut u2 = u.clone();
        u2.axpy(0.5 * h, &k1);
        self.half.apply(&mut u2);
        let k2 = sys.source(&u2);
        let eu = self.half.applied(u);
        let mut u3 = eu.clone();
        u3.axpy(0.5 * h, &k2);
        let k3 = sys.source(&u3);
        let mut u4 = eu.clone();
        u4.axpy(h, &k3);
        self.half.apply(&mut u4);
        let k4 = sys.source(&u4);
        // E(h)u + h/6 [E(h)k1 + 2E(h/2)(k2 + k3) + k4]
        let mut acc = u.clone();
        acc.axpy(h / 6.0, &k1);
        self.half.apply(&mut acc);
        acc.axpy(h / 3.0, &k2);
        acc.axpy(h / 3.0, &k3);
        self.half.apply(&mut acc);
        acc.axpy(h / 6.0, &k4);
        acc
    }
}

/// One application of the Duhamel map on `nodes` equispaced times `k h`:
/// `x_k -> E(t_k) [u0 + int_0^{t_k} E(-s) N(x(s)) ds]`.
pub fn picard_map<S: HalfWaveSystem + ?Sized>(
    sys: &S,
    u0: &ModeStack,
    h: f64,
    traj: &[ModeStack],
) -> Result<Vec<ModeStack>> {
    let n = traj.len();
    let weights = cumulative_weights(n, h)?;
    let grid = sys.grid();
    let branches = sys.branches();
    let integrands: Vec<ModeStack> = traj
        .iter()
        .enumerate()
        .map(|(j, x)| FreeFlow::new(grid, branches, -(j as f64) * h).applied(&sys.source(x)))
        .collect();
    let mut out = Vec::with_capacity(n);
    for (k, w) in weights.iter().enumerate() {
        let mut acc = u0.clone();
        for (j, g) in integrands.iter().enumerate() {
            if w[j] != 0.0 {
                acc.axpy(w[j], g);
            }
        }
        FreeFlow::new(grid, branches, k as f64 * h).apply(&mut acc);
        out.push(acc);
    }
    Ok(out)
}

/// Free-flow trajectory, the zeroth Picard iterate.
pub fn free_trajectory<S: HalfWaveSystem + ?Sized>(
    sys: &S,
    u0: &ModeStack,
    h: f64,
    nodes: usize,
) -> Vec<ModeStack> {
    (0..nodes)
        .map(|k| FreeFlow::new(sys.grid(), sys.branches(), k as f64 * h).applied(u0))
        .collect()
}

/// Largest node-wise distance between two trajectories, relative to the
/// largest node norm of `b`.
pub fn trajectory_gap(a: &[ModeStack], b: &[ModeStack]) -> f64 {
    let d = a
        .iter()
        .zip(b)
        .map(|(x, y)| x.distance(y))
        .fold(0.0, f64::max);
    let n = b.iter().map(ModeStack::norm).fold(0.0, f64::max);
    if n == 0.0 {
        d
    } else {
        d / n
    }
}

/// Iterates and successive relative differences of a Picard run on one window.
#[derive(Debug, Clone)]
pub struct PicardRun {
    pub trajectory: Vec<ModeStack>,
    /// `diffs[n-1] = |x_n - x_{n-1}| / |x_n|` for `n = 1..`
    pub diffs: Vec<f64>,
}

impl PicardRun {
    /// `d_n / d_{n-1}` for `n = 2..`
    pub fn ratios(&self) -> Vec<f64> {
        self.diffs.windows(2).map(|w| w[1] / w[0]).collect()
    }
}

pub fn picard_solve<S: HalfWaveSystem + ?Sized>(
    sys: &S,
    u0: &ModeStack,
    h: f64,
    nodes: usize,
    iterations: usize,
) -> Result<PicardRun> {
    let mut x = free_trajectory(sys, u0, h, nodes);
    let mut diffs = Vec::with_capacity(iterations);
    for it in 0..iterations {
        let next = picard_map(sys, u0, h, &x)?;
        if let Some(bad) = next.iter().position(|u| !u.is_finite()) {
            return Err(Error::Divergence {
                time: bad as f64 * h,
                step: it,
            });
        }
        diffs.push(trajectory_gap(&next, &x));
        x = next;
    }
    Ok(PicardRun {
        trajectory: x,
        diffs,
    })
}

/// Relative gap between the Duhamel map on `h` and on `2h` (every other node),
/// compared at the shared nodes: an estimate of the quadrature error.
pub fn quadrature_error_estimate<S: HalfWaveSystem + ?Sized>(
    sys: &S,
    u0: &ModeStack,
    h: f64,
    traj: &[ModeStack],
) -> Result<f64> {
    let fine = picard_map(sys, u0, h, traj)?;
    let coarse_in: Vec<ModeStack> = traj.iter().step_by(2).cloned().collect();
    let coarse = picard_map(sys, u0, 2.0 * h, &coarse_in)?;
    let fine_even: Vec<ModeStack> = fine.into_iter().step_by(2).collect();
    Ok(trajectory_gap(&coarse, &fine_even))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Scheme {
    ExponentialRk4,
    /// Picard on consecutive windows of `window` steps (even).
    Picard {
        window: usize,
        iterations: usize,
    },
}

/// Integrates from `u0` over `steps` steps of size `h`, keeping every
/// `sample_every`-th state (and the first).
pub fn evolve_stack<S: HalfWaveSystem + ?Sized>(
    sys: &S,
    u0: &ModeStack,
    h: f64,
    steps: usize,
    scheme: Scheme,
    sample_every: usize,
) -> Result<Vec<(usize, ModeStack)>> {
    let every = sample_every.max(1);
    let mut out = vec![(0, u0.clone())];
    match scheme {
        Scheme::ExponentialRk4 => {
            let rk = LawsonRk4::new(sys.grid(), sys.branches(), h);
            let mut u = u0.clone();
            for step in 1..=steps {
                u = rk.step(sys, &u);
                if !u.is_finite() {
                    return Err(Error::Divergence {
                        time: step as f64 * h,
                        step,
                    });
                }
                if step % every == 0 || step == steps {
                    out.push((step, u.clone()));
                }
            }
        }
        Scheme::Picard { window, iterations } => {
            if window < 2 || window % 2 != 0 || steps % window != 0 {
                return Err(Error::Precondition(format!(
                    "Picard window {window} must be even and divide the step count {steps}"
                )));
            }
            let mut u = u0.clone();
            for w in 0..steps / window {
                let run =
                    picard_solve(sys, &u, h, window + 1, iterations).map_err(|e| match e {
                        Error::Divergence { time, .. } => Error::Divergence {
                            time: time + (w * window) as f64 * h,
                            step: w * window,
                        },
                        other => other,
                    })?;
                for (k, x) in run.trajectory.iter().enumerate().skip(1) {
                    let step = w * window + k;
                    if step % every == 0 || step == steps {
                        out.push((step, x.clone()));
                    }
                }
                u = run.trajectory.last().expect("window has nodes").clone();
            }
        }
    }
    Ok(out)
}

//! Smooth periodic initial data.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::field::{Representation, ScalarField};
use crate::grid::Grid2D;
use crate::spectral::dealias;

/// Gaussian bump periodized over the neighbouring boxes. The momentum is
/// snapped to the lattice so the phase stays periodic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bump {
    pub center: (f64, f64),
    pub width: f64,
    pub momentum: (f64, f64),
    pub amplitude: Complex64,
}

impl Bump {
    pub fn centered(grid: Grid2D, width: f64, amplitude: f64) -> Self {
        let c = 0.5 * grid.length();
        Self {
            center: (c, c),
            width,
            momentum: (0.0, 0.0),
            amplitude: amplitude.into(),
        }
    }

    pub fn with_momentum(self, k1: f64, k2: f64) -> Self {
        Self {
            momentum: (k1, k2),
            ..self
        }
    }

    pub fn sample(&self, grid: Grid2D) -> ScalarField {
        let l = grid.length();
        let (c1, c2) = self.center;
        let (p1, p2) = (
            lattice_momentum(grid, self.momentum.0),
            lattice_momentum(grid, self.momentum.1),
        );
        let w2 = 2.0 * self.width * self.width;
        let f = ScalarField::from_fn(grid, |x, y| {
            let mut env = 0.0;
            for a in -2..=2 {
                for b in -2..=2 {
                    let dx = x - c1 + a as f64 * l;
                    let dy = y - c2 + b as f64 * l;
                    env += (-(dx * dx + dy * dy) / w2).exp();
                }
            }
            self.amplitude * env * Complex64::from_polar(1.0, p1 * (x - c1) + p2 * (y - c2))
        });
        dealias(&f)
    }
}

/// Random Fourier series with Gaussian coefficients on `|k| <= kmax`,
/// damped like `e^{-|k|^2/kmax^2}`; real-valued when `real` is set.
pub fn random_band_limited(
    grid: Grid2D,
    kmax: i64,
    amplitude: f64,
    real: bool,
    seed: u64,
) -> ScalarField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut f = ScalarField::zeros(grid, Representation::Spectral);
    for k1 in -kmax..=kmax {
        for k2 in -kmax..=kmax {
            let r2 = (k1 * k1 + k2 * k2) as f64;
            if r2 > (kmax * kmax) as f64 {
                continue;
            }
            let damp = (-r2 / (kmax * kmax) as f64).exp();
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            f.values_mut()[grid.index_of(k1, k2)] = damp * Complex64::new(re, im);
        }
    }
    let mut p = f.into_physical();
    if real {
        p = p.map(|z| Complex64::new(z.re, 0.0));
    }
    let m = p.max_abs();
    let scale = if m > 0.0 { amplitude / m } else { 0.0 };
    dealias(&p.scaled(scale.into()))
}

/// Snaps a momentum to the nearest lattice frequency.
pub fn lattice_momentum(grid: Grid2D, p: f64) -> f64 {
    let f = grid.fundamental();
    (p / f).round() * f
}

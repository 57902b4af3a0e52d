//! Half-wave splitting of wave and Klein-Gordon fields, the free flow, and
//! Duhamel integrals for sources in divergence form.

use ndarray::Array2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{OneForm, Representation, ScalarField};
use crate::grid::Grid2D;
use crate::quadrature::{differentiate_samples, simpson_weights};
use crate::spectral::{bracket, riesz_symbol, Sign};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Stencil width for the time derivative of sampled sources.
const DIFF_STENCIL: usize = 7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Dispersion {
    /// `|xi|`
    Massless,
    /// `<xi>`
    Massive,
}

impl Dispersion {
    pub fn omega(self, x1: f64, x2: f64) -> f64 {
        match self {
            Dispersion::Massless => x1.hypot(x2),
            Dispersion::Massive => bracket(x1, x2),
        }
    }

    pub fn table(self, grid: Grid2D) -> Array2<f64> {
        grid.symbol(|x1, x2| self.omega(x1, x2))
    }
}

/// `phi = phi_+ + phi_-` with `phi_pm` evolving as `e^{-+ i t omega}`.
///
/// For the massless flow the zero mode of the velocity is kept in `drift` and
/// advanced linearly: each half carries `drift * t / 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct HalfWaveState {
    pub plus: ScalarField,
    pub minus: ScalarField,
    pub dispersion: Dispersion,
    pub drift: Complex64,
}

impl HalfWaveState {
    /// Splits `(phi, pi)` where `pi` is the velocity (or, in divergence form,
    /// `phi_t - F_0`).
    pub fn split(phi: &ScalarField, pi: &ScalarField, dispersion: Dispersion) -> Result<Self> {
        if phi.grid() != pi.grid() {
            return Err(Error::ShapeMismatch(
                "position and velocity on different grids".into(),
            ));
        }
        let grid = phi.grid();
        let (p, v) = (phi.to_spectral(), pi.to_spectral());
        let mut plus = p.clone();
        let mut minus = p.clone();
        let mut drift = Complex64::default();
        for ((i1, i2), z) in p.values().indexed_iter() {
            let (x1, x2) = grid.frequency(i1, i2);
            let w = dispersion.omega(x1, x2);
            let vel = v.values()[[i1, i2]];
            let (a, b) = if w == 0.0 {
                drift = vel;
                (0.5 * z, 0.5 * z)
            } else {
                let q = vel / (I * w);
                (0.5 * (z - q), 0.5 * (z + q))
            };
            plus.values_mut()[[i1, i2]] = a;
            minus.values_mut()[[i1, i2]] = b;
        }
        Ok(Self {
            plus,
            minus,
            dispersion,
            drift,
        })
    }

    pub fn grid(&self) -> Grid2D {
        self.plus.grid()
    }

    pub fn half(&self, s: Sign) -> &ScalarField {
        match s {
            Sign::Plus => &self.plus,
            Sign::Minus => &self.minus,
        }
    }

    /// `(phi, pi)` in spectral representation.
    pub fn recombine(&self) -> (ScalarField, ScalarField) {
        let grid = self.grid();
        let phi = &self.plus + &self.minus;
        let mut pi = &self.plus - &self.minus;
        for ((i1, i2), z) in pi.values_mut().indexed_iter_mut() {
            let (x1, x2) = grid.frequency(i1, i2);
            let w = self.dispersion.omega(x1, x2);
            *z = if w == 0.0 { self.drift } else { -I * w * *z };
        }
        (phi, pi)
    }

    pub fn evolve_free(&self, t: f64) -> Self {
        let grid = self.grid();
        let mut out = self.clone();
        for s in Sign::BOTH {
            let f = match s {
                Sign::Plus => &mut out.plus,
                Sign::Minus => &mut out.minus,
            };
            for ((i1, i2), z) in f.values_mut().indexed_iter_mut() {
                let (x1, x2) = grid.frequency(i1, i2);
                let w = self.dispersion.omega(x1, x2);
                if w == 0.0 {
                    *z += 0.5 * self.drift * t;
                } else {
                    *z *= Complex64::from_polar(1.0, -s.value() * w * t);
                }
            }
        }
        out
    }
}

/// Uniform samples `f(k dt)`, `k = 0..n`.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries<T> {
    pub dt: f64,
    pub samples: Vec<T>,
}

impl<T> TimeSeries<T> {
    pub fn new(dt: f64, samples: Vec<T>) -> Self {
        Self { dt, samples }
    }

    pub fn duration(&self) -> f64 {
        self.dt * (self.samples.len().saturating_sub(1)) as f64
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

fn series_grid(f: &TimeSeries<OneForm>) -> Result<Grid2D> {
    f.samples
        .first()
        .map(OneForm::grid)
        .ok_or(Error::MissingInitialSource)
}

/// `-1/2 int_0^t e^{-+ i (t-s)|nabla|} R^mu_pm F_mu(s) ds` at the last sample time.
pub fn duhamel_divergence(f: &TimeSeries<OneForm>, s: Sign) -> Result<ScalarField> {
    let n = f.len();
    let w = simpson_weights(n, f.dt)?;
    let grid = series_grid(f)?;
    let t = f.duration();
    let omega = Dispersion::Massless.table(grid);
    let riesz: [Array2<f64>; 3] =
        std::array::from_fn(|mu| grid.symbol(|x1, x2| riesz_symbol(s, mu, x1, x2)));
    let mut acc = Array2::<Complex64>::zeros(grid.shape());
    for (k, sample) in f.samples.iter().enumerate() {
        let spec = sample.to_spectral();
        let tau = t - k as f64 * f.dt;
        for ((i1, i2), a) in acc.indexed_iter_mut() {
            let v: Complex64 = (0..3)
                .map(|mu| riesz[mu][[i1, i2]] * spec.comps[mu].values()[[i1, i2]])
                .sum();
            let ph = Complex64::from_polar(1.0, -s.value() * omega[[i1, i2]] * tau);
            *a += w[k] * ph * v;
        }
    }
    acc.mapv_inplace(|z| -0.5 * z);
    ScalarField::from_values(grid, Representation::Spectral, acc)
}

/// Solves `box phi = d^mu F_mu` through the half-wave representation; returns
/// `(phi, phi_t)` at the last sample time, spectral.
pub fn divergence_form_solve(
    phi0: &ScalarField,
    phit0: &ScalarField,
    f: &TimeSeries<OneForm>,
) -> Result<(ScalarField, ScalarField)> {
    let first = f.samples.first().ok_or(Error::MissingInitialSource)?;
    let last = f.samples.last().expect("non-empty");
    let pi0 = phit0.to_spectral().try_sub(&first.comps[0].to_spectral())?;
    let hom = HalfWaveState::split(phi0, &pi0, Dispersion::Massless)?.evolve_free(f.duration());
    let state = HalfWaveState {
        plus: hom.plus.try_add(&duhamel_divergence(f, Sign::Plus)?)?,
        minus: hom.minus.try_add(&duhamel_divergence(f, Sign::Minus)?)?,
        ..hom
    };
    let (phi, pi) = state.recombine();
    let phit = pi.try_add(&last.comps[0].to_spectral())?;
    Ok((phi, phit))
}

/// Independent solver for `box phi = d^mu F_mu`: sine-kernel Duhamel with
/// `d_t F_0` formed by local polynomial differentiation of the samples.
pub fn reference_wave_solve(
    phi0: &ScalarField,
    phit0: &ScalarField,
    f: &TimeSeries<OneForm>,
) -> Result<(ScalarField, ScalarField)> {
    let n = f.len();
    let w = simpson_weights(n, f.dt)?;
    let grid = series_grid(f)?;
    let t = f.duration();
    let spec: Vec<OneForm> = f.samples.iter().map(OneForm::to_spectral).collect();
    let diff = differentiate_samples(n, f.dt, DIFF_STENCIL);
    let (p0, v0) = (phi0.to_spectral(), phit0.to_spectral());
    let mut phi = Array2::<Complex64>::zeros(grid.shape());
    let mut phit = Array2::<Complex64>::zeros(grid.shape());
    for (((i1, i2), out), outt) in phi.indexed_iter_mut().zip(phit.iter_mut()) {
        let (x1, x2) = grid.frequency(i1, i2);
        let om = x1.hypot(x2);
        // sin(om tau)/om and cos(om tau), continuous at om = 0
        let kern = |tau: f64| -> (f64, f64) {
            if om == 0.0 {
                (tau, 1.0)
            } else {
                ((om * tau).sin() / om, (om * tau).cos())
            }
        };
        let (sk, ck) = kern(t);
        let mut a = ck * p0.values()[[i1, i2]] + sk * v0.values()[[i1, i2]];
        let mut b = -om * om * sk * p0.values()[[i1, i2]] + ck * v0.values()[[i1, i2]];
        for k in 0..n {
            let (start, ref dw) = diff[k];
            let dtf0: Complex64 = dw
                .iter()
                .enumerate()
                .map(|(j, c)| c * spec[start + j].comps[0].values()[[i1, i2]])
                .sum();
            // d^j F_j = -d_j F_j
            let src = dtf0
                - I * (x1 * spec[k].comps[1].values()[[i1, i2]]
                    + x2 * spec[k].comps[2].values()[[i1, i2]]);
            let (s, c) = kern(t - k as f64 * f.dt);
            a += w[k] * s * src;
            b += w[k] * c * src;
        }
        *out = a;
        *outt = b;
    }
    Ok((
        ScalarField::from_values(grid, Representation::Spectral, phi)?,
        ScalarField::from_values(grid, Representation::Spectral, phit)?,
    ))
}

/// `-+ int_0^t e^{-+ i (t-s)<nabla>} F(s)/(2i<nabla>) ds` at the last sample time.
pub fn duhamel_klein_gordon(f: &TimeSeries<ScalarField>, s: Sign) -> Result<ScalarField> {
    let n = f.len();
    let w = simpson_weights(n, f.dt)?;
    let grid = f
        .samples
        .first()
        .map(ScalarField::grid)
        .ok_or(Error::MissingInitialSource)?;
    let t = f.duration();
    let omega = Dispersion::Massive.table(grid);
    let mut acc = Array2::<Complex64>::zeros(grid.shape());
    for (k, sample) in f.samples.iter().enumerate() {
        let spec = sample.to_spectral();
        let tau = t - k as f64 * f.dt;
        for ((ix, a), v) in acc.indexed_iter_mut().zip(spec.values().iter()) {
            let om = omega[ix];
            *a += w[k] * Complex64::from_polar(1.0, -s.value() * om * tau) * v / (2.0 * I * om);
        }
    }
    acc.mapv_inplace(|z| -s.value() * z);
    ScalarField::from_values(grid, Representation::Spectral, acc)
}

/// Solves `(box + 1) phi = F`; returns `(phi, phi_t)` at the last sample time.
pub fn klein_gordon_solve(
    phi0: &ScalarField,
    phit0: &ScalarField,
    f: &TimeSeries<ScalarField>,
) -> Result<(ScalarField, ScalarField)> {
    let hom = HalfWaveState::split(phi0, phit0, Dispersion::Massive)?.evolve_free(f.duration());
    let state = HalfWaveState {
        plus: hom.plus.try_add(&duhamel_klein_gordon(f, Sign::Plus)?)?,
        minus: hom.minus.try_add(&duhamel_klein_gordon(f, Sign::Minus)?)?,
        ..hom
    };
    Ok(state.recombine())
}

//! Gauge-field plumbing shared by both Chern-Simons systems.
//!
//! `A_nu` occupies stack slots `0..6` as massless half-waves of
//! `(A_nu, d_t A_nu - N_{0 nu})`, and the drift of `d_t A_nu` sits in `drift[nu]`.
//! The wave equation is `box A_nu = d^mu N_{mu nu}` with `N` antisymmetric.

use ndarray::{Array2, Zip};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{OneForm, ScalarField};
use crate::integrator::{Branch, ModeStack};
use crate::propagators::{Dispersion, HalfWaveState};
use crate::spectral::{derivative, Sign, SymbolTables};

pub(crate) const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

pub type Form = [[Array2<Complex64>; 3]; 3];

/// Levi-Civita symbol with `eps_{012} = 1`.
pub fn levi_civita(mu: usize, nu: usize, la: usize) -> f64 {
    match (mu, nu, la) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

pub(crate) fn sidx(s: Sign) -> usize {
    match s {
        Sign::Plus => 0,
        Sign::Minus => 1,
    }
}

/// Stack slot of `A_{nu, s}`.
pub(crate) fn a_slot(nu: usize, s: Sign) -> usize {
    2 * nu + sidx(s)
}

pub(crate) fn gauge_branches() -> Vec<Branch> {
    (0..6)
        .map(|k| Branch {
            sign: if k % 2 == 0 { Sign::Plus } else { Sign::Minus },
            dispersion: Dispersion::Massless,
        })
        .collect()
}

/// `N_{mu nu} = c eps_{mu nu lambda} J^lambda`.
pub(crate) fn eps_form(c: f64, j: &[Array2<Complex64>; 3]) -> Form {
    std::array::from_fn(|mu| {
        std::array::from_fn(|nu| {
            let mut acc = Array2::<Complex64>::zeros(j[0].dim());
            for (la, jl) in j.iter().enumerate() {
                let e = levi_civita(mu, nu, la);
                if e != 0.0 {
                    acc.scaled_add((c * e).into(), jl);
                }
            }
            acc
        })
    })
}

/// Half-wave states of `A_nu` for Lorenz-gauge data. The divergence-form
/// velocities at `t = 0` are `(d_1 a_1 + d_2 a_2, d_1 a_0, d_2 a_0)`.
pub(crate) fn initial_gauge_waves(a: &OneForm) -> Result<[HalfWaveState; 3]> {
    let [a0, a1, a2] = &a.comps;
    let pis = [
        &derivative(a1, 1) + &derivative(a2, 2),
        derivative(a0, 1),
        derivative(a0, 2),
    ];
    Ok([
        HalfWaveState::split(a0, &pis[0], Dispersion::Massless)?,
        HalfWaveState::split(a1, &pis[1], Dispersion::Massless)?,
        HalfWaveState::split(a2, &pis[2], Dispersion::Massless)?,
    ])
}

pub(crate) fn push_gauge(fields: &mut Vec<Array2<Complex64>>, a: &[HalfWaveState; 3]) {
    for hw in a {
        fields.push(hw.plus.to_spectral().into_values());
        fields.push(hw.minus.to_spectral().into_values());
    }
}

pub(crate) fn gauge_from_stack(
    u: &ModeStack,
    sf: impl Fn(usize) -> ScalarField,
) -> [HalfWaveState; 3] {
    std::array::from_fn(|nu| HalfWaveState {
        plus: sf(a_slot(nu, Sign::Plus)),
        minus: sf(a_slot(nu, Sign::Minus)),
        dispersion: Dispersion::Massless,
        drift: u.drift[nu],
    })
}

/// Spectral `A_nu`.
pub(crate) fn potential(u: &ModeStack) -> [Array2<Complex64>; 3] {
    std::array::from_fn(|nu| &u.fields[a_slot(nu, Sign::Plus)] + &u.fields[a_slot(nu, Sign::Minus)])
}

/// `pi_nu = d_t A_nu - N_{0 nu}` recovered from the half-waves.
pub(crate) fn velocities(u: &ModeStack, tables: &SymbolTables) -> [Array2<Complex64>; 3] {
    std::array::from_fn(|nu| {
        let mut d = &u.fields[a_slot(nu, Sign::Plus)] - &u.fields[a_slot(nu, Sign::Minus)];
        Zip::from(&mut d)
            .and(&tables.abs)
            .for_each(|z, &w| *z *= -I * w);
        d[[0, 0]] = u.drift[nu];
        d
    })
}

/// Writes the half-wave sources `1/2 N_{0 nu} + s/2 (xi_j/|xi|) N_{j nu}` into slots `0..6`.
pub(crate) fn write_gauge_source(
    out: &mut ModeStack,
    n: &Form,
    drift: &[Complex64],
    tables: &SymbolTables,
) {
    let un = &tables.unit;
    for nu in 0..3 {
        for s in Sign::BOTH {
            let sv = 0.5 * s.value();
            let f = &mut out.fields[a_slot(nu, s)];
            Zip::from(&mut *f)
                .and(&n[0][nu])
                .and(&n[1][nu])
                .and(&n[2][nu])
                .and(&un[0])
                .and(&un[1])
                .for_each(|o, &n0, &n1, &n2, &e1, &e2| {
                    *o = 0.5 * n0 + sv * (e1 * n1 + e2 * n2);
                });
            f[[0, 0]] += 0.5 * drift[nu];
        }
    }
}

/// Gauge residual, `F_{0j}` and `F_{12}` equation residuals, and `|mean N_{12}|`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Curvature {
    pub gauge: f64,
    pub f01: f64,
    pub f02: f64,
    pub f12: f64,
    pub mean_defect: f64,
}

pub(crate) fn curvature_residuals(u: &ModeStack, n: &Form, tables: &SymbolTables) -> Curvature {
    let pi = velocities(u, tables);
    let a = potential(u);
    let xi = &tables.xi;
    let rms = |f: &Array2<Complex64>| f.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let dt_a: [Array2<Complex64>; 3] = std::array::from_fn(|nu| &pi[nu] + &n[0][nu]);
    // d^mu A_mu = d_t A_0 - d_j A_j
    let mut gauge = dt_a[0].clone();
    Zip::from(&mut gauge)
        .and(&a[1])
        .and(&a[2])
        .and(&xi[0])
        .and(&xi[1])
        .for_each(|g, &a1, &a2, &x1, &x2| {
            *g -= I * (x1 * a1 + x2 * a2);
        });
    let f0 = |j: usize| {
        let mut c = &dt_a[j] - &n[0][j];
        Zip::from(&mut c)
            .and(&a[0])
            .and(&xi[j - 1])
            .for_each(|z, &a0, &x| *z -= I * x * a0);
        c
    };
    let mut c12 = -&n[1][2];
    Zip::from(&mut c12)
        .and(&a[1])
        .and(&a[2])
        .and(&xi[0])
        .and(&xi[1])
        .for_each(|z, &a1, &a2, &x1, &x2| {
            *z += I * (x1 * a2 - x2 * a1);
        });
    Curvature {
        gauge: rms(&gauge),
        f01: rms(&f0(1)),
        f02: rms(&f0(2)),
        f12: rms(&c12),
        mean_defect: n[1][2][[0, 0]].norm(),
    }
}

/// Residual of `box A_nu = d^mu N_{mu nu}` at the centre of five samples.
/// `a` and `n0` hold the five values of `A_nu` and `N_{0 nu}`, and `n_mid` is `N` at the centre.
pub(crate) fn wave_residual2(
    a: &[Array2<Complex64>],
    n0: &[Array2<Complex64>],
    n_mid: &Form,
    nu: usize,
    dt: f64,
    tables: &SymbolTables,
) -> f64 {
    let mut r = second_difference(a, dt);
    let dt_n = first_difference(n0, dt);
    let (n1, n2) = (&n_mid[1][nu], &n_mid[2][nu]);
    let xi = &tables.xi;
    for (ix, z) in r.indexed_iter_mut() {
        let (w, x1, x2) = (tables.abs[ix], xi[0][ix], xi[1][ix]);
        *z += w * w * a[2][ix] - dt_n[ix] + I * (x1 * n1[ix] + x2 * n2[ix]);
    }
    r.iter().map(|z| z.norm_sqr()).sum()
}

/// Fourth-order central first derivative from five samples.
pub(crate) fn first_difference(v: &[Array2<Complex64>], dt: f64) -> Array2<Complex64> {
    (&v[0] - &v[4] + (&v[3] - &v[1]) * Complex64::from(8.0)) / Complex64::from(12.0 * dt)
}

/// Fourth-order central second derivative from five samples.
pub(crate) fn second_difference(v: &[Array2<Complex64>], dt: f64) -> Array2<Complex64> {
    (-(&v[0] + &v[4]) + (&v[1] + &v[3]) * Complex64::from(16.0) - &v[2] * Complex64::from(30.0))
        / Complex64::from(12.0 * dt * dt)
}

/// Number of steps of size `dt` covering `t`, which must be a whole multiple.
pub fn step_count(t: f64, dt: f64) -> Result<usize> {
    let steps = (t / dt).round();
    if !(dt > 0.0) || steps < 1.0 || ((steps * dt - t).abs() > 1e-9 * t.max(dt)) {
        return Err(Error::Precondition(format!(
            "t = {t} is not a positive multiple of dt = {dt}"
        )));
    }
    Ok(steps as usize)
}

pub(crate) fn shift_time(e: Error, t0: f64) -> Error {
    match e {
        Error::Divergence { time, step } => Error::Divergence {
            time: time + t0,
            step,
        },
        other => other,
    }
}

pub(crate) fn check_scaling(lambda: f64, mass: f64) -> Result<()> {
    if !(lambda > 0.0) || lambda.log2().fract() != 0.0 {
        return Err(Error::InvalidScaling(lambda));
    }
    if mass != 0.0 {
        return Err(Error::Precondition("scaling covariance needs m = 0".into()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn levi_civita_is_totally_antisymmetric() {
        for a in 0..3 {
            for b in 0..3 {
                for c in 0..3 {
                    assert_eq!(levi_civita(a, b, c), -levi_civita(b, a, c));
                    assert_eq!(levi_civita(a, b, c), -levi_civita(a, c, b));
                }
            }
        }
        assert_eq!(levi_civita(0, 1, 2), 1.0);
    }

    #[test]
    fn step_count_requires_whole_multiples() {
        assert_eq!(step_count(1.0, 0.25).unwrap(), 4);
        assert!(step_count(1.0, 0.3).is_err());
        assert!(step_count(1.0, 0.0).is_err());
        assert!(step_count(1.0, -0.5).is_err());
    }

    #[test]
    fn difference_stencils_are_exact_on_quartics() {
        let dt = 0.1;
        let f = |t: f64| Array2::from_elem((1, 1), Complex64::from(t.powi(4) - 2.0 * t * t + t));
        let v: Vec<_> = (-2..=2).map(|k| f(0.3 + k as f64 * dt)).collect();
        let t = 0.3f64;
        assert!(
            (first_difference(&v, dt)[[0, 0]].re - (4.0 * t.powi(3) - 4.0 * t + 1.0)).abs() < 1e-10
        );
        assert!((second_difference(&v, dt)[[0, 0]].re - (12.0 * t * t - 4.0)).abs() < 1e-9);
    }
}

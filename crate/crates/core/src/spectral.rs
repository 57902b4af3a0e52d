//! Fourier multipliers, Hodge splitting and dealiasing on the periodic box.

use ndarray::{Array2, Zip};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Representation, ScalarField};
use crate::grid::Grid2D;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub const BOTH: [Sign; 2] = [Sign::Plus, Sign::Minus];

    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

/// `<xi> = sqrt(1 + |xi|^2)`.
pub fn bracket(x1: f64, x2: f64) -> f64 {
    (1.0 + x1 * x1 + x2 * x2).sqrt()
}

/// Unit frequency `xi/|xi|`, zero at the origin.
pub fn unit(x1: f64, x2: f64) -> (f64, f64) {
    let r = x1.hypot(x2);
    if r == 0.0 {
        (0.0, 0.0)
    } else {
        (x1 / r, x2 / r)
    }
}

/// Constant-coefficient operators used throughout the toolkit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Multiplier {
    /// `d_j`, `j` in `{1, 2}`.
    Derivative(usize),
    /// `|nabla|`.
    AbsNabla,
    /// `<nabla>`.
    BracketNabla,
    /// Modified Riesz transform `R^mu_sign` with upper index.
    Riesz(Sign, usize),
    /// `E_mu`: `<nabla> - |nabla|` for `mu = 0`, zero otherwise.
    ErrorOp(usize),
    /// Inverse Laplacian `(-Delta)^{-1}` on nonzero modes.
    InverseNegLaplacian,
}

impl Multiplier {
    pub fn symbol(&self, x1: f64, x2: f64) -> Complex64 {
        match *self {
            Multiplier::Derivative(j) => I * if j == 1 { x1 } else { x2 },
            Multiplier::AbsNabla => x1.hypot(x2).into(),
            Multiplier::BracketNabla => bracket(x1, x2).into(),
            Multiplier::Riesz(s, mu) => riesz_symbol(s, mu, x1, x2).into(),
            Multiplier::ErrorOp(mu) => {
                if mu == 0 {
                    (bracket(x1, x2) - x1.hypot(x2)).into()
                } else {
                    Complex64::default()
                }
            }
            Multiplier::InverseNegLaplacian => {
                let r2 = x1 * x1 + x2 * x2;
                if r2 == 0.0 {
                    Complex64::default()
                } else {
                    (1.0 / r2).into()
                }
            }
        }
    }
}

/// Real symbol of `R^mu_sign`: `-1` for `mu = 0`, `-sign xi_j/|xi|` otherwise.
pub fn riesz_symbol(s: Sign, mu: usize, x1: f64, x2: f64) -> f64 {
    if mu == 0 {
        return -1.0;
    }
    let (u1, u2) = unit(x1, x2);
    -s.value() * if mu == 1 { u1 } else { u2 }
}

/// Lower-index Riesz symbol `R_{sign, mu}`.
pub fn riesz_lower_symbol(s: Sign, mu: usize, x1: f64, x2: f64) -> f64 {
    if mu == 0 {
        -1.0
    } else {
        -riesz_symbol(s, mu, x1, x2)
    }
}

/// Multiplies the spectrum by `symbol(xi)`; output keeps the input representation.
pub fn apply_symbol<F>(f: &ScalarField, symbol: F) -> ScalarField
where
    F: Fn(f64, f64) -> Complex64,
{
    let grid = f.grid();
    let mut s = f.to_spectral();
    for ((i1, i2), v) in s.values_mut().indexed_iter_mut() {
        let (x1, x2) = grid.frequency(i1, i2);
        *v *= symbol(x1, x2);
    }
    match f.repr() {
        Representation::Physical => s.into_physical(),
        Representation::Spectral => s,
    }
}

pub fn apply_multiplier(f: &ScalarField, m: Multiplier) -> ScalarField {
    apply_symbol(f, |x1, x2| m.symbol(x1, x2))
}

/// Applies `1/symbol`. A vanishing symbol is an error unless it sits at the
/// zero mode and `exclude_zero_mode` is set, in which case that mode is zeroed.
pub fn apply_inverse(
    f: &ScalarField,
    m: Multiplier,
    exclude_zero_mode: bool,
) -> Result<ScalarField> {
    let grid = f.grid();
    let mut s = f.to_spectral();
    for ((i1, i2), v) in s.values_mut().indexed_iter_mut() {
        let (x1, x2) = grid.frequency(i1, i2);
        let sym = m.symbol(x1, x2);
        if sym.norm() == 0.0 {
            if exclude_zero_mode && (i1, i2) == (0, 0) {
                *v = Complex64::default();
                continue;
            }
            let (k1, k2) = grid.wavenumber(i1, i2);
            return Err(Error::SingularMultiplier { k1, k2 });
        }
        *v /= sym;
    }
    Ok(match f.repr() {
        Representation::Physical => s.into_physical(),
        Representation::Spectral => s,
    })
}

pub fn riesz(f: &ScalarField, s: Sign, mu: usize) -> ScalarField {
    apply_multiplier(f, Multiplier::Riesz(s, mu))
}

pub fn abs_nabla(f: &ScalarField) -> ScalarField {
    apply_multiplier(f, Multiplier::AbsNabla)
}

pub fn bracket_nabla(f: &ScalarField) -> ScalarField {
    apply_multiplier(f, Multiplier::BracketNabla)
}

pub fn err_op(f: &ScalarField, mu: usize) -> ScalarField {
    apply_multiplier(f, Multiplier::ErrorOp(mu))
}

pub fn derivative(f: &ScalarField, j: usize) -> ScalarField {
    apply_multiplier(f, Multiplier::Derivative(j))
}

/// `curl a = d1 a2 - d2 a1`.
pub fn curl(a1: &ScalarField, a2: &ScalarField) -> ScalarField {
    &derivative(a2, 1) - &derivative(a1, 2)
}

/// `div a = -d1 a1 - d2 a2` (sign fixed by the Minkowski metric).
pub fn div(a1: &ScalarField, a2: &ScalarField) -> ScalarField {
    (&derivative(a1, 1) + &derivative(a2, 2)).scaled((-1.0).into())
}

/// Splitting `a = a_df + a_cf + mean` of a spatial one-form.
#[derive(Debug, Clone)]
pub struct HodgeParts {
    pub df: [ScalarField; 2],
    pub cf: [ScalarField; 2],
    pub mean: [ScalarField; 2],
}

pub fn hodge_decompose(a1: &ScalarField, a2: &ScalarField) -> Result<HodgeParts> {
    if a1.grid() != a2.grid() {
        return Err(Error::ShapeMismatch("components on different grids".into()));
    }
    let grid = a1.grid();
    let (s1, s2) = (a1.to_spectral(), a2.to_spectral());
    let mut df = [s1.clone(), s2.clone()];
    let mut cf = [s1.clone(), s2.clone()];
    let mut mean = [
        ScalarField::zeros(grid, Representation::Spectral),
        ScalarField::zeros(grid, Representation::Spectral),
    ];
    for i1 in 0..grid.n1() {
        for i2 in 0..grid.n2() {
            let (b1, b2) = (s1.values()[[i1, i2]], s2.values()[[i1, i2]]);
            let (x1, x2) = grid.frequency(i1, i2);
            let r2 = x1 * x1 + x2 * x2;
            let (d, c) = if r2 == 0.0 {
                mean[0].values_mut()[[i1, i2]] = b1;
                mean[1].values_mut()[[i1, i2]] = b2;
                ([Complex64::default(); 2], [Complex64::default(); 2])
            } else {
                // (-Delta)^{-1} (d2 curl, -d1 curl) and xi (xi . a)/|xi|^2
                let rot = x1 * b2 - x2 * b1;
                let dv = x1 * b1 + x2 * b2;
                (
                    [-x2 * rot / r2, x1 * rot / r2],
                    [x1 * dv / r2, x2 * dv / r2],
                )
            };
            for j in 0..2 {
                df[j].values_mut()[[i1, i2]] = d[j];
                cf[j].values_mut()[[i1, i2]] = c[j];
            }
        }
    }
    let back = |f: ScalarField| match a1.repr() {
        Representation::Physical => f.into_physical(),
        Representation::Spectral => f,
    };
    let [d1, d2] = df;
    let [c1, c2] = cf;
    let [m1, m2] = mean;
    Ok(HodgeParts {
        df: [back(d1), back(d2)],
        cf: [back(c1), back(c2)],
        mean: [back(m1), back(m2)],
    })
}

/// Two-thirds rule mask: keeps `|k_j| < n_j/3` on each axis, so a product of
/// two retained modes never aliases back into the band.
pub fn dealias_mask(grid: Grid2D) -> Array2<f64> {
    let (c1, c2) = ((grid.n1() as i64 - 1) / 3, (grid.n2() as i64 - 1) / 3);
    Array2::from_shape_fn(grid.shape(), |(i1, i2)| {
        let (k1, k2) = grid.wavenumber(i1, i2);
        if k1.abs() <= c1 && k2.abs() <= c2 {
            1.0
        } else {
            0.0
        }
    })
}

pub fn dealias(f: &ScalarField) -> ScalarField {
    let mask = dealias_mask(f.grid());
    let mut s = f.to_spectral();
    dealias_in_place(s.values_mut(), &mask);
    match f.repr() {
        Representation::Physical => s.into_physical(),
        Representation::Spectral => s,
    }
}

pub(crate) fn dealias_in_place(a: &mut Array2<Complex64>, mask: &Array2<f64>) {
    Zip::from(a).and(mask).for_each(|v, &m| {
        if m == 0.0 {
            *v = Complex64::default();
        }
    });
}

/// Per-mode symbol tables shared by the solvers.
#[derive(Debug, Clone)]
pub struct SymbolTables {
    pub grid: Grid2D,
    /// `xi_1`, `xi_2`
    pub xi: [Array2<f64>; 2],
    /// `xi_j / |xi|`, zero at the origin
    pub unit: [Array2<f64>; 2],
    pub abs: Array2<f64>,
    pub bracket: Array2<f64>,
    pub mask: Array2<f64>,
}

impl SymbolTables {
    pub fn new(grid: Grid2D) -> Self {
        Self {
            grid,
            xi: [grid.symbol(|x1, _| x1), grid.symbol(|_, x2| x2)],
            unit: [
                grid.symbol(|x1, x2| unit(x1, x2).0),
                grid.symbol(|x1, x2| unit(x1, x2).1),
            ],
            abs: grid.symbol(f64::hypot),
            bracket: grid.symbol(bracket),
            mask: dealias_mask(grid),
        }
    }

    /// Table of `R^mu_sign`.
    pub fn riesz(&self, s: Sign, mu: usize) -> Array2<f64> {
        if mu == 0 {
            Array2::from_elem(self.grid.shape(), -1.0)
        } else {
            self.unit[mu - 1].mapv(|u| -s.value() * u)
        }
    }
}

use std::ops::{Add, Mul, Sub};

use ndarray::{Array2, Zip};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fft;
use crate::grid::Grid2D;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Representation {
    Physical,
    Spectral,
}

impl Representation {
    pub fn code(self) -> u8 {
        match self {
            Representation::Physical => 0,
            Representation::Spectral => 1,
        }
    }

    pub fn from_code(c: u8) -> Option<Self> {
        match c {
            0 => Some(Representation::Physical),
            1 => Some(Representation::Spectral),
            _ => None,
        }
    }
}

/// Complex scalar on a [`Grid2D`], held either as point values or as
/// Fourier coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    grid: Grid2D,
    repr: Representation,
    values: Array2<Complex64>,
}

impl ScalarField {
    pub fn zeros(grid: Grid2D, repr: Representation) -> Self {
        Self {
            grid,
            repr,
            values: Array2::zeros(grid.shape()),
        }
    }

    pub fn from_values(
        grid: Grid2D,
        repr: Representation,
        values: Array2<Complex64>,
    ) -> Result<Self> {
        if values.dim() != grid.shape() {
            return Err(Error::ShapeMismatch(format!(
                "values {:?} on grid {:?}",
                values.dim(),
                grid.shape()
            )));
        }
        Ok(Self { grid, repr, values })
    }

    /// Samples `f(x1, x2)` at the grid points.
    pub fn from_fn<F>(grid: Grid2D, mut f: F) -> Self
    where
        F: FnMut(f64, f64) -> Complex64,
    {
        let values = Array2::from_shape_fn(grid.shape(), |(i1, i2)| {
            let (x1, x2) = grid.point(i1, i2);
            f(x1, x2)
        });
        Self {
            grid,
            repr: Representation::Physical,
            values,
        }
    }

    pub fn grid(&self) -> Grid2D {
        self.grid
    }

    pub fn repr(&self) -> Representation {
        self.repr
    }

    pub fn values(&self) -> &Array2<Complex64> {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut Array2<Complex64> {
        &mut self.values
    }

    pub fn into_values(self) -> Array2<Complex64> {
        self.values
    }

    pub fn into_spectral(mut self) -> Self {
        if self.repr == Representation::Physical {
            fft::forward2(&mut self.values);
            self.repr = Representation::Spectral;
        }
        self
    }

    pub fn into_physical(mut self) -> Self {
        if self.repr == Representation::Spectral {
            fft::inverse2(&mut self.values);
            self.repr = Representation::Physical;
        }
        self
    }

    pub fn to_spectral(&self) -> Self {
        self.clone().into_spectral()
    }

    pub fn to_physical(&self) -> Self {
        self.clone().into_physical()
    }

    /// `L^2(T^2)` norm.
    pub fn l2_norm(&self) -> f64 {
        let s: f64 = self.values.iter().map(|z| z.norm_sqr()).sum();
        match self.repr {
            Representation::Physical => (s * self.grid.cell_area()).sqrt(),
            Representation::Spectral => (s * self.grid.area()).sqrt(),
        }
    }

    /// Root mean square over the box.
    pub fn rms(&self) -> f64 {
        self.l2_norm() / self.grid.length()
    }

    pub fn mean(&self) -> Complex64 {
        match self.repr {
            Representation::Physical => self.values.sum() / self.grid.len() as f64,
            Representation::Spectral => self.values[[0, 0]],
        }
    }

    /// `max |Im f| / max |f|` over the physical values; zero for a zero field.
    pub fn imag_ratio(&self) -> f64 {
        let p = self.to_physical();
        let m = p.values.iter().fold(0.0f64, |a, z| a.max(z.norm()));
        if m == 0.0 {
            return 0.0;
        }
        p.values.iter().fold(0.0f64, |a, z| a.max(z.im.abs())) / m
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |a, z| a.max(z.norm()))
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self {
            grid: self.grid,
            repr: self.repr,
            values: self.values.mapv(f),
        }
    }

    pub fn scaled(&self, s: Complex64) -> Self {
        self.map(|z| z * s)
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::ShapeMismatch(
                "fields live on different grids".into(),
            ));
        }
        if self.repr != other.repr {
            return Err(Error::ShapeMismatch(
                "fields in different representations".into(),
            ));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(Self {
            grid: self.grid,
            repr: self.repr,
            values: &self.values + &other.values,
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(Self {
            grid: self.grid,
            repr: self.repr,
            values: &self.values - &other.values,
        })
    }

    /// Pointwise product of two physical fields.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        if self.repr != Representation::Physical {
            return Err(Error::Representation {
                expected: "physical",
            });
        }
        let mut values = self.values.clone();
        Zip::from(&mut values)
            .and(&other.values)
            .for_each(|a, b| *a *= *b);
        Ok(Self {
            grid: self.grid,
            repr: self.repr,
            values,
        })
    }

    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        self.check_compatible(other)?;
        let w = match self.repr {
            Representation::Physical => self.grid.cell_area(),
            Representation::Spectral => self.grid.area(),
        };
        let s: Complex64 = self
            .values
            .iter()
            .zip(other.values.iter())
            .map(|(a, b)| a.conj() * b)
            .sum();
        Ok(s * w)
    }
}

impl Add for &ScalarField {
    type Output = ScalarField;
    fn add(self, rhs: Self) -> ScalarField {
        self.try_add(rhs).expect("incompatible fields")
    }
}

impl Sub for &ScalarField {
    type Output = ScalarField;
    fn sub(self, rhs: Self) -> ScalarField {
        self.try_sub(rhs).expect("incompatible fields")
    }
}

impl Mul<f64> for &ScalarField {
    type Output = ScalarField;
    fn mul(self, rhs: f64) -> ScalarField {
        self.map(|z| z * rhs)
    }
}

/// Two-component complex field.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinorField {
    pub up: ScalarField,
    pub down: ScalarField,
}

impl SpinorField {
    pub fn new(up: ScalarField, down: ScalarField) -> Result<Self> {
        up.check_compatible(&down)?;
        Ok(Self { up, down })
    }

    pub fn zeros(grid: Grid2D, repr: Representation) -> Self {
        Self {
            up: ScalarField::zeros(grid, repr),
            down: ScalarField::zeros(grid, repr),
        }
    }

    pub fn grid(&self) -> Grid2D {
        self.up.grid()
    }

    pub fn repr(&self) -> Representation {
        self.up.repr()
    }

    pub fn components(&self) -> [&ScalarField; 2] {
        [&self.up, &self.down]
    }

    pub fn to_spectral(&self) -> Self {
        Self {
            up: self.up.to_spectral(),
            down: self.down.to_spectral(),
        }
    }

    pub fn to_physical(&self) -> Self {
        Self {
            up: self.up.to_physical(),
            down: self.down.to_physical(),
        }
    }

    pub fn l2_norm(&self) -> f64 {
        self.up.l2_norm().hypot(self.down.l2_norm())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        Ok(Self {
            up: self.up.try_add(&other.up)?,
            down: self.down.try_add(&other.down)?,
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        Ok(Self {
            up: self.up.try_sub(&other.up)?,
            down: self.down.try_sub(&other.down)?,
        })
    }

    /// `psi^dagger psi`, physical.
    pub fn density(&self) -> ScalarField {
        let p = self.to_physical();
        let mut v = p.up.values().mapv(|z| Complex64::new(z.norm_sqr(), 0.0));
        Zip::from(&mut v)
            .and(p.down.values())
            .for_each(|a, b| a.re += b.norm_sqr());
        ScalarField::from_values(self.grid(), Representation::Physical, v).expect("same grid")
    }
}

/// Three components `(a0, a1, a2)` of a space-time one-form at a fixed time.
#[derive(Debug, Clone, PartialEq)]
pub struct OneForm {
    pub comps: [ScalarField; 3],
}

impl OneForm {
    pub fn new(a0: ScalarField, a1: ScalarField, a2: ScalarField) -> Result<Self> {
        a0.check_compatible(&a1)?;
        a0.check_compatible(&a2)?;
        Ok(Self {
            comps: [a0, a1, a2],
        })
    }

    pub fn zeros(grid: Grid2D, repr: Representation) -> Self {
        Self {
            comps: std::array::from_fn(|_| ScalarField::zeros(grid, repr)),
        }
    }

    pub fn grid(&self) -> Grid2D {
        self.comps[0].grid()
    }

    pub fn to_spectral(&self) -> Self {
        Self {
            comps: std::array::from_fn(|i| self.comps[i].to_spectral()),
        }
    }

    pub fn to_physical(&self) -> Self {
        Self {
            comps: std::array::from_fn(|i| self.comps[i].to_physical()),
        }
    }

    pub fn imag_ratio(&self) -> f64 {
        self.comps
            .iter()
            .map(ScalarField::imag_ratio)
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parseval_with_plain_grid_sum() {
        let g = Grid2D::new(8, 12, 3.0).unwrap();
        let f = ScalarField::from_fn(g, |x, y| Complex64::new((x * 1.3).sin() + y, x * y));
        let s = f.to_spectral();
        assert!((f.l2_norm() - s.l2_norm()).abs() < 1e-12 * f.l2_norm());
        let back = s.to_physical();
        assert!((&back - &f).max_abs() < 1e-13);
    }

    #[test]
    fn mixed_representations_are_rejected() {
        let g = Grid2D::square(8, 1.0).unwrap();
        let a = ScalarField::zeros(g, Representation::Physical);
        let b = ScalarField::zeros(g, Representation::Spectral);
        assert!(a.try_add(&b).is_err());
        let h = Grid2D::square(10, 1.0).unwrap();
        assert!(a
            .try_add(&ScalarField::zeros(h, Representation::Physical))
            .is_err());
    }
}

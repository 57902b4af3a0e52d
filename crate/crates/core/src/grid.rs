use std::f64::consts::PI;

use ndarray::Array2;

use crate::error::{Error, Result};

/// Periodic box `[0, L)^2` sampled on `n1 x n2` points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid2D {
    n1: usize,
    n2: usize,
    length: f64,
}

impl Grid2D {
    pub fn new(n1: usize, n2: usize, length: f64) -> Result<Self> {
        let ok = |n: usize| n >= 8 && n % 2 == 0;
        if !ok(n1) || !ok(n2) || !(length > 0.0 && length.is_finite()) {
            return Err(Error::InvalidGrid { n1, n2, length });
        }
        Ok(Self { n1, n2, length })
    }

    pub fn square(n: usize, length: f64) -> Result<Self> {
        Self::new(n, n, length)
    }

    pub fn n1(&self) -> usize {
        self.n1
    }

    pub fn n2(&self) -> usize {
        self.n2
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.n1, self.n2)
    }

    pub fn len(&self) -> usize {
        self.n1 * self.n2
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn area(&self) -> f64 {
        self.length * self.length
    }

    /// Quadrature weight of one grid cell.
    pub fn cell_area(&self) -> f64 {
        self.area() / self.len() as f64
    }

    pub fn spacing(&self) -> (f64, f64) {
        (self.length / self.n1 as f64, self.length / self.n2 as f64)
    }

    pub fn fundamental(&self) -> f64 {
        2.0 * PI / self.length
    }

    pub fn point(&self, i1: usize, i2: usize) -> (f64, f64) {
        let (h1, h2) = self.spacing();
        (i1 as f64 * h1, i2 as f64 * h2)
    }

    /// Integer wavenumbers `(k1, k2)` stored at array index `(i1, i2)`.
    pub fn wavenumber(&self, i1: usize, i2: usize) -> (i64, i64) {
        (signed_index(i1, self.n1), signed_index(i2, self.n2))
    }

    /// Array index of an integer wavenumber, wrapped periodically.
    pub fn index_of(&self, k1: i64, k2: i64) -> (usize, usize) {
        (
            k1.rem_euclid(self.n1 as i64) as usize,
            k2.rem_euclid(self.n2 as i64) as usize,
        )
    }

    pub fn frequency(&self, i1: usize, i2: usize) -> (f64, f64) {
        let (k1, k2) = self.wavenumber(i1, i2);
        let f = self.fundamental();
        (f * k1 as f64, f * k2 as f64)
    }

    pub fn nyquist(&self) -> (f64, f64) {
        let f = self.fundamental();
        (f * (self.n1 / 2) as f64, f * (self.n2 / 2) as f64)
    }

    /// Table of a per-mode value laid out like spectral arrays.
    pub fn symbol<F>(&self, mut f: F) -> Array2<f64>
    where
        F: FnMut(f64, f64) -> f64,
    {
        Array2::from_shape_fn(self.shape(), |(i1, i2)| {
            let (x1, x2) = self.frequency(i1, i2);
            f(x1, x2)
        })
    }

    /// Same grid with the box shrunk by `lambda`.
    pub fn rescaled(&self, lambda: f64) -> Result<Self> {
        Self::new(self.n1, self.n2, self.length / lambda)
    }
}

/// Maps `0..n` onto the lattice `{-n/2+1, ..., n/2}`.
pub fn signed_index(i: usize, n: usize) -> i64 {
    if i <= n / 2 {
        i as i64
    } else {
        i as i64 - n as i64
    }
}

//! Pauli/gamma/alpha matrices and the frequency projections `Pi_pm(xi)`.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::Result;
use crate::field::{Representation, ScalarField, SpinorField};
use crate::spectral::{riesz_symbol, Sign};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };
const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Complex 2x2 matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Matrix2C(pub [[Complex64; 2]; 2]);

impl Matrix2C {
    pub const IDENTITY: Matrix2C = Matrix2C([[ONE, ZERO], [ZERO, ONE]]);
    pub const ZERO: Matrix2C = Matrix2C([[ZERO, ZERO], [ZERO, ZERO]]);

    pub fn adjoint(&self) -> Matrix2C {
        let m = &self.0;
        Matrix2C([
            [m[0][0].conj(), m[1][0].conj()],
            [m[0][1].conj(), m[1][1].conj()],
        ])
    }

    pub fn scale(&self, s: Complex64) -> Matrix2C {
        Matrix2C(self.0.map(|r| r.map(|z| z * s)))
    }

    pub fn apply(&self, v: [Complex64; 2]) -> [Complex64; 2] {
        let m = &self.0;
        [
            m[0][0] * v[0] + m[0][1] * v[1],
            m[1][0] * v[0] + m[1][1] * v[1],
        ]
    }

    /// Max-entry distance.
    pub fn dist(&self, other: &Matrix2C) -> f64 {
        let d = *self - *other;
        d.0.iter().flatten().fold(0.0, |a, z| a.max(z.norm()))
    }
}

impl Add for Matrix2C {
    type Output = Matrix2C;
    fn add(self, o: Matrix2C) -> Matrix2C {
        Matrix2C(std::array::from_fn(|i| {
            std::array::from_fn(|j| self.0[i][j] + o.0[i][j])
        }))
    }
}

impl Sub for Matrix2C {
    type Output = Matrix2C;
    fn sub(self, o: Matrix2C) -> Matrix2C {
        Matrix2C(std::array::from_fn(|i| {
            std::array::from_fn(|j| self.0[i][j] - o.0[i][j])
        }))
    }
}

impl Neg for Matrix2C {
    type Output = Matrix2C;
    fn neg(self) -> Matrix2C {
        self.scale(-ONE)
    }
}

impl Mul for Matrix2C {
    type Output = Matrix2C;
    fn mul(self, o: Matrix2C) -> Matrix2C {
        let (a, b) = (&self.0, &o.0);
        Matrix2C(std::array::from_fn(|i| {
            std::array::from_fn(|j| a[i][0] * b[0][j] + a[i][1] * b[1][j])
        }))
    }
}

pub fn sigma(k: usize) -> Matrix2C {
    match k {
        1 => Matrix2C([[ZERO, ONE], [ONE, ZERO]]),
        2 => Matrix2C([[ZERO, -I], [I, ZERO]]),
        3 => Matrix2C([[ONE, ZERO], [ZERO, -ONE]]),
        _ => panic!("Pauli index {k} out of range"),
    }
}

/// `gamma^0 = sigma^3`, `gamma^1 = i sigma^2`, `gamma^2 = -i sigma^1`.
pub fn gamma(mu: usize) -> Matrix2C {
    match mu {
        0 => sigma(3),
        1 => sigma(2).scale(I),
        2 => sigma(1).scale(-I),
        _ => panic!("gamma index {mu} out of range"),
    }
}

pub fn beta() -> Matrix2C {
    gamma(0)
}

/// `alpha^0 = Id`, `alpha^j = beta gamma^j`.
pub fn alpha(mu: usize) -> Matrix2C {
    if mu == 0 {
        Matrix2C::IDENTITY
    } else {
        beta() * gamma(mu)
    }
}

/// `Pi(sign xi) = (Id + sign xi_j alpha^j/|xi|)/2`, and `Id/2` at the origin.
pub fn projection(s: Sign, x1: f64, x2: f64) -> Matrix2C {
    let r = x1.hypot(x2);
    if r == 0.0 {
        return Matrix2C::IDENTITY.scale(0.5.into());
    }
    let k = s.value() / r;
    let a = alpha(1).scale((k * x1).into()) + alpha(2).scale((k * x2).into());
    (Matrix2C::IDENTITY + a).scale(0.5.into())
}

/// Applies a per-mode matrix symbol to a spinor; output keeps the input representation.
pub fn apply_matrix_symbol<F>(psi: &SpinorField, symbol: F) -> SpinorField
where
    F: Fn(f64, f64) -> Matrix2C,
{
    let grid = psi.grid();
    let s = psi.to_spectral();
    let mut out = s.clone();
    for i1 in 0..grid.n1() {
        for i2 in 0..grid.n2() {
            let (x1, x2) = grid.frequency(i1, i2);
            let v = [s.up.values()[[i1, i2]], s.down.values()[[i1, i2]]];
            let w = symbol(x1, x2).apply(v);
            out.up.values_mut()[[i1, i2]] = w[0];
            out.down.values_mut()[[i1, i2]] = w[1];
        }
    }
    match psi.repr() {
        Representation::Physical => out.to_physical(),
        Representation::Spectral => out,
    }
}

pub fn project(s: Sign, psi: &SpinorField) -> SpinorField {
    apply_matrix_symbol(psi, |x1, x2| projection(s, x1, x2))
}

/// Pointwise constant matrix times a spinor.
pub fn apply_constant(m: Matrix2C, psi: &SpinorField) -> SpinorField {
    apply_matrix_symbol(psi, |_, _| m)
}

/// Relative `L^2` defect of `alpha^mu Pi_s = Pi_{-s} alpha^mu Pi_s - R^mu_s Pi_s`
/// applied to `psi`. The zero mode is dropped since `Pi_pm(0)` are not
/// complementary projections there.
pub fn commutator_residual(s: Sign, mu: usize, psi: &SpinorField) -> f64 {
    let mut p = psi.to_spectral();
    p.up.values_mut()[[0, 0]] = ZERO;
    p.down.values_mut()[[0, 0]] = ZERO;
    let a = alpha(mu);
    let lhs = apply_matrix_symbol(&p, |x1, x2| a * projection(s, x1, x2));
    let rhs = apply_matrix_symbol(&p, |x1, x2| {
        let ps = projection(s, x1, x2);
        projection(s.flip(), x1, x2) * a * ps - ps.scale(riesz_symbol(s, mu, x1, x2).into())
    });
    let d = lhs.try_sub(&rhs).expect("same grid").l2_norm();
    let n = p.l2_norm();
    if n == 0.0 {
        0.0
    } else {
        d / n
    }
}

/// Dirac adjoint `psi^dagger gamma^0` as a row of two fields.
pub fn dirac_adjoint(psi: &SpinorField) -> [ScalarField; 2] {
    let p = psi.to_physical();
    [p.up.map(|z| z.conj()), p.down.map(|z| -z.conj())]
}

/// Bilinear `psi1^dagger M psi2`, physical.
pub fn bilinear(psi1: &SpinorField, m: Matrix2C, psi2: &SpinorField) -> Result<ScalarField> {
    let (a, b) = (psi1.to_physical(), psi2.to_physical());
    let mb = apply_constant(m, &b);
    let conj_up = a.up.map(|z| z.conj());
    let conj_down = a.down.map(|z| z.conj());
    conj_up
        .try_mul(&mb.up)?
        .try_add(&conj_down.try_mul(&mb.down)?)
}

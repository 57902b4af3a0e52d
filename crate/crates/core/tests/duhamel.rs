use csgauge_core::propagators::{
    divergence_form_solve, klein_gordon_solve, reference_wave_solve, TimeSeries,
};
use csgauge_core::{Grid2D, OneForm, ScalarField};
use num_complex::Complex64;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Plane waves `phi = sum c e^{i(sigma t + xi.x)}` with `box phi = d^mu F_mu`,
/// splitting the source between `F_0` and the spatial components.
struct Manufactured {
    grid: Grid2D,
    modes: Vec<(i64, i64, f64, Complex64, f64)>,
}

impl Manufactured {
    fn new(grid: Grid2D) -> Self {
        Self {
            grid,
            modes: vec![
                (1, 0, 0.7, Complex64::new(1.0, 0.0), 0.6),
                (-2, 1, -0.4, Complex64::new(0.3, -0.5), 0.2),
                (0, 3, 1.1, Complex64::new(-0.2, 0.4), 1.0),
            ],
        }
    }

    fn eval(&self, t: f64, f: impl Fn(f64, f64, f64) -> Complex64) -> ScalarField {
        let k = self.grid.fundamental();
        ScalarField::from_fn(self.grid, |x, y| {
            self.modes
                .iter()
                .map(|&(k1, k2, sigma, c, _)| {
                    let (x1, x2) = (k * k1 as f64, k * k2 as f64);
                    c * Complex64::from_polar(1.0, sigma * t + x1 * x + x2 * y) * f(x1, x2, sigma)
                })
                .sum()
        })
    }

    /// Splits `i sigma c0 - i xi.c = |xi|^2 - sigma^2` by the weight `theta`.
    fn coeffs(&self, x1: f64, x2: f64, sigma: f64, theta: f64) -> [Complex64; 3] {
        let r2 = x1 * x1 + x2 * x2;
        let rhs = r2 - sigma * sigma;
        [
            theta * rhs / (I * sigma),
            (1.0 - theta) * I * rhs * x1 / r2,
            (1.0 - theta) * I * rhs * x2 / r2,
        ]
    }

    fn source(&self, t: f64) -> OneForm {
        let comp = |mu: usize| {
            let k = self.grid.fundamental();
            ScalarField::from_fn(self.grid, |x, y| {
                self.modes
                    .iter()
                    .map(|&(k1, k2, sigma, c, theta)| {
                        let (x1, x2) = (k * k1 as f64, k * k2 as f64);
                        c * Complex64::from_polar(1.0, sigma * t + x1 * x + x2 * y)
                            * self.coeffs(x1, x2, sigma, theta)[mu]
                    })
                    .sum()
            })
        };
        OneForm::new(comp(0), comp(1), comp(2)).unwrap()
    }

    fn series(&self, t: f64, nodes: usize) -> TimeSeries<OneForm> {
        let dt = t / (nodes - 1) as f64;
        TimeSeries::new(dt, (0..nodes).map(|k| self.source(k as f64 * dt)).collect())
    }

    fn phi(&self, t: f64) -> ScalarField {
        self.eval(t, |_, _, _| 1.0.into())
    }

    fn phit(&self, t: f64) -> ScalarField {
        self.eval(t, |_, _, s| I * s)
    }
}

fn rel(a: &ScalarField, b: &ScalarField) -> f64 {
    (&a.to_spectral() - &b.to_spectral()).l2_norm() / b.l2_norm()
}

#[test]
fn half_wave_duhamel_reproduces_manufactured_solution_at_fourth_order() {
    let m = Manufactured::new(Grid2D::square(16, 16.0).unwrap());
    let t = 1.0;
    let exact = m.phi(t);
    let mut errs = Vec::new();
    for nodes in [17, 33, 65] {
        let (phi, phit) =
            divergence_form_solve(&m.phi(0.0), &m.phit(0.0), &m.series(t, nodes)).unwrap();
        errs.push(rel(&phi, &exact));
        assert!(rel(&phit, &m.phit(t)) < 1e-5);
    }
    let order = (errs[1] / errs[2]).log2();
    assert!(errs[2] < 1e-8, "{errs:?}");
    assert!(order > 3.5, "order {order}, {errs:?}");
}

#[test]
fn sine_kernel_oracle_agrees_with_half_wave_duhamel() {
    let m = Manufactured::new(Grid2D::square(16, 16.0).unwrap());
    let t = 1.0;
    let f = m.series(t, 65);
    let (a, at) = divergence_form_solve(&m.phi(0.0), &m.phit(0.0), &f).unwrap();
    let (b, bt) = reference_wave_solve(&m.phi(0.0), &m.phit(0.0), &f).unwrap();
    assert!(rel(&a, &b) < 1e-8, "{}", rel(&a, &b));
    assert!(rel(&at, &bt) < 1e-7);
    assert!(rel(&b, &m.phi(t)) < 1e-8);
}

#[test]
fn klein_gordon_duhamel_reproduces_manufactured_solution() {
    let grid = Grid2D::square(16, 16.0).unwrap();
    let k = grid.fundamental();
    // phi = e^{i(sigma t + xi.x)} solves (box + 1) phi = (1 + |xi|^2 - sigma^2) phi
    let (k1, k2, sigma) = (2i64, -1i64, 0.8);
    let (x1, x2) = (k * k1 as f64, k * k2 as f64);
    let coef = 1.0 + x1 * x1 + x2 * x2 - sigma * sigma;
    let at = |t: f64, c: Complex64| {
        ScalarField::from_fn(grid, |x, y| {
            c * Complex64::from_polar(1.0, sigma * t + x1 * x + x2 * y)
        })
    };
    let nodes = 65;
    let dt = 1.0 / (nodes - 1) as f64;
    let f = TimeSeries::new(
        dt,
        (0..nodes).map(|j| at(j as f64 * dt, coef.into())).collect(),
    );
    let (phi, phit) = klein_gordon_solve(&at(0.0, 1.0.into()), &at(0.0, I * sigma), &f).unwrap();
    assert!(rel(&phi, &at(1.0, 1.0.into())) < 1e-8);
    assert!(rel(&phit, &at(1.0, I * sigma)) < 1e-8);
}

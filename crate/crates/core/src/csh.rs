//! Chern-Simons-Higgs system in Lorenz gauge (`kappa = 1`) with the
//! artificial mass:
//!
//! ```text
//! box A_nu = d^mu N_{mu nu},   N_{mu nu} = 2 eps_{mu nu lambda} Im(conj(phi) D^lambda phi)
//! (box + 1) phi = 2i A^mu d_mu phi + A^mu A_mu phi + phi
//! ```
//!
//! `A` is carried as in the Dirac system and `phi` as Klein-Gordon
//! half-waves `phi_pm = (phi -+ phi_t/(i<xi>))/2` in stack slots 6 and 7.

use ndarray::{Array2, Zip};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::diagnostics::DiagnosticsRecord;
use crate::error::{Error, Result};
use crate::fft;
use crate::field::{OneForm, Representation, ScalarField};
use crate::gauge::{
    check_scaling, curvature_residuals, eps_form, gauge_branches, gauge_from_stack,
    initial_gauge_waves, potential, push_gauge, second_difference, shift_time, sidx, step_count,
    wave_residual2, write_gauge_source, Form, I,
};
use crate::grid::Grid2D;
use crate::integrator::{evolve_stack, picard_map, Branch, HalfWaveSystem, ModeStack, Scheme};
use crate::propagators::{Dispersion, HalfWaveState};
use crate::spectral::{
    curl, dealias, derivative, riesz_lower_symbol, Multiplier, Sign, SymbolTables,
};

pub use crate::csd::{EquationResidual, ScalingCheck};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CshOptions {
    /// Two-thirds rule on every product; cubic terms pairwise.
    pub dealias: bool,
    /// When off, the Klein-Gordon equation sees `A = 0` and reduces to `box phi = 0`.
    pub gauge_coupling: bool,
}

impl Default for CshOptions {
    fn default() -> Self {
        Self {
            dealias: true,
            gauge_coupling: true,
        }
    }
}

/// Constrained Cauchy data `(a_mu, f, g)` with `phi(0) = f`, `d_t phi(0) = g`.
#[derive(Debug, Clone)]
pub struct CshInitialData {
    pub a: OneForm,
    pub f: ScalarField,
    pub g: ScalarField,
    /// `|mean|` of the constraint source, which no periodic `a` can meet.
    pub mean_defect: f64,
}

/// `2 Im(conj(f) (g - i a_0 f))` on the dealiased band.
pub fn constraint_source(f: &ScalarField, g: &ScalarField, a0: &ScalarField) -> ScalarField {
    let (f, g, a0) = (f.to_physical(), g.to_physical(), a0.to_physical());
    let grid = f.grid();
    let mut out = ScalarField::zeros(grid, Representation::Physical);
    Zip::from(out.values_mut())
        .and(f.values())
        .and(g.values())
        .and(a0.values())
        .for_each(|o, &f, &g, &a| *o = (2.0 * (f.conj() * (g - I * a * f)).im).into());
    dealias(&out)
}

/// Replaces `g` by `g + i beta f` so the constraint source has zero mean.
/// Returns `g` unchanged when `f` vanishes.
pub fn zero_mean_velocity(f: &ScalarField, g: &ScalarField, a0: &ScalarField) -> ScalarField {
    let f = f.to_physical();
    let mass = f.values().iter().map(|z| z.norm_sqr()).sum::<f64>() / f.grid().len() as f64;
    let g = g.to_physical();
    if mass == 0.0 {
        return g;
    }
    let beta = -0.5 * constraint_source(&f, &g, a0).mean().re / mass;
    let mut out = g;
    Zip::from(out.values_mut())
        .and(f.values())
        .for_each(|o, &f| *o += I * beta * f);
    out
}

/// Builds `a_j = a_j^df + d_j chi` with `curl a` equal to the zero-mean part
/// of the constraint source.
pub fn build_initial_data(
    f: &ScalarField,
    g: &ScalarField,
    a0: &ScalarField,
    chi: &ScalarField,
) -> Result<CshInitialData> {
    let grid = f.grid();
    if [g.grid(), a0.grid(), chi.grid()].iter().any(|&h| h != grid) {
        return Err(Error::ShapeMismatch(
            "initial data on different grids".into(),
        ));
    }
    let src = constraint_source(f, g, a0);
    let mean = src.mean();
    let c = src.map(|z| z - mean);
    let lap = Multiplier::InverseNegLaplacian;
    let df1 = crate::spectral::apply_multiplier(&derivative(&c, 2), lap);
    let df2 = crate::spectral::apply_multiplier(&derivative(&c, 1).scaled((-1.0).into()), lap);
    let real = |f: ScalarField| f.to_physical().map(|z| Complex64::new(z.re, 0.0));
    Ok(CshInitialData {
        a: OneForm::new(
            real(a0.clone()),
            real(&df1 + &derivative(chi, 1)),
            real(&df2 + &derivative(chi, 2)),
        )?,
        f: f.to_physical(),
        g: g.to_physical(),
        mean_defect: mean.norm(),
    })
}

/// RMS of `curl a - 2 Im(conj(f)(g - i a_0 f))` minus its unattainable mean.
pub fn constraint_defect(data: &CshInitialData) -> f64 {
    let [a0, a1, a2] = &data.a.comps;
    let src = constraint_source(&data.f, &data.g, a0);
    let mean = src.mean();
    (&curl(a1, a2).to_physical() - &src.map(|z| z - mean).to_physical()).rms()
}

#[derive(Debug, Clone, PartialEq)]
pub struct CshState {
    pub a: [HalfWaveState; 3],
    pub phi: HalfWaveState,
    pub time: f64,
}

impl CshState {
    pub fn grid(&self) -> Grid2D {
        self.phi.grid()
    }

    pub fn potential(&self) -> OneForm {
        let c = |nu: usize| self.a[nu].recombine().0.into_physical();
        OneForm::new(c(0), c(1), c(2)).expect("same grid")
    }

    /// `(phi, d_t phi)`, physical.
    pub fn scalar(&self) -> (ScalarField, ScalarField) {
        let (p, v) = self.phi.recombine();
        (p.into_physical(), v.into_physical())
    }
}

pub fn initial_half_waves(data: &CshInitialData) -> Result<CshState> {
    Ok(CshState {
        a: initial_gauge_waves(&data.a)?,
        phi: HalfWaveState::split(&data.f, &data.g, Dispersion::Massive)?,
        time: 0.0,
    })
}

fn phi_slot(s: Sign) -> usize {
    6 + sidx(s)
}

pub struct CshSystem {
    opts: CshOptions,
    tables: SymbolTables,
    branches: Vec<Branch>,
    /// `(+-i) R_{+-,mu} |xi| - (+-i) E_mu`, so `d_mu phi = sum_pm table * phi_pm`.
    deriv: [[Array2<Complex64>; 2]; 3],
}

impl CshSystem {
    pub fn new(grid: Grid2D, opts: CshOptions) -> Self {
        let mut branches = gauge_branches();
        for s in Sign::BOTH {
            branches.push(Branch {
                sign: s,
                dispersion: Dispersion::Massive,
            });
        }
        let deriv = std::array::from_fn(|mu| {
            [Sign::Plus, Sign::Minus].map(|s| {
                Array2::from_shape_fn(grid.shape(), |(i1, i2)| {
                    let (x1, x2) = grid.frequency(i1, i2);
                    let si = I * s.value();
                    let e = Multiplier::ErrorOp(mu).symbol(x1, x2);
                    si * riesz_lower_symbol(s, mu, x1, x2) * x1.hypot(x2) - si * e
                })
            })
        });
        Self {
            opts,
            tables: SymbolTables::new(grid),
            branches,
            deriv,
        }
    }

    pub fn options(&self) -> CshOptions {
        self.opts
    }

    pub fn stack(&self, st: &CshState) -> ModeStack {
        let mut fields = Vec::with_capacity(8);
        push_gauge(&mut fields, &st.a);
        fields.push(st.phi.plus.to_spectral().into_values());
        fields.push(st.phi.minus.to_spectral().into_values());
        ModeStack {
            fields,
            drift: st.a.iter().map(|hw| hw.drift).collect(),
        }
    }

    pub fn state(&self, u: &ModeStack, time: f64) -> CshState {
        let grid = self.tables.grid;
        let sf = |k: usize| {
            ScalarField::from_values(grid, Representation::Spectral, u.fields[k].clone())
                .expect("stack shape")
        };
        CshState {
            a: gauge_from_stack(u, sf),
            phi: HalfWaveState {
                plus: sf(phi_slot(Sign::Plus)),
                minus: sf(phi_slot(Sign::Minus)),
                dispersion: Dispersion::Massive,
                drift: Complex64::default(),
            },
            time,
        }
    }

    fn to_physical(&self, a: &Array2<Complex64>) -> Array2<Complex64> {
        let mut b = a.clone();
        fft::inverse2(&mut b);
        b
    }

    fn to_spectral(&self, mut a: Array2<Complex64>) -> Array2<Complex64> {
        fft::forward2(&mut a);
        if self.opts.dealias {
            crate::spectral::dealias_in_place(&mut a, &self.tables.mask);
        }
        a
    }

    /// Band-limited pointwise product of physical arrays.
    fn product(&self, a: &Array2<Complex64>, b: &Array2<Complex64>) -> Array2<Complex64> {
        self.to_physical(&self.to_spectral(a * b))
    }

    /// Spectral `d_mu phi` from the half-waves.
    fn phi_derivatives(&self, u: &ModeStack) -> [Array2<Complex64>; 3] {
        let (p, m) = (
            &u.fields[phi_slot(Sign::Plus)],
            &u.fields[phi_slot(Sign::Minus)],
        );
        std::array::from_fn(|mu| &self.deriv[mu][0] * p + &self.deriv[mu][1] * m)
    }

    fn phi_spectral(&self, u: &ModeStack) -> Array2<Complex64> {
        &u.fields[phi_slot(Sign::Plus)] + &u.fields[phi_slot(Sign::Minus)]
    }

    /// Physical `(A_mu, phi, d_mu phi)`.
    fn fields(
        &self,
        u: &ModeStack,
    ) -> (
        [Array2<Complex64>; 3],
        Array2<Complex64>,
        [Array2<Complex64>; 3],
    ) {
        let a = potential(u).map(|x| self.to_physical(&x));
        let phi = self.to_physical(&self.phi_spectral(u));
        let d = self.phi_derivatives(u).map(|x| self.to_physical(&x));
        (a, phi, d)
    }

    /// `J^lambda = Im(conj(phi) D^lambda phi)`, spectral, with `D = d - iA`.
    fn current(
        &self,
        a: &[Array2<Complex64>; 3],
        phi: &Array2<Complex64>,
        d: &[Array2<Complex64>; 3],
    ) -> [Array2<Complex64>; 3] {
        let rho = self.product(&phi.mapv(|z| z.conj()), phi);
        std::array::from_fn(|la| {
            // D^0 = D_0, D^k = -D_k
            let sign = if la == 0 { 1.0 } else { -1.0 };
            let mut im = phi.mapv(|z| z.conj()) * &d[la];
            im.mapv_inplace(|z| z.im.into());
            let a_rho = &a[la] * &rho;
            self.to_spectral((im - a_rho.mapv(|z| Complex64::from(z.re))) * Complex64::from(sign))
        })
    }

    fn n_form(j: &[Array2<Complex64>; 3]) -> Form {
        eps_form(2.0, j)
    }

    /// Spectral `2i A^mu d_mu phi + A^mu A_mu phi + phi`.
    fn kg_source(
        &self,
        u: &ModeStack,
        a: &[Array2<Complex64>; 3],
        phi: &Array2<Complex64>,
        d: &[Array2<Complex64>; 3],
    ) -> Array2<Complex64> {
        let mut out = self.phi_spectral(u);
        if !self.opts.gauge_coupling {
            return out;
        }
        let mut lin = Array2::<Complex64>::zeros(phi.dim());
        let mut sq = Array2::<Complex64>::zeros(phi.dim());
        for mu in 0..3 {
            let g = if mu == 0 { 1.0 } else { -1.0 };
            Zip::from(&mut lin)
                .and(&a[mu])
                .and(&d[mu])
                .for_each(|o, &a, &d| *o += 2.0 * I * g * a * d);
            Zip::from(&mut sq)
                .and(&a[mu])
                .for_each(|o, &a| *o += g * a * a);
        }
        let sq = self.to_physical(&self.to_spectral(sq));
        out += &self.to_spectral(lin);
        out += &self.to_spectral(sq * phi);
        out
    }

    /// `(N_{mu nu}, Klein-Gordon source)` at a state, physical.
    pub fn nonlinearities(&self, st: &CshState) -> ([[ScalarField; 3]; 3], ScalarField) {
        let u = self.stack(st);
        let (a, phi, d) = self.fields(&u);
        let n = Self::n_form(&self.current(&a, &phi, &d));
        let f = self.kg_source(&u, &a, &phi, &d);
        let grid = self.tables.grid;
        let sf = |x: &Array2<Complex64>| {
            ScalarField::from_values(grid, Representation::Spectral, x.clone())
                .expect("shape")
                .into_physical()
        };
        (
            std::array::from_fn(|mu| std::array::from_fn(|nu| sf(&n[mu][nu]))),
            sf(&f),
        )
    }

    /// `1/2 int sum_mu |D_mu phi|^2`.
    pub fn energy(&self, st: &CshState) -> f64 {
        self.energy_of(&self.stack(st))
    }

    fn energy_of(&self, u: &ModeStack) -> f64 {
        let (a, phi, d) = self.fields(u);
        let grid = self.tables.grid;
        let mut sum = 0.0;
        for mu in 0..3 {
            let ap = if self.opts.gauge_coupling {
                self.product(&a[mu], &phi)
            } else {
                Array2::zeros(phi.dim())
            };
            sum += Zip::from(&d[mu])
                .and(&ap)
                .fold(0.0, |acc, &d, &ap| acc + (d - I * ap).norm_sqr());
        }
        0.5 * sum * grid.cell_area()
    }

    /// `1/2 sum_xi (omega^2 |phi|^2 + |phi_t|^2)` times the area: conserved
    /// by the unforced flow (`Massive`) and by `box phi = 0` (`Massless`).
    pub fn quadratic_energy(&self, st: &CshState, weight: Dispersion) -> f64 {
        let (p, v) = st.phi.recombine();
        let w = weight.table(self.tables.grid);
        let s = Zip::from(p.values())
            .and(v.values())
            .and(&w)
            .fold(0.0, |acc, p, v, &w| {
                acc + w * w * p.norm_sqr() + v.norm_sqr()
            });
        0.5 * s * self.tables.grid.area()
    }

    pub fn diagnostics(&self, st: &CshState) -> DiagnosticsRecord {
        self.diagnostics_of(&self.stack(st), st.time)
    }

    fn diagnostics_of(&self, u: &ModeStack, t: f64) -> DiagnosticsRecord {
        let (a, phi, d) = self.fields(u);
        let n = Self::n_form(&self.current(&a, &phi, &d));
        let c = curvature_residuals(u, &n, &self.tables);
        DiagnosticsRecord {
            t,
            conserved: self.energy_of(u),
            gauge_res: c.gauge,
            f01_res: c.f01,
            f02_res: c.f02,
            f12_res: c.f12,
            mean_defect: c.mean_defect,
        }
    }

    pub fn evolve(
        &self,
        st: &CshState,
        t: f64,
        dt: f64,
        scheme: Scheme,
        sample_every: usize,
    ) -> Result<Vec<CshState>> {
        let steps = step_count(t, dt)?;
        let u0 = self.stack(st);
        let out = evolve_stack(self, &u0, dt, steps, scheme, sample_every)
            .map_err(|e| shift_time(e, st.time))?;
        Ok(out
            .into_iter()
            .map(|(k, u)| self.state(&u, st.time + k as f64 * dt))
            .collect())
    }

    pub fn run_diagnostics(
        &self,
        st: &CshState,
        t: f64,
        dt: f64,
        scheme: Scheme,
        sample_every: usize,
    ) -> Result<Vec<DiagnosticsRecord>> {
        let steps = step_count(t, dt)?;
        let u0 = self.stack(st);
        let out = evolve_stack(self, &u0, dt, steps, scheme, sample_every)
            .map_err(|e| shift_time(e, st.time))?;
        Ok(out
            .iter()
            .map(|(k, u)| self.diagnostics_of(u, st.time + *k as f64 * dt))
            .collect())
    }

    pub fn picard_step(&self, traj: &[CshState], dt: f64) -> Result<Vec<CshState>> {
        let first = traj
            .first()
            .ok_or_else(|| Error::Precondition("empty trajectory".into()))?;
        let stacks: Vec<ModeStack> = traj.iter().map(|s| self.stack(s)).collect();
        let next = picard_map(self, &stacks[0], dt, &stacks)?;
        Ok(next
            .iter()
            .enumerate()
            .map(|(k, u)| self.state(u, first.time + k as f64 * dt))
            .collect())
    }

    /// Residuals of `box phi = 2i A^mu d_mu phi + A^mu A_mu phi` and of the
    /// gauge-field equation at the middle of five states spaced by `dt`.
    pub fn equation_residual(&self, window: &[CshState], dt: f64) -> Result<EquationResidual> {
        if window.len() != 5 {
            return Err(Error::Precondition(
                "equation residual needs five states".into(),
            ));
        }
        let u: Vec<ModeStack> = window.iter().map(|s| self.stack(s)).collect();
        let mid = &u[2];
        let (a, phi, d) = self.fields(mid);
        let mut r = second_difference(
            &u.iter().map(|s| self.phi_spectral(s)).collect::<Vec<_>>(),
            dt,
        );
        let f = self.kg_source(mid, &a, &phi, &d);
        let p = self.phi_spectral(mid);
        // box phi = d_t^2 phi + |xi|^2 phi; the artificial mass cancels against the source's phi
        Zip::from(&mut r)
            .and(&p)
            .and(&f)
            .and(&self.tables.abs)
            .for_each(|z, &p, &f, &w| {
                *z += w * w * p - (f - p);
            });
        let kg = r.iter().map(|z| z.norm_sqr()).sum::<f64>();

        let ns: Vec<Form> = u
            .iter()
            .map(|s| {
                let (a, phi, d) = self.fields(s);
                Self::n_form(&self.current(&a, &phi, &d))
            })
            .collect();
        let pots: Vec<[Array2<Complex64>; 3]> = u.iter().map(potential).collect();
        let mut wave = 0.0;
        for nu in 0..3 {
            let a: Vec<_> = pots.iter().map(|p| p[nu].clone()).collect();
            let n0: Vec<_> = ns.iter().map(|n| n[0][nu].clone()).collect();
            wave += wave_residual2(&a, &n0, &ns[2], nu, dt, &self.tables);
        }
        Ok(EquationResidual {
            dirac: kg.sqrt(),
            wave: wave.sqrt(),
        })
    }

    /// As the Dirac scaling check with `phi -> lambda^{1/2} phi(lambda t, lambda x)`;
    /// the predicted ratios are `lambda^{5/2}` and `lambda^3`.
    pub fn scaling_check(
        &self,
        st: &CshState,
        lambda: f64,
        dt: f64,
        steps: usize,
    ) -> Result<ScalingCheck> {
        check_scaling(lambda, 0.0)?;
        let grid = self.tables.grid.rescaled(lambda)?;
        let scaled_sys = CshSystem::new(grid, self.opts);
        let mut u = self.stack(st);
        for f in &mut u.fields[..6] {
            f.mapv_inplace(|z| z * lambda);
        }
        for d in &mut u.drift {
            *d *= lambda * lambda;
        }
        let (p, v) = st.phi.recombine();
        let relabel = |f: &ScalarField, c: f64| {
            ScalarField::from_values(grid, Representation::Spectral, f.values().mapv(|z| z * c))
                .expect("shape")
        };
        let phi = HalfWaveState::split(
            &relabel(&p, lambda.sqrt()),
            &relabel(&v, lambda.powf(1.5)),
            Dispersion::Massive,
        )?;
        u.fields[6] = phi.plus.into_values();
        u.fields[7] = phi.minus.into_values();
        let scaled = scaled_sys.state(&u, st.time / lambda);
        let residual = |sys: &CshSystem, s: &CshState, h: f64| -> Result<EquationResidual> {
            let traj = sys.evolve(s, (steps + 4) as f64 * h, h, Scheme::ExponentialRk4, 1)?;
            sys.equation_residual(&traj[steps..steps + 5], h)
        };
        Ok(ScalingCheck {
            lambda,
            original: residual(self, st, dt)?,
            rescaled: residual(&scaled_sys, &scaled, dt / lambda)?,
        })
    }
}

impl HalfWaveSystem for CshSystem {
    fn grid(&self) -> Grid2D {
        self.tables.grid
    }

    fn branches(&self) -> &[Branch] {
        &self.branches
    }

    fn source(&self, u: &ModeStack) -> ModeStack {
        let (a, phi, d) = self.fields(u);
        let n = Self::n_form(&self.current(&a, &phi, &d));
        let mut out = u.zeros_like();
        write_gauge_source(&mut out, &n, &u.drift, &self.tables);
        let f = self.kg_source(u, &a, &phi, &d);
        for s in Sign::BOTH {
            // s (i/2) F / <xi>
            let c = 0.5 * s.value() * I;
            Zip::from(&mut out.fields[phi_slot(s)])
                .and(&f)
                .and(&self.tables.bracket)
                .for_each(|o, &f, &w| *o = c * f / w);
        }
        out
    }
}

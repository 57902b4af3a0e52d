//! Chern-Simons-Dirac system in Lorenz gauge (`kappa = 1`):
//!
//! ```text
//! box A_nu = d^mu N_{mu nu},   N_{mu nu} = -2 eps_{mu nu lambda} psi^dag alpha^lambda psi
//! d_t psi = -i (alpha . xi + m beta) psi - i M,   M = -alpha^mu A_mu psi
//! ```
//!
//! Each `A_nu` is carried as massless half-waves of `(A_nu, d_t A_nu - N_{0 nu})`
//! and the spinor as `psi_pm = Pi_pm psi`.

use ndarray::{Array2, Zip};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::diagnostics::DiagnosticsRecord;
use crate::dirac::{projection, Matrix2C};
use crate::error::{Error, Result};
use crate::fft;
use crate::field::{OneForm, Representation, ScalarField, SpinorField};
use crate::gauge::{
    curvature_residuals, eps_form, first_difference, gauge_branches, gauge_from_stack,
    initial_gauge_waves, potential, push_gauge, shift_time, sidx, wave_residual2,
    write_gauge_source, Form, I,
};
use crate::grid::Grid2D;
use crate::integrator::{evolve_stack, picard_map, Branch, HalfWaveSystem, ModeStack, Scheme};
use crate::propagators::{Dispersion, HalfWaveState};
use crate::spectral::{apply_inverse, curl, dealias, derivative, Multiplier, Sign, SymbolTables};

pub use crate::gauge::{levi_civita, step_count};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CsdOptions {
    pub mass: f64,
    /// Two-thirds rule on every quadratic product.
    pub dealias: bool,
    /// When off, the Dirac equation sees `A = 0` (the gauge field still responds).
    pub gauge_coupling: bool,
}

impl Default for CsdOptions {
    fn default() -> Self {
        Self {
            mass: 0.0,
            dealias: true,
            gauge_coupling: true,
        }
    }
}

/// Constrained Cauchy data `(a_mu, psi_0)`.
#[derive(Debug, Clone)]
pub struct CsdInitialData {
    pub a: OneForm,
    pub psi: SpinorField,
    /// `2 |mean psi^dag psi|`: the part of the constraint no periodic `a` can meet.
    pub mean_defect: f64,
}

/// Builds `a_j = a_j^df + d_j chi` with `curl a = -2 (psi^dag psi - mean)`.
/// The density is taken on the dealiased band, matching the dynamics.
pub fn build_initial_data(
    psi0: &SpinorField,
    a0: &ScalarField,
    chi: &ScalarField,
) -> Result<CsdInitialData> {
    let grid = psi0.grid();
    if a0.grid() != grid || chi.grid() != grid {
        return Err(Error::ShapeMismatch(
            "initial data on different grids".into(),
        ));
    }
    let rho = dealias(&psi0.density());
    let mean = rho.mean();
    let c = rho.map(|z| -2.0 * (z - mean));
    // (-Delta)^{-1} (d2 c, -d1 c) has curl c
    let d2c = derivative(&c, 2);
    let d1c = derivative(&c, 1).scaled((-1.0).into());
    let lap = Multiplier::InverseNegLaplacian;
    let df1 = crate::spectral::apply_multiplier(&d2c, lap);
    let df2 = crate::spectral::apply_multiplier(&d1c, lap);
    let real = |f: ScalarField| f.to_physical().map(|z| Complex64::new(z.re, 0.0));
    let a1 = real(&df1 + &derivative(chi, 1));
    let a2 = real(&df2 + &derivative(chi, 2));
    let a0 = real(a0.clone());
    Ok(CsdInitialData {
        a: OneForm::new(a0, a1, a2)?,
        psi: psi0.to_physical(),
        mean_defect: 2.0 * mean.norm(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CsdState {
    pub a: [HalfWaveState; 3],
    pub psi_plus: SpinorField,
    pub psi_minus: SpinorField,
    pub time: f64,
}

impl CsdState {
    pub fn grid(&self) -> Grid2D {
        self.psi_plus.grid()
    }

    /// `A_nu`, physical.
    pub fn potential(&self) -> OneForm {
        let c = |nu: usize| self.a[nu].recombine().0.into_physical();
        OneForm::new(c(0), c(1), c(2)).expect("same grid")
    }

    /// `psi = psi_+ + psi_-`, spectral.
    pub fn spinor(&self) -> SpinorField {
        self.psi_plus.try_add(&self.psi_minus).expect("same grid")
    }

    pub fn half(&self, s: Sign) -> &SpinorField {
        match s {
            Sign::Plus => &self.psi_plus,
            Sign::Minus => &self.psi_minus,
        }
    }
}

/// Half-wave state from constrained data. The velocity of `A_nu` at `t = 0`
/// is `d_t A_0 = -d^l a_l`, `d_t A_j = d_j a_0 + N_{0j}`, so the divergence-form
/// velocities are `(-d^l a_l, d_1 a_0, d_2 a_0)`.
pub fn initial_half_waves(data: &CsdInitialData) -> Result<CsdState> {
    let a = initial_gauge_waves(&data.a)?;
    let psi = data.psi.to_spectral();
    Ok(CsdState {
        a,
        psi_plus: crate::dirac::project(Sign::Plus, &psi),
        psi_minus: crate::dirac::project(Sign::Minus, &psi),
        time: 0.0,
    })
}

/// Stack slot of component `c` of `psi_s`.
fn psi_slot(s: Sign, c: usize) -> usize {
    6 + 2 * sidx(s) + c
}

/// Equation residuals on a trajectory, RMS over the box.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EquationResidual {
    pub dirac: f64,
    pub wave: f64,
}

/// Residuals of a trajectory and of its rescaling by `lambda`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingCheck {
    pub lambda: f64,
    pub original: EquationResidual,
    pub rescaled: EquationResidual,
}

impl ScalingCheck {
    /// Rescaled over original residual, divided by the predicted `lambda^2`
    /// (Dirac) and `lambda^3` (wave).
    pub fn normalized_ratios(&self) -> (f64, f64) {
        (
            self.rescaled.dirac / self.original.dirac / self.lambda.powi(2),
            self.rescaled.wave / self.original.wave / self.lambda.powi(3),
        )
    }
}

pub struct CsdSystem {
    opts: CsdOptions,
    tables: SymbolTables,
    branches: Vec<Branch>,
    proj: [Array2<Matrix2C>; 2],
}

impl CsdSystem {
    pub fn new(grid: Grid2D, opts: CsdOptions) -> Self {
        let mut branches = gauge_branches();
        for s in Sign::BOTH {
            for _c in 0..2 {
                branches.push(Branch {
                    sign: s,
                    dispersion: Dispersion::Massless,
                });
            }
        }
        let proj = [Sign::Plus, Sign::Minus].map(|s| {
            Array2::from_shape_fn(grid.shape(), |(i1, i2)| {
                let (x1, x2) = grid.frequency(i1, i2);
                projection(s, x1, x2)
            })
        });
        Self {
            opts,
            tables: SymbolTables::new(grid),
            branches,
            proj,
        }
    }

    pub fn options(&self) -> CsdOptions {
        self.opts
    }

    pub fn stack(&self, st: &CsdState) -> ModeStack {
        let mut fields = Vec::with_capacity(10);
        push_gauge(&mut fields, &st.a);
        for s in Sign::BOTH {
            let p = st.half(s).to_spectral();
            fields.push(p.up.into_values());
            fields.push(p.down.into_values());
        }
        ModeStack {
            fields,
            drift: st.a.iter().map(|hw| hw.drift).collect(),
        }
    }

    pub fn state(&self, u: &ModeStack, time: f64) -> CsdState {
        let grid = self.tables.grid;
        let sf = |k: usize| {
            ScalarField::from_values(grid, Representation::Spectral, u.fields[k].clone())
                .expect("stack shape")
        };
        let a = gauge_from_stack(u, sf);
        let half = |s: Sign| SpinorField {
            up: sf(psi_slot(s, 0)),
            down: sf(psi_slot(s, 1)),
        };
        CsdState {
            a,
            psi_plus: half(Sign::Plus),
            psi_minus: half(Sign::Minus),
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

    fn sum_pair(&self, u: &ModeStack, p: usize, m: usize) -> Array2<Complex64> {
        &u.fields[p] + &u.fields[m]
    }

    fn potential_physical(&self, u: &ModeStack) -> [Array2<Complex64>; 3] {
        potential(u).map(|a| self.to_physical(&a))
    }

    fn spinor_physical(&self, u: &ModeStack) -> [Array2<Complex64>; 2] {
        std::array::from_fn(|c| {
            self.to_physical(&self.sum_pair(u, psi_slot(Sign::Plus, c), psi_slot(Sign::Minus, c)))
        })
    }

    /// `J^lambda = psi^dag alpha^lambda psi`, spectral.
    fn current(&self, psi: &[Array2<Complex64>; 2]) -> [Array2<Complex64>; 3] {
        let mut j = [
            Array2::zeros(psi[0].dim()),
            Array2::zeros(psi[0].dim()),
            Array2::zeros(psi[0].dim()),
        ];
        Zip::from(&mut j[0])
            .and(&psi[0])
            .and(&psi[1])
            .for_each(|o, a, b| {
                *o = (a.norm_sqr() + b.norm_sqr()).into();
            });
        let [_, j1, j2] = &mut j;
        Zip::from(j1)
            .and(j2)
            .and(&psi[0])
            .and(&psi[1])
            .for_each(|o1, o2, a, b| {
                let z = a.conj() * b;
                *o1 = (2.0 * z.re).into();
                *o2 = (2.0 * z.im).into();
            });
        j.map(|x| self.to_spectral(x))
    }

    /// `N_{mu nu}` from a spectral current.
    fn n_form(j: &[Array2<Complex64>; 3]) -> Form {
        eps_form(-2.0, j)
    }

    /// `M = -alpha^mu A_mu psi`, spectral.
    fn m_term(
        &self,
        a: &[Array2<Complex64>; 3],
        psi: &[Array2<Complex64>; 2],
    ) -> [Array2<Complex64>; 2] {
        let mut m = [Array2::zeros(psi[0].dim()), Array2::zeros(psi[0].dim())];
        for c in 0..2 {
            for (ix, o) in m[c].indexed_iter_mut() {
                let (a0, a1, a2) = (a[0][ix], a[1][ix], a[2][ix]);
                let (own, other) = (psi[c][ix], psi[1 - c][ix]);
                // alpha^1 = sigma^1, alpha^2 = sigma^2
                let s2 = if c == 0 { -I } else { I };
                *o = -(a0 * own + a1 * other + s2 * a2 * other);
            }
        }
        m.map(|x| self.to_spectral(x))
    }

    /// `(N_{mu nu}, M)` at a state, physical.
    pub fn nonlinearities(&self, st: &CsdState) -> ([[ScalarField; 3]; 3], SpinorField) {
        let u = self.stack(st);
        let psi = self.spinor_physical(&u);
        let a = self.potential_physical(&u);
        let n = Self::n_form(&self.current(&psi));
        let m = self.m_term(&a, &psi);
        let grid = self.tables.grid;
        let sf = |x: &Array2<Complex64>| {
            ScalarField::from_values(grid, Representation::Spectral, x.clone())
                .expect("shape")
                .into_physical()
        };
        (
            std::array::from_fn(|mu| std::array::from_fn(|nu| sf(&n[mu][nu]))),
            SpinorField {
                up: sf(&m[0]),
                down: sf(&m[1]),
            },
        )
    }

    pub fn charge(&self, st: &CsdState) -> f64 {
        self.charge_of(&self.stack(st))
    }

    fn charge_of(&self, u: &ModeStack) -> f64 {
        let area = self.tables.grid.area();
        (0..2)
            .map(|c| {
                self.sum_pair(u, psi_slot(Sign::Plus, c), psi_slot(Sign::Minus, c))
                    .iter()
                    .map(|z| z.norm_sqr())
                    .sum::<f64>()
            })
            .sum::<f64>()
            * area
    }

    pub fn diagnostics(&self, st: &CsdState) -> DiagnosticsRecord {
        self.diagnostics_of(&self.stack(st), st.time)
    }

    fn diagnostics_of(&self, u: &ModeStack, t: f64) -> DiagnosticsRecord {
        let n = Self::n_form(&self.current(&self.spinor_physical(u)));
        let c = curvature_residuals(u, &n, &self.tables);
        DiagnosticsRecord {
            t,
            conserved: self.charge_of(u),
            gauge_res: c.gauge,
            f01_res: c.f01,
            f02_res: c.f02,
            f12_res: c.f12,
            mean_defect: c.mean_defect,
        }
    }

    pub fn evolve(
        &self,
        st: &CsdState,
        t: f64,
        dt: f64,
        scheme: Scheme,
        sample_every: usize,
    ) -> Result<Vec<CsdState>> {
        let steps = step_count(t, dt)?;
        let u0 = self.stack(st);
        let out = evolve_stack(self, &u0, dt, steps, scheme, sample_every)
            .map_err(|e| shift_time(e, st.time))?;
        Ok(out
            .into_iter()
            .map(|(k, u)| self.state(&u, st.time + k as f64 * dt))
            .collect())
    }

    /// Evolves and records diagnostics every `sample_every` steps.
    pub fn run_diagnostics(
        &self,
        st: &CsdState,
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

    /// One application of the Duhamel map to a trajectory on nodes `k dt`
    /// starting at `traj[0]`.
    pub fn picard_step(&self, traj: &[CsdState], dt: f64) -> Result<Vec<CsdState>> {
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

    /// Residuals of both equations at the middle of five consecutive states
    /// spaced by `dt`, with fourth-order central differences in time.
    pub fn equation_residual(&self, window: &[CsdState], dt: f64) -> Result<EquationResidual> {
        if window.len() != 5 {
            return Err(Error::Precondition(
                "equation residual needs five states".into(),
            ));
        }
        let u: Vec<ModeStack> = window.iter().map(|s| self.stack(s)).collect();
        let d1 = |f: &dyn Fn(&ModeStack) -> Array2<Complex64>| {
            first_difference(&u.iter().map(f).collect::<Vec<_>>(), dt)
        };
        let mid = &u[2];
        let rms2 = |f: &Array2<Complex64>| f.iter().map(|z| z.norm_sqr()).sum::<f64>();
        let xi = &self.tables.xi;

        // Dirac: d_t psi + i (alpha . xi + m beta) psi + i M
        let psi_phys = self.spinor_physical(mid);
        let a_phys = self.potential_physical(mid);
        let m = self.m_term(&a_phys, &psi_phys);
        let psi: [Array2<Complex64>; 2] = std::array::from_fn(|c| {
            self.sum_pair(mid, psi_slot(Sign::Plus, c), psi_slot(Sign::Minus, c))
        });
        let mut dirac = 0.0;
        for c in 0..2 {
            let mut r = d1(&|s: &ModeStack| {
                self.sum_pair(s, psi_slot(Sign::Plus, c), psi_slot(Sign::Minus, c))
            });
            let other = &psi[1 - c];
            let sign_beta = if c == 0 { 1.0 } else { -1.0 };
            Zip::from(&mut r)
                .and(other)
                .and(&psi[c])
                .and(&m[c])
                .and(&xi[0])
                .and(&xi[1])
                .for_each(|z, &o, &p, &mm, &x1, &x2| {
                    // (alpha . xi psi)_up = (x1 - i x2) psi_down, _down = (x1 + i x2) psi_up
                    let ax = if c == 0 {
                        Complex64::new(x1, -x2)
                    } else {
                        Complex64::new(x1, x2)
                    };
                    *z += I * (ax * o + self.opts.mass * sign_beta * p + mm);
                });
            dirac += rms2(&r);
        }

        // wave: d_t^2 A_nu + |xi|^2 A_nu - (d_t N_{0 nu} - d_j N_{j nu})
        let ns: Vec<Form> = u
            .iter()
            .map(|s| Self::n_form(&self.current(&self.spinor_physical(s))))
            .collect();
        let pots: Vec<[Array2<Complex64>; 3]> = u.iter().map(potential).collect();
        let mut wave = 0.0;
        for nu in 0..3 {
            let a: Vec<_> = pots.iter().map(|p| p[nu].clone()).collect();
            let n0: Vec<_> = ns.iter().map(|n| n[0][nu].clone()).collect();
            wave += wave_residual2(&a, &n0, &ns[2], nu, dt, &self.tables);
        }
        Ok(EquationResidual {
            dirac: dirac.sqrt(),
            wave: wave.sqrt(),
        })
    }

    /// Evolves `st` and its rescaling `lambda A(lambda t, lambda x)`,
    /// `lambda psi(lambda t, lambda x)` on the box shrunk by `lambda` with step
    /// `dt / lambda`, then compares the equation residuals at the centre of
    /// the first five states after `steps` steps.
    pub fn scaling_check(
        &self,
        st: &CsdState,
        lambda: f64,
        dt: f64,
        steps: usize,
    ) -> Result<ScalingCheck> {
        crate::gauge::check_scaling(lambda, self.opts.mass)?;
        let grid = self.tables.grid.rescaled(lambda)?;
        let scaled_sys = CsdSystem::new(grid, self.opts);
        let mut u = self.stack(st);
        for f in &mut u.fields {
            f.mapv_inplace(|z| z * lambda);
        }
        for d in &mut u.drift {
            *d *= lambda * lambda;
        }
        let scaled = scaled_sys.state(&u, st.time / lambda);
        let residual = |sys: &CsdSystem, s: &CsdState, h: f64| -> Result<EquationResidual> {
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

impl HalfWaveSystem for CsdSystem {
    fn grid(&self) -> Grid2D {
        self.tables.grid
    }

    fn branches(&self) -> &[Branch] {
        &self.branches
    }

    fn source(&self, u: &ModeStack) -> ModeStack {
        let psi = self.spinor_physical(u);
        let n = Self::n_form(&self.current(&psi));
        let mut out = u.zeros_like();
        write_gauge_source(&mut out, &n, &u.drift, &self.tables);
        let m = if self.opts.gauge_coupling {
            let a = self.potential_physical(u);
            Some(self.m_term(&a, &psi))
        } else {
            None
        };
        let mass = self.opts.mass;
        for s in Sign::BOTH {
            let other = s.flip();
            let proj = &self.proj[sidx(s)];
            for ((i1, i2), p) in proj.indexed_iter() {
                // -i (m beta psi_{-s} + Pi_s M)
                let po = [
                    u.fields[psi_slot(other, 0)][[i1, i2]],
                    u.fields[psi_slot(other, 1)][[i1, i2]],
                ];
                let mut v = [mass * po[0], -mass * po[1]];
                if let Some(m) = &m {
                    let pm = p.apply([m[0][[i1, i2]], m[1][[i1, i2]]]);
                    v[0] += pm[0];
                    v[1] += pm[1];
                }
                out.fields[psi_slot(s, 0)][[i1, i2]] = -I * v[0];
                out.fields[psi_slot(s, 1)][[i1, i2]] = -I * v[1];
            }
        }
        out
    }
}

/// Checks `curl a = -2 (psi^dag psi - mean)` for given data; returns the RMS defect.
pub fn constraint_defect(data: &CsdInitialData) -> f64 {
    let [_, a1, a2] = &data.a.comps;
    let rho = dealias(&data.psi.density());
    let mean = rho.mean();
    let want = rho.map(|z| -2.0 * (z - mean));
    (&curl(a1, a2).to_physical() - &want).rms()
}

/// Dealiased copy of a spinor.
pub fn dealias_spinor(psi: &SpinorField) -> SpinorField {
    SpinorField {
        up: dealias(&psi.up),
        down: dealias(&psi.down),
    }
}

/// `(-Delta)^{-1/2}` on nonzero modes, for building potentials from densities.
pub fn inverse_abs_nabla(f: &ScalarField) -> Result<ScalarField> {
    apply_inverse(f, Multiplier::AbsNabla, true)
}

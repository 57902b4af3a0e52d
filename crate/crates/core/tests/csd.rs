use csgauge_core::csd::{
    build_initial_data, constraint_defect, initial_half_waves, CsdInitialData, CsdOptions,
    CsdState, CsdSystem,
};
use csgauge_core::data::{random_band_limited, Bump};
use csgauge_core::diagnostics::conservation_drift;
use csgauge_core::dirac::project;
use csgauge_core::integrator::{
    evolve_stack, picard_map, picard_solve, trajectory_gap, HalfWaveSystem, ModeStack, Scheme,
};
use csgauge_core::spectral::{
    apply_symbol, curl, derivative, hodge_decompose, riesz, riesz_lower_symbol,
};
use csgauge_core::{Error, Grid2D, Representation, ScalarField, Sign, SpinorField};
use num_complex::Complex64;

fn grid() -> Grid2D {
    Grid2D::square(32, 16.0).unwrap()
}

fn zero(g: Grid2D) -> ScalarField {
    ScalarField::zeros(g, Representation::Physical)
}

fn bumps(g: Grid2D) -> SpinorField {
    let up = Bump::centered(g, 2.0, 0.25).with_momentum(1.0, 0.5).sample(g);
    let down = Bump::centered(g, 1.6, 0.2).with_momentum(-0.5, 1.0).sample(g);
    SpinorField::new(up, down).unwrap()
}

fn small_data(g: Grid2D) -> CsdInitialData {
    let a0 = random_band_limited(g, 3, 0.05, true, 7);
    let chi = random_band_limited(g, 3, 0.05, true, 8);
    build_initial_data(&bumps(g), &a0, &chi).unwrap()
}

fn mean_free(psi: &SpinorField) -> SpinorField {
    let mut p = psi.to_spectral();
    p.up.values_mut()[[0, 0]] = Complex64::default();
    p.down.values_mut()[[0, 0]] = Complex64::default();
    p
}

fn rel(a: &ScalarField, b: &ScalarField) -> f64 {
    (a - b).l2_norm() / b.l2_norm().max(f64::MIN_POSITIVE)
}

#[test]
fn vacuum_data_is_zero() {
    let g = grid();
    let psi = SpinorField::zeros(g, Representation::Physical);
    let d = build_initial_data(&psi, &zero(g), &zero(g)).unwrap();
    assert_eq!(d.mean_defect, 0.0);
    assert!(d.a.comps.iter().all(|c| c.max_abs() == 0.0));
    let st = initial_half_waves(&d).unwrap();
    let sys = CsdSystem::new(g, CsdOptions::default());
    let (n, m) = sys.nonlinearities(&st);
    assert!(n.iter().flatten().all(|f| f.max_abs() == 0.0));
    assert_eq!(m.l2_norm(), 0.0);
    let traj = sys.evolve(&st, 0.25, 1.0 / 64.0, Scheme::ExponentialRk4, 4).unwrap();
    assert!(traj.iter().all(|s| s.spinor().l2_norm() == 0.0));
    let next = sys.picard_step(&traj, 1.0 / 16.0).unwrap();
    assert!(next.iter().all(|s| s.potential().comps.iter().all(|c| c.max_abs() == 0.0)));
}

#[test]
fn pure_gauge_data_is_curl_free() {
    let g = grid();
    let k = g.fundamental();
    let chi = ScalarField::from_fn(g, |x, _| (k * x).cos().into());
    let psi = SpinorField::zeros(g, Representation::Physical);
    let d = build_initial_data(&psi, &zero(g), &chi).unwrap();
    let [_, a1, a2] = &d.a.comps;
    assert!(rel(a1, &derivative(&chi, 1).to_physical()) < 1e-12);
    assert!(a2.max_abs() < 1e-14);
    assert!(curl(a1, a2).max_abs() < 1e-14);
    // signature (+,-,-): d_t A_0(0) = -d^l a_l = +Delta chi
    let st = initial_half_waves(&d).unwrap();
    let (_, v0) = st.a[0].recombine();
    let lap = &derivative(&derivative(&chi, 1), 1) + &derivative(&derivative(&chi, 2), 2);
    assert!(rel(&v0.to_physical(), &lap.to_physical()) < 1e-10);
}

#[test]
fn constraint_is_met_up_to_the_mean() {
    let g = grid();
    let d = small_data(g);
    assert!(constraint_defect(&d) <= 1e-10);
    let avg = d.psi.density().mean().re;
    assert!((d.mean_defect - 2.0 * avg).abs() <= 1e-14 * avg);
    assert!(d.a.imag_ratio() <= 1e-14);
}

#[test]
fn half_waves_recombine_to_the_data() {
    let g = grid();
    let d = small_data(g);
    let st = initial_half_waves(&d).unwrap();
    let a = st.potential();
    for nu in 0..3 {
        assert!(rel(&a.comps[nu], &d.a.comps[nu]) < 1e-10);
    }
    let psi = st.spinor().to_physical();
    assert!(rel(&psi.up, &d.psi.up) < 1e-12);
    assert!(rel(&psi.down, &d.psi.down) < 1e-12);
    // half-waves carry pi_j = d_t A_j - N_{0j} = d_j a_0
    for j in 1..3 {
        let (_, v) = st.a[j].recombine();
        let want = derivative(&d.a.comps[0], j).to_physical();
        assert!(rel(&v.to_physical(), &want) < 1e-10, "component {j}");
    }
    // with N_{0j} added back the gauge and F_{0j} equations hold at t = 0
    let sys = CsdSystem::new(g, CsdOptions::default());
    let r = sys.diagnostics(&st);
    assert!(r.gauge_res < 1e-12 && r.f01_res < 1e-12 && r.f02_res < 1e-12, "{r:?}");
}

#[test]
fn nonlinearities_are_real_and_antisymmetric() {
    let g = grid();
    let sys = CsdSystem::new(g, CsdOptions::default());
    let st = initial_half_waves(&small_data(g)).unwrap();
    let (n, _) = sys.nonlinearities(&st);
    for mu in 0..3 {
        assert_eq!(n[mu][mu].max_abs(), 0.0);
        for nu in 0..3 {
            assert!(n[mu][nu].imag_ratio() <= 1e-10);
            assert!((&n[mu][nu] + &n[nu][mu]).max_abs() <= 1e-15);
        }
    }
}

#[test]
fn constant_potential_gives_minus_c_psi() {
    let g = grid();
    let k = g.fundamental();
    let wave = |c: Complex64| ScalarField::from_fn(g, |x, y| c * Complex64::from_polar(1.0, k * (2.0 * x - y)));
    let psi = SpinorField::new(wave(0.3.into()), wave(Complex64::new(0.0, -0.2))).unwrap();
    let c = 1.7;
    let a0 = ScalarField::from_fn(g, |_, _| c.into());
    let d = build_initial_data(&psi, &a0, &zero(g)).unwrap();
    // |psi|^2 is constant so the spatial potential vanishes
    assert!(d.a.comps[1].max_abs() < 1e-14 && d.a.comps[2].max_abs() < 1e-14);
    let st = initial_half_waves(&d).unwrap();
    let sys = CsdSystem::new(g, CsdOptions::default());
    let (_, m) = sys.nonlinearities(&st);
    assert!(rel(&m.up, &psi.up.scaled((-c).into())) < 1e-12);
    assert!(rel(&m.down, &psi.down.scaled((-c).into())) < 1e-12);
    let none = build_initial_data(&psi, &zero(g), &zero(g)).unwrap();
    let (_, m) = sys.nonlinearities(&initial_half_waves(&none).unwrap());
    assert!(m.l2_norm() < 1e-14);
}

fn charges(sys: &CsdSystem, traj: &[CsdState]) -> Vec<f64> {
    traj.iter().map(|s| sys.charge(s)).collect()
}

#[test]
fn free_dirac_conserves_charge_to_roundoff() {
    let g = grid();
    let st = initial_half_waves(&small_data(g)).unwrap();
    let opts = CsdOptions { gauge_coupling: false, ..Default::default() };
    let sys = CsdSystem::new(g, opts);
    let q = charges(&sys, &sys.evolve(&st, 1.0, 1.0 / 16.0, Scheme::ExponentialRk4, 1).unwrap());
    assert!(q.iter().all(|x| (x - q[0]).abs() <= 1e-12 * q[0]), "{q:?}");
}

#[test]
fn massive_free_dirac_conserves_charge_at_integrator_order() {
    let g = grid();
    let st = initial_half_waves(&small_data(g)).unwrap();
    let sys = CsdSystem::new(g, CsdOptions { mass: 1.0, gauge_coupling: false, ..Default::default() });
    let drift = |dt: f64| {
        let q = charges(&sys, &sys.evolve(&st, 1.0, dt, Scheme::ExponentialRk4, 1).unwrap());
        q.iter().map(|x| (x - q[0]).abs()).fold(0.0, f64::max) / q[0]
    };
    let (coarse, fine) = (drift(1.0 / 8.0), drift(1.0 / 16.0));
    assert!(fine <= 1e-6, "{coarse:e} {fine:e}");
    assert!(fine < coarse || fine <= 1e-13, "{coarse:e} {fine:e}");
    // without mass each half keeps its norm; the mass term moves charge between them
    let end = sys.evolve(&st, 1.0, 1.0 / 16.0, Scheme::ExponentialRk4, 16).unwrap();
    let (a, b) = (end.last().unwrap().psi_plus.l2_norm(), st.psi_plus.l2_norm());
    assert!((a - b).abs() > 1e-3 * b, "{a} {b}");
}

#[test]
fn coupled_flow_keeps_projections_and_real_potential() {
    let g = grid();
    let st = initial_half_waves(&small_data(g)).unwrap();
    for mass in [0.0, 1.0] {
        let sys = CsdSystem::new(g, CsdOptions { mass, ..Default::default() });
        let traj = sys.evolve(&st, 0.5, 1.0 / 64.0, Scheme::ExponentialRk4, 8).unwrap();
        for s in &traj {
            let n = s.spinor().l2_norm();
            for sign in [Sign::Plus, Sign::Minus] {
                // Pi_pm(0) = Id/2 overlap at the zero mode
                let leak = project(sign.flip(), &mean_free(s.half(sign))).l2_norm();
                assert!(leak <= 1e-8 * n, "mass {mass} t {} leak {leak:e}", s.time);
            }
            assert!(s.potential().imag_ratio() <= 1e-10);
        }
        let rows = sys.run_diagnostics(&st, 0.5, 1.0 / 64.0, Scheme::ExponentialRk4, 8).unwrap();
        assert!(conservation_drift(&rows) <= 1e-6);
        assert!(rows.iter().all(|r| r.gauge_res <= 1e-6));
    }
}

#[test]
fn exponential_integrator_is_fourth_order() {
    let g = Grid2D::square(16, 8.0).unwrap();
    let st = initial_half_waves(&small_data(g)).unwrap();
    let sys = CsdSystem::new(g, CsdOptions::default());
    let end = |dt: f64| -> ModeStack {
        let traj = sys.evolve(&st, 0.5, dt, Scheme::ExponentialRk4, 1 << 20).unwrap();
        sys.stack(traj.last().unwrap())
    };
    let runs: Vec<ModeStack> = [1.0 / 4.0, 1.0 / 8.0, 1.0 / 16.0, 1.0 / 32.0].map(end).into();
    let e: Vec<f64> = runs.windows(2).map(|w| w[0].distance(&w[1])).collect();
    let order = (e[1] / e[2]).log2();
    assert!(order > 3.5, "{e:?}");
}

#[test]
fn picard_contracts_and_matches_the_integrator() {
    let g = grid();
    let sys = CsdSystem::new(g, CsdOptions::default());
    let u0 = sys.stack(&initial_half_waves(&small_data(g)).unwrap());
    let h = 1.0 / 64.0;
    let run = picard_solve(&sys, &u0, h, 33, 5).unwrap();
    assert!(run.ratios().iter().all(|&r| r < 1.0), "{:?}", run.ratios());
    let res = trajectory_gap(&picard_map(&sys, &u0, h, &run.trajectory).unwrap(), &run.trajectory);
    assert!(res < 1e-6);
    let rk: Vec<ModeStack> = evolve_stack(&sys, &u0, h, 32, Scheme::ExponentialRk4, 1)
        .unwrap()
        .into_iter()
        .map(|x| x.1)
        .collect();
    assert!(trajectory_gap(&run.trajectory, &rk) < 1e-6);
}

#[test]
fn picard_scheme_agrees_with_rk4() {
    let g = grid();
    let sys = CsdSystem::new(g, CsdOptions::default());
    let st = initial_half_waves(&small_data(g)).unwrap();
    let a = sys.evolve(&st, 0.25, 1.0 / 64.0, Scheme::ExponentialRk4, 16).unwrap();
    let b = sys
        .evolve(&st, 0.25, 1.0 / 64.0, Scheme::Picard { window: 8, iterations: 5 }, 16)
        .unwrap();
    let gap = trajectory_gap(
        &b.iter().map(|s| sys.stack(s)).collect::<Vec<_>>(),
        &a.iter().map(|s| sys.stack(s)).collect::<Vec<_>>(),
    );
    assert!(gap < 1e-6, "{gap:e}");
}

#[test]
fn free_gauge_field_is_a_picard_fixed_point() {
    let g = grid();
    let psi = SpinorField::zeros(g, Representation::Physical);
    let a0 = random_band_limited(g, 3, 0.1, true, 1);
    let chi = random_band_limited(g, 3, 0.1, true, 2);
    let d = build_initial_data(&psi, &a0, &chi).unwrap();
    let sys = CsdSystem::new(g, CsdOptions::default());
    let traj = sys
        .evolve(&initial_half_waves(&d).unwrap(), 0.5, 1.0 / 32.0, Scheme::ExponentialRk4, 1)
        .unwrap();
    let next = sys.picard_step(&traj, 1.0 / 32.0).unwrap();
    let stacks = |t: &[CsdState]| t.iter().map(|s| sys.stack(s)).collect::<Vec<_>>();
    assert!(trajectory_gap(&stacks(&next), &stacks(&traj)) < 1e-13);
}

#[test]
fn scaling_covariance() {
    let g = grid();
    let sys = CsdSystem::new(g, CsdOptions::default());
    let st = initial_half_waves(&small_data(g)).unwrap();
    let one = sys.scaling_check(&st, 1.0, 1.0 / 64.0, 8).unwrap();
    assert_eq!(one.original, one.rescaled);
    let two = sys.scaling_check(&st, 2.0, 1.0 / 64.0, 8).unwrap();
    let (d, w) = two.normalized_ratios();
    assert!((d - 1.0).abs() < 0.05 && (w - 1.0).abs() < 0.05, "{d} {w}");
    assert!(matches!(sys.scaling_check(&st, 3.0, 1.0 / 64.0, 8), Err(Error::InvalidScaling(_))));
    let massive = CsdSystem::new(g, CsdOptions { mass: 1.0, ..Default::default() });
    assert!(matches!(massive.scaling_check(&st, 2.0, 1.0 / 64.0, 8), Err(Error::Precondition(_))));
}

#[test]
fn blow_up_is_reported_as_divergence() {
    let g = Grid2D::square(16, 4.0).unwrap();
    let big = SpinorField::new(
        Bump::centered(g, 0.6, 1e6).sample(g),
        Bump::centered(g, 0.6, 1e6).with_momentum(1.0, 0.0).sample(g),
    )
    .unwrap();
    let d = build_initial_data(&big, &zero(g), &zero(g)).unwrap();
    let sys = CsdSystem::new(g, CsdOptions::default());
    let r = sys.evolve(&initial_half_waves(&d).unwrap(), 200.0, 0.5, Scheme::ExponentialRk4, 1);
    assert!(matches!(r, Err(Error::Divergence { .. })), "{r:?}");
}

#[test]
fn mode_stack_round_trips_the_state() {
    let g = grid();
    let sys = CsdSystem::new(g, CsdOptions::default());
    let st = initial_half_waves(&small_data(g)).unwrap();
    let back = sys.state(&sys.stack(&st), st.time);
    assert!(sys.stack(&back).distance(&sys.stack(&st)) < 1e-15);
    assert_eq!(HalfWaveSystem::grid(&sys), g);
}

fn lower(f: &ScalarField, s: Sign, mu: usize) -> ScalarField {
    apply_symbol(f, |x1, x2| riesz_lower_symbol(s, mu, x1, x2).into())
}

fn mul(a: &ScalarField, b: &ScalarField) -> ScalarField {
    a.to_physical().try_mul(&b.to_physical()).unwrap()
}

/// `R^1_{s2} B R^2_{s1} psi - R^2_{s2} B R^1_{s1} psi`
fn n12(s2: Sign, b: &ScalarField, s1: Sign, psi: &ScalarField) -> ScalarField {
    &mul(&riesz(b, s2, 1), &riesz(psi, s1, 2)) - &mul(&riesz(b, s2, 2), &riesz(psi, s1, 1))
}

/// `R_{s1, mu} psi R^mu_{s2} a`
fn n0(s1: Sign, psi: &ScalarField, s2: Sign, a: &ScalarField) -> ScalarField {
    (0..3)
        .map(|mu| mul(&lower(psi, s1, mu), &riesz(a, s2, mu)))
        .reduce(|x, y| &x + &y)
        .unwrap()
}

#[test]
fn potential_term_splits_into_null_forms() {
    let g = grid();
    let sys = CsdSystem::new(g, CsdOptions::default());
    let st0 = initial_half_waves(&small_data(g)).unwrap();
    let st = sys.evolve(&st0, 0.25, 1.0 / 32.0, Scheme::ExponentialRk4, 8).unwrap().pop().unwrap();
    let signs = [Sign::Plus, Sign::Minus];
    let half = |nu: usize, s: Sign| match s {
        Sign::Plus => st.a[nu].plus.clone(),
        Sign::Minus => st.a[nu].minus.clone(),
    };
    let a = st.potential();
    let h = hodge_decompose(&a.comps[1], &a.comps[2]).unwrap();

    // Lorenz gauge: A^cf_j = -sum R_{pm, j} A_{0, pm}
    for j in 1..3 {
        let want = signs
            .map(|s| lower(&half(0, s), s, j).scaled((-1.0).into()))
            .iter()
            .fold(zero(g), |acc, f| &acc + &f.to_physical());
        assert!(rel(&h.cf[j - 1], &want) < 1e-10, "cf {j}: {}", rel(&h.cf[j - 1], &want));
    }

    for c in 0..2 {
        let comp = |s: Sign| st.half(s).components()[c].clone();
        // sum A^df_l R^l psi = -sum N^12(B, psi), B_pm = R_{pm,1} A_{2,pm} - R_{pm,2} A_{1,pm}
        let lhs = signs
            .iter()
            .flat_map(|&s1| (1..3).map(move |l| (s1, l)))
            .map(|(s1, l)| mul(&h.df[l - 1], &riesz(&comp(s1), s1, l)))
            .reduce(|x, y| &x + &y)
            .unwrap();
        let mut rhs = zero(g);
        for s2 in signs {
            let b = &lower(&half(2, s2), s2, 1) - &lower(&half(1, s2), s2, 2);
            for s1 in signs {
                rhs = &rhs - &n12(s2, &b, s1, &comp(s1));
            }
        }
        assert!(rel(&lhs, &rhs) < 1e-10, "df {c}: {}", rel(&lhs, &rhs));

        // sum (A_0 R^0 psi + A^cf_l R^l psi) = -sum N^0(psi, A_{0, pm})
        let lhs = signs
            .iter()
            .map(|&s1| {
                let p = comp(s1);
                let mut t = mul(&a.comps[0], &riesz(&p, s1, 0));
                for l in 1..3 {
                    t = &t + &mul(&h.cf[l - 1], &riesz(&p, s1, l));
                }
                t
            })
            .reduce(|x, y| &x + &y)
            .unwrap();
        let mut rhs = zero(g);
        for s1 in signs {
            for s2 in signs {
                rhs = &rhs - &n0(s1, &comp(s1), s2, &half(0, s2));
            }
        }
        assert!(rel(&lhs, &rhs) < 1e-10, "cf {c}: {}", rel(&lhs, &rhs));
    }
}

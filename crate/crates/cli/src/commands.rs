use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use ndarray::Array3;
use serde::Serialize;
use serde_json::json;

use csgauge_core::csd::{self, CsdOptions, CsdSystem};
use csgauge_core::csh::{self, CshOptions, CshSystem};
use csgauge_core::data::random_band_limited;
use csgauge_core::diagnostics::{conservation_drift, write_csv, DiagnosticsRecord};
use csgauge_core::field::Representation;
use csgauge_core::integrator::Scheme;
use csgauge_core::nullforms::{
    angle_modulation_probe, dirac_angle_probe, dominance_study, sign_label, write_dominance_csv, NullForm,
    SpaceTimeField, SpaceTimeLattice, SIGN_PAIRS,
};
use csgauge_core::snapshot::Snapshot;
use csgauge_core::xsb::{hsb_norm, point_report, scan_region, xsb_norm, System};
use csgauge_core::{Error, ScalarField, Sign, SpinorField};

use crate::config::{FeasibilityConfig, NormsConfig, NullformsConfig, SchemeName, SimulateConfig};
use crate::CliError;

fn create(out: &Path, name: &str) -> Result<BufWriter<File>, CliError> {
    Ok(BufWriter::new(File::create(out.join(name))?))
}

fn write_json<T: Serialize>(out: &Path, name: &str, value: &T) -> Result<(), CliError> {
    let mut w = create(out, name)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    Ok(())
}

fn constant(grid: csgauge_core::Grid2D, c: f64) -> ScalarField {
    ScalarField::from_fn(grid, |_, _| c.into())
}

pub fn simulate(cfg: &SimulateConfig, out: &Path) -> Result<(), CliError> {
    let grid = cfg.validate()?;
    let scheme = match cfg.scheme {
        SchemeName::Rk4 => Scheme::ExponentialRk4,
        SchemeName::Picard => Scheme::Picard { window: cfg.picard_window, iterations: cfg.picard_iterations },
    };
    let a0 = constant(grid, cfg.background);
    let chi = ScalarField::zeros(grid, Representation::Physical);
    let field = |k: u64| random_band_limited(grid, cfg.kmax, cfg.amplitude, false, cfg.seed.wrapping_add(k));
    let diverged = |e: Error| match e {
        Error::Divergence { time, .. } => CliError::Divergence { time, last_good: (time - cfg.dt).max(0.0) },
        other => other.into(),
    };
    let (label, rows, snaps): (&str, Vec<DiagnosticsRecord>, Vec<Vec<ScalarField>>) = match cfg.system {
        System::Csd => {
            let psi = SpinorField::new(field(0), field(1))?;
            let data = csd::build_initial_data(&psi, &a0, &chi)?;
            let sys = CsdSystem::new(grid, CsdOptions { mass: cfg.mass, dealias: cfg.dealias, gauge_coupling: true });
            let states = sys
                .evolve(&csd::initial_half_waves(&data)?, cfg.t_final, cfg.dt, scheme, cfg.sample_every)
                .map_err(diverged)?;
            let rows = states.iter().map(|s| sys.diagnostics(s)).collect();
            let snaps = states
                .iter()
                .map(|s| {
                    let psi = s.spinor().to_physical();
                    let [up, down] = psi.components();
                    let mut v: Vec<ScalarField> = s.potential().comps.to_vec();
                    v.extend([up.clone(), down.clone()]);
                    v
                })
                .collect();
            ("Q", rows, snaps)
        }
        System::Csh => {
            let f = field(0);
            let g = csh::zero_mean_velocity(&f, &field(1), &a0);
            let data = csh::build_initial_data(&f, &g, &a0, &chi)?;
            let sys = CshSystem::new(grid, CshOptions { dealias: cfg.dealias, gauge_coupling: true });
            let states = sys
                .evolve(&csh::initial_half_waves(&data)?, cfg.t_final, cfg.dt, scheme, cfg.sample_every)
                .map_err(diverged)?;
            let rows = states.iter().map(|s| sys.diagnostics(s)).collect();
            let snaps = states
                .iter()
                .map(|s| {
                    let (p, v) = s.scalar();
                    let mut c: Vec<ScalarField> = s.potential().comps.to_vec();
                    c.extend([p, v]);
                    c
                })
                .collect();
            ("E", rows, snaps)
        }
    };
    write_csv(create(out, "diagnostics.csv")?, label, &rows)?;
    if cfg.snapshots {
        for (k, fields) in snaps.into_iter().enumerate() {
            Snapshot::new(fields)?.save(&out.join(format!("snapshot_{k:05}.csgf")))?;
        }
    }
    let max = |f: fn(&DiagnosticsRecord) -> f64| rows.iter().map(f).fold(0.0, f64::max);
    let summary = json!({
        "system": cfg.system,
        "samples": rows.len(),
        "final_time": rows.last().map(|r| r.t),
        "conserved": label,
        "conservation_drift": conservation_drift(&rows),
        "max_gauge_res": max(|r| r.gauge_res),
        "max_f12_res": max(|r| r.f12_res),
        "mean_defect": rows.first().map(|r| r.mean_defect),
    });
    write_json(out, "summary.json", &summary)
}

pub fn feasibility(cfg: &FeasibilityConfig, out: &Path) -> Result<(), CliError> {
    cfg.validate()?;
    let scan = scan_region(cfg.system, (cfg.s_min, cfg.s_max), (cfg.b_min, cfg.b_max), cfg.eps0, cfg.resolution)?;
    scan.write_csv(create(out, "region.csv")?)?;
    let mut w = create(out, "reports.jsonl")?;
    for &(s, b) in &cfg.points {
        for line in point_report(cfg.system, s, b, cfg.eps0) {
            serde_json::to_writer(&mut w, &line)?;
            writeln!(w)?;
        }
    }
    w.flush()?;
    let summary = json!({
        "system": cfg.system,
        "resolution": cfg.resolution,
        "eps0": cfg.eps0,
        "cells": scan.cells.len(),
        "feasible": scan.feasible_count(),
        "printed_region": scan.cells.iter().filter(|c| c.printed_region).count(),
        "symmetric_difference": scan.symmetric_difference(),
    });
    write_json(out, "summary.json", &summary)
}

pub fn nullforms(cfg: &NullformsConfig, out: &Path) -> Result<(), CliError> {
    cfg.validate()?;
    let lat = SpaceTimeLattice::cube(cfg.n, cfg.length)?;
    let mut rows = Vec::new();
    for form in NullForm::ALL {
        for signs in SIGN_PAIRS {
            rows.push(dominance_study(form, signs, lat, cfg.kmax, cfg.trials, cfg.seed)?);
        }
    }
    write_dominance_csv(create(out, "dominance.csv")?, &rows)?;
    let modulation: Vec<_> = SIGN_PAIRS
        .iter()
        .map(|&signs| {
            json!({
                "signs": sign_label(signs),
                "sup_off_cone": angle_modulation_probe(signs, cfg.probe_samples, false, cfg.seed),
                "sup_on_cone": angle_modulation_probe(signs, cfg.probe_samples, true, cfg.seed),
            })
        })
        .collect();
    let probes = json!({
        "samples": cfg.probe_samples,
        "dirac_angle_sup": dirac_angle_probe(cfg.probe_samples, cfg.seed),
        "angle_modulation": modulation,
    });
    write_json(out, "probes.json", &probes)
}

pub fn norms(cfg: &NormsConfig, out: &Path) -> Result<(), CliError> {
    cfg.validate()?;
    let snaps = cfg.snapshots.iter().map(|p| Snapshot::load(p)).collect::<Result<Vec<_>, _>>()?;
    let grid = snaps[0].grid;
    let ncomp = snaps[0].fields.len();
    if snaps.iter().any(|s| s.grid != grid || s.fields.len() != ncomp) {
        return Err(CliError::Config("snapshots differ in grid or component count".into()));
    }
    let nt = snaps.len();
    let lat = SpaceTimeLattice::new(grid, nt, nt as f64 * cfg.dt)?;
    let mut w = create(out, "norms.jsonl")?;
    for c in 0..ncomp {
        let phys: Vec<ScalarField> = snaps.iter().map(|s| s.fields[c].to_physical()).collect();
        let values = Array3::from_shape_fn(lat.shape(), |(t, i, j)| phys[t].values()[(i, j)]);
        let f = SpaceTimeField::from_values(lat, Representation::Physical, values)?.into_spectral();
        for &s in &cfg.s {
            for &b in &cfg.b {
                let row = json!({
                    "component": c,
                    "s": s,
                    "b": b,
                    "x_plus": xsb_norm(&f, s, b, Sign::Plus),
                    "x_minus": xsb_norm(&f, s, b, Sign::Minus),
                    "h": hsb_norm(&f, s, b),
                });
                serde_json::to_writer(&mut w, &row)?;
                writeln!(w)?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

//! Space-time Fourier norms and the product-estimate condition engine.

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nullforms::{product, trial_seed, SpaceTimeField, SpaceTimeLattice};
use crate::spectral::Sign;

/// `(1+|xi|)^s (1+|tau + sign|xi||)^b`.
pub fn xsb_weight(tau: f64, xi: f64, s: f64, b: f64, sign: Sign) -> f64 {
    (1.0 + xi).powf(s) * (1.0 + (tau + sign.value() * xi).abs()).powf(b)
}

/// `(1+|xi|)^s (1+||tau| - |xi||)^b`.
pub fn hsb_weight(tau: f64, xi: f64, s: f64, b: f64) -> f64 {
    (1.0 + xi).powf(s) * (1.0 + (tau.abs() - xi).abs()).powf(b)
}

fn weighted_norm(f: &SpaceTimeField, weight: impl Fn(f64, f64) -> f64) -> f64 {
    let f = f.to_spectral();
    let lat = f.lattice();
    let sum: f64 = f
        .values()
        .indexed_iter()
        .map(|((it, i1, i2), z)| {
            let (tau, x1, x2) = lat.frequency(it, i1, i2);
            (weight(tau, x1.hypot(x2)) * z.norm()).powi(2)
        })
        .sum();
    (lat.volume() * sum).sqrt()
}

pub fn xsb_norm(f: &SpaceTimeField, s: f64, b: f64, sign: Sign) -> f64 {
    weighted_norm(f, |tau, xi| xsb_weight(tau, xi, s, b, sign))
}

pub fn hsb_norm(f: &SpaceTimeField, s: f64, b: f64) -> f64 {
    weighted_norm(f, |tau, xi| hsb_weight(tau, xi, s, b))
}

/// Worst-case ratios for `X^{s,b} ⊂ H^{s,b} ⊂ H^{s,-b} ⊂ X^{s,-b}`, each
/// entry being `small norm / large norm`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InclusionMargins {
    /// Pointwise weight ratios over every lattice point.
    pub weight: [f64; 3],
    /// Norm ratios for the given field.
    pub norm: [f64; 3],
}

impl InclusionMargins {
    pub fn worst(&self) -> f64 {
        self.weight.iter().chain(self.norm.iter()).copied().fold(0.0, f64::max)
    }
}

pub fn inclusion_check(f: &SpaceTimeField, s: f64, b: f64, sign: Sign) -> Result<InclusionMargins> {
    if !(b >= 0.0) {
        return Err(Error::Precondition(format!("inclusion chain needs b >= 0, got {b}")));
    }
    let lat = f.lattice();
    let (nt, n1, n2) = lat.shape();
    let mut weight = [0.0f64; 3];
    for it in 0..nt {
        for i1 in 0..n1 {
            for i2 in 0..n2 {
                let (tau, x1, x2) = lat.frequency(it, i1, i2);
                let xi = x1.hypot(x2);
                let ratios = [
                    hsb_weight(tau, xi, s, b) / xsb_weight(tau, xi, s, b, sign),
                    hsb_weight(tau, xi, s, -b) / hsb_weight(tau, xi, s, b),
                    xsb_weight(tau, xi, s, -b, sign) / hsb_weight(tau, xi, s, -b),
                ];
                for (w, r) in weight.iter_mut().zip(ratios) {
                    *w = w.max(r);
                }
            }
        }
    }
    let ratio = |a: f64, c: f64| if c == 0.0 { 0.0 } else { a / c };
    let norm = [
        ratio(hsb_norm(f, s, b), xsb_norm(f, s, b, sign)),
        ratio(hsb_norm(f, s, -b), hsb_norm(f, s, b)),
        ratio(xsb_norm(f, s, -b, sign), hsb_norm(f, s, -b)),
    ];
    Ok(InclusionMargins { weight, norm })
}

/// Exponents of `‖φ1 φ2‖_{H^{-s0,-b0}} ≤ C ‖φ1‖_{H^{s1,b1}} ‖φ2‖_{H^{s2,b2}}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SbTriple {
    pub s0: f64,
    pub b0: f64,
    pub s1: f64,
    pub b1: f64,
    pub s2: f64,
    pub b2: f64,
}

impl SbTriple {
    pub fn new(s0: f64, b0: f64, s1: f64, b1: f64, s2: f64, b2: f64) -> Self {
        Self { s0, b0, s1, b1, s2, b2 }
    }

    /// Reads a displayed estimate `‖φ1 φ2‖_{H^{σ0,β0}} ≲ ‖φ1‖_{H^{σ1,β1}} ‖φ2‖_{H^{σ2,β2}}`.
    pub fn from_display(out: (f64, f64), in1: (f64, f64), in2: (f64, f64)) -> Self {
        Self::new(-out.0, -out.1, in1.0, in1.1, in2.0, in2.1)
    }

    pub fn s(&self) -> [f64; 3] {
        [self.s0, self.s1, self.s2]
    }

    pub fn b(&self) -> [f64; 3] {
        [self.b0, self.b1, self.b2]
    }

    pub fn is_finite(&self) -> bool {
        self.s().iter().chain(self.b().iter()).all(|x| x.is_finite())
    }
}

/// Exchanges the output with the second input.
pub fn dualize(t: SbTriple) -> SbTriple {
    SbTriple::new(t.s2, t.b2, t.s1, t.b1, t.s0, t.b0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Relation {
    Greater,
    GreaterEq,
}

/// The thirteen inequalities, as `(label, relation, left - right)`.
fn conditions(t: &SbTriple) -> [(&'static str, Relation, f64); 13] {
    use Relation::*;
    let [s0, s1, s2] = t.s();
    let [b0, b1, b2] = t.b();
    let bs = b0 + b1 + b2;
    let ss = s0 + s1 + s2;
    let max = |v: [f64; 3]| v[0].max(v[1]).max(v[2]);
    let min = |v: [f64; 3]| v[0].min(v[1]).min(v[2]);
    [
        ("b0+b1+b2 > 1/2", Greater, bs - 0.5),
        ("b0+b1+b2 >= max b", GreaterEq, bs - max(t.b())),
        ("s0+s1+s2 > 3/2-(b0+b1+b2)", Greater, ss - (1.5 - bs)),
        ("s0+s1+s2 > 1-min pair b", Greater, ss - (1.0 - min([b0 + b1, b1 + b2, b2 + b0]))),
        ("s0+s1+s2 > 1/2-min b", Greater, ss - (0.5 - min(t.b()))),
        ("s0+s1+s2 > 3/4", Greater, ss - 0.75),
        ("(s0+b0)+2s1+2s2 > 1", Greater, (s0 + b0) + 2.0 * s1 + 2.0 * s2 - 1.0),
        ("2s0+(s1+b1)+2s2 > 1", Greater, 2.0 * s0 + (s1 + b1) + 2.0 * s2 - 1.0),
        ("2s0+2s1+(s2+b2) > 1", Greater, 2.0 * s0 + 2.0 * s1 + (s2 + b2) - 1.0),
        ("s0+s1+s2 >= max s", GreaterEq, ss - max(t.s())),
        ("b0+s1+s2 >= 0", GreaterEq, b0 + s1 + s2),
        ("s0+b1+s2 >= 0", GreaterEq, s0 + b1 + s2),
        ("s0+s1+b2 >= 0", GreaterEq, s0 + s1 + b2),
    ]
}

pub const CONDITION_COUNT: usize = 13;

/// Labels of the thirteen conditions, in order.
pub fn condition_labels() -> [&'static str; CONDITION_COUNT] {
    conditions(&SbTriple::new(0.0, 0.0, 0.0, 0.0, 0.0, 0.0)).map(|c| c.0)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    /// 1-based position in the condition list.
    pub id: usize,
    pub condition: &'static str,
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionReport {
    pub triple: SbTriple,
    pub pass: bool,
    pub margins: Vec<f64>,
    pub violated: Vec<Violation>,
}

impl ConditionReport {
    pub fn margin_min(&self) -> f64 {
        self.margins.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

pub fn check_product_conditions(t: SbTriple) -> ConditionReport {
    let conds = conditions(&t);
    let violated: Vec<Violation> = conds
        .iter()
        .enumerate()
        .filter(|(_, (_, rel, m))| match rel {
            Relation::Greater => !(*m > 0.0),
            Relation::GreaterEq => !(*m >= 0.0),
        })
        .map(|(i, &(condition, _, margin))| Violation { id: i + 1, condition, margin })
        .collect();
    ConditionReport {
        triple: t,
        pass: violated.is_empty(),
        margins: conds.iter().map(|c| c.2).collect(),
        violated,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum System {
    Csd,
    Csh,
}

impl System {
    pub fn lists(self) -> &'static [ReductionList] {
        use ReductionList::*;
        match self {
            System::Csd => &[CsdForward, CsdDual],
            System::Csh => &[CshError, CshForward, CshDual, CshCubic],
        }
    }

    /// The closed-form region printed alongside the reductions.
    pub fn printed_region(self, s: f64, b: f64) -> bool {
        let band = 0.5 < b && b < 1.0;
        let bound = match self {
            System::Csd => 0.25f64.max(b / 2.0 - 0.25).max(1.0 - b).max(b / 3.0),
            System::Csh => 0.25f64.max(b - 0.5).max(1.0 - b).max(b / 3.0),
        };
        band && s > bound
    }
}

impl fmt::Display for System {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            System::Csd => "csd",
            System::Csh => "csh",
        })
    }
}

impl FromStr for System {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csd" => Ok(System::Csd),
            "csh" => Ok(System::Csh),
            other => Err(Error::UnknownList(other.to_string())),
        }
    }
}

/// Lists of product estimates the bilinear and cubic bounds reduce to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ReductionList {
    /// Spinor/gauge null forms, direct estimates (3 lines).
    CsdForward,
    /// Spinor/gauge null forms, duality estimates (6 lines).
    CsdDual,
    /// Error-operator terms of the Higgs system (2 lines).
    CshError,
    /// Higgs null forms, direct estimates (5 lines).
    CshForward,
    /// Higgs null forms, duality estimates (6 lines).
    CshDual,
    /// Cubic terms, two chained products per line (2 lines).
    CshCubic,
}

impl ReductionList {
    pub const ALL: [ReductionList; 6] = [
        ReductionList::CsdForward,
        ReductionList::CsdDual,
        ReductionList::CshError,
        ReductionList::CshForward,
        ReductionList::CshDual,
        ReductionList::CshCubic,
    ];

    pub fn id(self) -> &'static str {
        match self {
            ReductionList::CsdForward => "csd-forward",
            ReductionList::CsdDual => "csd-dual",
            ReductionList::CshError => "csh-error",
            ReductionList::CshForward => "csh-forward",
            ReductionList::CshDual => "csh-dual",
            ReductionList::CshCubic => "csh-cubic",
        }
    }

    pub fn triples(self, s: f64, b: f64, eps0: f64) -> Vec<SbTriple> {
        let d = SbTriple::from_display;
        let h = 0.5;
        match self {
            ReductionList::CsdForward => vec![
                d((s, b - h + eps0), (s + h, b), (s, b)),
                d((s, b - 1.0 + eps0), (s + h, b - h), (s, b)),
                d((s, b - 1.0 + eps0), (s + h, b), (s, b - h)),
            ],
            ReductionList::CsdDual => vec![
                d((-s, -b + h), (s + h, b), (-s, 1.0 - b - eps0)),
                d((-s, -b + h), (s, b), (-s + h, 1.0 - b - eps0)),
                d((-s, -b), (s + h, b - h), (-s, 1.0 - b - eps0)),
                d((-s, -b), (s, b - h), (-s + h, 1.0 - b - eps0)),
                d((-s, -b), (s + h, b), (-s, h - b - eps0)),
                d((-s, -b), (s, b), (-s + h, h - b - eps0)),
            ],
            ReductionList::CshError => vec![
                d((s, 1.0 - b), (s + h, b), (s + h, b)),
                d((s - h, 1.0 - b), (s, b), (s + h, b)),
            ],
            ReductionList::CshForward => vec![
                d((s - h, b - h + eps0), (s + h, b), (s - h, b)),
                d((s - h, b - h + eps0), (s, b), (s, b)),
                d((s - h, b - 1.0 + eps0), (s + h, b - h), (s - h, b)),
                d((s - h, b - 1.0 + eps0), (s, b - h), (s, b)),
                d((s - h, b - 1.0 + eps0), (s + h, b), (s - h, b - h)),
            ],
            ReductionList::CshDual => vec![
                d((-s - h, -b + h), (-s + h, 1.0 - b + eps0), (s - h, b)),
                d((-s - h, -b + h), (-s, 1.0 - b + eps0), (s, b)),
                d((-s - h, -b), (-s + h, h - b + eps0), (s - h, b)),
                d((-s - h, -b), (-s, h - b + eps0), (s, b)),
                d((-s - h, -b), (-s + h, 1.0 - b + eps0), (s - h, b - h)),
                d((-s - h, -b), (-s, 1.0 - b + eps0), (s, b - h)),
            ],
            ReductionList::CshCubic => vec![
                d((s, b - 1.0 + eps0), (s + h, b), (s, 0.0)),
                d((s, 0.0), (s + h, b), (s, b)),
                d((s - h, b - 1.0 + eps0), (s, 0.0), (s, b)),
                d((s, 0.0), (s, b), (s + h, b)),
            ],
        }
    }
}

impl fmt::Display for ReductionList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for ReductionList {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|l| l.id() == s)
            .ok_or_else(|| Error::UnknownList(s.to_string()))
    }
}

/// Every triple of a system's lists, in list order.
pub fn reduction_triples(system: System, s: f64, b: f64, eps0: f64) -> Vec<SbTriple> {
    system.lists().iter().flat_map(|l| l.triples(s, b, eps0)).collect()
}

/// One line of a point report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TripleReport {
    pub system: System,
    pub list: ReductionList,
    pub line: usize,
    pub s: f64,
    pub b: f64,
    pub eps0: f64,
    #[serde(flatten)]
    pub report: ConditionReport,
}

pub fn point_report(system: System, s: f64, b: f64, eps0: f64) -> Vec<TripleReport> {
    system
        .lists()
        .iter()
        .flat_map(|&list| {
            list.triples(s, b, eps0).into_iter().enumerate().map(move |(i, t)| TripleReport {
                system,
                list,
                line: i + 1,
                s,
                b,
                eps0,
                report: check_product_conditions(t),
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegionCell {
    pub s: f64,
    pub b: f64,
    pub feasible: bool,
    pub printed_region: bool,
    pub margin_min: f64,
}

pub fn evaluate_point(system: System, s: f64, b: f64, eps0: f64) -> RegionCell {
    let reports: Vec<_> = reduction_triples(system, s, b, eps0).into_iter().map(check_product_conditions).collect();
    RegionCell {
        s,
        b,
        feasible: reports.iter().all(|r| r.pass),
        printed_region: system.printed_region(s, b),
        margin_min: reports.iter().map(ConditionReport::margin_min).fold(f64::INFINITY, f64::min),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegionScan {
    pub system: System,
    pub eps0: f64,
    pub resolution: usize,
    pub cells: Vec<RegionCell>,
}

impl RegionScan {
    /// Cells where the checker and the printed formula disagree.
    pub fn symmetric_difference(&self) -> usize {
        self.cells.iter().filter(|c| c.feasible != c.printed_region).count()
    }

    pub fn feasible_count(&self) -> usize {
        self.cells.iter().filter(|c| c.feasible).count()
    }

    pub fn write_csv<W: std::io::Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "s,b,feasible,printed_region,margin_min")?;
        for c in &self.cells {
            writeln!(w, "{:?},{:?},{},{},{:?}", c.s, c.b, c.feasible, c.printed_region, c.margin_min)?;
        }
        Ok(())
    }
}

fn axis(range: (f64, f64), n: usize, i: usize) -> f64 {
    range.0 + (range.1 - range.0) * i as f64 / (n - 1) as f64
}

/// Row-major in `s`, then `b`, over inclusive ranges.
pub fn scan_region(system: System, s_range: (f64, f64), b_range: (f64, f64), eps0: f64, resolution: usize) -> Result<RegionScan> {
    if resolution < 64 {
        return Err(Error::Precondition(format!("scan resolution must be >= 64, got {resolution}")));
    }
    let cells = (0..resolution * resolution)
        .into_par_iter()
        .map(|k| {
            let (i, j) = (k / resolution, k % resolution);
            evaluate_point(system, axis(s_range, resolution, i), axis(b_range, resolution, j), eps0)
        })
        .collect();
    Ok(RegionScan { system, eps0, resolution, cells })
}

/// `‖φ1φ2‖_{H^{-s0,-b0}} / (‖φ1‖_{H^{s1,b1}} ‖φ2‖_{H^{s2,b2}})` for one pair.
pub fn bilinear_ratio(t: SbTriple, f1: &SpaceTimeField, f2: &SpaceTimeField) -> f64 {
    let num = hsb_norm(&product(f1, f2), -t.s0, -t.b0);
    num / (hsb_norm(f1, t.s1, t.b1) * hsb_norm(f2, t.s2, t.b2))
}

/// Sample maximum of [`bilinear_ratio`] over random fields with modes
/// `|k| <= kmax`; keep `kmax <= n/4` so products do not alias.
pub fn bilinear_probe(t: SbTriple, lattice: SpaceTimeLattice, kmax: i64, trials: usize, seed: u64) -> f64 {
    (0..trials)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(seed, k));
            let f1 = SpaceTimeField::random(lattice, kmax, &mut rng);
            let f2 = SpaceTimeField::random(lattice, kmax, &mut rng);
            bilinear_ratio(t, &f1, &f2)
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Representation;
    use num_complex::Complex64;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn lat() -> SpaceTimeLattice {
        SpaceTimeLattice::cube(8, 2.0 * PI).unwrap()
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0)
    }

    #[test]
    fn zero_field_has_zero_norms() {
        let f = SpaceTimeField::zeros(lat(), Representation::Spectral);
        assert_eq!(xsb_norm(&f, 0.5, 0.7, Sign::Plus), 0.0);
        assert_eq!(hsb_norm(&f, 0.5, -0.7), 0.0);
    }

    #[test]
    fn unit_weights_give_the_l2_norm() {
        let f = SpaceTimeField::random(lat(), 3, &mut ChaCha8Rng::seed_from_u64(1));
        let l2 = f.to_physical().l2_norm();
        for sign in Sign::BOTH {
            assert!(close(xsb_norm(&f, 0.0, 0.0, sign), l2));
        }
        assert!(close(hsb_norm(&f, 0.0, 0.0), l2));
    }

    #[test]
    fn on_cone_mode_has_pure_sobolev_weight() {
        // tau = -|xi| on the unit lattice: xi = (3, 4), tau = -5
        let l = SpaceTimeLattice::new(crate::grid::Grid2D::square(16, 2.0 * PI).unwrap(), 16, 2.0 * PI).unwrap();
        let f = SpaceTimeField::single_mode(l, (-5, 3, 4), Complex64::new(1.0, 0.0));
        let base = l.volume().sqrt();
        assert!(close(xsb_norm(&f, 0.5, 0.8, Sign::Plus), base * 6f64.powf(0.5)));
        assert!(close(xsb_norm(&f, 0.5, 0.8, Sign::Minus), base * 6f64.powf(0.5) * 11f64.powf(0.8)));
        assert!(close(hsb_norm(&f, 0.5, 0.8), base * 6f64.powf(0.5)));
    }

    #[test]
    fn inclusion_chain_with_b_zero_is_an_equality() {
        let f = SpaceTimeField::random(lat(), 3, &mut ChaCha8Rng::seed_from_u64(2));
        let m = inclusion_check(&f, 0.25, 0.0, Sign::Minus).unwrap();
        assert!(m.weight.iter().chain(m.norm.iter()).all(|r| close(*r, 1.0)));
    }

    #[test]
    fn inclusion_is_strict_on_the_opposite_cone() {
        let l = SpaceTimeLattice::new(crate::grid::Grid2D::square(16, 2.0 * PI).unwrap(), 16, 2.0 * PI).unwrap();
        let f = SpaceTimeField::single_mode(l, (5, 3, 4), Complex64::new(1.0, 0.0));
        let m = inclusion_check(&f, 0.0, 0.7, Sign::Plus).unwrap();
        assert!(close(m.norm[0], 11f64.powf(-0.7)));
        assert!(m.worst() <= 1.0 + 1e-12);
    }

    #[test]
    fn inclusion_rejects_negative_b() {
        let f = SpaceTimeField::zeros(lat(), Representation::Spectral);
        assert!(matches!(inclusion_check(&f, 0.0, -0.1, Sign::Plus), Err(Error::Precondition(_))));
    }

    #[test]
    fn norms_depend_only_on_the_modulus() {
        let f = SpaceTimeField::random(lat(), 3, &mut ChaCha8Rng::seed_from_u64(3));
        let neg = SpaceTimeField::from_values(lat(), Representation::Spectral, f.values().mapv(|z| -z)).unwrap();
        for sign in Sign::BOTH {
            assert_eq!(xsb_norm(&f, 0.3, 0.6, sign), xsb_norm(&f.modulus(), 0.3, 0.6, sign));
            assert_eq!(xsb_norm(&f, 0.3, 0.6, sign), xsb_norm(&neg, 0.3, 0.6, sign));
        }
    }

    #[test]
    fn all_zero_triple_fails() {
        let r = check_product_conditions(SbTriple::new(0.0, 0.0, 0.0, 0.0, 0.0, 0.0));
        assert!(!r.pass);
        let ids: Vec<usize> = r.violated.iter().map(|v| v.id).collect();
        assert!(ids.contains(&1) && ids.contains(&6));
        // equalities satisfy the non-strict lines
        assert!(!ids.contains(&2) && !ids.contains(&10) && !ids.contains(&11));
    }

    #[test]
    fn all_one_triple_passes() {
        let r = check_product_conditions(SbTriple::new(1.0, 1.0, 1.0, 1.0, 1.0, 1.0));
        assert!(r.pass && r.violated.is_empty());
        let want = [2.5, 2.0, 4.5, 4.0, 3.5, 2.25, 5.0, 5.0, 5.0, 2.0, 3.0, 3.0, 3.0];
        assert_eq!(r.margins, want);
    }

    #[test]
    fn first_dual_line_at_a_sample_point() {
        let t = ReductionList::CsdDual.triples(0.3, 0.7, 0.01)[0];
        let want = [0.3, 0.2, 0.8, 0.7, -0.3, 0.29];
        let got = [t.s0, t.b0, t.s1, t.b1, t.s2, t.b2];
        assert!(got.iter().zip(want).all(|(a, b)| close(*a, b)), "{got:?}");
        let r = check_product_conditions(t);
        assert!(r.pass, "{r:?}");
        assert!(close(r.margins[0], 1.19 - 0.5));
    }

    #[test]
    fn list_lengths_and_shapes() {
        let n = |l: ReductionList| l.triples(0.3, 0.7, 0.01).len();
        assert_eq!(n(ReductionList::CsdForward), 3);
        assert_eq!(n(ReductionList::CsdDual), 6);
        assert_eq!(n(ReductionList::CshError), 2);
        assert_eq!(n(ReductionList::CshForward), 5);
        assert_eq!(n(ReductionList::CshDual), 6);
        assert_eq!(n(ReductionList::CshCubic), 4);
        let (s, b, e) = (0.3, 0.7, 0.01);
        let t = ReductionList::CshDual.triples(s, b, e)[2];
        assert_eq!(t, SbTriple::new(s + 0.5, b, -s + 0.5, 0.5 - b + e, s - 0.5, b));
    }

    #[test]
    fn forward_lines_dualize_into_the_dual_list() {
        for (s, b, e) in [(0.3, 0.7, 0.01), (0.26, 0.745, 1e-3)] {
            let dual = ReductionList::CsdDual.triples(s, b, e);
            for t in ReductionList::CsdForward.triples(s, b, e) {
                let d = dualize(t);
                assert!(dual.iter().any(|u| u == &d), "{d:?}");
            }
        }
    }

    #[test]
    fn list_ids_round_trip() {
        for l in ReductionList::ALL {
            assert_eq!(l.id().parse::<ReductionList>().unwrap(), l);
        }
        assert!(matches!("nope".parse::<ReductionList>(), Err(Error::UnknownList(_))));
    }

    #[test]
    fn labelled_points() {
        assert!(evaluate_point(System::Csd, 0.9, 0.7, 0.01).feasible);
        assert!(System::Csd.printed_region(0.9, 0.7));
        assert!(!evaluate_point(System::Csd, 0.1, 0.7, 0.01).feasible);
        assert!(!System::Csd.printed_region(0.1, 0.7));
        // s + b = 1 is the strict boundary of the first mixed line
        assert!(!evaluate_point(System::Csd, 0.3, 0.7, 0.01).feasible);
        assert!(evaluate_point(System::Csd, 0.3, 0.72, 0.01).feasible);
    }

    #[test]
    fn near_the_endpoint_choice() {
        let (e, e0) = (0.01, 1e-3);
        for sys in [System::Csd, System::Csh] {
            assert!(evaluate_point(sys, 0.25 + e, 0.75 - e / 2.0, e0).feasible);
            assert!(!evaluate_point(sys, 0.25 + e, 0.75 - 2.0 * e, e0).feasible);
            assert!(!sys.printed_region(0.25 + e, 0.75 - 2.0 * e));
        }
    }

    #[test]
    fn scan_is_deterministic_and_validated() {
        assert!(scan_region(System::Csd, (0.0, 1.0), (0.5, 1.0), 1e-3, 32).is_err());
        let a = scan_region(System::Csh, (0.0, 1.0), (0.5, 1.0), 1e-3, 64).unwrap();
        let b = scan_region(System::Csh, (0.0, 1.0), (0.5, 1.0), 1e-3, 64).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.cells.len(), 64 * 64);
        assert_eq!(a.cells[1].s, 0.0);
        assert_eq!(a.cells[64].b, 0.5);
        let mut buf = Vec::new();
        a.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().next(), Some("s,b,feasible,printed_region,margin_min"));
        assert_eq!(text.lines().count(), 64 * 64 + 1);
    }

    #[test]
    fn bilinear_probe_is_finite_and_reproducible() {
        let l = SpaceTimeLattice::cube(16, 2.0 * PI).unwrap();
        let t = ReductionList::CsdDual.triples(0.3, 0.72, 0.01)[0];
        let a = bilinear_probe(t, l, 3, 20, 7);
        assert!(a.is_finite() && a > 0.0);
        assert_eq!(a, bilinear_probe(t, l, 3, 20, 7));
    }

    fn triple() -> impl Strategy<Value = SbTriple> {
        prop::array::uniform6(-2.0f64..2.0).prop_map(|v| SbTriple::new(v[0], v[1], v[2], v[3], v[4], v[5]))
    }

    proptest! {
        #[test]
        fn dualize_is_an_involution(t in triple()) {
            prop_assert_eq!(dualize(dualize(t)), t);
        }

        #[test]
        fn conditions_are_symmetric_under_duality(t in triple()) {
            prop_assert_eq!(check_product_conditions(t).pass, check_product_conditions(dualize(t)).pass);
        }

        #[test]
        fn raising_an_exponent_keeps_monotone_lines(t in triple(), k in 0usize..6, d in 0.0f64..1.0) {
            let mut v = [t.s0, t.b0, t.s1, t.b1, t.s2, t.b2];
            v[k] += d;
            let u = SbTriple::new(v[0], v[1], v[2], v[3], v[4], v[5]);
            let (a, b) = (check_product_conditions(t), check_product_conditions(u));
            // lines 2 and 10 compare a sum with a maximum and are not monotone
            for id in (1..=13).filter(|&i| i != 2 && i != 10) {
                let was = a.violated.iter().all(|x| x.id != id);
                let now = b.violated.iter().all(|x| x.id != id);
                prop_assert!(!was || now, "line {} flipped", id);
            }
        }

        #[test]
        fn sum_against_max_lines(t in triple()) {
            let r = check_product_conditions(t);
            let b_ok = r.violated.iter().all(|x| x.id != 2);
            let s_ok = r.violated.iter().all(|x| x.id != 10);
            // sum >= max is equivalent to the other two summing to at least 0
            let [b0, b1, b2] = t.b();
            let [s0, s1, s2] = t.s();
            prop_assert_eq!(b_ok, b0 + b1 + b2 >= b0.max(b1).max(b2));
            prop_assert_eq!(s_ok, s0 + s1 + s2 >= s0.max(s1).max(s2));
        }

        #[test]
        fn pass_iff_nothing_violated(t in triple()) {
            let r = check_product_conditions(t);
            prop_assert_eq!(r.pass, r.violated.is_empty());
            prop_assert_eq!(r.margins.len(), CONDITION_COUNT);
        }

        #[test]
        fn weight_inclusions_hold_pointwise(tau in -50.0f64..50.0, xi in 0.0f64..50.0, s in -1.0f64..1.0, b in 0.0f64..1.0) {
            for sign in Sign::BOTH {
                prop_assert!(hsb_weight(tau, xi, s, b) <= xsb_weight(tau, xi, s, b, sign) * (1.0 + 1e-12));
                prop_assert!(xsb_weight(tau, xi, s, -b, sign) <= hsb_weight(tau, xi, s, -b) * (1.0 + 1e-12));
            }
            prop_assert!(hsb_weight(tau, xi, s, -b) <= hsb_weight(tau, xi, s, b) * (1.0 + 1e-12));
        }
    }
}

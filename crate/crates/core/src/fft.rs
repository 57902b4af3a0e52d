//! Cached FFT plans. Forward transforms carry the `1/N` factor so that
//! Parseval reads `sum |f|^2 = N sum |f^|^2`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use ndarray::{Array2, Array3, Axis};
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

type Plan = Arc<dyn Fft<f64>>;

struct PlanPair {
    forward: Plan,
    inverse: Plan,
}

fn plans(n: usize) -> Arc<PlanPair> {
    static CACHE: OnceLock<Mutex<(FftPlanner<f64>, HashMap<usize, Arc<PlanPair>>)>> =
        OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new((FftPlanner::new(), HashMap::new())));
    let mut guard = cache.lock().expect("fft plan cache poisoned");
    let (planner, map) = &mut *guard;
    if let Some(p) = map.get(&n) {
        return p.clone();
    }
    let pair = Arc::new(PlanPair {
        forward: planner.plan_fft_forward(n),
        inverse: planner.plan_fft_inverse(n),
    });
    map.insert(n, pair.clone());
    pair
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Direction {
    Forward,
    Inverse,
}

fn run(n: usize, dir: Direction, data: &mut [Complex64]) {
    let p = plans(n);
    let plan = match dir {
        Direction::Forward => &p.forward,
        Direction::Inverse => &p.inverse,
    };
    plan.process(data);
}

/// Transforms every lane of `a` along `axis`.
fn along_axis<D: ndarray::Dimension>(
    a: &mut ndarray::Array<Complex64, D>,
    axis: usize,
    dir: Direction,
) {
    let n = a.shape()[axis];
    if axis == a.ndim() - 1 && a.is_standard_layout() {
        run(n, dir, a.as_slice_mut().expect("standard layout"));
        return;
    }
    let mut buf = vec![Complex64::default(); n];
    for mut lane in a.lanes_mut(Axis(axis)) {
        for (b, v) in buf.iter_mut().zip(lane.iter()) {
            *b = *v;
        }
        run(n, dir, &mut buf);
        for (v, b) in lane.iter_mut().zip(buf.iter()) {
            *v = *b;
        }
    }
}

pub fn forward2(a: &mut Array2<Complex64>) {
    along_axis(a, 1, Direction::Forward);
    along_axis(a, 0, Direction::Forward);
    let s = 1.0 / a.len() as f64;
    a.mapv_inplace(|z| z * s);
}

pub fn inverse2(a: &mut Array2<Complex64>) {
    along_axis(a, 1, Direction::Inverse);
    along_axis(a, 0, Direction::Inverse);
}

pub fn forward3(a: &mut Array3<Complex64>) {
    for ax in (0..3).rev() {
        along_axis(a, ax, Direction::Forward);
    }
    let s = 1.0 / a.len() as f64;
    a.mapv_inplace(|z| z * s);
}

pub fn inverse3(a: &mut Array3<Complex64>) {
    for ax in (0..3).rev() {
        along_axis(a, ax, Direction::Inverse);
    }
}

//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line
//! per requirement to stderr (uncaptured) and fails if any line fails.

use std::io::Write;
use std::sync::{Mutex, MutexGuard};
use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use mixspin::closed_forms::{even_ring_negativity_from_energy, four_spin, three_spin, two_spin};
use mixspin::entanglement::{partial_transpose_second, su2_negativity, su2_signed_negativity, PairKind};
use mixspin::spectral::{diagonalize, ground_manifold, thermal_state, SpectralDecomposition, SpectralMixture};
use mixspin::sweep::{
    find_threshold, run_sweep, threshold_curve, Axis, CurveOrientation, PairSelector, Parameter, SweepRequest, SweepResult,
    ThresholdCurveRequest, ThresholdRequest, ThresholdStatus, NEGATIVITY_EPSILON,
};
use mixspin::{correlator, negativity, partial_trace, partial_transpose, ModelSpec};

/// Criteria run one at a time so that runtime budgets are not shared.
static SERIAL: Mutex<()> = Mutex::new(());

struct Criterion {
    id: &'static str,
    failures: Vec<String>,
    _serial: MutexGuard<'static, ()>,
}

impl Criterion {
    fn new(id: &'static str) -> Self {
        let serial = SERIAL.lock().unwrap_or_else(|poisoned| poisoned.into_inner());
        Criterion {
            id,
            failures: Vec::new(),
            _serial: serial,
        }
    }

    fn check(&mut self, ok: bool, what: impl AsRef<str>) {
        let line = format!("{} [{}] {}", if ok { "PASS" } else { "FAIL" }, self.id, what.as_ref());
        let _ = writeln!(std::io::stderr(), "{line}");
        if !ok {
            self.failures.push(line);
        }
    }

    fn near(&mut self, label: &str, value: f64, target: f64, tol: f64) {
        self.check((value - target).abs() <= tol, format!("{label}: {value:.6} vs {target} ± {tol:e}"));
    }

    fn info(&self, what: impl AsRef<str>) {
        let _ = writeln!(std::io::stderr(), "INFO [{}] {}", self.id, what.as_ref());
    }

    fn runtime(&mut self, started: Instant, budget: Duration) {
        let took = started.elapsed();
        self.check(took < budget, format!("runtime {:.2?} < {:?}", took, budget));
    }

    fn finish(self) {
        assert!(self.failures.is_empty(), "{} failing requirement(s):\n{}", self.failures.len(), self.failures.join("\n"));
    }
}

fn decompose(model: ModelSpec) -> SpectralDecomposition {
    diagonalize(&model.build().unwrap()).unwrap()
}

fn thermal_negativity(spectrum: &SpectralDecomposition, t: f64, a: usize, b: usize) -> f64 {
    let state = thermal_state(spectrum, t).unwrap();
    negativity(&partial_trace(&state, a, b).unwrap()).unwrap().value
}

fn linspace(min: f64, max: f64, n: usize) -> Vec<f64> {
    Axis::new(Parameter::J2, min, max, n).unwrap().values()
}

fn j2_sweep(n: usize, t: f64, min: f64, max: f64, steps: usize) -> SweepResult {
    let req = SweepRequest::new(ModelSpec::nn_ring(n), Axis::new(Parameter::J2, min, max, steps).unwrap()).with_temperature(t);
    run_sweep(&req).unwrap()
}

/// `(x, y)` pairs of one pair column restricted to `x ∈ [lo, hi]`.
fn column_on(result: &SweepResult, pair: PairSelector, lo: f64, hi: f64) -> Vec<(f64, f64)> {
    let ys = result.pair_column(pair).unwrap();
    result
        .rows
        .iter()
        .zip(ys)
        .map(|(r, y)| (r.params[0], y))
        .filter(|&(x, _)| x >= lo - 1e-12 && x <= hi + 1e-12)
        .collect()
}

fn max_abs_deviation(points: &[(f64, f64)], target: f64) -> f64 {
    points.iter().map(|&(_, y)| (y - target).abs()).fold(0.0, f64::max)
}

fn t_threshold(model: ModelSpec, pair: PairSelector, lo: f64, hi: f64) -> f64 {
    let r = find_threshold(&ThresholdRequest::new(model, Parameter::Temperature, pair, lo, hi)).unwrap();
    r.value.unwrap_or(f64::NAN)
}

#[test]
fn c01_two_spin_oracle() {
    let mut c = Criterion::new("c01");
    let started = Instant::now();
    let spectrum = decompose(ModelSpec::nn_ring(2));
    let max_diff = linspace(0.05, 2.0, 200)
        .into_iter()
        .map(|t| (thermal_negativity(&spectrum, t, 0, 1) - two_spin::negativity(1.0 / t)).abs())
        .fold(0.0, f64::max);
    c.check(max_diff <= 1e-10, format!("two-spin negativity vs closed form on 200 T-points: max|diff| = {max_diff:.2e} ≤ 1e-10"));
    c.runtime(started, Duration::from_secs(1));
    c.finish();
}

#[test]
fn c02_two_spin_threshold() {
    let mut c = Criterion::new("c02");
    let t = t_threshold(ModelSpec::nn_ring(2), PairSelector::HalfOne, 0.05, 3.0);
    c.near("T_th(N=2) by indicator bisection", t, 3.0 / (4.0 * 2f64.ln()), 1e-4);
    c.finish();
}

#[test]
fn c03_three_spin() {
    let mut c = Criterion::new("c03");
    let spectrum = decompose(ModelSpec::nn_ring(3));
    let ground = ground_manifold(&spectrum);
    let n12 = negativity(&partial_trace(&ground, 0, 1).unwrap()).unwrap().value;
    c.near("ground-manifold N12", n12, 1.0 / 3.0, 1e-9);
    let max13 = linspace(0.05, 5.0, 200)
        .into_iter()
        .map(|t| thermal_negativity(&spectrum, t, 0, 2))
        .fold(0.0, f64::max);
    c.check(max13 <= NEGATIVITY_EPSILON, format!("N13 ≤ ε_N on T ∈ [0.05, 5]: max = {max13:.2e}"));
    let t_th = t_threshold(ModelSpec::nn_ring(3), PairSelector::HalfOne, 0.05, 3.0);
    c.near("T_th(N=3)", t_th, 0.7609, 1e-3);
    c.info(format!("closed-form root of the N12 numerator: T = {:.6}", three_spin::threshold_temperature()));
    for t in [0.2, 0.5, 1.0] {
        let state = thermal_state(&spectrum, t).unwrap();
        let s12 = su2_signed_negativity(correlator(&state, 0, 1).unwrap(), PairKind::HalfOne).unwrap();
        let s13 = su2_signed_negativity(correlator(&state, 0, 2).unwrap(), PairKind::HalfHalf).unwrap();
        let diff = (state.energy() - three_spin::energy_relation(s12, s13)).abs();
        c.check(diff <= 1e-8, format!("U = -5/4 - N13 - 3 N12 (signed) at T={t}: |diff| = {diff:.2e}"));
    }
    c.finish();
}

#[test]
fn c04_four_spin_nn_and_even_relation() {
    let mut c = Criterion::new("c04");
    let started = Instant::now();
    let four = decompose(ModelSpec::nn_ring(4));
    let g = ground_manifold(&four);
    let n = negativity(&partial_trace(&g, 0, 1).unwrap()).unwrap().value;
    c.near("ground N12 (N=4)", n, 1.0 / 6.0, 1e-9);
    for n_sites in [4, 6, 8] {
        let spectrum = decompose(ModelSpec::nn_ring(n_sites));
        let max_diff = linspace(0.05, 2.0, 20)
            .into_iter()
            .map(|t| {
                let state = thermal_state(&spectrum, t).unwrap();
                let numeric = negativity(&partial_trace(&state, 0, 1).unwrap()).unwrap().value;
                (numeric - even_ring_negativity_from_energy(state.energy() / n_sites as f64)).abs()
            })
            .fold(0.0, f64::max);
        c.check(max_diff <= 1e-8, format!("N12 from energy per site, N={n_sites}, 20 T-points: max|diff| = {max_diff:.2e}"));
    }
    c.runtime(started, Duration::from_secs(120));
    c.finish();
}

#[test]
fn c05_four_spin_nnn_closed_forms() {
    let mut c = Criterion::new("c05");
    for j2 in [0.1, 0.3, 0.7] {
        let spectrum = decompose(ModelSpec::nn_ring(4).with_j2(j2));
        let levels = four_spin::levels(1.0, j2);
        let total: usize = levels.iter().map(|l| l.multiplicity).sum();
        let mut expected: Vec<f64> = levels.iter().flat_map(|l| std::iter::repeat_n(l.energy, l.multiplicity)).collect();
        expected.sort_by(f64::total_cmp);
        let dev = spectrum.eigenvalues().iter().zip(&expected).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        c.check(total == 36 && dev <= 1e-10, format!("spectrum at J2={j2}: multiplicities sum {total}, max deviation {dev:.2e}"));
        for beta in [0.5, 2.0, 10.0] {
            let state = thermal_state(&spectrum, 1.0 / beta).unwrap();
            let z = four_spin::log_partition(beta, 1.0, j2);
            let rel = (state.log_z() - z).abs() / z.abs();
            c.check(rel <= 1e-10, format!("ln Z at J2={j2}, β={beta}: relative diff {rel:.2e}"));
            let corr = correlator(&state, 0, 1).unwrap();
            let d = (corr - four_spin::correlator(beta, 1.0, j2)).abs();
            c.check(d <= 1e-10, format!("⟨s·S⟩ at J2={j2}, β={beta}: |diff| {d:.2e}"));
        }
    }
    c.finish();
}

#[test]
fn c06_four_spin_j2_profile() {
    let mut c = Criterion::new("c06");
    let started = Instant::now();
    let sweep = j2_sweep(4, 0.008, 0.0, 1.0, 200);
    let low = column_on(&sweep, PairSelector::HalfOne, 0.0, 0.24);
    c.check(
        max_abs_deviation(&low, 1.0 / 6.0) <= 0.01,
        format!("N_(1/2,1) = 1/6 ± 0.01 on [0, 0.24]: max deviation {:.2e}", max_abs_deviation(&low, 1.0 / 6.0)),
    );
    let high = column_on(&sweep, PairSelector::HalfOne, 0.26, 1.0);
    let (x_worst, worst) = high.iter().copied().fold((0.0, 0.0), |acc, p| if p.1 > acc.1 { p } else { acc });
    c.check(worst <= NEGATIVITY_EPSILON, format!("N_(1/2,1) ≤ ε_N on [0.26, 1]: max {worst:.2e} at J2 = {x_worst:.4}"));
    if worst > NEGATIVITY_EPSILON {
        let zero_from = high.iter().find(|p| p.1 <= NEGATIVITY_EPSILON).map_or(f64::NAN, |p| p.0);
        c.info(format!("N_(1/2,1) first ≤ ε_N at J2 = {zero_from:.4}"));
    }
    // Plateaus between the ground-level crossings at J2 = 1/4 and 1/2.
    let third = column_on(&sweep, PairSelector::OneOne, 0.30, 0.45);
    c.check(
        max_abs_deviation(&third, 1.0 / 3.0) <= 0.02,
        format!("N_(1,1) plateau 1/3 ± 0.02 on [0.30, 0.45]: max deviation {:.2e}", max_abs_deviation(&third, 1.0 / 3.0)),
    );
    let one = column_on(&sweep, PairSelector::OneOne, 0.55, 1.0);
    c.check(
        max_abs_deviation(&one, 1.0) <= 0.02,
        format!("N_(1,1) plateau 1 ± 0.02 on [0.55, 1]: max deviation {:.2e}", max_abs_deviation(&one, 1.0)),
    );
    let half = column_on(&sweep, PairSelector::HalfHalf, 0.55, 1.0);
    c.check(
        max_abs_deviation(&half, 0.5) <= 0.02,
        format!("N_(1/2,1/2) = 1/2 ± 0.02 on [0.55, 1]: max deviation {:.2e}", max_abs_deviation(&half, 0.5)),
    );
    c.runtime(started, Duration::from_secs(30));
    c.finish();
}

#[test]
fn c07_two_spin_field() {
    let mut c = Criterion::new("c07");
    let t = 0.05;
    let req = SweepRequest::new(ModelSpec::nn_ring(2), Axis::new(Parameter::FieldB, 0.0, 2.5, 251).unwrap()).with_temperature(t);
    let sweep = run_sweep(&req).unwrap();
    let target = 2f64.sqrt() / 3.0;
    let plateau = column_on(&sweep, PairSelector::HalfOne, 0.1, 1.4);
    let (xw, yw) = plateau
        .iter()
        .copied()
        .max_by(|a, b| (a.1 - target).abs().total_cmp(&(b.1 - target).abs()))
        .unwrap();
    c.check(
        (yw - target).abs() <= 1e-3,
        format!("plateau √2/3 ± 1e-3 on B ∈ [0.1, 1.4]: worst {yw:.6} at B = {xw:.2}"),
    );
    let th = find_threshold(&ThresholdRequest::new(ModelSpec::nn_ring(2), Parameter::FieldB, PairSelector::HalfOne, 0.1, 2.5).with_temperature(t))
        .unwrap();
    c.near("B_th by indicator bisection", th.value.unwrap_or(f64::NAN), 1.5, 0.01);
    let tail = column_on(&sweep, PairSelector::HalfOne, 1.55 + 1e-9, 2.5);
    let (xt, yt) = tail.iter().copied().fold((0.0, 0.0), |acc, p| if p.1 > acc.1 { p } else { acc });
    c.check(yt <= NEGATIVITY_EPSILON, format!("N ≤ ε_N for B > 1.55: max {yt:.2e} at B = {xt:.2}"));
    let ground = decompose(ModelSpec::nn_ring(2).with_field(1.5 + 1e-6));
    let g = ground_manifold(&ground);
    c.info(format!(
        "ground manifold just above B = 1.5: degeneracy {}, N = {:.3e}",
        g.degeneracy(),
        negativity(&partial_trace(&g, 0, 1).unwrap()).unwrap().value
    ));
    c.finish();
}

#[test]
fn c08_threshold_surface() {
    let mut c = Criterion::new("c08");
    let started = Instant::now();
    let model = ModelSpec::nn_ring(4);
    let j2_axis = Axis::new(Parameter::J2, 0.0, 1.0, 80).unwrap();
    let t_axis = Axis::new(Parameter::Temperature, 0.01, 1.2, 80).unwrap();

    let by_t = threshold_curve(&ThresholdCurveRequest::new(model, PairSelector::HalfOne, j2_axis, t_axis, CurveOrientation::J2OfTemperature)).unwrap();
    let (t_star, j2_star) = peak(&by_t);
    // Refine the peak on a finer temperature grid around the coarse maximum.
    let step = (t_axis.max - t_axis.min) / (t_axis.steps - 1) as f64;
    let fine_axis = Axis::new(Parameter::Temperature, (t_star - step).max(t_axis.min), t_star + step, 41).unwrap();
    let fine = threshold_curve(&ThresholdCurveRequest::new(model, PairSelector::HalfOne, j2_axis, fine_axis, CurveOrientation::J2OfTemperature)).unwrap();
    let (t_peak, j2_peak) = peak(&fine);
    let (t_peak, j2_peak) = if j2_peak >= j2_star { (t_peak, j2_peak) } else { (t_star, j2_star) };
    c.near("temperature of maximal J2_th", t_peak, 0.178, 0.02);

    let vanish_axis = Axis::new(Parameter::Temperature, 0.01, 1.5, 80).unwrap();
    let by_j2 = threshold_curve(&ThresholdCurveRequest::new(model, PairSelector::HalfOne, j2_axis, vanish_axis, CurveOrientation::TemperatureOfJ2)).unwrap();
    let (j2_at, t_vanish) = peak(&by_j2);
    c.near("global vanishing temperature (max T_th over J2)", t_vanish, 1.082, 0.005);
    c.info(format!("max T_th attained at J2 = {j2_at:.4}"));
    c.near("max over T of J2_th", j2_peak, 0.376, 0.005);
    let closed = |t: f64| four_spin::nn_negativity(1.0 / t, 1.0, 0.0);
    c.info(format!("closed-form N_(1/2,1) at J2=0 vanishes near T = {:.4}", bisect_zero(closed, 0.5, 2.0)));
    c.runtime(started, Duration::from_secs(120));
    c.finish();
}

/// `(fixed, threshold)` of the largest found threshold on a curve.
fn peak(curve: &[mixspin::sweep::CurvePoint]) -> (f64, f64) {
    curve
        .iter()
        .filter(|p| p.threshold.status == ThresholdStatus::Found)
        .map(|p| (p.fixed, p.threshold.value.unwrap()))
        .fold((f64::NAN, f64::NEG_INFINITY), |acc, p| if p.1 > acc.1 { p } else { acc })
}

/// Boundary of `f > ε_N` on `[lo, hi]`, entangled at `lo`.
fn bisect_zero(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > NEGATIVITY_EPSILON {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn c09_six_spin_features() {
    let mut c = Criterion::new("c09");
    let model = ModelSpec::nn_ring(6);
    let t = 0.02;
    let th = find_threshold(&ThresholdRequest::new(model, Parameter::J2, PairSelector::HalfOne, 0.0, 1.0).with_temperature(t)).unwrap();
    c.near("J2 where N_(1/2,1) drops to ≤ ε_N", th.value.unwrap_or(f64::NAN), 0.27, 0.02);
    let sweep = j2_sweep(6, t, 0.0, 1.0, 101);
    let hh = sweep.pair_column(PairSelector::HalfHalf).unwrap().into_iter().fold(0.0, f64::max);
    c.check(hh <= NEGATIVITY_EPSILON, format!("N_(1/2,1/2) ≤ ε_N on J2 ∈ [0, 1]: max {hh:.2e}"));
    let large = thermal_negativity(&decompose(model.with_j2(10.0)), t, 1, 3);
    c.near("N_(1,1) at large J2 (J2 = 10)", large, 0.33, 0.02);

    let j2_axis = Axis::new(Parameter::J2, 0.0, 1.0, 41).unwrap();
    let t_scan = Axis::new(Parameter::Temperature, 0.02, 1.5, 64).unwrap();
    let by_j2 = threshold_curve(&ThresholdCurveRequest::new(model, PairSelector::HalfOne, j2_axis, t_scan, CurveOrientation::TemperatureOfJ2)).unwrap();
    let (_, t_bound) = peak(&by_j2);
    c.near("region bound in T (max T_th over J2)", t_bound, 0.925, 0.01);
    let t_axis = Axis::new(Parameter::Temperature, 0.02, 1.0, 50).unwrap();
    let by_t = threshold_curve(&ThresholdCurveRequest::new(model, PairSelector::HalfOne, j2_axis, t_axis, CurveOrientation::J2OfTemperature)).unwrap();
    let (t_star, _) = peak(&by_t);
    let step = (t_axis.max - t_axis.min) / (t_axis.steps - 1) as f64;
    let fine_axis = Axis::new(Parameter::Temperature, (t_star - step).max(0.02), t_star + step, 21).unwrap();
    let fine = threshold_curve(&ThresholdCurveRequest::new(model, PairSelector::HalfOne, j2_axis, fine_axis, CurveOrientation::J2OfTemperature)).unwrap();
    let (t_peak, j2_bound) = peak(&by_t.iter().chain(&fine).copied().collect::<Vec<_>>());
    c.near("region bound in J2 (max J2_th over T)", j2_bound, 0.418, 0.01);
    c.info(format!("J2 bound attained at T = {t_peak:.4}"));
    c.finish();
}

#[test]
fn c10_eight_spin_features() {
    let mut c = Criterion::new("c10");
    let started = Instant::now();
    let sweep = j2_sweep(8, 0.02, 0.0, 1.0, 200);
    let ho = column_on(&sweep, PairSelector::HalfOne, 0.0, 1.0);
    let (jump_at, drop) = ho
        .windows(2)
        .map(|w| (0.5 * (w[0].0 + w[1].0), w[0].1 - w[1].1))
        .fold((f64::NAN, f64::NEG_INFINITY), |acc, p| if p.1 > acc.1 { p } else { acc });
    c.near("largest single-step drop of N_(1/2,1)", jump_at, 0.25, 0.02);
    c.info(format!("drop size {drop:.4}"));
    let last_entangled = ho.iter().rev().find(|p| p.1 > NEGATIVITY_EPSILON).map_or(f64::NAN, |p| p.0);
    let zero_from = ho.iter().find(|p| p.0 > last_entangled).map_or(f64::NAN, |p| p.0);
    c.near("N_(1/2,1) ≤ ε_N from J2", zero_from, 0.55, 0.03);
    let hh = column_on(&sweep, PairSelector::HalfHalf, 0.0, 1.0);
    let departs = hh.iter().find(|p| p.1 > NEGATIVITY_EPSILON).map_or(f64::NAN, |p| p.0);
    c.near("N_(1/2,1/2) departs from 0 at J2", departs, 0.67, 0.03);
    c.runtime(started, Duration::from_secs(300));
    c.finish();
}

#[test]
fn c11_trends() {
    let mut c = Criterion::new("c11");
    let t_th: Vec<(usize, f64)> = (3..=8)
        .map(|n| (n, t_threshold(ModelSpec::nn_ring(n), PairSelector::HalfOne, 0.05, 3.0)))
        .collect();
    let get = |n: usize| t_th.iter().find(|p| p.0 == n).unwrap().1;
    c.check(
        get(4) > get(6) && get(6) > get(8),
        format!("even rings: T_th(4) = {:.4} > T_th(6) = {:.4} > T_th(8) = {:.4}", get(4), get(6), get(8)),
    );
    c.check(
        get(3) < get(5) && get(5) < get(7),
        format!("odd rings: T_th(3) = {:.4} < T_th(5) = {:.4} < T_th(7) = {:.4}", get(3), get(5), get(7)),
    );
    for n in 2..=8 {
        let spectrum = decompose(ModelSpec::nn_ring(n));
        let values: Vec<f64> = linspace(0.02, 2.0, 60).into_iter().map(|t| thermal_negativity(&spectrum, t, 0, 1)).collect();
        let worst_rise = values.windows(2).map(|w| w[1] - w[0]).fold(f64::NEG_INFINITY, f64::max);
        c.check(worst_rise <= 1e-9, format!("N={n}: NN negativity non-increasing in T (largest rise {worst_rise:.2e})"));
    }
    c.finish();
}

fn random_orthogonal(rng: &mut StdRng, dim: usize) -> DMatrix<f64> {
    let m = DMatrix::from_fn(dim, dim, |_, _| rng.random_range(-1.0..1.0));
    m.qr().q()
}

fn sorted_eigenvalues(m: DMatrix<f64>) -> Vec<f64> {
    let mut v: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

fn check_density_matrix(m: &DMatrix<f64>) -> Result<(), String> {
    let trace_err = (m.trace() - 1.0).abs();
    let asym = (m - m.transpose()).abs().max();
    let min = sorted_eigenvalues(m.clone())[0];
    if trace_err > 1e-12 || asym > 1e-14 || min < -1e-12 {
        return Err(format!("trace error {trace_err:.1e}, asymmetry {asym:.1e}, min eigenvalue {min:.1e}"));
    }
    Ok(())
}

#[test]
fn c12_property_suite() {
    let mut c = Criterion::new("c12");
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let models = [
        ModelSpec::nn_ring(2),
        ModelSpec::nn_ring(3),
        ModelSpec::nn_ring(4),
        ModelSpec::nn_ring(5),
        ModelSpec::nn_ring(4).with_j2(0.3),
        ModelSpec::nn_ring(6).with_j2(0.6),
        ModelSpec::nn_ring(2).with_field(0.7),
        ModelSpec::nn_ring(4).with_field(0.4),
    ];
    let mut invariant_errors = Vec::new();
    let (mut pt_drift, mut rotation_drift, mut form_drift) = (0.0f64, 0.0f64, 0.0f64);
    let mut rotations = 0;
    for model in models {
        let spectrum = decompose(model);
        let pairs: Vec<(usize, usize)> = PairSelector::defaults_for(model.n_sites)
            .into_iter()
            .map(|p| p.sites(model.n_sites).unwrap())
            .collect();
        for t in [0.05, 0.3, 1.0] {
            let state = thermal_state(&spectrum, t).unwrap();
            if let Err(e) = check_density_matrix(&state.matrix()) {
                invariant_errors.push(format!("{model:?} T={t}: {e}"));
            }
            for &(a, b) in &pairs {
                let pair = partial_trace(&state, a, b).unwrap();
                if let Err(e) = check_density_matrix(pair.matrix()) {
                    invariant_errors.push(format!("{model:?} T={t} pair ({a},{b}): {e}"));
                }
                let first = sorted_eigenvalues(partial_transpose(&pair));
                let second = sorted_eigenvalues(partial_transpose_second(&pair));
                pt_drift = first.iter().zip(&second).map(|(x, y)| (x - y).abs()).fold(pt_drift, f64::max);
                let result = negativity(&pair).unwrap();
                let from_norm = (first.iter().map(|x| x.abs()).sum::<f64>() - 1.0) / 2.0;
                form_drift = form_drift.max((result.value - from_norm).abs());
                if rotations < 20 {
                    let (da, db) = pair.dims();
                    let rotated = pair.rotated(&random_orthogonal(&mut rng, da), &random_orthogonal(&mut rng, db));
                    rotation_drift = rotation_drift.max((negativity(&rotated).unwrap().value - result.value).abs());
                    rotations += 1;
                }
            }
        }
    }
    c.check(
        invariant_errors.is_empty(),
        format!("thermal and reduced states: unit trace, symmetric, PSD ({} violations) {}", invariant_errors.len(), invariant_errors.join("; ")),
    );
    c.check(pt_drift <= 1e-12, format!("partial transpose on either subsystem has the same spectrum: max drift {pt_drift:.2e}"));
    c.check(
        rotations == 20 && rotation_drift <= 1e-9,
        format!("negativity invariant under {rotations} random local rotations: max drift {rotation_drift:.2e}"),
    );
    c.check(form_drift <= 1e-10, format!("negative-eigenvalue sum vs trace-norm form: max diff {form_drift:.2e}"));

    let mut su2_drift = 0.0f64;
    let mut su2_models = (2..=8).map(ModelSpec::nn_ring).collect::<Vec<_>>();
    for n in [4, 6, 8] {
        su2_models.extend([0.2, 0.6].map(|j2| ModelSpec::nn_ring(n).with_j2(j2)));
    }
    for model in &su2_models {
        let spectrum = decompose(*model);
        let mut pairs = vec![(0, 1, PairKind::HalfOne)];
        if model.n_sites >= 3 {
            pairs.push((0, 2, PairKind::HalfHalf));
        }
        for t in [0.05, 0.5, 1.5] {
            let state = thermal_state(&spectrum, t).unwrap();
            for &(a, b, kind) in &pairs {
                let numeric = negativity(&partial_trace(&state, a, b).unwrap()).unwrap().value;
                let shortcut = su2_negativity(correlator(&state, a, b).unwrap(), kind).unwrap();
                su2_drift = su2_drift.max((numeric - shortcut).abs());
            }
        }
    }
    c.check(
        su2_drift <= 1e-8,
        format!("correlator shortcut on {} zero-field models: max diff {su2_drift:.2e}", su2_models.len()),
    );
    c.finish();
}

//! Closed-form versus numerical comparisons, collected into one report.

use nalgebra::DMatrix;

use crate::closed_forms::{even_ring_negativity_from_energy, field_two_spin, four_spin, three_spin, two_spin};
use crate::entanglement::{negativity, partial_trace, partial_transpose, su2_signed_negativity, PairKind};
use crate::error::Result;
use crate::io::csv::{Cell, CsvTable};
use crate::model::ModelSpec;
use crate::spectral::{correlator, diagonalize, ground_manifold, thermal_state, SpectralDecomposition, SpectralMixture};
use crate::sweep::{find_threshold, PairSelector, Parameter, ThresholdRequest};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    /// Largest ring included in the even-ring checks.
    pub max_sites: usize,
    /// Multiplies `J₂` in the numerical models only. Anything but 1 should
    /// make the next-nearest-neighbour checks fail.
    pub j2_scale: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            max_sites: 8,
            j2_scale: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckRow {
    pub check: &'static str,
    pub param: String,
    pub numeric: f64,
    pub reference: f64,
    pub tolerance: f64,
}

impl CheckRow {
    pub fn abs_diff(&self) -> f64 {
        (self.numeric - self.reference).abs()
    }

    /// NaN differences fail.
    pub fn passed(&self) -> bool {
        self.abs_diff() <= self.tolerance
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct VerifyReport {
    pub rows: Vec<CheckRow>,
}

/// Worst row of one check.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckSummary {
    pub check: &'static str,
    pub rows: usize,
    pub max_abs_diff: f64,
    pub failures: usize,
}

impl VerifyReport {
    fn push(&mut self, check: &'static str, param: impl Into<String>, numeric: f64, reference: f64, tolerance: f64) {
        self.rows.push(CheckRow {
            check,
            param: param.into(),
            numeric,
            reference,
            tolerance,
        });
    }

    pub fn all_passed(&self) -> bool {
        self.rows.iter().all(CheckRow::passed)
    }

    pub fn failures(&self) -> Vec<&CheckRow> {
        self.rows.iter().filter(|r| !r.passed()).collect()
    }

    /// One entry per check, in report order.
    pub fn summary(&self) -> Vec<CheckSummary> {
        let mut out: Vec<CheckSummary> = Vec::new();
        for row in &self.rows {
            let idx = match out.iter().position(|s| s.check == row.check) {
                Some(i) => i,
                None => {
                    out.push(CheckSummary {
                        check: row.check,
                        rows: 0,
                        max_abs_diff: 0.0,
                        failures: 0,
                    });
                    out.len() - 1
                }
            };
            let s = &mut out[idx];
            s.rows += 1;
            s.max_abs_diff = s.max_abs_diff.max(row.abs_diff());
            s.failures += usize::from(!row.passed());
        }
        out
    }

    pub fn table(&self, comments: Vec<String>) -> CsvTable {
        let mut table = CsvTable::new(
            ["check", "param", "numeric", "reference", "abs_diff", "tolerance", "status"]
                .map(String::from)
                .to_vec(),
        );
        table.comments = comments;
        for r in &self.rows {
            table.push_row(vec![
                Cell::from(r.check),
                Cell::Text(r.param.clone()),
                Cell::Real(r.numeric),
                Cell::Real(r.reference),
                Cell::Real(r.abs_diff()),
                Cell::Real(r.tolerance),
                Cell::from(if r.passed() { "pass" } else { "fail" }),
            ]);
        }
        table
    }
}

fn decompose(model: ModelSpec) -> Result<SpectralDecomposition> {
    diagonalize(&model.build()?)
}

fn max_deviation(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    (a - b).abs().max()
}

fn sorted_eigenvalues(m: DMatrix<f64>) -> Vec<f64> {
    let mut v: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

fn linspace(min: f64, max: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |k| min + (max - min) * k as f64 / (n - 1) as f64)
}

pub fn verify_all(opts: &VerifyOptions) -> Result<VerifyReport> {
    let mut report = VerifyReport::default();
    two_spin_checks(&mut report)?;
    three_spin_checks(&mut report)?;
    even_ring_checks(&mut report, opts)?;
    four_spin_checks(&mut report, opts)?;
    field_checks(&mut report)?;
    Ok(report)
}

fn two_spin_checks(report: &mut VerifyReport) -> Result<()> {
    let spectrum = decompose(ModelSpec::nn_ring(2))?;
    for t in linspace(0.05, 2.0, 200) {
        let state = thermal_state(&spectrum, t)?;
        let n = negativity(&partial_trace(&state, 0, 1)?)?.value;
        report.push("two_spin_negativity", format!("T={t}"), n, two_spin::negativity(1.0 / t), 1e-10);
    }
    for t in [0.1, 0.5, 1.0, 2.0] {
        let state = thermal_state(&spectrum, t)?;
        let rho = partial_trace(&state, 0, 1)?;
        let reference = two_spin::elements(1.0 / t).kronecker_matrix();
        report.push("two_spin_elements", format!("T={t} max element deviation"), max_deviation(rho.matrix(), &reference), 0.0, 1e-12);
        report.push("two_spin_energy", format!("T={t}"), state.energy(), two_spin::internal_energy(1.0 / t), 1e-10);
        report.push("two_spin_log_partition", format!("T={t}"), state.log_z(), two_spin::log_partition(1.0 / t), 1e-10);
    }
    let ground = ground_manifold(&spectrum);
    report.push("two_spin_ground", "T=0", negativity(&partial_trace(&ground, 0, 1)?)?.value, 1.0 / 3.0, 1e-9);
    let th = find_threshold(&ThresholdRequest::new(ModelSpec::nn_ring(2), Parameter::Temperature, PairSelector::HalfOne, 0.05, 3.0))?;
    report.push("two_spin_threshold", "T_th", th.value.unwrap_or(f64::NAN), two_spin::threshold_temperature(), 1e-4);
    Ok(())
}

fn three_spin_checks(report: &mut VerifyReport) -> Result<()> {
    let spectrum = decompose(ModelSpec::nn_ring(3))?;
    for t in linspace(0.05, 2.0, 40) {
        let beta = 1.0 / t;
        let state = thermal_state(&spectrum, t)?;
        let n12 = negativity(&partial_trace(&state, 0, 1)?)?.value;
        report.push("three_spin_negativity_12", format!("T={t}"), n12, three_spin::negativity_12(beta), 1e-10);
        let rho13 = partial_trace(&state, 0, 2)?;
        report.push("three_spin_negativity_13", format!("T={t}"), negativity(&rho13)?.value, three_spin::negativity_13(beta), 1e-10);
    }
    for t in [0.2, 0.5, 1.0, 3.0] {
        let beta = 1.0 / t;
        let state = thermal_state(&spectrum, t)?;
        let rho12 = partial_trace(&state, 0, 1)?;
        let ref12 = three_spin::rho12(beta).kronecker_matrix();
        report.push("three_spin_rho12", format!("T={t} max element deviation"), max_deviation(rho12.matrix(), &ref12), 0.0, 1e-12);
        let rho13 = partial_trace(&state, 0, 2)?;
        let ref13 = three_spin::rho13_matrix(beta);
        report.push("three_spin_rho13", format!("T={t} max element deviation"), max_deviation(rho13.matrix(), &ref13), 0.0, 1e-12);
        let numeric = sorted_eigenvalues(partial_transpose(&rho13));
        let mut reference = three_spin::rho13_transpose_spectrum(beta).to_vec();
        reference.sort_by(f64::total_cmp);
        let dev = numeric.iter().zip(&reference).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        report.push("three_spin_transpose_spectrum", format!("T={t} max eigenvalue deviation"), dev, 0.0, 1e-12);
        report.push("three_spin_log_partition", format!("T={t}"), state.log_z(), three_spin::log_partition(beta), 1e-10);
    }
    for t in [0.2, 0.5, 1.0] {
        let state = thermal_state(&spectrum, t)?;
        let n12 = su2_signed_negativity(correlator(&state, 0, 1)?, PairKind::HalfOne)?;
        let n13 = su2_signed_negativity(correlator(&state, 0, 2)?, PairKind::HalfHalf)?;
        report.push("three_spin_energy_relation", format!("T={t}"), state.energy(), three_spin::energy_relation(n12, n13), 1e-8);
    }
    let ground = ground_manifold(&spectrum);
    report.push("three_spin_ground", "T=0", negativity(&partial_trace(&ground, 0, 1)?)?.value, 1.0 / 3.0, 1e-9);
    let th = find_threshold(&ThresholdRequest::new(ModelSpec::nn_ring(3), Parameter::Temperature, PairSelector::HalfOne, 0.05, 3.0))?;
    report.push("three_spin_threshold", "T_th", th.value.unwrap_or(f64::NAN), three_spin::threshold_temperature(), 1e-6);
    Ok(())
}

fn even_ring_checks(report: &mut VerifyReport, opts: &VerifyOptions) -> Result<()> {
    for n in [4, 6, 8].into_iter().filter(|&n| n <= opts.max_sites) {
        let spectrum = decompose(ModelSpec::nn_ring(n))?;
        for t in linspace(0.05, 2.0, 20) {
            let state = thermal_state(&spectrum, t)?;
            let numeric = negativity(&partial_trace(&state, 0, 1)?)?.value;
            let reference = even_ring_negativity_from_energy(state.energy() / n as f64);
            report.push("even_ring_energy_relation", format!("N={n} T={t}"), numeric, reference, 1e-8);
        }
    }
    Ok(())
}

fn four_spin_checks(report: &mut VerifyReport, opts: &VerifyOptions) -> Result<()> {
    for j2 in [0.1, 0.3, 0.7] {
        let spectrum = decompose(ModelSpec::nn_ring(4).with_j2(j2 * opts.j2_scale))?;
        let mut reference: Vec<f64> = four_spin::levels(1.0, j2)
            .iter()
            .flat_map(|l| std::iter::repeat_n(l.energy, l.multiplicity))
            .collect();
        reference.sort_by(f64::total_cmp);
        let dev = spectrum
            .eigenvalues()
            .iter()
            .zip(&reference)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        report.push("four_spin_spectrum", format!("J2={j2} max eigenvalue deviation"), dev, 0.0, 1e-10);
        for beta in [0.5, 2.0, 10.0] {
            let state = thermal_state(&spectrum, 1.0 / beta)?;
            let reference = four_spin::log_partition(beta, 1.0, j2);
            report.push("four_spin_log_partition", format!("J2={j2} beta={beta}"), state.log_z(), reference, 1e-10 * reference.abs());
            report.push("four_spin_correlator", format!("J2={j2} beta={beta}"), correlator(&state, 0, 1)?, four_spin::correlator(beta, 1.0, j2), 1e-10);
        }
    }
    let ground = decompose(ModelSpec::nn_ring(4))?;
    let ground = ground_manifold(&ground);
    report.push("four_spin_ground", "J2=0 T=0", negativity(&partial_trace(&ground, 0, 1)?)?.value, 1.0 / 6.0, 1e-9);
    Ok(())
}

fn field_checks(report: &mut VerifyReport) -> Result<()> {
    for b in [0.2, 1.0, 1.4, 1.6] {
        let spectrum = decompose(ModelSpec::nn_ring(2).with_field(b))?;
        for t in [0.05, 0.5] {
            let beta = 1.0 / t;
            let state = thermal_state(&spectrum, t)?;
            let rho = partial_trace(&state, 0, 1)?;
            let elements = field_two_spin::elements(beta, b);
            let param = format!("B={b} T={t}");
            report.push("field_negativity", param.clone(), negativity(&rho)?.value, elements.block_negativity(), 1e-10);
            report.push("field_elements", format!("{param} max element deviation"), max_deviation(rho.matrix(), &elements.kronecker_matrix()), 0.0, 1e-12);
            report.push("field_log_partition", param, state.log_z(), field_two_spin::log_partition(beta, b), 1e-10 * state.log_z().abs().max(1.0));
        }
    }
    Ok(())
}

//! Parameter sweeps, threshold location and threshold curves.
//!
//! Grid points sharing the same couplings share one diagonalization; the
//! temperature axis never triggers a new one. Output order is always
//! axis1-major, independent of how many threads did the work.

use std::fmt;
use std::str::FromStr;

use crate::entanglement::{negativity, partial_trace};
use crate::error::{Error, Result};
use crate::model::ModelSpec;
use crate::spectral::{diagonalize, thermal_state, SpectralDecomposition, SpectralMixture};

/// Negativities above this count as entangled when locating thresholds.
pub const NEGATIVITY_EPSILON: f64 = 1e-9;
pub const DEFAULT_SCAN_POINTS: usize = 64;
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parameter {
    Temperature,
    FieldB,
    J2,
}

impl Parameter {
    pub fn name(self) -> &'static str {
        match self {
            Parameter::Temperature => "t",
            Parameter::FieldB => "b",
            Parameter::J2 => "j2",
        }
    }

    /// Column heading in CSV output.
    pub fn column(self) -> &'static str {
        match self {
            Parameter::Temperature => "T",
            Parameter::FieldB => "B",
            Parameter::J2 => "J2",
        }
    }

    fn apply(self, model: ModelSpec, value: f64) -> ModelSpec {
        match self {
            Parameter::Temperature => model,
            Parameter::FieldB => model.with_field(value),
            Parameter::J2 => model.with_j2(value),
        }
    }
}

impl fmt::Display for Parameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Parameter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "t" | "temperature" => Ok(Parameter::Temperature),
            "b" | "field" | "field_b" => Ok(Parameter::FieldB),
            "j2" => Ok(Parameter::J2),
            _ => Err(Error::InvalidSweep(format!("unknown parameter `{s}` (expected t, b or j2)"))),
        }
    }
}

/// Evenly spaced axis including both end points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub parameter: Parameter,
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl Axis {
    pub fn new(parameter: Parameter, min: f64, max: f64, steps: usize) -> Result<Self> {
        let axis = Axis {
            parameter,
            min,
            max,
            steps,
        };
        axis.validate()?;
        Ok(axis)
    }

    pub fn validate(&self) -> Result<()> {
        if self.steps < 2 {
            return Err(Error::InvalidSweep(format!("{} axis needs at least 2 steps", self.parameter)));
        }
        if !(self.min.is_finite() && self.max.is_finite() && self.min < self.max) {
            return Err(Error::InvalidSweep(format!(
                "{} axis needs finite min < max, got [{}, {}]",
                self.parameter, self.min, self.max
            )));
        }
        if self.parameter == Parameter::Temperature && self.min <= 0.0 {
            return Err(Error::InvalidSweep(format!("temperature axis must be positive, got min {}", self.min)));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        linspace(self.min, self.max, self.steps)
    }
}

fn linspace(min: f64, max: f64, steps: usize) -> Vec<f64> {
    let last = (steps - 1) as f64;
    (0..steps)
        .map(|k| if k + 1 == steps { max } else { min + (max - min) * k as f64 / last })
        .collect()
}

/// A site pair, either by spin content or explicitly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PairSelector {
    /// Nearest neighbours, sites 0 and 1.
    HalfOne,
    /// Next-nearest spin halves, sites 0 and 2.
    HalfHalf,
    /// Next-nearest spin ones, sites 1 and 3.
    OneOne,
    Sites(usize, usize),
}

impl PairSelector {
    pub fn sites(self, n_sites: usize) -> Result<(usize, usize)> {
        let (a, b) = match self {
            PairSelector::HalfOne => (0, 1),
            PairSelector::HalfHalf => (0, 2),
            PairSelector::OneOne => (1, 3),
            PairSelector::Sites(a, b) => (a, b),
        };
        if a == b || a.max(b) >= n_sites {
            return Err(Error::InvalidSweep(format!("pair {self} is not available for N={n_sites}")));
        }
        Ok((a, b))
    }

    pub fn column(self) -> String {
        match self {
            PairSelector::HalfOne => "N_half_one".into(),
            PairSelector::HalfHalf => "N_half_half".into(),
            PairSelector::OneOne => "N_one_one".into(),
            PairSelector::Sites(a, b) => format!("N_{a}_{b}"),
        }
    }

    /// Every symbolic pair that exists on an `n_sites` ring.
    pub fn defaults_for(n_sites: usize) -> Vec<PairSelector> {
        [PairSelector::HalfOne, PairSelector::HalfHalf, PairSelector::OneOne]
            .into_iter()
            .filter(|p| p.sites(n_sites).is_ok())
            .collect()
    }
}

impl fmt::Display for PairSelector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PairSelector::HalfOne => f.write_str("half_one"),
            PairSelector::HalfHalf => f.write_str("half_half"),
            PairSelector::OneOne => f.write_str("one_one"),
            PairSelector::Sites(a, b) => write!(f, "{a}-{b}"),
        }
    }
}

impl FromStr for PairSelector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "half_one" => Ok(PairSelector::HalfOne),
            "half_half" => Ok(PairSelector::HalfHalf),
            "one_one" => Ok(PairSelector::OneOne),
            _ => {
                let parsed = s
                    .split_once('-')
                    .and_then(|(a, b)| Some((a.trim().parse().ok()?, b.trim().parse().ok()?)));
                parsed
                    .map(|(a, b)| PairSelector::Sites(a, b))
                    .ok_or_else(|| Error::InvalidSweep(format!("unknown pair `{s}`")))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRequest {
    pub model: ModelSpec,
    /// Fixed temperature, required unless one axis is the temperature.
    pub temperature: Option<f64>,
    pub axis1: Axis,
    pub axis2: Option<Axis>,
    pub pairs: Vec<PairSelector>,
}

impl SweepRequest {
    pub fn new(model: ModelSpec, axis1: Axis) -> Self {
        SweepRequest {
            model,
            temperature: None,
            axis1,
            axis2: None,
            pairs: PairSelector::defaults_for(model.n_sites),
        }
    }

    pub fn with_temperature(self, temperature: f64) -> Self {
        SweepRequest {
            temperature: Some(temperature),
            ..self
        }
    }

    pub fn with_axis2(self, axis: Axis) -> Self {
        SweepRequest {
            axis2: Some(axis),
            ..self
        }
    }

    pub fn with_pairs(self, pairs: Vec<PairSelector>) -> Self {
        SweepRequest { pairs, ..self }
    }

    fn axes(&self) -> impl Iterator<Item = &Axis> {
        std::iter::once(&self.axis1).chain(self.axis2.as_ref())
    }

    pub fn validate(&self) -> Result<()> {
        for axis in self.axes() {
            axis.validate()?;
        }
        if let Some(a2) = &self.axis2 {
            if a2.parameter == self.axis1.parameter {
                return Err(Error::InvalidSweep(format!("both axes sweep {}", a2.parameter)));
            }
        }
        if !self.axes().any(|a| a.parameter == Parameter::Temperature) {
            match self.temperature {
                Some(t) if t.is_finite() && t > 0.0 => {}
                Some(t) => return Err(Error::InvalidTemperature(t)),
                None => return Err(Error::InvalidSweep("a fixed temperature is required".into())),
            }
        }
        // The model constraints are linear in the couplings, so checking the
        // corners of the grid covers every point.
        for &(x, y) in &self.corners() {
            self.point_model(x, y).validate()?;
        }
        for pair in &self.pairs {
            pair.sites(self.model.n_sites)?;
        }
        Ok(())
    }

    fn corners(&self) -> Vec<(f64, Option<f64>)> {
        let ends = |a: &Axis| [a.min, a.max];
        match &self.axis2 {
            None => ends(&self.axis1).iter().map(|&x| (x, None)).collect(),
            Some(a2) => ends(&self.axis1)
                .iter()
                .flat_map(|&x| ends(a2).map(move |y| (x, Some(y))))
                .collect(),
        }
    }

    fn point_model(&self, x: f64, y: Option<f64>) -> ModelSpec {
        let m = self.axis1.parameter.apply(self.model, x);
        match (&self.axis2, y) {
            (Some(a2), Some(y)) => a2.parameter.apply(m, y),
            _ => m,
        }
    }

    fn point_temperature(&self, x: f64, y: Option<f64>) -> f64 {
        if self.axis1.parameter == Parameter::Temperature {
            return x;
        }
        match (&self.axis2, y) {
            (Some(a2), Some(y)) if a2.parameter == Parameter::Temperature => y,
            _ => self.temperature.unwrap_or(f64::NAN),
        }
    }

    fn describe_point(&self, x: f64, y: Option<f64>) -> String {
        let mut s = format!("{}={x}", self.axis1.parameter);
        if let (Some(a2), Some(y)) = (&self.axis2, y) {
            s += &format!(", {}={y}", a2.parameter);
        }
        s
    }

    pub fn row_count(&self) -> usize {
        self.axis1.steps * self.axis2.map_or(1, |a| a.steps)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    /// Axis values, axis1 first.
    pub params: Vec<f64>,
    /// One entry per requested pair, in request order.
    pub negativities: Vec<f64>,
    /// `⟨H⟩` of the whole ring.
    pub energy: f64,
    pub log_z: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub request: SweepRequest,
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    pub fn columns(&self) -> Vec<String> {
        let mut cols: Vec<String> = self.request.axes().map(|a| a.parameter.column().to_string()).collect();
        cols.extend(self.request.pairs.iter().map(|p| p.column()));
        cols.push("U".into());
        cols.push("logZ".into());
        cols
    }

    /// Row values in column order.
    pub fn row_values(row: &SweepRow) -> Vec<f64> {
        let mut v = row.params.clone();
        v.extend(&row.negativities);
        v.push(row.energy);
        v.push(row.log_z);
        v
    }

    /// Values of one pair column, in row order.
    pub fn pair_column(&self, pair: PairSelector) -> Option<Vec<f64>> {
        let k = self.request.pairs.iter().position(|&p| p == pair)?;
        Some(self.rows.iter().map(|r| r.negativities[k]).collect())
    }
}

#[cfg(feature = "parallel")]
fn par_map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn par_map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    items.iter().map(f).collect()
}

/// First error in input order, so that failures are reproducible.
fn collect_ordered<R>(results: Vec<Result<R>>) -> Result<Vec<R>> {
    results.into_iter().collect()
}

fn at_point(point: String) -> impl FnOnce(Error) -> Error {
    move |e| Error::AtGridPoint {
        point,
        source: Box::new(e),
    }
}

struct CouplingGroup {
    model: ModelSpec,
    /// `(row index, params, temperature, description)`
    points: Vec<(usize, Vec<f64>, f64, String)>,
}

pub fn run_sweep(req: &SweepRequest) -> Result<SweepResult> {
    req.validate()?;
    let n = req.model.n_sites;
    let sites = req.pairs.iter().map(|p| p.sites(n)).collect::<Result<Vec<_>>>()?;
    let ys: Vec<Option<f64>> = match &req.axis2 {
        Some(a2) => a2.values().into_iter().map(Some).collect(),
        None => vec![None],
    };

    let mut groups: Vec<CouplingGroup> = Vec::new();
    let mut index = 0;
    for x in req.axis1.values() {
        for &y in &ys {
            let model = req.point_model(x, y);
            let params: Vec<f64> = std::iter::once(x).chain(y).collect();
            let entry = (index, params, req.point_temperature(x, y), req.describe_point(x, y));
            match groups.iter_mut().find(|g| same_couplings(&g.model, &model)) {
                Some(g) => g.points.push(entry),
                None => groups.push(CouplingGroup {
                    model,
                    points: vec![entry],
                }),
            }
            index += 1;
        }
    }

    let computed = par_map(&groups, |g| -> Result<Vec<(usize, SweepRow)>> {
        let first = || g.points[0].3.clone();
        let spectrum = g.model.build().and_then(|h| diagonalize(&h)).map_err(at_point(first()))?;
        g.points
            .iter()
            .map(|(idx, params, t, desc)| {
                evaluate(&spectrum, *t, &sites)
                    .map(|(negativities, energy, log_z)| {
                        (
                            *idx,
                            SweepRow {
                                params: params.clone(),
                                negativities,
                                energy,
                                log_z,
                            },
                        )
                    })
                    .map_err(at_point(desc.clone()))
            })
            .collect()
    });

    let mut rows: Vec<Option<SweepRow>> = vec![None; index];
    for group in collect_ordered(computed)? {
        for (idx, row) in group {
            rows[idx] = Some(row);
        }
    }
    Ok(SweepResult {
        request: req.clone(),
        rows: rows.into_iter().map(|r| r.expect("every grid point is evaluated")).collect(),
    })
}

fn same_couplings(a: &ModelSpec, b: &ModelSpec) -> bool {
    a.n_sites == b.n_sites
        && a.j1.to_bits() == b.j1.to_bits()
        && a.j2.to_bits() == b.j2.to_bits()
        && a.field_b.to_bits() == b.field_b.to_bits()
}

fn evaluate(spectrum: &SpectralDecomposition, temperature: f64, sites: &[(usize, usize)]) -> Result<(Vec<f64>, f64, f64)> {
    let state = thermal_state(spectrum, temperature)?;
    let negativities = sites
        .iter()
        .map(|&(a, b)| Ok(negativity(&partial_trace(&state, a, b)?)?.value))
        .collect::<Result<Vec<_>>>()?;
    Ok((negativities, state.energy(), state.log_z()))
}

/// Negativity of one pair in the thermal state.
pub fn pair_negativity(spectrum: &SpectralDecomposition, temperature: f64, site_a: usize, site_b: usize) -> Result<f64> {
    let state = thermal_state(spectrum, temperature)?;
    Ok(negativity(&partial_trace(&state, site_a, site_b)?)?.value)
}

/// Which sign change to report when the scan finds several.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Crossing {
    First,
    #[default]
    Last,
}

impl FromStr for Crossing {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "first" => Ok(Crossing::First),
            "last" => Ok(Crossing::Last),
            _ => Err(Error::InvalidSweep(format!("unknown crossing `{s}` (expected first or last)"))),
        }
    }
}

impl fmt::Display for Crossing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Crossing::First => "first",
            Crossing::Last => "last",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThresholdStatus {
    Found,
    NoneInRange,
}

impl ThresholdStatus {
    pub fn label(self) -> &'static str {
        match self {
            ThresholdStatus::Found => "found",
            ThresholdStatus::NoneInRange => "none-in-range",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdResult {
    pub parameter: Parameter,
    /// Midpoint of the final bracket.
    pub value: Option<f64>,
    /// `(lo, hi)` with the entanglement indicator differing at the two ends.
    pub bracket: Option<(f64, f64)>,
    /// Whether the pair is entangled on the low side of the bracket.
    pub entangled_below: Option<bool>,
    pub status: ThresholdStatus,
}

impl ThresholdResult {
    fn none(parameter: Parameter) -> Self {
        ThresholdResult {
            parameter,
            value: None,
            bracket: None,
            entangled_below: None,
            status: ThresholdStatus::NoneInRange,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdRequest {
    pub model: ModelSpec,
    /// Fixed temperature when searching in a coupling.
    pub temperature: Option<f64>,
    pub parameter: Parameter,
    pub pair: PairSelector,
    pub lo: f64,
    pub hi: f64,
    pub scan_points: usize,
    pub crossing: Crossing,
    /// Stop once the bracket is narrower than `tolerance · max(1, |x|)`.
    pub tolerance: f64,
}

impl ThresholdRequest {
    pub fn new(model: ModelSpec, parameter: Parameter, pair: PairSelector, lo: f64, hi: f64) -> Self {
        ThresholdRequest {
            model,
            temperature: None,
            parameter,
            pair,
            lo,
            hi,
            scan_points: DEFAULT_SCAN_POINTS,
            crossing: Crossing::default(),
            tolerance: DEFAULT_TOLERANCE,
        }
    }

    pub fn with_temperature(self, temperature: f64) -> Self {
        ThresholdRequest {
            temperature: Some(temperature),
            ..self
        }
    }

    pub fn with_crossing(self, crossing: Crossing) -> Self {
        ThresholdRequest { crossing, ..self }
    }

    pub fn with_tolerance(self, tolerance: f64) -> Self {
        ThresholdRequest { tolerance, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        Axis::new(self.parameter, self.lo, self.hi, self.scan_points.max(2))?;
        if self.scan_points < 2 {
            return Err(Error::InvalidSweep("threshold scan needs at least 2 points".into()));
        }
        if !(self.tolerance > 0.0 && self.tolerance <= 1e-6) {
            return Err(Error::InvalidSweep(format!("tolerance must be in (0, 1e-6], got {}", self.tolerance)));
        }
        if self.parameter != Parameter::Temperature {
            match self.temperature {
                Some(t) if t.is_finite() && t > 0.0 => {}
                Some(t) => return Err(Error::InvalidTemperature(t)),
                None => return Err(Error::InvalidSweep("a fixed temperature is required".into())),
            }
        }
        for x in [self.lo, self.hi] {
            self.parameter.apply(self.model, x).validate()?;
        }
        self.pair.sites(self.model.n_sites)?;
        Ok(())
    }
}

pub fn find_threshold(req: &ThresholdRequest) -> Result<ThresholdResult> {
    req.validate()?;
    let (a, b) = req.pair.sites(req.model.n_sites)?;
    let scan = linspace(req.lo, req.hi, req.scan_points);
    if req.parameter == Parameter::Temperature {
        let spectrum = diagonalize(&req.model.build()?)?;
        let mut entangled = |t: f64| {
            pair_negativity(&spectrum, t, a, b)
                .map(|n| n > NEGATIVITY_EPSILON)
                .map_err(at_point(format!("t={t}")))
        };
        let flags = scan.iter().map(|&t| entangled(t)).collect::<Result<Vec<_>>>()?;
        locate_boundary(req.parameter, &scan, &flags, &mut entangled, req.crossing, req.tolerance)
    } else {
        let t = req.temperature.expect("validated");
        let mut entangled = |x: f64| coupling_indicator(req.parameter.apply(req.model, x), t, (a, b), req.parameter, x);
        let flags = scan.iter().map(|&x| entangled(x)).collect::<Result<Vec<_>>>()?;
        locate_boundary(req.parameter, &scan, &flags, &mut entangled, req.crossing, req.tolerance)
    }
}

fn coupling_indicator(model: ModelSpec, t: f64, (a, b): (usize, usize), parameter: Parameter, x: f64) -> Result<bool> {
    let spectrum = model
        .build()
        .and_then(|h| diagonalize(&h))
        .map_err(at_point(format!("{parameter}={x}")))?;
    pair_negativity(&spectrum, t, a, b)
        .map(|n| n > NEGATIVITY_EPSILON)
        .map_err(at_point(format!("{parameter}={x}")))
}

/// Bisects the entanglement indicator between the scan points that bracket
/// the chosen sign change. The indicator rather than the negativity itself is
/// bisected, so jumps at level crossings are located as well as smooth zeros.
fn locate_boundary(
    parameter: Parameter,
    scan: &[f64],
    flags: &[bool],
    indicator: &mut dyn FnMut(f64) -> Result<bool>,
    crossing: Crossing,
    tolerance: f64,
) -> Result<ThresholdResult> {
    let mut changes = (0..scan.len() - 1).filter(|&k| flags[k] != flags[k + 1]);
    let k = match crossing {
        Crossing::First => changes.next(),
        Crossing::Last => changes.next_back(),
    };
    let Some(k) = k else {
        return Ok(ThresholdResult::none(parameter));
    };
    let (mut lo, mut hi) = (scan[k], scan[k + 1]);
    let low_flag = flags[k];
    while hi - lo > tolerance * lo.abs().max(hi.abs()).max(1.0) {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if indicator(mid)? == low_flag {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(ThresholdResult {
        parameter,
        value: Some(0.5 * (lo + hi)),
        bracket: Some((lo, hi)),
        entangled_below: Some(low_flag),
        status: ThresholdStatus::Found,
    })
}

/// Which variable is solved for along a zero-negativity boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveOrientation {
    /// Threshold temperature at each `J₂` of the axis.
    TemperatureOfJ2,
    /// Threshold `J₂` at each temperature of the axis.
    J2OfTemperature,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdCurveRequest {
    pub model: ModelSpec,
    pub pair: PairSelector,
    pub j2_axis: Axis,
    pub temperature_axis: Axis,
    pub orientation: CurveOrientation,
    pub crossing: Crossing,
    pub tolerance: f64,
}

impl ThresholdCurveRequest {
    pub fn new(model: ModelSpec, pair: PairSelector, j2_axis: Axis, temperature_axis: Axis, orientation: CurveOrientation) -> Self {
        ThresholdCurveRequest {
            model,
            pair,
            j2_axis,
            temperature_axis,
            orientation,
            crossing: Crossing::default(),
            tolerance: DEFAULT_TOLERANCE,
        }
    }

    pub fn with_crossing(self, crossing: Crossing) -> Self {
        ThresholdCurveRequest { crossing, ..self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    /// The value held fixed (a `J₂` or a temperature).
    pub fixed: f64,
    pub threshold: ThresholdResult,
}

/// Traces the boundary between zero and nonzero negativity in the
/// `(J₂, T)` plane. The axis that is searched over serves as the coarse scan.
pub fn threshold_curve(req: &ThresholdCurveRequest) -> Result<Vec<CurvePoint>> {
    req.j2_axis.validate()?;
    req.temperature_axis.validate()?;
    if req.j2_axis.parameter != Parameter::J2 || req.temperature_axis.parameter != Parameter::Temperature {
        return Err(Error::InvalidSweep("threshold curves need a j2 axis and a temperature axis".into()));
    }
    for j2 in [req.j2_axis.min, req.j2_axis.max] {
        req.model.with_j2(j2).validate()?;
    }
    let (a, b) = req.pair.sites(req.model.n_sites)?;
    let t_scan = req.temperature_axis.values();
    let j2_scan = req.j2_axis.values();

    let points = match req.orientation {
        CurveOrientation::TemperatureOfJ2 => par_map(&j2_scan, |&j2| -> Result<CurvePoint> {
            let spectrum = req
                .model
                .with_j2(j2)
                .build()
                .and_then(|h| diagonalize(&h))
                .map_err(at_point(format!("j2={j2}")))?;
            let mut entangled = |t: f64| {
                pair_negativity(&spectrum, t, a, b)
                    .map(|n| n > NEGATIVITY_EPSILON)
                    .map_err(at_point(format!("j2={j2}, t={t}")))
            };
            let flags = t_scan.iter().map(|&t| entangled(t)).collect::<Result<Vec<_>>>()?;
            let threshold = locate_boundary(Parameter::Temperature, &t_scan, &flags, &mut entangled, req.crossing, req.tolerance)?;
            Ok(CurvePoint { fixed: j2, threshold })
        }),
        CurveOrientation::J2OfTemperature => {
            let spectra = collect_ordered(par_map(&j2_scan, |&j2| {
                req.model
                    .with_j2(j2)
                    .build()
                    .and_then(|h| diagonalize(&h))
                    .map_err(at_point(format!("j2={j2}")))
            }))?;
            par_map(&t_scan, |&t| -> Result<CurvePoint> {
                let flags = spectra
                    .iter()
                    .zip(&j2_scan)
                    .map(|(s, &j2)| {
                        pair_negativity(s, t, a, b)
                            .map(|n| n > NEGATIVITY_EPSILON)
                            .map_err(at_point(format!("j2={j2}, t={t}")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                let mut entangled = |x: f64| coupling_indicator(req.model.with_j2(x), t, (a, b), Parameter::J2, x);
                let threshold = locate_boundary(Parameter::J2, &j2_scan, &flags, &mut entangled, req.crossing, req.tolerance)?;
                Ok(CurvePoint { fixed: t, threshold })
            })
        }
    };
    collect_ordered(points)
}

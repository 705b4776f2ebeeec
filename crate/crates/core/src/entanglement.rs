//! Two-site reduced states, partial transposes and negativity.
//!
//! For a spin-1/2 paired with a spin-1/2 or a spin-1 a negative partial
//! transpose is necessary and sufficient for entanglement. For two spin-1
//! sites a vanishing negativity is inconclusive.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::spectral::SpectralMixture;
use crate::spin::{SiteLayout, SpinMagnitude};

/// Partial-transpose eigenvalues in `(-NEGATIVE_EIGENVALUE_CUTOFF, 0)` are
/// treated as rounding noise.
pub const NEGATIVE_EIGENVALUE_CUTOFF: f64 = 1e-12;

/// Eigenvectors whose normalised Boltzmann weight is below this are skipped
/// when reducing a mixture. The dropped trace is at most `D * 1e-18`.
pub const WEIGHT_CUTOFF: f64 = 1e-18;

const PSD_TOLERANCE: f64 = 1e-12;
const TRACE_NORM_AGREEMENT: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PairKind {
    HalfOne,
    HalfHalf,
    OneOne,
}

impl PairKind {
    pub fn of(a: SpinMagnitude, b: SpinMagnitude) -> Self {
        use SpinMagnitude::*;
        match (a, b) {
            (Half, Half) => PairKind::HalfHalf,
            (One, One) => PairKind::OneOne,
            _ => PairKind::HalfOne,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            PairKind::HalfOne => "half_one",
            PairKind::HalfHalf => "half_half",
            PairKind::OneOne => "one_one",
        }
    }
}

/// Reduced density matrix of two sites, basis `(a, b)` with `a` major.
#[derive(Debug, Clone, PartialEq)]
pub struct PairReducedState {
    matrix: DMatrix<f64>,
    dim_a: usize,
    dim_b: usize,
    pub site_a: usize,
    pub site_b: usize,
    pub kind: PairKind,
}

impl PairReducedState {
    pub fn new(matrix: DMatrix<f64>, spin_a: SpinMagnitude, spin_b: SpinMagnitude) -> Result<Self> {
        let (dim_a, dim_b) = (spin_a.dimension(), spin_b.dimension());
        if matrix.nrows() != dim_a * dim_b || matrix.ncols() != dim_a * dim_b {
            return Err(Error::DimensionMismatch {
                op: matrix.nrows(),
                site: dim_a * dim_b,
            });
        }
        Ok(PairReducedState {
            matrix,
            dim_a,
            dim_b,
            site_a: 0,
            site_b: 1,
            kind: PairKind::of(spin_a, spin_b),
        })
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.dim_a, self.dim_b)
    }

    /// Conjugates by `u_a ⊗ u_b`.
    pub fn rotated(&self, u_a: &DMatrix<f64>, u_b: &DMatrix<f64>) -> Self {
        let u = u_a.kronecker(u_b);
        PairReducedState {
            matrix: &u * &self.matrix * u.transpose(),
            ..self.clone()
        }
    }
}

/// Index bookkeeping for tracing everything but two sites.
struct PairIndex {
    pair: Vec<usize>,
    rest: Vec<usize>,
    rest_dim: usize,
}

impl PairIndex {
    fn new(layout: &SiteLayout, a: usize, b: usize) -> Self {
        let dims = layout.dims();
        let total = layout.total_dimension();
        let (da, db) = (dims[a], dims[b]);
        let rest_dim = total / (da * db);
        let mut pair = Vec::with_capacity(total);
        let mut rest = Vec::with_capacity(total);
        for i in 0..total {
            let mut r = 0;
            let (mut ma, mut mb) = (0, 0);
            for (site, &d) in dims.iter().enumerate() {
                let digit = (i / layout.stride(site)) % d;
                if site == a {
                    ma = digit;
                } else if site == b {
                    mb = digit;
                } else {
                    r = r * d + digit;
                }
            }
            pair.push(ma * db + mb);
            rest.push(r);
        }
        PairIndex { pair, rest, rest_dim }
    }
}

fn check_pair(layout: &SiteLayout, a: usize, b: usize) -> Result<(usize, usize)> {
    layout.spin(a)?;
    layout.spin(b)?;
    if a == b {
        return Err(Error::InvalidPair(a, b));
    }
    Ok((a.min(b), a.max(b)))
}

/// Traces out every site except `site_a` and `site_b`.
pub fn partial_trace<S: SpectralMixture + ?Sized>(state: &S, site_a: usize, site_b: usize) -> Result<PairReducedState> {
    let layout = state.layout();
    let (a, b) = check_pair(layout, site_a, site_b)?;
    let (spin_a, spin_b) = (layout.spin(a)?, layout.spin(b)?);
    let dp = spin_a.dimension() * spin_b.dimension();
    let index = PairIndex::new(layout, a, b);
    let vectors = state.spectrum().eigenvectors();

    let mut rho = DMatrix::zeros(dp, dp);
    let mut reshaped = DMatrix::zeros(dp, index.rest_dim);
    for (k, &w) in state.weights().iter().enumerate() {
        if w < WEIGHT_CUTOFF {
            continue;
        }
        for (i, &x) in vectors.column(k).iter().enumerate() {
            reshaped[(index.pair[i], index.rest[i])] = x;
        }
        rho.gemm(w, &reshaped, &reshaped.transpose(), 1.0);
    }
    let rho = (&rho + rho.transpose()) * 0.5;
    let mut pair = PairReducedState::new(rho, spin_a, spin_b)?;
    pair.site_a = a;
    pair.site_b = b;
    Ok(pair)
}

/// Partial trace of an explicit density matrix on the full space.
pub fn partial_trace_matrix(full: &DMatrix<f64>, layout: &SiteLayout, site_a: usize, site_b: usize) -> Result<PairReducedState> {
    let (a, b) = check_pair(layout, site_a, site_b)?;
    let total = layout.total_dimension();
    if full.nrows() != total || full.ncols() != total {
        return Err(Error::DimensionMismatch {
            op: full.nrows(),
            site: total,
        });
    }
    let (spin_a, spin_b) = (layout.spin(a)?, layout.spin(b)?);
    let dp = spin_a.dimension() * spin_b.dimension();
    let index = PairIndex::new(layout, a, b);
    let mut rho = DMatrix::zeros(dp, dp);
    for i in 0..total {
        for j in 0..total {
            if index.rest[i] == index.rest[j] {
                rho[(index.pair[i], index.pair[j])] += full[(i, j)];
            }
        }
    }
    let mut pair = PairReducedState::new(rho, spin_a, spin_b)?;
    pair.site_a = a;
    pair.site_b = b;
    Ok(pair)
}

/// Transpose of the first (lower-indexed) subsystem:
/// `((a,b),(a',b')) -> ((a',b),(a,b'))`.
pub fn partial_transpose(pair: &PairReducedState) -> DMatrix<f64> {
    let (da, db) = pair.dims();
    DMatrix::from_fn(da * db, da * db, |r, c| {
        let (a, b) = (r / db, r % db);
        let (a2, b2) = (c / db, c % db);
        pair.matrix[(a2 * db + b, a * db + b2)]
    })
}

/// Transpose of the second subsystem.
pub fn partial_transpose_second(pair: &PairReducedState) -> DMatrix<f64> {
    let (da, db) = pair.dims();
    DMatrix::from_fn(da * db, da * db, |r, c| {
        let (a, b) = (r / db, r % db);
        let (a2, b2) = (c / db, c % db);
        pair.matrix[(a * db + b2, a2 * db + b)]
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct NegativityResult {
    pub value: f64,
    pub negative_eigenvalues: Vec<f64>,
    pub pair_kind: PairKind,
    /// `‖ρ^{T_A}‖₁`.
    pub trace_norm: f64,
}

fn sorted_eigenvalues(m: DMatrix<f64>) -> Vec<f64> {
    let mut v: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

/// Sum of the magnitudes of the negative partial-transpose eigenvalues,
/// cross-checked against `(‖ρ^{T_A}‖₁ - 1)/2`.
pub fn negativity(pair: &PairReducedState) -> Result<NegativityResult> {
    let min = sorted_eigenvalues(pair.matrix.clone())[0];
    if min < -PSD_TOLERANCE {
        return Err(Error::NotPositive(min));
    }
    let spectrum = sorted_eigenvalues(partial_transpose(pair));
    let negative_eigenvalues: Vec<f64> = spectrum
        .iter()
        .copied()
        .filter(|&x| x < -NEGATIVE_EIGENVALUE_CUTOFF)
        .collect();
    // An empty f64 sum is -0.0.
    let value: f64 = negative_eigenvalues.iter().map(|x| -x).sum::<f64>() + 0.0;
    let trace_norm: f64 = spectrum.iter().map(|x| x.abs()).sum();
    let from_norm = (trace_norm - 1.0) / 2.0;
    if (value - from_norm).abs() > TRACE_NORM_AGREEMENT {
        return Err(Error::Numerical(format!(
            "negativity {value:e} disagrees with trace-norm form {from_norm:e}"
        )));
    }
    Ok(NegativityResult {
        value,
        negative_eigenvalues,
        pair_kind: pair.kind,
        trace_norm,
    })
}

/// Negativity of a pure bipartite state from its Schmidt coefficients,
/// `((Σ c)² - 1)/2`.
pub fn schmidt_negativity(coefficients: &[f64]) -> Result<f64> {
    if coefficients.iter().any(|&c| c.is_nan() || c < 0.0) {
        return Err(Error::Numerical("Schmidt coefficients must be non-negative".into()));
    }
    let norm: f64 = coefficients.iter().map(|c| c * c).sum();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::Numerical(format!("Schmidt coefficients are not normalised (Σc² = {norm})")));
    }
    let sum: f64 = coefficients.iter().sum();
    Ok((sum * sum - 1.0) / 2.0)
}

/// Negativity of an SU(2)-invariant pair state as an affine function of the
/// correlator `⟨S_a·S_b⟩`, without the clamp at zero. Negative values mean
/// the state is separable.
pub fn su2_signed_negativity(correlator: f64, kind: PairKind) -> Result<f64> {
    match kind {
        PairKind::HalfOne => Ok(-1.0 / 3.0 - 2.0 / 3.0 * correlator),
        PairKind::HalfHalf => Ok(-0.25 - correlator),
        PairKind::OneOne => Err(Error::Numerical(
            "no correlator formula for the negativity of two spin-1 sites".into(),
        )),
    }
}

pub fn su2_negativity(correlator: f64, kind: PairKind) -> Result<f64> {
    su2_signed_negativity(correlator, kind).map(|x| x.max(0.0))
}

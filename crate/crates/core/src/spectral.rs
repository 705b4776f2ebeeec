//! Exact diagonalization and Gibbs states.
//!
//! A decomposition is computed once per set of couplings and then shared by
//! every temperature evaluated on it.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::entanglement::partial_trace;
use crate::error::{Error, Result};
use crate::model::Hamiltonian;
use crate::spin::{pair_bond, SiteLayout};

/// Relative tolerance used to decide which levels belong to the ground manifold.
pub const DEGENERACY_TOLERANCE: f64 = 1e-9;

/// Ascending eigenvalues with orthonormal eigenvectors as columns.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    eigenvalues: Vec<f64>,
    eigenvectors: DMatrix<f64>,
    layout: SiteLayout,
}

impl SpectralDecomposition {
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &DMatrix<f64> {
        &self.eigenvectors
    }

    pub fn layout(&self) -> &SiteLayout {
        &self.layout
    }

    pub fn dimension(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn ground_energy(&self) -> f64 {
        self.eigenvalues[0]
    }

    /// Boltzmann weights shifted by the ground energy, normalised, with the
    /// matching `ln Z`.
    fn boltzmann(&self, beta: f64) -> (Vec<f64>, f64) {
        let e0 = self.ground_energy();
        let mut w: Vec<f64> = self.eigenvalues.iter().map(|e| (-beta * (e - e0)).exp()).collect();
        let sum: f64 = w.iter().sum();
        w.iter_mut().for_each(|x| *x /= sum);
        (w, sum.ln() - beta * e0)
    }

    pub fn log_partition(&self, beta: f64) -> f64 {
        self.boltzmann(beta).1
    }
}

/// Splits the index set into the connected components of the off-diagonal
/// sparsity pattern. Each component is an invariant subspace.
fn invariant_blocks(m: &DMatrix<f64>) -> Vec<Vec<usize>> {
    let n = m.nrows();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for j in 0..n {
        for i in 0..j {
            if m[(i, j)] != 0.0 {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
    }
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut block_of_root = vec![usize::MAX; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        if block_of_root[r] == usize::MAX {
            block_of_root[r] = blocks.len();
            blocks.push(Vec::new());
        }
        blocks[block_of_root[r]].push(i);
    }
    blocks
}

/// Dense symmetric eigensolve of the Hamiltonian, block by block.
pub fn diagonalize(h: &Hamiltonian) -> Result<SpectralDecomposition> {
    diagonalize_matrix(&h.matrix, h.layout.clone())
}

pub fn diagonalize_matrix(matrix: &DMatrix<f64>, layout: SiteLayout) -> Result<SpectralDecomposition> {
    let n = matrix.nrows();
    if matrix.ncols() != n || n != layout.total_dimension() {
        return Err(Error::Numerical(format!(
            "matrix is {}x{} but the layout has dimension {}",
            n,
            matrix.ncols(),
            layout.total_dimension()
        )));
    }
    let scale = matrix.abs().max().max(1.0);
    let asym = (matrix - matrix.transpose()).abs().max();
    if asym > 1e-12 * scale {
        return Err(Error::Numerical(format!("matrix is not symmetric (max deviation {asym:e})")));
    }

    let mut pairs: Vec<(f64, Vec<(usize, f64)>)> = Vec::with_capacity(n);
    for block in invariant_blocks(matrix) {
        let d = block.len();
        let sub = DMatrix::from_fn(d, d, |i, j| matrix[(block[i], block[j])]);
        let eig = if d == 1 {
            SymmetricEigen {
                eigenvalues: nalgebra::DVector::from_element(1, sub[(0, 0)]),
                eigenvectors: DMatrix::from_element(1, 1, 1.0),
            }
        } else {
            SymmetricEigen::try_new(sub, f64::EPSILON, 30 * d).ok_or(Error::NoConvergence(d))?
        };
        for k in 0..d {
            let column = block
                .iter()
                .enumerate()
                .map(|(i, &row)| (row, eig.eigenvectors[(i, k)]))
                .collect();
            pairs.push((eig.eigenvalues[k], column));
        }
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut eigenvectors = DMatrix::zeros(n, n);
    let mut eigenvalues = Vec::with_capacity(n);
    for (col, (value, entries)) in pairs.into_iter().enumerate() {
        eigenvalues.push(value);
        for (row, x) in entries {
            eigenvectors[(row, col)] = x;
        }
    }
    Ok(SpectralDecomposition {
        eigenvalues,
        eigenvectors,
        layout,
    })
}

/// A mixture of eigenvectors of one decomposition.
pub trait SpectralMixture {
    fn spectrum(&self) -> &SpectralDecomposition;

    /// Normalised weight of each eigenvector, in eigenvalue order.
    fn weights(&self) -> &[f64];

    fn layout(&self) -> &SiteLayout {
        self.spectrum().layout()
    }

    /// The full density matrix. Costs `O(D³)`; reduced states are built
    /// without it.
    fn matrix(&self) -> DMatrix<f64> {
        let v = self.spectrum().eigenvectors();
        let mut scaled = v.clone();
        for (k, w) in self.weights().iter().enumerate() {
            scaled.column_mut(k).scale_mut(w.sqrt());
        }
        let rho = &scaled * scaled.transpose();
        (&rho + rho.transpose()) * 0.5
    }

    fn energy(&self) -> f64 {
        self.spectrum()
            .eigenvalues()
            .iter()
            .zip(self.weights())
            .map(|(e, w)| e * w)
            .sum()
    }
}

/// `exp(-βH)/Z` in spectral form.
#[derive(Debug, Clone)]
pub struct ThermalState<'a> {
    spectrum: &'a SpectralDecomposition,
    beta: f64,
    weights: Vec<f64>,
    log_z: f64,
}

impl ThermalState<'_> {
    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn temperature(&self) -> f64 {
        1.0 / self.beta
    }

    pub fn log_z(&self) -> f64 {
        self.log_z
    }
}

impl SpectralMixture for ThermalState<'_> {
    fn spectrum(&self) -> &SpectralDecomposition {
        self.spectrum
    }

    fn weights(&self) -> &[f64] {
        &self.weights
    }
}

pub fn thermal_state(spectrum: &SpectralDecomposition, temperature: f64) -> Result<ThermalState<'_>> {
    if !(temperature > 0.0 && temperature.is_finite()) {
        return Err(Error::InvalidTemperature(temperature));
    }
    let beta = 1.0 / temperature;
    let (weights, log_z) = spectrum.boltzmann(beta);
    Ok(ThermalState {
        spectrum,
        beta,
        weights,
        log_z,
    })
}

/// Equal-weight mixture over the lowest level, the `T -> 0` limit of the
/// Gibbs state.
#[derive(Debug, Clone)]
pub struct GroundManifoldState<'a> {
    spectrum: &'a SpectralDecomposition,
    degeneracy: usize,
    weights: Vec<f64>,
}

impl GroundManifoldState<'_> {
    pub fn degeneracy(&self) -> usize {
        self.degeneracy
    }

    pub fn ground_energy(&self) -> f64 {
        self.spectrum.ground_energy()
    }

    /// The `k`-th ground eigenvector as a pure state, for per-component
    /// diagnostics.
    pub fn component(&self, k: usize) -> Option<PureState<'_>> {
        (k < self.degeneracy).then(|| PureState::new(self.spectrum, k))
    }
}

impl SpectralMixture for GroundManifoldState<'_> {
    fn spectrum(&self) -> &SpectralDecomposition {
        self.spectrum
    }

    fn weights(&self) -> &[f64] {
        &self.weights
    }
}

pub fn ground_manifold(spectrum: &SpectralDecomposition) -> GroundManifoldState<'_> {
    let e0 = spectrum.ground_energy();
    let tol = DEGENERACY_TOLERANCE * e0.abs().max(1.0);
    let degeneracy = spectrum.eigenvalues().iter().take_while(|&&e| e - e0 <= tol).count();
    let mut weights = vec![0.0; spectrum.dimension()];
    weights[..degeneracy].iter_mut().for_each(|w| *w = 1.0 / degeneracy as f64);
    GroundManifoldState {
        spectrum,
        degeneracy,
        weights,
    }
}

/// A single eigenvector.
#[derive(Debug, Clone)]
pub struct PureState<'a> {
    spectrum: &'a SpectralDecomposition,
    weights: Vec<f64>,
}

impl<'a> PureState<'a> {
    pub fn new(spectrum: &'a SpectralDecomposition, index: usize) -> Self {
        let mut weights = vec![0.0; spectrum.dimension()];
        weights[index] = 1.0;
        PureState { spectrum, weights }
    }
}

impl SpectralMixture for PureState<'_> {
    fn spectrum(&self) -> &SpectralDecomposition {
        self.spectrum
    }

    fn weights(&self) -> &[f64] {
        &self.weights
    }
}

/// `U = ⟨H⟩` in the Gibbs state at inverse temperature `beta`.
pub fn internal_energy(spectrum: &SpectralDecomposition, beta: f64) -> Result<f64> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::InvalidTemperature(1.0 / beta));
    }
    let (w, _) = spectrum.boltzmann(beta);
    Ok(spectrum.eigenvalues().iter().zip(&w).map(|(e, w)| e * w).sum())
}

/// `⟨S_a · S_b⟩` in the given state.
pub fn correlator<S: SpectralMixture + ?Sized>(state: &S, site_a: usize, site_b: usize) -> Result<f64> {
    let pair = partial_trace(state, site_a, site_b)?;
    let layout = state.layout();
    let bond = pair_bond(layout.spin(pair.site_a)?, layout.spin(pair.site_b)?);
    Ok((pair.matrix() * bond).trace())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_nn_ring, build_nnn_ring, ModelSpec};
    use approx::assert_abs_diff_eq;

    fn decompose(spec: ModelSpec) -> SpectralDecomposition {
        diagonalize(&spec.build().unwrap()).unwrap()
    }

    #[test]
    fn two_site_eigenvalues() {
        let d = decompose(ModelSpec::nn_ring(2));
        for (a, b) in d.eigenvalues().iter().zip([-1.0, -1.0, 0.5, 0.5, 0.5, 0.5]) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-12);
        }
    }

    #[test]
    fn frustrated_four_site_minimum() {
        let d = decompose(ModelSpec::nn_ring(4).with_j2(0.3));
        assert_abs_diff_eq!(d.ground_energy(), -2.45, epsilon = 1e-12);
    }

    #[test]
    fn scaled_identity() {
        let layout = SiteLayout::ring(3);
        let d = diagonalize_matrix(&(DMatrix::identity(12, 12) * 2.5), layout).unwrap();
        assert!(d.eigenvalues().iter().all(|&e| e == 2.5));
        assert_eq!(d.eigenvectors(), &DMatrix::identity(12, 12));
    }

    #[test]
    fn rejects_asymmetric_input() {
        let mut m = DMatrix::zeros(6, 6);
        m[(0, 1)] = 1.0;
        assert!(diagonalize_matrix(&m, SiteLayout::ring(2)).is_err());
    }

    #[test]
    fn decomposition_invariants() {
        for spec in [
            ModelSpec::nn_ring(5),
            ModelSpec::nn_ring(6).with_j2(0.4),
            ModelSpec::nn_ring(4).with_field(0.7),
        ] {
            let h = spec.build().unwrap();
            let d = diagonalize(&h).unwrap();
            let dim = d.dimension();
            let v = d.eigenvectors();
            let ortho = (v.transpose() * v - DMatrix::identity(dim, dim)).abs().max();
            assert!(ortho <= 1e-9, "{ortho}");
            for (k, e) in d.eigenvalues().iter().enumerate() {
                let col = v.column(k);
                let r = (&h.matrix * col - col * *e).norm();
                assert!(r <= 1e-9 * e.abs().max(1.0) * (dim as f64).sqrt());
            }
            assert!(d.eigenvalues().windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn high_temperature_is_maximally_mixed() {
        let d = decompose(ModelSpec::nn_ring(4).with_j2(0.2));
        let rho = thermal_state(&d, 1e6).unwrap().matrix();
        let dev = (rho - DMatrix::identity(36, 36) / 36.0).abs().max();
        assert!(dev <= 1e-5);
    }

    #[test]
    fn two_site_partition_function() {
        let d = decompose(ModelSpec::nn_ring(2));
        let state = thermal_state(&d, 1.0).unwrap();
        let expected = (2.0 * 1f64.exp() + 4.0 * (-0.5f64).exp()).ln();
        assert_abs_diff_eq!(state.log_z(), expected, epsilon = 1e-13);
    }

    #[test]
    fn thermal_state_invariants() {
        let d = decompose(ModelSpec::nn_ring(5));
        for t in [0.01, 0.3, 2.0, 50.0] {
            let s = thermal_state(&d, t).unwrap();
            let rho = s.matrix();
            assert!((rho.trace() - 1.0).abs() < 1e-10);
            assert_eq!(rho, rho.transpose());
            let min = rho.symmetric_eigenvalues().min();
            assert!(min >= -1e-12);
        }
    }

    #[test]
    fn rejects_non_positive_temperature() {
        let d = decompose(ModelSpec::nn_ring(2));
        assert!(matches!(thermal_state(&d, 0.0), Err(Error::InvalidTemperature(_))));
        assert!(thermal_state(&d, -1.0).is_err());
        assert!(internal_energy(&d, 0.0).is_err());
    }

    #[test]
    fn energy_shift_invariance() {
        let h = build_nnn_ring(4, 1.0, 0.45).unwrap();
        let c = 3.7;
        let shifted = &h.matrix + DMatrix::identity(36, 36) * c;
        let d0 = diagonalize(&h).unwrap();
        let d1 = diagonalize_matrix(&shifted, h.layout.clone()).unwrap();
        let beta = 1.7;
        let s0 = thermal_state(&d0, 1.0 / beta).unwrap();
        let s1 = thermal_state(&d1, 1.0 / beta).unwrap();
        assert!((s0.matrix() - s1.matrix()).abs().max() <= 1e-12);
        assert_abs_diff_eq!(s1.log_z(), s0.log_z() - beta * c, epsilon = 1e-12);
    }

    #[test]
    fn two_site_internal_energy() {
        let d = decompose(ModelSpec::nn_ring(2));
        let e = 1f64.exp();
        let m = (-0.5f64).exp();
        assert_abs_diff_eq!(internal_energy(&d, 1.0).unwrap(), (-e + m) / (e + 2.0 * m), epsilon = 1e-14);
        assert_abs_diff_eq!(internal_energy(&d, 50.0).unwrap(), -1.0, epsilon = 1e-10);
        assert_abs_diff_eq!(internal_energy(&d, 1e-9).unwrap(), 0.0, epsilon = 1e-8);
    }

    #[test]
    fn energy_is_minus_log_z_derivative() {
        let d = decompose(ModelSpec::nn_ring(5));
        for beta in [0.3, 1.0, 4.0] {
            let h = 1e-5;
            let fd = -(d.log_partition(beta + h) - d.log_partition(beta - h)) / (2.0 * h);
            let u = internal_energy(&d, beta).unwrap();
            assert!((fd - u).abs() <= 1e-6 * u.abs().max(1e-3), "{fd} vs {u}");
        }
    }

    #[test]
    fn ground_manifold_degeneracies() {
        // Two sites: the j=1/2 doublet.
        assert_eq!(ground_manifold(&decompose(ModelSpec::nn_ring(2))).degeneracy(), 2);
        // Three sites: 1/2 ⊗ 1 ⊗ 1/2 couples to integer total spin and the
        // ground level is the S=0 singlet.
        assert_eq!(ground_manifold(&decompose(ModelSpec::nn_ring(3))).degeneracy(), 1);
        // Four sites at small J2: the S=1 triplet of the lowest branch.
        assert_eq!(ground_manifold(&decompose(ModelSpec::nn_ring(4).with_j2(0.1))).degeneracy(), 3);
        // Above J2 = J1/2 the ground level is the S=0 singlet.
        assert_eq!(ground_manifold(&decompose(ModelSpec::nn_ring(4).with_j2(0.8))).degeneracy(), 1);
    }

    #[test]
    fn correlators() {
        let d = decompose(ModelSpec::nn_ring(4).with_j2(0.1));
        let g = ground_manifold(&d);
        assert_abs_diff_eq!(correlator(&g, 0, 1).unwrap(), -0.75, epsilon = 1e-10);
        let hot = thermal_state(&d, 1e9).unwrap();
        assert!(correlator(&hot, 0, 1).unwrap().abs() < 1e-8);
    }

    #[test]
    fn nn_correlator_is_uniform_and_equals_energy_per_site() {
        for n in [4, 6] {
            let h = build_nn_ring(n, 1.0).unwrap();
            let d = diagonalize(&h).unwrap();
            let s = thermal_state(&d, 0.6).unwrap();
            let c0 = correlator(&s, 0, 1).unwrap();
            for (a, b) in crate::model::nn_bonds(n) {
                assert_abs_diff_eq!(correlator(&s, a, b).unwrap(), c0, epsilon = 1e-10);
            }
            let u = internal_energy(&d, s.beta()).unwrap();
            assert_abs_diff_eq!(u / n as f64, c0, epsilon = 1e-10);
        }
    }
}

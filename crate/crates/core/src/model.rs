//! Hamiltonians of alternating spin-1/2 / spin-1 rings.
//!
//! Site `2i` carries the spin-1/2 of cell `i` and site `2i + 1` its spin-1.
//! Odd rings end with one extra spin-1/2 that closes the ring onto site 0.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::spin::{heisenberg_bond, total_sz, SiteLayout, SpinMagnitude};

impl SiteLayout {
    /// Alternating ring layout for `n` sites.
    pub fn ring(n: usize) -> Self {
        let spins = (0..n)
            .map(|k| {
                if k % 2 == 0 {
                    SpinMagnitude::Half
                } else {
                    SpinMagnitude::One
                }
            })
            .collect();
        SiteLayout::new(spins)
    }
}

/// Full problem definition: ring size and couplings (energy units, `k_B = 1`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelSpec {
    pub n_sites: usize,
    pub j1: f64,
    pub j2: f64,
    pub field_b: f64,
}

impl Default for ModelSpec {
    fn default() -> Self {
        ModelSpec {
            n_sites: 2,
            j1: 1.0,
            j2: 0.0,
            field_b: 0.0,
        }
    }
}

impl ModelSpec {
    pub fn nn_ring(n_sites: usize) -> Self {
        ModelSpec {
            n_sites,
            ..Default::default()
        }
    }

    pub fn with_j1(self, j1: f64) -> Self {
        ModelSpec { j1, ..self }
    }

    pub fn with_j2(self, j2: f64) -> Self {
        ModelSpec { j2, ..self }
    }

    pub fn with_field(self, field_b: f64) -> Self {
        ModelSpec { field_b, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n_sites;
        if n < 2 {
            return Err(Error::InvalidModel(format!("ring needs at least 2 sites, got {n}")));
        }
        for (name, v) in [("j1", self.j1), ("j2", self.j2), ("field_b", self.field_b)] {
            if !v.is_finite() {
                return Err(Error::InvalidModel(format!("{name} must be finite, got {v}")));
            }
        }
        if self.j2 < 0.0 {
            return Err(Error::InvalidModel(format!("j2 must be non-negative, got {}", self.j2)));
        }
        if self.j2 != 0.0 {
            if n % 2 == 1 || n < 4 {
                return Err(Error::InvalidModel(format!(
                    "next-nearest-neighbour coupling requires even N >= 4, got N={n}"
                )));
            }
            if self.j1 < 0.0 {
                return Err(Error::InvalidModel(format!("j1 must be non-negative, got {}", self.j1)));
            }
            if self.field_b != 0.0 {
                return Err(Error::InvalidModel(
                    "field and next-nearest-neighbour coupling cannot be combined".into(),
                ));
            }
        }
        if self.field_b != 0.0 && n % 2 == 1 {
            return Err(Error::InvalidModel(format!("magnetic field requires even N, got N={n}")));
        }
        Ok(())
    }

    pub fn layout(&self) -> SiteLayout {
        SiteLayout::ring(self.n_sites)
    }

    pub fn build(&self) -> Result<Hamiltonian> {
        self.validate()?;
        let mut h = build_nn_ring(self.n_sites, self.j1)?;
        if self.j2 != 0.0 {
            add_nnn_bonds(&mut h.matrix, &h.layout, self.j2)?;
        }
        if self.field_b != 0.0 {
            h.matrix += total_sz(&h.layout).matrix * self.field_b;
        }
        h.spec = *self;
        Ok(h)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Hamiltonian {
    pub matrix: DMatrix<f64>,
    pub layout: SiteLayout,
    pub spec: ModelSpec,
}

impl Hamiltonian {
    pub fn dimension(&self) -> usize {
        self.matrix.nrows()
    }
}

/// Nearest-neighbour bonds of the ring as site pairs.
pub fn nn_bonds(n: usize) -> Vec<(usize, usize)> {
    match n {
        0 | 1 => Vec::new(),
        // A two-site "ring" is a single bond, not the bond counted twice.
        2 => vec![(0, 1)],
        _ if n.is_multiple_of(2) => (0..n).map(|k| (k, (k + 1) % n)).collect(),
        _ => {
            let mut bonds: Vec<_> = (0..n - 1).map(|k| (k, k + 1)).collect();
            bonds.push((n - 1, 0));
            bonds
        }
    }
}

/// Next-nearest-neighbour terms, one spin-1/2 and one spin-1 bond per cell
/// `(i, i+1 mod N/2)`. On the four-site ring each pair therefore appears twice.
pub fn nnn_bonds(n: usize) -> Vec<(usize, usize)> {
    let cells = n / 2;
    let mut bonds = Vec::with_capacity(n);
    for i in 0..cells {
        let next = (i + 1) % cells;
        bonds.push((2 * i, 2 * next));
        bonds.push((2 * i + 1, 2 * next + 1));
    }
    bonds
}

fn add_bonds(matrix: &mut DMatrix<f64>, layout: &SiteLayout, bonds: &[(usize, usize)], coupling: f64) -> Result<()> {
    for &(a, b) in bonds {
        *matrix += heisenberg_bond(a, b, layout)?.matrix * coupling;
    }
    Ok(())
}

fn add_nnn_bonds(matrix: &mut DMatrix<f64>, layout: &SiteLayout, j2: f64) -> Result<()> {
    add_bonds(matrix, layout, &nnn_bonds(layout.len()), j2)
}

pub fn build_nn_ring(n: usize, j1: f64) -> Result<Hamiltonian> {
    if n < 2 {
        return Err(Error::InvalidModel(format!("ring needs at least 2 sites, got {n}")));
    }
    let layout = SiteLayout::ring(n);
    let dim = layout.total_dimension();
    let mut matrix = DMatrix::zeros(dim, dim);
    add_bonds(&mut matrix, &layout, &nn_bonds(n), j1)?;
    Ok(Hamiltonian {
        matrix,
        layout,
        spec: ModelSpec::nn_ring(n).with_j1(j1),
    })
}

pub fn build_nn_field(n: usize, j1: f64, b: f64) -> Result<Hamiltonian> {
    if n % 2 == 1 {
        return Err(Error::InvalidModel(format!("magnetic field requires even N, got N={n}")));
    }
    ModelSpec::nn_ring(n).with_j1(j1).with_field(b).build()
}

pub fn build_nnn_ring(n: usize, j1: f64, j2: f64) -> Result<Hamiltonian> {
    if n % 2 == 1 || n < 4 {
        return Err(Error::InvalidModel(format!(
            "next-nearest-neighbour coupling requires even N >= 4, got N={n}"
        )));
    }
    if j1 < 0.0 || j2 < 0.0 {
        return Err(Error::InvalidModel("couplings must be antiferromagnetic (non-negative)".into()));
    }
    let mut h = build_nn_ring(n, j1)?;
    add_nnn_bonds(&mut h.matrix, &h.layout, j2)?;
    h.spec = ModelSpec::nn_ring(n).with_j1(j1).with_j2(j2);
    Ok(h)
}

//! Spin-1/2 and spin-1 operators and their embedding into the product space
//! of a ring of sites.
//!
//! Everything is real: the transverse part of a dot product is written with
//! ladder operators, `sx⊗Sx + sy⊗Sy = (s+⊗S- + s-⊗S+)/2`.
//!
//! Basis convention: each site is ordered by descending magnetic quantum
//! number (`m = +s` first) and the global basis is the Kronecker product of
//! the sites in layout order, site 0 being the most significant index.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpinMagnitude {
    Half,
    One,
}

impl SpinMagnitude {
    pub fn dimension(self) -> usize {
        match self {
            SpinMagnitude::Half => 2,
            SpinMagnitude::One => 3,
        }
    }

    pub fn value(self) -> f64 {
        match self {
            SpinMagnitude::Half => 0.5,
            SpinMagnitude::One => 1.0,
        }
    }

    /// Magnetic quantum numbers in basis order.
    pub fn m_values(self) -> Vec<f64> {
        let s = self.value();
        (0..self.dimension()).map(|k| s - k as f64).collect()
    }
}

/// A single-site operator in the `|s, m⟩` basis.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalOperator {
    pub matrix: DMatrix<f64>,
}

impl LocalOperator {
    pub fn dimension(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn identity(dim: usize) -> Self {
        LocalOperator {
            matrix: DMatrix::identity(dim, dim),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpinMatrices {
    pub sz: LocalOperator,
    pub splus: LocalOperator,
    pub sminus: LocalOperator,
}

pub fn spin_matrices(spin: SpinMagnitude) -> SpinMatrices {
    let d = spin.dimension();
    let s = spin.value();
    let m = spin.m_values();
    let sz = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(m.clone()));
    let mut splus = DMatrix::zeros(d, d);
    // S+ |m⟩ = sqrt(s(s+1) - m(m+1)) |m+1⟩, and |m+1⟩ sits one row above |m⟩.
    for k in 1..d {
        let mk = m[k];
        splus[(k - 1, k)] = (s * (s + 1.0) - mk * (mk + 1.0)).sqrt();
    }
    let sminus = splus.transpose();
    SpinMatrices {
        sz: LocalOperator { matrix: sz },
        splus: LocalOperator { matrix: splus },
        sminus: LocalOperator { matrix: sminus },
    }
}

/// Ordered spins around the ring.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SiteLayout {
    spins: Vec<SpinMagnitude>,
}

impl SiteLayout {
    pub fn new(spins: Vec<SpinMagnitude>) -> Self {
        SiteLayout { spins }
    }

    pub fn spins(&self) -> &[SpinMagnitude] {
        &self.spins
    }

    pub fn len(&self) -> usize {
        self.spins.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spins.is_empty()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.spins.iter().map(|s| s.dimension()).collect()
    }

    pub fn dim(&self, site: usize) -> usize {
        self.spins[site].dimension()
    }

    pub fn total_dimension(&self) -> usize {
        self.spins.iter().map(|s| s.dimension()).product()
    }

    pub fn spin(&self, site: usize) -> Result<SpinMagnitude> {
        self.spins.get(site).copied().ok_or(Error::SiteOutOfRange {
            index: site,
            len: self.len(),
        })
    }

    /// Stride of `site` in the flattened global index.
    pub fn stride(&self, site: usize) -> usize {
        self.spins[site + 1..].iter().map(|s| s.dimension()).product()
    }
}

/// An operator on the full product space.
#[derive(Debug, Clone, PartialEq)]
pub struct GlobalOperator {
    pub matrix: DMatrix<f64>,
    pub layout: SiteLayout,
}

impl GlobalOperator {
    pub fn dimension(&self) -> usize {
        self.matrix.nrows()
    }
}

/// Kronecker product of identities with the given operators placed on their
/// sites. Sites must be distinct.
pub fn embed_product(factors: &[(usize, &LocalOperator)], layout: &SiteLayout) -> Result<GlobalOperator> {
    for (i, &(site, op)) in factors.iter().enumerate() {
        let spin = layout.spin(site)?;
        if op.dimension() != spin.dimension() {
            return Err(Error::DimensionMismatch {
                op: op.dimension(),
                site: spin.dimension(),
            });
        }
        if factors[..i].iter().any(|&(other, _)| other == site) {
            return Err(Error::InvalidPair(site, site));
        }
    }
    let mut acc = DMatrix::from_element(1, 1, 1.0);
    for (site, spin) in layout.spins().iter().enumerate() {
        let d = spin.dimension();
        acc = match factors.iter().find(|&&(s, _)| s == site) {
            Some((_, op)) => acc.kronecker(&op.matrix),
            None => acc.kronecker(&DMatrix::<f64>::identity(d, d)),
        };
    }
    Ok(GlobalOperator {
        matrix: acc,
        layout: layout.clone(),
    })
}

pub fn embed_one(op: &LocalOperator, site: usize, layout: &SiteLayout) -> Result<GlobalOperator> {
    embed_product(&[(site, op)], layout)
}

/// `S_a · S_b` on the full space.
pub fn heisenberg_bond(site_a: usize, site_b: usize, layout: &SiteLayout) -> Result<GlobalOperator> {
    if site_a == site_b {
        return Err(Error::InvalidPair(site_a, site_b));
    }
    let a = spin_matrices(layout.spin(site_a)?);
    let b = spin_matrices(layout.spin(site_b)?);
    let zz = embed_product(&[(site_a, &a.sz), (site_b, &b.sz)], layout)?;
    let pm = embed_product(&[(site_a, &a.splus), (site_b, &b.sminus)], layout)?;
    let mp = embed_product(&[(site_a, &a.sminus), (site_b, &b.splus)], layout)?;
    let matrix = zz.matrix + (pm.matrix + mp.matrix) * 0.5;
    Ok(GlobalOperator {
        matrix,
        layout: layout.clone(),
    })
}

/// `S_a · S_b` on the two-site space of the pair alone, `a` major.
pub fn pair_bond(spin_a: SpinMagnitude, spin_b: SpinMagnitude) -> DMatrix<f64> {
    let layout = SiteLayout::new(vec![spin_a, spin_b]);
    heisenberg_bond(0, 1, &layout)
        .expect("two distinct sites")
        .matrix
}

/// Sum of the embedded z-operators over all sites.
pub fn total_sz(layout: &SiteLayout) -> GlobalOperator {
    let dim = layout.total_dimension();
    let mut diag = vec![0.0; dim];
    for (site, spin) in layout.spins().iter().enumerate() {
        let stride = layout.stride(site);
        let m = spin.m_values();
        for (i, v) in diag.iter_mut().enumerate() {
            *v += m[(i / stride) % spin.dimension()];
        }
    }
    GlobalOperator {
        matrix: DMatrix::from_diagonal(&nalgebra::DVector::from_vec(diag)),
        layout: layout.clone(),
    }
}

/// Total raising operator. With [`total_sz`] it generates the full SU(2)
/// algebra while staying real.
pub fn total_splus(layout: &SiteLayout) -> Result<GlobalOperator> {
    let dim = layout.total_dimension();
    let mut matrix = DMatrix::zeros(dim, dim);
    for (site, spin) in layout.spins().iter().enumerate() {
        let ops = spin_matrices(*spin);
        matrix += embed_one(&ops.splus, site, layout)?.matrix;
    }
    Ok(GlobalOperator {
        matrix,
        layout: layout.clone(),
    })
}

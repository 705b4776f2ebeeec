//! Analytic results for the small rings, used as oracles for the numerical
//! pipeline.
//!
//! Every expression is a sum of exponentials; each is evaluated relative to
//! its largest exponent so that `β` in the thousands does not overflow.

use nalgebra::DMatrix;

/// `(Σ c_k e^{x_k - m}, m)` with `m = max x_k`.
fn exp_sum(terms: &[(f64, f64)]) -> (f64, f64) {
    let m = terms.iter().map(|t| t.1).fold(f64::NEG_INFINITY, f64::max);
    (terms.iter().map(|&(c, x)| c * (x - m).exp()).sum(), m)
}

/// `Σ c_k e^{x_k}` evaluated after shifting every exponent by `shift`.
fn exp_sum_at(terms: &[(f64, f64)], shift: f64) -> f64 {
    terms.iter().map(|&(c, x)| c * (x - shift).exp()).sum()
}

/// Order of the Kronecker basis states `|m, M⟩` that makes the mixed pair's
/// density matrix block diagonal:
/// `|-½,-1⟩, |½,0⟩, |-½,1⟩, |½,-1⟩, |-½,0⟩, |½,1⟩`.
///
/// Entry `k` is the Kronecker index (spin-1/2 major, `m = +s` first) of the
/// `k`-th block-ordered state.
pub const MIXED_PAIR_BLOCK_ORDER: [usize; 6] = [5, 1, 3, 2, 4, 0];

/// Matrix elements of a mixed spin-1/2 / spin-1 pair state with two 2×2
/// coherent blocks, in block order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoSpinElements {
    pub a: [f64; 6],
    pub b1: f64,
    pub b2: f64,
    pub log_z: f64,
}

impl TwoSpinElements {
    pub fn trace(&self) -> f64 {
        self.a.iter().sum()
    }

    /// The density matrix in block order.
    pub fn block_matrix(&self) -> DMatrix<f64> {
        let mut m = DMatrix::from_diagonal(&nalgebra::DVector::from_row_slice(&self.a));
        m[(1, 2)] = self.b1;
        m[(2, 1)] = self.b1;
        m[(3, 4)] = self.b2;
        m[(4, 3)] = self.b2;
        m
    }

    /// The density matrix in Kronecker order.
    pub fn kronecker_matrix(&self) -> DMatrix<f64> {
        let block = self.block_matrix();
        let mut m = DMatrix::zeros(6, 6);
        for (i, &ki) in MIXED_PAIR_BLOCK_ORDER.iter().enumerate() {
            for (j, &kj) in MIXED_PAIR_BLOCK_ORDER.iter().enumerate() {
                m[(ki, kj)] = block[(i, j)];
            }
        }
        m
    }

    /// Negativity from the two possibly negative 2×2 blocks of the partial
    /// transpose.
    pub fn block_negativity(&self) -> f64 {
        let [a1, a2, _, _, a5, a6] = self.a;
        let first = ((a1 - a2).powi(2) + 4.0 * self.b2 * self.b2).sqrt() - a1 - a2;
        let second = ((a5 - a6).powi(2) + 4.0 * self.b1 * self.b1).sqrt() - a5 - a6;
        0.5 * first.max(0.0) + 0.5 * second.max(0.0)
    }
}

/// The single bond `s·S`.
pub mod two_spin {
    use super::TwoSpinElements;

    pub fn threshold_temperature() -> f64 {
        3.0 / (4.0 * std::f64::consts::LN_2)
    }

    /// `e^{-3β/2}`, the ratio of the quartet to the doublet Boltzmann factor.
    fn ratio(beta: f64) -> f64 {
        (-1.5 * beta).exp()
    }

    pub fn log_partition(beta: f64) -> f64 {
        beta + (2.0 + 4.0 * ratio(beta)).ln()
    }

    pub fn elements(beta: f64) -> TwoSpinElements {
        let x = ratio(beta);
        let z = 2.0 + 4.0 * x;
        let a1 = x / z;
        let a2 = (1.0 + 2.0 * x) / 3.0 / z;
        let a3 = (2.0 + x) / 3.0 / z;
        let b = 2f64.sqrt() / 3.0 * (x - 1.0) / z;
        TwoSpinElements {
            a: [a1, a2, a3, a3, a2, a1],
            b1: b,
            b2: b,
            log_z: log_partition(beta),
        }
    }

    pub fn negativity(beta: f64) -> f64 {
        let x = ratio(beta);
        ((1.0 - 4.0 * x) / (1.0 + 2.0 * x)).max(0.0) / 3.0
    }

    /// The bracketed argument of the negativity before clamping.
    pub fn signed_negativity(beta: f64) -> f64 {
        let x = ratio(beta);
        (1.0 - 4.0 * x) / (1.0 + 2.0 * x) / 3.0
    }

    pub fn internal_energy(beta: f64) -> f64 {
        let x = ratio(beta);
        (x - 1.0) / (1.0 + 2.0 * x)
    }

    pub fn negativity_from_energy(u: f64) -> f64 {
        (-1.0 - 2.0 * u).max(0.0) / 3.0
    }
}

/// The triangle `s₁ S₁ s₂`.
pub mod three_spin {
    use super::TwoSpinElements;

    // Boltzmann factors relative to the S=0 ground level: e^{-3β} for S=2,
    // e^{-β} for S=1.
    fn factors(beta: f64) -> (f64, f64, f64) {
        let p = (-3.0 * beta).exp();
        let q = (-beta).exp();
        (p, q, 5.0 * p + 6.0 * q + 1.0)
    }

    pub fn log_partition(beta: f64) -> f64 {
        1.75 * beta + factors(beta).2.ln()
    }

    /// Reduced state of the spin-1/2 / spin-1 pair (sites 0 and 1).
    pub fn rho12(beta: f64) -> TwoSpinElements {
        let (p, q, z) = factors(beta);
        let a1 = (1.25 * p + 0.75 * q) / z;
        let a2 = (5.0 / 6.0 * p + q + 1.0 / 6.0) / z;
        let a3 = (5.0 / 12.0 * p + 1.25 * q + 1.0 / 3.0) / z;
        let s2 = 2f64.sqrt();
        let b1 = (5.0 * s2 / 12.0 * p - s2 / 4.0 * q - s2 / 6.0) / z;
        TwoSpinElements {
            a: [a1, a2, a3, a3, a2, a1],
            b1,
            b2: b1,
            log_z: log_partition(beta),
        }
    }

    pub fn negativity_12(beta: f64) -> f64 {
        let (p, q, z) = factors(beta);
        (-10.0 / 3.0 * p - q + 1.0 / 3.0).max(0.0) / z
    }

    /// Elements `(a₁, a₂, b)` of the two spin-1/2 reduced state
    /// `[[a₁,0,0,0],[0,a₂,b,0],[0,b,a₂,0],[0,0,0,a₁]]`.
    pub fn rho13(beta: f64) -> (f64, f64, f64) {
        let (p, q, z) = factors(beta);
        (
            (5.0 / 3.0 * p + q + 1.0 / 3.0) / z,
            (5.0 / 6.0 * p + 2.0 * q + 1.0 / 6.0) / z,
            (5.0 / 6.0 * p - q + 1.0 / 6.0) / z,
        )
    }

    pub fn rho13_matrix(beta: f64) -> nalgebra::DMatrix<f64> {
        let (a1, a2, b) = rho13(beta);
        nalgebra::DMatrix::from_row_slice(4, 4, &[a1, 0.0, 0.0, 0.0, 0.0, a2, b, 0.0, 0.0, b, a2, 0.0, 0.0, 0.0, 0.0, a1])
    }

    /// Eigenvalues of the partially transposed spin-1/2 pair state.
    pub fn rho13_transpose_spectrum(beta: f64) -> [f64; 4] {
        let (p, q, z) = factors(beta);
        let (_, a2, _) = rho13(beta);
        [
            (2.5 * p + 0.5) / z,
            (5.0 / 6.0 * p + 2.0 * q + 1.0 / 6.0) / z,
            a2,
            a2,
        ]
    }

    pub fn negativity_13(beta: f64) -> f64 {
        let (a1, _, b) = rho13(beta);
        (b.abs() - a1).max(0.0)
    }

    /// `U` from the signed (unclamped) pair negativities.
    pub fn energy_relation(n12: f64, n13: f64) -> f64 {
        -1.25 - n13 - 3.0 * n12
    }

    /// Temperature at which the numerator of the pair negativity changes sign,
    /// by bisection on `β`.
    pub fn threshold_temperature() -> f64 {
        let numerator = |beta: f64| {
            let (p, q, _) = factors(beta);
            -10.0 / 3.0 * p - q + 1.0 / 3.0
        };
        let (mut lo, mut hi) = (0.1, 10.0);
        debug_assert!(numerator(lo) < 0.0 && numerator(hi) > 0.0);
        while hi - lo > 1e-15 {
            let mid = 0.5 * (lo + hi);
            if numerator(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        2.0 / (lo + hi)
    }
}

/// Nearest-neighbour negativity of an even ring from the energy per site.
pub fn even_ring_negativity_from_energy(u_per_site: f64) -> f64 {
    (-1.0 / 3.0 - 2.0 / 3.0 * u_per_site).max(0.0)
}

/// The four-site ring with nearest- and next-nearest-neighbour exchange.
pub mod four_spin {
    /// One energy level, labelled by the branch formula it comes from.
    #[derive(Debug, Clone, Copy, PartialEq)]
    pub struct Level {
        pub branch: u8,
        pub n: u8,
        pub energy: f64,
        pub total_spin: u8,
        pub multiplicity: usize,
        /// `⟨s₁·S₁⟩ = (1/4) ∂E/∂J₁` in this level.
        pub nn_correlator: f64,
    }

    /// All levels. The pair spins `s₁+s₂ = σ` and `S₁+S₂ = Σ` couple to the
    /// total spin `S`; branch 1 is `σ=0`, branches 2-4 are `σ=1` with
    /// `S = Σ+1, Σ, Σ-1`, and the parameter `n` is `Σ`.
    pub fn levels(j1: f64, j2: f64) -> Vec<Level> {
        let mut out = Vec::with_capacity(10);
        for n in 0..=2u8 {
            let nf = n as f64;
            let k = nf * (nf + 1.0);
            out.push(Level {
                branch: 1,
                n,
                energy: j2 * k - 5.5 * j2,
                total_spin: n,
                multiplicity: 2 * n as usize + 1,
                nn_correlator: 0.0,
            });
            out.push(Level {
                branch: 2,
                n,
                energy: nf * j1 + k * j2 - 3.5 * j2,
                total_spin: n + 1,
                multiplicity: 2 * n as usize + 3,
                nn_correlator: nf / 4.0,
            });
            if n >= 1 {
                out.push(Level {
                    branch: 3,
                    n,
                    energy: -j1 + k * j2 - 3.5 * j2,
                    total_spin: n,
                    multiplicity: 2 * n as usize + 1,
                    nn_correlator: -0.25,
                });
                out.push(Level {
                    branch: 4,
                    n,
                    energy: -(nf + 1.0) * j1 + k * j2 - 3.5 * j2,
                    total_spin: n - 1,
                    multiplicity: 2 * n as usize - 1,
                    nn_correlator: -(nf + 1.0) / 4.0,
                });
            }
        }
        out
    }

    /// Piecewise ground energy with crossings at `J₂ = J₁/4` and `J₂ = J₁/2`.
    pub fn ground_energy(j1: f64, j2: f64) -> f64 {
        if j2 < j1 / 4.0 {
            -3.0 * j1 + 2.5 * j2
        } else if j2 < j1 / 2.0 {
            -2.0 * j1 - 1.5 * j2
        } else {
            -5.5 * j2
        }
    }

    /// `⟨s₁·S₁⟩` in the ground state by Hellmann-Feynman on
    /// [`ground_energy`].
    pub fn ground_correlator(j1: f64, j2: f64) -> f64 {
        if j2 < j1 / 4.0 {
            -0.75
        } else if j2 < j1 / 2.0 {
            -0.5
        } else {
            0.0
        }
    }

    /// Terms `(coefficient, exponent)` of the partition function as a sum of
    /// exponentials in `β`, `J₁`, `J₂`.
    fn partition_terms(beta: f64, j1: f64, j2: f64) -> [(f64, f64); 9] {
        let (a, b) = (beta * j1, beta * j2);
        [
            (5.0, -0.5 * b),
            (6.0, 3.5 * b),
            (1.0, 5.5 * b),
            (7.0, -2.5 * b - 2.0 * a),
            (5.0, -2.5 * b + a),
            (3.0, -2.5 * b + 3.0 * a),
            (5.0, 1.5 * b - a),
            (3.0, 1.5 * b + a),
            (1.0, 1.5 * b + 2.0 * a),
        ]
    }

    pub fn log_partition(beta: f64, j1: f64, j2: f64) -> f64 {
        let (s, m) = super::exp_sum(&partition_terms(beta, j1, j2));
        s.ln() + m
    }

    pub fn partition(beta: f64, j1: f64, j2: f64) -> f64 {
        log_partition(beta, j1, j2).exp()
    }

    /// `⟨s₁·S₁⟩ = -(1/4βZ) ∂Z/∂J₁` written out term by term.
    pub fn correlator(beta: f64, j1: f64, j2: f64) -> f64 {
        let (a, b) = (beta * j1, beta * j2);
        let z_terms = partition_terms(beta, j1, j2);
        let (z, m) = super::exp_sum(&z_terms);
        let derivative = [
            (-14.0, -2.5 * b - 2.0 * a),
            (5.0, -2.5 * b + a),
            (9.0, -2.5 * b + 3.0 * a),
            (-5.0, 1.5 * b - a),
            (3.0, 1.5 * b + a),
            (2.0, 1.5 * b + 2.0 * a),
        ];
        -0.25 * super::exp_sum_at(&derivative, m) / z
    }

    pub fn nn_negativity(beta: f64, j1: f64, j2: f64) -> f64 {
        (-1.0 / 3.0 - 2.0 / 3.0 * correlator(beta, j1, j2)).max(0.0)
    }
}

/// The single bond in a longitudinal field, `s·S + B(s_z + S_z)`.
pub mod field_two_spin {
    use super::TwoSpinElements;

    /// Unnormalised elements as sums of `(coefficient, exponent)` terms, in
    /// block order `a₁..a₆`, then `b₁`, `b₂`.
    fn element_terms(beta: f64, b: f64) -> [Vec<(f64, f64)>; 8] {
        let s2 = 2f64.sqrt();
        let h = 0.5 * beta * b;
        [
            vec![(1.0, 0.5 * beta * (3.0 * b - 1.0))],
            vec![(1.0 / 3.0, -h + beta), (2.0 / 3.0, -h - 0.5 * beta)],
            vec![(2.0 / 3.0, -h + beta), (1.0 / 3.0, -h - 0.5 * beta)],
            vec![(2.0 / 3.0, h + beta), (1.0 / 3.0, h - 0.5 * beta)],
            vec![(1.0 / 3.0, h + beta), (2.0 / 3.0, h - 0.5 * beta)],
            vec![(1.0, -0.5 * beta * (3.0 * b + 1.0))],
            vec![(-s2 / 3.0, -h + beta), (s2 / 3.0, -h - 0.5 * beta)],
            vec![(-s2 / 3.0, h + beta), (s2 / 3.0, h - 0.5 * beta)],
        ]
    }

    /// Unnormalised elements `[a₁, …, a₆, b₁, b₂]`. Overflows for large `βB`.
    pub fn unnormalized(beta: f64, b: f64) -> [f64; 8] {
        element_terms(beta, b).map(|t| t.iter().map(|&(c, x)| c * x.exp()).sum())
    }

    /// The closed-form partition function with the `cosh·cosh` term as it is
    /// usually quoted, `e^{β(3B-1)/2} + e^{-β(3B+1)/2} + e^{β/4}cosh(3β/4)cosh(βB/2)`.
    /// This is a quarter of the true weight of the four `m = ±1/2` states;
    /// compare [`log_partition`].
    pub fn quoted_partition(beta: f64, b: f64) -> f64 {
        (0.5 * beta * (3.0 * b - 1.0)).exp()
            + (-0.5 * beta * (3.0 * b + 1.0)).exp()
            + (0.25 * beta).exp() * (0.75 * beta).cosh() * (0.5 * beta * b).cosh()
    }

    /// `ln Z` recomputed as the trace of the unnormalised elements.
    pub fn log_partition(beta: f64, b: f64) -> f64 {
        let terms: Vec<(f64, f64)> = element_terms(beta, b)[..6].iter().flatten().copied().collect();
        let (s, m) = super::exp_sum(&terms);
        s.ln() + m
    }

    /// Elements normalised by their own trace.
    pub fn elements(beta: f64, b: f64) -> TwoSpinElements {
        let terms = element_terms(beta, b);
        let diag: Vec<(f64, f64)> = terms[..6].iter().flatten().copied().collect();
        let (z, m) = super::exp_sum(&diag);
        let v: Vec<f64> = terms.iter().map(|t| super::exp_sum_at(t, m) / z).collect();
        TwoSpinElements {
            a: [v[0], v[1], v[2], v[3], v[4], v[5]],
            b1: v[6],
            b2: v[7],
            log_z: z.ln() + m,
        }
    }

    pub fn negativity(beta: f64, b: f64) -> f64 {
        elements(beta, b).block_negativity()
    }
}

//! Rotated-measurement probability extraction.
//!
//! Instead of evolving the state and detecting in the original basis,
//! each detection projects the *input* state onto a rotated measurement
//! vector: the element targeting mode t is the conjugated row t of U,
//! so p_t = |⟨t|Uψ⟩|² either way. [`forward_reference`] keeps the
//! conventional evolve-then-detect path alive as an internal oracle.

use nalgebra::DVector;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::state::StateVector;
use crate::topology::{ModeIndex, Topology};
use crate::unitary::UnitaryMatrix;
use crate::walk::evolve;

/// Probabilities below this are clamped to zero to suppress sign noise
/// in downstream square roots.
pub const PROB_CLAMP: f64 = 1e-15;
/// Entries more negative than this are rejected instead of clamped.
pub const NEG_PROB_TOL: f64 = -1e-12;
/// Allowed deviation of an exact distribution's total from 1.
pub const DIST_SUM_TOL: f64 = 1e-9;

/// One rank-1 rotated POVM element: the measurement vector m with
/// m_k = conj(U[t, k]), targeting output mode t.
#[derive(Debug, Clone, PartialEq)]
pub struct PovmElement {
    target: ModeIndex,
    vector: DVector<Complex64>,
}

impl PovmElement {
    pub fn target(&self) -> ModeIndex {
        self.target
    }

    pub fn vector(&self) -> &DVector<Complex64> {
        &self.vector
    }

    /// Born-rule probability of this projection on ψ,
    /// |Σ_k conj(m_k) ψ_k|².
    pub fn probability(&self, psi: &StateVector) -> Result<f64> {
        if psi.dim() != self.vector.len() {
            return Err(Error::DimensionMismatch {
                expected: self.vector.len(),
                actual: psi.dim(),
            });
        }
        let mut overlap = Complex64::new(0.0, 0.0);
        for k in 0..self.vector.len() {
            overlap += self.vector[k].conj() * psi.amplitude(k);
        }
        Ok(overlap.norm_sqr())
    }
}

/// Coin-resolved probabilities over all d joint modes.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeDistribution {
    topology: Topology,
    probs: Vec<f64>,
}

impl ModeDistribution {
    /// Wrap exact probabilities; the total must already be 1 within
    /// [`DIST_SUM_TOL`]. Entries below [`PROB_CLAMP`] are zeroed.
    pub fn new_exact(topology: Topology, probs: Vec<f64>) -> Result<Self> {
        let cleaned = clean_probs(&probs, topology.dim())?;
        let sum: f64 = cleaned.iter().sum();
        if (sum - 1.0).abs() > DIST_SUM_TOL {
            return Err(Error::NotADistribution {
                sum,
                tolerance: DIST_SUM_TOL,
            });
        }
        Ok(Self {
            topology,
            probs: cleaned,
        })
    }

    /// Normalize non-negative weights (sampled counts, noisy data) into
    /// a distribution. Rejects a zero total.
    pub fn from_weights(topology: Topology, weights: Vec<f64>) -> Result<Self> {
        let cleaned = clean_probs(&weights, topology.dim())?;
        let sum: f64 = cleaned.iter().sum();
        if sum <= 0.0 {
            return Err(Error::ZeroNorm);
        }
        Ok(Self {
            topology,
            probs: cleaned.into_iter().map(|p| p / sum).collect(),
        })
    }

    pub fn topology(&self) -> &Topology {
        &self.topology
    }

    pub fn dim(&self) -> usize {
        self.probs.len()
    }

    pub fn prob(&self, flat: usize) -> f64 {
        self.probs[flat]
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }
}

/// Position marginal P(x) after tracing out the coin.
#[derive(Debug, Clone, PartialEq)]
pub struct PositionDistribution {
    positions: Vec<i64>,
    probs: Vec<f64>,
}

impl PositionDistribution {
    pub fn positions(&self) -> &[i64] {
        &self.positions
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn prob_at(&self, label: i64) -> Option<f64> {
        self.positions
            .iter()
            .position(|&x| x == label)
            .map(|k| self.probs[k])
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }
}

fn clean_probs(probs: &[f64], expected_dim: usize) -> Result<Vec<f64>> {
    if probs.len() != expected_dim {
        return Err(Error::DimensionMismatch {
            expected: expected_dim,
            actual: probs.len(),
        });
    }
    let mut out = Vec::with_capacity(probs.len());
    for (index, &p) in probs.iter().enumerate() {
        if !p.is_finite() {
            return Err(Error::NonFinite { context: "probability" });
        }
        if p < NEG_PROB_TOL {
            return Err(Error::NegativeProbability { index, value: p });
        }
        out.push(if p.abs() < PROB_CLAMP { 0.0 } else { p });
    }
    Ok(out)
}

/// The rotated POVM element Π' = U†|t⟩⟨t|U as its defining vector:
/// the conjugated row t of U.
pub fn rotated_povm_element(u: &UnitaryMatrix, target: ModeIndex) -> Result<PovmElement> {
    let row = u.row(target.flat)?;
    Ok(PovmElement {
        target,
        vector: row.map(|z| z.conj()),
    })
}

/// Measure every rotated element against ψ: p_t = |row_t(U)·ψ|².
pub fn coin_resolved_probabilities(
    u: &UnitaryMatrix,
    psi: &StateVector,
    topology: &Topology,
) -> Result<ModeDistribution> {
    if u.dim() != topology.dim() {
        return Err(Error::DimensionMismatch {
            expected: topology.dim(),
            actual: u.dim(),
        });
    }
    if psi.dim() != u.dim() {
        return Err(Error::DimensionMismatch {
            expected: u.dim(),
            actual: psi.dim(),
        });
    }
    let mut probs = Vec::with_capacity(u.dim());
    for mode in topology.modes() {
        let element = rotated_povm_element(u, mode)?;
        probs.push(element.probability(psi)?);
    }
    ModeDistribution::new_exact(*topology, probs)
}

/// Trace out the coin: P(x) = Σ_c p_(c,x). Pure re-association, so the
/// total probability is carried over unchanged.
pub fn position_distribution(dist: &ModeDistribution) -> PositionDistribution {
    let topo = dist.topology();
    let d_c = topo.coin_count();
    let positions: Vec<i64> = topo.positions().collect();
    let mut probs = vec![0.0f64; positions.len()];
    for (ordinal, p) in probs.iter_mut().enumerate() {
        for coin in 0..d_c {
            *p += dist.prob(ordinal * d_c + coin);
        }
    }
    PositionDistribution { positions, probs }
}

/// Conventional path: evolve ψ under U, then detect in the original
/// basis. Used as the oracle the rotated scheme is checked against.
pub fn forward_reference(
    u: &UnitaryMatrix,
    psi: &StateVector,
    topology: &Topology,
) -> Result<ModeDistribution> {
    if u.dim() != topology.dim() {
        return Err(Error::DimensionMismatch {
            expected: topology.dim(),
            actual: u.dim(),
        });
    }
    let evolved = evolve(u, psi)?;
    let probs: Vec<f64> = (0..evolved.dim())
        .map(|k| evolved.amplitude(k).norm_sqr())
        .collect();
    ModeDistribution::new_exact(*topology, probs)
}

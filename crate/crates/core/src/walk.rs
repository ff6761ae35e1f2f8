//! Step operators, single-step unitaries `S(C⊗I)`, and walk composition.
//!
//! Shift conventions:
//! - cycle: coin 0 moves x → x+1 (mod d_x), coin 1 moves x → x−1;
//! - line: same shifts but a wall converts the outgoing coin into the
//!   ingoing coin at the same position, S|0, x_max⟩ = |1, x_max⟩ and
//!   S|1, x_min⟩ = |0, x_min⟩;
//! - hypercube: coin c flips position bit c, S|c, x⟩ = |c, x ⊕ 2^c⟩.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::coin::CoinSpec;
use crate::error::{Error, Result};
use crate::state::{make_initial_state, InitialState, StateVector};
use crate::topology::Topology;
use crate::unitary::UnitaryMatrix;

/// Declarative description of one walk benchmark.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkSpec {
    pub topology: Topology,
    pub coin: CoinSpec,
    pub initial_state: InitialState,
    pub steps: u64,
}

impl WalkSpec {
    /// The single-step unitary S(C⊗I) of this walk.
    pub fn step_unitary(&self) -> Result<UnitaryMatrix> {
        let coin = crate::coin::build_coin(&self.coin)?;
        let step = build_step_operator(&self.topology)?;
        build_step_unitary(&coin, &step, &self.topology)
    }

    /// The full N-step walk unitary.
    pub fn walk_unitary(&self) -> Result<UnitaryMatrix> {
        compose_walk(&self.step_unitary()?, self.steps)
    }

    pub fn initial_vector(&self) -> Result<StateVector> {
        make_initial_state(&self.topology, &self.initial_state)
    }
}

/// Where the step operator sends the mode `(coin, position)`.
pub fn shift_target(topology: &Topology, coin: usize, position: i64) -> Result<(usize, i64)> {
    let d_c = topology.coin_count();
    if coin >= d_c {
        return Err(Error::CoinOutOfRange { coin, coin_dim: d_c });
    }
    topology.position_ordinal(position)?;
    Ok(match *topology {
        Topology::Cycle { x_min, x_max } => {
            let span = x_max - x_min + 1;
            let shifted = if coin == 0 { position + 1 } else { position - 1 };
            let wrapped = x_min + (shifted - x_min).rem_euclid(span);
            (coin, wrapped)
        }
        Topology::Line { x_min, x_max } => {
            if coin == 0 {
                if position == x_max {
                    (1, position)
                } else {
                    (0, position + 1)
                }
            } else if position == x_min {
                (0, position)
            } else {
                (1, position - 1)
            }
        }
        Topology::Hypercube { .. } => (coin, position ^ (1i64 << coin)),
    })
}

/// Build the d×d coin-conditioned shift permutation for `topology`.
pub fn build_step_operator(topology: &Topology) -> Result<UnitaryMatrix> {
    let d = topology.dim();
    let mut m = DMatrix::from_element(d, d, Complex64::new(0.0, 0.0));
    for mode in topology.modes() {
        let (coin_to, pos_to) = shift_target(topology, mode.coin, mode.position)?;
        let to = topology.mode(coin_to, pos_to)?;
        m[(to.flat, mode.flat)] = Complex64::new(1.0, 0.0);
    }
    UnitaryMatrix::new(m)
}

/// Assemble the single-step unitary S·(C⊗I). With the position-major
/// flat layout the coin acts on the fast axis, so C⊗I is the
/// block-diagonal matrix with one coin block per position.
pub fn build_step_unitary(
    coin: &UnitaryMatrix,
    step: &UnitaryMatrix,
    topology: &Topology,
) -> Result<UnitaryMatrix> {
    let d_c = topology.coin_count();
    let d = topology.dim();
    if coin.dim() != d_c {
        return Err(Error::DimensionMismatch {
            expected: d_c,
            actual: coin.dim(),
        });
    }
    if step.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            actual: step.dim(),
        });
    }
    let mut blocks = DMatrix::from_element(d, d, Complex64::new(0.0, 0.0));
    for block in 0..topology.position_count() {
        let base = block * d_c;
        for r in 0..d_c {
            for c in 0..d_c {
                blocks[(base + r, base + c)] = coin.entry(r, c);
            }
        }
    }
    let coin_on_modes = UnitaryMatrix::new(blocks)?;
    step.compose(&coin_on_modes)
}

/// n-fold composition of the step unitary, (U_step)^n.
pub fn compose_walk(step_unitary: &UnitaryMatrix, n: u64) -> Result<UnitaryMatrix> {
    step_unitary.pow(n)
}

/// Apply U to ψ. The result is re-validated against the norm invariant.
pub fn evolve(u: &UnitaryMatrix, psi: &StateVector) -> Result<StateVector> {
    if u.dim() != psi.dim() {
        return Err(Error::DimensionMismatch {
            expected: u.dim(),
            actual: psi.dim(),
        });
    }
    StateVector::new(u.as_matrix() * psi.as_vector())
}

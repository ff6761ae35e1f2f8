//! Walker state vectors over the joint coin⊗position basis.

use nalgebra::DVector;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::topology::Topology;

/// Norm tolerance admitted by [`StateVector::new`].
pub const NORM_TOL: f64 = 1e-10;

/// Normalized complex amplitude vector indexed by flat mode index.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: DVector<Complex64>,
}

/// Initial walker preparations used by the benchmark scenarios.
#[derive(Debug, Clone, PartialEq)]
pub enum InitialState {
    /// Unit amplitude on a single mode |c⟩⊗|x⟩.
    Localized { coin: usize, position: i64 },
    /// Equal superposition of all coin states at one position,
    /// |ψ⟩ = 1/√d_c Σ_c |c⟩⊗|x⟩.
    CoinUniform { position: i64 },
    /// Fixed coin, amplitudes spread over several positions; the
    /// amplitude list is normalized on construction.
    PositionSuperposition {
        coin: usize,
        terms: Vec<(i64, Complex64)>,
    },
}

impl StateVector {
    /// Wrap amplitudes that are already normalized (within [`NORM_TOL`]).
    pub fn new(amplitudes: DVector<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::EmptyInput { context: "state vector" });
        }
        if amplitudes
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite { context: "state amplitudes" });
        }
        let norm_sq: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        let deviation = (norm_sq - 1.0).abs();
        if deviation > NORM_TOL {
            return Err(Error::NotNormalized {
                deviation,
                tolerance: NORM_TOL,
            });
        }
        Ok(Self { amplitudes })
    }

    /// Normalize arbitrary finite amplitudes; rejects the zero vector.
    pub fn normalized(amplitudes: DVector<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::EmptyInput { context: "state vector" });
        }
        if amplitudes
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite { context: "state amplitudes" });
        }
        let norm: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm <= 0.0 {
            return Err(Error::ZeroNorm);
        }
        let scaled = amplitudes.map(|z| z / norm);
        Ok(Self { amplitudes: scaled })
    }

    /// Basis state e_flat.
    pub fn basis(dim: usize, flat: usize) -> Result<Self> {
        if flat >= dim {
            return Err(Error::IndexOutOfRange { index: flat, limit: dim });
        }
        let mut v = DVector::from_element(dim, Complex64::new(0.0, 0.0));
        v[flat] = Complex64::new(1.0, 0.0);
        Ok(Self { amplitudes: v })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitude(&self, flat: usize) -> Complex64 {
        self.amplitudes[flat]
    }

    pub fn as_vector(&self) -> &DVector<Complex64> {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }
}

/// Build the normalized initial state described by `kind` on `topology`.
pub fn make_initial_state(topology: &Topology, kind: &InitialState) -> Result<StateVector> {
    let dim = topology.dim();
    let mut amps = DVector::from_element(dim, Complex64::new(0.0, 0.0));
    match kind {
        InitialState::Localized { coin, position } => {
            let mode = topology.mode(*coin, *position)?;
            amps[mode.flat] = Complex64::new(1.0, 0.0);
        }
        InitialState::CoinUniform { position } => {
            let d_c = topology.coin_count();
            let amp = Complex64::new(1.0 / (d_c as f64).sqrt(), 0.0);
            for coin in 0..d_c {
                let mode = topology.mode(coin, *position)?;
                amps[mode.flat] = amp;
            }
        }
        InitialState::PositionSuperposition { coin, terms } => {
            if terms.is_empty() {
                return Err(Error::EmptyInput { context: "superposition terms" });
            }
            for (position, amp) in terms {
                if !amp.re.is_finite() || !amp.im.is_finite() {
                    return Err(Error::NonFinite { context: "superposition amplitude" });
                }
                let mode = topology.mode(*coin, *position)?;
                amps[mode.flat] += amp;
            }
        }
    }
    StateVector::normalized(amps)
}

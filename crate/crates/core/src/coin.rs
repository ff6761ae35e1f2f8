//! Coin operators acting on the walker's internal degree of freedom.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::unitary::UnitaryMatrix;

/// Which coin a walk tosses each step.
#[derive(Debug, Clone, PartialEq)]
pub enum CoinSpec {
    /// 2×2 Hadamard, (1/√2)[[1,1],[1,−1]].
    Hadamard,
    /// d_c-dimensional Grover reflection, entries 2/d_c − δ_{cc'}.
    Grover(usize),
    /// d_c-dimensional identity (non-mixing walk).
    Identity(usize),
    /// Caller-supplied coin; checked for unitarity on build.
    Custom(UnitaryMatrix),
}

impl CoinSpec {
    /// Coin dimension this spec produces.
    pub fn coin_dim(&self) -> usize {
        match self {
            CoinSpec::Hadamard => 2,
            CoinSpec::Grover(d) | CoinSpec::Identity(d) => *d,
            CoinSpec::Custom(u) => u.dim(),
        }
    }
}

/// Build the d_c × d_c coin matrix for `spec`.
pub fn build_coin(spec: &CoinSpec) -> Result<UnitaryMatrix> {
    match spec {
        CoinSpec::Hadamard => {
            let h = 1.0 / 2.0f64.sqrt();
            let m = DMatrix::from_row_slice(
                2,
                2,
                &[
                    Complex64::new(h, 0.0),
                    Complex64::new(h, 0.0),
                    Complex64::new(h, 0.0),
                    Complex64::new(-h, 0.0),
                ],
            );
            UnitaryMatrix::new(m)
        }
        CoinSpec::Grover(d_c) => {
            let d_c = *d_c;
            if d_c == 0 {
                return Err(Error::invalid("coin", "Grover coin needs d_c >= 1"));
            }
            let off = 2.0 / d_c as f64;
            let m = DMatrix::from_fn(d_c, d_c, |r, c| {
                let delta = if r == c { 1.0 } else { 0.0 };
                Complex64::new(off - delta, 0.0)
            });
            UnitaryMatrix::new(m)
        }
        CoinSpec::Identity(d_c) => {
            if *d_c == 0 {
                return Err(Error::invalid("coin", "identity coin needs d_c >= 1"));
            }
            Ok(UnitaryMatrix::identity(*d_c))
        }
        CoinSpec::Custom(u) => Ok(u.clone()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::unitary::UNITARITY_TOL;

    #[test]
    fn grover4_entries() {
        let g = build_coin(&CoinSpec::Grover(4)).unwrap();
        for r in 0..4 {
            for c in 0..4 {
                let want = if r == c { -0.5 } else { 0.5 };
                assert!((g.entry(r, c) - Complex64::new(want, 0.0)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn grover2_is_bit_flip() {
        let g = build_coin(&CoinSpec::Grover(2)).unwrap();
        assert!((g.entry(0, 0).norm()) < 1e-15);
        assert!((g.entry(1, 1).norm()) < 1e-15);
        assert!((g.entry(0, 1) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!((g.entry(1, 0) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn hadamard_entries() {
        let h = build_coin(&CoinSpec::Hadamard).unwrap();
        let s = 1.0 / 2.0f64.sqrt();
        assert!((h.entry(0, 0).re - s).abs() < 1e-15);
        assert!((h.entry(1, 1).re + s).abs() < 1e-15);
    }

    #[test]
    fn all_builtin_coins_unitary() {
        for spec in [
            CoinSpec::Hadamard,
            CoinSpec::Grover(2),
            CoinSpec::Grover(4),
            CoinSpec::Grover(7),
            CoinSpec::Identity(3),
        ] {
            let c = build_coin(&spec).unwrap();
            assert!(c.unitarity_deviation() <= UNITARITY_TOL, "{spec:?}");
        }
    }

    #[test]
    fn custom_coin_must_be_unitary() {
        let bad = DMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(1.0, 0.0),
                Complex64::new(1.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(1.0, 0.0),
            ],
        );
        match UnitaryMatrix::new(bad) {
            Err(Error::NotUnitary { deviation, .. }) => assert!(deviation > 0.5),
            other => panic!("expected NotUnitary, got {other:?}"),
        }
    }
}

//! Walk graph topologies and the coin/position mode indexing they induce.
//!
//! The joint basis is |c⟩⊗|x⟩ with a position-major flat layout:
//! `flat = position_ordinal * d_c + coin`, so each position owns a
//! contiguous block of coin amplitudes.

use crate::error::{Error, Result};

/// Graph a walker moves on. Determines the position set, the coin
/// dimension, and the shift rule applied by the step operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Topology {
    /// Finite line with reflecting walls at both ends; two-sided coin.
    Line { x_min: i64, x_max: i64 },
    /// Cycle with periodic boundaries; two-sided coin.
    Cycle { x_min: i64, x_max: i64 },
    /// `dim`-dimensional hypercube; positions are the 2^dim binary numerals
    /// and coin `c` moves along edge direction `c`.
    Hypercube { dim: u32 },
}

/// One joint coin-position basis mode together with its flat index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ModeIndex {
    pub coin: usize,
    pub position: i64,
    pub flat: usize,
}

impl Topology {
    pub fn line(x_min: i64, x_max: i64) -> Result<Self> {
        if x_min >= x_max {
            return Err(Error::invalid(
                "topology",
                format!("line requires x_min < x_max, got [{x_min}, {x_max}]"),
            ));
        }
        Ok(Topology::Line { x_min, x_max })
    }

    pub fn cycle(x_min: i64, x_max: i64) -> Result<Self> {
        if x_min >= x_max {
            return Err(Error::invalid(
                "topology",
                format!("cycle requires x_min < x_max, got [{x_min}, {x_max}]"),
            ));
        }
        Ok(Topology::Cycle { x_min, x_max })
    }

    pub fn hypercube(dim: u32) -> Result<Self> {
        if dim == 0 || dim > 20 {
            return Err(Error::invalid(
                "topology",
                format!("hypercube dimension must be in [1, 20], got {dim}"),
            ));
        }
        Ok(Topology::Hypercube { dim })
    }

    /// Number of positions `d_x`.
    pub fn position_count(&self) -> usize {
        match *self {
            Topology::Line { x_min, x_max } | Topology::Cycle { x_min, x_max } => {
                (x_max - x_min + 1) as usize
            }
            Topology::Hypercube { dim } => 1usize << dim,
        }
    }

    /// Coin dimension `d_c`: 2 for line/cycle walks, `dim` for hypercubes.
    pub fn coin_count(&self) -> usize {
        match *self {
            Topology::Line { .. } | Topology::Cycle { .. } => 2,
            Topology::Hypercube { dim } => dim as usize,
        }
    }

    /// Total joint dimension `d = d_x * d_c`.
    pub fn dim(&self) -> usize {
        self.position_count() * self.coin_count()
    }

    /// Position labels in ascending order.
    pub fn positions(&self) -> impl Iterator<Item = i64> + '_ {
        let (lo, n) = match *self {
            Topology::Line { x_min, .. } | Topology::Cycle { x_min, .. } => {
                (x_min, self.position_count())
            }
            Topology::Hypercube { .. } => (0, self.position_count()),
        };
        (0..n).map(move |k| lo + k as i64)
    }

    /// 0-based rank of `label` in ascending label order.
    pub fn position_ordinal(&self, label: i64) -> Result<usize> {
        let lo = match *self {
            Topology::Line { x_min, x_max } | Topology::Cycle { x_min, x_max } => {
                if label < x_min || label > x_max {
                    return Err(Error::PositionOutOfRange { label });
                }
                x_min
            }
            Topology::Hypercube { .. } => {
                if label < 0 || label as usize >= self.position_count() {
                    return Err(Error::PositionOutOfRange { label });
                }
                0
            }
        };
        Ok((label - lo) as usize)
    }

    /// Label of the position with the given ordinal.
    pub fn position_label(&self, ordinal: usize) -> Result<i64> {
        if ordinal >= self.position_count() {
            return Err(Error::IndexOutOfRange {
                index: ordinal,
                limit: self.position_count(),
            });
        }
        let lo = match *self {
            Topology::Line { x_min, .. } | Topology::Cycle { x_min, .. } => x_min,
            Topology::Hypercube { .. } => 0,
        };
        Ok(lo + ordinal as i64)
    }

    /// Build the mode for `(coin, position)` with its flat index.
    pub fn mode(&self, coin: usize, position: i64) -> Result<ModeIndex> {
        let d_c = self.coin_count();
        if coin >= d_c {
            return Err(Error::CoinOutOfRange { coin, coin_dim: d_c });
        }
        let ordinal = self.position_ordinal(position)?;
        Ok(ModeIndex {
            coin,
            position,
            flat: ordinal * d_c + coin,
        })
    }

    /// Inverse of [`Topology::mode`]: recover `(coin, position)` from a flat index.
    pub fn mode_from_flat(&self, flat: usize) -> Result<ModeIndex> {
        if flat >= self.dim() {
            return Err(Error::IndexOutOfRange {
                index: flat,
                limit: self.dim(),
            });
        }
        let d_c = self.coin_count();
        let coin = flat % d_c;
        let position = self.position_label(flat / d_c)?;
        Ok(ModeIndex { coin, position, flat })
    }

    /// All modes in flat-index order.
    pub fn modes(&self) -> impl Iterator<Item = ModeIndex> + '_ {
        (0..self.dim()).map(move |flat| self.mode_from_flat(flat).expect("flat < dim"))
    }
}

impl std::fmt::Display for Topology {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match *self {
            Topology::Line { x_min, x_max } => write!(f, "line[{x_min}, {x_max}]"),
            Topology::Cycle { x_min, x_max } => write!(f, "cycle[{x_min}, {x_max}]"),
            Topology::Hypercube { dim } => write!(f, "hypercube({dim})"),
        }
    }
}

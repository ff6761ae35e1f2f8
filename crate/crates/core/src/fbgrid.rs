//! Physical frequency-bin layout, pump-mask compilation, and the
//! measurement imperfection model (crosstalk + shot noise).
//!
//! Abstract modes are assigned to a centered block of bins on a fixed
//! grid; each rotated projection becomes a per-bin amplitude/phase
//! pattern written onto the gate's pump pulse.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Poisson};

use crate::error::{Error, Result};
use crate::measurement::ModeDistribution;
use crate::rng::keyed_rng;
use crate::topology::{ModeIndex, Topology};
use crate::unitary::UnitaryMatrix;

/// Default grid anchor: 1540 nm ↔ 194.67043 THz (f = c/λ, stored to
/// 5 decimals).
pub const DEFAULT_CENTER_THZ: f64 = 194.67043;
/// Signal wave-shaper resolution, GHz.
pub const SIGNAL_SHAPER_RES_GHZ: f64 = 10.0;
/// Pump pulse-shaper resolution, GHz.
pub const PUMP_SHAPER_RES_GHZ: f64 = 20.0;

/// Frequency-bin grid: `n_bins` bins of `bin_width` GHz separated by
/// `guard_band` GHz, centered on `center_frequency` THz.
#[derive(Debug, Clone, PartialEq)]
pub struct BinGrid {
    pub n_bins: usize,
    pub bin_width_ghz: f64,
    pub guard_band_ghz: f64,
    pub center_frequency_thz: f64,
}

impl BinGrid {
    pub fn new(
        n_bins: usize,
        bin_width_ghz: f64,
        guard_band_ghz: f64,
        center_frequency_thz: f64,
    ) -> Result<Self> {
        if n_bins == 0 {
            return Err(Error::invalid("grid", "n_bins must be >= 1"));
        }
        if !(bin_width_ghz > 0.0) {
            return Err(Error::invalid("grid", "bin_width must be positive"));
        }
        if !(guard_band_ghz >= 0.0) {
            return Err(Error::invalid("grid", "guard_band must be non-negative"));
        }
        if !(center_frequency_thz > 0.0) {
            return Err(Error::invalid("grid", "center frequency must be positive"));
        }
        // the shapers cannot carve features narrower than their resolution
        let res = SIGNAL_SHAPER_RES_GHZ.max(PUMP_SHAPER_RES_GHZ);
        if bin_width_ghz < res {
            return Err(Error::invalid(
                "grid",
                format!("bin_width {bin_width_ghz} GHz below shaper resolution {res} GHz"),
            ));
        }
        Ok(Self {
            n_bins,
            bin_width_ghz,
            guard_band_ghz,
            center_frequency_thz,
        })
    }

    /// Bin-to-bin spacing: bin width plus guard band, GHz.
    pub fn pitch_ghz(&self) -> f64 {
        self.bin_width_ghz + self.guard_band_ghz
    }

    /// Center frequency of bin `k` in THz.
    pub fn bin_center(&self, k: usize) -> Result<f64> {
        if k >= self.n_bins {
            return Err(Error::IndexOutOfRange {
                index: k,
                limit: self.n_bins,
            });
        }
        let offset = k as f64 - (self.n_bins as f64 - 1.0) / 2.0;
        Ok(self.center_frequency_thz + offset * self.pitch_ghz() * 1e-3)
    }

    /// First bin of the centered block that holds `d` modes.
    pub fn block_offset(&self, d: usize) -> Result<usize> {
        if d > self.n_bins {
            return Err(Error::GridTooSmall {
                needed: d,
                available: self.n_bins,
            });
        }
        Ok((self.n_bins - d) / 2)
    }

    /// Bin assigned to `target`: flat index shifted into the centered block.
    pub fn mode_to_bin(&self, topology: &Topology, target: &ModeIndex) -> Result<usize> {
        Ok(self.block_offset(topology.dim())? + target.flat)
    }
}

impl Default for BinGrid {
    /// The 64-bin, 40 GHz / 36 GHz guard-band layout.
    fn default() -> Self {
        Self {
            n_bins: 64,
            bin_width_ghz: 40.0,
            guard_band_ghz: 36.0,
            center_frequency_thz: DEFAULT_CENTER_THZ,
        }
    }
}

/// One bin of a pump mask.
#[derive(Debug, Clone, PartialEq)]
pub struct MaskBin {
    pub bin_index: usize,
    pub center_frequency_thz: f64,
    pub amplitude: f64,
    pub phase_rad: f64,
}

/// Per-bin amplitude/phase pattern implementing one rotated projection.
#[derive(Debug, Clone, PartialEq)]
pub struct PumpMask {
    target: ModeIndex,
    bins: Vec<MaskBin>,
}

impl PumpMask {
    pub fn target(&self) -> ModeIndex {
        self.target
    }

    pub fn bins(&self) -> &[MaskBin] {
        &self.bins
    }

    /// Bins carrying nonzero amplitude.
    pub fn active_bins(&self) -> usize {
        self.bins.iter().filter(|b| b.amplitude > 0.0).count()
    }

    pub fn amplitude_norm_sqr(&self) -> f64 {
        self.bins.iter().map(|b| b.amplitude * b.amplitude).sum()
    }

    /// Read the mask back as the complex measurement vector over flat
    /// modes (inverse of the bin assignment).
    pub fn as_mode_vector(&self, topology: &Topology, grid: &BinGrid) -> Result<Vec<Complex64>> {
        let d = topology.dim();
        let offset = grid.block_offset(d)?;
        let mut v = vec![Complex64::new(0.0, 0.0); d];
        for bin in &self.bins {
            if bin.amplitude == 0.0 {
                continue;
            }
            if bin.bin_index < offset || bin.bin_index >= offset + d {
                return Err(Error::IndexOutOfRange {
                    index: bin.bin_index,
                    limit: offset + d,
                });
            }
            v[bin.bin_index - offset] = Complex64::from_polar(bin.amplitude, bin.phase_rad);
        }
        Ok(v)
    }

    /// Serialize in the export format:
    /// `bin_index,frequency_thz,amplitude,phase_rad` with frequencies to
    /// 5 decimals and amplitudes/phases to 12 significant digits.
    pub fn to_csv_string(&self) -> String {
        let mut out = String::from("bin_index,frequency_thz,amplitude,phase_rad\n");
        for bin in &self.bins {
            out.push_str(&format!(
                "{},{:.5},{:.11e},{:.11e}\n",
                bin.bin_index, bin.center_frequency_thz, bin.amplitude, bin.phase_rad
            ));
        }
        out
    }

    /// Parse a mask CSV produced by [`PumpMask::to_csv_string`].
    pub fn from_csv_str(content: &str, target: ModeIndex) -> Result<Self> {
        let mut lines = content.lines();
        let header = lines.next().unwrap_or("");
        if header.trim() != "bin_index,frequency_thz,amplitude,phase_rad" {
            return Err(Error::Parse {
                path: "<mask csv>".into(),
                reason: format!("unexpected header `{header}`"),
            });
        }
        let mut bins = Vec::new();
        for (lineno, line) in lines.enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 4 {
                return Err(Error::Parse {
                    path: "<mask csv>".into(),
                    reason: format!("line {}: expected 4 fields", lineno + 2),
                });
            }
            let parse_f = |s: &str| -> Result<f64> {
                s.trim().parse().map_err(|_| Error::Parse {
                    path: "<mask csv>".into(),
                    reason: format!("line {}: bad number `{s}`", lineno + 2),
                })
            };
            bins.push(MaskBin {
                bin_index: fields[0].trim().parse().map_err(|_| Error::Parse {
                    path: "<mask csv>".into(),
                    reason: format!("line {}: bad bin index", lineno + 2),
                })?,
                center_frequency_thz: parse_f(fields[1])?,
                amplitude: parse_f(fields[2])?,
                phase_rad: parse_f(fields[3])?,
            });
        }
        Ok(Self { target, bins })
    }
}

/// Compile the pump mask that projects onto the rotated element for
/// `target`: bin mode_to_bin(k) carries the polar form of conj(U[t,k]).
pub fn compile_mask(
    u: &UnitaryMatrix,
    target: ModeIndex,
    grid: &BinGrid,
    topology: &Topology,
) -> Result<PumpMask> {
    if u.dim() != topology.dim() {
        return Err(Error::DimensionMismatch {
            expected: topology.dim(),
            actual: u.dim(),
        });
    }
    let d = topology.dim();
    let offset = grid.block_offset(d)?;
    if target.flat >= d {
        return Err(Error::IndexOutOfRange {
            index: target.flat,
            limit: d,
        });
    }
    let mut bins = Vec::with_capacity(grid.n_bins);
    for bin_index in 0..grid.n_bins {
        let (amplitude, phase_rad) = if bin_index >= offset && bin_index < offset + d {
            let entry = u.entry(target.flat, bin_index - offset).conj();
            let amp = entry.norm();
            if amp == 0.0 {
                (0.0, 0.0)
            } else {
                let mut phase = entry.arg();
                // keep phases in (−π, π]
                if phase <= -std::f64::consts::PI {
                    phase = std::f64::consts::PI;
                }
                (amp, phase)
            }
        } else {
            (0.0, 0.0)
        };
        bins.push(MaskBin {
            bin_index,
            center_frequency_thz: grid.bin_center(bin_index)?,
            amplitude,
            phase_rad,
        });
    }
    let mask = PumpMask { target, bins };
    let norm = mask.amplitude_norm_sqr();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::NotNormalized {
            deviation: (norm - 1.0).abs(),
            tolerance: 1e-10,
        });
    }
    Ok(mask)
}

/// Detection description: exact Born-rule readout or a noisy channel
/// with nearest-neighbor crosstalk and Poissonian shot statistics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MeasurementModel {
    Ideal,
    Noisy {
        /// Fraction of each mode's probability leaking to its spectral
        /// neighbors, split evenly; κ ∈ [0, 0.5).
        crosstalk: f64,
        /// Expected photon count budget per projection.
        shots: u64,
        seed: u64,
    },
}

impl MeasurementModel {
    pub fn noisy(crosstalk: f64, shots: u64, seed: u64) -> Result<Self> {
        if !(0.0..0.5).contains(&crosstalk) {
            return Err(Error::invalid(
                "crosstalk",
                format!("kappa must lie in [0, 0.5), got {crosstalk}"),
            ));
        }
        if shots == 0 {
            return Err(Error::invalid("shots", "shot count must be >= 1"));
        }
        Ok(MeasurementModel::Noisy {
            crosstalk,
            shots,
            seed,
        })
    }

    pub fn is_ideal(&self) -> bool {
        matches!(self, MeasurementModel::Ideal)
    }

    /// Same model with its seed replaced (used to key per-step streams).
    pub fn reseeded(&self, seed: u64) -> Self {
        match *self {
            MeasurementModel::Ideal => MeasurementModel::Ideal,
            MeasurementModel::Noisy {
                crosstalk, shots, ..
            } => MeasurementModel::Noisy {
                crosstalk,
                shots,
                seed,
            },
        }
    }
}

/// Raw per-target counts from one simulated acquisition sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct CountRecord {
    counts: Vec<u64>,
    shots: u64,
    seed: u64,
    probabilities: Option<ModeDistribution>,
}

impl CountRecord {
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn shots(&self) -> u64 {
        self.shots
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn total_counts(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// True when no photon was registered on any target.
    pub fn is_empty(&self) -> bool {
        self.probabilities.is_none()
    }

    /// Counts normalized into a distribution; `None` for an empty record.
    pub fn probabilities(&self) -> Option<&ModeDistribution> {
        self.probabilities.as_ref()
    }
}

/// Spread each mode's probability to its flat-index neighbors:
/// p'_i = (1−κ)p_i + (κ/2)(p_{i−1} + p_{i+1}), with a missing
/// neighbor's share reflected back onto p_i so the total is conserved
/// exactly.
pub fn apply_crosstalk(dist: &ModeDistribution, model: &MeasurementModel) -> Result<ModeDistribution> {
    let kappa = match *model {
        MeasurementModel::Ideal => 0.0,
        MeasurementModel::Noisy { crosstalk, .. } => crosstalk,
    };
    if !(0.0..0.5).contains(&kappa) {
        return Err(Error::invalid(
            "crosstalk",
            format!("kappa must lie in [0, 0.5), got {kappa}"),
        ));
    }
    if kappa == 0.0 {
        return Ok(dist.clone());
    }
    let p = dist.probs();
    let d = p.len();
    let half = kappa / 2.0;
    let mut out = vec![0.0f64; d];
    for i in 0..d {
        let mut v = (1.0 - kappa) * p[i];
        if i > 0 {
            v += half * p[i - 1];
        } else {
            v += half * p[i]; // reflected left share
        }
        if i + 1 < d {
            v += half * p[i + 1];
        } else {
            v += half * p[i]; // reflected right share
        }
        out[i] = v;
    }
    ModeDistribution::new_exact(*dist.topology(), out)
}

/// Draw per-target Poisson counts, one independent keyed stream per
/// target so acquisition order never matters. Counts are normalized
/// into derived probabilities; a zero-count sweep is flagged empty.
pub fn sample_counts(dist: &ModeDistribution, model: &MeasurementModel) -> Result<CountRecord> {
    let (shots, seed) = match *model {
        MeasurementModel::Ideal => return Err(Error::SamplingUndefined),
        MeasurementModel::Noisy { shots, seed, .. } => (shots, seed),
    };
    if shots == 0 {
        return Err(Error::invalid("shots", "shot count must be >= 1"));
    }
    let mut counts = Vec::with_capacity(dist.dim());
    for (flat, &p) in dist.probs().iter().enumerate() {
        let lambda = shots as f64 * p;
        let count = if lambda <= 0.0 {
            0
        } else {
            let mut rng = keyed_rng(seed, flat as u64);
            let poisson = Poisson::new(lambda).map_err(|e| {
                Error::invalid("shots", format!("bad Poisson rate {lambda}: {e}"))
            })?;
            let draw: f64 = poisson.sample(&mut rng);
            draw.round().max(0.0) as u64
        };
        counts.push(count);
    }
    let total: u64 = counts.iter().sum();
    let probabilities = if total == 0 {
        None
    } else {
        Some(ModeDistribution::from_weights(
            *dist.topology(),
            counts.iter().map(|&c| c as f64).collect(),
        )?)
    };
    Ok(CountRecord {
        counts,
        shots,
        seed,
        probabilities,
    })
}

/// Poisson draw helper exposed for statistical tests.
pub fn poisson_draw<R: Rng>(lambda: f64, rng: &mut R) -> u64 {
    if lambda <= 0.0 {
        return 0;
    }
    let poisson = Poisson::new(lambda).expect("positive rate");
    let draw: f64 = poisson.sample(rng);
    draw.round().max(0.0) as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coin::{build_coin, CoinSpec};
    use crate::measurement::coin_resolved_probabilities;
    use crate::state::{make_initial_state, InitialState};
    use crate::walk::{build_step_operator, build_step_unitary};

    #[test]
    fn default_grid_matches_reported_layout() {
        let grid = BinGrid::default();
        assert_eq!(grid.n_bins, 64);
        assert!((grid.pitch_ghz() - 76.0).abs() < 1e-12);
        let span = grid.bin_center(63).unwrap() - grid.bin_center(0).unwrap();
        assert!((span - 4.788).abs() < 1e-9, "span {span}");
    }

    #[test]
    fn odd_grid_center_bin_sits_on_anchor() {
        let grid = BinGrid::new(11, 40.0, 36.0, DEFAULT_CENTER_THZ).unwrap();
        let mid = grid.bin_center(5).unwrap();
        assert!((mid - DEFAULT_CENTER_THZ).abs() < 1e-12);
    }

    #[test]
    fn mode_to_bin_centers_each_scenario() {
        let grid = BinGrid::default();
        let hyper = Topology::hypercube(4).unwrap();
        let m = hyper.mode_from_flat(17).unwrap();
        assert_eq!(grid.mode_to_bin(&hyper, &m).unwrap(), 17);

        let circle = Topology::cycle(-10, 10).unwrap();
        let m = circle.mode_from_flat(0).unwrap();
        assert_eq!(grid.mode_to_bin(&circle, &m).unwrap(), 11);

        let line = Topology::line(-5, 5).unwrap();
        let m = line.mode_from_flat(21).unwrap();
        assert_eq!(grid.mode_to_bin(&line, &m).unwrap(), 42);
    }

    #[test]
    fn mode_to_bin_is_injective_per_scenario() {
        let grid = BinGrid::default();
        for topo in [
            Topology::hypercube(4).unwrap(),
            Topology::cycle(-10, 10).unwrap(),
            Topology::line(-5, 5).unwrap(),
        ] {
            let mut seen = std::collections::HashSet::new();
            for mode in topo.modes() {
                assert!(seen.insert(grid.mode_to_bin(&topo, &mode).unwrap()), "{topo}");
            }
        }
    }

    #[test]
    fn oversized_walk_rejected() {
        let grid = BinGrid::new(32, 40.0, 36.0, DEFAULT_CENTER_THZ).unwrap();
        let topo = Topology::hypercube(4).unwrap();
        let m = topo.mode_from_flat(0).unwrap();
        assert!(matches!(
            grid.mode_to_bin(&topo, &m),
            Err(Error::GridTooSmall { needed: 64, available: 32 })
        ));
    }

    #[test]
    fn identity_mask_is_single_bin() {
        let grid = BinGrid::default();
        let topo = Topology::hypercube(4).unwrap();
        let u = UnitaryMatrix::identity(64);
        let target = topo.mode_from_flat(9).unwrap();
        let mask = compile_mask(&u, target, &grid, &topo).unwrap();
        assert_eq!(mask.active_bins(), 1);
        let bin = &mask.bins()[9];
        assert!((bin.amplitude - 1.0).abs() < 1e-15);
        assert_eq!(bin.phase_rad, 0.0);
    }

    #[test]
    fn hadamard_row_mask_has_two_equal_bins() {
        let grid = BinGrid::new(8, 40.0, 36.0, DEFAULT_CENTER_THZ).unwrap();
        let topo = Topology::cycle(0, 1).unwrap(); // d = 4
        let coin = build_coin(&CoinSpec::Hadamard).unwrap();
        let step = build_step_operator(&topo).unwrap();
        let u = build_step_unitary(&coin, &step, &topo).unwrap();
        let target = topo.mode_from_flat(0).unwrap();
        let mask = compile_mask(&u, target, &grid, &topo).unwrap();
        assert_eq!(mask.active_bins(), 2);
        let h = 1.0 / 2.0f64.sqrt();
        for bin in mask.bins().iter().filter(|b| b.amplitude > 0.0) {
            assert!((bin.amplitude - h).abs() < 1e-12);
            assert!(
                bin.phase_rad.abs() < 1e-12
                    || (bin.phase_rad.abs() - std::f64::consts::PI).abs() < 1e-12
            );
        }
    }

    #[test]
    fn grover_hypercube_mask_round_trips_to_row_probabilities() {
        let grid = BinGrid::default();
        let topo = Topology::hypercube(4).unwrap();
        let coin = build_coin(&CoinSpec::Grover(4)).unwrap();
        let step = build_step_operator(&topo).unwrap();
        let u = build_step_unitary(&coin, &step, &topo).unwrap();
        let psi = make_initial_state(&topo, &InitialState::CoinUniform { position: 0 }).unwrap();
        let expected = coin_resolved_probabilities(&u, &psi, &topo).unwrap();

        let target = topo.mode(0, 0).unwrap();
        let mask = compile_mask(&u, target, &grid, &topo).unwrap();

        let row_nonzero = (0..64).filter(|&k| u.entry(target.flat, k).norm() > 0.0).count();
        assert_eq!(mask.active_bins(), row_nonzero);
        assert!((mask.amplitude_norm_sqr() - 1.0).abs() <= 1e-10);

        // re-project the mask vector against the input state
        let v = mask.as_mode_vector(&topo, &grid).unwrap();
        let mut overlap = Complex64::new(0.0, 0.0);
        for (k, m) in v.iter().enumerate() {
            overlap += m.conj() * psi.amplitude(k);
        }
        assert!((overlap.norm_sqr() - expected.prob(target.flat)).abs() <= 1e-12);
    }

    #[test]
    fn mask_csv_round_trip_preserves_projection() {
        let grid = BinGrid::default();
        let topo = Topology::cycle(-10, 10).unwrap();
        let coin = build_coin(&CoinSpec::Hadamard).unwrap();
        let step = build_step_operator(&topo).unwrap();
        let u = build_step_unitary(&coin, &step, &topo).unwrap();
        let u = u.pow(5).unwrap();
        let psi = make_initial_state(
            &topo,
            &InitialState::Localized { coin: 0, position: 0 },
        )
        .unwrap();
        let expected = coin_resolved_probabilities(&u, &psi, &topo).unwrap();

        let target = topo.mode(1, 3).unwrap();
        let mask = compile_mask(&u, target, &grid, &topo).unwrap();
        let csv = mask.to_csv_string();
        let parsed = PumpMask::from_csv_str(&csv, target).unwrap();
        let v = parsed.as_mode_vector(&topo, &grid).unwrap();
        let mut overlap = Complex64::new(0.0, 0.0);
        for (k, m) in v.iter().enumerate() {
            overlap += m.conj() * psi.amplitude(k);
        }
        // 12 significant digits in the file bound the round-trip accuracy
        assert!((overlap.norm_sqr() - expected.prob(target.flat)).abs() <= 1e-9);
    }

    #[test]
    fn crosstalk_zero_is_identity() {
        let topo = Topology::cycle(0, 1).unwrap();
        let dist = ModeDistribution::new_exact(topo, vec![0.4, 0.3, 0.2, 0.1]).unwrap();
        let model = MeasurementModel::noisy(0.0, 100, 1).unwrap();
        let out = apply_crosstalk(&dist, &model).unwrap();
        assert_eq!(out.probs(), dist.probs());
    }

    #[test]
    fn crosstalk_edge_reflection_hand_value() {
        // kappa = 0.2 on a point mass at the left edge: the missing left
        // neighbor's share reflects back, so (1, 0, 0, ...) -> (0.9, 0.1, 0, ...)
        let topo = Topology::cycle(0, 2).unwrap();
        let mut p = vec![0.0; 6];
        p[0] = 1.0;
        let dist = ModeDistribution::new_exact(topo, p).unwrap();
        let model = MeasurementModel::noisy(0.2, 100, 1).unwrap();
        let out = apply_crosstalk(&dist, &model).unwrap();
        assert!((out.prob(0) - 0.9).abs() < 1e-15);
        assert!((out.prob(1) - 0.1).abs() < 1e-15);
        for k in 2..6 {
            assert_eq!(out.prob(k), 0.0);
        }
    }

    #[test]
    fn crosstalk_conserves_uniform_and_total() {
        let topo = Topology::cycle(-10, 10).unwrap();
        let uniform = ModeDistribution::new_exact(topo, vec![1.0 / 42.0; 42]).unwrap();
        let model = MeasurementModel::noisy(0.3, 100, 1).unwrap();
        let out = apply_crosstalk(&uniform, &model).unwrap();
        for k in 0..42 {
            assert!((out.prob(k) - 1.0 / 42.0).abs() < 1e-14);
        }
        assert!((out.total() - uniform.total()).abs() <= 1e-12);
    }

    #[test]
    fn invalid_kappa_rejected() {
        assert!(MeasurementModel::noisy(0.5, 10, 0).is_err());
        assert!(MeasurementModel::noisy(-0.01, 10, 0).is_err());
        assert!(MeasurementModel::noisy(0.49, 10, 0).is_ok());
    }

    #[test]
    fn sampling_is_deterministic_and_order_free() {
        let topo = Topology::cycle(0, 2).unwrap();
        let dist = ModeDistribution::new_exact(
            topo,
            vec![0.3, 0.25, 0.2, 0.15, 0.06, 0.04],
        )
        .unwrap();
        let model = MeasurementModel::noisy(0.0, 10_000, 99).unwrap();
        let a = sample_counts(&dist, &model).unwrap();
        let b = sample_counts(&dist, &model).unwrap();
        assert_eq!(a.counts(), b.counts());
    }

    #[test]
    fn point_mass_samples_only_its_target() {
        let topo = Topology::cycle(0, 2).unwrap();
        let mut p = vec![0.0; 6];
        p[0] = 1.0;
        let dist = ModeDistribution::new_exact(topo, p).unwrap();
        let model = MeasurementModel::noisy(0.0, 500, 3).unwrap();
        let rec = sample_counts(&dist, &model).unwrap();
        assert!(rec.counts()[0] > 0);
        assert!(rec.counts()[1..].iter().all(|&c| c == 0));
        let probs = rec.probabilities().unwrap();
        assert_eq!(probs.prob(0), 1.0);
    }

    #[test]
    fn ideal_model_cannot_sample() {
        let topo = Topology::cycle(0, 2).unwrap();
        let dist = ModeDistribution::new_exact(topo, vec![1.0 / 6.0; 6]).unwrap();
        assert!(matches!(
            sample_counts(&dist, &MeasurementModel::Ideal),
            Err(Error::SamplingUndefined)
        ));
    }

    #[test]
    fn large_shot_counts_converge_in_total_variation() {
        let topo = Topology::cycle(-10, 10).unwrap();
        let coin = build_coin(&CoinSpec::Hadamard).unwrap();
        let step = build_step_operator(&topo).unwrap();
        let u = build_step_unitary(&coin, &step, &topo).unwrap().pow(20).unwrap();
        let psi = make_initial_state(
            &topo,
            &InitialState::Localized { coin: 0, position: 0 },
        )
        .unwrap();
        let dist = coin_resolved_probabilities(&u, &psi, &topo).unwrap();
        let model = MeasurementModel::noisy(0.0, 1_000_000, 12345).unwrap();
        let rec = sample_counts(&dist, &model).unwrap();
        let sampled = rec.probabilities().unwrap();
        let tv: f64 = dist
            .probs()
            .iter()
            .zip(sampled.probs())
            .map(|(p, q)| (p - q).abs())
            .sum::<f64>()
            / 2.0;
        assert!(tv <= 0.01, "tv = {tv}");
    }
}

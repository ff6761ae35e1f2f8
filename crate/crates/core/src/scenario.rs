//! Scenario configuration and run orchestration.
//!
//! Scenarios are strict JSON documents (unknown fields are errors) with
//! a `version` tag. Three built-in presets mirror the benchmark walks:
//! a Grover walk on the four-dimensional hypercube, a 400-step Hadamard
//! walk on a 21-node circle, and a non-mixing reflecting walk launched
//! from a position superposition.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::coin::{build_coin, CoinSpec};
use crate::error::{Error, Result};
use crate::fbgrid::{apply_crosstalk, sample_counts, BinGrid, MeasurementModel};
use crate::measurement::{
    coin_resolved_probabilities, position_distribution, ModeDistribution, PositionDistribution,
};
use crate::metrics::{bhattacharyya, SimilarityReport, StepSimilarity};
use crate::rng::stream_seed;
use crate::state::{make_initial_state, InitialState, StateVector};
use crate::topology::Topology;
use crate::unitary::UnitaryMatrix;
use crate::walk::{build_step_operator, build_step_unitary};

/// Config schema version this build reads.
pub const CONFIG_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum TopologyConfig {
    Line { x_min: i64, x_max: i64 },
    Cycle { x_min: i64, x_max: i64 },
    Hypercube { dim: u32 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum CoinConfig {
    Hadamard,
    /// Grover reflection sized by the topology's coin dimension.
    Grover,
    /// Identity coin sized by the topology's coin dimension.
    Identity,
    /// Explicit coin matrix, entries as [re, im] pairs.
    Custom { matrix: Vec<Vec<[f64; 2]>> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuperpositionTerm {
    pub position: i64,
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialStateConfig {
    Localized { coin: usize, position: i64 },
    CoinUniform { position: i64 },
    PositionSuperposition {
        coin: usize,
        terms: Vec<SuperpositionTerm>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum MeasurementConfig {
    #[default]
    Ideal,
    Noisy { crosstalk: f64, shots: u64, seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridConfig {
    pub n_bins: usize,
    pub bin_width_ghz: f64,
    pub guard_band_ghz: f64,
    pub center_frequency_thz: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        let g = BinGrid::default();
        Self {
            n_bins: g.n_bins,
            bin_width_ghz: g.bin_width_ghz,
            guard_band_ghz: g.guard_band_ghz,
            center_frequency_thz: g.center_frequency_thz,
        }
    }
}

/// Artifacts a run may emit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
    Svg,
    Masks,
}

impl std::str::FromStr for OutputFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            "svg" => Ok(OutputFormat::Svg),
            "masks" => Ok(OutputFormat::Masks),
            other => Err(Error::config(
                "outputs",
                format!("unknown format `{other}` (expected csv, json, svg, masks)"),
            )),
        }
    }
}

/// Declarative description of one benchmark run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub version: u32,
    pub name: String,
    pub topology: TopologyConfig,
    pub coin: CoinConfig,
    pub initial_state: InitialStateConfig,
    /// Explicit step counts to measure, strictly increasing.
    pub steps: Vec<u64>,
    #[serde(default)]
    pub measurement: MeasurementConfig,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub outputs: Vec<OutputFormat>,
}

impl ScenarioConfig {
    /// Parse a strict JSON document; errors carry the offending field path.
    pub fn from_json_str(json: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(json);
        let config: ScenarioConfig = serde_path_to_error::deserialize(de).map_err(|e| {
            Error::config(e.path().to_string(), e.inner().to_string())
        })?;
        config.validate()?;
        Ok(config)
    }

    pub fn from_file(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json_str(&text)
    }

    pub fn validate(&self) -> Result<()> {
        if self.version != CONFIG_VERSION {
            return Err(Error::config(
                "version",
                format!("unsupported version {} (expected {CONFIG_VERSION})", self.version),
            ));
        }
        if self.name.trim().is_empty() {
            return Err(Error::config("name", "scenario name must be non-empty"));
        }
        if self.steps.is_empty() {
            return Err(Error::config("steps", "at least one step must be measured"));
        }
        if self.steps.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::config("steps", "step list must be strictly increasing"));
        }
        // materialize every domain object so label errors surface now
        let topology = self.topology()?;
        self.coin_spec(&topology)?;
        make_initial_state(&topology, &self.initial_state())?;
        self.measurement_model()?;
        let grid = self.bin_grid()?;
        grid.block_offset(topology.dim())?;
        Ok(())
    }

    pub fn topology(&self) -> Result<Topology> {
        match self.topology {
            TopologyConfig::Line { x_min, x_max } => Topology::line(x_min, x_max),
            TopologyConfig::Cycle { x_min, x_max } => Topology::cycle(x_min, x_max),
            TopologyConfig::Hypercube { dim } => Topology::hypercube(dim),
        }
    }

    pub fn coin_spec(&self, topology: &Topology) -> Result<CoinSpec> {
        Ok(match &self.coin {
            CoinConfig::Hadamard => {
                if topology.coin_count() != 2 {
                    return Err(Error::config(
                        "coin",
                        format!(
                            "Hadamard coin is 2-dimensional but topology needs d_c = {}",
                            topology.coin_count()
                        ),
                    ));
                }
                CoinSpec::Hadamard
            }
            CoinConfig::Grover => CoinSpec::Grover(topology.coin_count()),
            CoinConfig::Identity => CoinSpec::Identity(topology.coin_count()),
            CoinConfig::Custom { matrix } => {
                let rows = matrix.len();
                if rows == 0 || matrix.iter().any(|r| r.len() != rows) {
                    return Err(Error::config("coin.matrix", "matrix must be square"));
                }
                if rows != topology.coin_count() {
                    return Err(Error::config(
                        "coin.matrix",
                        format!(
                            "coin is {rows}x{rows} but topology needs d_c = {}",
                            topology.coin_count()
                        ),
                    ));
                }
                let m = DMatrix::from_fn(rows, rows, |r, c| {
                    Complex64::new(matrix[r][c][0], matrix[r][c][1])
                });
                CoinSpec::Custom(UnitaryMatrix::new(m)?)
            }
        })
    }

    pub fn initial_state(&self) -> InitialState {
        match &self.initial_state {
            InitialStateConfig::Localized { coin, position } => InitialState::Localized {
                coin: *coin,
                position: *position,
            },
            InitialStateConfig::CoinUniform { position } => InitialState::CoinUniform {
                position: *position,
            },
            InitialStateConfig::PositionSuperposition { coin, terms } => {
                InitialState::PositionSuperposition {
                    coin: *coin,
                    terms: terms
                        .iter()
                        .map(|t| (t.position, Complex64::new(t.re, t.im)))
                        .collect(),
                }
            }
        }
    }

    pub fn measurement_model(&self) -> Result<MeasurementModel> {
        match self.measurement {
            MeasurementConfig::Ideal => Ok(MeasurementModel::Ideal),
            MeasurementConfig::Noisy {
                crosstalk,
                shots,
                seed,
            } => MeasurementModel::noisy(crosstalk, shots, seed),
        }
    }

    pub fn bin_grid(&self) -> Result<BinGrid> {
        BinGrid::new(
            self.grid.n_bins,
            self.grid.bin_width_ghz,
            self.grid.guard_band_ghz,
            self.grid.center_frequency_thz,
        )
    }

    /// Seed recorded by the run, if any (the noisy model's).
    pub fn seed(&self) -> Option<u64> {
        match self.measurement {
            MeasurementConfig::Ideal => None,
            MeasurementConfig::Noisy { seed, .. } => Some(seed),
        }
    }

    /// Replace the measurement seed (flag > env > config precedence is
    /// applied by the CLI). A no-op for ideal measurements.
    pub fn with_seed(mut self, seed: u64) -> Self {
        if let MeasurementConfig::Noisy { seed: s, .. } = &mut self.measurement {
            *s = seed;
        }
        self
    }

    /// SHA-256 of the canonical JSON encoding of this config.
    pub fn config_hash(&self) -> String {
        let canonical = serde_json::to_string(self).expect("config serializes");
        hex::encode(Sha256::digest(canonical.as_bytes()))
    }
}

/// Per-step measurement products of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct StepResult {
    pub n: u64,
    pub theory_modes: ModeDistribution,
    pub sim_modes: Option<ModeDistribution>,
    pub theory_positions: PositionDistribution,
    pub sim_positions: Option<PositionDistribution>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub config_hash: String,
    pub seed: Option<u64>,
    pub version: String,
}

/// Everything a scenario run produces.
#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub config: ScenarioConfig,
    pub topology: Topology,
    pub steps: Vec<StepResult>,
    pub similarity: SimilarityReport,
    pub provenance: Provenance,
}

/// Execute one scenario: build the walk, accumulate the step unitary up
/// to the largest measured step, and extract theory (and, for noisy
/// models, simulated) distributions at every measured step.
pub fn run_scenario(config: &ScenarioConfig) -> Result<RunResult> {
    config.validate()?;
    let topology = config.topology()?;
    let coin = build_coin(&config.coin_spec(&topology)?)?;
    let shift = build_step_operator(&topology)?;
    let step_unitary = build_step_unitary(&coin, &shift, &topology)?;
    let psi = make_initial_state(&topology, &config.initial_state())?;
    let model = config.measurement_model()?;
    let base_seed = config.seed();

    let mut steps = Vec::with_capacity(config.steps.len());
    let mut similarities = Vec::with_capacity(config.steps.len());
    let mut walk = UnitaryMatrix::identity(topology.dim());
    let mut reached = 0u64;
    for &n in &config.steps {
        for _ in reached..n {
            walk = step_unitary.compose(&walk)?;
        }
        reached = n;
        let step = measure_step(&topology, &walk, &psi, &model, base_seed, n)?;
        let s_n = match &step.sim_positions {
            Some(sim) => bhattacharyya(step.theory_positions.probs(), sim.probs())?,
            None => bhattacharyya(
                step.theory_positions.probs(),
                step.theory_positions.probs(),
            )?,
        };
        similarities.push(StepSimilarity { n, s: s_n });
        steps.push(step);
    }

    let similarity = SimilarityReport::new(config.name.clone(), base_seed, similarities)?;
    let provenance = Provenance {
        config_hash: config.config_hash(),
        seed: base_seed,
        version: crate::VERSION.to_string(),
    };
    Ok(RunResult {
        config: config.clone(),
        topology,
        steps,
        similarity,
        provenance,
    })
}

fn measure_step(
    topology: &Topology,
    walk: &UnitaryMatrix,
    psi: &StateVector,
    model: &MeasurementModel,
    base_seed: Option<u64>,
    n: u64,
) -> Result<StepResult> {
    let theory_modes = coin_resolved_probabilities(walk, psi, topology)?;
    let theory_positions = position_distribution(&theory_modes);
    let (sim_modes, sim_positions) = if model.is_ideal() {
        (None, None)
    } else {
        // each step draws from its own keyed stream of the run seed
        let step_model = model.reseeded(stream_seed(base_seed.unwrap_or(0), n));
        let leaked = apply_crosstalk(&theory_modes, &step_model)?;
        let record = sample_counts(&leaked, &step_model)?;
        let modes = record.probabilities().cloned().ok_or_else(|| {
            Error::invalid(
                "sampling",
                format!("no counts recorded at step {n}; increase shots"),
            )
        })?;
        let positions = position_distribution(&modes);
        (Some(modes), Some(positions))
    };
    Ok(StepResult {
        n,
        theory_modes,
        sim_modes,
        theory_positions,
        sim_positions,
    })
}

/// Built-in scenario presets, shipped as data files.
pub const PRESETS: [(&str, &str, &str); 3] = [
    (
        "hypercube-grover",
        include_str!("../presets/hypercube-grover.json"),
        "Grover walk on the 4-dimensional hypercube (d = 64), steps 1-12",
    ),
    (
        "circle-hadamard",
        include_str!("../presets/circle-hadamard.json"),
        "Hadamard walk on the 21-node circle (d = 42), measured every 4 steps to 400",
    ),
    (
        "line-nonmixing",
        include_str!("../presets/line-nonmixing.json"),
        "identity-coin walk with reflecting walls (d = 22) from a position superposition",
    ),
];

/// Load a built-in preset by name.
pub fn load_preset(name: &str) -> Result<ScenarioConfig> {
    for (preset_name, json, _) in PRESETS {
        if preset_name == name {
            return ScenarioConfig::from_json_str(json);
        }
    }
    Err(Error::config(
        "preset",
        format!(
            "unknown preset `{name}` (available: {})",
            PRESETS.map(|(n, _, _)| n).join(", ")
        ),
    ))
}

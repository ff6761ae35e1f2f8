//! File emission for scenario runs and comparison of exported files.
//!
//! Formats:
//! - `positions.csv`: step,position,p_theory[,p_sim]
//! - `modes.csv`: step,coin,position,p_theory[,p_sim]
//! - `summary.json`: similarity report plus provenance
//! - `heatmap.svg`: step × position grid, probability mapped linearly
//!   to luminance
//! - `masks/`: one pump-mask CSV per measured step and target mode
//!
//! Floats are written in Rust's shortest round-trip form, so re-reading
//! a file reproduces the run's numbers bit for bit.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::coin::build_coin;
use crate::error::{Error, Result};
use crate::fbgrid::compile_mask;
use crate::metrics::{bhattacharyya, SimilarityReport, StepSimilarity};
use crate::scenario::{OutputFormat, RunResult, ScenarioConfig};
use crate::walk::{build_step_operator, build_step_unitary};

/// The `summary.json` document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub scenario: String,
    pub seed: Option<u64>,
    pub steps: Vec<StepSimilarity>,
    pub mean_similarity: f64,
    pub config_hash: String,
    pub version: String,
}

impl Summary {
    pub fn from_result(result: &RunResult) -> Self {
        Self {
            scenario: result.similarity.scenario.clone(),
            seed: result.similarity.seed,
            steps: result.similarity.steps.clone(),
            mean_similarity: result.similarity.mean_similarity,
            config_hash: result.provenance.config_hash.clone(),
            version: result.provenance.version.clone(),
        }
    }
}

/// Write the requested artifacts under `out_dir`; returns the paths
/// written, in emission order.
pub fn export_results(
    result: &RunResult,
    out_dir: &Path,
    formats: &[OutputFormat],
) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let mut written = Vec::new();
    for format in formats {
        match format {
            OutputFormat::Csv => {
                let positions = out_dir.join("positions.csv");
                write_file(&positions, &positions_csv(result))?;
                written.push(positions);
                let modes = out_dir.join("modes.csv");
                write_file(&modes, &modes_csv(result))?;
                written.push(modes);
            }
            OutputFormat::Json => {
                let path = out_dir.join("summary.json");
                let summary = Summary::from_result(result);
                let mut text = serde_json::to_string_pretty(&summary).map_err(|e| {
                    Error::config("summary", e.to_string())
                })?;
                text.push('\n');
                write_file(&path, &text)?;
                written.push(path);
            }
            OutputFormat::Svg => {
                let path = out_dir.join("heatmap.svg");
                write_file(&path, &heatmap_svg(result))?;
                written.push(path);
            }
            OutputFormat::Masks => {
                let dir = out_dir.join("masks");
                for step in &result.steps {
                    written.extend(export_masks(&result.config, step.n, &dir)?);
                }
            }
        }
    }
    Ok(written)
}

/// Compile and write the pump masks of every target mode at step `n`.
pub fn export_masks(config: &ScenarioConfig, n: u64, dir: &Path) -> Result<Vec<PathBuf>> {
    let topology = config.topology()?;
    let coin = build_coin(&config.coin_spec(&topology)?)?;
    let shift = build_step_operator(&topology)?;
    let walk = build_step_unitary(&coin, &shift, &topology)?.pow(n)?;
    let grid = config.bin_grid()?;
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut written = Vec::with_capacity(topology.dim());
    for mode in topology.modes() {
        let mask = compile_mask(&walk, mode, &grid, &topology)?;
        let path = dir.join(format!("mask_step{:04}_mode{:03}.csv", n, mode.flat));
        write_file(&path, &mask.to_csv_string())?;
        written.push(path);
    }
    Ok(written)
}

fn write_file(path: &Path, content: &str) -> Result<()> {
    std::fs::write(path, content).map_err(|e| Error::io(path, e))
}

fn has_sim(result: &RunResult) -> bool {
    result.steps.iter().any(|s| s.sim_positions.is_some())
}

fn positions_csv(result: &RunResult) -> String {
    let sim = has_sim(result);
    let mut out = String::new();
    out.push_str(if sim {
        "step,position,p_theory,p_sim\n"
    } else {
        "step,position,p_theory\n"
    });
    for step in &result.steps {
        for (k, &x) in step.theory_positions.positions().iter().enumerate() {
            let _ = write!(out, "{},{},{}", step.n, x, step.theory_positions.probs()[k]);
            if sim {
                let p = step
                    .sim_positions
                    .as_ref()
                    .map(|d| d.probs()[k])
                    .unwrap_or(0.0);
                let _ = write!(out, ",{p}");
            }
            out.push('\n');
        }
    }
    out
}

fn modes_csv(result: &RunResult) -> String {
    let sim = has_sim(result);
    let mut out = String::new();
    out.push_str(if sim {
        "step,coin,position,p_theory,p_sim\n"
    } else {
        "step,coin,position,p_theory\n"
    });
    let topo = result.topology;
    for step in &result.steps {
        for mode in topo.modes() {
            let _ = write!(
                out,
                "{},{},{},{}",
                step.n,
                mode.coin,
                mode.position,
                step.theory_modes.prob(mode.flat)
            );
            if sim {
                let p = step
                    .sim_modes
                    .as_ref()
                    .map(|d| d.prob(mode.flat))
                    .unwrap_or(0.0);
                let _ = write!(out, ",{p}");
            }
            out.push('\n');
        }
    }
    out
}

/// Render the theory position distribution as a step × position grid.
/// One column per measured step, one row per position (largest label on
/// top), probability mapped linearly to luminance.
fn heatmap_svg(result: &RunResult) -> String {
    const CELL_W: usize = 14;
    const CELL_H: usize = 12;
    const MARGIN_LEFT: usize = 48;
    const MARGIN_BOTTOM: usize = 34;
    const MARGIN_TOP: usize = 10;
    const MARGIN_RIGHT: usize = 10;

    let positions: Vec<i64> = result
        .steps
        .first()
        .map(|s| s.theory_positions.positions().to_vec())
        .unwrap_or_default();
    let n_rows = positions.len();
    let n_cols = result.steps.len();
    let width = MARGIN_LEFT + n_cols * CELL_W + MARGIN_RIGHT;
    let height = MARGIN_TOP + n_rows * CELL_H + MARGIN_BOTTOM;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    let _ = writeln!(
        svg,
        r#"<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>"#
    );
    for (col, step) in result.steps.iter().enumerate() {
        for (row_from_bottom, &p) in step.theory_positions.probs().iter().enumerate() {
            let row = n_rows - 1 - row_from_bottom;
            let v = (p.clamp(0.0, 1.0) * 255.0).round() as u8;
            let x = MARGIN_LEFT + col * CELL_W;
            let y = MARGIN_TOP + row * CELL_H;
            let _ = writeln!(
                svg,
                r#"<rect x="{x}" y="{y}" width="{CELL_W}" height="{CELL_H}" fill="rgb({v},{v},{v})"/>"#
            );
        }
    }
    // y-axis labels: thin out when there are many rows
    let row_stride = (n_rows / 24).max(1);
    for (k, &x_label) in positions.iter().enumerate() {
        if k % row_stride != 0 {
            continue;
        }
        let row = n_rows - 1 - k;
        let y = MARGIN_TOP + row * CELL_H + CELL_H / 2 + 4;
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{y}" font-size="10" text-anchor="end" fill="black">{x_label}</text>"#,
            MARGIN_LEFT - 6
        );
    }
    // x-axis labels
    let col_stride = (n_cols / 20).max(1);
    for (col, step) in result.steps.iter().enumerate() {
        if col % col_stride != 0 {
            continue;
        }
        let x = MARGIN_LEFT + col * CELL_W + CELL_W / 2;
        let y = MARGIN_TOP + n_rows * CELL_H + 14;
        let _ = writeln!(
            svg,
            r#"<text x="{x}" y="{y}" font-size="10" text-anchor="middle" fill="black">{}</text>"#,
            step.n
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" font-size="11" text-anchor="middle" fill="black">step n</text>"#,
        MARGIN_LEFT + n_cols * CELL_W / 2,
        MARGIN_TOP + n_rows * CELL_H + 30
    );
    let _ = writeln!(
        svg,
        r#"<text x="12" y="{}" font-size="11" text-anchor="middle" fill="black" transform="rotate(-90 12 {})">position x</text>"#,
        MARGIN_TOP + n_rows * CELL_H / 2,
        MARGIN_TOP + n_rows * CELL_H / 2
    );
    svg.push_str("</svg>\n");
    svg
}

/// One parsed `positions.csv` row set: step → position → columns.
#[derive(Debug, Clone)]
struct PositionsFile {
    /// step -> position -> (p_theory, p_sim if present)
    rows: BTreeMap<u64, BTreeMap<i64, (f64, Option<f64>)>>,
}

fn read_positions_csv(path: &Path) -> Result<PositionsFile> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(|e| Error::Parse {
            path: path.display().to_string(),
            reason: e.to_string(),
        })?;
    let headers = reader
        .headers()
        .map_err(|e| Error::Parse {
            path: path.display().to_string(),
            reason: e.to_string(),
        })?
        .clone();
    let cols: Vec<&str> = headers.iter().collect();
    let with_sim = match cols.as_slice() {
        ["step", "position", "p_theory"] => false,
        ["step", "position", "p_theory", "p_sim"] => true,
        other => {
            return Err(Error::Parse {
                path: path.display().to_string(),
                reason: format!("unexpected header {other:?}"),
            })
        }
    };
    let mut rows: BTreeMap<u64, BTreeMap<i64, (f64, Option<f64>)>> = BTreeMap::new();
    for (lineno, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::Parse {
            path: path.display().to_string(),
            reason: format!("line {}: {e}", lineno + 2),
        })?;
        let field = |idx: usize| -> Result<&str> {
            record.get(idx).ok_or_else(|| Error::Parse {
                path: path.display().to_string(),
                reason: format!("line {}: missing column {idx}", lineno + 2),
            })
        };
        let parse_err = |what: &str| Error::Parse {
            path: path.display().to_string(),
            reason: format!("line {}: bad {what}", lineno + 2),
        };
        let step: u64 = field(0)?.parse().map_err(|_| parse_err("step"))?;
        let position: i64 = field(1)?.parse().map_err(|_| parse_err("position"))?;
        let p_theory: f64 = field(2)?.parse().map_err(|_| parse_err("p_theory"))?;
        let p_sim = if with_sim {
            Some(field(3)?.parse().map_err(|_| parse_err("p_sim"))?)
        } else {
            None
        };
        rows.entry(step).or_default().insert(position, (p_theory, p_sim));
    }
    if rows.is_empty() {
        return Err(Error::Parse {
            path: path.display().to_string(),
            reason: "no data rows".into(),
        });
    }
    Ok(PositionsFile { rows })
}

/// Compare two exported `positions.csv` files step by step.
///
/// The first file contributes its theory column; the second contributes
/// its measured column (`p_sim` when present, `p_theory` otherwise), so
/// comparing a run's export against itself reproduces that run's
/// theory-vs-simulation similarities.
pub fn compare_files(a: &Path, b: &Path) -> Result<SimilarityReport> {
    let fa = read_positions_csv(a)?;
    let fb = read_positions_csv(b)?;

    let steps_a: Vec<u64> = fa.rows.keys().copied().collect();
    let steps_b: Vec<u64> = fb.rows.keys().copied().collect();
    if steps_a != steps_b {
        return Err(Error::IndexMismatch {
            detail: format!("steps {steps_a:?} vs {steps_b:?}"),
        });
    }
    let mut similarities = Vec::with_capacity(steps_a.len());
    for step in steps_a {
        let rows_a = &fa.rows[&step];
        let rows_b = &fb.rows[&step];
        let pos_a: Vec<i64> = rows_a.keys().copied().collect();
        let pos_b: Vec<i64> = rows_b.keys().copied().collect();
        if pos_a != pos_b {
            return Err(Error::IndexMismatch {
                detail: format!("step {step}: positions {pos_a:?} vs {pos_b:?}"),
            });
        }
        let p: Vec<f64> = rows_a.values().map(|(theory, _)| *theory).collect();
        let q: Vec<f64> = rows_b
            .values()
            .map(|(theory, sim)| sim.unwrap_or(*theory))
            .collect();
        similarities.push(StepSimilarity {
            n: step,
            s: bhattacharyya(&p, &q)?,
        });
    }
    let name = |p: &Path| {
        p.file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| p.display().to_string())
    };
    SimilarityReport::new(format!("{} vs {}", name(a), name(b)), None, similarities)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::{load_preset, run_scenario, MeasurementConfig};
    use tempfile::TempDir;

    fn small_circle() -> ScenarioConfig {
        let mut config = load_preset("circle-hadamard").unwrap();
        config.steps = vec![2, 4, 6, 8];
        config
    }

    #[test]
    fn ideal_export_omits_sim_columns() {
        let result = run_scenario(&small_circle()).unwrap();
        let dir = TempDir::new().unwrap();
        export_results(&result, dir.path(), &[OutputFormat::Csv]).unwrap();
        let text = std::fs::read_to_string(dir.path().join("positions.csv")).unwrap();
        assert!(text.starts_with("step,position,p_theory\n"));
        assert!(!text.contains("p_sim"));
    }

    #[test]
    fn emitted_rows_sum_to_one_per_step() {
        let mut config = small_circle();
        config.measurement = MeasurementConfig::Noisy {
            crosstalk: 0.02,
            shots: 5000,
            seed: 11,
        };
        let result = run_scenario(&config).unwrap();
        let dir = TempDir::new().unwrap();
        export_results(&result, dir.path(), &[OutputFormat::Csv]).unwrap();
        let parsed = read_positions_csv(&dir.path().join("positions.csv")).unwrap();
        for (_, rows) in parsed.rows {
            let st: f64 = rows.values().map(|(t, _)| t).sum();
            let ss: f64 = rows.values().map(|(_, s)| s.unwrap()).sum();
            assert!((st - 1.0).abs() <= 1e-9);
            assert!((ss - 1.0).abs() <= 1e-9);
        }
    }

    #[test]
    fn summary_round_trips_through_compare() {
        let mut config = small_circle();
        config.measurement = MeasurementConfig::Noisy {
            crosstalk: 0.02,
            shots: 10_000,
            seed: 4242,
        };
        let result = run_scenario(&config).unwrap();
        let dir = TempDir::new().unwrap();
        export_results(&result, dir.path(), &[OutputFormat::Csv, OutputFormat::Json]).unwrap();
        let positions = dir.path().join("positions.csv");
        let report = compare_files(&positions, &positions).unwrap();
        assert_eq!(report.steps.len(), result.similarity.steps.len());
        for (got, want) in report.steps.iter().zip(&result.similarity.steps) {
            assert_eq!(got.n, want.n);
            assert!((got.s - want.s).abs() <= 1e-9, "step {}", got.n);
        }
    }

    #[test]
    fn ideal_file_compared_to_itself_is_unity() {
        let result = run_scenario(&small_circle()).unwrap();
        let dir = TempDir::new().unwrap();
        export_results(&result, dir.path(), &[OutputFormat::Csv]).unwrap();
        let positions = dir.path().join("positions.csv");
        let report = compare_files(&positions, &positions).unwrap();
        for s in report.steps {
            assert_eq!(s.s, 1.0);
        }
    }

    #[test]
    fn disjoint_toy_files_score_zero() {
        let dir = TempDir::new().unwrap();
        let a = dir.path().join("a.csv");
        let b = dir.path().join("b.csv");
        std::fs::write(&a, "step,position,p_theory\n1,0,1\n1,1,0\n").unwrap();
        std::fs::write(&b, "step,position,p_theory\n1,0,0\n1,1,1\n").unwrap();
        let report = compare_files(&a, &b).unwrap();
        assert_eq!(report.steps[0].s, 0.0);
        assert_eq!(report.mean_similarity, 0.0);
    }

    #[test]
    fn index_mismatch_is_reported() {
        let dir = TempDir::new().unwrap();
        let a = dir.path().join("a.csv");
        let b = dir.path().join("b.csv");
        std::fs::write(&a, "step,position,p_theory\n1,0,1\n1,1,0\n").unwrap();
        std::fs::write(&b, "step,position,p_theory\n2,0,1\n2,1,0\n").unwrap();
        assert!(matches!(
            compare_files(&a, &b),
            Err(Error::IndexMismatch { .. })
        ));
    }

    #[test]
    fn heatmap_has_one_rect_per_cell() {
        let config = load_preset("hypercube-grover").unwrap();
        let result = run_scenario(&config).unwrap();
        let dir = TempDir::new().unwrap();
        export_results(&result, dir.path(), &[OutputFormat::Svg]).unwrap();
        let svg = std::fs::read_to_string(dir.path().join("heatmap.svg")).unwrap();
        let cells = svg.matches("<rect").count() - 1; // background rect
        assert_eq!(cells, 16 * 12);
    }

    #[test]
    fn repeated_runs_are_byte_identical() {
        let mut config = small_circle();
        config.measurement = MeasurementConfig::Noisy {
            crosstalk: 0.02,
            shots: 3000,
            seed: 9,
        };
        let dirs = [TempDir::new().unwrap(), TempDir::new().unwrap()];
        let formats = [OutputFormat::Csv, OutputFormat::Json, OutputFormat::Svg];
        for dir in &dirs {
            let result = run_scenario(&config).unwrap();
            export_results(&result, dir.path(), &formats).unwrap();
        }
        for file in ["positions.csv", "modes.csv", "summary.json", "heatmap.svg"] {
            let a = std::fs::read(dirs[0].path().join(file)).unwrap();
            let b = std::fs::read(dirs[1].path().join(file)).unwrap();
            assert_eq!(a, b, "{file}");
        }
    }

    #[test]
    fn mask_export_writes_one_file_per_mode() {
        let mut config = load_preset("hypercube-grover").unwrap();
        config.steps = vec![6];
        let dir = TempDir::new().unwrap();
        let written = export_masks(&config, 6, dir.path()).unwrap();
        assert_eq!(written.len(), 64);
        let sample = std::fs::read_to_string(&written[0]).unwrap();
        assert!(sample.starts_with("bin_index,frequency_thz,amplitude,phase_rad\n"));
        assert_eq!(sample.lines().count(), 65);
    }
}

//! Command-line front end: evaluate the measures on state files, emit
//! normalization tables, run ensemble sweeps and the classical-data
//! pipeline, and dump multipartite correlation reports.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rayon::prelude::*;
use serde_json::json;

use corrkit::classical::{self, BoundsMode, DataSet, ScenarioKind};
use corrkit::error::{CorrkitError, Result};
use corrkit::io as state_io;
use corrkit::measures::{self, MeasureKind};
use corrkit::partitions;
use corrkit::randgen;
use corrkit::state::ModeStructure;

#[derive(Parser)]
#[command(
    name = "corrkit",
    version,
    about = "Nonlocal-correlation measures for multipartite density matrices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate all measures on a state file.
    Measures {
        /// Path to a state file (JSON with dims and matrix/diag).
        #[arg(long)]
        state: PathBuf,
        /// Output format: text or json.
        #[arg(long, default_value = "text")]
        format: String,
        /// Write output here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the exact correlance normalization factors for structures.
    Normtable {
        /// Mode structure like 2x3x4; repeat for several rows.
        #[arg(long, required = true)]
        dims: Vec<String>,
        #[arg(long, default_value = "text")]
        format: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample one correlation family and report per-sample measures.
    Sweep {
        /// Family number 1..6.
        #[arg(long)]
        family: u8,
        #[arg(long, default_value = "2x2")]
        dims: String,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "csv")]
        format: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the normalization bound over random ensembles of every
    /// structure up to a total dimension.
    Normtest {
        #[arg(long, default_value_t = 12)]
        max_n: usize,
        /// Samples per structure and ensemble.
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Test hook: multiply the normalization factors by this value to
        /// verify that the bound check actually fails.
        #[arg(long, hide = true)]
        corrupt_norm: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Ingest a CSV data set, build its histogram state, and report Pearson
    /// coefficients alongside the diagonal correlance.
    Classical {
        /// CSV file: header row of variable names, numeric rows.
        #[arg(long)]
        input: PathBuf,
        /// Bin counts: one value for all variables or a comma list.
        #[arg(long, default_value = "4")]
        bins: String,
        /// Declared domains like 0:1,0:1; defaults to data extremes.
        #[arg(long)]
        bounds: Option<String>,
        /// Also write the histogram state to this file.
        #[arg(long)]
        dump_state: Option<PathBuf>,
        #[arg(long, default_value = "text")]
        format: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate a seeded benchmark scenario as CSV.
    Scenario {
        /// Scenario kind: a, b, c, or d.
        #[arg(long)]
        kind: String,
        #[arg(long, default_value_t = 200)]
        points: usize,
        #[arg(long, default_value_t = 0.05)]
        noise: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit partitional vectors, the multicorrelance array, and the
    /// aggregated multicorrelances of a state.
    Multi {
        #[arg(long)]
        state: PathBuf,
        #[arg(long, default_value = "json")]
        format: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Formats with 12 significant digits, stable across runs; magnitudes below
/// 1e-12 switch to scientific notation so dust stays distinguishable from
/// exact zero.
fn fmt_sig(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    let mag = v.abs().log10().floor() as i32;
    if !(-12..=15).contains(&mag) {
        return format!("{v:.11e}");
    }
    let decimals = (11 - mag).clamp(0, 17) as usize;
    format!("{v:.decimals$}")
}

fn parse_dims(text: &str) -> Result<ModeStructure> {
    let dims: Vec<usize> = text
        .split('x')
        .map(|p| {
            p.trim()
                .parse::<usize>()
                .map_err(|_| CorrkitError::ParseError {
                    reason: format!("bad dims syntax '{text}' (expected like 2x3x4)"),
                })
        })
        .collect::<Result<_>>()?;
    ModeStructure::new(&dims)
}

fn parse_bins(text: &str, n_vars: usize) -> Result<Vec<usize>> {
    let parts: Vec<usize> = text
        .split(',')
        .map(|p| {
            p.trim()
                .parse::<usize>()
                .map_err(|_| CorrkitError::ParseError {
                    reason: format!("bad bins syntax '{text}'"),
                })
        })
        .collect::<Result<_>>()?;
    match parts.len() {
        1 => Ok(vec![parts[0]; n_vars]),
        l if l == n_vars => Ok(parts),
        _ => Err(CorrkitError::ParseError {
            reason: format!("{} bin counts for {n_vars} variables", parts.len()),
        }),
    }
}

fn parse_bounds(text: &str) -> Result<Vec<(f64, f64)>> {
    text.split(',')
        .map(|pair| {
            let mut it = pair.split(':');
            let lo = it.next().and_then(|s| s.trim().parse::<f64>().ok());
            let hi = it.next().and_then(|s| s.trim().parse::<f64>().ok());
            match (lo, hi, it.next()) {
                (Some(lo), Some(hi), None) => Ok((lo, hi)),
                _ => Err(CorrkitError::ParseError {
                    reason: format!("bad bounds syntax '{text}' (expected lo:hi,lo:hi)"),
                }),
            }
        })
        .collect()
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, content)?,
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(content.as_bytes())?;
        }
    }
    Ok(())
}

fn measure_value(set: &[measures::MeasureResult], kind: MeasureKind) -> Option<f64> {
    set.iter().find(|m| m.kind == kind).map(|m| m.normalized)
}

fn measure_label(kind: MeasureKind) -> &'static str {
    match kind {
        MeasureKind::Correlance => "correlance",
        MeasureKind::DiagCorrelance => "diag_correlance",
        MeasureKind::Discordance => "discordance",
        MeasureKind::DiagonalDiscordance => "diagonal_discordance",
        MeasureKind::StrongDiscordance => "strong_discordance",
        MeasureKind::RawStrongDiscordance => "raw_strong_discordance",
        MeasureKind::RawDiagonalStrongDiscordance => "raw_diagonal_strong_discordance",
        MeasureKind::Nondiagonality => "raw_nondiagonality",
    }
}

fn cmd_measures(state: &Path, format: &str, out: &Option<PathBuf>) -> Result<()> {
    let rho = state_io::state_from_file(state)?;
    let report = measures::normalization_report(rho.structure())?;
    let set = measures::measure_set(&rho)?;
    let content = match format {
        "json" => {
            let mut map = serde_json::Map::new();
            for m in &set {
                map.insert(
                    measure_label(m.kind).to_string(),
                    json!({"raw": m.raw, "normalized": m.normalized}),
                );
            }
            let value = json!({
                "dims": rho.structure().dims(),
                "measures": serde_json::Value::Object(map),
                "normalization": {
                    "l_star": report.l_star,
                    "n_correlance": report.n_correlance,
                    "n_diag_correlance": report.n_diag_correlance,
                    "n_strong_discordance": report.n_strong_discordance,
                    "per_mode_purity": report.per_mode_purity,
                },
            });
            format!("{}\n", serde_json::to_string_pretty(&value).expect("json"))
        }
        "text" => {
            let mut s = String::new();
            s.push_str(&format!(
                "structure {} (n = {})\n",
                rho.structure(),
                rho.total_dim()
            ));
            for m in &set {
                s.push_str(&format!(
                    "{:<32} raw {:<18} normalized {}\n",
                    measure_label(m.kind),
                    fmt_sig(m.raw),
                    fmt_sig(m.normalized)
                ));
            }
            s.push_str(&format!(
                "normalization: l_star {}  n_correlance {}  n_diag_correlance {}  n_strong_discordance {}\n",
                report.l_star,
                fmt_sig(report.n_correlance),
                fmt_sig(report.n_diag_correlance),
                fmt_sig(report.n_strong_discordance)
            ));
            s
        }
        other => {
            return Err(CorrkitError::InvalidParameter {
                reason: format!("unknown format '{other}'"),
            })
        }
    };
    emit(out, &content)
}

fn cmd_normtable(dims: &[String], format: &str, out: &Option<PathBuf>) -> Result<()> {
    struct Row {
        dims: String,
        n: usize,
        value: f64,
        fraction: (u128, u128),
    }
    let mut rows = Vec::new();
    for d in dims {
        let structure = parse_dims(d)?;
        let value = measures::correlance_norm(&structure)?;
        let fraction = measures::correlance_norm_fraction(&structure)?;
        rows.push(Row {
            dims: structure.to_string(),
            n: structure.total_dim(),
            value,
            fraction,
        });
    }
    let content = match format {
        "json" => {
            let items: Vec<serde_json::Value> = rows
                .iter()
                .map(|r| {
                    json!({
                        "dims": r.dims,
                        "n": r.n,
                        "n_correlance": r.value,
                        "fraction": format!("{}/{}", r.fraction.0, r.fraction.1),
                    })
                })
                .collect();
            format!("{}\n", serde_json::to_string_pretty(&items).expect("json"))
        }
        "csv" => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["dims", "n", "n_correlance", "fraction"])
                .expect("csv record");
            for r in &rows {
                w.write_record([
                    r.dims.clone(),
                    r.n.to_string(),
                    fmt_sig(r.value),
                    format!("{}/{}", r.fraction.0, r.fraction.1),
                ])
                .expect("csv record");
            }
            String::from_utf8(w.into_inner().expect("csv flush")).expect("utf8")
        }
        "text" => {
            let mut s = String::new();
            s.push_str(&format!(
                "{:<14} {:>4}  {:<16} {}\n",
                "dims", "n", "n_correlance", "fraction"
            ));
            for r in &rows {
                s.push_str(&format!(
                    "{:<14} {:>4}  {:<16} {}/{}\n",
                    r.dims,
                    r.n,
                    fmt_sig(r.value),
                    r.fraction.0,
                    r.fraction.1
                ));
            }
            s
        }
        other => {
            return Err(CorrkitError::InvalidParameter {
                reason: format!("unknown format '{other}'"),
            })
        }
    };
    emit(out, &content)
}

struct SweepRow {
    correlance: f64,
    discordance: f64,
    strong_discordance: f64,
}

fn cmd_sweep(
    family: u8,
    dims: &str,
    samples: usize,
    seed: u64,
    format: &str,
    out: &Option<PathBuf>,
) -> Result<()> {
    let structure = parse_dims(dims)?;
    if samples == 0 {
        return Err(CorrkitError::InvalidParameter {
            reason: "samples must be at least 1".into(),
        });
    }
    let rows: Vec<SweepRow> = (0..samples)
        .into_par_iter()
        .map(|i| -> Result<SweepRow> {
            let rho =
                randgen::family_state(family, &structure, randgen::trial_seed(seed, i as u64))?;
            let set = measures::measure_set(&rho)?;
            Ok(SweepRow {
                correlance: measure_value(&set, MeasureKind::Correlance).unwrap_or(0.0),
                discordance: measure_value(&set, MeasureKind::Discordance).unwrap_or(0.0),
                strong_discordance: measure_value(&set, MeasureKind::StrongDiscordance)
                    .unwrap_or(0.0),
            })
        })
        .collect::<Result<_>>()?;
    let fold = |f: fn(f64, f64) -> f64, init: f64, get: fn(&SweepRow) -> f64| {
        rows.iter().map(get).fold(init, f)
    };
    let maxes = [
        fold(f64::max, f64::NEG_INFINITY, |r| r.correlance),
        fold(f64::max, f64::NEG_INFINITY, |r| r.discordance),
        fold(f64::max, f64::NEG_INFINITY, |r| r.strong_discordance),
    ];
    let mins = [
        fold(f64::min, f64::INFINITY, |r| r.correlance),
        fold(f64::min, f64::INFINITY, |r| r.discordance),
        fold(f64::min, f64::INFINITY, |r| r.strong_discordance),
    ];
    let content = match format {
        "csv" => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["index", "correlance", "discordance", "strong_discordance"])
                .expect("csv record");
            for (i, r) in rows.iter().enumerate() {
                w.write_record([
                    (i + 1).to_string(),
                    fmt_sig(r.correlance),
                    fmt_sig(r.discordance),
                    fmt_sig(r.strong_discordance),
                ])
                .expect("csv record");
            }
            w.write_record([
                "max".to_string(),
                fmt_sig(maxes[0]),
                fmt_sig(maxes[1]),
                fmt_sig(maxes[2]),
            ])
            .expect("csv record");
            w.write_record([
                "min".to_string(),
                fmt_sig(mins[0]),
                fmt_sig(mins[1]),
                fmt_sig(mins[2]),
            ])
            .expect("csv record");
            String::from_utf8(w.into_inner().expect("csv flush")).expect("utf8")
        }
        "json" => {
            let items: Vec<serde_json::Value> = rows
                .iter()
                .enumerate()
                .map(|(i, r)| {
                    json!({
                        "index": i + 1,
                        "correlance": r.correlance,
                        "discordance": r.discordance,
                        "strong_discordance": r.strong_discordance,
                    })
                })
                .collect();
            let value = json!({
                "family": family,
                "dims": structure.dims(),
                "samples": items,
                "max": {
                    "correlance": maxes[0],
                    "discordance": maxes[1],
                    "strong_discordance": maxes[2],
                },
                "min": {
                    "correlance": mins[0],
                    "discordance": mins[1],
                    "strong_discordance": mins[2],
                },
            });
            format!("{}\n", serde_json::to_string_pretty(&value).expect("json"))
        }
        other => {
            return Err(CorrkitError::InvalidParameter {
                reason: format!("unknown format '{other}'"),
            })
        }
    };
    emit(out, &content)
}

fn cmd_normtest(
    max_n: usize,
    samples: usize,
    seed: u64,
    corrupt_norm: Option<f64>,
    out: &Option<PathBuf>,
) -> Result<()> {
    if samples == 0 {
        return Err(CorrkitError::InvalidParameter {
            reason: "samples must be at least 1".into(),
        });
    }
    let bound = 1.0 + 1e-9;
    let corruption = corrupt_norm.unwrap_or(1.0);
    let structures = randgen::structures_up_to(max_n);
    if structures.is_empty() {
        return Err(CorrkitError::InvalidParameter {
            reason: format!("no multimode structures with n <= {max_n}"),
        });
    }
    let mut content = String::new();
    let mut failures = Vec::new();
    for structure in &structures {
        let nc = measures::correlance_norm(structure)? * corruption;
        let ncd = measures::diag_correlance_norm(structure.nontrivial_mode_count()) * corruption;
        let values: Vec<(f64, f64)> = (0..samples)
            .into_par_iter()
            .map(|i| -> Result<(f64, f64)> {
                let trial = randgen::trial_seed(seed, i as u64);
                let mixed = randgen::hs_mixed(structure, trial);
                let diag = randgen::random_diagonal(structure, trial);
                Ok((
                    measures::raw_correlance(&mixed)? / nc,
                    measures::raw_correlance(&diag)? / ncd,
                ))
            })
            .collect::<Result<_>>()?;
        let mut max_mixed = f64::NEG_INFINITY;
        let mut max_diag = f64::NEG_INFINITY;
        for (i, &(c, cd)) in values.iter().enumerate() {
            max_mixed = max_mixed.max(c);
            max_diag = max_diag.max(cd);
            if c > bound {
                failures.push((structure.to_string(), "mixed", i, c));
            }
            if cd > bound {
                failures.push((structure.to_string(), "diagonal", i, cd));
            }
        }
        content.push_str(&format!(
            "{:<12} samples {samples}  max correlance {}  max diag_correlance {}\n",
            structure.to_string(),
            fmt_sig(max_mixed),
            fmt_sig(max_diag)
        ));
    }
    if failures.is_empty() {
        content.push_str(&format!(
            "PASS: no normalized measure above 1 + 1e-9 across {} structures\n",
            structures.len()
        ));
        emit(out, &content)
    } else {
        for (structure, ensemble, index, value) in &failures {
            content.push_str(&format!(
                "FAIL: structure {structure} {ensemble} sample {index} (seed {}) value {}\n",
                randgen::trial_seed(seed, *index as u64),
                fmt_sig(*value)
            ));
        }
        emit(out, &content)?;
        Err(CorrkitError::InvalidParameter {
            reason: format!(
                "{} samples exceeded the normalization bound",
                failures.len()
            ),
        })
    }
}

fn read_csv_dataset(path: &Path) -> Result<DataSet> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| CorrkitError::ParseError {
            reason: format!("cannot read {}: {e}", path.display()),
        })?;
    let names: Vec<String> = reader
        .headers()
        .map_err(|e| CorrkitError::ParseError {
            reason: e.to_string(),
        })?
        .iter()
        .map(|s| s.to_string())
        .collect();
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| CorrkitError::ParseError {
            reason: e.to_string(),
        })?;
        let row: Vec<f64> = record
            .iter()
            .map(|v| {
                v.parse::<f64>().map_err(|_| CorrkitError::ParseError {
                    reason: format!("non-numeric value '{v}' in {}", path.display()),
                })
            })
            .collect::<Result<_>>()?;
        rows.push(row);
    }
    DataSet::new(names, rows)
}

fn cmd_classical(
    input: &Path,
    bins: &str,
    bounds: &Option<String>,
    dump_state: &Option<PathBuf>,
    format: &str,
    out: &Option<PathBuf>,
) -> Result<()> {
    let mut data = read_csv_dataset(input)?;
    let n_vars = data.n_vars();
    let bins = parse_bins(bins, n_vars)?;
    let mode = match bounds {
        Some(b) => {
            data = data.with_bounds(parse_bounds(b)?)?;
            BoundsMode::Declared
        }
        None => BoundsMode::DataExtremes,
    };
    let plan = classical::make_plan(&data, &bins, mode)?;
    let rho = classical::build_density(&data, &plan)?;
    // a quantization with fewer than two multi-bin variables has no
    // correlation capacity, so the measure is trivially zero
    let cd = match measures::diag_correlance(&rho) {
        Ok(v) => v,
        Err(CorrkitError::UnsupportedStructure { .. }) => 0.0,
        Err(e) => return Err(e),
    };
    let mut pearson_rows: Vec<(usize, usize, Option<f64>, Option<String>)> = Vec::new();
    for a in 1..=n_vars {
        for b in a + 1..=n_vars {
            match classical::pearson(&data, a, b) {
                Ok(r) => pearson_rows.push((a, b, Some(r), None)),
                Err(e) => pearson_rows.push((a, b, None, Some(e.to_string()))),
            }
        }
    }
    if let Some(path) = dump_state {
        state_io::state_to_file(&rho, path)?;
    }
    let content = match format {
        "json" => {
            let pearson: Vec<serde_json::Value> = pearson_rows
                .iter()
                .map(|(a, b, r, err)| {
                    json!({
                        "pair": [a, b],
                        "pearson": r,
                        "abs_pearson": r.map(f64::abs),
                        "error": err,
                    })
                })
                .collect();
            let value = json!({
                "variables": data.names(),
                "samples": data.n_samples(),
                "bins": bins,
                "diag_correlance": cd,
                "pearson": pearson,
            });
            format!("{}\n", serde_json::to_string_pretty(&value).expect("json"))
        }
        "text" => {
            let mut s = String::new();
            s.push_str(&format!(
                "{} samples of {} variables, bins {:?}\n",
                data.n_samples(),
                n_vars,
                bins
            ));
            for (a, b, r, err) in &pearson_rows {
                match (r, err) {
                    (Some(r), _) => s.push_str(&format!(
                        "|r_P|({}, {}) = {}\n",
                        data.names()[a - 1],
                        data.names()[b - 1],
                        fmt_sig(r.abs())
                    )),
                    (None, Some(err)) => s.push_str(&format!(
                        "|r_P|({}, {}): {}\n",
                        data.names()[a - 1],
                        data.names()[b - 1],
                        err
                    )),
                    _ => unreachable!(),
                }
            }
            s.push_str(&format!("diag_correlance = {}\n", fmt_sig(cd)));
            s
        }
        other => {
            return Err(CorrkitError::InvalidParameter {
                reason: format!("unknown format '{other}'"),
            })
        }
    };
    emit(out, &content)
}

fn cmd_scenario(
    kind: &str,
    points: usize,
    noise: f64,
    seed: u64,
    out: &Option<PathBuf>,
) -> Result<()> {
    let kind: ScenarioKind = kind.parse()?;
    let data = classical::scenario(kind, points, noise, seed)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(data.names()).expect("csv record");
    for row in data.rows() {
        let cells: Vec<String> = row.iter().map(|v| fmt_sig(*v)).collect();
        w.write_record(&cells).expect("csv record");
    }
    let content = String::from_utf8(w.into_inner().expect("csv flush")).expect("utf8");
    emit(out, &content)
}

fn cmd_multi(state: &Path, format: &str, out: &Option<PathBuf>) -> Result<()> {
    let rho = state_io::state_from_file(state)?;
    let n_modes = rho.structure().mode_count();
    let array = partitions::multicorrelance_array(&rho)?;
    let mut k_terms = Vec::new();
    for k in 2..=n_modes {
        k_terms.push((k, partitions::k_partitional_multicorrelance(&rho, k)?));
    }
    let total = partitions::multicorrelance(&rho)?;
    let absolute = partitions::absolute_multicorrelance(&rho)?;
    let groups_json: Vec<serde_json::Value> = array
        .groups
        .iter()
        .map(|g| json!({"modes": g.modes, "rows": g.rows}))
        .collect();
    let content = match format {
        "json" => {
            let value = json!({
                "dims": rho.structure().dims(),
                "groups": groups_json,
                "scalar_count": array.scalar_count(),
                "k_partitional_multicorrelance": k_terms
                    .iter()
                    .map(|(k, v)| json!({"k": k, "raw": v.raw, "normalized": v.normalized}))
                    .collect::<Vec<_>>(),
                "multicorrelance": {"raw": total.raw, "normalized": total.normalized},
                "absolute_multicorrelance": {
                    "raw": absolute.raw,
                    "normalized": absolute.normalized,
                },
            });
            format!("{}\n", serde_json::to_string_pretty(&value).expect("json"))
        }
        "text" => {
            let mut s = String::new();
            s.push_str(&format!(
                "structure {} ({} scalars)\n",
                rho.structure(),
                array.scalar_count()
            ));
            for g in &array.groups {
                let modes: Vec<String> = g.modes.iter().map(|m| m.to_string()).collect();
                s.push_str(&format!("group ({})\n", modes.join(",")));
                for (t, row) in g.rows.iter().enumerate() {
                    let cells: Vec<String> = row.iter().map(|v| fmt_sig(*v)).collect();
                    s.push_str(&format!("  {}-partition: {}\n", t + 2, cells.join(" ")));
                }
            }
            for (k, v) in &k_terms {
                s.push_str(&format!(
                    "{k}-partitional multicorrelance raw {} normalized {}\n",
                    fmt_sig(v.raw),
                    fmt_sig(v.normalized)
                ));
            }
            s.push_str(&format!(
                "multicorrelance raw {} normalized {}\n",
                fmt_sig(total.raw),
                fmt_sig(total.normalized)
            ));
            s.push_str(&format!(
                "absolute multicorrelance raw {} normalized {}\n",
                fmt_sig(absolute.raw),
                fmt_sig(absolute.normalized)
            ));
            s
        }
        other => {
            return Err(CorrkitError::InvalidParameter {
                reason: format!("unknown format '{other}'"),
            })
        }
    };
    emit(out, &content)
}

fn configure_threads() {
    if let Ok(value) = std::env::var("CORRKIT_THREADS") {
        if let Ok(threads) = value.parse::<usize>() {
            if threads >= 1 {
                // ignore failure if a global pool already exists
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(threads)
                    .build_global();
            }
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match &cli.command {
        Command::Measures { state, format, out } => cmd_measures(state, format, out),
        Command::Normtable { dims, format, out } => cmd_normtable(dims, format, out),
        Command::Sweep {
            family,
            dims,
            samples,
            seed,
            format,
            out,
        } => cmd_sweep(*family, dims, *samples, *seed, format, out),
        Command::Normtest {
            max_n,
            samples,
            seed,
            corrupt_norm,
            out,
        } => cmd_normtest(*max_n, *samples, *seed, *corrupt_norm, out),
        Command::Classical {
            input,
            bins,
            bounds,
            dump_state,
            format,
            out,
        } => cmd_classical(input, bins, bounds, dump_state, format, out),
        Command::Scenario {
            kind,
            points,
            noise,
            seed,
            out,
        } => cmd_scenario(kind, *points, *noise, *seed, out),
        Command::Multi { state, format, out } => cmd_multi(state, format, out),
    }
}

fn main() -> ExitCode {
    configure_threads();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let payload = json!({"error": {"kind": e.kind(), "message": e.to_string()}});
            eprintln!("{payload}");
            ExitCode::FAILURE
        }
    }
}

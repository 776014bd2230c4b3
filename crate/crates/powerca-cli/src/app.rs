//! Subcommand orchestration for the `powerca` binary.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use nalgebra::DMatrix;
use powerca::{
    ca, convergence_sweep, indicator, lemma2_ca_inertia, lemma2_tca_dispersion, log_transform, lra,
    make_weights, merge_proportional, mfca_with, normalize, one_zero_column_reduction,
    power_transform, tca, zero_stats, ContingencyTable, Decomposition, Method, TaxicabAlgorithm,
    WeightKind, BALANCE_TOL, DEFAULT_ALPHA_GRID,
};
use serde_json::json;

use crate::error::{io_err, CliError, Result};
use crate::io::{read_table, write_matrix, write_table};
use crate::map::{emit_map, MapAxes};
use crate::report::{fmt_float, json_float, write_decomposition, write_json, ReportFormat};

#[derive(Parser)]
#[command(
    name = "powerca",
    version,
    about = "Correspondence analysis, taxicab CA and log-ratio analysis of (power transformed) tables",
    after_help = "\
Examples:
  powerca ca table.csv --alpha 1e-4 --map axes=1,2 --output-dir out
  powerca tca table.csv --algorithm exhaustive --format csv
  powerca lra table.csv --weights uniform --method taxicab
  powerca mfca table.csv
  powerca transform table.csv --kind power --alpha 0.5
  powerca merge table.csv
  powerca stats table.csv
  powerca lemma2 --zeros 1 --rows 12 --cols 26
  powerca converge table.csv --alphas 1e-1,1e-2,1e-3,1e-4,1e-5"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct TableArgs {
    /// Input CSV file
    input: PathBuf,
    /// The file has no header row
    #[arg(long)]
    no_header: bool,
    /// The first column holds data, not row labels
    #[arg(long)]
    no_row_labels: bool,
    /// Drop all-zero rows and columns before the analysis
    #[arg(long)]
    drop_empty: bool,
}

#[derive(Args)]
struct OutputArgs {
    /// Directory for report files
    #[arg(long, default_value = ".")]
    output_dir: PathBuf,
    /// Report format
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
    /// File-name stem for the outputs (default: input stem + subcommand)
    #[arg(long)]
    stem: Option<String>,
}

#[derive(Args)]
struct AnalysisArgs {
    /// Power-transform the table with this exponent first
    #[arg(long)]
    alpha: Option<f64>,
    /// Number of axes to retain (default: min(I, J) - 1)
    #[arg(long)]
    k: Option<usize>,
    /// Emit an SVG factor map, e.g. --map axes=1,2 or --map axes=1
    #[arg(long)]
    map: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

impl From<FormatArg> for ReportFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Json => ReportFormat::Json,
            FormatArg::Csv => ReportFormat::Csv,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgorithmArg {
    Exhaustive,
    Ascent,
    Auto,
}

impl From<AlgorithmArg> for TaxicabAlgorithm {
    fn from(a: AlgorithmArg) -> Self {
        match a {
            AlgorithmArg::Exhaustive => TaxicabAlgorithm::Exhaustive,
            AlgorithmArg::Ascent => TaxicabAlgorithm::Ascent,
            AlgorithmArg::Auto => TaxicabAlgorithm::Auto,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Svd,
    Taxicab,
}

#[derive(Clone, Copy, ValueEnum)]
enum WeightsArg {
    Marginal,
    Uniform,
}

#[derive(Clone, Copy, ValueEnum)]
enum TransformKind {
    Power,
    Indicator,
    Log,
}

#[derive(Subcommand)]
enum Command {
    /// Correspondence analysis (weighted SVD of the Pearson contrast)
    Ca {
        #[command(flatten)]
        table: TableArgs,
        #[command(flatten)]
        analysis: AnalysisArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Taxicab correspondence analysis (L1 factorization)
    Tca {
        #[command(flatten)]
        table: TableArgs,
        #[command(flatten)]
        analysis: AnalysisArgs,
        /// Sign-vector search strategy
        #[arg(long, value_enum, default_value_t = AlgorithmArg::Auto)]
        algorithm: AlgorithmArg,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Log-ratio analysis of a strictly positive table
    Lra {
        #[command(flatten)]
        table: TableArgs,
        #[command(flatten)]
        analysis: AnalysisArgs,
        /// Row/column weights
        #[arg(long, value_enum, default_value_t = WeightsArg::Uniform)]
        weights: WeightsArg,
        /// Factorization method
        #[arg(long, value_enum, default_value_t = MethodArg::Svd)]
        method: MethodArg,
        #[arg(long, value_enum, default_value_t = AlgorithmArg::Auto)]
        algorithm: AlgorithmArg,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Marginal-free CA: balance to uniform marginals, then factorize
    Mfca {
        #[command(flatten)]
        table: TableArgs,
        #[command(flatten)]
        analysis: AnalysisArgs,
        #[arg(long, value_enum, default_value_t = MethodArg::Svd)]
        method: MethodArg,
        #[arg(long, value_enum, default_value_t = AlgorithmArg::Auto)]
        algorithm: AlgorithmArg,
        /// Balancing iteration cap
        #[arg(long, default_value_t = powerca::BALANCE_MAX_ITER)]
        max_iter: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Elementwise preprocessing: power, indicator or log
    Transform {
        #[command(flatten)]
        table: TableArgs,
        #[arg(long, value_enum)]
        kind: TransformKind,
        /// Exponent for --kind power
        #[arg(long)]
        alpha: Option<f64>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Merge proportional rows and columns
    Merge {
        #[command(flatten)]
        table: TableArgs,
        /// Leave rows unmerged
        #[arg(long)]
        skip_rows: bool,
        /// Leave columns unmerged
        #[arg(long)]
        skip_cols: bool,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Zero-cell statistics
    Stats {
        #[command(flatten)]
        table: TableArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Closed-form CA inertia and taxicab dispersion for an indicator
    /// table with m zeros in one column
    Lemma2 {
        /// Number of zero cells m
        #[arg(long)]
        zeros: usize,
        /// Row count I
        #[arg(long)]
        rows: usize,
        /// Column count J
        #[arg(long)]
        cols: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Compare the powered Pearson contrast against the log interaction
    /// over a grid of powers
    Converge {
        #[command(flatten)]
        table: TableArgs,
        /// Comma-separated powers in (0, 1]
        #[arg(long)]
        alphas: Option<String>,
        #[command(flatten)]
        out: OutputArgs,
    },
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Ca {
            table,
            analysis,
            out,
        } => {
            let t = load(&table)?;
            let t = prepared(t, analysis.alpha)?;
            let d = ca(&t, axes_to_keep(&t, analysis.k))?;
            finish_analysis("ca", &t, &d, &analysis, &out, &table.input)
        }
        Command::Tca {
            table,
            analysis,
            algorithm,
            out,
        } => {
            let t = load(&table)?;
            let t = prepared(t, analysis.alpha)?;
            let d = tca(&t, axes_to_keep(&t, analysis.k), algorithm.into())?;
            finish_analysis("tca", &t, &d, &analysis, &out, &table.input)
        }
        Command::Lra {
            table,
            analysis,
            weights,
            method,
            algorithm,
            out,
        } => {
            let t = load(&table)?;
            let t = prepared(t, analysis.alpha)?;
            let p = normalize(&t)?;
            let kind = match weights {
                WeightsArg::Marginal => WeightKind::Marginal,
                WeightsArg::Uniform => WeightKind::Uniform,
            };
            let w = make_weights(kind, &p, None)?;
            let method = resolve_method(method, algorithm);
            let d = lra(&t, &w, method, axes_to_keep(&t, analysis.k))?;
            finish_analysis("lra", &t, &d, &analysis, &out, &table.input)
        }
        Command::Mfca {
            table,
            analysis,
            method,
            algorithm,
            max_iter,
            out,
        } => {
            let t = load(&table)?;
            let t = prepared(t, analysis.alpha)?;
            let method = resolve_method(method, algorithm);
            let d = mfca_with(
                &t,
                method,
                axes_to_keep(&t, analysis.k),
                BALANCE_TOL,
                max_iter,
            )?;
            finish_analysis("mfca", &t, &d, &analysis, &out, &table.input)
        }
        Command::Transform {
            table,
            kind,
            alpha,
            out,
        } => {
            let t = load(&table)?;
            let path = match kind {
                TransformKind::Power => {
                    let alpha = alpha
                        .ok_or_else(|| CliError::Usage("--kind power requires --alpha".into()))?;
                    let powered = power_transform(&t, alpha)?;
                    let stem = stem_for(&out, &table.input, "power");
                    let path = out_path(&out, &format!("{stem}.csv"))?;
                    write_table(&powered, &path)?;
                    path
                }
                TransformKind::Indicator => {
                    let z = indicator(&t);
                    let stem = stem_for(&out, &table.input, "indicator");
                    let path = out_path(&out, &format!("{stem}.csv"))?;
                    write_table(&z, &path)?;
                    path
                }
                TransformKind::Log => {
                    let l = log_transform(&t)?;
                    let stem = stem_for(&out, &table.input, "log");
                    let path = out_path(&out, &format!("{stem}.csv"))?;
                    write_matrix(&l, t.row_labels(), t.col_labels(), &path)?;
                    path
                }
            };
            println!("wrote {}", path.display());
            Ok(())
        }
        Command::Merge {
            table,
            skip_rows,
            skip_cols,
            out,
        } => {
            let t = load(&table)?;
            let report = merge_proportional(&t, !skip_rows, !skip_cols);
            let stem = stem_for(&out, &table.input, "merge");
            let table_path = out_path(&out, &format!("{stem}_merged.csv"))?;
            write_table(&report.merged, &table_path)?;
            println!(
                "merged {}x{} -> {}x{}",
                t.nrows(),
                t.ncols(),
                report.merged.nrows(),
                report.merged.ncols()
            );
            println!("wrote {}", table_path.display());

            let group_labels = |groups: &[Vec<usize>], labels: &[String]| -> Vec<Vec<String>> {
                groups
                    .iter()
                    .map(|g| g.iter().map(|&i| labels[i].clone()).collect())
                    .collect()
            };
            match ReportFormat::from(out.format) {
                ReportFormat::Json => {
                    let doc = json!({
                        "rows_before": t.nrows(),
                        "cols_before": t.ncols(),
                        "rows_after": report.merged.nrows(),
                        "cols_after": report.merged.ncols(),
                        "row_groups": group_labels(&report.row_groups, t.row_labels()),
                        "col_groups": group_labels(&report.col_groups, t.col_labels()),
                    });
                    let path = out_path(&out, &format!("{stem}_report.json"))?;
                    write_json(&doc, &path)?;
                    println!("wrote {}", path.display());
                }
                ReportFormat::Csv => {
                    let path = out_path(&out, &format!("{stem}_groups.csv"))?;
                    let mut text = String::from("kind,merged_label,members\n");
                    for (groups, labels, kind) in [
                        (&report.row_groups, t.row_labels(), "row"),
                        (&report.col_groups, t.col_labels(), "col"),
                    ] {
                        for g in groups.iter() {
                            let members: Vec<&str> =
                                g.iter().map(|&i| labels[i].as_str()).collect();
                            text.push_str(&format!(
                                "{kind},{},{}\n",
                                members.join("+"),
                                members.join(";")
                            ));
                        }
                    }
                    fs::write(&path, text).map_err(io_err(&path))?;
                    println!("wrote {}", path.display());
                }
            }
            Ok(())
        }
        Command::Stats { table, out } => {
            let t = load(&table)?;
            let stats = zero_stats(&t);
            let stem = stem_for(&out, &table.input, "stats");
            match ReportFormat::from(out.format) {
                ReportFormat::Json => {
                    let per_col: Vec<_> = t
                        .col_labels()
                        .iter()
                        .zip(&stats.per_column_zeros)
                        .map(|(label, zeros)| json!({"label": label, "zeros": zeros}))
                        .collect();
                    let doc = json!({
                        "rows": t.nrows(),
                        "cols": t.ncols(),
                        "total_cells": stats.total_cells,
                        "zero_cells": stats.zero_cells,
                        "zero_percent": json_float(stats.zero_percent),
                        "per_column_zeros": per_col,
                    });
                    let path = out_path(&out, &format!("{stem}.json"))?;
                    write_json(&doc, &path)?;
                    println!(
                        "zero cells: {}/{} ({:.2}%)",
                        stats.zero_cells, stats.total_cells, stats.zero_percent
                    );
                    println!("wrote {}", path.display());
                }
                ReportFormat::Csv => {
                    let path = out_path(&out, &format!("{stem}.csv"))?;
                    let mut text = String::from("label,zeros\n");
                    for (label, zeros) in t.col_labels().iter().zip(&stats.per_column_zeros) {
                        text.push_str(&format!("{label},{zeros}\n"));
                    }
                    text.push_str(&format!("_total,{}\n", stats.zero_cells));
                    text.push_str(&format!("_percent,{}\n", fmt_float(stats.zero_percent)));
                    fs::write(&path, text).map_err(io_err(&path))?;
                    println!(
                        "zero cells: {}/{} ({:.2}%)",
                        stats.zero_cells, stats.total_cells, stats.zero_percent
                    );
                    println!("wrote {}", path.display());
                }
            }
            Ok(())
        }
        Command::Lemma2 {
            zeros,
            rows,
            cols,
            out,
        } => {
            let inertia = lemma2_ca_inertia(zeros, rows, cols)?;
            let dispersion = lemma2_tca_dispersion(zeros, rows, cols)?;
            let r = one_zero_column_reduction(rows, cols, zeros)?;
            println!("ca inertia: {inertia:.9}");
            println!("tca dispersion: {dispersion:.9}");
            let stem = out
                .stem
                .clone()
                .unwrap_or_else(|| format!("lemma2_m{zeros}_{rows}x{cols}"));
            match ReportFormat::from(out.format) {
                ReportFormat::Json => {
                    let doc = json!({
                        "zeros": zeros,
                        "rows": rows,
                        "cols": cols,
                        "ca_inertia": json_float(inertia),
                        "tca_dispersion": json_float(dispersion),
                        "reduced_table": [
                            [json_float(r.get(0, 0)), json_float(r.get(0, 1))],
                            [json_float(r.get(1, 0)), json_float(r.get(1, 1))],
                        ],
                    });
                    let path = out_path(&out, &format!("{stem}.json"))?;
                    write_json(&doc, &path)?;
                    println!("wrote {}", path.display());
                }
                ReportFormat::Csv => {
                    let path = out_path(&out, &format!("{stem}.csv"))?;
                    let text = format!(
                        "zeros,rows,cols,ca_inertia,tca_dispersion\n{zeros},{rows},{cols},{},{}\n",
                        fmt_float(inertia),
                        fmt_float(dispersion)
                    );
                    fs::write(&path, text).map_err(io_err(&path))?;
                    println!("wrote {}", path.display());
                }
            }
            Ok(())
        }
        Command::Converge { table, alphas, out } => {
            let t = load(&table)?;
            let grid: Vec<f64> = match alphas {
                Some(spec) => spec
                    .split(',')
                    .map(|s| {
                        s.trim()
                            .parse::<f64>()
                            .map_err(|_| CliError::Usage(format!("bad power {s:?}")))
                    })
                    .collect::<Result<Vec<f64>>>()?,
                None => DEFAULT_ALPHA_GRID.to_vec(),
            };
            let sweep = convergence_sweep(&t, &grid)?;
            for row in &sweep {
                println!(
                    "alpha {:>9.1e}  err(lambda) {:.3e}  err(row marg) {:.3e}  err(col marg) {:.3e}",
                    row.alpha, row.max_err_lambda, row.max_err_row_marginal, row.max_err_col_marginal
                );
            }
            let stem = stem_for(&out, &table.input, "converge");
            match ReportFormat::from(out.format) {
                ReportFormat::Json => {
                    let rows: Vec<_> = sweep
                        .iter()
                        .map(|r| {
                            json!({
                                "alpha": json_float(r.alpha),
                                "max_err_lambda": json_float(r.max_err_lambda),
                                "max_err_row_marginal": json_float(r.max_err_row_marginal),
                                "max_err_col_marginal": json_float(r.max_err_col_marginal),
                            })
                        })
                        .collect();
                    let path = out_path(&out, &format!("{stem}.json"))?;
                    write_json(&json!({ "rows": rows }), &path)?;
                    println!("wrote {}", path.display());
                }
                ReportFormat::Csv => {
                    let path = out_path(&out, &format!("{stem}.csv"))?;
                    let mut text = String::from(
                        "alpha,max_err_lambda,max_err_row_marginal,max_err_col_marginal\n",
                    );
                    for r in &sweep {
                        text.push_str(&format!(
                            "{},{},{},{}\n",
                            fmt_float(r.alpha),
                            fmt_float(r.max_err_lambda),
                            fmt_float(r.max_err_row_marginal),
                            fmt_float(r.max_err_col_marginal)
                        ));
                    }
                    fs::write(&path, text).map_err(io_err(&path))?;
                    println!("wrote {}", path.display());
                }
            }
            Ok(())
        }
    }
}

fn resolve_method(method: MethodArg, algorithm: AlgorithmArg) -> Method {
    match method {
        MethodArg::Svd => Method::Svd,
        MethodArg::Taxicab => Method::Taxicab(algorithm.into()),
    }
}

fn load(args: &TableArgs) -> Result<ContingencyTable> {
    let t = read_table(&args.input, !args.no_row_labels, !args.no_header)?;
    if args.drop_empty {
        drop_empty_lines(&t)
    } else {
        Ok(t)
    }
}

fn prepared(t: ContingencyTable, alpha: Option<f64>) -> Result<ContingencyTable> {
    match alpha {
        Some(alpha) => Ok(power_transform(&t, alpha)?),
        None => Ok(t),
    }
}

fn drop_empty_lines(t: &ContingencyTable) -> Result<ContingencyTable> {
    let keep_rows: Vec<usize> = (0..t.nrows())
        .filter(|&i| (0..t.ncols()).any(|j| t.get(i, j) > 0.0))
        .collect();
    let keep_cols: Vec<usize> = (0..t.ncols())
        .filter(|&j| (0..t.nrows()).any(|i| t.get(i, j) > 0.0))
        .collect();
    let values = DMatrix::from_fn(keep_rows.len(), keep_cols.len(), |i, j| {
        t.get(keep_rows[i], keep_cols[j])
    });
    let row_labels = keep_rows
        .iter()
        .map(|&i| t.row_labels()[i].clone())
        .collect();
    let col_labels = keep_cols
        .iter()
        .map(|&j| t.col_labels()[j].clone())
        .collect();
    Ok(ContingencyTable::new(values, row_labels, col_labels)?)
}

fn axes_to_keep(t: &ContingencyTable, k: Option<usize>) -> usize {
    k.unwrap_or_else(|| t.nrows().min(t.ncols()).saturating_sub(1).max(1))
}

fn stem_for(out: &OutputArgs, input: &Path, suffix: &str) -> String {
    out.stem.clone().unwrap_or_else(|| {
        let base = input
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "table".into());
        format!("{base}_{suffix}")
    })
}

fn out_path(out: &OutputArgs, name: &str) -> Result<PathBuf> {
    fs::create_dir_all(&out.output_dir).map_err(io_err(&out.output_dir))?;
    Ok(out.output_dir.join(name))
}

fn finish_analysis(
    analysis: &str,
    t: &ContingencyTable,
    d: &Decomposition,
    args: &AnalysisArgs,
    out: &OutputArgs,
    input: &Path,
) -> Result<()> {
    let stem = stem_for(out, input, analysis);
    fs::create_dir_all(&out.output_dir).map_err(io_err(&out.output_dir))?;
    println!(
        "{analysis}: {}x{} table, {} axes retained",
        d.nrows,
        d.ncols,
        d.rank()
    );
    let percents = crate::report::axis_percents(d);
    for (i, axis) in d.axes.iter().enumerate() {
        println!(
            "axis {}: delta {:.6} delta^2 {:.6} ({:.2}%)",
            i + 1,
            axis.delta,
            axis.delta * axis.delta,
            percents[i]
        );
    }
    let paths = write_decomposition(
        analysis,
        d,
        t.row_labels(),
        t.col_labels(),
        out.format.into(),
        &out.output_dir,
        &stem,
    )?;
    for p in &paths {
        println!("wrote {}", p.display());
    }
    if let Some(spec) = &args.map {
        let axes = MapAxes::parse(spec)?;
        let map_path = out.output_dir.join(format!("{stem}_map.svg"));
        emit_map(d, t.row_labels(), t.col_labels(), axes, &map_path)?;
        println!("wrote {}", map_path.display());
    }
    Ok(())
}

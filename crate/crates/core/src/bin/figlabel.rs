use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use figlabel::detection::{PageParams, DEFAULT_CONFIDENCE, DEFAULT_NMS_IOU};
use figlabel::evaluation::DEFAULT_EVAL_IOU;
use figlabel::latex::DEFAULT_DPI;
use figlabel::pipeline::{self, Batch, ExtractParams};

#[derive(Parser)]
#[command(name = "figlabel", version, about = "Figure and table bounding-box labels for scientific documents")]
struct Cli {
    /// Worker threads for per-paper and per-page work.
    #[arg(long, global = true, default_value_t = 1)]
    workers: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Labels from original and modified page renders of one LaTeX paper.
    InduceLatex {
        original_dir: PathBuf,
        modified_dir: PathBuf,
        #[arg(long)]
        paper_id: String,
        #[arg(long, default_value_t = DEFAULT_DPI)]
        dpi: u32,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Labels from page rasters, text tokens and XML-derived manifests.
    InduceXml {
        #[arg(required = true)]
        paper_dirs: Vec<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_DPI)]
        dpi: u32,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Figure and caption pairs from detector-backend predictions.
    Extract {
        #[arg(required = true)]
        paper_dirs: Vec<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_CONFIDENCE)]
        confidence_threshold: f64,
        #[arg(long, default_value_t = DEFAULT_NMS_IOU)]
        nms_iou: f64,
        #[arg(long, default_value_t = DEFAULT_DPI)]
        dpi: u32,
        /// Page width in pixels (default: US letter at --dpi).
        #[arg(long)]
        page_width: Option<u32>,
        #[arg(long)]
        page_height: Option<u32>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Precision, recall and F1 of a prediction file against ground truth.
    Evaluate {
        pred_file: PathBuf,
        truth_file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_EVAL_IOU)]
        eval_iou: f64,
        /// Print JSON instead of the table.
        #[arg(long)]
        json: bool,
        /// Also write the JSON report here.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Paper, figure and table counts with per-paper histograms.
    Stats {
        label_file: PathBuf,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn emit_batch(batch: &Batch, output: Option<&Path>) -> figlabel::Result<()> {
    let body = pipeline::render_records(batch);
    match output {
        Some(path) => pipeline::write_atomic(path, &body)?,
        None => print!("{body}"),
    }
    eprintln!("{}", batch.summary.to_line());
    Ok(())
}

fn emit_report(json: String, table: String, as_json: bool, output: Option<&Path>) -> figlabel::Result<()> {
    if let Some(path) = output {
        pipeline::write_atomic(path, &json)?;
    }
    if as_json {
        print!("{json}");
    } else {
        print!("{table}");
    }
    Ok(())
}

fn run(cli: Cli) -> figlabel::Result<()> {
    let workers = cli.workers;
    match cli.command {
        Command::InduceLatex {
            original_dir,
            modified_dir,
            paper_id,
            dpi,
            output,
        } => {
            let batch = pipeline::cmd_induce_latex(&original_dir, &modified_dir, &paper_id, dpi, workers)?;
            emit_batch(&batch, output.as_deref())
        }
        Command::InduceXml { paper_dirs, dpi, output } => {
            let batch = pipeline::cmd_induce_xml(&paper_dirs, dpi, workers)?;
            emit_batch(&batch, output.as_deref())
        }
        Command::Extract {
            paper_dirs,
            confidence_threshold,
            nms_iou,
            dpi,
            page_width,
            page_height,
            output,
        } => {
            for v in [confidence_threshold, nms_iou] {
                if !(0.0..=1.0).contains(&v) {
                    return Err(figlabel::Error::InvalidThreshold(v));
                }
            }
            let letter = ExtractParams::letter(dpi);
            let params = ExtractParams {
                page: PageParams {
                    confidence_threshold,
                    nms_iou,
                },
                dpi,
                page_width: page_width.unwrap_or(letter.page_width),
                page_height: page_height.unwrap_or(letter.page_height),
            };
            let batch = pipeline::cmd_extract(&paper_dirs, &params, workers)?;
            emit_batch(&batch, output.as_deref())
        }
        Command::Evaluate {
            pred_file,
            truth_file,
            eval_iou,
            json,
            output,
        } => {
            let report = pipeline::cmd_evaluate(&pred_file, &truth_file, eval_iou)?;
            emit_report(report.to_json(), report.to_table(), json, output.as_deref())
        }
        Command::Stats { label_file, json, output } => {
            let stats = pipeline::cmd_stats(&label_file)?;
            emit_report(stats.to_json(), stats.to_table(), json, output.as_deref())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("FIGLABEL_LOG", "warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("figlabel: {e}");
            ExitCode::FAILURE
        }
    }
}

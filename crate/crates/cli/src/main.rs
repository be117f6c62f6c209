//! Batch driver: reads job specs, runs them (optionally in parallel), and
//! writes deterministic report and sample artifacts.
//!
//! Exit codes: 0 success, 1 error, 2 when a classification verdict is
//! infeasible -- pipelines can tell "the theorem says no" from a failure.

use bertrand_lab::Tolerances;
use bertrand_lab_cli::job::{Format, JobSpec};
use bertrand_lab_cli::run::run;
use clap::Parser;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicI32, AtomicUsize, Ordering};

/// The tolerance-scale environment variable; the --tol flag wins over it.
const TOL_ENV: &str = "BERTRAND_LAB_TOL";

#[derive(Parser, Debug)]
#[command(
    name = "bertrand-lab",
    version,
    about = "Classify and construct Bertrand/Mannheim mates of space curves and framed curves"
)]
struct Args {
    /// Job spec JSON file(s); with several, --out must be a directory.
    #[arg(long = "spec", required = true, num_args = 1..)]
    specs: Vec<PathBuf>,

    /// Output path: report file stem for one spec, directory for many.
    #[arg(long = "out")]
    out: Option<PathBuf>,

    /// Artifact selection: json, csv or both (default json, unless the
    /// spec's own output block says otherwise).
    #[arg(long = "format")]
    format: Option<Format>,

    /// Global tolerance scale multiplier (overrides BERTRAND_LAB_TOL).
    #[arg(long = "tol")]
    tol: Option<f64>,

    /// Number of spec files processed concurrently.
    #[arg(long = "jobs", default_value_t = 1)]
    jobs: usize,

    /// Seed override for the verify mode.
    #[arg(long = "seed")]
    seed: Option<u64>,
}

fn tolerance_scale(args: &Args) -> Result<f64, String> {
    if let Some(t) = args.tol {
        return Ok(t);
    }
    match std::env::var(TOL_ENV) {
        Ok(raw) => raw
            .trim()
            .parse::<f64>()
            .map_err(|e| format!("{TOL_ENV}={raw:?} is not a number: {e}")),
        Err(_) => Ok(1.0),
    }
}

/// Output file stems for one spec: `<base>.report.json`, `<base>.samples.csv`.
fn artifact_paths(spec: &Path, out: Option<&Path>, many: bool) -> (PathBuf, PathBuf) {
    let stem = spec
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "job".to_string());
    let dir: PathBuf = match out {
        Some(out) if many => out.to_path_buf(),
        Some(out) => {
            return (
                out.with_extension("report.json"),
                out.with_extension("samples.csv"),
            )
        }
        None => spec.parent().map(Path::to_path_buf).unwrap_or_default(),
    };
    (
        dir.join(format!("{stem}.report.json")),
        dir.join(format!("{stem}.samples.csv")),
    )
}

fn run_one(spec_path: &Path, args: &Args, tol: &Tolerances, many: bool) -> i32 {
    let source = match std::fs::read_to_string(spec_path) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", spec_path.display());
            return 1;
        }
    };
    let mut job = match JobSpec::parse(&source) {
        Ok(j) => j,
        Err(e) => {
            eprintln!("error: {}: {e}", spec_path.display());
            return 1;
        }
    };
    if let Some(seed) = args.seed {
        job.seed = Some(seed);
    }
    // precedence: command line, then the spec's output block, then json
    let format = args
        .format
        .or_else(|| job.output.as_ref().and_then(|o| o.format))
        .unwrap_or(Format::Json);
    let out_override = job.output.as_ref().map(|o| PathBuf::from(&o.path));
    let out = args.out.clone().or(out_override);

    let mut outcome = match run(&job, tol, format) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {}: {e}", spec_path.display());
            return 1;
        }
    };
    let (report_path, csv_path) = artifact_paths(spec_path, out.as_deref(), many);
    if outcome.samples_csv.is_some() {
        // file name only: reports stay byte-identical wherever they land
        outcome.report.samples_csv = csv_path
            .file_name()
            .map(|f| f.to_string_lossy().into_owned());
    }
    if format.wants_json() {
        if let Err(e) = std::fs::write(&report_path, outcome.report.to_bytes()) {
            eprintln!("error: cannot write {}: {e}", report_path.display());
            return 1;
        }
        println!("{}", report_path.display());
    }
    if let Some(csv) = &outcome.samples_csv {
        if let Err(e) = std::fs::write(&csv_path, csv) {
            eprintln!("error: cannot write {}: {e}", csv_path.display());
            return 1;
        }
        println!("{}", csv_path.display());
    }
    outcome.exit_code
}

fn main() {
    let args = Args::parse();
    let scale = match tolerance_scale(&args) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(1);
        }
    };
    let tol = Tolerances::with_scale(scale);
    let many = args.specs.len() > 1;

    if many {
        if let Some(out) = &args.out {
            if let Err(e) = std::fs::create_dir_all(out) {
                eprintln!("error: cannot create {}: {e}", out.display());
                std::process::exit(1);
            }
        }
    }

    // per-file isolated outputs, worst exit code wins (1 > 2 > 0)
    let next = AtomicUsize::new(0);
    let worst = AtomicI32::new(0);
    let workers = args.jobs.max(1).min(args.specs.len().max(1));
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(spec) = args.specs.get(i) else { break };
                let code = run_one(spec, &args, &tol, many);
                worst
                    .fetch_update(Ordering::Relaxed, Ordering::Relaxed, |w| {
                        Some(match (w, code) {
                            (1, _) | (_, 1) => 1,
                            (2, _) | (_, 2) => 2,
                            _ => w.max(code),
                        })
                    })
                    .ok();
            });
        }
    });
    std::process::exit(worst.into_inner());
}

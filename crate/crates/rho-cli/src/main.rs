//! `rho`: evaluate the maximal-radius function of an Abelian integral,
//! rasterize it over a rectangle, or run the verification suites.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use rho_cli::formats::{field_to_csv, field_to_pgm};
use rho_cli::runner::{load_config, run_eval, run_field, EngineOverrides};
use rho_cli::suites::{run_suite, Suite};
use rho_cli::{exit_codes, CliError};
use rho_core::hulls::mask_to_pbm;

#[derive(Parser)]
#[command(name = "rho", version, about = "Maximal-radius analysis for Abelian integrals")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Engine configuration JSON; defaults apply when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Seed for the sample generators of the verification suites.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads (defaults to all cores). Results are byte-identical
    /// for any value.
    #[arg(long)]
    threads: Option<usize>,

    #[arg(long)]
    n_rays_init: Option<usize>,
    #[arg(long)]
    refine_depth: Option<usize>,
    #[arg(long)]
    refine_trigger: Option<f64>,
    #[arg(long)]
    rtol: Option<f64>,
    #[arg(long)]
    atol: Option<f64>,
    #[arg(long)]
    h_min: Option<f64>,
    #[arg(long)]
    t_cap: Option<f64>,
    #[arg(long)]
    eps_sing: Option<f64>,
    #[arg(long)]
    z_max: Option<f64>,
    #[arg(long)]
    bisect_tol: Option<f64>,
}

impl Common {
    fn overrides(&self) -> EngineOverrides {
        EngineOverrides {
            n_rays_init: self.n_rays_init,
            refine_depth: self.refine_depth,
            refine_trigger: self.refine_trigger,
            rtol: self.rtol,
            atol: self.atol,
            h_min: self.h_min,
            t_cap: self.t_cap,
            eps_sing: self.eps_sing,
            z_max: self.z_max,
            bisect_tol: self.bisect_tol,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Estimate rho at one basepoint and print the result document.
    Eval {
        /// Problem specification JSON.
        #[arg(long)]
        spec: PathBuf,
        /// Basepoint "re,im", or "re,im;re,im" for product domains.
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        /// Also write the result document to a file.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Rasterize rho over a rectangle to CSV (and optionally a PGM image).
    Field {
        #[arg(long)]
        spec: PathBuf,
        /// Rectangle "x0,y0,x1,y1".
        #[arg(long, allow_hyphen_values = true)]
        bbox: String,
        #[arg(long)]
        nx: usize,
        #[arg(long)]
        ny: usize,
        /// CSV output path (columns re,im,rho,status).
        #[arg(long)]
        csv: PathBuf,
        /// Optional grayscale PGM (P5) of clamped -log rho.
        #[arg(long)]
        pgm: Option<PathBuf>,
        /// Optional sidecar JSON with clamp constants and the manifest.
        #[arg(long)]
        sidecar: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Run a verification suite and write its property reports.
    Verify {
        /// One of: oracles, lipschitz, submean, kobayashi, decay, ct,
        /// runge, scaling, product, all.
        #[arg(long)]
        suite: Suite,
        /// Report JSON output path (stdout gets a summary either way).
        #[arg(long)]
        report: Option<PathBuf>,
        /// With the ct suite: also export the hull mask as a PBM bitmap.
        #[arg(long)]
        hull_pbm: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
}

fn main() {
    let cli = Cli::parse();
    std::process::exit(match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.code
        }
    });
}

fn set_threads(common: &Common) -> Result<(), CliError> {
    if let Some(n) = common.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::io(format!("cannot configure thread pool: {e}")))?;
    }
    Ok(())
}

fn dispatch(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Eval { spec, point, out, common } => {
            set_threads(&common)?;
            let cfg = load_config(common.config.as_deref(), &common.overrides())?;
            let doc = run_eval(&spec, &point, &cfg, common.seed)?;
            let json = serde_json::to_string_pretty(&doc)
                .map_err(|e| CliError::io(e.to_string()))?;
            println!("{json}");
            if let Some(path) = out {
                std::fs::write(path, json.as_bytes())?;
            }
            Ok(exit_codes::OK)
        }
        Command::Field { spec, bbox, nx, ny, csv, pgm, sidecar, common } => {
            set_threads(&common)?;
            let cfg = load_config(common.config.as_deref(), &common.overrides())?;
            let run = run_field(&spec, &bbox, nx, ny, &cfg, common.seed)?;
            let csv_text = field_to_csv(&run.field, &run.manifest_hash);
            std::fs::write(&csv, csv_text.as_bytes())?;
            let (pgm_bytes, scale) = field_to_pgm(&run.field);
            if let Some(path) = pgm {
                std::fs::write(path, &pgm_bytes)?;
            }
            if let Some(path) = sidecar {
                let doc = serde_json::json!({
                    "pgm_scale": scale,
                    "manifest_hash": run.manifest_hash,
                    "manifest": run.manifest,
                });
                let mut f = std::fs::File::create(path)?;
                f.write_all(serde_json::to_string_pretty(&doc).unwrap().as_bytes())?;
            }
            Ok(exit_codes::OK)
        }
        Command::Verify { suite, report, hull_pbm, common } => {
            set_threads(&common)?;
            let cfg = load_config(common.config.as_deref(), &common.overrides())?;
            let reports = run_suite(suite, &cfg, common.seed)?;
            for r in &reports {
                println!(
                    "[{}] {} (worst {:.3e}, threshold {:.3e}, {} samples)",
                    if r.pass { "PASS" } else { "FAIL" },
                    r.property,
                    r.worst_violation,
                    r.threshold,
                    r.samples
                );
            }
            if let Some(path) = report {
                let json = serde_json::to_string_pretty(&reports)
                    .map_err(|e| CliError::io(e.to_string()))?;
                std::fs::write(path, json.as_bytes())?;
            }
            if let Some(path) = hull_pbm {
                if matches!(suite, Suite::Ct | Suite::All) {
                    let (_, raster, hull) = rho_cli::suites::ct_suite(&cfg)?;
                    std::fs::write(path, mask_to_pbm(&hull.hull_mask, raster.nx, raster.ny))?;
                } else {
                    eprintln!("note: --hull-pbm only applies to the ct suite; ignored");
                }
            }
            if reports.iter().all(|r| r.pass) {
                Ok(exit_codes::OK)
            } else {
                Ok(exit_codes::PROPERTY_FAILURE)
            }
        }
    }
}

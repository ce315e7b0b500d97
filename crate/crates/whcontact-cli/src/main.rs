//! Command-line front end for the contact-stress solver.
//!
//! ```text
//! whcontact --config run.cfg [--mode solve|sweep|validate] [--output DIR] [--verbose]
//! ```
//!
//! Exit codes: 0 success, 2 configuration error, 3 numerical failure (with
//! diagnostics still written to the output directory).

mod config;
mod output;
mod run;

use config::Mode;

const USAGE: &str = "\
whcontact - tangential contact stress for a bonded semi-infinite patch

USAGE:
    whcontact --config <path> [OPTIONS]

OPTIONS:
    --config <path>    configuration file (key = value lines)
    --mode <mode>      override the configured mode: solve | sweep | validate
    --output <dir>     override the configured output directory
    --verbose          print derived model constants to stderr
    --help             show this help

Artifacts written to the output directory:
    stress.csv         x, tau, phi, method          (solve mode)
    sweep.csv          k, tau0, alpha, ratio        (sweep mode)
    report.json        cross-validation diagnostics (validate mode)
    certificate.json   factorization residuals      (all modes)

Environment:
    WHCONTACT_THREADS  caps sweep parallelism (default: available cores)
";

fn main() {
    std::process::exit(real_main());
}

fn real_main() -> i32 {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let mut config_path = None;
    let mut mode_override = None;
    let mut output_override = None;
    let mut verbose = false;

    let mut it = args.iter();
    while let Some(arg) = it.next() {
        match arg.as_str() {
            "--help" | "-h" => {
                print!("{USAGE}");
                return 0;
            }
            "--verbose" => verbose = true,
            "--config" => match it.next() {
                Some(path) => config_path = Some(path.clone()),
                None => return usage_error("--config needs a path"),
            },
            "--mode" => match it.next().map(|s| Mode::parse(s)) {
                Some(Some(mode)) => mode_override = Some(mode),
                _ => return usage_error("--mode needs solve|sweep|validate"),
            },
            "--output" => match it.next() {
                Some(dir) => output_override = Some(dir.clone()),
                None => return usage_error("--output needs a directory"),
            },
            other => return usage_error(&format!("unknown argument `{other}`")),
        }
    }

    let Some(config_path) = config_path else {
        return usage_error("--config is required");
    };

    let document = match std::fs::read_to_string(&config_path) {
        Ok(text) => text,
        Err(e) => {
            eprintln!("error: cannot read {config_path}: {e}");
            return 2;
        }
    };

    let mut config = match config::parse_config(&document) {
        Ok(config) => config,
        Err(errors) => {
            eprintln!("error: invalid configuration ({} problems):", errors.len());
            for e in &errors {
                eprintln!("  {e}");
            }
            return 2;
        }
    };

    if let Some(mode) = mode_override {
        config.mode = mode;
        // Re-check the mode-conditional invariants after the override.
        if mode == Mode::Sweep && config.k_list.is_empty() {
            eprintln!("error: sweep mode requires a nonempty k_list");
            return 2;
        }
        if mode == Mode::Solve && config.x_grid.is_none() {
            eprintln!("error: solve mode requires x_min, x_max, x_points");
            return 2;
        }
    }
    if let Some(dir) = output_override {
        config.output_dir = dir;
    }

    match run::run(&config, verbose) {
        Ok(()) => 0,
        Err(run::RunError::Io(message)) => {
            eprintln!("error: {message}");
            2
        }
        Err(run::RunError::Numerical(message)) => {
            eprintln!("error: numerical failure: {message}");
            3
        }
    }
}

fn usage_error(message: &str) -> i32 {
    eprintln!("error: {message}");
    eprintln!("run `whcontact --help` for usage");
    2
}

//! Mode drivers: solve, sweep, validate.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use whcontact::analysis::{self, SweepRow};
use whcontact::oracle::GridSpec;
use whcontact::params::{derive_model_params, ModelParams};
use whcontact::wiener_hopf::{self, CoefficientCase, CERTIFICATE_TOLERANCE};

use crate::config::{Mode, RunConfig};
use crate::output::{self, Json};

pub enum RunError {
    Io(String),
    Numerical(String),
}

/// Execute the configured run, writing artifacts into `output_dir`.
///
/// On a numerical failure the error is still recorded in
/// `diagnostics.json` before returning, so exit code 3 leaves evidence.
pub fn run(config: &RunConfig, verbose: bool) -> Result<(), RunError> {
    let dir = Path::new(&config.output_dir);
    fs::create_dir_all(dir).map_err(|e| RunError::Io(format!("{}: {e}", dir.display())))?;

    if verbose {
        eprint!("{}", crate::config::emit_config(config));
    }
    let result = dispatch(config, verbose);
    match result {
        Ok(artifacts) => {
            for (name, body) in &artifacts {
                write_artifact(dir, name, body)?;
            }
            Ok(())
        }
        Err(message) => {
            let doc = output::object(vec![
                ("status", Json::String("numerical-failure".to_string())),
                ("error", Json::String(message.clone())),
                ("mode", Json::String(config.mode.as_str().to_string())),
            ])
            .render();
            write_artifact(dir, "diagnostics.json", &doc)?;
            Err(RunError::Numerical(message))
        }
    }
}

fn write_artifact(dir: &Path, name: &str, body: &str) -> Result<(), RunError> {
    let path = dir.join(name);
    fs::write(&path, body).map_err(|e| RunError::Io(format!("{}: {e}", path.display())))
}

fn dispatch(config: &RunConfig, verbose: bool) -> Result<Vec<(String, String)>, String> {
    let params = model_params(config)?;
    if verbose {
        eprintln!(
            "lambda = {:.6e}, k = {:.6e}, case = {:?}",
            params.lambda, params.k, params.case
        );
    }
    match config.mode {
        Mode::Solve => solve(config, &params),
        Mode::Sweep => sweep(config, &params),
        Mode::Validate => validate(config, &params),
    }
}

fn model_params(config: &RunConfig) -> Result<ModelParams, String> {
    let k = config.material.glue_compliance_k0() * config.material.stiffness_e0();
    let case = config.case.resolve(k);
    derive_model_params(&config.material, case).map_err(|e| e.to_string())
}

fn solve(config: &RunConfig, params: &ModelParams) -> Result<Vec<(String, String)>, String> {
    let grid = config.x_grid.as_ref().expect("validated").build();
    let case = CoefficientCase::new(*params).map_err(|e| e.to_string())?;
    let cert = wiener_hopf::certificate(
        &case,
        128,
        100.0 / params.lambda.max(1.0),
        &config.tolerances,
    )
    .map_err(|e| e.to_string())?;
    let solution =
        wiener_hopf::contact_stress(&case, &grid, &config.tolerances).map_err(|e| e.to_string())?;
    Ok(vec![
        ("stress.csv".to_string(), output::stress_csv(&solution)),
        (
            "certificate.json".to_string(),
            output::certificate_json(&cert, CERTIFICATE_TOLERANCE),
        ),
    ])
}

fn sweep(config: &RunConfig, params: &ModelParams) -> Result<Vec<(String, String)>, String> {
    let mut ks = config.k_list.clone();
    ks.sort_by(|a, b| b.partial_cmp(a).unwrap());
    ks.dedup();

    let rows = parallel_rows(&ks, params, config)?;

    let first = rows[0].tau0;
    let csv_rows: Vec<output::SweepCsvRow> = rows
        .iter()
        .map(|r| output::SweepCsvRow {
            k: r.k,
            tau0: r.tau0,
            alpha: r.alpha,
            ratio_to_first_row: r.tau0 / first,
        })
        .collect();

    let first_params = ModelParams::from_raw(
        params.lambda,
        ks[0],
        params.t_load,
        config.case.resolve(ks[0]),
    )
    .map_err(|e| e.to_string())?;
    let case = CoefficientCase::new(first_params).map_err(|e| e.to_string())?;
    let cert = wiener_hopf::certificate(
        &case,
        128,
        100.0 / params.lambda.max(1.0),
        &config.tolerances,
    )
    .map_err(|e| e.to_string())?;

    Ok(vec![
        ("sweep.csv".to_string(), output::sweep_csv(&csv_rows)),
        (
            "certificate.json".to_string(),
            output::certificate_json(&cert, CERTIFICATE_TOLERANCE),
        ),
    ])
}

/// Sweep rows are independent; compute them on a small scoped pool capped by
/// `WHCONTACT_THREADS`. Results land in preallocated slots, so the output is
/// identical for any thread count.
fn parallel_rows(
    ks: &[f64],
    params: &ModelParams,
    config: &RunConfig,
) -> Result<Vec<SweepRow>, String> {
    let threads = thread_cap().min(ks.len()).max(1);
    let mut slots: Vec<Option<Result<SweepRow, String>>> = Vec::new();
    slots.resize_with(ks.len(), || None);

    if threads <= 1 {
        for (slot, &k) in slots.iter_mut().zip(ks) {
            *slot = Some(row_for(k, params, config));
        }
    } else {
        let chunk = ks.len().div_ceil(threads);
        std::thread::scope(|scope| {
            for (ks_chunk, slot_chunk) in ks.chunks(chunk).zip(slots.chunks_mut(chunk)) {
                scope.spawn(move || {
                    for (slot, &k) in slot_chunk.iter_mut().zip(ks_chunk) {
                        *slot = Some(row_for(k, params, config));
                    }
                });
            }
        });
    }

    slots
        .into_iter()
        .map(|slot| slot.expect("all slots filled"))
        .collect()
}

fn row_for(k: f64, params: &ModelParams, config: &RunConfig) -> Result<SweepRow, String> {
    let case_choice = config.case.resolve(k);
    let row_params = ModelParams::from_raw(params.lambda, k, params.t_load, case_choice)
        .map_err(|e| e.to_string())?;
    analysis::sweep_row(&row_params, &config.tolerances).map_err(|e| e.to_string())
}

fn thread_cap() -> usize {
    match std::env::var("WHCONTACT_THREADS") {
        Ok(v) => v.parse::<usize>().ok().filter(|&n| n > 0).unwrap_or(1),
        Err(_) => std::thread::available_parallelism()
            .map(|n| n.get())
            .unwrap_or(1),
    }
}

fn validate(config: &RunConfig, params: &ModelParams) -> Result<Vec<(String, String)>, String> {
    let grid = GridSpec::default();
    let report =
        analysis::cross_validate(params, &grid, &config.tolerances).map_err(|e| e.to_string())?;

    let case = CoefficientCase::new(*params).map_err(|e| e.to_string())?;
    let cert = wiener_hopf::certificate(
        &case,
        128,
        100.0 / params.lambda.max(1.0),
        &config.tolerances,
    )
    .map_err(|e| e.to_string())?;

    let mut entries: BTreeMap<String, Json> = report
        .iter()
        .map(|(k, v)| (k.clone(), Json::Number(*v)))
        .collect();
    entries.insert(
        "certificate_max_jump_residual".to_string(),
        Json::Number(cert.max_jump_residual),
    );
    entries.insert(
        "certificate_infinity_residual".to_string(),
        Json::Number(cert.infinity_residual),
    );
    let report_doc = Json::Object(entries).render();

    Ok(vec![
        ("report.json".to_string(), report_doc),
        (
            "certificate.json".to_string(),
            output::certificate_json(&cert, CERTIFICATE_TOLERANCE),
        ),
    ])
}

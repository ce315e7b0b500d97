//! Flat key-value run configuration: parsing, validation, and emission.
//!
//! The document is line-oriented `key = value` text; `#` starts a comment.
//! Material keys are named exactly like the solver's material constants and
//! use SI units. Every violated invariant is reported with its line number.

use std::collections::BTreeMap;
use std::fmt;

use whcontact::params::{ContactCase, MaterialSpec};
use whcontact::QuadratureSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Solve,
    Sweep,
    Validate,
}

impl Mode {
    pub fn as_str(&self) -> &'static str {
        match self {
            Mode::Solve => "solve",
            Mode::Sweep => "sweep",
            Mode::Validate => "validate",
        }
    }
    pub fn parse(s: &str) -> Option<Mode> {
        match s {
            "solve" => Some(Mode::Solve),
            "sweep" => Some(Mode::Sweep),
            "validate" => Some(Mode::Validate),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseChoice {
    Auto,
    CaseA,
    CaseB,
    Rigid,
}

impl CaseChoice {
    pub fn as_str(&self) -> &'static str {
        match self {
            CaseChoice::Auto => "auto",
            CaseChoice::CaseA => "case_a",
            CaseChoice::CaseB => "case_b",
            CaseChoice::Rigid => "rigid",
        }
    }
    pub fn parse(s: &str) -> Option<CaseChoice> {
        match s {
            "auto" => Some(CaseChoice::Auto),
            "case_a" => Some(CaseChoice::CaseA),
            "case_b" => Some(CaseChoice::CaseB),
            "rigid" => Some(CaseChoice::Rigid),
            _ => None,
        }
    }
    /// `auto` selects case B for `k > 0` and the rigid path for `k = 0`.
    pub fn resolve(&self, k: f64) -> ContactCase {
        match self {
            CaseChoice::Auto => {
                if k > 0.0 {
                    ContactCase::CaseB
                } else {
                    ContactCase::RigidLimit
                }
            }
            CaseChoice::CaseA => ContactCase::CaseA,
            CaseChoice::CaseB => ContactCase::CaseB,
            CaseChoice::Rigid => ContactCase::RigidLimit,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Log,
    Linear,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XGrid {
    pub x_min: f64,
    pub x_max: f64,
    pub points: usize,
    pub spacing: Spacing,
}

impl XGrid {
    pub fn build(&self) -> Vec<f64> {
        let n = self.points;
        match self.spacing {
            Spacing::Log => whcontact::analysis::log_grid(self.x_min, self.x_max, n),
            Spacing::Linear => (0..n)
                .map(|i| self.x_min + (self.x_max - self.x_min) * i as f64 / (n - 1) as f64)
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub material: MaterialSpec,
    pub mode: Mode,
    pub case: CaseChoice,
    pub x_grid: Option<XGrid>,
    pub k_list: Vec<f64>,
    pub tolerances: QuadratureSpec,
    pub output_dir: String,
}

#[derive(Debug, Clone)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub field: String,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(f, "line {line}: {}: {}", self.field, self.message),
            None => write!(f, "{}: {}", self.field, self.message),
        }
    }
}

const MATERIAL_KEYS: [&str; 8] = ["e1", "nu1", "h1", "e2", "nu2", "h0", "mu0", "t_load"];

/// Parse the configuration document, accumulating every field-level error.
pub fn parse_config(document: &str) -> Result<RunConfig, Vec<ConfigError>> {
    let mut errors = Vec::new();
    let mut fields: BTreeMap<String, (String, usize)> = BTreeMap::new();

    for (idx, raw) in document.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            errors.push(ConfigError {
                line: Some(line_no),
                field: line.to_string(),
                message: "expected `key = value`".to_string(),
            });
            continue;
        };
        let key = key.trim().to_string();
        let value = value.trim().to_string();
        if let Some((_, first)) = fields.get(&key) {
            errors.push(ConfigError {
                line: Some(line_no),
                field: key.clone(),
                message: format!("duplicate key (first set on line {first})"),
            });
            continue;
        }
        fields.insert(key, (value, line_no));
    }

    let mut take = |key: &str| fields.remove(key);

    let mut number = |key: &str, errors: &mut Vec<ConfigError>| -> Option<f64> {
        match take(key) {
            Some((value, line)) => match value.parse::<f64>() {
                Ok(v) => Some(v),
                Err(_) => {
                    errors.push(ConfigError {
                        line: Some(line),
                        field: key.to_string(),
                        message: format!("not a number: `{value}`"),
                    });
                    None
                }
            },
            None => {
                errors.push(ConfigError {
                    line: None,
                    field: key.to_string(),
                    message: "required field missing".to_string(),
                });
                None
            }
        }
    };

    let mut mat = [0.0f64; 8];
    let mut have_material = true;
    for (slot, key) in mat.iter_mut().zip(MATERIAL_KEYS) {
        match number(key, &mut errors) {
            Some(v) => *slot = v,
            None => have_material = false,
        }
    }
    let material = MaterialSpec {
        e1: mat[0],
        nu1: mat[1],
        h1: mat[2],
        e2: mat[3],
        nu2: mat[4],
        h0: mat[5],
        mu0: mat[6],
        t_load: mat[7],
    };
    if have_material {
        if let Err(e) = material.validate() {
            errors.push(ConfigError {
                line: None,
                field: "material".to_string(),
                message: e.to_string(),
            });
        }
    }

    let mode = match fields.remove("mode") {
        Some((value, line)) => match Mode::parse(&value) {
            Some(m) => m,
            None => {
                errors.push(ConfigError {
                    line: Some(line),
                    field: "mode".to_string(),
                    message: format!("expected solve|sweep|validate, got `{value}`"),
                });
                Mode::Solve
            }
        },
        None => {
            errors.push(ConfigError {
                line: None,
                field: "mode".to_string(),
                message: "required field missing".to_string(),
            });
            Mode::Solve
        }
    };

    let case = match fields.remove("case") {
        Some((value, line)) => match CaseChoice::parse(&value) {
            Some(c) => c,
            None => {
                errors.push(ConfigError {
                    line: Some(line),
                    field: "case".to_string(),
                    message: format!("expected auto|case_a|case_b|rigid, got `{value}`"),
                });
                CaseChoice::Auto
            }
        },
        None => CaseChoice::Auto,
    };

    // Optional x grid, required in solve mode.
    let mut x_fields = [None::<f64>; 3];
    for (slot, key) in x_fields.iter_mut().zip(["x_min", "x_max", "x_points"]) {
        if let Some((value, line)) = fields.remove(key) {
            match value.parse::<f64>() {
                Ok(v) => *slot = Some(v),
                Err(_) => errors.push(ConfigError {
                    line: Some(line),
                    field: key.to_string(),
                    message: format!("not a number: `{value}`"),
                }),
            }
        }
    }
    let spacing = match fields.remove("x_spacing") {
        Some((value, line)) => match value.as_str() {
            "log" => Some(Spacing::Log),
            "linear" => Some(Spacing::Linear),
            other => {
                errors.push(ConfigError {
                    line: Some(line),
                    field: "x_spacing".to_string(),
                    message: format!("expected log|linear, got `{other}`"),
                });
                None
            }
        },
        None => Some(Spacing::Log),
    };
    let x_grid = match (x_fields[0], x_fields[1], x_fields[2], spacing) {
        (Some(x_min), Some(x_max), Some(points), Some(spacing)) => {
            if !(x_min > 0.0 && x_max > x_min) {
                errors.push(ConfigError {
                    line: None,
                    field: "x_min/x_max".to_string(),
                    message: "require 0 < x_min < x_max".to_string(),
                });
                None
            } else if points < 2.0 || points.fract() != 0.0 {
                errors.push(ConfigError {
                    line: None,
                    field: "x_points".to_string(),
                    message: "must be an integer of at least 2".to_string(),
                });
                None
            } else {
                Some(XGrid {
                    x_min,
                    x_max,
                    points: points as usize,
                    spacing,
                })
            }
        }
        _ => None,
    };
    if mode == Mode::Solve && x_grid.is_none() {
        errors.push(ConfigError {
            line: None,
            field: "x_grid".to_string(),
            message: "solve mode requires x_min, x_max, x_points".to_string(),
        });
    }

    let k_list = match fields.remove("k_list") {
        Some((value, line)) => {
            let mut ks = Vec::new();
            for part in value.split(',') {
                let part = part.trim();
                if part.is_empty() {
                    continue;
                }
                match part.parse::<f64>() {
                    Ok(v) if v > 0.0 => ks.push(v),
                    Ok(v) => errors.push(ConfigError {
                        line: Some(line),
                        field: "k_list".to_string(),
                        message: format!("entries must be positive, got {v}"),
                    }),
                    Err(_) => errors.push(ConfigError {
                        line: Some(line),
                        field: "k_list".to_string(),
                        message: format!("not a number: `{part}`"),
                    }),
                }
            }
            ks
        }
        None => Vec::new(),
    };
    if mode == Mode::Sweep && k_list.is_empty() {
        errors.push(ConfigError {
            line: None,
            field: "k_list".to_string(),
            message: "sweep mode requires a nonempty k_list".to_string(),
        });
    }

    let mut tolerances = QuadratureSpec::default();
    if let Some((value, line)) = fields.remove("abs_tol") {
        match value.parse() {
            Ok(v) => tolerances.abs_tol = v,
            Err(_) => errors.push(bad_number(line, "abs_tol", &value)),
        }
    }
    if let Some((value, line)) = fields.remove("rel_tol") {
        match value.parse() {
            Ok(v) => tolerances.rel_tol = v,
            Err(_) => errors.push(bad_number(line, "rel_tol", &value)),
        }
    }
    if let Some((value, line)) = fields.remove("max_panels") {
        match value.parse() {
            Ok(v) => tolerances.max_panels = v,
            Err(_) => errors.push(bad_number(line, "max_panels", &value)),
        }
    }
    if let Some((value, line)) = fields.remove("truncation_radius") {
        match value.parse() {
            Ok(v) => tolerances.truncation_radius = v,
            Err(_) => errors.push(bad_number(line, "truncation_radius", &value)),
        }
    }
    if let Err(e) = tolerances.validate() {
        errors.push(ConfigError {
            line: None,
            field: "tolerances".to_string(),
            message: e.to_string(),
        });
    }

    let output_dir = fields
        .remove("output_dir")
        .map(|(v, _)| v)
        .unwrap_or_else(|| "out".to_string());

    for (key, (_, line)) in fields {
        errors.push(ConfigError {
            line: Some(line),
            field: key,
            message: "unknown key".to_string(),
        });
    }

    // Case/k consistency is checked here so config errors surface as parse
    // errors rather than run failures.
    if have_material && errors.is_empty() {
        let k = material.glue_compliance_k0() * material.stiffness_e0();
        let contact_case = case.resolve(k);
        if let Err(e) = whcontact::params::derive_model_params(&material, contact_case) {
            errors.push(ConfigError {
                line: None,
                field: "case".to_string(),
                message: e.to_string(),
            });
        }
    }

    if errors.is_empty() {
        Ok(RunConfig {
            material,
            mode,
            case,
            x_grid,
            k_list,
            tolerances,
            output_dir,
        })
    } else {
        Err(errors)
    }
}

fn bad_number(line: usize, field: &str, value: &str) -> ConfigError {
    ConfigError {
        line: Some(line),
        field: field.to_string(),
        message: format!("not a number: `{value}`"),
    }
}

/// Emit a config document that [`parse_config`] maps back to the same value.
pub fn emit_config(config: &RunConfig) -> String {
    let mut out = String::new();
    let m = &config.material;
    for (key, value) in [
        ("e1", m.e1),
        ("nu1", m.nu1),
        ("h1", m.h1),
        ("e2", m.e2),
        ("nu2", m.nu2),
        ("h0", m.h0),
        ("mu0", m.mu0),
        ("t_load", m.t_load),
    ] {
        out.push_str(&format!("{key} = {}\n", fmt_f64(value)));
    }
    out.push_str(&format!("mode = {}\n", config.mode.as_str()));
    out.push_str(&format!("case = {}\n", config.case.as_str()));
    if let Some(grid) = &config.x_grid {
        out.push_str(&format!("x_min = {}\n", fmt_f64(grid.x_min)));
        out.push_str(&format!("x_max = {}\n", fmt_f64(grid.x_max)));
        out.push_str(&format!("x_points = {}\n", grid.points));
        out.push_str(&format!(
            "x_spacing = {}\n",
            match grid.spacing {
                Spacing::Log => "log",
                Spacing::Linear => "linear",
            }
        ));
    }
    if !config.k_list.is_empty() {
        let parts: Vec<String> = config.k_list.iter().map(|&k| fmt_f64(k)).collect();
        out.push_str(&format!("k_list = {}\n", parts.join(", ")));
    }
    let t = &config.tolerances;
    out.push_str(&format!("abs_tol = {}\n", fmt_f64(t.abs_tol)));
    out.push_str(&format!("rel_tol = {}\n", fmt_f64(t.rel_tol)));
    out.push_str(&format!("max_panels = {}\n", t.max_panels));
    out.push_str(&format!(
        "truncation_radius = {}\n",
        fmt_f64(t.truncation_radius)
    ));
    out.push_str(&format!("output_dir = {}\n", config.output_dir));
    out
}

/// Shortest representation that round-trips through `f64` parsing.
pub fn fmt_f64(v: f64) -> String {
    let plain = format!("{v}");
    if plain.parse::<f64>() == Ok(v) {
        plain
    } else {
        format!("{v:e}")
    }
}

//! Deterministic CSV and JSON artifact writers.
//!
//! Floating-point fields carry 12 significant digits so repeated runs with
//! the same configuration produce bit-identical bodies.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use whcontact::wiener_hopf::FactorizationCertificate;
use whcontact::StressSolution;

/// 12 significant digits, scientific.
pub fn csv_f64(v: f64) -> String {
    format!("{v:.11e}")
}

pub fn stress_csv(solution: &StressSolution) -> String {
    let mut out = String::from("x,tau,phi,method\n");
    for i in 0..solution.x.len() {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            csv_f64(solution.x[i]),
            csv_f64(solution.tau[i]),
            csv_f64(solution.phi[i]),
            solution.method.as_str()
        );
    }
    out
}

pub struct SweepCsvRow {
    pub k: f64,
    pub tau0: f64,
    pub alpha: f64,
    pub ratio_to_first_row: f64,
}

pub fn sweep_csv(rows: &[SweepCsvRow]) -> String {
    let mut out = String::from("k,tau0,alpha,ratio_to_first_row\n");
    for row in rows {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            csv_f64(row.k),
            csv_f64(row.tau0),
            csv_f64(row.alpha),
            csv_f64(row.ratio_to_first_row)
        );
    }
    out
}

/// Minimal JSON emitter over sorted keys.
pub enum Json {
    Number(f64),
    String(String),
    Bool(bool),
    Array(Vec<Json>),
    Object(BTreeMap<String, Json>),
}

impl Json {
    pub fn render(&self) -> String {
        let mut out = String::new();
        self.write(&mut out, 0);
        out.push('\n');
        out
    }

    fn write(&self, out: &mut String, indent: usize) {
        match self {
            Json::Number(v) => {
                if v.is_finite() {
                    let _ = write!(out, "{}", csv_f64(*v));
                } else {
                    let _ = write!(out, "null");
                }
            }
            Json::String(s) => {
                let _ = write!(out, "\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""));
            }
            Json::Bool(b) => {
                let _ = write!(out, "{b}");
            }
            Json::Array(items) => {
                if items.is_empty() {
                    out.push_str("[]");
                    return;
                }
                out.push('[');
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    out.push('\n');
                    pad(out, indent + 1);
                    item.write(out, indent + 1);
                }
                out.push('\n');
                pad(out, indent);
                out.push(']');
            }
            Json::Object(map) => {
                if map.is_empty() {
                    out.push_str("{}");
                    return;
                }
                out.push('{');
                for (i, (key, value)) in map.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    out.push('\n');
                    pad(out, indent + 1);
                    let _ = write!(out, "\"{key}\": ");
                    value.write(out, indent + 1);
                }
                out.push('\n');
                pad(out, indent);
                out.push('}');
            }
        }
    }
}

fn pad(out: &mut String, indent: usize) {
    for _ in 0..indent {
        out.push_str("  ");
    }
}

pub fn object(entries: Vec<(&str, Json)>) -> Json {
    Json::Object(
        entries
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect(),
    )
}

pub fn certificate_json(cert: &FactorizationCertificate, tolerance: f64) -> String {
    let samples = cert
        .s_samples
        .iter()
        .zip(&cert.g_values)
        .zip(cert.xplus_values.iter().zip(&cert.xminus_values))
        .map(|((s, g), (xp, xm))| {
            object(vec![
                ("s", Json::Number(*s)),
                ("g", Json::Number(*g)),
                ("xplus_re", Json::Number(xp.re)),
                ("xplus_im", Json::Number(xp.im)),
                ("xminus_re", Json::Number(xm.re)),
                ("xminus_im", Json::Number(xm.im)),
            ])
        })
        .collect();
    object(vec![
        ("max_jump_residual", Json::Number(cert.max_jump_residual)),
        ("infinity_residual", Json::Number(cert.infinity_residual)),
        ("jump_tolerance", Json::Number(tolerance)),
        ("passes", Json::Bool(cert.passes(tolerance))),
        ("samples", Json::Array(samples)),
    ])
    .render()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_float_format_is_twelve_significant_digits() {
        assert_eq!(csv_f64(1.0), "1.00000000000e0");
        assert_eq!(csv_f64(-0.03418803418803419), "-3.41880341880e-2");
    }

    #[test]
    fn json_is_sorted_and_stable() {
        let mut map = BTreeMap::new();
        map.insert("b".to_string(), Json::Number(2.0));
        map.insert("a".to_string(), Json::Number(1.0));
        let text = Json::Object(map).render();
        let a = text.find("\"a\"").unwrap();
        let b = text.find("\"b\"").unwrap();
        assert!(a < b);
    }
}

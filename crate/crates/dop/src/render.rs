use dop_core::{BigReal, VerificationReport};
use serde_json::{json, Map, Value};

use crate::cli::Format;
use crate::config::RunConfig;

/// Significant digits for residuals and tolerances.
const RESIDUAL_DIGITS: usize = 17;

pub fn num(x: &BigReal, digits: usize) -> String {
    x.to_sci_string(digits)
}

/// Rows of decimal strings under a header.
#[derive(Debug, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.csv(),
            Format::Json => self.json(),
            Format::Text => self.text(),
        }
    }

    fn csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header).expect("in-memory write");
        for r in &self.rows {
            w.write_record(r).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
    }

    fn json(&self) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                let m: Map<String, Value> = self.header.iter().cloned().zip(r.iter().map(|v| json!(v))).collect();
                Value::Object(m)
            })
            .collect();
        let mut s = serde_json::to_string_pretty(&rows).expect("plain values");
        s.push('\n');
        s
    }

    fn text(&self) -> String {
        let mut widths: Vec<usize> = self.header.iter().map(|h| h.chars().count()).collect();
        for r in &self.rows {
            for (w, v) in widths.iter_mut().zip(r) {
                *w = (*w).max(v.chars().count());
            }
        }
        let line = |cells: &[String]| {
            let mut s = cells
                .iter()
                .zip(&widths)
                .map(|(c, w)| format!("{c:>w$}"))
                .collect::<Vec<_>>()
                .join("  ");
            s.truncate(s.trim_end().len());
            s.push('\n');
            s
        };
        let mut out = line(&self.header);
        for r in &self.rows {
            out.push_str(&line(r));
        }
        out
    }
}

/// A report paired with the suite wall time, if it was measured.
pub fn report_json(r: &VerificationReport, cfg: &RunConfig) -> Value {
    json!({
        "identity": r.identity,
        "params": { "a": cfg.a, "b": cfg.b, "eta": cfg.eta },
        "K": r.window,
        "prec": r.prec,
        "residual": num(&r.residual, RESIDUAL_DIGITS),
        "tolerance": num(&r.tolerance, RESIDUAL_DIGITS),
        "pass": r.pass,
        "seconds": r.seconds.map(|s| format!("{s:.3}")),
    })
}

pub fn overall(reports: &[VerificationReport]) -> &'static str {
    if reports.iter().all(|r| r.pass) {
        "pass"
    } else {
        "fail"
    }
}

pub fn render_reports(reports: &[VerificationReport], cfg: &RunConfig, format: Format) -> String {
    match format {
        Format::Json => {
            let v: Vec<Value> = reports.iter().map(|r| report_json(r, cfg)).collect();
            let mut s = serde_json::to_string_pretty(&v).expect("plain values");
            s.push('\n');
            s
        }
        Format::Csv | Format::Text => {
            let mut t = Table::new(&["identity", "K", "prec", "residual", "tolerance", "pass", "seconds"]);
            for r in reports {
                t.push(vec![
                    r.identity.clone(),
                    r.window.to_string(),
                    r.prec.to_string(),
                    num(&r.residual, RESIDUAL_DIGITS),
                    num(&r.tolerance, RESIDUAL_DIGITS),
                    r.pass.to_string(),
                    r.seconds.map(|s| format!("{s:.3}")).unwrap_or_default(),
                ]);
            }
            let mut s = t.render(format);
            if format == Format::Text {
                s.push_str(&format!("status: {}\n", overall(reports)));
            }
            s
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::WeightArgs;
    use dop_core::report::identity_tolerance;

    fn cfg() -> RunConfig {
        RunConfig::from_args(&WeightArgs {
            a: String::new(),
            b: "1.5".into(),
            eta: "0.7".into(),
            prec: 128,
        })
        .unwrap()
    }

    fn rep(residual: i64) -> VerificationReport {
        let c = cfg();
        VerificationReport::new(
            "psi:band",
            c.weight.params(),
            16,
            128,
            BigReal::from_i64(residual, 128),
            identity_tolerance(128),
        )
    }

    #[test]
    fn empty_list_is_an_empty_array() {
        let s = render_reports(&[], &cfg(), Format::Json);
        assert_eq!(serde_json::from_str::<Value>(&s).unwrap(), json!([]));
    }

    #[test]
    fn keys_sorted_and_numbers_are_strings() {
        let s = render_reports(&[rep(0)], &cfg(), Format::Json);
        let v: Value = serde_json::from_str(&s).unwrap();
        let obj = v[0].as_object().unwrap();
        let keys: Vec<&String> = obj.keys().collect();
        assert_eq!(keys, ["K", "identity", "params", "pass", "prec", "residual", "seconds", "tolerance"]);
        assert_eq!(obj["pass"], json!(true));
        assert!(obj["residual"].is_string() && obj["tolerance"].is_string());
        assert_eq!(obj["params"], json!({"a": [], "b": ["1.5"], "eta": "0.7"}));
        assert!(obj["seconds"].is_null());
        assert!(s.find("\"K\"").unwrap() < s.find("\"identity\"").unwrap());
    }

    #[test]
    fn mixed_reports_fail_overall() {
        let rs = [rep(0), rep(1)];
        assert_eq!(overall(&rs), "fail");
        assert!(render_reports(&rs, &cfg(), Format::Text).ends_with("status: fail\n"));
        assert_eq!(overall(&rs[..1]), "pass");
    }

    #[test]
    fn csv_has_header() {
        let mut t = Table::new(&["n", "beta"]);
        t.push(vec!["0".into(), "1.5e0".into()]);
        assert_eq!(t.render(Format::Csv), "n,beta\n0,1.5e0\n");
    }
}

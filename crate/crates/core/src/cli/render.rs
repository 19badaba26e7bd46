//! Report assembly and rendering: aligned text tables and diamond pyramids,
//! or a stable JSON schema with exact integer entries. Output depends only
//! on the input model and flags, never on wall-clock state.

use serde_json::{json, Value};

use crate::homology::{DimVector, HodgeDiamond, PageTable};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum Format {
    #[default]
    Text,
    Json,
}

/// Check verdicts; `None` means the check was not requested or not
/// applicable (e.g. downstream of a failed Poisson test).
#[derive(Clone, Debug, Default)]
pub struct Checks {
    pub integrable: Option<bool>,
    pub integrability_failures: Option<Vec<String>>,
    pub poisson: Option<bool>,
    pub witness: Option<String>,
    pub unimodular: Option<bool>,
    pub e1_degenerate: Option<bool>,
    pub defect: Option<Vec<usize>>,
    pub duality: Option<bool>,
    pub euler: Option<i64>,
    pub euler_matches_hodge: Option<bool>,
}

impl Checks {
    pub fn is_empty(&self) -> bool {
        self.integrable.is_none()
            && self.poisson.is_none()
            && self.unimodular.is_none()
            && self.e1_degenerate.is_none()
            && self.duality.is_none()
            && self.euler.is_none()
    }
}

/// Everything a subcommand computed for one model run.
#[derive(Clone, Debug)]
pub struct Report {
    pub model: String,
    pub n: u8,
    pub pi: Option<String>,
    pub hodge: Option<HodgeDiamond>,
    pub kb: Option<DimVector>,
    pub lp: Option<DimVector>,
    pub pages: Option<Vec<PageTable>>,
    pub checks: Option<Checks>,
}

impl Report {
    pub fn new(model: impl Into<String>, n: u8) -> Self {
        Report {
            model: model.into(),
            n,
            pi: None,
            hodge: None,
            kb: None,
            lp: None,
            pages: None,
            checks: None,
        }
    }
}

fn opt<T: Into<Value>>(v: Option<T>) -> Value {
    v.map(Into::into).unwrap_or(Value::Null)
}

fn dims_json(dv: &DimVector) -> Value {
    json!(dv.dims())
}

fn pages_json(pages: &[PageTable]) -> Value {
    Value::Array(
        pages
            .iter()
            .map(|p| json!({ "r": p.r, "e": p.e, "d_ranks": p.d_ranks }))
            .collect(),
    )
}

fn checks_json(c: &Checks) -> Value {
    json!({
        "integrable": opt(c.integrable),
        "integrability_failures": c.integrability_failures.as_ref().map(|f| json!(f)).unwrap_or(Value::Null),
        "poisson": opt(c.poisson),
        "witness": c.witness.clone().map(Value::String).unwrap_or(Value::Null),
        "unimodular": opt(c.unimodular),
        "e1_degenerate": opt(c.e1_degenerate),
        "defect": c.defect.as_ref().map(|d| json!(d)).unwrap_or(Value::Null),
        "duality": opt(c.duality),
        "euler": opt(c.euler),
        "euler_matches_hodge": opt(c.euler_matches_hodge),
    })
}

pub fn render_report(report: &Report, format: Format) -> String {
    match format {
        Format::Json => {
            let value = json!({
                "model": report.model,
                "n": report.n,
                "pi": report.pi.clone().map(Value::String).unwrap_or(Value::Null),
                "hodge": report.hodge.as_ref().map(|h| json!(h.rows())).unwrap_or(Value::Null),
                "kb": report.kb.as_ref().map(dims_json).unwrap_or(Value::Null),
                "lp": report.lp.as_ref().map(dims_json).unwrap_or(Value::Null),
                "pages": report.pages.as_ref().map(|p| pages_json(p)).unwrap_or(Value::Null),
                "checks": report.checks.as_ref().map(checks_json).unwrap_or(Value::Null),
            });
            format!("{}\n", serde_json::to_string_pretty(&value).expect("serializable"))
        }
        Format::Text => {
            let mut out = String::new();
            out.push_str(&format!("model: {}\n", report.model));
            out.push_str(&format!("n:     {}\n", report.n));
            if let Some(pi) = &report.pi {
                out.push_str(&format!("pi:    {pi}\n"));
            }
            out.push_str("note:  invariant-model dimensions\n");
            if let Some(h) = &report.hodge {
                out.push_str("\nhodge diamond:\n");
                out.push_str(&render_pyramid(h));
            }
            if let Some(kb) = &report.kb {
                out.push_str("\nkoszul-brylinski homology:\n");
                out.push_str(&render_dims_table(kb));
            }
            if let Some(lp) = &report.lp {
                out.push_str("\nlichnerowicz-poisson cohomology:\n");
                out.push_str(&render_dims_table(lp));
            }
            if let Some(pages) = &report.pages {
                out.push_str("\nspectral pages:\n");
                for p in pages {
                    out.push_str(&render_page(p));
                }
            }
            if let Some(checks) = &report.checks {
                if !checks.is_empty() {
                    out.push_str("\nchecks:\n");
                    out.push_str(&render_checks(checks));
                }
            }
            out
        }
    }
}

/// Centered pyramid with rows `p + q = d`, `p` descending to the right of
/// the reader's view matching the usual diamond layout.
pub fn render_pyramid(h: &HodgeDiamond) -> String {
    let rows = h.pyramid_rows();
    let width = rows
        .iter()
        .flatten()
        .map(|v| v.to_string().len())
        .max()
        .unwrap_or(1);
    let max_cells = h.n() as usize + 1;
    let mut out = String::new();
    for row in &rows {
        let pad = (max_cells - row.len()) * (width + 2) / 2;
        out.push_str(&" ".repeat(pad + 2));
        let cells: Vec<String> = row.iter().map(|v| format!("{v:>width$}")).collect();
        out.push_str(cells.join("  ").trim_end());
        out.push('\n');
    }
    out
}

/// Aligned `k` / `dim` rows.
pub fn render_dims_table(dv: &DimVector) -> String {
    let ks: Vec<String> = (0..dv.dims().len()).map(|k| k.to_string()).collect();
    let vs: Vec<String> = dv.dims().iter().map(|v| v.to_string()).collect();
    let widths: Vec<usize> =
        ks.iter().zip(&vs).map(|(a, b)| a.len().max(b.len())).collect();
    let mut top = String::from("  k  ");
    let mut bot = String::from("  dim");
    for ((k, v), w) in ks.iter().zip(&vs).zip(&widths) {
        top.push_str(&format!("  {k:>w$}"));
        bot.push_str(&format!("  {v:>w$}"));
    }
    format!("{top}\n{bot}\n")
}

fn render_page(p: &PageTable) -> String {
    let n = p.n as usize;
    let width = p
        .e
        .iter()
        .flatten()
        .map(|v| v.to_string().len())
        .max()
        .unwrap_or(1);
    let mut out = format!("  page r={} (rows t descending, columns s=0..{n})\n", p.r);
    for t in (0..=n).rev() {
        out.push_str(&format!("    t={t} |"));
        for s in 0..=n {
            out.push_str(&format!(" {:>width$}", p.e[s][t]));
        }
        out.push('\n');
    }
    let mut ranks = Vec::new();
    for s in 0..=n {
        for t in 0..=n {
            let r = p.d_ranks[s][t];
            if r > 0 {
                ranks.push(format!(
                    "    d_{}: ({s},{t}) -> ({},{}) rank {r}",
                    p.r,
                    s + p.r,
                    t as i64 + 1 - p.r as i64
                ));
            }
        }
    }
    if ranks.is_empty() {
        out.push_str(&format!("    d_{} = 0\n", p.r));
    } else {
        out.push_str(&ranks.join("\n"));
        out.push('\n');
    }
    out
}

fn render_checks(c: &Checks) -> String {
    let mut out = String::new();
    let mut line = |k: &str, v: String| out.push_str(&format!("  {k:<16} {v}\n"));
    if let Some(v) = c.integrable {
        line("integrable:", v.to_string());
    }
    if let Some(fails) = &c.integrability_failures {
        for f in fails {
            line("", f.clone());
        }
    }
    if let Some(v) = c.poisson {
        line("poisson:", v.to_string());
    }
    if let Some(w) = &c.witness {
        line("witness:", format!("[pi,pi] = {w}"));
    }
    if let Some(v) = c.unimodular {
        line("unimodular:", v.to_string());
    }
    if let Some(v) = c.e1_degenerate {
        line("e1-degenerate:", v.to_string());
    }
    if let Some(d) = &c.defect {
        let body: Vec<String> = d.iter().map(|x| x.to_string()).collect();
        line("defect[k]:", body.join(" "));
    }
    if let Some(v) = c.duality {
        line("duality:", v.to_string());
    }
    if let Some(v) = c.euler {
        line("euler:", v.to_string());
    }
    if let Some(v) = c.euler_matches_hodge {
        line("euler = hodge:", v.to_string());
    }
    out
}

/// Output of the formula subcommands.
pub fn render_dims_output(dv: &DimVector, format: Format) -> String {
    match format {
        Format::Json => {
            let value = json!({ "dims": dv.dims() });
            format!("{}\n", serde_json::to_string_pretty(&value).expect("serializable"))
        }
        Format::Text => render_dims_table(dv),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::models::torus;
    use crate::homology::dolbeault_dims;

    #[test]
    fn torus_pyramid_shape() {
        let h = dolbeault_dims(&torus(3));
        let text = render_pyramid(&h);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 7);
        assert!(lines[3].trim().starts_with("1"));
        assert_eq!(lines[3].split_whitespace().collect::<Vec<_>>(), vec!["1", "9", "9", "1"]);
        assert_eq!(lines[0].trim(), "1");
    }

    #[test]
    fn dims_table_alignment() {
        let dv = DimVector::new(vec![1, 9, 38, 101, 191, 274, 308, 274, 191, 101, 38, 9, 1]);
        let text = render_dims_table(&dv);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        assert!(lines[0].contains("12"));
        assert!(lines[1].contains("308"));
    }

    #[test]
    fn empty_check_block_is_omitted() {
        let mut report = Report::new("torus2", 2);
        report.checks = Some(Checks::default());
        let text = render_report(&report, Format::Text);
        assert!(!text.contains("checks:"));
    }

    #[test]
    fn json_schema_is_stable() {
        let report = Report::new("torus2", 2);
        let text = render_report(&report, Format::Json);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        let obj = v.as_object().unwrap();
        for key in ["model", "n", "pi", "hodge", "kb", "lp", "pages", "checks"] {
            assert!(obj.contains_key(key), "missing {key}");
        }
        assert_eq!(obj["model"], "torus2");
        assert!(obj["kb"].is_null());
    }
}

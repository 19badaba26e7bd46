//! Command-line surface: model loading, subcommand dispatch, exit-code
//! contract. Exit 0 on success, 1 on a domain refusal (non-Poisson bivector,
//! non-integrable model, inapplicable formula), 2 on parse or usage errors.

pub mod grammar;
pub mod models;
pub mod render;

use std::fmt::Write as _;
use std::io::Write;

use crate::exterior::Polyvector;
use crate::formulas::{blowup_dims, pbundle_dims, trivial_poisson_dims, BlowupSpec, FormulaError};
use crate::homology::{
    check_duality, check_unimodular, dolbeault_dims, euler_characteristic, euler_from_hodge,
    kb_dims, lp_dims, DimVector, HodgeDiamond,
};
use crate::model::{LieModel, PoissonError, PoissonSpec};
use crate::spectral::spectral_pages;
use grammar::{parse_diamond, parse_dims, parse_model, parse_pi_expr, render_pi, ParseError};
use render::{render_dims_output, render_report, Checks, Format, Report};

const USAGE: &str = "\
usage: koszul <command> [flags]

commands:
  validate --model <m>                      integrability verdict
  hodge    --model <m>                      Dolbeault Hodge diamond
  kb       --model <m> [--pi <expr>]        Koszul-Brylinski homology table
  lp       --model <m> [--pi <expr>]        Lichnerowicz-Poisson cohomology table
  ss       --model <m> [--pi <expr>] [--pages <r>]
                                            spectral-sequence pages
  check    --model <m> [--pi <expr>]        poisson / unimodular / degeneracy /
                                            duality / euler verdicts
  blowup   --x <dims> --z <dims> --codim <c> --z-ddbar
                                            blow-up dimension table
  pbundle  --z <dims> --rank <c>            projective-bundle dimension table
  trivial  (--model <m> | --diamond <d>)    table of the trivial Poisson structure
  report   --model <m> [--pi <expr>] [--pages <r>]
                                            full bundle for one model

flags:
  --model <name|path>   built-in model or model file
  --pi \"<expr>\"         invariant bivector, e.g. \"X1^X2 + X2^X3\" (default 0)
  --format text|json    output format (default text)
  --pages <r>           pages to print (default n+1)
  --x/--z/--diamond     inline literal or @file
  --codim/--rank <c>    codimension / bundle rank, c >= 2
  --z-ddbar             assert the center satisfies the del-delbar lemma

built-in models: iwasawa3, nil6, torus2..torus8
";

enum CliError {
    Usage(String),
    Parse(ParseError),
    Refusal(String),
    Io(String),
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError::Parse(e)
    }
}

impl From<PoissonError> for CliError {
    fn from(e: PoissonError) -> Self {
        CliError::Refusal(e.to_string())
    }
}

impl From<FormulaError> for CliError {
    fn from(e: FormulaError) -> Self {
        CliError::Refusal(e.to_string())
    }
}

#[derive(Default)]
struct Opts {
    model: Option<String>,
    pi: Option<String>,
    format: Format,
    pages: Option<usize>,
    x: Option<String>,
    z: Option<String>,
    codim: Option<usize>,
    rank: Option<usize>,
    diamond: Option<String>,
    z_ddbar: bool,
}

fn parse_opts(args: &[String]) -> Result<Opts, CliError> {
    let mut opts = Opts::default();
    let mut it = args.iter();
    let need = |flag: &str, v: Option<&String>| -> Result<String, CliError> {
        v.cloned().ok_or_else(|| CliError::Usage(format!("{flag} needs a value")))
    };
    while let Some(arg) = it.next() {
        match arg.as_str() {
            "--model" => opts.model = Some(need(arg, it.next())?),
            "--pi" => opts.pi = Some(need(arg, it.next())?),
            "--format" => {
                opts.format = match need(arg, it.next())?.as_str() {
                    "text" => Format::Text,
                    "json" => Format::Json,
                    other => {
                        return Err(CliError::Usage(format!("unknown format '{other}'")));
                    }
                }
            }
            "--pages" => {
                let v = need(arg, it.next())?;
                let r: usize =
                    v.parse().map_err(|_| CliError::Usage(format!("bad page count '{v}'")))?;
                if r < 1 {
                    return Err(CliError::Usage("--pages must be at least 1".into()));
                }
                opts.pages = Some(r);
            }
            "--x" => opts.x = Some(need(arg, it.next())?),
            "--z" => opts.z = Some(need(arg, it.next())?),
            "--codim" => {
                let v = need(arg, it.next())?;
                opts.codim =
                    Some(v.parse().map_err(|_| CliError::Usage(format!("bad codim '{v}'")))?);
            }
            "--rank" => {
                let v = need(arg, it.next())?;
                opts.rank =
                    Some(v.parse().map_err(|_| CliError::Usage(format!("bad rank '{v}'")))?);
            }
            "--diamond" => opts.diamond = Some(need(arg, it.next())?),
            "--z-ddbar" => opts.z_ddbar = true,
            other => return Err(CliError::Usage(format!("unknown flag '{other}'"))),
        }
    }
    Ok(opts)
}

/// `@path` reads the file, anything else is the literal text.
fn load_arg(s: &str) -> Result<String, CliError> {
    if let Some(path) = s.strip_prefix('@') {
        std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{path}: {e}")))
    } else {
        Ok(s.to_string())
    }
}

fn load_model(opts: &Opts) -> Result<(LieModel, Option<Polyvector>), CliError> {
    let spec = opts
        .model
        .as_ref()
        .ok_or_else(|| CliError::Usage("--model is required".into()))?;
    if let Some(found) = models::builtin(spec) {
        return Ok(found);
    }
    let text = std::fs::read_to_string(spec)
        .map_err(|e| CliError::Io(format!("{spec}: {e}")))?;
    Ok(parse_model(&text)?)
}

fn require_integrable(model: &LieModel) -> Result<(), CliError> {
    let report = model.validate();
    if report.is_valid() {
        Ok(())
    } else {
        let mut msg = String::from("model is not integrable:");
        for (k, form) in &report.failures {
            let _ = write!(msg, " del(del w^{k}) = {};", form.ascii());
        }
        Err(CliError::Refusal(msg))
    }
}

fn resolve_pi(
    model: &LieModel,
    opts: &Opts,
    file_pi: Option<Polyvector>,
) -> Result<Polyvector, CliError> {
    match &opts.pi {
        Some(expr) => Ok(parse_pi_expr(model.n(), expr)?),
        None => Ok(file_pi.unwrap_or_else(|| Polyvector::zero(model.n()))),
    }
}

fn poisson_spec(model: &LieModel, pi: Polyvector) -> Result<PoissonSpec, CliError> {
    PoissonSpec::validate(model, pi).map_err(CliError::from)
}

fn dims_arg(opts_field: &Option<String>, flag: &str) -> Result<DimVector, CliError> {
    let raw = opts_field
        .as_ref()
        .ok_or_else(|| CliError::Usage(format!("{flag} is required")))?;
    Ok(parse_dims(&load_arg(raw)?)?)
}

fn diamond_arg(opts: &Opts) -> Result<HodgeDiamond, CliError> {
    if let Some(raw) = &opts.diamond {
        return Ok(parse_diamond(&load_arg(raw)?)?);
    }
    if opts.model.is_some() {
        let (model, _) = load_model(opts)?;
        require_integrable(&model)?;
        return Ok(dolbeault_dims(&model));
    }
    Err(CliError::Usage("trivial needs --diamond or --model".into()))
}

fn base_report(model: &LieModel, pi: Option<&Polyvector>) -> Report {
    let mut report = Report::new(model.name(), model.n());
    report.pi = pi.map(render_pi);
    report
}

fn full_checks(
    model: &LieModel,
    spec: &PoissonSpec,
    hodge: &HodgeDiamond,
    kb: &DimVector,
) -> Checks {
    let defect = crate::homology::e1_defect(hodge, kb);
    let euler = euler_characteristic(kb);
    Checks {
        poisson: Some(true),
        unimodular: Some(check_unimodular(model, spec)),
        e1_degenerate: Some(defect.iter().all(|d| *d == 0)),
        defect: Some(defect),
        duality: Some(check_duality(kb)),
        euler: Some(euler),
        euler_matches_hodge: Some(euler == euler_from_hodge(hodge)),
        ..Checks::default()
    }
}

fn dispatch(args: &[String], out: &mut dyn Write) -> Result<i32, CliError> {
    let Some(command) = args.first() else {
        return Err(CliError::Usage("missing command".into()));
    };
    let opts = parse_opts(&args[1..])?;
    let format = opts.format;

    let emit = |out: &mut dyn Write, s: String| -> Result<(), CliError> {
        out.write_all(s.as_bytes()).map_err(|e| CliError::Io(e.to_string()))
    };

    match command.as_str() {
        "validate" => {
            let (model, pi) = load_model(&opts)?;
            let verdict = model.validate();
            let mut report = base_report(&model, pi.as_ref());
            report.checks = Some(Checks {
                integrable: Some(verdict.is_valid()),
                integrability_failures: Some(
                    verdict
                        .failures
                        .iter()
                        .map(|(k, f)| format!("del(del w^{k}) = {}", f.ascii()))
                        .collect(),
                ),
                ..Checks::default()
            });
            emit(out, render_report(&report, format))?;
            Ok(if verdict.is_valid() { 0 } else { 1 })
        }
        "hodge" => {
            let (model, pi) = load_model(&opts)?;
            require_integrable(&model)?;
            let mut report = base_report(&model, pi.as_ref());
            report.hodge = Some(dolbeault_dims(&model));
            emit(out, render_report(&report, format))?;
            Ok(0)
        }
        "kb" | "lp" => {
            let (model, file_pi) = load_model(&opts)?;
            require_integrable(&model)?;
            let pi = resolve_pi(&model, &opts, file_pi)?;
            let spec = poisson_spec(&model, pi.clone())?;
            let mut report = base_report(&model, Some(&pi));
            if command == "kb" {
                report.kb = Some(kb_dims(&model, &spec));
            } else {
                report.lp = Some(lp_dims(&model, &spec));
            }
            emit(out, render_report(&report, format))?;
            Ok(0)
        }
        "ss" => {
            let (model, file_pi) = load_model(&opts)?;
            require_integrable(&model)?;
            let pi = resolve_pi(&model, &opts, file_pi)?;
            let spec = poisson_spec(&model, pi.clone())?;
            let r_max = opts.pages.unwrap_or(model.n() as usize + 1);
            let mut report = base_report(&model, Some(&pi));
            report.pages = Some(spectral_pages(&model, &spec, r_max));
            emit(out, render_report(&report, format))?;
            Ok(0)
        }
        "check" => {
            let (model, file_pi) = load_model(&opts)?;
            require_integrable(&model)?;
            let pi = resolve_pi(&model, &opts, file_pi)?;
            let mut report = base_report(&model, Some(&pi));
            match PoissonSpec::validate(&model, pi.clone()) {
                Ok(spec) => {
                    let hodge = dolbeault_dims(&model);
                    let kb = kb_dims(&model, &spec);
                    report.checks = Some(full_checks(&model, &spec, &hodge, &kb));
                }
                Err(PoissonError::NotPoisson { witness }) => {
                    report.checks = Some(Checks {
                        poisson: Some(false),
                        witness: Some(witness.ascii()),
                        ..Checks::default()
                    });
                }
                Err(e @ PoissonError::NotBivector) => return Err(e.into()),
            }
            emit(out, render_report(&report, format))?;
            Ok(0)
        }
        "report" => {
            let (model, file_pi) = load_model(&opts)?;
            require_integrable(&model)?;
            let pi = resolve_pi(&model, &opts, file_pi)?;
            let spec = poisson_spec(&model, pi.clone())?;
            let r_max = opts.pages.unwrap_or(model.n() as usize + 1);
            let mut report = base_report(&model, Some(&pi));
            let hodge = dolbeault_dims(&model);
            let kb = kb_dims(&model, &spec);
            report.checks = Some(full_checks(&model, &spec, &hodge, &kb));
            report.hodge = Some(hodge);
            report.kb = Some(kb);
            report.lp = Some(lp_dims(&model, &spec));
            report.pages = Some(spectral_pages(&model, &spec, r_max));
            emit(out, render_report(&report, format))?;
            Ok(0)
        }
        "blowup" => {
            let x = dims_arg(&opts.x, "--x")?;
            let z = dims_arg(&opts.z, "--z")?;
            let codim =
                opts.codim.ok_or_else(|| CliError::Usage("--codim is required".into()))?;
            let result =
                blowup_dims(&BlowupSpec { x, z, codim, z_ddbar: opts.z_ddbar })?;
            emit(out, render_dims_output(&result, format))?;
            Ok(0)
        }
        "pbundle" => {
            let z = dims_arg(&opts.z, "--z")?;
            let rank = opts.rank.ok_or_else(|| CliError::Usage("--rank is required".into()))?;
            let result = pbundle_dims(&z, rank)?;
            emit(out, render_dims_output(&result, format))?;
            Ok(0)
        }
        "trivial" => {
            let diamond = diamond_arg(&opts)?;
            let result = trivial_poisson_dims(&diamond);
            emit(out, render_dims_output(&result, format))?;
            Ok(0)
        }
        "help" | "--help" | "-h" => {
            emit(out, USAGE.to_string())?;
            Ok(0)
        }
        other => Err(CliError::Usage(format!("unknown command '{other}'"))),
    }
}

/// Runs one invocation; writes results to `out` and diagnostics to `err`.
pub fn run(args: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match dispatch(args, out) {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            let _ = write!(err, "{USAGE}");
            2
        }
        Err(CliError::Parse(e)) => {
            let _ = writeln!(err, "parse error: {e}");
            2
        }
        Err(CliError::Refusal(msg)) => {
            let _ = writeln!(err, "refused: {msg}");
            1
        }
        Err(CliError::Io(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let argv: Vec<String> = args.iter().map(|s| s.to_string()).collect();
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(&argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn kb_on_builtin_iwasawa() {
        let (code, out, _) =
            run_capture(&["kb", "--model", "iwasawa3", "--pi", "X1^X2 + X2^X3"]);
        assert_eq!(code, 0);
        assert!(out.contains("dim  1  5  11  14  11  5  1"), "{out}");
    }

    #[test]
    fn non_poisson_is_refused_with_witness() {
        let (code, _, err) = run_capture(&["kb", "--model", "iwasawa3", "--pi", "X1^X3"]);
        assert_eq!(code, 1);
        assert!(err.contains("Schouten"), "{err}");
    }

    #[test]
    fn check_reports_false_poisson_without_refusing() {
        let (code, out, _) = run_capture(&["check", "--model", "iwasawa3", "--pi", "X1^X3"]);
        assert_eq!(code, 0);
        assert!(out.contains("poisson:         false"), "{out}");
        assert!(out.contains("witness"), "{out}");
    }

    #[test]
    fn usage_and_parse_errors_exit_two() {
        let (code, _, _) = run_capture(&["kb"]);
        assert_eq!(code, 2);
        let (code, _, err) = run_capture(&["kb", "--model", "iwasawa3", "--pi", "X1^"]);
        assert_eq!(code, 2);
        assert!(err.contains("parse error"));
        let (code, _, _) = run_capture(&["frobnicate"]);
        assert_eq!(code, 2);
    }

    #[test]
    fn blowup_without_ddbar_flag_is_refused() {
        let (code, _, err) = run_capture(&[
            "blowup", "--x", "0,0,3,0,0", "--z", "1", "--codim", "2",
        ]);
        assert_eq!(code, 1);
        assert!(err.contains("del-delbar"), "{err}");
    }

    #[test]
    fn blowup_inline() {
        let (code, out, _) = run_capture(&[
            "blowup", "--x", "0,0,3,0,0", "--z", "1", "--codim", "2", "--z-ddbar",
        ]);
        assert_eq!(code, 0);
        assert!(out.contains("4"), "{out}");
    }

    #[test]
    fn deterministic_output() {
        let args = ["report", "--model", "iwasawa3", "--pi", "X2^X3", "--format", "json"];
        let a = run_capture(&args);
        let b = run_capture(&args);
        assert_eq!(a, b);
    }

    #[test]
    fn validate_invalid_model_exits_one() {
        let dir = std::env::temp_dir().join("koszul-test-models");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("bad.model");
        std::fs::write(&path, "model bad\ndim 3\nd w1 = - w2^w3\nd w2 = - w1^w2\n").unwrap();
        let (code, out, _) =
            run_capture(&["validate", "--model", path.to_str().unwrap()]);
        assert_eq!(code, 1);
        assert!(out.contains("integrable:      false"), "{out}");
    }
}

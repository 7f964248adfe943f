//! Command dispatch and structured reports for the `shiftsym` binary.

use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};
use thiserror::Error;

use shiftsym::cdga::{Mode, Polynomial, Presentation, Slice};
use shiftsym::constructions::{
    bg_closed_forms, bg_forms, cotangent_symplectic, crit_lagrangian_data, gl_invariant_dims, invariant_model,
    loop_model, pushforward_to_rcrit, rcrit, s1_transgression, shifted_cotangent, strict_lagrangian_residue,
    symmetric_obstruction, trace_form, ConstructionError, CritData, RCRIT_SIGN,
};
use shiftsym::derham::DeRhamAlgebra;
use shiftsym::dsl::{eval_form, eval_function, parse_expr, parse_with, DslDocument, DslError, ParseOptions};
use shiftsym::invariants::{check_invariants, InvariantOptions};
use shiftsym::symplectic::{
    closed_forms_space, forms_space, keys_report, slice_of, symplectic_certificate, ClosedFormRep, FormClass,
    SymplecticError,
};

#[derive(Parser, Debug, Clone)]
#[command(name = "shiftsym", version, about = "Exact shifted symplectic structures on quasi-free cdgas")]
pub struct Cli {
    #[command(flatten)]
    pub flags: Flags,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, Default)]
pub struct Flags {
    /// Largest internal weight examined.
    #[arg(long, global = true, default_value_t = 8)]
    pub weight_max: u32,
    /// Clip polynomials at this many factors instead of using weights.
    /// Results are never certified in this mode.
    #[arg(long, global = true)]
    pub truncate_degree: Option<usize>,
    /// Reject presentations with generators in positive degree.
    #[arg(long, global = true)]
    pub strict_nonpositive: bool,
    /// Write the structured report to this path.
    #[arg(long, global = true)]
    pub json: Option<std::path::PathBuf>,
    /// Compare cotangent pairings against the closed-form sign formulas.
    #[arg(long, global = true)]
    pub golden: bool,
}

#[derive(Args, Debug, Clone)]
pub struct Input {
    /// Presentation file; `-` reads standard input.
    pub file: String,
}

#[derive(Args, Debug, Clone)]
pub struct FormArg {
    /// Name of a form in the document, or a form literal such as `d x*d y`.
    /// Defaults to the first form in the document.
    #[arg(long)]
    pub form: Option<String>,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Parse a document and run the operator identity suite on it.
    Validate {
        #[command(flatten)]
        input: Input,
    },
    /// Dimensions of p-forms of degree n per weight.
    Forms {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        p: u32,
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
    },
    /// Homotopy groups of closed p-forms of degree n per weight.
    ClosedForms {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        p: u32,
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
        #[arg(long, default_value_t = 2)]
        i_max: i64,
    },
    /// Whether a p-form lifts to a closed form, and the space of lifts.
    Keys {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        form: FormArg,
        #[arg(long)]
        p: Option<u32>,
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
    },
    /// Certify a closed 2-form as n-shifted symplectic.
    Symplectic {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        form: FormArg,
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
        /// Also check acyclicity of the cone of Θ in weights [-k, k].
        #[arg(long)]
        cone: Option<i64>,
    },
    /// The n-shifted cotangent and its Liouville structure.
    Cotangent {
        #[command(flatten)]
        input: Input,
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
    },
    /// Derived critical locus of a function.
    Crit {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        function: String,
    },
    /// Lagrangian intersection of the zero section with the graph of df.
    Residue {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        function: String,
    },
    /// Model of the derived loop space.
    Loop {
        #[command(flatten)]
        input: Input,
    },
    /// Transgress a closed 2-form along the circle.
    Transgress {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        form: FormArg,
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
    },
    /// Closed forms on BG from invariant polynomials.
    Bg {
        /// Use gl_N with invariant dimensions computed up to weight 3.
        #[arg(long, conflicts_with = "dims")]
        gl: Option<usize>,
        /// Comma-separated invariant dimensions in weights 0, 1, 2, ...
        #[arg(long, value_delimiter = ',')]
        dims: Option<Vec<usize>>,
        #[arg(long)]
        p: u32,
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
    },
    /// Gram matrix of the trace pairing on gl_n.
    Trace {
        #[arg(long)]
        n: usize,
    },
    /// Symmetric obstruction complex of a derived critical locus.
    Obstruction {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        function: String,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Validate { .. } => "validate",
            Command::Forms { .. } => "forms",
            Command::ClosedForms { .. } => "closed-forms",
            Command::Keys { .. } => "keys",
            Command::Symplectic { .. } => "symplectic",
            Command::Cotangent { .. } => "cotangent",
            Command::Crit { .. } => "crit",
            Command::Residue { .. } => "residue",
            Command::Loop { .. } => "loop",
            Command::Transgress { .. } => "transgress",
            Command::Bg { .. } => "bg",
            Command::Trace { .. } => "trace",
            Command::Obstruction { .. } => "obstruction",
        }
    }

    pub fn input(&self) -> Option<&str> {
        match self {
            Command::Validate { input }
            | Command::Forms { input, .. }
            | Command::ClosedForms { input, .. }
            | Command::Keys { input, .. }
            | Command::Symplectic { input, .. }
            | Command::Cotangent { input, .. }
            | Command::Crit { input, .. }
            | Command::Residue { input, .. }
            | Command::Loop { input }
            | Command::Transgress { input, .. }
            | Command::Obstruction { input, .. } => Some(&input.file),
            Command::Bg { .. } | Command::Trace { .. } => None,
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("input error: {0}")]
    Input(String),
    #[error("verification failed: {0}")]
    Verification(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Verification(_) => 1,
        }
    }
}

impl From<DslError> for CliError {
    fn from(e: DslError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<SymplecticError> for CliError {
    fn from(e: SymplecticError) -> Self {
        match e {
            SymplecticError::ClosednessFailed(_)
            | SymplecticError::DegenerateForm(_)
            | SymplecticError::NotACocycle(_) => CliError::Verification(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<ConstructionError> for CliError {
    fn from(e: ConstructionError) -> Self {
        match e {
            ConstructionError::Symplectic(s) => s.into(),
            ConstructionError::GoldenMismatch(_)
            | ConstructionError::StrictnessViolated(_)
            | ConstructionError::ModelMismatch(_) => CliError::Verification(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    /// Everything except timing; byte-identical across reruns.
    pub body: Value,
    pub elapsed_ms: u128,
    pub verified: bool,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut v = self.body.clone();
        v["timing"] = json!({ "elapsed_ms": self.elapsed_ms as u64 });
        serde_json::to_string_pretty(&v).expect("json") + "\n"
    }

    /// The report without its timing block.
    pub fn deterministic_json(&self) -> String {
        serde_json::to_string_pretty(&self.body).expect("json")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        render(&self.body, 0, &mut out);
        out.push_str(&format!("elapsed: {} ms\n", self.elapsed_ms));
        out
    }
}

fn render(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                match x {
                    Value::Object(_) | Value::Array(_) if !is_flat(x) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render(x, indent + 1, out);
                    }
                    _ => out.push_str(&format!("{pad}{k}: {}\n", inline(x))),
                }
            }
        }
        Value::Array(a) => {
            for x in a {
                if is_flat(x) {
                    out.push_str(&format!("{pad}- {}\n", inline(x)));
                } else {
                    out.push_str(&format!("{pad}-\n"));
                    render(x, indent + 1, out);
                }
            }
        }
        _ => out.push_str(&format!("{pad}{}\n", inline(v))),
    }
}

fn is_scalar(v: &Value) -> bool {
    !v.is_object() && !v.is_array()
}

fn is_flat(v: &Value) -> bool {
    match v {
        Value::Array(a) => a.iter().all(|x| is_scalar(x) || is_flat_row(x)),
        Value::Object(m) => m.len() <= 6 && m.values().all(|x| is_scalar(x) || is_small_object(x)),
        _ => true,
    }
}

fn is_small_object(v: &Value) -> bool {
    matches!(v, Value::Object(m) if m.len() <= 2 && m.values().all(is_scalar))
}

fn is_flat_row(v: &Value) -> bool {
    matches!(v, Value::Array(a) if a.iter().all(|x| !x.is_object() && !x.is_array()))
}

fn inline(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(a) => format!("[{}]", a.iter().map(inline).collect::<Vec<_>>().join(", ")),
        Value::Object(m) => format!(
            "{{{}}}",
            m.iter().map(|(k, x)| format!("{k}: {}", inline(x))).collect::<Vec<_>>().join(", ")
        ),
        other => other.to_string(),
    }
}

/// The command and its arguments with the input path blanked, so that the
/// hash depends only on content.
pub fn canonical_args(cmd: &Command) -> String {
    let mut c = cmd.clone();
    match &mut c {
        Command::Validate { input }
        | Command::Forms { input, .. }
        | Command::ClosedForms { input, .. }
        | Command::Keys { input, .. }
        | Command::Symplectic { input, .. }
        | Command::Cotangent { input, .. }
        | Command::Crit { input, .. }
        | Command::Residue { input, .. }
        | Command::Loop { input }
        | Command::Transgress { input, .. }
        | Command::Obstruction { input, .. } => input.file.clear(),
        Command::Bg { .. } | Command::Trace { .. } => {}
    }
    format!("{c:?}")
}

pub fn input_hash(source: Option<&str>, cli: &Cli) -> String {
    let mut h = Sha256::new();
    h.update(source.unwrap_or("").as_bytes());
    h.update([0u8]);
    h.update(canonical_args(&cli.command).as_bytes());
    let f = &cli.flags;
    h.update(
        format!(
            "weight_max={} truncate={:?} strict={} golden={}",
            f.weight_max, f.truncate_degree, f.strict_nonpositive, f.golden
        )
        .as_bytes(),
    );
    hex::encode(h.finalize())
}

struct Ctx<'a> {
    flags: &'a Flags,
    doc: Option<DslDocument>,
}

impl Ctx<'_> {
    fn doc(&self) -> &DslDocument {
        self.doc.as_ref().expect("command requires a document")
    }

    fn pres(&self) -> &Presentation {
        &self.doc().presentation
    }

    fn weights(&self) -> Vec<u32> {
        (0..=self.flags.weight_max).collect()
    }

    fn function(&self, p: &Presentation, src: &str) -> Result<Polynomial, CliError> {
        Ok(eval_function(p, &parse_expr(src, false)?)?)
    }

    fn form(&self, dr: &DeRhamAlgebra, arg: &FormArg) -> Result<Polynomial, CliError> {
        let doc = self.doc();
        let expr = match &arg.form {
            Some(name) => match doc.forms.iter().find(|f| &f.name == name) {
                Some(f) => f.expr.clone(),
                None => parse_expr(name, true)?,
            },
            None => doc
                .forms
                .first()
                .map(|f| f.expr.clone())
                .ok_or_else(|| CliError::Input("no --form given and the document declares none".into()))?,
        };
        Ok(eval_form(dr, &expr)?)
    }
}

fn mode_text(m: Mode) -> String {
    match m {
        Mode::Weighted => "weighted".into(),
        Mode::Truncated(k) => format!("truncated({k})"),
    }
}

fn slice_text(s: Slice) -> Value {
    match s {
        Slice::Weight(w) => json!({ "weight": w }),
        Slice::Truncated(k) => json!({ "truncated": k }),
    }
}

fn presentation_value(p: &Presentation) -> Value {
    let gens: Vec<Value> = p
        .gens()
        .iter()
        .enumerate()
        .map(|(k, g)| {
            json!({
                "name": g.name,
                "degree": g.degree,
                "weight": g.weight,
                "parity": if g.odd { "odd" } else { "even" },
                "d": p.format(p.d_of(k)),
            })
        })
        .collect();
    json!({
        "generators": gens,
        "mode": mode_text(p.mode()),
        "strict_nonpositive": p.strict_nonpositive(),
        "certified": p.is_certified(),
    })
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

fn rep_value(dr: &DeRhamAlgebra, r: &ClosedFormRep) -> Value {
    json!({
        "p": r.p,
        "n": r.n,
        "slice": slice_text(r.slice),
        "components": r.components.iter().map(|c| dr.format(c)).collect::<Vec<_>>(),
    })
}

fn crit_value(c: &CritData, weight_max: u32) -> Value {
    json!({
        "function": c.base.format(&c.f),
        "presentation": presentation_value(&c.presentation),
        "sign": RCRIT_SIGN,
        "omega": rep_value(&c.dr, &c.omega),
        "h0": to_value(&c.h0.dims(weight_max)),
        "certificate": to_value(&c.certificate),
    })
}

/// Runs one command. `source` is the document text for commands that take
/// one.
pub fn run(cli: &Cli, source: Option<&str>) -> Result<Report, CliError> {
    let start = Instant::now();
    let flags = &cli.flags;
    let doc = match (cli.command.input(), source) {
        (Some(_), Some(src)) => Some(parse_with(
            src,
            ParseOptions {
                strict_nonpositive: flags.strict_nonpositive,
                truncate: flags.truncate_degree,
            },
        )?),
        (Some(_), None) => return Err(CliError::Input("missing document".into())),
        (None, _) => None,
    };
    let ctx = Ctx { flags, doc };
    let (result, verified, certified) = dispatch(&cli.command, &ctx)?;
    let mode = ctx.doc.as_ref().map(|d| mode_text(d.presentation.mode()));
    let certified = certified && ctx.doc.as_ref().is_none_or(|d| d.presentation.is_certified());
    let mut body = Map::new();
    body.insert("command".into(), json!({ "name": cli.command.name(), "args": canonical_args(&cli.command) }));
    body.insert("input_hash".into(), json!(input_hash(source, cli)));
    body.insert("mode".into(), json!(mode.unwrap_or_else(|| "weighted".into())));
    body.insert("certified".into(), json!(certified));
    body.insert("verified".into(), json!(verified));
    body.insert("result".into(), result);
    Ok(Report {
        body: Value::Object(body),
        elapsed_ms: start.elapsed().as_millis(),
        verified,
    })
}

fn dispatch(cmd: &Command, ctx: &Ctx) -> Result<(Value, bool, bool), CliError> {
    let wm = ctx.flags.weight_max;
    Ok(match cmd {
        Command::Validate { .. } => {
            let p = ctx.pres();
            let inv = check_invariants(p, InvariantOptions { max_weight: wm.min(4), ..Default::default() });
            let dr = DeRhamAlgebra::new(p);
            let forms: Vec<Value> = ctx
                .doc()
                .forms
                .iter()
                .map(|f| {
                    let v = eval_form(&dr, &f.expr).expect("checked by the parser");
                    json!({ "name": f.name, "value": dr.format(&v) })
                })
                .collect();
            let ok = inv.passed();
            (
                json!({ "presentation": presentation_value(p), "forms": forms, "invariants": to_value(&inv) }),
                ok,
                true,
            )
        }
        Command::Forms { p, n, .. } => {
            let pres = ctx.pres();
            let t = forms_space(pres, *p, *n, &ctx.weights())?;
            let dr = DeRhamAlgebra::new(pres);
            let cells: Vec<Value> = t
                .cells
                .iter()
                .map(|(s, c)| {
                    json!({
                        "slice": slice_text(*s),
                        "dim": c.dim,
                        "certified": c.certified,
                        "representatives": c.representatives.iter().map(|r| dr.format(&r.representative)).collect::<Vec<_>>(),
                    })
                })
                .collect();
            let all = t.cells.values().all(|c| c.certified);
            (json!({ "p": p, "n": n, "cells": cells }), true, all)
        }
        Command::ClosedForms { p, n, i_max, .. } => {
            let pres = ctx.pres();
            let t = closed_forms_space(pres, *p, *n, *i_max, &ctx.weights())?;
            let dr = DeRhamAlgebra::new(pres);
            let cells: Vec<Value> = t
                .cells
                .iter()
                .map(|((s, i), c)| json!({ "slice": slice_text(*s), "i": i, "dim": c.dim, "certified": c.certified }))
                .collect();
            let reps: Vec<Value> = t.representatives.values().flatten().map(|r| rep_value(&dr, r)).collect();
            let all = t.cells.values().all(|c| c.certified);
            (json!({ "p": p, "n": n, "cells": cells, "representatives": reps }), true, all)
        }
        Command::Keys { form, p, n, .. } => {
            let dr = DeRhamAlgebra::new(ctx.pres());
            let w = ctx.form(&dr, form)?;
            let p = match p {
                Some(p) => *p,
                None => dr.form_weight(&w).ok_or_else(|| CliError::Input("form is not of pure form weight".into()))?,
            };
            let class = FormClass { p, n: *n, slice: slice_of(&dr, &w), representative: w.clone() };
            let r = keys_report(&dr, &class)?;
            let key = r.key.as_ref().map(|k| rep_value(&dr, k));
            let certified = r.certified;
            (
                json!({ "form": dr.format(&w), "p": p, "n": n, "report": to_value(&r), "key": key }),
                true,
                certified,
            )
        }
        Command::Symplectic { form, n, cone, .. } => {
            let dr = DeRhamAlgebra::new(ctx.pres());
            let w = ctx.form(&dr, form)?;
            let rep = ClosedFormRep { p: 2, n: *n, slice: slice_of(&dr, &w), components: vec![w] };
            let weights: Option<Vec<i64>> = cone.map(|k| (-k..=k).collect());
            let cert = symplectic_certificate(&dr, &rep, weights.as_deref())?;
            let ok = cert.certified && cert.cone.as_ref().is_none_or(|c| c.acyclic);
            (json!({ "form": rep_value(&dr, &rep), "certificate": to_value(&cert) }), ok, rep.slice.certified())
        }
        Command::Cotangent { n, .. } => {
            let c = shifted_cotangent(ctx.pres(), *n)?;
            let (cert, golden) = cotangent_symplectic(&c, ctx.flags.golden)?;
            (
                json!({
                    "n": n,
                    "presentation": presentation_value(&c.total),
                    "liouville": c.dr.format(&c.liouville),
                    "golden": to_value(&golden),
                    "certificate": to_value(&cert),
                }),
                cert.certified && (!ctx.flags.golden || golden.matches),
                true,
            )
        }
        Command::Crit { function, .. } => {
            let p = ctx.pres();
            let f = ctx.function(p, function)?;
            let c = rcrit(p, &f)?;
            let ok = c.certificate.certified && c.omega.higher_components_vanish();
            (crit_value(&c, wm), ok, true)
        }
        Command::Residue { function, .. } => {
            let p = ctx.pres();
            let f = ctx.function(p, function)?;
            let data = crit_lagrangian_data(p, &f)?;
            let res = strict_lagrangian_residue(&data, None)?;
            let crit = rcrit(p, &f)?;
            let (image, ratio) = pushforward_to_rcrit(&res, &crit)?;
            let ok = res.certificate.certified && ratio.is_some();
            (
                json!({
                    "function": p.format(&f),
                    "model": presentation_value(res.dr.base()),
                    "residue": rep_value(&res.dr, &res.form),
                    "pushforward": crit.dr.format(&image),
                    "rcrit_omega": crit.dr.format(crit.omega.omega0()),
                    "ratio": ratio,
                    "certificate": to_value(&res.certificate),
                }),
                ok,
                true,
            )
        }
        Command::Loop { .. } => {
            let l = loop_model(ctx.pres())?;
            (json!({ "presentation": presentation_value(&l.presentation) }), true, true)
        }
        Command::Transgress { form, n, .. } => {
            let p = ctx.pres();
            let dr = DeRhamAlgebra::new(p);
            let w = ctx.form(&dr, form)?;
            let rep = ClosedFormRep { p: 2, n: *n, slice: slice_of(&dr, &w), components: vec![w] };
            let t = s1_transgression(p, &rep)?;
            (
                json!({
                    "input": rep_value(&dr, &rep),
                    "loop_model": presentation_value(&t.loop_model.presentation),
                    "form": rep_value(&t.dr, &t.form),
                    "tangent_ranks": to_value(&t.ranks),
                    "certificate": to_value(&t.certificate),
                }),
                t.certificate.certified && t.ranks.matches,
                t.form.slice.certified(),
            )
        }
        Command::Bg { gl, dims, p, n } => {
            let dims = match (gl, dims) {
                (_, Some(d)) => d.iter().enumerate().map(|(k, &x)| (k as u32, x)).collect(),
                (Some(g), None) => gl_invariant_dims(*g, 3),
                (None, None) => return Err(CliError::Input("bg needs --gl or --dims".into())),
            };
            let model = invariant_model(&dims)?;
            let closed = bg_closed_forms(&model, *p, *n)?;
            let forms: Vec<Value> = (0..=2)
                .map(|i| {
                    let c = bg_forms(&model, *p, *n, i);
                    json!({ "i": i, "dim": c.dim, "certified": c.certified })
                })
                .collect();
            (
                json!({ "invariant_dims": to_value(&dims), "p": p, "n": n, "closed_pi0": to_value(&closed), "forms": forms }),
                true,
                closed.certified,
            )
        }
        Command::Trace { n } => {
            let t = trace_form(*n);
            let ok = t.nondegenerate;
            (to_value(&t), ok, true)
        }
        Command::Obstruction { function, .. } => {
            let p = ctx.pres();
            let f = ctx.function(p, function)?;
            let c = rcrit(p, &f)?;
            let o = symmetric_obstruction(&c)?;
            let ok = o.symmetric;
            (json!({ "function": p.format(&f), "obstruction": to_value(&o) }), ok, true)
        }
    })
}

/// Reads the document (if the command takes one), runs it, and writes the
/// JSON report when requested. Returns the process exit code.
pub fn main_with(cli: &Cli, stdin: impl FnOnce() -> std::io::Result<String>) -> i32 {
    let source = match cli.command.input() {
        Some("-") => stdin().map(Some),
        Some(path) => std::fs::read_to_string(path).map(Some),
        None => Ok(None),
    };
    let source = match source {
        Ok(s) => s,
        Err(e) => {
            eprintln!("input error: {e}");
            return 2;
        }
    };
    match run(cli, source.as_deref()) {
        Ok(report) => {
            print!("{}", report.to_text());
            if let Some(path) = &cli.flags.json {
                if let Err(e) = std::fs::write(path, report.to_json()) {
                    eprintln!("cannot write {}: {e}", path.display());
                    return 2;
                }
            }
            if report.verified {
                0
            } else {
                eprintln!("verification failed");
                1
            }
        }
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}

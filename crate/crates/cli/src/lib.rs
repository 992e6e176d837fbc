//! Command dispatch and report formatting for the `baut` binary.

use std::borrow::Cow;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};

use baut_core::cohomology::{borel_report, cdga_cohomology, f0_certify, formal_dimension, halperin_test};
use baut_core::cstar::{cstar_model, FiniteDgl};
use baut_core::der::{pi_aut_dims, DerBasis, DerComplex};
use baut_core::fibration::{
    base_part, fiber_dims_formula, pi_odd_vanishing, rel_der_homology, section_exists, strict_projection_check,
    FibrationComplexes, ProjectionCheck, RhoImage,
};
use baut_core::model::{diff_table, Separability};
use baut_core::obstruction::{obstruction_class, skeletal_lift_scan, CellObstruction, ScanReport};
use baut_core::{corpus, dsl, Derivation, FreeAlgebra, RelativeModel, SullivanModel, Workspace};

pub const SIGN_CONVENTION_NOTE: &str = "∂σ = d∘σ − (−1)^|σ| σ∘d and [σ,τ] = σ∘τ − (−1)^(|σ||τ|) τ∘σ; \
the obstruction element is τ(h_Y(u)) − h_X(∂u). Signs of classes depend on these conventions, \
zero-verdicts do not.";

#[derive(Parser, Debug, Clone)]
#[command(name = "baut", version, about = "Derivation Lie algebras of Sullivan models and induced maps of Baut1")]
pub struct Cli {
    /// Model file to load; repeat for several files. Defaults to the bundled examples.
    #[arg(long = "input", short = 'i', global = true)]
    pub inputs: Vec<PathBuf>,

    /// Emit a JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,

    #[command(subcommand)]
    pub command: Command,
}

/// An inclusive degree range written `a..b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DegreeRange {
    pub start: i64,
    pub end: i64,
}

impl FromStr for DegreeRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (a, b) = s.split_once("..").ok_or_else(|| format!("expected a..b, found {s}"))?;
        let b = b.strip_prefix('=').unwrap_or(b);
        let start = a.trim().parse().map_err(|_| format!("bad range start {a}"))?;
        let end = b.trim().parse().map_err(|_| format!("bad range end {b}"))?;
        if start > end {
            return Err(format!("empty range {s}"));
        }
        Ok(DegreeRange { start, end })
    }
}

#[derive(Args, Debug, Clone)]
pub struct ModelArgs {
    /// Name of a model, a relative model or a total space.
    #[arg(long)]
    pub model: String,
    #[arg(long)]
    pub range: Option<DegreeRange>,
}

#[derive(Args, Debug, Clone)]
pub struct RelativeArgs {
    #[arg(long)]
    pub relative: String,
    #[arg(long)]
    pub range: Option<DegreeRange>,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Check every declared object, or one model.
    Validate {
        #[arg(long)]
        model: Option<String>,
    },
    /// Elementary derivation bases by degree.
    Basis(ModelArgs),
    /// Homology of the derivation complex.
    Homology(ModelArgs),
    /// Dimensions of π_n(Baut1 X)_Q.
    PiAut(ModelArgs),
    /// Separability and the strict projection check.
    Separable(RelativeArgs),
    /// The connecting map on a basis of base homology.
    Delta(RelativeArgs),
    /// The section criterion δ_f = 0.
    Section(RelativeArgs),
    /// Homology of the fiber part, π_{n+1}(Baut1 f)_Q.
    RelHomology(RelativeArgs),
    /// Fiber dimension formula against the ρ-image subcomplex and direct homology.
    FiberDims {
        #[command(flatten)]
        rel: RelativeArgs,
        #[arg(long)]
        cutoff: Option<i64>,
    },
    /// Vanishing of π_odd(Baut1 f)_Q.
    PiOdd(RelativeArgs),
    /// F0 certification and the Halperin derivation test.
    Halperin {
        #[arg(long)]
        model: String,
    },
    /// Truncated cochain model of the derivation Lie algebra.
    Cstar {
        #[arg(long)]
        model: String,
        #[arg(long)]
        cutoff: i64,
        /// Use the full derivation complex rather than its homology.
        #[arg(long)]
        full: bool,
    },
    /// Bounded cohomology of a Borel extension.
    Borel {
        #[arg(long)]
        borel: String,
        #[arg(long)]
        cutoff: Option<i64>,
    },
    /// Lifting obstructions of a problem, cell by cell.
    Obstruct {
        #[arg(long)]
        relative: Option<String>,
        #[arg(long)]
        problem: String,
        /// Allow the π_odd certificate to settle the problem without evaluating cells.
        #[arg(long)]
        scan: bool,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Validate { .. } => "validate",
            Command::Basis(_) => "basis",
            Command::Homology(_) => "homology",
            Command::PiAut(_) => "pi-aut",
            Command::Separable(_) => "separable",
            Command::Delta(_) => "delta",
            Command::Section(_) => "section",
            Command::RelHomology(_) => "rel-homology",
            Command::FiberDims { .. } => "fiber-dims",
            Command::PiOdd(_) => "pi-odd",
            Command::Halperin { .. } => "halperin",
            Command::Cstar { .. } => "cstar",
            Command::Borel { .. } => "borel",
            Command::Obstruct { .. } => "obstruct",
        }
    }
}

/// Why a command produced no report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Failure {
    /// Input problems: parse errors, unknown names, unreadable files.
    Diagnostic(String),
    /// A mathematical precondition failed, named after the module error.
    Precondition(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Diagnostic(_) => 1,
            Failure::Precondition(_) => 2,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Diagnostic(m) | Failure::Precondition(m) => m,
        }
    }
}

fn pre<E: std::fmt::Display + std::fmt::Debug>(e: E) -> Failure {
    let name = format!("{e:?}");
    let name = name.split(['(', ' ', '{']).next().unwrap_or_default().to_string();
    Failure::Precondition(format!("{name}: {e}"))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: String,
    pub inputs: Vec<String>,
    pub text: String,
    pub results: Value,
    pub witnesses: Vec<String>,
    pub verdicts: Map<String, Value>,
}

impl Report {
    fn new(command: &str) -> Self {
        Report {
            command: command.to_string(),
            inputs: Vec::new(),
            text: String::new(),
            results: Value::Null,
            witnesses: Vec::new(),
            verdicts: Map::new(),
        }
    }

    fn line(&mut self, s: impl AsRef<str>) {
        self.text.push_str(s.as_ref());
        self.text.push('\n');
    }

    fn verdict(&mut self, key: &str, value: impl Into<Value>) {
        self.verdicts.insert(key.to_string(), value.into());
    }

    pub fn to_json(&self) -> Value {
        json!({
            "schema": 1,
            "command": self.command,
            "inputs": self.inputs,
            "results": self.results,
            "witnesses": self.witnesses,
            "verdicts": self.verdicts,
            "signConventionNote": SIGN_CONVENTION_NOTE,
        })
    }
}

/// Reads and parses the input files, or falls back to the bundled corpus.
pub fn load(inputs: &[PathBuf]) -> Result<(Cow<'static, Workspace>, Vec<String>), Failure> {
    if inputs.is_empty() {
        return Ok((Cow::Borrowed(corpus::workspace()), vec!["<bundled examples>".to_string()]));
    }
    let mut sources = Vec::new();
    for p in inputs {
        let text = std::fs::read_to_string(p).map_err(|e| Failure::Diagnostic(format!("{}: {e}", p.display())))?;
        sources.push((p.display().to_string(), text));
    }
    let files: Vec<(&str, &str)> = sources.iter().map(|(n, t)| (n.as_str(), t.as_str())).collect();
    let ws = dsl::parse_files(&files).map_err(|d| Failure::Diagnostic(d.to_string()))?;
    Ok((Cow::Owned(ws), sources.into_iter().map(|(n, _)| n).collect()))
}

/// Process outcome: exit code plus what goes to stdout and stderr.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn execute(cli: &Cli) -> Outcome {
    let result = load(&cli.inputs).and_then(|(ws, inputs)| {
        let mut report = run(&cli.command, &ws)?;
        report.inputs = inputs;
        Ok(report)
    });
    match result {
        Ok(report) => {
            let stdout = if cli.json {
                let mut s = serde_json::to_string_pretty(&report.to_json()).expect("report serializes");
                s.push('\n');
                s
            } else {
                report.text
            };
            Outcome {
                code: 0,
                stdout,
                stderr: String::new(),
            }
        }
        Err(f) => Outcome {
            code: f.exit_code(),
            stdout: String::new(),
            stderr: format!("error: {}\n", f.message()),
        },
    }
}

fn model<'a>(ws: &'a Workspace, name: &str) -> Result<&'a SullivanModel, Failure> {
    ws.model(name)
        .or_else(|| ws.relative(name).map(|r| r.total()))
        .ok_or_else(|| Failure::Diagnostic(format!("no model named {name}")))
}

fn relative<'a>(ws: &'a Workspace, name: &str) -> Result<&'a RelativeModel, Failure> {
    ws.relative(name).ok_or_else(|| Failure::Diagnostic(format!("no relative model named {name}")))
}

fn range_or(r: Option<DegreeRange>, start: i64, end: i64) -> std::ops::RangeInclusive<i64> {
    match r {
        Some(r) => r.start..=r.end,
        None => start..=end,
    }
}

fn bracketed(d: &Derivation, alg: &FreeAlgebra) -> String {
    format!("[{}]", d.display(alg))
}

pub fn run(cmd: &Command, ws: &Workspace) -> Result<Report, Failure> {
    let mut r = Report::new(cmd.name());
    match cmd {
        Command::Validate { model: name } => validate(&mut r, ws, name.as_deref())?,
        Command::Basis(a) => {
            let m = model(ws, &a.model)?;
            let alg = m.algebra();
            let mut rows = Vec::new();
            r.line(format!("Der_n({})", a.model));
            for n in range_or(a.range, 1, m.max_degree()).rev() {
                let labels = DerBasis::new(m, n, |_| true).labels(alg);
                if labels.is_empty() {
                    continue;
                }
                r.line(format!("{n:>3} | {}", labels.join(" ")));
                rows.push(json!({"degree": n, "basis": labels}));
            }
            r.results = json!({ "degrees": rows });
        }
        Command::Homology(a) => {
            let m = model(ws, &a.model)?;
            let alg = m.algebra();
            let cx = DerComplex::full(m);
            let mut rows = Vec::new();
            let mut nonzero = Vec::new();
            for n in range_or(a.range, 1, m.max_degree()) {
                let reps: Vec<String> = cx.homology(n).iter().map(|c| c.representative.display(alg)).collect();
                if !reps.is_empty() {
                    r.line(format!("H_{n} = Q{{{}}}", reps.join(", ")));
                    nonzero.push(n);
                    r.witnesses.extend(reps.iter().cloned());
                }
                rows.push(json!({"degree": n, "dim": reps.len(), "representatives": reps}));
            }
            if nonzero.is_empty() {
                r.line("H_* = 0 in the requested range");
            }
            r.results = json!({ "degrees": rows });
            r.verdict("nonzeroDegrees", nonzero);
        }
        Command::PiAut(a) => {
            let m = model(ws, &a.model)?;
            let dims = pi_aut_dims(m, range_or(a.range, 2, m.max_degree() + 1));
            for (n, d) in &dims {
                r.line(format!("π_{n}(Baut1 X)_Q = {d}"));
            }
            r.results = json!({"degrees": dims.iter().map(|(n, d)| json!({"degree": n, "dim": d})).collect::<Vec<_>>()});
        }
        Command::Separable(a) => separable(&mut r, relative(ws, &a.relative)?),
        Command::Delta(a) => delta(&mut r, relative(ws, &a.relative)?)?,
        Command::Section(a) => {
            let rm = relative(ws, &a.relative)?;
            let alg = rm.total().algebra();
            let rep = section_exists(rm).map_err(pre)?;
            if rep.exists {
                r.line(format!("section EXISTS: δ_f = 0 on H_2..H_{}", rep.scanned_up_to));
            } else {
                r.line("section NONE");
                for (class, image) in &rep.failing {
                    let w = format!("δ_f[{}] = {}", class.representative.display(alg), bracketed(image, alg));
                    r.line(format!("  {w}"));
                    r.witnesses.push(w);
                }
            }
            for class in &rep.degree_one {
                r.line(format!("  degree-1 class {} not tested", class.representative.display(alg)));
            }
            r.results = json!({"scannedUpTo": rep.scanned_up_to, "degreeOneClasses": rep.degree_one.len()});
            r.verdict("sectionExists", rep.exists);
        }
        Command::RelHomology(a) => {
            let rm = relative(ws, &a.relative)?;
            let alg = rm.total().algebra();
            let mut rows = Vec::new();
            for n in range_or(a.range, 1, rm.total().max_degree()) {
                let (dim, classes) = rel_der_homology(rm, n);
                let reps: Vec<String> = classes.iter().map(|c| c.representative.display(alg)).collect();
                if dim > 0 {
                    r.line(format!("H_{n} = Q{{{}}}  (π_{}(Baut1 f)_Q)", reps.join(", "), n + 1));
                    r.witnesses.extend(reps.iter().cloned());
                }
                rows.push(json!({"degree": n, "dim": dim, "representatives": reps}));
            }
            if r.witnesses.is_empty() {
                r.line("H_* = 0 in the requested range");
            }
            r.results = json!({ "degrees": rows });
        }
        Command::FiberDims { rel, cutoff } => fiber_dims(&mut r, relative(ws, &rel.relative)?, rel.range, *cutoff)?,
        Command::PiOdd(a) => {
            let rm = relative(ws, &a.relative)?;
            let alg = rm.total().algebra();
            let rep = pi_odd_vanishing(rm).map_err(pre)?;
            if rep.vanishes {
                r.line("π_odd(Baut1 f)_Q = 0: certified; r0(Y) <= r0(X) hypothesis satisfied");
            } else {
                r.line("π_odd(Baut1 f)_Q != 0: not certified");
                for c in &rep.witnesses {
                    let w = c.representative.display(alg);
                    r.line(format!("  H_{} witness {} (π_{})", c.degree, w, c.degree + 1));
                    r.witnesses.push(w);
                }
            }
            r.results = json!({"scannedUpTo": rep.scanned_up_to});
            r.verdict("piOddVanishes", rep.vanishes);
        }
        Command::Halperin { model: name } => {
            let m = model(ws, name)?;
            let f0 = f0_certify(m).map_err(pre)?;
            r.line(format!(
                "F0: {} (formal dimension {}, odd cohomology vanishes: {}, vanishes past top: {})",
                if f0.is_f0 { "yes" } else { "no" },
                f0.formal_dimension,
                f0.odd_vanishes,
                f0.vanishes_past_top
            ));
            let h = halperin_test(m).map_err(pre)?;
            if h.holds {
                r.line("Halperin: holds, no negative-degree derivations of H");
            } else {
                r.line("Halperin: fails");
            }
            if let Some(w) = &h.witness {
                let ring = baut_core::cohomology::FiniteGradedRing::from_pure_model(m).map_err(pre)?;
                for theta in &w.witnesses {
                    let images: Vec<String> = theta.iter().map(|e| ring.algebra().display(e)).collect();
                    let s = format!("degree -{} derivation with images ({})", w.k, images.join(", "));
                    r.line(format!("  {s}"));
                    r.witnesses.push(s);
                }
            }
            r.results = json!({
                "cohomology": f0.table.dims,
                "negativeDerivations": h.dims.iter().map(|(k, d)| json!({"k": k, "dim": d})).collect::<Vec<_>>(),
            });
            r.verdict("f0", f0.is_f0);
            r.verdict("halperin", h.holds);
        }
        Command::Cstar { model: name, cutoff, full } => {
            let m = model(ws, name)?;
            let dgl = if *full {
                FiniteDgl::from_der(m, *cutoff - 1).map_err(pre)?
            } else {
                FiniteDgl::homology_of(m, *cutoff - 1)
            };
            let cs = cstar_model(&dgl, *cutoff).map_err(pre)?;
            r.line(format!("C*({}) truncated at degree {}", name, cutoff));
            let table = diff_table(&cs.model);
            for g in cs.model.generators() {
                r.line(format!("  {}:{}  D = {}", g.name, g.degree, table[&g.name]));
            }
            let defects: Vec<String> =
                cs.d_squared_defects().iter().map(|&i| cs.model.generators()[i].name.clone()).collect();
            if defects.is_empty() {
                r.line("D² = 0");
            } else {
                r.line(format!("D² ≠ 0 past the cutoff on {}", defects.join(", ")));
            }
            let h = cdga_cohomology(&cs.model, *cutoff);
            r.line(format!("cohomology dims 0..={}: {:?}", cutoff, h.dims));
            r.results = json!({"differential": table, "cohomology": h.dims});
            r.verdict("dSquaredZero", defects.is_empty());
            r.witnesses = defects;
        }
        Command::Borel { borel, cutoff } => {
            let ext = ws
                .borel(borel)
                .ok_or_else(|| Failure::Diagnostic(format!("no Borel extension named {borel}")))?;
            let cutoff = match cutoff {
                Some(c) => *c,
                None => {
                    let n = formal_dimension(ext.base());
                    if !ext.base().classify().pure || n <= 0 {
                        return Err(Failure::Precondition(
                            "CutoffRequired: base is not pure with positive formal dimension; pass --cutoff".into(),
                        ));
                    }
                    2 * n
                }
            };
            let rep = borel_report(ext, cutoff);
            r.line(format!("H^*({} Borel, rank {}) up to degree {}", borel, ext.rank(), cutoff));
            for (n, d) in rep.table.dims.iter().enumerate() {
                r.line(format!("  H^{n} = {d}"));
            }
            if rep.growth_at_cutoff {
                r.line("cohomology reaches the cutoff: unbounded growth likely, action not free");
            } else {
                r.line("cohomology vanishes near the cutoff");
            }
            r.results = json!({"cutoff": cutoff, "cohomology": rep.table.dims});
            r.verdict("growthAtCutoff", rep.growth_at_cutoff);
        }
        Command::Obstruct { relative: rel, problem, scan } => obstruct(&mut r, ws, rel.as_deref(), problem, *scan)?,
    }
    Ok(r)
}

fn validate(r: &mut Report, ws: &Workspace, only: Option<&str>) -> Result<(), Failure> {
    let mut rows = Vec::new();
    let mut all_ok = true;
    let mut check = |r: &mut Report, kind: &str, name: &str, m: &SullivanModel| {
        let v = m.validate();
        let c = m.classify();
        all_ok &= v.passed();
        r.line(format!(
            "{kind} {name}: {}{}{}",
            if v.passed() { "valid" } else { "INVALID" },
            if v.minimal() { ", minimal" } else { ", not minimal" },
            if c.pure { ", pure" } else { "" }
        ));
        for f in v.failures() {
            r.line(format!("  {f}"));
        }
        rows.push(json!({"kind": kind, "name": name, "valid": v.passed(), "minimal": v.minimal(), "pure": c.pure}));
    };
    if let Some(name) = only {
        check(r, "model", name, model(ws, name)?);
    } else {
        for m in &ws.models {
            check(r, "model", &m.name, &m.model);
        }
        for rel in &ws.relatives {
            check(r, "relative", &rel.name, rel.model.total());
        }
        for q in &ws.quillens {
            r.line(format!("quillen {}: valid, cells: {}", q.name, q.data.cells().len()));
        }
        for b in &ws.borels {
            check(r, "borel", &b.name, b.ext.total());
        }
        for p in &ws.problems {
            r.line(format!("problem {}: on {} with {}", p.name, p.relative, p.quillen));
        }
    }
    r.results = json!({ "objects": rows });
    r.verdict("valid", all_ok);
    Ok(())
}

fn separable(r: &mut Report, rm: &RelativeModel) {
    let alg = rm.total().algebra();
    let g = rm.total().generators();
    let sep = rm.separability();
    match &sep {
        Separability::Separable => r.line("separable: min|W| >= max|V|"),
        Separability::NotSeparable { fiber, base } => r.line(format!(
            "not separable: |{}| = {} < |{}| = {}",
            g[*fiber].name, g[*fiber].degree, g[*base].name, g[*base].degree
        )),
    }
    match strict_projection_check(rm) {
        ProjectionCheck::Pass { derivations, brackets } => {
            r.line(format!(
                "b_f is a DGL map: PASS ({derivations} derivations, {brackets} brackets)"
            ));
            r.verdict("projectionIsDglMap", true);
        }
        ProjectionCheck::Fail {
            left, right, bracket, ..
        } => {
            let w = format!(
                "[{}, {}] = {} projects to {} while [b_f{}, b_f{}] = 0",
                left.display(alg),
                right.display(alg),
                bracket.display(alg),
                base_part(rm, &bracket).display(alg),
                left.display(alg),
                right.display(alg)
            );
            r.line(format!("b_f is a DGL map: FAIL; {w}"));
            r.witnesses.push(w);
            r.verdict("projectionIsDglMap", false);
        }
    }
    r.verdict("separable", sep.is_separable());
    r.results = json!({});
}

fn delta(r: &mut Report, rm: &RelativeModel) -> Result<(), Failure> {
    section_exists(rm).map_err(pre)?;
    let alg = rm.total().algebra();
    let cx = FibrationComplexes::new(rm);
    let mut rows = Vec::new();
    let mut all_zero = true;
    for n in 2..=rm.base().max_degree() {
        for class in cx.base().homology(n) {
            let d = cx.delta(&class.representative).map_err(pre)?;
            let src = class.representative.display(alg);
            let line = if d.zero {
                format!("δ_f[{}] = 0", src)
            } else {
                all_zero = false;
                format!("δ_f[{}] = {} NONZERO", src, bracketed(&d.image, alg))
            };
            r.line(&line);
            if !d.zero {
                r.witnesses.push(line);
            }
            rows.push(json!({"degree": n, "class": src, "image": d.image.display(alg), "zero": d.zero}));
        }
    }
    if rows.is_empty() {
        r.line("H_{>=2}(Der ΛV) = 0; δ_f = 0");
    }
    r.results = json!({ "classes": rows });
    r.verdict("deltaZero", all_zero);
    Ok(())
}

fn fiber_dims(
    r: &mut Report,
    rm: &RelativeModel,
    range: Option<DegreeRange>,
    cutoff: Option<i64>,
) -> Result<(), Failure> {
    let top = rm.fiber_generators().iter().map(|g| g.degree).max().unwrap_or(0);
    let cutoff = cutoff.unwrap_or(top);
    let rho = RhoImage::new(rm, cutoff).map_err(pre)?;
    let mut rows = Vec::new();
    let mut agree = true;
    r.line("  n  formula  rho-chain  rho-homology  fiber-homology");
    for n in range_or(range, 1, top) {
        let formula = fiber_dims_formula(rm, n, cutoff).map_err(pre)?;
        let chain = rho.chain_dim(n);
        let rho_h = rho.homology_dim(n);
        let direct = rel_der_homology(rm, n).0;
        agree &= formula == chain && rho_h == direct;
        r.line(format!("{n:>3}  {formula:>7}  {chain:>9}  {rho_h:>12}  {direct:>14}"));
        rows.push(json!({"degree": n, "formula": formula, "rhoChain": chain, "rhoHomology": rho_h, "fiberHomology": direct}));
    }
    r.line(format!("ρ-image is a subcomplex: {}", rho.is_subcomplex()));
    r.results = json!({"cutoff": cutoff, "degrees": rows});
    r.verdict("formulaAgrees", agree);
    r.verdict("rhoSubcomplex", rho.is_subcomplex());
    Ok(())
}

fn cell_line(r: &mut Report, names: &[String], alg: &FreeAlgebra, ob: &CellObstruction) -> Value {
    let class = bracketed(&ob.class.element, alg);
    let name = &names[ob.cell];
    let line = if ob.class.zero {
        let lift = ob.lift.as_ref().map(|h| h.display(alg)).unwrap_or_default();
        let verified = ob.lift_verified == Some(true);
        format!(
            "cell {name}: class {class} ZERO; lift h({name}) = {lift} {}",
            if verified { "verified" } else { "FAILED verification" }
        )
    } else {
        r.witnesses.push(ob.class.element.display(alg));
        format!("cell {name}: class {class} NONZERO; no lift")
    };
    r.line(line);
    json!({
        "cell": name,
        "degree": ob.class.degree,
        "class": ob.class.element.display(alg),
        "zero": ob.class.zero,
        "lift": ob.lift.as_ref().map(|h| h.display(alg)),
        "liftVerified": ob.lift_verified,
    })
}

fn obstruct(r: &mut Report, ws: &Workspace, rel: Option<&str>, problem: &str, scan: bool) -> Result<(), Failure> {
    let p = ws
        .problem(problem)
        .ok_or_else(|| Failure::Diagnostic(format!("no problem named {problem}")))?;
    if let Some(name) = rel {
        if name != p.relative {
            return Err(Failure::Diagnostic(format!(
                "problem {problem} is posed on {}, not {name}",
                p.relative
            )));
        }
    }
    let rm = relative(ws, &p.relative)?;
    let q = ws
        .quillen(&p.quillen)
        .ok_or_else(|| Failure::Diagnostic(format!("no quillen model named {}", p.quillen)))?;
    let alg = rm.total().algebra();
    let names: Vec<String> = q.generators().iter().map(|g| g.name.clone()).collect();

    let report = if scan {
        skeletal_lift_scan(rm, q, &p.problem).map_err(pre)?
    } else {
        let mut hx = p.problem.hx.clone();
        let mut cells = Vec::new();
        let mut blocked_at = None;
        for &c in q.cells() {
            let ob = obstruction_class(rm, q, &hx, &p.problem.hy, c).map_err(pre)?;
            let lift = ob.lift.clone();
            cells.push(ob);
            match lift {
                Some(h) => {
                    hx.images.insert(c, h);
                }
                None => {
                    blocked_at = Some(c);
                    break;
                }
            }
        }
        ScanReport {
            certified: false,
            cells,
            blocked_at,
        }
    };
    let mut rows = Vec::new();
    if report.certified {
        r.line("π_odd(Baut1 f)_Q = 0 and every cell is odd: all obstructions vanish; liftable");
    }
    for ob in &report.cells {
        rows.push(cell_line(r, &names, alg, ob));
    }
    if !report.certified {
        r.line(if report.liftable() { "liftable" } else { "not liftable" });
    }
    r.results = json!({"cells": rows, "blockedAt": report.blocked_at.map(|c| names[c].clone())});
    r.verdict("certified", report.certified);
    r.verdict("liftable", report.liftable());
    Ok(())
}

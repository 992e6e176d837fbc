//! A small text format for models, fibrations, Quillen data, torus actions
//! and lifting problems.
//!
//! ```text
//! model S4 { gen x:4; gen y:7; d y = x^2; }
//! relative F : S3 -> X { fiber w1:5; fiber w2:7; D w2 = v*w1; }
//! quillen L { gen u1:1; gen u2:3; d u2 = [u1,u1]; cell u2; }
//! problem P on F with L { hy u2 = (v,1); }
//! borel B on S3 rank 1 { D v = t1^2; }
//! ```
//!
//! Omitted differentials are zero, except in a `borel` block where an omitted
//! `D v` means `d v`. Omitted map images are zero.

mod lexer;
mod parser;
mod resolve;

use std::fmt;

use crate::cohomology::BorelExtension;
use crate::model::{RelativeModel, SullivanModel};
use crate::obstruction::{LiftingProblem, QuillenData};

pub use lexer::{lex, Tok, Token};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Span {
    pub line: usize,
    pub col: usize,
}

/// A located error. `token` is the offending text as written.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub file: Option<String>,
    pub span: Span,
    pub token: String,
    pub message: String,
    pub expected: Vec<String>,
}

impl Diagnostic {
    pub fn new(span: Span, token: impl Into<String>, message: &str) -> Self {
        Diagnostic {
            file: None,
            span,
            token: token.into(),
            message: message.to_string(),
            expected: Vec::new(),
        }
    }

    pub fn expecting(mut self, hints: &[&str]) -> Self {
        self.expected = hints.iter().map(|s| s.to_string()).collect();
        self
    }

    fn in_file(mut self, file: &str) -> Self {
        self.file = Some(file.to_string());
        self
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let file = self.file.as_deref().unwrap_or("<input>");
        write!(
            f,
            "{}:{}:{}: {} (found `{}`)",
            file, self.span.line, self.span.col, self.message, self.token
        )?;
        if !self.expected.is_empty() {
            write!(f, "; expected one of: {}", self.expected.join(", "))?;
        }
        Ok(())
    }
}

impl std::error::Error for Diagnostic {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedModel {
    pub name: String,
    pub model: SullivanModel,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedRelative {
    pub name: String,
    pub base: String,
    pub total: String,
    pub model: RelativeModel,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedQuillen {
    pub name: String,
    pub data: QuillenData,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedBorel {
    pub name: String,
    pub base: String,
    pub ext: BorelExtension,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedProblem {
    pub name: String,
    pub relative: String,
    pub quillen: String,
    pub problem: LiftingProblem,
}

/// Everything declared in one or more input files, fully resolved.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Workspace {
    pub models: Vec<NamedModel>,
    pub relatives: Vec<NamedRelative>,
    pub quillens: Vec<NamedQuillen>,
    pub borels: Vec<NamedBorel>,
    pub problems: Vec<NamedProblem>,
}

impl Workspace {
    /// A plain model, or the total space of a relative model.
    pub fn model(&self, name: &str) -> Option<&SullivanModel> {
        self.models
            .iter()
            .find(|m| m.name == name)
            .map(|m| &m.model)
            .or_else(|| self.relatives.iter().find(|r| r.total == name).map(|r| r.model.total()))
    }

    pub fn relative(&self, name: &str) -> Option<&RelativeModel> {
        self.relatives.iter().find(|r| r.name == name).map(|r| &r.model)
    }

    pub fn quillen(&self, name: &str) -> Option<&QuillenData> {
        self.quillens.iter().find(|q| q.name == name).map(|q| &q.data)
    }

    pub fn borel(&self, name: &str) -> Option<&BorelExtension> {
        self.borels.iter().find(|b| b.name == name).map(|b| &b.ext)
    }

    pub fn problem(&self, name: &str) -> Option<&NamedProblem> {
        self.problems.iter().find(|p| p.name == name)
    }

    /// Source text that parses back to an equal workspace.
    pub fn to_source(&self) -> String {
        let mut out = String::new();
        for m in &self.models {
            out.push_str(&format!("model {} {{\n", m.name));
            for g in m.model.generators() {
                out.push_str(&format!("  gen {}:{};\n", g.name, g.degree));
            }
            for (i, g) in m.model.generators().iter().enumerate() {
                let img = m.model.diff_of(i);
                if !img.is_zero() {
                    out.push_str(&format!("  d {} = {};\n", g.name, m.model.algebra().display(img)));
                }
            }
            out.push_str("}\n\n");
        }
        for r in &self.relatives {
            let total = r.model.total();
            out.push_str(&format!("relative {} : {} -> {} {{\n", r.name, r.base, r.total));
            for g in r.model.fiber_generators() {
                out.push_str(&format!("  fiber {}:{};\n", g.name, g.degree));
            }
            for i in r.model.fiber_indices() {
                let img = total.diff_of(i);
                if !img.is_zero() {
                    out.push_str(&format!(
                        "  D {} = {};\n",
                        total.generators()[i].name,
                        total.algebra().display(img)
                    ));
                }
            }
            out.push_str("}\n\n");
        }
        for q in &self.quillens {
            out.push_str(&format!("quillen {} {{\n", q.name));
            for g in q.data.generators() {
                out.push_str(&format!("  gen {}:{};\n", g.name, g.degree));
            }
            for (i, g) in q.data.generators().iter().enumerate() {
                let e = q.data.diff_of(i);
                if *e != crate::obstruction::LieExpr::Zero {
                    out.push_str(&format!("  d {} = {};\n", g.name, e.display(q.data.generators())));
                }
            }
            for &c in q.data.cells() {
                out.push_str(&format!("  cell {};\n", q.data.generators()[c].name));
            }
            out.push_str("}\n\n");
        }
        for b in &self.borels {
            let total = b.ext.total();
            out.push_str(&format!("borel {} on {} rank {} {{\n", b.name, b.base, b.ext.rank()));
            for (i, img) in b.ext.images().iter().enumerate() {
                out.push_str(&format!(
                    "  D {} = {};\n",
                    total.generators()[i].name,
                    total.algebra().display(img)
                ));
            }
            out.push_str("}\n\n");
        }
        for p in &self.problems {
            let rm = self.relative(&p.relative).expect("resolved problem names a relative model");
            let q = self.quillen(&p.quillen).expect("resolved problem names Quillen data");
            let base = rm.base();
            out.push_str(&format!("problem {} on {} with {} {{\n", p.name, p.relative, p.quillen));
            for (&u, d) in &p.problem.hx.images {
                out.push_str(&format!(
                    "  hx {} = {};\n",
                    q.generators()[u].name,
                    d.display(rm.total().algebra())
                ));
            }
            for (&u, d) in &p.problem.hy.images {
                out.push_str(&format!("  hy {} = {};\n", q.generators()[u].name, d.display(base.algebra())));
            }
            out.push_str("}\n\n");
        }
        out
    }
}

/// Parses and resolves a single source text.
pub fn parse(src: &str) -> Result<Workspace, Diagnostic> {
    parse_files(&[("<input>", src)])
}

/// Parses several files and resolves them together, so a declaration may
/// refer to names from any file.
pub fn parse_files(files: &[(&str, &str)]) -> Result<Workspace, Diagnostic> {
    let mut decls = Vec::new();
    for (name, src) in files {
        let toks = lex(src).map_err(|d| d.in_file(name))?;
        let parsed = parser::Parser::new(toks).parse_all().map_err(|d| d.in_file(name))?;
        decls.extend(parsed.into_iter().map(|d| (name.to_string(), d)));
    }
    resolve::resolve(decls)
}

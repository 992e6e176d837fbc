//! Name resolution and semantic checks, producing core types.

use std::collections::BTreeMap;

use num_traits::One;

use super::parser::{Assign, DTerm, Decl, GenDecl, Ident, LExpr, PExpr};
use super::{Diagnostic, NamedBorel, NamedModel, NamedProblem, NamedQuillen, NamedRelative, Span, Workspace};
use crate::algebra::{AlgElement, FreeAlgebra, Generator, Homogeneity};
use crate::cohomology::BorelExtension;
use crate::der::Derivation;
use crate::model::{RelativeModel, SullivanModel};
use crate::obstruction::{LieExpr, LiftingProblem, ObstructionError, QuillenData};

type R<T> = Result<T, Diagnostic>;

fn err(file: &str, span: Span, token: &str, message: impl AsRef<str>) -> Diagnostic {
    let mut d = Diagnostic::new(span, token, message.as_ref());
    d.file = Some(file.to_string());
    d
}

fn at(file: &str, id: &Ident, message: impl AsRef<str>) -> Diagnostic {
    err(file, id.span, &id.name, message)
}

fn generators(file: &str, decls: &[GenDecl], min: i64, taken: &[Generator]) -> R<Vec<Generator>> {
    let mut out: Vec<Generator> = Vec::new();
    for g in decls {
        if taken.iter().chain(&out).any(|h| h.name == g.name.name) {
            return Err(at(file, &g.name, format!("duplicate generator {}", g.name.name)));
        }
        if g.degree < min {
            return Err(err(
                file,
                g.degree_span,
                &g.degree.to_string(),
                format!("generator degree must be at least {min}"),
            ));
        }
        out.push(Generator::new(g.name.name.clone(), g.degree));
    }
    Ok(out)
}

fn eval_poly(file: &str, alg: &FreeAlgebra, e: &PExpr) -> R<AlgElement> {
    Ok(match e {
        PExpr::Num(c) => AlgElement::constant(c.clone()),
        PExpr::Var(id) => match alg.index_of(&id.name) {
            Some(i) => AlgElement::generator(i),
            None => return Err(at(file, id, format!("unknown generator {}", id.name))),
        },
        PExpr::Add(a, b) | PExpr::Sub(a, b) => {
            let mut x = eval_poly(file, alg, a)?;
            let y = eval_poly(file, alg, b)?;
            let c = if matches!(e, PExpr::Add(..)) {
                crate::Rational::one()
            } else {
                -crate::Rational::one()
            };
            x.add_scaled(&y, &c);
            x
        }
        PExpr::Mul(a, b) => alg.multiply(&eval_poly(file, alg, a)?, &eval_poly(file, alg, b)?),
        PExpr::Neg(a) => eval_poly(file, alg, a)?.scaled(&-crate::Rational::one()),
        PExpr::Pow(a, k) => alg.power(&eval_poly(file, alg, a)?, *k),
    })
}

/// Evaluates `target = expr` as a differential image and checks its degree.
fn diff_image(file: &str, alg: &FreeAlgebra, a: &Assign<PExpr>) -> R<(usize, AlgElement)> {
    let i = alg
        .index_of(&a.target.name)
        .ok_or_else(|| at(file, &a.target, format!("unknown generator {}", a.target.name)))?;
    let img = eval_poly(file, alg, &a.expr)?;
    let expected = alg.degree_of_gen(i) + 1;
    match alg.homogeneity(&img) {
        Homogeneity::Zero => {}
        Homogeneity::Degree(d) if d == expected => {}
        Homogeneity::Degree(d) => {
            return Err(err(file, a.span, &a.target.name, format!("image degree {d}, expected {expected}")))
        }
        Homogeneity::Mixed => return Err(err(file, a.span, &a.target.name, "inhomogeneous image")),
    }
    Ok((i, img))
}

fn check_d_squared(file: &str, m: &SullivanModel, diffs: &[Assign<PExpr>], fallback: &Ident) -> R<()> {
    for c in m.validate().checks {
        if !c.d_squared_zero {
            let span = diffs
                .iter()
                .find(|a| a.target.name == c.generator)
                .map_or(fallback.span, |a| a.span);
            return Err(err(file, span, &c.generator, format!("d(d {}) is not zero", c.generator)));
        }
    }
    Ok(())
}

fn no_duplicates<E>(file: &str, stmts: &[Assign<E>], what: &str) -> R<()> {
    for (k, a) in stmts.iter().enumerate() {
        if stmts[..k].iter().any(|b| b.target.name == a.target.name) {
            return Err(at(file, &a.target, format!("{what} {} given twice", a.target.name)));
        }
    }
    Ok(())
}

fn lie(file: &str, q: &[Generator], e: &LExpr) -> R<LieExpr> {
    Ok(match e {
        LExpr::Zero => LieExpr::Zero,
        LExpr::Var(id) => match q.iter().position(|g| g.name == id.name) {
            Some(i) => LieExpr::Gen(i),
            None => return Err(at(file, id, format!("unknown generator {}", id.name))),
        },
        LExpr::Bracket(a, b) => LieExpr::bracket(lie(file, q, a)?, lie(file, q, b)?),
        LExpr::Scale(c, a) => LieExpr::scale(c.clone(), lie(file, q, a)?),
        LExpr::Sum(es) => LieExpr::Sum(es.iter().map(|x| lie(file, q, x)).collect::<R<_>>()?),
    })
}

/// A sum of elementary derivations, all of shift `shift`.
fn derivation(file: &str, alg: &FreeAlgebra, terms: &[DTerm], shift: i64, span: Span, target: &str) -> R<Derivation> {
    let mut acc = Derivation::zero(shift);
    for t in terms {
        let v = alg
            .index_of(&t.gen.name)
            .ok_or_else(|| at(file, &t.gen, format!("unknown generator {}", t.gen.name)))?;
        let f = eval_poly(file, alg, &t.poly)?;
        match alg.homogeneity(&f) {
            Homogeneity::Zero => continue,
            Homogeneity::Mixed => return Err(at(file, &t.gen, "inhomogeneous polynomial in derivation")),
            Homogeneity::Degree(d) => {
                let s = alg.degree_of_gen(v) - d;
                if s != shift {
                    return Err(err(file, span, target, format!("derivation has degree {s}, expected {shift}")));
                }
            }
        }
        acc.add_scaled(&Derivation::sending(alg, v, f), &t.coef);
    }
    Ok(acc)
}

pub(super) fn resolve(decls: Vec<(String, Decl)>) -> R<Workspace> {
    let mut ws = Workspace::default();

    for (file, d) in &decls {
        let Decl::Model { name, gens, diffs } = d else { continue };
        if ws.model(&name.name).is_some() {
            return Err(at(file, name, format!("model {} declared twice", name.name)));
        }
        let gens = generators(file, gens, 2, &[])?;
        let alg = FreeAlgebra::new(gens.clone());
        no_duplicates(file, diffs, "differential of")?;
        let mut images = vec![AlgElement::zero(); gens.len()];
        for a in diffs {
            let (i, img) = diff_image(file, &alg, a)?;
            images[i] = img;
        }
        let model = SullivanModel::new(gens, images).map_err(|e| at(file, name, e.to_string()))?;
        check_d_squared(file, &model, diffs, name)?;
        ws.models.push(NamedModel {
            name: name.name.clone(),
            model,
        });
    }

    for (file, d) in &decls {
        let Decl::Relative {
            name,
            base,
            total,
            fibers,
            diffs,
        } = d
        else {
            continue;
        };
        if ws.relative(&name.name).is_some() {
            return Err(at(file, name, format!("relative model {} declared twice", name.name)));
        }
        if ws.model(&total.name).is_some() {
            return Err(at(file, total, format!("model {} already exists", total.name)));
        }
        let base_model = ws
            .model(&base.name)
            .ok_or_else(|| at(file, base, format!("unknown model {}", base.name)))?
            .clone();
        let fiber = generators(file, fibers, 2, base_model.generators())?;
        let mut all = base_model.generators().to_vec();
        all.extend(fiber.iter().cloned());
        let alg = FreeAlgebra::new(all);
        no_duplicates(file, diffs, "differential of")?;
        let mut images = vec![AlgElement::zero(); fiber.len()];
        for a in diffs {
            let (i, img) = diff_image(file, &alg, a)?;
            if i < base_model.len() {
                return Err(at(
                    file,
                    &a.target,
                    format!("{} is a base generator; its differential is fixed by {}", a.target.name, base.name),
                ));
            }
            images[i - base_model.len()] = img;
        }
        let model = RelativeModel::new(&base_model, fiber, images).map_err(|e| at(file, name, e.to_string()))?;
        check_d_squared(file, model.total(), diffs, name)?;
        ws.relatives.push(NamedRelative {
            name: name.name.clone(),
            base: base.name.clone(),
            total: total.name.clone(),
            model,
        });
    }

    for (file, d) in &decls {
        let Decl::Quillen {
            name,
            gens,
            diffs,
            cells,
        } = d
        else {
            continue;
        };
        if ws.quillen(&name.name).is_some() {
            return Err(at(file, name, format!("Quillen data {} declared twice", name.name)));
        }
        let gens = generators(file, gens, 1, &[])?;
        let degrees: Vec<i64> = gens.iter().map(|g| g.degree).collect();
        no_duplicates(file, diffs, "differential of")?;
        let mut images = vec![LieExpr::Zero; gens.len()];
        for a in diffs {
            let i = gens
                .iter()
                .position(|g| g.name == a.target.name)
                .ok_or_else(|| at(file, &a.target, format!("unknown generator {}", a.target.name)))?;
            let e = lie(file, &gens, &a.expr)?;
            match e.degree(&degrees) {
                Err(_) => return Err(err(file, a.span, &a.target.name, "inhomogeneous image")),
                Ok(Some(k)) if k != degrees[i] - 1 => {
                    return Err(err(
                        file,
                        a.span,
                        &a.target.name,
                        format!("image degree {k}, expected {}", degrees[i] - 1),
                    ))
                }
                Ok(_) => {}
            }
            images[i] = e;
        }
        let mut cell_ids = Vec::new();
        for c in cells {
            let i = gens
                .iter()
                .position(|g| g.name == c.name)
                .ok_or_else(|| at(file, c, format!("unknown generator {}", c.name)))?;
            if cell_ids.contains(&i) {
                return Err(at(file, c, format!("cell {} listed twice", c.name)));
            }
            cell_ids.push(i);
        }
        let data = QuillenData::new(gens, images, cell_ids).map_err(|e| {
            let g = match &e {
                ObstructionError::DSquaredNonzero(g) | ObstructionError::CellOrder(g) => Some(g.clone()),
                ObstructionError::DegreeMismatch { generator, .. } => Some(generator.clone()),
                _ => None,
            };
            match g.and_then(|g| diffs.iter().find(|a| a.target.name == g)) {
                Some(a) => err(file, a.span, &a.target.name, e.to_string()),
                None => at(file, name, e.to_string()),
            }
        })?;
        ws.quillens.push(NamedQuillen {
            name: name.name.clone(),
            data,
        });
    }

    for (file, d) in &decls {
        let Decl::Borel { name, base, rank, diffs } = d else { continue };
        if ws.borel(&name.name).is_some() {
            return Err(at(file, name, format!("Borel extension {} declared twice", name.name)));
        }
        let base_model = ws
            .model(&base.name)
            .ok_or_else(|| at(file, base, format!("unknown model {}", base.name)))?
            .clone();
        let mut all = base_model.generators().to_vec();
        for i in 1..=*rank {
            let t = Generator::new(format!("t{i}"), 2);
            if all.iter().any(|g| g.name == t.name) {
                return Err(at(file, name, format!("{} clashes with a torus generator", t.name)));
            }
            all.push(t);
        }
        let alg = FreeAlgebra::new(all);
        no_duplicates(file, diffs, "differential of")?;
        let mut images = base_model.diff_images().to_vec();
        images.resize(base_model.len() + rank, AlgElement::zero());
        for a in diffs {
            let (i, img) = diff_image(file, &alg, a)?;
            images[i] = img;
        }
        let ext = BorelExtension::new(&base_model, *rank, images).map_err(|e| at(file, name, e.to_string()))?;
        ws.borels.push(NamedBorel {
            name: name.name.clone(),
            base: base.name.clone(),
            ext,
        });
    }

    for (file, d) in &decls {
        let Decl::Problem {
            name,
            relative,
            quillen,
            hx,
            hy,
        } = d
        else {
            continue;
        };
        if ws.problem(&name.name).is_some() {
            return Err(at(file, name, format!("problem {} declared twice", name.name)));
        }
        let rm = ws
            .relative(&relative.name)
            .ok_or_else(|| at(file, relative, format!("unknown relative model {}", relative.name)))?;
        let q = ws
            .quillen(&quillen.name)
            .ok_or_else(|| at(file, quillen, format!("unknown Quillen data {}", quillen.name)))?;
        no_duplicates(file, hx, "hx of")?;
        no_duplicates(file, hy, "hy of")?;
        let base = rm.base();
        let mut given_x = BTreeMap::new();
        let mut given_y = BTreeMap::new();
        for (stmts, alg, given, is_x) in [
            (hx, rm.total().algebra(), &mut given_x, true),
            (hy, base.algebra(), &mut given_y, false),
        ] {
            for a in stmts {
                let u = q
                    .index_of(&a.target.name)
                    .ok_or_else(|| at(file, &a.target, format!("unknown generator {}", a.target.name)))?;
                if is_x && q.is_cell(u) {
                    return Err(at(file, &a.target, format!("hx is defined on non-cell generators only; {} is a cell", a.target.name)));
                }
                let shift = q.generators()[u].degree;
                given.insert(u, derivation(file, alg, &a.expr, shift, a.span, &a.target.name)?);
            }
        }
        let mut problem = LiftingProblem::default();
        for (u, g) in q.generators().iter().enumerate() {
            let zero = || Derivation::zero(g.degree);
            if !q.is_cell(u) {
                problem.hx = problem.hx.with(u, given_x.remove(&u).unwrap_or_else(zero));
            }
            problem.hy = problem.hy.with(u, given_y.remove(&u).unwrap_or_else(zero));
        }
        ws.problems.push(NamedProblem {
            name: name.name.clone(),
            relative: relative.name.clone(),
            quillen: quillen.name.clone(),
            problem,
        });
    }
    Ok(ws)
}

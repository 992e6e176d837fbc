//! Syntax only: tokens to declarations. Names are resolved in `resolve`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::lexer::{Tok, Token};
use super::{Diagnostic, Span};
use crate::Rational;

#[derive(Debug, Clone)]
pub struct Ident {
    pub name: String,
    pub span: Span,
}

#[derive(Debug, Clone)]
pub enum PExpr {
    Num(Rational),
    Var(Ident),
    Add(Box<PExpr>, Box<PExpr>),
    Sub(Box<PExpr>, Box<PExpr>),
    Mul(Box<PExpr>, Box<PExpr>),
    Neg(Box<PExpr>),
    Pow(Box<PExpr>, u32),
}

#[derive(Debug, Clone)]
pub struct DTerm {
    pub coef: Rational,
    pub gen: Ident,
    pub poly: PExpr,
}

#[derive(Debug, Clone)]
pub enum LExpr {
    Zero,
    Var(Ident),
    Bracket(Box<LExpr>, Box<LExpr>),
    Scale(Rational, Box<LExpr>),
    Sum(Vec<LExpr>),
}

#[derive(Debug, Clone)]
pub struct GenDecl {
    pub name: Ident,
    pub degree: i64,
    pub degree_span: Span,
}

#[derive(Debug, Clone)]
pub struct Assign<E> {
    pub target: Ident,
    pub expr: E,
    pub span: Span,
}

#[derive(Debug, Clone)]
pub enum Decl {
    Model {
        name: Ident,
        gens: Vec<GenDecl>,
        diffs: Vec<Assign<PExpr>>,
    },
    Relative {
        name: Ident,
        base: Ident,
        total: Ident,
        fibers: Vec<GenDecl>,
        diffs: Vec<Assign<PExpr>>,
    },
    Quillen {
        name: Ident,
        gens: Vec<GenDecl>,
        diffs: Vec<Assign<LExpr>>,
        cells: Vec<Ident>,
    },
    Borel {
        name: Ident,
        base: Ident,
        rank: usize,
        diffs: Vec<Assign<PExpr>>,
    },
    Problem {
        name: Ident,
        relative: Ident,
        quillen: Ident,
        hx: Vec<Assign<Vec<DTerm>>>,
        hy: Vec<Assign<Vec<DTerm>>>,
    },
}

pub struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

type PResult<T> = Result<T, Diagnostic>;

impl Parser {
    pub fn new(toks: Vec<Token>) -> Self {
        Parser { toks, pos: 0 }
    }

    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, message: &str, expected: &[&str]) -> PResult<T> {
        let t = self.peek();
        Err(Diagnostic::new(t.span, t.tok.text(), message).expecting(expected))
    }

    fn expect(&mut self, tok: Tok) -> PResult<Span> {
        if self.peek().tok == tok {
            Ok(self.bump().span)
        } else {
            let text = tok.text();
            self.error(&format!("expected `{text}`"), &[&text])
        }
    }

    fn ident(&mut self) -> PResult<Ident> {
        match &self.peek().tok {
            Tok::Ident(name) => {
                let name = name.clone();
                let span = self.bump().span;
                Ok(Ident { name, span })
            }
            _ => self.error("expected a name", &["identifier"]),
        }
    }

    fn keyword(&mut self, kw: &str) -> PResult<Span> {
        match &self.peek().tok {
            Tok::Ident(s) if s == kw => Ok(self.bump().span),
            _ => self.error(&format!("expected `{kw}`"), &[kw]),
        }
    }

    fn integer(&mut self) -> PResult<(BigInt, Span)> {
        match &self.peek().tok {
            Tok::Int(s) => {
                let v: BigInt = s.parse().expect("lexer yields digits");
                let span = self.bump().span;
                Ok((v, span))
            }
            _ => self.error("expected an integer", &["integer"]),
        }
    }

    fn small_int(&mut self) -> PResult<(i64, Span)> {
        let (v, span) = self.integer()?;
        match i64::try_from(v) {
            Ok(x) if x <= 100_000 => Ok((x, span)),
            _ => Err(Diagnostic::new(span, "integer", "integer too large")),
        }
    }

    /// INT or INT/INT.
    fn rational(&mut self) -> PResult<Rational> {
        let (p, _) = self.integer()?;
        if self.peek().tok == Tok::Slash {
            self.bump();
            let (q, span) = self.integer()?;
            if q.is_zero() {
                return Err(Diagnostic::new(span, "0", "division by zero"));
            }
            return Ok(Rational::new(p, q));
        }
        Ok(Rational::from_integer(p))
    }

    pub fn parse_all(&mut self) -> PResult<Vec<Decl>> {
        let mut out = Vec::new();
        while self.peek().tok != Tok::Eof {
            out.push(self.decl()?);
        }
        Ok(out)
    }

    fn decl(&mut self) -> PResult<Decl> {
        const KINDS: [&str; 5] = ["model", "relative", "quillen", "borel", "problem"];
        let kind = match &self.peek().tok {
            Tok::Ident(s) if KINDS.contains(&s.as_str()) => s.clone(),
            _ => return self.error("expected a declaration", &KINDS),
        };
        self.bump();
        match kind.as_str() {
            "model" => self.model(),
            "relative" => self.relative(),
            "quillen" => self.quillen(),
            "borel" => self.borel(),
            _ => self.problem(),
        }
    }

    fn gen_decl(&mut self) -> PResult<GenDecl> {
        let name = self.ident()?;
        self.expect(Tok::Colon)?;
        let (degree, degree_span) = self.small_int()?;
        self.expect(Tok::Semi)?;
        Ok(GenDecl {
            name,
            degree,
            degree_span,
        })
    }

    fn assign<E>(&mut self, body: impl FnOnce(&mut Self) -> PResult<E>) -> PResult<Assign<E>> {
        let span = self.peek().span;
        let target = self.ident()?;
        self.expect(Tok::Eq)?;
        let expr = body(self)?;
        self.expect(Tok::Semi)?;
        Ok(Assign { target, expr, span })
    }

    fn block<F>(&mut self, expected: &[&str], mut stmt: F) -> PResult<()>
    where
        F: FnMut(&mut Self, &str) -> PResult<()>,
    {
        self.expect(Tok::LBrace)?;
        loop {
            match &self.peek().tok {
                Tok::RBrace => {
                    self.bump();
                    return Ok(());
                }
                Tok::Ident(s) if expected.contains(&s.as_str()) => {
                    let kw = s.clone();
                    self.bump();
                    stmt(self, &kw)?;
                }
                _ => {
                    let mut hints = expected.to_vec();
                    hints.push("}");
                    return self.error("unexpected token in block", &hints);
                }
            }
        }
    }

    fn model(&mut self) -> PResult<Decl> {
        let name = self.ident()?;
        let mut gens = Vec::new();
        let mut diffs = Vec::new();
        self.block(&["gen", "d"], |p, kw| {
            if kw == "gen" {
                gens.push(p.gen_decl()?);
            } else {
                diffs.push(p.assign(Self::poly)?);
            }
            Ok(())
        })?;
        Ok(Decl::Model { name, gens, diffs })
    }

    fn relative(&mut self) -> PResult<Decl> {
        let name = self.ident()?;
        self.expect(Tok::Colon)?;
        let base = self.ident()?;
        self.expect(Tok::Arrow)?;
        let total = self.ident()?;
        let mut fibers = Vec::new();
        let mut diffs = Vec::new();
        self.block(&["fiber", "D"], |p, kw| {
            if kw == "fiber" {
                fibers.push(p.gen_decl()?);
            } else {
                diffs.push(p.assign(Self::poly)?);
            }
            Ok(())
        })?;
        Ok(Decl::Relative {
            name,
            base,
            total,
            fibers,
            diffs,
        })
    }

    fn quillen(&mut self) -> PResult<Decl> {
        let name = self.ident()?;
        let mut gens = Vec::new();
        let mut diffs = Vec::new();
        let mut cells = Vec::new();
        self.block(&["gen", "d", "cell"], |p, kw| {
            match kw {
                "gen" => gens.push(p.gen_decl()?),
                "d" => diffs.push(p.assign(Self::lie)?),
                _ => {
                    cells.push(p.ident()?);
                    p.expect(Tok::Semi)?;
                }
            }
            Ok(())
        })?;
        Ok(Decl::Quillen {
            name,
            gens,
            diffs,
            cells,
        })
    }

    fn borel(&mut self) -> PResult<Decl> {
        let name = self.ident()?;
        self.keyword("on")?;
        let base = self.ident()?;
        self.keyword("rank")?;
        let (rank, span) = self.small_int()?;
        if rank > 16 {
            return Err(Diagnostic::new(span, rank.to_string(), "torus rank above 16 is not supported"));
        }
        let mut diffs = Vec::new();
        self.block(&["D"], |p, _| {
            diffs.push(p.assign(Self::poly)?);
            Ok(())
        })?;
        Ok(Decl::Borel {
            name,
            base,
            rank: rank as usize,
            diffs,
        })
    }

    fn problem(&mut self) -> PResult<Decl> {
        let name = self.ident()?;
        self.keyword("on")?;
        let relative = self.ident()?;
        self.keyword("with")?;
        let quillen = self.ident()?;
        let mut hx = Vec::new();
        let mut hy = Vec::new();
        self.block(&["hx", "hy"], |p, kw| {
            let a = p.assign(Self::derivation)?;
            if kw == "hx" {
                hx.push(a);
            } else {
                hy.push(a);
            }
            Ok(())
        })?;
        Ok(Decl::Problem {
            name,
            relative,
            quillen,
            hx,
            hy,
        })
    }

    pub fn poly(&mut self) -> PResult<PExpr> {
        let mut acc = if self.peek().tok == Tok::Minus {
            self.bump();
            PExpr::Neg(Box::new(self.poly_term()?))
        } else {
            self.poly_term()?
        };
        loop {
            match self.peek().tok {
                Tok::Plus => {
                    self.bump();
                    acc = PExpr::Add(Box::new(acc), Box::new(self.poly_term()?));
                }
                Tok::Minus => {
                    self.bump();
                    acc = PExpr::Sub(Box::new(acc), Box::new(self.poly_term()?));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn poly_term(&mut self) -> PResult<PExpr> {
        let mut acc = self.poly_factor()?;
        while self.peek().tok == Tok::Star {
            self.bump();
            acc = PExpr::Mul(Box::new(acc), Box::new(self.poly_factor()?));
        }
        Ok(acc)
    }

    fn poly_factor(&mut self) -> PResult<PExpr> {
        let atom = match &self.peek().tok {
            Tok::Int(_) => PExpr::Num(self.rational()?),
            Tok::Ident(_) => PExpr::Var(self.ident()?),
            Tok::LParen => {
                self.bump();
                let e = self.poly()?;
                self.expect(Tok::RParen)?;
                e
            }
            _ => return self.error("expected a polynomial", &["number", "generator", "("]),
        };
        if self.peek().tok == Tok::Caret {
            self.bump();
            let (e, span) = self.small_int()?;
            let e = u32::try_from(e).map_err(|_| Diagnostic::new(span, e.to_string(), "negative exponent"))?;
            return Ok(PExpr::Pow(Box::new(atom), e));
        }
        Ok(atom)
    }

    /// `0`, or a signed sum of `[c*](gen, poly)`.
    pub fn derivation(&mut self) -> PResult<Vec<DTerm>> {
        if matches!(self.peek().tok, Tok::Int(_)) && !matches!(self.peek_at(1), Tok::Star | Tok::Slash) {
            let (v, span) = self.integer()?;
            if !v.is_zero() {
                return Err(Diagnostic::new(span, v.to_string(), "a bare number must be 0").expecting(&["0", "("]));
            }
            return Ok(Vec::new());
        }
        let mut terms = Vec::new();
        let mut negative = false;
        if self.peek().tok == Tok::Minus {
            self.bump();
            negative = true;
        }
        loop {
            let mut t = self.derivation_term()?;
            if negative {
                t.coef = -t.coef;
            }
            terms.push(t);
            match self.peek().tok {
                Tok::Plus => negative = false,
                Tok::Minus => negative = true,
                _ => return Ok(terms),
            }
            self.bump();
        }
    }

    fn derivation_term(&mut self) -> PResult<DTerm> {
        let coef = if matches!(self.peek().tok, Tok::Int(_)) {
            let c = self.rational()?;
            self.expect(Tok::Star)?;
            c
        } else {
            Rational::one()
        };
        if self.peek().tok != Tok::LParen {
            return self.error("expected an elementary derivation", &["(generator, polynomial)"]);
        }
        self.bump();
        let gen = self.ident()?;
        self.expect(Tok::Comma)?;
        let poly = self.poly()?;
        self.expect(Tok::RParen)?;
        Ok(DTerm { coef, gen, poly })
    }

    pub fn lie(&mut self) -> PResult<LExpr> {
        let mut terms = Vec::new();
        let mut negative = false;
        if self.peek().tok == Tok::Minus {
            self.bump();
            negative = true;
        }
        loop {
            terms.push(self.lie_term(negative)?);
            match self.peek().tok {
                Tok::Plus => negative = false,
                Tok::Minus => negative = true,
                _ => break,
            }
            self.bump();
        }
        Ok(if terms.len() == 1 {
            terms.pop().expect("one term")
        } else {
            LExpr::Sum(terms)
        })
    }

    fn lie_term(&mut self, negative: bool) -> PResult<LExpr> {
        let sign = |c: Rational| if negative { -c } else { c };
        if matches!(self.peek().tok, Tok::Int(_)) {
            if !matches!(self.peek_at(1), Tok::Star | Tok::Slash) {
                let (v, span) = self.integer()?;
                if !v.is_zero() {
                    return Err(Diagnostic::new(span, v.to_string(), "a bare number must be 0").expecting(&["0", "*"]));
                }
                return Ok(LExpr::Zero);
            }
            let c = self.rational()?;
            self.expect(Tok::Star)?;
            let atom = self.lie_atom()?;
            return Ok(LExpr::Scale(sign(c), Box::new(atom)));
        }
        let atom = self.lie_atom()?;
        Ok(if negative {
            LExpr::Scale(-Rational::one(), Box::new(atom))
        } else {
            atom
        })
    }

    fn lie_atom(&mut self) -> PResult<LExpr> {
        match &self.peek().tok {
            Tok::Ident(_) => Ok(LExpr::Var(self.ident()?)),
            Tok::LBracket => {
                self.bump();
                let a = self.lie()?;
                self.expect(Tok::Comma)?;
                let b = self.lie()?;
                self.expect(Tok::RBracket)?;
                Ok(LExpr::Bracket(Box::new(a), Box::new(b)))
            }
            Tok::LParen => {
                self.bump();
                let e = self.lie()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            _ => self.error("expected a Lie expression", &["generator", "[", "("]),
        }
    }
}

//! Line-oriented text format for algebras, morphisms, relative models and
//! graded Lie algebras, with a canonical printer such that
//! `parse(print(doc)) == doc`.
//!
//! Grammar (one declaration per block, `#` starts a comment):
//!
//! ```text
//! algebra E54
//! gen x 2
//! gen y 5
//! gen a 3
//! d y = x^3
//! d a = x^2
//!
//! morphism f : E54 -> E54
//! map x = x
//!
//! fibration F : base B fiber {
//! gen s 9
//! d s = u*v*a
//! }
//!
//! lie L
//! gen a 2
//! bracket [a,a] = 2*b
//! ```
//!
//! Monomials may be written in any order; the parser normalizes them with
//! Koszul signs and records a warning when a sign flip or a vanishing odd
//! square occurred. An optional `wedge 3 3` line inside an algebra block
//! marks it as the quadratic model of a wedge of spheres of the listed
//! dimensions.

use num_traits::Zero;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;
use sullivan::algebra::{normalize, GradedContext, Polynomial};
use sullivan::dga::WedgeProvenance;
use sullivan::rat::Rational;
use sullivan::{DgaMorphism, GradedLieAlgebra, RelativeModel, SullivanAlgebra};

#[derive(Debug, thiserror::Error)]
pub enum DslError {
    #[error("line {line}, col {col}: expected {expected}")]
    Syntax { line: usize, col: usize, expected: String },
    #[error("line {line}: unknown generator `{name}`")]
    UnknownGenerator { line: usize, name: String },
    #[error("line {line}: d {gen} = ... {detail}")]
    DegreeMismatch { line: usize, gen: String, detail: String },
    #[error("line {line}: unknown name `{name}`")]
    UnknownName { line: usize, name: String },
    #[error("line {line}: duplicate declaration `{name}`")]
    Duplicate { line: usize, name: String },
    #[error("line {line}: {msg}")]
    Invalid { line: usize, msg: String },
    #[error(transparent)]
    Core(#[from] sullivan::Error),
}

type Result<T> = std::result::Result<T, DslError>;

/// One declaration: name plus the resolved core object.
#[derive(Debug, Clone)]
pub enum Item {
    Algebra {
        name: String,
        algebra: SullivanAlgebra,
    },
    Morphism {
        name: String,
        source: String,
        target: String,
        morphism: DgaMorphism,
    },
    Fibration {
        name: String,
        base: String,
        model: RelativeModel,
    },
    Lie {
        name: String,
        lie: GradedLieAlgebra,
    },
}

impl Item {
    pub fn name(&self) -> &str {
        match self {
            Item::Algebra { name, .. }
            | Item::Morphism { name, .. }
            | Item::Fibration { name, .. }
            | Item::Lie { name, .. } => name,
        }
    }
}

/// A parsed document: declarations in source order plus normalization
/// warnings (sign flips, vanished odd squares).
#[derive(Debug, Clone, Default)]
pub struct DslDocument {
    pub items: Vec<Item>,
    pub warnings: Vec<String>,
}

impl DslDocument {
    pub fn find(&self, name: &str) -> Option<&Item> {
        self.items.iter().find(|i| i.name() == name)
    }

    pub fn algebra(&self, name: &str) -> Option<&SullivanAlgebra> {
        match self.find(name) {
            Some(Item::Algebra { algebra, .. }) => Some(algebra),
            _ => None,
        }
    }

    pub fn algebras(&self) -> impl Iterator<Item = (&str, &SullivanAlgebra)> {
        self.items.iter().filter_map(|i| match i {
            Item::Algebra { name, algebra } => Some((name.as_str(), algebra)),
            _ => None,
        })
    }

    pub fn fibrations(&self) -> impl Iterator<Item = (&str, &RelativeModel)> {
        self.items.iter().filter_map(|i| match i {
            Item::Fibration { name, model, .. } => Some((name.as_str(), model)),
            _ => None,
        })
    }
}

// ---------------------------------------------------------------------
// expression parsing

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_' || c == '['
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

struct Cursor<'a> {
    text: &'a str,
    chars: Vec<char>,
    pos: usize,
    line: usize,
    col0: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str, line: usize, col0: usize) -> Self {
        Cursor { text, chars: text.chars().collect(), pos: 0, line, col0 }
    }

    fn col(&self) -> usize {
        self.col0 + self.pos + 1
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c == ' ' || c == '\t') {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn err<T>(&self, expected: &str) -> Result<T> {
        Err(DslError::Syntax {
            line: self.line,
            col: self.col(),
            expected: expected.to_string(),
        })
    }

    fn ident(&mut self) -> Result<String> {
        match self.peek() {
            Some('[') => {
                // bracket-word name such as `[g0,[g0,g1]]`
                let start = self.pos;
                let mut depth = 0usize;
                loop {
                    match self.peek() {
                        Some('[') => depth += 1,
                        Some(']') => {
                            depth -= 1;
                            if depth == 0 {
                                self.pos += 1;
                                break;
                            }
                        }
                        Some(c) if is_ident_char(c) || c == ',' => {}
                        _ => return self.err("balanced bracket word"),
                    }
                    self.pos += 1;
                }
                Ok(self.chars[start..self.pos].iter().collect())
            }
            Some(c) if is_ident_start(c) => {
                let start = self.pos;
                while matches!(self.peek(), Some(c) if is_ident_char(c)) {
                    self.pos += 1;
                }
                Ok(self.chars[start..self.pos].iter().collect())
            }
            _ => self.err("identifier"),
        }
    }

    fn integer(&mut self) -> Result<i64> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {}
            _ => return self.err("number"),
        }
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse().map_err(|_| DslError::Syntax {
            line: self.line,
            col: self.col0 + start + 1,
            expected: "number in range".to_string(),
        })
    }

    fn rational(&mut self) -> Result<Rational> {
        let n = self.integer()?;
        if self.eat('/') {
            let d = self.integer()?;
            if d == 0 {
                return self.err("nonzero denominator");
            }
            Ok(Rational::new(n.into(), d.into()))
        } else {
            Ok(Rational::from_integer(n.into()))
        }
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.peek().is_none()
    }
}

/// Parse a polynomial expression in `ctx`, normalizing factor order with
/// Koszul signs.
pub fn parse_poly(
    ctx: &Arc<GradedContext>,
    text: &str,
    line: usize,
    col0: usize,
    warnings: &mut Vec<String>,
) -> Result<Polynomial> {
    let mut cur = Cursor::new(text, line, col0);
    let mut poly = Polynomial::zero(ctx.clone());
    cur.skip_ws();
    if cur.peek().is_none() {
        return cur.err("polynomial expression");
    }
    let mut term_sign: i64 = 1;
    if cur.eat('-') {
        term_sign = -1;
    } else {
        let _ = cur.eat('+');
    }
    loop {
        cur.skip_ws();
        // one term: factors separated by '*'
        let mut coeff = Rational::from_integer(term_sign.into());
        let mut word: Vec<usize> = Vec::new();
        loop {
            cur.skip_ws();
            match cur.peek() {
                Some(c) if c.is_ascii_digit() => {
                    let q = cur.rational()?;
                    coeff *= q;
                }
                Some(c) if is_ident_start(c) => {
                    let col = cur.col();
                    let name = cur.ident()?;
                    let Some(g) = ctx.index_of(&name) else {
                        return Err(DslError::UnknownGenerator { line, name });
                    };
                    let exp = if cur.eat('^') { cur.integer()? } else { 1 };
                    if exp < 1 {
                        return Err(DslError::Syntax {
                            line,
                            col,
                            expected: "positive exponent".to_string(),
                        });
                    }
                    for _ in 0..exp {
                        word.push(g);
                    }
                }
                _ => return cur.err("coefficient or generator"),
            }
            cur.skip_ws();
            if !cur.eat('*') {
                break;
            }
        }
        if word.is_empty() && !coeff.is_zero() {
            // a bare rational constant term: only 0 makes sense in our
            // positive-degree setting
            return Err(DslError::Invalid {
                line,
                msg: "constant terms other than 0 are not allowed".to_string(),
            });
        }
        if !word.is_empty() {
            let sorted = {
                let mut w = word.clone();
                w.sort_unstable();
                w
            };
            let (sign, mono) = normalize(ctx, &word);
            match sign {
                0 => warnings.push(format!(
                    "line {line}: term with a repeated odd generator vanishes"
                )),
                -1 => warnings.push(format!(
                    "line {line}: monomial reordered with a sign flip"
                )),
                _ => {
                    if word != sorted {
                        warnings.push(format!("line {line}: monomial reordered"));
                    }
                }
            }
            if sign != 0 {
                poly.add_term(mono, coeff * Rational::from_integer(i64::from(sign).into()));
            }
        }
        cur.skip_ws();
        if cur.eat('+') {
            term_sign = 1;
        } else if cur.eat('-') {
            term_sign = -1;
        } else if cur.at_end() {
            break;
        } else {
            return cur.err("'+', '-' or end of line");
        }
    }
    let _ = cur.text;
    Ok(poly)
}

/// Parse a linear combination `2*c + 1/2*e` (or `0`) over Lie basis names.
fn parse_linear(
    basis: &[(String, usize)],
    text: &str,
    line: usize,
    col0: usize,
) -> Result<Vec<(usize, Rational)>> {
    let mut cur = Cursor::new(text, line, col0);
    let mut out: BTreeMap<usize, Rational> = BTreeMap::new();
    cur.skip_ws();
    if cur.peek().is_none() {
        return cur.err("linear expression");
    }
    let mut term_sign: i64 = 1;
    if cur.eat('-') {
        term_sign = -1;
    }
    loop {
        cur.skip_ws();
        let mut coeff = Rational::from_integer(term_sign.into());
        let mut elem: Option<usize> = None;
        loop {
            cur.skip_ws();
            match cur.peek() {
                Some(c) if c.is_ascii_digit() => {
                    coeff *= cur.rational()?;
                }
                Some(c) if is_ident_start(c) => {
                    if elem.is_some() {
                        return cur.err("'*', '+', '-' or end of line");
                    }
                    let name = cur.ident()?;
                    let Some(k) = basis.iter().position(|(n, _)| *n == name) else {
                        return Err(DslError::UnknownGenerator { line, name });
                    };
                    elem = Some(k);
                }
                _ => return cur.err("coefficient or basis element"),
            }
            cur.skip_ws();
            if !cur.eat('*') {
                break;
            }
        }
        match elem {
            Some(k) => {
                let e = out.entry(k).or_insert_with(|| Rational::from_integer(0.into()));
                *e += coeff;
            }
            None if coeff.is_zero() => {}
            None => {
                return Err(DslError::Invalid {
                    line,
                    msg: "bracket value must be a linear combination or 0".to_string(),
                })
            }
        }
        cur.skip_ws();
        if cur.eat('+') {
            term_sign = 1;
        } else if cur.eat('-') {
            term_sign = -1;
        } else if cur.at_end() {
            break;
        } else {
            return cur.err("'+', '-' or end of line");
        }
    }
    Ok(out.into_iter().filter(|(_, c)| !c.is_zero()).collect())
}

// ---------------------------------------------------------------------
// document parsing

#[derive(Default)]
struct AlgebraDraft {
    name: String,
    gens: Vec<(String, usize)>,
    dlines: Vec<(String, String, usize, usize)>,
    wedge: Option<Vec<usize>>,
}

struct MorphismDraft {
    name: String,
    source: String,
    target: String,
    maps: Vec<(String, String, usize, usize)>,
    line: usize,
}

struct FibrationDraft {
    name: String,
    base: String,
    gens: Vec<(String, usize)>,
    dlines: Vec<(String, String, usize, usize)>,
    line: usize,
    closed: bool,
}

struct LieDraft {
    name: String,
    gens: Vec<(String, usize)>,
    brackets: Vec<(String, String, String, usize, usize)>,
}

enum Draft {
    None,
    Algebra(AlgebraDraft),
    Morphism(MorphismDraft),
    Fibration(FibrationDraft),
    Lie(LieDraft),
}

pub fn parse(text: &str) -> Result<DslDocument> {
    let mut doc = DslDocument::default();
    let mut draft = Draft::None;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        };
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let col0 = line.len() - line.trim_start().len();
        let mut words = trimmed.split_whitespace();
        let keyword = words.next().unwrap();
        match keyword {
            "algebra" => {
                finalize(&mut doc, std::mem::replace(&mut draft, Draft::None))?;
                let name = expect_name(words.next(), line_no, "algebra name")?;
                check_fresh(&doc, &name, line_no)?;
                expect_end(words.next(), line_no)?;
                draft = Draft::Algebra(AlgebraDraft { name, ..Default::default() });
            }
            "morphism" => {
                finalize(&mut doc, std::mem::replace(&mut draft, Draft::None))?;
                // morphism NAME : SRC -> TGT
                let name = expect_name(words.next(), line_no, "morphism name")?;
                check_fresh(&doc, &name, line_no)?;
                expect_token(words.next(), ":", line_no)?;
                let source = expect_name(words.next(), line_no, "source algebra")?;
                expect_token(words.next(), "->", line_no)?;
                let target = expect_name(words.next(), line_no, "target algebra")?;
                expect_end(words.next(), line_no)?;
                draft = Draft::Morphism(MorphismDraft {
                    name,
                    source,
                    target,
                    maps: Vec::new(),
                    line: line_no,
                });
            }
            "fibration" => {
                finalize(&mut doc, std::mem::replace(&mut draft, Draft::None))?;
                // fibration NAME : base BASE fiber {
                let name = expect_name(words.next(), line_no, "fibration name")?;
                check_fresh(&doc, &name, line_no)?;
                expect_token(words.next(), ":", line_no)?;
                expect_token(words.next(), "base", line_no)?;
                let base = expect_name(words.next(), line_no, "base algebra")?;
                expect_token(words.next(), "fiber", line_no)?;
                expect_token(words.next(), "{", line_no)?;
                expect_end(words.next(), line_no)?;
                draft = Draft::Fibration(FibrationDraft {
                    name,
                    base,
                    gens: Vec::new(),
                    dlines: Vec::new(),
                    line: line_no,
                    closed: false,
                });
            }
            "lie" => {
                finalize(&mut doc, std::mem::replace(&mut draft, Draft::None))?;
                let name = expect_name(words.next(), line_no, "lie algebra name")?;
                check_fresh(&doc, &name, line_no)?;
                expect_end(words.next(), line_no)?;
                draft = Draft::Lie(LieDraft {
                    name,
                    gens: Vec::new(),
                    brackets: Vec::new(),
                });
            }
            "gen" => {
                let name = expect_name(words.next(), line_no, "generator name")?;
                let deg: usize = expect_name(words.next(), line_no, "generator degree")?
                    .parse()
                    .map_err(|_| DslError::Syntax {
                        line: line_no,
                        col: 1,
                        expected: "generator degree (integer)".to_string(),
                    })?;
                expect_end(words.next(), line_no)?;
                match &mut draft {
                    Draft::Algebra(a) => a.gens.push((name, deg)),
                    Draft::Fibration(f) if !f.closed => f.gens.push((name, deg)),
                    Draft::Lie(l) => l.gens.push((name, deg)),
                    _ => {
                        return Err(DslError::Syntax {
                            line: line_no,
                            col: col0 + 1,
                            expected: "gen inside an algebra, fibration or lie block".to_string(),
                        })
                    }
                }
            }
            "d" => {
                // d IDENT = expr
                let (gen, expr, ecol) = split_assignment(trimmed, col0, line_no, "d")?;
                match &mut draft {
                    Draft::Algebra(a) => a.dlines.push((gen, expr, line_no, ecol)),
                    Draft::Fibration(f) if !f.closed => {
                        f.dlines.push((gen, expr, line_no, ecol))
                    }
                    _ => {
                        return Err(DslError::Syntax {
                            line: line_no,
                            col: col0 + 1,
                            expected: "d inside an algebra or fibration block".to_string(),
                        })
                    }
                }
            }
            "map" => {
                let (gen, expr, ecol) = split_assignment(trimmed, col0, line_no, "map")?;
                match &mut draft {
                    Draft::Morphism(m) => m.maps.push((gen, expr, line_no, ecol)),
                    _ => {
                        return Err(DslError::Syntax {
                            line: line_no,
                            col: col0 + 1,
                            expected: "map inside a morphism block".to_string(),
                        })
                    }
                }
            }
            "bracket" => {
                // bracket [x,y] = expr
                let rest = trimmed["bracket".len()..].trim_start();
                let rest_col = col0 + trimmed.len() - rest.len();
                let (pair, value) = match rest.split_once('=') {
                    Some((p, v)) => (p.trim(), v.trim()),
                    None => {
                        return Err(DslError::Syntax {
                            line: line_no,
                            col: rest_col + rest.len() + 1,
                            expected: "'='".to_string(),
                        })
                    }
                };
                let inner = pair
                    .strip_prefix('[')
                    .and_then(|s| s.strip_suffix(']'))
                    .ok_or_else(|| DslError::Syntax {
                        line: line_no,
                        col: rest_col + 1,
                        expected: "[x,y]".to_string(),
                    })?;
                // split at the top-level comma (basis names may themselves
                // be bracket words)
                let mut depth = 0usize;
                let mut split_at = None;
                for (p, c) in inner.char_indices() {
                    match c {
                        '[' => depth += 1,
                        ']' => depth = depth.saturating_sub(1),
                        ',' if depth == 0 => {
                            split_at = Some(p);
                            break;
                        }
                        _ => {}
                    }
                }
                let (x, y) = match split_at {
                    Some(p) => (&inner[..p], &inner[p + 1..]),
                    None => {
                        return Err(DslError::Syntax {
                            line: line_no,
                            col: rest_col + 2,
                            expected: "two basis names separated by ','".to_string(),
                        })
                    }
                };
                let ecol = trimmed.len() - value.len() + col0;
                match &mut draft {
                    Draft::Lie(l) => l.brackets.push((
                        x.trim().to_string(),
                        y.trim().to_string(),
                        value.to_string(),
                        line_no,
                        ecol,
                    )),
                    _ => {
                        return Err(DslError::Syntax {
                            line: line_no,
                            col: col0 + 1,
                            expected: "bracket inside a lie block".to_string(),
                        })
                    }
                }
            }
            "wedge" => {
                let dims: std::result::Result<Vec<usize>, _> =
                    words.map(|w| w.parse::<usize>()).collect();
                let dims = dims.map_err(|_| DslError::Syntax {
                    line: line_no,
                    col: col0 + 7,
                    expected: "sphere dimensions (integers)".to_string(),
                })?;
                match &mut draft {
                    Draft::Algebra(a) => a.wedge = Some(dims),
                    _ => {
                        return Err(DslError::Syntax {
                            line: line_no,
                            col: col0 + 1,
                            expected: "wedge inside an algebra block".to_string(),
                        })
                    }
                }
            }
            "}" => match &mut draft {
                Draft::Fibration(f) if !f.closed => {
                    f.closed = true;
                    let done = std::mem::replace(&mut draft, Draft::None);
                    finalize(&mut doc, done)?;
                }
                _ => {
                    return Err(DslError::Syntax {
                        line: line_no,
                        col: col0 + 1,
                        expected: "'}' only closes a fibration block".to_string(),
                    })
                }
            },
            other => {
                return Err(DslError::Syntax {
                    line: line_no,
                    col: col0 + 1,
                    expected: format!(
                        "declaration keyword, got `{other}`"
                    ),
                })
            }
        }
    }
    finalize(&mut doc, draft)?;
    Ok(doc)
}

fn expect_name(
    w: Option<&str>,
    line: usize,
    what: &str,
) -> Result<String> {
    match w {
        Some(s) => Ok(s.to_string()),
        None => Err(DslError::Syntax { line, col: 1, expected: what.to_string() }),
    }
}

fn expect_token(w: Option<&str>, tok: &str, line: usize) -> Result<()> {
    match w {
        Some(s) if s == tok => Ok(()),
        _ => Err(DslError::Syntax {
            line,
            col: 1,
            expected: format!("`{tok}`"),
        }),
    }
}

fn expect_end(w: Option<&str>, line: usize) -> Result<()> {
    match w {
        None => Ok(()),
        Some(s) => Err(DslError::Syntax {
            line,
            col: 1,
            expected: format!("end of line, got `{s}`"),
        }),
    }
}

fn check_fresh(doc: &DslDocument, name: &str, line: usize) -> Result<()> {
    if doc.find(name).is_some() {
        return Err(DslError::Duplicate { line, name: name.to_string() });
    }
    Ok(())
}

/// Split `keyword IDENT = expr` returning (IDENT, expr, column of expr).
fn split_assignment(
    trimmed: &str,
    col0: usize,
    line: usize,
    keyword: &str,
) -> Result<(String, String, usize)> {
    let rest = trimmed[keyword.len()..].trim_start();
    let (lhs, rhs) = rest.split_once('=').ok_or_else(|| DslError::Syntax {
        line,
        col: col0 + trimmed.len() + 1,
        expected: "'='".to_string(),
    })?;
    let gen = lhs.trim();
    if gen.is_empty() || !gen.chars().next().map(is_ident_start).unwrap_or(false) {
        return Err(DslError::Syntax {
            line,
            col: col0 + keyword.len() + 2,
            expected: "generator name".to_string(),
        });
    }
    let expr = rhs.trim();
    let ecol = col0 + trimmed.len() - rhs.trim_start().len();
    Ok((gen.to_string(), expr.to_string(), ecol))
}

fn finalize(doc: &mut DslDocument, draft: Draft) -> Result<()> {
    match draft {
        Draft::None => Ok(()),
        Draft::Algebra(a) => {
            let ctx = GradedContext::new(a.gens.clone())?;
            let mut diffs = vec![Polynomial::zero(ctx.clone()); ctx.len()];
            for (gen, expr, line, ecol) in &a.dlines {
                let Some(i) = ctx.index_of(gen) else {
                    return Err(DslError::UnknownGenerator { line: *line, name: gen.clone() });
                };
                let p = parse_poly(&ctx, expr, *line, *ecol, &mut doc.warnings)?;
                check_d_degree(&p, gen, ctx.degree(i), *line)?;
                diffs[i] = p;
            }
            let mut algebra = SullivanAlgebra::new(ctx, diffs)?;
            if let Some(dims) = a.wedge {
                algebra.wedge_of_spheres = Some(WedgeProvenance { sphere_dims: dims });
            }
            doc.items.push(Item::Algebra { name: a.name, algebra });
            Ok(())
        }
        Draft::Morphism(m) => {
            let Some(src) = doc.algebra(&m.source).cloned() else {
                return Err(DslError::UnknownName { line: m.line, name: m.source });
            };
            let Some(tgt) = doc.algebra(&m.target).cloned() else {
                return Err(DslError::UnknownName { line: m.line, name: m.target });
            };
            let mut assign = vec![Polynomial::zero(tgt.ctx().clone()); src.ctx().len()];
            for (gen, expr, line, ecol) in &m.maps {
                let Some(i) = src.ctx().index_of(gen) else {
                    return Err(DslError::UnknownGenerator { line: *line, name: gen.clone() });
                };
                assign[i] = parse_poly(tgt.ctx(), expr, *line, *ecol, &mut doc.warnings)?;
            }
            let morphism = DgaMorphism::new(src, tgt, assign)?;
            doc.items.push(Item::Morphism {
                name: m.name,
                source: m.source,
                target: m.target,
                morphism,
            });
            Ok(())
        }
        Draft::Fibration(f) => {
            if !f.closed {
                return Err(DslError::Syntax {
                    line: f.line,
                    col: 1,
                    expected: "closing '}' for fibration block".to_string(),
                });
            }
            let Some(base) = doc.algebra(&f.base).cloned() else {
                return Err(DslError::UnknownName { line: f.line, name: f.base });
            };
            let mut gens = base.ctx().gens().to_vec();
            gens.extend(f.gens.iter().cloned());
            let total_ctx = GradedContext::new(gens)?;
            let mut diffs: Vec<Polynomial> = Vec::new();
            // base differentials transported by generator name
            let mut scratch = Vec::new();
            for p in base.diffs() {
                diffs.push(parse_poly(
                    &total_ctx,
                    &p.to_string(),
                    f.line,
                    0,
                    &mut scratch,
                )?);
            }
            let mut fiber_diffs =
                vec![Polynomial::zero(total_ctx.clone()); f.gens.len()];
            for (gen, expr, line, ecol) in &f.dlines {
                let Some(k) = f.gens.iter().position(|(n, _)| n == gen) else {
                    return Err(DslError::UnknownGenerator { line: *line, name: gen.clone() });
                };
                let p = parse_poly(&total_ctx, expr, *line, *ecol, &mut doc.warnings)?;
                check_d_degree(&p, gen, f.gens[k].1, *line)?;
                fiber_diffs[k] = p;
            }
            diffs.extend(fiber_diffs);
            let cutoff = total_ctx.gens().iter().map(|g| g.1).max().unwrap_or(2) + 3;
            let model =
                RelativeModel::assemble(base, f.gens, diffs, cutoff.max(12))?;
            doc.items.push(Item::Fibration { name: f.name, base: f.base, model });
            Ok(())
        }
        Draft::Lie(l) => {
            let mut brackets: BTreeMap<(usize, usize), Vec<(usize, Rational)>> = BTreeMap::new();
            for (x, y, expr, line, ecol) in &l.brackets {
                let Some(i) = l.gens.iter().position(|(n, _)| n == x) else {
                    return Err(DslError::UnknownGenerator { line: *line, name: x.clone() });
                };
                let Some(j) = l.gens.iter().position(|(n, _)| n == y) else {
                    return Err(DslError::UnknownGenerator { line: *line, name: y.clone() });
                };
                let combo = parse_linear(&l.gens, expr, *line, *ecol)?;
                if i <= j {
                    brackets.entry((i, j)).or_default().extend(combo);
                } else {
                    // [x_i, x_j] = -(-1)^{|i||j|} [x_j, x_i]
                    let flip = if l.gens[i].1 % 2 == 1 && l.gens[j].1 % 2 == 1 {
                        Rational::from_integer(1.into())
                    } else {
                        Rational::from_integer((-1).into())
                    };
                    brackets
                        .entry((j, i))
                        .or_default()
                        .extend(combo.into_iter().map(|(k, c)| (k, c * &flip)));
                }
            }
            let lie = GradedLieAlgebra::new(l.gens, brackets)?;
            doc.items.push(Item::Lie { name: l.name, lie });
            Ok(())
        }
    }
}

fn check_d_degree(p: &Polynomial, gen: &str, gen_degree: usize, line: usize) -> Result<()> {
    if p.is_zero() {
        return Ok(());
    }
    match p.homogeneous_degree() {
        Some(d) if d == gen_degree + 1 => Ok(()),
        Some(d) => Err(DslError::DegreeMismatch {
            line,
            gen: gen.to_string(),
            detail: format!("has degree {d}, expected {}", gen_degree + 1),
        }),
        None => Err(DslError::DegreeMismatch {
            line,
            gen: gen.to_string(),
            detail: "is not homogeneous".to_string(),
        }),
    }
}

// ---------------------------------------------------------------------
// printing

/// Canonical text rendering; `parse(print(doc))` resolves to the same
/// items.
pub fn print(doc: &DslDocument) -> String {
    let mut out = String::new();
    for (n, item) in doc.items.iter().enumerate() {
        if n > 0 {
            out.push('\n');
        }
        match item {
            Item::Algebra { name, algebra } => print_algebra(&mut out, name, algebra),
            Item::Morphism { name, source, target, morphism } => {
                let _ = writeln!(out, "morphism {name} : {source} -> {target}");
                for (i, (g, _)) in morphism.source().ctx().gens().iter().enumerate() {
                    let _ = writeln!(out, "map {g} = {}", morphism.assignment(i));
                }
            }
            Item::Fibration { name, base, model } => {
                let _ = writeln!(out, "fibration {name} : base {base} fiber {{");
                for (g, d) in model.fiber_gens() {
                    let _ = writeln!(out, "gen {g} {d}");
                }
                let n_base = model.base().ctx().len();
                for (k, (g, _)) in model.fiber_gens().iter().enumerate() {
                    let p = model.total().diff(n_base + k);
                    if !p.is_zero() {
                        let _ = writeln!(out, "d {g} = {p}");
                    }
                }
                out.push_str("}\n");
            }
            Item::Lie { name, lie } => {
                let _ = writeln!(out, "lie {name}");
                for (g, d) in lie.basis() {
                    let _ = writeln!(out, "gen {g} {d}");
                }
                for i in 0..lie.dim() {
                    for j in i..lie.dim() {
                        let combo = lie.bracket_basis(i, j);
                        if !combo.is_empty() {
                            let _ = writeln!(
                                out,
                                "bracket [{},{}] = {}",
                                lie.name(i),
                                lie.name(j),
                                format_linear(lie, &combo)
                            );
                        }
                    }
                }
            }
        }
    }
    out
}

fn print_algebra(out: &mut String, name: &str, algebra: &SullivanAlgebra) {
    let _ = writeln!(out, "algebra {name}");
    if let Some(w) = &algebra.wedge_of_spheres {
        let dims: Vec<String> = w.sphere_dims.iter().map(|d| d.to_string()).collect();
        let _ = writeln!(out, "wedge {}", dims.join(" "));
    }
    for (g, d) in algebra.ctx().gens() {
        let _ = writeln!(out, "gen {g} {d}");
    }
    for (i, (g, _)) in algebra.ctx().gens().iter().enumerate() {
        let p = algebra.diff(i);
        if !p.is_zero() {
            let _ = writeln!(out, "d {g} = {p}");
        }
    }
}

/// Render one algebra as a standalone document body.
pub fn print_single_algebra(name: &str, algebra: &SullivanAlgebra) -> String {
    let mut out = String::new();
    print_algebra(&mut out, name, algebra);
    out
}

fn format_linear(lie: &GradedLieAlgebra, combo: &[(usize, Rational)]) -> String {
    use num_traits::{One, Signed};
    let mut s = String::new();
    for (n, (k, c)) in combo.iter().enumerate() {
        let neg = c.is_negative();
        let abs = c.abs();
        if n == 0 {
            if neg {
                s.push('-');
            }
        } else if neg {
            s.push_str(" - ");
        } else {
            s.push_str(" + ");
        }
        if abs.is_one() {
            s.push_str(lie.name(*k));
        } else {
            let _ = write!(s, "{abs}*{}", lie.name(*k));
        }
    }
    if s.is_empty() {
        s.push('0');
    }
    s
}

//! A line-oriented text format for finite models.
//!
//! ```text
//! # comments start with '#'
//! policy grid 4
//! tnorm min
//! space X = a b
//! density d on X = 1 0.5
//! capacity nu on X = {}:0 {a}:0.5 {b}:0.5 {a,b}:1
//! function f on X = 0.25 0.75
//! measure m on X = 1*a 0.5*b
//! measure n on X = 1*[1*a 0.5*b] 0.75*[1*b]
//! outer C on X = 1*(1 0.5) 0.75*(0.25 1)
//! space Y = c
//! map g : X -> Y = a:c b:c
//! points K = (0,1) (1,0)
//! point y = (0.5,1)
//! measure p = 1*(0,1) 0.5*(1,0)
//! ```
//!
//! Values are read as exact rationals (`0.25`, `1/3`). Printing a parsed
//! model gives its canonical form: capacity tables in subset-mask order,
//! normal forms and point sets sorted, duplicate terms merged.

use std::fmt::{self, Write as _};

use crate::capacity::{validate_table, Capacity, PossibilityDistribution};
use crate::convexity::{MaxStarPoint, PointCloud};
use crate::error::{Error, Result};
use crate::integral::UnitFunction;
use crate::possibility::OuterPossibility;
use crate::space::{FiniteSpace, PointMap, SubsetMask};
use crate::star::{PointMeasure, StarMeasure};
use crate::tnorm::{TNorm, TnormTable};
use crate::unit::{Exact, Policy, Scalar};
use crate::variant::Merge;

/// How the t-norm was declared.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TnormDecl {
    Named(String),
    Table(Vec<Vec<Exact>>),
}

/// A carrier of a normal form in the file.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    Point(usize),
    Coords(Vec<Exact>),
    Nested(StarMeasure<Atom, Exact>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Space,
    Density,
    Capacity,
    Function,
    Measure,
    Outer,
    Map,
    Points,
    Point,
}

impl Kind {
    fn keyword(self) -> &'static str {
        match self {
            Kind::Space => "space",
            Kind::Density => "density",
            Kind::Capacity => "capacity",
            Kind::Function => "function",
            Kind::Measure => "measure",
            Kind::Outer => "outer",
            Kind::Map => "map",
            Kind::Points => "points",
            Kind::Point => "point",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decl {
    Space { name: String, space: FiniteSpace },
    Density { name: String, space: String, values: Vec<Exact> },
    Capacity { name: String, space: String, values: Vec<Exact> },
    Function { name: String, space: String, values: Vec<Exact> },
    Measure { name: String, space: Option<String>, measure: StarMeasure<Atom, Exact> },
    Outer { name: String, space: String, terms: StarMeasure<Vec<Exact>, Exact> },
    Map { name: String, source: String, target: String, image: Vec<usize> },
    Points { name: String, points: Vec<Vec<Exact>> },
    Point { name: String, coords: Vec<Exact> },
}

impl Decl {
    pub fn name(&self) -> &str {
        match self {
            Decl::Space { name, .. }
            | Decl::Density { name, .. }
            | Decl::Capacity { name, .. }
            | Decl::Function { name, .. }
            | Decl::Measure { name, .. }
            | Decl::Outer { name, .. }
            | Decl::Map { name, .. }
            | Decl::Points { name, .. }
            | Decl::Point { name, .. } => name,
        }
    }

    pub fn kind(&self) -> Kind {
        match self {
            Decl::Space { .. } => Kind::Space,
            Decl::Density { .. } => Kind::Density,
            Decl::Capacity { .. } => Kind::Capacity,
            Decl::Function { .. } => Kind::Function,
            Decl::Measure { .. } => Kind::Measure,
            Decl::Outer { .. } => Kind::Outer,
            Decl::Map { .. } => Kind::Map,
            Decl::Points { .. } => Kind::Points,
            Decl::Point { .. } => Kind::Point,
        }
    }
}

/// A parsed and validated model.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Model {
    pub policy: Option<Policy>,
    pub tnorm: Option<TnormDecl>,
    decls: Vec<Decl>,
}

fn cast<S: Scalar>(v: Exact) -> S {
    S::from_ratio(v.numer(), v.denom())
}

fn cast_all<S: Scalar>(values: &[Exact]) -> Vec<S> {
    values.iter().map(|&v| cast(v)).collect()
}

fn semantic(path: impl Into<String>, message: impl fmt::Display) -> Error {
    Error::Semantic { path: path.into(), message: message.to_string() }
}

impl Model {
    pub fn decls(&self) -> &[Decl] {
        &self.decls
    }

    pub fn get(&self, name: &str) -> Option<&Decl> {
        self.decls.iter().find(|d| d.name() == name)
    }

    /// Name of the first declaration of `kind`.
    pub fn first(&self, kind: Kind) -> Option<&str> {
        self.decls.iter().find(|d| d.kind() == kind).map(Decl::name)
    }

    fn expect(&self, name: &str, kind: Kind) -> Result<&Decl> {
        match self.get(name) {
            Some(d) if d.kind() == kind => Ok(d),
            Some(d) => Err(semantic(name, format!("is a {}, not a {}", d.kind().keyword(), kind.keyword()))),
            None => Err(semantic(name, format!("no {} with this name", kind.keyword()))),
        }
    }

    pub fn space(&self, name: &str) -> Result<&FiniteSpace> {
        match self.expect(name, Kind::Space)? {
            Decl::Space { space, .. } => Ok(space),
            _ => unreachable!(),
        }
    }

    /// Least common multiple of all denominators in the model.
    pub fn common_denominator(&self) -> u32 {
        fn gcd(a: i64, b: i64) -> i64 {
            if b == 0 { a } else { gcd(b, a % b) }
        }
        let mut lcm = 1i64;
        let mut visit = |v: &Exact| {
            let d = v.denom();
            lcm = (lcm / gcd(lcm, d)).saturating_mul(d).min(u32::MAX as i64);
        };
        fn atoms(m: &StarMeasure<Atom, Exact>, visit: &mut dyn FnMut(&Exact)) {
            for (a, w) in m.terms() {
                visit(w);
                match a {
                    Atom::Point(_) => {}
                    Atom::Coords(c) => c.iter().for_each(&mut *visit),
                    Atom::Nested(inner) => atoms(inner, visit),
                }
            }
        }
        if let Some(TnormDecl::Table(rows)) = &self.tnorm {
            rows.iter().flatten().for_each(&mut visit);
        }
        for d in &self.decls {
            match d {
                Decl::Density { values, .. } | Decl::Capacity { values, .. } | Decl::Function { values, .. } => {
                    values.iter().for_each(&mut visit)
                }
                Decl::Measure { measure, .. } => atoms(measure, &mut visit),
                Decl::Outer { terms, .. } => {
                    for (d, w) in terms.terms() {
                        visit(w);
                        d.iter().for_each(&mut visit);
                    }
                }
                Decl::Points { points, .. } => points.iter().flatten().for_each(&mut visit),
                Decl::Point { coords, .. } => coords.iter().for_each(&mut visit),
                Decl::Space { .. } | Decl::Map { .. } => {}
            }
        }
        lcm as u32
    }

    pub fn tnorm<S: Scalar>(&self) -> Result<Option<TNorm<S>>> {
        match &self.tnorm {
            None => Ok(None),
            Some(TnormDecl::Named(name)) => TNorm::by_name(name).map(Some),
            Some(TnormDecl::Table(rows)) => {
                let rows = rows.iter().map(|r| cast_all(r)).collect();
                Ok(Some(TNorm::Table(std::sync::Arc::new(TnormTable::new(rows)?))))
            }
        }
    }

    pub fn density<S: Scalar>(&self, name: &str) -> Result<PossibilityDistribution<S>> {
        match self.expect(name, Kind::Density)? {
            Decl::Density { space, values, .. } => {
                PossibilityDistribution::new(self.space(space)?.clone(), cast_all(values))
                    .map_err(|e| semantic(format!("density {name}"), e))
            }
            _ => unreachable!(),
        }
    }

    /// A declared capacity table, or the capacity generated by a density.
    pub fn capacity<S: Scalar>(&self, name: &str) -> Result<Capacity<S>> {
        match self.get(name) {
            Some(Decl::Capacity { space, values, .. }) => Capacity::new(self.space(space)?.clone(), cast_all(values))
                .map_err(|e| semantic(format!("capacity {name}"), e)),
            Some(Decl::Density { .. }) => Ok(self.density::<S>(name)?.capacity()),
            _ => self.expect(name, Kind::Capacity).map(|_| unreachable!()),
        }
    }

    pub fn function<S: Scalar>(&self, name: &str) -> Result<UnitFunction<S>> {
        match self.expect(name, Kind::Function)? {
            Decl::Function { space, values, .. } => UnitFunction::new(self.space(space)?.clone(), cast_all(values)),
            _ => unreachable!(),
        }
    }

    fn measure_decl(&self, name: &str) -> Result<(&Option<String>, &StarMeasure<Atom, Exact>)> {
        match self.expect(name, Kind::Measure)? {
            Decl::Measure { space, measure, .. } => Ok((space, measure)),
            _ => unreachable!(),
        }
    }

    /// A normal form whose carriers are points of a space.
    pub fn point_measure<S: Scalar>(&self, name: &str) -> Result<(FiniteSpace, PointMeasure<S>)> {
        let (space, m) = self.measure_decl(name)?;
        let space = space.as_deref().ok_or_else(|| semantic(format!("measure {name}"), "needs a space"))?;
        Ok((self.space(space)?.clone(), point_level(m, name)?))
    }

    /// A normal form over normal forms of points of a space.
    pub fn nested_measure<S: Scalar>(&self, name: &str) -> Result<(FiniteSpace, StarMeasure<PointMeasure<S>, S>)> {
        let (space, m) = self.measure_decl(name)?;
        let space = space.as_deref().ok_or_else(|| semantic(format!("measure {name}"), "needs a space"))?;
        let terms = m
            .terms()
            .iter()
            .map(|(a, w)| match a {
                Atom::Nested(inner) => Ok((point_level(inner, name)?, cast(*w))),
                _ => Err(semantic(format!("measure {name}"), "expected nested normal forms `w*[...]`")),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok((self.space(space)?.clone(), StarMeasure::new(terms)?))
    }

    /// A normal form whose carriers are coordinate vectors.
    pub fn coords_measure<S: Scalar>(&self, name: &str) -> Result<StarMeasure<MaxStarPoint<S>, S>> {
        let (_, m) = self.measure_decl(name)?;
        let terms = m
            .terms()
            .iter()
            .map(|(a, w)| match a {
                Atom::Coords(c) => Ok((MaxStarPoint::new(cast_all(c))?, cast(*w))),
                _ => Err(semantic(format!("measure {name}"), "expected coordinate carriers `w*(...)`")),
            })
            .collect::<Result<Vec<_>>>()?;
        StarMeasure::new(terms)
    }

    pub fn outer<S: Scalar>(&self, name: &str) -> Result<OuterPossibility<S>> {
        match self.expect(name, Kind::Outer)? {
            Decl::Outer { space, terms, .. } => {
                let space = self.space(space)?;
                let terms = terms
                    .terms()
                    .iter()
                    .map(|(d, w)| Ok((PossibilityDistribution::new(space.clone(), cast_all(d))?, cast(*w))))
                    .collect::<Result<Vec<_>>>()?;
                OuterPossibility::new(space.clone(), terms)
            }
            _ => unreachable!(),
        }
    }

    pub fn map(&self, name: &str) -> Result<PointMap> {
        match self.expect(name, Kind::Map)? {
            Decl::Map { source, target, image, .. } => {
                PointMap::new(self.space(source)?.clone(), self.space(target)?.clone(), image.clone())
            }
            _ => unreachable!(),
        }
    }

    /// A point set, tagged with the grid when the policy is a grid.
    pub fn cloud<S: Scalar>(&self, name: &str) -> Result<PointCloud<S>> {
        match self.expect(name, Kind::Points)? {
            Decl::Points { points, .. } => {
                let cloud = PointCloud::new(points.iter().map(|c| MaxStarPoint::new(cast_all(c))).collect::<Result<Vec<_>>>()?)?;
                match self.policy {
                    Some(Policy::ExactGrid(n)) => cloud.on_grid(n),
                    _ => Ok(cloud),
                }
            }
            _ => unreachable!(),
        }
    }

    pub fn point<S: Scalar>(&self, name: &str) -> Result<MaxStarPoint<S>> {
        match self.expect(name, Kind::Point)? {
            Decl::Point { coords, .. } => MaxStarPoint::new(cast_all(coords)),
            _ => unreachable!(),
        }
    }
}

fn point_level<S: Scalar>(m: &StarMeasure<Atom, Exact>, name: &str) -> Result<PointMeasure<S>> {
    let terms = m
        .terms()
        .iter()
        .map(|(a, w)| match a {
            Atom::Point(i) => Ok((*i, cast(*w))),
            _ => Err(semantic(format!("measure {name}"), "expected point carriers `w*label`")),
        })
        .collect::<Result<Vec<_>>>()?;
    StarMeasure::new(terms)
}

// ---------------------------------------------------------------------------
// Lexing and parsing

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Number(String),
    Sym(char),
    Arrow,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    column: usize,
}

fn lex(line: usize, text: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let column = i + 1;
        if c == '#' {
            break;
        } else if c.is_whitespace() {
            i += 1;
        } else if c == '-' && chars.get(i + 1) == Some(&'>') {
            out.push(Token { tok: Tok::Arrow, column });
            i += 2;
        } else if c.is_ascii_digit() || c == '.' || c == '-' {
            let start = i;
            i += 1;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.' || chars[i] == '/') {
                i += 1;
            }
            out.push(Token { tok: Tok::Number(chars[start..i].iter().collect()), column });
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                i += 1;
            }
            out.push(Token { tok: Tok::Ident(chars[start..i].iter().collect()), column });
        } else if "=:*()[]{},;".contains(c) {
            out.push(Token { tok: Tok::Sym(c), column });
            i += 1;
        } else {
            return Err(Error::Syntax { line, column, message: format!("unexpected character `{c}`") });
        }
    }
    Ok(out)
}

struct Cursor<'a> {
    line: usize,
    tokens: &'a [Token],
    pos: usize,
    end_column: usize,
}

impl<'a> Cursor<'a> {
    fn column(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end_column, |t| t.column)
    }

    fn error(&self, message: impl Into<String>) -> Error {
        Error::Syntax { line: self.line, column: self.column(), message: message.into() }
    }

    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|t| &t.tok)
    }

    fn at_end(&self) -> bool {
        self.pos >= self.tokens.len()
    }

    fn is_sym(&self, c: char) -> bool {
        self.peek() == Some(&Tok::Sym(c))
    }

    fn sym(&mut self, c: char) -> Result<()> {
        if self.is_sym(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected `{c}`")))
        }
    }

    fn arrow(&mut self) -> Result<()> {
        if self.peek() == Some(&Tok::Arrow) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error("expected `->`"))
        }
    }

    fn ident(&mut self) -> Result<String> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => Err(self.error("expected a name")),
        }
    }

    fn keyword(&mut self, word: &str) -> Result<()> {
        match self.peek() {
            Some(Tok::Ident(s)) if s == word => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.error(format!("expected `{word}`"))),
        }
    }

    fn number(&mut self) -> Result<Exact> {
        match self.peek() {
            Some(Tok::Number(s)) => {
                let v = Exact::parse(s).ok_or_else(|| self.error(format!("malformed number `{s}`")))?;
                self.pos += 1;
                Ok(v)
            }
            _ => Err(self.error("expected a number")),
        }
    }

    fn finish(&self) -> Result<()> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.error("unexpected trailing input"))
        }
    }

    /// `(v,v,...)` with commas, or `(v v ...)` with spaces.
    fn tuple(&mut self, commas: bool) -> Result<Vec<Exact>> {
        self.sym('(')?;
        let mut out = vec![self.number()?];
        while !self.is_sym(')') {
            if commas {
                self.sym(',')?;
            }
            out.push(self.number()?);
        }
        self.sym(')')?;
        Ok(out)
    }
}

/// A statement before name resolution, with the line it came from.
enum Stmt {
    Policy(Policy),
    Tnorm(TnormDecl),
    Space(String, Vec<String>),
    Values(Kind, String, String, Vec<Exact>),
    Capacity(String, String, Vec<(Vec<String>, Exact)>),
    Measure(String, Option<String>, Vec<(Exact, RawAtom)>),
    Outer(String, String, Vec<(Exact, Vec<Exact>)>),
    Map(String, String, String, Vec<(String, String)>),
    Points(String, Vec<Vec<Exact>>),
    Point(String, Vec<Exact>),
}

enum RawAtom {
    Label(String),
    Coords(Vec<Exact>),
    Nested(Vec<(Exact, RawAtom)>),
}

fn parse_terms(c: &mut Cursor, closing: Option<char>) -> Result<Vec<(Exact, RawAtom)>> {
    let mut terms = Vec::new();
    loop {
        let done = match closing {
            Some(close) => c.is_sym(close),
            None => c.at_end(),
        };
        if done {
            break;
        }
        let w = c.number()?;
        c.sym('*')?;
        let atom = match c.peek() {
            Some(Tok::Ident(_)) => RawAtom::Label(c.ident()?),
            Some(Tok::Sym('(')) => RawAtom::Coords(c.tuple(true)?),
            Some(Tok::Sym('[')) => {
                c.sym('[')?;
                let inner = parse_terms(c, Some(']'))?;
                c.sym(']')?;
                RawAtom::Nested(inner)
            }
            _ => return Err(c.error("expected a label, `(` or `[`")),
        };
        terms.push((w, atom));
    }
    if terms.is_empty() {
        return Err(c.error("expected at least one term `w*...`"));
    }
    Ok(terms)
}

fn parse_statement(c: &mut Cursor) -> Result<Stmt> {
    let head = c.ident()?;
    let stmt = match head.as_str() {
        "policy" => match c.ident()?.as_str() {
            "float" => Stmt::Policy(Policy::Float),
            "grid" => {
                let n = c.number()?;
                if n.denom() != 1 || n.numer() < 1 || n.numer() > u32::MAX as i64 {
                    return Err(c.error("grid resolution must be a positive integer"));
                }
                Stmt::Policy(Policy::ExactGrid(n.numer() as u32))
            }
            other => return Err(c.error(format!("unknown policy `{other}`"))),
        },
        "tnorm" => {
            let name = c.ident()?;
            if name == "table" {
                c.sym('=')?;
                let mut rows = vec![Vec::new()];
                while !c.at_end() {
                    if c.is_sym(';') {
                        c.pos += 1;
                        rows.push(Vec::new());
                    } else {
                        let v = c.number()?;
                        rows.last_mut().expect("nonempty").push(v);
                    }
                }
                Stmt::Tnorm(TnormDecl::Table(rows))
            } else {
                Stmt::Tnorm(TnormDecl::Named(name))
            }
        }
        "space" => {
            let name = c.ident()?;
            c.sym('=')?;
            let mut labels = vec![c.ident()?];
            while !c.at_end() {
                labels.push(c.ident()?);
            }
            Stmt::Space(name, labels)
        }
        "density" | "function" => {
            let kind = if head == "density" { Kind::Density } else { Kind::Function };
            let name = c.ident()?;
            c.keyword("on")?;
            let space = c.ident()?;
            c.sym('=')?;
            let mut values = vec![c.number()?];
            while !c.at_end() {
                values.push(c.number()?);
            }
            Stmt::Values(kind, name, space, values)
        }
        "capacity" => {
            let name = c.ident()?;
            c.keyword("on")?;
            let space = c.ident()?;
            c.sym('=')?;
            let mut entries = Vec::new();
            while !c.at_end() || entries.is_empty() {
                c.sym('{')?;
                let mut labels = Vec::new();
                while !c.is_sym('}') {
                    if !labels.is_empty() {
                        c.sym(',')?;
                    }
                    labels.push(c.ident()?);
                }
                c.sym('}')?;
                c.sym(':')?;
                entries.push((labels, c.number()?));
            }
            Stmt::Capacity(name, space, entries)
        }
        "measure" => {
            let name = c.ident()?;
            let space = if c.is_sym('=') {
                None
            } else {
                c.keyword("on")?;
                Some(c.ident()?)
            };
            c.sym('=')?;
            Stmt::Measure(name, space, parse_terms(c, None)?)
        }
        "outer" => {
            let name = c.ident()?;
            c.keyword("on")?;
            let space = c.ident()?;
            c.sym('=')?;
            let mut terms = Vec::new();
            while !c.at_end() || terms.is_empty() {
                let w = c.number()?;
                c.sym('*')?;
                terms.push((w, c.tuple(false)?));
            }
            Stmt::Outer(name, space, terms)
        }
        "map" => {
            let name = c.ident()?;
            c.sym(':')?;
            let source = c.ident()?;
            c.arrow()?;
            let target = c.ident()?;
            c.sym('=')?;
            let mut pairs = Vec::new();
            while !c.at_end() || pairs.is_empty() {
                let x = c.ident()?;
                c.sym(':')?;
                pairs.push((x, c.ident()?));
            }
            Stmt::Map(name, source, target, pairs)
        }
        "points" => {
            let name = c.ident()?;
            c.sym('=')?;
            let mut points = vec![c.tuple(true)?];
            while !c.at_end() {
                points.push(c.tuple(true)?);
            }
            Stmt::Points(name, points)
        }
        "point" => {
            let name = c.ident()?;
            c.sym('=')?;
            Stmt::Point(name, c.tuple(true)?)
        }
        other => {
            c.pos -= 1;
            return Err(c.error(format!("unknown statement `{other}`")));
        }
    };
    c.finish()?;
    Ok(stmt)
}

/// Parses and validates a model.
pub fn parse_model(text: &str) -> Result<Model> {
    let mut stmts = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let tokens = lex(line, raw)?;
        if tokens.is_empty() {
            continue;
        }
        let mut cursor = Cursor { line, tokens: &tokens, pos: 0, end_column: raw.chars().count() + 1 };
        if let Some(Tok::Number(_)) = cursor.peek() {
            return Err(cursor.error("expected a statement"));
        }
        stmts.push(parse_statement(&mut cursor)?);
    }
    let mut model = Model::default();
    for stmt in &stmts {
        match stmt {
            Stmt::Policy(p) if model.policy.is_none() => model.policy = Some(*p),
            Stmt::Tnorm(t) if model.tnorm.is_none() => model.tnorm = Some(t.clone()),
            Stmt::Policy(_) => return Err(semantic("policy", "declared twice")),
            Stmt::Tnorm(_) => return Err(semantic("tnorm", "declared twice")),
            _ => {}
        }
    }
    if let Some(TnormDecl::Named(name)) = &model.tnorm {
        TNorm::<Exact>::by_name(name).map_err(|e| semantic("tnorm", e))?;
    }
    if let (Some(Policy::ExactGrid(n)), Some(TnormDecl::Named(name))) = (model.policy, &model.tnorm) {
        let op = TNorm::<Exact>::by_name(name)?;
        if !op.grid_policy(n).closed {
            return Err(semantic("tnorm", Error::GridClosure { tnorm: name.clone(), n }));
        }
    }
    if let Some(TnormDecl::Table(rows)) = &model.tnorm {
        check_values(&model, "tnorm table", rows.iter().flatten())?;
        TnormTable::new(rows.clone()).map_err(|e| semantic("tnorm", e))?;
    }
    for stmt in stmts {
        let decl = resolve(&model, stmt)?;
        if let Some(decl) = decl {
            if model.get(decl.name()).is_some() {
                return Err(semantic(decl.name(), "declared twice"));
            }
            model.decls.push(decl);
        }
    }
    Ok(model)
}

fn check_values<'a>(model: &Model, path: &str, values: impl IntoIterator<Item = &'a Exact>) -> Result<()> {
    for &v in values {
        if !v.is_unit() {
            return Err(semantic(path, Error::OutOfRange(v.to_string())));
        }
        if let Some(Policy::ExactGrid(n)) = model.policy {
            if !v.on_grid(n) {
                return Err(semantic(path, format!("{v} is not on the grid of resolution {n}")));
            }
        }
    }
    Ok(())
}

fn resolve(model: &Model, stmt: Stmt) -> Result<Option<Decl>> {
    let space_of = |path: &str, name: &str| -> Result<FiniteSpace> {
        match model.get(name) {
            Some(Decl::Space { space, .. }) => Ok(space.clone()),
            _ => Err(semantic(path, format!("undeclared space `{name}`"))),
        }
    };
    let label = |path: &str, space: &FiniteSpace, name: &str, l: &str| -> Result<usize> {
        space
            .index_of(l)
            .ok_or_else(|| semantic(path, format!("`{l}` is not a point of {name}")))
    };
    Ok(Some(match stmt {
        Stmt::Policy(_) | Stmt::Tnorm(_) => return Ok(None),
        Stmt::Space(name, labels) => {
            let space = FiniteSpace::new(labels).map_err(|e| semantic(format!("space {name}"), e))?;
            Decl::Space { name, space }
        }
        Stmt::Values(kind, name, space_name, values) => {
            let path = format!("{} {name}", kind.keyword());
            let space = space_of(&path, &space_name)?;
            check_values(model, &path, &values)?;
            if values.len() != space.len() {
                return Err(semantic(path, format!("expected {} values, got {}", space.len(), values.len())));
            }
            if kind == Kind::Density {
                PossibilityDistribution::new(space, values.clone()).map_err(|e| semantic(&path, e))?;
                Decl::Density { name, space: space_name, values }
            } else {
                Decl::Function { name, space: space_name, values }
            }
        }
        Stmt::Capacity(name, space_name, entries) => {
            let path = format!("capacity {name}");
            let space = space_of(&path, &space_name)?;
            let mut table: Vec<Option<Exact>> = vec![None; space.subset_count()];
            for (labels, v) in entries {
                let mask = SubsetMask::from_points(
                    labels
                        .iter()
                        .map(|l| label(&path, &space, &space_name, l))
                        .collect::<Result<Vec<_>>>()?,
                );
                let entry = format!("{path} {}", space.render(mask));
                check_values(model, &entry, [&v])?;
                if table[mask.index()].replace(v).is_some() {
                    return Err(semantic(entry, "value given twice"));
                }
            }
            let values = table
                .iter()
                .enumerate()
                .map(|(i, v)| v.ok_or_else(|| semantic(&path, format!("no value for {}", space.render(SubsetMask(i as u32))))))
                .collect::<Result<Vec<_>>>()?;
            validate_table(&space, &values).map_err(|e| semantic(&path, e))?;
            Decl::Capacity { name, space: space_name, values }
        }
        Stmt::Measure(name, space_name, terms) => {
            let path = format!("measure {name}");
            let space = space_name.as_ref().map(|s| space_of(&path, s)).transpose()?;
            let measure = resolve_terms(model, &path, space.as_ref(), terms)?;
            Decl::Measure { name, space: space_name, measure }
        }
        Stmt::Outer(name, space_name, terms) => {
            let path = format!("outer {name}");
            let space = space_of(&path, &space_name)?;
            for (w, d) in &terms {
                check_values(model, &path, std::iter::once(w).chain(d))?;
                PossibilityDistribution::new(space.clone(), d.clone()).map_err(|e| semantic(&path, e))?;
            }
            let terms = StarMeasure::new(terms.into_iter().map(|(w, d)| (d, w))).map_err(|e| semantic(&path, e))?;
            Decl::Outer { name, space: space_name, terms }
        }
        Stmt::Map(name, source, target, pairs) => {
            let path = format!("map {name}");
            let from = space_of(&path, &source)?;
            let to = space_of(&path, &target)?;
            let mut image = vec![None; from.len()];
            for (x, y) in pairs {
                let i = label(&path, &from, &source, &x)?;
                let j = label(&path, &to, &target, &y)?;
                if image[i].replace(j).is_some() {
                    return Err(semantic(path, format!("`{x}` mapped twice")));
                }
            }
            let image = image
                .iter()
                .enumerate()
                .map(|(i, j)| j.ok_or_else(|| semantic(&path, format!("no image for `{}`", from.label(i)))))
                .collect::<Result<Vec<_>>>()?;
            Decl::Map { name, source, target, image }
        }
        Stmt::Points(name, points) => {
            let path = format!("points {name}");
            check_values(model, &path, points.iter().flatten())?;
            if points.iter().any(|p| p.len() != points[0].len()) {
                return Err(semantic(path, "points have different dimensions"));
            }
            let mut points = points;
            points.sort();
            points.dedup();
            Decl::Points { name, points }
        }
        Stmt::Point(name, coords) => {
            check_values(model, &format!("point {name}"), &coords)?;
            Decl::Point { name, coords }
        }
    }))
}

fn resolve_terms(
    model: &Model,
    path: &str,
    space: Option<&FiniteSpace>,
    terms: Vec<(Exact, RawAtom)>,
) -> Result<StarMeasure<Atom, Exact>> {
    let mut out = Vec::with_capacity(terms.len());
    for (w, atom) in terms {
        check_values(model, path, [&w])?;
        let atom = match atom {
            RawAtom::Label(l) => {
                let space = space.ok_or_else(|| semantic(path, format!("label `{l}` needs `on <space>`")))?;
                Atom::Point(space.index_of(&l).ok_or_else(|| semantic(path, format!("`{l}` is not a point of the space")))?)
            }
            RawAtom::Coords(c) => {
                check_values(model, path, &c)?;
                Atom::Coords(c)
            }
            RawAtom::Nested(inner) => Atom::Nested(resolve_terms(model, path, space, inner)?),
        };
        out.push((atom, w));
    }
    let dims: Vec<usize> = out.iter().filter_map(|(a, _)| match a {
        Atom::Coords(c) => Some(c.len()),
        _ => None,
    }).collect();
    if dims.windows(2).any(|w| w[0] != w[1]) {
        return Err(semantic(path, "carriers have different dimensions"));
    }
    let kinds = out.iter().map(|(a, _)| std::mem::discriminant(a)).collect::<std::collections::HashSet<_>>();
    if kinds.len() > 1 {
        return Err(semantic(path, "carriers of one normal form must be of one kind"));
    }
    let merged = StarMeasure::from_terms(out, Merge::Max);
    let top = merged.terms().iter().map(|t| t.1).max().unwrap_or(Exact::zero());
    if top != Exact::one() {
        return Err(semantic(path, Error::Normalization(format!("weights peak at {top}, not 1"))));
    }
    Ok(merged)
}

// ---------------------------------------------------------------------------
// Canonical printing

fn join_values(values: &[Exact]) -> String {
    values.iter().map(|v| v.render()).collect::<Vec<_>>().join(" ")
}

fn coords(values: &[Exact]) -> String {
    format!("({})", values.iter().map(|v| v.render()).collect::<Vec<_>>().join(","))
}

fn write_terms(out: &mut String, m: &StarMeasure<Atom, Exact>, space: Option<&FiniteSpace>) {
    for (i, (a, w)) in m.terms().iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        let _ = write!(out, "{}*", w.render());
        match a {
            Atom::Point(x) => out.push_str(space.map_or("?", |s| s.label(*x))),
            Atom::Coords(c) => out.push_str(&coords(c)),
            Atom::Nested(inner) => {
                out.push('[');
                write_terms(out, inner, space);
                out.push(']');
            }
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.policy {
            Some(Policy::ExactGrid(n)) => writeln!(f, "policy grid {n}")?,
            Some(Policy::Float) => writeln!(f, "policy float")?,
            None => {}
        }
        match &self.tnorm {
            Some(TnormDecl::Named(name)) => writeln!(f, "tnorm {name}")?,
            Some(TnormDecl::Table(rows)) => {
                let rows: Vec<String> = rows.iter().map(|r| join_values(r)).collect();
                writeln!(f, "tnorm table = {}", rows.join(" ; "))?
            }
            None => {}
        }
        for decl in &self.decls {
            let mut line = String::new();
            match decl {
                Decl::Space { name, space } => {
                    let _ = write!(line, "space {name} = {}", space.labels().join(" "));
                }
                Decl::Density { name, space, values } => {
                    let _ = write!(line, "density {name} on {space} = {}", join_values(values));
                }
                Decl::Function { name, space, values } => {
                    let _ = write!(line, "function {name} on {space} = {}", join_values(values));
                }
                Decl::Capacity { name, space: space_name, values } => {
                    let space = self.space(space_name).map_err(|_| fmt::Error)?;
                    let _ = write!(line, "capacity {name} on {space_name} =");
                    for (a, v) in space.subsets().zip(values) {
                        let _ = write!(line, " {}:{}", space.render(a), v.render());
                    }
                }
                Decl::Measure { name, space, measure } => {
                    let _ = write!(line, "measure {name}");
                    let resolved = match space {
                        Some(s) => {
                            let _ = write!(line, " on {s}");
                            Some(self.space(s).map_err(|_| fmt::Error)?)
                        }
                        None => None,
                    };
                    line.push_str(" = ");
                    write_terms(&mut line, measure, resolved);
                }
                Decl::Outer { name, space, terms } => {
                    let _ = write!(line, "outer {name} on {space} =");
                    for (d, w) in terms.terms() {
                        let _ = write!(line, " {}*({})", w.render(), join_values(d));
                    }
                }
                Decl::Map { name, source, target, image } => {
                    let from = self.space(source).map_err(|_| fmt::Error)?;
                    let to = self.space(target).map_err(|_| fmt::Error)?;
                    let _ = write!(line, "map {name} : {source} -> {target} =");
                    for (x, &y) in image.iter().enumerate() {
                        let _ = write!(line, " {}:{}", from.label(x), to.label(y));
                    }
                }
                Decl::Points { name, points } => {
                    let _ = write!(line, "points {name} =");
                    for p in points {
                        let _ = write!(line, " {}", coords(p));
                    }
                }
                Decl::Point { name, coords: c } => {
                    let _ = write!(line, "point {name} = {}", coords(c));
                }
            }
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

//! LL(1) parser for space descriptors such as `CP(3) * S1` or
//! `CI(degrees=[[2],[3]]; ambient=[5]).twist(1)`.

use std::collections::BTreeSet;
use std::fmt;

use systole_core::catalog::{self, CatalogError, Space, WeightedKind};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Descriptor {
    ProjectiveSpace(i64),
    Quadric(i64),
    Sphere(i64),
    Circle,
    CompleteIntersection { degrees: Vec<Vec<i64>>, ambient: Vec<i64> },
    ProjectiveBundle { degrees: Vec<i64>, genus: i64 },
    BlowupPoint(i64),
    BlowupHypersurface { degree: i64, n: i64 },
    Weighted { kind: WeightedKind, n: i64 },
    GrassmannianSection(i64),
    Product(Box<Descriptor>, Box<Descriptor>),
    Twist(Box<Descriptor>, i64),
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("parse error at byte {offset}: expected {}, found {found}", expected_list(.expected))]
pub struct ParseError {
    pub offset: usize,
    pub expected: BTreeSet<String>,
    pub found: String,
}

fn expected_list(e: &BTreeSet<String>) -> String {
    let v: Vec<&str> = e.iter().map(String::as_str).collect();
    if v.len() == 1 {
        v[0].to_string()
    } else {
        format!("one of {}", v.join(", "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(i64),
    Sym(char),
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Int(n) => write!(f, "`{n}`"),
            Tok::Sym(c) => write!(f, "`{c}`"),
            Tok::End => write!(f, "end of input"),
        }
    }
}

const SYMBOLS: &str = "()[],;=*.";

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < bytes.len() && (bytes[i] as char).is_ascii_alphanumeric() {
                i += 1;
            }
            out.push((Tok::Ident(text[start..i].to_string()), start));
        } else if c.is_ascii_digit() || c == '-' {
            let start = i;
            i += 1;
            while i < bytes.len() && (bytes[i] as char).is_ascii_digit() {
                i += 1;
            }
            let n = text[start..i].parse::<i64>().map_err(|_| ParseError {
                offset: start,
                expected: BTreeSet::from([String::from("integer")]),
                found: format!("`{}`", &text[start..i]),
            })?;
            out.push((Tok::Int(n), start));
        } else if SYMBOLS.contains(c) {
            out.push((Tok::Sym(c), i));
            i += 1;
        } else {
            let ch = text[i..].chars().next().unwrap_or('?');
            return Err(ParseError {
                offset: i,
                expected: BTreeSet::from([String::from("descriptor token")]),
                found: format!("`{ch}`"),
            });
        }
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

const ATOMS: [&str; 12] = ["CP", "Q", "S", "S1", "CI", "PB", "BlP", "BlX", "X6P123", "X4P12", "X6P13", "GS"];

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn error(&self, expected: &[&str]) -> ParseError {
        ParseError {
            offset: self.toks[self.pos].1,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: self.peek().to_string(),
        }
    }

    fn sym(&mut self, c: char) -> Result<(), ParseError> {
        if *self.peek() == Tok::Sym(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&[&format!("`{c}`")]))
        }
    }

    fn keyword(&mut self, k: &str) -> Result<(), ParseError> {
        if *self.peek() == Tok::Ident(k.to_string()) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&[&format!("`{k}`")]))
        }
    }

    fn int(&mut self) -> Result<i64, ParseError> {
        if let Tok::Int(n) = *self.peek() {
            self.pos += 1;
            Ok(n)
        } else {
            Err(self.error(&["integer"]))
        }
    }

    fn int_list(&mut self) -> Result<Vec<i64>, ParseError> {
        self.sym('[')?;
        let mut v = vec![self.int()?];
        while *self.peek() == Tok::Sym(',') {
            self.pos += 1;
            v.push(self.int()?);
        }
        self.sym(']')?;
        Ok(v)
    }

    fn paren_int(&mut self) -> Result<i64, ParseError> {
        self.sym('(')?;
        let n = self.int()?;
        self.sym(')')?;
        Ok(n)
    }

    fn expr(&mut self) -> Result<Descriptor, ParseError> {
        let mut lhs = self.term()?;
        while *self.peek() == Tok::Sym('*') {
            self.pos += 1;
            let rhs = self.term()?;
            lhs = Descriptor::Product(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Descriptor, ParseError> {
        let mut d = self.atom()?;
        while *self.peek() == Tok::Sym('.') {
            self.pos += 1;
            self.keyword("twist")?;
            let k = self.paren_int()?;
            d = Descriptor::Twist(Box::new(d), k);
        }
        Ok(d)
    }

    fn atom(&mut self) -> Result<Descriptor, ParseError> {
        let name = match self.peek().clone() {
            Tok::Ident(s) if ATOMS.contains(&s.as_str()) => s,
            Tok::Sym('(') => {
                self.pos += 1;
                let d = self.expr()?;
                self.sym(')')?;
                return Ok(d);
            }
            _ => {
                let mut exp: Vec<&str> = ATOMS.to_vec();
                exp.push("`(`");
                return Err(self.error(&exp));
            }
        };
        self.pos += 1;
        Ok(match name.as_str() {
            "CP" => Descriptor::ProjectiveSpace(self.paren_int()?),
            "Q" => Descriptor::Quadric(self.paren_int()?),
            "S" => Descriptor::Sphere(self.paren_int()?),
            "S1" => Descriptor::Circle,
            "BlP" => Descriptor::BlowupPoint(self.paren_int()?),
            "GS" => Descriptor::GrassmannianSection(self.paren_int()?),
            "X6P123" => Descriptor::Weighted { kind: WeightedKind::SexticP123, n: self.paren_int()? },
            "X4P12" => Descriptor::Weighted { kind: WeightedKind::QuarticP12, n: self.paren_int()? },
            "X6P13" => Descriptor::Weighted { kind: WeightedKind::SexticP13, n: self.paren_int()? },
            "BlX" => {
                self.sym('(')?;
                self.keyword("d")?;
                self.sym('=')?;
                let degree = self.int()?;
                self.sym(';')?;
                self.keyword("n")?;
                self.sym('=')?;
                let n = self.int()?;
                self.sym(')')?;
                Descriptor::BlowupHypersurface { degree, n }
            }
            "CI" => {
                self.sym('(')?;
                self.keyword("degrees")?;
                self.sym('=')?;
                self.sym('[')?;
                let mut degrees = vec![self.int_list()?];
                while *self.peek() == Tok::Sym(',') {
                    self.pos += 1;
                    degrees.push(self.int_list()?);
                }
                self.sym(']')?;
                self.sym(';')?;
                self.keyword("ambient")?;
                self.sym('=')?;
                let ambient = self.int_list()?;
                self.sym(')')?;
                Descriptor::CompleteIntersection { degrees, ambient }
            }
            "PB" => {
                self.sym('(')?;
                self.keyword("degrees")?;
                self.sym('=')?;
                let degrees = self.int_list()?;
                self.sym(';')?;
                self.keyword("genus")?;
                self.sym('=')?;
                let genus = self.int()?;
                self.sym(')')?;
                Descriptor::ProjectiveBundle { degrees, genus }
            }
            _ => unreachable!("atom list and match arms agree"),
        })
    }
}

/// Parses a descriptor; whitespace is ignored and `*` associates to the left.
pub fn parse_space(text: &str) -> Result<Descriptor, ParseError> {
    let mut p = Parser { toks: lex(text)?, pos: 0 };
    let d = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(p.error(&["`*`", "`.`", "end of input"]));
    }
    Ok(d)
}

fn join(v: &[i64]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

impl fmt::Display for Descriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Descriptor::ProjectiveSpace(n) => write!(f, "CP({n})"),
            Descriptor::Quadric(n) => write!(f, "Q({n})"),
            Descriptor::Sphere(k) => write!(f, "S({k})"),
            Descriptor::Circle => write!(f, "S1"),
            Descriptor::CompleteIntersection { degrees, ambient } => {
                let rows: Vec<String> = degrees.iter().map(|r| format!("[{}]", join(r))).collect();
                write!(f, "CI(degrees=[{}]; ambient=[{}])", rows.join(","), join(ambient))
            }
            Descriptor::ProjectiveBundle { degrees, genus } => {
                write!(f, "PB(degrees=[{}]; genus={genus})", join(degrees))
            }
            Descriptor::BlowupPoint(n) => write!(f, "BlP({n})"),
            Descriptor::BlowupHypersurface { degree, n } => write!(f, "BlX(d={degree}; n={n})"),
            Descriptor::Weighted { kind, n } => {
                let tag = match kind {
                    WeightedKind::SexticP123 => "X6P123",
                    WeightedKind::QuarticP12 => "X4P12",
                    WeightedKind::SexticP13 => "X6P13",
                };
                write!(f, "{tag}({n})")
            }
            Descriptor::GrassmannianSection(n) => write!(f, "GS({n})"),
            Descriptor::Product(a, b) => {
                if matches!(**b, Descriptor::Product(..)) {
                    write!(f, "{a} * ({b})")
                } else {
                    write!(f, "{a} * {b}")
                }
            }
            Descriptor::Twist(d, k) => {
                if matches!(**d, Descriptor::Product(..)) {
                    write!(f, "({d}).twist({k})")
                } else {
                    write!(f, "{d}.twist({k})")
                }
            }
        }
    }
}

fn nonneg(x: i64, what: &str) -> Result<u32, CatalogError> {
    u32::try_from(x).map_err(|_| CatalogError::InvalidArgument(format!("{what} must be a non-negative integer, got {x}")))
}

fn nonneg_all(v: &[i64], what: &str) -> Result<Vec<u32>, CatalogError> {
    v.iter().map(|&x| nonneg(x, what)).collect()
}

/// Builds the catalog space named by a descriptor.
pub fn build(d: &Descriptor) -> Result<Space, CatalogError> {
    match d {
        Descriptor::ProjectiveSpace(n) => catalog::projective_space(nonneg(*n, "n")?),
        Descriptor::Quadric(n) => catalog::quadric(nonneg(*n, "n")?),
        Descriptor::Sphere(k) => catalog::sphere(nonneg(*k, "k")?),
        Descriptor::Circle => catalog::circle(),
        Descriptor::CompleteIntersection { degrees, ambient } => {
            let degs: Vec<Vec<u32>> = degrees.iter().map(|r| nonneg_all(r, "degree")).collect::<Result<_, _>>()?;
            catalog::complete_intersection(&degs, &nonneg_all(ambient, "ambient dimension")?)
        }
        Descriptor::ProjectiveBundle { degrees, genus } => catalog::proj_bundle_over_curve(degrees, nonneg(*genus, "genus")?),
        Descriptor::BlowupPoint(n) => catalog::blowup_point(nonneg(*n, "n")?),
        Descriptor::BlowupHypersurface { degree, n } => {
            catalog::blowup_point_of_hypersurface(nonneg(*degree, "degree")?, nonneg(*n, "n")?)
        }
        Descriptor::Weighted { kind, n } => catalog::weighted_hypersurface(*kind, nonneg(*n, "n")?),
        Descriptor::GrassmannianSection(n) => catalog::grassmannian_section(nonneg(*n, "n")?),
        Descriptor::Product(a, b) => catalog::product(&build(a)?, &build(b)?),
        Descriptor::Twist(x, k) => catalog::twist_spin_c(&build(x)?, *k),
    }
}

//! Literals, DNF formulas and the DNF text format.
//!
//! Terms are separated by `|`, literals `x3` or `!x3` are joined by `&`.
//! Variables are numbered from 0. The variable count is one more than the
//! largest index used, unless the text starts with a `vars <n>` line.
//! `#` starts a comment; the term `1` is the empty conjunction and the
//! formula `0` has no terms.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::caps::MAX_VARIABLES;
use crate::error::{Error, Result};
use crate::function::{Assignment, BooleanFunction, PartialAssignment};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub var: usize,
    pub negated: bool,
}

impl Literal {
    pub fn pos(var: usize) -> Self {
        Literal { var, negated: false }
    }

    pub fn neg(var: usize) -> Self {
        Literal { var, negated: true }
    }

    pub fn negate(self) -> Self {
        Literal { var: self.var, negated: !self.negated }
    }

    pub fn eval(self, a: Assignment) -> bool {
        a.get(self.var) != self.negated
    }

    /// The variable value that gives this literal the value `v`.
    pub fn var_value_for(self, v: bool) -> bool {
        v != self.negated
    }

    /// The literal made true by `var = value`.
    pub fn satisfied_by(var: usize, value: bool) -> Self {
        Literal { var, negated: !value }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            write!(f, "!x{}", self.var)
        } else {
            write!(f, "x{}", self.var)
        }
    }
}

impl Serialize for Literal {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl FromStr for Literal {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (negated, rest) = match s.strip_prefix('!') {
            Some(r) => (true, r),
            None => (false, s),
        };
        let var = rest
            .strip_prefix('x')
            .and_then(|d| d.parse::<usize>().ok())
            .ok_or_else(|| Error::parse(1, 1, format!("not a literal: {s:?}")))?;
        Ok(Literal { var, negated })
    }
}

/// Sorted set of literals over distinct variables.
pub type LiteralSet = Vec<Literal>;

pub fn literal_vars(set: &[Literal]) -> u32 {
    set.iter().fold(0, |m, l| m | 1 << l.var)
}

pub fn format_literals(set: &[Literal]) -> String {
    let parts: Vec<String> = set.iter().map(Literal::to_string).collect();
    format!("{{{}}}", parts.join(", "))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dnf {
    n: usize,
    terms: Vec<LiteralSet>,
}

impl Dnf {
    pub fn new(n: usize, terms: Vec<LiteralSet>) -> Result<Self> {
        if n > MAX_VARIABLES {
            return Err(Error::Invalid(format!("{n} variables exceed the limit of {MAX_VARIABLES}")));
        }
        let mut normalized = Vec::with_capacity(terms.len());
        for mut term in terms {
            term.sort();
            for pair in term.windows(2) {
                if pair[0].var == pair[1].var {
                    return Err(Error::Invalid(format!("variable x{} repeated in a term", pair[0].var)));
                }
            }
            if let Some(l) = term.iter().find(|l| l.var >= n) {
                return Err(Error::VariableOutOfRange { var: l.var, n });
            }
            normalized.push(term);
        }
        Ok(Dnf { n, terms: normalized })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &[LiteralSet] {
        &self.terms
    }

    pub fn eval(&self, a: Assignment) -> bool {
        self.terms.iter().any(|t| t.iter().all(|l| l.eval(a)))
    }

    pub fn to_function(&self) -> Result<BooleanFunction> {
        BooleanFunction::from_fn(self.n, |a| self.eval(a))
    }

    /// Polarities with which `var` occurs: (positive, negated).
    pub fn polarities(&self, var: usize) -> (bool, bool) {
        self.terms.iter().flatten().filter(|l| l.var == var).fold((false, false), |(p, q), l| {
            (p || !l.negated, q || l.negated)
        })
    }

    /// The formula as a term set for `p`: drops falsified terms and
    /// satisfied literals. Used by callers that want a syntactic restriction.
    pub fn restrict(&self, p: &PartialAssignment) -> Vec<LiteralSet> {
        self.terms
            .iter()
            .filter(|t| t.iter().all(|l| p.get(l.var).is_none_or(|v| v != l.negated)))
            .map(|t| t.iter().copied().filter(|l| p.get(l.var).is_none()).collect())
            .collect()
    }

    pub fn parse(text: &str) -> Result<Self> {
        Parser::new(text).parse()
    }
}

impl fmt::Display for Dnf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, term) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" | ")?;
            }
            if term.is_empty() {
                f.write_str("1")?;
            }
            for (j, lit) in term.iter().enumerate() {
                if j > 0 {
                    f.write_str(" & ")?;
                }
                write!(f, "{lit}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for Dnf {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Dnf::parse(s)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Lit(Literal),
    One,
    Zero,
    And,
    Or,
    Vars(usize),
}

struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

struct Parser<'a> {
    text: &'a str,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser { text }
    }

    fn tokenize(&self) -> Result<Vec<Token>> {
        let mut out = Vec::new();
        for (li, raw_line) in self.text.lines().enumerate() {
            let line = li + 1;
            let body = raw_line.split('#').next().unwrap_or("");
            let chars: Vec<char> = body.chars().collect();
            let mut i = 0;
            while i < chars.len() {
                let column = i + 1;
                let c = chars[i];
                if c.is_whitespace() {
                    i += 1;
                    continue;
                }
                let tok = match c {
                    '&' => {
                        i += 1;
                        Tok::And
                    }
                    '|' => {
                        i += 1;
                        Tok::Or
                    }
                    '0' | '1' => {
                        i += 1;
                        if c == '1' { Tok::One } else { Tok::Zero }
                    }
                    '!' | 'x' => {
                        let negated = c == '!';
                        if negated {
                            i += 1;
                        }
                        if chars.get(i) != Some(&'x') {
                            return Err(Error::parse(line, i + 1, format!("token {}: expected a variable after '!'", out.len() + 1)));
                        }
                        i += 1;
                        let start = i;
                        while i < chars.len() && chars[i].is_ascii_digit() {
                            i += 1;
                        }
                        if start == i {
                            return Err(Error::parse(line, i + 1, format!("token {}: expected a variable index", out.len() + 1)));
                        }
                        let digits: String = chars[start..i].iter().collect();
                        let var = digits
                            .parse::<usize>()
                            .ok()
                            .filter(|&v| v < MAX_VARIABLES)
                            .ok_or_else(|| Error::parse(line, column, format!("variable index {digits} too large")))?;
                        Tok::Lit(Literal { var, negated })
                    }
                    'v' if body[body.char_indices().nth(i).unwrap().0..].starts_with("vars") => {
                        i += 4;
                        while i < chars.len() && chars[i].is_whitespace() {
                            i += 1;
                        }
                        let start = i;
                        while i < chars.len() && chars[i].is_ascii_digit() {
                            i += 1;
                        }
                        let digits: String = chars[start..i].iter().collect();
                        let n = digits
                            .parse::<usize>()
                            .map_err(|_| Error::parse(line, column, "expected a count after 'vars'"))?;
                        Tok::Vars(n)
                    }
                    other => {
                        return Err(Error::parse(line, column, format!("token {}: unexpected character {other:?}", out.len() + 1)));
                    }
                };
                out.push(Token { tok, line, column });
            }
        }
        Ok(out)
    }

    fn parse(&self) -> Result<Dnf> {
        let tokens = self.tokenize()?;
        let end = |idx: usize| {
            let (line, column) = tokens
                .last()
                .map(|t| (t.line, t.column + 1))
                .unwrap_or((1, 1));
            Error::parse(line, column, format!("token {}: unexpected end of input", idx + 1))
        };
        let mut pos = 0;
        let mut declared = None;
        if let Some(Token { tok: Tok::Vars(n), .. }) = tokens.first() {
            declared = Some(*n);
            pos = 1;
        }
        if pos == tokens.len() {
            return Err(end(pos));
        }
        if tokens.len() == pos + 1 && tokens[pos].tok == Tok::Zero {
            return Dnf::new(declared.unwrap_or(1), Vec::new());
        }
        let mut terms = Vec::new();
        loop {
            // term := factor ('&' factor)*
            let mut term = Vec::new();
            loop {
                let t = tokens.get(pos).ok_or_else(|| end(pos))?;
                match &t.tok {
                    Tok::Lit(l) => term.push(*l),
                    Tok::One => {}
                    _ => return Err(Error::parse(t.line, t.column, format!("token {}: expected a literal", pos + 1))),
                }
                pos += 1;
                match tokens.get(pos).map(|t| &t.tok) {
                    Some(Tok::And) => pos += 1,
                    _ => break,
                }
            }
            if term.iter().enumerate().any(|(i, a)| term[..i].iter().any(|b| b.var == a.var)) {
                let t = &tokens[pos - 1];
                return Err(Error::parse(t.line, t.column, "a variable occurs twice in one term"));
            }
            terms.push(term);
            match tokens.get(pos) {
                None => break,
                Some(Token { tok: Tok::Or, .. }) => pos += 1,
                Some(t) => return Err(Error::parse(t.line, t.column, format!("token {}: expected '|' or '&'", pos + 1))),
            }
        }
        let used = terms.iter().flatten().map(|l| l.var + 1).max().unwrap_or(1);
        let n = match declared {
            Some(n) if n < used => return Err(Error::VariableOutOfRange { var: used - 1, n }),
            Some(n) => n,
            None => used,
        };
        Dnf::new(n, terms)
    }
}

//! Text form of vectors and of the singular-vector corpus files.
//!
//! ```text
//! expr   := term (('+'|'-') term)*          leading sign allowed
//! term   := coeff ('*' factor)* | factor ('*' factor)*
//! coeff  := rational | rational '*' 's3' | 's3'
//! factor := ('L'|'J') '(' '-' integer ')' [ '^' integer ]
//! ```
//!
//! Whitespace is insignificant, a rational may be parenthesized, and factors
//! may also be juxtaposed without `*`. The written mode order is the
//! application order: the leftmost mode acts last.
//!
//! A corpus file holds one vector per record. Records are separated by blank
//! lines, `#` starts a comment, and a record may open with `name:` to label it.

use std::fmt;

use num_bigint::BigInt;
use thiserror::Error;

use crate::modes::Mode;
use crate::scalars::{QuadScalar, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("parse error at offset {pos}: {message}")]
pub struct ParseError {
    pub pos: usize,
    pub message: String,
}

/// A vector as written: coefficients with mode words, not yet canonical.
pub type TermList = Vec<(QuadScalar, Vec<Mode>)>;

struct Cursor<'a> {
    chars: Vec<(usize, char)>,
    i: usize,
    src: &'a str,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        Cursor { chars: src.char_indices().filter(|(_, c)| !c.is_whitespace()).collect(), i: 0, src }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.i).map(|&(_, c)| c)
    }

    fn peek2(&self) -> Option<char> {
        self.chars.get(self.i + 1).map(|&(_, c)| c)
    }

    fn pos(&self) -> usize {
        self.chars.get(self.i).map_or(self.src.len(), |&(p, _)| p)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { pos: self.pos(), message: message.into() })
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected '{c}'"))
        }
    }

    fn integer(&mut self) -> Result<BigInt, ParseError> {
        let start = self.i;
        let mut s = String::new();
        while let Some(c) = self.peek().filter(char::is_ascii_digit) {
            s.push(c);
            self.i += 1;
        }
        if start == self.i {
            return self.err("expected digits");
        }
        Ok(s.parse().expect("ascii digits"))
    }

    fn small_integer(&mut self) -> Result<i64, ParseError> {
        let pos = self.pos();
        let n = self.integer()?;
        i64::try_from(&n).ok().filter(|&v| v <= 1_000).ok_or(ParseError { pos, message: "integer too large".into() })
    }

    fn rational(&mut self) -> Result<Rational, ParseError> {
        let paren = self.eat('(');
        let neg = paren && self.eat('-');
        let num = self.integer()?;
        let value = if self.eat('/') {
            let pos = self.pos();
            let den = self.integer()?;
            if den == BigInt::from(0) {
                return Err(ParseError { pos, message: "zero denominator".into() });
            }
            Rational::new(num, den)
        } else {
            Rational::from_integer(num)
        };
        if paren {
            self.expect(')')?;
        }
        Ok(if neg { -value } else { value })
    }

    fn at_s3(&self) -> bool {
        self.peek() == Some('s') && self.peek2() == Some('3')
    }

    fn at_factor(&self) -> bool {
        matches!(self.peek(), Some('L') | Some('J'))
    }

    fn factor(&mut self, word: &mut Vec<Mode>) -> Result<(), ParseError> {
        let gen = self.peek();
        self.i += 1;
        self.expect('(')?;
        self.expect('-')?;
        let n = self.small_integer()?;
        if n == 0 {
            return self.err("mode index must be negative");
        }
        self.expect(')')?;
        let power = if self.eat('^') { self.small_integer()? } else { 1 };
        let mode = if gen == Some('L') { Mode::l(-n) } else { Mode::j(-n) };
        for _ in 0..power {
            word.push(mode);
        }
        Ok(())
    }

    fn term(&mut self) -> Result<(QuadScalar, Vec<Mode>), ParseError> {
        let mut coeff = QuadScalar::one();
        let mut word = Vec::new();
        if self.at_s3() {
            self.i += 2;
            coeff = QuadScalar::sqrt_m3();
        } else if self.at_factor() {
            self.factor(&mut word)?;
        } else if matches!(self.peek(), Some(c) if c.is_ascii_digit() || c == '(') {
            let r = self.rational()?;
            coeff = QuadScalar::from_rational(r);
            if self.peek() == Some('*') && self.chars.get(self.i + 1).map(|&(_, c)| c) == Some('s') {
                self.i += 1;
                if !self.at_s3() {
                    return self.err("expected 's3'");
                }
                self.i += 2;
                coeff = QuadScalar::new(Rational::from_integer(0.into()), coeff.rational_part().clone());
            }
        } else {
            return self.err("expected a coefficient or a mode");
        }
        loop {
            if self.eat('*') {
                if !self.at_factor() {
                    return self.err("expected L(..) or J(..) after '*'");
                }
                self.factor(&mut word)?;
            } else if self.at_factor() {
                self.factor(&mut word)?;
            } else {
                break;
            }
        }
        Ok((coeff, word))
    }
}

/// Parse one vector expression into its written terms.
pub fn parse_vector(text: &str) -> Result<TermList, ParseError> {
    let mut cur = Cursor::new(text);
    if cur.peek().is_none() {
        return cur.err("empty expression");
    }
    let mut out = Vec::new();
    let mut first = true;
    while cur.peek().is_some() {
        let neg = cur.eat('-');
        if !neg && !cur.eat('+') && !first {
            return cur.err("expected '+' or '-'");
        }
        let (c, w) = cur.term()?;
        out.push((if neg { -c } else { c }, w));
        first = false;
    }
    Ok(out)
}

/// Apply `J(n) ↦ −J(n)` to written terms.
pub fn flip_terms(terms: &TermList) -> TermList {
    terms
        .iter()
        .map(|(c, w)| {
            let odd = w.iter().filter(|m| m.gen == crate::modes::Gen::J).count() % 2 == 1;
            (if odd { -c } else { c.clone() }, w.clone())
        })
        .collect()
}

/// Render written terms back into the grammar.
pub fn render_terms(terms: &TermList) -> String {
    let mut out = String::new();
    for (i, (c, w)) in terms.iter().enumerate() {
        if i > 0 {
            out.push_str(" + ");
        }
        out.push_str(&format!("({c})"));
        for m in w {
            out.push_str(&format!("*{m}"));
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusRecord {
    pub name: String,
    pub line: usize,
    pub terms: TermList,
}

impl fmt::Display for CorpusRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.name, render_terms(&self.terms))
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("record starting at line {line}: {source}")]
pub struct CorpusError {
    pub line: usize,
    #[source]
    pub source: ParseError,
}

/// Parse a corpus file body.
pub fn parse_corpus(text: &str) -> Result<Vec<CorpusRecord>, CorpusError> {
    let mut records = Vec::new();
    let mut block = String::new();
    let mut start = 0;
    let flush = |block: &mut String, start: usize, records: &mut Vec<CorpusRecord>| -> Result<(), CorpusError> {
        if block.trim().is_empty() {
            block.clear();
            return Ok(());
        }
        let (name, body) = match block.split_once(':') {
            Some((n, b)) if !n.trim().is_empty() && n.trim().chars().all(|c| c.is_alphanumeric() || c == '_') => {
                (n.trim().to_string(), b.to_string())
            }
            _ => (format!("({})", records.len() + 1), block.clone()),
        };
        let terms = parse_vector(&body).map_err(|source| CorpusError { line: start, source })?;
        records.push(CorpusRecord { name, line: start, terms });
        block.clear();
        Ok(())
    };
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        if raw.trim().is_empty() {
            flush(&mut block, start, &mut records)?;
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        if block.is_empty() {
            start = i + 1;
        }
        block.push_str(line);
        block.push('\n');
    }
    flush(&mut block, start, &mut records)?;
    Ok(records)
}

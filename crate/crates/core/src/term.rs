//! Commutator expressions: the textual front end.
//!
//! Grammar (whitespace separates factors of a product):
//!
//! ```text
//! expr      := factor { factor }
//! factor    := atom [ "^" int ]
//! atom      := "e" | generator | "[" expr { "," expr }1.. "]" | "(" expr ")"
//! generator := "x" unsigned-int
//! int       := ["-"] unsigned-int
//! ```
//!
//! Commutators follow `[x,y] = x^-1 y^-1 x y`, and multi-entry commutators are
//! left-normed: `[a,b,c] = [[a,b],c]`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Index `i` of the generator `x_i` (1-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GeneratorSymbol(pub usize);

impl fmt::Display for GeneratorSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum WordExpr {
    Identity,
    Generator(GeneratorSymbol),
    /// At least two factors; use [`WordExpr::product`] to build one.
    Product(Vec<WordExpr>),
    Power(Box<WordExpr>, BigInt),
    /// At least two entries, interpreted left-normed.
    Commutator(Vec<WordExpr>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("generator x{index} out of range (r = {r})")]
    GeneratorOutOfRange { index: usize, r: usize },
    #[error("left-normed commutator needs a non-empty tail")]
    EmptyTail,
}

impl WordExpr {
    pub fn generator(index: usize) -> Self {
        WordExpr::Generator(GeneratorSymbol(index))
    }

    /// Product of `factors`; a single factor is returned as is and an empty
    /// list gives the identity.
    pub fn product(mut factors: Vec<WordExpr>) -> Self {
        match factors.len() {
            0 => WordExpr::Identity,
            1 => factors.pop().unwrap(),
            _ => WordExpr::Product(factors),
        }
    }

    pub fn power(base: WordExpr, exponent: impl Into<BigInt>) -> Self {
        WordExpr::Power(Box::new(base), exponent.into())
    }

    pub fn commutator(a: WordExpr, b: WordExpr) -> Self {
        WordExpr::Commutator(vec![a, b])
    }

    /// Largest generator index occurring in the expression (0 if none).
    pub fn max_generator(&self) -> usize {
        match self {
            WordExpr::Identity => 0,
            WordExpr::Generator(g) => g.0,
            WordExpr::Power(b, _) => b.max_generator(),
            WordExpr::Product(v) | WordExpr::Commutator(v) => {
                v.iter().map(WordExpr::max_generator).max().unwrap_or(0)
            }
        }
    }

    /// Nesting depth of commutators along the left spine.
    pub fn left_spine_depth(&self) -> usize {
        match self {
            WordExpr::Commutator(v) => v[0].left_spine_depth() + v.len() - 1,
            _ => 0,
        }
    }

    pub fn check_range(&self, r: usize) -> Result<(), ParseError> {
        let m = self.max_generator();
        if m > r {
            return Err(ParseError::GeneratorOutOfRange { index: m, r });
        }
        Ok(())
    }

    /// Evaluates the expression in any group.
    pub fn eval<G: Group + ?Sized>(&self, group: &G) -> G::Element {
        match self {
            WordExpr::Identity => group.identity(),
            WordExpr::Generator(g) => group.generator(g.0),
            WordExpr::Product(v) => {
                let mut acc = group.identity();
                for f in v {
                    acc = group.multiply(&acc, &f.eval(group));
                }
                acc
            }
            WordExpr::Power(b, n) => group.power(&b.eval(group), n),
            WordExpr::Commutator(v) => {
                let mut acc = v[0].eval(group);
                for t in &v[1..] {
                    acc = group.commutator(&acc, &t.eval(group));
                }
                acc
            }
        }
    }
}

/// Minimal group interface used to interpret expressions.
pub trait Group {
    type Element: Clone;

    fn identity(&self) -> Self::Element;
    /// `x_index`, 1-based.
    fn generator(&self, index: usize) -> Self::Element;
    fn multiply(&self, a: &Self::Element, b: &Self::Element) -> Self::Element;
    fn inverse(&self, a: &Self::Element) -> Self::Element;

    fn power(&self, a: &Self::Element, n: &BigInt) -> Self::Element {
        let (mut base, mut n) = if n.is_negative() {
            (self.inverse(a), -n)
        } else {
            (a.clone(), n.clone())
        };
        let mut acc = self.identity();
        let two = BigInt::from(2);
        while !n.is_zero() {
            if (&n % &two).is_one() {
                acc = self.multiply(&acc, &base);
            }
            n /= &two;
            if !n.is_zero() {
                base = self.multiply(&base, &base);
            }
        }
        acc
    }

    /// `[a,b] = a^-1 b^-1 a b`.
    fn commutator(&self, a: &Self::Element, b: &Self::Element) -> Self::Element {
        let ab = self.multiply(a, b);
        let ba = self.multiply(b, a);
        self.multiply(&self.inverse(&ba), &ab)
    }
}

/// `[[..[base,t1],t2],..,tm]`.
pub fn left_normed(base: WordExpr, tail: Vec<WordExpr>) -> Result<WordExpr, ParseError> {
    if tail.is_empty() {
        return Err(ParseError::EmptyTail);
    }
    let mut entries = Vec::with_capacity(tail.len() + 1);
    entries.push(base);
    entries.extend(tail);
    Ok(WordExpr::Commutator(entries))
}

pub fn parse_expr(text: &str, r: usize) -> Result<WordExpr, ParseError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    e.check_range(r)?;
    Ok(e)
}

pub fn format_expr(e: &WordExpr) -> String {
    e.to_string()
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> ParseError {
        ParseError::Syntax { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected '{}'", c as char)))
        }
    }

    fn expr(&mut self) -> Result<WordExpr, ParseError> {
        let mut factors = vec![self.factor()?];
        while matches!(self.peek(), Some(b'e' | b'x' | b'[' | b'(')) {
            factors.push(self.factor()?);
        }
        Ok(WordExpr::product(factors))
    }

    fn factor(&mut self) -> Result<WordExpr, ParseError> {
        let atom = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let n = self.int()?;
            return Ok(WordExpr::power(atom, n));
        }
        Ok(atom)
    }

    fn atom(&mut self) -> Result<WordExpr, ParseError> {
        match self.peek() {
            Some(b'e') => {
                self.pos += 1;
                Ok(WordExpr::Identity)
            }
            Some(b'x') => {
                self.pos += 1;
                let start = self.pos;
                let n = self.digits()?;
                let index: usize = n.parse().map_err(|_| ParseError::Syntax {
                    pos: start,
                    msg: "generator index too large".into(),
                })?;
                if index == 0 {
                    return Err(ParseError::Syntax { pos: start, msg: "generator indices start at 1".into() });
                }
                Ok(WordExpr::generator(index))
            }
            Some(b'[') => {
                self.pos += 1;
                let mut entries = vec![self.expr()?];
                while self.peek() == Some(b',') {
                    self.pos += 1;
                    entries.push(self.expr()?);
                }
                if entries.len() < 2 {
                    return Err(self.err("commutator needs at least two entries"));
                }
                self.expect(b']')?;
                Ok(WordExpr::Commutator(entries))
            }
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            _ => Err(self.err("expected 'e', generator, '[' or '('")),
        }
    }

    // Digits directly at the cursor, no leading whitespace.
    fn digits(&mut self) -> Result<&str, ParseError> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected digits"));
        }
        Ok(std::str::from_utf8(&self.src[start..self.pos]).unwrap())
    }

    fn int(&mut self) -> Result<BigInt, ParseError> {
        self.skip_ws();
        let neg = if self.src.get(self.pos) == Some(&b'-') {
            self.pos += 1;
            true
        } else {
            false
        };
        let d: BigInt = self.digits()?.parse().unwrap();
        Ok(if neg { -d } else { d })
    }
}

impl fmt::Display for WordExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WordExpr::Identity => write!(f, "e"),
            WordExpr::Generator(g) => write!(f, "{g}"),
            WordExpr::Product(v) => {
                for (i, x) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, " ")?;
                    }
                    // nested products and powers keep their grouping
                    if matches!(x, WordExpr::Product(_)) {
                        write!(f, "({x})")?;
                    } else {
                        write!(f, "{x}")?;
                    }
                }
                Ok(())
            }
            WordExpr::Power(b, n) => match **b {
                WordExpr::Product(_) | WordExpr::Power(..) => write!(f, "({b})^{n}"),
                _ => write!(f, "{b}^{n}"),
            },
            WordExpr::Commutator(v) => {
                write!(f, "[")?;
                for (i, x) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, "]")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: usize) -> WordExpr {
        WordExpr::generator(i)
    }

    #[test]
    fn parses_generator() {
        assert_eq!(parse_expr("x1", 2).unwrap(), x(1));
    }

    #[test]
    fn multi_entry_commutator_is_flat_and_left_normed() {
        let e = parse_expr("[x2,x1,x1]", 2).unwrap();
        assert_eq!(e, WordExpr::Commutator(vec![x(2), x(1), x(1)]));
        assert_eq!(e.left_spine_depth(), 2);
    }

    #[test]
    fn parses_powers_and_products() {
        let e = parse_expr("x2^-3 (x1 x2)^2", 2).unwrap();
        let expected = WordExpr::Product(vec![
            WordExpr::power(x(2), -3),
            WordExpr::power(WordExpr::Product(vec![x(1), x(2)]), 2),
        ]);
        assert_eq!(e, expected);
    }

    #[test]
    fn formats() {
        assert_eq!(format_expr(&x(1)), "x1");
        assert_eq!(format_expr(&WordExpr::commutator(x(2), x(1))), "[x2,x1]");
        assert_eq!(format_expr(&WordExpr::power(WordExpr::commutator(x(2), x(1)), 4)), "[x2,x1]^4");
        assert_eq!(format_expr(&WordExpr::power(WordExpr::power(x(1), 2), 3)), "(x1^2)^3");
    }

    #[test]
    fn left_normed_builds_spine() {
        assert_eq!(left_normed(x(2), vec![x(1)]).unwrap(), WordExpr::commutator(x(2), x(1)));
        let e = left_normed(x(2), vec![x(1); 3]).unwrap();
        assert_eq!(format_expr(&e), "[x2,x1,x1,x1]");
        assert_eq!(e.left_spine_depth(), 3);
        assert_eq!(left_normed(x(2), vec![]), Err(ParseError::EmptyTail));
    }

    #[test]
    fn errors() {
        assert!(matches!(parse_expr("x3", 2), Err(ParseError::GeneratorOutOfRange { index: 3, r: 2 })));
        assert!(matches!(parse_expr("[x1]", 2), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse_expr("x1 )", 2), Err(ParseError::Syntax { pos: 3, .. })));
        assert!(matches!(parse_expr("x0", 2), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse_expr("", 2), Err(ParseError::Syntax { .. })));
    }

    #[test]
    fn identity_literal() {
        assert_eq!(parse_expr("e", 1).unwrap(), WordExpr::Identity);
        assert_eq!(parse_expr("[x2,x1]^0 e", 2).unwrap().to_string(), "[x2,x1]^0 e");
    }
}

//! Text syntax for Hahn series and homogeneous polynomials.
//!
//! ```text
//! 3/4*t^(1/2) - t^(2) + O(t^(5))         a Hahn series
//! (1 + t) * x0^2 x1 + t^(1/3) x1^3        a cubic in two variables
//! ```
//!
//! Factors are joined by `*` or by juxtaposition. Exponents of `t` are
//! signed integers or parenthesized rationals; powers of variables and of
//! parenthesized groups are nonnegative integers.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::arith::Rat;
use crate::error::{Error, Result};
use crate::hahn::HahnSeries;
use crate::poly::{ExpVec, HomPoly};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Slash,
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    T,
    X(usize),
    BigO,
    End,
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(input: &str) -> Result<Vec<Spanned>> {
    let mut out = Vec::new();
    let chars: Vec<char> = input.chars().collect();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let err = |line, column, message: String| Error::Parse { line, column, message };
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        let single = match c {
            '/' => Some(Tok::Slash),
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            't' => Some(Tok::T),
            'O' => Some(Tok::BigO),
            _ => None,
        };
        if let Some(tok) = single {
            out.push(Spanned {
                tok,
                line: l0,
                column: c0,
            });
            i += 1;
            col += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            col += i - start;
            out.push(Spanned {
                tok: Tok::Num(digits.parse().expect("digits")),
                line: l0,
                column: c0,
            });
            continue;
        }
        if c == 'x' {
            let start = i + 1;
            let mut j = start;
            while j < chars.len() && chars[j].is_ascii_digit() {
                j += 1;
            }
            if j == start {
                return Err(err(l0, c0, "expected a variable index after 'x'".into()));
            }
            let digits: String = chars[start..j].iter().collect();
            let k = digits
                .parse::<usize>()
                .map_err(|_| err(l0, c0, "variable index too large".into()))?;
            col += j - i;
            i = j;
            out.push(Spanned {
                tok: Tok::X(k),
                line: l0,
                column: c0,
            });
            continue;
        }
        return Err(err(l0, c0, format!("unexpected character {c:?}")));
    }
    out.push(Spanned {
        tok: Tok::End,
        line,
        column: col,
    });
    Ok(out)
}

type Sparse = BTreeMap<Vec<u32>, HahnSeries>;

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    nvars: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, message: impl Into<String>) -> Error {
        let s = &self.toks[self.pos];
        Error::Parse {
            line: s.line,
            column: s.column,
            message: message.into(),
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error(format!("expected {what}")))
        }
    }

    fn unit(&self) -> Sparse {
        let mut m = Sparse::new();
        m.insert(vec![0; self.nvars], HahnSeries::one());
        m
    }

    fn expr(&mut self) -> Result<Sparse> {
        let mut acc = Sparse::new();
        let mut negate = match self.peek() {
            Tok::Minus => {
                self.bump();
                true
            }
            Tok::Plus => {
                self.bump();
                false
            }
            _ => false,
        };
        loop {
            let term = self.term()?;
            add_into(&mut acc, term, negate);
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    negate = false;
                }
                Tok::Minus => {
                    self.bump();
                    negate = true;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn starts_factor(&self) -> bool {
        matches!(self.peek(), Tok::Num(_) | Tok::T | Tok::X(_) | Tok::LParen | Tok::BigO)
    }

    fn term(&mut self) -> Result<Sparse> {
        let mut acc = self.factor()?;
        loop {
            if *self.peek() == Tok::Star {
                self.bump();
                let f = self.factor()?;
                acc = mul_sparse(&acc, &f);
            } else if self.starts_factor() {
                let f = self.factor()?;
                acc = mul_sparse(&acc, &f);
            } else {
                break;
            }
        }
        Ok(acc)
    }

    fn small_power(&mut self) -> Result<u32> {
        match self.bump() {
            Tok::Num(n) => n
                .to_u32()
                .filter(|&k| k <= 10_000)
                .ok_or_else(|| self.error("power too large")),
            _ => Err(self.error("expected a nonnegative integer power")),
        }
    }

    fn signed_rational(&mut self) -> Result<Rat> {
        let neg = if *self.peek() == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        let numer = match self.bump() {
            Tok::Num(n) => n,
            _ => return Err(self.error("expected a number")),
        };
        let value = if *self.peek() == Tok::Slash {
            self.bump();
            let denom = match self.bump() {
                Tok::Num(d) if !d.is_zero() => d,
                _ => return Err(self.error("expected a nonzero denominator")),
            };
            Rat::new(numer, denom)
        } else {
            Rat::from_integer(numer)
        };
        Ok(if neg { -value } else { value })
    }

    fn t_exponent(&mut self) -> Result<Rat> {
        if *self.peek() != Tok::Caret {
            return Ok(Rat::from_integer(1.into()));
        }
        self.bump();
        if *self.peek() == Tok::LParen {
            self.bump();
            let e = self.signed_rational()?;
            self.expect(Tok::RParen, "')'")?;
            Ok(e)
        } else {
            let neg = if *self.peek() == Tok::Minus {
                self.bump();
                true
            } else {
                false
            };
            match self.bump() {
                Tok::Num(n) => {
                    let r = Rat::from_integer(n);
                    Ok(if neg { -r } else { r })
                }
                _ => Err(self.error("expected an exponent; write rational exponents as t^(p/q)")),
            }
        }
    }

    fn factor(&mut self) -> Result<Sparse> {
        let zero_key = vec![0u32; self.nvars];
        let base = match self.bump() {
            Tok::Num(n) => {
                let value = if *self.peek() == Tok::Slash {
                    self.bump();
                    match self.bump() {
                        Tok::Num(d) if !d.is_zero() => Rat::new(n, d),
                        _ => return Err(self.error("expected a nonzero denominator")),
                    }
                } else {
                    Rat::from_integer(n)
                };
                let mut m = Sparse::new();
                let c = HahnSeries::constant(value);
                if !c.is_zero() {
                    m.insert(zero_key, c);
                }
                return self.maybe_power(m);
            }
            Tok::T => {
                let e = self.t_exponent()?;
                let mut m = Sparse::new();
                m.insert(zero_key, HahnSeries::t_pow(e));
                return Ok(m);
            }
            Tok::X(k) => {
                if k >= self.nvars {
                    self.pos -= 1;
                    return Err(if self.nvars == 0 {
                        self.error("variables are not allowed in a scalar")
                    } else {
                        self.error(format!("variable x{k} out of range (have x0..x{})", self.nvars - 1))
                    });
                }
                let mut key = zero_key;
                key[k] = 1;
                let mut m = Sparse::new();
                m.insert(key, HahnSeries::one());
                m
            }
            Tok::LParen => {
                let inner = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                inner
            }
            Tok::BigO => {
                self.expect(Tok::LParen, "'(' after O")?;
                self.expect(Tok::T, "t inside O(...)")?;
                let p = self.t_exponent()?;
                self.expect(Tok::RParen, "')'")?;
                let mut m = Sparse::new();
                m.insert(zero_key, HahnSeries::big_o(p));
                return Ok(m);
            }
            Tok::Minus => {
                let inner = self.factor()?;
                let mut out = Sparse::new();
                add_into(&mut out, inner, true);
                return Ok(out);
            }
            _ => {
                self.pos = self.pos.saturating_sub(1);
                return Err(self.error("expected a number, t, a variable or '('"));
            }
        };
        self.maybe_power(base)
    }

    fn maybe_power(&mut self, base: Sparse) -> Result<Sparse> {
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let k = self.small_power()?;
        let mut acc = self.unit();
        for _ in 0..k {
            acc = mul_sparse(&acc, &base);
        }
        Ok(acc)
    }
}

fn add_into(acc: &mut Sparse, other: Sparse, negate: bool) {
    for (k, v) in other {
        let v = if negate { v.neg() } else { v };
        let merged = match acc.remove(&k) {
            Some(prev) => prev.add(&v),
            None => v,
        };
        if !merged.is_zero() {
            acc.insert(k, merged);
        }
    }
}

fn mul_sparse(a: &Sparse, b: &Sparse) -> Sparse {
    let mut out = Sparse::new();
    for (ka, va) in a {
        for (kb, vb) in b {
            let key: Vec<u32> = ka.iter().zip(kb).map(|(x, y)| x + y).collect();
            let mut one = Sparse::new();
            one.insert(key, va.mul(vb));
            add_into(&mut out, one, false);
        }
    }
    out
}

fn parse_sparse(input: &str, nvars: usize) -> Result<Sparse> {
    let toks = lex(input)?;
    let mut p = Parser { toks, pos: 0, nvars };
    if *p.peek() == Tok::End {
        return Err(p.error("empty expression"));
    }
    let out = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(out)
}

/// Parses a scalar such as `1/2 - t^(1/3) + O(t^(4))`.
pub fn parse_hahn(input: &str) -> Result<HahnSeries> {
    let mut m = parse_sparse(input, 0)?;
    Ok(m.remove(&Vec::new()).unwrap_or_else(HahnSeries::zero))
}

/// Parses a homogeneous polynomial in `x0, ..., x{nvars-1}`.
pub fn parse_poly(input: &str, nvars: usize) -> Result<HomPoly> {
    if nvars == 0 {
        return Err(Error::invalid("a polynomial needs at least one variable"));
    }
    let m = parse_sparse(input, nvars)?;
    let mut degree = None;
    let mut terms = BTreeMap::new();
    for (k, v) in m {
        let deg: u32 = k.iter().sum();
        match degree {
            None => degree = Some(deg),
            Some(d) if d != deg => {
                return Err(Error::Parse {
                    line: 1,
                    column: 1,
                    message: format!("polynomial is not homogeneous (degrees {d} and {deg})"),
                })
            }
            _ => {}
        }
        terms.insert(ExpVec::new(k), v);
    }
    HomPoly::from_terms(nvars, degree.unwrap_or(0) as usize, terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat, LogVal};

    #[test]
    fn scalars() {
        let a = parse_hahn("2*t^(1/2) + 3 * t^(1/2)").unwrap();
        assert_eq!(a, HahnSeries::monomial(int(5), rat(1, 2)));
        let b = parse_hahn("-t^-2").unwrap();
        assert_eq!(b, HahnSeries::monomial(int(-1), int(-2)));
        let c = parse_hahn("(1 + t)^2").unwrap();
        assert_eq!(c.to_string(), "1 + 2*t^(1) + t^(2)");
        let d = parse_hahn("1 + O(t^(3/2))").unwrap();
        assert_eq!(d.precision(), &LogVal::Finite(rat(3, 2)));
    }

    #[test]
    fn polynomials() {
        let f = parse_poly("x0^2 + 2 x0 x1 + x1^2", 2).unwrap();
        assert_eq!(f, parse_poly("(x0 + x1)^2", 2).unwrap());
        let g = parse_poly("t^(1/2)*x0 + x1", 2).unwrap();
        assert_eq!(g.degree(), 1);
        assert_eq!(g.terms().len(), 2);
    }

    #[test]
    fn errors_carry_positions() {
        match parse_poly("x0 +\n  x7", 2) {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (2, 3)),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_poly("x0 + x1^2", 2).is_err());
        assert!(parse_hahn("x0").is_err());
        assert!(parse_hahn("").is_err());
        assert!(parse_hahn("1/0").is_err());
    }
}

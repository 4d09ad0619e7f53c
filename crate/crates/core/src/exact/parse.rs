//! Recursive-descent reader for exact literals.
//!
//! Grammar (juxtaposition is multiplication, `sqrt` and `√` bind to the next
//! atom, `i` is the imaginary unit):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary | atom)*
//! unary  := ('+' | '-') unary | atom
//! atom   := number | 'i' | '(' expr ')' | ('sqrt' | '√') atom
//! ```
//!
//! Numbers may carry a decimal point and are read exactly.

use rug::ops::Pow;
use rug::{Integer, Rational};

use super::ExactReal;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Rational),
    Plus,
    Minus,
    Star,
    Slash,
    LParen,
    RParen,
    Sqrt,
    I,
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            c if c.is_whitespace() => i += 1,
            '+' => {
                out.push(Tok::Plus);
                i += 1;
            }
            '-' | '−' => {
                out.push(Tok::Minus);
                i += 1;
            }
            '*' | '·' => {
                out.push(Tok::Star);
                i += 1;
            }
            '/' => {
                out.push(Tok::Slash);
                i += 1;
            }
            '(' => {
                out.push(Tok::LParen);
                i += 1;
            }
            ')' => {
                out.push(Tok::RParen);
                i += 1;
            }
            '√' => {
                out.push(Tok::Sqrt);
                i += 1;
            }
            'i' => {
                out.push(Tok::I);
                i += 1;
            }
            's' => {
                let word: String = chars[i..].iter().take(4).collect();
                if word == "sqrt" {
                    out.push(Tok::Sqrt);
                    i += 4;
                } else {
                    return Err(Error::Parse(format!("unexpected input at '{word}'")));
                }
            }
            c if c.is_ascii_digit() || c == '.' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.' || chars[i] == '_') {
                    i += 1;
                }
                let text: String = chars[start..i].iter().filter(|&&c| c != '_').collect();
                out.push(Tok::Num(parse_number(&text)?));
            }
            other => return Err(Error::Parse(format!("unexpected character '{other}'"))),
        }
    }
    Ok(out)
}

fn parse_number(text: &str) -> Result<Rational> {
    let bad = || Error::Parse(format!("malformed number '{text}'"));
    let (int_part, frac_part) = match text.split_once('.') {
        Some((a, b)) => (a, b),
        None => (text, ""),
    };
    if frac_part.contains('.') || (int_part.is_empty() && frac_part.is_empty()) {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let num = Integer::from_str_radix(&digits, 10).map_err(|_| bad())?;
    let den = Integer::from(10).pow(frac_part.len() as u32);
    Ok(Rational::from((num, den)))
}

/// Value `re + im * i` with exact parts.
#[derive(Clone, Debug)]
struct Gauss {
    re: ExactReal,
    im: ExactReal,
}

impl Gauss {
    fn real(x: ExactReal) -> Self {
        Gauss {
            re: x,
            im: ExactReal::zero(),
        }
    }

    fn add(&self, o: &Self) -> Result<Self> {
        Ok(Gauss {
            re: self.re.try_add(&o.re)?,
            im: self.im.try_add(&o.im)?,
        })
    }

    fn sub(&self, o: &Self) -> Result<Self> {
        Ok(Gauss {
            re: self.re.try_sub(&o.re)?,
            im: self.im.try_sub(&o.im)?,
        })
    }

    fn mul(&self, o: &Self) -> Result<Self> {
        let re = self.re.try_mul(&o.re)?.try_sub(&self.im.try_mul(&o.im)?)?;
        let im = self.re.try_mul(&o.im)?.try_add(&self.im.try_mul(&o.re)?)?;
        Ok(Gauss { re, im })
    }

    fn div(&self, o: &Self) -> Result<Self> {
        if !o.im.is_zero() {
            return Err(Error::Parse("division by a non-real quantity".into()));
        }
        Ok(Gauss {
            re: self.re.try_div(&o.re)?,
            im: self.im.try_div(&o.re)?,
        })
    }

    fn neg(&self) -> Self {
        Gauss {
            re: -&self.re,
            im: -&self.im,
        }
    }
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<Gauss> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?)?;
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Gauss> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    acc = acc.mul(&self.unary()?)?;
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    acc = acc.div(&self.unary()?)?;
                }
                Some(Tok::Num(_) | Tok::LParen | Tok::Sqrt | Tok::I) => {
                    acc = acc.mul(&self.atom()?)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Gauss> {
        match self.peek() {
            Some(Tok::Plus) => {
                self.pos += 1;
                self.unary()
            }
            Some(Tok::Minus) => {
                self.pos += 1;
                Ok(self.unary()?.neg())
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Gauss> {
        match self.next() {
            Some(Tok::Num(q)) => Ok(Gauss::real(ExactReal::from(q))),
            Some(Tok::I) => Ok(Gauss {
                re: ExactReal::zero(),
                im: ExactReal::one(),
            }),
            Some(Tok::LParen) => {
                let v = self.expr()?;
                match self.next() {
                    Some(Tok::RParen) => Ok(v),
                    _ => Err(Error::Parse("missing ')'".into())),
                }
            }
            Some(Tok::Sqrt) => {
                let arg = self.atom()?;
                if !arg.im.is_zero() {
                    return Err(Error::Parse("square root of a non-real quantity".into()));
                }
                Ok(Gauss::real(arg.re.sqrt()?))
            }
            Some(t) => Err(Error::Parse(format!("unexpected token {t:?}"))),
            None => Err(Error::Parse("unexpected end of input".into())),
        }
    }
}

/// Parses `re + im*i`, returning both parts exactly.
pub fn parse_complex(s: &str) -> Result<(ExactReal, ExactReal)> {
    let toks = tokenize(s)?;
    if toks.is_empty() {
        return Err(Error::Parse("empty input".into()));
    }
    let mut p = Parser { toks, pos: 0 };
    let v = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse(format!(
            "trailing input after position {}",
            p.pos
        )));
    }
    Ok((v.re, v.im))
}

/// Parses a real literal such as `3/4`, `-sqrt(3)/2` or `1/2 + 3/4*sqrt(7)`.
pub fn parse_real(s: &str) -> Result<ExactReal> {
    let (re, im) = parse_complex(s)?;
    if !im.is_zero() {
        return Err(Error::Parse(format!("'{s}' is not real")));
    }
    Ok(re)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> ExactReal {
        ExactReal::ratio(n, d)
    }

    #[test]
    fn plain_rationals() {
        assert_eq!(parse_real("3/4").unwrap(), q(3, 4));
        assert_eq!(parse_real("-7").unwrap(), q(-7, 1));
        assert_eq!(parse_real("0.125").unwrap(), q(1, 8));
        assert_eq!(parse_real(" 1 / 2 + 1/3 ").unwrap(), q(5, 6));
    }

    #[test]
    fn surds() {
        let x = parse_real("1/2 + 3/4*sqrt(7)").unwrap();
        assert_eq!(x, ExactReal::new(Rational::from((1, 2)), Rational::from((3, 4)), 7).unwrap());
        assert_eq!(parse_real("√12").unwrap(), parse_real("2*sqrt(3)").unwrap());
        assert_eq!(parse_real("sqrt(3/4)").unwrap(), parse_real("sqrt(3)/2").unwrap());
        assert_eq!(parse_real("-sqrt(2)").unwrap().signum(), -1);
    }

    #[test]
    fn tau_forms() {
        let (a, b) = parse_complex("i").unwrap();
        assert_eq!((a, b), (q(0, 1), q(1, 1)));
        let (a, b) = parse_complex("1/2 + 2*sqrt(1)i").unwrap();
        assert_eq!((a, b), (q(1, 2), q(2, 1)));
        let (a, b) = parse_complex("1/2 + (1/2)*sqrt(3)i").unwrap();
        assert_eq!(a, q(1, 2));
        assert_eq!(b, parse_real("sqrt(3)/2").unwrap());
        let (a, b) = parse_complex("1/2+(√3/2)i").unwrap();
        assert_eq!(a, q(1, 2));
        assert_eq!(b, parse_real("sqrt(3)/2").unwrap());
        let (a, b) = parse_complex("2/5 + 6/5i").unwrap();
        assert_eq!((a, b), (q(2, 5), q(6, 5)));
        let (a, b) = parse_complex("1/2 + 161/480*i").unwrap();
        assert_eq!((a, b), (q(1, 2), q(161, 480)));
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_complex("").is_err());
        assert!(parse_complex("1/2 +").is_err());
        assert!(parse_complex("(1").is_err());
        assert!(parse_complex("1..2").is_err());
        assert!(parse_complex("x").is_err());
        assert!(parse_real("i").is_err());
        assert!(parse_complex("1/i").is_err());
        assert!(matches!(parse_real("sqrt(-1)"), Err(Error::NegativeRadicand(_))));
    }
}

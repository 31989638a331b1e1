//! Closed-form real expressions for basis generators, evaluable at any
//! precision: `log(2)`, `log(3 + exp(-1))`, `pi/2`, `sqrt(2)`, `7/3`.

use std::fmt;

use crate::error::Error;
use crate::precision::HpReal;

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    /// Decimal literal, kept as text so it can be evaluated at any precision.
    Num(String),
    Pi,
    E,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    Log(Box<Expr>),
    Exp(Box<Expr>),
    Sqrt(Box<Expr>),
}

impl Expr {
    pub fn int(n: i64) -> Self {
        Expr::Num(n.to_string())
    }

    pub fn log_of(n: u64) -> Self {
        Expr::Log(Box::new(Expr::Num(n.to_string())))
    }

    pub fn parse(src: &str) -> Result<Self, Error> {
        let tokens = tokenize(src)?;
        let mut p = Parser { tokens, pos: 0 };
        let e = p.sum()?;
        if p.pos != p.tokens.len() {
            return Err(Error::Parse(format!("trailing input in expression {src:?}")));
        }
        Ok(e)
    }

    pub fn eval(&self, bits: usize) -> HpReal {
        let w = bits + 32;
        let v = match self {
            Expr::Num(s) => HpReal::parse(s, w).unwrap_or_else(|| HpReal::from_f64(f64::NAN, w)),
            Expr::Pi => HpReal::pi(w),
            Expr::E => HpReal::from_f64(1.0, w).exp(),
            Expr::Neg(a) => a.eval(w).neg(),
            Expr::Add(a, b) => a.eval(w).add(&b.eval(w)),
            Expr::Sub(a, b) => a.eval(w).sub(&b.eval(w)),
            Expr::Mul(a, b) => a.eval(w).mul(&b.eval(w)),
            Expr::Div(a, b) => a.eval(w).div(&b.eval(w)),
            Expr::Pow(a, n) => a.eval(w).powi(*n as usize),
            Expr::Log(a) => a.eval(w).ln(),
            Expr::Exp(a) => a.eval(w).exp(),
            Expr::Sqrt(a) => a.eval(w).sqrt(),
        };
        v.with_bits(bits)
    }

    pub fn eval_f64(&self) -> f64 {
        match self {
            Expr::Num(s) => s.parse().unwrap_or(f64::NAN),
            Expr::Pi => std::f64::consts::PI,
            Expr::E => std::f64::consts::E,
            Expr::Neg(a) => -a.eval_f64(),
            Expr::Add(a, b) => a.eval_f64() + b.eval_f64(),
            Expr::Sub(a, b) => a.eval_f64() - b.eval_f64(),
            Expr::Mul(a, b) => a.eval_f64() * b.eval_f64(),
            Expr::Div(a, b) => a.eval_f64() / b.eval_f64(),
            Expr::Pow(a, n) => a.eval_f64().powi(*n as i32),
            Expr::Log(a) => a.eval_f64().ln(),
            Expr::Exp(a) => a.eval_f64().exp(),
            Expr::Sqrt(a) => a.eval_f64().sqrt(),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(s) => f.write_str(s),
            Expr::Pi => f.write_str("pi"),
            Expr::E => f.write_str("e"),
            Expr::Neg(a) => write!(f, "-({a})"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "({a} * {b})"),
            Expr::Div(a, b) => write!(f, "({a} / {b})"),
            Expr::Pow(a, n) => write!(f, "({a})^{n}"),
            Expr::Log(a) => write!(f, "log({a})"),
            Expr::Exp(a) => write!(f, "exp({a})"),
            Expr::Sqrt(a) => write!(f, "sqrt({a})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Op(char),
}

fn tokenize(src: &str) -> Result<Vec<Tok>, Error> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            // exponent part, e.g. 1.5e-3
            if i < chars.len()
                && (chars[i] == 'e' || chars[i] == 'E')
                && i + 1 < chars.len()
                && (chars[i + 1].is_ascii_digit()
                    || ((chars[i + 1] == '-' || chars[i + 1] == '+')
                        && i + 2 < chars.len()
                        && chars[i + 2].is_ascii_digit()))
            {
                i += 2;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
            }
            out.push(Tok::Num(chars[start..i].iter().collect()));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character {c:?} in {src:?}")));
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos)
    }

    fn eat_op(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn sum(&mut self) -> Result<Expr, Error> {
        let mut lhs = self.product()?;
        loop {
            if self.eat_op('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.product()?));
            } else if self.eat_op('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.product()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn product(&mut self) -> Result<Expr, Error> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat_op('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat_op('/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, Error> {
        if self.eat_op('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        if self.eat_op('+') {
            return self.unary();
        }
        let base = self.atom()?;
        if self.eat_op('^') {
            match self.tokens.get(self.pos).cloned() {
                Some(Tok::Num(s)) => {
                    self.pos += 1;
                    let n: u32 = s
                        .parse()
                        .map_err(|_| Error::Parse(format!("exponent must be a small integer, got {s}")))?;
                    return Ok(Expr::Pow(Box::new(base), n));
                }
                _ => return Err(Error::Parse("exponent must be a small integer".into())),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, Error> {
        match self.tokens.get(self.pos).cloned() {
            Some(Tok::Num(s)) => {
                self.pos += 1;
                Ok(Expr::Num(s))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.sum()?;
                if !self.eat_op(')') {
                    return Err(Error::Parse("missing ')'".into()));
                }
                Ok(e)
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                match name.as_str() {
                    "pi" => Ok(Expr::Pi),
                    "e" => Ok(Expr::E),
                    "log" | "ln" | "exp" | "sqrt" => {
                        if !self.eat_op('(') {
                            return Err(Error::Parse(format!("expected '(' after {name}")));
                        }
                        let arg = Box::new(self.sum()?);
                        if !self.eat_op(')') {
                            return Err(Error::Parse("missing ')'".into()));
                        }
                        Ok(match name.as_str() {
                            "exp" => Expr::Exp(arg),
                            "sqrt" => Expr::Sqrt(arg),
                            _ => Expr::Log(arg),
                        })
                    }
                    other => Err(Error::Parse(format!("unknown identifier {other:?}"))),
                }
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_evaluates() {
        let e = Expr::parse("log(3 + exp(-1))").unwrap();
        let want = (3.0 + (-1.0f64).exp()).ln();
        assert!((e.eval_f64() - want).abs() < 1e-15);
        assert!((e.eval(200).to_f64() - want).abs() < 1e-15);
        assert_eq!(Expr::parse("2^10").unwrap().eval_f64(), 1024.0);
        assert!((Expr::parse("pi/2").unwrap().eval_f64() - std::f64::consts::FRAC_PI_2).abs() < 1e-16);
        assert_eq!(Expr::parse("1.5e-3").unwrap().eval_f64(), 1.5e-3);
    }

    #[test]
    fn display_round_trips() {
        let e = Expr::parse("log(2) * 3 - sqrt(5)/7").unwrap();
        let again = Expr::parse(&e.to_string()).unwrap();
        assert!((e.eval_f64() - again.eval_f64()).abs() < 1e-15);
    }

    #[test]
    fn rejects_garbage() {
        assert!(Expr::parse("log(2").is_err());
        assert!(Expr::parse("foo(1)").is_err());
        assert!(Expr::parse("2 $ 3").is_err());
    }
}

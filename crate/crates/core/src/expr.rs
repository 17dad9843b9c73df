//! Tiny expression grammar for torus elements, e.g. `U+U^-1`, `0.5*(V - V^-1)`, `2iUV^-2`.

use crate::error::{Error, Result};
use crate::torus::{TorusElement, C64};

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    theta: f64,
}

impl Parser<'_> {
    fn peek(&mut self) -> Option<u8> {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        self.src.get(self.pos).copied()
    }

    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Parse(format!("{msg} at offset {}", self.pos)))
    }

    fn expr(&mut self) -> Result<TorusElement> {
        let mut acc = TorusElement::zero(self.theta)?;
        let mut sign = 1.0;
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                sign = -1.0;
            }
            Some(b'+') => self.pos += 1,
            _ => {}
        }
        loop {
            let t = self.term()?.scale_re(sign);
            acc = &acc + &t;
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    sign = 1.0;
                }
                Some(b'-') => {
                    self.pos += 1;
                    sign = -1.0;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<TorusElement> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let f = self.factor()?;
                    acc = &acc * &f;
                }
                Some(c)
                    if c == b'('
                        || c == b'U'
                        || c == b'V'
                        || c == b'i'
                        || c == b'.'
                        || c.is_ascii_digit() =>
                {
                    let f = self.factor()?;
                    acc = &acc * &f;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn exponent(&mut self) -> Result<i64> {
        if self.peek() != Some(b'^') {
            return Ok(1);
        }
        self.pos += 1;
        let paren = self.peek() == Some(b'(');
        if paren {
            self.pos += 1;
        }
        let start = self.pos;
        if matches!(self.peek(), Some(b'-') | Some(b'+')) {
            self.pos += 1;
        }
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        let k: i64 = match text.parse() {
            Ok(k) => k,
            Err(_) => return self.err("bad exponent"),
        };
        if paren {
            if self.peek() != Some(b')') {
                return self.err("expected `)`");
            }
            self.pos += 1;
        }
        Ok(k)
    }

    fn factor(&mut self) -> Result<TorusElement> {
        let one = C64::new(1.0, 0.0);
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(self.factor()?.scale_re(-1.0))
            }
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return self.err("expected `)`");
                }
                self.pos += 1;
                Ok(e)
            }
            Some(b'U') => {
                self.pos += 1;
                let k = self.exponent()?;
                TorusElement::monomial(self.theta, k, 0, one)
            }
            Some(b'V') => {
                self.pos += 1;
                let k = self.exponent()?;
                TorusElement::monomial(self.theta, 0, k, one)
            }
            Some(b'i') => {
                self.pos += 1;
                TorusElement::monomial(self.theta, 0, 0, C64::i())
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => {
                let start = self.pos;
                while self.pos < self.src.len() {
                    let c = self.src[self.pos];
                    let exp_sign = (c == b'-' || c == b'+')
                        && self.pos > start
                        && matches!(self.src[self.pos - 1], b'e' | b'E');
                    if c.is_ascii_digit() || c == b'.' || c == b'e' || c == b'E' || exp_sign {
                        self.pos += 1;
                    } else {
                        break;
                    }
                }
                let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                match text.parse::<f64>() {
                    Ok(x) => TorusElement::monomial(self.theta, 0, 0, C64::new(x, 0.0)),
                    Err(_) => self.err("bad number"),
                }
            }
            _ => self.err("expected U, V, i, a number or `(`"),
        }
    }
}

/// Parse an element of the torus at `theta`.
pub fn parse_element(src: &str, theta: f64) -> Result<TorusElement> {
    let mut p = Parser {
        src: src.as_bytes(),
        pos: 0,
        theta,
    };
    if p.peek().is_none() {
        return Err(Error::Parse("empty expression".into()));
    }
    let e = p.expr()?;
    if p.peek().is_some() {
        return p.err("unexpected trailing input");
    }
    Ok(e)
}

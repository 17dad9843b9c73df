use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::torus::element::{TorusElement, C64};

const MAGIC: &[u8; 4] = b"NCTE";
const VERSION: u8 = 1;

impl fmt::Display for TorusElement {
    /// `theta=<x>` then `m n re im` per entry, lexicographic.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "theta={}", self.theta())?;
        for ((m, n), c) in self.iter() {
            writeln!(f, "{m} {n} {} {}", c.re, c.im)?;
        }
        Ok(())
    }
}

fn parse_num<T: FromStr>(s: Option<&str>, line: usize) -> Result<T> {
    s.ok_or_else(|| Error::Parse(format!("line {line}: missing field")))?
        .parse()
        .map_err(|_| Error::Parse(format!("line {line}: bad number")))
}

impl FromStr for TorusElement {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut lines = s.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines
            .next()
            .ok_or_else(|| Error::Parse("empty input".into()))?;
        let theta: f64 = header
            .trim()
            .strip_prefix("theta=")
            .ok_or_else(|| Error::Parse("expected `theta=` header".into()))?
            .parse()
            .map_err(|_| Error::Parse("bad theta".into()))?;
        let mut out = TorusElement::zero(theta)?.with_prune(0.0);
        for (i, line) in lines {
            let mut it = line.split_whitespace();
            let m: i64 = parse_num(it.next(), i + 1)?;
            let n: i64 = parse_num(it.next(), i + 1)?;
            let re: f64 = parse_num(it.next(), i + 1)?;
            let im: f64 = parse_num(it.next(), i + 1)?;
            if it.next().is_some() {
                return Err(Error::Parse(format!("line {}: trailing fields", i + 1)));
            }
            out.insert(m, n, C64::new(re, im));
        }
        Ok(out.with_prune(crate::torus::element::DEFAULT_PRUNE))
    }
}

impl TorusElement {
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(21 + 32 * self.len());
        out.extend_from_slice(MAGIC);
        out.push(VERSION);
        out.extend_from_slice(&self.theta().to_le_bytes());
        out.extend_from_slice(&(self.len() as u64).to_le_bytes());
        for ((m, n), c) in self.iter() {
            out.extend_from_slice(&m.to_le_bytes());
            out.extend_from_slice(&n.to_le_bytes());
            out.extend_from_slice(&c.re.to_le_bytes());
            out.extend_from_slice(&c.im.to_le_bytes());
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        fn take<'a>(b: &mut &'a [u8], k: usize) -> Result<&'a [u8]> {
            if b.len() < k {
                return Err(Error::Parse("truncated binary element".into()));
            }
            let (head, tail) = b.split_at(k);
            *b = tail;
            Ok(head)
        }
        let mut b = bytes;
        if take(&mut b, 4)? != MAGIC {
            return Err(Error::Parse("bad magic".into()));
        }
        let version = take(&mut b, 1)?[0];
        if version != VERSION {
            return Err(Error::Parse(format!("unsupported version {version}")));
        }
        let f8 = |b: &mut &[u8]| -> Result<[u8; 8]> { Ok(take(b, 8)?.try_into().unwrap()) };
        let theta = f64::from_le_bytes(f8(&mut b)?);
        let count = u64::from_le_bytes(f8(&mut b)?);
        let mut out = TorusElement::zero(theta)?.with_prune(0.0);
        for _ in 0..count {
            let m = i64::from_le_bytes(f8(&mut b)?);
            let n = i64::from_le_bytes(f8(&mut b)?);
            let re = f64::from_le_bytes(f8(&mut b)?);
            let im = f64::from_le_bytes(f8(&mut b)?);
            out.insert(m, n, C64::new(re, im));
        }
        if !b.is_empty() {
            return Err(Error::Parse("trailing bytes".into()));
        }
        Ok(out.with_prune(crate::torus::element::DEFAULT_PRUNE))
    }
}

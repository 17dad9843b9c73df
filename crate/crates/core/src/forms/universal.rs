use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::torus::{TorusElement, C64};

/// `Σ aᵢ δ(bᵢ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct UniversalOneForm {
    pub terms: Vec<(TorusElement, TorusElement)>,
}

/// `Σ aᵢ δ(bᵢ) δ(cᵢ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct UniversalTwoForm {
    pub terms: Vec<(TorusElement, TorusElement, TorusElement)>,
}

impl UniversalOneForm {
    pub fn new() -> Self {
        Self { terms: Vec::new() }
    }

    pub fn term(a: TorusElement, b: TorusElement) -> Self {
        Self {
            terms: vec![(a, b)],
        }
    }

    pub fn push(&mut self, a: TorusElement, b: TorusElement) {
        self.terms.push((a, b));
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.terms.extend(other.terms.iter().cloned());
        out
    }

    pub fn scale(&self, c: C64) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(a, b)| (a.scale(c), b.clone()))
                .collect(),
        }
    }

    /// `c·w`.
    pub fn left_mul(&self, c: &TorusElement) -> Self {
        Self {
            terms: self.terms.iter().map(|(a, b)| (c * a, b.clone())).collect(),
        }
    }

    /// `w·c`, using `δ(b)c = δ(bc) − bδ(c)`.
    pub fn right_mul(&self, c: &TorusElement) -> Self {
        let mut out = Self::new();
        for (a, b) in &self.terms {
            out.push(a.clone(), b * c);
            out.push(-&(a * b), c.clone());
        }
        out
    }

    /// `δ(Σ aᵢδbᵢ) = Σ δ(aᵢ)δ(bᵢ)`, written with unit left factors.
    pub fn delta_lift(&self) -> UniversalTwoForm {
        UniversalTwoForm {
            terms: self
                .terms
                .iter()
                .map(|(a, b)| (a.scalar_like(C64::new(1.0, 0.0)), a.clone(), b.clone()))
                .collect(),
        }
    }
}

impl Default for UniversalOneForm {
    fn default() -> Self {
        Self::new()
    }
}

impl UniversalTwoForm {
    pub fn new() -> Self {
        Self { terms: Vec::new() }
    }

    pub fn push(&mut self, a: TorusElement, b: TorusElement, c: TorusElement) {
        self.terms.push((a, b, c));
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.terms.extend(other.terms.iter().cloned());
        out
    }

    pub fn scale(&self, k: C64) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(a, b, c)| (a.scale(k), b.clone(), c.clone()))
                .collect(),
        }
    }
}

impl Default for UniversalTwoForm {
    fn default() -> Self {
        Self::new()
    }
}

pub fn delta_lift(w: &UniversalOneForm) -> UniversalTwoForm {
    w.delta_lift()
}

fn write_terms<'a>(
    f: &mut fmt::Formatter<'_>,
    arity: usize,
    terms: impl Iterator<Item = Vec<&'a TorusElement>>,
) -> fmt::Result {
    for (i, elems) in terms.enumerate() {
        writeln!(f, "term {i} arity={arity}")?;
        for e in elems {
            write!(f, "{e}")?;
            writeln!(f, "end")?;
        }
    }
    Ok(())
}

fn parse_terms(s: &str, arity: usize) -> Result<Vec<Vec<TorusElement>>> {
    let mut out = Vec::new();
    let mut lines = s.lines().filter(|l| !l.trim().is_empty()).peekable();
    while let Some(header) = lines.next() {
        let mut f = header.split_whitespace();
        let ok = f.next() == Some("term")
            && f.next().and_then(|i| i.parse::<usize>().ok()) == Some(out.len())
            && f.next() == Some(format!("arity={arity}").as_str());
        if !ok {
            return Err(Error::Parse(format!("bad term header `{header}`")));
        }
        let mut elems = Vec::with_capacity(arity + 1);
        for _ in 0..=arity {
            let mut block = String::new();
            loop {
                let line = lines
                    .next()
                    .ok_or_else(|| Error::Parse("unterminated element block".into()))?;
                if line.trim() == "end" {
                    break;
                }
                block.push_str(line);
                block.push('\n');
            }
            elems.push(block.parse::<TorusElement>()?);
        }
        out.push(elems);
    }
    Ok(out)
}

impl fmt::Display for UniversalOneForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, 1, self.terms.iter().map(|(a, b)| vec![a, b]))
    }
}

impl fmt::Display for UniversalTwoForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, 2, self.terms.iter().map(|(a, b, c)| vec![a, b, c]))
    }
}

impl FromStr for UniversalOneForm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(Self {
            terms: parse_terms(s, 1)?
                .into_iter()
                .map(|mut v| {
                    let b = v.pop().unwrap();
                    (v.pop().unwrap(), b)
                })
                .collect(),
        })
    }
}

impl FromStr for UniversalTwoForm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(Self {
            terms: parse_terms(s, 2)?
                .into_iter()
                .map(|mut v| {
                    let c = v.pop().unwrap();
                    let b = v.pop().unwrap();
                    (v.pop().unwrap(), b, c)
                })
                .collect(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_element;

    const TH: f64 = 0.37;

    fn e(s: &str) -> TorusElement {
        parse_element(s, TH).unwrap()
    }

    #[test]
    fn lift_of_x() {
        let x = UniversalOneForm {
            terms: vec![(e("U^-1"), e("U")), (e("U"), e("U^-1"))],
        };
        let l = x.delta_lift();
        assert_eq!(l.terms.len(), 2);
        assert_eq!(l.terms[0], (e("1"), e("U^-1"), e("U")));
        assert_eq!(l.terms[1], (e("1"), e("U"), e("U^-1")));
    }

    #[test]
    fn lift_is_linear() {
        let w1 = UniversalOneForm::term(e("U+V"), e("V^2"));
        let w2 = UniversalOneForm::term(e("2i"), e("U^-1V"));
        assert_eq!(
            w1.add(&w2).delta_lift(),
            w1.delta_lift().add(&w2.delta_lift())
        );
    }

    #[test]
    fn text_roundtrip() {
        let w = UniversalOneForm {
            terms: vec![(e("U^-1 + 0.25i"), e("U")), (e("U"), e("U^-1V^3"))],
        };
        let back: UniversalOneForm = w.to_string().parse().unwrap();
        assert_eq!(back, w);
        let t = w.delta_lift();
        let back2: UniversalTwoForm = t.to_string().parse().unwrap();
        assert_eq!(back2, t);
        assert!("term 1 arity=1\n".parse::<UniversalOneForm>().is_err());
        assert!(w.to_string().parse::<UniversalTwoForm>().is_err());
    }
}

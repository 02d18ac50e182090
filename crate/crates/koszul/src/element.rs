//! Linear combinations of paths: the elements of `kQ` and of quotient
//! algebras.

use crate::quiver::{Path, Quiver};
use crate::scalar::Scalar;
use std::collections::BTreeMap;

/// A finite linear combination of paths with nonzero exact coefficients.
/// Terms are kept in the canonical path order, so equality is structural and
/// serialization is reproducible. The zero element is the empty map.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PathElement {
    terms: BTreeMap<Path, Scalar>,
}

impl PathElement {
    pub fn zero() -> PathElement {
        PathElement::default()
    }

    pub fn from_term(path: Path, coeff: Scalar) -> PathElement {
        let mut e = PathElement::zero();
        e.add_term(path, coeff);
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Path, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, path: &Path) -> Option<&Scalar> {
        self.terms.get(path)
    }

    pub fn add_term(&mut self, path: Path, coeff: Scalar) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.remove(&path) {
            None => {
                self.terms.insert(path, coeff);
            }
            Some(old) => {
                let sum = old.add(&coeff);
                if !sum.is_zero() {
                    self.terms.insert(path, sum);
                }
            }
        }
    }

    pub fn add(&self, other: &PathElement) -> PathElement {
        let mut out = self.clone();
        for (p, c) in &other.terms {
            out.add_term(p.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &PathElement) -> PathElement {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> PathElement {
        PathElement {
            terms: self
                .terms
                .iter()
                .map(|(p, c)| (p.clone(), c.neg()))
                .collect(),
        }
    }

    pub fn scale(&self, s: &Scalar) -> PathElement {
        if s.is_zero() {
            return PathElement::zero();
        }
        PathElement {
            terms: self
                .terms
                .iter()
                .map(|(p, c)| (p.clone(), c.mul(s)))
                .collect(),
        }
    }

    /// The product in the path algebra `kQ`: bilinear extension of
    /// concatenation, with non-composable products dropping to zero.
    pub fn multiply(&self, other: &PathElement) -> PathElement {
        let mut out = PathElement::zero();
        for (p, cp) in &self.terms {
            for (q, cq) in &other.terms {
                if let Some(pq) = p.compose(q) {
                    out.add_term(pq, cp.mul(cq));
                }
            }
        }
        out
    }

    /// True when all terms are parallel paths of one length.
    pub fn is_uniform(&self) -> bool {
        let mut it = self.terms.keys();
        match it.next() {
            None => true,
            Some(first) => it.all(|p| {
                p.origin() == first.origin()
                    && p.terminal() == first.terminal()
                    && p.len() == first.len()
            }),
        }
    }

    /// Splits into maximal uniform summands, grouped and ordered by
    /// `(origin, terminal, length)`. Summing the parts recovers the element.
    pub fn uniform_parts(&self) -> Vec<((usize, usize, usize), PathElement)> {
        let mut groups: BTreeMap<(usize, usize, usize), PathElement> = BTreeMap::new();
        for (p, c) in &self.terms {
            groups
                .entry((p.origin(), p.terminal(), p.len()))
                .or_default()
                .add_term(p.clone(), c.clone());
        }
        groups.into_iter().collect()
    }

    pub fn display(&self, q: &Quiver) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (p, c)) in self.terms.iter().enumerate() {
            let coeff = c.to_string();
            let (sign, mag) = match coeff.strip_prefix('-') {
                Some(rest) => ("-", rest.to_string()),
                None => ("+", coeff),
            };
            if i == 0 {
                if sign == "-" {
                    out.push_str("- ");
                }
            } else {
                out.push_str(if sign == "-" { " - " } else { " + " });
            }
            if mag == "1" {
                out.push_str(&p.display(q));
            } else {
                out.push_str(&format!("{}*{}", mag, p.display(q)));
            }
        }
        out
    }
}

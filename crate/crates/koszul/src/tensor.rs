//! Linear combinations of fixed-length arrow words: elements of tensor
//! powers of the arrow space. Generator spaces of the resolution live here.

use crate::element::PathElement;
use crate::quiver::{Path, Quiver};
use crate::scalar::{FieldSpec, Scalar};
use std::collections::BTreeMap;

/// A composable arrow sequence.
pub type Word = Vec<usize>;

/// A linear combination of length-`n` words (the degree is implicit and all
/// terms of one element share it).
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct WordElem {
    pub terms: BTreeMap<Word, Scalar>,
}

impl WordElem {
    pub fn zero() -> WordElem {
        WordElem::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, w: Word, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&w) {
            None => {
                self.terms.insert(w, c);
            }
            Some(old) => {
                let s = old.add(&c);
                if !s.is_zero() {
                    self.terms.insert(w, s);
                }
            }
        }
    }

    pub fn add(&self, other: &WordElem) -> WordElem {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, s: &Scalar) -> WordElem {
        if s.is_zero() {
            return WordElem::zero();
        }
        WordElem {
            terms: self
                .terms
                .iter()
                .map(|(w, c)| (w.clone(), c.mul(s)))
                .collect(),
        }
    }

    /// Concatenation of words; non-composable concatenations vanish.
    pub fn tensor(&self, other: &WordElem, quiver: &Quiver) -> WordElem {
        let mut out = WordElem::zero();
        for (u, cu) in &self.terms {
            for (v, cv) in &other.terms {
                if let (Some(lu), Some(fv)) = (u.last(), v.first()) {
                    if quiver.target(*lu) != quiver.source(*fv) {
                        continue;
                    }
                } // empty words act as identities on matching vertices; the
                  // degree-0 case is handled by the caller.
                let mut w = u.clone();
                w.extend_from_slice(v);
                out.add_term(w, cu.mul(cv));
            }
        }
        out
    }

    /// Word endpoints; `None` for the zero element.
    pub fn endpoints(&self, quiver: &Quiver) -> Option<(usize, usize)> {
        let w = self.terms.keys().next()?;
        Some((quiver.source(w[0]), quiver.target(*w.last().unwrap())))
    }

    pub fn is_uniform(&self, quiver: &Quiver) -> bool {
        let mut eps = self
            .terms
            .keys()
            .map(|w| (quiver.source(w[0]), quiver.target(*w.last().unwrap()), w.len()));
        match eps.next() {
            None => true,
            Some(first) => eps.all(|e| e == first),
        }
    }

    /// Reads a homogeneous uniform `kQ` element as a word combination.
    pub fn from_path_element(e: &PathElement) -> Option<WordElem> {
        let mut out = WordElem::zero();
        let mut len = None;
        for (p, c) in e.iter() {
            if p.len() == 0 {
                return None;
            }
            match len {
                None => len = Some(p.len()),
                Some(l) if l == p.len() => {}
                _ => return None,
            }
            out.add_term(p.arrows().to_vec(), c.clone());
        }
        Some(out)
    }

    pub fn to_path_element(&self, quiver: &Quiver) -> PathElement {
        let mut out = PathElement::zero();
        for (w, c) in &self.terms {
            let p = Path::from_arrows(quiver, w).expect("words are composable");
            out.add_term(p, c.clone());
        }
        out
    }

    pub fn display(&self, quiver: &Quiver) -> String {
        self.to_path_element(quiver).display(quiver)
    }
}

/// All composable words of length `n`, in lexicographic arrow order.
pub fn composable_words(quiver: &Quiver, n: usize) -> Vec<Word> {
    assert!(n >= 1);
    let mut words: Vec<Word> = (0..quiver.arrow_count()).map(|a| vec![a]).collect();
    for _ in 1..n {
        let mut next = Vec::new();
        for w in &words {
            let at = quiver.target(*w.last().unwrap());
            for a in 0..quiver.arrow_count() {
                if quiver.source(a) == at {
                    let mut w2 = w.clone();
                    w2.push(a);
                    next.push(w2);
                }
            }
        }
        words = next;
    }
    words
}

/// Coordinate vector of `e` over the given word list.
pub fn coords(e: &WordElem, words: &[Word], field: FieldSpec) -> Vec<Scalar> {
    let index: BTreeMap<&Word, usize> =
        words.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let mut v = vec![field.zero(); words.len()];
    for (w, c) in &e.terms {
        let i = *index.get(w).expect("word outside coordinate system");
        v[i] = c.clone();
    }
    v
}

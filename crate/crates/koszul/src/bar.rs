//! The reduced bar complex as a low-degree verification oracle.
//!
//! Generators of the built resolution embed into the bar complex via their
//! tensor forms; compatibility of the two differentials and the two
//! diagonals there cross-validates the comultiplicative tables against an
//! independent construction.

use crate::element::PathElement;
use crate::quiver::Path;
use crate::resolution::{KComplex, KElem, KKElem};
use crate::scalar::Scalar;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BarError {
    #[error("bar embedding needs tensor forms; manual resolutions have none")]
    NoTensorForm,
    #[error("degree {0} exceeds the embedded-oracle range")]
    Degree(usize),
}

/// An element of the degree-`n` reduced bar term: combinations of
/// `(n+2)`-slot tensors whose slots are algebra basis paths with matching
/// endpoints.
pub type BarElem = BTreeMap<Vec<Path>, Scalar>;

/// An element of the tensor square of the bar complex over the algebra, in
/// merged form: the split position plus a flattened slot list.
pub type BarBarElem = BTreeMap<(usize, Vec<Path>), Scalar>;

fn add_bar(e: &mut BarElem, slots: Vec<Path>, c: Scalar) {
    if c.is_zero() {
        return;
    }
    match e.remove(&slots) {
        None => {
            e.insert(slots, c);
        }
        Some(old) => {
            let s = old.add(&c);
            if !s.is_zero() {
                e.insert(slots, s);
            }
        }
    }
}

fn add_barbar(e: &mut BarBarElem, key: (usize, Vec<Path>), c: Scalar) {
    if c.is_zero() {
        return;
    }
    match e.remove(&key) {
        None => {
            e.insert(key, c);
        }
        Some(old) => {
            let s = old.add(&c);
            if !s.is_zero() {
                e.insert(key, s);
            }
        }
    }
}

/// `iota(e^n_i) = 1 (x) ftilde^n_i (x) 1`: the generator's tensor form
/// flanked by its endpoint idempotents.
pub fn bar_embed(k: &KComplex, n: usize, i: usize) -> Result<BarElem, BarError> {
    let quiver = k.quiver();
    let gen = &k.degrees[n].gens[i];
    let mut out = BarElem::new();
    if n == 0 {
        out.insert(
            vec![Path::vertex(gen.origin), Path::vertex(gen.origin)],
            k.field().one(),
        );
        return Ok(out);
    }
    let tensor = gen.tensor.as_ref().ok_or(BarError::NoTensorForm)?;
    for (word, c) in &tensor.terms {
        let mut slots = Vec::with_capacity(n + 2);
        slots.push(Path::vertex(gen.origin));
        for &a in word {
            slots.push(Path::arrow(quiver, a));
        }
        slots.push(Path::vertex(gen.terminal));
        add_bar(&mut out, slots, c.clone());
    }
    Ok(out)
}

/// Embeds a whole formal section of degree `n` (bimodule coefficients act on
/// the outer slots).
pub fn kelem_to_bar(k: &KComplex, n: usize, e: &KElem) -> Result<BarElem, BarError> {
    let mut out = BarElem::new();
    for ((i, l, r), c) in e {
        let base = bar_embed(k, n, *i)?;
        for (slots, cc) in &base {
            // multiply the first slot by l on the left, the last by r on the right
            let first = l
                .compose(&slots[0])
                .expect("embedding slots start at the generator origin");
            let last = slots[slots.len() - 1]
                .compose(r)
                .expect("embedding slots end at the generator terminal");
            let mut new_slots = slots.clone();
            new_slots[0] = first;
            let len = new_slots.len();
            new_slots[len - 1] = last;
            // outer slots must stay inside the algebra basis
            let mut expanded: Vec<(Vec<Path>, Scalar)> =
                vec![(Vec::new(), c.mul(cc))];
            for (si, slot) in new_slots.iter().enumerate() {
                let reduced = if si == 0 || si == len - 1 {
                    k.nf(&PathElement::from_term(slot.clone(), k.field().one()))
                } else {
                    PathElement::from_term(slot.clone(), k.field().one())
                };
                let mut next = Vec::new();
                for (prefix, coeff) in &expanded {
                    for (p, pc) in reduced.iter() {
                        let mut np = prefix.clone();
                        np.push(p.clone());
                        next.push((np, coeff.mul(pc)));
                    }
                }
                expanded = next;
            }
            for (slots, coeff) in expanded {
                add_bar(&mut out, slots, coeff);
            }
        }
    }
    Ok(out)
}

/// The bar differential: the alternating sum of adjacent multiplications,
/// with products reduced to quotient normal form.
pub fn bar_diff(k: &KComplex, e: &BarElem) -> BarElem {
    let f = k.field();
    let mut out = BarElem::new();
    for (slots, c) in e {
        let n = slots.len() - 2;
        for i in 0..=n {
            let sign = if i % 2 == 0 { f.one() } else { f.one().neg() };
            let prod = k.nf(&PathElement::from_term(slots[i].clone(), f.one())
                .multiply(&PathElement::from_term(slots[i + 1].clone(), f.one())));
            for (p, pc) in prod.iter() {
                let mut new_slots = Vec::with_capacity(slots.len() - 1);
                new_slots.extend_from_slice(&slots[..i]);
                new_slots.push(p.clone());
                new_slots.extend_from_slice(&slots[i + 2..]);
                add_bar(&mut out, new_slots, c.mul(&sign).mul(pc));
            }
        }
    }
    out
}

/// The bar diagonal: split at every inner position, tensoring over the
/// algebra; the two inserted identity slots merge into one vertex slot.
pub fn bar_diag(_k: &KComplex, e: &BarElem) -> BarBarElem {
    let mut out = BarBarElem::new();
    for (slots, c) in e {
        let n = slots.len() - 2;
        for i in 0..=n {
            // (a_0 .. a_i (x) 1) (x)_Lambda (1 (x) a_{i+1} .. a_{n+1})
            // merged: slots 0..=i, vertex, slots i+1..
            let v = slots[i].terminal();
            debug_assert_eq!(v, slots[i + 1].origin());
            let mut merged = Vec::with_capacity(slots.len() + 1);
            merged.extend_from_slice(&slots[..=i]);
            merged.push(Path::vertex(v));
            merged.extend_from_slice(&slots[i + 1..]);
            add_barbar(&mut out, (i, merged), c.clone());
        }
    }
    out
}

/// `(iota (x) iota)` applied to a diagonal value, in the same merged form as
/// [`bar_diag`].
pub fn kk_to_bar(k: &KComplex, n: usize, e: &KKElem) -> Result<BarBarElem, BarError> {
    let mut out = BarBarElem::new();
    for ((v, p, q, l, m, r), c) in e {
        // left factor: l * iota(e^v_p), right factor: iota(e^(n-v)_q) * r,
        // joined across the tensor with the middle coefficient m.
        let mut left = KElem::new();
        left.insert((*p, l.clone(), Path::vertex(k.degrees[*v].gens[*p].terminal)), k.field().one());
        let left_bar = kelem_to_bar(k, *v, &left)?;
        let mut right = KElem::new();
        right.insert(
            (*q, Path::vertex(k.degrees[n - *v].gens[*q].origin), r.clone()),
            k.field().one(),
        );
        let right_bar = kelem_to_bar(k, n - *v, &right)?;
        for (ls, lc) in &left_bar {
            for (rs, rc) in &right_bar {
                // merge: last slot of left * m * first slot of right
                let mid = k.nf(&PathElement::from_term(
                    ls[ls.len() - 1].clone(),
                    k.field().one(),
                )
                .multiply(&PathElement::from_term(m.clone(), k.field().one()))
                .multiply(&PathElement::from_term(rs[0].clone(), k.field().one())));
                for (mp, mc) in mid.iter() {
                    let mut slots = Vec::with_capacity(ls.len() + rs.len() - 1);
                    slots.extend_from_slice(&ls[..ls.len() - 1]);
                    slots.push(mp.clone());
                    slots.extend_from_slice(&rs[1..]);
                    // split marker = bar degree of the left factor
                    add_barbar(&mut out, (*v, slots), c.mul(lc).mul(rc).mul(mc));
                }
            }
        }
    }
    Ok(out)
}

/// Checks `delta iota = iota d` and `(iota (x) iota) Delta = Delta_bar iota`
/// for all generators of degree <= `max_degree`.
pub fn check_bar_compatibility(
    k: &KComplex,
    max_degree: usize,
) -> Result<Vec<(usize, usize, bool, bool)>, BarError> {
    if max_degree > k.max_degree() {
        return Err(BarError::Degree(max_degree));
    }
    let mut rows = Vec::new();
    for n in 1..=max_degree {
        for i in 0..k.gen_count(n) {
            let embedded = bar_embed(k, n, i)?;
            let lhs = bar_diff(k, &embedded);
            let rhs = kelem_to_bar(k, n - 1, &k.degrees[n].diff[i])?;
            let diff_ok = lhs == rhs;

            let mut gen_elem = KElem::new();
            gen_elem.insert(
                (
                    i,
                    Path::vertex(k.degrees[n].gens[i].origin),
                    Path::vertex(k.degrees[n].gens[i].terminal),
                ),
                k.field().one(),
            );
            let kk = crate::resolution::diag_apply(k, n, &gen_elem);
            let lhs_d = kk_to_bar(k, n, &kk)?;
            let rhs_d = bar_diag(k, &embedded);
            let diag_ok = lhs_d == rhs_d;
            rows.push((n, i, diff_ok, diag_ok));
        }
    }
    Ok(rows)
}

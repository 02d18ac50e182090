//! Homotopy lifting maps for Hochschild cocycles, the scalar recurrences
//! that generate them in the single-scalar case, Gerstenhaber brackets, and
//! the Maurer-Cartan test.
//!
//! For an `n`-cocycle `eta`, a homotopy lifting `psi` lowers homological
//! degree by `n - 1` and satisfies, degree by degree,
//!
//! ```text
//!   d psi - (-1)^(1-n) psi d = (eta (x) 1 - 1 (x) eta) Delta
//! ```
//!
//! with the sign convention `(1 (x) eta)(x (x) y) = (-1)^(n deg x) x eta(y)`
//! and `psi` vanishing on degrees below `n`. Internal grading restricts the
//! bimodule coefficients of `psi` to total path length `l - 1` where `l` is
//! a value length of the cocycle, which pins the solution space to a small
//! exact linear system per generator.

use crate::cohomology::{apply_cochain, cohomology_basis, Cochain};
use crate::element::PathElement;
use crate::linalg::{row_space_basis, Mat};
use crate::quiver::Path;
use crate::resolution::{
    diff_apply, kelem_add, kelem_add_term, kelem_is_zero, kelem_scale, KComplex, KElem,
};
use crate::scalar::Scalar;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LiftError {
    #[error("cocycle degree must be between 1 and the built degree")]
    Degree,
    #[error("maximum degree {0} exceeds the built resolution")]
    MaxDegree(usize),
    #[error("no homotopy lifting in degree {degree} at generator {generator}: the input is not a cocycle or the resolution tables are inconsistent")]
    NoSolution { degree: usize, generator: usize },
    #[error("the supplied map fails the homotopy lifting relation in degree {0}")]
    Unverified(usize),
    #[error("the cochain is not a cocycle")]
    NotCocycle,
    #[error("the irreducible basis is incomplete under the caps and the needed coefficient length {0} is out of its exhaustive range")]
    BasisIncomplete(usize),
    #[error("recurrence inapplicable at degree {degree}, generator {generator}: {reason}")]
    Recurrence {
        degree: usize,
        generator: usize,
        reason: String,
    },
}

/// A solved homotopy lifting: per degree, per generator, a formal section
/// one cocycle-degree-minus-one lower.
#[derive(Clone, Debug)]
pub struct HomotopyLifting {
    pub cocycle_degree: usize,
    /// `maps[m][r]` is the value on generator `r` of degree `m`, living in
    /// degree `m - cocycle_degree + 1`. Degrees below the cocycle degree are
    /// zero.
    pub maps: Vec<Vec<KElem>>,
}

impl HomotopyLifting {
    pub fn max_degree(&self) -> usize {
        self.maps.len() - 1
    }

    pub fn zero(k: &KComplex, cocycle_degree: usize, max_degree: usize) -> HomotopyLifting {
        HomotopyLifting {
            cocycle_degree,
            maps: (0..=max_degree)
                .map(|m| vec![KElem::new(); k.gen_count(m)])
                .collect(),
        }
    }

    /// Applies the lifting to a formal section of degree `m`.
    pub fn apply(&self, k: &KComplex, m: usize, e: &KElem) -> KElem {
        let f = k.field();
        let mut out = KElem::new();
        for ((i, l, r), c) in e {
            let img = crate::resolution::kelem_bimod(
                k,
                &PathElement::from_term(l.clone(), f.one()),
                &self.maps[m][*i],
                &PathElement::from_term(r.clone(), f.one()),
            );
            for (key, s) in img {
                kelem_add_term(&mut out, key, s.mul(c));
            }
        }
        out
    }
}

/// `(eta (x) 1 - 1 (x) eta) Delta` on generator `r` of degree `m`, an
/// element of degree `m - n`.
pub fn lifting_rhs(k: &KComplex, eta: &Cochain, m: usize, r: usize) -> KElem {
    let n = eta.degree;
    let f = k.field();
    let mut out = KElem::new();
    if m < n {
        return out;
    }
    for t in &k.degrees[m].diag[r] {
        // (eta (x) 1) acts on terms whose left factor has degree n
        if t.v == n {
            let l = PathElement::from_term(t.left.clone(), f.one());
            let mid = PathElement::from_term(t.mid.clone(), f.one());
            let val = k.nf(&l.multiply(&eta.values[t.p]).multiply(&mid));
            for (p, c) in val.iter() {
                kelem_add_term(
                    &mut out,
                    (t.q, p.clone(), t.right.clone()),
                    t.coeff.mul(c),
                );
            }
        }
        // (1 (x) eta) acts on terms whose right factor has degree n, with
        // the sign (-1)^(n * (m - n)) from commuting eta past the left factor
        if m - t.v == n {
            let sign = if (n * t.v) % 2 == 0 {
                f.one()
            } else {
                f.one().neg()
            };
            let mid = PathElement::from_term(t.mid.clone(), f.one());
            let rgt = PathElement::from_term(t.right.clone(), f.one());
            let val = k.nf(&mid.multiply(&eta.values[t.q]).multiply(&rgt));
            for (p, c) in val.iter() {
                // subtracted term
                kelem_add_term(
                    &mut out,
                    (t.p, t.left.clone(), p.clone()),
                    t.coeff.mul(c).mul(&sign).neg(),
                );
            }
        }
    }
    out
}

fn sign_one_minus_n(k: &KComplex, n: usize) -> Scalar {
    // (-1)^(1-n) = (-1)^(n-1)
    if (n + 1) % 2 == 0 {
        k.field().one()
    } else {
        k.field().one().neg()
    }
}

/// Coefficient pairs `(l, r)` of irreducible paths with the prescribed total
/// length running from `(o_from, t_from)` through a generator with endpoints
/// `(o_to, t_to)`.
fn coefficient_pairs(
    k: &KComplex,
    total_len: usize,
    o_from: usize,
    t_from: usize,
    o_to: usize,
    t_to: usize,
) -> Vec<(Path, Path)> {
    let mut out = Vec::new();
    for l in &k.basis.paths {
        if l.origin() != o_from || l.terminal() != o_to || l.len() > total_len {
            continue;
        }
        for r in &k.basis.paths {
            if r.origin() != t_to
                || r.terminal() != t_from
                || l.len() + r.len() != total_len
            {
                continue;
            }
            out.push((l.clone(), r.clone()));
        }
    }
    out
}

/// Solves for a homotopy lifting of `eta` degree by degree up to `maxdeg`,
/// taking the canonical (sparsest under the unknown order) solution in each
/// degree. The degree below the cocycle degree is fixed to zero.
pub fn solve_homotopy_lifting(
    k: &KComplex,
    eta: &Cochain,
    maxdeg: usize,
) -> Result<HomotopyLifting, LiftError> {
    let n = eta.degree;
    if n < 1 || n > k.max_degree() {
        return Err(LiftError::Degree);
    }
    if maxdeg > k.max_degree() {
        return Err(LiftError::MaxDegree(maxdeg));
    }
    let f = k.field();
    let lengths: Vec<usize> = eta
        .value_lengths()
        .into_iter()
        .filter(|&l| l >= 1)
        .collect();
    if let Some(&lmax) = lengths.iter().max() {
        if !k.basis.complete && lmax - 1 > k.basis.complete_length {
            return Err(LiftError::BasisIncomplete(lmax - 1));
        }
    }
    let mut psi = HomotopyLifting::zero(k, n, maxdeg);
    let s1n = sign_one_minus_n(k, n);
    for m in n..=maxdeg {
        for r in 0..k.gen_count(m) {
            // target: d(psi(e)) = rhs + (-1)^(1-n) psi(d e)
            let mut target = lifting_rhs(k, eta, m, r);
            let psi_d = psi.apply(k, m - 1, &k.degrees[m].diff[r]);
            target = kelem_add(&target, &kelem_scale(&psi_d, &s1n));

            let src = &k.degrees[m].gens[r];
            let d_target = m - n + 1;
            let mut unknowns: Vec<(usize, Path, Path)> = Vec::new();
            for (j, g) in k.degrees[d_target].gens.iter().enumerate() {
                for &len in &lengths {
                    for (l, rr) in coefficient_pairs(
                        k,
                        len - 1,
                        src.origin,
                        src.terminal,
                        g.origin,
                        g.terminal,
                    ) {
                        unknowns.push((j, l, rr));
                    }
                }
            }
            unknowns.sort();
            unknowns.dedup();

            if unknowns.is_empty() {
                if kelem_is_zero(&target) {
                    continue;
                }
                return Err(LiftError::NoSolution {
                    degree: m,
                    generator: r,
                });
            }

            // assemble the exact system over all keys that appear
            let mut columns: Vec<KElem> = Vec::new();
            for (j, l, rr) in &unknowns {
                let mut e = KElem::new();
                e.insert((*j, l.clone(), rr.clone()), f.one());
                columns.push(diff_apply(k, d_target, &e));
            }
            let mut keys: Vec<(usize, Path, Path)> = Vec::new();
            for col in &columns {
                keys.extend(col.keys().cloned());
            }
            keys.extend(target.keys().cloned());
            keys.sort();
            keys.dedup();
            let key_index: BTreeMap<_, usize> =
                keys.iter().cloned().enumerate().map(|(a, b)| (b, a)).collect();
            let mut a = Mat::zeros(f, keys.len(), unknowns.len());
            for (j, col) in columns.iter().enumerate() {
                for (key, c) in col {
                    a.set(key_index[key], j, c.clone());
                }
            }
            let mut b = vec![f.zero(); keys.len()];
            for (key, c) in &target {
                b[key_index[key]] = c.clone();
            }
            let Some(mut x) = a.solve(&b) else {
                return Err(LiftError::NoSolution {
                    degree: m,
                    generator: r,
                });
            };
            // canonicalize against the solution space: zero out the
            // coordinates pivoted by the kernel
            let kernel = a.kernel();
            let (kb, kp) = row_space_basis(f, &kernel);
            crate::linalg::reduce_against(&mut x, &kb, &kp);

            let mut value = KElem::new();
            for (j, c) in x.into_iter().enumerate() {
                if !c.is_zero() {
                    let (g, l, rr) = unknowns[j].clone();
                    kelem_add_term(&mut value, (g, l, rr), c);
                }
            }
            psi.maps[m][r] = value;
        }
    }
    Ok(psi)
}

/// One residual row of the homotopy-lifting relation.
#[derive(Clone, Debug)]
pub struct ResidualRow {
    pub degree: usize,
    pub generator: usize,
    pub residual: KElem,
}

/// Recomputes the defining relation generator-wise; all residuals vanish
/// exactly when `psi` is a homotopy lifting of `eta` through `through`.
pub fn verify_homotopy(
    k: &KComplex,
    eta: &Cochain,
    psi: &HomotopyLifting,
    through: usize,
) -> Vec<ResidualRow> {
    let n = eta.degree;
    let s1n = sign_one_minus_n(k, n);
    let mut rows = Vec::new();
    for m in 1..=through.min(psi.max_degree()) {
        for r in 0..k.gen_count(m) {
            let d_psi = if m >= n {
                diff_apply(k, m - n + 1, &psi.maps[m][r])
            } else {
                KElem::new()
            };
            let psi_d = psi.apply(k, m - 1, &k.degrees[m].diff[r]);
            let rhs = lifting_rhs(k, eta, m, r);
            let mut residual = kelem_add(&d_psi, &kelem_scale(&psi_d, &s1n.neg()));
            residual = kelem_add(&residual, &kelem_scale(&rhs, &k.field().one().neg()));
            rows.push(ResidualRow {
                degree: m,
                generator: r,
                residual,
            });
        }
    }
    rows
}

pub fn homotopy_holds(rows: &[ResidualRow]) -> bool {
    rows.iter().all(|r| kelem_is_zero(&r.residual))
}

/// The Gerstenhaber bracket of two cocycles evaluated through their
/// homotopy liftings.
#[derive(Clone, Debug)]
pub struct BracketResult {
    pub left_degree: usize,
    pub right_degree: usize,
    /// `eta(psi_theta(-))`
    pub eta_psi_theta: Cochain,
    /// `theta(psi_eta(-))`
    pub theta_psi_eta: Cochain,
    /// `(-1)^((m-1)(n-1))`
    pub sign_positive: bool,
    pub raw: Cochain,
    /// Coboundary-reduced representative; absent when the cochain-space
    /// matrices are unavailable (resolution too short or infinite basis).
    pub reduced: Option<Cochain>,
}

pub fn bracket(
    k: &KComplex,
    eta: &Cochain,
    psi_eta: &HomotopyLifting,
    theta: &Cochain,
    psi_theta: &HomotopyLifting,
) -> Result<BracketResult, LiftError> {
    let n = eta.degree;
    let m = theta.degree;
    let deg = n + m - 1;
    if deg > k.max_degree() || deg > psi_eta.max_degree() || deg > psi_theta.max_degree() {
        return Err(LiftError::MaxDegree(deg));
    }
    let f = k.field();
    let sign_positive = ((n - 1) * (m - 1)) % 2 == 0;
    let mut first = Cochain::zero(k, deg);
    let mut second = Cochain::zero(k, deg);
    for r in 0..k.gen_count(deg) {
        first.values[r] = apply_cochain(k, eta, &psi_theta.maps[deg][r]);
        second.values[r] = apply_cochain(k, theta, &psi_eta.maps[deg][r]);
    }
    let sign = if sign_positive {
        f.one().neg()
    } else {
        f.one()
    };
    let raw = first.add(&second.scale(&sign));
    let reduced = cohomology_basis(k, deg)
        .ok()
        .map(|ws| ws.cobound_reduce(k, &raw));
    Ok(BracketResult {
        left_degree: n,
        right_degree: m,
        eta_psi_theta: first,
        theta_psi_eta: second,
        sign_positive,
        raw,
        reduced,
    })
}

/// The Maurer-Cartan certificate: the generator-wise value of
/// `d*(eta) + eta psi_eta` in degree 3.
#[derive(Clone, Debug)]
pub struct McCertificate {
    pub holds: bool,
    pub evaluations: Vec<PathElement>,
}

/// Tests the Maurer-Cartan condition for a degree-2 cocycle with a verified
/// lifting: `d*(eta) + eta psi_eta = 0` generator-wise in degree 3.
pub fn maurer_cartan_check(
    k: &KComplex,
    eta: &Cochain,
    psi: &HomotopyLifting,
) -> Result<McCertificate, LiftError> {
    if eta.degree != 2 || k.max_degree() < 3 {
        return Err(LiftError::Degree);
    }
    let ws = cohomology_basis(k, 2).map_err(|_| LiftError::Degree)?;
    if !ws.is_cocycle(k, eta) {
        return Err(LiftError::NotCocycle);
    }
    let rows = verify_homotopy(k, eta, psi, 3);
    if !homotopy_holds(&rows) {
        let bad = rows
            .iter()
            .find(|r| !kelem_is_zero(&r.residual))
            .map(|r| r.degree)
            .unwrap_or(0);
        return Err(LiftError::Unverified(bad));
    }
    let mut evaluations = Vec::new();
    let mut holds = true;
    for i in 0..k.gen_count(3) {
        let d_star = apply_cochain(k, eta, &k.degrees[3].diff[i]);
        let eta_psi = apply_cochain(k, eta, &psi.maps[3][i]);
        let total = k.nf(&d_star.add(&eta_psi));
        holds &= total.is_zero();
        evaluations.push(total);
    }
    Ok(McCertificate { holds, evaluations })
}

// ---------------------------------------------------------------------------
// Scalar recurrences

/// Which coefficient slot of the defining relation an instantiated equation
/// came from: left slots multiply an arrow on the left of the target
/// generator, right slots on the right.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SlotKind {
    Left,
    Right,
}

/// One instantiated scalar identity `lhs_coeff * b = known`.
#[derive(Clone, Debug)]
pub struct WitnessEq {
    pub kind: SlotKind,
    pub target_gen: usize,
    pub coefficient_path: Path,
    pub lhs_coeff: Scalar,
    pub known: Scalar,
}

/// The record of one recurrence step: the accepted scalar (if any), the
/// target index it attaches to, and every instantiated identity, with the
/// left-route and right-route values kept separate for cross-checking.
#[derive(Clone, Debug)]
pub struct RecurrenceWitness {
    pub degree: usize,
    pub generator: usize,
    pub value: Option<(usize, Scalar)>,
    pub equations: Vec<WitnessEq>,
    pub left_route: Option<Scalar>,
    pub right_route: Option<Scalar>,
}

/// Scalar table for one degree: per generator, the target index and scalar
/// of the single-scalar map shape, or `None` for the zero map.
pub type ScalarRow = Vec<Option<(usize, Scalar)>>;

/// Computes the degree-`m` scalars of the single-scalar lifting shape from
/// the degree-`m-1` scalars, by instantiating the defining relation slot by
/// slot. Both coefficient routes must agree; a vanishing slot coefficient
/// against a nonzero residual makes the step inapplicable.
pub fn recurrence_step(
    k: &KComplex,
    eta: &Cochain,
    b_prev: &ScalarRow,
    m: usize,
) -> Result<(ScalarRow, Vec<RecurrenceWitness>), LiftError> {
    let n = eta.degree;
    if m < n || m > k.max_degree() {
        return Err(LiftError::Degree);
    }
    let f = k.field();
    let s1n = sign_one_minus_n(k, n);
    let d_target = m - n + 1;

    // previous-degree map as a lifting fragment
    let mut psi_prev = vec![KElem::new(); k.gen_count(m - 1)];
    for (r, entry) in b_prev.iter().enumerate() {
        if let Some((j, c)) = entry {
            let g = &k.degrees[m - 1].gens[r];
            let mut e = KElem::new();
            kelem_add_term(
                &mut e,
                (*j, Path::vertex(g.origin), Path::vertex(g.terminal)),
                c.clone(),
            );
            psi_prev[r] = e;
        }
    }

    let mut row: ScalarRow = Vec::new();
    let mut witnesses = Vec::new();
    for r in 0..k.gen_count(m) {
        // known side: rhs + (-1)^(1-n) psi_(m-1)(d e)
        let mut target = lifting_rhs(k, eta, m, r);
        {
            let mut psi_d = KElem::new();
            for ((i, l, rr), c) in &k.degrees[m].diff[r] {
                let img = crate::resolution::kelem_bimod(
                    k,
                    &PathElement::from_term(l.clone(), f.one()),
                    &psi_prev[*i],
                    &PathElement::from_term(rr.clone(), f.one()),
                );
                for (key, s) in img {
                    kelem_add_term(&mut psi_d, key, s.mul(c));
                }
            }
            target = kelem_add(&target, &kelem_scale(&psi_d, &s1n));
        }

        if kelem_is_zero(&target) {
            row.push(None);
            witnesses.push(RecurrenceWitness {
                degree: m,
                generator: r,
                value: None,
                equations: Vec::new(),
                left_route: None,
                right_route: None,
            });
            continue;
        }

        let src = &k.degrees[m].gens[r];
        let mut solution: Option<(usize, Scalar, Vec<WitnessEq>, Option<Scalar>, Option<Scalar>)> =
            None;
        for (j, g) in k.degrees[d_target].gens.iter().enumerate() {
            if g.origin != src.origin || g.terminal != src.terminal {
                continue;
            }
            let image = &k.degrees[d_target].diff[j];
            // candidate j admits b iff b * image = target as elements
            let mut keys: Vec<_> = image.keys().cloned().collect();
            keys.extend(target.keys().cloned());
            keys.sort();
            keys.dedup();
            let mut equations = Vec::new();
            let mut b: Option<Scalar> = None;
            let mut consistent = true;
            let mut left_route = None;
            let mut right_route = None;
            for key in &keys {
                let d_coeff = image.get(key).cloned().unwrap_or_else(|| f.zero());
                let known = target.get(key).cloned().unwrap_or_else(|| f.zero());
                let kind = if key.1.len() > 0 {
                    SlotKind::Left
                } else {
                    SlotKind::Right
                };
                equations.push(WitnessEq {
                    kind,
                    target_gen: key.0,
                    coefficient_path: if key.1.len() > 0 {
                        key.1.clone()
                    } else {
                        key.2.clone()
                    },
                    lhs_coeff: d_coeff.clone(),
                    known: known.clone(),
                });
                if d_coeff.is_zero() {
                    if !known.is_zero() {
                        consistent = false;
                        break;
                    }
                    continue;
                }
                let candidate = known.div(&d_coeff);
                match &b {
                    None => b = Some(candidate.clone()),
                    Some(prev) if *prev != candidate => {
                        consistent = false;
                        break;
                    }
                    _ => {}
                }
                let route = if kind == SlotKind::Left {
                    &mut left_route
                } else {
                    &mut right_route
                };
                if route.is_none() {
                    *route = Some(candidate);
                }
            }
            if !consistent {
                continue;
            }
            let Some(b) = b else { continue };
            if b.is_zero() {
                continue;
            }
            if solution.is_some() {
                return Err(LiftError::Recurrence {
                    degree: m,
                    generator: r,
                    reason: "the single-scalar shape is ambiguous here".into(),
                });
            }
            solution = Some((j, b, equations, left_route, right_route));
        }
        match solution {
            Some((j, b, equations, left_route, right_route)) => {
                if let (Some(l), Some(rr)) = (&left_route, &right_route) {
                    if l != rr {
                        return Err(LiftError::Recurrence {
                            degree: m,
                            generator: r,
                            reason: "left and right coefficient routes disagree".into(),
                        });
                    }
                }
                witnesses.push(RecurrenceWitness {
                    degree: m,
                    generator: r,
                    value: Some((j, b.clone())),
                    equations,
                    left_route,
                    right_route,
                });
                row.push(Some((j, b)));
            }
            None => {
                return Err(LiftError::Recurrence {
                    degree: m,
                    generator: r,
                    reason:
                        "no zero-length-coefficient target matches; fall back to the general solver"
                            .into(),
                });
            }
        }
    }
    Ok((row, witnesses))
}

/// Runs the recurrence from the cocycle degree up to `maxdeg`, seeded by the
/// zero map one degree below.
pub fn recurrence_lift(
    k: &KComplex,
    eta: &Cochain,
    maxdeg: usize,
) -> Result<(Vec<ScalarRow>, Vec<RecurrenceWitness>), LiftError> {
    let n = eta.degree;
    if n < 1 {
        return Err(LiftError::Degree);
    }
    if maxdeg > k.max_degree() {
        return Err(LiftError::MaxDegree(maxdeg));
    }
    let mut rows: Vec<ScalarRow> = Vec::new();
    for m in 0..n {
        rows.push(vec![None; k.gen_count(m)]);
    }
    let mut all_witnesses = Vec::new();
    for m in n..=maxdeg {
        let prev = rows[m - 1].clone();
        let (row, mut witnesses) = recurrence_step(k, eta, &prev, m)?;
        rows.push(row);
        all_witnesses.append(&mut witnesses);
    }
    Ok((rows, all_witnesses))
}

/// Converts a scalar table to the general lifting shape.
pub fn scalars_to_lifting(
    k: &KComplex,
    cocycle_degree: usize,
    rows: &[ScalarRow],
) -> HomotopyLifting {
    let mut psi = HomotopyLifting::zero(k, cocycle_degree, rows.len() - 1);
    for (m, row) in rows.iter().enumerate() {
        for (r, entry) in row.iter().enumerate() {
            if let Some((j, c)) = entry {
                let g = &k.degrees[m].gens[r];
                let mut e = KElem::new();
                kelem_add_term(
                    &mut e,
                    (*j, Path::vertex(g.origin), Path::vertex(g.terminal)),
                    c.clone(),
                );
                psi.maps[m][r] = e;
            }
        }
    }
    psi
}

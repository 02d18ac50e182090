//! Reduction systems: rewriting to normal form, overlap ambiguities, the
//! diamond condition, and the irreducible-path basis of the quotient algebra.

use crate::algebra::PresentedAlgebra;
use crate::element::PathElement;
use crate::quiver::{Path, Quiver};
use crate::scalar::Scalar;
use std::collections::BTreeMap;
use thiserror::Error;

/// Caps guarding semi-decidable procedures.
#[derive(Clone, Copy, Debug)]
pub struct Caps {
    /// Maximum rewrite steps per `normal_form` call.
    pub rewrite_steps: usize,
    /// Maximum number of irreducible paths enumerated.
    pub basis_size: usize,
    /// Maximum number of matrix entries in one linear solve.
    pub solver_entries: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            rewrite_steps: 1_000_000,
            basis_size: 10_000,
            solver_entries: 25_000_000,
        }
    }
}

#[derive(Debug, Error)]
pub enum ReductionError {
    #[error("rewrite step cap exceeded ({0} steps): system is not reduction-finite or the cap is too small")]
    StepCap(usize),
    #[error("irreducible basis cap exceeded ({0} paths): the algebra is infinite-dimensional for this cap")]
    BasisCap(usize),
    #[error("invalid reduction system: {0}")]
    Invalid(String),
}

/// One rewrite rule `s -> phi(s)`: a reducible path of length at least two
/// and its parallel replacement.
#[derive(Clone, Debug)]
pub struct ReductionRule {
    pub lhs: Path,
    pub rhs: PathElement,
}

/// A validated reduction system. No left-hand side is a subpath of another,
/// and every right-hand side is irreducible with respect to the full system.
#[derive(Clone, Debug)]
pub struct ReductionSystem {
    pub rules: Vec<ReductionRule>,
}

/// Audit trail of one normal-form computation on a single path.
#[derive(Clone, Debug)]
pub struct NormalFormTrace {
    pub input: Path,
    pub steps: Vec<TraceStep>,
    pub result: PathElement,
}

/// One recorded rewrite: the path it fired on, the arrow position of the
/// reducible occurrence, and the rule index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub path: Path,
    pub position: usize,
    pub rule: usize,
}

/// An overlap ambiguity `p q r` with `pq` and `qr` both reducible.
#[derive(Clone, Debug)]
pub struct Overlap {
    pub word: Path,
    pub left_rule: usize,
    pub right_rule: usize,
    /// Lengths `(|p|, |q|, |r|)`.
    pub split: (usize, usize, usize),
}

#[derive(Clone, Debug)]
pub struct OverlapSet {
    pub overlaps: Vec<Overlap>,
}

#[derive(Clone, Debug)]
pub struct DiamondFailure {
    pub overlap: Overlap,
    pub reduce_left_first: PathElement,
    pub reduce_right_first: PathElement,
}

#[derive(Clone, Debug)]
pub struct DiamondReport {
    pub resolvable: bool,
    pub failures: Vec<DiamondFailure>,
}

/// The ordered set of irreducible paths, a basis of the quotient algebra
/// when the diamond condition holds. For algebras whose basis exceeds the
/// configured caps the enumeration is truncated: `complete` is false and
/// only lengths up to `complete_length` are exhaustive.
#[derive(Clone, Debug)]
pub struct IrreducibleBasis {
    pub paths: Vec<Path>,
    pub index: BTreeMap<Path, usize>,
    pub complete: bool,
    pub complete_length: usize,
}

impl IrreducibleBasis {
    pub fn dimension(&self) -> usize {
        self.paths.len()
    }
}

impl ReductionSystem {
    /// Validates and normalizes a rule set: endpoints parallel, left-hand
    /// sides of length >= 2 and subpath-free among each other, right-hand
    /// sides re-reduced until irreducible.
    pub fn new(
        quiver: &Quiver,
        rules: Vec<ReductionRule>,
        caps: &Caps,
    ) -> Result<ReductionSystem, ReductionError> {
        for (i, r) in rules.iter().enumerate() {
            if r.lhs.len() < 2 {
                return Err(ReductionError::Invalid(format!(
                    "rule {i}: left-hand side must have length >= 2"
                )));
            }
            for (p, _) in r.rhs.iter() {
                if p.origin() != r.lhs.origin() || p.terminal() != r.lhs.terminal() {
                    return Err(ReductionError::Invalid(format!(
                        "rule {i}: replacement is not parallel to the reducible path"
                    )));
                }
            }
        }
        for i in 0..rules.len() {
            for j in 0..rules.len() {
                if i != j && contains_subword(rules[j].lhs.arrows(), rules[i].lhs.arrows()) {
                    return Err(ReductionError::Invalid(format!(
                        "rule {i} left-hand side is a subpath of rule {j} left-hand side"
                    )));
                }
            }
        }
        let mut sys = ReductionSystem { rules };
        // Re-reduce each rhs against the full system until it is irreducible.
        loop {
            let mut changed = false;
            for i in 0..sys.rules.len() {
                let rhs = sys.rules[i].rhs.clone();
                let reduced = sys.normal_form_dir(quiver, &rhs, true, caps)?;
                if reduced != rhs {
                    sys.rules[i].rhs = reduced;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        Ok(sys)
    }

    /// Rule index matching at arrow position `pos` of `path`, if any. At most
    /// one rule matches a given position because left-hand sides are
    /// subpath-free.
    fn match_at(&self, path: &Path, pos: usize) -> Option<usize> {
        let arrows = path.arrows();
        self.rules.iter().position(|r| {
            let l = r.lhs.arrows();
            pos + l.len() <= arrows.len() && &arrows[pos..pos + l.len()] == l
        })
    }

    fn find_occurrence(&self, path: &Path, rightmost: bool) -> Option<(usize, usize)> {
        let n = path.len();
        if rightmost {
            (0..n).rev().find_map(|pos| self.match_at(path, pos).map(|r| (pos, r)))
        } else {
            (0..n).find_map(|pos| self.match_at(path, pos).map(|r| (pos, r)))
        }
    }

    /// Normal form under rightmost-first reduction.
    pub fn normal_form(
        &self,
        quiver: &Quiver,
        x: &PathElement,
        caps: &Caps,
    ) -> Result<PathElement, ReductionError> {
        self.normal_form_dir(quiver, x, true, caps)
    }

    /// Normal form under leftmost-first reduction (test oracle; agrees with
    /// the rightmost result exactly when the diamond condition holds).
    pub fn normal_form_leftmost(
        &self,
        quiver: &Quiver,
        x: &PathElement,
        caps: &Caps,
    ) -> Result<PathElement, ReductionError> {
        self.normal_form_dir(quiver, x, false, caps)
    }

    fn normal_form_dir(
        &self,
        quiver: &Quiver,
        x: &PathElement,
        rightmost: bool,
        caps: &Caps,
    ) -> Result<PathElement, ReductionError> {
        let mut result = PathElement::zero();
        let mut work: Vec<(Path, Scalar)> =
            x.iter().map(|(p, c)| (p.clone(), c.clone())).collect();
        let mut steps = 0usize;
        while let Some((path, coeff)) = work.pop() {
            match self.find_occurrence(&path, rightmost) {
                None => result.add_term(path, coeff),
                Some((pos, rule)) => {
                    steps += 1;
                    if steps > caps.rewrite_steps {
                        return Err(ReductionError::StepCap(caps.rewrite_steps));
                    }
                    let l = path.subpath(quiver, 0, pos);
                    let rlen = self.rules[rule].lhs.len();
                    let r = path.subpath(quiver, pos + rlen, path.len() - pos - rlen);
                    for (w, c) in self.rules[rule].rhs.iter() {
                        let lw = l.compose(w).expect("rule replacement is parallel");
                        let lwr = lw.compose(&r).expect("suffix composes");
                        work.push((lwr, coeff.mul(c)));
                    }
                }
            }
        }
        Ok(result)
    }

    /// Rightmost normal form of a single path, with the applied rewrite
    /// positions recorded. Replaying the steps reproduces the result.
    pub fn normal_form_traced(
        &self,
        quiver: &Quiver,
        field: crate::scalar::FieldSpec,
        input: &Path,
        caps: &Caps,
    ) -> Result<NormalFormTrace, ReductionError> {
        let mut steps_out = Vec::new();
        let mut result = PathElement::zero();
        let mut work: Vec<(Path, Scalar)> = vec![(input.clone(), field.one())];
        let mut steps = 0usize;
        while let Some((path, coeff)) = work.pop() {
            match self.find_occurrence(&path, true) {
                None => {
                    result.add_term(path, coeff);
                }
                Some((pos, rule)) => {
                    steps += 1;
                    if steps > caps.rewrite_steps {
                        return Err(ReductionError::StepCap(caps.rewrite_steps));
                    }
                    steps_out.push(TraceStep {
                        path: path.clone(),
                        position: pos,
                        rule,
                    });
                    let l = path.subpath(quiver, 0, pos);
                    let rlen = self.rules[rule].lhs.len();
                    let r = path.subpath(quiver, pos + rlen, path.len() - pos - rlen);
                    for (w, c) in self.rules[rule].rhs.iter() {
                        let lw = l.compose(w).expect("rule replacement is parallel");
                        let lwr = lw.compose(&r).expect("suffix composes");
                        work.push((lwr, coeff.mul(c)));
                    }
                }
            }
        }
        Ok(NormalFormTrace {
            input: input.clone(),
            steps: steps_out,
            result,
        })
    }

    /// Replays a trace with the same stack discipline: each recorded step
    /// must fire on the path the replay has on top, so a stale or foreign
    /// trace is detected rather than silently accepted.
    pub fn replay_trace(
        &self,
        quiver: &Quiver,
        field: crate::scalar::FieldSpec,
        trace: &NormalFormTrace,
    ) -> Result<PathElement, ReductionError> {
        let mut result = PathElement::zero();
        let mut work: Vec<(Path, Scalar)> = vec![(trace.input.clone(), field.one())];
        let mut steps = trace.steps.iter();
        let mut pending = steps.next();
        while let Some((path, coeff)) = work.pop() {
            match pending {
                Some(step) if step.path == path => {
                    let rule = step.rule;
                    let pos = step.position;
                    let l = path.subpath(quiver, 0, pos);
                    let rlen = self.rules[rule].lhs.len();
                    if pos + rlen > path.len()
                        || &path.arrows()[pos..pos + rlen] != self.rules[rule].lhs.arrows()
                    {
                        return Err(ReductionError::Invalid(
                            "trace step does not match its rule".into(),
                        ));
                    }
                    let r = path.subpath(quiver, pos + rlen, path.len() - pos - rlen);
                    for (w, c) in self.rules[rule].rhs.iter() {
                        let lw = l.compose(w).expect("rule replacement is parallel");
                        let lwr = lw.compose(&r).expect("suffix composes");
                        work.push((lwr, coeff.mul(c)));
                    }
                    pending = steps.next();
                }
                _ => result.add_term(path, coeff),
            }
        }
        if pending.is_some() {
            return Err(ReductionError::Invalid("unused trace steps remain".into()));
        }
        Ok(result)
    }

    /// All overlap ambiguities `pqr` with `pq` and `qr` reducible,
    /// deduplicated and canonically ordered.
    pub fn overlaps(&self, quiver: &Quiver) -> OverlapSet {
        let mut set: BTreeMap<(Path, usize, usize), Overlap> = BTreeMap::new();
        for (i, ri) in self.rules.iter().enumerate() {
            for (j, rj) in self.rules.iter().enumerate() {
                let li = ri.lhs.arrows();
                let lj = rj.lhs.arrows();
                // q = proper suffix of lhs_i that is a proper prefix of lhs_j
                for qlen in 1..li.len() {
                    if qlen >= lj.len() {
                        continue;
                    }
                    if li[li.len() - qlen..] != lj[..qlen] {
                        continue;
                    }
                    let mut word: Vec<usize> = li.to_vec();
                    word.extend_from_slice(&lj[qlen..]);
                    let path = Path::from_arrows(quiver, &word)
                        .expect("overlap word composes");
                    let plen = li.len() - qlen;
                    let rlen = lj.len() - qlen;
                    set.entry((path.clone(), plen, qlen)).or_insert(Overlap {
                        word: path,
                        left_rule: i,
                        right_rule: j,
                        split: (plen, qlen, rlen),
                    });
                }
            }
        }
        OverlapSet {
            overlaps: set.into_values().collect(),
        }
    }

    /// Resolves every overlap two ways (reduce `pq` first vs `qr` first) and
    /// compares normal forms.
    pub fn check_diamond(
        &self,
        quiver: &Quiver,
        caps: &Caps,
    ) -> Result<DiamondReport, ReductionError> {
        let mut failures = Vec::new();
        for ov in self.overlaps(quiver).overlaps {
            let (plen, qlen, rlen) = ov.split;
            let p = ov.word.subpath(quiver, 0, plen);
            let r = ov.word.subpath(quiver, plen + qlen, rlen);
            // branch 1: rewrite pq first, leaving phi(pq) * r
            let b1 = act_right(&self.rules[ov.left_rule].rhs, &r);
            let b1 = self.normal_form(quiver, &b1, caps)?;
            // branch 2: rewrite qr first, leaving p * phi(qr)
            let b2 = act_left(&p, &self.rules[ov.right_rule].rhs);
            let b2 = self.normal_form(quiver, &b2, caps)?;
            if b1 != b2 {
                failures.push(DiamondFailure {
                    overlap: ov,
                    reduce_left_first: b1,
                    reduce_right_first: b2,
                });
            }
        }
        Ok(DiamondReport {
            resolvable: failures.is_empty(),
            failures,
        })
    }

    /// Breadth-first enumeration of all irreducible paths, vertices first,
    /// then by length and lexicographic arrow order. Errors when the basis
    /// exceeds the configured cap.
    pub fn irr_basis(
        &self,
        quiver: &Quiver,
        caps: &Caps,
    ) -> Result<IrreducibleBasis, ReductionError> {
        let basis = self.irr_basis_capped(quiver, caps);
        if !basis.complete {
            return Err(ReductionError::BasisCap(caps.basis_size));
        }
        Ok(basis)
    }

    /// Like [`ReductionSystem::irr_basis`] but truncates instead of failing:
    /// the result is exhaustive through `complete_length` only. Lets the
    /// resolution machinery run over algebras with an infinite basis, whose
    /// length-bounded computations never look past short coefficients.
    pub fn irr_basis_capped(&self, quiver: &Quiver, caps: &Caps) -> IrreducibleBasis {
        let mut paths: Vec<Path> = (0..quiver.vertex_count()).map(Path::vertex).collect();
        let mut frontier: Vec<Path> = paths.clone();
        let mut complete = true;
        let mut complete_length = 0usize;
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for p in &frontier {
                for a in 0..quiver.arrow_count() {
                    if quiver.source(a) != p.terminal() {
                        continue;
                    }
                    let ext = p.compose(&Path::arrow(quiver, a)).unwrap();
                    // p is irreducible, so any reducible subword must be a suffix
                    let reducible = self.rules.iter().any(|r| {
                        let l = r.lhs.arrows();
                        ext.len() >= l.len()
                            && &ext.arrows()[ext.len() - l.len()..] == l
                    });
                    if !reducible {
                        next.push(ext);
                    }
                }
            }
            if paths.len() + next.len() > caps.basis_size {
                complete = false;
                break;
            }
            paths.extend(next.iter().cloned());
            if !next.is_empty() {
                complete_length += 1;
            }
            frontier = next;
        }
        let index = paths
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i))
            .collect();
        IrreducibleBasis {
            paths,
            index,
            complete,
            complete_length,
        }
    }

    /// Multiplication in the quotient algebra: concatenate in `kQ`, then
    /// reduce to normal form.
    pub fn mul_nf(
        &self,
        quiver: &Quiver,
        a: &PathElement,
        b: &PathElement,
        caps: &Caps,
    ) -> Result<PathElement, ReductionError> {
        self.normal_form(quiver, &a.multiply(b), caps)
    }
}

/// `x * r` for a single path `r`, keeping coefficients.
pub fn act_right(x: &PathElement, r: &Path) -> PathElement {
    let mut out = PathElement::zero();
    for (p, c) in x.iter() {
        if let Some(pr) = p.compose(r) {
            out.add_term(pr, c.clone());
        }
    }
    out
}

/// `l * x` for a single path `l`, keeping coefficients.
pub fn act_left(l: &Path, x: &PathElement) -> PathElement {
    let mut out = PathElement::zero();
    for (p, c) in x.iter() {
        if let Some(lp) = l.compose(p) {
            out.add_term(lp, c.clone());
        }
    }
    out
}

fn contains_subword(hay: &[usize], needle: &[usize]) -> bool {
    if needle.len() > hay.len() {
        return false;
    }
    (0..=hay.len() - needle.len()).any(|i| &hay[i..i + needle.len()] == needle)
}

/// Extracts a reduction system from the relations when the user supplies
/// none: each relation rewrites its leading path (the lexicographically
/// first word, so earlier-declared arrows weigh more) to minus the rest over
/// the leading coefficient.
pub fn default_reduction_system(
    algebra: &PresentedAlgebra,
    caps: &Caps,
) -> Result<ReductionSystem, ReductionError> {
    let mut rules = Vec::new();
    for (i, rel) in algebra.relations.iter().enumerate() {
        let lead = rel
            .iter()
            .map(|(p, _)| p.clone())
            .min()
            .ok_or_else(|| ReductionError::Invalid(format!("relation {i} is zero")))?;
        let lead_coeff = rel.coeff(&lead).unwrap().clone();
        let mut rest = PathElement::zero();
        for (p, c) in rel.iter() {
            if p != &lead {
                rest.add_term(p.clone(), c.neg().div(&lead_coeff));
            }
        }
        rules.push(ReductionRule {
            lhs: lead,
            rhs: rest,
        });
    }
    // ambiguous leading terms: two relations with the same leading path
    for i in 0..rules.len() {
        for j in i + 1..rules.len() {
            if rules[i].lhs == rules[j].lhs {
                return Err(ReductionError::Invalid(format!(
                    "relations {i} and {j} share the leading path"
                )));
            }
        }
    }
    ReductionSystem::new(&algebra.quiver, rules, caps)
}

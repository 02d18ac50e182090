//! Hochschild cochains on the resolution, induced differentials as exact
//! matrices, and cocycle/coboundary computations.
//!
//! A degree-`n` cochain is one quotient-algebra value per generator, subject
//! to the endpoint condition `value[i] = e_o(i) value[i] e_t(i)`; the cochain
//! space has the pairs `(generator, parallel irreducible path)` as basis.

use crate::element::PathElement;
use crate::linalg::{row_space_basis, Mat};
use crate::quiver::Path;
use crate::resolution::{KComplex, KElem};
use crate::scalar::Scalar;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CochainError {
    #[error("degree {0} out of range for this resolution")]
    Degree(usize),
    #[error("value {index} violates the endpoint condition: expected paths from `{origin}` to `{terminal}`")]
    Endpoints {
        index: usize,
        origin: String,
        terminal: String,
    },
    #[error("expected {expected} values, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("the irreducible basis is incomplete under the configured caps; cochain spaces need a finite-dimensional algebra")]
    BasisIncomplete,
}

/// A bimodule map from degree-`n` generators to the quotient algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain {
    pub degree: usize,
    pub values: Vec<PathElement>,
}

impl Cochain {
    /// Validates the endpoint condition and stores quotient normal forms.
    pub fn new(
        k: &KComplex,
        degree: usize,
        values: Vec<PathElement>,
    ) -> Result<Cochain, CochainError> {
        if degree > k.max_degree() {
            return Err(CochainError::Degree(degree));
        }
        if values.len() != k.gen_count(degree) {
            return Err(CochainError::Arity {
                expected: k.gen_count(degree),
                got: values.len(),
            });
        }
        let quiver = k.quiver();
        let mut reduced = Vec::new();
        for (i, v) in values.into_iter().enumerate() {
            let v = k.nf(&v);
            let gen = &k.degrees[degree].gens[i];
            for (p, _) in v.iter() {
                if p.origin() != gen.origin || p.terminal() != gen.terminal {
                    return Err(CochainError::Endpoints {
                        index: i,
                        origin: quiver.vertex_name(gen.origin).to_string(),
                        terminal: quiver.vertex_name(gen.terminal).to_string(),
                    });
                }
            }
            reduced.push(v);
        }
        Ok(Cochain {
            degree,
            values: reduced,
        })
    }

    pub fn zero(k: &KComplex, degree: usize) -> Cochain {
        Cochain {
            degree,
            values: vec![PathElement::zero(); k.gen_count(degree)],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }

    pub fn add(&self, other: &Cochain) -> Cochain {
        assert_eq!(self.degree, other.degree);
        Cochain {
            degree: self.degree,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn scale(&self, s: &Scalar) -> Cochain {
        Cochain {
            degree: self.degree,
            values: self.values.iter().map(|v| v.scale(s)).collect(),
        }
    }

    pub fn sub(&self, other: &Cochain) -> Cochain {
        assert_eq!(self.degree, other.degree);
        Cochain {
            degree: self.degree,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a.sub(b))
                .collect(),
        }
    }

    /// Distinct path lengths occurring among the values.
    pub fn value_lengths(&self) -> Vec<usize> {
        let mut lens: Vec<usize> = self
            .values
            .iter()
            .flat_map(|v| v.iter().map(|(p, _)| p.len()))
            .collect();
        lens.sort_unstable();
        lens.dedup();
        lens
    }
}

/// Applies a cochain to a formal section of its degree: each `l e(i) r`
/// becomes `l value[i] r`, reduced.
pub fn apply_cochain(k: &KComplex, c: &Cochain, e: &KElem) -> PathElement {
    let f = k.field();
    let mut out = PathElement::zero();
    for ((i, l, r), s) in e {
        let le = PathElement::from_term(l.clone(), f.one());
        let re = PathElement::from_term(r.clone(), f.one());
        let val = le.multiply(&c.values[*i]).multiply(&re);
        out = out.add(&val.scale(s));
    }
    k.nf(&out)
}

/// The ordered basis of the degree-`n` cochain space.
#[derive(Clone, Debug)]
pub struct CochainSpace {
    pub degree: usize,
    pub basis: Vec<(usize, Path)>,
    pub index: BTreeMap<(usize, Path), usize>,
}

impl CochainSpace {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn to_coords(&self, k: &KComplex, c: &Cochain) -> Vec<Scalar> {
        let f = k.field();
        let mut v = vec![f.zero(); self.basis.len()];
        for (i, val) in c.values.iter().enumerate() {
            for (p, s) in val.iter() {
                let col = *self
                    .index
                    .get(&(i, p.clone()))
                    .expect("reduced value lies in the basis");
                v[col] = s.clone();
            }
        }
        v
    }

    pub fn from_coords(&self, k: &KComplex, coords: &[Scalar]) -> Cochain {
        let mut values = vec![PathElement::zero(); k.gen_count(self.degree)];
        for (j, s) in coords.iter().enumerate() {
            if !s.is_zero() {
                let (i, p) = &self.basis[j];
                values[*i].add_term(p.clone(), s.clone());
            }
        }
        Cochain {
            degree: self.degree,
            values,
        }
    }
}

pub fn cochain_space(k: &KComplex, n: usize) -> Result<CochainSpace, CochainError> {
    if n > k.max_degree() {
        return Err(CochainError::Degree(n));
    }
    if !k.basis.complete {
        return Err(CochainError::BasisIncomplete);
    }
    let mut basis = Vec::new();
    for (i, g) in k.degrees[n].gens.iter().enumerate() {
        for p in &k.basis.paths {
            if p.origin() == g.origin && p.terminal() == g.terminal {
                basis.push((i, p.clone()));
            }
        }
    }
    let index = basis
        .iter()
        .enumerate()
        .map(|(j, b)| (b.clone(), j))
        .collect();
    Ok(CochainSpace {
        degree: n,
        basis,
        index,
    })
}

/// The matrix of the induced differential from degree-`n` cochains to
/// degree-`n+1` cochains: column `j` is the image of the `j`-th basis
/// cochain, evaluated through the resolution differential.
pub fn induced_matrix(k: &KComplex, n: usize) -> Result<Mat, CochainError> {
    if n + 1 > k.max_degree() {
        return Err(CochainError::Degree(n + 1));
    }
    let f = k.field();
    let dom = cochain_space(k, n)?;
    let cod = cochain_space(k, n + 1)?;
    let mut m = Mat::zeros(f, cod.dimension(), dom.dimension());
    for (j, (i, p)) in dom.basis.iter().enumerate() {
        let mut c = Cochain::zero(k, n);
        c.values[*i] = PathElement::from_term(p.clone(), f.one());
        for t in 0..k.gen_count(n + 1) {
            let val = apply_cochain(k, &c, &k.degrees[n + 1].diff[t]);
            for (path, s) in val.iter() {
                let row = *cod
                    .index
                    .get(&(t, path.clone()))
                    .expect("value lies in the cochain space");
                m.set(row, j, m.get(row, j).add(s));
            }
        }
    }
    Ok(m)
}

/// Kernel/image data for one cohomological degree, with canonical
/// representatives and the change of basis used for coboundary reduction.
#[derive(Clone, Debug)]
pub struct CohomologyBasis {
    pub degree: usize,
    pub space: CochainSpace,
    pub dim_kernel: usize,
    pub dim_image: usize,
    pub representatives: Vec<Cochain>,
    kernel_matrix: Mat,
    /// Invertible square matrix whose columns are: image basis, then
    /// representative vectors, then a canonical completion.
    change: Mat,
    image_width: usize,
}

impl CohomologyBasis {
    pub fn dimension(&self) -> usize {
        self.dim_kernel - self.dim_image
    }

    pub fn is_cocycle(&self, k: &KComplex, c: &Cochain) -> bool {
        let v = self.space.to_coords(k, c);
        for row in 0..self.kernel_matrix.rows {
            let mut acc = k.field().zero();
            for j in 0..self.kernel_matrix.cols {
                acc = acc.add(&self.kernel_matrix.get(row, j).mul(&v[j]));
            }
            if !acc.is_zero() {
                return false;
            }
        }
        true
    }

    /// Canonical representative modulo coboundaries: expresses the cochain
    /// over the change basis and drops the image components. Fixed on the
    /// stored representatives; zero exactly on coboundaries.
    pub fn cobound_reduce(&self, k: &KComplex, c: &Cochain) -> Cochain {
        let v = self.space.to_coords(k, c);
        let dim = self.space.dimension();
        if dim == 0 {
            return Cochain::zero(k, self.degree);
        }
        let x = self
            .change
            .solve(&v)
            .expect("change basis spans the cochain space");
        let f = k.field();
        let mut reduced = vec![f.zero(); dim];
        for (j, s) in x.iter().enumerate().skip(self.image_width) {
            if !s.is_zero() {
                for row in 0..dim {
                    reduced[row] = reduced[row].add(&s.mul(self.change.get(row, j)));
                }
            }
        }
        self.space.from_coords(k, &reduced)
    }
}

/// Computes kernel and image in degree `n` and picks representatives,
/// preferring sparse single-entry cochains in canonical order.
pub fn cohomology_basis(k: &KComplex, n: usize) -> Result<CohomologyBasis, CochainError> {
    let f = k.field();
    let space = cochain_space(k, n)?;
    let dim = space.dimension();
    let out_matrix = induced_matrix(k, n)?;
    let kernel = out_matrix.kernel();
    let dim_kernel = kernel.len();

    let image_vectors: Vec<Vec<Scalar>> = if n == 0 {
        Vec::new()
    } else {
        let in_matrix = induced_matrix(k, n - 1)?;
        (0..in_matrix.cols)
            .map(|j| (0..in_matrix.rows).map(|i| in_matrix.get(i, j).clone()).collect())
            .collect()
    };
    let (image_basis, _) = row_space_basis(f, &image_vectors);
    let dim_image = image_basis.len();

    // representative selection: greedy over single-entry candidates
    let target = dim_kernel - dim_image;
    let mut chosen: Vec<Vec<Scalar>> = Vec::new();
    let mut reps: Vec<Cochain> = Vec::new();
    let mut span_rows: Vec<Vec<Scalar>> = image_basis.clone();
    let in_kernel = |v: &[Scalar]| -> bool {
        for row in 0..out_matrix.rows {
            let mut acc = f.zero();
            for j in 0..out_matrix.cols {
                acc = acc.add(&out_matrix.get(row, j).mul(&v[j]));
            }
            if !acc.is_zero() {
                return false;
            }
        }
        true
    };
    let mut candidates: Vec<Vec<Scalar>> = Vec::new();
    for j in 0..dim {
        let mut v = vec![f.zero(); dim];
        v[j] = f.one();
        candidates.push(v);
    }
    // fall back to kernel basis vectors if the sparse sweep is insufficient
    candidates.extend(kernel.iter().cloned());
    for cand in candidates {
        if reps.len() == target {
            break;
        }
        if !in_kernel(&cand) {
            continue;
        }
        let mut trial = span_rows.clone();
        trial.push(cand.clone());
        let (b, _) = row_space_basis(f, &trial);
        if b.len() == span_rows.len() {
            continue; // dependent on image + chosen reps
        }
        span_rows = trial;
        chosen.push(cand.clone());
        reps.push(space.from_coords(k, &cand));
    }
    assert_eq!(reps.len(), target, "representative sweep is complete");

    // change basis: image columns, representative columns, canonical completion
    let mut columns: Vec<Vec<Scalar>> = Vec::new();
    columns.extend(image_basis.iter().cloned());
    columns.extend(chosen.iter().cloned());
    let mut rows_so_far = columns.clone();
    for j in 0..dim {
        if rows_so_far.len() == dim {
            break;
        }
        let mut unit = vec![f.zero(); dim];
        unit[j] = f.one();
        let mut trial = rows_so_far.clone();
        trial.push(unit.clone());
        let (b, _) = row_space_basis(f, &trial);
        if b.len() > rows_so_far.len() {
            rows_so_far = trial;
            columns.push(unit);
        }
    }
    let mut change = Mat::zeros(f, dim, dim.max(columns.len()));
    for (j, col) in columns.iter().enumerate() {
        for (i, s) in col.iter().enumerate() {
            change.set(i, j, s.clone());
        }
    }

    Ok(CohomologyBasis {
        degree: n,
        space,
        dim_kernel,
        dim_image,
        representatives: reps,
        kernel_matrix: out_matrix,
        change,
        image_width: dim_image,
    })
}

//! Shared builders for the integration suites.
#![allow(dead_code)] // each suite uses its own subset

use koszul::algebra::PresentedAlgebra;
use koszul::element::PathElement;
use koszul::parse::{parse_spec, spec_reduction_system};
use koszul::quiver::{Path, Quiver};
use koszul::reduction::{default_reduction_system, Caps, ReductionSystem};
use koszul::resolution::{build_family, build_koszul, load_manual_resolution, KComplex};
use koszul::scalar::{FieldSpec, Scalar};

pub fn caps() -> Caps {
    Caps::default()
}

pub fn data(name: &str) -> String {
    let path = format!("{}/tests/data/{}", env!("CARGO_MANIFEST_DIR"), name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("read {path}: {e}"))
}

/// `k[x]/(x^2)` built through the given degree.
pub fn kx2(max_degree: usize) -> KComplex {
    let spec = parse_spec(&data("kx2.json")).unwrap();
    let sys = spec_reduction_system(&spec, &caps()).unwrap();
    build_koszul(&spec.algebra, &sys, max_degree, &caps(), &Default::default()).unwrap()
}

/// The two-loop algebra with relations `x^2, xy + yx`.
pub fn xy_complex(max_degree: usize) -> KComplex {
    let spec = parse_spec(&data("xy.json")).unwrap();
    let sys = spec_reduction_system(&spec, &caps()).unwrap();
    build_koszul(&spec.algebra, &sys, max_degree, &caps(), &Default::default()).unwrap()
}

/// The family member at `q = 1`, in the closed-form basis.
pub fn a1(max_degree: usize) -> KComplex {
    build_family(FieldSpec::Q, &FieldSpec::Q.one(), max_degree, &caps()).unwrap()
}

/// The manually loaded `k[x]/(x^3)` resolution.
pub fn kx3() -> KComplex {
    let spec = parse_spec(&data("kx3_manual.json")).unwrap();
    let sys = spec_reduction_system(&spec, &caps()).unwrap();
    let manual = spec.resolution.as_ref().unwrap().manual.as_ref().unwrap();
    load_manual_resolution(&spec.algebra, &sys, manual, &caps())
        .unwrap()
        .0
}

pub fn a1_algebra() -> (PresentedAlgebra, ReductionSystem) {
    let alg = koszul::resolution::family_algebra(FieldSpec::Q, &FieldSpec::Q.one());
    let sys = default_reduction_system(&alg, &caps()).unwrap();
    (alg, sys)
}

/// Parses a path expression in the complex's quiver.
pub fn pe(k: &KComplex, text: &str) -> PathElement {
    koszul::parse::parse_combination(text, k.quiver(), k.field()).unwrap()
}

pub fn path(q: &Quiver, text: &str) -> Path {
    koszul::parse::parse_single_path(text, q).unwrap()
}

pub fn int(k: &KComplex, n: i64) -> Scalar {
    k.field().integer(n)
}

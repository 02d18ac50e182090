//! Property and edge-case suites: algebraic laws on random inputs, named
//! edge cases from the worked examples, and error paths.

mod common;

use common::*;
use koszul::cohomology::{cohomology_basis, Cochain};
use koszul::element::PathElement;
use koszul::lifting::{homotopy_holds, solve_homotopy_lifting, verify_homotopy, HomotopyLifting};
use koszul::parse::{parse_combination, ManualResolution};
use koszul::quiver::{Path, Quiver};
use koszul::reduction::{ReductionRule, ReductionSystem};
use koszul::resolution::{load_manual_resolution, verify_complex};
use koszul::scalar::FieldSpec;
use koszul::tensor::composable_words;
use proptest::prelude::*;

fn a1_quiver() -> Quiver {
    Quiver::new(
        vec!["1".into(), "2".into()],
        vec![
            ("a".into(), 0, 0),
            ("b".into(), 0, 0),
            ("c".into(), 0, 1),
        ],
    )
    .unwrap()
}

/// A random element supported on paths of length <= 3 with coefficients in
/// a small range.
fn arb_element(field: FieldSpec) -> impl Strategy<Value = PathElement> {
    let q = a1_quiver();
    let paths: Vec<Path> = {
        let mut out: Vec<Path> = (0..q.vertex_count()).map(Path::vertex).collect();
        for len in 1..=3usize {
            for w in composable_words(&q, len) {
                out.push(Path::from_arrows(&q, &w).unwrap());
            }
        }
        out
    };
    let n = paths.len();
    proptest::collection::vec((0..n, -4i64..=4), 0..5).prop_map(move |terms| {
        let mut e = PathElement::zero();
        for (i, c) in terms {
            e.add_term(paths[i].clone(), field.integer(c));
        }
        e
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    // associativity of the path-algebra product, over Q
    #[test]
    fn multiplication_associative_q(
        x in arb_element(FieldSpec::Q),
        y in arb_element(FieldSpec::Q),
        z in arb_element(FieldSpec::Q),
    ) {
        prop_assert_eq!(x.multiply(&y).multiply(&z), x.multiply(&y.multiply(&z)));
    }

    // ... and over a prime field
    #[test]
    fn multiplication_associative_fp(
        x in arb_element(FieldSpec::Fp(7)),
        y in arb_element(FieldSpec::Fp(7)),
        z in arb_element(FieldSpec::Fp(7)),
    ) {
        prop_assert_eq!(x.multiply(&y).multiply(&z), x.multiply(&y.multiply(&z)));
    }

    // the product is graded by path length
    #[test]
    fn multiplication_graded(
        x in arb_element(FieldSpec::Q),
        y in arb_element(FieldSpec::Q),
    ) {
        let lx: Vec<usize> = x.iter().map(|(p, _)| p.len()).collect();
        let ly: Vec<usize> = y.iter().map(|(p, _)| p.len()).collect();
        for (p, _) in x.multiply(&y).iter() {
            prop_assert!(lx.iter().any(|a| ly.iter().any(|b| a + b == p.len())));
        }
    }

    // serialize -> parse -> serialize is the identity
    #[test]
    fn display_parse_roundtrip(x in arb_element(FieldSpec::Q)) {
        let q = a1_quiver();
        let text = x.display(&q);
        let back = parse_combination(&text, &q, FieldSpec::Q).unwrap();
        prop_assert_eq!(back.display(&q), text);
        prop_assert_eq!(back, x);
    }

    // normal forms are idempotent and multiplication-then-reduction is
    // associative on irreducible inputs
    #[test]
    fn normal_form_laws(
        x in arb_element(FieldSpec::Q),
        i in 0usize..7,
        j in 0usize..7,
        l in 0usize..7,
    ) {
        let (alg, sys) = a1_algebra();
        let q = &alg.quiver;
        let caps = caps();
        let nf = sys.normal_form(q, &x, &caps).unwrap();
        prop_assert_eq!(sys.normal_form(q, &nf, &caps).unwrap(), nf);

        let basis = sys.irr_basis(q, &caps).unwrap();
        let one = alg.field.one();
        let p = PathElement::from_term(basis.paths[i].clone(), one.clone());
        let r = PathElement::from_term(basis.paths[j].clone(), one.clone());
        let s = PathElement::from_term(basis.paths[l].clone(), one);
        let left = sys
            .normal_form(q, &sys.mul_nf(q, &p, &r, &caps).unwrap().multiply(&s), &caps)
            .unwrap();
        let right = sys
            .normal_form(q, &p.multiply(&sys.mul_nf(q, &r, &s, &caps).unwrap()), &caps)
            .unwrap();
        prop_assert_eq!(left, right);
    }
}

// vertices act as local identities on every path
#[test]
fn vertex_identities() {
    let q = a1_quiver();
    for len in 1..=4usize {
        for w in composable_words(&q, len) {
            let p = Path::from_arrows(&q, &w).unwrap();
            let eo = Path::vertex(p.origin());
            let et = Path::vertex(p.terminal());
            assert_eq!(eo.compose(&p).unwrap(), p);
            assert_eq!(p.compose(&et).unwrap(), p);
        }
    }
}

// pure concatenation in a free path algebra
#[test]
fn free_algebra_concatenation() {
    let q = Quiver::new(
        vec!["1".into()],
        vec![("x".into(), 0, 0), ("y".into(), 0, 0)],
    )
    .unwrap();
    let f = FieldSpec::Q;
    let xy = parse_combination("x*y", &q, f).unwrap();
    let yx = parse_combination("y*x", &q, f).unwrap();
    assert_eq!(
        xy.multiply(&yx),
        parse_combination("x*y*y*x", &q, f).unwrap()
    );
}

// an acyclic quiver with no relations has all its paths as basis
#[test]
fn acyclic_free_basis() {
    let q = Quiver::new(
        vec!["1".into(), "2".into()],
        vec![("c".into(), 0, 1)],
    )
    .unwrap();
    let sys = ReductionSystem::new(&q, vec![], &caps()).unwrap();
    let basis = sys.irr_basis(&q, &caps()).unwrap();
    let names: Vec<String> = basis.paths.iter().map(|p| p.display(&q)).collect();
    assert_eq!(names, ["e_1", "e_2", "c"]);
}

// leading-term extraction matches the published rule sets
#[test]
fn default_rules_for_the_two_loop_algebra() {
    let spec = koszul::parse::parse_spec(&data("xy.json")).unwrap();
    let sys = koszul::parse::spec_reduction_system(&spec, &caps()).unwrap();
    let q = &spec.algebra.quiver;
    assert_eq!(sys.rules.len(), 2);
    assert_eq!(sys.rules[0].lhs.display(q), "x*x");
    assert!(sys.rules[0].rhs.is_zero());
    assert_eq!(sys.rules[1].lhs.display(q), "x*y");
    assert_eq!(sys.rules[1].rhs.display(q), "- y*x");
}

// a genuinely non-confluent system is reported with both branch values
#[test]
fn diamond_failure_reported() {
    let q = Quiver::new(
        vec!["1".into()],
        vec![
            ("a".into(), 0, 0),
            ("b".into(), 0, 0),
            ("c".into(), 0, 0),
        ],
    )
    .unwrap();
    let f = FieldSpec::Q;
    let ab = parse_combination("a*b", &q, f).unwrap();
    let bc = parse_combination("b*c", &q, f).unwrap();
    let rules = vec![
        ReductionRule {
            lhs: ab.iter().next().unwrap().0.clone(),
            rhs: PathElement::zero(),
        },
        ReductionRule {
            lhs: bc.iter().next().unwrap().0.clone(),
            rhs: parse_combination("a", &q, f).unwrap(),
        },
    ];
    let sys = ReductionSystem::new(&q, rules, &caps()).unwrap();
    let report = sys.check_diamond(&q, &caps()).unwrap();
    assert!(!report.resolvable);
    assert_eq!(report.failures.len(), 1);
    let fail = &report.failures[0];
    assert_eq!(fail.overlap.word.display(&q), "a*b*c");
    assert!(fail.reduce_left_first.is_zero());
    assert_eq!(fail.reduce_right_first.display(&q), "a*a");
}

// rightmost trace of a^2 b starts at the rightmost occurrence and replays
// to the recorded result
#[test]
fn rightmost_trace_replays() {
    let (alg, sys) = a1_algebra();
    let q = &alg.quiver;
    let p = koszul::parse::parse_single_path("a*a*b", q).unwrap();
    let trace = sys
        .normal_form_traced(q, alg.field, &p, &caps())
        .unwrap();
    assert!(trace.result.is_zero());
    // first rewrite happens at the rightmost occurrence: a(ab), position 1
    assert_eq!(trace.steps[0].position, 1);
    let replayed = sys.replay_trace(q, alg.field, &trace).unwrap();
    assert_eq!(replayed, trace.result);
    // traces over a nontrivial rewrite with surviving terms replay too
    let ab = koszul::parse::parse_single_path("a*b", q).unwrap();
    let trace = sys.normal_form_traced(q, alg.field, &ab, &caps()).unwrap();
    assert_eq!(trace.result.display(q), "b*a");
    assert_eq!(sys.replay_trace(q, alg.field, &trace).unwrap(), trace.result);
}

// replacement paths are re-reduced when a rule set is assembled
#[test]
fn rule_replacements_are_reduced_eagerly() {
    let q = Quiver::new(
        vec!["1".into()],
        vec![("x".into(), 0, 0), ("y".into(), 0, 0)],
    )
    .unwrap();
    let f = FieldSpec::Q;
    let xx = koszul::parse::parse_single_path("x*x", &q).unwrap();
    let yy = koszul::parse::parse_single_path("y*y", &q).unwrap();
    let rules = vec![
        ReductionRule {
            lhs: xx,
            rhs: parse_combination("y*y", &q, f).unwrap(),
        },
        ReductionRule {
            lhs: yy,
            rhs: PathElement::zero(),
        },
    ];
    let sys = ReductionSystem::new(&q, rules, &caps()).unwrap();
    assert!(sys.rules[0].rhs.is_zero(), "x*x goes straight to zero");
}

// a user-chosen generator basis is honored, and invalid ones are rejected
#[test]
fn basis_override_paths() {
    let (alg, sys) = a1_algebra();
    let f = alg.field;
    let mk = |s: &str| {
        koszul::tensor::WordElem::from_path_element(
            &parse_combination(s, &alg.quiver, f).unwrap(),
        )
        .unwrap()
    };
    // reorder degree 2 and rescale one generator
    let mut overrides = std::collections::BTreeMap::new();
    overrides.insert(
        2usize,
        vec![mk("a*c"), mk("2*a*a"), mk("a*b - 1*b*a"), mk("b*b")],
    );
    let k =
        koszul::resolution::build_koszul(&alg, &sys, 3, &caps(), &overrides).unwrap();
    assert_eq!(k.degrees[2].gens[0].terminal, 1, "a*c moved to index 0");
    let report = verify_complex(&k);
    assert!(report.mandatory_pass && report.coassociative);

    // an override outside the span is rejected
    let mut bad = std::collections::BTreeMap::new();
    bad.insert(
        2usize,
        vec![mk("a*c"), mk("a*a"), mk("a*b"), mk("b*b")],
    );
    match koszul::resolution::build_koszul(&alg, &sys, 3, &caps(), &bad) {
        Err(koszul::resolution::BuildError::BadOverride(2, _)) => {}
        other => panic!("expected a rejected override, got {other:?}"),
    }
}

// explicit embedded tensor of the mixed degree-2 generator
#[test]
fn bar_embedding_of_the_mixed_generator() {
    let k = xy_complex(3);
    let q = k.quiver();
    let e = koszul::bar::bar_embed(&k, 2, 1).unwrap();
    let slots: Vec<Vec<String>> = e
        .keys()
        .map(|s| s.iter().map(|p| p.display(q)).collect())
        .collect();
    assert_eq!(
        slots,
        vec![
            vec!["e_1", "x", "y", "e_1"],
            vec!["e_1", "y", "x", "e_1"],
        ]
    );
    assert!(e.values().all(|c| c.is_one()));
}

// explicit diagonal rows of the two-loop algebra in degree 2
#[test]
fn two_loop_diagonal_rows() {
    let k = xy_complex(3);
    let terms = &k.degrees[2].diag[1];
    let rows: Vec<(usize, usize, usize)> = terms.iter().map(|t| (t.v, t.p, t.q)).collect();
    assert_eq!(rows, [(0, 0, 1), (1, 0, 1), (1, 1, 0), (2, 1, 0)]);
    assert!(terms.iter().all(|t| t.coeff.is_one()));
}

// a vertex-valued cocycle gets the zero lifting from the solver
#[test]
fn vertex_valued_cocycles_lift_by_zero() {
    let k = a1(4);
    let sigma = Cochain::new(
        &k,
        2,
        vec![
            PathElement::zero(),
            PathElement::zero(),
            pe(&k, "e_1"),
            PathElement::zero(),
        ],
    )
    .unwrap();
    let psi = solve_homotopy_lifting(&k, &sigma, 3).unwrap();
    for level in &psi.maps {
        for e in level {
            assert!(e.is_empty());
        }
    }
}

// the zero map is not a homotopy lifting for an arrow-valued cocycle
#[test]
fn zero_map_fails_verification() {
    let k = a1(4);
    let eta = Cochain::new(
        &k,
        2,
        vec![
            pe(&k, "a"),
            PathElement::zero(),
            PathElement::zero(),
            PathElement::zero(),
        ],
    )
    .unwrap();
    let zero = HomotopyLifting::zero(&k, 2, 3);
    assert!(!homotopy_holds(&verify_homotopy(&k, &eta, &zero, 3)));
}

// named cocycle/coboundary reductions
#[test]
fn coboundary_reductions() {
    let k = a1(4);
    let ws = cohomology_basis(&k, 2).unwrap();
    // (a,0,0,0) is a representative: fixed point
    let eta = Cochain::new(
        &k,
        2,
        vec![pe(&k, "a"), pe(&k, "0"), pe(&k, "0"), pe(&k, "0")],
    )
    .unwrap();
    assert!(ws.is_cocycle(&k, &eta));
    assert_eq!(ws.cobound_reduce(&k, &eta), eta);
    // (0,0,b,0) is a cocycle and a coboundary: reduces to zero
    let b = Cochain::new(
        &k,
        2,
        vec![pe(&k, "0"), pe(&k, "0"), pe(&k, "b"), pe(&k, "0")],
    )
    .unwrap();
    assert!(ws.is_cocycle(&k, &b));
    assert!(ws.cobound_reduce(&k, &b).is_zero());
    // the zero cochain is a cocycle and reduces to zero
    let z = Cochain::zero(&k, 2);
    assert!(ws.is_cocycle(&k, &z));
    assert!(ws.cobound_reduce(&k, &z).is_zero());
}

// cohomology dimensions are basis independent: the generic builder and the
// closed-form family basis agree in every degree
#[test]
fn hh_dimensions_basis_independent() {
    let (alg, sys) = a1_algebra();
    let built =
        koszul::resolution::build_koszul(&alg, &sys, 4, &caps(), &Default::default()).unwrap();
    let fam = a1(4);
    for n in 0..=3 {
        let a = cohomology_basis(&built, n).unwrap();
        let b = cohomology_basis(&fam, n).unwrap();
        assert_eq!(a.dimension(), b.dimension(), "degree {n}");
    }
}

// a deliberately flipped differential sign is caught by verification
#[test]
fn mutation_is_detected() {
    let mut k = a1(4);
    // flip one coefficient of d(e2_0)
    let key = k.degrees[2].diff[0].keys().next().unwrap().clone();
    let old = k.degrees[2].diff[0].remove(&key).unwrap();
    k.degrees[2].diff[0].insert(key, old.neg());
    let report = verify_complex(&k);
    assert!(report
        .rows
        .iter()
        .any(|r| r.check == "d_squared_zero" && !r.pass));
}

/// Exports a built complex into manual-resolution tables.
fn export_manual(k: &koszul::resolution::KComplex) -> ManualResolution {
    let n = k.max_degree();
    let generators = (0..=n)
        .map(|d| {
            k.degrees[d]
                .gens
                .iter()
                .map(|g| (g.origin, g.terminal))
                .collect()
        })
        .collect();
    let mut differential = Vec::new();
    for d in 1..=n {
        for (i, e) in k.degrees[d].diff.iter().enumerate() {
            for ((j, l, r), c) in e {
                differential.push((d, i, *j, l.clone(), r.clone(), c.clone()));
            }
        }
    }
    let mut diagonal = Vec::new();
    for d in 0..=n {
        for (i, terms) in k.degrees[d].diag.iter().enumerate() {
            for t in terms {
                diagonal.push((
                    d,
                    i,
                    t.v,
                    t.p,
                    t.q,
                    t.left.clone(),
                    t.mid.clone(),
                    t.right.clone(),
                    t.coeff.clone(),
                ));
            }
        }
    }
    ManualResolution {
        max_degree: n,
        generators,
        differential,
        diagonal,
    }
}

// a built resolution survives an export/reload round trip
#[test]
fn manual_round_trip() {
    let k = kx2(4);
    let manual = export_manual(&k);
    let (back, report) =
        load_manual_resolution(&k.algebra, &k.system, &manual, &caps()).unwrap();
    assert!(report.mandatory_pass);
    for n in 0..=4usize {
        assert_eq!(back.degrees[n].diff, k.degrees[n].diff);
        assert_eq!(back.degrees[n].diag, k.degrees[n].diag);
    }
}

// dropping a differential term from the cubic resolution breaks d^2 = 0 and
// the load is rejected
#[test]
fn broken_manual_tables_are_rejected() {
    let text = data("kx3_manual.json");
    let mut doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    let diff = doc["resolution"]["manual"]["differential"]
        .as_array_mut()
        .unwrap();
    // remove the middle term x e x of every even differential
    diff.retain(|e| {
        !(e["degree"].as_u64().unwrap() % 2 == 0
            && e["left"] == "x"
            && e["right"] == "x")
    });
    let mutated = serde_json::to_string(&doc).unwrap();
    let spec = koszul::parse::parse_spec(&mutated).unwrap();
    let sys = koszul::parse::spec_reduction_system(&spec, &caps()).unwrap();
    let manual = spec.resolution.as_ref().unwrap().manual.as_ref().unwrap();
    match load_manual_resolution(&spec.algebra, &sys, manual, &caps()) {
        Err(koszul::resolution::BuildError::ManualVerify(msg)) => {
            assert!(msg.contains("d_squared_zero") || msg.contains("chain"), "{msg}");
        }
        other => panic!("expected a verification rejection, got {other:?}"),
    }
}

// star products on paths with no reducible concatenation are plain products
#[test]
fn star_product_without_rules_firing() {
    let (alg, sys) = a1_algebra();
    let q = &alg.quiver;
    let basis = sys.irr_basis(q, &caps()).unwrap();
    let phi = koszul::deform::symbolic_deformation(&sys, &basis, alg.field);
    let b = path(q, "b");
    let a = path(q, "a");
    let (lambda, tau) =
        koszul::deform::star_first_order(q, &sys, &basis, &phi, &b, &a, &caps()).unwrap();
    assert_eq!(lambda.display(q), "b*a");
    assert!(tau.is_empty());
}

// the worked star products: a * a emits the deformation of a^2; the nested
// product keeps only the undeformed parts of the inner factors
#[test]
fn star_product_worked_examples() {
    let (alg, sys) = a1_algebra();
    let q = &alg.quiver;
    let f = alg.field;
    let basis = sys.irr_basis(q, &caps()).unwrap();
    let phi = koszul::deform::symbolic_deformation(&sys, &basis, f);
    let a = path(q, "a");
    let (lambda, tau) =
        koszul::deform::star_first_order(q, &sys, &basis, &phi, &a, &a, &caps()).unwrap();
    assert!(lambda.is_zero());
    // tau = the full symbolic deformation of a^2: lambda_e + lambda_a a +
    // lambda_b b + lambda_ba ba
    assert_eq!(tau.len(), 4);
    for (p, expr) in &tau {
        assert_eq!(expr.terms.len(), 1);
        let (id, c) = expr.terms.iter().next().unwrap();
        assert!(c.is_one());
        let info = &phi.params[*id];
        assert_eq!(info.rule, 0);
        assert_eq!(&info.path, p);
    }
    // a * (a * a): evaluate a * w for each tau path w of a*a, keeping the
    // plain part: lambda_e a + lambda_b ba
    let mut nested: std::collections::BTreeMap<Path, Vec<usize>> = Default::default();
    for (w, expr) in &tau {
        let (lam, _) = koszul::deform::star_first_order(
            q, &sys, &basis, &phi, &a, w, &caps(),
        )
        .unwrap();
        for (p, c) in lam.iter() {
            assert!(c.is_one());
            for id in expr.terms.keys() {
                nested.entry(p.clone()).or_default().push(*id);
            }
        }
    }
    let name = |id: usize| phi.params[id].path.display(q);
    let got: Vec<(String, Vec<String>)> = nested
        .iter()
        .map(|(p, ids)| (p.display(q), ids.iter().map(|&i| name(i)).collect()))
        .collect();
    assert_eq!(
        got,
        vec![
            ("a".to_string(), vec!["e_1".to_string()]),
            ("b*a".to_string(), vec!["b".to_string()]),
        ]
    );
}

// solved family dimension for the truncated polynomial ring matches its
// degree-2 cohomology
#[test]
fn kx2_family_matches_hh2() {
    let k = kx2(4);
    let family = koszul::deform::solve_mc_first_order(
        k.quiver(),
        &k.system,
        &k.basis,
        k.field(),
        &caps(),
    )
    .unwrap();
    // no constraints from the single overlap x^3
    assert_eq!(family.constraints.free.len(), 2);
    let reduced = koszul::deform::gauge_reduce(
        k.quiver(),
        &k.system,
        &k.basis,
        &family,
        k.field(),
        &caps(),
    )
    .unwrap();
    assert_eq!(reduced.surviving.len(), 1);
    let hh2 = cohomology_basis(&k, 2).unwrap();
    assert_eq!(reduced.surviving.len(), hh2.dimension());
}

// gauge reduction refuses characteristic 2
#[test]
fn gauge_reduction_guards_characteristic_two() {
    let f = FieldSpec::Fp(2);
    let k = koszul::resolution::build_family(f, &f.one(), 3, &caps()).unwrap();
    let family = koszul::deform::solve_mc_first_order(
        k.quiver(),
        &k.system,
        &k.basis,
        f,
        &caps(),
    )
    .unwrap();
    match koszul::deform::gauge_reduce(k.quiver(), &k.system, &k.basis, &family, f, &caps()) {
        Err(koszul::deform::DeformError::CharacteristicTwo) => {}
        other => panic!("expected the characteristic-2 guard, got {other:?}"),
    }
}

// prime-field sanity: the family member over F5 has the same cohomology
// dimensions in low degrees as over Q
#[test]
fn family_over_a_prime_field() {
    let f = FieldSpec::Fp(5);
    let k = koszul::resolution::build_family(f, &f.one(), 4, &caps()).unwrap();
    let report = verify_complex(&k);
    assert!(report.mandatory_pass && report.coassociative);
    assert_eq!(cohomology_basis(&k, 2).unwrap().dimension(), 5);
}

// endpoint guard: a value violating the Hom condition is rejected
#[test]
fn cochain_endpoint_guard() {
    let k = a1(4);
    // generator 3 runs from vertex 1 to vertex 2; value a is a loop at 1
    let bad = Cochain::new(
        &k,
        2,
        vec![
            PathElement::zero(),
            PathElement::zero(),
            PathElement::zero(),
            pe(&k, "a"),
        ],
    );
    assert!(matches!(
        bad,
        Err(koszul::cohomology::CochainError::Endpoints { .. })
    ));
}

// uniform parts of mixed elements group by endpoints and length
#[test]
fn uniform_parts_grouping() {
    let q = a1_quiver();
    let e = parse_combination("e_1 + c", &q, FieldSpec::Q).unwrap();
    let parts = e.uniform_parts();
    assert_eq!(parts.len(), 2);
    assert_eq!(parts[0].0, (0, 0, 0));
    assert_eq!(parts[1].0, (0, 1, 1));
}

// mixing ground fields in one computation is a programming error and says so
#[test]
#[should_panic(expected = "mixed field contexts")]
fn mixed_fields_panic() {
    let q = a1_quiver();
    let x = parse_combination("a", &q, FieldSpec::Q).unwrap();
    let y = parse_combination("a", &q, FieldSpec::Fp(5)).unwrap();
    let _ = x.multiply(&y);
}

// degree-0 cochain space counts loops vertex by vertex
#[test]
fn degree_zero_cochain_dimensions() {
    let k = a1(3);
    // loops in the basis: e_1, a, b, b*a at vertex 1 and e_2 at vertex 2
    let space = koszul::cohomology::cochain_space(&k, 0).unwrap();
    assert_eq!(space.dimension(), 5);
}

// a rule-free presentation has no deformation directions at all
#[test]
fn empty_reduction_system_family() {
    let q = Quiver::new(
        vec!["1".into(), "2".into()],
        vec![("c".into(), 0, 1)],
    )
    .unwrap();
    let sys = ReductionSystem::new(&q, vec![], &caps()).unwrap();
    let basis = sys.irr_basis(&q, &caps()).unwrap();
    let family =
        koszul::deform::solve_mc_first_order(&q, &sys, &basis, FieldSpec::Q, &caps()).unwrap();
    assert!(family.deformation.params.is_empty());
    assert!(family.constraints.free.is_empty());
}

// the star product refuses reducible inputs
#[test]
fn star_product_guards_reducible_inputs() {
    let (alg, sys) = a1_algebra();
    let q = &alg.quiver;
    let basis = sys.irr_basis(q, &caps()).unwrap();
    let phi = koszul::deform::symbolic_deformation(&sys, &basis, alg.field);
    let ab = koszul::parse::parse_single_path("a*b", q).unwrap();
    let a = path(q, "a");
    match koszul::deform::star_first_order(q, &sys, &basis, &phi, &ab, &a, &caps()) {
        Err(koszul::deform::DeformError::Reducible) => {}
        other => panic!("expected a reducibility error, got {other:?}"),
    }
}

// the self-bracket of the degree-1 cocycle over the two-loop algebra
// vanishes at the chain level; no cochain-space matrices are needed
#[test]
fn two_loop_self_bracket_is_zero() {
    let k = xy_complex(3);
    let theta = Cochain::new(&k, 1, vec![PathElement::zero(), pe(&k, "y")]).unwrap();
    let psi = solve_homotopy_lifting(&k, &theta, 1).unwrap();
    let b = koszul::lifting::bracket(&k, &theta, &psi, &theta, &psi).unwrap();
    assert!(b.raw.is_zero());
    assert!(b.reduced.is_none(), "reduction is unavailable over an infinite basis");
}

//! Quiver spec documents and the linear-combination grammar.
//!
//! A spec document is JSON with keys `field` ("Q" or `{"Fp": p}`),
//! `vertices`, `arrows`, `relations`, and optionally `reduction_rules` and
//! `resolution`. Paths are written as `*`-separated arrow names, vertex
//! idempotents as `e_<vertex>`, scalars as integer or `n/d` literals, e.g.
//! `"a*b - 1*b*a"`.

use crate::algebra::PresentedAlgebra;
use crate::element::PathElement;
use crate::quiver::{Path, Quiver};
use crate::reduction::{Caps, ReductionRule, ReductionSystem};
use crate::scalar::{FieldSpec, Scalar};
use serde_json::Value;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SpecError {
    #[error("json syntax error: {0}")]
    Json(String),
    #[error("{context}: {message}")]
    Semantic { context: String, message: String },
}

fn err<T>(context: &str, message: impl Into<String>) -> Result<T, SpecError> {
    Err(SpecError::Semantic {
        context: context.to_string(),
        message: message.into(),
    })
}

/// A parsed spec document: the algebra plus optional reduction rules and
/// resolution data, still unvalidated against the diamond condition.
pub struct ParsedSpec {
    pub algebra: PresentedAlgebra,
    pub reduction_rules: Option<Vec<ReductionRule>>,
    pub resolution: Option<ResolutionSection>,
}

/// The optional `resolution` section of a spec document.
pub struct ResolutionSection {
    /// Per-degree generator overrides for the Koszul builder, keyed by degree.
    pub basis_override: Vec<(usize, Vec<PathElement>)>,
    pub manual: Option<ManualResolution>,
}

/// A manually supplied bimodule resolution with comultiplicative data.
pub struct ManualResolution {
    pub max_degree: usize,
    /// Per degree, per generator: `(origin, terminal)`.
    pub generators: Vec<Vec<(usize, usize)>>,
    /// `(degree, from_index, to_index, left, right, scalar)`.
    pub differential: Vec<(usize, usize, usize, Path, Path, Scalar)>,
    /// `(degree, index, v, p, q, left, mid, right, scalar)`.
    pub diagonal: Vec<(usize, usize, usize, usize, usize, Path, Path, Path, Scalar)>,
}

pub fn parse_spec(text: &str) -> Result<ParsedSpec, SpecError> {
    let doc: Value =
        serde_json::from_str(text).map_err(|e| SpecError::Json(e.to_string()))?;
    let obj = doc
        .as_object()
        .ok_or_else(|| SpecError::Json("top level must be an object".into()))?;

    let field = parse_field(obj.get("field"))?;

    let vertices: Vec<String> = match obj.get("vertices") {
        Some(Value::Array(vs)) => vs
            .iter()
            .enumerate()
            .map(|(i, v)| {
                v.as_str()
                    .map(str::to_string)
                    .ok_or_else(|| SpecError::Semantic {
                        context: format!("vertices[{i}]"),
                        message: "expected a string".into(),
                    })
            })
            .collect::<Result<_, _>>()?,
        _ => return err("vertices", "missing or not an array"),
    };

    let mut arrows = Vec::new();
    match obj.get("arrows") {
        Some(Value::Array(items)) => {
            for (i, item) in items.iter().enumerate() {
                let ctx = format!("arrows[{i}]");
                let o = item
                    .as_object()
                    .ok_or_else(|| SpecError::Semantic {
                        context: ctx.clone(),
                        message: "expected an object".into(),
                    })?;
                let name = get_str(o, "name", &ctx)?;
                let from = get_str(o, "from", &ctx)?;
                let to = get_str(o, "to", &ctx)?;
                let fi = vertices
                    .iter()
                    .position(|v| *v == from)
                    .ok_or_else(|| SpecError::Semantic {
                        context: ctx.clone(),
                        message: format!("unknown vertex `{from}`"),
                    })?;
                let ti = vertices
                    .iter()
                    .position(|v| *v == to)
                    .ok_or_else(|| SpecError::Semantic {
                        context: ctx.clone(),
                        message: format!("unknown vertex `{to}`"),
                    })?;
                arrows.push((name, fi, ti));
            }
        }
        _ => return err("arrows", "missing or not an array"),
    }

    let quiver = Quiver::new(vertices, arrows)
        .map_err(|m| SpecError::Semantic {
            context: "arrows".into(),
            message: m,
        })?;

    let mut relations = Vec::new();
    match obj.get("relations") {
        Some(Value::Array(items)) => {
            for (i, item) in items.iter().enumerate() {
                let ctx = format!("relations[{i}]");
                let s = item.as_str().ok_or_else(|| SpecError::Semantic {
                    context: ctx.clone(),
                    message: "expected a string".into(),
                })?;
                relations.push(parse_combination(s, &quiver, field).map_err(
                    |m| SpecError::Semantic {
                        context: ctx,
                        message: m,
                    },
                )?);
            }
        }
        None => {}
        Some(_) => return err("relations", "not an array"),
    }

    let algebra = PresentedAlgebra::new(quiver, field, relations).map_err(|m| {
        SpecError::Semantic {
            context: "relations".into(),
            message: m,
        }
    })?;

    let reduction_rules = match obj.get("reduction_rules") {
        None => None,
        Some(Value::Array(items)) => {
            let mut rules = Vec::new();
            for (i, item) in items.iter().enumerate() {
                let ctx = format!("reduction_rules[{i}]");
                let o = item.as_object().ok_or_else(|| SpecError::Semantic {
                    context: ctx.clone(),
                    message: "expected an object".into(),
                })?;
                let lhs_s = get_str(o, "lhs", &ctx)?;
                let rhs_s = get_str(o, "rhs", &ctx)?;
                let lhs = parse_single_path(&lhs_s, &algebra.quiver).map_err(|m| {
                    SpecError::Semantic {
                        context: ctx.clone(),
                        message: m,
                    }
                })?;
                let rhs = parse_combination(&rhs_s, &algebra.quiver, field).map_err(
                    |m| SpecError::Semantic {
                        context: ctx,
                        message: m,
                    },
                )?;
                rules.push(ReductionRule { lhs, rhs });
            }
            Some(rules)
        }
        Some(_) => return err("reduction_rules", "not an array"),
    };

    let resolution = match obj.get("resolution") {
        None => None,
        Some(v) => Some(parse_resolution_section(v, &algebra)?),
    };

    Ok(ParsedSpec {
        algebra,
        reduction_rules,
        resolution,
    })
}

fn parse_field(v: Option<&Value>) -> Result<FieldSpec, SpecError> {
    let field = match v {
        Some(Value::String(s)) if s == "Q" => FieldSpec::Q,
        Some(Value::Object(o)) => match o.get("Fp") {
            Some(Value::Number(n)) => {
                let p = n.as_u64().ok_or_else(|| SpecError::Semantic {
                    context: "field".into(),
                    message: "Fp modulus must be a positive integer".into(),
                })?;
                FieldSpec::Fp(p)
            }
            _ => return err("field", "expected {\"Fp\": p}"),
        },
        _ => return err("field", "expected \"Q\" or {\"Fp\": p}"),
    };
    field.validate().map_err(|m| SpecError::Semantic {
        context: "field".into(),
        message: m,
    })?;
    Ok(field)
}

fn get_str(
    o: &serde_json::Map<String, Value>,
    key: &str,
    ctx: &str,
) -> Result<String, SpecError> {
    match o.get(key) {
        Some(Value::String(s)) => Ok(s.clone()),
        _ => err(ctx, format!("missing string field `{key}`")),
    }
}

fn get_usize(
    o: &serde_json::Map<String, Value>,
    key: &str,
    ctx: &str,
) -> Result<usize, SpecError> {
    match o.get(key) {
        Some(Value::Number(n)) => n
            .as_u64()
            .map(|u| u as usize)
            .ok_or_else(|| SpecError::Semantic {
                context: ctx.to_string(),
                message: format!("field `{key}` must be a nonnegative integer"),
            }),
        _ => err(ctx, format!("missing integer field `{key}`")),
    }
}

fn parse_resolution_section(
    v: &Value,
    algebra: &PresentedAlgebra,
) -> Result<ResolutionSection, SpecError> {
    let o = v
        .as_object()
        .ok_or_else(|| SpecError::Semantic {
            context: "resolution".into(),
            message: "expected an object".into(),
        })?;
    let mut basis_override = Vec::new();
    if let Some(Value::Object(bo)) = o.get("basis_override") {
        for (deg_s, arr) in bo {
            let ctx = format!("resolution.basis_override[{deg_s}]");
            let deg: usize = deg_s.parse().map_err(|_| SpecError::Semantic {
                context: ctx.clone(),
                message: "degree key must be an integer".into(),
            })?;
            let items = arr.as_array().ok_or_else(|| SpecError::Semantic {
                context: ctx.clone(),
                message: "expected an array".into(),
            })?;
            let mut elems = Vec::new();
            for (i, item) in items.iter().enumerate() {
                let s = item.as_str().ok_or_else(|| SpecError::Semantic {
                    context: format!("{ctx}[{i}]"),
                    message: "expected a string".into(),
                })?;
                elems.push(
                    parse_combination(s, &algebra.quiver, algebra.field).map_err(|m| {
                        SpecError::Semantic {
                            context: format!("{ctx}[{i}]"),
                            message: m,
                        }
                    })?,
                );
            }
            basis_override.push((deg, elems));
        }
        basis_override.sort_by_key(|(d, _)| *d);
    }

    let manual = match o.get("manual") {
        None => None,
        Some(mv) => Some(parse_manual(mv, algebra)?),
    };

    Ok(ResolutionSection {
        basis_override,
        manual,
    })
}

fn parse_manual(v: &Value, algebra: &PresentedAlgebra) -> Result<ManualResolution, SpecError> {
    let o = v.as_object().ok_or_else(|| SpecError::Semantic {
        context: "resolution.manual".into(),
        message: "expected an object".into(),
    })?;
    let quiver = &algebra.quiver;
    let field = algebra.field;
    let max_degree = get_usize(o, "max_degree", "resolution.manual")?;

    let mut generators = Vec::new();
    match o.get("generators") {
        Some(Value::Array(per_degree)) => {
            for (d, degree) in per_degree.iter().enumerate() {
                let ctx = format!("resolution.manual.generators[{d}]");
                let items = degree.as_array().ok_or_else(|| SpecError::Semantic {
                    context: ctx.clone(),
                    message: "expected an array".into(),
                })?;
                let mut gens = Vec::new();
                for (i, item) in items.iter().enumerate() {
                    let gctx = format!("{ctx}[{i}]");
                    let go = item.as_object().ok_or_else(|| SpecError::Semantic {
                        context: gctx.clone(),
                        message: "expected an object".into(),
                    })?;
                    let origin = get_str(go, "origin", &gctx)?;
                    let terminal = get_str(go, "terminal", &gctx)?;
                    let oi = quiver.find_vertex(&origin).ok_or_else(|| {
                        SpecError::Semantic {
                            context: gctx.clone(),
                            message: format!("unknown vertex `{origin}`"),
                        }
                    })?;
                    let ti = quiver.find_vertex(&terminal).ok_or_else(|| {
                        SpecError::Semantic {
                            context: gctx.clone(),
                            message: format!("unknown vertex `{terminal}`"),
                        }
                    })?;
                    gens.push((oi, ti));
                }
                generators.push(gens);
            }
        }
        _ => return err("resolution.manual.generators", "missing or not an array"),
    }

    let mut differential = Vec::new();
    match o.get("differential") {
        Some(Value::Array(items)) => {
            for (i, item) in items.iter().enumerate() {
                let ctx = format!("resolution.manual.differential[{i}]");
                let eo = item.as_object().ok_or_else(|| SpecError::Semantic {
                    context: ctx.clone(),
                    message: "expected an object".into(),
                })?;
                let degree = get_usize(eo, "degree", &ctx)?;
                let from = get_usize(eo, "from", &ctx)?;
                let to = get_usize(eo, "to", &ctx)?;
                let left = parse_single_path(&get_str(eo, "left", &ctx)?, quiver)
                    .map_err(|m| SpecError::Semantic {
                        context: ctx.clone(),
                        message: m,
                    })?;
                let right = parse_single_path(&get_str(eo, "right", &ctx)?, quiver)
                    .map_err(|m| SpecError::Semantic {
                        context: ctx.clone(),
                        message: m,
                    })?;
                let scalar = Scalar::parse(&get_str(eo, "scalar", &ctx)?, field)
                    .map_err(|m| SpecError::Semantic {
                        context: ctx.clone(),
                        message: m,
                    })?;
                differential.push((degree, from, to, left, right, scalar));
            }
        }
        _ => return err("resolution.manual.differential", "missing or not an array"),
    }

    let mut diagonal = Vec::new();
    match o.get("diagonal") {
        Some(Value::Array(items)) => {
            for (i, item) in items.iter().enumerate() {
                let ctx = format!("resolution.manual.diagonal[{i}]");
                let eo = item.as_object().ok_or_else(|| SpecError::Semantic {
                    context: ctx.clone(),
                    message: "expected an object".into(),
                })?;
                let degree = get_usize(eo, "degree", &ctx)?;
                let index = get_usize(eo, "index", &ctx)?;
                let v = get_usize(eo, "v", &ctx)?;
                let p = get_usize(eo, "p", &ctx)?;
                let q = get_usize(eo, "q", &ctx)?;
                let path_or_vertex = |key: &str, fallback: usize| -> Result<Path, SpecError> {
                    match eo.get(key) {
                        None => Ok(Path::vertex(fallback)),
                        Some(Value::String(s)) => parse_single_path(s, quiver).map_err(|m| {
                            SpecError::Semantic {
                                context: ctx.clone(),
                                message: m,
                            }
                        }),
                        Some(_) => err(&ctx, format!("field `{key}` must be a string")),
                    }
                };
                // coefficient defaults: vertices are resolved by the loader,
                // which knows generator endpoints; use 0 as a placeholder that
                // the loader replaces.
                let left = path_or_vertex("left", 0)?;
                let mid = path_or_vertex("mid", 0)?;
                let right = path_or_vertex("right", 0)?;
                let scalar = Scalar::parse(&get_str(eo, "scalar", &ctx)?, field)
                    .map_err(|m| SpecError::Semantic {
                        context: ctx.clone(),
                        message: m,
                    })?;
                diagonal.push((degree, index, v, p, q, left, mid, right, scalar));
            }
        }
        _ => return err("resolution.manual.diagonal", "missing or not an array"),
    }

    Ok(ManualResolution {
        max_degree,
        generators,
        differential,
        diagonal,
    })
}

/// Builds the reduction system a spec document asks for: explicit rules when
/// given, otherwise leading-term extraction from the relations.
pub fn spec_reduction_system(
    spec: &ParsedSpec,
    caps: &Caps,
) -> Result<ReductionSystem, crate::reduction::ReductionError> {
    match &spec.reduction_rules {
        Some(rules) => ReductionSystem::new(&spec.algebra.quiver, rules.clone(), caps),
        None => crate::reduction::default_reduction_system(&spec.algebra, caps),
    }
}

/// Parses a `*`-separated path (or `e_<vertex>`); rejects combinations.
pub fn parse_single_path(text: &str, quiver: &Quiver) -> Result<Path, String> {
    let elem = parse_combination(text, quiver, FieldSpec::Q)?;
    let mut it = elem.iter();
    match (it.next(), it.next()) {
        (Some((p, c)), None) if c.is_one() => Ok(p.clone()),
        _ => Err(format!("`{text}` is not a single path")),
    }
}

/// Parses a linear combination such as `a*b - 1/2*b*a + e_1`. Reports the
/// character position of the first offending token.
pub fn parse_combination(
    text: &str,
    quiver: &Quiver,
    field: FieldSpec,
) -> Result<PathElement, String> {
    let tokens = tokenize(text)?;
    let mut out = PathElement::zero();
    let mut i = 0usize;
    if tokens.is_empty() {
        return Err("empty expression".to_string());
    }
    let mut sign = field.one();
    // leading sign
    if let Tok::Op(c, _) = &tokens[i] {
        match c {
            '-' => {
                sign = sign.neg();
                i += 1;
            }
            '+' => {
                i += 1;
            }
            _ => {}
        }
    }
    loop {
        let (term, next) = parse_term(&tokens, i, text, quiver, field)?;
        out = out.add(&term.scale(&sign));
        i = next;
        if i == tokens.len() {
            break;
        }
        match &tokens[i] {
            Tok::Op('+', _) => {
                sign = field.one();
                i += 1;
            }
            Tok::Op('-', _) => {
                sign = field.one().neg();
                i += 1;
            }
            Tok::Op(c, pos) => {
                return Err(format!("unexpected `{c}` at position {pos}"));
            }
            Tok::Word(w, pos) => {
                return Err(format!("unexpected `{w}` at position {pos}"));
            }
        }
        if i == tokens.len() {
            return Err("dangling operator at end of expression".to_string());
        }
    }
    Ok(out)
}

enum Tok {
    /// `+`, `-`, `*` with its character position.
    Op(char, usize),
    /// An identifier or numeric literal with its character position.
    Word(String, usize),
}

fn tokenize(text: &str) -> Result<Vec<Tok>, String> {
    let mut toks = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c == '+' || c == '-' || c == '*' {
            toks.push(Tok::Op(c, i));
            i += 1;
        } else if c.is_alphanumeric() || c == '_' || c == '/' {
            let start = i;
            while i < chars.len()
                && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '/')
            {
                i += 1;
            }
            toks.push(Tok::Word(chars[start..i].iter().collect(), start));
        } else {
            return Err(format!("unexpected character `{c}` at position {i}"));
        }
    }
    Ok(toks)
}

fn is_numeric(word: &str) -> bool {
    word.chars().all(|c| c.is_ascii_digit() || c == '/')
        && word.chars().next().is_some_and(|c| c.is_ascii_digit())
}

fn parse_term(
    tokens: &[Tok],
    mut i: usize,
    text: &str,
    quiver: &Quiver,
    field: FieldSpec,
) -> Result<(PathElement, usize), String> {
    let mut coeff = field.one();
    let mut atoms: Vec<Path> = Vec::new();
    loop {
        match tokens.get(i) {
            Some(Tok::Word(w, pos)) => {
                if is_numeric(w) {
                    let s = Scalar::parse(w, field)
                        .map_err(|m| format!("{m} at position {pos}"))?;
                    coeff = coeff.mul(&s);
                } else if let Some(a) = quiver.find_arrow(w) {
                    atoms.push(Path::arrow(quiver, a));
                } else if let Some(v) = w
                    .strip_prefix("e_")
                    .and_then(|name| quiver.find_vertex(name))
                {
                    atoms.push(Path::vertex(v));
                } else {
                    return Err(format!(
                        "unknown arrow or vertex `{w}` at position {pos} in `{text}`"
                    ));
                }
                i += 1;
            }
            _ => return Err(format!("expected a path or scalar at token {i}")),
        }
        match tokens.get(i) {
            Some(Tok::Op('*', _)) => {
                i += 1;
                continue;
            }
            _ => break,
        }
    }
    // a bare scalar is only legal when it is zero
    if atoms.is_empty() {
        return if coeff.is_zero() {
            Ok((PathElement::zero(), i))
        } else {
            Err("a bare scalar must be 0; use e_<vertex> for idempotents".to_string())
        };
    }
    let mut path = atoms[0].clone();
    for a in &atoms[1..] {
        match path.compose(a) {
            Some(p) => path = p,
            None => {
                // non-composable product is zero in kQ
                return Ok((PathElement::zero(), i));
            }
        }
    }
    Ok((PathElement::from_term(path, coeff), i))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quiver() -> Quiver {
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

    #[test]
    fn combination_grammar() {
        let q = quiver();
        let f = FieldSpec::Q;
        let e = parse_combination("a*b - 1*b*a", &q, f).unwrap();
        assert_eq!(e.len(), 2);
        let e = parse_combination("1/2*a + e_1", &q, f).unwrap();
        assert_eq!(e.len(), 2);
        assert!(parse_combination("a*z", &q, f).is_err());
        assert!(parse_combination("a +", &q, f).is_err());
        assert_eq!(parse_combination("0", &q, f).unwrap(), PathElement::zero());
        // c*a has mismatched endpoints: zero, not an error
        assert!(parse_combination("c*a", &q, f).unwrap().is_zero());
    }

    #[test]
    fn full_document() {
        let text = r#"{
            "field": "Q",
            "vertices": ["1", "2"],
            "arrows": [
                {"name": "a", "from": "1", "to": "1"},
                {"name": "b", "from": "1", "to": "1"},
                {"name": "c", "from": "1", "to": "2"}
            ],
            "relations": ["a*a", "b*b", "a*b - 1*b*a", "a*c"]
        }"#;
        let spec = parse_spec(text).unwrap();
        assert_eq!(spec.algebra.relations.len(), 4);
        assert!(spec.algebra.quadratic);
        assert!(spec.reduction_rules.is_none());
    }

    #[test]
    fn rejects_non_prime_modulus() {
        let text = r#"{
            "field": {"Fp": 6},
            "vertices": ["1"],
            "arrows": [{"name": "x", "from": "1", "to": "1"}],
            "relations": ["x*x"]
        }"#;
        assert!(parse_spec(text).is_err());
    }

    #[test]
    fn reports_unknown_names() {
        let text = r#"{
            "field": "Q",
            "vertices": ["1"],
            "arrows": [{"name": "x", "from": "1", "to": "3"}],
            "relations": []
        }"#;
        match parse_spec(text) {
            Err(e) => assert!(e.to_string().contains("unknown vertex")),
            Ok(_) => panic!("expected an error"),
        }
    }
}

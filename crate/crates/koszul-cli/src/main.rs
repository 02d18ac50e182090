//! Command-line interface: spec documents in, deterministic JSON reports out.
//!
//! Exit codes: 0 success, 1 mathematical failure (diamond fails, a check
//! fails, no lifting), 2 usage or parse errors.

use clap::{Parser, Subcommand};
use koszul::cohomology::{cochain_space, cohomology_basis, Cochain};
use koszul::deform::{gauge_reduce, solve_mc_first_order};
use koszul::lifting::{
    homotopy_holds, maurer_cartan_check, solve_homotopy_lifting, verify_homotopy,
};
use koszul::parse::{parse_spec, spec_reduction_system, ParsedSpec};
use koszul::quiver::Quiver;
use koszul::reduction::Caps;
use koszul::resolution::{build_koszul, load_manual_resolution, verify_complex, KComplex};
use koszul::tensor::WordElem;
use serde_json::{json, Map, Value};
use std::collections::BTreeMap;
use std::process::ExitCode;

const SCHEMA_VERSION: &str = "1";

#[derive(Parser)]
#[command(name = "koszul", version, about = "Exact computer algebra for quiver algebras: reduction systems, bimodule resolutions, Hochschild cohomology, Gerstenhaber brackets, and first-order deformations")]
struct Cli {
    /// Quiver spec document (JSON)
    #[arg(long, global = true)]
    input: Option<String>,
    /// Maximum homological degree to construct
    #[arg(long, default_value_t = 5, global = true)]
    max_degree: usize,
    /// Ground-field override: Q or Fp:<p>
    #[arg(long, global = true)]
    field: Option<String>,
    /// Output format
    #[arg(long, default_value = "json", global = true)]
    format: String,
    /// Rewrite-step cap
    #[arg(long, default_value_t = 1_000_000, global = true)]
    rewrite_cap: usize,
    /// Irreducible-basis size cap
    #[arg(long, default_value_t = 10_000, global = true)]
    basis_cap: usize,
    /// Linear-solver size cap
    #[arg(long, default_value_t = 25_000_000, global = true)]
    solver_cap: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate a spec document
    Validate,
    /// Print the overlap set and the diamond-condition report
    Diamond,
    /// Enumerate the irreducible-path basis of the quotient algebra
    Basis,
    /// Construct the resolution and print its scalar tables
    Resolution,
    /// Hochschild cohomology in one degree
    Hh {
        #[arg(long)]
        degree: usize,
    },
    /// Solve a homotopy lifting for a cocycle (JSON file)
    Lift {
        #[arg(long)]
        cocycle: String,
    },
    /// Gerstenhaber bracket of two cocycles (JSON files)
    Bracket {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
    },
    /// Maurer-Cartan test for a degree-2 cocycle
    McCheck {
        #[arg(long)]
        cocycle: String,
    },
    /// First-order deformations from the reduction system
    Deform {
        /// Also bridge each reduced direction into the resolution pipeline
        #[arg(long)]
        crosscheck: bool,
    },
}

/// Failures carry the exit code they map to and, for mathematical
/// failures, the full report they were derived from.
struct Failure {
    code: u8,
    message: String,
    report: Option<Value>,
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: msg.into(),
        report: None,
    }
}

fn math(msg: impl Into<String>) -> Failure {
    Failure {
        code: 1,
        message: msg.into(),
        report: None,
    }
}

fn math_with_report(msg: impl Into<String>, report: Value) -> Failure {
    Failure {
        code: 1,
        message: msg.into(),
        report: Some(report),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            if cli.format == "text" {
                print_text(&report, 0);
            } else {
                println!("{}", serde_json::to_string_pretty(&report).unwrap());
            }
            ExitCode::SUCCESS
        }
        Err(f) => {
            // a failing check still emits its full report, with the error
            // folded in, as a single document
            let report = match f.report {
                Some(Value::Object(mut m)) => {
                    m.insert("error".into(), f.message.clone().into());
                    Value::Object(m)
                }
                _ => json!({
                    "schema_version": SCHEMA_VERSION,
                    "error": f.message,
                }),
            };
            if cli.format == "text" {
                eprintln!("error: {}", f.message);
                print_text(&report, 0);
            } else {
                println!("{}", serde_json::to_string_pretty(&report).unwrap());
            }
            ExitCode::from(f.code)
        }
    }
}

fn caps(cli: &Cli) -> Caps {
    Caps {
        rewrite_steps: cli.rewrite_cap,
        basis_size: cli.basis_cap,
        solver_entries: cli.solver_cap,
    }
}

fn load_spec(cli: &Cli) -> Result<ParsedSpec, Failure> {
    let path = cli
        .input
        .as_ref()
        .ok_or_else(|| usage("--input <file> is required"))?;
    let mut text = std::fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read `{path}`: {e}")))?;
    if let Some(field) = &cli.field {
        let field_value = if field == "Q" {
            Value::String("Q".into())
        } else if let Some(p) = field.strip_prefix("Fp:") {
            let p: u64 = p
                .parse()
                .map_err(|_| usage(format!("bad field override `{field}`")))?;
            json!({ "Fp": p })
        } else {
            return Err(usage(format!(
                "bad field override `{field}`; expected Q or Fp:<p>"
            )));
        };
        let mut doc: Value = serde_json::from_str(&text)
            .map_err(|e| usage(format!("json syntax error: {e}")))?;
        doc.as_object_mut()
            .ok_or_else(|| usage("top level must be an object"))?
            .insert("field".into(), field_value);
        text = serde_json::to_string(&doc).unwrap();
    }
    parse_spec(&text).map_err(|e| usage(e.to_string()))
}

fn load_complex(cli: &Cli, spec: &ParsedSpec) -> Result<KComplex, Failure> {
    let caps = caps(cli);
    let system = spec_reduction_system(spec, &caps).map_err(|e| math(e.to_string()))?;
    let diamond = system
        .check_diamond(&spec.algebra.quiver, &caps)
        .map_err(|e| math(e.to_string()))?;
    if !diamond.resolvable {
        return Err(math(
            "the reduction system fails the diamond condition; run `diamond` for the report",
        ));
    }
    if let Some(res) = &spec.resolution {
        if let Some(manual) = &res.manual {
            let (k, _) = load_manual_resolution(&spec.algebra, &system, manual, &caps)
                .map_err(|e| math(e.to_string()))?;
            return Ok(k);
        }
    }
    let mut overrides: BTreeMap<usize, Vec<WordElem>> = BTreeMap::new();
    if let Some(res) = &spec.resolution {
        for (deg, elems) in &res.basis_override {
            let mut words = Vec::new();
            for e in elems {
                words.push(
                    WordElem::from_path_element(e)
                        .ok_or_else(|| usage("basis_override entries must be homogeneous"))?,
                );
            }
            overrides.insert(*deg, words);
        }
    }
    build_koszul(&spec.algebra, &system, cli.max_degree, &caps, &overrides)
        .map_err(|e| math(e.to_string()))
}

fn parse_cochain_file(
    path: &str,
    k: &KComplex,
) -> Result<Cochain, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read `{path}`: {e}")))?;
    let doc: Value =
        serde_json::from_str(&text).map_err(|e| usage(format!("json syntax error: {e}")))?;
    let obj = doc
        .as_object()
        .ok_or_else(|| usage("cochain file must be an object"))?;
    let degree = obj
        .get("degree")
        .and_then(Value::as_u64)
        .ok_or_else(|| usage("cochain file needs an integer `degree`"))? as usize;
    let values = obj
        .get("values")
        .and_then(Value::as_array)
        .ok_or_else(|| usage("cochain file needs a `values` array"))?;
    let mut parsed = Vec::new();
    for (i, v) in values.iter().enumerate() {
        let s = v
            .as_str()
            .ok_or_else(|| usage(format!("values[{i}] must be a string")))?;
        parsed.push(
            koszul::parse::parse_combination(s, k.quiver(), k.field())
                .map_err(|e| usage(format!("values[{i}]: {e}")))?,
        );
    }
    Cochain::new(k, degree, parsed).map_err(|e| usage(e.to_string()))
}

fn base_report(cli: &Cli, command: &str) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("schema_version".into(), SCHEMA_VERSION.into());
    m.insert("command".into(), command.into());
    if let Some(input) = &cli.input {
        let name = std::path::Path::new(input)
            .file_name()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| input.clone());
        m.insert("input".into(), name.into());
    }
    m
}

fn run(cli: &Cli) -> Result<Value, Failure> {
    match &cli.command {
        Command::Validate => cmd_validate(cli),
        Command::Diamond => cmd_diamond(cli),
        Command::Basis => cmd_basis(cli),
        Command::Resolution => cmd_resolution(cli),
        Command::Hh { degree } => cmd_hh(cli, *degree),
        Command::Lift { cocycle } => cmd_lift(cli, cocycle),
        Command::Bracket { left, right } => cmd_bracket(cli, left, right),
        Command::McCheck { cocycle } => cmd_mc(cli, cocycle),
        Command::Deform { crosscheck } => cmd_deform(cli, *crosscheck),
    }
}

fn cmd_validate(cli: &Cli) -> Result<Value, Failure> {
    let spec = load_spec(cli)?;
    let mut m = base_report(cli, "validate");
    let q = &spec.algebra.quiver;
    m.insert("field".into(), spec.algebra.field.to_string().into());
    m.insert(
        "vertices".into(),
        (0..q.vertex_count())
            .map(|v| Value::from(q.vertex_name(v)))
            .collect::<Vec<_>>()
            .into(),
    );
    m.insert(
        "arrows".into(),
        (0..q.arrow_count())
            .map(|a| {
                json!({
                    "name": q.arrow_name(a),
                    "from": q.vertex_name(q.source(a)),
                    "to": q.vertex_name(q.target(a)),
                })
            })
            .collect::<Vec<_>>()
            .into(),
    );
    m.insert(
        "relations".into(),
        spec.algebra
            .relations
            .iter()
            .map(|r| Value::from(r.display(q)))
            .collect::<Vec<_>>()
            .into(),
    );
    m.insert("quadratic".into(), spec.algebra.quadratic.into());
    m.insert(
        "has_reduction_rules".into(),
        spec.reduction_rules.is_some().into(),
    );
    m.insert(
        "has_manual_resolution".into(),
        spec.resolution
            .as_ref()
            .map(|r| r.manual.is_some())
            .unwrap_or(false)
            .into(),
    );
    Ok(Value::Object(m))
}

fn cmd_diamond(cli: &Cli) -> Result<Value, Failure> {
    let spec = load_spec(cli)?;
    let caps = caps(cli);
    let q = &spec.algebra.quiver;
    let system = spec_reduction_system(&spec, &caps).map_err(|e| math(e.to_string()))?;
    let report = system
        .check_diamond(q, &caps)
        .map_err(|e| math(e.to_string()))?;
    let mut m = base_report(cli, "diamond");
    m.insert(
        "rules".into(),
        system
            .rules
            .iter()
            .map(|r| json!({"lhs": r.lhs.display(q), "rhs": r.rhs.display(q)}))
            .collect::<Vec<_>>()
            .into(),
    );
    m.insert(
        "overlaps".into(),
        system
            .overlaps(q)
            .overlaps
            .iter()
            .map(|o| Value::from(o.word.display(q)))
            .collect::<Vec<_>>()
            .into(),
    );
    m.insert("resolvable".into(), report.resolvable.into());
    m.insert(
        "failures".into(),
        report
            .failures
            .iter()
            .map(|f| {
                json!({
                    "overlap": f.overlap.word.display(q),
                    "reduce_left_first": f.reduce_left_first.display(q),
                    "reduce_right_first": f.reduce_right_first.display(q),
                })
            })
            .collect::<Vec<_>>()
            .into(),
    );
    let value = Value::Object(m);
    if !report.resolvable {
        return Err(math_with_report("diamond condition fails", value));
    }
    Ok(value)
}

fn cmd_basis(cli: &Cli) -> Result<Value, Failure> {
    let spec = load_spec(cli)?;
    let caps = caps(cli);
    let q = &spec.algebra.quiver;
    let system = spec_reduction_system(&spec, &caps).map_err(|e| math(e.to_string()))?;
    let basis = system.irr_basis(q, &caps).map_err(|e| math(e.to_string()))?;
    let mut m = base_report(cli, "basis");
    m.insert("dimension".into(), basis.dimension().into());
    m.insert(
        "paths".into(),
        basis
            .paths
            .iter()
            .map(|p| Value::from(p.display(q)))
            .collect::<Vec<_>>()
            .into(),
    );
    Ok(Value::Object(m))
}

fn scalar_str(s: &koszul::scalar::Scalar) -> Value {
    Value::from(s.to_string())
}

fn cmd_resolution(cli: &Cli) -> Result<Value, Failure> {
    let spec = load_spec(cli)?;
    let k = load_complex(cli, &spec)?;
    let q = k.quiver();
    let mut m = base_report(cli, "resolution");
    m.insert("max_degree".into(), k.max_degree().into());
    let mut gens = Vec::new();
    for n in 0..=k.max_degree() {
        let mut level = Vec::new();
        for g in &k.degrees[n].gens {
            let mut go = Map::new();
            go.insert("origin".into(), q.vertex_name(g.origin).into());
            go.insert("terminal".into(), q.vertex_name(g.terminal).into());
            if let Some(t) = &g.tensor {
                go.insert("tensor".into(), t.display(q).into());
            }
            level.push(Value::Object(go));
        }
        gens.push(Value::from(level));
    }
    m.insert("generators".into(), gens.into());
    let mut diffs = Vec::new();
    for n in 1..=k.max_degree() {
        for (i, d) in k.degrees[n].diff.iter().enumerate() {
            let terms: Vec<Value> = d
                .iter()
                .map(|((j, l, r), c)| {
                    json!({
                        "to": j,
                        "left": l.display(q),
                        "right": r.display(q),
                        "scalar": c.to_string(),
                    })
                })
                .collect();
            diffs.push(json!({"degree": n, "index": i, "terms": terms}));
        }
    }
    m.insert("differential".into(), diffs.into());
    let mut comult = Vec::new();
    for n in 0..=k.max_degree() {
        for (i, terms) in k.degrees[n].diag.iter().enumerate() {
            let rows: Vec<Value> = terms
                .iter()
                .map(|t| {
                    let mut o = Map::new();
                    o.insert("v".into(), t.v.into());
                    o.insert("p".into(), t.p.into());
                    o.insert("q".into(), t.q.into());
                    if t.left.len() > 0 {
                        o.insert("left".into(), t.left.display(q).into());
                    }
                    if t.mid.len() > 0 {
                        o.insert("mid".into(), t.mid.display(q).into());
                    }
                    if t.right.len() > 0 {
                        o.insert("right".into(), t.right.display(q).into());
                    }
                    o.insert("scalar".into(), scalar_str(&t.coeff));
                    Value::Object(o)
                })
                .collect();
            comult.push(json!({"degree": n, "index": i, "terms": rows}));
        }
    }
    m.insert("comultiplication".into(), comult.into());
    let report = verify_complex(&k);
    m.insert(
        "verify".into(),
        json!({
            "mandatory_pass": report.mandatory_pass,
            "coassociative": report.coassociative,
            "rows": report.rows.iter().map(|r| json!({
                "check": r.check,
                "degree": r.degree,
                "pass": r.pass,
            })).collect::<Vec<_>>(),
        }),
    );
    if !report.mandatory_pass {
        return Err(math_with_report(
            "resolution verification failed",
            Value::Object(m),
        ));
    }
    Ok(Value::Object(m))
}

fn cochain_json(k: &KComplex, c: &Cochain) -> Value {
    let q = k.quiver();
    json!({
        "degree": c.degree,
        "values": c.values.iter().map(|v| Value::from(v.display(q))).collect::<Vec<_>>(),
    })
}

fn cmd_hh(cli: &Cli, degree: usize) -> Result<Value, Failure> {
    let spec = load_spec(cli)?;
    let k = load_complex(cli, &spec)?;
    if degree + 1 > k.max_degree() {
        return Err(usage(format!(
            "degree {degree} needs the resolution through degree {}; raise --max-degree",
            degree + 1
        )));
    }
    let space = cochain_space(&k, degree).map_err(|e| math(e.to_string()))?;
    let ws = cohomology_basis(&k, degree).map_err(|e| math(e.to_string()))?;
    let mut m = base_report(cli, "hh");
    m.insert("degree".into(), degree.into());
    m.insert("cochain_dimension".into(), space.dimension().into());
    m.insert("kernel_dimension".into(), ws.dim_kernel.into());
    m.insert("image_dimension".into(), ws.dim_image.into());
    m.insert("dimension".into(), ws.dimension().into());
    m.insert(
        "representatives".into(),
        ws.representatives
            .iter()
            .map(|r| cochain_json(&k, r))
            .collect::<Vec<_>>()
            .into(),
    );
    Ok(Value::Object(m))
}

fn lifting_json(k: &KComplex, psi: &koszul::lifting::HomotopyLifting) -> Value {
    let q = k.quiver();
    let mut maps = Vec::new();
    for (m, level) in psi.maps.iter().enumerate() {
        for (r, e) in level.iter().enumerate() {
            if e.is_empty() {
                continue;
            }
            let terms: Vec<Value> = e
                .iter()
                .map(|((j, l, rr), c)| {
                    json!({
                        "target": j,
                        "left": l.display(q),
                        "right": rr.display(q),
                        "scalar": c.to_string(),
                    })
                })
                .collect();
            maps.push(json!({"degree": m, "generator": r, "terms": terms}));
        }
    }
    Value::from(maps)
}

fn cmd_lift(cli: &Cli, cocycle: &str) -> Result<Value, Failure> {
    let spec = load_spec(cli)?;
    let k = load_complex(cli, &spec)?;
    let eta = parse_cochain_file(cocycle, &k)?;
    let maxdeg = cli.max_degree.min(k.max_degree());
    let psi = solve_homotopy_lifting(&k, &eta, maxdeg).map_err(|e| math(e.to_string()))?;
    let verified = homotopy_holds(&verify_homotopy(&k, &eta, &psi, maxdeg));
    let mut m = base_report(cli, "lift");
    m.insert("cocycle".into(), cochain_json(&k, &eta));
    m.insert("through_degree".into(), maxdeg.into());
    m.insert("verified".into(), verified.into());
    m.insert("maps".into(), lifting_json(&k, &psi));
    if !verified {
        return Err(math("solved lifting failed re-verification"));
    }
    Ok(Value::Object(m))
}

fn cmd_bracket(cli: &Cli, left: &str, right: &str) -> Result<Value, Failure> {
    let spec = load_spec(cli)?;
    let k = load_complex(cli, &spec)?;
    let eta = parse_cochain_file(left, &k)?;
    let theta = parse_cochain_file(right, &k)?;
    let deg = eta.degree + theta.degree - 1;
    if deg + 1 > k.max_degree() {
        return Err(usage(format!(
            "bracket lives in degree {deg} and its reduction needs degree {}; raise --max-degree",
            deg + 1
        )));
    }
    let psi_eta =
        solve_homotopy_lifting(&k, &eta, deg).map_err(|e| math(e.to_string()))?;
    let psi_theta =
        solve_homotopy_lifting(&k, &theta, deg).map_err(|e| math(e.to_string()))?;
    let b = koszul::lifting::bracket(&k, &eta, &psi_eta, &theta, &psi_theta)
        .map_err(|e| math(e.to_string()))?;
    let mut m = base_report(cli, "bracket");
    m.insert("left".into(), cochain_json(&k, &eta));
    m.insert("right".into(), cochain_json(&k, &theta));
    m.insert("sign_positive".into(), b.sign_positive.into());
    m.insert("eta_psi_theta".into(), cochain_json(&k, &b.eta_psi_theta));
    m.insert("theta_psi_eta".into(), cochain_json(&k, &b.theta_psi_eta));
    m.insert("raw".into(), cochain_json(&k, &b.raw));
    m.insert(
        "reduced".into(),
        match &b.reduced {
            Some(c) => cochain_json(&k, c),
            None => Value::Null,
        },
    );
    Ok(Value::Object(m))
}

fn cmd_mc(cli: &Cli, cocycle: &str) -> Result<Value, Failure> {
    let spec = load_spec(cli)?;
    let k = load_complex(cli, &spec)?;
    let eta = parse_cochain_file(cocycle, &k)?;
    let psi = solve_homotopy_lifting(&k, &eta, 3).map_err(|e| math(e.to_string()))?;
    let cert = maurer_cartan_check(&k, &eta, &psi).map_err(|e| math(e.to_string()))?;
    let q = k.quiver();
    let mut m = base_report(cli, "mc-check");
    m.insert("cocycle".into(), cochain_json(&k, &eta));
    m.insert("holds".into(), cert.holds.into());
    m.insert(
        "evaluations".into(),
        cert.evaluations
            .iter()
            .map(|v| Value::from(v.display(q)))
            .collect::<Vec<_>>()
            .into(),
    );
    m.insert("lifting".into(), lifting_json(&k, &psi));
    let value = Value::Object(m);
    if !cert.holds {
        return Err(math_with_report(
            "the cocycle is not a Maurer-Cartan element",
            value,
        ));
    }
    Ok(value)
}

fn param_name(q: &Quiver, rules: &[koszul::reduction::ReductionRule], info: &koszul::deform::ParamInfo) -> String {
    format!(
        "phi[{}][{}]",
        rules[info.rule].lhs.display(q),
        info.path.display(q)
    )
}

fn cmd_deform(cli: &Cli, crosscheck: bool) -> Result<Value, Failure> {
    let spec = load_spec(cli)?;
    let caps = caps(cli);
    let field = spec.algebra.field;
    let q = spec.algebra.quiver.clone();
    let system = spec_reduction_system(&spec, &caps).map_err(|e| math(e.to_string()))?;
    let diamond = system.check_diamond(&q, &caps).map_err(|e| math(e.to_string()))?;
    if !diamond.resolvable {
        return Err(math("the reduction system fails the diamond condition"));
    }
    let basis = system.irr_basis(&q, &caps).map_err(|e| math(e.to_string()))?;
    let family = solve_mc_first_order(&q, &system, &basis, field, &caps)
        .map_err(|e| math(e.to_string()))?;
    let reduced = gauge_reduce(&q, &system, &basis, &family, field, &caps)
        .map_err(|e| math(e.to_string()))?;

    let name = |id: usize| param_name(&q, &system.rules, &family.deformation.params[id]);
    let expr_json = |e: &koszul::deform::LinExpr| -> Value {
        let mut o = Map::new();
        for (id, c) in &e.terms {
            o.insert(name(*id), c.to_string().into());
        }
        Value::Object(o)
    };

    let mut m = base_report(cli, "deform");
    m.insert(
        "parameters".into(),
        family
            .deformation
            .params
            .iter()
            .enumerate()
            .map(|(id, _)| Value::from(name(id)))
            .collect::<Vec<_>>()
            .into(),
    );
    m.insert(
        "constraints".into(),
        family
            .constraints
            .rows
            .iter()
            .map(|r| {
                json!({
                    "overlap": r.overlap.display(&q),
                    "coordinate": r.path.display(&q),
                    "expression": expr_json(&r.expr),
                })
            })
            .collect::<Vec<_>>()
            .into(),
    );
    m.insert(
        "free_parameters".into(),
        family
            .constraints
            .free
            .iter()
            .map(|id| Value::from(name(*id)))
            .collect::<Vec<_>>()
            .into(),
    );
    let mut fam = Vec::new();
    for (ri, row) in family.entries.iter().enumerate() {
        let entries: Vec<Value> = row
            .iter()
            .filter(|(_, e)| !e.is_zero())
            .map(|(p, e)| json!({"path": p.display(&q), "expression": expr_json(e)}))
            .collect();
        fam.push(json!({
            "rule": system.rules[ri].lhs.display(&q),
            "entries": entries,
        }));
    }
    m.insert("family".into(), fam.into());

    let gauge_name = |gid: usize| {
        let (a, p) = &reduced.gauge_params[gid];
        format!("theta[{}][{}]", q.arrow_name(*a), p.display(&q))
    };
    let shift_rows: Vec<Value> = reduced
        .shift_table
        .iter()
        .map(|row| {
            let mut o = Map::new();
            for (gid, c) in &row.shift.terms {
                o.insert(gauge_name(*gid), c.to_string().into());
            }
            json!({
                "rule": system.rules[row.rule].lhs.display(&q),
                "path": row.path.display(&q),
                "shift": Value::Object(o),
            })
        })
        .collect();
    m.insert(
        "gauge".into(),
        json!({
            "shift_table": shift_rows,
            "admissible_dimension": reduced.admissible_dim,
            "eliminated": reduced.eliminated.iter().map(|id| Value::from(name(*id))).collect::<Vec<_>>(),
            "surviving": reduced.surviving.iter().map(|id| Value::from(name(*id))).collect::<Vec<_>>(),
            "reduced_dimension": reduced.surviving.len(),
        }),
    );

    if crosscheck {
        let k = load_complex(cli, &spec)?;
        let rows = koszul::deform::crosscheck_mc(&k, &family, &reduced)
            .map_err(|e| math(e.to_string()))?;
        let all = rows.iter().all(|r| r.mc_holds);
        m.insert(
            "crosscheck".into(),
            json!({
                "all_pass": all,
                "rows": rows.iter().map(|r| {
                    let mut o = Map::new();
                    o.insert("direction".into(), param_name(&q, &system.rules, &r.param).into());
                    o.insert("cochain".into(), cochain_json(&k, &r.cochain));
                    o.insert("reduced".into(), cochain_json(&k, &r.reduced));
                    o.insert("mc".into(), r.mc_holds.into());
                    if let Some(note) = &r.note {
                        o.insert("note".into(), note.as_str().into());
                    }
                    Value::Object(o)
                }).collect::<Vec<_>>(),
            }),
        );
        if !all {
            return Err(math_with_report(
                "cross-check failed on a reduced direction",
                Value::Object(m),
            ));
        }
    }
    Ok(Value::Object(m))
}

fn print_text(v: &Value, indent: usize) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(m) => {
            for (k, val) in m {
                match val {
                    Value::Object(_) | Value::Array(_) => {
                        println!("{pad}{k}:");
                        print_text(val, indent + 1);
                    }
                    _ => println!("{pad}{k}: {}", plain(val)),
                }
            }
        }
        Value::Array(items) => {
            for item in items {
                match item {
                    Value::Object(_) | Value::Array(_) => {
                        println!("{pad}-");
                        print_text(item, indent + 1);
                    }
                    _ => println!("{pad}- {}", plain(item)),
                }
            }
        }
        _ => println!("{pad}{}", plain(v)),
    }
}

fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

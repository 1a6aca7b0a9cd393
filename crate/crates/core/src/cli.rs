//! Command-line front end. Every command prints one JSON document (or DOT)
//! on stdout; exit code 0 on success, 2 on invalid input, 3 when the
//! order engine cannot decide.

use std::io::Read;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::cohomology::two_adic_exponent;
use crate::fibering::{
    abelianization, brown_fibered, epimorphisms_to_z, fibered_lift_obstruction, integral_lift_exists, parse_word,
    BrownVerdict, Presentation, ZMap,
};
use crate::groupring::{
    coefficients_complex, standard_resolution, CoefficientModule, CyclicHom, GroupRingElement, GroupRingMatrix,
};
use crate::intalg::FgAbelianGroup;
use crate::james::{realizable_classes, sq2w_matrix, GroupFamily, Realizability, W2};
use crate::order::{
    combined_cyclic_family, emit_dot, leq, nonorientable_cyclic_family, order_graph, orientable_cyclic_family,
    z4_family, Answer, ImmersionType, OrderGraph,
};
use crate::postnikov::{chain_map_exists, model_cohomology, model_complex_x, verify_chain_map, ShiftMap};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_UNDETERMINED: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "immorder", version, about = "Immersion order of punctured 4-manifolds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Twist {
    #[value(name = "0")]
    Trivial,
    #[value(name = "w")]
    Sign,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum HomologyCoeff {
    #[value(name = "Z")]
    Z,
    #[value(name = "Z2")]
    Z2,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModelCoeff {
    #[value(name = "Z")]
    Z,
    #[value(name = "Z2")]
    Z2,
    #[value(name = "ZZ2w")]
    ZZ2w,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Family {
    Cyclic,
    Nonorientable,
    Z4,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Dot,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Group homology H_k(π; A).
    Homology {
        #[arg(long)]
        group: String,
        #[arg(long, value_enum, default_value = "0")]
        twist: Twist,
        #[arg(long, value_enum, default_value = "Z")]
        coeff: HomologyCoeff,
        #[arg(long)]
        degree: usize,
    },
    /// Matrix of Sq^2 + w2 ∪ (or its w1-twisted form) on H^degree(π; Z/2).
    Sq2w {
        #[arg(long)]
        group: String,
        #[arg(long)]
        w1: u8,
        #[arg(long)]
        w2: String,
        #[arg(long, default_value_t = 2)]
        degree: u32,
    },
    /// Realizable images of the fundamental class.
    Realizable {
        #[arg(long)]
        group: String,
        #[arg(long)]
        w1: u8,
        #[arg(long)]
        w2: String,
    },
    /// Decides A <= B for two immersion types given as JSON files (`-` for stdin).
    Leq { a: String, b: String },
    /// Hasse diagram of a family of immersion types.
    OrderGraph {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long, default_value_t = 2)]
        max_exp: u32,
        #[arg(long, default_value_t = 6)]
        max_c: i64,
        #[arg(long)]
        combined: bool,
        #[arg(long, value_enum, default_value = "dot")]
        format: Format,
    },
    /// H^degree(Hom(X, A)) for the model complex over Z[Z/2^k].
    ModelCohomology {
        #[arg(long)]
        k: u32,
        #[arg(long, value_enum)]
        coeff: ModelCoeff,
        #[arg(long, default_value_t = 2)]
        degree: usize,
    },
    /// Shift homomorphism H_4(Z/n; Z^w) -> H_1(Z/n; (ker d_2)^w) on generators.
    Shift {
        #[arg(long)]
        group: String,
        #[arg(long, value_enum, default_value = "w")]
        w: Twist,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Brown's criterion for a one-relator group.
    Fibered {
        #[arg(long)]
        relator: String,
        #[arg(long)]
        phi: String,
    },
    /// Abelianization and maps to Z of a presentation <a,b|...>.
    Abelianization {
        #[arg(long)]
        presentation: String,
    },
    /// Whether w1 admits an integral lift.
    IntegralLift {
        #[arg(long)]
        presentation: String,
        #[arg(long)]
        w1: String,
    },
    /// Chain map X(source) -> X(target) over the projection Z/source -> Z/target.
    ChainVerify {
        #[arg(long)]
        source: usize,
        #[arg(long)]
        target: usize,
    },
}

/// Exit code and stdout of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
}

struct Failure {
    code: i32,
    body: Value,
}

fn invalid(kind: &str, message: impl ToString) -> Failure {
    Failure { code: EXIT_INVALID, body: json!({ "error": { "kind": kind, "message": message.to_string() } }) }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

/// Runs with the process stdin available for `-` arguments.
pub fn run<I, S>(args: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    run_with_input(args, &mut std::io::stdin())
}

pub fn run_with_input<I, S>(args: I, stdin: &mut dyn Read) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome { code: EXIT_OK, stdout: e.to_string() },
                _ => Outcome { code: EXIT_INVALID, stdout: pretty(&invalid("usage", e.to_string().trim()).body) },
            };
        }
    };
    match dispatch(cli.command, stdin) {
        Ok(Output::Json(v)) => Outcome { code: EXIT_OK, stdout: pretty(&v) },
        Ok(Output::Text(s)) => Outcome { code: EXIT_OK, stdout: s },
        Err(f) => Outcome { code: f.code, stdout: pretty(&f.body) },
    }
}

enum Output {
    Json(Value),
    Text(String),
}

fn group_json(g: &FgAbelianGroup) -> Value {
    serde_json::to_value(g).expect("groups serialize")
}

fn parse_group(s: &str) -> Result<GroupFamily, Failure> {
    let t = s.trim();
    match t {
        "1" | "trivial" => return Ok(GroupFamily::Trivial),
        "Z" => return Ok(GroupFamily::InfiniteCyclic),
        "Z4" | "Z^4" => return Ok(GroupFamily::FreeAbelian4),
        _ => {}
    }
    let n = t
        .strip_prefix("Z/")
        .and_then(|n| n.parse::<usize>().ok())
        .ok_or_else(|| invalid("group", format!("expected 1, Z, Z4 or Z/n, got {s:?}")))?;
    if n < 2 {
        return Err(invalid("group", "cyclic groups need order >= 2"));
    }
    Ok(GroupFamily::Cyclic(n))
}

fn parse_bit(name: &str, v: u8) -> Result<bool, Failure> {
    match v {
        0 => Ok(false),
        1 => Ok(true),
        _ => Err(invalid("argument", format!("{name} must be 0 or 1"))),
    }
}

fn parse_w2(s: &str) -> Result<W2, Failure> {
    W2::parse(s).ok_or_else(|| invalid("argument", format!("w2 must be one of 0, 1, inf, e12, e12+e34, got {s:?}")))
}

/// `a=X,b=Y` in either order.
fn parse_assignment(s: &str) -> Result<[i64; 2], Failure> {
    let mut out = [None, None];
    for part in s.split(',') {
        let (k, v) = part.split_once('=').ok_or_else(|| invalid("argument", format!("expected a=..,b=.., got {s:?}")))?;
        let slot = match k.trim() {
            "a" => 0,
            "b" => 1,
            other => return Err(invalid("argument", format!("unknown generator {other:?}"))),
        };
        let value = v.trim().parse::<i64>().map_err(|e| invalid("argument", format!("{v:?}: {e}")))?;
        if out[slot].replace(value).is_some() {
            return Err(invalid("argument", format!("generator {} given twice", k.trim())));
        }
    }
    match out {
        [Some(a), Some(b)] => Ok([a, b]),
        _ => Err(invalid("argument", "both a and b must be assigned")),
    }
}

fn read_type(arg: &str, stdin: &mut dyn Read, stdin_used: &mut bool) -> Result<ImmersionType, Failure> {
    let text = if arg == "-" {
        if std::mem::replace(stdin_used, true) {
            return Err(invalid("input", "stdin can only be read once"));
        }
        let mut s = String::new();
        stdin.read_to_string(&mut s).map_err(|e| invalid("io", e))?;
        s
    } else if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).map_err(|e| invalid("io", format!("{arg}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| invalid("immersion_type", e))
}

fn dispatch(command: Command, stdin: &mut dyn Read) -> Result<Output, Failure> {
    match command {
        Command::Homology { group, twist, coeff, degree } => homology(&group, twist, coeff, degree),
        Command::Sq2w { group, w1, w2, degree } => {
            let (g, w1, w2) = (parse_group(&group)?, parse_bit("w1", w1)?, parse_w2(&w2)?);
            let m = sq2w_matrix(g, w1, w2, degree).map_err(|e| invalid("normal_type", e))?;
            let rows: Vec<Vec<u8>> = (0..m.rows()).map(|i| (0..m.cols()).map(|j| u8::from(m.get(i, j))).collect()).collect();
            Ok(Output::Json(json!({
                "group": group, "w1": u8::from(w1), "w2": w2.token(), "degree": degree,
                "rows": m.rows(), "cols": m.cols(), "rank": m.rank(), "matrix": rows,
            })))
        }
        Command::Realizable { group, w1, w2 } => {
            let (g, w1, w2) = (parse_group(&group)?, parse_bit("w1", w1)?, parse_w2(&w2)?);
            let set = realizable_classes(g, w1, w2).map_err(|e| invalid("normal_type", e))?;
            let status = match set.status {
                Realizability::Determined(_) => "Determined",
                Realizability::UpperBound(_) => "UpperBound",
            };
            Ok(Output::Json(json!({
                "group": group, "w1": u8::from(w1), "w2": w2.token(),
                "ambient": group_json(&set.ambient), "status": status,
                "subgroup": set.subgroup().to_string(), "reason": set.reason,
            })))
        }
        Command::Leq { a, b } => {
            let mut used = false;
            let ta = read_type(&a, stdin, &mut used)?;
            let tb = read_type(&b, stdin, &mut used)?;
            let v = leq(&ta, &tb);
            let trace: Vec<String> = v.trace.iter().map(|r| r.id()).collect();
            let statements: Vec<&str> = v.trace.iter().map(|r| r.statement()).collect();
            let mut body = json!({
                "a": ta, "b": tb, "a_class": ta.label(), "b_class": tb.label(),
                "trace": trace, "statements": statements,
            });
            match v.answer {
                Answer::True | Answer::False => {
                    body["answer"] = json!(v.answer == Answer::True);
                    Ok(Output::Json(body))
                }
                Answer::Undetermined(reason) => {
                    body["answer"] = Value::Null;
                    body["reason"] = json!(reason);
                    Err(Failure { code: EXIT_UNDETERMINED, body })
                }
            }
        }
        Command::OrderGraph { family, max_exp, max_c, combined, format } => {
            if max_exp == 0 || max_exp > 12 {
                return Err(invalid("argument", "--max-exp must be between 1 and 12"));
            }
            if !(0..=64).contains(&max_c) {
                return Err(invalid("argument", "--max-c must be between 0 and 64"));
            }
            let types = match (family, combined) {
                (Family::Cyclic, true) => combined_cyclic_family(max_exp),
                (Family::Cyclic, false) => orientable_cyclic_family(max_exp),
                (Family::Nonorientable, _) => nonorientable_cyclic_family(max_exp),
                (Family::Z4, _) => z4_family(max_c),
            };
            let graph = order_graph(&types).map_err(|e| Failure {
                code: EXIT_UNDETERMINED,
                body: json!({ "error": { "kind": "order_graph", "message": e.to_string() } }),
            })?;
            Ok(match format {
                Format::Dot => Output::Text(emit_dot(&graph)),
                Format::Json => Output::Json(graph_json(&graph)),
            })
        }
        Command::ModelCohomology { k, coeff, degree } => {
            if k == 0 || k > 12 {
                return Err(invalid("argument", "--k must be between 1 and 12"));
            }
            if degree > 3 {
                return Err(invalid("argument", "the model complex lives in degrees 0..3"));
            }
            let (module, name) = match coeff {
                ModelCoeff::Z => (CoefficientModule::Integers, "Z"),
                ModelCoeff::Z2 => (CoefficientModule::Mod2, "Z2"),
                ModelCoeff::ZZ2w => (CoefficientModule::TwistedGroupRingZ2, "ZZ2w"),
            };
            let g = model_cohomology(k, module, degree).map_err(|e| invalid("coefficients", e))?;
            Ok(Output::Json(json!({ "k": k, "coeff": name, "degree": degree, "group": group_json(&g) })))
        }
        Command::Shift { group, w, seed } => {
            let GroupFamily::Cyclic(n) = parse_group(&group)? else {
                return Err(invalid("group", "shift needs a cyclic group Z/n"));
            };
            if n > 64 {
                return Err(invalid("group", "shift supports orders up to 64"));
            }
            let twisted = matches!(w, Twist::Sign);
            let map = ShiftMap::new(n, twisted).map_err(|e| invalid("twist", e))?;
            let count = map.domain().generator_count();
            let mut images = Vec::new();
            for i in 0..count {
                let input: Vec<BigInt> = (0..count).map(|j| BigInt::from(u8::from(i == j))).collect();
                let out = match seed {
                    Some(s) => map.apply_with_seed(&input, s),
                    None => map.apply(&input),
                }
                .map_err(|e| invalid("shift", e))?;
                images.push(json!({ "input": input.iter().map(ToString::to_string).collect::<Vec<_>>(),
                                    "value": out.value.iter().map(ToString::to_string).collect::<Vec<_>>() }));
            }
            Ok(Output::Json(json!({
                "group": group, "w": u8::from(twisted),
                "domain": group_json(map.domain()), "codomain": group_json(map.codomain()), "images": images,
            })))
        }
        Command::Fibered { relator, phi } => {
            let word = parse_word(&relator).map_err(|e| invalid("word", e))?;
            let [a, b] = parse_assignment(&phi)?;
            let verdict = brown_fibered(&word, ZMap { a, b }).map_err(|e| invalid("precondition", e))?;
            Ok(Output::Json(match verdict {
                BrownVerdict::FiberedKernelFg { min_index, min, max_index, max, values } => json!({
                    "relator": word.to_string(), "phi": { "a": a, "b": b }, "fibered": true,
                    "min_index": min_index, "min": min, "max_index": max_index, "max": max, "values": values,
                }),
                BrownVerdict::NotFg { reason, values } => json!({
                    "relator": word.to_string(), "phi": { "a": a, "b": b }, "fibered": false,
                    "reason": reason, "values": values,
                }),
            }))
        }
        Command::Abelianization { presentation } => {
            let p = Presentation::parse(&presentation).map_err(|e| invalid("presentation", e))?;
            let g = abelianization(&p).map_err(|e| invalid("presentation", e))?;
            let epis = epimorphisms_to_z(&p).map_err(|e| invalid("presentation", e))?;
            Ok(Output::Json(json!({
                "presentation": p.to_string(), "abelianization": group_json(&g),
                "epimorphisms": epis.maps, "multiple": epis.multiple,
            })))
        }
        Command::IntegralLift { presentation, w1 } => {
            let p = Presentation::parse(&presentation).map_err(|e| invalid("presentation", e))?;
            let [a, b] = parse_assignment(&w1)?;
            if !(0..=1).contains(&a) || !(0..=1).contains(&b) {
                return Err(invalid("argument", "w1 values must be bits"));
            }
            let w = [a == 1, b == 1];
            let lift = integral_lift_exists(&p, w).map_err(|e| invalid("character", e))?;
            let obstruction = if p.relators().len() == 1 {
                json!(fibered_lift_obstruction(&p, w).map_err(|e| invalid("character", e))?)
            } else {
                Value::Null
            };
            Ok(Output::Json(json!({
                "presentation": p.to_string(), "w1": { "a": a, "b": b },
                "lift_exists": lift, "fibered_obstruction": obstruction,
            })))
        }
        Command::ChainVerify { source, target } => chain_verify(source, target),
    }
}

fn homology(group: &str, twist: Twist, coeff: HomologyCoeff, degree: usize) -> Result<Output, Failure> {
    let g = parse_group(group)?;
    let twisted = matches!(twist, Twist::Sign);
    let result = match g {
        GroupFamily::Cyclic(n) => {
            if degree > 64 {
                return Err(invalid("argument", "--degree must be at most 64"));
            }
            let module = match (coeff, twisted) {
                (HomologyCoeff::Z, false) => CoefficientModule::Integers,
                (HomologyCoeff::Z, true) => CoefficientModule::TwistedIntegers,
                (HomologyCoeff::Z2, _) => CoefficientModule::Mod2,
            };
            let res = standard_resolution(n, degree + 1).map_err(|e| invalid("group", e))?;
            let cx = coefficients_complex(&res, module).map_err(|e| invalid("twist", e))?;
            cx.homology.homology(degree).map_err(|e| invalid("homology", e))?
        }
        GroupFamily::FreeAbelian4 | GroupFamily::Trivial | GroupFamily::InfiniteCyclic => {
            if twisted && g != GroupFamily::InfiniteCyclic {
                return Err(invalid("twist", "a nontrivial twist needs a group with a sign character here"));
            }
            let rank = torus_betti(g, twisted, degree);
            match coeff {
                HomologyCoeff::Z => FgAbelianGroup::new(rank.0, rank.1.iter().map(|&t| BigInt::from(t)).collect())
                    .expect("valid"),
                HomologyCoeff::Z2 => FgAbelianGroup::from_cyclic_factors(&vec![BigInt::from(2); rank.2]),
            }
        }
    };
    Ok(Output::Json(json!({
        "group": group, "twist": if twisted { "w" } else { "0" },
        "coeff": match coeff { HomologyCoeff::Z => "Z", HomologyCoeff::Z2 => "Z2" },
        "degree": degree, "homology": group_json(&result),
    })))
}

/// `(free rank, torsion, mod-2 dimension)` of `H_k` for `1`, `Z`, `Z^4`.
fn torus_betti(g: GroupFamily, twisted: bool, k: usize) -> (usize, Vec<u64>, usize) {
    let binom = |n: usize, k: usize| -> usize {
        if k > n {
            0
        } else {
            (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
        }
    };
    match (g, twisted) {
        (GroupFamily::Trivial, _) => {
            let r = usize::from(k == 0);
            (r, vec![], r)
        }
        (GroupFamily::InfiniteCyclic, false) => {
            let r = usize::from(k <= 1);
            (r, vec![], r)
        }
        // H_0(Z; Z^w) = Z/2, higher groups vanish
        (GroupFamily::InfiniteCyclic, true) => match k {
            0 => (0, vec![2], 1),
            1 => (0, vec![], 1),
            _ => (0, vec![], 0),
        },
        _ => {
            let r = binom(4, k);
            (r, vec![], r)
        }
    }
}

fn graph_json(graph: &OrderGraph) -> Value {
    let nodes: Vec<Value> = graph
        .nodes
        .iter()
        .map(|t| json!({ "id": t.dot_id(), "label": t.label(), "type": t }))
        .collect();
    let edges: Vec<Value> = graph
        .edges
        .iter()
        .map(|&(i, j)| json!({ "from": graph.nodes[i].dot_id(), "to": graph.nodes[j].dot_id() }))
        .collect();
    json!({ "nodes": nodes, "edges": edges })
}

fn chain_verify(source: usize, target: usize) -> Result<Output, Failure> {
    if target == 0 || !target.is_multiple_of(2) || !source.is_multiple_of(target) || (source / target).is_multiple_of(2) {
        return Err(invalid("argument", "need an even target order k and a source order k·m with m odd"));
    }
    if source > 128 {
        return Err(invalid("argument", "source order must be at most 128"));
    }
    let m = source / target;
    let c = model_complex_x(source / 2).map_err(|e| invalid("argument", e))?;
    let d = model_complex_x(target / 2).map_err(|e| invalid("argument", e))?;
    let phi = CyclicHom::projection(source, target).map_err(|e| invalid("argument", e))?;
    let scalar = |x: i64| GroupRingMatrix::scalar(GroupRingElement::monomial(target, 0, BigInt::from(x)));
    let h1 = scalar(1);
    let witness = chain_map_exists(&c, &d, &phi, &h1).map_err(|e| invalid("argument", e))?;
    let mi = m as i64;
    let paper = [scalar(1), scalar(1), scalar(mi), scalar(mi * mi)];
    let commutes = verify_chain_map(&c, &d, &phi, &paper).map_err(|e| invalid("argument", e))?;
    Ok(Output::Json(json!({
        "source": source, "target": target, "m": m,
        "two_adic_exponent": two_adic_exponent(target),
        "witness_found": witness.is_some(),
        "h2": witness.as_ref().map(|w| w.h2.get(0, 0).to_string()),
        "h3": witness.as_ref().and_then(|w| w.h3.as_ref()).map(|h| h.get(0, 0).to_string()),
        "candidate": ["p", "p", format!("{m}p"), format!("{}p", m * m)],
        "candidate_commutes": commutes,
    })))
}

use std::error::Error as StdError;
use std::sync::Arc;

use clap::{Args, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde_json::{json, Value};

use ultrametric::audit::{build_radic_isometry, doubling_measure, doubling_metric, Verdict};
use ultrametric::cantor::{
    dimension_estimate, hausdorff_content, hausdorff_measure, snowflake_dimension, Cylinder, Gauge, ProductMeasure,
    ProductSpec, Threshold,
};
use ultrametric::characters::{character_table, gram_exact_is_identity, gram_float_error, DEFAULT_TABLE_CAP};
use ultrametric::harmonic::{
    distribution_identity, lp_maximal_bound, martingale_maximal, maximal_function, weak_type_audit_tree,
    Filtration, FiniteUltraTree,
};
use ultrametric::hensel::{contraction_solve, hensel_v1, hensel_v2, solve, ZpPoly};
use ultrametric::padic::{abs_p, geometric_sum, PAdicInt, PAdicScalar};
use ultrametric::radic::{embed_q, level, preceq, project, RadicInt, Radix};
use ultrametric::rational::{fmt_rational, parse_rational};
use ultrametric::{Error, Exec, Prime};

use crate::Common;

type CmdResult = Result<Outcome, Box<dyn StdError>>;

pub struct Outcome {
    pub report: Value,
    pub refuted: bool,
}

impl Outcome {
    fn ok(report: Value) -> Self {
        Outcome { report, refuted: false }
    }

    fn verdict(report: Value, holds: bool) -> Self {
        Outcome { report, refuted: !holds }
    }
}

fn exec(common: &Common) -> Exec {
    if common.sequential {
        Exec::Sequential
    } else {
        Exec::Parallel
    }
}

/// Inline JSON, or `@path` to read it from a file.
fn read_json(arg: &str) -> Result<Value, Box<dyn StdError>> {
    let text = match arg.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))?,
        None => arg.to_string(),
    };
    Ok(serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?)
}

fn rationals(list: &str) -> Result<Vec<BigRational>, Error> {
    list.split(',').filter(|s| !s.trim().is_empty()).map(parse_rational).collect()
}

fn u64_list(list: &str) -> Result<Vec<u64>, Error> {
    list.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.trim().parse().map_err(|_| Error::Parse(format!("{s:?} is not a nonnegative integer"))))
        .collect()
}

fn strings(v: &[BigRational]) -> Vec<String> {
    v.iter().map(fmt_rational).collect()
}

#[derive(Args, Debug)]
pub struct HenselArgs {
    #[arg(long)]
    prime: u64,
    /// Coefficients, constant term first, e.g. "-17,0,1".
    #[arg(long, allow_hyphen_values = true)]
    coeffs: String,
    #[arg(long, allow_hyphen_values = true)]
    x0: String,
    /// Target precision N.
    #[arg(long)]
    prec: u32,
    #[arg(long, value_enum, default_value_t = Method::Auto)]
    method: Method,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum Method {
    Auto,
    V1,
    V2,
    Contraction,
}

pub fn hensel(a: &HenselArgs, _: &Common) -> CmdResult {
    let p = Prime::new(a.prime)?;
    let f = ZpPoly::parse(p, &a.coeffs)?;
    let x0 = PAdicInt::parse(&a.x0, p, a.prec.max(1))?;
    if let Method::Contraction = a.method {
        let r = contraction_solve(&f, &x0, a.prec)?;
        return Ok(Outcome::ok(json!({
            "command": "hensel",
            "method": "contraction",
            "root": r.root.to_string(),
            "fixed_point": r.fixed_point.to_string(),
            "k": r.k,
            "iterations": r.iterations,
            "contraction_verified": r.contraction_verified,
        })));
    }
    let (name, r) = match a.method {
        Method::V1 => ("v1", hensel_v1(&f, &x0, a.prec)?),
        Method::V2 => ("v2", hensel_v2(&f, &x0, a.prec)?),
        _ => ("auto", solve(&f, &x0, a.prec)?),
    };
    Ok(Outcome::ok(json!({
        "command": "hensel",
        "method": name,
        "root": r.root.to_string(),
        "k": r.k,
        "steps": r.trace.steps(),
        "working_precision": r.trace.working_precision,
        "iterates": r.trace.iterates.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
        "residuals": r.trace.residuals.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
        "quadratic_decay": r.trace.quadratic_decay_holds(),
    })))
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false, id = "op")]
pub struct PadicOps {
    /// |x|_p of a rational.
    #[arg(long, allow_hyphen_values = true)]
    abs: Option<String>,
    #[arg(long, num_args = 2, allow_hyphen_values = true, value_names = ["X", "Y"])]
    add: Option<Vec<String>>,
    #[arg(long, num_args = 2, allow_hyphen_values = true, value_names = ["X", "Y"])]
    mul: Option<Vec<String>>,
    #[arg(long, num_args = 2, allow_hyphen_values = true, value_names = ["X", "Y"])]
    div: Option<Vec<String>>,
    /// Σ y^j for |y|_p < 1.
    #[arg(long, allow_hyphen_values = true)]
    series: Option<String>,
}

#[derive(Args, Debug)]
pub struct PadicArgs {
    #[arg(long)]
    prime: u64,
    /// Relative precision for arithmetic and series.
    #[arg(long, default_value_t = 10)]
    prec: u32,
    #[command(flatten)]
    op: PadicOps,
}

fn scalar_json(x: &PAdicScalar) -> Value {
    json!({
        "value": fmt_rational(&x.to_rational()),
        "digits": format!("{x:?}"),
        "abs": x.abs().to_string(),
        "abs_precision": x.abs_precision(),
    })
}

pub fn padic(a: &PadicArgs, _: &Common) -> CmdResult {
    let p = Prime::new(a.prime)?;
    let scalar = |s: &str| -> Result<PAdicScalar, Error> { Ok(PAdicScalar::from_rational(&parse_rational(s)?, p, a.prec)) };
    let op = &a.op;
    if let Some(x) = &op.abs {
        let x = parse_rational(x)?;
        return Ok(Outcome::ok(json!({ "command": "padic", "abs": abs_p(&x, p).to_string() })));
    }
    if let Some(y) = &op.series {
        let s = geometric_sum(&scalar(y)?, a.prec)?;
        return Ok(Outcome::ok(json!({ "command": "padic", "series": scalar_json(&s) })));
    }
    let (name, pair) = [("add", &op.add), ("mul", &op.mul), ("div", &op.div)]
        .into_iter()
        .find_map(|(n, v)| v.as_ref().map(|v| (n, v)))
        .expect("clap enforces one operation");
    let (x, y) = (scalar(&pair[0])?, scalar(&pair[1])?);
    let r = match name {
        "add" => x.checked_add(&y)?,
        "mul" => x.checked_mul(&y)?,
        _ => x.checked_div(&y)?,
    };
    Ok(Outcome::ok(json!({ "command": "padic", name: scalar_json(&r) })))
}

#[derive(Args, Debug)]
pub struct RadicArgs {
    /// Radices r_1,…,r_L.
    #[arg(long)]
    radix: String,
    /// Embed an integer as its coherent residue sequence.
    #[arg(long, allow_hyphen_values = true, group = "radic_op")]
    embed: Option<i128>,
    /// Decide whether this radix is dominated by another one (comma list).
    #[arg(long, group = "radic_op")]
    preceq: Option<String>,
    /// Project the residue `x mod R_L` onto a coarser radix (see --onto).
    #[arg(long, group = "radic_op", requires = "onto")]
    project: Option<u64>,
    #[arg(long)]
    onto: Option<String>,
    /// Levels of the other radix to search.
    #[arg(long, default_value_t = 64)]
    search_depth: usize,
}

pub fn radic(a: &RadicArgs, _: &Common) -> CmdResult {
    let radix = Radix::new(u64_list(&a.radix)?)?;
    if let Some(x) = a.embed {
        return Ok(Outcome::ok(json!({
            "command": "radic",
            "radix": radix.id(),
            "embed": embed_q(x, &radix),
            "level": level(x, &radix).to_string(),
        })));
    }
    if let Some(other) = &a.preceq {
        let other = Radix::new(u64_list(other)?)?;
        return Ok(match preceq(&radix, &other, a.search_depth) {
            Ok(w) => Outcome::ok(json!({ "command": "radic", "preceq": true, "witnesses": w })),
            Err(e @ (Error::NotComparableRefuted { .. } | Error::NotComparableExhausted { .. })) => {
                Outcome::verdict(json!({ "command": "radic", "preceq": false, "witness": e.to_string() }), false)
            }
            Err(e) => return Err(e.into()),
        });
    }
    if let (Some(x), Some(onto)) = (a.project, &a.onto) {
        let coarse = Arc::new(Radix::new(u64_list(onto)?)?);
        let x2 = RadicInt::new(Arc::new(radix), x)?;
        return Ok(match project(&x2, coarse) {
            Ok(y) => Outcome::ok(json!({ "command": "radic", "project": y.sequence(), "residue": y.residue() })),
            Err(e @ (Error::NotComparableRefuted { .. } | Error::NotComparableExhausted { .. })) => {
                Outcome::verdict(json!({ "command": "radic", "project": null, "witness": e.to_string() }), false)
            }
            Err(e) => return Err(e.into()),
        });
    }
    Err("one of --embed, --preceq, --project is required".into())
}

#[derive(Args, Debug)]
pub struct HausdorffArgs {
    /// Product spec as JSON or @file: {"factors": [...], "scales": ...}.
    #[arg(long)]
    spec: String,
    /// Target cylinders, words separated by ';' and digits by '.'; empty
    /// means the whole set.
    #[arg(long, default_value = "")]
    target: String,
    /// Gauge exponent α in h(t) = t^α.
    #[arg(long)]
    alpha: Option<String>,
    /// Gauge values h(t_0),…,h(t_L) instead of a power.
    #[arg(long)]
    gauge_table: Option<String>,
    /// Admissible diameters; omitted means unbounded.
    #[arg(long)]
    delta: Option<String>,
    /// Use diam < δ rather than diam ≤ δ.
    #[arg(long)]
    strict: bool,
    /// Report the depth-limited measure sup_δ H_δ.
    #[arg(long)]
    measure: bool,
    /// Bracket the Hausdorff dimension instead.
    #[arg(long)]
    dimension: bool,
    /// Dimension of the snowflake d^a.
    #[arg(long)]
    snowflake: Option<f64>,
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
}

fn parse_target(spec: &ProductSpec, s: &str) -> Result<Vec<Cylinder>, Error> {
    if s.trim().is_empty() {
        return Ok(vec![Cylinder::root()]);
    }
    s.split(';')
        .map(|w| {
            let word = if w.trim().is_empty() {
                vec![]
            } else {
                w.split('.')
                    .map(|d| d.trim().parse().map_err(|_| Error::Parse(format!("bad digit {d:?}"))))
                    .collect::<Result<Vec<u64>, _>>()?
            };
            Cylinder::new(spec, word)
        })
        .collect()
}

pub fn hausdorff(a: &HausdorffArgs, common: &Common) -> CmdResult {
    let spec = ProductSpec::from_json(&read_json(&a.spec)?)?;
    if a.dimension || a.snowflake.is_some() {
        let d = match a.snowflake {
            Some(s) => snowflake_dimension(&spec, s, a.tol)?,
            None => dimension_estimate(&spec, a.tol)?,
        };
        return Ok(Outcome::ok(json!({
            "command": "hausdorff",
            "dimension": { "lo": d.lo, "hi": d.hi, "depth": d.depth },
        })));
    }
    let gauge = match (&a.alpha, &a.gauge_table) {
        (Some(alpha), None) => Gauge::Power(parse_rational(alpha)?),
        (None, Some(t)) => Gauge::Table(rationals(t)?),
        _ => return Err("exactly one of --alpha, --gauge-table is required".into()),
    };
    let target = parse_target(&spec, &a.target)?;
    let content = if a.measure {
        hausdorff_measure(&spec, &target, &gauge, a.strict, exec(common))?
    } else {
        let delta = match &a.delta {
            None => Threshold::Unbounded,
            Some(d) if a.strict => Threshold::Below(parse_rational(d)?),
            Some(d) => Threshold::AtMost(parse_rational(d)?),
        };
        hausdorff_content(&spec, &target, &gauge, &delta, exec(common))?
    };
    Ok(Outcome::ok(json!({
        "command": "hausdorff",
        "lower": fmt_rational(&content.lower),
        "upper": fmt_rational(&content.upper),
        "exact": content.exact().is_some(),
    })))
}

#[derive(Args, Debug)]
pub struct AuditArgs {
    #[command(subcommand)]
    kind: AuditKind,
}

#[derive(Subcommand, Debug)]
enum AuditKind {
    /// Metric doubling, or measure doubling when --weights is given.
    Doubling {
        #[arg(long)]
        spec: String,
        /// Per-level digit weights as JSON: [["1/2","1/2"], ...].
        #[arg(long)]
        weights: Option<String>,
        /// Candidate constant C to confirm or refute.
        #[arg(long)]
        candidate: Option<u64>,
    },
    /// Certify that digit expansion is an isometry from Z/R_L onto the product.
    Isometry {
        #[arg(long)]
        radix: String,
        /// Largest R_L^2 compared pairwise; beyond it pairs are sampled.
        #[arg(long, default_value_t = 1 << 20)]
        pair_budget: u64,
    },
}

pub fn audit(a: &AuditArgs, common: &Common) -> CmdResult {
    match &a.kind {
        AuditKind::Doubling { spec, weights, candidate } => {
            let spec = ProductSpec::from_json(&read_json(spec)?)?;
            let report = match weights {
                Some(w) => {
                    let raw: Vec<Vec<String>> = serde_json::from_value(read_json(w)?)
                        .map_err(|e| Error::Parse(format!("weights: {e}")))?;
                    let w = raw
                        .iter()
                        .map(|row| row.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>, _>>())
                        .collect::<Result<Vec<_>, _>>()?;
                    doubling_measure(&spec, &ProductMeasure::new(&spec, w)?, *candidate)
                }
                None => doubling_metric(&spec, *candidate),
            };
            let mut v = serde_json::to_value(&report)?;
            v["command"] = "audit-doubling".into();
            Ok(Outcome::verdict(v, report.verdict == Verdict::Holds))
        }
        AuditKind::Isometry { radix, pair_budget } => {
            let radix = Radix::new(u64_list(radix)?)?;
            let cert = build_radic_isometry(&radix).certify(*pair_budget, common.seed);
            let mut v = serde_json::to_value(&cert)?;
            v["command"] = "audit-isometry".into();
            let holds = cert.holds();
            v["holds"] = holds.into();
            Ok(Outcome::verdict(v, holds))
        }
    }
}

#[derive(Args, Debug)]
pub struct MaximalArgs {
    /// Tree as JSON or @file: {"spec": ..., "mu": [...], "nu": [...]}.
    #[arg(long, conflicts_with = "random_depth")]
    tree: Option<String>,
    /// Draw a random tree of at most this depth from --seed.
    #[arg(long)]
    random_depth: Option<usize>,
    #[arg(long, value_enum, default_value_t = MaximalCheck::Maximal)]
    check: MaximalCheck,
    /// Density f for lp/doob/distribution (defaults to ν).
    #[arg(long, allow_hyphen_values = true)]
    f: Option<String>,
    #[arg(long, default_value = "2")]
    p: String,
    #[arg(long, default_value = "1/2")]
    a: String,
    /// Level t for the Doob inequality.
    #[arg(long, default_value = "1")]
    t: String,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum MaximalCheck {
    Maximal,
    Weak,
    Lp,
    Doob,
    Distribution,
}

pub fn maximal(a: &MaximalArgs, common: &Common) -> CmdResult {
    let tree = match (&a.tree, a.random_depth) {
        (Some(t), _) => FiniteUltraTree::from_json(&read_json(t)?)?,
        (None, Some(d)) if d >= 1 => FiniteUltraTree::random(common.seed, d),
        _ => return Err("one of --tree, --random-depth (≥ 1) is required".into()),
    };
    let f = match &a.f {
        Some(f) => rationals(f)?,
        None => tree.nu().to_vec(),
    };
    let ex = exec(common);
    let out = match a.check {
        MaximalCheck::Maximal => Outcome::ok(json!({
            "command": "maximal",
            "tree": tree.to_json(),
            "maximal": strings(&maximal_function(&tree, ex)),
        })),
        MaximalCheck::Weak => {
            let failure = weak_type_audit_tree(&tree, ex);
            Outcome::verdict(
                json!({ "command": "maximal-weak", "constant": 1, "holds": failure.is_none(), "witness": failure }),
                failure.is_none(),
            )
        }
        MaximalCheck::Lp => {
            let r = lp_maximal_bound(&tree, &f, &parse_rational(&a.p)?, &parse_rational(&a.a)?, ex)?;
            let mut v = serde_json::to_value(&r)?;
            v["command"] = "maximal-lp".into();
            Outcome::verdict(v, r.holds)
        }
        MaximalCheck::Doob => {
            let filt = Filtration::cylinders(tree.spec());
            let r = martingale_maximal(&f, &filt, tree.mu(), &parse_rational(&a.t)?)?;
            let holds = r.holds();
            Outcome::verdict(
                json!({
                    "command": "maximal-doob",
                    "holds": holds,
                    "martingale": r.martingale.iter().map(|v| strings(v)).collect::<Vec<_>>(),
                    "doob": r.doob,
                }),
                holds,
            )
        }
        MaximalCheck::Distribution => {
            let g = maximal_function(&tree.with_density(&f)?, ex);
            let r = distribution_identity(&g, &parse_rational(&a.p)?, tree.mu())?;
            let mut v = serde_json::to_value(&r)?;
            v["command"] = "maximal-distribution".into();
            Outcome::verdict(v, r.equal)
        }
    };
    Ok(out)
}

#[derive(Args, Debug)]
pub struct CharactersArgs {
    #[arg(long)]
    n: u64,
    /// Check the Gram matrix instead of printing the table.
    #[arg(long, value_enum)]
    gram: Option<GramPath>,
    /// Print the table as CSV of complex values.
    #[arg(long)]
    csv: bool,
    #[arg(long, default_value_t = DEFAULT_TABLE_CAP)]
    cap: u64,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum GramPath {
    Exact,
    Float,
}

pub fn characters(a: &CharactersArgs, common: &Common) -> CmdResult {
    let table = character_table(a.n, a.cap)?;
    match a.gram {
        Some(GramPath::Exact) => {
            let identity = gram_exact_is_identity(a.n, a.cap, exec(common))?;
            Ok(Outcome::verdict(json!({ "command": "characters-gram", "n": a.n, "path": "exact", "identity": identity }), identity))
        }
        Some(GramPath::Float) => {
            let err = gram_float_error(a.n, a.cap, exec(common))?;
            let identity = err <= 1e-12;
            Ok(Outcome::verdict(
                json!({ "command": "characters-gram", "n": a.n, "path": "float", "max_error": err, "identity": identity }),
                identity,
            ))
        }
        None if a.csv => Ok(Outcome::ok(json!({ "command": "characters", "n": a.n, "csv": table.to_csv() }))),
        None => {
            let mut v = table.to_json();
            v["command"] = "characters".into();
            Ok(Outcome::ok(v))
        }
    }
}


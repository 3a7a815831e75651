use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value as Json};

use qpbl::axioms::{check_axioms, classify, minimal_coefficient, BoundKind, Evidence};
use qpbl::fixedpoint::{
    chain_bound, expansive_k_solve, expansive_solve, lambda_solve, orbit, phi_contraction_solve, phi_psi_solve,
    phi_psi_table, weight_witness, ExpansiveParams, FixedPointCertificate, ScalarFunction, SolveOptions,
};
use qpbl::reproduce::{self, Reproduction, Status as ReproStatus};
use qpbl::sequences::{
    builtin, cauchy_equivalence_check, cauchy_profile, find_limits, limit_profile, limit_sandwich_check, DEFAULT_HORIZON,
};
use qpbl::topology::{ball, basis_check, enumerate_topology, inner_delta, separation_class};
use qpbl::{catalog, Error, SamplePlan, Space, Value};

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(name = "qpbl", version, about = "Checks and fixed-point solvers for quasi-partial b-metric-like spaces")]
struct Cli {
    /// Seed for sampled points and restarts.
    #[arg(long, global = true, env = "QPBL_SEED")]
    seed: Option<u64>,
    /// Grid points per axis on interval domains.
    #[arg(long, global = true)]
    grid: Option<usize>,
    /// Seeded random points added to the grid.
    #[arg(long, global = true)]
    random: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args)]
struct SpaceArg {
    /// Catalog id, optionally with parameters (`ex2.5:q=3`).
    #[arg(long, required_unless_present = "space_file", conflicts_with = "space_file")]
    space: Option<String>,
    /// JSON table file.
    #[arg(long)]
    space_file: Option<PathBuf>,
}

impl SpaceArg {
    fn load(&self) -> qpbl::Result<Space> {
        match (&self.space, &self.space_file) {
            (_, Some(path)) => Space::load(path),
            (Some(id), None) => catalog::space(id),
            (None, None) => Err(Error::BadParams("no space given".into())),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Check QPbl1-QPbl4 at the space's coefficient or at --s.
    Verify {
        #[command(flatten)]
        space: SpaceArg,
        #[arg(long)]
        s: Option<Value>,
    },
    /// Least coefficient s for which QPbl4 holds.
    MinS {
        #[command(flatten)]
        space: SpaceArg,
    },
    /// qpbl / qpb / symmetric / b-metric-like membership.
    Classify {
        #[command(flatten)]
        space: SpaceArg,
    },
    /// Ball membership and inner radii.
    Ball {
        #[command(flatten)]
        space: SpaceArg,
        #[arg(long)]
        center: String,
        #[arg(long)]
        radius: Value,
        /// Points to test; may repeat.
        #[arg(long = "point")]
        points: Vec<String>,
        /// Find a radius δ with B(y; δ) inside the ball.
        #[arg(long)]
        inner: Option<String>,
    },
    /// Open sets of a finite space.
    Topology {
        #[command(flatten)]
        space: SpaceArg,
    },
    /// T0/T1/T2 class of a finite space's topology.
    Separation {
        #[command(flatten)]
        space: SpaceArg,
    },
    /// Sequence convergence and Cauchy checks.
    Seq {
        #[command(subcommand)]
        action: SeqAction,
    },
    /// Fixed-point solvers and orbit lemmas.
    Fix {
        #[command(subcommand)]
        action: FixAction,
    },
    /// List or describe catalog entries.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Replay worked examples.
    Reproduce {
        #[arg(required_unless_present = "all", conflicts_with = "all")]
        id: Option<String>,
        #[arg(long)]
        all: bool,
    },
}

#[derive(Args)]
struct SeqArg {
    #[command(flatten)]
    space: SpaceArg,
    /// `const:p`, `alt:p:q`, `recip`, `odd`, `evens`, `naturals`, `orbit:map:x0`.
    #[arg(long)]
    seq: String,
    #[arg(long, default_value_t = DEFAULT_HORIZON)]
    horizon: u64,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
}

#[derive(Subcommand)]
enum SeqAction {
    /// Does the sequence converge to --target?
    Limit {
        #[command(flatten)]
        seq: SeqArg,
        #[arg(long)]
        target: String,
    },
    /// Sampled points the sequence converges to.
    Limits {
        #[command(flatten)]
        seq: SeqArg,
    },
    /// Is the sequence Cauchy, and does the limit of d(x_n, x_m) exist?
    Cauchy {
        #[command(flatten)]
        seq: SeqArg,
    },
    /// Cauchy verdicts in the space and under D = d + dᵀ.
    Equivalence {
        #[command(flatten)]
        seq: SeqArg,
    },
    /// Bounds on lim d(x_n, y) when x_n → x with zero self-distance.
    Sandwich {
        #[command(flatten)]
        seq: SeqArg,
        #[arg(long)]
        x: String,
        #[arg(long = "y")]
        ys: Vec<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum TheoremArg {
    Phi,
    Lambda,
    PhiPsi,
    Expansive,
    ExpansiveK,
}

#[derive(Args)]
struct MapArg {
    #[command(flatten)]
    space: SpaceArg,
    #[arg(long)]
    map: String,
    #[arg(long)]
    x0: String,
}

#[derive(Subcommand)]
enum FixAction {
    /// Check a theorem's hypotheses, then iterate to a certified fixed point.
    Solve {
        #[command(flatten)]
        target: MapArg,
        #[arg(long, value_enum)]
        theorem: TheoremArg,
        /// `linear:c`, `quadratic:c` or `capped-quadratic:c:cap`.
        #[arg(long)]
        phi: Option<ScalarFunction>,
        #[arg(long)]
        psi: Option<ScalarFunction>,
        #[arg(long)]
        lambda: Option<Value>,
        #[arg(long = "K")]
        k: Option<Value>,
        #[arg(long)]
        a1: Option<Value>,
        #[arg(long)]
        a2: Option<Value>,
        #[arg(long)]
        a3: Option<Value>,
        #[arg(long)]
        a4: Option<Value>,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, default_value_t = 100_000)]
        max_iter: usize,
        #[arg(long, default_value_t = 5)]
        restarts: usize,
    },
    /// x0, Tx0, ..., Tⁿx0.
    Orbit {
        #[arg(long)]
        map: String,
        #[arg(long)]
        x0: String,
        #[arg(long, default_value_t = 10)]
        n: usize,
        /// Space used to parse and label points; defaults to the map's domain.
        #[arg(long)]
        space: Option<String>,
    },
    /// Weight function built from the orbit displacement series.
    Witness {
        #[command(flatten)]
        target: MapArg,
        #[arg(long, default_value_t = 200)]
        terms: usize,
    },
    /// Chained triangle bounds along an orbit.
    Chain {
        #[command(flatten)]
        target: MapArg,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// The (φ, ψ) contraction inequality at every pair.
    Table {
        #[command(flatten)]
        space: SpaceArg,
        #[arg(long)]
        map: String,
        #[arg(long)]
        phi: ScalarFunction,
        #[arg(long)]
        psi: ScalarFunction,
    },
}

#[derive(Subcommand)]
enum CatalogAction {
    List,
    Show { id: String },
}

#[derive(Clone, Copy, Serialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
enum Status {
    Pass,
    Fail,
    EvidenceOnly,
}

impl Status {
    fn from_evidence(passed: bool, evidence: Evidence) -> Self {
        match (passed, evidence) {
            (false, _) => Status::Fail,
            (true, Evidence::Exhaustive) => Status::Pass,
            (true, Evidence::Sampled) => Status::EvidenceOnly,
        }
    }
}

#[derive(Serialize)]
struct RunReport {
    schema_version: u32,
    command: String,
    status: Status,
    payload: Json,
    elapsed_ms: u128,
}

type Outcome = qpbl::Result<(Status, Json)>;

fn to_json(v: impl Serialize) -> qpbl::Result<Json> {
    Ok(serde_json::to_value(v)?)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut plan = SamplePlan::default();
    if let Some(seed) = cli.seed {
        plan = plan.with_seed(seed);
    }
    if let Some(g) = cli.grid {
        plan.grid_points_per_axis = g;
    }
    if let Some(r) = cli.random {
        plan.random_points = r;
    }
    let start = Instant::now();
    let (name, outcome) = dispatch(&cli.command, &plan);
    let (status, payload) = match outcome {
        Ok(r) => r,
        Err(e) => (Status::Fail, json!({ "error": { "code": e.code(), "message": e.to_string() } })),
    };
    let report =
        RunReport { schema_version: SCHEMA_VERSION, command: name, status, payload, elapsed_ms: start.elapsed().as_millis() };
    let text = match cli.format {
        Format::Json => serde_json::to_string_pretty(&report).expect("report serializes") + "\n",
        Format::Text => render_text(&report),
    };
    let written = match &cli.out {
        Some(path) => std::fs::write(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    };
    if let Err(e) = written {
        eprintln!("qpbl: cannot write report: {e}");
        return ExitCode::from(1);
    }
    if status == Status::Fail {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}

fn dispatch(cmd: &Command, plan: &SamplePlan) -> (String, Outcome) {
    match cmd {
        Command::Verify { space, s } => ("verify".into(), verify(space, *s, plan)),
        Command::MinS { space } => ("min-s".into(), min_s(space, plan)),
        Command::Classify { space } => ("classify".into(), classify_cmd(space, plan)),
        Command::Ball { space, center, radius, points, inner } => {
            ("ball".into(), ball_cmd(space, center, *radius, points, inner.as_deref(), plan))
        }
        Command::Topology { space } => ("topology".into(), topology(space)),
        Command::Separation { space } => ("separation".into(), separation(space)),
        Command::Seq { action } => seq_cmd(action, plan),
        Command::Fix { action } => fix_cmd(action, plan),
        Command::Catalog { action } => ("catalog".into(), catalog_cmd(action)),
        Command::Reproduce { id, all } => ("reproduce".into(), reproduce_cmd(id.as_deref(), *all, plan)),
    }
}

fn verify(arg: &SpaceArg, s: Option<Value>, plan: &SamplePlan) -> Outcome {
    let space = arg.load()?;
    let s = s.unwrap_or(space.coefficient());
    let reports = check_axioms(&space, s, plan)?;
    let passed = reports.iter().all(|r| r.passed);
    let evidence = reports[0].evidence;
    let payload = json!({ "space": space.name(), "s": s, "evidence": evidence, "axioms": reports });
    Ok((Status::from_evidence(passed, evidence), payload))
}

fn min_s(arg: &SpaceArg, plan: &SamplePlan) -> Outcome {
    let space = arg.load()?;
    let b = minimal_coefficient(&space, plan)?;
    let status = if b.kind == BoundKind::Exact { Status::Pass } else { Status::EvidenceOnly };
    Ok((status, json!({ "space": space.name(), "claimed_s": space.coefficient(), "bound": b })))
}

fn classify_cmd(arg: &SpaceArg, plan: &SamplePlan) -> Outcome {
    let space = arg.load()?;
    let c = classify(&space, plan);
    Ok((Status::from_evidence(true, c.evidence), to_json(c)?))
}

fn ball_cmd(arg: &SpaceArg, center: &str, radius: Value, points: &[String], inner: Option<&str>, plan: &SamplePlan) -> Outcome {
    let space = arg.load()?;
    let x0 = space.parse_point(center)?;
    let b = ball(&space, &x0, radius)?;
    let mut members = Vec::new();
    for p in points {
        let y = space.parse_point(p)?;
        members.push(json!({ "point": space.label(&y), "member": b.contains(&y) }));
    }
    let mut payload = json!({
        "space": space.name(),
        "center": space.label(&x0),
        "radius": radius,
        "bound": b.bound(),
        "membership": members,
    });
    if let Some(set) = b.explicit_set() {
        payload["members"] = to_json(space.labels(&set))?;
    }
    let mut status = Status::Pass;
    if let Some(y) = inner {
        let y = space.parse_point(y)?;
        let d = inner_delta(&space, &x0, radius, &y, plan)?;
        status = Status::from_evidence(true, d.evidence);
        payload["inner"] = to_json(d)?;
    }
    Ok((status, payload))
}

fn topology(arg: &SpaceArg) -> Outcome {
    let space = arg.load()?;
    let top = enumerate_topology(&space)?;
    let basis = basis_check(&space)?;
    let status = if top.is_valid() && basis.holds { Status::Pass } else { Status::Fail };
    Ok((status, json!({ "space": space.name(), "topology": top, "basis": basis })))
}

fn separation(arg: &SpaceArg) -> Outcome {
    let space = arg.load()?;
    let top = enumerate_topology(&space)?;
    Ok((Status::Pass, json!({ "space": space.name(), "separation": separation_class(&top) })))
}

fn seq_cmd(action: &SeqAction, plan: &SamplePlan) -> (String, Outcome) {
    let (name, outcome) = match action {
        SeqAction::Limit { seq, target } => ("seq limit", seq_limit(seq, target)),
        SeqAction::Limits { seq } => ("seq limits", seq_limits(seq, plan)),
        SeqAction::Cauchy { seq } => ("seq cauchy", with_seq(seq, |s, q| to_json(cauchy_profile(s, q, seq.tol)?))),
        SeqAction::Equivalence { seq } => ("seq equivalence", seq_equivalence(seq)),
        SeqAction::Sandwich { seq, x, ys } => ("seq sandwich", seq_sandwich(seq, x, ys, plan)),
    };
    (name.into(), outcome)
}

/// Sequence verdicts rest on a finite horizon, so they are evidence only.
fn with_seq(arg: &SeqArg, f: impl FnOnce(&Space, &qpbl::sequences::SequenceSpec) -> qpbl::Result<Json>) -> Outcome {
    let space = arg.space.load()?;
    let seq = builtin(&space, &arg.seq, arg.horizon)?;
    Ok((Status::EvidenceOnly, f(&space, &seq)?))
}

fn seq_limit(arg: &SeqArg, target: &str) -> Outcome {
    with_seq(arg, |space, seq| to_json(limit_profile(space, seq, &space.parse_point(target)?, arg.tol)?))
}

fn seq_limits(arg: &SeqArg, plan: &SamplePlan) -> Outcome {
    with_seq(arg, |space, seq| {
        let limits = find_limits(space, seq, plan, arg.tol)?;
        Ok(json!({ "sequence": seq.name, "limits": space.labels(&limits) }))
    })
}

fn seq_equivalence(arg: &SeqArg) -> Outcome {
    let (_, payload) = with_seq(arg, |space, seq| to_json(cauchy_equivalence_check(space, seq, arg.tol)?))?;
    let agree = payload["agree"].as_bool().unwrap_or(false);
    Ok((if agree { Status::EvidenceOnly } else { Status::Fail }, payload))
}

fn seq_sandwich(arg: &SeqArg, x: &str, ys: &[String], plan: &SamplePlan) -> Outcome {
    let (_, payload) = with_seq(arg, |space, seq| {
        let x = space.parse_point(x)?;
        let ys = ys.iter().map(|y| space.parse_point(y)).collect::<qpbl::Result<Vec<_>>>()?;
        to_json(limit_sandwich_check(space, seq, &x, &ys, arg.tol, plan)?)
    })?;
    let holds = payload["holds"].as_bool().unwrap_or(false);
    Ok((if holds { Status::EvidenceOnly } else { Status::Fail }, payload))
}

fn fix_cmd(action: &FixAction, plan: &SamplePlan) -> (String, Outcome) {
    match action {
        FixAction::Solve { target, theorem, phi, psi, lambda, k, a1, a2, a3, a4, tol, max_iter, restarts } => {
            let opts = SolveOptions { tol: *tol, max_iter: *max_iter, restarts: *restarts, plan: plan.clone() };
            let params = [*a1, *a2, *a3, *a4];
            ("fix solve".into(), solve(target, *theorem, phi.as_ref(), psi.as_ref(), *lambda, *k, params, &opts))
        }
        FixAction::Orbit { map, x0, n, space } => ("fix orbit".into(), orbit_cmd(map, x0, *n, space.as_deref())),
        FixAction::Witness { target, terms } => ("fix witness".into(), witness_cmd(target, *terms)),
        FixAction::Chain { target, n, m, tol } => ("fix chain".into(), chain_cmd(target, *n, *m, *tol)),
        FixAction::Table { space, map, phi, psi } => ("fix table".into(), table_cmd(space, map, phi, psi, plan)),
    }
}

fn need<T: Copy>(v: Option<T>, flag: &str, theorem: &str) -> qpbl::Result<T> {
    v.ok_or_else(|| Error::BadParams(format!("--{flag} is required for theorem {theorem}")))
}

#[allow(clippy::too_many_arguments)]
fn solve(
    target: &MapArg,
    theorem: TheoremArg,
    phi: Option<&ScalarFunction>,
    psi: Option<&ScalarFunction>,
    lambda: Option<Value>,
    k: Option<Value>,
    a: [Option<Value>; 4],
    opts: &SolveOptions,
) -> Outcome {
    let space = target.space.load()?;
    let map = catalog::mapping(&target.map)?;
    let x0 = space.parse_point(&target.x0)?;
    let cert: FixedPointCertificate = match theorem {
        TheoremArg::Phi => phi_contraction_solve(&space, &map, need(phi, "phi", "phi")?, &x0, opts)?,
        TheoremArg::Lambda => lambda_solve(&space, &map, need(lambda, "lambda", "lambda")?, &x0, opts)?,
        TheoremArg::PhiPsi => phi_psi_solve(
            &space,
            &map,
            need(phi, "phi", "phi-psi")?,
            need(psi, "psi", "phi-psi")?,
            &x0,
            opts,
        )?,
        TheoremArg::Expansive => {
            let params = ExpansiveParams {
                a1: need(a[0], "a1", "expansive")?,
                a2: need(a[1], "a2", "expansive")?,
                a3: need(a[2], "a3", "expansive")?,
                a4: need(a[3], "a4", "expansive")?,
            };
            expansive_solve(&space, &map, &params, &x0, opts)?
        }
        TheoremArg::ExpansiveK => expansive_k_solve(&space, &map, need(k, "K", "expansive-k")?, &x0, opts)?,
    };
    let sampled = cert.hypothesis_report.iter().any(|h| h.evidence == Evidence::Sampled);
    let evidence = if sampled { Evidence::Sampled } else { Evidence::Exhaustive };
    Ok((Status::from_evidence(cert.is_valid(), evidence), to_json(cert)?))
}

fn orbit_cmd(map_id: &str, x0: &str, n: usize, space_id: Option<&str>) -> Outcome {
    let map = catalog::mapping(map_id)?;
    let labels = |pts: &[qpbl::Point]| pts.iter().map(|p| map.domain().label(p)).collect::<Vec<_>>();
    let (x0, terms) = match space_id {
        Some(id) => {
            let space = catalog::space(id)?;
            let x = space.parse_point(x0)?;
            let o = orbit(&map, &x, n)?;
            (x, space.labels(&o.terms))
        }
        None => {
            let x = map.domain().parse_point(x0)?;
            let o = orbit(&map, &x, n)?;
            (x, labels(&o.terms))
        }
    };
    Ok((Status::Pass, json!({ "map": map.name(), "x0": map.domain().label(&x0), "terms": terms })))
}

fn witness_cmd(target: &MapArg, terms: usize) -> Outcome {
    let space = target.space.load()?;
    let map = catalog::mapping(&target.map)?;
    let w = weight_witness(&space, &map, &space.parse_point(&target.x0)?, terms)?;
    let status = if w.inequality_verified { Status::EvidenceOnly } else { Status::Fail };
    Ok((status, to_json(w)?))
}

fn chain_cmd(target: &MapArg, n: usize, m: usize, tol: f64) -> Outcome {
    let space = target.space.load()?;
    let map = catalog::mapping(&target.map)?;
    let o = orbit(&map, &space.parse_point(&target.x0)?, m)?;
    let c = chain_bound(&space, &o, n, m, tol)?;
    Ok((if c.holds { Status::Pass } else { Status::Fail }, to_json(c)?))
}

fn table_cmd(arg: &SpaceArg, map: &str, phi: &ScalarFunction, psi: &ScalarFunction, plan: &SamplePlan) -> Outcome {
    let space = arg.load()?;
    let map = catalog::mapping(map)?;
    let rows = phi_psi_table(&space, &map, phi, psi, plan);
    let all = rows.iter().all(|r| r.holds);
    let evidence = space.eval_set(plan).exhaustive;
    let evidence = if evidence { Evidence::Exhaustive } else { Evidence::Sampled };
    Ok((Status::from_evidence(all, evidence), json!({ "space": space.name(), "map": map.name(), "rows": rows })))
}

fn catalog_cmd(action: &CatalogAction) -> Outcome {
    match action {
        CatalogAction::List => Ok((Status::Pass, json!({ "entries": catalog::ENTRIES }))),
        CatalogAction::Show { id } => {
            let cid: catalog::CatalogId = id.parse()?;
            let entry = catalog::lookup(&cid.id).ok_or_else(|| Error::UnknownId(cid.id.clone()))?;
            let mut payload = json!({ "entry": entry });
            match entry.kind {
                catalog::EntryKind::Space => {
                    let space = catalog::make_space(&cid)?;
                    payload["coefficient"] = to_json(space.coefficient())?;
                    payload["domain"] = json!(format!("{:?}", space.domain()));
                }
                catalog::EntryKind::Mapping => {
                    let map = catalog::make_mapping(&cid)?;
                    payload["has_inverse"] = json!(map.has_inverse());
                    payload["domain"] = json!(format!("{:?}", map.domain()));
                }
            }
            Ok((Status::Pass, payload))
        }
    }
}

fn reproduce_cmd(id: Option<&str>, all: bool, plan: &SamplePlan) -> Outcome {
    let results: Vec<Reproduction> = if all {
        reproduce::reproduce_all(plan)
    } else {
        vec![reproduce::reproduce(id.unwrap_or_default(), plan)?]
    };
    let failed = results.iter().filter(|r| r.status == ReproStatus::Fail).count();
    let status = if failed == 0 { Status::Pass } else { Status::Fail };
    let payload = json!({
        "entries": results.len(),
        "passed": results.len() - failed,
        "failed": failed,
        "results": results,
    });
    Ok((status, payload))
}

fn render_text(report: &RunReport) -> String {
    let status = serde_json::to_value(report.status).unwrap_or_default();
    let mut out = format!("{}: {} ({} ms)\n", report.command, status.as_str().unwrap_or("?"), report.elapsed_ms);
    if let Some(results) = report.payload.get("results").and_then(Json::as_array) {
        for r in results {
            out += &format!("{:<24} {}  {}\n", r["id"].as_str().unwrap_or(""), r["status"].as_str().unwrap_or(""), r["title"].as_str().unwrap_or(""));
            for c in r["checks"].as_array().into_iter().flatten() {
                let mark = if c["passed"].as_bool() == Some(true) { "ok  " } else { "FAIL" };
                out += &format!(
                    "    {mark} {} [{}] expected {} got {}\n",
                    c["name"].as_str().unwrap_or(""),
                    c["provenance"].as_str().unwrap_or(""),
                    c["expected"].as_str().unwrap_or(""),
                    c["actual"].as_str().unwrap_or(""),
                );
            }
            if let Some(e) = r.get("error") {
                out += &format!("    error {}: {}\n", e["code"].as_str().unwrap_or(""), e["message"].as_str().unwrap_or(""));
            }
        }
        return out;
    }
    flatten(&report.payload, String::new(), &mut out);
    out
}

fn flatten(v: &Json, path: String, out: &mut String) {
    let join = |k: &str| if path.is_empty() { k.to_string() } else { format!("{path}.{k}") };
    match v {
        Json::Object(m) => m.iter().for_each(|(k, v)| flatten(v, join(k), out)),
        Json::Array(a) if a.iter().any(|x| x.is_object() || x.is_array()) => {
            a.iter().enumerate().for_each(|(i, v)| flatten(v, join(&i.to_string()), out))
        }
        Json::Null => {}
        other => *out += &format!("{path} = {other}\n"),
    }
}

//! The `hermsrg` command line tool.
//!
//! Exit codes: 0 success, 1 mathematical failure (the report carries a
//! witness), 2 usage or load error, 3 time or size budget exceeded.

pub mod artifacts;

use std::collections::{BTreeMap, BTreeSet};
use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use crate::constructions::{
    build_gamma_u, build_nu, build_unital_bm, build_unital_bm_alt, build_unital_bt, build_unital_classical,
    dual_unital, find_dual_onan, standard_plane, validate_unital, BmParams, Unital,
};
use crate::graphcore::{
    check_srg, is_isomorphic, maximal_cliques, triple_census, verify_mapping, BitIter, CliqueOptions, Graph,
    IsoOptions, IsoVerdict, SrgParams, TripleSource,
};
use crate::oracles::{distinguish, verify_lemma, DistinguishOptions, Invariant, LemmaId, LemmaStatus, VerifyOptions};
use crate::projgeom::Space;
use crate::switching::{apply_switch, build_switched, expected_sizes, find_switch_triple, Variant};
use artifacts::{
    manifest_path, read_graph, read_sidecar, sha256_file, sidecar_path, to_json, write_graph, write_json, OutputHash,
    RunManifest, Sidecar, SwitchInfo, MANIFEST_SCHEMA,
};

pub const BUDGET_ENV: &str = "HERMSRG_BUDGET_SECS";
const CENSUS_SCHEMA: &str = "hermsrg.census.v1";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot load {0}")]
    Load(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Load(_) | CliError::Io(_) => 2,
            CliError::Budget(_) => 3,
        }
    }
}

fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

#[derive(Debug, Parser)]
#[command(name = "hermsrg", version, about = "Hermitian strongly regular graphs, their switched mates and checks")]
pub struct Cli {
    /// worker threads (default: all cores)
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// more logging (-v info, -vv debug)
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a graph and write graph6 plus a JSON sidecar
    Build(BuildArgs),
    /// Check a graph, a lemma, the switching hypotheses or a unital
    Verify {
        #[command(subcommand)]
        target: VerifyTarget,
    },
    /// Decide whether two graph6 files are isomorphic
    Compare(CompareArgs),
    /// Count triple values or maximal cliques of a graph
    Census(CensusArgs),
    /// Re-run a manifest and compare output hashes
    Replay { manifest: PathBuf },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Nu,
    GammaU,
    Switched,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    Pencil,
    Line,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Variant {
        match v {
            VariantArg::Pencil => Variant::Pencil,
            VariantArg::Line => Variant::Line,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum UnitalArg {
    Classical,
    Bm,
    BmAlt,
    Bt,
}

#[derive(Debug, Clone, Args)]
pub struct UnitalSpec {
    #[arg(long, value_enum, default_value = "classical")]
    pub unital: UnitalArg,
    /// Buekenhout-Metz alpha, as a field table index
    #[arg(long)]
    pub alpha_idx: Option<u8>,
    /// Buekenhout-Metz beta, as a field table index
    #[arg(long)]
    pub beta_idx: Option<u8>,
    /// take the dual unital
    #[arg(long)]
    pub dual: bool,
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    /// projective dimension
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub q: u32,
    #[arg(long, value_enum)]
    pub kind: Kind,
    #[arg(long, value_enum)]
    pub variant: Option<VariantArg>,
    #[command(flatten)]
    pub unital: UnitalSpec,
    /// graph6 output; the sidecar goes next to it with extension .json
    #[arg(long)]
    pub out: PathBuf,
    /// skip the strong-regularity check
    #[arg(long)]
    pub no_check: bool,
}

#[derive(Debug, Subcommand)]
pub enum VerifyTarget {
    /// Check strong regularity
    Srg {
        #[arg(long)]
        graph: PathBuf,
        /// expected parameters v,k,lambda,mu
        #[arg(long, value_delimiter = ',')]
        expect: Option<Vec<u64>>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a lemma oracle (or all of them)
    Lemma {
        /// lemma id, or "all"
        #[arg(long)]
        id: String,
        #[arg(long)]
        q: u32,
        /// configurations per frame (default: per lemma)
        #[arg(long)]
        budget: Option<usize>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a switched graph and check the switching hypotheses
    Wqh {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: u32,
        #[arg(long, value_enum)]
        variant: VariantArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a unital, its graph and dual O'Nan configurations
    Unital {
        #[arg(long)]
        q: u32,
        #[command(flatten)]
        spec: UnitalSpec,
        /// also search for a dual O'Nan configuration
        #[arg(long)]
        onan: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CompareMode {
    Invariants,
    Iso,
    Both,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    pub left: PathBuf,
    pub right: PathBuf,
    #[arg(long, value_enum, default_value = "both")]
    pub mode: CompareMode,
    /// invariant order, comma separated
    #[arg(long, value_delimiter = ',')]
    pub order: Option<Vec<Invariant>>,
    /// keep going after the first certificate
    #[arg(long)]
    pub all: bool,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// sampled triangles per graph
    #[arg(long, default_value_t = 20_000)]
    pub sample: u64,
    /// search-tree node cap for the isomorphism search
    #[arg(long, default_value_t = 5_000_000)]
    pub max_nodes: u64,
    /// re-check every certificate from the graphs
    #[arg(long)]
    pub validate: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum What {
    Triples,
    Cliques,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Scope {
    Full,
    Targeted,
    Sample,
}

#[derive(Debug, Args)]
pub struct CensusArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long, value_enum)]
    pub what: What,
    #[arg(long, value_enum, default_value = "full")]
    pub scope: Scope,
    /// sampled triangles
    #[arg(long, default_value_t = 100_000)]
    pub count: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// vertices whose triangles a targeted census covers
    #[arg(long, value_delimiter = ',')]
    pub vertices: Option<Vec<usize>>,
    /// refuse full triple censuses above this many triangles
    #[arg(long, default_value_t = 4_000_000_000)]
    pub max_triangles: u64,
    /// witnesses kept per clique size
    #[arg(long, default_value_t = 0)]
    pub witnesses: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// What a finished command leaves behind.
#[derive(Debug, Default)]
pub struct Done {
    pub code: i32,
    pub outputs: Vec<PathBuf>,
    pub seed: Option<u64>,
    pub geometry: serde_json::Value,
    pub timings_ms: BTreeMap<String, u64>,
}

struct Ctx {
    deadline: Option<Instant>,
    timings: BTreeMap<String, u64>,
}

impl Ctx {
    fn timed<T>(&mut self, name: &str, f: impl FnOnce() -> T) -> T {
        let t = Instant::now();
        let out = f();
        self.timings.insert(name.to_string(), t.elapsed().as_millis() as u64);
        out
    }
}

fn budget_deadline() -> Result<Option<Instant>, CliError> {
    match std::env::var(BUDGET_ENV) {
        Ok(s) => {
            let secs: f64 = s.trim().parse().map_err(|_| usage(format!("{BUDGET_ENV} must be a number of seconds")))?;
            Ok(Some(Instant::now() + Duration::from_secs_f64(secs.max(0.0))))
        }
        Err(_) => Ok(None),
    }
}

/// Parses, runs and writes the manifest; returns the process exit code.
pub fn main_with_args<I: IntoIterator<Item = OsString>>(args: I) -> i32 {
    let args: Vec<OsString> = args.into_iter().collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).try_init();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t.max(1)).build_global() {
            log::warn!("thread pool already set up: {e}");
        }
    }
    let command: Vec<String> = args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    match run(cli.command, true) {
        Ok(done) => {
            if let Err(e) = write_manifest(&command, &done) {
                eprintln!("error: {e}");
                return e.exit_code();
            }
            done.code
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn write_manifest(command: &[String], done: &Done) -> Result<(), CliError> {
    let Some(first) = done.outputs.first() else { return Ok(()) };
    let outputs = done
        .outputs
        .iter()
        .map(|p| Ok(OutputHash { path: p.clone(), sha256: sha256_file(p)? }))
        .collect::<Result<Vec<_>, CliError>>()?;
    let manifest = RunManifest {
        schema: MANIFEST_SCHEMA.into(),
        tool: "hermsrg".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        command: command.to_vec(),
        seed: done.seed,
        geometry: done.geometry.clone(),
        outputs,
        timings_ms: done.timings_ms.clone(),
        exit_code: done.code,
    };
    write_json(&manifest_path(first), &manifest)
}

/// Runs one command. `top` is false while replaying a manifest.
pub fn run(command: Command, top: bool) -> Result<Done, CliError> {
    let mut ctx = Ctx { deadline: budget_deadline()?, timings: BTreeMap::new() };
    let mut done = match command {
        Command::Build(a) => cmd_build(&a, &mut ctx)?,
        Command::Verify { target } => match target {
            VerifyTarget::Srg { graph, expect, out } => cmd_verify_srg(&graph, expect, out, &mut ctx)?,
            VerifyTarget::Lemma { id, q, budget, seed, out } => cmd_verify_lemma(&id, q, budget, seed, out, &mut ctx)?,
            VerifyTarget::Wqh { n, q, variant, out } => cmd_verify_wqh(n, q, variant.into(), out, &mut ctx)?,
            VerifyTarget::Unital { q, spec, onan, out } => cmd_verify_unital(q, &spec, onan, out, &mut ctx)?,
        },
        Command::Compare(a) => cmd_compare(&a, &mut ctx)?,
        Command::Census(a) => cmd_census(&a, &mut ctx)?,
        Command::Replay { manifest } => {
            if !top {
                return Err(usage("a manifest cannot replay another replay"));
            }
            cmd_replay(&manifest)?
        }
    };
    done.timings_ms = ctx.timings;
    Ok(done)
}

/// Writes a report to `out` (and registers it) or prints it.
fn emit(report: &impl Serialize, out: Option<PathBuf>, done: &mut Done) -> Result<(), CliError> {
    match out {
        Some(path) => {
            write_json(&path, report)?;
            done.outputs.push(path);
        }
        None => print!("{}", to_json(report)),
    }
    Ok(())
}

fn make_unital(q: u32, spec: &UnitalSpec) -> Result<Unital, CliError> {
    let plane = standard_plane(q).map_err(usage)?;
    let params = || -> Result<BmParams, CliError> {
        match (spec.alpha_idx, spec.beta_idx) {
            (Some(a), Some(b)) => Ok(BmParams::from_indices(a, b)),
            _ => Err(usage("--alpha-idx and --beta-idx are required for Buekenhout-Metz unitals")),
        }
    };
    let u = match spec.unital {
        UnitalArg::Classical => build_unital_classical(plane),
        UnitalArg::Bm => build_unital_bm(plane, params()?),
        UnitalArg::BmAlt => build_unital_bm_alt(plane, params()?),
        UnitalArg::Bt => build_unital_bt(plane),
    }
    .map_err(usage)?;
    if spec.dual {
        return dual_unital(&u).map_err(usage);
    }
    Ok(u)
}

fn unital_geometry(q: u32, spec: &UnitalSpec) -> serde_json::Value {
    json!({
        "n": 2,
        "q": q,
        "unital": format!("{:?}", spec.unital).to_lowercase(),
        "alpha_idx": spec.alpha_idx,
        "beta_idx": spec.beta_idx,
        "dual": spec.dual,
    })
}

fn cmd_build(a: &BuildArgs, ctx: &mut Ctx) -> Result<Done, CliError> {
    let mut done = Done::default();
    let (g, mut sidecar, expected) = match a.kind {
        Kind::Nu => {
            let g = ctx.timed("build", || build_nu(a.n, a.q)).map_err(usage)?;
            let space = Space::new(a.n, a.q).map_err(usage)?;
            done.geometry = json!({"kind": "nu", "n": a.n, "q": a.q});
            let side = Sidecar::new("nu", &space, &g);
            (g, side, SrgParams::nu(a.n as u32, a.q as u64))
        }
        Kind::GammaU => {
            if a.n != 2 {
                return Err(usage("unital graphs live in the plane: use --n 2"));
            }
            let u = make_unital(a.q, &a.unital)?;
            let g = ctx.timed("build", || build_gamma_u(&u)).map_err(usage)?;
            done.geometry = unital_geometry(a.q, &a.unital);
            let mut side = Sidecar::new("gamma_u", u.plane().space(), &g);
            side.unital = Some(u.kind.clone());
            (g, side, SrgParams::unital(a.q as u64))
        }
        Kind::Switched => {
            let variant: Variant = a.variant.ok_or_else(|| usage("--variant is required for switched graphs"))?.into();
            let s = ctx.timed("build", || build_switched(a.n, a.q, variant)).map_err(usage)?;
            let h = s.config.geometry().map_err(usage)?;
            let triple = if a.n == 4 {
                find_switch_triple(&s.base, &h, &s.config, &s.sets).map_err(usage)?.map(|t| [t.u, t.u1, t.u2])
            } else {
                None
            };
            done.geometry = json!({"kind": "switched", "n": a.n, "q": a.q, "variant": variant});
            let mut side = Sidecar::new("switched", h.space(), &s.graph);
            let sizes = [("a", s.sets.a.len()), ("a1", s.sets.a1.len()), ("a2", s.sets.a2.len()), ("d", s.sets.d_size)];
            side.switching = Some(SwitchInfo {
                config: s.config.clone(),
                sizes: sizes.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
                triple,
            });
            (s.graph, side, SrgParams::nu(a.n as u32, a.q as u64))
        }
    };
    let mut code = 0;
    if !a.no_check {
        match ctx.timed("check_srg", || check_srg(&g)) {
            Ok(p) => {
                sidecar.params = Some(p);
                if p != expected {
                    log::error!("parameters {p}, expected {expected}");
                    code = 1;
                }
            }
            Err(f) => {
                eprintln!("not strongly regular: {f}");
                code = 1;
            }
        }
    }
    write_graph(&a.out, &g)?;
    let side_path = sidecar_path(&a.out);
    if side_path == a.out {
        return Err(usage("the graph file needs an extension other than .json"));
    }
    write_json(&side_path, &sidecar)?;
    done.outputs = vec![a.out.clone(), side_path];
    done.code = code;
    Ok(done)
}

fn cmd_verify_srg(graph: &Path, expect: Option<Vec<u64>>, out: Option<PathBuf>, ctx: &mut Ctx) -> Result<Done, CliError> {
    if expect.as_ref().is_some_and(|e| e.len() != 4) {
        return Err(usage("--expect takes four values v,k,lambda,mu"));
    }
    let g = read_graph(graph)?;
    let result = ctx.timed("check_srg", || check_srg(&g));
    let expected = expect.map(|e| SrgParams::new(e[0], e[1], e[2], e[3]));
    let pass = match (&result, expected) {
        (Ok(p), Some(e)) => *p == e,
        (Ok(_), None) => true,
        (Err(_), _) => false,
    };
    let report = json!({
        "schema": "hermsrg.srg.v1",
        "graph": graph,
        "vertices": g.n(),
        "pass": pass,
        "params": result.as_ref().ok(),
        "expected": expected,
        "failure": result.as_ref().err(),
        "failure_text": result.as_ref().err().map(|f| f.to_string()),
    });
    let mut done = Done { code: if pass { 0 } else { 1 }, ..Default::default() };
    emit(&report, out, &mut done)?;
    Ok(done)
}

fn cmd_verify_lemma(
    id: &str,
    q: u32,
    budget: Option<usize>,
    seed: u64,
    out: Option<PathBuf>,
    ctx: &mut Ctx,
) -> Result<Done, CliError> {
    let ids: Vec<LemmaId> = if id == "all" {
        LemmaId::ALL.iter().copied().filter(|l| l.supported_q().contains(&q)).collect()
    } else {
        vec![id.parse().map_err(usage)?]
    };
    let opts = VerifyOptions { sample_budget: budget, seed, deadline: ctx.deadline };
    let mut reports = Vec::new();
    for l in ids {
        let r = ctx.timed(l.name(), || verify_lemma(l, q, &opts)).map_err(usage)?;
        log::info!("{l} q={q}: {:?}", r.status);
        reports.push(r.without_timing());
    }
    let code = if reports.iter().any(|r| r.status == LemmaStatus::Fail) {
        1
    } else if reports.iter().any(|r| r.status == LemmaStatus::Partial) {
        3
    } else {
        0
    };
    let mut done = Done { code, seed: Some(seed), geometry: json!({"lemma": id, "q": q}), ..Default::default() };
    if reports.len() == 1 {
        emit(&reports[0], out, &mut done)?;
    } else {
        emit(&reports, out, &mut done)?;
    }
    Ok(done)
}

fn cmd_verify_wqh(n: usize, q: u32, variant: Variant, out: Option<PathBuf>, ctx: &mut Ctx) -> Result<Done, CliError> {
    let mut done = Done { geometry: json!({"n": n, "q": q, "variant": variant}), ..Default::default() };
    let report = match ctx.timed("switch", || build_switched(n, q, variant)) {
        Ok(s) => {
            let base = check_srg(&s.base).ok();
            let switched = check_srg(&s.graph).ok();
            let involution = apply_switch(&s.graph, &s.sets.exchanged()).map(|g| g.same_edges(&s.base)).unwrap_or(false);
            let expected = (n == 4).then(|| expected_sizes(q as usize, variant));
            let sizes_ok =
                expected.map_or(true, |(a, a1)| s.sets.a.len() == a && s.sets.a1.len() == a1 && s.sets.a2.len() == a1);
            let pass = base.is_some() && base == switched && involution && sizes_ok;
            done.code = if pass { 0 } else { 1 };
            json!({
                "schema": "hermsrg.wqh.v1",
                "pass": pass,
                "sizes": {"a": s.sets.a.len(), "a1": s.sets.a1.len(), "a2": s.sets.a2.len(), "d": s.sets.d_size},
                "expected_sizes": expected.map(|(a, a1)| json!({"a": a, "a1": a1, "a2": a1})),
                "hypotheses": s.report,
                "base_params": base,
                "switched_params": switched,
                "switch_is_involution": involution,
                "edges_changed": s.base.edge_difference(&s.graph).len(),
            })
        }
        Err(e) => {
            done.code = 1;
            json!({"schema": "hermsrg.wqh.v1", "pass": false, "error": e.to_string()})
        }
    };
    emit(&report, out, &mut done)?;
    Ok(done)
}

fn cmd_verify_unital(q: u32, spec: &UnitalSpec, onan: bool, out: Option<PathBuf>, ctx: &mut Ctx) -> Result<Done, CliError> {
    let u = ctx.timed("build", || make_unital(q, spec))?;
    let qq = q as usize;
    let stats = validate_unital(u.plane(), u.points());
    let counts_ok = stats
        .as_ref()
        .is_ok_and(|s| s.tangents == qq * qq * qq + 1 && s.secants == qq * qq * qq * qq - qq * qq * qq + qq * qq);
    let params = build_gamma_u(&u).ok().and_then(|g| check_srg(&g).ok());
    let params_ok = params == Some(SrgParams::unital(q as u64));
    let search = if onan { Some(ctx.timed("onan", || find_dual_onan(&u)).map_err(usage)?) } else { None };
    let pass = counts_ok && params_ok;
    let report = json!({
        "schema": "hermsrg.unital.v1",
        "pass": pass,
        "kind": u.kind,
        "points": u.points().len(),
        "stats": stats.as_ref().ok(),
        "violation": stats.as_ref().err(),
        "graph_params": params,
        "dual_onan": search,
    });
    let mut done = Done { code: if pass { 0 } else { 1 }, geometry: unital_geometry(q, spec), ..Default::default() };
    emit(&report, out, &mut done)?;
    Ok(done)
}

fn compare_hints(left: &Path, right: &Path) -> Vec<(u8, [usize; 3])> {
    [left, right]
        .iter()
        .enumerate()
        .filter_map(|(i, p)| read_sidecar(p)?.switching?.triple.map(|t| (i as u8, t)))
        .collect()
}

fn cmd_compare(a: &CompareArgs, ctx: &mut Ctx) -> Result<Done, CliError> {
    let g1 = read_graph(&a.left)?;
    let g2 = read_graph(&a.right)?;
    let mut done = Done { seed: Some(a.seed), ..Default::default() };
    let mut verdict = "undecided";
    let mut invariants = None;
    if a.mode != CompareMode::Iso {
        let mut opts = DistinguishOptions {
            seed: a.seed,
            sample: a.sample,
            all: a.all,
            hints: compare_hints(&a.left, &a.right),
            deadline: ctx.deadline,
            ..Default::default()
        };
        if let Some(order) = &a.order {
            opts.order = order.clone();
        }
        let mut r = ctx.timed("distinguish", || distinguish(&g1, &g2, &opts));
        for step in &mut r.steps {
            if let Some(ms) = step.ms.take() {
                ctx.timings.insert(format!("distinguish.{}", step.invariant), ms);
            }
        }
        if a.validate {
            for c in &r.certificates {
                if let Err(e) = ctx.timed("validate", || c.validate(&g1, &g2)) {
                    eprintln!("certificate failed validation: {e}");
                    done.code = 1;
                }
            }
        }
        if r.distinguished() {
            verdict = "non_isomorphic";
        }
        invariants = Some(r);
    }
    let mut iso = None;
    if a.mode == CompareMode::Iso || (a.mode == CompareMode::Both && verdict == "undecided") {
        let opts = IsoOptions { deadline: ctx.deadline, max_nodes: a.max_nodes, ..Default::default() };
        let v = ctx.timed("isomorphism", || is_isomorphic(&g1, &g2, &opts));
        match &v {
            IsoVerdict::Isomorphic { mapping, .. } => {
                if !verify_mapping(&g1, &g2, mapping) {
                    eprintln!("returned bijection is not an isomorphism");
                    done.code = 1;
                }
                verdict = "isomorphic";
            }
            IsoVerdict::NonIsomorphic { .. } => verdict = "non_isomorphic",
            IsoVerdict::Undecided { .. } => {}
        }
        iso = Some(v);
    }
    if verdict == "undecided" && done.code == 0 {
        done.code = 3;
    }
    let report = json!({
        "schema": "hermsrg.compare.v1",
        "left": a.left,
        "right": a.right,
        "verdict": verdict,
        "invariants": invariants,
        "isomorphism": iso,
    });
    emit(&report, a.out.clone(), &mut done)?;
    Ok(done)
}

fn cmd_census(a: &CensusArgs, ctx: &mut Ctx) -> Result<Done, CliError> {
    let g = read_graph(&a.graph)?;
    let mut done = Done::default();
    let report = match a.what {
        What::Triples => {
            let source = match a.scope {
                Scope::Full => {
                    let est = estimated_triangles(&g);
                    if est > a.max_triangles {
                        return Err(CliError::Budget(format!(
                            "a full census would visit about {est} triangles (limit {}); use --scope sample or raise --max-triangles",
                            a.max_triangles
                        )));
                    }
                    TripleSource::AllAdjacent
                }
                Scope::Sample => {
                    done.seed = Some(a.seed);
                    TripleSource::Sampled { count: a.count, seed: a.seed }
                }
                Scope::Targeted => {
                    let vs = a.vertices.clone().ok_or_else(|| usage("--vertices is required for a targeted census"))?;
                    if let Some(&v) = vs.iter().find(|&&v| v >= g.n()) {
                        return Err(usage(format!("vertex {v} out of range")));
                    }
                    TripleSource::Explicit(triangles_through(&g, &vs))
                }
            };
            let c = ctx.timed("census", || triple_census(&g, &source));
            json!({"schema": CENSUS_SCHEMA, "graph": a.graph, "what": "triples", "scope": a.scope_name(), "vertices": a.vertices, "census": c})
        }
        What::Cliques => {
            if a.scope != Scope::Full {
                return Err(usage("clique censuses are always full"));
            }
            let opts = CliqueOptions { sizes: None, witnesses_per_size: a.witnesses, deadline: ctx.deadline };
            let c = ctx.timed("census", || maximal_cliques(&g, &opts));
            if !c.complete {
                done.code = 3;
            }
            json!({"schema": CENSUS_SCHEMA, "graph": a.graph, "what": "cliques", "scope": "full", "census": c})
        }
    };
    emit(&report, a.out.clone(), &mut done)?;
    Ok(done)
}

impl CensusArgs {
    fn scope_name(&self) -> &'static str {
        match self.scope {
            Scope::Full => "full",
            Scope::Targeted => "targeted",
            Scope::Sample => "sample",
        }
    }
}

fn estimated_triangles(g: &Graph) -> u64 {
    use rayon::prelude::*;
    (0..g.n())
        .into_par_iter()
        .map(|a| BitIter::new(g.row(a)).map(|b| crate::graphcore::common_neighbors(g, &[a, b]).0 as u64).sum::<u64>())
        .sum::<u64>()
        / 6
}

/// Every triangle through at least one of `vs`, once each.
fn triangles_through(g: &Graph, vs: &[usize]) -> Vec<[usize; 3]> {
    let mut seen = BTreeSet::new();
    for &v in vs {
        for b in g.neighbors(v) {
            let (_, ab) = crate::graphcore::common_neighbors(g, &[v, b]);
            for c in BitIter::new(&ab).filter(|&c| c > b) {
                let mut t = [v, b, c];
                t.sort_unstable();
                seen.insert(t);
            }
        }
    }
    seen.into_iter().collect()
}

#[derive(Serialize)]
struct ReplayReport {
    schema: &'static str,
    manifest: PathBuf,
    identical: bool,
    outputs: Vec<ReplayOutput>,
}

#[derive(Serialize)]
struct ReplayOutput {
    path: PathBuf,
    expected: String,
    found: Option<String>,
}

fn cmd_replay(path: &Path) -> Result<Done, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Load(format!("{}: {e}", path.display())))?;
    let manifest: RunManifest =
        serde_json::from_str(&text).map_err(|e| CliError::Load(format!("{}: {e}", path.display())))?;
    let args = std::iter::once("hermsrg".to_string()).chain(manifest.command.iter().cloned());
    let cli = Cli::try_parse_from(args).map_err(|e| usage(format!("manifest command does not parse: {e}")))?;
    let done = run(cli.command, false)?;
    let outputs: Vec<ReplayOutput> = manifest
        .outputs
        .iter()
        .map(|o| ReplayOutput { path: o.path.clone(), expected: o.sha256.clone(), found: sha256_file(&o.path).ok() })
        .collect();
    let identical = done.code == manifest.exit_code && outputs.iter().all(|o| o.found.as_ref() == Some(&o.expected));
    print!("{}", to_json(&ReplayReport { schema: "hermsrg.replay.v1", manifest: path.to_path_buf(), identical, outputs }));
    // the replay rewrote the outputs in place; the manifest itself stays as it was
    Ok(Done { code: if identical { 0 } else { 1 }, ..Default::default() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arguments_parse() {
        let cli = Cli::try_parse_from(["hermsrg", "build", "--n", "4", "--q", "2", "--kind", "nu", "--out", "g.g6"]).unwrap();
        assert!(matches!(cli.command, Command::Build(BuildArgs { n: 4, q: 2, kind: Kind::Nu, .. })));
        let cli = Cli::try_parse_from(["hermsrg", "compare", "a.g6", "b.g6", "--order", "cliques,triples"]).unwrap();
        let Command::Compare(c) = cli.command else { panic!() };
        assert_eq!(c.order, Some(vec![Invariant::Cliques, Invariant::Triples]));
        assert!(Cli::try_parse_from(["hermsrg", "build", "--n", "4"]).is_err());
    }

    #[test]
    fn targeted_triangles_are_deduplicated() {
        let g = Graph::complete(5);
        assert_eq!(triangles_through(&g, &[0, 1]).len(), 9);
    }
}

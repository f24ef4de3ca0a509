//! Batch front end. Every subcommand reads an optional JSON literal, runs one
//! computation and emits a JSON report (or a two-column table with `--table`).

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::{json, Map, Value};

use cpalg::abelian::{GElem, Hom};
use cpalg::cohom::{
    adem_inequalities, admissibility_filter, cohomology_fp, cohomology_fp_bar, cohomology_int_zpzp,
    filtration_first_page, transfer_exact_sequence, GroupTable, ZpZpModule,
};
use cpalg::covering::{
    build_anisotropic, build_anisotropic_twisted, build_isotropic, build_shrinking, obstruct_split_anisotropic,
    predict_extension_shape, small_h1_classifier, tower_bounds, validate_model, verify_anisotropic,
    verify_isotropic, verify_shrinking, CoveringModel,
};
use cpalg::cpmod::{
    build_block_module, classify_cohomological, decompose, fp_t_module_structure, random_module, tate_cohomology,
    BlockSpec, CpModule,
};
use cpalg::linkform::{
    diagonalize_odd, isotropy_class, normalize_two, parity_dimension, verify_diagonalization, FormedCpAction,
    LinkForm,
};
use cpalg::ring::{classify_trilinear, covering_case_analysis_z2z4, quaternion_ring_facts, ring_z2z4};
use cpalg::Error;

#[derive(Parser)]
#[command(name = "cpalg", version, about = "Exact computations for linking forms, C_p-modules and group cohomology")]
struct Cli {
    /// JSON literal consumed by the subcommand.
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// Write the JSON report here; stdout then shows the table.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Seed for randomized generators.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads for batch commands. Output does not depend on it.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    /// Highest cohomological degree.
    #[arg(long, global = true)]
    max_degree: Option<usize>,
    /// Print a table instead of JSON on stdout.
    #[arg(long, global = true)]
    table: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Linking forms.
    #[command(subcommand)]
    Form(FormCmd),
    /// Finite C_p-modules.
    #[command(subcommand)]
    Module(ModuleCmd),
    /// Finite-group cohomology.
    #[command(subcommand)]
    Cohom(CohomCmd),
    /// Covering models and their structure theorems.
    #[command(subcommand)]
    Covering(CoveringCmd),
    /// Cohomology rings and the small-homology classifications.
    #[command(subcommand)]
    Ring(RingCmd),
    /// Rank and exponent lower bounds along a class-field tower.
    Tower {
        #[arg(long)]
        r1: u64,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        depth: usize,
    },
}

#[derive(Args, Clone)]
struct FormSource {
    /// Use the hyperbolic plane over Z/p^k instead of an input literal.
    #[arg(long)]
    hyperbolic: Option<u64>,
    #[arg(long, default_value_t = 1)]
    k: u32,
}

#[derive(Subcommand)]
enum FormCmd {
    /// Orthogonal cyclic splitting (odd p) or 2-adic normal form.
    Diagonalize(FormSource),
    /// Isotropy class of an element.
    Isotropy {
        #[command(flatten)]
        src: FormSource,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        element: Vec<i64>,
    },
    /// dim Im(1 - zeta) for an orthogonal action; input {"form", "zeta"}.
    Parity,
    /// Predicted deck group for small first homology.
    Classify(FormSource),
}

#[derive(Subcommand)]
enum ModuleCmd {
    /// Tate cohomology of a module literal {"p","exponents","zeta"}.
    Tate,
    /// Cohomological classification.
    Classify,
    /// Cyclic-summand decomposition.
    Decompose,
    /// Build a module from a block chain and report its invariants.
    Build,
    /// F_p[T]-structure of the periodic resolution stages.
    Periodicity {
        #[arg(long, default_value_t = 6)]
        cap: u32,
    },
    /// Random modules with their Tate tables.
    Random {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 4)]
        max_log: u32,
        #[arg(long, default_value_t = 10)]
        count: usize,
    },
}

#[derive(Args, Clone)]
struct GroupSource {
    /// Named group: C8, C4xC2, D8, Q8, Q16, SD16. Overrides --input.
    #[arg(long)]
    group: Option<String>,
    #[arg(long, default_value_t = 2)]
    p: u64,
}

#[derive(Subcommand)]
enum CohomCmd {
    /// dim H^i(G; F_p) by the fastest applicable method.
    Betti {
        #[command(flatten)]
        src: GroupSource,
        /// Force the bar resolution.
        #[arg(long)]
        bar: bool,
    },
    /// The transfer exact sequence for each index-2 subgroup.
    ExactSequence(GroupSource),
    /// Betti-number inequalities for each index-p subgroup.
    Adem(GroupSource),
    /// First page of the filtration spectral sequence for each index-p subgroup.
    Filtration(GroupSource),
    /// Integral cohomology of a Z/p x Z/p module.
    Zpzp,
    /// Admissibility filter on a Z/p x Z/p module.
    Admissibility {
        #[arg(long, default_value_t = 6)]
        cap: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum BuildKind {
    Anisotropic,
    Twisted,
    Shrinking,
    Isotropic,
}

#[derive(Subcommand)]
enum CoveringCmd {
    /// Check the covering identities of a model literal.
    Validate,
    /// Anisotropic splitting; input {"model", "z"}.
    Anisotropic,
    /// Shrinking splitting of summand `--summand`.
    Shrinking {
        #[arg(long, default_value_t = 0)]
        summand: usize,
    },
    /// Isotropic splitting; input {"model", "pair"}.
    Isotropic,
    /// Split anisotropic obstruction; input {"form", "zeta"}.
    Split,
    /// Predicted extension shape; input {"form", "z"}.
    Shape,
    /// Construct a model and verify it.
    Build {
        #[arg(long, value_enum)]
        kind: BuildKind,
        #[arg(long, default_value_t = 2)]
        p: u64,
        /// Cyclic summands as k:a pairs, e.g. 2:1,1:3.
        #[arg(long, value_delimiter = ',')]
        blocks: Vec<String>,
        /// z unit (anisotropic), summand (shrinking), open exponent (isotropic, twisted).
        #[arg(long, default_value_t = 1)]
        param: i64,
    },
}

#[derive(Subcommand)]
enum RingCmd {
    /// Trilinear forms compatible with an orthonormal form on (Z/2)^3.
    ClassifyTrilinear,
    /// Relations in H^*(Q8), H^*(Q16), H^*(D8) over F_2.
    Quaternion,
    /// Ring structure for first homology Z/2 + Z/4.
    Z2z4,
    /// Homology of double covers for first homology Z/2 + Z/4.
    Covers {
        #[arg(long, default_value_t = 6)]
        n_max: u32,
    },
}

#[derive(Debug)]
enum Failure {
    Schema(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

struct Ctx {
    input: Option<PathBuf>,
    seed: u64,
    jobs: usize,
    max_degree: Option<usize>,
}

impl Ctx {
    fn read<T: DeserializeOwned>(&self) -> Outcome<T> {
        let path = self
            .input
            .as_ref()
            .ok_or_else(|| Failure::Schema("this command needs --input <file.json>".into()))?;
        let text = fs::read_to_string(path).map_err(|e| Failure::Schema(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| Failure::Schema(format!("{}: {e}", path.display())))
    }

    fn degree(&self, default: usize) -> usize {
        self.max_degree.unwrap_or(default)
    }

    fn form(&self, src: &FormSource) -> Outcome<LinkForm> {
        match src.hyperbolic {
            Some(p) => Ok(LinkForm::hyperbolic(p, src.k)?),
            None => self.read(),
        }
    }

    fn group(&self, src: &GroupSource) -> Outcome<GroupTable> {
        match &src.group {
            Some(name) => Ok(named_group(name)?),
            None => self.read(),
        }
    }
}

fn named_group(name: &str) -> Outcome<GroupTable> {
    let num = |s: &str| {
        s.parse::<usize>()
            .map_err(|_| Failure::Schema(format!("cannot parse group name {name:?}")))
    };
    let g = if let Some(rest) = name.strip_prefix("SD") {
        GroupTable::semidihedral(num(rest)?)?
    } else if let Some(rest) = name.strip_prefix('D') {
        GroupTable::dihedral(num(rest)?)?
    } else if let Some(rest) = name.strip_prefix('Q') {
        GroupTable::quaternion(num(rest)?)?
    } else if name.starts_with('C') {
        let orders = name
            .split('x')
            .map(|f| f.strip_prefix('C').map_or_else(|| num(f), num))
            .collect::<Outcome<Vec<_>>>()?;
        GroupTable::cyclic_product(&orders)?
    } else {
        return Err(Failure::Schema(format!("unknown group name {name:?}")));
    };
    Ok(g)
}

fn to_json<T: serde::Serialize>(x: &T) -> Outcome<Value> {
    serde_json::to_value(x).map_err(|e| Failure::Lib(Error::Resource(format!("report not representable: {e}"))))
}

fn report(kind: &str, body: Value) -> Value {
    let mut m = Map::new();
    m.insert("result".into(), Value::String(kind.into()));
    match body {
        Value::Object(o) => m.extend(o),
        other => {
            m.insert("value".into(), other);
        }
    }
    Value::Object(m)
}

fn big(x: u128) -> Value {
    u64::try_from(x).map_or_else(|_| Value::String(x.to_string()), Value::from)
}

#[derive(Deserialize)]
struct FormAction {
    form: LinkForm,
    zeta: Vec<Vec<i64>>,
}

impl FormAction {
    fn action(self) -> Outcome<FormedCpAction> {
        let g = self.form.group().clone();
        let z = Hom::new(g.clone(), g, self.zeta)?;
        Ok(FormedCpAction::new(self.form, z)?)
    }
}

#[derive(Deserialize)]
struct FormElement {
    form: LinkForm,
    z: GElem,
}

#[derive(Deserialize)]
struct ModelElement {
    model: CoveringModel,
    z: GElem,
}

#[derive(Deserialize)]
struct ModelPair {
    model: CoveringModel,
    pair: (usize, usize),
}

fn run_form(ctx: &Ctx, cmd: &FormCmd) -> Outcome<Value> {
    Ok(match cmd {
        FormCmd::Diagonalize(src) => {
            let f = ctx.form(src)?;
            if f.p() == 2 {
                report("two-adic-normal-form", json!({"form": to_json(&f)?, "normal_form": to_json(&normalize_two(&f)?)?}))
            } else {
                let d = diagonalize_odd(&f)?;
                verify_diagonalization(&f, &d)?;
                report("diagonalization", json!({"form": to_json(&f)?, "diagonalization": to_json(&d)?}))
            }
        }
        FormCmd::Isotropy { src, element } => {
            let f = ctx.form(src)?;
            let z = f.group().elem(element)?;
            report("isotropy", json!({"element": to_json(&z)?, "class": to_json(&isotropy_class(&f, &z)?)?}))
        }
        FormCmd::Parity => {
            let a = ctx.read::<FormAction>()?.action()?;
            let d = parity_dimension(&a)?;
            report("parity", json!({"dim_image_one_minus_zeta": d, "even": d % 2 == 0}))
        }
        FormCmd::Classify(src) => {
            let f = ctx.form(src)?;
            report("h1-prediction", json!({"prediction": to_json(&small_h1_classifier(&f))?}))
        }
    })
}

fn module_summary(m: &CpModule) -> Outcome<Value> {
    Ok(json!({
        "module": to_json(m)?,
        "tate": to_json(&tate_cohomology(m)?)?,
        "class": to_json(&classify_cohomological(m)?)?,
    }))
}

/// Module `i` of a batch comes from its own ChaCha stream, so the batch is
/// the same for every worker count.
fn random_batch(seed: u64, jobs: usize, p: u64, max_log: u32, count: usize) -> Outcome<Vec<Value>> {
    let one = |i: usize| -> Outcome<Value> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(i as u64);
        let m = random_module(&mut rng, p, max_log);
        let t = tate_cohomology(&m)?;
        Ok(json!({"module": to_json(&m)?, "tate": to_json(&t)?, "herbrand": t.h_odd == t.h_even}))
    };
    let jobs = jobs.clamp(1, count.max(1));
    let chunk = count.div_ceil(jobs).max(1);
    let parts: Vec<Outcome<Vec<Value>>> = std::thread::scope(|s| {
        let handles: Vec<_> = (0..count)
            .step_by(chunk)
            .map(|start| s.spawn(move || (start..(start + chunk).min(count)).map(one).collect()))
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });
    let mut out = Vec::with_capacity(count);
    for p in parts {
        out.extend(p?);
    }
    Ok(out)
}

fn run_module(ctx: &Ctx, cmd: &ModuleCmd) -> Outcome<Value> {
    Ok(match cmd {
        ModuleCmd::Tate => {
            let m: CpModule = ctx.read()?;
            report("tate", json!({"tate": to_json(&tate_cohomology(&m)?)?}))
        }
        ModuleCmd::Classify => report("cohomological-class", module_summary(&ctx.read()?)?),
        ModuleCmd::Decompose => {
            let m: CpModule = ctx.read()?;
            let parts = decompose(&m)?
                .iter()
                .map(module_summary)
                .collect::<Outcome<Vec<_>>>()?;
            report("decomposition", json!({"summands": parts}))
        }
        ModuleCmd::Build => {
            let spec: BlockSpec = ctx.read()?;
            report("block-module", module_summary(&build_block_module(&spec)?)?)
        }
        ModuleCmd::Periodicity { cap } => {
            let m: CpModule = ctx.read()?;
            report("periodicity", to_json(&fp_t_module_structure(&m, *cap)?)?)
        }
        ModuleCmd::Random { p, max_log, count } => {
            let batch = random_batch(ctx.seed, ctx.jobs, *p, *max_log, *count)?;
            let all = batch.iter().all(|v| v["herbrand"] == Value::Bool(true));
            report("random-modules", json!({"seed": ctx.seed, "herbrand_all": all, "modules": batch}))
        }
    })
}

fn subgroups_or_designated(g: &GroupTable, p: u64) -> Vec<Vec<usize>> {
    match g.subgroup() {
        Some(s) => vec![s.to_vec()],
        None => g.index_p_subgroups(p as usize).into_iter().map(|(s, _)| s).collect(),
    }
}

fn run_cohom(ctx: &Ctx, cmd: &CohomCmd) -> Outcome<Value> {
    Ok(match cmd {
        CohomCmd::Betti { src, bar } => {
            let g = ctx.group(src)?;
            let d = ctx.degree(4);
            let t = if *bar {
                cohomology_fp_bar(&g, src.p, d)?
            } else {
                cohomology_fp(&g, src.p, d)?
            };
            report("betti", json!({"order": g.order(), "table": to_json(&t)?}))
        }
        CohomCmd::ExactSequence(src) => {
            let g = ctx.group(src)?;
            let d = ctx.degree(3);
            let rows = subgroups_or_designated(&g, 2)
                .iter()
                .map(|s| Ok(json!({"subgroup": s, "sequence": to_json(&transfer_exact_sequence(&g, s, d)?)?})))
                .collect::<Outcome<Vec<_>>>()?;
            let exact = rows.iter().all(|r| r["sequence"]["exact"] == Value::Bool(true));
            report("transfer-exact-sequence", json!({"exact": exact, "subgroups": rows}))
        }
        CohomCmd::Adem(src) => {
            let g = ctx.group(src)?;
            let d = ctx.degree(3);
            let rows = subgroups_or_designated(&g, src.p)
                .iter()
                .map(|s| Ok(json!({"subgroup": s, "checks": to_json(&adem_inequalities(&g, s, src.p, d)?)?})))
                .collect::<Outcome<Vec<_>>>()?;
            report("betti-inequalities", json!({"p": src.p, "subgroups": rows}))
        }
        CohomCmd::Filtration(src) => {
            let g = ctx.group(src)?;
            let d = ctx.degree(3);
            let rows = subgroups_or_designated(&g, src.p)
                .iter()
                .map(|s| Ok(json!({"subgroup": s, "page": to_json(&filtration_first_page(&g, s, d)?)?})))
                .collect::<Outcome<Vec<_>>>()?;
            report("filtration", json!({"subgroups": rows}))
        }
        CohomCmd::Zpzp => {
            let w: ZpZpModule = ctx.read()?;
            report("integral-cohomology", to_json(&cohomology_int_zpzp(&w, ctx.degree(8))?)?)
        }
        CohomCmd::Admissibility { cap } => {
            let w: ZpZpModule = ctx.read()?;
            report("admissibility", to_json(&admissibility_filter(&w, *cap)?)?)
        }
    })
}

fn parse_blocks(raw: &[String]) -> Outcome<Vec<(u32, i128)>> {
    raw.iter()
        .filter(|s| !s.is_empty())
        .map(|s| {
            let (k, a) = s.split_once(':').unwrap_or((s, "1"));
            match (k.trim().parse(), a.trim().parse()) {
                (Ok(k), Ok(a)) => Ok((k, a)),
                _ => Err(Failure::Schema(format!("block {s:?} is not of the form k:a"))),
            }
        })
        .collect()
}

fn run_covering(ctx: &Ctx, cmd: &CoveringCmd) -> Outcome<Value> {
    Ok(match cmd {
        CoveringCmd::Validate => {
            let m: CoveringModel = ctx.read()?;
            report("covering-identities", to_json(&validate_model(&m)?)?)
        }
        CoveringCmd::Anisotropic => {
            let r: ModelElement = ctx.read()?;
            report("anisotropic-splitting", to_json(&verify_anisotropic(&r.model, &r.z)?)?)
        }
        CoveringCmd::Shrinking { summand } => {
            let m: CoveringModel = ctx.read()?;
            report("shrinking-splitting", to_json(&verify_shrinking(&m, *summand)?)?)
        }
        CoveringCmd::Isotropic => {
            let r: ModelPair = ctx.read()?;
            report("isotropic-splitting", to_json(&verify_isotropic(&r.model, r.pair)?)?)
        }
        CoveringCmd::Split => {
            let a = ctx.read::<FormAction>()?.action()?;
            report("split-anisotropic", to_json(&obstruct_split_anisotropic(&a)?)?)
        }
        CoveringCmd::Shape => {
            let r: FormElement = ctx.read()?;
            let shape = predict_extension_shape(&r.form, &r.z)?;
            report("extension-shape", json!({"shape": to_json(&shape)?, "expected_tate": shape.expected_tate()}))
        }
        CoveringCmd::Build { kind, p, blocks, param } => {
            let blocks = parse_blocks(blocks)?;
            let param_u32 = || {
                u32::try_from(*param).map_err(|_| Failure::Schema(format!("--param {param} must be nonnegative")))
            };
            let (model, verdict) = match kind {
                BuildKind::Anisotropic => {
                    let (m, z) = build_anisotropic(*p, &blocks, *param as i128)?;
                    let v = verify_anisotropic(&m, &z)?;
                    (m, v)
                }
                BuildKind::Twisted => {
                    let (m, z) = build_anisotropic_twisted(param_u32()?)?;
                    let v = verify_anisotropic(&m, &z)?;
                    (m, v)
                }
                BuildKind::Shrinking => {
                    let s = param_u32()? as usize;
                    let m = build_shrinking(*p, &blocks, s)?;
                    let v = verify_shrinking(&m, s)?;
                    (m, v)
                }
                BuildKind::Isotropic => {
                    let (m, pair) = build_isotropic(*p, &blocks, param_u32()?)?;
                    let v = verify_isotropic(&m, pair)?;
                    (m, v)
                }
            };
            let identities = validate_model(&model)?;
            report(
                "covering-model",
                json!({"model": to_json(&model)?, "identities": to_json(&identities)?, "verdict": to_json(&verdict)?}),
            )
        }
    })
}

fn default_orthonormal() -> Outcome<LinkForm> {
    Ok(LinkForm::diagonal(2, &[(1, 1), (1, 1), (1, 1)])?)
}

fn run_ring(ctx: &Ctx, cmd: &RingCmd) -> Outcome<Value> {
    Ok(match cmd {
        RingCmd::ClassifyTrilinear => {
            let f = if ctx.input.is_some() { ctx.read()? } else { default_orthonormal()? };
            report("trilinear-classification", to_json(&classify_trilinear(&f)?)?)
        }
        RingCmd::Quaternion => report("ring-presentations", json!({"rings": to_json(&quaternion_ring_facts()?)?})),
        RingCmd::Z2z4 => {
            let f = if ctx.input.is_some() {
                ctx.read()?
            } else {
                LinkForm::diagonal(2, &[(2, 1), (1, 1)])?
            };
            report("ring-presentation", to_json(&ring_z2z4(&f)?)?)
        }
        RingCmd::Covers { n_max } => report("double-cover-homology", to_json(&covering_case_analysis_z2z4(*n_max)?)?),
    })
}

fn run_tower(r1: u64, p: u64, depth: usize) -> Outcome<Value> {
    let t = tower_bounds(r1, p, depth)?;
    Ok(report(
        "tower-bounds",
        json!({
            "p": p,
            "rank_bounds": t.r.iter().map(|&x| big(x)).collect::<Vec<_>>(),
            "log_exponent_bounds": t.e.iter().map(|e| e.map_or(Value::Null, big)).collect::<Vec<_>>(),
            "exponent_bounds": t.e_value.iter().map(|e| e.map_or(Value::Null, big)).collect::<Vec<_>>(),
            "predicted_table": t.predicted_table.iter().map(|&x| big(x)).collect::<Vec<_>>(),
        }),
    ))
}

fn flatten(prefix: &str, v: &Value, rows: &mut Vec<(String, String)>) {
    let scalar = |v: &Value| match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    };
    match v {
        Value::Object(o) => {
            for (k, x) in o {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, x, rows);
            }
        }
        Value::Array(a) if a.iter().all(|x| !x.is_object() && !x.is_array()) => {
            rows.push((prefix.to_string(), a.iter().map(scalar).collect::<Vec<_>>().join(", ")));
        }
        Value::Array(a) => {
            for (i, x) in a.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), x, rows);
            }
        }
        other => rows.push((prefix.to_string(), scalar(other))),
    }
}

fn render_table(v: &Value) -> String {
    let mut rows = Vec::new();
    flatten("", v, &mut rows);
    let width = rows.iter().map(|r| r.0.len()).max().unwrap_or(0);
    rows.iter().map(|(k, x)| format!("{k:<width$}  {x}\n")).collect()
}

fn dispatch(cli: &Cli) -> Outcome<Value> {
    let ctx = Ctx {
        input: cli.input.clone(),
        seed: cli.seed,
        jobs: cli.jobs,
        max_degree: cli.max_degree,
    };
    match &cli.command {
        Command::Form(c) => run_form(&ctx, c),
        Command::Module(c) => run_module(&ctx, c),
        Command::Cohom(c) => run_cohom(&ctx, c),
        Command::Covering(c) => run_covering(&ctx, c),
        Command::Ring(c) => run_ring(&ctx, c),
        Command::Tower { r1, p, depth } => run_tower(*r1, *p, *depth),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (code, msg) = match dispatch(&cli) {
        Ok(v) => {
            let text = serde_json::to_string_pretty(&v).expect("values always serialize") + "\n";
            if let Some(path) = &cli.output {
                if let Err(e) = fs::write(path, &text) {
                    eprintln!("error: {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            }
            if cli.table || cli.output.is_some() {
                print!("{}", render_table(&v));
            } else {
                print!("{text}");
            }
            return ExitCode::SUCCESS;
        }
        Err(Failure::Schema(m)) => (2, format!("schema error: {m}")),
        Err(Failure::Lib(e @ Error::Invalid(_))) => (2, e.to_string()),
        Err(Failure::Lib(e @ Error::Resource(_))) => (3, e.to_string()),
        Err(Failure::Lib(e @ Error::Invariant(_))) => (4, e.to_string()),
    };
    eprintln!("error: {msg}");
    ExitCode::from(code)
}

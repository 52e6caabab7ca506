//! `supmetric`: build, classify and verify support-respecting weights.
//!
//! Exit codes: 0 success, 1 domain error or falsified check, 2 malformed input,
//! 3 cap exceeded.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use supmetric::codes::{macwilliams_verdict, weight_enumerator, LinearCode};
use supmetric::condsum::{reachability_report, reachability_search, ConditionSpace};
use supmetric::dot::{cube_dot, lpb_dot};
use supmetric::families::{classify_criterion, Family};
use supmetric::io::WeightJson;
use supmetric::lpb::{canonical_decompose, check_semidirect_lpb, LpbStructure};
use supmetric::oracles::{enumerate_criteria, enumerate_criteria_cached, support_ordering, MAX_CATALOG_N};
use supmetric::sweight::{
    check_semidirect_theorem, cube_from_sweight, is_combinatorial_shaped, is_standard_form, seeded_trail_check,
    standardize, validate_sweight, SWeightTable,
};
use supmetric::table1::compute_table1;
use supmetric::{Caps, Error, FqMatrix, FqVector};

#[derive(Parser)]
#[command(name = "supmetric", version, about = "Support-respecting weights over small finite fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Largest vector space (q^n) to materialize.
    #[arg(long, global = true)]
    cap_vectors: Option<u64>,
    /// Largest GL(n, q) to enumerate.
    #[arg(long, global = true)]
    cap_gl: Option<u64>,
    /// Largest number of subspaces to enumerate.
    #[arg(long, global = true)]
    cap_subspaces: Option<u64>,
    /// Directory for cached criterion catalogs.
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Seed for randomized trail checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write output here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Subcommand)]
enum Command {
    /// Regenerate the F_2^2 criterion table; fails if it differs from the published one.
    Table1,
    /// Weight of a vector under a structure or weight table.
    Weight {
        /// Structure or weight-table JSON (`-` for stdin).
        input: PathBuf,
        /// Digits, coordinate 1 first, e.g. `011`.
        vector: String,
    },
    /// Rank-compress a weight table to standard form.
    Standardize { input: PathBuf },
    /// Validate a weight table and place it in the criterion catalog and families.
    Classify { input: PathBuf },
    /// Check the isometry group decomposition for a structure or weight table.
    Isometries { input: PathBuf },
    /// Weight enumerator of a code.
    Enumerator { structure: PathBuf, code: PathBuf },
    /// Empirical MacWilliams verdict and the UDP, per dimension.
    Macwilliams {
        structure: PathBuf,
        /// Only this dimension; all of 0..=n otherwise.
        #[arg(long)]
        k: Option<usize>,
    },
    /// Map a code isometrically onto a level-split code.
    Decompose { structure: PathBuf, code: PathBuf },
    /// Reach a criterion by conditional sums of poset and combinatorial weights.
    Reach {
        /// Weight-table JSON whose criterion is the target; omit with `--n` for a report.
        target: Option<PathBuf>,
        #[arg(long, default_value_t = 2)]
        depth: usize,
        /// Report every class on F_2^n.
        #[arg(long)]
        n: Option<usize>,
        /// Also allow every upward-closed support condition (n ≤ 2).
        #[arg(long)]
        upsets: bool,
    },
    /// List every decoding criterion on F_q^n.
    Criteria {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        q: u32,
        /// Do not identify criteria that differ by relabeling coordinates.
        #[arg(long)]
        labeled: bool,
    },
}

enum Failure {
    Lib(Error),
    Input(String),
    Falsified(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Lib(Error::CapExceeded { .. }) => 3,
            Failure::Lib(Error::Parse(_)) | Failure::Input(_) => 2,
            Failure::Lib(_) | Failure::Falsified(_) => 1,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Lib(e) => e.to_string(),
            Failure::Input(m) | Failure::Falsified(m) => m.clone(),
        }
    }
}

type Outcome = Result<(), Failure>;

enum Input {
    Structure(LpbStructure),
    Table(SWeightTable),
}

fn read_text(path: &Path) -> Result<String, Failure> {
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(|e| Failure::Input(format!("stdin: {e}")))?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn read_json(path: &Path) -> Result<Value, Failure> {
    serde_json::from_str(&read_text(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn parse<T: serde::de::DeserializeOwned>(v: Value, path: &Path) -> Result<T, Failure> {
    serde_json::from_value(v).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn read_input(path: &Path, caps: &Caps) -> Result<Input, Failure> {
    let v = read_json(path)?;
    if v.get("weights").is_some() {
        let j: WeightJson = parse(v, path)?;
        return Ok(Input::Table(j.into_table(caps)?));
    }
    if v.get("pi").is_some() || v.get("relations").is_some() {
        return Ok(Input::Structure(parse(v, path)?));
    }
    Err(Failure::Input(format!("{}: neither a structure nor a weight table", path.display())))
}

fn read_table(path: &Path, caps: &Caps) -> Result<SWeightTable, Failure> {
    match read_input(path, caps)? {
        Input::Table(t) => Ok(t),
        Input::Structure(_) => Err(Failure::Input(format!("{}: expected a weight table", path.display()))),
    }
}

fn read_structure(path: &Path, caps: &Caps) -> Result<LpbStructure, Failure> {
    match read_input(path, caps)? {
        Input::Structure(s) => Ok(s),
        Input::Table(_) => Err(Failure::Input(format!("{}: expected a structure", path.display()))),
    }
}

/// A code as `{"q","n","entries"}` generator rows.
fn read_code(path: &Path) -> Result<LinearCode, Failure> {
    let m: FqMatrix = parse(read_json(path)?, path)?;
    Ok(LinearCode::new(&m))
}

fn matrix_lines(m: &FqMatrix) -> String {
    (0..m.rows()).map(|r| format!("  {}", m.row(r))).collect::<Vec<_>>().join("\n")
}

struct Ctx {
    format: Format,
    caps: Caps,
    cache_dir: Option<PathBuf>,
    seed: u64,
    out: Box<dyn Write>,
}

impl Ctx {
    fn emit(&mut self, text: &str) -> Outcome {
        self.out.write_all(text.as_bytes()).map_err(|e| Failure::Input(format!("output: {e}")))?;
        if !text.ends_with('\n') {
            self.out.write_all(b"\n").map_err(|e| Failure::Input(format!("output: {e}")))?;
        }
        Ok(())
    }

    fn json(&mut self, v: &impl serde::Serialize) -> Outcome {
        let text = serde_json::to_string_pretty(v).map_err(|e| Failure::Lib(Error::Internal(e.to_string())))?;
        self.emit(&text)
    }

    fn no_dot(&self, what: &str) -> Outcome {
        if self.format == Format::Dot {
            return Err(Failure::Input(format!("{what} has no DOT output")));
        }
        Ok(())
    }
}

fn cmd_table1(ctx: &mut Ctx) -> Outcome {
    ctx.no_dot("table1")?;
    let t = compute_table1(&ctx.caps)?;
    match ctx.format {
        Format::Json => ctx.json(&json!({ "rows": t.rows, "matches_published": t.matches_published() }))?,
        _ => ctx.emit(&t.to_string())?,
    }
    match t.mismatch() {
        None => Ok(()),
        Some(e) => Err(Failure::Falsified(e.to_string())),
    }
}

fn cmd_weight(ctx: &mut Ctx, input: &Path, vector: &str) -> Outcome {
    let input = read_input(input, &ctx.caps)?;
    let (q, n) = match &input {
        Input::Structure(s) => (s.q(), s.n()),
        Input::Table(t) => (t.q(), t.n()),
    };
    let v = FqVector::parse(q, vector)?;
    if v.len() != n {
        return Err(Failure::Lib(Error::Dimension(format!("vector {vector} is not of length {n}"))));
    }
    let w = match &input {
        Input::Structure(s) => s.weight(&v)?,
        Input::Table(t) => t.weight(&v)?,
    };
    match ctx.format {
        Format::Json => ctx.json(&json!({ "vector": vector, "weight": w })),
        Format::Text => ctx.emit(&w.to_string()),
        Format::Dot => match &input {
            Input::Structure(s) => ctx.emit(&lpb_dot(s)),
            Input::Table(t) => ctx.emit(&cube_dot(&cube_from_sweight(t)?)),
        },
    }
}

fn cmd_standardize(ctx: &mut Ctx, input: &Path) -> Outcome {
    let t = read_table(input, &ctx.caps)?;
    let cube = standardize(&cube_from_sweight(&t)?)?;
    match ctx.format {
        Format::Dot => ctx.emit(&cube_dot(&cube)),
        _ => {
            let std = cube.weight_table(t.space())?;
            ctx.json(&WeightJson::from(&std))
        }
    }
}

fn cmd_classify(ctx: &mut Ctx, input: &Path) -> Outcome {
    let t = read_table(input, &ctx.caps)?;
    if ctx.format == Format::Dot {
        return ctx.emit(&cube_dot(&cube_from_sweight(&t)?));
    }
    let report = validate_sweight(&t);
    let mut out = json!({ "n": t.n(), "q": t.q(), "valid": report.valid, "violation": report.violation });
    if report.valid {
        let ordering = support_ordering(&t)?;
        let cube = cube_from_sweight(&t)?;
        out["cube"] = json!({
            "standard_form": is_standard_form(&cube)?,
            "combinatorial_shaped": is_combinatorial_shaped(&cube),
            "trail_mismatch": seeded_trail_check(&cube, 100, ctx.seed),
        });
        if t.n() <= MAX_CATALOG_N {
            let labeled = enumerate_criteria(t.n(), t.q(), false)?;
            let quotient = enumerate_criteria(t.n(), t.q(), true)?;
            let li = labeled.classify(&t)?;
            let qi = quotient.classify(&t)?;
            out["criterion"] = json!(li.map(|i| labeled.classes[i].describe(t.n())));
            out["class"] = json!(qi.map(|i| quotient.classes[i].describe(t.n())));
            out["class_index"] = json!(qi);
            out["classes"] = json!(quotient.len());
        }
        out["ranks"] = json!(ordering.ranks());
        if t.n() <= ctx.caps.family_n {
            let flags = classify_criterion(&t, &ctx.caps)?;
            out["families"] = json!(Family::ALL
                .iter()
                .filter(|&&f| flags.get(f))
                .map(|f| f.symbol())
                .collect::<Vec<_>>());
        }
    }
    if ctx.format == Format::Json {
        return ctx.json(&out);
    }
    let mut lines = vec![format!("valid S-weight: {}", report.valid)];
    if let Some(v) = &report.violation {
        lines.push(format!("violation: {v}"));
    }
    for key in ["class", "criterion"] {
        if let Some(s) = out.get(key).and_then(Value::as_str) {
            lines.push(format!("{key}: {s}"));
        }
    }
    if let Some(c) = out.get("cube") {
        lines.push(format!("standard form: {}", c["standard_form"]));
        lines.push(format!("arcs in {{0,1}}: {}", c["combinatorial_shaped"]));
        lines.push(format!("random trails agree: {}", c["trail_mismatch"].is_null()));
    }
    if let Some(f) = out.get("families").and_then(Value::as_array) {
        let names: Vec<&str> = f.iter().filter_map(Value::as_str).collect();
        lines.push(format!("families: {}", if names.is_empty() { "none".to_string() } else { names.join(", ") }));
    }
    ctx.emit(&lines.join("\n"))
}

fn cmd_isometries(ctx: &mut Ctx, input: &Path) -> Outcome {
    match read_input(input, &ctx.caps)? {
        Input::Structure(s) => {
            if ctx.format == Format::Dot {
                return ctx.emit(&lpb_dot(&s));
            }
            let r = check_semidirect_lpb(&s, &ctx.caps)?;
            if ctx.format == Format::Json {
                ctx.json(&r)?;
            } else {
                ctx.emit(&format!(
                    "|GL| = {}\n|N| = {} ({} found in GL)\n|Aut| = {}\nunique factorization: {}\nN normal: {}\nGL = N ⋊ Aut: {}",
                    r.gl_order, r.n_order, r.n_in_group, r.aut_order, r.unique_factorization, r.n_normal, r.holds
                ))?;
            }
            if r.holds {
                Ok(())
            } else {
                Err(Failure::Falsified(r.failures.join("; ")))
            }
        }
        Input::Table(t) => {
            if ctx.format == Format::Dot {
                return ctx.emit(&cube_dot(&cube_from_sweight(&t)?));
            }
            let r = check_semidirect_theorem(&t, &ctx.caps)?;
            if ctx.format == Format::Json {
                return ctx.json(&r);
            }
            ctx.emit(&format!(
                "|GL| = {}\ngenerated = {}\ncube automorphisms = {}\ndomination maps = {}\nverdict: {:?}",
                r.gl_order, r.generated_order, r.cube_automorphisms, r.domination_maps, r.verdict
            ))
        }
    }
}

fn cmd_enumerator(ctx: &mut Ctx, structure: &Path, code: &Path) -> Outcome {
    ctx.no_dot("enumerator")?;
    let s = read_structure(structure, &ctx.caps)?;
    let c = read_code(code)?;
    let w = weight_enumerator(&c, &s, &ctx.caps)?;
    match ctx.format {
        Format::Json => ctx.json(&json!({ "code": c.to_string(), "coefficients": w })),
        _ => ctx.emit(&w.to_string()),
    }
}

fn cmd_macwilliams(ctx: &mut Ctx, structure: &Path, k: Option<usize>) -> Outcome {
    ctx.no_dot("macwilliams")?;
    let s = read_structure(structure, &ctx.caps)?;
    let ks: Vec<usize> = match k {
        Some(k) if k > s.n() => return Err(Failure::Lib(Error::Dimension(format!("k = {k} exceeds n = {}", s.n())))),
        Some(k) => vec![k],
        None => (0..=s.n()).collect(),
    };
    let udp = s.udp_check()?;
    let verdicts = ks.iter().map(|&k| macwilliams_verdict(&s, k, &ctx.caps)).collect::<Result<Vec<_>, _>>()?;
    if ctx.format == Format::Json {
        let per_k: Vec<Value> = ks.iter().zip(&verdicts).map(|(k, v)| json!({ "k": k, "verdict": v })).collect();
        return ctx.json(&json!({
            "hierarchical": s.poset().is_hierarchical(),
            "udp": udp,
            "admits": verdicts.iter().all(|v| v.admits()),
            "per_k": per_k,
        }));
    }
    let mut lines = vec![
        format!("hierarchical: {}", s.poset().is_hierarchical()),
        format!("UDP: {}", udp.holds),
    ];
    for (k, v) in ks.iter().zip(&verdicts) {
        match v {
            supmetric::codes::MacWilliamsVerdict::AdmitsEmpirically { codes, classes } => {
                lines.push(format!("k = {k}: admits ({codes} codes, {classes} enumerator classes)"))
            }
            supmetric::codes::MacWilliamsVerdict::Counterexample { first, second, enumerator, first_dual, second_dual } => {
                lines.push(format!(
                    "k = {k}: counterexample {first} and {second} share {enumerator}; duals {first_dual} vs {second_dual}"
                ))
            }
        }
    }
    ctx.emit(&lines.join("\n"))
}

fn cmd_decompose(ctx: &mut Ctx, structure: &Path, code: &Path) -> Outcome {
    let s = read_structure(structure, &ctx.caps)?;
    if ctx.format == Format::Dot {
        return ctx.emit(&lpb_dot(&s));
    }
    let c = read_code(code)?;
    let d = canonical_decompose(&s, &c, &ctx.caps)?;
    if ctx.format == Format::Json {
        return ctx.json(&d);
    }
    let mut lines = vec!["map (rows):".to_string(), matrix_lines(d.map.matrix()), format!("code: {}", d.code)];
    for (l, sc) in d.summands.iter().enumerate() {
        lines.push(format!("level {}: {sc}", l + 1));
    }
    ctx.emit(&lines.join("\n"))
}

fn cmd_reach(ctx: &mut Ctx, target: Option<&Path>, depth: usize, n: Option<usize>, upsets: bool) -> Outcome {
    ctx.no_dot("reach")?;
    let space = if upsets { ConditionSpace::ThresholdsAndUpsets } else { ConditionSpace::Thresholds };
    let gens = [Family::Poset, Family::Combinatorial];
    match (target, n) {
        (Some(path), None) => {
            let t = read_table(path, &ctx.caps)?;
            let ordering = support_ordering(&t)?;
            let found = reachability_search(&ordering, &gens, depth, space, &ctx.caps)?;
            let Some(d) = found else {
                return Err(Failure::Falsified(format!("not reached within depth {depth}")));
            };
            match ctx.format {
                Format::Json => ctx.json(&d),
                _ => ctx.emit(&format!("depth {}: {d}\nweights by support: {:?}", d.depth(), d.support_weights())),
            }
        }
        (None, Some(n)) => {
            let r = reachability_report(n, &gens, depth, space, &ctx.caps)?;
            if ctx.format == Format::Json {
                return ctx.json(&r);
            }
            let mut lines = vec![format!("reached {}/{} classes on F_2^{n} within depth {depth}", r.reached(), r.classes.len())];
            for c in &r.classes {
                match (&c.depth, &c.derivation) {
                    (Some(d), Some(how)) => lines.push(format!("{}: depth {d}: {how}", c.criterion)),
                    _ => lines.push(format!("{}: not reached", c.criterion)),
                }
            }
            ctx.emit(&lines.join("\n"))
        }
        _ => Err(Failure::Input("give either a target file or --n".into())),
    }
}

fn cmd_criteria(ctx: &mut Ctx, n: usize, q: u32, labeled: bool) -> Outcome {
    ctx.no_dot("criteria")?;
    let cat = match &ctx.cache_dir {
        Some(dir) => enumerate_criteria_cached(n, q, !labeled, dir)?,
        None => enumerate_criteria(n, q, !labeled)?,
    };
    if ctx.format == Format::Json {
        return ctx.json(&cat);
    }
    let mut lines = vec![format!("{} criteria on F_{q}^{n}", cat.len())];
    lines.extend(cat.classes.iter().enumerate().map(|(i, c)| format!("{:>4}  {}", i + 1, c.describe(n))));
    ctx.emit(&lines.join("\n"))
}

fn run(cli: Cli) -> Outcome {
    let caps = Caps::default().with_overrides(cli.cap_vectors, cli.cap_gl, cli.cap_subspaces)?;
    let out: Box<dyn Write> = match &cli.output {
        Some(p) => Box::new(fs::File::create(p).map_err(|e| Failure::Input(format!("{}: {e}", p.display())))?),
        None => Box::new(io::stdout().lock()),
    };
    let mut ctx = Ctx { format: cli.format, caps, cache_dir: cli.cache_dir, seed: cli.seed, out };
    match &cli.command {
        Command::Table1 => cmd_table1(&mut ctx),
        Command::Weight { input, vector } => cmd_weight(&mut ctx, input, vector),
        Command::Standardize { input } => cmd_standardize(&mut ctx, input),
        Command::Classify { input } => cmd_classify(&mut ctx, input),
        Command::Isometries { input } => cmd_isometries(&mut ctx, input),
        Command::Enumerator { structure, code } => cmd_enumerator(&mut ctx, structure, code),
        Command::Macwilliams { structure, k } => cmd_macwilliams(&mut ctx, structure, *k),
        Command::Decompose { structure, code } => cmd_decompose(&mut ctx, structure, code),
        Command::Reach { target, depth, n, upsets } => cmd_reach(&mut ctx, target.as_deref(), *depth, *n, *upsets),
        Command::Criteria { n, q, labeled } => cmd_criteria(&mut ctx, *n, *q, *labeled),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("supmetric: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

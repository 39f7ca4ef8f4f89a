mod cache;
mod render;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};
use thiserror::Error;

use superchar::characters::{gl_k2_character, irreducible_character, tilting_character, truncate_character, CharError, FormalCharacter, GlK2Borel};
use superchar::dynkin::{odd_reflect, parse_sequence, BorelOrdering, DynkinError};
use superchar::fock::{hecke_label, FockError, FockSpace, Kind, Monomial, Shape};
use superchar::hecke::{HeckeError, KlTable, Perm};
use superchar::lusztig::BasisKind;
use superchar::poly::LaurentPoly;
use superchar::weight::{from_weight, to_weight, DominantTuple, Flavor, Ranks, Weight, WeightError};

use cache::Cache;

const MAX_DEPTH: u32 = 16;

#[derive(Debug, Error)]
enum CliError {
    #[error("invalid input: {0}")]
    Usage(String),
    #[error("resource limit: {0}")]
    Resource(String),
    #[error("integrity failure: {0}")]
    Integrity(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Resource(_) => 2,
            CliError::Integrity(_) => 3,
        }
    }
}

impl From<WeightError> for CliError {
    fn from(e: WeightError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<DynkinError> for CliError {
    fn from(e: DynkinError) -> Self {
        match e {
            DynkinError::TransportMismatch { .. } => CliError::Integrity(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<FockError> for CliError {
    fn from(e: FockError) -> Self {
        match e {
            FockError::WindowExhausted { .. } => CliError::Resource(e.to_string()),
            FockError::Integrity(_) | FockError::Lusztig(_) => CliError::Integrity(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<HeckeError> for CliError {
    fn from(e: HeckeError) -> Self {
        match e {
            HeckeError::Parity(_) | HeckeError::Lusztig(_) => CliError::Integrity(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<CharError> for CliError {
    fn from(e: CharError) -> Self {
        match e {
            CharError::Fock(f) => f.into(),
            CharError::Dynkin(d) => d.into(),
            CharError::Integrity(_) => CliError::Integrity(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "superchar", version, about = "Characters of general linear Lie superalgebras")]
struct Cli {
    /// Cache file for KL polynomials and transition tables.
    #[arg(long, global = true, env = "SUPERCHAR_CACHE")]
    cache: Option<PathBuf>,
    /// Do not read or write the cache.
    #[arg(long, global = true)]
    no_cache: bool,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Engine {
    Fock,
    Hecke,
    Both,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Basis {
    Canonical,
    Dual,
}

impl Basis {
    fn kind(self) -> BasisKind {
        match self {
            Basis::Canonical => BasisKind::Canonical,
            Basis::Dual => BasisKind::Dual,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Basis::Canonical => "canonical",
            Basis::Dual => "dual",
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Wedge {
    V,
    W,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Kazhdan-Lusztig polynomial P_{x,w}, or its parabolic version.
    Kl {
        #[arg(long)]
        x: Perm,
        #[arg(long)]
        w: Perm,
        /// Rank check: both permutations must lie in S_n.
        #[arg(long)]
        n: Option<usize>,
        /// Simple reflections generating the parabolic subgroup, e.g. `1,3`.
        #[arg(long, value_delimiter = ',')]
        parabolic: Option<Vec<usize>>,
    },
    /// Transition matrix of the block of a Fock-space monomial.
    Cb {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
        /// Kind of the two outer wedge factors.
        #[arg(long, value_enum, default_value_t = Wedge::W)]
        wedge: Wedge,
        /// Monomial such as `w[3,1]|v[2]|w[5]`.
        #[arg(long)]
        monomial: String,
        /// Index window `lo,hi`; defaults to two steps past the monomial.
        #[arg(long, allow_hyphen_values = true)]
        window: Option<String>,
        #[arg(long, value_enum, default_value_t = Basis::Canonical)]
        basis: Basis,
        #[arg(long, value_enum, default_value_t = Engine::Fock)]
        engine: Engine,
    },
    /// Irreducible character, from a tuple and flavor or a gl(k|2) weight.
    Char {
        #[command(flatten)]
        module: ModuleArgs,
        /// gl(k|2) highest weight, e.g. `level=0;-1/2:1,bar1:0,1/2:0`.
        #[arg(long, conflicts_with = "tuple", requires = "k")]
        weight: Option<Weight>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, default_value = "standard")]
        borel: String,
    },
    /// Tilting character and its parabolic Verma flag.
    Tilting {
        #[command(flatten)]
        module: ModuleArgs,
    },
    /// Odd-reflection trace of a highest weight along a sequence.
    Reflect {
        /// `bs:n`, `c:n`, `dc:n`, `ds:n`, `glk2:k` or a comma-separated root list.
        #[arg(long)]
        sequence: String,
        #[arg(long, conflicts_with = "weight")]
        tuple: Option<DominantTuple>,
        #[arg(long)]
        weight: Option<Weight>,
        /// Starting ordering, `≺`- or `<`-separated; inferred from the sequence when omitted.
        #[arg(long)]
        borel: Option<BorelOrdering>,
        #[arg(long)]
        n: Option<u32>,
    },
    /// Weight of a tuple in a flavor, or the tuple of a dominant weight.
    TupleWeight {
        #[arg(long, conflicts_with = "weight")]
        tuple: Option<DominantTuple>,
        #[arg(long, requires = "k")]
        weight: Option<Weight>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        flavor: Flavor,
    },
    /// Irreducible character truncated to ranks (m, n).
    Truncate {
        #[command(flatten)]
        module: ModuleArgs,
        /// `both` also computes directly at (m, n) and compares.
        #[arg(long, value_enum, default_value_t = Engine::Fock)]
        engine: Engine,
    },
}

#[derive(Args, Debug)]
struct ModuleArgs {
    #[arg(long)]
    tuple: Option<DominantTuple>,
    #[arg(long, default_value = "bar")]
    flavor: Flavor,
    #[arg(long)]
    m: Option<u32>,
    #[arg(long)]
    n: Option<u32>,
    #[arg(long, default_value_t = 4)]
    depth: u32,
}

impl ModuleArgs {
    fn depth(&self) -> Result<u32, CliError> {
        if self.depth > MAX_DEPTH {
            return Err(CliError::Usage(format!("depth {} exceeds {MAX_DEPTH}", self.depth)));
        }
        Ok(self.depth)
    }

    fn tuple(&self) -> Result<&DominantTuple, CliError> {
        self.tuple.as_ref().ok_or_else(|| CliError::Usage("--tuple is required".into()))
    }

    /// Explicit ranks, or one more than each partition length.
    fn ranks(&self, t: &DominantTuple) -> Ranks {
        Ranks::finite(self.m.unwrap_or(t.minus.len() as u32 + 1), self.n.unwrap_or(t.plus.len() as u32 + 1))
    }
}

/// Command output: a JSON document and its text rendering.
struct Output {
    json: Value,
    text: String,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let mut cache = if cli.no_cache {
        Cache::disabled()
    } else {
        cli.cache.clone().or_else(cache::default_path).map_or_else(Cache::disabled, Cache::open)
    };
    let result = run(&cli.command, &mut cache);
    cache.save();
    for w in &cache.warnings {
        eprintln!("warning: {w}");
    }
    match result {
        Ok(out) => {
            match cli.format {
                Format::Json => println!("{}", render::to_string(&out.json)),
                Format::Text => print!("{}", out.text),
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}

fn run(cmd: &Command, cache: &mut Cache) -> Result<Output, CliError> {
    match cmd {
        Command::Kl { x, w, n, parabolic } => kl(x, w, *n, parabolic.as_deref(), cache),
        Command::Cb { m, k, n, wedge, monomial, window, basis, engine } => {
            let kind = match wedge {
                Wedge::V => Kind::V,
                Wedge::W => Kind::W,
            };
            let shape = Shape { left: (kind, *m), k: *k, right: (kind, *n) };
            cb(shape, monomial, window.as_deref(), *basis, *engine, cache)
        }
        Command::Char { module, weight: Some(mu), k, borel, .. } => gl_k2(mu, k.unwrap_or(0), borel, module.depth()?),
        Command::Char { module, .. } => {
            let t = module.tuple()?;
            let ch = irreducible_character(t, module.flavor, module.ranks(t), module.depth()?)?.character;
            Ok(character_output(&ch))
        }
        Command::Tilting { module } => tilting(module),
        Command::Reflect { sequence, tuple, weight, borel, n } => reflect(sequence, tuple.as_ref(), weight.as_ref(), borel.as_ref(), *n),
        Command::TupleWeight { tuple, weight, k, flavor } => tuple_weight(tuple.as_ref(), weight.as_ref(), *k, *flavor),
        Command::Truncate { module, engine } => truncate(module, *engine),
    }
}

fn kl(x: &Perm, w: &Perm, n: Option<usize>, j: Option<&[usize]>, cache: &mut Cache) -> Result<Output, CliError> {
    if let Some(n) = n {
        if x.n() != n || w.n() != n {
            return Err(CliError::Usage(format!("{x} and {w} must both lie in S{n}")));
        }
    }
    let key = match j {
        Some(j) => format!("pkl:{j:?}:{x}:{w}"),
        None => format!("kl:{x}:{w}"),
    };
    let p = match cache.get(&key).and_then(render::poly_from) {
        Some(p) => p,
        None => {
            let table = KlTable::new();
            let p = match j {
                Some(j) => table.parabolic_kl(j, x, w)?,
                None => table.kl_polynomial(x, w)?,
            };
            cache.put(key, render::poly(&p));
            p
        }
    };
    let mut json = json!({ "x": x.to_string(), "w": w.to_string(), "poly": render::poly(&p) });
    if let Some(j) = j {
        json["parabolic"] = json!(j);
    }
    Ok(Output { json, text: format!("{p}\n") })
}

fn parse_window(s: &str) -> Result<(i32, i32), CliError> {
    let bad = || CliError::Usage(format!("window `{s}` must look like lo,hi"));
    let (lo, hi) = s.split_once(',').ok_or_else(bad)?;
    let (lo, hi) = (lo.trim().parse().map_err(|_| bad())?, hi.trim().parse().map_err(|_| bad())?);
    if lo > hi {
        return Err(bad());
    }
    Ok((lo, hi))
}

type Table = BTreeMap<Monomial, BTreeMap<Monomial, LaurentPoly>>;

fn cb(shape: Shape, monomial: &str, window: Option<&str>, basis: Basis, engine: Engine, cache: &mut Cache) -> Result<Output, CliError> {
    let lam = shape.parse(monomial)?;
    let (lo, hi) = match window {
        Some(w) => parse_window(w)?,
        None => (lam.0.iter().min().map_or(0, |v| v - 2), lam.0.iter().max().map_or(0, |v| v + 2)),
    };
    let space = FockSpace::new(shape, lo, hi);
    let block = space.block_of(&lam)?;
    let shape_name = format!("{}^{}|v^{}|{}^{}", shape.left.0.letter(), shape.left.1, shape.k, shape.right.0.letter(), shape.right.1);
    let content: Vec<String> = space.content(&lam).iter().map(|(i, c)| format!("{i}:{c}")).collect();
    let key = |engine: &str| format!("cb:{engine}:{shape_name}:{lo},{hi}:{}:{}", basis.name(), content.join(","));

    let fock = || -> Result<Table, CliError> {
        let mut t = Table::new();
        for l in &block.monomials {
            t.insert(l.clone(), block.column(l, basis.kind())?);
        }
        Ok(t)
    };
    let hecke = || -> Result<Table, CliError> {
        if !shape.is_all_v() {
            return Err(CliError::Usage("the Hecke engine needs --wedge v".into()));
        }
        let kl = KlTable::new();
        let mut t = Table::new();
        for l in &block.monomials {
            let (w, j) = hecke_label(shape, l).ok_or_else(|| CliError::Usage(format!("{} is not in a regular block", shape.format(l))))?;
            let module = kl.module(shape.len(), &j)?;
            let mut col = BTreeMap::new();
            for mu in &block.monomials {
                let (x, _) = hecke_label(shape, mu).ok_or_else(|| CliError::Usage(format!("{} is not in a regular block", shape.format(mu))))?;
                let p = module.entry(&x, &w, basis.kind())?;
                if !p.is_zero() {
                    col.insert(mu.clone(), p);
                }
            }
            t.insert(l.clone(), col);
        }
        Ok(t)
    };
    let mut cached = |name: &str, compute: &dyn Fn() -> Result<Table, CliError>| -> Result<Table, CliError> {
        let key = key(name);
        if let Some(t) = cache.get(&key).and_then(|v| table_from(&space, v)) {
            return Ok(t);
        }
        let t = compute()?;
        cache.put(key, table_json(&shape, &t));
        Ok(t)
    };
    let table = match engine {
        Engine::Fock => cached("fock", &fock)?,
        Engine::Hecke => cached("hecke", &hecke)?,
        Engine::Both => {
            let (a, b) = (cached("fock", &fock)?, cached("hecke", &hecke)?);
            if a != b {
                return Err(CliError::Integrity(format!("Fock and Hecke transition matrices differ on the block of {monomial}")));
            }
            a
        }
    };

    let monomials: Vec<String> = block.monomials.iter().map(|m| shape.format(m)).collect();
    let json = json!({
        "shape": shape_name,
        "window": [lo, hi],
        "basis": basis.name(),
        "monomials": monomials,
        "columns": table_json(&shape, &table),
    });
    let mut text = String::new();
    for (l, col) in &table {
        for (mu, p) in col {
            text.push_str(&format!("{}\t{}\t{}\n", shape.format(mu), shape.format(l), p));
        }
    }
    Ok(Output { json, text })
}

fn table_json(shape: &Shape, t: &Table) -> Value {
    let cols: Map<String, Value> = t
        .iter()
        .map(|(l, col)| (shape.format(l), Value::Object(col.iter().map(|(mu, p)| (shape.format(mu), render::poly(p))).collect())))
        .collect();
    Value::Object(cols)
}

fn table_from(space: &FockSpace, v: &Value) -> Option<Table> {
    let mut t = Table::new();
    for (l, col) in v.as_object()? {
        let mut c = BTreeMap::new();
        for (mu, p) in col.as_object()? {
            c.insert(space.shape.parse(mu).ok()?, render::poly_from(p)?);
        }
        t.insert(space.shape.parse(l).ok()?, c);
    }
    Some(t)
}

fn character_output(ch: &FormalCharacter) -> Output {
    Output { json: render::character(ch), text: ch.to_string() }
}

fn gl_k2(mu: &Weight, k: usize, borel: &str, depth: u32) -> Result<Output, CliError> {
    let borel = match borel {
        "standard" => GlK2Borel::Standard,
        "nonstandard" => GlK2Borel::Nonstandard,
        other => return Err(CliError::Usage(format!("gl(k|2) Borel `{other}` must be standard or nonstandard"))),
    };
    let ch = gl_k2_character(mu, k, borel, depth)?;
    Ok(character_output(&ch.character))
}

fn tilting(module: &ModuleArgs) -> Result<Output, CliError> {
    let t = module.tuple()?;
    let (ch, flag) = tilting_character(t, module.flavor, module.ranks(t), module.depth()?)?;
    let entries: Vec<Value> = flag.entries.iter().map(|(w, c)| json!({ "weight": render::weight(w), "mult": c })).collect();
    let mut text = ch.to_string();
    text.push_str("flag\n");
    for (w, c) in &flag.entries {
        text.push_str(&format!("{w}\t{c}\n"));
    }
    Ok(Output { json: json!({ "character": render::character(&ch), "flag": entries }), text })
}

fn reflect(spec: &str, tuple: Option<&DominantTuple>, weight: Option<&Weight>, borel: Option<&BorelOrdering>, n: Option<u32>) -> Result<Output, CliError> {
    let seq = parse_sequence(spec)?;
    let (k, mu) = match (tuple, weight) {
        (Some(t), _) => (t.k(), to_weight(t, Flavor::Tilde)?),
        (None, Some(w)) => (w.support().filter(|i| i.is_bar()).count(), w.clone()),
        (None, None) => return Err(CliError::Usage("--tuple or --weight is required".into())),
    };
    let tagged = spec.split_once(':').and_then(|(tag, v)| Some((tag.trim(), v.trim().parse::<u32>().ok()?)));
    let start = match (borel, tagged) {
        (Some(b), _) => b.clone(),
        (None, Some(("glk2", kk))) => GlK2Borel::Nonstandard.ordering(kk as usize),
        (None, Some((_, rank))) => BorelOrdering::standard(k, n.unwrap_or(rank)),
        (None, None) => BorelOrdering::standard(k, n.ok_or_else(|| CliError::Usage("--borel or --n is required for an explicit root list".into()))?),
    };
    let (mut b, mut w) = (start.clone(), mu.clone());
    let mut steps = Vec::new();
    let mut text = format!("start\t{b}\t{w}\n");
    for alpha in seq {
        (b, w) = odd_reflect(&b, &w, alpha)?;
        text.push_str(&format!("{alpha}\t{b}\t{w}\n"));
        steps.push(json!({ "root": alpha.to_string(), "ordering": b.to_string(), "weight": render::weight(&w) }));
    }
    let json = json!({
        "start": { "ordering": start.to_string(), "weight": render::weight(&mu) },
        "steps": steps,
        "final": { "ordering": b.to_string(), "weight": render::weight(&w) },
    });
    Ok(Output { json, text })
}

fn tuple_weight(tuple: Option<&DominantTuple>, weight: Option<&Weight>, k: Option<usize>, f: Flavor) -> Result<Output, CliError> {
    let (t, w) = match (tuple, weight) {
        (Some(t), _) => (t.clone(), to_weight(t, f)?),
        (None, Some(w)) => (from_weight(w, f, k.unwrap_or(0))?, w.clone()),
        (None, None) => return Err(CliError::Usage("--tuple or --weight is required".into())),
    };
    let json = json!({ "tuple": t.to_string(), "flavor": f.name(), "weight": render::weight(&w) });
    Ok(Output { json, text: format!("{t}\t{f}\t{w}\n") })
}

fn truncate(module: &ModuleArgs, engine: Engine) -> Result<Output, CliError> {
    let t = module.tuple()?;
    let depth = module.depth()?;
    let small = module.ranks(t);
    let (m, n) = (small.m.unwrap_or(0), small.n.unwrap_or(0));
    let big = Ranks::finite(m.max(t.minus.len() as u32 + 1), n.max(t.plus.len() as u32 + 1));
    let full = irreducible_character(t, module.flavor, big, depth)?.character;
    let cut = truncate_character(&full, small);
    if engine != Engine::Fock && !cut.is_zero() {
        let direct = irreducible_character(t, module.flavor, small, depth)?.character;
        if direct != cut {
            return Err(CliError::Integrity(format!("truncating from {big:?} disagrees with computing at {small:?}")));
        }
    }
    Ok(character_output(&cut))
}

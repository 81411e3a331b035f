use std::collections::HashSet;
use std::fs;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};

use alcove_core::characters::{
    branch, character, decomposition_dimension, freudenthal_multiplicities, lr_decompose, recombine, weyl_dimension,
    WeightMultiset,
};
use alcove_core::crystal::{
    build_crystal_graph, display_positions, enumerate_admissible, operator_audit, DEFAULT_NODE_CAP,
};
use alcove_core::folding::folding_of;
use alcove_core::geometry::{alcove_coords, ls_chain_of, path_points};
use alcove_core::{CartanSpec, Error, LambdaChain, RootSystem, Weight, Q};

#[derive(Parser)]
#[command(
    name = "alcove",
    version,
    about = "Crystals of irreducible representations via lambda-chains"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the lexicographic lambda-chain.
    Chain(Common),
    /// Build the crystal graph on admissible subsets.
    Crystal(Common),
    /// Character table and dimension.
    Char(Common),
    /// Tensor product decomposition V(weight) x V(weight2).
    Lr {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_name = "COORDS")]
        weight2: String,
    },
    /// Restriction to a Levi subalgebra.
    Branch {
        #[command(flatten)]
        common: Common,
        /// 1-based simple roots, comma-separated (may be empty).
        #[arg(long, value_name = "ROOTS", allow_hyphen_values = true)]
        levi: String,
    },
    /// Points of the folded gallery for an admissible subset.
    Path {
        #[command(flatten)]
        common: Common,
        /// 1-based chain positions, comma-separated (may be empty).
        #[arg(long, value_name = "POSITIONS")]
        subset: String,
    },
    /// Run every invariant check on the configured instance.
    Audit(Common),
}

#[derive(Args)]
struct Common {
    /// Cartan type such as A2 or G2.
    #[arg(
        long = "type",
        value_name = "TYPE",
        required_unless_present = "cartan",
        conflicts_with = "cartan"
    )]
    cartan_type: Option<String>,
    /// File with whitespace-separated integer rows of a Cartan matrix.
    #[arg(long, value_name = "FILE")]
    cartan: Option<PathBuf>,
    /// Highest weight in fundamental-weight coordinates, comma-separated.
    #[arg(long, value_name = "COORDS", allow_hyphen_values = true)]
    weight: String,
    /// Total order on the simple roots as a 1-based permutation.
    #[arg(long, value_name = "PERM")]
    order: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Abort once more than this many objects would be produced.
    #[arg(long, default_value_t = DEFAULT_NODE_CAP)]
    cap: usize,
    /// Write to this file instead of standard output.
    #[arg(long, value_name = "PATH")]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
    Csv,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] Error),
    #[error("cannot write {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(Error::SizeCapExceeded { .. }) => 3,
            CliError::Core(Error::ShiViolation { .. } | Error::InternalInconsistency(_) | Error::NotLexChain) => 4,
            CliError::Core(_) => 2,
            CliError::Io { .. } => 4,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn parse_ints(text: &str, what: &str) -> CliResult<Vec<i64>> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<i64>()
                .map_err(|_| CliError::Usage(format!("bad {what} entry {s:?}")))
        })
        .collect()
}

fn parse_one_based(text: &str, what: &str) -> CliResult<Vec<usize>> {
    parse_ints(text, what)?
        .into_iter()
        .map(|v| {
            usize::try_from(v)
                .ok()
                .and_then(|v| v.checked_sub(1))
                .ok_or_else(|| CliError::Usage(format!("{what} entries are 1-based, got {v}")))
        })
        .collect()
}

struct Instance {
    rs: Arc<RootSystem>,
    lambda: Weight,
    order: Vec<usize>,
    chain: LambdaChain,
}

impl Common {
    fn root_system(&self) -> CliResult<Arc<RootSystem>> {
        let spec = match (&self.cartan_type, &self.cartan) {
            (Some(name), _) => name.parse::<CartanSpec>().map_err(|e| CliError::Usage(e.to_string()))?,
            (None, Some(path)) => {
                let text = fs::read_to_string(path)
                    .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
                CartanSpec::parse_matrix(&text)?
            }
            (None, None) => return Err(CliError::Usage("one of --type or --cartan is required".into())),
        };
        Ok(Arc::new(RootSystem::new(&spec)?))
    }

    fn weight(&self, rs: &RootSystem, text: &str) -> CliResult<Weight> {
        let coords = parse_ints(text, "weight")?;
        if coords.len() != rs.rank() {
            return Err(CliError::Usage(format!(
                "weight has {} coordinates, rank is {}",
                coords.len(),
                rs.rank()
            )));
        }
        Ok(Weight::from_ints(&coords))
    }

    fn instance(&self) -> CliResult<Instance> {
        let rs = self.root_system()?;
        let lambda = self.weight(&rs, &self.weight)?;
        let order = match &self.order {
            Some(text) => parse_one_based(text, "order")?,
            None => (0..rs.rank()).collect(),
        };
        let chain = LambdaChain::lex(rs.clone(), lambda.clone(), &order)?;
        Ok(Instance {
            rs,
            lambda,
            order,
            chain,
        })
    }

    fn emit(&self, text: &str) -> CliResult<()> {
        match &self.output {
            Some(path) => fs::write(path, text).map_err(|source| CliError::Io {
                path: path.display().to_string(),
                source,
            }),
            None => {
                let mut out = std::io::stdout().lock();
                out.write_all(text.as_bytes()).map_err(|source| CliError::Io {
                    path: "stdout".into(),
                    source,
                })
            }
        }
    }

    fn require(&self, allowed: &[Format], command: &str) -> CliResult<()> {
        if allowed.contains(&self.format) {
            Ok(())
        } else {
            Err(CliError::Usage(format!("format not supported by {command}")))
        }
    }
}

fn pretty(value: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("json values serialize");
    s.push('\n');
    s
}

fn table(rs: &RootSystem, multiset: &WeightMultiset, dimension: u64) -> String {
    let mut out = String::new();
    for (w, m) in multiset.sorted_rows(rs) {
        out.push_str(&format!("{w} : {m}\n"));
    }
    out.push_str(&format!("dimension: {dimension}\n"));
    out
}

fn cmd_chain(common: &Common) -> CliResult<()> {
    common.require(&[Format::Text, Format::Json], "chain")?;
    let inst = common.instance()?;
    let text = match common.format {
        Format::Json => pretty(&inst.chain.to_json()),
        _ => {
            let mut out = String::new();
            for (i, e) in inst.chain.entries().iter().enumerate() {
                out.push_str(&format!("{}\t{}\tk={}\n", i + 1, inst.rs.root(e.root), e.k));
            }
            out
        }
    };
    common.emit(&text)
}

fn cmd_crystal(common: &Common) -> CliResult<()> {
    let inst = common.instance()?;
    let graph = build_crystal_graph(&inst.chain, common.cap)?;
    let text = match common.format {
        Format::Dot => graph.to_dot(),
        Format::Json => pretty(&graph.to_json()),
        Format::Text => {
            let mut out = String::new();
            for node in &graph.nodes {
                out.push_str(&format!("{} : {}\n", display_positions(&node.positions), node.weight));
            }
            for e in &graph.edges {
                out.push_str(&format!(
                    "{} -{}-> {}\n",
                    display_positions(&graph.nodes[e.from].positions),
                    e.color + 1,
                    display_positions(&graph.nodes[e.to].positions)
                ));
            }
            out
        }
        Format::Csv => return Err(CliError::Usage("format not supported by crystal".into())),
    };
    common.emit(&text)
}

fn render_multiset(common: &Common, rs: &RootSystem, m: &WeightMultiset, dimension: u64) -> CliResult<()> {
    let text = match common.format {
        Format::Json => pretty(&m.to_json(rs, dimension)),
        _ => table(rs, m, dimension),
    };
    common.emit(&text)
}

fn cmd_char(common: &Common) -> CliResult<()> {
    common.require(&[Format::Text, Format::Json], "char")?;
    let inst = common.instance()?;
    let ch = character(&inst.chain, common.cap)?;
    render_multiset(common, &inst.rs, &ch, ch.total())
}

fn cmd_lr(common: &Common, weight2: &str) -> CliResult<()> {
    common.require(&[Format::Text, Format::Json], "lr")?;
    let inst = common.instance()?;
    let nu = common.weight(&inst.rs, weight2)?;
    inst.rs.check_dominant_integral(&nu)?;
    let parts = lr_decompose(&inst.chain, &nu, common.cap)?;
    let dim = decomposition_dimension(&inst.rs, &parts)?;
    render_multiset(common, &inst.rs, &parts, dim)
}

fn cmd_branch(common: &Common, levi: &str) -> CliResult<()> {
    common.require(&[Format::Text, Format::Json], "branch")?;
    let inst = common.instance()?;
    let levi = parse_one_based(levi, "levi")?;
    let parts = branch(&inst.chain, &levi, common.cap)?;
    let dim = recombine(&inst.rs, &levi, &parts, common.cap)?.total();
    render_multiset(common, &inst.rs, &parts, dim)
}

fn cmd_path(common: &Common, subset: &str) -> CliResult<()> {
    let inst = common.instance()?;
    let positions = parse_one_based(subset, "subset")?;
    let path = path_points(&inst.chain, &positions)?;
    let text = match common.format {
        Format::Json => pretty(&path.to_json()),
        Format::Csv | Format::Text => path.to_csv(),
        Format::Dot => return Err(CliError::Usage("format not supported by path".into())),
    };
    common.emit(&text)
}

struct Outcome {
    name: String,
    passed: bool,
    detail: String,
}

fn outcome(name: impl Into<String>, failures: &[String]) -> Outcome {
    Outcome {
        name: name.into(),
        passed: failures.is_empty(),
        detail: failures.first().cloned().unwrap_or_default(),
    }
}

fn audit_outcomes(inst: &Instance, cap: usize) -> CliResult<Vec<Outcome>> {
    let chain = &inst.chain;
    let rs = &inst.rs;
    let mut out = Vec::new();

    let report = chain.validate();
    let counts: Vec<String> = report
        .counts
        .iter()
        .filter(|c| Q::from_integer(c.actual as i64) != c.expected)
        .map(|c| format!("root {}", rs.root(c.root)))
        .collect();
    out.push(outcome("chain: occurrence counts", &counts));
    let interlace: Vec<String> = report
        .triples
        .iter()
        .filter(|t| !t.interlaced)
        .map(|t| format!("triple {:?}", t.triple))
        .collect();
    out.push(outcome("chain: interlacing", &interlace));

    let graph = build_crystal_graph(chain, cap)?;
    let subsets = enumerate_admissible(chain, cap)?;
    let dim = weyl_dimension(rs, &inst.lambda)?;
    let mut size = Vec::new();
    if graph.len() as u64 != dim || subsets.len() as u64 != dim {
        size.push(format!(
            "{} nodes, {} admissible subsets, Weyl dimension {dim}",
            graph.len(),
            subsets.len()
        ));
    }
    out.push(outcome("crystal: size equals Weyl dimension", &size));
    let ch = character(chain, cap)?;
    let oracle = freudenthal_multiplicities(rs, &inst.lambda, cap)?;
    let mismatch = if ch == oracle {
        Vec::new()
    } else {
        vec!["admissible-subset weights differ from Freudenthal".to_string()]
    };
    out.push(outcome("character: Freudenthal multiplicities", &mismatch));

    let stembridge = graph.stembridge_audit();
    for (name, check) in stembridge.named() {
        out.push(outcome(format!("crystal: {name}"), &check.failures));
    }
    let ops = operator_audit(chain, &graph)?;
    for (name, check) in ops.named() {
        out.push(outcome(format!("operators: {name}"), &check.failures));
    }

    let mut level_failures = Vec::new();
    for s in &subsets {
        let folding = folding_of(chain, &s.positions)?;
        for p in 0..rs.rank() {
            let alpha = rs.simple_index(p);
            let samples = folding.level_samples(alpha);
            let pairing = rs.pairing_idx(&s.weight, alpha);
            if folding.inner_from_levels(alpha) != pairing || !samples.consistent() {
                level_failures.push(format!("{} color {}", display_positions(&s.positions), p + 1));
            }
        }
    }
    out.push(outcome("folding: pairings read off levels", &level_failures));

    let mut reversed = inst.order.clone();
    reversed.reverse();
    let other = LambdaChain::lex(rs.clone(), inst.lambda.clone(), &reversed)?;
    let other_graph = build_crystal_graph(&other, cap)?;
    let iso = if graph.isomorphic_to(&other_graph) {
        Vec::new()
    } else {
        vec!["graphs differ".to_string()]
    };
    out.push(outcome("crystal: reversed order gives an isomorphic graph", &iso));

    if rs.is_irreducible() {
        let shi = match alcove_coords(chain) {
            Ok(_) => Vec::new(),
            Err(e) => vec![e.to_string()],
        };
        out.push(outcome("geometry: Shi condition", &shi));
        let mut diffs = Vec::new();
        let mut ls_failures = Vec::new();
        let mut seen = HashSet::new();
        for s in &subsets {
            let path = path_points(chain, &s.positions)?;
            diffs.extend(path.difference_failures(chain)?);
            if path.endpoint() != &-&s.weight {
                diffs.push(format!("{} endpoint", display_positions(&s.positions)));
            }
            match ls_chain_of(chain, &s.positions) {
                Ok(ls) => {
                    if ls.endpoint() != -&s.weight {
                        ls_failures.push(format!("{} endpoint", display_positions(&s.positions)));
                    }
                    if !seen.insert((ls.weights().to_vec(), ls.times().to_vec())) {
                        ls_failures.push(format!("{} repeats an LS chain", display_positions(&s.positions)));
                    }
                }
                Err(e) => ls_failures.push(e.to_string()),
            }
        }
        out.push(outcome("geometry: gallery differences", &diffs));
        out.push(outcome("geometry: LS chains", &ls_failures));
    }
    Ok(out)
}

fn cmd_audit(common: &Common) -> CliResult<bool> {
    common.require(&[Format::Text, Format::Json], "audit")?;
    let inst = common.instance()?;
    let outcomes = audit_outcomes(&inst, common.cap)?;
    let passed = outcomes.iter().all(|o| o.passed);
    let text = match common.format {
        Format::Json => pretty(&serde_json::json!({
            "passed": passed,
            "checks": outcomes
                .iter()
                .map(|o| serde_json::json!({"name": o.name, "passed": o.passed, "detail": o.detail}))
                .collect::<Vec<_>>(),
        })),
        _ => {
            let mut s = String::new();
            for o in &outcomes {
                let verdict = if o.passed { "PASS" } else { "FAIL" };
                if o.detail.is_empty() {
                    s.push_str(&format!("{verdict} {}\n", o.name));
                } else {
                    s.push_str(&format!("{verdict} {} ({})\n", o.name, o.detail));
                }
            }
            s
        }
    };
    common.emit(&text)?;
    Ok(passed)
}

fn run(cli: &Cli) -> CliResult<bool> {
    match &cli.command {
        Command::Chain(c) => cmd_chain(c)?,
        Command::Crystal(c) => cmd_crystal(c)?,
        Command::Char(c) => cmd_char(c)?,
        Command::Lr { common, weight2 } => cmd_lr(common, weight2)?,
        Command::Branch { common, levi } => cmd_branch(common, levi)?,
        Command::Path { common, subset } => cmd_path(common, subset)?,
        Command::Audit(c) => return cmd_audit(c),
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

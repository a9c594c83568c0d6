//! Command-line front end. Exit codes: 0 success, 2 usage, 3 invalid input,
//! 4 failed internal audit.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde_json::json;

use crate::algebra::{format_rational, parse_laurent, parse_rational, Rational, SymbolTable};
use crate::flip::{resolve, EventJson, FlipError};
use crate::fm::{enumerate_fm_strata, limit_stratum, stratum_format, FamilyJson};
use crate::localization::{boundary_pairing, boundary_pairing_restricted, localize_sum, LocusDataset};
use crate::notation::{parse_config, parse_tree_with_charge, print_config, print_tree};
use crate::tree::{enumerate_trees, hasse_dot, AffineDim, BubbleTree};
use crate::wallcross::{
    delta_assemble, enumerate_walls, wall_crossing_difference, wall_invariants, DeltaParams, EpsilonConvention,
    FormJson, IntersectionForm, Wall, WallOptions,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INVALID: i32 = 3;
pub const EXIT_AUDIT: i32 = 4;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Invalid(String),
    #[error("audit failure: {0}")]
    Audit(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Invalid(_) => EXIT_INVALID,
            CliError::Audit(_) => EXIT_AUDIT,
        }
    }
}

fn invalid(e: impl std::fmt::Display) -> CliError {
    CliError::Invalid(e.to_string())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
    Dot,
}

#[derive(Parser, Debug)]
#[command(name = "bubbletree", version, about = "Bubble-tree strata, flips, configuration limits and wall-crossing terms")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// List every bubble tree of total charge K.
    Trees {
        #[arg(value_parser = clap::value_parser!(u64).range(1..))]
        k: u64,
        /// Emit the contraction order as DOT.
        #[arg(long)]
        hasse: bool,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Run the flip resolution for charge K.
    Flip {
        #[arg(value_parser = clap::value_parser!(u64).range(1..))]
        k: u64,
        #[arg(long, allow_hyphen_values = true)]
        chi: i64,
        #[arg(long, allow_hyphen_values = true)]
        sigma: i64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Limit stratum of a polynomial family of weighted points.
    FmLimit {
        input: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Strata of the weighted configuration space.
    FmStrata {
        /// Point weights, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        weights: Vec<u64>,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Wall listing and crossing sums.
    Walls {
        #[command(subcommand)]
        action: WallsCommand,
    },
    /// Wall-crossing term for one wall.
    Delta(DeltaArgs),
    /// Fixed-point sum or link pairing from a locus dataset.
    Localize {
        input: PathBuf,
        /// Compute the link pairing of this order instead of the plain sum.
        #[arg(long)]
        pairing: Option<u32>,
        /// Class used on every locus for the pairing; defaults to each locus's own.
        #[arg(long, allow_hyphen_values = true)]
        gamma: Option<String>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Parse a tree or configuration string and print its canonical form.
    Parse {
        #[arg(allow_hyphen_values = true)]
        text: String,
        /// Treat the input as a point configuration.
        #[arg(long)]
        config: bool,
        /// Total charge, used to resolve a barred root weight.
        #[arg(long)]
        charge: Option<u64>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
}

#[derive(Args, Debug, Clone)]
pub struct PathArgs {
    /// Intersection form file (`{"schema": 1, "matrix": [[..]]}`).
    #[arg(long)]
    pub form: PathBuf,
    /// Characteristic class `c`, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub c: Vec<i64>,
    #[arg(long, allow_hyphen_values = true)]
    pub p1: i64,
    /// Start period point, comma separated rationals.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub from: Vec<String>,
    /// End period point.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub to: Vec<String>,
    /// Count α and −α separately.
    #[arg(long)]
    pub no_collapse: bool,
    /// Report the exponent (c−α)²/2 instead of the sign.
    #[arg(long)]
    pub unsigned_epsilon: bool,
}

#[derive(Subcommand, Debug)]
pub enum WallsCommand {
    /// Walls crossed by the segment between two period points.
    List {
        #[command(flatten)]
        path: PathArgs,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Signed sum of wall-crossing terms along the segment.
    Crossing {
        #[command(flatten)]
        path: PathArgs,
        #[command(flatten)]
        topology: TopologyArgs,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
}

#[derive(Args, Debug, Clone)]
pub struct TopologyArgs {
    /// Euler number; symbolic when omitted.
    #[arg(long, allow_hyphen_values = true)]
    pub chi: Option<i64>,
    /// Signature; symbolic when omitted.
    #[arg(long, allow_hyphen_values = true)]
    pub sigma: Option<i64>,
    /// Block normalisation `t=value`, repeatable (default 1).
    #[arg(long = "block-constant", value_name = "T=Q")]
    pub block_constants: Vec<String>,
}

impl TopologyArgs {
    fn params(&self) -> Result<DeltaParams, CliError> {
        let mut block_constants = BTreeMap::new();
        for s in &self.block_constants {
            let (t, q) = s
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("--block-constant expects T=Q, got `{s}`")))?;
            let t: u32 = t.trim().parse().map_err(|_| CliError::Usage(format!("bad block size `{t}`")))?;
            block_constants.insert(t, parse_rational(q).map_err(invalid)?);
        }
        Ok(DeltaParams {
            block_constants,
            chi: self.chi,
            sigma: self.sigma,
        })
    }
}

#[derive(Args, Debug, Clone)]
pub struct DeltaArgs {
    /// α² directly.
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["alpha", "form"])]
    pub alpha_sq: Option<i64>,
    /// α as a vector, with --form.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, requires = "form")]
    pub alpha: Option<Vec<i64>>,
    #[arg(long, requires = "alpha")]
    pub form: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    pub p1: i64,
    #[command(flatten)]
    pub topology: TopologyArgs,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

/// Parses `std::env::args`, runs, prints, and returns the exit code.
pub fn main() -> i32 {
    run_from(std::env::args_os())
}

pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match run(&cli) {
        Ok(out) => {
            print!("{out}");
            if !out.ends_with('\n') {
                println!();
            }
            EXIT_OK
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Runs a parsed command and returns its output text.
pub fn run(cli: &Cli) -> Result<String, CliError> {
    match &cli.command {
        Command::Trees { k, hasse, format } => cmd_trees(*k, *hasse, *format),
        Command::Flip { k, chi, sigma, format } => cmd_flip(*k, *chi, *sigma, *format),
        Command::FmLimit { input, format } => cmd_fm_limit(input, *format),
        Command::FmStrata { weights, format } => cmd_fm_strata(weights, *format),
        Command::Walls { action } => match action {
            WallsCommand::List { path, format } => cmd_walls_list(path, *format),
            WallsCommand::Crossing { path, topology, format } => cmd_walls_crossing(path, topology, *format),
        },
        Command::Delta(a) => cmd_delta(a),
        Command::Localize {
            input,
            pairing,
            gamma,
            format,
        } => cmd_localize(input, *pairing, gamma.as_deref(), *format),
        Command::Parse {
            text,
            config,
            charge,
            format,
        } => cmd_parse(text, *config, *charge, *format),
    }
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("json values serialize") + "\n"
}

fn no_dot(cmd: &str) -> CliError {
    CliError::Usage(format!("{cmd} has no DOT output"))
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| invalid(format!("{}: {e}", path.display())))
}

fn dim_string(d: &AffineDim) -> String {
    d.to_string()
}

pub fn cmd_trees(k: u64, hasse: bool, format: Format) -> Result<String, CliError> {
    if k == 0 {
        return Err(CliError::Usage("K must be at least 1".into()));
    }
    let trees = enumerate_trees(k);
    let ghosts = trees.iter().filter(|t| t.is_ghost_tree()).count();
    if hasse || format == Format::Dot {
        return Ok(hasse_dot(&trees));
    }
    Ok(match format {
        Format::Json => pretty(&json!({
            "k": k,
            "count": trees.len(),
            "ghost": ghosts,
            "trees": trees.iter().map(|t| json!({
                "tree": t.canonical_form(),
                "ghost": t.is_ghost_tree(),
                "edges": t.edge_count(),
                "dimension": dim_string(&t.dimension()),
            })).collect::<Vec<_>>(),
        })),
        _ => {
            let mut s = format!("{} trees, {} ghost\n", trees.len(), ghosts);
            let width = trees.iter().map(|t| t.canonical_form().chars().count()).max().unwrap_or(0);
            for t in &trees {
                let pad = width - t.canonical_form().chars().count();
                let _ = writeln!(
                    s,
                    "{}{}  {}  {}",
                    t,
                    " ".repeat(pad),
                    if t.is_ghost_tree() { "ghost" } else { "     " },
                    t.dimension()
                );
            }
            s
        }
    })
}

fn flip_error(e: FlipError) -> CliError {
    match e {
        FlipError::Tree(t) => invalid(t),
        other => CliError::Audit(other.to_string()),
    }
}

pub fn cmd_flip(k: u64, chi: i64, sigma: i64, format: Format) -> Result<String, CliError> {
    let res = resolve(k, chi, sigma).map_err(flip_error)?;
    Ok(match format {
        Format::Dot => res.poset.to_dot(),
        Format::Json => {
            let events: Vec<EventJson> = res.events.iter().map(EventJson::from).collect();
            pretty(&json!({
                "k": k,
                "chi": chi,
                "sigma": sigma,
                "rounds": res.rounds.iter().map(|(m, n)| json!({"m": m, "events": n})).collect::<Vec<_>>(),
                "events": events,
                "final": res.poset.active_trees().iter().map(|t| t.canonical_form().to_string()).collect::<Vec<_>>(),
            }))
        }
        Format::Table => {
            let mut s = String::new();
            for (m, n) in &res.rounds {
                let _ = writeln!(s, "round {m}: {n} event(s)");
            }
            for e in &res.events {
                let srcs: Vec<String> = e.sources.iter().map(ToString::to_string).collect();
                let ends: Vec<String> = e
                    .ends
                    .iter()
                    .map(|x| format!("S^{}/{} fiber {}", x.sphere_dim, e.group, x.fiber_dim))
                    .collect();
                let _ = writeln!(
                    s,
                    "m={} {} from {{{}}} ends [{}] multiplicity {}",
                    e.round,
                    e.tree,
                    srcs.join(", "),
                    ends.join("; "),
                    format_rational(&e.multiplicity())
                );
            }
            let _ = writeln!(s, "{} active strata after resolution", res.poset.active().count());
            s
        }
    })
}

pub fn cmd_fm_limit(input: &Path, format: Format) -> Result<String, CliError> {
    let fam: FamilyJson = read_json(input)?;
    let family = fam.to_family().map_err(invalid)?;
    let lim = limit_stratum(&family).map_err(invalid)?;
    let fmt = stratum_format(&lim.tree).map_err(invalid)?;
    Ok(match format {
        Format::Dot => return Err(no_dot("fm-limit")),
        Format::Json => {
            let mut v = lim.to_json();
            v["format"] = json!(fmt);
            pretty(&v)
        }
        Format::Table => {
            let mut s = format!("{fmt}\n{}\n", lim.tree);
            for sc in &lim.screens {
                let pts: Vec<String> = sc
                    .points
                    .iter()
                    .map(|p| {
                        let pos: Vec<String> = p.position.iter().map(format_rational).collect();
                        format!("{:?}:({})", p.members, pos.join(","))
                    })
                    .collect();
                let _ = writeln!(
                    s,
                    "screen v{} order {} scale² {}  {}",
                    sc.vertex,
                    sc.order,
                    format_rational(&sc.scale_squared),
                    pts.join("  ")
                );
            }
            s
        }
    })
}

pub fn cmd_fm_strata(weights: &[u64], format: Format) -> Result<String, CliError> {
    let strata = enumerate_fm_strata(weights).map_err(invalid)?;
    let formats: Vec<String> = strata
        .iter()
        .map(|t| stratum_format(t).map_err(invalid))
        .collect::<Result<_, _>>()?;
    Ok(match format {
        Format::Dot => hasse_dot(&strata),
        Format::Json => pretty(&json!({
            "weights": weights,
            "count": strata.len(),
            "strata": strata.iter().zip(&formats).map(|(t, f)| json!({
                "tree": t.canonical_form(),
                "format": f,
            })).collect::<Vec<_>>(),
        })),
        Format::Table => {
            let mut s = format!("{} strata\n", strata.len());
            for (t, f) in strata.iter().zip(&formats) {
                let _ = writeln!(s, "{f}  {t}");
            }
            s
        }
    })
}

fn rationals(v: &[String]) -> Result<Vec<Rational>, CliError> {
    v.iter().map(|s| parse_rational(s).map_err(invalid)).collect()
}

fn search(path: &PathArgs) -> Result<(IntersectionForm, crate::wallcross::WallSearch), CliError> {
    let form: FormJson = read_json(&path.form)?;
    let q = form.to_form().map_err(invalid)?;
    let opts = WallOptions {
        collapse_sign: !path.no_collapse,
        epsilon: if path.unsigned_epsilon {
            EpsilonConvention::Unsigned
        } else {
            EpsilonConvention::Signed
        },
    };
    let s = enumerate_walls(&q, &path.c, path.p1, &rationals(&path.from)?, &rationals(&path.to)?, opts)
        .map_err(invalid)?;
    Ok((q, s))
}

fn wall_json(w: &Wall) -> serde_json::Value {
    json!({
        "alpha": w.alpha,
        "alpha_sq": w.alpha_sq,
        "t_star": format_rational(&w.t_star),
        "epsilon": w.epsilon,
        "r": w.invariants.map(|i| i.r),
        "d": w.invariants.map(|i| i.d),
        "n": w.invariants.map(|i| i.n),
    })
}

pub fn cmd_walls_list(path: &PathArgs, format: Format) -> Result<String, CliError> {
    let (q, s) = search(path)?;
    Ok(match format {
        Format::Dot => return Err(no_dot("walls list")),
        Format::Json => pretty(&json!({
            "b_plus": q.b_plus(),
            "signature": q.signature(),
            "unimodular": q.is_unimodular(),
            "walls": s.walls.iter().map(wall_json).collect::<Vec<_>>(),
            "degenerate": s.degenerate,
        })),
        Format::Table => {
            let mut out = format!("{} wall(s)\n", s.walls.len());
            let _ = writeln!(out, "{:<16} {:>5} {:>8} {:>4} {:>4} {:>4} {:>4}", "alpha", "a^2", "t*", "eps", "r", "d", "N");
            let opt = |v: Option<i64>| v.map_or("-".to_string(), |x| x.to_string());
            for w in &s.walls {
                let _ = writeln!(
                    out,
                    "{:<16} {:>5} {:>8} {:>4} {:>4} {:>4} {:>4}",
                    format!("{:?}", w.alpha),
                    w.alpha_sq,
                    format_rational(&w.t_star),
                    opt(w.epsilon),
                    opt(w.invariants.map(|i| i.r)),
                    opt(w.invariants.map(|i| i.d)),
                    opt(w.invariants.map(|i| i.n)),
                );
            }
            for d in &s.degenerate {
                let _ = writeln!(out, "on-wall endpoint: {d:?}");
            }
            out
        }
    })
}

pub fn cmd_walls_crossing(path: &PathArgs, topo: &TopologyArgs, format: Format) -> Result<String, CliError> {
    let (q, s) = search(path)?;
    let params = topo.params()?;
    let mut pairs = Vec::new();
    for w in &s.walls {
        let inv = wall_invariants(w.alpha_sq, path.p1).map_err(invalid)?;
        let d = delta_assemble(&inv, &params).map_err(|e| CliError::Audit(e.to_string()))?;
        pairs.push((w.clone(), d));
    }
    let sum = wall_crossing_difference(&q, &pairs).map_err(invalid)?;
    Ok(match format {
        Format::Dot => return Err(no_dot("walls crossing")),
        Format::Json => pretty(&sum.to_json()),
        Format::Table => {
            let mut out = String::new();
            for t in &sum.terms {
                let _ = writeln!(out, "{:?}  eps {}  {}", t.alpha, t.epsilon, t.signed_delta);
            }
            let _ = writeln!(out, "total  {}", sum.total);
            out
        }
    })
}

pub fn cmd_delta(a: &DeltaArgs) -> Result<String, CliError> {
    let alpha_sq = match (&a.alpha_sq, &a.alpha, &a.form) {
        (Some(s), _, _) => *s,
        (None, Some(alpha), Some(form)) => {
            let q = read_json::<FormJson>(form)?.to_form().map_err(invalid)?;
            if alpha.len() != q.rank() {
                return Err(invalid(format!("α has {} entries, form has rank {}", alpha.len(), q.rank())));
            }
            q.square(alpha)
        }
        _ => return Err(CliError::Usage("give --alpha-sq, or --alpha with --form".into())),
    };
    let inv = wall_invariants(alpha_sq, a.p1).map_err(invalid)?;
    if inv.d < 0 {
        return Err(invalid(format!("p₁ = {} gives negative degree {}", a.p1, inv.d)));
    }
    let delta = delta_assemble(&inv, &a.topology.params()?).map_err(|e| CliError::Audit(e.to_string()))?;
    Ok(match a.format {
        Format::Dot => return Err(no_dot("delta")),
        Format::Json => {
            let mut v = delta.to_json();
            v["alpha_sq"] = json!(alpha_sq);
            v["n"] = json!(inv.n);
            pretty(&v)
        }
        Format::Table => {
            let mut s = format!("r = {}, d = {}, N = {}\ndelta = {}\n", inv.r, inv.d, inv.n, delta.polynomial);
            for (i, c) in delta.coefficients.iter().enumerate() {
                let _ = writeln!(
                    s,
                    "a{i}  Qsym^{} Aalpha^{}  {}",
                    delta.r as usize - i,
                    delta.alpha_exponent(i as u32),
                    c
                );
            }
            s
        }
    })
}

pub fn cmd_localize(input: &Path, pairing: Option<u32>, gamma: Option<&str>, format: Format) -> Result<String, CliError> {
    let ds: LocusDataset = read_json(input)?;
    let loci = ds.to_loci().map_err(invalid)?;
    let (label, value) = match pairing {
        None => {
            let s = localize_sum(&loci).map_err(invalid)?;
            ("sum", s.to_string())
        }
        Some(m) => {
            let p = match gamma {
                Some(g) => {
                    let mut table = SymbolTable::new();
                    for s in &ds.symbols {
                        table.declare(&s.name, s.degree).map_err(invalid)?;
                    }
                    let g = parse_laurent(g, &table).map_err(invalid)?;
                    boundary_pairing(&loci, &g, m)
                }
                None => boundary_pairing_restricted(&loci, m),
            }
            .map_err(invalid)?;
            ("pairing", p.to_string())
        }
    };
    Ok(match format {
        Format::Dot => return Err(no_dot("localize")),
        Format::Json => pretty(&json!({ "loci": loci.len(), label: value })),
        Format::Table => format!("{label} = {value}\n"),
    })
}

pub fn cmd_parse(text: &str, config: bool, charge: Option<u64>, format: Format) -> Result<String, CliError> {
    if config {
        let c = parse_config(text).map_err(invalid)?;
        let tree = c.to_tree(&|_| 1);
        let printed = print_config(&c);
        return Ok(match format {
            Format::Dot => hasse_dot(&[tree]),
            Format::Json => pretty(&json!({
                "config": printed,
                "labels": c.leaf_labels(),
                "tree": tree.canonical_form(),
            })),
            Format::Table => format!("{printed}\n{tree}\n"),
        });
    }
    let t: BubbleTree = parse_tree_with_charge(text, charge).map_err(invalid)?;
    Ok(match format {
        Format::Dot => hasse_dot(&[t]),
        Format::Json => pretty(&json!({
            "tree": print_tree(&t),
            "charge": t.charge(),
            "ghost": t.is_ghost_tree(),
            "dimension": dim_string(&t.dimension()),
            "json": t,
        })),
        Format::Table => format!("{}\n", print_tree(&t)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn code(args: &[&str]) -> i32 {
        let mut v = vec!["bubbletree"];
        v.extend_from_slice(args);
        run_from(v)
    }

    fn out(args: &[&str]) -> String {
        let mut v = vec!["bubbletree"];
        v.extend_from_slice(args);
        run(&Cli::try_parse_from(v).unwrap()).unwrap()
    }

    #[test]
    fn trees_census_line() {
        assert!(out(&["trees", "3"]).starts_with("20 trees, 7 ghost\n"));
        assert!(out(&["trees", "1"]).starts_with("2 trees, 0 ghost\n"));
        assert_eq!(code(&["trees", "0"]), EXIT_USAGE);
        assert!(out(&["trees", "2", "--hasse"]).starts_with("digraph"));
    }

    #[test]
    fn flip_commands() {
        let v: serde_json::Value = serde_json::from_str(&out(&["flip", "2", "--chi", "4", "--sigma", "0"])).unwrap();
        assert_eq!(v["events"].as_array().unwrap().len(), 1);
        assert_eq!(v["events"][0]["ends"][0]["sphere_dim"], 11);
        let v: serde_json::Value = serde_json::from_str(&out(&["flip", "1", "--chi", "4", "--sigma", "0"])).unwrap();
        assert!(v["events"].as_array().unwrap().is_empty());
        assert_eq!(code(&["flip", "2", "--chi", "3", "--sigma", "0"]), EXIT_INVALID);
    }

    #[test]
    fn delta_level_zero() {
        let v: serde_json::Value =
            serde_json::from_str(&out(&["delta", "--alpha-sq", "-6", "--p1", "-6"])).unwrap();
        assert_eq!(v["delta"], "-1/8*Aalpha^3");
        assert_eq!(code(&["delta", "--alpha-sq", "-2", "--p1", "-7"]), EXIT_INVALID);
        assert_eq!(code(&["delta", "--p1", "-7"]), EXIT_USAGE);
    }

    #[test]
    fn parse_round_trip() {
        let v: serde_json::Value = serde_json::from_str(&out(&["parse", "[0[0[1,1]]]"])).unwrap();
        assert_eq!(v["tree"], "[0[0[1,1]]]");
        assert!(v["ghost"].as_bool().unwrap());
        assert_eq!(code(&["parse", "[0[1,"]), EXIT_INVALID);
        let t = out(&["parse", "--config", "--format", "table", "[x1[y1,y2]]"]);
        assert!(t.starts_with("[x1[y1,y2]]\n"));
    }

    #[test]
    fn fm_strata_counts() {
        assert!(out(&["fm-strata", "--weights", "1,1,1"]).starts_with("4 strata\n"));
    }

    #[test]
    fn unknown_flag_is_usage() {
        assert_eq!(code(&["trees", "2", "--bogus"]), EXIT_USAGE);
        assert_eq!(code(&["localize", "/nonexistent.json"]), EXIT_INVALID);
    }
}

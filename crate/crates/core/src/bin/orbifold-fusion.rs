//! Command-line front end.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use orbifold_fusion::config::{parse_scalar, GroupConfig, Registry};
use orbifold_fusion::expr::{flip_terms, parse_corpus, CorpusRecord};
use orbifold_fusion::group::{intertwiner_module, lower_bound, simple_modules, SimpleModuleDescriptor};
use orbifold_fusion::singular::{canonical_vector, common_params, is_singular, singular_space, solve_params};
use orbifold_fusion::table::{build_table, check_symmetries, emit, load_twisted, Format};
use orbifold_fusion::zhu::fusion_upper_bound;
use orbifold_fusion::{ModuleParams, QuadScalar};

#[derive(Parser)]
#[command(name = "orbifold-fusion", version, about = "Exact fusion-rule bounds for the Z3-orbifold at c = 6/5")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check every vector of a corpus file for singularity (JSON lines).
    VerifySingular {
        #[arg(long)]
        vectors: PathBuf,
        /// Lowest weight; with --k, skips parameter recovery.
        #[arg(long, allow_hyphen_values = true)]
        h: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        k: Option<String>,
        /// Apply J(n) -> -J(n) to every vector first.
        #[arg(long)]
        flip: bool,
    },
    /// Basis of the singular vectors of one degree.
    SingularSpace {
        #[arg(long)]
        degree: usize,
        #[arg(long, allow_hyphen_values = true)]
        h: String,
        #[arg(long, allow_hyphen_values = true)]
        k: String,
    },
    /// Recover (h, k) from each vector of a corpus file and from all jointly.
    SolveParams {
        #[arg(long)]
        vectors: PathBuf,
        #[arg(long)]
        flip: bool,
    },
    /// Zhu upper bound for N(left; module, right).
    ZhuBound {
        #[arg(long)]
        module: String,
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        #[arg(long)]
        config: PathBuf,
    },
    /// Lower bounds from the group data for all simple modules of three stable sets.
    GroupBound {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        s1: String,
        #[arg(long)]
        s2: String,
        #[arg(long)]
        s3: String,
        #[arg(long, default_value = "all")]
        targets: String,
    },
    /// The fusion table over all registry modules.
    FusionTable {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_enum, default_value_t = FormatArg::Text)]
        format: FormatArg,
        #[arg(long)]
        include_twisted: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Records,
}

type CliResult = Result<ExitCode, Box<dyn std::error::Error>>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::VerifySingular { vectors, h, k, flip } => verify_singular(&vectors, h, k, flip),
        Command::SingularSpace { degree, h, k } => singular_space_cmd(degree, &h, &k),
        Command::SolveParams { vectors, flip } => solve_params_cmd(&vectors, flip),
        Command::ZhuBound { module, left, right, config } => zhu_bound(&module, &left, &right, &config),
        Command::GroupBound { config, s1, s2, s3, targets } => group_bound(&config, &s1, &s2, &s3, &targets),
        Command::FusionTable { config, format, include_twisted } => fusion_table(&config, format, include_twisted),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn load_corpus(path: &Path, flip: bool) -> Result<Vec<CorpusRecord>, Box<dyn std::error::Error>> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let mut recs = parse_corpus(&text)?;
    if flip {
        for r in &mut recs {
            r.terms = flip_terms(&r.terms);
        }
    }
    Ok(recs)
}

fn params_arg(h: &str, k: &str) -> Result<ModuleParams, Box<dyn std::error::Error>> {
    Ok(ModuleParams::new(parse_scalar("--h", h)?, parse_scalar("--k", k)?))
}

fn verify_singular(path: &Path, h: Option<String>, k: Option<String>, flip: bool) -> CliResult {
    let recs = load_corpus(path, flip)?;
    let params = match (h, k) {
        (Some(h), Some(k)) => params_arg(&h, &k)?,
        (None, None) => {
            let sols = common_params(&recs.iter().map(|r| r.terms.clone()).collect::<Vec<_>>())?;
            match sols.points.as_slice() {
                [p] => p.clone(),
                pts => return Err(format!("the corpus fixes {} parameter points; pass --h and --k", pts.len()).into()),
            }
        }
        _ => return Err("give both --h and --k, or neither".into()),
    };
    let mut all = true;
    for r in &recs {
        let v = canonical_vector(&r.terms, &params);
        let rep = is_singular(&v, &params)?;
        all &= rep.is_singular;
        let residuals: serde_json::Map<String, serde_json::Value> =
            rep.residuals.iter().map(|(m, res)| (m.to_string(), json!(res.to_string()))).collect();
        let line = json!({
            "name": r.name,
            "line": r.line,
            "h": params.h.to_string(),
            "k": params.k.to_string(),
            "degree": rep.degree,
            "singular": rep.is_singular,
            "residuals": residuals,
        });
        println!("{line}");
    }
    Ok(if all { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

fn singular_space_cmd(degree: usize, h: &str, k: &str) -> CliResult {
    let params = params_arg(h, k)?;
    let space = singular_space(degree, &params)?;
    println!("dimension {}", space.len());
    for v in &space {
        println!("{v}");
    }
    Ok(ExitCode::SUCCESS)
}

fn render_points(points: &[ModuleParams]) -> String {
    points.iter().map(|p| format!("({}, {})", p.h, p.k)).collect::<Vec<_>>().join(", ")
}

fn solve_params_cmd(path: &Path, flip: bool) -> CliResult {
    let recs = load_corpus(path, flip)?;
    for r in &recs {
        match solve_params(&r.terms) {
            Ok(s) => {
                println!("{}: {}", r.name, render_points(&s.points));
                if let Some(w) = s.warning {
                    println!("  warning: {w}");
                }
            }
            Err(e) => println!("{}: {e}", r.name),
        }
    }
    let sols = common_params(&recs.iter().map(|r| r.terms.clone()).collect::<Vec<_>>())?;
    println!("common: {}", render_points(&sols.points));
    Ok(ExitCode::SUCCESS)
}

fn zhu_bound(module: &str, left: &str, right: &str, config: &Path) -> CliResult {
    let reg = Registry::load(config)?;
    let n = reg.get(module)?;
    let l = reg.get(left)?;
    let r = reg.get(right)?;
    let ub = fusion_upper_bound(&n.zhu, &l.params, &r.params)?;
    println!("module {module}: h = {}, k = {}, d = {}", n.params.h, n.params.k, n.zhu.d);
    println!("left {left}: (h3, k3) = ({}, {})", l.params.h, l.params.k);
    println!("right {right}: (h2, k2) = ({}, {})", r.params.h, r.params.k);
    println!("relation matrix:");
    for (label, row) in ub.relations.labels.iter().zip(&ub.relations.rows) {
        let cells: Vec<String> = row.coefficients().iter().map(QuadScalar::to_string).collect();
        println!("  {label:>12}: [{}]", cells.join(", "));
    }
    println!("rank {}", ub.rank);
    println!("bound {}", ub.bound);
    Ok(ExitCode::SUCCESS)
}

fn describe(s: &SimpleModuleDescriptor, cfg: &GroupConfig, set: usize) -> String {
    let set = &cfg.sets[set];
    let chi: Vec<String> = s.stabilizer.iter().map(|&g| format!("{}:{}", cfg.group.name(g), s.lambda(g))).collect();
    format!("{}[{}; {}]", set.name(), set.labels()[s.representative], chi.join(" "))
}

fn group_bound(config: &Path, s1: &str, s2: &str, s3: &str, targets: &str) -> CliResult {
    let cfg = GroupConfig::load(config)?;
    let (i1, i2, i3) = (cfg.set_index(s1)?, cfg.set_index(s2)?, cfg.set_index(s3)?);
    let (a1, a2, a3) = (cfg.algebra(i1)?, cfg.algebra(i2)?, cfg.algebra(i3)?);
    let (m1, m2, m3) = (simple_modules(a1)?, simple_modules(a2)?, simple_modules(a3)?);
    for w1 in &m1 {
        for w2 in &m2 {
            let ii = intertwiner_module(a1, a2, a3, &cfg.fusion, &cfg.iso, w1, w2)?;
            let mut parts = Vec::new();
            for w3 in &m3 {
                let n = lower_bound(&ii, w3)?;
                if targets == "all" || n > 0 {
                    parts.push(format!("{} {}", n, describe(w3, &cfg, i3)));
                }
            }
            println!(
                "{} x {} (dim I = {}): {}",
                describe(w1, &cfg, i1),
                describe(w2, &cfg, i2),
                ii.dim(),
                parts.join(", ")
            );
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn fusion_table(config: &Path, format: FormatArg, twisted: Option<PathBuf>) -> CliResult {
    let reg = Registry::load(config)?;
    if reg.modules.is_empty() {
        eprintln!("warning: the registry lists no modules");
        return Ok(ExitCode::SUCCESS);
    }
    let gpath = reg.group_path.clone().ok_or("the registry names no group configuration")?;
    let group = GroupConfig::load(&gpath)?;
    let tw = match twisted {
        Some(p) => load_twisted(&p)?,
        None => Vec::new(),
    };
    let table = build_table(&reg, &group, &tw);
    let sym = check_symmetries(&table, &reg)?;
    let format = match format {
        FormatArg::Text => Format::Text,
        FormatArg::Records => Format::Records,
    };
    print!("{}", emit(&table, format));
    for v in &sym.violations {
        eprintln!("symmetry violation: {v}");
    }
    eprintln!(
        "{} triples: {} determined, {} gaps, {} violated; {} symmetry identities checked, {} violated",
        table.reports.len(),
        table.count(orbifold_fusion::table::Verdict::Determined),
        table.count(orbifold_fusion::table::Verdict::Gap),
        table.count(orbifold_fusion::table::Verdict::Violated),
        sym.checked,
        sym.violations.len()
    );
    let ok = !table.has_violation() && sym.violations.is_empty() && table.errors.is_empty();
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

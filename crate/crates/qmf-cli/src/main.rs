//! `qmf`: tables, expansions and check suites.
//!
//! Exit status: 0 on success, 1 when a check fails (or a computation
//! errors), 2 on usage errors.

mod config;
mod output;
mod suites;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qmf::graphsum::{self, WeightedGraph};
use qmf::igusa::{self, Chi10Method};
use qmf::jacobi::{self, Generator};
use qmf::qmod;
use qmf::scalar::fmt_rational;
use qmf::{Error, Series};

use config::FileConfig;
use output::{render_reports, Format, Table};
use suites::{Bounds, Suite};

#[derive(Parser, Debug)]
#[command(name = "qmf", version, about = "Exact quasimodular forms, the Igusa cusp form and graph sums")]
struct Cli {
    /// q-order for expansions (inclusive).
    #[arg(long, global = true)]
    order: Option<i32>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// `key = value` file with defaults for the flags above and G, H, D, N.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Quasimodular forms.
    #[command(subcommand)]
    Qmod(QmodCmd),
    /// Weak Jacobi forms.
    #[command(subcommand)]
    Jacobi(JacobiCmd),
    /// Borcherds exponents, chi_10 and the K3 x E invariants.
    #[command(subcommand)]
    Igusa(IgusaCmd),
    /// Graph sums over balanced weightings.
    #[command(subcommand)]
    Graphsum(GraphCmd),
    /// Constraint checks on the partition function.
    #[command(subcommand)]
    Constraints(ConstraintsCmd),
    /// Run a registered check suite.
    #[command(after_help = SUITE_BOUNDS)]
    Check(CheckArgs),
}

const SUITE_BOUNDS: &str = "\
Bounds per suite (defaults in parentheses):
  borcherds          N: largest n (8)
  igusa-cross        H, D: q and qt orders (4, 4); N: |y-exponent| (10)
  symmetry           H, D (4, 4); N: y-precision (14)
  kkv                G (6), H (5)
  yau-zaslow         H (10)
  properties         G, D: property 3 box (4, 3); H: property 2 (2); N: q-precision (14)
  kernel             G, H, D (2, 2, 2)
  constant-terms     N: q-order (10)
  graphsum           G: vertices (4); H: edges (5); D: half-edge exponent (2); N: q-order (8)
  euler-maclaurin    D: total degree (5); G: variables (4); N: range (12)
  worpitzky          G: largest m (5); N: largest x (10)
  commutator         N: largest weight (12)
  k3-genus1          N: q-order (20)
  toda               G: largest genus (5)
  residue-relations, all: no bounds";

#[derive(Args, Debug, Clone, Copy, Default)]
struct BoundArgs {
    #[arg(long = "G", visible_alias = "gmax")]
    g: Option<u32>,
    #[arg(long = "H", visible_alias = "hmax")]
    h: Option<u32>,
    #[arg(long = "D", visible_alias = "dmax")]
    d: Option<u32>,
    #[arg(long = "N", visible_alias = "nmax", allow_negative_numbers = true)]
    n: Option<i32>,
}

#[derive(Subcommand, Debug)]
enum QmodCmd {
    /// q-expansion of C_k.
    Eisenstein {
        #[arg(long)]
        k: u32,
    },
    /// Monomial basis of QMod_k.
    Basis {
        #[arg(long)]
        k: i32,
    },
    /// Recognize a series (JSON file) in QMod_k.
    Recognize {
        #[arg(long)]
        k: i32,
        #[arg(long)]
        input: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum GenName {
    PhiM2,
    Phi0,
}

#[derive(Subcommand, Debug)]
enum JacobiCmd {
    /// Fourier expansion of an index-one generator in (y, q).
    Generator {
        #[arg(long, value_enum)]
        name: GenName,
    },
    /// Recognize a series (JSON file) as a weak Jacobi form of weight k, index m.
    Recognize {
        #[arg(long)]
        k: i32,
        #[arg(long)]
        m: i32,
        #[arg(long)]
        input: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Chi10Route {
    Product,
    Hecke,
}

#[derive(Subcommand, Debug)]
enum IgusaCmd {
    /// Table of c(n) for n <= N.
    Borcherds {
        #[command(flatten)]
        bounds: BoundArgs,
    },
    /// Table of N(g,h,d) on the box G x H x D.
    Table {
        #[command(flatten)]
        bounds: BoundArgs,
    },
    /// chi_10 through q^H qt^D.
    Chi10 {
        #[command(flatten)]
        bounds: BoundArgs,
        #[arg(long, value_enum, default_value = "product")]
        method: Chi10Route,
    },
    /// Fiber-class potential F_g recognized in QMod_{2g-2}.
    Toda {
        #[arg(long)]
        g: u32,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Direct,
    Analytic,
    Both,
}

#[derive(Subcommand, Debug)]
enum GraphCmd {
    /// The graph sum of a JSON graph through q^order.
    Compute {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_enum, default_value = "both")]
        method: Method,
    },
    /// Balanced weightings with q-order at most --order.
    Enumerate {
        #[arg(long)]
        graph: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
enum ConstraintsCmd {
    /// Properties 1-3 (G, D bound property 3; H bounds property 2; N is the q-precision).
    Properties {
        #[command(flatten)]
        bounds: BoundArgs,
    },
    /// Kernel of the truncated constraint system.
    Kernel {
        #[command(flatten)]
        bounds: BoundArgs,
        /// Leave c(0,0,0) free.
        #[arg(long)]
        free: bool,
    },
}

#[derive(Args, Debug)]
struct CheckArgs {
    #[arg(value_enum)]
    suite: Suite,
    #[command(flatten)]
    bounds: BoundArgs,
}

/// Failure modes mapped to exit codes.
enum Fail {
    Usage(String),
    Compute(String),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        match e {
            Error::Precondition(_) | Error::Parse(_) | Error::UnknownVariable(_) => Fail::Usage(e.to_string()),
            other => Fail::Compute(other.to_string()),
        }
    }
}

struct Settings {
    file: FileConfig,
    order: i32,
    format: Format,
    out: Option<PathBuf>,
}

impl Settings {
    /// Flag, then file, then nothing.
    fn bounds(&self, b: &BoundArgs) -> Result<Bounds, Fail> {
        fn pick<T: std::str::FromStr>(file: &FileConfig, v: Option<T>, key: &str) -> Result<Option<T>, Fail> {
            match v {
                Some(x) => Ok(Some(x)),
                None => file.get(key).map_err(Fail::Usage),
            }
        }
        let f = &self.file;
        Ok(Bounds { g: pick(f, b.g, "G")?, h: pick(f, b.h, "H")?, d: pick(f, b.d, "D")?, n: pick(f, b.n, "N")? })
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Fail::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Fail::Compute(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<bool, Fail> {
    let file = match &cli.config {
        Some(p) => FileConfig::load(p).map_err(Fail::Usage)?,
        None => FileConfig::default(),
    };
    let order = match cli.order {
        Some(o) => o,
        None => file.get("order").map_err(Fail::Usage)?.unwrap_or(10),
    };
    if order < 0 {
        return Err(Fail::Usage("--order must be nonnegative".into()));
    }
    let format = match cli.format {
        Some(f) => f,
        None => file.get("format").map_err(Fail::Usage)?.unwrap_or(Format::Text),
    };
    let threads = match cli.threads {
        Some(t) => Some(t),
        None => file.get("threads").map_err(Fail::Usage)?,
    };
    if let Some(t) = threads {
        rayon::ThreadPoolBuilder::new().num_threads(t).build_global().map_err(|e| Fail::Compute(e.to_string()))?;
    }
    let out = cli.out.clone().or_else(|| file.get_str("out").map(PathBuf::from));
    let s = Settings { file, order, format, out };

    let (text, ok) = match cli.cmd {
        Command::Qmod(c) => (qmod_cmd(c, &s)?, true),
        Command::Jacobi(c) => (jacobi_cmd(c, &s)?, true),
        Command::Igusa(c) => (igusa_cmd(c, &s)?, true),
        Command::Graphsum(c) => graph_cmd(c, &s)?,
        Command::Constraints(c) => {
            let reports = match c {
                ConstraintsCmd::Properties { bounds } => Suite::Properties.run(&s.bounds(&bounds)?),
                ConstraintsCmd::Kernel { bounds, free } => kernel_report(&s.bounds(&bounds)?, free),
            };
            let ok = reports.iter().all(|r| r.passed());
            (render_reports(&reports, s.format), ok)
        }
        Command::Check(c) => {
            let reports = c.suite.run(&s.bounds(&c.bounds)?);
            let ok = reports.iter().all(|r| r.passed());
            (render_reports(&reports, s.format), ok)
        }
    };
    match &s.out {
        Some(p) => std::fs::write(p, text).map_err(|e| Fail::Compute(format!("{}: {e}", p.display())))?,
        None => print!("{text}"),
    }
    Ok(ok)
}

fn read_json(p: &Path) -> Result<serde_json::Value, Fail> {
    let text = std::fs::read_to_string(p).map_err(|e| Fail::Usage(format!("{}: {e}", p.display())))?;
    serde_json::from_str(&text).map_err(|e| Fail::Usage(format!("{}: {e}", p.display())))
}

fn qmod_cmd(c: QmodCmd, s: &Settings) -> Result<String, Fail> {
    let t = match c {
        QmodCmd::Eisenstein { k } => Table::from_series(&qmod::eisenstein_series(k, s.order + 1)?),
        QmodCmd::Basis { k } => {
            let mut t = Table::new(&["C2", "C4", "C6"]);
            for m in qmod::monomials(k) {
                t.push(m.iter().map(u32::to_string).collect());
            }
            t
        }
        QmodCmd::Recognize { k, input } => {
            let series = Series::from_json(&read_json(&input)?)?;
            one_line("poly", qmod::show(&qmod::recognize(&series, k)?))
        }
    };
    Ok(t.render(s.format))
}

fn jacobi_cmd(c: JacobiCmd, s: &Settings) -> Result<String, Fail> {
    let t = match c {
        JacobiCmd::Generator { name } => {
            let g = match name {
                GenName::PhiM2 => Generator::PhiM2,
                GenName::Phi0 => Generator::Phi0,
            };
            Table::from_series(&jacobi::generator_fourier(g, s.order + 1)?)
        }
        JacobiCmd::Recognize { k, m, input } => {
            let series = Series::from_json(&read_json(&input)?)?;
            one_line("poly", jacobi::show(&jacobi::recognize(&series, k, m)?.poly))
        }
    };
    Ok(t.render(s.format))
}

fn one_line(col: &str, v: String) -> Table {
    let mut t = Table::new(&[col]);
    t.push(vec![v]);
    t
}

fn igusa_cmd(c: IgusaCmd, s: &Settings) -> Result<String, Fail> {
    let t = match c {
        IgusaCmd::Borcherds { bounds } => {
            let n = s.bounds(&bounds)?.n.unwrap_or(8);
            let mut t = Table::new(&["n", "c"]);
            if n >= -1 {
                let table = igusa::borcherds_exponents(n.max(0))?;
                for k in -1..=n {
                    t.push(vec![k.to_string(), fmt_rational(&table.get(k)?)]);
                }
            }
            t
        }
        IgusaCmd::Table { bounds } => {
            let b = s.bounds(&bounds)?;
            let (g, h, d) = (b.g.unwrap_or(2), b.h.unwrap_or(2), b.d.unwrap_or(1));
            let table = igusa::partition_table(g, h, d)?;
            let mut t = Table::new(&["g", "h", "d", "N"]);
            for ((g, h, d), v) in &table.n {
                t.push(vec![g.to_string(), h.to_string(), d.to_string(), fmt_rational(v)]);
            }
            t
        }
        IgusaCmd::Chi10 { bounds, method } => {
            let b = s.bounds(&bounds)?;
            let m = match method {
                Chi10Route::Product => Chi10Method::Product,
                Chi10Route::Hecke => Chi10Method::Hecke,
            };
            Table::from_series(&igusa::chi10_expand(m, b.h.unwrap_or(2) as i32, b.d.unwrap_or(2) as i32)?)
        }
        IgusaCmd::Toda { g } => {
            let f = igusa::toda_fg(g)?;
            one_line("F", f.show())
        }
    };
    Ok(t.render(s.format))
}

fn graph_cmd(c: GraphCmd, s: &Settings) -> Result<(String, bool), Fail> {
    let order = s.order as usize;
    match c {
        GraphCmd::Compute { graph, method } => {
            let g = WeightedGraph::from_json(&read_json(&graph)?)?;
            let direct = match method {
                Method::Analytic => None,
                _ => Some(graphsum::graph_sum_direct(&g, order)?),
            };
            let analytic = match method {
                Method::Direct => None,
                _ => Some(graphsum::graph_sum_analytic(&g, order)?),
            };
            let mut header = vec!["n"];
            header.extend(direct.as_ref().map(|_| "direct"));
            header.extend(analytic.as_ref().map(|_| "analytic"));
            let mut t = Table::new(&header);
            for n in 0..=order as i32 {
                let mut row = vec![n.to_string()];
                for sr in [&direct, &analytic].into_iter().flatten() {
                    row.push(fmt_rational(&sr.coeff(&[n])));
                }
                t.push(row);
            }
            let ok = match (&direct, &analytic) {
                (Some(a), Some(b)) => a == b,
                _ => true,
            };
            let mut text = t.render(s.format);
            if !ok {
                eprintln!("direct and analytic sums differ");
            }
            if s.format == Format::Text && ok && method == Method::Both {
                text.push_str("direct = analytic\n");
            }
            Ok((text, ok))
        }
        GraphCmd::Enumerate { graph } => {
            let g = WeightedGraph::from_json(&read_json(&graph)?)?;
            let ws = graphsum::balanced_enumerate(&g, order)?;
            let cols: Vec<String> = (0..g.edges.len()).map(|i| format!("w{i}")).collect();
            let mut t = Table { header: cols, rows: Vec::new() };
            for w in ws {
                t.push(w.iter().map(i64::to_string).collect());
            }
            Ok((t.render(s.format), true))
        }
    }
}

fn kernel_report(b: &Bounds, free: bool) -> Vec<qmf::report::ConstraintReport> {
    let (g, h, d) = (b.g.unwrap_or(2), b.h.unwrap_or(2), b.d.unwrap_or(2));
    let name = if free { "uniqueness kernel, c(0,0,0) free" } else { "uniqueness kernel, c(0,0,0) = 0" };
    let window = format!("G={g}, H={h}, D={d}");
    match qmf::constraints::uniqueness_kernel(g, h, d, !free) {
        Ok(k) => {
            let mut details = vec![format!("dimension {}", k.dim)];
            for v in &k.basis {
                let entries: Vec<String> =
                    v.iter().map(|((g, h, d), c)| format!("c({g},{h},{d}) = {}", fmt_rational(c))).collect();
                details.push(entries.join(", "));
            }
            vec![qmf::report::ConstraintReport::pass(name, window, k.unknowns).with_details(details)]
        }
        Err(e) => vec![qmf::report::ConstraintReport::from_error(name, window, &e)],
    }
}

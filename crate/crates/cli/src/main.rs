//! `tightmaps`: solve the disk equations, evaluate closed forms, run the insertion
//! recursions, fit quasi-polynomials, count maps and run the verification suites.
//! Every subcommand prints one JSON document.

mod config;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use tightmaps::census::{census_counts, DEFAULT_MMAX};
use tightmaps::closed::{collet_fusy, cylinder, genus1_f, genus1_t, genus1_t_bipartite, pants, tgen, tgen_quasi};
use tightmaps::disk::{solve_rs, trumpet_matrix, DiskData, WeightSpec};
use tightmaps::insertion::{insertion_spec, Base, TightBuilder};
use tightmaps::moments::moments;
use tightmaps::quasi::{default_lmax, quasipoly, Source};
use tightmaps::series::Series;
use tightmaps::verify::{run_suites, select, Params};

use config::ConfigFile;

/// Bad invocation: exit code 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

enum Failure {
    Usage(UsageError),
    Library(tightmaps::error::Error),
    Io(String),
    /// The document was produced but reports a failed check.
    Checks(Value),
}

impl From<UsageError> for Failure {
    fn from(e: UsageError) -> Failure {
        Failure::Usage(e)
    }
}

impl From<tightmaps::error::Error> for Failure {
    fn from(e: tightmaps::error::Error) -> Failure {
        Failure::Library(e)
    }
}

/// Comma-separated list.
#[derive(Clone, Debug)]
struct List<T>(Vec<T>);

impl<T: FromStr> FromStr for List<T>
where
    T::Err: fmt::Display,
{
    type Err = String;

    fn from_str(s: &str) -> Result<List<T>, String> {
        if s.trim().is_empty() {
            return Ok(List(Vec::new()));
        }
        s.split(',').map(|x| x.trim().parse::<T>().map_err(|e| format!("{x:?}: {e}"))).collect::<Result<_, _>>().map(List)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum GradingArg {
    Faces,
    Total,
}

impl FromStr for GradingArg {
    type Err = String;

    fn from_str(s: &str) -> Result<GradingArg, String> {
        match s {
            "faces" => Ok(GradingArg::Faces),
            "total" => Ok(GradingArg::Total),
            _ => Err(format!("unknown grading {s:?} (faces or total)")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Method {
    Closed,
    Insertion,
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Method, String> {
        match s {
            "closed" => Ok(Method::Closed),
            "insertion" => Ok(Method::Insertion),
            _ => Err(format!("unknown method {s:?} (closed or insertion)")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum SourceArg {
    Insertion,
    Closed,
}

impl FromStr for SourceArg {
    type Err = String;

    fn from_str(s: &str) -> Result<SourceArg, String> {
        match s {
            "insertion" => Ok(SourceArg::Insertion),
            "closed" => Ok(SourceArg::Closed),
            _ => Err(format!("unknown source {s:?} (insertion or closed)")),
        }
    }
}

#[derive(Parser)]
#[command(name = "tightmaps", version, about = "Exact generating functions of maps with tight boundaries")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Configuration file of `key = value` lines; flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Truncation order N.
    #[arg(long, global = true, allow_negative_numbers = true)]
    order: Option<i64>,
    /// Active face degrees, e.g. `1,2,3`.
    #[arg(long, global = true)]
    faces: Option<List<u16>>,
    /// `faces` (t has degree 0) or `total`.
    #[arg(long, global = true)]
    grading: Option<GradingArg>,
    /// Require every active face degree to be even.
    #[arg(long, global = true)]
    bipartite: bool,
    /// Worker threads; defaults to TIGHTMAPS_THREADS, then to the number of cores.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Write the JSON document here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the disk equations for R and S.
    Solve {
        /// Number of t-derivatives of R and S to include.
        #[arg(long)]
        kmax: Option<usize>,
    },
    /// The trumpet matrix A and its inverse.
    Trumpet {
        #[arg(long)]
        lmax: Option<u32>,
    },
    /// Generating function of maps with tight boundaries of the given lengths.
    Tight {
        #[arg(long)]
        genus: Option<u32>,
        #[arg(long)]
        lengths: Option<List<u32>>,
        /// `closed` or `insertion`.
        #[arg(long)]
        method: Option<Method>,
        /// With `insertion`, also emit the dependency graph of the computed entries.
        #[arg(long)]
        trace: bool,
    },
    /// Planar maps with boundaries of the given lengths, not necessarily tight.
    Cf {
        #[arg(long)]
        lengths: Option<List<u32>>,
        /// Number of marked vertices.
        #[arg(long)]
        vertices: Option<usize>,
    },
    /// Moments M_h and the derivative expansions they come from.
    Moments {
        #[arg(long)]
        hmax: Option<usize>,
    },
    /// Fit the parity-dependent quasi-polynomial of genus g with n boundaries.
    Quasipoly {
        #[arg(long)]
        genus: Option<u32>,
        #[arg(long)]
        boundaries: Option<usize>,
        /// Largest sampled length.
        #[arg(long)]
        lmax: Option<u32>,
        /// `insertion` or `closed`.
        #[arg(long)]
        source: Option<SourceArg>,
    },
    /// Count maps by brute force over dart permutations.
    Census {
        #[arg(long)]
        edges: Option<u32>,
        #[arg(long)]
        genus: Option<u32>,
        /// Boundary face lengths.
        #[arg(long, alias = "lengths")]
        boundaries: Option<List<u32>>,
        /// Number of marked vertices.
        #[arg(long)]
        vertices: Option<usize>,
    },
    /// Run verification suites: disk, census, trumpet, recursion, genus1, quasi, appendix, operators or all.
    Verify {
        #[arg(long)]
        suite: Option<String>,
        /// Edge bound of the census.
        #[arg(long)]
        mmax: Option<u32>,
        /// Largest length in the recursion checks.
        #[arg(long)]
        lmax: Option<u32>,
    },
}

struct Run {
    common: Common,
    file: ConfigFile,
}

impl Run {
    fn spec(&self, default_grading: GradingArg, default_order: i64) -> Result<WeightSpec, Failure> {
        let c = &self.common;
        let faces = self.file.pick(c.faces.clone(), "faces")?.map_or_else(|| vec![1, 2, 3, 4], |l| l.0);
        let grading = self.file.pick_or(c.grading, "grading", default_grading)?;
        let order = self.file.pick_or(c.order, "order", default_order)?;
        if self.file.switch(c.bipartite, "bipartite")? && faces.iter().any(|k| k % 2 == 1) {
            return Err(UsageError(format!("--bipartite contradicts odd face degrees in {faces:?}")).into());
        }
        if faces.contains(&0) {
            return Err(UsageError("face degrees start at 1".into()).into());
        }
        Ok(match grading {
            GradingArg::Faces => WeightSpec::faces(faces, order)?,
            GradingArg::Total => WeightSpec::total(faces, order)?,
        })
    }

    fn threads(&self) -> Result<Option<usize>, Failure> {
        if let Some(n) = self.file.pick(self.common.threads, "threads")? {
            return Ok(Some(n));
        }
        match std::env::var("TIGHTMAPS_THREADS") {
            Ok(v) => v.trim().parse().map(Some).map_err(|_| UsageError(format!("TIGHTMAPS_THREADS = {v:?} is not a count")).into()),
            Err(_) => Ok(None),
        }
    }

    fn lengths(&self, flag: Option<List<u32>>, key: &str) -> Result<Vec<u32>, Failure> {
        self.file
            .pick(flag, key)?
            .map(|l| l.0)
            .ok_or_else(|| UsageError(format!("--{key} is required")).into())
    }

    fn dispatch(&self, command: Command) -> Result<Value, Failure> {
        match command {
            Command::Solve { kmax } => {
                let kmax = self.file.pick_or(kmax, "kmax", 1)?;
                Ok(solve_rs(&self.spec(GradingArg::Faces, 4)?)?.to_json_value(kmax))
            }
            Command::Trumpet { lmax } => {
                let lmax = self.file.pick_or(lmax, "lmax", 4)?;
                let data = solve_rs(&self.spec(GradingArg::Faces, 4)?)?;
                let m = trumpet_matrix(lmax, &data)?;
                let mut a = Vec::new();
                let mut inv = Vec::new();
                for big in 1..=lmax {
                    for l in 1..=big {
                        a.push(json!({ "L": big, "l": l, "series": m.a(big, l)? }));
                        inv.push(json!({ "L": big, "l": l, "series": m.inv(big, l)? }));
                    }
                }
                Ok(json!({ "lmax": lmax, "A": a, "A_inverse": inv }))
            }
            Command::Tight { genus, lengths, method, trace } => {
                let genus = self.file.pick_or(genus, "genus", 0)?;
                let lengths = self.lengths(lengths, "lengths")?;
                let method = self.file.pick_or(method, "method", Method::Closed)?;
                let trace = self.file.switch(trace, "trace")?;
                let spec = self.spec(GradingArg::Faces, 4)?;
                match method {
                    Method::Closed if trace => Err(UsageError("--trace needs --method insertion".into()).into()),
                    Method::Closed => Ok(serde_json::to_value(closed_t(genus, &lengths, &solve_rs(&spec)?)?).expect("serializable")),
                    Method::Insertion => {
                        let lmax = lengths.iter().copied().max().unwrap_or(0).max(1);
                        let data = solve_rs(&insertion_spec(&spec, lmax)?)?;
                        let matrix = trumpet_matrix(lmax, &data)?;
                        let mut b = TightBuilder::new(genus, Base::ClosedForm, &data, &matrix)?;
                        let keep = |k: u16| spec.is_active(k);
                        let v = b.get(&lengths)?.restrict_faces(&keep);
                        if trace {
                            Ok(json!({ "series": v, "trace": b.trace_json() }))
                        } else {
                            Ok(serde_json::to_value(v).expect("serializable"))
                        }
                    }
                }
            }
            Command::Cf { lengths, vertices } => {
                let lengths = self.lengths(lengths, "lengths")?;
                let vertices = self.file.pick_or(vertices, "vertices", 0)?;
                let data = solve_rs(&self.spec(GradingArg::Faces, 4)?)?;
                Ok(serde_json::to_value(collet_fusy(&lengths, vertices, &data)?).expect("serializable"))
            }
            Command::Moments { hmax } => {
                let hmax = self.file.pick_or(hmax, "hmax", 2)?;
                let data = solve_rs(&self.spec(GradingArg::Faces, 4)?)?;
                Ok(moments(&data, hmax)?.to_json_value())
            }
            Command::Quasipoly { genus, boundaries, lmax, source } => {
                let genus = self.file.pick_or(genus, "genus", 0)?;
                let n = self.file.pick(boundaries, "boundaries")?.ok_or_else(|| UsageError("--boundaries is required".into()))?;
                let lmax = self.file.pick_or(lmax, "lmax", default_lmax(genus, n))?;
                let source = match self.file.pick_or(source, "source", SourceArg::Insertion)? {
                    SourceArg::Insertion => Source::Insertion,
                    SourceArg::Closed => Source::ClosedForm,
                };
                let spec = self.spec(GradingArg::Faces, 3)?;
                let r = quasipoly(genus, n, lmax, &spec, &source)?;
                if r.passed() {
                    Ok(r.to_json_value())
                } else {
                    Err(Failure::Checks(r.to_json_value()))
                }
            }
            Command::Census { edges, genus, boundaries, vertices } => {
                let mmax = self.file.pick_or(edges, "mmax", DEFAULT_MMAX)?;
                let genus = self.file.pick_or(genus, "genus", 0)?;
                let lengths = self.lengths(boundaries, "boundaries")?;
                let vertices = self.file.pick_or(vertices, "vertices", 0)?;
                let spec = self.spec(GradingArg::Total, 2 * mmax as i64 + 2)?;
                let counts = census_counts(genus, &lengths, vertices, mmax, &spec)?;
                let order = counts.order().min(spec.order());
                let series = counts.series(&lengths, order)?;
                Ok(json!({ "series": series, "diagnostics": counts.to_json_value(&lengths) }))
            }
            Command::Verify { suite, mmax, lmax } => {
                let defaults = Params::default();
                let params = Params {
                    order: self.file.pick_or(self.common.order, "order", defaults.order)?,
                    mmax: self.file.pick_or(mmax, "mmax", defaults.mmax)?,
                    lmax: self.file.pick_or(lmax, "lmax", defaults.lmax)?,
                    ..defaults
                };
                let suite = self.file.pick_or(suite, "suite", "all".to_string())?;
                let suites = select(&suite).map_err(|e| UsageError(e.to_string()))?;
                let results = run_suites(&suites, &params);
                let passed = results.iter().all(|(_, cs)| cs.iter().all(|c| c.passed));
                let doc = json!({
                    "passed": passed,
                    "suites": results.iter().map(|(s, cs)| json!({
                        "suite": s.name(),
                        "checks": cs.iter().map(|c| c.to_json_value()).collect::<Vec<_>>(),
                    })).collect::<Vec<_>>(),
                });
                if passed {
                    Ok(doc)
                } else {
                    Err(Failure::Checks(doc))
                }
            }
        }
    }

    fn emit(&self, doc: &Value) -> Result<(), Failure> {
        let text = serde_json::to_string_pretty(doc).expect("serializable") + "\n";
        match self.file.pick(self.common.output.clone(), "output")? {
            Some(path) => std::fs::write(&path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display()))),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }
}

/// Closed-form T: cylinders, pants, the planar formulas under bipartite weights and genus one.
fn closed_t(genus: u32, lengths: &[u32], data: &DiskData) -> Result<Series, Failure> {
    let bipartite = data.spec().is_bipartite();
    let odd = lengths.iter().filter(|&&l| l % 2 == 1).count();
    let unsupported = || {
        Err(tightmaps::error::Error::UnsupportedCase(format!("no closed form for genus {genus} with lengths {lengths:?}")).into())
    };
    match (genus, lengths) {
        (0, [a, b]) => Ok(cylinder(*a, *b, data)?),
        (0, [a, b, c]) => Ok(pants(*a, *b, *c, data)?),
        (0, ls) if bipartite && ls.len() > 3 => match odd {
            0 => Ok(tgen(ls, data)?),
            2 => Ok(tgen_quasi(ls, data)?),
            c if c % 2 == 1 => Ok(Series::zero(data.grading(), data.spec().order())),
            _ => unsupported(),
        },
        (1, []) => Ok(genus1_f(data)?),
        (1, [l]) if bipartite => Ok(genus1_t_bipartite(*l, data)?),
        (1, [l]) => {
            let lmax = (*l).max(1);
            let ext = solve_rs(&insertion_spec(data.spec(), lmax)?)?;
            let m = trumpet_matrix(lmax, &ext)?;
            let keep = |k: u16| data.spec().is_active(k);
            Ok(genus1_t(*l, &ext, &m)?.restrict_faces(&keep))
        }
        _ => unsupported(),
    }
}

fn run(cli: Cli) -> Result<(Run, Value), (Option<Run>, Failure)> {
    let file = match &cli.common.config {
        Some(p) => ConfigFile::load(p).map_err(|e| (None, e.into()))?,
        None => ConfigFile::default(),
    };
    let run = Run { common: cli.common, file };
    let threads = match run.threads() {
        Ok(t) => t,
        Err(e) => return Err((Some(run), e)),
    };
    if let Some(n) = threads {
        if n == 0 {
            return Err((Some(run), UsageError("thread count must be positive".into()).into()));
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            return Err((Some(run), Failure::Io(e.to_string())));
        }
    }
    match run.dispatch(cli.command) {
        Ok(v) => Ok((run, v)),
        Err(e) => Err((Some(run), e)),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok((run, doc)) => match run.emit(&doc) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => report(Some(&run), e),
        },
        Err((run, e)) => report(run.as_ref(), e),
    }
}

fn report(run: Option<&Run>, e: Failure) -> ExitCode {
    match e {
        Failure::Usage(e) => {
            eprintln!("usage error: {e}");
            ExitCode::from(2)
        }
        Failure::Library(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Failure::Io(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Failure::Checks(doc) => {
            if let Some(run) = run {
                if let Err(Failure::Io(e)) = run.emit(&doc) {
                    eprintln!("error: {e}");
                }
            }
            eprintln!("verification failed");
            ExitCode::from(1)
        }
    }
}

//! `pccc-bound` command-line front end.
//!
//! Every subcommand is a pure function of its flags. CSV outputs start with
//! `#` metadata lines, one of which (`# runspec: …`) holds the canonical
//! argument list that reproduces the file.

pub mod search;
pub mod verify;

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

pub use search::{search_patterns, SearchCandidate, SearchOutcome};
pub use verify::{default_grid, run_case, CaseReport, Coverage, VerifyCase, DEFAULT_BLOCK_LENGTHS};

use crate::cwef::{min_weights_w2, W2Paths};
use crate::pccc::{effective_distance, p2_approximation, truncated_union_bound, PcccConfig};
use crate::puncture::{
    classify, code_rate, default_probe_length, pseudo_random_parity_row, pseudo_random_pattern,
    pseudo_random_pattern_b, Classification, PcccPunctureSet, PseudoVariant, PuncturingPattern,
};
use crate::{Error, Rate, RscCode};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;
pub const EXIT_EMPTY: i32 = 4;

/// Largest interleaver size accepted on the command line.
pub const MAX_BLOCK_LENGTH: usize = 1_000_000;

#[derive(Debug, Parser)]
#[command(
    name = "pccc-bound",
    version,
    about = "Weight-2 union bound approximation for punctured turbo codes"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// P(2) and the truncated union bound over an SNR grid, as CSV.
    Bound(BoundArgs),
    /// Print and classify one puncturing pattern.
    Patterns(PatternsArgs),
    /// Exhaustive search over puncturing patterns of one period.
    ///
    /// Candidates meet the target rate exactly. Catastrophic patterns are
    /// discarded. The rest are ranked by descending free effective distance,
    /// then ascending P(2) at the given SNR, then the row bit strings in
    /// lexicographic order (sys, par1, par2).
    Search(SearchArgs),
    /// Check the closed-form weight-2 enumerators against the trellis DP
    /// and brute-force enumeration.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Args)]
pub struct CodeArgs {
    /// Feedback polynomial of the first constituent (octal).
    #[arg(long, default_value = "15", value_name = "OCTAL")]
    pub gr1: String,
    /// Feedforward polynomial of the first constituent (octal).
    #[arg(long, default_value = "17", value_name = "OCTAL")]
    pub gf1: String,
    /// Feedback polynomial of the second constituent; defaults to --gr1.
    #[arg(long, value_name = "OCTAL")]
    pub gr2: Option<String>,
    /// Feedforward polynomial of the second constituent; defaults to --gf1.
    #[arg(long, value_name = "OCTAL")]
    pub gf2: Option<String>,
}

impl CodeArgs {
    pub fn codes(&self) -> crate::Result<(RscCode, RscCode)> {
        let c1 = RscCode::from_octal(&self.gr1, &self.gf1)?;
        let c2 = RscCode::from_octal(
            self.gr2.as_deref().unwrap_or(&self.gr1),
            self.gf2.as_deref().unwrap_or(&self.gf1),
        )?;
        Ok((c1, c2))
    }
}

#[derive(Debug, Clone, Args)]
pub struct PatternArgs {
    /// Systematic row, e.g. 1000101. Missing rows default to 1.
    #[arg(long, value_name = "BITS")]
    pub sys: Option<String>,
    /// First parity row.
    #[arg(long, value_name = "BITS")]
    pub par1: Option<String>,
    /// Second parity row.
    #[arg(long, value_name = "BITS")]
    pub par2: Option<String>,
    /// Pseudo-random pattern built from the first code's parity response.
    #[arg(long, value_name = "A|B", conflicts_with_all = ["sys", "par1", "par2"])]
    pub pseudo: Option<PseudoVariant>,
    /// Column (1-based) whose systematic zero survives in variant B;
    /// defaults to the last one.
    #[arg(long, value_name = "M", requires = "pseudo")]
    pub keep_zero: Option<usize>,
}

impl PatternArgs {
    pub fn resolve(&self, code1: &RscCode, code2: &RscCode) -> crate::Result<PcccPunctureSet> {
        match self.pseudo {
            Some(variant) => {
                let mut set = match (variant, self.keep_zero) {
                    (PseudoVariant::B, Some(m)) => pseudo_random_pattern_b(code1, m)?,
                    (PseudoVariant::A, Some(_)) => {
                        return Err(Error::Domain(
                            "--keep-zero applies to variant B only".into(),
                        ))
                    }
                    (v, None) => pseudo_random_pattern(code1, v)?,
                };
                if variant == PseudoVariant::B && code2 != code1 {
                    set.par2 = pseudo_random_parity_row(code2)?;
                }
                Ok(set)
            }
            None => PcccPunctureSet::parse(
                self.sys.as_deref().unwrap_or("1"),
                self.par1.as_deref().unwrap_or("1"),
                self.par2.as_deref().unwrap_or("1"),
            ),
        }
    }
}

/// `start:stop:step` in dB, or a single value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnrGrid {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl SnrGrid {
    pub fn single(db: f64) -> Self {
        Self {
            start: db,
            stop: db,
            step: 1.0,
        }
    }

    pub fn points(&self) -> Vec<f64> {
        let count = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        (0..count)
            .map(|i| ((self.start + i as f64 * self.step) * 1e9).round() / 1e9)
            .collect()
    }

    pub fn is_single(&self) -> bool {
        self.start == self.stop
    }
}

impl FromStr for SnrGrid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let fields: Vec<&str> = s.split(':').collect();
        let num = |t: &str| {
            t.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| format!("\"{t}\" is not a finite number"))
        };
        let grid = match fields.as_slice() {
            [v] => Self::single(num(v)?),
            [a, b, c] => Self {
                start: num(a)?,
                stop: num(b)?,
                step: num(c)?,
            },
            _ => {
                return Err(format!(
                    "expected start:stop:step or a single value, got \"{s}\""
                ))
            }
        };
        if grid.step <= 0.0 {
            return Err("SNR step must be positive".into());
        }
        if grid.stop < grid.start {
            return Err("SNR grid is empty: stop is below start".into());
        }
        if grid.points().len() > 100_000 {
            return Err("SNR grid has more than 100000 points".into());
        }
        Ok(grid)
    }
}

impl std::fmt::Display for SnrGrid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_single() {
            write!(f, "{}", self.start)
        } else {
            write!(f, "{}:{}:{}", self.start, self.stop, self.step)
        }
    }
}

fn parse_rate(s: &str) -> Result<Rate, String> {
    let (p, q) = s
        .split_once('/')
        .ok_or_else(|| format!("expected p/q, got \"{s}\""))?;
    let p: u64 = p
        .trim()
        .parse()
        .map_err(|_| format!("bad numerator in \"{s}\""))?;
    let q: u64 = q
        .trim()
        .parse()
        .map_err(|_| format!("bad denominator in \"{s}\""))?;
    if p == 0 || q == 0 || p >= q {
        return Err(format!("rate {s} must lie strictly between 0 and 1"));
    }
    Ok(Rate::new(p, q))
}

#[derive(Debug, Clone, Args)]
pub struct BoundArgs {
    #[command(flatten)]
    pub code: CodeArgs,
    #[command(flatten)]
    pub pattern: PatternArgs,
    /// Interleaver size N.
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
    /// Eb/N0 grid in dB.
    #[arg(long, default_value = "0:8:0.5", value_name = "START:STOP:STEP")]
    pub snr: SnrGrid,
    /// Largest input weight of the truncated bound; 2 skips it.
    #[arg(long, default_value_t = 3)]
    pub wmax: u32,
    /// Largest codeword weight of the truncated bound.
    #[arg(long, default_value_t = 120)]
    pub dmax: u32,
    /// Worker threads.
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct PatternsArgs {
    #[command(flatten)]
    pub code: CodeArgs,
    #[command(flatten)]
    pub pattern: PatternArgs,
    /// Interleaver size used for the minimum weights.
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SearchArgs {
    #[command(flatten)]
    pub code: CodeArgs,
    /// Target code rate.
    #[arg(long, default_value = "1/2", value_parser = parse_rate, value_name = "P/Q")]
    pub rate: Rate,
    /// Puncturing period M (at most 12).
    #[arg(long, default_value_t = 4)]
    pub period: usize,
    /// Interleaver size N.
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
    /// Eb/N0 in dB for the P(2) tie-break.
    #[arg(long, default_value = "6", value_name = "DB")]
    pub snr: SnrGrid,
    /// Number of ranked patterns to print.
    #[arg(long, default_value_t = 20)]
    pub top: usize,
    /// Worker threads.
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// Block lengths replacing the default grid's.
    #[arg(long, value_delimiter = ',')]
    pub n: Vec<usize>,
    /// Worker threads.
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Rotates the pattern seen by the closed form (negative control).
    #[arg(long, default_value_t = 0, hide = true)]
    pub shift: usize,
}

/// A failed run: exit code and message.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse(_) => EXIT_USAGE,
            _ => EXIT_DOMAIN,
        };
        Self::new(code, e.to_string())
    }
}

/// Canonical argument list of a run; the `# runspec:` metadata line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunSpec {
    pub args: Vec<String>,
}

impl RunSpec {
    const PREFIX: &'static str = "# runspec: ";

    pub fn line(&self) -> String {
        format!("{}{}", Self::PREFIX, self.args.join(" "))
    }

    /// Reads the run specification back from a file's metadata.
    pub fn from_metadata(text: &str) -> Option<Self> {
        text.lines()
            .take_while(|l| l.starts_with('#'))
            .find_map(|l| l.strip_prefix(Self::PREFIX))
            .map(|rest| Self {
                args: rest.split_whitespace().map(str::to_owned).collect(),
            })
    }

    fn new(command: &str, code1: &RscCode, code2: &RscCode) -> Self {
        let mut args = vec![command.to_owned()];
        for (flag, code) in [("1", code1), ("2", code2)] {
            args.extend([
                format!("--gr{flag}"),
                code.feedback().to_octal(),
                format!("--gf{flag}"),
                code.feedforward().to_octal(),
            ]);
        }
        Self { args }
    }

    fn push(&mut self, flag: &str, value: impl ToString) {
        self.args.push(format!("--{flag}"));
        self.args.push(value.to_string());
    }
}

fn version_line() -> String {
    format!("# pccc-bound {}", env!("CARGO_PKG_VERSION"))
}

fn check_block_length(n: usize) -> Result<(), Failure> {
    if n > MAX_BLOCK_LENGTH {
        return Err(Failure::new(
            EXIT_DOMAIN,
            format!("--n {n} exceeds {MAX_BLOCK_LENGTH}"),
        ));
    }
    Ok(())
}

fn probability(p: f64) -> String {
    format!("{p:.11e}")
}

pub fn cmd_bound(a: &BoundArgs) -> Result<String, Failure> {
    check_block_length(a.n)?;
    if a.wmax < 2 {
        return Err(Failure::new(EXIT_USAGE, "--wmax must be at least 2"));
    }
    let (c1, c2) = a.code.codes()?;
    let set = a.pattern.resolve(&c1, &c2)?;
    let cfg = PcccConfig::new(c1.clone(), c2.clone(), set.clone(), a.n)?;
    let snr = a.snr.points();
    let dist = effective_distance(&c1, &c2, &set, a.n)?;
    let p2 = p2_approximation(&cfg, &snr)?;
    let truncated = if a.wmax > 2 {
        Some(truncated_union_bound(&cfg, a.wmax, a.dmax, &snr)?)
    } else {
        None
    };

    let mut spec = RunSpec::new("bound", &c1, &c2);
    spec.push("sys", &set.sys);
    spec.push("par1", &set.par1);
    spec.push("par2", &set.par2);
    spec.push("n", a.n);
    spec.push("snr", a.snr);
    spec.push("wmax", a.wmax);
    spec.push("dmax", a.dmax);

    let mut out = String::new();
    let _ = writeln!(out, "{}", version_line());
    let _ = writeln!(out, "{}", spec.line());
    let _ = writeln!(out, "# codes {c1} {c2}, uniform interleaver N={}", a.n);
    let _ = writeln!(out, "# rows {set}");
    let _ = writeln!(out, "# rate {}", cfg.rate());
    let _ = writeln!(
        out,
        "# d_free_eff {} (d_min1 {}, z_min2 {})",
        dist.d_free_eff, dist.d_min1, dist.z_min2
    );
    match &truncated {
        Some(t) => {
            let _ = writeln!(
                out,
                "# truncated union bound: w<={} d<={}, terms dropped: {}",
                a.wmax,
                a.dmax,
                if t.truncated { "yes" } else { "no" }
            );
            let _ = writeln!(
                out,
                "ebn0_db,p2,p2_clamped,truncated_bound,truncated_clamped,ratio"
            );
        }
        None => {
            let _ = writeln!(out, "# truncated union bound: not computed (w_max = 2)");
            let _ = writeln!(out, "ebn0_db,p2,p2_clamped");
        }
    }
    for (i, p) in p2.points.iter().enumerate() {
        let _ = write!(
            out,
            "{},{},{}",
            p.ebn0_db,
            probability(p.value),
            u8::from(p.clamped)
        );
        if let Some(t) = &truncated {
            let q = t.curve.points[i];
            let ratio = if q.raw > 0.0 { p.raw / q.raw } else { f64::NAN };
            let _ = write!(
                out,
                ",{},{},{}",
                probability(q.value),
                u8::from(q.clamped),
                probability(ratio)
            );
        }
        out.push('\n');
    }
    Ok(out)
}

fn weights_text(w: Option<crate::MinWeights>) -> String {
    match w {
        Some(w) => format!("d_min {} z_min {}", w.d_min, w.z_min),
        None => "d_min n/a z_min n/a (no weight-2 path fits in N)".into(),
    }
}

fn join<T: ToString>(items: &[T]) -> String {
    items.iter().map(T::to_string).collect::<Vec<_>>().join(" ")
}

pub fn cmd_patterns(a: &PatternsArgs) -> Result<String, Failure> {
    check_block_length(a.n)?;
    let (c1, c2) = a.code.codes()?;
    let set = a.pattern.resolve(&c1, &c2)?;
    let (first, second) = (set.first()?, set.second()?);
    let class1 = classify(&c1, &first, default_probe_length(&c1));
    let class2 = classify(&c2, &second, default_probe_length(&c2));
    let rate = match code_rate(&set) {
        Ok(r) => r.to_string(),
        Err(Error::DegenerateRate) => "undefined (every bit punctured)".into(),
        Err(e) => return Err(e.into()),
    };

    let mut out = String::new();
    let _ = writeln!(out, "code1 {c1}");
    let _ = writeln!(out, "code2 {c2}");
    let _ = writeln!(out, "sys  [{}]", set.sys);
    let _ = writeln!(out, "par1 [{}]", set.par1);
    let _ = writeln!(out, "par2 [{}]", set.par2);
    let _ = writeln!(out, "rate {rate}");
    let _ = writeln!(
        out,
        "classification {} (C1 {class1}, C2 {class2})",
        class1.min(class2)
    );
    let _ = writeln!(
        out,
        "z_core C1 {}",
        join(W2Paths::new(&c1, &first).core_weights())
    );
    let _ = writeln!(
        out,
        "z_core C2 {}",
        join(W2Paths::new(&c2, &second).core_weights())
    );
    let _ = writeln!(out, "C1 {}", weights_text(min_weights_w2(&c1, &first, a.n)));
    let _ = writeln!(
        out,
        "C2 {}",
        weights_text(min_weights_w2(&c2, &second, a.n))
    );
    match effective_distance(&c1, &c2, &set, a.n) {
        Ok(d) if d.catastrophic => {
            let _ = writeln!(out, "d_free_eff 0 (catastrophic)");
        }
        Ok(d) => {
            let _ = writeln!(out, "d_free_eff {}", d.d_free_eff);
        }
        Err(Error::EmptyEnumerator) => {
            let _ = writeln!(out, "d_free_eff n/a");
        }
        Err(e) => return Err(e.into()),
    }
    Ok(out)
}

pub fn cmd_search(a: &SearchArgs) -> Result<String, Failure> {
    check_block_length(a.n)?;
    if !a.snr.is_single() {
        return Err(Failure::new(
            EXIT_USAGE,
            "search takes a single --snr value",
        ));
    }
    let (c1, c2) = a.code.codes()?;
    let outcome = search_patterns(&c1, &c2, a.rate, a.period, a.n, a.snr.start, a.top)?;
    if outcome.ranked.is_empty() {
        return Err(Failure::new(
            EXIT_EMPTY,
            format!(
                "no non-catastrophic pattern of period {} meets rate {} ({} candidates)",
                a.period, a.rate, outcome.candidates
            ),
        ));
    }
    let mut spec = RunSpec::new("search", &c1, &c2);
    spec.push("rate", a.rate);
    spec.push("period", a.period);
    spec.push("n", a.n);
    spec.push("snr", a.snr);
    spec.push("top", a.top);

    let mut out = String::new();
    let _ = writeln!(out, "{}", version_line());
    let _ = writeln!(out, "{}", spec.line());
    let _ = writeln!(
        out,
        "# candidates {}, catastrophic {}",
        outcome.candidates, outcome.catastrophic
    );
    let _ = writeln!(
        out,
        "# order: d_free_eff descending, p2 ascending, rows lexicographic"
    );
    let _ = writeln!(out, "rank,sys,par1,par2,d_free_eff,p2,classification");
    for (i, c) in outcome.ranked.iter().enumerate() {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            i + 1,
            c.set.sys,
            c.set.par1,
            c.set.par2,
            c.d_free_eff,
            probability(c.p2),
            c.classification
        );
    }
    Ok(out)
}

pub fn cmd_verify(a: &VerifyArgs) -> (String, bool) {
    let mut grid = default_grid();
    if !a.n.is_empty() {
        let mut seen = std::collections::BTreeSet::new();
        grid.retain(|c| seen.insert((c.code.to_string(), c.pattern.clone())));
        grid = grid
            .into_iter()
            .flat_map(|c| a.n.iter().map(move |&n| VerifyCase { n, ..c.clone() }))
            .collect();
    }
    for case in &mut grid {
        case.shift = a.shift;
    }
    let reports = verify::run_grid(&grid);
    let mut out = String::new();
    let (mut failed, mut reduced) = (0usize, 0usize);
    for r in &reports {
        let _ = writeln!(out, "{r}");
        failed += usize::from(!r.passed);
        reduced += usize::from(r.coverage == Coverage::Reduced);
    }
    let _ = writeln!(
        out,
        "summary: {} cases, {} passed, {} failed, {} with reduced coverage (closed form vs DP only)",
        reports.len(),
        reports.len() - failed,
        failed,
        reduced
    );
    (out, failed == 0)
}

/// Writes through a temporary file in the target directory, then renames.
fn write_atomically(path: &Path, text: &str) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(text.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

fn emit(path: Option<&Path>, text: &str, out: &mut dyn Write) -> Result<(), Failure> {
    let res = match path {
        Some(p) => write_atomically(p, text),
        None => out.write_all(text.as_bytes()),
    };
    res.map_err(|e| Failure::new(EXIT_DOMAIN, format!("cannot write output: {e}")))
}

fn with_jobs<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, Failure> {
    match jobs {
        None => Ok(f()),
        Some(0) => Err(Failure::new(EXIT_USAGE, "--jobs must be positive")),
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build()
            .map(|pool| pool.install(f))
            .map_err(|e| Failure::new(EXIT_DOMAIN, format!("cannot start worker pool: {e}"))),
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<i32, Failure> {
    match &cli.command {
        Command::Bound(a) => {
            let text = with_jobs(a.jobs, || cmd_bound(a))??;
            emit(a.out.as_deref(), &text, out)?;
        }
        Command::Patterns(a) => {
            let text = cmd_patterns(a)?;
            emit(a.out.as_deref(), &text, out)?;
        }
        Command::Search(a) => {
            let text = with_jobs(a.jobs, || cmd_search(a))??;
            emit(a.out.as_deref(), &text, out)?;
        }
        Command::Verify(a) => {
            let (text, ok) = with_jobs(a.jobs, || cmd_verify(a))?;
            emit(None, &text, out)?;
            if !ok {
                return Err(Failure::new(EXIT_VERIFY, "verification failed"));
            }
        }
    }
    Ok(EXIT_OK)
}

/// Parses `args` (including the program name) and runs the subcommand.
/// Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };
    match dispatch(&cli, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

/// Classification of a PCCC pattern: the worse of the two constituents'.
pub fn classify_set(
    code1: &RscCode,
    code2: &RscCode,
    set: &PcccPunctureSet,
) -> crate::Result<Classification> {
    let first: PuncturingPattern = set.first()?;
    let second = set.second()?;
    Ok(
        classify(code1, &first, default_probe_length(code1)).min(classify(
            code2,
            &second,
            default_probe_length(code2),
        )),
    )
}

//! Command-line experiments over the `equidist` library. Each subcommand
//! validates its flags, builds the prime tables once, runs inside a pool of
//! `--workers` threads and writes one table as CSV or JSONL.

pub mod format;
pub mod verify;

use std::ffi::OsString;
use std::f64::consts::TAU;
use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use equidist::chatelet::{self, Region, Sector};
use equidist::gaussian;
use equidist::linnik::{self, SectorQuery, DEFAULT_P_CUT};
use equidist::numtheory::DEFAULT_MEMORY_CEILING;
use equidist::quadfields::{self, FORMS_56};
use equidist::quartic::{self, QuarticForm};
use equidist::PrimeTables;
use thiserror::Error;

use crate::format::{emit, Format, Table, Value};

/// Smallest sieve built when `--sieve-limit` is left to the command.
const MIN_SIEVE: u64 = 1 << 16;

/// Angles up to this far above 2π are read as 2π, so that 2π printed to 12
/// significant digits is accepted.
const ANGLE_SLACK: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Compute(#[from] equidist::Error),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
    #[error("{0} acceptance criteria failed")]
    Failed(usize),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

#[derive(Debug, Parser)]
#[command(name = "equidist", version, about = "Character sums, sector counts and Chatelet surface experiments")]
pub struct Cli {
    /// Output encoding.
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    pub format: Format,
    /// Worker threads [default: available cores].
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Sieve limit for the prime tables [default: what the command needs, at least 65536].
    #[arg(long, global = true)]
    pub sieve_limit: Option<u64>,
    /// Write the table here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct SectorArgs {
    /// Primes range over (a·N, b·N].
    #[arg(long, default_value_t = 0.0)]
    pub a: f64,
    #[arg(long, default_value_t = 1.0)]
    pub b: f64,
    /// Arc (c, d] in radians.
    #[arg(long, default_value_t = 0.0, value_parser = parse_angle)]
    pub c: f64,
    #[arg(long, default_value_t = TAU, value_parser = parse_angle)]
    pub d: f64,
}

impl SectorArgs {
    fn query(&self) -> Result<SectorQuery<f64>, CliError> {
        SectorQuery::new(self.a, self.b, self.c, self.d).map_err(|e| usage(e.to_string()))
    }
}

#[derive(Debug, Clone, Args)]
pub struct RegionArgs {
    #[arg(long, default_value_t = -1.0, allow_negative_numbers = true)]
    pub u_lo: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub u_hi: f64,
    #[arg(long, default_value_t = -1.0, allow_negative_numbers = true)]
    pub v_lo: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub v_hi: f64,
}

impl RegionArgs {
    fn region(&self) -> Result<Region<f64>, CliError> {
        Region::new(self.u_lo, self.u_hi, self.v_lo, self.v_hi).map_err(|e| usage(e.to_string()))
    }
}

#[derive(Debug, Clone, Args)]
pub struct FormArgs {
    /// Quartic form as f4,f3,f2,f1,f0.
    #[arg(long, value_parser = parse_form, allow_hyphen_values = true)]
    pub form: [i64; 5],
}

impl FormArgs {
    fn form(&self) -> Result<QuarticForm, CliError> {
        QuarticForm::from_slice(&self.form).map_err(|e| usage(e.to_string()))
    }
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Count p + x² + y² = N with p in a range and arg(x+iy) in an arc, against the main term.
    LinnikCount {
        #[arg(long)]
        n: u64,
        #[command(flatten)]
        sector: SectorArgs,
        /// Truncation point of the singular-series product.
        #[arg(long, default_value_t = DEFAULT_P_CUT)]
        p_cut: u64,
    },
    /// The singular series C(N).
    SingularSeries {
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = DEFAULT_P_CUT)]
        p_cut: u64,
    },
    /// Σ_{p<N} f_h(N − p) and its value times (log N)^{5/4}/N.
    Theorem2 {
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 4)]
        h: u32,
    },
    /// Erdős–Turán terms for the solution angles of p + x² + y² = N.
    EtTerms {
        #[arg(long)]
        n: u64,
        #[command(flatten)]
        sector: SectorArgs,
        /// Number of harmonics.
        #[arg(long, default_value_t = 16)]
        harmonics: u32,
    },
    /// Solutions of p + x² + y² = N by (x mod k, y mod k).
    ResidueCounts {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        k: u32,
    },
    /// ρ(p) for every prime p up to a bound.
    RhoTable {
        #[command(flatten)]
        form: FormArgs,
        #[arg(long)]
        max_p: u64,
    },
    /// N(B) for t²F(u,v) = x² + y² in a region and sector; --solutions lists the tuples.
    ChateletCount {
        #[command(flatten)]
        form: FormArgs,
        #[arg(long)]
        big_b: f64,
        #[command(flatten)]
        region: RegionArgs,
        /// Sector (lo, hi] for arg(x+iy), in radians.
        #[arg(long, default_value_t = 0.0, value_parser = parse_angle)]
        sector_lo: f64,
        #[arg(long, default_value_t = TAU, value_parser = parse_angle)]
        sector_hi: f64,
        /// List every tuple with its split x + iy = ν²α.
        #[arg(long)]
        solutions: bool,
    },
    /// Σ |inner Gaussian character sum| over the box t·max(u², v²) ≤ B.
    Lt2Sum {
        #[command(flatten)]
        form: FormArgs,
        #[arg(long)]
        big_b: f64,
        #[arg(long, default_value_t = 1)]
        h: u32,
    },
    /// S1 = Σ ρ(p)/p, S2 over p ≡ 1 mod 4, S3 weighted by g_{8h}(p).
    SSums {
        #[command(flatten)]
        form: FormArgs,
        #[arg(long)]
        big_b: u64,
        #[arg(long, default_value_t = 1)]
        h: u32,
    },
    /// Archimedean density (π/2)·meas{F > 0} over a region.
    SigmaInf {
        #[command(flatten)]
        form: FormArgs,
        #[command(flatten)]
        region: RegionArgs,
        #[arg(long, default_value_t = 1000)]
        resolution: u32,
    },
    /// Ideals of Z[√2] of norm n with their character values.
    Z2Ideals {
        #[arg(long)]
        n: u64,
    },
    /// Σ |inner Z[√2] character sum| over the box.
    Z2Charsum {
        #[command(flatten)]
        form: FormArgs,
        #[arg(long)]
        big_b: f64,
        #[arg(long, default_value_t = 1)]
        h: u32,
    },
    /// Representations by the four forms of discriminant −56 against ideal counts in Q(√−14).
    M14Identity {
        #[arg(long)]
        max_n: u64,
    },
    /// Σ |inner class character sum| for Q(√−14) over the box.
    CgcSum {
        #[command(flatten)]
        form: FormArgs,
        #[arg(long)]
        big_b: f64,
        /// Class character index 1..=3.
        #[arg(long, default_value_t = 1)]
        j: u8,
    },
    /// Split primes of Q(√−14) up to x by representing form.
    PrimeClasses {
        #[arg(long)]
        x: u64,
    },
    /// Σ_{N(α) ≤ x} Λ(α)(α/|α|)^{4k} for each listed x.
    PntGross {
        /// Comma-separated bounds.
        #[arg(long, value_delimiter = ',', required = true)]
        x: Vec<u64>,
        #[arg(long, default_value_t = 1)]
        k: u64,
    },
    /// g_h(n) directly and by Euler product, f_h(n) and the representation count, for n up to a bound.
    CharSums {
        #[arg(long)]
        max_n: u64,
        #[arg(long, default_value_t = 4)]
        h: u32,
    },
    /// Whether a quartic form is irreducible over Q(i).
    FormCheck {
        #[command(flatten)]
        form: FormArgs,
    },
    /// Run the acceptance suite and print PASS or FAIL per criterion.
    Verify,
}

fn parse_angle(s: &str) -> Result<f64, String> {
    let x: f64 = s.trim().parse().map_err(|_| format!("'{s}' is not a number; give angles in radians"))?;
    if !x.is_finite() {
        return Err(format!("angle must be finite, got {s}"));
    }
    Ok(if x > TAU && x <= TAU + ANGLE_SLACK { TAU } else { x })
}

fn parse_form(s: &str) -> Result<[i64; 5], String> {
    let parts: Vec<i64> = s
        .split(',')
        .map(|p| p.trim().parse::<i64>())
        .collect::<Result<_, _>>()
        .map_err(|_| format!("'{s}' is not a list of integers; expected f4,f3,f2,f1,f0"))?;
    parts.try_into().map_err(|p: Vec<i64>| format!("expected 5 coefficients f4,f3,f2,f1,f0, got {}", p.len()))
}

fn positive_b(b: f64) -> Result<f64, CliError> {
    if b.is_finite() && b > 0.0 {
        Ok(b)
    } else {
        Err(usage(format!("--big-b must be positive and finite, got {b}")))
    }
}

fn at_least(name: &str, value: u64, min: u64) -> Result<u64, CliError> {
    if value < min {
        return Err(usage(format!("--{name} must be at least {min}, got {value}")));
    }
    Ok(value)
}

type Job = Box<dyn FnOnce(&PrimeTables) -> Result<Table, CliError> + Send>;

fn r(x: f64) -> Value {
    Value::Real(x)
}

fn ratio_text(q: num_rational::Ratio<u64>) -> Value {
    if *q.denom() == 1 {
        Value::Text(q.numer().to_string())
    } else {
        Value::Text(format!("{}/{}", q.numer(), q.denom()))
    }
}

/// Validates the flags and returns the sieve size the command needs with the
/// deferred computation.
fn plan(cmd: &Command) -> Result<(u64, Job), CliError> {
    Ok(match cmd.clone() {
        Command::LinnikCount { n, sector, p_cut } => {
            at_least("n", n, 3)?;
            at_least("p-cut", p_cut, 3)?;
            let q = sector.query()?;
            (n.max(p_cut), Box::new(move |t| {
                let rep = linnik::theorem1_report(n, &[q], p_cut, t)?.remove(0);
                let mut out = Table::new(&["n", "a", "b", "c", "d", "empirical", "main_term", "relative_deviation"]);
                out.push(vec![n.into(), r(q.a), r(q.b), r(q.c), r(q.d), rep.empirical.into(), r(rep.main_term), r(rep.relative_deviation)]);
                Ok(out)
            }))
        }
        Command::SingularSeries { n, p_cut } => {
            at_least("n", n, 1)?;
            at_least("p-cut", p_cut, 3)?;
            (n.max(p_cut), Box::new(move |t| {
                let mut out = Table::new(&["n", "p_cut", "value"]);
                out.push(vec![n.into(), p_cut.into(), r(linnik::singular_series(n, p_cut, t)?)]);
                Ok(out)
            }))
        }
        Command::Theorem2 { n, h } => {
            at_least("n", n, 3)?;
            let h_max = 4 * (n as f64).ln().ceil() as u32;
            if h == 0 || h % 4 != 0 || h > h_max {
                return Err(usage(format!("--h must be a positive multiple of 4 at most {h_max}, got {h}")));
            }
            (n, Box::new(move |t| {
                let s: f64 = linnik::theorem2_sum(n, h, t)?;
                let nf = n as f64;
                let mut out = Table::new(&["n", "h", "sum", "normalized"]);
                out.push(vec![n.into(), h.into(), r(s), r(s * nf.ln().powf(1.25) / nf)]);
                Ok(out)
            }))
        }
        Command::EtTerms { n, sector, harmonics } => {
            at_least("n", n, 1)?;
            at_least("harmonics", harmonics as u64, 1)?;
            let q = sector.query()?;
            (n, Box::new(move |t| {
                let angles: Vec<f64> = linnik::solutions(n, t)?
                    .into_iter()
                    .filter(|&(p, _)| q.admits_prime(p, n))
                    .map(|(_, z)| z.arg())
                    .collect();
                let et = linnik::et_terms(&angles, q.c, q.d, harmonics)?;
                let mut out = Table::new(&["n", "h", "char_sum", "points", "in_arc", "main", "discrepancy"]);
                for (h, s) in et.char_sums.iter().enumerate() {
                    out.push(vec![
                        n.into(),
                        (h + 1).into(),
                        r(*s),
                        angles.len().into(),
                        et.count.into(),
                        r(et.main),
                        r(et.exact_discrepancy),
                    ]);
                }
                Ok(out)
            }))
        }
        Command::ResidueCounts { n, k } => {
            at_least("n", n, 1)?;
            if !(1..=20).contains(&k) {
                return Err(usage(format!("--k must be in 1..=20, got {k}")));
            }
            (n, Box::new(move |t| {
                let mut out = Table::new(&["re_mod_k", "im_mod_k", "count"]);
                for ((a, b), c) in linnik::residue_counts(n, k, t)? {
                    out.push(vec![a.into(), b.into(), c.into()]);
                }
                Ok(out)
            }))
        }
        Command::RhoTable { form, max_p } => {
            let f = form.form()?;
            at_least("max-p", max_p, 2)?;
            (max_p, Box::new(move |t| {
                let mut out = Table::new(&["p", "rho", "rho_value"]);
                for &p in t.primes_in(1, max_p as i64)? {
                    let q = quartic::rho(&f, p as u64)?;
                    out.push(vec![p.into(), ratio_text(q), r(*q.numer() as f64 / *q.denom() as f64)]);
                }
                Ok(out)
            }))
        }
        Command::ChateletCount { form, big_b, region, sector_lo, sector_hi, solutions } => {
            let f = form.form()?;
            let b = positive_b(big_b)?;
            let reg = region.region()?;
            let sec = Sector::new(sector_lo, sector_hi).map_err(|e| usage(e.to_string()))?;
            (b.ceil() as u64, Box::new(move |t| {
                if solutions {
                    let mut out = Table::new(&["t", "u", "v", "x", "y", "nu", "alpha"]);
                    for s in chatelet::enumerate_solutions(&f, b, &reg, t)? {
                        let z = gaussian::GaussianInt::new(s.x, s.y);
                        if !sec.contains(z) {
                            continue;
                        }
                        let (nu, alpha) = chatelet::mu_decomposition_check(s.t, s.x, s.y, t)?;
                        out.push(vec![s.t.into(), s.u.into(), s.v.into(), s.x.into(), s.y.into(), nu.to_string().into(), alpha.to_string().into()]);
                    }
                    return Ok(out);
                }
                let q = chatelet::enumerate_nb(&f, b, &reg, &sec, t)?;
                let mut out = Table::new(&["big_b", "count", "count_value"]);
                out.push(vec![r(b), ratio_text(q), r(*q.numer() as f64 / *q.denom() as f64)]);
                Ok(out)
            }))
        }
        Command::Lt2Sum { form, big_b, h } => {
            let f = form.form()?;
            let b = positive_b(big_b)?;
            at_least("h", h as u64, 1)?;
            (b.ceil() as u64, Box::new(move |t| {
                let terms = chatelet::lemma_lt2_terms::<f64>(&f, b, h, t)?;
                let ratio = if terms.tuples == 0 { 0.0 } else { terms.char_sum / terms.tuples as f64 };
                let mut out = Table::new(&["big_b", "h", "char_sum", "tuples", "ratio"]);
                out.push(vec![r(b), h.into(), r(terms.char_sum), terms.tuples.into(), r(ratio)]);
                Ok(out)
            }))
        }
        Command::SSums { form, big_b, h } => {
            let f = form.form()?;
            at_least("big-b", big_b, 3)?;
            (big_b, Box::new(move |t| {
                let s = chatelet::s_sums::<f64>(&f, big_b, h, t)?;
                let mut out = Table::new(&["big_b", "h", "s1", "s2", "s3_re", "s3_im", "loglog_b"]);
                out.push(vec![big_b.into(), h.into(), r(s.s1), r(s.s2), r(s.s3.re), r(s.s3.im), r((big_b as f64).ln().ln())]);
                Ok(out)
            }))
        }
        Command::SigmaInf { form, region, resolution } => {
            let f = form.form()?;
            let reg = region.region()?;
            at_least("resolution", resolution as u64, 100)?;
            (2, Box::new(move |_| {
                let mut out = Table::new(&["resolution", "area", "sigma_inf"]);
                out.push(vec![resolution.into(), r(reg.area()), r(chatelet::sigma_infinity(&f, &reg, resolution)?)]);
                Ok(out)
            }))
        }
        Command::Z2Ideals { n } => {
            at_least("n", n, 1)?;
            (n, Box::new(move |t| {
                let count = quadfields::r2(n, &t.factorize(n)?)?;
                let mut out = Table::new(&["n", "r2", "x", "y", "chi_re", "chi_im"]);
                for ideal in quadfields::ideals_of_norm_z2(n)? {
                    let g = ideal.generator();
                    let chi = ideal.gross_char::<f64>();
                    out.push(vec![n.into(), count.into(), g.x.into(), g.y.into(), r(chi.re), r(chi.im)]);
                }
                Ok(out)
            }))
        }
        Command::Z2Charsum { form, big_b, h } => {
            let f = form.form()?;
            let b = positive_b(big_b)?;
            (b.ceil() as u64, Box::new(move |t| {
                let mut out = Table::new(&["big_b", "h", "value"]);
                out.push(vec![r(b), h.into(), r(quadfields::lemma_z2_sum(&f, b, h, t)?)]);
                Ok(out)
            }))
        }
        Command::M14Identity { max_n } => {
            at_least("max-n", max_n, 1)?;
            (max_n, Box::new(move |t| {
                let mut out = Table::new(&[
                    "n", "reps_f0", "reps_f1", "reps_f2", "reps_f3", "ideals", "class_0", "class_1", "class_2", "class_3", "holds",
                ]);
                for n in 1..=max_n {
                    let f = t.factorize(n)?;
                    let reps: Vec<u64> = (0..FORMS_56.len()).map(|j| quadfields::reps_by_form56(j, n)).collect::<Result<_, _>>()?;
                    let ideals = quadfields::ideal_count_m14(n, &f)?;
                    let classes = quadfields::class_counts_m14(&f)?;
                    let holds = reps.iter().sum::<u64>() as i64 == 2 * ideals && classes.iter().sum::<u64>() as i64 == ideals;
                    let mut row: Vec<Value> = vec![n.into()];
                    row.extend(reps.iter().map(|&x| x.into()));
                    row.push(ideals.into());
                    row.extend(classes.iter().map(|&x| x.into()));
                    row.push(holds.into());
                    out.push(row);
                }
                Ok(out)
            }))
        }
        Command::CgcSum { form, big_b, j } => {
            let f = form.form()?;
            let b = positive_b(big_b)?;
            if !(1..=3).contains(&j) {
                return Err(usage(format!("--j must be in 1..=3, got {j}")));
            }
            (b.ceil() as u64, Box::new(move |t| {
                let mut out = Table::new(&["big_b", "j", "value"]);
                out.push(vec![r(b), j.into(), r(quadfields::class_char_sum_m14(&f, b, j, t)?)]);
                Ok(out)
            }))
        }
        Command::PrimeClasses { x } => {
            at_least("x", x, 2)?;
            (x, Box::new(move |t| {
                let k = quadfields::prime_class_distribution(x, t)?;
                let mut out = Table::new(&["x", "principal", "order_two", "generator_pair", "total"]);
                out.push(vec![x.into(), k.principal.into(), k.order_two.into(), k.generator_pair.into(), k.total().into()]);
                Ok(out)
            }))
        }
        Command::PntGross { x, k } => {
            for &v in &x {
                at_least("x", v, 2)?;
            }
            let need = x.iter().copied().max().unwrap_or(2);
            (need, Box::new(move |t| {
                let mut out = Table::new(&["x", "k", "re", "im", "abs_over_x"]);
                for v in x {
                    let s = gaussian::lambda_gross_sum::<f64>(v, k, t)?;
                    out.push(vec![v.into(), k.into(), r(s.re), r(s.im), r(s.norm() / v as f64)]);
                }
                Ok(out)
            }))
        }
        Command::CharSums { max_n, h } => {
            at_least("max-n", max_n, 1)?;
            (max_n, Box::new(move |t| {
                let mut out = Table::new(&["n", "h", "reps", "g_re", "g_im", "g_euler", "f"]);
                for n in 1..=max_n {
                    let f = t.factorize(n)?;
                    let g = gaussian::g_h::<f64>(n, &f, h)?;
                    let reps = gaussian::representations(n, &f)?.len();
                    let euler = gaussian::g_h_multiplicative::<f64>(&f, h)?;
                    out.push(vec![n.into(), h.into(), reps.into(), r(g.re), r(g.im), r(euler), r(g.norm())]);
                }
                Ok(out)
            }))
        }
        Command::FormCheck { form } => {
            let f = form.form()?;
            (2, Box::new(move |_| {
                let mut out = Table::new(&["form", "irreducible_over_qi"]);
                out.push(vec![f.to_string().into(), quartic::irreducible_over_qi(&f)?.into()]);
                Ok(out)
            }))
        }
        Command::Verify => (verify::SIEVE_LIMIT, Box::new(|t| Ok(verify::report(&verify::run_all(t))))),
    })
}

/// Runs a parsed command and writes its table to `stdout` or `--out`.
pub fn execute(cli: &Cli, stdout: &mut dyn Write) -> Result<(), CliError> {
    let (need, job) = plan(&cli.command)?;
    let limit = match cli.sieve_limit {
        Some(l) if l < need => {
            return Err(usage(format!("--sieve-limit {l} is below the {need} this command needs; raise it or omit the flag")))
        }
        Some(l) => l,
        None => need.max(MIN_SIEVE),
    };
    if limit > DEFAULT_MEMORY_CEILING {
        return Err(usage(format!("sieve limit {limit} exceeds the memory ceiling {DEFAULT_MEMORY_CEILING}; use smaller parameters")));
    }
    let workers = match cli.workers {
        Some(0) => return Err(usage("--workers must be at least 1")),
        Some(w) => w,
        None => std::thread::available_parallelism().map_or(1, |n| n.get()),
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| usage(format!("cannot start {workers} workers: {e}")))?;
    let table = pool.install(|| -> Result<Table, CliError> { job(&PrimeTables::build(limit)?) })?;

    let mut buf = Vec::new();
    emit(&table, cli.format, &mut buf)?;
    match &cli.out {
        Some(path) => File::create(path)?.write_all(&buf)?,
        None => stdout.write_all(&buf)?,
    }
    if matches!(cli.command, Command::Verify) {
        let failed = verify::failed(&table);
        if failed > 0 {
            return Err(CliError::Failed(failed));
        }
    }
    Ok(())
}

/// Parses `args` (program name first) and runs; returns the exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                2
            } else {
                let _ = write!(stdout, "{text}");
                0
            };
        }
    };
    match execute(&cli, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

//! Command-line surface: one binary, subcommand per job. Results go to
//! stdout, diagnostics to stderr. Exit codes: 0 success, 1 failed
//! mathematical check (verify mode), 2 usage or parse error, 3 resource
//! cap.

use std::io::Read as _;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::family::{self, collective_strength_auto, g_sweep, verify_theorem, GTableRow, SweepMode};
use crate::field::{Field, FieldSpec, PrimeField, Rationals, DEFAULT_PRIME};
use crate::groebner::{buchberger, initial_ideal, GroebnerConfig};
use crate::koszul::{betti_table, KoszulConfig};
use crate::monomial::{Frame, MonomialOrder};
use crate::parse::parse_poly_list;
use crate::poly::{PolyRing, Polynomial};
use crate::quotient::{hilbert_series, is_regular_sequence};
use crate::report::{
    to_json, BettiJson, CertificateJson, GroebnerJson, HilbertJson, StrengthJson,
};
use crate::strength::quadric_strength;

#[derive(Parser, Debug)]
#[command(
    name = "glquad",
    version,
    about = "Exact tools for quadric ideals of matrix variables: Groebner bases, Hilbert series, Betti tables, strength"
)]
pub struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FieldArg {
    /// the rational numbers
    Q,
    /// a prime field GF(p); choose p with --p
    Fp,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OrderArg {
    Grevlex,
    Lex,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Table,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    /// over the rationals: a certificate
    Certified,
    /// over GF(p): fast, heuristic for characteristic zero
    Heuristic,
}

impl ModeArg {
    fn sweep_mode(self) -> SweepMode {
        match self {
            ModeArg::Certified => SweepMode::CertifiedQ,
            ModeArg::Heuristic => SweepMode::HeuristicFp,
        }
    }
}

#[derive(Args, Clone, Debug)]
struct CommonOpts {
    /// number of rows of the variable matrix
    #[arg(long)]
    n: usize,
    /// number of columns; defaults to n
    #[arg(long)]
    m: Option<usize>,
    /// generator degree for the family
    #[arg(long, default_value_t = 2)]
    d: u32,
    #[arg(long, value_enum, default_value_t = FieldArg::Q)]
    field: FieldArg,
    /// prime for --field fp
    #[arg(long, default_value_t = DEFAULT_PRIME)]
    p: u64,
    #[arg(long, value_enum, default_value_t = OrderArg::Grevlex)]
    order: OrderArg,
    #[arg(long, value_enum, default_value_t = FormatArg::Table)]
    format: FormatArg,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 500_000)]
    max_pairs: usize,
    #[arg(long, default_value_t = 80)]
    max_degree: u32,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// file of newline-separated expressions replacing the family
    /// generators ('-' for stdin)
    #[arg(long)]
    ideal: Option<String>,
}

impl CommonOpts {
    fn m(&self) -> usize {
        self.m.unwrap_or(self.n)
    }

    fn field_spec(&self) -> FieldSpec {
        match self.field {
            FieldArg::Q => FieldSpec::Rationals,
            FieldArg::Fp => FieldSpec::Prime(self.p),
        }
    }

    fn order(&self) -> MonomialOrder {
        match self.order {
            OrderArg::Grevlex => MonomialOrder::grevlex(),
            OrderArg::Lex => MonomialOrder::lex(),
        }
    }

    fn gcfg(&self) -> GroebnerConfig {
        GroebnerConfig { max_pairs: self.max_pairs, max_degree: self.max_degree }
    }

    fn ring<F: Field>(&self, field: F) -> Result<PolyRing<F>> {
        if self.n < 1 || self.m() < 1 {
            return Err(Error::invalid("frame needs --n >= 1 and --m >= 1"));
        }
        Ok(PolyRing::new(Frame::new(self.n, self.m()), field, self.order()))
    }

    /// The working ideal: user expressions when --ideal is given,
    /// otherwise the family generators in degree d.
    fn generators<F: Field>(&self, ring: &PolyRing<F>) -> Result<Vec<Polynomial<F>>> {
        match &self.ideal {
            Some(path) => {
                let src = if path == "-" {
                    let mut buf = String::new();
                    std::io::stdin()
                        .read_to_string(&mut buf)
                        .map_err(|e| Error::invalid(format!("reading stdin: {e}")))?;
                    buf
                } else {
                    std::fs::read_to_string(path)
                        .map_err(|e| Error::invalid(format!("reading {path}: {e}")))?
                };
                parse_poly_list(ring, &src)
            }
            None => family::orbit_generators(ring, self.d),
        }
    }
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Print the family generators for the frame
    Gen(CommonOpts),
    /// Reduced Groebner basis of the ideal
    Gb(CommonOpts),
    /// Regular-sequence certificate for the generator sequence
    Regseq(CommonOpts),
    /// Hilbert series of the quotient
    Hilbert {
        #[command(flatten)]
        common: CommonOpts,
        /// expand the series up to this degree
        #[arg(long, default_value_t = 10)]
        expand_to: usize,
    },
    /// Graded Betti table of the quotient
    Betti(CommonOpts),
    /// Castelnuovo-Mumford regularity of the quotient
    Reg(CommonOpts),
    /// Strength of a single quadric
    Strength {
        #[command(flatten)]
        common: CommonOpts,
        /// family generator indices "i,j"; alternative to --ideal
        #[arg(long, value_name = "I,J")]
        gen: Option<String>,
    },
    /// Minimal strength over nonzero combinations of the quadrics
    CollectiveStrength(CommonOpts),
    /// Sweep g(n) over a range of n
    GTable {
        #[arg(long)]
        n_from: usize,
        #[arg(long)]
        n_to: usize,
        /// largest m per row; defaults to 2n - 1
        #[arg(long)]
        m_max: Option<usize>,
        #[arg(long, value_enum, default_value_t = ModeArg::Heuristic)]
        mode: ModeArg,
        #[arg(long, default_value_t = DEFAULT_PRIME)]
        p: u64,
        #[arg(long, value_enum, default_value_t = FormatArg::Table)]
        format: FormatArg,
        /// audit every m even after the first failure
        #[arg(long)]
        no_early_exit: bool,
        #[arg(long, default_value_t = 500_000)]
        max_pairs: usize,
        #[arg(long, default_value_t = 80)]
        max_degree: u32,
    },
    /// Check the headline finite-n claims for one n
    VerifyPaper {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = ModeArg::Heuristic)]
        mode: ModeArg,
        #[arg(long, default_value_t = DEFAULT_PRIME)]
        p: u64,
        #[arg(long, value_enum, default_value_t = FormatArg::Table)]
        format: FormatArg,
        #[arg(long, default_value_t = 1)]
        threads: usize,
        #[arg(long, default_value_t = 500_000)]
        max_pairs: usize,
        #[arg(long, default_value_t = 80)]
        max_degree: u32,
    },
}

/// Parse argv, run, and return the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            // clap prints --help/--version to stdout with success
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.cmd) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Dispatch a command body over the selected coefficient field.
macro_rules! with_field {
    ($c:expr, $field:ident, $body:block) => {
        match $c.field_spec() {
            FieldSpec::Rationals => {
                let $field = Rationals;
                $body
            }
            FieldSpec::Prime(p) => {
                let $field = PrimeField::new(p)?;
                $body
            }
        }
    };
}

fn dispatch(cmd: Cmd) -> Result<()> {
    match cmd {
        Cmd::Gen(c) => with_field!(c, field, { cmd_gen(&c, field) }),
        Cmd::Gb(c) => with_field!(c, field, { cmd_gb(&c, field) }),
        Cmd::Regseq(c) => with_field!(c, field, { cmd_regseq(&c, field) }),
        Cmd::Hilbert { common: c, expand_to } => {
            with_field!(c, field, { cmd_hilbert(&c, field, expand_to) })
        }
        Cmd::Betti(c) => with_field!(c, field, { cmd_betti(&c, field) }),
        Cmd::Reg(c) => with_field!(c, field, { cmd_reg(&c, field) }),
        Cmd::Strength { common: c, gen } => {
            let gen = gen
                .map(|s| parse_gen_pair(&s))
                .transpose()?;
            with_field!(c, field, { cmd_strength(&c, field, gen) })
        }
        Cmd::CollectiveStrength(c) => cmd_collective(&c),
        Cmd::GTable {
            n_from,
            n_to,
            m_max,
            mode,
            p,
            format,
            no_early_exit,
            max_pairs,
            max_degree,
        } => cmd_gtable(
            n_from,
            n_to,
            m_max,
            mode,
            p,
            format,
            no_early_exit,
            &GroebnerConfig { max_pairs, max_degree },
        ),
        Cmd::VerifyPaper { n, mode, p, format, threads, max_pairs, max_degree } => {
            cmd_verify(n, mode, p, format, threads, &GroebnerConfig { max_pairs, max_degree })
        }
    }
}

fn parse_gen_pair(s: &str) -> Result<(usize, usize)> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err(Error::invalid("--gen wants two indices, e.g. --gen 1,2"));
    }
    let i = parts[0].trim().parse::<usize>().map_err(|_| Error::invalid("bad --gen index"))?;
    let j = parts[1].trim().parse::<usize>().map_err(|_| Error::invalid("bad --gen index"))?;
    Ok((i, j))
}

fn cmd_gen<F: Field>(c: &CommonOpts, field: F) -> Result<()> {
    let ring = c.ring(field)?;
    let gens = family::orbit_generators(&ring, c.d)?;
    match c.format {
        FormatArg::Table => {
            for g in &gens {
                println!("{}", ring.fmt_poly(g));
            }
        }
        FormatArg::Json => {
            let rendered: Vec<String> = gens.iter().map(|g| ring.fmt_poly(g)).collect();
            println!("{}", to_json(&rendered));
        }
    }
    Ok(())
}

fn cmd_gb<F: Field>(c: &CommonOpts, field: F) -> Result<()> {
    let ring = c.ring(field)?;
    let gens = c.generators(&ring)?;
    let gb = buchberger(&ring, &gens, &c.gcfg())?;
    match c.format {
        FormatArg::Table => {
            for g in &gb.generators {
                println!("{}", ring.fmt_poly(g));
            }
        }
        FormatArg::Json => {
            let rep = GroebnerJson {
                field: ring.field.label(),
                order: format!("{:?}", ring.order.kind).to_lowercase(),
                size: gb.generators.len(),
                generators: gb.generators.iter().map(|g| ring.fmt_poly(g)).collect(),
            };
            println!("{}", to_json(&rep));
        }
    }
    Ok(())
}

fn cmd_regseq<F: Field>(c: &CommonOpts, field: F) -> Result<()> {
    let ring = c.ring(field)?;
    let gens = c.generators(&ring)?;
    let cert = is_regular_sequence(&ring, &gens, &c.gcfg())?;
    let rep = CertificateJson::from_certificate(&cert);
    match c.format {
        FormatArg::Table => {
            println!(
                "verdict={} codim={} expected={} field={} certified={}",
                rep.verdict, rep.codim, rep.expected, rep.field, rep.certified
            );
        }
        FormatArg::Json => println!("{}", to_json(&rep)),
    }
    Ok(())
}

fn cmd_hilbert<F: Field>(c: &CommonOpts, field: F, expand_to: usize) -> Result<()> {
    let ring = c.ring(field)?;
    let gens = c.generators(&ring)?;
    let gb = buchberger(&ring, &gens, &c.gcfg())?;
    let hs = hilbert_series(&initial_ideal(&gb), ring.nvars());
    let rep = HilbertJson::from_series(&hs, expand_to);
    match c.format {
        FormatArg::Table => {
            println!("numerator coefficients (index = degree): {:?}", rep.numerator);
            println!("series coefficients 0..={expand_to}: {:?}", rep.coefficients);
        }
        FormatArg::Json => println!("{}", to_json(&rep)),
    }
    Ok(())
}

fn cmd_betti<F: Field>(c: &CommonOpts, field: F) -> Result<()> {
    let ring = c.ring(field)?;
    let gens = c.generators(&ring)?;
    let kcfg = KoszulConfig { seed: c.seed, ..KoszulConfig::default() };
    let out = betti_table(&ring, &gens, &c.gcfg(), &kcfg)?;
    match c.format {
        FormatArg::Table => {
            print!("{}", out.table.render());
            let reg = out.table.regularity();
            println!(
                "regularity = {}{}",
                reg.value,
                if reg.exact { "" } else { " (lower bound; table truncated)" }
            );
        }
        FormatArg::Json => println!("{}", to_json(&BettiJson::from_outcome(&out))),
    }
    Ok(())
}

fn cmd_reg<F: Field>(c: &CommonOpts, field: F) -> Result<()> {
    let ring = c.ring(field)?;
    let gens = c.generators(&ring)?;
    let kcfg = KoszulConfig { seed: c.seed, ..KoszulConfig::default() };
    let out = betti_table(&ring, &gens, &c.gcfg(), &kcfg)?;
    let reg = out.table.regularity();
    match c.format {
        FormatArg::Table => println!(
            "{}{}",
            reg.value,
            if reg.exact { "" } else { " (lower bound; table truncated)" }
        ),
        FormatArg::Json => println!("{}", to_json(&reg)),
    }
    Ok(())
}

fn cmd_strength<F: Field>(c: &CommonOpts, field: F, gen: Option<(usize, usize)>) -> Result<()> {
    // for --gen i,j the frame only needs m >= j
    let ring = match gen {
        Some((_, j)) if c.m.is_none() => {
            PolyRing::new(Frame::new(c.n, j.max(1)), field, c.order())
        }
        _ => c.ring(field)?,
    };
    let q = match gen {
        Some((i, j)) => family::generator(&ring, i, j)?,
        None => {
            let gens = c.generators(&ring)?;
            if gens.len() != 1 {
                return Err(Error::invalid(
                    "strength wants exactly one quadric; pass --gen i,j or a single-line --ideal",
                ));
            }
            gens.into_iter().next().unwrap()
        }
    };
    let rep = quadric_strength(&ring, &q)?;
    match c.format {
        FormatArg::Table => {
            println!("rank={} strength={}", rep.rank, rep.strength);
            if let Some(w) = &rep.witness {
                for (g, h) in w {
                    println!("  ({}) * ({})", ring.fmt_poly(g), ring.fmt_poly(h));
                }
            }
        }
        FormatArg::Json => println!("{}", to_json(&StrengthJson::from_report(&ring, &rep))),
    }
    Ok(())
}

fn cmd_collective(c: &CommonOpts) -> Result<()> {
    if c.field == FieldArg::Q {
        return Err(Error::invalid(
            "collective strength needs a finite field; pass --field fp (e.g. --p 101)",
        ));
    }
    let out = collective_strength_auto(c.n, c.m(), c.p, c.threads)?;
    match c.format {
        FormatArg::Table => println!("collective strength = {} ({})", out.value, out.method),
        FormatArg::Json => println!("{}", to_json(&out)),
    }
    Ok(())
}

fn render_gtable_row(row: &GTableRow) -> String {
    let g = row.g.map(|g| g.to_string()).unwrap_or_else(|| "?".into());
    let cells: Vec<String> = row
        .verdicts
        .iter()
        .map(|v| {
            let mark = match v.regular {
                Some(true) => "regular",
                Some(false) => "fails",
                None => "capped",
            };
            format!("m={}: {}", v.m, mark)
        })
        .collect();
    format!(
        "n={} g={} bounds=[{}, {}]{} | {}",
        row.n,
        g,
        row.lower_bound,
        row.upper_bound,
        if row.complete { "" } else { " (incomplete)" },
        cells.join(", ")
    )
}

#[allow(clippy::too_many_arguments)]
fn cmd_gtable(
    n_from: usize,
    n_to: usize,
    m_max: Option<usize>,
    mode: ModeArg,
    p: u64,
    format: FormatArg,
    no_early_exit: bool,
    gcfg: &GroebnerConfig,
) -> Result<()> {
    if n_from < 1 || n_to < n_from {
        return Err(Error::invalid("need 1 <= --n-from <= --n-to"));
    }
    let mut rows = Vec::new();
    for n in n_from..=n_to {
        let cap = 2 * n - 1;
        let mm = m_max.map(|m| m.min(cap)).unwrap_or(cap);
        rows.push(g_sweep(n, mm, mode.sweep_mode(), p, gcfg, no_early_exit)?);
    }
    match format {
        FormatArg::Table => {
            for row in &rows {
                println!("{}", render_gtable_row(row));
            }
        }
        FormatArg::Json => println!("{}", to_json(&rows)),
    }
    Ok(())
}

fn cmd_verify(
    n: usize,
    mode: ModeArg,
    p: u64,
    format: FormatArg,
    threads: usize,
    gcfg: &GroebnerConfig,
) -> Result<()> {
    let rep = verify_theorem(n, mode.sweep_mode(), p, gcfg, threads)?;
    match format {
        FormatArg::Table => {
            println!("n={} g={} c={}", rep.n, rep.g, rep.c);
            println!("  regular sequence at g:      {}", yn(rep.regular_ok));
            println!("  generator count C(g+1,2):   {}", yn(rep.generator_count_ok));
            println!("  Betti table = CI pattern:   {}", yn(rep.betti_matches_ci));
            println!("  regularity = c:             {} (reg = {})", yn(rep.regularity_ok), rep.regularity);
            println!(
                "  collective strength:        {} ({} = expected {}, {})",
                yn(rep.collective_ok),
                rep.collective.value,
                rep.collective_expected,
                rep.collective.method
            );
            println!("verdict: {}", if rep.passed { "PASS" } else { "FAIL" });
        }
        FormatArg::Json => println!("{}", to_json(&rep)),
    }
    if rep.passed {
        Ok(())
    } else {
        Err(Error::CheckFailed(format!("verification failed for n = {n}")))
    }
}

fn yn(b: bool) -> &'static str {
    if b { "ok" } else { "FAIL" }
}

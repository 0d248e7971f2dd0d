//! Command-line surface of the `bianchi` binary.
//!
//! Every subcommand produces [`OutputRecord`]s, rendered as json lines, csv
//! or a tex tabular body. Exit codes: 0 on success, 1 on input errors, 2 when
//! `verify` or `replay` finds a hard conformance failure.

pub mod cache;
pub mod record;
pub mod verify;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bounds::{
    cusp_lower_bound, gl2_trace_sigma1, scan_discriminant, scan_level_exponent, scan_weight, GrowthScan,
};
use crate::eisenstein::sczech::{sczech_operator, CharacterVariant, IMAGINARY_TOL, TRACE_TOL};
use crate::eisenstein::{
    boundary_dims, tau_census_report, trace_sigma_h1_eis, trace_sigma_h2_eis, trace_tau_h2_eis,
};
use crate::error::{Error, Result};
use crate::exactmath::{factorize, is_square_free};
use crate::lefschetz::{lefschetz_level_one, lefschetz_sigma_principal, BracketVariant, Level, SRule};
use crate::quadfield::QuadField;
use crate::Involution;

pub use cache::{Cache, CACHE_ENV};
pub use record::{emit, Format, OutputRecord};
pub use verify::Suite;

pub const SOURCE_LEVEL_ONE: &str = "Blume-Nienhaus level-one Lefschetz formula";
pub const SOURCE_GL2: &str = "GL₂ trace from the σ and τ level-one Lefschetz numbers";

/// Largest matrix dimension for which `sczech` also reports `‖M² − I‖∞`.
const INVOLUTION_CHECK_LIMIT: usize = 1000;

/// Largest level at which `eisenstein h2 --involution tau` attaches the
/// coset census.
const CENSUS_LEVEL_LIMIT: u64 = 50;

#[derive(Debug, Parser)]
#[command(name = "bianchi", version, about = "Lefschetz numbers, Eisenstein traces and cuspidal lower bounds for Bianchi groups")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Invariants of Q(√d).
    Field(FieldArgs),
    #[command(subcommand)]
    Lefschetz(LefschetzCmd),
    #[command(subcommand)]
    Eisenstein(EisensteinCmd),
    /// Trace of σ on the span of the Sczech cocycles at level N.
    Sczech(SczechArgs),
    /// Lower bound for dim H¹_cusp(Γ(N), E_{k,k}).
    Bound(BoundArgs),
    /// Trace of σ on H¹(GL₂(O), E_{k,k}).
    Gl2(Gl2Args),
    /// Grid of computations over lists of d, N and k.
    Table(TableArgs),
    #[command(subcommand)]
    Scan(ScanCmd),
    /// Oracle suites.
    Verify(VerifyArgs),
    /// Re-runs json records and checks they reproduce bit for bit.
    Replay(ReplayArgs),
}

#[derive(Debug, Args)]
pub struct FieldArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub d: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SRuleArg {
    OddPrimes,
    OddRamified,
}

impl From<SRuleArg> for SRule {
    fn from(s: SRuleArg) -> Self {
        match s {
            SRuleArg::OddPrimes => SRule::OddPrimesDividingLevel,
            SRuleArg::OddRamified => SRule::OddRamifiedPrimesDividingLevel,
        }
    }
}

impl SRuleArg {
    fn name(self) -> &'static str {
        match self {
            SRuleArg::OddPrimes => "odd-primes",
            SRuleArg::OddRamified => "odd-ramified",
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum LefschetzCmd {
    /// L(σ, Γ(N), E_{k,k}).
    Principal {
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
        #[arg(long = "N")]
        n: u64,
        #[arg(long)]
        k: u32,
        #[arg(long, default_value = "sigma")]
        involution: Involution,
        /// How the Rohlfs parameter s is counted.
        #[arg(long = "s-rule", value_enum, default_value_t = SRuleArg::OddPrimes)]
        s_rule: SRuleArg,
    },
    /// L(ρ, SL₂(O), E_{k,k}).
    LevelOne {
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        involution: Involution,
        #[arg(long, default_value = "torsion-char")]
        bracket: BracketVariant,
    },
}

#[derive(Debug, Subcommand)]
pub enum EisensteinCmd {
    /// Trace of σ or τ on H²_Eis(Γ(N), E_{k,k}); N = 1 is level one.
    H2 {
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
        #[arg(long = "N")]
        n: u64,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        involution: Involution,
    },
    /// Trace of σ on H¹_Eis(Γ(pⁿ), C).
    H1 {
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: u32,
    },
    /// Cusp count and boundary cohomology dimensions of Γ(N).
    Cusps {
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
        #[arg(long = "N")]
        n: u64,
    },
}

#[derive(Debug, Args)]
pub struct SczechArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub d: i64,
    #[arg(long = "N")]
    pub n: u32,
    #[arg(long, default_value = "symplectic-invdiff")]
    pub variant: CharacterVariant,
    /// Writes the matrix as "i j re im" lines.
    #[arg(long = "emit-matrix")]
    pub emit_matrix: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub d: i64,
    #[arg(long = "N")]
    pub n: u64,
    #[arg(long)]
    pub k: u32,
    #[arg(long, default_value = "sigma")]
    pub involution: Involution,
}

#[derive(Debug, Args)]
pub struct Gl2Args {
    #[arg(long, allow_hyphen_values = true)]
    pub d: i64,
    #[arg(long)]
    pub k: u32,
    #[arg(long, default_value = "torsion-char")]
    pub bracket: BracketVariant,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Quantity {
    Bound,
    Lefschetz,
    Cusps,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[arg(long = "d-list", value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub d_list: Vec<i64>,
    #[arg(long = "N-list", value_delimiter = ',', required = true)]
    pub n_list: Vec<u64>,
    #[arg(long = "k-list", value_delimiter = ',', default_value = "0")]
    pub k_list: Vec<u32>,
    #[arg(long, value_enum, default_value_t = Quantity::Bound)]
    pub quantity: Quantity,
}

#[derive(Debug, Subcommand)]
pub enum ScanCmd {
    /// Bound at Γ(pⁿ) against p^{3n}.
    Level {
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
        #[arg(long)]
        p: u64,
        #[arg(long = "n-max")]
        n_max: u32,
        #[arg(long, default_value_t = 0)]
        k: u32,
        #[arg(long, default_value_t = 0.05)]
        floor: f64,
    },
    /// L(σ, Γ(N), E_{k,k}) against k + 1.
    Weight {
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
        #[arg(long = "N")]
        n: u64,
        #[arg(long = "k-max")]
        k_max: u32,
    },
    /// GL₂ bound against φ(|D|) over square-free d in [d-min, −2].
    Discriminant {
        #[arg(long = "d-min", allow_hyphen_values = true)]
        d_min: i64,
        #[arg(long, default_value_t = 0)]
        k: u32,
        #[arg(long, default_value = "torsion-char")]
        bracket: BracketVariant,
    },
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(value_enum, default_value_t = Suite::All)]
    pub suite: Suite,
}

#[derive(Debug, Args)]
pub struct ReplayArgs {
    /// File of json records; "-" is not supported, pass a path.
    pub input: PathBuf,
}

fn field(d: i64) -> Result<QuadField> {
    QuadField::new(d)
}

pub fn field_record(d: i64) -> Result<OutputRecord> {
    let f = field(d)?;
    let cache = Cache::from_env();
    let mut r = OutputRecord::new("field", "field").arg("d", d).with_field(&f);
    let omega = f.omega();
    r.value("D", f.disc())
        .value("D2", f.d2())
        .value("h", f.class_number())
        .value("t", f.t())
        .value("two_torsion", f.two_torsion_count())
        .value("omega_squared", format!("{} + {}ω", omega.constant, omega.linear))
        .value(
            "ramified_primes",
            f.ramified_primes().iter().map(|p| p.to_string()).collect::<Vec<_>>().join("|"),
        );
    if cache.is_enabled() {
        let cached = cache.class_number(&f)?;
        if cached != f.class_number() {
            r.warn(format!("cached class number {cached} differs from {}", f.class_number()));
        }
    }
    r.source("reduced binary quadratic forms").source("genus theory 2^{t−1}");
    Ok(r)
}

pub fn lefschetz_principal_record(d: i64, n: u64, k: u32, inv: Involution, s_rule: SRuleArg) -> Result<OutputRecord> {
    if inv == Involution::Tau {
        return Err(Error::pre("lefschetz_sigma_principal", "only σ has a principal-level formula"));
    }
    let f = field(d)?;
    let level = Level::with_s_rule(&f, n, s_rule.into())?;
    let l = lefschetz_sigma_principal(&f, &level, k)?;
    let mut r = OutputRecord::new("lefschetz principal", "lefschetz")
        .arg("d", d)
        .arg("N", n)
        .arg("k", k)
        .arg("involution", inv)
        .arg("s-rule", s_rule.name())
        .with_field(&f);
    r.value("L", &l)
        .value("A", &level.a)
        .value("B", &level.b)
        .value("A_plus_2B", level.a_plus_2b())
        .value("j2", level.j2)
        .value("s", level.s)
        .value("validated", level.validated);
    for w in &level.warnings {
        r.warn(w.clone());
    }
    r.source(crate::bounds::SOURCE_LEFSCHETZ);
    Ok(r)
}

pub fn lefschetz_level_one_record(d: i64, k: u32, inv: Involution, bracket: BracketVariant) -> Result<OutputRecord> {
    let f = field(d)?;
    let l = lefschetz_level_one(&f, inv, k, bracket);
    let mut r = OutputRecord::new("lefschetz level-one", "lefschetz_level_one")
        .arg("d", d)
        .arg("k", k)
        .arg("involution", inv)
        .arg("bracket", bracket)
        .with_field(&f);
    r.value("L", &l.value).value("integral", l.integral);
    for (i, t) in l.terms.iter().enumerate() {
        r.value(&format!("term{}", i + 1), t);
    }
    if !l.integral {
        r.warn(format!("non-integral Lefschetz number under the {bracket} bracket reading"));
    }
    if k % 2 == 1 {
        r.warn("odd weight: the bracket reading is unadjudicated here");
    }
    r.source(SOURCE_LEVEL_ONE).source(format!("bracket variant {bracket}"));
    Ok(r)
}

pub fn h2_record(d: i64, n: u64, k: u32, inv: Involution) -> Result<OutputRecord> {
    let f = field(d)?;
    let value = match inv {
        Involution::Sigma => trace_sigma_h2_eis(&f, n, k)?,
        Involution::Tau => trace_tau_h2_eis(&f, n, k)?,
    };
    let mut r = OutputRecord::new("eisenstein h2", "trace_h2_eis")
        .arg("d", d)
        .arg("N", n)
        .arg("k", k)
        .arg("involution", inv)
        .with_field(&f);
    r.value("trace", &value);
    r.source(crate::bounds::SOURCE_H2);
    if inv == Involution::Tau && n <= CENSUS_LEVEL_LIMIT {
        if let Some((p, e)) = factorize(n as i64)?.as_prime_power().filter(|&(p, _)| p != 2) {
            let report = tau_census_report(&f, p, e, k)?;
            r.value("census_trace", &report.census_trace)
                .value("census_matches", report.matches);
            if !report.matches {
                r.warn(format!(
                    "open question: τ-fixed coset census gives {} (trace {}), closed count {}",
                    report.census.census, report.census_trace, report.census.formula
                ));
            }
        }
    }
    Ok(r)
}

pub fn h1_record(d: i64, p: u64, n: u32) -> Result<OutputRecord> {
    let f = field(d)?;
    let value = trace_sigma_h1_eis(&f, p, n)?;
    let mut r = OutputRecord::new("eisenstein h1", "trace_h1_eis")
        .arg("d", d)
        .arg("p", p)
        .arg("n", n)
        .with_field(&f);
    r.value("trace", value);
    r.source(crate::bounds::SOURCE_H1_SCZECH);
    Ok(r)
}

pub fn cusps_record(d: i64, n: u64) -> Result<OutputRecord> {
    let f = field(d)?;
    let dims = boundary_dims(&f, n, 0)?;
    let mut r = OutputRecord::new("eisenstein cusps", "cusps").arg("d", d).arg("N", n).with_field(&f);
    r.value("cusps", &dims.h0)
        .value("h0_boundary", &dims.h0)
        .value("h1_boundary", &dims.h1)
        .value("h2_boundary", &dims.h2);
    r.source("cusp count h·#SL₂(O/(N))/N²");
    Ok(r)
}

pub fn sczech_record(d: i64, n: u32, variant: CharacterVariant, emit_matrix: Option<&PathBuf>) -> Result<OutputRecord> {
    let f = field(d)?;
    let m = sczech_operator(&f, n, variant)?;
    let t = m.trace();
    let expected = -((n as f64).powi(2) + 1.0);
    let mut r = OutputRecord::new("sczech", "sczech_trace")
        .arg("d", d)
        .arg("N", n)
        .arg("variant", variant)
        .with_field(&f);
    if let Some(path) = emit_matrix {
        r = r.arg("emit-matrix", path.display());
        let file = std::fs::File::create(path)?;
        m.write_matrix(std::io::BufWriter::new(file))?;
    }
    r.value("trace_re", format!("{:.16e}", t.re))
        .value("trace_im", format!("{:.16e}", t.im))
        .value("expected", format!("{expected}"))
        .value("dim", m.dim())
        .value("variant", variant);
    if m.dim() <= INVOLUTION_CHECK_LIMIT {
        r.value("involution_defect", format!("{:.16e}", m.involution_defect()));
    } else {
        r.warn(format!("‖M² − I‖∞ skipped above dimension {INVOLUTION_CHECK_LIMIT}"));
    }
    if (t.re - expected).abs() >= TRACE_TOL {
        r.warn(format!("trace differs from −(N² + 1) = {expected}"));
    }
    if t.im.abs() >= IMAGINARY_TOL {
        r.warn("trace has a non-negligible imaginary part");
    }
    r.source(crate::bounds::SOURCE_H1_SCZECH)
        .source(format!("character variant {variant}"));
    Ok(r)
}

pub fn bound_record(d: i64, n: u64, k: u32, inv: Involution) -> Result<OutputRecord> {
    let f = field(d)?;
    let level = Level::new(&f, n)?;
    let b = cusp_lower_bound(&f, &level, k, inv)?;
    let mut r = bound_query(d, n, k, inv).with_field(&f);
    r.value("bound", &b.bound)
        .value("mode", b.mode)
        .value("L", &b.lefschetz)
        .value("tr0", &b.tr0)
        .value("tr1_eis", &b.tr1_eis)
        .value("tr2_eis", &b.tr2_eis);
    r.warnings = b.warnings.clone();
    r.provenance = b.provenance.iter().map(|p| format!("{}: {}", p.ingredient, p.source)).collect();
    Ok(r)
}

fn bound_query(d: i64, n: u64, k: u32, inv: Involution) -> OutputRecord {
    OutputRecord::new("bound", "bound")
        .arg("d", d)
        .arg("N", n)
        .arg("k", k)
        .arg("involution", inv)
}

pub fn gl2_record(d: i64, k: u32, bracket: BracketVariant) -> Result<OutputRecord> {
    let f = field(d)?;
    let t = gl2_trace_sigma1(&f, k, bracket);
    let mut r = OutputRecord::new("gl2", "gl2_trace")
        .arg("d", d)
        .arg("k", k)
        .arg("bracket", bracket)
        .with_field(&f);
    r.value("trace", &t.value)
        .value("integral", t.integral)
        .value("L_sigma", &t.lefschetz_sigma)
        .value("L_tau", &t.lefschetz_tau);
    if t.integral {
        r.value("lower_bound", t.value.to_integer().magnitude());
    } else {
        r.warn(format!("non-integral trace {} under the {bracket} bracket reading", t.value));
    }
    if t.unadjudicated {
        r.warn("unadjudicated: odd weight");
    }
    r.source(SOURCE_GL2).source(SOURCE_LEVEL_ONE).source(format!("bracket variant {bracket}"));
    Ok(r)
}

fn scan_records(scan: &GrowthScan, base: OutputRecord) -> Vec<OutputRecord> {
    scan.rows
        .iter()
        .map(|row| {
            let mut r = base.clone();
            r.result.kind = "scan".into();
            r.value("scan", &scan.kind)
                .value("param", row.param)
                .value("value", &row.value)
                .value("reference", &row.reference)
                .value("ratio", format!("{:.16e}", row.ratio))
                .value("min_ratio", format!("{:.16e}", scan.min_ratio))
                .value("above_floor", scan.above_floor);
            if let Some(mode) = row.mode {
                r.value("mode", mode);
            }
            r
        })
        .collect()
}

fn table_records(args: &TableArgs) -> Vec<OutputRecord> {
    let mut out = Vec::new();
    for &d in &args.d_list {
        for &n in &args.n_list {
            match args.quantity {
                Quantity::Cusps => out.push(cusps_record(d, n).unwrap_or_else(|e| {
                    error_record(OutputRecord::new("eisenstein cusps", "cusps").arg("d", d).arg("N", n), e)
                })),
                Quantity::Bound | Quantity::Lefschetz => {
                    for &k in &args.k_list {
                        let rec = if args.quantity == Quantity::Bound {
                            bound_record(d, n, k, Involution::Sigma)
                                .unwrap_or_else(|e| error_record(bound_query(d, n, k, Involution::Sigma), e))
                        } else {
                            lefschetz_principal_record(d, n, k, Involution::Sigma, SRuleArg::OddPrimes)
                                .unwrap_or_else(|e| {
                                    let q = OutputRecord::new("lefschetz principal", "lefschetz")
                                        .arg("d", d)
                                        .arg("N", n)
                                        .arg("k", k)
                                        .arg("involution", Involution::Sigma)
                                        .arg("s-rule", SRuleArg::OddPrimes.name());
                                    error_record(q, e)
                                })
                        };
                        out.push(rec);
                    }
                }
            }
        }
    }
    out
}

/// A row whose computation failed a precondition.
fn error_record(mut base: OutputRecord, e: Error) -> OutputRecord {
    base.result.kind = "error".into();
    base.warn(e.to_string());
    base
}

/// Outcome of a subcommand: records plus whether a hard check failed.
pub struct Outcome {
    pub records: Vec<OutputRecord>,
    pub hard_failure: bool,
}

impl From<Vec<OutputRecord>> for Outcome {
    fn from(records: Vec<OutputRecord>) -> Self {
        Outcome {
            records,
            hard_failure: false,
        }
    }
}

pub fn execute(command: &Command) -> Result<Outcome> {
    let one = |r: Result<OutputRecord>| r.map(|r| Outcome::from(vec![r]));
    match command {
        Command::Field(a) => one(field_record(a.d)),
        Command::Lefschetz(LefschetzCmd::Principal { d, n, k, involution, s_rule }) => {
            one(lefschetz_principal_record(*d, *n, *k, *involution, *s_rule))
        }
        Command::Lefschetz(LefschetzCmd::LevelOne { d, k, involution, bracket }) => {
            one(lefschetz_level_one_record(*d, *k, *involution, *bracket))
        }
        Command::Eisenstein(EisensteinCmd::H2 { d, n, k, involution }) => one(h2_record(*d, *n, *k, *involution)),
        Command::Eisenstein(EisensteinCmd::H1 { d, p, n }) => one(h1_record(*d, *p, *n)),
        Command::Eisenstein(EisensteinCmd::Cusps { d, n }) => one(cusps_record(*d, *n)),
        Command::Sczech(a) => one(sczech_record(a.d, a.n, a.variant, a.emit_matrix.as_ref())),
        Command::Bound(a) => one(bound_record(a.d, a.n, a.k, a.involution)),
        Command::Gl2(a) => one(gl2_record(a.d, a.k, a.bracket)),
        Command::Table(a) => Ok(table_records(a).into()),
        Command::Scan(ScanCmd::Level { d, p, n_max, k, floor }) => {
            let f = field(*d)?;
            let ns: Vec<u32> = (1..=*n_max).collect();
            let scan = scan_level_exponent(&f, *p, &ns, *k, *floor)?;
            let base = OutputRecord::new("scan level", "scan")
                .arg("d", d)
                .arg("p", p)
                .arg("n-max", n_max)
                .arg("k", k)
                .arg("floor", floor)
                .with_field(&f);
            Ok(scan_records(&scan, base).into())
        }
        Command::Scan(ScanCmd::Weight { d, n, k_max }) => {
            let f = field(*d)?;
            let ks: Vec<u32> = (0..=*k_max).collect();
            let scan = scan_weight(&f, *n, &ks, 0.0)?;
            let base = OutputRecord::new("scan weight", "scan")
                .arg("d", d)
                .arg("N", n)
                .arg("k-max", k_max)
                .with_field(&f);
            Ok(scan_records(&scan, base).into())
        }
        Command::Scan(ScanCmd::Discriminant { d_min, k, bracket }) => {
            let ds: Vec<i64> = (*d_min..=-2).rev().filter(|&d| d != -3 && is_square_free(d)).collect();
            let scan = scan_discriminant(&ds, *k, *bracket)?;
            let base = OutputRecord::new("scan discriminant", "scan")
                .arg("d-min", d_min)
                .arg("k", k)
                .arg("bracket", bracket);
            Ok(scan_records(&scan, base).into())
        }
        Command::Verify(a) => Ok(verify::run_suite(a.suite)),
        Command::Replay(a) => replay_file(&a.input),
    }
}

/// Re-runs the query of `record` and reports whether an identical record is
/// produced.
pub fn replay(record: &OutputRecord) -> Result<bool> {
    let mut argv = vec!["bianchi".to_string()];
    argv.extend(record.argv());
    let cli = Cli::try_parse_from(&argv).map_err(|e| Error::pre("replay", e.to_string()))?;
    let produced = match execute(&cli.command) {
        Ok(outcome) => outcome.records,
        Err(e) => vec![error_record(record.clone_query(), e)],
    };
    Ok(produced.iter().any(|r| r == record))
}

impl OutputRecord {
    fn clone_query(&self) -> OutputRecord {
        OutputRecord {
            query: self.query.clone(),
            field: None,
            result: record::ResultBlock {
                kind: self.result.kind.clone(),
                values: Default::default(),
            },
            warnings: Vec::new(),
            provenance: Vec::new(),
        }
    }
}

fn replay_file(path: &PathBuf) -> Result<Outcome> {
    let text = std::fs::read_to_string(path)?;
    let records = record::parse_json_lines(&text).map_err(|e| Error::pre("replay", format!("invalid json record: {e}")))?;
    let mut out = Vec::new();
    let mut hard_failure = false;
    for (i, rec) in records.iter().enumerate() {
        let same = replay(rec)?;
        hard_failure |= !same;
        let mut r = OutputRecord::new("replay", "replay").arg("input", path.display());
        r.value("index", i)
            .value("command", &rec.query["command"])
            .value("status", if same { "identical" } else { "different" });
        out.push(r);
    }
    Ok(Outcome {
        records: out,
        hard_failure,
    })
}

/// Runs the CLI on `args` (including the program name) and returns the exit
/// code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    0
                }
                _ => {
                    let _ = write!(err, "{e}");
                    1
                }
            };
        }
    };
    match execute(&cli.command) {
        Ok(outcome) => {
            if let Err(e) = emit(&outcome.records, cli.format, out) {
                let _ = writeln!(err, "error: {e}");
                return 1;
            }
            if outcome.hard_failure {
                2
            } else {
                0
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

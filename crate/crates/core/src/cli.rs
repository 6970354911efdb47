//! The `qalg` command-line tool.
//!
//! Every subcommand prints a [`RunReport`] to standard output (text by
//! default, JSON with `--json`). Exit code 0 means every check passed, 1 means
//! a check failed, 2 means the arguments or an input file were malformed.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::bundle::{self, REP_TOL};
use crate::car::{self, CAR_TOL};
use crate::convolution::{ConvFunction, GroupAlgebraElement};
use crate::equivalence;
use crate::flips::SiteId;
use crate::io::{self, AlgebraFile, ConvFile, FamilyFile, GroupAlgebraFile, SectionFile, StateFile};
use crate::oracle;
use crate::report::RunReport;
use crate::sampling;
use crate::strings;
use crate::theta::ThetaFamily;
use crate::{Error, Result};

/// Residual tolerance for the exact algebraic identities on sparse data.
pub const ALGEBRA_TOL: f64 = 1e-12;
/// Residual tolerance for comparisons against the dense oracle.
pub const ORACLE_TOL: f64 = 1e-10;
/// Integer comparisons pass with residual 0 against this tolerance.
pub const EXACT_TOL: f64 = 0.5;

#[derive(Debug, Parser)]
#[command(name = "qalg", version, about = "Sparse infinite-qubit operator algebras and their checks")]
struct Cli {
    /// Print the report as JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Write the computed object (or the report when there is none) to FILE.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Anticommutation relations of the Jordan-Wigner generators on N sites.
    CarCheck {
        #[arg(long, value_name = "N")]
        sites: usize,
        /// Use generators without the σ³ chain; the check is expected to fail.
        #[arg(long)]
        negative_control: bool,
    },
    /// Decide unitary equivalence of two reference families.
    EquivCheck {
        #[arg(long, value_name = "FILE")]
        family_a: PathBuf,
        #[arg(long, value_name = "FILE")]
        family_b: PathBuf,
        /// Also report the series summed over sites 1..=N.
        #[arg(long, value_name = "N")]
        partial_terms: Option<usize>,
    },
    /// Convolution product of two functions.
    Convolve {
        #[arg(long, value_name = "FILE")]
        lhs: PathBuf,
        #[arg(long, value_name = "FILE")]
        rhs: PathBuf,
        #[arg(long, value_enum, default_value_t = ConvKind::Groupoid)]
        kind: ConvKind,
    },
    /// Norm of a function.
    Norm {
        #[arg(long, value_enum)]
        kind: NormKind,
        #[arg(long, value_name = "FILE")]
        lhs: PathBuf,
    },
    /// Random-section test that π is a *-representation.
    RepCheck {
        #[arg(long, value_name = "FILE", requires = "rhs")]
        lhs: Option<PathBuf>,
        #[arg(long, value_name = "FILE", requires = "lhs")]
        rhs: Option<PathBuf>,
        /// Section to which π(lhs) is applied; the image goes to --out.
        #[arg(long, value_name = "FILE", requires = "lhs")]
        section: Option<PathBuf>,
        /// Flip sites used when lhs and rhs are drawn at random.
        #[arg(long, value_name = "N", default_value_t = 4)]
        sites: usize,
        #[arg(long, value_name = "K", default_value_t = 20)]
        trials: usize,
        #[arg(long, value_name = "S", default_value_t = 0)]
        seed: u64,
    },
    /// Sparse application against the dense Kronecker oracle.
    OracleCompare {
        #[arg(long, value_name = "M")]
        sites: usize,
        #[arg(long, value_name = "K", default_value_t = 100)]
        trials: usize,
        #[arg(long, value_name = "S", default_value_t = 0)]
        seed: u64,
        /// Apply this algebra element instead of random ones.
        #[arg(long, value_name = "FILE")]
        lhs: Option<PathBuf>,
        /// Apply to this state instead of random ones.
        #[arg(long, value_name = "FILE")]
        rhs: Option<PathBuf>,
    },
    /// Rank of all operator strings and of the vacuum orbit on M sites.
    RankCheck {
        #[arg(long, value_name = "M")]
        sites: usize,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ConvKind {
    /// Functions on the action groupoid.
    Groupoid,
    /// Elements of the group algebra.
    Group,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum NormKind {
    /// I-norm of a function on the action groupoid.
    INorm,
    /// ℓ¹ norm of a group algebra element.
    Group,
}

/// Runs the tool on `argv` (including the program name) with the process
/// streams.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I, T>(argv: I, out: &mut impl Write, err: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    0
                }
                _ => {
                    let text = e.to_string();
                    let first = text.lines().next().unwrap_or("usage error");
                    let _ = writeln!(err, "{first}");
                    2
                }
            };
        }
    };
    match execute(&cli) {
        Ok((report, artifact)) => {
            let text = if cli.json { report.to_json() + "\n" } else { report.to_string() };
            let written = match &cli.out {
                Some(path) => match artifact {
                    Some(value) => io::write_json(path, &value),
                    None => io::write_json(path, &report),
                },
                None => Ok(()),
            };
            if let Err(e) = written {
                let _ = writeln!(err, "error: {e}");
                return 2;
            }
            let _ = out.write_all(text.as_bytes());
            if report.passed() {
                0
            } else {
                1
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {}", one_line(&e.to_string()));
            2
        }
    }
}

fn one_line(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn load<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    io::read_json(path).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))
}

fn sites_upto(n: usize) -> Vec<SiteId> {
    (1..=n as u32).map(SiteId).collect()
}

type Outcome = (RunReport, Option<serde_json::Value>);

fn execute(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::CarCheck { sites, negative_control } => car_check(*sites, *negative_control),
        Command::EquivCheck {
            family_a,
            family_b,
            partial_terms,
        } => equiv_check(family_a, family_b, *partial_terms),
        Command::Convolve { lhs, rhs, kind } => convolve(lhs, rhs, *kind),
        Command::Norm { kind, lhs } => norm(*kind, lhs),
        Command::RepCheck {
            lhs,
            rhs,
            section,
            sites,
            trials,
            seed,
        } => rep_check(lhs.as_deref(), rhs.as_deref(), section.as_deref(), *sites, *trials, *seed),
        Command::OracleCompare {
            sites,
            trials,
            seed,
            lhs,
            rhs,
        } => oracle_compare(*sites, *trials, *seed, lhs.as_deref(), rhs.as_deref()),
        Command::RankCheck { sites } => rank_check(*sites),
    }
}

fn car_check(sites: usize, negative_control: bool) -> Result<Outcome> {
    let car = if negative_control {
        car::car_relations_check_with(sites, car::chainless_annihilator)?
    } else {
        car::car_relations_check(sites)?
    };
    let name = if negative_control { "car-check (negative control)" } else { "car-check" };
    let mut report = RunReport::new(name);
    for c in &car.checks {
        report.check(c.name.clone(), c.residual, CAR_TOL);
    }
    report.set_result(json!({ "sites": sites }));
    Ok((report, None))
}

fn equiv_check(a: &Path, b: &Path, partial_terms: Option<usize>) -> Result<Outcome> {
    let f = load::<FamilyFile>(a)?.to_family()?;
    let g = load::<FamilyFile>(b)?.to_family()?;
    let verdict = equivalence::decide_equivalence(&f, &g)?;
    let mut report = RunReport::new("equiv-check");
    for (name, fam) in [("family-a normalized", &f), ("family-b normalized", &g)] {
        report.check(name, normalization_residual(fam), crate::FAMILY_NORM_TOL);
    }
    let mut result = json!({ "verdict": verdict });
    if let Some(n) = partial_terms {
        let partial = equivalence::partial_series(|s| f.theta(s), |s| g.theta(s), n)?;
        result["partial"] = serde_json::to_value(partial)?;
    }
    report.set_result(result);
    Ok((report, None))
}

fn normalization_residual(f: &ThetaFamily) -> f64 {
    std::iter::once(f.tail())
        .chain(f.overrides().map(|(_, q)| q))
        .map(|q| (q.norm() - 1.0).abs())
        .fold(0.0, f64::max)
}

/// `max(0, lhs − rhs)`, relative to `max(1, rhs)`.
fn excess(lhs: f64, rhs: f64) -> f64 {
    (lhs - rhs).max(0.0) / rhs.max(1.0)
}

fn convolve(lhs: &Path, rhs: &Path, kind: ConvKind) -> Result<Outcome> {
    let mut report = RunReport::new("convolve");
    let artifact = match kind {
        ConvKind::Groupoid => {
            let f = load::<ConvFile>(lhs)?.to_function()?;
            let h = load::<ConvFile>(rhs)?.to_function()?;
            let fh = f.convolve(&h);
            report.check(
                "involution anti-multiplicative",
                fh.involution().distance(&h.involution().convolve(&f.involution())),
                ALGEBRA_TOL,
            );
            report.check(
                "i-norm submultiplicative",
                excess(fh.i_norm(), f.i_norm() * h.i_norm()),
                ALGEBRA_TOL,
            );
            serde_json::to_value(ConvFile::from_function(&fh))?
        }
        ConvKind::Group => {
            let u = load::<GroupAlgebraFile>(lhs)?.to_element()?;
            let v = load::<GroupAlgebraFile>(rhs)?.to_element()?;
            let uv = u.group_convolve(&v);
            report.check(
                "involution anti-multiplicative",
                uv.group_involution().distance(&v.group_involution().group_convolve(&u.group_involution())),
                ALGEBRA_TOL,
            );
            report.check(
                "norm submultiplicative",
                excess(uv.group_norm(), u.group_norm() * v.group_norm()),
                ALGEBRA_TOL,
            );
            if let Some(m) = group_sites(&[&u, &v]) {
                let lhs = oracle::kron_string(m, &uv.embed())?;
                let rhs = oracle::kron_string(m, &u.embed())?.matmul(&oracle::kron_string(m, &v.embed())?);
                report.check("embedding multiplicative", lhs.max_abs_diff(&rhs), ORACLE_TOL);
            }
            serde_json::to_value(GroupAlgebraFile::from_element(&uv))?
        }
    };
    report.set_result(artifact.clone());
    Ok((report, Some(artifact)))
}

/// Truncation size covering every group support, if within the oracle cap.
fn group_sites(elems: &[&GroupAlgebraElement]) -> Option<usize> {
    let m = elems
        .iter()
        .flat_map(|u| u.entries().filter_map(|(g, _)| g.support().max_site()))
        .map(|s| s.0 as usize)
        .max()
        .unwrap_or(1)
        .max(1);
    (m <= oracle::MAX_ORACLE_SITES).then_some(m)
}

fn norm(kind: NormKind, lhs: &Path) -> Result<Outcome> {
    let mut report = RunReport::new("norm");
    let (name, value) = match kind {
        NormKind::INorm => {
            let f = load::<ConvFile>(lhs)?.to_function()?;
            let n = f.i_norm();
            report.check("*-invariant", (f.involution().i_norm() - n).abs(), ALGEBRA_TOL);
            ("i-norm", n)
        }
        NormKind::Group => {
            let u = load::<GroupAlgebraFile>(lhs)?.to_element()?;
            let n = u.group_norm();
            report.check("*-invariant", (u.group_involution().group_norm() - n).abs(), ALGEBRA_TOL);
            ("group", n)
        }
    };
    report.set_result(json!({ "kind": name, "norm": value }));
    Ok((report, None))
}

fn rep_check(
    lhs: Option<&Path>,
    rhs: Option<&Path>,
    section: Option<&Path>,
    sites: usize,
    trials: usize,
    seed: u64,
) -> Result<Outcome> {
    let (f, h) = match (lhs, rhs) {
        (Some(l), Some(r)) => (load::<ConvFile>(l)?.to_function()?, load::<ConvFile>(r)?.to_function()?),
        _ => random_pair(sites, seed)?,
    };
    let rep = bundle::star_rep_check(&f, &h, trials, seed)?;
    let mut report = RunReport::new("rep-check");
    report.check("π multiplicative", rep.product_residual, REP_TOL);
    report.check("π adjoint", rep.adjoint_residual, REP_TOL);
    report.check("i-norm dominates", (rep.max_norm_ratio - rep.i_norm).max(0.0), REP_TOL);
    report.set_result(serde_json::to_value(&rep)?);
    let artifact = match section {
        Some(path) => {
            let phi = load::<SectionFile>(path)?.to_section()?;
            Some(serde_json::to_value(SectionFile::from_section(&bundle::pi_apply(&f, &phi)))?)
        }
        None => None,
    };
    Ok((report, artifact))
}

fn random_pair(sites: usize, seed: u64) -> Result<(ConvFunction, ConvFunction)> {
    if sites == 0 || sites > 16 {
        return Err(Error::TooLarge {
            what: "random flip sites",
            requested: sites,
            limit: 16,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sites = sites_upto(sites);
    let points = sampling::random_orbit(&mut rng, "b", &sites, 8);
    let f = sampling::random_conv_function(&mut rng, &points, &sites, 6);
    let h = sampling::random_conv_function(&mut rng, &points, &sites, 6);
    Ok((f, h))
}

fn oracle_compare(m: usize, trials: usize, seed: u64, lhs: Option<&Path>, rhs: Option<&Path>) -> Result<Outcome> {
    if m == 0 {
        return Err(Error::Invalid("--sites must be at least 1".into()));
    }
    let fixed_a = lhs.map(|p| load::<AlgebraFile>(p)?.to_element()).transpose()?;
    let fixed_u = rhs.map(|p| load::<StateFile>(p)?.to_state()).transpose()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sites = sites_upto(m);
    let (mut apply, mut isometry) = (0.0f64, 0.0f64);
    for _ in 0..trials {
        let a = match &fixed_a {
            Some(a) => a.clone(),
            None => sampling::random_algebra_element(&mut rng, m, 4, m),
        };
        let u = match &fixed_u {
            Some(u) => u.clone(),
            None => {
                let family = Arc::new(sampling::random_family(&mut rng, &sites));
                sampling::random_state(&mut rng, &family, &sites, 6)
            }
        };
        apply = apply.max(oracle::compare_apply(m, &a, &u)?);
        isometry = isometry.max((oracle::embed_state(m, &u)?.norm() - u.norm()).abs());
    }
    let mut report = RunReport::new("oracle-compare");
    report.check("sparse apply matches dense", apply, ORACLE_TOL);
    report.check("state embedding isometric", isometry, ALGEBRA_TOL);
    report.set_result(json!({ "sites": m, "trials": trials, "seed": seed }));
    Ok((report, None))
}

fn rank_check(m: usize) -> Result<Outcome> {
    let full = strings::full_algebra_rank(m)?;
    let cyclic = car::cyclicity_rank(m)?;
    let (full_expected, cyclic_expected) = (4usize.pow(m as u32), 2usize.pow(m as u32));
    let mut report = RunReport::new("rank-check");
    report.check("full algebra rank = 4^m", full.abs_diff(full_expected) as f64, EXACT_TOL);
    report.check("vacuum orbit rank = 2^m", cyclic.abs_diff(cyclic_expected) as f64, EXACT_TOL);
    report.set_result(json!({
        "sites": m,
        "full_algebra_rank": full,
        "cyclicity_rank": cyclic,
    }));
    Ok((report, None))
}

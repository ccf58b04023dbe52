//! The `pifinite` command line.
//!
//! Exit codes: 0 success, 1 input error, 2 resource error, 3 when `verify`
//! finds a mismatch. Rationals are printed exactly as `a/b` (integers without
//! a denominator); `--format json` emits the same values as decimal strings.

use std::ffi::OsString;
use std::fmt::Write as _;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::arith::{binom_ext_i64, vp, ExactRational, Prime};
use crate::delta::{
    alpha_splitter, beta_element, delta_iter, height_profile, pk_relation_check, verify_wreath_identity_with_cap,
    HeightProfile, LayerClass, WreathSign,
};
use crate::error::{Error, Result};
use crate::group::{build_group, build_group_with_cap, order_cap_from_env, GroupDescriptor};
use crate::parse::{parse_group, parse_space_with_cap};
use crate::quadratic::{amenability_failure_report, count_null_square_two_forms, cup_square_fiber_cardinality, planes_in};
use crate::space::{AbelianGroup, HeightStrategy, SpaceExpr};

pub const EXIT_OK: u8 = 0;
pub const EXIT_INPUT: u8 = 1;
pub const EXIT_RESOURCE: u8 = 2;
pub const EXIT_MISMATCH: u8 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Plain,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "pifinite", version, about = "Exact homotopy and height cardinalities of pi-finite spaces")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "plain")]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Height-n cardinality of a space (n = 0 is the homotopy cardinality).
    Card {
        #[arg(long)]
        space: String,
        #[arg(long, default_value_t = 2)]
        prime: u64,
        #[arg(long, default_value_t = 0)]
        height: u32,
    },
    /// Iterated p-adic free loop space.
    Loop {
        #[arg(long)]
        space: String,
        #[arg(long, default_value_t = 2)]
        prime: u64,
        #[arg(long, default_value_t = 1)]
        iterations: u32,
    },
    /// Cardinalities at heights 0..=range.
    Profile {
        #[arg(long)]
        space: String,
        #[arg(long, default_value_t = 2)]
        prime: u64,
        #[arg(long, default_value_t = 4)]
        range: u32,
    },
    /// Iterate the p-derivation on a rational value or on a space's profile.
    Delta {
        #[arg(long)]
        prime: u64,
        #[arg(long, default_value_t = 1)]
        iterations: u32,
        #[arg(long, conflicts_with = "space")]
        value: Option<String>,
        #[arg(long)]
        space: Option<String>,
        #[arg(long, default_value_t = 4)]
        range: u32,
    },
    /// The splitting element beta_(k), or alpha = beta_(0)...beta_(k).
    Beta {
        #[arg(long)]
        prime: u64,
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = 6)]
        range: u32,
        #[arg(long)]
        alpha: bool,
    },
    /// Divisible / complete / zero classification of each height layer.
    Classify {
        #[arg(long)]
        space: String,
        #[arg(long, default_value_t = 2)]
        prime: u64,
        #[arg(long, default_value_t = 4)]
        range: u32,
    },
    /// Both sides of the wreath identity for delta|BG| at heights 1..=range.
    Wreath {
        #[arg(long)]
        group: String,
        #[arg(long)]
        prime: u64,
        #[arg(long, default_value_t = 3)]
        range: u32,
    },
    /// Failure of multiplicativity for non-principal fiber sequences.
    Counterexample {
        #[arg(long)]
        prime: u64,
    },
    /// Recompute every reference value and report pass/fail per line.
    Verify,
    /// The grid |B^k C_p|_n for k <= kmax, n <= nmax.
    Table {
        #[arg(long)]
        prime: u64,
        #[arg(long, default_value_t = 4)]
        kmax: u32,
        #[arg(long, default_value_t = 5)]
        nmax: u32,
    },
}

#[derive(Debug, Clone, Default)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: u8,
}

struct Report {
    text: String,
    json: Value,
    mismatch: bool,
}

impl Report {
    fn new(text: String, json: Value) -> Self {
        Report { text, json, mismatch: false }
    }
}

pub fn main_with_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    Outcome { stdout: text, stderr: String::new(), code: EXIT_OK }
                }
                _ => Outcome { stdout: String::new(), stderr: text, code: EXIT_INPUT },
            };
        }
    };
    let format = cli.format;
    match run(cli.command) {
        Ok(report) => {
            let stdout = match format {
                Format::Plain => report.text,
                Format::Json => format!("{}\n", report.json),
            };
            Outcome { stdout, stderr: String::new(), code: if report.mismatch { EXIT_MISMATCH } else { EXIT_OK } }
        }
        Err(e) => {
            let code = if e.is_resource() { EXIT_RESOURCE } else { EXIT_INPUT };
            Outcome { stdout: String::new(), stderr: format!("error: {e}\n"), code }
        }
    }
}

fn rational_json(x: &ExactRational) -> Value {
    json!({ "num": x.numer().to_string(), "den": x.denom().to_string() })
}

fn profile_json(space: Option<String>, prof: &HeightProfile) -> Value {
    let layers: Vec<Value> = prof
        .values()
        .iter()
        .enumerate()
        .map(|(n, v)| {
            json!({
                "height": n,
                "value": rational_json(v),
                "valuation": prof.valuation(n as u32).expect("in range").to_string(),
                "class": prof.classify_layer(n as u32).expect("in range").to_string(),
            })
        })
        .collect();
    json!({ "space": space, "prime": prof.prime().get(), "layers": layers })
}

fn profile_text(prof: &HeightProfile) -> String {
    let mut out = String::new();
    for (n, v) in prof.values().iter().enumerate() {
        let n32 = n as u32;
        let _ = writeln!(
            out,
            "{n}\t{v}\tv_{}={}\t{}",
            prof.prime(),
            prof.valuation(n32).expect("in range"),
            prof.classify_layer(n32).expect("in range")
        );
    }
    out
}

fn parse_space_env(text: &str) -> Result<SpaceExpr> {
    parse_space_with_cap(text, order_cap_from_env()?)
}

fn run(cmd: Command) -> Result<Report> {
    match cmd {
        Command::Card { space, prime, height } => {
            let p = Prime::new(prime)?;
            let x = parse_space_env(&space)?;
            let value = x.height_cardinality(p, height);
            let json = json!({
                "space": x.to_string(),
                "prime": prime,
                "height": height,
                "cardinality": rational_json(&value),
            });
            Ok(Report::new(format!("{value}\n"), json))
        }
        Command::Loop { space, prime, iterations } => {
            let p = Prime::new(prime)?;
            let mut x = parse_space_env(&space)?;
            for _ in 0..iterations {
                x = x.p_adic_loop(p);
            }
            let nf = x.normal_form();
            let json = json!({
                "space": space,
                "prime": prime,
                "iterations": iterations,
                "loop": x.to_string(),
                "normal_form": nf.to_string(),
            });
            Ok(Report::new(format!("{x}\n"), json))
        }
        Command::Profile { space, prime, range } | Command::Classify { space, prime, range } => {
            let p = Prime::new(prime)?;
            let x = parse_space_env(&space)?;
            let prof = height_profile(&x, p, range);
            Ok(Report::new(profile_text(&prof), profile_json(Some(x.to_string()), &prof)))
        }
        Command::Delta { prime, iterations, value, space, range } => {
            let p = Prime::new(prime)?;
            match (value, space) {
                (Some(v), _) => {
                    let a: ExactRational = v.parse()?;
                    let d = delta_iter(&a, p, iterations)?;
                    let json = json!({
                        "value": rational_json(&a),
                        "prime": prime,
                        "iterations": iterations,
                        "result": rational_json(&d),
                        "valuation": vp(&d, p).to_string(),
                    });
                    Ok(Report::new(format!("{d}\n"), json))
                }
                (None, Some(s)) => {
                    let x = parse_space_env(&s)?;
                    let base = height_profile(&x, p, range);
                    // layer 0 is rational; δ is taken on heights >= 1
                    let values = base
                        .values()
                        .iter()
                        .skip(1)
                        .map(|a| delta_iter(a, p, iterations))
                        .collect::<Result<Vec<_>>>()?;
                    let mut text = String::new();
                    for (n, v) in values.iter().enumerate() {
                        let _ = writeln!(text, "{}\t{v}\tv_{p}={}", n + 1, vp(v, p));
                    }
                    let json = json!({
                        "space": x.to_string(),
                        "prime": prime,
                        "iterations": iterations,
                        "layers": values.iter().enumerate().map(|(n, v)| json!({
                            "height": n + 1,
                            "value": rational_json(v),
                        })).collect::<Vec<_>>(),
                    });
                    Ok(Report::new(text, json))
                }
                (None, None) => Err(Error::invalid("delta needs --value or --space")),
            }
        }
        Command::Beta { prime, k, range, alpha } => {
            let p = Prime::new(prime)?;
            let (prof, offset) = if alpha {
                (alpha_splitter(p, k, range)?, None)
            } else {
                let b = beta_element(p, k)?;
                (b.profile(range)?, b.offset)
            };
            let mut text = String::new();
            if let Some(b) = offset {
                let _ = writeln!(text, "# b = {b}");
            }
            text.push_str(&profile_text(&prof));
            let mut json = profile_json(None, &prof);
            json["k"] = json!(k);
            json["element"] = json!(if alpha { "alpha" } else { "beta" });
            json["offset"] = json!(offset);
            Ok(Report::new(text, json))
        }
        Command::Wreath { group, prime, range } => {
            let p = Prime::new(prime)?;
            let cap = order_cap_from_env()?;
            let g = build_group_with_cap(&parse_group(&group)?, cap)?;
            let reports =
                (1..=range).map(|n| verify_wreath_identity_with_cap(&g, p, n, cap)).collect::<Result<Vec<_>>>()?;
            let uniform = WreathSign::uniform(reports.iter().map(|r| r.sign));
            let mut text = String::new();
            for r in &reports {
                let _ = writeln!(text, "{}\tlhs={}\trhs={}\tsign={}", r.height, r.lhs, r.rhs, r.sign);
            }
            let uniform_text = uniform.map_or("none".to_string(), |s| s.to_string());
            let _ = writeln!(text, "uniform sign: {uniform_text}");
            let json = json!({
                "group": group,
                "prime": prime,
                "rows": reports.iter().map(|r| json!({
                    "height": r.height,
                    "lhs": rational_json(&r.lhs),
                    "rhs": rational_json(&r.rhs),
                    "sign": r.sign.to_string(),
                })).collect::<Vec<_>>(),
                "uniform_sign": uniform_text,
            });
            Ok(Report::new(text, json))
        }
        Command::Counterexample { prime } => {
            let p = Prime::new(prime)?;
            if prime == 2 {
                let s3 = SpaceExpr::classifying(build_group(&GroupDescriptor::Symmetric(3))?);
                let c2 = SpaceExpr::classifying(build_group(&GroupDescriptor::Cyclic(2))?);
                let lhs = ExactRational::from(3u64) * s3.height_cardinality(p, 1);
                let rhs = c2.height_cardinality(p, 1);
                let fails = lhs != rhs;
                let text = format!(
                    "|S3/C2| * |BS3|_1 = {lhs}\n|BC2|_1 = {rhs}\n{}\n",
                    if fails { "multiplicativity fails" } else { "multiplicativity holds" }
                );
                let json = json!({
                    "prime": prime,
                    "sequence": "S3/C2 -> BC2 -> BS3",
                    "lhs": rational_json(&lhs),
                    "rhs": rational_json(&rhs),
                    "multiplicativity_fails": fails,
                });
                return Ok(Report::new(text, json));
            }
            let r = amenability_failure_report(p)?;
            let fails = r.multiplicativity_fails();
            let text = format!(
                "|F|_4 * |B^4 C{prime}|_4 = {}\n|B^2 C{prime}|_4 = {}\n{}\n",
                r.lhs,
                r.rhs,
                if fails { "multiplicativity fails" } else { "multiplicativity holds" }
            );
            let json = json!({
                "prime": prime,
                "sequence": format!("F -> B^2 C{prime} -> B^4 C{prime}"),
                "lhs": rational_json(&r.lhs),
                "rhs": rational_json(&r.rhs),
                "multiplicativity_fails": fails,
            });
            Ok(Report::new(text, json))
        }
        Command::Verify => {
            let checks = reference_checks()?;
            let mut text = String::new();
            let mut mismatch = false;
            for c in &checks {
                mismatch |= !c.pass;
                let _ = writeln!(
                    text,
                    "{}  {}: expected {}, got {}",
                    if c.pass { "PASS" } else { "FAIL" },
                    c.name,
                    c.expected,
                    c.actual
                );
            }
            let passed = checks.iter().filter(|c| c.pass).count();
            let _ = writeln!(text, "{passed}/{} checks passed", checks.len());
            let json = json!({
                "checks": checks.iter().map(|c| json!({
                    "name": c.name,
                    "expected": c.expected,
                    "actual": c.actual,
                    "pass": c.pass,
                })).collect::<Vec<_>>(),
                "passed": passed,
                "total": checks.len(),
            });
            Ok(Report { text, json, mismatch })
        }
        Command::Table { prime, kmax, nmax } => {
            let p = Prime::new(prime)?;
            let mut text = String::from("k\\n");
            for n in 0..=nmax {
                let _ = write!(text, "\t{n}");
            }
            text.push('\n');
            let mut rows = Vec::new();
            for k in 0..=kmax {
                let x = SpaceExpr::eilenberg_maclane(AbelianGroup::cyclic(prime), k)?;
                let row: Vec<ExactRational> = (0..=nmax).map(|n| x.height_cardinality(p, n)).collect();
                let _ = write!(text, "{k}");
                for v in &row {
                    let _ = write!(text, "\t{v}");
                }
                text.push('\n');
                rows.push(row.iter().map(rational_json).collect::<Vec<_>>());
            }
            let json = json!({ "prime": prime, "kmax": kmax, "nmax": nmax, "rows": rows });
            Ok(Report::new(text, json))
        }
    }
}

/// One line of the `verify` table.
#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
}

fn check(name: impl Into<String>, expected: impl ToString, actual: impl ToString) -> Check {
    let (expected, actual) = (expected.to_string(), actual.to_string());
    Check { name: name.into(), pass: expected == actual, expected, actual }
}

/// Every reference value the library is expected to reproduce.
pub fn reference_checks() -> Result<Vec<Check>> {
    let prime = |n| Prime::new(n).expect("small prime");
    let em = |n: u64, k: u32| SpaceExpr::EilenbergMacLane(AbelianGroup::cyclic(n), k);
    let s3 = SpaceExpr::classifying(build_group(&GroupDescriptor::Symmetric(3))?);
    let c2 = SpaceExpr::classifying(build_group(&GroupDescriptor::Cyclic(2))?);
    let mut out = Vec::new();

    for p in [2u64, 3, 5] {
        let mut mismatches = 0;
        for k in 0..=4u32 {
            let x = if k == 0 { SpaceExpr::FinSet(p) } else { em(p, k) };
            for n in 0..=5u32 {
                let expected = ExactRational::int_pow(p, binom_ext_i64(n as i64 - 1, k as i64)?).expect("p != 0");
                if x.height_cardinality_with(prime(p), n, HeightStrategy::LoopRecursion) != expected {
                    mismatches += 1;
                }
            }
        }
        out.push(check(format!("|B^k C{p}|_n = {p}^C(n-1,k), k<=4, n<=5, mismatches"), 0, mismatches));
    }
    out.push(check("|BC2|_n at p=2, n=0..4", "1/2 1 2 4 8", join(height_profile(&c2, prime(2), 4).values())));
    out.push(check("|BS3|_1 at p=2", "2/3", s3.height_cardinality(prime(2), 1)));
    out.push(check(
        "|S3/C2| * |BS3|_1 vs |BC2|_1",
        "2 vs 1",
        format!(
            "{} vs {}",
            ExactRational::from(3u64) * s3.height_cardinality(prime(2), 1),
            c2.height_cardinality(prime(2), 1)
        ),
    ));
    out.push(check(
        "BS3 / BC2 amenable at height 1, p=2",
        "false / true",
        format!(
            "{} / {}",
            s3.is_amenable_at_height(prime(2), 1)?,
            c2.is_amenable_at_height(prime(2), 1)?
        ),
    ));
    for p in [3u64, 5, 7] {
        let f4 = cup_square_fiber_cardinality(prime(p), 4)?;
        out.push(check(format!("|F|_4 = p^3+p-1 at p={p}"), p * p * p + p - 1, &f4));
        let r = amenability_failure_report(prime(p))?;
        out.push(check(
            format!("|F|_4 |B^4 C{p}|_4 vs |B^2 C{p}|_4"),
            format!("{} vs {}", p * p * p + p - 1, p * p * p),
            format!("{} vs {}", r.lhs, r.rhs),
        ));
        out.push(check(
            format!("F amenable, B^2 C{p} not, at height 4"),
            "0 / 3",
            format!("{} / {}", vp(&f4, prime(p)), vp(&r.rhs, prime(p))),
        ));
    }
    let k34 = count_null_square_two_forms(prime(3), 4)?;
    out.push(check("square-zero 2-forms on F_3^4", 261, k34.kernel_count));
    out.push(check("1 + (p-1) [4 choose 2]_3", 261, planes_in(prime(3), 4) * 2 + 1));
    for (p, n) in [(3u64, 0u32), (2, 2), (5, 1)] {
        let r = pk_relation_check(prime(p), n, 6)?;
        out.push(check(
            format!("p_(k) = p_({n})^((-1)^(k-{n})) at p={p}, k<=6"),
            true,
            r.holds,
        ));
    }
    let alternation = pk_relation_check(prime(3), 0, 3)?;
    out.push(check(
        "p_(k) at height 0, p=3, k=0..3",
        "3 1/3 3 1/3",
        join(alternation.values.iter().map(|(_, v)| v)),
    ));
    out.push(check("delta(2) at p=2", -1, delta_iter(&ExactRational::from(2u64), prime(2), 1)?));
    out.push(check(
        "v_2(delta(2^3)) = 4-2",
        2,
        vp(&delta_iter(&ExactRational::from(8u64), prime(2), 1)?, prime(2)),
    ));
    let beta0 = beta_element(prime(2), 0)?.profile(4)?;
    out.push(check("beta_(0) = 2|BC2| - 1 at n=0..4", "0 1 3 7 15", join(beta0.values())));
    for p in [2u64, 3] {
        for k in 0..=3u32 {
            let b = beta_element(prime(p), k)?.profile(6)?;
            let classes = b.classes();
            let separates = classes[k as usize].is_complete_or_zero()
                && classes[k as usize + 1..].iter().all(|&c| c == LayerClass::Divisible);
            out.push(check(format!("beta_({k}) separates height {k} at p={p}"), true, separates));
        }
    }
    let alpha = alpha_splitter(prime(2), 1, 3)?;
    out.push(check("alpha(2, 1) at n=0..3", "0 0 3 21", join(alpha.values())));
    let c2g = build_group(&GroupDescriptor::Cyclic(2))?;
    let wreath: Vec<String> = (1..=3)
        .map(|n| verify_wreath_identity_with_cap(&c2g, prime(2), n, crate::group::DEFAULT_ORDER_CAP))
        .map(|r| r.map(|r| r.rhs.to_string()))
        .collect::<Result<_>>()?;
    out.push(check("|B D8|_n - |B(C2 x C2)|_n at n=1..3", "0 1 6", wreath.join(" ")));
    Ok(out)
}

fn join<'a>(values: impl IntoIterator<Item = &'a ExactRational>) -> String {
    values.into_iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}

mod expr;
mod render;

use std::io::Read;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use hallp1::drinfeld::{iso_check, v_normal_form};
use hallp1::hall_global::{hall_product_classes, normal_form, BundleClass, SheafClass};
use hallp1::json::{self, Element};
use hallp1::oracle::{self, OracleBudget};
use hallp1::pbw::Gen;
use hallp1::suites::{run_suite, Suite, SuiteConfig};
use hallp1::{combinat, symfun, ClosedPoint, GroundConfig, HallError, Result};
use num_bigint::BigInt;
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "hallp1", version, about = "Hall algebra of coherent sheaves on P^1 over F_q")]
struct Cli {
    /// Size of the ground field (a prime).
    #[arg(long, global = true, default_value_t = 2)]
    q: u32,

    /// Output format; iso-check defaults to json, everything else to text.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Series truncation order and torsion degree bound for verify and iso-check.
    #[arg(long, global = true, default_value_t = 6, value_parser = clap::value_parser!(u32).range(1..))]
    max_degree: u32,

    /// Largest number of candidates a brute-force count may enumerate.
    #[arg(long, global = true, default_value_t = 50_000_000, value_parser = clap::value_parser!(u64).range(1..))]
    budget: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate an expression such as "O(2) . O(0)" ('-' or nothing reads stdin).
    Product {
        #[arg(allow_hyphen_values = true)]
        expr: Option<String>,
    },
    /// Straighten a word such as "h1 g0" (or "pt1 x0" on the V⁺ side).
    NormalForm { word: Option<String> },
    /// Local Hall number g^λ_{μν} at residue field size qx.
    HallNumber {
        lambda: String,
        mu: String,
        nu: String,
        /// Defaults to q.
        #[arg(long)]
        qx: Option<u64>,
    },
    /// Run a verification suite.
    Verify { suite: Suite },
    /// Compare the Hall-side and V⁺-side engines; exit 1 on any mismatch.
    IsoCheck,
    /// Brute-force count next to its closed-form prediction.
    Oracle {
        #[command(subcommand)]
        which: OracleCmd,
    },
    /// Print a JSON-encoded element (argument or stdin).
    Show { json: Option<String> },
}

#[derive(Subcommand, Debug)]
enum OracleCmd {
    /// Coprime pairs of binary forms of degrees a and b.
    Phi { a: u32, b: u32 },
    /// Quadruples for an irreducible P, given by its coefficient list, e.g. "[1,1,1]".
    Quad { poly: String, a: u32 },
    /// Extensions 0 → O(m) → O(p)⊕O(p2) → O(n) → 0.
    Ext {
        #[arg(allow_hyphen_values = true)]
        m: i64,
        #[arg(allow_hyphen_values = true)]
        n: i64,
        #[arg(allow_hyphen_values = true)]
        p: i64,
        #[arg(allow_hyphen_values = true)]
        p2: i64,
    },
    /// Submodules of type ν with quotient of type μ in a module of type λ.
    Hall { lambda: String, mu: String, nu: String },
    /// Automorphisms of the module of type λ.
    Aut { lambda: String },
}

/// Verdict of a command that completed.
enum Outcome {
    Pass,
    Fail,
}

fn read_input(arg: Option<String>) -> Result<String> {
    match arg.as_deref() {
        Some(s) if s != "-" => Ok(s.to_string()),
        _ => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| HallError::Invalid(format!("reading stdin: {e}")))?;
            Ok(s.trim().to_string())
        }
    }
}

fn parse_word(s: &str) -> Result<(Vec<Gen>, bool)> {
    let mut word = Vec::new();
    let mut drinfeld = None;
    for tok in s.split(|c: char| c.is_whitespace() || c == '*').filter(|t| !t.is_empty()) {
        let bad = || HallError::Invalid(format!("bad generator {tok:?}; use g<n>, h<r>, x<n> or pt<r>"));
        let (side, g) = if let Some(n) = tok.strip_prefix('g') {
            (false, Gen::Line(n.parse().map_err(|_| bad())?))
        } else if let Some(n) = tok.strip_prefix('x') {
            (true, Gen::Line(n.parse().map_err(|_| bad())?))
        } else if let Some(r) = tok.strip_prefix("pt") {
            (true, Gen::Tor(r.parse().map_err(|_| bad())?))
        } else if let Some(r) = tok.strip_prefix('h') {
            (false, Gen::Tor(r.parse().map_err(|_| bad())?))
        } else {
            return Err(bad());
        };
        if g == Gen::Tor(0) {
            return Err(bad());
        }
        if drinfeld.is_some_and(|d| d != side) {
            return Err(HallError::Invalid("word mixes g/h and x/pt generators".into()));
        }
        drinfeld = Some(side);
        word.push(g);
    }
    Ok((word, drinfeld.unwrap_or(false)))
}

fn emit(format: Format, text: String, value: Value) {
    match format {
        Format::Text => println!("{text}"),
        Format::Json => println!("{}", serde_json::to_string_pretty(&value).expect("serializable")),
    }
}

fn side_by_side(format: Format, what: String, count: BigInt, prediction: BigInt) -> Outcome {
    let ok = count == prediction;
    emit(
        format,
        format!("{what}: count {count}, prediction {prediction}{}", if ok { "" } else { "  MISMATCH" }),
        json!({"item": what, "count": json::int_to_json(&count), "prediction": json::int_to_json(&prediction), "agree": ok}),
    );
    if ok {
        Outcome::Pass
    } else {
        Outcome::Fail
    }
}

fn run(cli: Cli) -> Result<Outcome> {
    let ground = GroundConfig::new(cli.q)?;
    let format = cli.format.unwrap_or(match cli.command {
        Command::IsoCheck => Format::Json,
        _ => Format::Text,
    });
    let budget = OracleBudget {
        max_candidates: cli.budget as u128,
    };
    match cli.command {
        Command::Product { expr } => {
            let e = expr::parse_expr(ground, &read_input(expr)?)?;
            emit(format, render::hall(&e), json::hall_to_json(&e));
        }
        Command::NormalForm { word } => {
            let (w, drinfeld) = parse_word(&read_input(word)?)?;
            let (e, text) = if drinfeld {
                let e = v_normal_form(ground, ground.one(), &w)?;
                let t = render::pbw(&e, "x", "pt");
                (e, t)
            } else {
                let e = normal_form(ground, ground.one(), &w)?;
                let t = render::pbw(&e, "g", "h");
                (e, t)
            };
            emit(format, text, json::pbw_to_json(&e));
        }
        Command::HallNumber { lambda, mu, nu, qx } => {
            let (l, m, n) = (expr::parse_partition(&lambda)?, expr::parse_partition(&mu)?, expr::parse_partition(&nu)?);
            let qx = qx.unwrap_or(cli.q as u64);
            if qx < 2 {
                return Err(HallError::Invalid(format!("qx must be at least 2, got {qx}")));
            }
            let value = symfun::hall_number(&l, &m, &n, qx)?;
            emit(
                format,
                value.to_string(),
                json!({"lambda": l.parts(), "mu": m.parts(), "nu": n.parts(), "qx": qx, "value": json::int_to_json(&value)}),
            );
        }
        Command::Verify { suite } => {
            let config = SuiteConfig {
                max_degree: cli.max_degree,
                budget,
            };
            let report = run_suite(ground, suite, &config)?;
            let mut text = String::new();
            for c in &report.checks {
                let status = if c.passed { "PASS" } else { "FAIL" };
                text.push_str(&format!("{status} {}", c.name));
                if !c.passed && !c.detail.is_empty() {
                    text.push_str(&format!(": {}", c.detail));
                }
                text.push('\n');
            }
            let failed = report.checks.iter().filter(|c| !c.passed).count();
            text.push_str(&format!(
                "{} q={}: {} checks, {failed} failed",
                report.suite,
                report.q,
                report.checks.len()
            ));
            emit(format, text, serde_json::to_value(&report).expect("serializable"));
            return Ok(if report.passed { Outcome::Pass } else { Outcome::Fail });
        }
        Command::IsoCheck => {
            let report = iso_check(ground, cli.max_degree)?;
            let mut text = format!("q={} max degree {}: {} checked, {} mismatches", report.q, report.max_degree, report.checked, report.mismatches.len());
            for m in &report.mismatches {
                text.push_str(&format!("\n  {}: hall {} vs drinfeld {}", m.item, m.hall, m.drinfeld));
            }
            emit(format, text, serde_json::to_value(&report).expect("serializable"));
            return Ok(if report.passed() { Outcome::Pass } else { Outcome::Fail });
        }
        Command::Oracle { which } => return oracle_cmd(ground, format, which, &budget),
        Command::Show { json: input } => match json::element_from_str(&read_input(input)?)? {
            Element::Hall(e) => emit(format, render::hall(&e), json::hall_to_json(&e)),
            Element::Pbw(e) => emit(format, render::pbw(&e, "g", "h"), json::pbw_to_json(&e)),
        },
    }
    Ok(Outcome::Pass)
}

fn oracle_cmd(ground: GroundConfig, format: Format, which: OracleCmd, budget: &OracleBudget) -> Result<Outcome> {
    let q = BigInt::from(ground.q());
    Ok(match which {
        OracleCmd::Phi { a, b } => side_by_side(
            format,
            format!("φ({a},{b})"),
            oracle::phi_bruteforce(ground, a, b, budget)?.into(),
            oracle::phi_closed_form(ground.q(), a, b),
        ),
        OracleCmd::Quad { poly, a } => {
            let p = match ClosedPoint::parse(ground, &poly)? {
                ClosedPoint::Finite(p) => p,
                ClosedPoint::Infinity => return Err(HallError::Invalid("quad needs a finite point".into())),
            };
            let d = p.degree().unwrap_or(0) as u32;
            if a == 0 || a >= d {
                return Err(HallError::Invalid(format!("need 1 ≤ a < deg P = {d}")));
            }
            let prediction: BigInt = num_traits::Pow::pow(&q, d - 1) * (&q - 1) * (&q - 1);
            side_by_side(
                format,
                format!("quadruples for {p}, a={a}"),
                oracle::quadruple_count(ground, &p, a, budget)?.into(),
                prediction,
            )
        }
        OracleCmd::Ext { m, n, p, p2 } => {
            let target = SheafClass::bundle(BundleClass::from_twists([p, p2]));
            let prod = hall_product_classes(ground, &SheafClass::line(n), &SheafClass::line(m))?;
            let prediction = prod.coeff(&target).as_integer().ok_or_else(|| {
                HallError::Invalid(format!("coefficient of {target} is not an integer"))
            })?;
            side_by_side(
                format,
                format!("extensions of O({n}) by O({m}) with middle term O({p})⊕O({p2})"),
                oracle::ext_count_bundles(ground, m, n, p, p2, budget)?.into(),
                prediction,
            )
        }
        OracleCmd::Hall { lambda, mu, nu } => {
            let (l, m, n) = (expr::parse_partition(&lambda)?, expr::parse_partition(&mu)?, expr::parse_partition(&nu)?);
            side_by_side(
                format,
                format!("g^{l}_{m},{n}"),
                oracle::submodule_hall_count(ground, &l, &m, &n, budget)?.into(),
                symfun::hall_number(&l, &m, &n, ground.q() as u64)?,
            )
        }
        OracleCmd::Aut { lambda } => {
            let l = expr::parse_partition(&lambda)?;
            side_by_side(
                format,
                format!("|Aut| of type {l}"),
                oracle::aut_count_module(ground, &l, budget)?.into(),
                combinat::aut_order_torsion(&l, ground.q() as u64),
            )
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn words() {
        assert_eq!(parse_word("h1 g0").unwrap(), (vec![Gen::Tor(1), Gen::Line(0)], false));
        assert_eq!(parse_word("pt2*x-1").unwrap(), (vec![Gen::Tor(2), Gen::Line(-1)], true));
        assert!(parse_word("h1 x0").is_err());
        assert!(parse_word("h0").is_err());
        assert!(parse_word("y3").is_err());
    }
}

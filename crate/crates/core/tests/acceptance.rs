//! Acceptance criteria. Each criterion prints one PASS/FAIL line; all
//! comparisons are exact, so the only tolerances are the time limits below.

use std::time::{Duration, Instant};

use hallp1::hall_torsion::{grouplike_check, series_identity_check_local};
use hallp1::oracle::OracleBudget;
use hallp1::points::{closed_points_up_to, irreducibles, zeta_check};
use hallp1::suites::{self, Check};
use hallp1::{ClosedPoint, GroundConfig, Result};

const LIMIT_PHI: Duration = Duration::from_secs(10);
const LIMIT_QUADRUPLES: Duration = Duration::from_secs(60);
const LIMIT_HALL_NUMBERS: Duration = Duration::from_secs(300);
const LIMIT_ISO: Duration = Duration::from_secs(300);

fn g(q: u32) -> GroundConfig {
    GroundConfig::new(q).unwrap()
}

struct Outcome {
    id: u32,
    checks: Vec<Check>,
    elapsed: Duration,
    limit: Option<Duration>,
}

impl Outcome {
    fn passed(&self) -> bool {
        !self.checks.is_empty()
            && self.checks.iter().all(|c| c.passed)
            && self.limit.is_none_or(|l| self.elapsed < l)
    }
}

fn run(id: u32, title: &'static str, limit: Option<Duration>, f: impl FnOnce() -> Result<Vec<Check>>) -> Outcome {
    let start = Instant::now();
    let checks = f().unwrap_or_else(|e| vec![Check::new("error", false, e.to_string())]);
    let elapsed = start.elapsed();
    let out = Outcome {
        id,
        checks,
        elapsed,
        limit,
    };
    let status = if out.passed() { "PASS" } else { "FAIL" };
    let limit = limit.map_or(String::new(), |l| format!(" (limit {}s)", l.as_secs()));
    println!(
        "{status} criterion {id}: {title} [{} checks, {:.2}s{limit}]",
        out.checks.len(),
        elapsed.as_secs_f64()
    );
    for c in out.checks.iter().filter(|c| !c.passed) {
        println!("    failed: {} {}", c.name, c.detail);
    }
    out
}

fn at_both<F>(f: F) -> Result<Vec<Check>>
where
    F: Fn(GroundConfig) -> Result<Vec<Check>>,
{
    let mut out = f(g(2))?;
    out.extend(f(g(3))?);
    Ok(out)
}

#[test]
fn acceptance() {
    let budget = OracleBudget::default();
    let mut outcomes = Vec::new();

    outcomes.push(run(1, "coprime pair counts match the closed form, a+b ≤ 5, q ∈ {2,3}", Some(LIMIT_PHI), || {
        at_both(|k| suites::phi_checks(k, 5, &budget))
    }));

    outcomes.push(run(2, "quadruple counts equal q^{d-1}(q-1)²", Some(LIMIT_QUADRUPLES), || {
        let mut out = Vec::new();
        for (q, d, a) in [(2, 2, 1), (2, 3, 1), (2, 3, 2), (3, 2, 1)] {
            let k = g(q);
            let expect = num_bigint::BigInt::from(q.pow(d - 1) * (q - 1) * (q - 1));
            for p in irreducibles(k, d as usize) {
                let got = hallp1::oracle::quadruple_count(k, &p, a, &budget)?;
                out.push(Check::new(
                    format!("q={q} P={p} a={a}"),
                    num_bigint::BigInt::from(got) == expect,
                    format!("got {got}, expected {expect}"),
                ));
            }
        }
        Ok(out)
    }));

    outcomes.push(run(3, "[O(n)][O(m)] coefficients match extension counts, n-m ≤ 4, q=2", None, || {
        suites::ext_checks(g(2), 4, &budget)
    }));

    outcomes.push(run(4, "local Hall numbers match submodule counts, |λ| ≤ 4, q ∈ {2,3}", Some(LIMIT_HALL_NUMBERS), || {
        at_both(|k| suites::hall_number_checks(k, 4, &budget))
    }));

    outcomes.push(run(5, "automorphism orders, |λ| ≤ 3, and the Q̂ coefficient identity, r ≤ 4", None, || {
        at_both(|k| {
            let mut out = suites::aut_checks(k, 3, &budget)?;
            out.extend(suites::aut_coefficient_checks(k, 4));
            Ok(out)
        })
    }));

    outcomes.push(run(6, "local and global series identities, zeta identity", None, || {
        at_both(|k| {
            let mut out = Vec::new();
            for x in closed_points_up_to(k, 2) {
                let order = 4 * x.degree() as usize;
                out.push(Check::new(
                    format!("q={} local {x} order {order}", k.q()),
                    series_identity_check_local(k, &x, order)?,
                    "",
                ));
            }
            out.extend(suites::global_series_checks(k, 6)?);
            out.push(Check::new(format!("q={} zeta to order 8", k.q()), zeta_check(k, 8), ""));
            Ok(out)
        })
    }));

    outcomes.push(run(7, "PBW normal form: idempotence, associativity, relation residues", None, || {
        at_both(|k| {
            let mut out = suites::pbw_checks(k)?;
            out.extend(suites::relation_checks(k)?);
            Ok(out)
        })
    }));

    outcomes.push(run(8, "B ≅ V⁺: iso_check(6) with zero mismatches, q ∈ {2,3}", Some(LIMIT_ISO), || {
        at_both(|k| suites::iso_checks(k, 6))
    }));

    outcomes.push(run(9, "Hall number properties: Riedtmann sums, integrality, q-1 divisibility, Green", None, || {
        suites::hall_property_checks(g(2))
    }));

    outcomes.push(run(10, "Δ(Ĥ_x) = Ĥ_x ⊗ Ĥ_x to order 4 at points of degree 1 and 2, q=2", None, || {
        let k = g(2);
        let deg2 = ClosedPoint::finite(irreducibles(k, 2)[0].clone())?;
        Ok([ClosedPoint::Infinity, deg2]
            .iter()
            .map(|x| {
                let ok = grouplike_check(k, x, 4);
                Check::new(format!("{x}"), ok.as_ref().is_ok_and(|b| *b), format!("{ok:?}"))
            })
            .collect())
    }));

    let failed: Vec<u32> = outcomes.iter().filter(|o| !o.passed()).map(|o| o.id).collect();
    println!("{} of {} criteria passed", outcomes.len() - failed.len(), outcomes.len());
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

//! Named verification suites: each runs a family of exact checks and
//! reports every item.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::coeff::{Coeff, GroundConfig};
use crate::combinat::{aut_order_torsion, partitions_of, partitions_up_to, Partition};
use crate::drinfeld::{self, VRules};
use crate::error::{HallError, Result};
use crate::hall_global::{self, aut_order, euler_form, HallRules, SheafClass};
use crate::hall_torsion::{self, green_sides, grouplike_check, riedtmann_sum, series_identity_check_local};
use crate::lincomb::LinComb;
use crate::oracle::{self, OracleBudget};
use crate::pbw::{self, Gen, PbwElement, Rules, Word};
use crate::points::{closed_points_up_to, irreducibles, zeta_check, ClosedPoint};
use crate::symfun::hall_number;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }

    fn eq<T: PartialEq + fmt::Display>(name: impl Into<String>, got: T, expected: T) -> Self {
        let passed = got == expected;
        Check::new(name, passed, format!("got {got}, expected {expected}"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Suite {
    Zeta,
    SeriesLocal,
    SeriesGlobal,
    Pbw,
    Relations,
    Iso,
    OracleAll,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Zeta,
        Suite::SeriesLocal,
        Suite::SeriesGlobal,
        Suite::Pbw,
        Suite::Relations,
        Suite::Iso,
        Suite::OracleAll,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Zeta => "zeta",
            Suite::SeriesLocal => "series-local",
            Suite::SeriesGlobal => "series-global",
            Suite::Pbw => "pbw",
            Suite::Relations => "relations",
            Suite::Iso => "iso",
            Suite::OracleAll => "oracle-all",
        }
    }
}

impl FromStr for Suite {
    type Err = HallError;
    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| HallError::Invalid(format!("unknown suite {s:?}")))
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SuiteConfig {
    /// Series truncation order and torsion degree bound of the iso check.
    pub max_degree: u32,
    pub budget: OracleBudget,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            max_degree: 6,
            budget: OracleBudget::default(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub q: u32,
    pub passed: bool,
    pub checks: Vec<Check>,
}

pub fn run_suite(ground: GroundConfig, suite: Suite, config: &SuiteConfig) -> Result<SuiteReport> {
    let checks = match suite {
        Suite::Zeta => zeta_checks(ground, 8),
        Suite::SeriesLocal => {
            let mut c = local_series_checks(ground, 2)?;
            c.extend(coproduct_checks(ground, 4)?);
            c
        }
        Suite::SeriesGlobal => global_series_checks(ground, config.max_degree as usize)?,
        Suite::Pbw => pbw_checks(ground)?,
        Suite::Relations => {
            let mut c = relation_checks(ground)?;
            c.extend(hall_property_checks(ground)?);
            c
        }
        Suite::Iso => iso_checks(ground, config.max_degree)?,
        Suite::OracleAll => oracle_checks(ground, &config.budget)?,
    };
    Ok(SuiteReport {
        suite: suite.name().into(),
        q: ground.q(),
        passed: checks.iter().all(|c| c.passed),
        checks,
    })
}

/// Point counts and the zeta identity up to order `t`.
pub fn zeta_checks(ground: GroundConfig, t: u32) -> Vec<Check> {
    let q = BigInt::from(ground.q());
    let mut out = vec![Check::new(
        format!("zeta identity to order {t}"),
        zeta_check(ground, t),
        "Π (1 - s^deg x)^-1 = 1/((1-s)(1-qs))",
    )];
    for d in 1..=t.min(6) {
        // Σ_{e | d} e N_e = q^d
        let sum: BigInt = (1..=d)
            .filter(|e| d % e == 0)
            .map(|e| BigInt::from(e) * BigInt::from(irreducibles(ground, e as usize).len()))
            .sum();
        out.push(Check::eq(format!("Σ e·N_e = q^{d}"), sum, num_traits::Pow::pow(&q, d)));
    }
    out
}

/// Local series identities at every point of degree `≤ max_point_degree`,
/// to order `4 deg x`.
pub fn local_series_checks(ground: GroundConfig, max_point_degree: u32) -> Result<Vec<Check>> {
    closed_points_up_to(ground, max_point_degree)
        .par_iter()
        .map(|x| {
            let order = 4 * x.degree() as usize;
            let ok = series_identity_check_local(ground, x, order)?;
            Ok(Check::new(
                format!("local series at {x} to order {order}"),
                ok,
                "Ĥ·Ê = 1, Q̂ = Ĥ(sv)/Ĥ(s/v), Q̂ via |Aut|",
            ))
        })
        .collect()
}

/// `Δ(Ĥ_x) = Ĥ_x ⊗ Ĥ_x` at the first points of degree 1 and 2.
pub fn coproduct_checks(ground: GroundConfig, max_r: u32) -> Result<Vec<Check>> {
    let mut points = vec![ClosedPoint::Infinity];
    if let Some(p) = irreducibles(ground, 2).into_iter().next() {
        points.push(ClosedPoint::finite(p)?);
    }
    points
        .iter()
        .map(|x| {
            Ok(Check::new(
                format!("grouplike Ĥ at {x}, r ≤ {max_r}"),
                grouplike_check(ground, x, max_r)?,
                "Δ(ĥ_r,x) = Σ ĥ_s,x ⊗ ĥ_{r-s},x",
            ))
        })
        .collect()
}

/// Global series: `Ĥ Ê = 1`, `Q̂ = Ĥ(sv)/Ĥ(s/v)`, and the recursions for
/// `ê_r`, `q̂_r` against the products over points.
pub fn global_series_checks(ground: GroundConfig, order: usize) -> Result<Vec<Check>> {
    let s = hall_torsion::global_series(ground, order)?;
    let v = ground.v();
    let ratio = s.h.rescale(&v).mul(&s.h.rescale(&v.inv()?).inverse()?)?;
    let mut out = vec![
        Check::new(format!("Ĥ·Ê = 1 to order {order}"), s.h.mul(&s.e)?.is_one(), ""),
        Check::new(format!("Q̂ = Ĥ(sv)/Ĥ(s/v) to order {order}"), ratio == s.q, ""),
    ];
    for r in 1..=order as u32 {
        let e = hall_torsion::ehat(ground, r)?;
        out.push(Check::new(format!("ê{r} recursion"), &e == s.e.coeff(r as usize), ""));
        let q = hall_torsion::qhat(ground, r)?;
        out.push(Check::new(format!("q̂{r} recursion"), &q == s.q.coeff(r as usize), ""));
    }
    Ok(out)
}

fn straighten_all<R: Rules + Sync>(rules: &R, words: &[Word]) -> Result<Vec<PbwElement>> {
    let one = rules.ground().one();
    words
        .par_iter()
        .map(|w| pbw::straighten_word(rules, one.clone(), w))
        .collect()
}

fn idempotence<R: Rules + Sync>(rules: &R, label: &str) -> Result<Check> {
    let monomials = pbw::monomials_up_to(-2..=2, 4, 4);
    let words: Vec<Word> = monomials.iter().map(|m| m.word()).collect();
    let forms = straighten_all(rules, &words)?;
    let bad = monomials
        .iter()
        .zip(&forms)
        .filter(|(m, f)| **f != PbwElement::basis(rules.ground(), (*m).clone()))
        .count();
    Ok(Check::new(
        format!("{label}: normal form fixes {} monomials (rank ≤ 4, degree ≤ 4)", monomials.len()),
        bad == 0,
        format!("{bad} changed"),
    ))
}

fn associativity<R: Rules + Sync>(rules: &R, label: &str) -> Result<Check> {
    let letters: Vec<Gen> = (-2..=2).map(Gen::Line).chain((1..=3).map(Gen::Tor)).collect();
    let ground = rules.ground();
    let mut triples: Vec<[Gen; 3]> = Vec::new();
    for &a in &letters {
        for &b in &letters {
            for &c in &letters {
                triples.push([a, b, c]);
            }
        }
    }
    let one = ground.one();
    let failures: usize = triples
        .par_iter()
        .map(|t| -> Result<usize> {
            let nf = |w: &[Gen]| pbw::straighten_word(rules, one.clone(), w);
            let left = pbw::pbw_product(rules, &nf(&t[..2])?, &nf(&t[2..])?)?;
            let right = pbw::pbw_product(rules, &nf(&t[..1])?, &nf(&t[1..])?)?;
            Ok(usize::from(left != right || left != nf(t)?))
        })
        .sum::<Result<usize>>()?;
    Ok(Check::new(
        format!("{label}: associativity on {} generator triples", triples.len()),
        failures == 0,
        format!("{failures} failures"),
    ))
}

/// Idempotence and associativity of both straightening engines, and the
/// independent check of the torsion-line relation on the Hall side.
pub fn pbw_checks(ground: GroundConfig) -> Result<Vec<Check>> {
    let hall = HallRules::new(ground);
    let v = VRules::new(ground);
    let mut out = vec![
        idempotence(&hall, "B")?,
        idempotence(&v, "V⁺")?,
        associativity(&hall, "B")?,
        associativity(&v, "V⁺")?,
    ];
    for r in 1..=3 {
        for n in [-1, 0, 2] {
            out.push(Check::new(
                format!("ĥ{r} ∗ [O({n})] via elementary torsion"),
                hall_global::mixed_relation_check(ground, r, n)?,
                "equals Σ [s+1] [O(n+s)] ∗ ĥ_{r-s}",
            ));
        }
    }
    Ok(out)
}

fn residue<R: Rules>(rules: &R, terms: &[(Word, Coeff)]) -> Result<PbwElement> {
    let mut lc = LinComb::zero(rules.ground());
    for (w, c) in terms {
        lc.add_term(w.clone(), c.clone());
    }
    pbw::straighten(rules, &lc)
}

/// The quadratic line relation in `B` and the defining relations in `V⁺`
/// reduce to zero.
pub fn relation_checks(ground: GroundConfig) -> Result<Vec<Check>> {
    let q = ground.int(ground.q() as i64);
    let one = ground.one();
    let hall = HallRules::new(ground);
    let mut bad_b = Vec::new();
    for m in -2..=2i64 {
        for n in -2..=2i64 {
            let terms = [
                (vec![Gen::Line(m + 1), Gen::Line(n)], one.clone()),
                (vec![Gen::Line(n), Gen::Line(m + 1)], -q.clone()),
                (vec![Gen::Line(m), Gen::Line(n + 1)], -q.clone()),
                (vec![Gen::Line(n + 1), Gen::Line(m)], one.clone()),
            ];
            if !residue(&hall, &terms)?.is_zero() {
                bad_b.push((m, n));
            }
        }
    }
    let mut bad_v = Vec::new();
    for m in -3..=3 {
        for n in -3..=3 {
            if !drinfeld::line_relation_residue(ground, m, n)?.is_zero() {
                bad_v.push(format!("({m},{n})"));
            }
        }
    }
    let mut bad_t = Vec::new();
    for r in 1..=4 {
        for n in -3..=3 {
            if !drinfeld::tor_relation_residue(ground, r, n)?.is_zero() {
                bad_t.push(format!("({r},{n})"));
            }
        }
    }
    Ok(vec![
        Check::new("B: line relation residues, -2 ≤ m,n ≤ 2", bad_b.is_empty(), format!("{bad_b:?}")),
        Check::new("V⁺: line relation residues, -3 ≤ m,n ≤ 3", bad_v.is_empty(), bad_v.join(" ")),
        Check::new("V⁺: P̃-line relation residues, r ≤ 4, |n| ≤ 3", bad_t.is_empty(), bad_t.join(" ")),
    ])
}

fn ratio(a: BigInt, b: BigInt) -> BigRational {
    BigRational::new(a, b)
}

/// Properties of Hall numbers: the Riedtmann sum, integrality, divisibility
/// by `q - 1`, and Green's formula at a rational point.
pub fn hall_property_checks(ground: GroundConfig) -> Result<Vec<Check>> {
    let q = ground.q();
    let mut out = Vec::new();
    let mut sum_ok = true;
    let mut int_ok = true;
    let mut div_ok = true;
    for m in -1..=1i64 {
        for n in m + 1..=m + 4 {
            let a = SheafClass::line(n);
            let c = SheafClass::line(m);
            let prod = hall_global::hall_product_classes(ground, &a, &c)?;
            let swapped = hall_global::hall_product_classes(ground, &c, &a)?;
            let (ga, gc) = (aut_order(ground, &a), aut_order(ground, &c));
            let mut sum = BigRational::zero();
            for (lam, phi) in &prod {
                let phi = phi.as_integer().ok_or_else(|| HallError::Invalid("non-integral Hall number".into()))?;
                let term = ratio(&phi * &ga * &gc, aut_order(ground, lam));
                // dim Hom(O(n), O(m)) = 0 for n > m
                int_ok &= term.is_integer();
                sum += term;
            }
            let e = euler_form(a.rank_degree(), c.rank_degree());
            sum_ok &= Coeff::from_rational(ground, sum) == ground.v_pow(-2 * e);
            let keys: std::collections::BTreeSet<&SheafClass> = prod.keys().chain(swapped.keys()).collect();
            for beta in keys {
                let diff = prod.coeff(beta) - swapped.coeff(beta);
                let diff = diff.as_integer().ok_or_else(|| HallError::Invalid("non-integral Hall number".into()))?;
                div_ok &= (diff % BigInt::from(q - 1)).is_zero();
            }
        }
    }
    out.push(Check::new("Σ φ g g / g = q^-⟨,⟩ on [O(n)],[O(m)], 0 < n-m ≤ 4", sum_ok, ""));
    out.push(Check::new("q^dim Hom φ g g / g integral on line pairs", int_ok, ""));
    out.push(Check::new("q-1 divides φ_αγ - φ_γα on line pairs", div_ok, ""));

    let small = partitions_up_to(2);
    let qx = q as u64;
    let mut tors_ok = true;
    for a in &small {
        for c in &small {
            tors_ok &= riedtmann_sum(a, c, qx)? == BigRational::one();
        }
    }
    out.push(Check::new("Σ φ g g / g = 1 on torsion pairs of weight ≤ 2", tors_ok, ""));

    let mut green_bad = 0;
    for a in &small {
        for b in &small {
            for c in &small {
                for d in &small {
                    let (l, r) = green_sides(a, b, c, d, qx)?;
                    if l != r {
                        green_bad += 1;
                    }
                }
            }
        }
    }
    out.push(Check::new(
        "Green's formula at a degree-1 point, weights ≤ 2",
        green_bad == 0,
        format!("{green_bad} failures"),
    ));
    Ok(out)
}

pub fn iso_checks(ground: GroundConfig, max_degree: u32) -> Result<Vec<Check>> {
    let report = drinfeld::iso_check(ground, max_degree)?;
    let detail = report
        .mismatches
        .iter()
        .take(5)
        .map(|m| format!("{}: {} vs {}", m.item, m.hall, m.drinfeld))
        .collect::<Vec<_>>()
        .join("; ");
    Ok(vec![Check::new(
        format!("B ≅ V⁺: {} comparisons up to degree {max_degree}", report.checked),
        report.passed(),
        detail,
    )])
}

/// Coprime pair counts for `a + b ≤ max_sum`.
pub fn phi_checks(ground: GroundConfig, max_sum: u32, budget: &OracleBudget) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for s in 0..=max_sum {
        for a in 0..=s {
            let got = BigInt::from(oracle::phi_bruteforce(ground, a, s - a, budget)?);
            out.push(Check::eq(format!("φ({a},{})", s - a), got, oracle::phi_closed_form(ground.q(), a, s - a)));
        }
    }
    Ok(out)
}

/// Quadruple counts for every irreducible of degree `d` and `1 ≤ a < d`.
pub fn quadruple_checks(ground: GroundConfig, d: u32, budget: &OracleBudget) -> Result<Vec<Check>> {
    let q = BigInt::from(ground.q());
    let expect: BigInt = num_traits::Pow::pow(&q, d - 1) * (&q - 1) * (&q - 1);
    let mut out = Vec::new();
    for p in irreducibles(ground, d as usize) {
        for a in 1..d {
            let got = BigInt::from(oracle::quadruple_count(ground, &p, a, budget)?);
            out.push(Check::eq(format!("quadruples for {p}, a={a}"), got, expect.clone()));
        }
    }
    Ok(out)
}

/// Every coefficient of `[O(n)][O(m)]`, `0 < n - m ≤ max_gap`, against the
/// brute-force count, including candidate middle terms that must not occur.
pub fn ext_checks(ground: GroundConfig, max_gap: i64, budget: &OracleBudget) -> Result<Vec<Check>> {
    let m = 0;
    let mut out = Vec::new();
    for n in m + 1..=m + max_gap {
        let prod = hall_global::hall_product_classes(ground, &SheafClass::line(n), &SheafClass::line(m))?;
        for p in m - 1..=(m + n) / 2 {
            let p2 = m + n - p;
            let class = SheafClass::bundle(hall_global::BundleClass::from_twists([p, p2]));
            let got = BigInt::from(oracle::ext_count_bundles(ground, m, n, p, p2, budget)?);
            let expect = prod.coeff(&class).as_integer().unwrap_or_default();
            out.push(Check::eq(format!("φ of O({p})⊕O({p2}) in [O({n})][O({m})]"), got, expect));
        }
    }
    Ok(out)
}

/// Local Hall numbers against submodule counts for all `|λ| ≤ max_weight`.
pub fn hall_number_checks(ground: GroundConfig, max_weight: u32, budget: &OracleBudget) -> Result<Vec<Check>> {
    let qx = ground.q() as u64;
    (0..=max_weight)
        .flat_map(partitions_of)
        .collect::<Vec<_>>()
        .par_iter()
        .map(|lam| {
            let counts = oracle::submodule_type_counts(ground, lam, budget)?;
            let mut bad = Vec::new();
            let mut n = 0;
            for wm in 0..=lam.weight() {
                for mu in partitions_of(wm) {
                    for nu in partitions_of(lam.weight() - wm) {
                        n += 1;
                        let got = BigInt::from(counts.get(&(mu.clone(), nu.clone())).copied().unwrap_or(0));
                        let h = hall_number(lam, &mu, &nu, qx)?;
                        if got != h {
                            bad.push(format!("g^{lam}_{mu},{nu}: {h} vs {got}"));
                        }
                    }
                }
            }
            Ok(Check::new(format!("Hall numbers g^{lam} ({n} pairs)"), bad.is_empty(), bad.join("; ")))
        })
        .collect()
}

/// Automorphism orders against brute force for `|λ| ≤ max_weight`.
pub fn aut_checks(ground: GroundConfig, max_weight: u32, budget: &OracleBudget) -> Result<Vec<Check>> {
    partitions_up_to(max_weight)
        .iter()
        .map(|lam| {
            let got = BigInt::from(oracle::aut_count_module(ground, lam, budget)?);
            Ok(Check::eq(format!("|Aut| of type {lam}"), got, aut_order_torsion(lam, ground.q() as u64)))
        })
        .collect()
}

/// `|Aut O_{r[x]}| v^{-r deg x} = (1 - q_x^{-1}) v^{r deg x}` for `r ≤ max_r`,
/// `deg x ≤ 2`.
pub fn aut_coefficient_checks(ground: GroundConfig, max_r: u32) -> Vec<Check> {
    let mut out = Vec::new();
    for d in 1..=2u32 {
        let qx = (ground.q() as u64).pow(d);
        for r in 1..=max_r {
            let rd = (r * d) as i64;
            let lhs = Coeff::from_int(ground, aut_order_torsion(&Partition::row(r), qx)) * ground.v_pow(-rd);
            let rhs = (ground.one() - Coeff::from_rational(ground, BigRational::new(1.into(), qx.into())))
                * ground.v_pow(rd);
            out.push(Check::eq(format!("Q̂ coefficient, deg x = {d}, r = {r}"), lhs, rhs));
        }
    }
    out
}

pub fn oracle_checks(ground: GroundConfig, budget: &OracleBudget) -> Result<Vec<Check>> {
    let mut out = phi_checks(ground, 5, budget)?;
    for d in 2..=3 {
        out.extend(quadruple_checks(ground, d, budget)?);
    }
    out.extend(ext_checks(ground, 4, budget)?);
    out.extend(hall_number_checks(ground, 4, budget)?);
    out.extend(aut_checks(ground, 3, budget)?);
    out.extend(aut_coefficient_checks(ground, 4));
    Ok(out)
}

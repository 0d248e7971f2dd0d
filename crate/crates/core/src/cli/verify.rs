//! Oracle suites behind `bianchi verify`.
//!
//! Each check yields one record with status `pass`, `fail` or `diagnostic`.
//! Only `fail` makes the run exit with code 2; diagnostics record the
//! outcome of an adjudication whose answer is not fixed in advance.

use clap::ValueEnum;
use num_bigint::BigInt;

use super::record::OutputRecord;
use super::{Cache, Outcome};
use crate::bounds::cusp_lower_bound;
use crate::eisenstein::sczech::{adjudicate_variants, sczech_trace, CharacterVariant, TRACE_TOL};
use crate::eisenstein::{
    cusp_count, level_one_sigma_traces, tau_census_report, trace_sigma_h1_eis, trace_sigma_h2_eis, TraceValue,
};
use crate::exactmath::{hilbert2, is_prime, is_square_free, kronecker, legendre, rat_int, sym_power_trace};
use crate::finitering::FiniteRing;
use crate::lefschetz::{
    adjudicate_brackets, classical_gamma_invariants, lefschetz_level_one, lefschetz_sigma_prime_power,
    lefschetz_sigma_principal, level_one_anchor, BracketVariant, Level,
};
use crate::quadfield::{reduced_forms, QuadField, SplittingType};
use crate::Involution;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Symbols,
    Classgroup,
    Cusps,
    Fixedpoints,
    Sczech,
    Integrality,
    Anchors,
    All,
}

impl Suite {
    const EACH: [Suite; 7] = [
        Suite::Symbols,
        Suite::Classgroup,
        Suite::Cusps,
        Suite::Fixedpoints,
        Suite::Sczech,
        Suite::Integrality,
        Suite::Anchors,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Symbols => "symbols",
            Suite::Classgroup => "classgroup",
            Suite::Cusps => "cusps",
            Suite::Fixedpoints => "fixedpoints",
            Suite::Sczech => "sczech",
            Suite::Integrality => "integrality",
            Suite::Anchors => "anchors",
            Suite::All => "all",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Status {
    Pass,
    Fail,
    Diagnostic,
}

impl Status {
    fn hard(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    fn soft(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Diagnostic
        }
    }

    fn name(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Diagnostic => "diagnostic",
        }
    }
}

struct Checks {
    command: String,
    suite: &'static str,
    records: Vec<OutputRecord>,
    failed: bool,
}

impl Checks {
    fn push(&mut self, check: &str, status: Status, detail: impl Into<String>) {
        let mut r = OutputRecord::new(&self.command, "verify");
        r.value("suite", self.suite)
            .value("check", check)
            .value("status", status.name())
            .value("detail", detail.into());
        self.failed |= status == Status::Fail;
        self.records.push(r);
    }

    /// Records a hard check whose failure list is `failures`.
    fn expect_none(&mut self, check: &str, failures: &[String], what: &str) {
        if failures.is_empty() {
            self.push(check, Status::Pass, what.to_string());
        } else {
            let shown: Vec<&str> = failures.iter().take(5).map(String::as_str).collect();
            self.push(check, Status::Fail, format!("{} failures, e.g. {}", failures.len(), shown.join("; ")));
        }
    }
}

fn field(d: i64) -> QuadField {
    QuadField::new(d).expect("suite discriminants are valid")
}

/// Primitive solvability of `z² = a·x² + b·y²` modulo 2⁹.
pub fn hilbert2_oracle(a: i64, b: i64) -> i32 {
    const M: i64 = 512;
    let mut squares = [false; 512];
    let mut odd_squares = [false; 512];
    for z in 0..M {
        let s = (z * z % M) as usize;
        squares[s] = true;
        if z % 2 == 1 {
            odd_squares[s] = true;
        }
    }
    for x in 0..M / 2 {
        for y in 0..M / 2 {
            let r = (a * x * x + b * y * y).rem_euclid(M) as usize;
            let hit = if x % 2 == 1 || y % 2 == 1 { squares[r] } else { odd_squares[r] };
            if hit {
                return 1;
            }
        }
    }
    -1
}

fn symbols(c: &mut Checks) {
    let mut fails = Vec::new();
    for p in (3u64..100).filter(|&p| is_prime(p)) {
        for a in -200i64..=200 {
            if legendre(a, p).expect("odd prime") != kronecker(a, p as i64) {
                fails.push(format!("({a}/{p})"));
            }
        }
    }
    c.expect_none("legendre_equals_kronecker", &fails, "odd p < 100, |a| ≤ 200");

    let mut pairs = Vec::new();
    let odd: Vec<i64> = (-15..=15).filter(|a: &i64| a % 2 != 0).collect();
    for &a in &odd {
        for &b in &odd {
            pairs.push((a, b));
        }
        for e in [2, -2, 6, -6, 10, -10] {
            pairs.push((a, e));
            pairs.push((e, a));
        }
    }
    let fails: Vec<String> = pairs
        .iter()
        .filter(|&&(a, b)| hilbert2(a, b).expect("nonzero") != hilbert2_oracle(a, b))
        .map(|(a, b)| format!("({a},{b})₂"))
        .collect();
    c.expect_none("hilbert2_mod_512_oracle", &fails, &format!("{} pairs", pairs.len()));

    let sf: Vec<i64> = (-30i64..=30).filter(|&a| a != 0 && (a == 1 || a == -1 || is_square_free(a))).collect();
    let mut fails = Vec::new();
    for &a in &sf {
        for &b in &sf {
            let h = hilbert2(a, b).unwrap();
            if h != hilbert2(b, a).unwrap() {
                fails.push(format!("symmetry ({a},{b})"));
            }
            for &a2 in &sf {
                if hilbert2(a * a2, b).unwrap() != h * hilbert2(a2, b).unwrap() {
                    fails.push(format!("bimultiplicativity ({a}·{a2},{b})"));
                }
            }
        }
    }
    c.expect_none("hilbert2_symmetric_bimultiplicative", &fails, "square-free |a|, |b| ≤ 30");

    let mut fails = Vec::new();
    for (t, order) in [(-1i64, 3i64), (0, 4), (1, 6)] {
        for k in 0..=48 - order {
            if sym_power_trace(t, k).unwrap() != sym_power_trace(t, k + order).unwrap() {
                fails.push(format!("t={t} k={k}"));
            }
        }
    }
    c.expect_none("sym_power_periodicity", &fails, "t ∈ {−1, 0, 1}, k ≤ 48");
}

fn classgroup(c: &mut Checks) {
    let cache = Cache::from_env();
    let mut fails = Vec::new();
    for (d, h) in [(-2, 1), (-5, 2), (-7, 1), (-11, 1), (-23, 3), (-105, 8)] {
        match cache.class_number(&field(d)) {
            Ok(got) if got == h => {}
            Ok(got) => fails.push(format!("h({d}) = {got}, expected {h}")),
            Err(e) => fails.push(e.to_string()),
        }
    }
    c.expect_none("class_numbers", &fails, "d ∈ {−2, −5, −7, −11, −23, −105}");

    let mut fails = Vec::new();
    for d in (-200i64..=-2).filter(|&d| d != -3 && is_square_free(d)) {
        let f = field(d);
        let ambiguous = reduced_forms(f.disc()).iter().filter(|r| r.is_ambiguous()).count() as u64;
        if ambiguous != f.two_torsion_count() {
            fails.push(format!("d={d}: {ambiguous} ambiguous forms, 2^(t−1) = {}", f.two_torsion_count()));
        }
    }
    c.expect_none("genus_theory", &fails, "square-free d ∈ [−200, −2]");
}

fn cusps(c: &mut Checks) {
    let cache = Cache::from_env();
    let mut fails = Vec::new();
    let mut cases = vec![(-2, 3), (-7, 3), (-5, 3), (-2, 4), (-11, 3)];
    for d in [-2, -5, -7, -11] {
        for n in [3, 4, 5] {
            if !cases.contains(&(d, n)) {
                cases.push((d, n));
            }
        }
    }
    for &(d, n) in &cases {
        let f = field(d);
        let closed = cusp_count(&f, n as u64);
        let brute = cache
            .sl2_order(&f, n)
            .map(|o| o * BigInt::from(f.class_number()) / BigInt::from(n * n));
        match (closed, brute) {
            (Ok(a), Ok(b)) if a == b => {}
            (a, b) => fails.push(format!("d={d} N={n}: {a:?} vs {b:?}")),
        }
    }
    c.expect_none("cusp_count_bruteforce", &fails, &format!("{} (d, N) pairs", cases.len()));

    let mut fails = Vec::new();
    for d in [-2, -5, -7, -11] {
        for n in 2..=6 {
            let ring = FiniteRing::new(&field(d), n).expect("valid ring");
            match ring.sl2_order() {
                Ok(o) if o.exhaustive_matches() == Some(true) => {}
                other => fails.push(format!("d={d} N={n}: {other:?}")),
            }
        }
    }
    c.expect_none("sl2_order_exhaustive_vs_closed", &fails, "d ∈ {−2, −5, −7, −11}, N ≤ 6");

    let mut fails = Vec::new();
    for (d, p, n) in [(-7, 3u64, 1u32), (-7, 3, 2), (-2, 3, 1), (-2, 5, 1)] {
        let f = field(d);
        let ring = FiniteRing::new(&f, p.pow(n) as u32).unwrap();
        let size = ring.projective_line().map(|l| l.len() as u64);
        let norms = f.prime_ideal_norms(p).unwrap();
        let expected: u64 = norms.iter().map(|&q| q.pow(n) + q.pow(n - 1)).product();
        if size.as_ref().ok() != Some(&expected) {
            fails.push(format!("d={d} p^n={p}^{n}: {size:?} vs {expected}"));
        }
    }
    c.expect_none("projective_line_size", &fails, "#P¹(O/pⁿ) = ∏(N𝔭ⁿ + N𝔭ⁿ⁻¹)");
}

fn fixedpoints(c: &mut Checks) {
    let mut fails = Vec::new();
    for (d, p, n) in [(-7, 3u64, 1u32), (-7, 3, 2), (-2, 3, 1), (-2, 5, 1)] {
        let ring = FiniteRing::new(&field(d), p.pow(n) as u32).unwrap();
        match ring.fixed_coset_count(Involution::Sigma) {
            Ok(census) if census.matches => {}
            other => fails.push(format!("d={d} p={p} n={n}: {other:?}")),
        }
    }
    c.expect_none("sigma_coset_census", &fails, "census = p^{2n} − p^{2n−2}");

    for (d, p, n) in [(-2, 5u64, 1u32), (-7, 3, 1)] {
        match tau_census_report(&field(d), p, n, 1) {
            Ok(r) => c.push(
                &format!("tau_coset_census d={d} p={p} n={n}"),
                Status::soft(r.matches),
                format!(
                    "census {} vs closed count {}; traces {} vs {}",
                    r.census.census, r.census.formula, r.census_trace, r.formula_trace
                ),
            ),
            Err(e) => c.push(&format!("tau_coset_census d={d} p={p} n={n}"), Status::Fail, e.to_string()),
        }
    }
}

fn sczech(c: &mut Checks) {
    for (d, levels) in [(-2, vec![2, 3, 4, 5]), (-7, vec![2, 3])] {
        let f = field(d);
        match adjudicate_variants(&f, &levels) {
            Ok(a) => {
                for check in &a.checks {
                    let detail = match &check.diagnostic {
                        Some(diag) => diag.clone(),
                        None => check
                            .levels
                            .iter()
                            .map(|l| {
                                format!(
                                    "N={}: tr={:.12} im={:.1e} ‖M²−I‖={:.1e}",
                                    l.n, l.trace_re, l.trace_im, l.involution_defect
                                )
                            })
                            .collect::<Vec<_>>()
                            .join("; "),
                    };
                    c.push(&format!("sczech_variant d={d} {}", check.variant), Status::soft(check.passes_all), detail);
                }
                let any_defined = a.checks.iter().any(|ch| ch.well_defined);
                c.push(
                    &format!("sczech_selection d={d}"),
                    Status::hard(any_defined && a.selected == Some(CharacterVariant::DEFAULT)),
                    format!("selected {:?}", a.selected.map(|v| v.name())),
                );
            }
            Err(e) => c.push(&format!("sczech_selection d={d}"), Status::Fail, e.to_string()),
        }
    }
    let f = field(-2);
    let ok = match (sczech_trace(&f, 5, CharacterVariant::DEFAULT), trace_sigma_h1_eis(&f, 5, 1)) {
        (Ok(t), Ok(h1)) => {
            let h1 = h1.to_string().parse::<f64>().unwrap();
            ((t.re - h1).abs() < TRACE_TOL, format!("matrix trace {:.12} vs H¹ trace {h1}", t.re))
        }
        (a, b) => (false, format!("{a:?} / {b:?}")),
    };
    c.push("sczech_equals_h1_trace d=-2 N=5", Status::hard(ok.0), ok.1);
}

fn integrality(c: &mut Checks) {
    let mut fails = Vec::new();
    let mut count = 0;
    for d in [-2, -5, -7, -11] {
        let f = field(d);
        for p in [3u64, 5, 7] {
            if f.splitting_type(p).unwrap() == SplittingType::Ramified {
                continue;
            }
            for n in 1..=2u32 {
                let level = Level::new(&f, p.pow(n)).unwrap();
                for k in 0..=5 {
                    count += 1;
                    let a = lefschetz_sigma_principal(&f, &level, k);
                    let b = lefschetz_sigma_prime_power(&f, p, n, k);
                    match (a, b) {
                        (Ok(a), Ok(b)) if a == b => {}
                        (a, b) => fails.push(format!("d={d} p={p} n={n} k={k}: {a:?} vs {b:?}")),
                    }
                }
            }
        }
    }
    c.expect_none("lefschetz_routes_agree", &fails, &format!("{count} cases, all integral"));

    let fails: Vec<String> = (3..=60u64)
        .filter_map(|n| {
            let g = classical_gamma_invariants(n).ok()?;
            (g.chi_gamma_n != &g.chi_xn - rat_int(g.cusps.clone())).then(|| format!("N={n}"))
        })
        .collect();
    c.expect_none("classical_euler_characteristics", &fails, "χ(Γ_N) = χ(X_N) − cusps, N ≤ 60");

    match adjudicate_brackets(&[-2, -5, -7, -11], 24) {
        Ok(report) => {
            for v in &report.variants {
                let odd_parity = v.parity_violations.iter().filter(|&&(_, k)| k % 2 == 1).count();
                c.push(
                    &format!("bracket_variant {}", v.variant),
                    Status::soft(v.passes_all),
                    format!(
                        "{} integrality failures, {} parity violations ({odd_parity} at odd k), {} anchor misses",
                        v.integrality_failures.len(),
                        v.parity_violations.len(),
                        v.anchor_failures.len()
                    ),
                );
            }
            let rational_fails = report
                .variants
                .iter()
                .any(|v| v.variant == BracketVariant::Rational && !v.integrality_failures.is_empty());
            c.push(
                "rational_bracket_breaks_integrality",
                Status::hard(rational_fails),
                "plain division must produce a non-integral Lefschetz number",
            );
            c.push(
                "default_bracket_even_weights",
                Status::hard(report.passing_even_k.contains(&BracketVariant::DEFAULT)),
                format!(
                    "variants passing all even-k checks: {:?}",
                    report.passing_even_k.iter().map(|v| v.name()).collect::<Vec<_>>()
                ),
            );
        }
        Err(e) => c.push("bracket_adjudication", Status::Fail, e.to_string()),
    }

    let f = field(-2);
    let mut fails = Vec::new();
    for (n, want) in [(5u64, 12), (25, 1251), (125, 156251)] {
        let level = Level::new(&f, n).unwrap();
        match cusp_lower_bound(&f, &level, 0, Involution::Sigma) {
            Ok(r) if r.bound == BigInt::from(want) => {}
            other => fails.push(format!("N={n}: {other:?}")),
        }
    }
    c.expect_none("exact_bounds", &fails, "d=−2, N ∈ {5, 25, 125}: 12, 1251, 156251");
}

fn anchors(c: &mut Checks) {
    for variant in BracketVariant::ALL {
        let mut misses = Vec::new();
        for d in [-2, -5, -7, -11] {
            let f = field(d);
            for inv in [Involution::Sigma, Involution::Tau] {
                let got = lefschetz_level_one(&f, inv, 0, variant).value;
                let want = rat_int(level_one_anchor(&f, inv));
                if got != want {
                    misses.push(format!("d={d} {inv}: {got} vs {want}"));
                }
            }
        }
        let status = if variant == BracketVariant::DEFAULT {
            Status::hard(misses.is_empty())
        } else {
            Status::soft(misses.is_empty())
        };
        let detail = if misses.is_empty() { "all anchors hold".to_string() } else { misses.join("; ") };
        c.push(&format!("level_one_anchors {variant}"), status, detail);
    }

    let exact = |t: &TraceValue| t.as_exact().cloned();
    let tr = level_one_sigma_traces(&field(-5), 0);
    let got = (exact(&tr.tr0), exact(&tr.tr1), exact(&tr.tr2));
    let want = (Some(BigInt::from(1)), Some(BigInt::from(-2)), Some(BigInt::from(-1)));
    c.push("level_one_traces d=-5", Status::hard(got == want), format!("{got:?}"));

    let fails: Vec<String> = [-2, -5, -7, -11, -105]
        .iter()
        .filter(|&&d| {
            let f = field(d);
            trace_sigma_h2_eis(&f, 1, 0).ok().as_ref() != exact(&level_one_sigma_traces(&f, 0).tr2).as_ref()
        })
        .map(|d| format!("d={d}"))
        .collect();
    c.expect_none("level_one_h2_consistency", &fails, "H² trace at N = 1 agrees with the level-one triple");
}

pub fn run_suite(suite: Suite) -> Outcome {
    let command = match suite {
        Suite::All => "verify all".to_string(),
        s => format!("verify {}", s.name()),
    };
    let suites: Vec<Suite> = if suite == Suite::All { Suite::EACH.to_vec() } else { vec![suite] };
    let mut records = Vec::new();
    let mut failed = false;
    for s in suites {
        let mut c = Checks {
            command: command.clone(),
            suite: s.name(),
            records: Vec::new(),
            failed: false,
        };
        match s {
            Suite::Symbols => symbols(&mut c),
            Suite::Classgroup => classgroup(&mut c),
            Suite::Cusps => cusps(&mut c),
            Suite::Fixedpoints => fixedpoints(&mut c),
            Suite::Sczech => sczech(&mut c),
            Suite::Integrality => integrality(&mut c),
            Suite::Anchors => anchors(&mut c),
            Suite::All => unreachable!(),
        }
        failed |= c.failed;
        records.extend(c.records);
    }
    Outcome {
        records,
        hard_failure: failed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oracle_examples() {
        assert_eq!(hilbert2_oracle(-1, -2), -1);
        assert_eq!(hilbert2_oracle(1, 7), 1);
        assert_eq!(hilbert2_oracle(3, -2), 1);
        assert_eq!(hilbert2_oracle(-1, -1), -1);
    }

    #[test]
    fn symbols_suite_passes() {
        let o = run_suite(Suite::Symbols);
        assert!(!o.hard_failure);
        assert_eq!(o.records.len(), 4);
    }

    #[test]
    fn anchors_suite_passes_for_default() {
        let o = run_suite(Suite::Anchors);
        assert!(!o.hard_failure);
        let rational = o
            .records
            .iter()
            .find(|r| r.result.values["check"] == "level_one_anchors rational")
            .unwrap();
        assert_eq!(rational.result.values["status"], "diagnostic");
    }
}

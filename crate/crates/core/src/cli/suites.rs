//! The identity suites behind `verify`.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::combinat::{
    compositions, enumerate_pairings, inv_generating, sum_pairing_weights, Pairing,
};
use crate::error::Result;
use crate::jackson::{gamma_a_integral, gamma_q2_integral, gaussian_moment_raw, normalized_moment};
use crate::perturb::{
    classical_coefficient, coefficient_group, exact_monomial_series, float_group, group_limit,
    integration_scaling, verify_against_integration, verify_graph_sum, verify_q_to_one,
    CouplingSpec, GraphBounds, Monomial,
};
use crate::qarith::rational::{factorial, int, rat};
use crate::qarith::{pochhammer_qk, qmultinomial, qrat_limit_at_one, Rational};
use crate::qfunc::{
    c_factor, gamma_q2_closed, lambda_coeff, verify_addition_decomposition, ExpKind, LambdaKind,
    LambdaTable, QContext,
};
use crate::report::serialize_f64;

/// Failure messages kept per suite.
const MAX_REPORTED: usize = 5;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteResult {
    pub name: String,
    /// the identity the suite checks
    pub identity: String,
    pub checked: u64,
    pub failed: u64,
    pub passed: bool,
    pub failures: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub command: &'static str,
    #[serde(serialize_with = "serialize_f64")]
    pub q: f64,
    #[serde(serialize_with = "serialize_f64")]
    pub tol: f64,
    pub seed: u64,
    pub suites: Vec<SuiteResult>,
    pub checked: u64,
    pub failed: u64,
    pub passed: bool,
}

#[derive(Default)]
struct Tally {
    checked: u64,
    failed: u64,
    failures: Vec<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.fail(what());
        }
    }

    fn fail(&mut self, msg: String) {
        self.failed += 1;
        if self.failures.len() < MAX_REPORTED {
            self.failures.push(msg);
        }
    }
}

struct Params {
    ctx: QContext,
    seed: u64,
}

type SuiteFn = fn(&Params, &mut Tally) -> Result<()>;

const SUITES: &[(&str, &str, SuiteFn)] = &[
    (
        "pairing-weights",
        "pairing-weight identity: sum of w(alpha) over pairings of [[2n]] is [1]_{n,2}, n <= 6",
        pairing_weights,
    ),
    (
        "inversion-multinomial",
        "inversion identity: sum of q^inv(f) over maps with fiber sizes l is the q-multinomial, |l| <= 8",
        inversion_multinomial,
    ),
    (
        "addition-decomposition-big-e",
        "E_{q,2}^{x+y} = E_{q,2}^x * sum lambda_{c,d} x^c y^d through total degree 8",
        decomposition_big_e,
    ),
    (
        "addition-decomposition-small-e",
        "e_{q,2}^{x+y} = e_{q,2}^x * sum kappa_{c,d} x^c y^d through total degree 8",
        decomposition_small_e,
    ),
    (
        "decomposition-limit",
        "lambda_{c,d} and kappa_{c,d} tend to delta_{c,0}/d! as q -> 1, c, d <= 4",
        decomposition_limit,
    ),
    (
        "gamma-representations",
        "Gamma_{q,2}(t) closed form equals its Jackson integral and c(a,t) gamma^(a)_{q,2}(t)",
        gamma_representations,
    ),
    (
        "gaussian-moments",
        "normalized q-Gaussian moments: mu_{2n} = [1]_{n,2}, odd moments vanish",
        gaussian_moments,
    ),
    (
        "graph-sum",
        "sum of h_q omega_q / aut_q over q-graph classes equals the expansion term by term, c+j <= 4, d <= 3",
        graph_sum,
    ),
    (
        "classical-limit",
        "q -> 1 limit of the expansion equals the classical Wick expansion, x-degree <= 8",
        classical_limit,
    ),
    (
        "odd-degree-vanishing",
        "coefficients of g-monomials with odd x-degree vanish",
        odd_degree_vanishing,
    ),
    (
        "exact-float-consistency",
        "float coefficient groups equal exact groups evaluated at q",
        exact_float_consistency,
    ),
    (
        "integration-comparison",
        "normalized Jackson integral of the perturbed q-Gaussian equals the expansion through D = 4",
        integration_comparison,
    ),
    (
        "seeded-random-properties",
        "random pairings, fiber sizes and gamma arguments drawn from the seed",
        seeded_random_properties,
    ),
];

/// Runs every suite in parallel and assembles the report in name order.
pub fn run_suites(ctx: &QContext, seed: u64) -> VerifyReport {
    let params = Params { ctx: *ctx, seed };
    let mut suites: Vec<SuiteResult> = SUITES
        .par_iter()
        .map(|(name, identity, f)| {
            let mut tally = Tally::default();
            if let Err(e) = f(&params, &mut tally) {
                tally.fail(format!("error: {e}"));
            }
            SuiteResult {
                name: name.to_string(),
                identity: identity.to_string(),
                checked: tally.checked,
                failed: tally.failed,
                passed: tally.failed == 0,
                failures: tally.failures,
            }
        })
        .collect();
    suites.sort_by(|a, b| a.name.cmp(&b.name));
    let checked = suites.iter().map(|s| s.checked).sum();
    let failed = suites.iter().map(|s| s.failed).sum();
    VerifyReport {
        command: "verify",
        q: ctx.q(),
        tol: ctx.tol(),
        seed,
        suites,
        checked,
        failed,
        passed: failed == 0,
    }
}

fn rel_err(x: f64, reference: f64) -> f64 {
    (x - reference).abs() / reference.abs()
}

fn pairing_weights(_: &Params, t: &mut Tally) -> Result<()> {
    for n in 1..=6 {
        let sum = sum_pairing_weights(n)?;
        t.check(sum == pochhammer_qk(1, n, 2), || format!("n = {n}: {sum}"));
        let odd = Rational::from_integer(crate::qarith::rational::double_factorial_odd(n as u64));
        t.check(sum.at_one() == odd, || {
            format!("n = {n}: value {} at q = 1", sum.at_one())
        });
    }
    Ok(())
}

fn inversion_multinomial(_: &Params, t: &mut Tally) -> Result<()> {
    for total in 1..=8 {
        for d in 1..=total {
            for l in compositions(total, d)? {
                let parts = l.parts();
                let ok = inv_generating(parts)? == qmultinomial(parts)?;
                t.check(ok, || format!("fiber sizes {parts:?}"));
            }
        }
    }
    Ok(())
}

fn decomposition(kind: ExpKind, t: &mut Tally) -> Result<()> {
    let r = verify_addition_decomposition(kind, 8)?;
    t.checked += r.checked as u64;
    for m in r.failures {
        t.fail(format!("x^{} y^{}: {} vs {}", m.a, m.b, m.lhs, m.rhs));
    }
    Ok(())
}

fn decomposition_big_e(_: &Params, t: &mut Tally) -> Result<()> {
    decomposition(ExpKind::BigE, t)
}

fn decomposition_small_e(_: &Params, t: &mut Tally) -> Result<()> {
    decomposition(ExpKind::SmallE, t)
}

fn decomposition_limit(_: &Params, t: &mut Tally) -> Result<()> {
    for kind in [LambdaKind::Lambda, LambdaKind::Kappa] {
        let table = LambdaTable::new(kind);
        for c in 0..=4 {
            for d in 0..=4 {
                let got = qrat_limit_at_one(&lambda_coeff(&table, c, d))?;
                let want = if c == 0 {
                    Rational::new(1.into(), factorial(d as u64))
                } else {
                    int(0)
                };
                t.check(got == want, || format!("{kind:?} c = {c}, d = {d}: {got}"));
            }
        }
    }
    Ok(())
}

fn gamma_representations(p: &Params, t: &mut Tally) -> Result<()> {
    let ctx = &p.ctx;
    for s in [1.0, 2.0, 3.0, 5.0] {
        let closed = gamma_q2_closed(ctx, s)?;
        let integral = gamma_q2_integral(ctx, s)?.value;
        let e = rel_err(integral, closed);
        t.check(e <= 1e-8, || {
            format!("t = {s}: integral relative error {e:e}")
        });
        for a in [1.0, 2.0] {
            let bridged = c_factor(ctx, a, s)? * gamma_a_integral(ctx, a, s)?.value;
            let e = rel_err(bridged, closed);
            t.check(e <= 1e-7, || {
                format!("t = {s}, a = {a}: bridge relative error {e:e}")
            });
        }
    }
    Ok(())
}

fn gaussian_moments(p: &Params, t: &mut Tally) -> Result<()> {
    let ctx = &p.ctx;
    for n in 0..=6 {
        let mu = normalized_moment(ctx, n)?;
        let want = pochhammer_qk(1, n, 2).eval_f64(ctx.q());
        let e = rel_err(mu, want);
        t.check(e <= 1e-8, || format!("mu_{}: relative error {e:e}", 2 * n));
    }
    for p in (1..=11).step_by(2) {
        let v = gaussian_moment_raw(ctx, p)?.value;
        t.check(v == 0.0, || format!("odd moment x^{p} gave {v:e}"));
    }
    Ok(())
}

fn graph_sum(_: &Params, t: &mut Tally) -> Result<()> {
    let spec = CouplingSpec::new(8, 3, 8)?;
    let r = verify_graph_sum(&spec, &GraphBounds::new(4, 3, 4, 4))?;
    t.checked += r.cells as u64;
    for m in r.failures {
        t.fail(format!(
            "cell {:?}: graphs {} vs series {}",
            m.cell, m.graph, m.series
        ));
    }
    Ok(())
}

fn classical_limit(_: &Params, t: &mut Tally) -> Result<()> {
    let spec = CouplingSpec::new(8, 8, 8)?;
    let r = verify_q_to_one(&spec, 8)?;
    t.checked += r.groups as u64;
    for m in r.failures {
        t.fail(format!(
            "{} c = {}: expected {}, got {}",
            m.monomial, m.c, m.expected, m.got
        ));
    }
    for (parts, want) in [(vec![4], rat(1, 8)), (vec![3, 3], rat(5, 24))] {
        let mono = Monomial::new(parts)?;
        let classical = classical_coefficient(&spec, &mono);
        let limit = group_limit(&spec, &mono, 0)?;
        t.check(classical == want && limit == want, || {
            format!("{mono}: classical {classical}, limit {limit}, expected {want}")
        });
    }
    Ok(())
}

fn odd_degree_vanishing(_: &Params, t: &mut Tally) -> Result<()> {
    let spec = CouplingSpec::new(4, 3, 8)?;
    for mono in spec.monomials().into_iter().filter(|m| m.weight() % 2 == 1) {
        let s = exact_monomial_series(&spec, &mono)?;
        t.check(s.is_zero(), || format!("{mono}: {s}"));
    }
    Ok(())
}

fn exact_float_consistency(p: &Params, t: &mut Tally) -> Result<()> {
    let spec = CouplingSpec::new(4, 2, 8)?;
    let q = p.ctx.q();
    for mono in spec.monomials().into_iter().filter(|m| m.weight() % 2 == 0) {
        for c in 0..=4 {
            let exact = coefficient_group(&spec, &mono, c)?.eval_f64(q)?;
            let float = float_group(&spec, &mono, &p.ctx, c);
            let e = (exact - float).abs();
            t.check(e <= 1e-10 * exact.abs().max(1.0), || {
                format!("{mono} c = {c}: exact {exact:e}, float {float:e}")
            });
        }
    }
    Ok(())
}

fn integration_comparison(p: &Params, t: &mut Tally) -> Result<()> {
    let spec = CouplingSpec::new(4, 4, 8)?;
    for g in [BTreeMap::from([(3, 0.1)]), BTreeMap::from([(4, 0.05)])] {
        let r = verify_against_integration(&spec, &p.ctx, &g)?;
        t.check(r.passed, || {
            format!(
                "{g:?}: residual {:e} above 10 x bound {:e}",
                r.residual, r.bound
            )
        });
    }
    let s = integration_scaling(&spec, &p.ctx, &BTreeMap::from([(4, 0.05)]))?;
    t.check(s.passed, || {
        format!(
            "g4 residual ratio {} under doubling, expected {}",
            s.ratio, s.expected
        )
    });
    Ok(())
}

fn random_pairing(rng: &mut ChaCha8Rng, n: usize) -> Vec<(usize, usize)> {
    let mut v: Vec<usize> = (1..=2 * n).collect();
    v.shuffle(rng);
    v.chunks(2).map(|c| (c[0], c[1])).collect()
}

fn seeded_random_properties(p: &Params, t: &mut Tally) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    // the weight depends on the matching only, and is bounded by deg [1]_{n,2}
    for _ in 0..32 {
        let n = rng.gen_range(1..=8);
        let mut chords = random_pairing(&mut rng, n);
        let alpha = Pairing::new(&chords)?;
        chords.reverse();
        let flipped: Vec<(usize, usize)> = chords.iter().map(|&(a, b)| (b, a)).collect();
        let beta = Pairing::new(&flipped)?;
        let w = alpha.weight_exponent();
        t.check(w == beta.weight_exponent() && w <= n * (n - 1), || {
            format!("pairing {:?}: weight {w}", alpha.pairs())
        });
    }
    // a random pairing of [[2n]] for n <= 4 occurs in the enumeration
    for _ in 0..8 {
        let n = rng.gen_range(1..=4);
        let alpha = Pairing::new(&random_pairing(&mut rng, n))?;
        let found = enumerate_pairings(n)?.any(|b| b == alpha);
        t.check(found, || {
            format!("pairing {:?} not enumerated", alpha.pairs())
        });
    }
    // random fiber sizes up to total 10, evaluated at random rational q
    for _ in 0..8 {
        let d = rng.gen_range(1..=4);
        let parts: Vec<usize> = (0..d).map(|_| rng.gen_range(1..=10 / d)).collect();
        let den: i64 = rng.gen_range(2..=50);
        let r = rat(rng.gen_range(1..den), den);
        let lhs = inv_generating(&parts)?.eval_rational(&r);
        let rhs = qmultinomial(&parts)?.eval_rational(&r);
        t.check(lhs == rhs, || format!("fiber sizes {parts:?} at q = {r}"));
    }
    // non-integer gamma arguments
    for _ in 0..4 {
        let s: f64 = rng.gen_range(0.5..6.0);
        let closed = gamma_q2_closed(&p.ctx, s)?;
        let e = rel_err(gamma_q2_integral(&p.ctx, s)?.value, closed);
        t.check(e <= 1e-8, || {
            format!("t = {s}: integral relative error {e:e}")
        });
    }
    Ok(())
}

//! Theorem sweeps and Monte Carlo cross-checks, each producing a
//! [`CheckReport`].
//!
//! Margins are signed: positive means the assertion holds with that much room,
//! negative means it is violated. Unless noted, a margin is the distance to the
//! nearest endpoint of the asserted interval.

use std::fmt;

use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::analytic::{tripartite_mutual_info_bound, Analytic};
use crate::exactmath::{BigReal, HarmonicErrors, HarmonicSweep, Rational, MAX_DIGITS};
use crate::sampler::{self, Caps, EstimateResult, Quantity, SampleSpec, SamplerError};

/// Failing points kept in a report; the rest are only counted.
pub const MAX_FAILURES: usize = 20;

/// z-score threshold for Monte Carlo agreement.
pub const Z_MAX: f64 = 4.0;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Failure {
    pub point: String,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub grid: String,
    pub points: u64,
    pub worst_margin: f64,
    pub worst_point: String,
    pub passed: bool,
    pub failure_count: u64,
    pub failures: Vec<Failure>,
    /// Observations that are reported but not asserted.
    pub notes: Vec<String>,
}

impl CheckReport {
    fn new(name: &str, grid: String) -> Self {
        CheckReport {
            name: name.to_string(),
            grid,
            points: 0,
            worst_margin: f64::INFINITY,
            worst_point: String::new(),
            passed: true,
            failure_count: 0,
            failures: Vec::new(),
            notes: Vec::new(),
        }
    }

    /// Records one assertion at `point`.
    fn assert_at(
        &mut self,
        point: impl Fn() -> String,
        ok: bool,
        margin: f64,
        detail: impl FnOnce() -> String,
    ) {
        if margin < self.worst_margin || (self.worst_point.is_empty() && !margin.is_nan()) {
            self.worst_margin = margin;
            self.worst_point = point();
        }
        if !ok {
            self.passed = false;
            self.failure_count += 1;
            if self.failures.len() < MAX_FAILURES {
                self.failures.push(Failure {
                    point: point(),
                    detail: detail(),
                });
            }
        }
    }

    fn point_done(&mut self) {
        self.points += 1;
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{} [{}]: {} points, worst margin {:.6e} at {}",
            self.name,
            if self.passed { "PASS" } else { "FAIL" },
            self.points,
            self.worst_margin,
            self.worst_point
        )?;
        writeln!(f, "  grid: {}", self.grid)?;
        for fail in &self.failures {
            writeln!(f, "  violation at {}: {}", fail.point, fail.detail)?;
        }
        if self.failure_count > self.failures.len() as u64 {
            writeln!(
                f,
                "  ... {} more violations",
                self.failure_count - self.failures.len() as u64
            )?;
        }
        for note in &self.notes {
            writeln!(f, "  note: {note}")?;
        }
        Ok(())
    }
}

fn ratio(p: u64, q: u64) -> Rational {
    Rational::new(p.into(), q.into())
}

fn rat_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Distance of `x` inside the open interval `(lo, hi)`; negative outside.
fn interval_margin(x: &BigReal, lo: &BigReal, hi: &BigReal) -> f64 {
    (x - lo).to_f64().min((hi - x).to_f64())
}

/// `Δ_{m,M} = S_{m,M} - ln m` strictly inside `(-m/(2M), -(m-1)/(2M))` for
/// `2 <= m <= M`, and `Δ_{1,M} = 0` exactly.
///
/// Harmonic numbers come from a running fixed-point sum and `ln m` from the
/// fixed-point logarithm, at `digits` + 10 digits; this route shares nothing
/// with the exact rational evaluation, which is compared on the diagonal.
pub fn check_delta_interval(m_max: u64, big_m_max: u64, digits: u32) -> CheckReport {
    let d = (digits + 10).min(MAX_DIGITS);
    let mut report = CheckReport::new(
        "delta-interval",
        format!("2 <= m <= M, m <= {m_max}, M <= {big_m_max}; m = 1 row exact; {digits} digits"),
    );
    let top = (m_max * big_m_max) as usize;
    let mut h = Vec::with_capacity(top + 1);
    h.push(BigReal::zero(d));
    for n in 1..=top {
        let next = &h[n - 1] + &BigReal::recip_u64(n as u64, d);
        h.push(next);
    }
    let exact = Analytic::new(digits);
    for big_m in 1..=big_m_max {
        let delta = exact.entropy_deficit(1, big_m);
        let zero = delta.exact.as_ref().is_some_and(Zero::is_zero);
        report.assert_at(
            || format!("m=1 M={big_m}"),
            zero,
            f64::INFINITY,
            || format!("Δ = {:?}, expected exactly 0", delta.exact),
        );
        report.point_done();
    }
    for m in 2..=m_max {
        let ln_m = BigReal::ln_u64(m, d);
        for big_m in m..=big_m_max {
            let tail = BigReal::from_ratio(&ratio(m - 1, 2 * big_m), d);
            let s = &(&h[(m * big_m) as usize] - &h[big_m as usize]) - &tail;
            let delta = &s - &ln_m;
            let lo = -BigReal::from_ratio(&ratio(m, 2 * big_m), d);
            let hi = -tail.clone();
            let ok = delta > lo && delta < hi;
            let margin = interval_margin(&delta, &lo, &hi);
            report.assert_at(
                || format!("m={m} M={big_m}"),
                ok,
                margin,
                || {
                    format!(
                        "Δ = {} not in ({}, {})",
                        delta.to_decimal(digits),
                        lo.to_decimal(digits),
                        hi.to_decimal(digits)
                    )
                },
            );
            if m == big_m {
                let via_exact = exact.entropy_deficit(m, big_m).nats;
                let gap = (&via_exact - &delta).abs();
                let tol = BigReal::ten_pow_neg(digits, d);
                report.assert_at(
                    || format!("m=M={m} (exact cross-check)"),
                    gap < tol,
                    margin,
                    || format!("running-sum and exact routes differ by {}", gap.to_f64()),
                );
            }
            report.point_done();
        }
    }
    report
}

/// Havil, Franel, fourth-order and weak bounds on `H_n` for `n <= n_max`, and
/// strict decrease of `eps_n = H_n - ln n - gamma`.
///
/// Margins here are relative to each interval's width.
pub fn check_harmonic_bounds(n_max: u64) -> CheckReport {
    let d = 60;
    let mut report = CheckReport::new("harmonic", format!("1 <= n <= {n_max}; 60 digits"));
    let gamma = BigReal::euler_gamma(d);
    let zero = BigReal::zero(d);
    let one = BigReal::from_int(1, d);
    let mut prev: Option<BigReal> = None;
    for (n, h, ln_n) in HarmonicSweep::new(d).take(n_max as usize) {
        let e = HarmonicErrors::from_parts(n, &h, &ln_n, &gamma);
        let result = e.check();
        let havil_lo = BigReal::recip_u64(2 * (n + 1), d);
        let havil_hi = BigReal::recip_u64(2 * n, d);
        let havil_width = (&havil_hi - &havil_lo).to_f64();
        let mut margin = interval_margin(&e.havil, &havil_lo, &havil_hi) / havil_width;
        margin = margin.min(interval_margin(&e.franel, &zero, &one));
        margin = margin.min(interval_margin(&e.fourth_order, &zero, &one));
        if n >= 2 {
            let lo = BigReal::recip_u64(n, d);
            margin = margin.min(interval_margin(&e.weak, &lo, &one) / (1.0 - 1.0 / n as f64));
        }
        report.assert_at(
            || format!("n={n}"),
            result.is_ok(),
            margin,
            || result.as_ref().unwrap_err().to_string(),
        );
        if let Some(p) = &prev {
            let drop = p - &e.havil;
            report.assert_at(
                || format!("n={n} (monotonicity)"),
                drop.is_positive(),
                margin,
                || {
                    format!(
                        "eps_{n} = {} is not below eps_{} = {}",
                        e.havil.to_decimal(40),
                        n - 1,
                        p.to_decimal(40)
                    )
                },
            );
        }
        prev = Some(e.havil);
        report.point_done();
    }
    report
}

/// `0 <= <I_{A:B}> <= nA nB / (2 nC) <= 1/2` for `nA <= na_max`,
/// `nB <= nb_max`, `nA nB <= nC <= nc_max`, in exact rationals. The closed form
/// is also compared with `S_A + S_B - S_C` from the bipartite formula.
pub fn check_tripartite_bound(na_max: u64, nb_max: u64, nc_max: u64) -> CheckReport {
    let mut report = CheckReport::new(
        "tripartite",
        format!("nA <= {na_max}, nB <= {nb_max}, nA*nB <= nC <= {nc_max}; exact"),
    );
    let a = Analytic::new(30);
    let half = ratio(1, 2);
    for na in 1..=na_max {
        for nb in 1..=nb_max {
            for nc in na * nb..=nc_max {
                let point = || format!("nA={na} nB={nb} nC={nc}");
                let value = a.tripartite_avg_mutual_info(na, nb, nc).map(|v| v.exact);
                let bound = tripartite_mutual_info_bound(na, nb, nc);
                let (Ok(Some(i)), Ok(bound)) = (value, bound) else {
                    report.assert_at(point, false, f64::NAN, || {
                        "exact evaluation unavailable".into()
                    });
                    report.point_done();
                    continue;
                };
                let ok = i >= Rational::zero() && i <= bound && bound <= half;
                let margin = rat_f64(&(&bound - &i)).min(rat_f64(&i));
                report.assert_at(point, ok, margin, || {
                    format!("<I> = {i} ({:.12}), bound = {bound}", rat_f64(&i))
                });
                let other = a
                    .avg_mutual_info_any(&na.into(), &nb.into(), &nc.into())
                    .exact;
                report.assert_at(point, other.as_ref() == Some(&i), margin, || {
                    format!("closed form {i} differs from S_A + S_B - S_C = {other:?}")
                });
                report.point_done();
            }
        }
    }
    report
}

/// One Monte Carlo comparison.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct McCase {
    pub spec: SampleSpec,
    /// The estimate's standard error must not exceed this.
    pub stderr_ceiling: f64,
}

/// The standard campaign: entropy, purity, tangle, mutual information and the
/// concurrence upper bound.
pub fn default_campaign(seed: u64) -> Vec<McCase> {
    let case = |dims: &str, quantity, samples, ceiling| McCase {
        spec: SampleSpec {
            factors: dims.parse().expect("valid dims"),
            quantity,
            samples,
            seed,
        },
        stderr_ceiling: ceiling,
    };
    vec![
        case("2x2", Quantity::Entropy { keep: vec![0] }, 200_000, 0.002),
        case("3x5", Quantity::Purity { keep: vec![0] }, 100_000, 0.002),
        case("2x2", Quantity::Tangle { keep: vec![0] }, 100_000, 0.003),
        case(
            "2x2x4",
            Quantity::MutualInfo {
                a: vec![0],
                b: vec![1],
            },
            100_000,
            0.002,
        ),
        case(
            "2x4",
            Quantity::Tsallis {
                keep: vec![0],
                q: 2.0,
            },
            50_000,
            0.002,
        ),
        case(
            "2x3",
            Quantity::Concurrence { keep: vec![0] },
            50_000,
            0.003,
        ),
    ]
}

/// The outcome of one campaign entry.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct McOutcome {
    pub estimate: EstimateResult,
    pub oracle: Option<f64>,
    pub oracle_exact: Option<String>,
    pub upper_bound: bool,
    pub z: Option<f64>,
}

/// Runs each case and compares it with its closed-form oracle: `z <= 4` and
/// stderr under the case's ceiling, or for upper-bound oracles
/// `mean <= bound + 4 stderr`.
pub fn check_mc_agreement(
    cases: &[McCase],
    workers: usize,
    caps: &Caps,
) -> Result<(CheckReport, Vec<McOutcome>), SamplerError> {
    let analytic = Analytic::new(30);
    let grid: Vec<String> = cases
        .iter()
        .map(|c| {
            format!(
                "{} {} n={}",
                c.spec.factors, c.spec.quantity, c.spec.samples
            )
        })
        .collect();
    let mut report = CheckReport::new(
        "mc",
        format!(
            "{}; seed {}",
            grid.join("; "),
            cases.first().map_or(0, |c| c.spec.seed)
        ),
    );
    let mut outcomes = Vec::new();
    for case in cases {
        let est = sampler::estimate(&case.spec, workers, caps)?;
        let oracle = sampler::oracle_for(&case.spec, &analytic)?;
        let point = || format!("{} {}", case.spec.factors, case.spec.quantity);
        let mut outcome = McOutcome {
            estimate: est.clone(),
            oracle: None,
            oracle_exact: None,
            upper_bound: false,
            z: None,
        };
        if let Some(o) = oracle {
            let value = o.value.to_f64();
            outcome.oracle = Some(value);
            outcome.oracle_exact = o.exact.as_ref().map(|r| r.to_string());
            outcome.upper_bound = o.upper_bound;
            let stderr_ok = est.stderr <= case.stderr_ceiling;
            if o.upper_bound {
                let room = value + Z_MAX * est.stderr - est.mean;
                report.assert_at(point, room >= 0.0 && stderr_ok, room, || {
                    format!(
                        "mean {} stderr {} exceeds upper bound {value} (stderr ceiling {})",
                        est.mean, est.stderr, case.stderr_ceiling
                    )
                });
            } else {
                let z = sampler::z_score(&est, value);
                outcome.z = Some(z);
                report.assert_at(point, z <= Z_MAX && stderr_ok, Z_MAX - z, || {
                    format!(
                        "mean {} stderr {} oracle {value} z {z:.3} (stderr ceiling {}, seed {})",
                        est.mean, est.stderr, case.stderr_ceiling, est.seed
                    )
                });
            }
        } else {
            report
                .notes
                .push(format!("{}: no closed form, estimate only", point()));
        }
        report.point_done();
        outcomes.push(outcome);
    }
    Ok((report, outcomes))
}

/// Approximation slacks of the averaged entropies on tripartite grids with
/// `nC >= nA nB`:
///
/// - sum rule: `Ĩ_AB + Ĩ_BA + <I_{A:B}>` within 3/2 nat of `ln(nA nB)`, for
///   the pure state on `A (x) B`;
/// - `<S_A> + <S_B>` within 1 nat of `<S_C>`;
/// - `<S_A> + <S_B> + <S_C>` within 3/2 nat of its closed-form approximation.
///
/// Margins are `slack - |deviation|`.
pub fn check_approximation_slacks(na_max: u64, nb_max: u64, nc_max: u64) -> CheckReport {
    let mut report = CheckReport::new(
        "slacks",
        format!("nA <= {na_max}, nB <= {nb_max}, nA*nB <= nC <= {nc_max}; 30 digits"),
    );
    let a = Analytic::new(30);
    let d = a.digits() + 10;
    let slack = |p: u64, q: u64| BigReal::from_ratio(&ratio(p, q), d);
    let (one, three_halves) = (slack(1, 1), slack(3, 2));
    let mut embedded_worst = 0.0f64;
    for na in 1..=na_max {
        for nb in 1..=nb_max {
            let asym = a.asymmetric_info(na, nb);
            let pair_mi = a.page_sen_entropy(na, nb).nats.mul_u64(2);
            let ln_ab = BigReal::ln_u64(na * nb, d);
            let sum_rule_dev = (&(&(&asym.ab.nats + &asym.ba.nats) + &pair_mi) - &ln_ab).abs();
            for nc in na * nb..=nc_max {
                let point = || format!("nA={na} nB={nb} nC={nc}");
                report.assert_at(
                    point,
                    sum_rule_dev <= three_halves,
                    (&three_halves - &sum_rule_dev).to_f64(),
                    || format!("sum rule off by {}", sum_rule_dev.to_decimal(20)),
                );

                let sa = a.page_sen_entropy(na, nb * nc).nats;
                let sb = a.page_sen_entropy(nb, na * nc).nats;
                let sc = a.page_sen_entropy(nc, na * nb).nats;
                let dev = (&(&sa + &sb) - &sc).abs();
                report.assert_at(point, dev <= one, (&one - &dev).to_f64(), || {
                    format!("|S_A + S_B - S_C| = {}", dev.to_decimal(20))
                });

                let approx = a.tripartite_entropy_sum_approx(na, nb, nc).nats;
                let dev3 = (&(&(&sa + &sb) + &sc) - &approx).abs();
                report.assert_at(
                    point,
                    dev3 <= three_halves,
                    (&three_halves - &dev3).to_f64(),
                    || format!("entropy-sum approximation off by {}", dev3.to_decimal(20)),
                );

                embedded_worst = embedded_worst.max(sc.to_f64());
                report.point_done();
            }
        }
    }
    report.notes.push(format!(
        "sum rule with every term taken inside the tripartite space reduces to ln(nA nB) - <S_C>; worst deviation {embedded_worst:.4} nat (not asserted)"
    ));
    report
}

/// Names accepted by [`run_named`].
pub const CHECKS: &[&str] = &["delta-interval", "harmonic", "tripartite", "mc", "slacks"];

/// Grid sizes and Monte Carlo settings for a verification run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyConfig {
    pub m_max: u64,
    pub big_m_max: u64,
    pub n_max: u64,
    pub na_max: u64,
    pub nb_max: u64,
    pub nc_max: u64,
    pub digits: u32,
    pub seed: u64,
    pub workers: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            m_max: 64,
            big_m_max: 64,
            n_max: 100_000,
            na_max: 4,
            nb_max: 4,
            nc_max: 64,
            digits: 30,
            seed: 0,
            workers: 1,
        }
    }
}

/// Runs one named check.
pub fn run_named(
    name: &str,
    cfg: &VerifyConfig,
    caps: &Caps,
) -> Result<Option<CheckReport>, SamplerError> {
    Ok(Some(match name {
        "delta-interval" => check_delta_interval(cfg.m_max, cfg.big_m_max, cfg.digits),
        "harmonic" => check_harmonic_bounds(cfg.n_max),
        "tripartite" => check_tripartite_bound(cfg.na_max, cfg.nb_max, cfg.nc_max),
        "mc" => check_mc_agreement(&default_campaign(cfg.seed), cfg.workers, caps)?.0,
        "slacks" => check_approximation_slacks(cfg.na_max, cfg.nb_max, cfg.nc_max),
        _ => return Ok(None),
    }))
}

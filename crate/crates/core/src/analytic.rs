//! Closed-form averages over Haar-random pure states.
//!
//! Rational-valued quantities (purity, tangle, the Page-Sen entropy while the
//! harmonic numbers stay under [`EXACT_HARMONIC_CAP`]) are returned exactly.
//! Anything involving `ln` is a [`BigReal`] at the evaluator's precision.
//!
//! Notation: `m = min(nA, nB)`, `M = max(nA, nB)`.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::exactmath::{
    harmonic, harmonic_approx, rational, BigReal, Rational, EXACT_HARMONIC_CAP,
};
use crate::partition::{disjoint, min_max_split, FactorList, PartitionError, Selector};

pub const DEFAULT_DIGITS: u32 = 40;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalyticError {
    #[error(
        "exact tripartite mutual information needs nA*nB <= nC (C must dominate); got nA={na}, nB={nb}, nC={nc}"
    )]
    Regime {
        na: BigUint,
        nb: BigUint,
        nc: BigUint,
    },
    #[error("collections overlap: {a} and {b} share a factor")]
    Overlap { a: String, b: String },
    #[error("collections are not small: nA^2 nB^2 = {lhs} exceeds n = {total}")]
    NotSmall { lhs: BigUint, total: BigUint },
    #[error(transparent)]
    Partition(#[from] PartitionError),
}

pub type Result<T> = std::result::Result<T, AnalyticError>;

/// Marks a value as an approximation with a stated worst-case slack.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Approximation {
    /// Slack in nats, as `p/q`.
    pub slack_nats: String,
    pub note: &'static str,
}

/// An average entropy in nats.
#[derive(Clone, Debug)]
pub struct EntropyValue {
    pub nats: BigReal,
    /// Exact rational value when the quantity is a combination of harmonic
    /// numbers evaluated exactly.
    pub exact: Option<Rational>,
    pub approximation: Option<Approximation>,
}

/// An average information quantity in nats.
#[derive(Clone, Debug)]
pub struct InfoValue {
    pub nats: BigReal,
    pub exact: Option<Rational>,
}

impl EntropyValue {
    fn exact(r: Rational, digits: u32) -> Self {
        EntropyValue {
            nats: BigReal::from_ratio(&r, digits),
            exact: Some(r),
            approximation: None,
        }
    }

    fn real(nats: BigReal) -> Self {
        EntropyValue {
            nats,
            exact: None,
            approximation: None,
        }
    }
}

impl InfoValue {
    fn real(nats: BigReal) -> Self {
        InfoValue { nats, exact: None }
    }

    fn from_entropy(e: EntropyValue) -> Self {
        InfoValue {
            nats: e.nats,
            exact: e.exact,
        }
    }
}

/// `(Ĩ_AB, Ĩ_BA, their mean)`.
#[derive(Clone, Debug)]
pub struct AsymmetricInfo {
    pub ab: InfoValue,
    pub ba: InfoValue,
    pub average: InfoValue,
}

fn big(n: u64) -> BigUint {
    BigUint::from(n)
}

fn ratio_of(p: &BigUint, q: &BigUint) -> Rational {
    Rational::new(BigInt::from(p.clone()), BigInt::from(q.clone()))
}

fn min_max(a: u64, b: u64) -> (u64, u64) {
    (a.min(b), a.max(b))
}

/// Precision-carrying evaluator for the real-valued closed forms.
#[derive(Clone, Copy, Debug)]
pub struct Analytic {
    digits: u32,
}

impl Default for Analytic {
    fn default() -> Self {
        Analytic::new(DEFAULT_DIGITS)
    }
}

impl Analytic {
    pub fn new(digits: u32) -> Self {
        Analytic {
            digits: digits.clamp(1, crate::exactmath::MAX_DIGITS),
        }
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    fn guard(&self) -> u32 {
        (self.digits + 10).min(crate::exactmath::MAX_DIGITS)
    }

    fn ln(&self, n: &BigUint) -> BigReal {
        BigReal::ln_uint(n, self.guard())
    }

    /// `H_hi - H_lo`, exact when `hi` is within the exact cap.
    fn harmonic_gap(&self, hi: &BigUint, lo: &BigUint) -> (BigReal, Option<Rational>) {
        if let (Some(h), Some(l)) = (hi.to_u64(), lo.to_u64()) {
            if h <= EXACT_HARMONIC_CAP {
                let r = harmonic(h).expect("within cap") - harmonic(l).expect("within cap");
                return (BigReal::from_ratio(&r, self.guard()), Some(r));
            }
        }
        let d = self.guard();
        (
            &harmonic_approx(hi.clone(), d) - &harmonic_approx(lo.clone(), d),
            None,
        )
    }

    /// Page-Sen average entropy `H_{mM} - H_M - (m-1)/(2M)` on arbitrary-size
    /// dimensions.
    pub fn page_sen_big(&self, na: &BigUint, nb: &BigUint) -> EntropyValue {
        assert!(!na.is_zero() && !nb.is_zero(), "dimensions must be >= 1");
        let (m, big_m) = if na <= nb { (na, nb) } else { (nb, na) };
        if m.is_one() {
            return EntropyValue::exact(Rational::zero(), self.guard());
        }
        let total = m * big_m;
        let tail = ratio_of(&(m - 1u32), &(big_m * 2u32));
        let (gap, exact_gap) = self.harmonic_gap(&total, big_m);
        match exact_gap {
            Some(r) => EntropyValue::exact(r - tail, self.guard()),
            None => EntropyValue::real(&gap - &BigReal::from_ratio(&tail, self.guard())),
        }
    }

    pub fn page_sen_entropy(&self, na: u64, nb: u64) -> EntropyValue {
        self.page_sen_big(&big(na), &big(nb))
    }

    fn deficit_big(&self, na: &BigUint, nb: &BigUint) -> InfoValue {
        let m = na.min(nb);
        if m.is_one() {
            return InfoValue {
                nats: BigReal::zero(self.guard()),
                exact: Some(Rational::zero()),
            };
        }
        let s = self.page_sen_big(na, nb);
        InfoValue::real(&s.nats - &self.ln(m))
    }

    /// `Δ_{m,M} = S - ln m`; exactly 0 when `m = 1`, otherwise inside
    /// `(-m/(2M), -(m-1)/(2M))`.
    pub fn entropy_deficit(&self, na: u64, nb: u64) -> InfoValue {
        self.deficit_big(&big(na), &big(nb))
    }

    /// `I = ln m - S = -Δ`.
    pub fn symmetric_info(&self, na: u64, nb: u64) -> InfoValue {
        let d = self.entropy_deficit(na, nb);
        InfoValue {
            nats: -d.nats,
            exact: d.exact.map(|r| -r),
        }
    }

    /// `Ĩ_AB = ln nA - S`, `Ĩ_BA = ln nB - S` and their arithmetic mean,
    /// which equals `(1/2) ln(M/m) + I`.
    pub fn asymmetric_info(&self, na: u64, nb: u64) -> AsymmetricInfo {
        let s = self.page_sen_entropy(na, nb).nats;
        let ab = &self.ln(&big(na)) - &s;
        let ba = &self.ln(&big(nb)) - &s;
        let average = (&ab + &ba).div_u64(2);
        AsymmetricInfo {
            ab: InfoValue::real(ab),
            ba: InfoValue::real(ba),
            average: InfoValue::real(average),
        }
    }

    /// `sqrt(<tau>)`, an upper bound on the average concurrence.
    pub fn concurrence_bound(&self, na: u64, nb: u64) -> BigReal {
        BigReal::from_ratio(&avg_tangle(na, nb), self.guard())
            .sqrt()
            .expect("tangle is non-negative")
    }

    fn tripartite_checked(&self, na: &BigUint, nb: &BigUint, nc: &BigUint) -> Result<()> {
        if na * nb > *nc {
            return Err(AnalyticError::Regime {
                na: na.clone(),
                nb: nb.clone(),
                nc: nc.clone(),
            });
        }
        Ok(())
    }

    /// Exact tripartite average mutual information, valid when `nA nB <= nC`:
    ///
    /// `H_{nA nB nC} + H_{nC} - H_{nA nC} - H_{nB nC}
    ///   + (nA-1)(nB-1)(nA nB + nA + nB) / (2 nA nB nC)`.
    pub fn tripartite_avg_mutual_info(&self, na: u64, nb: u64, nc: u64) -> Result<InfoValue> {
        self.tripartite_big(&big(na), &big(nb), &big(nc))
    }

    pub fn tripartite_big(&self, na: &BigUint, nb: &BigUint, nc: &BigUint) -> Result<InfoValue> {
        self.tripartite_checked(na, nb, nc)?;
        let one = BigUint::one();
        let correction = ratio_of(
            &((na - &one) * (nb - &one) * (na * nb + na + nb)),
            &(na * nb * nc * 2u32),
        );
        let n = na * nb * nc;
        let (g1, e1) = self.harmonic_gap(&n, &(na * nc));
        // H_{nC} - H_{nB nC}
        let (g2, e2) = self.harmonic_gap(&(nb * nc), nc);
        let (g2, e2) = (-g2, e2.map(|r| -r));
        match (e1, e2) {
            (Some(a), Some(b)) => {
                let r = a + b + correction;
                Ok(InfoValue {
                    nats: BigReal::from_ratio(&r, self.guard()),
                    exact: Some(r),
                })
            }
            _ => Ok(InfoValue::real(
                &(&g1 + &g2) + &BigReal::from_ratio(&correction, self.guard()),
            )),
        }
    }

    /// `S_{nA, nB nC} + S_{nB, nA nC} - S_{nC, nA nB}`: the average mutual
    /// information between A and B in any tripartite split, with no regime
    /// restriction.
    pub fn avg_mutual_info_any(&self, na: &BigUint, nb: &BigUint, nc: &BigUint) -> InfoValue {
        let sa = self.page_sen_big(na, &(nb * nc));
        let sb = self.page_sen_big(nb, &(na * nc));
        let sc = self.page_sen_big(nc, &(na * nb));
        let nats = &(&sa.nats + &sb.nats) - &sc.nats;
        let exact = match (sa.exact, sb.exact, sc.exact) {
            (Some(a), Some(b), Some(c)) => Some(a + b - c),
            _ => None,
        };
        InfoValue { nats, exact }
    }

    /// `ln n + min(0, ln n - 2 max(ln nA, ln nB, ln nC))`, approximating
    /// `<S_A + S_B + S_C>` to within 3/2 nat.
    pub fn tripartite_entropy_sum_approx(&self, na: u64, nb: u64, nc: u64) -> EntropyValue {
        let n = big(na) * big(nb) * big(nc);
        let ln_n = self.ln(&n);
        let largest = big(na.max(nb).max(nc));
        let excess = &ln_n - &self.ln(&largest).mul_u64(2);
        let nats = if excess.is_negative() {
            &ln_n + &excess
        } else {
            ln_n
        };
        EntropyValue {
            nats,
            exact: None,
            approximation: Some(Approximation {
                slack_nats: "3/2".into(),
                note: "sum of three half-nat maximal-mixing approximations",
            }),
        }
    }

    /// Average entropy of a collection: Page-Sen on `(n_K, n / n_K)`.
    pub fn multipartite_collection_entropy(
        &self,
        factors: &FactorList,
        sel: &Selector,
    ) -> Result<EntropyValue> {
        let split = min_max_split(sel.kept_dim(), factors.total())?;
        Ok(self.page_sen_big(&split.m, &split.big_m))
    }

    /// Average mutual information between two disjoint collections, via the
    /// tripartite split (A, B, rest).
    pub fn multipartite_avg_mutual_info(
        &self,
        factors: &FactorList,
        a: &Selector,
        b: &Selector,
    ) -> Result<InfoValue> {
        check_disjoint(a, b)?;
        let nc = factors.total() / (a.kept_dim() * b.kept_dim());
        Ok(self.avg_mutual_info_any(a.kept_dim(), b.kept_dim(), &nc))
    }

    /// `ln m`, the `M -> infinity` limit of the Page-Sen entropy.
    pub fn thermo_limit_entropy(&self, m: u64) -> EntropyValue {
        assert!(m >= 1);
        if m == 1 {
            return EntropyValue::exact(Rational::zero(), self.guard());
        }
        EntropyValue::real(self.ln(&big(m)))
    }

    /// Average entropy as an [`InfoValue`] for uniform handling in reports.
    pub fn page_sen_info(&self, na: u64, nb: u64) -> InfoValue {
        InfoValue::from_entropy(self.page_sen_entropy(na, nb))
    }
}

fn check_disjoint(a: &Selector, b: &Selector) -> Result<()> {
    if !disjoint(a, b) {
        return Err(AnalyticError::Overlap {
            a: a.to_string(),
            b: b.to_string(),
        });
    }
    Ok(())
}

/// `<tr rho_A^2> = (nA + nB) / (nA nB + 1)`.
pub fn avg_purity(na: u64, nb: u64) -> Rational {
    let (a, b) = (big(na), big(nb));
    ratio_of(&(&a + &b), &(&a * &b + 1u32))
}

/// `<tau> = 2 (m-1)(M-1) / (mM + 1)`.
pub fn avg_tangle(na: u64, nb: u64) -> Rational {
    let (m, big_m) = min_max(na, nb);
    let (m, big_m) = (big(m), big(big_m));
    ratio_of(
        &((&m - 1u32) * (&big_m - 1u32) * 2u32),
        &(&m * &big_m + 1u32),
    )
}

/// `2(1 - 1/m) - <tau> = 2(m^2 - 1) / (m (mM + 1))`, at most `2/M`.
pub fn tangle_deficit(na: u64, nb: u64) -> Rational {
    let (m, big_m) = min_max(na, nb);
    let (m, big_m) = (big(m), big(big_m));
    ratio_of(&((&m * &m - 1u32) * 2u32), &(&m * (&m * &big_m + 1u32)))
}

/// `2 (1 - 1/m)`, the `M -> infinity` limit of the average tangle.
pub fn thermo_limit_tangle(m: u64) -> Rational {
    assert!(m >= 1);
    rational(2, 1) * (Rational::one() - rational(1, m as i64))
}

/// `nA nB / (2 nC)`, the upper bound on `<I_{A:B}>` when `nA nB <= nC`.
pub fn tripartite_mutual_info_bound(na: u64, nb: u64, nc: u64) -> Result<Rational> {
    let (a, b, c) = (big(na), big(nb), big(nc));
    if &a * &b > c {
        return Err(AnalyticError::Regime {
            na: a,
            nb: b,
            nc: c,
        });
    }
    Ok(ratio_of(&(&a * &b), &(c * 2u32)))
}

/// `nA nB / (2 nC) = nA^2 nB^2 / (2n)` for two disjoint, small collections.
///
/// Zero when either collection is one-dimensional, since the average mutual
/// information with a trivial subsystem vanishes identically.
pub fn multipartite_mutual_info_bound(
    factors: &FactorList,
    a: &Selector,
    b: &Selector,
) -> Result<Rational> {
    check_disjoint(a, b)?;
    let (na, nb) = (a.kept_dim(), b.kept_dim());
    let lhs = na * na * nb * nb;
    if &lhs > factors.total() {
        return Err(AnalyticError::NotSmall {
            lhs,
            total: factors.total().clone(),
        });
    }
    if na.is_one() || nb.is_one() {
        return Ok(Rational::zero());
    }
    Ok(ratio_of(&lhs, &(factors.total() * 2u32)))
}

/// Every closed-form operation of this module, for the claims ledger.
pub const OPERATIONS: &[&str] = &[
    "page_sen_entropy",
    "entropy_deficit",
    "symmetric_info",
    "asymmetric_info",
    "avg_purity",
    "avg_tangle",
    "concurrence_bound",
    "tangle_deficit",
    "tripartite_avg_mutual_info",
    "tripartite_mutual_info_bound",
    "tripartite_entropy_sum_approx",
    "avg_mutual_info_any",
    "multipartite_collection_entropy",
    "multipartite_mutual_info_bound",
    "thermo_limit_entropy",
    "thermo_limit_tangle",
];

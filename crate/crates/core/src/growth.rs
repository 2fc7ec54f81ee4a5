//! Pumping certificates for unbounded sequences.
//!
//! A certificate is a set of prefix words u_i, a nonempty pump word y,
//! and a set of suffix words v_j, together with a positive rational c0,
//! such that max over (i, j) of |f([u_i y^n v_j])| >= c0 * n for the
//! verified range of n. From the certificate constants one derives a
//! rational c_log with c_log <= c0 / (2 M ln k), where M is the longest
//! stored word; the numbers N = [u y^n v] then satisfy |f(N)| > c_log ln N,
//! which is the logarithmic lower bound witnessed "infinitely often" along
//! a geometric grid.
//!
//! Prefixes span the reachable row space and suffixes span the co-reachable
//! column space; the pump is an infinite-order element of the digit-matrix
//! semigroup found in canonical order. Everything that gates a PASS is
//! compared in exact rational arithmetic; logarithms only ever enter
//! through conservatively rounded rational bounds.

use crate::error::{Error, Result};
use crate::linrep::LinearRepresentation;
use crate::semigroup::{
    search_witnesses, spanning_prefixes, spanning_suffixes, ExplorationBudget,
    SearchTerminal,
};
use crate::spectral::Classification;
use crate::word::Word;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GrowthKind {
    Linear,
    Exponential,
}

impl fmt::Display for GrowthKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GrowthKind::Linear => write!(f, "linear"),
            GrowthKind::Exponential => write!(f, "exponential"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrowthCertificate {
    base: u32,
    prefixes: Vec<Word>,
    pump: Word,
    suffixes: Vec<Word>,
    c0: BigRational,
    c_log: BigRational,
    kind: GrowthKind,
}

impl GrowthCertificate {
    pub fn new(
        base: u32,
        prefixes: Vec<Word>,
        pump: Word,
        suffixes: Vec<Word>,
        c0: BigRational,
        c_log: BigRational,
        kind: GrowthKind,
    ) -> Result<Self> {
        if base < 2 {
            return Err(Error::InvalidBase(base));
        }
        if pump.is_empty() {
            return Err(Error::InvalidParameter("pump word must be nonempty".into()));
        }
        if prefixes.is_empty() || suffixes.is_empty() {
            return Err(Error::InvalidParameter(
                "certificate needs at least one prefix and one suffix".into(),
            ));
        }
        for w in prefixes.iter().chain(suffixes.iter()).chain([&pump]) {
            if w.base() != base {
                return Err(Error::BaseMismatch {
                    left: base,
                    right: w.base(),
                });
            }
        }
        if !c0.is_positive() || !c_log.is_positive() {
            return Err(Error::InvalidParameter(
                "growth constants must be positive".into(),
            ));
        }
        Ok(GrowthCertificate {
            base,
            prefixes,
            pump,
            suffixes,
            c0,
            c_log,
            kind,
        })
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn prefixes(&self) -> &[Word] {
        &self.prefixes
    }

    pub fn pump(&self) -> &Word {
        &self.pump
    }

    pub fn suffixes(&self) -> &[Word] {
        &self.suffixes
    }

    pub fn c0(&self) -> &BigRational {
        &self.c0
    }

    pub fn c_log(&self) -> &BigRational {
        &self.c_log
    }

    pub fn kind(&self) -> GrowthKind {
        self.kind
    }

    /// M: the longest stored word (prefixes, pump, suffixes).
    pub fn max_word_len(&self) -> usize {
        self.prefixes
            .iter()
            .chain(self.suffixes.iter())
            .chain([&self.pump])
            .map(Word::len)
            .max()
            .expect("certificate words are nonempty")
    }

    /// Kernel origin (p, q) of each suffix: p is the length and q the
    /// numeric value, so the suffix addresses the subsequence at
    /// base^p * n + q.
    pub fn suffix_origins(&self) -> Vec<(usize, BigUint)> {
        self.suffixes.iter().map(|v| (v.len(), v.value())).collect()
    }

    /// Diagnostic coefficient mass: the product of the total 1-norms of
    /// the prefix row images and the suffix column images. An integer
    /// stand-in for the coefficient-sum bound in the underlying growth
    /// argument; reported, never used to gate a PASS.
    pub fn k_diag(&self, rep: &LinearRepresentation) -> Result<BigRational> {
        let mut prefix_mass = BigInt::zero();
        for u in &self.prefixes {
            let mut v = rep.row().to_vec();
            for &d in u.digits() {
                v = rep.matrix(d).vec_mul(&v);
            }
            prefix_mass += v.iter().map(|e| e.abs()).sum::<BigInt>();
        }
        let mut suffix_mass = BigInt::zero();
        for w in &self.suffixes {
            let mut v = rep.col().to_vec();
            for &d in w.digits().iter().rev() {
                v = rep.matrix(d).mul_vec(&v);
            }
            suffix_mass += v.iter().map(|e| e.abs()).sum::<BigInt>();
        }
        let one = BigInt::one();
        Ok(BigRational::from_integer(
            prefix_mass.max(one.clone()) * suffix_mass.max(one),
        ))
    }

    /// The certificate's internal consistency: c_log * 2M * ln k <= c0,
    /// checked against a rational upper bound on ln k.
    pub fn constants_consistent(&self) -> bool {
        let m = BigRational::from_integer(BigInt::from(2 * self.max_word_len() as u64));
        &self.c_log * m * ln_upper(self.base) <= self.c0
    }
}

/// Rational upper bound on ln k: ceil(10^6 ln k + 1) / 10^6. The float
/// rounding error is far below the 1e-6 slack, so the bound is safe.
pub fn ln_upper(k: u32) -> BigRational {
    let scaled = ((k as f64).ln() * 1e6).ceil() as i64 + 1;
    BigRational::new(BigInt::from(scaled), BigInt::from(1_000_000))
}

#[derive(Clone, Debug)]
pub struct GrowthOptions {
    pub semigroup_budget: ExplorationBudget,
    /// Infinite-order witnesses tried, in canonical order, before giving up.
    pub max_pump_candidates: usize,
    /// Verification ignores n below this threshold.
    pub n_min: u64,
    /// Right end of the probing window used to estimate c0.
    pub n_probe: u64,
}

impl Default for GrowthOptions {
    fn default() -> Self {
        GrowthOptions {
            semigroup_budget: ExplorationBudget::default(),
            max_pump_candidates: 5,
            n_min: 8,
            n_probe: 64,
        }
    }
}

#[derive(Debug)]
pub enum BuildOutcome {
    Certificate(GrowthCertificate),
    /// The digit-matrix semigroup is finite (or the functional is
    /// identically zero), so the sequence takes finitely many values.
    Bounded,
    BudgetExceeded { stage: String },
}

/// max over (prefix, suffix) of |f([u y^n v])|, leading zeros stripped.
fn pumped_max(
    rep: &LinearRepresentation,
    prefixes: &[Word],
    pump: &Word,
    suffixes: &[Word],
    n: u64,
) -> BigInt {
    let mut best = BigInt::zero();
    for u in prefixes {
        for v in suffixes {
            let word = Word::pumped(u, pump, n as usize, v).expect("same base");
            let value = rep.evaluate_word(&word).expect("same base").abs();
            if value > best {
                best = value;
            }
        }
    }
    best
}

/// Construct a certificate:
///  1. prefixes from the reachable row span,
///  2. pump candidates from the infinite-order search (finite semigroup
///     means the sequence is bounded),
///  3. suffixes from the co-reachable column span,
///  4. c0 estimated on the probing window, rejecting pumps whose values
///     fail to grow,
///  5. c_log = c0 / (2 M L) for a rational L >= ln k.
///
/// c0 is the smaller of the worst ratio m(n)/n and the worst increment
/// slope (m(n) - m(n_min)) / (n - n_min) over the window. The slope term
/// keeps the estimate honest when m(n) = n + b for a constant offset b:
/// the plain ratio would overshoot the asymptotic rate and fail later
/// verification at larger n.
pub fn build_certificate(
    rep: &LinearRepresentation,
    options: &GrowthOptions,
) -> Result<BuildOutcome> {
    let prefixes = spanning_prefixes(rep);
    let suffixes = spanning_suffixes(rep);
    if prefixes.is_empty() || suffixes.is_empty() {
        // zero row or zero column: the sequence is identically zero
        return Ok(BuildOutcome::Bounded);
    }
    let search = search_witnesses(
        rep.matrices(),
        &options.semigroup_budget,
        options.max_pump_candidates,
    )?;
    if search.witnesses.is_empty() {
        return Ok(match search.terminal {
            SearchTerminal::Closed(_) => BuildOutcome::Bounded,
            _ => BuildOutcome::BudgetExceeded {
                stage: "infinite-order pump search".into(),
            },
        });
    }

    let n_min = options.n_min.max(1);
    let n_probe = options.n_probe.max(n_min + 2);
    let mid = (n_min + n_probe) / 2;

    for (digits, report) in &search.witnesses {
        let pump = Word::new(rep.base(), digits.clone()).expect("digits in range");
        let window: Vec<(u64, BigInt)> = (n_min..=n_probe)
            .map(|n| (n, pumped_max(rep, &prefixes, &pump, &suffixes, n)))
            .collect();
        if window.iter().any(|(_, m)| m.is_zero()) {
            continue;
        }
        let first_half_max = window
            .iter()
            .filter(|(n, _)| *n <= mid)
            .map(|(_, m)| m.clone())
            .max()
            .expect("window nonempty");
        let second_half_max = window
            .iter()
            .filter(|(n, _)| *n > mid)
            .map(|(_, m)| m.clone())
            .max()
            .expect("window nonempty");
        if second_half_max <= first_half_max {
            // the pumped values do not grow; try the next witness
            continue;
        }
        let ratio_min = window
            .iter()
            .map(|(n, m)| BigRational::new(m.clone(), BigInt::from(*n)))
            .min()
            .expect("window nonempty");
        let m_at_min = window[0].1.clone();
        let slope_min = window
            .iter()
            .skip(1)
            .map(|(n, m)| {
                BigRational::new(m - &m_at_min, BigInt::from(n - n_min))
            })
            .min()
            .expect("window has more than one point");
        let c0 = ratio_min.min(slope_min);
        if !c0.is_positive() {
            continue;
        }
        let kind = match report.classification {
            Classification::Expanding => {
                // call the certificate exponential only when the pumped
                // values themselves grow super-linearly on the window
                let m_mid = window
                    .iter()
                    .find(|(n, _)| *n == mid)
                    .map(|(_, m)| m.clone())
                    .expect("mid lies in the window");
                let m_hi = window.last().unwrap().1.clone();
                if &m_hi - &m_mid > &m_mid - &m_at_min {
                    GrowthKind::Exponential
                } else {
                    GrowthKind::Linear
                }
            }
            _ => GrowthKind::Linear,
        };
        let max_len = prefixes
            .iter()
            .chain(suffixes.iter())
            .chain([&pump])
            .map(Word::len)
            .max()
            .unwrap();
        let c_log = &c0
            / (BigRational::from_integer(BigInt::from(2 * max_len as u64))
                * ln_upper(rep.base()));
        let certificate = GrowthCertificate::new(
            rep.base(),
            prefixes.clone(),
            pump,
            suffixes.clone(),
            c0,
            c_log,
            kind,
        )?;
        return Ok(BuildOutcome::Certificate(certificate));
    }

    Ok(BuildOutcome::BudgetExceeded {
        stage: format!(
            "none of the first {} infinite-order witnesses produced growing values",
            search.witnesses.len()
        ),
    })
}

#[derive(Clone, Debug)]
pub struct VerifyReport {
    /// (n, m(n)) for n = 1..=n_max, ascending.
    pub rows: Vec<(u64, BigInt)>,
    pub n_min: u64,
    pub c0: BigRational,
    pub pass: bool,
    pub first_failure: Option<u64>,
}

impl VerifyReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,m\n");
        for (n, m) in &self.rows {
            out.push_str(&format!("{n},{m}\n"));
        }
        out
    }
}

/// Recompute m(n) = max |f([u y^n v])| for n = 1..=n_max and test
/// m(n) >= c0 * n for every n >= n_min, in exact rational arithmetic.
pub fn verify_certificate(
    rep: &LinearRepresentation,
    cert: &GrowthCertificate,
    n_max: u64,
    n_min: u64,
) -> Result<VerifyReport> {
    if rep.base() != cert.base() {
        return Err(Error::BaseMismatch {
            left: rep.base(),
            right: cert.base(),
        });
    }
    let mut rows = Vec::with_capacity(n_max as usize);
    let mut first_failure = None;
    for n in 1..=n_max {
        let m = pumped_max(rep, &cert.prefixes, &cert.pump, &cert.suffixes, n);
        if n >= n_min
            && first_failure.is_none()
            && BigRational::from_integer(m.clone())
                < cert.c0() * BigRational::from_integer(BigInt::from(n))
        {
            first_failure = Some(n);
        }
        rows.push((n, m));
    }
    Ok(VerifyReport {
        rows,
        n_min,
        c0: cert.c0().clone(),
        pass: first_failure.is_none(),
        first_failure,
    })
}

#[derive(Clone, Debug)]
pub struct LogLbWitness {
    pub n: u64,
    pub prefix_index: usize,
    pub suffix_index: usize,
    /// N = [u y^n v].
    pub value: BigUint,
    pub f_abs: BigInt,
    /// The conservative threshold c_log * digits(N) * L that |f(N)| beat.
    pub threshold: BigRational,
}

#[derive(Clone, Debug)]
pub struct LogLbRow {
    pub x: BigUint,
    pub witness: Option<LogLbWitness>,
}

#[derive(Clone, Debug)]
pub struct LogLbReport {
    pub rows: Vec<LogLbRow>,
    pub pass: bool,
}

/// For each x on the geometric grid base^1, base^2, ..., x_max, exhibit
/// N = [u y^n v] <= x with |f(N)| > c_log * ln N. The comparison uses the
/// rational bound ln N < digits(N) * L with L >= ln base, so a reported
/// witness is certain.
pub fn log_lower_bound_check(
    rep: &LinearRepresentation,
    cert: &GrowthCertificate,
    x_max: &BigUint,
) -> Result<LogLbReport> {
    if rep.base() != cert.base() {
        return Err(Error::BaseMismatch {
            left: rep.base(),
            right: cert.base(),
        });
    }
    let base = BigUint::from(rep.base());
    let mut grid = Vec::new();
    let mut x = base.clone();
    while &x <= x_max {
        grid.push(x.clone());
        x *= &base;
    }
    if grid.last() != Some(x_max) && x_max >= &base {
        grid.push(x_max.clone());
    }
    let ln_k = ln_upper(rep.base());
    let mut rows = Vec::with_capacity(grid.len());
    for x in grid {
        let digits_of_x = Word::canonical(rep.base(), &x).len();
        let mut witness = None;
        'combos: for (pi, u) in cert.prefixes.iter().enumerate() {
            for (si, v) in cert.suffixes.iter().enumerate() {
                // longest pump count that can fit below x
                let slack = digits_of_x.saturating_sub(u.len() + v.len());
                let n_hi = (slack / cert.pump.len() + 1) as u64;
                for n in (1..=n_hi).rev() {
                    let word = Word::pumped(u, &cert.pump, n as usize, v)?;
                    let value = word.value();
                    if value > x || value.is_zero() {
                        continue;
                    }
                    let f_abs = rep.evaluate_word(&word)?.abs();
                    let digits = Word::canonical(rep.base(), &value).len();
                    let threshold = cert.c_log()
                        * BigRational::from_integer(BigInt::from(digits as u64))
                        * &ln_k;
                    if BigRational::from_integer(f_abs.clone()) > threshold {
                        witness = Some(LogLbWitness {
                            n,
                            prefix_index: pi,
                            suffix_index: si,
                            value,
                            f_abs,
                            threshold,
                        });
                        break 'combos;
                    }
                }
            }
        }
        rows.push(LogLbRow { x, witness });
    }
    let pass = !rows.is_empty() && rows.iter().all(|row| row.witness.is_some());
    Ok(LogLbReport { rows, pass })
}

/// Approximate c0 as f64 for displays only.
pub fn rational_to_f64(r: &BigRational) -> f64 {
    r.numer()
        .to_f64()
        .and_then(|n| r.denom().to_f64().map(|d| n / d))
        .unwrap_or(f64::NAN)
}

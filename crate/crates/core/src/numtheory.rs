//! Builders for the concrete sequences used throughout the crate, and the
//! machinery around completely multiplicative automatic functions: value
//! streams, the congruence check, the prime-power base criterion, partial
//! sum (discrepancy) scans, and the alternating-numeral identity.

use crate::error::{Error, Result};
use crate::linrep::LinearRepresentation;
use serde::{Deserialize, Serialize};
use std::fmt;

// ---------------------------------------------------------------------------
// Builtin linear representations
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Builtin {
    /// Parity of ones in the binary expansion (values 0/1).
    ThueMorse,
    /// Sum of the base-k digits.
    DigitSum(u32),
    /// Indicator of n = k^j - 1 (all digits equal k-1; includes n = 0).
    PowerIndicator(u32),
    /// Pointwise product of the digit sum and the power indicator; the
    /// sharpness example that vanishes off n = k^j - 1.
    ProductSharpness(u32),
    /// The completely multiplicative sign sequence driven by the quadratic
    /// character mod 3, with value +1 at 3 and 0 at 0.
    Lambda3,
    /// Number of ones in the ternary expansion.
    OnesCountTernary,
}

pub fn builtin(which: Builtin) -> Result<LinearRepresentation> {
    match which {
        Builtin::ThueMorse => Ok(LinearRepresentation::from_i64(
            2,
            &[&[&[1, 0], &[0, 1]], &[&[0, 1], &[1, 0]]],
            &[0, 1],
            &[1, 0],
        )?
        .with_name("thue-morse")),
        Builtin::DigitSum(k) => {
            if k < 2 {
                return Err(Error::InvalidBase(k));
            }
            let matrices: Vec<Vec<Vec<i64>>> = (0..k)
                .map(|i| vec![vec![1, 0], vec![i as i64, 1]])
                .collect();
            let borrowed: Vec<Vec<&[i64]>> = matrices
                .iter()
                .map(|m| m.iter().map(|r| r.as_slice()).collect())
                .collect();
            let slices: Vec<&[&[i64]]> = borrowed.iter().map(|m| m.as_slice()).collect();
            Ok(
                LinearRepresentation::from_i64(k, &slices, &[0, 1], &[1, 0])?
                    .with_name(format!("digit-sum({k})")),
            )
        }
        Builtin::PowerIndicator(k) => {
            if k < 2 {
                return Err(Error::InvalidBase(k));
            }
            // states (indicator, delta at 0)
            let mut matrices: Vec<Vec<Vec<i64>>> =
                vec![vec![vec![0, 0], vec![0, 0]]; k as usize];
            matrices[0] = vec![vec![0, 0], vec![1, 1]];
            matrices[(k - 1) as usize] = vec![vec![1, 0], vec![0, 0]];
            let borrowed: Vec<Vec<&[i64]>> = matrices
                .iter()
                .map(|m| m.iter().map(|r| r.as_slice()).collect())
                .collect();
            let slices: Vec<&[&[i64]]> = borrowed.iter().map(|m| m.as_slice()).collect();
            Ok(
                LinearRepresentation::from_i64(k, &slices, &[1, 1], &[1, 0])?
                    .with_name(format!("power-indicator({k})")),
            )
        }
        Builtin::ProductSharpness(k) => {
            let product = builtin(Builtin::DigitSum(k))?
                .pointwise_product(&builtin(Builtin::PowerIndicator(k))?)?;
            Ok(product.with_name(format!("uk({k})")))
        }
        Builtin::Lambda3 => Ok(LinearRepresentation::from_i64(
            3,
            &[
                &[&[1, 0], &[0, 1]],
                &[&[0, 0], &[1, 1]],
                &[&[0, 0], &[-1, 1]],
            ],
            &[0, 1],
            &[1, 0],
        )?
        .with_name("lambda3")),
        Builtin::OnesCountTernary => Ok(LinearRepresentation::from_i64(
            3,
            &[
                &[&[1, 0], &[0, 1]],
                &[&[1, 0], &[1, 1]],
                &[&[1, 0], &[0, 1]],
            ],
            &[0, 1],
            &[1, 0],
        )?
        .with_name("ones-count-ternary")),
    }
}

/// Resolve a CLI-facing name. The base parameter is required exactly for
/// the families parameterized by k.
pub fn builtin_by_name(name: &str, base: Option<u32>) -> Result<LinearRepresentation> {
    let need_base = |name: &str| {
        base.ok_or_else(|| {
            Error::InvalidParameter(format!("builtin `{name}` requires --base"))
        })
    };
    match name {
        "thue-morse" => builtin(Builtin::ThueMorse),
        "digit-sum" => builtin(Builtin::DigitSum(need_base(name)?)),
        "power-indicator" => builtin(Builtin::PowerIndicator(need_base(name)?)),
        "uk" => builtin(Builtin::ProductSharpness(need_base(name)?)),
        "lambda3" => builtin(Builtin::Lambda3),
        "ones-count-ternary" => builtin(Builtin::OnesCountTernary),
        other => Err(Error::UnknownBuiltin(other.to_string())),
    }
}

pub const BUILTIN_NAMES: &[&str] = &[
    "thue-morse",
    "digit-sum",
    "power-indicator",
    "uk",
    "lambda3",
    "ones-count-ternary",
];

// ---------------------------------------------------------------------------
// Completely multiplicative sign sequences
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CharacterKind {
    Trivial,
    Quadratic,
}

/// A nonvanishing, completely multiplicative, k-automatic sign sequence:
/// base k = q^m for a prime q, values determined by a real character mod q
/// together with the free sign at q. Values are stored mod q regardless
/// of m.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawSpec")]
pub struct MultiplicativeSpec {
    q: u64,
    m: u32,
    character: CharacterKind,
    f_at_q: i8,
}

#[derive(Deserialize)]
struct RawSpec {
    q: u64,
    m: u32,
    character: CharacterKind,
    f_at_q: i8,
}

impl TryFrom<RawSpec> for MultiplicativeSpec {
    type Error = Error;
    fn try_from(raw: RawSpec) -> Result<Self> {
        MultiplicativeSpec::new(raw.q, raw.m, raw.character, raw.f_at_q)
    }
}

impl MultiplicativeSpec {
    pub fn new(q: u64, m: u32, character: CharacterKind, f_at_q: i8) -> Result<Self> {
        if !is_prime(q) {
            return Err(Error::InvalidParameter(format!("q = {q} is not prime")));
        }
        if q == 2 && character == CharacterKind::Quadratic {
            return Err(Error::InvalidParameter(
                "the quadratic character needs an odd prime".into(),
            ));
        }
        if m < 1 {
            return Err(Error::InvalidParameter("m must be at least 1".into()));
        }
        if f_at_q != 1 && f_at_q != -1 {
            return Err(Error::InvalidParameter(
                "f_at_q must be 1 or -1".into(),
            ));
        }
        Ok(MultiplicativeSpec {
            q,
            m,
            character,
            f_at_q,
        })
    }

    /// The sequence matching the lambda3 builtin on n >= 1.
    pub fn lambda3() -> Self {
        Self::new(3, 1, CharacterKind::Quadratic, 1).expect("valid")
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn character(&self) -> CharacterKind {
        self.character
    }

    pub fn f_at_q(&self) -> i8 {
        self.f_at_q
    }

    /// k = q^m.
    pub fn base(&self) -> Result<u64> {
        self.q.checked_pow(self.m).ok_or_else(|| {
            Error::InvalidParameter(format!("q^m = {}^{} overflows", self.q, self.m))
        })
    }

    /// Table-backed evaluator for hot loops.
    pub fn evaluator(&self) -> SignEvaluator {
        let q = self.q as usize;
        let mut chi = vec![0i8; q];
        match self.character {
            CharacterKind::Trivial => {
                for entry in chi.iter_mut().skip(1) {
                    *entry = 1;
                }
            }
            CharacterKind::Quadratic => {
                for entry in chi.iter_mut().skip(1) {
                    *entry = -1;
                }
                // nonzero squares mod q are exactly the residues
                for u in 1..q {
                    chi[u * u % q] = 1;
                }
            }
        }
        SignEvaluator {
            q: self.q,
            f_at_q: self.f_at_q,
            chi,
        }
    }

    pub fn value(&self, n: u64) -> i8 {
        self.evaluator().value(n)
    }
}

impl fmt::Display for MultiplicativeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.character {
            CharacterKind::Trivial => "trivial",
            CharacterKind::Quadratic => "quadratic",
        };
        write!(
            f,
            "q={} m={} character={} f(q)={:+}",
            self.q, self.m, kind, self.f_at_q
        )
    }
}

/// Evaluates f(n) in constant memory beyond the mod-q character table:
/// the q-part is stripped and the character is read off the residue.
pub struct SignEvaluator {
    q: u64,
    f_at_q: i8,
    chi: Vec<i8>,
}

impl SignEvaluator {
    pub fn value(&self, n: u64) -> i8 {
        debug_assert!(n >= 1, "multiplicative values start at n = 1");
        let mut n = n;
        let mut sign = 1i8;
        while n.is_multiple_of(self.q) {
            n /= self.q;
            sign *= self.f_at_q;
        }
        sign * self.chi[(n % self.q) as usize]
    }

    /// Stream of f(1), ..., f(x).
    pub fn values(&self, x: u64) -> impl Iterator<Item = i8> + '_ {
        (1..=x).map(|n| self.value(n))
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut p = 3u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            return false;
        }
        p += 2;
    }
    true
}

// ---------------------------------------------------------------------------
// Prime-power base criterion
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseFactorization {
    pub k: u64,
    /// (prime, exponent) pairs with primes strictly increasing.
    pub factors: Vec<(u64, u32)>,
}

impl BaseFactorization {
    /// Exactly one prime factor: the necessary condition for a
    /// nonvanishing completely multiplicative automatic sequence in
    /// base k.
    pub fn is_prime_power(&self) -> bool {
        self.factors.len() == 1
    }
}

impl fmt::Display for BaseFactorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|(p, e)| {
                if *e == 1 {
                    p.to_string()
                } else {
                    format!("{p}^{e}")
                }
            })
            .collect();
        write!(f, "{} = {}", self.k, parts.join(" * "))
    }
}

pub fn prime_power_check(k: u64) -> Result<BaseFactorization> {
    if k < 2 {
        return Err(Error::InvalidParameter(format!(
            "base {k} must be at least 2"
        )));
    }
    let mut n = k;
    let mut factors = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            factors.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        factors.push((n, 1));
    }
    Ok(BaseFactorization { k, factors })
}

// ---------------------------------------------------------------------------
// Congruence check for nonvanishing multiplicative automatic sequences
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct Refutation {
    pub r: u64,
    pub level: u32,
    pub n1: u64,
    pub n2: u64,
    pub f_n1: i8,
    pub f_n2: i8,
}

#[derive(Clone, Debug)]
pub struct SpCheckReport {
    pub r_max: u64,
    pub n_max: u64,
    pub l_max: u32,
    /// Least r with no violation on the tested ranges, if any. A returned
    /// r certifies non-refutation on the range, not a proof.
    pub result: Option<u64>,
    /// One counterexample per refuted r below the result.
    pub refutations: Vec<Refutation>,
}

/// Bounded search for the least r such that, whenever
/// gcd(n1, k^(l+1)) divides k^l and n1 = n2 (mod k^(r+l)), the sequence
/// values at n1 and n2 agree, over n1, n2 <= n_max and l <= l_max.
pub fn schlage_puchta_check(
    spec: &MultiplicativeSpec,
    k: u64,
    r_max: u64,
    n_max: u64,
    l_max: u32,
) -> Result<SpCheckReport> {
    if k < 2 {
        return Err(Error::InvalidParameter(format!(
            "base {k} must be at least 2"
        )));
    }
    let evaluator = spec.evaluator();
    let values: Vec<i8> = std::iter::once(0)
        .chain((1..=n_max).map(|n| evaluator.value(n)))
        .collect();
    let mut refutations = Vec::new();
    'next_r: for r in 0..=r_max {
        for level in 0..=l_max {
            let Some(violation) = violation_for(&values, k, r, level, n_max)? else {
                continue;
            };
            refutations.push(violation);
            continue 'next_r;
        }
        return Ok(SpCheckReport {
            r_max,
            n_max,
            l_max,
            result: Some(r),
            refutations,
        });
    }
    Ok(SpCheckReport {
        r_max,
        n_max,
        l_max,
        result: None,
        refutations,
    })
}

fn checked_pow_u128(base: u64, exp: u32) -> Result<u128> {
    (base as u128).checked_pow(exp).ok_or_else(|| {
        Error::InvalidParameter(format!("{base}^{exp} overflows the search bounds"))
    })
}

/// One residue-class pass for fixed (r, l). A class can only witness a
/// violation if it contains a qualifying n1 and two distinct values.
fn violation_for(
    values: &[i8],
    k: u64,
    r: u64,
    level: u32,
    n_max: u64,
) -> Result<Option<Refutation>> {
    let exponent = u32::try_from(r + level as u64).map_err(|_| {
        Error::InvalidParameter(format!("congruence exponent {r} + {level} is too large"))
    })?;
    let modulus = checked_pow_u128(k, exponent)?;
    if modulus > n_max as u128 {
        // distinct n1, n2 <= n_max can no longer be congruent
        return Ok(None);
    }
    let modulus = modulus as u64;
    let k_level = checked_pow_u128(k, level)?;
    let k_level_next = checked_pow_u128(k, level + 1)?;

    #[derive(Clone, Copy)]
    struct ClassState {
        first: u64,
        mismatch: u64,
        qualifying: u64,
    }
    let empty = ClassState {
        first: 0,
        mismatch: 0,
        qualifying: 0,
    };
    let mut classes = vec![empty; modulus as usize];
    for n in 1..=n_max {
        let class = &mut classes[(n % modulus) as usize];
        if class.first == 0 {
            class.first = n;
        } else if class.mismatch == 0 && values[n as usize] != values[class.first as usize]
        {
            class.mismatch = n;
        }
        if class.qualifying == 0 {
            let g = gcd_u128(n as u128, k_level_next);
            if k_level % g == 0 {
                class.qualifying = n;
            }
        }
    }
    for class in &classes {
        if class.qualifying == 0 || class.mismatch == 0 {
            continue;
        }
        let n1 = class.qualifying;
        // first class member whose value differs from f(n1)
        let n2 = if values[class.first as usize] != values[n1 as usize] {
            class.first
        } else {
            class.mismatch
        };
        return Ok(Some(Refutation {
            r,
            level,
            n1,
            n2,
            f_n1: values[n1 as usize],
            f_n2: values[n2 as usize],
        }));
    }
    Ok(None)
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

// ---------------------------------------------------------------------------
// Partial-sum (discrepancy) scan
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct GridRow {
    pub n: u64,
    pub g: i64,
    pub run_max: i64,
}

#[derive(Clone, Debug)]
pub struct DiscrepancyReport {
    pub x_max: u64,
    pub grid: Vec<GridRow>,
    pub max_abs_g: i64,
    /// min over grid points n >= 2 of run_max(n) / ln n; display only.
    pub empirical_c: f64,
    /// For quadratic characters: |G(n)| <= q * (1 + log_q n) for every
    /// n <= x_max, verified through the integer bound q * digits_q(n).
    pub quadratic_bound_ok: Option<bool>,
    pub quadratic_bound_violation: Option<u64>,
}

impl DiscrepancyReport {
    /// Header row plus one line per grid point, LF endings. logN is a
    /// display column; everything that gates a verdict stays integral.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("N,G,runmax,logN\n");
        for row in &self.grid {
            out.push_str(&format!(
                "{},{},{},{:.6}\n",
                row.n,
                row.g,
                row.run_max,
                (row.n as f64).ln()
            ));
        }
        out
    }
}

/// Stream G(n) = f(1) + ... + f(n), track the running maximum of |G|, and
/// sample at the geometric grid of powers of q (plus x_max itself).
pub fn discrepancy_scan(spec: &MultiplicativeSpec, x_max: u64) -> Result<DiscrepancyReport> {
    if x_max < 2 {
        return Err(Error::InvalidParameter("x_max must be at least 2".into()));
    }
    let evaluator = spec.evaluator();
    let q = spec.q();
    let quadratic = spec.character() == CharacterKind::Quadratic;
    let mut g = 0i64;
    let mut run_max = 0i64;
    let mut grid = Vec::new();
    let mut next_grid = q;
    let mut digit_threshold = q; // smallest value needing one more digit
    let mut digits = 1u64;
    let mut bound_violation = None;
    for n in 1..=x_max {
        g += evaluator.value(n) as i64;
        run_max = run_max.max(g.abs());
        if n == digit_threshold {
            digits += 1;
            digit_threshold = digit_threshold.saturating_mul(q);
        }
        if quadratic && bound_violation.is_none() && g.abs() > (q * digits) as i64 {
            bound_violation = Some(n);
        }
        if n == next_grid || n == x_max {
            grid.push(GridRow { n, g, run_max });
            if n == next_grid {
                next_grid = next_grid.saturating_mul(q);
            }
        }
    }
    let empirical_c = grid
        .iter()
        .filter(|row| row.n >= 2)
        .map(|row| row.run_max as f64 / (row.n as f64).ln())
        .fold(f64::INFINITY, f64::min);
    Ok(DiscrepancyReport {
        x_max,
        grid,
        max_abs_g: run_max,
        empirical_c,
        quadratic_bound_ok: quadratic.then_some(bound_violation.is_none()),
        quadratic_bound_violation: bound_violation,
    })
}

// ---------------------------------------------------------------------------
// Alternating-numeral identity (quadratic case)
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct RepunitRow {
    pub m: u32,
    /// Value of the base-q numeral 1010...10 with m blocks.
    pub n: u64,
    pub g: i64,
    pub expected: i64,
}

#[derive(Clone, Debug)]
pub struct RepunitReport {
    pub rows: Vec<RepunitRow>,
    pub pass: bool,
}

/// For m = 1..m_max, sum f directly up to the base-q numeral (10)^m and
/// compare against f(q) * m.
pub fn repunit_identity_check(
    spec: &MultiplicativeSpec,
    m_max: u32,
) -> Result<RepunitReport> {
    if spec.character() != CharacterKind::Quadratic {
        return Err(Error::InvalidParameter(
            "the alternating-numeral identity needs the quadratic character".into(),
        ));
    }
    if m_max < 1 {
        return Err(Error::InvalidParameter("m_max must be at least 1".into()));
    }
    let q = spec.q();
    let mut targets = Vec::with_capacity(m_max as usize);
    let mut value: u128 = 0;
    for m in 1..=m_max {
        value = value
            .checked_mul((q * q) as u128)
            .and_then(|v| v.checked_add(q as u128))
            .ok_or_else(|| {
                Error::InvalidParameter(format!("numeral for m = {m} overflows"))
            })?;
        let as_u64 = u64::try_from(value).map_err(|_| {
            Error::InvalidParameter(format!("numeral for m = {m} exceeds u64"))
        })?;
        targets.push((m, as_u64));
    }
    let evaluator = spec.evaluator();
    let mut rows = Vec::with_capacity(targets.len());
    let mut g = 0i64;
    let mut n = 0u64;
    for (m, target) in targets {
        while n < target {
            n += 1;
            g += evaluator.value(n) as i64;
        }
        rows.push(RepunitRow {
            m,
            n: target,
            g,
            expected: spec.f_at_q() as i64 * m as i64,
        });
    }
    let pass = rows.iter().all(|row| row.g == row.expected);
    Ok(RepunitReport { rows, pass })
}

// ---------------------------------------------------------------------------
// Recursion between full and q-coprime partial sums
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct GRecursionReport {
    pub x: u64,
    pub g_direct: i64,
    pub g_via_coprime_sums: i64,
    pub recursion_ok: bool,
    /// Expected step of the coprime partial sum over one period of q.
    pub periodicity_constant: i64,
    pub periodicity_ok: bool,
    pub pass: bool,
}

/// Checks G(x) = sum over i of f(q)^i * F(floor(x / q^i)), where F sums f
/// over the integers coprime to q, the series stopping once q^i exceeds x.
/// Also checks that F advances by a constant over each period of length q:
/// q - 1 for the trivial character and 0 for the quadratic one.
pub fn g_recursion_check(spec: &MultiplicativeSpec, x: u64) -> Result<GRecursionReport> {
    if x < 1 {
        return Err(Error::InvalidParameter("x must be at least 1".into()));
    }
    let evaluator = spec.evaluator();
    let q = spec.q();
    let coprime_sum = |y: u64| -> i64 {
        (1..=y)
            .filter(|n| n % q != 0)
            .map(|n| evaluator.value(n) as i64)
            .sum()
    };
    let g_direct: i64 = (1..=x).map(|n| evaluator.value(n) as i64).sum();
    let mut g_via = 0i64;
    let mut power = 1u64;
    let mut sign = 1i64;
    loop {
        g_via += sign * coprime_sum(x / power);
        match power.checked_mul(q) {
            Some(next) if next <= x => {
                power = next;
                sign *= spec.f_at_q() as i64;
            }
            _ => break,
        }
    }
    let expected_step = match spec.character() {
        CharacterKind::Trivial => (q - 1) as i64,
        CharacterKind::Quadratic => 0,
    };
    let limit = x.min(1000);
    let mut periodicity_ok = true;
    let mut f_val = 0i64;
    let mut window: Vec<i64> = Vec::with_capacity((limit + 1) as usize);
    window.push(0);
    for n in 1..=limit + q {
        if n % q != 0 {
            f_val += evaluator.value(n) as i64;
        }
        window.push(f_val);
    }
    for t in 0..=limit {
        if window[(t + q) as usize] - window[t as usize] != expected_step {
            periodicity_ok = false;
            break;
        }
    }
    let recursion_ok = g_direct == g_via;
    Ok(GRecursionReport {
        x,
        g_direct,
        g_via_coprime_sums: g_via,
        recursion_ok,
        periodicity_constant: expected_step,
        periodicity_ok,
        pass: recursion_ok && periodicity_ok,
    })
}

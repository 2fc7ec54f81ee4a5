//! Integer polynomials (constant term first) and cyclotomic polynomials.

use crate::matrix::IntMatrix;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    /// Coefficients, constant term first. Empty means the zero polynomial;
    /// otherwise the last coefficient is nonzero.
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_i64(&[1])
    }

    /// x^n - 1.
    pub fn x_pow_minus_one(n: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); n + 1];
        coeffs[0] = BigInt::from(-1);
        coeffs[n] = BigInt::one();
        IntPolynomial { coeffs }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Degree; None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| c.is_one())
    }

    /// Multiplicity of the root 0 (number of trailing zero coefficients
    /// from the constant end).
    pub fn zero_root_multiplicity(&self) -> usize {
        self.coeffs
            .iter()
            .position(|c| !c.is_zero())
            .unwrap_or(0)
    }

    /// Divide out x^a; caller guarantees a <= zero_root_multiplicity.
    pub fn shift_down(&self, a: usize) -> IntPolynomial {
        IntPolynomial::new(self.coeffs[a..].to_vec())
    }

    pub fn mul(&self, other: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || other.is_zero() {
            return IntPolynomial::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        IntPolynomial::new(out)
    }

    /// Exact division by a monic divisor. Returns None if the division
    /// leaves a remainder.
    pub fn div_exact(&self, divisor: &IntPolynomial) -> Option<IntPolynomial> {
        assert!(divisor.is_monic(), "divisor must be monic");
        let d = divisor.coeffs.len() - 1;
        if self.is_zero() {
            return Some(IntPolynomial::zero());
        }
        let n = self.coeffs.len() - 1;
        if n < d {
            return None;
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); n - d + 1];
        for i in (0..=n - d).rev() {
            let q = rem[i + d].clone();
            if q.is_zero() {
                continue;
            }
            quot[i] = q.clone();
            for j in 0..=d {
                let t = &divisor.coeffs[j] * &q;
                rem[i + j] -= t;
            }
        }
        if rem.iter().all(|c| c.is_zero()) {
            Some(IntPolynomial::new(quot))
        } else {
            None
        }
    }

    /// Evaluate at a square matrix by Horner's scheme.
    pub fn eval_matrix(&self, m: &IntMatrix) -> IntMatrix {
        assert!(m.is_square());
        let d = m.rows();
        if self.is_zero() {
            return IntMatrix::zeros(d, d);
        }
        let mut acc = scaled_identity(d, self.coeffs.last().unwrap());
        for c in self.coeffs.iter().rev().skip(1) {
            acc = acc.mul(m);
            if !c.is_zero() {
                acc = acc.add(&scaled_identity(d, c));
            }
        }
        acc
    }

    pub fn eval_bigint(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }
}

fn scaled_identity(n: usize, c: &BigInt) -> IntMatrix {
    let mut m = IntMatrix::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = c.clone();
    }
    m
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let (sign, mag) = if c.is_negative() {
                ("-", -c.clone())
            } else {
                ("+", c.clone())
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {sign} ")?;
            }
            let show_coeff = !mag.is_one() || i == 0;
            if show_coeff {
                write!(f, "{mag}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

pub fn euler_phi(n: u32) -> u32 {
    let mut n = n as u64;
    let mut result = n;
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result as u32
}

fn divisors(n: u32) -> Vec<u32> {
    let mut divs = Vec::new();
    let mut i = 1;
    while i * i <= n {
        if n.is_multiple_of(i) {
            divs.push(i);
            if i != n / i {
                divs.push(n / i);
            }
        }
        i += 1;
    }
    divs.sort_unstable();
    divs
}

/// The n-th cyclotomic polynomial, via recursive division of x^n - 1 by
/// the cyclotomic polynomials of the proper divisors of n.
pub fn cyclotomic(n: u32) -> IntPolynomial {
    assert!(n >= 1, "cyclotomic index must be positive");
    if n == 1 {
        return IntPolynomial::from_i64(&[-1, 1]);
    }
    let mut p = IntPolynomial::x_pow_minus_one(n as usize);
    for d in divisors(n) {
        if d == n {
            continue;
        }
        p = p
            .div_exact(&cyclotomic(d))
            .expect("cyclotomic division is exact");
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cyclotomics() {
        assert_eq!(cyclotomic(1), IntPolynomial::from_i64(&[-1, 1]));
        assert_eq!(cyclotomic(2), IntPolynomial::from_i64(&[1, 1]));
        assert_eq!(cyclotomic(3), IntPolynomial::from_i64(&[1, 1, 1]));
        assert_eq!(cyclotomic(4), IntPolynomial::from_i64(&[1, 0, 1]));
        assert_eq!(cyclotomic(6), IntPolynomial::from_i64(&[1, -1, 1]));
        assert_eq!(cyclotomic(12), IntPolynomial::from_i64(&[1, 0, -1, 0, 1]));
    }

    #[test]
    fn cyclotomic_product_reconstructs() {
        // prod over d | n of Phi_d = x^n - 1
        for n in [1u32, 2, 6, 12, 30] {
            let mut p = IntPolynomial::one();
            for d in divisors(n) {
                p = p.mul(&cyclotomic(d));
            }
            assert_eq!(p, IntPolynomial::x_pow_minus_one(n as usize));
        }
    }

    #[test]
    fn phi_values() {
        let expected = [1u32, 1, 2, 2, 4, 2, 6, 4, 6, 4, 10, 4];
        for (n, &phi) in (1..=12).zip(expected.iter()) {
            assert_eq!(euler_phi(n), phi);
            assert_eq!(cyclotomic(n).degree(), Some(phi as usize));
        }
    }

    #[test]
    fn exact_division() {
        let p = IntPolynomial::from_i64(&[-1, 0, 0, 0, 1]); // x^4 - 1
        let q = p.div_exact(&IntPolynomial::from_i64(&[1, 1])).unwrap();
        assert_eq!(q, IntPolynomial::from_i64(&[-1, 1, -1, 1]));
        assert!(p.div_exact(&IntPolynomial::from_i64(&[2, 1])).is_none());
    }

    #[test]
    fn display_forms() {
        assert_eq!(
            IntPolynomial::from_i64(&[-1, -1, 1]).to_string(),
            "x^2 - x - 1"
        );
        assert_eq!(IntPolynomial::from_i64(&[1, 0, 1]).to_string(), "x^2 + 1");
        assert_eq!(IntPolynomial::one().to_string(), "1");
    }

    #[test]
    fn matrix_evaluation() {
        let m = IntMatrix::from_i64_rows(&[&[1, 1], &[0, 1]]);
        // (x - 1)^2 annihilates a 2x2 unipotent Jordan block
        let p = IntPolynomial::from_i64(&[1, -2, 1]);
        assert!(p.eval_matrix(&m).is_zero());
    }
}

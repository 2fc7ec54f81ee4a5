//! Exact growth classification of a single integer matrix.
//!
//! The characteristic polynomial is computed fraction-free. Stripping the
//! root 0 and every cyclotomic factor leaves a monic integer cofactor;
//! by Kronecker's theorem a nontrivial cofactor forces a root of modulus
//! strictly greater than 1, which certifies exponential entry growth with
//! no numeric root-finding at all. If the cofactor is trivial, powers of
//! the matrix stay bounded unless some root of unity carries a Jordan
//! block of size at least 2, detected exactly by a rank drop between
//! p(M) and p(M)^2 for the corresponding cyclotomic p.

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use crate::poly::{cyclotomic, euler_phi, IntPolynomial};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Classification {
    FiniteOrder,
    LinearGrowth,
    Expanding,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Classification::FiniteOrder => write!(f, "FINITE_ORDER"),
            Classification::LinearGrowth => write!(f, "LINEAR_GROWTH"),
            Classification::Expanding => write!(f, "EXPANDING"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SpectralReport {
    pub charpoly: IntPolynomial,
    /// Multiplicity of the root 0.
    pub nilpotent_order: usize,
    /// Cyclotomic factors as (index n, multiplicity), ascending in n.
    pub cyclotomic_part: Vec<(u32, usize)>,
    /// Monic cofactor with no root at 0 and no cyclotomic factor.
    pub non_cyclotomic_part: IntPolynomial,
    pub classification: Classification,
    /// For LINEAR_GROWTH: smallest n whose cyclotomic factor is defective.
    pub defect_witness: Option<u32>,
    /// For FINITE_ORDER: verified (i, p) with M^(i+p) = M^i.
    pub finite_order_witness: Option<(u64, u64)>,
}

/// Monic characteristic polynomial det(xI - M), by the Faddeev-LeVerrier
/// recurrence. The trace divisions are exact over the integers.
pub fn char_poly(m: &IntMatrix) -> IntPolynomial {
    assert!(m.is_square(), "characteristic polynomial needs a square matrix");
    let d = m.rows();
    // coefficients of x^(d-k), k = 0..=d; c[0] = 1
    let mut coeffs_desc = Vec::with_capacity(d + 1);
    coeffs_desc.push(BigInt::from(1));
    let mut aux = IntMatrix::zeros(d, d);
    for k in 1..=d {
        let mut shifted = aux;
        let last = coeffs_desc.last().unwrap().clone();
        for i in 0..d {
            shifted[(i, i)] += &last;
        }
        aux = m.mul(&shifted);
        let c = -aux.trace() / BigInt::from(k as i64);
        coeffs_desc.push(c);
    }
    coeffs_desc.reverse();
    IntPolynomial::new(coeffs_desc)
}

/// Factor a monic polynomial as x^a * prod Phi_n^mult * remainder, by
/// exact trial division over every n with phi(n) <= deg p.
#[allow(clippy::type_complexity)]
pub fn cyclotomic_strip(
    p: &IntPolynomial,
) -> Result<(usize, Vec<(u32, usize)>, IntPolynomial)> {
    if !p.is_monic() {
        return Err(Error::NotMonic);
    }
    let a = p.zero_root_multiplicity();
    let mut rest = p.shift_down(a);
    let mut factors = Vec::new();
    let max_degree = rest.degree().unwrap_or(0);
    if max_degree == 0 {
        return Ok((a, factors, rest));
    }
    // phi(n) >= sqrt(n/2), so phi(n) <= D forces n <= 2 D^2
    let n_bound = 2 * (max_degree as u32) * (max_degree as u32) + 1;
    for n in 1..=n_bound {
        if euler_phi(n) as usize > max_degree {
            continue;
        }
        let phi_n = cyclotomic(n);
        let mut mult = 0;
        while let Some(q) = rest.div_exact(&phi_n) {
            rest = q;
            mult += 1;
        }
        if mult > 0 {
            factors.push((n, mult));
        }
        if rest.is_one() {
            break;
        }
    }
    Ok((a, factors, rest))
}

/// True iff the generalized eigenspace attached to the primitive n-th
/// roots of unity strictly exceeds the eigenspace, i.e. some Jordan block
/// there has size >= 2. Tested exactly as rank Phi_n(M) != rank Phi_n(M)^2.
pub fn is_defective(m: &IntMatrix, n: u32) -> Result<bool> {
    let p = char_poly(m);
    let phi_n = cyclotomic(n);
    if p.div_exact(&phi_n).is_none() {
        return Err(Error::NotACyclotomicFactor(n));
    }
    let image = phi_n.eval_matrix(m);
    Ok(image.rank() != image.mul(&image).rank())
}

/// Full classification of one square integer matrix.
pub fn classify(m: &IntMatrix) -> SpectralReport {
    let charpoly = char_poly(m);
    let (nilpotent_order, cyclotomic_part, non_cyclotomic_part) =
        cyclotomic_strip(&charpoly).expect("characteristic polynomial is monic");
    if !non_cyclotomic_part.is_one() {
        return SpectralReport {
            charpoly,
            nilpotent_order,
            cyclotomic_part,
            non_cyclotomic_part,
            classification: Classification::Expanding,
            defect_witness: None,
            finite_order_witness: None,
        };
    }
    let defect_witness = cyclotomic_part.iter().find_map(|&(n, _)| {
        match is_defective_with(m, n) {
            true => Some(n),
            false => None,
        }
    });
    if let Some(n) = defect_witness {
        return SpectralReport {
            charpoly,
            nilpotent_order,
            cyclotomic_part,
            non_cyclotomic_part,
            classification: Classification::LinearGrowth,
            defect_witness: Some(n),
            finite_order_witness: None,
        };
    }
    // Finite order: the nilpotent part dies after at most `nilpotent_order`
    // steps and the semisimple root-of-unity part has period lcm of the
    // cyclotomic indices. Verify the witness outright.
    let index = (nilpotent_order as u64).max(1);
    let period = cyclotomic_part
        .iter()
        .fold(1u64, |acc, &(n, _)| acc.lcm(&(n as u64)));
    let witness = {
        let lo = m.pow(index);
        let hi = m.pow(index + period);
        assert_eq!(lo, hi, "finite-order witness failed to verify");
        Some((index, period))
    };
    SpectralReport {
        charpoly,
        nilpotent_order,
        cyclotomic_part,
        non_cyclotomic_part,
        classification: Classification::FiniteOrder,
        defect_witness: None,
        finite_order_witness: witness,
    }
}

fn is_defective_with(m: &IntMatrix, n: u32) -> bool {
    let phi_n = cyclotomic(n);
    let image = phi_n.eval_matrix(m);
    image.rank() != image.mul(&image).rank()
}

impl SpectralReport {
    pub fn is_finite_order(&self) -> bool {
        self.classification == Classification::FiniteOrder
    }

    /// Reassemble x^a * prod Phi_n^mult * remainder; used by tests.
    pub fn reassembled(&self) -> IntPolynomial {
        let mut p = self.non_cyclotomic_part.clone();
        for &(n, mult) in &self.cyclotomic_part {
            let phi = cyclotomic(n);
            for _ in 0..mult {
                p = p.mul(&phi);
            }
        }
        let mut shifted = vec![BigInt::zero(); self.nilpotent_order];
        shifted.extend_from_slice(p.coeffs());
        IntPolynomial::new(shifted)
    }
}

impl fmt::Display for SpectralReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "characteristic polynomial: {}", self.charpoly)?;
        writeln!(f, "multiplicity of root 0: {}", self.nilpotent_order)?;
        if self.cyclotomic_part.is_empty() {
            writeln!(f, "cyclotomic factors: none")?;
        } else {
            let parts: Vec<String> = self
                .cyclotomic_part
                .iter()
                .map(|(n, mult)| {
                    if *mult == 1 {
                        format!("Phi_{n}")
                    } else {
                        format!("Phi_{n}^{mult}")
                    }
                })
                .collect();
            writeln!(f, "cyclotomic factors: {}", parts.join(" * "))?;
        }
        writeln!(f, "non-cyclotomic cofactor: {}", self.non_cyclotomic_part)?;
        write!(f, "classification: {}", self.classification)?;
        if let Some(n) = self.defect_witness {
            write!(f, " (defective cyclotomic factor at n = {n})")?;
        }
        if let Some((i, p)) = self.finite_order_witness {
            write!(f, " (M^{} = M^{})", i + p, i)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m2(a: i64, b: i64, c: i64, d: i64) -> IntMatrix {
        IntMatrix::from_i64_rows(&[&[a, b], &[c, d]])
    }

    #[test]
    fn char_poly_examples() {
        assert_eq!(
            char_poly(&m2(1, 1, 0, 1)),
            IntPolynomial::from_i64(&[1, -2, 1])
        );
        assert_eq!(
            char_poly(&m2(0, 1, 1, 1)),
            IntPolynomial::from_i64(&[-1, -1, 1])
        );
        assert_eq!(
            char_poly(&m2(0, -1, 1, 0)),
            IntPolynomial::from_i64(&[1, 0, 1])
        );
    }

    #[test]
    fn cayley_hamilton() {
        let cases: Vec<IntMatrix> = vec![
            m2(0, 1, 1, 1),
            m2(3, -2, 5, 7),
            IntMatrix::from_i64_rows(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 10]]),
            IntMatrix::from_i64_rows(&[
                &[0, 1, 0, 0],
                &[0, 0, 1, 0],
                &[0, 0, 0, 1],
                &[-1, 3, 0, 2],
            ]),
            IntMatrix::from_i64_rows(&[
                &[2, -1, 0, 0, 1],
                &[0, 3, 1, 0, 0],
                &[1, 0, -2, 1, 0],
                &[0, 1, 0, 4, -1],
                &[1, 1, 1, 1, 1],
            ]),
            IntMatrix::from_i64_rows(&[
                &[1, 0, 2, 0, 0, -1],
                &[0, 2, 0, 1, 0, 0],
                &[3, 0, 1, 0, 1, 0],
                &[0, -1, 0, 1, 0, 2],
                &[0, 0, 1, 0, 2, 0],
                &[1, 0, 0, 2, 0, 1],
            ]),
        ];
        for m in cases {
            let p = char_poly(&m);
            assert!(p.eval_matrix(&m).is_zero(), "{p} at its own matrix");
        }
    }

    #[test]
    fn strip_examples() {
        let p = IntPolynomial::from_i64(&[-1, 0, 0, 0, 1]); // x^4 - 1
        let (a, factors, rest) = cyclotomic_strip(&p).unwrap();
        assert_eq!(a, 0);
        assert_eq!(factors, vec![(1, 1), (2, 1), (4, 1)]);
        assert!(rest.is_one());

        let p = IntPolynomial::from_i64(&[-1, -1, 1]); // x^2 - x - 1
        let (a, factors, rest) = cyclotomic_strip(&p).unwrap();
        assert_eq!(a, 0);
        assert!(factors.is_empty());
        assert_eq!(rest, p);

        let p = IntPolynomial::from_i64(&[0, 1, -2, 1]); // x(x-1)^2
        let (a, factors, rest) = cyclotomic_strip(&p).unwrap();
        assert_eq!(a, 1);
        assert_eq!(factors, vec![(1, 2)]);
        assert!(rest.is_one());

        assert!(cyclotomic_strip(&IntPolynomial::from_i64(&[1, 2])).is_err());
    }

    #[test]
    fn strip_reassembly() {
        let polys = [
            char_poly(&m2(1, 1, 0, 1)),
            char_poly(&m2(0, 1, 1, 1)),
            char_poly(&IntMatrix::from_i64_rows(&[
                &[0, 1, 0],
                &[0, 0, 1],
                &[6, -11, 6],
            ])),
            IntPolynomial::from_i64(&[0, 0, -1, 0, 0, 0, 1]),
        ];
        for p in polys {
            let report_like = cyclotomic_strip(&p).unwrap();
            let mut q = report_like.2.clone();
            for (n, mult) in &report_like.1 {
                for _ in 0..*mult {
                    q = q.mul(&cyclotomic(*n));
                }
            }
            let mut coeffs = vec![BigInt::zero(); report_like.0];
            coeffs.extend_from_slice(q.coeffs());
            assert_eq!(IntPolynomial::new(coeffs), p);
        }
    }

    #[test]
    fn defect_examples() {
        assert!(is_defective(&m2(1, 1, 0, 1), 1).unwrap());
        assert!(!is_defective(&IntMatrix::identity(2), 1).unwrap());
        // J2(1) (+) rotation by 90 degrees
        let block = IntMatrix::from_i64_rows(&[
            &[1, 1, 0, 0],
            &[0, 1, 0, 0],
            &[0, 0, 0, -1],
            &[0, 0, 1, 0],
        ]);
        assert!(!is_defective(&block, 4).unwrap());
        assert!(is_defective(&block, 1).unwrap());
        // asking about an absent factor is an error
        assert!(is_defective(&m2(1, 1, 0, 1), 3).is_err());
    }

    #[test]
    fn classify_examples() {
        let rot = classify(&m2(0, -1, 1, 0));
        assert_eq!(rot.classification, Classification::FiniteOrder);
        let (i, p) = rot.finite_order_witness.unwrap();
        assert_eq!(m2(0, -1, 1, 0).pow(i + p), m2(0, -1, 1, 0).pow(i));

        let shear = classify(&m2(1, 1, 0, 1));
        assert_eq!(shear.classification, Classification::LinearGrowth);
        assert_eq!(shear.defect_witness, Some(1));
        // the off-diagonal entry of the n-th power is n
        assert_eq!(m2(1, 1, 0, 1).pow(17)[(0, 1)], BigInt::from(17));

        let fib = classify(&m2(0, 1, 1, 1));
        assert_eq!(fib.classification, Classification::Expanding);
        // entry growth oracle: the 20th power dwarfs any linear bound
        assert!(m2(0, 1, 1, 1).pow(20).max_abs_entry() > BigInt::from(4000));
    }

    #[test]
    fn classify_one_by_one() {
        for c in -3i64..=3 {
            let m = IntMatrix::from_i64_rows(&[&[c]]);
            let report = classify(&m);
            if (-1..=1).contains(&c) {
                assert_eq!(report.classification, Classification::FiniteOrder);
            } else {
                assert_eq!(report.classification, Classification::Expanding);
            }
        }
    }

    #[test]
    fn repeated_semisimple_cyclotomic_factor_is_finite() {
        // two rotation blocks: Phi_4^2 but diagonalizable
        let m = IntMatrix::from_i64_rows(&[
            &[0, -1, 0, 0],
            &[1, 0, 0, 0],
            &[0, 0, 0, -1],
            &[0, 0, 1, 0],
        ]);
        let report = classify(&m);
        assert_eq!(report.classification, Classification::FiniteOrder);
        assert_eq!(report.cyclotomic_part, vec![(4, 2)]);
    }
}

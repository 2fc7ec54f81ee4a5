//! Finite digit strings over the alphabet {0, ..., k-1}, most significant
//! digit first. A word denotes the number obtained by reading it as a
//! base-k numeral; leading zeros and the empty word (value 0) are allowed.

use crate::error::{Error, Result};
use num_bigint::BigUint;
use num_traits::Zero;
use std::fmt;

const DIGIT_CHARS: &[u8; 36] = b"0123456789abcdefghijklmnopqrstuvwxyz";

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Word {
    base: u32,
    digits: Vec<u32>,
}

impl Word {
    pub fn new(base: u32, digits: Vec<u32>) -> Result<Self> {
        if base < 2 {
            return Err(Error::InvalidBase(base));
        }
        for &d in &digits {
            if d >= base {
                return Err(Error::InvalidDigit { digit: d, base });
            }
        }
        Ok(Word { base, digits })
    }

    pub fn empty(base: u32) -> Self {
        Word {
            base,
            digits: Vec::new(),
        }
    }

    /// The base-k expansion of `n` without leading zeros (empty for n = 0).
    pub fn canonical(base: u32, n: &BigUint) -> Self {
        let mut digits: Vec<u32>;
        if base <= 256 {
            digits = n.to_radix_le(base).into_iter().map(|d| d as u32).collect();
            if n.is_zero() {
                digits.clear();
            }
        } else {
            // to_radix_le only covers radices up to 256
            digits = Vec::new();
            let big_base = BigUint::from(base);
            let mut rest = n.clone();
            while !rest.is_zero() {
                let digit = &rest % &big_base;
                digits.push(digit.to_u32_digits().first().copied().unwrap_or(0));
                rest /= &big_base;
            }
        }
        digits.reverse();
        Word { base, digits }
    }

    pub fn canonical_u64(base: u32, n: u64) -> Self {
        Self::canonical(base, &BigUint::from(n))
    }

    /// Exactly `len` digits, padding with leading zeros. Fails if `n` needs
    /// more than `len` digits.
    pub fn padded(base: u32, n: &BigUint, len: usize) -> Result<Self> {
        let canonical = Self::canonical(base, n);
        if canonical.len() > len {
            return Err(Error::InvalidParameter(format!(
                "{n} does not fit in {len} base-{base} digits"
            )));
        }
        let mut digits = vec![0u32; len - canonical.len()];
        digits.extend_from_slice(&canonical.digits);
        Ok(Word { base, digits })
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    /// Numeric value of the word read as a base-k numeral.
    pub fn value(&self) -> BigUint {
        let mut v = BigUint::zero();
        let base = BigUint::from(self.base);
        for &d in &self.digits {
            v = v * &base + BigUint::from(d);
        }
        v
    }

    pub fn strip_leading_zeros(&self) -> Word {
        let first = self.digits.iter().position(|&d| d != 0);
        match first {
            Some(i) => Word {
                base: self.base,
                digits: self.digits[i..].to_vec(),
            },
            None => Word::empty(self.base),
        }
    }

    /// Concatenation `self ++ other` (bases must agree).
    pub fn concat(&self, other: &Word) -> Result<Word> {
        if self.base != other.base {
            return Err(Error::BaseMismatch {
                left: self.base,
                right: other.base,
            });
        }
        let mut digits = self.digits.clone();
        digits.extend_from_slice(&other.digits);
        Ok(Word {
            base: self.base,
            digits,
        })
    }

    /// The word `prefix pump^n suffix`.
    pub fn pumped(prefix: &Word, pump: &Word, n: usize, suffix: &Word) -> Result<Word> {
        let mut digits =
            Vec::with_capacity(prefix.len() + n * pump.len() + suffix.len());
        if prefix.base != pump.base || pump.base != suffix.base {
            return Err(Error::BaseMismatch {
                left: prefix.base,
                right: if prefix.base != pump.base {
                    pump.base
                } else {
                    suffix.base
                },
            });
        }
        digits.extend_from_slice(&prefix.digits);
        for _ in 0..n {
            digits.extend_from_slice(&pump.digits);
        }
        digits.extend_from_slice(&suffix.digits);
        Ok(Word {
            base: prefix.base,
            digits,
        })
    }

    /// Parse a digit string using '0'-'9' then 'a'-'z' (bases up to 36).
    /// The empty string denotes the empty word.
    pub fn parse(s: &str, base: u32) -> Result<Self> {
        if base < 2 {
            return Err(Error::InvalidBase(base));
        }
        if base > 36 {
            return Err(Error::InvalidParameter(format!(
                "digit strings support bases up to 36, got {base}"
            )));
        }
        let mut digits = Vec::with_capacity(s.len());
        for c in s.chars() {
            let d = match c {
                '0'..='9' => c as u32 - '0' as u32,
                'a'..='z' => c as u32 - 'a' as u32 + 10,
                _ => {
                    return Err(Error::InvalidParameter(format!(
                        "invalid digit character {c:?}"
                    )))
                }
            };
            if d >= base {
                return Err(Error::InvalidDigit { digit: d, base });
            }
            digits.push(d);
        }
        Ok(Word { base, digits })
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.base <= 36 {
            for &d in &self.digits {
                write!(f, "{}", DIGIT_CHARS[d as usize] as char)?;
            }
            Ok(())
        } else {
            let strings: Vec<String> =
                self.digits.iter().map(|d| d.to_string()).collect();
            write!(f, "[{}]", strings.join(","))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digit_round_trip() {
        // canonical(n) has no leading zero and values round-trip
        for base in [2u32, 3, 10] {
            for n in 0u64..1 << 16 {
                let w = Word::canonical_u64(base, n);
                assert_eq!(w.value(), BigUint::from(n));
                if n > 0 {
                    assert_ne!(w.digits()[0], 0);
                } else {
                    assert!(w.is_empty());
                }
            }
        }
    }

    #[test]
    fn empty_word_has_value_zero() {
        assert_eq!(Word::empty(2).value(), BigUint::zero());
    }

    #[test]
    fn leading_zeros_keep_value() {
        let w = Word::parse("00111", 2).unwrap();
        assert_eq!(w.value(), BigUint::from(7u32));
        assert_eq!(w.strip_leading_zeros(), Word::parse("111", 2).unwrap());
    }

    #[test]
    fn parse_rejects_bad_digits() {
        assert!(Word::parse("012", 2).is_err());
        assert!(Word::parse("0x1", 2).is_err());
    }

    #[test]
    fn padded_expansion() {
        let w = Word::padded(2, &BigUint::from(3u32), 5).unwrap();
        assert_eq!(w.to_string(), "00011");
        assert!(Word::padded(2, &BigUint::from(9u32), 3).is_err());
    }

    #[test]
    fn display_uses_digit_chars() {
        let w = Word::new(36, vec![10, 35, 0]).unwrap();
        assert_eq!(w.to_string(), "az0");
    }

    #[test]
    fn canonical_beyond_byte_radix() {
        // bases above 256 take the division fallback
        let n = BigUint::from(1_234_567u64);
        let w = Word::canonical(1000, &n);
        assert_eq!(w.digits(), &[1, 234, 567]);
        assert_eq!(w.value(), n);
        assert!(Word::canonical(1000, &BigUint::zero()).is_empty());
    }
}

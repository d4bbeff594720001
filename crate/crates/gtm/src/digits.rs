//! Base-q digit strings and digit sums.
//!
//! The constructive embedding manufactures start positions and differences far
//! beyond machine-word range by splicing digit strings together, so conversion
//! in both directions is exact and big-integer backed.

use std::fmt;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::base::{PrimeBase, Symbol};
use crate::error::{Error, Result};

/// The base-q expansion `S_q(x)` of a non-negative integer, most significant
/// digit first. Never empty; no leading zero except for the expansion of 0.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DigitString {
    base: PrimeBase,
    digits: Vec<u8>,
}

impl DigitString {
    /// Validates digit range and the leading-zero rule.
    pub fn new(base: PrimeBase, digits: Vec<u8>) -> Result<Self> {
        if digits.is_empty() || (digits.len() > 1 && digits[0] == 0) {
            return Err(Error::InvalidDigitString);
        }
        if let Some(&bad) = digits.iter().find(|&&d| d >= base.value()) {
            return Err(Error::SymbolOutOfRange {
                value: u64::from(bad),
                q: base.value(),
            });
        }
        Ok(DigitString { base, digits })
    }

    #[inline]
    pub fn base(&self) -> PrimeBase {
        self.base
    }

    /// Number of digits `|S_q(x)|`; this is `⌊log_q x⌋ + 1` for x ≥ 1.
    #[inline]
    pub fn len(&self) -> usize {
        self.digits.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false // the invariant keeps at least one digit
    }

    /// Digits most significant first, each `< q`.
    #[inline]
    pub fn digits(&self) -> &[u8] {
        &self.digits
    }

    pub fn iter(&self) -> impl Iterator<Item = Symbol> + '_ {
        self.digits.iter().map(|&d| Symbol::from_reduced(d))
    }
}

impl fmt::Display for DigitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.base.value() <= 10 {
            for &d in &self.digits {
                write!(f, "{d}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.digits.iter().map(|d| d.to_string()).collect();
            write!(f, "{}", parts.join(","))
        }
    }
}

impl fmt::Debug for DigitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DigitString(q={}, \"{}\")", self.base, self)
    }
}

/// `S_q(x)` for a big integer.
pub fn base_q_expansion(x: &BigUint, base: PrimeBase) -> DigitString {
    let digits = if x.is_zero() {
        vec![0]
    } else {
        x.to_radix_be(u32::from(base.value()))
    };
    DigitString { base, digits }
}

/// `S_q(x)` for a machine integer.
pub fn base_q_expansion_u64(x: u64, base: PrimeBase) -> DigitString {
    base_q_expansion(&BigUint::from(x), base)
}

/// Reassembles the integer with expansion `d`. Inverse of [`base_q_expansion`].
pub fn from_digits(d: &DigitString) -> BigUint {
    BigUint::from_radix_be(&d.digits, u32::from(d.base.value()))
        .expect("DigitString invariant guarantees digits < q")
}

/// `s_q(x) mod q`: the base-q digit sum of x, reduced into the alphabet.
#[inline]
pub fn digit_sum(x: u64, base: PrimeBase) -> Symbol {
    digit_sum_u128(u128::from(x), base)
}

pub(crate) fn digit_sum_u128(mut x: u128, base: PrimeBase) -> Symbol {
    let q = u128::from(base.value());
    let mut sum: u128 = 0;
    while x > 0 {
        sum += x % q;
        x /= q;
    }
    Symbol::from_reduced((sum % q) as u8)
}

/// `s_q(x) mod q` for a big integer.
pub fn digit_sum_big(x: &BigUint, base: PrimeBase) -> Symbol {
    let q = u32::from(base.value());
    if x.is_zero() {
        return Symbol::from_reduced(0);
    }
    let sum: u64 = x.to_radix_be(q).iter().map(|&d| u64::from(d)).sum();
    Symbol::from_reduced(base.reduce(sum))
}

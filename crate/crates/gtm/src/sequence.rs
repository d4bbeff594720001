//! The generalized Thue-Morse word `ω_q` and arithmetic slices of it.
//!
//! For a prime q, the i-th symbol of `ω_q` is the base-q digit sum of i
//! reduced mod q. `ω_2` is the classical Thue-Morse word `0110100110010110…`;
//! `ω_3` starts `012120201120201012201012120…`.
//!
//! Symbols are always computed on the fly from the index, so positions near
//! `q^100` cost no more than positions near 0. [`GtmSequence::prefix`] and the
//! crate-internal window fill materialize an initial segment when a search
//! needs to scan densely; they are conveniences layered on the same
//! definition, not an alternative source of truth.

use num_bigint::BigUint;

use crate::base::{PrimeBase, Symbol, Word};
use crate::digits::{digit_sum_big, digit_sum_u128};
use crate::error::{Error, Result};

/// The infinite word `ω_q`. Copyable handle; all state is the base.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub struct GtmSequence {
    base: PrimeBase,
}

impl GtmSequence {
    pub fn new(base: PrimeBase) -> Self {
        GtmSequence { base }
    }

    #[inline]
    pub fn base(&self) -> PrimeBase {
        self.base
    }

    /// `ω_q[i] = s_q(i) mod q`.
    #[inline]
    pub fn symbol_at(&self, i: u64) -> Symbol {
        digit_sum_u128(u128::from(i), self.base)
    }

    #[inline]
    pub(crate) fn symbol_at_u128(&self, i: u128) -> Symbol {
        digit_sum_u128(i, self.base)
    }

    /// `ω_q[i]` for indices beyond machine range.
    pub fn symbol_at_big(&self, i: &BigUint) -> Symbol {
        digit_sum_big(i, self.base)
    }

    /// The arithmetic slice `ω_q[c] ω_q[c+d] … ω_q[c+(len-1)d]`.
    pub fn arithmetic_slice(&self, c: u64, d: u64, len: usize) -> Result<Word> {
        if d == 0 {
            return Err(Error::ZeroDifference);
        }
        let symbols = (0..len as u128)
            .map(|i| {
                self.symbol_at_u128(u128::from(c) + i * u128::from(d))
                    .value()
            })
            .collect();
        Ok(Word::from_reduced(self.base, symbols))
    }

    /// [`GtmSequence::arithmetic_slice`] with big-integer start and difference.
    pub fn arithmetic_slice_big(&self, c: &BigUint, d: &BigUint, len: usize) -> Result<Word> {
        use num_traits::Zero;
        if d.is_zero() {
            return Err(Error::ZeroDifference);
        }
        let mut idx = c.clone();
        let mut symbols = Vec::with_capacity(len);
        for _ in 0..len {
            symbols.push(self.symbol_at_big(&idx).value());
            idx += d;
        }
        Ok(Word::from_reduced(self.base, symbols))
    }

    /// The prefix `ω_q[0..len]` as a word.
    pub fn prefix(&self, len: usize) -> Word {
        Word::from_reduced(self.base, self.fill_window(len))
    }

    /// Materializes `ω_q[0..len]` as raw digits. Linear time: the self-similar
    /// identity `ω[q·k + j] = ω[k] + j (mod q)` fills each entry from an
    /// earlier one.
    pub(crate) fn fill_window(&self, len: usize) -> Vec<u8> {
        let mut window = vec![0u8; len];
        self.extend_window(&mut window, 0);
        window
    }

    /// Fills `window[filled..]` assuming `window[..filled]` already holds the
    /// prefix. `extend_window(&mut w, 0)` fills from scratch.
    pub(crate) fn extend_window(&self, window: &mut [u8], filled: usize) {
        let q = self.base.value();
        let q_us = q as usize;
        let start = if filled == 0 {
            if window.is_empty() {
                return;
            }
            window[0] = 0;
            1
        } else {
            filled
        };
        for i in start..window.len() {
            // i / q < i, so the source entry is already filled.
            let v = window[i / q_us] + (i % q_us) as u8;
            window[i] = if v >= q { v - q } else { v };
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn seq(q: u64) -> GtmSequence {
        GtmSequence::new(PrimeBase::new(q).unwrap())
    }

    /// Independent generator: iterate the substitution
    /// `a ↦ a (a+1) … (a+q-1) (mod q)` starting from 0. `ω_q` is its fixed
    /// point, which gives a second route to the same symbols.
    fn morphism_prefix(q: u8, steps: u32) -> Vec<u8> {
        let mut word = vec![0u8];
        for _ in 0..steps {
            word = word
                .iter()
                .flat_map(|&a| (0..q).map(move |j| (a + j) % q))
                .collect();
        }
        word
    }

    #[test]
    fn ternary_prefix_matches_known_value() {
        let s = seq(3);
        assert_eq!(s.prefix(27).to_string(), "012120201120201012201012120");
    }

    #[test]
    fn binary_prefix_is_thue_morse() {
        let s = seq(2);
        assert_eq!(s.prefix(16).to_string(), "0110100110010110");
    }

    #[test]
    fn prefix_agrees_with_symbol_at() {
        for q in [2u64, 3, 5, 7] {
            let s = seq(q);
            let prefix = s.prefix(10_000);
            for (i, sym) in prefix.iter().enumerate() {
                assert_eq!(sym, s.symbol_at(i as u64), "q={q}, i={i}");
            }
        }
    }

    #[test]
    fn extend_window_matches_fresh_fill() {
        let s = seq(3);
        let full = s.fill_window(5000);
        let mut grown = s.fill_window(700);
        grown.resize(5000, 0);
        s.extend_window(&mut grown, 700);
        assert_eq!(grown, full);
    }

    #[test]
    fn morphism_fixed_point() {
        // Prefix of length q^(k+1) is the image of the prefix of length q^k.
        for q in [2u8, 3, 5] {
            let s = seq(u64::from(q));
            for k in 0..=5u32 {
                let len = (q as usize).pow(k + 1);
                let expected = morphism_prefix(q, k + 1);
                assert_eq!(expected.len(), len);
                assert_eq!(s.prefix(len).digits(), &expected[..], "q={q}, k={k}");
            }
        }
    }

    #[test]
    fn self_similarity_exhaustive() {
        // ω[q·i + j] = ω[i] + j (mod q) for all i < 10^5.
        for q in [2u64, 3, 5, 7] {
            let s = seq(q);
            for i in 0..100_000u64 {
                let w_i = s.symbol_at(i).value();
                for j in 0..q {
                    let expected = ((u64::from(w_i) + j) % q) as u8;
                    assert_eq!(
                        s.symbol_at(q * i + j).value(),
                        expected,
                        "q={q}, i={i}, j={j}"
                    );
                }
            }
        }
    }

    #[test]
    fn block_shift_random_triples() {
        // ω[z·q^t + r] = s_q(z) + ω[r] (mod q) whenever r < q^t.
        let mut rng = StdRng::seed_from_u64(0x5eed_b10c);
        for q in [2u64, 3, 5, 7] {
            let s = seq(q);
            let b = s.base();
            for _ in 0..2_000 {
                let t = rng.random_range(1..=12u32);
                let qt = q.pow(t);
                let r = rng.random_range(0..qt);
                let z = rng.random_range(0..1_000_000u64);
                let lhs = s.symbol_at(z * qt + r).value();
                let rhs = b.reduce(
                    u64::from(crate::digits::digit_sum(z, b).value())
                        + u64::from(s.symbol_at(r).value()),
                );
                assert_eq!(lhs, rhs, "q={q}, z={z}, t={t}, r={r}");
            }
        }
    }

    #[test]
    fn slice_examples() {
        let s2 = seq(2);
        assert_eq!(s2.arithmetic_slice(0, 1, 4).unwrap().to_string(), "0110");
        // c=6, d=3 lands on ω_2 positions 6, 9, 12: all zero.
        assert_eq!(s2.arithmetic_slice(6, 3, 3).unwrap().to_string(), "000");
        let s3 = seq(3);
        assert_eq!(s3.arithmetic_slice(0, 1, 3).unwrap().to_string(), "012");
        assert_eq!(s3.arithmetic_slice(2, 13, 4).unwrap().len(), 4);
        assert!(matches!(
            s2.arithmetic_slice(0, 0, 3),
            Err(Error::ZeroDifference)
        ));
        assert_eq!(s2.arithmetic_slice(5, 7, 0).unwrap().len(), 0);
    }

    #[test]
    fn big_slice_agrees_with_small_slice() {
        let s3 = seq(3);
        let small = s3.arithmetic_slice(1000, 26, 10).unwrap();
        let big = s3
            .arithmetic_slice_big(&BigUint::from(1000u32), &BigUint::from(26u32), 10)
            .unwrap();
        assert_eq!(small, big);
        assert!(s3
            .arithmetic_slice_big(&BigUint::from(5u32), &BigUint::ZERO, 2)
            .is_err());
    }

    #[test]
    fn symbol_at_big_beyond_machine_range() {
        let s5 = seq(5);
        // 5^100 has a single nonzero digit, so its digit sum is 1.
        let idx = BigUint::from(5u32).pow(100);
        assert_eq!(s5.symbol_at_big(&idx).value(), 1);
        assert_eq!(s5.symbol_at_big(&(idx - 1u32)).value(), 0); // 100 digits of 4
    }
}

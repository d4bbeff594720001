//! Prime alphabets, symbols and finite words.
//!
//! Everything downstream works over the cyclic alphabet
//! `Σ_q = {0, 1, ..., q-1}` with q prime, so symbol arithmetic is arithmetic
//! in the field `Z/qZ`. Words are stored as raw digit vectors; the alphabet
//! travels with the word so mixed-base mistakes surface as errors instead of
//! silent nonsense.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Maximum supported alphabet size. Digits are stored as `u8` and every
/// planned experiment uses q well below this.
pub const MAX_BASE: u64 = 251;

/// A prime alphabet size q.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PrimeBase(u8);

impl PrimeBase {
    /// Validates primality by trial division.
    pub fn new(q: u64) -> Result<Self> {
        if q > MAX_BASE {
            return Err(Error::BaseTooLarge { q, max: MAX_BASE });
        }
        if q < 2 || !is_prime(q) {
            return Err(Error::NotPrime { q });
        }
        Ok(PrimeBase(q as u8))
    }

    #[inline]
    pub fn value(self) -> u8 {
        self.0
    }

    #[inline]
    pub fn as_u64(self) -> u64 {
        u64::from(self.0)
    }

    /// `q^exp`, or an overflow error.
    pub fn pow(self, exp: u32) -> Result<u64> {
        self.as_u64().checked_pow(exp).ok_or(Error::Overflow {
            what: "prime power",
        })
    }

    /// Reduces an arbitrary residue into `Σ_q`.
    #[inline]
    pub(crate) fn reduce(self, value: u64) -> u8 {
        (value % self.as_u64()) as u8
    }
}

impl fmt::Debug for PrimeBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PrimeBase({})", self.0)
    }
}

impl fmt::Display for PrimeBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn is_prime(n: u64) -> bool {
    if n < 4 {
        return n > 1;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// One letter of `Σ_q`.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(u8);

impl Symbol {
    pub fn new(value: u64, base: PrimeBase) -> Result<Self> {
        if value >= base.as_u64() {
            return Err(Error::SymbolOutOfRange {
                value,
                q: base.value(),
            });
        }
        Ok(Symbol(value as u8))
    }

    /// Internal constructor for values already known to be reduced.
    #[inline]
    pub(crate) fn from_reduced(value: u8) -> Self {
        Symbol(value)
    }

    #[inline]
    pub fn value(self) -> u8 {
        self.0
    }
}

impl Serialize for Symbol {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_u8(self.0)
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A finite word over `Σ_q`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word {
    base: PrimeBase,
    symbols: Vec<u8>,
}

impl Word {
    /// Builds a word from raw digit values, validating each against the base.
    pub fn new(base: PrimeBase, symbols: Vec<u8>) -> Result<Self> {
        if let Some(&bad) = symbols.iter().find(|&&s| s >= base.value()) {
            return Err(Error::SymbolOutOfRange {
                value: u64::from(bad),
                q: base.value(),
            });
        }
        Ok(Word { base, symbols })
    }

    /// Internal constructor for digits already known to be reduced.
    #[inline]
    pub(crate) fn from_reduced(base: PrimeBase, symbols: Vec<u8>) -> Self {
        debug_assert!(symbols.iter().all(|&s| s < base.value()));
        Word { base, symbols }
    }

    /// The empty word.
    pub fn empty(base: PrimeBase) -> Self {
        Word {
            base,
            symbols: Vec::new(),
        }
    }

    /// The constant word `symbol^len`.
    pub fn constant(base: PrimeBase, symbol: Symbol, len: usize) -> Self {
        Word {
            base,
            symbols: vec![symbol.value(); len],
        }
    }

    /// Parses either a contiguous digit string (`"0121"`, bases up to 10) or a
    /// comma-separated list of digit values (`"0,1,2,1"`, any base).
    pub fn parse(base: PrimeBase, input: &str) -> Result<Self> {
        let err = || Error::WordParse {
            input: input.to_owned(),
            q: base.value(),
        };
        let symbols: Vec<u64> = if input.contains(',') {
            input
                .split(',')
                .map(|part| part.trim().parse::<u64>().map_err(|_| err()))
                .collect::<Result<_>>()?
        } else {
            input
                .trim()
                .chars()
                .map(|ch| ch.to_digit(10).map(u64::from).ok_or_else(err))
                .collect::<Result<_>>()?
        };
        let symbols = symbols
            .into_iter()
            .map(|value| Symbol::new(value, base).map(Symbol::value))
            .collect::<Result<Vec<u8>>>()?;
        Ok(Word { base, symbols })
    }

    #[inline]
    pub fn base(&self) -> PrimeBase {
        self.base
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Raw digit values; every entry is `< q`.
    #[inline]
    pub fn digits(&self) -> &[u8] {
        &self.symbols
    }

    pub fn symbol(&self, i: usize) -> Symbol {
        Symbol(self.symbols[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = Symbol> + '_ {
        self.symbols.iter().map(|&s| Symbol(s))
    }

    /// True when all symbols are equal (vacuously true for the empty word).
    pub fn is_constant(&self) -> bool {
        self.symbols.windows(2).all(|w| w[0] == w[1])
    }

    /// The word `u ⊕ a` obtained by adding `a` to every symbol mod q.
    pub fn shifted(&self, a: Symbol) -> Word {
        let q = self.base.value();
        let symbols = self
            .symbols
            .iter()
            .map(|&s| {
                let v = s + a.value();
                if v >= q {
                    v - q
                } else {
                    v
                }
            })
            .collect();
        Word {
            base: self.base,
            symbols,
        }
    }

    /// Rank of the word in the lexicographic enumeration of `Σ_q^len`.
    pub fn lex_rank(&self) -> u64 {
        self.symbols
            .iter()
            .fold(0u64, |acc, &s| acc * self.base.as_u64() + u64::from(s))
    }

    /// Inverse of [`Word::lex_rank`] for a given length.
    pub fn from_lex_rank(base: PrimeBase, len: usize, mut rank: u64) -> Word {
        let q = base.as_u64();
        let mut symbols = vec![0u8; len];
        for slot in symbols.iter_mut().rev() {
            *slot = (rank % q) as u8;
            rank /= q;
        }
        debug_assert_eq!(rank, 0, "rank out of range for Σ_q^len");
        Word { base, symbols }
    }
}

impl Serialize for Word {
    /// Words serialize as their display string, which `parse` round-trips.
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl fmt::Display for Word {
    /// Contiguous digits for bases up to 10, comma-separated values above.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.base.value() <= 10 {
            for &s in &self.symbols {
                write!(f, "{s}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.symbols.iter().map(|s| s.to_string()).collect();
            write!(f, "{}", parts.join(","))
        }
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word(q={}, \"{}\")", self.base, self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base(q: u64) -> PrimeBase {
        PrimeBase::new(q).expect("prime base")
    }

    #[test]
    fn accepts_small_primes_rejects_composites() {
        for q in [2u64, 3, 5, 7, 11, 97, 251] {
            assert!(PrimeBase::new(q).is_ok(), "q={q} should be accepted");
        }
        for q in [0u64, 1, 4, 6, 9, 100] {
            assert!(
                matches!(PrimeBase::new(q), Err(Error::NotPrime { .. })),
                "q={q} should be rejected"
            );
        }
        assert!(matches!(
            PrimeBase::new(257),
            Err(Error::BaseTooLarge { .. })
        ));
    }

    #[test]
    fn symbol_range_is_enforced() {
        let b3 = base(3);
        assert_eq!(Symbol::new(2, b3).unwrap().value(), 2);
        assert!(matches!(
            Symbol::new(3, b3),
            Err(Error::SymbolOutOfRange { .. })
        ));
        assert!(Word::new(b3, vec![0, 1, 3]).is_err());
    }

    #[test]
    fn parses_contiguous_and_comma_forms() {
        let b3 = base(3);
        let w = Word::parse(b3, "0121").unwrap();
        assert_eq!(w.digits(), &[0, 1, 2, 1]);
        let w = Word::parse(b3, "0,1,2,1").unwrap();
        assert_eq!(w.digits(), &[0, 1, 2, 1]);
        assert!(Word::parse(b3, "013").is_err(), "3 is not in Σ_3");
        assert!(Word::parse(b3, "0x1").is_err());
        assert_eq!(Word::parse(b3, "").unwrap().len(), 0);
    }

    #[test]
    fn display_round_trips() {
        let b7 = base(7);
        let w = Word::new(b7, vec![6, 0, 5]).unwrap();
        assert_eq!(w.to_string(), "605");
        let parsed = Word::parse(b7, &w.to_string()).unwrap();
        assert_eq!(parsed, w);
    }

    #[test]
    fn shift_wraps_mod_q() {
        let b3 = base(3);
        let w = Word::parse(b3, "012").unwrap();
        assert_eq!(w.shifted(Symbol::new(1, b3).unwrap()).to_string(), "120");
        assert_eq!(w.shifted(Symbol::new(2, b3).unwrap()).to_string(), "201");
        assert_eq!(w.shifted(Symbol::new(0, b3).unwrap()), w);
    }

    #[test]
    fn lex_rank_round_trips() {
        let b3 = base(3);
        for rank in 0..81 {
            let w = Word::from_lex_rank(b3, 4, rank);
            assert_eq!(w.lex_rank(), rank);
        }
        assert_eq!(Word::parse(b3, "0000").unwrap().lex_rank(), 0);
        assert_eq!(Word::parse(b3, "2222").unwrap().lex_rank(), 80);
    }
}

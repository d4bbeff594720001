//! Arithmetic progressions and the arithmetic index in generalized
//! Thue-Morse words.
//!
//! For a prime q, the word `ω_q` assigns to every index its base-q digit sum
//! mod q. This crate answers, exactly and with verifiable witnesses, the
//! questions one asks about arithmetic subsequences of `ω_q`:
//!
//! * Does a word `u` occur along some progression `c, c+d, …` for a fixed
//!   difference d? ([`search::occurs_with_difference`], a complete decision
//!   procedure, cross-checked by the brute-force
//!   [`search::occurs_prefix_oracle`].)
//! * How long can a constant progression ("run") with difference d get, and
//!   where is the longest one? ([`search::max_run_length`],
//!   [`constructive::exact_max_run`], [`constructive::extended_run_witness`].)
//! * What is the least difference realizing `u`, and how many base-q digits
//!   does it take to write it down — the arithmetic index of `u`?
//!   ([`search::min_difference`], [`search::max_index_for_length`].)
//! * Can we *construct* an occurrence of any `u` without searching?
//!   ([`constructive::construct_embedding`] builds `(c_u, d_u)` from a
//!   triangular basis of slices and proves the digit-length upper bound that
//!   [`constructive::upper_bound_index`] states; the matching counting lower
//!   bound is [`constructive::lower_bound_index`].)
//!
//! The [`experiments`] module packages these into reproducible reports with
//! CSV/JSON export and an optional verified result cache.
//!
//! All arithmetic is exact: machine integers at search scale, big integers
//! (digit strings) for constructed witnesses, no floating point anywhere.

pub mod base;
pub mod constructive;
pub mod digits;
pub mod error;
pub mod experiments;
pub mod search;
pub mod sequence;

pub use base::{PrimeBase, Symbol, Word};
pub use digits::{
    base_q_expansion, base_q_expansion_u64, digit_sum, digit_sum_big, from_digits, DigitString,
};
pub use error::{Error, Result};
pub use sequence::GtmSequence;

//! Property tests for the algebraic identities the whole crate leans on.
//! Each property is phrased against the public API, with randomized inputs
//! driving both the fast paths and the decision procedures.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use proptest::prelude::*;

use gtm::search::{min_difference, occurs_with_difference};
use gtm::{base_q_expansion_u64, constructive, digit_sum, from_digits};
use gtm::{GtmSequence, PrimeBase, Symbol, Word};

fn primes() -> impl Strategy<Value = u64> {
    prop_oneof![Just(2u64), Just(3), Just(5), Just(7)]
}

proptest! {
    /// w_{q·i + j} = w_i + j (mod q): each index inherits its symbol from the
    /// previous scale, shifted by its last digit.
    #[test]
    fn self_similarity(q in primes(), i in 0u64..1_000_000, j in 0u64..6) {
        prop_assume!(j < q);
        let seq = GtmSequence::new(PrimeBase::new(q).unwrap());
        let lifted = seq.symbol_at(q * i + j).value();
        let expected = (u64::from(seq.symbol_at(i).value()) + j) % q;
        prop_assert_eq!(u64::from(lifted), expected);
    }

    /// w_{z·q^t + r} = s_q(z) + w_r for r < q^t: a block prefix repeats under
    /// the digit-sum shift of its block number.
    #[test]
    fn block_shift(q in primes(), z in 0u64..1_000_000, t in 1u32..10, r in 0u64..1_000_000) {
        let base = PrimeBase::new(q).unwrap();
        let qt = q.pow(t);
        let r = r % qt;
        let seq = GtmSequence::new(base);
        let got = seq.symbol_at(z * qt + r).value();
        let expected =
            (u64::from(digit_sum(z, base).value()) + u64::from(seq.symbol_at(r).value())) % q;
        prop_assert_eq!(u64::from(got), expected);
    }

    /// Base-q expansion round-trips through from_digits.
    #[test]
    fn digit_round_trip(q in primes(), x in 0u64..u64::MAX) {
        let base = PrimeBase::new(q).unwrap();
        let digits = base_q_expansion_u64(x, base);
        prop_assert_eq!(from_digits(&digits), BigUint::from(x));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Shift closure: u occurs with difference d exactly when every constant
    /// shift u ⊕ a does.
    #[test]
    fn shift_closure(q in primes(), rank in 0u64..2401, len in 1usize..4, d in 1u64..12, a in 1u64..7) {
        prop_assume!(a < q);
        let base = PrimeBase::new(q).unwrap();
        let seq = GtmSequence::new(base);
        let u = Word::from_lex_rank(base, len, rank % q.pow(len as u32));
        let shifted = u.shifted(Symbol::new(a, base).unwrap());
        let direct = occurs_with_difference(&seq, &u, d).unwrap().is_some();
        let translated = occurs_with_difference(&seq, &shifted, d).unwrap().is_some();
        prop_assert_eq!(direct, translated);
    }

    /// Residue identity: scaling the difference by q changes witnesses but
    /// not which words occur.
    #[test]
    fn residue_identity(q in primes(), rank in 0u64..2401, len in 1usize..4, d in 1u64..12) {
        let base = PrimeBase::new(q).unwrap();
        let seq = GtmSequence::new(base);
        let u = Word::from_lex_rank(base, len, rank % q.pow(len as u32));
        let with_d = occurs_with_difference(&seq, &u, d).unwrap().is_some();
        let with_qd = occurs_with_difference(&seq, &u, q * d).unwrap().is_some();
        prop_assert_eq!(with_d, with_qd);
    }

    /// The minimal difference is never divisible by q, and its reported
    /// occurrence really evaluates back to the word.
    #[test]
    fn minimal_difference_shape(q in prop_oneof![Just(2u64), Just(3)], rank in 0u64..243, len in 1usize..5) {
        let base = PrimeBase::new(q).unwrap();
        let seq = GtmSequence::new(base);
        let u = Word::from_lex_rank(base, len, rank % q.pow(len as u32));
        let report = min_difference(&seq, &u).unwrap();
        prop_assert!(!report.d_min.is_multiple_of(q));
        let slice = seq.arithmetic_slice(report.occurrence.c, report.occurrence.d, len).unwrap();
        prop_assert_eq!(slice, u);
    }

    /// Every constructed embedding evaluates back to its word, stays within
    /// the digit-length bound, and (at oracle-checkable sizes) dominates the
    /// true minimal difference.
    #[test]
    fn embeddings_verify_and_respect_bounds(q in prop_oneof![Just(2u64), Just(3), Just(5)], rank in 0u64..3125, len in 1usize..6) {
        let base = PrimeBase::new(q).unwrap();
        let seq = GtmSequence::new(base);
        let u = Word::from_lex_rank(base, len, rank % q.pow(len as u32));
        let e = constructive::construct_embedding(&seq, &u).unwrap();
        let slice = seq.arithmetic_slice_big(&e.c_u, &e.d_u, len).unwrap();
        prop_assert_eq!(&slice, &u);
        let bound = constructive::upper_bound_index(base, len as u64).unwrap();
        prop_assert!(e.realized_index() <= bound);
        if q <= 3 && len <= 4 {
            let d_min = BigUint::from(min_difference(&seq, &u).unwrap().d_min);
            prop_assert!(d_min <= e.d_u, "a minimal difference cannot exceed a constructed one");
        }
    }
}

/// The three run-family witnesses agree with a straight sweep: the difference
/// q^n − 1 really attains the sweep maximum (exhaustive at toy scale).
#[test]
fn sweep_maximum_is_attained_at_predicted_difference() {
    for (q, n) in [(2u64, 1u32), (2, 2), (2, 3), (2, 4), (3, 1), (3, 2), (5, 1)] {
        let base = PrimeBase::new(q).unwrap();
        let seq = GtmSequence::new(base);
        let qn = q.pow(n);
        let mut best = 0;
        for d in 1..qn {
            best = best.max(gtm::search::max_run_length(&seq, d).unwrap().length);
        }
        assert_eq!(
            best,
            constructive::exact_max_run(base, n).unwrap(),
            "q={q} n={n}"
        );
        assert_eq!(
            gtm::search::max_run_length(&seq, qn - 1).unwrap().length,
            best,
            "q={q} n={n}: q^n − 1 must attain the maximum"
        );
    }
}

/// Seeding a table search with verified entries cannot change its output.
#[test]
fn seeded_table_equals_unseeded() {
    let base = PrimeBase::new(2).unwrap();
    let seq = GtmSequence::new(base);
    let cold = gtm::search::min_difference_table(&seq, 4, &BTreeMap::new()).unwrap();
    let seed: BTreeMap<Word, (u64, u64)> = cold
        .entries()
        .iter()
        .map(|e| (e.word.clone(), (e.d_min, e.occurrence.c)))
        .collect();
    let warm = gtm::search::min_difference_table(&seq, 4, &seed).unwrap();
    assert_eq!(cold.entries(), warm.entries());
}

//! Deciding occurrence of words along arithmetic progressions of `ω_q`.
//!
//! The workhorse is [`occurs_with_difference`], a *complete* decision
//! procedure for "does `u` occur with difference d somewhere in `ω_q`?". It
//! never scans the infinite word. Instead it exploits the block structure of
//! digit sums: pick the least t with `q^t ≥ |u|·d` and let `Q = q^{2t}`. Any
//! start position decomposes as `c = z·Q + r` with `r < Q`, and since the
//! progression spans less than `q^t` indices it meets at most one multiple of
//! Q. Writing `a = s_q(z)` and `δ = s_q(z+1) - s_q(z)`,
//!
//! * positions below the boundary read `a + ω_q[r + i·d]`,
//! * positions at or above it read `a + δ + ω_q[r + i·d - Q]`,
//!
//! so each residue `r` admits at most one viable `(a, δ)` pair, checkable
//! against the materialized window `ω_q[0..Q)`. Every `(a, δ)` is realized by
//! infinitely many z, and the least one has a closed form, which turns a
//! verdict back into a concrete witness start. The reported occurrence is the
//! one with the smallest start position overall.
//!
//! [`occurs_prefix_oracle`] is the independent brute-force check: scan start
//! positions in a prefix directly. The two must always agree; the test suite
//! enforces this exhaustively at small sizes.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use serde::Serialize;

use crate::base::{PrimeBase, Word};
use crate::constructive;
use crate::digits::base_q_expansion_u64;
use crate::error::{Error, Result};
use crate::sequence::GtmSequence;

/// Hard ceiling on materialized symbol windows (bytes). `q^{2t}` windows grow
/// quadratically in `|u|·d`, so this bounds the feasible search scale.
pub const MAX_WINDOW_LEN: u64 = 1 << 28;

/// A witnessed occurrence: `ω_q[c + i·d] = u[i]` for all i.
#[derive(Copy, Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Occurrence {
    pub c: u64,
    pub d: u64,
}

/// The longest constant progression with a fixed difference.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct RunReport {
    pub d: u64,
    pub length: u64,
    pub witness_c: u64,
}

/// Minimal difference realizing a word, with the witness and the arithmetic
/// index `|S_q(d_min)|`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct IndexReport {
    pub word: Word,
    pub d_min: u64,
    pub occurrence: Occurrence,
    pub index: u32,
}

/// Maximal arithmetic index over all words of one length, with every word
/// attaining it.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct MaxIndexRow {
    pub n: u32,
    pub max_index: u32,
    /// Words of length n with index == max_index, lexicographically sorted.
    pub extremal: Vec<IndexReport>,
}

/// Minimal differences for *every* word of a fixed length, in lexicographic
/// order. Produced in one family of window scans instead of `q^n` separate
/// searches; entries are identical to per-word [`min_difference`] results.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DifferenceTable {
    base: PrimeBase,
    word_len: usize,
    entries: Vec<IndexReport>,
}

impl DifferenceTable {
    #[inline]
    pub fn base(&self) -> PrimeBase {
        self.base
    }

    #[inline]
    pub fn word_len(&self) -> usize {
        self.word_len
    }

    /// All entries, lexicographic in the word.
    #[inline]
    pub fn entries(&self) -> &[IndexReport] {
        &self.entries
    }

    pub fn get(&self, word: &Word) -> Option<&IndexReport> {
        if word.len() != self.word_len || word.base() != self.base {
            return None;
        }
        self.entries.get(word.lex_rank() as usize)
    }

    pub fn max_index(&self) -> u32 {
        self.entries.iter().map(|e| e.index).max().unwrap_or(0)
    }

    pub fn into_max_index_row(self, n: u32) -> MaxIndexRow {
        let max_index = self.max_index();
        let extremal = self
            .entries
            .into_iter()
            .filter(|e| e.index == max_index)
            .collect();
        MaxIndexRow {
            n,
            max_index,
            extremal,
        }
    }
}

#[inline]
fn add_mod(x: u8, a: u8, q: u8) -> u8 {
    let v = x + a;
    if v >= q {
        v - q
    } else {
        v
    }
}

/// The shift `a` with `sym + a ≡ target (mod q)`.
#[inline]
fn shift_needed(q: u8, target: u8, sym: u8) -> u8 {
    add_mod(target, q - sym, q)
}

/// Window parameters: least `t ≥ 1` with `q^t ≥ product`, and `Q = q^{2t}`.
fn two_scale(base: PrimeBase, product: u128) -> Result<(u32, u64)> {
    let q = u128::from(base.value());
    let mut t = 1u32;
    let mut qt = q;
    while qt < product {
        t += 1;
        qt = qt.checked_mul(q).ok_or(Error::WindowTooLarge {
            needed: u128::MAX,
            limit: MAX_WINDOW_LEN,
        })?;
    }
    let big_q = qt.checked_mul(qt).ok_or(Error::WindowTooLarge {
        needed: u128::MAX,
        limit: MAX_WINDOW_LEN,
    })?;
    if big_q > u128::from(MAX_WINDOW_LEN) {
        return Err(Error::WindowTooLarge {
            needed: big_q,
            limit: MAX_WINDOW_LEN,
        });
    }
    Ok((t, big_q as u64))
}

/// Least z ≥ 0 with `s_q(z) ≡ a` and `s_q(z+1) - s_q(z) ≡ δ (mod q)`.
///
/// Incrementing z turns a maximal tail of `k` trailing digits q-1 into zeros
/// and bumps the next digit, so the jump is `k+1 mod q`. The least witness
/// therefore has exactly `k' = δ-1 mod q` trailing digits q-1 preceded by a
/// digit g ≠ q-1 chosen to fix the digit sum: z = (g+1)·q^{k'} - 1, with the
/// fallback prefix 1·(q-2) when the required g would be q-1 itself. Returns
/// `None` if the value overflows u128 (enormous q only).
fn min_z_realizing(base: PrimeBase, a: u8, delta: u8) -> Option<u128> {
    let q = base.value();
    let k = (delta + q - 1) % q;
    let g = (a + k) % q;
    let qk = u128::from(q).checked_pow(u32::from(k))?;
    let factor = if g <= q - 2 {
        u128::from(g) + 1
    } else {
        2 * u128::from(q) - 1
    };
    factor.checked_mul(qk).map(|v| v - 1)
}

/// Scans one window for every start `c = z·Q + r` of an occurrence of `u`
/// with difference d, and returns the smallest constructible witness start.
/// `overflow` reports that some residue matched but its least witness exceeds
/// u128; those candidates are never minimal when any representable one exists.
fn scan_window(
    base: PrimeBase,
    u: &[u8],
    d: u64,
    window: &[u8],
    big_q: u64,
) -> (Option<u128>, bool) {
    let q = base.value();
    let m = u.len() as u64;
    let span = (m - 1) * d;
    debug_assert!(span < big_q);
    debug_assert!(window.len() as u64 >= big_q);
    let mut best: Option<u128> = None;
    let mut overflow = false;
    let mut consider = |cand: Option<u128>| match cand {
        Some(c) if best.is_none() || c < best.unwrap() => best = Some(c),
        Some(_) => {}
        None => overflow = true,
    };

    // Non-crossing starts: the whole progression sits inside one Q-block, so
    // a single shift a = s_q(z) explains it; the least such z is a itself.
    let non_crossing_end = big_q - span;
    for r in 0..non_crossing_end {
        let a = shift_needed(q, u[0], window[r as usize]);
        let mut idx = r;
        let mut ok = true;
        for &target in &u[1..] {
            idx += d;
            if add_mod(window[idx as usize], a, q) != target {
                ok = false;
                break;
            }
        }
        if ok {
            consider(Some(u128::from(a) * u128::from(big_q) + u128::from(r)));
        }
    }

    // Boundary-crossing starts: positions past the block boundary pick up the
    // extra jump δ; the first wrapped position determines it.
    'residues: for r in non_crossing_end..big_q {
        let a = shift_needed(q, u[0], window[r as usize]);
        let mut delta: Option<u8> = None;
        let mut idx = r;
        for &target in &u[1..] {
            idx += d;
            let sym = if idx < big_q {
                add_mod(window[idx as usize], a, q)
            } else {
                let below = add_mod(window[(idx - big_q) as usize], a, q);
                match delta {
                    Some(dl) => add_mod(below, dl, q),
                    None => {
                        delta = Some(shift_needed(q, target, below));
                        target
                    }
                }
            };
            if sym != target {
                continue 'residues;
            }
        }
        let dl = delta.expect("a crossing start has at least one wrapped position");
        let cand = min_z_realizing(base, a, dl)
            .and_then(|z| z.checked_mul(u128::from(big_q)))
            .and_then(|zq| zq.checked_add(u128::from(r)));
        consider(cand);
    }

    (best, overflow)
}

fn finish_occurrence(
    seq: &GtmSequence,
    u: &Word,
    d: u64,
    best: Option<u128>,
    overflow: bool,
) -> Result<Option<Occurrence>> {
    match best {
        Some(c) => {
            let c = u64::try_from(c).map_err(|_| Error::Overflow {
                what: "witness start position",
            })?;
            let occ = Occurrence { c, d };
            debug_assert_eq!(
                seq.arithmetic_slice(occ.c, occ.d, u.len()).unwrap(),
                *u,
                "witness fails re-evaluation"
            );
            Ok(Some(occ))
        }
        None if overflow => Err(Error::Overflow {
            what: "witness start position",
        }),
        None => Ok(None),
    }
}

fn check_word(seq: &GtmSequence, u: &Word) -> Result<()> {
    if u.base() != seq.base() {
        return Err(Error::BaseMismatch {
            word_q: u.base().value(),
            seq_q: seq.base().value(),
        });
    }
    if u.is_empty() {
        return Err(Error::EmptyWord);
    }
    Ok(())
}

/// Decides whether `u` occurs in `ω_q` along some progression with difference
/// exactly d, returning the occurrence with the least start position.
pub fn occurs_with_difference(seq: &GtmSequence, u: &Word, d: u64) -> Result<Option<Occurrence>> {
    check_word(seq, u)?;
    if d == 0 {
        return Err(Error::ZeroDifference);
    }
    let (_t, big_q) = two_scale(seq.base(), u.len() as u128 * u128::from(d))?;
    let window = seq.fill_window(big_q as usize);
    let (best, overflow) = scan_window(seq.base(), u.digits(), d, &window, big_q);
    finish_occurrence(seq, u, d, best, overflow)
}

/// Brute-force reference: scan start positions `0..=scan_limit` directly and
/// return the first occurrence. Exists to falsify [`occurs_with_difference`];
/// a `None` here only means "not below the scan limit".
pub fn occurs_prefix_oracle(
    seq: &GtmSequence,
    u: &Word,
    d: u64,
    scan_limit: u64,
) -> Result<Option<Occurrence>> {
    check_word(seq, u)?;
    if d == 0 {
        return Err(Error::ZeroDifference);
    }
    let m = u.len() as u64;
    let span = (m - 1) * d;
    let needed = u128::from(scan_limit) + u128::from(span) + 1;
    if needed > u128::from(MAX_WINDOW_LEN) {
        return Err(Error::WindowTooLarge {
            needed,
            limit: MAX_WINDOW_LEN,
        });
    }
    let needed = needed as usize;
    // Grow the materialized prefix geometrically so early hits stay cheap.
    let mut window = seq.fill_window(needed.min(1 << 16));
    let digits = u.digits();
    for c in 0..=scan_limit {
        let top = (c + span) as usize;
        if top >= window.len() {
            let old = window.len();
            window.resize(needed.min(old * 2).max(top + 1), 0);
            seq.extend_window(&mut window, old);
        }
        let mut idx = c as usize;
        let mut ok = window[idx] == digits[0];
        for &target in &digits[1..] {
            if !ok {
                break;
            }
            idx += d as usize;
            ok = window[idx] == target;
        }
        if ok {
            return Ok(Some(Occurrence { c, d }));
        }
    }
    Ok(None)
}

/// Length of the constant run `ω_q[c], ω_q[c+d], …` starting exactly at c.
pub fn run_length_at(seq: &GtmSequence, c: u64, d: u64) -> Result<u64> {
    if d == 0 {
        return Err(Error::ZeroDifference);
    }
    let symbol = seq.symbol_at(c);
    let mut len = 1u64;
    let mut idx = u128::from(c);
    loop {
        idx += u128::from(d);
        if seq.symbol_at_u128(idx) != symbol {
            return Ok(len);
        }
        len += 1;
        if len == u64::MAX {
            return Err(Error::Internal("constant run fails to terminate".into()));
        }
    }
}

/// `L_ω(d)`: the maximal length of a constant progression with difference d,
/// plus a witness start realizing it.
///
/// Constant runs are shift-invariant, so deciding whether `0^L` occurs with
/// difference d settles whether *any* symbol runs L long. The length is found
/// by doubling L until the decision fails, then binary searching the
/// threshold; the window is re-sized from the current L candidate.
pub fn max_run_length(seq: &GtmSequence, d: u64) -> Result<RunReport> {
    if d == 0 {
        return Err(Error::ZeroDifference);
    }
    let base = seq.base();
    let mut window: Vec<u8> = Vec::new();
    let decide = |len: u64, window: &mut Vec<u8>| -> Result<Option<u64>> {
        let (_t, big_q) = two_scale(base, u128::from(len) * u128::from(d))?;
        if window.len() < big_q as usize {
            let old = window.len();
            window.resize(big_q as usize, 0);
            seq.extend_window(window, old);
        }
        let zeros = vec![0u8; len as usize];
        let (best, overflow) = scan_window(base, &zeros, d, window, big_q);
        match best {
            Some(c) => Ok(Some(u64::try_from(c).map_err(|_| Error::Overflow {
                what: "witness start position",
            })?)),
            None if overflow => Err(Error::Overflow {
                what: "witness start position",
            }),
            None => Ok(None),
        }
    };

    // ω_q[0] = 0, so runs of length 1 always exist.
    let mut lo = 1u64;
    let mut lo_witness = decide(1, &mut window)?.expect("0^1 occurs at c = 0");
    let mut hi = None;
    let mut len = 2u64;
    while hi.is_none() {
        match decide(len, &mut window)? {
            Some(c) => {
                lo = len;
                lo_witness = c;
                len = len
                    .checked_mul(2)
                    .ok_or(Error::Internal("run-length doubling overflowed".into()))?;
            }
            None => hi = Some(len),
        }
    }
    let mut hi = hi.expect("doubling loop sets hi");
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        match decide(mid, &mut window)? {
            Some(c) => {
                lo = mid;
                lo_witness = c;
            }
            None => hi = mid,
        }
    }

    let report = RunReport {
        d,
        length: lo,
        witness_c: lo_witness,
    };
    debug_assert!(run_maximal(seq, &report), "run witness is not maximal");
    Ok(report)
}

/// True when the reported run is constant and cannot be extended either way.
fn run_maximal(seq: &GtmSequence, report: &RunReport) -> bool {
    let symbol = seq.symbol_at(report.witness_c);
    let constant = (0..report.length).all(|i| {
        seq.symbol_at_u128(u128::from(report.witness_c) + u128::from(i) * u128::from(report.d))
            == symbol
    });
    let right = seq.symbol_at_u128(
        u128::from(report.witness_c) + u128::from(report.length) * u128::from(report.d),
    ) != symbol;
    let left = report.witness_c < report.d || seq.symbol_at(report.witness_c - report.d) != symbol;
    constant && right && left
}

fn digit_count(base: PrimeBase, d: u64) -> u32 {
    base_q_expansion_u64(d, base).len() as u32
}

/// `d_min(u)` with its witness and arithmetic index `|S_q(d_min)|`.
///
/// Differences divisible by q are skipped: the subsequence of `ω_q` along
/// residue r mod q is `ω_q` shifted by r, so anything realized with q·d is
/// already realized with d and a multiple of q is never minimal. Termination
/// is guaranteed by the constructive embedding, which supplies an explicit
/// difference for every word.
pub fn min_difference(seq: &GtmSequence, u: &Word) -> Result<IndexReport> {
    min_difference_within(seq, u, None)
}

/// [`min_difference`] with an explicit search budget on d. `None` falls back
/// to the constructive cap.
pub fn min_difference_within(
    seq: &GtmSequence,
    u: &Word,
    budget: Option<u64>,
) -> Result<IndexReport> {
    check_word(seq, u)?;
    let cap: BigUint = match budget {
        Some(b) => BigUint::from(b),
        None => constructive::construct_embedding(seq, u)?.d_u,
    };
    let q = seq.base().as_u64();
    let mut d = 1u64;
    while BigUint::from(d) <= cap {
        if !d.is_multiple_of(q) {
            if let Some(occurrence) = occurs_with_difference(seq, u, d)? {
                return Ok(IndexReport {
                    word: u.clone(),
                    d_min: d,
                    occurrence,
                    index: digit_count(seq.base(), d),
                });
            }
        }
        d = d
            .checked_add(1)
            .ok_or(Error::Internal("difference search overflowed u64".into()))?;
    }
    match budget {
        Some(b) => Err(Error::SearchBudgetExhausted {
            what: format!("minimal difference for {u}"),
            budget: b,
        }),
        None => Err(Error::Internal(format!(
            "{u} failed to occur below its constructive difference cap"
        ))),
    }
}

/// Least witness start per word of length m occurring with difference d,
/// indexed by lexicographic rank. One window scan classifies every residue
/// for every shift pair, so this matches `q^m` calls of
/// [`occurs_with_difference`] entry for entry.
fn all_words_min_candidates(seq: &GtmSequence, m: usize, d: u64) -> Result<Vec<Option<u128>>> {
    let base = seq.base();
    let q = base.value();
    let total = base
        .as_u64()
        .checked_pow(m as u32)
        .filter(|&t| t <= 1 << 24)
        .ok_or(Error::Overflow {
            what: "word-table size",
        })? as usize;
    let (_t, big_q) = two_scale(base, m as u128 * u128::from(d))?;
    let window = seq.fill_window(big_q as usize);
    let span = (m as u64 - 1) * d;

    let mut table: Vec<Option<u128>> = vec![None; total];
    let mut consider = |rank: u64, cand: Option<u128>| {
        if let Some(c) = cand {
            let slot = &mut table[rank as usize];
            if slot.is_none() || c < slot.unwrap() {
                *slot = Some(c);
            }
        }
    };

    let q64 = u64::from(q);
    let mut digits = vec![0u8; m];
    let non_crossing_end = big_q - span;
    for r in 0..big_q {
        let crossing = r >= non_crossing_end;
        let mut idx = r;
        for (i, slot) in digits.iter_mut().enumerate() {
            if i > 0 {
                idx += d;
            }
            *slot = if idx < big_q {
                window[idx as usize]
            } else {
                window[(idx - big_q) as usize]
            };
        }
        let boundary = if crossing {
            // first wrapped position
            (1..m)
                .find(|&i| r + i as u64 * d >= big_q)
                .expect("crossing start wraps")
        } else {
            m
        };
        for a in 0..q {
            if !crossing {
                let rank = digits
                    .iter()
                    .fold(0u64, |acc, &s| acc * q64 + u64::from(add_mod(s, a, q)));
                consider(
                    rank,
                    Some(u128::from(a) * u128::from(big_q) + u128::from(r)),
                );
            } else {
                for delta in 0..q {
                    let rank = digits.iter().enumerate().fold(0u64, |acc, (i, &s)| {
                        let shift = if i < boundary {
                            a
                        } else {
                            add_mod(a, delta, q)
                        };
                        acc * q64 + u64::from(add_mod(s, shift, q))
                    });
                    let cand = min_z_realizing(base, a, delta)
                        .and_then(|z| z.checked_mul(u128::from(big_q)))
                        .and_then(|zq| zq.checked_add(u128::from(r)));
                    consider(rank, cand);
                }
            }
        }
    }
    Ok(table)
}

/// Minimal differences for every word in `Σ_q^n`, ascending one difference at
/// a time until all words are realized. `seed` entries (for example from a
/// verified cache) are taken as already resolved.
pub fn min_difference_table(
    seq: &GtmSequence,
    n: usize,
    seed: &BTreeMap<Word, (u64, u64)>,
) -> Result<DifferenceTable> {
    if n == 0 {
        return Err(Error::ZeroLength);
    }
    let base = seq.base();
    let total = base
        .as_u64()
        .checked_pow(n as u32)
        .filter(|&t| t <= 1 << 24)
        .ok_or(Error::Overflow {
            what: "word-table size",
        })? as usize;

    let mut resolved: Vec<Option<(u64, u64)>> = vec![None; total];
    for (word, &(d_min, c)) in seed {
        if word.len() == n && word.base() == base {
            resolved[word.lex_rank() as usize] = Some((d_min, c));
        }
    }
    let mut pending = resolved.iter().filter(|e| e.is_none()).count();

    // Every word occurs with its constructed embedding difference, whose
    // digit length is bounded by the index upper bound.
    let cap =
        BigUint::from(base.as_u64()).pow(constructive::upper_bound_index(base, n as u64)? as u32);
    let q = base.as_u64();
    let mut d = 1u64;
    while pending > 0 {
        if BigUint::from(d) > cap {
            return Err(Error::Internal(format!(
                "{pending} words of length {n} failed to occur below the constructive cap"
            )));
        }
        if !d.is_multiple_of(q) {
            let candidates = all_words_min_candidates(seq, n, d)?;
            for (rank, cand) in candidates.into_iter().enumerate() {
                if resolved[rank].is_none() {
                    if let Some(c) = cand {
                        if let Ok(c) = u64::try_from(c) {
                            resolved[rank] = Some((d, c));
                            pending -= 1;
                        }
                    }
                }
            }
        }
        d = d
            .checked_add(1)
            .ok_or(Error::Internal("difference search overflowed u64".into()))?;
    }

    let entries = resolved
        .into_iter()
        .enumerate()
        .map(|(rank, entry)| {
            let (d_min, c) = entry.expect("all words resolved");
            IndexReport {
                word: Word::from_lex_rank(base, n, rank as u64),
                d_min,
                occurrence: Occurrence { c, d: d_min },
                index: digit_count(base, d_min),
            }
        })
        .collect();
    Ok(DifferenceTable {
        base,
        word_len: n,
        entries,
    })
}

/// `I_ω(n)`: the maximal arithmetic index over `Σ_q^n`, with the extremal
/// words attaining it.
pub fn max_index_for_length(seq: &GtmSequence, n: usize) -> Result<MaxIndexRow> {
    Ok(min_difference_table(seq, n, &BTreeMap::new())?.into_max_index_row(n as u32))
}

/// `a_ω(n)`: how many words of `Σ_q^n` occur as arithmetic factors. `ω_q` is
/// arithmetically universal, so the expected value is `q^n` — this recounts
/// it instead of assuming it.
pub fn arithmetical_complexity(seq: &GtmSequence, n: usize) -> Result<u64> {
    Ok(min_difference_table(seq, n, &BTreeMap::new())?
        .entries()
        .len() as u64)
}

/// `p_ω(m)`: the number of distinct (ordinary) factors of length m, counted
/// over prefixes whose length doubles from `q·m` until the count is stable
/// across two consecutive doublings.
pub fn factor_complexity(seq: &GtmSequence, m: usize) -> Result<u64> {
    if m == 0 {
        return Err(Error::ZeroLength);
    }
    let count_in = |window: &[u8]| -> u64 {
        let mut seen = std::collections::HashSet::new();
        for w in window.windows(m) {
            seen.insert(w);
        }
        seen.len() as u64
    };
    let mut len = seq.base().value() as usize * m;
    let mut window = seq.fill_window(len);
    let mut counts = vec![count_in(&window)];
    loop {
        len = len
            .checked_mul(2)
            .filter(|&l| l as u64 <= MAX_WINDOW_LEN)
            .ok_or(Error::Internal("factor count failed to stabilize".into()))?;
        let old = window.len();
        window.resize(len, 0);
        seq.extend_window(&mut window, old);
        counts.push(count_in(&window));
        if counts.len() >= 3
            && counts[counts.len() - 1] == counts[counts.len() - 2]
            && counts[counts.len() - 2] == counts[counts.len() - 3]
        {
            return Ok(counts[counts.len() - 1]);
        }
    }
}

//! Explicit witnesses: closed-form maximal run lengths, concrete runs
//! attaining them, and a constructive embedding that produces, for any word
//! `u`, an explicit start `c_u` and difference `d_u` with
//! `ω_q[c_u + j·d_u] = u_j`.
//!
//! The embedding pipeline: locate a constant-zero run of length ≥ q^n with
//! difference `d = q^n − 1` ([`base_zero_run`]); slide an m-window along its
//! tail to obtain the triangular basis `b_i = 0^{m−i} β_1…β_i` with `β_1 ≠ 0`
//! ([`build_basis`]); solve `u = ⊕_i α_i·b_i` over `Z/qZ`
//! ([`solve_coefficients`]); then concatenate the base-q expansions of the
//! basis start positions, block i repeated α_i times, into `c_u`, aligned
//! with equal-width blocks encoding d in `d_u` ([`construct_embedding`]).
//! Blocks are zero-padded to a common width so block additions never carry
//! into each other; the digit sum of `c_u + j·d_u` then splits as
//! `Σ_i α_i·s_q(c_i + j·d)`, which is `u_j` by the coefficient solve. Every
//! embedding is verified by direct evaluation before being returned.

use num_bigint::BigUint;
use num_rational::Ratio;
use serde::Serialize;

use crate::base::{PrimeBase, Symbol, Word};
use crate::digits::{base_q_expansion, base_q_expansion_u64};
use crate::error::{Error, Result};
use crate::search::run_length_at;
use crate::sequence::GtmSequence;

/// Default cap for the searches over the high part z of witness starts.
/// Every witness observed in practice has z < q², so q^{q+2} is generous.
fn default_z_cap(base: PrimeBase) -> u64 {
    base.pow(u32::from(base.value()) + 2).unwrap_or(u64::MAX)
}

/// The exact maximum of `L_ω(d)` over `0 < d < q^n`, in closed form:
/// `q^n + 2q` when q divides n, else `q^n`. The sweep in
/// [`crate::experiments`] re-derives this value empirically per difference.
pub fn exact_max_run(base: PrimeBase, n: u32) -> Result<u64> {
    if n == 0 {
        return Err(Error::ZeroLength);
    }
    let qn = base.pow(n)?;
    if n.is_multiple_of(u32::from(base.value())) {
        qn.checked_add(2 * base.as_u64()).ok_or(Error::Overflow {
            what: "maximal run length",
        })
    } else {
        Ok(qn)
    }
}

/// Splits `c = z·q^{2n} + y·q^n + x` with `x, y < q^n`.
pub fn split_at_scale(base: PrimeBase, c: u64, n: u32) -> Result<(u64, u64, u64)> {
    let qn = base.pow(n)?;
    let q2n = qn.checked_mul(qn).ok_or(Error::Overflow {
        what: "decomposition scale",
    })?;
    Ok((c / q2n, (c % q2n) / qn, c % qn))
}

/// A constant run attaining the extended maximum `q^n + 2q` (q divides n)
/// with difference `d = q^n − 1`, starting at `c = z·q^{2n} + y·q^n + x`.
#[derive(Copy, Clone, PartialEq, Eq, Debug, Serialize)]
pub struct ExtendedRun {
    pub n: u32,
    pub z: u64,
    pub c: u64,
    pub d: u64,
    pub length: u64,
}

/// Finds the least z such that `c = z·q^{2n} + (q^n − (q−1))·q^n + (q−1)`
/// starts a constant run of the full extended length `q^n + 2q` with
/// difference `q^n − 1`. Requires q | n; such runs do not exist otherwise.
pub fn extended_run_witness(seq: &GtmSequence, n: u32) -> Result<ExtendedRun> {
    extended_run_witness_capped(seq, n, default_z_cap(seq.base()))
}

/// [`extended_run_witness`] with an explicit cap on the z search.
pub fn extended_run_witness_capped(seq: &GtmSequence, n: u32, z_cap: u64) -> Result<ExtendedRun> {
    let base = seq.base();
    if n == 0 {
        return Err(Error::ZeroLength);
    }
    if !n.is_multiple_of(u32::from(base.value())) {
        return Err(Error::ExtendedRunUnavailable { q: base.value(), n });
    }
    let qn = base.pow(n)?;
    let q2n = qn.checked_mul(qn).ok_or(Error::Overflow {
        what: "witness scale",
    })?;
    let target = exact_max_run(base, n)?;
    let d = qn - 1;
    let low = (qn - (base.as_u64() - 1)) * qn + (base.as_u64() - 1);
    for z in 0..=z_cap {
        let c = match z.checked_mul(q2n).and_then(|v| v.checked_add(low)) {
            Some(c) => c,
            None => break,
        };
        if run_length_at(seq, c, d)? == target {
            return Ok(ExtendedRun {
                n,
                z,
                c,
                d,
                length: target,
            });
        }
    }
    Err(Error::WitnessSearchExhausted {
        q: base.value(),
        n,
        target,
        z_cap,
    })
}

/// A constant-zero run `ω_q[c] = ω_q[c+d] = … = 0` of length ≥ q^n with
/// `d = q^n − 1`; the symbol one step past the run is nonzero.
#[derive(Copy, Clone, PartialEq, Eq, Debug, Serialize)]
pub struct ZeroRun {
    pub n: u32,
    pub z: u64,
    pub c: u64,
    pub d: u64,
    /// Exact run length; at least q^n.
    pub length: u64,
}

/// Finds the least z such that `c = z·q^{2n} + (q^n − 1)` starts a
/// constant-*zero* run of length ≥ q^n with difference `q^n − 1`.
///
/// For any z the first q^n terms from c are automatically constant (the low
/// q^n − 1 − j and middle j digit chunks always sum to a fixed value), so the
/// search only has to hit a z whose digit sum makes that constant 0.
pub fn base_zero_run(seq: &GtmSequence, n: u32) -> Result<ZeroRun> {
    base_zero_run_capped(seq, n, default_z_cap(seq.base()))
}

/// [`base_zero_run`] with an explicit cap on the z search.
pub fn base_zero_run_capped(seq: &GtmSequence, n: u32, z_cap: u64) -> Result<ZeroRun> {
    let base = seq.base();
    if n == 0 {
        return Err(Error::ZeroLength);
    }
    let qn = base.pow(n)?;
    let q2n = qn.checked_mul(qn).ok_or(Error::Overflow {
        what: "witness scale",
    })?;
    let d = qn - 1;
    for z in 0..=z_cap {
        let c = match z.checked_mul(q2n).and_then(|v| v.checked_add(d)) {
            Some(c) => c,
            None => break,
        };
        if seq.symbol_at(c).value() != 0 {
            continue;
        }
        let length = run_length_at(seq, c, d)?;
        if length >= qn {
            return Ok(ZeroRun { n, z, c, d, length });
        }
    }
    Err(Error::WitnessSearchExhausted {
        q: base.value(),
        n,
        target: qn,
        z_cap,
    })
}

/// The window scale used when embedding words of length m: the least n ≥ 1
/// with m ≤ q^n.
pub fn embedding_scale(base: PrimeBase, m: u64) -> u32 {
    ceil_log(base, m).max(1)
}

/// The triangular basis underlying the embedding: m overlapping windows
/// stepping through the tail of one zero run, so that `b_i = 0^{m−i} β_1…β_i`
/// where `β_k = ω_q[c + (m−1+k−1)·d]` and `β_1 ≠ 0`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Basis {
    base: PrimeBase,
    word_len: usize,
    scale: u32,
    d: u64,
    zero_run: ZeroRun,
    starts: Vec<u64>,
    words: Vec<Word>,
    betas: Word,
}

impl Basis {
    #[inline]
    pub fn base(&self) -> PrimeBase {
        self.base
    }

    /// m: the common length of the basis words.
    #[inline]
    pub fn word_len(&self) -> usize {
        self.word_len
    }

    /// The scale n, with m ≤ q^n.
    #[inline]
    pub fn scale(&self) -> u32 {
        self.scale
    }

    /// The in-window difference `q^n − 1`.
    #[inline]
    pub fn d(&self) -> u64 {
        self.d
    }

    /// The zero run the windows step through.
    #[inline]
    pub fn zero_run(&self) -> ZeroRun {
        self.zero_run
    }

    /// Start positions c_1 … c_m, with `c_{i+1} = c_i + d`.
    #[inline]
    pub fn starts(&self) -> &[u64] {
        &self.starts
    }

    /// The basis words b_1 … b_m.
    #[inline]
    pub fn words(&self) -> &[Word] {
        &self.words
    }

    /// β_1 … β_m; `b_i = 0^{m−i} β_1…β_i` and `β_1 ≠ 0`.
    #[inline]
    pub fn betas(&self) -> &Word {
        &self.betas
    }

    /// The symbol-wise combination `⊕_i α_i·b_i` over `Z/qZ`.
    ///
    /// Panics if `alphas.len() ≠ word_len`.
    pub fn combination(&self, alphas: &[Symbol]) -> Word {
        assert_eq!(
            alphas.len(),
            self.word_len,
            "one coefficient per basis word"
        );
        let q = self.base.as_u64();
        let mut acc = vec![0u64; self.word_len];
        for (alpha, b) in alphas.iter().zip(&self.words) {
            for (slot, &s) in acc.iter_mut().zip(b.digits()) {
                *slot += u64::from(alpha.value()) * u64::from(s);
            }
        }
        Word::from_reduced(self.base, acc.into_iter().map(|v| (v % q) as u8).collect())
    }
}

/// Builds the triangular basis for words of length m.
pub fn build_basis(seq: &GtmSequence, m: usize) -> Result<Basis> {
    build_basis_capped(seq, m, default_z_cap(seq.base()))
}

/// [`build_basis`] with an explicit cap on the zero-run block search.
pub fn build_basis_capped(seq: &GtmSequence, m: usize, z_cap: u64) -> Result<Basis> {
    if m == 0 {
        return Err(Error::ZeroLength);
    }
    let base = seq.base();
    let n = embedding_scale(base, m as u64);
    let zero_run = base_zero_run_capped(seq, n, z_cap)?;
    let d = zero_run.d;
    let m64 = m as u64;
    if zero_run.length < m64 {
        return Err(Error::BasisConstruction {
            reason: format!(
                "zero run of length {} cannot anchor {m} windows",
                zero_run.length
            ),
        });
    }
    // c_1 sits so that the window tail pokes exactly one symbol past the run;
    // each later window pokes one further.
    let c1 = (zero_run.length - (m64 - 1))
        .checked_mul(d)
        .and_then(|v| v.checked_add(zero_run.c))
        .ok_or(Error::Overflow {
            what: "basis start position",
        })?;
    let starts: Vec<u64> = (0..m64)
        .map(|i| {
            i.checked_mul(d)
                .and_then(|v| v.checked_add(c1))
                .ok_or(Error::Overflow {
                    what: "basis start position",
                })
        })
        .collect::<Result<_>>()?;
    let words: Vec<Word> = starts
        .iter()
        .map(|&ci| seq.arithmetic_slice(ci, d, m))
        .collect::<Result<_>>()?;

    let betas = words[m - 1].clone();
    if betas.digits()[0] == 0 {
        return Err(Error::BasisConstruction {
            reason: "leading base symbol β_1 is zero".into(),
        });
    }
    for (idx, b) in words.iter().enumerate() {
        let zeros = m - 1 - idx;
        let triangular = b.digits()[..zeros].iter().all(|&s| s == 0)
            && b.digits()[zeros..] == betas.digits()[..=idx];
        if !triangular {
            return Err(Error::BasisConstruction {
                reason: format!("window {} is not triangular: {b}", idx + 1),
            });
        }
    }
    Ok(Basis {
        base,
        word_len: m,
        scale: n,
        d,
        zero_run,
        starts,
        words,
        betas,
    })
}

/// Solves `u = ⊕_i α_i·b_i` over `Z/qZ`. The triangular shape makes the
/// system uniquely solvable front-to-back: the j-th symbol of u only involves
/// α_{m−j+1} … α_m, so `u_j = Σ_{k=1}^{j} α_{m−j+k}·β_k` yields α_{m−j+1}
/// once the later coefficients are known (division by β_1 ≠ 0).
pub fn solve_coefficients(basis: &Basis, u: &Word) -> Result<Vec<Symbol>> {
    if u.base() != basis.base() {
        return Err(Error::BaseMismatch {
            word_q: u.base().value(),
            seq_q: basis.base().value(),
        });
    }
    let m = basis.word_len();
    if u.len() != m {
        return Err(Error::LengthMismatch {
            expected: m,
            got: u.len(),
        });
    }
    let q = basis.base().as_u64();
    let betas = basis.betas().digits();
    let beta1 = u64::from(betas[0]);
    debug_assert!(beta1 != 0, "basis invariant");
    let inv_beta1 = (1..q)
        .find(|x| (x * beta1) % q == 1)
        .ok_or_else(|| Error::Internal("β_1 has no inverse mod prime q".into()))?;

    let mut alphas = vec![0u8; m];
    for j in 1..=m {
        let known: u64 = (2..=j)
            .map(|k| u64::from(alphas[m - j + k - 1]) * u64::from(betas[k - 1]))
            .sum();
        let uj = u64::from(u.digits()[j - 1]);
        let rhs = (uj + q - known % q) % q;
        alphas[m - j] = ((rhs * inv_beta1) % q) as u8;
    }
    let alphas: Vec<Symbol> = alphas.into_iter().map(Symbol::from_reduced).collect();
    debug_assert_eq!(
        basis.combination(&alphas),
        *u,
        "solve must invert combination"
    );
    Ok(alphas)
}

fn serialize_biguint<S: serde::Serializer>(
    x: &BigUint,
    serializer: S,
) -> std::result::Result<S::Ok, S::Error> {
    serializer.collect_str(x)
}

/// An explicit occurrence of `word`: evaluating `ω_q` along
/// `c_u, c_u + d_u, …` reproduces it. `c_u`/`d_u` are exact big integers
/// because block concatenation grows them past machine words.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct EmbeddingResult {
    pub word: Word,
    /// Window scale; the in-window difference is `d = q^n − 1`.
    pub n: u32,
    pub d: u64,
    /// Start of the zero run anchoring the construction.
    pub base_c: u64,
    /// `None` for the all-zero word, which the zero run witnesses directly.
    pub basis: Option<Basis>,
    pub alphas: Vec<Symbol>,
    /// Common digit width of the concatenated blocks (n for the fallback,
    /// where `d_u` is the single block `(q−1)^n`).
    pub block_len: u32,
    #[serde(serialize_with = "serialize_biguint")]
    pub c_u: BigUint,
    #[serde(serialize_with = "serialize_biguint")]
    pub d_u: BigUint,
}

impl EmbeddingResult {
    /// `|S_q(d_u)|`: the arithmetic index realized by this embedding, an
    /// upper bound for the word's true index.
    pub fn realized_index(&self) -> u64 {
        base_q_expansion(&self.d_u, self.word.base()).len() as u64
    }
}

fn concatenate_blocks(
    base: PrimeBase,
    starts: &[u64],
    alphas: &[Symbol],
    d: u64,
    width: u32,
) -> (BigUint, BigUint) {
    let shift = BigUint::from(base.as_u64()).pow(width);
    let mut c_u = BigUint::ZERO;
    let mut d_u = BigUint::ZERO;
    for (alpha, &ci) in alphas.iter().zip(starts) {
        for _ in 0..alpha.value() {
            c_u = c_u * &shift + ci;
            d_u = d_u * &shift + d;
        }
    }
    (c_u, d_u)
}

/// Produces an explicit occurrence `(c_u, d_u)` of `u` and verifies it by
/// evaluation. The block width starts at `max(2n + q, |S_q(c_i)|)` and is
/// widened once by n if verification detects a carry leaking across blocks.
pub fn construct_embedding(seq: &GtmSequence, u: &Word) -> Result<EmbeddingResult> {
    construct_embedding_capped(seq, u, default_z_cap(seq.base()))
}

/// [`construct_embedding`] with an explicit cap on the zero-run block search.
pub fn construct_embedding_capped(
    seq: &GtmSequence,
    u: &Word,
    z_cap: u64,
) -> Result<EmbeddingResult> {
    let base = seq.base();
    if u.base() != base {
        return Err(Error::BaseMismatch {
            word_q: u.base().value(),
            seq_q: base.value(),
        });
    }
    if u.is_empty() {
        return Err(Error::EmptyWord);
    }
    let m = u.len();

    if m == 1 {
        // w_a = a for a < q, so a single symbol occurs at position a with
        // difference 1. The block route would overshoot the digit bound
        // here: it pays the scale floor n = 1 while the bound charges
        // ⌈log_q 1⌉ = 0 block digits.
        let a = u.digits()[0];
        let result = EmbeddingResult {
            word: u.clone(),
            n: embedding_scale(base, 1),
            d: 1,
            base_c: u64::from(a),
            basis: None,
            alphas: vec![Symbol::from_reduced(a)],
            block_len: 1,
            c_u: BigUint::from(a),
            d_u: BigUint::from(1u32),
        };
        let got = seq.arithmetic_slice_big(&result.c_u, &result.d_u, 1)?;
        if got != *u {
            return Err(Error::EmbeddingVerification {
                word: u.to_string(),
                got: got.to_string(),
            });
        }
        return Ok(result);
    }

    if u.digits().iter().all(|&s| s == 0) {
        // The zero run witnesses 0^m directly; the coefficient route would
        // produce an empty concatenation (all α_i = 0).
        let n = embedding_scale(base, m as u64);
        let run = base_zero_run_capped(seq, n, z_cap)?;
        let result = EmbeddingResult {
            word: u.clone(),
            n,
            d: run.d,
            base_c: run.c,
            basis: None,
            alphas: vec![Symbol::from_reduced(0); m],
            block_len: n,
            c_u: BigUint::from(run.c),
            d_u: BigUint::from(run.d),
        };
        let got = seq.arithmetic_slice_big(&result.c_u, &result.d_u, m)?;
        if got != *u {
            return Err(Error::EmbeddingVerification {
                word: u.to_string(),
                got: got.to_string(),
            });
        }
        return Ok(result);
    }

    let basis = build_basis_capped(seq, m, z_cap)?;
    let alphas = solve_coefficients(&basis, u)?;
    let n = basis.scale();
    let digit_width = basis
        .starts()
        .iter()
        .map(|&ci| base_q_expansion_u64(ci, base).len() as u32)
        .max()
        .expect("m ≥ 1 start positions");
    let width = digit_width.max(2 * n + u32::from(base.value()));

    let mut got = Word::empty(base);
    for w in [width, width + n] {
        let (c_u, d_u) = concatenate_blocks(base, basis.starts(), &alphas, basis.d(), w);
        got = seq.arithmetic_slice_big(&c_u, &d_u, m)?;
        if got == *u {
            return Ok(EmbeddingResult {
                word: u.clone(),
                n,
                d: basis.d(),
                base_c: basis.zero_run().c,
                basis: Some(basis),
                alphas,
                block_len: w,
                c_u,
                d_u,
            });
        }
    }
    Err(Error::EmbeddingVerification {
        word: u.to_string(),
        got: got.to_string(),
    })
}

/// Least k ≥ 0 with q^k ≥ m.
pub fn ceil_log(base: PrimeBase, m: u64) -> u32 {
    let q = base.as_u64();
    let mut k = 0;
    let mut pow = 1u64;
    while pow < m {
        k += 1;
        pow = pow.saturating_mul(q);
    }
    k
}

fn ceil_log2(m: u64) -> u32 {
    if m <= 1 {
        0
    } else {
        64 - (m - 1).leading_zeros()
    }
}

/// `(2⌈log_q m⌉ + q)·(q−1)·m`: every word of length m has arithmetic index
/// at most this, realized by the constructed embedding difference.
pub fn upper_bound_index(base: PrimeBase, m: u64) -> Result<u64> {
    if m == 0 {
        return Err(Error::ZeroLength);
    }
    let q = base.as_u64();
    (2 * u64::from(ceil_log(base, m)) + q)
        .checked_mul(q - 1)
        .and_then(|v| v.checked_mul(m))
        .ok_or(Error::Overflow {
            what: "index upper bound",
        })
}

/// `⌈(1/2)·log_q(2·q^m / (C·m))⌉`, computed as the least k ≥ 0 with
/// `q^{2k}·C·m ≥ 2·q^m`; exact integer comparisons throughout. C bounds the
/// ordinary factor complexity: `p_ω(j) ≤ C·j`.
pub fn lower_bound_index(base: PrimeBase, m: u64, c_growth: u64) -> Result<u64> {
    if m == 0 {
        return Err(Error::ZeroLength);
    }
    if c_growth == 0 {
        return Err(Error::InvalidParameter {
            what: "complexity constant must be positive",
        });
    }
    let exp = u32::try_from(m).map_err(|_| Error::Overflow {
        what: "index lower bound exponent",
    })?;
    let q = BigUint::from(base.as_u64());
    let rhs = BigUint::from(2u8) * q.pow(exp);
    let q2 = &q * &q;
    let mut k = 0u64;
    let mut lhs = BigUint::from(c_growth) * m;
    while lhs < rhs {
        k += 1;
        lhs *= &q2;
    }
    Ok(k)
}

/// `(m − ⌈log_2 m⌉ − 1) / 2` as an exact rational: the binary-alphabet index
/// lower bound with the complexity constant fixed at 4.
pub fn lower_bound_tm(m: u64) -> Result<Ratio<i64>> {
    if m == 0 {
        return Err(Error::ZeroLength);
    }
    let m = i64::try_from(m).map_err(|_| Error::Overflow {
        what: "index lower bound",
    })?;
    Ok(Ratio::new(m - i64::from(ceil_log2(m as u64)) - 1, 2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::min_difference;

    fn seq(q: u64) -> GtmSequence {
        GtmSequence::new(PrimeBase::new(q).unwrap())
    }

    fn word(q: u64, s: &str) -> Word {
        Word::parse(PrimeBase::new(q).unwrap(), s).unwrap()
    }

    #[test]
    fn exact_max_run_closed_form() {
        let b2 = PrimeBase::new(2).unwrap();
        let b3 = PrimeBase::new(3).unwrap();
        let b5 = PrimeBase::new(5).unwrap();
        assert_eq!(exact_max_run(b2, 1).unwrap(), 2);
        assert_eq!(exact_max_run(b2, 2).unwrap(), 8);
        assert_eq!(exact_max_run(b2, 6).unwrap(), 68);
        assert_eq!(exact_max_run(b3, 2).unwrap(), 9);
        assert_eq!(exact_max_run(b3, 3).unwrap(), 33);
        assert_eq!(exact_max_run(b5, 5).unwrap(), 3135);
        assert!(matches!(exact_max_run(b2, 0), Err(Error::ZeroLength)));
        assert!(matches!(exact_max_run(b2, 64), Err(Error::Overflow { .. })));
    }

    #[test]
    fn extended_run_witnesses_are_exact_and_maximal() {
        let s2 = seq(2);
        let run = extended_run_witness(&s2, 2).unwrap();
        assert_eq!((run.z, run.c, run.d, run.length), (2, 45, 3, 8));
        assert_eq!(split_at_scale(s2.base(), run.c, 2).unwrap(), (2, 3, 1));

        let run4 = extended_run_witness(&s2, 4).unwrap();
        assert_eq!((run4.z, run4.c, run4.d, run4.length), (2, 753, 15, 20));

        let s3 = seq(3);
        let run3 = extended_run_witness(&s3, 3).unwrap();
        assert_eq!(run3.d, 26);
        assert_eq!(run3.length, 33);

        for (s, r) in [(&s2, &run), (&s2, &run4), (&s3, &run3)] {
            assert_eq!(run_length_at(s, r.c, r.d).unwrap(), r.length);
            // Maximality on the left: the previous term must break the run.
            assert!(r.c >= r.d);
            assert_ne!(s.symbol_at(r.c - r.d), s.symbol_at(r.c), "run extends left");
        }
    }

    #[test]
    fn extended_run_rejects_bad_shapes() {
        let s2 = seq(2);
        assert!(matches!(
            extended_run_witness(&s2, 3),
            Err(Error::ExtendedRunUnavailable { q: 2, n: 3 })
        ));
        assert!(matches!(
            extended_run_witness(&s2, 0),
            Err(Error::ZeroLength)
        ));
        assert!(matches!(
            extended_run_witness_capped(&s2, 2, 0),
            Err(Error::WitnessSearchExhausted { z_cap: 0, .. })
        ));
    }

    #[test]
    fn zero_runs_match_hand_computed_starts() {
        for (q, n, z, c, len) in [
            (2u64, 1u32, 1u64, 5u64, 2u64),
            (2, 2, 0, 3, 6),
            (2, 3, 1, 71, 8),
            (3, 1, 1, 11, 3),
            (3, 2, 2, 170, 9),
        ] {
            let s = seq(q);
            let run = base_zero_run(&s, n).unwrap();
            assert_eq!((run.z, run.c, run.length), (z, c, len), "q={q}, n={n}");
            assert_eq!(run.d, s.base().pow(n).unwrap() - 1);
            assert!(run.length >= s.base().pow(n).unwrap());
            assert_eq!(s.symbol_at(run.c).value(), 0);
            // The symbol one step past the run is the basis seed β_1 ≠ 0.
            let after = run.c + run.length * run.d;
            assert_ne!(s.symbol_at(after).value(), 0, "q={q}, n={n}");
        }
    }

    #[test]
    fn embedding_scale_brackets_the_length() {
        let b2 = PrimeBase::new(2).unwrap();
        let b3 = PrimeBase::new(3).unwrap();
        for (m, n) in [(1u64, 1u32), (2, 1), (3, 2), (4, 2), (5, 3), (8, 3), (9, 4)] {
            assert_eq!(embedding_scale(b2, m), n, "m={m}");
        }
        for (m, n) in [(1u64, 1u32), (3, 1), (4, 2), (9, 2), (10, 3)] {
            assert_eq!(embedding_scale(b3, m), n, "m={m}");
        }
        // m fits its window and the previous window is strictly too small.
        for m in 1..=40u64 {
            let n = embedding_scale(b3, m);
            assert!(m <= b3.pow(n).unwrap());
            assert!(n == 1 || m > b3.pow(n - 1).unwrap());
        }
    }

    #[test]
    fn basis_fixtures() {
        let s2 = seq(2);
        let b = build_basis(&s2, 2).unwrap();
        assert_eq!((b.scale(), b.d()), (1, 1));
        assert_eq!(b.starts(), &[6, 7]);
        assert_eq!(b.words()[0].to_string(), "01");
        assert_eq!(b.words()[1].to_string(), "11");
        assert_eq!(b.betas().to_string(), "11");

        let s3 = seq(3);
        let b = build_basis(&s3, 3).unwrap();
        assert_eq!((b.scale(), b.d()), (1, 2));
        assert_eq!(b.starts(), &[13, 15, 17]);
        let rendered: Vec<String> = b.words().iter().map(|w| w.to_string()).collect();
        assert_eq!(rendered, ["002", "020", "200"]);
        assert_eq!(b.betas().to_string(), "200");
    }

    #[test]
    fn bases_are_triangular_across_a_grid() {
        for q in [2u64, 3, 5] {
            let s = seq(q);
            for m in 1..=8usize {
                let b = build_basis(&s, m).unwrap();
                assert_eq!(b.words().len(), m);
                assert_ne!(b.betas().digits()[0], 0, "q={q}, m={m}");
                for (idx, w) in b.words().iter().enumerate() {
                    assert_eq!(w.len(), m);
                    assert!(
                        w.digits()[..m - 1 - idx].iter().all(|&s| s == 0),
                        "q={q}, m={m}, window {idx}"
                    );
                    assert_eq!(w.digits()[m - 1 - idx..], b.betas().digits()[..=idx]);
                }
            }
        }
    }

    #[test]
    fn solve_coefficients_fixtures() {
        let s2 = seq(2);
        let basis = build_basis(&s2, 2).unwrap();
        let alphas = solve_coefficients(&basis, &word(2, "11")).unwrap();
        let values: Vec<u8> = alphas.iter().map(|a| a.value()).collect();
        assert_eq!(values, [0, 1]);

        // A basis word reproduces itself; the zero word needs nothing.
        let alphas = solve_coefficients(&basis, &basis.words()[1].clone()).unwrap();
        assert_eq!(alphas.iter().map(|s| s.value()).collect::<Vec<_>>(), [0, 1]);
        let alphas = solve_coefficients(&basis, &word(2, "00")).unwrap();
        assert_eq!(alphas.iter().map(|s| s.value()).collect::<Vec<_>>(), [0, 0]);

        assert!(matches!(
            solve_coefficients(&basis, &word(2, "111")),
            Err(Error::LengthMismatch {
                expected: 2,
                got: 3
            })
        ));
        assert!(matches!(
            solve_coefficients(&basis, &word(3, "12")),
            Err(Error::BaseMismatch { .. })
        ));
    }

    /// Coefficients biject with words: solving after combining is the
    /// identity, so distinct words give distinct coefficient vectors.
    #[test]
    fn solve_is_inverse_of_combination() {
        for (q, m) in [(2u64, 4usize), (3, 2), (5, 2)] {
            let s = seq(q);
            let basis = build_basis(&s, m).unwrap();
            let base = s.base();
            for rank in 0..base.as_u64().pow(m as u32) {
                let alphas: Vec<Symbol> = Word::from_lex_rank(base, m, rank).iter().collect();
                let u = basis.combination(&alphas);
                let solved = solve_coefficients(&basis, &u).unwrap();
                assert_eq!(solved, alphas, "q={q}, m={m}, rank={rank}");
            }
        }
    }

    #[test]
    fn embedding_fixtures() {
        let s2 = seq(2);
        // Single symbols sit at their own position: w_a = a.
        let s5 = seq(5);
        let e = construct_embedding(&s5, &word(5, "3")).unwrap();
        assert_eq!(
            (e.c_u.clone(), e.d_u.clone()),
            (BigUint::from(3u32), BigUint::from(1u32))
        );
        assert_eq!(e.realized_index(), 1);

        // Single-block case: u = 11 is α = (0,1), so c_u is the second basis
        // start itself and d_u is the bare in-window difference.
        let e = construct_embedding(&s2, &word(2, "11")).unwrap();
        assert_eq!(e.c_u, BigUint::from(7u32));
        assert_eq!(e.d_u, BigUint::from(1u32));
        assert_eq!(e.realized_index(), 1);

        // All-zero word: witnessed by the zero run directly.
        let e = construct_embedding(&s2, &word(2, "00")).unwrap();
        assert!(e.basis.is_none());
        assert!(e.alphas.iter().all(|a| a.value() == 0));
        assert_eq!(e.c_u, BigUint::from(5u32));
        assert_eq!(e.d_u, BigUint::from(1u32));

        // Three blocks for u = 012 over q = 3: α = (1, 2, 0), width 5.
        let s3 = seq(3);
        let e = construct_embedding(&s3, &word(3, "012")).unwrap();
        assert_eq!(
            e.alphas.iter().map(|s| s.value()).collect::<Vec<_>>(),
            [1, 2, 0]
        );
        assert_eq!(e.block_len, 5);
        assert_eq!(e.c_u, BigUint::from(771_297u32));
        assert_eq!(e.d_u, BigUint::from(118_586u32));
        assert_eq!(e.realized_index(), 11);
        assert!(e.realized_index() <= upper_bound_index(s3.base(), 3).unwrap());
    }

    #[test]
    fn embeddings_bound_the_minimal_difference() {
        let s2 = seq(2);
        let base = s2.base();
        for m in 1..=4usize {
            for rank in 0..base.as_u64().pow(m as u32) {
                let u = Word::from_lex_rank(base, m, rank);
                let e = construct_embedding(&s2, &u).unwrap();
                let found = min_difference(&s2, &u).unwrap();
                assert!(
                    BigUint::from(found.d_min) <= e.d_u,
                    "u={u}: d_min={} exceeds constructed d_u={}",
                    found.d_min,
                    e.d_u
                );
                assert!(e.realized_index() <= upper_bound_index(base, m as u64).unwrap());
            }
        }
    }

    #[test]
    fn bound_formulas_match_hand_values() {
        let b2 = PrimeBase::new(2).unwrap();
        let b3 = PrimeBase::new(3).unwrap();
        assert_eq!(upper_bound_index(b2, 4).unwrap(), 24);
        assert_eq!(upper_bound_index(b2, 1).unwrap(), 2);
        assert_eq!(upper_bound_index(b3, 3).unwrap(), 30);
        assert!(matches!(upper_bound_index(b2, 0), Err(Error::ZeroLength)));

        assert_eq!(lower_bound_index(b2, 8, 4).unwrap(), 2);
        assert_eq!(lower_bound_index(b2, 1, 4).unwrap(), 0);
        assert!(lower_bound_index(b3, 6, 4).unwrap() <= upper_bound_index(b3, 6).unwrap());
        assert!(matches!(
            lower_bound_index(b2, 4, 0),
            Err(Error::InvalidParameter { .. })
        ));

        assert_eq!(lower_bound_tm(8).unwrap(), Ratio::from_integer(2));
        assert_eq!(lower_bound_tm(2).unwrap(), Ratio::from_integer(0));
        assert_eq!(lower_bound_tm(16).unwrap(), Ratio::new(11, 2));
        assert_eq!(lower_bound_tm(1).unwrap(), Ratio::from_integer(0));
    }

    /// The integer-comparison lower bound dominates the bracketed rational
    /// one (its log is exact rather than rounded up), and both stay below the
    /// upper bound.
    #[test]
    fn bounds_are_ordered() {
        let b2 = PrimeBase::new(2).unwrap();
        for m in 1..=16u64 {
            let lo = lower_bound_index(b2, m, 4).unwrap();
            let tm = lower_bound_tm(m).unwrap().ceil().to_integer();
            assert!(lo as i64 >= tm, "m={m}: {lo} < {tm}");
            assert!(lo <= upper_bound_index(b2, m).unwrap(), "m={m}");
        }
    }
}

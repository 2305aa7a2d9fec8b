//! m-cyclic words built from exponent words, and the run-length "bad factor"
//! condition equivalent to the cyclic word encountering `phi_k`.
//!
//! An exponent word `w = w_1 w_2 ...` over positive integers drives the block
//! construction `a_1^{w_1} a_2^{w_2} ... a_m^{w_m} a_1^{w_{m+1}} ...`. The bad
//! factor condition asks for a window `x' a_1 ... a_j x''` with
//! `|x'| = |x''| = n`, `n = m - j (mod m)`, exponent sum of the middle at
//! least `k`, `x'_1 >= x''_1`, `x'_n <= x''_n`, and equality at interior
//! positions.

use std::sync::Arc;

use serde::Serialize;

use crate::encounter::encounters;
use crate::formula::make_phi;
use crate::word::{Alphabet, Word};
use crate::{Error, Result};

/// A nonempty sequence of positive integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExponentWord {
    exponents: Vec<u32>,
}

impl ExponentWord {
    pub fn new(exponents: Vec<u32>) -> Result<ExponentWord> {
        if exponents.is_empty() {
            return Err(Error::InvalidArgument("exponent word must be nonempty".into()));
        }
        if exponents.contains(&0) {
            return Err(Error::NonPositiveExponent);
        }
        Ok(ExponentWord { exponents })
    }

    /// Like `new`, additionally enforcing `exponent <= bound` for every entry.
    pub fn bounded(exponents: Vec<u32>, bound: u32) -> Result<ExponentWord> {
        let w = ExponentWord::new(exponents)?;
        w.check_bound(bound)?;
        Ok(w)
    }

    pub fn check_bound(&self, bound: u32) -> Result<()> {
        if let Some(&e) = self.exponents.iter().find(|&&e| e > bound) {
            return Err(Error::ExponentOutOfBounds(e, bound));
        }
        Ok(())
    }

    /// Reads a word over digit letters as exponents, e.g. "212" -> (2, 1, 2).
    pub fn from_digit_word(w: &Word) -> Result<ExponentWord> {
        let exponents = (0..w.len())
            .map(|i| {
                let c = w.letter_at(i).display;
                c.to_digit(10).filter(|&d| d > 0).ok_or(Error::UnknownLetter(c))
            })
            .collect::<Result<Vec<u32>>>()?;
        ExponentWord::new(exponents)
    }

    /// Parses the comma-separated wire format, e.g. "1,2,1".
    pub fn parse(text: &str) -> Result<ExponentWord> {
        let exponents = text
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::InvalidArgument(format!("bad exponent '{s}'")))
            })
            .collect::<Result<Vec<u32>>>()?;
        ExponentWord::new(exponents)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn total(&self) -> usize {
        self.exponents.iter().map(|&e| e as usize).sum()
    }

    pub fn to_csv(&self) -> String {
        self.exponents
            .iter()
            .map(|e| e.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

/// The run-length profile of a word: block values as an exponent word.
pub fn run_length_encode(w: &Word) -> Result<ExponentWord> {
    if w.is_empty() {
        return Err(Error::InvalidArgument("cannot run-length encode the empty word".into()));
    }
    let ids = w.ids();
    let mut exponents = Vec::new();
    let mut run = 1u32;
    for i in 1..ids.len() {
        if ids[i] == ids[i - 1] {
            run += 1;
        } else {
            exponents.push(run);
            run = 1;
        }
    }
    exponents.push(run);
    ExponentWord::new(exponents)
}

/// Builds the m-cyclic word `a_1^{w_1} a_2^{w_2} ...` over the first `m`
/// letters of `alphabet`.
pub fn build_cyclic(m: usize, w: &ExponentWord, alphabet: &Arc<Alphabet>) -> Result<Word> {
    if m < 2 {
        return Err(Error::CyclicTooFew(m, 2));
    }
    if alphabet.size() < m {
        return Err(Error::InvalidArgument(format!(
            "alphabet has {} letters, need {m}",
            alphabet.size()
        )));
    }
    let mut ids = Vec::with_capacity(w.total());
    for (i, &e) in w.exponents().iter().enumerate() {
        let letter = (i % m) as u8;
        ids.extend(std::iter::repeat_n(letter, e as usize));
    }
    Word::from_ids(Arc::clone(alphabet), ids)
}

/// A bad factor `x' a_1 ... a_j x''` of an exponent word.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BadFactorWitness {
    pub start: usize,
    pub n: usize,
    pub j: usize,
    pub alphas: Vec<u32>,
}

/// Scans for the first bad factor in `(start, n, j)` lexicographic order.
///
/// Requires the Lemma hypotheses: exponents bounded by `k + 1` and
/// `m >= k + 2`.
pub fn find_bad_factor(
    w: &ExponentWord,
    k: usize,
    m: usize,
) -> Result<Option<BadFactorWitness>> {
    if m < k + 2 {
        return Err(Error::CyclicTooFew(m, k + 2));
    }
    w.check_bound(k as u32 + 1)?;
    let e = w.exponents();
    let len = e.len();
    for start in 0..len {
        // Window is x' (n letters), middle (j letters), x'' (n letters).
        let max_n = (len - start).saturating_sub(1) / 2;
        for n in 1..=max_n {
            for j in 1..=k {
                if n % m != (m - j) % m {
                    continue;
                }
                if start + 2 * n + j > len {
                    continue;
                }
                let x1 = &e[start..start + n];
                let mid = &e[start + n..start + n + j];
                let x2 = &e[start + n + j..start + 2 * n + j];
                let sum: u32 = mid.iter().sum();
                if (sum as usize) < k {
                    continue;
                }
                if x1[0] < x2[0] || x1[n - 1] > x2[n - 1] {
                    continue;
                }
                // Interior positions 2..=n-1 (1-based) must match exactly.
                if (1..n.saturating_sub(1)).any(|i| x1[i] != x2[i]) {
                    continue;
                }
                return Ok(Some(BadFactorWitness {
                    start,
                    n,
                    j,
                    alphas: mid.to_vec(),
                }));
            }
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LemmaStatus {
    /// Bad factor and encounter agree (both present or both absent).
    Agree,
    /// Encounter without a bad factor: expected near the ends of short finite
    /// prefixes, where the witness region is cut off.
    BoundaryInconclusive,
    /// Bad factor without an encounter: the hard direction of the lemma
    /// failed, which is a genuine bug.
    HardFailure,
}

#[derive(Debug, Clone, Serialize)]
pub struct LemmaEntry {
    pub word: String,
    pub bad_factor: Option<BadFactorWitness>,
    pub encounter: bool,
    pub status: LemmaStatus,
}

#[derive(Debug, Clone, Serialize)]
pub struct LemmaReport {
    pub entries: Vec<LemmaEntry>,
    pub hard_failures: usize,
}

/// Cross-validates both directions of the bad-factor characterization on
/// finite words: for each exponent word, compares `find_bad_factor` against an
/// encounter search on the built cyclic word.
pub fn lemma_equivalence_report(
    k: usize,
    m: usize,
    words: &[ExponentWord],
) -> Result<LemmaReport> {
    let phi = make_phi(k)?;
    let alphabet = Alphabet::canonical(m)?;
    let mut entries = Vec::with_capacity(words.len());
    let mut hard_failures = 0;
    for w in words {
        let bad_factor = find_bad_factor(w, k, m)?;
        let cyclic = build_cyclic(m, w, &alphabet)?;
        let encounter = encounters(&cyclic, &phi).is_some();
        let status = match (&bad_factor, encounter) {
            (Some(_), true) | (None, false) => LemmaStatus::Agree,
            (None, true) => LemmaStatus::BoundaryInconclusive,
            (Some(_), false) => {
                hard_failures += 1;
                LemmaStatus::HardFailure
            }
        };
        entries.push(LemmaEntry { word: w.to_csv(), bad_factor, encounter, status });
    }
    Ok(LemmaReport { entries, hard_failures })
}

/// All exponent words over `{1, ..., max_value}` of exactly `len` letters, in
/// lexicographic order.
pub fn all_exponent_words(max_value: u32, len: usize) -> Vec<ExponentWord> {
    let mut out = Vec::new();
    let mut current = vec![1u32; len];
    if len == 0 {
        return out;
    }
    loop {
        out.push(ExponentWord::new(current.clone()).expect("positive exponents"));
        let mut i = len;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if current[i] < max_value {
                current[i] += 1;
                for x in &mut current[i + 1..] {
                    *x = 1;
                }
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn build_cyclic_examples() {
        let a3 = Alphabet::new("012").unwrap();
        let w = ExponentWord::new(vec![1, 2, 1]).unwrap();
        assert_eq!(build_cyclic(3, &w, &a3).unwrap().to_string(), "0112");

        let a4 = Alphabet::new("abcd").unwrap();
        let ones = ExponentWord::new(vec![1; 7]).unwrap();
        assert_eq!(build_cyclic(4, &ones, &a4).unwrap().to_string(), "abcdabc");
    }

    #[test]
    fn cyclic_block_structure() {
        let a5 = Alphabet::canonical(5).unwrap();
        let w = ExponentWord::from_digit_word(&Word::parse_inferred("21222121").unwrap()).unwrap();
        let c = build_cyclic(5, &w, &a5).unwrap();
        assert_eq!(c.len(), w.total());
        // Adjacent blocks always use distinct letters, so run-length encoding
        // recovers the exponent word exactly.
        assert_eq!(run_length_encode(&c).unwrap(), w);
    }

    #[test]
    fn bad_factor_all_ones() {
        let w = ExponentWord::new(vec![1; 7]).unwrap();
        let witness = find_bad_factor(&w, 1, 4).unwrap().unwrap();
        assert_eq!(witness, BadFactorWitness { start: 0, n: 3, j: 1, alphas: vec![1] });
    }

    #[test]
    fn bad_factor_hypotheses_enforced() {
        let w = ExponentWord::new(vec![1, 3, 1]).unwrap();
        assert!(find_bad_factor(&w, 1, 4).is_err()); // exponent 3 > k+1
        let w = ExponentWord::new(vec![1, 1]).unwrap();
        assert!(find_bad_factor(&w, 1, 2).is_err()); // m < k+2
    }

    #[test]
    fn all_ones_has_bad_factor_and_encounter() {
        let w = ExponentWord::new(vec![1; 7]).unwrap();
        let report = lemma_equivalence_report(1, 4, std::slice::from_ref(&w)).unwrap();
        assert_eq!(report.hard_failures, 0);
        assert!(report.entries[0].bad_factor.is_some());
        assert!(report.entries[0].encounter);
    }

    #[test]
    fn exponent_word_enumeration() {
        assert_eq!(all_exponent_words(2, 3).len(), 8);
        assert_eq!(all_exponent_words(3, 2).len(), 9);
        let words = all_exponent_words(2, 2);
        let flat: Vec<Vec<u32>> = words.iter().map(|w| w.exponents().to_vec()).collect();
        assert_eq!(flat, vec![vec![1, 1], vec![1, 2], vec![2, 1], vec![2, 2]]);
    }

    #[test]
    fn parse_and_csv_round_trip() {
        let w = ExponentWord::parse("1,2,1").unwrap();
        assert_eq!(w.to_csv(), "1,2,1");
        assert!(ExponentWord::parse("1,0,1").is_err());
        assert!(ExponentWord::parse("").is_err());
    }
}

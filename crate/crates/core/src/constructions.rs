//! Explicit avoiding-word constructions: the 8-uniform code morphism for
//! `phi_1`, the `rho` fixed point for `phi_2`, the `g(d_k(.))` family with its
//! `c`-insertion variants, and a dispatcher that produces a verified avoider
//! for any `k`.

use std::sync::Arc;

use itertools::Itertools;
use rand::Rng;
use serde::Serialize;

use crate::cyclic::{build_cyclic, ExponentWord};
use crate::encounter::avoids;
use crate::formula::{make_phi, Formula};
use crate::word::{square_free_stream, Alphabet, Morphism, Word};
use crate::{Error, Result};

/// The code morphism f(0)=11112122, f(1)=12112222, f(2)=21111222. Images of
/// square-free ternary words have no bad factor for k=1, m=4.
pub fn f_phi1(v: &Word) -> Result<Word> {
    if !v.is_square_free() {
        return Err(Error::InvalidArgument(
            "f_phi1 requires a square-free ternary word".into(),
        ));
    }
    let target = Alphabet::new("12")?;
    let f = Morphism::new(
        v.alphabet(),
        &target,
        &[('0', "11112122"), ('1', "12112222"), ('2', "21111222")],
    )?;
    f.apply(v)
}

/// `rho^iterations(2)` for `rho(1)=22, rho(2)=21`; length `2^iterations`, and
/// each iterate is a prefix of the next.
pub fn rho_prefix(iterations: u32) -> Result<Word> {
    let bin = Alphabet::new("12")?;
    let rho = Morphism::new(&bin, &bin, &[('1', "22"), ('2', "21")])?;
    let mut w = Word::parse(&bin, "2")?;
    for _ in 0..iterations {
        w = rho.apply(&w)?;
    }
    Ok(w)
}

/// The length-`n` prefix of `rho^inf(2)`.
pub fn rho_stream(n: usize) -> Result<Word> {
    if n == 0 {
        return Err(Error::InvalidArgument("rho_stream needs n >= 1".into()));
    }
    let mut iterations = 0;
    while (1usize << iterations) < n {
        iterations += 1;
    }
    Ok(rho_prefix(iterations as u32)?.factor(0, n))
}

/// `g(d_k(w))`: blow up each letter to `i^{k+1}`, then interleave `ab` after
/// every letter. Length `(3k+3)|w|`.
pub fn gdk(w: &Word, k: usize) -> Result<Word> {
    if k == 0 {
        return Err(Error::InvalidArgument("gdk needs k >= 1".into()));
    }
    let tern = Alphabet::new("012")?;
    if w.alphabet() != &tern {
        return Err(Error::AlphabetMismatch);
    }
    let images: Vec<String> = ["0", "1", "2"].iter().map(|i| i.repeat(k + 1)).collect();
    let dk = Morphism::new(
        &tern,
        &tern,
        &[('0', &images[0]), ('1', &images[1]), ('2', &images[2])],
    )?;
    let ext = Alphabet::new("012ab")?;
    let g = Morphism::new(&tern, &ext, &[('0', "0ab"), ('1', "1ab"), ('2', "2ab")])?;
    g.apply(&dk.apply(w)?)
}

/// Inserts `c` after positions `period, 2*period, ...`; a trailing partial
/// block gets no `c`. The letter `c` must be fresh.
pub fn insert_periodic(u: &Word, period: usize, c: char) -> Result<Word> {
    if period < 1 {
        return Err(Error::InvalidArgument("period must be positive".into()));
    }
    let extended = extend_alphabet(u.alphabet(), c)?;
    let c_id = extended.letter(c).expect("just added").id;
    let mut ids = Vec::with_capacity(u.len() + u.len() / period);
    for (i, &id) in u.ids().iter().enumerate() {
        ids.push(id);
        if (i + 1) % period == 0 && i + 1 < u.len() {
            ids.push(c_id);
        }
    }
    // A full final block still gets its c.
    if !u.is_empty() && u.len().is_multiple_of(period) {
        ids.push(c_id);
    }
    Word::from_ids(extended, ids)
}

/// Scans left to right and inserts `c` after the t-th occurrence of the letter
/// `b` iff `t mod k` is 0 or 1.
pub fn insert_after_b(u: &Word, k: usize, c: char) -> Result<Word> {
    if k < 2 {
        return Err(Error::InvalidArgument("insert_after_b needs k >= 2".into()));
    }
    let b = u
        .alphabet()
        .letter('b')
        .ok_or_else(|| Error::InvalidArgument("word has no letter 'b'".into()))?;
    if !u.ids().contains(&b.id) {
        return Err(Error::InvalidArgument("word has no occurrence of 'b'".into()));
    }
    let extended = extend_alphabet(u.alphabet(), c)?;
    let c_id = extended.letter(c).expect("just added").id;
    let mut ids = Vec::with_capacity(u.len() * 2);
    let mut b_count = 0usize;
    for &id in u.ids() {
        ids.push(id);
        if id == b.id {
            b_count += 1;
            if b_count.is_multiple_of(k) || b_count % k == 1 {
                ids.push(c_id);
            }
        }
    }
    Word::from_ids(extended, ids)
}

/// The 7-letter route for `phi_5`: double each letter, then `g': i -> iabcd`;
/// length `10|w|`.
///
/// Doubling (not tripling) is essential: a tripled letter yields the factor
/// `(iabcd)^3 = x y1..y5 x` with `x = iabcd`, an immediate encounter of
/// `phi_5`. With runs of length exactly 2 the run-length argument from the
/// `phi_{3k}` construction goes through, since the middle of the occurrence
/// carries exactly one plain letter.
pub fn g_prime_d2(w: &Word) -> Result<Word> {
    let tern = Alphabet::new("012")?;
    if w.alphabet() != &tern {
        return Err(Error::AlphabetMismatch);
    }
    let d2 = Morphism::new(&tern, &tern, &[('0', "00"), ('1', "11"), ('2', "22")])?;
    let ext = Alphabet::new("012abcd")?;
    let g = Morphism::new(&tern, &ext, &[('0', "0abcd"), ('1', "1abcd"), ('2', "2abcd")])?;
    g.apply(&d2.apply(w)?)
}

/// Words obtained from `u` over `{1,2}` by replacing exactly `count` of its
/// 2's with 3's. Enumerates exhaustively when there are at most `cap` subsets,
/// otherwise samples `cap` distinct subsets uniformly.
pub fn mutate_2to3(
    u: &Word,
    count: usize,
    cap: usize,
    rng: &mut impl Rng,
) -> Result<Vec<Word>> {
    let two = u
        .alphabet()
        .letter('2')
        .ok_or_else(|| Error::InvalidArgument("word has no letter '2'".into()))?;
    let positions: Vec<usize> = u
        .ids()
        .iter()
        .enumerate()
        .filter(|&(_, &id)| id == two.id)
        .map(|(i, _)| i)
        .collect();
    if count > positions.len() {
        return Err(Error::InvalidArgument(format!(
            "cannot replace {count} of {} 2's",
            positions.len()
        )));
    }
    let target = Alphabet::new("123")?;
    let base = Word::parse(&target, &u.to_string())?;
    let three = target.letter('3').expect("in target").id;

    let apply = |subset: &[usize]| -> Word {
        let mut ids = base.ids().to_vec();
        for &i in subset {
            ids[positions[i]] = three;
        }
        Word::from_ids(Arc::clone(&target), ids).expect("ids in range")
    };

    let total = binomial_capped(positions.len(), count, cap);
    if total <= cap {
        Ok((0..positions.len())
            .combinations(count)
            .map(|subset| apply(&subset))
            .collect())
    } else {
        let mut seen = std::collections::HashSet::new();
        let mut out = Vec::with_capacity(cap);
        while out.len() < cap {
            let mut subset = rand::seq::index::sample(rng, positions.len(), count).into_vec();
            subset.sort_unstable();
            if seen.insert(subset.clone()) {
                out.push(apply(&subset));
            }
        }
        Ok(out)
    }
}

fn binomial_capped(n: usize, k: usize, cap: usize) -> usize {
    let mut result = 1usize;
    for i in 0..k.min(n - k) {
        result = result.saturating_mul(n - i) / (i + 1);
        if result > cap {
            return cap + 1;
        }
    }
    result
}

fn extend_alphabet(alphabet: &Arc<Alphabet>, c: char) -> Result<Arc<Alphabet>> {
    let mut chars: String = alphabet.letters().map(|l| l.display).collect();
    if chars.contains(c) {
        return Err(Error::DuplicateLetter(c));
    }
    chars.push(c);
    Alphabet::new(&chars)
}

#[derive(Debug, Clone, Serialize)]
pub struct Provenance {
    pub base: String,
    pub chain: Vec<String>,
}

/// A construction result: the word, the formula it is claimed (and verified)
/// to avoid, and how it was built.
#[derive(Debug, Clone)]
pub struct ConstructionOutput {
    pub word: Word,
    pub target_formula: Formula,
    pub k: usize,
    pub alphabet_size: usize,
    pub provenance: Provenance,
}

impl Serialize for ConstructionOutput {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct View<'a> {
            word: String,
            k: usize,
            formula: String,
            alphabet_size: usize,
            provenance: &'a Provenance,
        }
        View {
            word: self.word.to_string(),
            k: self.k,
            formula: self.target_formula.to_string(),
            alphabet_size: self.alphabet_size,
            provenance: &self.provenance,
        }
        .serialize(s)
    }
}

/// Builds a word avoiding `phi_k` on the smallest alphabet the constructions
/// reach: 4 for k=1, 5 for k=2 and k=3K, 6 for k=3K+1 and k=3K+2 (K>=2), and
/// 7 for k=5. The output is re-verified with the encounter engine before
/// being returned.
pub fn build_avoider(k: usize, base_len: usize) -> Result<ConstructionOutput> {
    if k == 0 || base_len == 0 {
        return Err(Error::InvalidArgument("build_avoider needs k >= 1 and base_len >= 1".into()));
    }
    let (word, alphabet_size, provenance) = match k {
        1 => {
            let v = square_free_stream(base_len)?;
            let fv = f_phi1(&v)?;
            let exps = ExponentWord::from_digit_word(&fv)?;
            exps.check_bound(2)?;
            let word = build_cyclic(4, &exps, &Alphabet::canonical(4)?)?;
            (
                word,
                4,
                Provenance {
                    base: v.to_string(),
                    chain: vec![
                        format!("square_free_stream({base_len})"),
                        "f_phi1".into(),
                        "exponent_word".into(),
                        "cyclic(m=4)".into(),
                    ],
                },
            )
        }
        2 => {
            let prefix = rho_stream(base_len)?;
            let exps = ExponentWord::from_digit_word(&prefix)?;
            exps.check_bound(3)?;
            let word = build_cyclic(5, &exps, &Alphabet::canonical(5)?)?;
            (
                word,
                5,
                Provenance {
                    base: prefix.to_string(),
                    chain: vec![
                        format!("rho_stream({base_len})"),
                        "exponent_word".into(),
                        "cyclic(m=5)".into(),
                    ],
                },
            )
        }
        5 => {
            let v = square_free_stream(base_len)?;
            let word = g_prime_d2(&v)?;
            (
                word,
                7,
                Provenance {
                    base: v.to_string(),
                    chain: vec![format!("square_free_stream({base_len})"), "g_prime_d2".into()],
                },
            )
        }
        _ if k.is_multiple_of(3) => {
            let big_k = k / 3;
            let v = square_free_stream(base_len)?;
            let word = gdk(&v, big_k)?;
            (
                word,
                5,
                Provenance {
                    base: v.to_string(),
                    chain: vec![format!("square_free_stream({base_len})"), format!("gdk(k={big_k})")],
                },
            )
        }
        _ if k % 3 == 1 => {
            let big_k = (k - 1) / 3;
            let v = square_free_stream(base_len)?;
            let word = insert_periodic(&gdk(&v, big_k)?, 3 * big_k, 'c')?;
            (
                word,
                6,
                Provenance {
                    base: v.to_string(),
                    chain: vec![
                        format!("square_free_stream({base_len})"),
                        format!("gdk(k={big_k})"),
                        format!("insert_periodic(period={})", 3 * big_k),
                    ],
                },
            )
        }
        _ => {
            let big_k = (k - 2) / 3;
            if big_k < 2 {
                return Err(Error::InvalidArgument(format!(
                    "no construction dispatches to k = {k}"
                )));
            }
            let v = square_free_stream(base_len)?;
            let word = insert_after_b(&gdk(&v, big_k)?, big_k, 'c')?;
            (
                word,
                6,
                Provenance {
                    base: v.to_string(),
                    chain: vec![
                        format!("square_free_stream({base_len})"),
                        format!("gdk(k={big_k})"),
                        format!("insert_after_b(k={big_k})"),
                    ],
                },
            )
        }
    };
    let target_formula = make_phi(k)?;
    if !avoids(&word, &target_formula) {
        return Err(Error::VerificationFailed(format!(
            "claimed avoider of phi_{k} encounters it"
        )));
    }
    Ok(ConstructionOutput { word, target_formula, k, alphabet_size, provenance })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn tern(s: &str) -> Word {
        Word::parse(&Alphabet::new("012").unwrap(), s).unwrap()
    }

    #[test]
    fn f_images_match_the_code_table() {
        assert_eq!(f_phi1(&tern("0")).unwrap().to_string(), "11112122");
        assert_eq!(f_phi1(&tern("2")).unwrap().to_string(), "21111222");
        assert_eq!(f_phi1(&tern("01")).unwrap().to_string(), "1111212212112222");
        assert!(f_phi1(&tern("00")).is_err());
    }

    #[test]
    fn f_image_structure() {
        // Every code word has 1 at positions 3 and 4 and 2 at positions 7 and
        // 8 (1-based); the three images have pairwise distinct length-2
        // prefixes and pairwise distinct (5th, 6th) letter pairs.
        let images: Vec<String> = ["0", "1", "2"]
            .iter()
            .map(|c| f_phi1(&tern(c)).unwrap().to_string())
            .collect();
        for img in &images {
            let b: Vec<char> = img.chars().collect();
            assert_eq!((b[2], b[3]), ('1', '1'));
            assert_eq!((b[6], b[7]), ('2', '2'));
        }
        for i in 0..3 {
            for j in i + 1..3 {
                assert_ne!(images[i][..2], images[j][..2]);
                assert_ne!(images[i][4..6], images[j][4..6]);
            }
        }
    }

    #[test]
    fn rho_prefixes() {
        assert_eq!(rho_prefix(0).unwrap().to_string(), "2");
        assert_eq!(rho_prefix(3).unwrap().to_string(), "21222121");
        let p3 = rho_prefix(3).unwrap();
        let p4 = rho_prefix(4).unwrap();
        assert_eq!(p4.len(), 16);
        assert_eq!(p4.factor(0, 8), p3);
    }

    #[test]
    fn gdk_examples() {
        assert_eq!(gdk(&tern("0"), 1).unwrap().to_string(), "0ab0ab");
        assert_eq!(gdk(&tern("01"), 2).unwrap().to_string(), "0ab0ab0ab1ab1ab1ab");
        let w = square_free_stream(10).unwrap();
        assert_eq!(gdk(&w, 1).unwrap().len(), 6 * 10);
    }

    #[test]
    fn insert_periodic_examples() {
        let u = gdk(&tern("0"), 1).unwrap(); // "0ab0ab"
        assert_eq!(insert_periodic(&u, 3, 'c').unwrap().to_string(), "0abc0abc");
        let u9 = Word::parse(&Alphabet::new("012ab").unwrap(), "0ab0ab0ab").unwrap();
        assert_eq!(insert_periodic(&u9, 3, 'c').unwrap().to_string(), "0abc0abc0abc");
        let partial = Word::parse(&Alphabet::new("012ab").unwrap(), "ab").unwrap();
        assert_eq!(insert_periodic(&partial, 3, 'c').unwrap().to_string(), "ab");
        assert!(insert_periodic(&u, 0, 'c').is_err());
    }

    #[test]
    fn insert_after_b_examples() {
        let a = Alphabet::new("012ab").unwrap();
        let u = Word::parse(&a, "0ab0ab").unwrap();
        assert_eq!(insert_after_b(&u, 2, 'c').unwrap().to_string(), "0abc0abc");
        let u = Word::parse(&a, "0ab0ab0ab").unwrap();
        assert_eq!(insert_after_b(&u, 3, 'c').unwrap().to_string(), "0abc0ab0abc");
        assert!(insert_after_b(&u, 1, 'c').is_err());
    }

    #[test]
    fn g_prime_examples() {
        assert_eq!(g_prime_d2(&tern("0")).unwrap().to_string(), "0abcd0abcd");
        assert_eq!(g_prime_d2(&tern("01")).unwrap().len(), 20);
    }

    #[test]
    fn tripling_would_break_phi5() {
        // The naive blow-up i -> i^3 puts (iabcd)^3 in the output, which is a
        // literal phi_5 instance; doubling keeps the word clean.
        let tern_a = Alphabet::new("012").unwrap();
        let ext = Alphabet::new("012abcd").unwrap();
        let g = Morphism::new(
            &tern_a,
            &ext,
            &[('0', "0abcd"), ('1', "1abcd"), ('2', "2abcd")],
        )
        .unwrap();
        let phi5 = make_phi(5).unwrap();
        let tripled = g
            .apply(&Word::parse(&tern_a, "000").unwrap())
            .unwrap();
        assert!(crate::encounter::encounters(&tripled, &phi5).is_some());
        let doubled = g_prime_d2(&tern("010212")).unwrap();
        assert!(crate::encounter::avoids(&doubled, &phi5));
    }

    #[test]
    fn mutate_examples() {
        let bin = Alphabet::new("12").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let u = Word::parse(&bin, "22").unwrap();
        let variants: Vec<String> = mutate_2to3(&u, 1, 64, &mut rng)
            .unwrap()
            .iter()
            .map(|w| w.to_string())
            .collect();
        assert_eq!(variants, ["32", "23"]);

        let u = Word::parse(&bin, "21222121").unwrap();
        let variants = mutate_2to3(&u, 2, 64, &mut rng).unwrap();
        assert_eq!(variants.len(), 10); // C(5, 2)
        for v in &variants {
            assert_eq!(v.len(), u.len());
            let threes = v.to_string().matches('3').count();
            assert_eq!(threes, 2);
        }

        assert!(mutate_2to3(&u, 6, 64, &mut rng).is_err());
    }

    #[test]
    fn mutate_sampling_respects_cap() {
        let u = rho_stream(64).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let variants = mutate_2to3(&u, 8, 16, &mut rng).unwrap();
        assert_eq!(variants.len(), 16);
        let distinct: std::collections::HashSet<String> =
            variants.iter().map(|w| w.to_string()).collect();
        assert_eq!(distinct.len(), 16);
    }

    #[test]
    fn build_avoider_dispatch() {
        let out = build_avoider(3, 6).unwrap();
        assert_eq!(out.alphabet_size, 5);
        let out = build_avoider(4, 6).unwrap();
        assert_eq!(out.alphabet_size, 6);
        let out = build_avoider(1, 6).unwrap();
        assert_eq!(out.alphabet_size, 4);
        assert!(build_avoider(0, 6).is_err());
    }
}

//! Finite words over small explicit alphabets: reversal, factor queries,
//! square-freeness, and letter-to-word morphisms.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::{Error, Result};

/// An ordered alphabet of distinct printable characters.
///
/// Alphabets are explicit values so that words produced by different
/// constructions cannot be silently mixed.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Alphabet {
    chars: Vec<char>,
}

impl Alphabet {
    pub fn new(chars: &str) -> Result<Arc<Alphabet>> {
        let chars: Vec<char> = chars.chars().collect();
        if chars.is_empty() {
            return Err(Error::EmptyAlphabet);
        }
        if chars.len() > u8::MAX as usize {
            return Err(Error::AlphabetTooLarge(chars.len()));
        }
        for (i, c) in chars.iter().enumerate() {
            if chars[..i].contains(c) {
                return Err(Error::DuplicateLetter(*c));
            }
        }
        Ok(Arc::new(Alphabet { chars }))
    }

    /// The alphabet `0 1 ... k-1` written with digits, then lowercase letters.
    pub fn canonical(k: usize) -> Result<Arc<Alphabet>> {
        const POOL: &str = "0123456789abcdefghijklmnopqrstuvwxyz";
        if k == 0 || k > POOL.len() {
            return Err(Error::AlphabetTooLarge(k));
        }
        Alphabet::new(&POOL[..k])
    }

    pub fn size(&self) -> usize {
        self.chars.len()
    }

    pub fn letter(&self, c: char) -> Option<Letter> {
        self.chars
            .iter()
            .position(|&x| x == c)
            .map(|id| Letter { id: id as u8, display: c })
    }

    pub fn letter_by_id(&self, id: u8) -> Option<Letter> {
        self.chars.get(id as usize).map(|&c| Letter { id, display: c })
    }

    pub fn display(&self, id: u8) -> char {
        self.chars[id as usize]
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        self.chars
            .iter()
            .enumerate()
            .map(|(id, &c)| Letter { id: id as u8, display: c })
    }
}

/// A single letter: an interned id plus its display character.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Letter {
    pub id: u8,
    pub display: char,
}

/// A finite word over an explicit alphabet.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word {
    letters: Vec<u8>,
    alphabet: Arc<Alphabet>,
}

impl Word {
    pub fn empty(alphabet: Arc<Alphabet>) -> Word {
        Word { letters: Vec::new(), alphabet }
    }

    pub fn from_ids(alphabet: Arc<Alphabet>, ids: Vec<u8>) -> Result<Word> {
        if let Some(&bad) = ids.iter().find(|&&id| id as usize >= alphabet.size()) {
            return Err(Error::LetterOutOfRange(bad, alphabet.size()));
        }
        Ok(Word { letters: ids, alphabet })
    }

    pub fn parse(alphabet: &Arc<Alphabet>, text: &str) -> Result<Word> {
        let mut letters = Vec::with_capacity(text.len());
        for c in text.chars() {
            match alphabet.letter(c) {
                Some(l) => letters.push(l.id),
                None => return Err(Error::UnknownLetter(c)),
            }
        }
        Ok(Word { letters, alphabet: Arc::clone(alphabet) })
    }

    /// Parses a word, inferring the alphabet from the distinct characters in
    /// order of first occurrence.
    pub fn parse_inferred(text: &str) -> Result<Word> {
        let mut seen = String::new();
        for c in text.chars() {
            if !seen.contains(c) {
                seen.push(c);
            }
        }
        if seen.is_empty() {
            seen.push('0');
        }
        let alphabet = Alphabet::new(&seen)?;
        Word::parse(&alphabet, text)
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn ids(&self) -> &[u8] {
        &self.letters
    }

    pub fn letter_at(&self, i: usize) -> Letter {
        let id = self.letters[i];
        Letter { id, display: self.alphabet.display(id) }
    }

    /// The mirror image `(a_1 a_2 ... a_n)^R = a_n ... a_1`.
    pub fn reverse(&self) -> Word {
        let mut letters = self.letters.clone();
        letters.reverse();
        Word { letters, alphabet: Arc::clone(&self.alphabet) }
    }

    pub fn concat(&self, other: &Word) -> Result<Word> {
        self.check_same_alphabet(other)?;
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Ok(Word { letters, alphabet: Arc::clone(&self.alphabet) })
    }

    pub fn factor(&self, start: usize, len: usize) -> Word {
        Word {
            letters: self.letters[start..start + len].to_vec(),
            alphabet: Arc::clone(&self.alphabet),
        }
    }

    fn check_same_alphabet(&self, other: &Word) -> Result<()> {
        if self.alphabet == other.alphabet {
            Ok(())
        } else {
            Err(Error::AlphabetMismatch)
        }
    }

    /// True iff `u` occurs contiguously in `self`. The empty word is a factor
    /// of everything.
    pub fn is_factor(&self, u: &Word) -> Result<bool> {
        self.check_same_alphabet(u)?;
        Ok(find_all(&self.letters, &u.letters).next().is_some())
    }

    /// All start positions of `u` in `self`, ascending.
    pub fn factor_positions(&self, u: &Word) -> Result<Vec<usize>> {
        self.check_same_alphabet(u)?;
        Ok(find_all(&self.letters, &u.letters).collect())
    }

    /// True iff the word has no factor `uu` with `u` nonempty.
    pub fn is_square_free(&self) -> bool {
        let w = &self.letters;
        let n = w.len();
        for start in 0..n {
            for half in 1..=(n - start) / 2 {
                if w[start..start + half] == w[start + half..start + 2 * half] {
                    return false;
                }
            }
        }
        true
    }

    /// True iff both `u` and its reversal are factors of `self`.
    pub fn is_reversible_in(&self, u: &Word) -> Result<bool> {
        if u.is_empty() {
            return Err(Error::EmptyImage("is_reversible_in".into()));
        }
        Ok(self.is_factor(u)? && self.is_factor(&u.reverse())?)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &id in &self.letters {
            write!(f, "{}", self.alphabet.display(id))?;
        }
        Ok(())
    }
}

/// All start positions of `pat` in `text` (ascending). An empty pattern
/// matches at every position including `text.len()`.
pub(crate) fn find_all<'a>(text: &'a [u8], pat: &'a [u8]) -> impl Iterator<Item = usize> + 'a {
    let n = text.len();
    let m = pat.len();
    (0..=n.saturating_sub(m)).filter(move |&i| i + m <= n && &text[i..i + m] == pat)
}

/// A letter-to-word morphism over a fixed source alphabet.
#[derive(Debug, Clone)]
pub struct Morphism {
    source: Arc<Alphabet>,
    images: HashMap<u8, Word>,
    target: Arc<Alphabet>,
}

impl Morphism {
    /// Builds a morphism from `(source char, image string)` rules. All images
    /// must be nonempty words over `target`.
    pub fn new(
        source: &Arc<Alphabet>,
        target: &Arc<Alphabet>,
        rules: &[(char, &str)],
    ) -> Result<Morphism> {
        let mut images = HashMap::new();
        for &(c, image) in rules {
            let letter = source.letter(c).ok_or(Error::UnknownLetter(c))?;
            let image = Word::parse(target, image)?;
            if image.is_empty() {
                return Err(Error::EmptyImage(c.to_string()));
            }
            images.insert(letter.id, image);
        }
        Ok(Morphism { source: Arc::clone(source), target: Arc::clone(target), images })
    }

    /// Applies the morphism: the concatenation of per-letter images in order.
    pub fn apply(&self, w: &Word) -> Result<Word> {
        if w.alphabet() != &self.source {
            return Err(Error::AlphabetMismatch);
        }
        let mut out = Vec::new();
        for &id in w.ids() {
            let image = self
                .images
                .get(&id)
                .ok_or_else(|| Error::MissingRule(self.source.display(id)))?;
            out.extend_from_slice(image.ids());
        }
        Word::from_ids(Arc::clone(&self.target), out)
    }

    /// Iterates the morphism on `seed` until the result has at least `n`
    /// letters, then truncates. Requires source == target and the morphism to
    /// grow the seed.
    pub fn fixed_point_prefix(&self, seed: &str, n: usize) -> Result<Word> {
        let mut w = Word::parse(&self.source, seed)?;
        while w.len() < n {
            let next = self.apply(&w)?;
            if next.len() <= w.len() {
                return Err(Error::NonExpanding);
            }
            w = next;
        }
        Ok(w.factor(0, n))
    }
}

/// The length-`n` prefix of the fixed point of `0 -> 012, 1 -> 02, 2 -> 1`,
/// a classical square-free ternary stream.
pub fn square_free_stream(n: usize) -> Result<Word> {
    if n == 0 {
        return Err(Error::InvalidArgument("square_free_stream needs n >= 1".into()));
    }
    let ternary = Alphabet::new("012")?;
    let m = Morphism::new(&ternary, &ternary, &[('0', "012"), ('1', "02"), ('2', "1")])?;
    m.fixed_point_prefix("0", n)
}

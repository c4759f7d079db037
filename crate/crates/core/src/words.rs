//! Words over the binary alphabet `{0, 1}` and Lyndon words.
//!
//! Words compare lexicographically with `0 < 1`, a proper prefix being
//! smaller than any of its extensions.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite word in the letters `0` and `1`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub struct Word(Vec<u8>);

impl Word {
    /// Builds a word, rejecting letters other than 0 and 1.
    pub fn new(letters: Vec<u8>) -> Result<Self> {
        if let Some(bad) = letters.iter().find(|&&l| l > 1) {
            return Err(Error::InvalidInput(format!("letter {bad} is not 0 or 1")));
        }
        Ok(Word(letters))
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub(crate) fn from_letters_unchecked(letters: Vec<u8>) -> Self {
        Word(letters)
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// Nonempty proper right factors, longest first.
    pub fn proper_suffixes(&self) -> impl Iterator<Item = &[u8]> {
        (1..self.0.len()).map(move |i| &self.0[i..])
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &l in &self.0 {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"")
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(Error::InvalidInput(format!(
                    "word `{s}` contains `{other}`; only 0 and 1 are allowed"
                ))),
            })
            .collect::<Result<Vec<u8>>>()
            .map(Word)
    }
}

/// A validated Lyndon word.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct LyndonWord(Word);

impl LyndonWord {
    pub fn new(word: Word) -> Result<Self> {
        if is_lyndon(&word)? {
            Ok(LyndonWord(word))
        } else {
            Err(Error::InvalidInput(format!("`{word}` is not a Lyndon word")))
        }
    }

    pub fn word(&self) -> &Word {
        &self.0
    }

    /// The weight, i.e. the number of letters.
    pub fn weight(&self) -> usize {
        self.0.len()
    }

    pub fn is_letter(&self) -> bool {
        self.0.len() == 1
    }

    pub fn zero() -> Self {
        LyndonWord(Word(vec![0]))
    }

    pub fn one() -> Self {
        LyndonWord(Word(vec![1]))
    }

    pub(crate) fn from_word_unchecked(word: Word) -> Self {
        LyndonWord(word)
    }
}

impl fmt::Display for LyndonWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl fmt::Debug for LyndonWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

impl FromStr for LyndonWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        LyndonWord::new(s.parse()?)
    }
}

impl TryFrom<String> for LyndonWord {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<LyndonWord> for String {
    fn from(w: LyndonWord) -> String {
        w.to_string()
    }
}

/// True iff `w` is strictly smaller than each of its nonempty proper right factors.
pub fn is_lyndon(w: &Word) -> Result<bool> {
    if w.is_empty() {
        return Err(Error::InvalidInput("the empty word has no Lyndon status".into()));
    }
    let letters = w.letters();
    Ok(w.proper_suffixes().all(|suffix| letters < suffix))
}

/// All Lyndon words of length at most `max_len`, in increasing lexicographic order.
///
/// Uses Duval's successor scheme, which visits Lyndon words in order.
pub fn lyndon_words(max_len: usize) -> Vec<LyndonWord> {
    let mut out = Vec::new();
    if max_len == 0 {
        return out;
    }
    let mut w: Vec<u8> = vec![0];
    loop {
        out.push(LyndonWord(Word(w.clone())));
        let base = w.clone();
        while w.len() < max_len {
            let next = base[w.len() % base.len()];
            w.push(next);
        }
        while w.last() == Some(&1) {
            w.pop();
        }
        match w.last_mut() {
            Some(last) => *last = 1,
            None => break,
        }
    }
    out
}

/// Lyndon words of exactly the given length.
pub fn lyndon_words_of_length(len: usize) -> Vec<LyndonWord> {
    lyndon_words(len)
        .into_iter()
        .filter(|w| w.weight() == len)
        .collect()
}

/// Standard factorization `w = uv` with `v` the smallest proper right factor.
///
/// For a Lyndon word the smallest right factor is also its longest proper
/// Lyndon suffix, and both factors are Lyndon.
pub fn standard_factorization(w: &LyndonWord) -> Result<(LyndonWord, LyndonWord)> {
    if w.is_letter() {
        return Err(Error::InvalidInput(format!(
            "the letter `{w}` has no standard factorization"
        )));
    }
    let letters = w.word().letters();
    let split = (1..letters.len())
        .min_by(|&i, &j| letters[i..].cmp(&letters[j..]))
        .expect("length >= 2");
    let u = Word(letters[..split].to_vec());
    let v = Word(letters[split..].to_vec());
    debug_assert!(is_lyndon(&u).unwrap() && is_lyndon(&v).unwrap());
    Ok((LyndonWord(u), LyndonWord(v)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn lw(s: &str) -> LyndonWord {
        s.parse().unwrap()
    }

    /// Brute-force right-factor scan, kept independent of `is_lyndon`.
    fn brute_lyndon(letters: &[u8]) -> bool {
        (1..letters.len()).all(|i| {
            let suffix = &letters[i..];
            // explicit lexicographic comparison with prefix-smaller rule
            for k in 0..letters.len().min(suffix.len()) {
                if letters[k] != suffix[k] {
                    return letters[k] < suffix[k];
                }
            }
            letters.len() < suffix.len()
        })
    }

    fn all_words(len: usize) -> Vec<Word> {
        (0..1u32 << len)
            .map(|bits| Word((0..len).map(|i| ((bits >> (len - 1 - i)) & 1) as u8).collect()))
            .collect()
    }

    #[test]
    fn lyndon_examples() {
        assert!(is_lyndon(&w("01")).unwrap());
        assert!(!is_lyndon(&w("10")).unwrap());
        assert!(!is_lyndon(&w("0101")).unwrap());
        assert!(is_lyndon(&w("0")).unwrap());
        assert!(is_lyndon(&w("1")).unwrap());
        assert!(is_lyndon(&Word::default()).is_err());
    }

    #[test]
    fn lyndon_agrees_with_brute_force_to_length_8() {
        for len in 1..=8 {
            for word in all_words(len) {
                assert_eq!(is_lyndon(&word).unwrap(), brute_lyndon(word.letters()), "{word}");
            }
        }
    }

    #[test]
    fn enumeration_to_length_4_matches_known_order() {
        let got: Vec<String> = lyndon_words(4).iter().map(|w| w.to_string()).collect();
        assert_eq!(got, ["0", "0001", "001", "0011", "01", "011", "0111", "1"]);
        let got: Vec<String> = lyndon_words(1).iter().map(|w| w.to_string()).collect();
        assert_eq!(got, ["0", "1"]);
    }

    #[test]
    fn enumeration_counts_match_filter() {
        for len in 1..=9 {
            let brute = all_words(len).into_iter().filter(|w| brute_lyndon(w.letters())).count();
            assert_eq!(lyndon_words_of_length(len).len(), brute, "length {len}");
        }
        assert_eq!(lyndon_words_of_length(5).len(), 6);
    }

    #[test]
    fn enumeration_is_strictly_increasing_and_closed_under_factorization() {
        let words = lyndon_words(8);
        assert!(words.windows(2).all(|p| p[0] < p[1]));
        for word in words.iter().filter(|w| !w.is_letter()) {
            let (u, v) = standard_factorization(word).unwrap();
            assert!(words.binary_search(&u).is_ok());
            assert!(words.binary_search(&v).is_ok());
            assert!(u < v);
            assert_eq!(&u.word().concat(v.word()), word.word());
        }
    }

    #[test]
    fn factorization_examples() {
        let f = |s: &str| {
            let (u, v) = standard_factorization(&lw(s)).unwrap();
            (u.to_string(), v.to_string())
        };
        assert_eq!(f("0011"), ("0".into(), "011".into()));
        assert_eq!(f("0001"), ("0".into(), "001".into()));
        assert_eq!(f("01"), ("0".into(), "1".into()));
        assert_eq!(f("011"), ("01".into(), "1".into()));
        assert_eq!(f("0111"), ("011".into(), "1".into()));
        assert!(standard_factorization(&lw("0")).is_err());
    }

    #[test]
    fn parse_rejects_bad_input() {
        assert!("012".parse::<Word>().is_err());
        assert!("10".parse::<LyndonWord>().is_err());
        assert!(Word::new(vec![0, 2]).is_err());
    }
}

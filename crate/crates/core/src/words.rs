//! Words over explicit alphabets, plus the periodicity toolbox used by the
//! rest of the crate: k-power detection, primitive roots, conjugacy
//! equations, internal-factor roots, and the Fine–Wilf bound.

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::error::{Error, Result};

#[derive(Debug)]
struct Inner {
    symbols: Vec<String>,
    index: HashMap<String, u8>,
    single_char: bool,
}

/// An ordered set of distinct symbols. Clones share the backing storage, so
/// every [`Word`] can carry a handle to its alphabet for free.
///
/// Symbol order matters: enumeration and tie-breaking throughout the crate
/// follow the order the symbols were given in.
#[derive(Clone)]
pub struct Alphabet(Arc<Inner>);

impl Alphabet {
    /// Builds an alphabet from distinct symbols, in the given order.
    pub fn new<I, S>(symbols: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let symbols: Vec<String> = symbols.into_iter().map(Into::into).collect();
        if symbols.is_empty() {
            return Err(Error::EmptyAlphabet);
        }
        if symbols.len() > 256 {
            return Err(Error::AlphabetTooLarge);
        }
        let mut index = HashMap::with_capacity(symbols.len());
        for (i, sym) in symbols.iter().enumerate() {
            if sym.is_empty() || sym.chars().any(char::is_whitespace) {
                return Err(Error::BadSymbol(sym.clone()));
            }
            if index.insert(sym.clone(), i as u8).is_some() {
                return Err(Error::DuplicateSymbol(sym.clone()));
            }
        }
        let single_char = symbols.iter().all(|s| s.chars().count() == 1);
        Ok(Alphabet(Arc::new(Inner {
            symbols,
            index,
            single_char,
        })))
    }

    /// One symbol per character: `from_chars("ab")` is the alphabet {a, b}.
    pub fn from_chars(s: &str) -> Result<Self> {
        Self::new(s.chars().map(String::from))
    }

    pub fn len(&self) -> usize {
        self.0.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction rejects empty alphabets
    }

    /// All symbols consist of a single character, so words print without
    /// separators.
    pub fn is_single_char(&self) -> bool {
        self.0.single_char
    }

    pub fn symbols(&self) -> impl Iterator<Item = &str> {
        self.0.symbols.iter().map(String::as_str)
    }

    pub fn symbol(&self, letter: u8) -> &str {
        &self.0.symbols[letter as usize]
    }

    pub fn index_of(&self, symbol: &str) -> Option<u8> {
        self.0.index.get(symbol).copied()
    }

    /// Two alphabets are compatible when they list the same symbols in the
    /// same order. Clones are compared by pointer first.
    pub fn compatible(&self, other: &Alphabet) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.symbols == other.0.symbols
    }

    /// Wraps letter indices into a word. Panics on out-of-range indices;
    /// callers produce indices from this alphabet, so a bad one is a bug.
    pub fn word_from_letters(&self, letters: Vec<u8>) -> Word {
        let n = self.len();
        assert!(
            letters.iter().all(|&c| (c as usize) < n),
            "letter index out of range for alphabet of size {n}"
        );
        Word {
            alphabet: self.clone(),
            letters,
        }
    }

    pub fn empty_word(&self) -> Word {
        Word {
            alphabet: self.clone(),
            letters: Vec::new(),
        }
    }

    /// Parses a word written one character per letter, e.g. `"abba"`.
    pub fn word_from_str(&self, s: &str) -> Result<Word> {
        let mut letters = Vec::with_capacity(s.len());
        for ch in s.chars() {
            let sym = ch.to_string();
            let c = self.index_of(&sym).ok_or(Error::UnknownSymbol(sym))?;
            letters.push(c);
        }
        Ok(Word {
            alphabet: self.clone(),
            letters,
        })
    }

    /// Parses a word written as whitespace-separated symbols, e.g. `"a b a"`.
    pub fn word_from_tokens(&self, s: &str) -> Result<Word> {
        let mut letters = Vec::new();
        for tok in s.split_whitespace() {
            let c = self
                .index_of(tok)
                .ok_or_else(|| Error::UnknownSymbol(tok.to_string()))?;
            letters.push(c);
        }
        Ok(Word {
            alphabet: self.clone(),
            letters,
        })
    }
}

impl PartialEq for Alphabet {
    fn eq(&self, other: &Self) -> bool {
        self.compatible(other)
    }
}

impl Eq for Alphabet {}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Alphabet{:?}", self.0.symbols)
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sep = if self.is_single_char() { "" } else { " " };
        let mut first = true;
        for sym in self.symbols() {
            if !first {
                f.write_str(sep)?;
            }
            f.write_str(sym)?;
            first = false;
        }
        Ok(())
    }
}

/// A finite word: a sequence of letters of one [`Alphabet`].
///
/// Equality and hashing compare the *symbol* sequences, so words over
/// distinct but identical alphabets compare equal, and words spelling the
/// same letters over differently-ordered alphabets do too.
#[derive(Clone)]
pub struct Word {
    alphabet: Alphabet,
    letters: Vec<u8>,
}

impl Word {
    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// The letters as alphabet indices.
    pub fn letters(&self) -> &[u8] {
        &self.letters
    }

    /// The letter at 1-based position `i`.
    pub fn letter(&self, i: usize) -> Result<u8> {
        if i == 0 || i > self.letters.len() {
            return Err(Error::FactorOutOfRange {
                i,
                j: i,
                len: self.letters.len(),
            });
        }
        Ok(self.letters[i - 1])
    }

    /// The factor from position `i` through `j`, 1-based and inclusive.
    /// `factor(i, i-1)` is the empty word, so prefixes and suffixes of
    /// length 0 are expressible.
    pub fn factor(&self, i: usize, j: usize) -> Result<Word> {
        let n = self.letters.len();
        if i == 0 || j + 1 < i || j > n {
            return Err(Error::FactorOutOfRange { i, j, len: n });
        }
        Ok(Word {
            alphabet: self.alphabet.clone(),
            letters: self.letters[i - 1..j].to_vec(),
        })
    }

    pub fn prefix(&self, len: usize) -> Result<Word> {
        self.factor(1, len)
    }

    pub fn suffix(&self, len: usize) -> Result<Word> {
        let n = self.letters.len();
        if len > n {
            return Err(Error::FactorOutOfRange {
                i: n + 1 - len,
                j: n,
                len: n,
            });
        }
        self.factor(n - len + 1, n)
    }

    fn assert_compatible(&self, other: &Word) {
        assert!(
            self.alphabet.compatible(&other.alphabet),
            "words from incompatible alphabets"
        );
    }

    pub fn concat(&self, other: &Word) -> Word {
        self.assert_compatible(other);
        let mut letters = Vec::with_capacity(self.letters.len() + other.letters.len());
        letters.extend_from_slice(&self.letters);
        letters.extend_from_slice(&other.letters);
        Word {
            alphabet: self.alphabet.clone(),
            letters,
        }
    }

    pub fn repeat(&self, times: usize) -> Word {
        Word {
            alphabet: self.alphabet.clone(),
            letters: self.letters.repeat(times),
        }
    }

    pub fn starts_with(&self, other: &Word) -> bool {
        self.assert_compatible(other);
        self.letters.starts_with(&other.letters)
    }

    pub fn ends_with(&self, other: &Word) -> bool {
        self.assert_compatible(other);
        self.letters.ends_with(&other.letters)
    }

    /// How many times `pattern` occurs as a factor (occurrences may overlap).
    pub fn occurrences(&self, pattern: &Word) -> Result<usize> {
        if !self.alphabet.compatible(&pattern.alphabet) {
            return Err(Error::AlphabetMismatch);
        }
        if pattern.is_empty() {
            return Err(Error::EmptyPattern);
        }
        let (w, u) = (&self.letters, &pattern.letters);
        if u.len() > w.len() {
            return Ok(0);
        }
        Ok((0..=w.len() - u.len())
            .filter(|&q| w[q..q + u.len()] == u[..])
            .count())
    }

    /// Leftmost occurrence of a `k`-th power, shortest root first among
    /// powers starting at the same position. `start` in the witness is
    /// 1-based. Requires `k >= 2`.
    pub fn find_k_power(&self, k: usize) -> Option<PowerWitness> {
        assert!(k >= 2, "powers are only meaningful for k >= 2");
        let (start, period) = find_k_power_in(&self.letters, k)?;
        let root = Word {
            alphabet: self.alphabet.clone(),
            letters: self.letters[start..start + period].to_vec(),
        };
        Some(PowerWitness {
            root,
            exponent: k,
            start: start + 1,
        })
    }

    pub fn is_k_power_free(&self, k: usize) -> bool {
        self.find_k_power(k).is_none()
    }

    /// The shortest word `t` with `self = t^e`; returns `(t, e)`.
    pub fn primitive_root(&self) -> Result<(Word, usize)> {
        if self.is_empty() {
            return Err(Error::EmptyWord);
        }
        let w = &self.letters;
        let n = w.len();
        for d in 1..=n {
            if n.is_multiple_of(d) && (d..n).all(|q| w[q] == w[q - d]) {
                let root = Word {
                    alphabet: self.alphabet.clone(),
                    letters: w[..d].to_vec(),
                };
                return Ok((root, n / d));
            }
        }
        unreachable!("d = n always divides the word evenly")
    }

    pub fn is_primitive(&self) -> Result<bool> {
        Ok(self.primitive_root()?.1 == 1)
    }
}

impl PartialEq for Word {
    fn eq(&self, other: &Self) -> bool {
        if Arc::ptr_eq(&self.alphabet.0, &other.alphabet.0)
            || self.alphabet.0.symbols == other.alphabet.0.symbols
        {
            return self.letters == other.letters;
        }
        self.letters.len() == other.letters.len()
            && self
                .letters
                .iter()
                .zip(&other.letters)
                .all(|(&a, &b)| self.alphabet.symbol(a) == other.alphabet.symbol(b))
    }
}

impl Eq for Word {}

impl Hash for Word {
    fn hash<H: Hasher>(&self, state: &mut H) {
        for &c in &self.letters {
            self.alphabet.symbol(c).hash(state);
        }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sep = if self.alphabet.is_single_char() {
            ""
        } else {
            " "
        };
        let mut first = true;
        for &c in &self.letters {
            if !first {
                f.write_str(sep)?;
            }
            f.write_str(self.alphabet.symbol(c))?;
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

/// A located power occurrence: `root^exponent` starts at 1-based `start`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerWitness {
    pub root: Word,
    pub exponent: usize,
    pub start: usize,
}

impl PowerWitness {
    /// Total number of letters the power occupies.
    pub fn span(&self) -> usize {
        self.root.len() * self.exponent
    }
}

/// Scans for the leftmost k-th power on raw letters; returns the 0-based
/// start and the root length.
pub(crate) fn find_k_power_in(w: &[u8], k: usize) -> Option<(usize, usize)> {
    let n = w.len();
    for start in 0..n {
        let max_p = (n - start) / k;
        for p in 1..=max_p {
            let end = start + k * p;
            if w[start..end - p]
                .iter()
                .zip(&w[start + p..end])
                .all(|(a, b)| a == b)
            {
                return Some((start, p));
            }
        }
    }
    None
}

/// True when a k-th power ends exactly at the last letter of `w`. Used by
/// the enumerator to test one freshly appended letter in isolation.
pub(crate) fn k_power_ends_at(w: &[u8], k: usize) -> bool {
    let n = w.len();
    'period: for p in 1..=n / k {
        let base = n - k * p;
        // Compare from the tail: a mismatch involving the newest letter is
        // most likely, and it shows up first this way.
        let mut q = n - p;
        while q > base {
            q -= 1;
            if w[q] != w[q + p] {
                continue 'period;
            }
        }
        return true;
    }
    false
}

/// Solution of the conjugacy equation `v u = u w`: words `r, s` and a count
/// `n` with `v = rs`, `w = sr` and `u = (rs)^n r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Conjugacy {
    pub r: Word,
    pub s: Word,
    pub n: usize,
}

/// Solves `v u = u w` for non-empty `v`. Among the valid `(r, s, n)` triples
/// the one with the smallest `n` is returned; `None` when the equation does
/// not hold (or `v` is empty, which makes every split degenerate).
pub fn solve_conjugacy(u: &Word, v: &Word, w: &Word) -> Option<Conjugacy> {
    u.assert_compatible(v);
    u.assert_compatible(w);
    if v.is_empty() || v.len() != w.len() {
        return None;
    }
    if v.concat(u) != u.concat(w) {
        return None;
    }
    // vu = uw forces u to be an alternation (rs)^n r with v = rs; the split
    // point of v is |u| mod |v|, except that an exact multiple allows the
    // shorter alternation r = v, s = empty, n = |u|/|v| - 1.
    let (r, s, n) = if u.len() >= v.len() && u.len().is_multiple_of(v.len()) {
        (v.clone(), v.alphabet.empty_word(), u.len() / v.len() - 1)
    } else {
        let cut = u.len() % v.len();
        (
            v.factor(1, cut).expect("cut < |v|"),
            v.factor(cut + 1, v.len()).expect("cut < |v|"),
            u.len() / v.len(),
        )
    };
    let rebuilt = r.concat(&s).repeat(n).concat(&r);
    debug_assert_eq!(rebuilt, *u, "conjugacy reconstruction must reproduce u");
    if rebuilt != *u {
        return None;
    }
    Some(Conjugacy { r, s, n })
}

/// Witness that `v` occurs inside its own square as `v v = x v y`: a
/// primitive word `t` with `x = t^i`, `v = t^(i+j)`, `y = t^j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InternalFactor {
    pub t: Word,
    pub i: usize,
    pub j: usize,
}

/// Decomposes an internal occurrence of `v` in `v^2`. Expects `v v = x v y`
/// with `x, y` non-empty; returns `None` when that premise fails.
pub fn internal_factor_root(v: &Word, x: &Word, y: &Word) -> Option<InternalFactor> {
    v.assert_compatible(x);
    v.assert_compatible(y);
    if x.is_empty() || y.is_empty() || x.len() + y.len() != v.len() {
        return None;
    }
    if v.concat(v) != x.concat(v).concat(y) {
        return None;
    }
    // x v = v y is a conjugacy relation with |x| = |y| < |v|, which forces
    // all three words to be powers of the primitive root of x.
    let (t, i) = x.primitive_root().expect("x is non-empty");
    if !v.len().is_multiple_of(t.len()) {
        debug_assert!(false, "v must be a power of the root of x");
        return None;
    }
    let total = v.len() / t.len();
    if total <= i {
        debug_assert!(false, "v must extend x by at least one root");
        return None;
    }
    let j = total - i;
    if t.repeat(total) != *v || t.repeat(j) != *y {
        debug_assert!(false, "root reconstruction must reproduce v and y");
        return None;
    }
    Some(InternalFactor { t, i, j })
}

fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Length from which a word with periods `|x|` and `|y|` is forced down to
/// period `gcd(|x|, |y|)`: returns `|x| + |y| - gcd(|x|, |y|)`.
pub fn fine_wilf_bound(x: &Word, y: &Word) -> Result<usize> {
    if x.is_empty() || y.is_empty() {
        return Err(Error::EmptyWord);
    }
    Ok(x.len() + y.len() - gcd(x.len(), y.len()))
}

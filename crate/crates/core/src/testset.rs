//! Enumeration of k-power-free words and of the finite test set that
//! characterizes k-power-freeness of uniform morphisms.
//!
//! The test set contains every k-power-free word of length up to `k + 1`,
//! plus the longer k-power-free words (up to the bound
//! `k * card(A) + k + 1`) that split as `a0 w1 a1 w2 ... wk ak` where the
//! block lengths pairwise differ by at most one and no block repeats a
//! letter.

use crate::words::{k_power_ends_at, Alphabet, Word};

/// Parameters of the finite test set for one alphabet and exponent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TestSetSpec {
    pub alphabet: Alphabet,
    pub k: usize,
    /// No word of the test set is longer than this.
    pub max_length: usize,
}

impl TestSetSpec {
    pub fn new(alphabet: Alphabet, k: usize) -> Self {
        assert!(k >= 3, "the test-set characterization needs k >= 3");
        let max_length = k * alphabet.len() + k + 1;
        TestSetSpec {
            alphabet,
            k,
            max_length,
        }
    }
}

/// Depth-first enumerator of k-power-free words, shortest first and in
/// alphabet order within one length. Prunes every branch whose last letter
/// completes a k-th power, so the work per emitted word stays proportional
/// to the word length.
pub struct KPowerFreeWords {
    alphabet: Alphabet,
    k: usize,
    max_len: usize,
    target: usize,
    word: Vec<u8>,
    candidate: u8,
    done: bool,
}

/// All k-power-free words over `alphabet` of length 1 through `max_len`.
pub fn k_power_free_words(alphabet: &Alphabet, k: usize, max_len: usize) -> KPowerFreeWords {
    assert!(k >= 2, "powers are only meaningful for k >= 2");
    KPowerFreeWords {
        alphabet: alphabet.clone(),
        k,
        max_len,
        target: 1,
        word: Vec::with_capacity(max_len),
        candidate: 0,
        done: max_len == 0,
    }
}

/// The short part of the test set: k-power-free words of length at most
/// `k + 1`.
pub fn words_u(alphabet: &Alphabet, k: usize) -> KPowerFreeWords {
    k_power_free_words(alphabet, k, k + 1)
}

impl Iterator for KPowerFreeWords {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        if self.done {
            return None;
        }
        let width = self.alphabet.len() as u8;
        loop {
            while self.candidate >= width {
                match self.word.pop() {
                    Some(last) => self.candidate = last + 1,
                    None => {
                        // This length is exhausted; deepen.
                        self.target += 1;
                        if self.target > self.max_len {
                            self.done = true;
                            return None;
                        }
                        self.candidate = 0;
                    }
                }
            }
            self.word.push(self.candidate);
            if k_power_ends_at(&self.word, self.k) {
                self.candidate = self.word.pop().expect("just pushed") + 1;
                continue;
            }
            if self.word.len() == self.target {
                let emitted = self.alphabet.word_from_letters(self.word.clone());
                self.candidate = self.word.pop().expect("just pushed") + 1;
                return Some(emitted);
            }
            self.candidate = 0;
        }
    }
}

/// A successful split `a0 w1 a1 w2 ... wk ak`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VSplit {
    /// The separating letters `a0 ..= ak` (k + 1 of them).
    pub letters: Vec<u8>,
    /// The blocks `w1 ..= wk`; every block has pairwise-distinct letters.
    pub blocks: Vec<Word>,
    /// The block lengths actually used.
    pub pattern: Vec<usize>,
}

/// All admissible block-length patterns in lexicographically ascending
/// order: `r` blocks of length `q + 1` and `k - r` of length `q`, where
/// `|w| - (k + 1) = q * k + r`.
fn length_patterns(m: usize, k: usize) -> Vec<Vec<usize>> {
    let (q, r) = (m / k, m % k);
    let mut patterns: Vec<Vec<usize>> = (0u32..1 << k)
        .filter(|mask| mask.count_ones() as usize == r)
        .map(|mask| (0..k).map(|i| q + ((mask >> i) & 1) as usize).collect())
        .collect();
    patterns.sort();
    patterns
}

/// Splits `w` as `a0 w1 a1 ... wk ak` with near-equal blocks that never
/// repeat a letter, trying block-length patterns in lexicographic order and
/// returning the first that works.
pub fn v_split(w: &Word, k: usize) -> Option<VSplit> {
    assert!(
        (3..=32).contains(&k),
        "the split shape is defined for 3 <= k <= 32"
    );
    let n = w.len();
    if n < k + 1 {
        return None;
    }
    let m = n - (k + 1);
    let letters = w.letters();
    'pattern: for pattern in length_patterns(m, k) {
        let mut split = VSplit {
            letters: Vec::with_capacity(k + 1),
            blocks: Vec::with_capacity(k),
            pattern: pattern.clone(),
        };
        let mut pos = 0;
        split.letters.push(letters[pos]);
        pos += 1;
        for &len in &pattern {
            let block = &letters[pos..pos + len];
            for (i, &c) in block.iter().enumerate() {
                if block[..i].contains(&c) {
                    continue 'pattern;
                }
            }
            split
                .blocks
                .push(w.alphabet().word_from_letters(block.to_vec()));
            pos += len;
            split.letters.push(letters[pos]);
            pos += 1;
        }
        debug_assert_eq!(pos, n);
        return Some(split);
    }
    None
}

/// Membership in the long part of the test set (ignores power-freeness).
pub fn in_v(w: &Word, k: usize) -> bool {
    v_split(w, k).is_some()
}

/// Streaming iterator over the full test set, shortest words first.
pub struct TestSet {
    inner: KPowerFreeWords,
    k: usize,
}

/// The finite test set for `alphabet` and exponent `k >= 3`: a uniform
/// morphism is k-power-free exactly when it maps every word of this set to
/// a k-power-free image.
pub fn test_set(alphabet: &Alphabet, k: usize) -> TestSet {
    let spec = TestSetSpec::new(alphabet.clone(), k);
    TestSet {
        inner: k_power_free_words(alphabet, k, spec.max_length),
        k,
    }
}

impl Iterator for TestSet {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        loop {
            let w = self.inner.next()?;
            if w.len() <= self.k + 1 || in_v(&w, self.k) {
                return Some(w);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binary() -> Alphabet {
        Alphabet::from_chars("ab").unwrap()
    }

    fn counts_by_length(words: impl Iterator<Item = Word>, max_len: usize) -> Vec<usize> {
        let mut counts = vec![0usize; max_len + 1];
        for w in words {
            counts[w.len()] += 1;
        }
        counts.remove(0);
        counts
    }

    #[test]
    fn enumerates_shortest_first_in_alphabet_order() {
        let words: Vec<String> = k_power_free_words(&binary(), 3, 2)
            .map(|w| w.to_string())
            .collect();
        assert_eq!(words, ["a", "b", "aa", "ab", "ba", "bb"]);
    }

    #[test]
    fn cube_free_binary_counts() {
        let counts = counts_by_length(k_power_free_words(&binary(), 3, 13), 13);
        assert_eq!(
            counts,
            [2, 4, 6, 10, 16, 24, 36, 56, 80, 118, 174, 254, 378]
        );
    }

    #[test]
    fn square_free_ternary_counts() {
        let abc = Alphabet::from_chars("abc").unwrap();
        let counts = counts_by_length(k_power_free_words(&abc, 2, 3), 3);
        assert_eq!(counts, [3, 6, 12]);
    }

    #[test]
    fn every_enumerated_word_is_power_free_and_none_missing() {
        // Cross-check the pruning enumerator against the direct filter.
        let abc = Alphabet::from_chars("abc").unwrap();
        for k in 2..=3usize {
            let enumerated: Vec<Word> = k_power_free_words(&abc, k, 6).collect();
            let mut filtered = Vec::new();
            let mut frontier: Vec<Vec<u8>> = vec![vec![]];
            for _ in 0..6 {
                let mut next = Vec::new();
                for base in &frontier {
                    for c in 0..3u8 {
                        let mut cand = base.clone();
                        cand.push(c);
                        next.push(cand);
                    }
                }
                for cand in &next {
                    let w = abc.word_from_letters(cand.clone());
                    if w.is_k_power_free(k) {
                        filtered.push(w);
                    }
                }
                frontier = next;
            }
            filtered.sort_by_key(|w| (w.len(), w.letters().to_vec()));
            assert_eq!(enumerated, filtered, "k = {k}");
        }
    }

    #[test]
    fn length_patterns_are_lexicographic() {
        assert_eq!(
            length_patterns(5, 3),
            vec![vec![1, 2, 2], vec![2, 1, 2], vec![2, 2, 1]]
        );
        assert_eq!(length_patterns(0, 3), vec![vec![0, 0, 0]]);
        assert_eq!(
            length_patterns(4, 3),
            vec![vec![1, 1, 2], vec![1, 2, 1], vec![2, 1, 1]]
        );
    }

    #[test]
    fn v_split_picks_the_first_workable_pattern() {
        let digits = Alphabet::from_chars("123456").unwrap();
        let w = digits.word_from_str("154216322").unwrap();
        let split = v_split(&w, 3).unwrap();
        assert_eq!(split.pattern, [1, 2, 2]);
        let letters: Vec<&str> = split.letters.iter().map(|&c| digits.symbol(c)).collect();
        assert_eq!(letters, ["1", "4", "6", "2"]);
        let blocks: Vec<String> = split.blocks.iter().map(Word::to_string).collect();
        assert_eq!(blocks, ["5", "21", "32"]);
    }

    #[test]
    fn v_membership_edge_cases() {
        let ab = binary();
        // Too short: nothing of length k or less splits.
        assert!(!in_v(&ab.word_from_str("aaa").unwrap(), 3));
        // Minimal length: empty blocks are always letter-distinct.
        assert!(in_v(&ab.word_from_str("aaaa").unwrap(), 3));
        // Every length-2 block of a^8 repeats a letter, so no pattern works.
        assert!(!in_v(&ab.word_from_str("aaaaaaaa").unwrap(), 3));
        assert!(in_v(&ab.word_from_str("aabbaabb").unwrap(), 3));
    }

    #[test]
    fn test_set_counts_for_the_binary_alphabet() {
        let spec = TestSetSpec::new(binary(), 3);
        assert_eq!(spec.max_length, 10);
        let words: Vec<Word> = test_set(&binary(), 3).collect();
        assert!(words.iter().all(|w| w.len() <= spec.max_length));
        let counts = counts_by_length(words.into_iter(), spec.max_length);
        assert_eq!(counts, [2, 4, 6, 10, 16, 24, 36, 54, 58, 28]);
        assert_eq!(counts.iter().sum::<usize>(), 238);
    }

    #[test]
    fn test_set_members_are_power_free_and_in_u_or_v() {
        for w in test_set(&binary(), 3) {
            assert!(w.is_k_power_free(3), "{w}");
            assert!(w.len() <= 4 || in_v(&w, 3), "{w}");
        }
    }
}

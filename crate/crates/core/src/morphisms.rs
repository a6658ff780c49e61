//! Free-monoid morphisms given by per-letter rewrite rules, with parsing,
//! serialization, uniformity reporting, and the prefix/suffix overlap test.

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::words::{Alphabet, Word};

/// A morphism between free monoids: one image word per domain letter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism {
    domain: Alphabet,
    image_alphabet: Alphabet,
    rules: Vec<Word>,
}

/// Outcome of the uniformity check; `length` is set exactly when `uniform`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct UniformityReport {
    pub uniform: bool,
    pub length: Option<usize>,
}

/// A witness that the prefix/suffix overlap condition fails: letters `a`,
/// `b`, `c` with `b != a`, `c != a`, a split `f(a) = p s`, a word `s2` with
/// `f(b) = p s2`, and a word `p2` with `f(c) = p2 s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PsViolation {
    pub a: u8,
    pub b: u8,
    pub c: u8,
    /// Length of `p`, i.e. where `f(a)` was cut.
    pub cut: usize,
    pub p: Word,
    pub s: Word,
    pub s2: Word,
    pub p2: Word,
}

impl Morphism {
    /// Builds a morphism from parallel rule words. `rules[i]` is the image
    /// of the `i`-th domain symbol and must live over `image_alphabet`.
    pub fn new(domain: Alphabet, image_alphabet: Alphabet, rules: Vec<Word>) -> Result<Self> {
        if rules.is_empty() {
            return Err(Error::EmptyRuleSet);
        }
        assert_eq!(
            rules.len(),
            domain.len(),
            "need exactly one rule per domain symbol"
        );
        for rule in &rules {
            assert!(
                rule.alphabet().compatible(&image_alphabet),
                "rule words must live over the image alphabet"
            );
        }
        Ok(Morphism {
            domain,
            image_alphabet,
            rules,
        })
    }

    pub fn domain(&self) -> &Alphabet {
        &self.domain
    }

    pub fn image_alphabet(&self) -> &Alphabet {
        &self.image_alphabet
    }

    /// The image of a single domain letter (by index).
    pub fn rule(&self, letter: u8) -> &Word {
        &self.rules[letter as usize]
    }

    pub fn rule_for(&self, symbol: &str) -> Result<&Word> {
        let c = self
            .domain
            .index_of(symbol)
            .ok_or_else(|| Error::UnknownSymbol(symbol.to_string()))?;
        Ok(&self.rules[c as usize])
    }

    pub fn rules(&self) -> &[Word] {
        &self.rules
    }

    /// Applies the morphism letter by letter.
    pub fn apply(&self, w: &Word) -> Result<Word> {
        if !w.alphabet().compatible(&self.domain) {
            return Err(Error::AlphabetMismatch);
        }
        let capacity: usize = w
            .letters()
            .iter()
            .map(|&c| self.rules[c as usize].len())
            .sum();
        let mut letters = Vec::with_capacity(capacity);
        for &c in w.letters() {
            letters.extend_from_slice(self.rules[c as usize].letters());
        }
        Ok(self.image_alphabet.word_from_letters(letters))
    }

    pub fn uniformity(&self) -> UniformityReport {
        let first = self.rules[0].len();
        if self.rules.iter().all(|r| r.len() == first) {
            UniformityReport {
                uniform: true,
                length: Some(first),
            }
        } else {
            UniformityReport {
                uniform: false,
                length: None,
            }
        }
    }

    pub fn is_uniform(&self) -> bool {
        self.uniformity().uniform
    }

    /// The common image length, or `NotUniform`.
    pub fn uniform_length(&self) -> Result<usize> {
        self.uniformity().length.ok_or(Error::NotUniform)
    }

    /// Uniform with pairwise-distinct images. `ZeroUniform` when all images
    /// are empty, since injectivity is vacuously broken there.
    pub fn is_injective_uniform(&self) -> Result<bool> {
        let len = self.uniform_length()?;
        if len == 0 {
            return Err(Error::ZeroUniform);
        }
        let mut seen = HashSet::with_capacity(self.rules.len());
        Ok(self.rules.iter().all(|r| seen.insert(r.letters().to_vec())))
    }

    /// Searches for the smallest overlap violation, scanning `a` in domain
    /// order, then the cut position ascending, then `b`, then `c`.
    pub fn ps_violation(&self) -> Option<PsViolation> {
        let n = self.rules.len() as u8;
        for a in 0..n {
            let fa = &self.rules[a as usize];
            for cut in 0..=fa.len() {
                let p = fa.prefix(cut).expect("cut <= |f(a)|");
                let s = fa.factor(cut + 1, fa.len()).expect("cut <= |f(a)|");
                for b in (0..n).filter(|&b| b != a) {
                    let fb = &self.rules[b as usize];
                    if !fb.starts_with(&p) {
                        continue;
                    }
                    for c in (0..n).filter(|&c| c != a) {
                        let fc = &self.rules[c as usize];
                        if !fc.ends_with(&s) {
                            continue;
                        }
                        let s2 = fb.factor(cut + 1, fb.len()).expect("p is a prefix of f(b)");
                        let p2 = fc
                            .prefix(fc.len() - s.len())
                            .expect("s is a suffix of f(c)");
                        return Some(PsViolation {
                            a,
                            b,
                            c,
                            cut,
                            p,
                            s,
                            s2,
                            p2,
                        });
                    }
                }
            }
        }
        None
    }

    /// No overlap violation exists (see [`PsViolation`]).
    pub fn is_ps_morphism(&self) -> bool {
        self.ps_violation().is_none()
    }

    /// Parses the line-oriented `letter -> image` format with single-character
    /// symbols. `#` starts a comment; blank lines are skipped; an empty
    /// right-hand side is the empty image.
    pub fn parse_text(src: &str) -> Result<Self> {
        Self::parse_text_impl(src, false)
    }

    /// Same format, but symbols are whitespace-separated tokens (the
    /// left-hand side is one token, the image a token sequence).
    pub fn parse_text_tokens(src: &str) -> Result<Self> {
        Self::parse_text_impl(src, true)
    }

    fn parse_text_impl(src: &str, tokens: bool) -> Result<Self> {
        let mut entries: Vec<(String, String, usize)> = Vec::new();
        for (idx, raw) in src.lines().enumerate() {
            let line = idx + 1;
            let text = raw.trim();
            if text.is_empty() || text.starts_with('#') {
                continue;
            }
            let (lhs, rhs) = text.split_once("->").ok_or_else(|| Error::Parse {
                line,
                msg: "expected `letter -> image`".to_string(),
            })?;
            let lhs = lhs.trim();
            let sym = if tokens {
                let mut it = lhs.split_whitespace();
                match (it.next(), it.next()) {
                    (Some(one), None) => one.to_string(),
                    _ => {
                        return Err(Error::Parse {
                            line,
                            msg: format!("left-hand side {lhs:?} must be a single symbol"),
                        })
                    }
                }
            } else {
                let mut chars = lhs.chars();
                match (chars.next(), chars.next()) {
                    (Some(one), None) => one.to_string(),
                    _ => {
                        return Err(Error::Parse {
                            line,
                            msg: format!("left-hand side {lhs:?} must be a single letter"),
                        })
                    }
                }
            };
            if entries.iter().any(|(existing, _, _)| *existing == sym) {
                return Err(Error::Parse {
                    line,
                    msg: format!("duplicate rule for {sym:?}"),
                });
            }
            entries.push((sym, rhs.trim().to_string(), line));
        }
        if entries.is_empty() {
            return Err(Error::EmptyRuleSet);
        }

        let domain = Alphabet::new(entries.iter().map(|(sym, _, _)| sym.clone()))?;
        let image_alphabet = infer_image_alphabet(
            &domain,
            entries.iter().map(|(_, rhs, _)| rhs.as_str()),
            tokens,
        )?;
        let mut rules = Vec::with_capacity(entries.len());
        for (_, rhs, line) in &entries {
            let image = if tokens {
                image_alphabet.word_from_tokens(rhs)
            } else {
                image_alphabet.word_from_str(rhs)
            };
            rules.push(image.map_err(|e| Error::Parse {
                line: *line,
                msg: e.to_string(),
            })?);
        }
        Morphism::new(domain, image_alphabet, rules)
    }

    /// Parses the JSON document format:
    /// `{"alphabet": [...], "image_alphabet": [...]?, "rules": {"a": "baaba", ...}}`.
    pub fn parse_json(src: &str) -> Result<Self> {
        let doc: MorphismDoc = serde_json::from_str(src).map_err(|e| Error::Parse {
            line: e.line(),
            msg: e.to_string(),
        })?;
        let domain = Alphabet::new(doc.alphabet)?;
        let mut rules_by_symbol: HashMap<String, String> = doc.rules;
        for key in rules_by_symbol.keys() {
            if domain.index_of(key).is_none() {
                return Err(Error::UnknownSymbol(key.clone()));
            }
        }
        let mut images = Vec::with_capacity(domain.len());
        for sym in domain.symbols() {
            match rules_by_symbol.remove(sym) {
                Some(img) => images.push(img),
                None => return Err(Error::MissingRule(sym.to_string())),
            }
        }
        let image_alphabet = match doc.image_alphabet {
            Some(symbols) => Alphabet::new(symbols)?,
            None => infer_image_alphabet(
                &domain,
                images.iter().map(String::as_str),
                !domain.is_single_char(),
            )?,
        };
        let tokens = !image_alphabet.is_single_char();
        let mut rules = Vec::with_capacity(images.len());
        for img in &images {
            rules.push(if tokens {
                image_alphabet.word_from_tokens(img)?
            } else {
                image_alphabet.word_from_str(img)?
            });
        }
        Morphism::new(domain, image_alphabet, rules)
    }

    /// Renders the `letter -> image` text format; `parse_text` (or
    /// `parse_text_tokens` for multi-character symbols) reads it back.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (i, sym) in self.domain.symbols().enumerate() {
            out.push_str(sym);
            out.push_str(" -> ");
            out.push_str(&self.rules[i].to_string());
            out.push('\n');
        }
        out
    }

    /// Renders the JSON document format accepted by [`Morphism::parse_json`].
    pub fn to_json(&self) -> String {
        let rules: serde_json::Map<String, serde_json::Value> = self
            .domain
            .symbols()
            .enumerate()
            .map(|(i, sym)| (sym.to_string(), self.rules[i].to_string().into()))
            .collect();
        let mut doc = serde_json::json!({
            "alphabet": self.domain.symbols().collect::<Vec<_>>(),
            "rules": rules,
        });
        if !self.image_alphabet.compatible(&self.domain) {
            doc["image_alphabet"] =
                serde_json::json!(self.image_alphabet.symbols().collect::<Vec<_>>());
        }
        serde_json::to_string_pretty(&doc).expect("morphism documents always serialize")
    }
}

impl fmt::Display for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.to_text().trim_end())
    }
}

#[derive(Deserialize)]
struct MorphismDoc {
    alphabet: Vec<String>,
    #[serde(default)]
    image_alphabet: Option<Vec<String>>,
    rules: HashMap<String, String>,
}

/// Image alphabet inference: reuse the domain when every image symbol is a
/// domain symbol; otherwise collect image symbols in first-appearance order.
fn infer_image_alphabet<'a>(
    domain: &Alphabet,
    images: impl Iterator<Item = &'a str>,
    tokens: bool,
) -> Result<Alphabet> {
    let mut seen = HashSet::new();
    let mut symbols: Vec<String> = Vec::new();
    for rhs in images {
        let parts: Vec<String> = if tokens {
            rhs.split_whitespace().map(String::from).collect()
        } else {
            rhs.chars().map(String::from).collect()
        };
        for sym in parts {
            if seen.insert(sym.clone()) {
                symbols.push(sym);
            }
        }
    }
    if symbols.iter().all(|s| domain.index_of(s).is_some()) {
        Ok(domain.clone())
    } else {
        Alphabet::new(symbols)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn embedded_cube_morphism() -> Morphism {
        Morphism::parse_text(
            "a -> baaba\n\
             b -> bcdab\n\
             c -> cdabc\n\
             d -> dbaab\n",
        )
        .unwrap()
    }

    #[test]
    fn parse_text_reads_rules_in_order() {
        let f = embedded_cube_morphism();
        assert_eq!(f.domain().to_string(), "abcd");
        assert_eq!(f.image_alphabet().to_string(), "abcd");
        assert_eq!(f.rule_for("a").unwrap().to_string(), "baaba");
        assert_eq!(f.rule_for("d").unwrap().to_string(), "dbaab");
        assert!(f.rule_for("x").is_err());
    }

    #[test]
    fn parse_text_handles_comments_blanks_and_empty_images() {
        let f = Morphism::parse_text("# a comment\n\na -> ab\nb ->\n").unwrap();
        assert_eq!(f.rule_for("b").unwrap().len(), 0);
        assert!(!f.is_uniform());
    }

    #[test]
    fn parse_text_reports_line_numbers() {
        let err = Morphism::parse_text("a -> ab\nnonsense\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        let err = Morphism::parse_text("a -> ab\na -> ba\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        let err = Morphism::parse_text("ab -> ab\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }), "{err}");
        assert!(matches!(
            Morphism::parse_text("# nothing\n"),
            Err(Error::EmptyRuleSet)
        ));
    }

    #[test]
    fn image_alphabet_extends_the_domain_in_first_appearance_order() {
        // Images introduce digits before the letter b ever shows up.
        let f = Morphism::parse_text("1 -> a01\n2 -> 2b1\n").unwrap();
        assert_eq!(f.image_alphabet().to_string(), "a012b");
        assert_eq!(f.domain().to_string(), "12");
    }

    #[test]
    fn apply_concatenates_images() {
        let f = embedded_cube_morphism();
        let w = f.domain().word_from_str("abcd").unwrap();
        assert_eq!(f.apply(&w).unwrap().to_string(), "baababcdabcdabcdbaab");
        let other = Alphabet::from_chars("xy").unwrap();
        let foreign = other.word_from_str("x").unwrap();
        assert!(matches!(f.apply(&foreign), Err(Error::AlphabetMismatch)));
    }

    #[test]
    fn uniformity_reporting() {
        let f = embedded_cube_morphism();
        assert_eq!(
            f.uniformity(),
            UniformityReport {
                uniform: true,
                length: Some(5)
            }
        );
        assert_eq!(f.uniform_length().unwrap(), 5);

        let g = Morphism::parse_text("a -> abc\nb -> ac\nc -> b\n").unwrap();
        assert_eq!(
            g.uniformity(),
            UniformityReport {
                uniform: false,
                length: None
            }
        );
        assert!(matches!(g.uniform_length(), Err(Error::NotUniform)));

        let zero = Morphism::parse_text("a ->\nb ->\n").unwrap();
        assert_eq!(zero.uniform_length().unwrap(), 0);
        assert!(matches!(
            zero.is_injective_uniform(),
            Err(Error::ZeroUniform)
        ));
    }

    #[test]
    fn injectivity_for_uniform_morphisms() {
        assert!(embedded_cube_morphism().is_injective_uniform().unwrap());
        let g = Morphism::parse_text("a -> ab\nb -> ab\n").unwrap();
        assert!(!g.is_injective_uniform().unwrap());
    }

    #[test]
    fn ps_violation_points_at_the_smallest_overlap() {
        // Shared image: p = empty, s = ab, f(b) = p s2 with s2 = ab, and
        // f(b) ends with s, so p2 = empty.
        let g = Morphism::parse_text("a -> ab\nb -> ab\n").unwrap();
        let v = g.ps_violation().unwrap();
        assert_eq!((v.a, v.b, v.c, v.cut), (0, 1, 1, 0));
        assert!(v.p.is_empty() && v.p2.is_empty());
        assert_eq!(v.s.to_string(), "ab");
        assert!(!g.is_ps_morphism());
    }

    #[test]
    fn embedded_cube_morphism_is_ps() {
        assert!(embedded_cube_morphism().is_ps_morphism());
    }

    #[test]
    fn text_round_trip() {
        let f = embedded_cube_morphism();
        assert_eq!(Morphism::parse_text(&f.to_text()).unwrap(), f);
    }

    #[test]
    fn json_round_trip_and_validation() {
        let f = embedded_cube_morphism();
        let back = Morphism::parse_json(&f.to_json()).unwrap();
        assert_eq!(back, f);

        let doc = r#"{"alphabet": ["a", "b"], "rules": {"a": "ab", "b": "ba"}}"#;
        let g = Morphism::parse_json(doc).unwrap();
        assert_eq!(g.rule_for("b").unwrap().to_string(), "ba");

        let missing = r#"{"alphabet": ["a", "b"], "rules": {"a": "ab"}}"#;
        assert!(matches!(
            Morphism::parse_json(missing),
            Err(Error::MissingRule(_))
        ));

        let extra = r#"{"alphabet": ["a"], "rules": {"a": "a", "b": "a"}}"#;
        assert!(matches!(
            Morphism::parse_json(extra),
            Err(Error::UnknownSymbol(_))
        ));

        let syntax = "{";
        assert!(matches!(
            Morphism::parse_json(syntax),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn json_honors_an_explicit_image_alphabet() {
        let doc = r#"{
            "alphabet": ["a", "b"],
            "image_alphabet": ["0", "1"],
            "rules": {"a": "01", "b": "10"}
        }"#;
        let f = Morphism::parse_json(doc).unwrap();
        assert_eq!(f.image_alphabet().to_string(), "01");
        let round = Morphism::parse_json(&f.to_json()).unwrap();
        assert_eq!(round, f);
    }

    #[test]
    fn token_format_supports_multicharacter_symbols() {
        let f = Morphism::parse_text_tokens("x1 -> x1 y2\ny2 -> x1\n").unwrap();
        assert_eq!(f.domain().len(), 2);
        assert_eq!(f.rule_for("x1").unwrap().len(), 2);
        assert_eq!(Morphism::parse_text_tokens(&f.to_text()).unwrap(), f);
    }
}

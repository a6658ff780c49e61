//! Ground truth and cross-checking: a definition-level brute-force search,
//! deterministic morphism generators, and agreement sweeps between the
//! finite-test decision and the brute force.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::decide::{decide, DecideMode, DecideWitness};
use crate::error::Result;
use crate::morphisms::Morphism;
use crate::testset::{k_power_free_words, TestSetSpec};
use crate::words::{find_k_power_in, Alphabet};

/// Result of a bounded brute-force search.
#[derive(Clone, Debug)]
pub struct SearchReport {
    /// First k-power-free word (shortest, then alphabet order) whose image
    /// contains a k-th power, if any exists within the length bound.
    pub counterexample: Option<DecideWitness>,
    pub words_scanned: u64,
    pub max_len: usize,
}

/// Scans every k-power-free word of length up to `max_len` and checks its
/// image directly. Slower than [`decide`](crate::decide::decide) but
/// assumption-free: it works for non-uniform morphisms too and serves as
/// the reference the decision procedure is validated against.
pub fn brute_force_search(f: &Morphism, k: usize, max_len: usize) -> SearchReport {
    let mut image_buf: Vec<u8> = Vec::new();
    let mut scanned = 0u64;
    for w in k_power_free_words(f.domain(), k, max_len) {
        scanned += 1;
        image_buf.clear();
        for &c in w.letters() {
            image_buf.extend_from_slice(f.rule(c).letters());
        }
        if find_k_power_in(&image_buf, k).is_some() {
            let image = f.apply(&w).expect("enumerated words live over the domain");
            let image_power = image.find_k_power(k).expect("the raw scan found a power");
            return SearchReport {
                counterexample: Some(DecideWitness {
                    word: w,
                    image_power,
                }),
                words_scanned: scanned,
                max_len,
            };
        }
    }
    SearchReport {
        counterexample: None,
        words_scanned: scanned,
        max_len,
    }
}

/// A uniform morphism with images drawn letter-by-letter from a seeded
/// generator. The same arguments always produce the same morphism.
pub fn random_uniform_morphism(
    domain: &Alphabet,
    image: &Alphabet,
    len: usize,
    seed: u64,
) -> Morphism {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rules = (0..domain.len())
        .map(|_| {
            let letters: Vec<u8> = (0..len)
                .map(|_| rng.gen_range(0..image.len()) as u8)
                .collect();
            image.word_from_letters(letters)
        })
        .collect();
    Morphism::new(domain.clone(), image.clone(), rules).expect("non-empty domain")
}

/// Iterator over every `len`-uniform morphism from `domain` to words over
/// `image`, in lexicographic order of the concatenated rule letters.
pub struct ExhaustiveMorphisms {
    domain: Alphabet,
    image: Alphabet,
    len: usize,
    digits: Vec<u8>,
    done: bool,
}

pub fn exhaustive_morphisms(
    domain: &Alphabet,
    image: &Alphabet,
    len: usize,
) -> ExhaustiveMorphisms {
    ExhaustiveMorphisms {
        domain: domain.clone(),
        image: image.clone(),
        len,
        digits: vec![0; len * domain.len()],
        done: false,
    }
}

impl Iterator for ExhaustiveMorphisms {
    type Item = Morphism;

    fn next(&mut self) -> Option<Morphism> {
        if self.done {
            return None;
        }
        let rules = self
            .digits
            .chunks(self.len.max(1))
            .take(self.domain.len())
            .map(|chunk| self.image.word_from_letters(chunk.to_vec()))
            .collect::<Vec<_>>();
        let rules = if self.len == 0 {
            vec![self.image.empty_word(); self.domain.len()]
        } else {
            rules
        };
        let current =
            Morphism::new(self.domain.clone(), self.image.clone(), rules).expect("non-empty");
        // Advance the odometer, last digit fastest.
        let base = self.image.len() as u8;
        let mut pos = self.digits.len();
        loop {
            if pos == 0 {
                self.done = true;
                break;
            }
            pos -= 1;
            self.digits[pos] += 1;
            if self.digits[pos] < base {
                break;
            }
            self.digits[pos] = 0;
        }
        Some(current)
    }
}

/// Which family of uniform morphisms a sweep covers.
#[derive(Clone, Debug)]
pub enum SweepFamily {
    /// Every `uniform_len`-uniform morphism `domain -> image*`.
    Exhaustive {
        domain: Alphabet,
        image: Alphabet,
        uniform_len: usize,
    },
    /// `samples` seeded draws; sample `i` uses seed `seed + i`, so any
    /// sample can be regenerated in isolation.
    Sampled {
        domain: Alphabet,
        image: Alphabet,
        uniform_len: usize,
        samples: u64,
        seed: u64,
    },
}

/// A morphism on which the finite test and the brute force disagreed.
/// Seeing one of these means a bug; the sweep exists to keep that falsifiable.
#[derive(Clone, Debug)]
pub struct Disagreement {
    pub index: u64,
    pub morphism: Morphism,
    pub decide_free: bool,
    pub brute_free: bool,
}

#[derive(Clone, Debug)]
pub struct SweepReport {
    pub checked: u64,
    /// Morphisms the finite test declared k-power-free.
    pub free_count: u64,
    pub disagreements: Vec<Disagreement>,
}

/// Runs [`decide`] (test-set mode) against [`brute_force_search`] capped at
/// the test-set length bound, over a whole family. `threads > 1` fans the
/// family out over that many workers; results are identical either way.
pub fn agreement_sweep(family: &SweepFamily, k: usize, threads: usize) -> Result<SweepReport> {
    let (domain, items): (Alphabet, Vec<(u64, Morphism)>) = match family {
        SweepFamily::Exhaustive {
            domain,
            image,
            uniform_len,
        } => (
            domain.clone(),
            exhaustive_morphisms(domain, image, *uniform_len)
                .enumerate()
                .map(|(i, f)| (i as u64, f))
                .collect(),
        ),
        SweepFamily::Sampled {
            domain,
            image,
            uniform_len,
            samples,
            seed,
        } => (
            domain.clone(),
            (0..*samples)
                .map(|i| {
                    (
                        i,
                        random_uniform_morphism(domain, image, *uniform_len, seed.wrapping_add(i)),
                    )
                })
                .collect(),
        ),
    };
    let bound = TestSetSpec::new(domain, k).max_length;

    let check = |pair: &(u64, Morphism)| -> Result<(u64, Morphism, bool, bool)> {
        let (index, f) = pair;
        let decide_free = decide(f, k, DecideMode::TestSet)?.k_power_free;
        let brute_free = brute_force_search(f, k, bound).counterexample.is_none();
        Ok((*index, f.clone(), decide_free, brute_free))
    };

    let mut outcomes: Vec<(u64, Morphism, bool, bool)> = if threads > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .expect("thread pool construction");
        pool.install(|| items.par_iter().map(check).collect::<Result<Vec<_>>>())?
    } else {
        items.iter().map(check).collect::<Result<Vec<_>>>()?
    };
    outcomes.sort_by_key(|(index, ..)| *index);

    let mut report = SweepReport {
        checked: 0,
        free_count: 0,
        disagreements: Vec::new(),
    };
    for (index, morphism, decide_free, brute_free) in outcomes {
        report.checked += 1;
        if decide_free {
            report.free_count += 1;
        }
        if decide_free != brute_free {
            report.disagreements.push(Disagreement {
                index,
                morphism,
                decide_free,
                brute_free,
            });
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binary() -> Alphabet {
        Alphabet::from_chars("ab").unwrap()
    }

    #[test]
    fn brute_force_finds_the_first_counterexample() {
        let f = Morphism::parse_text("a -> ab\nb -> ab\n").unwrap();
        let report = brute_force_search(&f, 3, 10);
        let witness = report.counterexample.unwrap();
        assert_eq!(witness.word.to_string(), "aab");
        assert_eq!(report.words_scanned, 7);
    }

    #[test]
    fn brute_force_agrees_with_the_embedded_cube_witness() {
        let f = Morphism::parse_text("a -> baaba\nb -> bcdab\nc -> cdabc\nd -> dbaab\n").unwrap();
        let report = brute_force_search(&f, 3, 13);
        let witness = report.counterexample.unwrap();
        assert_eq!(witness.word.to_string(), "abcd");
        assert_eq!(witness.image_power.root.to_string(), "abcd");
        assert_eq!(witness.image_power.start, 5);
        assert_eq!(report.words_scanned, 103);
    }

    #[test]
    fn brute_force_handles_non_uniform_morphisms() {
        // This morphism preserves square-freeness but not cube-freeness:
        // the cube-free word abba maps to abcacacabc, which contains (ca)^3.
        let theta = Morphism::parse_text("a -> abc\nb -> ac\nc -> b\n").unwrap();
        let report = brute_force_search(&theta, 3, 7);
        let witness = report.counterexample.unwrap();
        assert_eq!(witness.word.to_string(), "abba");
        assert_eq!(witness.image_power.root.to_string(), "ca");
        assert_eq!(witness.image_power.start, 3);
        assert_eq!(report.words_scanned, 46);
    }

    #[test]
    fn random_morphisms_are_deterministic_per_seed() {
        let abc = Alphabet::from_chars("abc").unwrap();
        let f = random_uniform_morphism(&binary(), &abc, 4, 42);
        let g = random_uniform_morphism(&binary(), &abc, 4, 42);
        assert_eq!(f, g);
        assert_eq!(f.uniform_length().unwrap(), 4);
        assert_eq!(f.domain().len(), 2);
    }

    #[test]
    fn exhaustive_enumeration_covers_the_family_once() {
        let fs: Vec<Morphism> = exhaustive_morphisms(&binary(), &binary(), 2).collect();
        assert_eq!(fs.len(), 16);
        assert_eq!(fs[0].rule_for("a").unwrap().to_string(), "aa");
        assert_eq!(fs[0].rule_for("b").unwrap().to_string(), "aa");
        assert_eq!(fs[15].rule_for("a").unwrap().to_string(), "bb");
        for (i, f) in fs.iter().enumerate() {
            for g in &fs[i + 1..] {
                assert_ne!(f, g);
            }
        }
    }

    #[test]
    fn exhaustive_enumeration_len_zero_is_the_single_empty_morphism() {
        let fs: Vec<Morphism> = exhaustive_morphisms(&binary(), &binary(), 0).collect();
        assert_eq!(fs.len(), 1);
        assert_eq!(fs[0].uniform_length().unwrap(), 0);
    }

    #[test]
    fn sweep_on_one_letter_images_counts_injective_morphisms() {
        let family = SweepFamily::Exhaustive {
            domain: binary(),
            image: binary(),
            uniform_len: 1,
        };
        let report = agreement_sweep(&family, 3, 1).unwrap();
        assert_eq!(report.checked, 4);
        assert_eq!(report.free_count, 2);
        assert!(report.disagreements.is_empty());
    }

    #[test]
    fn sweeps_are_deterministic_and_thread_count_independent() {
        let abc = Alphabet::from_chars("abc").unwrap();
        let family = SweepFamily::Sampled {
            domain: binary(),
            image: abc,
            uniform_len: 2,
            samples: 25,
            seed: 7,
        };
        let sequential = agreement_sweep(&family, 3, 1).unwrap();
        let parallel = agreement_sweep(&family, 3, 3).unwrap();
        assert_eq!(sequential.checked, parallel.checked);
        assert_eq!(sequential.free_count, parallel.free_count);
        assert!(sequential.disagreements.is_empty());
        assert!(parallel.disagreements.is_empty());
    }
}

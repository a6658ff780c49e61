//! Deciding k-power-freeness of uniform morphisms on free monoids.
//!
//! A word contains a *k-th power* when some non-empty factor repeats k times
//! in a row; it is *k-power-free* otherwise. A morphism is k-power-free when
//! it maps every k-power-free word to a k-power-free word. For uniform
//! morphisms (all images the same length) and `k >= 3` this property is
//! decidable by checking a single finite *test set* of words whose length
//! never exceeds `k * card(A) + k + 1`; for `k = 2` the classical criterion
//! checks square-free words of length at most 3.
//!
//! The crate provides:
//!
//! - [`words`]: alphabets, words, power detection, and the periodicity
//!   lemmas (primitive roots, conjugacy, internal-factor roots, the
//!   Fine–Wilf bound) underpinning everything else;
//! - [`morphisms`]: rule-based morphisms with text/JSON formats, uniformity
//!   reporting, and the prefix/suffix overlap test;
//! - [`testset`]: enumeration of k-power-free words and of the test set;
//! - [`decide`]: the decision procedure with canonical witnesses, plus an
//!   independent witness verifier;
//! - [`decomp`]: direct covers `f(w) = p u^k s`, their cell-aligned
//!   decompositions, the synchronization test, and the reduction machinery
//!   justifying the test-set bound;
//! - [`oracle`]: brute-force ground truth and seeded/exhaustive agreement
//!   sweeps to keep the decision procedure falsifiable.
//!
//! ```
//! use kpf_core::{decide, DecideMode, Morphism};
//!
//! // The Thue-Morse morphism is k-power-free for every k >= 3 ...
//! let mu = Morphism::parse_text("a -> ab\nb -> ba\n").unwrap();
//! assert!(decide(&mu, 3, DecideMode::TestSet).unwrap().k_power_free);
//!
//! // ... while collapsing both letters to one image is not.
//! let g = Morphism::parse_text("a -> ab\nb -> ab\n").unwrap();
//! let verdict = decide(&g, 3, DecideMode::TestSet).unwrap();
//! assert_eq!(verdict.witness.unwrap().word.to_string(), "aab");
//! ```

pub mod decide;
pub mod decomp;
pub mod error;
pub mod morphisms;
pub mod oracle;
pub mod testset;
pub mod words;

pub use decide::{decide, verify_witness, DecideMode, DecideWitness, Verdict};
pub use decomp::{
    check_remark_spere, decompose, find_direct_covers, reduce_fully, reduce_step, reduce_step_with,
    reduction_candidates, Decomposition, DirectCover, ReductionCandidate, ReductionStep,
    ReductionTrace,
};
pub use error::{Error, Result};
pub use morphisms::{Morphism, PsViolation, UniformityReport};
pub use oracle::{
    agreement_sweep, brute_force_search, exhaustive_morphisms, random_uniform_morphism,
    Disagreement, ExhaustiveMorphisms, SearchReport, SweepFamily, SweepReport,
};
pub use testset::{
    in_v, k_power_free_words, test_set, v_split, words_u, KPowerFreeWords, TestSet, TestSetSpec,
    VSplit,
};
pub use words::{
    fine_wilf_bound, internal_factor_root, solve_conjugacy, Alphabet, Conjugacy, InternalFactor,
    PowerWitness, Word,
};

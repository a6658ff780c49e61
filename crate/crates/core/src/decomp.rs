//! Direct covers of images by k-th powers, their cell-aligned
//! decompositions, the synchronization test, and the reduction that shrinks
//! a covered word until it lands in the test set.

use crate::error::{Error, Result};
use crate::morphisms::Morphism;
use crate::testset::in_v;
use crate::words::Word;

/// A way of reading `f(word)` as `prefix root^k suffix` with the prefix and
/// suffix shorter than one image cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirectCover {
    pub word: Word,
    pub k: usize,
    pub prefix: Word,
    pub root: Word,
    pub suffix: Word,
}

/// All direct covers of `f(w)` by a k-th power, ordered by prefix length,
/// then root length.
pub fn find_direct_covers(f: &Morphism, w: &Word, k: usize) -> Result<Vec<DirectCover>> {
    assert!(k >= 2, "powers are only meaningful for k >= 2");
    let cell = f.uniform_length()?;
    let image = f.apply(w)?;
    let letters = image.letters();
    let total = letters.len();
    let mut covers = Vec::new();
    for prefix_len in 0..cell.min(total + 1) {
        let rest = total - prefix_len;
        for root_len in 1..=rest / k {
            let suffix_len = rest - k * root_len;
            if suffix_len >= cell {
                continue;
            }
            let seg = &letters[prefix_len..prefix_len + k * root_len];
            if seg[root_len..].iter().zip(seg).all(|(a, b)| a == b) {
                covers.push(DirectCover {
                    word: w.clone(),
                    k,
                    prefix: image.prefix(prefix_len).expect("prefix_len <= total"),
                    root: image
                        .factor(prefix_len + 1, prefix_len + root_len)
                        .expect("root inside image"),
                    suffix: image.suffix(suffix_len).expect("suffix_len <= total"),
                });
            }
        }
    }
    Ok(covers)
}

/// The cell-aligned anatomy of a direct cover `f(w) = p0 u^k sk`:
/// `w = a0 w1 a1 ... wk ak`, every `f(ai)` split as `pi si`, with `s0`
/// non-empty, `p1 ..= pk` non-empty, and `u = s(i-1) f(wi) pi` for every i.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub k: usize,
    /// The word being decomposed.
    pub word: Word,
    /// The power root `u`.
    pub root: Word,
    /// Separating letters `a0 ..= ak` (domain letter indices).
    pub letters: Vec<u8>,
    /// Blocks `w1 ..= wk` (domain words); lengths pairwise differ by <= 1.
    pub blocks: Vec<Word>,
    /// Image splits `p0 ..= pk`.
    pub p: Vec<Word>,
    /// Image splits `s0 ..= sk`.
    pub s: Vec<Word>,
}

impl Decomposition {
    /// Difference between the longest and shortest block.
    pub fn block_length_spread(&self) -> usize {
        let lens = self.blocks.iter().map(Word::len);
        lens.clone().max().unwrap_or(0) - lens.min().unwrap_or(0)
    }

    /// Two consecutive interior suffixes have equal length. For overlap-free
    /// morphisms and power-free words this never happens on a direct cover,
    /// which is exactly what makes the reduction below well-defined.
    pub fn is_synchronized(&self) -> bool {
        (1..=self.k.saturating_sub(2)).any(|i| self.s[i].len() == self.s[i + 1].len())
    }

    /// Re-checks every structural invariant against `f`. A failure is
    /// reported as [`Error::Internal`], since decompositions are only
    /// produced by code that should uphold them.
    pub fn validate(&self, f: &Morphism) -> Result<()> {
        let k = self.k;
        let fail = |msg: &str| Err(Error::Internal(msg.to_string()));
        if self.letters.len() != k + 1
            || self.blocks.len() != k
            || self.p.len() != k + 1
            || self.s.len() != k + 1
        {
            return fail("decomposition has mismatched part counts");
        }
        let domain = f.domain();
        let mut rebuilt = domain.empty_word();
        for i in 0..=k {
            if i > 0 {
                rebuilt = rebuilt.concat(&self.blocks[i - 1]);
            }
            rebuilt = rebuilt.concat(&domain.word_from_letters(vec![self.letters[i]]));
        }
        if rebuilt != self.word {
            return fail("letters and blocks do not reassemble the word");
        }
        if self.s[0].is_empty() {
            return fail("s0 must be non-empty");
        }
        if self.p[1..=k].iter().any(Word::is_empty) {
            return fail("p1 ..= pk must be non-empty");
        }
        for i in 0..=k {
            let fa = f.rule(self.letters[i]);
            if self.p[i].concat(&self.s[i]) != *fa {
                return fail("pi si must equal f(ai)");
            }
        }
        for i in 1..=k {
            let cell = self.s[i - 1]
                .concat(
                    &f.apply(&self.blocks[i - 1])
                        .expect("blocks live over the domain"),
                )
                .concat(&self.p[i]);
            if cell != self.root {
                return fail("s(i-1) f(wi) pi must equal the root for every i");
            }
        }
        if self.block_length_spread() > 1 {
            return fail("block lengths must pairwise differ by at most one");
        }
        let cell_len = f.uniform_length()?;
        if self.p[0].len() >= cell_len || self.s[k].len() >= cell_len {
            return fail("p0 and sk must be shorter than one image cell");
        }
        let image = f.apply(&self.word)?;
        let assembled = self.p[0].concat(&self.root.repeat(k)).concat(&self.s[k]);
        if image != assembled {
            return fail("p0 u^k sk must equal the image of the word");
        }
        Ok(())
    }
}

/// Decomposes a direct cover along image-cell boundaries. Needs
/// `|w| >= k + 1`; shorter covered words have no cell-aligned anatomy.
pub fn decompose(f: &Morphism, cover: &DirectCover) -> Result<Decomposition> {
    let cell = f.uniform_length()?;
    if cell == 0 {
        return Err(Error::ZeroUniform);
    }
    let k = cover.k;
    let w = &cover.word;
    let n = w.len();
    if n < k + 1 {
        return Err(Error::WordTooShort {
            len: n,
            k,
            min: k + 1,
        });
    }
    if cover.root.is_empty() {
        return Err(Error::InvalidCover(
            "the root must be non-empty".to_string(),
        ));
    }
    if cover.prefix.len() >= cell || cover.suffix.len() >= cell {
        return Err(Error::InvalidCover(
            "prefix and suffix must be shorter than one image cell".to_string(),
        ));
    }
    let image = f.apply(w)?;
    let assembled = cover
        .prefix
        .concat(&cover.root.repeat(k))
        .concat(&cover.suffix);
    if image != assembled {
        return Err(Error::InvalidCover(
            "prefix root^k suffix does not equal the image of the word".to_string(),
        ));
    }

    let p0 = cover.prefix.len();
    let root_len = cover.root.len();
    // Cell index (1-based position in w) containing the end of p0 u^l.
    let boundary = |l: usize| (p0 + l * root_len).div_ceil(cell).max(1);
    let cuts: Vec<usize> = (0..=k).map(boundary).collect();
    if cuts[k] != n || cuts.windows(2).any(|two| two[0] >= two[1]) {
        return Err(Error::Internal(
            "cover boundaries must hit strictly increasing cells ending at the last letter"
                .to_string(),
        ));
    }

    let mut letters = Vec::with_capacity(k + 1);
    let mut blocks = Vec::with_capacity(k);
    let mut p = Vec::with_capacity(k + 1);
    let mut s = Vec::with_capacity(k + 1);
    for l in 0..=k {
        let at = cuts[l];
        letters.push(w.letter(at).expect("cut positions are in range"));
        if l > 0 {
            blocks.push(
                w.factor(cuts[l - 1] + 1, at - 1)
                    .expect("cuts increase strictly"),
            );
        }
        let p_len = p0 + l * root_len - (at - 1) * cell;
        let fa = f.rule(letters[l]);
        if p_len > cell || (l > 0 && p_len == 0) {
            return Err(Error::Internal(
                "cell split lengths out of range".to_string(),
            ));
        }
        p.push(fa.prefix(p_len).expect("p_len <= cell"));
        s.push(fa.suffix(cell - p_len).expect("p_len <= cell"));
    }

    let d = Decomposition {
        k,
        word: w.clone(),
        root: cover.root.clone(),
        letters,
        blocks,
        p,
        s,
    };
    d.validate(f)?;
    if d.p[0] != cover.prefix || d.s[k] != cover.suffix {
        return Err(Error::Internal(
            "decomposition edges must match the cover".to_string(),
        ));
    }
    Ok(d)
}

/// One admissible way of shortening a decomposition: drop the factor `y`
/// from block `block`, where `x y` is the prefix of the block up to the
/// second occurrence of `letter` — or, in the `extended` form, `f(a0)`
/// itself provides the first occurrence (possible only when `p0` is empty)
/// and `y` runs up to the first occurrence of `a0` in block 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionCandidate {
    /// Block index, 1-based.
    pub block: usize,
    pub letter: u8,
    pub extended: bool,
    pub x: Word,
    pub y: Word,
    pub z: Word,
    /// Left end of the image of the dropped part, measured inside the root;
    /// candidates are ordered by this.
    pub anchor: usize,
    /// The blocks of the decomposition this candidate produces.
    pub new_blocks: Vec<Word>,
}

/// Greedy split of every block against the two image positions `t1 <= t2`:
/// `x_i` is the longest block prefix with `|s(i-1) f(x_i)| <= t1`, then `y_i`
/// extends it to `t2`. Returns per-block `(|x_i|, |y_i|)`.
fn aligned_splits(d: &Decomposition, cell: usize, t1: usize, t2: usize) -> Vec<(usize, usize)> {
    (1..=d.k)
        .map(|i| {
            let shift = d.s[i - 1].len();
            let len = d.blocks[i - 1].len();
            debug_assert!(t1 >= shift && t2 >= t1);
            let m = len.min((t1 - shift) / cell);
            let n = (len - m).min((t2 - shift) / cell - m);
            (m, n)
        })
        .collect()
}

/// All reduction candidates of a decomposition, ordered by anchor position
/// (then block, then letter), with candidates that would produce the same
/// reduced decomposition merged into one.
pub fn reduction_candidates(d: &Decomposition) -> Vec<ReductionCandidate> {
    let cell = d.p[0].len() + d.s[0].len();
    let mut raw: Vec<ReductionCandidate> = Vec::new();

    // Extended form: when p0 is empty the whole cell f(a0) = s0 starts the
    // root, so a0 recurring in block 1 already yields a droppable span.
    if d.p[0].is_empty() {
        let block1 = &d.blocks[0];
        if let Some(pos) = block1.letters().iter().position(|&c| c == d.letters[0]) {
            raw.push(ReductionCandidate {
                block: 1,
                letter: d.letters[0],
                extended: true,
                x: block1.prefix(0).expect("empty prefix"),
                y: block1.prefix(pos + 1).expect("pos inside block"),
                z: block1.factor(pos + 2, block1.len()).expect("tail of block"),
                anchor: cell,
                new_blocks: Vec::new(),
            });
        }
    }

    for (idx, block) in d.blocks.iter().enumerate() {
        let letters = block.letters();
        let mut first = [usize::MAX; 256];
        let mut used = [false; 256];
        for (pos, &c) in letters.iter().enumerate() {
            let c_us = c as usize;
            if first[c_us] == usize::MAX {
                first[c_us] = pos;
            } else if !used[c_us] {
                used[c_us] = true;
                let head = first[c_us];
                raw.push(ReductionCandidate {
                    block: idx + 1,
                    letter: c,
                    extended: false,
                    x: block.prefix(head + 1).expect("head inside block"),
                    y: block.factor(head + 2, pos + 1).expect("head < pos"),
                    z: block.factor(pos + 2, block.len()).expect("tail of block"),
                    anchor: d.s[idx].len() + cell * (head + 1),
                    new_blocks: Vec::new(),
                });
            }
        }
    }

    raw.sort_by_key(|c| (c.anchor, c.block, c.letter));
    for cand in &mut raw {
        let t2 = cand.anchor + cell * cand.y.len();
        let splits = aligned_splits(d, cell, cand.anchor, t2);
        cand.new_blocks = splits
            .iter()
            .enumerate()
            .map(|(i, &(m, n))| {
                let block = &d.blocks[i];
                block.prefix(m).expect("m <= block length").concat(
                    &block
                        .factor(m + n + 1, block.len())
                        .expect("m + n <= block length"),
                )
            })
            .collect();
    }

    let mut deduped: Vec<ReductionCandidate> = Vec::new();
    for cand in raw {
        if !deduped
            .iter()
            .any(|kept| kept.new_blocks == cand.new_blocks)
        {
            deduped.push(cand);
        }
    }
    deduped
}

/// One reduction: the chosen candidate, the per-block splits
/// `wi = x_i y_i z_i`, and the decompositions before and after.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionStep {
    pub candidate: ReductionCandidate,
    pub splits: Vec<(Word, Word, Word)>,
    pub before: Decomposition,
    pub after: Decomposition,
}

/// Applies one reduction along `candidate`. The letters and all image
/// splits survive unchanged; every block drops its `y_i`, and the root
/// shrinks by `|y| ` cells. Every structural claim is re-checked, so a
/// returned step is sound by construction.
pub fn reduce_step_with(
    f: &Morphism,
    d: &Decomposition,
    candidate: &ReductionCandidate,
) -> Result<ReductionStep> {
    let cell = f.uniform_length()?;
    let k = d.k;
    let internal = |msg: &str| Error::Internal(msg.to_string());
    if candidate.block == 0 || candidate.block > k {
        return Err(internal("candidate block index out of range"));
    }
    let own = candidate.x.concat(&candidate.y).concat(&candidate.z);
    if own != d.blocks[candidate.block - 1] {
        return Err(internal("candidate does not split its block"));
    }
    let expected_anchor = if candidate.extended {
        cell
    } else {
        d.s[candidate.block - 1].len() + cell * candidate.x.len()
    };
    if candidate.anchor != expected_anchor {
        return Err(internal("candidate anchor is inconsistent"));
    }

    let t1 = candidate.anchor;
    let t2 = t1 + cell * candidate.y.len();
    let splits: Vec<(Word, Word, Word)> = aligned_splits(d, cell, t1, t2)
        .into_iter()
        .enumerate()
        .map(|(i, (m, n))| {
            let block = &d.blocks[i];
            (
                block.prefix(m).expect("m fits"),
                block.factor(m + 1, m + n).expect("m + n fits"),
                block.factor(m + n + 1, block.len()).expect("tail fits"),
            )
        })
        .collect();

    for (i, (x_i, _, _)) in splits.iter().enumerate() {
        let shift = d.s[i].len() + cell * x_i.len();
        // The image of x_i must end in the half-open cell window (t1 - cell, t1];
        // the greedy split guarantees it unless the candidate was malformed.
        if shift > t1 || shift + cell <= t1 {
            return Err(internal("aligned split misses the anchor window"));
        }
    }
    if splits
        .iter()
        .any(|(_, y_i, _)| y_i.len() != candidate.y.len())
    {
        return Err(internal("every block must drop the same number of letters"));
    }
    let (own_x, own_y, own_z) = &splits[candidate.block - 1];
    if (own_x, own_y, own_z) != (&candidate.x, &candidate.y, &candidate.z) {
        return Err(internal("greedy split disagrees with the candidate split"));
    }

    let new_blocks: Vec<Word> = splits.iter().map(|(x_i, _, z_i)| x_i.concat(z_i)).collect();
    if new_blocks != candidate.new_blocks {
        return Err(internal("candidate advertised different reduced blocks"));
    }

    let domain = f.domain();
    let mut word = domain.word_from_letters(vec![d.letters[0]]);
    for i in 1..=k {
        word = word
            .concat(&new_blocks[i - 1])
            .concat(&domain.word_from_letters(vec![d.letters[i]]));
    }
    if word.len() >= d.word.len() {
        return Err(internal("reduction must strictly shorten the word"));
    }
    let root = d.s[candidate.block - 1]
        .concat(&f.apply(&new_blocks[candidate.block - 1])?)
        .concat(&d.p[candidate.block]);

    let after = Decomposition {
        k,
        word,
        root,
        letters: d.letters.clone(),
        blocks: new_blocks,
        p: d.p.clone(),
        s: d.s.clone(),
    };
    after.validate(f)?;
    if after.is_synchronized() != d.is_synchronized() {
        return Err(internal(
            "reduction must preserve the synchronization status",
        ));
    }

    Ok(ReductionStep {
        candidate: candidate.clone(),
        splits,
        before: d.clone(),
        after,
    })
}

/// Applies one reduction along the first candidate.
pub fn reduce_step(f: &Morphism, d: &Decomposition) -> Result<ReductionStep> {
    let candidates = reduction_candidates(d);
    match candidates.first() {
        Some(c) => reduce_step_with(f, d, c),
        None => Err(Error::NoReductionCandidate),
    }
}

/// A full reduction run: the starting decomposition, every step taken, and
/// the terminal decomposition, whose word always splits into the test-set
/// shape.
#[derive(Clone, Debug)]
pub struct ReductionTrace {
    pub initial: Decomposition,
    pub steps: Vec<ReductionStep>,
    pub terminal: Decomposition,
}

/// Decomposes a direct cover and reduces it to exhaustion. Terminates
/// because every step strictly shortens the word; the terminal word is in
/// the long part of the test set by construction.
pub fn reduce_fully(f: &Morphism, cover: &DirectCover) -> Result<ReductionTrace> {
    let initial = decompose(f, cover)?;
    let mut current = initial.clone();
    let mut steps = Vec::new();
    loop {
        let candidates = reduction_candidates(&current);
        let Some(first) = candidates.first() else {
            break;
        };
        let step = reduce_step_with(f, &current, first)?;
        current = step.after.clone();
        steps.push(step);
        if steps.len() > initial.word.len() {
            return Err(Error::Internal(
                "reduction took more steps than letters; it must be diverging".to_string(),
            ));
        }
    }
    if !in_v(&current.word, current.k) {
        return Err(Error::Internal(
            "a fully reduced word must split into the test-set shape".to_string(),
        ));
    }
    Ok(ReductionTrace {
        initial,
        steps,
        terminal: current,
    })
}

/// Structural sanity of one step, phrased on the split shape alone:
/// whenever some block contributes no `x_i`, the dropped span must have
/// started immediately after a cell boundary inside the first possible
/// cell; whenever some block contributes no `z_i`, the chosen block cannot
/// either, and its right split must be minimal. Valid steps always pass.
pub fn check_remark_spere(step: &ReductionStep) -> bool {
    let d = &step.before;
    let cand = &step.candidate;
    let chosen_s = if cand.extended {
        0
    } else {
        d.s[cand.block - 1].len()
    };
    for (q, (x_q, _, z_q)) in step.splits.iter().enumerate() {
        if x_q.is_empty() {
            let single = cand.extended || cand.x.len() == 1;
            if !(single && chosen_s < d.s[q].len()) {
                return false;
            }
        }
        if z_q.is_empty() && !(cand.z.is_empty() && d.p[cand.block].len() <= d.p[q + 1].len()) {
            return false;
        }
    }
    true
}

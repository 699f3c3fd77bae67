//! Two-sided subshifts over a finite alphabet, together with the cylinder
//! sets, partitions, windows and measures everything else is built from.
//!
//! The acting group is fixed to the integers; group elements act by the left
//! shift, so translating a constraint by `s` moves its coordinates by `+s`.
//! Sets are finite unions of cylinders, which keeps membership of a finite
//! segment decidable.

mod measure;
mod segment;
mod transfer;

pub use measure::MeasureModel;
pub use segment::generate_segment;
pub use transfer::{feasible_word, Feasibility, Segment, SiteConstraint, TransferGraph};

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

pub type Symbol = u8;

/// Finite alphabet; symbols are `0..size`.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Alphabet {
    size: u8,
}

impl Alphabet {
    pub fn new(size: u8) -> Result<Self> {
        if size == 0 {
            return Err(Error::InvalidInput("alphabet must have size >= 1".into()));
        }
        Ok(Alphabet { size })
    }

    pub fn size(&self) -> u8 {
        self.size
    }

    pub fn symbols(&self) -> impl Iterator<Item = Symbol> {
        0..self.size
    }

    pub fn contains(&self, s: Symbol) -> bool {
        s < self.size
    }
}

/// A finite word over an alphabet. Serialized as a digit string for symbols
/// up to 9 and as an integer array otherwise.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word(Vec<Symbol>);

impl Word {
    pub fn new(symbols: Vec<Symbol>) -> Self {
        Word(symbols)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut out = Vec::with_capacity(text.len());
        for ch in text.chars() {
            let d = ch
                .to_digit(10)
                .ok_or_else(|| Error::InvalidInput(format!("bad word character {ch:?}")))?;
            out.push(d as Symbol);
        }
        Ok(Word(out))
    }

    pub fn is_over(&self, alphabet: &Alphabet) -> bool {
        self.0.iter().all(|&s| alphabet.contains(s))
    }

    pub fn contains_factor(&self, factor: &Word) -> bool {
        if factor.is_empty() {
            return true;
        }
        self.0
            .windows(factor.len())
            .any(|w| w == factor.symbols())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "w\"{self}\"")
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.iter().all(|&s| s <= 9) {
            for s in &self.0 {
                write!(f, "{s}")?;
            }
            Ok(())
        } else {
            write!(f, "{:?}", self.0)
        }
    }
}

impl Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0.iter().all(|&s| s <= 9) {
            ser.serialize_str(&self.to_string())
        } else {
            self.0.serialize(ser)
        }
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Text(String),
            Symbols(Vec<Symbol>),
        }
        match Repr::deserialize(de)? {
            Repr::Text(t) => Word::parse(&t).map_err(serde::de::Error::custom),
            Repr::Symbols(v) => Ok(Word(v)),
        }
    }
}

/// Deterministic generators for subshifts whose language is not given by a
/// finite forbidden list.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GeneratorKind {
    /// The sparse transitive-pair sequence `p` over `{0,1}`; see
    /// [`crate::examples::transitive_pair`].
    TransitivePairP,
    /// Its companion sequence `q`.
    TransitivePairQ,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum SubshiftKind {
    FullShift,
    Sft { forbidden: Vec<Word> },
    Generator { name: GeneratorKind },
}

/// A two-sided subshift: full shift, shift of finite type via forbidden
/// words, or a named generator.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct SubshiftSpec {
    pub alphabet: Alphabet,
    pub kind: SubshiftKind,
}

impl SubshiftSpec {
    pub fn full_shift(k: u8) -> Result<Self> {
        Ok(SubshiftSpec {
            alphabet: Alphabet::new(k)?,
            kind: SubshiftKind::FullShift,
        })
    }

    pub fn sft(k: u8, forbidden: Vec<Word>) -> Result<Self> {
        let alphabet = Alphabet::new(k)?;
        for w in &forbidden {
            if w.is_empty() {
                return Err(Error::InvalidInput("forbidden words must be nonempty".into()));
            }
            if !w.is_over(&alphabet) {
                return Err(Error::InvalidInput(format!(
                    "forbidden word {w} is not over the alphabet"
                )));
            }
        }
        Ok(SubshiftSpec {
            alphabet: Alphabet::new(k)?,
            kind: SubshiftKind::Sft { forbidden },
        })
    }

    /// The golden-mean shift: binary, no two adjacent ones.
    pub fn golden_mean() -> Self {
        SubshiftSpec::sft(2, vec![Word::parse("11").unwrap()]).unwrap()
    }

    pub fn is_generator(&self) -> bool {
        matches!(self.kind, SubshiftKind::Generator { .. })
    }

    pub fn forbidden(&self) -> &[Word] {
        match &self.kind {
            SubshiftKind::Sft { forbidden } => forbidden,
            _ => &[],
        }
    }

    /// Is the word a factor of some bi-infinite point of the subshift?
    pub fn admits(&self, word: &Word) -> Result<bool> {
        if !word.is_over(&self.alphabet) {
            return Ok(false);
        }
        match &self.kind {
            SubshiftKind::FullShift => Ok(true),
            SubshiftKind::Sft { .. } => {
                let graph = TransferGraph::build(self, 1)?;
                Ok(graph.admits(word))
            }
            SubshiftKind::Generator { .. } => Err(Error::UnsupportedSpec(
                "language membership is undecidable for generator specs".into(),
            )),
        }
    }

    /// All admissible words of the given length, in lexicographic order.
    pub fn admissible_words(&self, len: usize) -> Result<Vec<Word>> {
        match &self.kind {
            SubshiftKind::FullShift => {
                let k = self.alphabet.size();
                let mut out = Vec::new();
                let mut cur = vec![0u8; len];
                loop {
                    out.push(Word::new(cur.clone()));
                    let mut i = len;
                    loop {
                        if i == 0 {
                            return Ok(out);
                        }
                        i -= 1;
                        if cur[i] + 1 < k {
                            cur[i] += 1;
                            cur[i + 1..].fill(0);
                            break;
                        }
                    }
                }
            }
            SubshiftKind::Sft { .. } => {
                let graph = TransferGraph::build(self, 1)?;
                Ok(graph.admissible_words(len))
            }
            SubshiftKind::Generator { .. } => Err(Error::UnsupportedSpec(
                "cannot enumerate the language of a generator spec".into(),
            )),
        }
    }
}

/// The cylinder `{ x : x[anchor .. anchor+|word|) = word }`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct CylinderSet {
    pub anchor: i64,
    pub word: Word,
}

impl CylinderSet {
    pub fn new(anchor: i64, word: Word) -> Self {
        CylinderSet { anchor, word }
    }

    pub fn parse(anchor: i64, text: &str) -> Result<Self> {
        Ok(CylinderSet::new(anchor, Word::parse(text)?))
    }

    /// Coordinate range `[start, end)` constrained by this cylinder.
    pub fn span(&self) -> (i64, i64) {
        (self.anchor, self.anchor + self.word.len() as i64)
    }

    pub fn translate(&self, shift: i64) -> Self {
        CylinderSet::new(self.anchor + shift, self.word.clone())
    }
}

/// A finite union of cylinders.
#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
pub struct BorelLikeSet {
    pub cylinders: Vec<CylinderSet>,
}

impl BorelLikeSet {
    pub fn new(cylinders: Vec<CylinderSet>) -> Self {
        BorelLikeSet { cylinders }
    }

    pub fn cylinder(anchor: i64, word: Word) -> Self {
        BorelLikeSet::new(vec![CylinderSet::new(anchor, word)])
    }

    pub fn empty() -> Self {
        BorelLikeSet::new(Vec::new())
    }

    pub fn is_empty_union(&self) -> bool {
        self.cylinders.is_empty()
    }

    /// Tightest coordinate range containing every member cylinder, or None
    /// for the empty union.
    pub fn span(&self) -> Option<(i64, i64)> {
        let mut it = self.cylinders.iter().map(|c| c.span());
        let first = it.next()?;
        Some(it.fold(first, |(a, b), (c, d)| (a.min(c), b.max(d))))
    }

    pub fn translate(&self, shift: i64) -> Self {
        BorelLikeSet::new(self.cylinders.iter().map(|c| c.translate(shift)).collect())
    }

    /// Does a segment starting at `start` lie in the union? Decidable only
    /// when the segment covers the whole span.
    pub fn contains_segment(&self, start: i64, symbols: &[Symbol]) -> Result<bool> {
        for cyl in &self.cylinders {
            let (a, b) = cyl.span();
            if a < start || b > start + symbols.len() as i64 {
                return Err(Error::InvalidInput(
                    "segment does not cover the set's anchors".into(),
                ));
            }
            let off = (a - start) as usize;
            if &symbols[off..off + cyl.word.len()] == cyl.word.symbols() {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// The set of admissible depth words (over `[lo, hi)`) whose cylinder is
    /// contained in this union. Used for syntactic disjointness and measure
    /// computations at a common refinement depth.
    pub fn expand_over(&self, spec: &SubshiftSpec, lo: i64, hi: i64) -> Result<Vec<Word>> {
        let len = (hi - lo) as usize;
        let words = spec.admissible_words(len)?;
        let mut out = Vec::new();
        for w in words {
            if self.contains_segment(lo, w.symbols())? {
                out.push(w);
            }
        }
        Ok(out)
    }
}

/// A tuple of sets whose joint independence is measured.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct SetTuple {
    pub components: Vec<BorelLikeSet>,
}

impl SetTuple {
    pub fn new(components: Vec<BorelLikeSet>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidInput("tuple must have k >= 1 components".into()));
        }
        Ok(SetTuple { components })
    }

    /// The two depth-1 symbol cylinders `([a]_0, [b]_0)`.
    pub fn symbol_pair(a: Symbol, b: Symbol) -> Self {
        SetTuple {
            components: vec![
                BorelLikeSet::cylinder(0, Word::new(vec![a])),
                BorelLikeSet::cylinder(0, Word::new(vec![b])),
            ],
        }
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn span(&self) -> Option<(i64, i64)> {
        let mut acc: Option<(i64, i64)> = None;
        for c in &self.components {
            if let Some((a, b)) = c.span() {
                acc = Some(match acc {
                    None => (a, b),
                    Some((x, y)) => (x.min(a), y.max(b)),
                });
            }
        }
        acc
    }

    /// Syntactic pairwise disjointness at a common refinement depth.
    pub fn components_disjoint(&self, spec: &SubshiftSpec) -> Result<bool> {
        let Some((lo, hi)) = self.span() else {
            return Ok(true);
        };
        let mut expanded = Vec::with_capacity(self.len());
        for c in &self.components {
            let words: std::collections::BTreeSet<Word> =
                c.expand_over(spec, lo, hi)?.into_iter().collect();
            expanded.push(words);
        }
        for i in 0..expanded.len() {
            for j in i + 1..expanded.len() {
                if expanded[i].intersection(&expanded[j]).next().is_some() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// A finite set of integers used as an observation window. Følner windows
/// are intervals; sequence-entropy index sets may be arbitrary.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Window {
    elements: Vec<i64>,
}

impl Window {
    pub fn new(mut elements: Vec<i64>) -> Result<Self> {
        elements.sort_unstable();
        elements.dedup();
        if elements.is_empty() {
            return Err(Error::InvalidInput("window must be nonempty".into()));
        }
        Ok(Window { elements })
    }

    /// The interval `[a, b)`.
    pub fn interval(a: i64, b: i64) -> Result<Self> {
        if b <= a {
            return Err(Error::InvalidInput(format!("empty interval [{a}, {b})")));
        }
        Ok(Window {
            elements: (a..b).collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[i64] {
        &self.elements
    }

    pub fn min(&self) -> i64 {
        self.elements[0]
    }

    pub fn max(&self) -> i64 {
        *self.elements.last().unwrap()
    }

    pub fn translate(&self, shift: i64) -> Self {
        Window {
            elements: self.elements.iter().map(|e| e + shift).collect(),
        }
    }

    pub fn contains(&self, e: i64) -> bool {
        self.elements.binary_search(&e).is_ok()
    }
}

/// A labelled partition of the subshift into unions of depth-`r` cylinders
/// anchored at 0. Every admissible `r`-word carries exactly one label.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Partition {
    depth: usize,
    labels: BTreeMap<Word, u32>,
    block_count: u32,
}

impl Partition {
    pub fn new(spec: &SubshiftSpec, depth: usize, labels: BTreeMap<Word, u32>) -> Result<Self> {
        if depth == 0 {
            return Err(Error::InvalidInput("partition depth must be >= 1".into()));
        }
        let words = spec.admissible_words(depth)?;
        if words.len() != labels.len() || words.iter().any(|w| !labels.contains_key(w)) {
            return Err(Error::InvalidInput(
                "partition must label exactly the admissible words of its depth".into(),
            ));
        }
        let block_count = labels.values().copied().max().map_or(0, |m| m + 1);
        Ok(Partition {
            depth,
            labels,
            block_count,
        })
    }

    /// The depth-1 partition into symbol cylinders.
    pub fn symbols(spec: &SubshiftSpec) -> Result<Self> {
        let words = spec.admissible_words(1)?;
        let labels = words
            .into_iter()
            .enumerate()
            .map(|(i, w)| (w, i as u32))
            .collect();
        Partition::new(spec, 1, labels)
    }

    /// The one-block partition at the given depth.
    pub fn trivial(spec: &SubshiftSpec, depth: usize) -> Result<Self> {
        let words = spec.admissible_words(depth)?;
        let labels = words.into_iter().map(|w| (w, 0)).collect();
        Partition::new(spec, depth, labels)
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn block_count(&self) -> u32 {
        self.block_count
    }

    pub fn labels(&self) -> &BTreeMap<Word, u32> {
        &self.labels
    }

    pub fn label_of(&self, word: &Word) -> Option<u32> {
        self.labels.get(word).copied()
    }

    /// Blocks as unions of cylinders anchored at 0 (for use as a cover).
    pub fn blocks_as_sets(&self) -> Vec<BorelLikeSet> {
        let mut blocks = vec![Vec::new(); self.block_count as usize];
        for (w, &l) in &self.labels {
            blocks[l as usize].push(CylinderSet::new(0, w.clone()));
        }
        blocks.into_iter().map(BorelLikeSet::new).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn word_parse_and_display_roundtrip() {
        let w = Word::parse("0110").unwrap();
        assert_eq!(w.len(), 4);
        assert_eq!(w.to_string(), "0110");
        assert!(w.contains_factor(&Word::parse("11").unwrap()));
        assert!(!w.contains_factor(&Word::parse("00").unwrap()));
    }

    #[test]
    fn word_serde_uses_digit_strings() {
        let w = Word::parse("101").unwrap();
        let json = serde_json::to_string(&w).unwrap();
        assert_eq!(json, "\"101\"");
        let back: Word = serde_json::from_str(&json).unwrap();
        assert_eq!(back, w);
        let wide = Word::new(vec![0, 12, 3]);
        let json = serde_json::to_string(&wide).unwrap();
        assert_eq!(json, "[0,12,3]");
        let back: Word = serde_json::from_str(&json).unwrap();
        assert_eq!(back, wide);
    }

    #[test]
    fn golden_mean_language() {
        let gm = SubshiftSpec::golden_mean();
        assert!(gm.admits(&Word::parse("10101").unwrap()).unwrap());
        assert!(!gm.admits(&Word::parse("0110").unwrap()).unwrap());
        // Word counts follow the Fibonacci recursion.
        let counts: Vec<usize> = (1..=8)
            .map(|n| gm.admissible_words(n).unwrap().len())
            .collect();
        assert_eq!(counts, vec![2, 3, 5, 8, 13, 21, 34, 55]);
    }

    #[test]
    fn empty_sft_language_detected() {
        let spec = SubshiftSpec::sft(2, vec![Word::parse("0").unwrap(), Word::parse("1").unwrap()])
            .unwrap();
        assert!(!spec.admits(&Word::parse("0").unwrap()).unwrap());
        assert!(spec.admissible_words(3).unwrap().is_empty());
    }

    #[test]
    fn tuple_disjointness_is_syntactic() {
        let spec = SubshiftSpec::full_shift(2).unwrap();
        let disjoint = SetTuple::symbol_pair(0, 1);
        assert!(disjoint.components_disjoint(&spec).unwrap());
        let overlapping = SetTuple::new(vec![
            BorelLikeSet::cylinder(0, Word::parse("0").unwrap()),
            BorelLikeSet::cylinder(0, Word::parse("01").unwrap()),
        ])
        .unwrap();
        assert!(!overlapping.components_disjoint(&spec).unwrap());
    }

    #[test]
    fn windows_sort_and_translate() {
        let w = Window::new(vec![4, 0, 2]).unwrap();
        assert_eq!(w.elements(), &[0, 2, 4]);
        assert_eq!(w.translate(-2).elements(), &[-2, 0, 2]);
        assert!(Window::interval(3, 3).is_err());
    }
}

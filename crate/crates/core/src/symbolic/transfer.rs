//! Transfer-graph machinery for shifts of finite type and the constraint
//! feasibility kernel.
//!
//! A word is in the language of an SFT iff it avoids every forbidden factor
//! and extends to a bi-infinite point. Both are decided on a de Bruijn-style
//! graph over admissible blocks, trimmed to the states that lie on two-sided
//! infinite paths.

use super::{BorelLikeSet, SubshiftKind, SubshiftSpec, Symbol, Word};
use crate::error::{Error, Result};
use crate::util::Bits;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

const STATE_CAP: usize = 1 << 20;

/// Graph over admissible blocks of a fixed length; edges are one-symbol
/// extensions that stay admissible.
pub struct TransferGraph {
    k: u8,
    block: usize,
    states: Vec<Word>,
    index: BTreeMap<Word, usize>,
    /// `next[u][c]` is the successor of state `u` under symbol `c`.
    next: Vec<Vec<Option<usize>>>,
    alive: Vec<bool>,
}

impl TransferGraph {
    /// Build the graph with blocks of length `max(requested, m-1, 1)` where
    /// `m` is the longest forbidden word.
    pub fn build(spec: &SubshiftSpec, requested: usize) -> Result<TransferGraph> {
        let forbidden: &[Word] = match &spec.kind {
            SubshiftKind::Generator { .. } => {
                return Err(Error::UnsupportedSpec(
                    "transfer graphs exist only for full shifts and SFTs".into(),
                ))
            }
            SubshiftKind::FullShift => &[],
            SubshiftKind::Sft { forbidden } => forbidden,
        };
        let k = spec.alphabet.size();
        let base = forbidden.iter().map(|w| w.len()).max().unwrap_or(1);
        let block = requested.max(base.saturating_sub(1)).max(1);
        if (k as f64).powi(block as i32) > STATE_CAP as f64 {
            return Err(Error::DepthCapExceeded { cap: STATE_CAP });
        }

        let mut states = Vec::new();
        let mut prefix: Vec<Symbol> = Vec::with_capacity(block);
        enumerate_states(k, block, forbidden, &mut prefix, &mut states);
        let index: BTreeMap<Word, usize> = states
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), i))
            .collect();

        let mut next = vec![vec![None; k as usize]; states.len()];
        let mut buf: Vec<Symbol> = Vec::with_capacity(block + 1);
        for (u, w) in states.iter().enumerate() {
            for c in 0..k {
                buf.clear();
                buf.extend_from_slice(w.symbols());
                buf.push(c);
                if has_forbidden_suffix(&buf, forbidden) {
                    continue;
                }
                let v = Word::new(buf[1..].to_vec());
                if let Some(&vi) = index.get(&v) {
                    next[u][c as usize] = Some(vi);
                }
            }
        }

        let mut graph = TransferGraph {
            k,
            block,
            states,
            index,
            next,
            alive: Vec::new(),
        };
        graph.trim();
        Ok(graph)
    }

    /// Drop states without both an incoming and an outgoing live edge, to a
    /// fixpoint. Survivors are exactly the blocks on bi-infinite paths.
    fn trim(&mut self) {
        let n = self.states.len();
        let mut alive = vec![true; n];
        loop {
            let mut changed = false;
            let mut has_in = vec![false; n];
            for u in 0..n {
                if !alive[u] {
                    continue;
                }
                for c in 0..self.k as usize {
                    if let Some(v) = self.next[u][c] {
                        if alive[v] {
                            has_in[v] = true;
                        }
                    }
                }
            }
            for u in 0..n {
                if !alive[u] {
                    continue;
                }
                let has_out = (0..self.k as usize)
                    .any(|c| self.next[u][c].is_some_and(|v| alive[v]));
                if !has_out || !has_in[u] {
                    alive[u] = false;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        self.alive = alive;
    }

    pub fn block_len(&self) -> usize {
        self.block
    }

    pub fn has_points(&self) -> bool {
        self.alive.iter().any(|&a| a)
    }

    fn live_states(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.states.len()).filter(|&u| self.alive[u])
    }

    /// Language membership for an arbitrary-length word.
    pub fn admits(&self, word: &Word) -> bool {
        if word.len() <= self.block {
            return self
                .live_states()
                .any(|u| self.states[u].contains_factor(word));
        }
        let Some(&start) = self.index.get(&Word::new(word.symbols()[..self.block].to_vec()))
        else {
            return false;
        };
        if !self.alive[start] {
            return false;
        }
        let mut u = start;
        for &c in &word.symbols()[self.block..] {
            match self.next[u][c as usize] {
                Some(v) if self.alive[v] => u = v,
                _ => return false,
            }
        }
        true
    }

    /// All admissible words of the given length, lexicographically sorted.
    pub fn admissible_words(&self, len: usize) -> Vec<Word> {
        if len == 0 {
            return if self.has_points() {
                vec![Word::empty()]
            } else {
                Vec::new()
            };
        }
        if len >= self.block {
            // Walk paths of length len - block from every live state.
            let mut out = Vec::new();
            for u in self.live_states() {
                let mut word = self.states[u].symbols().to_vec();
                self.extend_paths(u, len, &mut word, &mut out);
            }
            out.sort_unstable();
            out.dedup();
            out
        } else {
            let mut set = BTreeSet::new();
            for u in self.live_states() {
                let syms = self.states[u].symbols();
                for w in syms.windows(len) {
                    set.insert(Word::new(w.to_vec()));
                }
            }
            set.into_iter().collect()
        }
    }

    fn extend_paths(&self, u: usize, len: usize, word: &mut Vec<Symbol>, out: &mut Vec<Word>) {
        if word.len() == len {
            out.push(Word::new(word.clone()));
            return;
        }
        for c in 0..self.k {
            if let Some(v) = self.next[u][c as usize] {
                if self.alive[v] {
                    word.push(c);
                    self.extend_paths(v, len, word, out);
                    word.pop();
                }
            }
        }
    }
}

fn enumerate_states(k: u8, block: usize, forbidden: &[Word], prefix: &mut Vec<Symbol>, out: &mut Vec<Word>) {
    if prefix.len() == block {
        out.push(Word::new(prefix.clone()));
        return;
    }
    for c in 0..k {
        prefix.push(c);
        if !has_forbidden_suffix(prefix, forbidden) {
            enumerate_states(k, block, forbidden, prefix, out);
        }
        prefix.pop();
    }
}

fn has_forbidden_suffix(buf: &[Symbol], forbidden: &[Word]) -> bool {
    forbidden.iter().any(|f| {
        f.len() <= buf.len() && &buf[buf.len() - f.len()..] == f.symbols()
    })
}

/// A letter constraint at a site or over a window of sites.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SiteConstraint {
    /// `x(pos) = sym`.
    Symbol { pos: i64, sym: Symbol },
    /// `x` lies in the union of cylinders (anchors are absolute coordinates).
    InSet { set: BorelLikeSet },
    /// `x[pos .. pos+|word|) != word`.
    AvoidWord { pos: i64, word: Word },
}

impl SiteConstraint {
    fn span(&self) -> Option<(i64, i64)> {
        match self {
            SiteConstraint::Symbol { pos, .. } => Some((*pos, pos + 1)),
            SiteConstraint::InSet { set } => set.span(),
            SiteConstraint::AvoidWord { pos, word } => Some((*pos, pos + word.len() as i64)),
        }
    }
}

/// A realizable restriction of a point of the subshift.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Segment {
    pub start: i64,
    pub word: Word,
}

impl Segment {
    pub fn symbol_at(&self, pos: i64) -> Option<Symbol> {
        if pos < self.start || pos >= self.start + self.word.len() as i64 {
            return None;
        }
        Some(self.word.symbols()[(pos - self.start) as usize])
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Feasibility {
    Witness(Segment),
    Infeasible,
}

impl Feasibility {
    pub fn is_witness(&self) -> bool {
        matches!(self, Feasibility::Witness(_))
    }
}

struct WindowCheck {
    end: i64,
    len: usize,
    /// Options `(offset_from_window_start, word)`; at least one must match.
    allow: Vec<(usize, Word)>,
    /// Entire-window words that must not match.
    avoid: Vec<Word>,
}

/// Decide whether some point of the subshift satisfies all constraints and
/// return the lexicographically least witness segment over the constrained
/// range. Sound and complete for full shifts and SFTs.
pub fn feasible_word(spec: &SubshiftSpec, constraints: &[SiteConstraint]) -> Result<Feasibility> {
    if spec.is_generator() {
        return Err(Error::UnsupportedSpec(
            "feasible_word requires a full shift or SFT; wrap generator specs in orbit-sample mode"
                .into(),
        ));
    }
    for c in constraints {
        match c {
            SiteConstraint::Symbol { sym, .. } if !spec.alphabet.contains(*sym) => {
                return Err(Error::InvalidInput(format!("symbol {sym} outside alphabet")));
            }
            SiteConstraint::InSet { set } => {
                for cyl in &set.cylinders {
                    if !cyl.word.is_over(&spec.alphabet) {
                        return Err(Error::InvalidInput(format!(
                            "cylinder word {} outside alphabet",
                            cyl.word
                        )));
                    }
                }
            }
            _ => {}
        }
    }

    // An empty union is the empty set: no witness can exist.
    if constraints
        .iter()
        .any(|c| matches!(c, SiteConstraint::InSet { set } if set.is_empty_union()))
    {
        return Ok(Feasibility::Infeasible);
    }

    let spans: Vec<(i64, i64)> = constraints.iter().filter_map(|c| c.span()).collect();
    let (lo, hi) = match spans.iter().copied().reduce(|(a, b), (c, d)| (a.min(c), b.max(d))) {
        Some((a, b)) => (a, b - 1),
        None => {
            // No effective constraints: any point works iff the language is
            // nonempty.
            let graph = TransferGraph::build(spec, 1)?;
            return Ok(if graph.has_points() {
                Feasibility::Witness(Segment {
                    start: 0,
                    word: graph.admissible_words(1).remove(0),
                })
            } else {
                Feasibility::Infeasible
            });
        }
    };

    // Compile constraints into per-site symbols and window checks.
    let mut fixed: BTreeMap<i64, Symbol> = BTreeMap::new();
    let mut checks: Vec<WindowCheck> = Vec::new();
    let mut max_window = 1usize;
    for c in constraints {
        match c {
            SiteConstraint::Symbol { pos, sym } => {
                if let Some(prev) = fixed.insert(*pos, *sym) {
                    if prev != *sym {
                        return Ok(Feasibility::Infeasible);
                    }
                }
            }
            SiteConstraint::InSet { set } => {
                let (a, b) = set.span().unwrap();
                let len = (b - a) as usize;
                max_window = max_window.max(len);
                let allow = set
                    .cylinders
                    .iter()
                    .map(|cyl| ((cyl.anchor - a) as usize, cyl.word.clone()))
                    .collect();
                checks.push(WindowCheck {
                    end: b - 1,
                    len,
                    allow,
                    avoid: Vec::new(),
                });
            }
            SiteConstraint::AvoidWord { pos, word } => {
                if word.is_empty() {
                    return Ok(Feasibility::Infeasible);
                }
                let len = word.len();
                max_window = max_window.max(len);
                checks.push(WindowCheck {
                    end: pos + len as i64 - 1,
                    len,
                    allow: Vec::new(),
                    avoid: vec![word.clone()],
                });
            }
        }
    }

    let graph = TransferGraph::build(spec, max_window.saturating_sub(1).max(1))?;
    if !graph.has_points() {
        return Ok(Feasibility::Infeasible);
    }
    let w = graph.block_len();
    let n_states = graph.states.len();
    let steps = (hi - lo + 1) as usize;

    // Layer t holds the block covering [lo - w + t, lo + t); layer 0 is the
    // unconstrained prelude, layers 1..=steps consume sites lo..=hi.
    let mut reach: Vec<Bits> = Vec::with_capacity(steps + 1);
    let mut first = Bits::new(n_states);
    for u in graph.live_states() {
        first.set(u);
    }
    reach.push(first);

    let site = |t: usize| lo + t as i64 - 1;
    let mut grouped: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for (i, chk) in checks.iter().enumerate() {
        grouped.entry(chk.end).or_default().push(i);
    }

    let mut scratch: Vec<Symbol> = vec![0; w + 1];
    for t in 1..=steps {
        let pos = site(t);
        let mut layer = Bits::new(n_states);
        let prev = &reach[t - 1];
        for u in 0..n_states {
            if !prev.get(u) {
                continue;
            }
            for c in 0..graph.k {
                if let Some(sym) = fixed.get(&pos) {
                    if *sym != c {
                        continue;
                    }
                }
                let Some(v) = graph.next[u][c as usize] else {
                    continue;
                };
                if !graph.alive[v] {
                    continue;
                }
                if let Some(idxs) = grouped.get(&pos) {
                    scratch[..w].copy_from_slice(graph.states[u].symbols());
                    scratch[w] = c;
                    if !idxs
                        .iter()
                        .all(|&i| window_ok(&checks[i], &scratch))
                    {
                        continue;
                    }
                }
                layer.set(v);
            }
        }
        if layer.count() == 0 {
            return Ok(Feasibility::Infeasible);
        }
        reach.push(layer);
    }

    // Backward pruning, then a greedy lexicographically-least walk.
    let mut feas: Vec<Bits> = reach.clone();
    for t in (0..steps).rev() {
        let pos = site(t + 1);
        let mut layer = Bits::new(n_states);
        for u in 0..n_states {
            if !reach[t].get(u) {
                continue;
            }
            for c in 0..graph.k {
                if let Some(sym) = fixed.get(&pos) {
                    if *sym != c {
                        continue;
                    }
                }
                let Some(v) = graph.next[u][c as usize] else {
                    continue;
                };
                if !feas[t + 1].get(v) {
                    continue;
                }
                if let Some(idxs) = grouped.get(&pos) {
                    scratch[..w].copy_from_slice(graph.states[u].symbols());
                    scratch[w] = c;
                    if !idxs.iter().all(|&i| window_ok(&checks[i], &scratch)) {
                        continue;
                    }
                }
                layer.set(u);
                break;
            }
        }
        feas[t] = layer;
    }
    let Some(start_state) = (0..n_states).find(|&u| feas[0].get(u)) else {
        return Ok(Feasibility::Infeasible);
    };

    let mut symbols: Vec<Symbol> = graph.states[start_state].symbols().to_vec();
    let mut u = start_state;
    for t in 1..=steps {
        let pos = site(t);
        let mut advanced = false;
        for c in 0..graph.k {
            if let Some(sym) = fixed.get(&pos) {
                if *sym != c {
                    continue;
                }
            }
            let Some(v) = graph.next[u][c as usize] else {
                continue;
            };
            if !feas[t].get(v) {
                continue;
            }
            if let Some(idxs) = grouped.get(&pos) {
                scratch[..w].copy_from_slice(graph.states[u].symbols());
                scratch[w] = c;
                if !idxs.iter().all(|&i| window_ok(&checks[i], &scratch)) {
                    continue;
                }
            }
            symbols.push(c);
            u = v;
            advanced = true;
            break;
        }
        debug_assert!(advanced, "forward walk lost feasibility");
        if !advanced {
            return Ok(Feasibility::Infeasible);
        }
    }

    let word = Word::new(symbols[w..].to_vec());
    Ok(Feasibility::Witness(Segment { start: lo, word }))
}

fn window_ok(chk: &WindowCheck, scratch: &[Symbol]) -> bool {
    let win = &scratch[scratch.len() - chk.len..];
    for avoid in &chk.avoid {
        if win == avoid.symbols() {
            return false;
        }
    }
    if chk.allow.is_empty() {
        return true;
    }
    chk.allow
        .iter()
        .any(|(off, word)| &win[*off..off + word.len()] == word.symbols())
}

/// Check a stored witness segment against constraints and the language.
pub fn validate_witness(
    spec: &SubshiftSpec,
    constraints: &[SiteConstraint],
    segment: &Segment,
) -> Result<bool> {
    if !spec.is_generator() && !spec.admits(&segment.word)? {
        return Ok(false);
    }
    Ok(segment_satisfies(constraints, segment))
}

/// Pure constraint check against a segment, with no language query. Sites
/// outside the segment fail the check.
pub fn segment_satisfies(constraints: &[SiteConstraint], segment: &Segment) -> bool {
    for c in constraints {
        match c {
            SiteConstraint::Symbol { pos, sym } => {
                if segment.symbol_at(*pos) != Some(*sym) {
                    return false;
                }
            }
            SiteConstraint::InSet { set } => {
                let ok = set.cylinders.iter().any(|cyl| {
                    cyl.word.symbols().iter().enumerate().all(|(i, &s)| {
                        segment.symbol_at(cyl.anchor + i as i64) == Some(s)
                    })
                });
                if !ok {
                    return false;
                }
            }
            SiteConstraint::AvoidWord { pos, word } => {
                let all_inside = (0..word.len() as i64).all(|i| segment.symbol_at(pos + i).is_some());
                if all_inside {
                    let matches = word
                        .symbols()
                        .iter()
                        .enumerate()
                        .all(|(i, &s)| segment.symbol_at(pos + i as i64) == Some(s));
                    if matches {
                        return false;
                    }
                }
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::CylinderSet;

    fn sym(pos: i64, sym: Symbol) -> SiteConstraint {
        SiteConstraint::Symbol { pos, sym }
    }

    #[test]
    fn full_shift_realizes_positioned_symbols() {
        let spec = SubshiftSpec::full_shift(2).unwrap();
        let out = feasible_word(&spec, &[sym(0, 1), sym(3, 0)]).unwrap();
        let Feasibility::Witness(seg) = out else {
            panic!("expected witness");
        };
        assert_eq!(seg.start, 0);
        assert_eq!(seg.word.len(), 4);
        assert_eq!(seg.symbol_at(0), Some(1));
        assert_eq!(seg.symbol_at(3), Some(0));
    }

    #[test]
    fn golden_mean_blocks_adjacent_ones() {
        let gm = SubshiftSpec::golden_mean();
        assert_eq!(
            feasible_word(&gm, &[sym(0, 1), sym(1, 1)]).unwrap(),
            Feasibility::Infeasible
        );
        let out = feasible_word(&gm, &[sym(0, 1), sym(2, 1)]).unwrap();
        let Feasibility::Witness(seg) = out else {
            panic!("expected witness");
        };
        assert_eq!(seg.word, Word::parse("101").unwrap());
    }

    #[test]
    fn avoid_and_inset_windows() {
        let spec = SubshiftSpec::full_shift(2).unwrap();
        // x in [1]_0 union [1]_1, avoiding word 11 at 0 and 10 at 0: only 01.
        let set = BorelLikeSet::new(vec![
            CylinderSet::parse(0, "1").unwrap(),
            CylinderSet::parse(1, "1").unwrap(),
        ]);
        let out = feasible_word(
            &spec,
            &[
                SiteConstraint::InSet { set },
                SiteConstraint::AvoidWord { pos: 0, word: Word::parse("11").unwrap() },
                SiteConstraint::AvoidWord { pos: 0, word: Word::parse("10").unwrap() },
            ],
        )
        .unwrap();
        let Feasibility::Witness(seg) = out else {
            panic!("expected witness");
        };
        assert_eq!(seg.word, Word::parse("01").unwrap());
    }

    #[test]
    fn empty_union_is_infeasible() {
        let spec = SubshiftSpec::full_shift(2).unwrap();
        let out = feasible_word(&spec, &[SiteConstraint::InSet { set: BorelLikeSet::empty() }])
            .unwrap();
        assert_eq!(out, Feasibility::Infeasible);
    }

    #[test]
    fn generator_specs_are_rejected() {
        let spec = SubshiftSpec {
            alphabet: crate::symbolic::Alphabet::new(2).unwrap(),
            kind: SubshiftKind::Generator { name: crate::symbolic::GeneratorKind::TransitivePairP },
        };
        assert!(matches!(
            feasible_word(&spec, &[]),
            Err(Error::UnsupportedSpec(_))
        ));
    }

    /// Exhaustive oracle: for constrained ranges up to 16, feasibility agrees
    /// with scanning every word of that length.
    #[test]
    fn matches_exhaustive_enumeration() {
        let gm = SubshiftSpec::golden_mean();
        let full = SubshiftSpec::full_shift(2).unwrap();
        for spec in [&gm, &full] {
            for trial in 0u64..200 {
                let mut state = trial.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(1);
                let mut next = || {
                    state ^= state << 13;
                    state ^= state >> 7;
                    state ^= state << 17;
                    state
                };
                let range = 3 + (next() % 14) as i64; // up to 16
                let mut constraints = Vec::new();
                for _ in 0..(1 + next() % 4) {
                    let pos = (next() % range as u64) as i64;
                    match next() % 3 {
                        0 => constraints.push(sym(pos, (next() % 2) as u8)),
                        1 => {
                            let len = 1 + (next() % 2) as usize;
                            if pos + (len as i64) <= range {
                                let word = Word::new((0..len).map(|_| (next() % 2) as u8).collect());
                                constraints.push(SiteConstraint::AvoidWord { pos, word });
                            }
                        }
                        _ => {
                            let len = 1 + (next() % 2) as usize;
                            if pos + (len as i64) <= range {
                                let word = Word::new((0..len).map(|_| (next() % 2) as u8).collect());
                                constraints.push(SiteConstraint::InSet {
                                    set: BorelLikeSet::cylinder(pos, word),
                                });
                            }
                        }
                    }
                }
                let got = feasible_word(spec, &constraints).unwrap();
                // Oracle: scan all admissible words over [0, range).
                let mut oracle_hit = None;
                for w in spec.admissible_words(range as usize).unwrap() {
                    let seg = Segment { start: 0, word: w };
                    if segment_satisfies(&constraints, &seg) {
                        oracle_hit = Some(seg);
                        break;
                    }
                }
                match (&got, &oracle_hit) {
                    (Feasibility::Witness(seg), Some(_)) => {
                        assert!(validate_witness(spec, &constraints, seg).unwrap());
                    }
                    (Feasibility::Infeasible, None) => {}
                    _ => panic!("solver/oracle mismatch on {constraints:?}: {got:?} vs {oracle_hit:?}"),
                }
            }
        }
    }
}

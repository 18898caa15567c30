//! Stair and spiral decompositions, the universal k-track and k-spiral, and
//! block-preserving embeddings into them.
//!
//! Blocks are stored as lists of host values in left-to-right order. Block
//! indices in this module are 1-based where they mirror the usual `B_i`
//! notation and 0-based where they index a `Vec`.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::{
    contains_bruteforce, in_skew_star, reduce_sequence, skew_star_witness, Occurrence, Permutation,
};
use crate::twirl;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DecompositionKind {
    Stair,
    Spiral,
}

/// Blocks B_1..B_m of a stair-decomposition. Always satisfies the
/// positional rules; [`StairDecomposition::is_monotone`] tells whether every
/// block is also increasing (a genuine rather than relaxed decomposition).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StairDecomposition {
    host: Permutation,
    blocks: Vec<Vec<usize>>,
}

/// Blocks B_1..B_m of a spiral decomposition; see [`StairDecomposition`]
/// for the relaxed/genuine distinction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpiralDecomposition {
    host: Permutation,
    blocks: Vec<Vec<usize>>,
}

/// Checks that `blocks` partition the host's values and returns them with
/// each block sorted left to right.
fn normalize_partition(host: &Permutation, blocks: &[Vec<usize>]) -> Result<Vec<Vec<usize>>> {
    let n = host.len();
    let pos = host.positions();
    let mut seen = vec![false; n + 1];
    let mut out = Vec::with_capacity(blocks.len());
    for block in blocks {
        let mut b = block.clone();
        for &v in &b {
            if v == 0 || v > n {
                return Err(Error::InvalidDecomposition(format!(
                    "element {v} is not a value of the host (size {n})"
                )));
            }
            if seen[v] {
                return Err(Error::InvalidDecomposition(format!(
                    "element {v} appears in more than one block"
                )));
            }
            seen[v] = true;
        }
        b.sort_by_key(|&v| pos[v - 1]);
        out.push(b);
    }
    if let Some(missing) = (1..=n).find(|&v| !seen[v]) {
        return Err(Error::InvalidDecomposition(format!(
            "element {missing} is not covered by any block"
        )));
    }
    Ok(out)
}

/// Relative-position queries on the elements of one permutation.
pub(crate) struct Grid<'a> {
    pos: Vec<usize>,
    _host: &'a Permutation,
}

impl<'a> Grid<'a> {
    pub(crate) fn new(host: &'a Permutation) -> Self {
        Grid {
            pos: host.positions(),
            _host: host,
        }
    }

    pub(crate) fn pos(&self, v: usize) -> usize {
        self.pos[v - 1]
    }

    /// Every element of `a` is above every element of `b`.
    pub(crate) fn above(&self, a: &[usize], b: &[usize]) -> bool {
        match (a.iter().min(), b.iter().max()) {
            (Some(lo), Some(hi)) => lo > hi,
            _ => true,
        }
    }

    /// Every element of `a` is to the right of every element of `b`.
    pub(crate) fn right_of(&self, a: &[usize], b: &[usize]) -> bool {
        let lo = a.iter().map(|&v| self.pos(v)).min();
        let hi = b.iter().map(|&v| self.pos(v)).max();
        match (lo, hi) {
            (Some(lo), Some(hi)) => lo > hi,
            _ => true,
        }
    }

    /// `block` is listed left to right; true if its values increase.
    pub(crate) fn increasing(block: &[usize]) -> bool {
        block.windows(2).all(|w| w[0] < w[1])
    }

    pub(crate) fn decreasing(block: &[usize]) -> bool {
        block.windows(2).all(|w| w[0] > w[1])
    }
}

fn stair_violation(host: &Permutation, blocks: &[Vec<usize>], monotone: bool) -> Option<String> {
    let g = Grid::new(host);
    let m = blocks.len();
    let b = |i: usize| -> &[usize] { &blocks[i - 1] };
    if monotone {
        for i in 1..=m {
            if !Grid::increasing(b(i)) {
                return Some(format!("B_{i} is not increasing"));
            }
        }
    }
    for i in 1..=m / 2 {
        if !g.above(b(2 * i), b(2 * i - 1)) {
            return Some(format!("B_{} is not above B_{}", 2 * i, 2 * i - 1));
        }
    }
    for i in 1..m.div_ceil(2) {
        if !g.right_of(b(2 * i + 1), b(2 * i)) {
            return Some(format!("B_{} is not right of B_{}", 2 * i + 1, 2 * i));
        }
    }
    for i in 1..=m.saturating_sub(2) {
        if !(g.above(b(i + 2), b(i)) && g.right_of(b(i + 2), b(i))) {
            return Some(format!("B_{} is not above and right of B_{i}", i + 2));
        }
    }
    None
}

fn spiral_violation(host: &Permutation, blocks: &[Vec<usize>], monotone: bool) -> Option<String> {
    let g = Grid::new(host);
    let m = blocks.len();
    let b = |i: usize| -> &[usize] { &blocks[i - 1] };
    if monotone {
        for i in 1..=m {
            let ok = if i % 2 == 1 {
                Grid::decreasing(b(i))
            } else {
                Grid::increasing(b(i))
            };
            if !ok {
                return Some(format!(
                    "B_{i} is not {}",
                    if i % 2 == 1 { "decreasing" } else { "increasing" }
                ));
            }
        }
    }
    let mut later: Vec<Vec<usize>> = vec![Vec::new(); m + 1];
    for i in (1..m).rev() {
        let mut acc = later[i + 1].clone();
        acc.extend_from_slice(b(i + 1));
        later[i] = acc;
    }
    for (i, rest) in later.iter().enumerate().skip(2) {
        let (cur, prev) = (b(i), b(i - 1));
        let (ok, rule) = match i % 4 {
            0 => (
                g.above(cur, prev) && g.above(rest, prev) && g.right_of(prev, rest),
                "above / later blocks above-left",
            ),
            1 => (
                g.right_of(prev, cur) && g.above(prev, rest) && g.right_of(prev, rest),
                "left / later blocks below-left",
            ),
            2 => (
                g.above(prev, cur) && g.above(prev, rest) && g.right_of(rest, prev),
                "below / later blocks below-right",
            ),
            _ => (
                g.right_of(cur, prev) && g.above(rest, prev) && g.right_of(rest, prev),
                "right / later blocks above-right",
            ),
        };
        if !ok {
            return Some(format!("B_{i} breaks the rule relative to B_{} ({rule})", i - 1));
        }
    }
    None
}

/// True iff `blocks` is a (genuine) stair-decomposition of `host`.
/// Errors if `blocks` do not partition the host's elements.
pub fn validate_stair(host: &Permutation, blocks: &[Vec<usize>]) -> Result<bool> {
    let blocks = normalize_partition(host, blocks)?;
    Ok(stair_violation(host, &blocks, true).is_none())
}

pub fn validate_stair_relaxed(host: &Permutation, blocks: &[Vec<usize>]) -> Result<bool> {
    let blocks = normalize_partition(host, blocks)?;
    Ok(stair_violation(host, &blocks, false).is_none())
}

pub fn validate_spiral(host: &Permutation, blocks: &[Vec<usize>]) -> Result<bool> {
    let blocks = normalize_partition(host, blocks)?;
    Ok(spiral_violation(host, &blocks, true).is_none())
}

pub fn validate_spiral_relaxed(host: &Permutation, blocks: &[Vec<usize>]) -> Result<bool> {
    let blocks = normalize_partition(host, blocks)?;
    Ok(spiral_violation(host, &blocks, false).is_none())
}

fn block_index_of(n: usize, blocks: &[Vec<usize>]) -> Vec<usize> {
    let mut idx = vec![0; n];
    for (i, b) in blocks.iter().enumerate() {
        for &v in b {
            idx[v - 1] = i + 1;
        }
    }
    idx
}

impl StairDecomposition {
    pub fn new(host: Permutation, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let blocks = normalize_partition(&host, &blocks)?;
        if let Some(why) = stair_violation(&host, &blocks, true) {
            return Err(Error::InvalidDecomposition(why));
        }
        Ok(StairDecomposition { host, blocks })
    }

    pub fn relaxed(host: Permutation, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let blocks = normalize_partition(&host, &blocks)?;
        if let Some(why) = stair_violation(&host, &blocks, false) {
            return Err(Error::InvalidDecomposition(why));
        }
        Ok(StairDecomposition { host, blocks })
    }

    pub fn host(&self) -> &Permutation {
        &self.host
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_monotone(&self) -> bool {
        self.blocks.iter().all(|b| Grid::increasing(b))
    }

    /// `block_index()[v - 1]` is the 1-based block containing value `v`.
    pub fn block_index(&self) -> Vec<usize> {
        block_index_of(self.host.len(), &self.blocks)
    }

    pub(crate) fn require_monotone(&self) -> Result<()> {
        if self.is_monotone() {
            Ok(())
        } else {
            Err(Error::InvalidDecomposition(
                "a genuine stair-decomposition (increasing blocks) is required".into(),
            ))
        }
    }
}

impl SpiralDecomposition {
    pub fn new(host: Permutation, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let blocks = normalize_partition(&host, &blocks)?;
        if let Some(why) = spiral_violation(&host, &blocks, true) {
            return Err(Error::InvalidDecomposition(why));
        }
        Ok(SpiralDecomposition { host, blocks })
    }

    pub fn relaxed(host: Permutation, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let blocks = normalize_partition(&host, &blocks)?;
        if let Some(why) = spiral_violation(&host, &blocks, false) {
            return Err(Error::InvalidDecomposition(why));
        }
        Ok(SpiralDecomposition { host, blocks })
    }

    pub fn host(&self) -> &Permutation {
        &self.host
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_monotone(&self) -> bool {
        self.blocks.iter().enumerate().all(|(i, b)| {
            if i % 2 == 0 {
                Grid::decreasing(b)
            } else {
                Grid::increasing(b)
            }
        })
    }

    pub fn block_index(&self) -> Vec<usize> {
        block_index_of(self.host.len(), &self.blocks)
    }
}

/// Either kind of decomposition, as exchanged in JSON:
/// `{"host": [..], "blocks": [[..], ..], "kind": "stair" | "spiral"}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decomposition {
    Stair(StairDecomposition),
    Spiral(SpiralDecomposition),
}

#[derive(Serialize, Deserialize)]
struct DecompositionJson {
    host: Vec<usize>,
    blocks: Vec<Vec<usize>>,
    kind: DecompositionKind,
}

impl Decomposition {
    pub fn kind(&self) -> DecompositionKind {
        match self {
            Decomposition::Stair(_) => DecompositionKind::Stair,
            Decomposition::Spiral(_) => DecompositionKind::Spiral,
        }
    }

    pub fn host(&self) -> &Permutation {
        match self {
            Decomposition::Stair(d) => d.host(),
            Decomposition::Spiral(d) => d.host(),
        }
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        match self {
            Decomposition::Stair(d) => d.blocks(),
            Decomposition::Spiral(d) => d.blocks(),
        }
    }

    pub fn block_count(&self) -> usize {
        self.blocks().len()
    }

    pub fn block_index(&self) -> Vec<usize> {
        block_index_of(self.host().len(), self.blocks())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(DecompositionJson {
            host: self.host().values().to_vec(),
            blocks: self.blocks().to_vec(),
            kind: self.kind(),
        })
        .expect("decomposition serializes")
    }

    /// Parses and validates (relaxed rules) a decomposition document.
    pub fn from_json(value: serde_json::Value) -> Result<Self> {
        let doc: DecompositionJson = serde_json::from_value(value)?;
        let host = Permutation::new(doc.host)?;
        Ok(match doc.kind {
            DecompositionKind::Stair => {
                Decomposition::Stair(StairDecomposition::relaxed(host, doc.blocks)?)
            }
            DecompositionKind::Spiral => {
                Decomposition::Spiral(SpiralDecomposition::relaxed(host, doc.blocks)?)
            }
        })
    }
}

impl From<StairDecomposition> for Decomposition {
    fn from(d: StairDecomposition) -> Self {
        Decomposition::Stair(d)
    }
}

impl From<SpiralDecomposition> for Decomposition {
    fn from(d: SpiralDecomposition) -> Self {
        Decomposition::Spiral(d)
    }
}

fn require_321_avoiding(perm: &Permutation) -> Result<()> {
    let pattern = Permutation::decreasing(3);
    match contains_bruteforce(&pattern, perm) {
        Some(witness) => Err(Error::NotInClass {
            class: "Av(321)",
            pattern: pattern.to_string(),
            witness,
        }),
        None => Ok(()),
    }
}

/// Greedy stair-decomposition of a 321-avoiding permutation.
///
/// Odd blocks take the longest run `1, 2, …` of the smallest remaining
/// values that appears left to right; even blocks take the maximal
/// increasing prefix of what remains in position order.
pub fn stair_decompose(perm: &Permutation) -> Result<StairDecomposition> {
    require_321_avoiding(perm)?;
    let pos = perm.positions();
    let mut remaining: Vec<usize> = perm.values().to_vec();
    let mut blocks = Vec::new();
    while !remaining.is_empty() {
        let odd = blocks.len() % 2 == 0;
        let block: Vec<usize> = if odd {
            let mut by_value = remaining.clone();
            by_value.sort_unstable();
            let mut take = 1;
            while take < by_value.len() && pos[by_value[take] - 1] > pos[by_value[take - 1] - 1] {
                take += 1;
            }
            by_value.truncate(take);
            by_value
        } else {
            let mut take = 1;
            while take < remaining.len() && remaining[take] > remaining[take - 1] {
                take += 1;
            }
            remaining[..take].to_vec()
        };
        let mut in_block = vec![false; perm.len() + 1];
        for &v in &block {
            in_block[v] = true;
        }
        remaining.retain(|&v| !in_block[v]);
        blocks.push(block);
    }
    StairDecomposition::new(perm.clone(), blocks)
}

/// Largest `k` accepted by [`k_track`] and [`k_spiral`].
pub const MAX_TRACK_K: usize = 4096;

/// The k-track with its canonical stair-decomposition into `k` blocks of
/// size `k`: odd blocks come from the lower of the two interleaved
/// increasing sequences, even blocks from the upper one.
pub fn k_track(k: usize) -> Result<StairDecomposition> {
    if k == 0 {
        return Err(Error::TooSmall {
            what: "track size k",
            min: 1,
            got: 0,
        });
    }
    if k > MAX_TRACK_K {
        return Err(Error::TooLarge {
            what: "track size k",
            max: MAX_TRACK_K,
            got: k,
        });
    }
    // Raw sequence with the block (1-based) of every entry.
    let mut raw = Vec::with_capacity(k * k);
    let mut block_of = Vec::with_capacity(k * k);
    let pairs = if k.is_multiple_of(2) { k * k / 2 } else { (k * k - k) / 2 };
    for j in 1..=pairs {
        let group = (j - 1) / k;
        raw.push(2 * j - 1);
        block_of.push(2 * group + 1);
        raw.push(2 * k + 2 * j - 2);
        block_of.push(2 * group + 2);
    }
    if k % 2 == 1 {
        for t in 0..k {
            raw.push(k * k - k + 1 + 2 * t);
            block_of.push(k);
        }
    }
    let host = reduce_sequence(&raw)?;
    let mut blocks = vec![Vec::with_capacity(k); k];
    for (p, &b) in block_of.iter().enumerate() {
        blocks[b - 1].push(host.values()[p]);
    }
    StairDecomposition::new(host, blocks)
}

/// A linear order on the host's elements extending, for every `i < m`, the
/// left-to-right order on `B_i ∪ B_{i+1}` (odd `i`) or the bottom-to-top
/// order on it (even `i`). Blocks are added one at a time; the elements of
/// a new block are placed at the midpoint of the gap between their already
/// placed neighbours from the previous block.
pub(crate) fn stair_linear_order(dec: &StairDecomposition) -> Result<Vec<usize>> {
    dec.require_monotone()?;
    let blocks = dec.blocks();
    let pos = dec.host().positions();
    let m = blocks.len();
    if m == 0 {
        return Ok(Vec::new());
    }
    let mut order: Vec<usize> = blocks[0].clone();
    if m >= 2 {
        order.extend_from_slice(&blocks[1]);
        order.sort_by_key(|&v| pos[v - 1]);
    }
    for b in 3..=m {
        let (prev, new) = (&blocks[b - 2], &blocks[b - 1]);
        if new.is_empty() {
            continue;
        }
        if prev.is_empty() {
            order.extend_from_slice(new);
            continue;
        }
        // Relation <_{b-1}: positions when b-1 is odd, values when even.
        let key = |v: usize| if (b - 1) % 2 == 1 { pos[v - 1] } else { v };
        let mut merged: Vec<(usize, bool)> = prev
            .iter()
            .map(|&v| (v, false))
            .chain(new.iter().map(|&v| (v, true)))
            .collect();
        merged.sort_by_key(|&(v, _)| key(v));
        // Group new elements by the pair of old neighbours around them.
        let mut groups: Vec<(Option<usize>, Option<usize>, Vec<usize>)> = Vec::new();
        let mut last_old = None;
        let mut pending = Vec::new();
        for &(v, is_new) in &merged {
            if is_new {
                pending.push(v);
            } else {
                if !pending.is_empty() {
                    groups.push((last_old, Some(v), std::mem::take(&mut pending)));
                }
                last_old = Some(v);
            }
        }
        if !pending.is_empty() {
            groups.push((last_old, None, pending));
        }
        let index_of: HashMap<usize, usize> =
            order.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        // Right to left, so earlier insertion points stay valid.
        for (lo, hi, elems) in groups.into_iter().rev() {
            let start = lo.map_or(0, |v| index_of[&v] + 1);
            let end = hi.map_or(order.len(), |v| index_of[&v]);
            if start > end {
                return Err(Error::Internal(
                    "consecutive block orders are inconsistent".into(),
                ));
            }
            let at = (start + end) / 2;
            order.splice(at..at, elems);
        }
    }
    Ok(order)
}

/// Block-preserving occurrence of a stair-decomposed permutation in the
/// `q`-track: the `j`-th element in the extended order, lying in `B_i`, is
/// sent to the `j`-th smallest element of the track block `A_i`.
pub fn embed_in_track(dec: &StairDecomposition, q: usize) -> Result<Occurrence> {
    let k = dec.host().len();
    let need = k.max(dec.block_count()).max(1);
    if q < need {
        return Err(Error::TooSmall {
            what: "track size q",
            min: need,
            got: q,
        });
    }
    let order = stair_linear_order(dec)?;
    let track = k_track(q)?;
    let track_pos = track.host().positions();
    let mut track_blocks: Vec<Vec<usize>> = track.blocks().to_vec();
    for b in &mut track_blocks {
        b.sort_unstable();
    }
    let block_of = dec.block_index();
    let mut image = vec![0; k];
    for (j, &v) in order.iter().enumerate() {
        image[v - 1] = track_blocks[block_of[v - 1] - 1][j];
    }
    let occ = Occurrence(
        dec.host()
            .values()
            .iter()
            .map(|&v| track_pos[image[v - 1] - 1])
            .collect(),
    );
    Ok(occ)
}

/// Splits a skew-merged permutation into a decreasing part `D` and an
/// increasing part `I`. Elements are labelled in position order, trying
/// `D` first; failed suffix states are memoized on `(index, last value of
/// the other sequence)`.
fn skew_partition(perm: &Permutation) -> Option<Vec<bool>> {
    let vals = perm.values();
    let n = vals.len();
    // `in_dec[i]` is the label of position i.
    let mut in_dec = vec![false; n];
    let mut failed: std::collections::HashSet<(usize, usize, usize)> = Default::default();

    // last_dec uses n+1 as "none", last_inc uses 0 as "none".
    fn go(
        i: usize,
        last_dec: usize,
        last_inc: usize,
        vals: &[usize],
        in_dec: &mut [bool],
        failed: &mut std::collections::HashSet<(usize, usize, usize)>,
    ) -> bool {
        if i == vals.len() {
            return true;
        }
        if failed.contains(&(i, last_dec, last_inc)) {
            return false;
        }
        let x = vals[i];
        if x < last_dec {
            in_dec[i] = true;
            if go(i + 1, x, last_inc, vals, in_dec, failed) {
                return true;
            }
        }
        if x > last_inc {
            in_dec[i] = false;
            if go(i + 1, last_dec, x, vals, in_dec, failed) {
                return true;
            }
        }
        failed.insert((i, last_dec, last_inc));
        false
    }

    if go(0, n + 1, 0, vals, &mut in_dec, &mut failed) {
        Some(in_dec)
    } else {
        None
    }
}

/// Spiral decomposition of a permutation in Av(2143, 3412, 3142), peeled
/// off the canonical decreasing/increasing partition. Empty blocks are kept
/// so that block indices retain their meaning modulo 4.
pub fn spiral_decompose(perm: &Permutation) -> Result<SpiralDecomposition> {
    if let Some((pattern, witness)) = skew_star_witness(perm) {
        return Err(Error::NotInClass {
            class: "Av(2143, 3412, 3142)",
            pattern: pattern.to_string(),
            witness,
        });
    }
    // An increasing permutation is taken with an empty decreasing part, so
    // it becomes a single even block.
    let labels = if Grid::increasing(perm.values()) {
        vec![false; perm.len()]
    } else {
        skew_partition(perm)
            .ok_or_else(|| Error::Internal("skew-merged permutation without a partition".into()))?
    };
    let vals = perm.values();
    let pos = perm.positions();
    let mut dec: Vec<usize> = Vec::new();
    let mut inc: Vec<usize> = Vec::new();
    for (i, &v) in vals.iter().enumerate() {
        if labels[i] {
            dec.push(v);
        } else {
            inc.push(v);
        }
    }
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut empty_run = 0;
    while !(dec.is_empty() && inc.is_empty()) {
        let i = blocks.len() + 1;
        let block: Vec<usize> = match i % 4 {
            0 => {
                let right = dec.iter().map(|&v| pos[v - 1]).max().unwrap_or(0);
                inc.iter().copied().filter(|&v| pos[v - 1] > right).collect()
            }
            1 => {
                let top = inc.iter().copied().max().unwrap_or(0);
                dec.iter().copied().filter(|&v| v > top).collect()
            }
            2 => {
                let left = dec.iter().map(|&v| pos[v - 1]).min().unwrap_or(usize::MAX);
                inc.iter().copied().filter(|&v| pos[v - 1] < left).collect()
            }
            _ => {
                let bottom = inc.iter().copied().min().unwrap_or(usize::MAX);
                dec.iter().copied().filter(|&v| v < bottom).collect()
            }
        };
        if block.is_empty() {
            empty_run += 1;
            if empty_run >= 4 {
                return Err(Error::Internal("spiral peeling stalled".into()));
            }
        } else {
            empty_run = 0;
        }
        dec.retain(|v| !block.contains(v));
        inc.retain(|v| !block.contains(v));
        blocks.push(block);
    }
    SpiralDecomposition::new(perm.clone(), blocks)
}

/// The k-spiral: the twirl of the k-track, with the twirled track blocks.
pub fn k_spiral(k: usize) -> Result<SpiralDecomposition> {
    let track = k_track(k)?;
    twirl::twirl(&track)
}

/// Block-preserving occurrence in the `q`-spiral, obtained by untwirling,
/// embedding into the `q`-track and twirling the occurrence back.
pub fn embed_in_spiral(dec: &SpiralDecomposition, q: usize) -> Result<Occurrence> {
    let k = dec.host().len();
    let need = k.max(dec.block_count()).max(1);
    if q < need {
        return Err(Error::TooSmall {
            what: "spiral size q",
            min: need,
            got: q,
        });
    }
    let flat = twirl::untwirl_with_map(dec)?;
    let occ = embed_in_track(&flat.decomposition, q)?;
    let track = k_track(q)?;
    let spiral = twirl::twirl_with_map(&track)?;
    twirl::transport_occurrence(&flat.map.inverse(), &spiral.map, &occ)
}

/// True iff `occ` maps every element of `pattern`'s block `i` into block `i`
/// of `text`, for each block of the pattern.
pub fn is_block_preserving(
    pattern_blocks: &[Vec<usize>],
    pattern: &Permutation,
    text_blocks: &[Vec<usize>],
    text: &Permutation,
    occ: &Occurrence,
) -> bool {
    if pattern_blocks.len() > text_blocks.len() || occ.len() != pattern.len() {
        return false;
    }
    let text_block = block_index_of(text.len(), text_blocks);
    let pattern_pos = pattern.positions();
    pattern_blocks.iter().enumerate().all(|(i, b)| {
        b.iter().all(|&v| {
            let image = text.at(occ.indices()[pattern_pos[v - 1] - 1]);
            text_block[image - 1] == i + 1
        })
    })
}

/// Convenience: whether `spiral_decompose` would accept `perm`.
pub fn has_spiral_decomposition(perm: &Permutation) -> bool {
    in_skew_star(perm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::is_occurrence;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn greedy_stair_examples() {
        let d = stair_decompose(&p("241635")).unwrap();
        assert_eq!(d.blocks(), &[vec![1], vec![2, 4, 6], vec![3, 5]]);
        let d = stair_decompose(&Permutation::identity(5)).unwrap();
        assert_eq!(d.blocks(), &[vec![1, 2, 3, 4, 5]]);
        let d = stair_decompose(&p("213")).unwrap();
        assert_eq!(d.blocks(), &[vec![1], vec![2, 3]]);
        assert_eq!(stair_decompose(&Permutation::empty()).unwrap().block_count(), 0);
    }

    #[test]
    fn greedy_rejects_321_with_witness() {
        match stair_decompose(&p("4321")) {
            Err(Error::NotInClass { witness, .. }) => {
                assert_eq!(witness, Occurrence(vec![1, 2, 3]))
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn validate_stair_examples() {
        assert!(validate_stair(&p("1324"), &[vec![1, 2], vec![3, 4]]).unwrap());
        assert!(!validate_stair(&p("1324"), &[vec![1, 4], vec![2, 3]]).unwrap());
        assert!(validate_stair(&p("1324"), &[vec![1, 2], vec![3]]).is_err());
        assert!(validate_stair(&p("1324"), &[vec![1, 2], vec![2, 3, 4]]).is_err());
        // relaxed accepts a non-monotone block that is positioned correctly
        assert!(validate_stair_relaxed(&p("21"), &[vec![1, 2]]).unwrap());
        assert!(!validate_stair(&p("21"), &[vec![1, 2]]).unwrap());
    }

    #[test]
    fn track_examples() {
        assert_eq!(k_track(1).unwrap().host(), &p("1"));
        let t2 = k_track(2).unwrap();
        assert_eq!(t2.host(), &p("1324"));
        assert_eq!(t2.blocks(), &[vec![1, 2], vec![3, 4]]);
        let t3 = k_track(3).unwrap();
        assert_eq!(t3.host(), &"1 4 2 6 3 8 5 7 9".parse::<Permutation>().unwrap());
        assert_eq!(t3.blocks(), &[vec![1, 2, 3], vec![4, 6, 8], vec![5, 7, 9]]);
        assert!(k_track(0).is_err());
        for k in 1..=8 {
            let t = k_track(k).unwrap();
            assert_eq!(t.host().len(), k * k);
            assert!(t.blocks().iter().all(|b| b.len() == k));
        }
    }

    #[test]
    fn track_embedding_example() {
        let d = stair_decompose(&p("213")).unwrap();
        let occ = embed_in_track(&d, 3).unwrap();
        assert_eq!(occ, Occurrence(vec![2, 3, 6]));
        let single = stair_decompose(&p("1")).unwrap();
        assert_eq!(embed_in_track(&single, 1).unwrap(), Occurrence(vec![1]));
        assert!(matches!(
            embed_in_track(&d, 2),
            Err(Error::TooSmall { min: 3, .. })
        ));
    }

    #[test]
    fn linear_order_examples() {
        let d = StairDecomposition::new(p("1324"), vec![vec![1, 2], vec![3, 4]]).unwrap();
        assert_eq!(stair_linear_order(&d).unwrap(), vec![1, 3, 2, 4]);
        let d = stair_decompose(&p("213")).unwrap();
        assert_eq!(stair_linear_order(&d).unwrap(), vec![2, 1, 3]);
    }

    #[test]
    fn spiral_examples() {
        let d = spiral_decompose(&p("4132")).unwrap();
        assert_eq!(d.blocks(), &[vec![4, 3, 2], vec![1]]);
        assert_eq!(spiral_decompose(&Permutation::empty()).unwrap().block_count(), 0);
        let d = spiral_decompose(&Permutation::identity(4)).unwrap();
        assert_eq!(d.blocks(), &[vec![], vec![1, 2, 3, 4]]);
        let d = spiral_decompose(&p("2134")).unwrap();
        assert!(validate_spiral(d.host(), d.blocks()).unwrap());
        assert!(matches!(
            spiral_decompose(&p("3142")),
            Err(Error::NotInClass { .. })
        ));
    }

    #[test]
    fn spiral_track_examples() {
        let s2 = k_spiral(2).unwrap();
        assert_eq!(s2.host(), &p("4132"));
        assert_eq!(s2.blocks(), &[vec![4, 3], vec![1, 2]]);
        assert_eq!(k_spiral(1).unwrap().host(), &p("1"));
        assert!(in_skew_star(k_spiral(3).unwrap().host()));
    }

    #[test]
    fn spiral_embedding_example() {
        let d = SpiralDecomposition::new(p("21"), vec![vec![2, 1]]).unwrap();
        let occ = embed_in_spiral(&d, 2).unwrap();
        assert_eq!(occ, Occurrence(vec![1, 3]));
        let s2 = k_spiral(2).unwrap();
        assert!(is_occurrence(d.host(), s2.host(), &occ).unwrap());
        let one = SpiralDecomposition::new(p("1"), vec![vec![1]]).unwrap();
        assert_eq!(embed_in_spiral(&one, 1).unwrap(), Occurrence(vec![1]));
    }

    #[test]
    fn json_round_trip() {
        let d: Decomposition = stair_decompose(&p("241635")).unwrap().into();
        let v = d.to_json();
        assert_eq!(v["kind"], "stair");
        assert_eq!(Decomposition::from_json(v).unwrap(), d);
        let bad = serde_json::json!({"host": [1, 2], "blocks": [[1]], "kind": "stair"});
        assert!(Decomposition::from_json(bad).is_err());
    }
}

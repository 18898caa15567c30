//! The twirl: a bijection taking a (relaxed) stair-decomposed permutation to
//! a (relaxed) spiral-decomposed one, and its inverse.
//!
//! Columns are grouped as `G_j = B_{2j-1} ∪ B_{2j}` and rows as
//! `H_0 = B_1`, `H_j = B_{2j} ∪ B_{2j+1}`. The twirl lays the odd column
//! groups out from the left edge inward and the even ones, mirrored, from
//! the right edge inward; rows are treated the same way, with the odd row
//! groups rising from the bottom and the even ones, mirrored, hanging from
//! the top. Block `B_i` keeps its index.

use crate::decomp::{SpiralDecomposition, StairDecomposition};
use crate::error::{Error, Result};
use crate::perm::{is_occurrence, Occurrence, Permutation};

/// A bijection between the elements of two permutations, by value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElementMap {
    source: Permutation,
    target: Permutation,
    forward: Vec<usize>,
}

impl ElementMap {
    pub fn source(&self) -> &Permutation {
        &self.source
    }

    pub fn target(&self) -> &Permutation {
        &self.target
    }

    /// Value in the target of the source element with value `v`.
    pub fn apply(&self, v: usize) -> usize {
        self.forward[v - 1]
    }

    pub fn forward(&self) -> &[usize] {
        &self.forward
    }

    pub fn inverse(&self) -> ElementMap {
        let mut back = vec![0; self.forward.len()];
        for (i, &w) in self.forward.iter().enumerate() {
            back[w - 1] = i + 1;
        }
        ElementMap {
            source: self.target.clone(),
            target: self.source.clone(),
            forward: back,
        }
    }
}

/// A transformed decomposition together with the element correspondence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transformed<D> {
    pub decomposition: D,
    pub map: ElementMap,
}

/// Lays the grouped elements out in a new coordinate order. `groups[j]` is
/// already in source order; odd-numbered groups (counting from `first`)
/// go outside-in from the low end, the others reversed from the high end.
fn spiral_layout(groups: &[Vec<usize>], first: usize) -> Vec<usize> {
    let mut low = Vec::new();
    let mut high = Vec::new();
    for (j, g) in groups.iter().enumerate() {
        if (j + first) % 2 == 1 {
            low.extend_from_slice(g);
        } else {
            high.push(g.iter().rev().copied().collect::<Vec<_>>());
        }
    }
    for g in high.into_iter().rev() {
        low.extend(g);
    }
    low
}

fn column_groups(blocks: &[Vec<usize>], key: impl Fn(usize) -> usize) -> Vec<Vec<usize>> {
    blocks
        .chunks(2)
        .map(|c| {
            let mut g: Vec<usize> = c.iter().flatten().copied().collect();
            g.sort_by_key(|&v| key(v));
            g
        })
        .collect()
}

fn row_groups(blocks: &[Vec<usize>], key: impl Fn(usize) -> usize) -> Vec<Vec<usize>> {
    let mut groups = Vec::new();
    if let Some(first) = blocks.first() {
        let mut g = first.clone();
        g.sort_by_key(|&v| key(v));
        groups.push(g);
        groups.extend(column_groups(&blocks[1..], key));
    }
    groups
}

/// Builds the permutation whose elements (labelled by source value) appear
/// left to right in `x_order` and bottom to top in `y_order`, plus the map.
fn assemble(source: &Permutation, x_order: &[usize], y_order: &[usize]) -> (Permutation, Vec<usize>) {
    let n = source.len();
    let mut new_value = vec![0; n];
    for (r, &v) in y_order.iter().enumerate() {
        new_value[v - 1] = r + 1;
    }
    let values: Vec<usize> = x_order.iter().map(|&v| new_value[v - 1]).collect();
    (Permutation::from_vec_unchecked(values), new_value)
}

fn relabel(blocks: &[Vec<usize>], map: &[usize]) -> Vec<Vec<usize>> {
    blocks
        .iter()
        .map(|b| b.iter().map(|&v| map[v - 1]).collect())
        .collect()
}

/// Twirl with the element correspondence from the stair side to the spiral
/// side. Works for relaxed decompositions; a genuine one yields a genuine
/// spiral decomposition.
pub fn twirl_with_map(dec: &StairDecomposition) -> Result<Transformed<SpiralDecomposition>> {
    let host = dec.host();
    let pos = host.positions();
    let blocks = dec.blocks();
    let x_order = spiral_layout(&column_groups(blocks, |v| pos[v - 1]), 1);
    let y_order = spiral_layout(&row_groups(blocks, |v| v), 0);
    let (target, forward) = assemble(host, &x_order, &y_order);
    let new_blocks = relabel(blocks, &forward);
    let decomposition = SpiralDecomposition::relaxed(target.clone(), new_blocks)
        .map_err(|e| Error::Internal(format!("twirl produced an invalid spiral: {e}")))?;
    Ok(Transformed {
        decomposition,
        map: ElementMap {
            source: host.clone(),
            target,
            forward,
        },
    })
}

pub fn twirl(dec: &StairDecomposition) -> Result<SpiralDecomposition> {
    Ok(twirl_with_map(dec)?.decomposition)
}

/// Inverts [`spiral_layout`]: recovers the source order of every group from
/// the target coordinate order and concatenates them.
fn unlayout(groups: &[Vec<usize>], first: usize) -> Vec<usize> {
    let mut out = Vec::new();
    for (j, g) in groups.iter().enumerate() {
        if (j + first) % 2 == 1 {
            out.extend_from_slice(g);
        } else {
            out.extend(g.iter().rev().copied());
        }
    }
    out
}

/// Untwirl with the correspondence from the spiral side to the stair side.
/// Fails if the input is not the twirl of any stair-decomposition.
pub fn untwirl_with_map(dec: &SpiralDecomposition) -> Result<Transformed<StairDecomposition>> {
    let host = dec.host();
    let pos = host.positions();
    let blocks = dec.blocks();
    let x_order = unlayout(&column_groups(blocks, |v| pos[v - 1]), 1);
    let y_order = unlayout(&row_groups(blocks, |v| v), 0);
    let (target, forward) = assemble(host, &x_order, &y_order);
    let new_blocks = relabel(blocks, &forward);
    let decomposition = StairDecomposition::relaxed(target.clone(), new_blocks)?;
    let back = twirl(&decomposition)?;
    if back.host() != host || back.blocks() != blocks {
        return Err(Error::InvalidDecomposition(
            "spiral decomposition is not the twirl of a stair-decomposition".into(),
        ));
    }
    Ok(Transformed {
        decomposition,
        map: ElementMap {
            source: host.clone(),
            target,
            forward,
        },
    })
}

pub fn untwirl(dec: &SpiralDecomposition) -> Result<StairDecomposition> {
    Ok(untwirl_with_map(dec)?.decomposition)
}

/// Carries an occurrence of `pattern.source()` in `text.source()` over to an
/// occurrence of `pattern.target()` in `text.target()` by following both
/// element maps. Errors if the result is not an occurrence, which happens
/// when the input occurrence does not respect the blocks the maps act on.
pub fn transport_occurrence(
    pattern: &ElementMap,
    text: &ElementMap,
    occ: &Occurrence,
) -> Result<Occurrence> {
    if !is_occurrence(pattern.source(), text.source(), occ)? {
        return Err(Error::NotAnOccurrence);
    }
    let back = pattern.inverse();
    let src_pos = pattern.source().positions();
    let tgt_text_pos = text.target().positions();
    let indices: Vec<usize> = pattern
        .target()
        .values()
        .iter()
        .map(|&w| {
            let v = back.apply(w);
            let t = text.source().at(occ.indices()[src_pos[v - 1] - 1]);
            tgt_text_pos[text.apply(t) - 1]
        })
        .collect();
    let out = Occurrence(indices);
    if is_occurrence(pattern.target(), text.target(), &out)? {
        Ok(out)
    } else {
        Err(Error::NotAnOccurrence)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomp::{k_track, stair_decompose, validate_spiral};

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn twirl_of_small_track() {
        let t = k_track(2).unwrap();
        let s = twirl(&t).unwrap();
        assert_eq!(s.host(), &p("4132"));
        assert_eq!(s.blocks(), &[vec![4, 3], vec![1, 2]]);
        assert_eq!(untwirl(&s).unwrap(), t);
    }

    #[test]
    fn identity_twirls_to_decreasing() {
        let d = stair_decompose(&Permutation::identity(5)).unwrap();
        let s = twirl(&d).unwrap();
        assert_eq!(s.host(), &Permutation::decreasing(5));
        assert_eq!(s.blocks(), &[vec![5, 4, 3, 2, 1]]);
    }

    #[test]
    fn twirl_keeps_spiral_rules() {
        for k in 1..=6 {
            let s = twirl(&k_track(k).unwrap()).unwrap();
            assert!(validate_spiral(s.host(), s.blocks()).unwrap(), "k = {k}");
        }
        let d = stair_decompose(&p("241635")).unwrap();
        let s = twirl(&d).unwrap();
        assert!(validate_spiral(s.host(), s.blocks()).unwrap());
        assert_eq!(untwirl(&s).unwrap(), d);
    }

    #[test]
    fn unconstrained_blocks_lose_their_order() {
        // B_1 and B_4 are unrelated once B_2 and B_3 are empty.
        let d = StairDecomposition::relaxed(p("21"), vec![vec![1], vec![], vec![], vec![2]]).unwrap();
        let s = twirl(&d).unwrap();
        let back = untwirl(&s).unwrap();
        assert_eq!(back.host(), &p("12"));
        assert_eq!(twirl(&back).unwrap(), s);
    }

    #[test]
    fn empty_round_trip() {
        let d = StairDecomposition::new(Permutation::empty(), vec![]).unwrap();
        let s = twirl(&d).unwrap();
        assert!(s.host().is_empty());
        assert_eq!(untwirl(&s).unwrap(), d);
    }

    #[test]
    fn transport_track_occurrence() {
        let t3 = k_track(3).unwrap();
        let d = stair_decompose(&p("213")).unwrap();
        let occ = crate::decomp::embed_in_track(&d, 3).unwrap();
        let pm = twirl_with_map(&d).unwrap().map;
        let tm = twirl_with_map(&t3).unwrap().map;
        let moved = transport_occurrence(&pm, &tm, &occ).unwrap();
        assert!(is_occurrence(pm.target(), tm.target(), &moved).unwrap());
    }
}

//! The reduction carried over to skew-merged patterns by twirling both
//! permutations along their stair-decompositions.

use crate::decomp::SpiralDecomposition;
use crate::error::Result;
use crate::perm::{longest_decreasing_length, longest_increasing_length, reduce_sequence, Occurrence, Permutation};
use crate::twirl::{transport_occurrence, twirl_with_map, ElementMap};

use super::cnf::CnfFormula;
use super::instance::{build_instance, ReductionInstance};

#[derive(Clone, Debug)]
pub struct TwirledInstance {
    pub base: ReductionInstance,
    pub pattern: SpiralDecomposition,
    pub text: SpiralDecomposition,
    pub pattern_map: ElementMap,
    pub text_map: ElementMap,
}

pub fn build_twirled_instance(formula: &CnfFormula) -> Result<TwirledInstance> {
    let base = build_instance(formula)?;
    twirl_instance(base)
}

pub fn twirl_instance(base: ReductionInstance) -> Result<TwirledInstance> {
    let p = twirl_with_map(&base.pattern_decomposition()?)?;
    let t = twirl_with_map(&base.text_decomposition()?)?;
    Ok(TwirledInstance {
        base,
        pattern: p.decomposition,
        text: t.decomposition,
        pattern_map: p.map,
        text_map: t.map,
    })
}

impl TwirledInstance {
    pub fn pattern(&self) -> &Permutation {
        self.pattern.host()
    }

    pub fn text(&self) -> &Permutation {
        self.text.host()
    }

    /// Carries an occurrence in the untwirled instance to the twirled one.
    pub fn transport(&self, occ: &Occurrence) -> Result<Occurrence> {
        transport_occurrence(&self.pattern_map, &self.text_map, occ)
    }

    /// Odd-numbered text blocks together form a decreasing sequence and the
    /// even-numbered ones are covered by two increasing sequences.
    pub fn text_cover_holds(&self) -> bool {
        let pos = self.text().positions();
        let union = |odd: bool| -> Permutation {
            let mut vals: Vec<usize> = self
                .text
                .blocks()
                .iter()
                .enumerate()
                .filter(|(i, _)| (i % 2 == 0) == odd)
                .flat_map(|(_, b)| b.iter().copied())
                .collect();
            vals.sort_by_key(|&v| pos[v - 1]);
            reduce_sequence(&vals).expect("distinct values")
        };
        longest_increasing_length(&union(true)) <= 1 && longest_decreasing_length(&union(false)) <= 2
    }
}

//! Exact pattern matching engines: pruned backtracking with a node budget,
//! and a dynamic program over the separators of a vertex order of the
//! pattern graph.

use indexmap::IndexMap;
use serde::Serialize;

use crate::decomp::{spiral_decompose, stair_decompose, Decomposition};
use crate::error::{Error, Result};
use crate::perm::{contains_bruteforce, in_skew_star, Occurrence, Permutation};
use crate::pgraph::{build_graph, separators, stair_order};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MatchBudget {
    node_limit: u64,
}

impl MatchBudget {
    pub fn new(node_limit: u64) -> Result<Self> {
        if node_limit == 0 {
            return Err(Error::TooSmall {
                what: "node limit",
                min: 1,
                got: 0,
            });
        }
        Ok(MatchBudget { node_limit })
    }

    pub fn unlimited() -> Self {
        MatchBudget {
            node_limit: u64::MAX,
        }
    }

    pub fn node_limit(&self) -> u64 {
        self.node_limit
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MatchOutcome {
    Contained(Occurrence),
    NotContained,
    Indeterminate,
}

impl MatchOutcome {
    /// `Some(true)` / `Some(false)` for decided outcomes.
    pub fn decision(&self) -> Option<bool> {
        match self {
            MatchOutcome::Contained(_) => Some(true),
            MatchOutcome::NotContained => Some(false),
            MatchOutcome::Indeterminate => None,
        }
    }

    pub fn occurrence(&self) -> Option<&Occurrence> {
        match self {
            MatchOutcome::Contained(o) => Some(o),
            _ => None,
        }
    }
}

struct Backtracker<'a> {
    pattern: &'a [usize],
    text: &'a [usize],
    /// For pattern index `a`, the earlier pattern index holding the closest
    /// smaller value and the closest larger value.
    below: Vec<Option<usize>>,
    above: Vec<Option<usize>>,
    image: Vec<usize>,
    nodes: u64,
    limit: u64,
}

enum Step {
    Found,
    Exhausted,
    OutOfBudget,
}

impl Backtracker<'_> {
    fn search(&mut self, a: usize, from: usize) -> Step {
        let k = self.pattern.len();
        if a == k {
            return Step::Found;
        }
        let n = self.text.len();
        let v = self.pattern[a];
        let (vmin, vmax) = (v, n - (k - v));
        let lo = self.below[a].map_or(0, |b| self.text[self.image[b]]);
        let hi = self.above[a].map_or(usize::MAX, |b| self.text[self.image[b]]);
        for t in from..=n - (k - a) {
            let tv = self.text[t];
            if tv < vmin || tv > vmax || tv <= lo || tv >= hi {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.limit {
                return Step::OutOfBudget;
            }
            self.image[a] = t;
            match self.search(a + 1, t + 1) {
                Step::Exhausted => {}
                other => return other,
            }
        }
        Step::Exhausted
    }
}

/// Depth-first search over pattern positions left to right and text
/// candidates left to right; the first witness found is the
/// lexicographically smallest occurrence. Every search node, including the
/// root, counts against the budget.
pub fn match_backtrack(pattern: &Permutation, text: &Permutation, budget: MatchBudget) -> MatchOutcome {
    let k = pattern.len();
    if k > text.len() {
        return MatchOutcome::NotContained;
    }
    let pv = pattern.values();
    let mut below = vec![None; k];
    let mut above = vec![None; k];
    for a in 0..k {
        for b in 0..a {
            if pv[b] < pv[a] && below[a].is_none_or(|c: usize| pv[c] < pv[b]) {
                below[a] = Some(b);
            }
            if pv[b] > pv[a] && above[a].is_none_or(|c: usize| pv[c] > pv[b]) {
                above[a] = Some(b);
            }
        }
    }
    let mut bt = Backtracker {
        pattern: pv,
        text: text.values(),
        below,
        above,
        image: vec![0; k],
        nodes: 1,
        limit: budget.node_limit,
    };
    match bt.search(0, 0) {
        Step::Found => MatchOutcome::Contained(Occurrence(bt.image.iter().map(|t| t + 1).collect())),
        Step::Exhausted => MatchOutcome::NotContained,
        Step::OutOfBudget => MatchOutcome::Indeterminate,
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct DpStats {
    /// Largest separator that had to be stored.
    pub max_separator: usize,
    /// Largest number of states alive in one layer.
    pub peak_states: usize,
}

/// Decides containment by placing pattern elements in `order` and keeping,
/// per step, the distinct images of the current separator. A new element is
/// checked only against its already placed graph neighbours: red neighbours
/// must keep their value order in the text and blue neighbours their
/// position order. Because each colour class is a Hamiltonian path, a
/// complete assignment passing all these checks is an occurrence.
pub fn match_separator_dp(
    pattern: &Permutation,
    order: &[usize],
    text: &Permutation,
) -> Result<MatchOutcome> {
    Ok(match_separator_dp_with_stats(pattern, order, text)?.0)
}

pub fn match_separator_dp_with_stats(
    pattern: &Permutation,
    order: &[usize],
    text: &Permutation,
) -> Result<(MatchOutcome, DpStats)> {
    let k = pattern.len();
    if k == 0 {
        if !order.is_empty() {
            return Err(Error::InvalidOrder("order given for an empty pattern".into()));
        }
        return Ok((MatchOutcome::Contained(Occurrence(Vec::new())), DpStats::default()));
    }
    let graph = build_graph(pattern)?;
    let seps = separators(&graph, order)?;
    let ppos = pattern.positions();
    let tv = text.values();
    let n = tv.len();
    let mut stats = DpStats {
        max_separator: seps.iter().map(Vec::len).max().unwrap_or(0),
        peak_states: 1,
    };
    if k > n {
        return Ok((MatchOutcome::NotContained, stats));
    }

    // layers[i] maps separator images before step i to (parent, image of order[i-1]).
    let mut layers: Vec<IndexMap<Vec<usize>, (usize, usize)>> = Vec::with_capacity(k + 1);
    let mut first = IndexMap::new();
    first.insert(Vec::new(), (0, 0));
    layers.push(first);

    for (i, &x) in order.iter().enumerate() {
        let cur_sep = &seps[i];
        let next_sep = &seps[i + 1];
        // Where each vertex of the next separator comes from: an index into
        // the current separator or the new vertex.
        let sources: Vec<Option<usize>> = next_sep
            .iter()
            .map(|&v| if v == x { None } else { cur_sep.iter().position(|&w| w == v) })
            .collect();
        let checks: Vec<(usize, &crate::pgraph::Edge)> = graph
            .neighbors(x)
            .iter()
            .filter_map(|&w| {
                cur_sep
                    .iter()
                    .position(|&s| s == w)
                    .map(|slot| (slot, graph.edge(x, w).expect("neighbour edge")))
            })
            .collect();
        let xv = x;
        let xp = ppos[x - 1];
        let mut next: IndexMap<Vec<usize>, (usize, usize)> = IndexMap::new();
        for (parent, state) in layers[i].keys().enumerate() {
            'cand: for t in 0..n {
                if state.contains(&t) {
                    continue;
                }
                for &(slot, e) in &checks {
                    let w = cur_sep[slot];
                    let s = state[slot];
                    if e.red && ((w > xv) != (tv[s] > tv[t])) {
                        continue 'cand;
                    }
                    if e.blue && ((ppos[w - 1] > xp) != (s > t)) {
                        continue 'cand;
                    }
                }
                let key: Vec<usize> = sources
                    .iter()
                    .map(|src| src.map_or(t, |slot| state[slot]))
                    .collect();
                next.entry(key).or_insert((parent, t));
            }
        }
        stats.peak_states = stats.peak_states.max(next.len());
        if next.is_empty() {
            return Ok((MatchOutcome::NotContained, stats));
        }
        layers.push(next);
    }

    let mut image = vec![0; k];
    let mut at = 0;
    for i in (1..=k).rev() {
        let (_, &(parent, t)) = layers[i].get_index(at).expect("state exists");
        image[order[i - 1] - 1] = t;
        at = parent;
    }
    let occ: Vec<usize> = pattern.values().iter().map(|&v| image[v - 1] + 1).collect();
    Ok((MatchOutcome::Contained(Occurrence(occ)), stats))
}

/// Vertex order used by default for the DP: the stair order for 321-avoiding
/// patterns, the untwirled stair order for patterns with a spiral
/// decomposition, the natural value order otherwise.
pub fn default_order(pattern: &Permutation) -> Vec<usize> {
    if let Ok(d) = stair_decompose(pattern) {
        return stair_order(&Decomposition::Stair(d));
    }
    if in_skew_star(pattern) {
        if let Ok(d) = spiral_decompose(pattern) {
            return stair_order(&Decomposition::Spiral(d));
        }
    }
    (1..=pattern.len()).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Algorithm {
    Brute,
    Backtrack,
    SeparatorDp,
}

/// Runs one engine. The budget only applies to backtracking.
pub fn run_matcher(
    algorithm: Algorithm,
    pattern: &Permutation,
    text: &Permutation,
    budget: MatchBudget,
) -> Result<MatchOutcome> {
    Ok(match algorithm {
        Algorithm::Brute => match contains_bruteforce(pattern, text) {
            Some(o) => MatchOutcome::Contained(o),
            None => MatchOutcome::NotContained,
        },
        Algorithm::Backtrack => match_backtrack(pattern, text, budget),
        Algorithm::SeparatorDp => match_separator_dp(pattern, &default_order(pattern), text)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::is_occurrence;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn backtrack_examples() {
        let out = match_backtrack(&p("132"), &p("3142"), MatchBudget::unlimited());
        assert_eq!(out, MatchOutcome::Contained(Occurrence(vec![2, 3, 4])));
        assert_eq!(
            match_backtrack(&p("321"), &p("1234"), MatchBudget::new(5).unwrap()),
            MatchOutcome::NotContained
        );
        let tight = match_backtrack(&p("21"), &p("12"), MatchBudget::new(1).unwrap());
        assert_ne!(tight.decision(), Some(true));
        assert!(MatchBudget::new(0).is_err());
    }

    #[test]
    fn backtrack_budget_exhaustion() {
        let text = p("2 1 4 3 6 5 8 7 10 9 12 11 14 13");
        let out = match_backtrack(&p("321"), &text, MatchBudget::new(3).unwrap());
        assert_eq!(out, MatchOutcome::Indeterminate);
        let out = match_backtrack(&p("321"), &text, MatchBudget::unlimited());
        assert_eq!(out, MatchOutcome::NotContained);
    }

    #[test]
    fn separator_dp_examples() {
        let out = match_separator_dp(&p("213"), &[2, 1, 3], &p("3142")).unwrap();
        let occ = out.occurrence().expect("contained").clone();
        assert!(is_occurrence(&p("213"), &p("3142"), &occ).unwrap());
        let t = p("2413");
        let out = match_separator_dp(&t, &[4, 3, 2, 1], &t).unwrap();
        assert_eq!(out, MatchOutcome::Contained(Occurrence(vec![1, 2, 3, 4])));
        assert_eq!(
            match_separator_dp(&p("321"), &[1, 2, 3], &p("2413")).unwrap(),
            MatchOutcome::NotContained
        );
        assert!(match_separator_dp(&p("21"), &[1], &p("21")).is_err());
    }

    #[test]
    fn dp_separator_matches_stair_separation() {
        let pat = p("241635");
        let order = default_order(&pat);
        let (_, stats) = match_separator_dp_with_stats(&pat, &order, &p("3524716")).unwrap();
        let g = build_graph(&pat).unwrap();
        let vs = crate::pgraph::vertex_separation(&g, &order).unwrap();
        assert_eq!(stats.max_separator, vs);
    }

    #[test]
    fn empty_pattern() {
        let e = Permutation::empty();
        assert_eq!(
            match_backtrack(&e, &p("21"), MatchBudget::unlimited()),
            MatchOutcome::Contained(Occurrence(vec![]))
        );
        assert_eq!(
            match_separator_dp(&e, &[], &p("1")).unwrap(),
            MatchOutcome::Contained(Occurrence(vec![]))
        );
    }
}

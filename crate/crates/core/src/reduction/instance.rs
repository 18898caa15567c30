//! The pattern and text built from a 3-CNF formula, embeddings from truth
//! assignments, and the reverse extraction.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::json;

use crate::decomp::StairDecomposition;
use crate::error::{Error, Result};
use crate::perm::{is_occurrence, Occurrence, Permutation};

use super::cnf::{guard_vars, Assignment, CnfFormula};
use super::layout::{BendEnd, Layout, LayoutSpec, Role, Track};

/// Vertical level of a track inside a fork gadget.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Bottom,
    Middle,
    Top,
}

/// Text staircase representing variable `var` (1-based) with polarity `value`.
pub fn text_staircase(var: usize, value: bool) -> usize {
    2 * (var - 1) + usize::from(!value)
}

/// Variable and polarity of a text staircase.
pub fn literal_of(staircase: usize) -> (usize, bool) {
    (staircase / 2 + 1, staircase.is_multiple_of(2))
}

/// Levels of every track in the fork gadget of one clause, as
/// `(track, level)` for each text staircase and bypass.
pub fn fork_levels(formula: &CnfFormula, clause: usize) -> Vec<(Track, Level)> {
    let [li, lj, lk] = formula.clauses()[clause - 1].sorted();
    let (i, j, k) = (li.var, lj.var, lk.var);
    let mut out = Vec::new();
    let mut push = |st: usize, bypass: bool, level: Level| {
        out.push((
            Track {
                staircase: st,
                bypass: bypass.then_some(clause),
            },
            level,
        ));
    };
    for u in 1..=formula.num_vars() {
        for value in [true, false] {
            let st = text_staircase(u, value);
            let plus = |l: super::cnf::Literal| l.positive == value;
            use Level::*;
            if u < i {
                push(st, false, Bottom);
            } else if u == i {
                push(st, false, if plus(li) { Bottom } else { Middle });
            } else if u < j {
                push(st, false, Middle);
                push(st, true, Bottom);
            } else if u == j {
                if plus(lj) {
                    push(st, false, Middle);
                } else {
                    push(st, false, Top);
                    push(st, true, Bottom);
                }
            } else if u < k {
                push(st, false, Top);
                push(st, true, Middle);
            } else if u == k {
                push(st, false, if plus(lk) { Top } else { Middle });
            } else {
                push(st, false, Top);
            }
        }
    }
    out
}

/// Number of bypasses a clause adds: `2(k - i) - 3` for sorted variables `i < j < k`.
pub fn clause_bypass_count(formula: &CnfFormula, clause: usize) -> usize {
    let [li, _, lk] = formula.clauses()[clause - 1].sorted();
    2 * (lk.var - li.var) - 3
}

/// Size of the non-anchor part of the text.
pub fn expected_gadget_size(formula: &CnfFormula) -> usize {
    let steps = 2 * formula.clauses().len() + 1;
    let bypasses: usize = (1..=formula.clauses().len())
        .map(|t| clause_bypass_count(formula, t))
        .sum();
    8 * formula.num_vars() * steps + 6 * bypasses
}

#[derive(Clone, Debug)]
pub struct ReductionInstance {
    formula: CnfFormula,
    steps: usize,
    anchor_length: usize,
    pattern: Layout,
    text: Layout,
    fork_levels: BTreeMap<usize, Vec<(Track, Level)>>,
}

pub fn build_instance(formula: &CnfFormula) -> Result<ReductionInstance> {
    let v = formula.num_vars();
    let c = formula.clauses().len();
    let steps = 2 * c + 1;
    let anchor_length = expected_gadget_size(formula) + 1;

    let pattern = LayoutSpec {
        staircases: v,
        steps,
        anchor: anchor_length,
        base_order: (0..v).collect(),
        bypasses: vec![],
        fork_rows: BTreeMap::new(),
    }
    .build()?;

    let mut levels = BTreeMap::new();
    let mut bypasses = Vec::new();
    let mut fork_rows = BTreeMap::new();
    for t in 1..=c {
        let mut lv = fork_levels(formula, t);
        bypasses.extend(lv.iter().filter_map(|(tr, _)| tr.bypass.map(|t| (tr.staircase, t))));
        lv.sort_by_key(|&(tr, level)| (level, tr.staircase, tr.bypass.is_some()));
        fork_rows.insert(t, lv.iter().map(|&(tr, _)| tr).collect());
        levels.insert(t, lv);
    }
    let base_order = (0..2 * v).map(|s| s ^ 1).collect();
    let text = LayoutSpec {
        staircases: 2 * v,
        steps,
        anchor: anchor_length,
        base_order,
        bypasses,
        fork_rows,
    }
    .build()?;

    Ok(ReductionInstance {
        formula: formula.clone(),
        steps,
        anchor_length,
        pattern,
        text,
        fork_levels: levels,
    })
}

impl ReductionInstance {
    pub fn formula(&self) -> &CnfFormula {
        &self.formula
    }

    pub fn pattern(&self) -> &Permutation {
        &self.pattern.perm
    }

    pub fn text(&self) -> &Permutation {
        &self.text.perm
    }

    pub fn anchor_length(&self) -> usize {
        self.anchor_length
    }

    /// Number of bend steps `2c + 1`.
    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn pattern_layout(&self) -> &Layout {
        &self.pattern
    }

    pub fn text_layout(&self) -> &Layout {
        &self.text
    }

    pub fn fork_levels(&self, clause: usize) -> &[(Track, Level)] {
        &self.fork_levels[&clause]
    }

    /// Role of pattern value `v`.
    pub fn pattern_role(&self, v: usize) -> Role {
        self.pattern.roles[v - 1]
    }

    /// Role of text value `v`.
    pub fn text_role(&self, v: usize) -> Role {
        self.text.roles[v - 1]
    }

    /// `[A, Q_1, P_1, …, Q_K, P_K]`; every block is increasing.
    pub fn pattern_decomposition(&self) -> Result<StairDecomposition> {
        StairDecomposition::new(self.pattern.perm.clone(), self.pattern.stair_blocks(self.steps))
    }

    /// `[A′, Q̂_1, P̂_1, …]`; bases and fork/merge gadgets are not increasing.
    pub fn text_decomposition(&self) -> Result<StairDecomposition> {
        StairDecomposition::relaxed(self.text.perm.clone(), self.text.stair_blocks(self.steps))
    }

    /// The bypass choice per clause for one assignment: for each pattern
    /// staircase, the clauses in which it follows the bypass. `None` when
    /// some fork gadget admits no increasing choice.
    fn route(&self, phi: &Assignment) -> Option<Vec<Vec<usize>>> {
        let v = self.formula.num_vars();
        let mut via = vec![Vec::new(); v];
        for (&t, levels) in &self.fork_levels {
            let mut current = Level::Bottom;
            for u in 1..=v {
                let st = text_staircase(u, phi.value(u));
                let best = levels
                    .iter()
                    .filter(|(tr, level)| tr.staircase == st && *level >= current)
                    .min_by_key(|(tr, level)| (*level, tr.bypass.is_none()))?;
                current = best.1;
                if best.0.bypass.is_some() {
                    via[u - 1].push(t);
                }
            }
        }
        Some(via)
    }

    /// Occurrence of the pattern mapping each staircase `X_u` into the text
    /// staircase of the literal chosen by `phi`, or `None` if `phi` leaves a
    /// clause unsatisfied.
    pub fn embed_from_assignment(&self, phi: &Assignment) -> Result<Option<Occurrence>> {
        if phi.num_vars() != self.formula.num_vars() {
            return Err(Error::LengthMismatch {
                expected: self.formula.num_vars(),
                got: phi.num_vars(),
            });
        }
        let Some(via) = self.route(phi) else {
            return Ok(None);
        };
        let text_pos = self.text.perm.positions();
        let mut indices = Vec::with_capacity(self.pattern.perm.len());
        for &pv in self.pattern.perm.values() {
            let target = match self.pattern.roles[pv - 1] {
                Role::Anchor(a) => Role::Anchor(a),
                Role::Bend(e) => {
                    let u = e.staircase + 1;
                    let bypass = via[u - 1]
                        .iter()
                        .copied()
                        .find(|&t| e.step == 2 * t || (e.step == 2 * t + 1 && !e.inner));
                    Role::Bend(BendEnd {
                        staircase: text_staircase(u, phi.value(u)),
                        bypass,
                        ..e
                    })
                }
            };
            let tv = self
                .text
                .value(target)
                .ok_or_else(|| Error::Internal(format!("text has no element {target:?}")))?;
            indices.push(text_pos[tv - 1]);
        }
        let occ = Occurrence(indices);
        if !is_occurrence(self.pattern(), self.text(), &occ)? {
            return Err(Error::Internal(format!(
                "embedding for {phi} is not an occurrence"
            )));
        }
        Ok(Some(occ))
    }

    /// Tries every assignment in binary order and returns the first that
    /// embeds, with its occurrence.
    pub fn decide_via_assignments(&self) -> Result<Decision> {
        guard_vars(self.formula.num_vars())?;
        for phi in Assignment::all(self.formula.num_vars()) {
            if let Some(occ) = self.embed_from_assignment(&phi)? {
                return Ok(Decision::Satisfiable(phi, occ));
            }
        }
        Ok(Decision::Unsatisfiable)
    }

    /// Reads the truth assignment off the text bases hit by the pattern bases.
    pub fn assignment_from_occurrence(&self, occ: &Occurrence) -> Result<Assignment> {
        if !is_occurrence(self.pattern(), self.text(), occ)? {
            return Err(Error::NotAnOccurrence);
        }
        let ppos = self.pattern.perm.positions();
        let image = |pv: usize| self.text.perm.at(occ.indices()[ppos[pv - 1] - 1]);
        let mut values = Vec::with_capacity(self.formula.num_vars());
        for u in 1..=self.formula.num_vars() {
            let mut seen = None;
            for hi in [false, true] {
                let role = Role::Bend(BendEnd {
                    staircase: u - 1,
                    step: 1,
                    inner: false,
                    bypass: None,
                    hi,
                });
                let pv = self.pattern.value(role).expect("pattern base exists");
                let hit = match self.text.roles[image(pv) - 1] {
                    Role::Bend(e) if e.step == 1 && !e.inner && e.hi == hi && literal_of(e.staircase).0 == u => {
                        Some(literal_of(e.staircase).1)
                    }
                    _ => None,
                };
                match (hit, seen) {
                    (None, _) => {
                        return Err(Error::NotBaseAligned(format!(
                            "base of staircase {u} is not mapped onto a text base of variable {u}"
                        )))
                    }
                    (Some(b), Some(prev)) if b != prev => {
                        return Err(Error::NotBaseAligned(format!(
                            "base of staircase {u} is split between both literals"
                        )))
                    }
                    (Some(b), _) => seen = Some(b),
                }
            }
            values.push(seen.expect("two base elements checked"));
        }
        Ok(Assignment::new(values))
    }

    fn role_json(role: Role) -> serde_json::Value {
        match role {
            Role::Anchor(a) => json!({"kind": "anchor", "index": a + 1}),
            Role::Bend(e) => json!({
                "kind": if e.inner { "inner" } else { "outer" },
                "staircase": e.staircase + 1,
                "step": e.step,
                "end": if e.hi { "hi" } else { "lo" },
                "track": if e.bypass.is_some() { "bypass" } else { "original" },
                "clause": e.bypass,
            }),
        }
    }

    fn text_role_json(role: Role) -> serde_json::Value {
        let mut j = Self::role_json(role);
        if let Role::Bend(e) = role {
            let (var, value) = literal_of(e.staircase);
            j["staircase"] = json!(format!("{}{}", if value { "T" } else { "F" }, var));
            j["variable"] = json!(var);
        }
        j
    }

    /// Sizes, anchor length, per-clause bypass counts and per-position
    /// provenance of every pattern and text element.
    pub fn meta_json(&self) -> serde_json::Value {
        let clauses: Vec<serde_json::Value> = (1..=self.formula.clauses().len())
            .map(|t| {
                let lits: Vec<i64> = self.formula.clauses()[t - 1].0.iter().map(|l| l.to_dimacs()).collect();
                json!({"clause": t, "literals": lits, "bypasses": clause_bypass_count(&self.formula, t)})
            })
            .collect();
        let provenance = |layout: &Layout, f: fn(Role) -> serde_json::Value| -> Vec<serde_json::Value> {
            layout
                .perm
                .values()
                .iter()
                .enumerate()
                .map(|(i, &v)| {
                    let mut j = f(layout.roles[v - 1]);
                    j["position"] = json!(i + 1);
                    j["value"] = json!(v);
                    j
                })
                .collect()
        };
        json!({
            "variables": self.formula.num_vars(),
            "clauses": clauses,
            "steps": self.steps,
            "M": self.anchor_length,
            "gadget_size": self.text.perm.len() - self.anchor_length,
            "pattern_size": self.pattern.perm.len(),
            "text_size": self.text.perm.len(),
            "pattern_provenance": provenance(&self.pattern, Self::role_json),
            "text_provenance": provenance(&self.text, Self::text_role_json),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decision {
    Satisfiable(Assignment, Occurrence),
    Unsatisfiable,
}

impl Decision {
    pub fn is_satisfiable(&self) -> bool {
        matches!(self, Decision::Satisfiable(..))
    }
}

//! Coordinate assembly for multi-fold staircases with bypasses and an anchor.
//!
//! Elements are listed once in left-to-right order and once in
//! bottom-to-top order; the permutation follows from the two lists.
//!
//! Columns, left to right: the bases (in `base_order`), the anchor, then for
//! each step `m < K` one slot per inner bend `p_m` holding `p_m.lo`, the
//! outer bends sandwiched from below by it, and `p_m.hi`; finally the tops.
//! Rows, bottom to top: the anchor, then for each step `m` every outer bend
//! `q_m` with its inner bend `p_m` nested inside.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::perm::Permutation;

/// One endpoint of a bend.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct BendEnd {
    /// 0-based staircase index.
    pub staircase: usize,
    /// 1-based step.
    pub step: usize,
    /// Inner bend `p` rather than outer bend `q`.
    pub inner: bool,
    /// Clause (1-based) of the bypass this bend belongs to.
    pub bypass: Option<usize>,
    /// Upper element of the increase.
    pub hi: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Role {
    /// 0-based index along the anchor.
    Anchor(usize),
    Bend(BendEnd),
}

/// A path through one step band: an original staircase or one of its bypasses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Track {
    pub staircase: usize,
    pub bypass: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayoutSpec {
    pub staircases: usize,
    pub steps: usize,
    pub anchor: usize,
    /// Left-to-right order of the bases.
    pub base_order: Vec<usize>,
    /// `(staircase, t)`: a bypass of bends `q_{2t}, p_{2t}, q_{2t+1}`.
    pub bypasses: Vec<(usize, usize)>,
    /// Bottom-to-top order of all tracks in the fork band of clause `t`.
    pub fork_rows: BTreeMap<usize, Vec<Track>>,
}

#[derive(Clone, Debug)]
pub struct Layout {
    pub perm: Permutation,
    /// `roles[v - 1]` is the role of value `v`.
    pub roles: Vec<Role>,
    pub values: HashMap<Role, usize>,
}

fn bend(t: Track, step: usize, inner: bool, hi: bool) -> Role {
    Role::Bend(BendEnd {
        staircase: t.staircase,
        step,
        inner,
        bypass: t.bypass,
        hi,
    })
}

fn orig(staircase: usize) -> Track {
    Track {
        staircase,
        bypass: None,
    }
}

impl LayoutSpec {
    fn validate(&self) -> Result<BTreeSet<(usize, usize)>> {
        let s = self.staircases;
        let mut sorted = self.base_order.clone();
        sorted.sort_unstable();
        if sorted != (0..s).collect::<Vec<_>>() {
            return Err(Error::Internal("base order is not a permutation of the staircases".into()));
        }
        let mut bypasses = BTreeSet::new();
        for &(st, t) in &self.bypasses {
            if st >= s || t == 0 || 2 * t + 1 > self.steps {
                return Err(Error::Internal(format!("bypass ({st}, {t}) does not fit")));
            }
            if !bypasses.insert((st, t)) {
                return Err(Error::Internal(format!("bypass ({st}, {t}) repeated")));
            }
        }
        for (&t, rows) in &self.fork_rows {
            if t == 0 || 2 * t + 1 > self.steps {
                return Err(Error::Internal(format!("fork band {t} does not fit")));
            }
            let mut expected: Vec<Track> = (0..s).map(orig).collect();
            expected.extend(bypasses.iter().filter(|b| b.1 == t).map(|&(st, t)| Track {
                staircase: st,
                bypass: Some(t),
            }));
            expected.sort();
            let mut got = rows.clone();
            got.sort();
            if got != expected {
                return Err(Error::Internal(format!("fork band {t} lists the wrong tracks")));
            }
        }
        for &(_, t) in &bypasses {
            if !self.fork_rows.contains_key(&t) {
                return Err(Error::Internal(format!("fork band {t} has no row order")));
            }
        }
        Ok(bypasses)
    }

    pub fn build(&self) -> Result<Layout> {
        let bypasses = self.validate()?;
        let (s, k) = (self.staircases, self.steps);
        let forks_at = |step: usize| -> Option<usize> {
            (step.is_multiple_of(2) && self.fork_rows.contains_key(&(step / 2))).then_some(step / 2)
        };
        let with_bypass = |st: usize, t: usize| bypasses.contains(&(st, t)).then_some(t);

        let mut cols: Vec<Role> = Vec::new();
        for &st in &self.base_order {
            cols.push(bend(orig(st), 1, false, false));
            cols.push(bend(orig(st), 1, false, true));
        }
        cols.extend((0..self.anchor).map(Role::Anchor));
        for m in 1..=k {
            let slots: Vec<Track> = match forks_at(m) {
                Some(t) => self.fork_rows[&t].clone(),
                None => (0..s).map(orig).collect(),
            };
            for track in slots {
                cols.push(bend(track, m, true, false));
                if m < k {
                    let mut inside = vec![track];
                    if track.bypass.is_none() {
                        // A bypass forking at the next step starts under the original.
                        if (m + 1) % 2 == 0 {
                            if let Some(t) = with_bypass(track.staircase, m.div_ceil(2)) {
                                inside.push(Track {
                                    staircase: track.staircase,
                                    bypass: Some(t),
                                });
                            }
                        }
                    }
                    for t in inside {
                        cols.push(bend(t, m + 1, false, false));
                        cols.push(bend(t, m + 1, false, true));
                    }
                }
                cols.push(bend(track, m, true, true));
            }
        }

        let mut rows: Vec<Role> = (0..self.anchor).map(Role::Anchor).collect();
        for m in 1..=k {
            if let Some(t) = forks_at(m) {
                for &track in &self.fork_rows[&t] {
                    rows.push(bend(track, m, false, false));
                    rows.push(bend(track, m, true, false));
                    rows.push(bend(track, m, true, true));
                    rows.push(bend(track, m, false, true));
                }
                continue;
            }
            for st in 0..s {
                let merging = (m >= 3 && m % 2 == 1)
                    .then(|| with_bypass(st, (m - 1) / 2))
                    .flatten()
                    .map(|t| Track {
                        staircase: st,
                        bypass: Some(t),
                    });
                rows.push(bend(orig(st), m, false, false));
                if let Some(b) = merging {
                    rows.push(bend(b, m, false, false));
                }
                rows.push(bend(orig(st), m, true, false));
                rows.push(bend(orig(st), m, true, true));
                if let Some(b) = merging {
                    rows.push(bend(b, m, false, true));
                }
                rows.push(bend(orig(st), m, false, true));
            }
        }

        if rows.len() != cols.len() {
            return Err(Error::Internal(format!(
                "layout has {} columns but {} rows",
                cols.len(),
                rows.len()
            )));
        }
        let row_of: HashMap<Role, usize> = rows.iter().enumerate().map(|(i, &r)| (r, i + 1)).collect();
        if row_of.len() != rows.len() {
            return Err(Error::Internal("layout repeats a row element".into()));
        }
        let mut values = Vec::with_capacity(cols.len());
        for r in &cols {
            let v = *row_of
                .get(r)
                .ok_or_else(|| Error::Internal(format!("{r:?} has a column but no row")))?;
            values.push(v);
        }
        let perm = Permutation::new(values)?;
        let mut roles = vec![Role::Anchor(0); rows.len()];
        for (&r, &v) in &row_of {
            roles[v - 1] = r;
        }
        Ok(Layout {
            perm,
            roles,
            values: row_of,
        })
    }
}

impl Layout {
    pub fn value(&self, role: Role) -> Option<usize> {
        self.values.get(&role).copied()
    }

    /// Value pair of a bend.
    pub fn bend(&self, track: Track, step: usize, inner: bool) -> Option<(usize, usize)> {
        Some((
            self.value(bend(track, step, inner, false))?,
            self.value(bend(track, step, inner, true))?,
        ))
    }

    /// Bends `q_1, p_1, …, q_K, p_K` of a staircase, switching to the
    /// bypass of clause `t` on its three bends for every `t` in `via`.
    pub fn staircase_bends(&self, staircase: usize, steps: usize, via: &[usize]) -> Option<Vec<(usize, usize)>> {
        let mut out = Vec::with_capacity(2 * steps);
        for m in 1..=steps {
            for inner in [false, true] {
                let t = via
                    .iter()
                    .copied()
                    .find(|&t| m == 2 * t || (m == 2 * t + 1 && !inner));
                out.push(self.bend(
                    Track {
                        staircase,
                        bypass: t,
                    },
                    m,
                    inner,
                )?);
            }
        }
        Some(out)
    }

    /// Values grouped as `[A, Q_1, P_1, …, Q_K, P_K]`.
    pub fn stair_blocks(&self, steps: usize) -> Vec<Vec<usize>> {
        let mut blocks = vec![Vec::new(); 2 * steps + 1];
        for (i, r) in self.roles.iter().enumerate() {
            let b = match r {
                Role::Anchor(_) => 0,
                Role::Bend(e) => 2 * e.step - 1 + usize::from(e.inner),
            };
            blocks[b].push(i + 1);
        }
        blocks
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_staircase_shape() {
        let spec = LayoutSpec {
            staircases: 1,
            steps: 2,
            anchor: 0,
            base_order: vec![0],
            bypasses: vec![],
            fork_rows: BTreeMap::new(),
        };
        let l = spec.build().unwrap();
        // q1 p1 q2 p2 with q2 inside p1 and p_i inside q_i.
        assert_eq!(l.perm, "1 4 2 5 8 3 6 7".parse().unwrap());
    }

    #[test]
    fn bypass_shape() {
        let t = Track {
            staircase: 0,
            bypass: Some(1),
        };
        let mut fork_rows = BTreeMap::new();
        fork_rows.insert(1, vec![t, orig(0)]);
        let spec = LayoutSpec {
            staircases: 1,
            steps: 4,
            anchor: 0,
            base_order: vec![0],
            bypasses: vec![(0, 1)],
            fork_rows,
        };
        let l = spec.build().unwrap();
        assert_eq!(l.perm.len(), 22);
        let (q, qb) = (l.bend(orig(0), 2, false).unwrap(), l.bend(t, 2, false).unwrap());
        let pos = l.perm.positions();
        // fork quadruple reads 3412, merge quadruple reads 2314
        let mut fork = [q.0, q.1, qb.0, qb.1];
        fork.sort_by_key(|&v| pos[v - 1]);
        assert_eq!(crate::perm::reduce_sequence(&fork).unwrap(), "3412".parse().unwrap());
        let (m, mb) = (l.bend(orig(0), 3, false).unwrap(), l.bend(t, 3, false).unwrap());
        let mut merge = [m.0, m.1, mb.0, mb.1];
        merge.sort_by_key(|&v| pos[v - 1]);
        assert_eq!(crate::perm::reduce_sequence(&merge).unwrap(), "2314".parse().unwrap());
    }

    #[test]
    fn rejects_inconsistent_specs() {
        let spec = LayoutSpec {
            staircases: 2,
            steps: 3,
            anchor: 1,
            base_order: vec![0, 0],
            bypasses: vec![],
            fork_rows: BTreeMap::new(),
        };
        assert!(spec.build().is_err());
        let spec = LayoutSpec {
            staircases: 1,
            steps: 3,
            anchor: 0,
            base_order: vec![0],
            bypasses: vec![(0, 1)],
            fork_rows: BTreeMap::new(),
        };
        assert!(spec.build().is_err());
    }
}

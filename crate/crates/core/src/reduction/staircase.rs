//! Geometric predicates on increases (pairs of values `(lo, hi)` with
//! `lo` left of and below `hi`), and recognizers for staircases, double
//! staircases and bypasses.

use std::collections::BTreeMap;

use crate::perm::Permutation;

use super::layout::{Layout, LayoutSpec, Track};

pub type Increase = (usize, usize);

/// Positions of a permutation's values, for geometric queries.
pub struct Plane {
    pos: Vec<usize>,
}

impl Plane {
    pub fn new(perm: &Permutation) -> Self {
        Plane {
            pos: perm.positions(),
        }
    }

    fn x(&self, v: usize) -> usize {
        self.pos[v - 1]
    }

    pub fn is_increase(&self, p: Increase) -> bool {
        p.0 < p.1 && self.x(p.0) < self.x(p.1)
    }

    /// `e` lies horizontally between the two elements of `p` and above both.
    pub fn sandwiched_from_below(&self, e: usize, p: Increase) -> bool {
        self.x(p.0) < self.x(e) && self.x(e) < self.x(p.1) && e > p.1
    }

    /// `e` lies vertically between the two elements of `p` and right of both.
    pub fn sandwiched_from_left(&self, e: usize, p: Increase) -> bool {
        p.0 < e && e < p.1 && self.x(e) > self.x(p.1)
    }

    /// `e` lies vertically between the two elements of `p` and left of both.
    pub fn sandwiched_from_right(&self, e: usize, p: Increase) -> bool {
        p.0 < e && e < p.1 && self.x(e) < self.x(p.0)
    }

    pub fn above(&self, a: Increase, b: Increase) -> bool {
        a.0.min(a.1) > b.0.max(b.1)
    }

    pub fn right_of(&self, a: Increase, b: Increase) -> bool {
        self.x(a.0).min(self.x(a.1)) > self.x(b.0).max(self.x(b.1))
    }

    fn both(&self, e: Increase, f: impl Fn(usize) -> bool) -> bool {
        f(e.0) && f(e.1)
    }

    fn disjoint(bends: &[Increase]) -> bool {
        let mut all: Vec<usize> = bends.iter().flat_map(|b| [b.0, b.1]).collect();
        let n = all.len();
        all.sort_unstable();
        all.dedup();
        all.len() == n
    }

    /// `bends` is `[q_1, p_1, …, q_k, p_k]`.
    pub fn is_staircase(&self, bends: &[Increase]) -> bool {
        if bends.is_empty() || !bends.len().is_multiple_of(2) || !Self::disjoint(bends) {
            return false;
        }
        if !bends.iter().all(|&b| self.is_increase(b)) {
            return false;
        }
        let k = bends.len() / 2;
        let q = |i: usize| bends[2 * i];
        let p = |i: usize| bends[2 * i + 1];
        for i in 0..k {
            if !self.both(p(i), |e| self.sandwiched_from_left(e, q(i))) {
                return false;
            }
            if i > 0 && !self.both(q(i), |e| self.sandwiched_from_below(e, p(i - 1))) {
                return false;
            }
            if i + 1 < k {
                let up_right = |a: Increase, b: Increase| self.above(a, b) && self.right_of(a, b);
                if !up_right(q(i + 1), q(i)) || !up_right(p(i + 1), p(i)) {
                    return false;
                }
            }
        }
        true
    }

    /// `(s, t)` is a double staircase: both are staircases of the same
    /// length and `t` runs just above and right of `s`.
    pub fn is_double_staircase(&self, s: &[Increase], t: &[Increase]) -> bool {
        if s.len() != t.len() || !self.is_staircase(s) || !self.is_staircase(t) {
            return false;
        }
        let mut all = s.to_vec();
        all.extend_from_slice(t);
        if !Self::disjoint(&all) {
            return false;
        }
        let k = s.len() / 2;
        let (q, p) = (|i: usize| s[2 * i], |i: usize| s[2 * i + 1]);
        let (q2, p2) = (|i: usize| t[2 * i], |i: usize| t[2 * i + 1]);
        for i in 0..k {
            let ok_p = self.above(p2(i), p(i))
                && self.right_of(p2(i), p(i))
                && (i + 1 == k || self.above(q(i + 1), p2(i)))
                && (i + 1 == k
                    || (self.above(p(i + 1), p2(i)) && self.right_of(p(i + 1), p2(i))));
            let ok_q = self.above(q2(i), q(i))
                && self.right_of(q2(i), q(i))
                && self.right_of(p(i), q2(i))
                && (i + 1 == k
                    || (self.above(q(i + 1), q2(i)) && self.right_of(q(i + 1), q2(i))));
            if !(ok_p && ok_q) {
                return false;
            }
        }
        true
    }

    /// `bypass = [q'_i, p'_i, q'_{i+1}]` is a bypass of bends
    /// `q_i, p_i, q_{i+1}` (1-based `i > 1`) of the staircase `s`.
    pub fn is_bypass(&self, s: &[Increase], i: usize, bypass: [Increase; 3]) -> bool {
        let k = s.len() / 2;
        if i < 2 || i >= k || !self.is_staircase(s) {
            return false;
        }
        let mut all = s.to_vec();
        all.extend_from_slice(&bypass);
        if !Self::disjoint(&all) {
            return false;
        }
        let (qi, pi, qn) = (2 * (i - 1), 2 * (i - 1) + 1, 2 * i);
        let mut replaced = s.to_vec();
        replaced[qi] = bypass[0];
        replaced[pi] = bypass[1];
        replaced[qn] = bypass[2];
        self.is_staircase(&replaced)
            && self.above(s[qi], bypass[0])
            && self.right_of(bypass[0], s[qi])
            && self.above(s[pi], bypass[1])
            && self.right_of(s[pi], bypass[1])
            && self.both(bypass[2], |e| self.sandwiched_from_right(e, s[qn]))
    }
}

/// A standalone staircase of `steps` steps with one bypass at fork step
/// `2t`; the bypass runs below the original in the fork.
pub fn bypassed_staircase(steps: usize, t: usize) -> crate::error::Result<Layout> {
    let bypass = Track {
        staircase: 0,
        bypass: Some(t),
    };
    let original = Track {
        staircase: 0,
        bypass: None,
    };
    let mut fork_rows = BTreeMap::new();
    fork_rows.insert(t, vec![bypass, original]);
    LayoutSpec {
        staircases: 1,
        steps,
        anchor: 0,
        base_order: vec![0],
        bypasses: vec![(0, t)],
        fork_rows,
    }
    .build()
}

/// Every staircase of `steps` steps made of elements of `perm` whose inner
/// bend at `fixed_step` (1-based) is `fixed`.
pub fn enumerate_staircases(perm: &Permutation, steps: usize, fixed_step: usize, fixed: Increase) -> Vec<Vec<Increase>> {
    let plane = Plane::new(perm);
    let n = perm.len();
    let increases: Vec<Increase> = (1..=n)
        .flat_map(|a| (a + 1..=n).map(move |b| (a, b)))
        .filter(|&p| plane.is_increase(p))
        .collect();
    let mut out = Vec::new();
    let mut cur: Vec<Increase> = Vec::with_capacity(2 * steps);
    extend(&plane, &increases, steps, fixed_step, fixed, &mut cur, &mut out);
    out
}

fn extend(
    plane: &Plane,
    increases: &[Increase],
    steps: usize,
    fixed_step: usize,
    fixed: Increase,
    cur: &mut Vec<Increase>,
    out: &mut Vec<Vec<Increase>>,
) {
    if cur.len() == 2 * steps {
        if plane.is_staircase(cur) {
            out.push(cur.clone());
        }
        return;
    }
    let idx = cur.len();
    let inner = idx % 2 == 1;
    let step = idx / 2 + 1;
    let candidates: Vec<Increase> = if inner && step == fixed_step {
        vec![fixed]
    } else {
        increases.to_vec()
    };
    for c in candidates {
        let used = cur.iter().any(|b| b.0 == c.0 || b.0 == c.1 || b.1 == c.0 || b.1 == c.1);
        if used {
            continue;
        }
        let fits = if inner {
            let q = cur[idx - 1];
            plane.sandwiched_from_left(c.0, q)
                && plane.sandwiched_from_left(c.1, q)
                && (idx < 3 || (plane.above(c, cur[idx - 2]) && plane.right_of(c, cur[idx - 2])))
        } else if idx == 0 {
            true
        } else {
            let p = cur[idx - 1];
            plane.sandwiched_from_below(c.0, p)
                && plane.sandwiched_from_below(c.1, p)
                && plane.above(c, cur[idx - 2])
                && plane.right_of(c, cur[idx - 2])
        };
        if fits {
            cur.push(c);
            extend(plane, increases, steps, fixed_step, fixed, cur, out);
            cur.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_staircase_recognized() {
        let perm: Permutation = "1 4 2 5 8 3 6 7".parse().unwrap();
        let plane = Plane::new(&perm);
        assert!(plane.is_staircase(&[(1, 4), (2, 3), (5, 8), (6, 7)]));
        assert!(!plane.is_staircase(&[(1, 4), (5, 8), (2, 3), (6, 7)]));
        assert!(!plane.is_staircase(&[(1, 4)]));
    }

    #[test]
    fn bypassed_staircase_satisfies_definitions() {
        let l = bypassed_staircase(4, 1).unwrap();
        let plane = Plane::new(&l.perm);
        let s = l.staircase_bends(0, 4, &[]).unwrap();
        let s2 = l.staircase_bends(0, 4, &[1]).unwrap();
        assert!(plane.is_staircase(&s));
        assert!(plane.is_staircase(&s2));
        assert!(plane.is_bypass(&s, 2, [s2[2], s2[3], s2[4]]));
    }
}

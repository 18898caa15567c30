//! Permutations, occurrences and the brute-force containment oracle.
//!
//! A permutation of size `n` is stored as its value sequence `π(1), …, π(n)`.
//! Positions and values are 1-based throughout the crate; an [`Occurrence`]
//! is the strictly increasing vector of text positions that receive the
//! pattern's elements, listed in pattern position order.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(values: Vec<usize>) -> Result<Self> {
        let n = values.len();
        let mut seen = vec![false; n + 1];
        for &v in &values {
            if v == 0 || v > n {
                return Err(Error::InvalidPermutation(format!(
                    "value {v} outside 1..={n}"
                )));
            }
            if seen[v] {
                return Err(Error::InvalidPermutation(format!("value {v} repeated")));
            }
            seen[v] = true;
        }
        Ok(Permutation(values))
    }

    /// Caller guarantees `values` is a rearrangement of `1..=n`.
    pub(crate) fn from_vec_unchecked(values: Vec<usize>) -> Self {
        debug_assert!(Permutation::new(values.clone()).is_ok());
        Permutation(values)
    }

    pub fn empty() -> Self {
        Permutation(Vec::new())
    }

    pub fn identity(n: usize) -> Self {
        Permutation((1..=n).collect())
    }

    pub fn decreasing(n: usize) -> Self {
        Permutation((1..=n).rev().collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> &[usize] {
        &self.0
    }

    pub fn into_values(self) -> Vec<usize> {
        self.0
    }

    /// Value at 1-based position `pos`.
    pub fn at(&self, pos: usize) -> usize {
        self.0[pos - 1]
    }

    /// `positions()[v - 1]` is the 1-based position of value `v`.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.len()];
        for (i, &v) in self.0.iter().enumerate() {
            pos[v - 1] = i + 1;
        }
        pos
    }

    pub fn inverse(&self) -> Permutation {
        Permutation(self.positions())
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let values = Vec::<usize>::deserialize(d)?;
        Permutation::new(values).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for v in &self.0 {
            if !first {
                f.write_str(" ")?;
            }
            write!(f, "{v}")?;
            first = false;
        }
        Ok(())
    }
}

/// Accepts space-separated values (`"3 1 4 2"`) or, for a single token,
/// one digit per entry (`"3142"`).
impl FromStr for Permutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Permutation::empty());
        }
        let values: Vec<usize> = if s.contains(char::is_whitespace) {
            s.split_whitespace()
                .map(|tok| {
                    tok.parse::<usize>()
                        .map_err(|_| Error::InvalidPermutation(format!("bad entry {tok:?}")))
                })
                .collect::<Result<_>>()?
        } else {
            s.chars()
                .map(|c| {
                    c.to_digit(10)
                        .map(|d| d as usize)
                        .ok_or_else(|| Error::InvalidPermutation(format!("bad digit {c:?}")))
                })
                .collect::<Result<_>>()?
        };
        Permutation::new(values)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Occurrence(pub Vec<usize>);

impl Occurrence {
    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for Occurrence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Rank-normalizes a sequence of distinct integers.
pub fn reduce_sequence(seq: &[usize]) -> Result<Permutation> {
    let mut order: Vec<usize> = (0..seq.len()).collect();
    order.sort_by_key(|&i| seq[i]);
    let mut values = vec![0; seq.len()];
    if let Some(w) = order.windows(2).find(|w| seq[w[0]] == seq[w[1]]) {
        return Err(Error::DuplicateEntry(seq[w[0]]));
    }
    for (rank, &i) in order.iter().enumerate() {
        values[i] = rank + 1;
    }
    Ok(Permutation(values))
}

/// Same as [`reduce_sequence`] for keys that are known to be distinct and
/// merely ordered.
pub(crate) fn reduce_by_key<K: Ord>(keys: &[K]) -> Permutation {
    let mut order: Vec<usize> = (0..keys.len()).collect();
    order.sort_by(|&a, &b| keys[a].cmp(&keys[b]));
    let mut values = vec![0; keys.len()];
    for (rank, &i) in order.iter().enumerate() {
        values[i] = rank + 1;
    }
    Permutation::from_vec_unchecked(values)
}

pub fn is_occurrence(pattern: &Permutation, text: &Permutation, occ: &Occurrence) -> Result<bool> {
    if occ.len() != pattern.len() {
        return Err(Error::LengthMismatch {
            expected: pattern.len(),
            got: occ.len(),
        });
    }
    for &i in occ.indices() {
        if i == 0 || i > text.len() {
            return Err(Error::IndexOutOfRange {
                index: i,
                len: text.len(),
            });
        }
    }
    if occ.indices().windows(2).any(|w| w[0] >= w[1]) {
        return Ok(false);
    }
    // Walk pattern values upward; their text images must increase too.
    let pattern_pos = pattern.positions();
    let mut prev = 0;
    for &p in &pattern_pos {
        let image = text.at(occ.0[p - 1]);
        if image <= prev {
            return Ok(false);
        }
        prev = image;
    }
    Ok(true)
}

fn same_relative_order(pattern: &[usize], picked: &[usize]) -> bool {
    for a in 0..pattern.len() {
        for b in a + 1..pattern.len() {
            if (pattern[a] < pattern[b]) != (picked[a] < picked[b]) {
                return false;
            }
        }
    }
    true
}

/// Enumerates index subsets in lexicographic order and returns the first
/// one whose values are order-isomorphic to `pattern`.
pub fn contains_bruteforce(pattern: &Permutation, text: &Permutation) -> Option<Occurrence> {
    let k = pattern.len();
    let n = text.len();
    if k == 0 {
        return Some(Occurrence(Vec::new()));
    }
    if k > n {
        return None;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    let mut picked = vec![0; k];
    loop {
        for (slot, &i) in picked.iter_mut().zip(&idx) {
            *slot = text.0[i];
        }
        if same_relative_order(pattern.values(), &picked) {
            return Some(Occurrence(idx.iter().map(|i| i + 1).collect()));
        }
        // next combination
        let mut j = k;
        loop {
            if j == 0 {
                return None;
            }
            j -= 1;
            if idx[j] < n - k + j {
                break;
            }
        }
        idx[j] += 1;
        for t in j + 1..k {
            idx[t] = idx[t - 1] + 1;
        }
    }
}

pub fn contains(pattern: &Permutation, text: &Permutation) -> bool {
    contains_bruteforce(pattern, text).is_some()
}

/// Brute force over every forbidden pattern. For monotone decreasing
/// bases prefer [`longest_decreasing_length`], which is `O(n log n)`.
pub fn avoids(perm: &Permutation, forbidden: &[Permutation]) -> bool {
    forbidden.iter().all(|f| contains_bruteforce(f, perm).is_none())
}

/// Patience sorting; returns the length of the longest strictly increasing
/// subsequence of `seq`.
fn patience_length(seq: impl Iterator<Item = usize>) -> usize {
    let mut tops: Vec<usize> = Vec::new();
    for x in seq {
        let pile = tops.partition_point(|&t| t < x);
        if pile == tops.len() {
            tops.push(x);
        } else {
            tops[pile] = x;
        }
    }
    tops.len()
}

pub fn longest_increasing_length(perm: &Permutation) -> usize {
    patience_length(perm.0.iter().copied())
}

/// `perm ∈ Av((r+1)…1)` iff this is at most `r`.
pub fn longest_decreasing_length(perm: &Permutation) -> usize {
    let n = perm.len();
    patience_length(perm.0.iter().map(|&v| n + 1 - v))
}

pub fn reverse_complement(perm: &Permutation) -> Permutation {
    let n = perm.len();
    Permutation(perm.0.iter().rev().map(|&v| n + 1 - v).collect())
}

pub(crate) fn skew_star_basis() -> [Permutation; 3] {
    [
        Permutation(vec![2, 1, 4, 3]),
        Permutation(vec![3, 4, 1, 2]),
        Permutation(vec![3, 1, 4, 2]),
    ]
}

/// Membership in Av(2143, 3412, 3142): skew-merged and 3142-avoiding.
pub fn in_skew_star(perm: &Permutation) -> bool {
    avoids(perm, &skew_star_basis())
}

/// First basis element of Av(2143, 3412, 3142) contained in `perm`, with its
/// lexicographically smallest occurrence.
pub(crate) fn skew_star_witness(perm: &Permutation) -> Option<(Permutation, Occurrence)> {
    skew_star_basis()
        .into_iter()
        .find_map(|f| contains_bruteforce(&f, perm).map(|occ| (f, occ)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Complexity {
    Polynomial,
    NpComplete,
}

/// Complexity of Av(ρ)-Pattern PPM.
pub fn classify_principal(rho: &Permutation) -> Result<Complexity> {
    const POLYNOMIAL: [&[usize]; 7] = [
        &[1],
        &[1, 2],
        &[2, 1],
        &[1, 3, 2],
        &[2, 1, 3],
        &[2, 3, 1],
        &[3, 1, 2],
    ];
    if rho.is_empty() {
        return Err(Error::EmptyPermutation);
    }
    if POLYNOMIAL.iter().any(|p| *p == rho.values()) {
        Ok(Complexity::Polynomial)
    } else {
        Ok(Complexity::NpComplete)
    }
}

/// All `k`-permutations avoiding every pattern in `forbidden`, in
/// lexicographic order.
pub fn enumerate_avoiders(k: usize, forbidden: &[Permutation]) -> Vec<Permutation> {
    fn extend(
        prefix: &mut Vec<usize>,
        used: &mut [bool],
        k: usize,
        forbidden: &[Permutation],
        out: &mut Vec<Permutation>,
    ) {
        if prefix.len() == k {
            out.push(Permutation(prefix.clone()));
            return;
        }
        for v in 1..=k {
            if used[v] {
                continue;
            }
            prefix.push(v);
            // Containment is hereditary, so a bad prefix stays bad.
            let reduced = reduce_by_key(prefix);
            if avoids(&reduced, forbidden) {
                used[v] = true;
                extend(prefix, used, k, forbidden, out);
                used[v] = false;
            }
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    let mut used = vec![false; k + 1];
    extend(&mut Vec::with_capacity(k), &mut used, k, forbidden, &mut out);
    out
}

/// Every permutation of size `k` in lexicographic order.
pub fn all_permutations(k: usize) -> Vec<Permutation> {
    enumerate_avoiders(k, &[])
}

/// Parses the `.perm` text format: one line of space-separated values,
/// `#` comment lines ignored. A file with no data line is the empty
/// permutation.
pub fn parse_perm_file(text: &str) -> Result<Permutation> {
    let mut data = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    let Some(line) = data.next() else {
        return Ok(Permutation::empty());
    };
    if data.next().is_some() {
        return Err(Error::InvalidPermutation(
            "expected a single line of values".into(),
        ));
    }
    let values = line
        .split_whitespace()
        .map(|tok| {
            tok.parse::<usize>()
                .map_err(|_| Error::InvalidPermutation(format!("bad entry {tok:?}")))
        })
        .collect::<Result<Vec<_>>>()?;
    Permutation::new(values)
}

pub fn write_perm_file(perm: &Permutation) -> String {
    format!("{perm}\n")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn reduce_examples() {
        assert_eq!(reduce_sequence(&[5, 9, 2]).unwrap(), p("231"));
        assert_eq!(reduce_sequence(&[1, 2, 3]).unwrap(), p("123"));
        assert_eq!(reduce_sequence(&[1, 4, 3, 6]).unwrap(), p("1324"));
        assert!(matches!(
            reduce_sequence(&[3, 1, 3]),
            Err(Error::DuplicateEntry(3))
        ));
    }

    #[test]
    fn occurrence_checks() {
        let occ = Occurrence(vec![2, 3, 4]);
        assert!(is_occurrence(&p("132"), &p("3142"), &occ).unwrap());
        let id = Permutation::identity(5);
        assert!(is_occurrence(&id, &id, &Occurrence((1..=5).collect())).unwrap());
        assert!(!is_occurrence(&p("21"), &p("12"), &Occurrence(vec![1, 2])).unwrap());
        assert!(!is_occurrence(&p("12"), &p("12"), &Occurrence(vec![2, 1])).unwrap());
        assert!(matches!(
            is_occurrence(&p("12"), &p("12"), &Occurrence(vec![1, 3])),
            Err(Error::IndexOutOfRange { index: 3, len: 2 })
        ));
        assert!(matches!(
            is_occurrence(&p("12"), &p("12"), &Occurrence(vec![1])),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn bruteforce_examples() {
        assert_eq!(
            contains_bruteforce(&p("132"), &p("3142")),
            Some(Occurrence(vec![2, 3, 4]))
        );
        assert_eq!(contains_bruteforce(&p("321"), &p("1234")), None);
        assert_eq!(contains_bruteforce(&p("1"), &p("1")), Some(Occurrence(vec![1])));
        assert_eq!(
            contains_bruteforce(&Permutation::empty(), &p("21")),
            Some(Occurrence(vec![]))
        );
        assert_eq!(contains_bruteforce(&p("12"), &p("1")), None);
    }

    #[test]
    fn avoidance_examples() {
        assert!(avoids(&p("4132"), &[p("3142")]));
        assert!(!avoids(&p("2143"), &[p("2143"), p("3412")]));
        assert!(avoids(&Permutation::empty(), &[p("1"), p("21")]));
    }

    #[test]
    fn decreasing_length_examples() {
        assert_eq!(longest_decreasing_length(&p("1324")), 2);
        assert_eq!(longest_decreasing_length(&Permutation::identity(6)), 1);
        assert_eq!(longest_decreasing_length(&Permutation::decreasing(6)), 6);
        assert_eq!(longest_decreasing_length(&Permutation::empty()), 0);
    }

    #[test]
    fn reverse_complement_examples() {
        assert_eq!(reverse_complement(&p("231")), p("312"));
        assert_eq!(reverse_complement(&p("1")), p("1"));
        assert_eq!(reverse_complement(&p("21")), p("21"));
    }

    #[test]
    fn skew_star_examples() {
        assert!(in_skew_star(&p("4132")));
        assert!(!in_skew_star(&p("3142")));
        assert!(in_skew_star(&Permutation::empty()));
        let (f, occ) = skew_star_witness(&p("3142")).unwrap();
        assert_eq!(f, p("3142"));
        assert_eq!(occ, Occurrence(vec![1, 2, 3, 4]));
    }

    #[test]
    fn principal_classification() {
        assert_eq!(classify_principal(&p("132")).unwrap(), Complexity::Polynomial);
        assert_eq!(classify_principal(&p("321")).unwrap(), Complexity::NpComplete);
        assert_eq!(classify_principal(&p("2413")).unwrap(), Complexity::NpComplete);
        assert!(matches!(
            classify_principal(&Permutation::empty()),
            Err(Error::EmptyPermutation)
        ));
    }

    #[test]
    fn avoider_enumeration() {
        let three = enumerate_avoiders(3, &[p("321")]);
        let expected: Vec<_> = ["123", "132", "213", "231", "312"].iter().map(|s| p(s)).collect();
        assert_eq!(three, expected);
        assert_eq!(enumerate_avoiders(0, &[p("1")]), vec![Permutation::empty()]);
        assert_eq!(enumerate_avoiders(4, &[p("321")]).len(), 14);
        assert_eq!(all_permutations(4).len(), 24);
    }

    #[test]
    fn parse_forms() {
        assert_eq!(p("3 1 4 2"), p("3142"));
        assert!("1 1".parse::<Permutation>().is_err());
        assert!("0".parse::<Permutation>().is_err());
        assert_eq!(
            parse_perm_file("# header\n2 3 1   \n\n# trailing\n").unwrap(),
            p("231")
        );
        assert_eq!(parse_perm_file("# nothing\n").unwrap(), Permutation::empty());
        assert!(parse_perm_file("1 2\n2 1\n").is_err());
        assert_eq!(write_perm_file(&p("1324")), "1 3 2 4\n");
    }

    #[test]
    fn json_rejects_non_permutations() {
        assert!(serde_json::from_str::<Permutation>("[2,1,3]").is_ok());
        assert!(serde_json::from_str::<Permutation>("[2,2]").is_err());
    }
}

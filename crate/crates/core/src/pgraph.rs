//! The pattern graph of a permutation: vertices are values, red edges join
//! consecutive values and blue edges join consecutive positions.

use serde::Serialize;

use crate::decomp::{stair_linear_order, Decomposition, StairDecomposition};
use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::twirl;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub red: bool,
    pub blue: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternGraph {
    host: Permutation,
    edges: Vec<Edge>,
    adjacency: Vec<Vec<usize>>,
}

impl PatternGraph {
    pub fn host(&self) -> &Permutation {
        &self.host
    }

    pub fn vertex_count(&self) -> usize {
        self.host.len()
    }

    /// Edges with `u < v`, sorted.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v - 1]
    }

    pub fn edge(&self, a: usize, b: usize) -> Option<&Edge> {
        let (u, v) = if a < b { (a, b) } else { (b, a) };
        self.edges
            .binary_search_by_key(&(u, v), |e| (e.u, e.v))
            .ok()
            .map(|i| &self.edges[i])
    }

    /// Copy of the graph without the edge `{a, b}`.
    pub fn without_edge(&self, a: usize, b: usize) -> PatternGraph {
        let (u, v) = if a < b { (a, b) } else { (b, a) };
        let edges: Vec<Edge> = self
            .edges
            .iter()
            .copied()
            .filter(|e| (e.u, e.v) != (u, v))
            .collect();
        let adjacency = adjacency_of(self.host.len(), &edges);
        PatternGraph {
            host: self.host.clone(),
            edges,
            adjacency,
        }
    }
}

fn adjacency_of(k: usize, edges: &[Edge]) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); k];
    for e in edges {
        adj[e.u - 1].push(e.v);
        adj[e.v - 1].push(e.u);
    }
    for list in &mut adj {
        list.sort_unstable();
    }
    adj
}

pub fn build_graph(perm: &Permutation) -> Result<PatternGraph> {
    if perm.is_empty() {
        return Err(Error::EmptyPermutation);
    }
    let k = perm.len();
    let mut edges: Vec<Edge> = (1..k)
        .map(|a| Edge {
            u: a,
            v: a + 1,
            red: true,
            blue: false,
        })
        .collect();
    for w in perm.values().windows(2) {
        let (u, v) = (w[0].min(w[1]), w[0].max(w[1]));
        if v == u + 1 {
            edges[u - 1].blue = true;
        } else {
            edges.push(Edge {
                u,
                v,
                red: false,
                blue: true,
            });
        }
    }
    edges.sort_by_key(|e| (e.u, e.v));
    let adjacency = adjacency_of(k, &edges);
    Ok(PatternGraph {
        host: perm.clone(),
        edges,
        adjacency,
    })
}

/// Index of each vertex in `order`, validating that it is a permutation.
fn order_index(k: usize, order: &[usize]) -> Result<Vec<usize>> {
    if order.len() != k {
        return Err(Error::InvalidOrder(format!(
            "order has {} entries for {k} vertices",
            order.len()
        )));
    }
    let mut idx = vec![usize::MAX; k];
    for (i, &v) in order.iter().enumerate() {
        if v == 0 || v > k {
            return Err(Error::InvalidOrder(format!("{v} is not a vertex")));
        }
        if idx[v - 1] != usize::MAX {
            return Err(Error::InvalidOrder(format!("vertex {v} listed twice")));
        }
        idx[v - 1] = i;
    }
    Ok(idx)
}

/// `result[i]` lists the vertices placed before step `i` (0-based) that
/// still have a neighbour at step `i` or later, for `i` in `0..=k`.
pub fn separators(graph: &PatternGraph, order: &[usize]) -> Result<Vec<Vec<usize>>> {
    let k = graph.vertex_count();
    let idx = order_index(k, order)?;
    let last: Vec<usize> = (1..=k)
        .map(|v| {
            graph
                .neighbors(v)
                .iter()
                .map(|&w| idx[w - 1])
                .max()
                .unwrap_or(0)
        })
        .collect();
    Ok((0..=k)
        .map(|i| {
            order[..i]
                .iter()
                .copied()
                .filter(|&v| last[v - 1] >= i)
                .collect()
        })
        .collect())
}

pub fn vertex_separation(graph: &PatternGraph, order: &[usize]) -> Result<usize> {
    let k = graph.vertex_count();
    let idx = order_index(k, order)?;
    // Vertex at index j is active for cuts j+1..=last neighbour index.
    let mut delta = vec![0isize; k + 2];
    for v in 1..=k {
        let j = idx[v - 1];
        let last = graph
            .neighbors(v)
            .iter()
            .map(|&w| idx[w - 1])
            .max()
            .unwrap_or(0);
        if last > j {
            delta[j + 1] += 1;
            delta[last + 1] -= 1;
        }
    }
    let mut best = 0;
    let mut cur = 0isize;
    for d in delta {
        cur += d;
        best = best.max(cur as usize);
    }
    Ok(best)
}

/// The constructed linear order used for pathwidth bounds. For a spiral
/// decomposition this is the stair order of its untwirl, carried back to
/// the spiral's elements; if the spiral cannot be untwirled the natural
/// value order is returned.
pub fn stair_order(dec: &Decomposition) -> Vec<usize> {
    match dec {
        Decomposition::Stair(d) => {
            stair_linear_order(d).unwrap_or_else(|_| (1..=d.host().len()).collect())
        }
        Decomposition::Spiral(d) => twirl::untwirl_with_map(d)
            .ok()
            .and_then(|flat| {
                let order = stair_linear_order(&flat.decomposition).ok()?;
                let back = flat.map.inverse();
                Some(order.into_iter().map(|v| back.apply(v)).collect())
            })
            .unwrap_or_else(|| (1..=d.host().len()).collect()),
    }
}

/// Order for a bare stair-decomposition; errors when blocks are not increasing.
pub fn stair_order_of(dec: &StairDecomposition) -> Result<Vec<usize>> {
    stair_linear_order(dec)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PathwidthBound {
    pub blocks: usize,
    /// Proven ceiling: 2m for stair inputs, 6m for spiral inputs.
    pub ceiling: usize,
    /// Vertex separation of the host graph under [`stair_order`].
    pub separation: usize,
    /// For spiral inputs, the separation of the untwirled graph under its
    /// own stair order.
    pub untwirled_separation: Option<usize>,
}

pub fn pathwidth_bound(dec: &Decomposition) -> Result<PathwidthBound> {
    let m = dec.block_count();
    let host = dec.host();
    if host.is_empty() {
        return Ok(PathwidthBound {
            blocks: m,
            ceiling: 0,
            separation: 0,
            untwirled_separation: None,
        });
    }
    let graph = build_graph(host)?;
    let separation = vertex_separation(&graph, &stair_order(dec))?;
    Ok(match dec {
        Decomposition::Stair(_) => PathwidthBound {
            blocks: m,
            ceiling: 2 * m,
            separation,
            untwirled_separation: None,
        },
        Decomposition::Spiral(d) => {
            let flat = twirl::untwirl(d)?;
            let g = build_graph(flat.host())?;
            let untwirled = vertex_separation(&g, &stair_linear_order(&flat)?)?;
            PathwidthBound {
                blocks: m,
                ceiling: 6 * m,
                separation,
                untwirled_separation: Some(untwirled),
            }
        }
    })
}

/// Good/bad rule for an edge between blocks `i <= j` (1-based).
fn good(edge: &Edge, i: usize, j: usize) -> bool {
    i == j || (j == i + 1 && ((edge.blue && i % 2 == 1) || (edge.red && i.is_multiple_of(2))))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ClassifiedEdge {
    #[serde(flatten)]
    pub edge: Edge,
    pub bad: bool,
}

/// Labels every edge of the host's graph as good or bad with respect to the
/// blocks (given as `block_index()[v - 1]`).
pub fn classify_edges_by_index(graph: &PatternGraph, block_index: &[usize]) -> Vec<ClassifiedEdge> {
    graph
        .edges()
        .iter()
        .map(|e| {
            let (bu, bv) = (block_index[e.u - 1], block_index[e.v - 1]);
            ClassifiedEdge {
                edge: *e,
                bad: !good(e, bu.min(bv), bu.max(bv)),
            }
        })
        .collect()
}

pub fn classify_edges(dec: &Decomposition) -> Result<Vec<ClassifiedEdge>> {
    if dec.host().is_empty() {
        return Ok(Vec::new());
    }
    let graph = build_graph(dec.host())?;
    Ok(classify_edges_by_index(&graph, &dec.block_index()))
}

pub fn bad_edge_count(dec: &Decomposition) -> Result<usize> {
    Ok(classify_edges(dec)?.iter().filter(|e| e.bad).count())
}

/// Per block, the vertices incident to a bad edge leading to a later block
/// (`forward`) and to an earlier block (`backward`).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BadEdgeProfile {
    pub forward: Vec<Vec<usize>>,
    pub backward: Vec<Vec<usize>>,
}

pub fn bad_edge_profile(dec: &Decomposition) -> Result<BadEdgeProfile> {
    let m = dec.block_count();
    let idx = dec.block_index();
    let mut profile = BadEdgeProfile {
        forward: vec![Vec::new(); m],
        backward: vec![Vec::new(); m],
    };
    for ce in classify_edges(dec)?.iter().filter(|e| e.bad) {
        let (a, b) = (ce.edge.u, ce.edge.v);
        let (ba, bb) = (idx[a - 1], idx[b - 1]);
        let (lo, hi) = if ba < bb { (a, b) } else { (b, a) };
        let (blo, bhi) = (ba.min(bb), ba.max(bb));
        if blo == bhi {
            continue;
        }
        if !profile.forward[blo - 1].contains(&lo) {
            profile.forward[blo - 1].push(lo);
        }
        if !profile.backward[bhi - 1].contains(&hi) {
            profile.backward[bhi - 1].push(hi);
        }
    }
    Ok(profile)
}

/// `{"k", "edges": [{"u","v","red","blue","bad"}]}`.
pub fn graph_json(graph: &PatternGraph, block_index: &[usize]) -> serde_json::Value {
    serde_json::json!({
        "k": graph.vertex_count(),
        "edges": classify_edges_by_index(graph, block_index),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomp::{stair_decompose, StairDecomposition};
    use crate::perm::all_permutations;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn graph_examples() {
        let g = build_graph(&p("231")).unwrap();
        let e: Vec<_> = g.edges().iter().map(|e| (e.u, e.v, e.red, e.blue)).collect();
        assert_eq!(
            e,
            vec![(1, 2, true, false), (1, 3, false, true), (2, 3, true, true)]
        );
        let g = build_graph(&Permutation::identity(4)).unwrap();
        assert!(g.edges().iter().all(|e| e.red && e.blue && e.v == e.u + 1));
        assert_eq!(g.edges().len(), 3);
        assert!(build_graph(&p("1")).unwrap().edges().is_empty());
        assert!(matches!(
            build_graph(&Permutation::empty()),
            Err(Error::EmptyPermutation)
        ));
    }

    #[test]
    fn separation_examples() {
        let g = build_graph(&p("123")).unwrap();
        assert_eq!(vertex_separation(&g, &[1, 2, 3]).unwrap(), 1);
        let tri = build_graph(&p("231")).unwrap();
        for order in all_permutations(3) {
            assert_eq!(vertex_separation(&tri, order.values()).unwrap(), 2);
        }
        assert_eq!(vertex_separation(&build_graph(&p("1")).unwrap(), &[1]).unwrap(), 0);
        assert!(vertex_separation(&g, &[1, 2]).is_err());
        assert!(vertex_separation(&g, &[1, 1, 2]).is_err());
    }

    #[test]
    fn separators_match_separation() {
        let g = build_graph(&p("241635")).unwrap();
        let order = [1, 2, 4, 3, 6, 5];
        let seps = separators(&g, &order).unwrap();
        let max = seps.iter().map(Vec::len).max().unwrap();
        assert_eq!(max, vertex_separation(&g, &order).unwrap());
    }

    #[test]
    fn stair_order_examples() {
        let d = StairDecomposition::new(p("1324"), vec![vec![1, 2], vec![3, 4]]).unwrap();
        assert_eq!(stair_order(&d.clone().into()), vec![1, 3, 2, 4]);
        let d = stair_decompose(&Permutation::identity(4)).unwrap();
        assert_eq!(stair_order(&d.into()), vec![1, 2, 3, 4]);
        let d = stair_decompose(&p("213")).unwrap();
        assert_eq!(stair_order(&d.into()), vec![2, 1, 3]);
    }

    #[test]
    fn pathwidth_examples() {
        let d = StairDecomposition::new(p("1324"), vec![vec![1, 2], vec![3, 4]]).unwrap();
        let b = pathwidth_bound(&d.into()).unwrap();
        assert!(b.separation <= 4);
        assert_eq!(b.ceiling, 4);
        let id = stair_decompose(&Permutation::identity(5)).unwrap();
        let b = pathwidth_bound(&id.into()).unwrap();
        assert_eq!((b.separation, b.ceiling), (1, 2));
    }

    #[test]
    fn classification_examples() {
        let d = StairDecomposition::new(p("1324"), vec![vec![1, 2], vec![3, 4]]).unwrap();
        let edges = classify_edges(&d.into()).unwrap();
        assert_eq!(edges.len(), 5);
        assert!(edges.iter().all(|e| !e.bad));
        let one = stair_decompose(&Permutation::identity(6)).unwrap();
        assert_eq!(bad_edge_count(&one.into()).unwrap(), 0);
    }

    #[test]
    fn deleting_edges_never_raises_separation() {
        let g = build_graph(&p("3142")).unwrap();
        let order = [1, 2, 3, 4];
        let base = vertex_separation(&g, &order).unwrap();
        for e in g.edges() {
            let h = g.without_edge(e.u, e.v);
            assert!(vertex_separation(&h, &order).unwrap() <= base);
        }
    }
}

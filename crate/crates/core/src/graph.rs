//! Compatibility graphs: the pentagon, the N > 5 family with its two complete
//! subgraphs, exact independence numbers, and maximal-clique (context) listing.

use std::collections::BTreeSet;

use crate::error::{Error, Result};

/// Largest vertex count accepted by the exhaustive assignment/independent-set
/// searches. 2^24 subsets with pruning finishes in seconds; anything larger is
/// out of contract.
pub const MAX_EXHAUSTIVE_VERTICES: u32 = 24;

/// An undirected graph on vertices 1..=n with the two designated vertex lists
/// that induce complete subgraphs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: u32,
    edges: BTreeSet<(u32, u32)>,
    part_a: Vec<u32>,
    part_b: Vec<u32>,
}

impl Graph {
    /// Validates and builds a graph. Edges are stored as ascending pairs;
    /// self-loops and out-of-range vertices are rejected, and each designated
    /// part must induce a complete subgraph.
    pub fn new(
        n: u32,
        edges: impl IntoIterator<Item = (u32, u32)>,
        part_a: Vec<u32>,
        part_b: Vec<u32>,
    ) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (i, j) in edges {
            if i == j {
                return Err(Error::InvalidGraph(format!("self-loop at vertex {i}")));
            }
            if !(1..=n).contains(&i) || !(1..=n).contains(&j) {
                return Err(Error::InvalidGraph(format!(
                    "edge ({i},{j}) outside vertex range 1..={n}"
                )));
            }
            set.insert((i.min(j), i.max(j)));
        }
        let g = Self { n, edges: set, part_a, part_b };
        for part in [&g.part_a, &g.part_b] {
            for v in part {
                if !(1..=n).contains(v) {
                    return Err(Error::InvalidGraph(format!(
                        "part vertex {v} outside range 1..={n}"
                    )));
                }
            }
            for (x, a) in part.iter().enumerate() {
                for b in &part[x + 1..] {
                    if !g.adjacent(*a, *b) {
                        return Err(Error::InvalidGraph(format!(
                            "part vertices {a} and {b} are not adjacent"
                        )));
                    }
                }
            }
        }
        Ok(g)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Edges as ascending pairs in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn part_a(&self) -> &[u32] {
        &self.part_a
    }

    pub fn part_b(&self) -> &[u32] {
        &self.part_b
    }

    pub fn adjacent(&self, i: u32, j: u32) -> bool {
        i != j && self.edges.contains(&(i.min(j), i.max(j)))
    }

    pub fn vertices(&self) -> impl Iterator<Item = u32> {
        1..=self.n
    }

    pub fn neighbors(&self, v: u32) -> Vec<u32> {
        self.vertices().filter(|&u| self.adjacent(u, v)).collect()
    }

    pub fn is_clique(&self, vertices: &[u32]) -> bool {
        vertices
            .iter()
            .enumerate()
            .all(|(x, a)| vertices[x + 1..].iter().all(|b| self.adjacent(*a, *b)))
    }

    /// Neighbor bitmasks (bit v-1 for vertex v), defined for n <= 64.
    fn neighbor_masks(&self) -> Vec<u64> {
        assert!(self.n <= 64);
        let mut masks = vec![0u64; self.n as usize + 1];
        for (i, j) in self.edges() {
            masks[i as usize] |= 1 << (j - 1);
            masks[j as usize] |= 1 << (i - 1);
        }
        masks
    }
}

/// A set of mutually compatible measurements: a clique of the parent graph,
/// stored as a sorted vertex list.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Context {
    vertices: Vec<u32>,
}

impl Context {
    pub fn new(graph: &Graph, mut vertices: Vec<u32>) -> Result<Self> {
        vertices.sort_unstable();
        vertices.dedup();
        if !graph.is_clique(&vertices) {
            return Err(Error::InvalidGraph(format!(
                "vertices {vertices:?} do not form a clique"
            )));
        }
        Ok(Self { vertices })
    }

    pub fn vertices(&self) -> &[u32] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn contains(&self, v: u32) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }
}

/// Builds the compatibility graph on `n` vertices.
///
/// For n = 5 this is the 5-cycle with empty parts. For n > 5, vertex 1 is
/// adjacent to every vertex except 2 and n, vertices 2 and n are adjacent,
/// and the two parts each induce a complete subgraph:
/// odd n uses parts {2..(n+1)/2} and {(n+1)/2+1..n}; even n uses
/// {2..n/2+1} and {n/2+1..n}, which share vertex n/2+1.
pub fn build_family_graph(n: u32) -> Result<Graph> {
    if n < 5 {
        return Err(Error::VertexCountTooSmall { min: 5, got: n });
    }
    if n == 5 {
        let edges = (1..=5).map(|i| (i, i % 5 + 1));
        return Graph::new(5, edges, Vec::new(), Vec::new());
    }
    let (part_a, part_b): (Vec<u32>, Vec<u32>) = if n % 2 == 1 {
        let split = n.div_ceil(2);
        ((2..=split).collect(), (split + 1..=n).collect())
    } else {
        ((2..=n / 2 + 1).collect(), (n / 2 + 1..=n).collect())
    };
    let mut edges = Vec::new();
    for i in 3..n {
        edges.push((1, i));
    }
    edges.push((2, n));
    for part in [&part_a, &part_b] {
        for (x, a) in part.iter().enumerate() {
            for b in &part[x + 1..] {
                edges.push((*a, *b));
            }
        }
    }
    Graph::new(n, edges, part_a, part_b)
}

/// Exact independence number by exhaustive subset search with pruning.
/// Rejects graphs above [`MAX_EXHAUSTIVE_VERTICES`].
pub fn independence_number(graph: &Graph) -> Result<u32> {
    if graph.n() > MAX_EXHAUSTIVE_VERTICES {
        return Err(Error::GraphTooLarge {
            got: graph.n(),
            max: MAX_EXHAUSTIVE_VERTICES,
        });
    }
    let masks = graph.neighbor_masks();
    let n = graph.n();
    let mut best = 0u32;
    search_independent(1, n, 0, 0, &masks, &mut best);
    Ok(best)
}

fn search_independent(v: u32, n: u32, banned: u64, count: u32, masks: &[u64], best: &mut u32) {
    if v > n {
        *best = (*best).max(count);
        return;
    }
    if count + (n - v + 1) <= *best {
        return; // even taking every remaining vertex cannot improve
    }
    if banned & (1 << (v - 1)) == 0 {
        search_independent(v + 1, n, banned | masks[v as usize], count + 1, masks, best);
    }
    search_independent(v + 1, n, banned, count, masks, best);
}

/// All maximal cliques, each sorted, the list in lexicographic order.
pub fn maximal_cliques(graph: &Graph) -> Vec<Context> {
    let mut found: Vec<Vec<u32>> = Vec::new();
    let p: Vec<u32> = graph.vertices().collect();
    bron_kerbosch(graph, &mut Vec::new(), p, Vec::new(), &mut found);
    for clique in &mut found {
        clique.sort_unstable();
    }
    found.sort();
    found
        .into_iter()
        .map(|vertices| Context { vertices })
        .collect()
}

fn bron_kerbosch(
    graph: &Graph,
    r: &mut Vec<u32>,
    p: Vec<u32>,
    x: Vec<u32>,
    found: &mut Vec<Vec<u32>>,
) {
    if p.is_empty() && x.is_empty() {
        found.push(r.clone());
        return;
    }
    // pivot on the vertex of P ∪ X with the most neighbors in P
    let pivot = p
        .iter()
        .chain(&x)
        .copied()
        .max_by_key(|&u| p.iter().filter(|&&w| graph.adjacent(u, w)).count())
        .unwrap();
    let candidates: Vec<u32> = p
        .iter()
        .copied()
        .filter(|&v| !graph.adjacent(pivot, v))
        .collect();
    let mut p = p;
    let mut x = x;
    for v in candidates {
        let next_p = p.iter().copied().filter(|&u| graph.adjacent(u, v)).collect();
        let next_x = x.iter().copied().filter(|&u| graph.adjacent(u, v)).collect();
        r.push(v);
        bron_kerbosch(graph, r, next_p, next_x, found);
        r.pop();
        p.retain(|&u| u != v);
        x.push(v);
    }
}

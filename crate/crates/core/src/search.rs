//! Exact maximum of a `G`-invariant intersecting family in `[k]^n`.
//!
//! A `G`-invariant family is a union of `G`-orbits, so the problem becomes a
//! maximum-weight independent set on the orbit conflict graph: vertices are
//! orbits whose members pairwise agree somewhere, weighted by orbit size, and
//! two orbits conflict when some cross pair agrees nowhere.

use crate::covering::base_poset;
use crate::error::{Error, Result};
use crate::family::{Point, ProductFamily, Space};
use crate::lab::{apply_permutation, PermutationGroupSpec};
use crate::rational::{put_rational, Rational};

/// Most feasible orbits the exhaustive oracle will scan.
pub const BRUTE_FORCE_MAX_ORBITS: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orbit {
    /// Lexicographically smallest member.
    pub representative: Point,
    /// Members in lexicographic order.
    pub members: Vec<Point>,
}

impl Orbit {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

#[derive(Debug, Clone)]
pub struct OrbitDecomposition {
    pub k: usize,
    pub n: usize,
    pub group: PermutationGroupSpec,
    /// Sorted by representative.
    pub orbits: Vec<Orbit>,
    space: Space,
    /// Orbit index of every point code.
    orbit_of: Vec<usize>,
}

impl OrbitDecomposition {
    pub fn orbit_of(&self, point: &[u8]) -> usize {
        self.orbit_of[self.space.encode(point)]
    }
}

/// Orbits of `[k]^n` under the group generated by `group`.
///
/// Unless `permissive`, the generated group must be transitive on coordinates.
pub fn decompose_orbits(
    k: usize,
    n: usize,
    group: &PermutationGroupSpec,
    permissive: bool,
    budget: u64,
) -> Result<OrbitDecomposition> {
    if group.n() != n {
        return Err(Error::Validation(format!(
            "group acts on {} coordinates, not {n}",
            group.n()
        )));
    }
    if !permissive && !group.is_transitive() {
        return Err(Error::Validation(
            "generated group is not transitive".into(),
        ));
    }
    if k == 0 || k > 255 {
        return Err(Error::Domain(format!("alphabet size {k} out of range")));
    }
    let space = Space::new(k, n, budget)?;
    let mut orbit_of = vec![usize::MAX; space.size];
    let mut orbits = Vec::new();
    // Scanning codes upward makes the first unseen code the orbit minimum,
    // and emits orbits already sorted by representative.
    for start in 0..space.size {
        if orbit_of[start] != usize::MAX {
            continue;
        }
        let id = orbits.len();
        orbit_of[start] = id;
        let mut codes = vec![start];
        let mut head = 0;
        while head < codes.len() {
            let p = space.decode(codes[head]);
            head += 1;
            for g in group.generators() {
                let c = space.encode(&apply_permutation(g, &p));
                if orbit_of[c] == usize::MAX {
                    orbit_of[c] = id;
                    codes.push(c);
                }
            }
        }
        codes.sort_unstable();
        orbits.push(Orbit {
            representative: space.decode(start),
            members: codes.into_iter().map(|c| space.decode(c)).collect(),
        });
    }
    Ok(OrbitDecomposition {
        k,
        n,
        group: group.clone(),
        orbits,
        space,
        orbit_of,
    })
}

/// Fixed-width bitset over graph vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Bits(Vec<u64>);

impl Bits {
    fn empty(len: usize) -> Self {
        Bits(vec![0; len.div_ceil(64)])
    }

    fn full(len: usize) -> Self {
        let mut b = Self::empty(len);
        for i in 0..len {
            b.insert(i);
        }
        b
    }

    fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn remove(&mut self, i: usize) {
        self.0[i / 64] &= !(1 << (i % 64));
    }

    fn contains(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    fn first(&self) -> Option<usize> {
        self.0
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    fn and(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn minus(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & !b).collect())
    }

    fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                (w != 0).then(|| {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    i * 64 + b
                })
            })
        })
    }
}

#[derive(Debug, Clone)]
pub struct ConflictGraph {
    /// Orbit index of each vertex, increasing.
    pub vertices: Vec<usize>,
    pub weights: Vec<u64>,
    /// Orbits excluded because two of their own members agree nowhere.
    pub infeasible: Vec<usize>,
    adjacency: Vec<Bits>,
}

impl ConflictGraph {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].contains(v)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].iter().count()
    }

    pub fn edge_count(&self) -> usize {
        (0..self.len()).map(|v| self.degree(v)).sum::<usize>() / 2
    }

    pub fn vertex_of_orbit(&self, orbit: usize) -> Option<usize> {
        self.vertices.binary_search(&orbit).ok()
    }

    pub fn is_independent(&self, set: &[usize]) -> bool {
        set.iter()
            .enumerate()
            .all(|(i, &u)| set[i + 1..].iter().all(|&v| !self.has_edge(u, v)))
    }
}

pub fn build_conflict_graph(dec: &OrbitDecomposition) -> ConflictGraph {
    let space = dec.space;
    let k = dec.k;
    let orbit_count = dec.orbits.len();
    let mut infeasible = vec![false; orbit_count];
    let mut conflicts: Vec<Vec<usize>> = vec![Vec::new(); orbit_count];
    // For each point, walk the (k-1)^n points that differ from it everywhere.
    let mut other = vec![0u8; dec.n];
    let codes = if k >= 2 { 0..space.size } else { 0..0 };
    for code in codes {
        let p = space.decode(code);
        let a = dec.orbit_of[code];
        let mut cursor = vec![0u8; dec.n];
        'odometer: loop {
            for i in 0..dec.n {
                // skip p[i]: map 0..k-1 onto the symbols other than p[i]
                other[i] = if cursor[i] < p[i] {
                    cursor[i]
                } else {
                    cursor[i] + 1
                };
            }
            let b = dec.orbit_of[space.encode(&other)];
            if a == b {
                infeasible[a] = true;
            } else if a < b {
                conflicts[a].push(b);
            }
            let mut i = dec.n;
            while i > 0 {
                i -= 1;
                cursor[i] += 1;
                if (cursor[i] as usize) < k - 1 {
                    continue 'odometer;
                }
                cursor[i] = 0;
            }
            break;
        }
    }
    let vertices: Vec<usize> = (0..orbit_count).filter(|&o| !infeasible[o]).collect();
    let weights = vertices
        .iter()
        .map(|&o| dec.orbits[o].size() as u64)
        .collect();
    let mut adjacency = vec![Bits::empty(vertices.len()); vertices.len()];
    for (a, list) in conflicts.iter().enumerate() {
        let Ok(u) = vertices.binary_search(&a) else {
            continue;
        };
        for b in list {
            if let Ok(v) = vertices.binary_search(b) {
                adjacency[u].insert(v);
                adjacency[v].insert(u);
            }
        }
    }
    ConflictGraph {
        vertices,
        weights,
        infeasible: (0..orbit_count).filter(|&o| infeasible[o]).collect(),
        adjacency,
    }
}

#[derive(Debug, Clone)]
pub struct SearchResult {
    pub k: usize,
    pub n: usize,
    pub group: PermutationGroupSpec,
    pub max_size: usize,
    /// Orbit indices forming the witness, increasing.
    pub orbit_indices: Vec<usize>,
    pub witness: ProductFamily,
    pub nodes_explored: u64,
}

impl SearchResult {
    pub fn density(&self) -> Rational {
        crate::lab::family_size_and_density(&self.witness).1
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut map = serde_json::Map::new();
        map.insert("k".into(), self.k.into());
        map.insert("n".into(), self.n.into());
        map.insert("generators".into(), self.group.generators().to_vec().into());
        map.insert("max_size".into(), self.max_size.into());
        put_rational(&mut map, "density", &self.density());
        map.insert("orbit_indices".into(), self.orbit_indices.clone().into());
        map.insert("nodes_explored".into(), self.nodes_explored.into());
        serde_json::Value::Object(map)
    }
}

fn finish(
    dec: &OrbitDecomposition,
    graph: &ConflictGraph,
    chosen: Vec<usize>,
    nodes_explored: u64,
) -> Result<SearchResult> {
    let mut orbit_indices: Vec<usize> = chosen.iter().map(|&v| graph.vertices[v]).collect();
    orbit_indices.sort_unstable();
    let points = orbit_indices
        .iter()
        .flat_map(|&o| dec.orbits[o].members.iter().cloned())
        .collect();
    let witness = ProductFamily::new(base_poset(dec.k)?, dec.n, points)?;
    Ok(SearchResult {
        k: dec.k,
        n: dec.n,
        group: dec.group.clone(),
        max_size: witness.len(),
        orbit_indices,
        witness,
        nodes_explored,
    })
}

/// Branch and bound for the maximum-weight independent set.
struct BranchAndBound {
    /// Graph relabelled so that bit order is branching priority.
    adjacency: Vec<Bits>,
    weights: Vec<u64>,
    best_weight: u64,
    best: Vec<usize>,
    nodes: u64,
}

impl BranchAndBound {
    fn weight(&self, set: &Bits) -> u64 {
        set.iter().map(|v| self.weights[v]).sum()
    }

    /// Greedy partition of the candidates into conflict cliques; an independent
    /// set takes at most one vertex per clique.
    fn clique_cover_bound(&self, candidates: &Bits) -> u64 {
        let mut rest = candidates.clone();
        let mut total = 0;
        while let Some(v) = rest.first() {
            rest.remove(v);
            let mut heaviest = self.weights[v];
            let mut common = rest.and(&self.adjacency[v]);
            while let Some(u) = common.first() {
                rest.remove(u);
                heaviest = heaviest.max(self.weights[u]);
                common.remove(u);
                common = common.and(&self.adjacency[u]);
            }
            total += heaviest;
        }
        total
    }

    fn expand(&mut self, candidates: Bits, current_weight: u64, current: &mut Vec<usize>) {
        self.nodes += 1;
        let Some(v) = candidates.first() else {
            if current_weight > self.best_weight {
                self.best_weight = current_weight;
                self.best = current.clone();
            }
            return;
        };
        if current_weight + self.weight(&candidates) <= self.best_weight
            || current_weight + self.clique_cover_bound(&candidates) <= self.best_weight
        {
            return;
        }
        let mut with = candidates.minus(&self.adjacency[v]);
        with.remove(v);
        current.push(v);
        self.expand(with, current_weight + self.weights[v], current);
        current.pop();
        let mut without = candidates;
        without.remove(v);
        self.expand(without, current_weight, current);
    }
}

/// Vertices by decreasing `weight / (degree + 1)`, ties by vertex index.
fn branching_order(graph: &ConflictGraph) -> Vec<usize> {
    let degrees: Vec<u64> = (0..graph.len()).map(|v| graph.degree(v) as u64).collect();
    let mut order: Vec<usize> = (0..graph.len()).collect();
    order.sort_by(|&a, &b| {
        let lhs = graph.weights[a] as u128 * (degrees[b] + 1) as u128;
        let rhs = graph.weights[b] as u128 * (degrees[a] + 1) as u128;
        rhs.cmp(&lhs).then(a.cmp(&b))
    });
    order
}

/// Lexicographically smallest independent set (as sorted vertex list) of weight `target`.
fn canonical_selection(graph: &ConflictGraph, target: u64, nodes: &mut u64) -> Vec<usize> {
    fn walk(
        graph: &ConflictGraph,
        candidates: Bits,
        current_weight: u64,
        target: u64,
        current: &mut Vec<usize>,
        nodes: &mut u64,
    ) -> bool {
        *nodes += 1;
        if current_weight == target {
            return true;
        }
        let remaining: u64 = candidates.iter().map(|v| graph.weights[v]).sum();
        if current_weight + remaining < target {
            return false;
        }
        let Some(v) = candidates.first() else {
            return false;
        };
        let mut with = candidates.minus(&graph.adjacency[v]);
        with.remove(v);
        current.push(v);
        if walk(
            graph,
            with,
            current_weight + graph.weights[v],
            target,
            current,
            nodes,
        ) {
            return true;
        }
        current.pop();
        let mut without = candidates;
        without.remove(v);
        walk(graph, without, current_weight, target, current, nodes)
    }
    let mut current = Vec::new();
    let found = walk(
        graph,
        Bits::full(graph.len()),
        0,
        target,
        &mut current,
        nodes,
    );
    debug_assert!(found || target == 0);
    current
}

/// Largest intersecting family of `[k]^n` invariant under `group`, with the
/// lexicographically smallest orbit-index set among optimal witnesses.
pub fn max_symmetric_intersecting(
    k: usize,
    n: usize,
    group: &PermutationGroupSpec,
    budget: u64,
) -> Result<SearchResult> {
    let dec = decompose_orbits(k, n, group, false, budget)?;
    let graph = build_conflict_graph(&dec);
    max_weight_independent_set(&dec, &graph)
}

pub fn max_weight_independent_set(
    dec: &OrbitDecomposition,
    graph: &ConflictGraph,
) -> Result<SearchResult> {
    let order = branching_order(graph);
    let mut rank = vec![0usize; graph.len()];
    for (r, &v) in order.iter().enumerate() {
        rank[v] = r;
    }
    let adjacency: Vec<Bits> = order
        .iter()
        .map(|&v| {
            let mut b = Bits::empty(graph.len());
            for u in graph.adjacency[v].iter() {
                b.insert(rank[u]);
            }
            b
        })
        .collect();
    let weights = order.iter().map(|&v| graph.weights[v]).collect();
    let mut bb = BranchAndBound {
        adjacency,
        weights,
        best_weight: 0,
        best: Vec::new(),
        nodes: 0,
    };
    bb.expand(Bits::full(graph.len()), 0, &mut Vec::new());
    let mut nodes = bb.nodes;
    let chosen = canonical_selection(graph, bb.best_weight, &mut nodes);
    finish(dec, graph, chosen, nodes)
}

/// Exhaustive scan over all subsets of feasible orbits; the oracle for [`max_symmetric_intersecting`].
pub fn brute_force_max(
    k: usize,
    n: usize,
    group: &PermutationGroupSpec,
    budget: u64,
) -> Result<SearchResult> {
    let dec = decompose_orbits(k, n, group, false, budget)?;
    let graph = build_conflict_graph(&dec);
    brute_force_on(&dec, &graph)
}

pub fn brute_force_on(dec: &OrbitDecomposition, graph: &ConflictGraph) -> Result<SearchResult> {
    let v = graph.len();
    if v > BRUTE_FORCE_MAX_ORBITS {
        return Err(Error::Budget {
            what: "exhaustive orbit-subset scan",
            needed: 1u128 << v,
            budget: 1 << BRUTE_FORCE_MAX_ORBITS,
        });
    }
    let adj: Vec<u32> = (0..v)
        .map(|u| {
            (0..v)
                .filter(|&w| graph.has_edge(u, w))
                .fold(0u32, |acc, w| acc | 1 << w)
        })
        .collect();
    let members = |s: u32| (0..v).filter(move |&i| s >> i & 1 == 1);
    let mut best_weight = 0u64;
    let mut best_set: Vec<usize> = Vec::new();
    for s in 0u32..(1u32 << v) {
        if members(s).any(|i| adj[i] & s != 0) {
            continue;
        }
        let w: u64 = members(s).map(|i| graph.weights[i]).sum();
        if w > best_weight {
            best_weight = w;
            best_set = members(s).collect();
        } else if w == best_weight {
            let candidate: Vec<usize> = members(s).collect();
            if candidate < best_set {
                best_set = candidate;
            }
        }
    }
    finish(dec, graph, best_set, 1u64 << v)
}

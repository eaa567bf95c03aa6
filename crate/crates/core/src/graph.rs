//! Dual graphs of nodal curves: vertices are irreducible components (weighted
//! by geometric genus), edges are nodes. Loops and parallel edges are allowed.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vertex {
    pub id: String,
    pub genus: u32,
}

/// A connected dual graph. Vertices are kept sorted by id so that all
/// derived data (subcurve enumeration, chain lists, stabilized graphs) is
/// deterministic regardless of input order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualGraph {
    vertices: Vec<Vertex>,
    /// Edges as index pairs with a <= b; loops have a == b. Sorted.
    edges: Vec<(usize, usize)>,
}

/// A nonempty subset of vertices, as a bitmask over the graph's (sorted)
/// vertex list. The full vertex set is allowed (it is what `omega` needs to
/// compute omega_C); balance operations insist on proper subsets themselves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Subcurve {
    mask: u64,
}

impl Subcurve {
    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn contains(&self, index: usize) -> bool {
        self.mask >> index & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }
}

/// Which subcurves to enumerate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubcurveMode {
    /// Every nonempty proper subset of vertices.
    All,
    /// Nonempty proper subsets with both the subset and its complement
    /// inducing connected subgraphs.
    ConnectedBothSides,
}

/// A maximal chain of rational (genus 0, valence 2, loop-free) vertices.
/// `attachments` are the two non-chain vertices the chain ends on; when they
/// coincide the chain closes a loop onto a single vertex, which we flag.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaximalChain {
    pub vertices: Vec<String>,
    pub attachments: (String, String),
    pub closes_loop: bool,
}

/// Result of contracting every maximal rational chain to a node.
#[derive(Debug, Clone)]
pub struct Stabilization {
    pub graph: DualGraph,
    /// Surviving vertices map to themselves (ids are preserved).
    pub vertex_map: BTreeMap<String, String>,
    /// Each contracted chain together with the endpoints of the edge that
    /// replaced it in the stabilized graph.
    pub chain_edges: Vec<(MaximalChain, (String, String))>,
}

impl DualGraph {
    /// Builds a graph from owned parts; validates ids, endpoints and
    /// connectedness. At most 64 vertices (subcurves are bitmasks).
    pub fn from_parts(mut vertices: Vec<Vertex>, edges: &[(String, String)]) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::Validation("graph must have at least one vertex".into()));
        }
        if vertices.len() > 64 {
            return Err(Error::Validation("graphs with more than 64 vertices are not supported".into()));
        }
        vertices.sort_by(|a, b| a.id.cmp(&b.id));
        for w in vertices.windows(2) {
            if w[0].id == w[1].id {
                return Err(Error::Validation(format!("duplicate vertex id '{}'", w[0].id)));
            }
        }
        let index_of = |id: &str| -> Result<usize> {
            vertices
                .binary_search_by(|v| v.id.as_str().cmp(id))
                .map_err(|_| Error::Validation(format!("edge endpoint '{id}' is not a vertex")))
        };
        let mut e = Vec::with_capacity(edges.len());
        for (a, b) in edges {
            let (i, j) = (index_of(a)?, index_of(b)?);
            e.push((i.min(j), i.max(j)));
        }
        e.sort_unstable();
        let g = DualGraph { vertices, edges: e };
        if !g.is_connected_subset(g.full_mask()) {
            return Err(Error::Validation("graph must be connected".into()));
        }
        Ok(g)
    }

    /// Convenience constructor for literals in tests.
    pub fn new(vertices: &[(&str, u32)], edges: &[(&str, &str)]) -> Result<Self> {
        let vs = vertices
            .iter()
            .map(|&(id, genus)| Vertex { id: id.into(), genus })
            .collect();
        let es: Vec<(String, String)> = edges
            .iter()
            .map(|&(a, b)| (a.into(), b.into()))
            .collect();
        Self::from_parts(vs, &es)
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn index_of(&self, id: &str) -> Result<usize> {
        self.vertices
            .binary_search_by(|v| v.id.as_str().cmp(id))
            .map_err(|_| Error::Validation(format!("unknown vertex id '{id}'")))
    }

    fn full_mask(&self) -> u64 {
        if self.vertices.len() == 64 {
            u64::MAX
        } else {
            (1u64 << self.vertices.len()) - 1
        }
    }

    pub fn full_subcurve(&self) -> Subcurve {
        Subcurve { mask: self.full_mask() }
    }

    pub fn subcurve_from_ids(&self, ids: &[&str]) -> Result<Subcurve> {
        if ids.is_empty() {
            return Err(Error::Validation("subcurve must be nonempty".into()));
        }
        let mut mask = 0u64;
        for id in ids {
            mask |= 1 << self.index_of(id)?;
        }
        Ok(Subcurve { mask })
    }

    pub fn subcurve_from_mask(&self, mask: u64) -> Result<Subcurve> {
        if mask == 0 || mask & !self.full_mask() != 0 {
            return Err(Error::Validation("subcurve mask out of range or empty".into()));
        }
        Ok(Subcurve { mask })
    }

    pub fn subcurve_ids(&self, z: &Subcurve) -> Vec<&str> {
        (0..self.vertex_count())
            .filter(|&i| z.contains(i))
            .map(|i| self.vertices[i].id.as_str())
            .collect()
    }

    /// Valence of a vertex: incident edges, loops counted twice.
    pub fn valence(&self, index: usize) -> usize {
        self.edges
            .iter()
            .map(|&(a, b)| (a == index) as usize + (b == index) as usize)
            .sum()
    }

    pub fn loops_at(&self, index: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == index && b == index).count()
    }

    /// Arithmetic genus: sum of vertex genera + E - V + 1.
    pub fn arithmetic_genus(&self) -> i64 {
        let gsum: i64 = self.vertices.iter().map(|v| v.genus as i64).sum();
        gsum + self.edges.len() as i64 - self.vertices.len() as i64 + 1
    }

    /// Semistable: every genus-0 vertex has valence >= 2.
    pub fn is_semistable(&self) -> bool {
        (0..self.vertex_count()).all(|i| self.vertices[i].genus > 0 || self.valence(i) >= 2)
    }

    /// Stable: every genus-0 vertex has valence >= 3.
    pub fn is_stable(&self) -> bool {
        (0..self.vertex_count()).all(|i| self.vertices[i].genus > 0 || self.valence(i) >= 3)
    }

    fn check_subcurve(&self, z: &Subcurve) -> Result<()> {
        if z.mask == 0 {
            return Err(Error::Validation("subcurve must be nonempty".into()));
        }
        if z.mask & !self.full_mask() != 0 {
            return Err(Error::Validation("subcurve mask out of range".into()));
        }
        Ok(())
    }

    /// Number of nodes joining Z to its complement. Loops never cross.
    pub fn k_z(&self, z: &Subcurve) -> Result<i64> {
        self.check_subcurve(z)?;
        Ok(self
            .edges
            .iter()
            .filter(|&&(a, b)| z.contains(a) != z.contains(b))
            .count() as i64)
    }

    /// Edges with both endpoints in Z (loops at vertices of Z included).
    pub fn internal_edges(&self, z: &Subcurve) -> Result<i64> {
        self.check_subcurve(z)?;
        Ok(self
            .edges
            .iter()
            .filter(|&&(a, b)| z.contains(a) && z.contains(b))
            .count() as i64)
    }

    /// Degree of the dualizing sheaf on Z:
    /// omega_Z = 2 g_Z - 2 + k_Z = sum_v (2 genus(v) - 2) + 2 #internal + k_Z.
    /// For Z the whole graph this is omega_C = 2g - 2.
    pub fn omega(&self, z: &Subcurve) -> Result<i64> {
        self.check_subcurve(z)?;
        let gpart: i64 = (0..self.vertex_count())
            .filter(|&i| z.contains(i))
            .map(|i| 2 * self.vertices[i].genus as i64 - 2)
            .sum();
        Ok(gpart + 2 * self.internal_edges(z)? + self.k_z(z)?)
    }

    /// Arithmetic genus of the (possibly disconnected) subcurve Z.
    pub fn subcurve_genus(&self, z: &Subcurve) -> Result<i64> {
        self.check_subcurve(z)?;
        let gsum: i64 = (0..self.vertex_count())
            .filter(|&i| z.contains(i))
            .map(|i| self.vertices[i].genus as i64)
            .sum();
        Ok(gsum + self.internal_edges(z)? - z.len() as i64 + self.component_count(z.mask) as i64)
    }

    fn component_count(&self, mask: u64) -> usize {
        let mut seen = 0u64;
        let mut comps = 0;
        for s in 0..self.vertex_count() {
            if mask >> s & 1 == 0 || seen >> s & 1 == 1 {
                continue;
            }
            comps += 1;
            let mut stack = alloc::vec![s];
            seen |= 1 << s;
            while let Some(v) = stack.pop() {
                for &(a, b) in &self.edges {
                    for (x, y) in [(a, b), (b, a)] {
                        if x == v && mask >> y & 1 == 1 && seen >> y & 1 == 0 {
                            seen |= 1 << y;
                            stack.push(y);
                        }
                    }
                }
            }
        }
        comps
    }

    pub fn is_connected_subset(&self, mask: u64) -> bool {
        mask != 0 && self.component_count(mask) == 1
    }

    /// Enumerates subcurves in increasing bitmask order.
    pub fn subcurves(&self, mode: SubcurveMode) -> Vec<Subcurve> {
        let full = self.full_mask();
        let mut out = Vec::new();
        if self.vertex_count() < 2 {
            return out;
        }
        for mask in 1..full {
            let keep = match mode {
                SubcurveMode::All => true,
                SubcurveMode::ConnectedBothSides => {
                    self.is_connected_subset(mask) && self.is_connected_subset(full & !mask)
                }
            };
            if keep {
                out.push(Subcurve { mask });
            }
        }
        out
    }

    /// Maximal chains of genus-0, valence-2, loop-free vertices.
    /// Requires a semistable graph; a cycle consisting entirely of chain
    /// vertices (a genus-1 curve with no anchor) is rejected.
    pub fn maximal_chains(&self) -> Result<Vec<MaximalChain>> {
        if !self.is_semistable() {
            return Err(Error::Domain("maximal chains require a semistable graph".into()));
        }
        let n = self.vertex_count();
        let is_chain: Vec<bool> = (0..n)
            .map(|i| self.vertices[i].genus == 0 && self.loops_at(i) == 0 && self.valence(i) == 2)
            .collect();
        // incident edge slots per vertex: (edge index, other endpoint)
        let mut inc: Vec<Vec<(usize, usize)>> = alloc::vec![Vec::new(); n];
        for (ei, &(a, b)) in self.edges.iter().enumerate() {
            inc[a].push((ei, b));
            if a != b {
                inc[b].push((ei, a));
            } else {
                inc[a].push((ei, a));
            }
        }
        let mut visited = alloc::vec![false; n];
        let mut chains = Vec::new();
        for start in 0..n {
            if !is_chain[start] || visited[start] {
                continue;
            }
            // walk in both directions from `start`
            let walk = |first_slot: usize| -> Result<(Vec<usize>, usize)> {
                let mut path = Vec::new();
                let (mut edge, mut cur) = inc[start][first_slot];
                loop {
                    if !is_chain[cur] {
                        return Ok((path, cur));
                    }
                    if cur == start || path.contains(&cur) {
                        return Err(Error::Domain(
                            "cycle of rational chain vertices has no attachment (genus-1 curve)".into(),
                        ));
                    }
                    path.push(cur);
                    let (e0, o0) = inc[cur][0];
                    let (_, o1) = inc[cur][1];
                    let next = if e0 == edge { (inc[cur][1].0, o1) } else { (e0, o0) };
                    edge = next.0;
                    cur = next.1;
                }
            };
            let (left, a) = walk(0)?;
            let (right, b) = walk(1)?;
            let mut verts: Vec<usize> = left.into_iter().rev().collect();
            verts.push(start);
            verts.extend(right);
            for &v in &verts {
                visited[v] = true;
            }
            // canonical orientation: smaller attachment id first, tie broken
            // by the chain's end vertex ids
            let (ida, idb) = (self.vertices[a].id.clone(), self.vertices[b].id.clone());
            let flip = idb < ida
                || (ida == idb
                    && self.vertices[*verts.last().unwrap()].id < self.vertices[verts[0]].id);
            let (att, mut vs) = if flip {
                ((idb, ida), verts.iter().rev().map(|&v| self.vertices[v].id.clone()).collect::<Vec<_>>())
            } else {
                ((ida, idb), verts.iter().map(|&v| self.vertices[v].id.clone()).collect::<Vec<_>>())
            };
            if att.0 == att.1 && vs.first() > vs.last() {
                vs.reverse();
            }
            let closes_loop = att.0 == att.1;
            chains.push(MaximalChain { vertices: vs, attachments: att, closes_loop });
        }
        chains.sort_by(|x, y| x.vertices.cmp(&y.vertices));
        Ok(chains)
    }

    /// Contracts every maximal rational chain to a node. Requires a
    /// semistable graph of genus >= 2; the result is the stable model's dual
    /// graph, with the same arithmetic genus.
    pub fn stabilize(&self) -> Result<Stabilization> {
        if self.arithmetic_genus() < 2 {
            return Err(Error::Domain("stabilization requires arithmetic genus >= 2".into()));
        }
        let chains = self.maximal_chains()?;
        let mut in_chain = alloc::vec![false; self.vertex_count()];
        for c in &chains {
            for id in &c.vertices {
                in_chain[self.index_of(id)?] = true;
            }
        }
        let vertices: Vec<Vertex> = (0..self.vertex_count())
            .filter(|&i| !in_chain[i])
            .map(|i| self.vertices[i].clone())
            .collect();
        let mut edges: Vec<(String, String)> = self
            .edges
            .iter()
            .filter(|&&(a, b)| !in_chain[a] && !in_chain[b])
            .map(|&(a, b)| (self.vertices[a].id.clone(), self.vertices[b].id.clone()))
            .collect();
        let mut chain_edges = Vec::new();
        for c in &chains {
            edges.push(c.attachments.clone());
            chain_edges.push((c.clone(), c.attachments.clone()));
        }
        let graph = DualGraph::from_parts(vertices, &edges)?;
        let vertex_map: BTreeMap<String, String> = graph
            .vertices
            .iter()
            .map(|v| (v.id.clone(), v.id.clone()))
            .collect();
        Ok(Stabilization { graph, vertex_map, chain_edges })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_loops() -> DualGraph {
        // single vertex of genus 0 with two loops: irreducible genus-2 curve
        DualGraph::new(&[("v", 0)], &[("v", "v"), ("v", "v")]).unwrap()
    }

    #[test]
    fn genus_of_loops_and_cycles() {
        assert_eq!(two_loops().arithmetic_genus(), 2);
        // triangle of elliptic curves
        let g = DualGraph::new(
            &[("a", 1), ("b", 1), ("c", 1)],
            &[("a", "b"), ("b", "c"), ("c", "a")],
        )
        .unwrap();
        assert_eq!(g.arithmetic_genus(), 4);
        // two genus-1 vertices joined by two edges (banana)
        let g = DualGraph::new(&[("a", 1), ("b", 1)], &[("a", "b"), ("a", "b")]).unwrap();
        assert_eq!(g.arithmetic_genus(), 3);
    }

    #[test]
    fn omega_values() {
        let g = two_loops();
        assert_eq!(g.omega(&g.full_subcurve()).unwrap(), 2);
        // genus-0 chain vertex between two genus-2 vertices
        let g = DualGraph::new(&[("a", 2), ("m", 0), ("b", 2)], &[("a", "m"), ("m", "b")]).unwrap();
        let z = g.subcurve_from_ids(&["m"]).unwrap();
        assert_eq!(g.omega(&z).unwrap(), 0);
        assert_eq!(g.omega(&g.full_subcurve()).unwrap(), 2 * g.arithmetic_genus() - 2);
        // additivity omega_Z + omega_Zc = omega_C for every proper subcurve
        for z in g.subcurves(SubcurveMode::All) {
            let zc = g.subcurve_from_mask(g.full_subcurve().mask() & !z.mask()).unwrap();
            assert_eq!(
                g.omega(&z).unwrap() + g.omega(&zc).unwrap(),
                g.omega(&g.full_subcurve()).unwrap()
            );
        }
    }

    #[test]
    fn subcurve_enumeration() {
        let g = DualGraph::new(
            &[("a", 1), ("b", 0), ("c", 1), ("d", 1)],
            &[("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")],
        )
        .unwrap();
        assert_eq!(g.subcurves(SubcurveMode::All).len(), 14);
        // on a 4-cycle: connected-both-sides subsets are arcs
        let cbs = g.subcurves(SubcurveMode::ConnectedBothSides);
        assert_eq!(cbs.len(), 12); // 4 singletons + 4 triples + 4 adjacent pairs
    }

    #[test]
    fn chains_and_stabilization() {
        // a - m1 - m2 - b with positive genus anchors
        let g = DualGraph::new(
            &[("a", 1), ("m1", 0), ("m2", 0), ("b", 1)],
            &[("a", "m1"), ("m1", "m2"), ("m2", "b")],
        )
        .unwrap();
        let ch = g.maximal_chains().unwrap();
        assert_eq!(ch.len(), 1);
        assert_eq!(ch[0].vertices, alloc::vec!["m1".to_string(), "m2".to_string()]);
        assert_eq!(ch[0].attachments, ("a".into(), "b".into()));
        assert!(!ch[0].closes_loop);
        let st = g.stabilize().unwrap();
        assert_eq!(st.graph.vertex_count(), 2);
        assert_eq!(st.graph.edge_count(), 1);
        assert_eq!(st.graph.arithmetic_genus(), g.arithmetic_genus());

        // chain closing a loop: a - m - a (two parallel edges through m)
        let g = DualGraph::new(&[("a", 2), ("m", 0)], &[("a", "m"), ("a", "m")]).unwrap();
        let ch = g.maximal_chains().unwrap();
        assert_eq!(ch.len(), 1);
        assert!(ch[0].closes_loop);
        let st = g.stabilize().unwrap();
        assert_eq!(st.graph.vertex_count(), 1);
        assert_eq!(st.graph.loops_at(0), 1);
        assert_eq!(st.graph.arithmetic_genus(), g.arithmetic_genus());
    }

    #[test]
    fn stabilize_is_idempotent() {
        let g = DualGraph::new(
            &[("a", 1), ("m1", 0), ("m2", 0), ("b", 1), ("c", 0)],
            &[("a", "m1"), ("m1", "m2"), ("m2", "b"), ("a", "c"), ("b", "c"), ("c", "c")],
        )
        .unwrap();
        let s1 = g.stabilize().unwrap();
        assert!(s1.graph.is_stable());
        let s2 = s1.graph.stabilize().unwrap();
        assert_eq!(s1.graph, s2.graph);
        assert!(s2.chain_edges.is_empty());
    }

    #[test]
    fn rejects_bad_graphs() {
        assert!(DualGraph::new(&[], &[]).is_err());
        assert!(DualGraph::new(&[("a", 1), ("a", 2)], &[]).is_err());
        assert!(DualGraph::new(&[("a", 1), ("b", 1)], &[]).is_err()); // disconnected
        assert!(DualGraph::new(&[("a", 1)], &[("a", "z")]).is_err());
    }

    #[test]
    fn chain_cycle_without_anchor_is_rejected() {
        let g = DualGraph::new(
            &[("a", 0), ("b", 0), ("c", 0)],
            &[("a", "b"), ("b", "c"), ("c", "a")],
        )
        .unwrap();
        assert!(g.maximal_chains().is_err());
    }
}

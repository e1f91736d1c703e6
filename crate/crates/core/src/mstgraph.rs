//! Mutual-reachability MSTs: a dense Prim pass over the implicit complete
//! graph, and fast per-`min_pts` extraction from the sparse CORE-SG graph.
//!
//! Equal-weight edges are ordered by `(weight, min(u, v), max(u, v))` in both
//! paths. That total order makes the MST unique, so the complete-graph and
//! CORE-SG extractions return the same tree whenever the sparse graph contains
//! it, and downstream scores do not depend on scheduling.

use std::io::Write;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::neighbors::{nearest_neighbor_lists, CoreDistanceTable, DistanceMatrix};

/// One undirected MST edge, stored with `u < v`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MstEdge {
    pub u: usize,
    pub v: usize,
    pub weight: f64,
}

impl MstEdge {
    fn new(a: usize, b: usize, weight: f64) -> Self {
        Self {
            u: a.min(b),
            v: a.max(b),
            weight,
        }
    }

    #[inline]
    fn sort_key(&self) -> (f64, usize, usize) {
        (self.weight, self.u, self.v)
    }
}

fn edge_cmp(a: &MstEdge, b: &MstEdge) -> std::cmp::Ordering {
    let (wa, ua, va) = a.sort_key();
    let (wb, ub, vb) = b.sort_key();
    wa.total_cmp(&wb).then(ua.cmp(&ub)).then(va.cmp(&vb))
}

/// A spanning tree over mutual-reachability weights at one `min_pts` value.
/// Edges are kept sorted by `(weight, u, v)` so consumers process them in a
/// canonical order.
#[derive(Debug, Clone, PartialEq)]
pub struct MstEdges {
    edges: Vec<MstEdge>,
    min_pts: usize,
}

impl MstEdges {
    pub fn edges(&self) -> &[MstEdge] {
        &self.edges
    }

    pub fn min_pts(&self) -> usize {
        self.min_pts
    }

    pub fn n(&self) -> usize {
        self.edges.len() + 1
    }

    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.weight).sum()
    }

    /// Edge weights in ascending order.
    pub fn sorted_weights(&self) -> Vec<f64> {
        self.edges.iter().map(|e| e.weight).collect()
    }

    /// Debug dump as CSV rows `u,v,w`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "u,v,w")?;
        for e in &self.edges {
            writeln!(w, "{},{},{}", e.u, e.v, e.weight)?;
        }
        Ok(())
    }
}

/// Mutual reachability: `max(core(u), core(v), d(u, v))` at the given `min_pts`.
pub fn mutual_reachability(
    dist: &DistanceMatrix,
    core: &CoreDistanceTable,
    min_pts: usize,
    u: usize,
    v: usize,
) -> Result<f64> {
    core.check_min_pts(min_pts)?;
    Ok(mrd(dist, core, min_pts, u, v))
}

#[inline]
fn mrd(dist: &DistanceMatrix, core: &CoreDistanceTable, min_pts: usize, u: usize, v: usize) -> f64 {
    dist.get(u, v)
        .max(core.core(u, min_pts))
        .max(core.core(v, min_pts))
}

/// Prim over the implicit complete mutual-reachability graph, O(n^2).
pub fn mst_complete(
    dist: &DistanceMatrix,
    core: &CoreDistanceTable,
    min_pts: usize,
) -> Result<MstEdges> {
    core.check_min_pts(min_pts)?;
    let n = dist.n();
    let mut in_tree = vec![false; n];
    let mut key = vec![f64::INFINITY; n];
    let mut parent = vec![0usize; n];
    in_tree[0] = true;
    for (v, slot) in key.iter_mut().enumerate().skip(1) {
        *slot = mrd(dist, core, min_pts, 0, v);
    }

    let mut edges = Vec::with_capacity(n - 1);
    for _ in 1..n {
        let mut best: Option<usize> = None;
        for v in 0..n {
            if in_tree[v] {
                continue;
            }
            let better = match best {
                None => true,
                Some(b) => {
                    edge_cmp(
                        &MstEdge::new(parent[v], v, key[v]),
                        &MstEdge::new(parent[b], b, key[b]),
                    ) == std::cmp::Ordering::Less
                }
            };
            if better {
                best = Some(v);
            }
        }
        let next = best.expect("graph is complete, a candidate always exists");
        in_tree[next] = true;
        edges.push(MstEdge::new(parent[next], next, key[next]));
        for v in 0..n {
            if in_tree[v] {
                continue;
            }
            let w = mrd(dist, core, min_pts, next, v);
            if edge_cmp(
                &MstEdge::new(next, v, w),
                &MstEdge::new(parent[v], v, key[v]),
            ) == std::cmp::Ordering::Less
            {
                key[v] = w;
                parent[v] = next;
            }
        }
    }
    edges.sort_unstable_by(edge_cmp);
    Ok(MstEdges { edges, min_pts })
}

/// One CORE-SG edge: raw distance only, weights are recomputed per `min_pts`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SgEdge {
    pub u: usize,
    pub v: usize,
    pub dist: f64,
}

/// The sparse union of `MST_{m_max}` and the `m_max`-nearest-neighbor graph.
/// Every `MST_{min_pts}` with `min_pts <= m_max` can be extracted from it.
#[derive(Debug, Clone, PartialEq)]
pub struct CoreSg {
    edges: Vec<SgEdge>,
    m_max: usize,
    n: usize,
}

impl CoreSg {
    pub fn edges(&self) -> &[SgEdge] {
        &self.edges
    }

    pub fn m_max(&self) -> usize {
        self.m_max
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

/// Builds the CORE-SG at `m_max`: the MST at `m_max` plus, for every point,
/// edges to its `m_max` nearest neighbors (the point itself counting as the
/// first), deduplicated.
pub fn build_core_sg(
    dist: &DistanceMatrix,
    core: &CoreDistanceTable,
    m_max: usize,
) -> Result<CoreSg> {
    if m_max != core.m_max() {
        return Err(Error::MinPtsOutOfRange {
            min_pts: m_max,
            m_max: core.m_max(),
        });
    }
    let n = dist.n();
    let mut present = vec![false; n * n];
    let mut edges: Vec<SgEdge> = Vec::new();
    let push = |a: usize, b: usize, edges: &mut Vec<SgEdge>, present: &mut Vec<bool>| {
        let (u, v) = (a.min(b), a.max(b));
        if !present[u * n + v] {
            present[u * n + v] = true;
            edges.push(SgEdge {
                u,
                v,
                dist: dist.get(u, v),
            });
        }
    };

    for e in mst_complete(dist, core, m_max)?.edges() {
        push(e.u, e.v, &mut edges, &mut present);
    }
    for (i, neighbors) in nearest_neighbor_lists(dist, m_max - 1).iter().enumerate() {
        for &j in neighbors {
            push(i, j, &mut edges, &mut present);
        }
    }
    edges.sort_unstable_by(|a, b| a.u.cmp(&b.u).then(a.v.cmp(&b.v)));
    Ok(CoreSg { edges, m_max, n })
}

/// Kruskal over the CORE-SG with weights recomputed at the requested `min_pts`.
pub fn mst_from_core_sg(sg: &CoreSg, core: &CoreDistanceTable, min_pts: usize) -> Result<MstEdges> {
    if min_pts < 2 || min_pts > sg.m_max {
        return Err(Error::MinPtsOutOfRange {
            min_pts,
            m_max: sg.m_max,
        });
    }
    let mut weighted: Vec<MstEdge> = sg
        .edges
        .iter()
        .map(|e| {
            let w = e
                .dist
                .max(core.core(e.u, min_pts))
                .max(core.core(e.v, min_pts));
            MstEdge::new(e.u, e.v, w)
        })
        .collect();
    weighted.sort_unstable_by(edge_cmp);

    let mut uf = UnionFind::new(sg.n);
    let mut edges = Vec::with_capacity(sg.n - 1);
    for e in weighted {
        if uf.union(e.u, e.v) {
            edges.push(e);
            if edges.len() == sg.n - 1 {
                break;
            }
        }
    }
    debug_assert_eq!(edges.len(), sg.n - 1, "CORE-SG must span the dataset");
    Ok(MstEdges { edges, min_pts })
}

/// MSTs for every `min_pts` in `[2, m_max]`, extracted from the CORE-SG.
/// Extractions are independent, so they run in parallel deterministically.
pub fn msts_for_all_min_pts(sg: &CoreSg, core: &CoreDistanceTable) -> Result<Vec<MstEdges>> {
    (2..=sg.m_max())
        .into_par_iter()
        .map(|min_pts| mst_from_core_sg(sg, core, min_pts))
        .collect()
}

/// Union-find that also tracks the smallest core distance per component.
#[derive(Debug, Clone)]
pub(crate) struct UnionFindMinCore {
    uf: UnionFind,
    min_core: Vec<f64>,
}

impl UnionFindMinCore {
    pub(crate) fn new(min_core: Vec<f64>) -> Self {
        Self {
            uf: UnionFind::new(min_core.len()),
            min_core,
        }
    }

    pub(crate) fn component_size(&mut self, x: usize) -> usize {
        self.uf.size_of(x)
    }

    pub(crate) fn root(&mut self, x: usize) -> usize {
        self.uf.find(x)
    }

    /// Min core distance of the component currently containing x.
    pub(crate) fn component_min_core(&mut self, x: usize) -> f64 {
        let root = self.uf.find(x);
        self.min_core[root]
    }

    /// Min core distance the merged component of a and b will have.
    pub(crate) fn merged_min_core(&mut self, a: usize, b: usize) -> f64 {
        let (ra, rb) = (self.uf.find(a), self.uf.find(b));
        self.min_core[ra].min(self.min_core[rb])
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let merged = self.merged_min_core(a, b);
        self.uf.union(a, b);
        let root = self.uf.find(a);
        self.min_core[root] = merged;
    }
}

/// Union-find with union by size and path compression.
#[derive(Debug, Clone)]
pub(crate) struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn size_of(&mut self, x: usize) -> usize {
        let root = self.find(x);
        self.size[root]
    }

    /// Returns false when both points were already connected.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::Dataset;
    use crate::neighbors::{core_distance_table, pairwise_distances, Metric};
    use ndarray::Array2;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn one_d(values: &[f64]) -> (DistanceMatrix, Dataset) {
        let n = values.len();
        let data = Dataset::new(Array2::from_shape_vec((n, 1), values.to_vec()).unwrap()).unwrap();
        (pairwise_distances(&data, Metric::Euclidean), data)
    }

    #[test]
    fn mutual_reachability_hand_cases() {
        let (dist, _) = one_d(&[0.0, 1.0, 3.0]);
        let core = core_distance_table(&dist, 2).unwrap();
        assert_eq!(mutual_reachability(&dist, &core, 2, 0, 2).unwrap(), 3.0);
        assert_eq!(mutual_reachability(&dist, &core, 2, 0, 1).unwrap(), 1.0);
        assert_eq!(
            mutual_reachability(&dist, &core, 2, 2, 2).unwrap(),
            core.core(2, 2)
        );
        assert!(mutual_reachability(&dist, &core, 3, 0, 1).is_err());
    }

    #[test]
    fn complete_mst_on_four_collinear_points() {
        let (dist, _) = one_d(&[0.0, 1.0, 2.0, 10.0]);
        let core = core_distance_table(&dist, 2).unwrap();
        let mst = mst_complete(&dist, &core, 2).unwrap();
        assert_eq!(mst.sorted_weights(), vec![1.0, 1.0, 8.0]);
    }

    #[test]
    fn two_points_force_a_single_edge() {
        let (dist, _) = one_d(&[0.0, 7.0]);
        let core = core_distance_table(&dist, 2).unwrap();
        let mst = mst_complete(&dist, &core, 2).unwrap();
        assert_eq!(mst.edges().len(), 1);
        assert_eq!(mst.edges()[0].weight, 7.0);
    }

    #[test]
    fn duplicates_join_by_zero_weight_edge() {
        let (dist, _) = one_d(&[5.0, 5.0, 9.0]);
        let core = core_distance_table(&dist, 2).unwrap();
        let mst = mst_complete(&dist, &core, 2).unwrap();
        assert_eq!(mst.edges()[0].weight, 0.0);
        assert_eq!((mst.edges()[0].u, mst.edges()[0].v), (0, 1));
    }

    #[test]
    fn core_sg_saturates_to_the_triangle() {
        let (dist, _) = one_d(&[0.0, 1.0, 5.0]);
        let core = core_distance_table(&dist, 3).unwrap();
        let sg = build_core_sg(&dist, &core, 3).unwrap();
        assert_eq!(sg.edges().len(), 3);
    }

    #[test]
    fn core_sg_on_collinear_points_contains_mst_and_nearest_neighbors() {
        let (dist, _) = one_d(&[0.0, 1.0, 2.0, 10.0]);
        let core = core_distance_table(&dist, 2).unwrap();
        let sg = build_core_sg(&dist, &core, 2).unwrap();
        assert!(sg.edges().len() <= 6);
        let mst = mst_complete(&dist, &core, 2).unwrap();
        for e in mst.edges() {
            assert!(
                sg.edges().iter().any(|s| (s.u, s.v) == (e.u, e.v)),
                "MST edge ({}, {}) missing from CORE-SG",
                e.u,
                e.v
            );
        }
        // Each point's nearest neighbor edge is present.
        for (i, nn) in [(0usize, 1usize), (1, 0), (2, 1), (3, 2)] {
            let (u, v) = (i.min(nn), i.max(nn));
            assert!(sg.edges().iter().any(|s| (s.u, s.v) == (u, v)));
        }
    }

    #[test]
    fn extraction_above_m_max_is_rejected() {
        let (dist, _) = one_d(&[0.0, 1.0, 2.0, 10.0]);
        let core = core_distance_table(&dist, 3).unwrap();
        let sg = build_core_sg(&dist, &core, 3).unwrap();
        assert!(mst_from_core_sg(&sg, &core, 4).is_err());
    }

    fn random_dataset(rng: &mut ChaCha8Rng, n: usize, d: usize) -> Dataset {
        let values: Vec<f64> = (0..n * d).map(|_| rng.random_range(-50.0..50.0)).collect();
        Dataset::new(Array2::from_shape_vec((n, d), values).unwrap()).unwrap()
    }

    #[test]
    fn sparse_extraction_matches_the_complete_graph() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..12 {
            let n = rng.random_range(10..60);
            let d = rng.random_range(1..4);
            let data = random_dataset(&mut rng, n, d);
            let dist = pairwise_distances(&data, Metric::Euclidean);
            let m_max = n.min(8);
            let core = core_distance_table(&dist, m_max).unwrap();
            let sg = build_core_sg(&dist, &core, m_max).unwrap();
            let all = msts_for_all_min_pts(&sg, &core).unwrap();
            assert_eq!(all.len(), m_max - 1);
            for (i, sparse) in all.iter().enumerate() {
                let min_pts = i + 2;
                assert_eq!(sparse.min_pts(), min_pts);
                let naive = mst_complete(&dist, &core, min_pts).unwrap();
                assert!(
                    (naive.total_weight() - sparse.total_weight()).abs() <= 1e-9,
                    "total weight differs at min_pts={min_pts}"
                );
                let (a, b) = (naive.sorted_weights(), sparse.sorted_weights());
                for (x, y) in a.iter().zip(b.iter()) {
                    assert!((x - y).abs() <= 1e-9);
                }
            }
        }
    }

    #[test]
    fn mst_weights_dominate_endpoint_core_distances() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        for _ in 0..8 {
            let n = rng.random_range(8..40);
            let data = random_dataset(&mut rng, n, 2);
            let dist = pairwise_distances(&data, Metric::Euclidean);
            let m_max = n.min(6);
            let core = core_distance_table(&dist, m_max).unwrap();
            for min_pts in 2..=m_max {
                let mst = mst_complete(&dist, &core, min_pts).unwrap();
                for e in mst.edges() {
                    assert!(e.weight >= core.core(e.u, min_pts));
                    assert!(e.weight >= core.core(e.v, min_pts));
                }
            }
        }
    }

    #[test]
    fn csv_dump_lists_edges() {
        let (dist, _) = one_d(&[0.0, 1.0, 2.0, 10.0]);
        let core = core_distance_table(&dist, 2).unwrap();
        let mst = mst_complete(&dist, &core, 2).unwrap();
        let mut out = Vec::new();
        mst.write_csv(&mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert!(text.starts_with("u,v,w\n"));
        assert_eq!(text.lines().count(), 4);
        assert!(text.contains("2,3,8"));
    }
}

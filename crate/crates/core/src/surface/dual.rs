use std::collections::VecDeque;

use super::{ArcId, HalfEdge, TriangleId, Triangulation};

/// Dual graph of a triangulation with a breadth-first spanning tree.
///
/// Nodes are triangles and edges are interior arcs. The tree is grown from
/// triangle 0, visiting the arcs of each triangle in ascending id order.
/// Arcs outside the tree (the cotree) index a free basis of π₁.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualGraph {
    /// Triangles in discovery order, starting at the root.
    pub order: Vec<TriangleId>,
    /// For each triangle but the root, the half-edge of its parent that
    /// crosses into it.
    pub parent: Vec<Option<HalfEdge>>,
    pub in_tree: Vec<bool>,
    pub tree: Vec<ArcId>,
    pub cotree: Vec<ArcId>,
}

impl DualGraph {
    pub fn node_count(&self) -> usize {
        self.order.len()
    }

    pub fn edge_count(&self) -> usize {
        self.in_tree.len()
    }

    pub fn is_tree_arc(&self, a: ArcId) -> bool {
        self.in_tree[a]
    }
}

pub fn dual_graph(tri: &Triangulation) -> DualGraph {
    dual_graph_rooted(tri, 0)
}

/// As [`dual_graph`], growing the tree from `root`.
pub fn dual_graph_rooted(tri: &Triangulation, root: TriangleId) -> DualGraph {
    let f = tri.triangle_count();
    let mut parent = vec![None; f];
    let mut seen = vec![false; f];
    let mut in_tree = vec![false; tri.interior_arc_count()];
    let mut order = Vec::with_capacity(f);
    let mut queue = VecDeque::from([root]);
    seen[root] = true;
    while let Some(t) = queue.pop_front() {
        order.push(t);
        let mut crossings: Vec<(ArcId, HalfEdge)> = tri
            .triangle(t)
            .iter()
            .filter_map(|&h| tri.arc_of(h).map(|a| (a, h)))
            .collect();
        crossings.sort_unstable();
        for (a, h) in crossings {
            let u = tri.neighbor(h).expect("interior half-edge");
            if !seen[u] {
                seen[u] = true;
                parent[u] = Some(h);
                in_tree[a] = true;
                queue.push_back(u);
            }
        }
    }
    let tree = (0..in_tree.len()).filter(|&a| in_tree[a]).collect();
    let cotree = (0..in_tree.len()).filter(|&a| !in_tree[a]).collect();
    DualGraph {
        order,
        parent,
        in_tree,
        tree,
        cotree,
    }
}

use std::collections::VecDeque;

use crate::geometry::{Point2, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GraphNode {
    /// Copy `P_i`, 0-based.
    Polygon(usize),
    /// Index into [`BipartiteIntersectionGraph::points`].
    Point(usize),
}

/// Why the graph is not a tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GraphWitness {
    /// Closed walk `n_0, n_1, …, n_{k-1}` with an edge back to `n_0`.
    Cycle(Vec<GraphNode>),
    /// Connected components, each sorted, ordered by smallest node.
    Disconnected { components: Vec<Vec<GraphNode>> },
}

/// Bipartite graph with parts {copies} and {connection points}; an edge
/// `(i, k)` means `points[k] ∈ P_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct BipartiteIntersectionGraph {
    polygons: usize,
    points: Vec<Point2<Rational>>,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
}

impl BipartiteIntersectionGraph {
    pub fn new(
        polygons: usize,
        points: Vec<Point2<Rational>>,
        mut edges: Vec<(usize, usize)>,
    ) -> Self {
        edges.sort_unstable();
        edges.dedup();
        let mut adjacency = vec![Vec::new(); polygons + points.len()];
        for &(i, k) in &edges {
            adjacency[i].push(polygons + k);
            adjacency[polygons + k].push(i);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Self {
            polygons,
            points,
            edges,
            adjacency,
        }
    }

    pub fn polygon_count(&self) -> usize {
        self.polygons
    }

    pub fn points(&self) -> &[Point2<Rational>] {
        &self.points
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn degree(&self, node: GraphNode) -> usize {
        self.adjacency[self.id(node)].len()
    }

    fn id(&self, node: GraphNode) -> usize {
        match node {
            GraphNode::Polygon(i) => i,
            GraphNode::Point(k) => self.polygons + k,
        }
    }

    fn node(&self, id: usize) -> GraphNode {
        if id < self.polygons {
            GraphNode::Polygon(id)
        } else {
            GraphNode::Point(id - self.polygons)
        }
    }

    /// BFS parents from `root`; `usize::MAX` marks unreached nodes.
    fn bfs(&self, root: usize) -> Vec<usize> {
        let mut parent = vec![usize::MAX; self.node_count()];
        parent[root] = root;
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for &v in &self.adjacency[u] {
                if parent[v] == usize::MAX {
                    parent[v] = u;
                    queue.push_back(v);
                }
            }
        }
        parent
    }

    /// `None` when the graph is a tree, otherwise a cycle or a
    /// disconnection witness.
    pub fn tree_witness(&self) -> Option<GraphWitness> {
        let n = self.node_count();
        if n == 0 {
            return None;
        }
        let reached = self.bfs(0);
        if reached.contains(&usize::MAX) {
            return Some(GraphWitness::Disconnected {
                components: self.components(),
            });
        }
        if self.edges.len() + 1 == n {
            return None;
        }
        self.find_cycle().map(GraphWitness::Cycle)
    }

    fn components(&self) -> Vec<Vec<GraphNode>> {
        let mut seen = vec![false; self.node_count()];
        let mut out = Vec::new();
        for start in 0..self.node_count() {
            if seen[start] {
                continue;
            }
            let parent = self.bfs(start);
            let mut comp: Vec<GraphNode> = (0..self.node_count())
                .filter(|&v| parent[v] != usize::MAX)
                .inspect(|&v| seen[v] = true)
                .map(|v| self.node(v))
                .collect();
            comp.sort();
            out.push(comp);
        }
        out
    }

    /// First cycle met by an iterative DFS in index order.
    fn find_cycle(&self) -> Option<Vec<GraphNode>> {
        let n = self.node_count();
        let mut parent = vec![usize::MAX; n];
        let mut depth = vec![0usize; n];
        for root in 0..n {
            if parent[root] != usize::MAX {
                continue;
            }
            parent[root] = root;
            let mut stack = vec![(root, 0usize)];
            while let Some(&mut (u, ref mut next)) = stack.last_mut() {
                if *next == self.adjacency[u].len() {
                    stack.pop();
                    continue;
                }
                let v = self.adjacency[u][*next];
                *next += 1;
                if parent[v] == usize::MAX {
                    parent[v] = u;
                    depth[v] = depth[u] + 1;
                    stack.push((v, 0));
                } else if v != parent[u] && depth[v] < depth[u] {
                    // back edge u → v closes the tree path v … u
                    let mut cycle = vec![u];
                    let mut w = u;
                    while w != v {
                        w = parent[w];
                        cycle.push(w);
                    }
                    cycle.reverse();
                    return Some(cycle.into_iter().map(|id| self.node(id)).collect());
                }
            }
        }
        None
    }

    /// The alternating polygon/point path from copy `i` to copy `j`.
    /// Unique when the graph is a tree; empty if `j` is unreachable.
    pub fn copy_chain(&self, i: usize, j: usize) -> Vec<GraphNode> {
        let parent = self.bfs(j);
        if parent[i] == usize::MAX {
            return Vec::new();
        }
        let mut path = vec![i];
        let mut u = i;
        while u != j {
            u = parent[u];
            path.push(u);
        }
        path.into_iter().map(|id| self.node(id)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(
        polygons: usize,
        points: usize,
        edges: &[(usize, usize)],
    ) -> BipartiteIntersectionGraph {
        let pts = (0..points)
            .map(|k| {
                Point2::new(
                    Rational::from_integer(k.into()),
                    Rational::from_integer(0.into()),
                )
            })
            .collect();
        BipartiteIntersectionGraph::new(polygons, pts, edges.to_vec())
    }

    #[test]
    fn path_is_a_tree() {
        let g = graph(3, 2, &[(0, 0), (1, 0), (1, 1), (2, 1)]);
        assert_eq!(g.tree_witness(), None);
        use GraphNode::*;
        assert_eq!(
            g.copy_chain(0, 2),
            vec![Polygon(0), Point(0), Polygon(1), Point(1), Polygon(2)]
        );
        assert_eq!(
            g.copy_chain(2, 0),
            vec![Polygon(2), Point(1), Polygon(1), Point(0), Polygon(0)]
        );
        assert_eq!(g.copy_chain(1, 1), vec![Polygon(1)]);
    }

    #[test]
    fn star_point_of_degree_three() {
        let g = graph(3, 1, &[(0, 0), (1, 0), (2, 0)]);
        assert_eq!(g.tree_witness(), None);
        assert_eq!(g.degree(GraphNode::Point(0)), 3);
    }

    #[test]
    fn triangle_of_copies_has_a_six_cycle() {
        let g = graph(3, 3, &[(0, 0), (1, 0), (1, 1), (2, 1), (2, 2), (0, 2)]);
        match g.tree_witness() {
            Some(GraphWitness::Cycle(c)) => {
                assert_eq!(c.len(), 6);
                for k in 0..6 {
                    let (a, b) = (c[k], c[(k + 1) % 6]);
                    let e = match (a, b) {
                        (GraphNode::Polygon(i), GraphNode::Point(p))
                        | (GraphNode::Point(p), GraphNode::Polygon(i)) => (i, p),
                        _ => panic!("not alternating"),
                    };
                    assert!(g.edges().contains(&e));
                }
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn isolated_copy_is_reported() {
        let g = graph(3, 1, &[(0, 0), (1, 0)]);
        match g.tree_witness() {
            Some(GraphWitness::Disconnected { components }) => {
                assert_eq!(components.len(), 2);
                assert_eq!(components[1], vec![GraphNode::Polygon(2)]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn duplicate_edges_collapse() {
        let g = graph(2, 1, &[(0, 0), (1, 0), (0, 0)]);
        assert_eq!(g.edges().len(), 2);
    }
}

//! Representing trees of finite ultrametric spaces.
//!
//! The tree of a space `X` has root `X` labeled `diam X`; the children of a
//! vertex `B` are the parts of the diametrical partition of `B`, recursively,
//! down to singleton leaves labeled 0. Its vertices are exactly the balls of
//! `X`.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::dist::Dist;
use crate::error::{Error, Result};
use crate::rooted::{RootedTree, Vertex};
use crate::space::{diam_rank, Ball, Rank, Space};

/// Disjoint nonempty parts covering a subset, ordered by smallest member.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Partition {
    pub parts: Vec<Vec<usize>>,
}

impl Partition {
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }
}

/// Splits `subset` into the parts of its diametrical graph: the connected
/// components of the graph joining points closer than `diam(subset)`.
pub fn diametrical_partition(space: &Space, subset: &[usize]) -> Result<Partition> {
    let mut subset = subset.to_vec();
    subset.sort_unstable();
    subset.dedup();
    space.check_indices(&subset)?;
    if subset.len() < 2 {
        return Err(Error::PartitionUndefined);
    }
    space.require_ultrametric()?;
    let top = diam_rank(space, &subset);
    Ok(Partition { parts: components_below(space, &subset, top) })
}

/// Components of the graph on sorted `subset` with edges `d < value(top)`.
fn components_below(space: &Space, subset: &[usize], top: Rank) -> Vec<Vec<usize>> {
    let m = subset.len();
    let mut part_of = vec![usize::MAX; m];
    let mut parts = Vec::new();
    for start in 0..m {
        if part_of[start] != usize::MAX {
            continue;
        }
        let id = parts.len();
        part_of[start] = id;
        let mut members = vec![start];
        let mut frontier = vec![start];
        while let Some(a) = frontier.pop() {
            for b in 0..m {
                if part_of[b] == usize::MAX && space.rank(subset[a], subset[b]) < top {
                    part_of[b] = id;
                    members.push(b);
                    frontier.push(b);
                }
            }
        }
        let mut points: Vec<usize> = members.into_iter().map(|k| subset[k]).collect();
        points.sort_unstable();
        parts.push(points);
    }
    parts
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepNode {
    pub ball: Vec<usize>,
    pub label: Dist,
    pub children: Vec<usize>,
}

/// The representing tree of an ultrametric space.
///
/// Node `i < n` is the leaf `{i}`; internal nodes follow. Children are
/// ordered by their smallest point index.
#[derive(Debug, Clone)]
pub struct RepTree {
    points: Vec<String>,
    nodes: Vec<RepNode>,
    root: usize,
    parent: Vec<Option<usize>>,
    depth: Vec<usize>,
    by_ball: HashMap<Vec<usize>, usize>,
}

impl PartialEq for RepTree {
    fn eq(&self, other: &Self) -> bool {
        self.points == other.points && self.nodes == other.nodes && self.root == other.root
    }
}

impl RepTree {
    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn nodes(&self) -> &[RepNode] {
        &self.nodes
    }

    pub fn node(&self, id: usize) -> &RepNode {
        &self.nodes[id]
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn parent(&self, id: usize) -> Option<usize> {
        self.parent[id]
    }

    pub fn is_leaf(&self, id: usize) -> bool {
        self.nodes[id].children.is_empty()
    }

    /// Node whose ball is exactly `members` (sorted).
    pub fn node_of(&self, members: &[usize]) -> Option<usize> {
        self.by_ball.get(members).copied()
    }

    /// All vertex balls, in node order.
    pub fn balls(&self) -> Vec<Ball> {
        self.nodes.iter().map(|n| Ball::from_sorted(n.ball.clone(), n.label.clone())).collect()
    }

    pub fn lca(&self, mut u: usize, mut v: usize) -> usize {
        while self.depth[u] > self.depth[v] {
            u = self.parent[u].expect("deeper node has a parent");
        }
        while self.depth[v] > self.depth[u] {
            v = self.parent[v].expect("deeper node has a parent");
        }
        while u != v {
            u = self.parent[u].expect("non-root");
            v = self.parent[v].expect("non-root");
        }
        u
    }

    /// Largest label on the path between two nodes.
    pub fn path_max_label(&self, u: usize, v: usize) -> &Dist {
        let top = self.lca(u, v);
        let mut best = &self.nodes[top].label;
        for start in [u, v] {
            let mut w = start;
            while w != top {
                best = best.max(&self.nodes[w].label);
                w = self.parent[w].expect("below the common ancestor");
            }
        }
        best
    }

    /// Labeled rooted tree with the same vertex ids; leaves carry point names.
    pub fn to_rooted(&self) -> RootedTree {
        let vertices = self
            .nodes
            .iter()
            .enumerate()
            .map(|(id, node)| Vertex {
                label: Some(node.label.clone()),
                name: (id < self.points.len()).then(|| self.points[id].clone()),
                children: node.children.clone(),
            })
            .collect();
        RootedTree::new(vertices, self.root).expect("representing tree is a tree")
    }
}

/// Builds the representing tree by recursive diametrical partition.
pub fn build_tree(space: &Space) -> Result<RepTree> {
    space.require_ultrametric()?;
    let n = space.len();
    let mut nodes: Vec<RepNode> =
        (0..n).map(|i| RepNode { ball: vec![i], label: Dist::zero(), children: vec![] }).collect();
    let all: Vec<usize> = (0..n).collect();
    let root = grow(space, &all, &mut nodes);

    let mut parent = vec![None; nodes.len()];
    for (u, node) in nodes.iter().enumerate() {
        for &c in &node.children {
            parent[c] = Some(u);
        }
    }
    let mut depth = vec![0; nodes.len()];
    let mut stack = vec![root];
    while let Some(u) = stack.pop() {
        for &c in &nodes[u].children {
            depth[c] = depth[u] + 1;
            stack.push(c);
        }
    }
    let by_ball = nodes.iter().enumerate().map(|(id, node)| (node.ball.clone(), id)).collect();
    Ok(RepTree { points: space.points().to_vec(), nodes, root, parent, depth, by_ball })
}

fn grow(space: &Space, subset: &[usize], nodes: &mut Vec<RepNode>) -> usize {
    if subset.len() == 1 {
        return subset[0];
    }
    let top = diam_rank(space, subset);
    let children = components_below(space, subset, top).iter().map(|part| grow(space, part, nodes)).collect();
    nodes.push(RepNode { ball: subset.to_vec(), label: space.value(top).clone(), children });
    nodes.len() - 1
}

/// Distance recovered from the tree: the label of the deepest common
/// ancestor of the two leaves (the largest label on the path joining them).
pub fn tree_distance(tree: &RepTree, x: usize, y: usize) -> Result<Dist> {
    let n = tree.points.len();
    for p in [x, y] {
        if p >= n {
            return Err(Error::IndexOutOfRange(p));
        }
    }
    if x == y {
        return Ok(Dist::zero());
    }
    Ok(tree.nodes[tree.lca(x, y)].label.clone())
}

/// The ultrametric space on the leaves of a labeled tree, with
/// `d(x, y)` the smallest label among common ancestors of `x` and `y`.
///
/// Points are the leaves in increasing vertex-id order. Unnamed leaves get
/// the name `x<k>` where `k` is the leaf's position.
pub fn space_from_tree(tree: &RootedTree) -> Result<Space> {
    let report = check_tree(tree, 0);
    if let Some(v) = report.violations.first() {
        return Err(Error::NotRepresentable { vertex: v.vertex, reason: v.kind.to_string() });
    }
    let leaves = tree.leaves();
    let mut position = vec![usize::MAX; tree.len()];
    for (k, &leaf) in leaves.iter().enumerate() {
        position[leaf] = k;
    }
    let names: Vec<String> = leaves
        .iter()
        .enumerate()
        .map(|(k, &leaf)| tree.vertex(leaf).name.clone().unwrap_or_else(|| format!("x{k}")))
        .collect();

    let mut values: Vec<Dist> = tree.vertices().iter().filter_map(|v| v.label.clone()).collect();
    values.push(Dist::zero());
    values.sort();
    values.dedup();
    let rank_of = |d: &Dist| values.binary_search(d).expect("label is in the table") as Rank;

    let n = leaves.len();
    let mut ranks = vec![0 as Rank; n * n];
    let below = tree.leaf_sets();
    for u in tree.internal() {
        let r = rank_of(tree.label(u).expect("checked labels"));
        let kids = tree.children(u);
        for (a, &ca) in kids.iter().enumerate() {
            for &cb in &kids[a + 1..] {
                for &x in &below[ca] {
                    for &y in &below[cb] {
                        let (i, j) = (position[x], position[y]);
                        ranks[i * n + j] = r;
                        ranks[j * n + i] = r;
                    }
                }
            }
        }
    }
    Space::from_ranks(names, &values, ranks)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ViolationKind {
    /// Out-degree in `1..=n+1`.
    OutDegree {
        degree: usize,
    },
    MissingLabel,
    LeafLabelNonZero,
    InternalLabelZero,
    LabelNotDecreasing {
        child: usize,
    },
    TooFewLeafChildren {
        leaf_children: usize,
    },
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ViolationKind::OutDegree { degree } => write!(f, "forbidden out-degree {degree}"),
            ViolationKind::MissingLabel => f.write_str("missing label"),
            ViolationKind::LeafLabelNonZero => f.write_str("leaf has a nonzero label"),
            ViolationKind::InternalLabelZero => f.write_str("internal vertex has label 0"),
            ViolationKind::LabelNotDecreasing { child } => write!(f, "label of child {child} is not smaller"),
            ViolationKind::TooFewLeafChildren { leaf_children } => {
                write!(f, "only {leaf_children} leaf children")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub vertex: usize,
    #[serde(flatten)]
    pub kind: ViolationKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TreeReport {
    pub n: usize,
    pub passed: bool,
    pub violations: Vec<Violation>,
}

/// Checks the realizability conditions for level `n`:
/// out-degrees avoid `1..=n+1`, labels strictly decrease toward the leaves
/// with label 0 exactly at leaves, and every internal vertex has at least
/// `n` leaf children. `n = 0` is the condition for being a representing tree.
pub fn check_tree(tree: &RootedTree, n: usize) -> TreeReport {
    let mut violations = Vec::new();
    let mut push = |vertex, kind| violations.push(Violation { vertex, kind });
    for u in 0..tree.len() {
        let degree = tree.out_degree(u);
        if (1..=n + 1).contains(&degree) {
            push(u, ViolationKind::OutDegree { degree });
        }
        match tree.label(u) {
            None => push(u, ViolationKind::MissingLabel),
            Some(label) => {
                if degree == 0 && !label.is_zero() {
                    push(u, ViolationKind::LeafLabelNonZero);
                }
                if degree > 0 && label.is_zero() {
                    push(u, ViolationKind::InternalLabelZero);
                }
                for &c in tree.children(u) {
                    if tree.label(c).is_some_and(|lc| lc >= label) {
                        push(u, ViolationKind::LabelNotDecreasing { child: c });
                    }
                }
            }
        }
        if degree > 0 {
            let leaf_children = tree.children(u).iter().filter(|&&c| tree.is_leaf(c)).count();
            if leaf_children < n {
                push(u, ViolationKind::TooFewLeafChildren { leaf_children });
            }
        }
    }
    TreeReport { n, passed: violations.is_empty(), violations }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(s: &str) -> Dist {
        s.parse().unwrap()
    }

    fn space(rows: &[&[&str]]) -> Space {
        let names = (1..=rows.len()).map(|i| format!("x{i}")).collect();
        Space::new(names, rows.iter().map(|r| r.iter().map(|v| d(v)).collect()).collect()).unwrap()
    }

    fn square() -> Space {
        space(&[&["0", "2", "1", "2"], &["2", "0", "2", "1"], &["1", "2", "0", "2"], &["2", "1", "2", "0"]])
    }

    fn equilateral(k: usize, c: &str) -> Space {
        let rows: Vec<Vec<Dist>> =
            (0..k).map(|i| (0..k).map(|j| if i == j { Dist::zero() } else { d(c) }).collect()).collect();
        Space::new((0..k).map(|i| format!("e{i}")).collect(), rows).unwrap()
    }

    fn labeled(label: &str, kids: Vec<RootedTree>) -> RootedTree {
        RootedTree::join(Some(d(label)), kids)
    }

    fn leaf() -> RootedTree {
        RootedTree::single(Some(Dist::zero()))
    }

    #[test]
    fn partitions() {
        let two = space(&[&["0", "3"], &["3", "0"]]);
        assert_eq!(diametrical_partition(&two, &[0, 1]).unwrap().parts, vec![vec![0], vec![1]]);
        let sq = square();
        assert_eq!(diametrical_partition(&sq, &[0, 1, 2, 3]).unwrap().parts, vec![vec![0, 2], vec![1, 3]]);
        assert_eq!(diametrical_partition(&sq, &[3, 1]).unwrap().parts, vec![vec![1], vec![3]]);
        let eq = equilateral(3, "1");
        assert_eq!(diametrical_partition(&eq, &[0, 1, 2]).unwrap().len(), 3);
        assert_eq!(diametrical_partition(&sq, &[2]), Err(Error::PartitionUndefined));
        assert_eq!(diametrical_partition(&sq, &[2, 2]), Err(Error::PartitionUndefined));
    }

    #[test]
    fn one_point_tree() {
        let t = build_tree(&equilateral(1, "1")).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t.root(), 0);
        assert!(t.node(0).label.is_zero());
    }

    #[test]
    fn square_tree() {
        let t = build_tree(&square()).unwrap();
        assert_eq!(t.len(), 7);
        let root = t.node(t.root());
        assert_eq!(root.label, d("2"));
        assert_eq!(root.ball, vec![0, 1, 2, 3]);
        let kids: Vec<_> = root.children.iter().map(|&c| t.node(c)).collect();
        assert_eq!(kids[0].ball, vec![0, 2]);
        assert_eq!(kids[1].ball, vec![1, 3]);
        assert!(kids.iter().all(|k| k.label == d("1") && k.children.len() == 2));
        assert_eq!((0..4).filter(|&i| t.is_leaf(i)).count(), 4);
        assert_eq!(tree_distance(&t, 0, 0).unwrap(), Dist::zero());
        assert_eq!(tree_distance(&t, 0, 2).unwrap(), d("1"));
        assert_eq!(tree_distance(&t, 0, 1).unwrap(), d("2"));
        assert_eq!(tree_distance(&t, 0, 7), Err(Error::IndexOutOfRange(7)));
    }

    #[test]
    fn equilateral_tree_is_a_star() {
        let t = build_tree(&equilateral(3, "1")).unwrap();
        assert_eq!(t.len(), 4);
        assert_eq!(t.node(t.root()).children, vec![0, 1, 2]);
        assert_eq!(t.node(t.root()).label, d("1"));
    }

    #[test]
    fn build_rejects_non_ultrametric() {
        let s = space(&[&["0", "1", "2"], &["1", "0", "1"], &["2", "1", "0"]]);
        assert!(matches!(build_tree(&s), Err(Error::NotUltrametric { .. })));
    }

    #[test]
    fn space_from_tree_examples() {
        let one = space_from_tree(&leaf()).unwrap();
        assert_eq!(one.len(), 1);
        let star = labeled("1", vec![leaf(), leaf(), leaf()]);
        let s = space_from_tree(&star).unwrap();
        assert_eq!(s, equilateral(3, "1").with_names(vec!["x0".into(), "x1".into(), "x2".into()]).unwrap());
        let sq = square();
        assert_eq!(space_from_tree(&build_tree(&sq).unwrap().to_rooted()).unwrap(), sq);
    }

    #[test]
    fn space_from_tree_rejects() {
        let bad = RootedTree::single(Some(d("1")));
        assert!(matches!(space_from_tree(&bad), Err(Error::NotRepresentable { vertex: 0, .. })));
        let chain = labeled("2", vec![labeled("1", vec![leaf(), leaf()])]);
        assert!(matches!(space_from_tree(&chain), Err(Error::NotRepresentable { .. })));
        let flat = labeled("1", vec![labeled("1", vec![leaf(), leaf()]), leaf()]);
        assert!(matches!(space_from_tree(&flat), Err(Error::NotRepresentable { vertex: 4, .. })));
    }

    #[test]
    fn check_tree_levels() {
        let tx = build_tree(&square()).unwrap().to_rooted();
        assert!(check_tree(&tx, 0).passed);
        let r = check_tree(&tx, 1);
        assert!(!r.passed);
        assert!(r.violations.iter().any(|v| v.kind == ViolationKind::OutDegree { degree: 2 }));
        assert!(r.violations.iter().any(|v| matches!(v.kind, ViolationKind::TooFewLeafChildren { leaf_children: 0 })));
        assert!(check_tree(&leaf(), 0).passed);
        assert!(check_tree(&leaf(), 5).passed);
        let unlabeled = tx.without_labels();
        assert!(check_tree(&unlabeled, 0).violations.iter().all(|v| v.kind == ViolationKind::MissingLabel));
    }
}

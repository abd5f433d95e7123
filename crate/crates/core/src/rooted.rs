//! Generic finite rooted trees with optional labels and optional leaf names.

use crate::dist::Dist;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vertex {
    pub label: Option<Dist>,
    /// Point identifier; meaningful for leaves only.
    pub name: Option<String>,
    pub children: Vec<usize>,
}

impl Vertex {
    pub fn new(label: Option<Dist>, children: Vec<usize>) -> Self {
        Vertex { label, name: None, children }
    }
}

/// A rooted tree over vertex ids `0..len`. Validated on construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedTree {
    vertices: Vec<Vertex>,
    root: usize,
    parent: Vec<Option<usize>>,
}

impl RootedTree {
    pub fn new(vertices: Vec<Vertex>, root: usize) -> Result<RootedTree> {
        let n = vertices.len();
        if root >= n {
            return Err(Error::Structure(format!("root {root} is not a vertex")));
        }
        let mut parent = vec![None; n];
        for (u, v) in vertices.iter().enumerate() {
            for &c in &v.children {
                if c >= n {
                    return Err(Error::Structure(format!("vertex {u} has unknown child {c}")));
                }
                if c == root || parent[c].is_some() {
                    return Err(Error::Structure(format!("vertex {c} has more than one parent")));
                }
                parent[c] = Some(u);
            }
        }
        let mut seen = vec![false; n];
        let mut stack = vec![root];
        let mut reached = 0;
        while let Some(u) = stack.pop() {
            if std::mem::replace(&mut seen[u], true) {
                return Err(Error::Structure("cycle in tree".into()));
            }
            reached += 1;
            stack.extend(&vertices[u].children);
        }
        if reached != n {
            return Err(Error::Structure("tree is not connected".into()));
        }
        Ok(RootedTree { vertices, root, parent })
    }

    pub fn single(label: Option<Dist>) -> RootedTree {
        RootedTree { vertices: vec![Vertex::new(label, vec![])], root: 0, parent: vec![None] }
    }

    /// New root with the given subtrees as children, in order. Subtree
    /// vertices keep their relative order; the new root gets the last id.
    pub fn join(label: Option<Dist>, subtrees: Vec<RootedTree>) -> RootedTree {
        let mut vertices = Vec::new();
        let mut roots = Vec::with_capacity(subtrees.len());
        for sub in subtrees {
            let offset = vertices.len();
            roots.push(sub.root + offset);
            vertices.extend(sub.vertices.into_iter().map(|mut v| {
                v.children.iter_mut().for_each(|c| *c += offset);
                v
            }));
        }
        let root = vertices.len();
        vertices.push(Vertex::new(label, roots));
        RootedTree::new(vertices, root).expect("joining trees yields a tree")
    }

    pub fn with_name(mut self, name: impl Into<String>) -> RootedTree {
        let root = self.root;
        self.vertices[root].name = Some(name.into());
        self
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn vertex(&self, id: usize) -> &Vertex {
        &self.vertices[id]
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn parent(&self, id: usize) -> Option<usize> {
        self.parent[id]
    }

    pub fn children(&self, id: usize) -> &[usize] {
        &self.vertices[id].children
    }

    pub fn out_degree(&self, id: usize) -> usize {
        self.vertices[id].children.len()
    }

    pub fn is_leaf(&self, id: usize) -> bool {
        self.vertices[id].children.is_empty()
    }

    pub fn label(&self, id: usize) -> Option<&Dist> {
        self.vertices[id].label.as_ref()
    }

    /// Leaf ids in increasing order.
    pub fn leaves(&self) -> Vec<usize> {
        (0..self.len()).filter(|&v| self.is_leaf(v)).collect()
    }

    pub fn internal(&self) -> Vec<usize> {
        (0..self.len()).filter(|&v| !self.is_leaf(v)).collect()
    }

    /// Children before parents.
    pub fn post_order(&self) -> Vec<usize> {
        let mut order = Vec::with_capacity(self.len());
        let mut stack = vec![(self.root, false)];
        while let Some((u, expanded)) = stack.pop() {
            if expanded {
                order.push(u);
            } else {
                stack.push((u, true));
                stack.extend(self.vertices[u].children.iter().rev().map(|&c| (c, false)));
            }
        }
        order
    }

    pub fn depth(&self, mut id: usize) -> usize {
        let mut depth = 0;
        while let Some(p) = self.parent[id] {
            id = p;
            depth += 1;
        }
        depth
    }

    /// For every vertex, the sorted leaf ids below it (a leaf maps to itself).
    pub fn leaf_sets(&self) -> Vec<Vec<usize>> {
        let mut sets: Vec<Vec<usize>> = vec![Vec::new(); self.len()];
        for u in self.post_order() {
            if self.is_leaf(u) {
                sets[u] = vec![u];
            } else {
                let mut all: Vec<usize> =
                    self.vertices[u].children.iter().flat_map(|&c| sets[c].iter().copied()).collect();
                all.sort_unstable();
                sets[u] = all;
            }
        }
        sets
    }

    /// Same shape, all labels removed.
    pub fn without_labels(&self) -> RootedTree {
        let mut out = self.clone();
        out.vertices.iter_mut().for_each(|v| v.label = None);
        out
    }
}

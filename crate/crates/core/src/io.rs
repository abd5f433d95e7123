//! JSON documents and DOT export.
//!
//! Distances are always strings (decimal or `p/q`), never JSON numbers.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::ballean::BalleanSpace;
use crate::dist::Dist;
use crate::error::{Error, Result};
use crate::laminar::SetFamily;
use crate::rooted::{RootedTree, Vertex};
use crate::space::Space;
use crate::tree::RepTree;

/// `{"points": [...], "matrix": [["0", "2", ...], ...]}`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceDoc {
    pub points: Vec<String>,
    pub matrix: Vec<Vec<Dist>>,
}

impl From<&Space> for SpaceDoc {
    fn from(space: &Space) -> Self {
        SpaceDoc { points: space.points().to_vec(), matrix: space.matrix() }
    }
}

impl TryFrom<SpaceDoc> for Space {
    type Error = Error;

    fn try_from(doc: SpaceDoc) -> Result<Space> {
        Space::new(doc.points, doc.matrix)
    }
}

/// Recursive tree node: `{"ball": [...], "label": "1", "children": [...]}`.
/// `ball` and `label` are omitted when unknown. Balls are emitted sorted by name.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ball: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<Dist>,
    #[serde(default)]
    pub children: Vec<TreeDoc>,
}

impl From<&RepTree> for TreeDoc {
    fn from(tree: &RepTree) -> Self {
        fn node(tree: &RepTree, id: usize) -> TreeDoc {
            let n = tree.node(id);
            let mut ball: Vec<String> = n.ball.iter().map(|&i| tree.points()[i].clone()).collect();
            ball.sort();
            TreeDoc {
                ball: Some(ball),
                label: Some(n.label.clone()),
                children: n.children.iter().map(|&c| node(tree, c)).collect(),
            }
        }
        node(tree, tree.root())
    }
}

impl From<&RootedTree> for TreeDoc {
    /// Balls are emitted only when every leaf below is named.
    fn from(tree: &RootedTree) -> Self {
        let sets = tree.leaf_sets();
        fn node(tree: &RootedTree, sets: &[Vec<usize>], id: usize) -> TreeDoc {
            let mut ball: Option<Vec<String>> = sets[id].iter().map(|&l| tree.vertex(l).name.clone()).collect();
            if let Some(names) = ball.as_mut() {
                names.sort();
            }
            TreeDoc {
                ball,
                label: tree.label(id).cloned(),
                children: tree.children(id).iter().map(|&c| node(tree, sets, c)).collect(),
            }
        }
        node(tree, &sets, tree.root())
    }
}

impl TryFrom<&TreeDoc> for RootedTree {
    type Error = Error;

    /// Vertex ids are assigned in pre-order. A leaf's name is the single
    /// member of its ball; an internal ball, when given, must be the union
    /// of its children's balls.
    fn try_from(doc: &TreeDoc) -> Result<RootedTree> {
        fn visit(doc: &TreeDoc, vertices: &mut Vec<Vertex>) -> Result<(usize, Option<BTreeSet<String>>)> {
            let id = vertices.len();
            vertices.push(Vertex::new(doc.label.clone(), vec![]));
            let given: Option<BTreeSet<String>> = doc.ball.as_ref().map(|b| b.iter().cloned().collect());
            if let (Some(list), Some(set)) = (&doc.ball, &given) {
                if list.len() != set.len() {
                    return Err(Error::Structure(format!("ball {list:?} repeats a point")));
                }
            }
            if doc.children.is_empty() {
                if let Some(set) = &given {
                    if set.len() != 1 {
                        return Err(Error::Structure(format!("leaf ball {set:?} is not a singleton")));
                    }
                    vertices[id].name = set.iter().next().cloned();
                }
                return Ok((id, given));
            }
            let mut union: Option<BTreeSet<String>> = Some(BTreeSet::new());
            let mut children = Vec::with_capacity(doc.children.len());
            for child in &doc.children {
                let (cid, cball) = visit(child, vertices)?;
                children.push(cid);
                union = match (union, cball) {
                    (Some(mut acc), Some(cb)) => {
                        let before = acc.len() + cb.len();
                        acc.extend(cb);
                        if acc.len() != before {
                            return Err(Error::Structure("sibling balls overlap".into()));
                        }
                        Some(acc)
                    }
                    _ => None,
                };
            }
            vertices[id].children = children;
            if let (Some(set), Some(u)) = (&given, &union) {
                if set != u {
                    return Err(Error::Structure(format!("ball {set:?} is not the union of its children")));
                }
            }
            Ok((id, given.or(union)))
        }
        let mut vertices = Vec::new();
        visit(doc, &mut vertices)?;
        RootedTree::new(vertices, 0)
    }
}

/// `{"points": [...], "family": [["a"], ["a", "b"], ...]}`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyDoc {
    pub points: Vec<String>,
    pub family: Vec<Vec<String>>,
}

impl From<&SetFamily> for FamilyDoc {
    fn from(f: &SetFamily) -> Self {
        FamilyDoc { points: f.universe().to_vec(), family: f.members().iter().map(|m| f.names_of(m)).collect() }
    }
}

impl TryFrom<FamilyDoc> for SetFamily {
    type Error = Error;

    fn try_from(doc: FamilyDoc) -> Result<SetFamily> {
        SetFamily::from_names(doc.points, &doc.family)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BallDoc {
    pub id: String,
    pub members: Vec<String>,
}

/// `{"base": <space>, "balls": [{"id", "members"}], "hmatrix": [[...]]}`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BalleanDoc {
    pub base: SpaceDoc,
    pub balls: Vec<BallDoc>,
    pub hmatrix: Vec<Vec<Dist>>,
}

impl From<&BalleanSpace> for BalleanDoc {
    fn from(bs: &BalleanSpace) -> Self {
        let base = bs.base();
        BalleanDoc {
            base: base.into(),
            balls: bs
                .balls()
                .iter()
                .zip(bs.ids())
                .map(|(b, id)| BallDoc {
                    id: id.clone(),
                    members: b.members().iter().map(|&i| base.name(i).to_string()).collect(),
                })
                .collect(),
            hmatrix: bs.hspace().matrix(),
        }
    }
}

fn escape(text: &str) -> String {
    text.replace('\\', "\\\\").replace('"', "\\\"")
}

/// DOT digraph with node captions `{members} : label`. Nodes are numbered in
/// pre-order following the stored child order, so output is stable.
pub fn to_dot(tree: &RootedTree) -> String {
    let sets = tree.leaf_sets();
    let mut out = String::from("digraph T {\n  node [shape=box];\n");
    let mut number = vec![0usize; tree.len()];
    let mut next = 0;
    let mut stack = vec![tree.root()];
    let mut edges = Vec::new();
    while let Some(u) = stack.pop() {
        number[u] = next;
        next += 1;
        let members: Vec<String> =
            sets[u].iter().map(|&l| tree.vertex(l).name.clone().unwrap_or_else(|| format!("#{l}"))).collect();
        let mut caption = format!("{{{}}}", members.join(","));
        if let Some(label) = tree.label(u) {
            let _ = write!(caption, " : {label}");
        }
        let _ = writeln!(out, "  n{} [label=\"{}\"];", number[u], escape(&caption));
        for &c in tree.children(u).iter().rev() {
            stack.push(c);
        }
        if let Some(p) = tree.parent(u) {
            edges.push((p, u));
        }
    }
    for (p, c) in edges {
        let _ = writeln!(out, "  n{} -> n{};", number[p], number[c]);
    }
    out.push_str("}\n");
    out
}

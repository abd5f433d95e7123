//! Balleans: the set of all closed balls of an ultrametric space, metrized
//! by the Hausdorff distance, and its iterates.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::dist::Dist;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::rooted::{RootedTree, Vertex};
use crate::space::{Ball, Rank, Space};
use crate::tree::{build_tree, diametrical_partition, RepTree};

/// Default cap on [`iterate_ballean`] depth.
pub const DEFAULT_MAX_DEPTH: usize = 6;

/// Identifier of a ball promoted to a point of the ballean space:
/// `B<level>[i,j,...]`, where the indices are the ball's members in the
/// level below.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BallId(String);

impl BallId {
    pub fn new(level: usize, members: &[usize]) -> BallId {
        let list = members.iter().map(|m| m.to_string()).collect::<Vec<_>>().join(",");
        BallId(format!("B{level}[{list}]"))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn into_string(self) -> String {
        self.0
    }
}

impl fmt::Display for BallId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A space together with all its balls and the Hausdorff ultrametric on them.
#[derive(Debug, Clone, PartialEq)]
pub struct BalleanSpace {
    base: Space,
    balls: Vec<Ball>,
    hspace: Space,
}

impl BalleanSpace {
    pub fn base(&self) -> &Space {
        &self.base
    }

    pub fn balls(&self) -> &[Ball] {
        &self.balls
    }

    /// Ball identifiers, parallel to [`Self::balls`].
    pub fn ids(&self) -> &[String] {
        self.hspace.points()
    }

    /// The balls as a metric space under the Hausdorff distance.
    pub fn hspace(&self) -> &Space {
        &self.hspace
    }

    pub fn into_hspace(self) -> Space {
        self.hspace
    }

    pub fn len(&self) -> usize {
        self.balls.len()
    }

    pub fn is_empty(&self) -> bool {
        self.balls.is_empty()
    }
}

/// All balls, read off the vertices of the representing tree, ordered by
/// size and then by member indices.
pub fn enumerate_balls(space: &Space) -> Result<Vec<Ball>> {
    Ok(balls_of(&build_tree(space)?))
}

fn balls_of(tree: &RepTree) -> Vec<Ball> {
    let mut balls = tree.balls();
    balls.sort();
    balls
}

fn check_subset(space: &Space, subset: &[usize]) -> Result<()> {
    if subset.is_empty() {
        return Err(Error::EmptySubset);
    }
    space.check_indices(subset)
}

fn directed(space: &Space, from: &[usize], to: &[usize]) -> Rank {
    from.iter().map(|&p| to.iter().map(|&q| space.rank(p, q)).min().expect("nonempty")).max().expect("nonempty")
}

/// Hausdorff distance between two nonempty point sets, evaluated directly
/// as the larger of the two directed sup-inf distances.
pub fn hausdorff(space: &Space, a: &[usize], b: &[usize]) -> Result<Dist> {
    check_subset(space, a)?;
    check_subset(space, b)?;
    let rank = directed(space, a, b).max(directed(space, b, a));
    Ok(space.value(rank).clone())
}

/// `max_{x in ball} d(x, any member)`: the diameter of a ball of an ultrametric space.
fn ball_rank(space: &Space, members: &[usize]) -> Rank {
    let c = members[0];
    members.iter().map(|&x| space.rank(x, c)).max().unwrap_or(0)
}

/// Hausdorff distance between two distinct balls as `diam(a ∪ b)`.
///
/// In an ultrametric space `diam(a ∪ b) = max(diam a, diam b, d(p, q))` for
/// any `p` in `a` and `q` in `b`, so this is linear in the ball sizes.
pub fn hausdorff_fast(space: &Space, a: &Ball, b: &Ball) -> Result<Dist> {
    space.require_ultrametric()?;
    space.check_indices(a.members())?;
    space.check_indices(b.members())?;
    if a == b {
        return Err(Error::EqualBalls);
    }
    let rank = ball_rank(space, a.members())
        .max(ball_rank(space, b.members()))
        .max(space.rank(a.members()[0], b.members()[0]));
    Ok(space.value(rank).clone())
}

pub fn ballean_space(space: &Space) -> Result<BalleanSpace> {
    ballean_space_with(space, Execution::default())
}

pub fn ballean_space_with(space: &Space, exec: Execution) -> Result<BalleanSpace> {
    build_ballean(space, 1, exec)
}

fn build_ballean(space: &Space, level: usize, exec: Execution) -> Result<BalleanSpace> {
    let balls = enumerate_balls(space)?;
    let ids = balls.iter().map(|b| BallId::new(level, b.members()).into_string()).collect();
    let diam: Vec<Rank> = balls.iter().map(|b| ball_rank(space, b.members())).collect();
    let m = balls.len();
    let rows = exec.map(m, |i| {
        (0..m)
            .map(|j| {
                if i == j {
                    0
                } else {
                    diam[i].max(diam[j]).max(space.rank(balls[i].members()[0], balls[j].members()[0]))
                }
            })
            .collect::<Vec<Rank>>()
    });
    let hspace = Space::from_ranks(ids, space.values(), rows.concat())?;
    Ok(BalleanSpace { base: space.clone(), balls, hspace })
}

#[derive(Debug, Clone, Copy)]
pub struct IterateOptions {
    pub max_depth: usize,
    pub exec: Execution,
}

impl Default for IterateOptions {
    fn default() -> Self {
        IterateOptions { max_depth: DEFAULT_MAX_DEPTH, exec: Execution::default() }
    }
}

/// The `n`-th iterated ballean; `n = 0` returns the space itself.
pub fn iterate_ballean(space: &Space, n: usize) -> Result<Space> {
    iterate_ballean_with(space, n, IterateOptions::default())
}

pub fn iterate_ballean_with(space: &Space, n: usize, options: IterateOptions) -> Result<Space> {
    if n > options.max_depth {
        return Err(Error::DepthLimit { requested: n, limit: options.max_depth });
    }
    space.require_ultrametric()?;
    let mut current = space.clone();
    for level in 1..=n {
        current = build_ballean(&current, level, options.exec)?.into_hspace();
    }
    Ok(current)
}

/// Attaches one fresh leaf to every internal vertex. The result is
/// unlabeled; original leaves keep their names, new leaves are unnamed.
/// Fresh leaves get ids after all original vertices, in order of the
/// internal vertex they hang from.
pub fn add_leaf_transform(tree: &RepTree) -> RootedTree {
    let mut vertices: Vec<Vertex> = tree
        .nodes()
        .iter()
        .enumerate()
        .map(|(id, node)| Vertex {
            label: None,
            name: (id < tree.points().len()).then(|| tree.points()[id].clone()),
            children: node.children.clone(),
        })
        .collect();
    let internal: Vec<usize> = (0..tree.len()).filter(|&u| !tree.is_leaf(u)).collect();
    for u in internal {
        let fresh = vertices.len();
        vertices.push(Vertex::new(None, vec![]));
        vertices[u].children.push(fresh);
    }
    RootedTree::new(vertices, tree.root()).expect("adding leaves keeps a tree")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BalleanPartitionReport {
    /// Number of parts of the base space's diametrical partition.
    pub k: usize,
    pub passed: bool,
    /// Diametrical partition of the ballean space, as ball ids.
    pub parts: Vec<Vec<String>>,
    /// `{X}` followed by the balleans of the base parts, as ball ids.
    pub expected: Vec<Vec<String>>,
}

/// Checks that the diametrical partition of the ballean space consists of
/// exactly `k + 1` parts: `{X}` and the balleans of the `k` parts of the
/// base space's diametrical partition.
pub fn ballean_diametrical_check(space: &Space) -> Result<BalleanPartitionReport> {
    if space.len() < 2 {
        return Err(Error::PartitionUndefined);
    }
    let bs = ballean_space(space)?;
    let index: HashMap<&[usize], usize> = bs.balls.iter().enumerate().map(|(i, b)| (b.members(), i)).collect();
    let all: Vec<usize> = (0..space.len()).collect();
    let base_parts = diametrical_partition(space, &all)?;

    let mut passed = true;
    let whole = index[all.as_slice()];
    let mut expected: Vec<Vec<usize>> = vec![vec![whole]];
    for part in &base_parts.parts {
        let sub = space.restrict(part)?;
        let mut group = Vec::new();
        for ball in enumerate_balls(&sub)? {
            let lifted: Vec<usize> = ball.members().iter().map(|&k| part[k]).collect();
            match index.get(lifted.as_slice()) {
                Some(&i) => group.push(i),
                None => passed = false,
            }
        }
        group.sort_unstable();
        expected.push(group);
    }

    let h_all: Vec<usize> = (0..bs.len()).collect();
    let mut parts = diametrical_partition(bs.hspace(), &h_all)?.parts;
    parts.sort();
    expected.sort();
    passed &= parts.len() == base_parts.len() + 1 && parts == expected;

    let named = |groups: &[Vec<usize>]| -> Vec<Vec<String>> {
        groups.iter().map(|g| g.iter().map(|&i| bs.ids()[i].clone()).collect()).collect()
    };
    Ok(BalleanPartitionReport { k: base_parts.len(), passed, parts: named(&parts), expected: named(&expected) })
}

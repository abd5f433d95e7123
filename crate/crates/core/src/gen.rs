//! Reproducible random ultrametric spaces.
//!
//! A random rooted tree with no out-degree-1 vertex is drawn first; labels
//! from the given set are then assigned so that they strictly decrease
//! toward the leaves (leaves get 0). Such a tree always represents an
//! ultrametric, which [`space_from_tree`] recovers. Points are shuffled and
//! named `p0, p1, ...` in final order.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dist::Dist;
use crate::error::{Error, Result};
use crate::rooted::RootedTree;
use crate::space::Space;
use crate::tree::space_from_tree;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenParams {
    pub leaves: usize,
    /// Candidate positive labels for internal vertices.
    pub labels: Vec<Dist>,
    pub seed: u64,
}

impl GenParams {
    pub fn new(leaves: usize, seed: u64) -> GenParams {
        GenParams { leaves, labels: default_labels(), seed }
    }

    pub fn with_labels(mut self, labels: Vec<Dist>) -> GenParams {
        self.labels = labels;
        self
    }
}

pub fn default_labels() -> Vec<Dist> {
    (1..=5).map(Dist::from_integer).collect()
}

pub fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn sorted_labels(labels: &[Dist]) -> Result<Vec<Dist>> {
    let mut labels = labels.to_vec();
    labels.sort();
    labels.dedup();
    if labels.first().is_some_and(Dist::is_zero) {
        return Err(Error::Structure("internal labels must be positive".into()));
    }
    Ok(labels)
}

pub fn random_tree(params: &GenParams) -> Result<RootedTree> {
    random_tree_from(&mut rng_for(params.seed), params.leaves, &params.labels)
}

/// A random labeled tree passing the level-0 realizability check, with
/// `leaves` unnamed leaves.
pub fn random_tree_from<R: Rng>(rng: &mut R, leaves: usize, labels: &[Dist]) -> Result<RootedTree> {
    if leaves == 0 {
        return Err(Error::Structure("need at least one leaf".into()));
    }
    let labels = sorted_labels(labels)?;
    if leaves >= 2 && labels.is_empty() {
        return Err(Error::Structure("need at least one label for two or more leaves".into()));
    }
    let shape = random_shape(rng, leaves, 0, labels.len());
    let ranks = assign_ranks(rng, &shape, labels.len());
    let vertices = shape
        .vertices()
        .iter()
        .zip(&ranks)
        .map(|(v, &r)| {
            let mut v = v.clone();
            v.label = Some(if r == 0 { Dist::zero() } else { labels[r - 1].clone() });
            v
        })
        .collect();
    RootedTree::new(vertices, shape.root())
}

/// Unlabeled shape; internal vertices sit at depth `< max_depth`.
fn random_shape<R: Rng>(rng: &mut R, m: usize, depth: usize, max_depth: usize) -> RootedTree {
    if m == 1 {
        return RootedTree::single(None);
    }
    let k = if depth + 1 >= max_depth || rng.gen_ratio(1, 5) { m } else { rng.gen_range(2..=m.min(4)) };
    let mut cuts: Vec<usize> = rand::seq::index::sample(rng, m - 1, k - 1).into_iter().map(|c| c + 1).collect();
    cuts.sort_unstable();
    cuts.push(m);
    let mut start = 0;
    let subtrees = cuts
        .into_iter()
        .map(|end| {
            let size = end - start;
            start = end;
            random_shape(rng, size, depth + 1, max_depth)
        })
        .collect();
    RootedTree::join(None, subtrees)
}

/// Label ranks (0 = leaf, `1..=k` index the sorted label set) strictly
/// decreasing from parent to child.
fn assign_ranks<R: Rng>(rng: &mut R, tree: &RootedTree, k: usize) -> Vec<usize> {
    let mut ranks = vec![0; tree.len()];
    for u in tree.post_order() {
        if tree.is_leaf(u) {
            continue;
        }
        let low = tree.children(u).iter().map(|&c| ranks[c]).max().unwrap_or(0) + 1;
        let high = k - tree.depth(u);
        ranks[u] = rng.gen_range(low..=high);
    }
    ranks
}

/// A random ultrametric space from the tree construction above.
pub fn random_space(params: &GenParams) -> Result<Space> {
    random_space_from(&mut rng_for(params.seed), params.leaves, &params.labels)
}

pub fn random_space_from<R: Rng>(rng: &mut R, leaves: usize, labels: &[Dist]) -> Result<Space> {
    let tree = random_tree_from(rng, leaves, labels)?;
    let space = space_from_tree(&tree)?;
    shuffled(rng, &space)
}

/// Random reordering of the points, renamed `p0, p1, ...` by position.
pub fn shuffled<R: Rng>(rng: &mut R, space: &Space) -> Result<Space> {
    let mut order: Vec<usize> = (0..space.len()).collect();
    order.shuffle(rng);
    let names = (0..space.len()).map(|i| format!("p{i}")).collect();
    space.permute(&order)?.with_names(names)
}

//! Brute-force oracles and random fixtures shared by the integration tests.
//!
//! The oracles work on `Dist` values straight from the matrix and never call
//! into the tree, ballean or canonical-form code they are used to check.

#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use ultrametric::gen::{random_space_from, random_tree_from, rng_for, shuffled};
use ultrametric::{build_tree, space_from_tree, Dist, RootedTree, Space, Vertex};

pub fn d(s: &str) -> Dist {
    s.parse().unwrap()
}

pub fn space(names: &[&str], rows: &[&[&str]]) -> Space {
    Space::new(
        names.iter().map(|s| s.to_string()).collect(),
        rows.iter().map(|r| r.iter().map(|v| d(v)).collect()).collect(),
    )
    .unwrap()
}

/// Four points, `d(x1,x3) = d(x2,x4) = inner`, every other pair at 2.
pub fn square(inner: &str) -> Space {
    space(
        &["x1", "x2", "x3", "x4"],
        &[&["0", "2", inner, "2"], &["2", "0", "2", inner], &[inner, "2", "0", "2"], &["2", inner, "2", "0"]],
    )
}

pub fn corpus_labels() -> Vec<Dist> {
    ["1/3", "1/2", "1", "2", "7/2"].iter().map(|s| d(s)).collect()
}

/// Seeded random ultrametric spaces with `lo..=hi` points.
pub fn corpus(count: usize, lo: usize, hi: usize, seed: u64) -> Vec<Space> {
    let mut rng = rng_for(seed);
    (0..count)
        .map(|i| {
            let leaves = lo + i % (hi - lo + 1);
            random_space_from(&mut rng, leaves, &corpus_labels()).unwrap()
        })
        .collect()
}

// ---------------------------------------------------------------------------
// ball and Hausdorff oracles

/// `{B_r(c) : c ∈ X, r ∈ {0} ∪ realized distances}` by direct scanning.
pub fn brute_force_balls(s: &Space) -> BTreeSet<Vec<usize>> {
    let n = s.len();
    let matrix = s.matrix();
    let mut radii: Vec<Dist> = matrix.iter().flatten().cloned().collect();
    radii.push(Dist::zero());
    radii.sort();
    radii.dedup();
    let mut balls = BTreeSet::new();
    for c in 0..n {
        for r in &radii {
            balls.insert((0..n).filter(|&x| matrix[x][c] <= *r).collect());
        }
    }
    balls
}

/// Hausdorff distance straight from the sup-inf definition.
pub fn naive_hausdorff(matrix: &[Vec<Dist>], a: &[usize], b: &[usize]) -> Dist {
    let directed = |from: &[usize], to: &[usize]| {
        from.iter().map(|&p| to.iter().map(|&q| matrix[p][q].clone()).min().unwrap()).max().unwrap()
    };
    directed(a, b).max(directed(b, a))
}

pub fn naive_diam(matrix: &[Vec<Dist>], subset: &[usize]) -> Dist {
    let mut best = Dist::zero();
    for &i in subset {
        for &j in subset {
            best = best.max(matrix[i][j].clone());
        }
    }
    best
}

pub fn strong_triangle_holds(matrix: &[Vec<Dist>]) -> bool {
    let n = matrix.len();
    (0..n).all(|x| (0..n).all(|y| (0..n).all(|z| matrix[x][y] <= matrix[x][z].clone().max(matrix[z][y].clone()))))
}

// ---------------------------------------------------------------------------
// bijection searches

/// Exhaustive search for a distance-preserving bijection.
pub fn brute_isometric(a: &Space, b: &Space) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let (ma, mb) = (a.matrix(), b.matrix());
    let n = a.len();
    let mut image = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn extend(k: usize, ma: &[Vec<Dist>], mb: &[Vec<Dist>], image: &mut [usize], used: &mut [bool]) -> bool {
        let n = ma.len();
        if k == n {
            return true;
        }
        for cand in 0..n {
            if used[cand] || (0..k).any(|j| ma[k][j] != mb[cand][image[j]]) {
                continue;
            }
            used[cand] = true;
            image[k] = cand;
            if extend(k + 1, ma, mb, image, used) {
                return true;
            }
            used[cand] = false;
        }
        false
    }
    extend(0, &ma, &mb, &mut image, &mut used)
}

/// Exhaustive search for a root-preserving bijection that preserves the
/// parent relation (hence all edges) and, optionally, labels.
pub fn brute_tree_isomorphic(t1: &RootedTree, t2: &RootedTree, labeled: bool) -> bool {
    if t1.len() != t2.len() {
        return false;
    }
    let mut order = vec![t1.root()];
    let mut k = 0;
    while k < order.len() {
        order.extend_from_slice(t1.children(order[k]));
        k += 1;
    }
    let mut image = vec![usize::MAX; t1.len()];
    let mut used = vec![false; t2.len()];
    let label_ok = |u: usize, w: usize| !labeled || t1.label(u) == t2.label(w);
    if !label_ok(t1.root(), t2.root()) {
        return false;
    }
    image[t1.root()] = t2.root();
    used[t2.root()] = true;

    fn extend(
        k: usize,
        order: &[usize],
        t1: &RootedTree,
        t2: &RootedTree,
        image: &mut [usize],
        used: &mut [bool],
        label_ok: &dyn Fn(usize, usize) -> bool,
    ) -> bool {
        if k == order.len() {
            // every non-root vertex maps under the image of its parent, and
            // the vertex counts agree, so edge sets correspond
            return (0..t1.len()).all(|u| t1.parent(u).map(|p| image[p]) == t2.parent(image[u]));
        }
        let u = order[k];
        let want_parent = image[t1.parent(u).unwrap()];
        for w in 0..t2.len() {
            if used[w] || t2.parent(w) != Some(want_parent) || !label_ok(u, w) {
                continue;
            }
            used[w] = true;
            image[u] = w;
            if extend(k + 1, order, t1, t2, image, used, label_ok) {
                return true;
            }
            used[w] = false;
        }
        false
    }
    extend(1, &order, t1, t2, &mut image, &mut used, &label_ok)
}

// ---------------------------------------------------------------------------
// random structures

/// Any rooted tree on `n` vertices (out-degree 1 allowed), with labels drawn
/// from `{0, 1, 2}` when `labeled`.
pub fn random_rooted(rng: &mut ChaCha8Rng, n: usize, labeled: bool) -> RootedTree {
    let mut vertices: Vec<Vertex> =
        (0..n).map(|_| Vertex::new(labeled.then(|| Dist::from_integer(rng.gen_range(0..3))), vec![])).collect();
    for v in 1..n {
        let p = rng.gen_range(0..v);
        vertices[p].children.push(v);
    }
    RootedTree::new(vertices, 0).unwrap()
}

/// Renumbers vertices at random and shuffles every child list.
pub fn scramble(rng: &mut ChaCha8Rng, t: &RootedTree) -> RootedTree {
    let n = t.len();
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut vertices = vec![Vertex::new(None, vec![]); n];
    for u in 0..n {
        let mut v = t.vertex(u).clone();
        v.children = v.children.iter().map(|&c| perm[c]).collect();
        v.children.shuffle(rng);
        vertices[perm[u]] = v;
    }
    RootedTree::new(vertices, perm[t.root()]).unwrap()
}

/// A random tree passing the level-0 check, leaves named `a0, a1, ...`.
pub fn random_admissible_tree(rng: &mut ChaCha8Rng, leaves: usize) -> RootedTree {
    let t = random_tree_from(rng, leaves, &corpus_labels()).unwrap();
    let mut vertices = t.vertices().to_vec();
    for (k, leaf) in t.leaves().into_iter().enumerate() {
        vertices[leaf].name = Some(format!("a{k}"));
    }
    RootedTree::new(vertices, t.root()).unwrap()
}

/// Ultrametric-preserving change: one internal label moves strictly
/// between its largest child label and its parent label (or above the root).
pub fn perturb(rng: &mut ChaCha8Rng, s: &Space) -> Space {
    let tree = build_tree(s).unwrap().to_rooted();
    let internal = tree.internal();
    if internal.is_empty() {
        return s.clone();
    }
    let u = *internal.choose(rng).unwrap();
    let label = tree.label(u).unwrap().clone();
    let floor = tree.children(u).iter().map(|&c| tree.label(c).unwrap().clone()).max().unwrap();
    let ceiling = match tree.parent(u) {
        Some(p) => tree.label(p).unwrap().clone(),
        None => label.checked_add(&Dist::from_integer(1)),
    };
    let target = if rng.gen_bool(0.5) { label.midpoint(&ceiling) } else { floor.midpoint(&label) };
    let mut vertices = tree.vertices().to_vec();
    vertices[u].label = Some(target);
    let changed = space_from_tree(&RootedTree::new(vertices, tree.root()).unwrap()).unwrap();
    shuffled(rng, &changed).unwrap()
}

pub fn isometric_copy(rng: &mut ChaCha8Rng, s: &Space) -> Space {
    shuffled(rng, s).unwrap()
}

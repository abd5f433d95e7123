//! Finite metric spaces with exact distances, metric/ultrametric validation,
//! diameters and closed balls.
//!
//! A [`Space`] interns its distinct distance values into a sorted table and
//! stores the matrix as ranks into that table. Rank comparison is therefore
//! exactly the comparison of the underlying rationals.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap, HashSet};
use std::hash::{Hash, Hasher};
use std::sync::OnceLock;

use crate::dist::Dist;
use crate::error::{Error, Result};
use crate::exec::Execution;

pub type Rank = u32;

#[derive(Debug, Clone)]
pub struct Space {
    points: Vec<String>,
    /// Distinct distance values in increasing order; `values[0]` is zero.
    values: Vec<Dist>,
    /// Row-major `n * n` ranks into `values`.
    ranks: Vec<Rank>,
    report: OnceLock<MetricReport>,
}

impl PartialEq for Space {
    fn eq(&self, other: &Self) -> bool {
        self.points == other.points && self.values == other.values && self.ranks == other.ranks
    }
}

impl Eq for Space {}

/// Outcome of [`validate`].
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct MetricReport {
    pub is_metric: bool,
    pub is_ultrametric: bool,
    /// `(x, y, z)` with `d(x, y)` too large relative to the path through `z`.
    /// Refers to the triangle inequality when `is_metric` is false, otherwise
    /// to the strong triangle inequality.
    pub witness: Option<(usize, usize, usize)>,
}

impl Space {
    /// Builds a space from point names and a full distance matrix.
    ///
    /// Rejects empty spaces, duplicate names, non-square or asymmetric
    /// matrices, nonzero diagonals and zero off-diagonal entries.
    pub fn new(points: Vec<String>, matrix: Vec<Vec<Dist>>) -> Result<Space> {
        let n = points.len();
        if n == 0 {
            return Err(Error::Structure("a space needs at least one point".into()));
        }
        check_distinct_names(&points)?;
        if matrix.len() != n || matrix.iter().any(|row| row.len() != n) {
            return Err(Error::Structure(format!("distance matrix must be {n}x{n}")));
        }
        for i in 0..n {
            if !matrix[i][i].is_zero() {
                return Err(Error::Structure(format!("d({0}, {0}) must be 0", points[i])));
            }
            for j in (i + 1)..n {
                if matrix[i][j] != matrix[j][i] {
                    return Err(Error::Structure(format!("matrix is not symmetric at ({}, {})", points[i], points[j])));
                }
                if matrix[i][j].is_zero() {
                    return Err(Error::Structure(format!(
                        "distinct points {} and {} are at distance 0",
                        points[i], points[j]
                    )));
                }
            }
        }
        let values: Vec<Dist> = matrix.iter().flatten().cloned().collect::<BTreeSet<_>>().into_iter().collect();
        let lookup: HashMap<&Dist, Rank> = values.iter().enumerate().map(|(r, v)| (v, r as Rank)).collect();
        let ranks = matrix.iter().flatten().map(|v| lookup[v]).collect();
        Ok(Space { points, values, ranks, report: OnceLock::new() })
    }

    /// Builds a space from a rank matrix over an increasing value table.
    /// Unused values are dropped so the table stays canonical.
    pub(crate) fn from_ranks(points: Vec<String>, values: &[Dist], ranks: Vec<Rank>) -> Result<Space> {
        let n = points.len();
        debug_assert_eq!(ranks.len(), n * n);
        check_distinct_names(&points)?;
        let mut used = vec![false; values.len()];
        for &r in &ranks {
            used[r as usize] = true;
        }
        used[0] = true;
        let mut remap = vec![0 as Rank; values.len()];
        let mut kept = Vec::new();
        for (r, value) in values.iter().enumerate() {
            if used[r] {
                remap[r] = kept.len() as Rank;
                kept.push(value.clone());
            }
        }
        let ranks = ranks.into_iter().map(|r| remap[r as usize]).collect();
        Ok(Space { points, values: kept, ranks, report: OnceLock::new() })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn name(&self, index: usize) -> &str {
        &self.points[index]
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.points.iter().position(|p| p == name).ok_or_else(|| Error::UnknownPoint(name.to_string()))
    }

    pub fn indices_of<S: AsRef<str>>(&self, names: &[S]) -> Result<Vec<usize>> {
        names.iter().map(|n| self.index_of(n.as_ref())).collect()
    }

    pub fn dist(&self, i: usize, j: usize) -> &Dist {
        &self.values[self.rank(i, j) as usize]
    }

    pub fn rank(&self, i: usize, j: usize) -> Rank {
        self.ranks[i * self.points.len() + j]
    }

    /// The distinct distance values realized in the matrix, increasing, starting at 0.
    pub fn values(&self) -> &[Dist] {
        &self.values
    }

    pub fn value(&self, rank: Rank) -> &Dist {
        &self.values[rank as usize]
    }

    pub fn matrix(&self) -> Vec<Vec<Dist>> {
        let n = self.len();
        (0..n).map(|i| (0..n).map(|j| self.dist(i, j).clone()).collect()).collect()
    }

    pub fn diameter(&self) -> &Dist {
        self.values.last().expect("value table always holds zero")
    }

    /// Largest rank whose value is `<= radius`.
    pub(crate) fn rank_floor(&self, radius: &Dist) -> Rank {
        let above = self.values.partition_point(|v| v <= radius);
        (above - 1) as Rank
    }

    /// Cached result of [`validate`].
    pub fn report(&self) -> &MetricReport {
        self.report.get_or_init(|| validate_with(self, Execution::default()))
    }

    pub fn is_ultrametric(&self) -> bool {
        self.report().is_ultrametric
    }

    pub(crate) fn require_ultrametric(&self) -> Result<()> {
        let report = self.report();
        if report.is_ultrametric {
            Ok(())
        } else {
            Err(Error::NotUltrametric { witness: report.witness.expect("failed report carries a witness") })
        }
    }

    pub(crate) fn check_indices(&self, subset: &[usize]) -> Result<()> {
        match subset.iter().find(|&&i| i >= self.len()) {
            Some(&bad) => Err(Error::IndexOutOfRange(bad)),
            None => Ok(()),
        }
    }

    /// The subspace on `subset` (points kept in the order given).
    pub fn restrict(&self, subset: &[usize]) -> Result<Space> {
        if subset.is_empty() {
            return Err(Error::EmptySubset);
        }
        self.check_indices(subset)?;
        let points = subset.iter().map(|&i| self.points[i].clone()).collect();
        let ranks = subset.iter().flat_map(|&i| subset.iter().map(move |&j| self.rank(i, j))).collect();
        Space::from_ranks(points, &self.values, ranks)
    }

    /// Reorders points: position `k` of the result is point `order[k]` of `self`.
    pub fn permute(&self, order: &[usize]) -> Result<Space> {
        let mut seen = vec![false; self.len()];
        if order.len() != self.len() {
            return Err(Error::Structure("permutation length differs from space size".into()));
        }
        for &i in order {
            if i >= self.len() || std::mem::replace(&mut seen[i], true) {
                return Err(Error::Structure("not a permutation".into()));
            }
        }
        self.restrict(order)
    }

    pub fn with_names(&self, points: Vec<String>) -> Result<Space> {
        if points.len() != self.len() {
            return Err(Error::Structure("name count differs from space size".into()));
        }
        Space::from_ranks(points, &self.values, self.ranks.clone())
    }
}

fn check_distinct_names(points: &[String]) -> Result<()> {
    let mut seen = HashSet::with_capacity(points.len());
    for p in points {
        if !seen.insert(p.as_str()) {
            return Err(Error::Structure(format!("duplicate point name {p:?}")));
        }
    }
    Ok(())
}

/// A closed ball, identified by its sorted member set.
#[derive(Debug, Clone)]
pub struct Ball {
    members: Vec<usize>,
    diameter: Dist,
}

impl Ball {
    pub(crate) fn from_sorted(members: Vec<usize>, diameter: Dist) -> Ball {
        debug_assert!(!members.is_empty());
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        Ball { members, diameter }
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn diameter(&self) -> &Dist {
        &self.diameter
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn is_singular(&self) -> bool {
        self.members.len() == 1
    }

    pub fn contains(&self, point: usize) -> bool {
        self.members.binary_search(&point).is_ok()
    }

    pub fn is_subset_of(&self, other: &Ball) -> bool {
        self.members.iter().all(|&p| other.contains(p))
    }

    pub fn intersects(&self, other: &Ball) -> bool {
        self.members.iter().any(|&p| other.contains(p))
    }

    pub fn names<'a>(&self, space: &'a Space) -> Vec<&'a str> {
        self.members.iter().map(|&i| space.name(i)).collect()
    }
}

impl PartialEq for Ball {
    fn eq(&self, other: &Self) -> bool {
        self.members == other.members
    }
}

impl Eq for Ball {}

impl Hash for Ball {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.members.hash(state);
    }
}

/// Balls order by size, then lexicographically by member indices.
impl Ord for Ball {
    fn cmp(&self, other: &Self) -> Ordering {
        self.members.len().cmp(&other.members.len()).then_with(|| self.members.cmp(&other.members))
    }
}

impl PartialOrd for Ball {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Checks the triangle and strong triangle inequalities over all triples.
pub fn validate(space: &Space) -> MetricReport {
    space.report().clone()
}

pub fn validate_with(space: &Space, exec: Execution) -> MetricReport {
    let n = space.len();
    let strong = exec.find_first(n, |x| {
        for y in (x + 1)..n {
            let dxy = space.rank(x, y);
            for z in 0..n {
                if z != x && z != y && dxy > space.rank(x, z).max(space.rank(z, y)) {
                    return Some((x, y, z));
                }
            }
        }
        None
    });
    let Some(strong_witness) = strong else {
        return MetricReport { is_metric: true, is_ultrametric: true, witness: None };
    };
    let weak = exec.find_first(n, |x| {
        for y in (x + 1)..n {
            let dxy = space.dist(x, y);
            for z in 0..n {
                if z != x && z != y && *dxy > space.dist(x, z).checked_add(space.dist(z, y)) {
                    return Some((x, y, z));
                }
            }
        }
        None
    });
    match weak {
        Some(w) => MetricReport { is_metric: false, is_ultrametric: false, witness: Some(w) },
        None => MetricReport { is_metric: true, is_ultrametric: false, witness: Some(strong_witness) },
    }
}

pub(crate) fn diam_rank(space: &Space, subset: &[usize]) -> Rank {
    let mut best = 0;
    for (k, &i) in subset.iter().enumerate() {
        for &j in &subset[k + 1..] {
            best = best.max(space.rank(i, j));
        }
    }
    best
}

/// Largest pairwise distance within `subset`; zero for a singleton.
pub fn diam(space: &Space, subset: &[usize]) -> Result<Dist> {
    if subset.is_empty() {
        return Err(Error::EmptySubset);
    }
    space.check_indices(subset)?;
    Ok(space.value(diam_rank(space, subset)).clone())
}

/// `B_r(c) = {x : d(x, c) <= r}`.
pub fn closed_ball(space: &Space, center: usize, radius: &Dist) -> Result<Ball> {
    space.check_indices(&[center])?;
    space.require_ultrametric()?;
    let limit = space.rank_floor(radius);
    Ok(ball_at_rank(space, center, limit))
}

/// Assumes an ultrametric space: the diameter is the largest distance to the center.
pub(crate) fn ball_at_rank(space: &Space, center: usize, limit: Rank) -> Ball {
    let mut top = 0;
    let members = (0..space.len())
        .filter(|&x| {
            let r = space.rank(x, center);
            if r <= limit {
                top = top.max(r);
                true
            } else {
                false
            }
        })
        .collect();
    Ball::from_sorted(members, space.value(top).clone())
}

/// The smallest ball containing `subset`: `B_{diam A}(a)` for any `a` in `A`.
pub fn smallest_enclosing_ball(space: &Space, subset: &[usize]) -> Result<Ball> {
    if subset.is_empty() {
        return Err(Error::EmptySubset);
    }
    space.check_indices(subset)?;
    space.require_ultrametric()?;
    Ok(ball_at_rank(space, subset[0], diam_rank(space, subset)))
}

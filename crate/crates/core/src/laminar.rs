//! Set families that are balleans of ultrametrics.
//!
//! A family on a finite set `X` is the ballean of some ultrametric exactly
//! when it contains `X` and every singleton, and any two intersecting members
//! are nested. Such a family is realized by `τ(x, y) = |F| - 1`, where `F` is
//! the smallest member containing both points.

use std::collections::HashSet;

use serde::Serialize;

use crate::ballean::enumerate_balls;
use crate::dist::Dist;
use crate::error::{Error, Result};
use crate::space::{Rank, Space};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetFamily {
    universe: Vec<String>,
    family: Vec<Vec<usize>>,
}

impl SetFamily {
    /// Members are normalized to sorted index sets. Rejects an empty
    /// universe, duplicate point names, empty or out-of-range members and
    /// duplicate members.
    pub fn new(universe: Vec<String>, family: Vec<Vec<usize>>) -> Result<SetFamily> {
        if universe.is_empty() {
            return Err(Error::Structure("a family needs a nonempty universe".into()));
        }
        let mut names = HashSet::new();
        if let Some(dup) = universe.iter().find(|p| !names.insert(p.as_str())) {
            return Err(Error::Structure(format!("duplicate point name {dup:?}")));
        }
        let mut seen = HashSet::new();
        let mut normalized = Vec::with_capacity(family.len());
        for mut member in family {
            member.sort_unstable();
            let before = member.len();
            member.dedup();
            if member.len() != before {
                return Err(Error::Structure(format!("member {member:?} repeats a point")));
            }
            if member.is_empty() {
                return Err(Error::Structure("family members must be nonempty".into()));
            }
            if let Some(&bad) = member.iter().find(|&&i| i >= universe.len()) {
                return Err(Error::IndexOutOfRange(bad));
            }
            if !seen.insert(member.clone()) {
                return Err(Error::Structure(format!("duplicate member {member:?}")));
            }
            normalized.push(member);
        }
        Ok(SetFamily { universe, family: normalized })
    }

    /// Builds a family from point names.
    pub fn from_names<S: AsRef<str>>(universe: Vec<String>, family: &[Vec<S>]) -> Result<SetFamily> {
        let members = family
            .iter()
            .map(|m| {
                m.iter()
                    .map(|name| {
                        universe
                            .iter()
                            .position(|p| p == name.as_ref())
                            .ok_or_else(|| Error::UnknownPoint(name.as_ref().to_string()))
                    })
                    .collect::<Result<Vec<usize>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        SetFamily::new(universe, members)
    }

    pub fn universe(&self) -> &[String] {
        &self.universe
    }

    pub fn members(&self) -> &[Vec<usize>] {
        &self.family
    }

    pub fn len(&self) -> usize {
        self.family.len()
    }

    pub fn is_empty(&self) -> bool {
        self.family.is_empty()
    }

    /// Members sorted by size, then lexicographically.
    pub fn canonical_members(&self) -> Vec<Vec<usize>> {
        let mut members = self.family.clone();
        members.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        members
    }

    pub fn names_of(&self, member: &[usize]) -> Vec<String> {
        member.iter().map(|&i| self.universe[i].clone()).collect()
    }

    /// Same member sets, regardless of listing order.
    pub fn same_members(&self, other: &SetFamily) -> bool {
        self.universe == other.universe && self.canonical_members() == other.canonical_members()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub is_ballean: bool,
    /// Points whose singleton is not a member.
    pub missing_singletons: Vec<usize>,
    pub missing_universe: bool,
    /// First pair (in canonical member order) that intersects without nesting.
    pub crossing_pair: Option<(Vec<usize>, Vec<usize>)>,
}

fn is_subset(small: &[usize], large: &[usize]) -> bool {
    small.iter().all(|p| large.binary_search(p).is_ok())
}

fn intersects(a: &[usize], b: &[usize]) -> bool {
    a.iter().any(|p| b.binary_search(p).is_ok())
}

pub fn validate_family(f: &SetFamily) -> ValidationReport {
    let n = f.universe.len();
    let mut has_singleton = vec![false; n];
    let mut missing_universe = true;
    for member in &f.family {
        if member.len() == 1 {
            has_singleton[member[0]] = true;
        }
        if member.len() == n {
            missing_universe = false;
        }
    }
    let missing_singletons: Vec<usize> = (0..n).filter(|&i| !has_singleton[i]).collect();

    let members = f.canonical_members();
    let mut crossing_pair = None;
    'outer: for (i, a) in members.iter().enumerate() {
        for b in &members[i + 1..] {
            // b is at least as large as a, so only a ⊆ b can hold
            if intersects(a, b) && !is_subset(a, b) {
                crossing_pair = Some((a.clone(), b.clone()));
                break 'outer;
            }
        }
    }
    let is_ballean = missing_singletons.is_empty() && !missing_universe && crossing_pair.is_none();
    ValidationReport { is_ballean, missing_singletons, missing_universe, crossing_pair }
}

/// An ultrametric whose ballean is exactly `f`, with
/// `τ(x, y) = min{|F| : x, y ∈ F ∈ f} - 1`.
pub fn reconstruct(f: &SetFamily) -> Result<Space> {
    let report = validate_family(f);
    if !report.is_ballean {
        return Err(Error::InvalidFamily(Box::new(report)));
    }
    let n = f.universe.len();
    let mut tau = vec![0usize; n * n];
    let mut members = f.canonical_members();
    // largest first, so each pair ends up with its smallest enclosing member
    members.reverse();
    for member in &members {
        let size = member.len() - 1;
        for &x in member {
            for &y in member {
                if x != y {
                    tau[x * n + y] = size;
                }
            }
        }
    }
    let mut sizes: Vec<usize> = tau.clone();
    sizes.push(0);
    sizes.sort_unstable();
    sizes.dedup();
    let values: Vec<Dist> = sizes.iter().map(|&s| Dist::from_integer(s as u64)).collect();
    let ranks = tau.iter().map(|t| sizes.binary_search(t).expect("size is tabulated") as Rank).collect();
    Space::from_ranks(f.universe.clone(), &values, ranks)
}

/// The ballean of an ultrametric space as a set family.
pub fn family_of(space: &Space) -> Result<SetFamily> {
    let family = enumerate_balls(space)?.into_iter().map(|b| b.members().to_vec()).collect();
    SetFamily::new(space.points().to_vec(), family)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::validate;

    fn universe(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    fn family(names: &[&str], members: &[&[&str]]) -> SetFamily {
        let members: Vec<Vec<&str>> = members.iter().map(|m| m.to_vec()).collect();
        SetFamily::from_names(universe(names), &members).unwrap()
    }

    #[test]
    fn singletons_and_universe() {
        let f = family(&["a", "b", "c", "d"], &[&["a"], &["b"], &["c"], &["d"], &["a", "b", "c", "d"]]);
        let r = validate_family(&f);
        assert!(r.is_ballean);
        let s = reconstruct(&f).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let expected = if i == j { 0 } else { 3 };
                assert_eq!(s.dist(i, j), &Dist::from_integer(expected));
            }
        }
        assert!(family_of(&s).unwrap().same_members(&f));
    }

    #[test]
    fn crossing_pair_detected() {
        let f = family(&["a", "b", "c"], &[&["a"], &["b"], &["c"], &["a", "b"], &["b", "c"], &["a", "b", "c"]]);
        let r = validate_family(&f);
        assert!(!r.is_ballean);
        assert_eq!(r.crossing_pair, Some((vec![0, 1], vec![1, 2])));
        assert!(matches!(reconstruct(&f), Err(Error::InvalidFamily(_))));
    }

    #[test]
    fn missing_parts_reported() {
        let f = family(&["a", "b", "c"], &[&["a"], &["b"], &["a", "b", "c"]]);
        let r = validate_family(&f);
        assert!(!r.is_ballean);
        assert_eq!(r.missing_singletons, vec![2]);
        assert!(!r.missing_universe);

        let f = family(&["a", "b", "c"], &[&["a"], &["b"], &["c"]]);
        let r = validate_family(&f);
        assert!(r.missing_universe && !r.is_ballean);
    }

    #[test]
    fn nested_family_reconstruction() {
        let f = family(&["a", "b", "c"], &[&["a"], &["b"], &["c"], &["a", "b"], &["a", "b", "c"]]);
        let s = reconstruct(&f).unwrap();
        assert_eq!(s.dist(0, 1), &Dist::from_integer(1));
        assert_eq!(s.dist(0, 2), &Dist::from_integer(2));
        assert_eq!(s.dist(1, 2), &Dist::from_integer(2));
        assert!(validate(&s).is_ultrametric);
        assert!(family_of(&s).unwrap().same_members(&f));
    }

    #[test]
    fn one_point_family() {
        let f = family(&["a"], &[&["a"]]);
        let s = reconstruct(&f).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(family_of(&s).unwrap(), f);
    }

    #[test]
    fn construction_errors() {
        assert!(SetFamily::new(vec![], vec![]).is_err());
        assert!(SetFamily::new(universe(&["a"]), vec![vec![]]).is_err());
        assert!(SetFamily::new(universe(&["a"]), vec![vec![1]]).is_err());
        assert!(SetFamily::new(universe(&["a", "b"]), vec![vec![0, 1], vec![1, 0]]).is_err());
        assert!(SetFamily::new(universe(&["a", "b"]), vec![vec![0, 0]]).is_err());
        assert!(SetFamily::from_names(universe(&["a"]), &[vec!["z"]]).is_err());
    }
}

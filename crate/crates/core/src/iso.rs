//! Canonical forms of rooted trees and isometry of ultrametric spaces.
//!
//! The encoding is AHU-style: a vertex encodes as `(` + optional `label:` +
//! the sorted encodings of its children + `)`. Labels are written as reduced
//! fractions, so equal encodings mean equal labels. Leaf names never enter
//! the encoding.

use std::fmt;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::rooted::RootedTree;
use crate::space::Space;
use crate::tree::build_tree;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CanonicalForm {
    encoding: String,
    labeled: bool,
}

impl CanonicalForm {
    pub fn encoding(&self) -> &str {
        &self.encoding
    }

    pub fn is_labeled(&self) -> bool {
        self.labeled
    }

    /// SHA-256 of the encoding, hex.
    pub fn digest(&self) -> String {
        hex::encode(Sha256::digest(self.encoding.as_bytes()))
    }
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.encoding)
    }
}

pub fn canonical_form(tree: &RootedTree, labeled: bool) -> Result<CanonicalForm> {
    let mut codes: Vec<String> = vec![String::new(); tree.len()];
    for u in tree.post_order() {
        let mut kids: Vec<String> = tree.children(u).iter().map(|&c| std::mem::take(&mut codes[c])).collect();
        kids.sort_unstable();
        let mut code = String::with_capacity(2 + kids.iter().map(String::len).sum::<usize>());
        code.push('(');
        if labeled {
            let label = tree.label(u).ok_or(Error::UnlabeledTree(u))?;
            code.push_str(&label.to_fraction_string());
            code.push(':');
        }
        kids.iter().for_each(|k| code.push_str(k));
        code.push(')');
        codes[u] = code;
    }
    Ok(CanonicalForm { encoding: std::mem::take(&mut codes[tree.root()]), labeled })
}

pub fn is_isomorphic(t1: &RootedTree, t2: &RootedTree, labeled: bool) -> Result<bool> {
    let a = canonical_form(t1, labeled)?;
    let b = canonical_form(t2, labeled)?;
    Ok(a == b)
}

/// Two finite ultrametric spaces are isometric exactly when their
/// representing trees are isomorphic as labeled rooted trees.
pub fn is_isometric(s1: &Space, s2: &Space) -> Result<bool> {
    let t1 = build_tree(s1)?.to_rooted();
    let t2 = build_tree(s2)?.to_rooted();
    is_isomorphic(&t1, &t2, true)
}

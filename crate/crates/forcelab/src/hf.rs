//! Canonical hereditarily finite sets.
//!
//! Every [`HfSet`] is kept in canonical form: children strictly increasing
//! under the Ackermann order, duplicates removed. Structural equality on
//! canonical forms therefore coincides with extensional set equality.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

/// A hereditarily finite set in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HfSet {
    children: Vec<HfSet>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HfError {
    /// The Ackermann code does not fit in 128 bits.
    #[error("Ackermann code exceeds 128 bits; instance too large")]
    CodeOverflow,
    #[error("enumeration cap exceeded: {0}")]
    CapExceeded(String),
}

/// Parse failure for braces literals, with the byte offset of the problem.
#[derive(Debug, Error, PartialEq, Eq)]
#[error("{msg} at offset {pos}")]
pub struct HfParseError {
    pub pos: usize,
    pub msg: &'static str,
}

impl HfSet {
    pub fn empty() -> Self {
        HfSet { children: Vec::new() }
    }

    /// Builds the canonical set with the given children (sorted, deduplicated).
    pub fn from_children(mut children: Vec<HfSet>) -> Self {
        children.sort();
        children.dedup();
        HfSet { children }
    }

    pub fn children(&self) -> &[HfSet] {
        &self.children
    }

    pub fn is_empty(&self) -> bool {
        self.children.is_empty()
    }

    pub fn card(&self) -> usize {
        self.children.len()
    }

    /// Membership test; canonical form makes this a binary search.
    pub fn contains(&self, x: &HfSet) -> bool {
        self.children.binary_search(x).is_ok()
    }

    /// Von Neumann rank: 0 for the empty set, else 1 + max child rank.
    pub fn rank(&self) -> u32 {
        self.children.iter().map(|c| c.rank() + 1).max().unwrap_or(0)
    }

    /// True iff every element of an element is an element.
    pub fn is_transitive(&self) -> bool {
        self.children
            .iter()
            .all(|c| c.children.iter().all(|g| self.contains(g)))
    }

    /// `code(x) = sum over y in x of 2^code(y)`; injective on canonical forms.
    pub fn ackermann_code(&self) -> Result<u128, HfError> {
        let mut code: u128 = 0;
        for c in &self.children {
            let cc = c.ackermann_code()?;
            if cc >= 128 {
                return Err(HfError::CodeOverflow);
            }
            code = code
                .checked_add(1u128 << cc)
                .ok_or(HfError::CodeOverflow)?;
        }
        Ok(code)
    }

    /// All hereditary elements (the transitive closure of the element set).
    pub fn closure(&self) -> BTreeSet<HfSet> {
        let mut acc = BTreeSet::new();
        fn walk(x: &HfSet, acc: &mut BTreeSet<HfSet>) {
            for c in x.children() {
                if acc.insert(c.clone()) {
                    walk(c, acc);
                }
            }
        }
        walk(self, &mut acc);
        acc
    }

    /// Size of the transitive closure. The empty set counts as size 1, so a
    /// size bound of 0 excludes everything.
    pub fn closure_size(&self) -> usize {
        self.closure().len().max(1)
    }
}

impl PartialOrd for HfSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for HfSet {
    /// Ackermann order, computed structurally: codes are binary numbers whose
    /// set bits are the child codes, so comparing the descending child
    /// sequences lexicographically compares the codes.
    fn cmp(&self, other: &Self) -> Ordering {
        let mut a = self.children.iter().rev();
        let mut b = other.children.iter().rev();
        loop {
            match (a.next(), b.next()) {
                (None, None) => return Ordering::Equal,
                (None, Some(_)) => return Ordering::Less,
                (Some(_), None) => return Ordering::Greater,
                (Some(x), Some(y)) => match x.cmp(y) {
                    Ordering::Equal => continue,
                    o => return o,
                },
            }
        }
    }
}

impl fmt::Display for HfSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, c) in self.children.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "}}")
    }
}

/// Parses a braces literal: `set := "{" (set ("," set)*)? "}"`.
/// Whitespace-insensitive; duplicates in the literal are merged.
pub fn parse_hf(text: &str) -> Result<HfSet, HfParseError> {
    let bytes = text.as_bytes();
    let mut pos = 0usize;
    let set = parse_set(bytes, &mut pos)?;
    skip_ws(bytes, &mut pos);
    if pos != bytes.len() {
        return Err(HfParseError { pos, msg: "trailing input after set literal" });
    }
    Ok(set)
}

fn skip_ws(bytes: &[u8], pos: &mut usize) {
    while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
        *pos += 1;
    }
}

fn parse_set(bytes: &[u8], pos: &mut usize) -> Result<HfSet, HfParseError> {
    skip_ws(bytes, pos);
    if *pos >= bytes.len() || bytes[*pos] != b'{' {
        return Err(HfParseError { pos: *pos, msg: "expected '{'" });
    }
    *pos += 1;
    let mut children = Vec::new();
    skip_ws(bytes, pos);
    if *pos < bytes.len() && bytes[*pos] == b'}' {
        *pos += 1;
        return Ok(HfSet::empty());
    }
    loop {
        children.push(parse_set(bytes, pos)?);
        skip_ws(bytes, pos);
        match bytes.get(*pos) {
            Some(b',') => {
                *pos += 1;
            }
            Some(b'}') => {
                *pos += 1;
                return Ok(HfSet::from_children(children));
            }
            Some(_) => {
                return Err(HfParseError { pos: *pos, msg: "expected ',' or '}'" })
            }
            None => return Err(HfParseError { pos: *pos, msg: "unbalanced braces" }),
        }
    }
}

/// All transitive HF sets of rank at most `max_rank` whose transitive closure
/// has at most `max_size` elements, in Ackermann order.
pub fn enumerate_transitive_sets(
    max_rank: u32,
    max_size: usize,
) -> Result<Vec<HfSet>, HfError> {
    if max_rank > 4 {
        return Err(HfError::CapExceeded(format!(
            "max_rank {max_rank} > 4 would enumerate more than 2^65536 sets"
        )));
    }
    // Universe of possible children: all sets of rank < max_rank.
    let mut universe = vec![HfSet::empty()];
    for _ in 1..max_rank {
        universe = power_list(&universe);
    }
    let candidates = if max_rank == 0 {
        vec![HfSet::empty()]
    } else {
        power_list(&universe)
    };
    let mut out: Vec<HfSet> = candidates
        .into_iter()
        .filter(|x| x.is_transitive() && x.closure_size() <= max_size)
        .collect();
    out.sort();
    out.dedup();
    Ok(out)
}

/// All subsets of the given (deduplicated) list, as canonical sets.
fn power_list(universe: &[HfSet]) -> Vec<HfSet> {
    assert!(universe.len() <= 16);
    let mut out = Vec::with_capacity(1 << universe.len());
    for mask in 0u32..(1 << universe.len()) {
        let children: Vec<HfSet> = universe
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, s)| s.clone())
            .collect();
        out.push(HfSet::from_children(children));
    }
    out
}

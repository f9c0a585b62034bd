//! Plane subsets as 8-bit masks, with lexicographic ranks for sizes 3, 4 and 5.

use std::sync::OnceLock;

/// A set of planes; bit `i` stands for plane `i + 1`.
pub type PlaneSet = u8;

pub struct SubsetIndex {
    /// Masks in lexicographic order of their ascending index tuples.
    pub masks: Vec<PlaneSet>,
    /// Rank of each mask, or `u8::MAX` for masks of another size.
    pub rank: [u8; 256],
}

fn build(k: u32) -> SubsetIndex {
    let mut tuples: Vec<Vec<u8>> = (0u16..256)
        .map(|m| m as u8)
        .filter(|m| m.count_ones() == k)
        .map(|m| (0..8).filter(|i| m >> i & 1 == 1).collect())
        .collect();
    tuples.sort();
    let masks: Vec<PlaneSet> = tuples
        .iter()
        .map(|t| t.iter().fold(0u8, |m, &i| m | 1 << i))
        .collect();
    let mut rank = [u8::MAX; 256];
    for (r, &m) in masks.iter().enumerate() {
        rank[m as usize] = r as u8;
    }
    SubsetIndex { masks, rank }
}

pub fn triples() -> &'static SubsetIndex {
    static T: OnceLock<SubsetIndex> = OnceLock::new();
    T.get_or_init(|| build(3))
}

pub fn quads() -> &'static SubsetIndex {
    static Q: OnceLock<SubsetIndex> = OnceLock::new();
    Q.get_or_init(|| build(4))
}

pub fn quints() -> &'static SubsetIndex {
    static P: OnceLock<SubsetIndex> = OnceLock::new();
    P.get_or_init(|| build(5))
}

pub fn members(m: PlaneSet) -> Vec<usize> {
    (0..8).filter(|i| m >> i & 1 == 1).collect()
}

/// Renders as concatenated 1-based digits, e.g. `1256`.
pub fn digits(m: PlaneSet) -> String {
    members(m)
        .iter()
        .map(|i| char::from(b'1' + *i as u8))
        .collect()
}

/// Parses concatenated 1-based digits in any order; rejects repeats.
pub fn parse_digits(s: &str) -> Option<PlaneSet> {
    let mut m = 0u8;
    for c in s.trim().chars() {
        let d = c.to_digit(10)?;
        if !(1..=8).contains(&d) {
            return None;
        }
        let bit = 1u8 << (d - 1);
        if m & bit != 0 {
            return None;
        }
        m |= bit;
    }
    Some(m)
}

pub fn from_indices(ix: &[usize]) -> PlaneSet {
    ix.iter().fold(0u8, |m, &i| m | 1 << i)
}

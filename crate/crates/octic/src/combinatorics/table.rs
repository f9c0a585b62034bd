//! Incidence tables: sets of concurrent plane quadruples.

use std::cmp::Ordering;
use std::fmt;

use serde::Serialize;

use super::perm::Perm;
use super::subsets::{digits, parse_digits, quads, PlaneSet};

/// A set of 4-subsets of the planes, stored as a bitset over quad ranks.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct IncidenceTable {
    bits: u128,
}

impl IncidenceTable {
    pub const EMPTY: IncidenceTable = IncidenceTable { bits: 0 };

    pub fn full() -> Self {
        IncidenceTable {
            bits: (1u128 << 70) - 1,
        }
    }

    pub fn from_bits(bits: u128) -> Self {
        IncidenceTable {
            bits: bits & ((1u128 << 70) - 1),
        }
    }

    pub fn bits(&self) -> u128 {
        self.bits
    }

    pub fn from_masks<I: IntoIterator<Item = PlaneSet>>(it: I) -> Self {
        let idx = quads();
        let mut bits = 0u128;
        for m in it {
            let r = idx.rank[m as usize];
            assert!(r != u8::MAX, "mask {m:#010b} is not a quadruple");
            bits |= 1u128 << r;
        }
        IncidenceTable { bits }
    }

    /// Parses a list of digit strings such as `["1234", "1256"]`.
    pub fn parse_list<S: AsRef<str>>(items: &[S]) -> Option<Self> {
        let mut masks = Vec::new();
        for s in items {
            let m = parse_digits(s.as_ref())?;
            if m.count_ones() != 4 {
                return None;
            }
            masks.push(m);
        }
        Some(Self::from_masks(masks))
    }

    pub fn contains(&self, m: PlaneSet) -> bool {
        let r = quads().rank[m as usize];
        r != u8::MAX && self.bits >> r & 1 == 1
    }

    pub fn insert(&mut self, m: PlaneSet) {
        let r = quads().rank[m as usize];
        assert!(r != u8::MAX);
        self.bits |= 1u128 << r;
    }

    pub fn remove(&mut self, m: PlaneSet) {
        let r = quads().rank[m as usize];
        if r != u8::MAX {
            self.bits &= !(1u128 << r);
        }
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.bits & !other.bits == 0
    }

    /// Quads in lexicographic order.
    pub fn masks(&self) -> Vec<PlaneSet> {
        let idx = quads();
        let mut out = Vec::with_capacity(self.len());
        let mut b = self.bits;
        while b != 0 {
            let r = b.trailing_zeros() as usize;
            out.push(idx.masks[r]);
            b &= b - 1;
        }
        out
    }

    pub fn relabel(&self, p: &Perm) -> Self {
        Self::from_masks(self.masks().into_iter().map(|m| p.apply_set(m)))
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.masks().into_iter().map(digits).collect()
    }
}

/// Lexicographic order on the sorted quad sequences; a strict prefix is smaller.
impl Ord for IncidenceTable {
    fn cmp(&self, other: &Self) -> Ordering {
        let a = self.masks();
        let b = other.masks();
        let idx = quads();
        for (x, y) in a.iter().zip(&b) {
            match idx.rank[*x as usize].cmp(&idx.rank[*y as usize]) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        a.len().cmp(&b.len())
    }
}

impl PartialOrd for IncidenceTable {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for IncidenceTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_strings().join(", "))
    }
}

impl fmt::Debug for IncidenceTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

impl Serialize for IncidenceTable {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

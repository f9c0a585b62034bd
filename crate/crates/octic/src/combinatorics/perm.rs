//! Permutations of the eight planes.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use super::subsets::PlaneSet;

/// One-line form: `images[i]` is the image of plane `i` (0-based).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    images: [u8; 8],
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid permutation `{0}`")]
pub struct PermParseError(pub String);

impl Perm {
    pub const IDENTITY: Perm = Perm {
        images: [0, 1, 2, 3, 4, 5, 6, 7],
    };

    pub fn from_images(images: [u8; 8]) -> Option<Perm> {
        let mut seen = 0u8;
        for &i in &images {
            if i >= 8 || seen >> i & 1 == 1 {
                return None;
            }
            seen |= 1 << i;
        }
        Some(Perm { images })
    }

    pub fn images(&self) -> [u8; 8] {
        self.images
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i] as usize
    }

    pub fn apply_set(&self, m: PlaneSet) -> PlaneSet {
        let mut out = 0u8;
        let mut bits = m;
        while bits != 0 {
            let i = bits.trailing_zeros() as usize;
            out |= 1 << self.images[i];
            bits &= bits - 1;
        }
        out
    }

    /// `(self * other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Perm) -> Perm {
        Perm {
            images: std::array::from_fn(|i| self.images[other.images[i] as usize]),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut images = [0u8; 8];
        for (i, &j) in self.images.iter().enumerate() {
            images[j as usize] = i as u8;
        }
        Perm { images }
    }

    pub fn order(&self) -> usize {
        let mut p = *self;
        let mut k = 1;
        while p != Perm::IDENTITY {
            p = p.compose(self);
            k += 1;
        }
        k
    }

    /// Cycles with fixed points omitted, each starting at its smallest element.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = [false; 8];
        let mut out = Vec::new();
        for s in 0..8 {
            if seen[s] {
                continue;
            }
            let mut cyc = vec![s];
            seen[s] = true;
            let mut j = self.apply(s);
            while j != s {
                seen[j] = true;
                cyc.push(j);
                j = self.apply(j);
            }
            if cyc.len() > 1 {
                out.push(cyc);
            }
        }
        out
    }

    /// Parses cycle notation: `(126834)(57)`, `(2,5)(3,7)`, `((1, 5), (3, 6))` or `()`.
    pub fn parse_cycles(s: &str) -> Result<Perm, PermParseError> {
        let err = || PermParseError(s.to_string());
        let mut t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        while t.starts_with("((") && t.ends_with("))") {
            t = t[1..t.len() - 1].to_string();
        }
        let mut images: [u8; 8] = std::array::from_fn(|i| i as u8);
        let mut moved = 0u8;
        let mut rest = t.as_str();
        while !rest.is_empty() {
            rest = rest.strip_prefix(',').unwrap_or(rest);
            let body = rest.strip_prefix('(').ok_or_else(err)?;
            let end = body.find(')').ok_or_else(err)?;
            let inner = &body[..end];
            rest = &body[end + 1..];
            let elems: Vec<usize> = if inner.contains(',') {
                inner
                    .split(',')
                    .map(|x| x.parse::<usize>().map_err(|_| err()))
                    .collect::<Result<_, _>>()?
            } else {
                inner
                    .chars()
                    .map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(err))
                    .collect::<Result<_, _>>()?
            };
            for (k, &e) in elems.iter().enumerate() {
                if !(1..=8).contains(&e) || moved >> (e - 1) & 1 == 1 {
                    return Err(err());
                }
                moved |= 1 << (e - 1);
                images[e - 1] = (elems[(k + 1) % elems.len()] - 1) as u8;
            }
        }
        Perm::from_images(images).ok_or_else(err)
    }

    /// All 8! permutations in lexicographic order of their one-line forms.
    pub fn all() -> &'static [Perm] {
        static ALL: std::sync::OnceLock<Vec<Perm>> = std::sync::OnceLock::new();
        ALL.get_or_init(|| {
            let mut out = Vec::with_capacity(40320);
            let mut a: [u8; 8] = std::array::from_fn(|i| i as u8);
            loop {
                out.push(Perm { images: a });
                // next lexicographic permutation
                let Some(i) = (0..7).rev().find(|&i| a[i] < a[i + 1]) else {
                    break;
                };
                let j = (i + 1..8).rev().find(|&j| a[j] > a[i]).unwrap();
                a.swap(i, j);
                a[i + 1..].reverse();
            }
            out
        })
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            write!(f, "(")?;
            for i in c {
                write!(f, "{}", i + 1)?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Perm {
    type Err = PermParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Perm::parse_cycles(s)
    }
}

impl Serialize for Perm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

//! Minimal incidence tables under relabeling of the planes.

use std::sync::OnceLock;

use rayon::prelude::*;
use serde::Serialize;

use super::census::DerivedIncidence;
use super::perm::Perm;
use super::subsets::{quads, quints, triples};
use super::table::IncidenceTable;

/// For every permutation (in `Perm::all()` order), where it sends each subset rank.
pub(crate) struct RankMaps {
    pub quad: Vec<[u8; 70]>,
    pub triple: Vec<[u8; 56]>,
    pub quint: Vec<[u8; 56]>,
}

pub(crate) fn rank_maps() -> &'static RankMaps {
    static MAPS: OnceLock<RankMaps> = OnceLock::new();
    MAPS.get_or_init(|| {
        let (q, t, p) = (quads(), triples(), quints());
        let all = Perm::all();
        RankMaps {
            quad: all
                .iter()
                .map(|s| std::array::from_fn(|r| q.rank[s.apply_set(q.masks[r]) as usize]))
                .collect(),
            triple: all
                .iter()
                .map(|s| std::array::from_fn(|r| t.rank[s.apply_set(t.masks[r]) as usize]))
                .collect(),
            quint: all
                .iter()
                .map(|s| std::array::from_fn(|r| p.rank[s.apply_set(p.masks[r]) as usize]))
                .collect(),
        }
    })
}

fn set_ranks(mut bits: u128) -> Vec<usize> {
    let mut out = Vec::with_capacity(bits.count_ones() as usize);
    while bits != 0 {
        out.push(bits.trailing_zeros() as usize);
        bits &= bits - 1;
    }
    out
}

/// Image bitset with rank `r` stored at bit `width - 1 - r`, so that for sets of
/// equal size a larger key is a lexicographically smaller sorted sequence.
fn reversed_key<const N: usize>(ranks: &[usize], map: &[u8; N]) -> u128 {
    ranks
        .iter()
        .fold(0u128, |k, &r| k | 1u128 << (N - 1 - map[r] as usize))
}

fn unreverse<const N: usize>(key: u128) -> u128 {
    set_ranks(key)
        .into_iter()
        .fold(0u128, |b, i| b | 1u128 << (N - 1 - i))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CanonicalForm {
    pub minimal: IncidenceTable,
    /// The lexicographically first permutation sending the input to `minimal`.
    pub witness: Perm,
}

/// Index of the first permutation maximizing `key`, scanning in parallel.
fn best_perm<K: Ord + Copy + Send>(key: impl Fn(usize) -> K + Sync) -> (usize, K) {
    (0..Perm::all().len())
        .into_par_iter()
        .with_min_len(2048)
        .map(|i| (i, key(i)))
        .reduce_with(|a, b| {
            if b.1 > a.1 || (b.1 == a.1 && b.0 < a.0) {
                b
            } else {
                a
            }
        })
        .expect("S8 is nonempty")
}

pub fn canonical_form(table: &IncidenceTable) -> CanonicalForm {
    let maps = rank_maps();
    let ranks = set_ranks(table.bits());
    let (i, key) = best_perm(|i| reversed_key(&ranks, &maps.quad[i]));
    CanonicalForm {
        minimal: IncidenceTable::from_bits(unreverse::<70>(key)),
        witness: Perm::all()[i],
    }
}

/// Whether relabeling by `p` produces the minimal table.
pub fn attains_minimum(table: &IncidenceTable, minimal: &IncidenceTable, p: &Perm) -> bool {
    table.relabel(p) == *minimal
}

/// Canonical form of a whole structure: quads first, then triples, then quints.
pub fn canonical_key(
    table: &IncidenceTable,
    derived: &DerivedIncidence,
) -> (IncidenceTable, DerivedIncidence, Perm) {
    let maps = rank_maps();
    let qr = set_ranks(table.bits());
    let tr = set_ranks(derived.triples as u128);
    let pr = set_ranks(derived.quints as u128);
    let (i, (qk, tk, pk)) = best_perm(|i| {
        (
            reversed_key(&qr, &maps.quad[i]),
            reversed_key(&tr, &maps.triple[i]),
            reversed_key(&pr, &maps.quint[i]),
        )
    });
    (
        IncidenceTable::from_bits(unreverse::<70>(qk)),
        DerivedIncidence {
            triples: unreverse::<56>(tk) as u64,
            quints: unreverse::<56>(pk) as u64,
        },
        Perm::all()[i],
    )
}

/// Relabels a derived structure by a permutation.
pub fn relabel_derived(d: &DerivedIncidence, p: &Perm) -> DerivedIncidence {
    let (t, q) = (triples(), quints());
    let mut out = DerivedIncidence::default();
    for r in set_ranks(d.triples as u128) {
        out.triples |= 1 << t.rank[p.apply_set(t.masks[r]) as usize];
    }
    for r in set_ranks(d.quints as u128) {
        out.quints |= 1 << q.rank[p.apply_set(q.masks[r]) as usize];
    }
    out
}

/// All permutations fixing the table, in lexicographic order.
pub fn stabilizer(table: &IncidenceTable) -> Vec<Perm> {
    let maps = rank_maps();
    let ranks = set_ranks(table.bits());
    let target = table.bits();
    let all = Perm::all();
    (0..all.len())
        .into_par_iter()
        .with_min_len(2048)
        .filter(|&i| ranks.iter().all(|&r| target >> maps.quad[i][r] & 1 == 1))
        .map(|i| all[i])
        .collect()
}

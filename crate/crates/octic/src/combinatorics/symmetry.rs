//! Stabilizers of incidence tables and the dictionary of named group types.

use std::collections::{BTreeMap, HashSet, VecDeque};
use std::sync::OnceLock;

use serde::Serialize;

use super::canon::stabilizer;
use super::perm::Perm;
use super::table::IncidenceTable;

/// Order, element-order multiset and commutativity; separates the named types below.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct GroupProfile {
    pub order: usize,
    pub element_orders: BTreeMap<usize, usize>,
    pub abelian: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SymmetryGroup {
    pub order: usize,
    pub generators: Vec<Perm>,
    pub profile: GroupProfile,
    pub name: Option<&'static str>,
}

/// Permutations on `n` points, images listed in one-line form.
type Points = Vec<u8>;

fn compose(a: &Points, b: &Points) -> Points {
    b.iter().map(|&x| a[x as usize]).collect()
}

fn closure(gens: &[Points]) -> Vec<Points> {
    let n = gens.first().map_or(1, |g| g.len());
    let id: Points = (0..n as u8).collect();
    let mut seen: HashSet<Points> = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = compose(g, &x);
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    let mut v: Vec<Points> = seen.into_iter().collect();
    v.sort();
    v
}

fn element_order(x: &Points) -> usize {
    let mut y = x.clone();
    let mut k = 1;
    while y.iter().enumerate().any(|(i, &v)| i as u8 != v) {
        y = compose(x, &y);
        k += 1;
    }
    k
}

fn profile_of(elements: &[Points]) -> GroupProfile {
    let mut element_orders = BTreeMap::new();
    for e in elements {
        *element_orders.entry(element_order(e)).or_insert(0) += 1;
    }
    let abelian = elements
        .iter()
        .all(|a| elements.iter().all(|b| compose(a, b) == compose(b, a)));
    GroupProfile {
        order: elements.len(),
        element_orders,
        abelian,
    }
}

fn cycles(n: usize, cs: &[&[u8]]) -> Points {
    let mut p: Points = (0..n as u8).collect();
    for c in cs {
        for (k, &x) in c.iter().enumerate() {
            p[x as usize] = c[(k + 1) % c.len()];
        }
    }
    p
}

/// Automorphisms of `C2 x Q8`, acting on its 16 elements.
fn aut_c2_q8() -> Vec<Points> {
    // Element (c, s, u): z^c * (-1)^s * u with u in {1, i, j, k}.
    type E = (u8, u8, u8);
    fn qmul(u: u8, v: u8) -> (u8, u8) {
        // Returns (sign, unit) for u*v in Q8.
        const T: [[(u8, u8); 4]; 4] = [
            [(0, 0), (0, 1), (0, 2), (0, 3)],
            [(0, 1), (1, 0), (0, 3), (1, 2)],
            [(0, 2), (1, 3), (1, 0), (0, 1)],
            [(0, 3), (0, 2), (1, 1), (1, 0)],
        ];
        T[u as usize][v as usize]
    }
    fn mul(a: E, b: E) -> E {
        let (s, u) = qmul(a.2, b.2);
        (a.0 ^ b.0, a.1 ^ b.1 ^ s, u)
    }
    fn pw(a: E, k: u8) -> E {
        (0..k).fold((0, 0, 0), |acc, _| mul(acc, a))
    }
    let idx = |e: E| (e.0 * 8 + e.1 * 4 + e.2) as usize;
    let elems: Vec<E> = (0..16u8).map(|x| (x / 8, x / 4 % 2, x % 4)).collect();
    let (z, i, j) = ((1, 0, 0), (0, 0, 1), (0, 0, 2));
    let word = |a: u8, b: u8, c: u8, g: [E; 3]| mul(mul(pw(g[0], a), pw(g[1], b)), pw(g[2], c));
    let mut out = Vec::new();
    for &zi in &elems {
        for &ii in &elems {
            for &ji in &elems {
                let ok = pw(zi, 2) == (0, 0, 0)
                    && mul(zi, ii) == mul(ii, zi)
                    && mul(zi, ji) == mul(ji, zi)
                    && pw(ii, 4) == (0, 0, 0)
                    && pw(ii, 2) == pw(ji, 2)
                    && mul(mul(pw(ji, 3), ii), ji) == pw(ii, 3);
                if !ok {
                    continue;
                }
                let mut img = vec![0u8; 16];
                for a in 0..2 {
                    for b in 0..4 {
                        for c in 0..2 {
                            img[idx(word(a, b, c, [z, i, j]))] =
                                idx(word(a, b, c, [zi, ii, ji])) as u8;
                        }
                    }
                }
                if img.iter().copied().collect::<HashSet<_>>().len() == 16 {
                    out.push(img);
                }
            }
        }
    }
    out
}

/// Upper unitriangular 4x4 matrices over F2, acting on F2^4.
fn ut42_generators() -> Vec<Points> {
    (0..3)
        .map(|r| {
            // I + E_{r,r+1}: adds coordinate r+1 into coordinate r.
            (0..16u8).map(|v| v ^ ((v >> (r + 1) & 1) << r)).collect()
        })
        .collect()
}

/// Named model groups, in the order the dictionary reports them.
pub fn model_groups() -> &'static [(&'static str, GroupProfile)] {
    static MODELS: OnceLock<Vec<(&'static str, GroupProfile)>> = OnceLock::new();
    MODELS.get_or_init(|| {
        let hol: Vec<Points> = vec![
            (0..8u8).map(|x| (x + 1) % 8).collect(),
            (0..8u8).map(|x| (3 * x) % 8).collect(),
            (0..8u8).map(|x| (5 * x) % 8).collect(),
        ];
        let gens: Vec<(&'static str, Vec<Points>)> = vec![
            ("1", vec![cycles(1, &[])]),
            ("C2", vec![cycles(2, &[&[0, 1]])]),
            ("C2^2", vec![cycles(4, &[&[0, 1]]), cycles(4, &[&[2, 3]])]),
            (
                "C2^3",
                vec![
                    cycles(6, &[&[0, 1]]),
                    cycles(6, &[&[2, 3]]),
                    cycles(6, &[&[4, 5]]),
                ],
            ),
            ("C4", vec![cycles(4, &[&[0, 1, 2, 3]])]),
            ("C6", vec![cycles(6, &[&[0, 1, 2, 3, 4, 5]])]),
            ("C8", vec![cycles(8, &[&[0, 1, 2, 3, 4, 5, 6, 7]])]),
            ("S3", vec![cycles(3, &[&[0, 1]]), cycles(3, &[&[0, 1, 2]])]),
            (
                "D4",
                vec![cycles(4, &[&[0, 1, 2, 3]]), cycles(4, &[&[1, 3]])],
            ),
            (
                "S4",
                vec![cycles(4, &[&[0, 1, 2, 3]]), cycles(4, &[&[0, 1]])],
            ),
            (
                "D6",
                vec![
                    cycles(6, &[&[0, 1, 2, 3, 4, 5]]),
                    cycles(6, &[&[1, 5], &[2, 4]]),
                ],
            ),
            (
                "D4xC2",
                vec![
                    cycles(6, &[&[0, 1, 2, 3]]),
                    cycles(6, &[&[1, 3]]),
                    cycles(6, &[&[4, 5]]),
                ],
            ),
            (
                "S3xC2^2",
                vec![
                    cycles(7, &[&[0, 1]]),
                    cycles(7, &[&[0, 1, 2]]),
                    cycles(7, &[&[3, 4]]),
                    cycles(7, &[&[5, 6]]),
                ],
            ),
            ("Hol(C8)", hol),
            ("UT(4,2)", ut42_generators()),
        ];
        let mut out: Vec<(&'static str, GroupProfile)> = gens
            .iter()
            .map(|(n, g)| (*n, profile_of(&closure(g))))
            .collect();
        out.push(("Aut(C2xQ8)", profile_of(&aut_c2_q8())));
        out
    })
}

pub fn name_for(profile: &GroupProfile) -> Option<&'static str> {
    let hits: Vec<_> = model_groups()
        .iter()
        .filter(|(_, p)| p == profile)
        .collect();
    match hits.as_slice() {
        [(n, _)] => Some(*n),
        _ => None,
    }
}

pub fn model_profile(name: &str) -> Option<&'static GroupProfile> {
    model_groups()
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, p)| p)
}

fn to_points(p: &Perm) -> Points {
    p.images().to_vec()
}

/// Order of the subgroup of S8 generated by `gens`.
pub fn generated_order(gens: &[Perm]) -> usize {
    if gens.is_empty() {
        return 1;
    }
    closure(&gens.iter().map(to_points).collect::<Vec<_>>()).len()
}

pub fn symmetry_group(table: &IncidenceTable) -> SymmetryGroup {
    let stab = stabilizer(table);
    let elements: Vec<Points> = stab.iter().map(to_points).collect();
    let profile = profile_of(&elements);
    // Greedy generating set, trying elements of large order first.
    let mut candidates = stab.clone();
    candidates.sort_by_key(|p| std::cmp::Reverse(p.order()));
    let mut generators = Vec::new();
    let mut generated: HashSet<Points> = HashSet::from([to_points(&Perm::IDENTITY)]);
    for p in &candidates {
        if generated.len() == stab.len() {
            break;
        }
        if !generated.contains(&to_points(p)) {
            generators.push(*p);
            generated = closure(&generators.iter().map(to_points).collect::<Vec<_>>())
                .into_iter()
                .collect();
        }
    }
    SymmetryGroup {
        order: stab.len(),
        generators,
        name: name_for(&profile),
        profile,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn model_profiles_are_distinct_with_expected_orders() {
        let m = model_groups();
        assert_eq!(m.len(), 16);
        let orders: Vec<usize> = m.iter().map(|(_, p)| p.order).collect();
        assert_eq!(
            orders,
            [1, 2, 4, 8, 4, 6, 8, 6, 8, 24, 12, 16, 24, 32, 64, 192]
        );
        for (i, a) in m.iter().enumerate() {
            for b in &m[i + 1..] {
                assert_ne!(a.1, b.1, "{} and {} collide", a.0, b.0);
            }
        }
    }

    #[test]
    fn stabilizer_of_twelve_point_table() {
        let t = IncidenceTable::parse_list(&[
            "1234", "1256", "1278", "1357", "1368", "1458", "2367", "2457", "2468", "3456", "3478",
            "5678",
        ])
        .unwrap();
        let g = symmetry_group(&t);
        assert_eq!(g.order, 192);
        assert_eq!(g.name, Some("Aut(C2xQ8)"));
        assert_eq!(generated_order(&g.generators), 192);
        for p in &g.generators {
            assert_eq!(t.relabel(p), t);
        }
    }

    #[test]
    fn empty_table_has_full_symmetry() {
        let g = symmetry_group(&IncidenceTable::EMPTY);
        assert_eq!(g.order, 40320);
        assert_eq!(g.name, None);
        assert_eq!(generated_order(&g.generators), 40320);
    }
}

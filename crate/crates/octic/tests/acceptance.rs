//! Acceptance suite: one pass/fail line per criterion, nonzero exit if any fails.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;

use octic::check::{check_cover, check_entry, CheckOptions, Diff};
use octic::combinatorics::census::{census, derive, euler_characteristic, Census};
use octic::combinatorics::subsets::{digits, quads};
use octic::combinatorics::symmetry::{model_groups, name_for};
use octic::combinatorics::{symmetry_group, IncidenceTable};
use octic::corpus::{self, CoverKind, MapKind};
use octic::enumerate::{closure, enumerate_classes, ClosureOutcome, Contradiction, EnumState};
use octic::family::{
    default_samples, equivalences, parse_cover_map, verify_cover_map, verify_parameter_map,
};
use octic::fibration::{fiber_model, kummer_partitions, match_fibers};
use octic::{Arrangement, FieldDesc, ParamPoint, Perm};

type Outcome = Result<(), String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn summarize(diffs: &[Diff]) -> Outcome {
    if diffs.is_empty() {
        return Ok(());
    }
    let shown: Vec<String> = diffs.iter().take(4).map(|d| d.to_string()).collect();
    Err(format!(
        "{} differences; {}",
        diffs.len(),
        shown.join(" | ")
    ))
}

/// Structural diffs of every entry, without self-maps and cover maps.
fn structural_diffs() -> &'static [Diff] {
    static D: std::sync::OnceLock<Vec<Diff>> = std::sync::OnceLock::new();
    D.get_or_init(|| {
        let opts = CheckOptions {
            selfmaps: false,
            covers: false,
            ..Default::default()
        };
        corpus::entries()
            .par_iter()
            .flat_map(|e| check_entry(e, &e.expected, &opts))
            .collect()
    })
}

fn diffs_where(pred: impl Fn(&str) -> bool) -> Vec<Diff> {
    structural_diffs()
        .iter()
        .filter(|d| pred(&d.field))
        .cloned()
        .collect()
}

const MATRIX: &str = "field rational\nparams\nplane 1 0 0 0\nplane 0 1 0 0\nplane 0 0 1 0\n\
plane 0 0 0 1\nplane 1 1 0 0\nplane 0 1 1 0\nplane 0 0 1 1\nplane A 0 0 B\n";

const PRINTED_MINORS: [&str; 70] = [
    "1", "0", "0", "-1", "B", "0", "-1", "1", "0", "0", "0", "0", "1", "-B", "B", "-1", "1", "0",
    "0", "0", "-1", "B", "-1", "B", "0", "-1", "1", "0", "1", "0", "0", "-1", "B", "-B", "B", "1",
    "0", "0", "-A", "0", "1", "-B", "0", "0", "-A", "1", "-1", "0", "0", "-A", "A", "1", "-B", "B",
    "-A", "-1", "0", "A", "0", "A", "0", "-1", "B", "-A", "A", "1", "-A", "A", "-A", "A-B",
];

fn minor_sequence() -> Outcome {
    let arr = Arrangement::parse(MATRIX).map_err(|e| e.to_string())?;
    let field = arr.field();
    let minors = arr.all_minors();
    let mut wrong = Vec::new();
    for ((q, got), printed) in minors.iter().zip(PRINTED_MINORS) {
        let want =
            octic::arrangement::expr::parse_expr(printed, field).map_err(|e| e.to_string())?;
        if got.clone() - want != octic::Form::zero(&octic::Scalar::one(field)) {
            wrong.push(format!("{}: {got} vs {printed}", digits(*q)));
        }
    }
    ensure(wrong.is_empty(), || {
        format!(
            "{} of 70 minors differ; first {}",
            wrong.len(),
            wrong[..3.min(wrong.len())].join(", ")
        )
    })
}

fn minimal_tables() -> Outcome {
    let with_minimal = corpus::entries()
        .iter()
        .filter(|e| e.expected.minimal.is_some())
        .count();
    ensure(with_minimal == corpus::entries().len(), || {
        format!("only {with_minimal} entries carry a minimal table")
    })?;
    summarize(&diffs_where(|f| f == "minimal" || f == "permutation"))
}

fn censuses() -> Outcome {
    summarize(&diffs_where(|f| {
        f.starts_with("points.") || f == "relations" || f == "l2"
    }))
}

fn census_of(label: &str) -> Result<Census, String> {
    let e = corpus::get(label).ok_or("missing entry")?;
    let t = e
        .arrangement
        .incidence_table(None)
        .map_err(|e| e.to_string())?;
    census(&t, &derive(&t)).map_err(|e| e.to_string())
}

fn euler_characteristics() -> Outcome {
    let e238 = euler_characteristic(&census_of("238")?);
    let e1 = euler_characteristic(&census_of("1")?);
    let empty = euler_characteristic(&Census::empty());
    ensure((e238, e1, empty) == (88, 140, 40), || {
        format!("got {e238}, {e1}, {empty}")
    })
}

fn symmetry() -> Outcome {
    summarize(&diffs_where(|f| f.starts_with("symmetry")))?;
    for (label, order) in [("238", 192), ("2", 8), ("8", 1)] {
        let e = corpus::get(label).ok_or("missing entry")?;
        let t = e
            .arrangement
            .incidence_table(None)
            .map_err(|e| e.to_string())?;
        let g = symmetry_group(&t);
        ensure(g.order == order, || {
            format!("Arr {label}: order {}", g.order)
        })?;
    }
    let models = model_groups();
    ensure(models.len() == 16, || {
        format!("{} model groups", models.len())
    })?;
    for (name, profile) in models {
        ensure(name_for(profile) == Some(name), || {
            format!("{name} is not recovered")
        })?;
    }
    let printed: BTreeSet<&str> = corpus::entries()
        .iter()
        .filter_map(|e| e.expected.symmetry.as_ref())
        .filter_map(|s| corpus::group_name_from_tex(&s.name))
        .collect();
    ensure(printed.len() == 16, || {
        format!("{} printed types", printed.len())
    })
}

fn fibrations() -> Outcome {
    let blocks: usize = corpus::entries()
        .iter()
        .map(|e| e.expected.fibration.len())
        .sum();
    ensure(blocks > 0, || "no printed fibration blocks".into())?;
    summarize(&diffs_where(|f| {
        f == "partitions" || f.starts_with("fibration")
    }))
}

fn random_point(rng: &mut StdRng, field: FieldDesc) -> ParamPoint {
    let a = rng.gen_range(-40i64..=40);
    let b = rng.gen_range(1i64..=25);
    ParamPoint::from_ints(a, b)
        .embed(field)
        .expect("rationals embed")
}

fn fiber_matching() -> Outcome {
    summarize(&diffs_where(|f| f.starts_with("matching")))?;
    let failures: Vec<String> = corpus::entries()
        .par_iter()
        .filter(|e| e.arrangement.is_parametric())
        .flat_map_iter(|e| {
            let fam = &e.arrangement;
            let generic = fam.incidence_table(None).expect("generic table");
            let mut rng = StdRng::seed_from_u64(0x0c71c ^ e.label.len() as u64);
            let mut out = Vec::new();
            let mut found = 0;
            for _ in 0..400 {
                if found == 10 {
                    break;
                }
                let at = random_point(&mut rng, fam.field());
                let Ok(member) = fam.specialize(&at) else {
                    continue;
                };
                let Ok(t) = member.incidence_table(None) else {
                    continue;
                };
                if t != generic || !member.validate(None).map(|v| v.valid).unwrap_or(false) {
                    continue;
                }
                found += 1;
                match kummer_partitions(&member) {
                    Ok(parts) => {
                        for p in parts {
                            let r = fiber_model(&member, &p)
                                .map_err(|e| e.to_string())
                                .and_then(|m| match_fibers(&m, &t).map_err(|e| e.to_string()));
                            if let Err(err) = r {
                                out.push(format!("Arr {} at {at}: {err}", e.label));
                            }
                        }
                    }
                    Err(err) => out.push(format!("Arr {} at {at}: {err}", e.label)),
                }
            }
            if found < 10 {
                out.push(format!("Arr {}: only {found} general samples", e.label));
            }
            out
        })
        .collect();
    ensure(failures.is_empty(), || {
        failures[..3.min(failures.len())].join(" | ")
    })
}

fn special_values() -> Outcome {
    let families = corpus::entries()
        .iter()
        .filter(|e| e.arrangement.is_parametric())
        .count();
    let printed = corpus::entries()
        .iter()
        .filter(|e| e.arrangement.is_parametric() && !e.expected.special.is_empty())
        .count();
    ensure(printed == families, || {
        format!("{printed} of {families} families have printed special values")
    })?;
    summarize(&diffs_where(|f| f == "special"))
}

fn galois() -> Outcome {
    let claim = |label: &str| {
        corpus::cover_claims()
            .iter()
            .find(|c| c.kind == CoverKind::Galois && c.label == label)
            .ok_or(format!("no Galois map for {label}"))
    };
    let arr = |label: &str| {
        corpus::get(label)
            .map(|e| e.arrangement.clone())
            .ok_or(format!("missing {label}"))
    };
    let a = arr("A")?;
    check_cover(claim("A")?, &a).map_err(|e| format!("A: {e}"))?;
    let conj_witnesses =
        |x: &Arrangement| equivalences(x, &x.conjugate(), None).map_err(|e| e.to_string());
    ensure(!conj_witnesses(&a)?.is_empty(), || "A: no witness".into())?;
    let b = arr("B")?;
    ensure(!conj_witnesses(&b)?.is_empty(), || "B: no witness".into())?;
    let c = arr("C")?;
    let wc = conj_witnesses(&c)?;
    ensure(wc.is_empty(), || format!("C: {} witnesses", wc.len()))?;
    let d = arr("D")?;
    check_cover(claim("D")?, &d).map_err(|e| format!("D: {e}"))
}

fn self_maps() -> Outcome {
    let claims = corpus::claims();
    let straight = claims
        .iter()
        .filter(|c| c.kind == MapKind::Straight)
        .count();
    let twisted = claims.len() - straight;
    ensure((straight, twisted) == (54, 32), || {
        format!("{straight} straight and {twisted} twisted rows")
    })?;
    let failures: Vec<String> = claims
        .par_iter()
        .filter_map(|c| {
            let fam = &corpus::get(&c.label)?.arrangement;
            let r = default_samples(fam, &c.l1, &c.l2, 3)
                .and_then(|s| verify_parameter_map(fam, &c.l1, &c.l2, &s));
            match r {
                Ok(r) if r.equivalent && r.kind == Some(c.kind) => None,
                Ok(r) => Some(format!(
                    "Arr {} ({}): claimed {}, found {:?}",
                    c.label, c.text, c.kind, r.kind
                )),
                Err(e) => Some(format!("Arr {} ({}): {e}", c.label, c.text)),
            }
        })
        .collect();
    let fam = corpus::get("2").ok_or("missing Arr 2")?.arrangement.clone();
    let one = octic::Scalar::one(FieldDesc::Rational);
    let swapped = fam.substitute_params(&octic::Form::var_b(&one), &octic::Form::var_a(&one));
    let map = parse_cover_map("B*z,B*y,B*x,A*t", "A*B*B*B", None, FieldDesc::Rational)
        .map_err(|e| e.to_string())?;
    let check = verify_cover_map(&fam, &swapped, &map).map_err(|e| e.to_string())?;
    let lambda = check.lambda.map(|l| l.to_string());
    let mut all = failures;
    if !check.holds || lambda.as_deref() != Some("A*A*B*B*B*B*B*B") {
        all.push(format!(
            "Arr 2 cover map: holds={} lambda={lambda:?}",
            check.holds
        ));
    }
    ensure(all.is_empty(), || {
        format!("{} failures; {}", all.len(), all.join(" | "))
    })
}

fn maximal_automorphisms() -> Outcome {
    let autos: Vec<_> = corpus::cover_claims()
        .iter()
        .filter(|c| c.kind == CoverKind::Automorphism)
        .collect();
    let labels: Vec<&str> = autos.iter().map(|c| c.label.as_str()).collect();
    ensure(labels == ["4", "13", "34", "72", "261"], || {
        format!("maps for {labels:?}")
    })?;
    for c in autos {
        let e = corpus::get(&c.label).ok_or("missing entry")?;
        check_cover(c, &e.arrangement).map_err(|err| format!("Arr {}: {err}", c.label))?;
    }
    Ok(())
}

fn random_state(rng: &mut StdRng, n: usize) -> EnumState {
    let mut s: EnumState = "T:{} Q:{} P:{}".parse().expect("empty state");
    for _ in 0..n {
        s.quads.insert(quads().masks[rng.gen_range(0..70)]);
    }
    s
}

fn enumeration() -> Outcome {
    let mut rng = StdRng::seed_from_u64(12);
    for _ in 0..300 {
        let n = rng.gen_range(1..=6);
        let s = random_state(&mut rng, n);
        if let ClosureOutcome::Closed(branches) = closure(&s) {
            for b in branches {
                ensure(s.is_substate(&b), || format!("{b} does not contain {s}"))?;
                ensure(closure(&b) == ClosureOutcome::Closed(vec![b]), || {
                    format!("closure of {b} moves")
                })?;
            }
        }
    }
    for _ in 0..300 {
        let n = rng.gen_range(0..4);
        let mut s = random_state(&mut rng, n);
        let a = rand::seq::index::sample(&mut rng, 8, 4).into_vec();
        let t1 = [a[0], a[1], a[2]].iter().fold(0u8, |m, &i| m | 1 << i);
        let t2 = [a[0], a[1], a[3]].iter().fold(0u8, |m, &i| m | 1 << i);
        s.add_triple(t1);
        s.add_triple(t2);
        ensure(
            closure(&s) == ClosureOutcome::Contradiction(Contradiction::TriplesShareTwo),
            || format!("{s} is not pruned"),
        )?;
    }
    let e3 = enumerate_classes(3, usize::MAX);
    let counts: Vec<usize> = e3.stats.iter().map(|s| s.new_classes).collect();
    // Brute-force counts from tests/oracles/enum_counts.py.
    ensure(counts == [1, 5, 12], || format!("class counts {counts:?}"))?;
    for d in 1..=3 {
        let a = enumerate_classes(d, usize::MAX);
        let b = enumerate_classes(d, usize::MAX);
        ensure(a.classes == b.classes, || {
            format!("depth {d} differs between runs")
        })?;
    }
    let pool: Vec<EnumState> = enumerate_classes(4, usize::MAX)
        .classes
        .keys()
        .map(|k| k.state(0))
        .collect();
    let cases: Vec<(EnumState, Perm)> = (0..1000)
        .map(|_| {
            let s = pool[rng.gen_range(0..pool.len())];
            (s, Perm::all()[rng.gen_range(0..40320)])
        })
        .collect();
    let bad = cases
        .par_iter()
        .filter(|(s, p)| {
            let t = s.relabel(p);
            let (ks, ws) = s.canonical();
            let (kt, wt) = t.canonical();
            ks != kt || s.relabel(&wt.inverse().compose(&ws)) != t
        })
        .count();
    ensure(bad == 0, || {
        format!("{bad} of 1000 duplicates not reconciled")
    })?;
    for (label, table) in corpus::canonical_tables() {
        let s = EnumState::from_table(table);
        ensure(s.is_closed(), || format!("Arr {label} is not closed"))?;
    }
    let _: &IncidenceTable = &pool[0].quads;
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("minor sequence", minor_sequence),
        ("minimal tables", minimal_tables),
        ("censuses and relations", censuses),
        ("Euler characteristics", euler_characteristics),
        ("symmetry groups", symmetry),
        ("elliptic fibrations", fibrations),
        ("fiber matching", fiber_matching),
        ("special values", special_values),
        ("Galois conjugates", galois),
        ("parameter self-maps", self_maps),
        ("maximal automorphisms", maximal_automorphisms),
        ("enumeration", enumeration),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(()) => println!("criterion {}: PASS {name}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of 12 criteria pass", 12 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

//! Acceptance criteria, one PASS/FAIL line each. Exits non-zero if any fails.

use std::process::Command;
use std::time::{Duration, Instant};

use cayley_maps::classify::{
    self, abelian_groups_up_to, affine_type_involutions, compare_dihedral, crt_lift_multipliers,
    cyclic_antibalanced_map, dihedral_balanced_map, elem_abelian_seeds, formula_count,
    search_space, triples_for, Execution,
};
use cayley_maps::graph::{self, SimpleGraph};
use cayley_maps::maps::{BalanceType, CayleyMap};
use cayley_maps::perms::{reflection_fixing_last, Permutation};
use cayley_maps::FiniteGroup;

type Outcome = Result<String, String>;

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Option<Duration>,
    check: fn() -> Outcome,
}

/// The groups and valencies searched by criteria 2 to 4.
fn searched_groups() -> Vec<(FiniteGroup, usize)> {
    let mut out: Vec<(FiniteGroup, usize)> =
        (1..=12).map(|n| (FiniteGroup::dihedral(n).unwrap(), 3)).collect();
    out.push((FiniteGroup::dihedral(11).unwrap(), 5));
    for p in [3, 5] {
        out.extend((2..=6).map(|n| (FiniteGroup::dicyclic(n).unwrap(), p)));
    }
    out.extend(abelian_groups_up_to(16).into_iter().map(|g| (g, 3)));
    out
}

/// Isomorphism class representatives found over the searched groups.
fn census_maps() -> Vec<CayleyMap> {
    searched_groups()
        .iter()
        .flat_map(|(g, p)| classify::exhaustive_regular_maps(g, *p).unwrap())
        .collect()
}

fn count_agreement() -> Outcome {
    let spots = [((7, 3), 2), ((9, 3), 0), ((21, 3), 2), ((15, 3), 0), ((11, 5), 4)];
    let mut bad = Vec::new();
    for ((n, p), want) in spots {
        if formula_count(n, p) != want || triples_for(n, p).len() as u64 != want {
            bad.push(format!("spot ({n},{p}) expected {want}"));
        }
    }
    let mut checked = 0;
    for p in [3, 5, 7] {
        for n in 1..=200 {
            checked += 1;
            let formula = formula_count(n, p);
            let triples = triples_for(n, p);
            let lifted = crt_lift_multipliers(n, p);
            if formula != triples.len() as u64 || lifted.len() != triples.len() {
                bad.push(format!(
                    "n={n} p={p}: formula {formula}, triples {}, CRT lift {}",
                    triples.len(),
                    lifted.len()
                ));
            }
        }
    }
    if bad.is_empty() {
        Ok(format!("{checked} (n, p) pairs agree"))
    } else {
        Err(bad.join("; "))
    }
}

fn dihedral_oracle() -> Outcome {
    let mut cases: Vec<(u32, u64)> = (1..=12).map(|n| (n, 3)).collect();
    cases.push((11, 5));
    let mut bad = Vec::new();
    let mut classes = 0;
    for (n, p) in cases {
        let cmp = compare_dihedral(n, p, Execution::Parallel).unwrap();
        classes += cmp.oracle.len();
        for m in &cmp.unexplained {
            bad.push(format!("D{n} p={p}: oracle found {m} ({}), no triple", m.balance_type()));
        }
        for m in &cmp.missing {
            bad.push(format!("D{n} p={p}: construction {m} not found"));
        }
    }
    if bad.is_empty() {
        Ok(format!("{classes} oracle classes, all constructed"))
    } else {
        Err(bad.join("; "))
    }
}

fn dicyclic_empty() -> Outcome {
    let mut bad = Vec::new();
    for p in [3, 5] {
        for n in 2..=6 {
            let g = FiniteGroup::dicyclic(n).unwrap();
            let found = classify::exhaustive_regular_maps(&g, p).unwrap();
            if !found.is_empty() {
                bad.push(format!("Dic{n} p={p}: {} classes", found.len()));
            }
        }
    }
    if bad.is_empty() {
        Ok("no regular maps on Dic2..Dic6 for p = 3, 5".into())
    } else {
        Err(bad.join("; "))
    }
}

fn abelian_classification() -> Outcome {
    let anti = cyclic_antibalanced_map(3).unwrap();
    let k4_maps: Vec<CayleyMap> = elem_abelian_seeds(2, 3)
        .unwrap()
        .iter()
        .map(|s| s.to_map().unwrap())
        .collect();
    let mut bad = Vec::new();
    let mut found = Vec::new();
    for g in abelian_groups_up_to(16) {
        for m in classify::exhaustive_regular_maps(&g, 3).unwrap() {
            found.push(m.to_string());
            match m.balance_type() {
                BalanceType::AntiBalanced if m.is_isomorphic(&anti) => {}
                BalanceType::Balanced if k4_maps.iter().any(|k| k.is_isomorphic(&m)) => {}
                t => bad.push(format!("{m} ({t}) matches neither target")),
            }
        }
    }
    if bad.is_empty() {
        Ok(format!("found {}", found.join(", ")))
    } else {
        Err(bad.join("; "))
    }
}

fn isomorphism_law() -> Outcome {
    let a = dihedral_balanced_map(7, 2, 3).unwrap();
    let b = dihedral_balanced_map(7, 4, 3).unwrap();
    let ok = !a.is_isomorphic(&b) && a.is_isomorphic(&a) && b.is_isomorphic(&b);
    if ok {
        Ok("CM(7,2,3) and CM(7,4,3) are distinct, each self-isomorphic".into())
    } else {
        Err("isomorphism law violated".into())
    }
}

fn balanced_criterion() -> Outcome {
    let mut checked = 0;
    let mut regular = 0;
    let mut bad = Vec::new();
    for (g, p) in searched_groups() {
        for m in search_space(&g, p).unwrap() {
            if m.balance_type() != BalanceType::Balanced {
                continue;
            }
            checked += 1;
            let r = m.is_regular();
            regular += r as usize;
            if r != m.balanced_regular_via_aut() {
                bad.push(format!("{m}: is_regular {r}"));
            }
        }
    }
    if bad.is_empty() {
        Ok(format!("{checked} balanced maps ({regular} regular), both tests agree"))
    } else {
        Err(bad.join("; "))
    }
}

fn kappa_dichotomy() -> Outcome {
    let mut bad = Vec::new();
    for p in [3, 5, 7] {
        let mut expected = vec![Permutation::identity(p), reflection_fixing_last(p)];
        expected.sort();
        let found = affine_type_involutions(p).unwrap();
        if found != expected {
            bad.push(format!("p={p}: {} involutions with affine-type H", found.len()));
        }
    }
    let maps = census_maps();
    for m in &maps {
        let p = m.valency();
        let kappa = m.canonical_base_rotation().unwrap().distribution_of_inverses();
        if !(kappa.is_identity() || kappa.permutation() == &reflection_fixing_last(p)) {
            bad.push(format!("{m}: kappa {}", kappa.cycle_notation()));
        }
    }
    if bad.is_empty() {
        Ok(format!("enumeration exact for p = 3, 5, 7; {} census maps conform", maps.len()))
    } else {
        Err(bad.join("; "))
    }
}

fn structural_spots() -> Outcome {
    let mut bad = Vec::new();
    let mut expect = |what: &str, got: String, want: &str| {
        if got != want {
            bad.push(format!("{what}: got {got}, want {want}"));
        }
    };
    let h = dihedral_balanced_map(7, 2, 3).unwrap();
    let faces = h.faces_and_genus().unwrap();
    let g = SimpleGraph::from_map(&h);
    let sym = graph::graph_symmetry(&h).unwrap();
    expect("|D|", h.num_arcs().to_string(), "42");
    expect("monodromy order", h.monodromy_order().size.to_string(), "42");
    expect("genus", faces.genus.to_string(), "1");
    expect("faces", faces.faces.to_string(), "7");
    expect("bipartite", g.is_bipartite().to_string(), "true");
    expect("girth", format!("{:?}", g.girth()), "Some(6)");
    expect("graph aut order", sym.order.to_string(), "336");
    expect("one-regular", sym.one_regular.to_string(), "false");
    let k = cyclic_antibalanced_map(3).unwrap();
    let kf = k.faces_and_genus().unwrap();
    expect("K33 genus", kf.genus.to_string(), "1");
    expect("K33 faces", kf.faces.to_string(), "3");
    expect(
        "K33 graph",
        format!("{:?}", SimpleGraph::from_map(&k).is_balanced_complete_bipartite()),
        "Some(3)",
    );
    if bad.is_empty() {
        Ok("Heawood and K3,3 maps match".into())
    } else {
        Err(bad.join("; "))
    }
}

fn normality() -> Outcome {
    let mut bad = Vec::new();
    let mut one_regular = 0;
    let mut probed = 0;
    for m in census_maps() {
        if m.num_vertices() > graph::VERTEX_GUARD {
            continue;
        }
        probed += 1;
        if graph::is_one_regular(&m).unwrap() {
            one_regular += 1;
            if !graph::is_normal_cayley(&m).unwrap() {
                bad.push(format!("{m}: one-regular but not normal"));
            }
        }
    }
    // constructions beyond the census, up to the vertex guard
    for p in [3u64, 5] {
        for n in 13..=32u64 {
            for l in triples_for(n, p) {
                let m = dihedral_balanced_map(n, l, p).unwrap();
                probed += 1;
                if graph::is_one_regular(&m).unwrap() {
                    one_regular += 1;
                    if !graph::is_normal_cayley(&m).unwrap() {
                        bad.push(format!("{m}: one-regular but not normal"));
                    }
                }
            }
        }
    }
    let h = dihedral_balanced_map(7, 2, 3).unwrap();
    if graph::is_one_regular(&h).unwrap() || graph::is_normal_cayley(&h).unwrap() {
        bad.push("Heawood graph: expected not one-regular and not normal".into());
    }
    if bad.is_empty() {
        Ok(format!("{probed} graphs probed, {one_regular} one-regular, all of those normal"))
    } else {
        Err(bad.join("; "))
    }
}

fn determinism() -> Outcome {
    let run = |args: &[&str]| {
        Command::new(env!("CARGO_BIN_EXE_cayley-maps"))
            .args(args)
            .output()
            .expect("binary runs")
    };
    let commands: [&[&str]; 4] = [
        &["census", "--group", "dihedral", "--p", "3", "--n-max", "12"],
        &["census", "--group", "abelian", "--p", "3", "--n-max", "16", "--format", "csv"],
        &["verify", "--theorem", "1.2", "--p", "3", "--n-max", "12"],
        &["verify", "--theorem", "1.3", "--p", "5", "--n-max", "6"],
    ];
    let mut bad = Vec::new();
    for args in commands {
        let base = run(args);
        let mut variants = vec![run(args)];
        for jobs in ["1", "2", "3"] {
            let mut a = args.to_vec();
            a.extend(["--jobs", jobs]);
            variants.push(run(&a));
        }
        if variants.iter().any(|v| v.stdout != base.stdout || v.status != base.status) {
            bad.push(args.join(" "));
        }
    }
    if bad.is_empty() {
        Ok("4 commands byte-identical across repeated runs and --jobs 1, 2, 3".into())
    } else {
        Err(format!("outputs differ: {}", bad.join("; ")))
    }
}

fn main() {
    let secs = |s| Some(Duration::from_secs(s));
    let criteria = [
        Criterion { id: 1, name: "count formula, triples and CRT lift agree", limit: secs(5), check: count_agreement },
        Criterion { id: 2, name: "dihedral oracle equals constructions", limit: secs(60), check: dihedral_oracle },
        Criterion { id: 3, name: "no regular maps on dicyclic groups", limit: secs(60), check: dicyclic_empty },
        Criterion { id: 4, name: "abelian maps are the K4 or K3,3 map", limit: secs(60), check: abelian_classification },
        Criterion { id: 5, name: "isomorphism law for CM(7,l,3)", limit: None, check: isomorphism_law },
        Criterion { id: 6, name: "balanced: regular iff rotation extends", limit: None, check: balanced_criterion },
        Criterion { id: 7, name: "kappa dichotomy", limit: None, check: kappa_dichotomy },
        Criterion { id: 8, name: "structural spot checks", limit: secs(10), check: structural_spots },
        Criterion { id: 9, name: "one-regular census graphs are normal", limit: None, check: normality },
        Criterion { id: 10, name: "determinism across runs and jobs", limit: None, check: determinism },
    ];
    let mut failed = 0;
    for c in criteria {
        let start = Instant::now();
        let outcome = (c.check)();
        let elapsed = start.elapsed();
        let outcome = match (outcome, c.limit) {
            (Ok(_), Some(limit)) if elapsed > limit => {
                Err(format!("took {elapsed:.2?}, limit {limit:?}"))
            }
            (o, _) => o,
        };
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d),
            Err(d) => ("FAIL", d),
        };
        failed += outcome.is_err() as usize;
        println!("{tag} criterion {:>2} [{elapsed:.2?}] {}: {detail}", c.id, c.name);
    }
    println!("{} of 10 criteria passed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}

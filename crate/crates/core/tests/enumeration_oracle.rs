//! Enumeration checked against a brute-force oracle: every raw blow-up
//! sequence, deduplicated by trying all vertex permutations.

use conic_fibers::enumeration::{
    all_centers, enumerate_levels, main_fiber, EnumerationOptions, MainKeys,
};
use conic_fibers::fiber::{canonical_form, FiberConfig, FiberKind};
use conic_fibers::transform::blow_up;

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                go(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

fn isomorphic(a: &FiberConfig, b: &FiberConfig, perms: &[Vec<usize>]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let label = |c: &FiberConfig, i: usize| c.component(i).label();
    perms.iter().any(|p| {
        (0..a.len()).all(|i| label(a, i) == label(b, p[i]))
            && (0..a.len()).all(|i| (0..i).all(|j| a.meet(i, j) == b.meet(p[i], p[j])))
    })
}

/// Raw sequence count and one representative per isomorphism class, per level.
fn oracle(max_level: usize) -> Vec<(usize, Vec<FiberConfig>)> {
    let mut raw = vec![FiberConfig::smooth(None)];
    let mut out = vec![(1, raw.clone())];
    for n in 1..=max_level {
        raw = raw
            .iter()
            .flat_map(|f| {
                all_centers(f)
                    .into_iter()
                    .map(move |c| blow_up(f, &c).unwrap())
            })
            .collect();
        let perms = permutations(n + 1);
        let mut classes: Vec<FiberConfig> = Vec::new();
        for f in &raw {
            if !classes.iter().any(|g| isomorphic(f, g, &perms)) {
                classes.push(f.clone());
            }
        }
        out.push((raw.len(), classes));
    }
    out
}

#[test]
fn class_counts_match_brute_force() {
    let oracle = oracle(5);
    let counts: Vec<(usize, usize)> = oracle.iter().map(|(r, c)| (*r, c.len())).collect();
    assert_eq!(
        counts,
        vec![(1, 1), (1, 1), (3, 2), (15, 5), (105, 18), (945, 70)]
    );

    let lib = enumerate_levels(5, &EnumerationOptions::default()).unwrap();
    for ((raw, classes), result) in oracle.iter().zip(&lib) {
        assert_eq!(result.raw_count, *raw as u64, "level {}", result.level);
        assert_eq!(
            result.deduped_count(),
            classes.len(),
            "level {}",
            result.level
        );
        for f in classes {
            assert!(
                result.contains(&canonical_form(f).unwrap()),
                "level {}",
                result.level
            );
        }
    }
}

#[test]
fn orbit_quotient_does_not_change_results() {
    let plain = EnumerationOptions {
        quotient_automorphisms: false,
        parallel: false,
        ..EnumerationOptions::default()
    };
    let a = enumerate_levels(5, &EnumerationOptions::default()).unwrap();
    let b = enumerate_levels(5, &plain).unwrap();
    for (x, y) in a.iter().zip(&b) {
        assert_eq!(x.raw_count, y.raw_count);
        let summary = |r: &conic_fibers::enumeration::EnumerationResult| -> Vec<_> {
            r.configs
                .iter()
                .map(|c| (c.key.clone(), c.raw_sequences, c.witness.clone()))
                .collect()
        };
        assert_eq!(summary(x), summary(y), "level {}", x.level);
    }
}

#[test]
fn restricted_enumeration_is_exactly_the_main_fibres() {
    let options = EnumerationOptions {
        include_non_main: false,
        ..EnumerationOptions::default()
    };
    for result in enumerate_levels(6, &options).unwrap().iter().skip(1) {
        let n = result.level;
        let mut want = vec![canonical_form(&main_fiber(FiberKind::A, n).unwrap()).unwrap()];
        if n >= 2 {
            want.push(canonical_form(&main_fiber(FiberKind::D, n).unwrap()).unwrap());
        }
        want.sort();
        let got: Vec<_> = result.configs.iter().map(|c| c.key.clone()).collect();
        assert_eq!(got, want, "level {n}");
        let mains = MainKeys::for_level(n);
        assert!(got.iter().all(|k| mains.classify(k).is_some()));
    }
}

#[test]
fn witnesses_replay_to_their_class() {
    for result in enumerate_levels(5, &EnumerationOptions::default()).unwrap() {
        for c in &result.configs {
            let f = conic_fibers::apply_script(&FiberConfig::smooth(None), &c.witness).unwrap();
            assert_eq!(f, c.config);
            assert_eq!(canonical_form(&f).unwrap(), c.key);
            assert_eq!(c.witness.len(), result.level);
        }
    }
}

#[test]
fn level_six_stays_nodal() {
    for result in enumerate_levels(6, &EnumerationOptions::default()).unwrap() {
        for c in &result.configs {
            assert!(c.config.edges().all(|(_, _, k)| k == 1), "{}", c.witness);
        }
    }
}

/// Subtraction counts per component, computed directly from the meets.
fn subtraction_counts(f: &FiberConfig) -> Vec<u32> {
    let mut degrees = f.degrees();
    let mut counts = vec![0; f.len()];
    while let Some(c) = degrees.iter().position(|&d| d < 0) {
        for (j, d) in degrees.iter_mut().enumerate() {
            *d -= if j == c {
                f.component(c).self_int
            } else {
                i64::from(f.meet(c, j))
            };
        }
        counts[c] += 1;
    }
    counts
}

#[test]
fn repeated_base_components_first_appear_at_level_five() {
    let mut per_level = Vec::new();
    for r in enumerate_levels(6, &EnumerationOptions::default()).unwrap() {
        let mut repeats = 0;
        for c in &r.configs {
            let counts = subtraction_counts(&c.config);
            let (b, _) = conic_fibers::resolution::base_locus(&c.config).unwrap();
            let lib: Vec<u32> = c
                .config
                .components()
                .iter()
                .map(|x| b.count(x.id.as_str()))
                .collect();
            assert_eq!(lib, counts, "{}", c.witness);
            let repeated = counts.iter().any(|&k| k > 1);
            assert_eq!(b.has_repeats(), repeated);
            repeats += usize::from(repeated);
        }
        per_level.push(repeats);
    }
    assert_eq!(per_level, vec![0, 0, 0, 0, 0, 9, 75]);
}

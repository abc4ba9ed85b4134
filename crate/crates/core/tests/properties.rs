use conic_fibers::enumeration::{all_centers, main_fiber};
use conic_fibers::fiber::{self, automorphisms, canonical_form, FiberConfig, FiberKind};
use conic_fibers::models::{count_models, SurfaceLevel};
use conic_fibers::resolution::{
    base_locus, contraction_clusters, parse_report, resolve, serialize_report,
};
use conic_fibers::transform::{blow_down, blow_up};
use proptest::prelude::*;

/// Replays choices, each taken modulo the number of available centres.
fn grow(choices: &[usize], d_self: Option<i64>) -> Vec<FiberConfig> {
    let mut states = vec![FiberConfig::smooth(d_self)];
    for &k in choices {
        let f = states.last().unwrap();
        let centers = all_centers(f);
        let next = blow_up(f, &centers[k % centers.len()]).unwrap();
        states.push(next);
    }
    states
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

fn isomorphic(a: &FiberConfig, b: &FiberConfig) -> bool {
    a.len() == b.len()
        && permutations(a.len()).iter().any(|p| {
            (0..a.len()).all(|i| a.component(i).label() == b.component(p[i]).label())
                && (0..a.len()).all(|i| (0..i).all(|j| a.meet(i, j) == b.meet(p[i], p[j])))
        })
}

fn shuffle(n: usize, seed: &[usize]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..n).collect();
    for (i, s) in seed.iter().enumerate().take(n) {
        order.swap(i, i + s % (n - i));
    }
    order
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn blow_ups_keep_fibre_invariants(choices in prop::collection::vec(0usize..64, 0..9), d in -10i64..30) {
        let states = grow(&choices, Some(d));
        for (n, f) in states.iter().enumerate() {
            let mu = f.multiplicities();
            prop_assert!(f.intersection_matrix().mul_vec(&mu).iter().all(|&x| x == 0));
            let balance: i64 = mu.iter().zip(f.degrees()).map(|(m, d)| m * d).sum();
            prop_assert_eq!(balance, 2);
            prop_assert!(f.validate().is_valid());
            prop_assert_eq!(f.level(), n);
            prop_assert_eq!(f.d_self(), Some(d - n as i64));
        }
    }

    #[test]
    fn blow_down_undoes_blow_up(choices in prop::collection::vec(0usize..64, 1..9)) {
        let states = grow(&choices, Some(3));
        for pair in states.windows(2) {
            let last = pair[1].component(pair[1].len() - 1).id.clone();
            prop_assert_eq!(&blow_down(&pair[1], last.as_str()).unwrap(), &pair[0]);
        }
    }

    #[test]
    fn key_ignores_component_order(choices in prop::collection::vec(0usize..64, 0..9), seed in prop::collection::vec(0usize..64, 9)) {
        let f = grow(&choices, None).pop().unwrap();
        let g = f.permuted(&shuffle(f.len(), &seed));
        prop_assert_eq!(canonical_form(&f).unwrap(), canonical_form(&g).unwrap());
    }

    #[test]
    fn key_equality_is_isomorphism(
        a in prop::collection::vec(0usize..64, 0..7),
        b in prop::collection::vec(0usize..64, 0..7),
    ) {
        let f = grow(&a, None).pop().unwrap();
        let g = grow(&b, None).pop().unwrap();
        prop_assert_eq!(canonical_form(&f).unwrap() == canonical_form(&g).unwrap(), isomorphic(&f, &g));
    }

    #[test]
    fn automorphisms_preserve_the_fibre(choices in prop::collection::vec(0usize..64, 0..8)) {
        let f = grow(&choices, None).pop().unwrap();
        let autos = automorphisms(&f).unwrap();
        prop_assert!(autos.contains(&(0..f.len()).collect::<Vec<_>>()));
        for p in &autos {
            for i in 0..f.len() {
                prop_assert_eq!(f.component(i).label(), f.component(p[i]).label());
                for j in 0..f.len() {
                    prop_assert_eq!(f.meet(i, j), f.meet(p[i], p[j]));
                }
            }
        }
    }

    #[test]
    fn formats_round_trip(choices in prop::collection::vec(0usize..64, 0..9), d in prop::option::of(-5i64..20)) {
        let f = grow(&choices, d).pop().unwrap();
        let text = fiber::serialize(&f);
        prop_assert_eq!(&fiber::parse(&text).unwrap(), &f);
        let report = resolve(&f).unwrap();
        prop_assert_eq!(parse_report(&serialize_report(&report)).unwrap(), report);
    }

    #[test]
    fn contracted_clusters_are_negative_definite(choices in prop::collection::vec(0usize..64, 0..9)) {
        let f = grow(&choices, None).pop().unwrap();
        let (_, degrees) = base_locus(&f).unwrap();
        let matrix = f.intersection_matrix();
        for cluster in contraction_clusters(&f, &degrees) {
            prop_assert!(cluster.len() < f.len());
            prop_assert!(matrix.principal_submatrix(&cluster).is_negative_definite());
        }
    }

    #[test]
    fn main_fibres_relabelled_keep_their_report(n in 2usize..10, seed in prop::collection::vec(0usize..64, 11)) {
        for kind in [FiberKind::A, FiberKind::D] {
            let f = main_fiber(kind, n).unwrap();
            let g = f.permuted(&shuffle(f.len(), &seed));
            prop_assert_eq!(resolve(&f).unwrap().signature(), resolve(&g).unwrap().signature());
        }
    }
}

/// Subsets of the infinitely near points `P1..Pn`, `Q1..Qm` closed under
/// taking earlier points, counted directly.
fn prefix_closed_subsets(lengths: &[usize]) -> u128 {
    let total: usize = lengths.iter().sum();
    (0u32..1 << total)
        .filter(|mask| {
            let mut offset = 0;
            lengths.iter().all(|&l| {
                let ok = (1..l)
                    .all(|i| mask >> (offset + i) & 1 == 0 || mask >> (offset + i - 1) & 1 == 1);
                offset += l;
                ok
            })
        })
        .count() as u128
}

#[test]
fn model_count_matches_prefix_closed_subsets() {
    for n in 0..=4 {
        for m in 0..=4 {
            let s = SurfaceLevel::new(vec![(FiberKind::A, n), (FiberKind::A, m)]);
            assert_eq!(
                count_models(&s),
                prefix_closed_subsets(&[n, m]),
                "A{n} A{m}"
            );
            assert_eq!(count_models(&s), ((n + 1) * (m + 1)) as u128);
        }
    }
}

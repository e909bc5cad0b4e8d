use std::collections::HashSet;

use codecirc::combtree::{equivalence_key, reduced_generator, sibling_equivalent, CombinationOrder, InputCombination};
use codecirc::feasibility::{exists_pgm, find_pgm, satisfies_constraints, CoordinateFunctions};
use codecirc::gf2::{self, ParityGeneratorMatrix, TruthTable, Word};
use codecirc::netlist::{build_circuit, quine_mccluskey, Netlist};
use codecirc::partitions::{count_partitions, enumerate_partitions, PartitionOrder};
use proptest::prelude::*;

fn pgm_strategy(max_k: usize, max_r: usize) -> impl Strategy<Value = ParityGeneratorMatrix> {
    columns_strategy(max_k, max_r, 0)
}

fn columns_strategy(max_k: usize, max_r: usize, low: u64) -> impl Strategy<Value = ParityGeneratorMatrix> {
    (1..=max_k, 1..=max_r).prop_flat_map(move |(k, r)| {
        proptest::collection::vec(low..(1u64 << k), r)
            .prop_map(move |cols| ParityGeneratorMatrix::new(k, cols).unwrap())
    })
}

fn brute_distance(g: &ParityGeneratorMatrix) -> u32 {
    (1..1u64 << g.k())
        .map(|x| x.count_ones() + g.parity_bits(x).count_ones())
        .min()
        .unwrap()
}

fn brute_injective(g: &ParityGeneratorMatrix) -> bool {
    let images: HashSet<u64> = (0..1u64 << g.k()).map(|x| g.parity_bits(x)).collect();
    images.len() == 1 << g.k()
}

proptest! {
    #[test]
    fn encoding_is_linear(g in pgm_strategy(8, 8), a in any::<u64>(), b in any::<u64>()) {
        let k = g.k();
        let m = (1u64 << k) - 1;
        let (a, b) = (a & m, b & m);
        let enc = |x| gf2::encode(&g, Word::new(x, k).unwrap()).unwrap();
        prop_assert_eq!(enc(a ^ b), enc(a).xor(enc(b)).unwrap());
        prop_assert_eq!(enc(a).bits() & m, a);
    }

    #[test]
    fn distance_routines_agree(g in pgm_strategy(7, 7), d in 1u32..9) {
        let brute = brute_distance(&g);
        prop_assert_eq!(gf2::min_distance(&g), brute);
        prop_assert_eq!(gf2::distance_at_least(&g, d), brute >= d);
    }

    #[test]
    fn injectivity_matches_enumeration(g in pgm_strategy(6, 6)) {
        prop_assert_eq!(gf2::is_injective(&g), brute_injective(&g));
        prop_assert_eq!(gf2::rank(g.columns()) == g.k(), brute_injective(&g));
    }

    #[test]
    fn text_form_round_trips(g in pgm_strategy(10, 10)) {
        let back: ParityGeneratorMatrix = g.to_string().parse().unwrap();
        prop_assert_eq!(back, g);
    }

    #[test]
    fn constraint_checker_matches_matrix(g in pgm_strategy(5, 6), d in 2usize..6) {
        let tables: Vec<TruthTable> = g
            .columns()
            .iter()
            .map(|&c| TruthTable::linear(g.k(), c).unwrap())
            .collect();
        let expect = brute_injective(&g) && brute_distance(&g) >= d as u32;
        prop_assert_eq!(satisfies_constraints(&tables, g.k(), d), expect);
    }

    #[test]
    fn circuits_compute_their_matrix(g in columns_strategy(6, 6, 1), d in 2usize..5) {
        let f = CoordinateFunctions::from_pgm(g.clone()).unwrap();
        let net = build_circuit(&f, d).unwrap();
        let table = net.simulate_all().unwrap();
        for x in 0..1u64 << g.k() {
            prop_assert_eq!(table[x as usize], g.parity_bits(x));
            prop_assert_eq!(net.evaluate(x).unwrap(), g.parity_bits(x));
        }
        prop_assert!(net.check_independence().unwrap());
        prop_assert_eq!(net.support_inputs().unwrap(), g.support_sum());
        let json = net.to_json().unwrap();
        prop_assert_eq!(Netlist::from_json(&json).unwrap(), net);
    }

    #[test]
    fn minimized_cover_is_equivalent(bits in any::<u16>(), n in 1usize..=4) {
        let f = TruthTable::from_fn(n, |x| (bits >> x) & 1 == 1).unwrap();
        let sop = quine_mccluskey(&f).unwrap();
        for x in 0..1u64 << n {
            prop_assert_eq!(sop.eval(x), f.eval(x));
        }
    }
}

/// All cubes over `n` variables as (care mask, value) pairs.
fn cubes(n: usize) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    for care in 0..1u64 << n {
        for value in 0..1u64 << n {
            if value & !care == 0 {
                out.push((care, value));
            }
        }
    }
    out
}

fn min_cover_size(n: usize, on: u64) -> usize {
    if on == 0 {
        return 0;
    }
    let implicants: Vec<u64> = cubes(n)
        .into_iter()
        .map(|(care, value)| (0..1u64 << n).filter(|&x| x & care == value).fold(0, |m, x| m | 1 << x))
        .filter(|&set| set & !on == 0)
        .collect();
    let mut frontier: HashSet<u64> = HashSet::from([0]);
    for size in 1.. {
        let mut next = HashSet::new();
        for &cov in &frontier {
            for &imp in &implicants {
                let c = cov | imp;
                if c == on {
                    return size;
                }
                next.insert(c);
            }
        }
        frontier = next;
    }
    unreachable!()
}

#[test]
fn minimized_cover_has_fewest_terms() {
    for n in 1..=3 {
        for bits in 0..1u64 << (1 << n) {
            let f = TruthTable::from_fn(n, |x| (bits >> x) & 1 == 1).unwrap();
            let sop = quine_mccluskey(&f).unwrap();
            assert_eq!(sop.terms.len(), min_cover_size(n, bits), "n={n} f={bits:b}");
        }
    }
}

#[test]
fn partition_count_matches_enumeration() {
    for k in 1..=6 {
        for r in 1..=9 {
            for m in 0..=36 {
                for order in [PartitionOrder::LexAscending, PartitionOrder::LexDescending] {
                    let parts: Vec<Vec<usize>> = enumerate_partitions(m, r, k, order)
                        .map(|p| p.parts().to_vec())
                        .collect();
                    assert_eq!(parts.len() as u64, count_partitions(m, r, k), "m={m} r={r} k={k}");
                    for p in &parts {
                        assert_eq!(p.len(), r);
                        assert_eq!(p.iter().sum::<usize>(), m);
                        assert!(p.windows(2).all(|w| w[0] >= w[1]));
                        assert!(p.iter().all(|&x| (1..=k).contains(&x)));
                    }
                    let mut sorted = parts.clone();
                    sorted.sort();
                    if order == PartitionOrder::LexDescending {
                        sorted.reverse();
                    }
                    assert_eq!(sorted, parts, "order m={m} r={r} k={k}");
                    sorted.dedup();
                    assert_eq!(sorted.len(), parts.len());
                }
            }
        }
    }
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, k - 1);
            out.push(q);
        }
    }
    out
}

fn apply(perm: &[usize], set: u64) -> u64 {
    (0..perm.len())
        .filter(|&i| (set >> i) & 1 == 1)
        .fold(0, |m, i| m | 1 << perm[i])
}

#[test]
fn sibling_equivalence_matches_bijection_search() {
    // Two labels are interchangeable iff some input renaming fixes every
    // ancestor label and maps one onto the other.
    for k in 1..=4 {
        let perms = permutations(k);
        let subsets: Vec<u64> = (1..1u64 << k).collect();
        for depth in 0..=2 {
            let mut paths: Vec<Vec<u64>> = vec![Vec::new()];
            for _ in 0..depth {
                paths = paths
                    .into_iter()
                    .flat_map(|p| subsets.iter().map(move |&s| [p.clone(), vec![s]].concat()))
                    .collect();
            }
            for path in &paths {
                for &a in &subsets {
                    for &b in &subsets {
                        if a.count_ones() != b.count_ones() {
                            continue;
                        }
                        let oracle = perms.iter().any(|p| {
                            apply(p, a) == b && path.iter().all(|&s| apply(p, s) == s)
                        });
                        assert_eq!(
                            sibling_equivalent(path, a, b).unwrap(),
                            oracle,
                            "k={k} path={path:?} a={a:b} b={b:b}"
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn pruned_combinations_are_represented() {
    for k in 1..=4 {
        for r in 1..=5 {
            for m in r..=k * r {
                for p in enumerate_partitions(m, r, k, PartitionOrder::LexAscending) {
                    for order in [CombinationOrder::ComponentSizeDesc, CombinationOrder::CombinationCountDesc] {
                        let kept: HashSet<Vec<u64>> = reduced_generator(p.parts(), k, order, true)
                            .map(|c| equivalence_key(&c).unwrap())
                            .collect();
                        for c in reduced_generator(p.parts(), k, order, false) {
                            assert!(
                                kept.contains(&equivalence_key(&c).unwrap()),
                                "{c} has no representative for {p} k={k}"
                            );
                        }
                    }
                }
            }
        }
    }
}

fn brute_exists(k: usize, d: usize, r: usize) -> bool {
    let total = 1u64 << (k * r);
    (0..total).any(|bits| {
        let cols: Vec<u64> = (0..r).map(|j| (bits >> (j * k)) & ((1 << k) - 1)).collect();
        let g = ParityGeneratorMatrix::new(k, cols).unwrap();
        gf2::is_injective(&g) && gf2::distance_at_least(&g, d as u32)
    })
}

#[test]
fn matrix_existence_matches_enumeration() {
    for k in 1..=3 {
        for r in 1..=5 {
            if k * r > 15 {
                continue;
            }
            for d in 2..=6 {
                let expect = brute_exists(k, d, r);
                assert_eq!(exists_pgm(k, d, r), expect, "k={k} d={d} r={r}");
                if let Some(g) = find_pgm(k, d, r) {
                    assert!(expect);
                    assert!(gf2::is_injective(&g) && gf2::distance_at_least(&g, d as u32));
                }
            }
        }
    }
}

#[test]
fn matrix_existence_is_monotone_in_r() {
    for k in 1..=6 {
        for d in 2..=5 {
            let mut seen = false;
            for r in 1..=10 {
                let now = exists_pgm(k, d, r);
                assert!(!seen || now, "k={k} d={d} r={r}");
                seen |= now;
            }
            assert!(seen);
        }
    }
}

#[test]
fn combination_display_is_one_based() {
    let c = InputCombination::new(3, vec![0b011, 0b001, 0b100]).unwrap();
    assert_eq!(c.to_string(), "(1,2)(1)(3)");
}

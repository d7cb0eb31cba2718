use std::sync::OnceLock;

use hermsrg::constructions::build_nu;
use hermsrg::gf::{Elem, Field};
use hermsrg::graphcore::{
    check_srg, decode_graph6, encode_graph6, is_isomorphic, triple_census, verify_mapping, Graph, IsoOptions,
    IsoVerdict, TripleSource,
};
use hermsrg::projgeom::{HermitianGeometry, Space};
use proptest::prelude::*;

fn field(q: u32) -> &'static Field {
    static FIELDS: OnceLock<Vec<Field>> = OnceLock::new();
    let all = FIELDS.get_or_init(|| [2, 3, 4, 5, 7, 8].iter().map(|&q| Field::quadratic(q).unwrap()).collect());
    &all[[2, 3, 4, 5, 7, 8].iter().position(|&x| x == q).unwrap()]
}

fn nu_5_4() -> &'static Graph {
    static G: OnceLock<Graph> = OnceLock::new();
    G.get_or_init(|| build_nu(4, 2).unwrap())
}

fn any_q() -> impl Strategy<Value = u32> {
    prop::sample::select(vec![2u32, 3, 4, 5, 7, 8])
}

fn random_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..max_n).prop_flat_map(|n| {
        prop::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let mut g = Graph::empty(n);
            let mut it = bits.into_iter();
            for i in 0..n {
                for j in i + 1..n {
                    if it.next().unwrap() {
                        g.add_edge(i, j);
                    }
                }
            }
            g
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn field_operations_are_consistent(q in any_q(), a in 0usize..4096, b in 0usize..4096, c in 0usize..4096) {
        let f = field(q);
        let e = |k: usize| Elem((k % f.order()) as u8);
        let (a, b, c) = (e(a), e(b), e(c));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.sub(f.add(a, b), b), a);
        if !b.is_zero() {
            prop_assert_eq!(f.mul(f.div(a, b), b), a);
        }
        // x -> x^q is an involutive automorphism fixing exactly GF(q)
        prop_assert_eq!(f.conj(f.conj(a)), a);
        prop_assert_eq!(f.conj(f.mul(a, b)), f.mul(f.conj(a), f.conj(b)));
        prop_assert_eq!(f.conj(a) == a, f.in_subfield(a));
        prop_assert!(f.in_subfield(f.norm(a)));
        prop_assert!(f.in_subfield(f.trace(a)));
        prop_assert_eq!(f.from_code(f.code(a)), a);
    }

    #[test]
    fn normalizing_keeps_the_point(q in prop::sample::select(vec![2u32, 3, 4]), coords in prop::collection::vec(0usize..64, 4), s in 1usize..64) {
        let space = Space::new(3, q).unwrap();
        let f = space.field();
        let v: Vec<Elem> = coords.iter().map(|&k| Elem((k % f.order()) as u8)).collect();
        prop_assume!(v.iter().any(|x| !x.is_zero()));
        let scale = Elem((1 + s % (f.order() - 1)) as u8);
        let w: Vec<Elem> = v.iter().map(|&x| f.mul(scale, x)).collect();
        let p = space.index_of(&v).unwrap();
        prop_assert_eq!(space.index_of(&w), Some(p));
        let mut n = v.clone();
        prop_assert!(space.normalize(&mut n));
        prop_assert_eq!(space.point(p), &n[..]);
        let lead = n.iter().find(|x| !x.is_zero()).copied().unwrap();
        prop_assert_eq!(lead, f.from_int(1));
    }

    #[test]
    fn hermitian_form_is_hermitian(q in prop::sample::select(vec![2u32, 3, 4]), x in 0usize..1000, y in 0usize..1000) {
        let h = HermitianGeometry::standard(3, q).unwrap();
        let space = h.space();
        let (x, y) = (space.point(x % space.num_points()), space.point(y % space.num_points()));
        let f = h.field();
        prop_assert_eq!(h.form(x, y), f.conj(h.form(y, x)));
        prop_assert!(f.in_subfield(h.value(x)));
    }

    #[test]
    fn graph6_round_trips(g in random_graph(90)) {
        let bytes = encode_graph6(&g);
        let back = decode_graph6(&bytes).unwrap();
        prop_assert_eq!(back.n(), g.n());
        prop_assert!(back.same_edges(&g));
        prop_assert!(bytes.iter().all(|&b| (63..=126).contains(&b)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn relabelling_preserves_invariants(seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let g = nu_5_4();
        let mut perm: Vec<usize> = (0..g.n()).collect();
        perm.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        let h = g.permuted(&perm);
        prop_assert_eq!(check_srg(&h).ok(), check_srg(g).ok());
        let c1 = triple_census(g, &TripleSource::AllAdjacent);
        let c2 = triple_census(&h, &TripleSource::AllAdjacent);
        prop_assert_eq!(c1.histogram, c2.histogram);
        match is_isomorphic(g, &h, &IsoOptions::default()) {
            IsoVerdict::Isomorphic { mapping, .. } => prop_assert!(verify_mapping(g, &h, &mapping)),
            other => prop_assert!(false, "expected an isomorphism, got {:?}", other),
        }
    }

    #[test]
    fn isomorphism_on_small_random_graphs(g in random_graph(24), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let mut perm: Vec<usize> = (0..g.n()).collect();
        perm.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        let h = g.permuted(&perm);
        let verdict = is_isomorphic(&g, &h, &IsoOptions::default());
        prop_assert_eq!(verdict.is_isomorphic(), Some(true));
        // one toggled edge changes the edge count, so never isomorphic
        if g.n() >= 2 {
            let mut k = h.clone();
            k.toggle_edge(0, 1);
            prop_assert_eq!(is_isomorphic(&g, &k, &IsoOptions::default()).is_isomorphic(), Some(false));
        }
    }
}

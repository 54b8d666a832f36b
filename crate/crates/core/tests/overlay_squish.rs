use std::collections::BTreeSet;

use num_bigint::BigInt;
use proptest::prelude::*;

use hexsquish::algebra::Monomial;
use hexsquish::diagrams::{all_matchings, diagram_of, enumerate_diagrams, matching_of, PlanePartition};
use hexsquish::mesh::{BoxDims, EdgeRole, HexMesh, PropellerMap};
use hexsquish::overlay::{enumerate_two_factors, overlay, split, two_factor_weight, DEFAULT_DIAGRAM_LIMIT};
use hexsquish::squish::{
    combined_weight, lift_preimages, project, pullback_weighting, sign_weighting, specialized_diagram_weight,
    wp_edge_weighting, SignRule,
};

fn dims(a: u32, b: u32, c: u32) -> BoxDims {
    BoxDims::new(a, b, c).unwrap()
}

#[test]
fn overlays_split_back_into_their_pairs() {
    for d in [dims(1, 1, 1), dims(2, 1, 1), dims(2, 2, 1), dims(2, 2, 2)] {
        let mesh = HexMesh::new(d);
        let ms = all_matchings(&mesh);
        let mut pair_total = 0u64;
        for lambda in enumerate_two_factors(&mesh, DEFAULT_DIAGRAM_LIMIT).unwrap() {
            let pairs = split(&lambda);
            assert_eq!(pairs.len(), 1 << lambda.loop_count());
            let distinct: BTreeSet<_> = pairs.iter().collect();
            assert_eq!(distinct.len(), pairs.len());
            for (m1, m2) in &pairs {
                assert_eq!(overlay(&mesh, m1, m2).unwrap(), lambda);
            }
            pair_total += pairs.len() as u64;
        }
        assert_eq!(pair_total, (ms.len() * ms.len()) as u64, "{d}");
    }
}

#[test]
fn loops_have_even_length_and_self_overlay_is_doubled() {
    let mesh = HexMesh::new(dims(2, 2, 2));
    for m in all_matchings(&mesh) {
        let l = overlay(&mesh, &m, &m).unwrap();
        assert_eq!(l.loop_count(), 0);
        assert_eq!(l.doubled(), m.edges());
    }
    for lambda in enumerate_two_factors(&mesh, DEFAULT_DIAGRAM_LIMIT).unwrap() {
        for lp in lambda.loops() {
            assert!(lp.len() >= 6 && lp.len() % 2 == 0);
        }
    }
}

#[test]
fn overlay_rejects_foreign_matchings() {
    let small = HexMesh::new(dims(1, 1, 1));
    let big = HexMesh::new(dims(2, 2, 2));
    let m = all_matchings(&big).remove(0);
    let s = all_matchings(&small).remove(0);
    assert!(overlay(&small, &s, &m).is_err());
}

#[test]
fn propeller_structure() {
    for base in [dims(1, 1, 1), dims(2, 1, 1), dims(2, 2, 1)] {
        let pm = PropellerMap::for_base(base).unwrap();
        assert_eq!(pm.even().dims(), base.doubled());
        assert_eq!(pm.propellers().len(), pm.base().vertex_count());
        let mut long = 0;
        for e in 0..pm.even().edge_count() {
            if let EdgeRole::Long { base_edge, .. } = pm.role(e) {
                assert!(pm.lifts(base_edge).contains(&e));
                long += 1;
            }
        }
        assert_eq!(long, 2 * pm.base().edge_count());
        assert_eq!(pm.short_edge_count() + long, pm.even().edge_count());
    }
    assert!(PropellerMap::new(HexMesh::new(dims(3, 2, 2))).is_err());
}

#[test]
fn fibers_partition_the_even_matchings() {
    for base in [dims(1, 1, 1), dims(2, 1, 1)] {
        let pm = PropellerMap::for_base(base).unwrap();
        let mut covered = BTreeSet::new();
        for lambda in enumerate_two_factors(pm.base(), DEFAULT_DIAGRAM_LIMIT).unwrap() {
            for mu in lift_preimages(&pm, &lambda) {
                assert_eq!(project(&pm, &mu).unwrap(), lambda);
                assert!(covered.insert(mu));
            }
        }
        let all: BTreeSet<_> = all_matchings(pm.even()).into_iter().collect();
        assert_eq!(covered, all);
    }
}

#[test]
fn pullback_weight_is_base_weight_of_projection() {
    let pm = PropellerMap::for_base(dims(2, 1, 1)).unwrap();
    let u = pullback_weighting(&pm);
    let wp = wp_edge_weighting(pm.base());
    for mu in all_matchings(pm.even()) {
        let lambda = project(&pm, &mu).unwrap();
        assert_eq!(u.matching_weight(pm.even(), &mu).unwrap(), two_factor_weight(pm.base(), &lambda, &wp).unwrap());
    }
}

#[test]
fn wp_weight_counts_boxes() {
    for d in BoxDims::all_up_to(dims(3, 3, 2)) {
        let mesh = HexMesh::new(d);
        let w = wp_edge_weighting(&mesh);
        for pp in enumerate_diagrams(d) {
            let m = matching_of(&mesh, &pp).unwrap();
            assert_eq!(w.matching_weight(&mesh, &m).unwrap(), Monomial::new(1, [3 * pp.size() as i32, 0, 0, 0]));
        }
    }
}

#[test]
fn empty_matching_sign() {
    for base in [dims(1, 1, 1), dims(2, 1, 1), dims(2, 2, 1), dims(2, 2, 2)] {
        let pm = PropellerMap::for_base(base).unwrap();
        let empty = matching_of(pm.even(), &PlanePartition::empty(pm.even().dims())).unwrap();
        let [a, b, c] = base.as_array();
        let sign = if (a * b + b * c + c * a) % 2 == 0 { 1 } else { -1 };
        assert_eq!(combined_weight(&pm, SignRule::CALIBRATED, &empty).unwrap(), Monomial::new(sign, [0; 4]));
    }
}

#[test]
fn signs_are_units() {
    let pm = PropellerMap::for_base(dims(2, 1, 1)).unwrap();
    for rule in SignRule::candidates() {
        let s = sign_weighting(&pm, rule);
        for e in 0..pm.even().edge_count() {
            let m = s.get(e).unwrap();
            assert!(m.is_one() || m == &Monomial::new(-1, [0; 4]));
        }
    }
}

#[test]
fn consistency_ratio_on_every_matching() {
    let pm = PropellerMap::for_base(dims(1, 1, 1)).unwrap();
    let empty = matching_of(pm.even(), &PlanePartition::empty(pm.even().dims())).unwrap();
    let w0 = combined_weight(&pm, SignRule::CALIBRATED, &empty).unwrap();
    for mu in all_matchings(pm.even()) {
        let pp = diagram_of(pm.even(), &mu).unwrap();
        let ratio = &combined_weight(&pm, SignRule::CALIBRATED, &mu).unwrap() * &w0.inv().unwrap();
        assert_eq!(ratio, specialized_diagram_weight(&pp), "{:?}", pp.heights);
        assert!(ratio.coeff == BigInt::from(1) || ratio.coeff == BigInt::from(-1));
    }
}

fn pair_strategy() -> impl Strategy<Value = (BoxDims, usize, usize)> {
    (1u32..=3, 1u32..=3, 1u32..=3, any::<prop::sample::Index>(), any::<prop::sample::Index>())
        .prop_map(|(a, b, c, i, j)| {
            let d = dims(a, b, c);
            let n = enumerate_diagrams(d).count();
            (d, i.index(n), j.index(n))
        })
}

proptest! {
    #[test]
    fn random_pairs_roundtrip((d, i, j) in pair_strategy()) {
        let mesh = HexMesh::new(d);
        let p1 = enumerate_diagrams(d).nth(i).unwrap();
        let p2 = enumerate_diagrams(d).nth(j).unwrap();
        let m1 = matching_of(&mesh, &p1).unwrap();
        let m2 = matching_of(&mesh, &p2).unwrap();
        let lambda = overlay(&mesh, &m1, &m2).unwrap();
        prop_assert_eq!(overlay(&mesh, &m2, &m1).unwrap(), lambda.clone());
        prop_assert!(split(&lambda).contains(&(m1.clone(), m2.clone())));
        let doubled = lambda.doubled().len();
        let loop_edges: usize = lambda.loops().iter().map(Vec::len).sum();
        prop_assert_eq!(2 * doubled + loop_edges, m1.len() + m2.len());
    }
}

use std::sync::{Arc, OnceLock};

use proptest::prelude::*;

use conicpart::classify::{canonical_partition, conic_stabilizer, StabilizerGroup};
use conicpart::conic::{classify_point, ConicGeometry, PointClass};
use conicpart::families::{verify_partition, LineSet, Provenance};
use conicpart::gf::{make_field, Elem, FieldSpec};
use conicpart::plane::{Collineation, LineId};
use conicpart::search::{build_instance, solve_all, CoverMode, SearchOptions};

const FIELDS: [(u64, u32); 6] = [(3, 1), (5, 1), (7, 1), (3, 2), (11, 1), (13, 1)];

struct Fixture {
    geom: ConicGeometry,
    group: StabilizerGroup,
    solutions: Vec<LineSet>,
}

fn fixture(i: usize) -> &'static Fixture {
    static CELLS: [OnceLock<Fixture>; 6] =
        [OnceLock::new(), OnceLock::new(), OnceLock::new(), OnceLock::new(), OnceLock::new(), OnceLock::new()];
    CELLS[i].get_or_init(|| {
        let (p, h) = FIELDS[i];
        let geom = ConicGeometry::standard(make_field(p, h, None).unwrap());
        let group = conic_stabilizer(&geom);
        let inst = build_instance(&geom, CoverMode::Exact, None);
        let solutions = solve_all(&geom, &inst, &SearchOptions::default()).unwrap().solutions;
        Fixture { geom, group, solutions }
    })
}

fn field(i: usize) -> Arc<FieldSpec> {
    fixture(i).geom.field().clone()
}

fn random_set(fx: &Fixture, picks: &[u32]) -> LineSet {
    let n = fx.geom.plane().size() as u32;
    let mut ids: Vec<LineId> = picks.iter().map(|x| LineId(x % n)).collect();
    ids.sort_unstable();
    ids.dedup();
    LineSet::new(fx.geom.plane(), ids, Provenance::SearchResult).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn field_axioms(i in 0usize..6, a in 0u32..169, b in 0u32..169, c in 0u32..169) {
        let f = field(i);
        let q = f.q();
        let (a, b, c) = (f.elem(a % q).unwrap(), f.elem(b % q).unwrap(), f.elem(c % q).unwrap());
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.add(f.sub(a, b), b), a);
        prop_assert_eq!(f.chi(f.mul(a, b)), f.chi(a) * f.chi(b));
        if !a.is_zero() {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), Elem::ONE);
        }
    }

    #[test]
    fn collineations_preserve_incidence(i in 0usize..6, m in proptest::array::uniform9(0u32..169), pt in 0u32..183, ln in 0u32..183) {
        let fx = fixture(i);
        let f = fx.geom.field();
        let plane = fx.geom.plane();
        let q = f.q();
        let e: Vec<Elem> = m.iter().map(|&x| f.elem(x % q).unwrap()).collect();
        let Ok(g) = Collineation::new(f, [[e[0], e[1], e[2]], [e[3], e[4], e[5]], [e[6], e[7], e[8]]]) else {
            return Ok(());
        };
        let n = plane.size() as u32;
        let p = plane.point(conicpart::plane::PointId(pt % n));
        let l = plane.line(LineId(ln % n));
        prop_assert_eq!(plane.incident(&p, &l), plane.incident(&g.apply(f, &p), &g.apply_dual(f, &l)));
        prop_assert_eq!(g.inverse(f).apply(f, &g.apply(f, &p)), p);
    }

    #[test]
    fn stabilizer_preserves_point_classes(i in 0usize..6, k in 0usize..2184, pt in 0u32..183) {
        let fx = fixture(i);
        let plane = fx.geom.plane();
        let g = &fx.group.elements()[k % fx.group.order()];
        let p = plane.point(conicpart::plane::PointId(pt % plane.size() as u32));
        let f = fx.geom.field();
        let before: PointClass = classify_point(plane, fx.geom.conic(), &p);
        prop_assert_eq!(before, classify_point(plane, fx.geom.conic(), &g.apply(f, &p)));
    }

    #[test]
    fn canonical_form_is_a_class_function(i in 0usize..6, k in 0usize..2184, picks in proptest::collection::vec(0u32..183, 1..14)) {
        let fx = fixture(i);
        let set = random_set(fx, &picks);
        let moved = fx.group.apply(k % fx.group.order(), &set);
        let c = canonical_partition(&set, &fx.group).unwrap();
        prop_assert_eq!(&canonical_partition(&moved, &fx.group).unwrap(), &c);
        prop_assert_eq!(&canonical_partition(&c, &fx.group).unwrap(), &c);
    }

    #[test]
    fn partition_reports_are_invariant(i in 0usize..6, k in 0usize..2184, s in 0usize..200) {
        let fx = fixture(i);
        let set = &fx.solutions[s % fx.solutions.len()];
        let moved = fx.group.apply(k % fx.group.order(), set);
        let (a, b) = (verify_partition(&fx.geom, set), verify_partition(&fx.geom, &moved));
        prop_assert!(b.is_exact_partition);
        prop_assert_eq!(a.count_spectrum, b.count_spectrum);
        prop_assert_eq!(a.secant_count, b.secant_count);
        prop_assert!(fx.solutions.contains(&moved));
    }
}

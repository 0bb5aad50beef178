//! Property tests: every invariant is unchanged by relabeling crossings and
//! rotating dart positions, and the text format round-trips.

mod common;

use std::sync::OnceLock;

use dehn_core::diagram::canonical_code;
use dehn_core::group::h1_sigma;
use dehn_core::*;
use proptest::prelude::*;

fn pool() -> &'static [JohanssonDiagram] {
    static POOL: OnceLock<Vec<JohanssonDiagram>> = OnceLock::new();
    POOL.get_or_init(|| {
        let mut v = vec![common::sphere(), common::torus()];
        v.extend(common::q1());
        v.extend(common::q2().into_iter().step_by(97));
        v.push(handle_pipe(&common::sphere(), 1, PipeChoice::default()).unwrap());
        v
    })
}

fn relabeled() -> impl Strategy<Value = (JohanssonDiagram, JohanssonDiagram)> {
    (0..pool().len()).prop_flat_map(|i| {
        let d = pool()[i].clone();
        let n = d.crossings();
        (
            Just((0..n).collect::<Vec<_>>()).prop_shuffle(),
            prop::collection::vec(0..4usize, n),
        )
            .prop_map(move |(perm, shift)| (d.clone(), d.relabel(&perm, &shift)))
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 96, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn relabeling_preserves_invariants((d, e) in relabeled()) {
        prop_assert!(validate(&e, Mode::Strict).valid);
        prop_assert!(isomorphic(&d, &e, false).is_isomorphic());
        prop_assert_eq!(canonical_code(&d), canonical_code(&e));
        prop_assert_eq!(euler_genus(&d).unwrap(), euler_genus(&e).unwrap());
        prop_assert_eq!(trace_faces(&d).cycle_type(), trace_faces(&e).cycle_type());
        prop_assert_eq!(common::checkered(&d), common::checkered(&e));
        for ring in [Ring::Z, Ring::Z2] {
            prop_assert_eq!(h1_sigma(&d, ring).unwrap(), h1_sigma(&e, ring).unwrap());
            prop_assert_eq!(h1_paper(&d, ring).unwrap().1, h1_paper(&e, ring).unwrap().1);
        }
        prop_assert_eq!(
            filling_report(&d).unwrap().r_required,
            filling_report(&e).unwrap().r_required
        );
    }

    #[test]
    fn text_format_round_trips((_, e) in relabeled()) {
        let text = serialize_diagram(&e);
        prop_assert_eq!(parse_diagram(&text).unwrap(), e.clone());
        let json = serde_json::to_value(&e).unwrap();
        prop_assert_eq!(json["crossings"].as_u64().unwrap() as usize, e.crossings());
    }

    #[test]
    fn mirror_is_an_involution_preserving_counts((d, _) in relabeled()) {
        let m = d.mirror();
        prop_assert_eq!(m.mirror(), d.clone());
        prop_assert!(validate(&m, Mode::Strict).valid);
        prop_assert_eq!(euler_genus(&m).unwrap(), euler_genus(&d).unwrap());
        prop_assert_eq!(h1_sigma(&m, Ring::Z).unwrap(), h1_sigma(&d, Ring::Z).unwrap());
    }
}

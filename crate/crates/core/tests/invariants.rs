use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use leibniz_core::algebra::{unit, LeibnizAlgebra};
use leibniz_core::cohomology::{coboundary, Cochain, CohomologyConfig, LeibnizModule};
use leibniz_core::constructions::{
    build_l_general, build_n_c, build_r_c, build_r_particular, CharSeqSpec, LFamilyParams,
};
use leibniz_core::derivations::particular::TwoBlock;
use leibniz_core::derivations::{characteristic_sequence, derivation_space, inner_derivations, is_derivation};
use leibniz_core::linalg::SubspaceBasis;
use leibniz_core::rational::{q, Rational};

fn small_rational() -> impl Strategy<Value = Rational> {
    (-3i64..=3, 1i64..=3).prop_map(|(n, d)| q(n, d))
}

fn spec_strategy() -> impl Strategy<Value = CharSeqSpec> {
    prop::collection::vec(1usize..=3, 1..=3).prop_filter_map("needs a long first block", |mut parts| {
        parts.sort_unstable_by(|a, b| b.cmp(a));
        (parts[0] >= 2).then(|| CharSeqSpec::new(parts).unwrap())
    })
}

fn l_general_strategy() -> impl Strategy<Value = LFamilyParams> {
    spec_strategy().prop_flat_map(|spec| {
        let k = spec.k();
        (
            Just(spec),
            prop::collection::vec(small_rational(), k),
            prop::collection::vec(small_rational(), k),
        )
            .prop_map(|(spec, a, b)| LFamilyParams::new(spec, a, b).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn family_members_are_leibniz(params in l_general_strategy()) {
        let l = build_l_general(&params).unwrap();
        prop_assert!(l.check_identity().passed());
        prop_assert!(l.is_nilpotent());
        let round = LeibnizAlgebra::from_json_str(&l.to_json_string()).unwrap();
        prop_assert!(round.same_table(&l));
    }

    #[test]
    fn right_multiplications_are_inner_derivations(params in l_general_strategy()) {
        let l = build_l_general(&params).unwrap();
        let der = derivation_space(&l);
        let inner = inner_derivations(&l);
        prop_assert!(inner.is_subspace_of(der.subspace()));
        for m in der.basis() {
            prop_assert!(is_derivation(&l, &m).unwrap());
        }
    }

    #[test]
    fn coboundary_squares_to_zero(
        a2 in small_rational(), a3 in small_rational(), b1 in small_rational(), b2 in small_rational(),
        seed in any::<u64>(),
    ) {
        let l = TwoBlock::new(2, 1, a2, a3, b1, b2).build().unwrap();
        let m = LeibnizModule::adjoint(&l);
        let cfg = CohomologyConfig::default();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for degree in 0..=1 {
            let phi = Cochain::random(&m, degree, &mut rng);
            let dd = coboundary(&m, &coboundary(&m, &phi, &cfg).unwrap(), &cfg).unwrap();
            prop_assert!(dd.is_zero());
        }
    }

    #[test]
    fn charseq_of_the_model_algebra(spec in spec_strategy(), seed in any::<u64>()) {
        let nc = build_n_c(&spec).unwrap();
        let mut want = spec.parts().to_vec();
        want.push(1);
        prop_assert_eq!(characteristic_sequence(&nc, 50, seed).unwrap().parts, want);
    }
}

#[test]
fn quotient_by_h_recovers_the_lie_algebra() {
    for (n1, n2) in [(2, 1), (2, 2), (3, 1), (4, 2)] {
        let r = build_r_particular(n1, n2).unwrap();
        let h = r.label_index("h").unwrap();
        let span_h = SubspaceBasis::from_vectors(r.dim(), &[unit(r.dim(), h)]).unwrap();
        let rc = build_r_c(&CharSeqSpec::new(vec![n1, n2]).unwrap()).unwrap();
        assert!(r.quotient_by_ideal(&span_h).unwrap().algebra.same_table(&rc), "({n1},{n2})");
        assert_eq!(r.right_annihilator(), span_h);
    }
}

#[test]
fn adjoint_module_axioms_follow_the_identity() {
    let good = build_r_particular(2, 1).unwrap();
    assert!(LeibnizModule::adjoint(&good).check_axioms().is_empty());
    // bump one structure constant at a time; the identity and the module
    // axioms must pass or fail together
    let base = good.to_json();
    let mut broken = 0;
    for t in 0..base.table.len() {
        let mut json = base.clone();
        let p = &mut json.table[t].products[0];
        p.num = (p.num.parse::<i64>().unwrap() + 1).to_string();
        let mutated = json.into_algebra(false).unwrap();
        let identity = mutated.check_identity().passed();
        assert_eq!(identity, LeibnizModule::adjoint(&mutated).check_axioms().is_empty(), "entry {t}");
        broken += usize::from(!identity);
    }
    assert!(broken > 0);
}

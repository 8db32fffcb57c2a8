use heisenberg_core::cocycles::{cohomologous, morphism_defect, quadratic_refinement, CochainFunction};
use heisenberg_core::fab::{CoeffContext, FinAbGroup};
use heisenberg_core::heisenberg::{defect_of_section, equivalence_iso, HElem, Section};
use heisenberg_core::pairings::Pairing;
use heisenberg_core::text::{parse_cocycle, parse_pairing, parse_refinement};
use heisenberg_core::{Cocycle, HeisenbergGroup};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn small_group(rng: &mut StdRng, max_order: u64) -> FinAbGroup {
    let mut ms = Vec::new();
    let mut order = 1;
    while ms.len() < 3 {
        let n = rng.gen_range(2..=8u64);
        if order * n > max_order {
            break;
        }
        order *= n;
        ms.push(n);
        if rng.gen_bool(0.4) {
            break;
        }
    }
    FinAbGroup::new(ms).unwrap()
}

fn context(rng: &mut StdRng) -> CoeffContext {
    match rng.gen_range(0..4) {
        0 => CoeffContext::divisible(1),
        1 => CoeffContext::divisible(2),
        2 => CoeffContext::finite([4]).unwrap(),
        _ => CoeffContext::finite([2, 6]).unwrap(),
    }
}

#[test]
fn thousand_random_defects_are_symmetric_cocycles() {
    let mut rng = StdRng::seed_from_u64(20);
    for _ in 0..1000 {
        let a = small_group(&mut rng, 32);
        let ctx = context(&mut rng);
        let f = CochainFunction::random(&a, &ctx, 12, &mut rng);
        let c = morphism_defect(&f);
        assert!(c.is_cocycle(), "Δf fails on {a} over {ctx}");
        assert!(c.is_symmetric());
        assert!(c.omega().unwrap().is_zero());
    }
}

#[test]
fn refinements_of_defects_differ_by_homomorphisms() {
    let mut rng = StdRng::seed_from_u64(21);
    for _ in 0..200 {
        let a = small_group(&mut rng, 32);
        let ctx = CoeffContext::divisible(1);
        let f = CochainFunction::random(&a, &ctx, 24, &mut rng);
        let c = f.defect();
        let g = quadratic_refinement(&c).unwrap();
        assert_eq!(g.defect(), c);
        assert!(g.sub(&f).unwrap().is_homomorphism());
    }
}

#[test]
fn pairing_plus_coboundary_stays_in_class() {
    let mut rng = StdRng::seed_from_u64(22);
    for _ in 0..200 {
        let a = small_group(&mut rng, 24);
        let ctx = CoeffContext::divisible(1);
        let beta = Cocycle::from_pairing(Pairing::random(&a, &ctx, &mut rng));
        let f = CochainFunction::random(&a, &ctx, 6, &mut rng);
        let c = beta.add(&f.defect()).unwrap();
        let cmp = cohomologous(&c, &beta).unwrap();
        assert!(cmp.cohomologous && cmp.omega_equal);
    }
}

#[test]
fn shifted_sections_and_equivalences() {
    let mut rng = StdRng::seed_from_u64(23);
    for _ in 0..100 {
        let a = small_group(&mut rng, 16);
        let ctx = CoeffContext::divisible(1);
        let h = HeisenbergGroup::new(Cocycle::from_pairing(Pairing::random(&a, &ctx, &mut rng))).unwrap();
        let g = CochainFunction::random(&a, &ctx, 8, &mut rng);
        let s = Section::shifted(&h, &g).unwrap();
        assert_eq!(defect_of_section(&h, &s).unwrap(), h.cocycle().sub(&g.defect()).unwrap());

        let h2 = HeisenbergGroup::new(h.cocycle().add(&g.defect()).unwrap()).unwrap();
        let iso = equivalence_iso(&h, &h2, &g).unwrap();
        iso.verify().unwrap();
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn heisenberg_law_is_a_group(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let a = small_group(&mut rng, 32);
        let ctx = context(&mut rng);
        let beta = Cocycle::from_pairing(Pairing::random(&a, &ctx, &mut rng));
        let c = beta.add(&CochainFunction::random(&a, &ctx, 4, &mut rng).defect()).unwrap();
        let h = HeisenbergGroup::new(c).unwrap();
        let pick = |rng: &mut StdRng| {
            let x = a.elem_at(rng.gen_range(0..a.order()));
            HElem::new(ctx.random(4, rng), x)
        };
        let (x, y, z) = (pick(&mut rng), pick(&mut rng), pick(&mut rng));
        prop_assert_eq!(h.mul(&h.mul(&x, &y), &z), h.mul(&x, &h.mul(&y, &z)));
        prop_assert_eq!(h.mul(&x, &h.inv(&x)), h.identity());
        prop_assert_eq!(h.mul(&h.inv(&x), &x), h.identity());
        let comm = h.commutator(&x, &y);
        prop_assert!(comm.x.is_zero());
        prop_assert_eq!(comm.t, h.omega().eval(&x.x, &y.x));
    }

    #[test]
    fn text_formats_round_trip(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let a = small_group(&mut rng, 16);
        let ctx = context(&mut rng);
        let p = Pairing::random(&a, &ctx, &mut rng);
        prop_assert_eq!(parse_pairing(&p.to_string()).unwrap(), p.clone());
        let f = CochainFunction::random(&a, &ctx, 6, &mut rng);
        prop_assert_eq!(parse_refinement(&f.to_string()).unwrap(), f.clone());
        let c = Cocycle::from_pairing(p).add(&f.defect()).unwrap();
        prop_assert_eq!(parse_cocycle(&c.to_string()).unwrap(), c);
    }
}

use laurentcc_core::aut::AutElement;
use laurentcc_core::cocycles::Cocycle;
use laurentcc_core::parse::parse_series;
use laurentcc_core::precision::Precision;
use laurentcc_core::rings::Ring;
use laurentcc_core::series::{LaurentSeries, SeriesSampler};
use laurentcc_core::symbol::{cc, SymbolStrategy};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const RINGS: [&str; 4] = ["Q", "Q[e;2]", "Z/4", "Q[e1;2,e2;2]"];

fn ring() -> impl Strategy<Value = Ring> {
    prop::sample::select(RINGS.to_vec()).prop_map(|d| Ring::parse(d).unwrap())
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn series_ring_laws(r in ring(), seed in any::<u64>()) {
        let s = SeriesSampler::new(&r);
        let mut g = rng(seed);
        let (a, b, c) = (s.laurent_polynomial(&mut g), s.laurent_polynomial(&mut g), s.laurent_polynomial(&mut g));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert!((&a - &a).is_exact_zero());
    }

    #[test]
    fn unit_inverse(r in ring(), seed in any::<u64>(), cap in 4i64..20) {
        let u = SeriesSampler::new(&r).unit(&mut rng(seed));
        let inv = u.invert_unit(cap).unwrap();
        let one = u.mul_capped(&inv, None);
        prop_assert!(one.agrees_with(&LaurentSeries::one(&r)), "{} * {} = {}", u, inv, one);
    }

    #[test]
    fn display_reparses(r in ring(), seed in any::<u64>(), cap in prop::option::of(-2i64..6)) {
        let mut s = SeriesSampler::new(&r).laurent_polynomial(&mut rng(seed));
        if let Some(n) = cap {
            s = s.cap(n);
        }
        let back = parse_series(&s.to_string(), &r).unwrap();
        prop_assert!(back.identical(&s), "{} reparsed as {}", s, back);
    }

    #[test]
    fn automorphisms_associate_and_invert(r in ring(), seed in any::<u64>()) {
        let s = SeriesSampler::new(&r).with_shape(1, 2);
        let mut g = rng(seed);
        let n = 12;
        let [a, b, c] = [(); 3].map(|_| AutElement::new(s.automorphism(&mut g)).unwrap());
        let left = a.mul(&b, n).unwrap().mul(&c, n).unwrap();
        let right = a.mul(&b.mul(&c, n).unwrap(), n).unwrap();
        prop_assert!(left.tilde().agrees_with(right.tilde()), "{} vs {}", left, right);
        prop_assert!(a.mul(&a.inverse(n).unwrap(), n).unwrap().is_identity());
    }

    #[test]
    fn ring_maps_commute_with_symbol_and_cocycles(seed in any::<u64>()) {
        let big = Ring::parse("Q[e;3]").unwrap();
        let small = Ring::parse("Q[e;2]").unwrap();
        let mut g = rng(seed);
        let s = SeriesSampler::new(&big).with_shape(1, 2);
        let (u, v) = (s.unit(&mut g), s.unit(&mut g));
        let down = |x: &LaurentSeries| x.coerce(&small).unwrap();
        let strategy = SymbolStrategy::ProductFormula;
        let value = cc(&u, &v, strategy).unwrap();
        prop_assert_eq!(small.coerce(&value).unwrap(), cc(&down(&u), &down(&v), strategy).unwrap());

        let (f, h) = (s.automorphism(&mut g), s.automorphism(&mut g));
        let aut = |x: &LaurentSeries| AutElement::new(x.clone()).unwrap();
        for which in [Cocycle::BottThurston, Cocycle::Determinant] {
            let up = which.eval(&aut(&f), &aut(&h), strategy, Precision::default()).unwrap();
            let low = which.eval(&aut(&down(&f)), &aut(&down(&h)), strategy, Precision::default()).unwrap();
            prop_assert_eq!(small.coerce(&up).unwrap(), low, "{} at ({}, {})", which, f, h);
        }
    }
}

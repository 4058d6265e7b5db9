//! Randomized checks of the structural invariants, one block per module.

use etnckit::algebra_core::arith::gcd;
use etnckit::algebra_core::{rat, CyclotomicNumber, FiniteAbelianGroup, Scalar, UnitsModN};
use etnckit::cli::{parse_spec, run_job, DEFAULT_BUDGET_TERMS};
use etnckit::coleman::{sesquilinearity_check, PairingLevel};
use etnckit::det_calculus::{det02_sign_check, det_a_instance};
use etnckit::euler_units::{conductor_unit, conductor_unit_component, descent_identity_suite, random_descent_instance, random_filtration_instance};
use etnckit::gauss_sums::local::phase_to_cyclo;
use etnckit::gauss_sums::{global_gauss_sum, local_gauss_sum, phase, LocalCharacterData, LocalField};
use etnckit::lfunctions::gen_bernoulli;
use etnckit::local_ring::{padic_log, UnramifiedRing};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn arb_cyclo() -> impl Strategy<Value = CyclotomicNumber> {
    (1u64..=24, proptest::collection::vec((-5i64..=5, 1i64..=4), 24))
        .prop_map(|(n, c)| CyclotomicNumber::from_counts(n, c[..n as usize].iter().map(|&(a, b)| rat(a, b)).collect()))
}

fn same_order(x: &CyclotomicNumber, n: u64) -> CyclotomicNumber {
    CyclotomicNumber::from_parts(n, x.coeffs_at(n))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn cyclotomic_embedding_round_trips(x in arb_cyclo(), k in 1u64..=6) {
        let m = x.order() * k;
        prop_assert_eq!(same_order(&x, m), x);
    }

    #[test]
    fn cyclotomic_field_axioms(x in arb_cyclo(), y in arb_cyclo(), a in 1i64..48) {
        let xy = x.mul(&y);
        prop_assert_eq!(xy.clone(), y.mul(&x));
        if !y.is_zero() {
            prop_assert_eq!(xy.div(&y).unwrap(), x.clone());
        }
        let n = xy.order().max(1) as i64;
        if gcd(a as u64, n as u64) == 1 {
            prop_assert_eq!(xy.galois(a), x.galois(a).mul(&y.galois(a)));
            prop_assert_eq!(x.add(&y).galois(a), x.galois(a).add(&y.galois(a)));
        }
        prop_assert_eq!(x.conj().conj(), x.clone());
        let z = x.mul(&x.conj()).to_complex();
        prop_assert!(z.re >= -1e-9 && z.im.abs() < 1e-9);
    }

    #[test]
    fn characters_are_multiplicative(orders in proptest::collection::vec(1u64..7, 0..3), seeds in proptest::collection::vec(0usize..1000, 3)) {
        let g = FiniteAbelianGroup::new(orders);
        let chars = g.characters();
        let chi = &chars[seeds[0] % chars.len()];
        let a = g.element(seeds[1] % g.size());
        let b = g.element(seeds[2] % g.size());
        prop_assert_eq!(chi.value(&g.op(&a, &b)), chi.value(&a).mul(&chi.value(&b)));
        prop_assert!(chi.value(&g.identity()).is_one());
        prop_assert_eq!(chars[0].exps().iter().all(|&e| e == 0), true);
    }

    #[test]
    fn frobenius_is_a_lift_of_the_p_power(p in prop::sample::select(vec![3u64, 5]), r in 1usize..=3, n in 2u32..=4, seed in any::<u64>()) {
        use rand::Rng;
        let ring = UnramifiedRing::new(p, r, n).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut draw = || ring.elem((0..r).map(|_| rng.gen_range(0..ring.modulus_pn())).collect());
        let (a, b) = (draw(), draw());
        prop_assert_eq!(Scalar::mul(&a, &b).frobenius(), Scalar::mul(&a.frobenius(), &b.frobenius()));
        prop_assert_eq!(Scalar::add(&a, &b).frobenius(), Scalar::add(&a.frobenius(), &b.frobenius()));
        let ap = a.pow_u(p);
        for (x, y) in a.frobenius().coeffs().iter().zip(ap.coeffs()) {
            prop_assert_eq!(x % p, y % p);
        }
        prop_assert_eq!(a.frobenius_pow(r as i64), a.clone());
        prop_assert_eq!(Scalar::mul(&a, &b).norm(), a.norm().mul(&b.norm()));
    }

    #[test]
    fn log_is_a_frobenius_equivariant_homomorphism(p in prop::sample::select(vec![3u64, 5, 7]), r in 1usize..=2, n in 2u32..=5, seed in any::<u64>()) {
        use rand::Rng;
        let ring = UnramifiedRing::new(p, r, n).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut one_unit = || {
            let c = (0..r).map(|_| p * rng.gen_range(0..ring.modulus_pn() / p)).collect();
            Scalar::add(&ring.one(), &ring.elem(c))
        };
        let (u, v) = (one_unit(), one_unit());
        let lu = padic_log(&u).unwrap();
        prop_assert_eq!(padic_log(&u.frobenius()).unwrap(), lu.frobenius());
        prop_assert_eq!(padic_log(&Scalar::mul(&u, &v)).unwrap(), Scalar::add(&lu, &padic_log(&v).unwrap()));
    }

    #[test]
    fn local_gauss_sum_norm_law(field in prop::sample::select(vec![(3u64, 1usize, 1u32), (3, 1, 3), (5, 1, 2), (3, 2, 2), (5, 3, 1), (11, 2, 1), (7, 1, 2)]), pick in any::<prop::sample::Index>()) {
        let (p, r, n) = field;
        let f = LocalField::new(p, r, n).unwrap();
        let all = LocalCharacterData::all(&f, phase(0, 1));
        let chi = pick.get(&all);
        let a = local_gauss_sum(chi);
        let b = local_gauss_sum(&chi.inverse());
        let norm = p.pow(chi.conductor_exponent() * r as u32);
        prop_assert_eq!(a.conductor_norm, norm);
        let want = phase_to_cyclo(chi.theta_minus_one()).mul(&CyclotomicNumber::from_int(norm as i64));
        prop_assert_eq!(a.value.mul(&b.value), want);
        let z = a.value.to_complex();
        prop_assert!((z.norm_sqr() - norm as f64).abs() < 1e-12 * norm as f64 + 1e-12);
    }

    #[test]
    fn global_gauss_sum_norms_and_bernoulli_parity(f in 1u64..=60, pick in any::<prop::sample::Index>(), n in 1usize..=6) {
        let u = UnitsModN::new(f);
        let chars = u.characters();
        let chi = pick.get(&chars);
        let odd = chi.is_odd(&u);
        if chi.conductor(&u) == f {
            let t = global_gauss_sum(&u, chi).mul(&global_gauss_sum(&u, &chi.inverse()));
            prop_assert_eq!(t, CyclotomicNumber::from_int(if odd { -(f as i64) } else { f as i64 }));
        }
        let b = gen_bernoulli(n, &u, chi);
        if odd == (n % 2 == 0) && !(n == 1 && chi.chi.is_trivial()) {
            prop_assert!(b.is_zero());
        }
        prop_assert_eq!(gen_bernoulli(n, &u, &chi.inverse()), b.conj());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn descent_identities_hold(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = random_descent_instance(&mut rng, 32).unwrap();
        let rep = descent_identity_suite(&inst).unwrap();
        prop_assert!(rep.pass(), "{:?}", rep);
    }

    #[test]
    fn conductor_unit_inverts_and_matches_components(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = random_filtration_instance(&mut rng, 32).unwrap();
        let f = conductor_unit(&inst.place, &inst.sigma, inst.j, inst.p, 6).unwrap();
        prop_assert!(f.value.mul(&f.inverse).is_one());
        for chi in inst.place.group().characters() {
            prop_assert_eq!(f.value.chi_component(&chi), conductor_unit_component(&inst.place, &inst.sigma, &chi, inst.j));
        }
    }

    #[test]
    fn determinant_sign_laws(seed in any::<u64>()) {
        let a = det_a_instance(seed).unwrap();
        prop_assert!(a.pass, "{:?}", a);
        let b = det02_sign_check(seed).unwrap();
        prop_assert!(b.pass, "{:?}", b);
    }

    #[test]
    fn pairing_is_sesquilinear(seed in any::<u64>(), level in prop::sample::select(vec![(3u64, 1usize, 1u32), (3, 2, 1), (5, 1, 1), (3, 1, 2)])) {
        let (p, r, n) = level;
        let lvl = PairingLevel::new(UnramifiedRing::new(p, r, 5).unwrap(), n).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (sesquilinear, involutive) = sesquilinearity_check(&lvl, &mut rng);
        prop_assert!(sesquilinear && involutive);
    }

    #[test]
    fn jobs_are_reproducible(seed in any::<u64>(), check in prop::sample::select(vec!["euler_identities", "det_signs", "pairing", "conductor_unit"])) {
        let text = format!(r#"{{"jobs": [{{"check": "{check}", "params": {{"{}": 3}}, "seed": {seed}}}]}}"#, size_key(check));
        let job = parse_spec(&text, false).unwrap().jobs.remove(0);
        let a = run_job(&job, DEFAULT_BUDGET_TERMS);
        let b = run_job(&job, DEFAULT_BUDGET_TERMS);
        prop_assert_eq!(etnckit::cli::report_json(&a), etnckit::cli::report_json(&b));
        prop_assert_eq!(a.status.label(), "pass");
    }
}

fn size_key(check: &str) -> &'static str {
    match check {
        "pairing" => "triples",
        _ => "instances",
    }
}

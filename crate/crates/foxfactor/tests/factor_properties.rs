use foxfactor::factor::{divide_right, factorize, gcd, gcd_set, lattice_of};
use foxfactor::repmod::composition_series;
use foxfactor::words::Letter;
use foxfactor::{FieldSpec, FreePolynomial, ReducedWord};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const F5: FieldSpec = FieldSpec::Prime(5);

fn random_comonic(rng: &mut ChaCha8Rng, max_len: usize) -> FreePolynomial {
    loop {
        let p = FreePolynomial::random(rng, 2, F5, max_len, 3);
        let e = p.augmentation();
        if !e.is_zero() {
            return p.scale(&e.inv().unwrap());
        }
    }
}

/// `a + b s` with `s` a letter, `a + b = 1` and `a, b ≠ 0`.
fn special_linear(rng: &mut ChaCha8Rng) -> FreePolynomial {
    let i = rng.gen_range(1..=2);
    let l = if rng.gen_bool(0.5) {
        Letter::pos(i)
    } else {
        Letter::neg(i)
    };
    let b = rng.gen_range(1..5u64);
    let b = if b == 1 { 2 } else { b };
    let a = (6 - b) % 5;
    let mut p = FreePolynomial::constant(2, F5.from_u64(a));
    p.add_term(ReducedWord::letter(l), F5.from_u64(b));
    p
}

#[test]
fn gcd_of_common_right_multiples() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..100 {
        let pi = random_comonic(&mut rng, 2);
        let a = random_comonic(&mut rng, 2);
        let b = random_comonic(&mut rng, 2);
        let (ap, bp) = (&a * &pi, &b * &pi);
        let d = gcd(&ap, &bp).unwrap_or_else(|e| panic!("gcd({ap}, {bp}) failed: {e}"));
        assert!(d.is_comonic());
        for g in [&ap, &bp] {
            let rho = divide_right(g, &d, None).unwrap();
            assert_eq!(&(&rho * &d), g);
        }
        let sigma = divide_right(&d, &pi, None).unwrap();
        assert_eq!(&sigma * &pi, d);
        let mut gens = vec![bp.clone(), ap.clone(), bp.clone()];
        gens.shuffle(&mut rng);
        assert_eq!(gcd_set(&gens).unwrap(), d);
        assert_eq!(gcd(&bp, &ap).unwrap(), d);
    }
}

#[test]
fn factorization_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..50 {
        let k = rng.gen_range(2..=3);
        let parts: Vec<FreePolynomial> = (0..k).map(|_| special_linear(&mut rng)).collect();
        let g = parts
            .iter()
            .skip(1)
            .fold(parts[0].clone(), |acc, p| &acc * p);
        let f = factorize(&g).unwrap_or_else(|e| panic!("factorize({g}) failed: {e}"));
        assert_eq!(f.len(), k, "{g}");
        assert_eq!(f.product(2), g);
        let chain = composition_series(&lattice_of(&g).unwrap().module).unwrap();
        assert_eq!(chain.len() - 1, k);
    }
}

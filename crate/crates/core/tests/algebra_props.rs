mod common;

use common::*;
use proptest::prelude::*;
use spatial_core::matrix::EchelonBasis;
use spatial_core::poly::{
    companion, factor_prime_powers, factor_prime_powers_seeded, is_prime_power, mobius_charpoly_check,
    mobius_transform, poly_gcd,
};
use spatial_core::{Matrix, Mobius2x2, Poly, PrimeField};

fn prime() -> impl Strategy<Value = u32> {
    prop::sample::select(vec![2u32, 3, 5, 7, 11, 13])
}

fn field_and_matrix(max: usize) -> impl Strategy<Value = (PrimeField, Matrix)> {
    (prime(), 0..=max, 0..=max).prop_flat_map(|(p, r, c)| {
        prop::collection::vec(0..p, r * c).prop_map(move |v| {
            let f = gf(p);
            (f, Matrix::from_fn(f, r, c, |i, j| v[i * c + j]))
        })
    })
}

fn field_and_square(max: usize) -> impl Strategy<Value = (PrimeField, Matrix)> {
    (prime(), 0..=max).prop_flat_map(|(p, n)| {
        prop::collection::vec(0..p, n * n).prop_map(move |v| {
            let f = gf(p);
            (f, Matrix::from_fn(f, n, n, |i, j| v[i * n + j]))
        })
    })
}

fn field_and_poly(max_deg: usize) -> impl Strategy<Value = Poly> {
    (prime(), 0..=max_deg).prop_flat_map(|(p, d)| {
        prop::collection::vec(0..p, d).prop_map(move |mut c| {
            c.push(1);
            Poly::new(gf(p), c)
        })
    })
}

fn poly_pair(d1: usize, d2: usize) -> impl Strategy<Value = (Poly, Poly)> {
    (prime(), 0..=d1, 0..=d2).prop_flat_map(|(p, a, b)| {
        (prop::collection::vec(0..p, a), prop::collection::vec(0..p, b)).prop_map(move |(mut x, mut y)| {
            x.push(1);
            y.push(1);
            (Poly::new(gf(p), x), Poly::new(gf(p), y))
        })
    })
}

proptest! {
    #[test]
    fn field_inverse_and_distributivity(p in prime(), a in 0u32..13, b in 0u32..13, c in 0u32..13) {
        let f = gf(p);
        let (a, b, c) = (a % p, b % p, c % p);
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        if a != 0 {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
        }
        prop_assert_eq!(f.add(a, f.neg(a)), 0);
    }

    #[test]
    fn rref_transform_reproduces_reduced((_f, m) in field_and_matrix(6)) {
        let r = m.rref();
        prop_assert_eq!(r.transform.mul(&m), r.reduced.clone());
        prop_assert!(r.transform.is_invertible());
        prop_assert_eq!(r.pivots.len(), r.rank);
        prop_assert_eq!(m.rank(), m.transpose().rank());
    }

    #[test]
    fn kernel_and_rank_nullity((_f, m) in field_and_matrix(6)) {
        let k = m.kernel_basis();
        prop_assert_eq!(k.cols() + m.rank(), m.cols());
        prop_assert!(m.mul(&k).is_zero());
        prop_assert_eq!(k.rank(), k.cols());
    }

    #[test]
    fn inverse_of_invertible((f, m) in field_and_square(6)) {
        match m.inverse() {
            Ok(inv) => prop_assert_eq!(m.mul(&inv), Matrix::identity(f, m.rows())),
            Err(_) => prop_assert!(m.rank() < m.rows()),
        }
    }

    #[test]
    fn rank_normal_form_holds((f, m) in field_and_matrix(6)) {
        let (r, l, s) = m.rank_normal_form();
        let got = l.mul(&m).mul(&s);
        let want = Matrix::from_fn(f, m.rows(), m.cols(), |i, j| u32::from(i == j && i < r));
        prop_assert_eq!(got, want);
        prop_assert!(l.is_invertible() && s.is_invertible());
    }

    #[test]
    fn basis_extension_is_invertible((_f, m) in field_and_matrix(6)) {
        let indep = m.column_space();
        let full = indep.extend_to_basis();
        prop_assert!(full.is_invertible());
        prop_assert_eq!(full.submatrix(0..m.rows(), 0..indep.cols()), indep);
    }

    #[test]
    fn echelon_basis_tracks_rank((f, m) in field_and_matrix(6)) {
        let mut basis = EchelonBasis::new(f, m.rows());
        let added = m.columns().iter().filter(|c| basis.insert(c)).count();
        prop_assert_eq!(added, m.rank());
        for c in m.columns() {
            prop_assert!(basis.contains(&c));
        }
    }

    #[test]
    fn char_poly_annihilates((_f, m) in field_and_square(6)) {
        let chi = m.char_poly();
        prop_assert_eq!(chi.degree(), Some(m.rows()));
        prop_assert!(m.eval_poly(&chi).is_zero());
    }

    #[test]
    fn companion_has_its_char_poly(chi in field_and_poly(6)) {
        prop_assume!(chi.degree().unwrap() > 0);
        prop_assert_eq!(companion(&chi).unwrap().char_poly(), chi);
    }

    #[test]
    fn division_identity((a, b) in poly_pair(8, 5)) {
        let (q, r) = a.div_rem(&b);
        prop_assert_eq!(q.mul(&b).add(&r), a);
        prop_assert!(r.is_zero() || r.degree() < b.degree());
    }

    #[test]
    fn gcd_divides_both((a, b) in poly_pair(6, 6)) {
        let g = poly_gcd(&a, &b).unwrap();
        prop_assert!(g.is_monic());
        prop_assert!(a.rem(&g).is_zero() && b.rem(&g).is_zero());
    }

    #[test]
    fn factorization_multiplies_back(chi in field_and_poly(8), seed in any::<u64>()) {
        prop_assume!(chi.degree().unwrap() > 0);
        let factors = factor_prime_powers(&chi).unwrap();
        let product = factors.iter().fold(Poly::one(chi.field()), |acc, f| acc.mul(&f.expand()));
        prop_assert_eq!(product, chi.clone());
        for w in factors.windows(2) {
            prop_assert!(w[0].base != w[1].base);
        }
        for f in &factors {
            prop_assert!(is_prime_power(&f.expand()));
        }
        // output does not depend on the random seed
        prop_assert_eq!(factor_prime_powers_seeded(&chi, seed).unwrap(), factors);
    }

    #[test]
    fn mobius_routes_agree(chi in field_and_poly(5), a in 0u32..13, b in 0u32..13, c in 0u32..13, d in 0u32..13) {
        prop_assume!(chi.degree().unwrap() > 0);
        let f = chi.field();
        let Ok(t) = Mobius2x2::new(f, a, b, c, d) else { return Ok(()) };
        match mobius_transform(&chi, &t) {
            Ok(eta) => {
                prop_assert_eq!(mobius_charpoly_check(&chi, &t).unwrap(), eta.clone());
                // the inverse substitution undoes the transform
                prop_assert_eq!(mobius_transform(&eta, &t.inverse()).unwrap(), chi);
            }
            Err(_) => prop_assert!(mobius_charpoly_check(&chi, &t).is_err()),
        }
    }

    #[test]
    fn mobius_preserves_prime_powers(chi in field_and_poly(4), a in 0u32..13, b in 0u32..13, c in 0u32..13, d in 0u32..13) {
        prop_assume!(chi.degree().unwrap() > 0 && is_prime_power(&chi));
        let Ok(t) = Mobius2x2::new(chi.field(), a, b, c, d) else { return Ok(()) };
        if let Ok(eta) = mobius_transform(&chi, &t) {
            prop_assert!(is_prime_power(&eta));
            prop_assert_eq!(eta.degree(), chi.degree());
        }
    }
}

#[test]
fn pgl2_sizes() {
    for p in [2u32, 3, 5, 7, 13] {
        let n = Mobius2x2::projective_representatives(gf(p)).len() as u32;
        assert_eq!(n, p * p * p - p);
    }
}

mod common;

use common::*;
use proptest::prelude::*;
use rand::Rng;
use spatial_core::pencil::{companion_sum, frobenius_form, kronecker_form, kronecker_form_seeded, PencilBlock};
use spatial_core::Matrix;

fn prime() -> impl Strategy<Value = u32> {
    prop::sample::select(vec![2u32, 3, 5, 7])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn kronecker_recovers_scrambled_blocks(p in prime(), seed in any::<u64>()) {
        let f = gf(p);
        let mut rng = rng(seed);
        let form = random_blocks(f, 6, &mut rng);
        let (b1, b2) = form.synthesize();
        let (a1, a2) = scramble_pencil(&b1, &b2, &mut rng);
        let (got, w) = kronecker_form(&a1, &a2).unwrap();
        prop_assert_eq!(&got.blocks, &form.blocks);
        prop_assert!(w.verifies(&a1, &a2, &got));
    }

    #[test]
    fn kronecker_of_random_pencils(p in prime(), m in 0usize..=6, n in 0usize..=6, seed in any::<u64>()) {
        let f = gf(p);
        let mut rng = rng(seed);
        let a1 = random_matrix(f, m, n, &mut rng);
        let a2 = random_matrix(f, m, n, &mut rng);
        let (form, w) = kronecker_form(&a1, &a2).unwrap();
        prop_assert!(w.verifies(&a1, &a2, &form));
        let mut sorted = form.blocks.clone();
        sorted.sort();
        prop_assert_eq!(&sorted, &form.blocks);
        // the form depends on the pencil only, not on the factorization seed
        let (again, _) = kronecker_form_seeded(&a1, &a2, seed).unwrap();
        prop_assert_eq!(again, form);
    }

    #[test]
    fn frobenius_similarity(p in prime(), n in 0usize..=6, seed in any::<u64>()) {
        let f = gf(p);
        let mut rng = rng(seed);
        let a = random_matrix(f, n, n, &mut rng);
        let (polys, pm) = frobenius_form(&a).unwrap();
        prop_assert_eq!(pm.inverse().unwrap().mul(&a).mul(&pm), companion_sum(f, &polys).unwrap());
        let t = random_invertible(f, n, &mut rng);
        let conj = t.inverse().unwrap().mul(&a).mul(&t);
        prop_assert_eq!(frobenius_form(&conj).unwrap().0, polys);
    }

    #[test]
    fn transposed_pencil_swaps_singular_blocks(p in prime(), seed in any::<u64>()) {
        let f = gf(p);
        let mut rng = rng(seed);
        let (m, n) = (rng.gen_range(0..=5usize), rng.gen_range(0..=5usize));
        let a1 = random_matrix(f, m, n, &mut rng);
        let a2 = random_matrix(f, m, n, &mut rng);
        let (form, _) = kronecker_form(&a1, &a2).unwrap();
        let (tf, _) = kronecker_form(&a1.transpose(), &a2.transpose()).unwrap();
        prop_assert_eq!(form.right_indices(), tf.left_indices());
        prop_assert_eq!(form.left_indices(), tf.right_indices());
        prop_assert_eq!(form.finite_polys(), tf.finite_polys());
        prop_assert_eq!(form.infinite_sizes(), tf.infinite_sizes());
    }
}

#[test]
fn identity_pencils_have_only_finite_blocks() {
    let f = gf(3);
    let id = Matrix::identity(f, 4);
    let (form, _) = kronecker_form(&id, &Matrix::zeros(f, 4, 4)).unwrap();
    assert_eq!(form.blocks, vec![PencilBlock::Finite(spatial_core::Poly::x(f)); 4]);
    let (form, _) = kronecker_form(&Matrix::zeros(f, 4, 4), &id).unwrap();
    assert_eq!(form.blocks, vec![PencilBlock::Infinite(1); 4]);
}

#[test]
fn empty_and_degenerate_shapes() {
    let f = gf(5);
    let (form, _) = kronecker_form(&Matrix::zeros(f, 0, 3), &Matrix::zeros(f, 0, 3)).unwrap();
    assert_eq!(form.blocks, vec![PencilBlock::RightSingular(1); 3]);
    let (form, _) = kronecker_form(&Matrix::zeros(f, 2, 0), &Matrix::zeros(f, 2, 0)).unwrap();
    assert_eq!(form.blocks, vec![PencilBlock::LeftSingular(1); 2]);
    let (form, _) = kronecker_form(&Matrix::zeros(f, 0, 0), &Matrix::zeros(f, 0, 0)).unwrap();
    assert!(form.blocks.is_empty());
    assert!(kronecker_form(&Matrix::zeros(f, 1, 2), &Matrix::zeros(f, 2, 1)).is_err());
}

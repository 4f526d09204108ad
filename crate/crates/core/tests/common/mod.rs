#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
use spatial_core::pencil::{KroneckerForm, PencilBlock};
use spatial_core::poly::is_prime_power;
use spatial_core::{Matrix, Poly, PrimeField, SpatialMatrix, TransformWitness};

pub fn gf(p: u32) -> PrimeField {
    PrimeField::new(p).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_matrix(f: PrimeField, rows: usize, cols: usize, rng: &mut impl Rng) -> Matrix {
    Matrix::from_fn(f, rows, cols, |_, _| rng.gen_range(0..f.p()))
}

pub fn random_invertible(f: PrimeField, n: usize, rng: &mut impl Rng) -> Matrix {
    loop {
        let m = random_matrix(f, n, n, rng);
        if m.is_invertible() {
            return m;
        }
    }
}

pub fn random_tensor(f: PrimeField, dims: (usize, usize, usize), rng: &mut impl Rng) -> SpatialMatrix {
    SpatialMatrix::from_fn(f, dims, |_, _, _| rng.gen_range(0..f.p()))
}

/// Random tensor biased towards low rank, so degenerate cases show up often.
pub fn random_sparse_tensor(f: PrimeField, dims: (usize, usize, usize), rng: &mut impl Rng) -> SpatialMatrix {
    let density = rng.gen_range(0.1..0.9);
    SpatialMatrix::from_fn(f, dims, |_, _, _| {
        if rng.gen_bool(density) {
            rng.gen_range(1..f.p())
        } else {
            0
        }
    })
}

pub fn random_witness(f: PrimeField, (m, n, q): (usize, usize, usize), rng: &mut impl Rng) -> TransformWitness {
    TransformWitness::new(
        random_invertible(f, m, rng),
        random_invertible(f, n, rng),
        random_invertible(f, q, rng),
    )
    .unwrap()
}

pub fn random_monic(f: PrimeField, degree: usize, rng: &mut impl Rng) -> Poly {
    let mut c: Vec<u32> = (0..degree).map(|_| rng.gen_range(0..f.p())).collect();
    c.push(1);
    Poly::new(f, c)
}

pub fn random_prime_power(f: PrimeField, degree: usize, rng: &mut impl Rng) -> Poly {
    loop {
        let chi = random_monic(f, degree, rng);
        if is_prime_power(&chi) {
            return chi;
        }
    }
}

/// Random block list with both slice dimensions at most `max`.
pub fn random_blocks(f: PrimeField, max: usize, rng: &mut impl Rng) -> KroneckerForm {
    let mut blocks = Vec::new();
    let (mut rows, mut cols) = (0, 0);
    for _ in 0..rng.gen_range(0..6) {
        let b = match rng.gen_range(0..4) {
            0 => PencilBlock::RightSingular(rng.gen_range(1..4)),
            1 => PencilBlock::LeftSingular(rng.gen_range(1..4)),
            2 => PencilBlock::Infinite(rng.gen_range(1..4)),
            _ => PencilBlock::Finite(random_prime_power(f, rng.gen_range(1..4), rng)),
        };
        let (r, c) = b.dims();
        if rows + r <= max && cols + c <= max {
            rows += r;
            cols += c;
            blocks.push(b);
        }
    }
    KroneckerForm::new(f, blocks)
}

/// `(R^T A1 S, R^T A2 S)` for random invertible `R`, `S`.
pub fn scramble_pencil(a1: &Matrix, a2: &Matrix, rng: &mut impl Rng) -> (Matrix, Matrix) {
    let f = a1.field();
    let r = random_invertible(f, a1.rows(), rng);
    let s = random_invertible(f, a1.cols(), rng);
    let rt = r.transpose();
    (rt.mul(a1).mul(&s), rt.mul(a2).mul(&s))
}

pub fn block_multiset(k: &KroneckerForm) -> Vec<PencilBlock> {
    let mut b = k.blocks.clone();
    b.sort();
    b
}

//! Canonical forms of matrix pairs under `(A1, A2) -> (R^T A1 S, R^T A2 S)`.
//!
//! [`kronecker_form`] splits a pencil into singular, finite and infinite
//! blocks and returns the invertible `R`, `S` that realize the split:
//!
//! 1. Right singular blocks come from a minimal polynomial basis of the kernel
//!    of `x*A1 - A2`; the coefficient vectors of its members span the block
//!    columns. The off-diagonal coupling that remains is removed by solving a
//!    generalized Sylvester system.
//! 2. Left singular blocks are the right singular blocks of the transpose.
//! 3. The regular remainder is split into finite and infinite parts with the
//!    Wong sequences; the finite part becomes `(I, C)` and `C` is brought to
//!    Frobenius form, the infinite part becomes `(N, I)` with `N` nilpotent.

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::matrix::{EchelonBasis, Matrix};
use crate::poly::{companion, factor_prime_powers_seeded, Poly, DEFAULT_SEED};

/// One indecomposable summand. The derived order is the canonical block order:
/// right singular, left singular, infinite, finite.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PencilBlock {
    /// `(F_r, G_r)`, size `(r-1) x r`.
    RightSingular(usize),
    /// `(F_s^T, G_s^T)`, size `s x (s-1)`.
    LeftSingular(usize),
    /// `(J_l(0), I_l)`.
    Infinite(usize),
    /// `(I_l, Phi_chi)` with `chi` a monic prime power of degree `l`.
    Finite(Poly),
}

impl PencilBlock {
    /// `(rows, cols)` of the block pair.
    pub fn dims(&self) -> (usize, usize) {
        match self {
            PencilBlock::RightSingular(r) => (r - 1, *r),
            PencilBlock::LeftSingular(s) => (*s, s - 1),
            PencilBlock::Infinite(l) => (*l, *l),
            PencilBlock::Finite(chi) => {
                let l = chi.degree().unwrap_or(0);
                (l, l)
            }
        }
    }
}

/// The literal matrix pair of a block.
pub fn block_matrices(field: PrimeField, block: &PencilBlock) -> Result<(Matrix, Matrix)> {
    let one = 1 % field.p();
    Ok(match block {
        PencilBlock::RightSingular(r) | PencilBlock::LeftSingular(r) if *r == 0 => {
            return Err(Error::DimMismatch("minimal indices start at 1".into()));
        }
        PencilBlock::RightSingular(r) => {
            let f = Matrix::from_fn(field, r - 1, *r, |i, j| if i == j { one } else { 0 });
            let g = Matrix::from_fn(field, r - 1, *r, |i, j| if j == i + 1 { one } else { 0 });
            (f, g)
        }
        PencilBlock::LeftSingular(s) => {
            let (f, g) = block_matrices(field, &PencilBlock::RightSingular(*s))?;
            (f.transpose(), g.transpose())
        }
        PencilBlock::Infinite(0) => return Err(Error::ZeroDegree),
        PencilBlock::Infinite(l) => {
            let j = Matrix::from_fn(field, *l, *l, |i, k| if i == k + 1 { one } else { 0 });
            (j, Matrix::identity(field, *l))
        }
        PencilBlock::Finite(chi) => {
            if chi.field() != field {
                return Err(Error::FieldMismatch(chi.field().p(), field.p()));
            }
            let phi = companion(chi)?;
            (Matrix::identity(field, phi.rows()), phi)
        }
    })
}

/// Block-diagonal sum of matrix pairs.
pub fn direct_sum(field: PrimeField, pairs: &[(Matrix, Matrix)]) -> (Matrix, Matrix) {
    let firsts: Vec<&Matrix> = pairs.iter().map(|p| &p.0).collect();
    let seconds: Vec<&Matrix> = pairs.iter().map(|p| &p.1).collect();
    (
        Matrix::direct_sum(field, &firsts),
        Matrix::direct_sum(field, &seconds),
    )
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct KroneckerForm {
    pub field: PrimeField,
    pub rows: usize,
    pub cols: usize,
    /// Sorted in canonical block order.
    pub blocks: Vec<PencilBlock>,
}

impl KroneckerForm {
    pub fn new(field: PrimeField, mut blocks: Vec<PencilBlock>) -> Self {
        blocks.sort();
        let rows = blocks.iter().map(|b| b.dims().0).sum();
        let cols = blocks.iter().map(|b| b.dims().1).sum();
        KroneckerForm {
            field,
            rows,
            cols,
            blocks,
        }
    }

    /// The canonical pair as a direct sum of block matrices.
    pub fn synthesize(&self) -> (Matrix, Matrix) {
        let pairs: Vec<_> = self
            .blocks
            .iter()
            .map(|b| block_matrices(self.field, b).expect("blocks are validated"))
            .collect();
        let (a, b) = direct_sum(self.field, &pairs);
        // a sum with no blocks still has to carry zero dims
        if self.blocks.is_empty() {
            return (
                Matrix::zeros(self.field, self.rows, self.cols),
                Matrix::zeros(self.field, self.rows, self.cols),
            );
        }
        (a, b)
    }

    pub fn right_indices(&self) -> Vec<usize> {
        self.blocks
            .iter()
            .filter_map(|b| match b {
                PencilBlock::RightSingular(r) => Some(*r),
                _ => None,
            })
            .collect()
    }

    pub fn left_indices(&self) -> Vec<usize> {
        self.blocks
            .iter()
            .filter_map(|b| match b {
                PencilBlock::LeftSingular(s) => Some(*s),
                _ => None,
            })
            .collect()
    }

    pub fn infinite_sizes(&self) -> Vec<usize> {
        self.blocks
            .iter()
            .filter_map(|b| match b {
                PencilBlock::Infinite(l) => Some(*l),
                _ => None,
            })
            .collect()
    }

    pub fn finite_polys(&self) -> Vec<Poly> {
        self.blocks
            .iter()
            .filter_map(|b| match b {
                PencilBlock::Finite(chi) => Some(chi.clone()),
                _ => None,
            })
            .collect()
    }
}

/// `R^T A_k S` equals the synthesized canonical pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairWitness {
    pub r: Matrix,
    pub s: Matrix,
}

impl PairWitness {
    pub fn apply(&self, a1: &Matrix, a2: &Matrix) -> (Matrix, Matrix) {
        let rt = self.r.transpose();
        (rt.mul(a1).mul(&self.s), rt.mul(a2).mul(&self.s))
    }

    pub fn verifies(&self, a1: &Matrix, a2: &Matrix, form: &KroneckerForm) -> bool {
        self.r.is_invertible() && self.s.is_invertible() && self.apply(a1, a2) == form.synthesize()
    }
}

pub fn kronecker_form(a1: &Matrix, a2: &Matrix) -> Result<(KroneckerForm, PairWitness)> {
    kronecker_form_seeded(a1, a2, DEFAULT_SEED)
}

/// Kronecker canonical form with witness; `seed` drives polynomial factorization.
pub fn kronecker_form_seeded(a1: &Matrix, a2: &Matrix, seed: u64) -> Result<(KroneckerForm, PairWitness)> {
    if a1.field() != a2.field() {
        return Err(Error::FieldMismatch(a1.field().p(), a2.field().p()));
    }
    if (a1.rows(), a1.cols()) != (a2.rows(), a2.cols()) {
        return Err(Error::DimMismatch(format!(
            "pencil slices are {}x{} and {}x{}",
            a1.rows(),
            a1.cols(),
            a2.rows(),
            a2.cols()
        )));
    }
    let field = a1.field();
    let (m, n) = (a1.rows(), a1.cols());

    let right = split_right(a1, a2);
    let left_in = (right.rest.0.transpose(), right.rest.1.transpose());
    let left_t = split_right(&left_in.0, &left_in.1);
    let left = Split {
        indices: left_t.indices,
        left: left_t.right.transpose(),
        right: left_t.left.transpose(),
        rest: (left_t.rest.0.transpose(), left_t.rest.1.transpose()),
        dims: (left_t.dims.1, left_t.dims.0),
    };
    let regular = split_regular(&left.rest.0, &left.rest.1, seed)?;

    let mut blocks: Vec<PencilBlock> = right.indices.iter().map(|&r| PencilBlock::RightSingular(r)).collect();
    blocks.extend(left.indices.iter().map(|&s| PencilBlock::LeftSingular(s)));
    blocks.extend(regular.blocks);

    let (m1, n1) = right.dims;
    let (m2, n2) = left.dims;
    let lt = embed(field, m1, &embed(field, m2, &regular.left).mul(&left.left)).mul(&right.left);
    let s = right
        .right
        .mul(&embed(field, n1, &left.right.mul(&embed(field, n2, &regular.right))));
    debug_assert_eq!((lt.rows(), s.rows()), (m, n));

    let (blocks, lt, s) = canonical_order(blocks, lt, s);
    let form = KroneckerForm::new(field, blocks);
    let witness = PairWitness { r: lt.transpose(), s };
    debug_assert!(witness.verifies(a1, a2, &form), "kronecker witness failed for {a1:?} {a2:?}");
    Ok((form, witness))
}

/// True iff the pencil splits into at least two indecomposable summands.
pub fn is_decomposable_pair(a1: &Matrix, a2: &Matrix) -> Result<bool> {
    Ok(kronecker_form(a1, a2)?.0.blocks.len() >= 2)
}

/// `I_k (+) m`
fn embed(field: PrimeField, k: usize, m: &Matrix) -> Matrix {
    Matrix::direct_sum(field, &[&Matrix::identity(field, k), m])
}

/// Permutes blocks into canonical order, carrying the transforms along.
fn canonical_order(
    blocks: Vec<PencilBlock>,
    lt: Matrix,
    s: Matrix,
) -> (Vec<PencilBlock>, Matrix, Matrix) {
    let mut spans = Vec::with_capacity(blocks.len());
    let (mut r0, mut c0) = (0, 0);
    for b in &blocks {
        let (r, c) = b.dims();
        spans.push((r0..r0 + r, c0..c0 + c));
        r0 += r;
        c0 += c;
    }
    let mut order: Vec<usize> = (0..blocks.len()).collect();
    order.sort_by(|&i, &j| blocks[i].cmp(&blocks[j]));
    let rows: Vec<usize> = order.iter().flat_map(|&i| spans[i].0.clone()).collect();
    let cols: Vec<usize> = order.iter().flat_map(|&i| spans[i].1.clone()).collect();
    let sorted = order.iter().map(|&i| blocks[i].clone()).collect();
    (sorted, lt.select_rows(&rows), s.select_columns(&cols))
}

struct Split {
    indices: Vec<usize>,
    /// Left transform `L = R^T`.
    left: Matrix,
    right: Matrix,
    rest: (Matrix, Matrix),
    /// Size of the split-off part.
    dims: (usize, usize),
}

/// Minimal polynomial basis of `ker(x*A1 - A2)`, as coefficient chains
/// `c_0, ..., c_e` with `A2 c_0 = 0`, `A1 c_{j-1} = A2 c_j`, `A1 c_e = 0`.
fn minimal_kernel_chains(a1: &Matrix, a2: &Matrix) -> Vec<Vec<Vec<u32>>> {
    let field = a1.field();
    let (m, n) = (a1.rows(), a1.cols());
    let neg_a2 = a2.neg();
    let mut chains: Vec<Vec<Vec<u32>>> = Vec::new();
    for d in 0..=m {
        let mut big = Matrix::zeros(field, (d + 2) * m, (d + 1) * n);
        for t in 0..=d {
            // coefficient of x^t gets -A2 c_t, coefficient of x^(t+1) gets A1 c_t
            for i in 0..m {
                for j in 0..n {
                    big.set(t * m + i, t * n + j, neg_a2.get(i, j));
                    big.set((t + 1) * m + i, t * n + j, a1.get(i, j));
                }
            }
        }
        let kernel = big.kernel_basis();
        if kernel.cols() == 0 {
            continue;
        }
        let len = (d + 1) * n;
        let mut span = EchelonBasis::new(field, len);
        for chain in &chains {
            let e = chain.len() - 1;
            for shift in 0..=d - e {
                let mut v = vec![0; len];
                for (j, c) in chain.iter().enumerate() {
                    v[(shift + j) * n..(shift + j + 1) * n].copy_from_slice(c);
                }
                span.insert(&v);
            }
        }
        for v in kernel.columns() {
            if span.insert(&v) {
                chains.push(v.chunks(n.max(1)).take(d + 1).map(|c| c.to_vec()).collect());
            }
        }
    }
    // n == 0 leaves nothing to split
    chains.retain(|c| c.iter().all(|v| v.len() == n) && n > 0);
    chains
}

fn split_right(a1: &Matrix, a2: &Matrix) -> Split {
    let field = a1.field();
    let (m, n) = (a1.rows(), a1.cols());
    let chains = minimal_kernel_chains(a1, a2);
    if chains.is_empty() {
        return Split {
            indices: vec![],
            left: Matrix::identity(field, m),
            right: Matrix::identity(field, n),
            rest: (a1.clone(), a2.clone()),
            dims: (0, 0),
        };
    }
    let mut vcols = Vec::new();
    let mut wcols = Vec::new();
    let mut indices = Vec::new();
    for chain in &chains {
        indices.push(chain.len());
        for (j, c) in chain.iter().enumerate() {
            vcols.push(c.clone());
            if j + 1 < chain.len() {
                wcols.push(a1.mul_vec(c));
            }
        }
    }
    let (n1, m1) = (vcols.len(), wcols.len());
    let s0 = Matrix::from_columns(field, n, &vcols).extend_to_basis();
    let l0 = Matrix::from_columns(field, m, &wcols)
        .extend_to_basis()
        .inverse()
        .expect("basis extension is invertible");
    let p1 = l0.mul(a1).mul(&s0);
    let p2 = l0.mul(a2).mul(&s0);
    debug_assert!(p1.submatrix(m1..m, 0..n1).is_zero() && p2.submatrix(m1..m, 0..n1).is_zero());

    let (m2, n2) = (m - m1, n - n1);
    let blocks = [
        (p1.submatrix(0..m1, 0..n1), p1.submatrix(0..m1, n1..n), p1.submatrix(m1..m, n1..n)),
        (p2.submatrix(0..m1, 0..n1), p2.submatrix(0..m1, n1..n), p2.submatrix(m1..m, n1..n)),
    ];
    let (x, y) = solve_sylvester(field, &blocks, (m1, n1, m2, n2));
    let mut l_fix = Matrix::identity(field, m);
    for i in 0..m1 {
        for j in 0..m2 {
            l_fix.set(i, m1 + j, y.get(i, j));
        }
    }
    let mut s_fix = Matrix::identity(field, n);
    for i in 0..n1 {
        for j in 0..n2 {
            s_fix.set(i, n1 + j, x.get(i, j));
        }
    }
    let left = l_fix.mul(&l0);
    let right = s0.mul(&s_fix);
    let rest = (blocks[0].2.clone(), blocks[1].2.clone());
    Split {
        indices,
        left,
        right,
        rest,
        dims: (m1, n1),
    }
}

/// Finds `X`, `Y` with `P11_k X + Y P22_k = -P12_k` for both slices.
fn solve_sylvester(
    field: PrimeField,
    blocks: &[(Matrix, Matrix, Matrix); 2],
    (m1, n1, m2, n2): (usize, usize, usize, usize),
) -> (Matrix, Matrix) {
    let unknowns = n1 * n2 + m1 * m2;
    let mut sys = Matrix::zeros(field, 2 * m1 * n2, unknowns);
    let mut rhs = vec![0; 2 * m1 * n2];
    for (k, (p11, p12, p22)) in blocks.iter().enumerate() {
        for i in 0..m1 {
            for j in 0..n2 {
                let eq = (k * m1 + i) * n2 + j;
                for t in 0..n1 {
                    sys.set(eq, t * n2 + j, p11.get(i, t));
                }
                for t in 0..m2 {
                    sys.set(eq, n1 * n2 + i * m2 + t, p22.get(t, j));
                }
                rhs[eq] = field.neg(p12.get(i, j));
            }
        }
    }
    let z = sys
        .solve(&rhs)
        .expect("singular blocks split off from a minimal basis always decouple");
    let x = Matrix::from_fn(field, n1, n2, |i, j| z[i * n2 + j]);
    let y = Matrix::from_fn(field, m1, m2, |i, j| z[n1 * n2 + i * m2 + j]);
    (x, y)
}

struct RegularSplit {
    blocks: Vec<PencilBlock>,
    left: Matrix,
    right: Matrix,
}

/// `{x : M x in span(U)}`
fn preimage(m: &Matrix, u: &Matrix) -> Matrix {
    let field = m.field();
    let n = m.cols();
    let joined = Matrix::hstack(field, m.rows(), &[m, u]);
    let k = joined.kernel_basis();
    k.submatrix(0..n, 0..k.cols()).column_space()
}

fn split_regular(e: &Matrix, a: &Matrix, seed: u64) -> Result<RegularSplit> {
    let field = e.field();
    let n = e.rows();
    debug_assert_eq!(n, e.cols(), "regular remainder must be square");
    let mut v = Matrix::identity(field, n);
    loop {
        let next = preimage(a, &e.mul(&v));
        if next.cols() == v.cols() {
            break;
        }
        v = next;
    }
    let mut w = Matrix::zeros(field, n, 0);
    loop {
        let next = preimage(e, &a.mul(&w));
        if next.cols() == w.cols() {
            break;
        }
        w = next;
    }
    let nf = v.cols();
    assert_eq!(nf + w.cols(), n, "Wong limits of a regular pencil are complementary");
    let s_reg = Matrix::hstack(field, n, &[&v, &w]);
    let x = Matrix::hstack(field, n, &[&e.mul(&v), &a.mul(&w)]);
    let l_reg = x.inverse().expect("E V and A W are complementary for regular pencils");
    let c = l_reg.mul(a).mul(&s_reg).submatrix(0..nf, 0..nf);
    let nil = l_reg.mul(e).mul(&s_reg).submatrix(nf..n, nf..n);

    let (fin, p_fin) = frobenius_form_seeded(&c, seed)?;
    let (inf, p_inf) = frobenius_form_seeded(&nil, seed)?;
    let mut blocks: Vec<PencilBlock> = fin.into_iter().map(PencilBlock::Finite).collect();
    for chi in inf {
        debug_assert!(chi.coeffs()[..chi.coeffs().len() - 1].iter().all(|&c| c == 0));
        blocks.push(PencilBlock::Infinite(chi.degree().unwrap()));
    }
    let p = Matrix::direct_sum(field, &[&p_fin, &p_inf]);
    Ok(RegularSplit {
        blocks,
        left: p.inverse()?.mul(&l_reg),
        right: s_reg.mul(&p),
    })
}

pub fn frobenius_form(a: &Matrix) -> Result<(Vec<Poly>, Matrix)> {
    frobenius_form_seeded(a, DEFAULT_SEED)
}

/// Elementary divisors (sorted) and `P` with `P^{-1} A P` the direct sum of
/// their companion matrices.
pub fn frobenius_form_seeded(a: &Matrix, seed: u64) -> Result<(Vec<Poly>, Matrix)> {
    if !a.is_square() {
        return Err(Error::DimMismatch("Frobenius form of a non-square matrix".into()));
    }
    let field = a.field();
    let n = a.rows();
    if n == 0 {
        return Ok((vec![], Matrix::identity(field, 0)));
    }
    let mut cyclic: Vec<(Poly, Vec<Vec<u32>>)> = Vec::new();
    for factor in factor_prime_powers_seeded(&a.char_poly(), seed)? {
        let d = factor.base.degree().unwrap();
        let e = factor.exponent as usize;
        let b = a.eval_poly(&factor.base);
        let mut kernels = vec![Matrix::zeros(field, n, 0)];
        let mut b_pow = Matrix::identity(field, n);
        for _ in 1..=e {
            b_pow = b_pow.mul(&b);
            kernels.push(b_pow.kernel_basis());
        }
        let mut gens: Vec<(Vec<u32>, usize)> = Vec::new();
        for j in (1..=e).rev() {
            let mut span = EchelonBasis::new(field, n);
            for c in kernels[j - 1].columns() {
                span.insert(&c);
            }
            for (g, jg) in &gens {
                let mut w = g.clone();
                for _ in 0..jg - j {
                    w = b.mul_vec(&w);
                }
                for _ in 0..d {
                    span.insert(&w);
                    w = a.mul_vec(&w);
                }
            }
            for v in kernels[j].columns() {
                if span.insert(&v) {
                    let mut w = a.mul_vec(&v);
                    for _ in 1..d {
                        span.insert(&w);
                        w = a.mul_vec(&w);
                    }
                    gens.push((v, j));
                }
            }
        }
        for (g, j) in gens {
            let mut basis = Vec::with_capacity(d * j);
            let mut w = g;
            for _ in 0..d * j {
                let next = a.mul_vec(&w);
                basis.push(w);
                w = next;
            }
            cyclic.push((factor.base.pow(j as u64), basis));
        }
    }
    cyclic.sort_by(|x, y| x.0.cmp(&y.0));
    let cols: Vec<Vec<u32>> = cyclic.iter().flat_map(|(_, b)| b.iter().cloned()).collect();
    let p = Matrix::from_columns(field, n, &cols);
    debug_assert!(p.is_invertible(), "cyclic bases must assemble into a basis");
    Ok((cyclic.into_iter().map(|(chi, _)| chi).collect(), p))
}

/// Direct sum of companion matrices.
pub fn companion_sum(field: PrimeField, polys: &[Poly]) -> Result<Matrix> {
    let comps: Vec<Matrix> = polys.iter().map(companion).collect::<Result<_>>()?;
    let refs: Vec<&Matrix> = comps.iter().collect();
    Ok(Matrix::direct_sum(field, &refs))
}

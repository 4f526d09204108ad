//! `m x n x q` spatial matrices over GF(p) and their equivalence under
//! `GL_m x GL_n x GL_q`.

use std::fmt;

use crate::config::Config;
use crate::error::{Error, Result};
use crate::field::{FieldElem, PrimeField};
use crate::matrix::Matrix;
use crate::pencil::{kronecker_form_seeded, KroneckerForm, PencilBlock};
use crate::poly::{mobius_transform, Mobius2x2, Poly};

/// Entries `a[i][j][k]`, stored slice by slice: index `(k * m + i) * n + j`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SpatialMatrix {
    field: PrimeField,
    m: usize,
    n: usize,
    q: usize,
    data: Vec<u32>,
}

impl SpatialMatrix {
    pub fn zeros(field: PrimeField, m: usize, n: usize, q: usize) -> Self {
        SpatialMatrix {
            field,
            m,
            n,
            q,
            data: vec![0; m * n * q],
        }
    }

    /// Builds from `f(i, j, k)`; values are reduced mod p.
    pub fn from_fn(
        field: PrimeField,
        (m, n, q): (usize, usize, usize),
        mut f: impl FnMut(usize, usize, usize) -> u32,
    ) -> Self {
        let mut out = Self::zeros(field, m, n, q);
        for k in 0..q {
            for i in 0..m {
                for j in 0..n {
                    out.data[(k * m + i) * n + j] = field.reduce(f(i, j, k) as u64);
                }
            }
        }
        out
    }

    /// Stacks horizontal slices `A_1, ..., A_q`, each `m x n`.
    pub fn from_slices(field: PrimeField, m: usize, n: usize, slices: &[Matrix]) -> Result<Self> {
        let mut out = Self::zeros(field, m, n, slices.len());
        for (k, s) in slices.iter().enumerate() {
            if s.field() != field {
                return Err(Error::FieldMismatch(s.field().p(), field.p()));
            }
            if (s.rows(), s.cols()) != (m, n) {
                return Err(Error::DimMismatch(format!(
                    "slice {k} is {}x{}, expected {m}x{n}",
                    s.rows(),
                    s.cols()
                )));
            }
            for i in 0..m {
                out.data[(k * m + i) * n..(k * m + i + 1) * n].copy_from_slice(s.row(i));
            }
        }
        Ok(out)
    }

    pub(crate) fn from_data(field: PrimeField, (m, n, q): (usize, usize, usize), data: Vec<u32>) -> Self {
        debug_assert_eq!(data.len(), m * n * q);
        SpatialMatrix { field, m, n, q, data }
    }

    pub(crate) fn data(&self) -> &[u32] {
        &self.data
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        (self.m, self.n, self.q)
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> u32 {
        self.data[(k * self.m + i) * self.n + j]
    }

    pub fn elem(&self, i: usize, j: usize, k: usize) -> FieldElem {
        self.field.elem(self.get(i, j, k) as u64)
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, v: u32) {
        let idx = (k * self.m + i) * self.n + j;
        self.data[idx] = self.field.reduce(v as u64);
    }

    /// Horizontal slice `A_k`.
    pub fn slice(&self, k: usize) -> Matrix {
        Matrix::from_fn(self.field, self.m, self.n, |i, j| self.get(i, j, k))
    }

    pub fn slices(&self) -> Vec<Matrix> {
        (0..self.q).map(|k| self.slice(k)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    /// Axis `t` of the result is axis `perm[t]` of `self`.
    pub fn permute_axes(&self, perm: [usize; 3]) -> Result<Self> {
        let mut seen = [false; 3];
        for &a in &perm {
            if a > 2 || seen[a] {
                return Err(Error::DimMismatch(format!("{perm:?} is not a permutation of axes")));
            }
            seen[a] = true;
        }
        let d = [self.m, self.n, self.q];
        let nd = (d[perm[0]], d[perm[1]], d[perm[2]]);
        Ok(Self::from_fn(self.field, nd, |i, j, k| {
            let mut old = [0; 3];
            old[perm[0]] = i;
            old[perm[1]] = j;
            old[perm[2]] = k;
            self.get(old[0], old[1], old[2])
        }))
    }

    /// Leading `m x n x q` corner.
    pub fn corner(&self, m: usize, n: usize, q: usize) -> Self {
        Self::from_fn(self.field, (m, n, q), |i, j, k| self.get(i, j, k))
    }

    /// Embeds `self` in the leading corner of a zero tensor.
    pub fn pad(&self, m: usize, n: usize, q: usize) -> Self {
        Self::from_fn(self.field, (m, n, q), |i, j, k| {
            if i < self.m && j < self.n && k < self.q {
                self.get(i, j, k)
            } else {
                0
            }
        })
    }
}

impl fmt::Debug for SpatialMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}) {}x{}x{} ", self.field.p(), self.m, self.n, self.q)?;
        let slices: Vec<_> = self.slices().iter().map(|s| s.to_rows()).collect();
        write!(f, "{slices:?}")
    }
}

/// Invertible `(R, S, T)` acting by `b_{i'j'k'} = sum a_{ijk} r_{ii'} s_{jj'} t_{kk'}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransformWitness {
    pub r: Matrix,
    pub s: Matrix,
    pub t: Matrix,
}

impl TransformWitness {
    pub fn new(r: Matrix, s: Matrix, t: Matrix) -> Result<Self> {
        for x in [&s, &t] {
            if x.field() != r.field() {
                return Err(Error::FieldMismatch(x.field().p(), r.field().p()));
            }
        }
        for x in [&r, &s, &t] {
            if !x.is_square() {
                return Err(Error::DimMismatch("witness matrices must be square".into()));
            }
        }
        let w = TransformWitness { r, s, t };
        if !w.is_invertible() {
            return Err(Error::SingularWitness);
        }
        Ok(w)
    }

    pub fn identity(field: PrimeField, m: usize, n: usize, q: usize) -> Self {
        TransformWitness {
            r: Matrix::identity(field, m),
            s: Matrix::identity(field, n),
            t: Matrix::identity(field, q),
        }
    }

    pub fn field(&self) -> PrimeField {
        self.r.field()
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        (self.r.rows(), self.s.rows(), self.t.rows())
    }

    pub fn is_invertible(&self) -> bool {
        self.r.is_invertible() && self.s.is_invertible() && self.t.is_invertible()
    }

    /// The transform that applies `self` first and then `next`.
    pub fn then(&self, next: &TransformWitness) -> TransformWitness {
        TransformWitness {
            r: self.r.mul(&next.r),
            s: self.s.mul(&next.s),
            t: self.t.mul(&next.t),
        }
    }

    pub fn inverse(&self) -> Result<TransformWitness> {
        Ok(TransformWitness {
            r: self.r.inverse().map_err(|_| Error::SingularWitness)?,
            s: self.s.inverse().map_err(|_| Error::SingularWitness)?,
            t: self.t.inverse().map_err(|_| Error::SingularWitness)?,
        })
    }

    /// `R (+) I`, `S (+) I`, `T (+) I` acting on a tensor of dims `(m, n, q)`.
    pub fn embed(&self, m: usize, n: usize, q: usize) -> TransformWitness {
        let f = self.field();
        let ext = |x: &Matrix, d: usize| Matrix::direct_sum(f, &[x, &Matrix::identity(f, d - x.rows())]);
        TransformWitness {
            r: ext(&self.r, m),
            s: ext(&self.s, n),
            t: ext(&self.t, q),
        }
    }
}

fn check_witness(a: &SpatialMatrix, w: &TransformWitness) -> Result<()> {
    for x in [&w.r, &w.s, &w.t] {
        if x.field() != a.field {
            return Err(Error::FieldMismatch(x.field().p(), a.field.p()));
        }
    }
    let dims = (w.r.rows(), w.r.cols(), w.s.rows(), w.s.cols(), w.t.rows(), w.t.cols());
    if dims != (a.m, a.m, a.n, a.n, a.q, a.q) {
        return Err(Error::DimMismatch(format!(
            "witness {}x{}, {}x{}, {}x{} does not fit a {}x{}x{} spatial matrix",
            dims.0, dims.1, dims.2, dims.3, dims.4, dims.5, a.m, a.n, a.q
        )));
    }
    if !w.is_invertible() {
        return Err(Error::SingularWitness);
    }
    Ok(())
}

/// The equivalence action, evaluated term by term.
pub fn apply_transform(a: &SpatialMatrix, w: &TransformWitness) -> Result<SpatialMatrix> {
    check_witness(a, w)?;
    Ok(apply_unchecked(a, w))
}

pub(crate) fn apply_unchecked(a: &SpatialMatrix, w: &TransformWitness) -> SpatialMatrix {
    let f = a.field;
    let (m, n, q) = a.dims();
    let p = f.p() as u64;
    let mut acc = vec![0u64; m * n * q];
    for k in 0..q {
        for i in 0..m {
            for j in 0..n {
                let v = a.get(i, j, k) as u64;
                if v == 0 {
                    continue;
                }
                for k2 in 0..q {
                    let vt = v * w.t.get(k, k2) as u64 % p;
                    if vt == 0 {
                        continue;
                    }
                    for i2 in 0..m {
                        let vr = vt * w.r.get(i, i2) as u64 % p;
                        if vr == 0 {
                            continue;
                        }
                        for j2 in 0..n {
                            let idx = (k2 * m + i2) * n + j2;
                            acc[idx] = (acc[idx] + vr * w.s.get(j, j2) as u64) % p;
                        }
                    }
                }
            }
        }
    }
    SpatialMatrix::from_data(f, (m, n, q), acc.into_iter().map(|v| v as u32).collect())
}

/// The same action in two stages: `C_k = R^T A_k S`, then `B_k = sum_i C_i t_{ik}`.
pub fn two_step_realize(a: &SpatialMatrix, r: &Matrix, s: &Matrix, t: &Matrix) -> Result<SpatialMatrix> {
    let w = TransformWitness {
        r: r.clone(),
        s: s.clone(),
        t: t.clone(),
    };
    check_witness(a, &w)?;
    let rt = r.transpose();
    let c: Vec<Matrix> = a.slices().iter().map(|ak| rt.mul(ak).mul(s)).collect();
    let b: Vec<Matrix> = (0..a.q)
        .map(|k| {
            c.iter()
                .enumerate()
                .fold(Matrix::zeros(a.field, a.m, a.n), |acc, (i, ci)| acc.add(&ci.scale(t.get(i, k))))
        })
        .collect();
    SpatialMatrix::from_slices(a.field, a.m, a.n, &b)
}

/// One row per member of the slice family along `axis`, flattened.
fn family_matrix(a: &SpatialMatrix, axis: usize) -> Matrix {
    let (m, n, q) = a.dims();
    match axis {
        0 => Matrix::from_fn(a.field, m, n * q, |i, x| a.get(i, x / q, x % q)),
        1 => Matrix::from_fn(a.field, n, m * q, |j, x| a.get(x / q, j, x % q)),
        _ => Matrix::from_fn(a.field, q, m * n, |k, x| a.get(x / n, x % n, k)),
    }
}

/// Ranks `(m', n', q')` of the row, column and horizontal slice families.
pub fn slice_family_ranks(a: &SpatialMatrix) -> (usize, usize, usize) {
    (
        family_matrix(a, 0).rank(),
        family_matrix(a, 1).rank(),
        family_matrix(a, 2).rank(),
    )
}

pub fn is_regular(a: &SpatialMatrix) -> bool {
    slice_family_ranks(a) == a.dims()
}

/// Regular part `B'` and `W` such that `W` moves `B'` into the leading
/// corner with zeros elsewhere.
pub fn regular_part(a: &SpatialMatrix) -> (SpatialMatrix, TransformWitness) {
    let f = a.field;
    let (m, n, q) = a.dims();
    let mut w = TransformWitness::identity(f, m, n, q);
    let mut cur = a.clone();
    // slices along q first, then the new column family, then rows
    for axis in [2, 1, 0] {
        let e = family_matrix(&cur, axis).rref().transform.transpose();
        let mut step = TransformWitness::identity(f, m, n, q);
        match axis {
            0 => step.r = e,
            1 => step.s = e,
            _ => step.t = e,
        }
        cur = apply_unchecked(&cur, &step);
        w = w.then(&step);
    }
    let (m2, n2, q2) = slice_family_ranks(a);
    let part = cur.corner(m2, n2, q2);
    debug_assert_eq!(part.pad(m, n, q), cur);
    (part, w)
}

/// Direct sum of right singular, left singular and finite blocks, with no
/// infinite blocks.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalSum {
    pub right_indices: Vec<usize>,
    pub left_indices: Vec<usize>,
    pub finite_polys: Vec<Poly>,
    pub field: PrimeField,
}

impl CanonicalSum {
    pub fn new(
        field: PrimeField,
        mut right_indices: Vec<usize>,
        mut left_indices: Vec<usize>,
        mut finite_polys: Vec<Poly>,
    ) -> Result<Self> {
        if right_indices.iter().chain(&left_indices).any(|&r| r == 0) {
            return Err(Error::DimMismatch("minimal indices start at 1".into()));
        }
        for chi in &finite_polys {
            if chi.field() != field {
                return Err(Error::FieldMismatch(chi.field().p(), field.p()));
            }
            if !crate::poly::is_prime_power(chi) {
                return Err(Error::Unsupported(format!("{chi} is not a monic prime power")));
            }
        }
        right_indices.sort_unstable();
        left_indices.sort_unstable();
        finite_polys.sort();
        Ok(CanonicalSum {
            right_indices,
            left_indices,
            finite_polys,
            field,
        })
    }

    fn from_form(form: &KroneckerForm) -> Self {
        debug_assert!(form.infinite_sizes().is_empty());
        CanonicalSum {
            right_indices: form.right_indices(),
            left_indices: form.left_indices(),
            finite_polys: form.finite_polys(),
            field: form.field,
        }
    }

    pub fn to_kronecker(&self) -> KroneckerForm {
        let mut blocks: Vec<PencilBlock> = self.right_indices.iter().map(|&r| PencilBlock::RightSingular(r)).collect();
        blocks.extend(self.left_indices.iter().map(|&s| PencilBlock::LeftSingular(s)));
        blocks.extend(self.finite_polys.iter().cloned().map(PencilBlock::Finite));
        KroneckerForm::new(self.field, blocks)
    }

    /// `(m, n)` of the slices.
    pub fn dims(&self) -> (usize, usize) {
        let k = self.to_kronecker();
        (k.rows, k.cols)
    }

    /// The `m x n x 2` spatial matrix `||B_1 | B_2||`.
    pub fn synthesize(&self) -> SpatialMatrix {
        let k = self.to_kronecker();
        let (b1, b2) = k.synthesize();
        SpatialMatrix::from_slices(self.field, k.rows, k.cols, &[b1, b2]).expect("synthesized slices agree")
    }
}

fn pencil_witness(r: Matrix, s: Matrix) -> TransformWitness {
    let f = r.field();
    TransformWitness {
        r,
        s,
        t: Matrix::identity(f, 2),
    }
}

fn slice_witness(a: &SpatialMatrix, t: Matrix) -> TransformWitness {
    TransformWitness {
        r: Matrix::identity(a.field, a.m),
        s: Matrix::identity(a.field, a.n),
        t,
    }
}

fn admissible_for_all(polys: &[Poly], t: &Mobius2x2) -> bool {
    polys.iter().all(|chi| mobius_transform(chi, t).is_ok())
}

pub fn theorem1_form(a: &SpatialMatrix) -> Result<(CanonicalSum, TransformWitness)> {
    theorem1_form_with(a, &Config::default())
}

/// Canonical direct sum without infinite blocks, plus a witness mapping `a`
/// onto its synthesized tensor.
pub fn theorem1_form_with(a: &SpatialMatrix, cfg: &Config) -> Result<(CanonicalSum, TransformWitness)> {
    if a.q != 2 {
        return Err(Error::WrongSliceCount(a.q));
    }
    let (form, pw) = kronecker_form_seeded(&a.slice(0), &a.slice(1), cfg.seed)?;
    if form.infinite_sizes().is_empty() {
        return Ok((CanonicalSum::from_form(&form), pencil_witness(pw.r, pw.s)));
    }
    let f = a.field;
    let finite = form.finite_polys();
    let nilpotent = |chi: &Poly| chi.coeffs().iter().rev().skip(1).all(|&c| c == 0);
    let t = if !finite.iter().any(nilpotent) {
        // exchange the two slices
        Mobius2x2::new(f, 0, 1, 1, 0)?
    } else {
        // B_1 + b B_2 becomes invertible on every block
        (1..f.p())
            .map(|b| Mobius2x2::new(f, 1, b, 0, 1).unwrap())
            .find(|t| admissible_for_all(&finite, t))
            .ok_or(Error::FieldTooSmall {
                blocks: form.blocks.clone(),
            })?
    };
    let wt = slice_witness(a, t.to_matrix());
    let moved = apply_unchecked(a, &wt);
    let (form2, pw2) = kronecker_form_seeded(&moved.slice(0), &moved.slice(1), cfg.seed)?;
    if !form2.infinite_sizes().is_empty() {
        return Err(Error::Unsupported("slice substitution left infinite blocks".into()));
    }
    Ok((CanonicalSum::from_form(&form2), wt.then(&pencil_witness(pw2.r, pw2.s))))
}

/// Least image of `c` under admissible Moebius substitutions, and the first
/// substitution attaining it.
fn mobius_argmin(c: &CanonicalSum) -> (CanonicalSum, Mobius2x2) {
    let id = Mobius2x2::identity(c.field);
    if c.finite_polys.is_empty() {
        return (c.clone(), id);
    }
    let mut best = (c.finite_polys.clone(), id);
    for t in Mobius2x2::projective_representatives(c.field) {
        let image: Result<Vec<Poly>> = c.finite_polys.iter().map(|chi| mobius_transform(chi, &t)).collect();
        let Ok(mut image) = image else { continue };
        image.sort();
        if image < best.0 {
            best = (image, t);
        }
    }
    let sum = CanonicalSum {
        finite_polys: best.0,
        ..c.clone()
    };
    (sum, best.1)
}

/// Lexicographically least member of the Moebius orbit of `c`.
pub fn mobius_orbit_minimize(c: &CanonicalSum) -> CanonicalSum {
    mobius_argmin(c).0
}

/// Minimized sum and a witness taking `c.synthesize()` to its synthesized tensor.
pub fn mobius_connect(c: &CanonicalSum, cfg: &Config) -> Result<(CanonicalSum, TransformWitness)> {
    let (min, t) = mobius_argmin(c);
    let start = c.synthesize();
    let (m, n, q) = start.dims();
    if t == Mobius2x2::identity(c.field) {
        return Ok((min, TransformWitness::identity(c.field, m, n, q)));
    }
    let wt = slice_witness(&start, t.to_matrix());
    let moved = apply_unchecked(&start, &wt);
    let (form, pw) = kronecker_form_seeded(&moved.slice(0), &moved.slice(1), cfg.seed)?;
    if form != min.to_kronecker() {
        return Err(Error::Unsupported(format!(
            "Moebius image {:?} disagrees with the predicted {:?}",
            form.blocks,
            min.to_kronecker().blocks
        )));
    }
    Ok((min, wt.then(&pencil_witness(pw.r, pw.s))))
}

/// Complete invariant of a spatial matrix with at most two slices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TensorLabel {
    /// `q <= 1`: the rank of the single slice (0 when there is none).
    Matrix { rank: usize },
    Pencil(CanonicalSum),
}

impl TensorLabel {
    /// The canonical tensor of this label in the given dims.
    pub fn synthesize(&self, field: PrimeField, (m, n, q): (usize, usize, usize)) -> SpatialMatrix {
        match self {
            TensorLabel::Matrix { rank } => {
                SpatialMatrix::from_fn(field, (m, n, q), |i, j, _| u32::from(i == j && i < *rank))
            }
            TensorLabel::Pencil(c) => c.synthesize(),
        }
    }
}

pub fn canonical_label(a: &SpatialMatrix) -> Result<TensorLabel> {
    canonical_label_with(a, &Config::default())
}

pub fn canonical_label_with(a: &SpatialMatrix, cfg: &Config) -> Result<TensorLabel> {
    Ok(canonical_witness(a, cfg)?.0)
}

/// Label of `a` and a witness taking `a` to the label's synthesized tensor.
pub fn canonical_witness(a: &SpatialMatrix, cfg: &Config) -> Result<(TensorLabel, TransformWitness)> {
    let f = a.field;
    let (m, n, q) = a.dims();
    match q {
        0 => Ok((TensorLabel::Matrix { rank: 0 }, TransformWitness::identity(f, m, n, 0))),
        1 => {
            let (rank, l, s) = a.slice(0).rank_normal_form();
            let w = TransformWitness {
                r: l.transpose(),
                s,
                t: Matrix::identity(f, 1),
            };
            Ok((TensorLabel::Matrix { rank }, w))
        }
        2 => {
            let (sum, w1) = theorem1_form_with(a, cfg)?;
            let (min, w2) = mobius_connect(&sum, cfg)?;
            Ok((TensorLabel::Pencil(min), w1.then(&w2)))
        }
        _ => Err(Error::WrongSliceCount(q)),
    }
}

/// A witness from `a` to `b` when their labels agree.
fn witness_between(a: &SpatialMatrix, b: &SpatialMatrix, cfg: &Config) -> Result<Option<TransformWitness>> {
    let (la, wa) = canonical_witness(a, cfg)?;
    let (lb, wb) = canonical_witness(b, cfg)?;
    if la != lb {
        return Ok(None);
    }
    Ok(Some(wa.then(&wb.inverse()?)))
}

pub fn equivalent(a: &SpatialMatrix, b: &SpatialMatrix) -> Result<(bool, Option<TransformWitness>)> {
    equivalent_with(a, b, &Config::default())
}

/// Decides equivalence through the labels of the regular parts. A positive
/// answer carries a witness that has been checked against `b`.
pub fn equivalent_with(
    a: &SpatialMatrix,
    b: &SpatialMatrix,
    cfg: &Config,
) -> Result<(bool, Option<TransformWitness>)> {
    if a.field != b.field {
        return Err(Error::FieldMismatch(a.field.p(), b.field.p()));
    }
    if a.dims() != b.dims() {
        return Err(Error::DimMismatch(format!("{:?} vs {:?}", a.dims(), b.dims())));
    }
    let (m, n, q) = a.dims();
    if a == b {
        return Ok((true, Some(TransformWitness::identity(a.field, m, n, q))));
    }
    let (ra, wa) = regular_part(a);
    let (rb, wb) = regular_part(b);
    if ra.dims() != rb.dims() {
        return Ok((false, None));
    }
    if ra.q > 2 {
        return Err(Error::Unsupported(format!(
            "regular part has {} slices; only two or fewer are decidable",
            ra.q
        )));
    }
    let Some(wc) = witness_between(&ra, &rb, cfg)? else {
        return Ok((false, None));
    };
    let w = wa.then(&wc.embed(m, n, q)).then(&wb.inverse()?);
    if apply_unchecked(a, &w) != *b {
        return Err(Error::Unsupported("composed witness failed verification".into()));
    }
    Ok((true, Some(w)))
}

/// Classes of regular `m x n x q` spatial matrices with `n <= 2`, `q <= 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RegularClass22 {
    C1x1x1,
    C2x2x1,
    C2x1x2,
    C1x2x2,
    C3x2x2A12,
    C3x2x2A12a,
    C4x2x2,
    A(u32),
    /// Characteristic 2 only.
    B(u32),
}

impl RegularClass22 {
    pub fn label(&self) -> &'static str {
        match self {
            RegularClass22::C1x1x1 => "C1x1x1",
            RegularClass22::C2x2x1 => "C2x2x1",
            RegularClass22::C2x1x2 => "C2x1x2",
            RegularClass22::C1x2x2 => "C1x2x2",
            RegularClass22::C3x2x2A12 => "C3x2x2_a12",
            RegularClass22::C3x2x2A12a => "C3x2x2_a12a",
            RegularClass22::C4x2x2 => "C4x2x2",
            RegularClass22::A(_) => "A",
            RegularClass22::B(_) => "B",
        }
    }

    pub fn param(&self) -> Option<u32> {
        match self {
            RegularClass22::A(v) | RegularClass22::B(v) => Some(*v),
            _ => None,
        }
    }

    pub fn from_label(label: &str, param: Option<u32>) -> Result<Self> {
        let need = |v: Option<u32>| v.ok_or_else(|| Error::Parse(format!("class {label} needs a parameter v")));
        Ok(match label {
            "C1x1x1" => RegularClass22::C1x1x1,
            "C2x2x1" => RegularClass22::C2x2x1,
            "C2x1x2" => RegularClass22::C2x1x2,
            "C1x2x2" => RegularClass22::C1x2x2,
            "C3x2x2_a12" => RegularClass22::C3x2x2A12,
            "C3x2x2_a12a" => RegularClass22::C3x2x2A12a,
            "C4x2x2" => RegularClass22::C4x2x2,
            "A" => RegularClass22::A(need(param)?),
            "B" => RegularClass22::B(need(param)?),
            other => return Err(Error::Parse(format!("unknown class label {other:?}"))),
        })
    }

    /// The literal representative tensor.
    pub fn representative(&self, field: PrimeField) -> Result<SpatialMatrix> {
        let mx = |rows: &[&[u32]]| Matrix::from_rows(field, rows);
        let (m, n, slices) = match *self {
            RegularClass22::C1x1x1 => (1, 1, vec![mx(&[&[1]])?]),
            RegularClass22::C2x2x1 => (2, 2, vec![Matrix::identity(field, 2)]),
            RegularClass22::C2x1x2 => (2, 1, vec![mx(&[&[1], &[0]])?, mx(&[&[0], &[1]])?]),
            RegularClass22::C1x2x2 => (1, 2, vec![mx(&[&[1, 0]])?, mx(&[&[0, 1]])?]),
            RegularClass22::C3x2x2A12 => (
                3,
                2,
                vec![mx(&[&[1, 0], &[0, 1], &[0, 0]])?, mx(&[&[0, 0], &[0, 0], &[0, 1]])?],
            ),
            RegularClass22::C3x2x2A12a => (
                3,
                2,
                vec![mx(&[&[1, 0], &[0, 1], &[0, 0]])?, mx(&[&[0, 0], &[1, 0], &[0, 1]])?],
            ),
            RegularClass22::C4x2x2 => (
                4,
                2,
                vec![
                    mx(&[&[1, 0], &[0, 1], &[0, 0], &[0, 0]])?,
                    mx(&[&[0, 0], &[0, 0], &[1, 0], &[0, 1]])?,
                ],
            ),
            RegularClass22::A(v) => return Ok(d_tensor(field, 0, v)),
            RegularClass22::B(v) => {
                if field.p() != 2 {
                    return Err(Error::Unsupported("the B family exists only in characteristic 2".into()));
                }
                return Ok(d_tensor(field, 1, v));
            }
        };
        SpatialMatrix::from_slices(field, m, n, &slices)
    }
}

impl fmt::Display for RegularClass22 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.param() {
            Some(v) => write!(f, "{}({v})", self.label()),
            None => f.write_str(self.label()),
        }
    }
}

/// `D(u, v) = ||I_2 | [[0, v], [1, u]]||`.
pub fn d_tensor(field: PrimeField, u: u32, v: u32) -> SpatialMatrix {
    let a2 = Matrix::from_rows(field, &[[0, v], [1, u]]).expect("2x2");
    SpatialMatrix::from_slices(field, 2, 2, &[Matrix::identity(field, 2), a2]).expect("2x2x2")
}

/// Parameters `v'` with `A(v')` equivalent to `A(v)`.
pub fn a_param_orbit(field: PrimeField, v: u32) -> Vec<u32> {
    let v = field.reduce(v as u64);
    let mut out: Vec<u32> = if field.p() != 2 {
        field.nonzero_squares().iter().map(|&z| field.mul(v, z)).collect()
    } else {
        // (alpha v + beta) / (gamma v + delta) with all four coefficients squares
        let mut squares = field.nonzero_squares();
        squares.push(0);
        let mut out = Vec::new();
        for &al in &squares {
            for &be in &squares {
                for &ga in &squares {
                    for &de in &squares {
                        let det = field.add(field.mul(al, de), field.mul(be, ga));
                        let den = field.add(field.mul(ga, v), de);
                        if det != 0 && den != 0 {
                            let num = field.add(field.mul(al, v), be);
                            out.push(field.div(num, den).unwrap());
                        }
                    }
                }
            }
        }
        out
    };
    out.sort_unstable();
    out.dedup();
    out
}

/// Parameters `v'` with `B(v')` equivalent to `B(v)`: `v + beta + beta^2`.
pub fn b_param_orbit(field: PrimeField, v: u32) -> Vec<u32> {
    let mut out: Vec<u32> = field
        .elements()
        .map(|b| field.add(field.add(v, b), field.mul(b, b)))
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

pub fn min_a_param(field: PrimeField, v: u32) -> u32 {
    a_param_orbit(field, v)[0]
}

pub fn min_b_param(field: PrimeField, v: u32) -> u32 {
    b_param_orbit(field, v)[0]
}

/// Every class of the catalog over `field`, with orbit-minimized parameters.
pub fn theorem2_catalog(field: PrimeField) -> Vec<RegularClass22> {
    let mut out = vec![
        RegularClass22::C1x1x1,
        RegularClass22::C2x2x1,
        RegularClass22::C2x1x2,
        RegularClass22::C1x2x2,
        RegularClass22::C3x2x2A12,
        RegularClass22::C3x2x2A12a,
        RegularClass22::C4x2x2,
    ];
    out.extend(
        field
            .elements()
            .filter(|&v| min_a_param(field, v) == v)
            .map(RegularClass22::A),
    );
    if field.p() == 2 {
        out.extend(
            field
                .elements()
                .filter(|&v| min_b_param(field, v) == v)
                .map(RegularClass22::B),
        );
    }
    out
}

pub fn classify_regular(a: &SpatialMatrix) -> Result<(RegularClass22, TransformWitness)> {
    classify_regular_with(a, &Config::default())
}

/// Class of a regular spatial matrix with `n <= 2`, `q <= 2`, and a witness
/// taking it to the class representative.
pub fn classify_regular_with(a: &SpatialMatrix, cfg: &Config) -> Result<(RegularClass22, TransformWitness)> {
    let f = a.field;
    let (m, n, q) = a.dims();
    if n > 2 || q > 2 || q == 0 {
        return Err(Error::UnsupportedShape { m, n, q });
    }
    let ranks = slice_family_ranks(a);
    if ranks != (m, n, q) {
        return Err(Error::NotRegular {
            m: ranks.0,
            n: ranks.1,
            q: ranks.2,
        });
    }
    let class = if q == 1 {
        if n == 1 {
            RegularClass22::C1x1x1
        } else {
            RegularClass22::C2x2x1
        }
    } else {
        let (sum, _) = theorem1_form_with(a, cfg)?;
        let r = &sum.right_indices;
        let l = &sum.left_indices;
        let fin = &sum.finite_polys;
        let deg: usize = fin.iter().map(|c| c.degree().unwrap()).sum();
        match (r.as_slice(), l.as_slice(), deg) {
            ([2], [], 0) => RegularClass22::C1x2x2,
            ([], [2], 0) => RegularClass22::C2x1x2,
            ([], [3], 0) => RegularClass22::C3x2x2A12a,
            ([], [2, 2], 0) => RegularClass22::C4x2x2,
            ([], [2], 1) => RegularClass22::C3x2x2A12,
            ([], [], 2) => {
                // x^2 - u x - v
                let chi = fin.iter().fold(Poly::one(f), |acc, c| acc.mul(c));
                let u = f.neg(chi.coeff(1));
                let v = f.neg(chi.coeff(0));
                if f.p() != 2 {
                    let quarter = f.inv(4 % f.p()).unwrap();
                    RegularClass22::A(min_a_param(f, f.add(v, f.mul(f.mul(u, u), quarter))))
                } else if u == 0 {
                    RegularClass22::A(min_a_param(f, v))
                } else {
                    let u2 = f.mul(u, u);
                    RegularClass22::B(min_b_param(f, f.div(v, u2).unwrap()))
                }
            }
            _ => {
                return Err(Error::Unsupported(format!(
                    "regular {m}x{n}x{q} matrix produced the unexpected sum {sum:?}"
                )))
            }
        }
    };
    let rep = class.representative(f)?;
    let w = witness_between(a, &rep, cfg)?
        .ok_or_else(|| Error::Unsupported(format!("{class} representative has a different label")))?;
    Ok((class, w))
}

pub fn lemma2_equivalent(u: FieldElem, v: FieldElem, u2: FieldElem, v2: FieldElem) -> Result<bool> {
    lemma2_equivalent_with(u, v, u2, v2, &Config::default())
}

/// Whether some `(a, b, c, d)` carries `D(u, v)` to `D(u2, v2)` by the
/// explicit substitution formulas; exhaustive over projective quadruples.
pub fn lemma2_equivalent_with(
    u: FieldElem,
    v: FieldElem,
    u2: FieldElem,
    v2: FieldElem,
    cfg: &Config,
) -> Result<bool> {
    let f = u.field();
    for x in [v, u2, v2] {
        if x.field() != f {
            return Err(Error::FieldMismatch(x.field().p(), f.p()));
        }
    }
    if f.p() > cfg.lemma2_bound {
        return Err(Error::FieldTooLargeForSearch {
            p: f.p(),
            bound: cfg.lemma2_bound,
        });
    }
    let (u, v, u2, v2) = (u.value(), v.value(), u2.value(), v2.value());
    let p = f.p();
    let two = 2 % p;
    for a in 0..p {
        for b in 0..p {
            for c in 0..p {
                for d in 0..p {
                    if [a, b, c, d].into_iter().find(|&x| x != 0) != Some(1) {
                        continue;
                    }
                    if f.sub(f.mul(a, d), f.mul(b, c)) == 0 {
                        continue;
                    }
                    // a^2 + u a b - v b^2
                    let den = f.sub(f.add(f.mul(a, a), f.mul(u, f.mul(a, b))), f.mul(v, f.mul(b, b)));
                    if den == 0 {
                        continue;
                    }
                    // 2ac + uad + ucb - 2vbd
                    let nu = f.sub(
                        f.add(
                            f.add(f.mul(two, f.mul(a, c)), f.mul(u, f.mul(a, d))),
                            f.mul(u, f.mul(c, b)),
                        ),
                        f.mul(two, f.mul(v, f.mul(b, d))),
                    );
                    // -c^2 - ucd + vd^2
                    let nv = f.add(f.neg(f.add(f.mul(c, c), f.mul(u, f.mul(c, d)))), f.mul(v, f.mul(d, d)));
                    if nu == f.mul(u2, den) && nv == f.mul(v2, den) {
                        return Ok(true);
                    }
                }
            }
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u32) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn tensor(p: u32, slices: &[&[&[u32]]]) -> SpatialMatrix {
        let f = gf(p);
        let ms: Vec<Matrix> = slices.iter().map(|s| Matrix::from_rows(f, s).unwrap()).collect();
        SpatialMatrix::from_slices(f, ms[0].rows(), ms[0].cols(), &ms).unwrap()
    }

    fn poly(p: u32, c: &[u32]) -> Poly {
        Poly::new(gf(p), c.to_vec())
    }

    #[test]
    fn identity_and_zero_actions() {
        let a = tensor(5, &[&[&[1, 2], &[3, 4]], &[&[0, 1], &[1, 0]]]);
        let id = TransformWitness::identity(gf(5), 2, 2, 2);
        assert_eq!(apply_transform(&a, &id).unwrap(), a);
        let z = SpatialMatrix::zeros(gf(5), 2, 2, 2);
        let w = TransformWitness::new(
            Matrix::from_rows(gf(5), &[[1, 2], [0, 3]]).unwrap(),
            Matrix::from_rows(gf(5), &[[0, 1], [1, 1]]).unwrap(),
            Matrix::from_rows(gf(5), &[[2, 0], [4, 1]]).unwrap(),
        )
        .unwrap();
        assert_eq!(apply_transform(&z, &w).unwrap(), z);
        let back = apply_transform(&apply_transform(&a, &w).unwrap(), &w.inverse().unwrap()).unwrap();
        assert_eq!(back, a);
    }

    #[test]
    fn apply_rejects_bad_witnesses() {
        let a = SpatialMatrix::zeros(gf(3), 2, 2, 2);
        let w = TransformWitness::identity(gf(3), 2, 2, 1);
        assert!(matches!(apply_transform(&a, &w), Err(Error::DimMismatch(_))));
        let mut w = TransformWitness::identity(gf(3), 2, 2, 2);
        w.s = Matrix::zeros(gf(3), 2, 2);
        assert_eq!(apply_transform(&a, &w), Err(Error::SingularWitness));
    }

    #[test]
    fn two_step_examples() {
        let f = gf(3);
        let a = tensor(3, &[&[&[1, 2], &[0, 1]], &[&[2, 2], &[1, 0]]]);
        let swap = Matrix::from_rows(f, &[[0, 1], [1, 0]]).unwrap();
        let id = Matrix::identity(f, 2);
        let b = two_step_realize(&a, &id, &id, &swap).unwrap();
        assert_eq!(b.slice(0), a.slice(1));
        assert_eq!(b.slice(1), a.slice(0));
        let r = Matrix::from_rows(f, &[[1, 1], [0, 2]]).unwrap();
        let b = two_step_realize(&a, &r, &swap, &id).unwrap();
        assert_eq!(b.slice(0), r.transpose().mul(&a.slice(0)).mul(&swap));
    }

    #[test]
    fn permute_axes_roundtrip() {
        let a = SpatialMatrix::from_fn(gf(7), (2, 3, 4), |i, j, k| (i * 12 + j * 4 + k) as u32);
        let b = a.permute_axes([2, 0, 1]).unwrap();
        assert_eq!(b.dims(), (4, 2, 3));
        assert_eq!(b.get(3, 1, 2), a.get(1, 2, 3));
        assert!(a.permute_axes([0, 0, 1]).is_err());
    }

    #[test]
    fn regular_part_examples() {
        let z = SpatialMatrix::zeros(gf(2), 2, 2, 2);
        assert_eq!(regular_part(&z).0.dims(), (0, 0, 0));

        let a = tensor(3, &[&[&[1, 0], &[0, 1]], &[&[0, 0], &[0, 0]]]);
        let (part, w) = regular_part(&a);
        assert_eq!(part, tensor(3, &[&[&[1, 0], &[0, 1]]]));
        assert_eq!(apply_transform(&a, &w).unwrap(), part.pad(2, 2, 2));

        let a12 = RegularClass22::C3x2x2A12.representative(gf(5)).unwrap();
        let (part, w) = regular_part(&a12);
        assert_eq!(part.dims(), (3, 2, 2));
        assert!(is_regular(&part));
        assert_eq!(apply_transform(&a12, &w).unwrap(), part);
    }

    #[test]
    fn regularity_examples() {
        assert!(is_regular(&tensor(2, &[&[&[1]]])));
        assert!(!is_regular(&tensor(3, &[&[&[1, 0], &[0, 1]], &[&[0, 0], &[0, 0]]])));
        assert!(!is_regular(&tensor(3, &[&[&[1, 0], &[0, 1]], &[&[1, 0], &[0, 1]]])));
    }

    #[test]
    fn theorem1_examples() {
        let f = gf(5);
        let a12 = RegularClass22::C3x2x2A12.representative(f).unwrap();
        let (sum, w) = theorem1_form(&a12).unwrap();
        assert_eq!((sum.right_indices.clone(), sum.left_indices.clone()), (vec![], vec![2]));
        assert_eq!(sum.finite_polys, vec![Poly::x(f)]);
        assert_eq!(apply_transform(&a12, &w).unwrap(), sum.synthesize());

        let a12a = RegularClass22::C3x2x2A12a.representative(f).unwrap();
        let (sum, w) = theorem1_form(&a12a).unwrap();
        assert_eq!(sum.left_indices, vec![3]);
        assert!(sum.finite_polys.is_empty() && sum.right_indices.is_empty());
        assert_eq!(apply_transform(&a12a, &w).unwrap(), sum.synthesize());

        // x^2 - x - 1 is irreducible over GF(2); x^2 - 2x = x(x - 2) splits over GF(5)
        let (sum, _) = theorem1_form(&d_tensor(gf(2), 1, 1)).unwrap();
        assert_eq!(sum.finite_polys, vec![poly(2, &[1, 1, 1])]);
        let (sum, _) = theorem1_form(&d_tensor(f, 2, 0)).unwrap();
        assert_eq!(sum.finite_polys, vec![Poly::x(f), Poly::linear(f, 2)]);

        assert_eq!(
            theorem1_form(&SpatialMatrix::zeros(f, 1, 1, 3)).unwrap_err(),
            Error::WrongSliceCount(3)
        );
    }

    #[test]
    fn theorem1_removes_infinite_blocks() {
        // (J_2(0), I_2) + (I_1, [0]): needs the b-search
        let a = tensor(3, &[&[&[0, 0, 0], &[1, 0, 0], &[0, 0, 1]], &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 0]]]);
        let (sum, w) = theorem1_form(&a).unwrap();
        assert_eq!(sum.finite_polys.iter().map(|c| c.degree().unwrap()).sum::<usize>(), 3);
        assert_eq!(apply_transform(&a, &w).unwrap(), sum.synthesize());
    }

    #[test]
    fn field_too_small() {
        // over GF(2), (J_1(0), I_1) + (I,[0]) + (I,[1]) leaves no b and no swap
        let f = gf(2);
        let a = SpatialMatrix::from_slices(f, 3, 3, &[Matrix::diagonal(f, &[0, 1, 1]), Matrix::diagonal(f, &[1, 0, 1])]).unwrap();
        assert!(matches!(theorem1_form(&a), Err(Error::FieldTooSmall { .. })));
    }

    #[test]
    fn mobius_minimize_examples() {
        let f = gf(5);
        let c = CanonicalSum::new(f, vec![2], vec![], vec![]).unwrap();
        assert_eq!(mobius_orbit_minimize(&c), c);
        let c3 = CanonicalSum::new(f, vec![], vec![], vec![poly(5, &[2, 0, 1])]).unwrap();
        let c2 = CanonicalSum::new(f, vec![], vec![], vec![poly(5, &[3, 0, 1])]).unwrap();
        let min = mobius_orbit_minimize(&c3);
        assert_eq!(min, mobius_orbit_minimize(&c2));
        assert_eq!(min.finite_polys, vec![poly(5, &[1, 1, 1])]);
        assert_eq!(mobius_orbit_minimize(&min), min);
    }

    #[test]
    fn label_examples() {
        let f = gf(5);
        let a1 = RegularClass22::A(1).representative(f).unwrap();
        let a4 = RegularClass22::A(4).representative(f).unwrap();
        let a2 = RegularClass22::A(2).representative(f).unwrap();
        assert_eq!(canonical_label(&a1).unwrap(), canonical_label(&a4).unwrap());
        assert_ne!(canonical_label(&a1).unwrap(), canonical_label(&a2).unwrap());
    }

    #[test]
    fn equivalence_examples() {
        let f = gf(5);
        let a1 = RegularClass22::A(1).representative(f).unwrap();
        let (eq, w) = equivalent(&a1, &a1).unwrap();
        assert!(eq);
        assert_eq!(w.unwrap(), TransformWitness::identity(f, 2, 2, 2));

        let be = tensor(5, &[&[&[1, 0], &[0, 0]], &[&[0, 0], &[0, 1]]]);
        let (eq, w) = equivalent(&a1, &be).unwrap();
        assert!(eq);
        assert_eq!(apply_transform(&a1, &w.unwrap()).unwrap(), be);

        let g = gf(2);
        let b0 = RegularClass22::B(0).representative(g).unwrap();
        let b1 = RegularClass22::B(1).representative(g).unwrap();
        assert!(!equivalent(&b0, &b1).unwrap().0);
    }

    #[test]
    fn classify_examples() {
        let (c, _) = classify_regular(&tensor(3, &[&[&[1]]])).unwrap();
        assert_eq!(c, RegularClass22::C1x1x1);
        let f = gf(5);
        let d = d_tensor(f, 1, 0);
        let (c, w) = classify_regular(&d).unwrap();
        // 0 + 1/4 = 4, a square times 1
        assert_eq!(c, RegularClass22::A(1));
        assert_eq!(apply_transform(&d, &w).unwrap(), c.representative(f).unwrap());
        let (c, _) = classify_regular(&d_tensor(gf(2), 1, 1)).unwrap();
        assert_eq!(c, RegularClass22::B(1));
        assert!(matches!(
            classify_regular(&SpatialMatrix::zeros(f, 1, 3, 1)),
            Err(Error::UnsupportedShape { .. })
        ));
        assert_eq!(
            classify_regular(&SpatialMatrix::zeros(f, 2, 2, 2)).unwrap_err(),
            Error::NotRegular { m: 0, n: 0, q: 0 }
        );
    }

    #[test]
    fn lemma2_examples() {
        let f = gf(5);
        let e = |v| f.elem(v);
        assert!(lemma2_equivalent(e(2), e(3), e(2), e(3)).unwrap());
        assert!(lemma2_equivalent(e(0), e(1), e(0), e(4)).unwrap());
        let g = gf(2);
        for v in 0..2 {
            for v2 in 0..2 {
                assert!(!lemma2_equivalent(g.elem(0), g.elem(v), g.elem(1), g.elem(v2)).unwrap());
            }
        }
        let big = gf(17);
        assert!(matches!(
            lemma2_equivalent(big.elem(0), big.elem(0), big.elem(0), big.elem(0)),
            Err(Error::FieldTooLargeForSearch { p: 17, bound: 13 })
        ));
    }

    #[test]
    fn catalog_parameters() {
        let a_params = |p| {
            theorem2_catalog(gf(p))
                .into_iter()
                .filter_map(|c| match c {
                    RegularClass22::A(v) => Some(v),
                    _ => None,
                })
                .collect::<Vec<_>>()
        };
        assert_eq!(a_params(2), vec![0]);
        assert_eq!(a_params(3), vec![0, 1, 2]);
        assert_eq!(a_params(5), vec![0, 1, 2]);
        assert_eq!(a_params(7), vec![0, 1, 3]);
        let b: Vec<_> = theorem2_catalog(gf(2)).into_iter().filter(|c| matches!(c, RegularClass22::B(_))).collect();
        assert_eq!(b, vec![RegularClass22::B(0), RegularClass22::B(1)]);
    }
}

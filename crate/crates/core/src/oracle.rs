//! Brute-force ground truth for tiny fields and shapes.

use crate::config::Config;
use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::matrix::Matrix;
use crate::spatial::{apply_unchecked, SpatialMatrix, TransformWitness};

/// All of `GL_dim(GF(p))`, lexicographic in row-major entries.
#[derive(Debug, Clone)]
pub struct GroupEnumeration {
    pub field: PrimeField,
    pub dim: usize,
    pub elements: Vec<Matrix>,
}

/// `prod_{i < dim} (p^dim - p^i)`
pub fn gl_order(dim: usize, p: u32) -> u128 {
    let pd = (p as u128).pow(dim as u32);
    (0..dim).map(|i| pd - (p as u128).pow(i as u32)).product()
}

fn checked_pow(p: u32, e: usize) -> u128 {
    (0..e).fold(1u128, |acc, _| acc.saturating_mul(p as u128))
}

pub fn enumerate_gl(dim: usize, field: PrimeField) -> Result<GroupEnumeration> {
    enumerate_gl_with(dim, field, &Config::default())
}

pub fn enumerate_gl_with(dim: usize, field: PrimeField, cfg: &Config) -> Result<GroupEnumeration> {
    let needed = checked_pow(field.p(), dim * dim);
    if needed > cfg.budget {
        return Err(Error::BudgetExceeded {
            needed,
            budget: cfg.budget,
        });
    }
    let p = field.p();
    let mut entries = vec![0u32; dim * dim];
    let mut elements = Vec::with_capacity(gl_order(dim, p) as usize);
    loop {
        let m = Matrix::from_fn(field, dim, dim, |i, j| entries[i * dim + j]);
        if m.is_invertible() {
            elements.push(m);
        }
        // odometer, last entry fastest
        let mut pos = entries.len();
        loop {
            if pos == 0 {
                return Ok(GroupEnumeration { field, dim, elements });
            }
            pos -= 1;
            entries[pos] += 1;
            if entries[pos] < p {
                break;
            }
            entries[pos] = 0;
        }
    }
}

/// Rows are the slices along axis 0, flattened.
fn axis0_matrix(a: &SpatialMatrix) -> Matrix {
    let (m, n, q) = a.dims();
    Matrix::from_fn(a.field(), m, n * q, |i, x| a.get(i, x / q, x % q))
}

pub fn oracle_equivalent(a: &SpatialMatrix, b: &SpatialMatrix) -> Result<(bool, Option<TransformWitness>)> {
    oracle_equivalent_with(a, b, &Config::default())
}

/// Exhausts the two smaller group factors; for each pair the remaining factor
/// exists iff the axis-0 flattenings have equal row spaces, and is then read
/// off from the two reduction transforms.
pub fn oracle_equivalent_with(
    a: &SpatialMatrix,
    b: &SpatialMatrix,
    cfg: &Config,
) -> Result<(bool, Option<TransformWitness>)> {
    if a.field() != b.field() {
        return Err(Error::FieldMismatch(a.field().p(), b.field().p()));
    }
    if a.dims() != b.dims() {
        return Err(Error::DimMismatch(format!("{:?} vs {:?}", a.dims(), b.dims())));
    }
    let f = a.field();
    let (m, n, q) = a.dims();
    let d = [m, n, q];
    let solved = (0..3).max_by_key(|&t| (d[t], std::cmp::Reverse(t))).unwrap();
    let others: Vec<usize> = (0..3).filter(|&t| t != solved).collect();
    let perm = [solved, others[0], others[1]];
    let needed = gl_order(d[perm[1]], f.p()).saturating_mul(gl_order(d[perm[2]], f.p()));
    if needed > cfg.budget {
        return Err(Error::BudgetExceeded {
            needed,
            budget: cfg.budget,
        });
    }
    let pa = a.permute_axes(perm)?;
    let pb = b.permute_axes(perm)?;
    let (pm, pn, pq) = pa.dims();
    let rb = axis0_matrix(&pb).rref();
    let eb_inv = rb.transform.inverse()?;
    let gs = enumerate_gl_with(pn, f, cfg)?;
    let gt = enumerate_gl_with(pq, f, cfg)?;
    let id = Matrix::identity(f, pm);
    for s in &gs.elements {
        for t in &gt.elements {
            let w = TransformWitness {
                r: id.clone(),
                s: s.clone(),
                t: t.clone(),
            };
            let c = apply_unchecked(&pa, &w);
            let rc = axis0_matrix(&c).rref();
            if rc.rank != rb.rank || rc.reduced != rb.reduced {
                continue;
            }
            let r = eb_inv.mul(&rc.transform).transpose();
            let mut mats = [Matrix::identity(f, 0), Matrix::identity(f, 0), Matrix::identity(f, 0)];
            mats[perm[0]] = r;
            mats[perm[1]] = s.clone();
            mats[perm[2]] = t.clone();
            let [r, s, t] = mats;
            let witness = TransformWitness { r, s, t };
            if apply_unchecked(a, &witness) != *b {
                return Err(Error::Unsupported("oracle witness failed verification".into()));
            }
            return Ok((true, Some(witness)));
        }
    }
    Ok((false, None))
}

/// One orbit of `orbit_partition`; `members` are tensor codes in increasing
/// order and `members[0]` encodes the representative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orbit {
    pub representative: SpatialMatrix,
    pub size: usize,
    pub members: Vec<u64>,
}

/// Entries read as base-p digits, first entry most significant, so the least
/// code is the lexicographically least tensor.
pub fn encode(a: &SpatialMatrix) -> u64 {
    let p = a.field().p() as u64;
    a.data().iter().fold(0u64, |acc, &v| acc * p + v as u64)
}

pub fn decode(field: PrimeField, dims: (usize, usize, usize), mut code: u64) -> SpatialMatrix {
    let len = dims.0 * dims.1 * dims.2;
    let p = field.p() as u64;
    let mut data = vec![0u32; len];
    for slot in data.iter_mut().rev() {
        *slot = (code % p) as u32;
        code /= p;
    }
    SpatialMatrix::from_data(field, dims, data)
}

/// Transvections `I + E_ij` and, for odd p, `diag(g, 1, ..., 1)` with `g` a
/// primitive root: together they generate `GL_d`.
fn gl_generators(field: PrimeField, d: usize) -> Vec<Matrix> {
    let mut out = Vec::new();
    for i in 0..d {
        for j in 0..d {
            if i != j {
                out.push(Matrix::from_fn(field, d, d, |r, c| u32::from(r == c || (r, c) == (i, j))));
            }
        }
    }
    if field.p() > 2 && d > 0 {
        let g = field.primitive_root();
        out.push(Matrix::from_fn(field, d, d, |r, c| match (r, c) {
            (0, 0) => g,
            _ => u32::from(r == c),
        }));
    }
    out
}

pub fn orbit_partition(shape: (usize, usize, usize), field: PrimeField) -> Result<Vec<Orbit>> {
    orbit_partition_with(shape, field, &Config::default())
}

/// Orbits of all `p^(mnq)` tensors of the shape, ordered by representative.
pub fn orbit_partition_with(shape: (usize, usize, usize), field: PrimeField, cfg: &Config) -> Result<Vec<Orbit>> {
    let (m, n, q) = shape;
    let needed = checked_pow(field.p(), m * n * q);
    if needed > cfg.budget {
        return Err(Error::BudgetExceeded {
            needed,
            budget: cfg.budget,
        });
    }
    let total = needed as usize;
    let mut gens = Vec::new();
    for g in gl_generators(field, m) {
        gens.push(TransformWitness {
            r: g,
            ..TransformWitness::identity(field, m, n, q)
        });
    }
    for g in gl_generators(field, n) {
        gens.push(TransformWitness {
            s: g,
            ..TransformWitness::identity(field, m, n, q)
        });
    }
    for g in gl_generators(field, q) {
        gens.push(TransformWitness {
            t: g,
            ..TransformWitness::identity(field, m, n, q)
        });
    }
    let mut seen = vec![false; total];
    let mut orbits = Vec::new();
    for start in 0..total {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut members = vec![start as u64];
        let mut frontier = 0;
        while frontier < members.len() {
            let cur = decode(field, shape, members[frontier]);
            frontier += 1;
            for g in &gens {
                let next = encode(&apply_unchecked(&cur, g)) as usize;
                if !seen[next] {
                    seen[next] = true;
                    members.push(next as u64);
                }
            }
        }
        members.sort_unstable();
        orbits.push(Orbit {
            representative: decode(field, shape, start as u64),
            size: members.len(),
            members,
        });
    }
    Ok(orbits)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u32) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn group_orders() {
        assert_eq!(enumerate_gl(2, gf(2)).unwrap().elements.len(), 6);
        assert_eq!(enumerate_gl(1, gf(5)).unwrap().elements.len(), 4);
        assert_eq!(enumerate_gl(2, gf(3)).unwrap().elements.len(), 48);
        assert_eq!(enumerate_gl(0, gf(3)).unwrap().elements.len(), 1);
        assert_eq!(gl_order(3, 2), 168);
        assert_eq!(enumerate_gl(3, gf(2)).unwrap().elements.len(), 168);
        let cfg = Config {
            budget: 100,
            ..Config::default()
        };
        assert_eq!(
            enumerate_gl_with(3, gf(2), &cfg).unwrap_err(),
            Error::BudgetExceeded { needed: 512, budget: 100 }
        );
    }

    #[test]
    fn enumeration_is_lexicographic() {
        let g = enumerate_gl(2, gf(2)).unwrap();
        let flat: Vec<Vec<u32>> = g.elements.iter().map(|m| m.to_rows().concat()).collect();
        let mut sorted = flat.clone();
        sorted.sort();
        assert_eq!(flat, sorted);
        assert_eq!(flat[0], vec![0, 1, 1, 0]);
    }

    #[test]
    fn oracle_examples() {
        let f = gf(3);
        let a = SpatialMatrix::from_fn(f, (2, 2, 2), |i, j, k| (i + 2 * j + k) as u32 % 3);
        let (eq, w) = oracle_equivalent(&a, &a).unwrap();
        assert!(eq && w.is_some());
        let z = SpatialMatrix::zeros(f, 2, 2, 2);
        assert!(!oracle_equivalent(&z, &a).unwrap().0);
    }

    #[test]
    fn small_partitions() {
        let orbits = orbit_partition((1, 1, 1), gf(2)).unwrap();
        assert_eq!(orbits.len(), 2);
        assert_eq!(orbits.iter().map(|o| o.size).collect::<Vec<_>>(), vec![1, 1]);
        let orbits = orbit_partition((2, 2, 1), gf(3)).unwrap();
        assert_eq!(orbits.len(), 3);
        assert_eq!(orbits.iter().map(|o| o.size).sum::<usize>(), 81);
    }

    #[test]
    fn codes_roundtrip() {
        let f = gf(3);
        let a = SpatialMatrix::from_fn(f, (2, 1, 3), |i, j, k| (i * 5 + j + k * 2) as u32 % 3);
        assert_eq!(decode(f, (2, 1, 3), encode(&a)), a);
    }
}

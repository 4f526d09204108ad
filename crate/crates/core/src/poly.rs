//! Univariate polynomials over GF(p), factorization into prime powers,
//! companion matrices and the Moebius action on characteristic polynomials.

use std::cmp::Ordering;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{FieldElem, PrimeField};
use crate::matrix::Matrix;

/// Seed used when callers do not supply their own generator.
pub const DEFAULT_SEED: u64 = 0x5eed_2024;

/// Dense polynomial, ascending coefficients, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    field: PrimeField,
    coeffs: Vec<u32>,
}

impl Poly {
    pub fn new(field: PrimeField, mut coeffs: Vec<u32>) -> Self {
        for c in coeffs.iter_mut() {
            *c = field.reduce(*c as u64);
        }
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly { field, coeffs }
    }

    pub fn zero(field: PrimeField) -> Self {
        Poly::new(field, vec![])
    }

    pub fn one(field: PrimeField) -> Self {
        Poly::new(field, vec![1])
    }

    pub fn x(field: PrimeField) -> Self {
        Poly::new(field, vec![0, 1])
    }

    /// `x - root`
    pub fn linear(field: PrimeField, root: u32) -> Self {
        Poly::new(field, vec![field.neg(root), 1])
    }

    pub fn constant(field: PrimeField, c: u32) -> Self {
        Poly::new(field, vec![c])
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> u32 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> u32 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == 1
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(self.field.inv(self.leading()).unwrap())
    }

    pub fn scale(&self, c: u32) -> Poly {
        let f = self.field;
        Poly::new(f, self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let f = self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new(f, (0..n).map(|i| f.add(self.coeff(i), other.coeff(i))).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let f = self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new(f, (0..n).map(|i| f.sub(self.coeff(i), other.coeff(i))).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let f = self.field;
        if self.is_zero() || other.is_zero() {
            return Poly::zero(f);
        }
        let mut out = vec![0u32; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Poly::new(f, out)
    }

    pub fn pow(&self, mut e: u64) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one(self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Euclidean division. Panics on a zero divisor.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        let f = self.field;
        let dd = d.degree().expect("division by the zero polynomial");
        let inv_lead = f.inv(d.leading()).unwrap();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Poly::zero(f), self.clone());
        }
        let mut quot = vec![0u32; rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = f.mul(rem[i], inv_lead);
            if c == 0 {
                continue;
            }
            quot[i - dd] = c;
            for (j, &dc) in d.coeffs.iter().enumerate() {
                rem[i - dd + j] = f.sub(rem[i - dd + j], f.mul(c, dc));
            }
        }
        (Poly::new(f, quot), Poly::new(f, rem))
    }

    pub fn rem(&self, d: &Poly) -> Poly {
        self.div_rem(d).1
    }

    /// Exact quotient; panics if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Poly {
        let (q, r) = self.div_rem(d);
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    pub fn mul_mod(&self, other: &Poly, modulus: &Poly) -> Poly {
        self.mul(other).rem(modulus)
    }

    pub fn pow_mod(&self, mut e: u64, modulus: &Poly) -> Poly {
        let mut base = self.rem(modulus);
        let mut acc = Poly::one(self.field).rem(modulus);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_mod(&base, modulus);
            }
            base = base.mul_mod(&base, modulus);
            e >>= 1;
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        let f = self.field;
        Poly::new(
            f,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| f.mul(f.reduce(i as u64), c))
                .collect(),
        )
    }

    pub fn eval(&self, x: u32) -> u32 {
        let f = self.field;
        self.coeffs.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c))
    }

    /// For `self = g(x^p)` returns `g`; in GF(p) every coefficient is its own p-th root.
    fn pth_root(&self) -> Poly {
        let p = self.field.p() as usize;
        Poly::new(self.field, self.coeffs.iter().step_by(p).copied().collect())
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Degree first, then the ascending coefficient sequence.
impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.cmp(&other.coeffs))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (i, c) {
                (0, _) => write!(f, "{c}")?,
                (1, 1) => write!(f, "x")?,
                (1, _) => write!(f, "{c}x")?,
                (_, 1) => write!(f, "x^{i}")?,
                _ => write!(f, "{c}x^{i}")?,
            }
        }
        Ok(())
    }
}

/// Monic gcd. Errors when both inputs are zero.
pub fn poly_gcd(f: &Poly, g: &Poly) -> Result<Poly> {
    if f.is_zero() && g.is_zero() {
        return Err(Error::BothZero);
    }
    let (mut a, mut b) = (f.clone(), g.clone());
    while !b.is_zero() {
        let r = a.rem(&b);
        a = b;
        b = r;
    }
    Ok(a.monic())
}

fn gcd(f: &Poly, g: &Poly) -> Poly {
    poly_gcd(f, g).expect("at least one operand is nonzero")
}

/// A power of a monic irreducible polynomial.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PrimePowerFactor {
    pub base: Poly,
    pub exponent: u32,
}

impl PrimePowerFactor {
    pub fn expand(&self) -> Poly {
        self.base.pow(self.exponent as u64)
    }
}

/// Factors a monic polynomial of positive degree into prime powers, sorted by base.
pub fn factor_prime_powers(f: &Poly) -> Result<Vec<PrimePowerFactor>> {
    factor_prime_powers_seeded(f, DEFAULT_SEED)
}

pub fn factor_prime_powers_seeded(f: &Poly, seed: u64) -> Result<Vec<PrimePowerFactor>> {
    factor_prime_powers_with_rng(f, &mut ChaCha8Rng::seed_from_u64(seed))
}

pub fn factor_prime_powers_with_rng<R: Rng>(f: &Poly, rng: &mut R) -> Result<Vec<PrimePowerFactor>> {
    if f.is_zero() || !f.is_monic() {
        return Err(Error::NotMonic);
    }
    if f.degree() == Some(0) {
        return Err(Error::ZeroDegree);
    }
    let mut out: Vec<PrimePowerFactor> = Vec::new();
    for (part, mult) in squarefree_decomposition(f) {
        for (chunk, d) in distinct_degree(&part) {
            for base in equal_degree(&chunk, d, rng) {
                match out.iter_mut().find(|pf| pf.base == base) {
                    Some(pf) => pf.exponent += mult,
                    None => out.push(PrimePowerFactor { base, exponent: mult }),
                }
            }
        }
    }
    out.sort_by(|a, b| a.base.cmp(&b.base));
    Ok(out)
}

/// True iff `f` is a positive power of one irreducible polynomial.
pub fn is_prime_power(f: &Poly) -> bool {
    matches!(factor_prime_powers(f), Ok(v) if v.len() == 1)
}

/// Pairs `(g, i)` with `f = prod g^i`, every `g` squarefree and monic.
fn squarefree_decomposition(f: &Poly) -> Vec<(Poly, u32)> {
    let field = f.field();
    let mut out = Vec::new();
    let mut c = gcd(f, &f.derivative());
    let mut w = f.div_exact(&c);
    let mut i = 1u32;
    while !w.is_one() {
        let y = gcd(&w, &c);
        let fac = w.div_exact(&y);
        if !fac.is_one() {
            out.push((fac, i));
        }
        w = y;
        c = c.div_exact(&w);
        i += 1;
    }
    if !c.is_one() {
        let p = field.p();
        for (g, j) in squarefree_decomposition(&c.pth_root()) {
            out.push((g, j * p));
        }
    }
    out
}

/// Splits a squarefree monic polynomial into products of irreducibles of equal degree.
fn distinct_degree(f: &Poly) -> Vec<(Poly, usize)> {
    let field = f.field();
    let p = field.p() as u64;
    let x = Poly::x(field);
    let mut out = Vec::new();
    let mut g = f.clone();
    let mut h = x.rem(&g);
    let mut d = 1;
    while g.degree().unwrap_or(0) >= 2 * d {
        h = h.pow_mod(p, &g);
        let fac = gcd(&g, &h.sub(&x));
        if !fac.is_one() {
            g = g.div_exact(&fac);
            h = h.rem(&g);
            out.push((fac, d));
        }
        d += 1;
    }
    if let Some(deg) = g.degree().filter(|&k| k > 0) {
        out.push((g, deg));
    }
    out
}

/// Cantor-Zassenhaus splitting of a product of distinct irreducibles of degree `d`.
fn equal_degree<R: Rng>(f: &Poly, d: usize, rng: &mut R) -> Vec<Poly> {
    let n = f.degree().unwrap();
    if n == d {
        return vec![f.monic()];
    }
    let field = f.field();
    let p = field.p() as u64;
    loop {
        let a = Poly::new(field, (0..n).map(|_| rng.gen_range(0..field.p())).collect());
        if a.degree().unwrap_or(0) == 0 {
            continue;
        }
        let candidate = if p == 2 {
            // trace map a + a^2 + ... + a^(2^(d-1))
            let mut t = a.rem(f);
            let mut acc = t.clone();
            for _ in 1..d {
                t = t.mul_mod(&t, f);
                acc = acc.add(&t);
            }
            acc
        } else {
            // a^((p^d - 1)/2) = (prod_{i<d} a^(p^i))^((p-1)/2)
            let mut frob = a.rem(f);
            let mut norm = frob.clone();
            for _ in 1..d {
                frob = frob.pow_mod(p, f);
                norm = norm.mul_mod(&frob, f);
            }
            norm.pow_mod((p - 1) / 2, f).sub(&Poly::one(field))
        };
        let g = gcd(f, &candidate);
        let dg = g.degree().unwrap();
        if dg > 0 && dg < n {
            let mut parts = equal_degree(&g, d, rng);
            parts.extend(equal_degree(&f.div_exact(&g), d, rng));
            return parts;
        }
    }
}

/// Companion matrix: ones on the subdiagonal, last column `(u_l, ..., u_1)`
/// where `chi = x^l - u_1 x^(l-1) - ... - u_l`.
pub fn companion(chi: &Poly) -> Result<Matrix> {
    if chi.is_zero() || !chi.is_monic() {
        return Err(Error::NotMonic);
    }
    let l = chi.degree().unwrap();
    if l == 0 {
        return Err(Error::ZeroDegree);
    }
    let f = chi.field();
    Ok(Matrix::from_fn(f, l, l, |i, j| {
        if j == l - 1 {
            f.neg(chi.coeff(i))
        } else if i == j + 1 {
            1
        } else {
            0
        }
    }))
}

/// The slice-axis matrix `[[a, c], [b, d]]` with nonzero determinant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Mobius2x2 {
    pub a: u32,
    pub b: u32,
    pub c: u32,
    pub d: u32,
    field: PrimeField,
}

impl Mobius2x2 {
    pub fn new(field: PrimeField, a: u32, b: u32, c: u32, d: u32) -> Result<Self> {
        let t = Mobius2x2 {
            a: field.reduce(a as u64),
            b: field.reduce(b as u64),
            c: field.reduce(c as u64),
            d: field.reduce(d as u64),
            field,
        };
        if t.det() == 0 {
            return Err(Error::Singular);
        }
        Ok(t)
    }

    pub fn from_elems(a: FieldElem, b: FieldElem, c: FieldElem, d: FieldElem) -> Result<Self> {
        Self::new(a.field(), a.value(), b.value(), c.value(), d.value())
    }

    pub fn identity(field: PrimeField) -> Self {
        Self::new(field, 1, 0, 0, 1).unwrap()
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn det(&self) -> u32 {
        let f = self.field;
        f.sub(f.mul(self.a, self.d), f.mul(self.b, self.c))
    }

    /// `[[a, c], [b, d]]`, i.e. the `T` acting on the slice axis.
    pub fn to_matrix(&self) -> Matrix {
        Matrix::from_rows(self.field, &[[self.a, self.c], [self.b, self.d]]).unwrap()
    }

    pub fn from_matrix(t: &Matrix) -> Result<Self> {
        if (t.rows(), t.cols()) != (2, 2) {
            return Err(Error::DimMismatch("Moebius matrix must be 2x2".into()));
        }
        Self::new(t.field(), t.get(0, 0), t.get(1, 0), t.get(0, 1), t.get(1, 1))
    }

    pub fn inverse(&self) -> Self {
        let f = self.field;
        let k = f.inv(self.det()).unwrap();
        Self::new(
            f,
            f.mul(k, self.d),
            f.mul(k, f.neg(self.b)),
            f.mul(k, f.neg(self.c)),
            f.mul(k, self.a),
        )
        .unwrap()
    }

    /// Representatives of PGL_2(GF(p)): first nonzero of `(a, b, c, d)` equals 1,
    /// in lexicographic order. There are `p^3 - p` of them.
    pub fn projective_representatives(field: PrimeField) -> Vec<Mobius2x2> {
        let p = field.p();
        let mut out = Vec::with_capacity((p as usize).pow(3));
        for a in 0..p {
            for b in 0..p {
                for c in 0..p {
                    for d in 0..p {
                        let first = [a, b, c, d].into_iter().find(|&v| v != 0);
                        if first != Some(1) {
                            continue;
                        }
                        if let Ok(t) = Self::new(field, a, b, c, d) {
                            out.push(t);
                        }
                    }
                }
            }
        }
        out
    }
}

fn check_chi(chi: &Poly, t: &Mobius2x2) -> Result<usize> {
    if chi.field() != t.field() {
        return Err(Error::FieldMismatch(chi.field().p(), t.field().p()));
    }
    if chi.is_zero() || !chi.is_monic() {
        return Err(Error::NotMonic);
    }
    match chi.degree() {
        Some(0) => Err(Error::ZeroDegree),
        Some(l) => Ok(l),
        None => unreachable!(),
    }
}

/// `eps * (d - x b)^l * chi((x a - c) / (d - x b))`, expanded without division
/// and scaled to be monic.
pub fn mobius_transform(chi: &Poly, t: &Mobius2x2) -> Result<Poly> {
    let l = check_chi(chi, t)?;
    let f = chi.field();
    let num = Poly::new(f, vec![f.neg(t.c), t.a]);
    let den = Poly::new(f, vec![t.d, f.neg(t.b)]);
    let mut num_pows = vec![Poly::one(f)];
    let mut den_pows = vec![Poly::one(f)];
    for i in 1..=l {
        num_pows.push(num_pows[i - 1].mul(&num));
        den_pows.push(den_pows[i - 1].mul(&den));
    }
    let mut raw = Poly::zero(f);
    for (i, &ci) in chi.coeffs().iter().enumerate() {
        if ci != 0 {
            raw = raw.add(&num_pows[i].mul(&den_pows[l - i]).scale(ci));
        }
    }
    if raw.degree() != Some(l) {
        return Err(Error::Inadmissible);
    }
    Ok(raw.monic())
}

/// Characteristic polynomial of `(cI + d Phi)(aI + b Phi)^{-1}`; an independent
/// matrix route to the same polynomial as [`mobius_transform`].
pub fn mobius_charpoly_check(chi: &Poly, t: &Mobius2x2) -> Result<Poly> {
    let l = check_chi(chi, t)?;
    let f = chi.field();
    let phi = companion(chi)?;
    let id = Matrix::identity(f, l);
    let denom = id.scale(t.a).add(&phi.scale(t.b));
    let numer = id.scale(t.c).add(&phi.scale(t.d));
    let inv = denom.inverse().map_err(|_| Error::Inadmissible)?;
    Ok(numer.mul(&inv).char_poly())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u32) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn poly(p: u32, c: &[u32]) -> Poly {
        Poly::new(gf(p), c.to_vec())
    }

    fn pf(base: Poly, exponent: u32) -> PrimePowerFactor {
        PrimePowerFactor { base, exponent }
    }

    #[test]
    fn gcd_examples() {
        let f = poly(5, &[1, 2, 3]);
        assert_eq!(poly_gcd(&f, &Poly::zero(gf(5))).unwrap(), f.monic());
        assert_eq!(poly_gcd(&poly(2, &[0, 1, 1]), &poly(2, &[1, 1])).unwrap(), poly(2, &[1, 1]));
        assert_eq!(poly_gcd(&poly(2, &[1, 0, 1]), &poly(2, &[1, 1])).unwrap(), poly(2, &[1, 1]));
        assert_eq!(poly_gcd(&Poly::zero(gf(3)), &Poly::zero(gf(3))), Err(Error::BothZero));
    }

    #[test]
    fn factor_examples() {
        assert_eq!(factor_prime_powers(&poly(2, &[1, 0, 1])).unwrap(), vec![pf(poly(2, &[1, 1]), 2)]);
        assert_eq!(
            factor_prime_powers(&poly(2, &[0, 1, 0, 1])).unwrap(),
            vec![pf(poly(2, &[0, 1]), 1), pf(poly(2, &[1, 1]), 2)]
        );
        assert_eq!(
            factor_prime_powers(&poly(2, &[1, 1, 1])).unwrap(),
            vec![pf(poly(2, &[1, 1, 1]), 1)]
        );
        assert_eq!(factor_prime_powers(&poly(5, &[1, 2])), Err(Error::NotMonic));
        assert_eq!(factor_prime_powers(&poly(5, &[1])), Err(Error::ZeroDegree));
    }

    #[test]
    fn factor_high_multiplicity_in_char_p() {
        // (x+1)^6 (x^2+x+1)^3 over GF(3) exercises the p-th root branch
        let f = gf(3);
        let target = poly(3, &[1, 1]).pow(6).mul(&poly(3, &[2, 0, 1]).pow(3));
        let fac = factor_prime_powers(&target).unwrap();
        let rebuilt = fac.iter().fold(Poly::one(f), |acc, pf| acc.mul(&pf.expand()));
        assert_eq!(rebuilt, target);
        assert!(fac.iter().all(|pf| is_prime_power(&pf.base)));
    }

    #[test]
    fn companion_examples() {
        let f = gf(7);
        let (u, v) = (3, 5);
        let chi = Poly::new(f, vec![f.neg(v), f.neg(u), 1]);
        assert_eq!(companion(&chi).unwrap().to_rows(), vec![vec![0, v], vec![1, u]]);
        assert_eq!(companion(&Poly::linear(f, 4)).unwrap().to_rows(), vec![vec![4]]);
        assert_eq!(
            companion(&poly(2, &[0, 0, 0, 1])).unwrap().to_rows(),
            vec![vec![0, 0, 0], vec![1, 0, 0], vec![0, 1, 0]]
        );
        assert_eq!(companion(&poly(3, &[1])), Err(Error::ZeroDegree));
        assert_eq!(companion(&poly(3, &[1, 2])), Err(Error::NotMonic));
    }

    #[test]
    fn mobius_examples() {
        let f = gf(5);
        let id = Mobius2x2::identity(f);
        let chi = poly(5, &[4, 0, 1]); // x^2 - 1
        assert_eq!(mobius_transform(&chi, &id).unwrap(), chi);
        assert_eq!(mobius_charpoly_check(&chi, &id).unwrap(), chi);

        let scale = Mobius2x2::new(f, 1, 0, 0, 2).unwrap();
        let want = poly(5, &[1, 0, 1]); // x^2 - 4
        assert_eq!(mobius_transform(&chi, &scale).unwrap(), want);
        assert_eq!(mobius_charpoly_check(&chi, &scale).unwrap(), want);

        let swap = Mobius2x2::new(f, 0, 1, 1, 0).unwrap();
        let chi2 = poly(5, &[3, 0, 1]); // x^2 - 2
        let want2 = poly(5, &[2, 0, 1]); // x^2 - 3
        assert_eq!(mobius_transform(&chi2, &swap).unwrap(), want2);
        assert_eq!(mobius_charpoly_check(&chi2, &swap).unwrap(), want2);
    }

    #[test]
    fn mobius_inadmissible_when_eigenvalue_maps_to_infinity() {
        let f = gf(5);
        // chi = x - 2, T = (a,b,c,d) = (3,1,0,1): a + b*2 = 0
        let t = Mobius2x2::new(f, 3, 1, 0, 1).unwrap();
        let chi = Poly::linear(f, 2);
        assert_eq!(mobius_transform(&chi, &t), Err(Error::Inadmissible));
        assert_eq!(mobius_charpoly_check(&chi, &t), Err(Error::Inadmissible));
    }

    #[test]
    fn pgl2_sizes() {
        for p in [2u32, 3, 5, 7] {
            let n = Mobius2x2::projective_representatives(gf(p)).len();
            assert_eq!(n as u32, p * p * p - p);
        }
    }

    #[test]
    fn ordering_is_degree_then_coefficients() {
        let a = poly(5, &[4, 1]);
        let b = poly(5, &[0, 0, 1]);
        let c = poly(5, &[1, 0, 1]);
        assert!(a < b && b < c);
    }
}

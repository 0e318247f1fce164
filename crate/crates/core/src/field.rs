//! Prime fields and their extensions `F_q[t] / (f)`.
//!
//! Field elements are coefficient vectors in the polynomial basis
//! `1, t, ..., t^(h-1)`, constant term first.

use crate::error::{parameter, Error, Result};
use crate::group::{Elem, GroupDescriptor};

/// Largest extension field order enumerated by default.
pub const DEFAULT_FIELD_CAP: u64 = 4096;

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin, exact for every `u64` with this witness set.
pub fn is_prime(n: u64) -> bool {
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &WITNESSES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(parameter(format!("{p} is not prime")));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.p
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        mul_mod(a, b, self.p)
    }

    pub fn pow(&self, a: u64, e: u64) -> u64 {
        pow_mod(a, e, self.p)
    }
}

/// Legendre symbol by Euler's criterion: +1 for a nonzero square, -1 for a
/// non-square, 0 for `a = 0 (mod p)`.
pub fn quadratic_character(p: u64, a: u64) -> Result<i8> {
    if p == 2 {
        return Err(parameter("quadratic character needs an odd prime"));
    }
    if !is_prime(p) {
        return Err(parameter(format!("{p} is not prime")));
    }
    let a = a % p;
    if a == 0 {
        return Ok(0);
    }
    Ok(if pow_mod(a, (p - 1) / 2, p) == 1 { 1 } else { -1 })
}

// Polynomials over F_q as coefficient vectors, constant term first.

fn trim(mut f: Vec<u64>) -> Vec<u64> {
    while f.last() == Some(&0) {
        f.pop();
    }
    f
}

/// Remainder of `f` modulo the monic `m`.
fn poly_rem(f: &[u64], m: &[u64], q: u64) -> Vec<u64> {
    let mut r = trim(f.to_vec());
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        for (i, &c) in m.iter().enumerate() {
            let sub = mul_mod(lead, c, q);
            r[shift + i] = (r[shift + i] + q - sub) % q;
        }
        r = trim(r);
    }
    r
}

fn poly_mul(a: &[u64], b: &[u64], q: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mul_mod(x, y, q)) % q;
        }
    }
    out
}

/// Monic polynomial of degree `deg` whose lower coefficients are the base-`q`
/// digits of `index`, least significant first.
fn monic_from_index(mut index: u64, deg: usize, q: u64) -> Vec<u64> {
    let mut f = vec![0; deg + 1];
    for c in f.iter_mut().take(deg) {
        *c = index % q;
        index /= q;
    }
    f[deg] = 1;
    f
}

/// Irreducibility by trial division: `f` (monic, degree `h`) is irreducible
/// iff no monic polynomial of degree `1..=h/2` divides it.
pub fn is_irreducible(f: &[u64], q: u64) -> bool {
    let h = f.len() - 1;
    if h == 0 {
        return false;
    }
    for deg in 1..=h / 2 {
        for idx in 0..q.pow(deg as u32) {
            let d = monic_from_index(idx, deg, q);
            if poly_rem(f, &d, q).is_empty() {
                return false;
            }
        }
    }
    true
}

/// Smallest monic irreducible polynomial of degree `h` over `F_q`, ordering
/// candidates by their coefficients from `t^(h-1)` down to the constant term.
pub fn find_irreducible(q: u64, h: usize, cap: u64) -> Result<Vec<u64>> {
    PrimeField::new(q)?;
    if h < 2 {
        return Err(parameter("extension degree must be at least 2"));
    }
    let order = field_order(q, h)?;
    if order > cap {
        return Err(Error::Resource {
            what: "extension field order",
            needed: order as u128,
            cap: cap as u128,
        });
    }
    // Candidates in order of sum c_i q^i: the leading lower coefficient
    // c_{h-1} is the most significant.
    for idx in 0..q.pow(h as u32) {
        let f = monic_from_index(idx, h, q);
        if is_irreducible(&f, q) {
            return Ok(f);
        }
    }
    Err(Error::Internal(format!("no irreducible of degree {h} over F_{q}")))
}

fn field_order(q: u64, h: usize) -> Result<u64> {
    u32::try_from(h)
        .ok()
        .and_then(|h| q.checked_pow(h))
        .ok_or_else(|| parameter(format!("{q}^{h} overflows")))
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExtElem {
    pub coeffs: Vec<u64>,
}

/// `F_{q^h}` realized as `F_q[t] / (modulus)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtField {
    q: u64,
    h: usize,
    modulus: Vec<u64>,
}

impl ExtField {
    /// Uses the smallest irreducible modulus.
    pub fn new(q: u64, h: usize, cap: u64) -> Result<Self> {
        let modulus = find_irreducible(q, h, cap)?;
        Ok(ExtField { q, h, modulus })
    }

    pub fn with_modulus(q: u64, modulus: Vec<u64>) -> Result<Self> {
        PrimeField::new(q)?;
        let h = modulus.len().saturating_sub(1);
        if h < 2 || modulus[h] != 1 || modulus.iter().any(|&c| c >= q) {
            return Err(parameter(
                "modulus must be monic of degree >= 2 with reduced coefficients",
            ));
        }
        if !is_irreducible(&modulus, q) {
            return Err(parameter(format!("{modulus:?} is reducible over F_{q}")));
        }
        Ok(ExtField { q, h, modulus })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn degree(&self) -> usize {
        self.h
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn order(&self) -> u64 {
        self.q.pow(self.h as u32)
    }

    pub fn zero(&self) -> ExtElem {
        ExtElem {
            coeffs: vec![0; self.h],
        }
    }

    pub fn one(&self) -> ExtElem {
        self.constant(1)
    }

    pub fn constant(&self, c: u64) -> ExtElem {
        let mut coeffs = vec![0; self.h];
        coeffs[0] = c % self.q;
        ExtElem { coeffs }
    }

    pub fn elem(&self, coeffs: &[u64]) -> Result<ExtElem> {
        if coeffs.len() != self.h || coeffs.iter().any(|&c| c >= self.q) {
            return Err(parameter(format!(
                "{coeffs:?} is not an element of F_{}^{}",
                self.q, self.h
            )));
        }
        Ok(ExtElem {
            coeffs: coeffs.to_vec(),
        })
    }

    /// Element whose coefficients are the base-`q` digits of `index`,
    /// constant term least significant.
    pub fn from_index(&self, index: u64) -> ExtElem {
        let mut coeffs = monic_from_index(index, self.h, self.q);
        coeffs.pop();
        ExtElem { coeffs }
    }

    pub fn elements(&self) -> impl Iterator<Item = ExtElem> + '_ {
        (0..self.order()).map(|i| self.from_index(i))
    }

    fn pad(&self, mut v: Vec<u64>) -> ExtElem {
        v.resize(self.h, 0);
        ExtElem { coeffs: v }
    }

    pub fn add(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        ExtElem {
            coeffs: a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(&x, &y)| (x + y) % self.q)
                .collect(),
        }
    }

    pub fn mul(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        let prod = poly_mul(&a.coeffs, &b.coeffs, self.q);
        self.pad(poly_rem(&prod, &self.modulus, self.q))
    }

    pub fn pow(&self, a: &ExtElem, mut e: u64) -> ExtElem {
        let mut acc = self.one();
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// `x^(1 + q + ... + q^(h-1))`, which lands in the prime subfield.
    pub fn norm(&self, x: &ExtElem) -> Result<u64> {
        let exp = (self.order() - 1) / (self.q - 1);
        let y = self.pow(x, exp);
        if y.coeffs[1..].iter().any(|&c| c != 0) {
            return Err(Error::Internal(format!(
                "norm of {:?} is {:?}, not a constant; modulus {:?} is broken",
                x.coeffs, y.coeffs, self.modulus
            )));
        }
        Ok(y.coeffs[0])
    }

    /// The additive group isomorphism onto `Z_q^h`: the coefficient vector read as coordinates.
    pub fn additive_coords(&self, x: &ExtElem) -> Elem {
        Elem(x.coeffs.clone())
    }

    pub fn additive_group(&self) -> GroupDescriptor {
        GroupDescriptor::Product {
            q: self.q,
            d: self.h as u32,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sieve(n: u64) -> Vec<bool> {
        let mut is = vec![true; n as usize + 1];
        is[0] = false;
        is[1] = false;
        let mut i = 2;
        while i * i <= n as usize {
            if is[i] {
                let mut j = i * i;
                while j <= n as usize {
                    is[j] = false;
                    j += i;
                }
            }
            i += 1;
        }
        is
    }

    #[test]
    fn miller_rabin_matches_sieve() {
        let s = sieve(20_000);
        for n in 0..=20_000u64 {
            assert_eq!(is_prime(n), s[n as usize], "{n}");
        }
        assert!(is_prime(18_446_744_073_709_551_557));
        assert!(!is_prime(3_215_031_751)); // strong pseudoprime to bases 2,3,5,7
    }

    #[test]
    fn ext_mul_examples() {
        let f4 = ExtField::new(2, 2, DEFAULT_FIELD_CAP).unwrap();
        let t = f4.elem(&[0, 1]).unwrap();
        assert_eq!(f4.mul(&t, &t), f4.elem(&[1, 1]).unwrap());
        assert_eq!(f4.mul(&t, &f4.one()), t);

        let f9 = ExtField::new(3, 2, DEFAULT_FIELD_CAP).unwrap();
        let t = f9.elem(&[0, 1]).unwrap();
        assert_eq!(f9.mul(&t, &t), f9.constant(2));
    }

    #[test]
    fn norm_examples() {
        let f4 = ExtField::new(2, 2, DEFAULT_FIELD_CAP).unwrap();
        assert_eq!(f4.norm(&f4.elem(&[0, 1]).unwrap()).unwrap(), 1);
        assert_eq!(f4.norm(&f4.zero()).unwrap(), 0);
        assert_eq!(f4.norm(&f4.one()).unwrap(), 1);
    }

    #[test]
    fn broken_modulus_is_detected() {
        // t^2 + 1 = (t + 1)^2 over F_2; the quotient ring is not a field.
        let broken = ExtField {
            q: 2,
            h: 2,
            modulus: vec![1, 0, 1],
        };
        assert!(broken.elements().any(|x| broken.norm(&x).is_err()));
        assert!(ExtField::with_modulus(2, vec![1, 0, 1]).is_err());
    }

    #[test]
    fn additive_coords_examples() {
        let f9 = ExtField::new(3, 2, DEFAULT_FIELD_CAP).unwrap();
        assert_eq!(f9.additive_coords(&f9.elem(&[1, 2]).unwrap()), Elem(vec![1, 2]));
        assert_eq!(f9.additive_coords(&f9.zero()), Elem(vec![0, 0]));
        let f4 = ExtField::new(2, 2, DEFAULT_FIELD_CAP).unwrap();
        let g = f4.additive_group();
        let t = f4.elem(&[0, 1]).unwrap();
        let t1 = f4.elem(&[1, 1]).unwrap();
        let sum = g.add(&f4.additive_coords(&t), &f4.additive_coords(&t1)).unwrap();
        assert_eq!(sum, f4.additive_coords(&f4.one()));
    }

    #[test]
    fn find_irreducible_examples() {
        assert_eq!(find_irreducible(2, 2, DEFAULT_FIELD_CAP).unwrap(), vec![1, 1, 1]);
        assert_eq!(find_irreducible(3, 2, DEFAULT_FIELD_CAP).unwrap(), vec![1, 0, 1]);
        assert_eq!(find_irreducible(2, 3, DEFAULT_FIELD_CAP).unwrap(), vec![1, 1, 0, 1]);
        assert!(matches!(
            find_irreducible(2, 13, DEFAULT_FIELD_CAP),
            Err(Error::Resource { .. })
        ));
        assert!(find_irreducible(4, 2, DEFAULT_FIELD_CAP).is_err());
    }

    #[test]
    fn find_irreducible_is_smallest_by_root_oracle() {
        // Degree 2 and 3: irreducible iff no root. Scan in the same order.
        for &(q, h) in &[(2u64, 2usize), (3, 2), (5, 2), (2, 3), (3, 3), (5, 3)] {
            let mut expected = None;
            'scan: for idx in 0..q.pow(h as u32) {
                let mut f = vec![0; h + 1];
                let mut rest = idx;
                for c in f[..h].iter_mut() {
                    *c = rest % q;
                    rest /= q;
                }
                f[h] = 1;
                for x in 0..q {
                    let v = f.iter().rev().fold(0, |acc, &c| (acc * x + c) % q);
                    if v == 0 {
                        continue 'scan;
                    }
                }
                expected = Some(f);
                break;
            }
            assert_eq!(find_irreducible(q, h, DEFAULT_FIELD_CAP).unwrap(), expected.unwrap());
        }
    }

    #[test]
    fn quadratic_character_examples() {
        assert_eq!(quadratic_character(5, 2).unwrap(), -1);
        assert_eq!(quadratic_character(7, 1).unwrap(), 1);
        assert_eq!(quadratic_character(5, 0).unwrap(), 0);
        assert!(quadratic_character(2, 1).is_err());
    }

    #[test]
    fn squares_are_residues() {
        for p in (3..=97).filter(|&p| is_prime(p)) {
            for a in 1..p {
                assert_eq!(quadratic_character(p, a * a % p).unwrap(), 1);
            }
            let residues = (1..p).filter(|&a| quadratic_character(p, a).unwrap() == 1).count();
            assert_eq!(residues as u64, (p - 1) / 2);
        }
    }

    #[test]
    fn norm_is_multiplicative_and_onto() {
        for &(q, h) in &[
            (2u64, 2usize),
            (3, 2),
            (2, 3),
            (5, 2),
            (7, 2),
            (2, 4),
            (3, 3),
            (3, 4),
            (2, 6),
        ] {
            let f = ExtField::new(q, h, DEFAULT_FIELD_CAP).unwrap();
            let elems: Vec<_> = f.elements().collect();
            let norms: Vec<u64> = elems.iter().map(|x| f.norm(x).unwrap()).collect();
            if f.order() <= 81 {
                for (a, na) in elems.iter().zip(&norms) {
                    for (b, nb) in elems.iter().zip(&norms) {
                        assert_eq!(f.norm(&f.mul(a, b)).unwrap(), mul_mod(*na, *nb, q));
                    }
                }
            }
            for c in 1..q {
                let fibre = norms.iter().filter(|&&n| n == c).count() as u64;
                assert_eq!(fibre, (f.order() - 1) / (q - 1), "q={q} h={h} c={c}");
            }
        }
    }

    #[test]
    fn additive_coords_is_a_bijective_homomorphism() {
        for &(q, h) in &[(2u64, 3usize), (3, 2), (5, 2), (3, 3)] {
            let f = ExtField::new(q, h, DEFAULT_FIELD_CAP).unwrap();
            let g = f.additive_group();
            let elems: Vec<_> = f.elements().collect();
            let mut images: Vec<_> = elems.iter().map(|x| f.additive_coords(x)).collect();
            for (x, ix) in elems.iter().zip(&images) {
                for (y, iy) in elems.iter().zip(&images) {
                    assert_eq!(f.additive_coords(&f.add(x, y)), g.add(ix, iy).unwrap());
                }
            }
            images.sort();
            images.dedup();
            assert_eq!(images.len() as u64, f.order());
        }
    }
}

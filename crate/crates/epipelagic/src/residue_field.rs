//! Residue fields F_q (q = p or p^2), the quadratic character, exact sums in
//! Z[zeta_p], and the four-element group of normalized Gauss-sum values.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest field size for which addition and multiplication tables are built.
pub const MAX_Q: u32 = 1024;

/// An element of F_q encoded as `a0 + a1 * p`, standing for `a0 + a1 t`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Elt(pub u32);

struct Tables {
    p: u32,
    f: u32,
    q: u32,
    // t^2 + b t + c is the defining polynomial when f = 2
    b: u32,
    c: u32,
    generator: Elt,
    exp: Vec<u32>,
    log: Vec<u32>,
    add: Vec<u16>,
    mul: Vec<u16>,
}

/// The residue field F_q with a fixed generator of F_q^x.
///
/// The generator doubles as the fixed non-square unit `zeta`.
#[derive(Clone)]
pub struct ResidueField {
    t: Arc<Tables>,
}

impl PartialEq for ResidueField {
    fn eq(&self, other: &Self) -> bool {
        self.t.p == other.t.p && self.t.f == other.t.f
    }
}
impl Eq for ResidueField {}

impl fmt::Debug for ResidueField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.t.q)
    }
}

fn is_prime(n: u32) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

fn prime_factors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl ResidueField {
    pub fn new(p: u32, f: u32) -> Result<Self> {
        if p < 3 || !is_prime(p) {
            return Err(Error::InvalidField(format!("p = {p} is not an odd prime")));
        }
        if f != 1 && f != 2 {
            return Err(Error::InvalidField(format!("extension degree {f} not in {{1, 2}}")));
        }
        let q = p.pow(f);
        if q > MAX_Q {
            return Err(Error::InvalidField(format!("q = {q} exceeds {MAX_Q}")));
        }
        let (mut b, mut c) = (0, 0);
        if f == 2 {
            let squares: Vec<bool> = {
                let mut s = vec![false; p as usize];
                for x in 1..p {
                    s[(x * x % p) as usize] = true;
                }
                s
            };
            'search: for bb in 0..p {
                for cc in 0..p {
                    let disc = (bb * bb + 4 * (p - cc)) % p;
                    if disc != 0 && !squares[disc as usize] {
                        b = bb;
                        c = cc;
                        break 'search;
                    }
                }
            }
        }
        let raw_mul = |x: u32, y: u32| -> u32 {
            let (x0, x1) = (x % p, x / p);
            let (y0, y1) = (y % p, y / p);
            let hi = x1 * y1 % p;
            let r0 = (x0 * y0 + (p - c) * hi) % p;
            let r1 = (x0 * y1 + x1 * y0 + (p - b) * hi) % p;
            r0 + r1 * p
        };
        let n = q - 1;
        let factors = prime_factors(n);
        let pow = |mut x: u32, mut e: u32| {
            let mut r = 1;
            while e > 0 {
                if e & 1 == 1 {
                    r = raw_mul(r, x);
                }
                x = raw_mul(x, x);
                e >>= 1;
            }
            r
        };
        let generator = (1..q)
            .find(|&g| factors.iter().all(|&r| pow(g, n / r) != 1))
            .expect("F_q^x is cyclic");
        let mut exp = vec![0u32; n as usize];
        let mut log = vec![0u32; q as usize];
        let mut x = 1;
        for k in 0..n {
            exp[k as usize] = x;
            log[x as usize] = k;
            x = raw_mul(x, generator);
        }
        let qs = q as usize;
        let mut add = vec![0u16; qs * qs];
        let mut mul = vec![0u16; qs * qs];
        for x in 0..q {
            for y in 0..q {
                let s = (x % p + y % p) % p + ((x / p + y / p) % p) * p;
                add[x as usize * qs + y as usize] = s as u16;
                mul[x as usize * qs + y as usize] = raw_mul(x, y) as u16;
            }
        }
        Ok(ResidueField {
            t: Arc::new(Tables { p, f, q, b, c, generator: Elt(generator), exp, log, add, mul }),
        })
    }

    pub fn prime(p: u32) -> Result<Self> {
        Self::new(p, 1)
    }

    pub fn p(&self) -> u32 {
        self.t.p
    }
    pub fn f(&self) -> u32 {
        self.t.f
    }
    pub fn q(&self) -> u32 {
        self.t.q
    }
    /// Coefficients `(b, c)` of the defining polynomial `t^2 + b t + c` (f = 2).
    pub fn modulus(&self) -> (u32, u32) {
        (self.t.b, self.t.c)
    }
    pub fn generator(&self) -> Elt {
        self.t.generator
    }
    /// The fixed non-square unit.
    pub fn zeta(&self) -> Elt {
        self.t.generator
    }

    pub fn zero(&self) -> Elt {
        Elt(0)
    }
    pub fn one(&self) -> Elt {
        Elt(1)
    }
    pub fn from_int(&self, n: i64) -> Elt {
        Elt(n.rem_euclid(self.t.p as i64) as u32)
    }
    pub fn from_parts(&self, a0: u32, a1: u32) -> Elt {
        let p = self.t.p;
        if self.t.f == 1 {
            Elt(a0 % p)
        } else {
            Elt(a0 % p + (a1 % p) * p)
        }
    }
    pub fn parts(&self, x: Elt) -> (u32, u32) {
        (x.0 % self.t.p, x.0 / self.t.p)
    }

    pub fn add(&self, x: Elt, y: Elt) -> Elt {
        Elt(self.t.add[x.0 as usize * self.t.q as usize + y.0 as usize] as u32)
    }
    pub fn neg(&self, x: Elt) -> Elt {
        let p = self.t.p;
        let (a0, a1) = self.parts(x);
        Elt((p - a0) % p + ((p - a1) % p) * p)
    }
    pub fn sub(&self, x: Elt, y: Elt) -> Elt {
        self.add(x, self.neg(y))
    }
    pub fn mul(&self, x: Elt, y: Elt) -> Elt {
        Elt(self.t.mul[x.0 as usize * self.t.q as usize + y.0 as usize] as u32)
    }
    pub fn inv(&self, x: Elt) -> Result<Elt> {
        if x.0 == 0 {
            return Err(Error::Domain("zero has no inverse".into()));
        }
        let n = self.t.q - 1;
        Ok(self.exp((n - self.t.log[x.0 as usize]) % n))
    }
    pub fn div(&self, x: Elt, y: Elt) -> Result<Elt> {
        Ok(self.mul(x, self.inv(y)?))
    }
    pub fn pow(&self, x: Elt, e: i64) -> Result<Elt> {
        if x.0 == 0 {
            return match e {
                0 => Ok(self.one()),
                e if e > 0 => Ok(self.zero()),
                _ => Err(Error::Domain("zero to a negative power".into())),
            };
        }
        let n = (self.t.q - 1) as i64;
        let k = (self.t.log[x.0 as usize] as i64 * e.rem_euclid(n)).rem_euclid(n);
        Ok(self.exp(k as u32))
    }
    /// Discrete logarithm with respect to the generator.
    pub fn log(&self, x: Elt) -> Result<u32> {
        if x.0 == 0 {
            return Err(Error::Domain("log of zero".into()));
        }
        Ok(self.t.log[x.0 as usize])
    }
    pub fn exp(&self, k: u32) -> Elt {
        Elt(self.t.exp[(k % (self.t.q - 1)) as usize])
    }
    pub fn zeta_pow(&self, k: i64) -> Elt {
        let n = (self.t.q - 1) as i64;
        self.exp(k.rem_euclid(n) as u32)
    }

    /// Frobenius `x -> x^p`; the identity when f = 1.
    pub fn conj(&self, x: Elt) -> Elt {
        if self.t.f == 1 || x.0 == 0 {
            x
        } else {
            self.pow(x, self.t.p as i64).unwrap()
        }
    }
    /// Trace to F_p, as an integer in `[0, p)`.
    pub fn trace(&self, x: Elt) -> u32 {
        let p = self.t.p;
        let (a0, a1) = self.parts(x);
        if self.t.f == 1 {
            a0
        } else {
            (2 * a0 + a1 * (p - self.t.b)) % p
        }
    }
    /// Norm to F_p.
    pub fn norm(&self, x: Elt) -> Elt {
        self.mul(x, self.conj(x))
    }

    pub fn elements(&self) -> impl Iterator<Item = Elt> {
        (0..self.t.q).map(Elt)
    }
    pub fn units(&self) -> impl Iterator<Item = Elt> {
        (1..self.t.q).map(Elt)
    }

    pub fn is_square(&self, x: Elt) -> bool {
        x.0 == 0 || self.t.log[x.0 as usize] % 2 == 0
    }

    /// `quad_char(-1)`.
    pub fn chi_m1(&self) -> i8 {
        if (self.t.q - 1) % 4 == 0 {
            1
        } else {
            -1
        }
    }

    /// Parses a unit written as an integer (mod p) or as `zeta^k`.
    pub fn parse_unit(&self, s: &str) -> Result<Elt> {
        let s = s.trim();
        let x = if let Some(k) = s.strip_prefix("zeta^") {
            let k: i64 = k.trim().parse().map_err(|_| Error::Schema(format!("bad exponent in `{s}`")))?;
            self.zeta_pow(k)
        } else if s == "zeta" {
            self.zeta()
        } else {
            let n: i64 = s.parse().map_err(|_| Error::Schema(format!("bad unit `{s}`")))?;
            self.from_int(n)
        };
        if x.0 == 0 {
            return Err(Error::Schema(format!("unit `{s}` vanishes mod p")));
        }
        Ok(x)
    }

    /// Canonical text form of a unit: `zeta^k`.
    pub fn unit_string(&self, x: Elt) -> String {
        match self.log(x) {
            Ok(k) => format!("zeta^{k}"),
            Err(_) => "0".into(),
        }
    }
}

/// The quadratic character of F_q^x.
pub fn quad_char(x: Elt, field: &ResidueField) -> Result<i8> {
    let k = field.log(x)?;
    Ok(if k % 2 == 0 { 1 } else { -1 })
}

/// An element of Z[zeta_p] in the basis `1, zeta_p, ..., zeta_p^(p-2)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CyclotomicInt {
    p: u32,
    coeffs: Vec<i64>,
}

impl CyclotomicInt {
    pub fn zero(p: u32) -> Self {
        CyclotomicInt { p, coeffs: vec![0; (p - 1) as usize] }
    }
    pub fn from_int(p: u32, n: i64) -> Self {
        let mut z = Self::zero(p);
        z.coeffs[0] = n;
        z
    }
    /// `zeta_p^k`.
    pub fn root(p: u32, k: i64) -> Self {
        let mut full = vec![0i64; p as usize];
        full[k.rem_euclid(p as i64) as usize] = 1;
        Self::from_full(p, &full)
    }
    /// Reduces a length-p vector of `zeta_p` powers using `1 + zeta + ... + zeta^(p-1) = 0`.
    pub fn from_full(p: u32, full: &[i64]) -> Self {
        assert_eq!(full.len(), p as usize);
        let top = full[p as usize - 1];
        CyclotomicInt { p, coeffs: full[..p as usize - 1].iter().map(|c| c - top).collect() }
    }
    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
    /// The integer value, when the element lies in Z.
    pub fn as_integer(&self) -> Option<i64> {
        self.coeffs[1..].iter().all(|&c| c == 0).then_some(self.coeffs[0])
    }
    pub fn scale(&self, k: i64) -> Self {
        CyclotomicInt { p: self.p, coeffs: self.coeffs.iter().map(|c| c * k).collect() }
    }
    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::from_int(self.p, 1), |acc, _| &acc * self)
    }
}

impl Add for &CyclotomicInt {
    type Output = CyclotomicInt;
    fn add(self, o: &CyclotomicInt) -> CyclotomicInt {
        assert_eq!(self.p, o.p);
        CyclotomicInt { p: self.p, coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect() }
    }
}
impl Sub for &CyclotomicInt {
    type Output = CyclotomicInt;
    fn sub(self, o: &CyclotomicInt) -> CyclotomicInt {
        self + &(-o)
    }
}
impl Neg for &CyclotomicInt {
    type Output = CyclotomicInt;
    fn neg(self) -> CyclotomicInt {
        self.scale(-1)
    }
}
impl Mul for &CyclotomicInt {
    type Output = CyclotomicInt;
    fn mul(self, o: &CyclotomicInt) -> CyclotomicInt {
        assert_eq!(self.p, o.p);
        let p = self.p as usize;
        let mut full = vec![0i64; p];
        for (i, a) in self.coeffs.iter().enumerate() {
            if *a == 0 {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                full[(i + j) % p] += a * b;
            }
        }
        CyclotomicInt::from_full(self.p, &full)
    }
}
impl Add for CyclotomicInt {
    type Output = CyclotomicInt;
    fn add(self, o: CyclotomicInt) -> CyclotomicInt {
        &self + &o
    }
}
impl Sub for CyclotomicInt {
    type Output = CyclotomicInt;
    fn sub(self, o: CyclotomicInt) -> CyclotomicInt {
        &self - &o
    }
}
impl Mul for CyclotomicInt {
    type Output = CyclotomicInt;
    fn mul(self, o: CyclotomicInt) -> CyclotomicInt {
        &self * &o
    }
}

impl fmt::Display for CyclotomicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != 0)
            .map(|(k, c)| match k {
                0 => format!("{c}"),
                1 => format!("{c}*z"),
                _ => format!("{c}*z^{k}"),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

/// `sign * n_psi^k`, a fourth root of unity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GaussUnit {
    pub sign: i8,
    pub k: u8,
}

impl GaussUnit {
    pub const ONE: GaussUnit = GaussUnit { sign: 1, k: 0 };
    pub const NPSI: GaussUnit = GaussUnit { sign: 1, k: 1 };

    pub fn new(sign: i8, k: u8) -> Self {
        debug_assert!(sign == 1 || sign == -1);
        GaussUnit { sign, k: k % 2 }
    }
    pub fn sign(sign: i8) -> Self {
        GaussUnit::new(sign, 0)
    }
    pub fn mul(self, o: GaussUnit, chi_m1: i8) -> GaussUnit {
        let s = self.k + o.k;
        let carry = if s >= 2 { chi_m1 } else { 1 };
        GaussUnit { sign: self.sign * o.sign * carry, k: s % 2 }
    }
    pub fn times_sign(self, s: i8) -> GaussUnit {
        GaussUnit { sign: self.sign * s, k: self.k }
    }
    pub fn pow(self, e: u32, chi_m1: i8) -> GaussUnit {
        (0..e).fold(GaussUnit::ONE, |acc, _| acc.mul(self, chi_m1))
    }
    pub fn inv(self, chi_m1: i8) -> GaussUnit {
        self.pow(3, chi_m1)
    }
    /// The sign, if the value is `+-1`.
    pub fn as_sign(self) -> Option<i8> {
        (self.k == 0).then_some(self.sign)
    }
}

impl fmt::Display for GaussUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = if self.sign > 0 { "" } else { "-" };
        match self.k {
            0 => write!(f, "{}1", s),
            _ => write!(f, "{}n_psi", s),
        }
    }
}

pub fn gauss_unit_mul(a: GaussUnit, b: GaussUnit, field: &ResidueField) -> GaussUnit {
    a.mul(b, field.chi_m1())
}

/// `psi(x) = zeta_p^Tr(x)` as a cyclotomic integer.
pub fn psi(x: Elt, field: &ResidueField) -> CyclotomicInt {
    CyclotomicInt::root(field.p(), field.trace(x) as i64)
}

/// The raw quadratic Gauss sum `sum_x chi(x) psi(x)` over F_q^x.
pub fn raw_gauss_sum(field: &ResidueField) -> CyclotomicInt {
    let mut full = vec![0i64; field.p() as usize];
    for x in field.units() {
        full[field.trace(x) as usize] += quad_char(x, field).unwrap() as i64;
    }
    CyclotomicInt::from_full(field.p(), &full)
}

/// Matches a raw sum over a `dim`-dimensional space against
/// `+-q^((dim-k)/2) g^k` with `k = dim mod 2`, `g` the raw Gauss sum.
pub fn normalize(raw: &CyclotomicInt, dim: usize, field: &ResidueField) -> Option<GaussUnit> {
    let k = (dim % 2) as u8;
    let scale = (field.q() as i64).pow(((dim - k as usize) / 2) as u32);
    let base = if k == 1 { raw_gauss_sum(field).scale(scale) } else { CyclotomicInt::from_int(field.p(), scale) };
    if *raw == base {
        Some(GaussUnit::new(1, k))
    } else if *raw == -&base {
        Some(GaussUnit::new(-1, k))
    } else {
        None
    }
}

/// Brute-force normalized Gauss sum of the field itself; checks
/// `raw^2 = chi(-1) q` in Z[zeta_p].
pub fn gauss_brute(field: &ResidueField) -> Result<(CyclotomicInt, GaussUnit)> {
    let raw = raw_gauss_sum(field);
    let sq = &raw * &raw;
    let expect = CyclotomicInt::from_int(field.p(), field.chi_m1() as i64 * field.q() as i64);
    if sq != expect {
        return Err(Error::Domain(format!("Gauss sum square {sq} != {expect}")));
    }
    let unit = normalize(&raw, 1, field).expect("raw sum normalizes to itself");
    Ok((raw, unit))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quad_char_small_primes() {
        let f7 = ResidueField::prime(7).unwrap();
        assert_eq!(quad_char(f7.from_int(1), &f7).unwrap(), 1);
        assert_eq!(quad_char(f7.from_int(3), &f7).unwrap(), -1);
        let squares: Vec<i64> = (1..7).map(|x| x * x % 7).collect();
        for x in 1..7 {
            let expect = if squares.contains(&x) { 1 } else { -1 };
            assert_eq!(quad_char(f7.from_int(x), &f7).unwrap(), expect);
        }
        let f5 = ResidueField::prime(5).unwrap();
        assert_eq!(quad_char(f5.from_int(-1), &f5).unwrap(), 1);
        assert!(quad_char(f5.zero(), &f5).is_err());
    }

    #[test]
    fn quad_char_multiplicative_and_balanced() {
        for (p, f) in [(3, 1), (5, 1), (3, 2), (5, 2), (7, 2)] {
            let k = ResidueField::new(p, f).unwrap();
            let mut total = 0i64;
            for x in k.units() {
                total += quad_char(x, &k).unwrap() as i64;
                for y in k.units() {
                    assert_eq!(
                        quad_char(k.mul(x, y), &k).unwrap(),
                        quad_char(x, &k).unwrap() * quad_char(y, &k).unwrap()
                    );
                }
            }
            assert_eq!(total, 0);
        }
    }

    #[test]
    fn quadratic_extension_is_a_field() {
        for p in [3, 5, 7, 11] {
            let k = ResidueField::new(p, 2).unwrap();
            for x in k.units() {
                assert_eq!(k.mul(x, k.inv(x).unwrap()), k.one());
                assert!(k.norm(x).0 < p);
                assert_eq!(k.conj(k.conj(x)), x);
            }
            assert!(!k.is_square(k.zeta()));
        }
        // t^2 + 1 is the first irreducible candidate mod 3
        assert_eq!(ResidueField::new(3, 2).unwrap().modulus(), (0, 1));
        // mod 5, -4c is a non-square first at c = 2
        assert_eq!(ResidueField::new(5, 2).unwrap().modulus(), (0, 2));
    }

    #[test]
    fn gauss_sum_p3() {
        let k = ResidueField::prime(3).unwrap();
        let (raw, unit) = gauss_brute(&k).unwrap();
        // zeta_3 - zeta_3^2 = 1 + 2 zeta_3 after reduction
        assert_eq!(raw, &CyclotomicInt::root(3, 1) - &CyclotomicInt::root(3, 2));
        assert_eq!(raw.coeffs(), &[1, 2]);
        assert_eq!(gauss_unit_mul(unit, unit, &k), GaussUnit::sign(-1));
    }

    #[test]
    fn gauss_sum_square_law() {
        for (p, f) in [(3, 1), (5, 1), (7, 1), (11, 1), (13, 1), (3, 2), (5, 2)] {
            let k = ResidueField::new(p, f).unwrap();
            let (raw, unit) = gauss_brute(&k).unwrap();
            assert_eq!((&raw * &raw).as_integer(), Some(k.chi_m1() as i64 * k.q() as i64));
            assert_eq!(gauss_unit_mul(unit, unit, &k), GaussUnit::sign(k.chi_m1()));
        }
    }

    #[test]
    fn unit_group_law() {
        for chi in [1i8, -1] {
            let all = [
                GaussUnit::new(1, 0),
                GaussUnit::new(-1, 0),
                GaussUnit::new(1, 1),
                GaussUnit::new(-1, 1),
            ];
            for a in all {
                assert_eq!(a.pow(4, chi), GaussUnit::ONE);
                assert_eq!(a.mul(a.inv(chi), chi), GaussUnit::ONE);
                for b in all {
                    assert_eq!(a.mul(b, chi), b.mul(a, chi));
                    for c in all {
                        assert_eq!(a.mul(b, chi).mul(c, chi), a.mul(b.mul(c, chi), chi));
                    }
                }
            }
        }
        assert_eq!(GaussUnit::new(-1, 0).mul(GaussUnit::new(-1, 1), -1), GaussUnit::new(1, 1));
    }

    #[test]
    fn product_of_two_brute_sums_normalizes() {
        for p in [3, 5, 7] {
            let k = ResidueField::prime(p).unwrap();
            for a in k.units() {
                for b in k.units() {
                    let mut fa = vec![0i64; p as usize];
                    let mut fb = vec![0i64; p as usize];
                    for x in k.elements() {
                        fa[k.trace(k.mul(a, k.mul(x, x))) as usize] += 1;
                        fb[k.trace(k.mul(b, k.mul(x, x))) as usize] += 1;
                    }
                    let sa = CyclotomicInt::from_full(p, &fa);
                    let sb = CyclotomicInt::from_full(p, &fb);
                    let ua = normalize(&sa, 1, &k).unwrap();
                    let ub = normalize(&sb, 1, &k).unwrap();
                    assert_eq!(ua, GaussUnit::new(quad_char(a, &k).unwrap(), 1));
                    assert_eq!(normalize(&(&sa * &sb), 2, &k).unwrap(), gauss_unit_mul(ua, ub, &k));
                }
            }
        }
    }

    #[test]
    fn parse_units() {
        let k = ResidueField::prime(7).unwrap();
        assert_eq!(k.parse_unit("zeta^2").unwrap(), k.mul(k.zeta(), k.zeta()));
        assert_eq!(k.parse_unit("-1").unwrap(), k.from_int(6));
        assert!(k.parse_unit("14").is_err());
        assert!(k.parse_unit("x").is_err());
    }
}

//! Quadratic relations in the Hecke algebra of the cover: closed-form
//! coefficients, literal finite sums for the worked examples, and the
//! resulting reducibility points.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::lift::{component_forms, xi_twisted, MuRestriction};
use crate::quad_forms::{build_trace_form, gauss_closed, radical_quotient, QuadFormFq, Slot, TraceFormSpec};
use crate::residue_field::{quad_char, Elt, GaussUnit, ResidueField};
use crate::square_classes::Family;
use crate::strata::{ensure_valid, EpipelagicStratum, GroupSpec};

/// A non-negative half-integer, stored doubled.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Half(pub u32);

impl Half {
    pub const ZERO: Half = Half(0);
    pub const HALF: Half = Half(1);
    pub const ONE: Half = Half(2);
    pub const THREE_HALVES: Half = Half(3);
}

impl fmt::Display for Half {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 % 2 == 0 {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

impl Serialize for Half {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct HeckeCoeffs {
    pub r_y: Half,
    pub r_z: Half,
    pub eps_t_y: GaussUnit,
    /// `None` when `b_z` vanishes for the chosen restriction.
    pub eps_t_z: Option<GaussUnit>,
    /// Exponents of `q` in `c_y`, `c_z`, normalized by
    /// `b = eps c^(1/2) (q^(r/2) - q^(-r/2))` on the residue-level sums.
    pub c_y: Half,
    pub c_z: Half,
    /// Sign of `-1` in the field the Gauss sums live in.
    pub chi_m1: i8,
}

/// `{+-s1, +-s2 + pi i / log q}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ReducibilitySet {
    pub s1: Half,
    pub s2: Half,
}

impl ReducibilitySet {
    pub fn contains_real(&self, s: Half) -> bool {
        self.s1 == s
    }
}

impl fmt::Display for ReducibilitySet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pm = |h: Half| if h == Half::ZERO { "0".to_string() } else { format!("+-{h}") };
        write!(f, "{{{}, {} + pi i/log q}}", pm(self.s1), pm(self.s2))
    }
}

pub fn reducibility_set(r_y: Half, r_z: Half, delta: i8) -> ReducibilitySet {
    let (a, b) = (r_y.0 as i64, r_z.0 as i64);
    let d = delta as i64;
    // doubled |r_y +- r_z| / 2
    let s1 = (a + d * b).abs();
    let s2 = (a - d * b).abs();
    debug_assert!(s1 % 2 == 0, "r_y and r_z differ by a non-integer");
    ReducibilitySet { s1: Half((s1 / 2) as u32), s2: Half((s2 / 2) as u32) }
}

fn hyp_sign(hyp: &MuRestriction, x: Elt, k: &ResidueField) -> Result<i8> {
    hyp.sign_at(x, k)?.ok_or_else(|| Error::Domain("non-self-dual restrictions are not treated".into()))
}

/// Closed-form normalized coefficients for component `i` and a candidate
/// restriction `hyp` of the lift to the residue units.
pub fn closed_coeffs(g: &GroupSpec, s: &EpipelagicStratum, i: usize, hyp: MuRestriction) -> Result<HeckeCoeffs> {
    ensure_valid(g, s)?;
    let s = &xi_twisted(g, s);
    let k = &g.field;
    if hyp.modulus != k.q() as u64 - 1 {
        return Err(Error::Domain(format!("restriction must be modulo {}", k.q() - 1)));
    }
    if s.components.get(i).map_or(true, |c| c.null) {
        return Err(Error::Domain(format!("component {i} is null or missing")));
    }
    match g.family {
        Family::Gl => Err(Error::Unsupported("general linear groups lift to themselves".into())),
        Family::UUnramOdd | Family::UUnramEven => {
            let base = g.base_field();
            let p = k.p() as u64;
            let m = hyp.modulus;
            if (hyp.exponent * (p + 1)) % m != 0 {
                return Err(Error::Domain("non-self-dual restrictions are not treated".into()));
            }
            let t = s.depth_zero.unwrap_or(0);
            let lam_m1: i8 = if t % 2 == 0 { 1 } else { -1 };
            let linked = hyp.exponent % m == (m - (t % m) * (p - 1) % m) % m;
            let (r_y, eps_y) = if linked { (Half::THREE_HALVES, lam_m1) } else { (Half::HALF, -lam_m1) };
            let q = radical_quotient(&build_trace_form(&TraceFormSpec { group: g, stratum: s, i: Slot::Comp(0), j: Slot::Comp(0) })?);
            Ok(HeckeCoeffs {
                r_y,
                r_z: Half::HALF,
                eps_t_y: GaussUnit::sign(eps_y),
                eps_t_z: Some(gauss_closed(&q)?),
                c_y: Half::THREE_HALVES,
                c_z: Half(q.dim() as u32 + 1),
                chi_m1: base.chi_m1(),
            })
        }
        _ => {
            let lam = s.omega(g, i).ok_or_else(|| Error::Domain(format!("no sign for component {i}")))?;
            let eps_y = hyp_sign(&hyp, k.from_int(-2), k)? * lam;
            let forms = component_forms(g, s, i)?;
            let w = forms.iter().fold(QuadFormFq::diagonal(k, &[]), |acc, f| acc.orthogonal_sum(f));
            let dim = w.dim();
            let nonvanishing = hyp == MuRestriction::chi_pow(dim, hyp.modulus);
            Ok(HeckeCoeffs {
                r_y: Half::ONE,
                r_z: if nonvanishing { Half::ONE } else { Half::ZERO },
                eps_t_y: GaussUnit::sign(eps_y),
                eps_t_z: if nonvanishing { Some(gauss_closed(&w)?) } else { None },
                c_y: Half::ONE,
                c_z: Half(2 * dim as u32 + 2),
                chi_m1: k.chi_m1(),
            })
        }
    }
}

/// Picks the sign `delta` from the value of the lift at the uniformizer and
/// returns the reducibility points.
pub fn eigen_product_check(coeffs: &HeckeCoeffs, uniformizer_value: GaussUnit) -> ReducibilitySet {
    match coeffs.eps_t_z {
        None => reducibility_set(coeffs.r_y, Half::ZERO, 1),
        Some(ez) => {
            let prod = coeffs.eps_t_y.mul(ez, coeffs.chi_m1);
            let delta = if prod == uniformizer_value { 1 } else { -1 };
            reducibility_set(coeffs.r_y, coeffs.r_z, delta)
        }
    }
}

/// Integer combinations of `M`-th roots of unity, compared modulo the
/// cyclotomic polynomial.
#[derive(Clone, Debug)]
pub struct RootSum {
    m: usize,
    coeffs: Vec<i64>,
}

fn cyclotomic_poly(m: usize) -> Vec<i64> {
    // x^m - 1 divided by Phi_d for all proper divisors d
    let mut num = vec![0i64; m + 1];
    num[0] = -1;
    num[m] = 1;
    for d in (1..m).filter(|d| m % d == 0) {
        num = poly_div_exact(&num, &cyclotomic_poly(d));
    }
    num
}

fn poly_div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut r = num.to_vec();
    let dn = den.len() - 1;
    let mut q = vec![0i64; r.len() - dn];
    for i in (0..q.len()).rev() {
        let c = r[i + dn];
        q[i] = c;
        for j in 0..=dn {
            r[i + j] -= c * den[j];
        }
    }
    debug_assert!(r.iter().all(|&x| x == 0));
    q
}

impl RootSum {
    pub fn zero(m: usize) -> Self {
        RootSum { m, coeffs: vec![0; m] }
    }
    pub fn int(m: usize, n: i64) -> Self {
        let mut s = Self::zero(m);
        s.coeffs[0] = n;
        s
    }
    /// Adds `c * z^k`.
    pub fn add_root(&mut self, k: i64, c: i64) {
        let i = k.rem_euclid(self.m as i64) as usize;
        self.coeffs[i] += c;
    }
    pub fn scale(&self, c: i64) -> Self {
        RootSum { m: self.m, coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }
    pub fn mul(&self, o: &RootSum) -> RootSum {
        let mut out = Self::zero(self.m);
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.coeffs.iter().enumerate() {
                out.coeffs[(i + j) % self.m] += a * b;
            }
        }
        out
    }
    pub fn add(&self, o: &RootSum) -> RootSum {
        RootSum { m: self.m, coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect() }
    }
    /// Remainder modulo `Phi_m`.
    pub fn reduced(&self) -> Vec<i64> {
        let phi = cyclotomic_poly(self.m);
        let deg = phi.len() - 1;
        let mut r = self.coeffs.clone();
        for i in (deg..r.len()).rev() {
            let c = r[i];
            if c != 0 {
                for j in 0..=deg {
                    r[i - deg + j] -= c * phi[j];
                }
            }
        }
        r.truncate(deg);
        r
    }
    pub fn as_integer(&self) -> Option<i64> {
        let r = self.reduced();
        r[1..].iter().all(|&x| x == 0).then_some(r[0])
    }
}

impl PartialEq for RootSum {
    fn eq(&self, o: &RootSum) -> bool {
        self.m == o.m && self.reduced() == o.reduced()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExampleTag {
    U1Unram,
    U1Ram,
    So2RamY,
    So2RamZ,
    SpIoY,
    SpIoZ,
    SoevenIoY,
    SoevenIoZ,
}

impl ExampleTag {
    pub const ALL: [ExampleTag; 8] = [
        ExampleTag::U1Unram,
        ExampleTag::U1Ram,
        ExampleTag::So2RamY,
        ExampleTag::So2RamZ,
        ExampleTag::SpIoY,
        ExampleTag::SpIoZ,
        ExampleTag::SoevenIoY,
        ExampleTag::SoevenIoZ,
    ];
    pub fn name(self) -> &'static str {
        match self {
            ExampleTag::U1Unram => "u1_unram",
            ExampleTag::U1Ram => "u1_ram",
            ExampleTag::So2RamY => "so2_ram_y",
            ExampleTag::So2RamZ => "so2_ram_z",
            ExampleTag::SpIoY => "sp_io_y",
            ExampleTag::SpIoZ => "sp_io_z",
            ExampleTag::SoevenIoY => "soeven_io_y",
            ExampleTag::SoevenIoZ => "soeven_io_z",
        }
    }
}

impl FromStr for ExampleTag {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        ExampleTag::ALL.into_iter().find(|t| t.name() == s).ok_or_else(|| Error::UnknownTag(s.to_string()))
    }
}

impl fmt::Display for ExampleTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Character data of a worked example.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CharData {
    /// Exponent of `lambda~` on the residue units of the field passed in.
    pub lambda_tilde: u64,
    /// Exponent of `lambda` on the norm-one residue group (order `p + 1`
    /// for `u1_unram`, order 2 otherwise).
    pub lambda: u64,
    pub omega_o: i8,
    /// `a_0, ..., a_n` for the symplectic examples.
    pub units: Vec<Elt>,
    pub u_g: u32,
}

/// The `y`- and `z`-sums of an example; single-sided tags fill one.
#[derive(Clone, Debug, PartialEq)]
pub struct HeckeSum {
    pub b_y: Option<RootSum>,
    pub b_z: Option<RootSum>,
}

struct Ring<'a> {
    k: &'a ResidueField,
    m: usize,
}

impl<'a> Ring<'a> {
    fn new(k: &'a ResidueField) -> Self {
        Ring { k, m: k.p() as usize * (k.q() as usize - 1) }
    }
    /// Exponent of `lambda~(x)` as a power of `z_M`.
    fn lt(&self, s: u64, x: Elt) -> Result<i64> {
        let step = self.m / (self.k.q() as usize - 1);
        Ok((step as u64 * s * self.k.log(x)? as u64 % self.m as u64) as i64)
    }
    /// Exponent of `psi(x)`, the trace to the prime field.
    fn psi(&self, x: Elt) -> i64 {
        let step = self.m / self.k.p() as usize;
        (step as u32 * self.k.trace(x)) as i64
    }
    fn sign(&self, e: u64) -> i64 {
        if e % 2 == 0 {
            1
        } else {
            -1
        }
    }
}

/// Evaluates the displayed finite sum of a worked example.
pub fn brute_b_sum(tag: ExampleTag, k: &ResidueField, data: &CharData) -> Result<HeckeSum> {
    if k.p() > 7 {
        return Err(Error::OverBudget("worked examples are evaluated for p <= 7".into()));
    }
    let need_f = if tag == ExampleTag::U1Unram { 2 } else { 1 };
    if k.f() != need_f {
        return Err(Error::InvalidField(format!("{tag} needs a residue field of degree {need_f}")));
    }
    let r = Ring::new(k);
    let s = data.lambda_tilde;
    let lam_m1 = r.sign(data.lambda);
    let mut y = RootSum::zero(r.m);
    let mut z = RootSum::zero(r.m);
    let half = k.inv(k.from_int(2))?;
    match tag {
        ExampleTag::U1Unram => {
            let p = k.p() as u64;
            let lam_step = r.m / (p as usize + 1);
            for x in k.elements() {
                let nx = k.norm(x);
                for yy in k.units() {
                    if k.add(yy, k.conj(yy)) != k.neg(nx) {
                        continue;
                    }
                    // 1 + conj(X) X / Y lies in the norm-one group
                    let w = k.add(k.one(), k.div(nx, yy)?);
                    let j = k.log(w)? as u64 / (p - 1);
                    let e = r.lt(s, yy)? + (lam_step as u64 * data.lambda * j % r.m as u64) as i64;
                    y.add_root(e, 1);
                }
            }
            for yy in k.units() {
                if k.add(yy, k.conj(yy)).0 == 0 {
                    z.add_root(r.lt(s, yy)?, 1);
                }
            }
        }
        ExampleTag::U1Ram => {
            // 2Y = -X^2 and 1 + X^2/Y = -1 on residues
            for x in k.units() {
                let yy = k.mul(k.neg(k.mul(x, x)), half);
                y.add_root(r.lt(s, yy)?, lam_m1);
            }
            // Y = varpi^-1 Y_0 with conj(varpi) = -varpi: no condition on Y_0
            for y0 in k.units() {
                z.add_root(r.lt(s, y0)?, 1);
            }
        }
        ExampleTag::So2RamY | ExampleTag::SoevenIoY => {
            // -b^2 = 2Y, and the element p squared is the identity
            for b in k.units() {
                let yy = k.mul(k.neg(k.mul(b, b)), half);
                y.add_root(r.lt(s, yy)?, 1);
            }
        }
        ExampleTag::So2RamZ => {
            // a^2 = 2Y, value lambda~(-1) lambda(-1)
            let lt_m1 = r.lt(s, k.from_int(-1))?;
            for a in k.units() {
                let yy = k.mul(k.mul(a, a), half);
                z.add_root(r.lt(s, yy)? + lt_m1, lam_m1);
            }
        }
        ExampleTag::SoevenIoZ => {
            // 2Y = -zeta^(-u) x^2, value lambda(omega_o)
            let c = k.mul(k.neg(k.zeta_pow(-(data.u_g as i64))), half);
            for x in k.units() {
                let yy = k.mul(c, k.mul(x, x));
                z.add_root(r.lt(s, yy)?, data.omega_o as i64);
            }
        }
        ExampleTag::SpIoY => {
            let n = data.units.len().checked_sub(1).ok_or_else(|| Error::Schema("units a_0..a_n required".into()))?;
            let an = data.units[n];
            let c = k.mul(k.from_int(r.sign(n as u64)), an);
            for yy in k.units() {
                let yi = k.inv(yy)?;
                for x in k.elements() {
                    y.add_root(r.lt(s, yy)? + r.psi(k.mul(c, k.mul(k.mul(x, x), yi))), 1);
                }
            }
        }
        ExampleTag::SpIoZ => {
            let n = data.units.len().checked_sub(1).ok_or_else(|| Error::Schema("units a_0..a_n required".into()))?;
            if n == 0 {
                return Err(Error::Schema("n >= 1".into()));
            }
            // a_0 x_1^2 + 2 sum_{k<n} (-1)^k a_k x_{k+1} x_{2n+1-k}, on 2n-1 variables
            let u = &data.units;
            let dim = 2 * n - 1;
            let mut gram = vec![vec![k.zero(); dim]; dim];
            gram[0][0] = u[0];
            for j in 1..n {
                // x_{j+1} is coordinate j, x_{2n+1-j} is coordinate 2n-1-j (x_{n+1} skipped)
                let (a, b) = (j, 2 * n - 1 - j);
                let c = k.mul(k.from_int(r.sign(j as u64)), u[j]);
                gram[a][b] = c;
                gram[b][a] = c;
            }
            let form = QuadFormFq::new(k, gram)?;
            let points = (k.q() as u64).pow(dim as u32);
            if points > 5_000_000 {
                return Err(Error::OverBudget(format!("{points} points")));
            }
            for yy in k.units() {
                let yi = k.inv(yy)?;
                let lt = r.lt(s, yy)?;
                let mut x = vec![k.zero(); dim];
                for idx in 0..points {
                    let mut t = idx;
                    for c in x.iter_mut() {
                        *c = Elt((t % k.q() as u64) as u32);
                        t /= k.q() as u64;
                    }
                    z.add_root(lt + r.psi(k.mul(form.value(&x), yi)), 1);
                }
            }
        }
    }
    let has_y = !matches!(tag, ExampleTag::So2RamZ | ExampleTag::SoevenIoZ | ExampleTag::SpIoZ);
    let has_z = !matches!(tag, ExampleTag::So2RamY | ExampleTag::SoevenIoY | ExampleTag::SpIoY);
    Ok(HeckeSum { b_y: has_y.then_some(y), b_z: has_z.then_some(z) })
}

/// The closed values of the worked examples, for self-dual `lambda~`.
pub fn closed_b_sum(tag: ExampleTag, k: &ResidueField, data: &CharData) -> Result<HeckeSum> {
    let r = Ring::new(k);
    let s = data.lambda_tilde;
    let q = k.q() as i64;
    let p = k.p() as i64;
    let lam_m1 = r.sign(data.lambda);
    let lt = |x: Elt| -> Result<i64> {
        MuRestriction { exponent: s, modulus: q as u64 - 1 }
            .sign_at(x, k)?
            .map(|v| v as i64)
            .ok_or_else(|| Error::Domain("lambda~ is not self-dual on this element".into()))
    };
    let int = |n: i64| RootSum::int(r.m, n);
    let gauss = || {
        let mut g = RootSum::zero(r.m);
        for x in k.units() {
            g.add_root(r.psi(x), quad_char(x, k).unwrap() as i64);
        }
        g
    };
    let quad = MuRestriction::chi_pow(1, q as u64 - 1).exponent == s % (q as u64 - 1);
    let m2 = k.from_int(-2);
    let (b_y, b_z) = match tag {
        ExampleTag::U1Unram => {
            let pp = p as u64;
            let m = q as u64 - 1;
            if (s * (pp + 1)) % m != 0 {
                return Err(Error::Domain("lambda~ is not self-dual".into()));
            }
            let linked = s % m == (m - (data.lambda % (pp + 1)) * (pp - 1) % m) % m;
            // lambda~ at a square root of a non-square of F_p; equals
            // lambda(-1) in the linked case
            let eta = lt(k.exp(((p + 1) / 2) as u32))?;
            let by = if linked { lam_m1 * (p * p * p - 1) } else { -eta * p * (p - 1) };
            (Some(int(by)), Some(int(eta * (p - 1))))
        }
        ExampleTag::U1Ram => {
            let bz = if s % (q as u64 - 1) == 0 { q - 1 } else if quad { 0 } else { return Err(Error::Domain("lambda~ is not self-dual".into())) };
            (Some(int(lt(m2)? * lam_m1 * (q - 1))), Some(int(bz)))
        }
        ExampleTag::So2RamY | ExampleTag::SoevenIoY => (Some(int(lt(m2)? * (q - 1))), None),
        ExampleTag::So2RamZ => (None, Some(int(lt(m2)? * lam_m1 * (q - 1)))),
        ExampleTag::SoevenIoZ => {
            let lz = if data.u_g % 2 == 1 { lt(k.zeta())? } else { 1 };
            (None, Some(int(lz * lt(m2)? * data.omega_o as i64 * (q - 1))))
        }
        ExampleTag::SpIoY => {
            let n = data.units.len() - 1;
            let v = if quad {
                gauss().scale(quad_char(k.mul(k.from_int(r.sign(n as u64)), data.units[n]), k)? as i64 * (q - 1))
            } else {
                int(0)
            };
            (Some(v), None)
        }
        ExampleTag::SpIoZ => {
            let n = data.units.len() - 1;
            // a / a_n is a_0 times squares
            let v = if quad {
                gauss().scale(quad_char(data.units[0], k)? as i64 * (q - 1) * q.pow(n as u32 - 1))
            } else {
                int(0)
            };
            (None, Some(v))
        }
    };
    Ok(HeckeSum { b_y, b_z })
}

/// Recovers `(eps, r)` from `b = eps c^(1/2) (q^(r/2) - q^(-r/2))` for an
/// integer value `b`, with `c = p^c_exp` and `q = p^f`.
pub fn normalize_integer_b(b: i64, p: i64, c_exp: u32, f: u32) -> Option<(i8, Half)> {
    let eps: i8 = if b >= 0 { 1 } else { -1 };
    let b = b.abs();
    // b = p^x - p^(c_exp - x) with 2x >= c_exp; x may be a half-integer only
    // when c_exp is odd, and then b is not an integer, so x is integral here
    for x in 0..=c_exp {
        let y = c_exp as i64 - x as i64;
        if (x as i64) < y {
            continue;
        }
        if p.pow(x) - p.pow(y as u32) == b {
            let diff = (x as i64 - y) as u32;
            // r = diff / f, doubled
            if (2 * diff) % f == 0 {
                return Some((eps, Half(2 * diff / f)));
            }
        }
    }
    None
}

/// Reducibility points of the rank-one unitary examples, from their literal
/// sums and the value of `lambda~` at the uniformizer.
pub fn example_red_set(tag: ExampleTag, k: &ResidueField, data: &CharData, at_uniformizer: i8) -> Result<ReducibilitySet> {
    let (cy, cz, f) = match tag {
        ExampleTag::U1Unram => (3, 1, 2),
        ExampleTag::U1Ram => (1, 1, 1),
        _ => return Err(Error::Unsupported(format!("{tag} is not a rank-one unitary example"))),
    };
    let sums = brute_b_sum(tag, k, data)?;
    let p = k.p() as i64;
    let as_int = |b: &Option<RootSum>| -> Result<i64> {
        b.as_ref().and_then(|b| b.as_integer()).ok_or_else(|| Error::Domain("sum is not an integer".into()))
    };
    let bad = || Error::Domain("sum is not of the form eps c^(1/2) (q^(r/2) - q^(-r/2))".into());
    let (ey, ry) = normalize_integer_b(as_int(&sums.b_y)?, p, cy, f).ok_or_else(bad)?;
    let bz = as_int(&sums.b_z)?;
    let (ez, rz) = if bz == 0 { (None, Half::ZERO) } else {
        let (e, r) = normalize_integer_b(bz, p, cz, f).ok_or_else(bad)?;
        (Some(GaussUnit::sign(e)), r)
    };
    let coeffs = HeckeCoeffs {
        r_y: ry,
        r_z: rz,
        eps_t_y: GaussUnit::sign(ey),
        eps_t_z: ez,
        c_y: Half(cy * 2 / f),
        c_z: Half(cz * 2 / f),
        chi_m1: 1,
    };
    Ok(eigen_product_check(&coeffs, GaussUnit::sign(at_uniformizer)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lift::{cuspidal_support, lift_character};
    use crate::strata::{SimpleSupercuspidalDatum, reduce_to_stratum};

    #[test]
    fn reducibility_examples() {
        assert_eq!(reducibility_set(Half::THREE_HALVES, Half::HALF, 1), ReducibilitySet { s1: Half::ONE, s2: Half::HALF });
        assert_eq!(reducibility_set(Half::ONE, Half::ONE, 1), ReducibilitySet { s1: Half::ONE, s2: Half::ZERO });
        assert_eq!(reducibility_set(Half::ONE, Half::ZERO, -1), ReducibilitySet { s1: Half::HALF, s2: Half::HALF });
        assert_eq!(reducibility_set(Half::ZERO, Half::ZERO, 1), ReducibilitySet { s1: Half::ZERO, s2: Half::ZERO });
        let a = reducibility_set(Half::THREE_HALVES, Half::HALF, 1);
        let b = reducibility_set(Half::THREE_HALVES, Half::HALF, -1);
        assert_eq!((a.s1, a.s2), (b.s2, b.s1));
    }

    #[test]
    fn cyclotomic_polys() {
        assert_eq!(cyclotomic_poly(1), vec![-1, 1]);
        assert_eq!(cyclotomic_poly(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_poly(6), vec![1, -1, 1]);
        let mut s = RootSum::zero(12);
        for k in 0..12 {
            s.add_root(k, 1);
        }
        assert_eq!(s.as_integer(), Some(0));
        let mut i = RootSum::zero(12);
        i.add_root(3, 1);
        assert_eq!(i.mul(&i).as_integer(), Some(-1));
    }

    #[test]
    fn worked_examples_match() {
        for p in [3, 5, 7] {
            let k = ResidueField::prime(p).unwrap();
            let q = p as u64 - 1;
            for tag in ExampleTag::ALL.into_iter().filter(|t| *t != ExampleTag::U1Unram) {
                for s in [0, q / 2] {
                    for lambda in [0, 1] {
                        for omega_o in [1, -1] {
                            for u_g in [0, 1] {
                                let units = vec![k.from_int(2), k.one(), k.zeta()];
                                let d = CharData { lambda_tilde: s, lambda, omega_o, units, u_g };
                                let b = brute_b_sum(tag, &k, &d).unwrap();
                                let c = closed_b_sum(tag, &k, &d).unwrap();
                                assert_eq!(b, c, "{tag} p={p} s={s}");
                            }
                        }
                    }
                }
            }
            let k2 = ResidueField::new(p, 2).unwrap();
            let m = (p * p - 1) as u64;
            for t in 0..=p as u64 {
                for j in 0..=p as u64 {
                    let d = CharData { lambda_tilde: j * (p as u64 - 1) % m, lambda: t, ..Default::default() };
                    let b = brute_b_sum(ExampleTag::U1Unram, &k2, &d).unwrap();
                    let c = closed_b_sum(ExampleTag::U1Unram, &k2, &d).unwrap();
                    assert_eq!(b, c, "u1 p={p} t={t} j={j}");
                }
            }
        }
    }

    #[test]
    fn first_general_form_contains_one() {
        let k = ResidueField::prime(7).unwrap();
        let d = SimpleSupercuspidalDatum {
            family: Family::Sp,
            n: 4,
            field: k.clone(),
            units: vec![k.one(), k.from_int(3), k.from_int(2)],
            signs: vec![-1],
            depth_zero: None,
            xi: None,
        };
        let (g, s) = reduce_to_stratum(&d).unwrap();
        let ch = &lift_character(&g, &s, Slot::Comp(0)).unwrap()[0];
        let c = closed_coeffs(&g, &s, 0, ch.mu).unwrap();
        assert!(eigen_product_check(&c, ch.value).contains_real(Half::ONE));
        let other = MuRestriction::trivial(6);
        assert_eq!(closed_coeffs(&g, &s, 0, other).unwrap().eps_t_z, None);
        assert_eq!(cuspidal_support(&g, &s).unwrap().total_rank, 5);
    }
    #[test]
    fn rank_one_unitary_red_sets() {
        let set = |a: u32, b: u32| ReducibilitySet { s1: Half(a), s2: Half(b) };
        for p in [3u32, 5, 7] {
            let k2 = ResidueField::new(p, 2).unwrap();
            let m = (p * p - 1) as u64;
            let p64 = p as u64;
            for t in 0..=p64 {
                // linked: lambda~ = lambda o (1 - c) on the units
                let linked = CharData { lambda_tilde: (m - t * (p64 - 1) % m) % m, lambda: t, ..Default::default() };
                assert_eq!(example_red_set(ExampleTag::U1Unram, &k2, &linked, 1).unwrap(), set(2, 1));
                assert_eq!(example_red_set(ExampleTag::U1Unram, &k2, &linked, -1).unwrap(), set(1, 2));
                for j in 0..=p64 {
                    let d = CharData { lambda_tilde: j * (p64 - 1) % m, lambda: t, ..Default::default() };
                    if d.lambda_tilde == linked.lambda_tilde {
                        continue;
                    }
                    assert_eq!(example_red_set(ExampleTag::U1Unram, &k2, &d, 1).unwrap(), set(0, 1), "p={p} t={t} j={j}");
                }
            }
            let k = ResidueField::prime(p).unwrap();
            for lambda in [0, 1] {
                let lam_m1: i8 = if lambda == 0 { 1 } else { -1 };
                let triv = CharData { lambda_tilde: 0, lambda, ..Default::default() };
                assert_eq!(example_red_set(ExampleTag::U1Ram, &k, &triv, lam_m1).unwrap(), set(2, 0));
                assert_eq!(example_red_set(ExampleTag::U1Ram, &k, &triv, -lam_m1).unwrap(), set(0, 2));
                let quad = CharData { lambda_tilde: (p64 - 1) / 2, lambda, ..Default::default() };
                for v in [1, -1] {
                    assert_eq!(example_red_set(ExampleTag::U1Ram, &k, &quad, v).unwrap(), set(1, 1));
                }
            }
        }
    }
}

//! Endoscopic lifts to general linear groups: tame characters built from the
//! trace-form Gauss sums, and the formulas for simple supercuspidals used as
//! an independent check.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::quad_forms::{build_trace_form, gauss_closed, radical_quotient, QuadFormFq, Slot, TraceFormSpec};
use crate::residue_field::{quad_char, Elt, GaussUnit, ResidueField};
use crate::square_classes::Family;
use crate::strata::{ensure_valid, needs_xi, t_unit, EpipelagicStratum, GroupSpec, SimpleSupercuspidalDatum};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MuTag {
    Trivial,
    Quadratic,
    General,
}

/// A character of the residue units: `x -> z^(exponent * log x)` with `z` a
/// primitive `modulus`-th root of unity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct MuRestriction {
    pub exponent: u64,
    pub modulus: u64,
}

impl MuRestriction {
    pub fn trivial(modulus: u64) -> Self {
        MuRestriction { exponent: 0, modulus }
    }
    /// The quadratic character raised to `k`.
    pub fn chi_pow(k: usize, modulus: u64) -> Self {
        MuRestriction { exponent: (k as u64 % 2) * (modulus / 2), modulus }
    }
    pub fn tag(&self) -> MuTag {
        if self.exponent % self.modulus == 0 {
            MuTag::Trivial
        } else if (2 * self.exponent) % self.modulus == 0 {
            MuTag::Quadratic
        } else {
            MuTag::General
        }
    }
    /// Exponent of the value at `x`, as a power of the primitive root.
    pub fn value_at(&self, x: Elt, field: &ResidueField) -> Result<u64> {
        Ok(self.exponent * field.log(x)? as u64 % self.modulus)
    }
    /// The value at `x` if it is a sign.
    pub fn sign_at(&self, x: Elt, field: &ResidueField) -> Result<Option<i8>> {
        let v = self.value_at(x, field)?;
        Ok(if v == 0 {
            Some(1)
        } else if 2 * v == self.modulus {
            Some(-1)
        } else {
            None
        })
    }
    pub fn at_minus_one(&self) -> i8 {
        if self.exponent % 2 == 0 {
            1
        } else {
            -1
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LiftCharacter {
    pub gl_rank: usize,
    /// Leading unit of the twisted stratum `2 beta_i`; absent for the
    /// tamely ramified characters of `F^x`.
    pub param: Option<Elt>,
    pub mu: MuRestriction,
    pub value: GaussUnit,
}

impl LiftCharacter {
    /// `value^2 = mu(-1)` for characters of a ramified extension. The
    /// rank-one completions of orthogonal and symplectic lifts are characters
    /// of F^x, self-dual iff quadratic, so there `value^2 = 1`.
    pub fn is_self_dual(&self, g: &GroupSpec) -> bool {
        let of_base = self.param.is_none() && !g.family.is_unitary();
        let want = if of_base { 1 } else { self.mu.at_minus_one() };
        self.value.pow(2, g.base_field().chi_m1()).as_sign() == Some(want)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CuspidalSupport {
    pub entries: Vec<LiftCharacter>,
    pub total_rank: usize,
}

impl CuspidalSupport {
    fn new(entries: Vec<LiftCharacter>) -> Self {
        let total_rank = entries.iter().map(|e| e.gl_rank).sum();
        CuspidalSupport { entries, total_rank }
    }
}

struct Raw {
    slot: Slot,
    /// Component whose sign `lambda(omega)` multiplies the value.
    sign_of: Option<usize>,
    ch: LiftCharacter,
}

fn sign_elt(k: &ResidueField, e: usize) -> Elt {
    k.from_int(if e % 2 == 0 { 1 } else { -1 })
}

fn two_pow(k: &ResidueField, e: i64) -> Elt {
    k.pow(k.from_int(2), e).expect("2 is a unit")
}

fn chi(k: &ResidueField, x: Elt) -> Result<i8> {
    quad_char(x, k)
}

fn direct_sum(k: &ResidueField, forms: &[QuadFormFq]) -> QuadFormFq {
    forms.iter().fold(QuadFormFq::diagonal(k, &[]), |acc, f| acc.orthogonal_sum(f))
}

/// `mu(-2) n(u q)` with `mu = chi^(dim q)`.
fn twisted_gauss(k: &ResidueField, q: &QuadFormFq, u: Elt) -> Result<(MuRestriction, GaussUnit)> {
    let dim = q.dim();
    let n = gauss_closed(&q.scale(u))?;
    let m2 = if dim % 2 == 1 { chi(k, k.from_int(-2))? } else { 1 };
    Ok((MuRestriction::chi_pow(dim, k.q() as u64 - 1), n.times_sign(m2)))
}

/// The forms `q_ii` (radical removed), `q_io` and `q_ij` attached to a
/// non-null component.
pub fn component_forms(g: &GroupSpec, s: &EpipelagicStratum, i: usize) -> Result<Vec<QuadFormFq>> {
    let spec = |a: Slot, b: Slot| TraceFormSpec { group: g, stratum: s, i: a, j: b };
    let mut out = vec![radical_quotient(&build_trace_form(&spec(Slot::Comp(i), Slot::Comp(i)))?)];
    if s.null_index().is_some() {
        out.push(build_trace_form(&spec(Slot::Comp(i), Slot::O))?);
    }
    for j in s.nonnull() {
        if j != i {
            out.push(build_trace_form(&spec(Slot::Comp(i), Slot::Comp(j)))?);
        }
    }
    Ok(out)
}

/// The stratum whose lift is attached to `xi = -1`: the last leading unit
/// is negated.
pub(crate) fn xi_twisted(g: &GroupSpec, s: &EpipelagicStratum) -> EpipelagicStratum {
    let mut t = s.clone();
    if needs_xi(g, s) && s.xi == Some(-1) {
        if let Some(&last) = s.nonnull().last() {
            let c = &mut t.components[last];
            c.unit = c.unit.map(|x| g.field.neg(x));
        }
    }
    t
}

fn raw_entries(g: &GroupSpec, s: &EpipelagicStratum, u: Elt) -> Result<Vec<Raw>> {
    let k = &g.field;
    let modulus = k.q() as u64 - 1;
    let mut out = Vec::new();
    match g.family {
        Family::Gl => {
            let n = g.n;
            let phi = s.depth_zero.ok_or_else(|| Error::Schema("depth-zero exponent required".into()))?;
            let xi = s.xi.ok_or_else(|| Error::Schema("xi required".into()))?;
            out.push(Raw {
                slot: Slot::Comp(0),
                sign_of: None,
                ch: LiftCharacter {
                    gl_rank: n,
                    param: Some(k.mul(two_pow(k, n as i64), s.unit(0)?)),
                    mu: MuRestriction { exponent: phi % modulus, modulus },
                    value: GaussUnit::sign(xi),
                },
            });
        }
        Family::UUnramOdd | Family::UUnramEven => {
            let base = g.base_field();
            let t = s.depth_zero.ok_or_else(|| Error::Schema("depth-zero exponent required".into()))?;
            let spec = TraceFormSpec { group: g, stratum: s, i: Slot::Comp(0), j: Slot::Comp(0) };
            let q = radical_quotient(&build_trace_form(&spec)?).scale(u);
            let lam_m1 = if t % 2 == 0 { 1 } else { -1 };
            let value = gauss_closed(&q)?.times_sign(lam_m1);
            let p = k.p() as u64;
            let exponent = (modulus - (t % modulus) * (p - 1) % modulus) % modulus;
            debug_assert_eq!(base.p(), k.p());
            out.push(Raw {
                slot: Slot::Comp(0),
                sign_of: None,
                ch: LiftCharacter {
                    gl_rank: g.n,
                    param: Some(k.mul(two_pow(k, g.n as i64), s.unit(0)?)),
                    mu: MuRestriction { exponent, modulus },
                    value,
                },
            });
        }
        _ => {
            let nonnull = s.nonnull();
            for &i in &nonnull {
                let forms = component_forms(g, s, i)?;
                let (mu, value) = twisted_gauss(k, &direct_sum(k, &forms), u)?;
                let d = s.components[i].degree;
                out.push(Raw {
                    slot: Slot::Comp(i),
                    sign_of: Some(i),
                    ch: LiftCharacter { gl_rank: d, param: Some(k.mul(two_pow(k, d as i64), s.unit(i)?)), mu, value },
                });
            }
            let m = nonnull.len();
            let one_dim = |mu: MuRestriction, value: GaussUnit| LiftCharacter { gl_rank: 1, param: None, mu, value };
            match (g.family, s.null_index()) {
                (Family::Sp, _) => {
                    let mut v = 1;
                    for &i in &nonnull {
                        let e = s.components[i].degree / 2;
                        v *= chi(k, k.mul(u, k.mul(sign_elt(k, e), s.unit(i)?)))?;
                    }
                    out.push(Raw {
                        slot: Slot::O,
                        sign_of: None,
                        ch: one_dim(MuRestriction::chi_pow(m, modulus), GaussUnit::sign(v)),
                    });
                }
                (Family::SoEvenSplit | Family::SoEvenUnram | Family::SoEvenRam, Some(o)) => {
                    let mut so = nonnull.iter().try_fold(k.one(), |acc, &j| -> Result<Elt> {
                        Ok(k.mul(acc, t_unit(k, s.components[j].degree, s.unit(j)?)))
                    })?;
                    if g.family == Family::SoEvenUnram {
                        so = k.mul(so, k.zeta());
                    }
                    let v = chi(k, u)? * chi(k, k.mul(sign_elt(k, m), so))?;
                    out.push(Raw { slot: Slot::O, sign_of: Some(o), ch: one_dim(MuRestriction::trivial(modulus), GaussUnit::ONE) });
                    out.push(Raw {
                        slot: Slot::O,
                        sign_of: Some(o),
                        ch: one_dim(MuRestriction::chi_pow(1, modulus), GaussUnit::sign(v)),
                    });
                }
                (Family::URamOdd | Family::URamEven, Some(o)) => {
                    let forms = nonnull
                        .iter()
                        .map(|&j| build_trace_form(&TraceFormSpec { group: g, stratum: s, i: Slot::O, j: Slot::Comp(j) }))
                        .collect::<Result<Vec<_>>>()?;
                    let (mu, value) = twisted_gauss(k, &direct_sum(k, &forms), u)?;
                    out.push(Raw { slot: Slot::O, sign_of: Some(o), ch: one_dim(mu, value) });
                }
                _ => {}
            }
        }
    }
    Ok(out)
}

fn signed(g: &GroupSpec, s: &EpipelagicStratum, raw: Vec<Raw>) -> Result<Vec<(Slot, LiftCharacter)>> {
    raw.into_iter()
        .map(|r| {
            let mut ch = r.ch;
            if let Some(i) = r.sign_of {
                let sg = s.omega(g, i).ok_or_else(|| Error::Domain(format!("no sign for component {i}")))?;
                ch.value = ch.value.times_sign(sg);
            }
            Ok((r.slot, ch))
        })
        .collect()
}

fn check_scale(g: &GroupSpec, u: Elt) -> Result<()> {
    let base = g.base_field();
    if u.0 == 0 || u.0 >= base.q() {
        return Err(Error::Domain("uniformizer scale must be a unit of the base residue field".into()));
    }
    if g.family == Family::Gl && u != base.one() {
        return Err(Error::Unsupported("general linear data are lifted identically".into()));
    }
    Ok(())
}

/// The lift with every uniformizer `varpi_i` replaced by `u varpi_i`.
pub fn cuspidal_support_at(g: &GroupSpec, s: &EpipelagicStratum, u: Elt) -> Result<CuspidalSupport> {
    ensure_valid(g, s)?;
    check_scale(g, u)?;
    let t = xi_twisted(g, s);
    let entries = signed(g, &t, raw_entries(g, &t, u)?)?;
    let out = CuspidalSupport::new(entries.into_iter().map(|(_, c)| c).collect());
    assert_eq!(out.total_rank, g.dual_rank(), "rank law");
    Ok(out)
}

pub fn cuspidal_support(g: &GroupSpec, s: &EpipelagicStratum) -> Result<CuspidalSupport> {
    cuspidal_support_at(g, s, g.base_field().one())
}

/// The characters attached to one slot: a component, or the completions
/// attached to `o`.
pub fn lift_character(g: &GroupSpec, s: &EpipelagicStratum, slot: Slot) -> Result<Vec<LiftCharacter>> {
    ensure_valid(g, s)?;
    let t = xi_twisted(g, s);
    if let Slot::Comp(i) = slot {
        if t.components.get(i).map_or(true, |c| c.null) {
            return Err(Error::Domain(format!("component {i} is null or missing")));
        }
    }
    let out: Vec<LiftCharacter> =
        signed(g, &t, raw_entries(g, &t, g.base_field().one())?)?.into_iter().filter(|(sl, _)| *sl == slot).map(|(_, c)| c).collect();
    if out.is_empty() {
        return Err(Error::Domain(format!("no character is attached to o for {}", g.family)));
    }
    Ok(out)
}

/// The normalization dividing `lambda(omega_i)` times `kappa_i` out of the
/// value of component `i`.
fn kappa_base(g: &GroupSpec, s: &EpipelagicStratum) -> Result<GaussUnit> {
    let chi_m1 = g.field.chi_m1();
    Ok(match g.family {
        Family::SoOdd => GaussUnit::ONE,
        Family::Sp => GaussUnit::NPSI.times_sign(chi_m1),
        Family::SoEvenSplit | Family::SoEvenUnram | Family::SoEvenRam => GaussUnit::NPSI,
        Family::URamOdd | Family::URamEven => GaussUnit::NPSI.pow((g.n - 1) as u32, chi_m1),
        Family::UUnramOdd | Family::UUnramEven => {
            let t = s.depth_zero.unwrap_or(0);
            GaussUnit::sign(if (g.n - 1 + t as usize) % 2 == 0 { 1 } else { -1 })
        }
        Family::Gl => return Err(Error::Unsupported("no kappa for general linear groups".into())),
    })
}

/// `kappa_i`: the sign relating the value of the lift at `varpi_i` to
/// `lambda(omega_i)` and the family's base Gauss sum.
pub fn kappa(g: &GroupSpec, s: &EpipelagicStratum, i: usize) -> Result<i8> {
    ensure_valid(g, s)?;
    if s.components.get(i).map_or(true, |c| c.null) {
        return Err(Error::Domain(format!("kappa needs a non-null component, got {i}")));
    }
    let base = kappa_base(g, s)?;
    let raw = raw_entries(g, s, g.base_field().one())?;
    let r = raw
        .into_iter()
        .find(|r| r.slot == Slot::Comp(i))
        .ok_or_else(|| Error::Domain(format!("no character for component {i}")))?;
    let chi_m1 = g.base_field().chi_m1();
    r.ch.value.mul(base.inv(chi_m1), chi_m1).as_sign().ok_or_else(|| Error::Domain("kappa is not a sign".into()))
}

/// The lift of a simple supercuspidal, written directly in terms of its
/// affine generic data.
pub fn oi_concordance(d: &SimpleSupercuspidalDatum) -> Result<CuspidalSupport> {
    d.check()?;
    let k = &d.field;
    let a = d.a();
    let n = d.rank();
    let big_n = d.n;
    let modulus = k.q() as u64 - 1;
    let chi_m1 = k.chi_m1();
    let triv = MuRestriction::trivial(modulus);
    let quad = MuRestriction::chi_pow(1, modulus);
    let s = |e: usize| sign_elt(k, e);
    let sgn = |e: usize| if e % 2 == 0 { 1i8 } else { -1 };
    let ch = |rank: usize, param: Option<Elt>, mu: MuRestriction, value: GaussUnit| LiftCharacter { gl_rank: rank, param, mu, value };
    let entries = match d.family {
        Family::SoOdd => vec![ch(2 * n, Some(k.mul(k.from_int(2), a)), triv, GaussUnit::sign(d.signs[0]))],
        Family::Sp => vec![
            ch(2 * n, Some(k.mul(k.from_int(4), a)), quad, GaussUnit::NPSI.times_sign(d.signs[0] * chi_m1)),
            ch(1, None, quad, GaussUnit::sign(chi(k, k.mul(s(n), a))?)),
        ],
        Family::SoEvenRam => {
            vec![ch(2 * n, Some(k.mul(s(n - 1), k.mul(a, a))), quad, GaussUnit::NPSI.times_sign(d.signs[0]))]
        }
        Family::SoEvenSplit | Family::SoEvenUnram => {
            let ug = (d.family == Family::SoEvenUnram) as usize;
            let (li, lo) = (d.signs[0], d.signs[1]);
            let param = k.mul(s(n), k.mul(two_pow(k, 2 - ug as i64), a));
            let v2 = sgn(ug) * chi(k, k.neg(k.mul(two_pow(k, ug as i64), a)))? * lo;
            vec![
                ch(2 * n - 2, Some(param), quad, GaussUnit::NPSI.times_sign(sgn(ug) * li * chi_m1)),
                ch(1, None, triv, GaussUnit::sign(lo)),
                ch(1, None, quad, GaussUnit::sign(v2)),
            ]
        }
        Family::URamOdd => vec![ch(big_n, Some(k.mul(k.from_int(2), a)), triv, GaussUnit::sign(d.signs[0]))],
        Family::URamEven => {
            let (li, lo) = (d.signs[0], d.signs[1]);
            let c = k.mul(k.from_int(-2), k.mul(a, two_pow(k, -(2 * n as i64 - 1))));
            vec![
                ch(big_n - 1, Some(a), quad, GaussUnit::NPSI.times_sign(li * chi(k, k.from_int(2))?)),
                ch(1, None, quad, GaussUnit::NPSI.times_sign(lo * chi(k, c)?)),
            ]
        }
        Family::UUnramOdd | Family::UUnramEven => {
            let t = d.depth_zero.expect("checked");
            let p = k.p() as u64;
            let exponent = (modulus - (t % modulus) * (p - 1) % modulus) % modulus;
            let lam_m1 = if t % 2 == 0 { 1 } else { -1 };
            vec![ch(big_n, Some(a), MuRestriction { exponent, modulus }, GaussUnit::sign(sgn(big_n - 1) * lam_m1))]
        }
        Family::Gl => vec![ch(
            big_n,
            Some(a),
            MuRestriction { exponent: d.depth_zero.expect("checked") % modulus, modulus },
            GaussUnit::sign(d.xi.expect("checked")),
        )],
    };
    Ok(CuspidalSupport::new(entries))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::square_classes::Variant;
    use crate::strata::{reduce_to_stratum, StratumComponent};

    fn field(p: u32) -> ResidueField {
        ResidueField::prime(p).unwrap()
    }

    fn simple(family: Family, n: usize, k: &ResidueField, units: Vec<Elt>, signs: Vec<i8>) -> SimpleSupercuspidalDatum {
        SimpleSupercuspidalDatum { family, n, field: k.clone(), units, signs, depth_zero: None, xi: None }
    }

    fn all_unit_tuples(k: &ResidueField, len: usize, cap: usize) -> Vec<Vec<Elt>> {
        let units: Vec<Elt> = k.units().collect();
        let mut out = vec![vec![]];
        for _ in 0..len {
            out = out
                .into_iter()
                .flat_map(|v: Vec<Elt>| units.iter().map(move |&x| [v.clone(), vec![x]].concat()))
                .collect();
        }
        out.truncate(cap);
        out
    }

    #[test]
    fn concordance_small_families() {
        for p in [3, 5, 7] {
            let k = field(p);
            let mut seen = std::collections::BTreeMap::<&str, usize>::new();
            for (family, big_n) in [
                (Family::SoOdd, 5),
                (Family::SoOdd, 7),
                (Family::Sp, 4),
                (Family::Sp, 6),
                (Family::SoEvenRam, 4),
                (Family::SoEvenRam, 6),
                (Family::SoEvenSplit, 6),
                (Family::SoEvenUnram, 6),
                (Family::URamOdd, 3),
                (Family::URamOdd, 5),
                (Family::URamEven, 4),
                (Family::URamEven, 6),
            ] {
                let len = SimpleSupercuspidalDatum::unit_count(family, big_n);
                let nsig = SimpleSupercuspidalDatum::sign_count(family);
                for units in all_unit_tuples(&k, len, 60) {
                    for sig in [1i8, -1] {
                        let d = simple(family, big_n, &k, units.clone(), vec![sig; nsig]);
                        if d.check().is_err() {
                            continue;
                        }
                        let Ok((g, s)) = reduce_to_stratum(&d) else { continue };
                        let ours = cuspidal_support(&g, &s).unwrap();
                        let theirs = oi_concordance(&d).unwrap();
                        assert_eq!(ours, theirs, "{family} N={big_n} p={p} units={units:?}");
                        *seen.entry(family.name()).or_default() += 1;
                    }
                }
            }
            assert!(seen.values().all(|&c| c >= 20), "p={p}: {seen:?}");
        }
    }

    #[test]
    fn unramified_unitary_concordance() {
        for p in [3, 5, 7] {
            let k = ResidueField::new(p, 2).unwrap();
            let mut seen = 0;
            for big_n in 1..=3usize {
                let len = SimpleSupercuspidalDatum::unit_count(Family::UUnramOdd, big_n);
                let family = if big_n % 2 == 0 { Family::UUnramEven } else { Family::UUnramOdd };
                for units in all_unit_tuples(&k, len, 400) {
                    for t in [0u64, 1, 3] {
                        let d = SimpleSupercuspidalDatum { depth_zero: Some(t), ..simple(family, big_n, &k, units.clone(), vec![]) };
                        if d.check().is_err() || big_n % p as usize == 0 {
                            continue;
                        }
                        let (g, s) = reduce_to_stratum(&d).unwrap();
                        assert_eq!(cuspidal_support(&g, &s).unwrap(), oi_concordance(&d).unwrap(), "N={big_n} p={p}");
                        seen += 1;
                    }
                }
            }
            assert!(seen >= 20, "p={p}: {seen}");
        }
    }

    #[test]
    fn kappa_simple_cases() {
        let k = field(7);
        let d = simple(Family::Sp, 6, &k, vec![k.one(), k.from_int(2), k.from_int(3), k.from_int(5)], vec![1]);
        let (g, s) = reduce_to_stratum(&d).unwrap();
        assert_eq!(kappa(&g, &s, 0).unwrap(), 1);
        let d = simple(Family::SoOdd, 5, &k, vec![k.one(), k.from_int(2), k.from_int(3)], vec![-1]);
        let (g, s) = reduce_to_stratum(&d).unwrap();
        assert_eq!(kappa(&g, &s, 0).unwrap(), 1);
        assert!(kappa(&g, &s, 1).is_err());
    }

    #[test]
    fn symplectic_kappa_is_gamma_theta() {
        use crate::quad_forms::{gamma, theta};
        for p in [5, 7] {
            let k = field(p);
            let g = GroupSpec::new(Family::Sp, 4, k.clone(), Variant::Plus).unwrap();
            for a in k.units() {
                for b in k.units() {
                    if a == b {
                        continue;
                    }
                    for part in [vec![], vec![0], vec![1], vec![0, 1]] {
                        let s = EpipelagicStratum {
                            components: vec![StratumComponent::new(2, a), StratumComponent::new(2, b)],
                            omega_signs: vec![1, 1],
                            ..Default::default()
                        }
                        .with_partition(&part);
                        let want = quad_char(k.mul(gamma(&g, &s, 0, 1).unwrap(), theta(&g, &s, 0, 1).unwrap()), &k).unwrap();
                        assert_eq!(kappa(&g, &s, 0).unwrap(), want);
                    }
                }
            }
        }
    }

    #[test]
    fn lift_character_slots() {
        let k = field(5);
        let d = simple(Family::Sp, 4, &k, vec![k.one(), k.from_int(2), k.from_int(3)], vec![1]);
        let (g, s) = reduce_to_stratum(&d).unwrap();
        assert_eq!(lift_character(&g, &s, Slot::Comp(0)).unwrap().len(), 1);
        assert_eq!(lift_character(&g, &s, Slot::O).unwrap().len(), 1);
        let d = simple(Family::SoOdd, 5, &k, vec![k.one(), k.from_int(2), k.from_int(3)], vec![1]);
        let (g, s) = reduce_to_stratum(&d).unwrap();
        assert!(lift_character(&g, &s, Slot::O).is_err());
        let c = &lift_character(&g, &s, Slot::Comp(0)).unwrap()[0];
        assert_eq!(c.mu.tag(), MuTag::Trivial);
    }

    #[test]
    fn mu_restriction_values() {
        let k = field(7);
        let chi = MuRestriction::chi_pow(1, 6);
        assert_eq!(chi.tag(), MuTag::Quadratic);
        for x in k.units() {
            assert_eq!(chi.sign_at(x, &k).unwrap(), Some(quad_char(x, &k).unwrap()));
        }
        assert_eq!(MuRestriction { exponent: 1, modulus: 6 }.tag(), MuTag::General);
        assert_eq!(MuRestriction { exponent: 1, modulus: 6 }.sign_at(k.generator(), &k).unwrap(), None);
    }
}

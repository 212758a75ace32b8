//! Sweeps comparing every closed form against its brute-force oracle.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hecke::{
    brute_b_sum, closed_b_sum, closed_coeffs, eigen_product_check, example_red_set, CharData, ExampleTag, Half,
    ReducibilitySet,
};
use crate::lift::{cuspidal_support, kappa, lift_character, oi_concordance, MuRestriction};
use crate::packets::{enumerate_packet, Packet};
use crate::quad_forms::{
    build_trace_form, discriminant, gauss_brute, gauss_closed, radical_quotient, QuadFormFq, Slot, TraceFormSpec,
};
use crate::residue_field::{self, quad_char, CyclotomicInt, Elt, GaussUnit, ResidueField};
use crate::square_classes::{Family, InnerFormLabel, Variant};
use crate::strata::{
    expected_label, needs_xi, partition_indices, reduce_to_stratum, sign_indices, validate_stratum, EpipelagicStratum,
    GroupSpec, SimpleSupercuspidalDatum, StratumComponent,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub suite: &'static str,
    pub name: String,
    pub p: u32,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    fn new(suite: &'static str, name: impl Into<String>, p: u32, ok: bool, detail: impl FnOnce() -> String) -> Self {
        Check {
            suite,
            name: name.into(),
            p,
            status: if ok { Status::Pass } else { Status::Fail },
            detail: (!ok).then(detail),
        }
    }
    fn skip(suite: &'static str, name: impl Into<String>, p: u32, why: impl Into<String>) -> Self {
        Check { suite, name: name.into(), p, status: Status::Skip, detail: Some(why.into()) }
    }
    fn from_result(suite: &'static str, name: impl Into<String>, p: u32, r: Result<Option<String>>) -> Self {
        match r {
            Ok(None) => Check::new(suite, name, p, true, String::new),
            Ok(Some(d)) => Check::new(suite, name, p, false, || d),
            Err(e) => Check::new(suite, name, p, false, || e.to_string()),
        }
    }
    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub checks: Vec<Check>,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
}

impl Report {
    pub fn new(checks: Vec<Check>) -> Self {
        let count = |s| checks.iter().filter(|c| c.status == s).count();
        let (passed, failed, skipped) = (count(Status::Pass), count(Status::Fail), count(Status::Skip));
        Report { checks, passed, failed, skipped }
    }
    pub fn all_pass(&self) -> bool {
        self.failed == 0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Gauss,
    Quadform,
    Hecke,
    Concordance,
    Packets,
    All,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Gauss => "gauss",
            Suite::Quadform => "quadform",
            Suite::Hecke => "hecke",
            Suite::Concordance => "concordance",
            Suite::Packets => "packets",
            Suite::All => "all",
        }
    }
    /// Largest prime the suite's brute-force sums accept.
    pub fn max_p(self) -> u32 {
        match self {
            Suite::Hecke => 7,
            _ => 13,
        }
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        [Suite::Gauss, Suite::Quadform, Suite::Hecke, Suite::Concordance, Suite::Packets, Suite::All]
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Schema(format!("unknown suite `{s}`")))
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn field(p: u32) -> Result<ResidueField> {
    ResidueField::prime(p)
}

fn sgn(e: usize) -> i64 {
    if e % 2 == 0 {
        1
    } else {
        -1
    }
}

/// `g^2 = chi(-1) p` in `Z[zeta_p]` and the normalized unit squares to
/// `chi(-1)`.
pub fn gauss_law(p: u32) -> Vec<Check> {
    let r = (|| -> Result<Option<String>> {
        let k = field(p)?;
        let (raw, unit) = residue_field::gauss_brute(&k)?;
        let chi = k.chi_m1();
        let sq = raw.pow(2);
        if sq != CyclotomicInt::from_int(p, chi as i64 * p as i64) {
            return Ok(Some(format!("g^2 = {sq}, expected {}", chi as i64 * p as i64)));
        }
        let u2 = unit.mul(unit, chi);
        Ok((u2 != GaussUnit::sign(chi)).then(|| format!("n_psi = {unit}, n_psi^2 = {u2}, chi(-1) = {chi}")))
    })();
    vec![Check::from_result("gauss", "n_psi^2 = chi(-1)", p, r)]
}

/// A random non-degenerate symmetric form.
pub fn random_form<R: Rng>(rng: &mut R, k: &ResidueField, dim: usize) -> QuadFormFq {
    loop {
        let mut g = vec![vec![Elt(0); dim]; dim];
        for i in 0..dim {
            for j in 0..=i {
                let x = Elt(rng.gen_range(0..k.q()));
                g[i][j] = x;
                g[j][i] = x;
            }
        }
        let f = QuadFormFq::new(k, g).expect("square matrix");
        if !f.is_degenerate() {
            return f;
        }
    }
}

/// Closed against brute Gauss sums on `count` random forms of dimension at
/// most 6 (5 for p > 7, keeping the brute sum under a million points).
pub fn random_forms(seed: u64, count: usize, primes: &[u32]) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for n in 0..count {
        let p = primes[n % primes.len()];
        let Ok(k) = field(p) else {
            out.push(Check::new("quadform", "random form", p, false, || format!("{p} is not an odd prime")));
            continue;
        };
        let dim = rng.gen_range(1..=if p > 7 { 5 } else { 6 });
        let f = random_form(&mut rng, &k, dim);
        let r = gauss_closed(&f).and_then(|c| gauss_brute(&f).map(|b| (c, b)));
        let r = r.map(|(c, b)| (c != b).then(|| format!("closed {c}, brute {b}, gram {:?}", f.gram_ints())));
        out.push(Check::from_result("quadform", format!("random form #{n} (dim {dim})"), p, r));
    }
    out
}

fn single_block(family: Family, k: &ResidueField, n: usize, u: Elt) -> Result<(GroupSpec, EpipelagicStratum)> {
    let g = GroupSpec::new(family, n, k.clone(), Variant::Plus)?;
    let s = EpipelagicStratum {
        components: vec![StratumComponent::new(n, u)],
        omega_signs: vec![1; if family.is_unram_unitary() { 0 } else { 1 }],
        depth_zero: family.is_unram_unitary().then_some(0),
        ..Default::default()
    };
    Ok((g, s))
}

fn self_form(g: &GroupSpec, s: &EpipelagicStratum) -> Result<QuadFormFq> {
    build_trace_form(&TraceFormSpec { group: g, stratum: s, i: Slot::Comp(0), j: Slot::Comp(0) })
}

/// Discriminants of the self trace forms, `n` in `1..=3`.
pub fn discriminant_tables(p: u32) -> Vec<Check> {
    let mut out = Vec::new();
    let Ok(k) = field(p) else { return out };
    for n in 1..=3usize {
        let u = k.from_int(2);
        // symplectic and ramified even orthogonal blocks of degree 2n
        for (family, want, label) in [
            (Family::Sp, 2 * sgn(n - 1), "sp: 2(-1)^(n-1)"),
            (Family::SoEvenRam, 2 * sgn(n), "ram so: 2(-1)^n"),
        ] {
            let r = (|| -> Result<Option<String>> {
                let (g, s) = single_block(family, &k, 2 * n, u)?;
                let q = radical_quotient(&self_form(&g, &s)?);
                let d = discriminant(&q)?;
                let w = quad_char(k.from_int(want), &k)?;
                if d != w {
                    return Ok(Some(format!("disc class {d}, expected {w}")));
                }
                let (c, b) = (gauss_closed(&q)?, gauss_brute(&q)?);
                Ok((c != b).then(|| format!("closed {c}, brute {b}")))
            })();
            out.push(Check::from_result("quadform", format!("{label}, n={n}"), p, r));
        }
        // odd orthogonal: n(q) = 1 for every simple datum of SO_(2n+1)
        let r = (|| -> Result<Option<String>> {
            let len = SimpleSupercuspidalDatum::unit_count(Family::SoOdd, 2 * n + 1);
            for units in k.units().combinations_with_replacement(len).take(40) {
                let d = simple(Family::SoOdd, 2 * n + 1, &k, units.clone(), vec![1]);
                let Ok((g, s)) = reduce_to_stratum(&d) else { continue };
                let kap = kappa(&g, &s, 0)?;
                if kap != 1 {
                    return Ok(Some(format!("n(q) = {kap} for units {units:?}")));
                }
            }
            Ok(None)
        })();
        out.push(Check::from_result("quadform", format!("so odd: n(q) = 1, n={n}"), p, r));
        // unramified unitary: n = (-1)^(N-1) on the radical quotient
        let name = format!("u unram: (-1)^(N-1), N={n}");
        let r = (|| -> Result<Option<String>> {
            let k2 = ResidueField::new(p, 2)?;
            let family = if n % 2 == 0 { Family::UUnramEven } else { Family::UUnramOdd };
            // conj(u) = (-1)^N u
            let u = if n % 2 == 0 { k2.from_int(2) } else { k2.exp((p + 1) / 2) };
            let (g, s) = single_block(family, &k2, n, u)?;
            let q = radical_quotient(&self_form(&g, &s)?);
            let want = GaussUnit::sign(sgn(n - 1) as i8);
            let (c, b) = (gauss_closed(&q)?, gauss_brute(&q)?);
            let expected_dim = 2 * n - 2;
            if q.dim() != expected_dim || c != want || b != want {
                return Ok(Some(format!(
                    "quotient dim {} (expected {expected_dim}), closed {c}, brute {b}, expected {want}",
                    q.dim()
                )));
            }
            Ok(None)
        })();
        if n % p as usize == 0 {
            let why = r.map(|d| d.unwrap_or_default()).unwrap_or_else(|e| e.to_string());
            out.push(Check::skip("quadform", name, p, format!("p divides N, stratum rejected: {why}")));
        } else {
            out.push(Check::from_result("quadform", name, p, r));
        }
    }
    out
}

fn simple(family: Family, n: usize, k: &ResidueField, units: Vec<Elt>, signs: Vec<i8>) -> SimpleSupercuspidalDatum {
    SimpleSupercuspidalDatum { family, n, field: k.clone(), units, signs, depth_zero: None, xi: None }
}

/// Simple data of a family in dimension `n`, all sign choices.
pub fn simple_samples(family: Family, n: usize, k: &ResidueField, cap: usize) -> Vec<SimpleSupercuspidalDatum> {
    let len = SimpleSupercuspidalDatum::unit_count(family, n);
    let nsig = SimpleSupercuspidalDatum::sign_count(family);
    let units: Vec<Elt> = k.units().collect();
    let mut out = Vec::new();
    for tuple in (0..len).map(|_| units.iter().copied()).multi_cartesian_product().take(cap) {
        // Unramified unitary data carry a depth-zero exponent mod p + 1 in
        // place of signs.
        let variants: Vec<(i8, Option<u64>)> = if family.is_unram_unitary() {
            (0..=k.p() as u64).map(|t| (1, Some(t))).collect()
        } else {
            vec![(1, None), (-1, None)]
        };
        for (sig, dz) in variants {
            let mut d = simple(family, n, k, tuple.clone(), vec![sig; nsig]);
            d.depth_zero = dz;
            if d.check().is_ok() {
                out.push(d);
            }
        }
    }
    out
}

/// Lifts of reduced simple data against the independent formulas, with at
/// least 20 samples per family.
pub fn concordance(p: u32) -> Vec<Check> {
    let mut out = Vec::new();
    let Ok(k) = field(p) else { return out };
    let Ok(k2) = ResidueField::new(p, 2) else { return out };
    let cases: Vec<(Family, usize)> = vec![
        (Family::SoOdd, 3),
        (Family::SoOdd, 5),
        (Family::SoOdd, 7),
        (Family::Sp, 2),
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
        (Family::UUnramOdd, 1),
        (Family::UUnramEven, 2),
        (Family::UUnramOdd, 3),
        (Family::UUnramOdd, 5),
    ];
    let mut seen: BTreeMap<&str, (usize, Option<String>)> = BTreeMap::new();
    for (family, n) in cases {
        if family.is_unram_unitary() && n % p as usize == 0 {
            continue;
        }
        let kk = if family.is_unram_unitary() { &k2 } else { &k };
        let entry = seen.entry(family.name()).or_default();
        for d in simple_samples(family, n, kk, 200) {
            let Ok((g, s)) = reduce_to_stratum(&d) else { continue };
            match (cuspidal_support(&g, &s), oi_concordance(&d)) {
                (Ok(a), Ok(b)) if a == b => entry.0 += 1,
                (a, b) => {
                    entry.1.get_or_insert_with(|| format!("N={n} units={:?}: ours {a:?}, formula {b:?}", d.units));
                }
            }
        }
    }
    for (name, (count, bad)) in seen {
        let ok = bad.is_none() && count >= 20;
        out.push(Check::new("concordance", format!("{name} ({count} samples)"), p, ok, || {
            bad.unwrap_or_else(|| format!("only {count} samples"))
        }));
    }
    out
}

fn char_sweep(tag: ExampleTag, k: &ResidueField) -> Vec<CharData> {
    let q = k.q() as u64 - 1;
    let mut out = Vec::new();
    if tag == ExampleTag::U1Unram {
        let p = k.p() as u64;
        for t in 0..=p {
            for j in 0..=p {
                out.push(CharData { lambda_tilde: j * (p - 1) % q, lambda: t, ..Default::default() });
            }
        }
        return out;
    }
    let units: Vec<Vec<Elt>> = vec![
        vec![k.from_int(2), k.one()],
        vec![k.one(), k.from_int(3), k.zeta()],
        vec![k.zeta(), k.one(), k.from_int(2), k.from_int(-1)],
    ];
    for s in [0, q / 2] {
        for lambda in [0, 1] {
            for omega_o in [1, -1] {
                for u_g in [0, 1] {
                    for u in &units {
                        let u: Vec<Elt> = u.iter().map(|&x| if x.0 == 0 { k.one() } else { x }).collect();
                        out.push(CharData { lambda_tilde: s, lambda, omega_o, units: u, u_g });
                    }
                }
            }
        }
    }
    out
}

/// Literal sums of the eight worked examples against their closed values.
pub fn hecke_sums(p: u32) -> Vec<Check> {
    let mut out = Vec::new();
    for tag in ExampleTag::ALL {
        let r = (|| -> Result<Option<String>> {
            let k = if tag == ExampleTag::U1Unram { ResidueField::new(p, 2)? } else { field(p)? };
            for d in char_sweep(tag, &k) {
                let b = brute_b_sum(tag, &k, &d)?;
                let c = closed_b_sum(tag, &k, &d)?;
                if b != c {
                    let show = |x: &Option<crate::hecke::RootSum>| x.as_ref().map(|r| r.reduced());
                    return Ok(Some(format!(
                        "{d:?}: brute y {:?} z {:?}, closed y {:?} z {:?}",
                        show(&b.b_y),
                        show(&b.b_z),
                        show(&c.b_y),
                        show(&c.b_z)
                    )));
                }
            }
            Ok(None)
        })();
        out.push(Check::from_result("hecke", tag.name(), p, r));
    }
    out
}

/// The five reducibility rows of the rank-one unitary examples.
pub fn red_sets(p: u32) -> Vec<Check> {
    let set = |a: u32, b: u32| ReducibilitySet { s1: Half(a), s2: Half(b) };
    let mut out = Vec::new();
    let p64 = p as u64;
    let m = p64 * p64 - 1;
    type Row = (&'static str, ExampleTag, bool, ReducibilitySet);
    let rows: [Row; 5] = [
        ("u1 unram linked", ExampleTag::U1Unram, true, set(2, 1)),
        ("u1 unram self-dual, not linked", ExampleTag::U1Unram, false, set(0, 1)),
        ("u1 ram trivial, lambda~(varpi) = lambda(-1)", ExampleTag::U1Ram, true, set(2, 0)),
        ("u1 ram trivial, lambda~(varpi) = -lambda(-1)", ExampleTag::U1Ram, false, set(0, 2)),
        ("u1 ram quadratic", ExampleTag::U1Ram, true, set(1, 1)),
    ];
    for (i, (name, tag, flag, want)) in rows.into_iter().enumerate() {
        let r = (|| -> Result<Option<String>> {
            let mut cases: Vec<(CharData, i8)> = Vec::new();
            if tag == ExampleTag::U1Unram {
                for t in 0..=p64 {
                    let linked = (m - t * (p64 - 1) % m) % m;
                    for j in 0..=p64 {
                        let s = j * (p64 - 1) % m;
                        if (s == linked) == flag {
                            cases.push((CharData { lambda_tilde: s, lambda: t, ..Default::default() }, 1));
                        }
                    }
                }
            } else {
                for lambda in [0, 1] {
                    let lam_m1: i8 = if lambda == 0 { 1 } else { -1 };
                    if i == 4 {
                        for v in [1, -1] {
                            cases.push((CharData { lambda_tilde: (p64 - 1) / 2, lambda, ..Default::default() }, v));
                        }
                    } else {
                        let v = if flag { lam_m1 } else { -lam_m1 };
                        cases.push((CharData { lambda_tilde: 0, lambda, ..Default::default() }, v));
                    }
                }
            }
            let k = if tag == ExampleTag::U1Unram { ResidueField::new(p, 2)? } else { field(p)? };
            for (d, v) in cases {
                let got = example_red_set(tag, &k, &d, v)?;
                if got != want {
                    return Ok(Some(format!("{d:?}, lambda~(varpi) = {v}: got {got}, expected {want}")));
                }
            }
            Ok(None)
        })();
        out.push(Check::from_result("hecke", format!("Red: {name}"), p, r));
    }
    out
}

/// On random valid strata: the branch selected by the lift contains `s = 1`,
/// and the lift's restriction is the only one with non-vanishing `b_z`.
pub fn first_general_form(p: u32, samples: usize, seed: u64) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ p as u64);
    let mut bad = None;
    let mut n = 0;
    while n < samples {
        let (g, s) = random_valid_stratum(&mut rng, p);
        if g.family == Family::Gl {
            continue;
        }
        n += 1;
        let r = (|| -> Result<Option<String>> {
            for i in s.nonnull() {
                let ch = &lift_character(&g, &s, Slot::Comp(i))?[0];
                let c = closed_coeffs(&g, &s, i, ch.mu)?;
                let red = eigen_product_check(&c, ch.value);
                if !red.contains_real(Half::ONE) {
                    return Ok(Some(format!("{} component {i}: {red}", g.family)));
                }
                if !g.family.is_unram_unitary() {
                    let modulus = g.field.q() as u64 - 1;
                    let live: Vec<MuRestriction> = [MuRestriction::trivial(modulus), MuRestriction::chi_pow(1, modulus)]
                        .into_iter()
                        .filter(|h| closed_coeffs(&g, &s, i, *h).map(|c| c.eps_t_z.is_some()).unwrap_or(false))
                        .collect();
                    if live != vec![ch.mu] {
                        return Ok(Some(format!("{} component {i}: live restrictions {live:?}", g.family)));
                    }
                }
            }
            Ok(None)
        })();
        match r {
            Ok(None) => {}
            Ok(Some(d)) => {
                bad.get_or_insert(d);
            }
            Err(e) => {
                bad.get_or_insert(e.to_string());
            }
        }
    }
    vec![Check::new("hecke", format!("first general form contains s = 1 ({samples} strata)"), p, bad.is_none(), || {
        bad.unwrap_or_default()
    })]
}

/// A random stratum passing validation, over `F_p` (or `F_{p^2}` for
/// unramified unitary groups).
pub fn random_valid_stratum<R: Rng>(rng: &mut R, p: u32) -> (GroupSpec, EpipelagicStratum) {
    loop {
        if let Some((g, s)) = random_shape(rng, p) {
            if validate_stratum(&g, &s).is_ok() {
                return (g, s);
            }
        }
    }
}

fn random_units<R: Rng>(rng: &mut R, k: &ResidueField, m: usize) -> Option<Vec<Elt>> {
    let all: Vec<Elt> = k.units().collect();
    (m <= all.len()).then(|| all.choose_multiple(rng, m).copied().collect())
}

/// A random shape for `family`, not necessarily valid.
pub fn random_shape_for<R: Rng>(rng: &mut R, p: u32, family: Family) -> Option<(GroupSpec, EpipelagicStratum)> {
    let prime = ResidueField::prime(p).ok()?;
    let mut s = EpipelagicStratum::default();
    let (k, n, family) = match family {
        Family::Gl => {
            let n = rng.gen_range(1..=4);
            s.components = vec![StratumComponent::new(n, random_units(rng, &prime, 1)?[0])];
            s.depth_zero = Some(rng.gen_range(0..p as u64 - 1));
            s.xi = Some(if rng.gen() { 1 } else { -1 });
            (prime, n, family)
        }
        Family::UUnramOdd | Family::UUnramEven => {
            let k = ResidueField::new(p, 2).ok()?;
            let n = rng.gen_range(1..=4usize);
            let a = prime.from_int(rng.gen_range(1..p as i64));
            let u = if n % 2 == 0 { k.from_int(a.0 as i64) } else { k.mul(k.from_int(a.0 as i64), k.exp((p + 1) / 2)) };
            s.components = vec![StratumComponent::new(n, u)];
            s.depth_zero = Some(rng.gen_range(0..=p as u64));
            let fam = if n % 2 == 0 { Family::UUnramEven } else { Family::UUnramOdd };
            (k, n, fam)
        }
        _ => {
            let m = rng.gen_range(1..=3);
            let (d, null_deg) = match family {
                Family::SoOdd => ([2, 4][rng.gen_range(0..2)], Some(1)),
                Family::Sp => ([2, 4][rng.gen_range(0..2)], None),
                Family::URamOdd | Family::URamEven => ([1, 3][rng.gen_range(0..2)], rng.gen::<bool>().then_some(1)),
                _ => ([2, 4][rng.gen_range(0..2)], rng.gen::<bool>().then_some(2)),
            };
            let units = random_units(rng, &prime, m)?;
            s.components = units.into_iter().map(|u| StratumComponent::new(d, u)).collect();
            if let Some(nd) = null_deg {
                s.components.push(StratumComponent::null(nd));
            }
            let n: usize = s.components.iter().map(|c| c.degree).sum();
            let fam = match family {
                Family::URamOdd | Family::URamEven if n % 2 == 0 => Family::URamEven,
                Family::URamOdd | Family::URamEven => Family::URamOdd,
                f => f,
            };
            (prime, n, fam)
        }
    };
    let g = GroupSpec::new(family, n, k, Variant::Plus).ok()?;
    s.omega_signs = (0..sign_indices(&g, &s).len()).map(|_| if rng.gen() { 1 } else { -1 }).collect();
    let part: Vec<usize> = partition_indices(&g, &s).into_iter().filter(|_| rng.gen()).collect();
    if family != Family::Gl {
        s = s.with_partition(&part);
    }
    let g = GroupSpec { variant: Variant::from_sign(expected_label(family, s.partition.len()).0), ..g };
    if needs_xi(&g, &s) {
        s.xi = Some(if rng.gen() { 1 } else { -1 });
    }
    Some((g, s))
}

fn random_shape<R: Rng>(rng: &mut R, p: u32) -> Option<(GroupSpec, EpipelagicStratum)> {
    let family = Family::ALL[rng.gen_range(0..Family::ALL.len())];
    random_shape_for(rng, p, family)
}

/// How the members of a packet split between inner forms.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Split {
    /// Equinumerous on the two forms.
    Half,
    /// All on the quasi-split form.
    AllPlus,
    /// Two L-packets by `xi`, each equinumerous on the two forms.
    XiHalves,
    Single,
}

#[derive(Clone, Debug)]
pub struct PacketCase {
    pub name: String,
    /// `#I`, the null index included.
    pub size: usize,
    pub g: GroupSpec,
    pub s: EpipelagicStratum,
    pub expected: usize,
    pub split: Split,
}

fn first_valid(family: Family, k: &ResidueField, d: usize, m: usize, null: Option<usize>) -> Option<(GroupSpec, EpipelagicStratum)> {
    let n = d * m + null.unwrap_or(0);
    let g = GroupSpec::new(family, n, k.clone(), Variant::Plus).ok()?;
    for units in k.units().combinations(m) {
        let mut comps: Vec<StratumComponent> = units.into_iter().map(|u| StratumComponent::new(d, u)).collect();
        if let Some(nd) = null {
            comps.push(StratumComponent::null(nd));
        }
        let mut s = EpipelagicStratum { components: comps, ..Default::default() };
        s.omega_signs = vec![1; sign_indices(&g, &s).len()];
        if needs_xi(&g, &s) {
            s.xi = Some(1);
        }
        if validate_stratum(&g, &s).is_ok() {
            return Some((g, s));
        }
    }
    None
}

/// Packet shapes with `#I` in `1..=3`, plus the singleton families.
pub fn packet_cases(p: u32) -> Vec<(String, Option<PacketCase>)> {
    let Ok(k) = field(p) else { return vec![] };
    let mut out = Vec::new();
    let mut push = |name: String, size: usize, c: Option<(GroupSpec, EpipelagicStratum)>, expected: usize, split: Split| {
        out.push((name.clone(), c.map(|(g, s)| PacketCase { name, size, g, s, expected, split })));
    };
    for m in 1..=3usize {
        push(format!("so odd #I\\o={m}"), m + 1, first_valid(Family::SoOdd, &k, 2, m, Some(1)), 1 << m, Split::Half);
        push(format!("sp #I={m}"), m, first_valid(Family::Sp, &k, 2, m, None), 1 << m, Split::AllPlus);
        push(format!("u ram #I={m}, no o"), m, first_valid(family_u(m), &k, 1, m, None), 1 << m, Split::Half);
        if m >= 2 {
            push(format!("u ram #I={m}, o in I"), m, first_valid(family_u(m), &k, 1, m - 1, Some(1)), 1 << m, Split::Half);
        }
    }
    // even orthogonal: #I even for split and unramified, odd for ramified
    for fam in [Family::SoEvenSplit, Family::SoEvenUnram] {
        push(format!("{fam} #I=2, o not in I"), 2, first_valid(fam, &k, 2, 2, None), 8, Split::XiHalves);
        push(format!("{fam} #I=2, o in I"), 2, first_valid(fam, &k, 2, 1, Some(2)), 4, Split::Half);
    }
    for size in [1usize, 3] {
        let fam = Family::SoEvenRam;
        push(format!("{fam} #I={size}, o not in I"), size, first_valid(fam, &k, 2, size, None), 1 << (size + 1), Split::XiHalves);
    }
    push("so_even_ram #I=3, o in I".into(), 3, first_valid(Family::SoEvenRam, &k, 2, 2, Some(2)), 8, Split::Half);
    let gl = GroupSpec::new(Family::Gl, 2, k.clone(), Variant::Plus).ok();
    let gl_s = EpipelagicStratum {
        components: vec![StratumComponent::new(2, k.from_int(2))],
        depth_zero: Some(1),
        xi: Some(1),
        ..Default::default()
    };
    push("gl".into(), 1, gl.map(|g| (g, gl_s)), 1, Split::Single);
    if let Ok(k2) = ResidueField::new(p, 2) {
        let n = 2;
        let u = k2.from_int(2);
        let g = GroupSpec::new(Family::UUnramEven, n, k2, Variant::Plus).ok();
        let s = EpipelagicStratum { components: vec![StratumComponent::new(n, u)], depth_zero: Some(1), ..Default::default() };
        push(format!("u unram N={n}"), 1, g.map(|g| (g, s)), 1, Split::Single);
    }
    out
}

fn family_u(n: usize) -> Family {
    if n % 2 == 0 {
        Family::URamEven
    } else {
        Family::URamOdd
    }
}

/// Checks a packet against its expected cardinality and split; `None` when
/// it conforms.
pub fn packet_mismatch(c: &PacketCase, pk: &Packet) -> Option<String> {
    let count = |ms: &mut dyn Iterator<Item = &crate::packets::PacketMember>, l: InnerFormLabel| {
        ms.filter(|m| m.inner_form == l).count()
    };
    if pk.cardinality != c.expected || pk.members.len() != c.expected {
        return Some(format!("{} members, expected {}", pk.cardinality, c.expected));
    }
    let plus = count(&mut pk.members.iter(), InnerFormLabel::PLUS);
    let ok = match c.split {
        Split::Half => 2 * plus == c.expected,
        Split::AllPlus => plus == c.expected,
        Split::Single => plus == 1,
        Split::XiHalves => [1i8, -1].iter().all(|&x| {
            let with: Vec<_> = pk.members.iter().filter(|m| m.xi.map(|v| v * pk.members[0].xi.unwrap_or(1)) == Some(x)).collect();
            let plus = with.iter().filter(|m| m.inner_form == InnerFormLabel::PLUS).count();
            with.len() == c.expected / 2 && 2 * plus == with.len()
        }) && pk.xi_lifts.len() == 2,
    };
    (!ok).then(|| format!("split {:?} violated: {plus} of {} on the quasi-split form", c.split, c.expected))
}

pub fn packet_cardinalities(p: u32) -> Vec<Check> {
    packet_cases(p)
        .into_iter()
        .map(|(name, c)| match c {
            None => Check::skip("packets", name, p, "no valid stratum of this shape over this field"),
            Some(c) => {
                let r = enumerate_packet(&c.g, &c.s, &c.s.omega_signs, c.s.xi).map(|pk| packet_mismatch(&c, &pk));
                Check::from_result("packets", c.name.clone(), p, r)
            }
        })
        .collect()
}

fn check_primes(suite: Suite, primes: &[u32]) -> Result<()> {
    if primes.is_empty() {
        return Err(Error::Schema("empty prime list".into()));
    }
    for &p in primes {
        field(p).map_err(|_| Error::Schema(format!("{p} is not an odd prime")))?;
        let max = if suite == Suite::All { Suite::Hecke.max_p() } else { suite.max_p() };
        if p > max {
            return Err(Error::OverBudget(format!("suite {suite} brute-forces up to p = {max}, got {p}")));
        }
    }
    Ok(())
}

pub fn run_verify(suite: Suite, primes: &[u32]) -> Result<Report> {
    check_primes(suite, primes)?;
    let want = |s: Suite| suite == Suite::All || suite == s;
    let mut checks = Vec::new();
    for &p in primes {
        if want(Suite::Gauss) {
            checks.extend(gauss_law(p));
        }
        if want(Suite::Quadform) {
            checks.extend(discriminant_tables(p));
        }
    }
    if want(Suite::Quadform) {
        checks.extend(random_forms(0x5eed, 210, primes));
    }
    for &p in primes {
        if want(Suite::Hecke) {
            checks.extend(hecke_sums(p));
            checks.extend(red_sets(p));
            checks.extend(first_general_form(p, 60, 0xecce));
        }
        if want(Suite::Concordance) {
            checks.extend(concordance(p));
        }
        if want(Suite::Packets) {
            checks.extend(packet_cardinalities(p));
        }
    }
    Ok(Report::new(checks))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suites_pass_at_five() {
        for suite in [Suite::Gauss, Suite::Quadform, Suite::Hecke, Suite::Packets] {
            let r = run_verify(suite, &[5]).unwrap();
            let bad: Vec<_> = r.checks.iter().filter(|c| !c.passed()).collect();
            assert!(bad.is_empty(), "{suite}: {bad:#?}");
        }
    }

    #[test]
    fn refuses_large_primes() {
        assert!(matches!(run_verify(Suite::Hecke, &[11]), Err(Error::OverBudget(_))));
        assert!(matches!(run_verify(Suite::Gauss, &[9]), Err(Error::Schema(_))));
        assert!(run_verify(Suite::Gauss, &[13]).unwrap().all_pass());
    }

    #[test]
    fn random_strata_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut fams = std::collections::BTreeSet::new();
        for _ in 0..200 {
            let (g, s) = random_valid_stratum(&mut rng, 5);
            assert!(validate_stratum(&g, &s).is_ok());
            fams.insert(g.family);
        }
        assert_eq!(fams.len(), Family::ALL.len());
    }
}

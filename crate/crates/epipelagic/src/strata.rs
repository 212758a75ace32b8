//! Epipelagic strata: the data model, validation against the classification
//! table, embedding partitions, and simple supercuspidal data.

use itertools::Itertools;
use serde::Serialize;

use crate::error::{Error, Result, Violation};
use crate::residue_field::{quad_char, Elt, ResidueField};
use crate::square_classes::{Family, InnerFormLabel, Variant};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupSpec {
    pub family: Family,
    /// `dim_F V`.
    pub n: usize,
    /// Residue field carrying the stratum units (`F_{q^2}` for unramified
    /// unitary groups).
    pub field: ResidueField,
    pub variant: Variant,
}

impl GroupSpec {
    pub fn new(family: Family, n: usize, field: ResidueField, variant: Variant) -> Result<Self> {
        if !family.admits_dim(n) {
            return Err(Error::Schema(format!("{family} does not exist in dimension {n}")));
        }
        if variant == Variant::Minus && matches!(family, Family::Sp | Family::Gl) {
            return Err(Error::Schema(format!("{family} has no non-quasi-split pure inner form")));
        }
        if family.is_unram_unitary() && field.f() != 2 {
            return Err(Error::Schema("unramified unitary groups need the quadratic residue extension (f = 2)".into()));
        }
        Ok(GroupSpec { family, n, field, variant })
    }

    /// `u_G`: 0 for split, 1 for unramified even orthogonal groups.
    pub fn u_g(&self) -> u32 {
        (self.family == Family::SoEvenUnram) as u32
    }

    /// Rank of the general linear group receiving the lift.
    pub fn dual_rank(&self) -> usize {
        match self.family {
            Family::SoOdd => self.n - 1,
            Family::Sp => self.n + 1,
            _ => self.n,
        }
    }

    /// Residue field of `F_0` for unramified unitary groups, else the field.
    pub fn base_field(&self) -> ResidueField {
        if self.family.is_unram_unitary() {
            ResidueField::prime(self.field.p()).expect("p is an odd prime")
        } else {
            self.field.clone()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct StratumComponent {
    pub degree: usize,
    /// Leading unit; `None` exactly for the null component.
    pub unit: Option<Elt>,
    pub null: bool,
    pub form_choice: Variant,
}

impl StratumComponent {
    pub fn new(degree: usize, unit: Elt) -> Self {
        StratumComponent { degree, unit: Some(unit), null: false, form_choice: Variant::Plus }
    }
    pub fn null(degree: usize) -> Self {
        StratumComponent { degree, unit: None, null: true, form_choice: Variant::Plus }
    }
    pub fn with_choice(self, form_choice: Variant) -> Self {
        StratumComponent { form_choice, ..self }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct EpipelagicStratum {
    pub components: Vec<StratumComponent>,
    /// `lambda(omega_i)` for each index returned by [`sign_indices`].
    pub omega_signs: Vec<i8>,
    /// `I_zeta`: indices whose block carries the form `zeta H`.
    pub partition: Vec<usize>,
    pub xi: Option<i8>,
    /// Exponent of the depth-zero character (unramified unitary and general
    /// linear groups).
    pub depth_zero: Option<u64>,
}

impl EpipelagicStratum {
    pub fn null_index(&self) -> Option<usize> {
        self.components.iter().position(|c| c.null)
    }
    /// Indices of non-null components.
    pub fn nonnull(&self) -> Vec<usize> {
        (0..self.components.len()).filter(|&i| !self.components[i].null).collect()
    }
    pub fn unit(&self, i: usize) -> Result<Elt> {
        self.components
            .get(i)
            .and_then(|c| c.unit)
            .ok_or_else(|| Error::Domain(format!("component {i} has no unit")))
    }
    /// Resets the partition and the matching per-component form choices.
    pub fn with_partition(&self, part: &[usize]) -> Self {
        let mut s = self.clone();
        s.partition = part.iter().copied().sorted().dedup().collect();
        for (i, c) in s.components.iter_mut().enumerate() {
            c.form_choice = if s.partition.contains(&i) { Variant::Minus } else { Variant::Plus };
        }
        s
    }
    /// `lambda(omega_i)`, if index `i` carries a sign.
    pub fn omega(&self, g: &GroupSpec, i: usize) -> Option<i8> {
        sign_indices(g, self).iter().position(|&k| k == i).and_then(|k| self.omega_signs.get(k).copied())
    }
}

/// Indices carrying a sign `lambda(omega_i)`, in order.
pub fn sign_indices(g: &GroupSpec, s: &EpipelagicStratum) -> Vec<usize> {
    match g.family {
        Family::SoOdd | Family::Sp => s.nonnull(),
        Family::SoEvenSplit | Family::SoEvenUnram | Family::SoEvenRam | Family::URamOdd | Family::URamEven => {
            (0..s.components.len()).collect()
        }
        Family::UUnramOdd | Family::UUnramEven | Family::Gl => vec![],
    }
}

/// Indices that may belong to `I_zeta`.
pub fn partition_indices(g: &GroupSpec, s: &EpipelagicStratum) -> Vec<usize> {
    match g.family {
        Family::SoOdd | Family::Sp => s.nonnull(),
        Family::Gl => vec![],
        _ => (0..s.components.len()).collect(),
    }
}

/// `t_j = (-1)^(e-1) / u_j`, the unit part of the central entry of a
/// ramified orthogonal block.
pub fn t_unit(k: &ResidueField, degree: usize, unit: Elt) -> Elt {
    let e = degree / 2;
    let s = if e % 2 == 1 { k.one() } else { k.from_int(-1) };
    k.div(s, unit).expect("units are non-zero")
}

fn constant_degree(s: &EpipelagicStratum) -> Option<usize> {
    let degs: Vec<usize> = s.nonnull().iter().map(|&i| s.components[i].degree).collect();
    if degs.iter().all_equal() {
        degs.first().copied()
    } else {
        None
    }
}

fn check_shell(g: &GroupSpec, s: &EpipelagicStratum, out: &mut Vec<Violation>) {
    let k = &g.field;
    let comps = &s.components;
    if comps.is_empty() {
        out.push(Violation::new("dim", "no components"));
        return;
    }
    let total: usize = comps.iter().map(|c| c.degree).sum();
    if total != g.n {
        out.push(Violation::new("dim", format!("degrees sum to {total}, expected {}", g.n)));
    }
    for (i, c) in comps.iter().enumerate() {
        if c.degree == 0 {
            out.push(Violation::new("dim", format!("component {i} has degree 0")));
        }
        if c.null != c.unit.is_none() {
            out.push(Violation::new("null", format!("component {i}: null components carry no unit, others need one")));
        }
        if let Some(u) = c.unit {
            if u.0 == 0 || u.0 >= k.q() {
                out.push(Violation::new("unit", format!("component {i}: unit is not in the residue field units")));
            }
        }
    }
    let nulls: Vec<usize> = (0..comps.len()).filter(|&i| comps[i].null).collect();
    if nulls.len() > 1 {
        out.push(Violation::new("null", "at most one null component"));
    }
    if let Some(&o) = nulls.first() {
        if o != comps.len() - 1 {
            out.push(Violation::new("null", "the null component must be last"));
        }
    }
    let deg = constant_degree(s);
    let m = s.nonnull().len();
    match g.family {
        Family::Gl | Family::UUnramOdd | Family::UUnramEven => {
            if comps.len() != 1 || comps[0].null || comps[0].degree != g.n {
                out.push(Violation::new("(i)", "a single component of full degree"));
            }
            if g.family.is_unram_unitary() {
                if let Some(u) = comps[0].unit {
                    let expect = if g.n % 2 == 0 { u } else { k.neg(u) };
                    if k.conj(u) != expect {
                        out.push(Violation::new("(i)", "leading unit must satisfy conj(u) = (-1)^N u"));
                    }
                }
                if s.depth_zero.is_none() {
                    out.push(Violation::new("(i)", "depth-zero exponent required"));
                }
                if g.n % k.p() as usize == 0 {
                    out.push(Violation::new("(i)", "p divides N: F[beta]/F is wildly ramified and the trace form degenerates"));
                }
            } else if s.depth_zero.is_none() || s.xi.is_none() {
                out.push(Violation::new("(i)", "depth-zero exponent and xi required"));
            }
        }
        Family::SoOdd | Family::Sp => {
            match deg {
                Some(d) if d % 2 == 0 => {}
                _ => out.push(Violation::new("(ii)", "non-null components need a constant even degree")),
            }
            if m == 0 {
                out.push(Violation::new("(ii)", "at least one non-null component"));
            }
            if g.family == Family::SoOdd {
                if nulls.len() != 1 || comps[nulls[0]].degree != 1 {
                    out.push(Violation::new("(ii)", "odd orthogonal strata have one null component of degree 1"));
                }
            } else if !nulls.is_empty() {
                out.push(Violation::new("(ii)", "symplectic strata have no null component"));
            }
        }
        Family::URamOdd | Family::URamEven => {
            match deg {
                Some(d) if d % 2 == 1 => {}
                _ => out.push(Violation::new("(iii)", "non-null components need a constant odd degree")),
            }
            if m == 0 {
                out.push(Violation::new("(iii)", "at least one non-null component"));
            }
            if nulls.iter().any(|&o| comps[o].degree != 1) {
                out.push(Violation::new("(iii)", "the null component has degree 1"));
            }
        }
        Family::SoEvenSplit | Family::SoEvenUnram | Family::SoEvenRam => {
            match deg {
                Some(d) if d % 2 == 0 => {}
                _ => out.push(Violation::new("(iv)", "non-null components need a constant even degree")),
            }
            if m == 0 {
                out.push(Violation::new("(iv)", "at least one non-null component"));
            }
            if nulls.iter().any(|&o| comps[o].degree != 2) {
                out.push(Violation::new("(iv)", "the null component is a ramified quadratic block of degree 2"));
            }
            let ram = g.family == Family::SoEvenRam;
            if (comps.len() % 2 == 1) != ram {
                out.push(Violation::new(
                    "(iv)",
                    if ram { "#I is odd for ramified groups" } else { "#I is even for split or unramified groups" },
                ));
            }
            if !ram && nulls.is_empty() && deg.is_some() && out.is_empty() {
                // discriminant of the orthogonal sum must match the group
                let prod = s.nonnull().iter().fold(k.one(), |acc, &i| {
                    k.mul(acc, t_unit(k, comps[i].degree, comps[i].unit.unwrap()))
                });
                let want = if g.u_g() == 1 { -1 } else { 1 };
                if quad_char(prod, k).unwrap() != want {
                    out.push(Violation::new("(iv)", "discriminant of the blocks does not match the group"));
                }
            }
        }
    }
    if g.family != Family::Gl {
        let units: Vec<Elt> = s.nonnull().iter().filter_map(|&i| comps[i].unit).collect();
        if !units.iter().all_unique() {
            out.push(Violation::new("semisimple", "equal leading units in equal degree (degenerate stratum)"));
        }
    }
    let want = sign_indices(g, s).len();
    if s.omega_signs.len() != want {
        out.push(Violation::new("signs", format!("expected {want} signs, got {}", s.omega_signs.len())));
    }
    if s.omega_signs.iter().any(|&x| x != 1 && x != -1) {
        out.push(Violation::new("signs", "signs must be +1 or -1"));
    }
    if let Some(x) = s.xi {
        if x != 1 && x != -1 {
            out.push(Violation::new("xi", "xi must be +1 or -1"));
        }
    }
}

fn check_partition(g: &GroupSpec, s: &EpipelagicStratum, out: &mut Vec<Violation>) {
    let allowed = partition_indices(g, s);
    if !s.partition.iter().tuple_windows().all(|(a, b)| a < b) {
        out.push(Violation::new("partition", "partition must be strictly increasing"));
    }
    for &i in &s.partition {
        if !allowed.contains(&i) {
            out.push(Violation::new("partition", format!("index {i} cannot carry the zeta form")));
        }
    }
    for (i, c) in s.components.iter().enumerate() {
        if (c.form_choice == Variant::Minus) != s.partition.contains(&i) {
            out.push(Violation::new("partition", format!("form choice of component {i} disagrees with the partition")));
        }
    }
    let label = expected_label(g.family, s.partition.len());
    if label.0 != g.variant.sign() {
        out.push(Violation::new("partition", format!("#I_zeta = {} does not give the {:?} form", s.partition.len(), g.variant)));
    }
    if needs_xi(g, s) {
        if s.xi.is_none() {
            out.push(Violation::new("xi", "xi required for split or unramified even orthogonal strata without a null block"));
        }
        if let Some(&last) = s.nonnull().last() {
            let k = &g.field;
            let flipped = k.neg(s.components[last].unit.unwrap_or(k.one()));
            if s.nonnull().iter().any(|&j| j != last && s.components[j].unit == Some(flipped)) {
                out.push(Violation::new("xi", "negating the last unit collides with another component"));
            }
        }
    }
}

/// Whether the stratum needs the extra sign `xi`.
pub fn needs_xi(g: &GroupSpec, s: &EpipelagicStratum) -> bool {
    matches!(g.family, Family::SoEvenSplit | Family::SoEvenUnram) && s.null_index().is_none()
}

pub(crate) fn expected_label(family: Family, zeta_count: usize) -> InnerFormLabel {
    if family == Family::Sp || zeta_count % 2 == 0 {
        InnerFormLabel::PLUS
    } else {
        InnerFormLabel::MINUS
    }
}

/// Checks a stratum against the classification table.
pub fn validate_stratum(g: &GroupSpec, s: &EpipelagicStratum) -> std::result::Result<(), Vec<Violation>> {
    let mut out = Vec::new();
    check_shell(g, s, &mut out);
    if out.is_empty() {
        check_partition(g, s, &mut out);
    }
    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}

/// Validation ignoring the partition, form choices and `xi`.
pub fn validate_shell(g: &GroupSpec, s: &EpipelagicStratum) -> std::result::Result<(), Vec<Violation>> {
    let mut out = Vec::new();
    check_shell(g, s, &mut out);
    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}

pub(crate) fn ensure_valid(g: &GroupSpec, s: &EpipelagicStratum) -> Result<()> {
    validate_stratum(g, s).map_err(Error::Stratum)
}

/// All `I_zeta` giving the inner form `label`.
pub fn enumerate_partitions(g: &GroupSpec, s: &EpipelagicStratum, label: InnerFormLabel) -> Vec<Vec<usize>> {
    let idx = partition_indices(g, s);
    idx.iter()
        .copied()
        .powerset()
        .filter(|p| expected_label(g.family, p.len()) == label)
        .collect()
}

/// Data of a simple supercuspidal representation: affine generic units
/// `a_0, ..., a_n`, and the characters on the Iwahori-level torus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleSupercuspidalDatum {
    pub family: Family,
    /// `N = dim V`.
    pub n: usize,
    pub field: ResidueField,
    pub units: Vec<Elt>,
    /// Signs: `lambda(omega)` (SO odd), `lambda(-1)` (Sp, ramified SO,
    /// odd ramified U), or `lambda(omega_i), lambda(omega_o)`.
    pub signs: Vec<i8>,
    pub depth_zero: Option<u64>,
    pub xi: Option<i8>,
}

impl SimpleSupercuspidalDatum {
    /// Witt-index scale `n` of the family's affine root system.
    pub fn rank(&self) -> usize {
        match self.family {
            Family::Gl => self.n,
            Family::UUnramOdd | Family::UUnramEven => self.n,
            _ => self.n / 2,
        }
    }

    /// Number of units `a_i`.
    pub fn unit_count(family: Family, n: usize) -> usize {
        match family {
            Family::Gl => n,
            Family::SoEvenRam => n / 2,
            Family::UUnramOdd | Family::UUnramEven | Family::URamOdd | Family::URamEven => n / 2 + 1,
            _ => n / 2 + 1,
        }
    }

    pub fn sign_count(family: Family) -> usize {
        match family {
            Family::SoEvenSplit | Family::SoEvenUnram | Family::URamEven => 2,
            Family::UUnramOdd | Family::UUnramEven | Family::Gl => 0,
            _ => 1,
        }
    }

    pub fn check(&self) -> Result<()> {
        let want = Self::unit_count(self.family, self.n);
        if !self.family.admits_dim(self.n) {
            return Err(Error::Schema(format!("{} does not exist in dimension {}", self.family, self.n)));
        }
        if self.units.len() != want || self.units.iter().any(|u| u.0 == 0 || u.0 >= self.field.q()) {
            return Err(Error::Schema(format!("expected {want} non-zero units")));
        }
        if self.signs.len() != Self::sign_count(self.family) || self.signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::Schema("wrong sign data".into()));
        }
        let k = &self.field;
        match self.family {
            Family::SoEvenSplit | Family::SoEvenUnram if self.n < 6 => {
                return Err(Error::Schema("split and unramified even orthogonal data need N >= 6".into()))
            }
            Family::Gl if self.depth_zero.is_none() || self.xi.is_none() => {
                return Err(Error::Schema("general linear data need phi and xi".into()))
            }
            Family::UUnramOdd | Family::UUnramEven => {
                if k.f() != 2 {
                    return Err(Error::Schema("unramified unitary data live in F_{q^2}".into()));
                }
                if self.depth_zero.is_none() {
                    return Err(Error::Schema("unramified unitary data need the depth-zero exponent".into()));
                }
                let a = self.a();
                let expect = if self.n % 2 == 0 { a } else { k.neg(a) };
                if k.conj(a) != expect {
                    return Err(Error::Schema("product a must satisfy conj(a) = (-1)^N a".into()));
                }
            }
            Family::SoEvenUnram => {
                let nn = self.norm_pair();
                if nn.0 == 0 {
                    return Err(Error::Schema("a_{n-1}^2 - a_n^2/zeta vanishes".into()));
                }
            }
            _ => {}
        }
        if self.family == Family::SoEvenUnram || self.family == Family::SoEvenSplit {
            if self.a().0 == 0 {
                return Err(Error::Schema("product a vanishes".into()));
            }
        }
        Ok(())
    }

    /// `N_{a_{n-1}, a_n}` for split / unramified even orthogonal data.
    pub fn norm_pair(&self) -> Elt {
        let k = &self.field;
        let n = self.units.len() - 1;
        let (x, y) = (self.units[n - 1], self.units[n]);
        if self.family == Family::SoEvenUnram {
            let y2 = k.mul(y, y);
            k.sub(k.mul(x, x), k.div(y2, k.zeta()).unwrap())
        } else {
            k.mul(x, y)
        }
    }

    /// The product `a` (`a~` for general linear groups).
    pub fn a(&self) -> Elt {
        let k = &self.field;
        let u = &self.units;
        let n = u.len();
        let sq = |x: Elt| k.mul(x, x);
        let prod = |it: &mut dyn Iterator<Item = Elt>| it.fold(k.one(), |acc, x| k.mul(acc, x));
        match self.family {
            Family::Gl | Family::SoEvenRam => prod(&mut u.iter().copied()),
            Family::SoOdd => k.mul(k.mul(u[0], u[1]), prod(&mut u[2..].iter().map(|&x| sq(x)))),
            Family::Sp | Family::URamEven => {
                k.mul(k.mul(u[0], u[n - 1]), prod(&mut u[1..n - 1].iter().map(|&x| sq(x))))
            }
            Family::SoEvenSplit | Family::SoEvenUnram => k.mul(
                k.mul(k.mul(u[0], u[1]), prod(&mut u[2..n - 2].iter().map(|&x| sq(x)))),
                self.norm_pair(),
            ),
            Family::URamOdd => k.mul(u[0], prod(&mut u[1..].iter().map(|&x| sq(x)))),
            Family::UUnramOdd => k.mul(u[0], prod(&mut u[1..].iter().map(|&x| k.norm(x)))),
            Family::UUnramEven => k.mul(k.mul(u[0], u[n - 1]), prod(&mut u[1..n - 1].iter().map(|&x| k.norm(x)))),
        }
    }

    fn invariant(&self) -> (Elt, Option<i8>, Vec<i8>, Option<u64>, Option<i8>) {
        let k = &self.field;
        let extra = match self.family {
            Family::Sp => Some(quad_char(*self.units.last().unwrap(), k).unwrap()),
            Family::SoEvenSplit | Family::SoEvenUnram => Some(quad_char(self.norm_pair(), k).unwrap()),
            _ => None,
        };
        (self.a(), extra, self.signs.clone(), self.depth_zero, self.xi)
    }
}

/// Whether two simple data define isomorphic representations.
pub fn simple_equiv(d1: &SimpleSupercuspidalDatum, d2: &SimpleSupercuspidalDatum) -> Result<bool> {
    if d1.family != d2.family || d1.n != d2.n || d1.field != d2.field {
        return Err(Error::FamilyMismatch(format!("{} vs {}", d1.family, d2.family)));
    }
    Ok(d1.invariant() == d2.invariant())
}

fn two_pow(k: &ResidueField, e: i64) -> Elt {
    k.pow(k.from_int(2), e).expect("2 is a unit")
}

/// The epipelagic stratum equivalent to a simple datum.
pub fn reduce_to_stratum(d: &SimpleSupercuspidalDatum) -> Result<(GroupSpec, EpipelagicStratum)> {
    d.check()?;
    let k = &d.field;
    let a = d.a();
    let n = d.rank() as i64;
    let big_n = d.n;
    let g = GroupSpec::new(d.family, big_n, k.clone(), Variant::Plus)?;
    let sgn = |e: i64| if e.rem_euclid(2) == 0 { k.one() } else { k.from_int(-1) };
    let mut s = EpipelagicStratum { omega_signs: d.signs.clone(), ..Default::default() };
    match d.family {
        Family::SoOdd => {
            let u = k.mul(a, two_pow(k, -(2 * n - 1)));
            s.components = vec![StratumComponent::new(big_n - 1, u), StratumComponent::null(1)];
        }
        Family::Sp => {
            let u = k.mul(a, two_pow(k, -(2 * n - 2)));
            s.components = vec![StratumComponent::new(big_n, u)];
        }
        Family::SoEvenRam => {
            let u = k.mul(k.mul(sgn(n - 1), k.mul(a, a)), two_pow(k, -2 * n));
            s.components = vec![StratumComponent::new(big_n, u)];
        }
        Family::SoEvenSplit | Family::SoEvenUnram => {
            let u = k.mul(k.mul(sgn(n), a), two_pow(k, -(2 * n - 4 + g.u_g() as i64)));
            s.components = vec![StratumComponent::new(big_n - 2, u), StratumComponent::null(2)];
        }
        Family::URamOdd => {
            let u = k.mul(a, two_pow(k, -(big_n as i64 - 1)));
            s.components = vec![StratumComponent::new(big_n, u)];
        }
        Family::URamEven => {
            let u = k.mul(a, two_pow(k, -(2 * n - 1)));
            s.components = vec![StratumComponent::new(big_n - 1, u), StratumComponent::null(1)];
        }
        Family::UUnramOdd | Family::UUnramEven => {
            let u = k.mul(a, two_pow(k, -(big_n as i64)));
            s.components = vec![StratumComponent::new(big_n, u)];
            s.depth_zero = d.depth_zero;
        }
        Family::Gl => {
            let u = k.mul(a, two_pow(k, -(big_n as i64)));
            s.components = vec![StratumComponent::new(big_n, u)];
            s.depth_zero = d.depth_zero;
            s.xi = d.xi;
        }
    }
    ensure_valid(&g, &s)?;
    Ok((g, s))
}

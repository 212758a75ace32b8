//! Square classes of F^x, tame Hilbert symbols, Hasse-Witt invariants and
//! the representative Hermitian matrices of each pure inner form.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::monomial::{Involution, LocalEntry, Monomial};
use crate::residue_field::{quad_char, ResidueField};

/// Group families, with the ramification of `F/F_0` folded in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    SoOdd,
    Sp,
    SoEvenSplit,
    SoEvenUnram,
    SoEvenRam,
    UUnramOdd,
    UUnramEven,
    URamOdd,
    URamEven,
    Gl,
}

impl Family {
    pub const ALL: [Family; 10] = [
        Family::SoOdd,
        Family::Sp,
        Family::SoEvenSplit,
        Family::SoEvenUnram,
        Family::SoEvenRam,
        Family::UUnramOdd,
        Family::UUnramEven,
        Family::URamOdd,
        Family::URamEven,
        Family::Gl,
    ];

    pub fn is_orthogonal(self) -> bool {
        matches!(self, Family::SoOdd | Family::SoEvenSplit | Family::SoEvenUnram | Family::SoEvenRam)
    }
    pub fn is_so_even(self) -> bool {
        matches!(self, Family::SoEvenSplit | Family::SoEvenUnram | Family::SoEvenRam)
    }
    pub fn is_unitary(self) -> bool {
        matches!(self, Family::UUnramOdd | Family::UUnramEven | Family::URamOdd | Family::URamEven)
    }
    pub fn is_ram_unitary(self) -> bool {
        matches!(self, Family::URamOdd | Family::URamEven)
    }
    pub fn is_unram_unitary(self) -> bool {
        matches!(self, Family::UUnramOdd | Family::UUnramEven)
    }

    /// Conjugation on matrix entries for this family.
    pub fn involution(self) -> Involution {
        match self {
            Family::URamOdd | Family::URamEven => Involution { frob: false, pi_sign: -1 },
            Family::UUnramOdd | Family::UUnramEven => Involution { frob: true, pi_sign: 1 },
            _ => Involution::TRIVIAL,
        }
    }

    /// Sign `eps` in `t(conj H) = eps H` for the representative matrices.
    pub fn epsilon(self) -> i8 {
        match self {
            Family::Sp | Family::URamEven => -1,
            _ => 1,
        }
    }

    /// Whether `n` is an admissible dimension.
    pub fn admits_dim(self, n: usize) -> bool {
        match self {
            Family::SoOdd | Family::UUnramOdd | Family::URamOdd => n % 2 == 1,
            Family::Sp | Family::SoEvenSplit | Family::SoEvenUnram | Family::SoEvenRam => n >= 2 && n % 2 == 0,
            Family::UUnramEven | Family::URamEven => n >= 2 && n % 2 == 0,
            Family::Gl => n >= 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::SoOdd => "so_odd",
            Family::Sp => "sp",
            Family::SoEvenSplit => "so_even_split",
            Family::SoEvenUnram => "so_even_unram",
            Family::SoEvenRam => "so_even_ram",
            Family::UUnramOdd => "u_unram_odd",
            Family::UUnramEven => "u_unram_even",
            Family::URamOdd => "u_ram_odd",
            Family::URamEven => "u_ram_even",
            Family::Gl => "gl",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, Default)]
pub enum Variant {
    #[default]
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Variant {
    pub fn from_sign(s: i8) -> Variant {
        if s > 0 {
            Variant::Plus
        } else {
            Variant::Minus
        }
    }
    pub fn sign(self) -> i8 {
        match self {
            Variant::Plus => 1,
            Variant::Minus => -1,
        }
    }
    pub fn flip(self) -> Variant {
        Variant::from_sign(-self.sign())
    }
}

/// An element of `F^x / F^x2`, written `zeta^a pi^b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SquareClass {
    pub zeta: bool,
    pub pi: bool,
}

impl SquareClass {
    pub const ONE: SquareClass = SquareClass { zeta: false, pi: false };
    pub const ZETA: SquareClass = SquareClass { zeta: true, pi: false };
    pub const PI: SquareClass = SquareClass { zeta: false, pi: true };
    pub const ZETA_PI: SquareClass = SquareClass { zeta: true, pi: true };
    pub const ALL: [SquareClass; 4] = [Self::ONE, Self::ZETA, Self::PI, Self::ZETA_PI];

    pub fn of(e: LocalEntry, k: &ResidueField) -> SquareClass {
        SquareClass { zeta: !k.is_square(e.unit), pi: e.val.rem_euclid(2) == 1 }
    }
    pub fn mul(self, o: SquareClass) -> SquareClass {
        SquareClass { zeta: self.zeta ^ o.zeta, pi: self.pi ^ o.pi }
    }
    /// `quad_char` of the unit part.
    pub fn unit_char(self) -> i8 {
        if self.zeta {
            -1
        } else {
            1
        }
    }
    /// A representative `zeta^a pi^b`.
    pub fn representative(self, k: &ResidueField) -> LocalEntry {
        LocalEntry::new(if self.zeta { k.zeta() } else { k.one() }, self.pi as i32)
    }
}

impl fmt::Display for SquareClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match (self.zeta, self.pi) {
            (false, false) => "1",
            (true, false) => "zeta",
            (false, true) => "pi",
            (true, true) => "zeta*pi",
        };
        f.write_str(s)
    }
}

/// The tame Hilbert symbol:
/// `(u1 pi^a, u2 pi^b) = chi(-1)^(ab) chi(u1)^b chi(u2)^a`.
pub fn hilbert(a: SquareClass, b: SquareClass, field: &ResidueField) -> i8 {
    let mut s = 1;
    if a.pi && b.pi {
        s *= field.chi_m1();
    }
    if b.pi {
        s *= a.unit_char();
    }
    if a.pi {
        s *= b.unit_char();
    }
    s
}

/// `prod_{i<j} (d_i, d_j)`; the empty and one-term products are `+1`.
pub fn hasse_witt(diag: &[SquareClass], field: &ResidueField) -> i8 {
    let mut s = 1;
    for i in 0..diag.len() {
        for j in i + 1..diag.len() {
            s *= hilbert(diag[i], diag[j], field);
        }
    }
    s
}

/// `+1` labels the quasi-split representative.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct InnerFormLabel(pub i8);

impl InnerFormLabel {
    pub const PLUS: InnerFormLabel = InnerFormLabel(1);
    pub const MINUS: InnerFormLabel = InnerFormLabel(-1);
}

/// Which Hermitian space of a family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HermitianRep {
    pub family: Family,
    pub dim: usize,
    pub variant: Variant,
    /// Discriminant class for ramified even orthogonal groups: the center
    /// block is `diag(-d, 1)`, default `d = pi`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub discriminant: Option<SquareClass>,
}

impl HermitianRep {
    pub fn new(family: Family, dim: usize, variant: Variant) -> Self {
        HermitianRep { family, dim, variant, discriminant: None }
    }
    pub fn plus(self) -> Self {
        HermitianRep { variant: Variant::Plus, ..self }
    }
}

fn alternating_antidiag(n: usize, k: &ResidueField) -> Vec<(usize, usize, LocalEntry)> {
    (0..n).map(|r| (r, n - 1 - r, LocalEntry::int(k, if r % 2 == 0 { 1 } else { -1 }))).collect()
}

fn replace_middle(
    entries: Vec<(usize, usize, LocalEntry)>,
    rows: std::ops::Range<usize>,
    diag: &[LocalEntry],
) -> Vec<(usize, usize, LocalEntry)> {
    let mut out: Vec<_> = entries.into_iter().filter(|(r, _, _)| !rows.contains(r)).collect();
    for (r, e) in rows.zip(diag) {
        out.push((r, r, *e));
    }
    out
}

/// The representative matrix of a Hermitian space.
pub fn hermitian_matrix(rep: &HermitianRep, k: &ResidueField) -> Result<Monomial> {
    let n = rep.dim;
    if !rep.family.admits_dim(n) {
        return Err(Error::Unsupported(format!("{} in dimension {n}", rep.family)));
    }
    let one = LocalEntry::one(k);
    let z = k.zeta();
    let minus = rep.variant == Variant::Minus;
    let pi = LocalEntry::new(k.one(), 1);
    let entries = match rep.family {
        Family::Gl => return Err(Error::Unsupported("general linear groups carry no form".into())),
        Family::Sp => {
            if minus {
                return Err(Error::Unsupported("symplectic groups have no non-trivial inner form".into()));
            }
            alternating_antidiag(n, k)
        }
        Family::SoOdd => {
            let base = alternating_antidiag(n, k);
            if minus {
                if n < 3 {
                    return Err(Error::Unsupported("SO_1 has one form".into()));
                }
                let h = n / 2;
                let sign = if h % 2 == 0 { 1 } else { -1 };
                replace_middle(
                    base,
                    h - 1..h + 2,
                    &[pi, LocalEntry::new(k.neg(z), 1), LocalEntry::unit(k.mul(z, k.from_int(sign)))],
                )
            } else {
                base
            }
        }
        Family::SoEvenSplit => {
            let base: Vec<_> = (0..n).map(|r| (r, n - 1 - r, one)).collect();
            if minus {
                if n < 4 {
                    return Err(Error::Unsupported("split SO_2 has one form".into()));
                }
                let h = n / 2;
                replace_middle(
                    base,
                    h - 2..h + 2,
                    &[one, LocalEntry::unit(k.neg(z)), LocalEntry::new(k.from_int(-1), 1), LocalEntry::new(z, 1)],
                )
            } else {
                base
            }
        }
        Family::SoEvenUnram | Family::SoEvenRam => {
            let h = n / 2;
            let base: Vec<_> = (0..n).map(|r| (r, n - 1 - r, one)).collect();
            let center = if rep.family == Family::SoEvenUnram {
                let s = if minus { pi } else { one };
                [LocalEntry::unit(k.neg(z)).mul(s, k), s]
            } else {
                let d = rep.discriminant.unwrap_or(SquareClass::PI);
                if !d.pi {
                    return Err(Error::Unsupported("ramified discriminant must be a uniformizer class".into()));
                }
                let s = if minus { LocalEntry::unit(z) } else { one };
                [d.representative(k).neg(k).mul(s, k), s]
            };
            replace_middle(base, h - 1..h + 1, &center)
        }
        Family::URamOdd => {
            let base = alternating_antidiag(n, k);
            if minus {
                base.into_iter().map(|(r, c, e)| (r, c, e.scale(z, k))).collect()
            } else {
                base
            }
        }
        Family::URamEven => {
            let base = alternating_antidiag(n, k);
            if minus {
                let h = n / 2;
                replace_middle(base, h - 1..h + 1, &[pi, LocalEntry::new(k.neg(z), 1)])
            } else {
                base
            }
        }
        Family::UUnramOdd | Family::UUnramEven => {
            let mut d: Vec<_> = (0..n).map(|r| (r, r, one)).collect();
            if minus {
                d[0].2 = pi;
            }
            d
        }
    };
    let m = Monomial::from_entries(n, &entries)?;
    debug_assert!(m.is_hermitian(rep.family.epsilon(), rep.family.involution(), k));
    Ok(m)
}

/// Discriminant of an orthogonal form, as a square class.
pub fn orthogonal_discriminant(diag: &[LocalEntry], k: &ResidueField) -> SquareClass {
    diag.iter().fold(SquareClass::ONE, |acc, e| acc.mul(SquareClass::of(*e, k)))
}

/// Class of a unitary form in `F_0^x / N(F^x)`, as a sign.
pub fn unitary_class(family: Family, h: &Monomial, k: &ResidueField) -> Result<i8> {
    let det = h.det(k);
    if family.is_unram_unitary() {
        return Ok(if det.val.rem_euclid(2) == 0 { 1 } else { -1 });
    }
    // make the form Hermitian, then use that -pi^2 is a norm
    let det = if h.dim() % 2 == 0 { det.mul(LocalEntry::new(k.one(), h.dim() as i32), k) } else { det };
    if det.val.rem_euclid(2) != 0 {
        return Err(Error::Domain("determinant of a Hermitian form has odd valuation".into()));
    }
    let half = det.val / 2;
    let sign = if half.rem_euclid(2) == 0 { 1 } else { k.chi_m1() };
    Ok(quad_char(det.unit, k)? * sign)
}

/// Label of the form `h` relative to the quasi-split reference `reference`.
pub fn classify_matrix(family: Family, h: &Monomial, reference: &Monomial, k: &ResidueField) -> Result<InnerFormLabel> {
    if h.dim() != reference.dim() {
        return Err(Error::Domain("dimension mismatch".into()));
    }
    match family {
        Family::Sp => Ok(InnerFormLabel::PLUS),
        Family::Gl => Err(Error::Unsupported("general linear groups carry no form".into())),
        f if f.is_orthogonal() => {
            if h.dim() <= 2 {
                return Err(Error::Domain("singleton H^1 for SO_N with N <= 2".into()));
            }
            let d = h.diagonalize_symmetric(k)?;
            let d0 = reference.diagonalize_symmetric(k)?;
            if orthogonal_discriminant(&d, k) != orthogonal_discriminant(&d0, k) {
                return Err(Error::Domain("forms have different discriminants".into()));
            }
            let c: Vec<_> = d.iter().map(|e| SquareClass::of(*e, k)).collect();
            let c0: Vec<_> = d0.iter().map(|e| SquareClass::of(*e, k)).collect();
            Ok(InnerFormLabel(hasse_witt(&c, k) * hasse_witt(&c0, k)))
        }
        f => Ok(InnerFormLabel(unitary_class(f, h, k)? * unitary_class(f, reference, k)?)),
    }
}

pub fn classify_inner_form(rep: &HermitianRep, k: &ResidueField) -> Result<InnerFormLabel> {
    if rep.family == Family::Sp {
        return Ok(InnerFormLabel::PLUS);
    }
    if rep.family.is_orthogonal() && rep.dim <= 2 {
        return Err(Error::Domain("singleton H^1 for SO_N with N <= 2".into()));
    }
    let h = hermitian_matrix(rep, k)?;
    let h0 = hermitian_matrix(&rep.plus(), k)?;
    classify_matrix(rep.family, &h, &h0, k)
}

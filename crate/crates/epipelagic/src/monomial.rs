//! Monomial matrices over a tamely ramified local field, stored to leading
//! order: every entry is `unit * pi^val` with the unit a residue.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::residue_field::{Elt, ResidueField};

/// `unit * pi^val`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct LocalEntry {
    pub unit: Elt,
    pub val: i32,
}

/// The Galois involution acting on matrix entries.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Involution {
    /// Frobenius on residues (unramified quadratic extension).
    pub frob: bool,
    /// `conj(pi) = pi_sign * pi`.
    pub pi_sign: i8,
}

impl Involution {
    pub const TRIVIAL: Involution = Involution { frob: false, pi_sign: 1 };
}

impl LocalEntry {
    pub fn unit(unit: Elt) -> Self {
        LocalEntry { unit, val: 0 }
    }
    pub fn new(unit: Elt, val: i32) -> Self {
        LocalEntry { unit, val }
    }
    pub fn one(k: &ResidueField) -> Self {
        LocalEntry::unit(k.one())
    }
    pub fn int(k: &ResidueField, n: i64) -> Self {
        LocalEntry::unit(k.from_int(n))
    }
    pub fn mul(self, o: LocalEntry, k: &ResidueField) -> Self {
        LocalEntry { unit: k.mul(self.unit, o.unit), val: self.val + o.val }
    }
    pub fn inv(self, k: &ResidueField) -> Self {
        LocalEntry { unit: k.inv(self.unit).expect("entries are units times pi powers"), val: -self.val }
    }
    pub fn div(self, o: LocalEntry, k: &ResidueField) -> Self {
        self.mul(o.inv(k), k)
    }
    pub fn neg(self, k: &ResidueField) -> Self {
        LocalEntry { unit: k.neg(self.unit), val: self.val }
    }
    pub fn scale(self, s: Elt, k: &ResidueField) -> Self {
        LocalEntry { unit: k.mul(self.unit, s), val: self.val }
    }
    pub fn conj(self, inv: Involution, k: &ResidueField) -> Self {
        let mut unit = if inv.frob { k.conj(self.unit) } else { self.unit };
        if inv.pi_sign < 0 && self.val.rem_euclid(2) == 1 {
            unit = k.neg(unit);
        }
        LocalEntry { unit, val: self.val }
    }
}

/// `M e_k = coef[k] e_{perm[k]}`, i.e. the only non-zero entry of column `k`
/// sits in row `perm[k]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Monomial {
    pub perm: Vec<usize>,
    pub coef: Vec<LocalEntry>,
}

pub fn perm_sign(perm: &[usize]) -> i8 {
    let mut seen = vec![false; perm.len()];
    let mut sign = 1;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut k = start;
        while !seen[k] {
            seen[k] = true;
            k = perm[k];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

impl Monomial {
    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    /// Builds a monomial matrix from `(row, col, entry)` triples.
    pub fn from_entries(dim: usize, entries: &[(usize, usize, LocalEntry)]) -> Result<Self> {
        let mut perm = vec![usize::MAX; dim];
        let mut coef = vec![LocalEntry { unit: Elt(0), val: 0 }; dim];
        for &(r, c, e) in entries {
            if r >= dim || c >= dim || perm[c] != usize::MAX {
                return Err(Error::Domain(format!("not a monomial pattern at ({r}, {c})")));
            }
            perm[c] = r;
            coef[c] = e;
        }
        let mut rows: Vec<usize> = perm.clone();
        rows.sort_unstable();
        if rows != (0..dim).collect::<Vec<_>>() {
            return Err(Error::Domain("not a monomial pattern".into()));
        }
        Ok(Monomial { perm, coef })
    }

    /// Row-major `(row, col, entry)` listing.
    pub fn entries(&self) -> Vec<(usize, usize, LocalEntry)> {
        let mut out: Vec<_> = (0..self.dim()).map(|c| (self.perm[c], c, self.coef[c])).collect();
        out.sort_by_key(|&(r, c, _)| (r, c));
        out
    }

    /// The entry in row `r`, column `c`, if non-zero.
    pub fn get(&self, r: usize, c: usize) -> Option<LocalEntry> {
        (self.perm[c] == r).then_some(self.coef[c])
    }

    pub fn mul(&self, o: &Monomial, k: &ResidueField) -> Monomial {
        // (AB) e_k = b_k a_{pi_B k} e_{pi_A pi_B k}
        let dim = self.dim();
        let mut perm = vec![0; dim];
        let mut coef = Vec::with_capacity(dim);
        for c in 0..dim {
            let mid = o.perm[c];
            perm[c] = self.perm[mid];
            coef.push(o.coef[c].mul(self.coef[mid], k));
        }
        Monomial { perm, coef }
    }

    pub fn transpose(&self) -> Monomial {
        let dim = self.dim();
        let mut perm = vec![0; dim];
        let mut coef = self.coef.clone();
        for c in 0..dim {
            perm[self.perm[c]] = c;
            coef[self.perm[c]] = self.coef[c];
        }
        Monomial { perm, coef }
    }

    pub fn conj(&self, inv: Involution, k: &ResidueField) -> Monomial {
        Monomial { perm: self.perm.clone(), coef: self.coef.iter().map(|e| e.conj(inv, k)).collect() }
    }

    pub fn neg(&self, k: &ResidueField) -> Monomial {
        Monomial { perm: self.perm.clone(), coef: self.coef.iter().map(|e| e.neg(k)).collect() }
    }

    pub fn scale(&self, s: LocalEntry, k: &ResidueField) -> Monomial {
        Monomial { perm: self.perm.clone(), coef: self.coef.iter().map(|e| e.mul(s, k)).collect() }
    }

    pub fn det(&self, k: &ResidueField) -> LocalEntry {
        let sign = perm_sign(&self.perm);
        let prod = self.coef.iter().fold(LocalEntry::one(k), |acc, e| acc.mul(*e, k));
        if sign < 0 {
            prod.neg(k)
        } else {
            prod
        }
    }

    /// Whether `t(conj A) = eps * A`.
    pub fn is_hermitian(&self, eps: i8, inv: Involution, k: &ResidueField) -> bool {
        let lhs = self.transpose().conj(inv, k);
        let rhs = if eps < 0 { self.neg(k) } else { self.clone() };
        lhs == rhs
    }

    /// Whether `X` lies in the Lie algebra of the form `H`:
    /// `t(conj X) H + H X = 0`.
    pub fn in_lie_algebra(&self, h: &Monomial, inv: Involution, k: &ResidueField) -> bool {
        let a = self.transpose().conj(inv, k).mul(h, k);
        let b = h.mul(self, k);
        a == b.neg(k)
    }

    /// Diagonal entries of a congruent diagonal form, for a symmetric matrix
    /// whose support is an involution. Off-diagonal pairs `c (xy + yx)` split
    /// as `2c a^2 - 2c b^2`.
    pub fn diagonalize_symmetric(&self, k: &ResidueField) -> Result<Vec<LocalEntry>> {
        let mut out = Vec::with_capacity(self.dim());
        for c in 0..self.dim() {
            let r = self.perm[c];
            if r == c {
                out.push(self.coef[c]);
            } else if c < r {
                if self.perm[r] != c || self.coef[r] != self.coef[c] {
                    return Err(Error::Domain("matrix is not symmetric".into()));
                }
                let two_c = self.coef[c].scale(k.from_int(2), k);
                out.push(two_c);
                out.push(two_c.neg(k));
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_transpose_det() {
        let k = ResidueField::prime(7).unwrap();
        let a = Monomial { perm: vec![1, 2, 0], coef: vec![LocalEntry::int(&k, 2), LocalEntry::int(&k, 3), LocalEntry::new(k.one(), -1)] };
        let id = Monomial { perm: vec![0, 1, 2], coef: vec![LocalEntry::one(&k); 3] };
        assert_eq!(a.mul(&id, &k), a);
        assert_eq!(id.mul(&a, &k), a);
        assert_eq!(a.transpose().transpose(), a);
        // 3-cycle has sign +1
        assert_eq!(a.det(&k), LocalEntry::new(k.from_int(6), -1));
        assert_eq!(a.mul(&a.transpose(), &k).det(&k), a.det(&k).mul(a.det(&k), &k));
        assert_eq!(a.get(1, 0), Some(LocalEntry::int(&k, 2)));
        assert_eq!(a.get(0, 0), None);
    }

    #[test]
    fn hyperbolic_split() {
        let k = ResidueField::prime(5).unwrap();
        let h = Monomial::from_entries(2, &[(0, 1, LocalEntry::one(&k)), (1, 0, LocalEntry::one(&k))]).unwrap();
        let d = h.diagonalize_symmetric(&k).unwrap();
        assert_eq!(d, vec![LocalEntry::int(&k, 2), LocalEntry::int(&k, -2)]);
    }

    #[test]
    fn ramified_conjugation() {
        let k = ResidueField::prime(5).unwrap();
        let inv = Involution { frob: false, pi_sign: -1 };
        let e = LocalEntry::new(k.from_int(2), 1);
        assert_eq!(e.conj(inv, &k), LocalEntry::new(k.from_int(3), 1));
        assert_eq!(LocalEntry::new(k.from_int(2), 2).conj(inv, &k).unit, k.from_int(2));
    }
}

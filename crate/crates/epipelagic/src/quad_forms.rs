//! Quadratic forms over F_q, their Gauss sums, and the trace forms attached
//! to pairs of stratum components.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::monomial::{LocalEntry, Monomial};
use crate::residue_field::{normalize, quad_char, CyclotomicInt, Elt, GaussUnit, ResidueField};
use crate::square_classes::{Family, Variant};
use crate::strata::{t_unit, EpipelagicStratum, GroupSpec};

/// Brute-force sums refuse more than this many points.
pub const BRUTE_BUDGET: u64 = 50_000_000;
pub const BRUTE_MAX_DIM: usize = 8;

/// `q(x) = x^t G x` for a symmetric Gram matrix `G`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadFormFq {
    field: ResidueField,
    gram: Vec<Vec<Elt>>,
}

impl QuadFormFq {
    pub fn new(field: &ResidueField, gram: Vec<Vec<Elt>>) -> Result<Self> {
        let n = gram.len();
        if gram.iter().any(|r| r.len() != n) {
            return Err(Error::Domain("Gram matrix is not square".into()));
        }
        for i in 0..n {
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::Domain("Gram matrix is not symmetric".into()));
                }
            }
        }
        Ok(QuadFormFq { field: field.clone(), gram })
    }

    pub fn diagonal(field: &ResidueField, d: &[Elt]) -> Self {
        let n = d.len();
        let mut gram = vec![vec![Elt(0); n]; n];
        for (i, x) in d.iter().enumerate() {
            gram[i][i] = *x;
        }
        QuadFormFq { field: field.clone(), gram }
    }

    /// Symmetrizes a (not necessarily symmetric) bilinear matrix.
    pub fn from_bilinear(field: &ResidueField, m: &[Vec<Elt>]) -> Result<Self> {
        let k = field;
        let half = k.inv(k.from_int(2))?;
        let n = m.len();
        let gram = (0..n)
            .map(|a| (0..n).map(|b| k.mul(half, k.add(m[a][b], m[b][a]))).collect())
            .collect();
        QuadFormFq::new(field, gram)
    }

    pub fn dim(&self) -> usize {
        self.gram.len()
    }
    pub fn field(&self) -> &ResidueField {
        &self.field
    }
    pub fn gram(&self) -> &[Vec<Elt>] {
        &self.gram
    }
    /// Gram entries as integers `a0 + a1 p`.
    pub fn gram_ints(&self) -> Vec<Vec<u32>> {
        self.gram.iter().map(|r| r.iter().map(|x| x.0).collect()).collect()
    }

    pub fn value(&self, x: &[Elt]) -> Elt {
        let k = &self.field;
        let mut acc = k.zero();
        for (i, xi) in x.iter().enumerate() {
            for (j, xj) in x.iter().enumerate() {
                acc = k.add(acc, k.mul(*xi, k.mul(self.gram[i][j], *xj)));
            }
        }
        acc
    }

    pub fn orthogonal_sum(&self, o: &QuadFormFq) -> QuadFormFq {
        let (a, b) = (self.dim(), o.dim());
        let mut gram = vec![vec![Elt(0); a + b]; a + b];
        for i in 0..a {
            gram[i][..a].copy_from_slice(&self.gram[i]);
        }
        for i in 0..b {
            gram[a + i][a..].copy_from_slice(&o.gram[i]);
        }
        QuadFormFq { field: self.field.clone(), gram }
    }

    pub fn scale(&self, c: Elt) -> QuadFormFq {
        let k = &self.field;
        QuadFormFq { field: k.clone(), gram: self.gram.iter().map(|r| r.iter().map(|x| k.mul(*x, c)).collect()).collect() }
    }

    /// Congruence diagonalization: the non-zero diagonal entries and the
    /// dimension of the radical.
    pub fn diagonalize(&self) -> (Vec<Elt>, usize) {
        let k = &self.field;
        let n = self.dim();
        let mut a = self.gram.clone();
        let mut active: Vec<usize> = (0..n).collect();
        let mut diag = Vec::new();
        // e_r -> e_r + f e_i
        let shear = |a: &mut Vec<Vec<Elt>>, r: usize, i: usize, f: Elt| {
            for c in 0..n {
                let v = k.mul(f, a[i][c]);
                a[r][c] = k.add(a[r][c], v);
            }
            for c in 0..n {
                let v = k.mul(f, a[c][i]);
                a[c][r] = k.add(a[c][r], v);
            }
        };
        while !active.is_empty() {
            let pivot = match active.iter().position(|&i| a[i][i].0 != 0) {
                Some(p) => p,
                None => {
                    let pair = active
                        .iter()
                        .enumerate()
                        .find_map(|(pi, &i)| active.iter().find(|&&j| j != i && a[i][j].0 != 0).map(|&j| (pi, i, j)));
                    match pair {
                        Some((pi, i, j)) => {
                            shear(&mut a, i, j, k.one());
                            pi
                        }
                        None => break,
                    }
                }
            };
            let i = active.remove(pivot);
            let d = a[i][i];
            let dinv = k.inv(d).unwrap();
            for &r in &active {
                if a[r][i].0 != 0 {
                    let f = k.neg(k.mul(a[r][i], dinv));
                    shear(&mut a, r, i, f);
                }
            }
            diag.push(d);
        }
        let rad = active.len();
        (diag, rad)
    }

    pub fn is_degenerate(&self) -> bool {
        self.diagonalize().1 > 0
    }

    /// Determinant of the Gram matrix.
    pub fn det(&self) -> Elt {
        let k = &self.field;
        let (d, rad) = self.diagonalize();
        if rad > 0 {
            return k.zero();
        }
        d.iter().fold(k.one(), |acc, x| k.mul(acc, *x))
    }
}

/// The non-degenerate form induced on `V / rad`.
pub fn radical_quotient(form: &QuadFormFq) -> QuadFormFq {
    let (d, _) = form.diagonalize();
    QuadFormFq::diagonal(form.field(), &d)
}

/// `quad_char(det)` of a non-degenerate form.
pub fn discriminant(form: &QuadFormFq) -> Result<i8> {
    let (d, rad) = form.diagonalize();
    if rad > 0 {
        return Err(Error::Degenerate);
    }
    let k = form.field();
    Ok(d.iter().map(|x| quad_char(*x, k).unwrap()).product())
}

/// `chi(det) n_psi^dim`.
pub fn gauss_closed(form: &QuadFormFq) -> Result<GaussUnit> {
    let disc = discriminant(form)?;
    let k = form.field();
    Ok(GaussUnit::NPSI.pow(form.dim() as u32, k.chi_m1()).times_sign(disc))
}

/// The raw sum `sum_X psi(q(X))` in Z[zeta_p].
pub fn brute_raw(form: &QuadFormFq) -> Result<CyclotomicInt> {
    let k = form.field();
    let n = form.dim();
    let q = k.q() as u64;
    if n > BRUTE_MAX_DIM || q.checked_pow(n as u32).map_or(true, |c| c > BRUTE_BUDGET) {
        return Err(Error::OverBudget(format!("{q}^{n} points")));
    }
    let p = k.p() as usize;
    let two = k.from_int(2);
    let diag: Vec<Elt> = (0..n).map(|i| form.gram[i][i]).collect();
    // off[i][j] = 2 G[i][j] for j < i
    let off: Vec<Vec<Elt>> = (0..n).map(|i| (0..i).map(|j| k.mul(two, form.gram[i][j])).collect()).collect();
    let mut counts = vec![0i64; p];
    let mut x = vec![Elt(0); n];
    fn rec(
        depth: usize,
        acc: Elt,
        x: &mut Vec<Elt>,
        k: &ResidueField,
        diag: &[Elt],
        off: &[Vec<Elt>],
        counts: &mut [i64],
    ) {
        if depth == x.len() {
            counts[k.trace(acc) as usize] += 1;
            return;
        }
        let lin = (0..depth).fold(k.zero(), |s, j| k.add(s, k.mul(off[depth][j], x[j])));
        for v in k.elements() {
            x[depth] = v;
            let term = k.mul(v, k.add(k.mul(diag[depth], v), lin));
            rec(depth + 1, k.add(acc, term), x, k, diag, off, counts);
        }
    }
    rec(0, k.zero(), &mut x, k, &diag, &off, &mut counts);
    Ok(CyclotomicInt::from_full(k.p(), &counts))
}

/// Brute-force normalized Gauss sum of a non-degenerate form.
pub fn gauss_brute(form: &QuadFormFq) -> Result<GaussUnit> {
    if form.is_degenerate() {
        return Err(Error::Degenerate);
    }
    let raw = brute_raw(form)?;
    normalize(&raw, form.dim(), form.field())
        .ok_or_else(|| Error::Domain(format!("sum {raw} is not a normalized Gauss value")))
}

/// A slot of the stratum: a component index, or the index `o`.
///
/// For symplectic groups `o` is the virtual one-dimensional completion; for
/// other families it is the null component.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Slot {
    Comp(usize),
    O,
}

#[derive(Clone, Copy, Debug)]
pub struct TraceFormSpec<'a> {
    pub group: &'a GroupSpec,
    pub stratum: &'a EpipelagicStratum,
    pub i: Slot,
    pub j: Slot,
}

/// Explicit matrices of one non-null component:
/// `beta e_k = c_k e_{sigma(k)}`, `H e_k = h_k e_{tau(k)}`.
#[derive(Clone, Debug)]
pub struct BlockModel {
    pub degree: usize,
    pub unit: Elt,
    pub delta: Elt,
    pub beta: Monomial,
    pub h: Monomial,
}

impl BlockModel {
    pub fn sigma(&self) -> &[usize] {
        &self.beta.perm
    }
    pub fn tau(&self) -> &[usize] {
        &self.h.perm
    }
}

fn delta_of(k: &ResidueField, c: Variant) -> Elt {
    match c {
        Variant::Plus => k.one(),
        Variant::Minus => k.zeta(),
    }
}

/// Block matrices for the symplectic, orthogonal and ramified unitary families.
pub fn block_model(g: &GroupSpec, s: &EpipelagicStratum, i: usize) -> Result<BlockModel> {
    let k = &g.field;
    let comp = s.components.get(i).ok_or_else(|| Error::Domain(format!("no component {i}")))?;
    let u = comp.unit.ok_or_else(|| Error::Domain(format!("component {i} is null")))?;
    let d = comp.degree;
    let delta = delta_of(k, comp.form_choice);
    let one = LocalEntry::one(k);
    let top = LocalEntry::new(u, -1);
    let cyclic = |d: usize| -> Vec<usize> { (0..d).map(|x| (x + 1) % d).collect() };
    let (beta, h) = match g.family {
        Family::Sp => {
            let mut coef = vec![one; d];
            coef[d - 1] = top;
            let beta = Monomial { perm: cyclic(d), coef };
            let entries: Vec<_> =
                (0..d).map(|r| (r, d - 1 - r, LocalEntry::unit(k.mul(delta, k.from_int(if r % 2 == 0 { 1 } else { -1 }))))).collect();
            (beta, Monomial::from_entries(d, &entries)?)
        }
        Family::SoOdd | Family::SoEvenSplit | Family::SoEvenUnram | Family::SoEvenRam => {
            let e = d / 2;
            let w = LocalEntry::new(t_unit(k, d, u), 1);
            let wd = w.scale(delta, k);
            let mut entries = Vec::with_capacity(d);
            for r in 0..d {
                if r + 1 == e {
                    entries.push((r, r, wd.neg(k)));
                } else if r == e {
                    entries.push((r, r, LocalEntry::unit(delta)));
                } else {
                    entries.push((r, d - 1 - r, one));
                }
            }
            let h = Monomial::from_entries(d, &entries)?;
            let order: Vec<usize> = (0..e).chain(e + 1..d).chain(std::iter::once(e)).collect();
            let mut perm = vec![0; d];
            for (idx, &x) in order.iter().enumerate() {
                perm[x] = order[(idx + 1) % d];
            }
            let m1 = LocalEntry::int(k, -1);
            let coef: Vec<LocalEntry> = if e == 1 {
                vec![one, w.inv(k)]
            } else {
                (0..d)
                    .map(|x| {
                        if x + 2 < e {
                            m1
                        } else if x + 2 == e {
                            wd.inv(k)
                        } else if x + 1 == e {
                            one
                        } else if x == e {
                            LocalEntry::unit(k.neg(delta))
                        } else {
                            one
                        }
                    })
                    .collect()
            };
            (Monomial { perm, coef }, h)
        }
        Family::URamOdd | Family::URamEven => {
            let mut coef = vec![one; d];
            coef[d - 1] = top;
            let beta = Monomial { perm: cyclic(d), coef };
            let val = (g.n % 2 == 0) as i32;
            let entries: Vec<_> = (0..d)
                .map(|r| (r, d - 1 - r, LocalEntry::new(k.mul(delta, k.from_int(if r % 2 == 0 { 1 } else { -1 })), val)))
                .collect();
            (beta, Monomial::from_entries(d, &entries)?)
        }
        f => return Err(Error::Unsupported(format!("no block realization for {f}"))),
    };
    Ok(BlockModel { degree: d, unit: u, delta, beta, h })
}

/// `gamma_j = 1 - det(beta_j) / det(beta_i)` as a residue.
pub fn gamma(g: &GroupSpec, s: &EpipelagicStratum, i: usize, j: usize) -> Result<Elt> {
    let k = &g.field;
    let bi = block_model(g, s, i)?.beta.det(k);
    let bj = block_model(g, s, j)?.beta.det(k);
    let r = bj.div(bi, k);
    if r.val != 0 {
        return Err(Error::Domain("components of different degree".into()));
    }
    let gam = k.sub(k.one(), r.unit);
    if gam.0 == 0 {
        return Err(Error::Stratum(vec![crate::error::Violation::new(
            "semisimple",
            format!("components {i} and {j} have equal leading units"),
        )]));
    }
    Ok(gam)
}

/// `theta_j = det(H_j) / det(H_i)` as a residue.
pub fn theta(g: &GroupSpec, s: &EpipelagicStratum, i: usize, j: usize) -> Result<Elt> {
    let k = &g.field;
    let hi = block_model(g, s, i)?.h.det(k);
    let hj = block_model(g, s, j)?.h.det(k);
    let r = hj.div(hi, k);
    if r.val != 0 {
        return Err(Error::Domain("blocks of different valuation".into()));
    }
    Ok(r.unit)
}

/// The factor `c` with `disc(q_{ij}) = c * gamma_j * theta_j` for two blocks
/// of the same degree.
pub fn cross_factor(family: Family, degree: usize, k: &ResidueField) -> Elt {
    let e = degree / 2;
    let sgn = |x: usize| k.from_int(if x % 2 == 0 { 1 } else { -1 });
    match family {
        Family::Sp => sgn(e),
        Family::URamOdd | Family::URamEven => k.mul(k.from_int(-2), sgn(e)),
        _ => sgn(e + 1),
    }
}

fn bilinear_gram(k: &ResidueField, dim: usize, f: impl Fn(usize, usize) -> Elt) -> Result<QuadFormFq> {
    let m: Vec<Vec<Elt>> = (0..dim).map(|a| (0..dim).map(|b| f(a, b)).collect()).collect();
    QuadFormFq::from_bilinear(k, &m)
}

fn trace_form_diagonal(g: &GroupSpec, s: &EpipelagicStratum, i: usize, j: usize) -> Result<QuadFormFq> {
    let k = &g.field;
    let bi = block_model(g, s, i)?;
    let bj = block_model(g, s, j)?;
    if bi.degree != bj.degree || bi.sigma() != bj.sigma() || bi.tau() != bj.tau() {
        return Err(Error::Unsupported("trace form between blocks of different shape".into()));
    }
    if i != j {
        gamma(g, s, i, j)?;
    }
    let d = bi.degree;
    let sigma = bi.sigma().to_vec();
    let tau = bi.tau().to_vec();
    let mut r = Vec::with_capacity(d);
    let mut sc = Vec::with_capacity(d);
    for x in 0..d {
        let rx = bj.beta.coef[x].div(bi.beta.coef[x], k);
        let sx = bi.h.coef[x].div(bj.h.coef[x], k);
        if rx.val != 0 || sx.val != 0 {
            return Err(Error::Domain("non-unit ratio between blocks".into()));
        }
        r.push(rx.unit);
        sc.push(sx.unit);
    }
    let minus_half = k.neg(k.inv(k.from_int(2))?);
    // -1/2 sum_k (x_k - r_k x_{sigma k}) s_k y_{tau k}
    let mut m = vec![vec![k.zero(); d]; d];
    for x in 0..d {
        let c = k.mul(minus_half, sc[x]);
        m[x][tau[x]] = k.add(m[x][tau[x]], c);
        let c2 = k.neg(k.mul(c, r[x]));
        m[sigma[x]][tau[x]] = k.add(m[sigma[x]][tau[x]], c2);
    }
    QuadFormFq::from_bilinear(k, &m)
}

fn trace_form_unram_unitary(g: &GroupSpec, s: &EpipelagicStratum) -> Result<QuadFormFq> {
    let k = &g.field;
    let base = g.base_field();
    let d = s.components[0].degree;
    let sigma: Vec<usize> = (0..d).map(|x| (x + 1) % d).collect();
    let minus_half = k.neg(k.inv(k.from_int(2))?);
    let basis = |a: usize| -> (usize, Elt) { (a / 2, if a % 2 == 0 { k.one() } else { k.from_parts(0, 1) }) };
    // Tr(-1/2 sum_k (x_k - x_{sigma k}) conj(y_k)) on F_p coordinates
    bilinear_gram(&base, 2 * d, |a, b| {
        let (ka, va) = basis(a);
        let (kb, vb) = basis(b);
        let mut acc = k.zero();
        for x in 0..d {
            let xk = if ka == x { va } else { k.zero() };
            let xs = if ka == sigma[x] { va } else { k.zero() };
            let yk = if kb == x { k.conj(vb) } else { k.zero() };
            acc = k.add(acc, k.mul(k.sub(xk, xs), yk));
        }
        base.from_int(k.trace(k.mul(minus_half, acc)) as i64)
    })
}

fn product_t(g: &GroupSpec, s: &EpipelagicStratum) -> Result<Elt> {
    let k = &g.field;
    s.nonnull().iter().try_fold(k.one(), |acc, &j| Ok(k.mul(acc, t_unit(k, s.components[j].degree, s.unit(j)?))))
}

/// Unit of the null block's form for orthogonal groups, with its valuations.
fn null_block(g: &GroupSpec, s: &EpipelagicStratum) -> Result<Vec<LocalEntry>> {
    let k = &g.field;
    let o = s.null_index().ok_or_else(|| Error::Domain("stratum has no null component".into()))?;
    let delta_o = delta_of(k, s.components[o].form_choice);
    let pt = product_t(g, s)?;
    Ok(match g.family {
        Family::SoOdd => {
            let m = s.nonnull().len() as i32;
            vec![LocalEntry::new(pt, m % 2)]
        }
        Family::SoEvenSplit | Family::SoEvenUnram | Family::SoEvenRam => {
            let so = if g.family == Family::SoEvenUnram { k.mul(k.zeta(), pt) } else { pt };
            vec![LocalEntry::new(k.neg(k.mul(delta_o, so)), 1), LocalEntry::unit(delta_o)]
        }
        Family::URamOdd | Family::URamEven => vec![LocalEntry::new(delta_o, (g.n % 2 == 0) as i32)],
        f => return Err(Error::Unsupported(format!("{f} has no null block"))),
    })
}

/// `H_o` of the null component, as a diagonal.
pub fn null_hermitian(g: &GroupSpec, s: &EpipelagicStratum) -> Result<Vec<LocalEntry>> {
    null_block(g, s)
}

fn trace_form_to_null(g: &GroupSpec, s: &EpipelagicStratum, i: usize) -> Result<QuadFormFq> {
    let k = &g.field;
    let bi = block_model(g, s, i)?;
    let ho = null_block(g, s)?;
    let minus_half = k.neg(k.inv(k.from_int(2))?);
    let e = bi.degree / 2;
    let center = |val: i32| -> Result<Elt> {
        // central entries of H_i: row e-1 carries pi, row e is a unit
        let row = if val == 1 { e - 1 } else { e };
        bi.h.get(row, row).map(|x| x.unit).ok_or_else(|| Error::Domain("block has no central entry".into()))
    };
    match g.family {
        Family::SoOdd => {
            let c = k.mul(minus_half, k.div(center(ho[0].val)?, ho[0].unit)?);
            Ok(QuadFormFq::diagonal(k, &[c]))
        }
        Family::SoEvenSplit | Family::SoEvenUnram | Family::SoEvenRam => {
            let cx = k.mul(minus_half, k.div(center(1)?, ho[0].unit)?);
            let cy = k.mul(minus_half, k.div(center(0)?, ho[1].unit)?);
            Ok(QuadFormFq::diagonal(k, &[cx, cy]))
        }
        Family::URamOdd | Family::URamEven => {
            let c = k.neg(k.div(bi.delta, ho[0].unit)?);
            Ok(QuadFormFq::diagonal(k, &[c]))
        }
        f => Err(Error::Unsupported(format!("{f} has no null block"))),
    }
}

fn trace_form_from_o(g: &GroupSpec, s: &EpipelagicStratum, j: usize) -> Result<QuadFormFq> {
    let k = &g.field;
    let bj = block_model(g, s, j)?;
    // unit of pi * det(beta_j)
    let det = bj.beta.det(k);
    debug_assert_eq!(det.val, -1);
    let c = match g.family {
        Family::Sp => k.neg(bj.unit),
        Family::URamOdd | Family::URamEven => bj.unit,
        f => return Err(Error::Unsupported(format!("no form from o for {f}"))),
    };
    Ok(QuadFormFq::diagonal(k, &[c]))
}

/// The trace form `h_{z,s,j}` between slots `i` and `j`, before any radical
/// is removed.
pub fn build_trace_form(spec: &TraceFormSpec) -> Result<QuadFormFq> {
    let (g, s) = (spec.group, spec.stratum);
    let is_null = |x: usize| s.components.get(x).map_or(true, |c| c.null);
    if g.family == Family::Gl {
        return Err(Error::Unsupported("general linear groups have no trace forms".into()));
    }
    if g.family.is_unram_unitary() {
        return match (spec.i, spec.j) {
            (Slot::Comp(0), Slot::Comp(0)) if s.components.len() == 1 => trace_form_unram_unitary(g, s),
            _ => Err(Error::Unsupported("unramified unitary strata have one component".into())),
        };
    }
    match (spec.i, spec.j) {
        (Slot::Comp(i), Slot::Comp(j)) => {
            if is_null(i) || is_null(j) {
                if is_null(i) && !is_null(j) && s.null_index() == Some(i) {
                    return build_trace_form(&TraceFormSpec { i: Slot::O, ..*spec });
                }
                if is_null(j) && !is_null(i) && s.null_index() == Some(j) {
                    return build_trace_form(&TraceFormSpec { j: Slot::O, ..*spec });
                }
                return Err(Error::Domain("slot index out of range".into()));
            }
            trace_form_diagonal(g, s, i, j)
        }
        (Slot::Comp(i), Slot::O) => {
            if is_null(i) {
                return Err(Error::Domain("i must be non-null".into()));
            }
            trace_form_to_null(g, s, i)
        }
        (Slot::O, Slot::Comp(j)) => {
            if is_null(j) {
                return Err(Error::Domain("j must be non-null".into()));
            }
            if g.family.is_ram_unitary() && s.null_index().is_none() {
                return Err(Error::Domain("stratum has no null component".into()));
            }
            trace_form_from_o(g, s, j)
        }
        (Slot::O, Slot::O) => Err(Error::Domain("no trace form from o to itself".into())),
    }
}

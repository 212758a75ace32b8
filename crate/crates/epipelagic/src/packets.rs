//! L-packets: the embeddings `I_zeta` (and `xi` for even orthogonal groups
//! without a null block) sharing one lift.

use itertools::Itertools;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lift::{cuspidal_support, kappa, CuspidalSupport};
use crate::square_classes::{Family, InnerFormLabel, Variant};
use crate::strata::{
    enumerate_partitions, expected_label, needs_xi, partition_indices, sign_indices, validate_shell, EpipelagicStratum,
    GroupSpec,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PacketMember {
    pub partition: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub xi: Option<i8>,
    pub inner_form: InnerFormLabel,
    /// `lambda(omega_i)` of the member's type.
    pub omega_signs: Vec<i8>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Packet {
    pub members: Vec<PacketMember>,
    /// Lift of the L-packet containing the base point.
    pub lift: CuspidalSupport,
    pub cardinality: usize,
    /// For even orthogonal groups without a null block: the lift of each
    /// `xi`-packet.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub xi_lifts: Vec<(i8, CuspidalSupport)>,
}

pub fn inner_form_of(partition: &[usize], family: Family) -> InnerFormLabel {
    expected_label(family, partition.len())
}

fn member_group(g: &GroupSpec, label: InnerFormLabel) -> GroupSpec {
    GroupSpec { variant: Variant::from_sign(label.0), ..g.clone() }
}

/// Signs of the member on `part`: `delta_i kappa_i` on non-null indices with
/// `delta` read off the base point; the sign on the null index is the one
/// reproducing `target`.
fn member_signs(
    g: &GroupSpec,
    base: &EpipelagicStratum,
    part: &[usize],
    target: &CuspidalSupport,
) -> Result<(GroupSpec, EpipelagicStratum)> {
    let gm = member_group(g, inner_form_of(part, g.family));
    let mut m = base.with_partition(part);
    let idx = sign_indices(g, base);
    for (k, &i) in idx.iter().enumerate() {
        if !base.components[i].null {
            let ratio = kappa(g, base, i)? * kappa(&gm, &m, i)?;
            m.omega_signs[k] = base.omega_signs[k] * ratio;
        }
    }
    let free: Vec<usize> = idx.iter().positions(|&i| base.components[i].null).collect();
    let mut found = None;
    let choices: Vec<Vec<i8>> = if free.is_empty() {
        vec![vec![]]
    } else {
        free.iter().map(|_| [1i8, -1]).multi_cartesian_product().collect()
    };
    for choice in choices {
        let mut t = m.clone();
        for (&k, &v) in free.iter().zip(&choice) {
            t.omega_signs[k] = v;
        }
        if &cuspidal_support(&gm, &t)? == target {
            if found.is_some() {
                return Err(Error::Domain(format!("member {part:?} is not determined by its lift")));
            }
            found = Some(t);
        }
    }
    let m = found.ok_or_else(|| Error::Domain(format!("member {part:?} does not reach the packet's lift")))?;
    Ok((gm, m))
}

/// All members of the packet of the base point `I_zeta = {}` on the
/// quasi-split form with signs `signs` (and `xi`).
pub fn enumerate_packet(g: &GroupSpec, s: &EpipelagicStratum, signs: &[i8], xi: Option<i8>) -> Result<Packet> {
    validate_shell(g, s).map_err(Error::Stratum)?;
    let g0 = member_group(g, InnerFormLabel::PLUS);
    let mut base = s.with_partition(&[]);
    base.omega_signs = signs.to_vec();
    base.xi = xi;
    let label = |p: &[usize]| inner_form_of(p, g.family);
    if matches!(g.family, Family::Gl | Family::UUnramOdd | Family::UUnramEven) {
        let lift = cuspidal_support(&g0, &base)?;
        let m = PacketMember { partition: vec![], xi, inner_form: InnerFormLabel::PLUS, omega_signs: signs.to_vec() };
        return Ok(Packet { members: vec![m], lift, cardinality: 1, xi_lifts: vec![] });
    }
    let parts: Vec<Vec<usize>> = partition_indices(g, s).into_iter().powerset().collect();
    debug_assert_eq!(
        parts.len(),
        enumerate_partitions(g, s, InnerFormLabel::PLUS).len() + enumerate_partitions(g, s, InnerFormLabel::MINUS).len()
    );
    // For ramified groups xi negates a coefficient that only enters the
    // blocks through its square, so both copies carry the same data.
    let xis: Vec<Option<i8>> = if needs_xi(g, s) {
        let x = xi.ok_or_else(|| Error::Schema("xi required".into()))?;
        vec![Some(x), Some(-x)]
    } else if g.family == Family::SoEvenRam && s.null_index().is_none() {
        let x = xi.unwrap_or(1);
        vec![Some(x), Some(-x)]
    } else {
        vec![xi]
    };
    let mut members = Vec::new();
    let mut xi_lifts = Vec::new();
    for x in &xis {
        let mut b = base.clone();
        b.xi = *x;
        let target = cuspidal_support(&g0, &b)?;
        for p in &parts {
            let (_, m) = member_signs(&g0, &b, p, &target)?;
            members.push(PacketMember { partition: p.clone(), xi: *x, inner_form: label(p), omega_signs: m.omega_signs });
        }
        if let Some(x) = x.filter(|_| xis.len() == 2) {
            xi_lifts.push((x, target));
        }
    }
    let lift = cuspidal_support(&g0, &base)?;
    Ok(Packet { cardinality: members.len(), members, lift, xi_lifts })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::residue_field::ResidueField;
    use crate::strata::{reduce_to_stratum, SimpleSupercuspidalDatum, StratumComponent};

    fn count(p: &Packet, l: InnerFormLabel) -> usize {
        p.members.iter().filter(|m| m.inner_form == l).count()
    }

    #[test]
    fn inner_forms() {
        assert_eq!(inner_form_of(&[], Family::SoOdd), InnerFormLabel::PLUS);
        assert_eq!(inner_form_of(&[0], Family::SoOdd), InnerFormLabel::MINUS);
        assert_eq!(inner_form_of(&[0, 1], Family::URamEven), InnerFormLabel::PLUS);
        assert_eq!(inner_form_of(&[0], Family::Sp), InnerFormLabel::PLUS);
    }

    #[test]
    fn odd_orthogonal_two_blocks() {
        let k = ResidueField::prime(5).unwrap();
        let g = GroupSpec::new(Family::SoOdd, 5, k.clone(), Variant::Plus).unwrap();
        let s = EpipelagicStratum {
            components: vec![StratumComponent::new(2, k.one()), StratumComponent::new(2, k.from_int(2)), StratumComponent::null(1)],
            omega_signs: vec![1, -1],
            ..Default::default()
        };
        let p = enumerate_packet(&g, &s, &[1, -1], None).unwrap();
        assert_eq!(p.cardinality, 4);
        assert_eq!(count(&p, InnerFormLabel::PLUS), 2);
    }

    #[test]
    fn simple_symplectic() {
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
        let p = enumerate_packet(&g, &s, &s.omega_signs, None).unwrap();
        assert_eq!(p.cardinality, 2);
        assert!(p.members.iter().all(|m| m.inner_form == InnerFormLabel::PLUS));
    }
}

//! JSON input/output for the command-line tool.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::hecke::{closed_coeffs, eigen_product_check};
use crate::lift::{cuspidal_support, lift_character, CuspidalSupport, LiftCharacter, MuTag};
use crate::packets::{enumerate_packet, Packet};
use crate::quad_forms::{discriminant, gauss_brute, gauss_closed, QuadFormFq, Slot};
use crate::residue_field::{Elt, ResidueField};
use crate::square_classes::{Family, Variant};
use crate::strata::{validate_stratum, EpipelagicStratum, GroupSpec, StratumComponent};
use crate::verify::{run_verify, Report, Suite};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_SCHEMA: i32 = 2;
pub const EXIT_STRATUM: i32 = 3;

/// Process exit code for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Stratum(_) => EXIT_STRATUM,
        Error::Schema(_) | Error::InvalidField(_) | Error::OverBudget(_) | Error::UnknownTag(_) | Error::Degenerate => {
            EXIT_SCHEMA
        }
        _ => EXIT_FAILED,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupDoc {
    pub family: Family,
    pub n: usize,
    pub p: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<u32>,
    #[serde(default)]
    pub variant: Variant,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum UnitDoc {
    Int(i64),
    Text(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentDoc {
    pub degree: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit: Option<UnitDoc>,
    #[serde(default)]
    pub null: bool,
    #[serde(default)]
    pub form_choice: Variant,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StratumDoc {
    pub components: Vec<ComponentDoc>,
    #[serde(default)]
    pub omega_signs: Vec<i8>,
    #[serde(default)]
    pub partition: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xi: Option<i8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depth_zero: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputDoc {
    pub group: GroupDoc,
    pub stratum: StratumDoc,
}

fn schema(e: Error) -> Error {
    match e {
        Error::Schema(m) => Error::Schema(m),
        other => Error::Schema(other.to_string()),
    }
}

impl InputDoc {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))
    }

    /// The group and stratum, without validating the stratum.
    pub fn resolve(&self) -> Result<(GroupSpec, EpipelagicStratum)> {
        let gd = &self.group;
        let f = gd.f.unwrap_or(if gd.family.is_unram_unitary() { 2 } else { 1 });
        let k = ResidueField::new(gd.p, f).map_err(|e| Error::Schema(format!("group: {e}")))?;
        let g = GroupSpec::new(gd.family, gd.n, k.clone(), gd.variant).map_err(schema)?;
        let mut comps = Vec::new();
        for (i, c) in self.stratum.components.iter().enumerate() {
            let unit = match (&c.unit, c.null) {
                (None, true) => None,
                (Some(_), true) => {
                    return Err(Error::Schema(format!("stratum.components[{i}]: null components carry no unit")))
                }
                (None, false) => return Err(Error::Schema(format!("stratum.components[{i}].unit: missing"))),
                (Some(u), false) => Some(parse_unit(&k, u).map_err(|e| {
                    Error::Schema(format!("stratum.components[{i}].unit: {}", strip(e)))
                })?),
            };
            comps.push(StratumComponent { degree: c.degree, unit, null: c.null, form_choice: c.form_choice });
        }
        let s = EpipelagicStratum {
            components: comps,
            omega_signs: self.stratum.omega_signs.clone(),
            partition: self.stratum.partition.clone(),
            xi: self.stratum.xi,
            depth_zero: self.stratum.depth_zero,
        };
        Ok((g, s))
    }

    /// Canonical document of a group and stratum; units are written `zeta^k`.
    pub fn echo(g: &GroupSpec, s: &EpipelagicStratum) -> Self {
        let k = &g.field;
        InputDoc {
            group: GroupDoc {
                family: g.family,
                n: g.n,
                p: k.p(),
                f: (k.f() != 1).then_some(k.f()),
                variant: g.variant,
            },
            stratum: StratumDoc {
                components: s
                    .components
                    .iter()
                    .map(|c| ComponentDoc {
                        degree: c.degree,
                        unit: c.unit.map(|u| UnitDoc::Text(k.unit_string(u))),
                        null: c.null,
                        form_choice: c.form_choice,
                    })
                    .collect(),
                omega_signs: s.omega_signs.clone(),
                partition: s.partition.clone(),
                xi: s.xi,
                depth_zero: s.depth_zero,
            },
        }
    }
}

fn strip(e: Error) -> String {
    match e {
        Error::Schema(m) => m,
        other => other.to_string(),
    }
}

fn parse_unit(k: &ResidueField, u: &UnitDoc) -> Result<Elt> {
    match u {
        UnitDoc::Int(n) => k.parse_unit(&n.to_string()),
        UnitDoc::Text(t) => k.parse_unit(t),
    }
}

/// Parses and validates an input document.
pub fn load(text: &str) -> Result<(GroupSpec, EpipelagicStratum)> {
    let (g, s) = InputDoc::parse(text)?.resolve()?;
    validate_stratum(&g, &s).map_err(Error::Stratum)?;
    Ok((g, s))
}

fn mu_tag(t: MuTag) -> &'static str {
    match t {
        MuTag::Trivial => "trivial",
        MuTag::Quadratic => "quadratic",
        MuTag::General => "general",
    }
}

fn character_json(k: &ResidueField, c: &LiftCharacter) -> Value {
    json!({
        "gl_rank": c.gl_rank,
        "param": c.param.map(|u| k.unit_string(u)),
        "mu_restriction": { "tag": mu_tag(c.mu.tag()), "exponent": c.mu.exponent, "modulus": c.mu.modulus },
        "uniformizer_value": { "sign": c.value.sign, "npsi_exponent": c.value.k },
    })
}

/// `pi~(param, character, value)`.
pub fn tuple_notation(k: &ResidueField, c: &LiftCharacter) -> String {
    let ch = match c.mu.tag() {
        MuTag::Trivial => "1".to_string(),
        MuTag::Quadratic => "chi".to_string(),
        MuTag::General => format!("z^{}/{}", c.mu.exponent, c.mu.modulus),
    };
    match c.param {
        Some(u) => format!("pi~({}, {ch}, {})", k.unit_string(u), c.value),
        None => format!("lambda~({ch}, {})", c.value),
    }
}

fn support_json(k: &ResidueField, cs: &CuspidalSupport) -> Value {
    json!({
        "entries": cs.entries.iter().map(|c| character_json(k, c)).collect::<Vec<_>>(),
        "total_rank": cs.total_rank,
    })
}

/// Reducibility points of every non-null component.
fn reducibility_json(g: &GroupSpec, s: &EpipelagicStratum) -> Result<Vec<Value>> {
    if g.family == Family::Gl {
        return Ok(vec![]);
    }
    let mut out = Vec::new();
    for i in s.nonnull() {
        let ch = &lift_character(g, s, Slot::Comp(i))?[0];
        let c = closed_coeffs(g, s, i, ch.mu)?;
        let red = eigen_product_check(&c, ch.value);
        out.push(json!({ "component": i, "s1": red.s1, "s2": red.s2, "set": red.to_string() }));
    }
    Ok(out)
}

pub fn run_lift(text: &str) -> Result<Value> {
    let (g, s) = load(text)?;
    lift_json(&g, &s)
}

pub fn lift_json(g: &GroupSpec, s: &EpipelagicStratum) -> Result<Value> {
    let cs = cuspidal_support(g, s)?;
    let k = g.base_field();
    let mut out = support_json(&k, &cs);
    out["input"] = serde_json::to_value(InputDoc::echo(g, s)).expect("serializable");
    out["reducibility"] = Value::Array(reducibility_json(g, s)?);
    Ok(out)
}

pub fn lift_table(text: &str) -> Result<String> {
    let (g, s) = load(text)?;
    let cs = cuspidal_support(&g, &s)?;
    let k = g.base_field();
    let mut lines = vec![format!("{} N={} p={}: lift to GL_{}", g.family, g.n, k.p(), cs.total_rank)];
    for c in &cs.entries {
        lines.push(format!("  GL_{:<3} {}", c.gl_rank, tuple_notation(&k, c)));
    }
    Ok(lines.join("\n"))
}

fn packet_json(g: &GroupSpec, s: &EpipelagicStratum, pk: &Packet) -> Value {
    let k = g.base_field();
    json!({
        "input": InputDoc::echo(g, s),
        "cardinality": pk.cardinality,
        "members": pk.members,
        "lift": support_json(&k, &pk.lift),
        "xi_lifts": pk.xi_lifts.iter().map(|(x, l)| json!({ "xi": x, "lift": support_json(&k, l) })).collect::<Vec<_>>(),
    })
}

/// The packet of the input's signs and `xi`; its partition is ignored.
pub fn run_packet(text: &str) -> Result<Value> {
    let (g, s) = InputDoc::parse(text)?.resolve()?;
    packet_of(&g, &s)
}

pub fn packet_of(g: &GroupSpec, s: &EpipelagicStratum) -> Result<Value> {
    let pk = enumerate_packet(g, s, &s.omega_signs, s.xi)?;
    Ok(packet_json(g, s, &pk))
}

pub fn packet_table(text: &str) -> Result<String> {
    let (g, s) = InputDoc::parse(text)?.resolve()?;
    let pk = enumerate_packet(&g, &s, &s.omega_signs, s.xi)?;
    let mut lines = vec![format!("{} N={}: {} members", g.family, g.n, pk.cardinality)];
    for m in &pk.members {
        let xi = m.xi.map(|x| format!(" xi={x:+}")).unwrap_or_default();
        lines.push(format!("  I_zeta={:?}{xi} form={:+} signs={:?}", m.partition, m.inner_form.0, m.omega_signs));
    }
    Ok(lines.join("\n"))
}

pub fn run_gauss(p: u32, diag: &[i64]) -> Result<Value> {
    let k = ResidueField::prime(p).map_err(schema)?;
    if diag.is_empty() {
        return Err(Error::Schema("form: at least one entry".into()));
    }
    let d: Vec<Elt> = diag.iter().map(|&x| k.from_int(x)).collect();
    let q = QuadFormFq::diagonal(&k, &d);
    let closed = gauss_closed(&q)?;
    let brute = gauss_brute(&q)?;
    Ok(json!({
        "p": p,
        "form": diag,
        "dim": q.dim(),
        "discriminant": discriminant(&q)?,
        "closed": closed.to_string(),
        "brute": brute.to_string(),
        "agree": closed == brute,
    }))
}

pub fn run_verify_json(suite: &str, primes: &[u32]) -> Result<(Report, Value)> {
    let suite: Suite = suite.parse()?;
    let r = run_verify(suite, primes)?;
    let v = serde_json::to_value(&r).expect("serializable");
    Ok((r, v))
}

/// Deterministic text form of a JSON value (sorted keys, two-space indent).
pub fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    const SO5: &str = r#"{"group":{"family":"so_odd","n":5,"p":5},
        "stratum":{"components":[{"degree":2,"unit":1},{"degree":2,"unit":"zeta^1"},{"degree":1,"null":true}],
        "omega_signs":[1,-1]}}"#;

    #[test]
    fn lift_output_is_stable() {
        let a = render(&run_lift(SO5).unwrap());
        let b = render(&run_lift(SO5).unwrap());
        assert_eq!(a, b);
        let v: Value = serde_json::from_str(&a).unwrap();
        assert_eq!(v["total_rank"], 4);
        assert_eq!(v["entries"].as_array().unwrap().len(), 2);
    }

    #[test]
    fn echo_round_trips() {
        let (g, s) = load(SO5).unwrap();
        let text = serde_json::to_string(&InputDoc::echo(&g, &s)).unwrap();
        assert_eq!(load(&text).unwrap(), (g, s));
    }

    #[test]
    fn errors_map_to_exit_codes() {
        let e = run_lift(r#"{"group":{"family":"so_odd","n":5},"stratum":{"components":[]}}"#).unwrap_err();
        assert_eq!(exit_code(&e), EXIT_SCHEMA);
        let bad = r#"{"group":{"family":"u_ram_even","n":4,"p":5},
            "stratum":{"components":[{"degree":2,"unit":1},{"degree":2,"unit":2}],"omega_signs":[1,1]}}"#;
        let e = run_lift(bad).unwrap_err();
        assert_eq!(exit_code(&e), EXIT_STRATUM);
        assert!(e.to_string().contains("(iii)"));
    }

    #[test]
    fn gauss_command() {
        let v = run_gauss(7, &[1, 3]).unwrap();
        assert_eq!(v["agree"], true);
        assert_eq!(exit_code(&run_gauss(7, &[1, 0]).unwrap_err()), EXIT_SCHEMA);
    }
}

//! Declarative case definitions: parameters, cited assumptions, side checks
//! and per-stabiliser elimination rules.

use serde::Serialize;
use thiserror::Error;

use crate::cyclo::Cyclotomic;
use crate::hurwitz::parse_orders;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {msg}")]
pub struct CaseParseError {
    pub line: usize,
    pub msg: String,
}

fn perr(line: usize, msg: impl Into<String>) -> CaseParseError {
    CaseParseError { line, msg: msg.into() }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PowerKind {
    Sym,
    Ext,
}

impl PowerKind {
    fn parse(s: &str) -> Option<Self> {
        match s {
            "sym" => Some(PowerKind::Sym),
            "ext" => Some(PowerKind::Ext),
            _ => None,
        }
    }
}

/// The representation of the cover on H⁰(O(H)): an irreducible, or a
/// symmetric or exterior power of one (`ext2(chi5a)`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RepSpec {
    pub character: String,
    pub power: Option<(PowerKind, u64)>,
}

impl RepSpec {
    pub fn parse(s: &str) -> Option<Self> {
        let s = s.trim();
        for (prefix, kind) in [("ext", PowerKind::Ext), ("sym", PowerKind::Sym)] {
            if let Some(rest) = s.strip_prefix(prefix) {
                let (k, inner) = rest.split_once('(')?;
                let inner = inner.strip_suffix(')')?;
                return Some(RepSpec { character: inner.trim().to_string(), power: Some((kind, k.parse().ok()?)) });
            }
        }
        Some(RepSpec { character: s.to_string(), power: None })
    }
}

impl std::fmt::Display for RepSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.power {
            None => write!(f, "{}", self.character),
            Some((PowerKind::Sym, k)) => write!(f, "sym{k}({})", self.character),
            Some((PowerKind::Ext, k)) => write!(f, "ext{k}({})", self.character),
        }
    }
}

/// A geometric step taken as given, with its citation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Assumption {
    pub key: String,
    pub citation: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SideCheck {
    /// Constituent degrees of S^k or Λ^k of a character.
    Decompose { power: PowerKind, k: u64, character: String, degrees: Vec<u64>, citation: String },
    /// Value of S^k or Λ^k at a class.
    Value {
        power: PowerKind,
        k: u64,
        character: String,
        class: String,
        #[serde(serialize_with = "ser_display")]
        value: Cyclotomic,
        citation: String,
    },
    /// Signature infeasibility for every genus in lo..=hi at another group order.
    Signature { order: u64, orders: Vec<u64>, lo: u64, hi: u64, citation: String },
}

pub(crate) fn ser_display<T: std::fmt::Display, S: serde::Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OrbitRule {
    /// The restriction to the stabiliser preimage has no linear constituent.
    NoLinear { fusion: String },
    /// The representation has the stated value at the class and no eigenvalue 1 there.
    CyclicTrivial {
        class: String,
        #[serde(serialize_with = "ser_display")]
        value: Cyclotomic,
    },
    /// The restriction has no linear constituent together with a faithful 3-dimensional part.
    Tangent { fusion: String },
    /// Eliminated by a cited geometric argument.
    Assumed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "target", rename_all = "snake_case")]
pub enum Rule {
    Orbit { size: u64, stabiliser: String, rule: OrbitRule, citation: String },
    /// A line component with the given stabiliser needs a 2-dimensional subrepresentation.
    Line { r: u64, stabiliser: String, fusion: String, citation: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FanoCase {
    pub id: String,
    pub title: String,
    pub group: String,
    pub cover: String,
    pub n: u64,
    pub h3: u64,
    pub orbit_lower_bound: u64,
    pub catalog: String,
    pub rep: RepSpec,
    pub known_decomposition: Option<Vec<u64>>,
    pub hurwitz_bound_order: u64,
    pub signature_order: u64,
    pub signature_orders: Vec<u64>,
    pub assumptions: Vec<Assumption>,
    pub side_checks: Vec<SideCheck>,
    pub rules: Vec<Rule>,
}

fn split_citation(s: &str, ln: usize) -> Result<(&str, String), CaseParseError> {
    let (body, cit) = s.split_once('|').ok_or_else(|| perr(ln, "missing `| citation`"))?;
    let cit = cit.trim();
    if cit.is_empty() {
        return Err(perr(ln, "empty citation"));
    }
    Ok((body.trim(), cit.to_string()))
}

fn num(s: &str, ln: usize, what: &str) -> Result<u64, CaseParseError> {
    s.parse().map_err(|_| perr(ln, format!("bad {what} `{s}`")))
}

fn degrees(s: &str, ln: usize) -> Result<Vec<u64>, CaseParseError> {
    parse_orders(s).map_err(|_| perr(ln, format!("bad degree list `{s}`")))
}

fn value(s: &str, ln: usize) -> Result<Cyclotomic, CaseParseError> {
    s.parse::<Cyclotomic>().map_err(|e| perr(ln, e.to_string()))
}

fn parse_side(body: &str, citation: String, ln: usize) -> Result<SideCheck, CaseParseError> {
    let f: Vec<&str> = body.split_whitespace().collect();
    match f.first().copied() {
        Some("decompose") if f.len() == 6 && f[4] == "=>" => Ok(SideCheck::Decompose {
            power: PowerKind::parse(f[1]).ok_or_else(|| perr(ln, "power must be sym or ext"))?,
            k: num(f[2], ln, "power")?,
            character: f[3].to_string(),
            degrees: degrees(f[5], ln)?,
            citation,
        }),
        Some("value") if f.len() == 7 && f[5] == "=>" => Ok(SideCheck::Value {
            power: PowerKind::parse(f[1]).ok_or_else(|| perr(ln, "power must be sym or ext"))?,
            k: num(f[2], ln, "power")?,
            character: f[3].to_string(),
            class: f[4].to_string(),
            value: value(f[6], ln)?,
            citation,
        }),
        Some("signature") if f.len() == 4 => {
            let (lo, hi) = f[3].split_once("..").ok_or_else(|| perr(ln, "genus range must be lo..hi"))?;
            Ok(SideCheck::Signature {
                order: num(f[1], ln, "order")?,
                orders: degrees(f[2], ln)?,
                lo: num(lo, ln, "genus")?,
                hi: num(hi, ln, "genus")?,
                citation,
            })
        }
        _ => Err(perr(ln, format!("unrecognised side check `{body}`"))),
    }
}

fn parse_rule(body: &str, citation: String, ln: usize) -> Result<Rule, CaseParseError> {
    let f: Vec<&str> = body.split_whitespace().collect();
    if f.len() < 4 {
        return Err(perr(ln, "rule needs target, size, stabiliser and kind"));
    }
    let size = num(f[1], ln, "size")?;
    let stabiliser = f[2].to_string();
    match (f[0], f[3], f.len()) {
        ("orbit", "no-linear", 5) => Ok(Rule::Orbit {
            size,
            stabiliser,
            rule: OrbitRule::NoLinear { fusion: f[4].to_string() },
            citation,
        }),
        ("orbit", "tangent", 5) => Ok(Rule::Orbit {
            size,
            stabiliser,
            rule: OrbitRule::Tangent { fusion: f[4].to_string() },
            citation,
        }),
        ("orbit", "cyclic-trivial", 6) => Ok(Rule::Orbit {
            size,
            stabiliser,
            rule: OrbitRule::CyclicTrivial { class: f[4].to_string(), value: value(f[5], ln)? },
            citation,
        }),
        ("orbit", "assumed", 4) => Ok(Rule::Orbit { size, stabiliser, rule: OrbitRule::Assumed, citation }),
        ("line", "no-2dim", 5) => Ok(Rule::Line { r: size, stabiliser, fusion: f[4].to_string(), citation }),
        _ => Err(perr(ln, format!("unrecognised rule `{body}`"))),
    }
}

/// Parses one `.case` file.
pub fn parse_case(text: &str) -> Result<FanoCase, CaseParseError> {
    let mut kv: std::collections::BTreeMap<&str, (usize, &str)> = Default::default();
    let mut assumptions = Vec::new();
    let mut side_checks = Vec::new();
    let mut rules = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let ln = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, rest) = line.split_once(':').ok_or_else(|| perr(ln, "expected `key: value`"))?;
        let rest = rest.trim();
        match key.trim() {
            "assume" => {
                let (k, citation) = split_citation(rest, ln)?;
                assumptions.push(Assumption { key: k.to_string(), citation });
            }
            "side" => {
                let (b, c) = split_citation(rest, ln)?;
                side_checks.push(parse_side(b, c, ln)?);
            }
            "rule" => {
                let (b, c) = split_citation(rest, ln)?;
                rules.push(parse_rule(b, c, ln)?);
            }
            k => {
                if kv.insert(k, (ln, rest)).is_some() {
                    return Err(perr(ln, format!("duplicate key `{k}`")));
                }
            }
        }
    }
    let get = |k: &str| kv.get(k).copied().ok_or_else(|| perr(0, format!("missing `{k}:`")));
    let getn = |k: &str| -> Result<u64, CaseParseError> {
        let (ln, v) = get(k)?;
        num(v, ln, k)
    };
    let (sln, sig) = get("hurwitz_signature")?;
    let (so, sl) = sig.split_once(' ').ok_or_else(|| perr(sln, "expected `ORDER r1,r2,...`"))?;
    let (rln, rep) = get("rep")?;
    let known_decomposition = match kv.get("known_decomposition") {
        Some((ln, v)) => Some(degrees(v, *ln)?),
        None => None,
    };
    let case = FanoCase {
        id: get("case")?.1.to_string(),
        title: get("title")?.1.to_string(),
        group: get("group")?.1.to_string(),
        cover: get("cover")?.1.to_string(),
        n: getn("n")?,
        h3: getn("h3")?,
        orbit_lower_bound: getn("orbit_lower_bound")?,
        catalog: get("catalog")?.1.to_string(),
        rep: RepSpec::parse(rep).ok_or_else(|| perr(rln, "bad representation"))?,
        known_decomposition,
        hurwitz_bound_order: getn("hurwitz_bound_order")?,
        signature_order: num(so, sln, "order")?,
        signature_orders: degrees(sl.trim(), sln)?,
        assumptions,
        side_checks,
        rules,
    };
    if case.n == 0 || case.h3 == 0 {
        return Err(perr(0, "n and h3 must be positive"));
    }
    Ok(case)
}

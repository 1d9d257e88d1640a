//! Character tables, fusion maps and subgroup catalogs: parsing, validation
//! and the basic character-theoretic queries.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::cyclo::{CycloError, Cyclotomic, Rational};

/// Primes whose power maps are stored in table files.
pub const POWER_MAP_PRIMES: [u32; 5] = [2, 3, 5, 7, 11];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChartabError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("{what}: expected {expected}, found {found}")]
    CountMismatch { what: String, expected: usize, found: usize },
    #[error("missing power map for prime {0}")]
    MissingPowerMap(u32),
    #[error("sum of squared degrees is {found}, group order is {order}")]
    DegreeSum { order: u64, found: String },
    #[error("table mismatch: expected {expected}, found {found}")]
    TableMismatch { expected: String, found: String },
    #[error("unknown label {0}")]
    UnknownLabel(String),
    #[error("not a character: multiplicity of {label} is {multiplicity}")]
    NotACharacter { label: String, multiplicity: String },
    #[error(transparent)]
    Cyclo(#[from] CycloError),
}

type Result<T> = std::result::Result<T, ChartabError>;

fn syntax(line: usize, msg: impl Into<String>) -> ChartabError {
    ChartabError::Syntax { line, msg: msg.into() }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConjClass {
    pub label: String,
    pub size: u64,
    pub order: u32,
}

/// A labelled irreducible character.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Irreducible {
    pub label: String,
    pub values: Vec<Cyclotomic>,
}

impl Irreducible {
    pub fn degree(&self) -> u64 {
        degree_of(&self.values)
    }
}

fn degree_of(values: &[Cyclotomic]) -> u64 {
    values[0]
        .to_rational()
        .ok()
        .and_then(|q| q.to_integer().to_u64())
        .unwrap_or(0)
}

/// A class function on the classes of a named table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VirtualCharacter {
    pub table: String,
    pub values: Vec<Cyclotomic>,
}

impl VirtualCharacter {
    pub fn degree(&self) -> u64 {
        degree_of(&self.values)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharacterTable {
    pub group: String,
    pub order: u64,
    pub provenance: String,
    pub classes: Vec<ConjClass>,
    pub power_maps: BTreeMap<u32, Vec<usize>>,
    pub irreducibles: Vec<Irreducible>,
}

/// Decomposition of a class function into irreducibles, in table order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub multiplicities: Vec<(String, Rational)>,
}

impl Decomposition {
    /// Constituent degrees with multiplicity, sorted ascending (non-negative integral parts only).
    pub fn constituent_degrees(&self, tbl: &CharacterTable) -> Vec<u64> {
        let mut out = Vec::new();
        for ((_, m), chi) in self.multiplicities.iter().zip(&tbl.irreducibles) {
            let k = m.to_integer().to_u64().unwrap_or(0);
            out.extend(std::iter::repeat_n(chi.degree(), k as usize));
        }
        out.sort_unstable();
        out
    }

    /// Labels with nonzero multiplicity.
    pub fn support(&self) -> Vec<(String, Rational)> {
        self.multiplicities.iter().filter(|(_, m)| !m.is_zero()).cloned().collect()
    }
}

/// Strictness of `decompose`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecomposeMode {
    /// Multiplicities must be non-negative integers reconstructing the input.
    Strict,
    /// Any rational multiplicities are returned.
    Relaxed,
}

impl CharacterTable {
    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn identity_class(&self) -> usize {
        self.classes.iter().position(|c| c.size == 1 && c.order == 1).unwrap_or(0)
    }

    pub fn class_index(&self, label: &str) -> Result<usize> {
        self.classes
            .iter()
            .position(|c| c.label == label)
            .ok_or_else(|| ChartabError::UnknownLabel(format!("{}:{label}", self.group)))
    }

    pub fn irreducible(&self, label: &str) -> Result<&Irreducible> {
        self.irreducibles
            .iter()
            .find(|c| c.label == label)
            .ok_or_else(|| ChartabError::UnknownLabel(format!("{}:{label}", self.group)))
    }

    /// The named irreducible as a class function of this table.
    pub fn character(&self, label: &str) -> Result<VirtualCharacter> {
        Ok(self.virtual_of(&self.irreducible(label)?.values))
    }

    pub fn virtual_of(&self, values: &[Cyclotomic]) -> VirtualCharacter {
        VirtualCharacter { table: self.group.clone(), values: values.to_vec() }
    }

    pub fn trivial(&self) -> VirtualCharacter {
        self.virtual_of(&vec![Cyclotomic::one(); self.class_count()])
    }

    /// Σ mᵢ·χᵢ for integer multiplicities in table order.
    pub fn combination(&self, mults: &[i64]) -> VirtualCharacter {
        let mut vals = vec![Cyclotomic::zero(); self.class_count()];
        for (m, chi) in mults.iter().zip(&self.irreducibles) {
            if *m == 0 {
                continue;
            }
            let q = Rational::from_integer(BigInt::from(*m));
            for (v, x) in vals.iter_mut().zip(&chi.values) {
                *v += &x.scale(&q);
            }
        }
        self.virtual_of(&vals)
    }

    fn check_ref(&self, phi: &VirtualCharacter) -> Result<()> {
        if phi.table != self.group {
            return Err(ChartabError::TableMismatch { expected: self.group.clone(), found: phi.table.clone() });
        }
        if phi.values.len() != self.class_count() {
            return Err(ChartabError::CountMismatch {
                what: format!("values of a class function on {}", self.group),
                expected: self.class_count(),
                found: phi.values.len(),
            });
        }
        Ok(())
    }

    /// Primes ≤ 11 dividing some element order.
    pub fn needed_primes(&self) -> Vec<u32> {
        POWER_MAP_PRIMES
            .iter()
            .copied()
            .filter(|p| self.classes.iter().any(|c| c.order % p == 0))
            .collect()
    }

    fn apply_prime(&self, c: usize, p: u32) -> Result<usize> {
        self.power_maps.get(&p).map(|m| m[c]).ok_or(ChartabError::MissingPowerMap(p))
    }

    /// Class of x^k for x in class `c`.
    pub fn power_class(&self, c: usize, k: u64) -> Result<usize> {
        let o = self.classes[c].order as u64;
        let k0 = k % o;
        if k0 == 0 {
            return Ok(self.identity_class());
        }
        // shift k by multiples of the order until it factors over stored primes
        let mut first_missing = None;
        for t in 0..1000u64 {
            let kk = k0 + t * o;
            let f = factorize(kk);
            match f.iter().find(|(p, _)| !self.power_maps.contains_key(&(*p as u32))) {
                None => {
                    let mut cur = c;
                    for (p, e) in f {
                        for _ in 0..e {
                            cur = self.apply_prime(cur, p as u32)?;
                        }
                    }
                    return Ok(cur);
                }
                Some((p, _)) => {
                    if t == 0 {
                        first_missing = Some(*p as u32);
                    }
                    if o.is_multiple_of(*p) {
                        break;
                    }
                }
            }
        }
        // x^k0 = (x^d)^u with d | order and u a unit modulo the order of x^d
        let d = k0.gcd(&o);
        let mut y = c;
        for (p, e) in factorize(d) {
            for _ in 0..e {
                y = self.apply_prime(y, p as u32)?;
            }
        }
        let u = k0 / d;
        if u == 1 {
            return Ok(y);
        }
        self.galois_class(y, u as i64).ok_or(ChartabError::MissingPowerMap(first_missing.unwrap_or(0)))
    }

    /// The class whose column is the image of column `c` under ζ ↦ ζ^u.
    fn galois_class(&self, c: usize, u: i64) -> Option<usize> {
        let image: Vec<Cyclotomic> = self
            .irreducibles
            .iter()
            .map(|chi| chi.values[c].reduce_conductor().galois(u).map(|v| v.reduce_conductor()))
            .collect::<std::result::Result<_, _>>()
            .ok()?;
        (0..self.class_count()).find(|&x| {
            self.classes[x].order == self.classes[c].order
                && self.irreducibles.iter().zip(&image).all(|(chi, v)| chi.values[x].reduce_conductor() == *v)
        })
    }

    /// power_class(c, j) for j = 0 .. order(c) − 1.
    pub fn power_classes(&self, c: usize) -> Result<Vec<usize>> {
        (0..self.classes[c].order as u64).map(|j| self.power_class(c, j)).collect()
    }

    /// (1/|G|) Σ size(c)·φ(c)·conj(ψ(c)).
    pub fn inner_product(&self, phi: &VirtualCharacter, psi: &VirtualCharacter) -> Result<Rational> {
        self.check_ref(phi)?;
        self.check_ref(psi)?;
        Ok(self.inner_values(&phi.values, &psi.values)?)
    }

    /// Inner product of raw value vectors. Terms are summed per element order
    /// first: each such partial sum is Galois-stable and hence rational.
    pub fn inner_values(&self, a: &[Cyclotomic], b: &[Cyclotomic]) -> std::result::Result<Rational, CycloError> {
        let mut groups: BTreeMap<u32, Cyclotomic> = BTreeMap::new();
        for (c, cls) in self.classes.iter().enumerate() {
            let term = (&a[c] * &b[c].conj()).scale(&Rational::from_integer(BigInt::from(cls.size)));
            *groups.entry(cls.order).or_insert_with(Cyclotomic::zero) += &term;
        }
        let mut total = Rational::zero();
        let mut rest = Cyclotomic::zero();
        for v in groups.values() {
            match v.to_rational() {
                Ok(q) => total += q,
                Err(_) => rest += v,
            }
        }
        total += rest.to_rational()?;
        Ok(total / Rational::from_integer(BigInt::from(self.order)))
    }

    /// Multiplicities ⟨φ, χᵢ⟩ for every irreducible.
    pub fn decompose(&self, phi: &VirtualCharacter, mode: DecomposeMode) -> Result<Decomposition> {
        self.check_ref(phi)?;
        let mut mults = Vec::with_capacity(self.irreducibles.len());
        for chi in &self.irreducibles {
            mults.push((chi.label.clone(), self.inner_values(&phi.values, &chi.values)?));
        }
        if mode == DecomposeMode::Strict {
            for (label, m) in &mults {
                if !m.is_integer() || m.is_negative() {
                    return Err(ChartabError::NotACharacter { label: label.clone(), multiplicity: m.to_string() });
                }
            }
            let ints: Vec<i64> = mults.iter().map(|(_, m)| m.to_integer().to_i64().unwrap_or(i64::MAX)).collect();
            if self.combination(&ints).values != phi.values {
                return Err(ChartabError::NotACharacter {
                    label: "(residual)".into(),
                    multiplicity: "class function outside the span of the irreducibles".into(),
                });
            }
        }
        Ok(Decomposition { multiplicities: mults })
    }

    /// Multiplicity of each eigencharacter k of ⟨g⟩, g in class `c`, indexed by k.
    pub fn restrict_to_cyclic(&self, c: usize, phi: &VirtualCharacter) -> Result<Vec<Rational>> {
        self.check_ref(phi)?;
        let o = self.classes[c].order;
        let pcs = self.power_classes(c)?;
        let inv_o = Rational::new(BigInt::one(), BigInt::from(o));
        (0..o as i64)
            .map(|k| {
                let mut s = Cyclotomic::zero();
                for (j, &pc) in pcs.iter().enumerate() {
                    let z = Cyclotomic::root(o, -k * j as i64)?;
                    s += &(&phi.values[pc] * &z);
                }
                Ok(s.to_rational()? * &inv_o)
            })
            .collect()
    }

    /// Classes on which χ takes the value χ(1).
    pub fn kernel_classes(&self, values: &[Cyclotomic]) -> BTreeSet<usize> {
        let deg = &values[self.identity_class()];
        (0..self.class_count()).filter(|&c| &values[c] == deg).collect()
    }

    pub fn is_faithful(&self, values: &[Cyclotomic]) -> bool {
        self.kernel_classes(values).len() == 1
    }

    /// Classes x with |χ(x)| = χ(1) for every irreducible.
    pub fn center_classes(&self) -> BTreeSet<usize> {
        (0..self.class_count())
            .filter(|&c| {
                self.irreducibles.iter().all(|chi| {
                    let d = &chi.values[self.identity_class()];
                    &chi.values[c] * &chi.values[c].conj() == d * d
                })
            })
            .collect()
    }

    pub fn min_faithful_degree(&self) -> Option<u64> {
        self.irreducibles.iter().filter(|c| self.is_faithful(&c.values)).map(Irreducible::degree).min()
    }

    pub fn min_nontrivial_degree(&self) -> Option<u64> {
        self.irreducibles
            .iter()
            .filter(|c| c.values.iter().any(|v| *v != Cyclotomic::one()))
            .map(Irreducible::degree)
            .min()
    }

    /// Smallest degree of a faithful character (a sum of irreducibles with
    /// jointly trivial kernel) not exceeding `max`.
    pub fn min_faithful_sum_degree(&self, max: u64) -> Option<u64> {
        let kernels: Vec<(u64, BTreeSet<usize>)> = self
            .irreducibles
            .iter()
            .map(|c| (c.degree(), self.kernel_classes(&c.values)))
            .filter(|(_, k)| k.len() < self.class_count())
            .collect();
        let id = self.identity_class();
        let mut best: Option<u64> = None;
        fn go(
            start: usize,
            deg: u64,
            ker: &BTreeSet<usize>,
            items: &[(u64, BTreeSet<usize>)],
            max: u64,
            id: usize,
            best: &mut Option<u64>,
        ) {
            if deg > 0 && ker.len() == 1 && ker.contains(&id) {
                *best = Some(best.map_or(deg, |b| b.min(deg)));
                return;
            }
            for i in start..items.len() {
                let (d, k) = &items[i];
                if deg + d <= max {
                    let nk: BTreeSet<usize> = ker.intersection(k).copied().collect();
                    go(i, deg + d, &nk, items, max, id, best);
                }
            }
        }
        let all: BTreeSet<usize> = (0..self.class_count()).collect();
        go(0, 0, &all, &kernels, max, id, &mut best);
        best
    }

    /// Evaluates φ at x^k for every class and k = 1..=d (index [c][k-1]).
    pub fn power_values(&self, phi: &VirtualCharacter, d: u64) -> Result<Vec<Vec<Cyclotomic>>> {
        self.check_ref(phi)?;
        (0..self.class_count())
            .map(|c| (1..=d).map(|k| Ok(phi.values[self.power_class(c, k)?].clone())).collect())
            .collect()
    }

    pub fn check_same(&self, phi: &VirtualCharacter, psi: &VirtualCharacter) -> Result<()> {
        self.check_ref(phi)?;
        self.check_ref(psi)
    }
}

fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Restriction of a class function along a fusion map.
pub fn restrict(tbl_h: &CharacterTable, fusion: &FusionMap, phi: &VirtualCharacter) -> Result<VirtualCharacter> {
    if fusion.sub != tbl_h.group {
        return Err(ChartabError::TableMismatch { expected: tbl_h.group.clone(), found: fusion.sub.clone() });
    }
    if fusion.group != phi.table {
        return Err(ChartabError::TableMismatch { expected: fusion.group.clone(), found: phi.table.clone() });
    }
    if fusion.map.len() != tbl_h.class_count() {
        return Err(ChartabError::CountMismatch {
            what: format!("fusion {} classes", fusion.sub),
            expected: tbl_h.class_count(),
            found: fusion.map.len(),
        });
    }
    let mut values = Vec::with_capacity(fusion.map.len());
    for &g in &fusion.map {
        values.push(phi.values.get(g).cloned().ok_or_else(|| ChartabError::UnknownLabel(format!("class {}", g + 1)))?);
    }
    Ok(VirtualCharacter { table: tbl_h.group.clone(), values })
}

/// Irreducibles of degree `d` across a cover family whose kernel meets the center trivially.
pub fn lift_candidates(family: &[&CharacterTable], d: u64) -> Vec<(String, String)> {
    let mut out = Vec::new();
    for t in family {
        let center = t.center_classes();
        let id = t.identity_class();
        for chi in &t.irreducibles {
            if chi.degree() != d {
                continue;
            }
            let ker = t.kernel_classes(&chi.values);
            if ker.intersection(&center).all(|&c| c == id) {
                out.push((t.group.clone(), chi.label.clone()));
            }
        }
    }
    out
}

// ---------------------------------------------------------------- parsing

fn header<'a>(line: &'a str, key: &str) -> Option<&'a str> {
    line.strip_prefix(key).and_then(|r| r.strip_prefix(':')).map(str::trim)
}

/// Parses a character-table file.
pub fn parse_table(text: &str) -> Result<CharacterTable> {
    let mut group = None;
    let mut order = None;
    let mut provenance = String::new();
    let mut classes = Vec::new();
    let mut power_maps = BTreeMap::new();
    let mut irreducibles = Vec::new();
    let mut in_classes = false;
    for (i, raw) in text.lines().enumerate() {
        let ln = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let indented = raw.starts_with(' ') || raw.starts_with('\t');
        if in_classes && indented {
            let f: Vec<&str> = line.split_whitespace().collect();
            if f.len() != 3 {
                return Err(syntax(ln, "class line must be `label size order`"));
            }
            let size = f[1].parse().map_err(|_| syntax(ln, "bad class size"))?;
            let ord = f[2].parse().map_err(|_| syntax(ln, "bad element order"))?;
            if size == 0 || ord == 0 {
                return Err(syntax(ln, "class size and element order must be positive"));
            }
            classes.push(ConjClass { label: f[0].to_string(), size, order: ord });
            continue;
        }
        in_classes = false;
        if let Some(v) = header(line, "group") {
            group = Some(v.to_string());
        } else if let Some(v) = header(line, "order") {
            order = Some(v.parse::<u64>().map_err(|_| syntax(ln, "bad group order"))?);
        } else if let Some(v) = header(line, "provenance") {
            provenance = v.to_string();
        } else if line == "classes:" {
            in_classes = true;
        } else if let Some(rest) = line.strip_prefix("powermap ") {
            let (p, body) = rest.split_once(':').ok_or_else(|| syntax(ln, "expected `powermap p: ...`"))?;
            let p: u32 = p.trim().parse().map_err(|_| syntax(ln, "bad prime"))?;
            let map: Vec<usize> = body
                .split_whitespace()
                .map(|t| t.parse::<usize>().ok().filter(|&x| x >= 1).map(|x| x - 1))
                .collect::<Option<_>>()
                .ok_or_else(|| syntax(ln, "power map entries must be positive class indices"))?;
            if power_maps.insert(p, map).is_some() {
                return Err(syntax(ln, format!("duplicate power map for {p}")));
            }
        } else if let Some(rest) = line.strip_prefix("char ") {
            let (label, body) = rest.split_once(':').ok_or_else(|| syntax(ln, "expected `char label: values`"))?;
            let values = body
                .split(',')
                .map(|v| v.trim().parse::<Cyclotomic>().map(|c| c.reduce_conductor()))
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| syntax(ln, e.to_string()))?;
            irreducibles.push(Irreducible { label: label.trim().to_string(), values });
        } else {
            return Err(syntax(ln, format!("unrecognised line `{line}`")));
        }
    }
    let group = group.ok_or_else(|| syntax(0, "missing `group:`"))?;
    let order = order.ok_or_else(|| syntax(0, "missing `order:`"))?;
    let k = classes.len();
    if k == 0 {
        return Err(syntax(0, "no classes"));
    }
    if irreducibles.len() != k {
        return Err(ChartabError::CountMismatch { what: format!("{group} irreducibles"), expected: k, found: irreducibles.len() });
    }
    for chi in &irreducibles {
        if chi.values.len() != k {
            return Err(ChartabError::CountMismatch {
                what: format!("{group} values of {}", chi.label),
                expected: k,
                found: chi.values.len(),
            });
        }
    }
    for (p, m) in &power_maps {
        if m.len() != k || m.iter().any(|&x| x >= k) {
            return Err(ChartabError::CountMismatch { what: format!("{group} power map {p}"), expected: k, found: m.len() });
        }
    }
    let tbl = CharacterTable { group, order, provenance, classes, power_maps, irreducibles };
    for p in tbl.needed_primes() {
        if !tbl.power_maps.contains_key(&p) {
            return Err(ChartabError::MissingPowerMap(p));
        }
    }
    let sum = tbl.degree_square_sum();
    if sum != Rational::from_integer(BigInt::from(order)) {
        return Err(ChartabError::DegreeSum { order, found: sum.to_string() });
    }
    Ok(tbl)
}

impl CharacterTable {
    fn degree_square_sum(&self) -> Rational {
        let id = self.identity_class();
        self.irreducibles
            .iter()
            .map(|c| {
                let d = c.values[id].to_rational().unwrap_or_else(|_| Rational::zero());
                &d * &d
            })
            .sum()
    }
}

/// Writes a table in the file format accepted by [`parse_table`].
impl fmt::Display for CharacterTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "group: {}", self.group)?;
        writeln!(f, "order: {}", self.order)?;
        writeln!(f, "provenance: {}", self.provenance)?;
        writeln!(f, "classes:")?;
        for c in &self.classes {
            writeln!(f, "  {} {} {}", c.label, c.size, c.order)?;
        }
        for (p, m) in &self.power_maps {
            let idx: Vec<String> = m.iter().map(|x| (x + 1).to_string()).collect();
            writeln!(f, "powermap {}: {}", p, idx.join(" "))?;
        }
        for chi in &self.irreducibles {
            let vals: Vec<String> = chi.values.iter().map(|v| v.to_string()).collect();
            writeln!(f, "char {}: {}", chi.label, vals.join(", "))?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------- validation

/// One named check with its outcome.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check { name: name.into(), passed, detail: detail.into() }
    }
}

/// Checks run against one data object.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub subject: String,
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

fn list<T: fmt::Display>(items: &[T], limit: usize) -> String {
    let mut s: Vec<String> = items.iter().take(limit).map(|x| x.to_string()).collect();
    if items.len() > limit {
        s.push(format!("... ({} total)", items.len()));
    }
    s.join(", ")
}

fn outcome(name: &str, bad: Vec<String>, ok: &str) -> Check {
    if bad.is_empty() {
        Check::new(name, true, ok)
    } else {
        Check::new(name, false, list(&bad, 8))
    }
}

/// Runs every structural and arithmetic invariant of a table.
pub fn validate(tbl: &CharacterTable) -> ValidationReport {
    let mut checks = Vec::new();
    let k = tbl.class_count();
    let order = tbl.order;
    let id = tbl.identity_class();

    checks.push(Check::new(
        "provenance",
        !tbl.provenance.trim().is_empty(),
        if tbl.provenance.trim().is_empty() { "missing" } else { "present" },
    ));

    let ids: Vec<String> = tbl.classes.iter().filter(|c| c.size == 1 && c.order == 1).map(|c| c.label.clone()).collect();
    checks.push(Check::new("identity class", ids.len() == 1, format!("found [{}]", ids.join(", "))));

    let bad: Vec<String> = tbl
        .classes
        .iter()
        .filter(|c| !order.is_multiple_of(c.size) || !order.is_multiple_of(c.order as u64))
        .map(|c| c.label.clone())
        .collect();
    checks.push(outcome("class sizes and orders divide |G|", bad, "all divide"));
    let total: u64 = tbl.classes.iter().map(|c| c.size).sum();
    checks.push(Check::new("class sizes sum to |G|", total == order, format!("{total} vs {order}")));

    checks.push(Check::new(
        "irreducible count equals class count",
        tbl.irreducibles.len() == k,
        format!("{} vs {k}", tbl.irreducibles.len()),
    ));

    let mut labels: Vec<&str> = tbl.irreducibles.iter().map(|c| c.label.as_str()).collect();
    labels.sort_unstable();
    let dup = labels.windows(2).any(|w| w[0] == w[1]);
    checks.push(Check::new("character labels unique", !dup, if dup { "duplicate labels" } else { "unique" }));

    let has_trivial = tbl.irreducibles.iter().any(|c| c.values.iter().all(|v| *v == Cyclotomic::one()));
    checks.push(Check::new("trivial character present", has_trivial, ""));

    let bad: Vec<String> = tbl
        .irreducibles
        .iter()
        .filter(|c| c.values[id].to_rational().map_or(true, |q| !q.is_integer() || !q.is_positive()))
        .map(|c| c.label.clone())
        .collect();
    checks.push(outcome("degrees are positive integers", bad, "all positive"));

    let sum = tbl.degree_square_sum();
    checks.push(Check::new(
        "sum of squared degrees equals |G|",
        sum == Rational::from_integer(BigInt::from(order)),
        format!("{sum} vs {order}"),
    ));

    let bad: Vec<String> = tbl
        .irreducibles
        .iter()
        .flat_map(|c| {
            c.values
                .iter()
                .enumerate()
                .filter(|(_, v)| !v.is_integral())
                .map(move |(j, _)| format!("{}@{}", c.label, tbl.classes[j].label))
        })
        .collect();
    checks.push(outcome("values are algebraic integers", bad, "all integral"));

    checks.push(first_orthogonality(tbl));
    checks.push(column_orthogonality(tbl));
    checks.extend(power_map_checks(tbl));

    ValidationReport { subject: format!("table {}", tbl.group), checks }
}

fn first_orthogonality(tbl: &CharacterTable) -> Check {
    let n = tbl.irreducibles.len();
    let mut bad = Vec::new();
    for i in 0..n {
        for j in i..n {
            let want = if i == j { Rational::one() } else { Rational::zero() };
            match tbl.inner_values(&tbl.irreducibles[i].values, &tbl.irreducibles[j].values) {
                Ok(q) if q == want => {}
                Ok(q) => bad.push(format!("<{},{}> = {q}", tbl.irreducibles[i].label, tbl.irreducibles[j].label)),
                Err(e) => bad.push(format!("<{},{}>: {e}", tbl.irreducibles[i].label, tbl.irreducibles[j].label)),
            }
        }
    }
    outcome("first orthogonality", bad, "orthonormal")
}

fn column_orthogonality(tbl: &CharacterTable) -> Check {
    let k = tbl.class_count();
    let mut bad = Vec::new();
    let conj: Vec<Vec<Cyclotomic>> =
        tbl.irreducibles.iter().map(|c| c.values.iter().map(Cyclotomic::conj).collect()).collect();
    for a in 0..k {
        for b in a..k {
            let s: Cyclotomic = tbl.irreducibles.iter().zip(&conj).map(|(c, cc)| &c.values[a] * &cc[b]).sum();
            let want = if a == b {
                Cyclotomic::from_rational(Rational::new(BigInt::from(tbl.order), BigInt::from(tbl.classes[a].size)))
            } else {
                Cyclotomic::zero()
            };
            if s != want {
                bad.push(format!("({},{})", tbl.classes[a].label, tbl.classes[b].label));
            }
        }
    }
    outcome("column orthogonality", bad, "centralizer orders recovered")
}

fn power_map_checks(tbl: &CharacterTable) -> Vec<Check> {
    let mut out = Vec::new();
    let missing: Vec<u32> = tbl.needed_primes().into_iter().filter(|p| !tbl.power_maps.contains_key(p)).collect();
    out.push(outcome(
        "power maps present for needed primes",
        missing.iter().map(|p| p.to_string()).collect(),
        "present",
    ));
    let id = tbl.identity_class();
    for (&p, map) in &tbl.power_maps {
        let mut bad = Vec::new();
        if map.len() != tbl.class_count() {
            bad.push("wrong length".to_string());
            out.push(outcome(&format!("power map {p}"), bad, ""));
            continue;
        }
        if map[id] != id {
            bad.push("identity not fixed".into());
        }
        let mut image_of_coprime = BTreeSet::new();
        for (c, &img) in map.iter().enumerate() {
            let o = tbl.classes[c].order;
            let want = o / o.gcd(&p);
            if tbl.classes[img].order != want {
                bad.push(format!(
                    "{} -> {} has order {} (expected {want})",
                    tbl.classes[c].label, tbl.classes[img].label, tbl.classes[img].order
                ));
            }
            if !o.is_multiple_of(p) {
                if tbl.classes[img].size != tbl.classes[c].size {
                    bad.push(format!("{} -> {} changes class size", tbl.classes[c].label, tbl.classes[img].label));
                }
                image_of_coprime.insert(img);
            }
        }
        let coprime = tbl.classes.iter().filter(|c| c.order % p != 0).count();
        if image_of_coprime.len() != coprime {
            bad.push("not a bijection on classes of order prime to p".into());
        }
        out.push(outcome(&format!("power map {p} order consistency"), bad, "consistent"));

        // Galois action: χ(x^p) = σ_p(χ(x)) when p is prime to the order of x
        let mut bad = Vec::new();
        for chi in &tbl.irreducibles {
            for (c, &img) in map.iter().enumerate() {
                if !tbl.classes[c].order.is_multiple_of(p) {
                    let v = &chi.values[c];
                    let ok = v.galois(p as i64).map(|g| g == chi.values[img]).unwrap_or(false);
                    if !ok {
                        bad.push(format!("{}@{}", chi.label, tbl.classes[c].label));
                    }
                }
            }
        }
        out.push(outcome(&format!("power map {p} Galois compatibility"), bad, "compatible"));
    }
    out
}

// ---------------------------------------------------------------- fusion maps

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FusionMap {
    pub sub: String,
    pub group: String,
    pub provenance: String,
    /// Subgroup class index → group class index (0-based).
    pub map: Vec<usize>,
}

pub fn parse_fusion(text: &str) -> Result<FusionMap> {
    let mut sub = None;
    let mut group = None;
    let mut provenance = String::new();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let ln = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(v) = header(line, "sub") {
            sub = Some(v.to_string());
        } else if let Some(v) = header(line, "into") {
            group = Some(v.to_string());
        } else if let Some(v) = header(line, "provenance") {
            provenance = v.to_string();
        } else if let Some(v) = header(line, "map") {
            for tok in v.split_whitespace() {
                let (a, b) = tok.split_once(':').ok_or_else(|| syntax(ln, "map entries are `sub:group`"))?;
                let a: usize = a.parse().map_err(|_| syntax(ln, "bad class index"))?;
                let b: usize = b.parse().map_err(|_| syntax(ln, "bad class index"))?;
                if a == 0 || b == 0 {
                    return Err(syntax(ln, "class indices are 1-based"));
                }
                pairs.push((a - 1, b - 1));
            }
        } else {
            return Err(syntax(ln, format!("unrecognised line `{line}`")));
        }
    }
    pairs.sort_unstable();
    for (i, (a, _)) in pairs.iter().enumerate() {
        if *a != i {
            return Err(syntax(0, format!("map must list subgroup classes 1..{} exactly once", pairs.len())));
        }
    }
    Ok(FusionMap {
        sub: sub.ok_or_else(|| syntax(0, "missing `sub:`"))?,
        group: group.ok_or_else(|| syntax(0, "missing `into:`"))?,
        provenance,
        map: pairs.into_iter().map(|(_, b)| b).collect(),
    })
}

/// Checks a fusion map against both tables.
pub fn validate_fusion(f: &FusionMap, sub: &CharacterTable, group: &CharacterTable) -> ValidationReport {
    let mut checks = Vec::new();
    let subject = format!("fusion {} -> {}", f.sub, f.group);
    checks.push(Check::new("provenance", !f.provenance.trim().is_empty(), ""));
    let len_ok = f.map.len() == sub.class_count() && f.map.iter().all(|&g| g < group.class_count());
    checks.push(Check::new("map covers subgroup classes", len_ok, format!("{} entries", f.map.len())));
    if !len_ok {
        return ValidationReport { subject, checks };
    }
    checks.push(Check::new(
        "subgroup order divides group order",
        group.order.is_multiple_of(sub.order),
        format!("{} | {}", sub.order, group.order),
    ));
    checks.push(Check::new(
        "identity maps to identity",
        f.map[sub.identity_class()] == group.identity_class(),
        "",
    ));
    let bad: Vec<String> = f
        .map
        .iter()
        .enumerate()
        .filter(|(h, g)| sub.classes[*h].order != group.classes[**g].order)
        .map(|(h, g)| format!("{} -> {}", sub.classes[h].label, group.classes[*g].label))
        .collect();
    checks.push(outcome("element orders preserved", bad, "preserved"));
    let mut bad = Vec::new();
    for chi in &group.irreducibles {
        let phi = group.virtual_of(&chi.values);
        match restrict(sub, f, &phi).and_then(|r| sub.decompose(&r, DecomposeMode::Strict)) {
            Ok(_) => {}
            Err(e) => bad.push(format!("{}: {e}", chi.label)),
        }
    }
    checks.push(outcome("restrictions of irreducibles are characters", bad, "all decompose"));
    ValidationReport { subject, checks }
}

// ---------------------------------------------------------------- catalogs

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CatalogEntry {
    pub index: u64,
    pub structure: String,
    pub class_count: u32,
    pub maximal: bool,
    pub provenance: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubgroupCatalog {
    pub group: String,
    pub entries: Vec<CatalogEntry>,
}

impl SubgroupCatalog {
    pub fn indices(&self) -> BTreeSet<u64> {
        self.entries.iter().map(|e| e.index).collect()
    }

    pub fn entries_with_index(&self, index: u64) -> impl Iterator<Item = &CatalogEntry> {
        self.entries.iter().filter(move |e| e.index == index)
    }
}

pub fn parse_catalog(text: &str) -> Result<SubgroupCatalog> {
    let mut group = None;
    let mut entries = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let ln = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(v) = header(line, "group") {
            group = Some(v.to_string());
            continue;
        }
        let mut it = line.splitn(5, char::is_whitespace);
        let mut next = |what: &str| it.next().map(str::trim).filter(|s| !s.is_empty()).ok_or_else(|| syntax(ln, format!("missing {what}")));
        let index = next("index")?.parse().map_err(|_| syntax(ln, "bad index"))?;
        let structure = next("structure")?.to_string();
        let class_count = next("class count")?.parse().map_err(|_| syntax(ln, "bad class count"))?;
        let maximal = match next("maximal flag")? {
            "true" => true,
            "false" => false,
            _ => return Err(syntax(ln, "maximal flag must be true or false")),
        };
        let provenance = next("provenance")?.to_string();
        if index == 0 || class_count == 0 {
            return Err(syntax(ln, "index and class count must be positive"));
        }
        entries.push(CatalogEntry { index, structure, class_count, maximal, provenance });
    }
    Ok(SubgroupCatalog { group: group.ok_or_else(|| syntax(0, "missing `group:`"))?, entries })
}

pub fn validate_catalog(cat: &SubgroupCatalog, order: u64) -> ValidationReport {
    let bad: Vec<String> = cat
        .entries
        .iter()
        .filter(|e| !order.is_multiple_of(e.index))
        .map(|e| format!("{} (index {})", e.structure, e.index))
        .collect();
    let prov: Vec<String> =
        cat.entries.iter().filter(|e| e.provenance.trim().is_empty()).map(|e| e.structure.clone()).collect();
    ValidationReport {
        subject: format!("catalog {}", cat.group),
        checks: vec![outcome("indices divide |G|", bad, "Lagrange"), outcome("provenance", prov, "present")],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const A5: &str = "group: A5
order: 60
provenance: test
classes:
  1A 1 1
  2A 15 2
  3A 20 3
  5A 12 5
  5B 12 5
powermap 2: 1 1 3 5 4
powermap 3: 1 2 1 5 4
powermap 5: 1 2 3 1 1
char chi1a: 1, 1, 1, 1, 1
char chi3a: 3, -1, 0, -E(5)^2-E(5)^3, 1+E(5)^2+E(5)^3
char chi3b: 3, -1, 0, 1+E(5)^2+E(5)^3, -E(5)^2-E(5)^3
char chi4a: 4, 0, 1, -1, -1
char chi5a: 5, 1, -1, 0, 0
";

    fn a5() -> CharacterTable {
        parse_table(A5).unwrap()
    }

    #[test]
    fn parses_and_validates() {
        let t = a5();
        let degs: Vec<u64> = t.irreducibles.iter().map(Irreducible::degree).collect();
        assert_eq!(degs, vec![1, 3, 3, 4, 5]);
        let r = validate(&t);
        assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());
        assert_eq!(parse_table(&t.to_string()).unwrap(), t);
    }

    #[test]
    fn rejects_bad_degree_sum() {
        let bad = A5.replace("char chi5a: 5,", "char chi5a: 6,");
        assert!(matches!(parse_table(&bad), Err(ChartabError::DegreeSum { .. })));
        let missing = A5.replace("powermap 5: 1 2 3 1 1\n", "");
        assert_eq!(parse_table(&missing), Err(ChartabError::MissingPowerMap(5)));
        assert!(matches!(parse_table("group: X\norder: 1\nbogus\n"), Err(ChartabError::Syntax { line: 3, .. })));
    }

    #[test]
    fn injected_faults_are_reported() {
        let mut t = a5();
        t.irreducibles[3].values[2] = Cyclotomic::from_int(2);
        let r = validate(&t);
        let f: Vec<&str> = r.failures().map(|c| c.name.as_str()).collect();
        assert!(f.contains(&"first orthogonality"));
        let detail = &r.checks.iter().find(|c| c.name == "first orthogonality").unwrap().detail;
        assert!(detail.contains("chi4a"));

        let mut t = a5();
        t.power_maps.get_mut(&2).unwrap()[3] = 2;
        let r = validate(&t);
        assert!(r.failures().any(|c| c.name == "power map 2 order consistency"));

        let mut t = a5();
        t.provenance.clear();
        assert!(validate(&t).failures().any(|c| c.name == "provenance"));
    }

    #[test]
    fn power_classes_compose() {
        let t = a5();
        assert_eq!(t.power_class(3, 1).unwrap(), 3);
        assert_eq!(t.power_class(3, 2).unwrap(), 4);
        assert_eq!(t.power_class(3, 5).unwrap(), 0);
        assert_eq!(t.power_class(3, 4).unwrap(), 3);
        // 13 ≡ 3 (mod 5) needs no power map for 13
        assert_eq!(t.power_class(3, 13).unwrap(), t.power_class(3, 3).unwrap());
    }

    #[test]
    fn inner_products_and_decomposition() {
        let t = a5();
        let chi = t.character("chi4a").unwrap();
        assert_eq!(t.inner_product(&chi, &chi).unwrap(), Rational::one());
        let d = t.decompose(&t.trivial(), DecomposeMode::Strict).unwrap();
        assert_eq!(d.support(), vec![("chi1a".to_string(), Rational::one())]);
        let v = t.combination(&[0, 1, 0, -1, 0]);
        assert!(t.decompose(&v, DecomposeMode::Strict).is_err());
        assert!(t.decompose(&v, DecomposeMode::Relaxed).is_ok());
    }

    #[test]
    fn cyclic_restriction() {
        let t = a5();
        let chi = t.character("chi3a").unwrap();
        assert_eq!(t.restrict_to_cyclic(0, &chi).unwrap(), vec![Rational::from_integer(3.into())]);
        for c in 0..t.class_count() {
            let m = t.restrict_to_cyclic(c, &chi).unwrap();
            let s: Rational = m.iter().cloned().sum();
            assert_eq!(s, Rational::from_integer(3.into()));
        }
    }

    #[test]
    fn kernels_and_lifts() {
        let t = a5();
        assert_eq!(t.center_classes().into_iter().collect::<Vec<_>>(), vec![0]);
        assert_eq!(t.min_faithful_degree(), Some(3));
        assert_eq!(t.min_nontrivial_degree(), Some(3));
        assert!(!t.is_faithful(&t.trivial().values));
        assert!(lift_candidates(&[&t], 2).is_empty());
        assert_eq!(lift_candidates(&[&t], 3).len(), 2);
    }

    #[test]
    fn fusion_and_catalog_parsing() {
        let f = parse_fusion("sub: H\ninto: G\nprovenance: x\nmap: 2:3 1:1\n").unwrap();
        assert_eq!(f.map, vec![0, 2]);
        assert!(parse_fusion("sub: H\ninto: G\nmap: 1:1 3:2\n").is_err());
        let c = parse_catalog("group: A5\n# c\n5 A4 1 true ATLAS\n6 D10 1 true ATLAS\n").unwrap();
        assert_eq!(c.indices().into_iter().collect::<Vec<_>>(), vec![5, 6]);
        assert!(validate_catalog(&c, 60).passed());
        assert!(!validate_catalog(&c, 50).passed());
        assert!(parse_catalog("group: A5\n5 A4 1 maybe x\n").is_err());
    }
}

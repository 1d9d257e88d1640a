//! Tensor, symmetric and exterior powers by Newton recursion, invariant
//! counting and regeneration of the invariant tables.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use rayon::prelude::*;
use serde::Serialize;

use crate::chartab::{CharacterTable, ChartabError, DecomposeMode, VirtualCharacter};
use crate::cyclo::{Cyclotomic, Rational};

type Result<T> = std::result::Result<T, ChartabError>;

/// Highest degree tabulated in the invariant tables.
pub const TABLE_DEGREE: u64 = 10;

/// χ(g^k) for every class and k = 1..=d_max.
#[derive(Debug, Clone)]
pub struct PowerCache {
    pub table: String,
    /// `per_class[c][k - 1]` is χ(g^k) for g in class c.
    pub per_class: Vec<Vec<Cyclotomic>>,
}

impl PowerCache {
    pub fn new(tbl: &CharacterTable, phi: &VirtualCharacter, d_max: u64) -> Result<Self> {
        Ok(PowerCache { table: tbl.group.clone(), per_class: tbl.power_values(phi, d_max)? })
    }

    pub fn d_max(&self) -> usize {
        self.per_class.first().map_or(0, Vec::len)
    }
}

/// Pointwise product.
pub fn tensor(tbl: &CharacterTable, phi: &VirtualCharacter, psi: &VirtualCharacter) -> Result<VirtualCharacter> {
    tbl.check_same(phi, psi)?;
    Ok(tbl.virtual_of(&phi.values.iter().zip(&psi.values).map(|(a, b)| a * b).collect::<Vec<_>>()))
}

/// Per-class Newton recursion; `sign` alternates for exterior powers.
fn newton(cache: &PowerCache, d: usize, alternating: bool) -> Vec<Vec<Cyclotomic>> {
    cache
        .per_class
        .iter()
        .map(|p| {
            let mut s = vec![Cyclotomic::one()];
            for m in 1..=d {
                let mut acc = Cyclotomic::zero();
                for k in 1..=m {
                    let term = &p[k - 1] * &s[m - k];
                    if alternating && k % 2 == 0 {
                        acc = acc - term;
                    } else {
                        acc += &term;
                    }
                }
                s.push(acc.scale(&Rational::new(BigInt::from(1), BigInt::from(m))));
            }
            s
        })
        .collect()
}

fn transpose(tbl: &CharacterTable, per_class: Vec<Vec<Cyclotomic>>, d: usize) -> Vec<VirtualCharacter> {
    (0..=d)
        .map(|m| tbl.virtual_of(&per_class.iter().map(|s| s[m].clone()).collect::<Vec<_>>()))
        .collect()
}

/// S^0 φ, …, S^d φ.
pub fn sym_powers(tbl: &CharacterTable, phi: &VirtualCharacter, d: u64) -> Result<Vec<VirtualCharacter>> {
    let cache = PowerCache::new(tbl, phi, d)?;
    Ok(transpose(tbl, newton(&cache, d as usize, false), d as usize))
}

/// Λ^0 φ, …, Λ^d φ.
pub fn ext_powers(tbl: &CharacterTable, phi: &VirtualCharacter, d: u64) -> Result<Vec<VirtualCharacter>> {
    let cache = PowerCache::new(tbl, phi, d)?;
    Ok(transpose(tbl, newton(&cache, d as usize, true), d as usize))
}

pub fn sym_power(tbl: &CharacterTable, phi: &VirtualCharacter, d: u64) -> Result<VirtualCharacter> {
    Ok(sym_powers(tbl, phi, d)?.pop().expect("at least S^0"))
}

pub fn ext_power(tbl: &CharacterTable, phi: &VirtualCharacter, d: u64) -> Result<VirtualCharacter> {
    Ok(ext_powers(tbl, phi, d)?.pop().expect("at least Λ^0"))
}

fn as_count(q: Rational, what: &str) -> Result<u64> {
    if !q.is_integer() || q.is_negative() {
        return Err(ChartabError::NotACharacter { label: what.to_string(), multiplicity: q.to_string() });
    }
    q.to_integer().to_u64().ok_or_else(|| ChartabError::NotACharacter {
        label: what.to_string(),
        multiplicity: q.to_string(),
    })
}

/// Dimension of the degree-d invariants, ⟨S^d φ, 1⟩.
pub fn invariant_count(tbl: &CharacterTable, phi: &VirtualCharacter, d: u64) -> Result<u64> {
    let s = sym_power(tbl, phi, d)?;
    as_count(tbl.inner_product(&s, &tbl.trivial())?, "trivial")
}

/// Invariant dimensions in degrees 1..=d_max from one recursion.
pub fn invariant_counts(tbl: &CharacterTable, phi: &VirtualCharacter, d_max: u64) -> Result<Vec<u64>> {
    let powers = sym_powers(tbl, phi, d_max)?;
    let triv = tbl.trivial();
    powers[1..]
        .iter()
        .map(|s| as_count(tbl.inner_product(s, &triv)?, "trivial"))
        .collect()
}

/// One row of an invariant table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvariantRow {
    pub group: String,
    pub character: String,
    pub dimension: u64,
    pub counts: Vec<u64>,
}

pub fn invariant_table(tbl: &CharacterTable, label: &str, d_max: u64) -> Result<InvariantRow> {
    let chi = tbl.character(label)?;
    Ok(InvariantRow {
        group: tbl.group.clone(),
        character: label.to_string(),
        dimension: chi.degree(),
        counts: invariant_counts(tbl, &chi, d_max)?,
    })
}

/// Σ_{k=0..d} (−1)^k Λ^k(g)·S^{d−k}(g) for d = 1..=d_max; all entries vanish for a consistent table.
pub fn plethysm_residuals(tbl: &CharacterTable, phi: &VirtualCharacter, d_max: u64) -> Result<Vec<Cyclotomic>> {
    let cache = PowerCache::new(tbl, phi, d_max)?;
    let s = newton(&cache, d_max as usize, false);
    let e = newton(&cache, d_max as usize, true);
    let mut out = Vec::new();
    for (sc, ec) in s.iter().zip(&e) {
        for d in 1..=d_max as usize {
            let mut acc = Cyclotomic::zero();
            for k in 0..=d {
                let t = &ec[k] * &sc[d - k];
                if k % 2 == 1 {
                    acc = acc - t;
                } else {
                    acc += &t;
                }
            }
            out.push(acc);
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------- regeneration

/// One expected row from the embedded table files.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExpectedRow {
    pub source: String,
    pub group: String,
    pub dimension: u64,
    pub counts: Vec<u64>,
}

/// Outcome for a single row vector within a (group, dimension) block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum RowStatus {
    /// Listed and computed.
    Match,
    /// Listed but no character produces it.
    Missing,
    /// Computed but not listed.
    Extra,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RowComparison {
    pub counts: Vec<u64>,
    pub status: RowStatus,
    /// Characters producing this vector; more than one means the row is shared.
    pub characters: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockComparison {
    pub source: String,
    pub group: String,
    pub dimension: u64,
    pub matched: bool,
    pub ambiguous: bool,
    pub expected: Vec<Vec<u64>>,
    pub rows: Vec<RowComparison>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RegenReport {
    pub blocks: Vec<BlockComparison>,
    pub expected_rows: usize,
    pub matched_rows: usize,
    pub mismatched_blocks: usize,
}

impl RegenReport {
    pub fn passed(&self) -> bool {
        self.mismatched_blocks == 0 && self.matched_rows == self.expected_rows
    }
}

/// Faithful irreducibles of the given degree; these are the rows a table lists.
pub fn faithful_of_degree(tbl: &CharacterTable, dim: u64) -> Vec<String> {
    tbl.irreducibles
        .iter()
        .filter(|c| c.degree() == dim && tbl.is_faithful(&c.values))
        .map(|c| c.label.clone())
        .collect()
}

/// Computes every requested (group, dimension) block and compares it with
/// the expected rows as sets of distinct row vectors.
pub fn regen_tables(
    tables: &BTreeMap<String, CharacterTable>,
    expected: &[ExpectedRow],
    d_max: u64,
) -> std::result::Result<RegenReport, ChartabError> {
    let mut blocks: Vec<(String, String, u64)> = Vec::new();
    for r in expected {
        let key = (r.source.clone(), r.group.clone(), r.dimension);
        if !blocks.contains(&key) {
            blocks.push(key);
        }
    }
    let work: Vec<(usize, String)> = blocks
        .iter()
        .enumerate()
        .map(|(i, (_, g, d))| {
            let tbl = tables.get(g).ok_or_else(|| ChartabError::UnknownLabel(g.clone()))?;
            Ok(faithful_of_degree(tbl, *d).into_iter().map(move |l| (i, l)).collect::<Vec<_>>())
        })
        .collect::<std::result::Result<Vec<_>, ChartabError>>()?
        .into_iter()
        .flatten()
        .collect();
    let rows: Vec<(usize, InvariantRow)> = work
        .par_iter()
        .map(|(i, label)| {
            let tbl = &tables[&blocks[*i].1];
            invariant_table(tbl, label, d_max).map(|r| (*i, r))
        })
        .collect::<std::result::Result<_, _>>()?;

    let mut out = Vec::new();
    let mut matched_rows = 0;
    let mut mismatched = 0;
    for (i, (source, group, dim)) in blocks.iter().enumerate() {
        let exp: Vec<Vec<u64>> = expected
            .iter()
            .filter(|r| &r.source == source && &r.group == group && r.dimension == *dim)
            .map(|r| r.counts[..d_max as usize].to_vec())
            .collect();
        let mut by_vec: BTreeMap<Vec<u64>, Vec<String>> = BTreeMap::new();
        for (_, r) in rows.iter().filter(|(j, _)| *j == i) {
            by_vec.entry(r.counts.clone()).or_default().push(r.character.clone());
        }
        let exp_set: BTreeSet<&Vec<u64>> = exp.iter().collect();
        let mut cmp = Vec::new();
        for e in &exp {
            let chars = by_vec.get(e).cloned().unwrap_or_default();
            let status = if chars.is_empty() { RowStatus::Missing } else { RowStatus::Match };
            if status == RowStatus::Match {
                matched_rows += 1;
            }
            cmp.push(RowComparison { counts: e.clone(), status, characters: chars });
        }
        for (v, chars) in &by_vec {
            if !exp_set.contains(v) {
                cmp.push(RowComparison { counts: v.clone(), status: RowStatus::Extra, characters: chars.clone() });
            }
        }
        let matched = cmp.iter().all(|r| r.status == RowStatus::Match);
        if !matched {
            mismatched += 1;
        }
        let ambiguous = by_vec.values().any(|c| c.len() > 1);
        out.push(BlockComparison {
            source: source.clone(),
            group: group.clone(),
            dimension: *dim,
            matched,
            ambiguous,
            expected: exp,
            rows: cmp,
        });
    }
    Ok(RegenReport { blocks: out, expected_rows: expected.len(), matched_rows, mismatched_blocks: mismatched })
}

// ---------------------------------------------------------------- 3.A7 sextics

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DecompositionClaim {
    pub description: String,
    pub expected_degrees: Vec<u64>,
    pub computed_degrees: Vec<u64>,
    pub passed: bool,
}

/// Degrees (with multiplicity, ascending) of the strict decomposition of φ.
pub fn constituent_degrees(tbl: &CharacterTable, phi: &VirtualCharacter) -> Result<Vec<u64>> {
    Ok(tbl.decompose(phi, DecomposeMode::Strict)?.constituent_degrees(tbl))
}

fn claim(description: String, expected: Vec<u64>, computed: Vec<u64>) -> DecompositionClaim {
    let passed = expected == computed;
    DecompositionClaim { description, expected_degrees: expected, computed_degrees: computed, passed }
}

/// S² decompositions and cubic invariants of the 6-dimensional irreducibles
/// of 3.A7, plus the two tensor products between them.
pub fn sym_square_decompositions_3a7(tbl: &CharacterTable) -> Result<Vec<DecompositionClaim>> {
    let sixes: Vec<&crate::chartab::Irreducible> = tbl.irreducibles.iter().filter(|c| c.degree() == 6).collect();
    let mut out = Vec::new();
    let mut faithful = Vec::new();
    let mut plain = Vec::new();
    for chi in &sixes {
        let v = tbl.virtual_of(&chi.values);
        let is_f = !tbl.kernel_classes(&chi.values).iter().any(|&c| c != tbl.identity_class());
        let s2 = constituent_degrees(tbl, &sym_power(tbl, &v, 2)?)?;
        let want = if is_f { vec![6, 15] } else { vec![1, 6, 14] };
        let kind = if is_f { "faithful" } else { "non-faithful" };
        out.push(claim(format!("S^2 of {kind} {}", chi.label), want, s2));
        let cubic = invariant_count(tbl, &v, 3)?;
        out.push(claim(format!("cubic invariants of {}", chi.label), vec![1], vec![cubic]));
        if is_f {
            faithful.push(v);
        } else {
            plain.push(v);
        }
    }
    // V' ⊗ V'' for the faithful pair, V' ⊗ U for a faithful and the non-faithful one
    if faithful.len() == 2 {
        let t = tensor(tbl, &faithful[0], &faithful[1])?;
        out.push(claim("V' (x) V''".into(), vec![1, 14, 21], constituent_degrees(tbl, &t)?));
    } else {
        out.push(claim("V' (x) V''".into(), vec![1, 14, 21], vec![]));
    }
    if let (Some(f), Some(u)) = (faithful.first(), plain.first()) {
        let t = tensor(tbl, f, u)?;
        out.push(claim("V' (x) U".into(), vec![15, 21], constituent_degrees(tbl, &t)?));
    } else {
        out.push(claim("V' (x) U".into(), vec![15, 21], vec![]));
    }
    Ok(out)
}

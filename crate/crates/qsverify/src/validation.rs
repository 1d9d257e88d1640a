//! Whole-dataset validation: table and fusion checks, permutation-group
//! oracles, catalog consistency and cross-file references.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::casefile::{OrbitRule, Rule};
use crate::chartab::{validate, validate_catalog, validate_fusion, CharacterTable, Check, DecomposeMode, ValidationReport};
use crate::cyclo::Cyclotomic;
use crate::data::DataSet;
use crate::permgrp::{enumerate, polya_invariant_count, PermFile, PermGroup, DEFAULT_CAP};
use crate::repring::{invariant_counts, TABLE_DEGREE};

/// Result of matching a permutation realisation against a curated table.
#[derive(Debug, Clone, Serialize)]
pub struct OracleResult {
    pub report: ValidationReport,
    /// Table class index → permutation class index, when a consistent bijection exists.
    #[serde(skip)]
    pub class_map: Option<Vec<usize>>,
    /// Pólya-telescoped invariant counts of π − 1 when the action is 2-transitive.
    pub deleted_standard: Option<DeletedStandard>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DeletedStandard {
    pub dimension: u64,
    pub polya_counts: Vec<u64>,
    pub character_counts: Vec<u64>,
}

/// Finds a bijection of classes preserving sizes, element orders and every
/// tabulated power map. Backtracking over classes in table order.
pub fn match_classes(tbl: &CharacterTable, grp: &PermGroup) -> Option<Vec<usize>> {
    let pcls = grp.conjugacy_classes();
    if pcls.len() != tbl.class_count() {
        return None;
    }
    let primes: Vec<u32> = tbl.power_maps.keys().copied().collect();
    let ps: Vec<u64> = primes.iter().map(|&p| p as u64).collect();
    let pmaps = grp.power_maps(&pcls, &ps);
    let tmaps: Vec<&Vec<usize>> = primes.iter().map(|p| &tbl.power_maps[p]).collect();
    let candidates: Vec<Vec<usize>> = tbl
        .classes
        .iter()
        .map(|c| {
            (0..pcls.len())
                .filter(|&j| pcls[j].size as u64 == c.size && pcls[j].order == c.order as u64)
                .collect()
        })
        .collect();
    let n = tbl.class_count();
    let mut sigma = vec![usize::MAX; n];
    let mut used = vec![false; n];

    fn consistent(i: usize, sigma: &[usize], tmaps: &[&Vec<usize>], pmaps: &[Vec<usize>]) -> bool {
        for (tm, pm) in tmaps.iter().zip(pmaps) {
            // image of i and every class mapping to i
            let t = tm[i];
            if sigma[t] != usize::MAX && pm[sigma[i]] != sigma[t] {
                return false;
            }
            for (k, &tk) in tm.iter().enumerate() {
                if tk == i && sigma[k] != usize::MAX && pm[sigma[k]] != sigma[i] {
                    return false;
                }
            }
        }
        true
    }

    fn go(
        i: usize,
        cands: &[Vec<usize>],
        sigma: &mut [usize],
        used: &mut [bool],
        tmaps: &[&Vec<usize>],
        pmaps: &[Vec<usize>],
    ) -> bool {
        if i == sigma.len() {
            return true;
        }
        for &j in &cands[i] {
            if used[j] {
                continue;
            }
            sigma[i] = j;
            used[j] = true;
            if consistent(i, sigma, tmaps, pmaps) && go(i + 1, cands, sigma, used, tmaps, pmaps) {
                return true;
            }
            used[j] = false;
            sigma[i] = usize::MAX;
        }
        false
    }

    go(0, &candidates, &mut sigma, &mut used, &tmaps, &pmaps).then_some(sigma)
}

/// Runs the permutation oracle for one realisation.
pub fn perm_oracle(tbl: &CharacterTable, pf: &PermFile) -> OracleResult {
    let subject = format!("permutation oracle {}", tbl.group);
    let grp = match enumerate(&pf.generators, pf.degree, DEFAULT_CAP) {
        Ok(g) => g,
        Err(e) => {
            return OracleResult {
                report: ValidationReport { subject, checks: vec![Check::new("enumerate", false, e.to_string())] },
                class_map: None,
                deleted_standard: None,
            }
        }
    };
    let mut checks = vec![Check::new(
        "group order",
        grp.order() as u64 == tbl.order,
        format!("{} elements from {} generators of degree {}", grp.order(), pf.generators.len(), pf.degree),
    )];
    let sigma = match_classes(tbl, &grp);
    checks.push(Check::new(
        "classes and power maps",
        sigma.is_some(),
        match &sigma {
            Some(_) => "sizes, element orders and power maps agree under a class bijection".to_string(),
            None => "no class bijection preserves sizes, orders and power maps".to_string(),
        },
    ));
    let mut deleted = None;
    if let Some(sigma) = &sigma {
        let pcls = grp.conjugacy_classes();
        let fixed: Vec<Cyclotomic> = sigma
            .iter()
            .map(|&j| {
                let f = pcls[j].representative.images().iter().enumerate().filter(|(a, b)| *a == **b as usize).count();
                Cyclotomic::from_int(f as i64)
            })
            .collect();
        let pi = tbl.virtual_of(&fixed);
        let dec = tbl.decompose(&pi, DecomposeMode::Strict);
        checks.push(Check::new(
            "permutation character decomposes",
            dec.is_ok(),
            match &dec {
                Ok(d) => format!("constituent degrees {:?}", d.constituent_degrees(tbl)),
                Err(e) => e.to_string(),
            },
        ));
        // 2-transitive: π = 1 + irreducible, so S^d(π − 1) invariants telescope from orbit counts
        if let Ok(d) = &dec {
            let degrees = d.constituent_degrees(tbl);
            if degrees.len() == 2 && degrees[0] == 1 {
                let ci = grp.cycle_index(&pcls);
                let orbits: Vec<u64> = (0..=TABLE_DEGREE as usize).map(|k| polya_invariant_count(&ci, k)).collect();
                let polya: Vec<u64> = (1..orbits.len()).map(|k| orbits[k] - orbits[k - 1]).collect();
                let one = tbl.trivial();
                let chi = tbl.virtual_of(&pi.values.iter().zip(&one.values).map(|(a, b)| a - b).collect::<Vec<_>>());
                let counts = invariant_counts(tbl, &chi, TABLE_DEGREE).unwrap_or_default();
                checks.push(Check::new(
                    "Polya telescoping matches character counts",
                    polya == counts,
                    format!("Polya {polya:?}, characters {counts:?}"),
                ));
                deleted = Some(DeletedStandard { dimension: degrees[1], polya_counts: polya, character_counts: counts });
            }
        }
    }
    OracleResult { report: ValidationReport { subject, checks }, class_map: sigma, deleted_standard: deleted }
}

/// Every table validated, every fusion checked, catalogs reconciled with the
/// maximal-subgroup list, permutation oracles, and cross-file references.
#[derive(Debug, Clone, Serialize)]
pub struct DatasetReport {
    pub reports: Vec<ValidationReport>,
    pub oracles: Vec<OracleResult>,
}

impl DatasetReport {
    pub fn passed(&self) -> bool {
        self.reports.iter().all(|r| r.passed()) && self.oracles.iter().all(|o| o.report.passed())
    }

    pub fn failures(&self) -> Vec<(String, String)> {
        self.reports
            .iter()
            .chain(self.oracles.iter().map(|o| &o.report))
            .flat_map(|r| r.checks.iter().filter(|c| !c.passed).map(move |c| (r.subject.clone(), c.name.clone())))
            .collect()
    }
}

fn expected_row_check(ds: &DataSet, group: &str, ds_row: &DeletedStandard) -> Option<Check> {
    let mut rows = ds.expected_rows.iter().filter(|r| r.group == group && r.dimension == ds_row.dimension).peekable();
    rows.peek()?;
    let found = rows.any(|r| r.counts == ds_row.polya_counts);
    Some(Check::new(
        format!("Polya counts of the {}-dimensional deleted standard match the expected row", ds_row.dimension),
        found,
        format!("{:?}", ds_row.polya_counts),
    ))
}

pub fn validate_dataset(ds: &DataSet) -> DatasetReport {
    let mut reports = vec![ds.manifest.clone()];
    let tables: Vec<&CharacterTable> = ds.tables.values().collect();
    reports.extend(tables.par_iter().map(|t| validate(t)).collect::<Vec<_>>());

    for f in ds.fusions.values() {
        match (ds.table(&f.sub), ds.table(&f.group)) {
            (Some(s), Some(g)) => reports.push(validate_fusion(f, s, g)),
            _ => reports.push(ValidationReport {
                subject: format!("fusion {} -> {}", f.sub, f.group),
                checks: vec![Check::new("tables present", false, "subgroup or group table missing")],
            }),
        }
    }

    for cat in ds.catalogs.values() {
        let mut r = match ds.table(&cat.group) {
            Some(t) => validate_catalog(cat, t.order),
            None => ValidationReport {
                subject: format!("catalog {}", cat.group),
                checks: vec![Check::new("group table present", false, cat.group.clone())],
            },
        };
        let mut from_cat: Vec<(String, u64)> = cat
            .entries
            .iter()
            .filter(|e| e.maximal)
            .flat_map(|e| std::iter::repeat_n((e.structure.clone(), e.index), e.class_count as usize))
            .collect();
        let mut from_list: Vec<(String, u64)> =
            ds.maximal.iter().filter(|m| m.group == cat.group).map(|m| (m.structure.clone(), m.index)).collect();
        from_cat.sort();
        from_list.sort();
        r.checks.push(Check::new(
            "maximal entries agree with the maximal-subgroup list",
            from_cat == from_list,
            format!("catalog {from_cat:?}, list {from_list:?}"),
        ));
        reports.push(r);
    }

    reports.push(reference_report(ds));

    let pairs: Vec<(&PermFile, &CharacterTable)> =
        ds.perms.values().filter_map(|p| ds.table(&p.name).map(|t| (p, t))).collect();
    let mut oracles: Vec<OracleResult> = pairs.par_iter().map(|(p, t)| perm_oracle(t, p)).collect();
    for o in &mut oracles {
        if let Some(d) = o.deleted_standard.clone() {
            let group = o.report.subject.trim_start_matches("permutation oracle ").to_string();
            o.report.checks.extend(expected_row_check(ds, &group, &d));
        }
    }
    let orphan: Vec<&str> = ds.perms.values().filter(|p| ds.table(&p.name).is_none()).map(|p| p.name.as_str()).collect();
    if !orphan.is_empty() {
        reports.push(ValidationReport {
            subject: "permutation files".into(),
            checks: vec![Check::new("every realisation has a table", false, orphan.join(", "))],
        });
    }
    DatasetReport { reports, oracles }
}

/// Labels referenced from cases, expectations and expected rows must resolve.
fn reference_report(ds: &DataSet) -> ValidationReport {
    let mut dangling: Vec<String> = Vec::new();
    let mut need_table = |label: &str, from: &str| {
        if ds.table(label).is_none() {
            dangling.push(format!("{from}: table {label}"));
        }
    };
    for c in &ds.cases {
        need_table(&c.group, &c.id);
        need_table(&c.cover, &c.id);
    }
    for r in &ds.expected_rows {
        need_table(&r.group, &r.source);
    }
    for c in &ds.cases {
        if !ds.catalogs.contains_key(&c.catalog) {
            dangling.push(format!("{}: catalog {}", c.id, c.catalog));
        }
        if let Some(t) = ds.table(&c.cover) {
            if t.irreducible(&c.rep.character).is_err() {
                dangling.push(format!("{}: character {}", c.id, c.rep.character));
            }
        }
        for rule in &c.rules {
            let fusion = match rule {
                Rule::Orbit { rule: OrbitRule::NoLinear { fusion } | OrbitRule::Tangent { fusion }, .. } => Some(fusion),
                Rule::Line { fusion, .. } => Some(fusion),
                _ => None,
            };
            if let Some(f) = fusion {
                if !ds.fusions.contains_key(f) {
                    dangling.push(format!("{}: fusion {f}", c.id));
                }
            }
        }
        if !ds.case_expectations.contains_key(&c.id) {
            dangling.push(format!("{}: no expectation entry", c.id));
        }
    }
    let ids: BTreeMap<&str, ()> = ds.cases.iter().map(|c| (c.id.as_str(), ())).collect();
    for id in ds.case_expectations.keys() {
        let global = matches!(id.as_str(), "quotient-invariants" | "a7-exclusion");
        if !global && !ids.contains_key(id.as_str()) {
            dangling.push(format!("expectations: case {id}"));
        }
    }
    ValidationReport {
        subject: "cross-file references".into(),
        checks: vec![Check::new("no dangling references", dangling.is_empty(), dangling.join("; "))],
    }
}

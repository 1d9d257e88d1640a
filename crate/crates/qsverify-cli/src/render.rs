//! Markdown output.

use std::fmt::Write;

use qsverify::casecheck::{AllCases, Basis, CaseReport, CheckReport, Verdict};
use qsverify::repring::{InvariantRow, RegenReport, RowStatus};
use qsverify::{DatasetReport, ValidationReport};

use crate::HurwitzRecord;

fn mark(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn cell(s: &str) -> String {
    s.replace('|', "\\|")
}

fn report(out: &mut String, r: &ValidationReport) {
    let _ = writeln!(out, "### {} ({})\n", r.subject, mark(r.passed()));
    for c in &r.checks {
        let _ = writeln!(out, "- {} {}: {}", mark(c.passed), c.name, cell(&c.detail));
    }
    out.push('\n');
}

fn check_report(out: &mut String, r: &CheckReport) {
    let _ = writeln!(out, "## {}: {}\n", r.id, r.title);
    let _ = writeln!(out, "Verdict: {}, assumed steps: {}\n", r.final_verdict.as_str(), r.assumed_count);
    let _ = writeln!(out, "| step | basis | result | detail |\n|---|---|---|---|");
    for i in &r.items {
        let _ = writeln!(out, "| {} | {} | {} | {} |", cell(&i.name), basis(i.basis), mark(i.passed), cell(&i.detail));
    }
    out.push('\n');
}

fn basis(b: Basis) -> &'static str {
    match b {
        Basis::Verified => "verified",
        Basis::Assumed => "assumed",
    }
}

fn verdict(v: &Verdict) -> (String, String) {
    match v {
        Verdict::Eliminated { reason, basis: b } => (format!("eliminated ({})", basis(*b)), reason.clone()),
        Verdict::Survives { reason } => ("SURVIVES".into(), reason.clone()),
    }
}

pub fn validate(ds: &DatasetReport, consistency: &CheckReport) -> String {
    let mut out = String::from("# Data validation\n\n");
    for r in &ds.reports {
        report(&mut out, r);
    }
    out.push_str("## Permutation oracles\n\n");
    for o in &ds.oracles {
        report(&mut out, &o.report);
    }
    check_report(&mut out, consistency);
    out
}

fn counts(v: &[u64]) -> String {
    v.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" ")
}

pub fn tables(r: &RegenReport, unlisted: &[InvariantRow]) -> String {
    let mut out = format!(
        "# Invariant tables\n\n{} of {} expected rows matched; {} mismatched blocks\n\n",
        r.matched_rows, r.expected_rows, r.mismatched_blocks
    );
    out.push_str("| source | group | dim | counts | status | characters |\n|---|---|---|---|---|---|\n");
    for b in &r.blocks {
        for row in &b.rows {
            let status = match row.status {
                RowStatus::Match => "MATCH",
                RowStatus::Missing => "MISSING",
                RowStatus::Extra => "EXTRA",
            };
            let _ = writeln!(
                out,
                "| {} | {} | {} | {} | {}{} | {} |",
                b.source,
                b.group,
                b.dimension,
                counts(&row.counts),
                status,
                if b.ambiguous { " (shared)" } else { "" },
                row.characters.join(", ")
            );
        }
    }
    for row in unlisted {
        let _ = writeln!(
            out,
            "| - | {} | {} | {} | UNLISTED | {} |",
            row.group,
            row.dimension,
            counts(&row.counts),
            row.character
        );
    }
    out
}

pub fn hurwitz(records: &[HurwitzRecord]) -> String {
    let mut out = String::from("| order | genus | orders | lhs | verdict | witness | box check |\n|---|---|---|---|---|---|---|\n");
    for r in records {
        let orders = r.orders.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        let witness = r
            .witness
            .as_ref()
            .map(|w| w.iter().filter(|(_, c)| **c > 0).map(|(r, c)| format!("c{r}={c}")).collect::<Vec<_>>().join(" "))
            .unwrap_or_default();
        let boxed = match r.box_agrees {
            Some(b) => mark(b),
            None => "-",
        };
        let _ = writeln!(out, "| {} | {} | {} | {} | {} | {} | {} |", r.group_order, r.genus, orders, r.lhs, r.verdict, witness, boxed);
    }
    out
}

fn case(out: &mut String, c: &CaseReport) {
    let _ = writeln!(out, "## {}: {}\n", c.id, c.title);
    let _ = writeln!(
        out,
        "Group {} (cover {}), n = {}, H^3 = {}, m = {}, h0 = {}, representation {} of dimension {}.\n",
        c.group, c.cover, c.n, c.h3, c.m, c.h0, c.representation, c.representation_dim
    );
    let _ = writeln!(out, "Verdict: {}, assumed steps: {}\n", c.final_verdict.as_str(), c.assumed_count);
    let _ = writeln!(out, "{}\n", c.catalog_note);
    out.push_str("### Orbits\n\n");
    if c.orbit_candidates.is_empty() {
        let _ = writeln!(out, "No catalog index lies in ({}, {}].\n", c.orbit_lower_bound, c.h0);
    } else {
        out.push_str("| size | stabilisers | verdict | reason |\n|---|---|---|---|\n");
        for o in &c.orbit_candidates {
            let (v, why) = verdict(&o.verdict);
            let _ = writeln!(out, "| {} | {} | {} | {} |", o.size, cell(&o.structures.join(", ")), v, cell(&why));
        }
        out.push('\n');
        for o in &c.orbit_candidates {
            for s in &o.stabilisers {
                for r in &s.outcomes {
                    let _ = writeln!(
                        out,
                        "- orbit {} / {}: {} [{}] {}; {}",
                        o.size,
                        s.key,
                        r.rule,
                        if r.eliminated { basis(r.basis) } else { "not eliminated" },
                        r.detail,
                        r.citation
                    );
                }
            }
        }
        out.push('\n');
    }
    out.push_str("### Curves\n\n| r | d | g | sections | verdict | reason |\n|---|---|---|---|---|---|\n");
    for k in &c.curve_candidates {
        let (v, why) = verdict(&k.verdict);
        let _ = writeln!(out, "| {} | {} | {} | {} | {} | {} |", k.r, k.d, k.g, k.sections, v, cell(&why));
    }
    out.push('\n');
    if !c.side_checks.is_empty() {
        out.push_str("### Side checks\n\n");
        for s in &c.side_checks {
            let _ = writeln!(out, "- {} {}: {} ({})", mark(s.passed), s.description, s.detail, s.citation);
        }
        out.push('\n');
    }
    out.push_str("### Assumed steps\n\n");
    for a in &c.assumptions {
        let _ = writeln!(out, "- {}: {}", a.key, a.citation);
    }
    out.push('\n');
}

pub fn cases(all: &AllCases) -> String {
    let mut out = String::from("# Case reports\n\n");
    for c in &all.cases {
        case(&mut out, c);
    }
    for r in &all.checks {
        check_report(&mut out, r);
    }
    out
}

pub fn lift(family: &[String], dim: u64, cands: &[(&str, &str)]) -> String {
    let mut out = format!("# Degree-{dim} characters faithful on the center over {}\n\n", family.join(", "));
    if cands.is_empty() {
        out.push_str("None.\n");
    }
    for (cover, chi) in cands {
        let _ = writeln!(out, "- {cover} {chi}");
    }
    out
}

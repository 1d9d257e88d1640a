//! Exact character-table arithmetic and the verification pipelines built on it.
//!
//! - [`cyclo`]: elements of cyclotomic fields with exact rational coefficients.
//! - [`permgrp`]: permutation groups used as an independent oracle.
//! - [`chartab`]: character tables, fusions, subgroup catalogs and their checks.
//! - [`repring`]: tensor, symmetric and exterior powers; invariant tables.
//! - [`hurwitz`]: signature feasibility and the automorphism bound.
//! - [`casecheck`]: orbit and curve eliminations per case.

pub mod casecheck;
pub mod casefile;
pub mod chartab;
pub mod cyclo;
pub mod data;
pub mod hurwitz;
pub mod permgrp;
pub mod repring;
pub mod validation;

pub use casecheck::{AllCases, Basis, CaseError, CaseReport, CheckReport, FinalVerdict, Verdict};
pub use casefile::FanoCase;
pub use chartab::{
    CharacterTable, ChartabError, Check, ConjClass, Decomposition, DecomposeMode, FusionMap, Irreducible,
    SubgroupCatalog, ValidationReport, VirtualCharacter,
};
pub use cyclo::{CycloError, Cyclotomic, Rational};
pub use data::{DataError, DataSet};
pub use hurwitz::{Feasibility, HurwitzError, HurwitzInstance, HurwitzSolution};
pub use permgrp::{PermError, PermGroup, Permutation};
pub use repring::{ExpectedRow, InvariantRow, RegenReport};
pub use validation::DatasetReport;

/// Version tag carried by every JSON document the CLI emits.
pub const SCHEMA_VERSION: &str = "1";

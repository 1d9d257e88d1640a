//! Riemann–Hurwitz signature feasibility for actions with rational quotient,
//! and the Hurwitz automorphism bound.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use serde::Serialize;
use thiserror::Error;

use crate::cyclo::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HurwitzError {
    #[error("group order must be positive")]
    ZeroOrder,
    #[error("cyclic order {r} does not divide the group order {order}")]
    OrderNotDividing { r: u64, order: u64 },
    #[error("precondition violated: genus {genus} is not below |G|/4 = {order}/4")]
    PreconditionViolated { genus: u64, order: u64 },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// (|G|, cyclic orders r ≥ 2, genus g).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HurwitzInstance {
    pub group_order: u64,
    pub cyclic_orders: Vec<u64>,
    pub genus: u64,
}

/// Coefficients c_r of a solution, keyed by r.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HurwitzSolution {
    pub coefficients: BTreeMap<u64, u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Feasibility {
    Feasible { witness: HurwitzSolution },
    /// Exhaustive search found nothing; `nodes` counts the visited search nodes.
    Infeasible { nodes: u64 },
}

impl Feasibility {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Feasible { .. })
    }
}

impl HurwitzInstance {
    /// Sorts and deduplicates the orders and drops r = 1.
    pub fn new(group_order: u64, orders: &[u64], genus: u64) -> Result<Self, HurwitzError> {
        if group_order == 0 {
            return Err(HurwitzError::ZeroOrder);
        }
        let mut rs: Vec<u64> = orders.iter().copied().filter(|&r| r >= 2).collect();
        rs.sort_unstable();
        rs.dedup();
        if let Some(&r) = rs.iter().find(|&&r| !group_order.is_multiple_of(r)) {
            return Err(HurwitzError::OrderNotDividing { r, order: group_order });
        }
        Ok(HurwitzInstance { group_order, cyclic_orders: rs, genus })
    }

    /// (2g − 2)/|G| + 2.
    pub fn lhs(&self) -> Rational {
        let g = BigInt::from(self.genus);
        Rational::new(2 * g - 2, BigInt::from(self.group_order)) + Rational::from_integer(BigInt::from(2))
    }

    /// Everything scaled by |G| (each r divides |G|): integer weights and target.
    fn scaled(&self) -> (Vec<(u64, i128)>, i128) {
        let n = self.group_order as i128;
        let mut terms: Vec<(u64, i128)> = self.cyclic_orders.iter().map(|&r| (r, n - n / r as i128)).collect();
        // descending weight 1 − 1/r, i.e. descending r
        terms.sort_by_key(|t| std::cmp::Reverse(t.1));
        (terms, 2 * self.genus as i128 - 2 + 2 * n)
    }

    /// Depth-first search over c_r with terms in descending weight.
    pub fn feasible(&self) -> Result<Feasibility, HurwitzError> {
        if 4 * self.genus >= self.group_order {
            return Err(HurwitzError::PreconditionViolated { genus: self.genus, order: self.group_order });
        }
        let (terms, target) = self.scaled();
        let mut coeffs = vec![0u64; terms.len()];
        let mut nodes = 0u64;
        let found = dfs(&terms, 0, target, &mut coeffs, &mut nodes);
        Ok(if found {
            Feasibility::Feasible { witness: self.solution(&terms, &coeffs) }
        } else {
            Feasibility::Infeasible { nodes }
        })
    }

    fn solution(&self, terms: &[(u64, i128)], coeffs: &[u64]) -> HurwitzSolution {
        HurwitzSolution { coefficients: terms.iter().zip(coeffs).map(|((r, _), &c)| (*r, c)).collect() }
    }

    /// Σ c_r (1 − 1/r) for a candidate.
    pub fn evaluate(sol: &HurwitzSolution) -> Rational {
        sol.coefficients
            .iter()
            .map(|(&r, &c)| Rational::new(BigInt::from(c) * BigInt::from(r - 1), BigInt::from(r)))
            .sum()
    }

    /// All solutions in the box [0, 2·lhs]^orders, in the search order of [`feasible`].
    pub fn box_solutions(&self) -> Vec<HurwitzSolution> {
        let (terms, target) = self.scaled();
        if target < 0 {
            return Vec::new();
        }
        let bound = (2 * target / self.group_order as i128) as u64;
        let k = terms.len();
        let mut out = Vec::new();
        let mut c = vec![0u64; k];
        loop {
            let s: i128 = c.iter().zip(&terms).map(|(&x, (_, w))| x as i128 * w).sum();
            if s == target {
                out.push(self.solution(&terms, &c));
            }
            // lexicographic increment, last position fastest
            let mut i = k;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                if c[i] < bound {
                    c[i] += 1;
                    for x in &mut c[i + 1..] {
                        *x = 0;
                    }
                    break;
                }
            }
        }
    }
}

fn dfs(terms: &[(u64, i128)], i: usize, rem: i128, coeffs: &mut [u64], nodes: &mut u64) -> bool {
    *nodes += 1;
    if rem == 0 {
        for c in &mut coeffs[i..] {
            *c = 0;
        }
        return true;
    }
    if rem < 0 || i == terms.len() {
        return false;
    }
    let w = terms[i].1;
    if i + 1 == terms.len() {
        if rem % w == 0 {
            coeffs[i] = (rem / w) as u64;
            return true;
        }
        return false;
    }
    // remaining terms can only reach multiples of their gcd
    let g = terms[i..].iter().fold(0i128, |a, t| a.gcd(&t.1));
    if rem % g != 0 {
        return false;
    }
    for c in 0..=(rem / w) {
        coeffs[i] = c as u64;
        if dfs(terms, i + 1, rem - c * w, coeffs, nodes) {
            return true;
        }
    }
    false
}

/// 84(g − 1) ≥ |G|; false for g ≤ 1.
pub fn hurwitz_bound(group_order: u64, genus: u64) -> bool {
    genus >= 2 && 84 * (genus - 1) >= group_order
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum GenusVerdict {
    EliminatedBound,
    EliminatedSignature { nodes: u64 },
    EliminatedPrecondition,
    Survives { witness: HurwitzSolution },
}

impl GenusVerdict {
    pub fn eliminated(&self) -> bool {
        !matches!(self, GenusVerdict::Survives { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GenusResult {
    pub genus: u64,
    pub lhs: String,
    #[serde(flatten)]
    pub verdict: GenusVerdict,
}

/// Applies the Hurwitz bound with `bound_order` and then the signature
/// search with `signature_order` to every genus in `lo..=hi`.
pub fn genus_range_filter_split(
    bound_order: u64,
    signature_order: u64,
    lo: u64,
    hi: u64,
    orders: &[u64],
) -> Result<Vec<GenusResult>, HurwitzError> {
    (lo..=hi)
        .map(|g| {
            let inst = HurwitzInstance::new(signature_order, orders, g)?;
            let lhs = inst.lhs().to_string();
            let verdict = if !hurwitz_bound(bound_order, g) {
                GenusVerdict::EliminatedBound
            } else {
                match inst.feasible() {
                    Ok(Feasibility::Infeasible { nodes }) => GenusVerdict::EliminatedSignature { nodes },
                    Ok(Feasibility::Feasible { witness }) => GenusVerdict::Survives { witness },
                    Err(HurwitzError::PreconditionViolated { .. }) => GenusVerdict::EliminatedPrecondition,
                    Err(e) => return Err(e),
                }
            };
            Ok(GenusResult { genus: g, lhs, verdict })
        })
        .collect()
}

/// Bound and signature with the same group order.
pub fn genus_range_filter(order: u64, lo: u64, hi: u64, orders: &[u64]) -> Result<Vec<GenusResult>, HurwitzError> {
    genus_range_filter_split(order, order, lo, hi, orders)
}

/// Parses `order genus r1,r2,...` lines (blank lines and `#` comments skipped).
pub fn parse_batch(text: &str) -> Result<Vec<HurwitzInstance>, HurwitzError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |msg: &str| HurwitzError::Parse { line: i + 1, msg: msg.to_string() };
        let f: Vec<&str> = line.split_whitespace().collect();
        if f.len() != 3 {
            return Err(err("expected `order genus r1,r2,...`"));
        }
        let order = f[0].parse().map_err(|_| err("bad order"))?;
        let genus = f[1].parse().map_err(|_| err("bad genus"))?;
        let rs = parse_orders(f[2]).map_err(|_| err("bad order list"))?;
        out.push(HurwitzInstance::new(order, &rs, genus)?);
    }
    Ok(out)
}

/// Parses a comma-separated list of positive integers.
pub fn parse_orders(s: &str) -> Result<Vec<u64>, std::num::ParseIntError> {
    s.split(',').map(|t| t.trim().parse::<u64>()).collect()
}

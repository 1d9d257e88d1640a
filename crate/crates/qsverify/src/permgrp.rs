//! Brute-force permutation groups: closure, conjugacy classes, power maps and
//! cycle-index invariant counting.

use std::collections::{BTreeSet, HashMap, VecDeque};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

/// Default closure cap.
pub const DEFAULT_CAP: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("closure exceeded the cap of {0} elements")]
    CapExceeded(usize),
    #[error("generators act on different degrees ({0} and {1})")]
    DegreeMismatch(usize, usize),
    #[error("not a permutation: {0}")]
    NotBijective(String),
    #[error("degree {0} exceeds the supported maximum of 65536")]
    DegreeTooLarge(usize),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// A bijection of {0, …, degree − 1}.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<u16>);

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation((0..degree).map(|i| i as u16).collect())
    }

    /// Builds a permutation from 0-based images, checking bijectivity.
    pub fn from_images(images: Vec<usize>) -> Result<Self, PermError> {
        let n = images.len();
        if n > 1 << 16 {
            return Err(PermError::DegreeTooLarge(n));
        }
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || std::mem::replace(&mut seen[i], true) {
                return Err(PermError::NotBijective(format!("{images:?}")));
            }
        }
        Ok(Permutation(images.into_iter().map(|i| i as u16).collect()))
    }

    /// Parses 1-based cycle notation such as `(1,2,3)(4,5)`.
    pub fn from_cycles(text: &str, degree: usize) -> Result<Self, PermError> {
        let mut img: Vec<usize> = (0..degree).collect();
        let bad = |m: &str| PermError::NotBijective(format!("{text}: {m}"));
        let t = text.trim();
        if t.is_empty() || t == "()" {
            return Ok(Self::identity(degree));
        }
        let body = t.strip_prefix('(').and_then(|s| s.strip_suffix(')')).ok_or_else(|| bad("expected cycles"))?;
        for cyc in body.split(")(") {
            let pts: Vec<usize> = cyc
                .split(',')
                .map(|p| p.trim().parse::<usize>().map_err(|_| bad("bad point")))
                .collect::<Result<_, _>>()?;
            if pts.iter().any(|&p| p == 0 || p > degree) {
                return Err(bad("point out of range"));
            }
            for (i, &p) in pts.iter().enumerate() {
                img[p - 1] = pts[(i + 1) % pts.len()] - 1;
            }
        }
        Self::from_images(img)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn images(&self) -> &[u16] {
        &self.0
    }

    /// Apply `self` first, then `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        Permutation(self.0.iter().map(|&i| other.0[i as usize]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u16; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j as usize] = i as u16;
        }
        Permutation(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i == j as usize)
    }

    pub fn pow(&self, k: u64) -> Permutation {
        let mut acc = Self::identity(self.degree());
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.then(&base);
            }
            base = base.then(&base);
            e >>= 1;
        }
        acc
    }

    /// Cycle lengths including fixed points, sorted ascending.
    pub fn cycle_type(&self) -> Vec<usize> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut len = 0;
            let mut x = s;
            while !seen[x] {
                seen[x] = true;
                x = self.0[x] as usize;
                len += 1;
            }
            out.push(len);
        }
        out.sort_unstable();
        out
    }

    pub fn order(&self) -> u64 {
        self.cycle_type().into_iter().fold(1u64, |a, l| num_integer::lcm(a, l as u64))
    }
}

/// One conjugacy class of an enumerated group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermClass {
    pub representative: Permutation,
    pub size: usize,
    pub order: u64,
}

/// A permutation group with its elements enumerated.
#[derive(Clone, Debug)]
pub struct PermGroup {
    pub degree: usize,
    pub generators: Vec<Permutation>,
    elements: Vec<Permutation>,
    index: HashMap<Permutation, usize>,
}

/// One term of the cycle index: a class's cycle type weighted by size/|G|.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleIndexTerm {
    pub cycle_type: Vec<usize>,
    pub weight: BigRational,
}

/// Breadth-first closure of the generators, elements sorted by image sequence.
pub fn enumerate(gens: &[Permutation], degree: usize, cap: usize) -> Result<PermGroup, PermError> {
    for g in gens {
        if g.degree() != degree {
            return Err(PermError::DegreeMismatch(degree, g.degree()));
        }
    }
    let id = Permutation::identity(degree);
    let mut seen: HashMap<Permutation, ()> = HashMap::new();
    let mut queue = VecDeque::new();
    seen.insert(id.clone(), ());
    queue.push_back(id);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = x.then(g);
            if !seen.contains_key(&y) {
                if seen.len() >= cap {
                    return Err(PermError::CapExceeded(cap));
                }
                seen.insert(y.clone(), ());
                queue.push_back(y);
            }
        }
    }
    let mut elements: Vec<Permutation> = seen.into_keys().collect();
    elements.sort_unstable();
    let index = elements.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
    Ok(PermGroup { degree, generators: gens.to_vec(), elements, index })
}

impl PermGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn index_of(&self, p: &Permutation) -> Option<usize> {
        self.index.get(p).copied()
    }

    /// Conjugacy classes sorted by (element order, size, representative);
    /// the representative is the smallest member in image order.
    pub fn conjugacy_classes(&self) -> Vec<PermClass> {
        let n = self.elements.len();
        let mut class_of = vec![usize::MAX; n];
        let inv: Vec<Permutation> = self.generators.iter().map(Permutation::inverse).collect();
        let mut raw: Vec<(usize, usize)> = Vec::new(); // (min element index, size)
        for start in 0..n {
            if class_of[start] != usize::MAX {
                continue;
            }
            let cid = raw.len();
            class_of[start] = cid;
            let mut stack = vec![start];
            let mut size = 0;
            let mut min = start;
            while let Some(i) = stack.pop() {
                size += 1;
                min = min.min(i);
                for (g, gi) in self.generators.iter().zip(&inv) {
                    let y = gi.then(&self.elements[i]).then(g);
                    let j = self.index[&y];
                    if class_of[j] == usize::MAX {
                        class_of[j] = cid;
                        stack.push(j);
                    }
                }
            }
            raw.push((min, size));
        }
        let mut classes: Vec<PermClass> = raw
            .into_iter()
            .map(|(i, size)| {
                let r = self.elements[i].clone();
                let order = r.order();
                PermClass { representative: r, size, order }
            })
            .collect();
        classes.sort_by(|a, b| (a.order, a.size, &a.representative).cmp(&(b.order, b.size, &b.representative)));
        classes
    }

    /// Class index of every element, for the given class list.
    fn class_lookup(&self, classes: &[PermClass]) -> HashMap<Permutation, usize> {
        // map each class's members through the conjugation closure once
        let mut out = HashMap::with_capacity(self.elements.len());
        let inv: Vec<Permutation> = self.generators.iter().map(Permutation::inverse).collect();
        for (ci, c) in classes.iter().enumerate() {
            let mut stack = vec![c.representative.clone()];
            out.insert(c.representative.clone(), ci);
            while let Some(x) = stack.pop() {
                for (g, gi) in self.generators.iter().zip(&inv) {
                    let y = gi.then(&x).then(g);
                    if let std::collections::hash_map::Entry::Vacant(e) = out.entry(y.clone()) {
                        e.insert(ci);
                        stack.push(y);
                    }
                }
            }
        }
        out
    }

    /// Class of x^p for a representative x of each class.
    pub fn power_map(&self, classes: &[PermClass], p: u64) -> Vec<usize> {
        let lookup = self.class_lookup(classes);
        classes.iter().map(|c| lookup[&c.representative.pow(p)]).collect()
    }

    /// All power maps for the given exponents, sharing one class lookup.
    pub fn power_maps(&self, classes: &[PermClass], ps: &[u64]) -> Vec<Vec<usize>> {
        let lookup = self.class_lookup(classes);
        ps.iter()
            .map(|&p| classes.iter().map(|c| lookup[&c.representative.pow(p)]).collect())
            .collect()
    }

    pub fn cycle_index(&self, classes: &[PermClass]) -> Vec<CycleIndexTerm> {
        let n = BigInt::from(self.order());
        classes
            .iter()
            .map(|c| CycleIndexTerm {
                cycle_type: c.representative.cycle_type(),
                weight: BigRational::new(BigInt::from(c.size), n.clone()),
            })
            .collect()
    }

    pub fn element_order_set(&self) -> BTreeSet<u64> {
        self.conjugacy_classes().into_iter().map(|c| c.order).collect()
    }
}

/// Number of orbits on degree-d monomials: the t^d coefficient of
/// Σ weight · Π_cycles 1/(1 − t^len).
pub fn polya_invariant_count(ci: &[CycleIndexTerm], d: usize) -> u64 {
    let mut total = BigRational::zero();
    for term in ci {
        let mut series = vec![BigInt::zero(); d + 1];
        series[0] = BigInt::from(1);
        for &len in &term.cycle_type {
            // multiply by 1/(1 - t^len): running sums with stride len
            for k in len..=d {
                let prev = series[k - len].clone();
                series[k] += prev;
            }
        }
        total += &term.weight * BigRational::from_integer(series[d].clone());
    }
    assert!(total.is_integer(), "Polya count is not an integer");
    total.to_integer().to_u64().expect("Polya count fits in u64")
}

/// Parsed generator file.
#[derive(Clone, Debug)]
pub struct PermFile {
    pub name: String,
    pub degree: usize,
    pub generators: Vec<Permutation>,
}

/// Parses `name:`/`degree:` headers, `#` comments and one generator per line.
pub fn parse_perm_file(text: &str) -> Result<PermFile, PermError> {
    let mut name = None;
    let mut degree = None;
    let mut gens = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let err = |msg: String| PermError::Parse { line: ln + 1, msg };
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(v) = line.strip_prefix("name:") {
            name = Some(v.trim().to_string());
        } else if let Some(v) = line.strip_prefix("degree:") {
            degree = Some(v.trim().parse::<usize>().map_err(|e| err(e.to_string()))?);
        } else {
            let d = degree.ok_or_else(|| err("generator before degree header".into()))?;
            gens.push(Permutation::from_cycles(line, d).map_err(|e| err(e.to_string()))?);
        }
    }
    Ok(PermFile {
        name: name.ok_or(PermError::Parse { line: 0, msg: "missing name".into() })?,
        degree: degree.ok_or(PermError::Parse { line: 0, msg: "missing degree".into() })?,
        generators: gens,
    })
}

//! Constructions of intersecting families in `[k]^n` and their checks:
//! dictators, the binary majority family, and set-intersecting families built
//! from the lines of `PG(2,q)` via Singer difference sets.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::covering::base_poset;
use crate::error::{check_budget, pow_saturating, Error, Result};
use crate::family::{Point, ProductFamily, Space};
use crate::rational::Rational;

/// Generators of a permutation group on coordinates `1..=n`, as image lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermutationGroupSpec {
    n: usize,
    generators: Vec<Vec<usize>>,
}

impl PermutationGroupSpec {
    pub fn new(n: usize, generators: Vec<Vec<usize>>) -> Result<Self> {
        for g in &generators {
            if g.len() != n {
                return Err(Error::Validation(format!(
                    "permutation {g:?} does not act on {n} points"
                )));
            }
            let mut seen = vec![false; n];
            for &img in g {
                if img == 0 || img > n || std::mem::replace(&mut seen[img - 1], true) {
                    return Err(Error::Validation(format!(
                        "{g:?} is not a permutation of 1..={n}"
                    )));
                }
            }
        }
        Ok(PermutationGroupSpec { n, generators })
    }

    /// The group generated by the full cycle `i -> i+1 mod n`.
    pub fn cyclic(n: usize) -> Self {
        let cycle = (1..=n).map(|i| i % n + 1).collect();
        PermutationGroupSpec {
            n,
            generators: vec![cycle],
        }
    }

    /// All of `S_n`: the full cycle and the transposition `(1 2)`.
    pub fn symmetric(n: usize) -> Self {
        let mut spec = Self::cyclic(n);
        if n >= 2 {
            let mut swap: Vec<usize> = (1..=n).collect();
            swap.swap(0, 1);
            spec.generators.push(swap);
        }
        spec
    }

    /// Parses space-separated 1-based images, e.g. `"2 3 1"`.
    pub fn parse_permutation(text: &str) -> Result<Vec<usize>> {
        text.split(|c: char| c.is_whitespace() || c == ',')
            .filter(|s| !s.is_empty())
            .map(|s| {
                s.parse::<usize>()
                    .map_err(|_| Error::Validation(format!("bad permutation entry {s:?}")))
            })
            .collect()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[Vec<usize>] {
        &self.generators
    }

    pub fn with_generator(&self, g: Vec<usize>) -> Result<Self> {
        let mut gens = self.generators.clone();
        gens.push(g);
        Self::new(self.n, gens)
    }

    /// Orbit of coordinate 1 covers every coordinate.
    pub fn is_transitive(&self) -> bool {
        if self.n == 0 {
            return false;
        }
        let mut seen = vec![false; self.n];
        seen[0] = true;
        let mut stack = vec![0usize];
        while let Some(i) = stack.pop() {
            for g in &self.generators {
                let j = g[i] - 1;
                if !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

/// `(sigma x)_i = x_{sigma(i)}`.
pub fn apply_permutation(sigma: &[usize], x: &[u8]) -> Point {
    sigma.iter().map(|&s| x[s - 1]).collect()
}

/// A family of subsets of `{1..=n}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetFamily {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

impl SetFamily {
    pub fn new(n: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut normalized = Vec::with_capacity(blocks.len());
        for b in blocks {
            let set: BTreeSet<usize> = b.iter().copied().collect();
            if set.is_empty() {
                return Err(Error::Validation("blocks must be nonempty".into()));
            }
            if set.iter().any(|&i| i == 0 || i > n) {
                return Err(Error::Validation(format!("block {b:?} leaves 1..={n}")));
            }
            normalized.push(set.into_iter().collect());
        }
        Ok(SetFamily {
            n,
            blocks: normalized,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn is_intersecting(&self) -> bool {
        self.blocks.iter().enumerate().all(|(i, a)| {
            self.blocks[i + 1..]
                .iter()
                .all(|b| a.iter().any(|x| b.binary_search(x).is_ok()))
        })
    }

    /// Sizes of all pairwise block intersections.
    pub fn pairwise_meets(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (i, a) in self.blocks.iter().enumerate() {
            for b in &self.blocks[i + 1..] {
                out.push(a.iter().filter(|x| b.binary_search(x).is_ok()).count());
            }
        }
        out
    }

    /// Header `blocks n=<n>`, then one block per line.
    pub fn parse(text: &str) -> Result<Self> {
        let mut n = None;
        let mut blocks = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = lineno + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            if n.is_none() {
                n = Some(
                    content
                        .strip_prefix("blocks n=")
                        .and_then(|v| v.trim().parse::<usize>().ok())
                        .ok_or_else(|| Error::parse(line, "expected `blocks n=<n>` header"))?,
                );
                continue;
            }
            let block = content
                .split_whitespace()
                .map(|s| {
                    s.parse::<usize>()
                        .map_err(|_| Error::parse(line, format!("bad point {s:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            blocks.push(block);
        }
        let n = n.ok_or_else(|| Error::parse(1, "missing `blocks n=<n>` header"))?;
        Self::new(n, blocks)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("blocks n={}\n", self.n);
        for b in &self.blocks {
            let cells: Vec<String> = b.iter().map(|i| i.to_string()).collect();
            let _ = writeln!(out, "{}", cells.join(" "));
        }
        out
    }
}

/// `{x in [k]^n : x_i = symbol}` with 1-based `coordinate` and `symbol`.
pub fn dictator_family(
    k: usize,
    n: usize,
    coordinate: usize,
    symbol: usize,
    budget: u64,
) -> Result<ProductFamily> {
    if coordinate == 0 || coordinate > n {
        return Err(Error::Domain(format!(
            "coordinate {coordinate} outside 1..={n}"
        )));
    }
    if symbol == 0 || symbol > k {
        return Err(Error::Domain(format!("symbol {symbol} outside 1..={k}")));
    }
    let host = base_poset(k)?;
    let space = Space::new(k, n, budget)?;
    let points = (0..space.size)
        .map(|c| space.decode(c))
        .filter(|p| p[coordinate - 1] as usize == symbol - 1)
        .collect();
    Ok(ProductFamily::from_sorted_unchecked(host, n, points))
}

/// Vectors of `[2]^n` with more 1's than 2's, `n` odd.
pub fn majority_family(n: usize, budget: u64) -> Result<ProductFamily> {
    if n.is_multiple_of(2) {
        return Err(Error::Domain(format!("majority needs odd n, got {n}")));
    }
    let host = base_poset(2)?;
    let space = Space::new(2, n, budget)?;
    let points = (0..space.size)
        .map(|c| space.decode(c))
        .filter(|p| 2 * p.iter().filter(|&&e| e == 0).count() > n)
        .collect();
    Ok(ProductFamily::from_sorted_unchecked(host, n, points))
}

/// A subset of `Z_modulus`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DifferenceSet {
    pub modulus: usize,
    pub residues: Vec<usize>,
}

impl DifferenceSet {
    /// Every nonzero residue is a difference of exactly one ordered pair.
    pub fn is_perfect(&self) -> bool {
        let mut hits = vec![0usize; self.modulus];
        for &a in &self.residues {
            for &b in &self.residues {
                if a != b {
                    hits[(a + self.modulus - b) % self.modulus] += 1;
                }
            }
        }
        hits[0] == 0 && hits[1..].iter().all(|&h| h == 1)
    }

    /// Cyclic shifts as blocks over `1..=modulus` (residue `r` is point `r+1`).
    pub fn shifts(&self) -> SetFamily {
        let blocks = (0..self.modulus)
            .map(|s| {
                self.residues
                    .iter()
                    .map(|&d| (d + s) % self.modulus + 1)
                    .collect()
            })
            .collect();
        SetFamily::new(self.modulus, blocks).expect("residues are reduced")
    }
}

/// Known Singer difference sets for `q = 2, 3, 4`, checked on load.
pub fn singer_base(q: usize) -> Result<DifferenceSet> {
    let (modulus, residues) = match q {
        2 => (7, vec![1, 2, 4]),
        3 => (13, vec![0, 1, 3, 9]),
        4 => (21, vec![0, 1, 4, 14, 16]),
        _ => {
            return Err(Error::Domain(format!(
                "no difference set available for q = {q} (supported: 2, 3, 4)"
            )))
        }
    };
    let set = DifferenceSet { modulus, residues };
    if !set.is_perfect() {
        return Err(Error::Validation(format!(
            "stored difference set for q = {q} is not perfect"
        )));
    }
    Ok(set)
}

/// Lines of `PG(2,q)` as the cyclic shifts of a Singer difference set.
pub fn singer_difference_set(q: usize) -> Result<SetFamily> {
    Ok(singer_base(q)?.shifts())
}

/// `{x in [k]^n : x_i = symbol for all i in some block}`.
///
/// Scans `[k]^n` when it fits in `budget`, else unions the per-block
/// cylinders. With `strict`, a non-intersecting block family is rejected.
pub fn set_intersecting_family(
    blocks: &SetFamily,
    symbol: usize,
    k: usize,
    strict: bool,
    budget: u64,
) -> Result<ProductFamily> {
    if symbol == 0 || symbol > k {
        return Err(Error::Domain(format!("symbol {symbol} outside 1..={k}")));
    }
    if strict && !blocks.is_intersecting() {
        return Err(Error::Validation("block family is not intersecting".into()));
    }
    if pow_saturating(k, blocks.n) <= budget as u128 {
        set_intersecting_by_scan(blocks, symbol, k, budget)
    } else {
        set_intersecting_by_union(blocks, symbol, k, budget)
    }
}

pub fn set_intersecting_by_scan(
    blocks: &SetFamily,
    symbol: usize,
    k: usize,
    budget: u64,
) -> Result<ProductFamily> {
    let host = base_poset(k)?;
    let space = Space::new(k, blocks.n, budget)?;
    let target = (symbol - 1) as u8;
    let points = (0..space.size)
        .map(|c| space.decode(c))
        .filter(|p| {
            blocks
                .blocks
                .iter()
                .any(|b| b.iter().all(|&i| p[i - 1] == target))
        })
        .collect();
    Ok(ProductFamily::from_sorted_unchecked(host, blocks.n, points))
}

pub fn set_intersecting_by_union(
    blocks: &SetFamily,
    symbol: usize,
    k: usize,
    budget: u64,
) -> Result<ProductFamily> {
    let host = base_poset(k)?;
    let n = blocks.n;
    let target = (symbol - 1) as u8;
    let total: u128 = blocks
        .blocks
        .iter()
        .map(|b| pow_saturating(k, n - b.len()))
        .fold(0, u128::saturating_add);
    check_budget("set-intersecting union", total, budget)?;
    let mut points = BTreeSet::new();
    for b in &blocks.blocks {
        let free: Vec<usize> = (1..=n).filter(|i| b.binary_search(i).is_err()).collect();
        let sub = Space::new(k, free.len(), budget)?;
        for c in 0..sub.size {
            let vals = sub.decode(c);
            let mut p = vec![target; n];
            for (slot, v) in free.iter().zip(vals) {
                p[slot - 1] = v;
            }
            points.insert(p);
        }
    }
    Ok(ProductFamily::from_sorted_unchecked(
        host,
        n,
        points.into_iter().collect(),
    ))
}

/// `sum_{S nonempty} (-1)^{|S|+1} k^{n - |union S|}` over subsets of blocks.
pub fn inclusion_exclusion_size(blocks: &SetFamily, k: usize, budget: u64) -> Result<BigInt> {
    let m = blocks.blocks.len();
    if m >= 64 {
        return Err(Error::Budget {
            what: "inclusion-exclusion",
            needed: u128::MAX,
            budget,
        });
    }
    check_budget("inclusion-exclusion", 1u128 << m, budget)?;
    let masks: Vec<u128> = blocks
        .blocks
        .iter()
        .map(|b| b.iter().fold(0u128, |acc, &i| acc | 1 << (i - 1)))
        .collect();
    if blocks.n > 128 {
        return Err(Error::Domain(
            "inclusion-exclusion supports n <= 128".into(),
        ));
    }
    let kb = BigInt::from(k);
    let mut total = BigInt::zero();
    for s in 1u64..(1u64 << m) {
        let union = (0..m)
            .filter(|j| s >> j & 1 == 1)
            .fold(0u128, |acc, j| acc | masks[j]);
        let term = num_traits::pow(kb.clone(), blocks.n - union.count_ones() as usize);
        if s.count_ones() % 2 == 1 {
            total += term;
        } else {
            total -= term;
        }
    }
    Ok(total)
}

/// `(|A|, |A| / |host|^n)`.
pub fn family_size_and_density(family: &ProductFamily) -> (usize, Rational) {
    let total = num_traits::pow(BigInt::from(family.host().len()), family.n());
    (
        family.len(),
        Rational::new(BigInt::from(family.len()), total),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SymmetryCheck {
    pub invariant: bool,
    pub transitive: bool,
}

impl SymmetryCheck {
    pub fn symmetric(self) -> bool {
        self.invariant && self.transitive
    }
}

/// Invariance of the family under every generator, and transitivity of the generated group.
pub fn is_symmetric(family: &ProductFamily, spec: &PermutationGroupSpec) -> Result<SymmetryCheck> {
    if spec.n != family.n() {
        return Err(Error::Validation(format!(
            "group acts on {} coordinates, family has {}",
            spec.n,
            family.n()
        )));
    }
    // A permutation maps the family into itself iff onto itself (finite, injective).
    let invariant = spec.generators.iter().all(|g| {
        family
            .points()
            .iter()
            .all(|p| family.contains(&apply_permutation(g, p)))
    });
    Ok(SymmetryCheck {
        invariant,
        transitive: spec.is_transitive(),
    })
}

/// `n - log_k |A|` with `k = |host|`.
pub fn log_k_deficiency(family: &ProductFamily) -> Result<f64> {
    if family.is_empty() {
        return Err(Error::Domain(
            "deficiency of an empty family is undefined".into(),
        ));
    }
    let k = family.host().len() as f64;
    Ok(family.n() as f64 - (family.len() as f64).ln() / k.ln())
}

/// Number of 1's in a point of the binary base space (index 0 is symbol 1).
pub fn ones(point: &[u8]) -> usize {
    point.iter().filter(|&&e| e == 0).count()
}

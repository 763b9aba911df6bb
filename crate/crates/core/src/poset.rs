//! Finite posets, up-sets and stochastic-domination strength.
//!
//! Elements are addressed by index `0..len`; every poset also carries an
//! identifier per element (an integer label, or the subset bitmask for
//! posets of subsets). Subsets of a poset are `u64` bitmasks over indices,
//! so posets are limited to [`MAX_ELEMENTS`] elements.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_traits::Zero;

use crate::error::{check_budget, Error, Result};
use crate::measure::Measure;
use crate::rational::Rational;

pub const MAX_ELEMENTS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poset {
    ids: Vec<u64>,
    masks: Option<Vec<u64>>,
    /// `up[a]` has bit `b` set iff `a ⪯ b`.
    up: Vec<u64>,
}

impl Poset {
    /// Poset of subsets ordered by inclusion; identifiers are the masks themselves.
    pub fn from_masks(masks: Vec<u64>) -> Result<Self> {
        Self::from_masks_with_ids(masks.clone(), masks)
    }

    pub fn from_masks_with_ids(ids: Vec<u64>, masks: Vec<u64>) -> Result<Self> {
        if ids.len() != masks.len() {
            return Err(Error::Validation("ids and masks differ in length".into()));
        }
        check_size(ids.len())?;
        check_distinct(&ids)?;
        check_distinct(&masks)?;
        let up = masks
            .iter()
            .map(|&a| {
                masks
                    .iter()
                    .enumerate()
                    .filter(|&(_, &b)| a & b == a)
                    .fold(0u64, |acc, (j, _)| acc | (1 << j))
            })
            .collect();
        Ok(Poset {
            ids,
            masks: Some(masks),
            up,
        })
    }

    /// Poset generated by the relations `a ⪯ b`; reflexive-transitive closure is taken.
    pub fn from_relations(ids: Vec<u64>, relations: &[(u64, u64)]) -> Result<Self> {
        check_size(ids.len())?;
        check_distinct(&ids)?;
        let index: BTreeMap<u64, usize> = ids.iter().enumerate().map(|(i, &id)| (id, i)).collect();
        let mut up: Vec<u64> = (0..ids.len()).map(|i| 1u64 << i).collect();
        for &(a, b) in relations {
            let (Some(&ia), Some(&ib)) = (index.get(&a), index.get(&b)) else {
                return Err(Error::Validation(format!(
                    "relation {a} <= {b} names an unknown element"
                )));
            };
            up[ia] |= 1 << ib;
        }
        // Warshall on bit rows.
        for mid in 0..ids.len() {
            for row in 0..ids.len() {
                if up[row] >> mid & 1 == 1 {
                    up[row] |= up[mid];
                }
            }
        }
        for a in 0..ids.len() {
            for b in (a + 1)..ids.len() {
                if up[a] >> b & 1 == 1 && up[b] >> a & 1 == 1 {
                    return Err(Error::Validation(format!(
                        "relations are not antisymmetric: {} and {} are mutually comparable",
                        ids[a], ids[b]
                    )));
                }
            }
        }
        Ok(Poset {
            ids,
            masks: None,
            up,
        })
    }

    pub fn antichain(ids: Vec<u64>) -> Result<Self> {
        Self::from_relations(ids, &[])
    }

    /// The chain `0 ⪯ 1 ⪯ … ⪯ len-1`.
    pub fn chain(len: usize) -> Result<Self> {
        let ids: Vec<u64> = (0..len as u64).collect();
        let rels: Vec<(u64, u64)> = ids.windows(2).map(|w| (w[0], w[1])).collect();
        Self::from_relations(ids, &rels)
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[u64] {
        &self.ids
    }

    pub fn id(&self, index: usize) -> u64 {
        self.ids[index]
    }

    pub fn index_of(&self, id: u64) -> Option<usize> {
        self.ids.iter().position(|&x| x == id)
    }

    /// Subset encoding of each element, for posets built from masks.
    pub fn masks(&self) -> Option<&[u64]> {
        self.masks.as_deref()
    }

    pub fn index_of_mask(&self, mask: u64) -> Option<usize> {
        self.masks.as_ref()?.iter().position(|&m| m == mask)
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.up[a] >> b & 1 == 1
    }

    /// Principal up-set of `a` as an index bitmask.
    pub fn up_mask(&self, a: usize) -> u64 {
        self.up[a]
    }

    pub fn full_mask(&self) -> u64 {
        full_mask(self.len())
    }

    /// Brute-force check of reflexivity, antisymmetry and transitivity.
    pub fn satisfies_order_axioms(&self) -> bool {
        let n = self.len();
        for a in 0..n {
            if !self.leq(a, a) {
                return false;
            }
            for b in 0..n {
                if a != b && self.leq(a, b) && self.leq(b, a) {
                    return false;
                }
                for c in 0..n {
                    if self.leq(a, b) && self.leq(b, c) && !self.leq(a, c) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Reads the text format: `poset <m>` followed by `id <int> mask <hex>` or `rel <a> <b>` lines.
    pub fn parse(text: &str) -> Result<Self> {
        let mut declared = None;
        let mut ids = Vec::new();
        let mut masks = Vec::new();
        let mut rels = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = lineno + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let words: Vec<&str> = content.split_whitespace().collect();
            match words.as_slice() {
                ["poset", m] if declared.is_none() => {
                    declared = Some(
                        m.parse::<usize>()
                            .map_err(|_| Error::parse(line, "bad element count"))?,
                    );
                }
                _ if declared.is_none() => {
                    return Err(Error::parse(line, "expected `poset <m>` header"))
                }
                ["id", id, "mask", hex] => {
                    let id = id
                        .parse::<u64>()
                        .map_err(|_| Error::parse(line, "bad id"))?;
                    let hex = hex.trim_start_matches("0x");
                    let mask = u64::from_str_radix(hex, 16)
                        .map_err(|_| Error::parse(line, "bad hex mask"))?;
                    ids.push(id);
                    masks.push(mask);
                }
                ["id", id] => {
                    ids.push(
                        id.parse::<u64>()
                            .map_err(|_| Error::parse(line, "bad id"))?,
                    );
                }
                ["rel", a, b] => {
                    let a = a
                        .parse::<u64>()
                        .map_err(|_| Error::parse(line, "bad element"))?;
                    let b = b
                        .parse::<u64>()
                        .map_err(|_| Error::parse(line, "bad element"))?;
                    rels.push((a, b));
                }
                _ => return Err(Error::parse(line, format!("unrecognized line {content:?}"))),
            }
        }
        let declared = declared.ok_or_else(|| Error::parse(1, "missing `poset <m>` header"))?;
        if !masks.is_empty() && !rels.is_empty() {
            return Err(Error::parse(1, "mask and rel lines cannot be mixed"));
        }
        if !masks.is_empty() && masks.len() != ids.len() {
            return Err(Error::parse(
                1,
                "every id needs a mask in a mask-encoded poset",
            ));
        }
        if ids.is_empty() && !rels.is_empty() {
            // Relation-only files list elements implicitly in order of first mention.
            for &(a, b) in &rels {
                for x in [a, b] {
                    if !ids.contains(&x) {
                        ids.push(x);
                    }
                }
            }
        }
        if ids.len() != declared {
            return Err(Error::parse(
                1,
                format!("header declares {declared} elements, found {}", ids.len()),
            ));
        }
        if masks.is_empty() {
            Self::from_relations(ids, &rels)
        } else {
            Self::from_masks_with_ids(ids, masks)
        }
    }

    /// Writes the text format; mask posets as `id/mask` lines, others as covering relations.
    pub fn to_text(&self) -> String {
        let mut out = format!("poset {}\n", self.len());
        match &self.masks {
            Some(masks) => {
                for (id, mask) in self.ids.iter().zip(masks) {
                    let _ = writeln!(out, "id {id} mask {mask:x}");
                }
            }
            None => {
                for id in &self.ids {
                    let _ = writeln!(out, "id {id}");
                }
                for a in 0..self.len() {
                    for b in 0..self.len() {
                        if a != b && self.leq(a, b) {
                            let _ = writeln!(out, "rel {} {}", self.ids[a], self.ids[b]);
                        }
                    }
                }
            }
        }
        out
    }
}

fn check_size(len: usize) -> Result<()> {
    if len > MAX_ELEMENTS {
        return Err(Error::Validation(format!(
            "posets are limited to {MAX_ELEMENTS} elements, got {len}"
        )));
    }
    Ok(())
}

fn check_distinct(values: &[u64]) -> Result<()> {
    let mut sorted = values.to_vec();
    sorted.sort_unstable();
    if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::Validation(format!("duplicate element {}", w[0])));
    }
    Ok(())
}

pub(crate) fn full_mask(len: usize) -> u64 {
    if len >= 64 {
        u64::MAX
    } else {
        (1u64 << len) - 1
    }
}

/// A set of poset elements, stored as a bitmask over element indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ElementSubset(u64);

impl ElementSubset {
    pub const EMPTY: ElementSubset = ElementSubset(0);

    pub fn from_bits(bits: u64) -> Self {
        ElementSubset(bits)
    }

    pub fn from_indices(poset: &Poset, indices: &[usize]) -> Result<Self> {
        let mut bits = 0u64;
        for &i in indices {
            if i >= poset.len() {
                return Err(Error::InvalidSubset(format!(
                    "index {i} out of range for a poset of size {}",
                    poset.len()
                )));
            }
            bits |= 1 << i;
        }
        Ok(ElementSubset(bits))
    }

    pub fn from_ids(poset: &Poset, ids: &[u64]) -> Result<Self> {
        let mut bits = 0u64;
        for &id in ids {
            let i = poset
                .index_of(id)
                .ok_or_else(|| Error::InvalidSubset(format!("element {id} is not in the poset")))?;
            bits |= 1 << i;
        }
        Ok(ElementSubset(bits))
    }

    pub fn from_masks(poset: &Poset, masks: &[u64]) -> Result<Self> {
        let mut bits = 0u64;
        for &m in masks {
            let i = poset
                .index_of_mask(m)
                .ok_or_else(|| Error::InvalidSubset(format!("mask {m:#x} is not in the poset")))?;
            bits |= 1 << i;
        }
        Ok(ElementSubset(bits))
    }

    pub fn full(poset: &Poset) -> Self {
        ElementSubset(poset.full_mask())
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn contains(self, index: usize) -> bool {
        index < 64 && self.0 >> index & 1 == 1
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset_of(self, other: ElementSubset) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn indices(self) -> impl Iterator<Item = usize> {
        (0..64).filter(move |&i| self.0 >> i & 1 == 1)
    }

    pub fn ids(self, poset: &Poset) -> Vec<u64> {
        self.indices().map(|i| poset.id(i)).collect()
    }

    pub(crate) fn validate(self, poset: &Poset) -> Result<()> {
        if self.0 & !poset.full_mask() != 0 {
            return Err(Error::InvalidSubset(format!(
                "subset {:#x} has members outside a poset of size {}",
                self.0,
                poset.len()
            )));
        }
        Ok(())
    }
}

pub fn is_up_set(poset: &Poset, subset: ElementSubset) -> Result<bool> {
    subset.validate(poset)?;
    Ok(is_up_bits(poset, subset.0))
}

fn is_up_bits(poset: &Poset, bits: u64) -> bool {
    (0..poset.len()).all(|a| bits >> a & 1 == 0 || poset.up[a] & !bits == 0)
}

pub fn up_closure(poset: &Poset, subset: ElementSubset) -> Result<ElementSubset> {
    subset.validate(poset)?;
    Ok(ElementSubset(
        subset.indices().fold(0, |acc, a| acc | poset.up[a]),
    ))
}

/// Every up-set of `poset` (including the empty set and the whole poset) in increasing bitmask order.
///
/// Fails before enumerating anything when `2^|P|` exceeds `budget`.
pub fn enumerate_up_sets(poset: &Poset, budget: u64) -> Result<Vec<ElementSubset>> {
    let needed = 1u128 << poset.len();
    check_budget("up-set enumeration", needed, budget)?;
    let full = poset.full_mask();
    let mut out = Vec::new();
    let mut bits = 0u64;
    loop {
        if is_up_bits(poset, bits) {
            out.push(ElementSubset(bits));
        }
        if bits == full {
            break;
        }
        bits += 1;
    }
    Ok(out)
}

/// Minimum of `(mu1 - mu0)(A)` over proper nontrivial up-sets `A`.
#[derive(Debug, Clone, PartialEq)]
pub struct DominationReport {
    pub strength: Rational,
    pub witness: ElementSubset,
    pub count_proper_nontrivial: usize,
}

impl DominationReport {
    pub fn to_json(&self, poset: &Poset) -> serde_json::Value {
        let mut map = serde_json::Map::new();
        crate::rational::put_rational(&mut map, "strength", &self.strength);
        map.insert("witness".into(), self.witness.ids(poset).into());
        if let Some(masks) = poset.masks() {
            let sets: Vec<String> = self
                .witness
                .indices()
                .map(|i| format_mask(masks[i]))
                .collect();
            map.insert("witness_sets".into(), sets.into());
        }
        map.insert(
            "count_proper_nontrivial".into(),
            self.count_proper_nontrivial.into(),
        );
        serde_json::Value::Object(map)
    }
}

/// Renders a subset mask of `[k]` as `{1,2}` with 1-based symbols.
pub fn format_mask(mask: u64) -> String {
    let symbols: Vec<String> = (0..64)
        .filter(|b| mask >> b & 1 == 1)
        .map(|b| (b + 1).to_string())
        .collect();
    format!("{{{}}}", symbols.join(","))
}

pub fn domination_strength(
    poset: &Poset,
    mu0: &Measure,
    mu1: &Measure,
    budget: u64,
) -> Result<DominationReport> {
    if mu0.host().as_ref() != poset || mu1.host().as_ref() != poset {
        return Err(Error::HostMismatch(
            "measures are not defined on this poset".into(),
        ));
    }
    let diff: Vec<Rational> = mu1
        .masses()
        .iter()
        .zip(mu0.masses())
        .map(|(a, b)| a - b)
        .collect();
    let full = ElementSubset::full(poset);
    let mut best: Option<(Rational, ElementSubset)> = None;
    let mut count = 0usize;
    for up in enumerate_up_sets(poset, budget)? {
        if up.is_empty() || up == full {
            continue;
        }
        count += 1;
        let value = up.indices().fold(Rational::zero(), |acc, i| acc + &diff[i]);
        if best.as_ref().is_none_or(|(b, _)| value < *b) {
            best = Some((value, up));
        }
    }
    let (strength, witness) = best.ok_or_else(|| {
        Error::DegeneratePoset("the poset has no proper nontrivial up-set".into())
    })?;
    Ok(DominationReport {
        strength,
        witness,
        count_proper_nontrivial: count,
    })
}

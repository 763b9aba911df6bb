//! The covering poset `W_k` of singletons and co-singletons of `[k]`, the
//! embedding `[k]^n -> W_k^n`, complements, the intersection predicate in both
//! spaces, and the half-measure bound for intersecting families.
//!
//! Subsets of `[k]` are bitmasks with bit `l-1` standing for symbol `l`. The
//! base space `[k]` is modelled as an antichain whose elements carry the
//! singleton masks, so one intersection predicate (nonempty mask overlap)
//! serves both spaces.

use std::fmt::Write as _;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{pow_saturating, Error, Result};
use crate::family::{Point, ProductFamily, Space};
use crate::measure::{product_measure, Interpolation, Measure};
use crate::poset::{ElementSubset, Poset};
use crate::rational::Rational;

/// Largest supported alphabet; `W_k` has `2k` elements and posets cap at 64.
pub const MAX_K: usize = 32;

#[derive(Debug, Clone)]
pub struct CoveringPoset {
    k: usize,
    poset: Arc<Poset>,
    mu0: Measure,
    mu1: Measure,
}

/// `W_k = [k]^(1) ∪ [k]^(k-1)` under inclusion, with layer-uniform `mu0` (bottom) and `mu1` (top).
///
/// Element order: `{1},…,{k}`, then the co-singletons in lexicographic order of
/// their sorted members (`{1,2},{1,3},{2,3}` for `k = 3`).
pub fn build_covering(k: usize) -> Result<CoveringPoset> {
    if k < 3 {
        return Err(Error::DegenerateConstruction(format!(
            "W_{k} needs k >= 3: for k = {k} the two layers coincide and the domination strength is 0"
        )));
    }
    if k > MAX_K {
        return Err(Error::Domain(format!(
            "k = {k} exceeds the supported maximum {MAX_K}"
        )));
    }
    let full = (1u64 << k) - 1;
    let mut masks: Vec<u64> = (0..k).map(|b| 1u64 << b).collect();
    masks.extend((0..k).rev().map(|b| full ^ (1u64 << b)));
    let poset = Arc::new(Poset::from_masks(masks)?);
    let bottom = ElementSubset::from_bits((1u64 << k) - 1);
    let top = ElementSubset::from_bits(((1u64 << k) - 1) << k);
    let mu0 = Measure::uniform_on(poset.clone(), bottom)?;
    let mu1 = Measure::uniform_on(poset.clone(), top)?;
    Ok(CoveringPoset { k, poset, mu0, mu1 })
}

impl CoveringPoset {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn poset(&self) -> &Arc<Poset> {
        &self.poset
    }

    pub fn mu0(&self) -> &Measure {
        &self.mu0
    }

    pub fn mu1(&self) -> &Measure {
        &self.mu1
    }

    pub fn interpolation(&self) -> Interpolation {
        Interpolation::new(self.mu0.clone(), self.mu1.clone())
            .expect("layer measures share the host")
    }

    pub fn full_set(&self) -> u64 {
        (1u64 << self.k) - 1
    }

    /// Index of the singleton `{symbol}` (symbols are 1-based).
    pub fn singleton(&self, symbol: usize) -> usize {
        symbol - 1
    }

    /// Index of the co-singleton `[k] \ {symbol}`.
    pub fn co_singleton(&self, missing: usize) -> usize {
        2 * self.k - missing
    }

    pub fn mask(&self, index: usize) -> u64 {
        self.poset.masks().expect("covering poset is mask-encoded")[index]
    }

    pub fn index_of_mask(&self, mask: u64) -> Option<usize> {
        self.poset.index_of_mask(mask)
    }

    /// The star `{ {l} } ∪ ([k]^(k-1) minus [k]\{l})`.
    pub fn star(&self, symbol: usize) -> ElementSubset {
        let mut bits = 1u64 << self.singleton(symbol);
        for missing in 1..=self.k {
            if missing != symbol {
                bits |= 1 << self.co_singleton(missing);
            }
        }
        ElementSubset::from_bits(bits)
    }

    /// Index of the complementary element.
    pub fn complement_index(&self, index: usize) -> usize {
        if index < self.k {
            self.co_singleton(index + 1)
        } else {
            2 * self.k - index - 1
        }
    }
}

/// `[k]` as an antichain whose elements are the singleton masks; identifiers are the symbols `1..=k`.
pub fn base_poset(k: usize) -> Result<Arc<Poset>> {
    if k == 0 || k > 64 {
        return Err(Error::Domain(format!(
            "alphabet size {k} out of range 1..=64"
        )));
    }
    let ids = (1..=k as u64).collect();
    let masks = (0..k).map(|b| 1u64 << b).collect();
    let base = Poset::from_masks_with_ids(ids, masks)?;
    Ok(Arc::new(base))
}

/// A vector of `[k]^n`, symbols `1..=k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BaseVector {
    k: usize,
    coords: Vec<u8>,
}

impl BaseVector {
    pub fn new(k: usize, coords: Vec<u8>) -> Result<Self> {
        if let Some(&bad) = coords.iter().find(|&&c| c == 0 || c as usize > k) {
            return Err(Error::Domain(format!("symbol {bad} outside 1..={k}")));
        }
        Ok(BaseVector { k, coords })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn coords(&self) -> &[u8] {
        &self.coords
    }

    /// Point of the base product space (`symbol - 1` per coordinate).
    pub fn to_point(&self) -> Point {
        self.coords.iter().map(|&c| c - 1).collect()
    }
}

/// A vector of `W_k^n`, stored as subset masks.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoverVector {
    k: usize,
    masks: Vec<u64>,
}

impl CoverVector {
    pub fn new(host: &CoveringPoset, masks: Vec<u64>) -> Result<Self> {
        if let Some(bad) = masks.iter().find(|&&m| host.index_of_mask(m).is_none()) {
            return Err(Error::Domain(format!(
                "mask {bad:#x} is not an element of W_{}",
                host.k
            )));
        }
        Ok(CoverVector { k: host.k, masks })
    }

    pub fn from_point(host: &CoveringPoset, point: &[u8]) -> Self {
        CoverVector {
            k: host.k,
            masks: point.iter().map(|&e| host.mask(e as usize)).collect(),
        }
    }

    pub fn to_point(&self, host: &CoveringPoset) -> Point {
        self.masks
            .iter()
            .map(|&m| host.index_of_mask(m).expect("validated on construction") as u8)
            .collect()
    }

    pub fn masks(&self) -> &[u64] {
        &self.masks
    }

    pub fn n(&self) -> usize {
        self.masks.len()
    }
}

/// `l -> {l}` coordinatewise.
pub fn embed(host: &CoveringPoset, x: &BaseVector) -> Result<CoverVector> {
    if x.k != host.k {
        return Err(Error::Domain(format!(
            "vector over [{}] cannot embed into W_{}",
            x.k, host.k
        )));
    }
    Ok(CoverVector {
        k: host.k,
        masks: x.coords.iter().map(|&c| 1u64 << (c - 1)).collect(),
    })
}

/// Inverse of [`embed`] on the minimal layer; `None` if some coordinate is a co-singleton.
pub fn project(x: &CoverVector) -> Option<BaseVector> {
    let coords = x
        .masks
        .iter()
        .map(|&m| (m.count_ones() == 1).then(|| m.trailing_zeros() as u8 + 1))
        .collect::<Option<Vec<u8>>>()?;
    Some(BaseVector { k: x.k, coords })
}

/// Coordinatewise complement within `[k]`; swaps the two layers.
pub fn complement(x: &CoverVector) -> CoverVector {
    let full = (1u64 << x.k) - 1;
    CoverVector {
        k: x.k,
        masks: x.masks.iter().map(|&m| full ^ m).collect(),
    }
}

pub fn intersects(x: &CoverVector, y: &CoverVector) -> Result<bool> {
    if x.k != y.k || x.n() != y.n() {
        return Err(Error::Domain("vectors have different shapes".into()));
    }
    Ok(x.masks.iter().zip(&y.masks).any(|(a, b)| a & b != 0))
}

/// Embeds a base-space family into `W_k^n`.
pub fn embed_family(host: &CoveringPoset, family: &ProductFamily) -> Result<ProductFamily> {
    let masks = family
        .host()
        .masks()
        .ok_or_else(|| Error::Validation("family host has no subset encoding".into()))?;
    let mut points = Vec::with_capacity(family.len());
    for p in family.points() {
        let mut q = Vec::with_capacity(p.len());
        for &e in p {
            let m = masks[e as usize];
            if m.count_ones() != 1 || m >> host.k != 0 {
                return Err(Error::Validation(format!(
                    "element {m:#x} is not a symbol of [{}]",
                    host.k
                )));
            }
            q.push(host.singleton(m.trailing_zeros() as usize + 1) as u8);
        }
        points.push(q);
    }
    ProductFamily::new(host.poset.clone(), family.n(), points)
}

/// Whether every two members meet in some coordinate (nonempty mask overlap).
///
/// Works for any host with a subset encoding: base families (agreement on a
/// coordinate) and cover families alike.
pub fn is_intersecting_family(family: &ProductFamily, budget: u64) -> Result<bool> {
    let masks = family
        .host()
        .masks()
        .ok_or_else(|| Error::Validation("family host has no subset encoding".into()))?;
    let size = family.len() as u128;
    let pair_cost = size * size.saturating_sub(1) / 2;
    // Alternative route: for each member, look up every point disjoint from it.
    let disjoint: Vec<Vec<u8>> = masks
        .iter()
        .map(|&a| {
            (0..masks.len())
                .filter(|&b| masks[b] & a == 0)
                .map(|b| b as u8)
                .collect()
        })
        .collect();
    let partner_cost: u128 = family
        .points()
        .iter()
        .map(|p| {
            p.iter().fold(1u128, |acc, &e| {
                acc.saturating_mul(disjoint[e as usize].len() as u128)
            })
        })
        .fold(0u128, u128::saturating_add);
    let dense_ok = pow_saturating(masks.len(), family.n()) <= budget as u128;
    if dense_ok && partner_cost < pair_cost {
        let (space, table) = family.indicator(budget)?;
        return Ok(family
            .points()
            .iter()
            .all(|p| no_disjoint_partner(&space, &table, p, &disjoint)));
    }
    let pts = family.points();
    for (i, x) in pts.iter().enumerate() {
        for y in &pts[i + 1..] {
            if !x
                .iter()
                .zip(y)
                .any(|(&a, &b)| masks[a as usize] & masks[b as usize] != 0)
            {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn no_disjoint_partner(space: &Space, table: &[bool], point: &[u8], disjoint: &[Vec<u8>]) -> bool {
    let choices: Vec<&[u8]> = point
        .iter()
        .map(|&e| disjoint[e as usize].as_slice())
        .collect();
    if choices.iter().any(|c| c.is_empty()) {
        return true;
    }
    let mut cursor = vec![0usize; point.len()];
    'odometer: loop {
        let code = choices
            .iter()
            .zip(&cursor)
            .fold(0usize, |acc, (c, &j)| acc * space.base + c[j] as usize);
        if table[code] {
            return false;
        }
        let mut i = point.len();
        while i > 0 {
            i -= 1;
            cursor[i] += 1;
            if cursor[i] < choices[i].len() {
                continue 'odometer;
            }
            cursor[i] = 0;
        }
        return true;
    }
}

/// Point index of the coordinatewise complement.
pub fn complement_point(host: &CoveringPoset, point: &[u8]) -> Point {
    point
        .iter()
        .map(|&e| host.complement_index(e as usize) as u8)
        .collect()
}

/// Whether no member's complement is also a member. Under the uniform measure
/// `x -> x^c` is a measure-preserving bijection, so this alone forces `mu_{1/2}^n <= 1/2`.
pub fn complement_pairing_free(host: &CoveringPoset, family: &ProductFamily) -> bool {
    family
        .points()
        .iter()
        .all(|p| !family.contains(&complement_point(host, p)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct HalfMeasure {
    pub measure: Rational,
    pub ok: bool,
}

/// `mu_{1/2}^n(family)` for an intersecting cover family and whether it is at most 1/2.
pub fn half_measure_check(
    host: &CoveringPoset,
    family: &ProductFamily,
    budget: u64,
) -> Result<HalfMeasure> {
    check_cover_host(host, family)?;
    if !is_intersecting_family(family, budget)? {
        return Err(Error::Validation("family is not intersecting".into()));
    }
    Ok(half_measure(host, family))
}

/// [`half_measure_check`] without the intersection precondition.
pub fn half_measure(host: &CoveringPoset, family: &ProductFamily) -> HalfMeasure {
    let mid = host
        .interpolation()
        .masses_at(&Rational::new(BigInt::one(), BigInt::from(2)));
    let mu = Measure::new(host.poset.clone(), mid).expect("midpoint is a probability measure");
    let measure = product_measure(&mu, family).expect("host checked");
    let ok = measure <= Rational::new(BigInt::one(), BigInt::from(2));
    HalfMeasure { measure, ok }
}

fn check_cover_host(host: &CoveringPoset, family: &ProductFamily) -> Result<()> {
    if family.host().as_ref() != host.poset.as_ref() {
        return Err(Error::HostMismatch(format!(
            "family does not live in W_{}^n",
            host.k
        )));
    }
    Ok(())
}

/// Maximal intersecting family of `W_k^n` built greedily over a seeded shuffle of the space.
pub fn greedy_maximal_intersecting(
    host: &CoveringPoset,
    n: usize,
    seed: u64,
    budget: u64,
) -> Result<ProductFamily> {
    let space = Space::new(host.poset.len(), n, budget)?;
    let mut order: Vec<usize> = (0..space.size).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut chosen: Vec<Vec<u64>> = Vec::new();
    let mut points = Vec::new();
    for code in order {
        let p = space.decode(code);
        let masks: Vec<u64> = p.iter().map(|&e| host.mask(e as usize)).collect();
        let fits = chosen
            .iter()
            .all(|c| c.iter().zip(&masks).any(|(a, b)| a & b != 0));
        if fits {
            chosen.push(masks);
            points.push(p);
        }
    }
    ProductFamily::new(host.poset.clone(), n, points)
}

/// Which space a family file describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpaceKind {
    Base,
    Cover,
}

impl SpaceKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SpaceKind::Base => "base",
            SpaceKind::Cover => "cover",
        }
    }
}

/// Contents of a family file.
#[derive(Debug, Clone)]
pub struct FamilyFile {
    pub k: usize,
    pub space: SpaceKind,
    pub family: ProductFamily,
}

impl FamilyFile {
    /// Base-space family over `[k]^n`.
    pub fn base(k: usize, family: ProductFamily) -> Self {
        FamilyFile {
            k,
            space: SpaceKind::Base,
            family,
        }
    }

    pub fn cover(host: &CoveringPoset, family: ProductFamily) -> Self {
        FamilyFile {
            k: host.k,
            space: SpaceKind::Cover,
            family,
        }
    }

    /// Header `family k=<k> n=<n> space=<base|cover>`, then one vector per line.
    /// Base coordinates are symbols; cover coordinates are comma-joined subsets.
    pub fn parse(text: &str) -> Result<Self> {
        let mut header = None;
        let mut rows: Vec<(usize, Vec<u64>)> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = lineno + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            if header.is_none() {
                header = Some(parse_header(line, content)?);
                continue;
            }
            let mut masks = Vec::new();
            for token in content.split_whitespace() {
                let mut mask = 0u64;
                for sym in token.split(',') {
                    let s: usize = sym
                        .parse()
                        .map_err(|_| Error::parse(line, format!("bad symbol {sym:?}")))?;
                    if s == 0 || s > 64 {
                        return Err(Error::parse(line, format!("symbol {s} out of range")));
                    }
                    mask |= 1 << (s - 1);
                }
                masks.push(mask);
            }
            rows.push((line, masks));
        }
        let (k, n, space) = header.ok_or_else(|| Error::parse(1, "missing `family` header"))?;
        let (host, cover) = match space {
            SpaceKind::Base => (base_poset(k)?, None),
            SpaceKind::Cover => {
                let c = build_covering(k)?;
                (c.poset.clone(), Some(c))
            }
        };
        let mut points = Vec::with_capacity(rows.len());
        for (line, masks) in rows {
            if masks.len() != n {
                return Err(Error::parse(
                    line,
                    format!("expected {n} coordinates, found {}", masks.len()),
                ));
            }
            let mut p = Vec::with_capacity(n);
            for m in masks {
                let idx = match &cover {
                    Some(c) => c.index_of_mask(m),
                    None => host.index_of_mask(m),
                }
                .ok_or_else(|| {
                    Error::parse(
                        line,
                        format!("{m:#x} is not an element of the {} space", space.as_str()),
                    )
                })?;
                p.push(idx as u8);
            }
            points.push(p);
        }
        Ok(FamilyFile {
            k,
            space,
            family: ProductFamily::new(host, n, points)?,
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "family k={} n={} space={}\n",
            self.k,
            self.family.n(),
            self.space.as_str()
        );
        let masks = self
            .family
            .host()
            .masks()
            .expect("family hosts are mask-encoded");
        for p in self.family.points() {
            let cells: Vec<String> = p
                .iter()
                .map(|&e| {
                    let m = masks[e as usize];
                    (0..64)
                        .filter(|b| m >> b & 1 == 1)
                        .map(|b| (b + 1).to_string())
                        .collect::<Vec<_>>()
                        .join(",")
                })
                .collect();
            let _ = writeln!(out, "{}", cells.join(" "));
        }
        out
    }
}

fn parse_header(line: usize, content: &str) -> Result<(usize, usize, SpaceKind)> {
    let mut words = content.split_whitespace();
    if words.next() != Some("family") {
        return Err(Error::parse(
            line,
            "expected `family k=<k> n=<n> space=<base|cover>`",
        ));
    }
    let (mut k, mut n, mut space) = (None, None, None);
    for w in words {
        match w.split_once('=') {
            Some(("k", v)) => k = v.parse::<usize>().ok(),
            Some(("n", v)) => n = v.parse::<usize>().ok(),
            Some(("space", "base")) => space = Some(SpaceKind::Base),
            Some(("space", "cover")) => space = Some(SpaceKind::Cover),
            _ => {
                return Err(Error::parse(
                    line,
                    format!("unrecognized header field {w:?}"),
                ))
            }
        }
    }
    match (k, n, space) {
        (Some(k), Some(n), Some(space)) if k > 0 && n > 0 => Ok((k, n, space)),
        _ => Err(Error::parse(line, "header needs positive k, n and a space")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn w3_layout() {
        let w = build_covering(3).unwrap();
        let masks: Vec<u64> = (0..6).map(|i| w.mask(i)).collect();
        assert_eq!(masks, vec![0b001, 0b010, 0b100, 0b011, 0b101, 0b110]);
        assert_eq!(w.co_singleton(3), 3);
        assert_eq!(w.co_singleton(1), 5);
        for i in 0..6 {
            assert_eq!(w.mask(w.complement_index(i)), 0b111 ^ w.mask(i));
        }
        assert_eq!(build_covering(4).unwrap().poset().len(), 8);
    }

    #[test]
    fn small_k_is_degenerate() {
        assert!(matches!(
            build_covering(2),
            Err(Error::DegenerateConstruction(_))
        ));
        assert!(matches!(
            build_covering(1),
            Err(Error::DegenerateConstruction(_))
        ));
        assert!(build_covering(33).is_err());
    }

    #[test]
    fn layer_structure() {
        for k in 3..=6 {
            let w = build_covering(k).unwrap();
            let p = w.poset();
            for a in 0..k {
                let above = (k..2 * k).filter(|&b| p.leq(a, b)).count();
                assert_eq!(above, k - 1);
                assert_eq!(w.mu0().mass(a), &ratio(1, k as i64));
                assert_eq!(w.mu1().mass(a + k), &ratio(1, k as i64));
            }
        }
    }

    #[test]
    fn vector_examples() {
        let w = build_covering(3).unwrap();
        let x = embed(&w, &BaseVector::new(3, vec![1, 2]).unwrap()).unwrap();
        assert_eq!(x.masks(), &[0b001, 0b010]);
        let mixed = CoverVector::new(&w, vec![0b001, 0b110]).unwrap();
        assert_eq!(complement(&mixed).masks(), &[0b110, 0b001]);
        let y = CoverVector::new(&w, vec![0b001, 0b100]).unwrap();
        let z = CoverVector::new(&w, vec![0b010, 0b100]).unwrap();
        let u = CoverVector::new(&w, vec![0b011, 0b100]).unwrap();
        assert!(intersects(&x, &y).unwrap());
        assert!(!intersects(&x, &z).unwrap());
        assert!(intersects(&x, &u).unwrap());
        let short = CoverVector::new(&w, vec![0b001]).unwrap();
        assert!(intersects(&x, &short).is_err());
        assert!(BaseVector::new(3, vec![0, 1]).is_err());
        assert!(CoverVector::new(&w, vec![0b111]).is_err());
        assert!(embed(&w, &BaseVector::new(4, vec![4]).unwrap()).is_err());
    }

    #[test]
    fn half_measure_examples() {
        let w = build_covering(3).unwrap();
        let single = ProductFamily::new(w.poset().clone(), 2, vec![vec![0, 3]]).unwrap();
        let r = half_measure_check(&w, &single, 1 << 20).unwrap();
        assert_eq!(r.measure, ratio(1, 36));
        assert!(r.ok);
        let bad = ProductFamily::new(w.poset().clone(), 2, vec![vec![0, 0], vec![1, 1]]).unwrap();
        assert!(matches!(
            half_measure_check(&w, &bad, 1 << 20),
            Err(Error::Validation(_))
        ));
    }

    #[test]
    fn intersecting_routes_agree() {
        let w = build_covering(3).unwrap();
        for seed in 0..5 {
            let f = greedy_maximal_intersecting(&w, 2, seed, 1 << 20).unwrap();
            assert!(is_intersecting_family(&f, 1 << 20).unwrap());
            // Pairwise route: a budget too small for the dense table.
            assert!(is_intersecting_family(&f, 4).unwrap());
            let mut pts = f.points().to_vec();
            pts.push(complement_point(&w, &pts[0]));
            let g = ProductFamily::new(w.poset().clone(), 2, pts).unwrap();
            assert!(!is_intersecting_family(&g, 1 << 20).unwrap());
            assert!(!is_intersecting_family(&g, 4).unwrap());
        }
    }

    #[test]
    fn greedy_is_reproducible() {
        let w = build_covering(3).unwrap();
        let a = greedy_maximal_intersecting(&w, 2, 42, 1 << 20).unwrap();
        let b = greedy_maximal_intersecting(&w, 2, 42, 1 << 20).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn family_file_round_trip_and_errors() {
        let w = build_covering(3).unwrap();
        let f = FamilyFile::parse("family k=3 n=2 space=cover\n1 2,3\n1,2 3\n").unwrap();
        assert_eq!(f.family.len(), 2);
        assert_eq!(f.family.points()[0], vec![0, 3 + 2]);
        let again = FamilyFile::parse(&FamilyFile::cover(&w, f.family.clone()).to_text()).unwrap();
        assert_eq!(again.family, f.family);
        let b = FamilyFile::parse("family k=3 n=2 space=base\n1 3\n2 2\n").unwrap();
        assert_eq!(b.family.points(), &[vec![0, 2], vec![1, 1]]);
        assert!(FamilyFile::parse("family k=3 n=2 space=base\n1 2,3\n").is_err());
        assert!(FamilyFile::parse("family k=3 n=2 space=base\n1\n").is_err());
        assert!(FamilyFile::parse("family k=2 n=2 space=cover\n").is_err());
        assert!(FamilyFile::parse("1 2\n").is_err());
        let empty = FamilyFile::parse("family k=3 n=4 space=cover\n").unwrap();
        assert!(empty.family.is_empty());
    }
}

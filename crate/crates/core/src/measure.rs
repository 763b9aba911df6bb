//! Probability measures on a poset, the interpolation `mu_t = (1-t) mu0 + t mu1`,
//! exact product-measure evaluation on `P^n`, slice influences and the
//! Margulis–Russo derivative along the interpolation.
//!
//! Everything here is exact. Floats only appear in the ratio diagnostics
//! ([`bkkkl_ratio`], [`empirical_c`]) and in finite-difference comparisons.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{check_budget, pow_saturating, Error, Result};
use crate::family::{ProductFamily, Space};
use crate::poset::{domination_strength, full_mask, ElementSubset, Poset};
use crate::rational::{
    format_rational, in_unit_interval, parse_rational, put_rational, to_f64, Rational,
};

#[derive(Debug, Clone, PartialEq)]
pub struct Measure {
    host: Arc<Poset>,
    mass: Vec<Rational>,
}

impl Measure {
    /// A probability measure: nonnegative masses summing to exactly one.
    pub fn new(host: Arc<Poset>, mass: Vec<Rational>) -> Result<Self> {
        if mass.len() != host.len() {
            return Err(Error::HostMismatch(format!(
                "{} masses for a poset of {} elements",
                mass.len(),
                host.len()
            )));
        }
        if let Some(neg) = mass.iter().find(|m| m.is_negative()) {
            return Err(Error::Validation(format!(
                "negative mass {}",
                format_rational(neg)
            )));
        }
        let total: Rational = mass.iter().sum();
        if !total.is_one() {
            return Err(Error::Validation(format!(
                "masses sum to {}, not 1",
                format_rational(&total)
            )));
        }
        Ok(Measure { host, mass })
    }

    /// Uniform probability on the members of `support`.
    pub fn uniform_on(host: Arc<Poset>, support: ElementSubset) -> Result<Self> {
        support.validate(&host)?;
        if support.is_empty() {
            return Err(Error::Validation(
                "uniform measure needs a nonempty support".into(),
            ));
        }
        let each = Rational::new(BigInt::one(), BigInt::from(support.len()));
        let mass = (0..host.len())
            .map(|i| {
                if support.contains(i) {
                    each.clone()
                } else {
                    Rational::zero()
                }
            })
            .collect();
        Ok(Measure { host, mass })
    }

    pub fn point_mass(host: Arc<Poset>, index: usize) -> Result<Self> {
        let support = ElementSubset::from_indices(&host, &[index])?;
        Self::uniform_on(host, support)
    }

    pub fn host(&self) -> &Arc<Poset> {
        &self.host
    }

    pub fn masses(&self) -> &[Rational] {
        &self.mass
    }

    pub fn mass(&self, index: usize) -> &Rational {
        &self.mass[index]
    }

    pub fn mass_of(&self, subset: ElementSubset) -> Rational {
        subset.indices().map(|i| &self.mass[i]).sum()
    }

    /// Reads `measure <poset-file>` followed by `<id>=<p/q>` entries, separated by
    /// newlines or `;`. Unlisted elements get mass zero. Returns the named poset file too.
    pub fn parse(text: &str, host: Arc<Poset>) -> Result<(String, Self)> {
        let mut poset_file = None;
        let mut mass = vec![Rational::zero(); host.len()];
        let mut seen = vec![false; host.len()];
        for (lineno, raw) in text.lines().enumerate() {
            let line = lineno + 1;
            let content = raw.split('#').next().unwrap_or("");
            for item in content.split(';').map(str::trim).filter(|s| !s.is_empty()) {
                if let Some(rest) = item.strip_prefix("measure") {
                    if poset_file.is_some() {
                        return Err(Error::parse(line, "duplicate `measure` header"));
                    }
                    poset_file = Some(rest.trim().to_string());
                    continue;
                }
                if poset_file.is_none() {
                    return Err(Error::parse(line, "expected `measure <poset-file>` header"));
                }
                let (id, value) = item.split_once('=').ok_or_else(|| {
                    Error::parse(line, format!("expected <id>=<rational>, got {item:?}"))
                })?;
                let id: u64 = id
                    .trim()
                    .parse()
                    .map_err(|_| Error::parse(line, "bad element id"))?;
                let idx = host.index_of(id).ok_or_else(|| {
                    Error::parse(line, format!("element {id} is not in the poset"))
                })?;
                if std::mem::replace(&mut seen[idx], true) {
                    return Err(Error::parse(line, format!("element {id} listed twice")));
                }
                mass[idx] = parse_rational(value).map_err(|e| Error::parse(line, e.to_string()))?;
            }
        }
        let poset_file = poset_file.ok_or_else(|| Error::parse(1, "missing `measure` header"))?;
        Ok((poset_file, Measure::new(host, mass)?))
    }

    pub fn to_text(&self, poset_file: &str) -> String {
        let mut out = format!("measure {poset_file}\n");
        for (i, m) in self.mass.iter().enumerate() {
            if !m.is_zero() {
                let _ = writeln!(out, "{}={}", self.host.id(i), format_rational(m));
            }
        }
        out
    }
}

/// The straight-line path between two measures on the same poset.
#[derive(Debug, Clone)]
pub struct Interpolation {
    mu0: Measure,
    mu1: Measure,
}

impl Interpolation {
    pub fn new(mu0: Measure, mu1: Measure) -> Result<Self> {
        if !(Arc::ptr_eq(&mu0.host, &mu1.host) || mu0.host == mu1.host) {
            return Err(Error::HostMismatch(
                "interpolation endpoints live on different posets".into(),
            ));
        }
        Ok(Interpolation { mu0, mu1 })
    }

    pub fn mu0(&self) -> &Measure {
        &self.mu0
    }

    pub fn mu1(&self) -> &Measure {
        &self.mu1
    }

    pub fn host(&self) -> &Arc<Poset> {
        &self.mu0.host
    }

    /// Pointwise `mu1 - mu0`.
    pub fn difference(&self) -> Vec<Rational> {
        self.mu1
            .mass
            .iter()
            .zip(&self.mu0.mass)
            .map(|(b, a)| b - a)
            .collect()
    }

    /// Masses of `(1-t) mu0 + t mu1` for any rational `t`; a signed measure off `[0,1]`.
    pub fn masses_at(&self, t: &Rational) -> Vec<Rational> {
        let s = Rational::one() - t;
        self.mu0
            .mass
            .iter()
            .zip(&self.mu1.mass)
            .map(|(a, b)| a * &s + b * t)
            .collect()
    }
}

/// `mu_t` for `t` in `[0,1]`.
pub fn interpolate(interp: &Interpolation, t: &Rational) -> Result<Measure> {
    if !in_unit_interval(t) {
        return Err(Error::Domain(format!(
            "t = {} is outside [0,1]",
            format_rational(t)
        )));
    }
    Ok(Measure {
        host: interp.host().clone(),
        mass: interp.masses_at(t),
    })
}

fn check_host(family: &ProductFamily, host: &Arc<Poset>) -> Result<()> {
    if Arc::ptr_eq(family.host(), host) || family.host().as_ref() == host.as_ref() {
        Ok(())
    } else {
        Err(Error::HostMismatch(
            "family and measure live on different posets".into(),
        ))
    }
}

/// Element weights rescaled to integers over a common denominator.
struct Scaled {
    small: Option<Vec<i128>>,
    big: Vec<BigInt>,
    den: BigInt,
}

impl Scaled {
    fn new(weights: &[Rational]) -> Self {
        let den = weights
            .iter()
            .fold(BigInt::one(), |acc, w| acc.lcm(w.denom()));
        let big: Vec<BigInt> = weights
            .iter()
            .map(|w| w.numer() * (&den / w.denom()))
            .collect();
        let small = big.iter().map(|b| b.to_i128()).collect();
        Scaled { small, big, den }
    }

    fn point_weight(&self, coords: impl Iterator<Item = u8> + Clone) -> Weight {
        if let Some(small) = &self.small {
            let mut acc: i128 = 1;
            let mut overflow = false;
            for c in coords.clone() {
                match acc.checked_mul(small[c as usize]) {
                    Some(v) => acc = v,
                    None => {
                        overflow = true;
                        break;
                    }
                }
            }
            if !overflow {
                return Weight::Small(acc);
            }
        }
        Weight::Big(coords.fold(BigInt::one(), |acc, c| acc * &self.big[c as usize]))
    }
}

enum Weight {
    Small(i128),
    Big(BigInt),
}

/// Exact integer sum that stays in `i128` until it overflows.
#[derive(Default)]
struct Accumulator {
    small: i128,
    big: BigInt,
}

impl Accumulator {
    fn add(&mut self, w: Weight) {
        match w {
            Weight::Small(v) => match self.small.checked_add(v) {
                Some(s) => self.small = s,
                None => {
                    self.big += BigInt::from(self.small);
                    self.small = v;
                }
            },
            Weight::Big(v) => self.big += v,
        }
    }

    fn total(self) -> BigInt {
        self.big + BigInt::from(self.small)
    }
}

/// Sum over points of `prod_i weights(x_i)`.
fn weighted_point_sum(family: &ProductFamily, weights: &[Rational]) -> Rational {
    let scaled = Scaled::new(weights);
    let mut acc = Accumulator::default();
    for p in family.points() {
        acc.add(scaled.point_weight(p.iter().copied()));
    }
    Rational::new(acc.total(), num_traits::pow(scaled.den, family.n()))
}

/// `mu^n(family)`.
pub fn product_measure(mu: &Measure, family: &ProductFamily) -> Result<Rational> {
    check_host(family, &mu.host)?;
    Ok(weighted_point_sum(family, &mu.mass))
}

/// `mu_t^n(family)` for any rational `t`, read as the polynomial in `t` it is on `[0,1]`.
pub fn measure_along(
    family: &ProductFamily,
    interp: &Interpolation,
    t: &Rational,
) -> Result<Rational> {
    check_host(family, interp.host())?;
    Ok(weighted_point_sum(family, &interp.masses_at(t)))
}

/// For coordinate `i`, the total `weights^{n-1}`-mass of the other coordinates grouped by
/// the slice `{w : (x_1..w..x_n) in family}` they induce.
fn slice_masses(
    space: &Space,
    table: &[bool],
    coordinate: usize,
    weights: &[Rational],
) -> BTreeMap<u64, Rational> {
    let scaled = Scaled::new(weights);
    let m = space.base;
    let low = space.stride(coordinate);
    let others = space.size / m;
    let mut buckets: BTreeMap<u64, Accumulator> = BTreeMap::new();
    let mut digits = vec![0u8; space.n - 1];
    for code in 0..others {
        let (high, rest) = (code / low, code % low);
        let base = high * m * low + rest;
        let mut slice = 0u64;
        for w in 0..m {
            if table[base + w * low] {
                slice |= 1 << w;
            }
        }
        let mut c = code;
        for d in digits.iter_mut().rev() {
            *d = (c % m) as u8;
            c /= m;
        }
        buckets
            .entry(slice)
            .or_default()
            .add(scaled.point_weight(digits.iter().copied()));
    }
    let den = num_traits::pow(scaled.den, space.n - 1);
    buckets
        .into_iter()
        .map(|(slice, acc)| (slice, Rational::new(acc.total(), den.clone())))
        .collect()
}

fn slice_table(
    family: &ProductFamily,
    coordinate: usize,
    budget: u64,
) -> Result<(Space, Vec<bool>)> {
    if coordinate >= family.n() {
        return Err(Error::Domain(format!(
            "coordinate {} out of range 1..={}",
            coordinate + 1,
            family.n()
        )));
    }
    check_budget(
        "slice enumeration",
        pow_saturating(family.host().len(), family.n() - 1),
        budget,
    )?;
    family.indicator(budget)
}

/// Probability under `mu^n` that the slice at `coordinate` (0-based) is neither empty nor all of the poset.
pub fn influence(
    family: &ProductFamily,
    mu: &Measure,
    coordinate: usize,
    budget: u64,
) -> Result<Rational> {
    check_host(family, &mu.host)?;
    let (space, table) = slice_table(family, coordinate, budget)?;
    Ok(influence_from_table(&space, &table, coordinate, &mu.mass))
}

fn influence_from_table(
    space: &Space,
    table: &[bool],
    coordinate: usize,
    weights: &[Rational],
) -> Rational {
    let full = full_mask(space.base);
    slice_masses(space, table, coordinate, weights)
        .into_iter()
        .filter(|(slice, _)| *slice != 0 && *slice != full)
        .map(|(_, w)| w)
        .sum()
}

#[derive(Debug, Clone, PartialEq)]
pub struct InfluenceReport {
    pub t: Rational,
    pub per_coordinate: Vec<Rational>,
    pub total: Rational,
    pub family_measure: Rational,
}

impl InfluenceReport {
    pub fn to_json(&self) -> serde_json::Value {
        let mut map = serde_json::Map::new();
        put_rational(&mut map, "t", &self.t);
        map.insert(
            "per_coordinate".into(),
            self.per_coordinate
                .iter()
                .map(format_rational)
                .collect::<Vec<_>>()
                .into(),
        );
        map.insert(
            "per_coordinate_f64".into(),
            self.per_coordinate
                .iter()
                .map(to_f64)
                .collect::<Vec<_>>()
                .into(),
        );
        put_rational(&mut map, "total", &self.total);
        put_rational(&mut map, "family_measure", &self.family_measure);
        serde_json::Value::Object(map)
    }
}

pub fn influence_report(
    family: &ProductFamily,
    interp: &Interpolation,
    t: &Rational,
    budget: u64,
) -> Result<InfluenceReport> {
    let mu = interpolate(interp, t)?;
    check_host(family, &mu.host)?;
    let (space, table) = slice_table(family, 0, budget)?;
    let per_coordinate: Vec<Rational> = (0..family.n())
        .map(|i| influence_from_table(&space, &table, i, &mu.mass))
        .collect();
    Ok(InfluenceReport {
        t: t.clone(),
        total: per_coordinate.iter().sum(),
        per_coordinate,
        family_measure: weighted_point_sum(family, &mu.mass),
    })
}

/// `d/dt mu_t^n(A) = sum_i (mu_t^{i-1} x (mu1 - mu0) x mu_t^{n-i})(A)`.
///
/// With `strict`, non-up-sets are rejected; the identity itself holds for any family.
pub fn russo_derivative(
    family: &ProductFamily,
    interp: &Interpolation,
    t: &Rational,
    strict: bool,
    budget: u64,
) -> Result<Rational> {
    let mu = interpolate(interp, t)?;
    check_host(family, &mu.host)?;
    if strict && !family.is_up_set() {
        return Err(Error::Validation(
            "family is not an up-set of the product order".into(),
        ));
    }
    let (space, table) = slice_table(family, 0, budget)?;
    let diff = interp.difference();
    let mut total = Rational::zero();
    for i in 0..family.n() {
        for (slice, w) in slice_masses(&space, &table, i, &mu.mass) {
            let signed: Rational = ElementSubset::from_bits(slice)
                .indices()
                .map(|e| &diff[e])
                .sum();
            total += signed * w;
        }
    }
    Ok(total)
}

/// `(P(t+h) - P(t-h)) / 2h` for `P(t) = mu_t^n(A)`, evaluated exactly.
pub fn central_difference(
    family: &ProductFamily,
    interp: &Interpolation,
    t: &Rational,
    h: &Rational,
) -> Result<Rational> {
    if !h.is_positive() {
        return Err(Error::Domain("step must be positive".into()));
    }
    let up = measure_along(family, interp, &(t + h))?;
    let down = measure_along(family, interp, &(t - h))?;
    Ok((up - down) / (h * Rational::from_integer(BigInt::from(2))))
}

/// `|fd - exact| / |exact|`, or the absolute error when the exact value is zero.
pub fn relative_error(exact: &Rational, estimate: &Rational) -> f64 {
    let err = to_f64(&(estimate - exact).abs());
    if exact.is_zero() {
        err
    } else {
        err / to_f64(&exact.abs())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LowerBoundCheck {
    pub derivative: Rational,
    pub kappa: Rational,
    pub total_influence: Rational,
    pub kappa_times_total_influence: Rational,
    pub holds: bool,
}

/// Compares the derivative against `kappa * sum_i I(i)`, with `kappa` the domination strength of the endpoints.
pub fn derivative_lower_bound_check(
    family: &ProductFamily,
    interp: &Interpolation,
    t: &Rational,
    budget: u64,
) -> Result<LowerBoundCheck> {
    let kappa = domination_strength(interp.host(), interp.mu0(), interp.mu1(), budget)?.strength;
    derivative_lower_bound_with_kappa(family, interp, t, &kappa, budget)
}

pub fn derivative_lower_bound_with_kappa(
    family: &ProductFamily,
    interp: &Interpolation,
    t: &Rational,
    kappa: &Rational,
    budget: u64,
) -> Result<LowerBoundCheck> {
    let derivative = russo_derivative(family, interp, t, true, budget)?;
    let total_influence = influence_report(family, interp, t, budget)?.total;
    let bound = kappa * &total_influence;
    Ok(LowerBoundCheck {
        holds: derivative >= bound,
        derivative,
        kappa: kappa.clone(),
        total_influence,
        kappa_times_total_influence: bound,
    })
}

/// `sum_i I(i) / (min(mu, 1-mu) ln n)`; a diagnostic, no constant is implied.
pub fn bkkkl_ratio(family: &ProductFamily, mu: &Measure, budget: u64) -> Result<f64> {
    check_host(family, &mu.host)?;
    let n = family.n();
    if n < 2 {
        return Err(Error::UndefinedRatio("ln n vanishes for n = 1".into()));
    }
    let measure = weighted_point_sum(family, &mu.mass);
    if measure.is_zero() || measure.is_one() {
        return Err(Error::UndefinedRatio(format!(
            "family measure is {}",
            format_rational(&measure)
        )));
    }
    let (space, table) = slice_table(family, 0, budget)?;
    let total: Rational = (0..n)
        .map(|i| influence_from_table(&space, &table, i, &mu.mass))
        .sum();
    let complement = Rational::one() - &measure;
    let smaller = if measure < complement {
        measure
    } else {
        complement
    };
    Ok(to_f64(&total) / (to_f64(&smaller) * (n as f64).ln()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdReport {
    pub p: Rational,
    pub q: Rational,
    pub eps: Rational,
    pub kappa: Rational,
    pub n: usize,
    pub empirical_c: f64,
}

impl ThresholdReport {
    pub fn to_json(&self) -> serde_json::Value {
        let mut map = serde_json::Map::new();
        put_rational(&mut map, "p", &self.p);
        put_rational(&mut map, "q", &self.q);
        put_rational(&mut map, "eps", &self.eps);
        put_rational(&mut map, "kappa", &self.kappa);
        map.insert("n".into(), self.n.into());
        map.insert("empirical_C".into(), self.empirical_c.into());
        serde_json::Value::Object(map)
    }
}

/// Smallest `C` with `q - p <= C kappa^{-1} ln(1/2eps) / ln n`, i.e.
/// `(q - p) kappa ln n / ln(1/(2 eps))`.
pub fn empirical_c(
    p: &Rational,
    q: &Rational,
    eps: &Rational,
    kappa: &Rational,
    n: usize,
) -> Result<ThresholdReport> {
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    if !(in_unit_interval(p) && in_unit_interval(q) && p < q) {
        return Err(Error::Domain("need 0 <= p < q <= 1".into()));
    }
    if !eps.is_positive() || *eps >= half {
        return Err(Error::Domain(format!(
            "eps = {} must lie in (0, 1/2)",
            format_rational(eps)
        )));
    }
    if !kappa.is_positive() {
        return Err(Error::Domain("kappa must be positive".into()));
    }
    if n < 2 {
        return Err(Error::Domain(
            "n must be at least 2 (ln n vanishes at n = 1)".into(),
        ));
    }
    // ln(1/(2 eps)) = ln(den) - ln(2 num), computed from the exact parts.
    let two_eps = eps * Rational::from_integer(BigInt::from(2));
    let log_inv = ln_big(two_eps.denom()) - ln_big(two_eps.numer());
    let c = to_f64(&(q - p)) * to_f64(kappa) * (n as f64).ln() / log_inv;
    Ok(ThresholdReport {
        p: p.clone(),
        q: q.clone(),
        eps: eps.clone(),
        kappa: kappa.clone(),
        n,
        empirical_c: c,
    })
}

fn ln_big(v: &BigInt) -> f64 {
    match v.to_f64() {
        Some(f) if f.is_finite() => f.ln(),
        _ => {
            let bits = v.bits();
            let shift = bits.saturating_sub(60);
            let top: BigInt = v >> shift;
            top.to_f64().unwrap_or(f64::NAN).ln() + shift as f64 * std::f64::consts::LN_2
        }
    }
}

//! The three-stage argument applied to one concrete family `A ⊂ [k]^n`:
//!
//! 1. closure: embed `A` into `W_k^n` and take its up-closure `B`;
//! 2. half measure: check `mu_{1/2}^n(B) <= 1/2`;
//! 3. bound: feed `p = 0`, `q = 1/2`, `eps = mu_0^n(B)` and the domination
//!    strength `kappa` of `W_k` into the threshold inequality and report the
//!    smallest constant that makes it hold.

use num_bigint::BigInt;
use num_traits::One;

use crate::covering::{
    build_covering, complement_pairing_free, embed_family, half_measure, is_intersecting_family,
};
use crate::error::{pow_saturating, Error, Result};
use crate::family::ProductFamily;
use crate::lab::{is_symmetric, PermutationGroupSpec};
use crate::measure::{empirical_c, product_measure, ThresholdReport};
use crate::poset::domination_strength;
use crate::rational::{put_rational, Rational};

#[derive(Debug, Clone)]
pub struct BoundChain {
    pub k: usize,
    pub n: usize,
    pub family_size: usize,
    /// `|B|`, when the cover space fit in the budget.
    pub closure_size: Option<usize>,
    /// `mu_{1/2}^n(B)`, when computed.
    pub half_measure: Option<Rational>,
    /// No member of `B` has its complement in `B`.
    pub complement_pairing_free: Option<bool>,
    pub eps: Rational,
    pub kappa: Rational,
    pub threshold: Option<ThresholdReport>,
    pub warnings: Vec<String>,
}

impl BoundChain {
    /// Whether the half-measure stage confirmed `mu_{1/2}^n(B) <= 1/2`.
    pub fn half_measure_ok(&self) -> bool {
        let half = Rational::new(BigInt::one(), BigInt::from(2));
        self.half_measure.as_ref().is_none_or(|m| *m <= half)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut closure = serde_json::Map::new();
        closure.insert("family_size".into(), self.family_size.into());
        closure.insert("closure_size".into(), self.closure_size.into());
        let mut half = serde_json::Map::new();
        match &self.half_measure {
            Some(m) => put_rational(&mut half, "measure", m),
            None => {
                half.insert("measure".into(), serde_json::Value::Null);
            }
        }
        half.insert("at_most_half".into(), self.half_measure_ok().into());
        half.insert(
            "complement_pairing_free".into(),
            self.complement_pairing_free.into(),
        );
        let mut bound = serde_json::Map::new();
        put_rational(&mut bound, "eps", &self.eps);
        put_rational(&mut bound, "kappa", &self.kappa);
        bound.insert("p".into(), "0".into());
        bound.insert("q".into(), "1/2".into());
        bound.insert(
            "empirical_C".into(),
            self.threshold.as_ref().map(|t| t.empirical_c).into(),
        );
        let mut map = serde_json::Map::new();
        map.insert("k".into(), self.k.into());
        map.insert("n".into(), self.n.into());
        map.insert("closure".into(), closure.into());
        map.insert("half_measure".into(), half.into());
        map.insert("bound".into(), bound.into());
        map.insert("warnings".into(), self.warnings.clone().into());
        serde_json::Value::Object(map)
    }
}

/// Runs the pipeline on a symmetric intersecting base family over `[k]^n`, `k >= 3`.
pub fn bound_chain(
    family: &ProductFamily,
    group: &PermutationGroupSpec,
    budget: u64,
) -> Result<BoundChain> {
    let k = family.host().len();
    let n = family.n();
    let cover = build_covering(k)?;
    if !is_intersecting_family(family, budget)? {
        return Err(Error::Validation("family is not intersecting".into()));
    }
    let sym = is_symmetric(family, group)?;
    if !sym.invariant {
        return Err(Error::Validation(
            "family is not invariant under the supplied generators".into(),
        ));
    }
    if !sym.transitive {
        return Err(Error::Validation(
            "supplied generators do not act transitively".into(),
        ));
    }
    let mut warnings = Vec::new();

    // Stage 1: closure.
    let embedded = embed_family(&cover, family)?;
    let closure = if pow_saturating(cover.poset().len(), n) <= budget as u128 {
        Some(embedded.up_closure(budget)?)
    } else {
        warnings.push(format!(
            "cover space ({}^{n} points) exceeds the budget; closure not materialized, eps taken as |A|/k^n",
            2 * k
        ));
        None
    };

    // Stage 2: half measure.
    let (half, pairing) = match &closure {
        Some(b) => (
            Some(half_measure(&cover, b).measure),
            Some(complement_pairing_free(&cover, b)),
        ),
        None => (None, None),
    };

    // Stage 3: bound.
    let eps = match &closure {
        Some(b) => product_measure(cover.mu0(), b)?,
        None => Rational::new(
            BigInt::from(family.len()),
            num_traits::pow(BigInt::from(k), n),
        ),
    };
    let kappa = domination_strength(cover.poset(), cover.mu0(), cover.mu1(), budget)?.strength;
    let p = Rational::from_integer(BigInt::from(0));
    let q = Rational::new(BigInt::one(), BigInt::from(2));
    let threshold = if n < 2 {
        warnings.push("n = 1: ln n = 0, empirical C is undefined".into());
        None
    } else {
        match empirical_c(&p, &q, &eps, &kappa, n) {
            Ok(r) => Some(r),
            Err(e) => {
                warnings.push(format!("empirical C undefined: {e}"));
                None
            }
        }
    };
    Ok(BoundChain {
        k,
        n,
        family_size: family.len(),
        closure_size: closure.as_ref().map(ProductFamily::len),
        half_measure: half,
        complement_pairing_free: pairing,
        eps,
        kappa,
        threshold,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lab::{dictator_family, set_intersecting_family, singer_difference_set};
    use crate::rational::ratio;

    const B: u64 = 1 << 24;

    #[test]
    fn dictator_is_rejected_as_asymmetric() {
        let d = dictator_family(3, 2, 1, 1, B).unwrap();
        assert!(matches!(
            bound_chain(&d, &PermutationGroupSpec::cyclic(2), B),
            Err(Error::Validation(_))
        ));
    }

    #[test]
    fn one_dimensional_family_warns() {
        let f = dictator_family(3, 1, 1, 1, B).unwrap();
        let r = bound_chain(&f, &PermutationGroupSpec::cyclic(1), B).unwrap();
        assert_eq!(r.eps, ratio(1, 3));
        assert!(r.threshold.is_none());
        assert_eq!(r.warnings.len(), 1);
        // closure of {1} is {1},{1,2},{1,3}: half of W_3 under the uniform measure
        assert_eq!(r.half_measure, Some(ratio(1, 2)));
    }

    #[test]
    fn small_budget_skips_closure() {
        let lines = singer_difference_set(2).unwrap();
        let a = set_intersecting_family(&lines, 1, 3, true, B).unwrap();
        let r = bound_chain(&a, &PermutationGroupSpec::cyclic(7), 100_000).unwrap();
        assert!(r.closure_size.is_none());
        assert_eq!(r.eps, ratio(435, 2187));
        assert!(r.threshold.is_some());
    }

    #[test]
    fn binary_families_have_no_cover() {
        let f = crate::lab::majority_family(3, B).unwrap();
        assert!(matches!(
            bound_chain(&f, &PermutationGroupSpec::cyclic(3), B),
            Err(Error::DegenerateConstruction(_))
        ));
    }
}

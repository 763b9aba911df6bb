//! Explicit families of points in a product space `P^n`.

use std::sync::Arc;

use crate::error::{check_budget, pow_saturating, Error, Result};
use crate::poset::Poset;

/// A point of `P^n`, one element index per coordinate.
pub type Point = Vec<u8>;

/// A deduplicated, sorted set of points of `host^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductFamily {
    host: Arc<Poset>,
    n: usize,
    points: Vec<Point>,
}

impl ProductFamily {
    pub fn new(host: Arc<Poset>, n: usize, mut points: Vec<Point>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("product dimension must be positive".into()));
        }
        for p in &points {
            if p.len() != n {
                return Err(Error::Validation(format!(
                    "point {p:?} does not have {n} coordinates"
                )));
            }
            if let Some(&bad) = p.iter().find(|&&e| e as usize >= host.len()) {
                return Err(Error::Validation(format!(
                    "coordinate value {bad} is not an element index of the host"
                )));
            }
        }
        points.sort_unstable();
        points.dedup();
        Ok(ProductFamily { host, n, points })
    }

    pub fn empty(host: Arc<Poset>, n: usize) -> Result<Self> {
        Self::new(host, n, Vec::new())
    }

    /// All of `host^n`.
    pub fn full(host: Arc<Poset>, n: usize, budget: u64) -> Result<Self> {
        let space = Space::new(host.len(), n, budget)?;
        let points = (0..space.size).map(|c| space.decode(c)).collect();
        Self::new(host, n, points)
    }

    pub(crate) fn from_sorted_unchecked(host: Arc<Poset>, n: usize, points: Vec<Point>) -> Self {
        debug_assert!(points.windows(2).all(|w| w[0] < w[1]));
        ProductFamily { host, n, points }
    }

    pub fn host(&self) -> &Arc<Poset> {
        &self.host
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, point: &[u8]) -> bool {
        self.points
            .binary_search_by(|p| p.as_slice().cmp(point))
            .is_ok()
    }

    /// Number of points of the ambient space, `|host|^n` (saturating).
    pub fn space_size(&self) -> u128 {
        pow_saturating(self.host.len(), self.n)
    }

    pub fn same_space(&self, other: &ProductFamily) -> bool {
        self.n == other.n && (Arc::ptr_eq(&self.host, &other.host) || self.host == other.host)
    }

    /// Dense membership table over `host^n`, indexed by [`Space::encode`].
    pub fn indicator(&self, budget: u64) -> Result<(Space, Vec<bool>)> {
        let space = Space::new(self.host.len(), self.n, budget)?;
        let mut table = vec![false; space.size];
        for p in &self.points {
            table[space.encode(p)] = true;
        }
        Ok((space, table))
    }

    /// Whether the family is an up-set of the coordinatewise product order.
    pub fn is_up_set(&self) -> bool {
        let mut probe = Vec::with_capacity(self.n);
        for p in &self.points {
            for i in 0..self.n {
                let ups = self.host.up_mask(p[i] as usize);
                for w in 0..self.host.len() {
                    if w as u8 == p[i] || ups >> w & 1 == 0 {
                        continue;
                    }
                    probe.clear();
                    probe.extend_from_slice(p);
                    probe[i] = w as u8;
                    if !self.contains(&probe) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Smallest up-set of `host^n` containing the family.
    pub fn up_closure(&self, budget: u64) -> Result<ProductFamily> {
        let space = Space::new(self.host.len(), self.n, budget)?;
        let mut table = vec![false; space.size];
        let ups: Vec<Vec<u8>> = (0..self.host.len())
            .map(|a| {
                (0..self.host.len())
                    .filter(|&b| self.host.leq(a, b))
                    .map(|b| b as u8)
                    .collect()
            })
            .collect();
        let mut cursor = vec![0usize; self.n];
        for p in &self.points {
            // Odometer over the product of principal up-sets.
            cursor.iter_mut().for_each(|c| *c = 0);
            'odometer: loop {
                let code = (0..self.n).fold(0usize, |acc, i| {
                    acc * space.base + ups[p[i] as usize][cursor[i]] as usize
                });
                table[code] = true;
                let mut i = self.n;
                while i > 0 {
                    i -= 1;
                    cursor[i] += 1;
                    if cursor[i] < ups[p[i] as usize].len() {
                        continue 'odometer;
                    }
                    cursor[i] = 0;
                }
                break;
            }
        }
        Ok(Self::from_indicator(self.host.clone(), space, &table))
    }

    pub fn from_indicator(host: Arc<Poset>, space: Space, table: &[bool]) -> ProductFamily {
        let points = table
            .iter()
            .enumerate()
            .filter(|(_, &on)| on)
            .map(|(c, _)| space.decode(c))
            .collect();
        ProductFamily::from_sorted_unchecked(host, space.n, points)
    }

    pub fn union(&self, other: &ProductFamily) -> Result<ProductFamily> {
        if !self.same_space(other) {
            return Err(Error::HostMismatch(
                "families live in different spaces".into(),
            ));
        }
        let mut pts = self.points.clone();
        pts.extend(other.points.iter().cloned());
        ProductFamily::new(self.host.clone(), self.n, pts)
    }

    pub fn is_subset_of(&self, other: &ProductFamily) -> bool {
        self.same_space(other) && self.points.iter().all(|p| other.contains(p))
    }
}

/// Mixed-radix coding of `host^n` with the first coordinate most significant,
/// so code order agrees with lexicographic point order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Space {
    pub base: usize,
    pub n: usize,
    pub size: usize,
}

impl Space {
    pub fn new(base: usize, n: usize, budget: u64) -> Result<Self> {
        let size = pow_saturating(base, n);
        check_budget("product-space enumeration", size, budget)?;
        Ok(Space {
            base,
            n,
            size: size as usize,
        })
    }

    pub fn encode(&self, point: &[u8]) -> usize {
        point
            .iter()
            .fold(0usize, |acc, &e| acc * self.base + e as usize)
    }

    pub fn decode(&self, mut code: usize) -> Point {
        let mut p = vec![0u8; self.n];
        for slot in p.iter_mut().rev() {
            *slot = (code % self.base) as u8;
            code /= self.base;
        }
        p
    }

    /// Stride of coordinate `i` in the code.
    pub fn stride(&self, i: usize) -> usize {
        self.base.pow((self.n - 1 - i) as u32)
    }
}

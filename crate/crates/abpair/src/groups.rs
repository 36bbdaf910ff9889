//! Finite abelian groups presented as ordered lists of cyclic factors.
//!
//! A group here is always `Z_{a_1} + ... + Z_{a_m}` for explicit orders
//! `a_i >= 1`, and an element is its coordinate vector. The presentation is
//! part of the data: `Z6 + Z4` and `Z2 + Z12` are isomorphic but distinct
//! values, and every operation answers with respect to the presentation it
//! was given.

use std::collections::BTreeMap;
use std::fmt;

use crate::arith;
use crate::error::{Error, Result};
use crate::odometer::Odometer;

/// Ordered direct sum of cyclic groups. Factors of 1 are legal (they
/// contribute a pinned zero coordinate) and disappear under [`normalize`].
///
/// [`normalize`]: FinAbGroup::normalize
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FinAbGroup {
    factors: Vec<u64>,
}

/// Coordinate vector of a group element. Meaningful only next to the group
/// it came from; all arithmetic lives on [`FinAbGroup`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    coords: Vec<u64>,
}

impl GroupElement {
    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<u64> {
        self.coords
    }

    pub(crate) fn coords_mut(&mut self) -> &mut [u64] {
        &mut self.coords
    }

    pub(crate) fn from_coords(coords: Vec<u64>) -> Self {
        GroupElement { coords }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl FinAbGroup {
    pub fn new(factors: Vec<u64>) -> Result<Self> {
        if factors.iter().any(|&a| a == 0) {
            return Err(Error::ZeroFactor);
        }
        Ok(FinAbGroup { factors })
    }

    pub fn cyclic(n: u64) -> Result<Self> {
        FinAbGroup::new(vec![n])
    }

    pub fn trivial() -> Self {
        FinAbGroup { factors: vec![] }
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn arity(&self) -> usize {
        self.factors.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    /// Number of elements; saturates at u128::MAX, which no enumeration cap
    /// can reach anyway.
    pub fn order(&self) -> u128 {
        Odometer::state_count(&self.factors)
    }

    /// Least n >= 1 with n*x = 0 for every x: the lcm of the factors.
    pub fn exponent(&self) -> u64 {
        self.factors.iter().fold(1, |e, &a| arith::lcm(e, a))
    }

    /// Concatenation of presentations; the ambient group of a direct product.
    pub fn direct_sum(&self, other: &FinAbGroup) -> FinAbGroup {
        let mut factors = self.factors.clone();
        factors.extend_from_slice(&other.factors);
        FinAbGroup { factors }
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement {
            coords: vec![0; self.factors.len()],
        }
    }

    /// The i-th standard generator (1 in coordinate i). For a factor of 1
    /// this is the zero coordinate, the only resident.
    pub fn generator(&self, i: usize) -> GroupElement {
        let mut coords = vec![0; self.factors.len()];
        coords[i] = 1 % self.factors[i];
        GroupElement { coords }
    }

    /// Build an element from raw coordinates, reducing each mod its factor.
    pub fn element(&self, coords: &[u64]) -> Result<GroupElement> {
        if coords.len() != self.factors.len() {
            return Err(Error::ArityMismatch {
                expected: self.factors.len(),
                got: coords.len(),
            });
        }
        Ok(GroupElement {
            coords: coords
                .iter()
                .zip(&self.factors)
                .map(|(&c, &a)| c % a)
                .collect(),
        })
    }

    pub fn check_element(&self, x: &GroupElement) -> Result<()> {
        if x.coords.len() != self.factors.len() {
            return Err(Error::ArityMismatch {
                expected: self.factors.len(),
                got: x.coords.len(),
            });
        }
        if x.coords.iter().zip(&self.factors).any(|(&c, &a)| c >= a) {
            return Err(Error::Invalid(format!(
                "element {x} has a coordinate outside its factor's range"
            )));
        }
        Ok(())
    }

    pub fn add(&self, x: &GroupElement, y: &GroupElement) -> Result<GroupElement> {
        self.check_element(x)?;
        self.check_element(y)?;
        let mut out = vec![0; self.factors.len()];
        self.add_into(&x.coords, &y.coords, &mut out);
        Ok(GroupElement { coords: out })
    }

    pub fn neg(&self, x: &GroupElement) -> Result<GroupElement> {
        self.check_element(x)?;
        Ok(GroupElement {
            coords: x
                .coords
                .iter()
                .zip(&self.factors)
                .map(|(&c, &a)| if c == 0 { 0 } else { a - c })
                .collect(),
        })
    }

    pub fn scalar_mul(&self, n: u64, x: &GroupElement) -> Result<GroupElement> {
        self.check_element(x)?;
        let mut out = vec![0; self.factors.len()];
        self.scalar_mul_into(n, &x.coords, &mut out);
        Ok(GroupElement { coords: out })
    }

    pub fn sub(&self, x: &GroupElement, y: &GroupElement) -> Result<GroupElement> {
        let ny = self.neg(y)?;
        self.add(x, &ny)
    }

    /// Least n >= 1 with n*x = 0. Starts from the group exponent and strips
    /// prime factors that are not needed; no linear search.
    pub fn element_order(&self, x: &GroupElement) -> Result<u64> {
        self.check_element(x)?;
        let e = self.exponent();
        Ok(self.element_order_with(&arith::factorize(e), e, &x.coords))
    }

    /// All |G| elements in lexicographic coordinate order.
    pub fn elements(&self) -> Elements {
        Elements {
            odo: Odometer::new(self.factors.clone()),
            done: self.factors.iter().any(|&a| a == 0),
            first: true,
        }
    }

    /// Position of x in the lexicographic enumeration.
    pub fn lex_index(&self, x: &GroupElement) -> Result<u128> {
        self.check_element(x)?;
        let mut idx = 0u128;
        for (&c, &a) in x.coords.iter().zip(&self.factors) {
            idx = idx * a as u128 + c as u128;
        }
        Ok(idx)
    }

    /// Inverse of [`lex_index`](FinAbGroup::lex_index).
    pub fn element_at(&self, mut idx: u128) -> Result<GroupElement> {
        if idx >= self.order() {
            return Err(Error::Invalid(format!(
                "index {idx} out of range for a group of order {}",
                self.order()
            )));
        }
        let mut coords = vec![0u64; self.factors.len()];
        for i in (0..self.factors.len()).rev() {
            let a = self.factors[i] as u128;
            coords[i] = (idx % a) as u64;
            idx /= a;
        }
        Ok(GroupElement { coords })
    }

    /// Invariant-factor and primary decompositions of the isomorphism class.
    pub fn normalize(&self) -> GroupStructure {
        let mut primary: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
        for &a in &self.factors {
            for (p, e) in arith::factorize(a) {
                primary.entry(p).or_default().push(e);
            }
        }
        for exps in primary.values_mut() {
            exps.sort_unstable_by(|a, b| b.cmp(a));
        }
        GroupStructure::from_primary(primary)
    }

    pub fn is_isomorphic(&self, other: &FinAbGroup) -> bool {
        self.normalize().invariant_factors() == other.normalize().invariant_factors()
    }

    /// Multiset of element orders, computed by walking every element. This is
    /// the presentation-free fingerprint of the isomorphism class; the cap
    /// bounds how many elements we are willing to walk.
    pub fn order_census(&self, max_enum: u64) -> Result<BTreeMap<u64, u64>> {
        let n = self.order();
        if n > max_enum as u128 {
            return Err(Error::EnumerationLimit {
                needed: n,
                limit: max_enum,
            });
        }
        let e = self.exponent();
        let e_factors = arith::factorize(e);
        let mut census = BTreeMap::new();
        let mut odo = Odometer::new(self.factors.clone());
        loop {
            let ord = self.element_order_with(&e_factors, e, odo.digits());
            *census.entry(ord).or_insert(0u64) += 1;
            if odo.advance().is_none() {
                break;
            }
        }
        Ok(census)
    }

    // -- raw helpers on coordinate slices, no allocation, no checks --

    pub(crate) fn add_into(&self, x: &[u64], y: &[u64], out: &mut [u64]) {
        for i in 0..self.factors.len() {
            let s = x[i] + y[i];
            out[i] = if s >= self.factors[i] {
                s - self.factors[i]
            } else {
                s
            };
        }
    }

    pub(crate) fn scalar_mul_into(&self, n: u64, x: &[u64], out: &mut [u64]) {
        for i in 0..self.factors.len() {
            out[i] = arith::mul_mod(n, x[i], self.factors[i]);
        }
    }

    pub(crate) fn scalar_mul_is_zero(&self, n: u64, x: &[u64]) -> bool {
        x.iter()
            .zip(&self.factors)
            .all(|(&c, &a)| arith::mul_mod(n, c, a) == 0)
    }

    pub(crate) fn element_order_with(
        &self,
        exp_factors: &[(u64, u32)],
        exponent: u64,
        coords: &[u64],
    ) -> u64 {
        let mut n = exponent;
        for &(p, k) in exp_factors {
            for _ in 0..k {
                let cand = n / p;
                if self.scalar_mul_is_zero(cand, coords) {
                    n = cand;
                } else {
                    break;
                }
            }
        }
        n
    }
}

impl fmt::Display for FinAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "Z1");
        }
        for (i, a) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, "x")?;
            }
            write!(f, "Z{a}")?;
        }
        Ok(())
    }
}

pub struct Elements {
    odo: Odometer,
    done: bool,
    first: bool,
}

impl Iterator for Elements {
    type Item = GroupElement;

    fn next(&mut self) -> Option<GroupElement> {
        if self.done {
            return None;
        }
        if self.first {
            self.first = false;
        } else if self.odo.advance().is_none() {
            self.done = true;
            return None;
        }
        Some(GroupElement {
            coords: self.odo.digits().to_vec(),
        })
    }
}

/// Isomorphism class of a finite abelian group, carried in both canonical
/// shapes: the divisibility chain d_1 | d_2 | ... | d_r, and per prime the
/// descending list of prime-power exponents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupStructure {
    invariant_factors: Vec<u64>,
    primary: BTreeMap<u64, Vec<u32>>,
}

impl GroupStructure {
    /// Recombine primary data into invariant factors: the t-th largest
    /// exponents across all primes multiply into the t-th largest factor.
    pub(crate) fn from_primary(primary: BTreeMap<u64, Vec<u32>>) -> Self {
        let slots = primary.values().map(|v| v.len()).max().unwrap_or(0);
        let mut invariant_factors = Vec::with_capacity(slots);
        for t in (0..slots).rev() {
            let mut d = 1u64;
            for (&p, exps) in &primary {
                if let Some(&e) = exps.get(t) {
                    d *= p.pow(e);
                }
            }
            invariant_factors.push(d);
        }
        GroupStructure {
            invariant_factors,
            primary,
        }
    }

    pub fn invariant_factors(&self) -> &[u64] {
        &self.invariant_factors
    }

    pub fn primary(&self) -> &BTreeMap<u64, Vec<u32>> {
        &self.primary
    }

    /// The class as a group, presented by its invariant factors ascending.
    pub fn to_group(&self) -> FinAbGroup {
        FinAbGroup {
            factors: self.invariant_factors.clone(),
        }
    }

    /// The p-part, presented as descending prime powers. Trivial if p is
    /// absent.
    pub fn primary_component(&self, p: u64) -> FinAbGroup {
        let factors = self
            .primary
            .get(&p)
            .map(|exps| exps.iter().map(|&e| p.pow(e)).collect())
            .unwrap_or_default();
        FinAbGroup { factors }
    }

    /// p^max exponent of the p-part, 1 if p is absent.
    pub fn primary_exponent(&self, p: u64) -> u64 {
        self.primary
            .get(&p)
            .map(|exps| p.pow(exps[0]))
            .unwrap_or(1)
    }

    /// Reconstruct the class from a multiset of element orders. For each
    /// prime, the count of elements killed by p^k pins down the exponent
    /// partition; the result is cross-checked by recomputing the census
    /// combinatorially, so an impossible input is always rejected.
    pub fn from_order_census(census: &BTreeMap<u64, u64>) -> Result<Self> {
        if census.get(&1) != Some(&1) {
            return Err(Error::InvalidCensus(
                "a group has exactly one element of order 1".into(),
            ));
        }
        if census.keys().any(|&d| d == 0) {
            return Err(Error::InvalidCensus("order 0 is impossible".into()));
        }
        let total: u128 = census.values().map(|&c| c as u128).sum();

        let mut primes: Vec<u64> = Vec::new();
        for &d in census.keys() {
            for (p, _) in arith::factorize(d) {
                if !primes.contains(&p) {
                    primes.push(p);
                }
            }
        }
        primes.sort_unstable();

        let mut primary: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
        for &p in &primes {
            // s[k] = #elements of order dividing p^k = p^(sum of min(k, a_i))
            let e_max = census
                .keys()
                .filter_map(|&d| {
                    let f = arith::factorize(d);
                    match f.as_slice() {
                        [(q, e)] if *q == p => Some(*e),
                        _ => None,
                    }
                })
                .max()
                .ok_or_else(|| {
                    Error::InvalidCensus(format!("no element of prime order {p}"))
                })?;
            let mut sigma = vec![0u32; e_max as usize + 1];
            for k in 1..=e_max {
                // identity plus everything of order p^e, e <= k
                let dividing: u128 = 1 + census
                    .iter()
                    .filter(|(&d, _)| {
                        let f = arith::factorize(d);
                        matches!(f.as_slice(), [(q, e)] if *q == p && *e <= k)
                    })
                    .map(|(_, &c)| c as u128)
                    .sum::<u128>();
                let mut s = dividing;
                let mut log = 0u32;
                while s > 1 {
                    if s % p as u128 != 0 {
                        return Err(Error::InvalidCensus(format!(
                            "{dividing} elements killed by {p}^{k}, not a power of {p}"
                        )));
                    }
                    s /= p as u128;
                    log += 1;
                }
                sigma[k as usize] = log;
            }
            // m_k = #exponents >= k must be positive and non-increasing
            let mut exps: Vec<u32> = Vec::new();
            let mut prev_m = u32::MAX;
            for k in 1..=e_max as usize {
                let m = sigma[k].checked_sub(sigma[k - 1]).ok_or_else(|| {
                    Error::InvalidCensus(format!("element counts at prime {p} decrease"))
                })?;
                if m == 0 || m > prev_m {
                    return Err(Error::InvalidCensus(format!(
                        "exponent multiplicities at prime {p} are not a partition"
                    )));
                }
                prev_m = m;
                exps.push(m);
            }
            // conjugate the partition: m_k counts of "exponent >= k"
            let mut part: Vec<u32> = Vec::new();
            for k in (1..=e_max as usize).rev() {
                let above = if k == e_max as usize { 0 } else { exps[k] };
                for _ in 0..exps[k - 1] - above {
                    part.push(k as u32);
                }
            }
            primary.insert(p, part);
        }

        let structure = GroupStructure::from_primary(primary);
        let rebuilt = structure.to_group();
        if rebuilt.order() != total {
            return Err(Error::InvalidCensus(format!(
                "census has {total} elements but the primary data gives {}",
                rebuilt.order()
            )));
        }
        let expected = combinatorial_census(rebuilt.factors());
        if &expected != census {
            return Err(Error::InvalidCensus(
                "census does not match any abelian group".into(),
            ));
        }
        Ok(structure)
    }
}

/// Census of Z_{d_1} + ... + Z_{d_r} without enumeration: elements of order
/// dividing d number prod gcd(d, d_i), and Moebius inversion over the
/// divisors of the exponent isolates each exact order.
pub(crate) fn combinatorial_census(factors: &[u64]) -> BTreeMap<u64, u64> {
    let exponent = factors.iter().fold(1, |e, &a| arith::lcm(e, a));
    let mut census = BTreeMap::new();
    for d in arith::divisors(exponent) {
        let mut count = 0i128;
        for e in arith::divisors(d) {
            let dividing: u128 = factors
                .iter()
                .map(|&a| arith::gcd(e, a) as u128)
                .product();
            count += arith::moebius(d / e) as i128 * dividing as i128;
        }
        if count > 0 {
            census.insert(d, count as u64);
        }
    }
    census
}

/// Group homomorphism pinned down by generator images. `images[i]` is where
/// the i-th generator of the domain goes; validity demands a_i * images[i] = 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Homomorphism {
    domain: FinAbGroup,
    codomain: FinAbGroup,
    images: Vec<GroupElement>,
}

impl Homomorphism {
    pub fn new(
        domain: FinAbGroup,
        codomain: FinAbGroup,
        images: Vec<GroupElement>,
    ) -> Result<Self> {
        if images.len() != domain.arity() {
            return Err(Error::ArityMismatch {
                expected: domain.arity(),
                got: images.len(),
            });
        }
        for (i, img) in images.iter().enumerate() {
            codomain.check_element(img)?;
            if !codomain.scalar_mul_is_zero(domain.factors()[i], img.coords()) {
                return Err(Error::OrderConstraint {
                    index: i,
                    detail: format!(
                        "{} * {img} is nonzero in {codomain}",
                        domain.factors()[i]
                    ),
                });
            }
        }
        Ok(Homomorphism {
            domain,
            codomain,
            images,
        })
    }

    pub fn identity(g: &FinAbGroup) -> Self {
        let images = (0..g.arity()).map(|i| g.generator(i)).collect();
        Homomorphism {
            domain: g.clone(),
            codomain: g.clone(),
            images,
        }
    }

    pub fn zero(domain: &FinAbGroup, codomain: &FinAbGroup) -> Self {
        Homomorphism {
            domain: domain.clone(),
            codomain: codomain.clone(),
            images: vec![codomain.zero(); domain.arity()],
        }
    }

    pub fn domain(&self) -> &FinAbGroup {
        &self.domain
    }

    pub fn codomain(&self) -> &FinAbGroup {
        &self.codomain
    }

    pub fn images(&self) -> &[GroupElement] {
        &self.images
    }

    pub fn eval(&self, x: &GroupElement) -> Result<GroupElement> {
        self.domain.check_element(x)?;
        let mut acc = vec![0u64; self.codomain.arity()];
        let mut term = vec![0u64; self.codomain.arity()];
        let mut out = vec![0u64; self.codomain.arity()];
        for (i, img) in self.images.iter().enumerate() {
            self.codomain
                .scalar_mul_into(x.coords()[i], img.coords(), &mut term);
            self.codomain.add_into(&acc, &term, &mut out);
            acc.copy_from_slice(&out);
        }
        Ok(GroupElement { coords: acc })
    }

    /// All domain elements that map to zero, in lexicographic order.
    pub fn kernel(&self, max_enum: u64) -> Result<Vec<GroupElement>> {
        let n = self.domain.order();
        if n > max_enum as u128 {
            return Err(Error::EnumerationLimit {
                needed: n,
                limit: max_enum,
            });
        }
        let mut kernel = Vec::new();
        let mut acc = vec![0u64; self.codomain.arity()];
        let mut term = vec![0u64; self.codomain.arity()];
        let mut out = vec![0u64; self.codomain.arity()];
        let mut odo = Odometer::new(self.domain.factors().to_vec());
        loop {
            acc.iter_mut().for_each(|c| *c = 0);
            for (i, img) in self.images.iter().enumerate() {
                self.codomain
                    .scalar_mul_into(odo.digits()[i], img.coords(), &mut term);
                self.codomain.add_into(&acc, &term, &mut out);
                acc.copy_from_slice(&out);
            }
            if acc.iter().all(|&c| c == 0) {
                kernel.push(GroupElement {
                    coords: odo.digits().to_vec(),
                });
            }
            if odo.advance().is_none() {
                break;
            }
        }
        Ok(kernel)
    }
}

/// How many homomorphisms exist: prod over (i, k) of gcd(a_i, c_k). This is
/// the closed form the enumeration-based count is tested against.
pub fn hom_count(domain: &FinAbGroup, codomain: &FinAbGroup) -> u128 {
    let mut count = 1u128;
    for &a in domain.factors() {
        for &c in codomain.factors() {
            count = count.saturating_mul(arith::gcd(a, c) as u128);
        }
    }
    count
}

fn hom_radices(domain: &FinAbGroup, codomain: &FinAbGroup) -> Vec<u64> {
    let mut radices = Vec::with_capacity(domain.arity() * codomain.arity());
    for &a in domain.factors() {
        for &c in codomain.factors() {
            radices.push(arith::gcd(a, c));
        }
    }
    radices
}

fn hom_from_digits(domain: &FinAbGroup, codomain: &FinAbGroup, digits: &[u64]) -> Homomorphism {
    let l = codomain.arity();
    let images = (0..domain.arity())
        .map(|i| {
            let coords = (0..l)
                .map(|k| {
                    let c = codomain.factors()[k];
                    let g = arith::gcd(domain.factors()[i], c);
                    digits[i * l + k] * (c / g)
                })
                .collect();
            GroupElement { coords }
        })
        .collect();
    Homomorphism {
        domain: domain.clone(),
        codomain: codomain.clone(),
        images,
    }
}

/// Every homomorphism domain -> codomain, lexicographic in generator images.
/// Refuses caps that the state count exceeds; nothing is silently dropped.
pub fn enumerate_homs(
    domain: &FinAbGroup,
    codomain: &FinAbGroup,
    max_enum: u64,
) -> Result<Homs> {
    let radices = hom_radices(domain, codomain);
    let needed = Odometer::state_count(&radices);
    if needed > max_enum as u128 {
        return Err(Error::EnumerationLimit {
            needed,
            limit: max_enum,
        });
    }
    Ok(Homs {
        domain: domain.clone(),
        codomain: codomain.clone(),
        odo: Odometer::new(radices),
        first: true,
        done: false,
    })
}

/// Count homomorphisms by stepping through every one of them. Exists so the
/// closed form has an independent witness; do not shortcut it.
pub fn count_homs_by_enumeration(
    domain: &FinAbGroup,
    codomain: &FinAbGroup,
    max_enum: u64,
) -> Result<u64> {
    let radices = hom_radices(domain, codomain);
    let needed = Odometer::state_count(&radices);
    if needed > max_enum as u128 {
        return Err(Error::EnumerationLimit {
            needed,
            limit: max_enum,
        });
    }
    let mut odo = Odometer::new(radices);
    let mut count = 1u64;
    while odo.advance().is_some() {
        count += 1;
    }
    Ok(count)
}

pub struct Homs {
    domain: FinAbGroup,
    codomain: FinAbGroup,
    odo: Odometer,
    first: bool,
    done: bool,
}

impl Iterator for Homs {
    type Item = Homomorphism;

    fn next(&mut self) -> Option<Homomorphism> {
        if self.done {
            return None;
        }
        if self.first {
            self.first = false;
        } else if self.odo.advance().is_none() {
            self.done = true;
            return None;
        }
        Some(hom_from_digits(&self.domain, &self.codomain, self.odo.digits()))
    }
}

//! Characters with values in Z_N and the duality pairing they induce.
//!
//! For A = +Z_{d_i} and any N that exp(A) divides, the characters A -> Z_N
//! are exactly x |-> sum (N/d_i) c_i x_i with c ranging over A itself, so the
//! dual is isomorphic to A and evaluation is a non-degenerate bilinear map
//! A x A -> Z_N. When N also divides p - 1 for a prime p, composing with
//! e |-> g^(e (p-1)/N) for a primitive root g moves the whole picture into
//! the multiplicative group of the field with p elements.

use crate::arith;
use crate::bilinear::BilinearMap;
use crate::error::{Error, Result};
use crate::groups::{Elements, FinAbGroup, GroupElement};

/// A cyclic value group Z_N checked to absorb a given domain's exponent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicTarget {
    modulus: u64,
}

impl CyclicTarget {
    pub fn new(domain: &FinAbGroup, modulus: u64) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::ZeroFactor);
        }
        let exp = domain.exponent();
        if modulus % exp != 0 {
            return Err(Error::Divisibility {
                d: exp,
                n: modulus,
            });
        }
        Ok(CyclicTarget { modulus })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn group(&self) -> FinAbGroup {
        FinAbGroup::cyclic(self.modulus).expect("modulus is nonzero")
    }
}

/// A homomorphism A -> Z_N, stored by its coefficient vector: the character
/// with coefficients c sends x to sum (N/d_i) c_i x_i mod N.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Character {
    domain: FinAbGroup,
    modulus: u64,
    coeffs: GroupElement,
}

impl Character {
    pub fn domain(&self) -> &FinAbGroup {
        &self.domain
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn coefficients(&self) -> &[u64] {
        self.coeffs.coords()
    }

    pub fn eval(&self, x: &GroupElement) -> Result<u64> {
        self.domain.check_element(x)?;
        let n = self.modulus;
        let mut acc = 0u64;
        for (i, &d) in self.domain.factors().iter().enumerate() {
            let term = arith::mul_mod(
                n / d,
                arith::mul_mod(self.coeffs.coords()[i], x.coords()[i], n),
                n,
            );
            acc = arith::add_mod(acc, term, n);
        }
        Ok(acc)
    }
}

/// The characters of A into Z_N, indexed by A itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualGroup {
    domain: FinAbGroup,
    target: CyclicTarget,
}

pub fn dual_group(a: &FinAbGroup, modulus: u64) -> Result<DualGroup> {
    let target = CyclicTarget::new(a, modulus)?;
    Ok(DualGroup {
        domain: a.clone(),
        target,
    })
}

impl DualGroup {
    /// The dual is isomorphic to the domain; same presentation.
    pub fn presentation(&self) -> &FinAbGroup {
        &self.domain
    }

    pub fn target(&self) -> &CyclicTarget {
        &self.target
    }

    pub fn character(&self, coeffs: &[u64]) -> Result<Character> {
        Ok(Character {
            domain: self.domain.clone(),
            modulus: self.target.modulus,
            coeffs: self.domain.element(coeffs)?,
        })
    }

    pub fn character_at(&self, idx: u128) -> Result<Character> {
        Ok(Character {
            domain: self.domain.clone(),
            modulus: self.target.modulus,
            coeffs: self.domain.element_at(idx)?,
        })
    }

    pub fn characters(&self) -> Characters {
        Characters {
            domain: self.domain.clone(),
            modulus: self.target.modulus,
            elems: self.domain.elements(),
        }
    }
}

pub struct Characters {
    domain: FinAbGroup,
    modulus: u64,
    elems: Elements,
}

impl Iterator for Characters {
    type Item = Character;

    fn next(&mut self) -> Option<Character> {
        self.elems.next().map(|coeffs| Character {
            domain: self.domain.clone(),
            modulus: self.modulus,
            coeffs,
        })
    }
}

/// Character evaluation as a bilinear map A x A -> Z_N: the diagonal grid
/// with (i, i) holding N/d_i. Always symmetric and non-degenerate.
pub fn duality_pairing(a: &FinAbGroup, modulus: u64) -> Result<BilinearMap> {
    let target = CyclicTarget::new(a, modulus)?;
    let zn = target.group();
    let r = a.arity();
    let mut grid = vec![vec![zn.zero(); r]; r];
    for (i, &d) in a.factors().iter().enumerate() {
        grid[i][i] = zn.element(&[modulus / d])?;
    }
    BilinearMap::new(a.clone(), a.clone(), zn, grid)
}

/// Smallest generator of the multiplicative group mod p. For p = 2 that
/// group is trivial and 1 is returned.
pub fn find_primitive_root(p: u64) -> Result<u64> {
    if !arith::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p == 2 {
        return Ok(1);
    }
    let cofactors: Vec<u64> = arith::factorize(p - 1)
        .iter()
        .map(|&(q, _)| (p - 1) / q)
        .collect();
    for g in 2..p {
        if cofactors.iter().all(|&c| arith::mod_pow(g, c, p) != 1) {
            return Ok(g);
        }
    }
    unreachable!("every prime has a primitive root")
}

/// Z_N embedded in the multiplicative group mod p.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeFieldRealization {
    p: u64,
    generator: u64,
}

impl PrimeFieldRealization {
    pub fn new(p: u64) -> Result<Self> {
        Ok(PrimeFieldRealization {
            p,
            generator: find_primitive_root(p)?,
        })
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn generator(&self) -> u64 {
        self.generator
    }

    /// Send e in Z_N to g^(e (p-1)/N) mod p. N has to divide p - 1 for the
    /// image to be the group of N-th roots of unity.
    pub fn embed(&self, value: u64, modulus: u64) -> Result<u64> {
        if modulus == 0 || (self.p - 1) % modulus != 0 {
            return Err(Error::Divisibility {
                d: modulus,
                n: self.p - 1,
            });
        }
        Ok(arith::mod_pow(
            self.generator,
            value % modulus * ((self.p - 1) / modulus),
            self.p,
        ))
    }
}

/// A bilinear map with cyclic target written multiplicatively in a prime
/// field: values[x * |B| + y] = g^(f(x, y) (p-1)/N) mod p, with x and y
/// running over the element indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeFieldTable {
    realization: PrimeFieldRealization,
    left: FinAbGroup,
    right: FinAbGroup,
    values: Vec<u64>,
}

impl PrimeFieldTable {
    pub fn realization(&self) -> &PrimeFieldRealization {
        &self.realization
    }

    pub fn left(&self) -> &FinAbGroup {
        &self.left
    }

    pub fn right(&self) -> &FinAbGroup {
        &self.right
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn value_at(&self, x: u128, y: u128) -> Result<u64> {
        if x >= self.left.order() || y >= self.right.order() {
            return Err(Error::Invalid(format!(
                "index ({x}, {y}) outside {} x {}",
                self.left.order(),
                self.right.order()
            )));
        }
        Ok(self.values[(x * self.right.order() + y) as usize])
    }
}

/// Tabulate a cyclic-valued bilinear map inside the field with p elements.
/// The map's target Z_N must satisfy N | p - 1, and the full |A| * |B| table
/// is materialized, so that product is capped by `max_enum`.
pub fn realize_in_prime_field(
    f: &BilinearMap,
    p: u64,
    max_enum: u64,
) -> Result<PrimeFieldTable> {
    if f.target().arity() != 1 {
        return Err(Error::Invalid(format!(
            "target {} is not cyclic; realization needs a single value coordinate",
            f.target()
        )));
    }
    let n = f.target().factors()[0];
    let realization = PrimeFieldRealization::new(p)?;
    if (p - 1) % n != 0 {
        return Err(Error::Divisibility { d: n, n: p - 1 });
    }
    let table_size = f.left().order().saturating_mul(f.right().order());
    if table_size > max_enum as u128 {
        return Err(Error::EnumerationLimit {
            needed: table_size,
            limit: max_enum,
        });
    }
    let mut values = Vec::with_capacity(table_size as usize);
    for x in f.left().elements() {
        for y in f.right().elements() {
            let v = f.eval(&x, &y)?.coords()[0];
            values.push(realization.embed(v, n)?);
        }
    }
    Ok(PrimeFieldTable {
        realization,
        left: f.left().clone(),
        right: f.right().clone(),
        values,
    })
}

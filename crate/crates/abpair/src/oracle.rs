//! Brute-force cross-checks. Every suite here decides its claims by raw
//! enumeration and element scans, never by the closed-form formulas or
//! shortcut rules the rest of the crate offers, so that a bug in those has
//! to disagree with a bug-free count to slip through.

use std::collections::{BTreeMap, HashSet};
use std::time::{Duration, Instant};

use crate::arith;
use crate::bilinear::{
    bilinear_count, count_bilinear_by_enumeration, enumerate_bilinear, visit_bilinear, BilinearMap,
};
use crate::error::{Error, Result};
use crate::groups::{
    count_homs_by_enumeration, enumerate_homs, FinAbGroup, GroupElement, GroupStructure,
    Homomorphism,
};
use crate::tensor::{canonical_map, tensor_product};
use crate::DEFAULT_MAX_ENUM;

/// Outcome of one verification suite: what was claimed, how many instances
/// were tried, and reproduction data for anything that disagreed.
#[derive(Debug, Clone)]
pub struct VerificationReport {
    claim_id: String,
    instances_checked: u64,
    failures: Vec<String>,
    elapsed: Duration,
}

impl VerificationReport {
    fn finish(claim_id: &str, instances_checked: u64, failures: Vec<String>, start: Instant) -> Self {
        VerificationReport {
            claim_id: claim_id.to_string(),
            instances_checked,
            failures,
            elapsed: start.elapsed(),
        }
    }

    pub fn claim_id(&self) -> &str {
        &self.claim_id
    }

    pub fn instances_checked(&self) -> u64 {
        self.instances_checked
    }

    pub fn failures(&self) -> &[String] {
        &self.failures
    }

    pub fn elapsed(&self) -> Duration {
        self.elapsed
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Every presentation (ordered factor list, factors >= 2) of order up to
/// `max_order`, the trivial group included, in depth-first order with
/// factors tried ascending.
pub fn presentations_up_to(max_order: u64, factors: Option<&[u64]>) -> Vec<FinAbGroup> {
    let allowed: Vec<u64> = match factors {
        Some(f) => {
            let mut v: Vec<u64> = f
                .iter()
                .copied()
                .filter(|&x| x >= 2 && x <= max_order)
                .collect();
            v.sort_unstable();
            v.dedup();
            v
        }
        None => (2..=max_order.max(1)).collect(),
    };
    fn rec(allowed: &[u64], max: u64, product: u64, stack: &mut Vec<u64>, out: &mut Vec<FinAbGroup>) {
        out.push(FinAbGroup::new(stack.clone()).expect("factors are nonzero"));
        for &f in allowed {
            if product.saturating_mul(f) <= max {
                stack.push(f);
                rec(allowed, max, product * f, stack, out);
                stack.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(&allowed, max_order.max(1), 1, &mut Vec::new(), &mut out);
    out
}

fn partitions(e: u32) -> Vec<Vec<u32>> {
    fn rec(remaining: u32, max_part: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if remaining == 0 {
            out.push(cur.clone());
            return;
        }
        for k in (1..=remaining.min(max_part)).rev() {
            cur.push(k);
            rec(remaining - k, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(e, e.max(1), &mut Vec::new(), &mut out);
    out
}

/// One group per isomorphism class of order up to `max_order`, in
/// invariant-factor form, ordered by group order. `primes`, when given,
/// keeps only classes whose order uses those primes alone.
pub fn abelian_classes(max_order: u64, primes: Option<&[u64]>) -> Vec<FinAbGroup> {
    let mut out = Vec::new();
    'orders: for n in 1..=max_order.max(1) {
        let fact = arith::factorize(n);
        if let Some(ps) = primes {
            for &(p, _) in &fact {
                if !ps.contains(&p) {
                    continue 'orders;
                }
            }
        }
        let per_prime: Vec<Vec<Vec<u32>>> = fact.iter().map(|&(_, e)| partitions(e)).collect();
        fn build(
            fact: &[(u64, u32)],
            per_prime: &[Vec<Vec<u32>>],
            idx: usize,
            current: &mut BTreeMap<u64, Vec<u32>>,
            out: &mut Vec<FinAbGroup>,
        ) {
            if idx == fact.len() {
                out.push(GroupStructure::from_primary(current.clone()).to_group());
                return;
            }
            for part in &per_prime[idx] {
                current.insert(fact[idx].0, part.clone());
                build(fact, per_prime, idx + 1, current, out);
            }
            current.remove(&fact[idx].0);
        }
        build(&fact, &per_prime, 0, &mut BTreeMap::new(), &mut out);
    }
    out
}

// non-degeneracy strictly by element scans, bypassing is_pairing's
// structural shortcut for canonical grids
fn nondeg_by_scan(f: &BilinearMap, max_enum: u64) -> Result<bool> {
    Ok(f.is_left_nondegenerate(max_enum)? && f.is_right_nondegenerate(max_enum)?)
}

/// Bounds for [`verify_bil_hom_count`].
#[derive(Debug, Clone)]
pub struct CountBounds {
    /// Sides range over all presentations of order up to this.
    pub side_max: u64,
    /// Restrict side presentations to these factors (None: every factor).
    pub factor_set: Option<Vec<u64>>,
    /// Cyclic targets Z_n for n in target_min..=target_max.
    pub target_min: u64,
    pub target_max: u64,
    pub max_enum: u64,
}

impl Default for CountBounds {
    fn default() -> Self {
        CountBounds {
            side_max: 12,
            factor_set: None,
            target_min: 2,
            target_max: 6,
            max_enum: DEFAULT_MAX_ENUM,
        }
    }
}

/// Counting identity |Bil(A x B, C)| = |Hom(A tensor B, C)| = prod gcd:
/// both sides counted by stepping through every map, then compared to the
/// formula.
pub fn verify_bil_hom_count(bounds: &CountBounds) -> Result<VerificationReport> {
    let start = Instant::now();
    let sides = presentations_up_to(bounds.side_max, bounds.factor_set.as_deref());
    let mut checked = 0u64;
    let mut failures = Vec::new();
    for a in &sides {
        for b in &sides {
            let t = tensor_product(a, b);
            for n in bounds.target_min..=bounds.target_max {
                let c = FinAbGroup::cyclic(n)?;
                let formula = bilinear_count(a, b, &c);
                let bil = count_bilinear_by_enumeration(a, b, &c, bounds.max_enum)? as u128;
                let hom = count_homs_by_enumeration(t.product(), &c, bounds.max_enum)? as u128;
                checked += 1;
                if bil != formula || hom != formula {
                    failures.push(format!(
                        "A={a} B={b} C={c}: {bil} bilinear maps, {hom} homs, formula {formula}"
                    ));
                }
            }
        }
    }
    Ok(VerificationReport::finish("counts", checked, failures, start))
}

/// Bounds for [`verify_universal_property`].
#[derive(Debug, Clone)]
pub struct UniversalBounds {
    /// Sides range over isomorphism classes of order up to this.
    pub side_max: u64,
    /// Targets range over isomorphism classes of order up to this.
    pub target_max: u64,
    pub max_enum: u64,
}

impl Default for UniversalBounds {
    fn default() -> Self {
        UniversalBounds {
            side_max: 12,
            target_max: 6,
            max_enum: DEFAULT_MAX_ENUM,
        }
    }
}

/// Factorization through the canonical map is a bijection: composing with
/// the canonical map sends distinct homomorphisms out of the tensor product
/// to distinct bilinear maps, the counts match, and every bilinear map's
/// generator values assemble into a valid homomorphism.
pub fn verify_universal_property(bounds: &UniversalBounds) -> Result<VerificationReport> {
    let start = Instant::now();
    let sides = abelian_classes(bounds.side_max, None);
    let targets = abelian_classes(bounds.target_max, None);
    let mut checked = 0u64;
    let mut failures = Vec::new();
    for a in &sides {
        for b in &sides {
            let t = tensor_product(a, b);
            for c in &targets {
                checked += 1;
                let mut seen: HashSet<Vec<u64>> = HashSet::new();
                let mut homs = 0u64;
                for h in enumerate_homs(t.product(), c, bounds.max_enum)? {
                    let composed = t.canonical().compose_with_hom(&h)?;
                    let key: Vec<u64> = composed
                        .grid()
                        .iter()
                        .flatten()
                        .flat_map(|cell| cell.coords().iter().copied())
                        .collect();
                    if !seen.insert(key) {
                        failures.push(format!(
                            "A={a} B={b} C={c}: two homs compose to the same bilinear map"
                        ));
                    }
                    homs += 1;
                }
                let mut bad_factorization = 0u64;
                let bils = visit_bilinear(a, b, c, bounds.max_enum, |f| {
                    let images: Vec<GroupElement> = t
                        .cells()
                        .iter()
                        .map(|&(i, j)| f.cell(i, j).clone())
                        .collect();
                    if Homomorphism::new(t.product().clone(), c.clone(), images).is_err() {
                        bad_factorization += 1;
                    }
                })?;
                if bad_factorization > 0 {
                    failures.push(format!(
                        "A={a} B={b} C={c}: {bad_factorization} maps do not factor through {}",
                        t.product()
                    ));
                }
                if homs != bils {
                    failures.push(format!(
                        "A={a} B={b} C={c}: {homs} homs vs {bils} bilinear maps"
                    ));
                }
            }
        }
    }
    Ok(VerificationReport::finish("universal", checked, failures, start))
}

/// Bounds for [`verify_nondeg_theorems`].
#[derive(Debug, Clone)]
pub struct NondegBounds {
    /// Cyclic claim: all pairs a, b up to this.
    pub cyclic_max: u64,
    /// Self-pairing claim: all presentations of order up to this.
    pub square_max: u64,
    /// Primary-reduction claim: classes mixing 2 and 3, order up to this.
    pub mixed_max: u64,
    /// No-pairing claim: prime-power classes (p = 2, 3) up to this order...
    pub unequal_side_max: u64,
    /// ...paired into every target class up to this order.
    pub unequal_target_max: u64,
    pub max_enum: u64,
}

impl Default for NondegBounds {
    fn default() -> Self {
        NondegBounds {
            cyclic_max: 20,
            square_max: 64,
            mixed_max: 216,
            unequal_side_max: 9,
            unequal_target_max: 8,
            max_enum: DEFAULT_MAX_ENUM,
        }
    }
}

/// The non-degeneracy theorems, one report per claim, every verdict from
/// element scans:
/// 1. cyclic-iff-equal: canonical Z_a x Z_b is non-degenerate iff a = b;
/// 2. self-pairing: canonical A x A is always non-degenerate;
/// 3. primary-reduction: canonical A x B is non-degenerate iff all its
///    p-component canonical maps are;
/// 4. unequal-exponent: prime-power sides with different exponents admit no
///    pairing into any target, however the grid is filled.
pub fn verify_nondeg_theorems(bounds: &NondegBounds) -> Result<Vec<VerificationReport>> {
    let mut reports = Vec::new();

    let start = Instant::now();
    let mut checked = 0u64;
    let mut failures = Vec::new();
    for a in 1..=bounds.cyclic_max {
        for b in 1..=bounds.cyclic_max {
            let f = canonical_map(
                &FinAbGroup::cyclic(a)?,
                &FinAbGroup::cyclic(b)?,
            );
            checked += 1;
            if nondeg_by_scan(&f, bounds.max_enum)? != (a == b) {
                failures.push(format!("Z{a} x Z{b}: scan disagrees with the a = b rule"));
            }
        }
    }
    reports.push(VerificationReport::finish("cyclic-iff-equal", checked, failures, start));

    let start = Instant::now();
    let mut checked = 0u64;
    let mut failures = Vec::new();
    for a in presentations_up_to(bounds.square_max, None) {
        checked += 1;
        if !nondeg_by_scan(&canonical_map(&a, &a), bounds.max_enum)? {
            failures.push(format!("canonical {a} x {a} is degenerate"));
        }
    }
    reports.push(VerificationReport::finish("self-pairing", checked, failures, start));

    let start = Instant::now();
    let mut checked = 0u64;
    let mut failures = Vec::new();
    let mixed: Vec<FinAbGroup> = abelian_classes(bounds.mixed_max, Some(&[2, 3]))
        .into_iter()
        .filter(|g| g.order() % 6 == 0)
        .collect();
    for a in &mixed {
        let sa = a.normalize();
        for b in &mixed {
            let sb = b.normalize();
            checked += 1;
            let full = nondeg_by_scan(&canonical_map(a, b), bounds.max_enum)?;
            let mut component_wise = true;
            for p in [2u64, 3] {
                let fp = canonical_map(&sa.primary_component(p), &sb.primary_component(p));
                component_wise &= nondeg_by_scan(&fp, bounds.max_enum)?;
            }
            if full != component_wise {
                failures.push(format!(
                    "{a} x {b}: full map {} but components {}",
                    if full { "non-degenerate" } else { "degenerate" },
                    if component_wise { "non-degenerate" } else { "degenerate" },
                ));
            }
        }
    }
    reports.push(VerificationReport::finish("primary-reduction", checked, failures, start));

    let start = Instant::now();
    let mut checked = 0u64;
    let mut failures = Vec::new();
    let sides = abelian_classes(bounds.unequal_side_max, Some(&[2, 3]));
    let targets = abelian_classes(bounds.unequal_target_max, None);
    for a in &sides {
        for b in &sides {
            if a.exponent() == b.exponent() {
                continue;
            }
            for c in &targets {
                checked += 1;
                let mut pairings = 0u64;
                let mut scan_error = None;
                visit_bilinear(a, b, c, bounds.max_enum, |f| {
                    match nondeg_by_scan(f, bounds.max_enum) {
                        Ok(true) => pairings += 1,
                        Ok(false) => {}
                        Err(e) => scan_error = Some(e),
                    }
                })?;
                if let Some(e) = scan_error {
                    return Err(e);
                }
                if pairings > 0 {
                    failures.push(format!(
                        "{a} x {b} -> {c}: {pairings} pairings despite exponents {} vs {}",
                        a.exponent(),
                        b.exponent()
                    ));
                }
            }
        }
    }
    reports.push(VerificationReport::finish("unequal-exponent", checked, failures, start));

    Ok(reports)
}

/// Pairings Z_a x Z_a -> Z_a for every a up to `a_max` (at most 30): scans
/// all a grids, then checks the survivors are exactly the grids x k y with
/// gcd(k, a) = 1, phi(a) of them, closed under multiplying and inverting
/// the scale factor.
pub fn verify_pairing_counts(a_max: u64) -> Result<VerificationReport> {
    if a_max > 30 {
        return Err(Error::Invalid(format!(
            "pairing census is a desk check, a_max {a_max} exceeds 30"
        )));
    }
    let start = Instant::now();
    let mut checked = 0u64;
    let mut failures = Vec::new();
    for a in 1..=a_max {
        let z = FinAbGroup::cyclic(a)?;
        let mut ks: Vec<u64> = Vec::new();
        for f in enumerate_bilinear(&z, &z, &z, DEFAULT_MAX_ENUM)? {
            if nondeg_by_scan(&f, DEFAULT_MAX_ENUM)? {
                ks.push(if z.arity() == 0 { 0 } else { f.cell(0, 0).coords()[0] });
            }
        }
        checked += 1;
        let expected: Vec<u64> = (0..a).filter(|&k| arith::gcd(k, a) == 1).collect();
        if ks != expected {
            failures.push(format!("a={a}: pairing scales {ks:?}, units {expected:?}"));
            continue;
        }
        if ks.len() as u64 != arith::totient(a) {
            failures.push(format!("a={a}: {} pairings, phi(a) = {}", ks.len(), arith::totient(a)));
        }
        for &k1 in &ks {
            for &k2 in &ks {
                if ks.binary_search(&arith::mul_mod(k1, k2, a)).is_err() {
                    failures.push(format!("a={a}: {k1} * {k2} leaves the pairing set"));
                }
            }
            if !ks
                .iter()
                .any(|&k2| arith::mul_mod(k1, k2, a) == 1 % a)
            {
                failures.push(format!("a={a}: {k1} has no inverse in the pairing set"));
            }
        }
    }
    Ok(VerificationReport::finish("pairing-census", checked, failures, start))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presentation_sweep_is_depth_first() {
        let got: Vec<Vec<u64>> = presentations_up_to(4, None)
            .iter()
            .map(|g| g.factors().to_vec())
            .collect();
        assert_eq!(got, vec![vec![], vec![2], vec![2, 2], vec![3], vec![4]]);
        let two_only: Vec<Vec<u64>> = presentations_up_to(8, Some(&[2]))
            .iter()
            .map(|g| g.factors().to_vec())
            .collect();
        assert_eq!(two_only, vec![vec![], vec![2], vec![2, 2], vec![2, 2, 2]]);
    }

    #[test]
    fn class_lists_are_complete_and_reduced() {
        let classes = abelian_classes(8, None);
        assert_eq!(classes.len(), 11);
        for (i, g) in classes.iter().enumerate() {
            for h in &classes[i + 1..] {
                assert!(!g.is_isomorphic(h), "{g} duplicates {h}");
            }
        }
        let threes: Vec<Vec<u64>> = abelian_classes(9, Some(&[3]))
            .iter()
            .map(|g| g.factors().to_vec())
            .collect();
        assert_eq!(threes, vec![vec![], vec![3], vec![9], vec![3, 3]]);
    }

    #[test]
    fn count_suite_passes_at_desk_scale() {
        let report = verify_bil_hom_count(&CountBounds {
            side_max: 6,
            factor_set: None,
            target_min: 2,
            target_max: 4,
            max_enum: DEFAULT_MAX_ENUM,
        })
        .unwrap();
        assert!(report.passed(), "{:?}", report.failures());
        // presentations of order <= 6: [], [2], [2,2], [2,3], [3], [3,2],
        // [4], [5], [6] -- squared, times three targets
        assert_eq!(report.instances_checked(), 9 * 9 * 3);
        assert_eq!(report.claim_id(), "counts");
    }

    #[test]
    fn universal_suite_passes_at_desk_scale() {
        let report = verify_universal_property(&UniversalBounds {
            side_max: 4,
            target_max: 4,
            max_enum: DEFAULT_MAX_ENUM,
        })
        .unwrap();
        assert!(report.passed(), "{:?}", report.failures());
        assert_eq!(report.instances_checked(), 5 * 5 * 5);
    }

    #[test]
    fn nondeg_suites_pass_at_desk_scale() {
        let reports = verify_nondeg_theorems(&NondegBounds {
            cyclic_max: 6,
            square_max: 16,
            mixed_max: 36,
            unequal_side_max: 4,
            unequal_target_max: 4,
            max_enum: DEFAULT_MAX_ENUM,
        })
        .unwrap();
        let ids: Vec<&str> = reports.iter().map(|r| r.claim_id()).collect();
        assert_eq!(
            ids,
            ["cyclic-iff-equal", "self-pairing", "primary-reduction", "unequal-exponent"]
        );
        for r in &reports {
            assert!(r.passed(), "{}: {:?}", r.claim_id(), r.failures());
            assert!(r.instances_checked() > 0, "{} checked nothing", r.claim_id());
        }
        assert_eq!(reports[0].instances_checked(), 36);
    }

    #[test]
    fn pairing_census_passes_and_enforces_its_cap() {
        let report = verify_pairing_counts(12).unwrap();
        assert!(report.passed(), "{:?}", report.failures());
        assert_eq!(report.instances_checked(), 12);
        assert!(verify_pairing_counts(31).is_err());
    }
}

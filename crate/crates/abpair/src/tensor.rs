//! Tensor products of finite abelian groups.
//!
//! For presentations A = +Z_{a_i} and B = +Z_{b_j} the tensor product is
//! +_{i,j} Z_{gcd(a_i,b_j)} with the trivial cells dropped, and the canonical
//! bilinear map sends (x, y) to the vector of x_i*y_j mod gcd(a_i,b_j). The
//! same group can also be assembled prime by prime from the primary
//! decompositions; the two routes are kept separate so they can be played
//! against each other in tests.

use crate::arith;
use crate::bilinear::BilinearMap;
use crate::groups::{FinAbGroup, GroupElement, Homomorphism};

pub fn tensor_cyclic(a: u64, b: u64) -> u64 {
    arith::gcd(a, b)
}

/// Tensor product of two presentations: the product group, which grid cells
/// survived, and the canonical bilinear map onto it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorResult {
    left: FinAbGroup,
    right: FinAbGroup,
    product: FinAbGroup,
    cells: Vec<(usize, usize)>,
    canonical: BilinearMap,
}

impl TensorResult {
    pub fn left(&self) -> &FinAbGroup {
        &self.left
    }

    pub fn right(&self) -> &FinAbGroup {
        &self.right
    }

    pub fn product(&self) -> &FinAbGroup {
        &self.product
    }

    /// Retained cells in row-major order; `cells()[p]` is the (i, j) that
    /// coordinate p of the product came from.
    pub fn cells(&self) -> &[(usize, usize)] {
        &self.cells
    }

    /// Coordinate of cell (i, j) in the product, if it survived.
    pub fn index_of(&self, i: usize, j: usize) -> Option<usize> {
        self.cells.binary_search(&(i, j)).ok()
    }

    pub fn canonical(&self) -> &BilinearMap {
        &self.canonical
    }
}

pub fn tensor_product(a: &FinAbGroup, b: &FinAbGroup) -> TensorResult {
    let mut cells = Vec::new();
    let mut factors = Vec::new();
    for (i, &ai) in a.factors().iter().enumerate() {
        for (j, &bj) in b.factors().iter().enumerate() {
            let g = arith::gcd(ai, bj);
            if g > 1 {
                cells.push((i, j));
                factors.push(g);
            }
        }
    }
    let product = FinAbGroup::new(factors).expect("gcds are nonzero");
    let mut grid = vec![vec![product.zero(); b.arity()]; a.arity()];
    for (pos, &(i, j)) in cells.iter().enumerate() {
        grid[i][j] = product.generator(pos);
    }
    let canonical = BilinearMap::new(a.clone(), b.clone(), product.clone(), grid)
        .expect("canonical grid satisfies the order constraints");
    TensorResult {
        left: a.clone(),
        right: b.clone(),
        product,
        cells,
        canonical,
    }
}

/// The canonical bilinear map A x B -> A tensor B.
pub fn canonical_map(a: &FinAbGroup, b: &FinAbGroup) -> BilinearMap {
    tensor_product(a, b).canonical
}

/// The tensor product assembled from primary decompositions: for each shared
/// prime p, exponents i of A(p) against exponents j of B(p) contribute
/// Z_{p^min(i,j)}. Primes ascending, exponents in each group's descending
/// order, so the output is deterministic.
pub fn primary_tensor_formula(a: &FinAbGroup, b: &FinAbGroup) -> FinAbGroup {
    let sa = a.normalize();
    let sb = b.normalize();
    let mut factors = Vec::new();
    for (p, exps_a) in sa.primary() {
        if let Some(exps_b) = sb.primary().get(p) {
            for &i in exps_a {
                for &j in exps_b {
                    factors.push(p.pow(i.min(j)));
                }
            }
        }
    }
    FinAbGroup::new(factors).expect("prime powers are nonzero")
}

/// Functoriality: homomorphisms f and g induce f tensor g between the tensor
/// products, sending the (i, j) generator to f(e_i) tensor g(e_j).
pub fn tensor_of_homs(f: &Homomorphism, g: &Homomorphism) -> Homomorphism {
    let dom = tensor_product(f.domain(), g.domain());
    let cod = tensor_product(f.codomain(), g.codomain());
    let images: Vec<GroupElement> = dom
        .cells()
        .iter()
        .map(|&(i, j)| {
            let fi = f
                .eval(&f.domain().generator(i))
                .expect("generator is a domain element");
            let gj = g
                .eval(&g.domain().generator(j))
                .expect("generator is a domain element");
            cod.canonical
                .eval(&fi, &gj)
                .expect("images live in the codomain pair")
        })
        .collect();
    Homomorphism::new(dom.product, cod.product.clone(), images)
        .expect("tensor generator orders divide the cell gcds")
}

/// The bilinear map A1 x B1 -> A2 tensor B2 obtained by mapping through
/// f: A1 -> A2 and g: B1 -> B2 and then pairing canonically.
pub fn induced_bilinear_from_homs(f: &Homomorphism, g: &Homomorphism) -> BilinearMap {
    let cod = tensor_product(f.codomain(), g.codomain());
    let grid: Vec<Vec<GroupElement>> = (0..f.domain().arity())
        .map(|i| {
            let fi = f
                .eval(&f.domain().generator(i))
                .expect("generator is a domain element");
            (0..g.domain().arity())
                .map(|j| {
                    let gj = g
                        .eval(&g.domain().generator(j))
                        .expect("generator is a domain element");
                    cod.canonical
                        .eval(&fi, &gj)
                        .expect("images live in the codomain pair")
                })
                .collect()
        })
        .collect();
    BilinearMap::new(
        f.domain().clone(),
        g.domain().clone(),
        cod.product,
        grid,
    )
    .expect("cell orders divide the domain gcds")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::DEFAULT_MAX_ENUM;

    fn g(factors: &[u64]) -> FinAbGroup {
        FinAbGroup::new(factors.to_vec()).unwrap()
    }

    #[test]
    fn cyclic_rule_is_gcd() {
        assert_eq!(tensor_cyclic(6, 4), 2);
        assert_eq!(tensor_cyclic(5, 7), 1);
        assert_eq!(tensor_cyclic(12, 1), 1);
        assert_eq!(tensor_cyclic(8, 8), 8);
    }

    #[test]
    fn product_of_z6z4_with_z4() {
        let t = tensor_product(&g(&[6, 4]), &g(&[4]));
        assert_eq!(t.product().factors(), &[2, 4]);
        assert_eq!(t.cells(), &[(0, 0), (1, 0)]);
        assert_eq!(t.index_of(0, 0), Some(0));
        assert_eq!(t.index_of(1, 0), Some(1));
    }

    #[test]
    fn trivial_and_coprime_products() {
        let t = tensor_product(&g(&[]), &g(&[6]));
        assert!(t.product().is_trivial());
        assert!(t.cells().is_empty());

        let t = tensor_product(&g(&[5]), &g(&[7]));
        assert!(t.product().is_trivial());
        assert_eq!(t.index_of(0, 0), None);
    }

    #[test]
    fn z6_tensor_z4_is_z2() {
        let t = tensor_product(&g(&[6]), &g(&[4]));
        assert_eq!(t.product().factors(), &[2]);
        assert!(t.product().is_isomorphic(&g(&[2])));
    }

    // canonical map on Z6+Z4 x Z4 evaluates to (x1*y mod 2, x2*y mod 4)
    #[test]
    fn canonical_map_is_coordinatewise_products() {
        let a = g(&[6, 4]);
        let b = g(&[4]);
        let can = canonical_map(&a, &b);
        for x in a.elements() {
            for y in b.elements() {
                let got = can.eval(&x, &y).unwrap();
                let expect = [
                    x.coords()[0] * y.coords()[0] % 2,
                    x.coords()[1] * y.coords()[0] % 4,
                ];
                assert_eq!(got.coords(), expect, "at {x}, {y}");
            }
        }
        // anything paired with zero dies
        for x in a.elements() {
            assert!(can.eval(&x, &b.zero()).unwrap().is_zero());
        }
    }

    // Z_{p^m} x Z_p pairs by (x*y mod p)
    #[test]
    fn prime_power_against_prime() {
        let a = g(&[8]);
        let b = g(&[2]);
        let can = canonical_map(&a, &b);
        for x in 0..8 {
            for y in 0..2 {
                let got = can
                    .eval(&a.element(&[x]).unwrap(), &b.element(&[y]).unwrap())
                    .unwrap();
                assert_eq!(got.coords(), &[x * y % 2]);
            }
        }
    }

    #[test]
    fn primary_formula_examples() {
        assert_eq!(
            primary_tensor_formula(&g(&[4, 2]), &g(&[8])).factors(),
            &[4, 2]
        );
        assert!(primary_tensor_formula(&g(&[5]), &g(&[7])).is_trivial());
        assert_eq!(primary_tensor_formula(&g(&[6]), &g(&[4])).factors(), &[2]);
    }

    #[test]
    fn both_routes_agree_on_small_groups() {
        let cases: Vec<Vec<u64>> = vec![
            vec![],
            vec![2],
            vec![6, 4],
            vec![8, 3],
            vec![12, 18],
            vec![2, 2, 9],
            vec![30],
        ];
        for fa in &cases {
            for fb in &cases {
                let a = g(fa);
                let b = g(fb);
                let direct = tensor_product(&a, &b);
                let primary = primary_tensor_formula(&a, &b);
                assert!(
                    direct.product().is_isomorphic(&primary),
                    "{a} tensor {b}: {} vs {}",
                    direct.product(),
                    primary
                );
            }
        }
    }

    #[test]
    fn tensor_is_symmetric_up_to_isomorphism() {
        let cases: Vec<Vec<u64>> = vec![vec![6, 4], vec![8], vec![9, 3], vec![2, 2, 2]];
        for fa in &cases {
            for fb in &cases {
                let ab = tensor_product(&g(fa), &g(fb));
                let ba = tensor_product(&g(fb), &g(fa));
                assert!(ab.product().is_isomorphic(ba.product()));
            }
        }
    }

    #[test]
    fn tensor_distributes_over_direct_sums() {
        let a1 = g(&[4]);
        let a2 = g(&[6, 2]);
        let b = g(&[8, 3]);
        let joint = tensor_product(&a1.direct_sum(&a2), &b);
        let split = tensor_product(&a1, &b)
            .product()
            .direct_sum(tensor_product(&a2, &b).product());
        assert!(joint.product().is_isomorphic(&split));
    }

    // isomorphic inputs give isomorphic products, but non-isomorphic inputs
    // can collide: Z6 tensor Z4 = Z2 tensor Z2 although Z6+Z4 and Z2+Z2
    // are different groups
    #[test]
    fn products_can_collide_across_classes() {
        let t1 = tensor_product(&g(&[6]), &g(&[4]));
        let t2 = tensor_product(&g(&[2]), &g(&[2]));
        assert!(t1.product().is_isomorphic(t2.product()));
        assert!(!g(&[6, 4]).is_isomorphic(&g(&[2, 2])));

        let t1 = tensor_product(&g(&[6, 4]), &g(&[4]));
        let t2 = tensor_product(&g(&[2, 12]), &g(&[4]));
        assert!(t1.product().is_isomorphic(t2.product()));
    }

    #[test]
    fn canonical_image_generates_the_product() {
        for (fa, fb) in [(vec![6, 4], vec![4]), (vec![4, 2], vec![8, 2]), (vec![9, 3], vec![9])] {
            let a = g(&fa);
            let b = g(&fb);
            let t = tensor_product(&a, &b);
            let mut reached = std::collections::HashSet::new();
            reached.insert(t.product().zero());
            loop {
                let mut next = Vec::new();
                for x in a.elements() {
                    for y in b.elements() {
                        let img = t.canonical().eval(&x, &y).unwrap();
                        for r in reached.iter() {
                            let s = t.product().add(r, &img).unwrap();
                            if !reached.contains(&s) {
                                next.push(s);
                            }
                        }
                    }
                }
                if next.is_empty() {
                    break;
                }
                reached.extend(next);
            }
            assert_eq!(reached.len() as u128, t.product().order());
        }
    }

    #[test]
    fn tensor_of_identities_is_identity() {
        let a = g(&[4]);
        let t = tensor_of_homs(&Homomorphism::identity(&a), &Homomorphism::identity(&a));
        assert_eq!(t, Homomorphism::identity(tensor_product(&a, &a).product()));
    }

    #[test]
    fn tensor_of_zero_is_zero() {
        let a = g(&[6]);
        let b = g(&[4]);
        let z = Homomorphism::zero(&a, &b);
        let id = Homomorphism::identity(&a);
        let t = tensor_of_homs(&z, &id);
        for img in t.images() {
            assert!(img.is_zero());
        }
    }

    // doubling on Z4 tensored with the identity on Z2 kills the generator:
    // 2*(e tensor e) = 0 in Z2
    #[test]
    fn tensor_of_doubling_vanishes() {
        let z4 = g(&[4]);
        let z2 = g(&[2]);
        let double =
            Homomorphism::new(z4.clone(), z4.clone(), vec![z4.element(&[2]).unwrap()]).unwrap();
        let t = tensor_of_homs(&double, &Homomorphism::identity(&z2));
        assert_eq!(t.domain().factors(), &[2]);
        assert!(t.images()[0].is_zero());
    }

    #[test]
    fn tensor_of_homs_commutes_with_canonical_maps() {
        let a1 = g(&[4, 2]);
        let a2 = g(&[8]);
        let b1 = g(&[6]);
        let b2 = g(&[4]);
        let f = Homomorphism::new(a1.clone(), a2.clone(), vec![
            a2.element(&[2]).unwrap(),
            a2.element(&[4]).unwrap(),
        ])
        .unwrap();
        let gh = Homomorphism::new(b1.clone(), b2.clone(), vec![b2.element(&[2]).unwrap()])
            .unwrap();
        let t = tensor_of_homs(&f, &gh);
        let can1 = canonical_map(&a1, &b1);
        let can2 = canonical_map(&a2, &b2);
        for x in a1.elements() {
            for y in b1.elements() {
                let through_product = t.eval(&can1.eval(&x, &y).unwrap()).unwrap();
                let through_maps = can2
                    .eval(&f.eval(&x).unwrap(), &gh.eval(&y).unwrap())
                    .unwrap();
                assert_eq!(through_product, through_maps, "at {x}, {y}");
            }
        }
    }

    #[test]
    fn induced_bilinear_from_identities_is_canonical() {
        let a = g(&[6, 4]);
        let b = g(&[4]);
        let got = induced_bilinear_from_homs(
            &Homomorphism::identity(&a),
            &Homomorphism::identity(&b),
        );
        assert_eq!(got, canonical_map(&a, &b));
    }

    // Z2 -> Z4 by 1 |-> 2 against the identity on Z4: the induced map sends
    // (1, 1) to 2 in Z4 tensor Z4 = Z4
    #[test]
    fn induced_bilinear_through_embedding() {
        let z2 = g(&[2]);
        let z4 = g(&[4]);
        let emb =
            Homomorphism::new(z2.clone(), z4.clone(), vec![z4.element(&[2]).unwrap()]).unwrap();
        let h = induced_bilinear_from_homs(&emb, &Homomorphism::identity(&z4));
        assert_eq!(h.target().factors(), &[4]);
        let got = h
            .eval(&z2.element(&[1]).unwrap(), &z4.element(&[1]).unwrap())
            .unwrap();
        assert_eq!(got.coords(), &[2]);
        // it is left non-degenerate (the embedding is injective) but not
        // right non-degenerate (2*Z4 misses odd elements)
        assert!(h.is_left_nondegenerate(DEFAULT_MAX_ENUM).unwrap());
        assert!(!h.is_right_nondegenerate(DEFAULT_MAX_ENUM).unwrap());
    }
}

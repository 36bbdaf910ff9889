//! Bilinear maps between finite abelian groups, non-degeneracy, and the
//! quotient construction that turns any bilinear map into a pairing.
//!
//! A bilinear map A x B -> C on presentations is stored as the grid of its
//! values on generator pairs. The grid determines the map, and a grid is
//! realizable exactly when cell (i, j) dies under gcd(a_i, b_j); both facts
//! get heavy use, so the constructor enforces the order constraint and
//! everything else trusts it.
//!
//! The kernel scans walk one side in lexicographic order while keeping the
//! evaluations against the other side's generators current, so one element
//! costs a handful of modular additions instead of a fresh evaluation.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::arith;
use crate::error::{Error, Result};
use crate::groups::{FinAbGroup, GroupElement, GroupStructure, Homomorphism};
use crate::odometer::Odometer;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BilinearMap {
    left: FinAbGroup,
    right: FinAbGroup,
    target: FinAbGroup,
    grid: Vec<Vec<GroupElement>>,
}

impl BilinearMap {
    /// Build a map from its generator grid. `grid[i][j]` is the value on
    /// (e_i, e_j) and must die under gcd(a_i, b_j), otherwise no bilinear
    /// extension exists.
    pub fn new(
        left: FinAbGroup,
        right: FinAbGroup,
        target: FinAbGroup,
        grid: Vec<Vec<GroupElement>>,
    ) -> Result<Self> {
        if grid.len() != left.arity() {
            return Err(Error::ArityMismatch {
                expected: left.arity(),
                got: grid.len(),
            });
        }
        for (i, row) in grid.iter().enumerate() {
            if row.len() != right.arity() {
                return Err(Error::ArityMismatch {
                    expected: right.arity(),
                    got: row.len(),
                });
            }
            for (j, cell) in row.iter().enumerate() {
                target.check_element(cell)?;
                let g = arith::gcd(left.factors()[i], right.factors()[j]);
                if !target.scalar_mul_is_zero(g, cell.coords()) {
                    return Err(Error::OrderConstraint {
                        index: i * right.arity() + j,
                        detail: format!(
                            "cell ({i}, {j}) must vanish under {g} = gcd({}, {})",
                            left.factors()[i],
                            right.factors()[j]
                        ),
                    });
                }
            }
        }
        Ok(BilinearMap {
            left,
            right,
            target,
            grid,
        })
    }

    pub fn zero(left: FinAbGroup, right: FinAbGroup, target: FinAbGroup) -> Self {
        let grid = vec![vec![target.zero(); right.arity()]; left.arity()];
        BilinearMap {
            left,
            right,
            target,
            grid,
        }
    }

    pub fn left(&self) -> &FinAbGroup {
        &self.left
    }

    pub fn right(&self) -> &FinAbGroup {
        &self.right
    }

    pub fn target(&self) -> &FinAbGroup {
        &self.target
    }

    pub fn grid(&self) -> &[Vec<GroupElement>] {
        &self.grid
    }

    pub fn cell(&self, i: usize, j: usize) -> &GroupElement {
        &self.grid[i][j]
    }

    pub fn eval(&self, x: &GroupElement, y: &GroupElement) -> Result<GroupElement> {
        self.left.check_element(x)?;
        self.right.check_element(y)?;
        let tf = self.target.factors();
        let mut acc = vec![0u64; tf.len()];
        for (i, &xi) in x.coords().iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in y.coords().iter().enumerate() {
                if yj == 0 {
                    continue;
                }
                let cell = self.grid[i][j].coords();
                for (k, &tk) in tf.iter().enumerate() {
                    if cell[k] != 0 {
                        let s = arith::mul_mod(arith::mul_mod(xi, yj, tk), cell[k], tk);
                        acc[k] = arith::add_mod(acc[k], s, tk);
                    }
                }
            }
        }
        Ok(GroupElement::from_coords(acc))
    }

    fn check_signature(&self, other: &BilinearMap) -> Result<()> {
        if self.left != other.left || self.right != other.right || self.target != other.target {
            return Err(Error::GroupMismatch(format!(
                "maps have different signatures: {}x{}->{} vs {}x{}->{}",
                self.left, self.right, self.target, other.left, other.right, other.target
            )));
        }
        Ok(())
    }

    /// Cellwise sum. Bil(A x B, C) is an abelian group under this operation.
    pub fn product(&self, other: &BilinearMap) -> Result<BilinearMap> {
        self.check_signature(other)?;
        let grid = self
            .grid
            .iter()
            .zip(&other.grid)
            .map(|(r1, r2)| {
                r1.iter()
                    .zip(r2)
                    .map(|(c1, c2)| self.target.add(c1, c2).expect("cells are target elements"))
                    .collect()
            })
            .collect();
        Ok(BilinearMap {
            left: self.left.clone(),
            right: self.right.clone(),
            target: self.target.clone(),
            grid,
        })
    }

    /// Cellwise negation, the inverse for [`BilinearMap::product`].
    pub fn inverse(&self) -> BilinearMap {
        let grid = self
            .grid
            .iter()
            .map(|row| {
                row.iter()
                    .map(|c| self.target.neg(c).expect("cells are target elements"))
                    .collect()
            })
            .collect();
        BilinearMap {
            left: self.left.clone(),
            right: self.right.clone(),
            target: self.target.clone(),
            grid,
        }
    }

    /// n-fold product, with negative n running through the inverse.
    pub fn power(&self, n: i64) -> BilinearMap {
        let exp = self.target.exponent();
        let s = (n as i128).rem_euclid(exp as i128) as u64;
        let grid = self
            .grid
            .iter()
            .map(|row| {
                row.iter()
                    .map(|c| {
                        self.target
                            .scalar_mul(s, c)
                            .expect("cells are target elements")
                    })
                    .collect()
            })
            .collect();
        BilinearMap {
            left: self.left.clone(),
            right: self.right.clone(),
            target: self.target.clone(),
            grid,
        }
    }

    /// Push the values through a homomorphism out of the target.
    pub fn compose_with_hom(&self, h: &Homomorphism) -> Result<BilinearMap> {
        if h.domain() != &self.target {
            return Err(Error::GroupMismatch(format!(
                "hom domain {} does not match map target {}",
                h.domain(),
                self.target
            )));
        }
        let mut grid = Vec::with_capacity(self.grid.len());
        for row in &self.grid {
            let mut out = Vec::with_capacity(row.len());
            for cell in row {
                out.push(h.eval(cell)?);
            }
            grid.push(out);
        }
        Ok(BilinearMap {
            left: self.left.clone(),
            right: self.right.clone(),
            target: h.codomain().clone(),
            grid,
        })
    }

    fn sparse_rows(&self) -> SparseGrid {
        let n = self.right.arity();
        let mut sg = SparseGrid::with_cells(self.left.arity() * n);
        for row in &self.grid {
            for cell in row {
                sg.push_cell(cell.coords());
            }
        }
        sg
    }

    fn sparse_cols(&self) -> SparseGrid {
        let m = self.left.arity();
        let n = self.right.arity();
        let mut sg = SparseGrid::with_cells(m * n);
        for j in 0..n {
            for i in 0..m {
                sg.push_cell(self.grid[i][j].coords());
            }
        }
        sg
    }

    fn left_kernel_flat(&self, max_enum: u64) -> Result<FlatKernel> {
        let sparse = self.sparse_rows();
        let mut kernel = FlatKernel::new(self.left.arity());
        kernel_scan(
            &self.left,
            self.right.arity(),
            self.target.factors(),
            &sparse,
            max_enum,
            |coords| {
                kernel.push(coords);
                true
            },
        )?;
        Ok(kernel)
    }

    fn right_kernel_flat(&self, max_enum: u64) -> Result<FlatKernel> {
        let sparse = self.sparse_cols();
        let mut kernel = FlatKernel::new(self.right.arity());
        kernel_scan(
            &self.right,
            self.left.arity(),
            self.target.factors(),
            &sparse,
            max_enum,
            |coords| {
                kernel.push(coords);
                true
            },
        )?;
        Ok(kernel)
    }

    /// Both kernels: x with f(x, .) = 0 and y with f(., y) = 0, each in
    /// lexicographic order. Needs to walk |A| and |B| elements.
    pub fn kernels(&self, max_enum: u64) -> Result<KernelPair> {
        let lk = self.left_kernel_flat(max_enum)?;
        let rk = self.right_kernel_flat(max_enum)?;
        Ok(KernelPair {
            left: lk.into_elements(),
            right: rk.into_elements(),
        })
    }

    pub fn is_left_nondegenerate(&self, max_enum: u64) -> Result<bool> {
        let sparse = self.sparse_rows();
        let mut nondeg = true;
        kernel_scan(
            &self.left,
            self.right.arity(),
            self.target.factors(),
            &sparse,
            max_enum,
            |coords| {
                if coords.iter().all(|&v| v == 0) {
                    true
                } else {
                    nondeg = false;
                    false
                }
            },
        )?;
        Ok(nondeg)
    }

    pub fn is_right_nondegenerate(&self, max_enum: u64) -> Result<bool> {
        let sparse = self.sparse_cols();
        let mut nondeg = true;
        kernel_scan(
            &self.right,
            self.left.arity(),
            self.target.factors(),
            &sparse,
            max_enum,
            |coords| {
                if coords.iter().all(|&v| v == 0) {
                    true
                } else {
                    nondeg = false;
                    false
                }
            },
        )?;
        Ok(nondeg)
    }

    /// Is the grid the canonical map onto the tensor product of left and
    /// right? Checked structurally: the target must list the nontrivial
    /// gcd cells in row-major order and each cell must hit its generator.
    pub fn is_canonical(&self) -> bool {
        let tf = self.target.factors();
        let mut pos = 0;
        for (i, &ai) in self.left.factors().iter().enumerate() {
            for (j, &bj) in self.right.factors().iter().enumerate() {
                let g = arith::gcd(ai, bj);
                let cell = self.grid[i][j].coords();
                if g > 1 {
                    if pos >= tf.len() || tf[pos] != g {
                        return false;
                    }
                    for (k, &v) in cell.iter().enumerate() {
                        if v != if k == pos { 1 } else { 0 } {
                            return false;
                        }
                    }
                    pos += 1;
                } else if !cell.iter().all(|&v| v == 0) {
                    return false;
                }
            }
        }
        pos == tf.len()
    }

    /// Non-degenerate on both sides. Canonical maps get the structural
    /// shortcut first; everything else is decided by scanning, so the group
    /// orders must stay within `max_enum`.
    pub fn is_pairing(&self, max_enum: u64) -> Result<bool> {
        if self.is_canonical() {
            if let Some((verdict, _)) = canonical_nondeg_fastpath(&self.left, &self.right) {
                return Ok(verdict);
            }
        }
        Ok(self.is_left_nondegenerate(max_enum)? && self.is_right_nondegenerate(max_enum)?)
    }

    /// Divide both sides by the kernels. The result pairs A/ker_l with
    /// B/ker_r through the same values, is always non-degenerate, and
    /// satisfies quotient(x + ker_l, y + ker_r) = f(x, y).
    pub fn quotient_pairing(&self, max_enum: u64) -> Result<QuotientPairing> {
        self.quotient_pairing_with(&mut QuotientScratch::new(), max_enum)
    }

    /// quotient_pairing with a reusable cache. Quotienting many maps on the
    /// same pair of groups keeps hitting the same handful of kernels, and
    /// the coset analysis depends on nothing but the group and the kernel,
    /// so the scratch shares it across calls.
    pub fn quotient_pairing_with(
        &self,
        scratch: &mut QuotientScratch,
        max_enum: u64,
    ) -> Result<QuotientPairing> {
        let lk = self.left_kernel_flat(max_enum)?;
        let rk = self.right_kernel_flat(max_enum)?;
        let lq = scratch.left.lookup(&self.left, &lk)?;
        let rq = scratch.right.lookup(&self.right, &rk)?;
        let grid: Vec<Vec<GroupElement>> = lq
            .gen_reps
            .iter()
            .map(|ga| {
                rq.gen_reps
                    .iter()
                    .map(|gb| self.eval(ga, gb).expect("representatives are valid elements"))
                    .collect()
            })
            .collect();
        let induced = BilinearMap::new(
            lq.group.clone(),
            rq.group.clone(),
            self.target.clone(),
            grid,
        )
        .expect("induced cells inherit the order constraints");
        Ok(QuotientPairing {
            base: self.clone(),
            quotient_left: lq.group.clone(),
            left_reps: lq.reps.clone(),
            quotient_right: rq.group.clone(),
            right_reps: rq.reps.clone(),
            induced,
        })
    }
}

/// Reusable cache for [`BilinearMap::quotient_pairing_with`]. One side cache
/// maps each kernel seen so far to its finished coset analysis; swapping to a
/// different group drops the stored entries automatically.
#[derive(Debug, Default)]
pub struct QuotientScratch {
    left: SideCache,
    right: SideCache,
}

impl QuotientScratch {
    pub fn new() -> Self {
        QuotientScratch::default()
    }
}

#[derive(Debug, Default)]
struct SideCache {
    factors: Vec<u64>,
    entries: HashMap<Box<[u64]>, SideQuotient>,
}

impl SideCache {
    fn lookup(&mut self, group: &FinAbGroup, kernel: &FlatKernel) -> Result<&SideQuotient> {
        if self.factors != group.factors() {
            self.entries.clear();
            self.factors.clear();
            self.factors.extend_from_slice(group.factors());
        }
        if !self.entries.contains_key(kernel.coords.as_slice()) {
            let side = quotient_side(group, kernel)?;
            self.entries
                .insert(kernel.coords.clone().into_boxed_slice(), side);
        }
        Ok(&self.entries[kernel.coords.as_slice()])
    }
}

/// The two kernels of a bilinear map, as plain element lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelPair {
    left: Vec<GroupElement>,
    right: Vec<GroupElement>,
}

impl KernelPair {
    pub fn left(&self) -> &[GroupElement] {
        &self.left
    }

    pub fn right(&self) -> &[GroupElement] {
        &self.right
    }

    pub fn is_trivial(&self) -> bool {
        self.left.len() == 1 && self.right.len() == 1
    }
}

/// A bilinear map together with the pairing it induces on the kernel
/// quotients. `left_reps[q]` is the lexicographically smallest member of the
/// coset that `quotient_left.element_at(q)` names, so evaluating `induced` on
/// quotient elements and the base map on the matching representatives gives
/// the same values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientPairing {
    base: BilinearMap,
    quotient_left: FinAbGroup,
    left_reps: Arc<[GroupElement]>,
    quotient_right: FinAbGroup,
    right_reps: Arc<[GroupElement]>,
    induced: BilinearMap,
}

impl QuotientPairing {
    pub fn base(&self) -> &BilinearMap {
        &self.base
    }

    pub fn quotient_left(&self) -> &FinAbGroup {
        &self.quotient_left
    }

    pub fn left_representatives(&self) -> &[GroupElement] {
        &self.left_reps
    }

    pub fn quotient_right(&self) -> &FinAbGroup {
        &self.quotient_right
    }

    pub fn right_representatives(&self) -> &[GroupElement] {
        &self.right_reps
    }

    pub fn induced(&self) -> &BilinearMap {
        &self.induced
    }

    /// Send an element of the base map's left group to its coset.
    pub fn project_left(&self, x: &GroupElement) -> Result<GroupElement> {
        project(
            self.base.left(),
            &self.base.left_kernel_flat(u64::MAX)?,
            &self.quotient_left,
            &self.left_reps,
            x,
        )
    }

    /// Send an element of the base map's right group to its coset.
    pub fn project_right(&self, y: &GroupElement) -> Result<GroupElement> {
        project(
            self.base.right(),
            &self.base.right_kernel_flat(u64::MAX)?,
            &self.quotient_right,
            &self.right_reps,
            y,
        )
    }
}

fn project(
    group: &FinAbGroup,
    kernel: &FlatKernel,
    quotient: &FinAbGroup,
    reps: &[GroupElement],
    x: &GroupElement,
) -> Result<GroupElement> {
    group.check_element(x)?;
    let m = group.arity();
    let mut best: Option<Vec<u64>> = None;
    let mut sum = vec![0u64; m];
    for idx in 0..kernel.count {
        group.add_into(x.coords(), kernel.at(idx), &mut sum);
        if best.as_deref().map_or(true, |b| sum
            .as_slice()
            .lt(b))
        {
            best = Some(sum.clone());
        }
    }
    let rep = best.expect("kernel contains zero");
    for (q, r) in reps.iter().enumerate() {
        if r.coords() == rep.as_slice() {
            return quotient.element_at(q as u128);
        }
    }
    Err(Error::Invalid(
        "element does not reduce to a stored representative".into(),
    ))
}

/// Kernel elements stored as one flat coordinate buffer.
struct FlatKernel {
    coords: Vec<u64>,
    count: usize,
    arity: usize,
}

impl FlatKernel {
    fn new(arity: usize) -> Self {
        FlatKernel {
            coords: Vec::new(),
            count: 0,
            arity,
        }
    }

    fn push(&mut self, coords: &[u64]) {
        self.coords.extend_from_slice(coords);
        self.count += 1;
    }

    fn at(&self, idx: usize) -> &[u64] {
        &self.coords[idx * self.arity..idx * self.arity + self.arity]
    }

    fn into_elements(self) -> Vec<GroupElement> {
        (0..self.count)
            .map(|i| GroupElement::from_coords(self.at(i).to_vec()))
            .collect()
    }
}

/// Grid cells in sparse form, one flat arena for all cells.
struct SparseGrid {
    entries: Vec<(usize, u64)>,
    offsets: Vec<u32>,
}

impl SparseGrid {
    fn with_cells(cells: usize) -> Self {
        let mut offsets = Vec::with_capacity(cells + 1);
        offsets.push(0);
        SparseGrid {
            entries: Vec::new(),
            offsets,
        }
    }

    fn push_cell(&mut self, coords: &[u64]) {
        for (k, &v) in coords.iter().enumerate() {
            if v != 0 {
                self.entries.push((k, v));
            }
        }
        self.offsets.push(self.entries.len() as u32);
    }

    fn cell(&self, flat: usize) -> &[(usize, u64)] {
        &self.entries[self.offsets[flat] as usize..self.offsets[flat + 1] as usize]
    }
}

/// Walk every element of `walker` in lexicographic order, keeping the values
/// against each of the other side's generators current, and hand the
/// coordinates of each element that annihilates all of them to `on_kernel`.
/// `sparse` holds f(e_t, e_j) at flat position t * other_arity + j, where t
/// indexes the walker side. Stops early when `on_kernel` returns false.
fn kernel_scan(
    walker: &FinAbGroup,
    other_arity: usize,
    target_factors: &[u64],
    sparse: &SparseGrid,
    max_enum: u64,
    mut on_kernel: impl FnMut(&[u64]) -> bool,
) -> Result<()> {
    let order = walker.order();
    if order > max_enum as u128 {
        return Err(Error::EnumerationLimit {
            needed: order,
            limit: max_enum,
        });
    }
    let l = target_factors.len();
    let mut acc = vec![0u64; other_arity * l];
    let mut nonzero = 0usize;
    let mut odo = Odometer::new(walker.factors().to_vec());
    if !on_kernel(odo.digits()) {
        return Ok(());
    }
    while let Some(i) = odo.advance() {
        // digit t moved one step forward (a wrap is a full cycle, which a
        // cell's order constraint turns into the same single step), so each
        // accumulator gains one copy of the corresponding cell
        for t in i..walker.arity() {
            let base = t * other_arity;
            for j in 0..other_arity {
                for &(k, v) in sparse.cell(base + j) {
                    let slot = &mut acc[j * l + k];
                    nonzero -= (*slot != 0) as usize;
                    *slot += v;
                    if *slot >= target_factors[k] {
                        *slot -= target_factors[k];
                    }
                    nonzero += (*slot != 0) as usize;
                }
            }
        }
        if nonzero == 0 && !on_kernel(odo.digits()) {
            return Ok(());
        }
    }
    Ok(())
}

#[derive(Debug)]
struct SideQuotient {
    group: FinAbGroup,
    reps: Arc<[GroupElement]>,
    gen_reps: Vec<GroupElement>,
}

struct CosetTables<'a> {
    factors: &'a [u64],
    strides: &'a [u64],
    rank_of: &'a [u32],
    rep_coords: &'a [u64],
    m: usize,
}

impl CosetTables<'_> {
    fn add(&self, r1: u32, r2: u32) -> u32 {
        let a = &self.rep_coords[r1 as usize * self.m..];
        let b = &self.rep_coords[r2 as usize * self.m..];
        let mut idx = 0u64;
        for i in 0..self.m {
            let mut s = a[i] + b[i];
            if s >= self.factors[i] {
                s -= self.factors[i];
            }
            idx += s * self.strides[i];
        }
        self.rank_of[idx as usize]
    }
}

/// Pick one generating set for the coset group: working from the largest
/// invariant factor down, take the first coset of the right order that is
/// independent of everything chosen so far, backtracking if a choice dead
/// ends. `members` carries the span of the chosen generators.
fn search_basis(
    tables: &CosetTables,
    orders: &[u64],
    ds: &[u64],
    slot: usize,
    in_span: &mut [bool],
    members: &mut Vec<u32>,
    gens: &mut [u32],
) -> bool {
    if slot == 0 {
        return true;
    }
    let t = slot - 1;
    let d = ds[t];
    for c in 1..orders.len() as u32 {
        if orders[c as usize] != d {
            continue;
        }
        let mut independent = true;
        let mut cur = c;
        let mut k = 1;
        while k < d {
            if in_span[cur as usize] {
                independent = false;
                break;
            }
            cur = tables.add(cur, c);
            k += 1;
        }
        if !independent {
            continue;
        }
        let snapshot = members.len();
        let mut mult = c;
        for _ in 1..d {
            for si in 0..snapshot {
                let nr = tables.add(members[si], mult);
                debug_assert!(!in_span[nr as usize]);
                in_span[nr as usize] = true;
                members.push(nr);
            }
            mult = tables.add(mult, c);
        }
        gens[t] = c;
        if search_basis(tables, orders, ds, t, in_span, members, gens) {
            return true;
        }
        for &r in &members[snapshot..] {
            in_span[r as usize] = false;
        }
        members.truncate(snapshot);
    }
    false
}

/// Invariant factors of the coset group, reconstructed from how many cosets
/// die under each p-power (the order census of the quotient).
fn structure_from_orders(orders: &[u64]) -> Result<GroupStructure> {
    fn exact_log(mut n: u64, p: u64) -> Result<u32> {
        let mut log = 0;
        while n > 1 && n % p == 0 {
            n /= p;
            log += 1;
        }
        if n != 1 {
            return Err(Error::InvalidCensus(format!(
                "{n} cosets of p-power order survive, not a power of {p}"
            )));
        }
        Ok(log)
    }

    let q_exp = orders.iter().copied().fold(1u64, arith::lcm);
    let mut primary = BTreeMap::new();
    for (p, e_max) in arith::factorize(q_exp) {
        let mut mults = Vec::with_capacity(e_max as usize);
        let mut prev = 0u32;
        for k in 1..=e_max {
            let pk = p.pow(k);
            let count = orders.iter().filter(|&&o| pk % o == 0).count() as u64;
            let log = exact_log(count, p)?;
            if log < prev {
                return Err(Error::InvalidCensus(format!(
                    "coset counts shrink at {p}^{k}"
                )));
            }
            mults.push(log - prev);
            prev = log;
        }
        for w in mults.windows(2) {
            if w[1] > w[0] {
                return Err(Error::InvalidCensus(format!(
                    "coset counts do not form a partition at prime {p}"
                )));
            }
        }
        let mut exps = Vec::new();
        for k in (1..=e_max as usize).rev() {
            let exactly = mults[k - 1] - mults.get(k).copied().unwrap_or(0);
            for _ in 0..exactly {
                exps.push(k as u32);
            }
        }
        primary.insert(p, exps);
    }
    Ok(GroupStructure::from_primary(primary))
}

/// Quotient of `group` by the subgroup in `kernel`: the coset group in
/// invariant-factor form, the smallest representative of each coset indexed
/// by the quotient's lexicographic order, and representatives for one chosen
/// set of generators.
fn quotient_side(group: &FinAbGroup, kernel: &FlatKernel) -> Result<SideQuotient> {
    let m = group.arity();
    let n = group.order() as usize;
    debug_assert!(kernel.count >= 1 && n >= 1);

    let factors = group.factors();
    let mut strides = vec![1u64; m];
    for i in (0..m.saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * factors[i + 1];
    }

    // claim cosets in lexicographic order; the first unclaimed element is
    // the smallest member of its coset
    const UNSET: u32 = u32::MAX;
    let mut rank_of = vec![UNSET; n];
    let mut rep_coords: Vec<u64> = Vec::new();
    let mut ranks: usize = 0;
    let mut odo = Odometer::new(factors.to_vec());
    let mut idx: usize = 0;
    loop {
        if rank_of[idx] == UNSET {
            let rank = ranks as u32;
            ranks += 1;
            rep_coords.extend_from_slice(odo.digits());
            for kk in 0..kernel.count {
                let l = kernel.at(kk);
                let mut s_idx = 0u64;
                for i in 0..m {
                    let mut s = odo.digits()[i] + l[i];
                    if s >= factors[i] {
                        s -= factors[i];
                    }
                    s_idx += s * strides[i];
                }
                rank_of[s_idx as usize] = rank;
            }
        }
        if odo.advance().is_none() {
            break;
        }
        idx += 1;
    }
    debug_assert_eq!(ranks * kernel.count, n);

    // order of each coset: the first divisor of exp(A) whose multiple lands
    // back in the kernel
    let divs = arith::divisors(group.exponent());
    let mut orders = vec![1u64; ranks];
    for r in 0..ranks {
        let coords = &rep_coords[r * m..r * m + m];
        for &d in &divs {
            let mut s_idx = 0u64;
            for i in 0..m {
                s_idx += arith::mul_mod(d, coords[i], factors[i]) * strides[i];
            }
            if rank_of[s_idx as usize] == 0 {
                orders[r] = d;
                break;
            }
        }
    }

    let structure = structure_from_orders(&orders)?;
    let q_group = structure.to_group();
    if q_group.order() != ranks as u128 {
        return Err(Error::InvalidCensus(format!(
            "census names a group of order {}, but there are {ranks} cosets",
            q_group.order()
        )));
    }
    let ds = structure.invariant_factors().to_vec();
    let slots = ds.len();

    let tables = CosetTables {
        factors,
        strides: &strides,
        rank_of: &rank_of,
        rep_coords: &rep_coords,
        m,
    };
    let mut in_span = vec![false; ranks];
    in_span[0] = true;
    let mut members = vec![0u32];
    let mut gens = vec![0u32; slots];
    if !search_basis(&tables, &orders, &ds, slots, &mut in_span, &mut members, &mut gens) {
        return Err(Error::InvalidCensus(
            "no generating set matches the census".into(),
        ));
    }

    // multiples of each generator, then one representative per quotient
    // element in lexicographic order
    let mut mult: Vec<Vec<u32>> = Vec::with_capacity(slots);
    for t in 0..slots {
        let mut row = Vec::with_capacity(ds[t] as usize);
        row.push(0u32);
        let mut cur = 0u32;
        for _ in 1..ds[t] {
            cur = tables.add(cur, gens[t]);
            row.push(cur);
        }
        mult.push(row);
    }
    let mut reps = Vec::with_capacity(ranks);
    let mut seen = vec![false; ranks];
    let mut q_odo = Odometer::new(ds.clone());
    loop {
        let mut rank = 0u32;
        for t in 0..slots {
            rank = tables.add(rank, mult[t][q_odo.digits()[t] as usize]);
        }
        if seen[rank as usize] {
            return Err(Error::InvalidCensus(
                "chosen generators do not span the cosets".into(),
            ));
        }
        seen[rank as usize] = true;
        let r = rank as usize;
        reps.push(GroupElement::from_coords(
            rep_coords[r * m..r * m + m].to_vec(),
        ));
        if q_odo.advance().is_none() {
            break;
        }
    }
    let gen_reps = gens
        .iter()
        .map(|&r| {
            GroupElement::from_coords(rep_coords[r as usize * m..r as usize * m + m].to_vec())
        })
        .collect();

    Ok(SideQuotient {
        group: q_group,
        reps: reps.into(),
        gen_reps,
    })
}

/// How a canonical map's non-degeneracy was settled without enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FastpathRule {
    /// Some prime reaches different maximal powers in the two groups, so
    /// the larger side has an element the gcd grid cannot see.
    ExponentMismatch { prime: u64 },
    /// Every primary component of one group is isomorphic to its partner
    /// in the other.
    IsomorphicPrimaryComponents,
}

impl fmt::Display for FastpathRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FastpathRule::ExponentMismatch { prime } => {
                write!(f, "{prime}-primary exponents differ")
            }
            FastpathRule::IsomorphicPrimaryComponents => {
                write!(f, "primary components are isomorphic")
            }
        }
    }
}

/// Decide non-degeneracy of the canonical map A x B -> A tensor B without
/// touching elements, when the primary decompositions settle it: mismatched
/// p-exponents force degeneracy, componentwise isomorphic groups force
/// non-degeneracy. Anything else returns None and needs enumeration.
pub fn canonical_nondeg_fastpath(a: &FinAbGroup, b: &FinAbGroup) -> Option<(bool, FastpathRule)> {
    let sa = a.normalize();
    let sb = b.normalize();
    let mut primes: Vec<u64> = sa.primary().keys().chain(sb.primary().keys()).copied().collect();
    primes.sort_unstable();
    primes.dedup();
    for &p in &primes {
        if sa.primary_exponent(p) != sb.primary_exponent(p) {
            return Some((false, FastpathRule::ExponentMismatch { prime: p }));
        }
    }
    if sa.primary() == sb.primary() {
        return Some((true, FastpathRule::IsomorphicPrimaryComponents));
    }
    None
}

/// Does any pairing A x B -> C exist for any C? Equivalent to the canonical
/// map being non-degenerate, so this tries the fastpath and otherwise scans
/// the canonical map.
pub fn pairing_exists(a: &FinAbGroup, b: &FinAbGroup, max_enum: u64) -> Result<bool> {
    if let Some((verdict, _)) = canonical_nondeg_fastpath(a, b) {
        return Ok(verdict);
    }
    let can = crate::tensor::canonical_map(a, b);
    Ok(can.is_left_nondegenerate(max_enum)? && can.is_right_nondegenerate(max_enum)?)
}

/// Stack maps sharing left and right groups into one map to the direct sum
/// of their targets. Kernels intersect, so degenerate pieces can combine
/// into a pairing.
pub fn direct_product_combine(maps: &[BilinearMap]) -> Result<BilinearMap> {
    let first = maps
        .first()
        .ok_or_else(|| Error::Invalid("need at least one map to combine".into()))?;
    for m in &maps[1..] {
        if m.left != first.left || m.right != first.right {
            return Err(Error::GroupMismatch(
                "combined maps must share left and right groups".into(),
            ));
        }
    }
    let target = maps
        .iter()
        .fold(FinAbGroup::trivial(), |acc, m| acc.direct_sum(&m.target));
    let mut grid = Vec::with_capacity(first.left.arity());
    for i in 0..first.left.arity() {
        let mut row = Vec::with_capacity(first.right.arity());
        for j in 0..first.right.arity() {
            let mut coords = Vec::with_capacity(target.arity());
            for m in maps {
                coords.extend_from_slice(m.grid[i][j].coords());
            }
            row.push(GroupElement::from_coords(coords));
        }
        grid.push(row);
    }
    Ok(BilinearMap {
        left: first.left.clone(),
        right: first.right.clone(),
        target,
        grid,
    })
}

/// Number of pairings Z_a x Z_a -> Z_a: the grids x*k*y with gcd(k, a) = 1.
pub fn count_pairings_cyclic(a: u64) -> u64 {
    arith::totient(a)
}

/// |Bil(A x B, C)| from the gcd formula, without enumeration.
pub fn bilinear_count(a: &FinAbGroup, b: &FinAbGroup, c: &FinAbGroup) -> u128 {
    let mut count = 1u128;
    for &ai in a.factors() {
        for &bj in b.factors() {
            for &ck in c.factors() {
                count = count.saturating_mul(arith::gcd3(ai, bj, ck) as u128);
            }
        }
    }
    count
}

// digit layout shared by the bilinear enumerators: one odometer digit per
// grid coordinate with more than one legal value
fn bilinear_layout(
    a: &FinAbGroup,
    b: &FinAbGroup,
    c: &FinAbGroup,
) -> (Vec<u64>, Vec<(usize, usize, usize, u64)>) {
    let mut radices = Vec::new();
    let mut layout = Vec::new();
    for (i, &ai) in a.factors().iter().enumerate() {
        for (j, &bj) in b.factors().iter().enumerate() {
            for (k, &ck) in c.factors().iter().enumerate() {
                let g = arith::gcd3(ai, bj, ck);
                if g > 1 {
                    radices.push(g);
                    layout.push((i, j, k, ck / g));
                }
            }
        }
    }
    (radices, layout)
}

/// All of Bil(A x B, C) in lexicographic grid order, starting at the zero
/// map. Errors out instead of starting when the count exceeds `max_enum`.
pub fn enumerate_bilinear(
    a: &FinAbGroup,
    b: &FinAbGroup,
    c: &FinAbGroup,
    max_enum: u64,
) -> Result<BilinearMaps> {
    let total = bilinear_count(a, b, c);
    if total > max_enum as u128 {
        return Err(Error::EnumerationLimit {
            needed: total,
            limit: max_enum,
        });
    }
    let (radices, layout) = bilinear_layout(a, b, c);
    Ok(BilinearMaps {
        current: BilinearMap::zero(a.clone(), b.clone(), c.clone()),
        odo: Odometer::new(radices),
        layout,
        started: false,
    })
}

pub struct BilinearMaps {
    current: BilinearMap,
    odo: Odometer,
    layout: Vec<(usize, usize, usize, u64)>,
    started: bool,
}

impl Iterator for BilinearMaps {
    type Item = BilinearMap;

    fn next(&mut self) -> Option<BilinearMap> {
        if !self.started {
            self.started = true;
            return Some(self.current.clone());
        }
        let changed = self.odo.advance()?;
        for pos in changed..self.layout.len() {
            let (i, j, k, step) = self.layout[pos];
            self.current.grid[i][j].coords_mut()[k] = self.odo.digits()[pos] * step;
        }
        Some(self.current.clone())
    }
}

/// Visit every map in Bil(A x B, C) without handing out ownership: the same
/// map object is updated in place between calls, which keeps the walk nearly
/// allocation-free. Returns how many maps were visited.
pub fn visit_bilinear(
    a: &FinAbGroup,
    b: &FinAbGroup,
    c: &FinAbGroup,
    max_enum: u64,
    mut visit: impl FnMut(&BilinearMap),
) -> Result<u64> {
    let total = bilinear_count(a, b, c);
    if total > max_enum as u128 {
        return Err(Error::EnumerationLimit {
            needed: total,
            limit: max_enum,
        });
    }
    let (radices, layout) = bilinear_layout(a, b, c);
    let mut current = BilinearMap::zero(a.clone(), b.clone(), c.clone());
    let mut odo = Odometer::new(radices);
    let mut count = 1u64;
    visit(&current);
    while let Some(changed) = odo.advance() {
        for pos in changed..layout.len() {
            let (i, j, k, step) = layout[pos];
            current.grid[i][j].coords_mut()[k] = odo.digits()[pos] * step;
        }
        count += 1;
        visit(&current);
    }
    Ok(count)
}

/// Count Bil(A x B, C) by stepping through every map. Oracle for
/// [`bilinear_count`]; same threshold rules as enumeration.
pub fn count_bilinear_by_enumeration(
    a: &FinAbGroup,
    b: &FinAbGroup,
    c: &FinAbGroup,
    max_enum: u64,
) -> Result<u64> {
    let total = bilinear_count(a, b, c);
    if total > max_enum as u128 {
        return Err(Error::EnumerationLimit {
            needed: total,
            limit: max_enum,
        });
    }
    let (radices, _) = bilinear_layout(a, b, c);
    let mut odo = Odometer::new(radices);
    let mut count = 1u64;
    while odo.advance().is_some() {
        count += 1;
    }
    Ok(count)
}

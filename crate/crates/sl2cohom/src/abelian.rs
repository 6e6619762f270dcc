//! Finitely generated abelian groups in canonical invariant-factor form,
//! plus integer Smith normal form for cokernel cross-checks.
//!
//! A [`FinAbGroup`] is `Z^r ⊕ Z/d_1 ⊕ … ⊕ Z/d_m` with `d_1 | d_2 | … | d_m`
//! and every `d_i >= 2`. The chain is unique, so derived equality is
//! isomorphism.

use crate::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawFinAbGroup", into = "RawFinAbGroup")]
pub struct FinAbGroup {
    free_rank: usize,
    invariant_factors: Vec<u64>,
}

/// Wire form; validated on the way in so deserialized values keep the
/// divisibility-chain invariant.
#[derive(Serialize, Deserialize)]
struct RawFinAbGroup {
    free_rank: usize,
    invariant_factors: Vec<u64>,
}

impl From<FinAbGroup> for RawFinAbGroup {
    fn from(g: FinAbGroup) -> Self {
        RawFinAbGroup { free_rank: g.free_rank, invariant_factors: g.invariant_factors }
    }
}

impl TryFrom<RawFinAbGroup> for FinAbGroup {
    type Error = String;
    fn try_from(raw: RawFinAbGroup) -> std::result::Result<Self, String> {
        FinAbGroup::from_chain(raw.free_rank, raw.invariant_factors)
            .map_err(|e| e.to_string())
    }
}

/// Order of a finitely generated abelian group.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupOrder {
    Finite(u128),
    Infinite,
}

impl FinAbGroup {
    pub fn trivial() -> FinAbGroup {
        FinAbGroup { free_rank: 0, invariant_factors: Vec::new() }
    }

    pub fn free(rank: usize) -> FinAbGroup {
        FinAbGroup { free_rank: rank, invariant_factors: Vec::new() }
    }

    /// `Z/n`, `n >= 2`.
    pub fn cyclic(n: u64) -> Result<FinAbGroup> {
        if n < 2 {
            return Err(Error::InvalidOrder(n));
        }
        Ok(FinAbGroup { free_rank: 0, invariant_factors: vec![n] })
    }

    /// Accepts an already-canonical chain; rejects anything that is not one.
    pub fn from_chain(free_rank: usize, invariant_factors: Vec<u64>) -> Result<FinAbGroup> {
        for w in invariant_factors.windows(2) {
            if w[1] % w[0] != 0 {
                return Err(Error::InvalidOrder(w[1]));
            }
        }
        if let Some(&d) = invariant_factors.first() {
            if d < 2 {
                return Err(Error::InvalidOrder(d));
            }
        }
        Ok(FinAbGroup { free_rank, invariant_factors })
    }

    #[inline]
    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    #[inline]
    pub fn invariant_factors(&self) -> &[u64] {
        &self.invariant_factors
    }

    #[inline]
    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.invariant_factors.is_empty()
    }

    pub fn torsion(&self) -> FinAbGroup {
        FinAbGroup { free_rank: 0, invariant_factors: self.invariant_factors.clone() }
    }

    /// The `q`-primary component of the torsion part.
    pub fn primary_part(&self, q: u64) -> FinAbGroup {
        let parts: Vec<u64> = self
            .invariant_factors
            .iter()
            .map(|&d| {
                let mut part = 1u64;
                let mut d = d;
                while d % q == 0 {
                    part *= q;
                    d /= q;
                }
                part
            })
            .filter(|&part| part > 1)
            .collect();
        canonicalize(0, &parts).expect("prime powers are valid orders")
    }

    pub fn order(&self) -> GroupOrder {
        if self.free_rank > 0 {
            return GroupOrder::Infinite;
        }
        let mut n: u128 = 1;
        for &d in &self.invariant_factors {
            n = n.checked_mul(d as u128).expect("group order fits in u128");
        }
        GroupOrder::Finite(n)
    }

    /// Order as a plain integer; panics on infinite groups (callers check).
    pub fn finite_order(&self) -> u128 {
        match self.order() {
            GroupOrder::Finite(n) => n,
            GroupOrder::Infinite => panic!("group has infinite order"),
        }
    }

    /// Dimension of `self ⊗ Z/2` over `F_2`: free rank plus the number of
    /// even invariant factors.
    pub fn two_rank(&self) -> usize {
        self.free_rank + self.invariant_factors.iter().filter(|&&d| d % 2 == 0).count()
    }
}

impl std::fmt::Display for FinAbGroup {
    /// Renders as `Z^r + Z/d1 + Z/d2`; the trivial group prints as `0`.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut first = true;
        if self.free_rank == 1 {
            write!(f, "Z")?;
            first = false;
        } else if self.free_rank > 1 {
            write!(f, "Z^{}", self.free_rank)?;
            first = false;
        }
        for d in &self.invariant_factors {
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "Z/{d}")?;
            first = false;
        }
        Ok(())
    }
}

fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d as u128 * d as u128 <= n as u128 {
        if n.is_multiple_of(d) {
            let mut e = 0u32;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Regroups a multiset of cyclic orders (each `>= 2`) into the unique
/// invariant-factor chain: split every order into prime powers, then let the
/// largest factor collect each prime's largest power, the second factor the
/// second largest, and so on.
pub fn canonicalize(free_rank: usize, cyclic_orders: &[u64]) -> Result<FinAbGroup> {
    use std::collections::BTreeMap;
    let mut powers: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
    for &n in cyclic_orders {
        if n < 2 {
            return Err(Error::InvalidOrder(n));
        }
        for (q, e) in factorize(n) {
            powers.entry(q).or_default().push(e);
        }
    }
    let slots = powers.values().map(Vec::len).max().unwrap_or(0);
    let mut factors = vec![1u64; slots];
    for (q, mut exps) in powers {
        exps.sort_unstable_by(|a, b| b.cmp(a));
        for (i, e) in exps.into_iter().enumerate() {
            // i-th largest power goes into the i-th largest factor
            let slot = slots - 1 - i;
            let qe = q.checked_pow(e).ok_or(Error::OverflowDetected)?;
            factors[slot] = factors[slot].checked_mul(qe).ok_or(Error::OverflowDetected)?;
        }
    }
    debug_assert!(factors.iter().all(|&d| d >= 2) || factors.is_empty());
    Ok(FinAbGroup { free_rank, invariant_factors: factors })
}

/// Direct sum: ranks add, torsion multisets merge and re-canonicalize.
/// Fails with [`Error::OverflowDetected`] when a merged invariant factor
/// would not fit in `u64` — the result would not be representable.
pub fn direct_sum(a: &FinAbGroup, b: &FinAbGroup) -> Result<FinAbGroup> {
    let mut orders = a.invariant_factors.clone();
    orders.extend_from_slice(&b.invariant_factors);
    canonicalize(a.free_rank + b.free_rank, &orders)
}

/// Integer matrix used as a presentation matrix: rows are relations, columns
/// are generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<i64>) -> IntMatrix {
        assert!(rows > 0 && cols > 0, "dimensions must be positive");
        assert_eq!(data.len(), rows * cols);
        IntMatrix { rows, cols, data }
    }

    pub fn zero(rows: usize, cols: usize) -> IntMatrix {
        IntMatrix::new(rows, cols, vec![0; rows * cols])
    }

    pub fn diagonal(entries: &[i64]) -> IntMatrix {
        let n = entries.len();
        let mut m = IntMatrix::zero(n, n);
        for (i, &e) in entries.iter().enumerate() {
            m[(i, i)] = e;
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = i64;
    fn index(&self, (r, c): (usize, usize)) -> &i64 {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut i64 {
        &mut self.data[r * self.cols + c]
    }
}

/// Smith normal form diagonal of an integer matrix.
///
/// Classical gcd-pivot elimination over `Z`: pick the smallest nonzero entry
/// of the trailing submatrix as pivot, clear its row and column by division
/// with remainder, and fold in any entry the pivot does not divide. Returns
/// the `min(rows, cols)` diagonal entries, nonnegative, with `d_1 | d_2 | …`
/// (trailing zeros for the rank deficit). Every arithmetic step is checked;
/// overflow is an error, never a wrap.
pub fn smith_normal_form(m: &IntMatrix) -> Result<Vec<u64>> {
    let mut a = m.clone();
    let (rows, cols) = (a.rows, a.cols);
    let n = rows.min(cols);

    let add_row_multiple = |a: &mut IntMatrix, dst: usize, src: usize, f: i64| -> Result<()> {
        for c in 0..cols {
            let t = a[(src, c)].checked_mul(f).ok_or(Error::OverflowDetected)?;
            a[(dst, c)] = a[(dst, c)].checked_add(t).ok_or(Error::OverflowDetected)?;
        }
        Ok(())
    };
    let add_col_multiple = |a: &mut IntMatrix, dst: usize, src: usize, f: i64| -> Result<()> {
        for r in 0..rows {
            let t = a[(r, src)].checked_mul(f).ok_or(Error::OverflowDetected)?;
            a[(r, dst)] = a[(r, dst)].checked_add(t).ok_or(Error::OverflowDetected)?;
        }
        Ok(())
    };

    for k in 0..n {
        'outer: loop {
            // smallest nonzero entry of the trailing submatrix -> pivot
            let mut pivot: Option<(usize, usize)> = None;
            for r in k..rows {
                for c in k..cols {
                    if a[(r, c)] != 0
                        && pivot.is_none_or(|(pr, pc)| {
                            a[(r, c)].unsigned_abs() < a[(pr, pc)].unsigned_abs()
                        })
                    {
                        pivot = Some((r, c));
                    }
                }
            }
            let Some((pr, pc)) = pivot else { break };
            if pr != k {
                for c in 0..cols {
                    let (x, y) = (a[(pr, c)], a[(k, c)]);
                    a[(pr, c)] = y;
                    a[(k, c)] = x;
                }
            }
            if pc != k {
                for r in 0..rows {
                    let (x, y) = (a[(r, pc)], a[(r, k)]);
                    a[(r, pc)] = y;
                    a[(r, k)] = x;
                }
            }

            let mut clean = true;
            for r in k + 1..rows {
                let q = a[(r, k)].div_euclid(a[(k, k)]);
                if q != 0 {
                    add_row_multiple(&mut a, r, k, q.checked_neg().ok_or(Error::OverflowDetected)?)?;
                }
                if a[(r, k)] != 0 {
                    clean = false;
                }
            }
            for c in k + 1..cols {
                let q = a[(k, c)].div_euclid(a[(k, k)]);
                if q != 0 {
                    add_col_multiple(&mut a, c, k, q.checked_neg().ok_or(Error::OverflowDetected)?)?;
                }
                if a[(k, c)] != 0 {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // divisibility pass: fold in any entry the pivot does not divide
            for r in k + 1..rows {
                for c in k + 1..cols {
                    if a[(r, c)] % a[(k, k)] != 0 {
                        add_row_multiple(&mut a, k, r, 1)?;
                        continue 'outer;
                    }
                }
            }
            break;
        }
    }

    let mut diag: Vec<u64> = (0..n).map(|i| a[(i, i)].unsigned_abs()).collect();
    // invariant by construction; sort defensively so zeros trail
    diag.sort_unstable_by_key(|&d| if d == 0 { u64::MAX } else { d });
    Ok(diag)
}

/// Cokernel of a presentation matrix (rows = relations, cols = generators):
/// `Z^{cols - rank} ⊕ ⊕ Z/d_i` over the nontrivial diagonal entries.
pub fn cokernel(m: &IntMatrix) -> Result<FinAbGroup> {
    let diag = smith_normal_form(m)?;
    let rank = diag.iter().filter(|&&d| d != 0).count();
    let torsion: Vec<u64> = diag.into_iter().filter(|&d| d > 1).collect();
    canonicalize(m.cols() - rank, &torsion)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn canonicalize_examples() {
        let g = canonicalize(0, &[4, 2, 3]).unwrap();
        assert_eq!(g.invariant_factors(), &[2, 12]);
        let g = canonicalize(1, &[12]).unwrap();
        assert_eq!((g.free_rank(), g.invariant_factors()), (1, &[12u64][..]));
        let g = canonicalize(0, &[2, 2, 2]).unwrap();
        assert_eq!(g.invariant_factors(), &[2, 2, 2]);
        assert_eq!(canonicalize(0, &[1]), Err(Error::InvalidOrder(1)));
    }

    #[test]
    fn direct_sum_examples() {
        let z12 = FinAbGroup::cyclic(12).unwrap();
        assert_eq!(direct_sum(&z12, &z12).unwrap().invariant_factors(), &[12, 12]);
        let a = canonicalize(0, &[4, 2]).unwrap();
        let b = FinAbGroup::cyclic(3).unwrap();
        assert_eq!(direct_sum(&a, &b).unwrap().invariant_factors(), &[2, 12]);
        let zero = FinAbGroup::trivial();
        assert_eq!(direct_sum(&zero, &a).unwrap(), a);
        assert_eq!(direct_sum(&a, &zero).unwrap(), a);
    }

    #[test]
    fn direct_sum_unrepresentable() {
        // lcm(3^40, 16) does not fit in u64, so the merged chain cannot exist
        let huge = FinAbGroup::cyclic(3u64.pow(40)).unwrap();
        let small = FinAbGroup::cyclic(16).unwrap();
        assert_eq!(direct_sum(&huge, &small), Err(Error::OverflowDetected));
    }

    #[test]
    fn snf_examples() {
        assert_eq!(smith_normal_form(&IntMatrix::diagonal(&[2, 3])).unwrap(), vec![1, 6]);
        let m = IntMatrix::new(2, 2, vec![2, 4, 6, 8]);
        assert_eq!(smith_normal_form(&m).unwrap(), vec![2, 4]);
        assert_eq!(smith_normal_form(&IntMatrix::zero(2, 2)).unwrap(), vec![0, 0]);
    }

    #[test]
    fn snf_rectangular() {
        let m = IntMatrix::new(2, 3, vec![1, 0, 0, 0, 0, 0]);
        assert_eq!(smith_normal_form(&m).unwrap(), vec![1, 0]);
        let m = IntMatrix::new(3, 1, vec![4, 6, 0]);
        assert_eq!(smith_normal_form(&m).unwrap(), vec![2]);
    }

    #[test]
    fn extraction_examples() {
        let g = direct_sum(&FinAbGroup::free(1), &FinAbGroup::cyclic(12).unwrap()).unwrap();
        assert_eq!(g.torsion(), FinAbGroup::cyclic(12).unwrap());
        let h = canonicalize(0, &[12, 6]).unwrap();
        assert_eq!(h.primary_part(2), canonicalize(0, &[4, 2]).unwrap());
        assert_eq!(h.order(), GroupOrder::Finite(72));
        assert_eq!(g.order(), GroupOrder::Infinite);
    }

    #[test]
    fn two_rank() {
        // Z/2^2 + Z/12 + Z/12 has four even factors
        let g = canonicalize(0, &[2, 2, 12, 12]).unwrap();
        assert_eq!(g.two_rank(), 4);
        assert_eq!(canonicalize(2, &[3, 9]).unwrap().two_rank(), 2);
    }

    #[test]
    fn rendering() {
        assert_eq!(FinAbGroup::trivial().to_string(), "0");
        assert_eq!(FinAbGroup::free(1).to_string(), "Z");
        assert_eq!(FinAbGroup::free(3).to_string(), "Z^3");
        let g = canonicalize(1, &[12]).unwrap();
        assert_eq!(g.to_string(), "Z + Z/12");
        let g = canonicalize(0, &[6, 12]).unwrap();
        assert_eq!(g.to_string(), "Z/6 + Z/12");
    }

    #[test]
    fn serde_shape() {
        let g = canonicalize(1, &[6, 12]).unwrap();
        let json = serde_json::to_string(&g).unwrap();
        assert_eq!(json, r#"{"free_rank":1,"invariant_factors":[6,12]}"#);
        let back: FinAbGroup = serde_json::from_str(&json).unwrap();
        assert_eq!(back, g);
        // a broken chain must not deserialize
        let bad = r#"{"free_rank":0,"invariant_factors":[4,6]}"#;
        assert!(serde_json::from_str::<FinAbGroup>(bad).is_err());
    }

    fn order_strategy() -> impl Strategy<Value = Vec<u64>> {
        proptest::collection::vec(2u64..200, 0..6)
    }

    // For tests that merge several groups: orders below 32 keep every merged
    // invariant factor under 16*27*25*7*11*13*17*19*23*29*31 < 2^47.
    fn small_order_strategy() -> impl Strategy<Value = Vec<u64>> {
        proptest::collection::vec(2u64..32, 0..4)
    }

    proptest! {
        #[test]
        fn canonicalize_idempotent_and_permutation_invariant(orders in order_strategy()) {
            let g = canonicalize(0, &orders).unwrap();
            let again = canonicalize(0, g.invariant_factors()).unwrap();
            prop_assert_eq!(&again, &g);
            let mut rev = orders.clone();
            rev.reverse();
            prop_assert_eq!(canonicalize(0, &rev).unwrap(), g);
        }

        #[test]
        fn canonicalize_preserves_order_and_chain(orders in order_strategy()) {
            let g = canonicalize(0, &orders).unwrap();
            let expected: u128 = orders.iter().map(|&d| d as u128).product();
            prop_assert_eq!(g.finite_order(), expected);
            for w in g.invariant_factors().windows(2) {
                prop_assert_eq!(w[1] % w[0], 0);
            }
        }

        #[test]
        fn direct_sum_commutative_associative(
            a in small_order_strategy(), b in small_order_strategy(), c in small_order_strategy(),
            ra in 0usize..3, rb in 0usize..3,
        ) {
            let ga = canonicalize(ra, &a).unwrap();
            let gb = canonicalize(rb, &b).unwrap();
            let gc = canonicalize(0, &c).unwrap();
            prop_assert_eq!(direct_sum(&ga, &gb).unwrap(), direct_sum(&gb, &ga).unwrap());
            prop_assert_eq!(
                direct_sum(&direct_sum(&ga, &gb).unwrap(), &gc).unwrap(),
                direct_sum(&ga, &direct_sum(&gb, &gc).unwrap()).unwrap()
            );
            prop_assert_eq!(direct_sum(&ga, &FinAbGroup::trivial()).unwrap(), ga);
        }

        #[test]
        fn order_is_multiplicative(a in small_order_strategy(), b in small_order_strategy()) {
            let ga = canonicalize(0, &a).unwrap();
            let gb = canonicalize(0, &b).unwrap();
            prop_assert_eq!(
                direct_sum(&ga, &gb).unwrap().finite_order(),
                ga.finite_order() * gb.finite_order()
            );
        }

        #[test]
        fn snf_chain_and_determinant(entries in proptest::collection::vec(-9i64..10, 9)) {
            let m = IntMatrix::new(3, 3, entries);
            let det = {
                let e = |r: usize, c: usize| m[(r, c)] as i128;
                e(0,0) * (e(1,1) * e(2,2) - e(1,2) * e(2,1))
                    - e(0,1) * (e(1,0) * e(2,2) - e(1,2) * e(2,0))
                    + e(0,2) * (e(1,0) * e(2,1) - e(1,1) * e(2,0))
            };
            let d = smith_normal_form(&m).unwrap();
            for w in d.windows(2) {
                if w[0] != 0 {
                    prop_assert_eq!(w[1] % w[0], 0);
                }
            }
            if det != 0 {
                let prod: i128 = d.iter().map(|&x| x as i128).product();
                prop_assert_eq!(prod, det.abs());
            } else {
                prop_assert!(d.contains(&0));
            }
        }

        #[test]
        fn snf_invariant_under_permutation(entries in proptest::collection::vec(-20i64..21, 6)) {
            let m = IntMatrix::new(2, 3, entries.clone());
            let swapped = IntMatrix::new(2, 3, vec![
                entries[3], entries[4], entries[5],
                entries[0], entries[1], entries[2],
            ]);
            prop_assert_eq!(smith_normal_form(&m).unwrap(), smith_normal_form(&swapped).unwrap());
        }

        // dual route: CRT regrouping vs Smith normal form of the diagonal
        // presentation must agree
        #[test]
        fn cokernel_matches_canonicalize(orders in proptest::collection::vec(2i64..64, 1..5)) {
            let m = IntMatrix::diagonal(&orders);
            let via_snf = cokernel(&m).unwrap();
            let unsigned: Vec<u64> = orders.iter().map(|&d| d as u64).collect();
            let via_crt = canonicalize(0, &unsigned).unwrap();
            prop_assert_eq!(via_snf, via_crt);
        }
    }

    #[test]
    fn snf_overflow_is_detected() {
        let m = IntMatrix::new(2, 2, vec![i64::MAX, i64::MAX - 1, 3, i64::MAX - 2]);
        // elimination on entries this large must either succeed exactly or
        // report overflow; it must never wrap silently
        match smith_normal_form(&m) {
            Ok(d) => assert!(d.iter().all(|&x| x > 0)),
            Err(e) => assert_eq!(e, Error::OverflowDetected),
        }
    }
}

//! Coset spaces `G/C_k`, the left Borel action on them, orbit (double coset)
//! decompositions, and the finite quotient graph they assemble into.
//!
//! Everything here is brute force on purpose: these enumerations are the
//! independent ground truth that the closed-form tables are checked against.
//! The module requires `p > 3`; the small primes are covered by closed forms
//! downstream and have no use for coset enumeration.

use crate::fp::{
    enumerate_group, inv_mod, mul_mod, roots_mod_p, FpMat, GroupPart, Prime, QuadPoly,
    SubgroupSpec, SubgroupTag,
};
use crate::{Error, Result};
use num_rational::Ratio;
use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};

fn tag_for_k(k: u64) -> Result<SubgroupTag> {
    match k {
        2 => Ok(SubgroupTag::C2),
        4 => Ok(SubgroupTag::C4),
        6 => Ok(SubgroupTag::C6),
        other => Err(Error::InvalidOrder(other)),
    }
}

/// The coset space `G/C_k`, stored as canonical representatives.
///
/// The canonical representative of `gC_k` is the lexicographically least
/// element of `{g·c : c ∈ C_k}`; `reps` holds one per coset, sorted.
#[derive(Debug, Clone)]
pub struct CosetSpace {
    p: Prime,
    k: u64,
    reps: Vec<FpMat>,
    cell: Vec<FpMat>, // the elements of C_k, for canonicalization
}

impl CosetSpace {
    #[inline]
    pub fn p(&self) -> Prime {
        self.p
    }

    #[inline]
    pub fn k(&self) -> u64 {
        self.k
    }

    /// Canonical representatives in lexicographic order.
    #[inline]
    pub fn reps(&self) -> &[FpMat] {
        &self.reps
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.reps.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    /// Canonical representative of the coset `g·C_k`.
    pub fn canonical(&self, g: &FpMat) -> FpMat {
        self.cell
            .iter()
            .map(|c| g.mul(c))
            .min()
            .expect("C_k is nonempty")
    }

    fn rep_index(&self, rep: &FpMat) -> usize {
        self.reps
            .binary_search(rep)
            .expect("canonical representative belongs to the space")
    }
}

/// Builds `G/C_k` by canonicalizing every group element. `O(|G| · k)`.
pub fn build_coset_space(p: Prime, k: u64, bound: u64) -> Result<CosetSpace> {
    p.require_gt3()?;
    p.check_bound(bound)?;
    let tag = tag_for_k(k)?;
    let cell = enumerate_group(p, GroupPart::Subgroup(tag), bound)?;
    let full = enumerate_group(p, GroupPart::Full, bound)?;
    let expected = full.len() / cell.len();
    let mut seen: HashSet<FpMat> = HashSet::with_capacity(expected * 2);
    let space = CosetSpace { p, k, reps: Vec::new(), cell };
    for g in &full {
        seen.insert(space.canonical(g));
    }
    let mut reps: Vec<FpMat> = seen.into_iter().collect();
    reps.sort_unstable();
    debug_assert_eq!(reps.len(), expected);
    Ok(CosetSpace { reps, ..space })
}

/// One Borel orbit on a coset space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OrbitRecord {
    /// Lexicographically least coset representative in the orbit.
    pub representative: FpMat,
    /// Number of cosets in the orbit.
    pub size: u64,
    /// `|B| / size`; the order of the stabilizer of any coset in the orbit.
    pub stabilizer_order: u64,
    /// For `k ∈ {4, 6}` and stabilizer order `> 2`: the root of `T²+1`
    /// resp. `T²−T+1` attached to the orbit (the lower-left entry of the
    /// normalized representative `[[1,0],[x,1]]`).
    pub fixed_root: Option<u64>,
    /// Whether the orbit contains the identity coset `C_k` itself.
    pub singular: bool,
}

/// The full decomposition of `G/C_k` into Borel orbits, sorted by
/// (stabilizer order descending, representative ascending).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitDecomposition {
    p: Prime,
    k: u64,
    orbits: Vec<OrbitRecord>,
}

impl OrbitDecomposition {
    #[inline]
    pub fn p(&self) -> Prime {
        self.p
    }

    #[inline]
    pub fn k(&self) -> u64 {
        self.k
    }

    #[inline]
    pub fn orbits(&self) -> &[OrbitRecord] {
        &self.orbits
    }

    /// Stabilizer order → number of orbits with that order.
    pub fn stabilizer_multiset(&self) -> BTreeMap<u64, usize> {
        let mut m = BTreeMap::new();
        for o in &self.orbits {
            *m.entry(o.stabilizer_order).or_insert(0) += 1;
        }
        m
    }

    pub fn fixed_roots(&self) -> BTreeSet<u64> {
        self.orbits.iter().filter_map(|o| o.fixed_root).collect()
    }

    pub fn singular_orbit(&self) -> Option<&OrbitRecord> {
        self.orbits.iter().find(|o| o.singular)
    }
}

/// Partitions a coset space into Borel orbits by breadth-first search from
/// each unvisited representative, acting with the two standard generators of
/// `B`. Stabilizer orders come from orbit–stabilizer, not enumeration.
#[allow(non_snake_case)] // B is the Borel subgroup, not a word
pub fn decompose_under_B(space: &CosetSpace) -> Result<OrbitDecomposition> {
    let p = space.p();
    let generators = SubgroupSpec::new(p, SubgroupTag::Borel)?.generators;
    let b_order = p.get() * (p.get() - 1);
    let identity_rep = space.canonical(&FpMat::identity(p));

    let mut visited: HashSet<FpMat> = HashSet::with_capacity(space.len() * 2);
    let mut orbits: Vec<OrbitRecord> = Vec::new();
    let mut queue: VecDeque<FpMat> = VecDeque::new();

    // reps are scanned in ascending order, so each BFS seed is the least
    // element of its orbit and can serve as the orbit representative
    for &start in space.reps() {
        if visited.contains(&start) {
            continue;
        }
        visited.insert(start);
        queue.push_back(start);
        let mut size = 0u64;
        let mut singular = false;
        while let Some(current) = queue.pop_front() {
            size += 1;
            if current == identity_rep {
                singular = true;
            }
            for gen in &generators {
                let next = space.canonical(&gen.mul(&current));
                if visited.insert(next) {
                    queue.push_back(next);
                }
            }
        }
        assert_eq!(b_order % size, 0, "orbit size must divide |B|");
        let stabilizer_order = b_order / size;
        let fixed_root = if space.k() > 2 && stabilizer_order > 2 {
            let [_, _, c, d] = start.entries();
            assert_ne!(d, 0, "fixed-orbit representative has invertible d");
            Some(mul_mod(c, inv_mod(d, p.get()), p.get()))
        } else {
            None
        };
        orbits.push(OrbitRecord { representative: start, size, stabilizer_order, fixed_root, singular });
    }

    debug_assert_eq!(orbits.iter().map(|o| o.size).sum::<u64>(), space.len() as u64);
    orbits.sort_by(|x, y| {
        y.stabilizer_order
            .cmp(&x.stabilizer_order)
            .then(x.representative.cmp(&y.representative))
    });
    Ok(OrbitDecomposition { p, k: space.k(), orbits })
}

/// Comparison of an observed decomposition against its closed form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecompositionReport {
    pub p: u64,
    pub k: u64,
    pub pass: bool,
    pub expected_stabilizers: BTreeMap<u64, usize>,
    pub observed_stabilizers: BTreeMap<u64, usize>,
    pub expected_roots: BTreeSet<u64>,
    pub observed_roots: BTreeSet<u64>,
}

fn fmt_multiset(m: &BTreeMap<u64, usize>) -> String {
    let parts: Vec<String> = m.iter().rev().map(|(s, n)| format!("{s} x{n}")).collect();
    format!("{{{}}}", parts.join(", "))
}

impl std::fmt::Display for DecompositionReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.pass {
            let total: usize = self.observed_stabilizers.values().sum();
            write!(
                f,
                "PASS: {} orbits with stabilizer orders {}",
                total,
                fmt_multiset(&self.observed_stabilizers)
            )?;
            if !self.observed_roots.is_empty() {
                let roots: Vec<String> =
                    self.observed_roots.iter().map(u64::to_string).collect();
                write!(f, "; fixed roots {{{}}}", roots.join(", "))?;
            }
            Ok(())
        } else {
            write!(
                f,
                "MISMATCH: expected stabilizers {}, observed {}",
                fmt_multiset(&self.expected_stabilizers),
                fmt_multiset(&self.observed_stabilizers)
            )?;
            if self.expected_roots != self.observed_roots {
                write!(
                    f,
                    "; expected roots {:?}, observed {:?}",
                    self.expected_roots, self.observed_roots
                )?;
            }
            Ok(())
        }
    }
}

/// The closed-form stabilizer multiset for `B`-orbits on `G/C_k`:
/// `k = 2` gives `p+1` orbits of order 2; `k = 4` gives two orbits of order 4
/// plus `(p−1)/2` of order 2 when `p ≡ 1 (mod 4)`, else `(p+1)/2` of order 2;
/// `k = 6` the same with 6, `(p−1)/3`, `(p+1)/3` split on `p mod 3`.
#[allow(clippy::manual_div_ceil)] // keep the closed forms as written
pub fn expected_stabilizer_multiset(p: Prime, k: u64) -> Result<BTreeMap<u64, usize>> {
    p.require_gt3()?;
    tag_for_k(k)?;
    let p = p.get();
    let mut m = BTreeMap::new();
    match k {
        2 => {
            m.insert(2, (p + 1) as usize);
        }
        4 => {
            if p % 4 == 1 {
                m.insert(4, 2);
                m.insert(2, ((p - 1) / 2) as usize);
            } else {
                m.insert(2, ((p + 1) / 2) as usize);
            }
        }
        _ => {
            if p % 3 == 1 {
                m.insert(6, 2);
                m.insert(2, ((p - 1) / 3) as usize);
            } else {
                m.insert(2, ((p + 1) / 3) as usize);
            }
        }
    }
    Ok(m)
}

/// Checks a decomposition against the closed form: the stabilizer multisets
/// must agree, and the fixed roots must be exactly the roots of the matching
/// quadratic.
pub fn verify_decomposition(dec: &OrbitDecomposition) -> DecompositionReport {
    let expected_stabilizers = expected_stabilizer_multiset(dec.p(), dec.k())
        .expect("decompositions exist only for p > 3 and k in {2,4,6}");
    let observed_stabilizers = dec.stabilizer_multiset();
    let expected_roots = match dec.k() {
        4 => roots_mod_p(QuadPoly::TSquaredPlusOne, dec.p()),
        6 => roots_mod_p(QuadPoly::TSquaredMinusTPlusOne, dec.p()),
        _ => Ok(BTreeSet::new()),
    }
    .expect("p > 3 by construction");
    let observed_roots = dec.fixed_roots();
    DecompositionReport {
        p: dec.p().get(),
        k: dec.k(),
        pass: expected_stabilizers == observed_stabilizers && expected_roots == observed_roots,
        expected_stabilizers,
        observed_stabilizers,
        expected_roots,
        observed_roots,
    }
}

/// The finite quotient graph: vertices are the `C₄`- and `C₆`-cosets, edges
/// the `C₂`-cosets, with `gC₂` joining `gC₄` to `gC₆`. Well defined because
/// `C₂ ⊆ C₄ ∩ C₆`.
#[derive(Debug, Clone)]
pub struct QuotientGraph {
    c2: CosetSpace,
    c4: CosetSpace,
    c6: CosetSpace,
    /// Edge index → (index into `c4.reps()`, index into `c6.reps()`).
    incidence: Vec<(usize, usize)>,
}

impl QuotientGraph {
    pub fn from_spaces(c2: CosetSpace, c4: CosetSpace, c6: CosetSpace) -> Result<QuotientGraph> {
        if c2.p() != c4.p() || c2.p() != c6.p() {
            return Err(Error::UnsupportedPrime(c4.p().get()));
        }
        assert!(c2.k() == 2 && c4.k() == 4 && c6.k() == 6, "spaces passed in k order");
        let incidence = c2
            .reps()
            .iter()
            .map(|g| (c4.rep_index(&c4.canonical(g)), c6.rep_index(&c6.canonical(g))))
            .collect();
        Ok(QuotientGraph { c2, c4, c6, incidence })
    }

    #[inline]
    pub fn p(&self) -> Prime {
        self.c2.p()
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.c4.len() + self.c6.len()
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.c2.len()
    }

    #[inline]
    pub fn incidence(&self) -> &[(usize, usize)] {
        &self.incidence
    }

    pub fn edge_space(&self) -> &CosetSpace {
        &self.c2
    }

    pub fn c4_space(&self) -> &CosetSpace {
        &self.c4
    }

    pub fn c6_space(&self) -> &CosetSpace {
        &self.c6
    }

    /// `|V| − |E|`; equals `−|G|/12` for every prime.
    pub fn euler_characteristic(&self) -> i64 {
        self.vertex_count() as i64 - self.edge_count() as i64
    }

    /// Union-find over the vertex set.
    pub fn is_connected(&self) -> bool {
        let n = self.vertex_count();
        if n == 0 {
            return true;
        }
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let offset = self.c4.len();
        for &(v4, v6) in &self.incidence {
            let a = find(&mut parent, v4);
            let b = find(&mut parent, offset + v6);
            parent[a] = b;
        }
        let root = find(&mut parent, 0);
        (1..n).all(|v| find(&mut parent, v) == root)
    }
}

/// Builds the quotient graph from scratch for one prime.
pub fn build_quotient_graph(p: Prime, bound: u64) -> Result<QuotientGraph> {
    let c2 = build_coset_space(p, 2, bound)?;
    let c4 = build_coset_space(p, 4, bound)?;
    let c6 = build_coset_space(p, 6, bound)?;
    QuotientGraph::from_spaces(c2, c4, c6)
}

/// Exact equivariant Euler characteristic of the graph of groups: the sum of
/// `1/|stabilizer|` over vertex orbits minus the same sum over edge orbits.
/// Equals `−(p+1)/12` for every prime.
pub fn equivariant_euler(
    edges: &OrbitDecomposition,
    c4_vertices: &OrbitDecomposition,
    c6_vertices: &OrbitDecomposition,
) -> Ratio<i64> {
    let sum = |dec: &OrbitDecomposition| -> Ratio<i64> {
        dec.orbits()
            .iter()
            .map(|o| Ratio::new(1, o.stabilizer_order as i64))
            .sum()
    };
    sum(c4_vertices) + sum(c6_vertices) - sum(edges)
}

/// Everything the verification suites need for one prime, computed once:
/// the three orbit decompositions and the quotient graph.
#[derive(Debug, Clone)]
pub struct CosetAnalysis {
    pub dec2: OrbitDecomposition,
    pub dec4: OrbitDecomposition,
    pub dec6: OrbitDecomposition,
    pub graph: QuotientGraph,
}

impl CosetAnalysis {
    pub fn new(p: Prime, bound: u64) -> Result<CosetAnalysis> {
        let c2 = build_coset_space(p, 2, bound)?;
        let c4 = build_coset_space(p, 4, bound)?;
        let c6 = build_coset_space(p, 6, bound)?;
        let dec2 = decompose_under_B(&c2)?;
        let dec4 = decompose_under_B(&c4)?;
        let dec6 = decompose_under_B(&c6)?;
        let graph = QuotientGraph::from_spaces(c2, c4, c6)?;
        Ok(CosetAnalysis { dec2, dec4, dec6, graph })
    }

    pub fn p(&self) -> Prime {
        self.graph.p()
    }

    /// Number of Borel orbits on `G/C₂`, `G/C₄`, `G/C₆`.
    pub fn orbit_counts(&self) -> (usize, usize, usize) {
        (self.dec2.orbits().len(), self.dec4.orbits().len(), self.dec6.orbits().len())
    }

    pub fn equivariant_euler(&self) -> Ratio<i64> {
        equivariant_euler(&self.dec2, &self.dec4, &self.dec6)
    }
}

/// Number of Borel orbits on each of the three coset spaces.
pub fn orbit_counts(p: Prime, bound: u64) -> Result<(usize, usize, usize)> {
    Ok(CosetAnalysis::new(p, bound)?.orbit_counts())
}

/// Direct stabilizer count for spot checks: enumerates all of `B` and counts
/// the elements fixing the coset. `O(|B|)` per call; the orbit–stabilizer
/// shortcut in [`decompose_under_B`] is the production path.
#[cfg(test)]
pub(crate) fn stabilizer_order_slow(space: &CosetSpace, coset: &FpMat) -> Result<u64> {
    let borel = enumerate_group(space.p(), GroupPart::Subgroup(SubgroupTag::Borel), u64::MAX)?;
    let home = space.canonical(coset);
    Ok(borel.iter().filter(|b| space.canonical(&b.mul(&home)) == home) .count() as u64)
}

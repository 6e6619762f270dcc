//! Exact arithmetic in `F_p` and enumeration of `SL_2(F_p)`.
//!
//! Everything downstream works with [`FpMat`], a 2x2 determinant-one matrix
//! over `F_p` stored as least nonnegative residues. Equality is plain field
//! comparison and the derived lexicographic order on `(a, b, c, d)` is the
//! canonical order used wherever a distinguished representative is needed.

use crate::{Error, Result};

/// A validated odd-or-even prime. Construction runs trial division.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Prime(u64);

impl Prime {
    pub fn new(n: u64) -> Result<Prime> {
        if is_prime(n) {
            Ok(Prime(n))
        } else {
            Err(Error::NotPrime(n))
        }
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }

    /// Residue of `p` mod 12; determines every closed-form table case.
    #[inline]
    pub fn mod12(self) -> u64 {
        self.0 % 12
    }

    pub(crate) fn check_bound(self, bound: u64) -> Result<()> {
        if self.0 > bound {
            Err(Error::BoundExceeded { p: self.0, bound })
        } else {
            Ok(())
        }
    }

    pub(crate) fn require_gt3(self) -> Result<()> {
        if self.0 <= 3 {
            Err(Error::UnsupportedPrime(self.0))
        } else {
            Ok(())
        }
    }
}

impl std::fmt::Display for Prime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.checked_mul(d).is_some_and(|sq| sq <= n) {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Validating constructor for [`Prime`].
pub fn make_prime(n: u64) -> Result<Prime> {
    Prime::new(n)
}

/// All primes in the inclusive range `lo..=hi`, ascending.
pub fn primes_in(lo: u64, hi: u64) -> Vec<Prime> {
    (lo..=hi).filter(|&n| is_prime(n)).map(Prime).collect()
}

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` in `F_p` (Fermat). Panics on `a = 0`; all callers hold
/// determinant-one invariants that rule that out.
pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p), "zero is not invertible");
    pow_mod(a, p - 2, p)
}

/// A 2x2 matrix over `F_p` with determinant 1.
///
/// Field order matters: the derived `Ord` is lexicographic on
/// `(a, b, c, d)` row-major, with the ambient prime only as a tiebreaker.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FpMat {
    a: u64,
    b: u64,
    c: u64,
    d: u64,
    p: u64,
}

impl FpMat {
    /// Builds a matrix from arbitrary integer entries, reducing mod `p` and
    /// checking the determinant.
    pub fn new(p: Prime, entries: [i64; 4]) -> Result<FpMat> {
        let m = p.get();
        let r = |x: i64| x.rem_euclid(m as i64) as u64;
        let mat = FpMat {
            a: r(entries[0]),
            b: r(entries[1]),
            c: r(entries[2]),
            d: r(entries[3]),
            p: m,
        };
        let det = (mat.a as u128 * mat.d as u128 + m as u128 * m as u128
            - mat.b as u128 * mat.c as u128)
            % m as u128;
        if det != 1 {
            return Err(Error::NotUnimodular(m));
        }
        Ok(mat)
    }

    #[inline]
    pub fn identity(p: Prime) -> FpMat {
        FpMat { a: 1, b: 0, c: 0, d: 1, p: p.get() }
    }

    #[inline]
    pub fn entries(&self) -> [u64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn mul(&self, rhs: &FpMat) -> FpMat {
        debug_assert_eq!(self.p, rhs.p);
        let p = self.p;
        FpMat {
            a: (mul_mod(self.a, rhs.a, p) + mul_mod(self.b, rhs.c, p)) % p,
            b: (mul_mod(self.a, rhs.b, p) + mul_mod(self.b, rhs.d, p)) % p,
            c: (mul_mod(self.c, rhs.a, p) + mul_mod(self.d, rhs.c, p)) % p,
            d: (mul_mod(self.c, rhs.b, p) + mul_mod(self.d, rhs.d, p)) % p,
            p,
        }
    }

    /// Determinant-one inverse: `[[d, -b], [-c, a]]`.
    #[inline]
    pub fn inverse(&self) -> FpMat {
        let p = self.p;
        FpMat {
            a: self.d,
            b: (p - self.b) % p,
            c: (p - self.c) % p,
            d: self.a,
            p,
        }
    }

    /// Multiplicative order, by repeated multiplication.
    pub fn order(&self) -> u64 {
        let id = FpMat { a: 1, b: 0, c: 0, d: 1, p: self.p };
        let mut x = *self;
        let mut n = 1u64;
        while x != id {
            x = x.mul(self);
            n += 1;
        }
        n
    }

    /// Lower-left entry is zero, i.e. the matrix lies in the Borel subgroup.
    #[inline]
    pub fn is_upper_triangular(&self) -> bool {
        self.c == 0
    }
}

impl std::fmt::Display for FpMat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[[{},{}],[{},{}]]", self.a, self.b, self.c, self.d)
    }
}

/// The distinguished subgroups of `G = SL_2(F_p)` used throughout.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SubgroupTag {
    /// Upper-triangular matrices (lower-left entry zero), order `p(p-1)`.
    Borel,
    /// Generated by `a2 = -I`, order 2.
    C2,
    /// Generated by `a4 = [[0,-1],[1,0]]`, order 4.
    C4,
    /// Generated by `a6 = [[0,-1],[1,1]]`, order 6.
    C6,
}

impl SubgroupTag {
    pub fn cyclic_order(self) -> Option<u64> {
        match self {
            SubgroupTag::Borel => None,
            SubgroupTag::C2 => Some(2),
            SubgroupTag::C4 => Some(4),
            SubgroupTag::C6 => Some(6),
        }
    }
}

/// Selects either the full group or one of the distinguished subgroups.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupPart {
    Full,
    Subgroup(SubgroupTag),
}

/// A subgroup given by a generator list.
#[derive(Debug, Clone)]
pub struct SubgroupSpec {
    pub tag: SubgroupTag,
    pub generators: Vec<FpMat>,
}

impl SubgroupSpec {
    /// Generators: the unipotent `[[1,1],[0,1]]` and the diagonal
    /// `[[g,0],[0,g^-1]]` for `g` the least primitive root (Borel), or the
    /// single matrix `a_k` (cyclic cases).
    pub fn new(p: Prime, tag: SubgroupTag) -> Result<SubgroupSpec> {
        let generators = match tag {
            SubgroupTag::Borel => {
                let g = least_primitive_root(p.get());
                vec![
                    FpMat::new(p, [1, 1, 0, 1])?,
                    FpMat {
                        a: g,
                        b: 0,
                        c: 0,
                        d: inv_mod(g, p.get()),
                        p: p.get(),
                    },
                ]
            }
            SubgroupTag::C2 => vec![standard_generators(p)?.0],
            SubgroupTag::C4 => vec![standard_generators(p)?.1],
            SubgroupTag::C6 => vec![standard_generators(p)?.2],
        };
        Ok(SubgroupSpec { tag, generators })
    }
}

/// The three matrices `a2 = -I`, `a4 = [[0,-1],[1,0]]`, `a6 = [[0,-1],[1,1]]`
/// of orders 2, 4 and 6. Orders are re-checked by repeated multiplication;
/// at `p = 2` they collapse (`-I = I`) and the call fails.
pub fn standard_generators(p: Prime) -> Result<(FpMat, FpMat, FpMat)> {
    let a2 = FpMat::new(p, [-1, 0, 0, -1])?;
    let a4 = FpMat::new(p, [0, -1, 1, 0])?;
    let a6 = FpMat::new(p, [0, -1, 1, 1])?;
    if a2.order() != 2 || a4.order() != 4 || a6.order() != 6 {
        return Err(Error::DegenerateGenerators(p.get()));
    }
    Ok((a2, a4, a6))
}

fn least_primitive_root(p: u64) -> u64 {
    if p == 2 {
        return 1;
    }
    let mut factors = Vec::new();
    let mut n = p - 1;
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            factors.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        factors.push(n);
    }
    (2..p)
        .find(|&g| factors.iter().all(|&q| pow_mod(g, (p - 1) / q, p) != 1))
        .expect("every prime has a primitive root")
}

/// Enumerates `G = SL_2(F_p)` (in `O(|G|)`: first column nonzero, second
/// column solved from the determinant) or one of the distinguished
/// subgroups (closure of the generator list). Each element appears once.
pub fn enumerate_group(p: Prime, part: GroupPart, bound: u64) -> Result<Vec<FpMat>> {
    p.check_bound(bound)?;
    match part {
        GroupPart::Full => Ok(enumerate_full(p)),
        GroupPart::Subgroup(tag) => {
            let spec = SubgroupSpec::new(p, tag)?;
            Ok(generate_closure(p, &spec.generators))
        }
    }
}

fn enumerate_full(p: Prime) -> Vec<FpMat> {
    let m = p.get();
    let mut out = Vec::with_capacity((m * (m * m - 1)) as usize);
    for a in 0..m {
        for c in 0..m {
            if a == 0 && c == 0 {
                continue;
            }
            if a != 0 {
                let ia = inv_mod(a, m);
                for b in 0..m {
                    let d = mul_mod((1 + mul_mod(b, c, m)) % m, ia, m);
                    out.push(FpMat { a, b, c, d, p: m });
                }
            } else {
                let b = m - inv_mod(c, m);
                for d in 0..m {
                    out.push(FpMat { a, b, c, d, p: m });
                }
            }
        }
    }
    out
}

fn generate_closure(p: Prime, generators: &[FpMat]) -> Vec<FpMat> {
    use std::collections::HashSet;
    let id = FpMat::identity(p);
    let mut seen: HashSet<FpMat> = HashSet::new();
    seen.insert(id);
    let mut frontier = vec![id];
    while let Some(x) = frontier.pop() {
        for g in generators {
            let y = x.mul(g);
            if seen.insert(y) {
                frontier.push(y);
            }
        }
    }
    let mut out: Vec<FpMat> = seen.into_iter().collect();
    out.sort_unstable();
    out
}

/// The two quadratic polynomials whose roots govern the fixed double cosets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadPoly {
    /// `T^2 + 1`; has roots in `F_p` iff `p ≡ 1 (mod 4)`.
    TSquaredPlusOne,
    /// `T^2 - T + 1`; has roots in `F_p` iff `p ≡ 1 (mod 3)` (for `p > 3`).
    TSquaredMinusTPlusOne,
}

impl QuadPoly {
    fn eval(self, t: u64, p: u64) -> u64 {
        match self {
            QuadPoly::TSquaredPlusOne => (mul_mod(t, t, p) + 1) % p,
            QuadPoly::TSquaredMinusTPlusOne => {
                (mul_mod(t, t, p) + p - t + 1) % p
            }
        }
    }
}

/// Exhaustive root scan; the result has size 0 or 2 for `p > 3`.
pub fn roots_mod_p(poly: QuadPoly, p: Prime) -> Result<std::collections::BTreeSet<u64>> {
    p.require_gt3()?;
    let m = p.get();
    Ok((0..m).filter(|&t| poly.eval(t, m) == 0).collect())
}

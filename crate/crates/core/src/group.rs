//! Finite abelian groups written as products of cyclic groups, together with
//! their subgroups, annihilators, coset sections and Weil-consistent measures.
//!
//! Elements are addressed by their index in the lexicographic enumeration of
//! residue tuples (last factor varies fastest). Sorting indices therefore sorts
//! elements lexicographically, which is what every "smallest representative"
//! rule below relies on.
//!
//! The dual group is represented by the same factor list; the pairing
//! `χ_ξ(x) = exp(2πi Σ_j x_j ξ_j / L_j)` makes the identification explicit.

use std::collections::{HashSet, VecDeque};
use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{GaborError, Result};

/// Default bound on the group order accepted by [`all_subgroups`].
pub const SUBGROUP_ENUMERATION_BOUND: usize = 256;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<usize>")]
pub struct FiniteAbelianGroup {
    factors: Vec<usize>,
    strides: Vec<usize>,
    order: usize,
    exponent: usize,
}

/// A residue tuple; `residues[j]` lives in `[0, L_j)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupElement(pub Vec<usize>);

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|r| r.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

impl TryFrom<Vec<i64>> for FiniteAbelianGroup {
    type Error = GaborError;

    fn try_from(factors: Vec<i64>) -> Result<Self> {
        FiniteAbelianGroup::new(&factors)
    }
}

impl From<FiniteAbelianGroup> for Vec<usize> {
    fn from(g: FiniteAbelianGroup) -> Self {
        g.factors
    }
}

impl fmt::Display for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.factors.iter().map(|l| format!("Z{l}")).collect();
        write!(f, "{}", parts.join("x"))
    }
}

impl FiniteAbelianGroup {
    pub fn new(factors: &[i64]) -> Result<Self> {
        if factors.is_empty() {
            return Err(GaborError::InvalidGroup(
                "at least one cyclic factor is required".into(),
            ));
        }
        if let Some(bad) = factors.iter().find(|&&l| l < 1) {
            return Err(GaborError::InvalidGroup(format!(
                "cyclic factor {bad} is not a positive integer"
            )));
        }
        let factors: Vec<usize> = factors.iter().map(|&l| l as usize).collect();
        let mut strides = vec![1usize; factors.len()];
        for j in (0..factors.len().saturating_sub(1)).rev() {
            strides[j] = strides[j + 1]
                .checked_mul(factors[j + 1])
                .ok_or_else(|| GaborError::InvalidGroup("group order overflows".into()))?;
        }
        let order = strides[0]
            .checked_mul(factors[0])
            .ok_or_else(|| GaborError::InvalidGroup("group order overflows".into()))?;
        let exponent = factors.iter().fold(1, |acc, &l| lcm(acc, l));
        Ok(Self {
            factors,
            strides,
            order,
            exponent,
        })
    }

    pub fn cyclic(order: usize) -> Self {
        Self::new(&[order as i64]).expect("cyclic order must be positive")
    }

    pub fn factors(&self) -> &[usize] {
        &self.factors
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn is_cyclic_presentation(&self) -> bool {
        self.factors.len() == 1
    }

    /// The character group, represented by the same factor list.
    pub fn dual(&self) -> Self {
        self.clone()
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn element(&self, index: usize) -> GroupElement {
        GroupElement(
            self.factors
                .iter()
                .zip(&self.strides)
                .map(|(&l, &s)| (index / s) % l)
                .collect(),
        )
    }

    pub fn index_of(&self, x: &GroupElement) -> Result<usize> {
        if x.0.len() != self.factors.len() {
            return Err(GaborError::Domain(format!(
                "element {x} has {} residues but the group {self} has {} factors",
                x.0.len(),
                self.factors.len()
            )));
        }
        let mut idx = 0;
        for ((&r, &l), &s) in x.0.iter().zip(&self.factors).zip(&self.strides) {
            if r >= l {
                return Err(GaborError::Domain(format!(
                    "residue {r} of element {x} is outside Z{l}"
                )));
            }
            idx += r * s;
        }
        Ok(idx)
    }

    /// Reduces arbitrary integers componentwise and returns the element index.
    pub fn index_reduced(&self, residues: &[i64]) -> Result<usize> {
        if residues.len() != self.factors.len() {
            return Err(GaborError::Domain(format!(
                "expected {} residues for {self}, got {}",
                self.factors.len(),
                residues.len()
            )));
        }
        Ok(residues
            .iter()
            .zip(&self.factors)
            .zip(&self.strides)
            .map(|((&r, &l), &s)| (r.rem_euclid(l as i64) as usize) * s)
            .sum())
    }

    pub fn elements(&self) -> impl Iterator<Item = usize> {
        0..self.order
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        let mut idx = 0;
        for (&l, &s) in self.factors.iter().zip(&self.strides) {
            let r = ((a / s) % l + (b / s) % l) % l;
            idx += r * s;
        }
        idx
    }

    pub fn neg(&self, a: usize) -> usize {
        let mut idx = 0;
        for (&l, &s) in self.factors.iter().zip(&self.strides) {
            let r = (l - (a / s) % l) % l;
            idx += r * s;
        }
        idx
    }

    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }

    /// `k·a` for a non-negative integer `k`.
    pub fn scale(&self, k: usize, a: usize) -> usize {
        let mut idx = 0;
        for (&l, &s) in self.factors.iter().zip(&self.strides) {
            let r = (((a / s) % l) as u128 * k as u128 % l as u128) as usize;
            idx += r * s;
        }
        idx
    }

    /// Phase numerator `r` with `χ_ξ(x) = exp(2πi r / exponent)`.
    pub fn pairing_phase(&self, x: usize, xi: usize) -> usize {
        let e = self.exponent as u128;
        let mut acc: u128 = 0;
        for (&l, &s) in self.factors.iter().zip(&self.strides) {
            let xr = ((x / s) % l) as u128;
            let sr = ((xi / s) % l) as u128;
            acc = (acc + xr * sr % l as u128 * (e / l as u128)) % e;
        }
        acc as usize
    }

    /// Exponent of the group (lcm of the factors); denominator of every phase.
    pub fn exponent(&self) -> usize {
        self.exponent
    }

    /// Exact test for `χ_ξ(x) = 1`.
    pub fn pairs_trivially(&self, x: usize, xi: usize) -> bool {
        self.pairing_phase(x, xi) == 0
    }

    /// `χ_ξ(x)` for element indices.
    pub fn character(&self, x: usize, xi: usize) -> Complex64 {
        unit_root(self.pairing_phase(x, xi), self.exponent)
    }

    pub fn character_value(&self, x: &GroupElement, xi: &GroupElement) -> Result<Complex64> {
        let x = self.index_of(x)?;
        let xi = self.index_of(xi)?;
        Ok(self.character(x, xi))
    }
}

/// `exp(2πi r / n)`, exact at multiples of a quarter turn.
pub(crate) fn unit_root(r: usize, n: usize) -> Complex64 {
    let r = r % n;
    if (4 * r).is_multiple_of(n) {
        return match 4 * r / n {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
    }
    let (s, c) = (2.0 * PI * r as f64 / n as f64).sin_cos();
    Complex64::new(c, s)
}

pub fn make_group(factors: &[i64]) -> Result<FiniteAbelianGroup> {
    FiniteAbelianGroup::new(factors)
}

/// Checked form of the pairing; the dual element must come from a group with
/// the same factor list.
pub fn character_value(
    g: &FiniteAbelianGroup,
    x: &GroupElement,
    xi: &GroupElement,
) -> Result<Complex64> {
    g.character_value(x, xi)
}

/// Subgroup stored as its sorted element indices.
///
/// Two subgroups are equal iff their parents and element lists are equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subgroup {
    parent: FiniteAbelianGroup,
    elems: Vec<usize>,
}

impl Subgroup {
    pub fn trivial(g: &FiniteAbelianGroup) -> Self {
        Self {
            parent: g.clone(),
            elems: vec![0],
        }
    }

    pub fn full(g: &FiniteAbelianGroup) -> Self {
        Self {
            parent: g.clone(),
            elems: g.elements().collect(),
        }
    }

    /// Smallest subgroup containing the given element indices.
    pub fn generated_by(g: &FiniteAbelianGroup, gens: &[usize]) -> Result<Self> {
        if let Some(&bad) = gens.iter().find(|&&x| x >= g.order()) {
            return Err(GaborError::Domain(format!(
                "generator index {bad} is outside {g}"
            )));
        }
        let mut member = vec![false; g.order()];
        member[0] = true;
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for &s in gens {
                let y = g.add(x, s);
                if !member[y] {
                    member[y] = true;
                    queue.push_back(y);
                }
            }
        }
        Ok(Self::from_mask(g, &member))
    }

    /// Validates that `elems` is a subgroup (identity, closure under addition).
    pub fn from_elements(g: &FiniteAbelianGroup, elems: &[usize]) -> Result<Self> {
        let mut member = vec![false; g.order()];
        for &x in elems {
            if x >= g.order() {
                return Err(GaborError::Domain(format!(
                    "element index {x} is outside {g}"
                )));
            }
            member[x] = true;
        }
        if !member[0] {
            return Err(GaborError::Domain("subset does not contain the identity".into()));
        }
        let sub = Self::from_mask(g, &member);
        for &a in &sub.elems {
            for &b in &sub.elems {
                if !member[g.add(a, b)] {
                    return Err(GaborError::Domain(format!(
                        "subset is not closed: {} + {} is missing",
                        g.element(a),
                        g.element(b)
                    )));
                }
            }
        }
        Ok(sub)
    }

    fn from_mask(g: &FiniteAbelianGroup, member: &[bool]) -> Self {
        Self {
            parent: g.clone(),
            elems: member
                .iter()
                .enumerate()
                .filter_map(|(i, &m)| m.then_some(i))
                .collect(),
        }
    }

    pub fn parent(&self) -> &FiniteAbelianGroup {
        &self.parent
    }

    pub fn elements(&self) -> &[usize] {
        &self.elems
    }

    pub fn group_elements(&self) -> Vec<GroupElement> {
        self.elems.iter().map(|&x| self.parent.element(x)).collect()
    }

    pub fn order(&self) -> usize {
        self.elems.len()
    }

    pub fn index(&self) -> usize {
        self.parent.order() / self.order()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.elems.binary_search(&x).is_ok()
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.parent == other.parent && self.elems.iter().all(|&x| other.contains(x))
    }

    pub fn is_trivial(&self) -> bool {
        self.elems.len() == 1
    }

    /// A minimal-looking generating set: greedily adds the smallest element
    /// not yet generated.
    pub fn generators(&self) -> Vec<usize> {
        let g = &self.parent;
        let mut gens = Vec::new();
        let mut current = Subgroup::trivial(g);
        for &x in &self.elems {
            if !current.contains(x) {
                gens.push(x);
                current = Subgroup::generated_by(g, &gens).expect("indices are in range");
            }
        }
        gens
    }

    pub fn as_mask(&self) -> Vec<bool> {
        let mut m = vec![false; self.parent.order()];
        for &x in &self.elems {
            m[x] = true;
        }
        m
    }
}

impl fmt::Display for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self
            .generators()
            .iter()
            .map(|&x| self.parent.element(x).to_string())
            .collect();
        write!(f, "<{}>", gens.join(","))
    }
}

pub fn subgroup_from_generators(g: &FiniteAbelianGroup, gens: &[GroupElement]) -> Result<Subgroup> {
    let idx = gens
        .iter()
        .map(|x| g.index_of(x))
        .collect::<Result<Vec<_>>>()?;
    Subgroup::generated_by(g, &idx)
}

/// Every subgroup, by breadth-first adjunction of single elements starting
/// from the trivial subgroup. Sorted by order, then by element list.
pub fn all_subgroups(g: &FiniteAbelianGroup) -> Result<Vec<Subgroup>> {
    all_subgroups_bounded(g, SUBGROUP_ENUMERATION_BOUND)
}

pub fn all_subgroups_bounded(g: &FiniteAbelianGroup, bound: usize) -> Result<Vec<Subgroup>> {
    if g.order() > bound {
        return Err(GaborError::SizeLimit {
            order: g.order(),
            bound,
        });
    }
    let start = Subgroup::trivial(g);
    let mut seen: HashSet<Vec<usize>> = HashSet::from([start.elems.clone()]);
    let mut found = vec![start.clone()];
    let mut queue = VecDeque::from([start]);
    while let Some(s) = queue.pop_front() {
        let mask = s.as_mask();
        for x in g.elements() {
            if mask[x] {
                continue;
            }
            let mut gens = s.generators();
            gens.push(x);
            let t = Subgroup::generated_by(g, &gens)?;
            if seen.insert(t.elems.clone()) {
                found.push(t.clone());
                queue.push_back(t);
            }
        }
    }
    found.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.elems.cmp(&b.elems)));
    Ok(found)
}

/// `{γ ∈ Ĝ : χ_γ(s) = 1 for all s ∈ S}` by exhaustive exact pairing.
pub fn annihilator(g: &FiniteAbelianGroup, s: &Subgroup) -> Result<Subgroup> {
    if s.parent() != g {
        return Err(GaborError::Domain(format!(
            "subgroup lives in {} but the group is {g}",
            s.parent()
        )));
    }
    let elems: Vec<usize> = g
        .elements()
        .filter(|&gamma| s.elements().iter().all(|&x| g.pairs_trivially(x, gamma)))
        .collect();
    Ok(Subgroup {
        parent: g.dual(),
        elems,
    })
}

/// Coset section: the lexicographically smallest member of every coset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transversal {
    reps: Vec<usize>,
    coset_of: Vec<usize>,
}

impl Transversal {
    pub fn reps(&self) -> &[usize] {
        &self.reps
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    /// Position in `reps` of the coset containing `x`.
    pub fn coset_index(&self, x: usize) -> usize {
        self.coset_of[x]
    }

    pub fn rep_of(&self, x: usize) -> usize {
        self.reps[self.coset_of[x]]
    }
}

pub fn transversal(g: &FiniteAbelianGroup, h: &Subgroup) -> Result<Transversal> {
    if h.parent() != g {
        return Err(GaborError::Domain(format!(
            "subgroup lives in {} but the group is {g}",
            h.parent()
        )));
    }
    let mut coset_of = vec![usize::MAX; g.order()];
    let mut reps = Vec::with_capacity(h.index());
    for x in g.elements() {
        if coset_of[x] != usize::MAX {
            continue;
        }
        let c = reps.len();
        reps.push(x);
        for &y in h.elements() {
            coset_of[g.add(x, y)] = c;
        }
    }
    Ok(Transversal { reps, coset_of })
}

/// Smallest representatives of the cosets of `h` inside `k` (requires `h ≤ k`).
pub fn relative_transversal(k: &Subgroup, h: &Subgroup) -> Result<Vec<usize>> {
    if !h.is_subgroup_of(k) {
        return Err(GaborError::Domain(format!("{h} is not contained in {k}")));
    }
    let full = transversal(k.parent(), h)?;
    let mut seen = vec![false; full.len()];
    let mut reps = Vec::with_capacity(k.order() / h.order());
    for &x in k.elements() {
        let c = full.coset_index(x);
        if !seen[c] {
            seen[c] = true;
            reps.push(x);
        }
    }
    Ok(reps)
}

fn prime_factors(mut n: usize) -> Vec<(usize, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Invariant factors of `K/H`, ascending, each dividing the next.
///
/// The isomorphism type is recovered from the counts
/// `#{k ∈ K/H : p^j·k = 0}` for every prime power dividing `|K/H|`.
pub fn quotient_invariant_factors(
    g: &FiniteAbelianGroup,
    h: &Subgroup,
    k: &Subgroup,
) -> Result<Vec<usize>> {
    if h.parent() != g || k.parent() != g {
        return Err(GaborError::Domain("subgroups must live in the given group".into()));
    }
    let reps = relative_transversal(k, h)?;
    let q = reps.len();
    // exponents[p-index] = partition of the p-primary part, as a multiset of exponents
    let mut per_prime: Vec<(usize, Vec<u32>)> = Vec::new();
    for (p, e) in prime_factors(q) {
        let mut rank_at = Vec::with_capacity(e as usize + 1);
        rank_at.push(0u32);
        let mut pj = 1usize;
        for _ in 1..=e {
            pj *= p;
            let count = reps
                .iter()
                .filter(|&&x| h.contains(g.scale(pj, x)))
                .count();
            // count = p^{Σ_i min(j, e_i)}
            let mut c = count;
            let mut r = 0u32;
            while c > 1 {
                c /= p;
                r += 1;
            }
            rank_at.push(r);
        }
        // number of cyclic p-parts with exponent ≥ j is rank_at[j] - rank_at[j-1]
        let at_least: Vec<u32> = (1..=e as usize).map(|j| rank_at[j] - rank_at[j - 1]).collect();
        let mut exps = Vec::new();
        for j in 1..=e as usize {
            let next = if j < e as usize { at_least[j] } else { 0 };
            for _ in 0..(at_least[j - 1] - next) {
                exps.push(j as u32);
            }
        }
        exps.sort_unstable_by(|a, b| b.cmp(a));
        per_prime.push((p, exps));
    }
    let n_factors = per_prime.iter().map(|(_, e)| e.len()).max().unwrap_or(0);
    let mut factors = vec![1usize; n_factors];
    for (p, exps) in &per_prime {
        for (i, &e) in exps.iter().enumerate() {
            // largest exponents go to the largest invariant factors
            factors[n_factors - 1 - i] *= p.pow(e);
        }
    }
    Ok(factors)
}

/// Per-point measure weights on `G`, `H`, `G/H`, `Ĝ`, `H^⊥` and `Ĝ/H^⊥`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MeasureChain {
    pub w_g: f64,
    pub w_h: f64,
    pub w_g_mod_h: f64,
    pub w_ghat: f64,
    pub w_hperp: f64,
    pub w_ghat_mod_hperp: f64,
}

impl MeasureChain {
    /// Largest relative violation of the two Weil identities.
    pub fn weil_defect(&self) -> f64 {
        let primal = (self.w_g - self.w_h * self.w_g_mod_h).abs() / self.w_g;
        let dual = (self.w_ghat - self.w_hperp * self.w_ghat_mod_hperp).abs() / self.w_ghat;
        primal.max(dual)
    }
}

/// Counting measure on `G` and `H`, Plancherel weight `1/|G|` on `Ĝ`, the
/// rest fixed by Weil's formula.
pub fn weil_chain(g: &FiniteAbelianGroup, h: &Subgroup) -> Result<MeasureChain> {
    if h.parent() != g {
        return Err(GaborError::Domain("subgroup must live in the given group".into()));
    }
    let n = g.order() as f64;
    let m = h.order() as f64;
    Ok(MeasureChain {
        w_g: 1.0,
        w_h: 1.0,
        w_g_mod_h: 1.0,
        w_ghat: 1.0 / n,
        w_hperp: m / n,
        w_ghat_mod_hperp: 1.0 / m,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(factors: &[i64]) -> FiniteAbelianGroup {
        FiniteAbelianGroup::new(factors).unwrap()
    }

    fn cyclic_sub(g: &FiniteAbelianGroup, gen: usize) -> Subgroup {
        Subgroup::generated_by(g, &[gen]).unwrap()
    }

    #[test]
    fn make_group_examples() {
        assert_eq!(z(&[12]).order(), 12);
        let g = z(&[2, 4]);
        assert_eq!(g.order(), 8);
        let elems: Vec<_> = g.elements().map(|i| g.element(i).0).collect();
        assert_eq!(elems[0], vec![0, 0]);
        assert_eq!(elems[1], vec![0, 1]);
        assert_eq!(elems[4], vec![1, 0]);
        assert_eq!(elems[7], vec![1, 3]);
        assert_eq!(z(&[1]).order(), 1);
        assert_eq!(g.dual().factors(), g.factors());
    }

    #[test]
    fn make_group_rejects_non_positive_factors() {
        assert!(matches!(
            FiniteAbelianGroup::new(&[4, 0]),
            Err(GaborError::InvalidGroup(_))
        ));
        assert!(matches!(
            FiniteAbelianGroup::new(&[-3]),
            Err(GaborError::InvalidGroup(_))
        ));
    }

    #[test]
    fn character_examples() {
        let g = z(&[4]);
        let v = g
            .character_value(&GroupElement(vec![1]), &GroupElement(vec![1]))
            .unwrap();
        assert_eq!(v, Complex64::new(0.0, 1.0));
        let g2 = z(&[2]);
        assert_eq!(g2.character(1, 1), Complex64::new(-1.0, 0.0));
        let g3 = z(&[3, 5]);
        for xi in g3.elements() {
            assert_eq!(g3.character(0, xi), Complex64::new(1.0, 0.0));
        }
    }

    #[test]
    fn character_rejects_mismatched_elements() {
        let g = z(&[4, 2]);
        assert!(g
            .character_value(&GroupElement(vec![1]), &GroupElement(vec![1, 1]))
            .is_err());
        assert!(g
            .character_value(&GroupElement(vec![4, 0]), &GroupElement(vec![1, 1]))
            .is_err());
    }

    #[test]
    fn bicharacter_laws_hold() {
        let g = z(&[4, 6]);
        for x in g.elements() {
            for y in g.elements().step_by(5) {
                for xi in g.elements().step_by(7) {
                    let lhs = g.character(g.add(x, y), xi);
                    let rhs = g.character(x, xi) * g.character(y, xi);
                    assert!((lhs - rhs).norm() < 1e-14);
                    let lhs = g.character(x, g.add(xi, y));
                    let rhs = g.character(x, xi) * g.character(x, y);
                    assert!((lhs - rhs).norm() < 1e-14);
                    assert!((g.character(x, xi).norm() - 1.0).abs() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn subgroup_generation_examples() {
        let g = z(&[12]);
        assert_eq!(cyclic_sub(&g, 2).elements(), &[0, 2, 4, 6, 8, 10]);
        assert_eq!(subgroup_from_generators(&g, &[]).unwrap().elements(), &[0]);
        let g = z(&[2, 4]);
        let s = subgroup_from_generators(&g, &[GroupElement(vec![1, 2])]).unwrap();
        assert_eq!(
            s.group_elements(),
            vec![GroupElement(vec![0, 0]), GroupElement(vec![1, 2])]
        );
        assert!(subgroup_from_generators(&g, &[GroupElement(vec![2, 0])]).is_err());
    }

    #[test]
    fn from_elements_validates_closure() {
        let g = z(&[6]);
        assert!(Subgroup::from_elements(&g, &[0, 3]).is_ok());
        assert!(Subgroup::from_elements(&g, &[0, 2]).is_err());
        assert!(Subgroup::from_elements(&g, &[2, 4]).is_err());
    }

    #[test]
    fn all_subgroups_examples() {
        let subs = all_subgroups(&z(&[4])).unwrap();
        let lists: Vec<&[usize]> = subs.iter().map(|s| s.elements()).collect();
        assert_eq!(lists, vec![&[0][..], &[0, 2][..], &[0, 1, 2, 3][..]]);
        assert_eq!(all_subgroups(&z(&[1])).unwrap().len(), 1);
        assert_eq!(all_subgroups(&z(&[2, 2])).unwrap().len(), 5);
        // Z12 has one subgroup per divisor.
        assert_eq!(all_subgroups(&z(&[12])).unwrap().len(), 6);
    }

    #[test]
    fn all_subgroups_respects_bound() {
        assert!(matches!(
            all_subgroups(&z(&[257])),
            Err(GaborError::SizeLimit { order: 257, .. })
        ));
        assert!(all_subgroups_bounded(&z(&[8]), 4).is_err());
    }

    #[test]
    fn annihilator_examples() {
        let g = z(&[12]);
        assert_eq!(annihilator(&g, &cyclic_sub(&g, 2)).unwrap().elements(), &[0, 6]);
        assert_eq!(annihilator(&g, &Subgroup::trivial(&g)).unwrap(), Subgroup::full(&g));
        assert_eq!(annihilator(&g, &Subgroup::full(&g)).unwrap(), Subgroup::trivial(&g));
    }

    #[test]
    fn double_annihilator_and_orders() {
        for factors in [&[12][..], &[2, 4], &[3, 3], &[2, 2, 2], &[4, 6]] {
            let g = z(factors);
            for s in all_subgroups(&g).unwrap() {
                let perp = annihilator(&g, &s).unwrap();
                assert_eq!(s.order() * perp.order(), g.order());
                assert_eq!(annihilator(&g.dual(), &perp).unwrap(), s);
            }
        }
    }

    #[test]
    fn transversal_examples() {
        let g = z(&[4]);
        assert_eq!(transversal(&g, &cyclic_sub(&g, 2)).unwrap().reps(), &[0, 1]);
        assert_eq!(
            transversal(&g, &Subgroup::trivial(&g)).unwrap().reps(),
            &[0, 1, 2, 3]
        );
        assert_eq!(transversal(&g, &Subgroup::full(&g)).unwrap().reps(), &[0]);
    }

    #[test]
    fn transversal_covers_group_exactly_once() {
        for factors in [&[12][..], &[2, 4], &[3, 9]] {
            let g = z(factors);
            for h in all_subgroups(&g).unwrap() {
                let t = transversal(&g, &h).unwrap();
                assert_eq!(t.len() * h.order(), g.order());
                let mut hits = vec![0; g.order()];
                for &r in t.reps() {
                    for &y in h.elements() {
                        hits[g.add(r, y)] += 1;
                    }
                }
                assert!(hits.iter().all(|&c| c == 1));
                for x in g.elements() {
                    let r = t.rep_of(x);
                    assert!(r <= x);
                    assert!(h.contains(g.sub(x, r)));
                }
            }
        }
    }

    #[test]
    fn quotient_invariant_factor_examples() {
        let g = z(&[12]);
        let k = cyclic_sub(&g, 2);
        let h = cyclic_sub(&g, 4);
        assert_eq!(quotient_invariant_factors(&g, &h, &k).unwrap(), vec![2]);
        assert_eq!(quotient_invariant_factors(&g, &k, &k).unwrap(), Vec::<usize>::new());
        let g = z(&[2, 2]);
        assert_eq!(
            quotient_invariant_factors(&g, &Subgroup::trivial(&g), &Subgroup::full(&g)).unwrap(),
            vec![2, 2]
        );
        let g = z(&[12]);
        assert!(quotient_invariant_factors(&g, &k, &h).is_err());
    }

    #[test]
    fn quotient_invariant_factors_recover_presentations() {
        assert_eq!(
            quotient_invariant_factors(&z(&[4, 6]), &Subgroup::trivial(&z(&[4, 6])), &Subgroup::full(&z(&[4, 6])))
                .unwrap(),
            vec![2, 12]
        );
        let g = z(&[3, 9]);
        assert_eq!(
            quotient_invariant_factors(&g, &Subgroup::trivial(&g), &Subgroup::full(&g)).unwrap(),
            vec![3, 9]
        );
        let g = z(&[2, 3]);
        assert_eq!(
            quotient_invariant_factors(&g, &Subgroup::trivial(&g), &Subgroup::full(&g)).unwrap(),
            vec![6]
        );
        for factors in [&[12][..], &[2, 4], &[3, 9], &[2, 2, 4]] {
            let g = z(factors);
            let subs = all_subgroups(&g).unwrap();
            for k in &subs {
                for h in subs.iter().filter(|h| h.is_subgroup_of(k)) {
                    let f = quotient_invariant_factors(&g, h, k).unwrap();
                    assert_eq!(f.iter().product::<usize>(), k.order() / h.order());
                    assert!(f.windows(2).all(|w| w[1] % w[0] == 0));
                    assert!(f.iter().all(|&d| d > 1));
                }
            }
        }
    }

    #[test]
    fn weil_chain_examples() {
        let g = z(&[4]);
        let c = weil_chain(&g, &cyclic_sub(&g, 2)).unwrap();
        assert_eq!(c.w_hperp, 0.5);
        assert_eq!(c.w_ghat, 0.25);
        let c = weil_chain(&g, &Subgroup::full(&g)).unwrap();
        assert_eq!(c.w_hperp, 1.0);
        assert_eq!(c.w_ghat_mod_hperp, 0.25);
        let c = weil_chain(&g, &Subgroup::trivial(&g)).unwrap();
        assert_eq!(c.w_hperp, 0.25);
        assert!(c.weil_defect() < 1e-15);
    }
}

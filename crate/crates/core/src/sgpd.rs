//! Finite semigroupoids: a partial associative product, division, least
//! common multiples, pull-backs, springs, and the collection Q of
//! elementary domain sets with inverse images.
//!
//! The adjoined unit is never stored as an element; operations that may
//! involve it in flank positions take a [`Flank`] value instead.

use std::collections::BTreeMap;
use thiserror::Error;

pub const MAX_SGPD_ELEMENTS: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SgpdError {
    #[error("too many elements: {0} (max {MAX_SGPD_ELEMENTS})")]
    TooManyElements(usize),
    #[error("composition table references unknown element")]
    BadTable,
    #[error("duplicate label: {0}")]
    BadLabel(String),
    #[error("associativity forces a missing composite at ({0}, {1}, {2})")]
    AssocClosureViolation(usize, usize, usize),
    #[error("associativity values disagree at ({0}, {1}, {2})")]
    AssocValueMismatch(usize, usize, usize),
    #[error("right-composition sets violate the composite law at ({0}, {1})")]
    RightSetMismatch(usize, usize),
    #[error("elements {0} and {1} intersect but admit no least common multiple")]
    LcmMissing(usize, usize),
    #[error("elements {0} and {1} have two least common multiples {2}, {3}")]
    LcmAmbiguous(usize, usize, usize, usize),
    #[error("pull-back universality fails for ({0}, {1})")]
    UniversalityFailure(usize, usize),
    #[error("ambient right sets of {0} and {1} overlap without being equal")]
    AmbientNotCategorical(usize, usize),
}

/// An element of the unitized semigroupoid: either the formal unit or an
/// honest element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Flank {
    Unit,
    El(usize),
}

impl Flank {
    pub fn el(self) -> Option<usize> {
        match self {
            Flank::Unit => None,
            Flank::El(f) => Some(f),
        }
    }
}

/// A member of the collection Q: an intersection of right-composition
/// sets, kept together with one witness family realizing it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DomainSet {
    /// Bitmask of the member's elements.
    pub elems: u64,
    /// A finite family F with ⋂_{f∈F} Λ^f equal to `elems`. Empty only
    /// for the empty set when no family realizes it.
    pub witness: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StandingReport {
    pub monic_failures: Vec<usize>,
    pub lcm_failures: Vec<(usize, usize)>,
    pub springs: Vec<usize>,
    pub holds: bool,
}

/// A finite semigroupoid. `truncated` marks a declared depth window of
/// an infinite ambient object: such values satisfy the second and third
/// associativity clauses in full, but the first one only when one of
/// the two outer composites exists (products may fall off the window).
/// Truncations also carry `ambient_right`: for each element, the window
/// of its ambient right-composition set. The ambient object must be
/// categorical (ambient right sets pairwise equal or disjoint), which
/// holds for every supported truncation family; on honest semigroupoids
/// `ambient_right` coincides with the plain right sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Semigroupoid {
    labels: Vec<String>,
    compose: Vec<Option<usize>>,
    /// `right[f]` is the bitmask of Λ^f inside the window.
    right: Vec<u64>,
    /// The window of the ambient Λ^f (equals `right[f]` when not
    /// truncated).
    ambient_right: Vec<u64>,
    truncated: bool,
}

impl Semigroupoid {
    pub fn validate(
        labels: Vec<String>,
        table: &BTreeMap<(usize, usize), usize>,
    ) -> Result<Self, SgpdError> {
        Self::build(labels, table, None)
    }

    /// Validation for declared truncations of infinite objects; see the
    /// type-level comment for the weakened first clause and the ambient
    /// right-set data.
    pub fn validate_truncated(
        labels: Vec<String>,
        table: &BTreeMap<(usize, usize), usize>,
        ambient_right: Vec<u64>,
    ) -> Result<Self, SgpdError> {
        Self::build(labels, table, Some(ambient_right))
    }

    fn build(
        labels: Vec<String>,
        table: &BTreeMap<(usize, usize), usize>,
        ambient: Option<Vec<u64>>,
    ) -> Result<Self, SgpdError> {
        let n = labels.len();
        if n > MAX_SGPD_ELEMENTS {
            return Err(SgpdError::TooManyElements(n));
        }
        let mut seen = std::collections::HashSet::new();
        for l in &labels {
            if !seen.insert(l.clone()) {
                return Err(SgpdError::BadLabel(l.clone()));
            }
        }
        let mut compose = vec![None; n * n];
        for (&(f, g), &h) in table {
            if f >= n || g >= n || h >= n {
                return Err(SgpdError::BadTable);
            }
            compose[f * n + g] = Some(h);
        }
        let mut right = vec![0u64; n];
        for f in 0..n {
            for g in 0..n {
                if compose[f * n + g].is_some() {
                    right[f] |= 1 << g;
                }
            }
        }
        let truncated = ambient.is_some();
        let ambient_right = ambient.unwrap_or_else(|| right.clone());
        let s = Semigroupoid { labels, compose, right, ambient_right, truncated };
        s.check_associativity()?;
        s.check_right_sets()?;
        s.check_ambient()?;
        Ok(s)
    }

    /// Coherence of the declared ambient data: window right sets embed
    /// in the ambient windows, and the ambient members are pairwise
    /// equal or disjoint.
    fn check_ambient(&self) -> Result<(), SgpdError> {
        for f in 0..self.len() {
            if self.right[f] & !self.ambient_right[f] != 0 {
                return Err(SgpdError::RightSetMismatch(f, f));
            }
        }
        for f in 0..self.len() {
            for g in (f + 1)..self.len() {
                let (a, b) = (self.ambient_right[f], self.ambient_right[g]);
                if a & b != 0 && a != b && self.truncated {
                    return Err(SgpdError::AmbientNotCategorical(f, g));
                }
            }
        }
        Ok(())
    }

    fn check_associativity(&self) -> Result<(), SgpdError> {
        let n = self.len();
        for f in 0..n {
            for g in 0..n {
                for h in 0..n {
                    let fg = self.compose(f, g);
                    let gh = self.compose(g, h);
                    let clause1 = fg.is_some() && gh.is_some();
                    let clause2 = fg.is_some() && fg.and_then(|x| self.compose(x, h)).is_some();
                    let clause3 = gh.is_some() && gh.and_then(|x| self.compose(f, x)).is_some();
                    let fires = if self.truncated {
                        clause2 || clause3
                    } else {
                        clause1 || clause2 || clause3
                    };
                    if !fires {
                        continue;
                    }
                    let (fg, gh) = (fg, gh);
                    let all = fg.is_some()
                        && gh.is_some()
                        && fg.map(|x| self.compose(x, h)).flatten().is_some()
                        && gh.map(|x| self.compose(f, x)).flatten().is_some();
                    if !all {
                        return Err(SgpdError::AssocClosureViolation(f, g, h));
                    }
                    let left = self.compose(fg.unwrap(), h).unwrap();
                    let right = self.compose(f, gh.unwrap()).unwrap();
                    if left != right {
                        return Err(SgpdError::AssocValueMismatch(f, g, h));
                    }
                }
            }
        }
        Ok(())
    }

    /// Λ^{fg} = Λ^g for g ∈ Λ^f; truncations only guarantee ⊆.
    fn check_right_sets(&self) -> Result<(), SgpdError> {
        for f in 0..self.len() {
            for g in self.right_set(f) {
                let fg = self.compose(f, g).unwrap();
                let ok = if self.truncated {
                    self.right[fg] & !self.right[g] == 0
                } else {
                    self.right[fg] == self.right[g]
                };
                if !ok {
                    return Err(SgpdError::RightSetMismatch(f, g));
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn is_truncated(&self) -> bool {
        self.truncated
    }

    pub fn label(&self, f: usize) -> &str {
        &self.labels[f]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn compose(&self, f: usize, g: usize) -> Option<usize> {
        self.compose[f * self.len() + g]
    }

    /// Composition in the unitized semigroupoid.
    pub fn compose_flank(&self, a: Flank, b: Flank) -> Option<Flank> {
        match (a, b) {
            (Flank::Unit, x) | (x, Flank::Unit) => Some(x),
            (Flank::El(f), Flank::El(g)) => self.compose(f, g).map(Flank::El),
        }
    }

    pub fn right_mask(&self, f: usize) -> u64 {
        self.right[f]
    }

    /// Λ^f as a sorted list.
    pub fn right_set(&self, f: usize) -> Vec<usize> {
        mask_to_vec(self.right[f])
    }

    pub fn full_mask(&self) -> u64 {
        if self.len() == 64 {
            u64::MAX
        } else {
            (1u64 << self.len()) - 1
        }
    }

    /// f divides g: f = g or fh = g for some element h.
    pub fn divides(&self, f: usize, g: usize) -> bool {
        f == g || self.right_set(f).iter().any(|&h| self.compose(f, h) == Some(g))
    }

    /// Division in the unitized semigroupoid.
    pub fn divides_flank(&self, a: Flank, b: Flank) -> bool {
        match (a, b) {
            (Flank::Unit, _) => true,
            (Flank::El(_), Flank::Unit) => false,
            (Flank::El(f), Flank::El(g)) => self.divides(f, g),
        }
    }

    /// The multiples of f, as a mask.
    pub fn multiples_mask(&self, f: usize) -> u64 {
        let mut m = 1u64 << f;
        for h in self.right_set(f) {
            if let Some(fh) = self.compose(f, h) {
                m |= 1 << fh;
            }
        }
        m
    }

    /// f and g intersect when they admit a common multiple.
    pub fn intersects(&self, f: usize, g: usize) -> bool {
        self.multiples_mask(f) & self.multiples_mask(g) != 0
    }

    pub fn disjoint(&self, f: usize, g: usize) -> bool {
        !self.intersects(f, g)
    }

    /// Monic: fg = fh forces g = h over the unitized semigroupoid
    /// (including fg = f forcing g = 1).
    pub fn is_monic(&self, f: usize) -> bool {
        let gs = self.right_set(f);
        for &g in &gs {
            if self.compose(f, g) == Some(f) {
                return false;
            }
            for &h in &gs {
                if g != h && self.compose(f, g) == self.compose(f, h) {
                    return false;
                }
            }
        }
        true
    }

    /// Epic: gf = hf forces g = h, including gf = f forcing g = 1.
    pub fn is_epic(&self, f: usize) -> bool {
        let gs: Vec<usize> = (0..self.len()).filter(|&g| self.compose(g, f).is_some()).collect();
        for &g in &gs {
            if self.compose(g, f) == Some(f) {
                return false;
            }
            for &h in &gs {
                if g != h && self.compose(g, f) == self.compose(h, f) {
                    return false;
                }
            }
        }
        true
    }

    /// Elements with empty right-composition set.
    pub fn springs(&self) -> Vec<usize> {
        (0..self.len()).filter(|&f| self.right[f] == 0).collect()
    }

    /// Least common multiple under division. `Ok(None)` means the two
    /// elements are disjoint.
    pub fn lcm(&self, f: usize, g: usize) -> Result<Option<usize>, SgpdError> {
        let common = self.multiples_mask(f) & self.multiples_mask(g);
        if common == 0 {
            return Ok(None);
        }
        let cms = mask_to_vec(common);
        let mut least: Option<usize> = None;
        for &m in &cms {
            if cms.iter().all(|&h| self.divides(m, h)) {
                match least {
                    None => least = Some(m),
                    // Mutual division of distinct elements: possible only
                    // when monicity fails.
                    Some(m0) if m0 != m => {
                        return Err(SgpdError::LcmAmbiguous(f, g, m0, m));
                    }
                    _ => {}
                }
            }
        }
        match least {
            Some(m) => Ok(Some(m)),
            None => Err(SgpdError::LcmMissing(f, g)),
        }
    }

    /// lcm over the unitized semigroupoid, together with the mediating
    /// pair (u, v) satisfying lcm = g·u = h·v. `None` when disjoint.
    pub fn lcm_flank(
        &self,
        g: Flank,
        h: Flank,
    ) -> Result<Option<(Flank, Flank, Flank)>, SgpdError> {
        match (g, h) {
            (Flank::Unit, x) => Ok(Some((x, x, Flank::Unit))),
            (x, Flank::Unit) => Ok(Some((x, Flank::Unit, x))),
            (Flank::El(a), Flank::El(b)) => {
                if a == b {
                    return Ok(Some((Flank::El(a), Flank::Unit, Flank::Unit)));
                }
                match self.lcm(a, b)? {
                    None => Ok(None),
                    Some(m) => {
                        let u = self.quotient(a, m)?;
                        let v = self.quotient(b, m)?;
                        Ok(Some((Flank::El(m), u, v)))
                    }
                }
            }
        }
    }

    /// The unique x with f·x = m (given f | m); uniqueness needs f monic.
    fn quotient(&self, f: usize, m: usize) -> Result<Flank, SgpdError> {
        if f == m {
            return Ok(Flank::Unit);
        }
        let mut found = None;
        for h in self.right_set(f) {
            if self.compose(f, h) == Some(m) {
                if let Some(prev) = found {
                    return Err(SgpdError::LcmAmbiguous(f, m, prev, h));
                }
                found = Some(h);
            }
        }
        found.map(Flank::El).ok_or(SgpdError::LcmMissing(f, m))
    }

    /// The pull-back pair (u, v) of an intersecting pair, verified to
    /// satisfy the universal property against every competing pair.
    pub fn pullback(&self, f: usize, g: usize) -> Result<Option<(Flank, Flank)>, SgpdError> {
        let Some((_, u, v)) = self.lcm_flank(Flank::El(f), Flank::El(g))? else {
            return Ok(None);
        };
        // Universality: every (p', q') with f p' = g q' factors as
        // p' = u r, q' = v r for a unique r in the unitized semigroupoid.
        let flanks: Vec<Flank> =
            std::iter::once(Flank::Unit).chain((0..self.len()).map(Flank::El)).collect();
        for &p in &flanks {
            for &q in &flanks {
                let fp = self.compose_flank(Flank::El(f), p);
                let gq = self.compose_flank(Flank::El(g), q);
                if fp.is_none() || fp != gq {
                    continue;
                }
                let mediators: Vec<Flank> = flanks
                    .iter()
                    .copied()
                    .filter(|&r| {
                        self.compose_flank(u, r) == Some(p)
                            && self.compose_flank(v, r) == Some(q)
                    })
                    .collect();
                if mediators.len() != 1 {
                    return Err(SgpdError::UniversalityFailure(f, g));
                }
            }
        }
        Ok(Some((u, v)))
    }

    /// Monicity, lcm existence, and the spring census, plus the derived
    /// impossibility check: a nonempty finite semigroupoid of monic
    /// elements always has springs (iterated right-composition would
    /// otherwise repeat and force a nontrivial right unit).
    pub fn check_standing_hypothesis(&self) -> StandingReport {
        let monic_failures: Vec<usize> =
            (0..self.len()).filter(|&f| !self.is_monic(f)).collect();
        let mut lcm_failures = Vec::new();
        for f in 0..self.len() {
            for g in f..self.len() {
                if self.intersects(f, g) && self.lcm(f, g).is_err() {
                    lcm_failures.push((f, g));
                }
            }
        }
        let springs = self.springs();
        if !self.is_empty() && monic_failures.is_empty() {
            assert!(
                !springs.is_empty(),
                "nonempty monic semigroupoid without springs is impossible"
            );
        }
        let holds = monic_failures.is_empty() && lcm_failures.is_empty();
        StandingReport { monic_failures, lcm_failures, springs, holds }
    }

    /// The collection Q: intersections of right-composition sets, with
    /// the empty set always included. Each member keeps one witness
    /// family. Declared truncations read the ambient right sets, whose
    /// windows are pairwise equal or disjoint, so the closure step adds
    /// nothing there.
    pub fn q_collection(&self) -> Vec<DomainSet> {
        let mut members: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
        members.insert(0, vec![]);
        for f in 0..self.len() {
            members.entry(self.ambient_right[f]).or_insert_with(|| vec![f]);
        }
        loop {
            let snapshot: Vec<(u64, Vec<usize>)> =
                members.iter().map(|(k, v)| (*k, v.clone())).collect();
            let mut changed = false;
            for (m1, w1) in &snapshot {
                for (m2, w2) in &snapshot {
                    let inter = m1 & m2;
                    if !members.contains_key(&inter) {
                        let mut w = w1.clone();
                        w.extend_from_slice(w2);
                        w.sort_unstable();
                        w.dedup();
                        members.insert(inter, w);
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        members
            .into_iter()
            .map(|(elems, witness)| DomainSet { elems, witness })
            .collect()
    }

    /// f⁻¹(A) = { g ∈ Λ^f : fg ∈ A }, with 1⁻¹(A) = A. The result is
    /// cross-checked against the trichotomy: the unit gives A back, an
    /// element of A gives its full right set, anything else gives ∅.
    /// Truncations only satisfy the containment half of the middle
    /// clause (composites may fall off the boundary), and the ∅ clause
    /// in full since it rests on the surviving associativity clauses.
    pub fn inverse_image(&self, f: Flank, a: u64) -> u64 {
        match f {
            Flank::Unit => a,
            Flank::El(f) => {
                let mut out = 0u64;
                for g in self.right_set(f) {
                    if a & (1 << self.compose(f, g).unwrap()) != 0 {
                        out |= 1 << g;
                    }
                }
                let expected = if a & (1 << f) != 0 { self.right[f] } else { 0 };
                if self.truncated {
                    debug_assert_eq!(out & !expected, 0, "inverse image escapes the trichotomy");
                } else {
                    debug_assert_eq!(out, expected, "inverse image trichotomy violated");
                }
                out
            }
        }
    }

    /// The inverse image as the ambient object computes it: the
    /// trichotomy value (the ambient Λ^f window for f ∈ A, else ∅). On
    /// honest semigroupoids this equals [`Self::inverse_image`]; on
    /// declared truncations it extrapolates across the boundary, which
    /// is the reading under which the triple product reproduces the
    /// ambient object's order on the window.
    pub fn ambient_inverse_image(&self, f: Flank, a: u64) -> u64 {
        match f {
            Flank::Unit => a,
            Flank::El(f) => {
                let tri = if a & (1 << f) != 0 { self.ambient_right[f] } else { 0 };
                if !self.truncated {
                    debug_assert_eq!(tri, self.inverse_image(Flank::El(f), a));
                }
                tri
            }
        }
    }

    pub fn ambient_right_mask(&self, f: usize) -> u64 {
        self.ambient_right[f]
    }

    /// The ambient Λ^f window for a flank, with the unit given the full
    /// element set.
    pub fn ambient_right_mask_flank(&self, f: Flank) -> u64 {
        match f {
            Flank::Unit => self.full_mask(),
            Flank::El(f) => self.ambient_right[f],
        }
    }
}

pub fn mask_to_vec(mask: u64) -> Vec<usize> {
    (0..64).filter(|&i| mask & (1 << i) != 0).collect()
}

pub fn vec_to_mask(v: &[usize]) -> u64 {
    v.iter().fold(0, |m, &i| m | (1 << i))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn sg3() -> Semigroupoid {
        corpus::sg3()
    }

    #[test]
    fn sg3_validates() {
        let s = sg3();
        assert_eq!(s.len(), 3);
        assert_eq!(s.compose(0, 1), Some(2));
    }

    #[test]
    fn missing_composite_rejected() {
        // ab and bc defined but (ab)c missing.
        let mut t = BTreeMap::new();
        t.insert((0, 1), 2);
        t.insert((1, 2), 0);
        let err = Semigroupoid::validate(
            vec!["a".into(), "b".into(), "c".into()],
            &t,
        )
        .unwrap_err();
        assert!(matches!(err, SgpdError::AssocClosureViolation(0, 1, 2)));
    }

    #[test]
    fn division() {
        let s = sg3();
        for f in 0..3 {
            assert!(s.divides(f, f));
        }
        assert!(s.divides(0, 2));
        assert!(!s.divides(1, 2));
    }

    #[test]
    fn monic_and_epic() {
        let s = sg3();
        for f in 0..3 {
            assert!(s.is_monic(f));
            assert!(s.is_epic(f));
        }
        // ab = a breaks monicity of a (bb = b is forced by closure).
        let mut t = BTreeMap::new();
        t.insert((0, 1), 0);
        t.insert((1, 1), 1);
        let s2 = Semigroupoid::validate(vec!["a".into(), "b".into()], &t).unwrap();
        assert!(!s2.is_monic(0));
        assert!(!s2.is_monic(1));
    }

    #[test]
    fn springs_and_standing_hypothesis() {
        let s = sg3();
        assert_eq!(s.springs(), vec![1, 2]);
        let report = s.check_standing_hypothesis();
        assert!(report.holds);
        assert_eq!(report.springs, vec![1, 2]);
        let one = Semigroupoid::validate(vec!["x".into()], &BTreeMap::new()).unwrap();
        assert_eq!(one.springs(), vec![0]);
    }

    #[test]
    fn lcm_examples() {
        let s = sg3();
        assert_eq!(s.lcm(0, 0).unwrap(), Some(0));
        assert_eq!(s.lcm(0, 2).unwrap(), Some(2));
        assert_eq!(s.lcm(0, 1).unwrap(), None);
        let grid = corpus::grid_truncation(2, 2);
        let b = grid.index_of("(1,0)").unwrap();
        let r = grid.index_of("(0,1)").unwrap();
        let br = grid.index_of("(1,1)").unwrap();
        assert_eq!(grid.lcm(b, r).unwrap(), Some(br));
    }

    #[test]
    fn pullback_examples() {
        let s = sg3();
        // a | c, so the pull-back of (a, c) is (b, 1).
        assert_eq!(s.pullback(0, 2).unwrap(), Some((Flank::El(1), Flank::Unit)));
        assert_eq!(s.pullback(0, 1).unwrap(), None);
        let grid = corpus::grid_truncation(2, 2);
        let b = grid.index_of("(1,0)").unwrap();
        let r = grid.index_of("(0,1)").unwrap();
        let pb = grid.pullback(b, r).unwrap().unwrap();
        assert_eq!(pb, (Flank::El(r), Flank::El(b)));
    }

    #[test]
    fn q_collection_and_inverse_images() {
        let s = sg3();
        let q = s.q_collection();
        let masks: Vec<u64> = q.iter().map(|d| d.elems).collect();
        assert_eq!(masks, vec![0, 1 << 1]);
        let a_set = 1u64 << 1; // {b}
        assert_eq!(s.inverse_image(Flank::Unit, a_set), a_set);
        // a ∉ {b}, so a⁻¹({b}) = ∅.
        assert_eq!(s.inverse_image(Flank::El(0), a_set), 0);
        // b ∈ {b} and Λ^b = ∅: both clauses agree on ∅.
        assert_eq!(s.inverse_image(Flank::El(1), a_set), 0);
    }

    #[test]
    fn truncated_free_monoid_validates_as_truncation() {
        let t2 = corpus::free_monoid_truncation(2, 2);
        assert_eq!(t2.len(), 6);
        assert!(t2.is_truncated());
        assert_eq!(t2.springs().len(), 4); // the length-2 words
        assert!(t2.check_standing_hypothesis().holds);
    }

    #[test]
    fn division_is_transitive_on_corpus() {
        for s in corpus::semigroupoid_corpus(12345) {
            let n = s.len();
            for f in 0..n {
                for g in 0..n {
                    if !s.divides(f, g) {
                        continue;
                    }
                    for h in 0..n {
                        if s.divides(g, h) {
                            assert!(s.divides(f, h));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn mutual_division_is_equality_under_monicity() {
        for s in corpus::semigroupoid_corpus(999) {
            if !s.check_standing_hypothesis().monic_failures.is_empty() {
                continue;
            }
            for f in 0..s.len() {
                for g in 0..s.len() {
                    if s.divides(f, g) && s.divides(g, f) {
                        assert_eq!(f, g);
                    }
                }
            }
        }
    }
}

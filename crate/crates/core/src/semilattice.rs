//! Finite meet-semilattices with zero: filters, ultrafilters, characters,
//! covers, and the tight spectrum.
//!
//! All sets of elements are represented as `u64` bitmasks over element
//! indices, which caps instances at 64 elements; at desk scale this is
//! plenty and keeps the cover enumerations cheap.

use std::collections::{BTreeSet, HashMap, HashSet};
use thiserror::Error;

/// Hard cap imposed by the bitmask representation.
pub const MAX_SEMILATTICE_ELEMENTS: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SemilatticeError {
    #[error("meet table is not square or not total ({0} rows for {1} elements)")]
    BadTable(usize, usize),
    #[error("too many elements: {0} (max {MAX_SEMILATTICE_ELEMENTS})")]
    TooManyElements(usize),
    #[error("meet not idempotent at {0}")]
    NotIdempotent(usize),
    #[error("meet not commutative at ({0}, {1})")]
    NotCommutative(usize, usize),
    #[error("meet not associative at ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),
    #[error("zero is not absorbing: meet(zero, {0}) != zero")]
    ZeroNotAbsorbing(usize),
    #[error("induced order is not a partial order: antisymmetry fails at ({0}, {1})")]
    NotPartialOrder(usize, usize),
    #[error("pair ({0}, {1}) has no meet under the given order")]
    MeetMissing(usize, usize),
    #[error("zero is not the smallest element: {0} is not above zero")]
    ZeroNotMinimum(usize),
    #[error("cover candidate is not a subset of the target family")]
    NotSubset,
    #[error("density only defined for y <= x; got ({0}, {1})")]
    OrderViolation(usize, usize),
    #[error("tight characters and ultrafilter characters disagree (implementation bug)")]
    TightnessUltraMismatch,
    #[error("duplicate or unknown label: {0}")]
    BadLabel(String),
}

/// A finite meet-semilattice with a distinguished zero (smallest) element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Semilattice {
    labels: Vec<String>,
    /// `meet[i * n + j]` is the index of `i ∧ j`.
    meet: Vec<usize>,
    zero: usize,
    /// `up[i]` is the bitmask of `{ x : i ≤ x }`.
    up: Vec<u64>,
    /// `down[i]` is the bitmask of `{ x : x ≤ i }`.
    down: Vec<u64>,
    /// `meets_mask[i]` is the bitmask of `{ x : x ∧ i ≠ 0 }`.
    meets_mask: Vec<u64>,
}

/// A filter, stored by its principal generator (finite filters are
/// up-sets of their minimum). The support is materialized on demand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Filter {
    pub min: usize,
}

/// A character of the semilattice, i.e. a nonzero multiplicative map to
/// `{0,1}` killing zero. Characters and filters determine each other via
/// supports, so this is the same datum as [`Filter`] under another view.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Character {
    pub min: usize,
}

impl Filter {
    pub fn character(self) -> Character {
        Character { min: self.min }
    }
}

impl Character {
    pub fn filter(self) -> Filter {
        Filter { min: self.min }
    }

    /// Evaluate the character at `x`.
    pub fn value(self, lat: &Semilattice, x: usize) -> bool {
        lat.leq(self.min, x)
    }
}

/// Which formulation of the tightness condition to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TightMode {
    /// Quantify over all pairs of finite subsets and all minimal covers
    /// of the relative sets.
    Full,
    /// Quantify only over covers of single elements, valid whenever the
    /// character is nonzero or the lattice has no finite cover.
    Reduced,
}

impl Semilattice {
    /// Validate a meet table.
    pub fn from_meet_table(
        labels: Vec<String>,
        meet: Vec<Vec<usize>>,
        zero: usize,
    ) -> Result<Self, SemilatticeError> {
        let n = labels.len();
        if n > MAX_SEMILATTICE_ELEMENTS {
            return Err(SemilatticeError::TooManyElements(n));
        }
        if meet.len() != n || meet.iter().any(|r| r.len() != n) {
            return Err(SemilatticeError::BadTable(meet.len(), n));
        }
        let mut flat = vec![0usize; n * n];
        for i in 0..n {
            for j in 0..n {
                if meet[i][j] >= n {
                    return Err(SemilatticeError::BadTable(meet[i][j], n));
                }
                flat[i * n + j] = meet[i][j];
            }
        }
        Self::build(labels, flat, zero)
    }

    /// Validate a partial order given as `leq` pairs; meets are computed
    /// and must exist for every pair.
    pub fn from_leq_pairs(
        labels: Vec<String>,
        leq_pairs: &[(usize, usize)],
        zero: usize,
    ) -> Result<Self, SemilatticeError> {
        let n = labels.len();
        if n > MAX_SEMILATTICE_ELEMENTS {
            return Err(SemilatticeError::TooManyElements(n));
        }
        // Reflexive-transitive closure of the given relation.
        let mut leq = vec![false; n * n];
        for i in 0..n {
            leq[i * n + i] = true;
        }
        for &(a, b) in leq_pairs {
            if a >= n || b >= n {
                return Err(SemilatticeError::BadTable(a.max(b), n));
            }
            leq[a * n + b] = true;
        }
        loop {
            let mut changed = false;
            for i in 0..n {
                for j in 0..n {
                    if leq[i * n + j] {
                        for k in 0..n {
                            if leq[j * n + k] && !leq[i * n + k] {
                                leq[i * n + k] = true;
                                changed = true;
                            }
                        }
                    }
                }
            }
            if !changed {
                break;
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && leq[i * n + j] && leq[j * n + i] {
                    return Err(SemilatticeError::NotPartialOrder(i, j));
                }
            }
        }
        for i in 0..n {
            if !leq[zero * n + i] {
                return Err(SemilatticeError::ZeroNotMinimum(i));
            }
        }
        // Compute meets as greatest lower bounds.
        let mut flat = vec![0usize; n * n];
        for i in 0..n {
            for j in 0..n {
                let lower: Vec<usize> =
                    (0..n).filter(|&z| leq[z * n + i] && leq[z * n + j]).collect();
                let mut best = None;
                for &z in &lower {
                    if lower.iter().all(|&w| leq[w * n + z]) {
                        best = Some(z);
                        break;
                    }
                }
                match best {
                    Some(z) => flat[i * n + j] = z,
                    None => return Err(SemilatticeError::MeetMissing(i, j)),
                }
            }
        }
        Self::build(labels, flat, zero)
    }

    fn build(labels: Vec<String>, meet: Vec<usize>, zero: usize) -> Result<Self, SemilatticeError> {
        let n = labels.len();
        let mut seen = HashSet::new();
        for l in &labels {
            if !seen.insert(l.clone()) {
                return Err(SemilatticeError::BadLabel(l.clone()));
            }
        }
        let m = |i: usize, j: usize| meet[i * n + j];
        for i in 0..n {
            if m(i, i) != i {
                return Err(SemilatticeError::NotIdempotent(i));
            }
        }
        for i in 0..n {
            for j in 0..n {
                if m(i, j) != m(j, i) {
                    return Err(SemilatticeError::NotCommutative(i, j));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if m(m(i, j), k) != m(i, m(j, k)) {
                        return Err(SemilatticeError::NotAssociative(i, j, k));
                    }
                }
            }
        }
        for i in 0..n {
            if m(zero, i) != zero {
                return Err(SemilatticeError::ZeroNotAbsorbing(i));
            }
        }
        // Induced order x ≤ y ⟺ x ∧ y = x; antisymmetry is automatic from
        // the table, but cross-check anyway since ingestion is untrusted.
        for i in 0..n {
            for j in 0..n {
                if i != j && m(i, j) == i && m(j, i) == j {
                    return Err(SemilatticeError::NotPartialOrder(i, j));
                }
            }
        }
        let mut up = vec![0u64; n];
        let mut down = vec![0u64; n];
        let mut meets_mask = vec![0u64; n];
        for i in 0..n {
            for j in 0..n {
                if m(i, j) == i {
                    up[i] |= 1 << j;
                    down[j] |= 1 << i;
                }
                if m(i, j) != zero {
                    meets_mask[i] |= 1 << j;
                }
            }
        }
        Ok(Semilattice { labels, meet, zero, up, down, meets_mask })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn zero(&self) -> usize {
        self.zero
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn meet(&self, x: usize, y: usize) -> usize {
        self.meet[x * self.len() + y]
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.meet(x, y) == x
    }

    /// `x ⋒ y`: some nonzero element lies below both.
    pub fn intersects(&self, x: usize, y: usize) -> bool {
        self.meet(x, y) != self.zero
    }

    pub fn disjoint(&self, x: usize, y: usize) -> bool {
        !self.intersects(x, y)
    }

    fn full_mask(&self) -> u64 {
        if self.len() == 64 {
            u64::MAX
        } else {
            (1u64 << self.len()) - 1
        }
    }

    fn mask_to_vec(mask: u64) -> Vec<usize> {
        (0..64).filter(|&i| mask & (1 << i) != 0).collect()
    }

    /// Bitmask form of the relative set `E^{X,Y}`; always contains zero.
    pub fn relative_set_mask(&self, xs: &[usize], ys: &[usize]) -> u64 {
        let mut m = self.full_mask();
        for &x in xs {
            m &= self.down[x];
        }
        for &y in ys {
            m &= !self.meets_mask[y];
        }
        m | (1 << self.zero)
    }

    /// `E^{X,Y} = { z : z ≤ x ∀x∈X, z ⊥ y ∀y∈Y }`, zero included.
    pub fn relative_set(&self, xs: &[usize], ys: &[usize]) -> Vec<usize> {
        Self::mask_to_vec(self.relative_set_mask(xs, ys))
    }

    /// Is `z_set` a cover for the family `f_set`: does every nonzero
    /// member of `f_set` intersect some member of `z_set`?
    pub fn is_cover(&self, z_set: &[usize], f_set: &[usize]) -> Result<bool, SemilatticeError> {
        let f_mask: u64 = f_set.iter().map(|&i| 1u64 << i).sum();
        for &z in z_set {
            if f_mask & (1 << z) == 0 {
                return Err(SemilatticeError::NotSubset);
            }
        }
        Ok(self.covers_mask(
            z_set.iter().map(|&i| 1u64 << i).fold(0, |a, b| a | b),
            f_mask,
        ))
    }

    /// Is `z_set` a cover for the down-set of `y`?
    pub fn is_cover_of_element(
        &self,
        z_set: &[usize],
        y: usize,
    ) -> Result<bool, SemilatticeError> {
        self.is_cover(z_set, &Self::mask_to_vec(self.down[y]))
    }

    fn covers_mask(&self, z_mask: u64, f_mask: u64) -> bool {
        let mut targets = f_mask & !(1 << self.zero);
        while targets != 0 {
            let x = targets.trailing_zeros() as usize;
            targets &= targets - 1;
            if self.meets_mask[x] & z_mask == 0 {
                return false;
            }
        }
        true
    }

    /// All filters. In a finite semilattice every filter is principal, so
    /// these are exactly the up-sets of nonzero elements.
    pub fn enumerate_filters(&self) -> Vec<Filter> {
        (0..self.len()).filter(|&i| i != self.zero).map(|min| Filter { min }).collect()
    }

    /// Support of a filter as a sorted element list.
    pub fn filter_support(&self, f: Filter) -> Vec<usize> {
        Self::mask_to_vec(self.up[f.min])
    }

    /// Ultrafilter test: the filter contains every element intersecting
    /// all of it. Cross-checked against maximality under inclusion; a
    /// disagreement would be an implementation bug.
    pub fn is_ultrafilter(&self, f: Filter) -> bool {
        let support = self.up[f.min];
        let mut by_criterium = true;
        for y in 0..self.len() {
            if y == self.zero || support & (1 << y) != 0 {
                continue;
            }
            // y intersects every element of the filter iff it intersects
            // the minimum.
            if self.intersects(y, f.min) {
                by_criterium = false;
                break;
            }
        }
        let by_maximality = !self
            .enumerate_filters()
            .iter()
            .any(|g| g.min != f.min && self.up[g.min] & support == support);
        assert_eq!(
            by_criterium, by_maximality,
            "ultrafilter criterium and maximality disagree"
        );
        by_criterium
    }

    /// All characters (one per filter).
    pub fn characters(&self) -> Vec<Character> {
        self.enumerate_filters().into_iter().map(Filter::character).collect()
    }

    /// Enumerate the inclusion-minimal covers of the nonzero part of
    /// `f_mask`, each returned as a bitmask. The empty family covers an
    /// empty (or zero-only) target.
    pub fn minimal_covers(&self, f_mask: u64) -> Vec<u64> {
        let targets = f_mask & !(1 << self.zero);
        let candidates: Vec<usize> = Self::mask_to_vec(targets);
        let mut out: Vec<u64> = Vec::new();
        // Branch on the first uncovered target; post-filter to minimal sets.
        fn rec(
            lat: &Semilattice,
            candidates: &[usize],
            targets: u64,
            chosen: u64,
            covered: u64,
            out: &mut Vec<u64>,
        ) {
            if targets & !covered == 0 {
                out.push(chosen);
                return;
            }
            let first = (targets & !covered).trailing_zeros() as usize;
            for &z in candidates {
                if chosen & (1 << z) != 0 {
                    continue;
                }
                if lat.meets_mask[first] & (1 << z) != 0 {
                    rec(lat, candidates, targets, chosen | (1 << z), covered | lat.meets_mask[z], out);
                }
            }
        }
        rec(self, &candidates, targets, 0, 0, &mut out);
        out.sort_unstable();
        out.dedup();
        out.retain(|&z| {
            let mut zs = z;
            while zs != 0 {
                let e = zs.trailing_zeros() as usize;
                zs &= zs - 1;
                let without = z & !(1u64 << e);
                if self.covers_mask(without, targets | (1 << self.zero)) {
                    return false;
                }
            }
            true
        });
        out
    }

    /// The distinct relative-set masks `E^{X,Y}` that arise for any finite
    /// `X, Y ⊆ E`, with `X` collapsed to the singleton of its meet.
    fn achievable_relative_masks(&self) -> Vec<u64> {
        // Closure of { meets_mask[y] } under union gives every possible
        // "excluded" region stemming from a finite Y.
        let mut unions: BTreeSet<u64> = BTreeSet::new();
        unions.insert(0);
        let mut frontier = vec![0u64];
        while let Some(u) = frontier.pop() {
            for y in 0..self.len() {
                if y == self.zero {
                    continue;
                }
                let nu = u | self.meets_mask[y];
                if unions.insert(nu) {
                    frontier.push(nu);
                }
            }
        }
        let mut masks = BTreeSet::new();
        for &u in &unions {
            let base = self.full_mask() & !u;
            masks.insert(base | (1 << self.zero));
            for x in 0..self.len() {
                masks.insert((self.down[x] & !u) | (1 << self.zero));
            }
        }
        masks.into_iter().collect()
    }

    /// Tightness of a character (full or reduced formulation). The two
    /// must agree on every character; this is exercised by tests rather
    /// than asserted here, so that the equivalence stays observable.
    pub fn is_tight_character(&self, ch: Character, mode: TightMode) -> bool {
        match mode {
            TightMode::Full => {
                let g = ch.min;
                for m in self.achievable_relative_masks() {
                    if m & (1 << g) == 0 {
                        // The right-hand side of the tightness inequality
                        // is 0 at this (X, Y), so nothing to check.
                        continue;
                    }
                    for z in self.minimal_covers(m) {
                        if z & self.up[g] == 0 {
                            return false;
                        }
                    }
                }
                true
            }
            TightMode::Reduced => {
                // Valid when some finite set has supremum 1 under the
                // character (always true: characters are nonzero) or when
                // the lattice has no finite cover at all.
                let nonzero_somewhere = (0..self.len()).any(|x| ch.value(self, x));
                let lattice_has_cover =
                    !self.minimal_covers(self.full_mask()).is_empty();
                if !nonzero_somewhere && lattice_has_cover {
                    // Not reachable for genuine characters; fall back to
                    // the full formulation for safety.
                    return self.is_tight_character(ch, TightMode::Full);
                }
                let g = ch.min;
                for x in 0..self.len() {
                    if x == self.zero || !ch.value(self, x) {
                        continue;
                    }
                    for z in self.minimal_covers(self.down[x]) {
                        if z & self.up[g] == 0 {
                            return false;
                        }
                    }
                }
                true
            }
        }
    }

    /// All tight characters. In the finite case the tight spectrum must
    /// coincide with the set of ultrafilter characters; both sides are
    /// computed independently and a mismatch is reported as an error
    /// (it would signal an implementation bug, never valid data).
    pub fn tight_spectrum(&self) -> Result<Vec<Character>, SemilatticeError> {
        let tight: Vec<Character> = self
            .characters()
            .into_iter()
            .filter(|&c| self.is_tight_character(c, TightMode::Full))
            .collect();
        let ultra: Vec<Character> = self
            .enumerate_filters()
            .into_iter()
            .filter(|&f| self.is_ultrafilter(f))
            .map(Filter::character)
            .collect();
        if tight != ultra {
            return Err(SemilatticeError::TightnessUltraMismatch);
        }
        Ok(tight)
    }

    /// Is `y` dense in `x`: no nonzero element below `x` is disjoint
    /// from `y`.
    pub fn is_dense(&self, y: usize, x: usize) -> Result<bool, SemilatticeError> {
        if !self.leq(y, x) {
            return Err(SemilatticeError::OrderViolation(y, x));
        }
        Ok(self.relative_set_mask(&[x], &[y]) == 1 << self.zero)
    }

    /// Atoms: minimal nonzero elements.
    pub fn atoms(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&x| x != self.zero && self.down[x] == (1 << x) | (1 << self.zero))
            .collect()
    }

    /// Canonical form of the meet table under relabeling, used to dedupe
    /// isomorphic instances in corpus generation. Zero is kept fixed.
    pub fn canonical_key(&self) -> Vec<u8> {
        let n = self.len();
        let mut best: Option<Vec<u8>> = None;
        let mut others: Vec<usize> = (0..n).filter(|&i| i != self.zero).collect();
        permute(&mut others, 0, &mut |perm| {
            // perm maps "new index - offset" to old index; rebuild table.
            let mut old_of_new = vec![self.zero];
            old_of_new.extend_from_slice(perm);
            let mut new_of_old = vec![0usize; n];
            for (new, &old) in old_of_new.iter().enumerate() {
                new_of_old[old] = new;
            }
            let mut key = Vec::with_capacity(n * n);
            for i in 0..n {
                for j in 0..n {
                    key.push(new_of_old[self.meet(old_of_new[i], old_of_new[j])] as u8);
                }
            }
            if best.as_ref().map_or(true, |b| key < *b) {
                best = Some(key);
            }
        });
        best.unwrap_or_default()
    }
}

fn permute(items: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == items.len() {
        visit(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, visit);
        items.swap(k, i);
    }
}

/// A representation of a semilattice in the Boolean algebra of subsets of
/// a finite carrier: multiplicative, zero-killing. Tightness is the same
/// cover-join condition as for characters, evaluated in set algebra.
pub fn is_tight_set_representation(
    lat: &Semilattice,
    carrier_size: usize,
    beta: &dyn Fn(usize) -> u64,
) -> bool {
    let full: u64 = if carrier_size == 64 { u64::MAX } else { (1u64 << carrier_size) - 1 };
    // X is collapsed to a single element (or none); Y runs over all
    // subsets via the union-closure of excluded regions, exactly as in
    // the character case but with subset-valued beta.
    let mut mask_reps: HashMap<u64, (Option<usize>, Vec<usize>)> = HashMap::new();
    let mut unions: BTreeSet<(u64, Vec<usize>)> = BTreeSet::new();
    unions.insert((0, vec![]));
    let mut frontier = vec![(0u64, Vec::new())];
    while let Some((u, ys)) = frontier.pop() {
        for y in 0..lat.len() {
            if y == lat.zero() {
                continue;
            }
            let nu = u | lat.meets_mask[y];
            if nu != u {
                let mut nys = ys.clone();
                nys.push(y);
                if unions.insert((nu, nys.clone())) {
                    frontier.push((nu, nys));
                }
            }
        }
    }
    for (u, ys) in unions {
        let candidates: Vec<(Option<usize>, u64)> = std::iter::once((None, lat.full_mask()))
            .chain((0..lat.len()).map(|x| (Some(x), lat.down[x])))
            .collect();
        for (x, base) in candidates {
            let m = (base & !u) | (1 << lat.zero());
            mask_reps.entry(m).or_insert((x, ys.clone()));
        }
    }
    for (m, (x, ys)) in mask_reps {
        let mut rhs = full;
        if let Some(x) = x {
            rhs &= beta(x);
        }
        for &y in &ys {
            rhs &= full & !beta(y);
        }
        if rhs == 0 {
            continue;
        }
        for z_mask in lat.minimal_covers(m) {
            let mut lhs = 0u64;
            let mut zs = z_mask;
            while zs != 0 {
                let z = zs.trailing_zeros() as usize;
                zs &= zs - 1;
                lhs |= beta(z);
            }
            if lhs & rhs != rhs {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    /// The three-element chain 0 < h < t.
    pub fn chain3() -> Semilattice {
        Semilattice::from_leq_pairs(
            vec!["0".into(), "h".into(), "t".into()],
            &[(0, 1), (1, 2)],
            0,
        )
        .unwrap()
    }

    /// Boolean algebra on two atoms a, b: {0, a, b, 1}.
    pub fn b4() -> Semilattice {
        Semilattice::from_leq_pairs(
            vec!["0".into(), "a".into(), "b".into(), "1".into()],
            &[(0, 1), (0, 2), (1, 3), (2, 3)],
            0,
        )
        .unwrap()
    }

    /// Power-set lattice of an n-element set.
    pub fn powerset(n: usize) -> Semilattice {
        let size = 1usize << n;
        let labels: Vec<String> = (0..size).map(|m| format!("s{m}")).collect();
        let meet: Vec<Vec<usize>> =
            (0..size).map(|i| (0..size).map(|j| i & j).collect()).collect();
        Semilattice::from_meet_table(labels, meet, 0).unwrap()
    }

    #[test]
    fn chain_is_valid_and_one_element_degenerate() {
        chain3();
        let one = Semilattice::from_meet_table(vec!["0".into()], vec![vec![0]], 0).unwrap();
        assert!(one.enumerate_filters().is_empty());
        assert!(one.tight_spectrum().unwrap().is_empty());
    }

    #[test]
    fn non_commutative_table_rejected() {
        let err = Semilattice::from_meet_table(
            vec!["0".into(), "a".into(), "b".into()],
            vec![vec![0, 0, 0], vec![0, 1, 1], vec![0, 2, 2]],
            0,
        )
        .unwrap_err();
        assert!(matches!(err, SemilatticeError::NotCommutative(1, 2)));
    }

    #[test]
    fn intersects_examples() {
        let b = b4();
        let (a, bb) = (1, 2);
        assert!(!b.intersects(a, bb));
        for x in 0..b.len() {
            assert!(!b.intersects(x, b.zero()));
        }
        let c = chain3();
        assert!(c.intersects(1, 2));
    }

    #[test]
    fn relative_set_examples() {
        let c = chain3();
        assert_eq!(c.relative_set(&[], &[]), vec![0, 1, 2]);
        assert_eq!(c.relative_set(&[2], &[1]), vec![0]);
        let b = b4();
        assert_eq!(b.relative_set(&[3], &[1]), vec![0, 2]);
    }

    #[test]
    fn cover_examples() {
        let c = chain3();
        assert!(c.is_cover_of_element(&[1], 2).unwrap());
        let b = b4();
        let all: Vec<usize> = (0..4).collect();
        assert!(!b.is_cover(&[1], &all).unwrap());
        assert!(b.is_cover(&[1, 2, 3], &all).unwrap());
        assert!(matches!(b.is_cover(&[1], &[2, 3]), Err(SemilatticeError::NotSubset)));
    }

    #[test]
    fn filters_and_ultrafilters() {
        let c = chain3();
        let fs = c.enumerate_filters();
        assert_eq!(fs.len(), 2);
        assert_eq!(c.filter_support(Filter { min: 1 }), vec![1, 2]);
        assert!(c.is_ultrafilter(Filter { min: 1 }));
        assert!(!c.is_ultrafilter(Filter { min: 2 }));
        let b = b4();
        assert_eq!(b.enumerate_filters().len(), 3);
        assert!(b.is_ultrafilter(Filter { min: 1 }));
        assert!(b.is_ultrafilter(Filter { min: 2 }));
        assert!(!b.is_ultrafilter(Filter { min: 3 }));
    }

    #[test]
    fn tightness_examples() {
        let c = chain3();
        assert!(c.is_tight_character(Character { min: 1 }, TightMode::Full));
        assert!(!c.is_tight_character(Character { min: 2 }, TightMode::Full));
        assert_eq!(c.tight_spectrum().unwrap(), vec![Character { min: 1 }]);

        // Power sets: exactly the atom characters are tight.
        for n in 1..=4 {
            let p = powerset(n);
            let tight = p.tight_spectrum().unwrap();
            assert_eq!(tight.len(), n);
            let atoms: Vec<usize> = p.atoms();
            assert_eq!(tight.iter().map(|c| c.min).collect::<Vec<_>>(), atoms);
        }
    }

    #[test]
    fn reduced_equals_full_on_small_examples() {
        for lat in [chain3(), b4(), powerset(3)] {
            for ch in lat.characters() {
                assert_eq!(
                    lat.is_tight_character(ch, TightMode::Full),
                    lat.is_tight_character(ch, TightMode::Reduced),
                );
            }
        }
    }

    #[test]
    fn density() {
        let c = chain3();
        assert!(c.is_dense(1, 2).unwrap());
        for x in 0..c.len() {
            assert!(c.is_dense(x, x).unwrap());
        }
        let b = b4();
        assert!(!b.is_dense(1, 3).unwrap());
        assert!(matches!(b.is_dense(3, 1), Err(SemilatticeError::OrderViolation(3, 1))));
    }

    #[test]
    fn dense_pairs_are_not_separated_by_tight_characters() {
        for lat in [chain3(), b4(), powerset(3)] {
            let tight = lat.tight_spectrum().unwrap();
            for x in 0..lat.len() {
                for y in 0..lat.len() {
                    if lat.leq(y, x) && lat.is_dense(y, x).unwrap() {
                        for &ch in &tight {
                            assert_eq!(ch.value(&lat, x), ch.value(&lat, y));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn cover_monotonicity() {
        let b = b4();
        let all: Vec<usize> = (0..4).collect();
        // Z ⊆ Z' ⊆ F and is_cover(Z, F) implies is_cover(Z', F).
        assert!(b.is_cover(&[1, 2], &all).unwrap());
        assert!(b.is_cover(&[1, 2, 3], &all).unwrap());
    }
}

//! Finite inverse semigroups by multiplication table: validation, the
//! idempotent semilattice, natural order, E*-unitarity, and the action
//! on the character spectrum of E(S).

use crate::semilattice::{Character, Semilattice, SemilatticeError};
use std::collections::HashSet;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IsgError {
    #[error("multiplication table is not square or not total")]
    BadTable,
    #[error("multiplication not associative at ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),
    #[error("element {0} has no generalized inverse")]
    NoGeneralizedInverse(usize),
    #[error("element {0} has several generalized inverses ({1}, {2})")]
    NonUniqueInverse(usize, usize, usize),
    #[error("idempotents {0} and {1} do not commute")]
    IdempotentsDontCommute(usize, usize),
    #[error("zero is not absorbing at {0}")]
    ZeroNotAbsorbing(usize),
    #[error("duplicate label: {0}")]
    BadLabel(String),
    #[error("invariant subset check failed: theta_{0} moves character {1} outside the set")]
    NotInvariant(usize, usize),
    #[error(transparent)]
    Semilattice(#[from] SemilatticeError),
}

/// A finite inverse semigroup, stored as a total multiplication table.
/// The star table is computed during validation, never ingested.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InverseSemigroup {
    labels: Vec<String>,
    mul: Vec<usize>,
    star: Vec<usize>,
    zero: Option<usize>,
}

impl InverseSemigroup {
    pub fn validate(
        labels: Vec<String>,
        mul_table: Vec<Vec<usize>>,
        zero: Option<usize>,
    ) -> Result<Self, IsgError> {
        let n = labels.len();
        let mut seen = HashSet::new();
        for l in &labels {
            if !seen.insert(l.clone()) {
                return Err(IsgError::BadLabel(l.clone()));
            }
        }
        if mul_table.len() != n || mul_table.iter().any(|r| r.len() != n) {
            return Err(IsgError::BadTable);
        }
        let mut mul = vec![0usize; n * n];
        for i in 0..n {
            for j in 0..n {
                if mul_table[i][j] >= n {
                    return Err(IsgError::BadTable);
                }
                mul[i * n + j] = mul_table[i][j];
            }
        }
        let m = |i: usize, j: usize| mul[i * n + j];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if m(m(i, j), k) != m(i, m(j, k)) {
                        return Err(IsgError::NotAssociative(i, j, k));
                    }
                }
            }
        }
        // Each s must have a unique t with sts = s and tst = t.
        let mut star = vec![0usize; n];
        for s in 0..n {
            let invs: Vec<usize> =
                (0..n).filter(|&t| m(m(s, t), s) == s && m(m(t, s), t) == t).collect();
            match invs.as_slice() {
                [] => return Err(IsgError::NoGeneralizedInverse(s)),
                [t] => star[s] = *t,
                [t1, t2, ..] => return Err(IsgError::NonUniqueInverse(s, *t1, *t2)),
            }
        }
        // Independent certificate: commuting idempotents. Inverse
        // uniqueness already implies it, so a failure here flags a bug
        // in one of the two routes.
        let idems: Vec<usize> = (0..n).filter(|&e| m(e, e) == e).collect();
        for &e in &idems {
            for &f in &idems {
                if m(e, f) != m(f, e) {
                    return Err(IsgError::IdempotentsDontCommute(e, f));
                }
            }
        }
        if let Some(z) = zero {
            for s in 0..n {
                if m(z, s) != z || m(s, z) != z {
                    return Err(IsgError::ZeroNotAbsorbing(s));
                }
            }
        }
        Ok(InverseSemigroup { labels, mul, star, zero })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
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

    pub fn mul(&self, s: usize, t: usize) -> usize {
        self.mul[s * self.len() + t]
    }

    pub fn star(&self, s: usize) -> usize {
        self.star[s]
    }

    pub fn zero(&self) -> Option<usize> {
        self.zero
    }

    pub fn is_idempotent(&self, s: usize) -> bool {
        self.mul(s, s) == s
    }

    pub fn idempotents(&self) -> Vec<usize> {
        (0..self.len()).filter(|&e| self.is_idempotent(e)).collect()
    }

    /// Natural order: s ≤ t ⟺ s = t s* s.
    pub fn natural_leq(&self, s: usize, t: usize) -> bool {
        s == self.mul(t, self.mul(self.star(s), s))
    }

    /// A copy of this semigroup guaranteed to have a zero, adjoining a
    /// fresh absorbing element when necessary.
    pub fn with_zero(&self) -> InverseSemigroup {
        if self.zero.is_some() {
            return self.clone();
        }
        let n = self.len();
        let mut labels = self.labels.clone();
        let mut base = "0".to_string();
        while labels.contains(&base) {
            base.push('\'');
        }
        labels.push(base);
        let z = n;
        let mut mul = vec![vec![z; n + 1]; n + 1];
        for i in 0..n {
            for j in 0..n {
                mul[i][j] = self.mul(i, j);
            }
        }
        InverseSemigroup::validate(labels, mul, Some(z)).expect("zero adjunction stays valid")
    }

    /// The idempotent semilattice E(S) with meet the product. A zero is
    /// adjoined first if the semigroup has none. Returns the semilattice
    /// together with the map from semilattice indices to S indices.
    pub fn idempotent_semilattice(&self) -> (Semilattice, Vec<usize>) {
        let s = self.with_zero();
        let elems = s.idempotents();
        let pos = |x: usize| elems.iter().position(|&e| e == x).unwrap();
        let labels: Vec<String> = elems.iter().map(|&e| s.label(e).to_string()).collect();
        let meet: Vec<Vec<usize>> = elems
            .iter()
            .map(|&e| elems.iter().map(|&f| pos(s.mul(e, f))).collect())
            .collect();
        let zero = pos(s.zero().unwrap());
        let lat = Semilattice::from_meet_table(labels, meet, zero)
            .expect("commuting idempotents form a semilattice");
        (lat, elems)
    }

    /// E*-unitarity: every element dominating a nonzero idempotent is
    /// idempotent. Returns the first witness (e, s) when it fails.
    pub fn e_star_unitary_witness(&self) -> Option<(usize, usize)> {
        let s = self.with_zero();
        let zero = s.zero().unwrap();
        for e in s.idempotents() {
            if e == zero {
                continue;
            }
            for t in 0..s.len() {
                if s.natural_leq(e, t) && !s.is_idempotent(t) {
                    return Some((e, t));
                }
            }
        }
        None
    }

    pub fn is_e_star_unitary(&self) -> bool {
        self.e_star_unitary_witness().is_none()
    }

    /// Does every pair have a greatest lower bound in the natural order?
    /// The search is brute force over common lower bounds; when it
    /// succeeds the meet table is returned. On E*-unitary semigroups the
    /// result is additionally cross-checked against the closed formula
    /// m(s, t) = s t* t on pairs with a nonzero common lower bound.
    pub fn natural_order_semilattice_check(&self) -> (bool, Option<Vec<Vec<usize>>>) {
        let s = self.with_zero();
        let n = s.len();
        let mut table = vec![vec![0usize; n]; n];
        for a in 0..n {
            for b in 0..n {
                let lower: Vec<usize> =
                    (0..n).filter(|&u| s.natural_leq(u, a) && s.natural_leq(u, b)).collect();
                let best = lower
                    .iter()
                    .copied()
                    .find(|&u| lower.iter().all(|&w| s.natural_leq(w, u)));
                match best {
                    Some(u) => table[a][b] = u,
                    None => return (false, None),
                }
            }
        }
        if self.is_e_star_unitary() {
            let zero = s.zero().unwrap();
            for a in 0..n {
                for b in 0..n {
                    let has_nonzero_lower = (0..n).any(|u| {
                        u != zero && s.natural_leq(u, a) && s.natural_leq(u, b)
                    });
                    if has_nonzero_lower {
                        let formula = s.mul(a, s.mul(s.star(b), b));
                        assert_eq!(
                            table[a][b], formula,
                            "meet formula s t* t disagrees with brute-force infimum"
                        );
                    }
                }
            }
        }
        (true, Some(table))
    }

    /// Action of S on a set of characters of E(S) by conjugation,
    /// θ_s(φ)(e) = φ(s* e s), with domain {φ : φ(s*s) = 1}.
    pub fn spectrum_action(
        &self,
        carrier: Option<Vec<Character>>,
    ) -> Result<SpectrumAction, IsgError> {
        SpectrumAction::new(self, carrier)
    }
}

/// The action of an inverse semigroup on a finite invariant set of
/// characters of its idempotent semilattice. The zero-completed copy of
/// the semigroup, the semilattice, and the index bridges are all kept so
/// that downstream constructions stay label-stable.
#[derive(Debug, Clone)]
pub struct SpectrumAction {
    s: InverseSemigroup,
    lattice: Semilattice,
    /// Semilattice index -> S index, for the idempotents of S.
    lattice_to_s: Vec<usize>,
    /// S index -> semilattice index, for idempotent S elements.
    s_to_lattice: Vec<Option<usize>>,
    carrier: Vec<Character>,
    /// `maps[s][i]` is the image of carrier point i under θ_s, when defined.
    maps: Vec<Vec<Option<usize>>>,
}

impl SpectrumAction {
    /// Build the action. `carrier` defaults to the tight spectrum of
    /// E(S), which is invariant; explicitly provided carriers are checked
    /// for invariance.
    pub fn new(
        isg: &InverseSemigroup,
        carrier: Option<Vec<Character>>,
    ) -> Result<SpectrumAction, IsgError> {
        let s = isg.with_zero();
        let (lattice, lattice_to_s) = s.idempotent_semilattice();
        let mut s_to_lattice = vec![None; s.len()];
        for (li, &si) in lattice_to_s.iter().enumerate() {
            s_to_lattice[si] = Some(li);
        }
        let carrier = match carrier {
            Some(c) => c,
            None => lattice.tight_spectrum()?,
        };
        let eval = |ch: Character, e_s: usize| -> bool {
            ch.value(&lattice, s_to_lattice[e_s].expect("idempotent of S"))
        };
        let mut maps = Vec::with_capacity(s.len());
        for t in 0..s.len() {
            let q = s.mul(s.star(t), t);
            let mut row = Vec::with_capacity(carrier.len());
            for (_i, &ch) in carrier.iter().enumerate() {
                if !eval(ch, q) {
                    row.push(None);
                    continue;
                }
                // φ(t* e t) as e runs over E(S); its support is a filter,
                // and the image character is its principal generator.
                let mut support_min: Option<usize> = None;
                for (li, &e_s) in lattice_to_s.iter().enumerate() {
                    let conj = s.mul(s.mul(s.star(t), e_s), t);
                    if eval(ch, conj) {
                        support_min = Some(match support_min {
                            None => li,
                            Some(m) => lattice.meet(m, li),
                        });
                    }
                }
                let min = support_min.expect("theta image is a nonzero character");
                let image = Character { min };
                match carrier.iter().position(|&c| c == image) {
                    Some(j) => row.push(Some(j)),
                    None => return Err(IsgError::NotInvariant(t, min)),
                }
            }
            maps.push(row);
        }
        let action = SpectrumAction { s, lattice, lattice_to_s, s_to_lattice, carrier, maps };
        action.verify_action_laws();
        Ok(action)
    }

    /// θ_{s*} = θ_s⁻¹, θ_s ∘ θ_t = θ_{st} on the common domain, and
    /// D_e ∩ D_f = D_{ef}. Violations are implementation bugs.
    fn verify_action_laws(&self) {
        let n = self.s.len();
        for t in 0..n {
            let ts = self.s.star(t);
            for i in 0..self.carrier.len() {
                if let Some(j) = self.maps[t][i] {
                    assert_eq!(self.maps[ts][j], Some(i), "theta star is not the inverse");
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = self.s.mul(a, b);
                for i in 0..self.carrier.len() {
                    let via = self.maps[b][i].and_then(|j| self.maps[a][j]);
                    let direct = self.maps[ab][i];
                    // The composite is the restriction of θ_{ab} to the
                    // composable part, so they agree wherever both act.
                    if via.is_some() {
                        assert_eq!(via, direct, "theta composition mismatch");
                    }
                }
            }
        }
    }

    pub fn semigroup(&self) -> &InverseSemigroup {
        &self.s
    }

    pub fn lattice(&self) -> &Semilattice {
        &self.lattice
    }

    pub fn lattice_to_s(&self) -> &[usize] {
        &self.lattice_to_s
    }

    pub fn carrier(&self) -> &[Character] {
        &self.carrier
    }

    pub fn point_label(&self, i: usize) -> String {
        self.lattice.label(self.carrier[i].min).to_string()
    }

    /// Image of carrier point `x` under θ_s, if `x` is in the domain.
    pub fn apply(&self, s: usize, x: usize) -> Option<usize> {
        self.maps[s][x]
    }

    /// Carrier points in the domain of θ_s (those with φ(s*s) = 1).
    pub fn domain(&self, s: usize) -> Vec<usize> {
        (0..self.carrier.len()).filter(|&i| self.maps[s][i].is_some()).collect()
    }

    /// Does the carrier character at `x` take value 1 on the idempotent
    /// `e` (an S index)?
    pub fn point_in_domain_of(&self, e_s: usize, x: usize) -> bool {
        match self.s_to_lattice[e_s] {
            Some(li) => self.carrier[x].value(&self.lattice, li),
            None => panic!("not an idempotent"),
        }
    }

    /// Conjugation of covers: if Z covers E^{X,Y} with X nonempty, then
    /// sZs* covers E^{sXs*, sYs*}. Evaluates one instance.
    pub fn conjugate_cover(&self, s: usize, z: &[usize], x: &[usize], y: &[usize]) -> bool {
        self.s.conjugate_cover_check(&self.lattice, &self.lattice_to_s, s, z, x, y)
    }
}

impl InverseSemigroup {
    /// One instance of the cover-conjugation law. All index arguments are
    /// semilattice indices over E(S); `s` is an S index.
    pub fn conjugate_cover_check(
        &self,
        lattice: &Semilattice,
        lattice_to_s: &[usize],
        s: usize,
        z: &[usize],
        x: &[usize],
        y: &[usize],
    ) -> bool {
        let conj = |li: usize| -> usize {
            let e = lattice_to_s[li];
            let c = self.mul(self.mul(s, e), self.star(s));
            lattice_to_s
                .iter()
                .position(|&f| f == c)
                .expect("conjugate of an idempotent is idempotent")
        };
        let zc: Vec<usize> = z.iter().map(|&i| conj(i)).collect();
        let xc: Vec<usize> = x.iter().map(|&i| conj(i)).collect();
        let yc: Vec<usize> = y.iter().map(|&i| conj(i)).collect();
        let target = lattice.relative_set(&xc, &yc);
        let zc_in: Vec<usize> =
            zc.into_iter().filter(|&i| target.contains(&i)).collect();
        lattice.is_cover(&zc_in, &target).unwrap_or(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn symmetric_inverse_monoid_validates() {
        let i2 = corpus::symmetric_inverse_monoid(2);
        assert_eq!(i2.len(), 7);
        let i3 = corpus::symmetric_inverse_monoid(3);
        assert_eq!(i3.len(), 34);
    }

    #[test]
    fn group_tables_are_inverse_semigroups() {
        // Z/3 as a multiplication table.
        let mul = vec![vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 1]];
        let g = InverseSemigroup::validate(
            vec!["e".into(), "g".into(), "g2".into()],
            mul,
            None,
        )
        .unwrap();
        assert_eq!(g.star(1), 2);
        let (lat, _) = g.idempotent_semilattice();
        assert_eq!(lat.len(), 2); // lone idempotent plus adjoined zero
    }

    #[test]
    fn non_unique_inverse_rejected() {
        // Left-zero semigroup on two elements: xy = x. Every element is
        // its own inverse and also the other's right inverse.
        let mul = vec![vec![0, 0], vec![1, 1]];
        let err =
            InverseSemigroup::validate(vec!["a".into(), "b".into()], mul, None).unwrap_err();
        assert!(matches!(err, IsgError::NonUniqueInverse(..)));
    }

    #[test]
    fn i2_idempotent_semilattice_is_b4() {
        let i2 = corpus::symmetric_inverse_monoid(2);
        let (lat, _) = i2.idempotent_semilattice();
        assert_eq!(lat.len(), 4);
        assert_eq!(lat.atoms().len(), 2);
        assert_eq!(lat.tight_spectrum().unwrap().len(), 2);
    }

    #[test]
    fn natural_order_examples() {
        let i2 = corpus::symmetric_inverse_monoid(2);
        // Partial identities are below the full identity.
        let id = i2.index_of("[0>0,1>1]").unwrap();
        let e0 = i2.index_of("[0>0]").unwrap();
        assert!(i2.natural_leq(e0, id));
        for s in 0..i2.len() {
            assert!(i2.natural_leq(s, s));
        }
        // Idempotents: e ≤ f ⟺ ef = e.
        for &e in &i2.idempotents() {
            for &f in &i2.idempotents() {
                assert_eq!(i2.natural_leq(e, f), i2.mul(e, f) == e);
            }
        }
    }

    #[test]
    fn e_star_unitarity() {
        let i2 = corpus::symmetric_inverse_monoid(2);
        assert!(i2.is_e_star_unitary());
        let i3 = corpus::symmetric_inverse_monoid(3);
        let witness = i3.e_star_unitary_witness();
        assert!(witness.is_some());
        // The stated witness: s = [0>0, 1>2, 2>1] dominates e = [0>0].
        let s = i3.index_of("[0>0,1>2,2>1]").unwrap();
        let e = i3.index_of("[0>0]").unwrap();
        assert!(i3.natural_leq(e, s));
        assert!(!i3.is_idempotent(s));
    }

    #[test]
    fn natural_order_meets() {
        let i2 = corpus::symmetric_inverse_monoid(2);
        let (ok, table) = i2.natural_order_semilattice_check();
        assert!(ok);
        assert!(table.is_some());
        let i3 = corpus::symmetric_inverse_monoid(3);
        // Not E*-unitary, so no formula claim; the brute-force search
        // simply reports whether meets exist.
        let _ = i3.natural_order_semilattice_check();
    }

    #[test]
    fn spectrum_action_on_i2() {
        let i2 = corpus::symmetric_inverse_monoid(2);
        let action = i2.spectrum_action(None).unwrap();
        assert_eq!(action.carrier().len(), 2);
        let swap = i2.index_of("[0>1,1>0]").unwrap();
        assert_eq!(action.domain(swap).len(), 2);
        assert_eq!(action.apply(swap, 0), Some(1));
        assert_eq!(action.apply(swap, 1), Some(0));
        // Empty carrier is a valid degenerate action.
        let empty = i2.spectrum_action(Some(vec![])).unwrap();
        assert!(empty.carrier().is_empty());
    }

    #[test]
    fn tight_characters_stay_tight_under_action() {
        let i2 = corpus::symmetric_inverse_monoid(2);
        let action = i2.spectrum_action(None).unwrap();
        let lat = action.lattice();
        for s in 0..action.semigroup().len() {
            for i in 0..action.carrier().len() {
                if let Some(j) = action.apply(s, i) {
                    let img = action.carrier()[j];
                    assert!(lat
                        .tight_spectrum()
                        .unwrap()
                        .contains(&img));
                }
            }
        }
    }

    #[test]
    fn cover_conjugation_on_i2() {
        let i2 = corpus::symmetric_inverse_monoid(2);
        let action = i2.spectrum_action(None).unwrap();
        let lat = action.lattice();
        let lat_to_s = action.lattice_to_s().to_vec();
        let swap = i2.index_of("[0>1,1>0]").unwrap();
        let e0_lat = (0..lat.len())
            .find(|&li| i2.label(lat_to_s[li]) == "[0>0]")
            .unwrap();
        // Z = {e0} covers E^{{e0}, ∅}; conjugating by the swap must give
        // a cover of E^{{e1}, ∅}.
        assert!(action.conjugate_cover(swap, &[e0_lat], &[e0_lat], &[]));
    }
}

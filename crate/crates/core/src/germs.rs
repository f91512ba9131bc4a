//! The groupoid of germs of an inverse-semigroup action on a finite
//! carrier: construction with exhaustive axiom checks, the slice basis
//! Θ(s, U), and DOT/JSON exports.

use crate::inverse::SpectrumAction;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupoidError {
    #[error("point {1} is outside the domain of element {0}")]
    DomainViolation(usize, usize),
    #[error("groupoid axiom failed: {0}")]
    AxiomFailure(String),
    #[error("export parse error: {0}")]
    BadExport(String),
}

/// A germ [s, x]: the class of (s, x) under local agreement, stored by
/// its canonical representative (the equivalent element least in label
/// order).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Germ {
    pub element: usize,
    pub point: usize,
}

/// A finite groupoid of germs, with composition defined exactly on pairs
/// with matching source and range.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Groupoid {
    germs: Vec<Germ>,
    source: Vec<usize>,
    range: Vec<usize>,
    compose: BTreeMap<(usize, usize), usize>,
    invert: Vec<usize>,
    /// `units[x]` is the germ index of the unit at carrier point x.
    units: Vec<usize>,
    /// Carrier point labels, for export.
    point_labels: Vec<String>,
    element_labels: Vec<String>,
}

/// Germ equivalence: (s, x) ~ (t, y) iff x = y and some idempotent e has
/// x in its domain and se = te. The search is exhaustive over E(S).
pub fn germ_equivalent(
    action: &SpectrumAction,
    s: usize,
    x: usize,
    t: usize,
    y: usize,
) -> Result<bool, GroupoidError> {
    if action.apply(s, x).is_none() {
        return Err(GroupoidError::DomainViolation(s, x));
    }
    if action.apply(t, y).is_none() {
        return Err(GroupoidError::DomainViolation(t, y));
    }
    if x != y {
        return Ok(false);
    }
    let sg = action.semigroup();
    Ok(action.lattice_to_s().iter().any(|&e| {
        action.point_in_domain_of(e, x) && sg.mul(s, e) == sg.mul(t, e)
    }))
}

fn canonical_rep(action: &SpectrumAction, s: usize, x: usize) -> Germ {
    let sg = action.semigroup();
    let mut best = s;
    for t in 0..sg.len() {
        if t == best || action.apply(t, x).is_none() {
            continue;
        }
        if germ_equivalent(action, s, x, t, x).unwrap()
            && (sg.label(t), t) < (sg.label(best), best)
        {
            best = t;
        }
    }
    Germ { element: best, point: x }
}

/// Build the groupoid of germs of the action; every groupoid axiom is
/// checked exhaustively before returning.
pub fn build_groupoid(action: &SpectrumAction) -> Result<Groupoid, GroupoidError> {
    let sg = action.semigroup();
    let mut germs: Vec<Germ> = Vec::new();
    let mut germ_index: BTreeMap<Germ, usize> = BTreeMap::new();
    for s in 0..sg.len() {
        for x in action.domain(s) {
            let g = canonical_rep(action, s, x);
            germ_index.entry(g).or_insert_with(|| {
                germs.push(g);
                germs.len() - 1
            });
        }
    }
    // Deterministic order: by (element label, point label).
    let mut order: Vec<usize> = (0..germs.len()).collect();
    order.sort_by_key(|&i| {
        (
            sg.label(germs[i].element).to_string(),
            action.point_label(germs[i].point),
        )
    });
    let germs: Vec<Germ> = order.into_iter().map(|i| germs[i]).collect();
    let germ_index: BTreeMap<Germ, usize> =
        germs.iter().enumerate().map(|(i, &g)| (g, i)).collect();

    let source: Vec<usize> = germs.iter().map(|g| g.point).collect();
    let range: Vec<usize> = germs
        .iter()
        .map(|g| action.apply(g.element, g.point).expect("in domain"))
        .collect();
    let lookup = |s: usize, x: usize| -> usize { germ_index[&canonical_rep(action, s, x)] };

    let mut compose = BTreeMap::new();
    for (i, gi) in germs.iter().enumerate() {
        for (j, gj) in germs.iter().enumerate() {
            if source[i] == range[j] {
                let st = sg.mul(gi.element, gj.element);
                compose.insert((i, j), lookup(st, gj.point));
            }
        }
    }
    let invert: Vec<usize> = germs
        .iter()
        .enumerate()
        .map(|(i, g)| lookup(sg.star(g.element), range[i]))
        .collect();
    let units: Vec<usize> = (0..action.carrier().len())
        .map(|x| {
            // Any idempotent whose domain contains x gives the unit germ.
            let e = action
                .lattice_to_s()
                .iter()
                .copied()
                .find(|&e| action.point_in_domain_of(e, x))
                .expect("characters are nonzero");
            lookup(e, x)
        })
        .collect();
    let point_labels: Vec<String> =
        (0..action.carrier().len()).map(|i| action.point_label(i)).collect();
    let element_labels: Vec<String> =
        germs.iter().map(|g| sg.label(g.element).to_string()).collect();
    let gpd = Groupoid {
        germs,
        source,
        range,
        compose,
        invert,
        units,
        point_labels,
        element_labels,
    };
    gpd.verify_axioms()?;
    // Unit germs must be reachable as [e, x] for every idempotent e whose
    // domain contains x.
    for x in 0..action.carrier().len() {
        for &e in action.lattice_to_s() {
            if action.point_in_domain_of(e, x) {
                let u = lookup(e, x);
                if u != gpd.units[x] {
                    return Err(GroupoidError::AxiomFailure(format!(
                        "idempotent germ at point {x} is not the unit"
                    )));
                }
            }
        }
    }
    Ok(gpd)
}

impl Groupoid {
    pub fn len(&self) -> usize {
        self.germs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.germs.is_empty()
    }

    pub fn germs(&self) -> &[Germ] {
        &self.germs
    }

    pub fn units(&self) -> &[usize] {
        &self.units
    }

    pub fn source(&self, i: usize) -> usize {
        self.source[i]
    }

    pub fn range(&self, i: usize) -> usize {
        self.range[i]
    }

    pub fn compose(&self, i: usize, j: usize) -> Option<usize> {
        self.compose.get(&(i, j)).copied()
    }

    pub fn invert(&self, i: usize) -> usize {
        self.invert[i]
    }

    fn verify_axioms(&self) -> Result<(), GroupoidError> {
        let n = self.len();
        let fail = |m: String| Err(GroupoidError::AxiomFailure(m));
        for i in 0..n {
            for j in 0..n {
                match self.compose(i, j) {
                    Some(k) => {
                        if self.source[i] != self.range[j] {
                            return fail(format!("illegal composite ({i},{j})"));
                        }
                        if self.source[k] != self.source[j] || self.range[k] != self.range[i] {
                            return fail(format!("composite ({i},{j}) has wrong endpoints"));
                        }
                    }
                    None => {
                        if self.source[i] == self.range[j] {
                            return fail(format!("missing composite ({i},{j})"));
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if let (Some(ij), Some(jk)) = (self.compose(i, j), self.compose(j, k)) {
                        if self.compose(ij, k) != self.compose(i, jk) {
                            return fail(format!("associativity at ({i},{j},{k})"));
                        }
                    }
                }
            }
        }
        for i in 0..n {
            let inv = self.invert[i];
            if self.compose(inv, i) != Some(self.units[self.source[i]]) {
                return fail(format!("inverse law (left) at {i}"));
            }
            if self.compose(i, inv) != Some(self.units[self.range[i]]) {
                return fail(format!("inverse law (right) at {i}"));
            }
        }
        for (x, &u) in self.units.iter().enumerate() {
            if self.source[u] != x || self.range[u] != x {
                return fail(format!("unit at {x} is not a loop"));
            }
            for i in 0..n {
                if self.source[i] == x && self.compose(i, u) != Some(i) {
                    return fail(format!("unit not right-neutral at {i}"));
                }
                if self.range[i] == x && self.compose(u, i) != Some(i) {
                    return fail(format!("unit not left-neutral at {i}"));
                }
            }
        }
        Ok(())
    }

    /// The basic slice Θ(s, U) of an action, as a set of germ indices.
    /// The source map is injective on it and the range is θ_s after the
    /// source, both asserted.
    pub fn slice(
        &self,
        action: &SpectrumAction,
        s: usize,
        points: &[usize],
    ) -> Result<Vec<usize>, GroupoidError> {
        for &x in points {
            if action.apply(s, x).is_none() {
                return Err(GroupoidError::DomainViolation(s, x));
            }
        }
        let mut out = Vec::new();
        for &x in points {
            let g = canonical_rep(action, s, x);
            let idx = self
                .germs
                .iter()
                .position(|&h| h == g)
                .expect("germ of an action element");
            out.push(idx);
        }
        out.sort_unstable();
        out.dedup();
        let sources: Vec<usize> = out.iter().map(|&i| self.source[i]).collect();
        let mut dedup = sources.clone();
        dedup.sort_unstable();
        dedup.dedup();
        assert_eq!(dedup.len(), sources.len(), "source not injective on slice");
        for &i in &out {
            assert_eq!(
                self.range[i],
                action.apply(s, self.source[i]).unwrap(),
                "range is not theta after source on slice"
            );
        }
        Ok(out)
    }

    /// Θ_s Θ_t = Θ_{st} (full domains) and Θ_s⁻¹ = Θ_{s*}, setwise.
    pub fn slice_product_check(
        &self,
        action: &SpectrumAction,
        s: usize,
        t: usize,
    ) -> Result<bool, GroupoidError> {
        let sg = action.semigroup();
        let theta = |u: usize| -> Result<Vec<usize>, GroupoidError> {
            self.slice(action, u, &action.domain(u))
        };
        let ts = theta(s)?;
        let tt = theta(t)?;
        let mut product: Vec<usize> = Vec::new();
        for &i in &ts {
            for &j in &tt {
                if let Some(k) = self.compose(i, j) {
                    product.push(k);
                }
            }
        }
        product.sort_unstable();
        product.dedup();
        let direct = theta(sg.mul(s, t))?;
        let mut inv: Vec<usize> = ts.iter().map(|&i| self.invert[i]).collect();
        inv.sort_unstable();
        inv.dedup();
        let star = theta(sg.star(s))?;
        Ok(product == direct && inv == star)
    }

    /// Every singleton germ is a basic slice Θ(s, {x}), so the topology
    /// is discrete (hence Hausdorff). Also reports whether the acting
    /// semigroup is a semilattice under its natural order, the structural
    /// sufficient condition for Hausdorffness.
    pub fn topology_report(&self, action: &SpectrumAction) -> TopologyReport {
        let mut discrete = true;
        for (i, g) in self.germs.iter().enumerate() {
            let theta = self
                .slice(action, g.element, &[g.point])
                .expect("germ representative is in its own domain");
            if theta != vec![i] {
                discrete = false;
            }
        }
        let (is_semilattice, _) = action.semigroup().natural_order_semilattice_check();
        TopologyReport {
            discrete,
            hausdorff: discrete,
            natural_order_semilattice: is_semilattice,
        }
    }

    /// DOT digraph with units as nodes and germs as labeled arrows.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph germs {\n");
        for (x, label) in self.point_labels.iter().enumerate() {
            out.push_str(&format!("  p{x} [label=\"{label}\"];\n"));
        }
        for i in 0..self.len() {
            out.push_str(&format!(
                "  p{} -> p{} [label=\"{}\"];\n",
                self.source[i], self.range[i], self.element_labels[i]
            ));
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json(&self) -> GroupoidJson {
        GroupoidJson {
            units: self.point_labels.clone(),
            germs: (0..self.len())
                .map(|i| GermJson {
                    s: self.element_labels[i].clone(),
                    x: self.point_labels[self.source[i]].clone(),
                    r: self.point_labels[self.range[i]].clone(),
                })
                .collect(),
            compose: self
                .compose
                .iter()
                .map(|(&(i, j), &k)| vec![i, j, k])
                .collect(),
        }
    }

    /// Rebuild the structural part from an export; used to confirm the
    /// serialization round-trips.
    pub fn matches_json(&self, json: &GroupoidJson) -> bool {
        self.to_json() == *json
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TopologyReport {
    pub discrete: bool,
    pub hausdorff: bool,
    pub natural_order_semilattice: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GermJson {
    pub s: String,
    pub x: String,
    pub r: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupoidJson {
    pub units: Vec<String>,
    pub germs: Vec<GermJson>,
    pub compose: Vec<Vec<usize>>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn i2_gives_the_pair_groupoid() {
        let i2 = corpus::symmetric_inverse_monoid(2);
        let action = i2.spectrum_action(None).unwrap();
        let g = build_groupoid(&action).unwrap();
        assert_eq!(g.units().len(), 2);
        assert_eq!(g.len(), 4);
        for s in 0..i2.len() {
            for t in 0..i2.len() {
                assert!(g.slice_product_check(&action, s, t).unwrap());
            }
        }
        let report = g.topology_report(&action);
        assert!(report.discrete && report.hausdorff);
    }

    #[test]
    fn germ_equivalence_examples() {
        let i2 = corpus::symmetric_inverse_monoid(2);
        let action = i2.spectrum_action(None).unwrap();
        let e0 = i2.index_of("[0>0]").unwrap();
        let id = i2.index_of("[0>0,1>1]").unwrap();
        let swap = i2.index_of("[0>1,1>0]").unwrap();
        let x = action.domain(e0)[0];
        assert!(germ_equivalent(&action, e0, x, e0, x).unwrap());
        // e0 ≤ id, so their germs at x agree.
        assert!(germ_equivalent(&action, e0, x, id, x).unwrap());
        assert!(!germ_equivalent(&action, swap, x, id, x).unwrap());
    }

    #[test]
    fn semilattice_action_gives_units_only() {
        // E(I_2) acting on its own tight spectrum: all germs are units.
        let i2 = corpus::symmetric_inverse_monoid(2);
        let (lat, _) = i2.idempotent_semilattice();
        let n = lat.len();
        let mul: Vec<Vec<usize>> =
            (0..n).map(|i| (0..n).map(|j| lat.meet(i, j)).collect()).collect();
        let e = crate::inverse::InverseSemigroup::validate(
            lat.labels().to_vec(),
            mul,
            Some(lat.zero()),
        )
        .unwrap();
        let action = e.spectrum_action(None).unwrap();
        let g = build_groupoid(&action).unwrap();
        assert_eq!(g.len(), action.carrier().len());
        assert_eq!(g.len(), g.units().len());
    }

    #[test]
    fn empty_carrier_gives_empty_groupoid() {
        let i2 = corpus::symmetric_inverse_monoid(2);
        let action = i2.spectrum_action(Some(vec![])).unwrap();
        let g = build_groupoid(&action).unwrap();
        assert!(g.is_empty());
        assert_eq!(g.to_dot(), "digraph germs {\n}\n");
    }

    #[test]
    fn slices() {
        let i2 = corpus::symmetric_inverse_monoid(2);
        let action = i2.spectrum_action(None).unwrap();
        let g = build_groupoid(&action).unwrap();
        let swap = i2.index_of("[0>1,1>0]").unwrap();
        assert!(g.slice(&action, swap, &[]).unwrap().is_empty());
        let th = g.slice(&action, swap, &[0]).unwrap();
        assert_eq!(th.len(), 1);
        let id = i2.index_of("[0>0,1>1]").unwrap();
        let units = g.slice(&action, id, &action.domain(id)).unwrap();
        assert_eq!(units.len(), 2);
        for &u in &units {
            assert_eq!(g.source(u), g.range(u));
        }
    }

    #[test]
    fn export_round_trip() {
        let i2 = corpus::symmetric_inverse_monoid(2);
        let action = i2.spectrum_action(None).unwrap();
        let g = build_groupoid(&action).unwrap();
        let json = g.to_json();
        let text = serde_json::to_string(&json).unwrap();
        let parsed: GroupoidJson = serde_json::from_str(&text).unwrap();
        assert!(g.matches_json(&parsed));
        let dot = g.to_dot();
        assert_eq!(dot.matches("->").count(), 4);
    }
}

//! Higher-rank graph presentations, truncated at a declared depth: the
//! degree map, unique factorization, the little pull-back property,
//! minimal common extensions, lcms, the bridge to semigroupoids, and
//! depth-relative boundary paths.

use crate::paths::{self, TightVerdict, TruncationCovers};
use crate::sgpd::{Semigroupoid, SgpdError};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KGraphError {
    #[error("bad presentation: {0}")]
    BadPresentation(String),
    #[error("degree additivity fails at composite ({0}, {1})")]
    DegreeMismatch(usize, usize),
    #[error("category law violated: {0}")]
    CategoryLawViolation(String),
    #[error("morphism {0} has no factorization at degree split {1:?}")]
    FactorizationMissing(usize, Vec<u32>),
    #[error("morphism {0} factors in two ways at degree split {1:?}")]
    FactorizationAmbiguous(usize, Vec<u32>),
    #[error("required degree exceeds the truncation bound")]
    BoundExceeded,
    #[error("non-identity morphism {0} is right-invertible")]
    RightInvertibleNonIdentity(usize),
    #[error("boundary data is not hereditary at degree {0:?}")]
    NotHereditary(Vec<u32>),
    #[error("boundary data is not join closed at degrees {0:?}, {1:?}")]
    NotJoinClosed(Vec<u32>, Vec<u32>),
    #[error("boundary assignment at {0:?} does not divide the one at {1:?}")]
    DivisibilityViolation(Vec<u32>, Vec<u32>),
    #[error(transparent)]
    Sgpd(#[from] SgpdError),
    #[error(transparent)]
    Path(#[from] paths::PathError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Morphism {
    pub label: String,
    pub src: usize,
    pub rng: usize,
    pub degree: Vec<u32>,
}

/// A k-graph presented by its morphisms of degree at most `depth`,
/// with the composition table of all products staying within the bound.
/// Identities are the degree-zero morphisms, one per vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KGraphPresentation {
    pub k: usize,
    pub vertices: Vec<String>,
    pub morphisms: Vec<Morphism>,
    compose: BTreeMap<(usize, usize), usize>,
    pub depth: Vec<u32>,
    identity_of: Vec<usize>,
}

fn deg_leq(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn deg_add(a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn deg_join(a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}


impl KGraphPresentation {
    /// Validate an explicit truncated presentation: category laws on the
    /// truncation, degree additivity, and unique factorization within
    /// the bound.
    pub fn validate(
        k: usize,
        vertices: Vec<String>,
        morphisms: Vec<Morphism>,
        compose: BTreeMap<(usize, usize), usize>,
        depth: Vec<u32>,
    ) -> Result<Self, KGraphError> {
        if depth.len() != k {
            return Err(KGraphError::BadPresentation("depth must have k entries".into()));
        }
        for m in &morphisms {
            if m.degree.len() != k || m.src >= vertices.len() || m.rng >= vertices.len() {
                return Err(KGraphError::BadPresentation(format!("morphism {}", m.label)));
            }
            if !deg_leq(&m.degree, &depth) {
                return Err(KGraphError::BadPresentation(format!(
                    "morphism {} exceeds the depth bound",
                    m.label
                )));
            }
        }
        let mut identity_of = vec![usize::MAX; vertices.len()];
        for (i, m) in morphisms.iter().enumerate() {
            if m.degree.iter().all(|&d| d == 0) {
                if m.src != m.rng || identity_of[m.src] != usize::MAX {
                    return Err(KGraphError::CategoryLawViolation(format!(
                        "degree-zero morphism {} is not a vertex identity",
                        m.label
                    )));
                }
                identity_of[m.src] = i;
            }
        }
        if identity_of.contains(&usize::MAX) {
            return Err(KGraphError::CategoryLawViolation(
                "every vertex needs its identity morphism".into(),
            ));
        }
        let kg = KGraphPresentation { k, vertices, morphisms, compose, depth, identity_of };
        kg.check_category_laws()?;
        kg.check_factorization()?;
        Ok(kg)
    }

    fn check_category_laws(&self) -> Result<(), KGraphError> {
        let n = self.morphisms.len();
        for (&(f, g), &h) in &self.compose {
            if f >= n || g >= n || h >= n {
                return Err(KGraphError::BadPresentation("composition out of range".into()));
            }
            let (mf, mg, mh) = (&self.morphisms[f], &self.morphisms[g], &self.morphisms[h]);
            if mf.src != mg.rng {
                return Err(KGraphError::CategoryLawViolation(format!(
                    "composite ({}, {}) with mismatched endpoints",
                    mf.label, mg.label
                )));
            }
            if mh.rng != mf.rng || mh.src != mg.src {
                return Err(KGraphError::CategoryLawViolation(format!(
                    "composite of ({}, {}) has wrong endpoints",
                    mf.label, mg.label
                )));
            }
            if mh.degree != deg_add(&mf.degree, &mg.degree) {
                return Err(KGraphError::DegreeMismatch(f, g));
            }
        }
        // The table must be total exactly on pairs whose sum of degrees
        // stays within the bound.
        for f in 0..n {
            for g in 0..n {
                let should = self.morphisms[f].src == self.morphisms[g].rng
                    && deg_leq(
                        &deg_add(&self.morphisms[f].degree, &self.morphisms[g].degree),
                        &self.depth,
                    );
                if should != self.compose.contains_key(&(f, g)) {
                    return Err(KGraphError::CategoryLawViolation(format!(
                        "pair ({}, {}) {} a composite",
                        self.morphisms[f].label,
                        self.morphisms[g].label,
                        if should { "is missing" } else { "should not have" },
                    )));
                }
            }
        }
        for v in 0..self.vertices.len() {
            let e = self.identity_of[v];
            for f in 0..n {
                if self.morphisms[f].src == v && self.compose(f, e) != Some(f) {
                    return Err(KGraphError::CategoryLawViolation(format!(
                        "identity at {v} is not right-neutral"
                    )));
                }
                if self.morphisms[f].rng == v && self.compose(e, f) != Some(f) {
                    return Err(KGraphError::CategoryLawViolation(format!(
                        "identity at {v} is not left-neutral"
                    )));
                }
            }
        }
        for f in 0..n {
            for g in 0..n {
                for h in 0..n {
                    if let (Some(fg), Some(gh)) = (self.compose(f, g), self.compose(g, h)) {
                        let left = self.compose(fg, h);
                        let right = self.compose(f, gh);
                        if left.is_some() || right.is_some() {
                            if left != right {
                                return Err(KGraphError::CategoryLawViolation(format!(
                                    "associativity at ({f}, {g}, {h})"
                                )));
                            }
                        }
                    }
                }
            }
        }
        // Degree additivity rules out right-invertible non-identities,
        // but the presentation is untrusted.
        for (&(f, _g), &h) in &self.compose {
            if self.morphisms[h].degree.iter().all(|&d| d == 0)
                && !self.morphisms[f].degree.iter().all(|&d| d == 0)
            {
                return Err(KGraphError::RightInvertibleNonIdentity(f));
            }
        }
        Ok(())
    }

    fn check_factorization(&self) -> Result<(), KGraphError> {
        for (i, m) in self.morphisms.iter().enumerate() {
            for split in degree_splits(&m.degree) {
                let matches: Vec<(usize, usize)> = self
                    .compose
                    .iter()
                    .filter(|(&(g, h), &val)| {
                        val == i && self.morphisms[g].degree == split && {
                            let _ = h;
                            true
                        }
                    })
                    .map(|(&(g, h), _)| (g, h))
                    .collect();
                match matches.len() {
                    0 => return Err(KGraphError::FactorizationMissing(i, split)),
                    1 => {}
                    _ => return Err(KGraphError::FactorizationAmbiguous(i, split)),
                }
            }
        }
        Ok(())
    }

    pub fn compose(&self, f: usize, g: usize) -> Option<usize> {
        self.compose.get(&(f, g)).copied()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.morphisms.iter().position(|m| m.label == label)
    }

    /// The unique (g, h) with f = g·h and ∂(g) = n.
    pub fn factor(&self, f: usize, n: &[u32]) -> Option<(usize, usize)> {
        self.compose
            .iter()
            .find(|(&(g, _), &val)| val == f && self.morphisms[g].degree == n)
            .map(|(&(g, h), _)| (g, h))
    }

    /// f divides g within the truncation.
    pub fn divides(&self, f: usize, g: usize) -> bool {
        if f == g {
            return true;
        }
        let (df, dg) = (&self.morphisms[f].degree, &self.morphisms[g].degree);
        deg_leq(df, dg) && self.factor(g, df).map(|(a, _)| a == f).unwrap_or(false)
    }

    /// Edges: morphisms of degree a canonical basis vector.
    pub fn edges_of_color(&self, color: usize) -> Vec<usize> {
        (0..self.morphisms.len())
            .filter(|&i| {
                let d = &self.morphisms[i].degree;
                d.iter().enumerate().all(|(c, &x)| x == u32::from(c == color))
            })
            .collect()
    }

    /// Little pull-back property: a mixed-color edge square is
    /// determined by its two range-side legs. Returns violating square
    /// pairs.
    pub fn little_pullback_check(&self) -> (bool, Vec<(usize, usize)>) {
        let mut witnesses = Vec::new();
        for c1 in 0..self.k {
            for c2 in (c1 + 1)..self.k {
                let mut e1 = vec![0u32; self.k];
                e1[c1] = 1;
                let mut e2 = vec![0u32; self.k];
                e2[c2] = 1;
                let target = deg_add(&e1, &e2);
                let squares: Vec<usize> = (0..self.morphisms.len())
                    .filter(|&i| self.morphisms[i].degree == target)
                    .collect();
                let mut by_legs: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
                for &s in &squares {
                    let (leg1, _) = self.factor(s, &e1).expect("validated factorization");
                    let (leg2, _) = self.factor(s, &e2).expect("validated factorization");
                    by_legs.entry((leg1, leg2)).or_default().push(s);
                }
                for group in by_legs.values() {
                    if group.len() > 1 {
                        witnesses.push((group[0], group[1]));
                    }
                }
            }
        }
        (witnesses.is_empty(), witnesses)
    }

    /// Λ^min(f, g): pairs (p, q) with f·p = g·q of minimal joint degree.
    pub fn lambda_min(&self, f: usize, g: usize) -> Result<Vec<(usize, usize)>, KGraphError> {
        let join = deg_join(&self.morphisms[f].degree, &self.morphisms[g].degree);
        if !deg_leq(&join, &self.depth) {
            return Err(KGraphError::BoundExceeded);
        }
        let mut out = Vec::new();
        for m in 0..self.morphisms.len() {
            if self.morphisms[m].degree != join {
                continue;
            }
            let pf = self.factor(m, &self.morphisms[f].degree);
            let pg = self.factor(m, &self.morphisms[g].degree);
            if let (Some((a, p)), Some((b, q))) = (pf, pg) {
                if a == f && b == g {
                    out.push((p, q));
                }
            }
        }
        Ok(out)
    }

    /// Single alignment within the truncation: every pair whose joint
    /// degree stays in bound has at most one minimal common extension.
    pub fn is_singly_aligned(&self) -> bool {
        for f in 0..self.morphisms.len() {
            for g in 0..self.morphisms.len() {
                if let Ok(pairs) = self.lambda_min(f, g) {
                    if pairs.len() > 1 {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// lcm at the joint degree, verified to divide every common multiple
    /// within the bound.
    pub fn lcm(&self, f: usize, g: usize) -> Result<Option<usize>, KGraphError> {
        let pairs = self.lambda_min(f, g)?;
        match pairs.as_slice() {
            [] => Ok(None),
            [(p, _q)] => {
                let m = self.compose(f, *p).expect("minimal extension composes");
                for n in 0..self.morphisms.len() {
                    if self.divides(f, n) && self.divides(g, n) {
                        assert!(self.divides(m, n), "lcm does not divide a common multiple");
                    }
                }
                Ok(Some(m))
            }
            _ => Err(KGraphError::FactorizationAmbiguous(
                f,
                deg_join(&self.morphisms[f].degree, &self.morphisms[g].degree),
            )),
        }
    }

    /// Strip the identities and return the truncation as a semigroupoid
    /// (declared truncated), with the index bridge and the list of
    /// vertices violating the everything-receives-an-arrow hypothesis.
    pub fn to_semigroupoid(&self) -> Result<(Semigroupoid, Vec<usize>, Vec<usize>), KGraphError> {
        let elems: Vec<usize> = (0..self.morphisms.len())
            .filter(|&i| !self.morphisms[i].degree.iter().all(|&d| d == 0))
            .collect();
        let labels: Vec<String> =
            elems.iter().map(|&i| self.morphisms[i].label.clone()).collect();
        let pos = |i: usize| elems.iter().position(|&j| j == i);
        let mut table = BTreeMap::new();
        for (a, &f) in elems.iter().enumerate() {
            for (b, &g) in elems.iter().enumerate() {
                if let Some(h) = self.compose(f, g) {
                    table.insert((a, b), pos(h).expect("nonzero degrees add"));
                }
            }
        }
        // Ambient right sets: in the untruncated k-graph, g composes
        // after f exactly when its range is the source vertex of f.
        let ambient: Vec<u64> = elems
            .iter()
            .map(|&f| {
                let v = self.morphisms[f].src;
                elems
                    .iter()
                    .enumerate()
                    .filter(|&(_, &g)| self.morphisms[g].rng == v)
                    .fold(0u64, |m, (b, _)| m | (1 << b))
            })
            .collect();
        let sgpd = Semigroupoid::validate_truncated(labels, &table, ambient)?;
        let starved: Vec<usize> = (0..self.vertices.len())
            .filter(|&v| {
                !elems.iter().any(|&i| self.morphisms[i].rng == v)
            })
            .collect();
        Ok((sgpd, elems, starved))
    }

    /// Validate a truncated boundary path: a hereditary, join-closed
    /// degree support with a degree-respecting, divisibility-respecting
    /// assignment. Returns the stem (semigroupoid indices) and the
    /// tightness verdict under the per-color edge covers.
    pub fn boundary_path_check(
        &self,
        assignment: &BTreeMap<Vec<u32>, String>,
    ) -> Result<(BTreeSet<usize>, TightVerdict), KGraphError> {
        if assignment.is_empty() {
            return Err(KGraphError::BadPresentation("boundary data must be nonempty".into()));
        }
        let degrees: Vec<Vec<u32>> = assignment.keys().cloned().collect();
        for d in &degrees {
            if d.iter().all(|&x| x == 0) {
                return Err(KGraphError::BadPresentation(
                    "degree zero cannot appear in boundary data".into(),
                ));
            }
            for m in &degrees {
                let _ = m;
            }
            // Hereditary: every nonzero n ≤ d within the box appears.
            for n in degree_box(d) {
                if n.iter().all(|&x| x == 0) || n == *d {
                    continue;
                }
                if !assignment.contains_key(&n) {
                    return Err(KGraphError::NotHereditary(n));
                }
            }
        }
        for a in &degrees {
            for b in &degrees {
                let j = deg_join(a, b);
                if deg_leq(&j, &self.depth) && !assignment.contains_key(&j) {
                    return Err(KGraphError::NotJoinClosed(a.clone(), b.clone()));
                }
            }
        }
        let mut mu: BTreeMap<Vec<u32>, usize> = BTreeMap::new();
        for (d, label) in assignment {
            let i = self
                .index_of(label)
                .ok_or_else(|| KGraphError::BadPresentation(format!("unknown label {label}")))?;
            if self.morphisms[i].degree != *d {
                return Err(KGraphError::BadPresentation(format!(
                    "assignment at {d:?} has degree {:?}",
                    self.morphisms[i].degree
                )));
            }
            mu.insert(d.clone(), i);
        }
        for (a, &fa) in &mu {
            for (b, &fb) in &mu {
                if deg_leq(a, b) && !self.divides(fa, fb) {
                    return Err(KGraphError::DivisibilityViolation(a.clone(), b.clone()));
                }
            }
        }
        let (sgpd, elems, _) = self.to_semigroupoid()?;
        let stem: BTreeSet<usize> = mu
            .values()
            .map(|&i| elems.iter().position(|&j| j == i).expect("nonzero degree"))
            .collect();
        paths::validate_path(&sgpd, &stem)?;
        let oracle = DegreeIncrementOracle { kgraph: self, elems: &elems, sgpd: &sgpd };
        let verdict = paths::is_tight_stem_truncated(&sgpd, &stem, &oracle)?;
        Ok((stem, verdict))
    }
}

fn degree_splits(d: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for &x in d {
        let mut next = Vec::new();
        for prefix in out {
            for v in 0..=x {
                let mut p = prefix.clone();
                p.push(v);
                next.push(p);
            }
        }
        out = next;
    }
    out
}

fn degree_box(d: &[u32]) -> Vec<Vec<u32>> {
    degree_splits(d)
}

/// The per-color edge families into the relevant vertex: finite covers
/// of right sets and ranges that remain valid in the untruncated
/// object of a row-finite source-free k-graph.
pub struct DegreeIncrementOracle<'a> {
    kgraph: &'a KGraphPresentation,
    elems: &'a [usize],
    sgpd: &'a Semigroupoid,
}

impl<'a> DegreeIncrementOracle<'a> {
    fn edge_covers_at(&self, vertex: usize) -> Vec<Vec<usize>> {
        let mut covers = Vec::new();
        for color in 0..self.kgraph.k {
            let edges: Vec<usize> = self
                .kgraph
                .edges_of_color(color)
                .into_iter()
                .filter(|&e| self.kgraph.morphisms[e].rng == vertex)
                .filter_map(|e| self.elems.iter().position(|&j| j == e))
                .collect();
            if !edges.is_empty() {
                covers.push(edges);
            }
        }
        let _ = self.sgpd;
        covers
    }
}

impl<'a> TruncationCovers for DegreeIncrementOracle<'a> {
    fn right_set_covers(&self, f: usize) -> Vec<Vec<usize>> {
        let morphism = self.elems[f];
        self.edge_covers_at(self.kgraph.morphisms[morphism].src)
    }

    fn range_covers(&self, stem_element: usize) -> Vec<Vec<usize>> {
        let morphism = self.elems[stem_element];
        self.edge_covers_at(self.kgraph.morphisms[morphism].rng)
    }
}

/// Generator form for k ≤ 2: vertices, colored edges, and the square
/// relations pairing color-1-first words with color-2-first words. The
/// presentation is expanded to normal forms (color-1 segment then
/// color-2 segment) up to the depth bound and validated.
pub struct KGraphGenerators {
    pub k: usize,
    pub vertices: Vec<String>,
    /// (name, color in 1..=k, src vertex, rng vertex).
    pub edges: Vec<(String, usize, String, String)>,
    /// Each square is a pair of two-edge words "x,y" with x·y read
    /// range-end first; the two sides must use opposite color orders.
    pub squares: Vec<(String, String)>,
    pub depth: Vec<u32>,
}

pub fn compile_generators(gen: &KGraphGenerators) -> Result<KGraphPresentation, KGraphError> {
    if gen.k == 0 || gen.k > 2 {
        return Err(KGraphError::BadPresentation(
            "generator form supports rank 1 and 2 only".into(),
        ));
    }
    let vpos = |name: &str| -> Result<usize, KGraphError> {
        gen.vertices
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| KGraphError::BadPresentation(format!("unknown vertex {name}")))
    };
    #[derive(Clone)]
    struct Edge {
        name: String,
        color: usize,
        src: usize,
        rng: usize,
    }
    let mut edges = Vec::new();
    for (name, color, src, rng) in &gen.edges {
        if *color == 0 || *color > gen.k {
            return Err(KGraphError::BadPresentation(format!("edge {name} has bad color")));
        }
        edges.push(Edge { name: name.clone(), color: *color - 1, src: vpos(src)?, rng: vpos(rng)? });
    }
    let epos = |name: &str| -> Result<usize, KGraphError> {
        edges
            .iter()
            .position(|e| e.name == name)
            .ok_or_else(|| KGraphError::BadPresentation(format!("unknown edge {name}")))
    };
    // Square rewriting: color-2-first pair -> color-1-first pair.
    let mut swap: BTreeMap<(usize, usize), (usize, usize)> = BTreeMap::new();
    let mut swap_back: BTreeMap<(usize, usize), (usize, usize)> = BTreeMap::new();
    for (side1, side2) in &gen.squares {
        let parse = |side: &str| -> Result<(usize, usize), KGraphError> {
            let parts: Vec<&str> = side.split(',').map(str::trim).collect();
            if parts.len() != 2 {
                return Err(KGraphError::BadPresentation(format!("square side {side}")));
            }
            Ok((epos(parts[0])?, epos(parts[1])?))
        };
        let (a, b) = parse(side1)?;
        let (c, d) = parse(side2)?;
        let (c1_first, c2_first) = if edges[a].color == 0 && edges[b].color == 1 {
            ((a, b), (c, d))
        } else {
            ((c, d), (a, b))
        };
        if edges[c1_first.0].color != 0
            || edges[c1_first.1].color != 1
            || edges[c2_first.0].color != 1
            || edges[c2_first.1].color != 0
        {
            return Err(KGraphError::BadPresentation(
                "square sides must pair the two color orders".into(),
            ));
        }
        if swap.insert(c2_first, c1_first).is_some() {
            return Err(KGraphError::BadPresentation(
                "two squares share a color-2-first side".into(),
            ));
        }
        if swap_back.insert(c1_first, c2_first).is_some() {
            return Err(KGraphError::BadPresentation(
                "two squares share a color-1-first side".into(),
            ));
        }
    }
    // Normal forms: a color-1 path followed by a color-2 path.
    let paths_of_color = |color: usize, len: u32| -> Vec<Vec<usize>> {
        let mut acc: Vec<Vec<usize>> = vec![vec![]];
        for _ in 0..len {
            let mut next = Vec::new();
            for p in &acc {
                for (i, e) in edges.iter().enumerate() {
                    if e.color != color {
                        continue;
                    }
                    if let Some(&last) = p.last() {
                        if edges[last].src != e.rng {
                            continue;
                        }
                    }
                    let mut np = p.clone();
                    np.push(i);
                    next.push(np);
                }
            }
            acc = next;
        }
        acc
    };
    #[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
    struct Normal {
        c1: Vec<usize>,
        c2: Vec<usize>,
        src: usize,
        rng: usize,
    }
    let mut normals: Vec<Normal> = Vec::new();
    let d1 = gen.depth[0];
    let d2 = if gen.k == 2 { gen.depth[1] } else { 0 };
    for m in 0..=d1 {
        for n in 0..=d2 {
            for p1 in paths_of_color(0, m) {
                for p2 in paths_of_color(1, n) {
                    let (src, rng) = match (p1.as_slice(), p2.as_slice()) {
                        ([], []) => continue,
                        ([.., l], []) => (edges[*l].src, edges[p1[0]].rng),
                        ([], [.., l]) => (edges[*l].src, edges[p2[0]].rng),
                        ([.., l1], [f2, ..]) => {
                            if edges[*l1].src != edges[*f2].rng {
                                continue;
                            }
                            (edges[*p2.last().unwrap()].src, edges[p1[0]].rng)
                        }
                    };
                    normals.push(Normal { c1: p1.clone(), c2: p2.clone(), src, rng });
                }
            }
        }
    }
    normals.sort();
    normals.dedup();
    // Normalize an arbitrary edge word by bubbling color-1 edges left.
    let normalize = |word: &[usize]| -> Result<Vec<usize>, KGraphError> {
        let mut w = word.to_vec();
        loop {
            let mut changed = false;
            for i in 0..w.len().saturating_sub(1) {
                if edges[w[i]].color == 1 && edges[w[i + 1]].color == 0 {
                    let key = (w[i], w[i + 1]);
                    let (a, b) = *swap.get(&key).ok_or_else(|| {
                        KGraphError::BadPresentation(format!(
                            "no square rewrites {},{}",
                            edges[key.0].name, edges[key.1].name
                        ))
                    })?;
                    w[i] = a;
                    w[i + 1] = b;
                    changed = true;
                }
            }
            if !changed {
                return Ok(w);
            }
        }
    };
    let npos = |w: &[usize]| -> Option<usize> {
        let split = w.iter().position(|&e| edges[e].color == 1).unwrap_or(w.len());
        let (c1, c2) = w.split_at(split);
        normals.iter().position(|n| n.c1 == c1 && n.c2 == c2)
    };
    let render = |n: &Normal| -> String {
        n.c1.iter()
            .chain(n.c2.iter())
            .map(|&e| edges[e].name.clone())
            .collect::<Vec<_>>()
            .join(".")
    };
    let mut morphisms: Vec<Morphism> = gen
        .vertices
        .iter()
        .enumerate()
        .map(|(v, name)| Morphism {
            label: format!("id_{name}"),
            src: v,
            rng: v,
            degree: vec![0; gen.k],
        })
        .collect();
    for n in &normals {
        let mut degree = vec![n.c1.len() as u32];
        if gen.k == 2 {
            degree.push(n.c2.len() as u32);
        }
        morphisms.push(Morphism { label: render(n), src: n.src, rng: n.rng, degree });
    }
    let nv = gen.vertices.len();
    let mut table = BTreeMap::new();
    for (i, mi) in morphisms.iter().enumerate() {
        for (j, mj) in morphisms.iter().enumerate() {
            if mi.src != mj.rng {
                continue;
            }
            let total = deg_add(&mi.degree, &mj.degree);
            if !deg_leq(&total, &gen.depth) {
                continue;
            }
            let target = if i < nv {
                j
            } else if j < nv {
                i
            } else {
                let (a, b) = (&normals[i - nv], &normals[j - nv]);
                let word: Vec<usize> = a
                    .c1
                    .iter()
                    .chain(a.c2.iter())
                    .chain(b.c1.iter())
                    .chain(b.c2.iter())
                    .copied()
                    .collect();
                let nw = normalize(&word)?;
                nv + npos(&nw).ok_or_else(|| {
                    KGraphError::BadPresentation("normal form escapes the enumeration".into())
                })?
            };
            table.insert((i, j), target);
        }
    }
    KGraphPresentation::validate(gen.k, gen.vertices.clone(), morphisms, table, gen.depth.clone())
}

/// The single-vertex 2-graph with one blue and one red edge and the
/// commuting square, truncated at the given depth.
pub fn single_vertex_grid(d1: u32, d2: u32) -> KGraphPresentation {
    compile_generators(&KGraphGenerators {
        k: 2,
        vertices: vec!["v".into()],
        edges: vec![
            ("b".into(), 1, "v".into(), "v".into()),
            ("r".into(), 2, "v".into(), "v".into()),
        ],
        squares: vec![("b,r".into(), "r,b".into())],
        depth: vec![d1, d2],
    })
    .expect("the grid compiles")
}

/// The single-vertex 1-graph with two edges (the rank-one model of two
/// isometries), truncated at the given depth.
pub fn cuntz_graph(depth: u32) -> KGraphPresentation {
    compile_generators(&KGraphGenerators {
        k: 1,
        vertices: vec!["v".into()],
        edges: vec![
            ("1".into(), 1, "v".into(), "v".into()),
            ("2".into(), 1, "v".into(), "v".into()),
        ],
        squares: vec![],
        depth: vec![depth],
    })
    .expect("the rank-one presentation compiles")
}

/// A single-vertex 2-graph whose square relations define two distinct
/// squares with the same range-side legs: a valid presentation at depth
/// (1,1) that fails the little pull-back property.
pub fn double_square_presentation() -> KGraphPresentation {
    compile_generators(&KGraphGenerators {
        k: 2,
        vertices: vec!["v".into()],
        edges: vec![
            ("f".into(), 1, "v".into(), "v".into()),
            ("q1".into(), 1, "v".into(), "v".into()),
            ("q2".into(), 1, "v".into(), "v".into()),
            ("g".into(), 2, "v".into(), "v".into()),
            ("p1".into(), 2, "v".into(), "v".into()),
            ("p2".into(), 2, "v".into(), "v".into()),
        ],
        squares: vec![
            ("f,p1".into(), "g,q1".into()),
            ("f,p2".into(), "g,q2".into()),
            ("f,g".into(), "p1,f".into()),
            ("q1,g".into(), "g,f".into()),
            ("q1,p1".into(), "p1,q1".into()),
            ("q1,p2".into(), "p2,q1".into()),
            ("q2,p1".into(), "p1,q2".into()),
            ("q2,p2".into(), "p2,q2".into()),
            ("q2,g".into(), "p2,f".into()),
        ],
        depth: vec![1, 1],
    })
    .expect("the double-square presentation compiles at depth (1,1)")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_compiles_and_validates() {
        let g = single_vertex_grid(3, 3);
        // Morphisms are the degree vectors (m, n) ≤ (3, 3).
        assert_eq!(g.morphisms.len(), 16);
        let (ok, w) = g.little_pullback_check();
        assert!(ok && w.is_empty());
        assert!(g.is_singly_aligned());
    }

    #[test]
    fn one_graphs_are_trivially_fine() {
        let c = cuntz_graph(2);
        assert_eq!(c.morphisms.len(), 1 + 2 + 4);
        let (ok, _) = c.little_pullback_check();
        assert!(ok);
        assert!(c.is_singly_aligned());
    }

    #[test]
    fn grid_lambda_min_is_the_square() {
        let g = single_vertex_grid(3, 3);
        let b = g.index_of("b").unwrap();
        let r = g.index_of("r").unwrap();
        let pairs = g.lambda_min(b, r).unwrap();
        assert_eq!(pairs, vec![(r, b)]);
        let m = g.lcm(b, r).unwrap().unwrap();
        assert_eq!(g.morphisms[m].degree, vec![1, 1]);
        // Divisor case: lcm(f, f·h) = f·h with minimal pair (h, id).
        let br = g.index_of("b.r").unwrap();
        assert_eq!(g.lcm(b, br).unwrap(), Some(br));
    }

    #[test]
    fn double_square_fails_little_pullback() {
        let d = double_square_presentation();
        let (ok, witnesses) = d.little_pullback_check();
        assert!(!ok);
        assert!(!witnesses.is_empty());
        let f = d.index_of("f").unwrap();
        let g = d.index_of("g").unwrap();
        assert_eq!(d.lambda_min(f, g).unwrap().len(), 2);
        assert!(!d.is_singly_aligned());
    }

    #[test]
    fn to_semigroupoid_matches_direct_truncations() {
        let g = single_vertex_grid(2, 2);
        let (sgpd, _, starved) = g.to_semigroupoid().unwrap();
        assert!(starved.is_empty());
        assert_eq!(sgpd.len(), 8);
        assert!(sgpd.check_standing_hypothesis().holds);
        let c = cuntz_graph(2);
        let (t2, _, _) = c.to_semigroupoid().unwrap();
        assert_eq!(t2.len(), 6);
        assert!(t2.check_standing_hypothesis().holds);
    }

    #[test]
    fn axis_stem_is_refuted_by_the_red_cover() {
        let g = single_vertex_grid(3, 3);
        let mut assignment = BTreeMap::new();
        for m in 1..=3u32 {
            let label = (0..m).map(|_| "b").collect::<Vec<_>>().join(".");
            assignment.insert(vec![m, 0], label);
        }
        let (_stem, verdict) = g.boundary_path_check(&assignment).unwrap();
        match verdict {
            TightVerdict::NotTight { refutation } => {
                let r = refutation
                    .cover
                    .iter()
                    .map(|&i| {
                        let (sgpd, _, _) = g.to_semigroupoid().unwrap();
                        sgpd.label(i).to_string()
                    })
                    .collect::<Vec<_>>();
                assert_eq!(r, vec!["r"]);
            }
            other => panic!("expected a refutation, got {other:?}"),
        }
    }

    #[test]
    fn full_grid_stem_is_tight_to_depth() {
        let g = single_vertex_grid(3, 3);
        let mut assignment = BTreeMap::new();
        for m in 0..=3u32 {
            for n in 0..=3u32 {
                if m + n == 0 {
                    continue;
                }
                let mut parts: Vec<&str> = Vec::new();
                parts.extend(std::iter::repeat("b").take(m as usize));
                parts.extend(std::iter::repeat("r").take(n as usize));
                assignment.insert(vec![m, n], parts.join("."));
            }
        }
        let (stem, verdict) = g.boundary_path_check(&assignment).unwrap();
        assert_eq!(stem.len(), 15);
        assert_eq!(verdict, TightVerdict::Unknown);
    }

    #[test]
    fn empty_boundary_rejected() {
        let g = single_vertex_grid(2, 2);
        assert!(g.boundary_path_check(&BTreeMap::new()).is_err());
    }

    #[test]
    fn broken_boundary_data_rejected() {
        let g = single_vertex_grid(2, 2);
        let mut a = BTreeMap::new();
        a.insert(vec![2, 0], "b.b".to_string());
        assert!(matches!(
            g.boundary_path_check(&a),
            Err(KGraphError::NotHereditary(_))
        ));
    }
}

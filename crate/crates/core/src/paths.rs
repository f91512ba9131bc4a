//! Categorical semigroupoids: the range map, the split of the idempotent
//! semilattice of S(Λ) into generator and domain projections, stems and
//! paths, the filter-path bijection, and tight-filter classification
//! with exhaustive or truncation-supplied covers.

use crate::semilattice::{Filter, TightMode};
use crate::sgpd::{mask_to_vec, Flank, Semigroupoid};
use crate::slambda::{SLTriple, SLambda};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PathError {
    #[error("semigroupoid is not categorical: right sets of {0} and {1} overlap without being equal")]
    NotCategorical(usize, usize),
    #[error("stem is not divisor closed: {0} divides a member but is absent")]
    NotDivisorClosed(usize),
    #[error("stem is not directed: members {0} and {1} are disjoint")]
    NotDirected(usize, usize),
    #[error("stem does not contain the lcm of {0} and {1}")]
    LcmEscapes(usize, usize),
    #[error("generator/domain split does not reproduce the idempotents")]
    DecompositionMismatch,
    #[error("stem contains the spring {0}, which has no nonzero projection")]
    SpringInStem(usize),
}

/// Is the semigroupoid categorical: are the right-composition sets
/// pairwise equal or disjoint? Declared truncations are judged at the
/// ambient level (where their validation already enforces this).
/// Returns a witness pair on failure.
pub fn is_categorical(sgpd: &Semigroupoid) -> Result<(), PathError> {
    for f in 0..sgpd.len() {
        for g in (f + 1)..sgpd.len() {
            let (a, b) = (sgpd.ambient_right_mask(f), sgpd.ambient_right_mask(g));
            if a & b != 0 && a != b {
                return Err(PathError::NotCategorical(f, g));
            }
        }
    }
    Ok(())
}

/// The range of f: the unique member of Q containing it, when one does.
pub fn range_of(sgpd: &Semigroupoid, f: usize) -> Option<u64> {
    (0..sgpd.len())
        .map(|g| sgpd.ambient_right_mask(g))
        .find(|m| m & (1 << f) != 0)
}

/// Validate the path axioms for a stem: closed under divisors, and any
/// two members intersect with their lcm inside the stem.
pub fn validate_path(sgpd: &Semigroupoid, stem: &BTreeSet<usize>) -> Result<(), PathError> {
    for &f in stem {
        for g in 0..sgpd.len() {
            if sgpd.divides(g, f) && !stem.contains(&g) {
                return Err(PathError::NotDivisorClosed(g));
            }
        }
    }
    for &f in stem {
        for &g in stem {
            if sgpd.disjoint(f, g) {
                return Err(PathError::NotDirected(f, g));
            }
            let m = sgpd.lcm(f, g).map_err(|_| PathError::LcmEscapes(f, g))?;
            match m {
                Some(m) if stem.contains(&m) => {}
                _ => return Err(PathError::LcmEscapes(f, g)),
            }
        }
    }
    Ok(())
}

/// All nonempty paths avoiding springs. A finite directed path has a
/// maximum, so these are exactly the divisor-sets of non-spring
/// elements (divisors of non-springs are never springs).
pub fn enumerate_spring_free_paths(sgpd: &Semigroupoid) -> Vec<BTreeSet<usize>> {
    let mut out: Vec<BTreeSet<usize>> = Vec::new();
    for m in 0..sgpd.len() {
        if sgpd.right_mask(m) == 0 {
            continue;
        }
        let stem: BTreeSet<usize> =
            (0..sgpd.len()).filter(|&g| sgpd.divides(g, m)).collect();
        debug_assert!(validate_path(sgpd, &stem).is_ok());
        if !out.contains(&stem) {
            out.push(stem);
        }
    }
    out
}

/// The classification of a filter over E(S(Λ)) by its intersection with
/// the generator and domain projections.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum FilterKind {
    /// Only generator projections; the stem has no defined range.
    P,
    /// A single domain projection and nothing else.
    Q { domain: Vec<usize> },
    /// Generator projections together with the domain projection of the
    /// common range of the stem.
    PQ { domain: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassifiedFilter {
    pub filter: Filter,
    pub kind: FilterKind,
    pub stem: BTreeSet<usize>,
}

/// The generator/domain split of the idempotents: nonzero idempotents
/// of S(Λ) over a categorical semigroupoid are exactly the range
/// projections of non-springs and the domain projections of nonempty Q
/// members, disjointly.
pub fn generator_domain_split(sl: &SLambda) -> Result<(Vec<usize>, Vec<usize>), PathError> {
    is_categorical(sl.sgpd())?;
    let mut e_p = Vec::new();
    let mut e_q = Vec::new();
    let mut seen = BTreeSet::new();
    for f in 0..sl.sgpd().len() {
        if sl.sgpd().right_mask(f) != 0 {
            let i = sl.index_of(sl.range_projection(f)).unwrap();
            if seen.insert(i) {
                e_p.push(i);
            }
        }
    }
    for d in sl.q_collection() {
        if d.elems != 0 {
            let i = sl.index_of(SLTriple::new(Flank::Unit, d.elems, Flank::Unit)).unwrap();
            if seen.insert(i) {
                e_q.push(i);
            }
        }
    }
    let mut expected: BTreeSet<usize> = (0..sl.len())
        .filter(|&i| sl.isg().is_idempotent(i) && sl.triple(i) != SLTriple::Zero)
        .collect();
    for &i in e_p.iter().chain(e_q.iter()) {
        if !expected.remove(&i) {
            return Err(PathError::DecompositionMismatch);
        }
    }
    if !expected.is_empty() {
        return Err(PathError::DecompositionMismatch);
    }
    e_p.sort_unstable();
    e_q.sort_unstable();
    Ok((e_p, e_q))
}

/// Bridge between S(Λ) and the semilattice of its idempotents: indices
/// of E-lattice elements paired with their triples.
pub struct IdempotentLattice {
    pub lattice: crate::semilattice::Semilattice,
    /// E-lattice index -> S(Λ) element index.
    pub to_slambda: Vec<usize>,
}

pub fn idempotent_lattice(sl: &SLambda) -> IdempotentLattice {
    let (lattice, to_slambda) = sl.isg().idempotent_semilattice();
    IdempotentLattice { lattice, to_slambda }
}

/// Classify a filter of the idempotent semilattice of S(Λ) over a
/// categorical semigroupoid.
pub fn classify_filter(
    sl: &SLambda,
    il: &IdempotentLattice,
    filter: Filter,
) -> Result<ClassifiedFilter, PathError> {
    is_categorical(sl.sgpd())?;
    let mut stem = BTreeSet::new();
    let mut domain: Option<u64> = None;
    for li in il.lattice.filter_support(filter) {
        match sl.triple(il.to_slambda[li]) {
            SLTriple::Zero => unreachable!("filters avoid zero"),
            SLTriple::T { f: Flank::Unit, a, g: Flank::Unit } => {
                assert!(domain.is_none(), "categorical domains are pairwise disjoint");
                domain = Some(a);
            }
            SLTriple::T { f: Flank::El(f), .. } => {
                stem.insert(f);
            }
            SLTriple::T { f: Flank::Unit, .. } => {
                unreachable!("mixed flanks are never idempotent")
            }
        }
    }
    validate_path(sl.sgpd(), &stem).ok();
    let kind = match (stem.is_empty(), domain) {
        (true, Some(a)) => FilterKind::Q { domain: mask_to_vec(a) },
        (false, Some(a)) => {
            // The stem must sit inside the domain member.
            for &f in &stem {
                assert!(a & (1 << f) != 0, "stem escapes its range");
            }
            FilterKind::PQ { domain: mask_to_vec(a) }
        }
        (false, None) => FilterKind::P,
        (true, None) => unreachable!("empty filter"),
    };
    Ok(ClassifiedFilter { filter, kind, stem })
}

/// Enumerate filters and spring-free paths independently and verify the
/// two canonical maps between them are mutually inverse. Returns
/// (classified filters, paths).
pub fn path_filter_bijection(
    sl: &SLambda,
) -> Result<(Vec<ClassifiedFilter>, Vec<BTreeSet<usize>>), PathError> {
    let il = idempotent_lattice(sl);
    let filters = il.lattice.enumerate_filters();
    let classified: Vec<ClassifiedFilter> = filters
        .iter()
        .map(|&f| classify_filter(sl, &il, f))
        .collect::<Result<_, _>>()?;
    let paths = enumerate_spring_free_paths(sl.sgpd());
    let non_q: Vec<&ClassifiedFilter> =
        classified.iter().filter(|c| !matches!(c.kind, FilterKind::Q { .. })).collect();
    // Stems of non-q filters are exactly the spring-free paths.
    let mut stems: Vec<BTreeSet<usize>> = non_q.iter().map(|c| c.stem.clone()).collect();
    stems.sort();
    let mut sorted_paths = paths.clone();
    sorted_paths.sort();
    if stems != sorted_paths || stems.len() != non_q.len() {
        return Err(PathError::DecompositionMismatch);
    }
    // Inverse direction: rebuild the filter from each path and compare.
    for path in &paths {
        let rebuilt = filter_of_path(sl, &il, path)?;
        let found = non_q.iter().find(|c| c.stem == *path).unwrap();
        assert_eq!(rebuilt, found.filter, "path does not rebuild its filter");
    }
    Ok((classified, paths))
}

/// The filter associated to a nonempty spring-free path: its generator
/// projections plus the domain projection of its range when defined.
pub fn filter_of_path(
    sl: &SLambda,
    il: &IdempotentLattice,
    path: &BTreeSet<usize>,
) -> Result<Filter, PathError> {
    validate_path(sl.sgpd(), path)?;
    let mut support: BTreeSet<usize> = BTreeSet::new();
    for &f in path {
        if sl.sgpd().right_mask(f) == 0 {
            return Err(PathError::SpringInStem(f));
        }
        let si = sl.index_of(sl.range_projection(f)).unwrap();
        support.insert(il.to_slambda.iter().position(|&x| x == si).unwrap());
    }
    let ranges: BTreeSet<u64> =
        path.iter().filter_map(|&f| range_of(sl.sgpd(), f)).collect();
    assert!(ranges.len() <= 1, "path members share their range");
    if let Some(&a) = ranges.iter().next() {
        let si = sl.index_of(SLTriple::new(Flank::Unit, a, Flank::Unit)).unwrap();
        support.insert(il.to_slambda.iter().position(|&x| x == si).unwrap());
    }
    // The support is an up-set: find its minimum.
    let min = support
        .iter()
        .copied()
        .reduce(|a, b| il.lattice.meet(a, b))
        .expect("nonempty path");
    assert!(support.contains(&min), "support is not principal");
    assert_eq!(
        il.lattice.filter_support(Filter { min }),
        support.iter().copied().collect::<Vec<_>>(),
        "support is not an up-set"
    );
    Ok(Filter { min })
}

/// The basic order and orthogonality laws of the generator and domain
/// projections, verified exhaustively:
/// products of intersecting generators land on the lcm, disjoint ones
/// vanish, order against domain projections is membership, and distinct
/// domain projections are orthogonal.
pub fn basic_projection_checks(sl: &SLambda) -> Result<(), PathError> {
    is_categorical(sl.sgpd())?;
    let sgpd = sl.sgpd();
    let isg = sl.isg();
    let zero = isg.zero().unwrap();
    let p = |f: usize| sl.index_of(sl.range_projection(f)).unwrap();
    let q_of_mask =
        |a: u64| sl.index_of(SLTriple::new(Flank::Unit, a, Flank::Unit)).unwrap();
    for f in 0..sgpd.len() {
        if sgpd.right_mask(f) == 0 {
            continue;
        }
        for g in 0..sgpd.len() {
            if sgpd.right_mask(g) == 0 {
                continue;
            }
            if sgpd.intersects(f, g) {
                let m = sgpd.lcm(f, g).unwrap().unwrap();
                if sgpd.right_mask(m) != 0 {
                    assert_eq!(isg.mul(p(f), p(g)), p(m));
                }
                assert_eq!(isg.natural_leq(p(f), p(g)), sgpd.divides(g, f));
            } else {
                assert_eq!(isg.mul(p(f), p(g)), zero);
            }
        }
        for d in sl.q_collection() {
            if d.elems == 0 {
                continue;
            }
            let qa = q_of_mask(d.elems);
            let inside = d.elems & (1 << f) != 0;
            assert_eq!(isg.natural_leq(p(f), qa), inside);
            if !inside {
                assert_eq!(isg.mul(p(f), qa), zero);
            }
        }
    }
    for d1 in sl.q_collection() {
        for d2 in sl.q_collection() {
            if d1.elems == 0 || d2.elems == 0 || d1.elems == d2.elems {
                continue;
            }
            assert_eq!(isg.mul(q_of_mask(d1.elems), q_of_mask(d2.elems)), zero);
        }
    }
    Ok(())
}

/// Tightness verdict for a filter; truncations attach the refuting
/// cover when they can refute and stay agnostic otherwise.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum TightVerdict {
    Tight,
    NotTight { refutation: TightRefutation },
    /// All covers supplied by the oracle pass, but the oracle cannot
    /// certify exhaustiveness (depth-truncated data).
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TightRefutation {
    /// The stem element whose right set the cover refines, or None when
    /// the cover refines the range of the stem.
    pub at: Option<usize>,
    /// The refuting cover, as semigroupoid element indices.
    pub cover: Vec<usize>,
}

/// Tight-filter classification on a finite categorical semigroupoid.
/// Covers of the idempotents are enumerated in the semilattice of
/// idempotents of S(Λ) (springs make some semigroupoid-level covers
/// collapse to zero there, so the finite object is read at that level),
/// and the verdict is cross-checked against the brute-force tightness
/// of the corresponding character.
pub fn is_tight_filter_finite(
    sl: &SLambda,
    il: &IdempotentLattice,
    filter: Filter,
) -> Result<TightVerdict, PathError> {
    is_categorical(sl.sgpd())?;
    let lattice = &il.lattice;
    let support = lattice.filter_support(filter);
    let support_mask: u64 = support.iter().fold(0, |m, &i| m | (1 << i));
    let mut verdict = TightVerdict::Tight;
    'outer: for &x in &support {
        let down: Vec<usize> = (0..lattice.len()).filter(|&z| lattice.leq(z, x)).collect();
        let down_mask: u64 = down.iter().fold(0, |m, &i| m | (1 << i));
        for z_mask in lattice.minimal_covers(down_mask) {
            if z_mask & support_mask != 0 {
                continue;
            }
            verdict = TightVerdict::NotTight {
                refutation: translate_cover(sl, il, x, z_mask),
            };
            break 'outer;
        }
    }
    let brute = lattice.is_tight_character(filter.character(), TightMode::Full);
    assert_eq!(
        matches!(verdict, TightVerdict::Tight),
        brute,
        "clause classification disagrees with brute-force tightness"
    );
    Ok(verdict)
}

/// Express a failing semilattice cover of an idempotent at the
/// semigroupoid level: covers of a generator projection are extension
/// families of its element, covers of a domain projection are families
/// inside the member.
fn translate_cover(
    sl: &SLambda,
    il: &IdempotentLattice,
    x: usize,
    z_mask: u64,
) -> TightRefutation {
    let triple_of = |li: usize| sl.triple(il.to_slambda[li]);
    let members: Vec<SLTriple> = mask_to_vec(z_mask)
        .into_iter()
        .map(triple_of)
        .collect();
    match triple_of(x) {
        SLTriple::T { f: Flank::El(f), .. } => {
            let cover = members
                .iter()
                .map(|t| match t {
                    SLTriple::T { f: Flank::El(g), .. } => {
                        // g = f·h; report the extension h when proper.
                        if g == &f {
                            f
                        } else {
                            sl.sgpd()
                                .right_set(f)
                                .into_iter()
                                .find(|&h| sl.sgpd().compose(f, h) == Some(*g))
                                .unwrap_or(*g)
                        }
                    }
                    _ => unreachable!("covers of generator projections"),
                })
                .collect();
            TightRefutation { at: Some(f), cover }
        }
        SLTriple::T { f: Flank::Unit, .. } => {
            let cover = members
                .iter()
                .filter_map(|t| match t {
                    SLTriple::T { f: Flank::El(g), .. } => Some(*g),
                    _ => None,
                })
                .collect();
            TightRefutation { at: None, cover }
        }
        SLTriple::Zero => unreachable!(),
    }
}

/// Covers valid in the untruncated object, supplied by whoever knows the
/// full structure (for depth-truncated higher-rank graph data these are
/// the per-color edge families into a vertex).
pub trait TruncationCovers {
    /// Covers of the right-composition set of `f`.
    fn right_set_covers(&self, f: usize) -> Vec<Vec<usize>>;
    /// Covers of the range member shared by the stem of the filter.
    fn range_covers(&self, stem_element: usize) -> Vec<Vec<usize>>;
}

/// Tightness of a stem over a declared truncation: a full-object cover
/// refutes when all of its extensions are visible and none lands in the
/// stem; covers with extensions falling off the truncation cannot be
/// decided, so the absence of a refutation yields `Unknown`
/// (tight to the declared depth).
pub fn is_tight_stem_truncated(
    sgpd: &Semigroupoid,
    stem: &BTreeSet<usize>,
    oracle: &dyn TruncationCovers,
) -> Result<TightVerdict, PathError> {
    validate_path(sgpd, stem)?;
    if stem.is_empty() {
        return Ok(TightVerdict::Unknown);
    }
    for &f in stem {
        for cover in oracle.right_set_covers(f) {
            let extensions: Vec<Option<usize>> =
                cover.iter().map(|&h| sgpd.compose(f, h)).collect();
            if extensions.iter().flatten().any(|fh| stem.contains(fh)) {
                continue;
            }
            if extensions.iter().all(Option::is_some) {
                return Ok(TightVerdict::NotTight {
                    refutation: TightRefutation { at: Some(f), cover },
                });
            }
            // Some extension fell off the truncation: undecidable here.
        }
    }
    let sample = *stem.iter().next().unwrap();
    for cover in oracle.range_covers(sample) {
        if !cover.iter().any(|h| stem.contains(h)) {
            return Ok(TightVerdict::NotTight {
                refutation: TightRefutation { at: None, cover },
            });
        }
    }
    Ok(TightVerdict::Unknown)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::slambda::SLambda;

    #[test]
    fn sg3_is_categorical_with_ranges() {
        let s = corpus::sg3();
        assert!(is_categorical(&s).is_ok());
        assert_eq!(range_of(&s, 1), Some(1 << 1)); // b lies in {b}
        assert_eq!(range_of(&s, 0), None);
        assert_eq!(range_of(&s, 2), None);
    }

    #[test]
    fn overlapping_right_sets_are_not_categorical() {
        let t2 = corpus::free_monoid_truncation(2, 2);
        // Λ^1 = Λ^2 = {1, 2} but Λ^11 = ∅: still pairwise equal or
        // disjoint, so this one is categorical.
        assert!(is_categorical(&t2).is_ok());
        let t3 = corpus::free_monoid_truncation(2, 3);
        // Λ of depth 3 has nested right sets: not categorical.
        assert!(is_categorical(&t3).is_err());
    }

    #[test]
    fn sg3_split() {
        let sl = SLambda::build(&corpus::sg3()).unwrap();
        let (e_p, e_q) = generator_domain_split(&sl).unwrap();
        assert_eq!(e_p.len(), 1);
        assert_eq!(e_q.len(), 1);
    }

    #[test]
    fn sg3_filters_classify_and_biject() {
        let sl = SLambda::build(&corpus::sg3()).unwrap();
        let (classified, paths) = path_filter_bijection(&sl).unwrap();
        assert_eq!(classified.len(), 2);
        assert_eq!(paths.len(), 1);
        let q = classified
            .iter()
            .find(|c| matches!(c.kind, FilterKind::Q { .. }))
            .unwrap();
        assert!(q.stem.is_empty());
        let p = classified.iter().find(|c| matches!(c.kind, FilterKind::P)).unwrap();
        assert_eq!(p.stem.iter().copied().collect::<Vec<_>>(), vec![0]);
    }

    #[test]
    fn projection_laws_on_categorical_corpus() {
        for s in corpus::semigroupoid_corpus(3) {
            if is_categorical(&s).is_err() || !s.check_standing_hypothesis().holds {
                continue;
            }
            let sl = SLambda::build(&s).unwrap();
            basic_projection_checks(&sl).unwrap();
        }
    }

    #[test]
    fn finite_tightness_matches_brute_force() {
        for s in corpus::semigroupoid_corpus(5).into_iter().take(16) {
            if is_categorical(&s).is_err() || !s.check_standing_hypothesis().holds {
                continue;
            }
            let sl = SLambda::build(&s).unwrap();
            let il = idempotent_lattice(&sl);
            for f in il.lattice.enumerate_filters() {
                // The cross-check against brute force happens inside.
                is_tight_filter_finite(&sl, &il, f).unwrap();
            }
        }
    }

    #[test]
    fn q_type_over_springs_is_tight_on_sg3() {
        let sl = SLambda::build(&corpus::sg3()).unwrap();
        let il = idempotent_lattice(&sl);
        for f in il.lattice.enumerate_filters() {
            let c = classify_filter(&sl, &il, f).unwrap();
            let verdict = is_tight_filter_finite(&sl, &il, f).unwrap();
            assert_eq!(verdict, TightVerdict::Tight, "{:?}", c.kind);
        }
    }
}

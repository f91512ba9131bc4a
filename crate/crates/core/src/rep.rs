//! Representations realized as partial bijections of a finite carrier:
//! validation of semigroupoid representations, tightness, the Boolean
//! algebra of domains with its projection-valued map, the canonical
//! tight representation of S(Λ), and the extension round-trip between
//! representations of Λ and of S(Λ).
//!
//! Partial identities on a carrier of at most 64 points are bitmasks, so
//! suprema of projections are unions and 1 - q is set complement.

use crate::inverse::{InverseSemigroup, SpectrumAction};
use crate::semilattice::is_tight_set_representation;
use crate::sgpd::{mask_to_vec, Flank, Semigroupoid};
use crate::slambda::{SLTriple, SLambda};
use std::collections::HashSet;
use thiserror::Error;

pub const MAX_CARRIER: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RepError {
    #[error("carrier too large: {0} (max {MAX_CARRIER})")]
    CarrierTooLarge(usize),
    #[error("map at {0} is not injective")]
    NotInjective(usize),
    #[error("multiplicativity fails at ({0}, {1})")]
    NotMultiplicative(usize, usize),
    #[error("range projections of disjoint pair ({0}, {1}) are not orthogonal")]
    RangesNotOrthogonal(usize, usize),
    #[error("initial projection does not absorb at composable pair ({0}, {1})")]
    InitialNotAbsorbing(usize, usize),
    #[error("star compatibility fails at {0}")]
    StarMismatch(usize),
    #[error("zero is not sent to the empty map")]
    ZeroNotKilled,
    #[error("projection map is not well defined on the domain {0:?}")]
    QNotWellDefined(Vec<usize>),
    #[error("extension is not multiplicative at ({0}, {1})")]
    ExtensionNotMultiplicative(usize, usize),
    #[error("representation does not respect lcm at ({0}, {1})")]
    LcmNotRespected(usize, usize),
}

/// An injective partial map on `{0, .., carrier-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PartialBijection {
    carrier: usize,
    map: Vec<Option<usize>>,
}

impl PartialBijection {
    pub fn new(carrier: usize, map: Vec<Option<usize>>) -> Result<Self, RepError> {
        if carrier > MAX_CARRIER {
            return Err(RepError::CarrierTooLarge(carrier));
        }
        assert_eq!(map.len(), carrier);
        let mut seen = HashSet::new();
        for v in map.iter().flatten() {
            assert!(*v < carrier, "image out of range");
            if !seen.insert(*v) {
                return Err(RepError::NotInjective(*v));
            }
        }
        Ok(PartialBijection { carrier, map })
    }

    pub fn empty(carrier: usize) -> Self {
        PartialBijection { carrier, map: vec![None; carrier] }
    }

    pub fn identity(carrier: usize) -> Self {
        PartialBijection { carrier, map: (0..carrier).map(Some).collect() }
    }

    /// Partial identity on the points of `mask`.
    pub fn partial_identity(carrier: usize, mask: u64) -> Self {
        PartialBijection {
            carrier,
            map: (0..carrier)
                .map(|i| if mask & (1 << i) != 0 { Some(i) } else { None })
                .collect(),
        }
    }

    pub fn carrier(&self) -> usize {
        self.carrier
    }

    pub fn apply(&self, x: usize) -> Option<usize> {
        self.map[x]
    }

    /// Composition `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &PartialBijection) -> PartialBijection {
        assert_eq!(self.carrier, other.carrier);
        PartialBijection {
            carrier: self.carrier,
            map: (0..self.carrier).map(|x| other.map[x].and_then(|y| self.map[y])).collect(),
        }
    }

    /// The relational inverse.
    pub fn inverse(&self) -> PartialBijection {
        let mut map = vec![None; self.carrier];
        for (x, y) in self.map.iter().enumerate() {
            if let Some(y) = y {
                map[*y] = Some(x);
            }
        }
        PartialBijection { carrier: self.carrier, map }
    }

    pub fn domain_mask(&self) -> u64 {
        (0..self.carrier).filter(|&x| self.map[x].is_some()).fold(0, |m, x| m | (1 << x))
    }

    pub fn range_mask(&self) -> u64 {
        self.map.iter().flatten().fold(0, |m, &y| m | (1 << y))
    }

    pub fn is_empty_map(&self) -> bool {
        self.map.iter().all(Option::is_none)
    }

    pub fn is_partial_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(x, y)| y.is_none() || *y == Some(x))
    }

    /// Render as `[0>1,2>0]`; the empty map renders as `[]`.
    pub fn render(&self) -> String {
        let parts: Vec<String> = self
            .map
            .iter()
            .enumerate()
            .filter_map(|(x, y)| y.map(|y| format!("{x}>{y}")))
            .collect();
        format!("[{}]", parts.join(","))
    }
}

/// A representation of an inverse semigroup by partial bijections.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsgRep {
    carrier: usize,
    maps: Vec<PartialBijection>,
}

impl IsgRep {
    /// Validate multiplicativity and star compatibility against the
    /// multiplication table.
    pub fn validate(
        isg: &InverseSemigroup,
        carrier: usize,
        maps: Vec<PartialBijection>,
    ) -> Result<Self, RepError> {
        assert_eq!(maps.len(), isg.len());
        for (s, m) in maps.iter().enumerate() {
            assert_eq!(m.carrier(), carrier);
            if maps[isg.star(s)] != m.inverse() {
                return Err(RepError::StarMismatch(s));
            }
        }
        for s in 0..isg.len() {
            for t in 0..isg.len() {
                if maps[s].compose(&maps[t]) != maps[isg.mul(s, t)] {
                    return Err(RepError::NotMultiplicative(s, t));
                }
            }
        }
        Ok(IsgRep { carrier, maps })
    }

    pub fn carrier(&self) -> usize {
        self.carrier
    }

    pub fn map(&self, s: usize) -> &PartialBijection {
        &self.maps[s]
    }

    pub fn maps(&self) -> &[PartialBijection] {
        &self.maps
    }

    /// Does the representation kill the zero of the semigroup?
    pub fn kills_zero(&self, isg: &InverseSemigroup) -> bool {
        match isg.zero() {
            Some(z) => self.maps[z].is_empty_map(),
            None => true,
        }
    }

    /// Tightness: the restriction to the idempotent semilattice is a
    /// tight representation into the Boolean algebra of subsets of the
    /// carrier.
    pub fn is_tight(&self, isg: &InverseSemigroup) -> bool {
        if !self.kills_zero(isg) {
            return false;
        }
        let s = isg.with_zero();
        let (lattice, lattice_to_s) = s.idempotent_semilattice();
        let beta = |li: usize| -> u64 {
            let e = lattice_to_s[li];
            if e < self.maps.len() {
                self.maps[e].domain_mask()
            } else {
                0 // adjoined zero
            }
        };
        is_tight_set_representation(&lattice, self.carrier, &beta)
    }
}

/// A representation of a semigroupoid by partial bijections: composable
/// pairs multiply, non-composable pairs vanish, disjoint pairs have
/// orthogonal ranges, and initial projections absorb the ranges of
/// right factors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SgpdRep {
    carrier: usize,
    pi: Vec<PartialBijection>,
}

impl SgpdRep {
    pub fn new(carrier: usize, pi: Vec<PartialBijection>) -> Self {
        SgpdRep { carrier, pi }
    }

    pub fn carrier(&self) -> usize {
        self.carrier
    }

    pub fn map(&self, f: usize) -> &PartialBijection {
        &self.pi[f]
    }

    fn flank_map(&self, f: Flank) -> PartialBijection {
        match f {
            Flank::Unit => PartialBijection::identity(self.carrier),
            Flank::El(f) => self.pi[f].clone(),
        }
    }

    /// Initial projection q_f = π_f* π_f, as a carrier mask.
    pub fn initial_mask(&self, f: usize) -> u64 {
        self.pi[f].domain_mask()
    }

    /// Final projection p_f = π_f π_f*, as a carrier mask.
    pub fn range_projection_mask(&self, f: usize) -> u64 {
        self.pi[f].range_mask()
    }

    pub fn validate(&self, sgpd: &Semigroupoid) -> Result<(), RepError> {
        assert_eq!(self.pi.len(), sgpd.len());
        let n = sgpd.len();
        for f in 0..n {
            for g in 0..n {
                let prod = self.pi[f].compose(&self.pi[g]);
                match sgpd.compose(f, g) {
                    Some(fg) => {
                        if prod != self.pi[fg] {
                            return Err(RepError::NotMultiplicative(f, g));
                        }
                    }
                    None => {
                        if !prod.is_empty_map() {
                            return Err(RepError::NotMultiplicative(f, g));
                        }
                    }
                }
                if sgpd.disjoint(f, g)
                    && self.range_projection_mask(f) & self.range_projection_mask(g) != 0
                {
                    return Err(RepError::RangesNotOrthogonal(f, g));
                }
                if sgpd.compose(f, g).is_some() {
                    // q_f p_g = p_g.
                    if self.initial_mask(f) & self.range_projection_mask(g)
                        != self.range_projection_mask(g)
                    {
                        return Err(RepError::InitialNotAbsorbing(f, g));
                    }
                } else {
                    // Derived: q_f p_g = 0 on non-composable pairs.
                    if self.initial_mask(f) & self.range_projection_mask(g) != 0 {
                        return Err(RepError::InitialNotAbsorbing(f, g));
                    }
                }
            }
        }
        Ok(())
    }

    /// p_f p_g = p_lcm on every intersecting pair.
    pub fn respects_lcm(&self, sgpd: &Semigroupoid) -> bool {
        for f in 0..sgpd.len() {
            for g in 0..sgpd.len() {
                if !sgpd.intersects(f, g) {
                    continue;
                }
                let m = match sgpd.lcm(f, g) {
                    Ok(Some(m)) => m,
                    _ => return false,
                };
                if self.range_projection_mask(f) & self.range_projection_mask(g)
                    != self.range_projection_mask(m)
                {
                    return false;
                }
            }
        }
        true
    }

    /// π_f* π_g = π_h π_k* whenever lcm(f, g) = f·h = g·k with f ≠ g,
    /// reading π at the unit flank as the identity. Holds for every
    /// valid representation respecting lcms.
    pub fn star_exchange_check(&self, sgpd: &Semigroupoid) -> bool {
        for f in 0..sgpd.len() {
            for g in 0..sgpd.len() {
                if f == g || !sgpd.intersects(f, g) {
                    continue;
                }
                let Ok(Some((_, h, k))) = sgpd.lcm_flank(Flank::El(f), Flank::El(g)) else {
                    return false;
                };
                let lhs = self.pi[f].inverse().compose(&self.pi[g]);
                let rhs = self.flank_map(h).compose(&self.flank_map(k).inverse());
                if lhs != rhs {
                    return false;
                }
            }
        }
        true
    }
}

/// Outcome of the tightness check for semigroupoid representations, with
/// the first failing cover retained as a witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SgpdTightness {
    pub tight: bool,
    /// (F, G, H): the relative set selector and the cover that broke the
    /// join identity.
    pub witness: Option<(Vec<usize>, Vec<usize>, Vec<usize>)>,
}

/// Minimal covers of a subset of the semigroupoid, in the sense that
/// every member of the subset admits a common multiple with some member
/// of the cover.
pub fn sgpd_minimal_covers(sgpd: &Semigroupoid, target_mask: u64) -> Vec<u64> {
    let targets = mask_to_vec(target_mask);
    let intersect_mask = |f: usize| -> u64 {
        targets.iter().filter(|&&g| sgpd.intersects(f, g)).fold(0, |m, &g| m | (1 << g))
    };
    let candidate_masks: Vec<(usize, u64)> =
        targets.iter().map(|&h| (h, intersect_mask(h))).collect();
    let mut out = Vec::new();
    fn rec(
        candidates: &[(usize, u64)],
        target_mask: u64,
        chosen: u64,
        covered: u64,
        out: &mut Vec<u64>,
    ) {
        if target_mask & !covered == 0 {
            out.push(chosen);
            return;
        }
        let first = (target_mask & !covered).trailing_zeros() as usize;
        for &(h, imask) in candidates {
            if chosen & (1 << h) != 0 {
                continue;
            }
            if imask & (1 << first) != 0 {
                rec(candidates, target_mask, chosen | (1 << h), covered | imask, out);
            }
        }
    }
    rec(&candidate_masks, target_mask, 0, 0, &mut out);
    out.sort_unstable();
    out.dedup();
    let covers = |z: u64| -> bool {
        targets.iter().all(|&g| {
            mask_to_vec(z).iter().any(|&h| sgpd.intersects(h, g))
        })
    };
    out.retain(|&z| {
        mask_to_vec(z).iter().all(|&e| !covers(z & !(1u64 << e)))
    });
    out
}

/// Tightness of a semigroupoid representation: for all finite F, G and
/// every minimal cover H of the relative set Λ^{F,G}, the join of the
/// range projections over H equals q_{F,G}. Distinct (F, G) with the
/// same relative set and the same q-value are checked once.
pub fn is_tight_sgpd_rep(sgpd: &Semigroupoid, rep: &SgpdRep) -> SgpdTightness {
    let full_lambda = sgpd.full_mask();
    let full_q: u64 =
        if rep.carrier() == 64 { u64::MAX } else { (1u64 << rep.carrier()) - 1 };
    // Profiles reachable from F-sets: (∩ Λ^f, ∩ q_f, representative F).
    let mut f_profiles: Vec<(u64, u64, Vec<usize>)> = vec![(full_lambda, full_q, vec![])];
    let mut f_seen: HashSet<(u64, u64)> = [(full_lambda, full_q)].into_iter().collect();
    let mut head = 0;
    while head < f_profiles.len() {
        let (lm, qm, fs) = f_profiles[head].clone();
        head += 1;
        for f in 0..sgpd.len() {
            let nl = lm & sgpd.ambient_right_mask(f);
            let nq = qm & rep.initial_mask(f);
            if f_seen.insert((nl, nq)) {
                let mut nfs = fs.clone();
                nfs.push(f);
                f_profiles.push((nl, nq, nfs));
            }
        }
    }
    // Profiles reachable from G-sets: (∪ Λ^g, ∪ q_g, representative G).
    let mut g_profiles: Vec<(u64, u64, Vec<usize>)> = vec![(0, 0, vec![])];
    let mut g_seen: HashSet<(u64, u64)> = [(0, 0)].into_iter().collect();
    head = 0;
    while head < g_profiles.len() {
        let (lm, qm, gs) = g_profiles[head].clone();
        head += 1;
        for g in 0..sgpd.len() {
            let nl = lm | sgpd.ambient_right_mask(g);
            let nq = qm | rep.initial_mask(g);
            if g_seen.insert((nl, nq)) {
                let mut ngs = gs.clone();
                ngs.push(g);
                g_profiles.push((nl, nq, ngs));
            }
        }
    }
    let mut checked: HashSet<(u64, u64)> = HashSet::new();
    for (fl, fq, fs) in &f_profiles {
        for (gl, gq, gs) in &g_profiles {
            let lambda_fg = fl & !gl;
            let q_fg = fq & !gq;
            if !checked.insert((lambda_fg, q_fg)) {
                continue;
            }
            for z in sgpd_minimal_covers(sgpd, lambda_fg) {
                let mut join = 0u64;
                for h in mask_to_vec(z) {
                    join |= rep.range_projection_mask(h);
                }
                if join != q_fg {
                    return SgpdTightness {
                        tight: false,
                        witness: Some((fs.clone(), gs.clone(), mask_to_vec(z))),
                    };
                }
            }
        }
    }
    SgpdTightness { tight: true, witness: None }
}

/// A member of the Boolean algebra generated by the right-composition
/// sets, stored with every decomposition into unions of relative sets
/// that the construction found.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Domain {
    pub elems: u64,
    /// Each decomposition presents the member as a union of relative
    /// sets Λ^{F,G}, one (F, G) selector per summand.
    pub decomps: Vec<Vec<(Vec<usize>, Vec<usize>)>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DomainAlgebra {
    pub members: Vec<Domain>,
}

impl DomainAlgebra {
    /// Build the full algebra from the signature atoms (classes of
    /// elements with identical membership across all right sets), each
    /// atom being a relative set itself.
    pub fn build(sgpd: &Semigroupoid) -> DomainAlgebra {
        let n = sgpd.len();
        let mut atoms: Vec<(u64, Vec<usize>, Vec<usize>)> = Vec::new(); // (mask, F, G)
        let mut sig_seen: HashSet<Vec<bool>> = HashSet::new();
        for x in 0..n {
            let sig: Vec<bool> =
                (0..n).map(|f| sgpd.ambient_right_mask(f) & (1 << x) != 0).collect();
            if !sig_seen.insert(sig.clone()) {
                continue;
            }
            let f_sel: Vec<usize> = (0..n).filter(|&f| sig[f]).collect();
            let g_sel: Vec<usize> = (0..n).filter(|&f| !sig[f]).collect();
            let mut mask = sgpd.full_mask();
            for &f in &f_sel {
                mask &= sgpd.ambient_right_mask(f);
            }
            for &g in &g_sel {
                mask &= !sgpd.ambient_right_mask(g);
            }
            atoms.push((mask, f_sel, g_sel));
        }
        let relative = |fs: &[usize], gs: &[usize]| -> u64 {
            let mut m = sgpd.full_mask();
            for &f in fs {
                m &= sgpd.ambient_right_mask(f);
            }
            for &g in gs {
                m &= !sgpd.ambient_right_mask(g);
            }
            m
        };
        let mut members: Vec<Domain> = Vec::new();
        for bits in 0u64..(1 << atoms.len()) {
            let mut mask = 0u64;
            let mut decomp = Vec::new();
            for (i, (am, f_sel, g_sel)) in atoms.iter().enumerate() {
                if bits & (1 << i) != 0 {
                    mask |= am;
                    decomp.push((f_sel.clone(), g_sel.clone()));
                }
            }
            if let Some(existing) = members.iter_mut().find(|d| d.elems == mask) {
                if !existing.decomps.contains(&decomp) {
                    existing.decomps.push(decomp);
                }
                continue;
            }
            members.push(Domain { elems: mask, decomps: vec![decomp] });
        }
        // Alternative single-term decompositions with small selectors.
        let mut selectors: Vec<Vec<usize>> = vec![vec![]];
        selectors.extend((0..n).map(|f| vec![f]));
        let mut g_selectors = selectors.clone();
        for a in 0..n {
            for b in (a + 1)..n {
                g_selectors.push(vec![a, b]);
            }
        }
        for fs in &selectors {
            for gs in &g_selectors {
                let mask = relative(fs, gs);
                if let Some(d) = members.iter_mut().find(|d| d.elems == mask) {
                    let dec = vec![(fs.clone(), gs.clone())];
                    if !d.decomps.contains(&dec) {
                        d.decomps.push(dec);
                    }
                }
            }
        }
        members.sort_by_key(|d| d.elems);
        DomainAlgebra { members }
    }

    pub fn member(&self, mask: u64) -> Option<&Domain> {
        self.members.iter().find(|d| d.elems == mask)
    }
}

/// Evaluate the projection-valued map on a domain: every stored
/// decomposition must yield the same carrier subset, and the complement
/// member must yield the complementary subset; otherwise the map is not
/// well defined for this representation (which happens for non-tight
/// representations and is reported, not hidden).
pub fn domain_projection(
    sgpd: &Semigroupoid,
    rep: &SgpdRep,
    algebra: &DomainAlgebra,
    mask: u64,
) -> Result<u64, RepError> {
    let full_q: u64 =
        if rep.carrier() == 64 { u64::MAX } else { (1u64 << rep.carrier()) - 1 };
    let q_of = |fs: &[usize], gs: &[usize]| -> u64 {
        let mut q = full_q;
        for &f in fs {
            q &= rep.initial_mask(f);
        }
        for &g in gs {
            q &= !rep.initial_mask(g);
        }
        q
    };
    let eval = |d: &Domain| -> Result<u64, RepError> {
        let mut value: Option<u64> = None;
        for decomp in &d.decomps {
            let mut v = 0u64;
            for (fs, gs) in decomp {
                v |= q_of(fs, gs);
            }
            match value {
                None => value = Some(v),
                Some(prev) if prev != v => {
                    return Err(RepError::QNotWellDefined(mask_to_vec(d.elems)))
                }
                _ => {}
            }
        }
        Ok(value.expect("at least one decomposition"))
    };
    let d = algebra
        .member(mask)
        .unwrap_or_else(|| panic!("domain {mask:#x} is not in the algebra"));
    let v = eval(d)?;
    let comp = algebra
        .member(sgpd.full_mask() & !mask)
        .expect("algebra is closed under complement");
    let vc = eval(comp)?;
    if v ^ vc != full_q {
        return Err(RepError::QNotWellDefined(mask_to_vec(mask)));
    }
    Ok(v)
}

/// Join-of-ranges identity over a cover of a domain: for tight
/// representations the join of p_h over any cover H of D equals the
/// projection of D.
pub fn extended_tight_on_cover(
    sgpd: &Semigroupoid,
    rep: &SgpdRep,
    algebra: &DomainAlgebra,
    mask: u64,
    cover: &[usize],
) -> Result<bool, RepError> {
    let q = domain_projection(sgpd, rep, algebra, mask)?;
    let mut join = 0u64;
    for &h in cover {
        join |= rep.range_projection_mask(h);
    }
    Ok(join == q)
}

/// The canonical tight representation of S(Λ): the action on the tight
/// spectrum of E(S(Λ)), with each θ realized as a partial bijection of
/// the carrier. Returns the representation together with the action.
pub fn canonical_tight_rep(sl: &SLambda) -> Result<(IsgRep, SpectrumAction), RepError> {
    let action = SpectrumAction::new(sl.isg(), None).expect("tight spectrum is invariant");
    let carrier = action.carrier().len();
    if carrier > MAX_CARRIER {
        return Err(RepError::CarrierTooLarge(carrier));
    }
    let maps: Vec<PartialBijection> = (0..sl.isg().len())
        .map(|s| {
            PartialBijection::new(
                carrier,
                (0..carrier).map(|x| action.apply(s, x)).collect(),
            )
            .expect("theta maps are injective")
        })
        .collect();
    let rep = IsgRep::validate(sl.isg(), carrier, maps)?;
    if !rep.kills_zero(sl.isg()) {
        return Err(RepError::ZeroNotKilled);
    }
    assert!(rep.is_tight(sl.isg()), "canonical representation must be tight");
    Ok((rep, action))
}

/// Restrict a zero-killing representation of S(Λ) along the canonical
/// generators: π_f = σ(generator at f). The result is a valid
/// representation of the semigroupoid respecting lcms, both asserted.
pub fn restrict_to_sgpd(sl: &SLambda, sigma: &IsgRep) -> SgpdRep {
    let pi: Vec<PartialBijection> = (0..sl.sgpd().len())
        .map(|f| sigma.map(sl.generator_index(f)).clone())
        .collect();
    let rep = SgpdRep::new(sigma.carrier(), pi);
    rep.validate(sl.sgpd()).expect("restriction is a representation");
    assert!(rep.respects_lcm(sl.sgpd()), "restriction must respect lcms");
    rep
}

/// Extend a representation of the semigroupoid to S(Λ) by
/// σ(f, A, g) = π_f · Q(A) · π_g*. Requires π valid, lcm-respecting,
/// and the projection map well defined on the whole domain algebra
/// (tightness of π is the usual sufficient condition). The extension is
/// validated as a zero-killing representation with σ ∘ generator = π.
pub fn extend_to_slambda(sl: &SLambda, pi: &SgpdRep) -> Result<IsgRep, RepError> {
    let sgpd = sl.sgpd();
    pi.validate(sgpd)?;
    if !pi.respects_lcm(sgpd) {
        // Find a witness pair for the error.
        for f in 0..sgpd.len() {
            for g in 0..sgpd.len() {
                if sgpd.intersects(f, g) {
                    if let Ok(Some(m)) = sgpd.lcm(f, g) {
                        if pi.range_projection_mask(f) & pi.range_projection_mask(g)
                            != pi.range_projection_mask(m)
                        {
                            return Err(RepError::LcmNotRespected(f, g));
                        }
                    }
                }
            }
        }
        unreachable!("respects_lcm reported failure without witness");
    }
    let algebra = DomainAlgebra::build(sgpd);
    for d in &algebra.members {
        domain_projection(sgpd, pi, &algebra, d.elems)?;
    }
    let carrier = pi.carrier();
    let maps: Vec<PartialBijection> = sl
        .triples()
        .iter()
        .map(|&t| match t {
            SLTriple::Zero => Ok(PartialBijection::empty(carrier)),
            SLTriple::T { f, a, g } => {
                let q = domain_projection(sgpd, pi, &algebra, a)?;
                let qa = PartialBijection::partial_identity(carrier, q);
                let left = match f {
                    Flank::Unit => qa.clone(),
                    Flank::El(f) => pi.map(f).compose(&qa),
                };
                Ok(match g {
                    Flank::Unit => left,
                    Flank::El(g) => left.compose(&pi.map(g).inverse()),
                })
            }
        })
        .collect::<Result<_, RepError>>()?;
    // Multiplicativity of the extension is verified, not assumed.
    for i in 0..sl.len() {
        for j in 0..sl.len() {
            if maps[i].compose(&maps[j]) != maps[sl.isg().mul(i, j)] {
                return Err(RepError::ExtensionNotMultiplicative(i, j));
            }
        }
    }
    let sigma = IsgRep::validate(sl.isg(), carrier, maps)?;
    for f in 0..sgpd.len() {
        assert_eq!(
            sigma.map(sl.generator_index(f)),
            pi.map(f),
            "extension does not restrict back to the input"
        );
    }
    Ok(sigma)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::slambda::SLambda;

    fn sg3_setup() -> (SLambda, IsgRep, SpectrumAction) {
        let sl = SLambda::build(&corpus::sg3()).unwrap();
        let (rep, action) = canonical_tight_rep(&sl).unwrap();
        (sl, rep, action)
    }

    #[test]
    fn partial_bijection_algebra() {
        let p = PartialBijection::new(3, vec![Some(1), None, Some(0)]).unwrap();
        let q = p.inverse();
        assert_eq!(q.apply(1), Some(0));
        assert_eq!(p.compose(&q).domain_mask(), p.range_mask());
        assert!(PartialBijection::empty(3).is_empty_map());
        assert!(PartialBijection::new(2, vec![Some(0), Some(0)]).is_err());
    }

    #[test]
    fn zero_assignment_is_a_valid_rep() {
        let s = corpus::sg3();
        let rep = SgpdRep::new(2, (0..3).map(|_| PartialBijection::empty(2)).collect());
        rep.validate(&s).unwrap();
        assert!(rep.respects_lcm(&s));
    }

    #[test]
    fn sg3_canonical_rep_restricts_and_validates() {
        let (sl, sigma, action) = sg3_setup();
        assert_eq!(action.carrier().len(), 2);
        let pi = restrict_to_sgpd(&sl, &sigma);
        pi.validate(sl.sgpd()).unwrap();
        assert!(pi.respects_lcm(sl.sgpd()));
        assert!(pi.star_exchange_check(sl.sgpd()));
        // π_a is the single cross map; springs go to zero.
        assert_eq!(pi.map(0).domain_mask().count_ones(), 1);
        assert!(pi.map(1).is_empty_map());
        assert!(pi.map(2).is_empty_map());
    }

    #[test]
    fn clause_violation_detected() {
        let s = corpus::sg3();
        // Assign the identity everywhere: multiplicativity fails since
        // a·b = c composes but b maps to the identity rather than zero
        // on the disjointness clause.
        let rep = SgpdRep::new(1, (0..3).map(|_| PartialBijection::identity(1)).collect());
        assert!(rep.validate(&s).is_err());
    }

    #[test]
    fn sg3_springs_break_tightness() {
        let (sl, sigma, _) = sg3_setup();
        let pi = restrict_to_sgpd(&sl, &sigma);
        let verdict = is_tight_sgpd_rep(sl.sgpd(), &pi);
        assert!(!verdict.tight);
        let (f, g, h) = verdict.witness.unwrap();
        assert!(f.is_empty());
        assert!(g.is_empty());
        assert_eq!(h, vec![0, 1]); // the cover {a, b} of the whole semigroupoid
    }

    #[test]
    fn empty_semigroupoid_is_vacuously_tight() {
        let empty = Semigroupoid::validate(vec![], &std::collections::BTreeMap::new()).unwrap();
        let rep = SgpdRep::new(0, vec![]);
        assert!(is_tight_sgpd_rep(&empty, &rep).tight);
    }

    #[test]
    fn domain_algebra_and_projection_map() {
        let (sl, sigma, _) = sg3_setup();
        let pi = restrict_to_sgpd(&sl, &sigma);
        let sgpd = sl.sgpd();
        let algebra = DomainAlgebra::build(sgpd);
        // {b}, {a,c}, ∅, Λ.
        assert_eq!(algebra.members.len(), 4);
        let b_mask = 1u64 << 1;
        let q_b = domain_projection(sgpd, &pi, &algebra, b_mask).unwrap();
        assert_eq!(q_b, pi.initial_mask(0));
        let ac = sgpd.full_mask() & !b_mask;
        let q_ac = domain_projection(sgpd, &pi, &algebra, ac).unwrap();
        assert_eq!(q_ac, 0b11 & !q_b);
        // Q(Λ^f) = q_f and union additivity on the algebra.
        for d in &algebra.members {
            let v = domain_projection(sgpd, &pi, &algebra, d.elems).unwrap();
            for d2 in &algebra.members {
                let v2 = domain_projection(sgpd, &pi, &algebra, d2.elems).unwrap();
                let u = domain_projection(sgpd, &pi, &algebra, d.elems | d2.elems);
                if let Some(member) = algebra.member(d.elems | d2.elems) {
                    assert_eq!(u.unwrap(), v | v2, "union clause at {:?}", member.elems);
                }
            }
        }
    }

    #[test]
    fn extension_round_trip_on_sg3() {
        let (sl, sigma, _) = sg3_setup();
        let pi = restrict_to_sgpd(&sl, &sigma);
        let extended = extend_to_slambda(&sl, &pi).unwrap();
        assert_eq!(extended, sigma);
    }

    #[test]
    fn zero_rep_extends_to_zero_rep() {
        let sl = SLambda::build(&corpus::sg3()).unwrap();
        let rep = SgpdRep::new(1, (0..3).map(|_| PartialBijection::empty(1)).collect());
        let extended = extend_to_slambda(&sl, &rep).unwrap();
        assert!(extended.maps().iter().all(|m| m.is_empty_map()));
    }

    #[test]
    fn extended_tight_identity_on_covers() {
        let (sl, sigma, _) = sg3_setup();
        let pi = restrict_to_sgpd(&sl, &sigma);
        let sgpd = sl.sgpd();
        let algebra = DomainAlgebra::build(sgpd);
        // D = {b} with cover {b}: join p_b = 0 but Q({b}) = {φ_q}: the
        // identity fails exactly because the representation is not tight.
        let ok = extended_tight_on_cover(sgpd, &pi, &algebra, 1 << 1, &[1]).unwrap();
        assert!(!ok);
    }
}

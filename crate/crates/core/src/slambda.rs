//! The inverse semigroup S(Λ) of a semigroupoid: triples (f, A, g) with
//! the lcm-mediated product and the empty-middle = zero rule, the
//! canonical generators f ↦ (f, Λ^f, 1), and the structural predicates
//! on the idempotents.

use crate::inverse::{InverseSemigroup, IsgError};
use crate::sgpd::{mask_to_vec, DomainSet, Flank, Semigroupoid, SgpdError};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SLambdaError {
    #[error(transparent)]
    Sgpd(#[from] SgpdError),
    #[error(transparent)]
    Isg(#[from] IsgError),
    #[error("a nonempty middle set coexists with an undefined flank composite (bug)")]
    IllegalComposite,
    #[error("standing hypothesis fails: {0:?} not monic, {1:?} without lcm")]
    StandingHypothesis(Vec<usize>, Vec<(usize, usize)>),
    #[error("triple enumeration exceeds the element cap ({0})")]
    TooManyTriples(usize),
    #[error("middle set is not a member of Q")]
    NotInQ,
    #[error("extension is not multiplicative at ({0}, {1})")]
    ExtensionNotMultiplicative(usize, usize),
}

/// An element of S(Λ): zero, or a triple (f, A, g) with a nonempty
/// middle set A ⊆ Λ^f ∩ Λ^g (where Λ^1 = Λ).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SLTriple {
    Zero,
    T { f: Flank, a: u64, g: Flank },
}

impl SLTriple {
    /// Normalize: any empty middle collapses to zero.
    pub fn new(f: Flank, a: u64, g: Flank) -> SLTriple {
        if a == 0 {
            SLTriple::Zero
        } else {
            SLTriple::T { f, a, g }
        }
    }

    pub fn star(self) -> SLTriple {
        match self {
            SLTriple::Zero => SLTriple::Zero,
            SLTriple::T { f, a, g } => SLTriple::T { f: g, a, g: f },
        }
    }

    pub fn is_idempotent_shape(self) -> bool {
        match self {
            SLTriple::Zero => true,
            SLTriple::T { f, g, .. } => f == g,
        }
    }
}

/// S(Λ) together with its multiplication table, element labels derived
/// from the triples, and the Q collection used for witness lookups.
#[derive(Debug, Clone)]
pub struct SLambda {
    sgpd: Semigroupoid,
    triples: Vec<SLTriple>,
    index: BTreeMap<SLTriple, usize>,
    isg: InverseSemigroup,
    q: Vec<DomainSet>,
}

/// A word in the canonical generators, used by the decomposition of
/// triples; `GenStar(f)` denotes the star of the generator at f.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WordAtom {
    Gen(usize),
    GenStar(usize),
}

/// The product of two triples: if the inner flanks admit an lcm g·u =
/// h·v, the result is (f·u, u⁻¹(A) ∩ v⁻¹(B), k·v); disjoint inner flanks
/// give zero. A formally illegal outer composite is tolerated exactly
/// when the middle comes out empty.
///
/// Declared truncations multiply as the Rees quotient of the ambient
/// S(Λ) by the ideal of elements whose flanks leave the window: inverse
/// images take their ambient values, and a product whose outer flank
/// escapes the window or lands on a window spring collapses to zero. On
/// honest semigroupoids all of this is the plain product.
pub fn multiply(
    sgpd: &Semigroupoid,
    s: SLTriple,
    t: SLTriple,
) -> Result<SLTriple, SLambdaError> {
    let (SLTriple::T { f, a, g }, SLTriple::T { f: h, a: b, g: k }) = (s, t) else {
        return Ok(SLTriple::Zero);
    };
    let Some((_, u, v)) = sgpd.lcm_flank(g, h)? else {
        return Ok(SLTriple::Zero);
    };
    let middle = sgpd.ambient_inverse_image(u, a) & sgpd.ambient_inverse_image(v, b);
    if middle == 0 {
        return Ok(SLTriple::Zero);
    }
    let (fu, kv) = match (sgpd.compose_flank(f, u), sgpd.compose_flank(k, v)) {
        (Some(fu), Some(kv)) => (fu, kv),
        _ if sgpd.is_truncated() => return Ok(SLTriple::Zero), // escapes the window
        _ => return Err(SLambdaError::IllegalComposite),
    };
    if sgpd.is_truncated() {
        // Window springs belong to the quotient ideal.
        let spring = |x: Flank| matches!(x, Flank::El(e) if sgpd.right_mask(e) == 0);
        if spring(fu) || spring(kv) {
            return Ok(SLTriple::Zero);
        }
    }
    Ok(SLTriple::new(fu, middle, kv))
}

impl SLambda {
    /// Enumerate all triples over a semigroupoid satisfying the standing
    /// hypothesis and assemble the inverse semigroup with zero.
    pub fn build(sgpd: &Semigroupoid) -> Result<SLambda, SLambdaError> {
        let report = sgpd.check_standing_hypothesis();
        if !report.holds {
            return Err(SLambdaError::StandingHypothesis(
                report.monic_failures,
                report.lcm_failures,
            ));
        }
        let q = sgpd.q_collection();
        let flanks: Vec<Flank> =
            std::iter::once(Flank::Unit).chain((0..sgpd.len()).map(Flank::El)).collect();
        // A flank carries a middle when the middle sits inside its
        // (ambient) right set; window springs never carry one, matching
        // the vanishing of their canonical generators.
        let admissible = |f: Flank, a: u64| -> bool {
            match f {
                Flank::Unit => true,
                Flank::El(x) => {
                    a & !sgpd.ambient_right_mask(x) == 0 && sgpd.right_mask(x) != 0
                }
            }
        };
        let mut triples = vec![SLTriple::Zero];
        for d in &q {
            if d.elems == 0 {
                continue;
            }
            for &f in &flanks {
                if !admissible(f, d.elems) {
                    continue;
                }
                for &g in &flanks {
                    if !admissible(g, d.elems) {
                        continue;
                    }
                    triples.push(SLTriple::T { f, a: d.elems, g });
                }
            }
        }
        if triples.len() > crate::max_elements() {
            return Err(SLambdaError::TooManyTriples(triples.len()));
        }
        let index: BTreeMap<SLTriple, usize> =
            triples.iter().enumerate().map(|(i, &t)| (t, i)).collect();
        let labels: Vec<String> =
            triples.iter().map(|&t| render_triple(sgpd, t)).collect();
        let mut table = vec![vec![0usize; triples.len()]; triples.len()];
        for (i, &s) in triples.iter().enumerate() {
            for (j, &t) in triples.iter().enumerate() {
                let p = multiply(sgpd, s, t)?;
                table[i][j] = *index.get(&p).ok_or(SLambdaError::NotInQ)?;
            }
        }
        let isg = InverseSemigroup::validate(labels, table, Some(0))?;
        // The star of (f, A, g) must be (g, A, f); the validated star
        // table is compared against the swap.
        for (i, &t) in triples.iter().enumerate() {
            assert_eq!(isg.star(i), index[&t.star()], "star is not the flank swap");
        }
        Ok(SLambda { sgpd: sgpd.clone(), triples, index, isg, q })
    }

    pub fn sgpd(&self) -> &Semigroupoid {
        &self.sgpd
    }

    pub fn isg(&self) -> &InverseSemigroup {
        &self.isg
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn triple(&self, i: usize) -> SLTriple {
        self.triples[i]
    }

    pub fn triples(&self) -> &[SLTriple] {
        &self.triples
    }

    pub fn index_of(&self, t: SLTriple) -> Option<usize> {
        self.index.get(&t).copied()
    }

    pub fn q_collection(&self) -> &[DomainSet] {
        &self.q
    }

    /// A witness family for a middle set, looked up in Q.
    pub fn witness_for(&self, mask: u64) -> Option<&[usize]> {
        self.q.iter().find(|d| d.elems == mask).map(|d| d.witness.as_slice())
    }

    /// The canonical generator at f: (f, Λ^f, 1), which is zero exactly
    /// when f is a spring. Truncations read the ambient window for the
    /// middle but keep the spring rule of the window.
    pub fn generator(&self, f: usize) -> SLTriple {
        if self.sgpd.right_mask(f) == 0 {
            return SLTriple::Zero;
        }
        SLTriple::new(Flank::El(f), self.sgpd.ambient_right_mask(f), Flank::Unit)
    }

    pub fn generator_index(&self, f: usize) -> usize {
        self.index[&self.generator(f)]
    }

    /// Initial projection of the generator: (1, Λ^f, 1).
    pub fn initial_projection(&self, f: usize) -> SLTriple {
        if self.sgpd.right_mask(f) == 0 {
            return SLTriple::Zero;
        }
        SLTriple::new(Flank::Unit, self.sgpd.ambient_right_mask(f), Flank::Unit)
    }

    /// Final projection of the generator: (f, Λ^f, f).
    pub fn range_projection(&self, f: usize) -> SLTriple {
        if self.sgpd.right_mask(f) == 0 {
            return SLTriple::Zero;
        }
        SLTriple::new(Flank::El(f), self.sgpd.ambient_right_mask(f), Flank::El(f))
    }

    /// Check that the canonical generators form a representation of the
    /// semigroupoid inside S(Λ) respecting lcms: composable pairs
    /// multiply to the composite generator, non-composable pairs to zero,
    /// disjoint pairs have orthogonal range projections, and composable
    /// pairs satisfy q_f p_g = p_g, with p_f p_g = p_lcm on intersecting
    /// pairs.
    pub fn verify_generator_representation(&self) -> Result<(), SLambdaError> {
        let n = self.sgpd.len();
        let mul =
            |a: SLTriple, b: SLTriple| -> Result<SLTriple, SLambdaError> { multiply(&self.sgpd, a, b) };
        for f in 0..n {
            for g in 0..n {
                let tf = self.generator(f);
                let tg = self.generator(g);
                let prod = mul(tf, tg)?;
                match self.sgpd.compose(f, g) {
                    Some(fg) => assert_eq!(prod, self.generator(fg)),
                    None => assert_eq!(prod, SLTriple::Zero),
                }
                let pf = self.range_projection(f);
                let pg = self.range_projection(g);
                if self.sgpd.disjoint(f, g) {
                    assert_eq!(mul(pf, pg)?, SLTriple::Zero);
                } else {
                    let m = self.sgpd.lcm(f, g)?.expect("intersecting");
                    assert_eq!(mul(pf, pg)?, self.range_projection(m));
                }
                if self.sgpd.compose(f, g).is_some() {
                    let qf = self.initial_projection(f);
                    assert_eq!(mul(qf, pg)?, pg);
                }
            }
        }
        for f in 0..n {
            let tf = self.generator(f);
            assert_eq!(mul(tf.star(), tf)?, self.initial_projection(f));
            assert_eq!(mul(tf, tf.star())?, self.range_projection(f));
        }
        Ok(())
    }

    /// Order formula on idempotents: (f,A,f) ≤ (g,B,g) iff g | f and,
    /// writing f = g·h, A ⊆ h⁻¹(B). Cross-checked against the natural
    /// order of the multiplication table.
    pub fn idempotent_leq_formula(&self, s: SLTriple, t: SLTriple) -> bool {
        let by_formula = match (s, t) {
            (SLTriple::Zero, _) => true,
            (_, SLTriple::Zero) => false,
            (SLTriple::T { f, a, g: f2 }, SLTriple::T { f: g, a: b, g: g2 }) => {
                assert!(f == f2 && g == g2, "order formula needs idempotent triples");
                if !self.sgpd.divides_flank(g, f) {
                    false
                } else {
                    let h = self.flank_quotient(g, f);
                    a & !self.sgpd.ambient_inverse_image(h, b) == 0
                }
            }
        };
        let i = self.index[&s];
        let j = self.index[&t];
        assert_eq!(
            by_formula,
            self.isg.natural_leq(i, j),
            "idempotent order formula disagrees with the table"
        );
        by_formula
    }

    /// The unique h with g·h = f, for g | f over the unitized object.
    fn flank_quotient(&self, g: Flank, f: Flank) -> Flank {
        match (g, f) {
            (Flank::Unit, x) => x,
            (Flank::El(_), Flank::Unit) => panic!("no element divides the unit"),
            (Flank::El(g), Flank::El(f)) => {
                if g == f {
                    Flank::Unit
                } else {
                    Flank::El(
                        self.sgpd
                            .right_set(g)
                            .into_iter()
                            .find(|&h| self.sgpd.compose(g, h) == Some(f))
                            .expect("divisor"),
                    )
                }
            }
        }
    }

    /// Intersection formula on idempotents: (f,A,f) ⋒ (g,B,g) iff some
    /// pair f·u = g·v has u⁻¹(A) ∩ v⁻¹(B) nonempty. Cross-checked
    /// against nonvanishing of the product.
    pub fn idempotents_intersect_formula(&self, s: SLTriple, t: SLTriple) -> bool {
        let by_formula = match (s, t) {
            (SLTriple::Zero, _) | (_, SLTriple::Zero) => false,
            (SLTriple::T { f, a, .. }, SLTriple::T { f: g, a: b, .. }) => {
                let flanks: Vec<Flank> = std::iter::once(Flank::Unit)
                    .chain((0..self.sgpd.len()).map(Flank::El))
                    .collect();
                let visible = |x: Flank| match x {
                    Flank::Unit => true,
                    Flank::El(e) => !self.sgpd.is_truncated() || self.sgpd.right_mask(e) != 0,
                };
                flanks.iter().any(|&u| {
                    flanks.iter().any(|&v| {
                        let fu = self.sgpd.compose_flank(f, u);
                        let gv = self.sgpd.compose_flank(g, v);
                        match (fu, gv) {
                            (Some(fu), Some(gv)) if fu == gv => {
                                visible(fu)
                                    && self.sgpd.ambient_inverse_image(u, a)
                                        & self.sgpd.ambient_inverse_image(v, b)
                                        != 0
                            }
                            _ => false,
                        }
                    })
                })
            }
        };
        let prod = multiply(&self.sgpd, s, t).expect("valid triples");
        assert_eq!(
            by_formula,
            prod != SLTriple::Zero,
            "intersection formula disagrees with the product"
        );
        by_formula
    }

    /// Write a nonzero triple as a word in the canonical generators,
    /// using a witness family for its middle set; the word is evaluated
    /// back in S(Λ) and must reproduce the triple.
    pub fn decompose_into_generators(&self, s: SLTriple) -> Result<Vec<WordAtom>, SLambdaError> {
        let SLTriple::T { f, a, g } = s else {
            return Ok(vec![]);
        };
        let witness = self.witness_for(a).ok_or(SLambdaError::NotInQ)?.to_vec();
        let mut word = Vec::new();
        if let Flank::El(f) = f {
            word.push(WordAtom::Gen(f));
        }
        for &h in &witness {
            word.push(WordAtom::GenStar(h));
            word.push(WordAtom::Gen(h));
        }
        if let Flank::El(g) = g {
            word.push(WordAtom::GenStar(g));
        }
        let value = self.evaluate_word(&word)?;
        assert_eq!(value, s, "generator decomposition does not evaluate back");
        Ok(word)
    }

    pub fn evaluate_word(&self, word: &[WordAtom]) -> Result<SLTriple, SLambdaError> {
        let mut acc: Option<SLTriple> = None;
        for atom in word {
            let t = match *atom {
                WordAtom::Gen(f) => self.generator(f),
                WordAtom::GenStar(f) => self.generator(f).star(),
            };
            acc = Some(match acc {
                None => t,
                Some(prev) => multiply(&self.sgpd, prev, t)?,
            });
        }
        Ok(acc.unwrap_or(SLTriple::Zero))
    }

    /// Report whether all elements are epic and whether S(Λ) is
    /// E*-unitary; when all elements are epic the second must hold.
    pub fn e_star_unitary_if_epic(&self) -> (bool, bool) {
        let all_epic = (0..self.sgpd.len()).all(|f| self.sgpd.is_epic(f));
        let unitary = self.isg.is_e_star_unitary();
        if all_epic {
            assert!(unitary, "all elements epic but S(Λ) is not E*-unitary");
        }
        (all_epic, unitary)
    }
}

/// The printable symbol for the adjoined unit, kept clear of the
/// element labels (a plain "1" unless some element is already called
/// that).
pub fn unit_symbol(sgpd: &Semigroupoid) -> String {
    let mut s = "1".to_string();
    while sgpd.labels().iter().any(|l| *l == s) {
        s.push('\'');
    }
    s
}

fn render_flank(sgpd: &Semigroupoid, unit: &str, f: Flank) -> String {
    match f {
        Flank::Unit => unit.to_string(),
        Flank::El(f) => sgpd.label(f).to_string(),
    }
}

fn render_mask(sgpd: &Semigroupoid, a: u64) -> String {
    let labels: Vec<&str> = mask_to_vec(a).into_iter().map(|i| sgpd.label(i)).collect();
    labels.join(",")
}

pub fn render_triple(sgpd: &Semigroupoid, t: SLTriple) -> String {
    let unit = unit_symbol(sgpd);
    match t {
        SLTriple::Zero => "0".to_string(),
        SLTriple::T { f, a, g } => format!(
            "({}|{}|{})",
            render_flank(sgpd, &unit, f),
            render_mask(sgpd, a),
            render_flank(sgpd, &unit, g)
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn sg3_slambda() -> SLambda {
        SLambda::build(&corpus::sg3()).unwrap()
    }

    #[test]
    fn sg3_has_five_elements() {
        let sl = sg3_slambda();
        assert_eq!(sl.len(), 5);
        let labels: Vec<&str> =
            (0..5).map(|i| sl.isg().label(i)).collect();
        assert!(labels.contains(&"0"));
        assert!(labels.contains(&"(a|b|a)"));
        assert!(labels.contains(&"(1|b|1)"));
        assert!(labels.contains(&"(a|b|1)"));
        assert!(labels.contains(&"(1|b|a)"));
    }

    #[test]
    fn empty_semigroupoid_gives_zero_only() {
        let empty = Semigroupoid::validate(vec![], &BTreeMap::new()).unwrap();
        let sl = SLambda::build(&empty).unwrap();
        assert_eq!(sl.len(), 1);
    }

    #[test]
    fn product_examples() {
        let sl = sg3_slambda();
        let s = sl.sgpd();
        let a_mask = s.right_mask(0); // {b}
        let t = SLTriple::new(Flank::El(0), a_mask, Flank::Unit);
        let tstar = t.star();
        assert_eq!(
            multiply(s, t, tstar).unwrap(),
            SLTriple::new(Flank::El(0), a_mask, Flank::El(0))
        );
        // (a,{b},a)(1,{b},1) = 0 since a⁻¹({b}) = ∅.
        let p = SLTriple::new(Flank::El(0), a_mask, Flank::El(0));
        let q = SLTriple::new(Flank::Unit, a_mask, Flank::Unit);
        assert_eq!(multiply(s, p, q).unwrap(), SLTriple::Zero);
        // Zero absorbs.
        assert_eq!(multiply(s, SLTriple::Zero, p).unwrap(), SLTriple::Zero);
        assert_eq!(multiply(s, p, SLTriple::Zero).unwrap(), SLTriple::Zero);
    }

    #[test]
    fn generators_and_projections() {
        let sl = sg3_slambda();
        assert_eq!(sl.generator(0), SLTriple::new(Flank::El(0), 0b010, Flank::Unit));
        assert_eq!(sl.generator(1), SLTriple::Zero); // springs die
        assert_eq!(sl.generator(2), SLTriple::Zero);
        sl.verify_generator_representation().unwrap();
    }

    #[test]
    fn free_monoid_truncation_counts() {
        // Triples counted independently: for each nonempty A ∈ Q the
        // admissible flanks are the non-springs whose ambient right set
        // contains A, plus the unit.
        for depth in 2..=3 {
            let t = corpus::free_monoid_truncation(2, depth);
            let sl = SLambda::build(&t).unwrap();
            let q = t.q_collection();
            let mut expected = 1usize;
            for d in &q {
                if d.elems == 0 {
                    continue;
                }
                let mut flanks = 1; // the unit
                for f in 0..t.len() {
                    if d.elems & !t.ambient_right_mask(f) == 0 && t.right_mask(f) != 0 {
                        flanks += 1;
                    }
                }
                expected += flanks * flanks;
            }
            assert_eq!(sl.len(), expected);
        }
    }

    #[test]
    fn idempotent_formulas() {
        let sl = sg3_slambda();
        let a_mask = sl.sgpd().right_mask(0);
        let p = SLTriple::new(Flank::El(0), a_mask, Flank::El(0));
        let q = SLTriple::new(Flank::Unit, a_mask, Flank::Unit);
        assert!(!sl.idempotent_leq_formula(p, q)); // a ∉ {b}
        assert!(!sl.idempotent_leq_formula(q, p));
        assert!(!sl.idempotents_intersect_formula(p, q));
        assert!(sl.idempotent_leq_formula(p, p));
        for &s in sl.triples() {
            if !s.is_idempotent_shape() || s == SLTriple::Zero {
                continue;
            }
            for &t in sl.triples() {
                if !t.is_idempotent_shape() || t == SLTriple::Zero {
                    continue;
                }
                sl.idempotent_leq_formula(s, t);
                sl.idempotents_intersect_formula(s, t);
            }
        }
    }

    #[test]
    fn decomposition() {
        let sl = sg3_slambda();
        let a_mask = sl.sgpd().right_mask(0);
        let p = SLTriple::new(Flank::El(0), a_mask, Flank::El(0));
        let w = sl.decompose_into_generators(p).unwrap();
        assert_eq!(w, vec![WordAtom::Gen(0), WordAtom::GenStar(0), WordAtom::Gen(0), WordAtom::GenStar(0)]);
        let q = SLTriple::new(Flank::Unit, a_mask, Flank::Unit);
        sl.decompose_into_generators(q).unwrap();
        for &t in sl.triples() {
            if t != SLTriple::Zero {
                sl.decompose_into_generators(t).unwrap();
            }
        }
    }

    #[test]
    fn e_star_unitary_reports() {
        let (epic, unitary) = sg3_slambda().e_star_unitary_if_epic();
        assert!(epic);
        assert!(unitary);
        let grid = corpus::grid_truncation(2, 2);
        let sl = SLambda::build(&grid).unwrap();
        let (epic, unitary) = sl.e_star_unitary_if_epic();
        assert!(epic);
        assert!(unitary);
    }

    #[test]
    fn associativity_exhaustive_on_small_corpus() {
        for s in corpus::semigroupoid_corpus(7).into_iter().take(8) {
            if !s.check_standing_hypothesis().holds {
                continue;
            }
            let sl = SLambda::build(&s).unwrap();
            let n = sl.len();
            if n > 12 {
                continue;
            }
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        let ij = sl.isg().mul(i, j);
                        let jk = sl.isg().mul(j, k);
                        assert_eq!(sl.isg().mul(ij, k), sl.isg().mul(i, jk));
                    }
                }
            }
        }
    }
}

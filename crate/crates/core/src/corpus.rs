//! Deterministic corpus generators used by the test and acceptance
//! suites: symmetric inverse monoids and their random subsemigroups,
//! exhaustive small semilattices up to isomorphism, random semilattices,
//! and families of small semigroupoids satisfying the standing
//! hypothesis (monic elements, lcms for intersecting pairs).

use crate::inverse::InverseSemigroup;
use crate::rep::PartialBijection;
use crate::semilattice::Semilattice;
use crate::sgpd::Semigroupoid;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeMap, HashSet};

/// All partial bijections on `{0, .., n-1}`.
pub fn all_partial_bijections(n: usize) -> Vec<PartialBijection> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        let mut next = Vec::new();
        for prefix in out {
            let used: HashSet<usize> = prefix.iter().copied().flatten().collect();
            let mut with_none = prefix.clone();
            with_none.push(None);
            next.push(with_none);
            for t in 0..n {
                if !used.contains(&t) {
                    let mut w = prefix.clone();
                    w.push(Some(t));
                    next.push(w);
                }
            }
        }
        out = next;
    }
    let mut pbs: Vec<PartialBijection> =
        out.into_iter().map(|m| PartialBijection::new(n, m).unwrap()).collect();
    pbs.sort_by_key(|p| p.render());
    pbs
}

/// Build an inverse semigroup from a closed set of partial bijections.
fn isg_from_partial_bijections(maps: Vec<PartialBijection>) -> InverseSemigroup {
    let labels: Vec<String> = maps.iter().map(|p| p.render()).collect();
    let pos = |p: &PartialBijection| maps.iter().position(|q| q == p).unwrap();
    let mul: Vec<Vec<usize>> = maps
        .iter()
        .map(|p| maps.iter().map(|q| pos(&p.compose(q))).collect())
        .collect();
    let zero = maps.iter().position(|p| p.is_empty_map());
    InverseSemigroup::validate(labels, mul, zero).expect("closed sets of partial bijections")
}

/// The symmetric inverse monoid I_n as a multiplication table.
pub fn symmetric_inverse_monoid(n: usize) -> InverseSemigroup {
    isg_from_partial_bijections(all_partial_bijections(n))
}

/// Close a generating set of partial bijections under composition and
/// inversion.
pub fn close_partial_bijections(generators: &[PartialBijection]) -> Vec<PartialBijection> {
    let mut set: Vec<PartialBijection> = Vec::new();
    let mut todo: Vec<PartialBijection> = generators.to_vec();
    while let Some(p) = todo.pop() {
        if set.contains(&p) {
            continue;
        }
        set.push(p.clone());
        todo.push(p.inverse());
        for q in set.clone() {
            todo.push(p.compose(&q));
            todo.push(q.compose(&p));
        }
    }
    set.sort_by_key(|p| p.render());
    set
}

/// Random inverse subsemigroups of I_n, generated by a few random
/// partial bijections and closed under product and star.
pub fn random_inverse_subsemigroups(
    n: usize,
    count: usize,
    seed: u64,
) -> Vec<InverseSemigroup> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let gens: Vec<PartialBijection> = (0..rng.gen_range(1..=3))
            .map(|_| {
                let mut map = vec![None; n];
                let mut used = HashSet::new();
                for slot in map.iter_mut() {
                    if rng.gen_bool(0.6) {
                        let choices: Vec<usize> =
                            (0..n).filter(|t| !used.contains(t)).collect();
                        if let Some(&t) = choices.as_slice().choose(&mut rng) {
                            *slot = Some(t);
                            used.insert(t);
                        }
                    }
                }
                PartialBijection::new(n, map).unwrap()
            })
            .collect();
        let closed = close_partial_bijections(&gens);
        if closed.is_empty() || closed.len() > 80 {
            continue;
        }
        out.push(isg_from_partial_bijections(closed));
    }
    out
}

/// Extend a semilattice by one new maximal element whose strict
/// down-set is `down`; `down` must be down-closed and meet every
/// principal down-set in a maximum.
fn extend_semilattice(lat: &Semilattice, down: u64) -> Option<Semilattice> {
    let n = lat.len();
    // Down-closure and the definedness of all new meets.
    let mut new_meets = Vec::with_capacity(n);
    for y in 0..n {
        let dy: Vec<usize> = (0..n)
            .filter(|&z| down & (1 << z) != 0 && lat.leq(z, y))
            .collect();
        let max = dy.iter().copied().find(|&z| dy.iter().all(|&w| lat.leq(w, z)))?;
        new_meets.push(max);
    }
    for z in 0..n {
        if down & (1 << z) != 0 {
            for w in 0..n {
                if lat.leq(w, z) && down & (1 << w) == 0 {
                    return None; // not down-closed
                }
            }
        }
    }
    let mut labels = lat.labels().to_vec();
    labels.push(format!("e{n}"));
    let mut table: Vec<Vec<usize>> = (0..=n)
        .map(|i| {
            (0..=n)
                .map(|j| match (i == n, j == n) {
                    (false, false) => lat.meet(i, j),
                    (true, false) => new_meets[j],
                    (false, true) => new_meets[i],
                    (true, true) => n,
                })
                .collect()
        })
        .collect();
    // Relabel so the original labels stay unique.
    for (i, l) in labels.iter_mut().enumerate() {
        *l = format!("e{i}");
    }
    let zero = lat.zero();
    table.iter_mut().for_each(|_| {});
    Semilattice::from_meet_table(labels, table, zero).ok()
}

fn singleton_semilattice() -> Semilattice {
    Semilattice::from_meet_table(vec!["e0".into()], vec![vec![0]], 0).unwrap()
}

/// All meet-semilattices with zero on at most `max_n` elements, up to
/// isomorphism. Every finite semilattice arises by repeatedly adjoining
/// a maximal element, so the enumeration is exhaustive.
pub fn all_semilattices_up_to_iso(max_n: usize) -> Vec<Semilattice> {
    let mut all = vec![singleton_semilattice()];
    let mut layer = vec![singleton_semilattice()];
    for _ in 2..=max_n {
        let mut next = Vec::new();
        let mut keys = HashSet::new();
        for lat in &layer {
            let n = lat.len();
            for down in 0..(1u64 << n) {
                if down & (1 << lat.zero()) == 0 {
                    continue;
                }
                if let Some(ext) = extend_semilattice(lat, down) {
                    if keys.insert(ext.canonical_key()) {
                        next.push(ext);
                    }
                }
            }
        }
        all.extend(next.iter().cloned());
        layer = next;
    }
    all
}

/// Random semilattices on up to `max_n` elements, grown by random
/// maximal-element extensions.
pub fn random_semilattices(count: usize, max_n: usize, seed: u64) -> Vec<Semilattice> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let target = rng.gen_range(2..=max_n);
        let mut lat = singleton_semilattice();
        while lat.len() < target {
            let n = lat.len();
            let down = {
                let mut d = 1u64 << lat.zero();
                for z in 0..n {
                    if z != lat.zero() && rng.gen_bool(0.4) {
                        d |= 1 << z;
                        // Close downward.
                        for w in 0..n {
                            if lat.leq(w, z) {
                                d |= 1 << w;
                            }
                        }
                    }
                }
                d
            };
            if let Some(ext) = extend_semilattice(&lat, down) {
                lat = ext;
            }
        }
        out.push(lat);
    }
    out
}

/// The three-element semigroupoid {a, b, c} with the single product
/// a·b = c.
pub fn sg3() -> Semigroupoid {
    let mut t = BTreeMap::new();
    t.insert((0, 1), 2);
    Semigroupoid::validate(vec!["a".into(), "b".into(), "c".into()], &t).unwrap()
}

/// Depth truncation of the free monoid on `letters` generators: words of
/// length 1..=depth, composable when the concatenation stays within the
/// bound.
pub fn free_monoid_truncation(letters: usize, depth: usize) -> Semigroupoid {
    let mut words: Vec<Vec<usize>> = Vec::new();
    let mut layer: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..depth {
        let mut next = Vec::new();
        for w in &layer {
            for l in 0..letters {
                let mut nw = w.clone();
                nw.push(l);
                next.push(nw);
            }
        }
        words.extend(next.iter().cloned());
        layer = next;
    }
    let render = |w: &[usize]| -> String {
        w.iter().map(|l| (b'1' + *l as u8) as char).collect()
    };
    let labels: Vec<String> = words.iter().map(|w| render(w)).collect();
    let mut table = BTreeMap::new();
    for (i, u) in words.iter().enumerate() {
        for (j, v) in words.iter().enumerate() {
            if u.len() + v.len() <= depth {
                let mut uv = u.clone();
                uv.extend_from_slice(v);
                let k = words.iter().position(|w| *w == uv).unwrap();
                table.insert((i, j), k);
            }
        }
    }
    let full = if words.is_empty() { 0 } else { (1u64 << words.len()) - 1 };
    let ambient = vec![full; words.len()];
    Semigroupoid::validate_truncated(labels, &table, ambient).unwrap()
}

/// Depth truncation of the single-vertex 2-graph grid: nonzero degree
/// vectors (m, n) ≤ (d1, d2) under addition within the bound.
pub fn grid_truncation(d1: usize, d2: usize) -> Semigroupoid {
    let mut degs = Vec::new();
    for m in 0..=d1 {
        for n in 0..=d2 {
            if m + n > 0 {
                degs.push((m, n));
            }
        }
    }
    let labels: Vec<String> = degs.iter().map(|(m, n)| format!("({m},{n})")).collect();
    let mut table = BTreeMap::new();
    for (i, &(a, b)) in degs.iter().enumerate() {
        for (j, &(c, d)) in degs.iter().enumerate() {
            if a + c <= d1 && b + d <= d2 {
                let k = degs.iter().position(|&p| p == (a + c, b + d)).unwrap();
                table.insert((i, j), k);
            }
        }
    }
    let full = if degs.is_empty() { 0 } else { (1u64 << degs.len()) - 1 };
    let ambient = vec![full; degs.len()];
    Semigroupoid::validate_truncated(labels, &table, ambient).unwrap()
}

/// A truncation of the free monoid on two letters to a factor-closed
/// word set (every contiguous substring of a member is a member), with
/// u·v defined exactly when the concatenation stays in the set.
/// Factor-closure is what keeps the surviving associativity clauses
/// intact at the boundary.
pub fn word_set_truncation(words: &[&str]) -> Option<Semigroupoid> {
    let set: Vec<String> = words.iter().map(|w| w.to_string()).collect();
    for w in &set {
        for i in 0..w.len() {
            for j in (i + 1)..=w.len() {
                if !set.contains(&w[i..j].to_string()) {
                    return None;
                }
            }
        }
    }
    let mut table = BTreeMap::new();
    for (i, u) in set.iter().enumerate() {
        for (j, v) in set.iter().enumerate() {
            let uv = format!("{u}{v}");
            if let Some(k) = set.iter().position(|w| *w == uv) {
                table.insert((i, j), k);
            }
        }
    }
    let full = if set.is_empty() { 0 } else { (1u64 << set.len()) - 1 };
    let ambient = vec![full; set.len()];
    Semigroupoid::validate_truncated(set, &table, ambient).ok()
}

/// The path semigroupoid of a finite acyclic digraph: directed paths of
/// length at least one, with concatenation (first argument at the range
/// end). Always monic, categorical, and closed under lcms.
pub fn dag_path_semigroupoid(vertices: usize, edges: &[(usize, usize)]) -> Option<Semigroupoid> {
    // Paths as edge index sequences; (r, d) endpoints tracked.
    #[derive(Clone, PartialEq)]
    struct Path {
        edges: Vec<usize>,
        range: usize,
        source: usize,
    }
    let mut paths: Vec<Path> = edges
        .iter()
        .enumerate()
        .map(|(i, &(r, d))| Path { edges: vec![i], range: r, source: d })
        .collect();
    let mut frontier = paths.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for p in &frontier {
            for (i, &(r, d)) in edges.iter().enumerate() {
                if r == p.source {
                    let mut np = p.edges.clone();
                    np.push(i);
                    let cand = Path { edges: np, range: p.range, source: d };
                    if paths.iter().all(|q| q.edges != cand.edges) {
                        paths.push(cand.clone());
                        next.push(cand);
                    }
                }
            }
        }
        if paths.len() > 64 {
            return None; // cyclic or too large
        }
        frontier = next;
    }
    let _ = vertices;
    let labels: Vec<String> = paths
        .iter()
        .map(|p| p.edges.iter().map(|e| format!("e{e}")).collect::<Vec<_>>().join("."))
        .collect();
    let mut table = BTreeMap::new();
    for (i, p) in paths.iter().enumerate() {
        for (j, q) in paths.iter().enumerate() {
            if p.source == q.range {
                let mut pe = p.edges.clone();
                pe.extend_from_slice(&q.edges);
                let k = paths.iter().position(|w| w.edges == pe)?;
                table.insert((i, j), k);
            }
        }
    }
    Semigroupoid::validate(labels, &table).ok()
}

/// Exhaustive enumeration of semigroupoids on at most three elements
/// that satisfy the standing hypothesis, up to relabeling.
pub fn tiny_standing_semigroupoids() -> Vec<Semigroupoid> {
    let n = 3usize;
    let labels: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
    let mut out: Vec<Semigroupoid> = Vec::new();
    let mut keys: HashSet<Vec<u8>> = HashSet::new();
    let pairs: Vec<(usize, usize)> =
        (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    let total = 4usize.pow(pairs.len() as u32);
    for code in 0..total {
        let mut c = code;
        let mut table = BTreeMap::new();
        for &(i, j) in &pairs {
            let v = c % 4;
            c /= 4;
            if v > 0 {
                table.insert((i, j), v - 1);
            }
        }
        let Ok(s) = Semigroupoid::validate(labels.clone(), &table) else {
            continue;
        };
        if !s.check_standing_hypothesis().holds {
            continue;
        }
        let key = canonical_sgpd_key(&s);
        if keys.insert(key) {
            out.push(s);
        }
    }
    out
}

fn canonical_sgpd_key(s: &Semigroupoid) -> Vec<u8> {
    let n = s.len();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best: Option<Vec<u8>> = None;
    fn visit(perm: &mut Vec<usize>, k: usize, s: &Semigroupoid, best: &mut Option<Vec<u8>>) {
        let n = perm.len();
        if k == n {
            let mut inv = vec![0usize; n];
            for (new, &old) in perm.iter().enumerate() {
                inv[old] = new;
            }
            let mut key = Vec::with_capacity(n * n);
            for i in 0..n {
                for j in 0..n {
                    key.push(match s.compose(perm[i], perm[j]) {
                        None => 255u8,
                        Some(h) => inv[h] as u8,
                    });
                }
            }
            if best.as_ref().map_or(true, |b| key < *b) {
                *best = Some(key);
            }
            return;
        }
        for i in k..n {
            perm.swap(k, i);
            visit(perm, k + 1, s, best);
            perm.swap(k, i);
        }
    }
    visit(&mut perm, 0, s, &mut best);
    best.unwrap_or_default()
}

/// The working corpus of small semigroupoids satisfying the standing
/// hypothesis: the exhaustive three-element family, word and grid
/// truncations, spring-only families, and acyclic path categories
/// (deterministic shapes plus seeded random ones), deduplicated up to
/// relabeling. Every member has at most six elements.
pub fn semigroupoid_corpus(seed: u64) -> Vec<Semigroupoid> {
    let mut out: Vec<Semigroupoid> = Vec::new();
    let mut keys: HashSet<Vec<u8>> = HashSet::new();
    let mut push = |s: Semigroupoid, out: &mut Vec<Semigroupoid>| {
        if s.len() <= 6
            && (s.is_empty() || s.check_standing_hypothesis().holds)
            && keys.insert(canonical_sgpd_key(&s))
        {
            out.push(s);
        }
    };
    push(sg3(), &mut out);
    for s in tiny_standing_semigroupoids() {
        push(s, &mut out);
    }
    // Spring-only families: no products at all.
    for n in 1..=6 {
        let labels: Vec<String> = (0..n).map(|i| format!("s{i}")).collect();
        push(Semigroupoid::validate(labels, &BTreeMap::new()).unwrap(), &mut out);
    }
    for depth in 2..=6 {
        push(free_monoid_truncation(1, depth), &mut out);
    }
    push(free_monoid_truncation(2, 2), &mut out);
    push(grid_truncation(1, 1), &mut out);
    push(grid_truncation(2, 1), &mut out);
    // Deterministic acyclic shapes on up to four vertices, parallel
    // edges included.
    let shapes: Vec<Vec<(usize, usize)>> = vec![
        vec![(0, 1), (1, 2)],
        vec![(0, 1), (1, 2), (2, 3)],
        vec![(0, 1), (1, 2), (1, 3)],
        vec![(0, 2), (1, 2), (2, 3)],
        vec![(0, 1), (0, 1), (1, 2)],
        vec![(0, 1), (1, 2), (1, 2)],
        vec![(0, 1), (0, 2), (1, 3), (2, 3)],
        vec![(0, 1), (1, 2), (0, 2)],
        vec![(0, 1), (0, 1), (1, 2), (1, 2)],
        vec![(0, 1), (1, 3), (2, 3)],
        vec![(0, 1), (0, 1), (0, 1)],
        vec![(0, 1), (1, 2), (3, 1)],
        vec![(0, 3), (1, 3), (2, 3), (3, 0)],
    ];
    for edges in &shapes {
        if let Some(s) = dag_path_semigroupoid(4, edges) {
            push(s, &mut out);
        }
    }
    // Factor-closed word-set truncations over two letters.
    let word_sets: Vec<Vec<&str>> = vec![
        vec!["1", "2", "11"],
        vec!["1", "2", "11", "12"],
        vec!["1", "2", "11", "21"],
        vec!["1", "2", "11", "22"],
        vec!["1", "2", "12", "21"],
        vec!["1", "2", "11", "12", "21"],
        vec!["1", "2", "11", "12", "22"],
        vec!["1", "2", "11", "12", "21", "22"],
        vec!["1", "2", "11", "111"],
        vec!["1", "11", "111", "1111"],
        vec!["1", "2", "22", "222"],
    ];
    for ws in &word_sets {
        if let Some(s) = word_set_truncation(ws) {
            push(s, &mut out);
        }
    }
    // Exhaustive acyclic shapes on three vertices with edge
    // multiplicities up to two.
    let base = [(0usize, 1usize), (0, 2), (1, 2)];
    for m0 in 0..=2usize {
        for m1 in 0..=2usize {
            for m2 in 0..=2usize {
                let mut edges = Vec::new();
                for (count, e) in [m0, m1, m2].into_iter().zip(base) {
                    for _ in 0..count {
                        edges.push(e);
                    }
                }
                if edges.is_empty() {
                    continue;
                }
                if let Some(s) = dag_path_semigroupoid(3, &edges) {
                    push(s, &mut out);
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..200 {
        if out.len() >= 40 {
            break;
        }
        let v = rng.gen_range(2..=5usize);
        let mut edges = Vec::new();
        for a in 0..v {
            for b in (a + 1)..v {
                for _ in 0..2 {
                    if rng.gen_bool(0.35) {
                        edges.push((a, b));
                    }
                }
            }
        }
        if edges.is_empty() {
            continue;
        }
        if let Some(s) = dag_path_semigroupoid(v, &edges) {
            push(s, &mut out);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partial_bijection_counts() {
        assert_eq!(all_partial_bijections(2).len(), 7);
        assert_eq!(all_partial_bijections(3).len(), 34);
        assert_eq!(all_partial_bijections(4).len(), 209);
    }

    #[test]
    fn semilattice_enumeration_counts() {
        let all = all_semilattices_up_to_iso(4);
        let by_size = |k: usize| all.iter().filter(|l| l.len() == k).count();
        assert_eq!(by_size(1), 1);
        assert_eq!(by_size(2), 1);
        assert_eq!(by_size(3), 2);
        assert_eq!(by_size(4), 5);
    }

    #[test]
    fn random_semilattices_validate() {
        let lats = random_semilattices(20, 8, 42);
        assert_eq!(lats.len(), 20);
    }

    #[test]
    fn random_subsemigroups_validate() {
        let subs = random_inverse_subsemigroups(3, 10, 7);
        assert_eq!(subs.len(), 10);
    }

    #[test]
    fn corpus_is_large_enough() {
        let corpus = semigroupoid_corpus(1);
        assert!(corpus.len() >= 30, "only {} corpus members", corpus.len());
        for s in &corpus {
            assert!(s.check_standing_hypothesis().holds || s.is_empty());
            assert!(s.len() <= 6);
        }
    }

    #[test]
    fn dag_paths_are_categorical_semigroupoids() {
        let s = dag_path_semigroupoid(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(s.len(), 3); // e0, e1, e0.e1
        assert!(s.check_standing_hypothesis().holds);
    }
}

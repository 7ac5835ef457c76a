//! The projection functor from partitioned linear orders to circular
//! structures, the reversal (quadrant) procedure that inverts it, exact
//! expansion counting, and the supporting-expansion coloring.
//!
//! A labeled expansion fixes a linear order and a partition label on the
//! universe of a circular structure. Projection turns that data back into
//! sector relations: for points `x ∈ P_i`, `y ∈ P_j`,
//!
//! * `x < y` puts the pair in sector `(i-j-1) mod n` (read at `(x,y)`),
//! * `y < x` puts it in sector `(i-j) mod n`,
//!
//! which is the sector arithmetic of points at angles `θ + (class-1)/n`. The
//! result is validated against the sector totality and symmetry invariants;
//! a violation panics rather than producing a quietly wrong structure.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use rand::Rng;

use crate::circular::{AngleConfig, SnStructure};
use crate::partitioned::{enumerate_qn, QnStructure};
use crate::structure::{automorphism_group_order, canonicalize, copies};
use crate::{mod_one, Error, Rational, Result};

/// Labeled expansion counting searches all `N!·n^N` candidates.
pub const EXPANSION_CAP: usize = 6;

/// Coloring machinery enumerates copies inside structures up to this size.
pub const COLORING_CAP: usize = 7;

/// A linear order plus partition labels on a fixed universe `{0..N-1}`.
///
/// `order` lists the points in ascending order position; `labels[p]` is the
/// partition class of point `p`, in `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LabeledExpansion {
    n: usize,
    order: Vec<usize>,
    labels: Vec<usize>,
}

impl LabeledExpansion {
    pub fn new(n: usize, order: Vec<usize>, labels: Vec<usize>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("partition count must be positive".into()));
        }
        if order.len() != labels.len() {
            return Err(Error::InvalidArgument(format!(
                "order has {} entries, labels {}",
                order.len(),
                labels.len()
            )));
        }
        let size = order.len();
        let mut seen = vec![false; size];
        for &p in &order {
            if p >= size || seen[p] {
                return Err(Error::InvalidArgument(
                    "order must be a permutation of the universe".into(),
                ));
            }
            seen[p] = true;
        }
        if labels.iter().any(|&l| l == 0 || l > n) {
            return Err(Error::InvalidArgument(format!("labels must lie in 1..={n}")));
        }
        Ok(LabeledExpansion { n, order, labels })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn size(&self) -> usize {
        self.order.len()
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    /// Position of each point along the order (inverse of `order`).
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.order.len()];
        for (p, &point) in self.order.iter().enumerate() {
            pos[point] = p;
        }
        pos
    }

    /// The label word read along the order — the underlying iso class.
    pub fn word(&self) -> QnStructure {
        let word = self.order.iter().map(|&p| self.labels[p]).collect();
        QnStructure::new(self.n, word).expect("expansion labels form a valid word")
    }

    /// The word induced on a subset of the universe: its points in order,
    /// carrying their labels.
    pub fn induced_word(&self, subset: &BTreeSet<usize>) -> QnStructure {
        let word = self
            .order
            .iter()
            .filter(|p| subset.contains(p))
            .map(|&p| self.labels[p])
            .collect();
        QnStructure::new(self.n, word).expect("induced labels form a valid word")
    }

    /// Parse `order=2,0,1 labels=1,1,2` for a given `n`.
    pub fn parse(s: &str, n: usize) -> Result<Self> {
        let parts: Vec<&str> = s.split_whitespace().collect();
        if parts.len() != 2 {
            return Err(Error::Parse("expected `order=.. labels=..`".into()));
        }
        let order = parse_list(parts[0], "order=")?;
        let labels = parse_list(parts[1], "labels=")?;
        LabeledExpansion::new(n, order, labels)
    }
}

fn parse_list(field: &str, prefix: &str) -> Result<Vec<usize>> {
    let body = field
        .strip_prefix(prefix)
        .ok_or_else(|| Error::Parse(format!("bad field `{field}`")))?;
    if body.is_empty() {
        return Ok(Vec::new());
    }
    body.split(',')
        .map(|tok| {
            tok.parse()
                .map_err(|_| Error::Parse(format!("bad number `{tok}`")))
        })
        .collect()
}

impl fmt::Display for LabeledExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "order={} labels={}",
            self.order.iter().join(","),
            self.labels.iter().join(",")
        )
    }
}

/// Project a labeled expansion onto its circular structure, on the same
/// universe.
///
/// A point of class `i` at window offset `θ` sits on the circle at angle
/// `θ + (i-1)/n`, so the sector of `(u, v)` is determined by the class
/// difference and which point comes first: `(i-j-1) mod n` when `u` precedes
/// `v`, `(i-j) mod n` when `v` precedes `u`.
pub fn project_expansion(x: &LabeledExpansion) -> SnStructure {
    let n = x.n;
    let size = x.size();
    let positions = x.positions();
    let mut inner = crate::structure::FinStructure::empty(
        crate::structure::Signature::binary(n),
        size,
    );
    for u in 0..size {
        for v in (u + 1)..size {
            let (i, j) = (x.labels[u], x.labels[v]);
            let k = if positions[u] < positions[v] {
                (i + n - j + n - 1) % n
            } else {
                (i + n - j) % n
            };
            inner.insert(k, vec![u, v]);
            inner.insert(n - 1 - k, vec![v, u]);
        }
    }
    SnStructure::new(inner).expect("projection must satisfy the sector invariants")
}

/// Project an iso class: the word becomes the expansion with the identity
/// order, so the output universe is the set of order positions.
pub fn project_word(word: &QnStructure) -> SnStructure {
    let size = word.len();
    let x = LabeledExpansion::new(word.n(), (0..size).collect(), word.word().to_vec())
        .expect("a word is a valid expansion");
    project_expansion(&x)
}

/// A rotation offset for the quadrant boundaries, in `[0, 1/n)`, generic for
/// the configuration it was built against.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadrantCut {
    theta: Rational,
}

impl QuadrantCut {
    pub fn new(theta: Rational, config: &AngleConfig) -> Result<Self> {
        let n = config.n();
        let upper = Rational::new(1.into(), BigInt::from(n));
        if theta.is_negative() || theta >= upper {
            return Err(Error::InvalidArgument(format!(
                "cut {theta} outside [0, 1/{n})"
            )));
        }
        check_cut_generic(&theta, config)?;
        Ok(QuadrantCut { theta })
    }

    /// Rejection-sample a generic cut for `config`.
    pub fn random<R: Rng + ?Sized>(config: &AngleConfig, rng: &mut R) -> Self {
        let n = BigInt::from(config.n());
        loop {
            let q = rng.random_range(1..=crate::circular::RANDOM_DENOMINATOR_CAP) as i64;
            let p = rng.random_range(0..q);
            let theta = Rational::new(p.into(), q.into()) / &n;
            if check_cut_generic(&theta, config).is_ok() {
                return QuadrantCut { theta };
            }
        }
    }

    pub fn theta(&self) -> &Rational {
        &self.theta
    }
}

fn check_cut_generic(theta: &Rational, config: &AngleConfig) -> Result<()> {
    let n = config.n();
    for a in config.angles() {
        if ((a - theta) * BigInt::from(n)).is_integer() {
            return Err(Error::CutGenericity {
                theta: theta.to_string(),
                n,
            });
        }
    }
    Ok(())
}

/// The cut positions where the quadrant partition of `config` changes: the
/// point angles reduced modulo `1/n`, sorted. Genericity makes them pairwise
/// distinct, so there are exactly as many as points.
pub fn critical_cuts(config: &AngleConfig) -> Vec<Rational> {
    let n = BigInt::from(config.n());
    let set: BTreeSet<Rational> = config
        .angles()
        .iter()
        .map(|a| mod_one(&(a * &n)) / &n)
        .collect();
    let cuts: Vec<Rational> = set.into_iter().collect();
    debug_assert_eq!(cuts.len(), config.len(), "criticals must be distinct");
    cuts
}

/// One generic cut per cell of the critical arrangement: the midpoints of
/// consecutive criticals, cyclically around `[0, 1/n)`. Sampling these
/// enumerates every quadrant partition of the configuration.
pub fn cut_midpoints(config: &AngleConfig) -> Vec<QuadrantCut> {
    let n = BigInt::from(config.n());
    let period = Rational::new(1.into(), n);
    let criticals = critical_cuts(config);
    let two = Rational::from_integer(2.into());
    let mut cuts = Vec::with_capacity(criticals.len());
    for (i, c) in criticals.iter().enumerate() {
        let next = if i + 1 < criticals.len() {
            criticals[i + 1].clone()
        } else {
            &criticals[0] + &period
        };
        let mid = (c + &next) / &two;
        let mid = if mid >= period { mid - &period } else { mid };
        cuts.push(QuadrantCut::new(mid, config).expect("cell midpoint is generic"));
    }
    cuts
}

/// Run the quadrant procedure: label each point by the (rotated) quadrant it
/// falls in, and order points by their offset into their own quadrant. The
/// result is a labeled expansion of `realize(config)` on the same universe.
pub fn reversal(
    config: &AngleConfig,
    cut: &QuadrantCut,
    rotation: usize,
) -> Result<LabeledExpansion> {
    let n = config.n();
    if rotation == 0 || rotation > n {
        return Err(Error::InvalidArgument(format!(
            "rotation {rotation} outside 1..={n}"
        )));
    }
    check_cut_generic(&cut.theta, config)?;
    let big_n = BigInt::from(n);
    let mut labels = Vec::with_capacity(config.len());
    let mut offsets: Vec<(Rational, usize)> = Vec::with_capacity(config.len());
    for (i, a) in config.angles().iter().enumerate() {
        let u = mod_one(&(a - &cut.theta));
        let scaled = &u * &big_n;
        let quadrant = scaled
            .floor()
            .to_integer()
            .to_usize()
            .expect("quadrant index fits in usize")
            + 1;
        labels.push((quadrant + n - rotation) % n + 1);
        let offset = &u - Rational::new(BigInt::from(quadrant - 1), big_n.clone());
        offsets.push((offset, i));
    }
    offsets.sort();
    let order = offsets.into_iter().map(|(_, i)| i).collect();
    LabeledExpansion::new(n, order, labels)
}

/// Count the labeled expansions on the universe of `a` whose projection is
/// literally `a` (same labels, same relations), by exhaustive search over all
/// `N!·n^N` order/label assignments.
pub fn count_labeled_expansions(a: &SnStructure) -> Result<u64> {
    let size = a.size();
    if size > EXPANSION_CAP {
        return Err(Error::CapExceeded {
            what: "labeled expansion count",
            size,
            cap: EXPANSION_CAP,
        });
    }
    let n = a.n();
    let label_vectors: Vec<Vec<usize>> = enumerate_qn(n, size)?
        .into_iter()
        .map(|w| w.word().to_vec())
        .collect();
    let mut count = 0;
    for order in (0..size).permutations(size) {
        for labels in &label_vectors {
            let x = LabeledExpansion::new(n, order.clone(), labels.clone())
                .expect("enumerated candidates are valid");
            if project_expansion(&x).structure() == a.structure() {
                count += 1;
            }
        }
    }
    Ok(count)
}

/// The expansion count of `a` up to automorphism: the literal labeled count
/// divided by `|Aut(a)|`. Non-divisibility is surfaced as an error because it
/// would falsify the up-to-automorphism reading.
pub fn expansion_count_m(a: &SnStructure) -> Result<u64> {
    let count = count_labeled_expansions(a)?;
    let aut = automorphism_group_order(a.structure())?;
    if count % aut != 0 {
        return Err(Error::NonDivisibleCount { count, aut });
    }
    Ok(count / aut)
}

/// The expansions of `a` as iso classes: all words whose projection is
/// isomorphic to `a`, in lexicographic order. There are exactly
/// `expansion_count_m(a)` of them.
pub fn expansion_words(a: &SnStructure) -> Result<Vec<QnStructure>> {
    let target = canonicalize(a.structure())?.1;
    let mut words = Vec::new();
    for word in enumerate_qn(a.n(), a.size())? {
        let projected = project_word(&word);
        if canonicalize(projected.structure())?.1 == target {
            words.push(word);
        }
    }
    Ok(words)
}

/// Color every copy of `a` inside `c` by its supporting expansion: the word
/// induced on the copy by `cstar`, reported as an index into
/// [`expansion_words`]`(a)`.
pub fn expansion_coloring(
    c: &SnStructure,
    cstar: &LabeledExpansion,
    a: &SnStructure,
) -> Result<BTreeMap<BTreeSet<usize>, usize>> {
    if c.size() > COLORING_CAP {
        return Err(Error::CapExceeded {
            what: "expansion coloring",
            size: c.size(),
            cap: COLORING_CAP,
        });
    }
    if cstar.n() != c.n() || cstar.size() != c.size() {
        return Err(Error::NotAnExpansion);
    }
    if project_expansion(cstar).structure() != c.structure() {
        return Err(Error::NotAnExpansion);
    }
    let words = expansion_words(a)?;
    let mut coloring = BTreeMap::new();
    for copy in copies(a.structure(), c.structure())? {
        let word = cstar.induced_word(&copy);
        let index = words
            .binary_search(&word)
            .expect("induced word of a copy is an expansion of the copied structure");
        coloring.insert(copy, index);
    }
    Ok(coloring)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circular::{cycle_structure, realize};
    use crate::rat;

    fn word(n: usize, labels: &[usize]) -> QnStructure {
        QnStructure::new(n, labels.to_vec()).unwrap()
    }

    fn config(n: usize, angles: &[(i64, i64)]) -> AngleConfig {
        AngleConfig::new(n, angles.iter().map(|&(p, q)| rat(p, q)).collect()).unwrap()
    }

    #[test]
    fn projection_of_single_letter() {
        let a = project_word(&word(3, &[2]));
        assert_eq!(a.size(), 1);
        assert_eq!(a.n(), 3);
    }

    #[test]
    fn projection_same_class_pair() {
        // Both points in class 1, position 0 before position 1: sector 1 at (0,1).
        let a = project_word(&word(2, &[1, 1]));
        assert_eq!(a.sector(0, 1), 1);
        assert_eq!(a.sector(1, 0), 0);
    }

    #[test]
    fn projection_of_two_letter_words() {
        // The four 2-letter words produce two labeled tournaments, twice each.
        let images: Vec<SnStructure> = enumerate_qn(2, 2)
            .unwrap()
            .iter()
            .map(project_word)
            .collect();
        assert_eq!(images[0], images[3]); // 11 and 22
        assert_eq!(images[1], images[2]); // 12 and 21
        assert_ne!(images[0], images[1]);
        assert_eq!(images[1].sector(0, 1), 0);
    }

    #[test]
    fn labeled_expansion_counts() {
        let point = SnStructure::tournament(1, &[]).unwrap();
        assert_eq!(count_labeled_expansions(&point).unwrap(), 2);

        let cycle = SnStructure::tournament(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(count_labeled_expansions(&cycle).unwrap(), 6);

        let transitive = SnStructure::tournament(3, &[(0, 1), (0, 2), (1, 2)]).unwrap();
        assert_eq!(count_labeled_expansions(&transitive).unwrap(), 6);
    }

    #[test]
    fn expansion_counts_up_to_automorphism() {
        let cycle = SnStructure::tournament(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(expansion_count_m(&cycle).unwrap(), 2);

        let transitive = SnStructure::tournament(3, &[(0, 1), (0, 2), (1, 2)]).unwrap();
        assert_eq!(expansion_count_m(&transitive).unwrap(), 6);

        assert_eq!(expansion_count_m(&cycle_structure(2, 2)).unwrap(), 2);
    }

    #[test]
    fn expansion_word_lists() {
        let cycle = SnStructure::tournament(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        let words = expansion_words(&cycle).unwrap();
        assert_eq!(words, vec![word(2, &[1, 2, 1]), word(2, &[2, 1, 2])]);
    }

    #[test]
    fn reversal_example() {
        let c = config(2, &[(1, 8), (3, 8), (6, 8)]);
        let cut = QuadrantCut::new(rat(1, 100), &c).unwrap();
        let x = reversal(&c, &cut, 1).unwrap();
        assert_eq!(x.labels(), &[1, 1, 2]);
        assert_eq!(x.order(), &[0, 2, 1]);

        // Round trip: projecting the reversal recovers the realized structure.
        assert_eq!(project_expansion(&x), realize(&c));
    }

    #[test]
    fn reversal_round_trip_all_cells_and_rotations() {
        let c = config(2, &[(1, 8), (3, 8), (6, 8)]);
        let realized = realize(&c);
        let mut seen = BTreeSet::new();
        for cut in cut_midpoints(&c) {
            for rotation in 1..=2 {
                let x = reversal(&c, &cut, rotation).unwrap();
                assert_eq!(project_expansion(&x), realized);
                seen.insert(x);
            }
        }
        // |A| cells times n rotations, all distinct labeled expansions.
        assert_eq!(seen.len(), 6);
    }

    #[test]
    fn critical_cut_positions() {
        let single = config(2, &[(1, 8)]);
        assert_eq!(critical_cuts(&single), vec![rat(1, 8)]);

        let c = config(2, &[(1, 8), (3, 8), (6, 8)]);
        assert_eq!(
            critical_cuts(&c),
            vec![rat(1, 8), rat(1, 4), rat(3, 8)]
        );
    }

    #[test]
    fn cut_validation() {
        let c = config(2, &[(1, 8), (3, 8)]);
        assert!(matches!(
            QuadrantCut::new(rat(1, 8), &c),
            Err(Error::CutGenericity { .. })
        ));
        assert!(QuadrantCut::new(rat(1, 100), &c).is_ok());
        assert!(QuadrantCut::new(rat(1, 2), &c).is_err());
    }

    #[test]
    fn coloring_single_copy() {
        let c3 = cycle_structure(2, 1);
        let cfg = crate::circular::cycle_config(2, 1);
        let cut = cut_midpoints(&cfg).into_iter().next().unwrap();
        let cstar = reversal(&cfg, &cut, 1).unwrap();
        let cycle_rep = SnStructure::tournament(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        let coloring = expansion_coloring(&c3, &cstar, &cycle_rep).unwrap();
        assert_eq!(coloring.len(), 1);
    }

    #[test]
    fn coloring_five_copies_two_indices() {
        let c = cycle_structure(2, 2);
        let cfg = crate::circular::cycle_config(2, 2);
        let cut = cut_midpoints(&cfg).into_iter().next().unwrap();
        let cstar = reversal(&cfg, &cut, 1).unwrap();
        let cycle_rep = SnStructure::tournament(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        let coloring = expansion_coloring(&c, &cstar, &cycle_rep).unwrap();
        assert_eq!(coloring.len(), 5);
        assert!(coloring.values().all(|&i| i < 2));
    }

    #[test]
    fn coloring_rejects_non_expansions() {
        let c = cycle_structure(2, 1);
        let wrong = LabeledExpansion::new(2, vec![0, 1, 2], vec![1, 1, 1]).unwrap();
        let a = SnStructure::tournament(1, &[]).unwrap();
        assert_eq!(
            expansion_coloring(&c, &wrong, &a),
            Err(Error::NotAnExpansion)
        );
    }

    #[test]
    fn expansion_literal_round_trip() {
        let x = LabeledExpansion::new(2, vec![2, 0, 1], vec![1, 1, 2]).unwrap();
        assert_eq!(x.to_string(), "order=2,0,1 labels=1,1,2");
        assert_eq!(LabeledExpansion::parse("order=2,0,1 labels=1,1,2", 2).unwrap(), x);
        assert!(LabeledExpansion::parse("order=0,0 labels=1,1", 2).is_err());
        assert!(LabeledExpansion::parse("order=0,1 labels=1,3", 2).is_err());
    }

    #[test]
    fn words_from_expansions() {
        let x = LabeledExpansion::new(2, vec![2, 0, 1], vec![1, 1, 2]).unwrap();
        assert_eq!(x.word(), word(2, &[2, 1, 1]));
        assert_eq!(
            x.induced_word(&BTreeSet::from([0, 2])),
            word(2, &[2, 1])
        );
    }
}

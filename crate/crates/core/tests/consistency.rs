//! Cross-module consistency checks: independent oracles for the age
//! enumeration, closure properties, expansion-count identities, and the
//! completeness of the reversal procedure.

use std::collections::BTreeSet;

use circ_ramsey::circular::{
    cycle_config, cycle_structure, enumerate_age, is_realizable, realize,
    to_colored_tournament, AngleConfig, SnStructure,
};
use circ_ramsey::expansion::{
    count_labeled_expansions, cut_midpoints, expansion_count_m, expansion_words,
    project_expansion, reversal, LabeledExpansion,
};
use circ_ramsey::partitioned::{enumerate_qn, qn_embeds};
use circ_ramsey::structure::{
    canonical_form, embeddings, CanonicalForm, FinStructure, Signature,
};
use rand::rngs::StdRng;
use rand::SeedableRng;

/// All labeled tournaments on `size` vertices over a single binary symbol.
fn all_tournaments(size: usize) -> Vec<FinStructure> {
    let pairs: Vec<(usize, usize)> = (0..size)
        .flat_map(|i| ((i + 1)..size).map(move |j| (i, j)))
        .collect();
    let mut out = Vec::new();
    for bits in 0..(1u32 << pairs.len()) {
        let arcs: Vec<Vec<usize>> = pairs
            .iter()
            .enumerate()
            .map(|(idx, &(i, j))| {
                if bits >> idx & 1 == 0 {
                    vec![i, j]
                } else {
                    vec![j, i]
                }
            })
            .collect();
        out.push(FinStructure::new(Signature::binary(1), size, vec![arcs]).unwrap());
    }
    out
}

fn is_transitive(t: &FinStructure) -> bool {
    let size = t.size();
    let mut scores: Vec<usize> = (0..size)
        .map(|v| (0..size).filter(|&w| t.has(0, &[v, w])).count())
        .collect();
    scores.sort_unstable();
    scores.into_iter().eq(0..size)
}

/// A tournament is a local order when every out-set and in-set induces a
/// transitive tournament.
fn is_local_order(t: &FinStructure) -> bool {
    let size = t.size();
    (0..size).all(|v| {
        let out: BTreeSet<usize> = (0..size).filter(|&w| t.has(0, &[v, w])).collect();
        let into: BTreeSet<usize> = (0..size).filter(|&w| t.has(0, &[w, v])).collect();
        is_transitive(&t.induced(&out)) && is_transitive(&t.induced(&into))
    })
}

fn canonical_set(structures: impl IntoIterator<Item = FinStructure>) -> BTreeSet<CanonicalForm> {
    structures
        .into_iter()
        .map(|s| canonical_form(&s).unwrap())
        .collect()
}

#[test]
fn age_class_counts() {
    let expected_n2 = [1, 1, 2, 2, 4];
    for (size, want) in expected_n2.iter().enumerate() {
        assert_eq!(enumerate_age(2, size + 1).unwrap().len(), *want);
    }
    let expected_n3 = [1, 2, 3, 8];
    for (size, want) in expected_n3.iter().enumerate() {
        assert_eq!(enumerate_age(3, size + 1).unwrap().len(), *want);
    }
    let expected_n4 = [1, 2, 6];
    for (size, want) in expected_n4.iter().enumerate() {
        assert_eq!(enumerate_age(4, size + 1).unwrap().len(), *want);
    }
}

/// Place each point of a word on the circle explicitly: class `k` at window
/// offset `(pos+1)/((N+2)·n)` sits at angle `(k-1)/n + offset`. Realizing
/// this configuration must reproduce the projection on the nose.
#[test]
fn projection_agrees_with_explicit_circle_placements() {
    use num_bigint::BigInt;
    type Rational = num_rational::BigRational;
    for n in 2usize..=4 {
        for size in 0..=4usize {
            for word in enumerate_qn(n, size).unwrap() {
                let angles: Vec<Rational> = word
                    .word()
                    .iter()
                    .enumerate()
                    .map(|(pos, &label)| {
                        Rational::new(BigInt::from(label - 1), BigInt::from(n))
                            + Rational::new(
                                BigInt::from(pos + 1),
                                BigInt::from((size + 2) * n),
                            )
                    })
                    .collect();
                let config = AngleConfig::new(n, angles).unwrap();
                assert_eq!(
                    realize(&config),
                    circ_ramsey::expansion::project_word(&word),
                    "n={n} word={word}"
                );
            }
        }
    }
}

/// Every realized structure of a random configuration appears in the
/// enumerated age of its size.
#[test]
fn realized_structures_land_in_the_enumerated_age() {
    let mut rng = StdRng::seed_from_u64(4242);
    for n in 2usize..=4 {
        for size in 1..=4usize {
            let age: BTreeSet<CanonicalForm> = enumerate_age(n, size)
                .unwrap()
                .iter()
                .map(|a| canonical_form(a.structure()).unwrap())
                .collect();
            for _ in 0..10 {
                let config = AngleConfig::random(n, size, &mut rng);
                let realized = realize(&config);
                assert!(age.contains(&canonical_form(realized.structure()).unwrap()));
            }
        }
    }
}

#[test]
fn expansion_counts_partition_the_words() {
    // Summing m(A) over iso classes of one size recovers n^N exactly.
    for (n, max) in [(2usize, 5usize), (3, 4), (4, 3)] {
        for size in 1..=max {
            let total: u64 = enumerate_age(n, size)
                .unwrap()
                .iter()
                .map(|a| expansion_count_m(a).unwrap())
                .sum();
            assert_eq!(total, (n as u64).pow(size as u32), "n={n} size={size}");
        }
    }
}

#[test]
fn age_of_two_sectors_is_the_local_orders() {
    // Independent oracle: filter all tournaments by local transitivity and
    // compare canonical-form sets with the single-color view of the age.
    for size in 1..=5usize {
        let tournaments = all_tournaments(size);
        let locals = canonical_set(
            tournaments
                .iter()
                .filter(|t| is_local_order(t))
                .cloned(),
        );
        let age = canonical_set(
            enumerate_age(2, size)
                .unwrap()
                .iter()
                .map(|a| to_colored_tournament(a).unwrap().structure().clone()),
        );
        assert_eq!(age, locals, "size {size}");
    }
}

#[test]
fn small_tournament_counts_match_the_age_only_up_to_three_points() {
    // All tournaments up to iso: 1, 1, 2, 4, 12. The age agrees through
    // size 3 and is a proper subclass afterwards.
    let expected_tournaments = [1usize, 1, 2, 4, 12];
    for (size, want) in expected_tournaments.iter().enumerate() {
        let count = canonical_set(all_tournaments(size + 1)).len();
        assert_eq!(count, *want);
        let age_count = enumerate_age(2, size + 1).unwrap().len();
        if size < 3 {
            assert_eq!(age_count, count);
        } else {
            assert!(age_count < count);
        }
    }
}

#[test]
fn dominated_cycle_tournament_has_no_expansion() {
    // One vertex beating a 3-cycle: its out-set is not transitive, so it is
    // not a local order and admits no expansion at all.
    let dominator =
        SnStructure::tournament(4, &[(3, 0), (3, 1), (3, 2), (0, 1), (1, 2), (2, 0)]).unwrap();
    assert_eq!(count_labeled_expansions(&dominator).unwrap(), 0);
    let view = to_colored_tournament(&dominator).unwrap();
    assert!(!is_realizable(&view, 2).unwrap());
}

#[test]
fn age_is_closed_under_induced_substructures() {
    for n in [2usize, 3] {
        for size in 2..=4usize {
            let smaller: BTreeSet<CanonicalForm> = enumerate_age(n, size - 1)
                .unwrap()
                .iter()
                .map(|a| canonical_form(a.structure()).unwrap())
                .collect();
            for member in enumerate_age(n, size).unwrap() {
                for drop in 0..size {
                    let subset: BTreeSet<usize> =
                        (0..size).filter(|&v| v != drop).collect();
                    let induced = member.structure().induced(&subset);
                    assert!(
                        smaller.contains(&canonical_form(&induced).unwrap()),
                        "n={n} size={size}: induced substructure escapes the age"
                    );
                }
            }
        }
    }
}

#[test]
fn labeled_expansion_count_is_n_times_size() {
    for n in [2usize, 3] {
        for size in 1..=4usize {
            for member in enumerate_age(n, size).unwrap() {
                assert_eq!(
                    count_labeled_expansions(&member).unwrap(),
                    (n * size) as u64,
                    "n={n} size={size}"
                );
            }
        }
    }
}

#[test]
fn big_degree_factors_through_the_expansion_oracle() {
    use circ_ramsey::degrees::{big_degree, tangent_number};
    use num_bigint::BigUint;
    for size in 1..=4usize {
        for member in enumerate_age(2, size).unwrap() {
            let m = expansion_count_m(&member).unwrap();
            assert_eq!(
                big_degree(&member).unwrap(),
                BigUint::from(m) * tangent_number(size).unwrap()
            );
        }
    }
}

/// All labeled expansions of `b` on its own universe, by brute filter.
fn labeled_expansions_of(b: &SnStructure) -> Vec<LabeledExpansion> {
    use itertools::Itertools;
    let size = b.size();
    let n = b.n();
    let mut out = Vec::new();
    for order in (0..size).permutations(size) {
        for labels in enumerate_qn(n, size).unwrap() {
            let x = LabeledExpansion::new(n, order.clone(), labels.word().to_vec()).unwrap();
            if project_expansion(&x).structure() == b.structure() {
                out.push(x);
            }
        }
    }
    out
}

#[test]
fn expansions_pull_back_along_embeddings() {
    // For every embedding f : A → B between age members and every expansion
    // of B, restricting order and labels to the image yields an expansion
    // of A on the nose.
    let age: Vec<SnStructure> = (1..=4)
        .flat_map(|size| enumerate_age(2, size).unwrap())
        .collect();
    for a in &age {
        for b in &age {
            if a.size() > b.size() {
                continue;
            }
            let maps = embeddings(a.structure(), b.structure()).unwrap();
            if maps.is_empty() {
                continue;
            }
            for bstar in labeled_expansions_of(b) {
                let positions = bstar.positions();
                for f in &maps {
                    let mut points: Vec<usize> = (0..a.size()).collect();
                    points.sort_by_key(|&p| positions[f.apply(p)]);
                    let labels: Vec<usize> =
                        (0..a.size()).map(|p| bstar.labels()[f.apply(p)]).collect();
                    let astar = LabeledExpansion::new(2, points, labels).unwrap();
                    assert_eq!(
                        project_expansion(&astar).structure(),
                        a.structure(),
                        "pulled-back expansion must project onto the source"
                    );
                }
            }
        }
    }
}

#[test]
fn reversal_enumerates_every_labeled_expansion() {
    // The reversal outputs over all cut cells and rotations are pairwise
    // distinct, project literally onto the realized structure, and exhaust
    // the labeled expansion count.
    let mut rng = StdRng::seed_from_u64(2024);
    let mut configs = vec![cycle_config(2, 2), cycle_config(3, 1)];
    for n in [2usize, 3] {
        for size in 1..=4usize {
            configs.push(AngleConfig::random(n, size, &mut rng));
        }
    }
    for config in configs {
        let realized = realize(&config);
        let mut seen = BTreeSet::new();
        for cut in cut_midpoints(&config) {
            for rotation in 1..=config.n() {
                let x = reversal(&config, &cut, rotation).unwrap();
                assert_eq!(project_expansion(&x), realized);
                seen.insert(x);
            }
        }
        assert_eq!(seen.len(), config.n() * config.len());
        assert_eq!(
            count_labeled_expansions(&realized).unwrap() as usize,
            seen.len()
        );
    }
}

#[test]
fn quadrant_partitions_number_the_points() {
    let mut rng = StdRng::seed_from_u64(99);
    for n in [2usize, 3] {
        for size in 1..=5usize {
            let config = AngleConfig::random(n, size, &mut rng);
            let mut labelings = BTreeSet::new();
            for cut in cut_midpoints(&config) {
                let x = reversal(&config, &cut, 1).unwrap();
                labelings.insert(x.labels().to_vec());
            }
            assert_eq!(labelings.len(), size, "n={n} size={size}");
        }
    }
}

#[test]
fn cycle_expansions_satisfy_the_homogeneous_condition_for_the_cycle() {
    // Every expansion word of the 3-cycle embeds into every expansion word
    // of the 5-point cycle structure.
    let a = SnStructure::tournament(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
    let b = cycle_structure(2, 2);
    let a_words = expansion_words(&a).unwrap();
    let b_words = expansion_words(&b).unwrap();
    assert_eq!(a_words.len(), 2);
    assert_eq!(b_words.len(), 2);
    for x in &a_words {
        for y in &b_words {
            assert!(qn_embeds(x, y).unwrap());
        }
    }
}

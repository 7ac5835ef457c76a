//! Tangent numbers, small and big Ramsey degree formulas, upper-bound
//! composition, and the census that audits the expansion-count identity.
//!
//! All census arithmetic is exact: rationals for the automorphism sums, big
//! integers for tangent numbers and big degrees. The audit deliberately
//! reports two readings side by side — the stated identity
//! `(N/(n-1)!)·Σ 1/|Aut| = n^N` and the labeled identity
//! `Σ e(A) = N!·n^N` — and records whether each holds, without judgment.

use std::collections::BTreeSet;

use itertools::Itertools;
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::circular::{enumerate_age, SnStructure};
use crate::expansion::{count_labeled_expansions, expansion_count_m, project_expansion, LabeledExpansion};
use crate::partitioned::enumerate_qn;
use crate::structure::{automorphism_group_order, canonical_form};
use crate::{Error, Rational, Result};

/// Tangent numbers grow fast; this cap keeps `2k-1` rows of the triangle.
pub const TANGENT_CAP: usize = 12;

/// The `(2k-1)`-th derivative of `tan` at `0`, computed by the boustrophedon
/// (zigzag) recurrence over exact integers.
pub fn tangent_number(k: usize) -> Result<BigUint> {
    if k == 0 {
        return Err(Error::InvalidArgument("tangent numbers start at k = 1".into()));
    }
    if k > TANGENT_CAP {
        return Err(Error::CapExceeded {
            what: "tangent number",
            size: k,
            cap: TANGENT_CAP,
        });
    }
    // Seidel triangle: row[j] = E(n, j) with E(0,0) = 1, E(n,0) = 0 and
    // E(n,j) = E(n,j-1) + E(n-1,n-j); the zigzag number is E(n,n).
    let rows = 2 * k - 1;
    let mut prev: Vec<BigUint> = vec![BigUint::one()];
    for n in 1..=rows {
        let mut row: Vec<BigUint> = Vec::with_capacity(n + 1);
        row.push(BigUint::zero());
        for j in 1..=n {
            let value = &row[j - 1] + &prev[n - j];
            row.push(value);
        }
        prev = row;
    }
    Ok(prev[rows].clone())
}

/// The small Ramsey degree formula `n·|A| / |Aut(A)|`. Non-divisibility is an
/// error: it would falsify the formula for this input.
pub fn small_degree(a: &SnStructure) -> Result<u64> {
    let numerator = (a.n() * a.size()) as u64;
    let aut = automorphism_group_order(a.structure())?;
    if !numerator.is_multiple_of(aut) {
        return Err(Error::NonDivisibleCount {
            count: numerator,
            aut,
        });
    }
    Ok(numerator / aut)
}

/// The big Ramsey degree formula: the small degree times the tangent number
/// of the structure's size.
pub fn big_degree(a: &SnStructure) -> Result<BigUint> {
    let small = small_degree(a)?;
    Ok(BigUint::from(small) * tangent_number(a.size())?)
}

/// Compose per-expansion degrees into the upper bound: their sum.
pub fn compose_upper_bound(parts: &[u64]) -> u64 {
    assert!(!parts.is_empty(), "need at least one expansion degree");
    parts.iter().sum()
}

/// Per-structure record comparing formula and oracle values side by side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeReport {
    pub canonical: String,
    pub n: usize,
    pub size: usize,
    pub aut_order: u64,
    /// `n·|A| / |Aut(A)|`, the closed formula.
    pub m_formula: u64,
    /// Brute-force labeled expansion count divided by `|Aut(A)|`.
    pub m_oracle: u64,
    pub t_small: u64,
    pub t_big: BigUint,
}

impl DegreeReport {
    /// Formula and oracle agree.
    pub fn consistent(&self) -> bool {
        self.m_formula == self.m_oracle
    }

    pub fn to_json(&self) -> Value {
        json!({
            "canonical": self.canonical,
            "n": self.n,
            "size": self.size,
            "aut_order": self.aut_order,
            "m_formula": self.m_formula,
            "m_oracle": self.m_oracle,
            "t_small": self.t_small,
            "t_big": self.t_big.to_string(),
        })
    }
}

/// Compute the full degree record of one structure.
pub fn degree_report(a: &SnStructure) -> Result<DegreeReport> {
    let canonical = canonical_form(a.structure())?.to_string();
    let aut_order = automorphism_group_order(a.structure())?;
    let m_formula = small_degree(a)?;
    let m_oracle = expansion_count_m(a)?;
    let t_small = m_formula;
    let t_big = big_degree(a)?;
    Ok(DegreeReport {
        canonical,
        n: a.n(),
        size: a.size(),
        aut_order,
        m_formula,
        m_oracle,
        t_small,
        t_big,
    })
}

/// Degree reports for every iso class of the given size, sorted by canonical
/// form.
pub fn degree_table(n: usize, size: usize) -> Result<Vec<DegreeReport>> {
    enumerate_age(n, size)?.iter().map(degree_report).collect()
}

/// The audited census for one `(n, N)` cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusReport {
    pub n: usize,
    pub size: usize,
    pub iso_class_count: usize,
    /// `Σ 1/|Aut(A)|` over iso classes of this size.
    pub sum_inv_aut: Rational,
    /// `(N / (n-1)!) · sum_inv_aut`, the stated identity's left side.
    pub stated_lhs: Rational,
    /// `n^N`, the stated identity's right side.
    pub stated_rhs: BigUint,
    pub identity_holds: bool,
    /// `Σ count_labeled_expansions(A)` over distinct labeled age members.
    pub labeled_expansion_total: u64,
    /// `N!·n^N`.
    pub expected_labeled_total: u64,
    pub labeled_total_matches: bool,
}

impl CensusReport {
    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "size": self.size,
            "iso_class_count": self.iso_class_count,
            "sum_inv_aut": self.sum_inv_aut.to_string(),
            "stated_lhs": self.stated_lhs.to_string(),
            "stated_rhs": self.stated_rhs.to_string(),
            "identity_holds": self.identity_holds,
            "labeled_expansion_total": self.labeled_expansion_total,
            "expected_labeled_total": self.expected_labeled_total,
            "labeled_total_matches": self.labeled_total_matches,
        })
    }
}

fn factorial(k: usize) -> BigUint {
    (1..=k).fold(BigUint::one(), |acc, i| acc * BigUint::from(i))
}

/// Enumerate size-`size` iso classes, sum `1/|Aut|`, evaluate the stated
/// identity against `n^size`, and independently recount every labeled age
/// member's expansions against `size!·n^size`. All quantities exact; the
/// report states equal/unequal for both checks.
pub fn verify_identity(n: usize, size: usize) -> Result<CensusReport> {
    let classes = enumerate_age(n, size)?;
    let mut sum_inv_aut = Rational::zero();
    for class in &classes {
        let aut = automorphism_group_order(class.structure())?;
        sum_inv_aut += Rational::new(BigInt::one(), BigInt::from(aut));
    }
    let lhs_factor = Rational::new(BigInt::from(size), BigInt::from(factorial(n - 1)));
    let stated_lhs = lhs_factor * &sum_inv_aut;
    let stated_rhs = BigUint::from(n).pow(size as u32);
    let identity_holds =
        stated_lhs == Rational::from_integer(BigInt::from(stated_rhs.clone()));

    // Every labeled age member on the fixed universe, found by projecting
    // every order/label assignment; each one's expansion count is then
    // recomputed by its own exhaustive search.
    let label_vectors: Vec<Vec<usize>> = enumerate_qn(n, size)?
        .into_iter()
        .map(|w| w.word().to_vec())
        .collect();
    let mut labeled_members = BTreeSet::new();
    for order in (0..size).permutations(size) {
        for labels in &label_vectors {
            let x = LabeledExpansion::new(n, order.clone(), labels.clone())
                .expect("enumerated candidates are valid");
            labeled_members.insert(project_expansion(&x));
        }
    }
    let mut labeled_expansion_total = 0u64;
    for member in labeled_members {
        labeled_expansion_total += count_labeled_expansions(&member)?;
    }
    let expected_labeled_total =
        factorial(size) * BigUint::from(n).pow(size as u32);
    let expected_labeled_total = u64::try_from(expected_labeled_total)
        .map_err(|_| Error::InvalidArgument("census size overflows u64".into()))?;

    Ok(CensusReport {
        n,
        size,
        iso_class_count: classes.len(),
        sum_inv_aut,
        stated_lhs,
        stated_rhs,
        identity_holds,
        labeled_expansion_total,
        expected_labeled_total,
        labeled_total_matches: labeled_expansion_total == expected_labeled_total,
    })
}

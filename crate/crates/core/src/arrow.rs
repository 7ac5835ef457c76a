//! Desk-scale exhaustive verification of arrow relations and of the
//! supporting-expansion lower-bound coloring.
//!
//! `holds_arrow` decides whether every `k`-coloring of the copies of `A` in
//! `C` admits a copy of `B` whose copies of `A` receive at most `t` colors.
//! The coloring space is pruned by symmetry: the first copy's color is pinned
//! to 0 and colorings are enumerated up to color permutation (restricted
//! growth sequences), which is sound because the verdict predicate only
//! counts distinct colors. Budgets are explicit and produce a third verdict
//! rather than a guess.

use std::collections::BTreeSet;

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::circular::SnStructure;
use crate::expansion::{expansion_coloring, LabeledExpansion};
use crate::structure::{copies, FinStructure};
use crate::{Error, Result};

/// Hard cap on the number of copies the coloring space is built over.
pub const COPIES_CAP: usize = 20;

/// How many (coloring, good copy) pairs a holding certificate retains for
/// audit sampling.
const SAMPLE_CAP: usize = 8;

/// An arrow-relation query `C → (B)^A_{k,t}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArrowInstance {
    c: FinStructure,
    b: FinStructure,
    a: FinStructure,
    k: usize,
    t: usize,
}

impl ArrowInstance {
    pub fn new(
        c: FinStructure,
        b: FinStructure,
        a: FinStructure,
        k: usize,
        t: usize,
    ) -> Result<Self> {
        if a.signature() != b.signature() || b.signature() != c.signature() {
            return Err(Error::SignatureMismatch);
        }
        if !(a.size() <= b.size() && b.size() <= c.size()) {
            return Err(Error::InvalidArgument(
                "arrow instance needs |A| ≤ |B| ≤ |C|".into(),
            ));
        }
        if k == 0 || t == 0 {
            return Err(Error::InvalidArgument("need k ≥ 1 and t ≥ 1".into()));
        }
        Ok(ArrowInstance { c, b, a, k, t })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn t(&self) -> usize {
        self.t
    }

    /// Content hash identifying the instance in certificates.
    pub fn hash(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update(format!(
            "C:{}|B:{}|A:{}|k={}|t={}",
            self.c, self.b, self.a, self.k, self.t
        ));
        let digest = hasher.finalize();
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArrowVerdict {
    Holds,
    Fails,
    BudgetExceeded,
}

impl ArrowVerdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            ArrowVerdict::Holds => "holds",
            ArrowVerdict::Fails => "fails",
            ArrowVerdict::BudgetExceeded => "budget-exceeded",
        }
    }
}

/// Outcome of an arrow search, re-checkable from its own fields.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArrowCertificate {
    pub instance_hash: String,
    pub verdict: ArrowVerdict,
    /// Copies of `A` in `C`, sorted; coloring arrays index into this list.
    pub copies: Vec<BTreeSet<usize>>,
    /// Copies of `B` in `C`, sorted.
    pub b_copies: Vec<BTreeSet<usize>>,
    /// For a failing verdict: a coloring under which every copy of `B` sees
    /// more than `t` colors.
    pub bad_coloring: Option<Vec<usize>>,
    /// For a holding verdict: sampled (coloring, good copy index) pairs.
    pub good_samples: Vec<(Vec<usize>, usize)>,
    pub colorings_examined: u64,
}

impl ArrowCertificate {
    pub fn to_json(&self) -> Value {
        json!({
            "instance_hash": self.instance_hash,
            "verdict": self.verdict.as_str(),
            "copies": self.copies.iter().map(|s| s.iter().collect::<Vec<_>>()).collect::<Vec<_>>(),
            "b_copies": self.b_copies.iter().map(|s| s.iter().collect::<Vec<_>>()).collect::<Vec<_>>(),
            "bad_coloring": self.bad_coloring,
            "good_samples": self.good_samples.iter().map(|(coloring, copy)| {
                json!({"coloring": coloring, "good_copy": copy})
            }).collect::<Vec<_>>(),
            "colorings_examined": self.colorings_examined,
        })
    }
}

struct ColoringSearch<'a> {
    /// Per copy of `B`: which copies of `A` (by index) it contains.
    containment: &'a [Vec<usize>],
    copy_count: usize,
    k: usize,
    t: usize,
    budget: u64,
    examined: u64,
    exceeded: bool,
    coloring: Vec<usize>,
    bad: Option<Vec<usize>>,
    samples: Vec<(Vec<usize>, usize)>,
}

impl ColoringSearch<'_> {
    fn run(&mut self, pos: usize, max_used: usize) {
        if self.bad.is_some() || self.exceeded {
            return;
        }
        if pos == self.copy_count {
            if self.examined == self.budget {
                self.exceeded = true;
                return;
            }
            self.examined += 1;
            match self.good_copy() {
                Some(index) => {
                    if self.samples.len() < SAMPLE_CAP {
                        self.samples.push((self.coloring.clone(), index));
                    }
                }
                None => self.bad = Some(self.coloring.clone()),
            }
            return;
        }
        // Restricted growth: a fresh color only once all smaller ones appear.
        let limit = (max_used + 1).min(self.k - 1);
        for color in 0..=limit {
            self.coloring[pos] = color;
            self.run(pos + 1, max_used.max(color));
            if self.bad.is_some() || self.exceeded {
                return;
            }
        }
    }

    fn good_copy(&self) -> Option<usize> {
        self.containment.iter().position(|inside| {
            let mut seen = [false; COPIES_CAP];
            let mut distinct = 0;
            for &i in inside {
                if !seen[self.coloring[i]] {
                    seen[self.coloring[i]] = true;
                    distinct += 1;
                }
            }
            distinct <= self.t
        })
    }
}

/// Decide the arrow relation by exhausting the (symmetry-reduced) coloring
/// space, stopping at the first bad coloring or at the budget.
pub fn holds_arrow(inst: &ArrowInstance, budget: u64) -> Result<ArrowCertificate> {
    let a_copies = copies(&inst.a, &inst.c)?;
    let b_copies = copies(&inst.b, &inst.c)?;
    let instance_hash = inst.hash();

    if a_copies.len() > COPIES_CAP {
        return Ok(ArrowCertificate {
            instance_hash,
            verdict: ArrowVerdict::BudgetExceeded,
            copies: a_copies,
            b_copies,
            bad_coloring: None,
            good_samples: Vec::new(),
            colorings_examined: 0,
        });
    }
    if b_copies.is_empty() {
        // No copy of B can absorb any coloring: fails with the all-zero
        // coloring as witness.
        return Ok(ArrowCertificate {
            instance_hash,
            verdict: ArrowVerdict::Fails,
            bad_coloring: Some(vec![0; a_copies.len()]),
            copies: a_copies,
            b_copies,
            good_samples: Vec::new(),
            colorings_examined: 1,
        });
    }

    let containment: Vec<Vec<usize>> = b_copies
        .iter()
        .map(|b_set| {
            a_copies
                .iter()
                .enumerate()
                .filter(|(_, a_set)| a_set.is_subset(b_set))
                .map(|(i, _)| i)
                .collect()
        })
        .collect();

    let copy_count = a_copies.len();
    let mut search = ColoringSearch {
        containment: &containment,
        copy_count,
        k: inst.k,
        t: inst.t,
        budget,
        examined: 0,
        exceeded: false,
        coloring: vec![0; copy_count],
        bad: None,
        samples: Vec::new(),
    };
    if copy_count == 0 {
        // The empty coloring is absorbed by any copy of B.
        search.examined = 1;
        search.samples.push((Vec::new(), 0));
    } else {
        // First copy pinned to color 0.
        search.run(1, 0);
    }

    let verdict = if search.exceeded {
        ArrowVerdict::BudgetExceeded
    } else if search.bad.is_some() {
        ArrowVerdict::Fails
    } else {
        ArrowVerdict::Holds
    };
    Ok(ArrowCertificate {
        instance_hash,
        verdict,
        copies: a_copies,
        b_copies,
        bad_coloring: search.bad,
        good_samples: search.samples,
        colorings_examined: search.examined,
    })
}

/// Independent re-check of a bad-coloring witness: every copy of `B` must see
/// more than `t` distinct colors.
pub fn check_bad_coloring(inst: &ArrowInstance, coloring: &[usize]) -> Result<bool> {
    let a_copies = copies(&inst.a, &inst.c)?;
    if coloring.len() != a_copies.len() || coloring.iter().any(|&c| c >= inst.k) {
        return Err(Error::InvalidArgument(
            "coloring does not index the sorted copies with k colors".into(),
        ));
    }
    for b_set in copies(&inst.b, &inst.c)? {
        let distinct: BTreeSet<usize> = a_copies
            .iter()
            .zip(coloring)
            .filter(|(a_set, _)| a_set.is_subset(&b_set))
            .map(|(_, &color)| color)
            .collect();
        if distinct.len() <= inst.t {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The certified lower bound delivered by the supporting-expansion coloring:
/// the minimum, over copies of `b` in `c`, of how many distinct expansion
/// colors the copies of `a` inside receive.
pub fn verify_lower_bound(
    c: &SnStructure,
    cstar: &LabeledExpansion,
    a: &SnStructure,
    b: &SnStructure,
) -> Result<u64> {
    let coloring = expansion_coloring(c, cstar, a)?;
    let b_copies = copies(b.structure(), c.structure())?;
    if b_copies.is_empty() {
        return Err(Error::NoCopies(format!(
            "no copy of the {}-point structure in the {}-point target",
            b.size(),
            c.size()
        )));
    }
    let mut minimum = u64::MAX;
    for b_set in b_copies {
        let distinct: BTreeSet<usize> = coloring
            .iter()
            .filter(|(a_set, _)| a_set.is_subset(&b_set))
            .map(|(_, &color)| color)
            .collect();
        minimum = minimum.min(distinct.len() as u64);
    }
    Ok(minimum)
}

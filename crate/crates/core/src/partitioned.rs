//! Finite n-partitioned linear orders — the age of `Q_n`.
//!
//! A finite partitioned linear order is rigid and determined up to
//! isomorphism by the word of partition labels read along the order, so an
//! iso class is stored as exactly that word. Positions are 1-indexed and
//! classes run `1..=n` where congruences are involved, matching the
//! convention `x ≡ k + j (mod n)` used by [`homogeneous_target`].

use std::fmt;

use itertools::Itertools;

use crate::structure::Morphism;
use crate::{Error, Result};

/// Word enumeration refuses to materialize more than this many words.
pub const WORD_BUDGET: u128 = 1 << 20;

/// An iso class of finite `n`-partitioned linear orders: the label word.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QnStructure {
    n: usize,
    word: Vec<usize>,
}

impl QnStructure {
    pub fn new(n: usize, word: Vec<usize>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("partition count must be positive".into()));
        }
        if let Some(&bad) = word.iter().find(|&&l| l == 0 || l > n) {
            return Err(Error::InvalidArgument(format!(
                "label {bad} outside 1..={n}"
            )));
        }
        Ok(QnStructure { n, word })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn word(&self) -> &[usize] {
        &self.word
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    /// Parse `n=2 word=1,2,1` (empty word allowed: `word=`).
    pub fn parse(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split_whitespace().collect();
        if parts.len() != 2 {
            return Err(Error::Parse("expected `n=N word=l1,l2,...`".into()));
        }
        let n: usize = parts[0]
            .strip_prefix("n=")
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| Error::Parse(format!("bad field `{}`", parts[0])))?;
        let body = parts[1]
            .strip_prefix("word=")
            .ok_or_else(|| Error::Parse(format!("bad field `{}`", parts[1])))?;
        let word = if body.is_empty() {
            Vec::new()
        } else {
            body.split(',')
                .map(|tok| {
                    tok.parse()
                        .map_err(|_| Error::Parse(format!("bad label `{tok}`")))
                })
                .collect::<Result<Vec<usize>>>()?
        };
        QnStructure::new(n, word)
    }
}

impl fmt::Display for QnStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={} word={}", self.n, self.word.iter().join(","))
    }
}

/// Does `x` embed into `y`? Embeddings preserve the order and every
/// partition class, so this is exactly the subsequence test on words.
pub fn qn_embeds(x: &QnStructure, y: &QnStructure) -> Result<bool> {
    if x.n != y.n {
        return Err(Error::PartitionMismatch {
            got: x.n,
            expected: y.n,
        });
    }
    let mut remaining = x.word.iter();
    let mut next = remaining.next();
    for label in &y.word {
        match next {
            None => break,
            Some(want) if want == label => next = remaining.next(),
            Some(_) => {}
        }
    }
    Ok(next.is_none())
}

/// The leftmost subsequence witness for `qn_embeds`, as positions into `y`.
pub fn qn_embedding_witness(x: &QnStructure, y: &QnStructure) -> Result<Option<Morphism>> {
    if x.n != y.n {
        return Err(Error::PartitionMismatch {
            got: x.n,
            expected: y.n,
        });
    }
    let mut positions = Vec::with_capacity(x.len());
    let mut from = 0;
    for want in &x.word {
        match y.word[from..].iter().position(|l| l == want) {
            Some(offset) => {
                positions.push(from + offset);
                from += offset + 1;
            }
            None => return Ok(None),
        }
    }
    Ok(Some(Morphism::new(positions)))
}

/// All `n^len` words of length `len`, in lexicographic order.
pub fn enumerate_qn(n: usize, len: usize) -> Result<Vec<QnStructure>> {
    let total = (n as u128).pow(len as u32);
    if total > WORD_BUDGET {
        return Err(Error::BudgetExceeded {
            what: "word enumeration",
            needed: total,
            budget: WORD_BUDGET,
        });
    }
    let mut out = Vec::with_capacity(total as usize);
    let mut word = vec![1usize; len];
    loop {
        out.push(QnStructure {
            n,
            word: word.clone(),
        });
        let mut pos = len;
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            word[pos] += 1;
            if word[pos] <= n {
                break;
            }
            word[pos] = 1;
        }
    }
}

/// The `j`-th explicit expansion of the cycle structure with parameters
/// `(n, m)`: the word of length `nm+1` whose 1-indexed position `x` carries
/// the label `k ∈ {1..n}` solving `x ≡ k + j (mod n)`.
pub fn homogeneous_target(n: usize, m: usize, j: usize) -> Result<QnStructure> {
    if n == 0 || m == 0 {
        return Err(Error::InvalidArgument("need n ≥ 1 and m ≥ 1".into()));
    }
    if j == 0 || j > n {
        return Err(Error::InvalidArgument(format!("class shift j={j} outside 1..={n}")));
    }
    let len = n * m + 1;
    let word = (1..=len).map(|x| (x + 2 * n - 1 - j) % n + 1).collect();
    QnStructure::new(n, word)
}

/// The order- and label-preserving map sending the `a`-th element of `x`
/// (lying in class `b`) to the `a`-th member of class `b` inside
/// `homogeneous_target(n, m, j)`. `None` when some target class is too small
/// to receive `|x|` elements.
pub fn universal_embedding(
    x: &QnStructure,
    m: usize,
    j: usize,
) -> Result<Option<Morphism>> {
    let n = x.n;
    let target = homogeneous_target(n, m, j)?;
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
    for (pos, &label) in target.word.iter().enumerate() {
        members[label].push(pos);
    }
    if members[1..].iter().any(|class| class.len() < x.len()) {
        return Ok(None);
    }
    let map = x
        .word
        .iter()
        .enumerate()
        .map(|(a, &b)| members[b][a])
        .collect();
    Ok(Some(Morphism::new(map)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn word(n: usize, labels: &[usize]) -> QnStructure {
        QnStructure::new(n, labels.to_vec()).unwrap()
    }

    #[test]
    fn subsequence_embedding() {
        let empty = word(2, &[]);
        let target = word(2, &[1, 1, 2]);
        assert!(qn_embeds(&empty, &target).unwrap());
        assert!(qn_embeds(&word(2, &[1, 2]), &target).unwrap());
        assert!(!qn_embeds(&word(2, &[2, 1]), &target).unwrap());
        assert_eq!(
            qn_embeds(&word(3, &[1]), &target),
            Err(Error::PartitionMismatch { got: 3, expected: 2 })
        );
    }

    #[test]
    fn witness_matches_predicate() {
        let x = word(2, &[1, 2]);
        let y = word(2, &[1, 1, 2]);
        let f = qn_embedding_witness(&x, &y).unwrap().unwrap();
        assert_eq!(f.map(), &[0, 2]);
        assert!(qn_embedding_witness(&word(2, &[2, 1]), &y).unwrap().is_none());
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_qn(2, 1).unwrap().len(), 2);
        assert_eq!(enumerate_qn(2, 2).unwrap().len(), 4);
        assert_eq!(enumerate_qn(5, 0).unwrap().len(), 1);
        assert!(enumerate_qn(5, 0).unwrap()[0].is_empty());
        assert!(matches!(
            enumerate_qn(10, 12),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn enumeration_is_lexicographic() {
        let words: Vec<Vec<usize>> = enumerate_qn(2, 2)
            .unwrap()
            .into_iter()
            .map(|w| w.word().to_vec())
            .collect();
        assert_eq!(
            words,
            vec![vec![1, 1], vec![1, 2], vec![2, 1], vec![2, 2]]
        );
    }

    #[test]
    fn explicit_targets() {
        assert_eq!(homogeneous_target(2, 1, 1).unwrap().word(), &[2, 1, 2]);
        assert_eq!(homogeneous_target(2, 1, 2).unwrap().word(), &[1, 2, 1]);
        assert_eq!(homogeneous_target(3, 1, 3).unwrap().word(), &[1, 2, 3, 1]);
    }

    #[test]
    fn universal_embedding_small_cases() {
        // A single point lands on the first position of its class.
        let x = word(2, &[1]);
        let f = universal_embedding(&x, 2, 1).unwrap().unwrap();
        let target = homogeneous_target(2, 2, 1).unwrap();
        assert_eq!(target.word(), &[2, 1, 2, 1, 2]);
        assert_eq!(f.map(), &[1]);

        // First label-1 slot, then second label-2 slot; order preserved.
        let x = word(2, &[1, 2]);
        let f = universal_embedding(&x, 3, 1).unwrap().unwrap();
        let target = homogeneous_target(2, 3, 1).unwrap();
        assert_eq!(target.word(), &[2, 1, 2, 1, 2, 1, 2]);
        assert_eq!(f.map(), &[1, 2]);
        for pair in f.map().windows(2) {
            assert!(pair[0] < pair[1]);
        }
        for (a, &b) in x.word().iter().enumerate() {
            assert_eq!(target.word()[f.map()[a]], b);
        }
    }

    #[test]
    fn universal_embedding_guard() {
        let x = word(2, &[1, 1]);
        assert!(universal_embedding(&x, 1, 1).unwrap().is_none());
    }

    #[test]
    fn word_literal_round_trip() {
        let w = word(2, &[1, 2, 1]);
        assert_eq!(w.to_string(), "n=2 word=1,2,1");
        assert_eq!(QnStructure::parse("n=2 word=1,2,1").unwrap(), w);
        assert_eq!(QnStructure::parse("n=3 word=").unwrap(), word(3, &[]));
        assert!(QnStructure::parse("n=2 word=3").is_err());
        assert!(QnStructure::parse("word=1").is_err());
    }
}

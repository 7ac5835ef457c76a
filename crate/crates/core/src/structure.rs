//! Finite relational structures over an explicit signature, embeddings,
//! automorphism groups, and canonical forms.
//!
//! Structures live on the universe `{0..N-1}` and store each relation as a
//! sorted set of tuples. Equality of [`FinStructure`] is literal (same
//! labels), which is what labeled expansion counting needs; isomorphism is a
//! separate question answered by [`canonical_form`].

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use itertools::Itertools;

use crate::{Error, Result};

/// Canonicalization is an exhaustive minimum over all `N!` relabelings.
pub const CANON_CAP: usize = 8;

/// Embedding enumeration is a backtracking search into the target.
pub const EMBED_CAP: usize = 12;

/// Arities of the relation symbols, in order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Signature {
    arities: Vec<usize>,
}

impl Signature {
    pub fn new(arities: Vec<usize>) -> Result<Self> {
        if arities.is_empty() {
            return Err(Error::InvalidStructure("signature must be non-empty".into()));
        }
        if arities.contains(&0) {
            return Err(Error::InvalidStructure("relation arity must be at least 1".into()));
        }
        Ok(Signature { arities })
    }

    /// `count` binary relation symbols.
    pub fn binary(count: usize) -> Self {
        Signature::new(vec![2; count]).expect("binary signature is valid")
    }

    pub fn len(&self) -> usize {
        self.arities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arities.is_empty()
    }

    pub fn arity(&self, symbol: usize) -> usize {
        self.arities[symbol]
    }

    pub fn arities(&self) -> &[usize] {
        &self.arities
    }
}

/// A finite relational structure on the universe `{0..size-1}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FinStructure {
    signature: Signature,
    size: usize,
    relations: Vec<BTreeSet<Vec<usize>>>,
}

impl FinStructure {
    pub fn new(
        signature: Signature,
        size: usize,
        relations: Vec<Vec<Vec<usize>>>,
    ) -> Result<Self> {
        if relations.len() != signature.len() {
            return Err(Error::InvalidStructure(format!(
                "expected {} relation sets, got {}",
                signature.len(),
                relations.len()
            )));
        }
        let mut sets = Vec::with_capacity(relations.len());
        for (symbol, tuples) in relations.into_iter().enumerate() {
            let arity = signature.arity(symbol);
            let mut set = BTreeSet::new();
            for tuple in tuples {
                if tuple.len() != arity {
                    return Err(Error::InvalidStructure(format!(
                        "tuple {:?} has wrong arity for symbol {} (expected {})",
                        tuple, symbol, arity
                    )));
                }
                if tuple.iter().any(|&x| x >= size) {
                    return Err(Error::InvalidStructure(format!(
                        "tuple {:?} has an entry outside the universe of size {}",
                        tuple, size
                    )));
                }
                set.insert(tuple);
            }
            sets.push(set);
        }
        Ok(FinStructure {
            signature,
            size,
            relations: sets,
        })
    }

    /// Structure with no tuples in any relation.
    pub fn empty(signature: Signature, size: usize) -> Self {
        let relations = vec![BTreeSet::new(); signature.len()];
        FinStructure {
            signature,
            size,
            relations,
        }
    }

    /// A strict linear order `0 < 1 < ... < size-1` over a single binary symbol.
    pub fn linear_order(size: usize) -> Self {
        let mut tuples = Vec::new();
        for i in 0..size {
            for j in (i + 1)..size {
                tuples.push(vec![i, j]);
            }
        }
        FinStructure::new(Signature::binary(1), size, vec![tuples])
            .expect("linear order is a valid structure")
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn has(&self, symbol: usize, tuple: &[usize]) -> bool {
        self.relations[symbol].contains(tuple)
    }

    pub fn relation(&self, symbol: usize) -> &BTreeSet<Vec<usize>> {
        &self.relations[symbol]
    }

    pub fn insert(&mut self, symbol: usize, tuple: Vec<usize>) {
        debug_assert_eq!(tuple.len(), self.signature.arity(symbol));
        debug_assert!(tuple.iter().all(|&x| x < self.size));
        self.relations[symbol].insert(tuple);
    }

    /// Image of the structure under a permutation of its own universe
    /// (`perm[v]` is the new label of `v`).
    pub fn relabel(&self, perm: &[usize]) -> FinStructure {
        debug_assert_eq!(perm.len(), self.size);
        let relations = self
            .relations
            .iter()
            .map(|set| {
                set.iter()
                    .map(|t| t.iter().map(|&v| perm[v]).collect())
                    .collect()
            })
            .collect();
        FinStructure {
            signature: self.signature.clone(),
            size: self.size,
            relations,
        }
    }

    /// Substructure induced on `subset` (taken in ascending order), relabeled
    /// onto `{0..subset.len()-1}`.
    pub fn induced(&self, subset: &BTreeSet<usize>) -> FinStructure {
        let index: Vec<usize> = subset.iter().copied().collect();
        let position = |v: usize| index.iter().position(|&u| u == v);
        let relations = self
            .relations
            .iter()
            .map(|set| {
                set.iter()
                    .filter_map(|t| {
                        t.iter()
                            .map(|&v| position(v))
                            .collect::<Option<Vec<usize>>>()
                    })
                    .collect()
            })
            .collect();
        FinStructure {
            signature: self.signature.clone(),
            size: index.len(),
            relations,
        }
    }
}

/// A function between structure universes, stored as the image list.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Morphism {
    map: Vec<usize>,
}

impl Morphism {
    pub fn new(map: Vec<usize>) -> Self {
        Morphism { map }
    }

    pub fn identity(size: usize) -> Self {
        Morphism {
            map: (0..size).collect(),
        }
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn apply(&self, v: usize) -> usize {
        self.map[v]
    }

    pub fn image(&self) -> BTreeSet<usize> {
        self.map.iter().copied().collect()
    }

    /// Composite `then ∘ self` (apply `self` first).
    pub fn then(&self, then: &Morphism) -> Morphism {
        Morphism {
            map: self.map.iter().map(|&v| then.map[v]).collect(),
        }
    }

    fn is_injective(&self) -> bool {
        let mut seen = HashSet::with_capacity(self.map.len());
        self.map.iter().all(|v| seen.insert(v))
    }
}

/// Visit every `arity`-tuple over `{0..universe-1}` in lexicographic order.
fn for_each_tuple(universe: usize, arity: usize, mut f: impl FnMut(&[usize])) {
    let mut tuple = vec![0usize; arity];
    if universe == 0 {
        return;
    }
    loop {
        f(&tuple);
        let mut pos = arity;
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            tuple[pos] += 1;
            if tuple[pos] < universe {
                break;
            }
            tuple[pos] = 0;
        }
    }
}

/// Does `f` embed `a` into `b`? True exactly when `f` is injective and every
/// relation is both preserved and reflected along it.
pub fn is_embedding(f: &Morphism, a: &FinStructure, b: &FinStructure) -> Result<bool> {
    if a.signature != b.signature {
        return Err(Error::SignatureMismatch);
    }
    if f.len() != a.size {
        return Err(Error::MorphismLength {
            got: f.len(),
            expected: a.size,
        });
    }
    if f.map.iter().any(|&v| v >= b.size) {
        return Err(Error::InvalidArgument(
            "morphism entry outside target universe".into(),
        ));
    }
    if !f.is_injective() {
        return Ok(false);
    }
    for symbol in 0..a.signature.len() {
        let arity = a.signature.arity(symbol);
        let mut ok = true;
        for_each_tuple(a.size, arity, |tuple| {
            if !ok {
                return;
            }
            let image: Vec<usize> = tuple.iter().map(|&v| f.apply(v)).collect();
            if a.has(symbol, tuple) != b.has(symbol, &image) {
                ok = false;
            }
        });
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

/// All embeddings of `a` into `b`, in lexicographic order of the image list.
pub fn embeddings(a: &FinStructure, b: &FinStructure) -> Result<Vec<Morphism>> {
    if a.signature != b.signature {
        return Err(Error::SignatureMismatch);
    }
    if b.size > EMBED_CAP {
        return Err(Error::CapExceeded {
            what: "embedding search",
            size: b.size,
            cap: EMBED_CAP,
        });
    }
    let mut found = Vec::new();
    let mut map: Vec<usize> = Vec::with_capacity(a.size);
    let mut used = vec![false; b.size];
    search_embeddings(a, b, &mut map, &mut used, &mut found);
    Ok(found)
}

fn search_embeddings(
    a: &FinStructure,
    b: &FinStructure,
    map: &mut Vec<usize>,
    used: &mut [bool],
    found: &mut Vec<Morphism>,
) {
    if map.len() == a.size {
        found.push(Morphism::new(map.clone()));
        return;
    }
    let v = map.len();
    for w in 0..b.size {
        if used[w] {
            continue;
        }
        map.push(w);
        if partial_consistent(a, b, map, v) {
            used[w] = true;
            search_embeddings(a, b, map, used, found);
            used[w] = false;
        }
        map.pop();
    }
}

/// Check the preserve/reflect biconditional over all tuples of assigned
/// vertices that mention the newest vertex `v`.
fn partial_consistent(a: &FinStructure, b: &FinStructure, map: &[usize], v: usize) -> bool {
    let assigned = map.len();
    for symbol in 0..a.signature.len() {
        let arity = a.signature.arity(symbol);
        let mut ok = true;
        for_each_tuple(assigned, arity, |tuple| {
            if !ok || !tuple.contains(&v) {
                return;
            }
            let image: Vec<usize> = tuple.iter().map(|&x| map[x]).collect();
            if a.has(symbol, tuple) != b.has(symbol, &image) {
                ok = false;
            }
        });
        if !ok {
            return false;
        }
    }
    true
}

/// `|Aut(a)| = |hom(a,a)|`; at least 1 (the identity).
pub fn automorphism_group_order(a: &FinStructure) -> Result<u64> {
    Ok(embeddings(a, a)?.len() as u64)
}

/// The set of images of embeddings of `a` into `b` — the copies of `a` in `b`.
pub fn copies(a: &FinStructure, b: &FinStructure) -> Result<Vec<BTreeSet<usize>>> {
    let images: BTreeSet<BTreeSet<usize>> = embeddings(a, b)?
        .into_iter()
        .map(|f| f.image())
        .collect();
    Ok(images.into_iter().collect())
}

/// Isomorphism-invariant complete encoding of a structure: the structure
/// literal of the minimum relabeling. Comparable with ordinary string order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm(String);

impl CanonicalForm {
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// The minimum relabeling of `a` over all permutations of its universe,
/// together with its encoding.
pub fn canonicalize(a: &FinStructure) -> Result<(FinStructure, CanonicalForm)> {
    if a.size > CANON_CAP {
        return Err(Error::CapExceeded {
            what: "canonicalization",
            size: a.size,
            cap: CANON_CAP,
        });
    }
    let mut best: Option<FinStructure> = None;
    for perm in (0..a.size).permutations(a.size) {
        let candidate = a.relabel(&perm);
        if best.as_ref().is_none_or(|b| candidate.relations < b.relations) {
            best = Some(candidate);
        }
    }
    let best = best.unwrap_or_else(|| a.clone());
    let form = CanonicalForm(best.to_string());
    Ok((best, form))
}

pub fn canonical_form(a: &FinStructure) -> Result<CanonicalForm> {
    Ok(canonicalize(a)?.1)
}

pub fn are_isomorphic(a: &FinStructure, b: &FinStructure) -> Result<bool> {
    if a.signature != b.signature {
        return Err(Error::SignatureMismatch);
    }
    if a.size != b.size {
        return Ok(false);
    }
    Ok(canonical_form(a)? == canonical_form(b)?)
}

impl fmt::Display for FinStructure {
    /// Structure literal: `sig=[2,2] n=3 R1={(0,1),(0,2)} R2={(1,2)}`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "sig=[{}]", self.signature.arities.iter().join(","))?;
        write!(f, " n={}", self.size)?;
        for (i, set) in self.relations.iter().enumerate() {
            let tuples = set
                .iter()
                .map(|t| format!("({})", t.iter().join(",")))
                .join(",");
            write!(f, " R{}={{{}}}", i + 1, tuples)?;
        }
        Ok(())
    }
}

impl FromStr for FinStructure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split_whitespace().collect();
        if parts.len() < 2 {
            return Err(Error::Parse("expected `sig=[..] n=N R1={..} ...`".into()));
        }
        let sig_body = parts[0]
            .strip_prefix("sig=[")
            .and_then(|rest| rest.strip_suffix(']'))
            .ok_or_else(|| Error::Parse(format!("bad signature field `{}`", parts[0])))?;
        let arities = parse_usize_list(sig_body)?;
        let signature = Signature::new(arities)?;
        let size: usize = parts[1]
            .strip_prefix("n=")
            .ok_or_else(|| Error::Parse(format!("bad size field `{}`", parts[1])))?
            .parse()
            .map_err(|_| Error::Parse(format!("bad size field `{}`", parts[1])))?;
        if parts.len() != 2 + signature.len() {
            return Err(Error::Parse(format!(
                "expected {} relation fields, got {}",
                signature.len(),
                parts.len() - 2
            )));
        }
        let mut relations = Vec::with_capacity(signature.len());
        for (i, field) in parts[2..].iter().enumerate() {
            let prefix = format!("R{}={{", i + 1);
            let body = field
                .strip_prefix(prefix.as_str())
                .and_then(|rest| rest.strip_suffix('}'))
                .ok_or_else(|| Error::Parse(format!("bad relation field `{field}`")))?;
            relations.push(parse_tuple_set(body)?);
        }
        FinStructure::new(signature, size, relations)
    }
}

fn parse_usize_list(s: &str) -> Result<Vec<usize>> {
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|tok| {
            tok.trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad number `{tok}`")))
        })
        .collect()
}

fn parse_tuple_set(body: &str) -> Result<Vec<Vec<usize>>> {
    let mut tuples = Vec::new();
    let mut rest = body;
    while !rest.is_empty() {
        let open = rest
            .strip_prefix('(')
            .ok_or_else(|| Error::Parse(format!("expected `(` in tuple set near `{rest}`")))?;
        let close = open
            .find(')')
            .ok_or_else(|| Error::Parse("unterminated tuple".into()))?;
        tuples.push(parse_usize_list(&open[..close])?);
        rest = &open[close + 1..];
        if let Some(after) = rest.strip_prefix(',') {
            rest = after;
        } else if !rest.is_empty() {
            return Err(Error::Parse(format!("unexpected `{rest}` in tuple set")));
        }
    }
    Ok(tuples)
}

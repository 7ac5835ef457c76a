//! Exact realization of finite circular structures from rational circle
//! points, the sector relations, cycle structures, the colored-tournament
//! view for even `n`, and isomorph-free age enumeration.
//!
//! Angles are exact rationals measured in turns (fractions of a full
//! revolution), so the sector test `(a − b) mod 1 ∈ (k/n, (k+1)/n)` is decided
//! exactly; a difference landing on a sector boundary is a genericity error,
//! never a rounding artifact.

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use rand::Rng;

use crate::expansion::project_word;
use crate::partitioned::{enumerate_qn, QnStructure};
use crate::structure::{canonicalize, FinStructure, Signature};
use crate::{mod_one, Error, Rational, Result};

/// Age enumeration and realizability search go through every partition word
/// and canonicalize each projection; capped at this universe size.
pub const AGE_CAP: usize = 6;

/// Largest denominator drawn when sampling random circle points.
pub const RANDOM_DENOMINATOR_CAP: u64 = 1000;

/// Exact rational points on the unit circle realizing a finite circular
/// structure: pairwise distinct and never separated by a multiple of `1/n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AngleConfig {
    n: usize,
    angles: Vec<Rational>,
}

impl AngleConfig {
    pub fn new(n: usize, angles: Vec<Rational>) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArgument(format!(
                "sector count n={n} must be at least 2"
            )));
        }
        for a in &angles {
            if a.is_negative() || *a >= Rational::from_integer(1.into()) {
                return Err(Error::InvalidArgument(format!(
                    "angle {a} outside [0, 1)"
                )));
            }
        }
        for (i, a) in angles.iter().enumerate() {
            for b in angles.iter().skip(i + 1) {
                check_generic(a, b, n)?;
            }
        }
        Ok(AngleConfig { n, angles })
    }

    /// Rejection-sample a valid configuration of `size` points: denominators
    /// up to [`RANDOM_DENOMINATOR_CAP`], points redrawn until generic
    /// against the ones already placed.
    pub fn random<R: Rng + ?Sized>(n: usize, size: usize, rng: &mut R) -> Self {
        assert!(n >= 2, "sector count must be at least 2");
        let mut angles: Vec<Rational> = Vec::with_capacity(size);
        while angles.len() < size {
            let q = rng.random_range(1..=RANDOM_DENOMINATOR_CAP) as i64;
            let p = rng.random_range(0..q);
            let candidate = Rational::new(p.into(), q.into());
            if angles.iter().all(|a| check_generic(a, &candidate, n).is_ok()) {
                angles.push(candidate);
            }
        }
        AngleConfig { n, angles }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.angles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.angles.is_empty()
    }

    pub fn angles(&self) -> &[Rational] {
        &self.angles
    }

    /// Parse `n=2 angles=1/8,3/8,6/8` (an empty configuration: `angles=`).
    pub fn parse(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split_whitespace().collect();
        if parts.len() != 2 {
            return Err(Error::Parse("expected `n=N angles=p/q,...`".into()));
        }
        let n: usize = parts[0]
            .strip_prefix("n=")
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| Error::Parse(format!("bad field `{}`", parts[0])))?;
        let body = parts[1]
            .strip_prefix("angles=")
            .ok_or_else(|| Error::Parse(format!("bad field `{}`", parts[1])))?;
        let angles = if body.is_empty() {
            Vec::new()
        } else {
            body.split(',').map(parse_rational).collect::<Result<_>>()?
        };
        AngleConfig::new(n, angles)
    }
}

impl fmt::Display for AngleConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "n={} angles={}",
            self.n,
            self.angles.iter().map(|a| a.to_string()).join(",")
        )
    }
}

pub(crate) fn parse_rational(tok: &str) -> Result<Rational> {
    let mut pieces = tok.splitn(2, '/');
    let numer: i64 = pieces
        .next()
        .and_then(|p| p.parse().ok())
        .ok_or_else(|| Error::Parse(format!("bad rational `{tok}`")))?;
    let denom: i64 = match pieces.next() {
        Some(d) => d
            .parse()
            .ok()
            .filter(|&d| d != 0)
            .ok_or_else(|| Error::Parse(format!("bad rational `{tok}`")))?,
        None => 1,
    };
    Ok(Rational::new(numer.into(), denom.into()))
}

fn check_generic(a: &Rational, b: &Rational, n: usize) -> Result<()> {
    let diff = mod_one(&(a - b));
    if (&diff * BigInt::from(n)).is_integer() {
        return Err(Error::Genericity {
            diff: diff.to_string(),
            n,
        });
    }
    Ok(())
}

/// The sector index of the ordered pair `(a, b)`: the unique `k` with
/// `(a − b) mod 1 ∈ (k/n, (k+1)/n)`.
pub fn sigma_index(a: &Rational, b: &Rational, n: usize) -> Result<usize> {
    let diff = mod_one(&(a - b));
    let scaled = &diff * BigInt::from(n);
    if scaled.is_integer() {
        return Err(Error::Genericity {
            diff: diff.to_string(),
            n,
        });
    }
    Ok(scaled
        .floor()
        .to_integer()
        .to_usize()
        .expect("sector index fits in usize"))
}

/// A finite circular structure: `n` binary sector relations such that every
/// ordered pair of distinct points satisfies exactly one of them, with
/// `σ_k(x,y) ⟺ σ_{n-1-k}(y,x)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SnStructure {
    inner: FinStructure,
}

impl SnStructure {
    pub fn new(inner: FinStructure) -> Result<Self> {
        let n = inner.signature().len();
        if n < 2 || inner.signature().arities().iter().any(|&a| a != 2) {
            return Err(Error::InvalidStructure(
                "circular structure needs n ≥ 2 binary sector relations".into(),
            ));
        }
        for x in 0..inner.size() {
            for y in 0..inner.size() {
                let holding: Vec<usize> = (0..n)
                    .filter(|&k| inner.has(k, &[x, y]))
                    .collect();
                if x == y {
                    if !holding.is_empty() {
                        return Err(Error::InvalidStructure(format!(
                            "sector relation σ_{} holds on the loop ({x},{x})",
                            holding[0]
                        )));
                    }
                    continue;
                }
                if holding.len() != 1 {
                    return Err(Error::InvalidStructure(format!(
                        "pair ({x},{y}) satisfies {} sector relations, expected exactly 1",
                        holding.len()
                    )));
                }
                let k = holding[0];
                if !inner.has(n - 1 - k, &[y, x]) {
                    return Err(Error::InvalidStructure(format!(
                        "σ_{k}({x},{y}) holds but σ_{}({y},{x}) does not",
                        n - 1 - k
                    )));
                }
            }
        }
        Ok(SnStructure { inner })
    }

    /// Build from one sector assignment per unordered pair; the reverse pair
    /// is filled in through the symmetry `σ_k(x,y) ⟺ σ_{n-1-k}(y,x)`.
    pub fn from_sector_pairs(
        n: usize,
        size: usize,
        pairs: &[(usize, usize, usize)],
    ) -> Result<Self> {
        let mut inner = FinStructure::empty(Signature::binary(n), size);
        for &(k, x, y) in pairs {
            if k >= n || x >= size || y >= size {
                return Err(Error::InvalidArgument(format!(
                    "sector pair ({k},{x},{y}) out of range"
                )));
            }
            inner.insert(k, vec![x, y]);
            inner.insert(n - 1 - k, vec![y, x]);
        }
        SnStructure::new(inner)
    }

    /// A single-sector-pair tournament (`n = 2`): `σ_0` holds on the given
    /// arcs, `σ_1` on their reverses.
    pub fn tournament(size: usize, arcs: &[(usize, usize)]) -> Result<Self> {
        let pairs: Vec<(usize, usize, usize)> =
            arcs.iter().map(|&(x, y)| (0, x, y)).collect();
        SnStructure::from_sector_pairs(2, size, &pairs)
    }

    pub fn n(&self) -> usize {
        self.inner.signature().len()
    }

    pub fn size(&self) -> usize {
        self.inner.size()
    }

    pub fn structure(&self) -> &FinStructure {
        &self.inner
    }

    pub fn into_structure(self) -> FinStructure {
        self.inner
    }

    /// The unique sector index of the ordered pair `(x, y)`, `x ≠ y`.
    pub fn sector(&self, x: usize, y: usize) -> usize {
        (0..self.n())
            .find(|&k| self.inner.has(k, &[x, y]))
            .expect("circular structure is total on distinct pairs")
    }
}

impl fmt::Display for SnStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.inner.fmt(f)
    }
}

/// Realize the circular structure of a configuration: `σ_k(i,j)` exactly when
/// `sigma_index(angles[i], angles[j], n) = k`.
pub fn realize(config: &AngleConfig) -> SnStructure {
    let n = config.n;
    let size = config.len();
    let mut inner = FinStructure::empty(Signature::binary(n), size);
    for i in 0..size {
        for j in 0..size {
            if i == j {
                continue;
            }
            let k = sigma_index(&config.angles[i], &config.angles[j], n)
                .expect("configuration invariant guarantees genericity");
            inner.insert(k, vec![i, j]);
        }
    }
    SnStructure::new(inner).expect("realized structure satisfies sector invariants")
}

/// The configuration of the `(n, m)` cycle structure: `nm+1` points at angles
/// `k/(nm+1)`. Genericity holds because `gcd(n, nm+1) = 1`.
pub fn cycle_config(n: usize, m: usize) -> AngleConfig {
    assert!(n >= 2 && m >= 1, "need n ≥ 2 and m ≥ 1");
    let den = (n * m + 1) as i64;
    let angles = (0..den).map(|k| Rational::new(k.into(), den.into())).collect();
    AngleConfig::new(n, angles).expect("cycle points are generic")
}

/// The cycle structure with parameters `(n, m)`, realized from [`cycle_config`].
pub fn cycle_structure(n: usize, m: usize) -> SnStructure {
    realize(&cycle_config(n, m))
}

/// An arc-colored tournament: `k` binary arc relations with exactly one arc,
/// in exactly one direction and color, per unordered pair of vertices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ColoredTournament {
    inner: FinStructure,
}

impl ColoredTournament {
    pub fn new(inner: FinStructure) -> Result<Self> {
        let colors = inner.signature().len();
        if inner.signature().arities().iter().any(|&a| a != 2) {
            return Err(Error::InvalidStructure(
                "colored tournament needs binary arc relations".into(),
            ));
        }
        for x in 0..inner.size() {
            for y in x..inner.size() {
                let arcs = (0..colors)
                    .flat_map(|c| [(c, x, y), (c, y, x)])
                    .filter(|&(c, a, b)| inner.has(c, &[a, b]))
                    .count();
                if x == y {
                    if arcs != 0 {
                        return Err(Error::InvalidStructure(format!(
                            "loop arc at vertex {x}"
                        )));
                    }
                } else if arcs != 1 {
                    return Err(Error::InvalidStructure(format!(
                        "pair ({x},{y}) carries {arcs} arcs, expected exactly 1"
                    )));
                }
            }
        }
        Ok(ColoredTournament { inner })
    }

    pub fn colors(&self) -> usize {
        self.inner.signature().len()
    }

    pub fn size(&self) -> usize {
        self.inner.size()
    }

    pub fn structure(&self) -> &FinStructure {
        &self.inner
    }
}

impl fmt::Display for ColoredTournament {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.inner.fmt(f)
    }
}

/// For even `n`, view a circular structure as a tournament whose arcs carry
/// `n/2` colors: `x →_j y` exactly when `σ_j(x,y)` for `j < n/2`.
pub fn to_colored_tournament(a: &SnStructure) -> Result<ColoredTournament> {
    let n = a.n();
    if !n.is_multiple_of(2) {
        return Err(Error::OddSectorCount { n });
    }
    let colors = n / 2;
    let mut inner = FinStructure::empty(Signature::binary(colors), a.size());
    for x in 0..a.size() {
        for y in 0..a.size() {
            if x == y {
                continue;
            }
            let k = a.sector(x, y);
            if k < colors {
                inner.insert(k, vec![x, y]);
            }
        }
    }
    ColoredTournament::new(inner)
}

/// Some partition word whose projection realizes `t`, if one exists; decided
/// by exhaustive search over all words of the right length.
pub fn realizing_word(t: &ColoredTournament, n: usize) -> Result<Option<QnStructure>> {
    if !n.is_multiple_of(2) {
        return Err(Error::OddSectorCount { n });
    }
    if t.colors() != n / 2 {
        return Err(Error::InvalidArgument(format!(
            "tournament has {} colors, expected n/2 = {}",
            t.colors(),
            n / 2
        )));
    }
    let size = t.size();
    if size > AGE_CAP {
        return Err(Error::CapExceeded {
            what: "realizability search",
            size,
            cap: AGE_CAP,
        });
    }
    let target = canonicalize(t.structure())?.1;
    for word in enumerate_qn(n, size)? {
        let projected = to_colored_tournament(&project_word(&word))?;
        if canonicalize(projected.structure())?.1 == target {
            return Ok(Some(word));
        }
    }
    Ok(None)
}

/// Is `t` the colored-tournament view of some finite circular structure?
pub fn is_realizable(t: &ColoredTournament, n: usize) -> Result<bool> {
    Ok(realizing_word(t, n)?.is_some())
}

/// Isomorph-free list of the size-`size` members of the age: project every
/// partition word, deduplicate by canonical form, return the canonical
/// representatives sorted by their forms.
pub fn enumerate_age(n: usize, size: usize) -> Result<Vec<SnStructure>> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "sector count n={n} must be at least 2"
        )));
    }
    if size > AGE_CAP {
        return Err(Error::CapExceeded {
            what: "age enumeration",
            size,
            cap: AGE_CAP,
        });
    }
    let mut seen = BTreeMap::new();
    for word in enumerate_qn(n, size)? {
        let projected = project_word(&word);
        let (canon, form) = canonicalize(projected.structure())?;
        seen.entry(form).or_insert(canon);
    }
    seen.into_values()
        .map(SnStructure::new)
        .collect()
}

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use super::residue::ResidueSet;
use super::LatticeError;

/// 2-adic valuation of a positive integer.
pub fn nu2(x: u64) -> u64 {
    debug_assert!(x > 0);
    u64::from(x.trailing_zeros())
}

/// Cardinality of a support.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Cardinality {
    Infinite,
    Finite(usize),
}

impl fmt::Display for Cardinality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Infinite => f.write_str("infinite"),
            Self::Finite(n) => write!(f, "finite({n})"),
        }
    }
}

/// A diagonal projection on `ℓ²(ℕ₊)`, given by its support
/// `{x ≥ 1 : ν₂(x) ∈ vals} ∪ extra ∖ minus`.
///
/// Kept canonical, so `==` is equality of supports.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ValuationProjection {
    vals: ResidueSet,
    extra: BTreeSet<u64>,
    minus: BTreeSet<u64>,
}

impl ValuationProjection {
    pub fn new(vals: ResidueSet, extra: BTreeSet<u64>, minus: BTreeSet<u64>) -> Result<Self, LatticeError> {
        if extra.contains(&0) || minus.contains(&0) {
            return Err(LatticeError::Invalid("basis indices start at 1".into()));
        }
        if let Some(x) = extra.iter().find(|&&x| vals.contains(nu2(x))) {
            return Err(LatticeError::Invalid(format!("extra index {x} already has an allowed valuation")));
        }
        if let Some(x) = minus.iter().find(|&&x| !vals.contains(nu2(x))) {
            return Err(LatticeError::Invalid(format!("removed index {x} does not have an allowed valuation")));
        }
        Ok(Self { vals, extra, minus })
    }

    /// Support `{x : ν₂(x) ∈ vals}`.
    pub fn from_valuations(vals: ResidueSet) -> Self {
        Self { vals, extra: BTreeSet::new(), minus: BTreeSet::new() }
    }

    pub fn zero() -> Self {
        Self::from_valuations(ResidueSet::empty())
    }

    pub fn identity() -> Self {
        Self::from_valuations(ResidueSet::full())
    }

    /// `{x : ν₂(x) = n}`.
    pub fn valuation_class(n: u64) -> Self {
        Self::from_valuations(ResidueSet::finite([n]))
    }

    /// `{x : ν₂(x) mod m ∈ residues}`.
    pub fn residue_classes(modulus: u64, residues: impl IntoIterator<Item = u64>) -> Result<Self, LatticeError> {
        Ok(Self::from_valuations(ResidueSet::classes(modulus, residues)?))
    }

    /// `{x : ν₂(x) < k}`.
    pub fn below(k: u64) -> Self {
        Self::from_valuations(ResidueSet::finite(0..k))
    }

    /// Projection onto finitely many basis vectors.
    pub fn finite(indices: impl IntoIterator<Item = u64>) -> Result<Self, LatticeError> {
        Self::new(ResidueSet::empty(), indices.into_iter().collect(), BTreeSet::new())
    }

    pub fn vals(&self) -> &ResidueSet {
        &self.vals
    }

    pub fn extra(&self) -> &BTreeSet<u64> {
        &self.extra
    }

    pub fn minus(&self) -> &BTreeSet<u64> {
        &self.minus
    }

    pub fn contains(&self, x: u64) -> bool {
        x > 0 && if self.vals.contains(nu2(x)) { !self.minus.contains(&x) } else { self.extra.contains(&x) }
    }

    pub fn is_zero(&self) -> bool {
        self.vals.is_empty() && self.extra.is_empty()
    }

    pub fn card(&self) -> Cardinality {
        if self.vals.is_empty() {
            Cardinality::Finite(self.extra.len())
        } else {
            Cardinality::Infinite
        }
    }

    /// `self ∘ other` for the pointwise boolean operation `op`.
    pub fn combine(&self, other: &Self, op: impl Fn(bool, bool) -> bool + Copy) -> Self {
        let vals = self.vals.combine(&other.vals, op);
        let candidates: BTreeSet<u64> =
            [&self.extra, &self.minus, &other.extra, &other.minus].into_iter().flatten().copied().collect();
        let mut extra = BTreeSet::new();
        let mut minus = BTreeSet::new();
        for x in candidates {
            let actual = op(self.contains(x), other.contains(x));
            let periodic = vals.contains(nu2(x));
            if actual && !periodic {
                extra.insert(x);
            } else if !actual && periodic {
                minus.insert(x);
            }
        }
        Self { vals, extra, minus }
    }

    pub fn meet(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a && b)
    }

    pub fn join(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a || b)
    }

    /// `self ≤ other`: support containment.
    pub fn leq(&self, other: &Self) -> bool {
        self.combine(other, |a, b| a && !b).is_zero()
    }

    pub fn is_orthogonal(&self, other: &Self) -> bool {
        self.meet(other).is_zero()
    }

    /// `self + other` for orthogonal projections.
    pub fn orth_sum(&self, other: &Self) -> Result<Self, LatticeError> {
        let overlap = self.meet(other);
        if !overlap.is_zero() {
            return Err(LatticeError::NotOrthogonal { overlap: overlap.to_string() });
        }
        Ok(self.join(other))
    }

    /// `1 − self`.
    pub fn complement(&self) -> Self {
        Self { vals: self.vals.complement(), extra: self.minus.clone(), minus: self.extra.clone() }
    }

    /// Murray–von Neumann equivalence of diagonal projections: equal cardinality.
    pub fn mv_equiv(&self, other: &Self) -> bool {
        self.card() == other.card()
    }

    /// The first `count` support elements, scanning `1, 2, …` up to `limit`.
    pub fn support_prefix(&self, count: usize, limit: u64) -> Vec<u64> {
        (1..=limit).filter(|&x| self.contains(x)).take(count).collect()
    }
}

fn write_set(f: &mut fmt::Formatter<'_>, s: &BTreeSet<u64>) -> fmt::Result {
    let parts: Vec<String> = s.iter().map(u64::to_string).collect();
    write!(f, "{{{}}}", parts.join(","))
}

/// `vals mod <m> {r,...} +{...} -{...}`, followed by ` idx +{...} -{...}`
/// when basis-index corrections are present.
impl fmt::Display for ValuationProjection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "vals {}", self.vals)?;
        if !self.extra.is_empty() || !self.minus.is_empty() {
            f.write_str(" idx +")?;
            write_set(f, &self.extra)?;
            f.write_str(" -")?;
            write_set(f, &self.minus)?;
        }
        Ok(())
    }
}

fn parse_set(tok: Option<&str>, prefix: &str) -> Result<BTreeSet<u64>, LatticeError> {
    let tok = tok.ok_or_else(|| LatticeError::Parse("unexpected end of input".into()))?;
    let inner = tok
        .strip_prefix(prefix)
        .and_then(|t| t.strip_prefix('{'))
        .and_then(|t| t.strip_suffix('}'))
        .ok_or_else(|| LatticeError::Parse(format!("expected `{prefix}{{...}}`, found `{tok}`")))?;
    inner
        .split(',')
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(|_| LatticeError::Parse(format!("`{s}` is not a natural number"))))
        .collect()
}

impl FromStr for ValuationProjection {
    type Err = LatticeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        // drop whitespace inside braces so sets tokenize as one word
        let mut compact = String::with_capacity(s.len());
        let mut depth = 0usize;
        for ch in s.chars() {
            match ch {
                '{' => depth += 1,
                '}' => depth = depth.saturating_sub(1),
                c if c.is_whitespace() && depth > 0 => continue,
                _ => {}
            }
            compact.push(ch);
        }
        let mut toks = compact.split_whitespace();
        let expect = |tok: Option<&str>, word: &str| match tok {
            Some(t) if t == word => Ok(()),
            other => Err(LatticeError::Parse(format!("expected `{word}`, found `{}`", other.unwrap_or("<end>")))),
        };
        expect(toks.next(), "vals")?;
        expect(toks.next(), "mod")?;
        let m_tok = toks.next().unwrap_or("<end>");
        let modulus: u64 = m_tok.parse().map_err(|_| LatticeError::Parse(format!("bad modulus `{m_tok}`")))?;
        let residues = parse_set(toks.next(), "")?;
        let added = parse_set(toks.next(), "+")?;
        let removed = parse_set(toks.next(), "-")?;
        let vals = ResidueSet::new(modulus, residues, added, removed)?;
        let (extra, minus) = match toks.next() {
            None => (BTreeSet::new(), BTreeSet::new()),
            Some("idx") => (parse_set(toks.next(), "+")?, parse_set(toks.next(), "-")?),
            Some(t) => return Err(LatticeError::Parse(format!("unexpected `{t}`"))),
        };
        if let Some(t) = toks.next() {
            return Err(LatticeError::Parse(format!("trailing `{t}`")));
        }
        Self::new(vals, extra, minus)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(j: u64) -> ValuationProjection {
        ValuationProjection::residue_classes(3, [j]).unwrap()
    }

    #[test]
    fn card_examples() {
        assert_eq!(e(0).card(), Cardinality::Infinite);
        assert_eq!(ValuationProjection::finite([1, 5, 9]).unwrap().card(), Cardinality::Finite(3));
        assert_eq!(ValuationProjection::zero().card(), Cardinality::Finite(0));
    }

    #[test]
    fn leq_examples() {
        let q = e(0).orth_sum(&e(1)).unwrap();
        assert!(e(0).leq(&q));
        assert!(!e(0).leq(&e(1)));
        assert!(q.leq(&q));
    }

    #[test]
    fn orth_sum_examples() {
        assert_eq!(e(0).orth_sum(&e(1)).unwrap(), e(2).complement());
        let p01 = ValuationProjection::valuation_class(0).orth_sum(&ValuationProjection::valuation_class(1)).unwrap();
        assert_eq!(p01, ValuationProjection::from_valuations(ResidueSet::finite([0, 1])));
        assert!(matches!(e(0).orth_sum(&e(0)), Err(LatticeError::NotOrthogonal { .. })));
    }

    #[test]
    fn complement_examples() {
        assert_eq!(e(0).complement(), ValuationProjection::residue_classes(3, [1, 2]).unwrap());
        assert_eq!(ValuationProjection::identity().complement(), ValuationProjection::zero());
        let c = ValuationProjection::finite([2]).unwrap().complement();
        assert_eq!(c.vals(), &ResidueSet::full());
        assert_eq!(c.minus(), &BTreeSet::from([2]));
        assert!(c.extra().is_empty());
        assert_eq!(c.complement(), ValuationProjection::finite([2]).unwrap());
    }

    #[test]
    fn mv_equiv_examples() {
        assert!(e(0).mv_equiv(&e(1)));
        let two = ValuationProjection::finite([3, 4]).unwrap();
        assert!(two.mv_equiv(&ValuationProjection::finite([7, 100]).unwrap()));
        assert!(!two.mv_equiv(&e(0)));
    }

    #[test]
    fn serialization_round_trip() {
        assert_eq!(e(0).to_string(), "vals mod 3 {0} +{} -{}");
        let c = ValuationProjection::finite([2]).unwrap().complement();
        assert_eq!(c.to_string(), "vals mod 1 {0} +{} -{} idx +{} -{2}");
        assert_eq!(c.to_string().parse::<ValuationProjection>().unwrap(), c);
        let spaced: ValuationProjection = "vals mod 3 {0, 1} +{} -{}".parse().unwrap();
        assert_eq!(spaced, e(2).complement());
        assert!("vals mod 3 {0}".parse::<ValuationProjection>().is_err());
        assert!("vals mod 2 {0} +{} -{} idx +{4} -{}".parse::<ValuationProjection>().is_err());
    }

    #[test]
    fn membership() {
        assert!(e(0).contains(3));
        assert!(!e(0).contains(2));
        assert!(e(0).contains(8));
        assert!(!e(0).contains(0));
        assert_eq!(ValuationProjection::below(1).support_prefix(4, 100), vec![1, 3, 5, 7]);
    }
}

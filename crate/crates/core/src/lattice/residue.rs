use std::collections::BTreeSet;
use std::fmt;

use num_integer::Integer;

use super::LatticeError;

/// An eventually periodic subset of `ℕ = {0, 1, 2, …}`: the residue classes
/// `residues` modulo `modulus`, plus the finite set `added`, minus the finite
/// set `removed`.
///
/// Values are kept in canonical form (minimal modulus, exceptions that
/// actually differ from the periodic part), so `==` is set equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ResidueSet {
    modulus: u64,
    residues: BTreeSet<u64>,
    added: BTreeSet<u64>,
    removed: BTreeSet<u64>,
}

impl ResidueSet {
    pub fn new(
        modulus: u64,
        residues: BTreeSet<u64>,
        added: BTreeSet<u64>,
        removed: BTreeSet<u64>,
    ) -> Result<Self, LatticeError> {
        if modulus == 0 {
            return Err(LatticeError::Invalid("modulus must be positive".into()));
        }
        if let Some(r) = residues.iter().find(|&&r| r >= modulus) {
            return Err(LatticeError::Invalid(format!("residue {r} not below modulus {modulus}")));
        }
        let in_classes = |x: &u64| residues.contains(&(x % modulus));
        if let Some(x) = added.iter().find(|x| in_classes(x)) {
            return Err(LatticeError::Invalid(format!("added element {x} already lies in a residue class")));
        }
        if let Some(x) = removed.iter().find(|x| !in_classes(x)) {
            return Err(LatticeError::Invalid(format!("removed element {x} lies outside the residue classes")));
        }
        Ok(Self { modulus, residues, added, removed }.canonical())
    }

    pub fn empty() -> Self {
        Self { modulus: 1, residues: BTreeSet::new(), added: BTreeSet::new(), removed: BTreeSet::new() }
    }

    pub fn full() -> Self {
        Self { modulus: 1, residues: BTreeSet::from([0]), added: BTreeSet::new(), removed: BTreeSet::new() }
    }

    pub fn classes(modulus: u64, residues: impl IntoIterator<Item = u64>) -> Result<Self, LatticeError> {
        Self::new(modulus, residues.into_iter().collect(), BTreeSet::new(), BTreeSet::new())
    }

    pub fn finite(elements: impl IntoIterator<Item = u64>) -> Self {
        Self { added: elements.into_iter().collect(), ..Self::empty() }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn residues(&self) -> &BTreeSet<u64> {
        &self.residues
    }

    pub fn added(&self) -> &BTreeSet<u64> {
        &self.added
    }

    pub fn removed(&self) -> &BTreeSet<u64> {
        &self.removed
    }

    pub fn contains(&self, x: u64) -> bool {
        if self.residues.contains(&(x % self.modulus)) {
            !self.removed.contains(&x)
        } else {
            self.added.contains(&x)
        }
    }

    pub fn is_empty(&self) -> bool {
        self.residues.is_empty() && self.added.is_empty()
    }

    /// Infinite exactly when some residue class is present.
    pub fn is_infinite(&self) -> bool {
        !self.residues.is_empty()
    }

    /// Size of a finite set.
    pub fn finite_len(&self) -> Option<usize> {
        self.residues.is_empty().then_some(self.added.len())
    }

    pub fn complement(&self) -> Self {
        Self {
            modulus: self.modulus,
            residues: (0..self.modulus).filter(|r| !self.residues.contains(r)).collect(),
            added: self.removed.clone(),
            removed: self.added.clone(),
        }
    }

    /// The set `{x : op(x ∈ self, x ∈ other)}`, evaluated on residues modulo
    /// the lcm of the moduli and on the union of both exception sets.
    pub fn combine(&self, other: &Self, op: impl Fn(bool, bool) -> bool) -> Self {
        let modulus = self.modulus.lcm(&other.modulus);
        let residues: BTreeSet<u64> = (0..modulus)
            .filter(|&r| op(self.residues.contains(&(r % self.modulus)), other.residues.contains(&(r % other.modulus))))
            .collect();
        let candidates: BTreeSet<u64> =
            [&self.added, &self.removed, &other.added, &other.removed].into_iter().flatten().copied().collect();
        let mut added = BTreeSet::new();
        let mut removed = BTreeSet::new();
        for x in candidates {
            let actual = op(self.contains(x), other.contains(x));
            let periodic = residues.contains(&(x % modulus));
            if actual && !periodic {
                added.insert(x);
            } else if !actual && periodic {
                removed.insert(x);
            }
        }
        Self { modulus, residues, added, removed }.canonical()
    }

    pub fn union(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a || b)
    }

    pub fn intersection(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a && b)
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a && !b)
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.difference(other).is_empty()
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.intersection(other).is_empty()
    }

    /// Smallest element, if any.
    pub fn first(&self) -> Option<u64> {
        let periodic = (0..self.modulus)
            .filter(|r| self.residues.contains(r))
            .flat_map(|r| (0..=self.removed.len() as u64).map(move |k| r + k * self.modulus))
            .filter(|x| !self.removed.contains(x))
            .min();
        periodic.into_iter().chain(self.added.first().copied()).min()
    }

    fn canonical(mut self) -> Self {
        let m = self.modulus;
        let period = (1..=m)
            .filter(|d| m.is_multiple_of(*d))
            .find(|&d| (0..m).all(|r| self.residues.contains(&r) == self.residues.contains(&((r + d) % m))))
            .unwrap_or(m);
        if period != m {
            self.residues.retain(|&r| r < period);
            self.modulus = period;
        }
        self
    }
}

fn write_set(f: &mut fmt::Formatter<'_>, s: &BTreeSet<u64>) -> fmt::Result {
    let parts: Vec<String> = s.iter().map(u64::to_string).collect();
    write!(f, "{{{}}}", parts.join(","))
}

/// `mod <m> {r,...} +{...} -{...}`.
impl fmt::Display for ResidueSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "mod {} ", self.modulus)?;
        write_set(f, &self.residues)?;
        f.write_str(" +")?;
        write_set(f, &self.added)?;
        f.write_str(" -")?;
        write_set(f, &self.removed)
    }
}

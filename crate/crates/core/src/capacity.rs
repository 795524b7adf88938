//! Capacities on finite spaces and possibility distributions.
//!
//! A [`Capacity`] is a dense table over all `2^n` subsets. Upper
//! semicontinuity holds automatically on a finite discrete space, so only
//! normalization and monotonicity are validated.

use crate::error::{Error, Result};
use crate::space::{FiniteSpace, PointMap, SubsetMask};
use crate::unit::Scalar;

/// A normalized monotone set function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Capacity<S> {
    space: FiniteSpace,
    values: Vec<S>,
}

impl<S: Scalar> Capacity<S> {
    /// Validates and wraps a table indexed by subset mask.
    pub fn new(space: FiniteSpace, values: Vec<S>) -> Result<Self> {
        validate_table(&space, &values)?;
        Ok(Capacity { space, values })
    }

    /// Builds the table by evaluating `f` on every subset.
    pub fn from_fn(space: FiniteSpace, f: impl Fn(SubsetMask) -> S) -> Result<Self> {
        let values = space.subsets().map(f).collect();
        Capacity::new(space, values)
    }

    /// Point mass at `x`: 1 on subsets containing `x`, 0 elsewhere.
    pub fn dirac(space: FiniteSpace, x: usize) -> Self {
        let values = space
            .subsets()
            .map(|a| if a.contains(x) { S::one() } else { S::zero() })
            .collect();
        Capacity { space, values }
    }

    pub fn space(&self) -> &FiniteSpace {
        &self.space
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    #[inline]
    pub fn value(&self, subset: SubsetMask) -> S {
        self.values[subset.index()]
    }

    pub fn singleton_values(&self) -> Vec<S> {
        (0..self.space.len()).map(|i| self.value(SubsetMask::singleton(i))).collect()
    }

    /// Whether `nu(A)` is the maximum of its singleton values on every
    /// nonempty `A`. On a finite space this is the same as
    /// `nu(A u B) = max(nu(A), nu(B))` for all pairs.
    pub fn is_possibility(&self) -> bool {
        let singles = self.singleton_values();
        self.space.subsets().skip(1).all(|a| {
            let m = a.points().map(|i| singles[i]).max().unwrap_or(S::zero());
            self.value(a).approx_eq(m)
        })
    }

    /// Whether `nu(A n B) = min(nu(A), nu(B))` for all pairs of subsets.
    pub fn is_necessity(&self) -> bool {
        self.space.subsets().all(|a| {
            self.space.subsets().all(|b| {
                self.value(a.intersection(b)).approx_eq(self.value(a).min(self.value(b)))
            })
        })
    }

    /// The dual capacity `F -> 1 - nu(X \ F)`.
    pub fn dual(&self) -> Self {
        let n = self.space.len();
        let values = self
            .space
            .subsets()
            .map(|f| S::one() - self.value(f.complement(n)))
            .collect();
        Capacity { space: self.space.clone(), values }
    }

    /// Image capacity `A -> nu(f^-1(A))` on the target of `map`.
    pub fn pushforward(&self, map: &PointMap) -> Result<Self> {
        if map.source() != &self.space {
            return Err(Error::SpaceMismatch);
        }
        let values = map.target().subsets().map(|a| self.value(map.preimage(a))).collect();
        Ok(Capacity { space: map.target().clone(), values })
    }

    /// Density of a possibility capacity, `None` otherwise.
    pub fn to_distribution(&self) -> Option<PossibilityDistribution<S>> {
        self.is_possibility().then(|| PossibilityDistribution {
            space: self.space.clone(),
            density: self.singleton_values(),
        })
    }

    /// Same table on the same space, compared with the carrier's tolerance.
    pub fn approx_eq(&self, other: &Self) -> bool {
        self.space == other.space
            && self.values.iter().zip(&other.values).all(|(a, b)| a.approx_eq(*b))
    }

    /// First subset where the tables differ.
    pub fn first_difference(&self, other: &Self) -> Option<SubsetMask> {
        self.space
            .subsets()
            .find(|&a| !self.value(a).approx_eq(other.value(a)))
    }
}

/// Checks `nu(empty) = 0`, `nu(X) = 1`, range and monotonicity of a raw table.
pub fn validate_table<S: Scalar>(space: &FiniteSpace, values: &[S]) -> Result<()> {
    if values.len() != space.subset_count() {
        return Err(Error::Invalid(format!(
            "capacity table needs {} entries, got {}",
            space.subset_count(),
            values.len()
        )));
    }
    if let Some(bad) = values.iter().find(|v| !v.is_unit()) {
        return Err(Error::OutOfRange(bad.to_string()));
    }
    if !values[0].approx_eq(S::zero()) {
        return Err(Error::Normalization(format!("value of the empty set is {}", values[0])));
    }
    let top = values[space.full().index()];
    if !top.approx_eq(S::one()) {
        return Err(Error::Normalization(format!("value of the whole space is {top}")));
    }
    for a in space.subsets() {
        for i in a.points() {
            let b = a.without(i);
            if !values[b.index()].approx_le(values[a.index()]) {
                return Err(Error::NotMonotone {
                    smaller: space.render(b),
                    larger: space.render(a),
                    lo: values[b.index()].to_string(),
                    hi: values[a.index()].to_string(),
                });
            }
        }
    }
    Ok(())
}

/// A density on the points attaining 1; generates a possibility capacity.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PossibilityDistribution<S> {
    space: FiniteSpace,
    density: Vec<S>,
}

impl<S: Scalar> PossibilityDistribution<S> {
    pub fn new(space: FiniteSpace, density: Vec<S>) -> Result<Self> {
        if density.len() != space.len() {
            return Err(Error::Invalid(format!(
                "density needs {} values, got {}",
                space.len(),
                density.len()
            )));
        }
        if let Some(bad) = density.iter().find(|v| !v.is_unit()) {
            return Err(Error::OutOfRange(bad.to_string()));
        }
        let top = density.iter().copied().max().unwrap_or(S::zero());
        if !top.approx_eq(S::one()) {
            return Err(Error::Normalization(format!("density peaks at {top}, not 1")));
        }
        Ok(PossibilityDistribution { space, density })
    }

    /// Dirac density: 1 at `x`, 0 elsewhere.
    pub fn dirac(space: FiniteSpace, x: usize) -> Self {
        let density = (0..space.len()).map(|i| if i == x { S::one() } else { S::zero() }).collect();
        PossibilityDistribution { space, density }
    }

    pub fn space(&self) -> &FiniteSpace {
        &self.space
    }

    pub fn density(&self) -> &[S] {
        &self.density
    }

    /// `max { d(x) | x in A }`, 0 on the empty set.
    pub fn measure(&self, subset: SubsetMask) -> S {
        subset.points().map(|i| self.density[i]).max().unwrap_or(S::zero())
    }

    pub fn capacity(&self) -> Capacity<S> {
        let values = self.space.subsets().map(|a| self.measure(a)).collect();
        Capacity { space: self.space.clone(), values }
    }

    /// Density of the image capacity: maximum over each fiber.
    pub fn pushforward(&self, map: &PointMap) -> Result<Self> {
        if map.source() != &self.space {
            return Err(Error::SpaceMismatch);
        }
        let mut density = vec![S::zero(); map.target().len()];
        for (x, &d) in self.density.iter().enumerate() {
            let y = map.apply(x);
            density[y] = density[y].max(d);
        }
        Ok(PossibilityDistribution { space: map.target().clone(), density })
    }

    pub fn approx_eq(&self, other: &Self) -> bool {
        self.space == other.space
            && self.density.iter().zip(&other.density).all(|(a, b)| a.approx_eq(*b))
    }
}

/// Density-to-capacity conversion as a free function.
pub fn capacity_from_distribution<S: Scalar>(d: &PossibilityDistribution<S>) -> Capacity<S> {
    d.capacity()
}

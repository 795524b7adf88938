//! Finite discrete spaces, subsets as bitmasks, and maps between spaces.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest space for which dense subset tables are built.
pub const MAX_POINTS: usize = 20;

/// An ordered list of distinct point labels.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FiniteSpace {
    labels: Arc<[String]>,
}

impl FiniteSpace {
    pub fn new<I, L>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = L>,
        L: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() || labels.len() > MAX_POINTS {
            return Err(Error::Space {
                max: MAX_POINTS,
                reason: format!("got {} points", labels.len()),
            });
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::Space { max: MAX_POINTS, reason: format!("duplicate label `{l}`") });
            }
        }
        Ok(FiniteSpace { labels: labels.into() })
    }

    /// Space with labels `x0, x1, ...`.
    pub fn indexed(n: usize) -> Self {
        FiniteSpace::new((0..n).map(|i| format!("x{i}"))).expect("size within bounds")
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn full(&self) -> SubsetMask {
        SubsetMask((1u32 << self.len()) - 1)
    }

    /// Number of subsets, `2^n`.
    pub fn subset_count(&self) -> usize {
        1usize << self.len()
    }

    pub fn subsets(&self) -> impl Iterator<Item = SubsetMask> {
        (0..self.subset_count() as u32).map(SubsetMask)
    }

    /// `{a,b}` style rendering of a subset.
    pub fn render(&self, mask: SubsetMask) -> String {
        let names: Vec<&str> = mask.points().map(|i| self.label(i)).collect();
        format!("{{{}}}", names.join(","))
    }
}

impl fmt::Debug for FiniteSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.labels.iter()).finish()
    }
}

/// A subset of a [`FiniteSpace`], bit `i` standing for point `i`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct SubsetMask(pub u32);

impl SubsetMask {
    pub const EMPTY: SubsetMask = SubsetMask(0);

    pub fn singleton(i: usize) -> Self {
        SubsetMask(1 << i)
    }

    pub fn from_points(points: impl IntoIterator<Item = usize>) -> Self {
        SubsetMask(points.into_iter().fold(0, |m, i| m | (1 << i)))
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 & (1 << i) != 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn union(self, other: Self) -> Self {
        SubsetMask(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        SubsetMask(self.0 & other.0)
    }

    pub fn is_subset_of(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    /// Complement inside a space of `n` points.
    pub fn complement(self, n: usize) -> Self {
        SubsetMask(!self.0 & ((1u32 << n) - 1))
    }

    pub fn without(self, i: usize) -> Self {
        SubsetMask(self.0 & !(1 << i))
    }

    pub fn points(self) -> impl Iterator<Item = usize> {
        (0..32).filter(move |&i| self.contains(i))
    }

    pub fn lowest(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }
}

impl fmt::Debug for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.points()).finish()
    }
}

/// A total map between two finite spaces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointMap {
    source: FiniteSpace,
    target: FiniteSpace,
    image: Vec<usize>,
}

impl PointMap {
    pub fn new(source: FiniteSpace, target: FiniteSpace, image: Vec<usize>) -> Result<Self> {
        if image.len() != source.len() {
            return Err(Error::Invalid(format!(
                "map must send each of the {} source points somewhere, got {}",
                source.len(),
                image.len()
            )));
        }
        if let Some(&bad) = image.iter().find(|&&y| y >= target.len()) {
            return Err(Error::Invalid(format!("image index {bad} outside the target space")));
        }
        Ok(PointMap { source, target, image })
    }

    pub fn identity(space: &FiniteSpace) -> Self {
        PointMap { source: space.clone(), target: space.clone(), image: (0..space.len()).collect() }
    }

    pub fn source(&self) -> &FiniteSpace {
        &self.source
    }

    pub fn target(&self) -> &FiniteSpace {
        &self.target
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    pub fn apply(&self, x: usize) -> usize {
        self.image[x]
    }

    pub fn preimage(&self, target: SubsetMask) -> SubsetMask {
        SubsetMask::from_points((0..self.source.len()).filter(|&x| target.contains(self.image[x])))
    }

    /// `other` after `self`.
    pub fn then(&self, other: &PointMap) -> Result<PointMap> {
        if self.target != other.source {
            return Err(Error::SpaceMismatch);
        }
        let image = self.image.iter().map(|&y| other.image[y]).collect();
        PointMap::new(self.source.clone(), other.target.clone(), image)
    }

    /// Every map from a space of `n` points to one of `m` points.
    pub fn all_maps(source: &FiniteSpace, target: &FiniteSpace) -> Vec<PointMap> {
        let (n, m) = (source.len(), target.len());
        let count = m.pow(n as u32);
        (0..count)
            .map(|mut code| {
                let image = (0..n)
                    .map(|_| {
                        let y = code % m;
                        code /= m;
                        y
                    })
                    .collect();
                PointMap { source: source.clone(), target: target.clone(), image }
            })
            .collect()
    }
}

//! Seeded generators for the verification suites.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::capacity::{Capacity, PossibilityDistribution};
use crate::convexity::MaxStarPoint;
use crate::integral::UnitFunction;
use crate::possibility::{NestedOuter, OuterPossibility};
use crate::space::{FiniteSpace, PointMap, SubsetMask};
use crate::star::{PointMeasure, StarMeasure};
use crate::unit::Scalar;

pub(crate) type Rand = ChaCha8Rng;

/// Draws values on a grid, or floats with extra mass on the endpoints.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Values {
    pub grid: Option<u32>,
}

impl Values {
    pub fn value<S: Scalar>(self, rng: &mut Rand) -> S {
        match self.grid {
            Some(n) => S::from_ratio(rng.gen_range(0..=n) as i64, n as i64),
            None => match rng.gen_range(0..10) {
                0 => S::zero(),
                1 => S::one(),
                _ => S::from_f64(rng.gen::<f64>()),
            },
        }
    }

    /// `len` weights in `[0, 1]`, at least one equal to 1.
    pub fn normalized<S: Scalar>(self, rng: &mut Rand, len: usize) -> Vec<S> {
        let mut w: Vec<S> = (0..len).map(|_| self.value(rng)).collect();
        let top = w.iter().copied().max().unwrap_or(S::zero());
        if self.grid.is_none() && top > S::zero() && rng.gen_bool(0.5) {
            for v in &mut w {
                *v = (*v / top).clamp_unit();
            }
            // division may leave the peak a rounding step below 1
            if let Some(peak) = w.iter_mut().max() {
                *peak = S::one();
            }
        } else {
            w[rng.gen_range(0..len)] = S::one();
        }
        w
    }
}

pub(crate) fn space(rng: &mut Rand, max: usize) -> FiniteSpace {
    FiniteSpace::indexed(rng.gen_range(1..=max))
}

pub(crate) fn distribution<S: Scalar>(rng: &mut Rand, v: Values, space: &FiniteSpace) -> PossibilityDistribution<S> {
    PossibilityDistribution::new(space.clone(), v.normalized(rng, space.len())).expect("normalized density")
}

pub(crate) fn function<S: Scalar>(rng: &mut Rand, v: Values, space: &FiniteSpace) -> UnitFunction<S> {
    UnitFunction::new(space.clone(), (0..space.len()).map(|_| v.value(rng)).collect()).expect("unit values")
}

/// Raw draws for singletons and pairs, completed upward by maxima so the
/// table is monotone; `nu(X) = 1`.
fn monotone_completion<S: Scalar>(rng: &mut Rand, v: Values, space: &FiniteSpace) -> Vec<S> {
    let full = space.full();
    let mut table = vec![S::zero(); space.subset_count()];
    let mut order: Vec<SubsetMask> = space.subsets().collect();
    order.sort_by_key(|m| m.len());
    for a in order {
        if a.is_empty() {
            continue;
        }
        if a == full {
            table[a.index()] = S::one();
            continue;
        }
        let below = a.points().map(|i| table[a.without(i).index()]).max().unwrap_or(S::zero());
        let raw = if a.len() <= 2 { v.value(rng) } else { below };
        table[a.index()] = raw.max(below);
    }
    table
}

/// Capacity tables hitting possibility and non-possibility cases alike:
/// a possibility table, a monotone completion, or a possibility table with
/// one pair raised.
pub(crate) fn capacity_table<S: Scalar>(rng: &mut Rand, v: Values, space: &FiniteSpace) -> Vec<S> {
    match rng.gen_range(0..3) {
        0 => distribution::<S>(rng, v, space).capacity().values().to_vec(),
        1 => monotone_completion(rng, v, space),
        _ => {
            let mut table: Vec<S> = distribution(rng, v, space).capacity().values().to_vec();
            let pairs: Vec<SubsetMask> = space.subsets().filter(|m| m.len() == 2).collect();
            if let Some(&pair) = pairs.choose(rng) {
                let raised = table[pair.index()].max(v.value(rng));
                for m in space.subsets().filter(|m| pair.is_subset_of(*m)) {
                    table[m.index()] = table[m.index()].max(raised);
                }
            }
            table
        }
    }
}

pub(crate) fn capacity<S: Scalar>(rng: &mut Rand, v: Values, space: &FiniteSpace) -> Capacity<S> {
    Capacity::new(space.clone(), capacity_table(rng, v, space)).expect("generated capacity is valid")
}

/// A normal form over `draw()` with `1..=max_support` terms and one forced
/// unit weight.
pub(crate) fn normal_form<P: Clone + Ord, S: Scalar>(
    rng: &mut Rand,
    v: Values,
    max_support: usize,
    mut draw: impl FnMut(&mut Rand) -> P,
) -> StarMeasure<P, S> {
    let len = rng.gen_range(1..=max_support);
    let weights = v.normalized::<S>(rng, len);
    let terms: Vec<(P, S)> = weights.into_iter().map(|w| (draw(rng), w)).collect();
    StarMeasure::new(terms).expect("a unit weight survives merging")
}

pub(crate) fn point_measure<S: Scalar>(rng: &mut Rand, v: Values, space: &FiniteSpace) -> PointMeasure<S> {
    let n = space.len();
    normal_form(rng, v, n, |r| r.gen_range(0..n))
}

pub(crate) fn outer<S: Scalar>(rng: &mut Rand, v: Values, space: &FiniteSpace, max_support: usize) -> OuterPossibility<S> {
    let len = rng.gen_range(1..=max_support);
    let weights = v.normalized::<S>(rng, len);
    let terms = weights.into_iter().map(|w| (distribution(rng, v, space), w)).collect();
    OuterPossibility::new(space.clone(), terms).expect("normalized outer weights")
}

pub(crate) fn nested_outer<S: Scalar>(rng: &mut Rand, v: Values, space: &FiniteSpace, max_support: usize) -> NestedOuter<S> {
    let len = rng.gen_range(1..=max_support);
    let weights = v.normalized::<S>(rng, len);
    let terms = weights.into_iter().map(|w| (outer(rng, v, space, max_support), w)).collect();
    NestedOuter::new(space.clone(), terms).expect("normalized nested weights")
}

pub(crate) fn map(rng: &mut Rand, source: &FiniteSpace, target: &FiniteSpace) -> PointMap {
    let image = (0..source.len()).map(|_| rng.gen_range(0..target.len())).collect();
    PointMap::new(source.clone(), target.clone(), image).expect("image inside the target")
}

pub(crate) fn point<S: Scalar>(rng: &mut Rand, v: Values, dim: usize) -> MaxStarPoint<S> {
    MaxStarPoint::new((0..dim).map(|_| v.value(rng)).collect()).expect("unit coordinates")
}

/// A nonempty random subset of `0..n`.
pub(crate) fn nonempty_mask(rng: &mut Rand, n: usize) -> SubsetMask {
    SubsetMask(rng.gen_range(1..(1u32 << n)))
}

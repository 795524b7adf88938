//! Max-`*` convex geometry in `[0, 1]^T`.
//!
//! A set is max-`*` convex when it contains `lambda * a v b` for all its
//! points `a`, `b` and all `lambda`. The barycenter of a normal form
//! `V_i lambda_i * delta_{x_i}` is the point `V_i lambda_i * x_i`, and the
//! hull generated through the functional monad is the image of all normal
//! forms supported on the set.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::report::LawReport;
use crate::space::{FiniteSpace, PointMap, SubsetMask};
use crate::star::{self, StarMeasure};
use crate::tnorm::TNorm;
use crate::unit::{grid_values, Scalar};
use crate::variant::Kernel;

/// Largest number of normal forms the quotient construction will enumerate.
pub const MAX_ENUMERATION: usize = 2_000_000;

/// Largest ambient for the subset sweep.
pub const MAX_SWEEP_POINTS: usize = 12;

/// A point of `[0, 1]^T`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MaxStarPoint<S>(Vec<S>);

impl<S: Scalar> MaxStarPoint<S> {
    pub fn new(coords: Vec<S>) -> Result<Self> {
        if let Some(bad) = coords.iter().find(|v| !v.is_unit()) {
            return Err(Error::OutOfRange(bad.to_string()));
        }
        Ok(MaxStarPoint(coords))
    }

    pub fn coords(&self) -> &[S] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// Coordinatewise maximum.
    pub fn join(&self, other: &Self) -> Self {
        MaxStarPoint(self.0.iter().zip(&other.0).map(|(a, b)| (*a).max(*b)).collect())
    }

    /// `lambda * x`, coordinatewise.
    pub fn scale(&self, lambda: S, op: &TNorm<S>) -> Self {
        MaxStarPoint(self.0.iter().map(|&x| op.apply(lambda, x)).collect())
    }

    pub fn approx_eq(&self, other: &Self) -> bool {
        self.dim() == other.dim() && self.0.iter().zip(&other.0).all(|(a, b)| a.approx_eq(*b))
    }

    fn zero(dim: usize) -> Self {
        MaxStarPoint(vec![S::zero(); dim])
    }
}

impl<S: Scalar> fmt::Display for MaxStarPoint<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str(")")
    }
}

impl<S: Scalar> fmt::Debug for MaxStarPoint<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A finite nonempty set of points sharing one index set, optionally tagged
/// with the grid all coordinates lie on.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PointCloud<S> {
    points: Vec<MaxStarPoint<S>>,
    grid: Option<u32>,
}

impl<S: Scalar> PointCloud<S> {
    /// Sorts and deduplicates `points`.
    pub fn new(points: impl IntoIterator<Item = MaxStarPoint<S>>) -> Result<Self> {
        let mut points: Vec<_> = points.into_iter().collect();
        let Some(dim) = points.first().map(MaxStarPoint::dim) else {
            return Err(Error::Invalid("point cloud is empty".into()));
        };
        if points.iter().any(|p| p.dim() != dim) {
            return Err(Error::Invalid("points have different dimensions".into()));
        }
        points.sort();
        points.dedup();
        Ok(PointCloud { points, grid: None })
    }

    /// Tags the cloud with grid `n`, failing if some coordinate is off it.
    pub fn on_grid(mut self, n: u32) -> Result<Self> {
        if self.points.iter().flat_map(|p| p.coords()).any(|v| !v.on_grid(n)) {
            return Err(Error::NotOnGrid(n));
        }
        self.grid = Some(n);
        Ok(self)
    }

    /// The full cube `L_n^dim`.
    pub fn grid_cube(dim: usize, n: u32) -> Self {
        let grid: Vec<S> = grid_values(n);
        let mut points = vec![MaxStarPoint(Vec::new())];
        for _ in 0..dim {
            points = points
                .into_iter()
                .flat_map(|p| {
                    grid.iter().map(move |&v| {
                        let mut c = p.0.clone();
                        c.push(v);
                        MaxStarPoint(c)
                    })
                })
                .collect();
        }
        points.sort();
        PointCloud { points, grid: Some(n) }
    }

    pub fn points(&self) -> &[MaxStarPoint<S>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.points[0].dim()
    }

    pub fn grid(&self) -> Option<u32> {
        self.grid
    }

    pub fn contains(&self, p: &MaxStarPoint<S>) -> bool {
        self.points.binary_search(p).is_ok()
    }

    pub fn position(&self, p: &MaxStarPoint<S>) -> Option<usize> {
        self.points.binary_search(p).ok()
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.points.iter().all(|p| other.contains(p))
    }

    /// The points selected by `mask`, keeping the grid tag.
    pub fn select(&self, mask: SubsetMask) -> Result<Self> {
        let cloud = PointCloud::new(mask.points().map(|i| self.points[i].clone()))?;
        Ok(PointCloud { grid: self.grid, ..cloud })
    }
}

impl<S: Scalar> fmt::Debug for PointCloud<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, p) in self.points.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str("}")
    }
}

/// Combination weights with `V_i lambda_i = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightVector<S>(Vec<S>);

impl<S: Scalar> WeightVector<S> {
    pub fn new(weights: Vec<S>) -> Result<Self> {
        if let Some(bad) = weights.iter().find(|v| !v.is_unit()) {
            return Err(Error::OutOfRange(bad.to_string()));
        }
        let top = weights.iter().copied().max().unwrap_or(S::zero());
        if !top.approx_eq(S::one()) {
            return Err(Error::Normalization(format!("weights peak at {top}, not 1")));
        }
        Ok(WeightVector(weights))
    }

    pub fn weights(&self) -> &[S] {
        &self.0
    }
}

/// `V_i lambda_i * x_i`, coordinatewise.
pub fn combine<S: Scalar>(points: &[MaxStarPoint<S>], lambda: &WeightVector<S>, op: &TNorm<S>) -> Result<MaxStarPoint<S>> {
    if points.len() != lambda.0.len() {
        return Err(Error::Invalid(format!(
            "{} points but {} weights",
            points.len(),
            lambda.0.len()
        )));
    }
    let dim = points.first().map_or(0, MaxStarPoint::dim);
    if points.iter().any(|p| p.dim() != dim) {
        return Err(Error::Invalid("points have different dimensions".into()));
    }
    Ok(points
        .iter()
        .zip(&lambda.0)
        .fold(MaxStarPoint::zero(dim), |acc, (p, &l)| acc.join(&p.scale(l, op))))
}

fn require_grid<S: Scalar>(cloud: &PointCloud<S>, op: &TNorm<S>) -> Result<u32> {
    let n = cloud
        .grid
        .ok_or_else(|| Error::Invalid("point cloud carries no grid".into()))?;
    if !op.grid_policy(n).closed {
        return Err(Error::GridClosure { tnorm: op.name().into(), n });
    }
    Ok(n)
}

/// Whether `lambda * a v b` stays in `c` for all `a`, `b` in `c` and all
/// grid `lambda`.
pub fn is_convex<S: Scalar>(c: &PointCloud<S>, op: &TNorm<S>) -> Result<bool> {
    let n = require_grid(c, op)?;
    let lambdas: Vec<S> = grid_values(n);
    Ok(c.points.iter().all(|a| {
        lambdas.iter().all(|&l| {
            let scaled = a.scale(l, op);
            c.points.iter().all(|b| c.contains(&scaled.join(b)))
        })
    }))
}

/// Decides whether `y` is a normalized combination of `generators`. The
/// candidate weights are the largest `lambda_i` with `lambda_i * x_i <= y`;
/// any other solution lies below them, so `y` is in the hull exactly when
/// these weights reproduce `y` and one of them is 1.
pub fn hull_membership<S: Scalar>(
    y: &MaxStarPoint<S>,
    generators: &PointCloud<S>,
    op: &TNorm<S>,
) -> Option<WeightVector<S>> {
    if y.dim() != generators.dim() {
        return None;
    }
    let weights: Vec<S> = generators
        .points
        .iter()
        .map(|x| {
            x.0.iter()
                .zip(&y.0)
                .map(|(&xt, &yt)| op.implication(xt, yt))
                .min()
                .unwrap_or(S::one())
        })
        .collect();
    let lambda = WeightVector::new(weights).ok()?;
    let reached = combine(&generators.points, &lambda, op).ok()?;
    reached.approx_eq(y).then_some(lambda)
}

/// `beta(mu)`: coordinate `t` is `mu` evaluated on the `t`-th projection.
pub fn barycenter<S: Scalar>(mu: &StarMeasure<MaxStarPoint<S>, S>, op: &TNorm<S>) -> MaxStarPoint<S> {
    let dim = mu.support().next().map_or(0, MaxStarPoint::dim);
    MaxStarPoint((0..dim).map(|t| mu.evaluate(|p| p.0[t], op)).collect())
}

/// The hull of `a` generated by the monad: barycenters of all normal forms
/// supported on `a` with weights on the ambient grid.
pub fn monad_hull<S: Scalar>(a: &PointCloud<S>, k: &PointCloud<S>, op: &TNorm<S>) -> Result<PointCloud<S>> {
    monad_hull_with(a, k, op, Kernel::REFERENCE)
}

pub(crate) fn monad_hull_with<S: Scalar>(
    a: &PointCloud<S>,
    k: &PointCloud<S>,
    op: &TNorm<S>,
    kernel: Kernel,
) -> Result<PointCloud<S>> {
    let n = require_grid(k, op)?;
    if !a.is_subset_of(k) {
        return Err(Error::NotSubset);
    }
    let hull = PointCloud::new(monad_hull_with_states(&a.points, op, n, kernel))?;
    Ok(PointCloud { grid: Some(n), ..hull })
}

/// Barycenters of the grid normal forms on `points`.
fn monad_hull_with_states<S: Scalar>(points: &[MaxStarPoint<S>], op: &TNorm<S>, n: u32, kernel: Kernel) -> Vec<MaxStarPoint<S>> {
    let mut weights: Vec<S> = grid_values(n);
    if kernel.skip_zero_weight {
        weights.remove(0);
    }
    let dim = points.first().map_or(0, MaxStarPoint::dim);
    // Partial barycenters after deciding the weights of a prefix of `points`,
    // with a flag recording whether some weight was 1.
    let mut states: BTreeSet<(MaxStarPoint<S>, bool)> = BTreeSet::from([(MaxStarPoint::zero(dim), false)]);
    for p in points {
        let mut next = BTreeSet::new();
        for (acc, unit) in &states {
            for &w in &weights {
                next.insert((acc.join(&p.scale(w, op)), *unit || w == S::one()));
            }
        }
        states = next;
    }
    states.into_iter().filter(|s| s.1).map(|s| s.0).collect()
}

/// The same hull built literally: collapse `a` to one point of the quotient
/// `k / a`, keep the grid normal forms on `k` whose image is the Dirac
/// measure at that point, and take barycenters. Exponential in `|k|`.
pub fn monad_hull_quotient<S: Scalar>(a: &PointCloud<S>, k: &PointCloud<S>, op: &TNorm<S>) -> Result<PointCloud<S>> {
    let n = require_grid(k, op)?;
    if !a.is_subset_of(k) {
        return Err(Error::NotSubset);
    }
    let count = (n as usize + 1)
        .checked_pow(k.len() as u32)
        .filter(|&c| c <= MAX_ENUMERATION)
        .ok_or_else(|| Error::ResourceBound(format!("{}^{} normal forms", n + 1, k.len())))?;
    let space = FiniteSpace::indexed(k.len());
    let outside: Vec<usize> = (0..k.len()).filter(|&i| !a.contains(&k.points[i])).collect();
    // the collapsed point is index 0 of the quotient
    let quotient = FiniteSpace::indexed(outside.len() + 1);
    let image = (0..k.len())
        .map(|i| outside.iter().position(|&j| j == i).map_or(0, |pos| pos + 1))
        .collect();
    let collapse = PointMap::new(space, quotient, image)?;
    let target = star::unit::<S>(0);
    let grid: Vec<S> = grid_values(n);
    let mut hull = BTreeSet::new();
    for mut code in 0..count {
        let terms: Vec<(usize, S)> = (0..k.len())
            .map(|i| {
                let w = grid[code % grid.len()];
                code /= grid.len();
                (i, w)
            })
            .collect();
        let Ok(mu) = StarMeasure::new(terms) else { continue };
        if star::functor_map(&collapse, &mu) == target {
            hull.insert(barycenter(&mu.map(|&i| k.points[i].clone()), op));
        }
    }
    let hull = PointCloud::new(hull)?;
    Ok(PointCloud { grid: Some(n), ..hull })
}

/// A normal form over normal forms of points.
pub type NestedPointMeasure<S> = StarMeasure<StarMeasure<MaxStarPoint<S>, S>, S>;

/// `beta . h = id` on every point of `k`, and `beta . A*beta = beta . m` with
/// `beta` landing in `k` on every nested instance.
pub fn check_algebra_laws<S: Scalar>(k: &PointCloud<S>, nested: &[NestedPointMeasure<S>], op: &TNorm<S>) -> LawReport {
    check_algebra_laws_with(k, nested, op, Kernel::REFERENCE)
}

pub(crate) fn check_algebra_laws_with<S: Scalar>(
    k: &PointCloud<S>,
    nested: &[NestedPointMeasure<S>],
    op: &TNorm<S>,
    kernel: Kernel,
) -> LawReport {
    let mut report = check_algebra_unit(k, op);
    report.merge(check_algebra_multiplication_with(Some(k), nested, op, kernel));
    report
}

pub(crate) fn check_algebra_unit<S: Scalar>(k: &PointCloud<S>, op: &TNorm<S>) -> LawReport {
    let mut report = LawReport::default();
    for x in &k.points {
        let got = barycenter(&StarMeasure::dirac(x.clone()), op);
        report.record(got.approx_eq(x), "beta . h = id", || (format!("x = {x}"), got.to_string(), x.to_string()));
    }
    report
}

/// The multiplication law; the landing check runs only when `k` is given.
pub(crate) fn check_algebra_multiplication_with<S: Scalar>(
    k: Option<&PointCloud<S>>,
    nested: &[NestedPointMeasure<S>],
    op: &TNorm<S>,
    kernel: Kernel,
) -> LawReport {
    let mut report = LawReport::default();
    for lambda in nested {
        let left = barycenter(&lambda.map_with(|mu| barycenter(mu, op), kernel.merge), op);
        let right = barycenter(&lambda.flatten_with(op, kernel.merge), op);
        report.record(left.approx_eq(&right), "beta . A*beta = beta . m", || {
            (format!("Lambda = {lambda:?}"), left.to_string(), right.to_string())
        });
        if let Some(k) = k {
            report.record(k.contains(&right), "beta lands in K", || {
                (format!("Lambda = {lambda:?}"), right.to_string(), format!("{k:?}"))
            });
        }
    }
    report
}

/// For every subset `c` of the grid ambient `k`: `c` is fixed by the monad
/// hull exactly when it is max-`*` convex.
pub fn check_convexity_equivalence<S: Scalar>(k: &PointCloud<S>, op: &TNorm<S>) -> Result<LawReport> {
    check_convexity_equivalence_with(k, op, Kernel::REFERENCE)
}

pub(crate) fn check_convexity_equivalence_with<S: Scalar>(
    k: &PointCloud<S>,
    op: &TNorm<S>,
    kernel: Kernel,
) -> Result<LawReport> {
    let n = require_grid(k, op)?;
    if k.len() > MAX_SWEEP_POINTS {
        return Err(Error::ResourceBound(format!(
            "{} points exceed the subset sweep cap of {MAX_SWEEP_POINTS}",
            k.len()
        )));
    }
    let mut report = LawReport::default();
    // The empty set is convex, and no normalized normal form lives on it.
    let empty_hull = monad_hull_with_states(&[], op, n, kernel);
    report.record(empty_hull.is_empty(), "hull(C) = C iff C convex", || {
        ("C = {}".into(), format!("hull = {empty_hull:?}"), "convex = true".into())
    });
    for mask in 1u32..(1 << k.len()) {
        let c = k.select(SubsetMask(mask))?;
        let hull = monad_hull_with(&c, k, op, kernel)?;
        let fixed = hull == c;
        let convex = is_convex(&c, op)?;
        report.record(fixed == convex, "hull(C) = C iff C convex", || {
            (format!("C = {c:?}, hull = {hull:?}"), format!("fixed = {fixed}"), format!("convex = {convex}"))
        });
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::unit::{Approx, Exact};
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Exact {
        Exact::new(n, d)
    }

    fn pt(c: &[Exact]) -> MaxStarPoint<Exact> {
        MaxStarPoint::new(c.to_vec()).unwrap()
    }

    fn fpt(c: &[f64]) -> MaxStarPoint<Approx> {
        MaxStarPoint::new(c.iter().map(|&v| Approx(v)).collect()).unwrap()
    }

    fn corners() -> PointCloud<Exact> {
        PointCloud::new([pt(&[q(0, 1), q(1, 1)]), pt(&[q(1, 1), q(0, 1)])]).unwrap().on_grid(2).unwrap()
    }

    #[test]
    fn combine_examples() {
        let x = [fpt(&[0.2, 0.6]), fpt(&[0.9, 0.1])];
        let lambda = WeightVector::new(vec![Approx(1.0), Approx(0.5)]).unwrap();
        let y = combine(&x, &lambda, &TNorm::Product).unwrap();
        assert!(y.approx_eq(&fpt(&[0.45, 0.6])));
        assert_eq!(combine(&x[..1], &WeightVector::new(vec![Approx(1.0)]).unwrap(), &TNorm::Product).unwrap(), x[0]);
        assert!(WeightVector::new(vec![Approx(0.5)]).is_err());

        // binary form
        let (a, b) = (pt(&[q(1, 2), q(1, 1)]), pt(&[q(1, 4), q(0, 1)]));
        let l = q(1, 2);
        let lambda = WeightVector::new(vec![l, q(1, 1)]).unwrap();
        let op = TNorm::Lukasiewicz;
        assert_eq!(combine(&[a.clone(), b.clone()], &lambda, &op).unwrap(), a.scale(l, &op).join(&b));
    }

    #[test]
    fn convexity_examples() {
        let op = TNorm::Minimum;
        assert!(is_convex(&PointCloud::grid_cube(2, 2), &op).unwrap());
        let single = PointCloud::new([pt(&[q(1, 2), q(0, 1)])]).unwrap().on_grid(2).unwrap();
        assert!(is_convex(&single, &op).unwrap());
        assert!(!is_convex(&corners(), &op).unwrap());
        assert!(is_convex(&PointCloud::new([pt(&[q(1, 2), q(0, 1)])]).unwrap(), &op).is_err());
        assert!(matches!(
            is_convex(&PointCloud::<Approx>::grid_cube(2, 2), &TNorm::Product),
            Err(Error::GridClosure { .. })
        ));
    }

    #[test]
    fn membership_examples() {
        let g = PointCloud::new([fpt(&[0.2, 0.6]), fpt(&[0.9, 0.1])]).unwrap();
        let op = TNorm::Product;
        let w = hull_membership(&fpt(&[0.9, 0.1]), &g, &op).unwrap();
        assert_eq!(w.weights()[1], Approx(1.0));
        let w = hull_membership(&fpt(&[0.45, 0.6]), &g, &op).unwrap();
        assert!(combine(g.points(), &w, &op).unwrap().approx_eq(&fpt(&[0.45, 0.6])));
        assert!(hull_membership(&fpt(&[0.95, 0.1]), &g, &op).is_none());
    }

    #[test]
    fn barycenter_examples() {
        let op = TNorm::Product;
        let x = [fpt(&[0.2, 0.6]), fpt(&[0.9, 0.1])];
        assert_eq!(barycenter(&StarMeasure::dirac(x[0].clone()), &op), x[0]);
        let mu = StarMeasure::new([(x[0].clone(), Approx(1.0)), (x[1].clone(), Approx(0.5))]).unwrap();
        assert!(barycenter(&mu, &op).approx_eq(&fpt(&[0.45, 0.6])));
        let all = StarMeasure::new([(x[0].clone(), Approx(1.0)), (x[1].clone(), Approx(1.0))]).unwrap();
        assert_eq!(barycenter(&all, &op), fpt(&[0.9, 0.6]));
    }

    #[test]
    fn hull_examples() {
        let k = PointCloud::grid_cube(2, 2);
        let op = TNorm::Minimum;
        assert_eq!(monad_hull(&k, &k, &op).unwrap(), k);
        let single = PointCloud::new([pt(&[q(1, 2), q(0, 1)])]).unwrap().on_grid(2).unwrap();
        assert_eq!(monad_hull(&single, &k, &op).unwrap(), single);

        let hull = monad_hull(&corners(), &k, &op).unwrap();
        for p in [[q(1, 2), q(1, 1)], [q(1, 1), q(1, 2)], [q(1, 1), q(1, 1)], [q(0, 1), q(1, 1)]] {
            assert!(hull.contains(&pt(&p)));
        }
        assert_eq!(hull.len(), 5);
        assert!(!hull.contains(&pt(&[q(0, 1), q(0, 1)])));
        assert_eq!(monad_hull_quotient(&corners(), &k, &op).unwrap(), hull);
        assert!(matches!(monad_hull(&k, &corners(), &op), Err(Error::NotSubset)));
    }

    #[test]
    fn equivalence_on_the_small_square() {
        let k = PointCloud::<Exact>::grid_cube(2, 2);
        for op in [TNorm::Minimum, TNorm::Lukasiewicz] {
            let report = check_convexity_equivalence(&k, &op).unwrap();
            assert_eq!(report.checked, 512);
            assert!(report.is_clean(), "{report}");
        }
        let broken = Kernel { skip_zero_weight: true, ..Kernel::REFERENCE };
        assert!(!check_convexity_equivalence_with(&k, &TNorm::Minimum, broken).unwrap().is_clean());
    }

    fn subset_of_square() -> impl Strategy<Value = PointCloud<Exact>> {
        (1u32..512).prop_map(|m| PointCloud::grid_cube(2, 2).select(SubsetMask(m)).unwrap())
    }

    proptest! {
        #[test]
        fn hull_closure_properties(a in subset_of_square(), b in subset_of_square(), luk in any::<bool>()) {
            let op = if luk { TNorm::Lukasiewicz } else { TNorm::Minimum };
            let k = PointCloud::grid_cube(2, 2);
            let ha = monad_hull(&a, &k, &op).unwrap();
            prop_assert!(a.is_subset_of(&ha));
            prop_assert_eq!(monad_hull(&ha, &k, &op).unwrap(), ha.clone());
            let ab = PointCloud::new(a.points().iter().chain(b.points()).cloned()).unwrap().on_grid(2).unwrap();
            prop_assert!(ha.is_subset_of(&monad_hull(&ab, &k, &op).unwrap()));
            prop_assert_eq!(monad_hull_quotient(&a, &k, &op).unwrap(), ha.clone());
            for y in k.points() {
                prop_assert_eq!(hull_membership(y, &a, &op).is_some(), ha.contains(y));
            }
        }

        #[test]
        fn barycenter_stays_in_the_hull(a in subset_of_square(), w in prop::collection::vec(0i64..=2, 9)) {
            let op = TNorm::Lukasiewicz;
            let terms: Vec<_> = a.points().iter().cloned().zip(w.iter().map(|&k| q(k, 2))).collect();
            let mut terms = terms;
            terms[0].1 = q(1, 1);
            let mu = StarMeasure::new(terms.clone()).unwrap();
            let k = PointCloud::grid_cube(2, 2);
            let hull = monad_hull(&a, &k, &op).unwrap();
            prop_assert!(hull.contains(&barycenter(&mu, &op)));
            let (points, weights): (Vec<_>, Vec<_>) = terms.into_iter().unzip();
            let lambda = WeightVector::new(weights).unwrap();
            prop_assert_eq!(combine(&points, &lambda, &op).unwrap(), barycenter(&mu, &op));
        }
    }
}

//! Max-`*` measures in normal form `V_i lambda_i * delta_{x_i}`.
//!
//! On a finite space every max-`*` measure has such a form, and the form is
//! unique once supports are distinct, zero weights are dropped and terms are
//! sorted: evaluating on the indicator of `{x}` returns the weight of `x`.
//! Structural equality of canonical forms is therefore functional equality.
//!
//! The carrier `P` is a point index for measures on a [`FiniteSpace`], a
//! [`MaxStarPoint`](crate::convexity::MaxStarPoint) for barycenters, or
//! another `StarMeasure` for the iterated functor.

use std::fmt;

use crate::capacity::PossibilityDistribution;
use crate::error::{Error, Result};
use crate::integral::UnitFunction;
use crate::report::LawReport;
use crate::space::{FiniteSpace, PointMap, SubsetMask};
use crate::tnorm::TNorm;
use crate::unit::Scalar;
use crate::variant::Merge;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StarMeasure<P, S> {
    terms: Vec<(P, S)>,
}

impl<P: fmt::Debug, S: Scalar> fmt::Debug for StarMeasure<P, S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, (p, w)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{w}*{p:?}")?;
        }
        f.write_str("]")
    }
}

impl<P: Clone + Ord, S: Scalar> StarMeasure<P, S> {
    /// Canonicalizes `terms` (collisions keep the larger weight, zero
    /// weights are dropped) and checks that the largest weight is 1.
    pub fn new(terms: impl IntoIterator<Item = (P, S)>) -> Result<Self> {
        let terms: Vec<(P, S)> = terms.into_iter().collect();
        if let Some((_, bad)) = terms.iter().find(|(_, w)| !w.is_unit()) {
            return Err(Error::OutOfRange(bad.to_string()));
        }
        let measure = Self::from_terms(terms, Merge::Max);
        let top = measure.terms.iter().map(|(_, w)| *w).max().unwrap_or(S::zero());
        if !top.approx_eq(S::one()) {
            return Err(Error::Normalization(format!("weights peak at {top}, not 1")));
        }
        Ok(measure)
    }

    pub(crate) fn from_terms(mut terms: Vec<(P, S)>, merge: Merge) -> Self {
        terms.sort_by(|a, b| a.0.cmp(&b.0));
        let mut out: Vec<(P, S)> = Vec::with_capacity(terms.len());
        for (p, w) in terms {
            match out.last_mut() {
                Some((q, v)) if *q == p => *v = merge.apply(*v, w),
                _ => out.push((p, w)),
            }
        }
        out.retain(|(_, w)| *w != S::zero());
        StarMeasure { terms: out }
    }

    /// The Dirac measure at `p`.
    pub fn dirac(p: P) -> Self {
        StarMeasure { terms: vec![(p, S::one())] }
    }

    pub fn terms(&self) -> &[(P, S)] {
        &self.terms
    }

    pub fn support(&self) -> impl Iterator<Item = &P> {
        self.terms.iter().map(|(p, _)| p)
    }

    pub fn weight_of(&self, p: &P) -> S {
        self.terms
            .binary_search_by(|(q, _)| q.cmp(p))
            .map(|i| self.terms[i].1)
            .unwrap_or(S::zero())
    }

    /// `V_i lambda_i * f(x_i)`.
    pub fn evaluate(&self, f: impl Fn(&P) -> S, op: &TNorm<S>) -> S {
        self.terms
            .iter()
            .map(|(p, w)| op.apply(*w, f(p)))
            .max()
            .unwrap_or(S::zero())
    }

    /// Image under a map of carriers: each support point is pushed through
    /// `g`, collisions keep the larger weight.
    pub fn map<Q: Clone + Ord>(&self, g: impl Fn(&P) -> Q) -> StarMeasure<Q, S> {
        self.map_with(g, Merge::Max)
    }

    pub(crate) fn map_with<Q: Clone + Ord>(&self, g: impl Fn(&P) -> Q, merge: Merge) -> StarMeasure<Q, S> {
        StarMeasure::from_terms(self.terms.iter().map(|(p, w)| (g(p), *w)).collect(), merge)
    }

    /// Same support and weights within the carrier tolerance.
    pub fn approx_eq(&self, other: &Self) -> bool {
        self.terms.len() == other.terms.len()
            && self
                .terms
                .iter()
                .zip(&other.terms)
                .all(|((p, v), (q, w))| p == q && v.approx_eq(*w))
    }
}

impl<P: Clone + Ord, S: Scalar> StarMeasure<StarMeasure<P, S>, S> {
    /// The monad multiplication: `V_j alpha_j * mu_j` with
    /// `alpha_j * lambda_{j,i}` on each inner term, collisions merged by max.
    /// Evaluating the result on `f` gives `V_j alpha_j * mu_j(f)`.
    pub fn flatten(&self, op: &TNorm<S>) -> StarMeasure<P, S> {
        self.flatten_with(op, Merge::Max)
    }

    pub(crate) fn flatten_with(&self, op: &TNorm<S>, merge: Merge) -> StarMeasure<P, S> {
        let terms = self
            .terms
            .iter()
            .flat_map(|(inner, alpha)| inner.terms.iter().map(move |(p, w)| (p.clone(), op.apply(*alpha, *w))))
            .collect();
        StarMeasure::from_terms(terms, merge)
    }
}

/// Normal form on a finite space: carriers are point indices.
pub type PointMeasure<S> = StarMeasure<usize, S>;

/// `mu(f)` for a measure on the points of `f`'s space.
pub fn evaluate<S: Scalar>(mu: &PointMeasure<S>, f: &UnitFunction<S>, op: &TNorm<S>) -> S {
    mu.evaluate(|&x| f.at(x), op)
}

/// The Dirac measure `delta_x`.
pub fn unit<S: Scalar>(x: usize) -> PointMeasure<S> {
    StarMeasure::dirac(x)
}

/// Image of `mu` under a map of finite spaces.
pub fn functor_map<S: Scalar>(g: &PointMap, mu: &PointMeasure<S>) -> PointMeasure<S> {
    mu.map(|&x| g.apply(x))
}

pub fn multiplication<S: Scalar>(
    nested: &StarMeasure<PointMeasure<S>, S>,
    op: &TNorm<S>,
) -> PointMeasure<S> {
    nested.flatten(op)
}

/// Whether `mu` vanishes on every function that vanishes on `k`, decided by
/// evaluating the indicator of the complement.
pub fn is_supported_on<S: Scalar>(
    mu: &PointMeasure<S>,
    space: &FiniteSpace,
    k: SubsetMask,
    op: &TNorm<S>,
) -> bool {
    let outside = UnitFunction::indicator(space.clone(), k.complement(space.len()));
    evaluate(mu, &outside, op) == S::zero()
}

/// Mask of points carrying positive weight.
pub fn support_mask<S: Scalar>(mu: &PointMeasure<S>) -> SubsetMask {
    SubsetMask::from_points(mu.support().copied())
}

/// The weights read as a possibility density.
pub fn to_distribution<S: Scalar>(mu: &PointMeasure<S>, space: &FiniteSpace) -> Result<PossibilityDistribution<S>> {
    let mut density = vec![S::zero(); space.len()];
    for &(x, w) in mu.terms() {
        if x >= space.len() {
            return Err(Error::Invalid(format!("support point {x} outside the space")));
        }
        density[x] = w;
    }
    PossibilityDistribution::new(space.clone(), density)
}

/// Three levels of normal forms on a finite space.
pub type TripleMeasure<S> = StarMeasure<StarMeasure<PointMeasure<S>, S>, S>;

/// Unit laws at both levels and associativity of multiplication. Each law is
/// compared structurally and by evaluation on `functions`; a disagreement
/// between the two notions of equality is reported on its own.
pub fn check_star_monad_laws<S: Scalar>(
    instances: &[TripleMeasure<S>],
    functions: &[UnitFunction<S>],
    op: &TNorm<S>,
) -> LawReport {
    check_star_monad_laws_with(instances, functions, op, Merge::Max)
}

pub(crate) fn check_star_monad_laws_with<S: Scalar>(
    instances: &[TripleMeasure<S>],
    functions: &[UnitFunction<S>],
    op: &TNorm<S>,
    merge: Merge,
) -> LawReport {
    let mut report = LawReport::default();
    let mut compare = |law: &str, input: &dyn fmt::Debug, left: &PointMeasure<S>, right: &PointMeasure<S>| {
        let structural = left.approx_eq(right);
        let extensional = functions
            .iter()
            .all(|f| evaluate(left, f, op).approx_eq(evaluate(right, f, op)));
        report.record(structural && extensional, law, || (format!("{input:?}"), format!("{left:?}"), format!("{right:?}")));
        report.record(structural == extensional, "structural = extensional", || {
            (
                format!("{law} on {input:?}: {left:?} vs {right:?}"),
                format!("structural {structural}"),
                format!("extensional {extensional}"),
            )
        });
    };
    for triple in instances {
        for (nested, _) in triple.terms() {
            for (mu, _) in nested.terms() {
                compare("m . h_A* = id", mu, &StarMeasure::dirac(mu.clone()).flatten_with(op, merge), mu);
                compare("m . A*h = id", mu, &mu.map_with(|&x| unit::<S>(x), merge).flatten_with(op, merge), mu);
            }
            let dirac = StarMeasure::dirac(nested.clone()).flatten_with(op, merge);
            compare("m_A* . h_A*A* = id", nested, &dirac.flatten_with(op, merge), &nested.flatten_with(op, merge));
            let lifted = nested.map_with(|mu| StarMeasure::dirac(mu.clone()), merge).flatten_with(op, merge);
            compare("m_A* . A*h_A* = id", nested, &lifted.flatten_with(op, merge), &nested.flatten_with(op, merge));
        }
        let left = triple.map_with(|n| n.flatten_with(op, merge), merge).flatten_with(op, merge);
        let right = triple.flatten_with(op, merge).flatten_with(op, merge);
        compare("m . A*m = m . m_A*", triple, &left, &right);
    }
    report
}

/// `A*g(mu)` is supported on `K` exactly when `mu` is supported on
/// `g^-1(K)`, for every subset `K` of the target.
pub fn check_preimage_law<S: Scalar>(g: &PointMap, measures: &[PointMeasure<S>], op: &TNorm<S>) -> LawReport {
    check_preimage_law_with(g, measures, op, Merge::Max)
}

pub(crate) fn check_preimage_law_with<S: Scalar>(
    g: &PointMap,
    measures: &[PointMeasure<S>],
    op: &TNorm<S>,
    merge: Merge,
) -> LawReport {
    let mut report = LawReport::default();
    for mu in measures {
        let image = mu.map_with(|&x| g.apply(x), merge);
        for k in g.target().subsets() {
            let left = is_supported_on(&image, g.target(), k, op);
            let right = is_supported_on(mu, g.source(), g.preimage(k), op);
            report.record(left == right, "(A*g)^-1(A*K) = A*(g^-1 K)", || {
                (
                    format!("g = {:?}, K = {}, mu = {mu:?}", g.image(), g.target().render(k)),
                    format!("image supported: {left}"),
                    format!("supported on preimage: {right}"),
                )
            });
        }
    }
    report
}

/// The projection `pi_phi : mu -> mu(phi)`.
#[derive(Clone, Debug)]
pub struct Projection<S> {
    phi: UnitFunction<S>,
}

impl<S: Scalar> Projection<S> {
    pub fn new(phi: UnitFunction<S>) -> Self {
        Projection { phi }
    }

    pub fn function(&self) -> &UnitFunction<S> {
        &self.phi
    }

    pub fn apply(&self, mu: &PointMeasure<S>, op: &TNorm<S>) -> S {
        evaluate(mu, &self.phi, op)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integral::integrate;
    use crate::unit::Exact;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Exact {
        Exact::new(n, d)
    }

    fn space(n: usize) -> FiniteSpace {
        FiniteSpace::indexed(n)
    }

    fn measure(terms: &[(usize, Exact)]) -> PointMeasure<Exact> {
        StarMeasure::new(terms.iter().copied()).unwrap()
    }

    #[test]
    fn construction_canonicalizes() {
        let mu = measure(&[(1, q(1, 2)), (0, q(1, 1)), (1, q(1, 4)), (2, q(0, 1))]);
        assert_eq!(mu.terms(), &[(0, q(1, 1)), (1, q(1, 2))]);
        assert!(StarMeasure::<usize, Exact>::new([(0, q(1, 2))]).is_err());
        assert!(StarMeasure::<usize, Exact>::new([(0, q(3, 2))]).is_err());
    }

    #[test]
    fn evaluate_examples() {
        let f = UnitFunction::new(space(2), vec![q(1, 5), q(4, 5)]).unwrap();
        assert_eq!(evaluate(&unit(1), &f, &TNorm::Minimum), q(4, 5));
        let mu = measure(&[(0, q(1, 1)), (1, q(1, 2))]);
        assert_eq!(evaluate(&mu, &f, &TNorm::Product), q(2, 5));
        let d = to_distribution(&mu, &space(2)).unwrap();
        assert_eq!(integrate(&d.capacity(), &f, &TNorm::Product).value, q(2, 5));
        let one = UnitFunction::constant(space(2), Exact::one());
        assert_eq!(evaluate(&mu, &one, &TNorm::Lukasiewicz), Exact::one());
    }

    #[test]
    fn functor_map_examples() {
        let mu = measure(&[(0, q(1, 2)), (1, q(1, 1)), (2, q(1, 4))]);
        assert_eq!(functor_map(&PointMap::identity(&space(3)), &mu), mu);
        let to_one = PointMap::new(space(3), space(1), vec![0, 0, 0]).unwrap();
        assert_eq!(functor_map(&to_one, &mu), unit(0));

        let merge = PointMap::new(space(3), space(2), vec![0, 0, 1]).unwrap();
        let image = functor_map(&merge, &mu);
        assert_eq!(image.weight_of(&0), q(1, 1));
        for f in UnitFunction::<Exact>::grid_functions(&space(2), 4) {
            let pulled = UnitFunction::new(space(3), (0..3).map(|x| f.at(merge.apply(x))).collect()).unwrap();
            for op in [TNorm::Minimum, TNorm::Lukasiewicz] {
                assert_eq!(evaluate(&image, &f, &op), evaluate(&mu, &pulled, &op));
            }
        }
    }

    #[test]
    fn unit_examples() {
        let x = space(3);
        assert_eq!(evaluate(&unit::<Exact>(1), &UnitFunction::indicator(x.clone(), SubsetMask(2)), &TNorm::Minimum), q(1, 1));
        assert_eq!(evaluate(&unit::<Exact>(1), &UnitFunction::indicator(x.clone(), SubsetMask(5)), &TNorm::Minimum), q(0, 1));
    }

    #[test]
    fn multiplication_examples() {
        let mu = measure(&[(0, q(1, 1)), (1, q(1, 2))]);
        assert_eq!(multiplication(&StarMeasure::dirac(mu.clone()), &TNorm::Product), mu);

        let over_diracs: StarMeasure<PointMeasure<Exact>, Exact> =
            StarMeasure::new([(unit(0), q(1, 1)), (unit(2), q(1, 3))]).unwrap();
        assert_eq!(
            multiplication(&over_diracs, &TNorm::Minimum),
            measure(&[(0, q(1, 1)), (2, q(1, 3))])
        );

        // alpha = (1, 0.75), mu1 = (1, 0.5), mu2 = (0.25, 1), min t-norm.
        let mu1 = measure(&[(0, q(1, 1)), (1, q(1, 2))]);
        let mu2 = measure(&[(0, q(1, 4)), (1, q(1, 1))]);
        let big = StarMeasure::new([(mu1.clone(), q(1, 1)), (mu2.clone(), q(3, 4))]).unwrap();
        let m = multiplication(&big, &TNorm::Minimum);
        let x = space(2);
        for (mask, expected) in [(1u32, q(1, 1)), (2, q(3, 4))] {
            let chi = UnitFunction::indicator(x.clone(), SubsetMask(mask));
            let defining = big.evaluate(|inner| evaluate(inner, &chi, &TNorm::Minimum), &TNorm::Minimum);
            assert_eq!(defining, expected);
            assert_eq!(evaluate(&m, &chi, &TNorm::Minimum), expected);
        }
    }

    #[test]
    fn support_examples() {
        let x = space(2);
        let inside = SubsetMask(1);
        for op in [TNorm::Minimum, TNorm::Product] {
            assert!(is_supported_on(&unit(0), &x, inside, &op));
            assert!(!is_supported_on(&unit(1), &x, inside, &op));
            let mu = measure(&[(0, q(1, 1)), (1, q(1, 2))]);
            assert!(!is_supported_on(&mu, &x, inside, &op));
            let pruned = measure(&[(0, q(1, 1)), (1, q(0, 1))]);
            assert!(is_supported_on(&pruned, &x, inside, &op));
        }
    }

    fn point_measure(n: usize) -> impl Strategy<Value = PointMeasure<Exact>> {
        (prop::collection::vec(0i64..=4, n), 0..n).prop_map(move |(mut raw, peak)| {
            raw[peak] = 4;
            StarMeasure::new(raw.into_iter().enumerate().map(|(x, k)| (x, q(k, 4)))).unwrap()
        })
    }

    #[test]
    fn monad_and_preimage_laws_with_faults() {
        let mu1 = measure(&[(0, q(1, 1)), (1, q(1, 2))]);
        let mu2 = measure(&[(0, q(1, 4)), (1, q(1, 1))]);
        let inner = StarMeasure::new([(mu1.clone(), q(1, 1)), (mu2.clone(), q(3, 4))]).unwrap();
        let other = StarMeasure::new([(mu2, q(1, 1))]).unwrap();
        let triple = StarMeasure::new([(inner, q(1, 1)), (other, q(1, 2))]).unwrap();
        let functions = UnitFunction::grid_functions(&space(2), 4);
        for op in [TNorm::Minimum, TNorm::Lukasiewicz] {
            let report = check_star_monad_laws(std::slice::from_ref(&triple), &functions, &op);
            assert!(report.is_clean(), "{report}");
        }
        // min-merging collisions keeps the laws but breaks the defining equation
        let inner = triple.support().max_by_key(|n| n.terms().len()).unwrap();
        let broken = inner.flatten_with(&TNorm::Minimum, Merge::Min);
        assert!(functions.iter().any(|f| {
            evaluate(&broken, f, &TNorm::Minimum) != inner.evaluate(|mu| evaluate(mu, f, &TNorm::Minimum), &TNorm::Minimum)
        }));

        let g = PointMap::new(space(3), space(2), vec![0, 0, 1]).unwrap();
        let mu = measure(&[(0, q(1, 1)), (1, q(1, 2))]);
        assert!(check_preimage_law(&g, std::slice::from_ref(&mu), &TNorm::Minimum).is_clean());
        let weak = measure(&[(0, q(1, 1)), (1, q(0, 1)), (2, q(1, 2))]);
        assert!(check_preimage_law(&g, &[weak], &TNorm::Product).is_clean());
    }

    proptest! {
        #[test]
        fn evaluate_preserves_joins_and_scalars(
            mu in point_measure(3),
            f in prop::collection::vec(0i64..=4, 3),
            g in prop::collection::vec(0i64..=4, 3),
            c in 0i64..=4,
        ) {
            let to_fn = |raw: Vec<i64>| UnitFunction::new(space(3), raw.into_iter().map(|k| q(k, 4)).collect()).unwrap();
            let (f, g) = (to_fn(f), to_fn(g));
            for op in [TNorm::Minimum, TNorm::Lukasiewicz, TNorm::Product] {
                prop_assert_eq!(evaluate(&mu, &f.join(&g), &op), evaluate(&mu, &f, &op).max(evaluate(&mu, &g, &op)));
                let c = q(c, 4);
                prop_assert_eq!(evaluate(&mu, &f.scale(c, &op), &op), op.apply(c, evaluate(&mu, &f, &op)));
            }
        }

        #[test]
        fn functor_laws(
            mu in point_measure(3),
            f in prop::collection::vec(0usize..3, 3),
            g in prop::collection::vec(0usize..2, 3),
        ) {
            let f = PointMap::new(space(3), space(3), f).unwrap();
            let g = PointMap::new(space(3), space(2), g).unwrap();
            prop_assert_eq!(functor_map(&PointMap::identity(&space(3)), &mu), mu.clone());
            prop_assert_eq!(
                functor_map(&f.then(&g).unwrap(), &mu),
                functor_map(&g, &functor_map(&f, &mu))
            );
        }

        #[test]
        fn structural_and_extensional_equality_agree(a in point_measure(2), b in point_measure(2)) {
            let same = UnitFunction::<Exact>::grid_functions(&space(2), 4)
                .iter()
                .all(|f| evaluate(&a, f, &TNorm::Minimum) == evaluate(&b, f, &TNorm::Minimum));
            prop_assert_eq!(same, a == b);
        }
    }
}

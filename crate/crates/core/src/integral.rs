//! The t-normed integral and the functionals it represents.
//!
//! For a capacity `nu`, a t-norm `*` and `f: X -> [0, 1]`, the integral is
//! the largest value of `nu(f >= t) * t` over thresholds `t`. On a finite
//! space `nu(f >= t)` is a step function of `t` that only changes at the
//! values of `f`, and `t -> nu(f >= t) * t` is nondecreasing between jumps,
//! so the maximum is attained at one of the values of `f`.

use crate::capacity::{Capacity, PossibilityDistribution};
use crate::error::{Error, Result};
use crate::report::LawReport;
use crate::space::{FiniteSpace, SubsetMask};
use crate::tnorm::TNorm;
use crate::unit::{grid_values, Scalar};
use crate::variant::Threshold;

/// A function `X -> [0, 1]` on a finite space.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UnitFunction<S> {
    space: FiniteSpace,
    values: Vec<S>,
}

impl<S: Scalar> UnitFunction<S> {
    pub fn new(space: FiniteSpace, values: Vec<S>) -> Result<Self> {
        if values.len() != space.len() {
            return Err(Error::Invalid(format!(
                "function needs {} values, got {}",
                space.len(),
                values.len()
            )));
        }
        if let Some(bad) = values.iter().find(|v| !v.is_unit()) {
            return Err(Error::OutOfRange(bad.to_string()));
        }
        Ok(UnitFunction { space, values })
    }

    pub fn constant(space: FiniteSpace, c: S) -> Self {
        let values = vec![c; space.len()];
        UnitFunction { space, values }
    }

    /// Characteristic function of `subset`.
    pub fn indicator(space: FiniteSpace, subset: SubsetMask) -> Self {
        let values = (0..space.len())
            .map(|i| if subset.contains(i) { S::one() } else { S::zero() })
            .collect();
        UnitFunction { space, values }
    }

    /// All `(n + 1)^|X|` functions with values on the grid of resolution `n`.
    pub fn grid_functions(space: &FiniteSpace, n: u32) -> Vec<Self> {
        let grid: Vec<S> = grid_values(n);
        let k = grid.len();
        let total = k.pow(space.len() as u32);
        (0..total)
            .map(|mut code| {
                let values = (0..space.len())
                    .map(|_| {
                        let v = grid[code % k];
                        code /= k;
                        v
                    })
                    .collect();
                UnitFunction { space: space.clone(), values }
            })
            .collect()
    }

    pub fn space(&self) -> &FiniteSpace {
        &self.space
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    #[inline]
    pub fn at(&self, i: usize) -> S {
        self.values[i]
    }

    /// Pointwise maximum.
    pub fn join(&self, other: &Self) -> Self {
        let values = self.values.iter().zip(&other.values).map(|(a, b)| (*a).max(*b)).collect();
        UnitFunction { space: self.space.clone(), values }
    }

    /// `c_X * f`.
    pub fn scale(&self, c: S, op: &TNorm<S>) -> Self {
        let values = self.values.iter().map(|&v| op.apply(c, v)).collect();
        UnitFunction { space: self.space.clone(), values }
    }

    /// Pointwise `self <= other`.
    pub fn le(&self, other: &Self) -> bool {
        self.values.iter().zip(&other.values).all(|(a, b)| a <= b)
    }
}

/// `{ x | f(x) >= t }`.
pub fn superlevel<S: Scalar>(f: &UnitFunction<S>, t: S) -> SubsetMask {
    superlevel_with(f, t, Threshold::Inclusive)
}

pub(crate) fn superlevel_with<S: Scalar>(f: &UnitFunction<S>, t: S, mode: Threshold) -> SubsetMask {
    SubsetMask::from_points((0..f.values.len()).filter(|&i| mode.passes(f.values[i], t)))
}

/// Value of the integral plus the threshold and level set attaining it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegralReport<S> {
    pub value: S,
    pub threshold: S,
    pub level_set: SubsetMask,
}

/// The t-normed integral of `f` against `nu`, with the attaining threshold.
/// Ties go to the smallest threshold.
pub fn integrate<S: Scalar>(nu: &Capacity<S>, f: &UnitFunction<S>, op: &TNorm<S>) -> IntegralReport<S> {
    integrate_with(nu, f, op, Threshold::Inclusive)
}

pub(crate) fn integrate_with<S: Scalar>(
    nu: &Capacity<S>,
    f: &UnitFunction<S>,
    op: &TNorm<S>,
    mode: Threshold,
) -> IntegralReport<S> {
    assert_eq!(nu.space(), f.space(), "integrand and capacity live on different spaces");
    let mut thresholds: Vec<S> = f.values.iter().copied().filter(|&v| v > S::zero()).collect();
    thresholds.sort();
    thresholds.dedup();
    let mut best = IntegralReport {
        value: S::zero(),
        threshold: S::zero(),
        level_set: nu.space().full(),
    };
    for t in thresholds {
        let level_set = superlevel_with(f, t, mode);
        let value = op.apply(nu.value(level_set), t);
        if value > best.value {
            best = IntegralReport { value, threshold: t, level_set };
        }
    }
    best
}

/// `max_x d(x) * f(x)`: the integral against a possibility capacity.
pub fn integrate_possibility_fast<S: Scalar>(
    d: &PossibilityDistribution<S>,
    f: &UnitFunction<S>,
    op: &TNorm<S>,
) -> S {
    d.density()
        .iter()
        .zip(f.values())
        .map(|(&w, &v)| op.apply(w, v))
        .max()
        .unwrap_or(S::zero())
}

/// Whether `f` and `g` are never ordered oppositely at two points.
pub fn comonotone<S: Scalar>(f: &UnitFunction<S>, g: &UnitFunction<S>) -> bool {
    let n = f.values.len();
    for i in 0..n {
        for j in i + 1..n {
            let df = f.at(i).cmp(&f.at(j));
            let dg = g.at(i).cmp(&g.at(j));
            if df != dg && df.is_ne() && dg.is_ne() {
                return false;
            }
        }
    }
    true
}

/// A functional on `[0, 1]`-valued functions over a fixed space.
pub trait Functional<S: Scalar> {
    fn space(&self) -> &FiniteSpace;
    fn eval(&self, f: &UnitFunction<S>) -> S;
}

/// `f -> integral of f against nu`.
#[derive(Clone)]
pub struct IntegralFunctional<S> {
    pub capacity: Capacity<S>,
    pub op: TNorm<S>,
}

impl<S: Scalar> std::fmt::Debug for IntegralFunctional<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("IntegralFunctional")
            .field("capacity", &self.capacity)
            .field("op", &self.op)
            .finish()
    }
}

impl<S: Scalar> IntegralFunctional<S> {
    pub fn new(capacity: Capacity<S>, op: TNorm<S>) -> Self {
        IntegralFunctional { capacity, op }
    }
}

impl<S: Scalar> Functional<S> for IntegralFunctional<S> {
    fn space(&self) -> &FiniteSpace {
        self.capacity.space()
    }

    fn eval(&self, f: &UnitFunction<S>) -> S {
        integrate(&self.capacity, f, &self.op).value
    }
}

/// Wraps an arbitrary closure as a functional.
pub struct FnFunctional<F> {
    space: FiniteSpace,
    f: F,
}

impl<F> FnFunctional<F> {
    pub fn new(space: FiniteSpace, f: F) -> Self {
        FnFunctional { space, f }
    }
}

impl<S: Scalar, F: Fn(&UnitFunction<S>) -> S> Functional<S> for FnFunctional<F> {
    fn space(&self) -> &FiniteSpace {
        &self.space
    }

    fn eval(&self, f: &UnitFunction<S>) -> S {
        (self.f)(f)
    }
}

/// Checks the three defining conditions of the class of comonotonically
/// maxitive, `*`-homogeneous normalized functionals on the given samples.
pub fn check_tstar_axioms<S: Scalar>(
    mu: &dyn Functional<S>,
    samples: &[UnitFunction<S>],
    constants: &[S],
    op: &TNorm<S>,
) -> LawReport {
    let mut report = LawReport::default();
    let space = mu.space().clone();
    let top = mu.eval(&UnitFunction::constant(space, S::one()));
    report.record(top.approx_eq(S::one()), "normalization", || ("1_X".into(), top.to_string(), "1".into()));
    let values: Vec<S> = samples.iter().map(|f| mu.eval(f)).collect();
    for (i, f) in samples.iter().enumerate() {
        for (j, g) in samples.iter().enumerate().skip(i + 1) {
            if comonotone(f, g) {
                let lhs = mu.eval(&f.join(g));
                let rhs = values[i].max(values[j]);
                report.record(lhs.approx_eq(rhs), "comonotone maxitivity", || {
                    (format!("f = {:?}, g = {:?}", f.values, g.values), format!("mu(f v g) = {lhs}"), format!("mu(f) v mu(g) = {rhs}"))
                });
            }
        }
        for &c in constants {
            let lhs = mu.eval(&f.scale(c, op));
            let rhs = op.apply(c, values[i]);
            report.record(lhs.approx_eq(rhs), "homogeneity", || {
                (format!("c = {c}, f = {:?}", f.values), format!("mu(c * f) = {lhs}"), format!("c * mu(f) = {rhs}"))
            });
        }
    }
    report
}

/// First pair of samples on which `mu` fails to preserve maxima.
pub fn maxitivity_violation<S: Scalar>(
    mu: &dyn Functional<S>,
    samples: &[UnitFunction<S>],
) -> Option<(usize, usize)> {
    let values: Vec<S> = samples.iter().map(|f| mu.eval(f)).collect();
    for i in 0..samples.len() {
        for j in i + 1..samples.len() {
            let lhs = mu.eval(&samples[i].join(&samples[j]));
            if !lhs.approx_eq(values[i].max(values[j])) {
                return Some((i, j));
            }
        }
    }
    None
}

/// Whether `mu` preserves maxima on every pair of samples, comonotone or not.
pub fn is_star_measure<S: Scalar>(mu: &dyn Functional<S>, samples: &[UnitFunction<S>]) -> bool {
    maxitivity_violation(mu, samples).is_none()
}

/// All `2^n` characteristic functions.
pub fn indicator_functions<S: Scalar>(space: &FiniteSpace) -> Vec<UnitFunction<S>> {
    space.subsets().map(|a| UnitFunction::indicator(space.clone(), a)).collect()
}

/// For a capacity that is not a possibility capacity, a pair of indicators
/// `(chi_A, chi_B)` whose join integrates strictly above the join of their
/// integrals. `None` for possibility capacities.
///
/// A smallest non-maxitive set `A` splits as `{a}` and `A \ {a}`, and both
/// halves are maxitive, so scanning single-point splits always finds one.
pub fn characterization_witness<S: Scalar>(
    nu: &Capacity<S>,
    op: &TNorm<S>,
) -> Option<(UnitFunction<S>, UnitFunction<S>)> {
    let space = nu.space();
    for a in space.subsets() {
        if a.len() < 2 {
            continue;
        }
        let low = a.lowest().expect("nonempty");
        let (left, right) = (SubsetMask::singleton(low), a.without(low));
        if nu.value(a).approx_le(nu.value(left).max(nu.value(right))) {
            continue;
        }
        let f = UnitFunction::indicator(space.clone(), left);
        let g = UnitFunction::indicator(space.clone(), right);
        let joined = integrate(nu, &f.join(&g), op).value;
        let separate = integrate(nu, &f, op).value.max(integrate(nu, &g, op).value);
        if separate < joined && !joined.approx_eq(separate) {
            return Some((f, g));
        }
    }
    None
}

/// Reads a capacity off a functional by evaluating it on indicators,
/// `nu(A) = mu(chi_A)`.
pub fn capacity_from_functional<S: Scalar>(mu: &dyn Functional<S>) -> Result<Capacity<S>> {
    let space = mu.space().clone();
    let values = space
        .subsets()
        .map(|a| mu.eval(&UnitFunction::indicator(space.clone(), a)))
        .collect();
    Capacity::new(space, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::unit::{Approx, Exact};
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Exact {
        Exact::new(n, d)
    }

    fn space(n: usize) -> FiniteSpace {
        FiniteSpace::indexed(n)
    }

    fn func(vals: &[Exact]) -> UnitFunction<Exact> {
        UnitFunction::new(space(vals.len()), vals.to_vec()).unwrap()
    }

    /// Integral by sweeping every threshold on a fine grid; independent of
    /// the distinct-value shortcut.
    fn sweep_oracle(nu: &Capacity<Exact>, f: &UnitFunction<Exact>, op: &TNorm<Exact>, n: u32) -> Exact {
        grid_values::<Exact>(n)
            .into_iter()
            .map(|t| {
                let level = SubsetMask::from_points((0..f.values().len()).filter(|&i| f.at(i) >= t));
                op.apply(nu.value(level), t)
            })
            .max()
            .unwrap()
    }

    fn half_half() -> Capacity<Exact> {
        Capacity::new(space(2), vec![q(0, 1), q(1, 2), q(1, 2), q(1, 1)]).unwrap()
    }

    #[test]
    fn superlevel_examples() {
        let f = func(&[q(1, 5), q(4, 5)]);
        assert_eq!(superlevel(&f, Exact::zero()), f.space().full());
        assert_eq!(superlevel(&f, q(1, 2)), SubsetMask(2));
        let chi = UnitFunction::<Exact>::indicator(space(3), SubsetMask(5));
        assert_eq!(superlevel(&chi, Exact::one()), SubsetMask(5));
    }

    #[test]
    fn integrate_examples() {
        let nu = half_half();
        let c = UnitFunction::constant(space(2), q(2, 5));
        for name in TNorm::<Exact>::NAMES {
            let op = TNorm::by_name(name).unwrap();
            assert_eq!(integrate(&nu, &c, &op).value, q(2, 5));
        }

        let dirac = Capacity::dirac(space(2), 1);
        let f = func(&[q(1, 5), q(4, 5)]);
        assert_eq!(integrate(&dirac, &f, &TNorm::Product).value, q(4, 5));

        let d = PossibilityDistribution::new(space(3), vec![q(1, 1), q(1, 2), q(1, 4)]).unwrap();
        let f = func(&[q(1, 5), q(4, 5), q(1, 1)]);
        // Oracle: sweep over the 1/20 grid, which contains every value involved.
        let expected = sweep_oracle(&d.capacity(), &f, &TNorm::Product, 20);
        assert_eq!(expected, q(2, 5));
        let report = integrate(&d.capacity(), &f, &TNorm::Product);
        assert_eq!(report.value, q(2, 5));
        assert_eq!(report.value, TNorm::Product.apply(d.capacity().value(report.level_set), report.threshold));

        assert_eq!(integrate_possibility_fast(&d, &f, &TNorm::Product), q(2, 5));
        // Sugeno form: max_x min(d(x), f(x)).
        let sugeno = d.density().iter().zip(f.values()).map(|(a, b)| (*a).min(*b)).max().unwrap();
        assert_eq!(sugeno, q(1, 2));
        assert_eq!(integrate_possibility_fast(&d, &f, &TNorm::Minimum), q(1, 2));
        let dd = PossibilityDistribution::dirac(space(3), 2);
        assert_eq!(integrate_possibility_fast(&dd, &f, &TNorm::Lukasiewicz), q(1, 1));
    }

    #[test]
    fn comonotone_examples() {
        let f = func(&[q(1, 10), q(9, 10)]);
        assert!(comonotone(&f, &UnitFunction::constant(space(2), q(1, 3))));
        assert!(comonotone(&f, &func(&[q(1, 5), q(7, 10)])));
        assert!(!comonotone(&f, &func(&[q(7, 10), q(1, 5)])));
    }

    #[test]
    fn tstar_axioms_hold_for_every_capacity_on_two_points() {
        let samples = UnitFunction::grid_functions(&space(2), 4);
        let constants = grid_values::<Exact>(4);
        for a in 0..=4 {
            for b in 0..=4 {
                let nu = Capacity::new(space(2), vec![q(0, 1), q(a, 4), q(b, 4), q(1, 1)]).unwrap();
                for name in ["min", "lukasiewicz"] {
                    let op = TNorm::by_name(name).unwrap();
                    let mu = IntegralFunctional::new(nu.clone(), op.clone());
                    let report = check_tstar_axioms(&mu, &samples, &constants, &op);
                    assert!(report.is_clean(), "{name} {a} {b}: {report}");
                    assert_eq!(mu.eval(&UnitFunction::constant(space(2), Exact::zero())), Exact::zero());
                }
            }
        }
    }

    #[test]
    fn star_measure_and_witness() {
        let samples = indicator_functions::<Exact>(&space(2));
        let op = TNorm::Minimum;
        let d = PossibilityDistribution::new(space(2), vec![q(1, 1), q(1, 2)]).unwrap();
        let grid = UnitFunction::grid_functions(&space(2), 4);
        assert!(is_star_measure(&IntegralFunctional::new(d.capacity(), op.clone()), &grid));
        assert!(!is_star_measure(&IntegralFunctional::new(half_half(), op.clone()), &samples));
        assert!(is_star_measure(&IntegralFunctional::new(Capacity::dirac(space(2), 0), op.clone()), &grid));

        let (f, g) = characterization_witness(&half_half(), &op).unwrap();
        assert_eq!(f.values(), &[q(1, 1), q(0, 1)]);
        assert_eq!(g.values(), &[q(0, 1), q(1, 1)]);
        assert!(characterization_witness(&d.capacity(), &op).is_none());
        assert!(characterization_witness(&Capacity::dirac(space(3), 1), &op).is_none());
    }

    #[test]
    fn recovery_from_functionals() {
        let nu = half_half();
        let mu = IntegralFunctional::new(nu.clone(), TNorm::Lukasiewicz);
        assert_eq!(capacity_from_functional(&mu).unwrap(), nu);

        let eval_at_1 = FnFunctional::new(space(3), |f: &UnitFunction<Exact>| f.at(1));
        assert_eq!(capacity_from_functional(&eval_at_1).unwrap(), Capacity::dirac(space(3), 1));

        // drops below the value on a smaller indicator
        let bad = FnFunctional::new(space(3), |f: &UnitFunction<Exact>| {
            if f.values() == [Exact::one(), Exact::one(), Exact::zero()] {
                q(1, 2)
            } else {
                f.values().iter().copied().max().unwrap()
            }
        });
        assert!(capacity_from_functional(&bad).is_err());
    }

    #[test]
    fn product_under_float() {
        let d = PossibilityDistribution::new(space(3), vec![Approx(1.0), Approx(0.5), Approx(0.25)]).unwrap();
        let f = UnitFunction::new(space(3), vec![Approx(0.2), Approx(0.8), Approx(1.0)]).unwrap();
        let v = integrate(&d.capacity(), &f, &TNorm::Product).value;
        assert!(v.approx_eq(Approx(0.4)));
    }

    fn capacity3() -> impl Strategy<Value = Capacity<Exact>> {
        prop::collection::vec(0i64..=4, 6).prop_filter_map("monotone", |raw| {
            let mut values = vec![q(0, 1); 8];
            values[7] = q(1, 1);
            for (slot, k) in [1usize, 2, 3, 4, 5, 6].into_iter().zip(raw) {
                values[slot] = q(k, 4);
            }
            Capacity::new(space(3), values).ok()
        })
    }

    fn function3() -> impl Strategy<Value = UnitFunction<Exact>> {
        prop::collection::vec(0i64..=4, 3)
            .prop_map(|raw| func(&raw.into_iter().map(|k| q(k, 4)).collect::<Vec<_>>()))
    }

    proptest! {
        #[test]
        fn integral_matches_threshold_sweep(nu in capacity3(), f in function3(), k in 0usize..3) {
            let op = TNorm::by_name(TNorm::<Exact>::NAMES[k]).unwrap();
            prop_assert_eq!(integrate(&nu, &f, &op).value, sweep_oracle(&nu, &f, &op, 16));
        }

        #[test]
        fn integral_is_monotone_and_homogeneous(nu in capacity3(), f in function3(), g in function3(), c in 0i64..=4) {
            let op = TNorm::Lukasiewicz;
            let hi = f.join(&g);
            prop_assert!(integrate(&nu, &f, &op).value <= integrate(&nu, &hi, &op).value);
            let c = q(c, 4);
            prop_assert_eq!(integrate(&nu, &f.scale(c, &op), &op).value, op.apply(c, integrate(&nu, &f, &op).value));
        }

        #[test]
        fn indicator_identity(nu in capacity3(), mask in 0u32..8) {
            let chi = UnitFunction::indicator(space(3), SubsetMask(mask));
            prop_assert_eq!(integrate(&nu, &chi, &TNorm::Minimum).value, nu.value(SubsetMask(mask)));
        }
    }
}

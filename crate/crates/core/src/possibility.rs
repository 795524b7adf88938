//! The possibility monad `(Pi, eta, mu)` on finite models and its
//! isomorphism `l` onto the functional monad of max-`*` measures.
//!
//! Elements of `Pi^2 X` are kept finitely supported: an [`OuterPossibility`]
//! is a normal form `V_i lambda_i * delta_{nu_i}` whose carriers are
//! possibility densities. One more level, [`NestedOuter`], is enough for
//! associativity.

use std::fmt;

use crate::capacity::{Capacity, PossibilityDistribution};
use crate::error::{Error, Result};
use crate::integral::{integrate_with, UnitFunction};
use crate::report::LawReport;
use crate::space::{FiniteSpace, PointMap, SubsetMask};
use crate::star::{self, PointMeasure, StarMeasure};
use crate::tnorm::TNorm;
use crate::unit::Scalar;
use crate::variant::{Kernel, Threshold};

/// Enumerating subsets of the support union of a three-level instance is
/// capped at this many distinct inner distributions.
pub const MAX_NESTED_SUPPORT: usize = 16;

/// `eta_X(x)`: the Dirac density at `x`.
pub fn eta<S: Scalar>(space: &FiniteSpace, x: usize) -> PossibilityDistribution<S> {
    PossibilityDistribution::dirac(space.clone(), x)
}

/// A finitely supported element of `Pi^2 X`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OuterPossibility<S> {
    space: FiniteSpace,
    measure: StarMeasure<Vec<S>, S>,
}

impl<S: Scalar> OuterPossibility<S> {
    pub fn new(space: FiniteSpace, terms: Vec<(PossibilityDistribution<S>, S)>) -> Result<Self> {
        if terms.iter().any(|(nu, _)| nu.space() != &space) {
            return Err(Error::SpaceMismatch);
        }
        let measure = StarMeasure::new(terms.into_iter().map(|(nu, w)| (nu.density().to_vec(), w)))?;
        Ok(OuterPossibility { space, measure })
    }

    /// `delta_nu`.
    pub fn dirac(nu: &PossibilityDistribution<S>) -> Self {
        OuterPossibility {
            space: nu.space().clone(),
            measure: StarMeasure::dirac(nu.density().to_vec()),
        }
    }

    pub fn space(&self) -> &FiniteSpace {
        &self.space
    }

    /// Support distributions with their weights, in canonical order.
    pub fn terms(&self) -> Vec<(PossibilityDistribution<S>, S)> {
        self.measure
            .terms()
            .iter()
            .map(|(d, w)| (self.distribution(d), *w))
            .collect()
    }

    pub fn len(&self) -> usize {
        self.measure.terms().len()
    }

    pub fn is_empty(&self) -> bool {
        self.measure.terms().is_empty()
    }

    /// Weight of `nu` in the normal form, 0 off the support.
    pub fn weight_of(&self, nu: &PossibilityDistribution<S>) -> S {
        self.measure.weight_of(&nu.density().to_vec())
    }

    pub(crate) fn raw(&self) -> &[(Vec<S>, S)] {
        self.measure.terms()
    }

    fn distribution(&self, density: &[S]) -> PossibilityDistribution<S> {
        PossibilityDistribution::new(self.space.clone(), density.to_vec())
            .expect("canonical carriers are valid densities")
    }

    /// `Pi^2 g`: every inner distribution is pushed through `g`.
    pub fn pushforward(&self, g: &PointMap) -> Result<Self> {
        if g.source() != &self.space {
            return Err(Error::SpaceMismatch);
        }
        let terms = self
            .terms()
            .into_iter()
            .map(|(nu, w)| Ok((nu.pushforward(g)?, w)))
            .collect::<Result<Vec<_>>>()?;
        OuterPossibility::new(g.target().clone(), terms)
    }

    pub fn approx_eq(&self, other: &Self) -> bool {
        self.space == other.space && self.measure.approx_eq(&other.measure)
    }
}

impl<S: Scalar> fmt::Debug for OuterPossibility<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `1*(1 0.5) 0.75*(0.25 1)`.
impl<S: Scalar> fmt::Display for OuterPossibility<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (d, w)) in self.measure.terms().iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{w}*(")?;
            for (j, v) in d.iter().enumerate() {
                if j > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{v}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// `max { C(F_t) * t }` over thresholds `t` among the values, where
/// `C(F_t)` is the largest weight whose value passes `t`.
fn sweep<S: Scalar>(pairs: &[(S, S)], op: &TNorm<S>, mode: Threshold) -> S {
    let mut thresholds: Vec<S> = pairs.iter().map(|p| p.0).filter(|&v| v > S::zero()).collect();
    thresholds.sort();
    thresholds.dedup();
    thresholds
        .into_iter()
        .map(|t| {
            let level = pairs
                .iter()
                .filter(|(v, _)| mode.passes(*v, t))
                .map(|p| p.1)
                .max()
                .unwrap_or(S::zero());
            op.apply(level, t)
        })
        .max()
        .unwrap_or(S::zero())
}

/// `mu_X(C)(F)` by its definition as a maximum over thresholds.
pub fn mu<S: Scalar>(c: &OuterPossibility<S>, f: SubsetMask, op: &TNorm<S>) -> S {
    mu_with(c, f, op, Threshold::Inclusive)
}

pub(crate) fn mu_with<S: Scalar>(c: &OuterPossibility<S>, f: SubsetMask, op: &TNorm<S>, mode: Threshold) -> S {
    let pairs: Vec<(S, S)> = c
        .raw()
        .iter()
        .map(|(d, w)| (f.points().map(|x| d[x]).max().unwrap_or(S::zero()), *w))
        .collect();
    sweep(&pairs, op, mode)
}

/// `max_i lambda_i * nu_i(F)`.
pub fn mu_closed_form<S: Scalar>(c: &OuterPossibility<S>, f: SubsetMask, op: &TNorm<S>) -> S {
    c.raw()
        .iter()
        .map(|(d, w)| op.apply(*w, f.points().map(|x| d[x]).max().unwrap_or(S::zero())))
        .max()
        .unwrap_or(S::zero())
}

/// The full table of `mu_X(C)`.
pub fn mu_capacity<S: Scalar>(c: &OuterPossibility<S>, op: &TNorm<S>) -> Result<Capacity<S>> {
    mu_capacity_with(c, op, Threshold::Inclusive)
}

pub(crate) fn mu_capacity_with<S: Scalar>(
    c: &OuterPossibility<S>,
    op: &TNorm<S>,
    mode: Threshold,
) -> Result<Capacity<S>> {
    Capacity::from_fn(c.space.clone(), |f| mu_with(c, f, op, mode))
}

/// `mu_X(C)` read back as a density.
pub fn mu_distribution<S: Scalar>(c: &OuterPossibility<S>, op: &TNorm<S>) -> Result<PossibilityDistribution<S>> {
    mu_distribution_with(c, op, Threshold::Inclusive)
}

fn mu_distribution_with<S: Scalar>(
    c: &OuterPossibility<S>,
    op: &TNorm<S>,
    mode: Threshold,
) -> Result<PossibilityDistribution<S>> {
    mu_capacity_with(c, op, mode)?
        .to_distribution()
        .ok_or_else(|| Error::Invalid("multiplication left the possibility capacities".into()))
}

/// A finitely supported element of `Pi^3 X`.
#[derive(Clone, PartialEq, Eq)]
pub struct NestedOuter<S> {
    space: FiniteSpace,
    measure: StarMeasure<OuterPossibility<S>, S>,
}

impl<S: Scalar> NestedOuter<S> {
    pub fn new(space: FiniteSpace, terms: Vec<(OuterPossibility<S>, S)>) -> Result<Self> {
        if terms.iter().any(|(c, _)| c.space() != &space) {
            return Err(Error::SpaceMismatch);
        }
        Ok(NestedOuter { space, measure: StarMeasure::new(terms)? })
    }

    pub fn dirac(c: &OuterPossibility<S>) -> Self {
        NestedOuter { space: c.space().clone(), measure: StarMeasure::dirac(c.clone()) }
    }

    pub fn space(&self) -> &FiniteSpace {
        &self.space
    }

    pub fn terms(&self) -> &[(OuterPossibility<S>, S)] {
        self.measure.terms()
    }
}

impl<S: Scalar> fmt::Debug for NestedOuter<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (c, w)) in self.terms().iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{w}*[{c}]")?;
        }
        Ok(())
    }
}

/// `mu_{Pi X}(C)`: the multiplication one level up, computed by the same
/// threshold sweep on every subset of the distributions occurring in `C`.
pub fn mu_outer<S: Scalar>(c: &NestedOuter<S>, op: &TNorm<S>) -> Result<OuterPossibility<S>> {
    mu_outer_with(c, op, Kernel::REFERENCE)
}

pub(crate) fn mu_outer_with<S: Scalar>(c: &NestedOuter<S>, op: &TNorm<S>, kernel: Kernel) -> Result<OuterPossibility<S>> {
    let mut union: Vec<&Vec<S>> = c.terms().iter().flat_map(|(inner, _)| inner.raw().iter().map(|(d, _)| d)).collect();
    union.sort();
    union.dedup();
    if union.len() > MAX_NESTED_SUPPORT {
        return Err(Error::ResourceBound(format!(
            "{} inner distributions exceed the cap of {MAX_NESTED_SUPPORT}",
            union.len()
        )));
    }
    // weights[k][u]: weight of union[u] in the k-th outer possibility
    let weights: Vec<Vec<S>> = c
        .terms()
        .iter()
        .map(|(inner, _)| union.iter().map(|d| inner.measure.weight_of(d)).collect())
        .collect();
    let value = |s: u32| {
        let pairs: Vec<(S, S)> = weights
            .iter()
            .zip(c.terms())
            .map(|(w, (_, gamma))| {
                let level = SubsetMask(s).points().map(|u| w[u]).max().unwrap_or(S::zero());
                (level, *gamma)
            })
            .collect();
        sweep(&pairs, op, kernel.threshold)
    };
    let singles: Vec<S> = (0..union.len()).map(|u| value(1 << u)).collect();
    for s in 1u32..(1 << union.len()) {
        let expected = SubsetMask(s).points().map(|u| singles[u]).max().unwrap_or(S::zero());
        if !value(s).approx_eq(expected) {
            return Err(Error::Invalid("multiplication left the possibility capacities".into()));
        }
    }
    let terms = union.iter().zip(&singles).map(|(d, w)| ((*d).clone(), *w)).collect();
    let measure = StarMeasure::from_terms(terms, kernel.merge);
    normalized(c.space.clone(), measure)
}

fn normalized<S: Scalar>(space: FiniteSpace, measure: StarMeasure<Vec<S>, S>) -> Result<OuterPossibility<S>> {
    let top = measure.terms().iter().map(|t| t.1).max().unwrap_or(S::zero());
    if !top.approx_eq(S::one()) {
        return Err(Error::Normalization(format!("weights peak at {top}, not 1")));
    }
    Ok(OuterPossibility { space, measure })
}

/// `Pi(mu_X)(C)`: each outer possibility in `C` is multiplied down.
pub fn push_mu<S: Scalar>(c: &NestedOuter<S>, op: &TNorm<S>) -> Result<OuterPossibility<S>> {
    push_mu_with(c, op, Kernel::REFERENCE)
}

pub(crate) fn push_mu_with<S: Scalar>(c: &NestedOuter<S>, op: &TNorm<S>, kernel: Kernel) -> Result<OuterPossibility<S>> {
    let terms = c
        .terms()
        .iter()
        .map(|(inner, w)| Ok((mu_distribution_with(inner, op, kernel.threshold)?.density().to_vec(), *w)))
        .collect::<Result<Vec<_>>>()?;
    normalized(c.space.clone(), StarMeasure::from_terms(terms, kernel.merge))
}

/// `Pi(eta_X)(nu)`: weight `d(x)` on `eta(x)`.
pub fn push_eta<S: Scalar>(nu: &PossibilityDistribution<S>) -> OuterPossibility<S> {
    let space = nu.space();
    let terms = (0..space.len())
        .map(|x| (eta(space, x), nu.density()[x]))
        .collect();
    OuterPossibility::new(space.clone(), terms).expect("a density peaks at 1")
}

/// `Pi(eta_{Pi X})(C)`: weight `lambda_i` on `delta_{nu_i}`.
pub fn push_eta_outer<S: Scalar>(c: &OuterPossibility<S>) -> NestedOuter<S> {
    let terms = c
        .terms()
        .into_iter()
        .map(|(nu, w)| (OuterPossibility::dirac(&nu), w))
        .collect();
    NestedOuter::new(c.space.clone(), terms).expect("weights of a normal form peak at 1")
}

/// `l_X(nu)`: the measure `f -> integral of f against nu`, transcribed as
/// the normal form with the density as weights.
pub fn iso_l<S: Scalar>(nu: &PossibilityDistribution<S>) -> PointMeasure<S> {
    StarMeasure::new(nu.density().iter().copied().enumerate()).expect("a density peaks at 1")
}

/// Inverse of [`iso_l`].
pub fn iso_l_inverse<S: Scalar>(mu: &PointMeasure<S>, space: &FiniteSpace) -> Result<PossibilityDistribution<S>> {
    star::to_distribution(mu, space)
}

/// `l_{A* X}(Pi(l_X)(C))`: the outer level transported to nested normal forms.
pub fn iso_l_outer<S: Scalar>(c: &OuterPossibility<S>) -> StarMeasure<PointMeasure<S>, S> {
    StarMeasure::new(c.terms().into_iter().map(|(nu, w)| (iso_l(&nu), w))).expect("weights of a normal form peak at 1")
}

/// Unit laws at both levels and associativity, each compared as a full
/// capacity table (or normal form one level up).
pub fn check_monad_laws<S: Scalar>(instances: &[NestedOuter<S>], op: &TNorm<S>) -> LawReport {
    check_monad_laws_with(instances, op, Kernel::REFERENCE)
}

pub(crate) fn check_monad_laws_with<S: Scalar>(instances: &[NestedOuter<S>], op: &TNorm<S>, k: Kernel) -> LawReport {
    let mut report = LawReport::default();
    let table = |c: &OuterPossibility<S>| mu_capacity_with(c, op, k.threshold);
    for c3 in instances {
        for (c2, _) in c3.terms() {
            for (nu, _) in c2.terms() {
                let expected = nu.capacity();
                for (law, outer) in [("mu . eta_Pi = id", OuterPossibility::dirac(&nu)), ("mu . Pi eta = id", push_eta(&nu))] {
                    let got = table(&outer);
                    report.record(got.as_ref().is_ok_and(|t| t.approx_eq(&expected)), law, || {
                        (format!("nu = {:?}", nu.density()), describe(&got), format!("{:?}", expected.values()))
                    });
                }
            }
            for (law, nested) in [
                ("mu_Pi . eta_Pi2 = id", NestedOuter::dirac(c2)),
                ("mu_Pi . Pi eta_Pi = id", push_eta_outer(c2)),
            ] {
                let got = mu_outer_with(&nested, op, k);
                report.record(got.as_ref().is_ok_and(|g| g.approx_eq(c2)), law, || {
                    (format!("C = {c2}"), format!("{got:?}"), c2.to_string())
                });
            }
        }
        let left = mu_outer_with(c3, op, k).and_then(|c| table(&c));
        let right = push_mu_with(c3, op, k).and_then(|c| table(&c));
        let ok = matches!((&left, &right), (Ok(a), Ok(b)) if a.approx_eq(b));
        report.record(ok, "mu . mu_Pi = mu . Pi mu", || {
            (format!("C = {c3:?}"), describe(&left), describe(&right))
        });
    }
    report
}

fn describe<S: Scalar>(table: &Result<Capacity<S>>) -> String {
    match table {
        Ok(t) => format!("{:?}", t.values()),
        Err(e) => format!("error: {e}"),
    }
}

/// `l . eta = h` at every point and `l . mu = m . l_{A*} . Pi(l)` on every
/// instance, both compared by evaluating on `functions`.
pub fn check_morphism_laws<S: Scalar>(
    space: &FiniteSpace,
    instances: &[OuterPossibility<S>],
    functions: &[UnitFunction<S>],
    op: &TNorm<S>,
) -> LawReport {
    check_morphism_laws_with(space, instances, functions, op, Kernel::REFERENCE)
}

pub(crate) fn check_morphism_laws_with<S: Scalar>(
    space: &FiniteSpace,
    instances: &[OuterPossibility<S>],
    functions: &[UnitFunction<S>],
    op: &TNorm<S>,
    k: Kernel,
) -> LawReport {
    let mut report = LawReport::default();
    for x in 0..space.len() {
        let dirac = eta::<S>(space, x).capacity();
        for f in functions {
            let left = integrate_with(&dirac, f, op, k.threshold).value;
            report.record(left.approx_eq(f.at(x)), "l . eta = h", || {
                (format!("x = {}, f = {:?}", space.label(x), f.values()), left.to_string(), f.at(x).to_string())
            });
        }
    }
    for c in instances {
        let table = mu_capacity_with(c, op, k.threshold);
        let flat = iso_l_outer(c).flatten_with(op, k.merge);
        for f in functions {
            let right = star::evaluate(&flat, f, op);
            let left = table.as_ref().map(|t| integrate_with(t, f, op, k.threshold).value);
            report.record(left.as_ref().is_ok_and(|l| l.approx_eq(right)), "l . mu = m . l . Pi l", || {
                let left = match &left {
                    Ok(v) => v.to_string(),
                    Err(e) => format!("error: {e}"),
                };
                (format!("C = {c}, f = {:?}", f.values()), left, right.to_string())
            });
        }
    }
    report
}

//! Continuous t-norms, their residua, and grid-level law checks.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::unit::{grid_values, GridPolicy, Policy, Scalar};

/// A continuous triangular norm.
#[derive(Clone)]
pub enum TNorm<S> {
    Minimum,
    Product,
    Lukasiewicz,
    /// A tabulated t-norm, bilinearly interpolated between grid nodes.
    Table(Arc<TnormTable<S>>),
}

impl<S: Scalar> fmt::Debug for TNorm<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl<S: Scalar> TNorm<S> {
    pub const NAMES: [&'static str; 3] = ["min", "product", "lukasiewicz"];

    pub fn by_name(name: &str) -> Result<Self> {
        match name.trim().to_ascii_lowercase().as_str() {
            "min" | "minimum" => Ok(TNorm::Minimum),
            "product" | "prod" => Ok(TNorm::Product),
            "lukasiewicz" | "luk" => Ok(TNorm::Lukasiewicz),
            other => Err(Error::Usage(format!(
                "unknown t-norm `{other}` (expected min, product or lukasiewicz)"
            ))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            TNorm::Minimum => "min",
            TNorm::Product => "product",
            TNorm::Lukasiewicz => "lukasiewicz",
            TNorm::Table(_) => "table",
        }
    }

    #[inline]
    pub fn apply(&self, a: S, b: S) -> S {
        match self {
            TNorm::Minimum => a.min(b),
            TNorm::Product => a * b,
            TNorm::Lukasiewicz => (a + b - S::one()).max(S::zero()),
            TNorm::Table(table) => table.apply(a, b),
        }
    }

    /// `a * b` for values declared under `policy`.
    ///
    /// Fails when an argument is not admissible under the policy, or when the
    /// policy is an exact grid that this t-norm does not map into itself.
    pub fn apply_checked(&self, a: S, b: S, policy: &Policy) -> Result<S> {
        policy.admit(a)?;
        policy.admit(b)?;
        if let Policy::ExactGrid(n) = *policy {
            if !self.grid_policy(n).closed {
                return Err(Error::GridClosure { tnorm: self.name().into(), n });
            }
        }
        Ok(self.apply(a, b))
    }

    pub fn grid_policy(&self, n: u32) -> GridPolicy {
        match self {
            TNorm::Minimum | TNorm::Lukasiewicz => GridPolicy { n, closed: true },
            TNorm::Product => GridPolicy { n, closed: n == 1 },
            TNorm::Table(_) => GridPolicy::for_tnorm(n, self),
        }
    }

    /// `b(t, l) = inf { s | t <= s * l }`, defined for `t <= l`.
    pub fn residuum(&self, t: S, l: S) -> Result<S> {
        if t > l {
            return Err(Error::NoSolution { t: t.to_string(), l: l.to_string() });
        }
        Ok(match self {
            TNorm::Minimum => t,
            TNorm::Product => {
                if t == S::zero() {
                    S::zero()
                } else {
                    (t / l).min(S::one())
                }
            }
            TNorm::Lukasiewicz => {
                if t == S::zero() {
                    S::zero()
                } else {
                    (S::one() - l + t).min(S::one())
                }
            }
            TNorm::Table(table) => table.residuum(t, l)?,
        })
    }

    /// `sup { lambda | lambda * x <= y }`, the greatest weight that keeps
    /// `lambda * x` under `y`. Always exists since `0 * x = 0`.
    pub fn implication(&self, x: S, y: S) -> S {
        if x <= y {
            return S::one();
        }
        match self {
            TNorm::Minimum => y,
            TNorm::Product => y / x,
            TNorm::Lukasiewicz => (S::one() - x + y).min(S::one()),
            TNorm::Table(table) => table.implication(x, y),
        }
    }

    /// Associativity, commutativity, unit and monotonicity on every grid
    /// point of resolution `n`.
    pub fn check_axioms(&self, n: u32) -> Vec<AxiomViolation<S>> {
        let grid: Vec<S> = grid_values(n);
        let mut out = Vec::new();
        for &a in &grid {
            if !self.apply(a, S::one()).approx_eq(a) {
                out.push(AxiomViolation::new("unit", &[a, S::one()]));
            }
            for &b in &grid {
                let ab = self.apply(a, b);
                if !ab.approx_eq(self.apply(b, a)) {
                    out.push(AxiomViolation::new("commutativity", &[a, b]));
                }
                for &c in &grid {
                    if !self.apply(ab, c).approx_eq(self.apply(a, self.apply(b, c))) {
                        out.push(AxiomViolation::new("associativity", &[a, b, c]));
                    }
                    if b <= c && !(ab.approx_le(self.apply(a, c)) && self.apply(b, a).approx_le(self.apply(c, a))) {
                        out.push(AxiomViolation::new("monotonicity", &[a, b, c]));
                    }
                }
            }
        }
        out
    }

    /// `(t v s) * l = (t * l) v (s * l)` on each sample; returns the failing
    /// triples.
    pub fn check_distributivity(&self, samples: &[(S, S, S)]) -> Vec<(S, S, S)> {
        samples
            .iter()
            .copied()
            .filter(|&(t, s, l)| {
                let lhs = self.apply(t.max(s), l);
                let rhs = self.apply(t, l).max(self.apply(s, l));
                !lhs.approx_eq(rhs)
            })
            .collect()
    }
}

/// A failed t-norm axiom at specific arguments.
#[derive(Clone, Debug, PartialEq)]
pub struct AxiomViolation<S> {
    pub axiom: &'static str,
    pub args: Vec<S>,
}

impl<S: Scalar> AxiomViolation<S> {
    fn new(axiom: &'static str, args: &[S]) -> Self {
        AxiomViolation { axiom, args: args.to_vec() }
    }
}

/// All `(n + 1)^3` grid triples.
pub fn grid_triples<S: Scalar>(n: u32) -> Vec<(S, S, S)> {
    let grid: Vec<S> = grid_values(n);
    let mut out = Vec::with_capacity(grid.len().pow(3));
    for &a in &grid {
        for &b in &grid {
            for &c in &grid {
                out.push((a, b, c));
            }
        }
    }
    out
}

/// Generic residuum by bisection on `s`, for any monotone `op`.
///
/// Runs 64 halvings of `[0, 1]` keeping `op(hi, l) >= t`, then reports
/// non-convergence if `op(hi, l)` misses `t` by more than `1e-9`.
pub fn residuum_bisection(op: impl Fn(f64, f64) -> f64, t: f64, l: f64) -> Result<f64> {
    if op(1.0, l) < t {
        return Err(Error::NoSolution { t: t.to_string(), l: l.to_string() });
    }
    if op(0.0, l) >= t {
        return Ok(0.0);
    }
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..64 {
        let mid = 0.5 * (lo + hi);
        if op(mid, l) >= t {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let residual = (op(hi, l) - t).abs();
    if residual > 1e-9 {
        return Err(Error::NonConvergence { residual });
    }
    Ok(hi)
}

/// Square table of a t-norm on the nodes `i/m`, interpolated bilinearly.
#[derive(Clone, Debug, PartialEq)]
pub struct TnormTable<S> {
    m: u32,
    entries: Vec<S>,
}

impl<S: Scalar> TnormTable<S> {
    /// `rows[i][j]` is the value at `(i/m, j/m)`. Only shape and range are
    /// checked here; use [`TNorm::check_axioms`] for the algebraic laws.
    pub fn new(rows: Vec<Vec<S>>) -> Result<Self> {
        let size = rows.len();
        if size < 2 {
            return Err(Error::Table("need at least a 2x2 table".into()));
        }
        if rows.iter().any(|r| r.len() != size) {
            return Err(Error::Table("table must be square".into()));
        }
        let entries: Vec<S> = rows.into_iter().flatten().collect();
        if let Some(bad) = entries.iter().find(|v| !v.is_unit()) {
            return Err(Error::Table(format!("entry {bad} outside [0, 1]")));
        }
        Ok(TnormTable { m: (size - 1) as u32, entries })
    }

    /// Tabulates `f` on the nodes of resolution `m`.
    pub fn tabulate(m: u32, f: impl Fn(S, S) -> S) -> Self {
        let nodes: Vec<S> = grid_values(m);
        let entries = nodes
            .iter()
            .flat_map(|&a| nodes.iter().map(move |&b| (a, b)))
            .map(|(a, b)| f(a, b))
            .collect();
        TnormTable { m, entries }
    }

    pub fn resolution(&self) -> u32 {
        self.m
    }

    pub fn rows(&self) -> impl Iterator<Item = &[S]> {
        self.entries.chunks((self.m + 1) as usize)
    }

    pub fn set(&mut self, i: u32, j: u32, value: S) {
        let idx = (i * (self.m + 1) + j) as usize;
        self.entries[idx] = value;
    }

    fn at(&self, i: u32, j: u32) -> S {
        self.entries[(i * (self.m + 1) + j) as usize]
    }

    fn node(&self, i: u32) -> S {
        S::from_ratio(i as i64, self.m as i64)
    }

    pub fn apply(&self, a: S, b: S) -> S {
        let (i, u) = a.split_cell(self.m);
        let (j, v) = b.split_cell(self.m);
        let one = S::one();
        let value = (one - u) * (one - v) * self.at(i, j)
            + u * (one - v) * self.at(i + 1, j)
            + (one - u) * v * self.at(i, j + 1)
            + u * v * self.at(i + 1, j + 1);
        value.clamp_unit()
    }

    /// Inverts `s -> apply(s, l)`, which is linear on each cell, for the
    /// least `s` reaching `t`.
    fn residuum(&self, t: S, l: S) -> Result<S> {
        let g = |s: S| self.apply(s, l);
        let mut prev = g(S::zero());
        if prev >= t {
            return Ok(S::zero());
        }
        for i in 0..self.m {
            let next = g(self.node(i + 1));
            if next >= t {
                let step = S::from_ratio(1, self.m as i64);
                let frac = (t - prev) / (next - prev);
                return Ok((self.node(i) + frac * step).clamp_unit());
            }
            prev = next;
        }
        Err(Error::NoSolution { t: t.to_string(), l: l.to_string() })
    }

    /// Greatest `s` with `apply(s, x) <= y`, by cellwise inversion from the top.
    fn implication(&self, x: S, y: S) -> S {
        let g = |s: S| self.apply(s, x);
        let mut upper = g(S::one());
        if upper <= y {
            return S::one();
        }
        for i in (0..self.m).rev() {
            let lower = g(self.node(i));
            if lower <= y {
                let step = S::from_ratio(1, self.m as i64);
                let frac = (y - lower) / (upper - lower);
                return (self.node(i) + frac * step).clamp_unit();
            }
            upper = lower;
        }
        S::zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::unit::{Approx, Exact};

    fn q(n: i64, d: i64) -> Exact {
        Exact::new(n, d)
    }

    // Independent float arithmetic for the three named kinds.
    fn brute(kind: &str, a: f64, b: f64) -> f64 {
        match kind {
            "min" => a.min(b),
            "product" => a * b,
            _ => (a + b - 1.0).max(0.0),
        }
    }

    #[test]
    fn apply_examples() {
        let min = TNorm::<Exact>::Minimum;
        assert_eq!(min.apply(q(3, 10), q(7, 10)), q(3, 10));
        let luk = TNorm::<Exact>::Lukasiewicz;
        assert_eq!(luk.apply(q(6, 10), q(7, 10)), q(3, 10));
        assert!((brute("luk", 0.6, 0.7) - 0.3).abs() < 1e-12);
        for name in TNorm::<Exact>::NAMES {
            let op = TNorm::<Exact>::by_name(name).unwrap();
            for s in [q(0, 1), q(1, 2), q(1, 1)] {
                assert_eq!(op.apply(s, Exact::one()), s);
            }
        }
    }

    #[test]
    fn apply_checked_errors() {
        let grid = Policy::ExactGrid(4);
        let prod = TNorm::<Exact>::Product;
        assert!(matches!(
            prod.apply_checked(q(1, 2), q(1, 2), &grid),
            Err(Error::GridClosure { .. })
        ));
        let min = TNorm::<Exact>::Minimum;
        assert!(matches!(
            min.apply_checked(q(1, 3), q(1, 2), &grid),
            Err(Error::PolicyMismatch(_))
        ));
        assert_eq!(min.apply_checked(q(1, 4), q(1, 2), &grid).unwrap(), q(1, 4));
        assert!(prod.apply_checked(q(1, 3), q(1, 2), &Policy::Float).is_ok());
    }

    #[test]
    fn grid_closure_flags() {
        assert!(TNorm::<Exact>::Minimum.grid_policy(8).closed);
        assert!(TNorm::<Exact>::Lukasiewicz.grid_policy(8).closed);
        assert!(!TNorm::<Exact>::Product.grid_policy(8).closed);
        assert!(!GridPolicy::for_tnorm(8, &TNorm::<Exact>::Product).closed);
    }

    #[test]
    fn residuum_examples() {
        // b(0.3, 0.6): bisection oracle over the s-grid of resolution 1000.
        let oracle = |kind: &str, t: f64, l: f64| {
            (0..=1000)
                .map(|k| k as f64 / 1000.0)
                .find(|&s| brute(kind, s, l) >= t - 1e-12)
                .unwrap()
        };
        assert!((oracle("min", 0.3, 0.6) - 0.3).abs() < 1e-9);
        assert!((oracle("product", 0.3, 0.6) - 0.5).abs() < 1e-9);

        assert_eq!(TNorm::<Exact>::Minimum.residuum(q(3, 10), q(6, 10)).unwrap(), q(3, 10));
        assert_eq!(TNorm::<Exact>::Product.residuum(q(3, 10), q(6, 10)).unwrap(), q(1, 2));
        for name in TNorm::<Exact>::NAMES {
            let op = TNorm::<Exact>::by_name(name).unwrap();
            let l = q(2, 5);
            let b = op.residuum(l, l).unwrap();
            assert_eq!(op.apply(b, l), l, "{name}");
        }
        assert!(matches!(
            TNorm::<Exact>::Minimum.residuum(q(7, 10), q(6, 10)),
            Err(Error::NoSolution { .. })
        ));
    }

    #[test]
    fn lukasiewicz_residuum_at_zero_is_zero() {
        let luk = TNorm::<Exact>::Lukasiewicz;
        assert_eq!(luk.residuum(Exact::zero(), q(1, 2)).unwrap(), Exact::zero());
    }

    #[test]
    fn bisection_matches_analytic() {
        for (t, l) in [(0.3, 0.6), (0.0, 0.4), (0.25, 0.25), (0.1, 1.0)] {
            for kind in ["min", "product", "luk"] {
                let bis = residuum_bisection(|s, l| brute(kind, s, l), t, l).unwrap();
                let op = TNorm::<Approx>::by_name(kind).unwrap();
                let an = op.residuum(Approx(t), Approx(l)).unwrap().0;
                assert!((bis - an).abs() < 1e-12, "{kind} {t} {l}: {bis} vs {an}");
            }
        }
        assert!(matches!(
            residuum_bisection(|s, l| s * l, 0.7, 0.5),
            Err(Error::NoSolution { .. })
        ));
        // A jump at s = 1/2 cannot be hit exactly.
        let step = |s: f64, _l: f64| if s < 0.5 { 0.0 } else { 1.0 };
        assert!(matches!(residuum_bisection(step, 0.5, 1.0), Err(Error::NonConvergence { .. })));
    }

    #[test]
    fn implication_is_greatest_subsolution() {
        for name in TNorm::<Exact>::NAMES {
            let op = TNorm::<Exact>::by_name(name).unwrap();
            let grid: Vec<Exact> = grid_values(8);
            for &x in &grid {
                for &y in &grid {
                    let lam = op.implication(x, y);
                    assert!(op.apply(lam, x) <= y, "{name} {x} {y}");
                    for &k in &grid {
                        if op.apply(k, x) <= y {
                            assert!(k <= lam, "{name}: {k} beats {lam} for ({x}, {y})");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn distributivity_reports() {
        let triples = grid_triples::<Exact>(8);
        assert!(TNorm::Minimum.check_distributivity(&triples).is_empty());
        assert!(TNorm::Lukasiewicz.check_distributivity(&triples).is_empty());

        let mut table = TnormTable::tabulate(4, |a, b| TNorm::Minimum.apply(a, b));
        // value at (1/2, 1) above the value at (3/4, 1): decreasing in the first argument
        table.set(2, 4, q(1, 1));
        let broken = TNorm::Table(Arc::new(table));
        assert!(!broken.check_distributivity(&grid_triples(4)).is_empty());
        assert!(broken.check_axioms(4).iter().any(|v| v.axiom == "monotonicity"));
    }

    #[test]
    fn table_matches_named_on_its_nodes_and_inverts_exactly() {
        let luk = TNorm::<Exact>::Lukasiewicz;
        let table = TNorm::Table(Arc::new(TnormTable::tabulate(8, |a, b| luk.apply(a, b))));
        assert!(table.check_axioms(8).is_empty());
        assert!(table.grid_policy(8).closed);
        for &t in &grid_values::<Exact>(8) {
            for &l in &grid_values::<Exact>(8) {
                assert_eq!(table.apply(t, l), luk.apply(t, l));
                if t <= l {
                    let b = table.residuum(t, l).unwrap();
                    assert_eq!(table.apply(b, l), t);
                    assert_eq!(b, luk.residuum(t, l).unwrap());
                }
                assert_eq!(table.implication(t, l), luk.implication(t, l));
            }
        }
    }

    #[test]
    fn table_shape_checks() {
        assert!(TnormTable::<Exact>::new(vec![vec![q(0, 1)]]).is_err());
        assert!(TnormTable::<Exact>::new(vec![vec![q(0, 1), q(0, 1)], vec![q(0, 1)]]).is_err());
        assert!(TnormTable::<Exact>::new(vec![vec![q(0, 1), q(2, 1)], vec![q(0, 1), q(1, 1)]]).is_err());
    }
}

//! The checks behind each suite.

use std::sync::Arc;

use rand::Rng;

use super::gen::{self, Rand, Values};
use super::{Check, Config, Fault, Sizes, Suite};
use crate::capacity::{validate_table, Capacity};
use crate::convexity::{
    self, combine, hull_membership, is_convex, monad_hull_quotient, PointCloud, WeightVector,
    MAX_ENUMERATION, MAX_SWEEP_POINTS,
};
use crate::error::Result;
use crate::integral::{
    capacity_from_functional, characterization_witness, check_tstar_axioms, indicator_functions,
    integrate_possibility_fast, integrate_with, maxitivity_violation, FnFunctional, UnitFunction,
};
use crate::possibility::{self, eta, iso_l, iso_l_inverse, mu_capacity_with, mu_closed_form, mu_with};
use crate::report::LawReport;
use crate::space::{FiniteSpace, PointMap, SubsetMask};
use crate::star::{self, PointMeasure, StarMeasure};
use crate::tnorm::{residuum_bisection, AxiomViolation, TNorm, TnormTable};
use crate::unit::{grid_values, Approx, Exact, Policy, Scalar};
use crate::variant::Kernel;

/// Grid for generated values unless configured.
pub(super) const VALUE_GRID: u32 = 4;
/// Grid of the convex ambient `L_n^2` unless configured.
const AMBIENT_GRID: u32 = 2;
/// Grid of the exhaustive test functions on two points.
const FUNCTION_GRID: u32 = 4;
/// Grid of the exhaustive test functions on three points.
const FUNCTION_GRID_3: u32 = 2;
const AXIOM_GRID: u32 = 8;
const RESIDUATION_GRID: u32 = 16;
const TABLE_RESOLUTION: u32 = 8;
/// Largest space for exhaustive capacity enumeration.
const EXHAUSTIVE_POINTS: usize = 3;
/// Largest space for randomized capacity checks.
const RANDOM_POINTS: usize = 6;
/// Largest grid for exhaustive capacity tables.
const EXHAUSTIVE_CAPACITY_GRID: u32 = 4;
/// Largest support of generated normal forms at each level.
const SUPPORT: usize = 3;
const BISECTION_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
enum Carrier {
    Exact(u32),
    Float,
}

/// One t-norm under one arithmetic, with the active fault.
#[derive(Clone)]
struct Lane<S> {
    label: String,
    op: TNorm<S>,
    float_op: TNorm<Approx>,
    values: Values,
    ambient: u32,
    kernel: Kernel,
    sizes: Sizes,
}

impl<S: Scalar> Lane<S> {
    fn name(&self, suite: Suite, check: &str) -> String {
        format!("{suite}/{}/{check}", self.label)
    }

    fn integral(&self, nu: &Capacity<S>, f: &UnitFunction<S>) -> S {
        integrate_with(nu, f, &self.op, self.kernel.threshold).value
    }

    /// Indicators, plus every grid function on spaces of at most three
    /// points (resolution 4 on two points, 2 on three).
    fn test_functions(&self, space: &FiniteSpace) -> Vec<UnitFunction<S>> {
        match space.len() {
            0..=2 => UnitFunction::grid_functions(space, FUNCTION_GRID),
            3 => UnitFunction::grid_functions(space, FUNCTION_GRID_3),
            _ => indicator_functions(space),
        }
    }
}

fn luk_table<S: Scalar>(broken: bool) -> TnormTable<S> {
    let luk = TNorm::<S>::Lukasiewicz;
    let mut table = TnormTable::tabulate(TABLE_RESOLUTION, |a, b| luk.apply(a, b));
    if broken {
        // T(1/2, 1/2) = 0 raised above T(1/2, 5/8) = 1/8
        table.set(TABLE_RESOLUTION / 2, TABLE_RESOLUTION / 2, S::from_ratio(7, 8));
    }
    table
}

fn make_op<S: Scalar>(label: &str, fault: Option<Fault>) -> TNorm<S> {
    match label {
        "table" => TNorm::Table(Arc::new(luk_table(fault == Some(Fault::BrokenMonotonicity)))),
        name => TNorm::by_name(name).expect("known t-norm"),
    }
}

fn lane<S: Scalar>(label: &str, carrier: Carrier, config: &Config) -> Lane<S> {
    Lane {
        label: label.to_string(),
        op: make_op(label, config.fault),
        float_op: make_op(label, config.fault),
        values: Values {
            grid: match carrier {
                Carrier::Exact(n) => Some(n),
                Carrier::Float => None,
            },
        },
        ambient: config.grid.unwrap_or(AMBIENT_GRID),
        kernel: config.kernel(),
        sizes: config.sizes,
    }
}

/// The t-norm lanes of `config`, and skipped checks for lanes that cannot
/// run under its policy.
fn lanes(config: &Config, with_table: bool, suite: Suite) -> (Vec<(String, Carrier)>, Vec<Check>) {
    let grid = config.grid.unwrap_or(VALUE_GRID);
    let mut labels = vec!["min", "lukasiewicz", "product"];
    if with_table {
        labels.push("table");
    }
    let mut out = Vec::new();
    let mut skipped = Vec::new();
    for label in labels {
        if let Some(filter) = &config.tnorms {
            if !filter.iter().any(|f| f == label) {
                continue;
            }
        }
        let carrier = match config.policy {
            None if label == "product" => Carrier::Float,
            None => Carrier::Exact(grid),
            Some(Policy::ExactGrid(n)) => Carrier::Exact(n),
            Some(Policy::Float) => Carrier::Float,
        };
        if let Carrier::Exact(n) = carrier {
            if label != "table" && !make_op::<Exact>(label, None).grid_policy(n).closed {
                skipped.push(Check::skipped(
                    format!("{suite}/{label}"),
                    "whole lane",
                    format!("{label} is not closed on the grid of resolution {n}"),
                ));
                continue;
            }
        }
        out.push((label.to_string(), carrier));
    }
    (out, skipped)
}

macro_rules! per_lane {
    ($config:expr, $suite:expr, $with_table:expr, $build:ident) => {{
        let (lanes, mut checks) = lanes($config, $with_table, $suite);
        for (label, carrier) in lanes {
            checks.extend(match carrier {
                Carrier::Exact(_) => $build(&lane::<Exact>(&label, carrier, $config)),
                Carrier::Float => $build(&lane::<Approx>(&label, carrier, $config)),
            });
        }
        checks
    }};
}

pub(super) fn build(suite: Suite, config: &Config) -> Result<Vec<Check>> {
    Ok(match suite {
        Suite::Tnorm => per_lane!(config, suite, true, tnorm_checks),
        Suite::Capacity => capacity_lanes(config),
        Suite::IntegralCharacterization => per_lane!(config, suite, false, integral_checks),
        Suite::Monad => per_lane!(config, suite, false, monad_checks),
        Suite::Morphism => per_lane!(config, suite, false, morphism_checks),
        Suite::Algebra => per_lane!(config, suite, false, algebra_checks),
        Suite::Convexity => per_lane!(config, suite, false, convexity_checks),
        Suite::All => {
            let mut all = Vec::new();
            for s in Suite::EACH {
                all.extend(build(s, config)?);
            }
            all
        }
    })
}

fn show<S: Scalar>(values: &[S]) -> String {
    let parts: Vec<String> = values.iter().map(|v| v.to_string()).collect();
    format!("[{}]", parts.join(" "))
}

fn show_capacity<S: Scalar>(nu: &Capacity<S>) -> String {
    let parts: Vec<String> = nu
        .space()
        .subsets()
        .map(|a| format!("{}:{}", nu.space().render(a), nu.value(a)))
        .collect();
    parts.join(" ")
}

fn show_error<T, E: std::fmt::Display>(r: &std::result::Result<T, E>) -> String {
    match r {
        Ok(_) => "ok".into(),
        Err(e) => format!("error: {e}"),
    }
}

// ---------------------------------------------------------------- t-norms

fn axiom_sides<S: Scalar>(op: &TNorm<S>, v: &AxiomViolation<S>) -> (String, String) {
    let t = |a, b| op.apply(a, b);
    let a = &v.args;
    match v.axiom {
        "unit" => (format!("T(a, 1) = {}", t(a[0], S::one())), format!("a = {}", a[0])),
        "commutativity" => (format!("T(a, b) = {}", t(a[0], a[1])), format!("T(b, a) = {}", t(a[1], a[0]))),
        "associativity" => (
            format!("T(T(a, b), c) = {}", t(t(a[0], a[1]), a[2])),
            format!("T(a, T(b, c)) = {}", t(a[0], t(a[1], a[2]))),
        ),
        _ => (
            format!("T(a, b) = {}, T(b, a) = {}", t(a[0], a[1]), t(a[1], a[0])),
            format!("T(a, c) = {}, T(c, a) = {}", t(a[0], a[2]), t(a[2], a[0])),
        ),
    }
}

fn tnorm_checks<S: Scalar>(lane: &Lane<S>) -> Vec<Check> {
    let suite = Suite::Tnorm;
    let mut out = Vec::new();

    let op = lane.op.clone();
    out.push(Check::new(
        lane.name(suite, "axioms"),
        1,
        format!("all triples on L_{AXIOM_GRID}"),
        move |_, _| {
            let mut r = LawReport::default();
            let found = op.check_axioms(AXIOM_GRID);
            r.checked = ((AXIOM_GRID as usize + 1).pow(3) * 4).saturating_sub(found.len());
            for v in &found {
                let (left, right) = axiom_sides(&op, v);
                r.record(false, v.axiom, || (format!("args = {}", show(&v.args)), left, right));
            }
            r
        },
    ));

    let op = lane.op.clone();
    out.push(Check::new(
        lane.name(suite, "distributivity"),
        1,
        format!("all triples on L_{AXIOM_GRID}"),
        move |_, _| {
            let mut r = LawReport::default();
            let triples = crate::tnorm::grid_triples::<S>(AXIOM_GRID);
            let failing = op.check_distributivity(&triples);
            r.checked = triples.len() - failing.len();
            for (t, s, l) in failing {
                r.record(false, "(t v s) * l = t * l v s * l", || {
                    (
                        format!("t = {t}, s = {s}, l = {l}"),
                        op.apply(t.max(s), l).to_string(),
                        op.apply(t, l).max(op.apply(s, l)).to_string(),
                    )
                });
            }
            r
        },
    ));

    let exhaustive = lane.values.grid.is_some();
    let side = RESIDUATION_GRID as usize + 1;
    let (count, enumeration) = if exhaustive {
        (side * side, format!("all (t, l) on L_{RESIDUATION_GRID}, all k on L_{RESIDUATION_GRID}"))
    } else {
        (lane.sizes.residuation, "random (t, l, k) triples".to_string())
    };
    let (op, fop, values) = (lane.op.clone(), lane.float_op.clone(), lane.values);
    out.push(Check::new(lane.name(suite, "residuation"), count, enumeration.clone(), move |rng, i| {
        if exhaustive {
            let t = S::from_ratio((i / side) as i64, RESIDUATION_GRID as i64);
            let l = S::from_ratio((i % side) as i64, RESIDUATION_GRID as i64);
            residuation_grid(&op, &fop, t, l)
        } else {
            let (t, l, k) = (values.value(rng), values.value(rng), values.value(rng));
            residuation_float(&op, &fop, t, l, k)
        }
    }));

    let (op, values) = (lane.op.clone(), lane.values);
    let count = if exhaustive { side * side } else { lane.sizes.residuation };
    out.push(Check::new(lane.name(suite, "implication"), count, enumeration, move |rng, i| {
        let mut r = LawReport::default();
        let (x, y, lambdas): (S, S, Vec<S>) = if exhaustive {
            (
                S::from_ratio((i / side) as i64, RESIDUATION_GRID as i64),
                S::from_ratio((i % side) as i64, RESIDUATION_GRID as i64),
                grid_values(RESIDUATION_GRID),
            )
        } else {
            (values.value(rng), values.value(rng), vec![values.value(rng)])
        };
        let imp = op.implication(x, y);
        let inputs = || format!("x = {x}, y = {y}");
        let reached = op.apply(imp, x);
        r.record(reached.approx_le(y), "(x -> y) * x <= y", || (inputs(), reached.to_string(), y.to_string()));
        for lambda in lambdas {
            let below = op.apply(lambda, x) <= y;
            r.record(!below || lambda.approx_le(imp), "lambda * x <= y implies lambda <= (x -> y)", || {
                (format!("{}, lambda = {lambda}", inputs()), format!("lambda * x = {}", op.apply(lambda, x)), format!("x -> y = {imp}"))
            });
        }
        r
    }));
    out
}

fn bisect(fop: &TNorm<Approx>, t: f64, l: f64) -> Result<f64> {
    residuum_bisection(|s, l| fop.apply(Approx(s), Approx(l)).0, t, l)
}

fn residuation_grid<S: Scalar>(op: &TNorm<S>, fop: &TNorm<Approx>, t: S, l: S) -> LawReport {
    let mut r = LawReport::default();
    let inputs = || format!("t = {t}, l = {l}");
    let b = match op.residuum(t, l) {
        Err(e) => {
            r.record(t > l, "b(t, l) defined iff t <= l", || (inputs(), format!("error: {e}"), "defined".into()));
            return r;
        }
        Ok(b) => b,
    };
    r.record(t <= l, "b(t, l) defined iff t <= l", || (inputs(), b.to_string(), "undefined".into()));
    let lb = op.apply(l, b);
    r.record(lb.approx_eq(t), "l * b(t, l) = t", || (inputs(), lb.to_string(), t.to_string()));
    for k in grid_values::<S>(RESIDUATION_GRID) {
        let kl = op.apply(k, l);
        r.record((kl >= t) == (k >= b), "k * l >= t iff k >= b(t, l)", || {
            (format!("{}, k = {k}", inputs()), format!("k * l = {kl}"), format!("b(t, l) = {b}"))
        });
    }
    let oracle = bisect(fop, t.to_f64(), l.to_f64());
    r.record(
        oracle.as_ref().is_ok_and(|x| (x - b.to_f64()).abs() <= BISECTION_TOLERANCE),
        "b(t, l) = bisection",
        || (inputs(), b.to_string(), oracle.as_ref().map_or_else(|e| format!("error: {e}"), |x| x.to_string())),
    );
    r
}

fn residuation_float<S: Scalar>(op: &TNorm<S>, fop: &TNorm<Approx>, t: S, l: S, k: S) -> LawReport {
    let mut r = LawReport::default();
    let inputs = || format!("t = {t}, l = {l}, k = {k}");
    let b = match op.residuum(t, l) {
        Err(e) => {
            r.record(t > l, "b(t, l) defined iff t <= l", || (inputs(), format!("error: {e}"), "defined".into()));
            return r;
        }
        Ok(b) => b,
    };
    r.record(t <= l, "b(t, l) defined iff t <= l", || (inputs(), b.to_string(), "undefined".into()));
    let lb = op.apply(l, b);
    r.record(lb.approx_eq(t), "l * b(t, l) = t", || (inputs(), lb.to_string(), t.to_string()));
    let kl = op.apply(k, l);
    r.record(k < b || t.approx_le(kl), "k >= b(t, l) implies k * l >= t", || {
        (inputs(), format!("k * l = {kl}"), format!("b(t, l) = {b}"))
    });
    r.record(kl < t || b.approx_le(k), "k * l >= t implies k >= b(t, l)", || {
        (inputs(), format!("k * l = {kl}"), format!("b(t, l) = {b}"))
    });
    let oracle = bisect(fop, t.to_f64(), l.to_f64());
    r.record(
        oracle.as_ref().is_ok_and(|x| (x - b.to_f64()).abs() <= BISECTION_TOLERANCE),
        "b(t, l) = bisection",
        || (inputs(), b.to_string(), oracle.as_ref().map_or_else(|e| format!("error: {e}"), |x| x.to_string())),
    );
    r
}

// ------------------------------------------------------------- capacities

fn capacity_lanes(config: &Config) -> Vec<Check> {
    let grid = config.grid.unwrap_or(VALUE_GRID);
    let mut out = Vec::new();
    match config.policy {
        Some(Policy::ExactGrid(n)) => out.extend(capacity_checks::<Exact>("exact", Values { grid: Some(n) }, config)),
        Some(Policy::Float) => out.extend(capacity_checks::<Approx>("float", Values { grid: None }, config)),
        None => {
            out.extend(capacity_checks::<Exact>("exact", Values { grid: Some(grid) }, config));
            out.extend(capacity_checks::<Approx>("float", Values { grid: None }, config));
        }
    }
    out
}

/// Oracle: nonempty sets carry the maximum of their singletons.
fn possibility_oracle<S: Scalar>(nu: &Capacity<S>) -> bool {
    nu.space().subsets().skip(1).all(|a| {
        let m = a.points().map(|i| nu.value(SubsetMask::singleton(i))).max().unwrap();
        nu.value(a).approx_eq(m)
    })
}

fn pairwise_maxitive<S: Scalar>(nu: &Capacity<S>) -> bool {
    let space = nu.space();
    space
        .subsets()
        .all(|a| space.subsets().all(|b| nu.value(a.union(b)).approx_eq(nu.value(a).max(nu.value(b)))))
}

fn monotone_oracle<S: Scalar>(space: &FiniteSpace, values: &[S]) -> bool {
    space.subsets().all(|a| {
        values[a.index()].is_unit()
            && space
                .subsets()
                .filter(|b| a.is_subset_of(*b))
                .all(|b| values[a.index()].approx_le(values[b.index()]))
    })
}

fn valid_oracle<S: Scalar>(space: &FiniteSpace, values: &[S]) -> bool {
    values.len() == space.subset_count()
        && values[0].approx_eq(S::zero())
        && values[space.full().index()].approx_eq(S::one())
        && monotone_oracle(space, values)
}

/// All monotone normalized tables on `space` with values on `L_n`.
fn all_capacities<S: Scalar>(space: &FiniteSpace, n: u32) -> Vec<Capacity<S>> {
    let grid: Vec<S> = grid_values(n);
    let free: Vec<SubsetMask> = space.subsets().filter(|a| !a.is_empty() && *a != space.full()).collect();
    let total = grid.len().pow(free.len() as u32);
    (0..total)
        .filter_map(|mut code| {
            let mut values = vec![S::zero(); space.subset_count()];
            values[space.full().index()] = S::one();
            for a in &free {
                values[a.index()] = grid[code % grid.len()];
                code /= grid.len();
            }
            Capacity::new(space.clone(), values).ok()
        })
        .collect()
}

/// Raises one entry of `table` so that it exceeds a proper superset.
/// Returns the flipped subset, or `None` if no single entry can do that.
fn flip_entry<S: Scalar>(space: &FiniteSpace, table: &mut [S]) -> Option<SubsetMask> {
    let full = space.full();
    for a in space.subsets().filter(|a| !a.is_empty() && *a != full) {
        let above = space
            .subsets()
            .filter(|b| *b != a && *b != full && a.is_subset_of(*b))
            .map(|b| table[b.index()])
            .min();
        if above.is_some_and(|v| v < S::one()) {
            table[a.index()] = S::one();
            return Some(a);
        }
    }
    None
}

fn capacity_checks<S: Scalar>(label: &str, values: Values, config: &Config) -> Vec<Check> {
    let name = |c: &str| format!("capacity/{label}/{c}");
    let sizes = config.sizes;
    let broken = config.fault == Some(Fault::BrokenMonotonicity);
    let mut out = Vec::new();

    out.push(Check::new(
        name("generated-valid"),
        sizes.capacities,
        format!("random capacities by monotone completion, |X| <= {RANDOM_POINTS}"),
        move |rng, _| {
            let mut r = LawReport::default();
            let low = if broken { 3 } else { 1 };
            let space = FiniteSpace::indexed(rng.gen_range(low..=RANDOM_POINTS));
            let mut table = gen::capacity_table::<S>(rng, values, &space);
            let mut note = String::new();
            if broken {
                let mut flipped = flip_entry(&space, &mut table);
                while flipped.is_none() {
                    table = gen::capacity_table(rng, values, &space);
                    flipped = flip_entry(&space, &mut table);
                }
                note = format!(" (entry {} flipped to 1)", space.render(flipped.expect("flipped")));
            }
            let result = Capacity::new(space.clone(), table.clone());
            r.record(result.is_ok(), "generated table is a capacity", || {
                (format!("table {}{note}", show(&table)), show_error(&result), "ok".into())
            });
            r
        },
    ));

    out.push(Check::new(
        name("validation"),
        sizes.capacities,
        format!("random raw tables, |X| <= {}", RANDOM_POINTS - 2),
        move |rng, _| {
            let mut r = LawReport::default();
            let space = gen::space(rng, RANDOM_POINTS - 2);
            let mut table: Vec<S> = if rng.gen_bool(0.5) {
                gen::capacity_table(rng, values, &space)
            } else {
                (0..space.subset_count()).map(|_| values.value(rng)).collect()
            };
            if rng.gen_bool(0.5) {
                let i = rng.gen_range(0..table.len());
                table[i] = values.value(rng);
            }
            let got = validate_table(&space, &table);
            let expected = valid_oracle(&space, &table);
            r.record(got.is_ok() == expected, "validation agrees with the oracle", || {
                (format!("table {}", show(&table)), show_error(&got), format!("oracle valid: {expected}"))
            });
            r
        },
    ));

    let n = values.grid.unwrap_or(EXHAUSTIVE_CAPACITY_GRID).min(EXHAUSTIVE_CAPACITY_GRID);
    let population: Arc<Vec<Capacity<S>>> = Arc::new(
        (1..=EXHAUSTIVE_POINTS)
            .flat_map(|k| all_capacities(&FiniteSpace::indexed(k), n))
            .collect(),
    );
    let pop = population.clone();
    out.push(Check::new(
        name("possibility-exhaustive"),
        population.len(),
        format!("all capacities on |X| <= {EXHAUSTIVE_POINTS} over L_{n}"),
        move |_, i| {
            let nu = &pop[i];
            let mut r = LawReport::default();
            let p = nu.is_possibility();
            let inputs = || show_capacity(nu);
            let oracle = possibility_oracle(nu);
            r.record(p == oracle, "possibility test agrees with the oracle", || {
                (inputs(), format!("is_possibility {p}"), format!("oracle {oracle}"))
            });
            let pairwise = pairwise_maxitive(nu);
            r.record(p == pairwise, "possibility iff pairwise maxitive", || {
                (inputs(), format!("is_possibility {p}"), format!("pairwise maxitive {pairwise}"))
            });
            let dual = nu.dual();
            let nec = dual.is_necessity();
            r.record(p == nec, "possibility iff dual is necessity", || {
                (inputs(), format!("is_possibility {p}"), format!("dual is necessity {nec}"))
            });
            dual_laws(&mut r, nu);
            if let Some(d) = nu.to_distribution() {
                let back = d.capacity();
                r.record(back.approx_eq(nu), "density round trip", || (inputs(), show_capacity(&back), inputs()));
            }
            r
        },
    ));

    out.push(Check::new(
        name("dual"),
        sizes.capacities,
        format!("random capacities, |X| <= {RANDOM_POINTS}"),
        move |rng, _| {
            let mut r = LawReport::default();
            let space = gen::space(rng, RANDOM_POINTS);
            let nu = gen::capacity::<S>(rng, values, &space);
            dual_laws(&mut r, &nu);
            r
        },
    ));

    out.push(Check::new(
        name("functoriality"),
        sizes.instances,
        format!("random capacities and maps between spaces of size <= {EXHAUSTIVE_POINTS}"),
        move |rng, _| {
            let mut r = LawReport::default();
            let x = gen::space(rng, EXHAUSTIVE_POINTS);
            let y = gen::space(rng, EXHAUSTIVE_POINTS);
            let z = gen::space(rng, EXHAUSTIVE_POINTS);
            let (g, h) = (gen::map(rng, &x, &y), gen::map(rng, &y, &z));
            let nu = gen::capacity::<S>(rng, values, &x);
            let inputs = || format!("nu = {}, g = {:?}, h = {:?}", show_capacity(&nu), g.image(), h.image());
            let pushed = nu.pushforward(&g).expect("same space");
            let oracle: Vec<S> = y.subsets().map(|b| nu.value(g.preimage(b))).collect();
            r.record(pushed.values() == oracle.as_slice(), "g(nu)(B) = nu(g^-1 B)", || {
                (inputs(), show(pushed.values()), show(&oracle))
            });
            let composite = nu.pushforward(&g.then(&h).expect("composable")).expect("same space");
            let stepwise = pushed.pushforward(&h).expect("same space");
            r.record(composite == stepwise, "(h . g)(nu) = h(g(nu))", || {
                (inputs(), show_capacity(&composite), show_capacity(&stepwise))
            });
            let id = nu.pushforward(&PointMap::identity(&x)).expect("same space");
            r.record(id == nu, "id(nu) = nu", || (inputs(), show_capacity(&id), show_capacity(&nu)));
            if nu.is_possibility() {
                r.record(pushed.is_possibility(), "pushforward keeps possibility", || {
                    (inputs(), show_capacity(&pushed), "a possibility capacity".into())
                });
                let d = nu.to_distribution().expect("possibility");
                let via = d.pushforward(&g).expect("same space").capacity();
                r.record(via.approx_eq(&pushed), "density pushforward = capacity pushforward", || {
                    (inputs(), show_capacity(&via), show_capacity(&pushed))
                });
            }
            r
        },
    ));
    out
}

fn dual_laws<S: Scalar>(r: &mut LawReport, nu: &Capacity<S>) {
    let space = nu.space();
    let dual = nu.dual();
    let n = space.len();
    let oracle: Vec<S> = space.subsets().map(|a| S::one() - nu.value(a.complement(n))).collect();
    r.record(dual.values() == oracle.as_slice(), "dual(F) = 1 - nu(X \\ F)", || {
        (show_capacity(nu), show(dual.values()), show(&oracle))
    });
    let twice = dual.dual();
    r.record(twice.approx_eq(nu), "dual is an involution", || {
        (show_capacity(nu), show_capacity(&twice), show_capacity(nu))
    });
    let valid = valid_oracle(space, dual.values());
    r.record(valid, "dual is a capacity", || (show_capacity(nu), show(dual.values()), "a capacity".into()));
}

// --------------------------------------------------------------- integrals

fn characterize<S: Scalar>(lane: &Lane<S>, nu: &Capacity<S>, samples: &[UnitFunction<S>]) -> LawReport {
    let mut r = LawReport::default();
    let functional = FnFunctional::new(nu.space().clone(), |f: &UnitFunction<S>| lane.integral(nu, f));
    let inputs = || show_capacity(nu);
    let p = nu.is_possibility();
    let bad_pair = maxitivity_violation(&functional, samples);
    r.record(bad_pair.is_none() == p, "star measure iff possibility", || {
        let star = match bad_pair {
            None => "maxitive on all sample pairs".to_string(),
            Some((i, j)) => format!(
                "not maxitive on {} v {}",
                show(samples[i].values()),
                show(samples[j].values())
            ),
        };
        (inputs(), star, format!("is_possibility {p}"))
    });
    let witness = characterization_witness(nu, &lane.op);
    r.record(witness.is_some() != p, "witness exists iff not possibility", || {
        (inputs(), format!("witness found: {}", witness.is_some()), format!("is_possibility {p}"))
    });
    if let Some((f, g)) = &witness {
        let joined = lane.integral(nu, &f.join(g));
        let separate = lane.integral(nu, f).max(lane.integral(nu, g));
        r.record(separate < joined && !joined.approx_eq(separate), "witness breaks maxitivity", || {
            (
                format!("{}, f = {}, g = {}", inputs(), show(f.values()), show(g.values())),
                format!("I(f v g) = {joined}"),
                format!("I(f) v I(g) = {separate}"),
            )
        });
    }
    r
}

fn recover<S: Scalar>(lane: &Lane<S>, nu: &Capacity<S>) -> LawReport {
    let mut r = LawReport::default();
    let functional = FnFunctional::new(nu.space().clone(), |f: &UnitFunction<S>| lane.integral(nu, f));
    let back = capacity_from_functional(&functional);
    r.record(back.as_ref().is_ok_and(|c| c.approx_eq(nu)), "capacity of the integral = nu", || {
        let left = match &back {
            Ok(c) => show_capacity(c),
            Err(e) => format!("error: {e}"),
        };
        (show_capacity(nu), left, show_capacity(nu))
    });
    r
}

/// All capacities on two points with values on `L_4`.
fn two_point_capacities<S: Scalar>() -> Vec<Capacity<S>> {
    all_capacities(&FiniteSpace::indexed(2), FUNCTION_GRID)
}

fn integral_checks<S: Scalar>(lane: &Lane<S>) -> Vec<Check> {
    let suite = Suite::IntegralCharacterization;
    let lane = Arc::new(lane.clone());
    let mut out = Vec::new();
    let two: Arc<Vec<Capacity<S>>> = Arc::new(two_point_capacities());
    let random_stream = lane.name(suite, "capacities-3");

    let (l, pop) = (lane.clone(), two.clone());
    let space2 = FiniteSpace::indexed(2);
    let samples2: Arc<Vec<UnitFunction<S>>> = Arc::new(
        indicator_functions(&space2)
            .into_iter()
            .chain(UnitFunction::grid_functions(&space2, FUNCTION_GRID))
            .collect(),
    );
    out.push(Check::new(
        lane.name(suite, "characterization-exhaustive"),
        two.len(),
        format!("all capacities on |X| = 2 over L_{FUNCTION_GRID}; indicator and L_{FUNCTION_GRID} function pairs"),
        move |_, i| characterize(&l, &pop[i], &samples2),
    ));
    let l = lane.clone();
    let space3 = FiniteSpace::indexed(3);
    let samples3: Arc<Vec<UnitFunction<S>>> = Arc::new(indicator_functions(&space3));
    out.push(
        Check::new(
            lane.name(suite, "characterization-random"),
            lane.sizes.capacities,
            "random capacities on |X| = 3; indicator pairs",
            move |rng, _| characterize(&l, &gen::capacity(rng, l.values, &space3), &samples3),
        )
        .stream(random_stream.clone()),
    );
    let (l, pop) = (lane.clone(), two.clone());
    out.push(Check::new(
        lane.name(suite, "recovery-exhaustive"),
        two.len(),
        format!("all capacities on |X| = 2 over L_{FUNCTION_GRID}"),
        move |_, i| recover(&l, &pop[i]),
    ));
    let l = lane.clone();
    let space3 = FiniteSpace::indexed(3);
    out.push(
        Check::new(
            lane.name(suite, "recovery-random"),
            lane.sizes.capacities,
            "random capacities on |X| = 3",
            move |rng, _| recover(&l, &gen::capacity(rng, l.values, &space3)),
        )
        .stream(random_stream),
    );

    let l = lane.clone();
    out.push(Check::new(
        lane.name(suite, "functional-axioms"),
        lane.sizes.instances,
        "random capacities on |X| <= 3; grid test functions",
        move |rng, _| {
            let space = gen::space(rng, EXHAUSTIVE_POINTS);
            let nu = gen::capacity::<S>(rng, l.values, &space);
            let functional = FnFunctional::new(space.clone(), |f: &UnitFunction<S>| l.integral(&nu, f));
            let samples = l.test_functions(&space);
            let constants: Vec<S> = match l.values.grid {
                Some(n) => grid_values(n),
                None => (0..4).map(|_| l.values.value(rng)).collect(),
            };
            let mut r = check_tstar_axioms(&functional, &samples, &constants, &l.op);
            for a in space.subsets() {
                let got = l.integral(&nu, &UnitFunction::indicator(space.clone(), a));
                r.record(got.approx_eq(nu.value(a)), "I(chi_A) = nu(A)", || {
                    (format!("{}, A = {}", show_capacity(&nu), space.render(a)), got.to_string(), nu.value(a).to_string())
                });
            }
            let values: Vec<S> = samples.iter().map(|f| l.integral(&nu, f)).collect();
            for (i, f) in samples.iter().enumerate() {
                for (j, g) in samples.iter().enumerate() {
                    if f.le(g) {
                        r.record(values[i].approx_le(values[j]), "f <= g implies I(f) <= I(g)", || {
                            (
                                format!("{}, f = {}, g = {}", show_capacity(&nu), show(f.values()), show(g.values())),
                                values[i].to_string(),
                                values[j].to_string(),
                            )
                        });
                    }
                }
            }
            r
        },
    ));

    let l = lane.clone();
    out.push(Check::new(
        lane.name(suite, "possibility-fast-path"),
        lane.sizes.closed_form,
        "random distributions and functions, |X| <= 6",
        move |rng, _| {
            let mut r = LawReport::default();
            let space = gen::space(rng, RANDOM_POINTS);
            let d = gen::distribution::<S>(rng, l.values, &space);
            let f = gen::function(rng, l.values, &space);
            let fast = integrate_possibility_fast(&d, &f, &l.op);
            let swept = l.integral(&d.capacity(), &f);
            r.record(fast.approx_eq(swept), "max_x d(x) * f(x) = I(f)", || {
                (format!("d = {}, f = {}", show(d.density()), show(f.values())), fast.to_string(), swept.to_string())
            });
            r
        },
    ));
    out
}

// ------------------------------------------------------------------ monads

fn star_functions<S: Scalar>(space: &FiniteSpace) -> Vec<UnitFunction<S>> {
    let mut fns = indicator_functions(space);
    fns.extend(match space.len() {
        0..=2 => UnitFunction::grid_functions(space, FUNCTION_GRID),
        _ => UnitFunction::grid_functions(space, FUNCTION_GRID_3),
    });
    fns
}

fn nested_measure<S: Scalar>(rng: &mut Rand, v: Values, space: &FiniteSpace) -> StarMeasure<PointMeasure<S>, S> {
    gen::normal_form(rng, v, SUPPORT, |r| gen::point_measure(r, v, space))
}

fn monad_checks<S: Scalar>(lane: &Lane<S>) -> Vec<Check> {
    let suite = Suite::Monad;
    let lane = Arc::new(lane.clone());
    let mut out = Vec::new();

    let l = lane.clone();
    out.push(Check::new(
        lane.name(suite, "possibility-monad-laws"),
        lane.sizes.instances,
        format!("random nested possibilities, support <= {SUPPORT}, |X| <= 3; full capacity tables"),
        move |rng, _| {
            let space = gen::space(rng, EXHAUSTIVE_POINTS);
            let c3 = gen::nested_outer::<S>(rng, l.values, &space, SUPPORT);
            possibility::check_monad_laws_with(&[c3], &l.op, l.kernel)
        },
    ));

    let l = lane.clone();
    out.push(Check::new(
        lane.name(suite, "star-monad-laws"),
        lane.sizes.instances,
        format!(
            "random triple normal forms, support <= {SUPPORT}, |X| <= 3; structural and on L_{FUNCTION_GRID} functions (|X| <= 2), indicators and L_{FUNCTION_GRID_3} functions (|X| = 3)"
        ),
        move |rng, _| {
            let space = gen::space(rng, EXHAUSTIVE_POINTS);
            let v = l.values;
            let triple: star::TripleMeasure<S> = gen::normal_form(rng, v, SUPPORT, |r| nested_measure(r, v, &space));
            star::check_star_monad_laws_with(&[triple], &star_functions(&space), &l.op, l.kernel.merge)
        },
    ));

    let l = lane.clone();
    out.push(Check::new(
        lane.name(suite, "mu-closed-form"),
        lane.sizes.closed_form,
        "random (C, F), support <= 3, |X| <= 3",
        move |rng, _| {
            let mut r = LawReport::default();
            let space = gen::space(rng, EXHAUSTIVE_POINTS);
            let c = gen::outer::<S>(rng, l.values, &space, SUPPORT);
            let f = SubsetMask(rng.gen_range(0..space.subset_count() as u32));
            let swept = mu_with(&c, f, &l.op, l.kernel.threshold);
            let closed = mu_closed_form(&c, f, &l.op);
            r.record(swept.approx_eq(closed), "mu(C)(F) = max_i lambda_i * nu_i(F)", || {
                (format!("C = {c}, F = {}", space.render(f)), swept.to_string(), closed.to_string())
            });
            r
        },
    ));

    let l = lane.clone();
    out.push(Check::new(
        lane.name(suite, "evaluate-vs-integral"),
        lane.sizes.closed_form,
        "random (nu, f), |X| <= 3",
        move |rng, _| {
            let mut r = LawReport::default();
            let space = gen::space(rng, EXHAUSTIVE_POINTS);
            let nu = gen::distribution::<S>(rng, l.values, &space);
            let f = gen::function(rng, l.values, &space);
            let left = star::evaluate(&iso_l(&nu), &f, &l.op);
            let right = l.integral(&nu.capacity(), &f);
            r.record(left.approx_eq(right), "V_i lambda_i * f(x_i) = I(f)", || {
                (format!("nu = {}, f = {}", show(nu.density()), show(f.values())), left.to_string(), right.to_string())
            });
            r
        },
    ));

    let l = lane.clone();
    out.push(Check::new(
        lane.name(suite, "multiplication-closed-form"),
        lane.sizes.closed_form,
        "random (Lambda, f), support <= 3, |X| <= 3",
        move |rng, _| {
            let mut r = LawReport::default();
            let space = gen::space(rng, EXHAUSTIVE_POINTS);
            let nested = nested_measure::<S>(rng, l.values, &space);
            let f = gen::function(rng, l.values, &space);
            let merged = nested.flatten_with(&l.op, l.kernel.merge);
            let left = star::evaluate(&merged, &f, &l.op);
            let right = nested.evaluate(|mu| star::evaluate(mu, &f, &l.op), &l.op);
            r.record(left.approx_eq(right), "pi_f(m Lambda) = Lambda(pi_f)", || {
                (
                    format!("Lambda = {nested:?}, f = {}", show(f.values())),
                    format!("m Lambda = {merged:?}, value {left}"),
                    right.to_string(),
                )
            });
            r
        },
    ));

    let l = lane.clone();
    out.push(Check::new(
        lane.name(suite, "naturality"),
        lane.sizes.instances,
        "random C, Lambda and maps between spaces of size <= 3",
        move |rng, _| {
            let mut r = LawReport::default();
            let x = gen::space(rng, EXHAUSTIVE_POINTS);
            let y = gen::space(rng, EXHAUSTIVE_POINTS);
            let g = gen::map(rng, &x, &y);
            let c = gen::outer::<S>(rng, l.values, &x, SUPPORT);
            let left = c.pushforward(&g).and_then(|pc| mu_capacity_with(&pc, &l.op, l.kernel.threshold));
            let right = mu_capacity_with(&c, &l.op, l.kernel.threshold).and_then(|m| m.pushforward(&g));
            let ok = matches!((&left, &right), (Ok(a), Ok(b)) if a.approx_eq(b));
            r.record(ok, "mu . Pi^2 g = Pi g . mu", || {
                let side = |t: &Result<Capacity<S>>| t.as_ref().map_or_else(|e| format!("error: {e}"), show_capacity);
                (format!("C = {c}, g = {:?}", g.image()), side(&left), side(&right))
            });
            for p in 0..x.len() {
                let left = eta::<S>(&x, p).pushforward(&g).expect("same space");
                let right = eta::<S>(&y, g.apply(p));
                r.record(left == right, "Pi g . eta = eta . g", || {
                    (format!("x = {p}, g = {:?}", g.image()), show(left.density()), show(right.density()))
                });
            }
            let nested = nested_measure::<S>(rng, l.values, &x);
            let m = l.kernel.merge;
            let left = nested.flatten_with(&l.op, m).map_with(|&p| g.apply(p), m);
            let right = nested.map_with(|mu| mu.map_with(|&p| g.apply(p), m), m).flatten_with(&l.op, m);
            r.record(left.approx_eq(&right), "A*g . m = m . A*A*g", || {
                (format!("Lambda = {nested:?}, g = {:?}", g.image()), format!("{left:?}"), format!("{right:?}"))
            });
            r
        },
    ));
    out
}

fn morphism_checks<S: Scalar>(lane: &Lane<S>) -> Vec<Check> {
    let suite = Suite::Morphism;
    let lane = Arc::new(lane.clone());
    let mut out = Vec::new();

    let l = lane.clone();
    out.push(Check::new(
        lane.name(suite, "squares"),
        lane.sizes.instances,
        format!("random C, support <= {SUPPORT}, |X| <= 3; all indicators, all L_{FUNCTION_GRID} functions at |X| <= 2"),
        move |rng, _| {
            let space = gen::space(rng, EXHAUSTIVE_POINTS);
            let c = gen::outer::<S>(rng, l.values, &space, SUPPORT);
            let mut fns = indicator_functions(&space);
            if space.len() <= 2 {
                fns.extend(UnitFunction::grid_functions(&space, FUNCTION_GRID));
            }
            possibility::check_morphism_laws_with(&space, &[c], &fns, &l.op, l.kernel)
        },
    ));

    let l = lane.clone();
    out.push(Check::new(
        lane.name(suite, "iso-bijection"),
        lane.sizes.instances,
        "random distributions and normal forms, |X| <= 3",
        move |rng, _| {
            let mut r = LawReport::default();
            let space = gen::space(rng, EXHAUSTIVE_POINTS);
            let nu = gen::distribution::<S>(rng, l.values, &space);
            let image = iso_l(&nu);
            let back = iso_l_inverse(&image, &space);
            r.record(back.as_ref().is_ok_and(|b| b == &nu), "l^-1 . l = id", || {
                (show(nu.density()), back.as_ref().map_or_else(|e| format!("error: {e}"), |b| show(b.density())), show(nu.density()))
            });
            let cap = nu.capacity();
            for a in space.subsets() {
                let f = UnitFunction::indicator(space.clone(), a);
                let got = star::evaluate(&image, &f, &l.op);
                let expected = l.integral(&cap, &f);
                r.record(got.approx_eq(expected), "l(nu)(chi_A) = nu(A)", || {
                    (format!("nu = {}, A = {}", show(nu.density()), space.render(a)), got.to_string(), expected.to_string())
                });
            }
            let mu = gen::point_measure::<S>(rng, l.values, &space);
            let round = iso_l_inverse(&mu, &space).map(|d| iso_l(&d));
            r.record(round.as_ref().is_ok_and(|m| m == &mu), "l . l^-1 = id", || {
                (format!("{mu:?}"), round.as_ref().map_or_else(|e| format!("error: {e}"), |m| format!("{m:?}")), format!("{mu:?}"))
            });
            r
        },
    ));
    out
}

// -------------------------------------------------------------- convexity

type Nested<S> = convexity::NestedPointMeasure<S>;

fn ambient<S: Scalar>(lane: &Lane<S>) -> Option<PointCloud<S>> {
    lane.op
        .grid_policy(lane.ambient)
        .closed
        .then(|| PointCloud::grid_cube(2, lane.ambient))
}

fn algebra_checks<S: Scalar>(lane: &Lane<S>) -> Vec<Check> {
    let suite = Suite::Algebra;
    let lane = Arc::new(lane.clone());
    let mut out = Vec::new();
    let k = ambient(&lane);
    let cube = Arc::new(PointCloud::<S>::grid_cube(2, lane.ambient));
    let n = lane.ambient;

    let (l, c) = (lane.clone(), cube.clone());
    out.push(Check::new(
        lane.name(suite, "unit"),
        1,
        format!("every point of L_{n}^2"),
        move |_, _| convexity::check_algebra_unit(&c, &l.op),
    ));

    let l = lane.clone();
    let enumeration = match &k {
        Some(_) => format!("random nested normal forms on L_{n}^2 with L_{n} weights"),
        None => "random nested normal forms on [0,1]^2".to_string(),
    };
    let k = k.map(Arc::new);
    out.push(Check::new(
        lane.name(suite, "multiplication"),
        lane.sizes.algebra,
        enumeration,
        move |rng, _| {
            let nested: Nested<S> = match &k {
                Some(k) => {
                    let v = Values { grid: Some(n) };
                    gen::normal_form(rng, v, SUPPORT, |r| {
                        gen::normal_form(r, v, SUPPORT, |r2| k.points()[r2.gen_range(0..k.len())].clone())
                    })
                }
                None => {
                    let v = l.values;
                    gen::normal_form(rng, v, SUPPORT, |r| gen::normal_form(r, v, SUPPORT, |r2| gen::point(r2, v, 2)))
                }
            };
            convexity::check_algebra_multiplication_with(k.as_deref(), &[nested], &l.op, l.kernel)
        },
    ));
    out
}

fn random_subset<S: Scalar>(rng: &mut Rand, k: &PointCloud<S>) -> PointCloud<S> {
    k.select(gen::nonempty_mask(rng, k.len())).expect("nonempty selection")
}

fn convexity_checks<S: Scalar>(lane: &Lane<S>) -> Vec<Check> {
    let suite = Suite::Convexity;
    let lane = Arc::new(lane.clone());
    let mut out = Vec::new();
    let n = lane.ambient;

    match ambient(&lane) {
        Some(k) => {
            let k = Arc::new(k);
            let sweep = format!("all subsets of L_{n}^2");
            if k.len() > MAX_SWEEP_POINTS {
                out.push(Check::skipped(
                    lane.name(suite, "equivalence"),
                    sweep,
                    format!("{} points exceed the subset sweep cap of {MAX_SWEEP_POINTS}", k.len()),
                ));
            } else {
                let (l, kk) = (lane.clone(), k.clone());
                out.push(Check::new(lane.name(suite, "equivalence"), 1, sweep, move |_, _| {
                    convexity::check_convexity_equivalence_with(&kk, &l.op, l.kernel).unwrap_or_else(|e| {
                        let mut r = LawReport::default();
                        r.record(false, "subset sweep runs", || (format!("{kk:?}"), format!("error: {e}"), "ok".into()));
                        r
                    })
                }));
            }

            let (l, kk) = (lane.clone(), k.clone());
            out.push(Check::new(
                lane.name(suite, "membership"),
                lane.sizes.hull,
                format!("random (C, y) with C a subset of L_{n}^2 and y in L_{n}^2"),
                move |rng, _| {
                    let mut r = LawReport::default();
                    let c = random_subset(rng, &kk);
                    let y = kk.points()[rng.gen_range(0..kk.len())].clone();
                    let inputs = || format!("C = {c:?}, y = {y}");
                    let hull = convexity::monad_hull_with(&c, &kk, &l.op, l.kernel);
                    let member = hull_membership(&y, &c, &l.op);
                    let enumerated = hull.as_ref().map(|h| h.contains(&y));
                    r.record(enumerated.as_ref().is_ok_and(|&e| e == member.is_some()), "principal weights decide membership", || {
                        let enumerated = enumerated.as_ref().map_or_else(|e| format!("error: {e}"), |e| format!("in enumerated hull: {e}"));
                        (inputs(), format!("principal weights: {:?}", member.as_ref().map(|w| show(w.weights()))), enumerated)
                    });
                    if let Some(w) = &member {
                        let reached = combine(c.points(), w, &l.op);
                        r.record(reached.as_ref().is_ok_and(|p| p == &y), "principal weights reproduce y", || {
                            (inputs(), format!("{reached:?}"), y.to_string())
                        });
                    }
                    r
                },
            ));

            let count = (n as usize + 1).checked_pow(k.len() as u32);
            let enumeration = format!("random C in L_{n}^2; all L_{n} normal forms on L_{n}^2");
            if count.is_none_or(|c| c > MAX_ENUMERATION) {
                out.push(Check::skipped(
                    lane.name(suite, "quotient-hull"),
                    enumeration,
                    format!("{}^{} normal forms exceed the cap of {MAX_ENUMERATION}", n + 1, k.len()),
                ));
            } else {
                let (l, kk) = (lane.clone(), k.clone());
                out.push(Check::new(lane.name(suite, "quotient-hull"), lane.sizes.quotient, enumeration, move |rng, _| {
                    let mut r = LawReport::default();
                    let c = random_subset(rng, &kk);
                    let fast = convexity::monad_hull_with(&c, &kk, &l.op, l.kernel);
                    let literal = monad_hull_quotient(&c, &kk, &l.op);
                    r.record(matches!((&fast, &literal), (Ok(a), Ok(b)) if a == b), "hull = quotient construction", || {
                        (format!("C = {c:?}"), format!("{fast:?}"), format!("{literal:?}"))
                    });
                    r
                }));
            }

            let (l, kk) = (lane.clone(), k.clone());
            out.push(Check::new(
                lane.name(suite, "hull-properties"),
                lane.sizes.hull,
                format!("random C in L_{n}^2"),
                move |rng, _| {
                    let mut r = LawReport::default();
                    let c = random_subset(rng, &kk);
                    let hull = match convexity::monad_hull_with(&c, &kk, &l.op, l.kernel) {
                        Ok(h) => h,
                        Err(e) => {
                            r.record(false, "hull exists", || (format!("C = {c:?}"), format!("error: {e}"), "a hull".into()));
                            return r;
                        }
                    };
                    r.record(c.is_subset_of(&hull), "C is inside hull(C)", || {
                        (format!("C = {c:?}"), format!("{hull:?}"), format!("{c:?}"))
                    });
                    let convex = is_convex(&hull, &l.op);
                    r.record(convex == Ok(true), "hull(C) is convex", || {
                        (format!("C = {c:?}"), format!("hull = {hull:?}"), format!("convex: {convex:?}"))
                    });
                    let again = convexity::monad_hull_with(&hull, &kk, &l.op, l.kernel);
                    r.record(again.as_ref() == Ok(&hull), "hull is idempotent", || {
                        (format!("C = {c:?}"), format!("{again:?}"), format!("{hull:?}"))
                    });
                    r
                },
            ));
        }
        None => {
            out.push(Check::skipped(
                lane.name(suite, "equivalence"),
                format!("all subsets of L_{n}^2"),
                format!("{} is not closed on the grid of resolution {n}", lane.label),
            ));
            let l = lane.clone();
            out.push(Check::new(
                lane.name(suite, "membership"),
                lane.sizes.hull,
                "random generators in [0,1]^d, d <= 3, with random weights and random queries",
                move |rng, _| float_membership(&l, rng),
            ));
        }
    }

    let maps: Arc<Vec<PointMap>> = Arc::new(
        (1..=EXHAUSTIVE_POINTS)
            .flat_map(|a| {
                (1..=EXHAUSTIVE_POINTS)
                    .flat_map(move |b| PointMap::all_maps(&FiniteSpace::indexed(a), &FiniteSpace::indexed(b)))
            })
            .collect(),
    );
    let l = lane.clone();
    let per_map = lane.sizes.preimage;
    let m = maps.clone();
    out.push(Check::new(
        lane.name(suite, "preimage"),
        if per_map == 0 { 0 } else { maps.len() },
        format!("all maps between spaces of size <= {EXHAUSTIVE_POINTS}, all K, {per_map} random normal forms each"),
        move |rng, i| {
            let g = &m[i];
            let measures: Vec<PointMeasure<S>> = (0..per_map).map(|_| gen::point_measure(rng, l.values, g.source())).collect();
            star::check_preimage_law_with(g, &measures, &l.op, l.kernel.merge)
        },
    ));
    out
}

/// Spot checks off the grid: a combination of generators is recognized, and
/// any recognized query is reproduced by its principal weights, which
/// dominate every other solution.
fn float_membership<S: Scalar>(lane: &Lane<S>, rng: &mut Rand) -> LawReport {
    let mut r = LawReport::default();
    let v = lane.values;
    let dim = rng.gen_range(1..=3);
    let count = rng.gen_range(1..=4);
    let cloud = match PointCloud::new((0..count).map(|_| gen::point::<S>(rng, v, dim))) {
        Ok(c) => c,
        Err(_) => return r,
    };
    let lambda = WeightVector::new(v.normalized(rng, cloud.len())).expect("normalized");
    let y = combine(cloud.points(), &lambda, &lane.op).expect("same dimension");
    let inputs = || format!("C = {cloud:?}, lambda = {}, y = {y}", show(lambda.weights()));
    let member = hull_membership(&y, &cloud, &lane.op);
    r.record(member.is_some(), "combinations are members", || (inputs(), "not a member".into(), "member".into()));
    if let Some(w) = &member {
        let dominates = w.weights().iter().zip(lambda.weights()).all(|(a, b)| b.approx_le(*a));
        r.record(dominates, "principal weights dominate", || {
            (inputs(), show(w.weights()), show(lambda.weights()))
        });
    }
    let query = gen::point::<S>(rng, v, dim);
    if let Some(w) = hull_membership(&query, &cloud, &lane.op) {
        let reached = combine(cloud.points(), &w, &lane.op).expect("same dimension");
        r.record(reached.approx_eq(&query), "principal weights reproduce y", || {
            (format!("C = {cloud:?}, y = {query}"), reached.to_string(), query.to_string())
        });
    }
    r
}

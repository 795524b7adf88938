//! Worked examples checked against small oracles written here, independently
//! of the library code paths.

use std::collections::BTreeSet;

use tnormed::integral::superlevel;
use tnormed::star::{evaluate, functor_map, is_supported_on, multiplication, unit};
use tnormed::tnorm::residuum_bisection;
use tnormed::{
    barycenter, characterization_witness, combine, comonotone, hull_membership, integrate, is_convex, iso_l,
    monad_hull, mu, parse_model, Approx, Capacity, Exact, FiniteSpace, MaxStarPoint, OuterPossibility, PointCloud,
    PointMap, PossibilityDistribution, Scalar, StarMeasure, SubsetMask, TNorm, UnitFunction, WeightVector,
};

const EPS: f64 = 1e-9;

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= EPS
}

fn ab() -> FiniteSpace {
    FiniteSpace::new(["a", "b"]).unwrap()
}

fn abc() -> FiniteSpace {
    FiniteSpace::new(["a", "b", "c"]).unwrap()
}

fn a(v: &[f64]) -> Vec<Approx> {
    v.iter().map(|&x| Approx(x)).collect()
}

fn q(n: i64, d: i64) -> Exact {
    Exact::new(n, d)
}

// ---- oracles ------------------------------------------------------------

fn luk(x: f64, y: f64) -> f64 {
    (x + y - 1.0).max(0.0)
}

fn prod(x: f64, y: f64) -> f64 {
    x * y
}

/// `nu(A) = max_{x in A} d(x)` over bitmask-indexed subsets.
fn possibility_table(d: &[f64]) -> Vec<f64> {
    (0..1usize << d.len())
        .map(|m| (0..d.len()).filter(|i| m >> i & 1 == 1).map(|i| d[i]).fold(0.0, f64::max))
        .collect()
}

/// `sup_t nu({f >= t}) * t`, sweeping a fine grid of thresholds plus the
/// values of `f` themselves.
fn sweep_integral(nu: &[f64], f: &[f64], op: fn(f64, f64) -> f64) -> f64 {
    let mut ts: Vec<f64> = (0..=1000).map(|k| k as f64 / 1000.0).collect();
    ts.extend_from_slice(f);
    ts.into_iter()
        .map(|t| {
            let level = (0..f.len()).filter(|&i| f[i] >= t).fold(0, |m, i| m | 1 << i);
            op(nu[level], t)
        })
        .fold(0.0, f64::max)
}

/// Evaluation of a normal form `V w_i * delta_{x_i}` on `f`.
fn eval_terms(terms: &[(usize, f64)], f: &[f64], op: fn(f64, f64) -> f64) -> f64 {
    terms.iter().map(|&(x, w)| op(w, f[x])).fold(0.0, f64::max)
}

/// Smallest set containing `seed` and closed under `l * x v y` for grid `l`.
fn closure_hull(seed: &[(i64, i64)], n: i64, op: fn(i64, i64, i64) -> i64) -> BTreeSet<(i64, i64)> {
    let mut set: BTreeSet<(i64, i64)> = seed.iter().copied().collect();
    loop {
        let mut next = set.clone();
        for &x in &set {
            for &y in &set {
                for l in 0..=n {
                    next.insert((op(l, x.0, n).max(y.0), op(l, x.1, n).max(y.1)));
                }
            }
        }
        if next == set {
            return set;
        }
        set = next;
    }
}

fn min_grid(l: i64, x: i64, _n: i64) -> i64 {
    l.min(x)
}

fn luk_grid(l: i64, x: i64, n: i64) -> i64 {
    (l + x - n).max(0)
}

fn cloud(points: &[(i64, i64)], n: i64) -> PointCloud<Exact> {
    PointCloud::new(points.iter().map(|&(x, y)| MaxStarPoint::new(vec![q(x, n), q(y, n)]).unwrap()))
        .unwrap()
        .on_grid(n as u32)
        .unwrap()
}

fn as_pairs(c: &PointCloud<Exact>, n: i64) -> BTreeSet<(i64, i64)> {
    c.points()
        .iter()
        .map(|p| {
            let k = |v: Exact| v.numer() * (n / v.denom());
            (k(p.coords()[0]), k(p.coords()[1]))
        })
        .collect()
}

// ---- t-norms ------------------------------------------------------------

#[test]
fn tnorm_values() {
    assert_eq!(TNorm::Minimum.apply(q(3, 10), q(7, 10)), q(3, 10));
    let l = TNorm::<Approx>::Lukasiewicz.apply(Approx(0.6), Approx(0.7)).0;
    assert!(close(l, luk(0.6, 0.7)) && close(l, 0.3));
    for s in [q(0, 1), q(1, 2), q(1, 1)] {
        for op in [TNorm::Minimum, TNorm::Product, TNorm::Lukasiewicz] {
            assert_eq!(op.apply(s, Exact::new(1, 1)), s);
        }
    }
}

#[test]
fn residuum_values_match_bisection() {
    let r = TNorm::<Approx>::Minimum.residuum(Approx(0.3), Approx(0.6)).unwrap().0;
    assert!(close(r, residuum_bisection(f64::min, 0.3, 0.6).unwrap()));
    assert!(close(r, 0.3));
    let r = TNorm::<Approx>::Product.residuum(Approx(0.3), Approx(0.6)).unwrap().0;
    assert!(close(r, residuum_bisection(prod, 0.3, 0.6).unwrap()));
    assert!(close(r, 0.5));
    for op in [TNorm::Minimum, TNorm::Product, TNorm::Lukasiewicz] {
        let l = Approx(0.4);
        let b = op.residuum(l, l).unwrap();
        assert!(close(op.apply(b, l).0, 0.4));
    }
    assert!(TNorm::<Approx>::Product.residuum(Approx(0.7), Approx(0.6)).is_err());
}

#[test]
fn distributivity_on_the_grid_and_a_broken_table() {
    let triples = tnormed::tnorm::grid_triples::<Exact>(8);
    assert!(TNorm::Minimum.check_distributivity(&triples).is_empty());
    assert!(TNorm::Lukasiewicz.check_distributivity(&triples).is_empty());

    let mut table = tnormed::TnormTable::tabulate(8, |x, y| TNorm::<Exact>::Lukasiewicz.apply(x, y));
    table.set(4, 4, q(7, 8));
    let broken = TNorm::Table(std::sync::Arc::new(table));
    assert!(!broken.check_axioms(8).is_empty());
}

// ---- capacities ---------------------------------------------------------

#[test]
fn possibility_capacity_values() {
    let d = PossibilityDistribution::new(ab(), a(&[1.0, 0.5])).unwrap();
    let nu = d.capacity();
    let oracle = possibility_table(&[1.0, 0.5]);
    for m in ab().subsets() {
        assert!(close(nu.value(m).0, oracle[m.index()]));
    }
    assert!(close(nu.value(SubsetMask::singleton(1)).0, 0.5));
    assert!(close(nu.value(ab().full()).0, 1.0));

    let dirac = PossibilityDistribution::<Exact>::dirac(abc(), 0).capacity();
    for m in abc().subsets() {
        assert_eq!(dirac.value(m), if m.contains(0) { q(1, 1) } else { q(0, 1) });
    }
}

#[test]
fn non_possibility_table() {
    let nu = Capacity::new(ab(), vec![q(0, 1), q(1, 2), q(1, 2), q(1, 1)]).unwrap();
    // 1 > max(0.5, 0.5), checked by hand
    assert!(!nu.is_possibility());
    assert!(!nu.dual().is_necessity());
    assert!(nu.dual().dual() == nu);
    let d = PossibilityDistribution::new(ab(), vec![q(1, 1), q(2, 5)]).unwrap();
    assert!(d.capacity().dual().is_necessity());
}

#[test]
fn dual_values() {
    let d = PossibilityDistribution::new(ab(), a(&[1.0, 0.4])).unwrap();
    let kappa = d.capacity().dual();
    let nu = possibility_table(&[1.0, 0.4]);
    let dual = |m: usize| 1.0 - nu[3 & !m];
    assert!(close(kappa.value(SubsetMask(1)).0, dual(1)));
    assert!(close(kappa.value(SubsetMask(1)).0, 0.6));
    assert!(close(kappa.value(SubsetMask(2)).0, dual(2)));
    assert!(close(kappa.value(SubsetMask(2)).0, 0.0));
}

#[test]
fn pushforward_onto_a_point() {
    let y = FiniteSpace::new(["c"]).unwrap();
    let f = PointMap::new(ab(), y.clone(), vec![0, 0]).unwrap();
    let d = PossibilityDistribution::new(ab(), vec![q(7, 10), q(1, 1)]).unwrap();
    let pushed = d.pushforward(&f).unwrap();
    assert_eq!(pushed.density(), [q(1, 1)]);
    assert!(d.capacity().pushforward(&f).unwrap() == pushed.capacity());
}

// ---- integral -----------------------------------------------------------

#[test]
fn superlevel_sets() {
    let f = UnitFunction::new(ab(), a(&[0.2, 0.8])).unwrap();
    assert_eq!(superlevel(&f, Approx(0.5)), SubsetMask::singleton(1));
    assert_eq!(superlevel(&f, Approx(0.0)), ab().full());
}

#[test]
fn integrals_against_the_sweep_oracle() {
    let dens = [1.0, 0.5, 0.25];
    let fv = [0.2, 0.8, 1.0];
    let d = PossibilityDistribution::new(abc(), a(&dens)).unwrap();
    let f = UnitFunction::new(abc(), a(&fv)).unwrap();
    let table = possibility_table(&dens);

    let p = integrate(&d.capacity(), &f, &TNorm::Product).value.0;
    assert!(close(p, sweep_integral(&table, &fv, prod)));
    assert!(close(p, 0.4));
    let fast = tnormed::integral::integrate_possibility_fast(&d, &f, &TNorm::Product).0;
    assert!(close(fast, p));

    let m = integrate(&d.capacity(), &f, &TNorm::Minimum).value.0;
    let sugeno = dens.iter().zip(fv).map(|(&x, y)| x.min(y)).fold(0.0, f64::max);
    assert!(close(m, sugeno) && close(m, 0.5));

    let l = integrate(&d.capacity(), &f, &TNorm::Lukasiewicz).value.0;
    assert!(close(l, sweep_integral(&table, &fv, luk)));

    let dirac = PossibilityDistribution::<Approx>::dirac(ab(), 1).capacity();
    let g = UnitFunction::new(ab(), a(&[0.2, 0.8])).unwrap();
    assert!(close(integrate(&dirac, &g, &TNorm::Product).value.0, 0.8));
    let c = UnitFunction::constant(abc(), Approx(0.4));
    assert!(close(integrate(&d.capacity(), &c, &TNorm::Lukasiewicz).value.0, 0.4));
}

#[test]
fn comonotone_pairs() {
    let f = UnitFunction::new(ab(), a(&[0.1, 0.9])).unwrap();
    assert!(comonotone(&f, &UnitFunction::new(ab(), a(&[0.2, 0.7])).unwrap()));
    assert!(!comonotone(&f, &UnitFunction::new(ab(), a(&[0.7, 0.2])).unwrap()));
    assert!(comonotone(&f, &UnitFunction::constant(ab(), Approx(0.3))));
}

#[test]
fn witness_for_the_non_possibility_table() {
    let nu = Capacity::new(ab(), vec![q(0, 1), q(1, 2), q(1, 2), q(1, 1)]).unwrap();
    let table = [0.0, 0.5, 0.5, 1.0];
    for op in [TNorm::Minimum, TNorm::Product, TNorm::Lukasiewicz] {
        let (f, g) = characterization_witness(&nu, &op).expect("witness");
        assert_eq!(f.values(), [q(1, 1), q(0, 1)]);
        assert_eq!(g.values(), [q(0, 1), q(1, 1)]);
        // indicator integrals are capacity values
        let oracle = |v: &[f64]| sweep_integral(&table, v, f64::min);
        assert!(oracle(&[1.0, 1.0]) > oracle(&[1.0, 0.0]).max(oracle(&[0.0, 1.0])));
        assert_eq!(integrate(&nu, &f.join(&g), &op).value, q(1, 1));
        assert_eq!(integrate(&nu, &f, &op).value, q(1, 2));
    }
    let d = PossibilityDistribution::new(abc(), vec![q(1, 4), q(1, 1), q(1, 2)]).unwrap();
    assert!(characterization_witness(&d.capacity(), &TNorm::Minimum).is_none());
}

// ---- max-* measures -----------------------------------------------------

#[test]
fn evaluation_of_a_normal_form() {
    let mu = StarMeasure::new(vec![(0usize, Approx(1.0)), (1, Approx(0.5))]).unwrap();
    let fv = [0.2, 0.8];
    let f = UnitFunction::new(ab(), a(&fv)).unwrap();
    let v = evaluate(&mu, &f, &TNorm::Product).0;
    assert!(close(v, eval_terms(&[(0, 1.0), (1, 0.5)], &fv, prod)) && close(v, 0.4));
    let via_density = integrate(&PossibilityDistribution::new(ab(), a(&[1.0, 0.5])).unwrap().capacity(), &f, &TNorm::Product);
    assert!(close(v, via_density.value.0));
    assert!(close(evaluate(&mu, &UnitFunction::constant(ab(), Approx(1.0)), &TNorm::Product).0, 1.0));
}

#[test]
fn merging_weights_under_a_map() {
    let y = FiniteSpace::new(["c", "d"]).unwrap();
    let g = PointMap::new(ab(), y.clone(), vec![1, 1]).unwrap();
    let mu = StarMeasure::new(vec![(0usize, q(1, 2)), (1, q(1, 1))]).unwrap();
    let pushed = functor_map(&g, &mu);
    assert_eq!(pushed.terms(), [(1usize, q(1, 1))]);
    for phi in UnitFunction::<Exact>::grid_functions(&y, 4) {
        let pulled = UnitFunction::new(ab(), vec![phi.at(1), phi.at(1)]).unwrap();
        assert_eq!(evaluate(&pushed, &phi, &TNorm::Minimum), evaluate(&mu, &pulled, &TNorm::Minimum));
    }
}

#[test]
fn multiplication_worked_instance() {
    let mu1 = StarMeasure::new(vec![(0usize, q(1, 1)), (1, q(1, 2))]).unwrap();
    let mu2 = StarMeasure::new(vec![(0usize, q(1, 4)), (1, q(1, 1))]).unwrap();
    let big = StarMeasure::new(vec![(mu1, q(1, 1)), (mu2, q(3, 4))]).unwrap();
    let flat = multiplication(&big, &TNorm::Minimum);

    // Lambda(pi_f) = max_j alpha_j * mu_j(f)
    let lambda = |f: &[f64]| {
        let m1 = eval_terms(&[(0, 1.0), (1, 0.5)], f, f64::min);
        let m2 = eval_terms(&[(0, 0.25), (1, 1.0)], f, f64::min);
        m1.min(1.0).max(m2.min(0.75))
    };
    for (fv, expect) in [([1.0, 0.0], 1.0), ([0.0, 1.0], 0.75)] {
        let f = UnitFunction::new(ab(), vec![Exact::from_f64(fv[0]), Exact::from_f64(fv[1])]).unwrap();
        let got = evaluate(&flat, &f, &TNorm::Minimum).to_f64();
        assert!(close(got, lambda(&fv)) && close(got, expect));
    }
    assert_eq!(unit::<Exact>(1).terms(), [(1usize, q(1, 1))]);
}

#[test]
fn support_and_pruning() {
    let x = ab();
    let k = SubsetMask::singleton(0);
    for op in [TNorm::Minimum, TNorm::Product] {
        let mu = StarMeasure::new(vec![(0usize, Approx(1.0)), (1, Approx(0.5))]).unwrap();
        assert!(!is_supported_on(&mu, &x, k, &op));
        let pruned = StarMeasure::new(vec![(0usize, Approx(1.0)), (1, Approx(0.0))]).unwrap();
        assert!(is_supported_on(&pruned, &x, k, &op));
    }
}

// ---- possibility monad --------------------------------------------------

#[test]
fn mu_worked_instance() {
    let d1 = PossibilityDistribution::new(ab(), vec![q(1, 1), q(1, 2)]).unwrap();
    let d2 = PossibilityDistribution::new(ab(), vec![q(1, 4), q(1, 1)]).unwrap();
    let c = OuterPossibility::new(ab(), vec![(d1, q(1, 1)), (d2, q(3, 4))]).unwrap();
    // threshold sweep over t in {nu_i(F)}: C(F_t) = max of lambda_i with nu_i(F) >= t
    let sweep = |f: usize| {
        let tables = [possibility_table(&[1.0, 0.5]), possibility_table(&[0.25, 1.0])];
        let lambdas = [1.0, 0.75];
        tables
            .iter()
            .map(|t| t[f])
            .map(|t| {
                let c_ft = (0..2).filter(|&i| tables[i][f] >= t).map(|i| lambdas[i]).fold(0.0, f64::max);
                c_ft.min(t)
            })
            .fold(0.0, f64::max)
    };
    for (f, expect) in [(1usize, 1.0), (2, 0.75)] {
        let got = mu(&c, SubsetMask(f as u32), &TNorm::Minimum).to_f64();
        assert!(close(got, sweep(f)) && close(got, expect));
    }
}

#[test]
fn iso_of_a_density() {
    let d = PossibilityDistribution::new(ab(), vec![q(1, 1), q(1, 2)]).unwrap();
    assert_eq!(iso_l(&d).terms(), [(0usize, q(1, 1)), (1, q(1, 2))]);
    let x = abc();
    let d3 = PossibilityDistribution::new(x.clone(), vec![q(1, 4), q(1, 1), q(1, 2)]).unwrap();
    let table = possibility_table(&[0.25, 1.0, 0.5]);
    for m in x.subsets() {
        let v = evaluate(&iso_l(&d3), &UnitFunction::indicator(x.clone(), m), &TNorm::Product);
        assert!(close(v.to_f64(), table[m.index()]));
    }
}

// ---- convexity ----------------------------------------------------------

#[test]
fn combine_and_barycenter() {
    let p = |v: [f64; 2]| MaxStarPoint::new(a(&v)).unwrap();
    let pts = [p([0.2, 0.6]), p([0.9, 0.1])];
    let lambda = WeightVector::new(a(&[1.0, 0.5])).unwrap();
    let y = combine(&pts, &lambda, &TNorm::Product).unwrap();
    let oracle = [prod(1.0, 0.2).max(prod(0.5, 0.9)), prod(1.0, 0.6).max(prod(0.5, 0.1))];
    assert!(close(y.coords()[0].0, oracle[0]) && close(y.coords()[1].0, oracle[1]));
    assert!(close(y.coords()[0].0, 0.45) && close(y.coords()[1].0, 0.6));

    let mu = StarMeasure::new(vec![(pts[0].clone(), Approx(1.0)), (pts[1].clone(), Approx(0.5))]).unwrap();
    assert!(barycenter(&mu, &TNorm::Product).approx_eq(&y));

    let gens = PointCloud::new(pts.clone()).unwrap();
    let w = hull_membership(&y, &gens, &TNorm::Product).expect("in the hull");
    let order = gens.points().to_vec();
    assert!(combine(&order, &w, &TNorm::Product).unwrap().approx_eq(&y));
    assert!(hull_membership(&p([0.95, 0.1]), &gens, &TNorm::Product).is_none());
}

#[test]
fn opposite_corners() {
    let corners = cloud(&[(0, 2), (2, 0)], 2);
    let k = PointCloud::<Exact>::grid_cube(2, 2);
    assert!(!is_convex(&corners, &TNorm::Minimum).unwrap());
    assert!(is_convex(&k, &TNorm::Minimum).unwrap());
    let hull = monad_hull(&corners, &k, &TNorm::Minimum).unwrap();
    assert_ne!(hull, corners);
    let expect = closure_hull(&[(0, 2), (2, 0)], 2, min_grid);
    assert_eq!(as_pairs(&hull, 2), expect);
    for point in [(1, 2), (2, 1), (2, 2)] {
        assert!(expect.contains(&point));
    }
}

#[test]
fn hull_equals_closure_on_every_subset_of_the_small_cube() {
    let all: Vec<(i64, i64)> = (0..=2).flat_map(|x| (0..=2).map(move |y| (x, y))).collect();
    let k = PointCloud::<Exact>::grid_cube(2, 2);
    for (op, grid_op) in [(TNorm::Minimum, min_grid as fn(i64, i64, i64) -> i64), (TNorm::Lukasiewicz, luk_grid)] {
        for mask in 1u32..1 << all.len() {
            let seed: Vec<_> = (0..all.len()).filter(|i| mask >> i & 1 == 1).map(|i| all[i]).collect();
            let hull = monad_hull(&cloud(&seed, 2), &k, &op).unwrap();
            assert_eq!(as_pairs(&hull, 2), closure_hull(&seed, 2, grid_op), "{} {seed:?}", op.name());
        }
    }
}

// ---- model format -------------------------------------------------------

#[test]
fn model_round_trip() {
    let text = "space X = a b c\ncapacity nu on X = {}:0 {a}:0.25 {b}:0.5 {a,b}:0.5 {c}:0 {a,c}:0.25 {b,c}:0.75 {a,b,c}:1\n";
    let model = parse_model(text).unwrap();
    assert_eq!(model.to_string(), text);
    assert!(parse_model("space X = a b\ndensity d on X = 0.5 0.25\n").is_err());
}

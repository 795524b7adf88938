use anyhow::{bail, Context};
use serde_json::{json, Value};
use tnormed::integral::{integrate_possibility_fast, superlevel};
use tnormed::model::Kind;
use tnormed::possibility::mu_capacity;
use tnormed::{
    barycenter, characterization_witness, hull_membership, integrate, is_convex, monad_hull, Capacity, FiniteSpace,
    MaxStarPoint, Model, PointCloud, Scalar, TNorm,
};

use crate::{Command, Opts, Outcome};

/// `explicit`, or the first declaration of one of `kinds`.
fn pick(model: &Model, explicit: &Option<String>, kinds: &[Kind], what: &str) -> anyhow::Result<String> {
    if let Some(name) = explicit {
        return Ok(name.clone());
    }
    model
        .decls()
        .iter()
        .find(|d| kinds.contains(&d.kind()))
        .map(|d| d.name().to_string())
        .with_context(|| format!("the model declares no {what}"))
}

fn tnorm<S: Scalar>(opts: &Opts, model: &Model, grid: Option<u32>) -> anyhow::Result<TNorm<S>> {
    let op = match &opts.tnorm {
        Some(name) => TNorm::by_name(name)?,
        None => model.tnorm::<S>()?.unwrap_or(TNorm::Minimum),
    };
    if let Some(n) = grid {
        if !op.grid_policy(n).closed {
            bail!("t-norm `{}` is not closed on the grid of resolution {n}", op.name());
        }
    }
    Ok(op)
}

fn table<S: Scalar>(nu: &Capacity<S>) -> String {
    let space = nu.space();
    space
        .subsets()
        .map(|m| format!("{}:{}", space.render(m), nu.value(m)))
        .collect::<Vec<_>>()
        .join(" ")
}

fn table_json<S: Scalar>(nu: &Capacity<S>) -> Value {
    let space = nu.space();
    space
        .subsets()
        .map(|m| json!({ "subset": space.render(m), "value": nu.value(m).to_string() }))
        .collect()
}

fn joined<S: Scalar>(values: &[S]) -> String {
    values.iter().map(S::to_string).collect::<Vec<_>>().join(" ")
}

fn space_decl(space: &FiniteSpace, name: &str) -> String {
    format!("space {name} = {}", space.labels().join(" "))
}

/// A capacity as model text, with its density when it is a possibility.
fn capacity_text<S: Scalar>(nu: &Capacity<S>, name: &str, space: &str) -> String {
    let mut text = format!("capacity {name} on {space} = {}", table(nu));
    if let Some(d) = nu.to_distribution() {
        text.push_str(&format!("\ndensity {name} on {space} = {}", joined(d.density())));
    }
    text
}

fn space_name(model: &Model, space: &FiniteSpace) -> String {
    model
        .decls()
        .iter()
        .find(|d| d.kind() == Kind::Space && model.space(d.name()).ok() == Some(space))
        .map_or_else(|| "X".to_string(), |d| d.name().to_string())
}

fn points_text<S: Scalar>(points: &[MaxStarPoint<S>]) -> String {
    points.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

pub fn run<S: Scalar>(opts: &Opts, model: &Model, grid: Option<u32>, command: &Command) -> anyhow::Result<Outcome> {
    let op = tnorm::<S>(opts, model, grid)?;
    let plain = |text: String, json: Value| Outcome { text, json, counterexample: false };
    match command {
        Command::Integrate { capacity, function, .. } => {
            let cname = pick(model, capacity, &[Kind::Capacity, Kind::Density], "capacity or density")?;
            let fname = pick(model, function, &[Kind::Function], "function")?;
            let nu = model.capacity::<S>(&cname)?;
            let f = model.function::<S>(&fname)?;
            if nu.space() != f.space() {
                bail!("`{cname}` and `{fname}` live on different spaces");
            }
            let report = integrate(&nu, &f, &op);
            let mut thresholds: Vec<S> = f.values().iter().copied().filter(|&v| v > S::zero()).collect();
            thresholds.sort();
            thresholds.dedup();
            let space = nu.space();
            let mut text = format!(
                "integral of {fname} against {cname} under {}: {}\nattained at t = {} on {}\ntrace:",
                op.name(),
                report.value,
                report.threshold,
                space.render(report.level_set)
            );
            let mut trace = Vec::new();
            for t in thresholds {
                let level = superlevel(&f, t);
                let v = op.apply(nu.value(level), t);
                text.push_str(&format!("\n  t = {t}  nu({}) = {}  -> {v}", space.render(level), nu.value(level)));
                trace.push(json!({
                    "threshold": t.to_string(),
                    "level_set": space.render(level),
                    "capacity": nu.value(level).to_string(),
                    "value": v.to_string(),
                }));
            }
            if let Some(d) = nu.to_distribution() {
                let fast = integrate_possibility_fast(&d, &f, &op);
                text.push_str(&format!("\nmax_x d(x) * f(x) = {fast}"));
            }
            let json = json!({
                "tnorm": op.name(),
                "capacity": cname,
                "function": fname,
                "value": report.value.to_string(),
                "threshold": report.threshold.to_string(),
                "level_set": space.render(report.level_set),
                "trace": trace,
            });
            Ok(plain(text, json))
        }
        Command::CheckCapacity { capacity, .. } => {
            let name = pick(model, capacity, &[Kind::Capacity, Kind::Density], "capacity or density")?;
            let nu = model.capacity::<S>(&name)?;
            let yes = |b: bool| if b { "yes" } else { "no" };
            let possibility = nu.is_possibility();
            let necessity = nu.is_necessity();
            let witness = characterization_witness(&nu, &op);
            let space = nu.space();
            let mut text = format!(
                "capacity {name}: {}\npossibility: {}\nnecessity: {}\nintegral under {} is maxitive: {}",
                table(&nu),
                yes(possibility),
                yes(necessity),
                op.name(),
                yes(witness.is_none())
            );
            let witness_json = match &witness {
                Some((f, g)) => {
                    let support = |u: &tnormed::UnitFunction<S>| {
                        tnormed::SubsetMask::from_points((0..space.len()).filter(|&i| u.at(i) == S::one()))
                    };
                    let (a, b) = (support(f), support(g));
                    let joint = integrate(&nu, &f.join(g), &op).value;
                    let (left, right) = (integrate(&nu, f, &op).value, integrate(&nu, g, &op).value);
                    text.push_str(&format!(
                        "\nwitness: f = chi{}, g = chi{}: integral of f v g is {joint}, but the integrals of f and g are {left} and {right}",
                        space.render(a),
                        space.render(b)
                    ));
                    json!({
                        "f": space.render(a),
                        "g": space.render(b),
                        "integral_of_join": joint.to_string(),
                        "integral_f": left.to_string(),
                        "integral_g": right.to_string(),
                    })
                }
                None => Value::Null,
            };
            let json = json!({
                "capacity": name,
                "table": table_json(&nu),
                "possibility": possibility,
                "necessity": necessity,
                "tnorm": op.name(),
                "maxitive": witness.is_none(),
                "witness": witness_json,
            });
            Ok(Outcome { text, json, counterexample: witness.is_some() })
        }
        Command::Dual { capacity, .. } => {
            let name = pick(model, capacity, &[Kind::Capacity, Kind::Density], "capacity or density")?;
            let dual = model.capacity::<S>(&name)?.dual();
            let space = space_name(model, dual.space());
            let text = capacity_text(&dual, &format!("{name}_dual"), &space);
            Ok(plain(text, json!({ "capacity": name, "dual": table_json(&dual) })))
        }
        Command::Pushforward { capacity, map, .. } => {
            let name = pick(model, capacity, &[Kind::Capacity, Kind::Density], "capacity or density")?;
            let mname = pick(model, map, &[Kind::Map], "map")?;
            let g = model.map(&mname)?;
            let pushed = model.capacity::<S>(&name)?.pushforward(&g)?;
            let target = space_name(model, g.target());
            let text = format!(
                "{}\n{}",
                space_decl(g.target(), &target),
                capacity_text(&pushed, &format!("{name}_pushed"), &target)
            );
            Ok(plain(text, json!({ "capacity": name, "map": mname, "pushforward": table_json(&pushed) })))
        }
        Command::MonadMul { outer, .. } => {
            let name = pick(model, outer, &[Kind::Outer], "outer possibility")?;
            let c = model.outer::<S>(&name)?;
            let flat = mu_capacity(&c, &op)?;
            let space = space_name(model, c.space());
            let text = capacity_text(&flat, &format!("{name}_mu"), &space);
            let density = flat.to_distribution().map(|d| d.density().iter().map(S::to_string).collect::<Vec<_>>());
            let json = json!({
                "outer": name,
                "tnorm": op.name(),
                "capacity": table_json(&flat),
                "density": density,
            });
            Ok(plain(text, json))
        }
        Command::Barycenter { measure, .. } => {
            let name = pick(model, measure, &[Kind::Measure], "measure")?;
            let mu = model.coords_measure::<S>(&name)?;
            let point = barycenter(&mu, &op);
            Ok(plain(
                format!("point {name}_barycenter = {point}"),
                json!({ "measure": name, "tnorm": op.name(), "barycenter": point.to_string() }),
            ))
        }
        Command::Hull { points, query, .. } => {
            let name = pick(model, points, &[Kind::Points], "point set")?;
            let cloud = model.cloud::<S>(&name)?;
            let query = match query {
                Some(q) => Some(q.clone()),
                None => model.first(Kind::Point).map(str::to_string),
            };
            if let Some(qname) = query {
                let y = model.point::<S>(&qname)?;
                let weights = hull_membership(&y, &cloud, &op);
                let (text, json) = match &weights {
                    Some(w) => (
                        format!(
                            "{qname} = {y} is in the hull of {name}\nweights: {}\ngenerators: {}",
                            joined(w.weights()),
                            points_text(cloud.points())
                        ),
                        json!({
                            "query": y.to_string(),
                            "member": true,
                            "weights": w.weights().iter().map(S::to_string).collect::<Vec<_>>(),
                            "generators": cloud.points().iter().map(ToString::to_string).collect::<Vec<_>>(),
                        }),
                    ),
                    None => (
                        format!("{qname} = {y} is not in the hull of {name}"),
                        json!({ "query": y.to_string(), "member": false }),
                    ),
                };
                return Ok(plain(text, json));
            }
            let n = opts.grid.or(grid).unwrap_or_else(|| model.common_denominator());
            let cloud = cloud.on_grid(n)?;
            let ambient = PointCloud::<S>::grid_cube(cloud.dim(), n);
            let hull = monad_hull(&cloud, &ambient, &op)?;
            let convex = is_convex(&cloud, &op)?;
            let text = format!(
                "{name} is {}convex on the grid of resolution {n} under {}\npoints {name}_hull = {}",
                if convex { "" } else { "not " },
                op.name(),
                points_text(hull.points())
            );
            let json = json!({
                "points": name,
                "grid": n,
                "tnorm": op.name(),
                "convex": convex,
                "hull": hull.points().iter().map(ToString::to_string).collect::<Vec<_>>(),
            });
            Ok(plain(text, json))
        }
        Command::VerifyLaws { .. } => unreachable!(),
    }
}

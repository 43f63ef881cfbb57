use std::path::Path;

use polychain::chains::{to_obj, to_svg, PolyChain};
use polychain::constructions::{
    build_cycle, build_filling, build_multigraph, extract_qvalued, is_positively_oriented_chain, Construction,
    ConstructionError,
};
use polychain::energy::{
    counterexample_multigraph, energy_chain, energy_graph_chain, filling_energy_lp, lp_report, rational_approx,
    strict_gap_witness, Area, Bridge, CounterexampleConfig, Integrand,
};
use polychain::grassmann::{wasserstein_weighted, GrassmannMeasure, RationalPlane, WeightedDirection};
use polychain::rational::format_rat;
use serde_json::{json, Value};

use crate::converge::convergence_csv;
use crate::inputs::{self, default_height};
use crate::{Command, Common, Construction as Kind, Failure, Format};

const SVG_PX: f64 = 512.0;

pub fn common_of(c: &Command) -> &Common {
    match c {
        Command::Cycle { common, .. }
        | Command::Fill { common, .. }
        | Command::Multigraph { common, .. }
        | Command::Extract { common, .. }
        | Command::Energy { common, .. }
        | Command::Lp { common, .. }
        | Command::Approx { common, .. }
        | Command::Counterexample { common, .. }
        | Command::Converge { common, .. }
        | Command::Export { common, .. } => common,
    }
}

fn path(p: &Path) -> Value {
    Value::String(p.display().to_string())
}

/// Every run parameter, echoed into the report.
fn config(c: &Command) -> Value {
    let common = common_of(c);
    let mut v = json!({
        "format": common.format.name(),
        "offset_seed": common.offset_seed,
        "quad_order": common.quad_order,
        "out": common.out.as_deref().map(path),
    });
    let extra = match c {
        Command::Cycle { measure, sizes, .. } => json!({"command": "cycle", "measure": path(measure), "sizes": sizes}),
        Command::Fill { measure, sizes, .. } => json!({"command": "fill", "measure": path(measure), "sizes": sizes}),
        Command::Multigraph { measure, sizes, .. } => {
            json!({"command": "multigraph", "measure": path(measure), "sizes": sizes})
        }
        Command::Extract { chain, .. } => json!({"command": "extract", "chain": path(chain)}),
        Command::Energy { chain, psi, .. } => {
            json!({"command": "energy", "chain": path(chain), "psi": psi.as_deref().map(path)})
        }
        Command::Lp { psi, candidates, .. } => json!({"command": "lp", "psi": path(psi), "candidates": path(candidates)}),
        Command::Approx { measure, eps, positive, .. } => {
            json!({"command": "approx", "measure": path(measure), "eps": eps, "positive": positive})
        }
        Command::Counterexample { psi, candidates, eps, budget, .. } => json!({
            "command": "counterexample",
            "psi": path(psi),
            "candidates": path(candidates),
            "eps": eps,
            "budget": budget,
        }),
        Command::Converge { measure, sizes, construction, psi, .. } => json!({
            "command": "converge",
            "measure": path(measure),
            "sizes": sizes,
            "construction": format!("{construction:?}").to_lowercase(),
            "psi": psi.as_deref().map(path),
        }),
        Command::Export { chain, .. } => json!({"command": "export", "chain": path(chain)}),
    };
    for (k, x) in extra.as_object().expect("object").iter() {
        v[k] = x.clone();
    }
    v
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn construction_failure(e: ConstructionError) -> Failure {
    match e {
        ConstructionError::PositivityPostcondition(_) => {
            Failure::Postcondition { kind: e.kind().to_string(), message: e.to_string(), output: None }
        }
        other => Failure::input(other.kind(), other.to_string()),
    }
}

fn render_chain(chain: &PolyChain, format: Format, json_body: Value) -> Result<String, Failure> {
    match format {
        Format::Json => Ok(pretty(&json_body)),
        Format::Svg => to_svg(chain, SVG_PX).map_err(|e| Failure::input(e.kind(), e.to_string())),
        Format::Obj => to_obj(chain).map_err(|e| Failure::input(e.kind(), e.to_string())),
        Format::Csv => Err(Failure::input("InvalidArgument", "csv output is only available for converge")),
    }
}

fn json_only(format: Format) -> Result<(), Failure> {
    match format {
        Format::Json => Ok(()),
        other => Err(Failure::input("InvalidArgument", format!("{} output is not available here", other.name()))),
    }
}

fn single_size(sizes: &str, needs_height: bool) -> Result<(u32, u32), Failure> {
    let list = inputs::sizes(sizes)?;
    let [(n, m)] = list.as_slice() else {
        return Err(Failure::input("InvalidArgument", "exactly one grid size expected"));
    };
    Ok((*n, if needs_height { m.unwrap_or_else(|| default_height(*n)) } else { m.unwrap_or(0) }))
}

fn construct(c: &Command, kind: Kind, measure: &Path, sizes: &str, common: &Common) -> Result<String, Failure> {
    let mu = inputs::measure(measure)?;
    let (n, m) = single_size(sizes, kind != Kind::Cycle)?;
    let p = common.offset_seed;
    let built: Construction = match kind {
        Kind::Cycle => build_cycle(&mu, n, p),
        Kind::Fill => build_filling(&mu, n, m, p),
        Kind::Multigraph => build_multigraph(&mu, n, m, p),
    }
    .map_err(construction_failure)?;
    let mut report = serde_json::to_value(&built.report).expect("serializable");
    report["cells"] = json!(built.chain.len());
    report["size"] = json!(n);
    if kind != Kind::Cycle {
        report["height"] = json!(m);
    }
    let body = json!({
        "config": config(c),
        "report": report,
        "chain": built.chain.to_json(false),
    });
    let text = render_chain(&built.chain, common.format, body)?;
    if !built.report.boundary_check {
        return Err(Failure::Postcondition {
            kind: "BoundaryMismatchError".into(),
            message: "constructed chain fails its boundary check".into(),
            output: Some(text),
        });
    }
    Ok(text)
}

fn energy_cmd(c: &Command, chain: &Path, psi: Option<&Path>, common: &Common) -> Result<String, Failure> {
    json_only(common.format)?;
    let t = inputs::chain(chain)?.refined();
    let integrand: Box<dyn Integrand + Send + Sync> = match psi {
        Some(p) => inputs::integrand(p, t.n, t.d)?,
        None => Box::new(Area),
    };
    let graph = if t.d >= 1 && t.d < t.n && is_positively_oriented_chain(&t) {
        energy_graph_chain(&Bridge { psi: integrand.as_ref(), n: t.n, d: t.d }, &t).ok()
    } else {
        None
    };
    Ok(pretty(&json!({
        "config": config(c),
        "energy": energy_chain(integrand.as_ref(), &t),
        "mass": t.mass(),
        "graph_energy": graph,
        "cells": t.len(),
    })))
}

fn lp_cmd(c: &Command, psi: &Path, candidates: &Path, common: &Common) -> Result<String, Failure> {
    json_only(common.format)?;
    let (p0, cands) = inputs::candidates(candidates)?;
    let integrand = inputs::integrand(psi, p0.n, p0.d)?;
    let lp = filling_energy_lp(integrand.as_ref(), &p0, &cands).map_err(|e| Failure::input(e.kind(), e.to_string()))?;
    let witness =
        strict_gap_witness(integrand.as_ref(), &p0, &cands).map_err(|e| Failure::input(e.kind(), e.to_string()))?;
    let report = lp_report(&lp, witness.as_ref());
    let text = pretty(&json!({ "config": config(c), "p0": p0.to_string(), "report": report }));
    if lp.solution.primal_residual > 1e-9 || lp.solution.slackness_residual > 1e-9 {
        return Err(Failure::Postcondition {
            kind: "LpCertificateError".into(),
            message: format!(
                "residuals {} / {} exceed 1e-9",
                lp.solution.primal_residual, lp.solution.slackness_residual
            ),
            output: Some(text),
        });
    }
    Ok(text)
}

fn approx_cmd(c: &Command, measure: &Path, eps: f64, positive: bool, common: &Common) -> Result<String, Failure> {
    json_only(common.format)?;
    let (n, d, atoms) = inputs::float_atoms(measure)?;
    let p0 = RationalPlane::coordinate(n, d);
    let mu = rational_approx(&atoms, n, d, eps, positive.then_some(&p0)).map_err(|e| Failure::input(e.kind(), e.to_string()))?;
    let out: Vec<WeightedDirection> =
        mu.atoms().map(|a| WeightedDirection { omega: a.plane.key().omega().coords, mass: a.mass() }).collect();
    let w = wasserstein_weighted(&atoms, &out).map_err(|e| Failure::input(e.kind(), e.to_string()))?;
    let class: Vec<String> = mu.barycenter_exact().coords.iter().map(format_rat).collect();
    Ok(pretty(&json!({
        "config": config(c),
        "measure": mu.to_json(),
        "class": class,
        "wasserstein": w,
        "mass_in": atoms.iter().map(|a| a.mass).sum::<f64>(),
        "mass_out": mu.total_mass(),
    })))
}

fn counterexample_cmd(
    c: &Command,
    psi: &Path,
    candidates: &Path,
    eps: f64,
    budget: Option<usize>,
    common: &Common,
) -> Result<String, Failure> {
    json_only(common.format)?;
    let (p0, cands) = inputs::candidates(candidates)?;
    if (p0.n, p0.d) != (2, 1) || p0 != RationalPlane::coordinate(2, 1) {
        return Err(Failure::input("UnsupportedError", "counterexamples are built for lines in the plane over the first axis"));
    }
    let integrand = inputs::integrand(psi, 2, 1)?;
    let witness = strict_gap_witness(integrand.as_ref(), &p0, &cands)
        .map_err(|e| Failure::input(e.kind(), e.to_string()))?
        .ok_or_else(|| Failure::input("NoWitnessError", "the candidate set shows no polyconvexity gap"))?;
    let mut cfg = CounterexampleConfig { prime: common.offset_seed, ..CounterexampleConfig::default() };
    if let Some(b) = budget {
        cfg.cell_budget = b;
    }
    let bridge = Bridge { psi: integrand.as_ref(), n: 2, d: 1 };
    let out = counterexample_multigraph(&bridge, &witness, eps, &cfg).map_err(|e| match e.kind() {
        "GapTooSmall" => Failure::Postcondition { kind: e.kind().into(), message: e.to_string(), output: None },
        k => Failure::input(k, e.to_string()),
    })?;
    Ok(pretty(&json!({
        "config": config(c),
        "gap": out.gap,
        "margin": out.margin,
        "energy": out.energy,
        "reference": out.reference,
        "q": out.q,
        "size": [out.size.0, out.size.1],
        "tv_error": out.tv_error,
        "measure": out.measure.to_json(),
        "u": out.u.to_json(),
    })))
}

pub fn run(c: &Command) -> Result<String, Failure> {
    match c {
        Command::Cycle { measure, sizes, common } => construct(c, Kind::Cycle, measure, sizes, common),
        Command::Fill { measure, sizes, common } => construct(c, Kind::Fill, measure, sizes, common),
        Command::Multigraph { measure, sizes, common } => construct(c, Kind::Multigraph, measure, sizes, common),
        Command::Extract { chain, common } => {
            json_only(common.format)?;
            let t = inputs::chain(chain)?;
            let (q, u) = extract_qvalued(&t.refined()).map_err(|e| Failure::input(e.kind(), e.to_string()))?;
            Ok(pretty(&json!({ "config": config(c), "q": q, "u": u.to_json() })))
        }
        Command::Energy { chain, psi, common } => energy_cmd(c, chain, psi.as_deref(), common),
        Command::Lp { psi, candidates, common } => lp_cmd(c, psi, candidates, common),
        Command::Approx { measure, eps, positive, common } => approx_cmd(c, measure, *eps, *positive, common),
        Command::Counterexample { psi, candidates, eps, budget, common } => {
            counterexample_cmd(c, psi, candidates, *eps, *budget, common)
        }
        Command::Converge { measure, sizes, construction, psi, common } => {
            if common.format != Format::Csv && common.format != Format::Json {
                return Err(Failure::input("InvalidArgument", "converge writes csv"));
            }
            let mu: GrassmannMeasure = inputs::measure(measure)?;
            let integrand: Box<dyn Integrand + Send + Sync> = match psi {
                Some(p) => inputs::integrand(p, mu.n, mu.d)?,
                None => Box::new(Area),
            };
            let list = inputs::sizes(sizes)?;
            convergence_csv(&mu, *construction, &list, integrand.as_ref(), common)
        }
        Command::Export { chain, common } => {
            let t = inputs::chain(chain)?;
            render_chain(&t, common.format, json!(t.to_json(false)))
        }
    }
}

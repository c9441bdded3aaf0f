use std::collections::BTreeMap;

use orthobound::bounds::{BoundChain, Options};
use orthobound::family::{builtin_functions, FamilyKind};
use orthobound::hypothesis::recommended_tol;
use orthobound::integral::{integral_instance, sandwich_check, SandwichReport};
use orthobound::space::{QuadratureGrid, SampledFunction};
use orthobound::Result;
use serde_json::json;

use crate::{fail, print_json, EXIT_HYPOTHESIS, EXIT_OK, EXIT_VIOLATED};

/// Coefficient bounds: a dominant constant-like first slot and quickly
/// shrinking widths elsewhere, so that `sum (M_i - m_i) f_i >= 0` on the
/// whole interval for both built-in families.
fn coefficient_bounds(count: usize, scale: f64) -> (Vec<f64>, Vec<f64>) {
    (0..count)
        .map(|i| {
            if i == 0 {
                (2.0 * scale, 3.0 * scale)
            } else {
                let w = 0.1 * scale / ((i + 1) * (i + 1)) as f64;
                (w, 2.0 * w)
            }
        })
        .unzip()
}

/// `L + theta(s) (U - L)` for the envelopes `L = sum m_i f_i`, `U = sum M_i f_i`.
fn between(
    fns: &[SampledFunction],
    grid: &QuadratureGrid,
    m: &[f64],
    big_m: &[f64],
    theta: impl Fn(f64) -> f64,
) -> Result<SampledFunction> {
    let envelope = |coef: &[f64], j: usize| coef.iter().zip(fns).map(|(c, f)| c * f.values()[j].re).sum::<f64>();
    let values: Vec<f64> = grid
        .nodes()
        .iter()
        .enumerate()
        .map(|(j, &s)| {
            let (lo, hi) = (envelope(m, j), envelope(big_m, j));
            lo + theta(s) * (hi - lo)
        })
        .collect();
    SampledFunction::from_real(&values)
}

struct Demo {
    gram_residual: f64,
    tolerance: f64,
    sandwich: BTreeMap<&'static str, SandwichReport>,
    hypotheses: serde_json::Value,
    chains: BTreeMap<&'static str, BoundChain>,
    hypotheses_hold: bool,
}

fn build(kind: FamilyKind, nodes: usize, count: usize) -> Result<Demo> {
    let grid = match kind {
        FamilyKind::Legendre => QuadratureGrid::gauss_legendre(nodes, -1.0, 1.0)?,
        _ => QuadratureGrid::periodic(nodes)?,
    };
    let fns = builtin_functions(kind, count, &grid)?;
    let (m, big_m) = coefficient_bounds(count, 1.0);
    let (n, big_n) = coefficient_bounds(count, 1.5);
    let f = between(&fns, &grid, &m, &big_m, |s| 0.5 * (1.0 + (3.0 * s).sin()))?;
    let g = between(&fns, &grid, &n, &big_n, |s| 0.5 * (1.0 + (2.0 * s).cos()))?;
    let sf = sandwich_check(&f, &fns, &grid, &m, &big_m)?;
    let sg = sandwich_check(&g, &fns, &grid, &n, &big_n)?;

    let inst = integral_instance(&f, Some(&g), &fns, &grid, sf.corridor.clone(), Some(sg.corridor.clone()))?;
    let tolerance = recommended_tol(inst.family());
    let hf = inst.hypothesis_f(tolerance)?;
    let hg = inst.hypothesis_g(tolerance)?;
    let hypotheses_hold = hf.holds && hg.holds;
    let opts = Options::default().with_hypothesis_tol(tolerance).forced();
    let gruss = inst.gruss_bound(&opts)?;
    let chains = BTreeMap::from([
        ("bessel_counterpart", inst.bessel_counterpart(&opts)?),
        ("bessel_counterpart_real", inst.bessel_counterpart_real(&opts)?),
        ("norm_bound_linear", inst.norm_bound_linear(&opts)?),
        ("gruss_bound", gruss.chain),
        ("schwarz_step", gruss.schwarz_step),
        ("gruss_bound_real_squared", inst.gruss_bound_real_squared(&opts)?),
    ]);
    Ok(Demo {
        gram_residual: inst.family().gram_residual(),
        tolerance,
        sandwich: BTreeMap::from([("f", sf), ("g", sg)]),
        hypotheses: json!({ "f": hf, "g": hg }),
        chains,
        hypotheses_hold,
    })
}

pub fn run(kind: FamilyKind, nodes: usize, count: usize) -> u8 {
    let demo = match build(kind, nodes, count) {
        Ok(d) => d,
        Err(e) => return fail(e),
    };
    let violated = demo.chains.values().any(|c| !c.all_hold);
    let (status, code) = match (demo.hypotheses_hold, violated) {
        (false, _) => ("hypothesis_failed", EXIT_HYPOTHESIS),
        (true, true) => ("violated", EXIT_VIOLATED),
        (true, false) => ("ok", EXIT_OK),
    };
    print_json(&json!({
        "family": kind,
        "nodes": nodes,
        "count": count,
        "gram_residual": demo.gram_residual,
        "hypothesis_tolerance": demo.tolerance,
        "sandwich": demo.sandwich,
        "hypotheses": demo.hypotheses,
        "chains": demo.chains,
        "status": status,
    }));
    code
}

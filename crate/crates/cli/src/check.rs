use std::collections::BTreeMap;
use std::path::Path;

use orthobound::bounds::{
    self, bessel_counterpart, bessel_counterpart_real, companion_bound, gruss_bound, gruss_bound_real_squared,
    gruss_refined_midpoint, gruss_refined_sqrt, norm_bound_linear, norm_bound_quadratic, schwarz_counterparts,
    BoundChain, NormVariant, Options,
};
use orthobound::hypothesis::{check_hypothesis, recommended_tol, HypothesisReport};
use orthobound::instance::{parse_instance, Instance};
use orthobound::{Error, Field, Scalar};
use serde_json::{json, Value};

use crate::{fail, print_json, EXIT_HYPOTHESIS, EXIT_OK, EXIT_VIOLATED};

#[derive(Debug, Clone, Copy, PartialEq)]
enum Selector {
    RefinedSqrt,
    RefinedMidpoint,
    Quadratic(NormVariant),
    Linear,
    Bessel,
    Schwarz,
    Gruss,
    GrussSingle,
    Companion(f64),
}

fn parse_selector(s: &str) -> Result<Selector, String> {
    let sel = match s {
        "thm1.1" => Selector::RefinedSqrt,
        "thm2" => Selector::RefinedMidpoint,
        "thm2.1" => Selector::Quadratic(NormVariant::Cbs),
        "eq2.6" => Selector::Linear,
        "eq2.11:max" => Selector::Quadratic(NormVariant::MaxSum),
        "eq2.11:sum" => Selector::Quadratic(NormVariant::SumMax),
        "cor2.3" => Selector::Bessel,
        "cor2.5" => Selector::Schwarz,
        "thm3.1" => Selector::Gruss,
        "cor3.3" => Selector::GrussSingle,
        _ => {
            if let Some(p) = s.strip_prefix("eq2.11:holder:") {
                let p: f64 = p.parse().map_err(|_| format!("bad Hölder exponent in {s:?}"))?;
                Selector::Quadratic(NormVariant::Holder(p))
            } else if let Some(l) = s.strip_prefix("thm4.1:") {
                let l: f64 = l.parse().map_err(|_| format!("bad lambda in {s:?}"))?;
                Selector::Companion(l)
            } else {
                return Err(format!("unknown bound selector {s:?}"));
            }
        }
    };
    Ok(sel)
}

type Chains = BTreeMap<String, BoundChain>;

struct Evaluation {
    chains: Chains,
    ratio: Option<f64>,
}

impl Evaluation {
    fn one(name: &str, chain: BoundChain) -> Self {
        Self {
            chains: BTreeMap::from([(name.to_string(), chain)]),
            ratio: None,
        }
    }
}

/// Hypothesis reports the CLI computes up front. The Schwarz counterparts
/// check their own reduced hypothesis.
fn hypotheses(inst: &Instance, sel: Selector, tol: f64) -> orthobound::Result<BTreeMap<String, HypothesisReport>> {
    let mut out = BTreeMap::new();
    let fam = &inst.family;
    match sel {
        Selector::Schwarz => {}
        Selector::Companion(lambda) => {
            let (y, _) = inst.second()?;
            if !(lambda > 0.0 && lambda < 1.0) {
                return Err(Error::BadLambda(lambda));
            }
            if y.dim() != inst.x.dim() {
                return Err(Error::DimensionMismatch {
                    context: "x vs y dimension",
                    expected: inst.x.dim(),
                    found: y.dim(),
                });
            }
            let z = inst.x.scale(Scalar::new(lambda, 0.0)).axpy(Scalar::new(1.0 - lambda, 0.0), y);
            out.insert("z".into(), check_hypothesis(&z, fam, &inst.cx, tol)?);
        }
        Selector::RefinedSqrt | Selector::RefinedMidpoint | Selector::Gruss | Selector::GrussSingle => {
            let (y, cy) = inst.second()?;
            out.insert("x".into(), check_hypothesis(&inst.x, fam, &inst.cx, tol)?);
            out.insert("y".into(), check_hypothesis(y, fam, cy, tol)?);
        }
        Selector::Quadratic(_) | Selector::Linear | Selector::Bessel => {
            out.insert("x".into(), check_hypothesis(&inst.x, fam, &inst.cx, tol)?);
        }
    }
    Ok(out)
}

fn evaluate(inst: &Instance, sel: Selector, opts: &Options) -> orthobound::Result<Evaluation> {
    let (x, fam, cx) = (&inst.x, &inst.family, &inst.cx);
    let eval = match sel {
        Selector::RefinedSqrt => {
            let (y, cy) = inst.second()?;
            Evaluation::one("gruss_refined_sqrt", gruss_refined_sqrt(x, y, fam, cx, cy, opts)?)
        }
        Selector::RefinedMidpoint => {
            let (y, cy) = inst.second()?;
            Evaluation::one("gruss_refined_midpoint", gruss_refined_midpoint(x, y, fam, cx, cy, opts)?)
        }
        Selector::Quadratic(v) => Evaluation::one("norm_bound_quadratic", norm_bound_quadratic(x, fam, cx, v, opts)?),
        Selector::Linear => Evaluation::one("norm_bound_linear", norm_bound_linear(x, fam, cx, opts)?),
        Selector::Bessel => {
            let chain = bessel_counterpart(x, fam, cx, opts)?;
            let ratio = (chain.values[2] > 0.0).then(|| chain.values[1] / chain.values[2]);
            let mut eval = Evaluation::one("bessel_counterpart", chain);
            eval.ratio = ratio;
            if inst.field == Field::Real && cx.is_nonnegative_real() {
                eval.chains
                    .insert("bessel_counterpart_real".into(), bessel_counterpart_real(x, fam, cx, opts)?);
            }
            eval
        }
        Selector::Schwarz => {
            let (y, d, bd) = inst.schwarz()?;
            let s = schwarz_counterparts(x, y, d, bd, opts)?;
            Evaluation {
                chains: BTreeMap::from([
                    ("schwarz_linear".to_string(), s.linear),
                    ("schwarz_linear_defect".to_string(), s.linear_defect),
                    ("schwarz_quadratic".to_string(), s.quadratic),
                    ("schwarz_quadratic_defect".to_string(), s.quadratic_defect),
                ]),
                ratio: None,
            }
        }
        Selector::Gruss | Selector::GrussSingle => {
            if sel == Selector::GrussSingle && fam.len() != 1 {
                return Err(Error::NotSingleVector(fam.len()));
            }
            let (y, cy) = inst.second()?;
            let g = gruss_bound(x, y, fam, cx, cy, opts)?;
            let mut chains = BTreeMap::from([
                ("gruss_bound".to_string(), g.chain),
                ("schwarz_step".to_string(), g.schwarz_step),
            ]);
            if sel == Selector::GrussSingle {
                let ratio = g.ratio.ok_or(Error::ZeroVector("coefficient <x,e> or <y,e>"))?;
                chains.insert("gruss_bound_single_ratio".into(), ratio);
            } else if inst.field == Field::Real && cx.is_nonnegative_real() && cy.is_nonnegative_real() {
                chains.insert(
                    "gruss_bound_real_squared".into(),
                    gruss_bound_real_squared(x, y, fam, cx, cy, opts)?,
                );
            }
            Evaluation { chains, ratio: None }
        }
        Selector::Companion(lambda) => {
            let (y, _) = inst.second()?;
            Evaluation::one("companion_bound", companion_bound(x, y, fam, cx, lambda, opts)?)
        }
    };
    Ok(eval)
}

fn report(selector: &str, tol: f64, force: bool, status: &str, hyps: &BTreeMap<String, HypothesisReport>) -> Value {
    json!({
        "bound": selector,
        "hypothesis_tolerance": tol,
        "forced": force,
        "status": status,
        "hypotheses": hyps,
    })
}

pub fn run(path: &Path, selector: &str, force: bool, tolerance: Option<f64>) -> u8 {
    let sel = match parse_selector(selector) {
        Ok(s) => s,
        Err(e) => return fail(e),
    };
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => return fail(format!("{}: {e}", path.display())),
    };
    let inst = match parse_instance(&text) {
        Ok(i) => i,
        Err(e) => return fail(format!("{}: {e}", path.display())),
    };
    let tol = tolerance.unwrap_or_else(|| recommended_tol(&inst.family));
    if !(tol > 0.0 && tol.is_finite()) {
        return fail(Error::BadTolerance(tol));
    }
    let mut hyps = match hypotheses(&inst, sel, tol) {
        Ok(h) => h,
        Err(e) => return fail(e),
    };
    let mut failed = hyps.values().any(|h| !h.holds);
    if failed && !force {
        print_json(&report(selector, tol, force, "hypothesis_failed", &hyps));
        return EXIT_HYPOTHESIS;
    }

    let mut opts = Options::default().with_hypothesis_tol(tol);
    if force {
        opts = opts.forced();
    }
    let eval = match evaluate(&inst, sel, &opts) {
        Ok(e) => e,
        Err(Error::HypothesisFailed { which, report: h }) => {
            hyps.insert(which.to_string(), *h);
            print_json(&report(selector, tol, force, "hypothesis_failed", &hyps));
            return EXIT_HYPOTHESIS;
        }
        Err(e) => return fail(e),
    };
    if sel == Selector::Schwarz {
        let (y, d, bd) = inst.schwarz().expect("checked during evaluation");
        if let Ok(s) = schwarz_counterparts(&inst.x, y, d, bd, &opts) {
            failed |= !s.hypothesis.holds;
            hyps.insert("x".into(), s.hypothesis);
        }
    }
    let violated = eval.chains.values().any(|c| !c.all_hold);
    let (status, code) = match (failed, violated) {
        (true, _) => ("hypothesis_failed", EXIT_HYPOTHESIS),
        (false, true) => ("violated", EXIT_VIOLATED),
        (false, false) => ("ok", EXIT_OK),
    };
    let mut out = report(selector, tol, force, status, &hyps);
    out["chains"] = json!(eval.chains);
    if let Some(r) = eval.ratio {
        out["ratio"] = json!(r);
    }
    out["m_factor"] = json!(bounds::m_factor(&inst.cx).ok().map(|m| m.value));
    print_json(&out);
    code
}

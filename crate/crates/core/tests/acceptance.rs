//! Acceptance suite. Runs every criterion, prints one line per criterion and
//! exits nonzero if any fails.

use std::process::ExitCode;
use std::time::Instant;

use orthobound::bounds::{
    self, gruss_bound, gruss_refined_midpoint, gruss_refined_sqrt, m_factor, m_factor_identity_gap,
    m_factor_plus_form, Options,
};
use orthobound::experiments::{bound_comparison_search, fuzz_campaign, random_family, sharpness_sweep, FuzzConfig, SweepTarget};
use orthobound::family::{builtin_family, builtin_functions, FamilyKind};
use orthobound::hypothesis::{check_hypothesis, random_direction, recommended_tol, CorridorSpec, ScalarCorridor};
use orthobound::integral::{integral_instance, sandwich_check};
use orthobound::space::{embed, grid_inner, inner, QuadratureGrid, SampledFunction};
use orthobound::{Error, Field, Scalar, Vector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn field_of(k: u64) -> Field {
    if k.is_multiple_of(2) {
        Field::Real
    } else {
        Field::Complex
    }
}

fn hypothesis_identity() -> Outcome {
    const N: u64 = 100_000;
    let mut worst_gap = 0.0_f64;
    let (mut classified, mut band) = (0u64, 0u64);
    for k in 0..N {
        let mut rng = rng_for(1001, k);
        let field = field_of(k);
        let dim = rng.random_range(1..=16);
        let size = rng.random_range(1..=dim.min(8));
        let fam = random_family(&mut rng, dim, size, field).map_err(|e| e.to_string())?;
        let spec = CorridorSpec { field, ..CorridorSpec::real() }.with_signed(rng.random_bool(0.5));
        let c = spec.sample(&mut rng, size).map_err(|e| e.to_string())?;
        let slack = rng.random_range(0.0..=2.0);
        let center = fam.combine(c.midpoints()).map_err(|e| e.to_string())?;
        let x = &center + &random_direction(&mut rng, dim, field, slack * c.radius());
        let report = check_hypothesis(&x, &fam, &c, 1e-9).map_err(|e| format!("instance {k}: {e}"))?;
        let r2 = c.radius() * c.radius();
        let scale = r2.max(1.0);
        let gap = (report.cond_i_value - report.ball_form()).abs();
        worst_gap = worst_gap.max(gap / scale);
        ensure(gap <= 1e-10 * scale, || format!("instance {k}: gap {gap:e} at radius^2 {r2:e}"))?;
        if report.cond_i_value.abs() <= 1e-10 * scale {
            band += 1;
            continue;
        }
        classified += 1;
        let by_i = report.cond_i_value >= 0.0;
        let by_ii = report.cond_ii_residual <= report.radius;
        ensure(by_i == by_ii, || format!("instance {k}: conditions disagree"))?;
    }
    Ok(format!(
        "{N} instances, worst scaled gap {worst_gap:.1e}, {classified} classified identically, {band} in boundary band"
    ))
}

const FUZZ_KEYS: [&str; 23] = [
    "gruss_refined_sqrt",
    "gruss_refined_midpoint",
    "norm_bound_quadratic:cbs",
    "norm_bound_linear",
    "norm_bound_quadratic:max_sum",
    "norm_bound_quadratic:holder",
    "norm_bound_quadratic:sum_max",
    "bessel_counterpart",
    "bessel_counterpart_real",
    "schwarz:linear",
    "schwarz:linear_defect",
    "schwarz:quadratic",
    "schwarz:quadratic_defect",
    "gruss_bound",
    "schwarz_step",
    "gruss_bound_real_squared",
    "gruss_bound:single",
    "gruss_bound:single_ratio",
    "companion:0.1",
    "companion:0.5",
    "companion:0.9",
    "bessel_defect_nonnegative",
    "schwarz_step_unconditional",
];

fn theorem_chains() -> Outcome {
    let mut lines = Vec::new();
    for (field, count) in [(Field::Real, 10_000), (Field::Complex, 10_000)] {
        let cfg = FuzzConfig {
            seed: 2024,
            count,
            dim: 16,
            family_size: 8,
            field,
            signed: false,
        };
        let s = fuzz_campaign(&cfg).map_err(|e| e.to_string())?;
        ensure(s.clean(), || format!("{field:?}: violations {:?}, errors {:?}", s.violations, s.errors))?;
        for key in FUZZ_KEYS {
            let real_only = key.ends_with("_real") || key == "gruss_bound_real_squared";
            if real_only && field == Field::Complex {
                continue;
            }
            let n = s.evaluated.get(key).copied().unwrap_or(0);
            ensure(n > 0, || format!("{field:?}: {key} never evaluated"))?;
        }
        let min_slack = s.min_slack.values().copied().fold(f64::INFINITY, f64::min);
        lines.push(format!(
            "{field:?}: {} instances, {} chain kinds, 0 violations, min relative slack {min_slack:.1e}",
            s.instances,
            s.evaluated.len()
        ));
    }
    Ok(lines.join("; "))
}

const EPS: [f64; 4] = [0.5, 0.1, 0.01, 0.001];

fn sharpness_quarter() -> Outcome {
    let mut worst = 0.0_f64;
    for target in [SweepTarget::Cor23, SweepTarget::Thm21] {
        let rows = sharpness_sweep(target, &EPS).map_err(|e| e.to_string())?;
        for row in &rows {
            let err = (row.ratio - (1.0 - row.epsilon * row.epsilon)).abs();
            worst = worst.max(err);
            ensure(err <= 1e-12, || format!("{target:?} eps {}: ratio {} off by {err:e}", row.epsilon, row.ratio))?;
        }
        ensure(rows.windows(2).all(|w| w[1].ratio > w[0].ratio), || format!("{target:?}: ratios not increasing"))?;
        let sup = rows.iter().map(|r| r.ratio).fold(0.0, f64::max);
        // A constant c/4 with c < sup fails the instance attaining sup.
        ensure(sup >= 1.0 - 1e-6 - 1e-12, || format!("{target:?}: sup ratio {sup}"))?;
    }
    Ok(format!("ratio = 1 - eps^2 for eps in {EPS:?}, worst error {worst:.1e}"))
}

fn sharpness_sixteenth() -> Outcome {
    let rows = sharpness_sweep(SweepTarget::Cor32, &EPS).map_err(|e| e.to_string())?;
    let mut worst = 0.0_f64;
    for row in &rows {
        let expected = (1.0 - row.epsilon * row.epsilon).powi(2);
        let err = (row.ratio - expected).abs();
        worst = worst.max(err);
        ensure(err <= 1e-12, || format!("eps {}: ratio {} vs {expected}", row.epsilon, row.ratio))?;
    }
    Ok(format!("ratio = (1 - eps^2)^2 for eps in {EPS:?}, worst error {worst:.1e}"))
}

fn m_factor_sign() -> Outcome {
    let mut worst = 0.0_f64;
    let mut tested = 0;
    for k in 0..10_000u64 {
        let mut rng = rng_for(5005, k);
        let spec = CorridorSpec { field: field_of(k), ..CorridorSpec::real() }.with_signed(rng.random_bool(0.5));
        let n = rng.random_range(1..=8);
        let c = spec.sample(&mut rng, n).map_err(|e| e.to_string())?;
        if c.re_sum() <= 0.0 {
            continue;
        }
        tested += 1;
        let m = m_factor(&c).map_err(|e| e.to_string())?;
        let gap = m_factor_identity_gap(m.value, &c).map_err(|e| e.to_string())?;
        worst = worst.max(gap);
        ensure(gap <= 1e-12, || format!("corridor {k}: relative gap {gap:e}"))?;
    }
    let c = ScalarCorridor::new(vec![Scalar::new(1.0, 0.0)], vec![Scalar::new(1.0, 0.5)]).map_err(|e| e.to_string())?;
    let plus = m_factor_plus_form(&c).map_err(|e| e.to_string())?;
    let plus_gap = m_factor_identity_gap(plus, &c).map_err(|e| e.to_string())?;
    ensure(plus_gap > 1e-12, || "plus form satisfied the identity".into())?;
    Ok(format!(
        "{tested} corridors, worst relative gap {worst:.1e}; plus form on (1, 1+0.5i) misses by {plus_gap:.3}"
    ))
}

fn single_vector_real() -> Outcome {
    let mut worst = 0.0_f64;
    let e = Vector::unit(3, 0);
    let fam = orthobound::family::validate_family(vec![e], 1e-12).map_err(|e| e.to_string())?;
    for k in 0..1000u64 {
        let mut rng = rng_for(6006, k);
        let a = rng.random_range(0.01..5.0);
        let big_a = a + rng.random_range(0.0..5.0);
        let b = rng.random_range(0.01..5.0);
        let big_b = b + rng.random_range(0.0..5.0);
        let ca = ScalarCorridor::from_real(&[a], &[big_a]).map_err(|e| e.to_string())?;
        let cb = ScalarCorridor::from_real(&[b], &[big_b]).map_err(|e| e.to_string())?;
        let ma = m_factor(&ca).map_err(|e| e.to_string())?.value;
        let expected = (big_a - a) / (a * big_a).sqrt();
        let err = (ma - expected).abs() / expected.max(1.0);
        worst = worst.max(err);
        ensure(err <= 1e-12, || format!("a={a}, A={big_a}: {ma} vs {expected}"))?;

        let x = Vector::from_real(&[0.5 * (a + big_a), 0.1 * (big_a - a), 0.0]).map_err(|e| e.to_string())?;
        let y = Vector::from_real(&[0.5 * (b + big_b), 0.0, -0.2 * (big_b - b)]).map_err(|e| e.to_string())?;
        let g = gruss_bound(&x, &y, &fam, &ca, &cb, &Options::default()).map_err(|e| e.to_string())?;
        let ratio = g.ratio.ok_or("ratio form missing")?;
        let factor = (big_a - a) * (big_b - b) / (4.0 * (a * b * big_a * big_b).sqrt());
        let err = (ratio.values[1] - factor).abs() / factor.max(1.0);
        worst = worst.max(err);
        ensure(err <= 1e-12, || format!("product factor {} vs {factor}", ratio.values[1]))?;
        ensure(ratio.all_hold && g.chain.all_hold, || format!("instance {k}: chain violated"))?;
    }
    Ok(format!("1000 real pairs, worst relative error {worst:.1e}"))
}

fn same<T: PartialEq>(a: orthobound::Result<T>, b: orthobound::Result<T>) -> bool {
    matches!((a, b), (Ok(a), Ok(b)) if a == b)
}

fn integral_reduction() -> Outcome {
    let grid = QuadratureGrid::periodic(64).map_err(|e| e.to_string())?;
    let trig = builtin_family(FamilyKind::Trig, 5, Some(&grid)).map_err(|e| e.to_string())?;
    let residual = trig.gram_residual();
    ensure(residual <= 1e-8, || format!("trig gram residual {residual:e}"))?;

    let (mut passed, mut violated) = (0, 0);
    for k in 0..1000u64 {
        let mut rng = rng_for(7007, k);
        let (kind, grid) = if k % 2 == 0 {
            (FamilyKind::Trig, QuadratureGrid::periodic(rng.random_range(16..=64)).map_err(|e| e.to_string())?)
        } else {
            let n = rng.random_range(8..=32);
            (FamilyKind::Legendre, QuadratureGrid::gauss_legendre(n, -1.0, 1.0).map_err(|e| e.to_string())?)
        };
        let count = rng.random_range(1..=4);
        let fns = builtin_functions(kind, count, &grid).map_err(|e| e.to_string())?;
        let mut m = Vec::with_capacity(count);
        let mut big_m = Vec::with_capacity(count);
        for i in 0..count {
            let lo: f64 = if i == 0 { rng.random_range(0.5..3.0) } else { rng.random_range(0.0..0.3) };
            let width: f64 = if i == 0 { rng.random_range(0.5..2.0) } else { rng.random_range(0.0..0.2) };
            m.push(lo);
            big_m.push(lo + width);
        }
        let envelope = |coef: &[f64], j: usize| (0..count).map(|i| coef[i] * fns[i].values()[j].re).sum::<f64>();
        let values: Vec<f64> = (0..grid.len())
            .map(|j| {
                let (lo, hi) = (envelope(&m, j), envelope(&big_m, j));
                let theta: f64 = match rng.random_range(0..5) {
                    0 => 0.0,
                    1 => 1.0,
                    2 => rng.random_range(-0.05..1.05),
                    _ => rng.random(),
                };
                lo + theta * (hi - lo)
            })
            .collect();
        let f = SampledFunction::from_real(&values).map_err(|e| e.to_string())?;
        let g = SampledFunction::sample_real(&grid, |s| 1.0 + 0.3 * s.cos()).map_err(|e| e.to_string())?;

        let inner_matches = grid_inner(&f, &g, &grid).map_err(|e| e.to_string())?
            == inner(&embed(&f, &grid).map_err(|e| e.to_string())?, &embed(&g, &grid).map_err(|e| e.to_string())?)
                .map_err(|e| e.to_string())?;
        ensure(inner_matches, || format!("instance {k}: grid inner differs from embedded inner"))?;

        let report = match sandwich_check(&f, &fns, &grid, &m, &big_m) {
            Ok(r) => r,
            Err(Error::SandwichViolated { .. }) => {
                violated += 1;
                continue;
            }
            Err(e) => return Err(format!("instance {k}: {e}")),
        };
        let inst = integral_instance(&f, Some(&g), &fns, &grid, report.corridor.clone(), Some(report.corridor.clone()))
            .map_err(|e| e.to_string())?;
        let tol = recommended_tol(inst.family());
        let h = inst.hypothesis_f(tol).map_err(|e| format!("instance {k}: {e}"))?;
        ensure(h.holds, || format!("instance {k}: sandwich passed but hypothesis value {:e}", h.cond_i_value))?;
        passed += 1;

        let opts = Options::default().with_hypothesis_tol(tol).forced();
        let fam = inst.family();
        let (ef, eg) = (inst.f(), inst.g().unwrap());
        let c = &report.corridor;
        ensure(
            same(inst.bessel_counterpart(&opts), bounds::bessel_counterpart(ef, fam, c, &opts))
                && same(inst.bessel_counterpart_real(&opts), bounds::bessel_counterpart_real(ef, fam, c, &opts))
                && same(inst.norm_bound_linear(&opts), bounds::norm_bound_linear(ef, fam, c, &opts))
                && same(inst.gruss_bound(&opts), bounds::gruss_bound(ef, eg, fam, c, c, &opts))
                && same(inst.gruss_bound_real_squared(&opts), bounds::gruss_bound_real_squared(ef, eg, fam, c, c, &opts)),
            || format!("instance {k}: wrapper differs from embedded evaluation"),
        )?;
        let chain = inst.bessel_counterpart_real(&Options::default().with_hypothesis_tol(tol)).map_err(|e| e.to_string())?;
        ensure(chain.all_hold, || format!("instance {k}: real Bessel counterpart violated"))?;
    }
    ensure(passed >= 100, || format!("only {passed} sandwich successes"))?;
    Ok(format!(
        "trig(5) on 64 nodes residual {residual:.1e}; 1000 instances, {passed} sandwiches admissible, {violated} rejected; wrappers identical"
    ))
}

fn incomparability() -> Outcome {
    let w = bound_comparison_search(7, 10_000).map_err(|e| e.to_string())?;
    for (name, wit, sqrt_wins) in [("sqrt smaller", &w.sqrt_smaller, true), ("midpoint smaller", &w.midpoint_smaller, false)] {
        let fam = orthobound::family::validate_family(wit.family.clone(), 1e-10).map_err(|e| e.to_string())?;
        let opts = Options::default().with_hypothesis_tol(recommended_tol(&fam));
        let sq = gruss_refined_sqrt(&wit.x, &wit.y, &fam, &wit.cx, &wit.cy, &opts).map_err(|e| e.to_string())?;
        let mid = gruss_refined_midpoint(&wit.x, &wit.y, &fam, &wit.cx, &wit.cy, &opts).map_err(|e| e.to_string())?;
        ensure(sq.all_hold && mid.all_hold, || format!("{name}: chain violated"))?;
        let margin = if sqrt_wins { mid.values[1] - sq.values[1] } else { sq.values[1] - mid.values[1] };
        ensure(margin > 0.0, || format!("{name}: margin {margin:e}"))?;
    }
    Ok(format!(
        "seed 7: sqrt-smaller at trial {} (margin {:.3e}), midpoint-smaller at trial {} (margin {:.3e})",
        w.sqrt_smaller.trial, w.sqrt_smaller.margin, w.midpoint_smaller.trial, w.midpoint_smaller.margin
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("hypothesis identity and equivalence", hypothesis_identity),
        ("inequality chains hold under fuzzing", theorem_chains),
        ("constant 1/4 is sharp", sharpness_quarter),
        ("constant 1/16 is sharp", sharpness_sixteenth),
        ("M factor sign resolution", m_factor_sign),
        ("single-vector real consistency", single_vector_real),
        ("integral reduction", integral_reduction),
        ("incomparability witnesses", incomparability),
    ];
    let mut failures = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {} PASS {name} ({secs:.2}s): {detail}", k + 1),
            Err(detail) => {
                failures += 1;
                println!("criterion {} FAIL {name} ({secs:.2}s): {detail}", k + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

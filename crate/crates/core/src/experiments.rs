//! Extremal constructions, randomized comparisons and fuzz campaigns.

use std::collections::BTreeMap;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bounds::{
    bessel_counterpart, bessel_counterpart_real, bessel_defect, companion_bound, gruss_bound,
    gruss_bound_real_squared, gruss_defect, gruss_refined_midpoint, gruss_refined_sqrt,
    norm_bound_linear, norm_bound_quadratic, schwarz_counterparts, BoundChain, NormVariant, Options,
};
use crate::error::{Error, Result};
use crate::family::{gram_schmidt, validate_family, OrthonormalFamily};
use crate::hypothesis::{
    admissible_point, check_hypothesis, gaussian_vector, recommended_tol, CorridorSpec, ScalarCorridor,
};
use crate::space::{Field, Scalar, Vector};
use crate::tolerance::EXACT_FAMILY_TOL;

/// Random orthonormal family of `size` vectors in dimension `dim`.
pub fn random_family<R: Rng + ?Sized>(rng: &mut R, dim: usize, size: usize, field: Field) -> Result<OrthonormalFamily> {
    if dim == 0 {
        return Err(Error::ZeroDimension);
    }
    if size == 0 || size > dim {
        return Err(Error::BadConfig(format!("family size {size} must be in 1..={dim}")));
    }
    loop {
        let raw: Vec<Vector> = (0..size).map(|_| gaussian_vector(rng, dim, field)).collect();
        match gram_schmidt(&raw, EXACT_FAMILY_TOL) {
            Err(Error::RankDeficient { .. }) => continue,
            other => return other,
        }
    }
}

fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Slack for a random admissible point, with extra mass at the center and
/// on the boundary.
fn draw_slack<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    match rng.random_range(0..4) {
        0 => 0.0,
        1 => 1.0,
        _ => rng.random(),
    }
}

fn draw_point<R: Rng + ?Sized>(rng: &mut R, fam: &OrthonormalFamily, c: &ScalarCorridor, field: Field) -> Result<Vector> {
    let slack = draw_slack(rng);
    admissible_point(rng, fam, c, field, slack)
}

// ---------------------------------------------------------------------------
// Sharpness sweeps

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepTarget {
    /// `x = m e` against the quadratic norm bound with `m = 1-eps`, `M = 1+eps`.
    Thm21,
    /// Two-dimensional construction against the Bessel counterpart.
    Cor23,
    /// The same construction in both slots of the real squared Grüss bound.
    Cor32,
}

impl FromStr for SweepTarget {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "thm21" => Ok(Self::Thm21),
            "cor23" => Ok(Self::Cor23),
            "cor32" => Ok(Self::Cor32),
            other => Err(Error::BadConfig(format!("unknown sweep target {other:?}"))),
        }
    }
}

/// One row of a sweep; `ratio = defect / bound`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub epsilon: f64,
    pub ratio: f64,
    pub bound: f64,
    pub defect: f64,
}

/// Corridor `(1-eps, 1+eps)` on `e = (1,1)/sqrt 2` with `x = (phi, Phi)/sqrt 2`.
pub fn plane_construction(eps: f64) -> Result<(Vector, OrthonormalFamily, ScalarCorridor)> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let (phi, big_phi) = (1.0 - eps, 1.0 + eps);
    let fam = validate_family(vec![Vector::from_real(&[h, h])?], EXACT_FAMILY_TOL)?;
    let x = Vector::from_real(&[phi * h, big_phi * h])?;
    Ok((x, fam, ScalarCorridor::from_real(&[phi], &[big_phi])?))
}

pub fn sharpness_sweep(target: SweepTarget, eps_grid: &[f64]) -> Result<Vec<SweepRow>> {
    if eps_grid.is_empty() {
        return Err(Error::EmptySweep);
    }
    if let Some(&bad) = eps_grid.iter().find(|&&e| !(e > 0.0 && e < 1.0)) {
        return Err(Error::BadEpsilon(bad));
    }
    let opts = Options::default();
    eps_grid
        .iter()
        .map(|&eps| {
            let (defect, bound) = match target {
                SweepTarget::Thm21 => {
                    let (m, big_m) = (1.0 - eps, 1.0 + eps);
                    let fam = validate_family(vec![Vector::unit(2, 0)], EXACT_FAMILY_TOL)?;
                    let x = Vector::from_real(&[m, 0.0])?;
                    let c = ScalarCorridor::from_real(&[m], &[big_m])?;
                    let chain = norm_bound_quadratic(&x, &fam, &c, NormVariant::Cbs, &opts)?;
                    (chain.values[0], chain.values[1])
                }
                SweepTarget::Cor23 => {
                    let (x, fam, c) = plane_construction(eps)?;
                    let chain = bessel_counterpart(&x, &fam, &c, &opts)?;
                    (chain.values[1], chain.values[2])
                }
                SweepTarget::Cor32 => {
                    let (x, fam, c) = plane_construction(eps)?;
                    let chain = gruss_bound_real_squared(&x, &x, &fam, &c, &c, &opts)?;
                    (chain.values[1], chain.values[2])
                }
            };
            Ok(SweepRow {
                epsilon: eps,
                ratio: defect / bound,
                bound,
                defect,
            })
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Comparison of the two refined Grüss bounds

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub trial: u64,
    pub family: Vec<Vector>,
    pub x: Vector,
    pub y: Vector,
    pub cx: ScalarCorridor,
    pub cy: ScalarCorridor,
    /// Middle value of the square-root refinement.
    pub sqrt_bound: f64,
    /// Middle value of the midpoint refinement.
    pub midpoint_bound: f64,
    /// Amount by which the smaller bound undercuts the larger one.
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonWitnesses {
    pub seed: u64,
    pub trials_used: u64,
    /// An instance where the square-root refinement is strictly smaller.
    pub sqrt_smaller: Witness,
    /// An instance where the midpoint refinement is strictly smaller.
    pub midpoint_smaller: Witness,
}

/// Smallest separation, relative to the common outer bound, that counts as
/// a witness.
pub const WITNESS_RESOLUTION: f64 = 1e-6;

/// Searches random admissible pairs (dimension at most 8, at most 4
/// family members) for instances separating the two refined bounds in
/// each direction.
pub fn bound_comparison_search(seed: u64, trials: u64) -> Result<ComparisonWitnesses> {
    let mut sqrt_smaller = None;
    let mut midpoint_smaller = None;
    let mut used = 0;
    for trial in 0..trials {
        used = trial + 1;
        let mut rng = trial_rng(seed, trial);
        let field = if rng.random_bool(0.5) { Field::Real } else { Field::Complex };
        let dim = rng.random_range(1..=8);
        let size = rng.random_range(1..=dim.min(4));
        let fam = random_family(&mut rng, dim, size, field)?;
        let spec = CorridorSpec {
            field,
            ..CorridorSpec::real()
        };
        let cx = spec.sample(&mut rng, size)?;
        let cy = spec.sample(&mut rng, size)?;
        let x = draw_point(&mut rng, &fam, &cx, field)?;
        let y = draw_point(&mut rng, &fam, &cy, field)?;
        let opts = Options::default().with_hypothesis_tol(recommended_tol(&fam));
        let (Ok(sq), Ok(mid)) = (
            gruss_refined_sqrt(&x, &y, &fam, &cx, &cy, &opts),
            gruss_refined_midpoint(&x, &y, &fam, &cx, &cy, &opts),
        ) else {
            continue;
        };
        let (a, b) = (sq.values[1], mid.values[1]);
        let resolution = WITNESS_RESOLUTION * sq.values[2];
        let witness = |margin| Witness {
            trial,
            family: fam.members().to_vec(),
            x: x.clone(),
            y: y.clone(),
            cx: cx.clone(),
            cy: cy.clone(),
            sqrt_bound: a,
            midpoint_bound: b,
            margin,
        };
        if sqrt_smaller.is_none() && b - a > resolution {
            sqrt_smaller = Some(witness(b - a));
        } else if midpoint_smaller.is_none() && a - b > resolution {
            midpoint_smaller = Some(witness(a - b));
        }
        if sqrt_smaller.is_some() && midpoint_smaller.is_some() {
            break;
        }
    }
    Ok(ComparisonWitnesses {
        seed,
        trials_used: used,
        sqrt_smaller: sqrt_smaller.ok_or(Error::WitnessNotFound("square-root refinement smaller"))?,
        midpoint_smaller: midpoint_smaller.ok_or(Error::WitnessNotFound("midpoint refinement smaller"))?,
    })
}

// ---------------------------------------------------------------------------
// Equality catalog

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EqualityCase {
    pub name: String,
    /// What is expected to vanish.
    pub quantity: String,
    pub observed: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EqualityReport {
    pub cases: Vec<EqualityCase>,
    pub all_passed: bool,
}

pub const EQUALITY_TOL: f64 = 1e-12;

/// Runs the known equality and boundary instances. Failures are recorded
/// in the report rather than returned as errors.
pub fn equality_cases() -> EqualityReport {
    let mut cases = Vec::new();
    let mut push = |name: &str, quantity: &str, observed: Result<f64>| {
        let (observed, passed) = match observed {
            Ok(v) => (v, v.abs() <= EQUALITY_TOL),
            Err(_) => (f64::NAN, false),
        };
        cases.push(EqualityCase {
            name: name.into(),
            quantity: quantity.into(),
            observed,
            passed,
        });
    };
    let opts = Options::default();
    let axis = || validate_family(vec![Vector::unit(3, 0)], EXACT_FAMILY_TOL);

    push("x = m e, m = M", "quadratic norm bound slack", (|| {
        let m = 1.7;
        let c = ScalarCorridor::from_real(&[m], &[m])?;
        let chain = norm_bound_quadratic(&Vector::from_real(&[m, 0.0, 0.0])?, &axis()?, &c, NormVariant::Cbs, &opts)?;
        Ok(chain.slacks[0] / chain.scale())
    })());

    push("x = m e, m < M", "hypothesis value", (|| {
        let c = ScalarCorridor::from_real(&[0.5], &[2.5])?;
        let report = check_hypothesis(&Vector::from_real(&[0.5, 0.0, 0.0])?, &axis()?, &c, opts.hypothesis_tol)?;
        Ok(report.cond_i_value)
    })());

    push("x = m e, m = M", "linear norm bound slack", (|| {
        let c = ScalarCorridor::from_real(&[1.0], &[1.0])?;
        let chain = norm_bound_linear(&Vector::from_real(&[1.0, 0.0, 0.0])?, &axis()?, &c, &opts)?;
        Ok(chain.slacks[0])
    })());

    for eps in [0.5, 0.1, 0.01] {
        push(
            &format!("plane construction, eps = {eps}"),
            "defect / bound - (1 - eps^2)",
            (|| {
                let (x, fam, c) = plane_construction(eps)?;
                let chain = bessel_counterpart(&x, &fam, &c, &opts)?;
                Ok(chain.values[1] / chain.values[2] - (1.0 - eps * eps))
            })(),
        );
        push(
            &format!("plane construction, eps = {eps}"),
            "hypothesis value",
            (|| {
                let (x, fam, c) = plane_construction(eps)?;
                Ok(check_hypothesis(&x, &fam, &c, opts.hypothesis_tol)?.cond_i_value)
            })(),
        );
    }

    push("centered, zero-width corridor", "largest chain value", (|| {
        let fam = gram_schmidt(
            &[Vector::from_real(&[1.0, 1.0, 0.0])?, Vector::from_real(&[0.0, 1.0, 1.0])?],
            EXACT_FAMILY_TOL,
        )?;
        let center = [Scalar::new(2.0, 0.5), Scalar::new(-1.0, 1.0)];
        let c = ScalarCorridor::degenerate(center.to_vec())?;
        let x = fam.combine(&center)?;
        let chains = [
            bessel_counterpart(&x, &fam, &c, &opts)?,
            gruss_refined_sqrt(&x, &x, &fam, &c, &c, &opts)?,
            gruss_refined_midpoint(&x, &x, &fam, &c, &c, &opts)?,
            gruss_bound(&x, &x, &fam, &c, &c, &opts)?.chain,
        ];
        Ok(chains.iter().fold(0.0_f64, |m, ch| m.max(ch.scale())))
    })());

    push("centered pair", "square-root refinement middle value", (|| {
        let c = ScalarCorridor::from_real(&[1.0], &[3.0])?;
        let x = Vector::from_real(&[2.0, 0.0, 0.0])?;
        Ok(gruss_refined_sqrt(&x, &x, &axis()?, &c, &c, &opts)?.values[1])
    })());

    push("y = x, delta = Delta = 1", "largest outer slack of the Schwarz chains", (|| {
        let x = Vector::new(vec![Scalar::new(1.0, -2.0), Scalar::new(0.5, 0.25)])?;
        let one = Scalar::new(1.0, 0.0);
        let s = schwarz_counterparts(&x, &x, one, one, &opts)?;
        Ok([&s.linear, &s.linear_defect, &s.quadratic, &s.quadratic_defect]
            .iter()
            .map(|ch| ch.slacks.iter().fold(0.0_f64, |m, v| m.max(v.abs())) / ch.scale().max(1.0))
            .fold(0.0, f64::max))
    })());

    let all_passed = cases.iter().all(|c| c.passed);
    EqualityReport { cases, all_passed }
}

// ---------------------------------------------------------------------------
// Fuzz campaign

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FuzzConfig {
    pub seed: u64,
    pub count: u64,
    /// Largest ambient dimension; each instance draws its own.
    pub dim: usize,
    /// Largest family size; each instance draws its own.
    pub family_size: usize,
    pub field: Field,
    /// Draw corridors of either sign; those with `sum Re(Phi_i conj phi_i) <= 0`
    /// are rejected.
    pub signed: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct FuzzSummary {
    pub instances: u64,
    pub rejected: u64,
    pub evaluated: BTreeMap<String, u64>,
    pub violations: BTreeMap<String, u64>,
    /// Unexpected errors, e.g. a hypothesis failing on a generated instance.
    pub errors: BTreeMap<String, u64>,
    /// Smallest adjacent slack relative to the chain's scale.
    pub min_slack: BTreeMap<String, f64>,
}

impl FuzzSummary {
    pub fn total_violations(&self) -> u64 {
        self.violations.values().sum::<u64>() + self.errors.values().sum::<u64>()
    }

    pub fn clean(&self) -> bool {
        self.total_violations() == 0
    }

    fn record(&mut self, key: &str, chain: Result<BoundChain>) {
        match chain {
            Ok(chain) => {
                *self.evaluated.entry(key.to_string()).or_default() += 1;
                if !(chain.all_hold && chain.verified) {
                    *self.violations.entry(key.to_string()).or_default() += 1;
                }
                let slack = chain.min_relative_slack();
                let entry = self.min_slack.entry(key.to_string()).or_insert(f64::INFINITY);
                *entry = entry.min(slack);
            }
            Err(_) => *self.errors.entry(key.to_string()).or_default() += 1,
        }
    }

    fn record_flag(&mut self, key: &str, ok: bool) {
        *self.evaluated.entry(key.to_string()).or_default() += 1;
        if !ok {
            *self.violations.entry(key.to_string()).or_default() += 1;
        }
    }
}

pub const COMPANION_LAMBDAS: [f64; 3] = [0.1, 0.5, 0.9];

/// Runs `count` random admissible instances through every bound. Instance
/// `k` uses stream `k` of a ChaCha8 generator seeded with `seed`, so results
/// do not depend on evaluation order.
pub fn fuzz_campaign(cfg: &FuzzConfig) -> Result<FuzzSummary> {
    if cfg.dim == 0 {
        return Err(Error::ZeroDimension);
    }
    if cfg.family_size == 0 || cfg.family_size > cfg.dim {
        return Err(Error::BadConfig(format!(
            "family size {} must be in 1..={}",
            cfg.family_size, cfg.dim
        )));
    }
    let spec = CorridorSpec {
        field: cfg.field,
        ..CorridorSpec::real()
    }
    .with_signed(cfg.signed);
    let mut summary = FuzzSummary::default();
    for k in 0..cfg.count {
        let mut rng = trial_rng(cfg.seed, k);
        if !fuzz_instance(&mut rng, cfg, &spec, &mut summary)? {
            summary.rejected += 1;
        }
        summary.instances += 1;
    }
    Ok(summary)
}

/// Returns `false` when the drawn corridors are rejected.
fn fuzz_instance(rng: &mut ChaCha8Rng, cfg: &FuzzConfig, spec: &CorridorSpec, s: &mut FuzzSummary) -> Result<bool> {
    let field = cfg.field;
    let size = rng.random_range(1..=cfg.family_size);
    let dim = rng.random_range(size..=cfg.dim);
    let fam = random_family(rng, dim, size, field)?;
    let cx = spec.sample(rng, size)?;
    let cy = spec.sample(rng, size)?;
    let pair = spec.sample(rng, 1)?;
    if [&cx, &cy, &pair].iter().any(|c| c.re_sum() <= 0.0) {
        return Ok(false);
    }
    let opts = Options::default().with_hypothesis_tol(recommended_tol(&fam));
    let x = draw_point(rng, &fam, &cx, field)?;
    let y = draw_point(rng, &fam, &cy, field)?;

    s.record("gruss_refined_sqrt", gruss_refined_sqrt(&x, &y, &fam, &cx, &cy, &opts));
    s.record("gruss_refined_midpoint", gruss_refined_midpoint(&x, &y, &fam, &cx, &cy, &opts));
    s.record("norm_bound_quadratic:cbs", norm_bound_quadratic(&x, &fam, &cx, NormVariant::Cbs, &opts));
    s.record("norm_bound_linear", norm_bound_linear(&x, &fam, &cx, &opts));
    s.record("norm_bound_quadratic:max_sum", norm_bound_quadratic(&x, &fam, &cx, NormVariant::MaxSum, &opts));
    let p = rng.random_range(1.1..6.0);
    s.record("norm_bound_quadratic:holder", norm_bound_quadratic(&x, &fam, &cx, NormVariant::Holder(p), &opts));
    s.record("norm_bound_quadratic:sum_max", norm_bound_quadratic(&x, &fam, &cx, NormVariant::SumMax, &opts));
    s.record("bessel_counterpart", bessel_counterpart(&x, &fam, &cx, &opts));
    let real_x = field == Field::Real && cx.is_nonnegative_real();
    if real_x {
        s.record("bessel_counterpart_real", bessel_counterpart_real(&x, &fam, &cx, &opts));
    }
    match gruss_bound(&x, &y, &fam, &cx, &cy, &opts) {
        Ok(g) => {
            s.record("gruss_bound", Ok(g.chain));
            s.record("schwarz_step", Ok(g.schwarz_step));
        }
        Err(e) => s.record("gruss_bound", Err(e)),
    }
    if real_x && cy.is_nonnegative_real() {
        s.record("gruss_bound_real_squared", gruss_bound_real_squared(&x, &y, &fam, &cx, &cy, &opts));
    }

    // Single-vector reduction on the first family member.
    let single = validate_family(vec![fam.members()[0].clone()], EXACT_FAMILY_TOL)?;
    let c1x = ScalarCorridor::new(vec![cx.lo()[0]], vec![cx.hi()[0]])?;
    let c1y = ScalarCorridor::new(vec![cy.lo()[0]], vec![cy.hi()[0]])?;
    if c1x.re_sum() > 0.0 && c1y.re_sum() > 0.0 {
        let x1 = draw_point(rng, &single, &c1x, field)?;
        let y1 = draw_point(rng, &single, &c1y, field)?;
        match gruss_bound(&x1, &y1, &single, &c1x, &c1y, &opts) {
            Ok(g) => {
                s.record("gruss_bound:single", Ok(g.chain));
                if let Some(ratio) = g.ratio {
                    s.record("gruss_bound:single_ratio", Ok(ratio));
                }
            }
            Err(e) => s.record("gruss_bound:single", Err(e)),
        }
    }

    // Schwarz counterparts: the pair corridor scaled by |w| around w.
    let w = loop {
        let w = gaussian_vector(rng, dim, field);
        if w.norm() > 1e-6 {
            break w;
        }
    };
    let (delta, big_delta) = (pair.lo()[0], pair.hi()[0]);
    let nw = w.norm();
    let line = validate_family(vec![w.scale(Scalar::new(1.0 / nw, 0.0))], EXACT_FAMILY_TOL)?;
    let line_corridor = ScalarCorridor::new(vec![delta * nw], vec![big_delta * nw])?;
    let v = draw_point(rng, &line, &line_corridor, field)?;
    match schwarz_counterparts(&v, &w, delta, big_delta, &opts) {
        Ok(sc) => {
            s.record("schwarz:linear", Ok(sc.linear));
            s.record("schwarz:linear_defect", Ok(sc.linear_defect));
            s.record("schwarz:quadratic", Ok(sc.quadratic));
            s.record("schwarz:quadratic_defect", Ok(sc.quadratic_defect));
        }
        Err(e) => s.record("schwarz:linear", Err(e)),
    }

    // Companion bound: z = lambda a + (1 - lambda) b admissible for cx.
    for lambda in COMPANION_LAMBDAS {
        let z = draw_point(rng, &fam, &cx, field)?;
        let b = gaussian_vector(rng, dim, field).scale(Scalar::new(z.norm().max(1.0), 0.0));
        let a = z.axpy(Scalar::new(lambda - 1.0, 0.0), &b).scale(Scalar::new(1.0 / lambda, 0.0));
        s.record(&format!("companion:{lambda}"), companion_bound(&a, &b, &fam, &cx, lambda, &opts));
    }

    // Unconditional properties on arbitrary vectors.
    let scale = rng.random_range(0.1..10.0);
    let p = gaussian_vector(rng, dim, field).scale(Scalar::new(scale, 0.0));
    let q = gaussian_vector(rng, dim, field);
    let (bp, bq) = (bessel_defect(&p, &fam)?, bessel_defect(&q, &fam)?);
    let (tp, tq) = (1e-10 * p.norm_sqr(), 1e-10 * q.norm_sqr());
    s.record_flag("bessel_defect_nonnegative", bp >= -tp && bq >= -tq);
    let d = gruss_defect(&p, &q, &fam)?.norm();
    s.record_flag("schwarz_step_unconditional", d * d <= (bp + tp) * (bq + tq));
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_examples() {
        let rows = sharpness_sweep(SweepTarget::Cor23, &[0.5, 0.01]).unwrap();
        assert!((rows[0].ratio - 0.75).abs() < 1e-12);
        assert!((rows[1].ratio - 0.9999).abs() < 1e-12);
        let rows = sharpness_sweep(SweepTarget::Thm21, &[0.5]).unwrap();
        assert!((rows[0].ratio - 0.75).abs() < 1e-12);
        let rows = sharpness_sweep(SweepTarget::Cor32, &[0.5]).unwrap();
        assert!((rows[0].ratio - 0.5625).abs() < 1e-12);
    }

    #[test]
    fn sweep_errors() {
        assert!(matches!(sharpness_sweep(SweepTarget::Cor23, &[]), Err(Error::EmptySweep)));
        for bad in [0.0, 1.0, -0.2, f64::NAN] {
            assert!(matches!(sharpness_sweep(SweepTarget::Cor23, &[0.5, bad]), Err(Error::BadEpsilon(_))));
        }
    }

    #[test]
    fn sweep_target_names() {
        assert_eq!("cor32".parse::<SweepTarget>().unwrap(), SweepTarget::Cor32);
        assert!("cor99".parse::<SweepTarget>().is_err());
        assert_eq!(serde_json::to_string(&SweepTarget::Thm21).unwrap(), "\"thm21\"");
    }

    #[test]
    fn comparison_search_needs_trials() {
        assert!(matches!(bound_comparison_search(1, 0), Err(Error::WitnessNotFound(_))));
    }

    #[test]
    fn comparison_search_small_budget() {
        let w = bound_comparison_search(3, 2000).unwrap();
        assert!(w.sqrt_smaller.sqrt_bound < w.sqrt_smaller.midpoint_bound);
        assert!(w.midpoint_smaller.midpoint_bound < w.midpoint_smaller.sqrt_bound);
    }

    #[test]
    fn equality_catalog_passes() {
        let report = equality_cases();
        for case in &report.cases {
            assert!(case.passed, "{case:?}");
        }
        assert!(report.all_passed);
    }

    fn config(field: Field, signed: bool, count: u64) -> FuzzConfig {
        FuzzConfig {
            seed: 42,
            count,
            dim: 6,
            family_size: 3,
            field,
            signed,
        }
    }

    #[test]
    fn small_fuzz_is_clean() {
        for field in [Field::Real, Field::Complex] {
            let s = fuzz_campaign(&config(field, false, 300)).unwrap();
            assert!(s.clean(), "{s:?}");
            assert_eq!(s.rejected, 0);
            assert_eq!(s.evaluated["gruss_refined_sqrt"], 300);
        }
    }

    #[test]
    fn signed_corridors_are_rejected_and_counted() {
        let s = fuzz_campaign(&config(Field::Real, true, 200)).unwrap();
        assert!(s.rejected > 0);
        assert!(s.clean(), "{s:?}");
    }

    #[test]
    fn zero_count_is_trivially_clean() {
        let s = fuzz_campaign(&config(Field::Real, false, 0)).unwrap();
        assert_eq!(s.instances, 0);
        assert!(s.clean());
    }

    #[test]
    fn fuzz_is_deterministic() {
        let a = fuzz_campaign(&config(Field::Complex, false, 50)).unwrap();
        let b = fuzz_campaign(&config(Field::Complex, false, 50)).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }
}

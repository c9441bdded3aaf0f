//! Weighted quadrature instances.
//!
//! Functions sampled on a [`QuadratureGrid`] are embedded isometrically into
//! coordinate space, and every integral bound is then the corresponding
//! vector bound on the embeddings.

use serde::{Deserialize, Serialize};

use crate::bounds::{self, BoundChain, GrussBound, NormVariant, Options};
use crate::error::{Error, Result};
use crate::family::{validate_family, OrthonormalFamily};
use crate::hypothesis::{check_hypothesis, HypothesisReport, ScalarCorridor};
use crate::space::{embed, pairwise_sum, QuadratureGrid, SampledFunction, Scalar, Vector};
use crate::tolerance::QUADRATURE_FAMILY_TOL;

/// Embedded form of `(f, g?, {f_i}, grid, cx, cy?)`.
#[derive(Debug, Clone)]
pub struct IntegralInstance {
    family: OrthonormalFamily,
    f: Vector,
    g: Option<Vector>,
    cx: ScalarCorridor,
    cy: Option<ScalarCorridor>,
}

pub fn integral_instance(
    f: &SampledFunction,
    g: Option<&SampledFunction>,
    fam_fns: &[SampledFunction],
    grid: &QuadratureGrid,
    cx: ScalarCorridor,
    cy: Option<ScalarCorridor>,
) -> Result<IntegralInstance> {
    let members = fam_fns
        .iter()
        .map(|h| embed(h, grid))
        .collect::<Result<Vec<_>>>()?;
    let family = validate_family(members, QUADRATURE_FAMILY_TOL)?;
    for c in std::iter::once(&cx).chain(cy.as_ref()) {
        if c.len() != family.len() {
            return Err(Error::DimensionMismatch {
                context: "corridor length vs family size",
                expected: family.len(),
                found: c.len(),
            });
        }
    }
    Ok(IntegralInstance {
        family,
        f: embed(f, grid)?,
        g: g.map(|g| embed(g, grid)).transpose()?,
        cx,
        cy,
    })
}

impl IntegralInstance {
    pub fn family(&self) -> &OrthonormalFamily {
        &self.family
    }

    pub fn f(&self) -> &Vector {
        &self.f
    }

    pub fn g(&self) -> Option<&Vector> {
        self.g.as_ref()
    }

    pub fn cx(&self) -> &ScalarCorridor {
        &self.cx
    }

    pub fn cy(&self) -> Option<&ScalarCorridor> {
        self.cy.as_ref()
    }

    fn pair(&self) -> Result<(&Vector, &ScalarCorridor)> {
        match (&self.g, &self.cy) {
            (Some(g), Some(cy)) => Ok((g, cy)),
            _ => Err(Error::BadConfig("instance needs g and its corridor".into())),
        }
    }

    /// `int (sum Phi_i f_i - f) conj(f - sum phi_i f_i) rho dmu` and the ball
    /// form, evaluated on the embedding.
    pub fn hypothesis_f(&self, tol: f64) -> Result<HypothesisReport> {
        check_hypothesis(&self.f, &self.family, &self.cx, tol)
    }

    pub fn hypothesis_g(&self, tol: f64) -> Result<HypothesisReport> {
        let (g, cy) = self.pair()?;
        check_hypothesis(g, &self.family, cy, tol)
    }

    pub fn norm_bound_linear(&self, opts: &Options) -> Result<BoundChain> {
        bounds::norm_bound_linear(&self.f, &self.family, &self.cx, opts)
    }

    pub fn norm_bound_quadratic(&self, variant: NormVariant, opts: &Options) -> Result<BoundChain> {
        bounds::norm_bound_quadratic(&self.f, &self.family, &self.cx, variant, opts)
    }

    /// `int |f|^2 rho - sum |int f conj(f_i) rho|^2 <= (M^2/4) sum |int f conj(f_i) rho|^2`.
    pub fn bessel_counterpart(&self, opts: &Options) -> Result<BoundChain> {
        bounds::bessel_counterpart(&self.f, &self.family, &self.cx, opts)
    }

    /// Real form with factor `sum (M_i - m_i)^2 / sum M_i m_i`.
    pub fn bessel_counterpart_real(&self, opts: &Options) -> Result<BoundChain> {
        bounds::bessel_counterpart_real(&self.f, &self.family, &self.cx, opts)
    }

    pub fn gruss_bound(&self, opts: &Options) -> Result<GrussBound> {
        let (g, cy) = self.pair()?;
        bounds::gruss_bound(&self.f, g, &self.family, &self.cx, cy, opts)
    }

    pub fn gruss_bound_real_squared(&self, opts: &Options) -> Result<BoundChain> {
        let (g, cy) = self.pair()?;
        bounds::gruss_bound_real_squared(&self.f, g, &self.family, &self.cx, cy, opts)
    }
}

/// Outcome of a successful [`sandwich_check`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SandwichReport {
    /// `min_j (f(s_j) - sum m_i f_i(s_j))` over nodes with positive mass.
    pub min_lower_margin: f64,
    /// `min_j (sum M_i f_i(s_j) - f(s_j))` over nodes with positive mass.
    pub min_upper_margin: f64,
    /// Node attaining the smaller of the two margins.
    pub worst_node: usize,
    /// Nodes with positive mass that were checked.
    pub checked_nodes: usize,
    /// `(m, M)` as a corridor for the embedded instance.
    pub corridor: ScalarCorridor,
}

/// Checks `sum m_i f_i(s) <= f(s) <= sum M_i f_i(s)` at every node with
/// `w_j rho_j > 0`. Success makes the integrand of the corridor hypothesis
/// pointwise nonnegative.
pub fn sandwich_check(
    f: &SampledFunction,
    fam_fns: &[SampledFunction],
    grid: &QuadratureGrid,
    m: &[f64],
    big_m: &[f64],
) -> Result<SandwichReport> {
    if fam_fns.is_empty() {
        return Err(Error::EmptyFamily);
    }
    for (len, context) in [(m.len(), "lower bounds vs family size"), (big_m.len(), "upper bounds vs family size")] {
        if len != fam_fns.len() {
            return Err(Error::DimensionMismatch {
                context,
                expected: fam_fns.len(),
                found: len,
            });
        }
    }
    if !f.is_real() || fam_fns.iter().any(|h| !h.is_real()) {
        return Err(Error::NotRealMode("sandwich condition needs real functions"));
    }
    if m.iter().chain(big_m).any(|&v| !(v >= 0.0 && v.is_finite())) {
        return Err(Error::NotRealNonnegative);
    }
    let corridor = ScalarCorridor::from_real(m, big_m)?;
    corridor.ensure_positive_re_sum()?;
    f.ensure_on(grid)?;
    for h in fam_fns {
        h.ensure_on(grid)?;
    }

    let n = fam_fns.len();
    let mut lower_min = f64::INFINITY;
    let mut upper_min = f64::INFINITY;
    let mut worst = (f64::INFINITY, 0);
    let mut violation: Option<(f64, usize, &'static str)> = None;
    let mut checked = 0;
    for j in 0..grid.len() {
        if grid.mass(j) <= 0.0 {
            continue;
        }
        checked += 1;
        let v = f.values()[j].re;
        let lower = pairwise_sum(n, |i| m[i] * fam_fns[i].values()[j].re);
        let upper = pairwise_sum(n, |i| big_m[i] * fam_fns[i].values()[j].re);
        let (lo_margin, hi_margin) = (v - lower, upper - v);
        let slack = SANDWICH_REL_TOL * v.abs().max(lower.abs()).max(upper.abs()).max(1.0);
        lower_min = lower_min.min(lo_margin);
        upper_min = upper_min.min(hi_margin);
        for (margin, side) in [(lo_margin, "lower"), (hi_margin, "upper")] {
            if margin < worst.0 {
                worst = (margin, j);
            }
            if margin < -slack && violation.is_none_or(|(w, _, _)| margin < w) {
                violation = Some((margin, j, side));
            }
        }
    }
    if let Some((margin, node, side)) = violation {
        return Err(Error::SandwichViolated { node, side, margin });
    }
    Ok(SandwichReport {
        min_lower_margin: lower_min,
        min_upper_margin: upper_min,
        worst_node: worst.1,
        checked_nodes: checked,
        corridor,
    })
}

const SANDWICH_REL_TOL: f64 = 1e-12;

/// Samples of `sum c_i f_i` on the grid.
pub fn combine_functions(coeffs: &[Scalar], fam_fns: &[SampledFunction]) -> Result<SampledFunction> {
    if coeffs.len() != fam_fns.len() || fam_fns.is_empty() {
        return Err(Error::DimensionMismatch {
            context: "coefficients vs family size",
            expected: fam_fns.len(),
            found: coeffs.len(),
        });
    }
    let len = fam_fns[0].len();
    let values = (0..len)
        .map(|j| pairwise_sum(coeffs.len(), |i| coeffs[i] * fam_fns[i].values()[j]))
        .collect();
    SampledFunction::new(values)
}

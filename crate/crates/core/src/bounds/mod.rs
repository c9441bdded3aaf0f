//! Inequality chains: counterparts of Bessel's inequality, Schwarz-type
//! counterparts, and Grüss-type bounds.
//!
//! Every bound is conditional on the corridor hypothesis. Evaluating one on
//! an inadmissible instance is an error unless [`Options::force`] is set, in
//! which case the chain is returned with `verified == false`.

mod gruss;
mod norm;

pub use gruss::{
    companion_bound, gruss_bound, gruss_bound_real_squared, gruss_refined_midpoint,
    gruss_refined_sqrt, GrussBound,
};
pub use norm::{
    bessel_counterpart, bessel_counterpart_real, norm_bound_linear, norm_bound_quadratic,
    schwarz_counterparts, NormVariant, SchwarzChains,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::OrthonormalFamily;
use crate::hypothesis::{check_hypothesis, HypothesisReport, ScalarCorridor};
use crate::space::{inner_unchecked, pairwise_sum, Scalar, Vector};
use crate::tolerance::{CHAIN_ABS_FLOOR, CHAIN_REL_TOL, HYPOTHESIS_TOL};

/// Tolerance used to decide whether a chain is nondecreasing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChainTolerance {
    pub rel: f64,
    pub abs: f64,
}

impl Default for ChainTolerance {
    fn default() -> Self {
        Self {
            rel: CHAIN_REL_TOL,
            abs: CHAIN_ABS_FLOOR,
        }
    }
}

impl ChainTolerance {
    /// Absolute slack allowed for a chain whose largest magnitude is `scale`.
    pub fn allowance(&self, scale: f64) -> f64 {
        (self.rel * scale).max(self.abs)
    }
}

/// Settings shared by every bound evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Options {
    /// Relative tolerance for the corridor hypothesis.
    pub hypothesis_tol: f64,
    pub chain: ChainTolerance,
    /// Evaluate even when a hypothesis fails; the chain is then unverified.
    pub force: bool,
}

impl Default for Options {
    fn default() -> Self {
        Self {
            hypothesis_tol: HYPOTHESIS_TOL,
            chain: ChainTolerance::default(),
            force: false,
        }
    }
}

impl Options {
    pub fn forced(self) -> Self {
        Self { force: true, ..self }
    }

    pub fn with_hypothesis_tol(self, hypothesis_tol: f64) -> Self {
        Self {
            hypothesis_tol,
            ..self
        }
    }
}

/// Ordered labeled values `v_0 <= v_1 <= ...`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundChain {
    pub labels: Vec<String>,
    pub values: Vec<f64>,
    pub lhs_first: bool,
    pub all_hold: bool,
    /// `values[k + 1] - values[k]`.
    pub slacks: Vec<f64>,
    /// False when produced with [`Options::force`] on a failed hypothesis.
    pub verified: bool,
    /// Magnitude the tolerance is relative to: the largest chain value, or
    /// the size of the terms a defect was formed from if that is larger.
    pub reference_scale: f64,
}

impl BoundChain {
    pub fn new<S: Into<String>>(entries: Vec<(S, f64)>, tol: &ChainTolerance) -> Self {
        Self::with_reference(entries, tol, 0.0)
    }

    /// Like [`BoundChain::new`], with the tolerance relative to at least
    /// `reference`.
    pub fn with_reference<S: Into<String>>(entries: Vec<(S, f64)>, tol: &ChainTolerance, reference: f64) -> Self {
        let (labels, values): (Vec<String>, Vec<f64>) =
            entries.into_iter().map(|(l, v)| (l.into(), v)).unzip();
        let slacks: Vec<f64> = values.windows(2).map(|w| w[1] - w[0]).collect();
        let reference_scale = Self::magnitude(&values).max(reference.abs());
        let allowance = tol.allowance(reference_scale);
        let all_hold = values.iter().all(|v| v.is_finite()) && slacks.iter().all(|&s| s >= -allowance);
        Self {
            labels,
            values,
            lhs_first: true,
            all_hold,
            slacks,
            verified: true,
            reference_scale,
        }
    }

    fn magnitude(values: &[f64]) -> f64 {
        values.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// Largest magnitude in the chain.
    pub fn scale(&self) -> f64 {
        Self::magnitude(&self.values)
    }

    /// Smallest adjacent slack divided by the reference scale.
    pub fn min_relative_slack(&self) -> f64 {
        let scale = self.reference_scale.max(CHAIN_ABS_FLOOR);
        self.slacks.iter().fold(f64::INFINITY, |m, &s| m.min(s / scale))
    }

    pub fn first(&self) -> f64 {
        self.values[0]
    }

    pub fn last(&self) -> f64 {
        *self.values.last().expect("chains are nonempty")
    }

    fn unverified(mut self, verified: bool) -> Self {
        self.verified = verified;
        self
    }
}

/// `M(Phi, phi)` with its per-index numerator terms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MFactor {
    pub value: f64,
    /// `(|Phi_i| - |phi_i|)^2 + 4 (|Phi_i conj(phi_i)| - Re(Phi_i conj(phi_i)))`.
    pub numerator_terms: Vec<f64>,
    /// `sum_i Re(Phi_i conj(phi_i))`.
    pub denominator: f64,
}

impl MFactor {
    pub fn squared(&self) -> f64 {
        self.value * self.value
    }
}

/// Corridor width factor
/// `M = sqrt( sum_i [(|Phi_i| - |phi_i|)^2 + 4(|Phi_i conj(phi_i)| - Re(Phi_i conj(phi_i)))] / sum_i Re(Phi_i conj(phi_i)) )`.
///
/// With this (minus-sign) form, `M^2/4 + 1 = sum (|Phi_i| + |phi_i|)^2 / (4 sum Re(Phi_i conj(phi_i)))`,
/// which is what turns the quadratic norm bound into the Bessel counterpart.
pub fn m_factor(c: &ScalarCorridor) -> Result<MFactor> {
    c.ensure_positive_re_sum()?;
    let numerator_terms: Vec<f64> = c
        .lo()
        .iter()
        .zip(c.hi())
        .map(|(&lo, &hi)| {
            let prod = hi * lo.conj();
            let gap = hi.norm() - lo.norm();
            gap * gap + 4.0 * (prod.norm() - prod.re).max(0.0)
        })
        .collect();
    let numerator = pairwise_sum(numerator_terms.len(), |i| numerator_terms[i]);
    Ok(MFactor {
        value: (numerator / c.re_sum()).sqrt(),
        numerator_terms,
        denominator: c.re_sum(),
    })
}

/// Same factor with `(|Phi_i| + |phi_i|)^2` in place of `(|Phi_i| - |phi_i|)^2`.
///
/// Kept for comparison only: it overstates `M` and breaks the identity
/// checked by [`m_factor_identity_gap`].
pub fn m_factor_plus_form(c: &ScalarCorridor) -> Result<f64> {
    c.ensure_positive_re_sum()?;
    let numerator = pairwise_sum(c.len(), |i| {
        let (lo, hi) = (c.lo()[i], c.hi()[i]);
        let prod = hi * lo.conj();
        let sum = hi.norm() + lo.norm();
        sum * sum + 4.0 * (prod.norm() - prod.re).max(0.0)
    });
    Ok((numerator / c.re_sum()).sqrt())
}

/// `sum (|Phi_i| + |phi_i|)^2 / (4 sum Re(Phi_i conj(phi_i)))`.
pub fn quadratic_constant(c: &ScalarCorridor) -> Result<f64> {
    c.ensure_positive_re_sum()?;
    let numerator = pairwise_sum(c.len(), |i| {
        let s = c.hi()[i].norm() + c.lo()[i].norm();
        s * s
    });
    Ok(0.25 * numerator / c.re_sum())
}

/// Relative gap `|(M^2/4 + 1) - K| / K` where `K` is [`quadratic_constant`]
/// and `M` is the given factor value.
pub fn m_factor_identity_gap(m_value: f64, c: &ScalarCorridor) -> Result<f64> {
    let k = quadratic_constant(c)?;
    Ok(((0.25 * m_value * m_value + 1.0) - k).abs() / k)
}

/// `|x|^2 - sum_i |<x, e_i>|^2`, evaluated as the squared norm of the
/// projection residual `x - sum_i <x, e_i> e_i`.
pub fn bessel_defect(x: &Vector, fam: &OrthonormalFamily) -> Result<f64> {
    Ok(fam.residual(x)?.norm_sqr())
}

/// `<x, y> - sum_i <x, e_i><e_i, y>`, evaluated as the inner product of the
/// two projection residuals.
pub fn gruss_defect(x: &Vector, y: &Vector, fam: &OrthonormalFamily) -> Result<Scalar> {
    let rx = fam.residual(x)?;
    let ry = fam.residual(y)?;
    Ok(inner_unchecked(&rx, &ry))
}

/// `sum_i |c_i|^2`.
pub(crate) fn energy(coeffs: &[Scalar]) -> f64 {
    pairwise_sum(coeffs.len(), |i| coeffs[i].norm_sqr())
}

/// Runs the hypothesis check, turning a failure into an error unless forced.
/// Returns the report and whether the chain counts as verified.
pub(crate) fn require(
    which: &'static str,
    x: &Vector,
    fam: &OrthonormalFamily,
    c: &ScalarCorridor,
    opts: &Options,
) -> Result<(HypothesisReport, bool)> {
    let report = check_hypothesis(x, fam, c, opts.hypothesis_tol)?;
    if report.holds {
        Ok((report, true))
    } else if opts.force {
        Ok((report, false))
    } else {
        Err(Error::HypothesisFailed {
            which,
            report: Box::new(report),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::{gram_schmidt, validate_family};

    fn real(v: &[f64]) -> Vector {
        Vector::from_real(v).unwrap()
    }

    #[test]
    fn chain_tolerance_and_slacks() {
        let tol = ChainTolerance::default();
        let chain = BoundChain::new(vec![("a", 1.0), ("b", 1.0 - 1e-10), ("c", 2.0)], &tol);
        assert!(chain.all_hold);
        assert_eq!(chain.slacks.len(), 2);
        let chain = BoundChain::new(vec![("a", 1.0), ("b", 1.0 - 1e-8)], &tol);
        assert!(!chain.all_hold);
        let chain = BoundChain::new(vec![("a", 0.0), ("b", -5e-13)], &tol);
        assert!(chain.all_hold);
        let chain = BoundChain::new(vec![("a", 0.0), ("b", f64::NAN)], &tol);
        assert!(!chain.all_hold);
        let chain = BoundChain::with_reference(vec![("a", 0.0), ("b", -1e-6)], &tol, 1e4);
        assert!(chain.all_hold);
        assert_eq!(chain.reference_scale, 1e4);
    }

    #[test]
    fn chain_json_fields() {
        let chain = BoundChain::new(vec![("lhs", 1.0), ("rhs", 2.0)], &ChainTolerance::default());
        let json = serde_json::to_value(&chain).unwrap();
        for key in ["labels", "values", "all_hold", "slacks"] {
            assert!(json.get(key).is_some(), "{key}");
        }
    }

    #[test]
    fn m_factor_single_real_index() {
        let c = ScalarCorridor::from_real(&[1.5], &[4.0]).unwrap();
        let m = m_factor(&c).unwrap();
        assert!((m.value - 2.5 / 6.0_f64.sqrt()).abs() < 1e-15);
        assert_eq!(m.denominator, 6.0);
    }

    #[test]
    fn m_factor_zero_width() {
        let c = ScalarCorridor::from_real(&[2.0, 3.0], &[2.0, 3.0]).unwrap();
        assert_eq!(m_factor(&c).unwrap().value, 0.0);
    }

    #[test]
    fn m_factor_rejects_orthogonal_phases() {
        let c = ScalarCorridor::new(vec![Scalar::new(1.0, 0.0)], vec![Scalar::new(0.0, 1.0)]).unwrap();
        assert!(matches!(m_factor(&c), Err(Error::NonpositiveReSum { .. })));
    }

    #[test]
    fn plus_form_breaks_identity() {
        let c = ScalarCorridor::new(vec![Scalar::new(1.0, 0.0)], vec![Scalar::new(1.0, 0.5)]).unwrap();
        let minus = m_factor(&c).unwrap().value;
        let plus = m_factor_plus_form(&c).unwrap();
        assert!(m_factor_identity_gap(minus, &c).unwrap() < 1e-15);
        assert!(m_factor_identity_gap(plus, &c).unwrap() > 0.5);
    }

    #[test]
    fn bessel_defect_examples() {
        let fam = gram_schmidt(&[real(&[1.0, 1.0, 0.0]), real(&[0.0, 1.0, 1.0])], 1e-10).unwrap();
        let e1 = fam.members()[0].clone();
        assert!(bessel_defect(&e1, &fam).unwrap() < 1e-30);

        let h = 1.0 / 2.0_f64.sqrt();
        let fam = validate_family(vec![real(&[h, h])], 1e-10).unwrap();
        let x = real(&[h, 3.0 * h]);
        assert!((bessel_defect(&x, &fam).unwrap() - 1.0).abs() < 1e-15);

        let fam = validate_family(vec![real(&[1.0, 0.0, 0.0])], 1e-10).unwrap();
        let x = real(&[0.0, 3.0, 4.0]);
        assert_eq!(bessel_defect(&x, &fam).unwrap(), 25.0);
    }

    #[test]
    fn gruss_defect_examples() {
        let fam = validate_family(vec![real(&[0.0, 1.0])], 1e-10).unwrap();
        let e = fam.members()[0].clone();
        assert_eq!(gruss_defect(&e, &e, &fam).unwrap(), Scalar::new(0.0, 0.0));

        let x = Vector::new(vec![Scalar::new(1.0, 2.0), Scalar::new(-0.5, 0.3)]).unwrap();
        let d = gruss_defect(&x, &x, &fam).unwrap();
        assert_eq!(d.im, 0.0);
        assert_eq!(d.re, bessel_defect(&x, &fam).unwrap());
    }
}

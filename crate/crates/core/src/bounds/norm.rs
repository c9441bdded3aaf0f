use serde::{Deserialize, Serialize};

use super::{energy, m_factor, quadratic_constant, require, BoundChain, Options};
use crate::error::{Error, Result};
use crate::family::{validate_family, OrthonormalFamily};
use crate::hypothesis::{HypothesisReport, ScalarCorridor};
use crate::space::{inner, pairwise_sum, Scalar, Vector};
use crate::tolerance::EXACT_FAMILY_TOL;

/// `|x| <= (1/2) sum_i Re(Phi_i conj(<x,e_i>) + conj(phi_i) <x,e_i>) / sqrt(sum_i Re(Phi_i conj(phi_i)))`.
pub fn norm_bound_linear(
    x: &Vector,
    fam: &OrthonormalFamily,
    c: &ScalarCorridor,
    opts: &Options,
) -> Result<BoundChain> {
    c.ensure_positive_re_sum()?;
    let (_, verified) = require("x", x, fam, c, opts)?;
    let coeffs = fam.coefficients(x)?;
    let rhs = 0.5 * linear_numerator(c, &coeffs) / c.re_sum().sqrt();
    Ok(BoundChain::new(
        vec![
            ("|x|", x.norm()),
            ("(1/2) sum Re(Phi_i conj<x,e_i> + conj(phi_i) <x,e_i>) / sqrt(sum Re(Phi_i conj phi_i))", rhs),
        ],
        &opts.chain,
    )
    .unverified(verified))
}

fn linear_numerator(c: &ScalarCorridor, coeffs: &[Scalar]) -> f64 {
    pairwise_sum(coeffs.len(), |i| {
        (c.hi()[i] * coeffs[i].conj() + c.lo()[i].conj() * coeffs[i]).re
    })
}

/// How the quadratic norm bound splits `sum (|Phi_i| + |phi_i|) |<x,e_i>|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormVariant {
    /// Cauchy–Schwarz split, reported at the `|x|^2` level.
    Cbs,
    /// `max_i (|Phi_i| + |phi_i|) * sum_i |<x,e_i>|`.
    MaxSum,
    /// `(sum (|Phi_i| + |phi_i|)^p)^(1/p) (sum |<x,e_i>|^q)^(1/q)`, `1/p + 1/q = 1`.
    Holder(f64),
    /// `max_i |<x,e_i>| * sum_i (|Phi_i| + |phi_i|)`.
    SumMax,
}

/// Quadratic counterpart of Bessel's inequality.
///
/// `Cbs` returns `[|x|^2 ; K * sum |<x,e_i>|^2]` with
/// `K = sum (|Phi_i| + |phi_i|)^2 / (4 sum Re(Phi_i conj phi_i))`. The other
/// variants bound `|x|` itself by `1 / (2 sqrt(sum Re(Phi_i conj phi_i)))`
/// times the selected split.
pub fn norm_bound_quadratic(
    x: &Vector,
    fam: &OrthonormalFamily,
    c: &ScalarCorridor,
    variant: NormVariant,
    opts: &Options,
) -> Result<BoundChain> {
    if let NormVariant::Holder(p) = variant {
        if !(p > 1.0 && p.is_finite()) {
            return Err(Error::BadExponent(p));
        }
    }
    c.ensure_positive_re_sum()?;
    let (_, verified) = require("x", x, fam, c, opts)?;
    let coeffs = fam.coefficients(x)?;
    let n = coeffs.len();
    let widths: Vec<f64> = (0..n).map(|i| c.hi()[i].norm() + c.lo()[i].norm()).collect();
    let moduli: Vec<f64> = coeffs.iter().map(|z| z.norm()).collect();
    let max_of = |v: &[f64]| v.iter().fold(0.0_f64, |m, &a| m.max(a));
    let sum_of = |v: &[f64]| pairwise_sum(v.len(), |i| v[i]);
    let prefactor = 0.5 / c.re_sum().sqrt();

    let entries = match variant {
        NormVariant::Cbs => vec![
            ("|x|^2".to_string(), x.norm_sqr()),
            (
                "sum (|Phi_i|+|phi_i|)^2 / (4 sum Re(Phi_i conj phi_i)) * sum |<x,e_i>|^2".to_string(),
                quadratic_constant(c)? * energy(&coeffs),
            ),
        ],
        NormVariant::MaxSum => vec![
            ("|x|".to_string(), x.norm()),
            (
                "max(|Phi_i|+|phi_i|) * sum |<x,e_i>| / (2 sqrt(sum Re(Phi_i conj phi_i)))".to_string(),
                prefactor * max_of(&widths) * sum_of(&moduli),
            ),
        ],
        NormVariant::Holder(p) => {
            let q = p / (p - 1.0);
            let wp = pairwise_sum(n, |i| widths[i].powf(p)).powf(1.0 / p);
            let aq = pairwise_sum(n, |i| moduli[i].powf(q)).powf(1.0 / q);
            vec![
                ("|x|".to_string(), x.norm()),
                (
                    format!(
                        "(sum (|Phi_i|+|phi_i|)^{p})^(1/{p}) * (sum |<x,e_i>|^{q})^(1/{q}) / (2 sqrt(sum Re(Phi_i conj phi_i)))"
                    ),
                    prefactor * wp * aq,
                ),
            ]
        }
        NormVariant::SumMax => vec![
            ("|x|".to_string(), x.norm()),
            (
                "max |<x,e_i>| * sum (|Phi_i|+|phi_i|) / (2 sqrt(sum Re(Phi_i conj phi_i)))".to_string(),
                prefactor * max_of(&moduli) * sum_of(&widths),
            ),
        ],
    };
    Ok(BoundChain::new(entries, &opts.chain).unverified(verified))
}

/// `0 <= |x|^2 - sum |<x,e_i>|^2 <= (M^2/4) sum |<x,e_i>|^2`.
pub fn bessel_counterpart(
    x: &Vector,
    fam: &OrthonormalFamily,
    c: &ScalarCorridor,
    opts: &Options,
) -> Result<BoundChain> {
    let m = m_factor(c)?;
    let (_, verified) = require("x", x, fam, c, opts)?;
    let coeffs = fam.coefficients(x)?;
    Ok(BoundChain::with_reference(
        vec![
            ("0", 0.0),
            ("|x|^2 - sum |<x,e_i>|^2", super::bessel_defect(x, fam)?),
            ("M(Phi,phi)^2 / 4 * sum |<x,e_i>|^2", 0.25 * m.squared() * energy(&coeffs)),
        ],
        &opts.chain,
        x.norm_sqr(),
    )
    .unverified(verified))
}

/// Real form of [`bessel_counterpart`] for corridors `0 <= m_i, M_i`:
/// the factor is `sum (M_i - m_i)^2 / sum M_i m_i`.
pub fn bessel_counterpart_real(
    x: &Vector,
    fam: &OrthonormalFamily,
    c: &ScalarCorridor,
    opts: &Options,
) -> Result<BoundChain> {
    ensure_real_setting(x, fam, c)?;
    c.ensure_positive_re_sum()?;
    let (_, verified) = require("x", x, fam, c, opts)?;
    let coeffs = fam.coefficients(x)?;
    Ok(BoundChain::with_reference(
        vec![
            ("0", 0.0),
            ("|x|^2 - sum <x,e_i>^2", super::bessel_defect(x, fam)?),
            (
                "sum (M_i - m_i)^2 / (4 sum M_i m_i) * sum <x,e_i>^2",
                0.25 * real_width_ratio(c) * energy(&coeffs),
            ),
        ],
        &opts.chain,
        x.norm_sqr(),
    )
    .unverified(verified))
}

/// `sum (M_i - m_i)^2 / sum M_i m_i` for a real corridor.
pub(crate) fn real_width_ratio(c: &ScalarCorridor) -> f64 {
    let num = pairwise_sum(c.len(), |i| {
        let d = c.hi()[i].re - c.lo()[i].re;
        d * d
    });
    let den = pairwise_sum(c.len(), |i| c.hi()[i].re * c.lo()[i].re);
    num / den
}

pub(crate) fn ensure_real_setting(x: &Vector, fam: &OrthonormalFamily, c: &ScalarCorridor) -> Result<()> {
    if !c.is_nonnegative_real() {
        return Err(Error::NotRealNonnegative);
    }
    if !fam.is_real() {
        return Err(Error::NotRealMode("family has complex entries"));
    }
    if !x.is_real() {
        return Err(Error::NotRealMode("vector has complex entries"));
    }
    Ok(())
}

/// The four Schwarz-type counterparts for a pair `(x, y)` with
/// `Re <Delta y - x, x - delta y> >= 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchwarzChains {
    pub hypothesis: HypothesisReport,
    /// `|x||y| <= Re(Delta conj<x,y> + conj(delta) <x,y>) / (2 sqrt Re(Delta conj delta)) <= (|Delta|+|delta|) |<x,y>| / (2 sqrt Re(Delta conj delta))`.
    pub linear: BoundChain,
    /// The linear chain shifted by `-|<x,y>|`, closed by its square-root form.
    pub linear_defect: BoundChain,
    /// `|x|^2 |y|^2 <= (|Delta|+|delta|)^2 / (4 Re(Delta conj delta)) |<x,y>|^2`.
    pub quadratic: BoundChain,
    /// `0 <= |x|^2|y|^2 - |<x,y>|^2 <= M(Delta,delta)^2 / 4 * |<x,y>|^2`.
    pub quadratic_defect: BoundChain,
}

/// Reduces to a one-vector family `e = y/|y|` with corridor
/// `(delta |y|, Delta |y|)`.
pub fn schwarz_counterparts(
    x: &Vector,
    y: &Vector,
    delta: Scalar,
    big_delta: Scalar,
    opts: &Options,
) -> Result<SchwarzChains> {
    y.ensure_dim(x.dim(), "x vs y dimension")?;
    let ny = y.norm();
    if ny == 0.0 {
        return Err(Error::ZeroVector("y"));
    }
    let prod = big_delta * delta.conj();
    let r = prod.re;
    if r <= 0.0 {
        return Err(Error::NonpositiveReSum { re_sum: r });
    }
    let fam = validate_family(vec![y.scale(Scalar::new(1.0 / ny, 0.0))], EXACT_FAMILY_TOL)?;
    let corridor = ScalarCorridor::new(vec![delta * ny], vec![big_delta * ny])?;
    let (hypothesis, verified) = require("x", x, &fam, &corridor, opts)?;

    let xy = inner(x, y)?;
    let a = xy.norm();
    let nxy = x.norm() * ny;
    // |x|^2 |y|^2 - |<x,y>|^2 = |y|^2 |x - <x,e> e|^2 with e = y/|y|, free of cancellation.
    let gap_sq = ny * ny * super::bessel_defect(x, &fam)?;
    let gap = gap_sq / (nxy + a);
    let sr = r.sqrt();
    let (abs_big, abs_small) = (big_delta.norm(), delta.norm());

    let mid = 0.5 * (big_delta * xy.conj() + delta.conj() * xy).re / sr;
    let outer = 0.5 * (abs_big + abs_small) * a / sr;
    let root_gap = abs_big.sqrt() - abs_small.sqrt();
    let defect_outer = 0.5 * (root_gap * root_gap + 2.0 * (prod.norm().sqrt() - sr)) / sr * a;
    let abs_gap = abs_big - abs_small;
    let m_sq = (abs_gap * abs_gap + 4.0 * (prod.norm() - r).max(0.0)) / r;

    let tol = &opts.chain;
    Ok(SchwarzChains {
        hypothesis,
        linear: BoundChain::new(
            vec![
                ("|x||y|", nxy),
                ("Re(Delta conj<x,y> + conj(delta) <x,y>) / (2 sqrt Re(Delta conj delta))", mid),
                ("(|Delta|+|delta|) |<x,y>| / (2 sqrt Re(Delta conj delta))", outer),
            ],
            tol,
        )
        .unverified(verified),
        linear_defect: BoundChain::with_reference(
            vec![
                ("0", 0.0),
                ("|x||y| - |<x,y>|", gap),
                ("Re(Delta conj<x,y> + conj(delta) <x,y>) / (2 sqrt Re(Delta conj delta)) - |<x,y>|", mid - a),
                (
                    "((sqrt|Delta| - sqrt|delta|)^2 + 2(sqrt|Delta conj delta| - sqrt Re(Delta conj delta))) |<x,y>| / (2 sqrt Re(Delta conj delta))",
                    defect_outer,
                ),
            ],
            tol,
            nxy,
        )
        .unverified(verified),
        quadratic: BoundChain::new(
            vec![
                ("|x|^2 |y|^2", nxy * nxy),
                ("(|Delta|+|delta|)^2 / (4 Re(Delta conj delta)) |<x,y>|^2", 0.25 * (abs_big + abs_small).powi(2) / r * a * a),
            ],
            tol,
        )
        .unverified(verified),
        quadratic_defect: BoundChain::with_reference(
            vec![
                ("0", 0.0),
                ("|x|^2 |y|^2 - |<x,y>|^2", gap_sq),
                ("M(Delta,delta)^2 / 4 * |<x,y>|^2", 0.25 * m_sq * a * a),
            ],
            tol,
            nxy * nxy,
        )
        .unverified(verified),
    })
}

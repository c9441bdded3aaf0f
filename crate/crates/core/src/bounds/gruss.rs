use serde::{Deserialize, Serialize};

use super::norm::{ensure_real_setting, real_width_ratio};
use super::{bessel_defect, energy, gruss_defect, m_factor, require, BoundChain, Options};
use crate::error::{Error, Result};
use crate::family::OrthonormalFamily;
use crate::hypothesis::ScalarCorridor;
use crate::space::{inner, pairwise_sum, Scalar, Vector};

/// `|D| <= r_x r_y - sqrt(I_x) sqrt(I_y) <= r_x r_y`, where `D` is the Grüss
/// defect, `r` the corridor radius and `I = Re <A - x, x - a>`.
pub fn gruss_refined_sqrt(
    x: &Vector,
    y: &Vector,
    fam: &OrthonormalFamily,
    cx: &ScalarCorridor,
    cy: &ScalarCorridor,
    opts: &Options,
) -> Result<BoundChain> {
    let (hx, vx) = require("x", x, fam, cx, opts)?;
    let (hy, vy) = require("y", y, fam, cy, opts)?;
    let outer = cx.radius() * cy.radius();
    let correction = hx.cond_i_value.max(0.0).sqrt() * hy.cond_i_value.max(0.0).sqrt();
    let defect = gruss_defect(x, y, fam)?.norm();
    Ok(BoundChain::new(
        vec![
            ("|<x,y> - sum <x,e_i><e_i,y>|", defect),
            ("r_x r_y - sqrt(Re<A-x,x-a>) sqrt(Re<B-y,y-b>)", outer - correction),
            ("(1/4) |Phi-phi| |Gamma-gamma|", outer),
        ],
        &opts.chain,
    )
    .unverified(vx && vy))
}

/// `|D| <= r_x r_y - sum_i |m_i - <x,e_i>| |n_i - <y,e_i>| <= r_x r_y`, with
/// `m`, `n` the corridor midpoints.
pub fn gruss_refined_midpoint(
    x: &Vector,
    y: &Vector,
    fam: &OrthonormalFamily,
    cx: &ScalarCorridor,
    cy: &ScalarCorridor,
    opts: &Options,
) -> Result<BoundChain> {
    let (_, vx) = require("x", x, fam, cx, opts)?;
    let (_, vy) = require("y", y, fam, cy, opts)?;
    let a = fam.coefficients(x)?;
    let b = fam.coefficients(y)?;
    let (mx, my) = (cx.midpoints(), cy.midpoints());
    let correction = pairwise_sum(a.len(), |i| (mx[i] - a[i]).norm() * (my[i] - b[i]).norm());
    let outer = cx.radius() * cy.radius();
    let defect = gruss_defect(x, y, fam)?.norm();
    Ok(BoundChain::new(
        vec![
            ("|<x,y> - sum <x,e_i><e_i,y>|", defect),
            ("r_x r_y - sum |mid_x,i - <x,e_i>| |mid_y,i - <y,e_i>|", outer - correction),
            ("(1/4) |Phi-phi| |Gamma-gamma|", outer),
        ],
        &opts.chain,
    )
    .unverified(vx && vy))
}

/// Output of [`gruss_bound`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrussBound {
    /// `0 <= |D| <= (1/4) M(Phi,phi) M(Gamma,gamma) (sum |<x,e_i>|^2)^(1/2) (sum |<y,e_i>|^2)^(1/2)`.
    pub chain: BoundChain,
    /// `|D|^2 <= bessel_defect(x) * bessel_defect(y)`.
    pub schwarz_step: BoundChain,
    /// For a single vector with nonzero coefficients:
    /// `|<x,y> / (<x,e><e,y>) - 1| <= (1/4) M(Phi,phi) M(Gamma,gamma)`.
    pub ratio: Option<BoundChain>,
}

pub fn gruss_bound(
    x: &Vector,
    y: &Vector,
    fam: &OrthonormalFamily,
    cx: &ScalarCorridor,
    cy: &ScalarCorridor,
    opts: &Options,
) -> Result<GrussBound> {
    let mx = m_factor(cx)?;
    let my = m_factor(cy)?;
    let (_, vx) = require("x", x, fam, cx, opts)?;
    let (_, vy) = require("y", y, fam, cy, opts)?;
    let verified = vx && vy;
    let a = fam.coefficients(x)?;
    let b = fam.coefficients(y)?;
    let defect = gruss_defect(x, y, fam)?.norm();
    let factor = 0.25 * mx.value * my.value;

    let chain = BoundChain::with_reference(
        vec![
            ("0", 0.0),
            ("|<x,y> - sum <x,e_i><e_i,y>|", defect),
            (
                "(1/4) M(Phi,phi) M(Gamma,gamma) (sum |<x,e_i>|^2)^(1/2) (sum |<y,e_i>|^2)^(1/2)",
                factor * energy(&a).sqrt() * energy(&b).sqrt(),
            ),
        ],
        &opts.chain,
        x.norm() * y.norm(),
    )
    .unverified(verified);
    let schwarz_step = BoundChain::new(
        vec![
            ("|<x,y> - sum <x,e_i><e_i,y>|^2", defect * defect),
            ("bessel_defect(x) bessel_defect(y)", bessel_defect(x, fam)? * bessel_defect(y, fam)?),
        ],
        &opts.chain,
    );
    let ratio = if a.len() == 1 && a[0] != Scalar::default() && b[0] != Scalar::default() {
        let xy = inner(x, y)?;
        Some(
            BoundChain::new(
                vec![
                    ("|<x,y> / (<x,e><e,y>) - 1|", (xy / (a[0] * b[0].conj()) - 1.0).norm()),
                    ("(1/4) M(Phi,phi) M(Gamma,gamma)", factor),
                ],
                &opts.chain,
            )
            .unverified(verified),
        )
    } else {
        None
    };
    Ok(GrussBound {
        chain,
        schwarz_step,
        ratio,
    })
}

/// Real squared form:
/// `|D|^2 <= (1/16) sum (M_i-m_i)^2 / sum M_i m_i * sum (N_i-n_i)^2 / sum N_i n_i * sum <x,e_i>^2 * sum <y,e_i>^2`.
pub fn gruss_bound_real_squared(
    x: &Vector,
    y: &Vector,
    fam: &OrthonormalFamily,
    cx: &ScalarCorridor,
    cy: &ScalarCorridor,
    opts: &Options,
) -> Result<BoundChain> {
    ensure_real_setting(x, fam, cx)?;
    ensure_real_setting(y, fam, cy)?;
    cx.ensure_positive_re_sum()?;
    cy.ensure_positive_re_sum()?;
    let (_, vx) = require("x", x, fam, cx, opts)?;
    let (_, vy) = require("y", y, fam, cy, opts)?;
    let a = fam.coefficients(x)?;
    let b = fam.coefficients(y)?;
    let defect = gruss_defect(x, y, fam)?.norm();
    let bound = real_width_ratio(cx) * real_width_ratio(cy) * energy(&a) * energy(&b) / 16.0;
    Ok(BoundChain::with_reference(
        vec![
            ("0", 0.0),
            ("(<x,y> - sum <x,e_i><y,e_i>)^2", defect * defect),
            (
                "(1/16) sum (M_i-m_i)^2 sum (N_i-n_i)^2 sum <x,e_i>^2 sum <y,e_i>^2 / (sum M_i m_i sum N_i n_i)",
                bound,
            ),
        ],
        &opts.chain,
        x.norm_sqr() * y.norm_sqr(),
    )
    .unverified(vx && vy))
}

/// Companion bound with one corridor for `z = lambda x + (1 - lambda) y`:
/// `Re D <= bessel_defect(z) / (4 lambda (1-lambda)) <= M^2 sum |<z,e_i>|^2 / (16 lambda (1-lambda))`.
pub fn companion_bound(
    x: &Vector,
    y: &Vector,
    fam: &OrthonormalFamily,
    c: &ScalarCorridor,
    lambda: f64,
    opts: &Options,
) -> Result<BoundChain> {
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::BadLambda(lambda));
    }
    y.ensure_dim(x.dim(), "x vs y dimension")?;
    let m = m_factor(c)?;
    let z = x.scale(Scalar::new(lambda, 0.0)).axpy(Scalar::new(1.0 - lambda, 0.0), y);
    let (_, verified) = require("z", &z, fam, c, opts)?;
    let weight = 4.0 * lambda * (1.0 - lambda);
    let coeffs = fam.coefficients(&z)?;
    Ok(BoundChain::with_reference(
        vec![
            ("Re(<x,y> - sum <x,e_i><e_i,y>)", gruss_defect(x, y, fam)?.re),
            ("|z - sum <z,e_i>e_i|^2 / (4 lambda (1-lambda))", bessel_defect(&z, fam)? / weight),
            (
                "M(Phi,phi)^2 sum |<z,e_i>|^2 / (16 lambda (1-lambda))",
                m.squared() * energy(&coeffs) / (4.0 * weight),
            ),
        ],
        &opts.chain,
        x.norm() * y.norm(),
    )
    .unverified(verified))
}

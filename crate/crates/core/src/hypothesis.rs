//! Corridor hypotheses on a vector `x` relative to a family `{e_i}`.
//!
//! With `a = sum phi_i e_i` and `A = sum Phi_i e_i` there are two equivalent
//! ways to say that `x` lies in the corridor:
//!
//! * inner-product form: `Re <A - x, x - a> >= 0`;
//! * ball form: `|x - (A + a)/2| <= |A - a| / 2`.
//!
//! They are tied together by the identity
//! `Re <A - x, x - a> = |A - a|^2 / 4 - |x - (A + a)/2|^2`, and for an
//! orthonormal family `|A - a|^2 = sum |Phi_i - phi_i|^2`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::OrthonormalFamily;
use crate::space::{check_finite, inner_unchecked, pairwise_sum, Field, Scalar, Vector};
use crate::tolerance::{FAMILY_RESIDUAL_MARGIN, HYPOTHESIS_TOL};

/// Per-index bounds `(phi_i, Phi_i)` together with their derived sums.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawCorridor", into = "RawCorridor")]
pub struct ScalarCorridor {
    lo: Vec<Scalar>,
    hi: Vec<Scalar>,
    re_sum: f64,
    radius: f64,
    midpoints: Vec<Scalar>,
}

#[derive(Serialize, Deserialize)]
struct RawCorridor {
    phi: Vec<Scalar>,
    #[serde(rename = "Phi")]
    big_phi: Vec<Scalar>,
}

impl TryFrom<RawCorridor> for ScalarCorridor {
    type Error = Error;

    fn try_from(raw: RawCorridor) -> Result<Self> {
        ScalarCorridor::new(raw.phi, raw.big_phi)
    }
}

impl From<ScalarCorridor> for RawCorridor {
    fn from(c: ScalarCorridor) -> Self {
        RawCorridor {
            phi: c.lo,
            big_phi: c.hi,
        }
    }
}

impl ScalarCorridor {
    pub fn new(lo: Vec<Scalar>, hi: Vec<Scalar>) -> Result<Self> {
        if lo.is_empty() {
            return Err(Error::EmptyCorridor);
        }
        if lo.len() != hi.len() {
            return Err(Error::DimensionMismatch {
                context: "corridor lower vs upper length",
                expected: lo.len(),
                found: hi.len(),
            });
        }
        for &z in lo.iter().chain(&hi) {
            check_finite(z, "corridor bounds")?;
        }
        let n = lo.len();
        let re_sum = pairwise_sum(n, |i| (hi[i] * lo[i].conj()).re);
        let radius = 0.5 * pairwise_sum(n, |i| (hi[i] - lo[i]).norm_sqr()).sqrt();
        let midpoints = lo.iter().zip(&hi).map(|(&l, &h)| (l + h) * 0.5).collect();
        Ok(Self {
            lo,
            hi,
            re_sum,
            radius,
            midpoints,
        })
    }

    pub fn from_real(lo: &[f64], hi: &[f64]) -> Result<Self> {
        let wrap = |v: &[f64]| v.iter().map(|&r| Scalar::new(r, 0.0)).collect();
        Self::new(wrap(lo), wrap(hi))
    }

    /// Zero-width corridor pinned at `center`.
    pub fn degenerate(center: Vec<Scalar>) -> Result<Self> {
        Self::new(center.clone(), center)
    }

    pub fn len(&self) -> usize {
        self.lo.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lo.is_empty()
    }

    /// Lower bounds `phi_i`.
    pub fn lo(&self) -> &[Scalar] {
        &self.lo
    }

    /// Upper bounds `Phi_i`.
    pub fn hi(&self) -> &[Scalar] {
        &self.hi
    }

    /// `sum_i Re(Phi_i * conj(phi_i))`.
    pub fn re_sum(&self) -> f64 {
        self.re_sum
    }

    /// `(1/2) * sqrt(sum_i |Phi_i - phi_i|^2)`.
    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// `(phi_i + Phi_i) / 2`.
    pub fn midpoints(&self) -> &[Scalar] {
        &self.midpoints
    }

    pub fn is_real(&self) -> bool {
        self.lo.iter().chain(&self.hi).all(|z| z.im == 0.0)
    }

    /// Real bounds with `0 <= phi_i` and `0 <= Phi_i`.
    pub fn is_nonnegative_real(&self) -> bool {
        self.lo
            .iter()
            .chain(&self.hi)
            .all(|z| z.im == 0.0 && z.re >= 0.0)
    }

    /// Multiplies every bound by `t`.
    pub fn scaled(&self, t: Scalar) -> Self {
        let scale = |v: &[Scalar]| v.iter().map(|&z| z * t).collect();
        Self::new(scale(&self.lo), scale(&self.hi)).expect("scaling keeps a valid corridor")
    }

    pub(crate) fn ensure_positive_re_sum(&self) -> Result<()> {
        if self.re_sum > 0.0 {
            Ok(())
        } else {
            Err(Error::NonpositiveReSum { re_sum: self.re_sum })
        }
    }
}

/// Both forms of the corridor hypothesis evaluated at one vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HypothesisReport {
    /// `Re <A - x, x - a>`.
    pub cond_i_value: f64,
    /// `|x - (A + a)/2|`.
    pub cond_ii_residual: f64,
    pub radius: f64,
    /// Absolute tolerance actually applied to `cond_i_value`.
    pub tolerance: f64,
    pub holds: bool,
}

impl HypothesisReport {
    /// `radius^2 - residual^2`, the ball form of the hypothesis value.
    pub fn ball_form(&self) -> f64 {
        self.radius * self.radius - self.cond_ii_residual * self.cond_ii_residual
    }
}

/// Evaluates both forms of the hypothesis and checks the identity between
/// them.
///
/// `tol` is relative to `max(1, radius^2, residual^2)` and should be at least
/// [`recommended_tol`] for the family; a family whose Gram residual is too
/// large for `tol` surfaces as [`Error::IdentityViolation`]. `holds` is
/// `cond_i_value >= -tolerance`, inclusive so boundary instances pass.
pub fn check_hypothesis(
    x: &Vector,
    fam: &OrthonormalFamily,
    c: &ScalarCorridor,
    tol: f64,
) -> Result<HypothesisReport> {
    if !(tol >= 0.0 && tol.is_finite()) {
        return Err(Error::BadTolerance(tol));
    }
    x.ensure_dim(fam.dim(), "vector vs family dimension")?;
    if c.len() != fam.len() {
        return Err(Error::DimensionMismatch {
            context: "corridor length vs family size",
            expected: fam.len(),
            found: c.len(),
        });
    }
    let upper = fam.combine(c.hi())?;
    let lower = fam.combine(c.lo())?;
    let center = fam.combine(c.midpoints())?;

    let cond_i_value = inner_unchecked(&(&upper - x), &(x - &lower)).re;
    let cond_ii_residual = (x - &center).norm();
    let radius = c.radius();

    let scale = 1.0_f64
        .max(radius * radius)
        .max(cond_ii_residual * cond_ii_residual);
    let tolerance = tol * scale;

    let ball_form = radius * radius - cond_ii_residual * cond_ii_residual;
    let gap = (cond_i_value - ball_form).abs();
    if gap > tolerance {
        return Err(Error::IdentityViolation {
            cond_i: cond_i_value,
            ball_form,
            gap,
            tolerance,
        });
    }
    Ok(HypothesisReport {
        cond_i_value,
        cond_ii_residual,
        radius,
        tolerance,
        holds: cond_i_value >= -tolerance,
    })
}

/// Hypothesis tolerance that stays ten times above the family's Gram
/// residual.
pub fn recommended_tol(fam: &OrthonormalFamily) -> f64 {
    HYPOTHESIS_TOL.max(FAMILY_RESIDUAL_MARGIN * fam.gram_residual())
}

/// Shape of randomly drawn corridors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorridorSpec {
    pub field: Field,
    /// Typical magnitude of the midpoints.
    pub center_scale: f64,
    /// Typical magnitude of the half-widths `(Phi_i - phi_i)/2`.
    pub width_scale: f64,
    /// Allow bounds of either sign (real) or half-widths exceeding the
    /// midpoint (complex), so `re_sum` may be nonpositive.
    pub signed: bool,
}

impl CorridorSpec {
    pub fn real() -> Self {
        Self {
            field: Field::Real,
            center_scale: 2.0,
            width_scale: 1.0,
            signed: false,
        }
    }

    pub fn complex() -> Self {
        Self {
            field: Field::Complex,
            ..Self::real()
        }
    }

    pub fn with_signed(self, signed: bool) -> Self {
        Self { signed, ..self }
    }

    /// Draws `n` index pairs.
    ///
    /// Unsigned real corridors have `0 < phi_i <= Phi_i`; unsigned complex
    /// corridors keep each half-width below its midpoint's modulus, so every
    /// term `Re(Phi_i conj(phi_i))` is positive.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, n: usize) -> Result<ScalarCorridor> {
        let mut lo = Vec::with_capacity(n);
        let mut hi = Vec::with_capacity(n);
        for _ in 0..n {
            let (mid, half) = match (self.field, self.signed) {
                (Field::Real, false) => {
                    let phi = self.center_scale * rng.random_range(0.05..1.0);
                    let half = 0.5 * self.width_scale * rng.random::<f64>();
                    (Scalar::new(phi + half, 0.0), Scalar::new(half, 0.0))
                }
                (Field::Real, true) => (
                    Scalar::new(self.center_scale * rng.random_range(-1.0..1.0), 0.0),
                    Scalar::new(self.width_scale * rng.random::<f64>(), 0.0),
                ),
                (Field::Complex, signed) => {
                    let mid = Scalar::from_polar(
                        self.center_scale * rng.random_range(0.2..1.0),
                        rng.random_range(0.0..std::f64::consts::TAU),
                    );
                    let cap = if signed {
                        self.width_scale
                    } else {
                        self.width_scale.min(0.95 * mid.norm())
                    };
                    let half = Scalar::from_polar(
                        cap * rng.random::<f64>(),
                        rng.random_range(0.0..std::f64::consts::TAU),
                    );
                    (mid, half)
                }
            };
            lo.push(mid - half);
            hi.push(mid + half);
        }
        ScalarCorridor::new(lo, hi)
    }
}

/// Standard Gaussian vector of the given field.
pub fn gaussian_vector<R: Rng + ?Sized>(rng: &mut R, dim: usize, field: Field) -> Vector {
    let coords = (0..dim)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = match field {
                Field::Real => 0.0,
                Field::Complex => rng.sample(StandardNormal),
            };
            Scalar::new(re, im)
        })
        .collect();
    Vector::from_coords_unchecked(coords)
}

/// Uniformly random direction scaled to length `length`.
pub fn random_direction<R: Rng + ?Sized>(rng: &mut R, dim: usize, field: Field, length: f64) -> Vector {
    loop {
        let g = gaussian_vector(rng, dim, field);
        let n = g.norm();
        if n > 1e-12 {
            return g.scale(Scalar::new(length / n, 0.0));
        }
    }
}

/// `x = center + u` with `|u| = slack * radius` and `u` a random direction in
/// the whole space, together with the corridor it was drawn for.
pub fn random_admissible_with<R: Rng + ?Sized>(
    rng: &mut R,
    fam: &OrthonormalFamily,
    spec: &CorridorSpec,
    slack: f64,
) -> Result<(Vector, ScalarCorridor)> {
    let corridor = spec.sample(rng, fam.len())?;
    let x = admissible_point(rng, fam, &corridor, spec.field, slack)?;
    Ok((x, corridor))
}

/// A point at distance `slack * radius` from the corridor center.
pub fn admissible_point<R: Rng + ?Sized>(
    rng: &mut R,
    fam: &OrthonormalFamily,
    corridor: &ScalarCorridor,
    field: Field,
    slack: f64,
) -> Result<Vector> {
    if !(0.0..=1.0).contains(&slack) {
        return Err(Error::BadConfig(format!("slack {slack} outside [0, 1]")));
    }
    let center = fam.combine(corridor.midpoints())?;
    let length = slack * corridor.radius();
    if length == 0.0 {
        return Ok(center);
    }
    let u = random_direction(rng, fam.dim(), field, length);
    Ok(&center + &u)
}

/// Seeded form of [`random_admissible_with`].
pub fn random_admissible(
    fam: &OrthonormalFamily,
    spec: &CorridorSpec,
    seed: u64,
    slack: f64,
) -> Result<(Vector, ScalarCorridor)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_admissible_with(&mut rng, fam, spec, slack)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::{gram_schmidt, validate_family};

    fn real(v: &[f64]) -> Vector {
        Vector::from_real(v).unwrap()
    }

    fn single(e: &[f64]) -> OrthonormalFamily {
        validate_family(vec![real(e)], 1e-10).unwrap()
    }

    #[test]
    fn corridor_derived_quantities() {
        let c = ScalarCorridor::from_real(&[1.0, 0.0], &[3.0, 2.0]).unwrap();
        assert_eq!(c.re_sum(), 3.0);
        assert_eq!(c.radius(), 0.5 * 8.0_f64.sqrt());
        assert_eq!(c.midpoints(), &[Scalar::new(2.0, 0.0), Scalar::new(1.0, 0.0)]);
    }

    #[test]
    fn corridor_errors() {
        assert!(matches!(ScalarCorridor::new(vec![], vec![]), Err(Error::EmptyCorridor)));
        assert!(matches!(
            ScalarCorridor::from_real(&[1.0], &[1.0, 2.0]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(ScalarCorridor::from_real(&[f64::INFINITY], &[1.0]).is_err());
    }

    #[test]
    fn corridor_json_names() {
        let c = ScalarCorridor::from_real(&[1.0], &[3.0]).unwrap();
        let json = serde_json::to_value(&c).unwrap();
        assert_eq!(json, serde_json::json!({"phi": [[1.0, 0.0]], "Phi": [[3.0, 0.0]]}));
    }

    #[test]
    fn center_of_corridor() {
        let fam = gram_schmidt(&[real(&[1.0, 1.0, 0.0]), real(&[0.0, 1.0, 2.0])], 1e-10).unwrap();
        let c = ScalarCorridor::from_real(&[0.5, -1.0], &[2.5, 1.0]).unwrap();
        let x = fam.combine(c.midpoints()).unwrap();
        let r = check_hypothesis(&x, &fam, &c, 1e-10).unwrap();
        assert!(r.cond_ii_residual < 1e-15);
        assert!((r.cond_i_value - c.radius().powi(2)).abs() < 1e-14);
        assert!(r.holds);
    }

    #[test]
    fn lower_endpoint_is_boundary() {
        let fam = single(&[1.0, 0.0]);
        let c = ScalarCorridor::from_real(&[1.5], &[4.0]).unwrap();
        let x = real(&[1.5, 0.0]);
        let r = check_hypothesis(&x, &fam, &c, 1e-10).unwrap();
        assert_eq!(r.cond_i_value, 0.0);
        assert!(r.holds);
    }

    #[test]
    fn diagonal_construction_is_boundary() {
        let h = 1.0 / 2.0_f64.sqrt();
        let fam = single(&[h, h]);
        let (phi, big_phi) = (0.7, 1.9);
        let c = ScalarCorridor::from_real(&[phi], &[big_phi]).unwrap();
        let x = real(&[phi * h, big_phi * h]);
        let r = check_hypothesis(&x, &fam, &c, 1e-10).unwrap();
        assert!(r.cond_i_value.abs() < 1e-15, "{}", r.cond_i_value);
        assert!(r.holds);
    }

    #[test]
    fn outside_point_fails() {
        let fam = single(&[1.0, 0.0]);
        let c = ScalarCorridor::from_real(&[1.0], &[2.0]).unwrap();
        let r = check_hypothesis(&real(&[3.0, 0.0]), &fam, &c, 1e-10).unwrap();
        assert!(!r.holds);
        assert!(r.cond_ii_residual > r.radius);
    }

    #[test]
    fn degenerate_corridor_admits_only_center() {
        let fam = single(&[1.0, 0.0]);
        let c = ScalarCorridor::degenerate(vec![Scalar::new(2.0, 0.0)]).unwrap();
        assert_eq!(c.radius(), 0.0);
        assert!(check_hypothesis(&real(&[2.0, 0.0]), &fam, &c, 1e-10).unwrap().holds);
        assert!(!check_hypothesis(&real(&[2.0, 0.1]), &fam, &c, 1e-10).unwrap().holds);
    }

    #[test]
    fn broken_family_trips_identity() {
        // admitted only because the family tolerance is very loose
        let fam = validate_family(vec![real(&[1.0, 0.0]), real(&[0.1, 1.0])], 0.2).unwrap();
        let c = ScalarCorridor::from_real(&[0.0, 0.0], &[4.0, 4.0]).unwrap();
        let err = check_hypothesis(&real(&[0.0, 0.0]), &fam, &c, 1e-12).unwrap_err();
        match err {
            Error::IdentityViolation { gap, .. } => assert!((gap - 0.84).abs() < 1e-12),
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(recommended_tol(&fam), 1.0);
    }

    #[test]
    fn slack_zero_and_one() {
        let fam = gram_schmidt(
            &[real(&[1.0, 2.0, 0.0, 1.0]), real(&[0.0, 1.0, 1.0, -1.0])],
            1e-10,
        )
        .unwrap();
        let spec = CorridorSpec::real();
        let (x, c) = random_admissible(&fam, &spec, 3, 0.0).unwrap();
        let r = check_hypothesis(&x, &fam, &c, 1e-10).unwrap();
        assert_eq!(x, fam.combine(c.midpoints()).unwrap());
        assert!(r.cond_ii_residual < 1e-15);

        for seed in 0..20 {
            let (x, c) = random_admissible(&fam, &spec, seed, 1.0).unwrap();
            let r = check_hypothesis(&x, &fam, &c, 1e-10).unwrap();
            assert!((r.cond_ii_residual - c.radius()).abs() <= 1e-12);
            assert!(r.cond_i_value.abs() <= 1e-12 * c.radius().powi(2).max(1.0));
            assert!(r.holds);
        }
    }

    #[test]
    fn unsigned_specs_give_positive_re_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for spec in [CorridorSpec::real(), CorridorSpec::complex()] {
            for n in 1..6 {
                let c = spec.sample(&mut rng, n).unwrap();
                assert!(c.re_sum() > 0.0);
            }
        }
        assert!(CorridorSpec::real().sample(&mut rng, 4).unwrap().is_nonnegative_real());
    }
}

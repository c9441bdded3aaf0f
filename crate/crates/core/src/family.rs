//! Finite orthonormal families `{e_i}` and ways to build them.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::space::{embed, inner_unchecked, pairwise_sum, QuadratureGrid, SampledFunction, Scalar, Vector};
use crate::tolerance::{EXACT_FAMILY_TOL, QUADRATURE_FAMILY_TOL};

/// A nonempty family of vectors whose Gram matrix is within `tolerance` of
/// the identity.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrthonormalFamily {
    members: Vec<Vector>,
    gram_residual: f64,
    tolerance: f64,
}

impl OrthonormalFamily {
    pub fn members(&self) -> &[Vector] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Dimension of the ambient space.
    pub fn dim(&self) -> usize {
        self.members[0].dim()
    }

    pub fn gram_residual(&self) -> f64 {
        self.gram_residual
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn is_real(&self) -> bool {
        self.members.iter().all(Vector::is_real)
    }

    /// Fourier coefficients `<x, e_i>`.
    pub fn coefficients(&self, x: &Vector) -> Result<Vec<Scalar>> {
        x.ensure_dim(self.dim(), "vector vs family dimension")?;
        Ok(self.members.iter().map(|e| inner_unchecked(x, e)).collect())
    }

    /// `sum_i coeffs[i] * e_i`.
    pub fn combine(&self, coeffs: &[Scalar]) -> Result<Vector> {
        if coeffs.len() != self.len() {
            return Err(Error::DimensionMismatch {
                context: "coefficients vs family size",
                expected: self.len(),
                found: coeffs.len(),
            });
        }
        let coords = (0..self.dim())
            .map(|k| pairwise_sum(self.len(), |i| coeffs[i] * self.members[i].coords()[k]))
            .collect();
        Ok(Vector::from_coords_unchecked(coords))
    }

    /// Orthogonal projection of `x` onto the span of the family.
    pub fn project(&self, x: &Vector) -> Result<Vector> {
        self.combine(&self.coefficients(x)?)
    }

    /// `x - sum_i <x, e_i> e_i`.
    pub fn residual(&self, x: &Vector) -> Result<Vector> {
        Ok(x - &self.project(x)?)
    }
}

/// Computes the full Gram matrix and keeps the family if every entry is
/// within `tolerance` of the identity.
pub fn validate_family(members: Vec<Vector>, tolerance: f64) -> Result<OrthonormalFamily> {
    if !(tolerance > 0.0 && tolerance.is_finite()) {
        return Err(Error::BadTolerance(tolerance));
    }
    let first = members.first().ok_or(Error::EmptyFamily)?;
    let dim = first.dim();
    for m in &members {
        m.ensure_dim(dim, "family member dimension")?;
    }
    let mut worst = (0, 0, 0.0_f64);
    for i in 0..members.len() {
        for j in i..members.len() {
            let g = inner_unchecked(&members[i], &members[j]);
            let target = if i == j { 1.0 } else { 0.0 };
            let dev = (g - Scalar::new(target, 0.0)).norm();
            if !dev.is_finite() {
                return Err(Error::NonFinite { context: "Gram matrix" });
            }
            if dev > worst.2 {
                worst = (i, j, dev);
            }
        }
    }
    if worst.2 > tolerance {
        return Err(Error::GramResidualExceeded {
            i: worst.0,
            j: worst.1,
            residual: worst.2,
            tolerance,
        });
    }
    Ok(OrthonormalFamily {
        members,
        gram_residual: worst.2,
        tolerance,
    })
}

/// Modified Gram–Schmidt with one reorthogonalization pass.
///
/// Each output vector is rotated so that its first significant coordinate is
/// real and positive. A vector whose residual norm falls below
/// `tolerance * |input|` is rejected as [`Error::RankDeficient`].
pub fn gram_schmidt(raw: &[Vector], tolerance: f64) -> Result<OrthonormalFamily> {
    if !(tolerance > 0.0 && tolerance.is_finite()) {
        return Err(Error::BadTolerance(tolerance));
    }
    let first = raw.first().ok_or(Error::EmptyFamily)?;
    let dim = first.dim();
    let mut basis: Vec<Vector> = Vec::with_capacity(raw.len());
    for (index, v) in raw.iter().enumerate() {
        v.ensure_dim(dim, "Gram–Schmidt input dimension")?;
        let input_norm = v.norm();
        let mut w = v.clone();
        for _pass in 0..2 {
            for q in &basis {
                let c = inner_unchecked(&w, q);
                w = w.axpy(-c, q);
            }
        }
        let norm = w.norm();
        if input_norm == 0.0 || norm < tolerance * input_norm {
            return Err(Error::RankDeficient {
                index,
                ratio: if input_norm == 0.0 { 0.0 } else { norm / input_norm },
            });
        }
        let w = w.scale(Scalar::new(1.0 / norm, 0.0));
        basis.push(fix_phase(w));
    }
    validate_family(basis, tolerance)
}

fn fix_phase(v: Vector) -> Vector {
    let peak = v.coords().iter().map(|z| z.norm()).fold(0.0, f64::max);
    let Some(k) = v.coords().iter().position(|z| z.norm() > 1e-8 * peak) else {
        return v;
    };
    let lead = v.coords()[k];
    if lead.im == 0.0 && lead.re > 0.0 {
        return v;
    }
    let magnitude = lead.norm();
    let mut coords: Vec<Scalar> = v.scale(lead.conj() / magnitude).into();
    // rotated lead is real up to rounding; pin it
    coords[k] = Scalar::new(magnitude, 0.0);
    Vector::from_coords_unchecked(coords)
}

/// Built-in families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyKind {
    /// Unit coordinate vectors of `R^count`.
    Canonical,
    /// `1/sqrt(2π), cos(ks)/sqrt(π), sin(ks)/sqrt(π), ...` on `[0, 2π]`.
    Trig,
    /// Normalized Legendre polynomials on `[-1, 1]`.
    Legendre,
}

impl FamilyKind {
    fn name(self) -> &'static str {
        match self {
            FamilyKind::Canonical => "canonical",
            FamilyKind::Trig => "trig",
            FamilyKind::Legendre => "legendre",
        }
    }
}

/// Value of the `index`-th trigonometric basis function at `s`.
pub fn trig_basis(index: usize, s: f64) -> f64 {
    if index == 0 {
        return 1.0 / (2.0 * PI).sqrt();
    }
    let k = index.div_ceil(2) as f64;
    let norm = 1.0 / PI.sqrt();
    if index % 2 == 1 {
        norm * (k * s).cos()
    } else {
        norm * (k * s).sin()
    }
}

/// `sqrt((2n+1)/2) * P_n(s)` via the three-term recurrence.
pub fn legendre_basis(degree: usize, s: f64) -> f64 {
    let (mut prev, mut cur) = (0.0, 1.0);
    for n in 0..degree {
        let n = n as f64;
        let next = ((2.0 * n + 1.0) * s * cur - n * prev) / (n + 1.0);
        prev = cur;
        cur = next;
    }
    cur * ((2 * degree + 1) as f64 / 2.0).sqrt()
}

/// The first `count` functions of a sampled built-in family. On a grid the
/// canonical family is the set of node indicators scaled to unit mass.
pub fn builtin_functions(kind: FamilyKind, count: usize, grid: &QuadratureGrid) -> Result<Vec<SampledFunction>> {
    (0..count)
        .map(|i| match kind {
            FamilyKind::Canonical => {
                let m = *grid
                    .sqrt_mass()
                    .get(i)
                    .filter(|m| **m > 0.0)
                    .ok_or_else(|| Error::InvalidGrid(format!("node {i} missing or massless")))?;
                let mut values = vec![0.0; grid.len()];
                values[i] = 1.0 / m;
                SampledFunction::from_real(&values)
            }
            FamilyKind::Trig => SampledFunction::sample_real(grid, |s| trig_basis(i, s)),
            FamilyKind::Legendre => SampledFunction::sample_real(grid, |s| legendre_basis(i, s)),
        })
        .collect()
}

/// Builds a named family. `Canonical` ignores `grid`; the sampled kinds need
/// one and are validated at the quadrature tolerance.
pub fn builtin_family(kind: FamilyKind, count: usize, grid: Option<&QuadratureGrid>) -> Result<OrthonormalFamily> {
    if count == 0 {
        return Err(Error::EmptyFamily);
    }
    match kind {
        FamilyKind::Canonical => validate_family(
            (0..count).map(|k| Vector::unit(count, k)).collect(),
            EXACT_FAMILY_TOL,
        ),
        FamilyKind::Trig | FamilyKind::Legendre => {
            let grid = grid.ok_or(Error::GridRequired { kind: kind.name() })?;
            let members = builtin_functions(kind, count, grid)?
                .iter()
                .map(|f| embed(f, grid))
                .collect::<Result<Vec<_>>>()?;
            validate_family(members, QUADRATURE_FAMILY_TOL)
        }
    }
}

//! Scalars, finite vectors, and the discrete weighted measure space.
//!
//! All inner products are linear in the first argument and conjugate-linear
//! in the second: `inner(x, y) = sum_k x_k * conj(y_k)`. Every sum over
//! coordinates goes through [`pairwise_sum`].

use std::f64::consts::PI;
use std::num::NonZeroUsize;
use std::ops::{Add, Mul, Sub};

use gauss_quad::GaussLegendre;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Field element. Serializes as the two-element array `[re, im]`.
pub type Scalar = Complex64;

/// Which field the coordinates live in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    Real,
    #[default]
    Complex,
}

impl Field {
    pub fn admits(self, z: Scalar) -> bool {
        self == Field::Complex || z.im == 0.0
    }
}

const PAIRWISE_BLOCK: usize = 8;

/// Pairwise (tree) summation of `term(0) + ... + term(n - 1)`.
///
/// Blocks of up to eight terms are summed left to right; larger ranges are
/// split at the midpoint. The order depends only on `n`.
pub fn pairwise_sum<T, F>(n: usize, term: F) -> T
where
    T: Copy + Default + Add<Output = T>,
    F: Fn(usize) -> T,
{
    fn go<T, F>(lo: usize, hi: usize, term: &F) -> T
    where
        T: Copy + Default + Add<Output = T>,
        F: Fn(usize) -> T,
    {
        if hi - lo <= PAIRWISE_BLOCK {
            let mut acc = T::default();
            for k in lo..hi {
                acc = acc + term(k);
            }
            acc
        } else {
            let mid = lo + (hi - lo) / 2;
            go(lo, mid, term) + go(mid, hi, term)
        }
    }
    go(0, n, &term)
}

pub(crate) fn check_finite(z: Scalar, context: &'static str) -> Result<()> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite { context })
    }
}

/// A finite coordinate vector over the reals or complexes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "Vec<Scalar>", try_from = "Vec<Scalar>")]
pub struct Vector {
    coords: Vec<Scalar>,
}

impl Vector {
    pub fn new(coords: Vec<Scalar>) -> Result<Self> {
        Self::with_field(coords, Field::Complex)
    }

    /// Builds a vector, rejecting non-finite entries and, in real mode,
    /// nonzero imaginary parts.
    pub fn with_field(coords: Vec<Scalar>, field: Field) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::ZeroDimension);
        }
        for &z in &coords {
            check_finite(z, "vector coordinates")?;
            if !field.admits(z) {
                return Err(Error::ImaginaryInRealMode {
                    context: "vector coordinates",
                    im: z.im,
                });
            }
        }
        Ok(Self { coords })
    }

    pub fn from_real(coords: &[f64]) -> Result<Self> {
        Self::with_field(
            coords.iter().map(|&r| Scalar::new(r, 0.0)).collect(),
            Field::Real,
        )
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            coords: vec![Scalar::default(); dim],
        }
    }

    /// `k`-th canonical basis vector of dimension `dim`.
    pub fn unit(dim: usize, k: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.coords[k] = Scalar::new(1.0, 0.0);
        v
    }

    pub(crate) fn from_coords_unchecked(coords: Vec<Scalar>) -> Self {
        Self { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    pub fn is_real(&self) -> bool {
        self.coords.iter().all(|z| z.im == 0.0)
    }

    pub fn norm_sqr(&self) -> f64 {
        pairwise_sum(self.dim(), |k| self.coords[k].norm_sqr())
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn scale(&self, s: Scalar) -> Vector {
        Vector {
            coords: self.coords.iter().map(|&z| z * s).collect(),
        }
    }

    /// `self + s * other`.
    pub fn axpy(&self, s: Scalar, other: &Vector) -> Vector {
        assert_eq!(self.dim(), other.dim(), "axpy dimension mismatch");
        Vector {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(&a, &b)| a + s * b)
                .collect(),
        }
    }

    pub(crate) fn ensure_dim(&self, expected: usize, context: &'static str) -> Result<()> {
        if self.dim() == expected {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                context,
                expected,
                found: self.dim(),
            })
        }
    }
}

impl Add for &Vector {
    type Output = Vector;

    fn add(self, rhs: &Vector) -> Vector {
        assert_eq!(self.dim(), rhs.dim(), "vector addition dimension mismatch");
        Vector {
            coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &Vector {
    type Output = Vector;

    fn sub(self, rhs: &Vector) -> Vector {
        assert_eq!(self.dim(), rhs.dim(), "vector subtraction dimension mismatch");
        Vector {
            coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul<Scalar> for &Vector {
    type Output = Vector;

    fn mul(self, rhs: Scalar) -> Vector {
        self.scale(rhs)
    }
}

impl TryFrom<Vec<Scalar>> for Vector {
    type Error = Error;

    fn try_from(coords: Vec<Scalar>) -> Result<Self> {
        Vector::new(coords)
    }
}

impl From<Vector> for Vec<Scalar> {
    fn from(v: Vector) -> Self {
        v.coords
    }
}

/// `sum_k x_k * conj(y_k)`, pairwise summed.
pub fn inner(x: &Vector, y: &Vector) -> Result<Scalar> {
    y.ensure_dim(x.dim(), "inner product")?;
    Ok(inner_unchecked(x, y))
}

pub(crate) fn inner_unchecked(x: &Vector, y: &Vector) -> Scalar {
    let (a, b) = (x.coords(), y.coords());
    pairwise_sum(a.len(), |k| a[k] * b[k].conj())
}

/// Nodes, nonnegative weights, and nonnegative density values of a discrete
/// measure. The weight of node `j` in every integral is `weights[j] * rho[j]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawGrid", into = "RawGrid")]
pub struct QuadratureGrid {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    rho: Vec<f64>,
    sqrt_mass: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct RawGrid {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    rho: Vec<f64>,
}

impl TryFrom<RawGrid> for QuadratureGrid {
    type Error = Error;

    fn try_from(raw: RawGrid) -> Result<Self> {
        QuadratureGrid::new(raw.nodes, raw.weights, raw.rho)
    }
}

impl From<QuadratureGrid> for RawGrid {
    fn from(g: QuadratureGrid) -> Self {
        RawGrid {
            nodes: g.nodes,
            weights: g.weights,
            rho: g.rho,
        }
    }
}

impl QuadratureGrid {
    pub fn new(nodes: Vec<f64>, weights: Vec<f64>, rho: Vec<f64>) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::InvalidGrid("no nodes".into()));
        }
        if weights.len() != nodes.len() || rho.len() != nodes.len() {
            return Err(Error::InvalidGrid(format!(
                "length mismatch: {} nodes, {} weights, {} density values",
                nodes.len(),
                weights.len(),
                rho.len()
            )));
        }
        if nodes.iter().chain(&weights).chain(&rho).any(|v| !v.is_finite()) {
            return Err(Error::InvalidGrid("non-finite entry".into()));
        }
        if let Some(j) = weights.iter().position(|&w| w < 0.0) {
            return Err(Error::InvalidGrid(format!("negative weight at node {j}")));
        }
        if let Some(j) = rho.iter().position(|&r| r < 0.0) {
            return Err(Error::InvalidGrid(format!("negative density at node {j}")));
        }
        let sqrt_mass: Vec<f64> = weights
            .iter()
            .zip(&rho)
            .map(|(w, r)| (w * r).sqrt())
            .collect();
        if sqrt_mass.iter().all(|&m| m == 0.0) {
            return Err(Error::InvalidGrid("all node masses are zero".into()));
        }
        Ok(Self {
            nodes,
            weights,
            rho,
            sqrt_mass,
        })
    }

    /// Gauss–Legendre rule with `n` nodes on `[a, b]`, density 1.
    pub fn gauss_legendre(n: usize, a: f64, b: f64) -> Result<Self> {
        let n = NonZeroUsize::new(n).ok_or_else(|| Error::InvalidGrid("no nodes".into()))?;
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::InvalidGrid(format!("bad interval [{a}, {b}]")));
        }
        let rule = GaussLegendre::new(n);
        let half = 0.5 * (b - a);
        let (nodes, weights) = rule
            .as_node_weight_pairs()
            .iter()
            .map(|&(x, w)| (half * x + 0.5 * (a + b), half * w))
            .unzip();
        Self::new(nodes, weights, vec![1.0; n.get()])
    }

    /// Gauss–Legendre rule mapped onto one period `[0, 2π]`.
    pub fn periodic(n: usize) -> Result<Self> {
        Self::gauss_legendre(n, 0.0, 2.0 * PI)
    }

    /// Replaces the density with `rho(s)` evaluated at the nodes.
    pub fn with_density(self, rho: impl Fn(f64) -> f64) -> Result<Self> {
        let values = self.nodes.iter().map(|&s| rho(s)).collect();
        Self::new(self.nodes, self.weights, values)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn rho(&self) -> &[f64] {
        &self.rho
    }

    /// `weights[j] * rho[j]`.
    pub fn mass(&self, j: usize) -> f64 {
        self.weights[j] * self.rho[j]
    }

    /// `sqrt(weights[j] * rho[j])`, the factor applied by [`embed`].
    pub fn sqrt_mass(&self) -> &[f64] {
        &self.sqrt_mass
    }
}

/// Values of a function at the nodes of a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "Vec<Scalar>", try_from = "Vec<Scalar>")]
pub struct SampledFunction {
    values: Vec<Scalar>,
}

impl SampledFunction {
    pub fn new(values: Vec<Scalar>) -> Result<Self> {
        for &z in &values {
            check_finite(z, "function samples")?;
        }
        Ok(Self { values })
    }

    pub fn from_real(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&r| Scalar::new(r, 0.0)).collect())
    }

    pub fn sample(grid: &QuadratureGrid, f: impl Fn(f64) -> Scalar) -> Result<Self> {
        Self::new(grid.nodes().iter().map(|&s| f(s)).collect())
    }

    pub fn sample_real(grid: &QuadratureGrid, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::sample(grid, |s| Scalar::new(f(s), 0.0))
    }

    pub fn values(&self) -> &[Scalar] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_real(&self) -> bool {
        self.values.iter().all(|z| z.im == 0.0)
    }

    pub(crate) fn ensure_on(&self, grid: &QuadratureGrid) -> Result<()> {
        if self.len() == grid.len() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                context: "function samples vs grid nodes",
                expected: grid.len(),
                found: self.len(),
            })
        }
    }
}

impl TryFrom<Vec<Scalar>> for SampledFunction {
    type Error = Error;

    fn try_from(values: Vec<Scalar>) -> Result<Self> {
        SampledFunction::new(values)
    }
}

impl From<SampledFunction> for Vec<Scalar> {
    fn from(f: SampledFunction) -> Self {
        f.values
    }
}

/// Maps a sampled function to coordinates `f(s_k) * sqrt(w_k * rho(s_k))`,
/// so that the Euclidean inner product of embeddings is the weighted
/// quadrature inner product.
pub fn embed(f: &SampledFunction, grid: &QuadratureGrid) -> Result<Vector> {
    f.ensure_on(grid)?;
    Ok(Vector::from_coords_unchecked(
        f.values
            .iter()
            .zip(grid.sqrt_mass())
            .map(|(&z, &m)| z * m)
            .collect(),
    ))
}

/// `sum_j w_j rho(s_j) f(s_j) conj(g(s_j))`.
///
/// Evaluated through [`embed`] so that it agrees bit for bit with `inner`
/// on embedded vectors.
pub fn grid_inner(f: &SampledFunction, g: &SampledFunction, grid: &QuadratureGrid) -> Result<Scalar> {
    let (ef, eg) = (embed(f, grid)?, embed(g, grid)?);
    Ok(inner_unchecked(&ef, &eg))
}

//! The Q-structure on a single tangent space.
//!
//! Vectors are stored by their coordinates in a Q-basis {i, Qi, Q²i}. The
//! endomorphism Q cycles the basis, so on coordinates it is the permutation
//! (u, v, q) ↦ (q, u, v). Because Q is a g-isometry with Q³ = id, every pair
//! of distinct basis vectors meets at the same angle φ and the Gram matrix of
//! g is the circulant with diagonal 1 and off-diagonal cos φ. The associated
//! metric f(r, w) = g(r, Qw) + g(Qr, w) is then the circulant with diagonal
//! 2cos φ and off-diagonal 1 + cos φ, whose eigenvalues 2 + 4cos φ and
//! cos φ − 1 always have opposite signs on the admissible range of φ.

use std::f64::consts::FRAC_PI_2;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{Matrix3, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Mat3 = [[f64; 3]; 3];

pub const PHI_MAX: f64 = 2.0 * std::f64::consts::FRAC_PI_3;

/// |f(r,r)| ≤ CLASSIFY_TOL · max(1, g(r,r)) counts as isotropic.
pub const CLASSIFY_TOL: f64 = 1e-9;

/// Coordinates (u, v, q) of r = u·i + v·Qi + q·Q²i.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec3Q {
    pub u: f64,
    pub v: f64,
    pub q: f64,
}

impl Vec3Q {
    pub const fn new(u: f64, v: f64, q: f64) -> Self {
        Self { u, v, q }
    }

    pub fn try_new(u: f64, v: f64, q: f64) -> Result<Self> {
        let r = Self::new(u, v, q);
        if r.is_finite() {
            Ok(r)
        } else {
            Err(Error::Invalid(format!("non-finite vector ({u}, {v}, {q})")))
        }
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.u, self.v, self.q]
    }

    pub fn is_finite(self) -> bool {
        self.u.is_finite() && self.v.is_finite() && self.q.is_finite()
    }

    /// Euclidean norm of the coordinate triple.
    pub fn coord_norm(self) -> f64 {
        (self.u * self.u + self.v * self.v + self.q * self.q).sqrt()
    }
}

impl Add for Vec3Q {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.u + o.u, self.v + o.v, self.q + o.q)
    }
}

impl Sub for Vec3Q {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.u - o.u, self.v - o.v, self.q - o.q)
    }
}

impl Mul<Vec3Q> for f64 {
    type Output = Vec3Q;
    fn mul(self, r: Vec3Q) -> Vec3Q {
        Vec3Q::new(self * r.u, self * r.v, self * r.q)
    }
}

impl Neg for Vec3Q {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.u, -self.v, -self.q)
    }
}

/// Q(u·i + v·Qi + q·Q²i) = q·i + u·Qi + v·Q²i.
pub fn apply_q(r: Vec3Q) -> Vec3Q {
    Vec3Q::new(r.q, r.u, r.v)
}

/// Index of Q(e_a) in the basis: 0 → 1 → 2 → 0.
const fn sigma(a: usize) -> usize {
    (a + 1) % 3
}

fn circulant(diag: f64, off: f64) -> Mat3 {
    [[diag, off, off], [off, diag, off], [off, off, diag]]
}

// Symmetric matrices only. The off-diagonal pairs are summed as
// r_a w_b + r_b w_a so that swapping r and w gives the same bits.
fn bilinear(m: &Mat3, r: Vec3Q, w: Vec3Q) -> f64 {
    let (r, w) = (r.to_array(), w.to_array());
    let mut s = 0.0;
    for a in 0..3 {
        s += m[a][a] * (r[a] * w[a]);
        for b in a + 1..3 {
            s += m[a][b] * (r[a] * w[b] + r[b] * w[a]);
        }
    }
    s
}

/// A Q-basis at angle φ = ∠(i, Qi) with the matrices of g and f on it.
#[derive(Debug, Clone, PartialEq)]
pub struct QFrame {
    phi: f64,
    cos_phi: f64,
    gram_g: Mat3,
    mat_f: Mat3,
}

impl QFrame {
    /// Builds the frame for φ ∈ (0, 2π/3). At φ = 2π/3 the Gram matrix is
    /// singular and the three vectors no longer span the tangent space.
    pub fn new(phi: f64) -> Result<Self> {
        if !(phi > 0.0 && phi < PHI_MAX) {
            return Err(Error::OutOfRange {
                phi,
                domain: "(0, 2π/3)",
            });
        }
        // FRAC_PI_2 stands for π/2 itself, where the cosine vanishes exactly.
        let cos_phi = if phi == FRAC_PI_2 { 0.0 } else { phi.cos() };
        let gram_g = circulant(1.0, cos_phi);
        let mut mat_f = [[0.0; 3]; 3];
        for (a, row) in mat_f.iter_mut().enumerate() {
            for (b, entry) in row.iter_mut().enumerate() {
                *entry = gram_g[a][sigma(b)] + gram_g[sigma(a)][b];
            }
        }
        Ok(Self {
            phi,
            cos_phi,
            gram_g,
            mat_f,
        })
    }

    /// The orthonormal Q-basis, φ = π/2.
    pub fn orthonormal() -> Self {
        Self::new(FRAC_PI_2).expect("π/2 is an admissible angle")
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn cos_phi(&self) -> f64 {
        self.cos_phi
    }

    pub fn gram_g(&self) -> &Mat3 {
        &self.gram_g
    }

    pub fn mat_f(&self) -> &Mat3 {
        &self.mat_f
    }

    pub fn is_orthonormal(&self) -> bool {
        self.cos_phi == 0.0
    }

    pub fn g_inner(&self, r: Vec3Q, w: Vec3Q) -> f64 {
        bilinear(&self.gram_g, r, w)
    }

    /// f(r, w) = g(r, Qw) + g(Qr, w).
    pub fn f_inner(&self, r: Vec3Q, w: Vec3Q) -> f64 {
        self.g_inner(r, apply_q(w)) + self.g_inner(apply_q(r), w)
    }

    /// f(r, w) through the precomputed matrix of f; agrees with
    /// [`QFrame::f_inner`] up to rounding.
    pub fn f_inner_matrix(&self, r: Vec3Q, w: Vec3Q) -> f64 {
        bilinear(&self.mat_f, r, w)
    }

    pub fn classify(&self, r: Vec3Q) -> VectorClass {
        let f_norm = self.f_inner(r, r);
        let scale = self.g_inner(r, r).max(1.0);
        let tag = if f_norm.abs() <= CLASSIFY_TOL * scale {
            CausalType::Isotropic
        } else if f_norm > 0.0 {
            CausalType::SpaceLike
        } else {
            CausalType::TimeLike
        };
        VectorClass { tag, f_norm }
    }

    /// Sorted eigenvalues of the matrix of g.
    pub fn g_eigenvalues(&self) -> [f64; 3] {
        sorted_eigenvalues(&self.gram_g)
    }

    /// Sorted eigenvalues of the matrix of f.
    pub fn f_eigenvalues(&self) -> [f64; 3] {
        sorted_eigenvalues(&self.mat_f)
    }

    /// (positive, negative, zero) eigenvalue counts of f.
    pub fn f_signature(&self) -> (usize, usize, usize) {
        let eig = self.f_eigenvalues();
        let tol = 1e-12 * eig.iter().fold(1.0f64, |m, e| m.max(e.abs()));
        let pos = eig.iter().filter(|&&e| e > tol).count();
        let neg = eig.iter().filter(|&&e| e < -tol).count();
        (pos, neg, 3 - pos - neg)
    }
}

fn sorted_eigenvalues(m: &Mat3) -> [f64; 3] {
    let m = Matrix3::from_fn(|r, c| m[r][c]);
    let eig = SymmetricEigen::new(m).eigenvalues;
    let mut out = [eig[0], eig[1], eig[2]];
    out.sort_by(f64::total_cmp);
    out
}

/// Sign of f(r, r): positive is space-like, negative time-like.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CausalType {
    SpaceLike,
    Isotropic,
    TimeLike,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VectorClass {
    pub tag: CausalType,
    pub f_norm: f64,
}

/// uv + vq + qu: half of f(r, r) in the orthonormal Q-basis.
pub fn isotropy_residual_orthonormal(r: Vec3Q) -> f64 {
    r.u * r.v + r.v * r.q + r.q * r.u
}

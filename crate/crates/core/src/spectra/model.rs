use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::ParamPoint;

/// Pauli decomposition `H = d_R·σ + i d_I·σ + d₀σ₀` at one parameter point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochVectors {
    pub d_r: [f64; 3],
    pub d_i: [f64; 3],
    pub d0: Complex64,
}

impl BlochVectors {
    /// Builds the real and imaginary parts from a complex Bloch vector `d`.
    pub fn from_complex(d: [Complex64; 3], d0: Complex64) -> Self {
        BlochVectors {
            d_r: [d[0].re, d[1].re, d[2].re],
            d_i: [d[0].im, d[1].im, d[2].im],
            d0,
        }
    }

    /// `|d_R|² - |d_I|² + 2i d_R·d_I`.
    pub fn discriminant(&self) -> Complex64 {
        let dot = |u: &[f64; 3], v: &[f64; 3]| u[0] * v[0] + u[1] * v[1] + u[2] * v[2];
        Complex64::new(
            dot(&self.d_r, &self.d_r) - dot(&self.d_i, &self.d_i),
            2.0 * dot(&self.d_r, &self.d_i),
        )
    }
}

/// A two-band model over a real two-dimensional parameter plane.
///
/// Evaluators must be pure and continuous on the queried region.
pub trait TwoBandModel: Send + Sync {
    fn bloch(&self, p: ParamPoint) -> BlochVectors;

    fn discriminant(&self, p: ParamPoint) -> Complex64 {
        self.bloch(p).discriminant()
    }

    fn offset(&self, p: ParamPoint) -> Complex64 {
        self.bloch(p).d0
    }
}

/// `H = k_x σ_x + k_y σ_y + i b_x σ_x`, EPs at `(0, ±b_x)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NhDirac {
    pub b_x: f64,
}

impl TwoBandModel for NhDirac {
    fn bloch(&self, p: ParamPoint) -> BlochVectors {
        BlochVectors {
            d_r: [p.x, p.y, 0.0],
            d_i: [self.b_x, 0.0, 0.0],
            d0: Complex64::new(0.0, 0.0),
        }
    }
}

/// Spectrum `±√((z - z₁)(z - z₂))` with `z = x + iy`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SquareRoot {
    pub z1: Complex64,
    pub z2: Complex64,
}

impl TwoBandModel for SquareRoot {
    fn bloch(&self, p: ParamPoint) -> BlochVectors {
        // d_x² + d_z² = uv with d_x = (u+v)/2, d_z = i(u-v)/2
        let z = p.to_complex();
        let (u, v) = (z - self.z1, z - self.z2);
        let dx = (u + v) * 0.5;
        let dz = (u - v) * Complex64::new(0.0, 0.5);
        BlochVectors::from_complex([dx, Complex64::new(0.0, 0.0), dz], Complex64::new(0.0, 0.0))
    }

    fn discriminant(&self, p: ParamPoint) -> Complex64 {
        let z = p.to_complex();
        (z - self.z1) * (z - self.z2)
    }
}

type ComplexField = Box<dyn Fn(ParamPoint) -> Complex64 + Send + Sync>;

/// Effective two-level Hamiltonian `[[λ¹, g], [g, λ²]]` with parameter
/// dependent entries. Eigenvalues `λ_AV ± √(Δ² + g²)`.
pub struct GenericTwoLevel {
    pub lambda1: ComplexField,
    pub lambda2: ComplexField,
    pub coupling: ComplexField,
}

impl GenericTwoLevel {
    pub fn new(
        lambda1: impl Fn(ParamPoint) -> Complex64 + Send + Sync + 'static,
        lambda2: impl Fn(ParamPoint) -> Complex64 + Send + Sync + 'static,
        coupling: impl Fn(ParamPoint) -> Complex64 + Send + Sync + 'static,
    ) -> Self {
        GenericTwoLevel {
            lambda1: Box::new(lambda1),
            lambda2: Box::new(lambda2),
            coupling: Box::new(coupling),
        }
    }
}

impl TwoBandModel for GenericTwoLevel {
    fn bloch(&self, p: ParamPoint) -> BlochVectors {
        let (l1, l2, g) = ((self.lambda1)(p), (self.lambda2)(p), (self.coupling)(p));
        let delta = (l1 - l2) * 0.5;
        BlochVectors::from_complex([g, Complex64::new(0.0, 0.0), delta], (l1 + l2) * 0.5)
    }

    fn discriminant(&self, p: ParamPoint) -> Complex64 {
        let (l1, l2, g) = ((self.lambda1)(p), (self.lambda2)(p), (self.coupling)(p));
        let delta = (l1 - l2) * 0.5;
        delta * delta + g * g
    }
}

/// Model file contents: `{"model": "nh_dirac", "b_x": 1.0}` or
/// `{"model": "square_root", "z1": [0,-1], "z2": [0,1]}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum ModelSpec {
    NhDirac { b_x: f64 },
    SquareRoot { z1: [f64; 2], z2: [f64; 2] },
}

impl ModelSpec {
    pub fn build(&self) -> Box<dyn TwoBandModel> {
        match *self {
            ModelSpec::NhDirac { b_x } => Box::new(NhDirac { b_x }),
            ModelSpec::SquareRoot { z1, z2 } => Box::new(SquareRoot {
                z1: Complex64::new(z1[0], z1[1]),
                z2: Complex64::new(z2[0], z2[1]),
            }),
        }
    }

    pub fn is_finite(&self) -> bool {
        match *self {
            ModelSpec::NhDirac { b_x } => b_x.is_finite(),
            ModelSpec::SquareRoot { z1, z2 } => z1.iter().chain(&z2).all(|v| v.is_finite()),
        }
    }
}

/// `d₀ ± √D` with the principal square root.
pub fn eigenvalues(model: &dyn TwoBandModel, p: ParamPoint) -> (Complex64, Complex64) {
    let b = model.bloch(p);
    let root = model.discriminant(p).sqrt();
    (b.d0 + root, b.d0 - root)
}

pub fn discriminant(model: &dyn TwoBandModel, p: ParamPoint) -> Complex64 {
    model.discriminant(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn dirac_eigenvalues() {
        let m = NhDirac { b_x: 1.0 };
        let (ep, em) = eigenvalues(&m, ParamPoint::new(0.0, 0.0));
        assert!(close(ep, c(0.0, 1.0), 1e-15) && close(em, c(0.0, -1.0), 1e-15));
        let (ep, em) = eigenvalues(&m, ParamPoint::new(0.0, 1.0));
        assert_eq!((ep, em), (c(0.0, 0.0), c(0.0, 0.0)));
    }

    #[test]
    fn square_root_eigenvalues() {
        let m = SquareRoot {
            z1: c(0.0, -1.0),
            z2: c(0.0, 1.0),
        };
        let (ep, em) = eigenvalues(&m, ParamPoint::new(0.0, 0.0));
        assert!(close(ep, c(1.0, 0.0), 1e-15) && close(em, c(-1.0, 0.0), 1e-15));
    }

    #[test]
    fn discriminant_examples() {
        let m = NhDirac { b_x: 1.0 };
        assert_eq!(discriminant(&m, ParamPoint::new(1.0, 0.0)), c(0.0, 2.0));
        assert_eq!(discriminant(&m, ParamPoint::new(0.0, 2.0)), c(3.0, 0.0));
        let s = SquareRoot {
            z1: c(0.0, -1.0),
            z2: c(0.0, 1.0),
        };
        assert!(close(discriminant(&s, ParamPoint::new(0.0, 2.0)), c(-3.0, 0.0), 1e-15));
    }

    #[test]
    fn dirac_closed_form_agrees() {
        for &b in &[0.3, 1.0, 2.5] {
            let m = NhDirac { b_x: b };
            for i in -10..=10 {
                for j in -10..=10 {
                    let (kx, ky) = (0.37 * i as f64, 0.21 * j as f64);
                    let d = m.discriminant(ParamPoint::new(kx, ky));
                    let want = c(kx * kx + ky * ky - b * b, 2.0 * kx * b);
                    assert!(close(d, want, 1e-14 * (1.0 + want.norm())));
                }
            }
        }
    }

    #[test]
    fn square_root_bloch_vectors_match_product() {
        let s = SquareRoot {
            z1: c(0.3, -1.2),
            z2: c(-0.7, 0.4),
        };
        for i in 0..20 {
            let p = ParamPoint::new(-2.0 + 0.2 * i as f64, 1.3 - 0.15 * i as f64);
            let via_d = s.bloch(p).discriminant();
            assert!(close(via_d, s.discriminant(p), 1e-12));
        }
    }

    #[test]
    fn generic_two_level() {
        // λ¹ = z, λ² = -z, g = 1: D = z² + 1, EPs at ±i
        let m = GenericTwoLevel::new(
            |p: ParamPoint| p.to_complex(),
            |p: ParamPoint| -p.to_complex(),
            |_| c(1.0, 0.0),
        );
        let p = ParamPoint::new(0.4, -0.3);
        let z = p.to_complex();
        assert!(close(m.discriminant(p), z * z + 1.0, 1e-14));
        assert!(close(m.bloch(p).discriminant(), z * z + 1.0, 1e-14));
        assert_eq!(m.discriminant(ParamPoint::new(0.0, 1.0)), c(0.0, 0.0));
    }

    #[test]
    fn model_spec_json() {
        let m: ModelSpec = serde_json::from_str(r#"{"model": "nh_dirac", "b_x": 1.0}"#).unwrap();
        assert_eq!(m, ModelSpec::NhDirac { b_x: 1.0 });
        let s: ModelSpec =
            serde_json::from_str(r#"{"model": "square_root", "z1": [0,-1], "z2": [0,1]}"#)
                .unwrap();
        assert_eq!(
            s,
            ModelSpec::SquareRoot {
                z1: [0.0, -1.0],
                z2: [0.0, 1.0]
            }
        );
        assert!(serde_json::from_str::<ModelSpec>(r#"{"model": "bem"}"#).is_err());
    }
}

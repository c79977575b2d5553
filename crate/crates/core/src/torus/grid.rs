//! Pointwise oracle for tests: values on a 32×32 grid and the periodic
//! spectral differentiation matrix, independent of the mode arithmetic.

use std::f64::consts::PI;

use super::field::TrigVectorField;

pub const N: usize = 32;

pub fn point(p: usize) -> [f64; 2] {
    let h = 2.0 * PI / N as f64;
    [(p / N) as f64 * h, (p % N) as f64 * h]
}

pub fn sample(f: impl Fn([f64; 2]) -> f64) -> Vec<f64> {
    (0..N * N).map(|p| f(point(p))).collect()
}

pub fn sample_field(x: &TrigVectorField) -> [Vec<f64>; 2] {
    [sample(|p| x.comp[0].eval(p)), sample(|p| x.comp[1].eval(p))]
}

pub fn assert_grid_eq(a: &[f64], b: &[f64], tol: f64) {
    assert_eq!(a.len(), b.len());
    let scale = a.iter().chain(b).fold(1.0_f64, |m, v| m.max(v.abs()));
    for (p, (u, v)) in a.iter().zip(b).enumerate() {
        assert!((u - v).abs() <= tol * scale, "grid point {p}: {u} vs {v}");
    }
}

/// Fourier differentiation on `N` equispaced points, exact for modes with
/// `|k| < N/2`.
pub struct GridDerivative {
    d: Vec<f64>,
}

impl GridDerivative {
    pub fn new() -> Self {
        let h = 2.0 * PI / N as f64;
        let mut d = vec![0.0; N * N];
        for j in 0..N {
            for l in 0..N {
                if j != l {
                    let diff = j as f64 - l as f64;
                    let sign = if (j + N - l).is_multiple_of(2) { 1.0 } else { -1.0 };
                    d[j * N + l] = 0.5 * sign / (0.5 * diff * h).tan();
                }
            }
        }
        Self { d }
    }

    pub fn derivative(&self, values: &[f64], axis: usize) -> Vec<f64> {
        let mut out = vec![0.0; N * N];
        for i in 0..N {
            for j in 0..N {
                let mut acc = 0.0;
                for l in 0..N {
                    let v = if axis == 0 {
                        values[l * N + j]
                    } else {
                        values[i * N + l]
                    };
                    let row = if axis == 0 { i } else { j };
                    acc += self.d[row * N + l] * v;
                }
                out[i * N + j] = acc;
            }
        }
        out
    }
}

use std::collections::BTreeMap;
use std::f64::consts::PI;

use crate::element::LinearElement;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Parity {
    Cos,
    Sin,
}

impl Parity {
    pub fn as_str(self) -> &'static str {
        match self {
            Parity::Cos => "cos",
            Parity::Sin => "sin",
        }
    }
}

impl std::str::FromStr for Parity {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "cos" => Ok(Parity::Cos),
            "sin" => Ok(Parity::Sin),
            other => Err(format!("unknown parity `{other}`")),
        }
    }
}

/// A canonical Fourier mode `cos(k·x)` or `sin(k·x)`: the first nonzero
/// component of `k` is positive, and `sin` never appears with `k = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mode {
    pub k: [i64; 2],
    pub parity: Parity,
}

impl Mode {
    pub const CONSTANT: Mode = Mode {
        k: [0, 0],
        parity: Parity::Cos,
    };

    /// Canonical form of `coeff · parity(k·x)`, or `None` for `sin(0)`.
    pub fn canonical(k: [i64; 2], parity: Parity, coeff: f64) -> Option<(Mode, f64)> {
        let positive = k[0] > 0 || (k[0] == 0 && k[1] > 0);
        if k == [0, 0] {
            return match parity {
                Parity::Cos => Some((Mode::CONSTANT, coeff)),
                Parity::Sin => None,
            };
        }
        if positive {
            Some((Mode { k, parity }, coeff))
        } else {
            let sign = match parity {
                Parity::Cos => 1.0,
                Parity::Sin => -1.0,
            };
            Some((
                Mode {
                    k: [-k[0], -k[1]],
                    parity,
                },
                sign * coeff,
            ))
        }
    }

    pub fn is_constant(&self) -> bool {
        self.k == [0, 0]
    }

    /// `|k|∞`
    pub fn band(&self) -> i64 {
        self.k[0].abs().max(self.k[1].abs())
    }

    /// `∫ mode² dx` over `[0, 2π)²`.
    pub fn norm_sq(&self) -> f64 {
        if self.is_constant() {
            TorusMetric::CONSTANT_NORM_SQ
        } else {
            TorusMetric::MODE_NORM_SQ
        }
    }

    pub fn eval(&self, x: [f64; 2]) -> f64 {
        let phase = self.k[0] as f64 * x[0] + self.k[1] as f64 * x[1];
        match self.parity {
            Parity::Cos => phase.cos(),
            Parity::Sin => phase.sin(),
        }
    }

    /// All canonical modes with `|k|∞ <= band`, in canonical order.
    pub fn all_within(band: i64) -> Vec<Mode> {
        let mut out = Vec::new();
        for k1 in -band..=band {
            for k2 in -band..=band {
                for parity in [Parity::Cos, Parity::Sin] {
                    if let Some((m, _)) = Mode::canonical([k1, k2], parity, 1.0) {
                        if m.k == [k1, k2] {
                            out.push(m);
                        }
                    }
                }
            }
        }
        out.sort();
        out
    }
}

/// L² normalization on `[0, 2π)²` with the volume form `dx1 dx2`.
pub struct TorusMetric;

impl TorusMetric {
    pub const VOLUME: f64 = 4.0 * PI * PI;
    /// `|1|²`
    pub const CONSTANT_NORM_SQ: f64 = 4.0 * PI * PI;
    /// `|cos(k·x)|² = |sin(k·x)|²` for `k ≠ 0`
    pub const MODE_NORM_SQ: f64 = 2.0 * PI * PI;
}

/// A finitely supported real trigonometric polynomial on the 2-torus.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TrigFunction {
    modes: BTreeMap<Mode, f64>,
}

impl TrigFunction {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: f64) -> Self {
        Self::term([0, 0], Parity::Cos, c)
    }

    pub fn cos(k1: i64, k2: i64) -> Self {
        Self::term([k1, k2], Parity::Cos, 1.0)
    }

    pub fn sin(k1: i64, k2: i64) -> Self {
        Self::term([k1, k2], Parity::Sin, 1.0)
    }

    pub fn term(k: [i64; 2], parity: Parity, coeff: f64) -> Self {
        let mut f = Self::zero();
        f.add_term(k, parity, coeff);
        f
    }

    pub fn from_terms(terms: impl IntoIterator<Item = ([i64; 2], Parity, f64)>) -> Self {
        let mut f = Self::zero();
        for (k, p, c) in terms {
            f.add_term(k, p, c);
        }
        f
    }

    /// Adds `coeff · parity(k·x)`, canonicalizing `k`.
    pub fn add_term(&mut self, k: [i64; 2], parity: Parity, coeff: f64) {
        if coeff == 0.0 {
            return;
        }
        if let Some((mode, c)) = Mode::canonical(k, parity, coeff) {
            self.add_mode(mode, c);
        }
    }

    fn add_mode(&mut self, mode: Mode, coeff: f64) {
        let entry = self.modes.entry(mode).or_insert(0.0);
        *entry += coeff;
        if *entry == 0.0 {
            self.modes.remove(&mode);
        }
    }

    pub fn coeff(&self, mode: &Mode) -> f64 {
        self.modes.get(mode).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Mode, &f64)> {
        self.modes.iter()
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    /// Largest `|k|∞` in the support.
    pub fn band(&self) -> i64 {
        self.modes.keys().map(Mode::band).max().unwrap_or(0)
    }

    pub fn multiply(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (m1, &a) in &self.modes {
            for (m2, &b) in &other.modes {
                let half = 0.5 * a * b;
                let plus = [m1.k[0] + m2.k[0], m1.k[1] + m2.k[1]];
                let minus = [m1.k[0] - m2.k[0], m1.k[1] - m2.k[1]];
                use Parity::{Cos, Sin};
                match (m1.parity, m2.parity) {
                    (Cos, Cos) => {
                        out.add_term(minus, Cos, half);
                        out.add_term(plus, Cos, half);
                    }
                    (Sin, Sin) => {
                        out.add_term(minus, Cos, half);
                        out.add_term(plus, Cos, -half);
                    }
                    (Sin, Cos) => {
                        out.add_term(plus, Sin, half);
                        out.add_term(minus, Sin, half);
                    }
                    (Cos, Sin) => {
                        out.add_term(plus, Sin, half);
                        out.add_term(minus, Sin, -half);
                    }
                }
            }
        }
        out
    }

    /// `∂f/∂x_axis`
    pub fn derivative(&self, axis: usize) -> Self {
        let mut out = Self::zero();
        for (m, &c) in &self.modes {
            let kj = m.k[axis] as f64;
            if kj == 0.0 {
                continue;
            }
            match m.parity {
                Parity::Cos => out.add_mode(
                    Mode {
                        k: m.k,
                        parity: Parity::Sin,
                    },
                    -kj * c,
                ),
                Parity::Sin => out.add_mode(
                    Mode {
                        k: m.k,
                        parity: Parity::Cos,
                    },
                    kj * c,
                ),
            }
        }
        out
    }

    pub fn eval(&self, x: [f64; 2]) -> f64 {
        self.modes.iter().map(|(m, c)| c * m.eval(x)).sum()
    }

    /// `∫ f g dx1 dx2`
    pub fn inner(&self, other: &Self) -> f64 {
        let (small, large) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        small
            .modes
            .iter()
            .filter_map(|(m, a)| large.modes.get(m).map(|b| a * b * m.norm_sq()))
            .sum()
    }

    pub fn norm_sq(&self) -> f64 {
        self.inner(self)
    }

    /// Drops every mode with `|k|∞ > band`.
    pub fn truncate(&self, band: i64) -> Self {
        Self {
            modes: self
                .modes
                .iter()
                .filter(|(m, _)| m.band() <= band)
                .map(|(m, c)| (*m, *c))
                .collect(),
        }
    }
}

impl LinearElement for TrigFunction {
    fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.modes {
            out.add_mode(*m, *c);
        }
        out
    }

    fn scale(&self, factor: f64) -> Self {
        if factor == 0.0 {
            return Self::zero();
        }
        Self {
            modes: self.modes.iter().map(|(m, c)| (*m, c * factor)).collect(),
        }
    }

    fn max_abs(&self) -> f64 {
        self.modes.values().fold(0.0, |a, c| a.max(c.abs()))
    }
}

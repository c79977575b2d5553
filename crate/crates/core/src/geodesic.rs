//! Euler-Arnold equations in the right logarithmic derivative and fixed-step
//! integrators for them.

use nalgebra::{DMatrix, DVector};

use crate::algebra::{AlgebraElement, MetricAlgebra};
use crate::backend::{MetricAlgebraBackend, SdElem, SemidirectBackend};
use crate::element::{LinearElement, Pair};
use crate::error::{Error, Result};

/// `u_t = −ad(u)ᵀu`
pub fn rhs_generic<B: MetricAlgebraBackend>(b: &B, u: &B::Elem) -> B::Elem {
    b.ad_transpose(u, u).scale(-1.0)
}

/// `u_t = −ad(u)ᵀu + h(α,α)`, `α_t = −ad(α)ᵀα − b(u)ᵀα`
pub fn rhs_semidirect<S: SemidirectBackend>(s: &S, state: &SdElem<S>) -> SdElem<S> {
    let (u, alpha) = (&state.g, &state.h);
    let du = s.g().ad_transpose(u, u).scale(-1.0).add(&s.h_map(alpha, alpha));
    let dalpha = s
        .h()
        .ad_transpose(alpha, alpha)
        .add(&s.act_transpose(u, alpha))
        .scale(-1.0);
    Pair::new(du, dalpha)
}

/// Geodesics of the magnetic extension for the state `(u, A(v))`:
/// `u_t = −ad(u)ᵀu + ad(v)ᵀv`, `v_t = ad(u)v`.
pub fn rhs_magnetic<B: MetricAlgebraBackend>(g: &B, state: &Pair<B::Elem, B::Elem>) -> Pair<B::Elem, B::Elem> {
    let (u, v) = (&state.g, &state.h);
    let du = g.ad_transpose(v, v).sub(&g.ad_transpose(u, u));
    Pair::new(du, g.bracket(u, v))
}

/// Closed-form geodesic of `G ⋉ G` (conjugation) for an Ad-invariant metric:
/// `u(t) = u0`, `v(t) = exp(t·ad(u0)) v0`.
pub fn exact_conjugation_solution(
    g: &MetricAlgebra,
    u0: &AlgebraElement,
    v0: &AlgebraElement,
    t: f64,
) -> Result<Pair<AlgebraElement, AlgebraElement>> {
    if !g.is_ad_invariant() {
        return Err(Error::NotAdInvariant);
    }
    let flow = (g.ad_matrix(u0) * t).exp();
    Ok(Pair::new(u0.clone(), flow * v0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    Rk4,
    ImplicitMidpoint,
}

impl std::str::FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rk4" => Ok(Scheme::Rk4),
            "implicit_midpoint" | "midpoint" => Ok(Scheme::ImplicitMidpoint),
            other => Err(Error::Config(format!("unknown scheme `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig {
    pub dt: f64,
    pub steps: usize,
    pub scheme: Scheme,
    pub midpoint_tol: f64,
    pub midpoint_max_iter: usize,
}

impl IntegratorConfig {
    pub fn new(dt: f64, steps: usize, scheme: Scheme) -> Self {
        Self {
            dt,
            steps,
            scheme,
            midpoint_tol: 1e-12,
            midpoint_max_iter: 50,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::Config(format!("dt must be positive, got {}", self.dt)));
        }
        if self.steps == 0 {
            return Err(Error::Config("steps must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct Trajectory<S> {
    pub times: Vec<f64>,
    pub states: Vec<S>,
    /// `E(t) = <u,u> + <α,α>`
    pub energy: Vec<f64>,
}

impl<S> Trajectory<S> {
    pub fn last(&self) -> &S {
        self.states.last().expect("trajectory holds the initial state")
    }

    /// `max_t |E(t) − E(0)| / E(0)`
    pub fn max_energy_drift(&self) -> f64 {
        let e0 = self.energy[0];
        let scale = if e0 != 0.0 { e0.abs() } else { 1.0 };
        self.energy.iter().map(|e| (e - e0).abs() / scale).fold(0.0, f64::max)
    }
}

/// Integrates `state_t = rhs(state)` with the backend's metric as energy.
pub fn integrate<B, F>(backend: &B, rhs: F, state0: B::Elem, config: &IntegratorConfig) -> Result<Trajectory<B::Elem>>
where
    B: MetricAlgebraBackend,
    F: Fn(&B::Elem) -> B::Elem,
{
    config.validate()?;
    let dt = config.dt;
    let mut times = Vec::with_capacity(config.steps + 1);
    let mut states = Vec::with_capacity(config.steps + 1);
    let mut energy = Vec::with_capacity(config.steps + 1);
    times.push(0.0);
    energy.push(backend.norm_sq(&state0));
    states.push(state0);

    for step in 1..=config.steps {
        let y = states.last().expect("non-empty");
        let next = match config.scheme {
            Scheme::Rk4 => rk4_step(&rhs, y, dt),
            Scheme::ImplicitMidpoint => midpoint_step(&rhs, y, dt, config, step)?,
        };
        times.push(step as f64 * dt);
        energy.push(backend.norm_sq(&next));
        states.push(next);
    }
    Ok(Trajectory { times, states, energy })
}

fn rk4_step<S: LinearElement, F: Fn(&S) -> S>(rhs: &F, y: &S, dt: f64) -> S {
    let k1 = rhs(y);
    let k2 = rhs(&y.add_scaled(&k1, 0.5 * dt));
    let k3 = rhs(&y.add_scaled(&k2, 0.5 * dt));
    let k4 = rhs(&y.add_scaled(&k3, dt));
    let incr = k1.add(&k2.scale(2.0)).add(&k3.scale(2.0)).add(&k4);
    y.add_scaled(&incr, dt / 6.0)
}

fn midpoint_step<S: LinearElement, F: Fn(&S) -> S>(
    rhs: &F,
    y: &S,
    dt: f64,
    config: &IntegratorConfig,
    step: usize,
) -> Result<S> {
    let mut next = y.add_scaled(&rhs(y), dt);
    let mut update = f64::INFINITY;
    for _ in 0..config.midpoint_max_iter {
        let mid = y.add(&next).scale(0.5);
        let candidate = y.add_scaled(&rhs(&mid), dt);
        update = candidate.sub(&next).max_abs();
        next = candidate;
        if update <= config.midpoint_tol * (1.0 + next.max_abs()) {
            return Ok(next);
        }
    }
    Err(Error::MidpointDivergence { step, residual: update })
}

/// Matrix of `x ∈ so(3)` acting by cross products: `hat(x) v = x × v`.
pub fn so3_hat(x: &AlgebraElement) -> DMatrix<f64> {
    DMatrix::from_row_slice(3, 3, &[0.0, -x[2], x[1], x[2], 0.0, -x[0], -x[1], x[0], 0.0])
}

/// 4×4 homogeneous matrix of `(X, Y) ∈ so(3) ⋉ R³`.
pub fn euclidean_hat(p: &Pair<AlgebraElement, AlgebraElement>) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(4, 4);
    m.view_mut((0, 0), (3, 3)).copy_from(&so3_hat(&p.g));
    m.view_mut((0, 3), (3, 1)).copy_from(&p.h);
    m
}

/// Reconstructs the group curve from its right logarithmic derivative on a
/// matrix group: `g' = U(t) g`, stepped by `g_{n+1} = exp(dt·U_mid) g_n` with
/// `U_mid` the matrix of the midpoint velocity.
pub fn reconstruct_matrix_group<S, H>(states: &[S], dt: f64, g0: DMatrix<f64>, hat: H) -> Vec<DMatrix<f64>>
where
    S: LinearElement,
    H: Fn(&S) -> DMatrix<f64>,
{
    let mut out = Vec::with_capacity(states.len());
    out.push(g0);
    for w in states.windows(2) {
        let mid = w[0].add(&w[1]).scale(0.5);
        let step = (hat(&mid) * dt).exp();
        let next = step * out.last().expect("non-empty");
        out.push(next);
    }
    out
}

/// Flattens a dense state into `u` coordinates followed by `α` coordinates.
pub fn state_coords(state: &Pair<DVector<f64>, DVector<f64>>) -> impl Iterator<Item = f64> + '_ {
    state.g.iter().chain(state.h.iter()).copied()
}

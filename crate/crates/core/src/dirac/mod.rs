//! Radial Dirac-Coulomb channels in block form.
//!
//! For a partial wave `κ` and the potential `V(r) = -ν/r` the channel is
//!
//! ```text
//!     P = V + 2 - γ,   T = d/dr + κ/r,   Q = Tᵀ,   S = γ - V
//! ```
//!
//! so that `H = D_V - (γ - 1)` with `D_V` the radial Dirac operator in units
//! `ħ = c = m = 1`. Physical energies are `E = λ(H) + γ - 1`.
//!
//! The derivative is a one-sided difference with homogeneous truncation at
//! both ends: forward for `κ < 0`, backward for `κ > 0`. The grid is made
//! symmetric by working in coordinates `√w_j u_j` with `w_j` the matching
//! cell widths, so `T` is conjugated by `W^{1/2}` and `Q` is its exact
//! transpose.

mod grid;
mod sweep;

pub use grid::{GridScheme, GridSpec, RadialGrid};
pub use sweep::{convergence_study, hardy_sweep, SweepReport, SweepRow, SweepSettings};

use crate::blockop::{BlockOperator, C1Policy, StateVector, Tolerances};
use crate::error::{Error, Result};
use crate::linalg::BandMatrix;
use crate::scalar::Scalar;
use crate::solver::EigenOptions;

/// Quantum numbers and constants of one channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiracChannelSpec<T> {
    pub kappa: i32,
    /// Coulomb coupling, `V(r) = -ν/r`.
    pub nu: T,
    /// Shift constant; must exceed `max V = 0`.
    pub gamma: T,
}

impl<T: Scalar> DiracChannelSpec<T> {
    pub const DEFAULT_GAMMA: f64 = 0.5;

    pub fn new(kappa: i32, nu: T, gamma: T) -> Result<Self> {
        if kappa == 0 {
            return Err(Error::InvalidChannel("kappa must be nonzero".into()));
        }
        if !(nu > T::zero() && nu.is_finite()) {
            return Err(Error::InvalidChannel(format!("nu must be positive, got {nu}")));
        }
        if !(gamma > T::zero() && gamma.is_finite()) {
            return Err(Error::InvalidChannel(format!("gamma must be positive, got {gamma}")));
        }
        Ok(Self { kappa, nu, gamma })
    }

    pub fn potential(&self, r: T) -> T {
        -self.nu / r
    }

    /// Lowest Sommerfeld energy of the channel, if `ν < |κ|`.
    pub fn ground_energy(&self) -> Option<T> {
        sommerfeld_energy(lowest_principal(self.kappa), self.kappa, self.nu).ok()
    }

    /// Continuum value of `c2`: the lowest gap eigenvalue `E_1 - γ + 1` of `H`.
    pub fn c2_analytic(&self) -> Option<T> {
        self.ground_energy().map(|e| e - self.gamma + T::one())
    }

    pub fn to_physical_energy(&self, eigenvalue: T) -> T {
        eigenvalue + self.gamma - T::one()
    }
}

/// Smallest principal quantum number allowed for `κ`.
pub fn lowest_principal(kappa: i32) -> u32 {
    if kappa < 0 {
        kappa.unsigned_abs()
    } else {
        kappa.unsigned_abs() + 1
    }
}

/// Dirac-Coulomb bound-state energy in units of `mc²`:
/// `E = [1 + ν² / (n - |κ| + √(κ² - ν²))²]^{-1/2}`.
pub fn sommerfeld_energy<T: Scalar>(n: u32, kappa: i32, nu: T) -> Result<T> {
    let k = kappa.unsigned_abs();
    if kappa == 0 || n < lowest_principal(kappa) {
        return Err(Error::InvalidQuantumNumbers(format!(
            "n = {n} not allowed for kappa = {kappa}"
        )));
    }
    let kf = T::from_u32(k).unwrap();
    if !(nu >= T::zero() && nu < kf) {
        return Err(Error::InvalidQuantumNumbers(format!(
            "need 0 <= nu < |kappa|, got nu = {nu}, kappa = {kappa}"
        )));
    }
    let radial = T::from_u32(n - k).unwrap();
    let denom = radial + (kf * kf - nu * nu).sqrt();
    Ok((T::one() + nu * nu / (denom * denom)).sqrt().recip())
}

/// Builds the block operator of a Coulomb channel; `c1 = γ`.
pub fn build_channel<T: Scalar>(spec: &DiracChannelSpec<T>, grid: &RadialGrid<T>) -> Result<BlockOperator<T>> {
    let v: Vec<T> = grid.nodes().iter().map(|&r| spec.potential(r)).collect();
    assemble_channel(spec.kappa, spec.gamma, &v, grid, C1Policy::Asserted(spec.gamma))
}

/// Builds a channel from a potential sampled at the grid nodes. `c1` is
/// computed as `min_j (γ - V_j)`; the assembly fails unless `γ > max V`.
pub fn build_channel_with_potential<T: Scalar>(
    kappa: i32,
    gamma: T,
    potential: &[T],
    grid: &RadialGrid<T>,
) -> Result<BlockOperator<T>> {
    if kappa == 0 {
        return Err(Error::InvalidChannel("kappa must be nonzero".into()));
    }
    if potential.len() != grid.n() {
        return Err(Error::DimensionMismatch {
            what: "sampled potential",
            expected: grid.n(),
            found: potential.len(),
        });
    }
    assemble_channel(kappa, gamma, potential, grid, C1Policy::Compute)
}

fn assemble_channel<T: Scalar>(
    kappa: i32,
    gamma: T,
    potential: &[T],
    grid: &RadialGrid<T>,
    c1: C1Policy<T>,
) -> Result<BlockOperator<T>> {
    let n = grid.n();
    let r = grid.nodes();
    let two = T::lit(2.0);
    let kap = T::from_i32(kappa).unwrap();

    let p: Vec<T> = potential.iter().map(|&v| v + two - gamma).collect();
    let s: Vec<T> = potential.iter().map(|&v| gamma - v).collect();
    // The kernel r^{-κ} of d/dr + κ/r must be cut off where it is not square
    // integrable: at r_max for κ < 0 (forward difference), at r_min for κ > 0
    // (backward difference).
    let t = if kappa < 0 {
        let h = grid.cell_widths();
        let mut t = BandMatrix::zeros(n, 0, 1);
        for j in 0..n {
            t.set(j, j, -h[j].recip() + kap / r[j]);
            if j + 1 < n {
                t.set(j, j + 1, (h[j] * h[j + 1]).sqrt().recip());
            }
        }
        t
    } else {
        let b = grid.backward_cell_widths();
        let mut t = BandMatrix::zeros(n, 1, 0);
        for j in 0..n {
            t.set(j, j, b[j].recip() + kap / r[j]);
            if j > 0 {
                t.set(j, j - 1, -(b[j] * b[j - 1]).sqrt().recip());
            }
        }
        t
    };
    BlockOperator::assemble(BandMatrix::from_diagonal(&p), t, BandMatrix::from_diagonal(&s), c1)
}

/// Results of the coupling and local-integrability checks.
#[derive(Debug, Clone, PartialEq)]
pub struct AdmissibilityReport<T> {
    /// `max_j r_j |V(r_j)|`.
    pub coupling_sup: T,
    /// `coupling_sup <= 1`.
    pub coupling_ok: bool,
    /// `γ > max_j V(r_j)`.
    pub gamma_above_max_v: bool,
    /// `(a, ∫_a^1 |(γ - V)⁻² V'|² r² dr)` for shrinking `a`; empty for
    /// sampled potentials.
    pub local_l2: Vec<(T, T)>,
    /// Relative change of the last two integrals below `1e-3`.
    pub local_l2_stable: Option<bool>,
}

/// Lower limits used in the local square-integrability study.
pub const LOCAL_L2_LOWER_LIMITS: [f64; 6] = [1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6];

pub fn check_admissibility<T: Scalar>(spec: &DiracChannelSpec<T>, grid: &RadialGrid<T>) -> AdmissibilityReport<T> {
    let v: Vec<T> = grid.nodes().iter().map(|&r| spec.potential(r)).collect();
    let mut report = check_sampled_admissibility(spec.gamma, &v, grid);
    let (nu, gamma) = (spec.nu, spec.gamma);
    // |(γ - V)⁻² V'| = ν / (γ r + ν)²
    let integrand = |r: T| {
        let g = nu / ((gamma * r + nu) * (gamma * r + nu));
        g * g * r * r
    };
    report.local_l2 = LOCAL_L2_LOWER_LIMITS
        .iter()
        .map(|&a| {
            let a = T::lit(a);
            (a, log_simpson(integrand, a, T::one(), 400))
        })
        .collect();
    let m = report.local_l2.len();
    let (prev, last) = (report.local_l2[m - 2].1, report.local_l2[m - 1].1);
    report.local_l2_stable = Some(last.is_finite() && (last - prev).abs() <= T::lit(1e-3) * last.abs());
    report
}

/// Coupling checks for an arbitrary sampled potential.
pub fn check_sampled_admissibility<T: Scalar>(
    gamma: T,
    potential: &[T],
    grid: &RadialGrid<T>,
) -> AdmissibilityReport<T> {
    let coupling_sup = grid
        .nodes()
        .iter()
        .zip(potential)
        .map(|(&r, &v)| r * v.abs())
        .fold(T::zero(), T::max);
    let max_v = potential.iter().copied().fold(T::neg_infinity(), T::max);
    AdmissibilityReport {
        coupling_sup,
        coupling_ok: coupling_sup <= T::one(),
        gamma_above_max_v: gamma > max_v,
        local_l2: Vec::new(),
        local_l2_stable: None,
    }
}

/// Composite Simpson rule in `t = ln r` with `per_decade` panels per decade.
fn log_simpson<T: Scalar>(f: impl Fn(T) -> T, a: T, b: T, per_decade: usize) -> T {
    let (ta, tb) = (a.ln(), b.ln());
    let decades = ((tb - ta) / T::lit(std::f64::consts::LN_10)).ceil();
    let mut m = per_decade * decades.to_usize().unwrap_or(1).max(1);
    m += m % 2;
    let h = (tb - ta) / T::from_count(m);
    let g = |t: T| {
        let r = t.exp();
        f(r) * r
    };
    let mut acc = g(ta) + g(tb);
    for i in 1..m {
        let w = if i % 2 == 1 { T::lit(4.0) } else { T::lit(2.0) };
        acc = acc + w * g(ta + h * T::from_count(i));
    }
    acc * h / T::lit(3.0)
}

/// Settings of the gap-spectrum computation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumSettings<T> {
    /// Residual tolerance `||H x - λ x|| <= tol (1 + |λ|)`.
    pub eigen_tol: T,
    pub tolerances: Tolerances<T>,
    pub eigen: EigenOptions,
}

impl<T: Scalar> Default for SpectrumSettings<T> {
    fn default() -> Self {
        Self {
            eigen_tol: T::lit(1e-8),
            tolerances: Tolerances::default(),
            eigen: EigenOptions::default(),
        }
    }
}

/// Fraction of the squared norm carried by grid-scale oscillation:
/// `Σ (x_{j+1} - x_j)² / (4 Σ x_j²)` over both components. Smooth modes give
/// values near 0, sign-alternating modes values near 1.
pub fn high_frequency_fraction<T: Scalar>(w: &StateVector<T>) -> T {
    let diff = |x: &[T]| -> T { x.windows(2).map(|p| (p[1] - p[0]) * (p[1] - p[0])).sum() };
    let total = w.dot(w);
    if total == T::zero() {
        return T::zero();
    }
    (diff(&w.u) + diff(&w.v)) / (T::lit(4.0) * total)
}

/// Modes above this high-frequency fraction are treated as discretization
/// artifacts.
pub const SPURIOUS_FRACTION: f64 = 0.5;

/// One gap eigenpair of a channel.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundState<T> {
    /// Physical Dirac energy `λ + γ - 1`.
    pub energy: T,
    pub eigenvalue: T,
    pub high_frequency_fraction: T,
    pub state: StateVector<T>,
}

/// Smallest `k` gap eigenpairs of a channel above the Schur floor.
///
/// The shift is placed just below `c2` (found by bisection), so the inner
/// elimination stays positive definite and the nearest eigenvalues are the
/// bound states. Spurious grid-scale modes are discarded. The residual
/// tolerance is raised to `64 ε ||H||_∞` when that floor exceeds
/// `settings.eigen_tol`, since no smaller residual is attainable in
/// floating point.
pub fn channel_states<T: Scalar>(
    spec: &DiracChannelSpec<T>,
    grid: &RadialGrid<T>,
    k: usize,
    settings: &SpectrumSettings<T>,
) -> Result<Vec<BoundState<T>>> {
    let op = build_channel(spec, grid)?;
    let c2 = op.find_c2(settings.tolerances.bisection)?;
    let sigma = (c2 - T::lit(1e-3) * (T::one() + c2.abs())).max(T::zero());
    let h_norm = op.p().inf_norm().max(op.s().inf_norm()) + op.t().inf_norm().max(op.q().inf_norm());
    let tol = settings.eigen_tol.max(T::lit(64.0) * T::epsilon() * h_norm);
    let want = (k + 2).min(2 * op.n());
    let pairs = op.gap_eigenvalues(sigma, want, tol, &settings.eigen)?;
    let states: Vec<BoundState<T>> = pairs
        .into_iter()
        .filter(|(lam, _)| *lam >= sigma)
        .map(|(lam, state)| BoundState {
            energy: spec.to_physical_energy(lam),
            eigenvalue: lam,
            high_frequency_fraction: high_frequency_fraction(&state),
            state,
        })
        .filter(|b| b.high_frequency_fraction <= T::lit(SPURIOUS_FRACTION))
        .take(k)
        .collect();
    if states.len() < k {
        return Err(Error::InsufficientEigenpairs {
            found: states.len(),
            requested: k,
        });
    }
    Ok(states)
}

/// Physical energies of the `k` lowest bound states of a channel.
pub fn channel_spectrum<T: Scalar>(
    spec: &DiracChannelSpec<T>,
    grid: &RadialGrid<T>,
    k: usize,
    tol: T,
) -> Result<Vec<T>> {
    let settings = SpectrumSettings {
        eigen_tol: tol,
        ..SpectrumSettings::default()
    };
    Ok(channel_states(spec, grid, k, &settings)?
        .into_iter()
        .map(|b| b.energy)
        .collect())
}

/// Numerical `c2` of a channel against its continuum value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct C2Consistency<T> {
    pub c2_numeric: T,
    pub c2_analytic: T,
    pub diff: T,
    /// `(N+1)`-th eigenvalue of the dense `H`, when `2N` fits the dense cap.
    pub inertia_oracle: Option<T>,
}

pub fn c2_consistency<T: Scalar>(
    spec: &DiracChannelSpec<T>,
    grid: &RadialGrid<T>,
    tolerances: &Tolerances<T>,
) -> Result<C2Consistency<T>> {
    if spec.nu > T::one() {
        return Err(Error::HypothesisFailed(format!(
            "coupling bound sup r|V(r)| <= 1 violated: nu = {}",
            spec.nu
        )));
    }
    let c2_analytic = spec.c2_analytic().ok_or_else(|| {
        Error::InvalidQuantumNumbers(format!(
            "no bound state for kappa = {}, nu = {}",
            spec.kappa, spec.nu
        ))
    })?;
    let op = build_channel(spec, grid)?;
    let c2_numeric = op.find_c2(tolerances.bisection)?;
    let inertia_oracle = if 2 * op.n() <= tolerances.dense_cap {
        Some(op.inertia_c2_oracle(tolerances.dense_cap)?)
    } else {
        None
    };
    Ok(C2Consistency {
        c2_numeric,
        c2_analytic,
        diff: (c2_numeric - c2_analytic).abs(),
        inertia_oracle,
    })
}

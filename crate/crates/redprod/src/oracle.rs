//! Independent numerical verifiers for the exact engine.
//!
//! Deliberately built from different primitives than the engine — floating
//! contour quadrature and direct sign-tuple enumeration instead of exact
//! symbolic residues — so agreement between the two is evidence rather than
//! tautology.

use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::algebra::Rat;
use crate::error::{Error, GenericityViolation, NonGenericReport, Result};

/// Parameters for the contour quadrature of the rank-1 residue primitive.
#[derive(Debug, Clone)]
pub struct QuadratureSpec {
    /// Contour shift ε > 0; the integrand is e^{iλx}/(x−iε)^k.
    pub epsilon: f64,
    /// Truncation of the real line at ±half_width.
    pub half_width: f64,
    /// Total node budget for the composite panels.
    pub samples: usize,
}

impl QuadratureSpec {
    pub fn new(epsilon: f64, half_width: f64, samples: usize) -> Result<Self> {
        if epsilon <= 0.0 {
            return Err(Error::Validation("epsilon must be positive".into()));
        }
        if samples < 10_000 {
            return Err(Error::Validation("samples must be at least 10^4".into()));
        }
        if half_width * epsilon < 10.0 {
            return Err(Error::Validation(
                "half_width·epsilon must be at least 10 for tail control".into(),
            ));
        }
        Ok(Self {
            epsilon,
            half_width,
            samples,
        })
    }
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            epsilon: 5e-3,
            half_width: 2_000.0,
            samples: 60_000,
        }
    }
}

// 12-point Gauss–Legendre nodes and weights on [-1, 1].
const GL_NODES: [f64; 12] = [
    -0.981560634246719,
    -0.904117256370475,
    -0.769902674194305,
    -0.587317954286617,
    -0.367831498998180,
    -0.125233408511469,
    0.125233408511469,
    0.367831498998180,
    0.587317954286617,
    0.769902674194305,
    0.904117256370475,
    0.981560634246719,
];
const GL_WEIGHTS: [f64; 12] = [
    0.047175336386512,
    0.106939325995318,
    0.160078328543346,
    0.203167426723066,
    0.233492536538355,
    0.249147045813403,
    0.249147045813403,
    0.233492536538355,
    0.203167426723066,
    0.160078328543346,
    0.106939325995318,
    0.047175336386512,
];

/// m-th derivative of (x − iε)^{-k} at a point.
fn pole_power_derivative(x: f64, eps: f64, k: u32, m: u32) -> Complex64 {
    let base = Complex64::new(x, -eps);
    let mut coeff = 1.0;
    for j in 0..m {
        coeff *= -((k + j) as f64);
    }
    coeff * base.powi(-((k + m) as i32))
}

/// ∫_{a}^{∞} e^{iλx}(x−iε)^{-k} dx by repeated integration by parts
/// (asymptotic tail; a ≫ 1 makes the truncated remainder negligible).
fn tail_upper(a: f64, lambda: f64, eps: f64, k: u32, orders: u32) -> Complex64 {
    let il = Complex64::new(0.0, lambda);
    let phase = Complex64::from_polar(1.0, lambda * a);
    let mut acc = Complex64::new(0.0, 0.0);
    let mut prefactor = -phase / il;
    for m in 0..orders {
        acc += prefactor * pole_power_derivative(a, eps, k, m);
        prefactor = -prefactor / il;
    }
    acc
}

/// ∫_{-∞}^{-a} e^{iλx}(x−iε)^{-k} dx, same scheme from the other end.
fn tail_lower(a: f64, lambda: f64, eps: f64, k: u32, orders: u32) -> Complex64 {
    let il = Complex64::new(0.0, lambda);
    let phase = Complex64::from_polar(1.0, -lambda * a);
    let mut acc = Complex64::new(0.0, 0.0);
    let mut prefactor = phase / il;
    for m in 0..orders {
        acc += prefactor * pole_power_derivative(-a, eps, k, m);
        prefactor = -prefactor / il;
    }
    acc
}

/// Composite Gauss–Legendre over [lo, hi] with dyadic panel refinement
/// around each listed pole abscissa, so ε-scale features just below the
/// contour are fully resolved. Panel widths elsewhere stay below a quarter
/// oscillation of the given frequency.
pub(crate) fn oscillatory_panel_integral(
    freq: f64,
    poles: &[f64],
    eps: f64,
    lo: f64,
    hi: f64,
    min_samples: usize,
    f: &dyn Fn(f64) -> Complex64,
) -> Complex64 {
    let mut cuts: Vec<f64> = vec![lo, hi];
    for &p in poles {
        let mut scale = eps / 8.0;
        cuts.push(p - scale);
        cuts.push(p + scale);
        while scale < 2.0 {
            scale *= 2.0;
            cuts.push(p - scale);
            cuts.push(p + scale);
        }
    }
    cuts.retain(|x| *x >= lo && *x <= hi);
    cuts.sort_by(|a, b| a.total_cmp(b));
    cuts.dedup();

    // Uniform width cap from the oscillation and from the sample budget.
    let span = hi - lo;
    let osc_cap = std::f64::consts::PI / (4.0 * freq.abs().max(0.25));
    let budget_cap = span / (min_samples as f64 / GL_NODES.len() as f64).max(1.0);
    let cap = osc_cap.min(budget_cap.max(1e-12));

    let mut acc = Complex64::new(0.0, 0.0);
    for pair in cuts.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        if b - a <= 0.0 {
            continue;
        }
        let sub = ((b - a) / cap).ceil().max(1.0) as usize;
        let w = (b - a) / sub as f64;
        for s in 0..sub {
            let left = a + s as f64 * w;
            let center = left + 0.5 * w;
            let half = 0.5 * w;
            for (node, weight) in GL_NODES.iter().zip(GL_WEIGHTS) {
                acc += weight * f(center + half * node) * half;
            }
        }
    }
    acc
}

/// Symmetric window [−half_width, half_width].
pub(crate) fn oscillatory_line_integral(
    freq: f64,
    poles: &[f64],
    eps: f64,
    half_width: f64,
    min_samples: usize,
    f: &dyn Fn(f64) -> Complex64,
) -> Complex64 {
    oscillatory_panel_integral(freq, poles, eps, -half_width, half_width, min_samples, f)
}

/// ∫_{-1}^{1} x^m (x−iε)^{-k} dx in closed form via the binomial expansion of
/// x^m = ((x−iε) + iε)^m. The contour stays in the lower half plane, away
/// from the principal logarithm's cut.
fn power_pole_integral(m: u32, k: u32, eps: f64) -> Complex64 {
    let ie = Complex64::new(0.0, eps);
    let hi = Complex64::new(1.0, -eps);
    let lo = Complex64::new(-1.0, -eps);
    let mut acc = Complex64::new(0.0, 0.0);
    let mut binom = 1.0f64;
    for j in 0..=m {
        let p = j as i32 - k as i32;
        let primitive = if p == -1 {
            hi.ln() - lo.ln()
        } else {
            (hi.powi(p + 1) - lo.powi(p + 1)) / (p + 1) as f64
        };
        acc += binom * ie.powi((m - j) as i32) * primitive;
        binom *= (m - j) as f64 / (j + 1) as f64;
    }
    acc
}

/// Truncated contour integral ∫_{-HW}^{HW} e^{iλx}(x−iε)^{-k} dx plus
/// integration-by-parts tails. On [−1, 1] the first k+2 Taylor terms of the
/// exponential are integrated against the pole in closed form and only the
/// bounded remainder is quadratured, which sidesteps the catastrophic
/// cancellation of ε^{-k}-sized panel sums.
fn contour_integral(lambda: f64, k: u32, eps: f64, half_width: f64, samples: usize) -> Complex64 {
    let pole = |x: f64| Complex64::new(x, -eps).powi(-(k as i32));
    let taylor_orders = k + 2;
    // e^{iλx} − Σ_{m<k+2} (iλx)^m/m!. For small |λx| the direct subtraction
    // cancels catastrophically (and the pole factor amplifies the noise), so
    // the tail is summed as its own series there.
    let remainder = |x: f64| {
        let z = Complex64::new(0.0, lambda * x);
        if z.norm() <= 1.0 {
            let mut term = Complex64::new(1.0, 0.0);
            for m in 0..taylor_orders {
                term *= z / (m + 1) as f64;
            }
            // term = z^M/M!; sum the convergent tail
            let mut acc = Complex64::new(0.0, 0.0);
            let mut m = taylor_orders;
            loop {
                acc += term;
                term *= z / (m + 1) as f64;
                m += 1;
                if term.norm() < 1e-22 || m > taylor_orders + 50 {
                    break;
                }
            }
            acc
        } else {
            let mut term = Complex64::new(1.0, 0.0);
            let mut acc = Complex64::from_polar(1.0, lambda * x);
            for m in 0..taylor_orders {
                acc -= term;
                term *= z / (m + 1) as f64;
            }
            acc
        }
    };

    // far field |x| ∈ [1, HW]
    let f_far = |x: f64| Complex64::from_polar(1.0, lambda * x) * pole(x);
    let side_budget = (samples.saturating_sub(8_000) / 2).max(5_000);
    let far = oscillatory_panel_integral(lambda, &[], eps, 1.0, half_width, side_budget, &f_far)
        + oscillatory_panel_integral(lambda, &[], eps, -half_width, -1.0, side_budget, &f_far);

    // near field [−1, 1]: regular remainder by quadrature ...
    let f_near = |x: f64| remainder(x) * pole(x);
    let near_reg = oscillatory_line_integral(lambda, &[0.0], eps, 1.0, 4_000, &f_near);

    // ... plus the subtracted Taylor part in closed form
    let mut near_analytic = Complex64::new(0.0, 0.0);
    let mut coeff = Complex64::new(1.0, 0.0);
    for m in 0..taylor_orders {
        near_analytic += coeff * power_pole_integral(m, k, eps);
        coeff *= Complex64::new(0.0, lambda) / (m + 1) as f64;
    }

    far + near_reg
        + near_analytic
        + tail_upper(half_width, lambda, eps, k, 4)
        + tail_lower(half_width, lambda, eps, k, 4)
}

/// Numerical (1/2πi)∫_ℝ e^{iλx}/(x−iε)^k dx with Richardson extrapolation
/// ε → 0. Converges to the engine's rank-1 rule:
/// λ>0 → (iλ)^{k−1}/(k−1)!, λ<0 → 0.
pub fn quadrature_residue(lambda: &Rat, k: u32, spec: &QuadratureSpec) -> Result<Complex64> {
    if lambda.is_zero() {
        return Err(Error::Validation("lambda must be nonzero".into()));
    }
    if k == 0 {
        return Err(Error::Validation("pole order k must be at least 1".into()));
    }
    let lam = lambda.to_f64().unwrap();
    let two_pi_i = Complex64::new(0.0, 2.0 * std::f64::consts::PI);

    let levels: Vec<Complex64> = [1.0, 0.5, 0.25]
        .iter()
        .map(|s| {
            contour_integral(lam, k, spec.epsilon * s, spec.half_width, spec.samples) / two_pi_i
        })
        .collect();

    // First-order Richardson in ε, then second-order.
    let r1a = 2.0 * levels[1] - levels[0];
    let r1b = 2.0 * levels[2] - levels[1];
    let value = (4.0 * r1b - r1a) / 3.0;

    let residual = (r1b - r1a).norm();
    let tolerance = 1e-4 * value.norm().max(1.0);
    if residual > tolerance {
        return Err(Error::ConvergenceFailure {
            residual,
            tolerance,
        });
    }
    Ok(value)
}

/// The exact rank-1 rule the quadrature verifies, for convenience in checks.
pub fn rank1_rule(lambda: &Rat, k: u32) -> Complex64 {
    if lambda.is_positive() {
        let lam = lambda.to_f64().unwrap();
        let mut fact = 1.0;
        for j in 1..k {
            fact *= j as f64;
        }
        Complex64::new(0.0, lam).powi((k - 1) as i32) / fact
    } else {
        Complex64::new(0.0, 0.0)
    }
}

/// Σ over s ∈ {±1}^N of (Π sⱼ)·\[Σ sⱼξⱼ > 0\]·(Σ sⱼξⱼ)^p by direct
/// enumeration — independent of the term algebra and residue engine.
pub fn brute_force_sign_sum(xi: &[Rat], p: u32) -> Result<Rat> {
    let n = xi.len();
    let mut acc = Rat::zero();
    for mask in 0u32..(1 << n) {
        let mut lam = Rat::zero();
        let mut sign = 1i64;
        for (j, x) in xi.iter().enumerate() {
            if mask & (1 << j) == 0 {
                lam += x;
            } else {
                lam -= x;
                sign = -sign;
            }
        }
        if lam.is_zero() {
            return Err(Error::NonGeneric(NonGenericReport {
                violations: vec![GenericityViolation::TupleSumZero {
                    tuple: (0..n).map(|j| ((mask >> j) & 1) as usize).collect(),
                    display: display_sign_tuple(mask, n),
                }],
            }));
        }
        if lam.is_positive() {
            let mut pw = Rat::from_integer(sign.into());
            for _ in 0..p {
                pw *= &lam;
            }
            acc += pw;
        }
    }
    Ok(acc)
}

pub(crate) fn display_sign_tuple(mask: u32, n: usize) -> String {
    let mut s = String::from("(");
    for j in 0..n {
        if j > 0 {
            s.push(',');
        }
        s.push(if mask & (1 << j) == 0 { '+' } else { '-' });
    }
    s.push(')');
    s
}

/// Sampled pushforward density of the rank-1 torus moment map: the N-fold
/// convolution of uniform probability densities on [−ξⱼ, ξⱼ].
#[derive(Debug, Clone)]
pub struct DhDensity {
    pub xi: Vec<f64>,
    pub step: f64,
    /// `density[i]` is the value at t = (i − center)·step
    pub density: Vec<f64>,
    pub center: usize,
}

impl DhDensity {
    pub fn value_at(&self, t: f64) -> f64 {
        let pos = self.center as f64 + t / self.step;
        let i = pos.floor() as isize;
        let frac = pos - i as f64;
        if i < 0 || (i + 1) as usize >= self.density.len() {
            return 0.0;
        }
        let i = i as usize;
        self.density[i] * (1.0 - frac) + self.density[i + 1] * frac
    }

    /// Total mass by the trapezoid rule; 1 up to grid error.
    pub fn mass(&self) -> f64 {
        let inner: f64 = self.density[1..self.density.len() - 1].iter().sum();
        self.step * (inner + 0.5 * (self.density[0] + self.density[self.density.len() - 1]))
    }

    /// Literal one-sided derivative just right of 0 (finite difference). The
    /// density is even and polynomial on the chamber around generic 0, so
    /// this is 0 up to grid error; the volume information sits one derivative
    /// deeper — see `radial_derivative_at_zero`.
    pub fn one_sided_derivative_at_zero(&self) -> f64 {
        (self.value_at(2.0 * self.step) - self.value_at(self.step)) / self.step
    }

    /// lim_{t→0+} −ρ'(t)/t = −ρ''(0), read from an even polynomial fit on the
    /// chamber containing 0. This is the radial-density derivative at the
    /// origin, the quantity proportional to the reduced volume.
    pub fn radial_derivative_at_zero(&self) -> f64 {
        let radius = self.zero_chamber_radius();
        let window = 0.8 * radius;
        // even polynomial c0 + c2 t² + c4 t⁴ on |t| ≤ window
        let mut pts = Vec::new();
        let mut t = -window;
        while t <= window {
            pts.push((t, self.value_at(t)));
            t += self.step;
        }
        let ncoef = if self.xi.len() >= 5 { 3 } else { 2 };
        let coef = fit_even_poly(&pts, ncoef);
        -2.0 * coef[1]
    }

    /// Volume oracle for the A1 reduction, up to one global constant per N:
    /// the radial derivative weighted by the total Liouville mass Π(2ξⱼ).
    pub fn volume_reading(&self) -> f64 {
        let mass: f64 = self.xi.iter().map(|x| 2.0 * x).product();
        self.radial_derivative_at_zero() * mass
    }

    /// Distance from 0 to the nearest breakpoint Σ sⱼξⱼ of the density.
    fn zero_chamber_radius(&self) -> f64 {
        let n = self.xi.len();
        let mut best = f64::INFINITY;
        for mask in 0u32..(1 << n) {
            let mut lam = 0.0;
            for (j, x) in self.xi.iter().enumerate() {
                lam += if mask & (1 << j) == 0 { *x } else { -*x };
            }
            if lam.abs() > 1e-12 {
                best = best.min(lam.abs());
            }
        }
        best
    }
}

fn fit_even_poly(pts: &[(f64, f64)], ncoef: usize) -> Vec<f64> {
    // normal equations for basis {1, t², t⁴, ...}
    let mut a = vec![vec![0.0; ncoef]; ncoef];
    let mut b = vec![0.0; ncoef];
    for &(t, y) in pts {
        let basis: Vec<f64> = (0..ncoef).map(|j| t.powi(2 * j as i32)).collect();
        for r in 0..ncoef {
            for c in 0..ncoef {
                a[r][c] += basis[r] * basis[c];
            }
            b[r] += basis[r] * y;
        }
    }
    solve_dense(&mut a, &mut b);
    b
}

#[allow(clippy::needless_range_loop)]
fn solve_dense(a: &mut [Vec<f64>], b: &mut [f64]) {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&r, &s| a[r][col].abs().total_cmp(&a[s][col].abs()))
            .unwrap();
        a.swap(col, pivot);
        b.swap(col, pivot);
        let p = a[col][col];
        for r in 0..n {
            if r == col {
                continue;
            }
            let f = a[r][col] / p;
            for c in col..n {
                a[r][c] -= f * a[col][c];
            }
            b[r] -= f * b[col];
        }
    }
    for col in 0..n {
        b[col] /= a[col][col];
    }
}

/// Exact value of the convolution of two uniform densities, used to seed the
/// grid without sampling a discontinuous function.
fn two_fold_exact(xi1: f64, xi2: f64, t: f64) -> f64 {
    // overlap length of [−ξ₁, ξ₁] and [t−ξ₂, t+ξ₂], normalized
    let lo = (-xi1).max(t - xi2);
    let hi = xi1.min(t + xi2);
    ((hi - lo).max(0.0)) / (4.0 * xi1 * xi2)
}

/// N-fold numerical convolution of uniform densities on [−ξⱼ, ξⱼ],
/// sampled on a grid of the given step.
pub fn convolution_density(xi: &[f64], grid_step: f64) -> Result<DhDensity> {
    if xi.len() < 2 {
        return Err(Error::Validation("need at least two orbits".into()));
    }
    if xi.iter().any(|&x| x <= 0.0) {
        return Err(Error::Validation("xi entries must be positive".into()));
    }
    let min_xi = xi.iter().cloned().fold(f64::INFINITY, f64::min);
    let max_step = min_xi / 50.0;
    if grid_step > max_step {
        return Err(Error::GridTooCoarse {
            step: grid_step,
            max: max_step,
        });
    }

    let total: f64 = xi.iter().sum();
    let half_cells = (total / grid_step).ceil() as usize + 2;
    let len = 2 * half_cells + 1;
    let center = half_cells;
    let at = |i: usize| (i as f64 - center as f64) * grid_step;

    // Seed with the exact two-fold convolution (piecewise linear), then fold
    // in the remaining factors as moving-window averages of the piecewise
    // linear interpolant; both steps are O(h²) accurate.
    let mut density: Vec<f64> = (0..len)
        .map(|i| two_fold_exact(xi[0], xi[1], at(i)))
        .collect();
    for &x in &xi[2..] {
        density = moving_average(&density, grid_step, x);
    }

    Ok(DhDensity {
        xi: xi.to_vec(),
        step: grid_step,
        density,
        center,
    })
}

/// (f * uniform[−w, w])(t) = (1/2w)·∫_{t−w}^{t+w} f, for piecewise-linear f
/// given by samples on a regular grid. The window integral is trapezoid over
/// whole cells plus exact fractional end cells.
fn moving_average(f: &[f64], step: f64, w: f64) -> Vec<f64> {
    let n = f.len();
    // prefix[i] = integral of the interpolant from grid point 0 to i
    let mut prefix = vec![0.0; n];
    for i in 1..n {
        prefix[i] = prefix[i - 1] + 0.5 * (f[i - 1] + f[i]) * step;
    }
    let value = |x: f64| -> f64 {
        // interpolant value at fractional grid coordinate
        if x <= 0.0 || x >= (n - 1) as f64 {
            return 0.0;
        }
        let i = x.floor() as usize;
        let frac = x - i as f64;
        f[i] * (1.0 - frac) + f[i + 1] * frac
    };
    let integral_to = |x: f64| -> f64 {
        // integral of the interpolant from grid point 0 to fractional coord x
        if x <= 0.0 {
            return 0.0;
        }
        if x >= (n - 1) as f64 {
            return prefix[n - 1];
        }
        let i = x.floor() as usize;
        let frac = x - i as f64;
        let fx = value(x);
        prefix[i] + 0.5 * (f[i] + fx) * frac * step
    };
    (0..n)
        .map(|i| {
            let lo = i as f64 - w / step;
            let hi = i as f64 + w / step;
            (integral_to(hi) - integral_to(lo)) / (2.0 * w)
        })
        .collect()
}

//! The smooth bump `φ` that carves a neutral fixed point into the doubling map.
//!
//! `φ` is built as the antiderivative of an explicit C^∞ slope profile
//!
//! ```text
//! s(t) = gain · χ(t) · q(t)
//! χ(t) = S((t - 1/10) / w) · S((1 - t) / w)          smooth cutoff, supp χ = [1/10, 1]
//! q(t) = M - (M + N) · σ((t - c) / L)                 decreasing, q(1/2) = 1
//! ```
//!
//! where `S` is the standard `exp(-1/u)` smooth step and `σ` the logistic
//! function. For a cutoff width `w` and steepness `L`, the three numbers
//! `(M, N, c)` are solved for so that `s(1/2) = 1`, `∫ s` over the rise
//! `[1/10, 1/2]` is `1/2` and over the fall `[1/2, 1]` is `-1/2`. A
//! deterministic search over `(w, L)` then picks the first candidate whose
//! tabulation passes [`validate_phi`] with slope margin at least `10⁻³`.
//!
//! The rise is tight: `φ` has to climb `1/2` over an interval of length
//! `0.4` with slope capped at `4/3`, so `M` ends up close to the cap.

use std::sync::{Arc, OnceLock};

use serde::Serialize;

use crate::error::{Error, Result};

pub const SUPPORT_START: f64 = 0.1;
pub const SLOPE_CAP: f64 = 4.0 / 3.0;
/// Required distance between the largest `|φ'|` and the cap.
pub const SLOPE_MARGIN: f64 = 1e-3;
/// Intervals of the tabulation grid on `[0, 1]`.
pub const TABLE_INTERVALS: usize = 1 << 16;

const HALF_TOL: f64 = 1e-10;
const EQ_TOL: f64 = 1e-12;
const CURVATURE_STEP: f64 = 1e-4;

/// 4-point Gauss–Legendre nodes and weights on `[-1, 1]`.
const GL_NODES: [f64; 4] = [
    -0.861_136_311_594_052_6,
    -0.339_981_043_584_856_3,
    0.339_981_043_584_856_3,
    0.861_136_311_594_052_6,
];
const GL_WEIGHTS: [f64; 4] = [
    0.347_854_845_137_453_9,
    0.652_145_154_862_546_1,
    0.652_145_154_862_546_1,
    0.347_854_845_137_453_9,
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BumpParams {
    /// Width of the smooth cutoff ramps at both ends of the support.
    pub cutoff_width: f64,
    /// Length scale of the logistic transition.
    pub steepness: f64,
    /// Plateau slope on the rise.
    pub plateau: f64,
    /// Depth of the negative slope on the fall.
    pub drop: f64,
    /// Centre of the logistic transition.
    pub center: f64,
    /// Overall multiplier on the slope profile.
    pub gain: f64,
}

impl BumpParams {
    pub fn zero() -> Self {
        Self {
            gain: 0.0,
            ..Self::untuned(0.02, 0.02)
        }
    }

    fn untuned(cutoff_width: f64, steepness: f64) -> Self {
        Self {
            cutoff_width,
            steepness,
            plateau: 1.28,
            drop: 1.05,
            center: 0.5,
            gain: 1.0,
        }
    }

    pub fn with_gain(self, gain: f64) -> Self {
        Self { gain, ..self }
    }

    /// Searches `(cutoff_width, steepness)` candidates in a fixed order and
    /// returns the first tuned parameter set that passes validation.
    pub fn tuned() -> Result<Self> {
        const WIDTHS: [f64; 4] = [0.02, 0.015, 0.01, 0.03];
        const STEEPNESS: [f64; 6] = [0.02, 0.015, 0.025, 0.01, 0.03, 0.04];
        let mut last_err = String::from("no candidates tried");
        for &w in &WIDTHS {
            for &l in &STEEPNESS {
                match Self::solve(w, l) {
                    Ok(p) => {
                        let bump = BumpProfile::tabulate(p);
                        let report = validate_phi(&bump, 100_000);
                        if report.passed() && report.max_abs_slope <= SLOPE_CAP - SLOPE_MARGIN {
                            return Ok(p);
                        }
                        last_err = format!(
                            "w={w}, L={l}: validation failed (max |phi'| = {})",
                            report.max_abs_slope
                        );
                    }
                    Err(e) => last_err = format!("w={w}, L={l}: {e}"),
                }
            }
        }
        Err(Error::ConstructionInfeasible(last_err))
    }

    /// Solves for `(plateau, drop, center)` at fixed cutoff width and steepness.
    fn solve(cutoff_width: f64, steepness: f64) -> Result<Self> {
        let base = Self::untuned(cutoff_width, steepness);
        let residual = |plateau: f64, drop: f64| -> Option<(f64, f64, BumpParams)> {
            let mut q = base;
            q.plateau = plateau;
            q.drop = drop;
            // q(1/2) = 1 fixes the centre: σ((1/2 - c)/L) = (M - 1)/(M + N)
            let frac = (plateau - 1.0) / (plateau + drop);
            if !(frac > 0.0 && frac < 1.0) {
                return None;
            }
            q.center = 0.5 - steepness * (frac / (1.0 - frac)).ln();
            let (rise, fall) = lobe_integrals(&q);
            Some((rise - 0.5, fall + 0.5, q))
        };

        let (mut m, mut n) = (base.plateau, base.drop);
        for _ in 0..50 {
            let (r0, f0, q) = residual(m, n).ok_or_else(|| infeasible(m, n))?;
            if r0.abs() < 1e-15 && f0.abs() < 1e-15 {
                return Ok(q);
            }
            let h = 1e-7;
            let (rm, fm, _) = residual(m + h, n).ok_or_else(|| infeasible(m, n))?;
            let (rn, fn_, _) = residual(m, n + h).ok_or_else(|| infeasible(m, n))?;
            let (a11, a12, a21, a22) = ((rm - r0) / h, (rn - r0) / h, (fm - f0) / h, (fn_ - f0) / h);
            let det = a11 * a22 - a12 * a21;
            if det.abs() < 1e-300 {
                return Err(infeasible(m, n));
            }
            let dm = (a22 * r0 - a12 * f0) / det;
            let dn = (a11 * f0 - a21 * r0) / det;
            m -= dm;
            n -= dn;
            if dm.abs() < 1e-16 && dn.abs() < 1e-16 {
                let (_, _, q) = residual(m, n).ok_or_else(|| infeasible(m, n))?;
                return Ok(q);
            }
        }
        let (r0, f0, q) = residual(m, n).ok_or_else(|| infeasible(m, n))?;
        if r0.abs() < 1e-13 && f0.abs() < 1e-13 {
            Ok(q)
        } else {
            Err(Error::ConstructionInfeasible(format!(
                "Newton did not converge (residuals {r0:e}, {f0:e})"
            )))
        }
    }

    /// Slope profile `s = φ'` at `t`. Exactly zero outside `(1/10, 1)`.
    pub fn slope(&self, t: f64) -> f64 {
        if t <= SUPPORT_START || t >= 1.0 || self.gain == 0.0 {
            return 0.0;
        }
        let cut = smooth_step((t - SUPPORT_START) / self.cutoff_width)
            * smooth_step((1.0 - t) / self.cutoff_width);
        let q = self.plateau - (self.plateau + self.drop) * logistic((t - self.center) / self.steepness);
        self.gain * cut * q
    }
}

fn infeasible(m: f64, n: f64) -> Error {
    Error::ConstructionInfeasible(format!("degenerate plateau/drop pair ({m}, {n})"))
}

fn smooth_step(u: f64) -> f64 {
    if u <= 0.0 {
        0.0
    } else if u >= 1.0 {
        1.0
    } else {
        let a = (-1.0 / u).exp();
        let b = (-1.0 / (1.0 - u)).exp();
        a / (a + b)
    }
}

fn logistic(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// Integral of the slope over one tabulation interval.
fn cell_integral(p: &BumpParams, lo: f64, h: f64) -> f64 {
    let mid = lo + 0.5 * h;
    let half = 0.5 * h;
    GL_NODES
        .iter()
        .zip(GL_WEIGHTS.iter())
        .map(|(&x, &w)| w * p.slope(mid + half * x))
        .sum::<f64>()
        * half
}

/// `(∫ s over [0, 1/2], ∫ s over [1/2, 1])` with the tabulation quadrature.
fn lobe_integrals(p: &BumpParams) -> (f64, f64) {
    let h = 1.0 / TABLE_INTERVALS as f64;
    let first = (SUPPORT_START / h).floor() as usize;
    let half = TABLE_INTERVALS / 2;
    let rise: f64 = (first..half).map(|i| cell_integral(p, i as f64 * h, h)).sum();
    let fall: f64 = (half..TABLE_INTERVALS).map(|i| cell_integral(p, i as f64 * h, h)).sum();
    (rise, fall)
}

/// A tabulated realisation of `φ`.
#[derive(Debug, Clone)]
pub struct BumpProfile {
    params: BumpParams,
    /// `φ` at the nodes `i / TABLE_INTERVALS`.
    phi: Vec<f64>,
    /// `φ'` at the same nodes.
    dphi: Vec<f64>,
}

static STANDARD: OnceLock<std::result::Result<Arc<BumpProfile>, String>> = OnceLock::new();

impl BumpProfile {
    /// Tabulates `φ` for the given parameters without validating it.
    pub fn tabulate(params: BumpParams) -> Self {
        let h = 1.0 / TABLE_INTERVALS as f64;
        let mut phi = Vec::with_capacity(TABLE_INTERVALS + 1);
        let mut dphi = Vec::with_capacity(TABLE_INTERVALS + 1);
        let mut acc = 0.0;
        phi.push(0.0);
        dphi.push(0.0);
        for i in 0..TABLE_INTERVALS {
            // pairwise error is far below the 1e-13 we need at φ(1/2)
            acc += cell_integral(&params, i as f64 * h, h);
            phi.push(acc);
            dphi.push(params.slope((i + 1) as f64 * h));
        }
        Self { params, phi, dphi }
    }

    /// The tuned profile shared by every intermittent fiber map.
    pub fn standard() -> Result<Arc<BumpProfile>> {
        STANDARD
            .get_or_init(|| {
                BumpParams::tuned()
                    .and_then(build_phi)
                    .map(Arc::new)
                    .map_err(|e| e.to_string())
            })
            .clone()
            .map_err(Error::ConstructionInfeasible)
    }

    pub fn params(&self) -> &BumpParams {
        &self.params
    }

    pub fn rise_interval(&self) -> (f64, f64) {
        (SUPPORT_START, 0.5)
    }

    pub fn fall_interval(&self) -> (f64, f64) {
        (0.5, 1.0)
    }

    /// Tabulated `(t, φ(t), φ'(t))` triples.
    pub fn samples(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        let h = 1.0 / TABLE_INTERVALS as f64;
        self.phi
            .iter()
            .zip(self.dphi.iter())
            .enumerate()
            .map(move |(i, (&p, &d))| (i as f64 * h, p, d))
    }

    /// `φ(t)`, cubic Hermite interpolation of the table; exactly zero off `(1/10, 1)`.
    pub fn value(&self, t: f64) -> f64 {
        if t <= SUPPORT_START || t >= 1.0 {
            return 0.0;
        }
        let n = TABLE_INTERVALS as f64;
        let pos = t * n;
        let i = (pos.floor() as usize).min(TABLE_INTERVALS - 1);
        let u = pos - i as f64;
        let h = 1.0 / n;
        let (p0, p1) = (self.phi[i], self.phi[i + 1]);
        let (d0, d1) = (self.dphi[i] * h, self.dphi[i + 1] * h);
        let u2 = u * u;
        let u3 = u2 * u;
        (2.0 * u3 - 3.0 * u2 + 1.0) * p0
            + (u3 - 2.0 * u2 + u) * d0
            + (-2.0 * u3 + 3.0 * u2) * p1
            + (u3 - u2) * d1
    }

    /// `φ'(t)` from the closed-form slope profile.
    pub fn derivative(&self, t: f64) -> f64 {
        self.params.slope(t)
    }
}

/// Tabulates `φ` and checks it against the four defining conditions.
pub fn build_phi(params: BumpParams) -> Result<BumpProfile> {
    let bump = BumpProfile::tabulate(params);
    let report = validate_phi(&bump, 100_000);
    if let Some(failed) = report.conditions.iter().find(|c| !c.pass) {
        return Err(Error::ConstructionInfeasible(format!(
            "condition {:?} fails with margin {:e}",
            failed.condition, failed.worst_margin
        )));
    }
    Ok(bump)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PhiCondition {
    /// `0 ≤ φ ≤ 1` and `|φ'| ≤ 4/3`.
    Bounds,
    /// `φ = 0` off `[1/10, 1]`.
    Support,
    /// `φ(1/2) = 1/2`, `φ'(1/2) = 1`, `φ''(1/2) < 0`.
    Tangency,
    /// `φ(t) < t` on `(0, 1) \ {1/2}`.
    BelowDiagonal,
}

impl PhiCondition {
    pub fn label(&self) -> &'static str {
        match self {
            PhiCondition::Bounds => "i",
            PhiCondition::Support => "ii",
            PhiCondition::Tangency => "iii",
            PhiCondition::BelowDiagonal => "iv",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ConditionCheck {
    pub condition: PhiCondition,
    pub pass: bool,
    pub worst_margin: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct PhiReport {
    pub grid_n: usize,
    pub conditions: Vec<ConditionCheck>,
    pub max_abs_slope: f64,
    pub phi_min: f64,
    pub phi_max: f64,
    pub phi_half: f64,
    pub slope_half: f64,
    pub curvature_half: f64,
}

impl PhiReport {
    pub fn passed(&self) -> bool {
        self.conditions.iter().all(|c| c.pass)
    }

    pub fn check(&self, condition: PhiCondition) -> &ConditionCheck {
        self.conditions
            .iter()
            .find(|c| c.condition == condition)
            .expect("every condition is reported")
    }
}

/// Checks conditions (i)–(iv) on a uniform grid of `grid_n + 1` points of
/// `[0, 1]` plus `grid_n` exterior points. Equalities are tested with an
/// absolute slack of `10⁻¹²` (`10⁻¹⁰` at `t = 1/2`), so each margin is
/// positive exactly when its condition holds.
pub fn validate_phi(bump: &BumpProfile, grid_n: usize) -> PhiReport {
    let grid_n = grid_n.max(1);
    let mut phi_min = f64::INFINITY;
    let mut phi_max = f64::NEG_INFINITY;
    let mut max_abs_slope = 0.0f64;
    let mut below_diag = f64::INFINITY;
    for k in 0..=grid_n {
        let t = k as f64 / grid_n as f64;
        let p = bump.value(t);
        phi_min = phi_min.min(p);
        phi_max = phi_max.max(p);
        max_abs_slope = max_abs_slope.max(bump.derivative(t).abs());
        if k > 0 && k < grid_n && 2 * k != grid_n {
            below_diag = below_diag.min(t - p);
        }
    }

    let mut outside = 0.0f64;
    let half = grid_n / 2;
    for k in 0..half.max(1) {
        let u = k as f64 / half.max(1) as f64;
        let left = -0.5 + u * (0.5 + SUPPORT_START);
        let right = 1.0 + u * 0.5;
        for t in [left, right] {
            if !(SUPPORT_START..=1.0).contains(&t) {
                outside = outside.max(bump.value(t).abs()).max(bump.derivative(t).abs());
            }
        }
    }

    let phi_half = bump.value(0.5);
    let slope_half = bump.derivative(0.5);
    let h = CURVATURE_STEP;
    let curvature_half =
        (bump.value(0.5 + h) - 2.0 * phi_half + bump.value(0.5 - h)) / (h * h);

    let bounds = (SLOPE_CAP - max_abs_slope)
        .min(1.0 - phi_max + EQ_TOL)
        .min(phi_min + EQ_TOL);
    let support = EQ_TOL - outside;
    let tangency = (HALF_TOL - (phi_half - 0.5).abs())
        .min(HALF_TOL - (slope_half - 1.0).abs())
        .min(-curvature_half);

    let check = |condition, worst_margin: f64| ConditionCheck {
        condition,
        pass: worst_margin > 0.0,
        worst_margin,
    };
    PhiReport {
        grid_n,
        conditions: vec![
            check(PhiCondition::Bounds, bounds),
            check(PhiCondition::Support, support),
            check(PhiCondition::Tangency, tangency),
            check(PhiCondition::BelowDiagonal, below_diag),
        ],
        max_abs_slope,
        phi_min,
        phi_max,
        phi_half,
        slope_half,
        curvature_half,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn standard() -> Arc<BumpProfile> {
        BumpProfile::standard().expect("standard bump")
    }

    #[test]
    fn default_profile_hits_half() {
        let b = standard();
        assert!((b.value(0.5) - 0.5).abs() <= 1e-10);
        assert!((b.derivative(0.5) - 1.0).abs() <= 1e-10);
    }

    #[test]
    fn zero_outside_support() {
        let b = standard();
        assert_eq!(b.value(0.05), 0.0);
        assert_eq!(b.value(0.1), 0.0);
        assert_eq!(b.value(1.0), 0.0);
        assert_eq!(b.value(1.7), 0.0);
        assert_eq!(b.derivative(-0.3), 0.0);
    }

    #[test]
    fn slope_margin_on_dense_grid() {
        let b = standard();
        let worst = (0..=100_000)
            .map(|k| b.derivative(k as f64 / 100_000.0).abs())
            .fold(0.0f64, f64::max);
        assert!(worst <= SLOPE_CAP - SLOPE_MARGIN, "max |phi'| = {worst}");
    }

    #[test]
    fn default_passes_all_conditions() {
        let report = validate_phi(&standard(), 100_000);
        for c in &report.conditions {
            assert!(c.pass, "{:?} margin {}", c.condition, c.worst_margin);
        }
    }

    #[test]
    fn scaled_profile_breaks_slope_bound() {
        let params = *standard().params();
        let bump = BumpProfile::tabulate(params.with_gain(1.2));
        let report = validate_phi(&bump, 100_000);
        assert!(!report.check(PhiCondition::Bounds).pass);
        assert!(report.max_abs_slope > SLOPE_CAP);
        assert!(build_phi(params.with_gain(1.2)).is_err());
    }

    #[test]
    fn zero_profile_fails_tangency() {
        let bump = BumpProfile::tabulate(BumpParams::zero());
        let report = validate_phi(&bump, 1_000);
        assert!(!report.check(PhiCondition::Tangency).pass);
        assert_eq!(report.phi_half, 0.0);
    }

    #[test]
    fn interpolation_matches_quadrature_off_grid() {
        // φ(t) at a point between nodes against a direct high-order quadrature
        let b = standard();
        let p = *b.params();
        let t = 0.3141592653589793;
        let n = 200_000;
        let h = (t - SUPPORT_START) / n as f64;
        let direct: f64 = (0..n)
            .map(|i| cell_integral(&p, SUPPORT_START + i as f64 * h, h))
            .sum();
        assert!((b.value(t) - direct).abs() < 1e-13);
    }

    #[test]
    fn samples_cover_unit_interval() {
        let b = standard();
        let s: Vec<_> = b.samples().collect();
        assert_eq!(s.len(), TABLE_INTERVALS + 1);
        assert_eq!(s[0].0, 0.0);
        assert_eq!(s[TABLE_INTERVALS].0, 1.0);
    }
}

//! Uniform quasiclassical wavefunctions.
//!
//! * Langer: Airy-function form uniform across the outer turning point `r+`,
//!   `U = C [3S/2]^{1/6} |Q|^{-1/4} Ai(sgn(r - r+) [3S/2]^{2/3})`.
//! * Fock (s-states): Bessel-function form uniform across the origin,
//!   `U = C_F sqrt(S) (-Q)^{-1/4} J_1(S)`.
//!
//! For `l >= 1` the Langer-corrected `Q` (centrifugal term `(l+1/2)^2/r^2`)
//! is used; for `l = 0` the classical region reaches the origin and the
//! plain `Q` is used throughout.
//!
//! Action integrals are evaluated on two Chebyshev interpolants (inside and
//! outside `r+`). What is interpolated is not `S` itself but
//! `g = S / |r - r+|^{3/2}`, which is analytic across `r+`; on the inner side
//! the independent variable is `sqrt(r)` for `l = 0` and an angle for `l >= 1`,
//! which makes `g` analytic at the inner end as well.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::cell::RefCell;
use core::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use libm::{atan2, cbrt, pow, sin, sqrt};

use crate::chebyshev::RadialGrid;
use crate::error::{Error, Result};
use crate::num::gauss::GaussLegendre;
use crate::num::roots::brent;
use crate::params::PotentialParams;
use crate::potential::{Channel, StateLabel, TurningPointReport};
use crate::specfun::{airy_ai, bessel_j};

/// Width of the band around `r+` inside which the linearized limit is used.
const TURNING_BAND: f64 = 1e-6;

/// Options for building the action interpolants.
#[derive(Debug, Clone, PartialEq)]
pub struct QcOptions {
    /// Nodes of the inner interpolant; the outer one uses a quarter as many.
    pub k_max: usize,
    /// End of the outer interpolant; defaults to `1.5 r+`.
    pub r_max: Option<f64>,
    /// Treat an inner classical region as absent (two-turning-point override).
    pub allow_anomaly: bool,
}

impl Default for QcOptions {
    fn default() -> Self {
        Self {
            k_max: 700,
            r_max: None,
            allow_anomaly: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Langer,
    Fock,
}

/// Whether the Langer-corrected `Q` is used for orbital momentum `l`.
pub fn uses_langer_q(l: u32) -> bool {
    l > 0
}

/// Endpoint behaviour of an integrand over a classical region.
#[derive(Debug, Clone, Copy)]
enum End {
    /// Simple zero of `Q` with `|dQ/dr|` given.
    Root(f64),
    /// `Q ~ -2Z/r` at `r = 0`.
    Origin,
    Regular,
}

#[derive(Debug, Clone, Copy)]
enum Kernel {
    Sqrt,
    InvSqrt,
}

impl Kernel {
    fn apply(self, p: f64) -> f64 {
        match self {
            Kernel::Sqrt => sqrt(p),
            Kernel::InvSqrt => 1.0 / sqrt(p),
        }
    }
}

/// Quadrature over pieces of a classical region. `p(r) = +-Q(r) >= 0` there.
struct RegionQuad {
    panel: GaussLegendre,
    segment: GaussLegendre,
}

impl RegionQuad {
    fn new() -> Self {
        Self {
            panel: GaussLegendre::new(200),
            segment: GaussLegendre::new(24),
        }
    }

    /// `\int_a^b K(p)` on a whole region, split in the middle.
    fn region<P: Fn(f64) -> f64>(&self, p: &P, a: f64, ea: End, b: f64, eb: End, k: Kernel) -> f64 {
        let m = 0.5 * (a + b);
        self.graded(p, a, ea, m, k, &self.panel, 24) + self.graded(p, b, eb, m, k, &self.panel, 24)
    }

    /// `\int` between neighbouring interpolation nodes.
    fn segment<P: Fn(f64) -> f64>(&self, p: &P, a: f64, ea: End, b: f64, eb: End, k: Kernel) -> f64 {
        match (ea, eb) {
            (End::Regular, End::Regular) => self.segment.integrate(a, b, |r| k.apply(p(r))),
            (_, End::Regular) => self.graded(p, a, ea, b, k, &self.segment, 16),
            (End::Regular, _) => self.graded(p, b, eb, a, k, &self.segment, 16),
            _ => {
                let m = 0.5 * (a + b);
                self.graded(p, a, ea, m, k, &self.segment, 16) + self.graded(p, b, eb, m, k, &self.segment, 16)
            }
        }
    }

    /// `\int` from the special point `e` to `m` with `r = e + s t^2`,
    /// on panels graded geometrically toward `t = 0`.
    #[allow(clippy::too_many_arguments)]
    fn graded<P: Fn(f64) -> f64>(
        &self,
        p: &P,
        e: f64,
        kind: End,
        m: f64,
        k: Kernel,
        rule: &GaussLegendre,
        levels: i32,
    ) -> f64 {
        let s = if m >= e { 1.0 } else { -1.0 };
        let span = (m - e).abs();
        if span == 0.0 {
            return 0.0;
        }
        let t_max = sqrt(span);
        let guard = 1e-9 * e.abs().max(span);
        let f = |t: f64| {
            let t2 = t * t;
            let r = e + s * t2;
            match kind {
                End::Root(slope) if t2 < guard => match k {
                    Kernel::Sqrt => 2.0 * t2 * sqrt(slope),
                    Kernel::InvSqrt => 2.0 / sqrt(slope),
                },
                _ => 2.0 * t * k.apply(p(r)),
            }
        };
        let mut sum = 0.0;
        let mut hi = t_max;
        for _ in 0..levels {
            let lo = 0.5 * hi;
            sum += rule.integrate(lo, hi, f);
            hi = lo;
        }
        sum + rule.integrate(0.0, hi, f)
    }
}

/// Classical region `[r-, r+]` of one channel at one energy.
#[derive(Debug, Clone, Copy)]
struct Region<'a> {
    channel: Channel<'a>,
    energy: f64,
    langer: bool,
    r_minus: f64,
    r_plus: f64,
    /// `|dQ/dr|` at `r-` (unused when `r- = 0`).
    slope_minus: f64,
    slope_plus: f64,
}

impl<'a> Region<'a> {
    fn new(state: &StateLabel, energy: f64, params: &'a PotentialParams, allow_anomaly: bool) -> Result<Self> {
        let channel = state.channel(params);
        let langer = uses_langer_q(state.l);
        if state.l > 0 && !allow_anomaly {
            if let Some(sr) = channel.turning_points(energy, false)?.second_region {
                return Err(Error::Anomaly {
                    l: state.l,
                    r_a: sr.r_a,
                    r_b: sr.r_b,
                });
            }
        }
        let tp = channel.turning_points(energy, langer)?;
        let polish = |mut r: f64| {
            for _ in 0..3 {
                let [q, dq] = channel.q_derivs(r, energy, langer);
                if dq == 0.0 {
                    break;
                }
                let step = q / dq;
                if !(step.abs() < 1e-6 * r) {
                    break;
                }
                r -= step;
            }
            r
        };
        let tp = TurningPointReport {
            r_plus: polish(tp.r_plus),
            r_minus: if tp.r_minus > 0.0 { polish(tp.r_minus) } else { 0.0 },
            ..tp
        };
        let slope_plus = channel.q_derivs(tp.r_plus, energy, langer)[1].abs();
        let slope_minus = if tp.r_minus > 0.0 {
            channel.q_derivs(tp.r_minus, energy, langer)[1].abs()
        } else {
            0.0
        };
        Ok(Self {
            channel,
            energy,
            langer,
            r_minus: tp.r_minus,
            r_plus: tp.r_plus,
            slope_minus,
            slope_plus,
        })
    }

    fn q(&self, r: f64) -> f64 {
        self.channel.q(r, self.energy, self.langer)
    }

    fn inner_end(&self) -> End {
        if self.r_minus > 0.0 {
            End::Root(self.slope_minus)
        } else {
            End::Origin
        }
    }

    fn plus_end(&self) -> End {
        End::Root(self.slope_plus)
    }

    /// End kind of an inner-node position.
    fn end_at(&self, r: f64) -> End {
        if r == self.r_plus {
            self.plus_end()
        } else if r == self.r_minus {
            self.inner_end()
        } else {
            End::Regular
        }
    }

    fn total_action(&self, quad: &RegionQuad) -> f64 {
        let p = |r: f64| (-self.q(r)).max(0.0);
        quad.region(
            &p,
            self.r_minus,
            self.inner_end(),
            self.r_plus,
            self.plus_end(),
            Kernel::Sqrt,
        )
    }

    /// `\int_{r-}^{r+} dr / sqrt(-Q)`.
    fn period_integral(&self, quad: &RegionQuad) -> f64 {
        let p = |r: f64| (-self.q(r)).max(0.0);
        quad.region(
            &p,
            self.r_minus,
            self.inner_end(),
            self.r_plus,
            self.plus_end(),
            Kernel::InvSqrt,
        )
    }

    /// `x in [0, 1]` to `r` on the inner side.
    fn inner_r(&self, x: f64) -> f64 {
        if x >= 1.0 {
            return self.r_plus;
        }
        if self.r_minus > 0.0 {
            if x <= 0.0 {
                return self.r_minus;
            }
            let s = sin(FRAC_PI_2 * x);
            self.r_minus + (self.r_plus - self.r_minus) * s * s
        } else {
            self.r_plus * x * x
        }
    }
}

/// Chebyshev representation of an action integral on both sides of `r+`.
#[derive(Debug, Clone)]
pub struct ActionInterpolant {
    branch: Branch,
    r_minus: f64,
    r_plus: f64,
    r_max: f64,
    slope_plus: f64,
    total: f64,
    origin_map: bool,
    inner_grid: RadialGrid,
    inner_g: Vec<f64>,
    outer_grid: RadialGrid,
    outer_g: Vec<f64>,
}

impl ActionInterpolant {
    fn build(region: &Region<'_>, branch: Branch, k_max: usize, r_max: f64) -> Result<Self> {
        if !(r_max > region.r_plus) {
            return Err(Error::domain(format!(
                "outer radius {r_max} must exceed r+ = {}",
                region.r_plus
            )));
        }
        let quad = RegionQuad::new();
        let inner_grid = RadialGrid::new(1.0, k_max.max(8))?;
        let outer_grid = RadialGrid::new(1.0, (k_max / 4).max(8))?;
        let g_plus = 2.0 / 3.0 * sqrt(region.slope_plus);

        // inner side: suffix sums anchored at r+
        let rs: Vec<f64> = inner_grid.nodes().iter().map(|&x| region.inner_r(x)).collect();
        let p_in = |r: f64| (-region.q(r)).max(0.0);
        let mut inner_g = alloc::vec![0.0; rs.len()];
        let last = rs.len() - 1;
        inner_g[last] = g_plus;
        let mut s = 0.0;
        for k in (0..last).rev() {
            let (a, b) = (rs[k], rs[k + 1]);
            if b > a {
                s += quad.segment(&p_in, a, region.end_at(a), b, region.end_at(b), Kernel::Sqrt);
            }
            let d = region.r_plus - a;
            inner_g[k] = if d > 0.0 { s / (d * sqrt(d)) } else { g_plus };
        }
        let total = s;

        // outer side: prefix sums anchored at r+
        let width = r_max - region.r_plus;
        let ro: Vec<f64> = outer_grid
            .nodes()
            .iter()
            .map(|&x| if x >= 1.0 { r_max } else { region.r_plus + width * x })
            .collect();
        let p_out = |r: f64| region.q(r).max(0.0);
        let mut outer_g = alloc::vec![0.0; ro.len()];
        outer_g[0] = g_plus;
        let mut s = 0.0;
        for k in 1..ro.len() {
            let (a, b) = (ro[k - 1], ro[k]);
            let ea = if k == 1 { region.plus_end() } else { End::Regular };
            s += quad.segment(&p_out, a, ea, b, End::Regular, Kernel::Sqrt);
            let d = b - region.r_plus;
            outer_g[k] = s / (d * sqrt(d));
        }

        Ok(Self {
            branch,
            r_minus: region.r_minus,
            r_plus: region.r_plus,
            r_max,
            slope_plus: region.slope_plus,
            total,
            origin_map: region.r_minus == 0.0,
            inner_grid,
            inner_g,
            outer_grid,
            outer_g,
        })
    }

    pub fn branch(&self) -> Branch {
        self.branch
    }

    pub fn r_minus(&self) -> f64 {
        self.r_minus
    }

    pub fn r_plus(&self) -> f64 {
        self.r_plus
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    /// `\int_{r-}^{r+} sqrt(-Q) dr`.
    pub fn total(&self) -> f64 {
        self.total
    }

    /// `dQ/dr` at `r+`.
    pub fn slope_plus(&self) -> f64 {
        self.slope_plus
    }

    fn inner_x(&self, r: f64) -> f64 {
        if self.origin_map {
            sqrt((r / self.r_plus).max(0.0))
        } else {
            let a = sqrt((r - self.r_minus).max(0.0));
            let b = sqrt((self.r_plus - r).max(0.0));
            atan2(a, b) / FRAC_PI_2
        }
    }

    /// `S / |r - r+|^{3/2}`.
    fn g(&self, r: f64) -> f64 {
        if r <= self.r_plus {
            self.inner_grid
                .interpolate_unchecked(&self.inner_g, self.inner_x(r).clamp(0.0, 1.0))
        } else {
            let x = ((r - self.r_plus) / (self.r_max - self.r_plus)).clamp(0.0, 1.0);
            self.outer_grid.interpolate_unchecked(&self.outer_g, x)
        }
    }

    fn check(&self, r: f64) -> Result<()> {
        let lo = self.r_minus;
        let hi = match self.branch {
            Branch::Langer => self.r_max,
            Branch::Fock => self.r_plus,
        };
        if r.is_nan() || r < lo || r > hi {
            return Err(Error::domain(format!("r = {r} outside [{lo}, {hi}]")));
        }
        Ok(())
    }

    /// Langer action: `\int_r^{r+} sqrt(-Q)` inside, `\int_{r+}^r sqrt(Q)` outside.
    pub fn langer(&self, r: f64) -> Result<f64> {
        if r.is_nan() || r < self.r_minus || r > self.r_max {
            return Err(Error::domain(format!(
                "r = {r} outside [{}, {}]",
                self.r_minus, self.r_max
            )));
        }
        let d = (r - self.r_plus).abs();
        Ok(d * sqrt(d) * self.g(r))
    }

    /// The branch's action: Langer as above, Fock `\int_{r-}^r sqrt(-Q)`.
    pub fn eval(&self, r: f64) -> Result<f64> {
        self.check(r)?;
        match self.branch {
            Branch::Langer => self.langer(r),
            Branch::Fock => Ok(self.total - self.langer(r)?),
        }
    }
}

/// Langer- or Fock-type uniform wavefunction of one state.
#[derive(Debug, Clone)]
pub struct UniformWavefunction<'a> {
    pub kind: Branch,
    pub label: StateLabel,
    pub energy: f64,
    /// Normalization constant `C` (Langer) or `C_F` (Fock).
    pub norm: f64,
    pub action: ActionInterpolant,
    channel: Channel<'a>,
}

impl UniformWavefunction<'_> {
    fn q(&self, r: f64) -> f64 {
        self.channel.q(r, self.energy, uses_langer_q(self.label.l))
    }

    /// Reduced deep-region form of the Langer function,
    /// `(C / sqrt(pi)) cos(S - pi/4) / (-Q)^{1/4}`.
    pub fn langer_cosine(&self, r: f64) -> Result<f64> {
        let s = self.action.langer(r)?;
        let q = -self.q(r);
        Ok(self.norm / sqrt(PI) * libm::cos(s - FRAC_PI_4) / sqrt(sqrt(q)))
    }

    /// Reduced deep-region form of the Fock function,
    /// `C_F sqrt(2/pi) cos(S - 3pi/4) / (-Q)^{1/4}`.
    pub fn fock_cosine(&self, r: f64) -> Result<f64> {
        let s = self.action.total - self.action.langer(r)?;
        let q = -self.q(r);
        Ok(self.norm * sqrt(2.0 / PI) * libm::cos(s - 3.0 * FRAC_PI_4) / sqrt(sqrt(q)))
    }
}

fn outer_radius(opts: &QcOptions, r_plus: f64) -> f64 {
    opts.r_max.unwrap_or(1.5 * r_plus)
}

/// Langer action interpolant for `state` at `energy`.
pub fn langer_action(
    state: &StateLabel,
    energy: f64,
    params: &PotentialParams,
    opts: &QcOptions,
) -> Result<ActionInterpolant> {
    let region = Region::new(state, energy, params, opts.allow_anomaly)?;
    ActionInterpolant::build(&region, Branch::Langer, opts.k_max, outer_radius(opts, region.r_plus))
}

/// Fock action interpolant `S^F(r) = \int_0^r sqrt(-Q)` (s-states only).
pub fn fock_action(
    state: &StateLabel,
    energy: f64,
    params: &PotentialParams,
    opts: &QcOptions,
) -> Result<ActionInterpolant> {
    require_s_state(state)?;
    let region = Region::new(state, energy, params, opts.allow_anomaly)?;
    ActionInterpolant::build(&region, Branch::Fock, opts.k_max, outer_radius(opts, region.r_plus))
}

fn require_s_state(state: &StateLabel) -> Result<()> {
    if state.l != 0 {
        return Err(Error::domain(format!(
            "the Fock construction is normalized for l = 0 only, got l = {}",
            state.l
        )));
    }
    Ok(())
}

fn parity(k: i64) -> f64 {
    if k.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// `C = (-1)^{n-l-1} sqrt(2 pi / \int_{r-}^{r+} dr / sqrt(-Q))`.
pub fn langer_norm(state: &StateLabel, energy: f64, params: &PotentialParams, opts: &QcOptions) -> Result<f64> {
    let region = Region::new(state, energy, params, opts.allow_anomaly)?;
    let period = region.period_integral(&RegionQuad::new());
    if !(period.is_finite() && period > 0.0) {
        return Err(Error::Convergence {
            what: String::from("normalization integral"),
            iterations: 1,
            best_residual: period,
        });
    }
    let sign = parity(i64::from(state.n) - i64::from(state.l) - 1);
    Ok(sign * sqrt(2.0 * PI / period))
}

/// `|C|^2 = dE/dn = 2 (1 - d delta/dn) / (n - delta)^3`.
pub fn norm_squared_from_spectrum(n: u32, delta: f64, d_delta_dn: f64) -> f64 {
    let nu = f64::from(n) - delta;
    2.0 * (1.0 - d_delta_dn) / (nu * nu * nu)
}

/// Builds the Langer wavefunction (interpolant plus normalization).
pub fn langer_uniform<'a>(
    state: &StateLabel,
    energy: f64,
    params: &'a PotentialParams,
    opts: &QcOptions,
) -> Result<UniformWavefunction<'a>> {
    let action = langer_action(state, energy, params, opts)?;
    let norm = langer_norm(state, energy, params, opts)?;
    Ok(UniformWavefunction {
        kind: Branch::Langer,
        label: *state,
        energy,
        norm,
        action,
        channel: state.channel(params),
    })
}

/// Builds the Fock wavefunction with `C_F = (-1)^{n-1} C_L / sqrt(2)`.
pub fn fock_uniform<'a>(
    state: &StateLabel,
    energy: f64,
    params: &'a PotentialParams,
    opts: &QcOptions,
) -> Result<UniformWavefunction<'a>> {
    require_s_state(state)?;
    let action = fock_action(state, energy, params, opts)?;
    let c_l = langer_norm(state, energy, params, opts)?;
    let norm = parity(i64::from(state.n) - 1) * c_l / core::f64::consts::SQRT_2;
    Ok(UniformWavefunction {
        kind: Branch::Fock,
        label: *state,
        energy,
        norm,
        action,
        channel: state.channel(params),
    })
}

/// Langer uniform wavefunction at `r`.
///
/// Within `1e-6 r+` of the turning point the linearized limit
/// `C Q'^{-1/6} Ai(Q'^{1/3} (r - r+))` is used.
pub fn langer_wavefunction(wf: &UniformWavefunction<'_>, r: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::domain(format!("Langer wavefunction needs r > 0, got {r}")));
    }
    let a = &wf.action;
    if r <= a.r_minus || r > a.r_max {
        return Err(Error::domain(format!("r = {r} outside ({}, {}]", a.r_minus, a.r_max)));
    }
    let d = r - a.r_plus;
    if d.abs() < TURNING_BAND * a.r_plus {
        let k = a.slope_plus;
        return Ok(wf.norm * pow(k, -1.0 / 6.0) * airy_ai(cbrt(k) * d)?);
    }
    let ad = d.abs();
    let z = 1.5 * ad * sqrt(ad) * a.g(r);
    let q = wf.q(r).abs();
    let sgn = if d > 0.0 { 1.0 } else { -1.0 };
    let z23 = cbrt(z * z);
    Ok(wf.norm * pow(z, 1.0 / 6.0) / sqrt(sqrt(q)) * airy_ai(sgn * z23)?)
}

/// Fock uniform wavefunction at `0 <= r < r+`.
pub fn fock_wavefunction(wf: &UniformWavefunction<'_>, r: f64) -> Result<f64> {
    let a = &wf.action;
    if !(r >= 0.0 && r < a.r_plus) {
        return Err(Error::domain(format!(
            "Fock wavefunction defined on [0, {}), got r = {r}",
            a.r_plus
        )));
    }
    if r == 0.0 {
        return Ok(0.0);
    }
    let s = a.total - a.langer(r)?;
    let q = -wf.q(r);
    Ok(wf.norm * sqrt(s) / sqrt(sqrt(q)) * bessel_j(1, s)?)
}

/// General Fock ansatz `C sqrt(S / S') J_{2l+1}(S)` for given phase data.
pub fn fock_ansatz(l: u32, c: f64, s: f64, s_prime: f64) -> Result<f64> {
    Ok(c * sqrt(s / s_prime) * bessel_j(2 * l + 1, s)?)
}

/// Relative residual `(Q^F - Q) / Q` of the s-wave Fock ansatz, where `Q^F`
/// is the potential for which the ansatz is exact. Uses direct quadrature
/// for `S` so the cancellation at small `r` stays resolved.
pub fn fock_residual(state: &StateLabel, energy: f64, params: &PotentialParams, r: f64) -> Result<f64> {
    require_s_state(state)?;
    let region = Region::new(state, energy, params, false)?;
    if !(r > 0.0 && r < region.r_plus) {
        return Err(Error::domain(format!("r = {r} outside (0, r+)")));
    }
    let s = fock_action_direct(&region, r);
    let [v, dv, d2v] = region.channel.effective_derivs(r);
    let q = v - energy;
    let sigma = 0.25 * d2v / (-q) + 5.0 / 16.0 * dv * dv / (q * q);
    Ok(-0.75 / (s * s) + sigma / q)
}

fn fock_action_direct(region: &Region<'_>, r: f64) -> f64 {
    let quad = RegionQuad::new();
    let p = |x: f64| (-region.q(x)).max(0.0);
    quad.region(&p, region.r_minus, region.inner_end(), r, End::Regular, Kernel::Sqrt)
}

/// Direct-quadrature Langer action (reference for the interpolant).
pub fn langer_action_direct(
    state: &StateLabel,
    energy: f64,
    params: &PotentialParams,
    allow_anomaly: bool,
    r: f64,
) -> Result<f64> {
    let region = Region::new(state, energy, params, allow_anomaly)?;
    let quad = RegionQuad::new();
    if r <= region.r_plus {
        if r < region.r_minus {
            return Err(Error::domain(format!("r = {r} below r- = {}", region.r_minus)));
        }
        let p = |x: f64| (-region.q(x)).max(0.0);
        let ea = if r == region.r_minus {
            region.inner_end()
        } else {
            End::Regular
        };
        Ok(quad.region(&p, r, ea, region.r_plus, region.plus_end(), Kernel::Sqrt))
    } else {
        let p = |x: f64| region.q(x).max(0.0);
        Ok(quad.region(&p, region.r_plus, region.plus_end(), r, End::Regular, Kernel::Sqrt))
    }
}

/// Direct-quadrature Fock action `\int_0^r sqrt(-Q)`.
pub fn fock_action_reference(state: &StateLabel, energy: f64, params: &PotentialParams, r: f64) -> Result<f64> {
    require_s_state(state)?;
    let region = Region::new(state, energy, params, false)?;
    if !(r >= 0.0 && r <= region.r_plus) {
        return Err(Error::domain(format!("r = {r} outside [0, r+]")));
    }
    Ok(fock_action_direct(&region, r))
}

/// `\int_{r-}^{r+} sqrt(-Q)` at `energy`.
pub fn total_action(state: &StateLabel, energy: f64, params: &PotentialParams, allow_anomaly: bool) -> Result<f64> {
    let region = Region::new(state, energy, params, allow_anomaly)?;
    Ok(region.total_action(&RegionQuad::new()))
}

/// Solves the quantization rule `S_total(E) = target * pi` for the defect.
fn quantize(state: &StateLabel, params: &PotentialParams, target: f64, allow_anomaly: bool) -> Result<(f64, f64)> {
    let n = f64::from(state.n);
    let quad = RegionQuad::new();
    let err: RefCell<Option<Error>> = RefCell::new(None);
    let f = |delta: f64| {
        let nu = n - delta;
        let e = -1.0 / (nu * nu);
        match Region::new(state, e, params, allow_anomaly) {
            Ok(region) => region.total_action(&quad) / PI - target,
            // the action shrinks to zero with the classical region
            Err(Error::NoBoundRegion { .. }) => -target,
            Err(e) => {
                err.borrow_mut().get_or_insert(e);
                f64::NAN
            }
        }
    };
    let (lo, hi) = (-0.5, n - 1.05);
    let (f_lo, f_hi) = (f(lo), f(hi));
    if let Some(e) = err.borrow_mut().take() {
        return Err(e);
    }
    if !(f_lo > 0.0 && f_hi < 0.0) {
        return Err(Error::Convergence {
            what: format!(
                "quantization bracket delta in [{lo}, {hi}] for n = {}, l = {}: f = ({f_lo}, {f_hi})",
                state.n, state.l
            ),
            iterations: 0,
            best_residual: f_lo.abs().min(f_hi.abs()),
        });
    }
    let delta = brent(f, lo, hi, 1e-13, 200).ok_or_else(|| Error::Convergence {
        what: format!("quantization for n = {}, l = {}", state.n, state.l),
        iterations: 200,
        best_residual: f64::NAN,
    })?;
    if let Some(e) = err.into_inner() {
        return Err(e);
    }
    let nu = n - delta;
    Ok((-1.0 / (nu * nu), delta))
}

/// s-state quantization `\int_0^{r+} sqrt(E - V_eff) dr = n pi`; returns `(E, delta_0)`.
pub fn quantize_s_states(n: u32, params: &PotentialParams) -> Result<(f64, f64)> {
    let state = StateLabel::upper(n, 0)?;
    quantize(&state, params, f64::from(n), false)
}

/// Langer quantization `\int_{r-}^{r+} sqrt(-Q^L) dr = (n - l - 1/2) pi` for `l >= 1`.
pub fn quantize_langer(state: &StateLabel, params: &PotentialParams, allow_anomaly: bool) -> Result<(f64, f64)> {
    if state.l == 0 {
        return quantize_s_states(state.n, params);
    }
    let target = f64::from(state.n) - f64::from(state.l) - 0.5;
    quantize(state, params, target, allow_anomaly)
}

/// Quasiclassical quantum defect of `state`.
pub fn quasiclassical_defect(state: &StateLabel, params: &PotentialParams, allow_anomaly: bool) -> Result<f64> {
    Ok(quantize_langer(state, params, allow_anomaly)?.1)
}

/// `d delta_0 / dn` by the central difference of [`quantize_s_states`] at `n +- 1`.
pub fn defect_slope(n: u32, params: &PotentialParams) -> Result<f64> {
    let (_, up) = quantize_s_states(n + 1, params)?;
    let (_, down) = quantize_s_states(n - 1, params)?;
    Ok(0.5 * (up - down))
}

/// Fermi-Segrè origin density `(Z/pi) (1 - d delta/dn) / (n - delta)^3`, a_B^-3.
pub fn fermi_segre_density(n: u32, delta: f64, d_delta_dn: f64, z: u32) -> f64 {
    let nu = f64::from(n) - delta;
    f64::from(z) / PI * (1.0 - d_delta_dn) / (nu * nu * nu)
}

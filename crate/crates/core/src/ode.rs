//! The second recursion read as a differential equation: vector fields,
//! trajectory integration with blow-up detection, nullclines, separatrix
//! search, and the quartic root of the four-loop photon input.
//!
//! Everything here is floating point; the exact layers feed in only through
//! series coefficients.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

fn sign(s: i64) -> f64 {
    if s < 0 {
        -1.0
    } else {
        1.0
    }
}

fn poly_eval(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

/// Plot window.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct Window {
    pub x: [f64; 2],
    pub y: [f64; 2],
}

impl Default for Window {
    fn default() -> Self {
        Window {
            x: [0.0, 1.0],
            y: [0.0, 1.0],
        }
    }
}

/// A differential-equation problem: the single equation
/// m g = P(x) - sign(s) g^2 + |s| x g g', or the two-residue quartic-theory
/// system with its fixed coupling structure.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum OdeSpec {
    Single {
        m: f64,
        s: i64,
        /// coefficients of P(x), constant term first
        p: Vec<f64>,
        #[serde(default)]
        window: Window,
    },
    System2 {
        s_plus: i64,
        s_minus: i64,
        p_plus: Vec<f64>,
        p_minus: Vec<f64>,
        #[serde(default)]
        window: Window,
    },
}

impl OdeSpec {
    pub fn toy(s: i64) -> Self {
        OdeSpec::Single {
            m: 1.0,
            s,
            p: vec![0.0, 1.0],
            window: Window::default(),
        }
    }

    pub fn window(&self) -> Window {
        match self {
            OdeSpec::Single { window, .. } | OdeSpec::System2 { window, .. } => *window,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            OdeSpec::Single { s, .. } => {
                if *s == 0 {
                    return Err(Error::BadInput("s must be nonzero".into()));
                }
            }
            OdeSpec::System2 { s_plus, s_minus, .. } => {
                if *s_plus == 0 || *s_minus == 0 {
                    return Err(Error::BadInput("s_plus and s_minus must be nonzero".into()));
                }
            }
        }
        Ok(())
    }
}

const SINGULAR_EPS: f64 = 1e-30;

/// Slope of the single equation: g' = (m g + sign(s) g^2 - P(x)) / (|s| x g).
pub fn rhs_single(x: f64, g: f64, spec: &OdeSpec) -> Result<f64> {
    let (m, s, p) = match spec {
        OdeSpec::Single { m, s, p, .. } => (*m, *s, p),
        _ => return Err(Error::BadInput("rhs_single needs a single-mode problem".into())),
    };
    let denom = s.abs() as f64 * x * g;
    if denom.abs() < SINGULAR_EPS {
        return Err(Error::SingularPoint { x, gamma: g });
    }
    Ok((m * g + sign(s) * g * g - poly_eval(p, x)) / denom)
}

/// The residual of the defining relation m g - P(x) + sign(s) g^2 - |s| x g g'
/// at a sampled point; vanishes identically on true solutions.
pub fn defining_residual(x: f64, g: f64, slope: f64, spec: &OdeSpec) -> Result<f64> {
    let (m, s, p) = match spec {
        OdeSpec::Single { m, s, p, .. } => (*m, *s, p),
        _ => return Err(Error::BadInput("single-mode only".into())),
    };
    Ok(m * g - poly_eval(p, x) + sign(s) * g * g - s.abs() as f64 * x * g * slope)
}

/// Slopes of the quartic-theory two-residue system:
/// (g+)' = (g+ - P+ - g+^2) / ((g+ + 2 g-) x),
/// (g-)' = (g- - P- + g-^2) / ((g+ + 2 g-) x).
/// Points where both numerators vanish are continued by zero; elsewhere a
/// vanishing beta factor is singular.
pub fn rhs_system(x: f64, g_plus: f64, g_minus: f64, spec: &OdeSpec) -> Result<(f64, f64)> {
    let (p_plus, p_minus) = match spec {
        OdeSpec::System2 { p_plus, p_minus, .. } => (p_plus, p_minus),
        _ => return Err(Error::BadInput("rhs_system needs a system2 problem".into())),
    };
    let num_plus = g_plus - poly_eval(p_plus, x) - g_plus * g_plus;
    let num_minus = g_minus - poly_eval(p_minus, x) + g_minus * g_minus;
    if num_plus == 0.0 && num_minus == 0.0 {
        return Ok((0.0, 0.0));
    }
    let denom = (g_plus + 2.0 * g_minus) * x;
    if denom.abs() < SINGULAR_EPS {
        return Err(Error::SingularPoint { x, gamma: g_plus + 2.0 * g_minus });
    }
    Ok((num_plus / denom, num_minus / denom))
}

/// How an integration ended.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Termination {
    ReachedRightEdge,
    Died,
    LeftWindow,
    StepUnderflow,
}

/// Sampled solution of the single equation; x strictly increasing.
#[derive(Clone, Debug)]
pub struct Trajectory {
    /// accepted steps as (x, gamma, slope)
    pub points: Vec<(f64, f64, f64)>,
    pub termination: Termination,
}

impl Trajectory {
    pub fn last(&self) -> (f64, f64, f64) {
        *self.points.last().expect("trajectory has at least the start")
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,gamma,slope\n");
        for (x, g, d) in &self.points {
            out.push_str(&format!("{x},{g},{d}\n"));
        }
        out
    }
}

/// Integration controls.
#[derive(Clone, Copy, Debug)]
pub struct IntegrateOptions {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
    /// gamma below this with negative slope counts as death
    pub death_eps: f64,
}

impl Default for IntegrateOptions {
    fn default() -> Self {
        IntegrateOptions {
            rtol: 1e-12,
            atol: 1e-14,
            max_steps: 2_000_000,
            death_eps: 1e-9,
        }
    }
}

// Dormand-Prince 5(4) coefficients.
const DP_C: [f64; 6] = [1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const DP_A: [&[f64]; 6] = [
    &[1.0 / 5.0],
    &[3.0 / 40.0, 9.0 / 40.0],
    &[44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0],
    &[19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0],
    &[
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
    ],
    &[
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const DP_B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// One adaptive RK5(4) driver over N-dimensional state. The death event is
/// also checked on step candidates: a trajectory plunging into a vertical
/// tangent rejects every step near the singularity, so waiting for an
/// accepted point would starve the event.
fn drive<const N: usize>(
    mut x: f64,
    mut y: [f64; N],
    x_end: f64,
    opts: &IntegrateOptions,
    f: &dyn Fn(f64, &[f64; N]) -> Result<[f64; N]>,
    mut on_accept: impl FnMut(f64, &[f64; N], &[f64; N]),
    death: impl Fn(f64, &[f64; N], &[f64; N]) -> bool,
    escape: impl Fn(f64, &[f64; N], &[f64; N]) -> bool,
) -> Termination {
    let mut k1 = match f(x, &y) {
        Ok(v) => v,
        Err(_) => return Termination::StepUnderflow,
    };
    on_accept(x, &y, &k1);
    if death(x, &y, &k1) {
        return Termination::Died;
    }
    if escape(x, &y, &k1) {
        return Termination::LeftWindow;
    }
    let mut h = ((x_end - x) / 100.0).min(1e-3).max(1e-12);
    let h_floor = 1e-14 * x_end.abs().max(1.0);
    for _ in 0..opts.max_steps {
        if x >= x_end {
            return Termination::ReachedRightEdge;
        }
        h = h.min(x_end - x);
        if h < h_floor {
            return Termination::StepUnderflow;
        }
        let mut ks: Vec<[f64; N]> = Vec::with_capacity(7);
        ks.push(k1);
        let mut failed_stage = false;
        for stage in 0..6 {
            let mut yi = y;
            for (j, kj) in ks.iter().enumerate() {
                let a = DP_A[stage][j];
                if a != 0.0 {
                    for d in 0..N {
                        yi[d] += h * a * kj[d];
                    }
                }
            }
            match f(x + DP_C[stage] * h, &yi) {
                Ok(k) => ks.push(k),
                Err(_) => {
                    failed_stage = true;
                    break;
                }
            }
        }
        if failed_stage {
            h *= 0.25;
            continue;
        }
        // 5th-order solution is the stage-6 argument (FSAL): b row = DP_A[5]
        let mut y5 = y;
        for (j, kj) in ks.iter().take(6).enumerate() {
            let b = DP_A[5][j];
            if b != 0.0 {
                for d in 0..N {
                    y5[d] += h * b * kj[d];
                }
            }
        }
        let mut err_norm = 0.0f64;
        for d in 0..N {
            let mut e = 0.0;
            for (j, kj) in ks.iter().enumerate() {
                let db = if j < 6 { DP_A[5][j] } else { 0.0 } - DP_B4[j];
                e += db * kj[d];
            }
            e *= h;
            let scale = opts.atol + opts.rtol * y[d].abs().max(y5[d].abs());
            err_norm += (e / scale) * (e / scale);
        }
        err_norm = (err_norm / N as f64).sqrt();
        // death is terminal even on a rejected candidate
        if death(x + h, &y5, &ks[6]) {
            on_accept(x + h, &y5, &ks[6]);
            return Termination::Died;
        }
        if err_norm <= 1.0 {
            x += h;
            y = y5;
            k1 = ks[6]; // FSAL
            on_accept(x, &y, &k1);
            if escape(x, &y, &k1) {
                return Termination::LeftWindow;
            }
        }
        let factor = if err_norm == 0.0 {
            5.0
        } else {
            (0.9 * err_norm.powf(-0.2)).clamp(0.2, 5.0)
        };
        h *= factor;
    }
    Termination::StepUnderflow
}

/// Integrate the single equation from (x0, g0) toward x_end, classifying the
/// outcome. Death (gamma -> 0+ with negative slope) is detected by an event
/// threshold rather than integrator failure.
pub fn integrate(spec: &OdeSpec, x0: f64, g0: f64, x_end: f64) -> Trajectory {
    integrate_opts(spec, x0, g0, x_end, &IntegrateOptions::default())
}

pub fn integrate_opts(
    spec: &OdeSpec,
    x0: f64,
    g0: f64,
    x_end: f64,
    opts: &IntegrateOptions,
) -> Trajectory {
    assert!(x0 > 0.0, "integration starts at x0 > 0");
    let window = spec.window();
    let mut points = Vec::new();
    let death_eps = opts.death_eps;
    let mut termination = drive(
        x0,
        [g0],
        x_end,
        opts,
        &|x, y| Ok([rhs_single(x, y[0], spec)?]),
        |x, y, k| points.push((x, y[0], k[0])),
        move |_x, y, k| (y[0] <= death_eps && k[0] < 0.0) || y[0] <= 0.0,
        move |_x, y, _k| y[0] > window.y[1].max(1e6),
    );
    // A plunge into the gamma -> 0+ vertical tangent stalls x-stepping
    // before the event threshold is reached: the solution goes like
    // sqrt(x_d - x) there. It is smooth in gamma, so finish the event by
    // marching gamma down (dx/dgamma = 1/slope) until the threshold fires.
    if termination == Termination::StepUnderflow {
        if let Some(&(x, g, slope)) = points.last() {
            if slope < 0.0 && g > 0.0 {
                let (mut x, mut g) = (x, g);
                let mut stalled = false;
                while g > death_eps {
                    let dg = -0.5 * g;
                    let s1 = match rhs_single(x, g, spec) {
                        Ok(v) if v < 0.0 => v,
                        _ => {
                            stalled = true;
                            break;
                        }
                    };
                    let x_half = x + 0.5 * dg / s1;
                    let s2 = match rhs_single(x_half, g + 0.5 * dg, spec) {
                        Ok(v) if v < 0.0 => v,
                        _ => {
                            stalled = true;
                            break;
                        }
                    };
                    x += dg / s2;
                    g += dg;
                    points.push((x, g, s2));
                }
                if !stalled {
                    termination = Termination::Died;
                }
            }
        }
    }
    Trajectory { points, termination }
}

/// Two-component trajectory of the quartic-theory system.
#[derive(Clone, Debug)]
pub struct Trajectory2 {
    /// (x, g+, g-, slope+, slope-)
    pub points: Vec<(f64, f64, f64, f64, f64)>,
    pub termination: Termination,
}

impl Trajectory2 {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,g_plus,g_minus,slope_plus,slope_minus\n");
        for (x, gp, gm, dp, dm) in &self.points {
            out.push_str(&format!("{x},{gp},{gm},{dp},{dm}\n"));
        }
        out
    }
}

pub fn integrate_system(
    spec: &OdeSpec,
    x0: f64,
    g0: (f64, f64),
    x_end: f64,
    opts: &IntegrateOptions,
) -> Trajectory2 {
    assert!(x0 > 0.0);
    let window = spec.window();
    let bound = window.y[1].abs().max(1e6);
    let mut points = Vec::new();
    let death_eps = opts.death_eps;
    let termination = drive(
        x0,
        [g0.0, g0.1],
        x_end,
        opts,
        &|x, y| {
            let (dp, dm) = rhs_system(x, y[0], y[1], spec)?;
            Ok([dp, dm])
        },
        |x, y, k| points.push((x, y[0], y[1], k[0], k[1])),
        move |_x, y, _k| (y[0] + 2.0 * y[1]).abs() <= death_eps,
        move |_x, y, _k| y[0].abs() > bound || y[1].abs() > bound,
    );
    Trajectory2 { points, termination }
}

/// The flat-slope curve y = (-1 + sqrt(1 + 4 sign(s) P(x))) / 2.
pub fn nullcline(spec: &OdeSpec, x: f64) -> Result<f64> {
    let (s, p) = match spec {
        OdeSpec::Single { s, p, .. } => (*s, p),
        _ => return Err(Error::BadInput("nullcline applies to single mode".into())),
    };
    let disc = 1.0 + 4.0 * sign(s) * poly_eval(p, x);
    if disc < 0.0 {
        return Err(Error::DomainError(format!(
            "1 + 4 sign(s) P(x) = {disc} < 0 at x = {x}"
        )));
    }
    Ok((-1.0 + disc.sqrt()) / 2.0)
}

/// Anomalous-dimension series coefficients of the differential equation,
/// gamma_{1,n} = p(n) + sum (|s| j - sign(s)) gamma_{1,j} gamma_{1,n-j},
/// computed in floating point from the P-coefficients.
pub fn asymptotic_coefficients(spec: &OdeSpec, n_terms: usize) -> Result<Vec<f64>> {
    let (m, s, p) = match spec {
        OdeSpec::Single { m, s, p, .. } => (*m, *s, p),
        _ => return Err(Error::BadInput("single mode only".into())),
    };
    if s == 0 {
        return Err(Error::BadInput("s must be nonzero".into()));
    }
    // remove m by g -> m g, P -> m^2 P, i.e. run the m = 1 recursion on
    // P/m^2 and scale back by m
    let mut g = vec![0.0; n_terms + 1];
    for n in 1..=n_terms {
        let mut acc = if n < p.len() { p[n] / (m * m) } else { 0.0 };
        for j in 1..n {
            acc += (s.abs() as f64 * j as f64 - sign(s)) * g[j] * g[n - j];
        }
        g[n] = acc;
    }
    Ok(g.iter().skip(1).map(|v| v * m).collect())
}

fn classify(spec: &OdeSpec, x0: f64, g0: f64, x_probe: f64, opts: &IntegrateOptions) -> bool {
    // true = escaped (reached the probe or left through the top)
    match integrate_opts(spec, x0, g0, x_probe, opts).termination {
        Termination::ReachedRightEdge | Termination::LeftWindow => true,
        Termination::Died | Termination::StepUnderflow => false,
    }
}

/// Bisect the initial value separating dying from escaping trajectories at
/// fixed x0, classified at x_probe. The bracket is seeded from the first
/// four terms of the asymptotic expansion and widened geometrically until
/// it straddles the boundary.
pub fn separatrix_search(spec: &OdeSpec, x0: f64, x_probe: f64) -> Result<f64> {
    let opts = IntegrateOptions::default();
    let coeffs = asymptotic_coefficients(spec, 5)?;
    let seed: f64 = (1..=4).map(|n| coeffs[n - 1] * x0.powi(n as i32)).sum();
    let next_term = (coeffs[4] * x0.powi(5)).abs();
    let mut delta = (10.0 * next_term).max(1e-12 * seed.abs()).max(1e-14);

    let mut lo = seed - delta;
    let mut hi = seed + delta;
    let mut lo_class = classify(spec, x0, lo, x_probe, &opts);
    let mut hi_class = classify(spec, x0, hi, x_probe, &opts);
    let mut tries = 0;
    while lo_class == hi_class {
        tries += 1;
        if tries > 60 {
            return Err(Error::NoBracket(if lo_class { "escaped" } else { "died" }));
        }
        delta *= 2.0;
        lo = seed - delta;
        hi = seed + delta;
        if lo <= 0.0 {
            lo = 1e-12 * seed.abs().max(1e-12);
        }
        lo_class = classify(spec, x0, lo, x_probe, &opts);
        hi_class = classify(spec, x0, hi, x_probe, &opts);
    }
    // invariant: below dies, above escapes
    if lo_class {
        std::mem::swap(&mut lo, &mut hi);
    }
    bisect_bracket(spec, x0, x_probe, lo, hi, &opts)
}

/// Bisection on an explicit (dying, escaping) bracket to 1e-10.
pub fn bisect_bracket(
    spec: &OdeSpec,
    x0: f64,
    x_probe: f64,
    mut dying: f64,
    mut escaping: f64,
    opts: &IntegrateOptions,
) -> Result<f64> {
    let dying_class = classify(spec, x0, dying, x_probe, opts);
    let escaping_class = classify(spec, x0, escaping, x_probe, opts);
    if dying_class == escaping_class {
        return Err(Error::NoBracket(if dying_class { "escaped" } else { "died" }));
    }
    if dying_class {
        std::mem::swap(&mut dying, &mut escaping);
    }
    while (escaping - dying).abs() > 1e-10 {
        let mid = 0.5 * (dying + escaping);
        if classify(spec, x0, mid, x_probe, opts) {
            escaping = mid;
        } else {
            dying = mid;
        }
    }
    Ok(0.5 * (dying + escaping))
}

/// Bisection root of a polynomial on (lo, hi) to 1e-8; requires a sign
/// change at the endpoints.
pub fn qed_p_root(p: &[f64], lo: f64, hi: f64) -> Result<f64> {
    let (mut lo, mut hi) = (lo, hi);
    let (flo, fhi) = (poly_eval(p, lo), poly_eval(p, hi));
    if !(flo * fhi < 0.0) {
        return Err(Error::NoSignChange { lo, hi });
    }
    let rising = flo < 0.0;
    while hi - lo > 1e-8 {
        let mid = 0.5 * (lo + hi);
        let fm = poly_eval(p, mid);
        if (fm < 0.0) == rising {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Normalized direction field sampled on a grid; singular points are
/// omitted (masked).
#[derive(Clone, Debug)]
pub struct FieldData {
    /// rows (x, gamma, dx, dgamma) with dx^2 + dgamma^2 = 1
    pub rows: Vec<(f64, f64, f64, f64)>,
    pub grid: (usize, usize),
    pub window: Window,
}

impl FieldData {
    /// Whitespace-delimited columns x gamma dx dgamma.
    pub fn to_dat(&self) -> String {
        let mut out = String::new();
        for (x, g, dx, dg) in &self.rows {
            out.push_str(&format!("{x} {g} {dx} {dg}\n"));
        }
        out
    }
}

/// Evaluate the normalized slope field of the single equation on a
/// `w` x `h` grid over the spec window.
pub fn emit_field(spec: &OdeSpec, w: usize, h: usize) -> Result<FieldData> {
    if !matches!(spec, OdeSpec::Single { .. }) {
        return Err(Error::BadInput(
            "field grids apply to single mode; integrate trajectories for systems".into(),
        ));
    }
    assert!(w >= 2 && h >= 2, "grid needs at least 2x2 points");
    let window = spec.window();
    let mut rows = Vec::new();
    for i in 0..w {
        let x = window.x[0] + (window.x[1] - window.x[0]) * i as f64 / (w - 1) as f64;
        for j in 0..h {
            let g = window.y[0] + (window.y[1] - window.y[0]) * j as f64 / (h - 1) as f64;
            match rhs_single(x, g, spec) {
                Err(_) => continue, // masked
                Ok(v) => {
                    let norm = (1.0 + v * v).sqrt();
                    rows.push((x, g, 1.0 / norm, v / norm));
                }
            }
        }
    }
    Ok(FieldData {
        rows,
        grid: (w, h),
        window,
    })
}

/// Principal branch of the Lambert W function by Halley iteration.
pub fn lambert_w0(z: f64) -> Result<f64> {
    const INV_E: f64 = 1.0 / std::f64::consts::E;
    if z < -INV_E {
        return Err(Error::DomainError(format!(
            "lambert_w0 needs z >= -1/e, got {z}"
        )));
    }
    if z == 0.0 {
        return Ok(0.0);
    }
    let mut w = if z < 1.0 {
        // series seed near 0
        z * (1.0 - z + 1.5 * z * z)
    } else {
        let l = z.ln();
        l - l.ln().max(0.0)
    };
    for _ in 0..64 {
        let ew = w.exp();
        let f = w * ew - z;
        let denom = ew * (w + 1.0) - (w + 2.0) * f / (2.0 * w + 2.0);
        let step = f / denom;
        w -= step;
        if step.abs() <= 1e-16 * (1.0 + w.abs()) {
            break;
        }
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy(s: i64) -> OdeSpec {
        OdeSpec::toy(s)
    }

    #[test]
    fn rhs_values() {
        // on the nullcline of the s=2 toy: numerator 1/2 + 1/4 - 3/4 = 0
        assert_eq!(rhs_single(0.75, 0.5, &toy(2)).unwrap(), 0.0);
        // s=1 along g = x the slope is identically 1
        for x in [0.1, 0.3, 0.7, 1.0] {
            assert!((rhs_single(x, x, &toy(1)).unwrap() - 1.0).abs() < 1e-15);
        }
        assert!(matches!(
            rhs_single(0.5, 0.0, &toy(2)),
            Err(Error::SingularPoint { .. })
        ));
    }

    #[test]
    fn rhs_system_values() {
        let spec = OdeSpec::System2 {
            s_plus: -1,
            s_minus: 2,
            p_plus: vec![0.0],
            p_minus: vec![0.0],
            window: Window::default(),
        };
        // with P = 0 the zero trajectory carries a zero field
        assert_eq!(rhs_system(0.5, 0.0, 0.0, &spec).unwrap(), (0.0, 0.0));
        // the printed asymmetry: +g-^2 vs -g+^2 in the numerators
        let (dp, dm) = rhs_system(1.0, 0.2, 0.1, &spec).unwrap();
        let beta = 0.2 + 2.0 * 0.1;
        assert!((dp - (0.2 - 0.04) / beta).abs() < 1e-15);
        assert!((dm - (0.1 + 0.01) / beta).abs() < 1e-15);
        // beta = 0 locus is singular
        let spec2 = OdeSpec::System2 {
            s_plus: -1,
            s_minus: 2,
            p_plus: vec![0.0, 1.0],
            p_minus: vec![0.0, 1.0],
            window: Window::default(),
        };
        assert!(matches!(
            rhs_system(0.5, 0.2, -0.1, &spec2),
            Err(Error::SingularPoint { .. })
        ));
    }

    #[test]
    fn s1_exact_solution_reproduced() {
        let t = integrate(&toy(1), 0.1, 0.1, 1.0);
        assert_eq!(t.termination, Termination::ReachedRightEdge);
        let (x, g, _) = t.last();
        assert!((x - 1.0).abs() < 1e-12);
        assert!((g - 1.0).abs() < 1e-6, "gamma(1) = {g}");
        // residual of the defining relation along the way
        for &(x, g, d) in &t.points {
            assert!(defining_residual(x, g, d, &toy(1)).unwrap().abs() < 1e-6);
        }
    }

    #[test]
    fn below_nullcline_dies() {
        // nullcline at x=0.5 is ~0.366; start below it
        let t = integrate(&toy(2), 0.5, 0.2, 2.0);
        assert_eq!(t.termination, Termination::Died);
        let (x_end, _, _) = t.last();
        assert!(x_end < 2.0);
    }

    #[test]
    fn lambert_w_family_residuals() {
        // gamma_C(x) = x + x W(C e^{-(1+x)/x}) solves the s=1 toy for any C;
        // gamma' = 1 + W + W/(x (1+W))
        for c in [0.5, 1.0, 2.0] {
            for i in 1..=20 {
                let x = 0.1 + 0.9 * (i as f64) / 20.0;
                let z = c * (-(1.0 + x) / x).exp();
                let w = lambert_w0(z).unwrap();
                let g = x + x * w;
                let slope = 1.0 + w + w / (x * (1.0 + w));
                let rhs = rhs_single(x, g, &toy(1)).unwrap();
                assert!(
                    (slope - rhs).abs() < 1e-8,
                    "C={c} x={x}: {slope} vs {rhs}"
                );
            }
        }
    }

    #[test]
    fn lambert_w_basics() {
        assert!((lambert_w0(std::f64::consts::E).unwrap() - 1.0).abs() < 1e-12);
        assert!(lambert_w0(0.0).unwrap() == 0.0);
        // w e^w round trip across magnitudes
        for &w in &[-0.9, -0.5, -0.1, 0.1, 1.0, 3.0, 10.0] {
            let z = w * (w as f64).exp();
            assert!((lambert_w0(z).unwrap() - w).abs() < 1e-10, "w={w}");
        }
        assert!(lambert_w0(-1.0).is_err());
    }

    #[test]
    fn nullcline_values_and_sign_flip() {
        assert!((nullcline(&toy(2), 0.75).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(nullcline(&toy(2), 0.0).unwrap(), 0.0);
        // the s < 0 branch of the printed formula
        assert!((nullcline(&toy(-2), 0.25).unwrap() + 0.5).abs() < 1e-15);
        assert!(nullcline(&toy(-2), 0.3).is_err());
        // slope changes sign across the curve (s = 2 toy, 50 samples)
        for i in 1..=50 {
            let x = i as f64 / 51.0;
            let y = nullcline(&toy(2), x).unwrap();
            let d = (y / 2.0).min(0.01).max(1e-6);
            let above = rhs_single(x, y + d, &toy(2)).unwrap();
            let below = rhs_single(x, y - d, &toy(2)).unwrap();
            assert!(above > 0.0 && below < 0.0, "x={x}");
        }
    }

    #[test]
    fn asymptotic_series_matches_recursion() {
        let c = asymptotic_coefficients(&toy(2), 5).unwrap();
        assert_eq!(&c[..5], &[1.0, 1.0, 4.0, 27.0, 248.0]);
        // m = 2 rescaling: gamma -> m gamma with P -> P/m^2 keeps c1 = p1/m
        let qed2 = OdeSpec::Single {
            m: 2.0,
            s: 1,
            p: vec![0.0, 1.0 / 3.0, 0.25],
            window: Window::default(),
        };
        let c = asymptotic_coefficients(&qed2, 3).unwrap();
        assert!((c[0] - 1.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn separatrix_seed_consistency() {
        // s=2 toy at x0 = 0.01: the bisected initial value sits within the
        // truncation error of the 4-term asymptotic series
        let x0 = 0.01;
        let g0 = separatrix_search(&toy(2), x0, 1.0).unwrap();
        let series4: f64 = [1.0, 1.0, 4.0, 27.0]
            .iter()
            .enumerate()
            .map(|(i, c)| c * x0.powi(i as i32 + 1))
            .sum();
        let bound = 10.0 * 248.0 * x0.powi(5);
        assert!(
            (g0 - series4).abs() < bound,
            "g0 = {g0}, series = {series4}, bound = {bound}"
        );
    }

    #[test]
    fn separatrix_s1_degenerate() {
        // the separatrix of the s=1 toy is gamma = x itself
        let x0 = 0.05;
        let g0 = separatrix_search(&toy(1), x0, 1.0).unwrap();
        assert!((g0 - x0).abs() < 1e-8, "g0 = {g0}");
    }

    #[test]
    fn no_bracket_below_nullcline() {
        // a bracket entirely in the dying region
        let err = bisect_bracket(
            &toy(2),
            0.5,
            1.5,
            0.05,
            0.10,
            &IntegrateOptions::default(),
        );
        assert_eq!(err, Err(Error::NoBracket("died")));
    }

    #[test]
    fn qed_quartic_root() {
        let p4 = [0.0, 1.0 / 3.0, 0.25, -0.0312 + 0.06037, -0.6755 + 0.05074];
        let root = qed_p_root(&p4, 0.9, 1.1).unwrap();
        assert!((root - 0.992).abs() < 1e-3, "root = {root}");
        // 2-loop input is positive on (0, 10)
        let p2 = [0.0, 1.0 / 3.0, 0.25];
        assert!(matches!(
            qed_p_root(&p2, 0.0, 10.0),
            Err(Error::NoSignChange { .. })
        ));
        assert!(matches!(
            qed_p_root(&[0.0, 1.0], 0.0, 10.0),
            Err(Error::NoSignChange { .. })
        ));
    }

    #[test]
    fn field_masks_and_nullcline_markers() {
        let field = emit_field(&toy(2), 30, 30).unwrap();
        // the gamma = 0 row is fully masked
        assert!(field.rows.iter().all(|(_, g, _, _)| *g != 0.0));
        // flattest marker per column tracks the nullcline within resolution
        let res = 1.0 / 29.0;
        for i in 1..30 {
            let x = i as f64 / 29.0;
            let col: Vec<_> = field
                .rows
                .iter()
                .filter(|(px, _, _, _)| (px - x).abs() < 1e-12)
                .collect();
            let flattest = col
                .iter()
                .min_by(|a, b| a.3.abs().partial_cmp(&b.3.abs()).unwrap())
                .unwrap();
            let expect = nullcline(&toy(2), x).unwrap();
            assert!(
                (flattest.1 - expect).abs() <= res + 1e-12,
                "x={x}: marker {} vs nullcline {expect}",
                flattest.1
            );
        }
        // negative-s field renders
        let field = emit_field(&toy(-2), 10, 10).unwrap();
        assert!(!field.rows.is_empty());
    }
}

//! Archimedean densities by adaptive Gauss–Kronrod quadrature.
//!
//! With `s_i = ‖y_i‖` and the angular variables integrated out, both
//! densities become a constant times
//!
//! `I = ∫∫ exp(-max(0, u1, u2, -u1-u2)) du1 du2`,   `u_i = log s_i`.
//!
//! For a complex place, `dy` is twice Lebesgue measure on `ℂ`, and in polar
//! coordinates `2 · r dr dθ = ds dθ`. Each factor therefore contributes
//! `2π ds/s = 2π du`. For a real place, `dy/|y|` on `ℝ^×` is `2 du`.

use serde::Serialize;

/// Kind of archimedean place.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PlaceKind {
    Real,
    Complex,
}

const GAUSS_WEIGHTS: [f64; 4] = [
    0.417959183673469387755102040816327,
    0.381830050505118944950369775488975,
    0.279705391489276667901467771423780,
    0.129484966168869693270611432679082,
];

const KRONROD_NODES: [f64; 8] = [
    0.0,
    0.207784955007898467600689403773245,
    0.405845151377397166906606412076961,
    0.586087235467691130294144845693013,
    0.741531185599394439863864773280788,
    0.864864423359769072789712788640926,
    0.949107912342758524526189684047851,
    0.991455371120812639206854697526329,
];

const KRONROD_WEIGHTS: [f64; 8] = [
    0.209482141084727828012999174891714,
    0.204432940075298892414161999234649,
    0.190350578064785409913256402421014,
    0.169004726639267902826583426598550,
    0.140653259715525918745189590510238,
    0.104790010322250183839876322541518,
    0.063092092629978553290700663189204,
    0.022935322010529224963732008058970,
];

/// One G7/K15 step: `(kronrod, |kronrod - gauss|)`.
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let centre = f(mid);
    let mut kronrod = KRONROD_WEIGHTS[0] * centre;
    let mut gauss = GAUSS_WEIGHTS[0] * centre;
    for i in 1..8 {
        let dx = half * KRONROD_NODES[i];
        let pair = f(mid - dx) + f(mid + dx);
        kronrod += KRONROD_WEIGHTS[i] * pair;
        if i % 2 == 0 {
            gauss += GAUSS_WEIGHTS[i / 2] * pair;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

/// Adaptive bisection until the local error estimate falls below `tol`.
pub(crate) fn integrate<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    fn step<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
        let (value, err) = gk15(f, a, b);
        if err <= tol || depth == 0 {
            return value;
        }
        let mid = 0.5 * (a + b);
        step(f, a, mid, 0.5 * tol, depth - 1) + step(f, mid, b, 0.5 * tol, depth - 1)
    }
    step(f, a, b, tol, 40)
}

/// [`integrate`] over `[a, b]` split at the given interior break points.
pub(crate) fn integrate_pieces<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, breaks: &[f64], tol: f64) -> f64 {
    let mut points: Vec<f64> = breaks.iter().copied().filter(|&x| a < x && x < b).collect();
    points.push(a);
    points.push(b);
    points.sort_by(f64::total_cmp);
    points.dedup();
    let pieces = (points.len() - 1) as f64;
    points
        .windows(2)
        .map(|w| integrate(f, w[0], w[1], tol / pieces))
        .sum()
}

/// Half-width of the square in log coordinates. Outside it the integrand is
/// below `exp(-L/2)`, and the neglected mass is far below `1e-12`.
const LOG_WINDOW: f64 = 80.0;

fn log_integrand(u1: f64, u2: f64) -> f64 {
    (-(0f64.max(u1).max(u2).max(-u1 - u2))).exp()
}

/// The integrand in the original coordinates `s_i = ‖y_i‖`, before the
/// logarithmic substitution.
pub fn density_integrand(s1: f64, s2: f64) -> f64 {
    1.0 / (1f64.max(s1).max(s2).max(1.0 / (s1 * s2)) * s1 * s2)
}

/// `I` by nested adaptive quadrature, split along the lines where the
/// maximum changes branch.
pub fn log_density_integral() -> f64 {
    let tol = 1e-12;
    let inner = |u1: f64| {
        let breaks = [u1, -2.0 * u1, -0.5 * u1, 0.0, -u1];
        integrate_pieces(&|u2| log_integrand(u1, u2), -LOG_WINDOW, LOG_WINDOW, &breaks, tol)
    };
    integrate_pieces(&inner, -LOG_WINDOW, LOG_WINDOW, &[0.0], tol)
}

pub fn archimedean_density(kind: PlaceKind) -> f64 {
    let per_factor = match kind {
        PlaceKind::Real => 2.0,
        PlaceKind::Complex => 2.0 * std::f64::consts::PI,
    };
    per_factor * per_factor * log_density_integral()
}

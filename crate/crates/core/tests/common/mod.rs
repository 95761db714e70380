//! Test-only oracles, independent of the library's quadrature path.

#![allow(dead_code, clippy::excessive_precision)]

// Gauss–Kronrod 7/15 abscissae and weights on [-1, 1].
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn gk15(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let x = h * XGK[j];
        let s = f(c - x) + f(c + x);
        kronrod += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    (kronrod * h, ((kronrod - gauss) * h).abs())
}

/// Globally adaptive Gauss–Kronrod with absolute tolerance `tol`.
pub fn adaptive(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let mut pieces = vec![(a, b, gk15(f, a, b))];
    for _ in 0..20_000 {
        let err: f64 = pieces.iter().map(|p| p.2 .1).sum();
        if err <= tol {
            break;
        }
        let worst = pieces
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .2 .1.total_cmp(&y.1 .2 .1))
            .map(|(i, _)| i)
            .unwrap();
        let (lo, hi, _) = pieces.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        pieces.push((lo, mid, gk15(f, lo, mid)));
        pieces.push((mid, hi, gk15(f, mid, hi)));
    }
    pieces.iter().map(|p| p.2 .0).sum()
}

/// `∫_0^s h(t) (s−t)^α t^β dt`, split at `s/2`; each half uses `u = v^4`
/// towards its singular endpoint so the transformed integrand is smooth.
pub fn weighted_integral(h: &dyn Fn(f64) -> f64, alpha: f64, beta: f64, s: f64, tol: f64) -> f64 {
    if s == 0.0 {
        return 0.0;
    }
    let half = 0.5 * s;
    // t = half * v^4, dt = 4 half v^3 dv
    let left = |v: f64| {
        let t = half * v.powi(4);
        h(t) * (s - t).powf(alpha) * t.powf(beta) * 4.0 * half * v.powi(3)
    };
    // s − t = half * v^4
    let right = |v: f64| {
        let u = half * v.powi(4);
        let t = s - u;
        h(t) * u.powf(alpha) * t.powf(beta) * 4.0 * half * v.powi(3)
    };
    adaptive(&left, 0.0, 1.0, 0.5 * tol) + adaptive(&right, 0.0, 1.0, 0.5 * tol)
}

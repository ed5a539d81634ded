//! Central finite differences, optionally Richardson extrapolated.

fn central(f: &dyn Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (f(x + h) - f(x - h)) / (2.0 * h)
}

/// First derivative of a scalar function.
pub fn derivative(f: &dyn Fn(f64) -> f64, x: f64, h: f64, richardson: bool) -> f64 {
    if richardson {
        (4.0 * central(f, x, h / 2.0) - central(f, x, h)) / 3.0
    } else {
        central(f, x, h)
    }
}

fn step3(x: [f64; 3], i: usize, h: f64) -> [f64; 3] {
    let mut y = x;
    y[i] += h;
    y
}

/// Gradient of f: R^3 -> R with steps `h * max(|x_i|, 1e-3)`.
pub fn gradient3(f: &dyn Fn([f64; 3]) -> f64, x: [f64; 3], h: f64, richardson: bool) -> [f64; 3] {
    let mut g = [0.0; 3];
    for i in 0..3 {
        let hi = h * x[i].abs().max(1e-3);
        let fi = |t: f64| f(step3(x, i, t - x[i]));
        g[i] = derivative(&fi, x[i], hi, richardson);
    }
    g
}

fn mixed(f: &dyn Fn([f64; 3]) -> f64, x: [f64; 3], i: usize, j: usize, hi: f64, hj: f64) -> f64 {
    if i == j {
        let fp = f(step3(x, i, hi));
        let fm = f(step3(x, i, -hi));
        return (fp - 2.0 * f(x) + fm) / (hi * hi);
    }
    let pp = f(step3(step3(x, i, hi), j, hj));
    let pm = f(step3(step3(x, i, hi), j, -hj));
    let mp = f(step3(step3(x, i, -hi), j, hj));
    let mm = f(step3(step3(x, i, -hi), j, -hj));
    (pp - pm - mp + mm) / (4.0 * hi * hj)
}

/// Hessian of f: R^3 -> R, symmetric by construction.
pub fn hessian3(f: &dyn Fn([f64; 3]) -> f64, x: [f64; 3], h: f64, richardson: bool) -> [[f64; 3]; 3] {
    let mut hs = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in i..3 {
            let hi = h * x[i].abs().max(1e-3);
            let hj = h * x[j].abs().max(1e-3);
            let v = if richardson {
                (4.0 * mixed(f, x, i, j, hi / 2.0, hj / 2.0) - mixed(f, x, i, j, hi, hj)) / 3.0
            } else {
                mixed(f, x, i, j, hi, hj)
            };
            hs[i][j] = v;
            hs[j][i] = v;
        }
    }
    hs
}

//! Small local optimisers: Nelder-Mead simplex descent and a
//! Levenberg-Marquardt polish for least-squares problems.

use nalgebra::{DMatrix, DVector};

#[derive(Clone, Debug)]
pub struct NelderMeadOptions {
    pub max_evals: usize,
    /// Stop when the spread of function values in the simplex drops below this.
    pub ftol: f64,
    /// ... and the simplex diameter below this.
    pub xtol: f64,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        Self {
            max_evals: 4000,
            ftol: 1e-20,
            xtol: 1e-10,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub evals: usize,
}

/// Nelder-Mead with dimension-adaptive coefficients (Gao and Han), started
/// from the axis-aligned simplex `x0 + step * e_i`.
pub fn nelder_mead<F>(mut f: F, x0: &[f64], step: f64, opts: &NelderMeadOptions) -> Minimum
where
    F: FnMut(&[f64]) -> f64,
{
    let n = x0.len();
    let nf = n as f64;
    let (alpha, beta, gamma, delta) = (1.0, 1.0 + 2.0 / nf, 0.75 - 0.5 / nf, 1.0 - 1.0 / nf);

    let mut evals = 0;
    let mut eval = |x: &[f64], evals: &mut usize| {
        *evals += 1;
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    simplex.push((x0.to_vec(), eval(x0, &mut evals)));
    for i in 0..n {
        let mut x = x0.to_vec();
        x[i] += step;
        let v = eval(&x, &mut evals);
        simplex.push((x, v));
    }

    let along = |c: &[f64], w: &[f64], coef: f64| -> Vec<f64> {
        c.iter()
            .zip(w)
            .map(|(ci, wi)| ci + coef * (ci - wi))
            .collect()
    };

    while evals < opts.max_evals {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let best = simplex[0].1;
        let worst = simplex[n].1;
        let diameter = simplex[1..]
            .iter()
            .map(|(x, _)| {
                x.iter()
                    .zip(&simplex[0].0)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max);
        if worst - best <= opts.ftol && diameter <= opts.xtol {
            break;
        }

        let mut centroid = vec![0.0; n];
        for (x, _) in &simplex[..n] {
            for (c, xi) in centroid.iter_mut().zip(x) {
                *c += xi / nf;
            }
        }

        let xr = along(&centroid, &simplex[n].0, alpha);
        let fr = eval(&xr, &mut evals);
        if fr < best {
            let xe = along(&centroid, &simplex[n].0, alpha * beta);
            let fe = eval(&xe, &mut evals);
            simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
            continue;
        }
        if fr < simplex[n - 1].1 {
            simplex[n] = (xr, fr);
            continue;
        }
        let (xc, fc) = if fr < worst {
            let xc = along(&centroid, &simplex[n].0, alpha * gamma);
            let fc = eval(&xc, &mut evals);
            (xc, fc)
        } else {
            let xc = along(&centroid, &simplex[n].0, -gamma);
            let fc = eval(&xc, &mut evals);
            (xc, fc)
        };
        if fc < fr.min(worst) {
            simplex[n] = (xc, fc);
            continue;
        }
        let x_best = simplex[0].0.clone();
        for (x, v) in simplex[1..].iter_mut() {
            for (xi, bi) in x.iter_mut().zip(&x_best) {
                *xi = bi + delta * (*xi - bi);
            }
            *v = eval(x, &mut evals);
        }
    }

    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (x, value) = simplex.swap_remove(0);
    Minimum { x, value, evals }
}

#[derive(Clone, Debug)]
pub struct LeastSquares {
    pub x: Vec<f64>,
    /// Sum of squared residuals.
    pub cost: f64,
    pub iterations: usize,
}

/// Levenberg-Marquardt on `sum r_i(x)^2` with a central-difference Jacobian.
pub fn levenberg_marquardt<F>(mut r: F, x0: &[f64], max_iter: usize) -> LeastSquares
where
    F: FnMut(&[f64]) -> Vec<f64>,
{
    let n = x0.len();
    let cost_of = |v: &[f64]| v.iter().map(|e| e * e).sum::<f64>();
    let mut x = x0.to_vec();
    let mut res = r(&x);
    let mut cost = cost_of(&res);
    let mut mu = 1e-3;
    let mut iterations = 0;

    while iterations < max_iter && cost.is_finite() && cost > 0.0 {
        iterations += 1;
        let m = res.len();
        let mut jac = DMatrix::<f64>::zeros(m, n);
        for j in 0..n {
            let h = 1e-6 * x[j].abs().max(1.0);
            let mut xp = x.clone();
            let mut xm = x.clone();
            xp[j] += h;
            xm[j] -= h;
            let (rp, rm) = (r(&xp), r(&xm));
            for i in 0..m {
                jac[(i, j)] = (rp[i] - rm[i]) / (2.0 * h);
            }
        }
        let rv = DVector::from_vec(res.clone());
        let jtj = jac.transpose() * &jac;
        let g = jac.transpose() * rv;

        let mut improved = false;
        for _ in 0..12 {
            let mut a = jtj.clone();
            for i in 0..n {
                a[(i, i)] += mu * jtj[(i, i)].max(1e-12);
            }
            let Some(chol) = a.cholesky() else {
                mu *= 4.0;
                continue;
            };
            let step = chol.solve(&(-&g));
            let trial: Vec<f64> = x.iter().zip(step.iter()).map(|(a, b)| a + b).collect();
            let tres = r(&trial);
            let tcost = cost_of(&tres);
            if tcost < cost {
                let small =
                    step.amax() <= 1e-15 * (1.0 + x.iter().fold(0.0f64, |m, v| m.max(v.abs())));
                x = trial;
                res = tres;
                cost = tcost;
                mu = (mu / 3.0).max(1e-12);
                improved = true;
                if small {
                    return LeastSquares {
                        x,
                        cost,
                        iterations,
                    };
                }
                break;
            }
            mu *= 4.0;
        }
        if !improved {
            break;
        }
    }
    LeastSquares {
        x,
        cost,
        iterations,
    }
}

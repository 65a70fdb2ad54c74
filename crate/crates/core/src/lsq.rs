//! Damped least squares (Levenberg–Marquardt) for small dense systems with a
//! central-difference Jacobian.

use nalgebra::{SMatrix, SVector};

#[derive(Clone, Copy, Debug)]
pub(crate) struct LmOptions {
    pub max_iterations: usize,
    /// Stop once the residual sup-norm drops below this.
    pub tolerance: f64,
    pub initial_damping: f64,
    pub fd_step: f64,
}

impl Default for LmOptions {
    fn default() -> Self {
        LmOptions {
            max_iterations: 200,
            tolerance: 1e-12,
            initial_damping: 1e-3,
            fd_step: 1e-7,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct LmOutcome<const N: usize> {
    pub x: [f64; N],
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
}

fn sup_norm<const M: usize>(r: &SVector<f64, M>) -> f64 {
    r.iter().fold(0.0f64, |m, v| m.max(v.abs()))
}

/// Minimizes `|f(x)|²` from `x0`. `f` returns `None` where it is undefined;
/// such trial points count as failed steps.
pub(crate) fn levenberg_marquardt<const N: usize, const M: usize>(
    f: impl Fn(&[f64; N]) -> Option<[f64; M]>,
    x0: [f64; N],
    opts: &LmOptions,
) -> LmOutcome<N> {
    let eval = |x: &[f64; N]| -> Option<SVector<f64, M>> {
        let r = f(x)?;
        r.iter().all(|v| v.is_finite()).then(|| SVector::from(r))
    };
    let mut x = x0;
    let Some(mut r) = eval(&x) else {
        return LmOutcome {
            x,
            residual: f64::INFINITY,
            iterations: 0,
            converged: false,
        };
    };
    let mut cost = r.norm_squared();
    let mut damping = opts.initial_damping;
    let mut iterations = 0;

    while iterations < opts.max_iterations {
        if sup_norm(&r) < opts.tolerance {
            break;
        }
        iterations += 1;

        let mut jac = SMatrix::<f64, M, N>::zeros();
        for i in 0..N {
            let h = opts.fd_step * x[i].abs().max(1.0);
            let (mut xp, mut xm) = (x, x);
            xp[i] += h;
            xm[i] -= h;
            let (Some(rp), Some(rm)) = (eval(&xp), eval(&xm)) else {
                return LmOutcome {
                    x,
                    residual: sup_norm(&r),
                    iterations,
                    converged: false,
                };
            };
            jac.set_column(i, &((rp - rm) / (2.0 * h)));
        }
        let jtj = jac.transpose() * jac;
        let grad = jac.transpose() * r;

        let mut improved = false;
        while damping < 1e12 {
            let mut a = jtj;
            for i in 0..N {
                a[(i, i)] += damping * (jtj[(i, i)] + 1e-12);
            }
            let Some(chol) = a.cholesky() else {
                damping *= 4.0;
                continue;
            };
            let step = chol.solve(&(-grad));
            let mut trial = x;
            for i in 0..N {
                trial[i] += step[i];
            }
            match eval(&trial) {
                Some(rt) if rt.norm_squared() < cost => {
                    x = trial;
                    r = rt;
                    cost = r.norm_squared();
                    damping = (damping * 0.5).max(1e-15);
                    improved = true;
                    break;
                }
                _ => damping *= 4.0,
            }
        }
        if !improved {
            break;
        }
    }
    let residual = sup_norm(&r);
    LmOutcome {
        x,
        residual,
        iterations,
        converged: residual < opts.tolerance,
    }
}

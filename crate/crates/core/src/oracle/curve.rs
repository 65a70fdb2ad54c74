//! Maximizing a function along the solution curve of `N − 1` equations in
//! `N` unknowns, by pseudo-arclength continuation. Folds of the curve with
//! respect to any single coordinate are harmless.

use nalgebra::{DMatrix, DVector};

use super::golden_max;

const FD_STEP: f64 = 1e-7;
/// Smallest step is `arc_step / MAX_REFINEMENT`.
const MAX_REFINEMENT: f64 = 1024.0;

pub(crate) struct Curve<F, G, const N: usize, const M: usize> {
    /// The defining equations; `None` outside their domain.
    pub equations: F,
    /// The objective to maximize along the curve.
    pub objective: G,
    pub newton_steps: usize,
    pub golden_steps: usize,
    /// Continuation step length.
    pub arc_step: f64,
    pub max_arc_steps: usize,
}

fn dot<const N: usize>(a: &[f64; N], b: &[f64; N]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn along<const N: usize>(y: &[f64; N], d: &[f64; N], h: f64) -> [f64; N] {
    std::array::from_fn(|k| y[k] + h * d[k])
}

impl<F, G, const N: usize, const M: usize> Curve<F, G, N, M>
where
    F: Fn(&[f64; N]) -> Option<[f64; M]>,
    G: Fn(&[f64; N]) -> f64,
{
    fn jacobian(&self, y: &[f64; N]) -> Option<DMatrix<f64>> {
        let mut j = DMatrix::<f64>::zeros(M, N);
        for k in 0..N {
            let mut e = [0.0; N];
            e[k] = FD_STEP * y[k].abs().max(1.0);
            let plus = (self.equations)(&along(y, &e, 1.0))?;
            let minus = (self.equations)(&along(y, &e, -1.0))?;
            for i in 0..M {
                j[(i, k)] = (plus[i] - minus[i]) / (2.0 * e[k]);
            }
        }
        Some(j)
    }

    /// Unit tangent: the eigenvector of `JᵀJ` for its smallest eigenvalue.
    pub fn tangent(&self, y: &[f64; N]) -> Option<[f64; N]> {
        let j = self.jacobian(y)?;
        let eig = (j.transpose() * j).symmetric_eigen();
        let k = eig.eigenvalues.imin();
        let v = eig.eigenvectors.column(k);
        let t: [f64; N] = std::array::from_fn(|i| v[i]);
        t.iter().all(|x| x.is_finite()).then_some(t)
    }

    /// Newton on the equations plus the side condition `normal · y = level`.
    pub fn correct(&self, mut y: [f64; N], normal: &[f64; N], level: f64) -> Option<[f64; N]> {
        for _ in 0..self.newton_steps {
            let r = (self.equations)(&y)?;
            let side = dot(normal, &y) - level;
            let size = r.iter().fold(side.abs(), |m, v| m.max(v.abs()));
            if size < 1e-15 {
                return Some(y);
            }
            let j = self.jacobian(&y)?;
            let mut a = DMatrix::<f64>::zeros(N, N);
            let mut b = DVector::<f64>::zeros(N);
            for i in 0..M {
                for k in 0..N {
                    a[(i, k)] = j[(i, k)];
                }
                b[i] = r[i];
            }
            for k in 0..N {
                a[(M, k)] = normal[k];
            }
            b[M] = side;
            let dy = a.lu().solve(&b)?;
            if !dy.iter().all(|v| v.is_finite()) {
                return None;
            }
            let scale = (0.5 / dy.amax()).min(1.0f64);
            for k in 0..N {
                y[k] -= scale * dy[k];
            }
        }
        let r = (self.equations)(&y)?;
        (r.iter().fold(0.0f64, |m, v| m.max(v.abs())) < 1e-11).then_some(y)
    }

    /// Point at signed arclength `h` from `from` along `dir`.
    pub fn step(&self, from: &[f64; N], dir: &[f64; N], h: f64) -> Option<[f64; N]> {
        self.correct(along(from, dir, h), dir, dot(dir, from) + h)
    }

    /// Walks uphill along the curve from `start` and refines the local
    /// maximum by golden section in arclength. The step halves whenever a
    /// step cannot be corrected (near the edge of the domain, or where the
    /// curve bends sharply) and grows back after each success. Returns the
    /// best point and every point visited on the way.
    pub fn climb(&self, start: [f64; N]) -> ([f64; N], Vec<[f64; N]>) {
        let value = |y: Option<[f64; N]>| y.map_or(f64::NEG_INFINITY, |y| (self.objective)(&y));
        let min_step = self.arc_step / MAX_REFINEMENT;
        let mut h = self.arc_step;
        let mut best = start;
        let mut best_value = (self.objective)(&start);
        let mut visited = vec![start];
        let Some(t0) = self.tangent(&start) else {
            return (best, visited);
        };
        let fwd = value(self.step(&start, &t0, h));
        let back = value(self.step(&start, &t0, -h));
        let mut dir = if fwd >= back { t0 } else { t0.map(|x| -x) };
        if fwd.max(back) > best_value {
            for _ in 0..self.max_arc_steps {
                let Some(next) = self.step(&best, &dir, h) else {
                    if h <= min_step {
                        break;
                    }
                    h /= 2.0;
                    continue;
                };
                let v = (self.objective)(&next);
                if v <= best_value {
                    break;
                }
                let Some(t) = self.tangent(&next) else { break };
                dir = if dot(&t, &dir) >= 0.0 {
                    t
                } else {
                    t.map(|x| -x)
                };
                best = next;
                best_value = v;
                visited.push(next);
                h = (2.0 * h).min(self.arc_step);
            }
        }
        let Some(t) = self.tangent(&best) else {
            return (best, visited);
        };
        let anchor = best;
        golden_max(
            |s| match self.step(&anchor, &t, s) {
                Some(y) => {
                    let v = (self.objective)(&y);
                    if v > best_value {
                        best = y;
                        best_value = v;
                    }
                    v
                }
                None => f64::NEG_INFINITY,
            },
            -h,
            h,
            self.golden_steps,
        );
        (best, visited)
    }
}

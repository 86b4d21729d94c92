//! Derivative-free Nelder–Mead simplex minimization.

/// Stopping rules and simplex sizing for [`nelder_mead`].
#[derive(Debug, Clone)]
pub struct NelderMeadOptions {
    /// Stop when the spread of objective values across the simplex falls
    /// below this.
    pub tol: f64,
    /// Hard cap on objective evaluations.
    pub max_evals: usize,
    /// Per-coordinate offset used to build the initial simplex.
    pub initial_step: f64,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            max_evals: 10_000,
            initial_step: 0.15,
        }
    }
}

#[derive(Debug, Clone)]
pub struct OptimOutcome {
    pub x: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
    pub iterations: usize,
    pub converged: bool,
}

// Standard coefficients: reflection 1, expansion 2, contraction 1/2, shrink 1/2.
const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

/// Minimizes `f` from `x0`. The objective may return `+∞` for infeasible
/// points but must never return NaN.
pub fn nelder_mead<F>(mut f: F, x0: &[f64], opts: &NelderMeadOptions) -> OptimOutcome
where
    F: FnMut(&[f64]) -> f64,
{
    let n = x0.len();
    assert!(n >= 1, "nelder_mead needs at least one dimension");

    let mut evals = 0usize;
    let mut eval = |x: &[f64], evals: &mut usize| -> f64 {
        *evals += 1;
        let v = f(x);
        debug_assert!(!v.is_nan(), "objective returned NaN");
        v
    };

    // Simplex: x0 plus one offset vertex per coordinate.
    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    simplex.push(x0.to_vec());
    for i in 0..n {
        let mut v = x0.to_vec();
        v[i] += opts.initial_step;
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|v| eval(v, &mut evals)).collect();

    let mut iterations = 0usize;
    let mut converged = false;

    while evals < opts.max_evals {
        iterations += 1;

        // Order the simplex: best first, worst last.
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        let reordered: Vec<Vec<f64>> = order.iter().map(|&i| simplex[i].clone()).collect();
        let revalues: Vec<f64> = order.iter().map(|&i| values[i]).collect();
        simplex = reordered;
        values = revalues;

        let best = values[0];
        let worst = values[n];
        if worst.is_finite() && (worst - best).abs() <= opts.tol {
            converged = true;
            break;
        }
        if !best.is_finite() {
            // Entire simplex infeasible; nothing to contract toward.
            break;
        }

        // Centroid of all but the worst vertex.
        let mut centroid = vec![0.0; n];
        for v in simplex.iter().take(n) {
            for (c, &vi) in centroid.iter_mut().zip(v) {
                *c += vi;
            }
        }
        for c in centroid.iter_mut() {
            *c /= n as f64;
        }

        let worst_x = simplex[n].clone();
        let lerp = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&worst_x)
                .map(|(&c, &w)| c + t * (c - w))
                .collect()
        };

        let reflected = lerp(REFLECT);
        let f_reflected = eval(&reflected, &mut evals);

        if f_reflected < values[0] {
            // Try to expand past the reflection.
            let expanded = lerp(EXPAND);
            let f_expanded = eval(&expanded, &mut evals);
            if f_expanded < f_reflected {
                simplex[n] = expanded;
                values[n] = f_expanded;
            } else {
                simplex[n] = reflected;
                values[n] = f_reflected;
            }
        } else if f_reflected < values[n - 1] {
            simplex[n] = reflected;
            values[n] = f_reflected;
        } else {
            // Contract, outside or inside depending on the reflection.
            let (point, f_point) = if f_reflected < values[n] {
                let outside = lerp(CONTRACT);
                let fo = eval(&outside, &mut evals);
                (outside, fo)
            } else {
                let inside = lerp(-CONTRACT);
                let fi = eval(&inside, &mut evals);
                (inside, fi)
            };
            if f_point < values[n].min(f_reflected) {
                simplex[n] = point;
                values[n] = f_point;
            } else {
                // Shrink everything toward the best vertex.
                let best_x = simplex[0].clone();
                for i in 1..=n {
                    for (s, &b) in simplex[i].iter_mut().zip(&best_x) {
                        *s = b + SHRINK * (*s - b);
                    }
                    values[i] = eval(&simplex[i], &mut evals);
                }
            }
        }
    }

    let mut best_idx = 0;
    for i in 1..=n {
        if values[i] < values[best_idx] {
            best_idx = i;
        }
    }
    OptimOutcome {
        x: simplex[best_idx].clone(),
        value: values[best_idx],
        evaluations: evals,
        iterations,
        converged,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimizes_shifted_quadratic() {
        let f = |x: &[f64]| (x[0] - 3.0).powi(2) + 2.0 * (x[1] + 1.0).powi(2) + 5.0;
        let out = nelder_mead(f, &[0.0, 0.0], &NelderMeadOptions::default());
        assert!(out.converged);
        assert!((out.x[0] - 3.0).abs() < 1e-4, "x0 = {}", out.x[0]);
        assert!((out.x[1] + 1.0).abs() < 1e-4, "x1 = {}", out.x[1]);
        assert!((out.value - 5.0).abs() < 1e-7);
    }

    #[test]
    fn minimizes_rosenbrock() {
        let f = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let out = nelder_mead(
            f,
            &[-1.2, 1.0],
            &NelderMeadOptions {
                tol: 1e-12,
                max_evals: 10_000,
                initial_step: 0.5,
            },
        );
        assert!(out.converged);
        assert!((out.x[0] - 1.0).abs() < 1e-4);
        assert!((out.x[1] - 1.0).abs() < 1e-4);
    }

    #[test]
    fn respects_eval_budget() {
        let f = |x: &[f64]| x.iter().map(|v| v * v).sum::<f64>();
        let out = nelder_mead(
            f,
            &[100.0, -20.0, 30.0],
            &NelderMeadOptions {
                tol: 0.0,
                max_evals: 50,
                initial_step: 0.1,
            },
        );
        assert!(!out.converged);
        assert!(out.evaluations <= 54); // budget plus at most one in-flight step
    }

    #[test]
    fn tolerates_infinite_regions() {
        // Feasible only for x > 0; the simplex must walk out of the wall.
        let f = |x: &[f64]| {
            if x[0] <= 0.0 {
                f64::INFINITY
            } else {
                (x[0].ln()).powi(2)
            }
        };
        let out = nelder_mead(f, &[0.5], &NelderMeadOptions::default());
        assert!(out.converged);
        assert!((out.x[0] - 1.0).abs() < 1e-3);
    }
}

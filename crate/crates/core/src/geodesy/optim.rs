//! Derivative-free pattern search (Hooke–Jeeves): coordinate exploration
//! with step halving plus pattern moves along the last improvement.

pub(crate) struct SearchResult {
    pub x: Vec<f64>,
    pub value: f64,
    pub converged: bool,
}

fn explore<F: FnMut(&[f64]) -> f64>(
    f: &mut F,
    x: &mut [f64],
    fx: &mut f64,
    steps: &[f64],
    evals: &mut usize,
) {
    for i in 0..x.len() {
        let xi = x[i];
        for dir in [1.0, -1.0] {
            x[i] = xi + dir * steps[i];
            let v = f(x);
            *evals += 1;
            if v < *fx {
                *fx = v;
                break;
            }
            x[i] = xi;
        }
    }
}

/// Minimise `f` from `x0`. Converged once every step has shrunk below
/// `min_ratio` times its initial value within `max_evals` evaluations.
pub(crate) fn pattern_search<F: FnMut(&[f64]) -> f64>(
    mut f: F,
    x0: Vec<f64>,
    step0: &[f64],
    min_ratio: f64,
    max_evals: usize,
) -> SearchResult {
    let mut base = x0;
    let mut fbase = f(&base);
    let mut steps = step0.to_vec();
    let mut scale = 1.0;
    let mut evals = 1;
    if base.is_empty() {
        return SearchResult {
            x: base,
            value: fbase,
            converged: true,
        };
    }
    while evals < max_evals {
        let mut x = base.clone();
        let mut fx = fbase;
        explore(&mut f, &mut x, &mut fx, &steps, &mut evals);
        if fx < fbase {
            loop {
                let trial: Vec<f64> = x.iter().zip(&base).map(|(a, b)| 2.0 * a - b).collect();
                base = x;
                fbase = fx;
                let mut y = trial;
                let mut fy = f(&y);
                evals += 1;
                explore(&mut f, &mut y, &mut fy, &steps, &mut evals);
                if fy < fbase && evals < max_evals {
                    x = y;
                    fx = fy;
                } else {
                    break;
                }
            }
        } else {
            scale *= 0.5;
            if scale < min_ratio {
                return SearchResult {
                    x: base,
                    value: fbase,
                    converged: true,
                };
            }
            for s in &mut steps {
                *s *= 0.5;
            }
        }
    }
    SearchResult {
        x: base,
        value: fbase,
        converged: false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimises_a_narrow_valley() {
        let f =
            |x: &[f64]| (x[0] - 1.0).powi(2) + 100.0 * (x[1] - x[0]).powi(2) + (x[2] + 0.5).powi(2);
        let r = pattern_search(f, vec![0.0, 0.0, 0.0], &[0.5, 0.5, 0.5], 1e-10, 100_000);
        assert!(r.converged);
        assert!(
            (r.x[0] - 1.0).abs() < 1e-6
                && (r.x[1] - 1.0).abs() < 1e-6
                && (r.x[2] + 0.5).abs() < 1e-6
        );
    }
}

//! Gauss–Legendre rules on `[0, 1]` and tensor products with a
//! two-order Richardson-style error estimate.

/// Nodes and weights of an `n`-point Gauss–Legendre rule mapped to `[0, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "quadrature order must be positive");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            // Tricomi initial guess, then Newton on P_n.
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = 0.5 * (1.0 - x);
            nodes[n - 1 - i] = 0.5 * (1.0 + x);
            weights[i] = 0.5 * w;
            weights[n - 1 - i] = 0.5 * w;
        }
        Self { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// `∫_a^b f`.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let h = b - a;
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(a + h * x))
            .sum::<f64>()
            * h
    }

    /// Tensor rule over `[0, 1]²`; `f` may fail at a node.
    pub fn integrate_unit_square<F, E>(&self, mut f: F) -> Result<f64, E>
    where
        F: FnMut(f64, f64) -> Result<f64, E>,
    {
        let mut total = 0.0;
        for (&u, &wu) in self.nodes.iter().zip(&self.weights) {
            let mut row = 0.0;
            for (&v, &wv) in self.nodes.iter().zip(&self.weights) {
                row += wv * f(u, v)?;
            }
            total += wu * row;
        }
        Ok(total)
    }
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Integrates at order `n` and `2n`, returning the higher-order value and
/// the absolute difference as the error estimate.
pub fn estimate_unit_square<F, E>(order: usize, mut f: F) -> Result<(f64, f64), E>
where
    F: FnMut(f64, f64) -> Result<f64, E>,
{
    let lo = GaussLegendre::new(order).integrate_unit_square(&mut f)?;
    let hi = GaussLegendre::new(2 * order).integrate_unit_square(&mut f)?;
    Ok((hi, (hi - lo).abs()))
}

pub fn estimate_unit_interval<F, E>(order: usize, mut f: F) -> Result<(f64, f64), E>
where
    F: FnMut(f64) -> Result<f64, E>,
{
    let mut run = |n: usize| -> Result<f64, E> {
        let rule = GaussLegendre::new(n);
        let mut s = 0.0;
        for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
            s += w * f(x)?;
        }
        Ok(s)
    };
    let lo = run(order)?;
    let hi = run(2 * order)?;
    Ok((hi, (hi - lo).abs()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_one() {
        for n in [1, 2, 5, 16, 32, 64] {
            let r = GaussLegendre::new(n);
            let s: f64 = r.weights.iter().sum();
            assert!((s - 1.0).abs() < 1e-13, "n = {n}: {s}");
            assert!(r.nodes.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn exact_for_polynomials_up_to_degree_2n_minus_1() {
        let r = GaussLegendre::new(4);
        for d in 0..8 {
            let got = r.integrate(0.0, 2.0, |x| x.powi(d));
            let want = 2f64.powi(d + 1) / (d as f64 + 1.0);
            assert!((got - want).abs() < 1e-12 * want.max(1.0), "degree {d}");
        }
    }

    #[test]
    fn smooth_integral_and_error_estimate() {
        // ∫₀¹ sqrt(1 + x²) dx = (sqrt 2 + asinh 1)/2
        let want = (2f64.sqrt() + 1f64.asinh()) / 2.0;
        let (v, e) = estimate_unit_interval::<_, ()>(8, |x| Ok((1.0 + x * x).sqrt())).unwrap();
        assert!((v - want).abs() < 1e-13);
        assert!(e < 1e-8);
    }
}

//! Gauss-Legendre quadrature.
//!
//! Nodes and weights are computed by Newton iteration on the Legendre
//! polynomial, seeded with the Chebyshev-angle approximation. A fixed-order
//! rule applied on panels narrow enough to resolve the integrand (Gaussian
//! kernel width, fine-structure oscillation) gives errors far below the
//! crate's quadrature tolerances.

use crate::scalar::Scalar;

/// Gauss-Legendre rule of fixed order on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre<T> {
    nodes: Vec<T>,
    weights: Vec<T>,
}

impl<T: Scalar> GaussLegendre<T> {
    /// Builds the rule of the given order (number of nodes, >= 1).
    pub fn new(order: usize) -> Self {
        assert!(order >= 1, "quadrature order must be positive");
        let n = order;
        let mut nodes = vec![T::zero(); n];
        let mut weights = vec![T::zero(); n];

        let n_t = T::from_usize(n).unwrap();
        for i in 0..n.div_ceil(2) {
            // Chebyshev-angle initial guess for the i-th root.
            let k = T::from_usize(i).unwrap();
            let mut x = (T::PI() * (k + T::lit(0.75)) / (n_t + T::half())).cos();
            let mut dp = T::one();
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let step = p / d;
                x -= step;
                if step.abs() <= T::epsilon() * (T::one() + x.abs()) {
                    let (_, d) = legendre_with_derivative(n, x);
                    dp = d;
                    break;
                }
            }
            let w = T::two() / ((T::one() - x * x) * dp * dp);
            // Roots come out in descending order; store symmetrically.
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            // The middle node of an odd rule is exactly zero.
            nodes[n / 2] = T::zero();
            let (_, d) = legendre_with_derivative(n, T::zero());
            weights[n / 2] = T::two() / (d * d);
        }

        GaussLegendre { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// Integrates `f` over `[a, b]` with a single application of the rule.
    pub fn integrate<F: FnMut(T) -> T>(&self, a: T, b: T, mut f: F) -> T {
        let half_len = (b - a) * T::half();
        let mid = (a + b) * T::half();
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(mid + half_len * x))
            .sum::<T>()
            * half_len
    }

    /// Integrates `f` over `[a, b]` split into `panels` equal panels.
    pub fn integrate_composite<F: FnMut(T) -> T>(
        &self,
        a: T,
        b: T,
        panels: usize,
        mut f: F,
    ) -> T {
        let panels = panels.max(1);
        let width = (b - a) / T::from_usize(panels).unwrap();
        let mut total = T::zero();
        for k in 0..panels {
            let lo = a + width * T::from_usize(k).unwrap();
            total += self.integrate(lo, lo + width, &mut f);
        }
        total
    }

    /// Visits every node/weight pair of the composite rule over `[a, b]`,
    /// with weights already scaled by the panel Jacobian.
    pub fn for_each_composite_node<F: FnMut(T, T)>(
        &self,
        a: T,
        b: T,
        panels: usize,
        mut visit: F,
    ) {
        let panels = panels.max(1);
        let width = (b - a) / T::from_usize(panels).unwrap();
        let half_len = width * T::half();
        for k in 0..panels {
            let mid = a + width * (T::from_usize(k).unwrap() + T::half());
            for (&x, &w) in self.nodes.iter().zip(&self.weights) {
                visit(mid + half_len * x, w * half_len);
            }
        }
    }
}

/// Legendre polynomial `P_n(x)` and its derivative via the three-term
/// recurrence.
fn legendre_with_derivative<T: Scalar>(n: usize, x: T) -> (T, T) {
    let mut p_prev = T::one();
    let mut p = x;
    if n == 0 {
        return (T::one(), T::zero());
    }
    for k in 2..=n {
        let k_t = T::from_usize(k).unwrap();
        let next =
            ((T::two() * k_t - T::one()) * x * p - (k_t - T::one()) * p_prev) / k_t;
        p_prev = p;
        p = next;
    }
    let n_t = T::from_usize(n).unwrap();
    let dp = n_t * (x * p - p_prev) / (x * x - T::one());
    (p, dp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn exact_for_polynomials() {
        // Order-n Gauss-Legendre is exact through degree 2n-1.
        let rule = GaussLegendre::<f64>::new(8);
        for deg in 0..=15usize {
            let got = rule.integrate(0.0, 1.0, |x| x.powi(deg as i32));
            assert_abs_diff_eq!(got, 1.0 / (deg as f64 + 1.0), epsilon = 1e-14);
        }
    }

    #[test]
    fn weights_sum_to_interval_length() {
        for order in [1, 2, 3, 5, 8, 16, 31] {
            let rule = GaussLegendre::<f64>::new(order);
            let total: f64 = rule.weights.iter().sum();
            assert_abs_diff_eq!(total, 2.0, epsilon = 1e-13);
        }
    }

    #[test]
    fn damped_oscillation_matches_analytic() {
        // int_0^inf e^{-g t} cos(S t) dt = g / (g^2 + S^2).
        let rule = GaussLegendre::<f64>::new(8);
        let (g, s) = (1.0, 4.0);
        let got = rule.integrate_composite(0.0, 40.0, 512, |t| (-g * t).exp() * (s * t).cos());
        assert_abs_diff_eq!(got, g / (g * g + s * s), epsilon = 1e-13);
    }

    #[test]
    fn composite_node_visitor_consistent() {
        let rule = GaussLegendre::<f64>::new(5);
        let f = |x: f64| (x * 1.7).sin() + 0.3 * x;
        let direct = rule.integrate_composite(-1.0, 2.5, 9, f);
        let mut visited = 0.0;
        rule.for_each_composite_node(-1.0, 2.5, 9, |x, w| visited += w * f(x));
        assert_abs_diff_eq!(direct, visited, epsilon = 1e-14);
    }

    #[test]
    fn f32_rule_builds() {
        let rule = GaussLegendre::<f32>::new(8);
        let got = rule.integrate(0.0f32, 1.0, |x| x * x);
        assert!((got - 1.0 / 3.0).abs() < 1e-6);
    }
}

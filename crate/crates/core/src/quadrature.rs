//! Multiprecision Gauss-Legendre rules on [-1, 1].

use rug::Float;

use crate::precision::Precision;

/// Nodes ascending, with matching weights.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<Float>,
    pub weights: Vec<Float>,
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: &Float) -> (Float, Float) {
    let p = x.prec();
    let mut p0 = Float::with_val(p, 1);
    let mut p1 = x.clone();
    for k in 2..=n {
        let k = k as u32;
        let a = Float::with_val(p, x * &p1) * (2 * k - 1);
        let b = Float::with_val(p, &p0 * (k - 1));
        let p2 = (a - b) / k;
        p0 = p1;
        p1 = p2;
    }
    // P_n'(x) = n (x P_n - P_{n-1}) / (x^2 - 1)
    let num = (Float::with_val(p, x * &p1) - &p0) * n as u32;
    let den = Float::with_val(p, x.square_ref()) - 1u32;
    (p1, num / den)
}

impl GaussLegendre {
    /// `n`-point rule, exact for polynomials of degree `<= 2n - 1`.
    pub fn new(n: usize, prec: Precision) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let work = prec.with_guard(32).bits();
        let tol = Float::with_val(work, Float::i_exp(1, -(prec.bits() as i32) - 8));
        let half = n.div_ceil(2);
        let mut pos_nodes = Vec::with_capacity(half);
        let mut pos_weights = Vec::with_capacity(half);
        for i in 1..=half {
            let guess = (std::f64::consts::PI * (i as f64 - 0.25) / (n as f64 + 0.5)).cos();
            let mut x = Float::with_val(work, guess);
            let mut dp = Float::new(work);
            for _ in 0..100 {
                let (pn, d) = legendre(n, &x);
                let step = Float::with_val(work, &pn / &d);
                x -= &step;
                dp = d;
                if step.abs() <= tol {
                    break;
                }
            }
            let (_, d) = legendre(n, &x);
            if !d.is_zero() {
                dp = d;
            }
            let one_minus = Float::with_val(work, 1u32) - Float::with_val(work, x.square_ref());
            let w = Float::with_val(work, 2u32) / (one_minus * Float::with_val(work, dp.square_ref()));
            if n % 2 == 1 && i == half {
                x = Float::new(work);
            }
            pos_nodes.push(x);
            pos_weights.push(w);
        }
        // pos_nodes are descending from near 1 down to the middle
        let mut nodes = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        for (x, w) in pos_nodes.iter().zip(&pos_weights) {
            nodes.push(Float::with_val(prec.bits(), -x));
            weights.push(Float::with_val(prec.bits(), w));
        }
        let skip = n % 2;
        for (x, w) in pos_nodes.iter().zip(&pos_weights).rev().skip(skip) {
            nodes.push(Float::with_val(prec.bits(), x));
            weights.push(Float::with_val(prec.bits(), w));
        }
        GaussLegendre { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Number of nodes needed to integrate degree-`d` polynomials exactly.
    pub fn nodes_for_degree(d: usize) -> usize {
        d / 2 + 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::ops::Pow;

    #[test]
    fn small_rules_known_values() {
        let p = Precision::default();
        let g = GaussLegendre::new(2, p);
        let third = (p.float(1) / 3u32).sqrt();
        assert!(Float::with_val(256, &g.nodes[1] - &third).abs() < 1e-70);
        assert!(Float::with_val(256, &g.weights[0] - 1u32).abs() < 1e-70);
        let g3 = GaussLegendre::new(3, p);
        assert!(g3.nodes[1].is_zero());
        assert!((g3.weights[1].to_f64() - 8.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn exact_on_monomials() {
        let p = Precision::default();
        for n in [1usize, 4, 7, 20, 51] {
            let g = GaussLegendre::new(n, p);
            assert_eq!(g.len(), n);
            for d in 0..2 * n {
                let mut sum = p.zero();
                for (x, w) in g.nodes.iter().zip(&g.weights) {
                    sum += Float::with_val(256, x.pow(d as u32)) * w;
                }
                let exact = if d % 2 == 1 { 0.0 } else { 2.0 / (d as f64 + 1.0) };
                assert!((sum.to_f64() - exact).abs() < 1e-60, "n={n} d={d}");
            }
        }
    }

    #[test]
    fn nodes_ascending_and_symmetric() {
        let g = GaussLegendre::new(10, Precision::default());
        for w in g.nodes.windows(2) {
            assert!(w[0] < w[1]);
        }
        for i in 0..5 {
            let s = Float::with_val(256, &g.nodes[i] + &g.nodes[9 - i]);
            assert!(s.is_zero());
        }
    }
}

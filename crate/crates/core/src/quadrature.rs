//! One-dimensional quadrature: fixed Gauss–Legendre panels and an adaptive
//! bisection driver built on them.

use gauss_quad::GaussLegendre;

/// Gauss–Legendre rule with cached node/weight pairs on [-1, 1].
#[derive(Debug, Clone)]
pub struct GlRule {
    pairs: Vec<(f64, f64)>,
}

impl GlRule {
    pub fn new(degree: usize) -> Self {
        let rule = GaussLegendre::new(degree.max(2)).expect("degree >= 2");
        Self {
            pairs: rule.as_node_weight_pairs().to_vec(),
        }
    }

    pub fn degree(&self) -> usize {
        self.pairs.len()
    }

    /// Nodes and weights mapped onto [a, b].
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (b + a);
        self.pairs.iter().map(move |&(x, w)| (mid + half * x, half * w))
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        self.mapped(a, b).map(|(x, w)| w * f(x)).sum()
    }

    /// Composite rule on `panels` equal sub-intervals.
    pub fn composite<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, panels: usize, mut f: F) -> f64 {
        let panels = panels.max(1);
        let h = (b - a) / panels as f64;
        (0..panels)
            .map(|i| {
                let lo = a + h * i as f64;
                self.integrate(lo, lo + h, &mut f)
            })
            .sum()
    }
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
}

/// Adaptive bisection on Gauss–Legendre panels.
///
/// Each panel is compared against the sum of its two halves; panels whose
/// difference exceeds their share of `abs_tol` are split until `max_depth`.
#[derive(Debug, Clone)]
pub struct Adaptive {
    pub abs_tol: f64,
    pub max_depth: u32,
    /// Number of equal panels the interval is cut into before refinement.
    pub initial_panels: usize,
    rule: GlRule,
}

impl Adaptive {
    pub fn new(abs_tol: f64) -> Self {
        Self {
            abs_tol,
            max_depth: 30,
            initial_panels: 16,
            rule: GlRule::new(10),
        }
    }

    pub fn with_initial_panels(mut self, panels: usize) -> Self {
        self.initial_panels = panels.max(1);
        self
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> Quadrature {
        let mut out = Quadrature {
            value: 0.0,
            error_estimate: 0.0,
            evaluations: 0,
        };
        if a == b {
            return out;
        }
        let n = self.initial_panels;
        let h = (b - a) / n as f64;
        let tol = self.abs_tol / n as f64;
        for i in 0..n {
            let lo = a + h * i as f64;
            let hi = if i + 1 == n { b } else { lo + h };
            let whole = self.rule.integrate(lo, hi, &mut f);
            out.evaluations += self.rule.degree();
            self.refine(lo, hi, whole, tol, 0, &mut f, &mut out);
        }
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn refine<F: FnMut(f64) -> f64>(
        &self,
        a: f64,
        b: f64,
        whole: f64,
        tol: f64,
        depth: u32,
        f: &mut F,
        out: &mut Quadrature,
    ) {
        let mid = 0.5 * (a + b);
        let left = self.rule.integrate(a, mid, &mut *f);
        let right = self.rule.integrate(mid, b, &mut *f);
        out.evaluations += 2 * self.rule.degree();
        let err = (left + right - whole).abs();
        if err <= tol || depth >= self.max_depth {
            out.value += left + right;
            out.error_estimate += err;
        } else {
            self.refine(a, mid, left, 0.5 * tol, depth + 1, f, out);
            self.refine(mid, b, right, 0.5 * tol, depth + 1, f, out);
        }
    }
}

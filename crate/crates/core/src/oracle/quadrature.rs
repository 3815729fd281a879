use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use nalgebra::DMatrix;
use twofloat::{consts, TwoFloat};

use super::OracleError;
use crate::index::{self, IndexTuple, IntegralKind};

/// Gauss-Hermite rule for the weight `exp(-u^2)` on the real line, with
/// nodes and weights held in double-double precision.
///
/// Integrands with small values relative to their pointwise magnitude lose
/// digits to cancellation across nodes, so the rule and the integrand are
/// both evaluated with ~106-bit significands.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussHermite {
    nodes: Vec<TwoFloat>,
    weights: Vec<TwoFloat>,
}

impl GaussHermite {
    /// Golub-Welsch: the nodes are the eigenvalues of the symmetric Jacobi
    /// matrix with zero diagonal and off-diagonal `sqrt(k/2)`. Each node is
    /// then polished by Newton steps on the orthonormal recurrence in
    /// double-double, and the weights come from the Christoffel function
    /// `sqrt(pi) / sum h_k(x)^2`.
    pub fn new(n: usize) -> Result<Self, OracleError> {
        if n == 0 {
            return Err(OracleError::InsufficientNodes { required: 1, given: 0 });
        }
        let mut jacobi = DMatrix::<f64>::zeros(n, n);
        for k in 1..n {
            let b = (k as f64 / 2.0).sqrt();
            jacobi[(k - 1, k)] = b;
            jacobi[(k, k - 1)] = b;
        }
        let mut guesses: Vec<f64> = jacobi.symmetric_eigenvalues().iter().copied().collect();
        guesses.sort_by(|a, b| a.total_cmp(b));

        let rec = Recurrence::new(n);
        let scale = TwoFloat::from(2.0 * n as f64).sqrt();
        // the rule is symmetric: polish the non-negative half and mirror it
        let mut half: Vec<TwoFloat> = guesses[n / 2..]
            .iter()
            .enumerate()
            .map(|(pos, &g)| {
                if n % 2 == 1 && pos == 0 {
                    return TwoFloat::from(0.0);
                }
                let mut x = TwoFloat::from(g);
                for _ in 0..4 {
                    let (h_n, h_prev) = rec.last_pair(x);
                    x -= div(h_n, scale * h_prev);
                }
                x
            })
            .collect();
        half.sort_by(|a, b| a.partial_cmp(b).expect("finite nodes"));
        let mut nodes: Vec<TwoFloat> = half.iter().rev().filter(|x| x.hi() != 0.0).map(|&x| -x).collect();
        nodes.extend(half);

        let sqrt_pi = consts::PI.sqrt();
        let weights = nodes
            .iter()
            .map(|&x| {
                let mut s = TwoFloat::from(0.0);
                rec.for_each(x, |h| s += h * h);
                div(sqrt_pi, s)
            })
            .collect();
        Ok(GaussHermite { nodes, weights })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> Vec<f64> {
        self.nodes.iter().map(|x| x.hi()).collect()
    }

    pub fn weights(&self) -> Vec<f64> {
        self.weights.iter().map(|w| w.hi()).collect()
    }

    /// `sum w_q f(u_q)`, approximating the integral of `exp(-u^2) f(u)`.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w.hi() * f(x.hi()))
            .sum()
    }
}

/// Double-double reciprocal by two Newton steps from the `f64` estimate.
///
/// `TwoFloat`'s own quotient of two double-doubles is only accurate to about
/// `f64` precision, which is not enough for the weights.
fn recip(d: TwoFloat) -> TwoFloat {
    let mut r = TwoFloat::from(1.0 / d.hi());
    for _ in 0..2 {
        let e = TwoFloat::from(1.0) - d * r;
        r += r * e;
    }
    r
}

fn div(n: TwoFloat, d: TwoFloat) -> TwoFloat {
    n * recip(d)
}

/// Coefficients of `h_{k+1} = sqrt(2/(k+1)) x h_k - sqrt(k/(k+1)) h_{k-1}`
/// for the normalized functions `h_k = H_k / sqrt(2^k k!)`.
struct Recurrence {
    up: Vec<TwoFloat>,
    down: Vec<TwoFloat>,
}

impl Recurrence {
    /// Coefficients producing `h_0..=h_n`.
    fn new(n: usize) -> Self {
        let up = (0..n).map(|k| (TwoFloat::from(2.0) / (k + 1) as f64).sqrt()).collect();
        let down = (0..n).map(|k| (TwoFloat::from(k as f64) / (k + 1) as f64).sqrt()).collect();
        Recurrence { up, down }
    }

    fn degree(&self) -> usize {
        self.up.len()
    }

    /// `(h_n(x), h_{n-1}(x))`.
    fn last_pair(&self, x: TwoFloat) -> (TwoFloat, TwoFloat) {
        let (mut prev, mut cur) = (TwoFloat::from(0.0), TwoFloat::from(1.0));
        for k in 0..self.degree() {
            let next = self.up[k] * x * cur - self.down[k] * prev;
            prev = cur;
            cur = next;
        }
        (cur, prev)
    }

    /// Calls `f` with `h_0(x)..h_{n-1}(x)`.
    fn for_each(&self, x: TwoFloat, mut f: impl FnMut(TwoFloat)) {
        let (mut prev, mut cur) = (TwoFloat::from(0.0), TwoFloat::from(1.0));
        for k in 0..self.degree() {
            f(cur);
            let next = self.up[k] * x * cur - self.down[k] * prev;
            prev = cur;
            cur = next;
        }
    }

    /// Fills `out` with `h_0(x)..=h_n(x)`.
    fn fill(&self, x: TwoFloat, out: &mut Vec<TwoFloat>) {
        out.clear();
        let (mut prev, mut cur) = (TwoFloat::from(0.0), TwoFloat::from(1.0));
        out.push(cur);
        for k in 0..self.degree() {
            let next = self.up[k] * x * cur - self.down[k] * prev;
            prev = cur;
            cur = next;
            out.push(cur);
        }
    }
}

/// Shared rule for `n` nodes; each rule is computed once per process.
pub fn gauss_hermite(n: usize) -> Result<Arc<GaussHermite>, OracleError> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<GaussHermite>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let mut guard = cache.lock().expect("quadrature cache poisoned");
    if let Some(rule) = guard.get(&n) {
        return Ok(Arc::clone(rule));
    }
    let rule = Arc::new(GaussHermite::new(n)?);
    guard.insert(n, Arc::clone(&rule));
    Ok(rule)
}

/// Polynomial degree of the integrand (without the Gaussian).
pub fn integrand_degree(kind: IntegralKind, t: &IndexTuple) -> u32 {
    match kind {
        IntegralKind::W | IntegralKind::U => t.level(),
        IntegralKind::Y => t.level().saturating_sub(2),
    }
}

/// Smallest node count that integrates `t` exactly.
pub fn min_nodes(kind: IntegralKind, t: &IndexTuple) -> usize {
    integrand_degree(kind, t) as usize / 2 + 1
}

/// Normalized integral by Gauss-Hermite quadrature after `u = x sqrt(a)`.
pub fn quadrature_value(kind: IntegralKind, t: &IndexTuple, nodes: usize) -> Result<f64, OracleError> {
    index::check_arity(kind, t)?;
    let required = min_nodes(kind, t);
    if nodes < required {
        return Err(OracleError::InsufficientNodes { required, given: nodes });
    }
    let rule = gauss_hermite(nodes)?;
    let idx = t.as_slice();
    let rec = Recurrence::new(t.max_index() as usize);
    let (a, norm) = match kind {
        IntegralKind::W | IntegralKind::Y => (2.0, consts::FRAC_1_PI),
        IntegralKind::U => (3.0, div(consts::FRAC_1_PI, consts::PI.sqrt())),
    };
    let inv_sqrt_a = recip(TwoFloat::from(a).sqrt());
    let lowering: Vec<TwoFloat> = (0..=t.max_index()).map(|n| TwoFloat::from(2.0 * f64::from(n)).sqrt()).collect();
    let mut h = Vec::with_capacity(rec.degree() + 1);
    let mut sum = TwoFloat::from(0.0);
    for (&u, &w) in rule.nodes.iter().zip(&rule.weights) {
        rec.fill(u * inv_sqrt_a, &mut h);
        let f = match kind {
            IntegralKind::W | IntegralKind::U => idx
                .iter()
                .fold(TwoFloat::from(1.0), |acc, &n| acc * h[n as usize]),
            IntegralKind::Y => bracket(&h, &lowering, idx[0], idx[1]) * bracket(&h, &lowering, idx[2], idx[3]),
        };
        sum += w * f;
    }
    Ok((norm * inv_sqrt_a * sum).hi())
}

/// Normalized `H_i' H_j - H_i H_j'` from `H_n' / sqrt(2^n n!) = sqrt(2n) h_{n-1}`.
fn bracket(h: &[TwoFloat], lowering: &[TwoFloat], i: u32, j: u32) -> TwoFloat {
    let lowered = |n: u32| {
        if n == 0 {
            TwoFloat::from(0.0)
        } else {
            lowering[n as usize] * h[n as usize - 1]
        }
    };
    lowered(i) * h[j as usize] - h[i as usize] * lowered(j)
}

/// Same as [`quadrature_value`] with the minimal exact node count.
pub fn quadrature_value_auto(kind: IntegralKind, t: &IndexTuple) -> Result<f64, OracleError> {
    quadrature_value(kind, t, min_nodes(kind, t))
}

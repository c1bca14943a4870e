//! Jacobi polynomials `P_n^{(a,b)}` with general real parameters.
//!
//! The bound-state wavefunctions use these with non-integer, generally
//! non-symmetric exponents a and b, so everything here works for real
//! parameters. Two independent evaluation routes are provided: the
//! three-term recurrence in the degree (the workhorse) and the explicit
//! finite hypergeometric sum (the cross-check).

/// Parameters of a Jacobi polynomial `P_n^{(a,b)}`.
///
/// `a > -1` and `b > -1` are required for the weight `(1-s)^a (1+s)^b` to be
/// integrable on [-1, 1]; values outside that range are still evaluable
/// pointwise and are only flagged via [`JacobiParams::integrable`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiParams {
    pub a: f64,
    pub b: f64,
    pub n: u32,
}

impl JacobiParams {
    pub fn new(a: f64, b: f64, n: u32) -> Self {
        Self { a, b, n }
    }

    pub fn integrable(&self) -> bool {
        self.a > -1.0 && self.b > -1.0
    }
}

/// Generalized binomial coefficient C(z, k) for real z and integer k,
/// computed as the exact product z (z-1) ... (z-k+1) / k!.
pub fn binomial_general(z: f64, k: u32) -> f64 {
    let mut value = 1.0;
    for j in 1..=k {
        value *= (z - (k - j) as f64) / j as f64;
    }
    value
}

/// Evaluate `P_n^{(a,b)}(s)` via the three-term recurrence in the degree.
///
/// The recurrence denominators `2k(k+a+b)(2k+a+b-2)` are nonzero whenever
/// `a + b > -2`; outside that range the explicit sum is used instead.
pub fn jacobi_eval(p: &JacobiParams, s: f64) -> f64 {
    let (a, b, n) = (p.a, p.b, p.n);
    if n == 0 {
        return 1.0;
    }
    let p1 = 0.5 * (a - b) + 0.5 * (a + b + 2.0) * s;
    if n == 1 {
        return p1;
    }
    if a + b <= -2.0 {
        return jacobi_eval_sum(p, s);
    }
    let mut prev = 1.0;
    let mut cur = p1;
    for k in 2..=n {
        let k = k as f64;
        let c = 2.0 * k + a + b;
        let denom = 2.0 * k * (k + a + b) * (c - 2.0);
        let c1 = (c - 1.0) * (c * (c - 2.0) * s + a * a - b * b);
        let c2 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * c;
        let next = (c1 * cur - c2 * prev) / denom;
        prev = cur;
        cur = next;
    }
    cur
}

/// Evaluate `P_n^{(a,b)}(s)` via the explicit finite sum
/// `sum_k C(n+a, n-k) C(n+b, k) ((s-1)/2)^k ((s+1)/2)^{n-k}`.
///
/// Independent of the recurrence route; used as its test oracle.
pub fn jacobi_eval_sum(p: &JacobiParams, s: f64) -> f64 {
    let (a, b, n) = (p.a, p.b, p.n);
    let minus = 0.5 * (s - 1.0);
    let plus = 0.5 * (s + 1.0);
    let mut total = 0.0;
    for k in 0..=n {
        total += binomial_general(a + n as f64, n - k)
            * binomial_general(b + n as f64, k)
            * minus.powi(k as i32)
            * plus.powi((n - k) as i32);
    }
    total
}

/// `d/ds P_n^{(a,b)}(s) = (n+a+b+1)/2 * P_{n-1}^{(a+1,b+1)}(s)` for n >= 1.
pub fn jacobi_derivative(p: &JacobiParams, s: f64) -> f64 {
    if p.n == 0 {
        return 0.0;
    }
    let shifted = JacobiParams::new(p.a + 1.0, p.b + 1.0, p.n - 1);
    0.5 * (p.n as f64 + p.a + p.b + 1.0) * jacobi_eval(&shifted, s)
}

/// Second derivative, by applying the derivative relation twice.
pub fn jacobi_second_derivative(p: &JacobiParams, s: f64) -> f64 {
    if p.n < 2 {
        return 0.0;
    }
    let shifted = JacobiParams::new(p.a + 2.0, p.b + 2.0, p.n - 2);
    0.25 * (p.n as f64 + p.a + p.b + 1.0)
        * (p.n as f64 + p.a + p.b + 2.0)
        * jacobi_eval(&shifted, s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_degree_closed_forms() {
        let p = JacobiParams::new(0.5, 0.5, 1);
        assert!((jacobi_eval(&p, 0.2) - 0.3).abs() < 1e-15);
        assert!((jacobi_eval_sum(&p, 0.2) - 0.3).abs() < 1e-15);

        // P_n^{(a,b)}(1) = C(n+a, n).
        let p = JacobiParams::new(1.0, 1.0, 2);
        assert!((jacobi_eval(&p, 1.0) - 3.0).abs() < 1e-14);

        // Legendre special case, P_3(s) = (5 s^3 - 3 s)/2.
        let p = JacobiParams::new(0.0, 0.0, 3);
        assert!((jacobi_eval(&p, 0.5) + 0.4375).abs() < 1e-15);
    }

    #[test]
    fn sum_route_matches_recurrence() {
        let p = JacobiParams::new(2.3, -0.4, 5);
        let r = jacobi_eval(&p, 0.37);
        let s = jacobi_eval_sum(&p, 0.37);
        assert!((r - s).abs() <= 1e-9 * r.abs().max(1.0));

        let p0 = JacobiParams::new(-0.9, 5.0, 0);
        assert_eq!(jacobi_eval_sum(&p0, -0.77), 1.0);
    }

    #[test]
    fn derivative_closed_forms() {
        let p = JacobiParams::new(4.2, -0.7, 0);
        assert_eq!(jacobi_derivative(&p, 0.3), 0.0);

        // Degree 1: slope is (a+b+2)/2 everywhere.
        let p = JacobiParams::new(0.5, 0.5, 1);
        for &s in &[-1.0, 0.0, 0.8] {
            assert!((jacobi_derivative(&p, s) - 1.5).abs() < 1e-15);
        }

        // Legendre P_3'(s) = (15 s^2 - 3)/2.
        let p = JacobiParams::new(0.0, 0.0, 3);
        assert!((jacobi_derivative(&p, 0.5) - 0.375).abs() < 1e-14);
    }

    #[test]
    fn derivative_matches_central_difference() {
        let h = 1e-5;
        for &(a, b, n) in &[(0.5, 0.5, 4), (1.7, -0.9, 7), (5.0, 0.0, 3)] {
            let p = JacobiParams::new(a, b, n);
            for &s in &[-0.8, -0.2, 0.1, 0.6] {
                let fd = (jacobi_eval(&p, s + h) - jacobi_eval(&p, s - h)) / (2.0 * h);
                let d = jacobi_derivative(&p, s);
                assert!(
                    (fd - d).abs() <= 1e-6 * d.abs().max(1.0),
                    "a={a} b={b} n={n} s={s}: fd={fd} analytic={d}"
                );
            }
        }
    }

    #[test]
    fn endpoint_identity() {
        for &(a, b) in &[(-0.9, -0.4), (0.0, 0.5), (1.7, 5.0), (2.25, -0.99)] {
            for n in 0..=10u32 {
                let p = JacobiParams::new(a, b, n);
                let lhs = jacobi_eval(&p, 1.0);
                let rhs = binomial_general(a + n as f64, n);
                assert!(
                    (lhs - rhs).abs() <= 1e-10 * rhs.abs().max(1.0),
                    "a={a} b={b} n={n}: {lhs} vs {rhs}"
                );
            }
        }
    }

    #[test]
    fn symmetry_under_reflection() {
        for &(a, b) in &[(-0.4, 1.7), (0.5, 0.0), (5.0, -0.9)] {
            for n in 0..=8u32 {
                let p = JacobiParams::new(a, b, n);
                let q = JacobiParams::new(b, a, n);
                let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                for &s in &[-0.9, -0.35, 0.0, 0.6, 1.0] {
                    let lhs = jacobi_eval(&p, -s);
                    let rhs = sign * jacobi_eval(&q, s);
                    assert!((lhs - rhs).abs() <= 1e-10 * rhs.abs().max(1.0));
                }
            }
        }
    }

    #[test]
    fn sum_fallback_for_extreme_parameters() {
        // a + b <= -2 breaks the recurrence denominators; the explicit sum
        // takes over and stays finite.
        let p = JacobiParams::new(-1.5, -1.5, 3);
        assert!(!p.integrable());
        let v = jacobi_eval(&p, 0.4);
        assert!(v.is_finite());
        assert!((v - jacobi_eval_sum(&p, 0.4)).abs() <= 1e-12 * v.abs().max(1.0));
    }

    #[test]
    fn binomial_general_values() {
        assert_eq!(binomial_general(5.0, 2), 10.0);
        assert_eq!(binomial_general(3.0, 0), 1.0);
        // C(-0.5, 3) = (-0.5)(-1.5)(-2.5)/6.
        assert!((binomial_general(-0.5, 3) + 0.3125).abs() < 1e-15);
    }
}

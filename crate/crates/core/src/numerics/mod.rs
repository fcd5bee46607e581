//! Exact integer evaluation of the Castelnuovo-type profile functions.
//!
//! Every function here is pure integer (or exact rational) arithmetic; there
//! is no floating point anywhere, including the irrational threshold `d₁(n)`,
//! which is located by comparing squares.

mod squares;

pub use squares::{four_squares, four_squares_capped};

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `⌊a / b⌋` for `b > 0`.
#[inline]
pub(crate) fn floor_div(a: i64, b: i64) -> i64 {
    debug_assert!(b > 0);
    a.div_euclid(b)
}

/// Castelnuovo–Harris–Eisenbud number `π_p(d,n)` with its intermediate terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PiProfile {
    pub p: i64,
    pub d: i64,
    pub n: i64,
    pub m: i64,
    pub eps: i64,
    pub mu: i64,
    pub value: i64,
}

/// `π_p(d,n)`. Defined for `0 ≤ p ≤ n−2`, `d ≥ n`, `n ≥ 3`.
pub fn pi_p(p: i64, d: i64, n: i64) -> Result<PiProfile> {
    if n < 3 {
        return Err(Error::Domain(format!("pi_p needs n >= 3, got n = {n}")));
    }
    if !(0..=n - 2).contains(&p) {
        return Err(Error::Domain(format!("pi_p needs 0 <= p <= n-2, got p = {p}, n = {n}")));
    }
    if d < n {
        return Err(Error::Domain(format!("pi_p needs d >= n, got d = {d}, n = {n}")));
    }
    let period = n + p - 1;
    let m = floor_div(d - 1, period);
    let eps = d - 1 - m * period;
    let mu = if p == 0 {
        0
    } else {
        (floor_div(p - n + 2 + eps, 2)).max(0)
    };
    let value = m * (m - 1) / 2 * period + m * (eps + p) + mu;
    Ok(PiProfile {
        p,
        d,
        n,
        m,
        eps,
        mu,
        value,
    })
}

/// Castelnuovo bound `π₀(d,n)`.
pub fn castelnuovo(d: i64, n: i64) -> Result<i64> {
    pi_p(0, d, n).map(|pr| pr.value)
}

/// Band profile `α_p(d,n)` with its intermediate terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlphaProfile {
    pub p: i64,
    pub d: i64,
    pub n: i64,
    pub a_start: i64,
    pub x: i64,
    pub t: i64,
    pub u: i64,
    pub value: i64,
}

/// First degree `a^n_p = ⌊(n−p)/2⌋ + 1` at which `α_p(·,n)` is defined.
pub fn a_start(p: i64, n: i64) -> i64 {
    floor_div(n - p, 2) + 1
}

/// `α_p(d,n)`. Defined for `p ≥ 0` and `d ≥ a^n_p`.
pub fn alpha_p(p: i64, d: i64, n: i64) -> Result<AlphaProfile> {
    if p < 0 {
        return Err(Error::Domain(format!("alpha_p needs p >= 0, got {p}")));
    }
    let period = n + p - 1;
    if period <= 0 {
        return Err(Error::Domain(format!("alpha_p needs n+p-1 > 0, got n = {n}, p = {p}")));
    }
    let a = a_start(p, n);
    if d < a {
        return Err(Error::Domain(format!(
            "alpha_p needs d >= a^n_p = {a}, got d = {d} (p = {p}, n = {n})"
        )));
    }
    let x = floor_div(d - a, period);
    let t = d - 1 - x * period;
    let u = floor_div(p - n + 1 + t, 2);
    let value = x * (x - 1) / 2 * period + x * (t + p) + u;
    Ok(AlphaProfile {
        p,
        d,
        n,
        a_start: a,
        x,
        t,
        u,
        value,
    })
}

/// Shorthand for `alpha_p(..)?.value`.
pub fn alpha(p: i64, d: i64, n: i64) -> Result<i64> {
    alpha_p(p, d, n).map(|pr| pr.value)
}

/// Shorthand for the `x` term of `α_p(d,n)`.
pub fn alpha_x(p: i64, d: i64, n: i64) -> Result<i64> {
    alpha_p(p, d, n).map(|pr| pr.x)
}

/// Companion profile `α'_p(d,n) = α_{p−1}(d+1, n+1)`.
pub fn alpha_prime_p(p: i64, d: i64, n: i64) -> Result<i64> {
    alpha(p - 1, d + 1, n + 1)
}

/// `α_p(d,n)` when `d ≡ a^n_p (mod n+p−1)`, otherwise `α'_p(d,n)`.
pub fn beta_p(p: i64, d: i64, n: i64) -> Result<i64> {
    let a = a_start(p, n);
    if d < a {
        return Err(Error::Domain(format!("beta_p needs d >= a^n_p = {a}, got {d}")));
    }
    if (d - a).rem_euclid(n + p - 1) == 0 {
        alpha(p, d, n)
    } else {
        alpha_prime_p(p, d, n)
    }
}

/// The boundary `B(d,n)` between the non-lacunary and lacunary domains.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryProfile {
    pub n: i64,
    pub k: i64,
    /// Least integer `d ≥ 2n+1` strictly above the threshold expression.
    pub d1: i64,
}

/// Build the boundary profile for `n ≥ 4`.
pub fn boundary(n: i64) -> Result<BoundaryProfile> {
    if n < 4 {
        return Err(Error::Domain(format!("boundary needs n >= 4, got {n}")));
    }
    let k = n / 3;
    let mut d = 2 * n + 1;
    while !exceeds_threshold(n, k, d) {
        d += 1;
    }
    Ok(BoundaryProfile { n, k, d1: d })
}

/// Exact test of `d > expr(n)` for the three residue classes of `n mod 3`.
fn exceeds_threshold(n: i64, k: i64, d: i64) -> bool {
    let (k, d) = (k as i128, d as i128);
    match n % 3 {
        // (3 + (4k−1)√(24k−33)) / 6
        // n ≡ 0 with n ≥ 4 forces k ≥ 2, so the radicand is positive
        0 => {
            let lhs = 6 * d - 3;
            lhs > 0 && lhs * lhs > (4 * k - 1).pow(2) * (24 * k - 33)
        }
        // 4k/(4k+1) · (−4k + √(32k³+16k²−2k−1))
        1 => {
            let lhs = d * (4 * k + 1) + 16 * k * k;
            let rad = 32 * k.pow(3) + 16 * k * k - 2 * k - 1;
            lhs > 0 && lhs * lhs > 16 * k * k * rad
        }
        // 5k + 3 + (2k+1)√(48k+6)
        _ => {
            let lhs = d - 5 * k - 3;
            let rad = 48 * k + 6;
            lhs > 0 && lhs * lhs > (2 * k + 1).pow(2) * rad
        }
    }
}

impl BoundaryProfile {
    /// `A(d,n)`, defined for `d ≥ n`.
    pub fn big_a(&self, d: i64) -> Result<i64> {
        let pk = pi_p(self.k, d, self.n)?;
        Ok(if self.n % 3 == 2 {
            pk.value - pk.mu + (pk.eps - 3 * self.k - 1).max(0)
        } else {
            pk.value
        })
    }

    /// `B(d,n)`, defined for `d ≥ 2n+1`.
    pub fn big_b(&self, d: i64) -> Result<i64> {
        if d < 2 * self.n + 1 {
            return Err(Error::Domain(format!(
                "B(d,n) needs d >= 2n+1 = {}, got {d}",
                2 * self.n + 1
            )));
        }
        if d >= self.d1 {
            self.big_a(d)
        } else if self.n % 3 == 0 {
            alpha(self.k, d, self.n)
        } else {
            alpha(self.k + 1, d, self.n)
        }
    }
}

/// The genus polynomial in Gruson–Peskine coordinates,
/// `½[d(r−1) + (p−1)r − ((n+p−1)/4) r²] + 1`, as an exact rational.
pub fn genus_poly(d: i64, r: i64, p: i64, n: i64) -> Ratio<i64> {
    let numer = 4 * d * (r - 1) + 4 * (p - 1) * r - (n + p - 1) * r * r + 8;
    Ratio::new(numer, 8)
}

/// Slack `d − 2(p−1)(x_p(d,n)+1) − 2` of the degree lower bound at the
/// largest `r` a band certificate can have; non-negative iff that bound holds.
pub fn degree_slack(d: i64, p: i64, n: i64) -> Result<i64> {
    let x = alpha_x(p, d, n)?;
    Ok(d - 2 * (p - 1) * (x + 1) - 2)
}

/// `⌈n/3⌉`, the smallest admissible band index.
pub fn min_band_p(n: i64) -> i64 {
    (n + 2).div_euclid(3)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pi_examples() {
        let pr = pi_p(0, 9, 3).unwrap();
        assert_eq!((pr.m, pr.eps, pr.mu, pr.value), (4, 0, 0, 12));
        let pr = pi_p(1, 9, 3).unwrap();
        assert_eq!((pr.m, pr.eps, pr.mu, pr.value), (2, 2, 1, 10));
        let pr = pi_p(3, 19, 9).unwrap();
        assert_eq!((pr.m, pr.eps, pr.mu, pr.value), (1, 7, 1, 11));
        for n in 3..30 {
            assert_eq!(castelnuovo(n, n).unwrap(), 0, "rational normal curve, n = {n}");
        }
    }

    #[test]
    fn pi_rejects_bad_inputs() {
        assert!(pi_p(7, 20, 9).is_ok());
        assert!(pi_p(8, 20, 9).is_err());
        assert!(pi_p(-1, 20, 9).is_err());
        assert!(pi_p(0, 8, 9).is_err());
        assert!(pi_p(0, 3, 2).is_err());
    }

    #[test]
    fn mu_zero_agrees_with_max_formula() {
        for n in 3..20 {
            for d in n..200 {
                let pr = pi_p(0, d, n).unwrap();
                assert_eq!(pr.mu, floor_div(2 - n + pr.eps, 2).max(0));
            }
        }
    }

    #[test]
    fn alpha_examples() {
        let a = alpha_p(3, 19, 9).unwrap();
        assert_eq!((a.value, a.x, a.t, a.u), (11, 1, 7, 1));
        let a = alpha_p(4, 18, 9).unwrap();
        assert_eq!((a.value, a.x, a.t, a.u), (9, 1, 5, 0));
        assert_eq!(alpha(3, 30, 9).unwrap(), 32);
        assert_eq!(alpha(3, 30, 9).unwrap(), alpha(3, 19, 9).unwrap() + 19 + 3 - 1);
        assert!(alpha_p(3, 3, 9).is_err());
    }

    #[test]
    fn alpha_prime_examples() {
        let v = alpha_prime_p(4, 18, 9).unwrap();
        assert_eq!(v, alpha(3, 19, 10).unwrap());
        assert!([8, 9].contains(&v));
        // x = 0 specialisation
        for n in 5..15 {
            for p in 1..n {
                let a = a_start(p - 1, n + 1);
                for d in (a - 1)..(a - 1 + n + p - 1) {
                    if alpha_x(p - 1, d + 1, n + 1).unwrap() == 0 {
                        assert_eq!(alpha_prime_p(p, d, n).unwrap(), floor_div(d + 1 - (n + 1) + (p - 1), 2));
                    }
                }
            }
        }
    }

    #[test]
    fn beta_branches() {
        let (p, n) = (4, 9);
        let a = a_start(p, n);
        assert_eq!(
            beta_p(p, a + n + p - 1, n).unwrap(),
            alpha(p, a + n + p - 1, n).unwrap()
        );
        assert_eq!(beta_p(p, a + 1, n).unwrap(), alpha_prime_p(p, a + 1, n).unwrap());
        assert_eq!(a + 12, 15);
        assert_eq!(beta_p(4, 15, 9).unwrap(), alpha(4, 15, 9).unwrap());
    }

    #[test]
    fn boundary_examples() {
        let b = boundary(9).unwrap();
        assert_eq!((b.k, b.d1), (3, 19));
        assert_eq!(b.big_b(19).unwrap(), 11);
        assert_eq!(b.big_b(19).unwrap(), pi_p(3, 19, 9).unwrap().value);
        // n = 10 reaches the threshold immediately, so the α-branch is empty there
        assert_eq!(boundary(10).unwrap().d1, 21);
        let b11 = boundary(11).unwrap();
        assert_eq!(b11.d1, 104);
        for d in 23..b11.d1 {
            assert_eq!(b11.big_b(d).unwrap(), alpha(4, d, 11).unwrap());
        }
        assert!(boundary(3).is_err());
        assert!(b.big_b(18).is_err());
    }

    #[test]
    fn boundary_invariants() {
        for n in 4..60 {
            let b = boundary(n).unwrap();
            assert!(b.d1 > 2 * n);
            for d in b.d1..b.d1 + 50 {
                assert_eq!(b.big_b(d).unwrap(), b.big_a(d).unwrap());
                if n % 3 != 2 {
                    assert_eq!(b.big_a(d).unwrap(), pi_p(b.k, d, n).unwrap().value);
                }
            }
        }
    }

    #[test]
    fn genus_poly_examples() {
        assert_eq!(genus_poly(11, 2, 3, 9), Ratio::from_integer(3));
        for n in 8..14 {
            for p in 3..n - 3 {
                for d in 0..80 {
                    assert_eq!(genus_poly(d, 4, p, n), Ratio::new(3 * d - 4 * n + 2, 2));
                    assert_eq!(genus_poly(d, 0, p, n), Ratio::new(-d, 2) + 1);
                }
            }
        }
    }

    #[test]
    fn degree_slack_examples() {
        assert_eq!(degree_slack(19, 3, 9).unwrap(), 9);
        for n in 8..15 {
            for p in min_band_p(n)..=n - 4 {
                let a = a_start(p, n);
                for d in a..a + 100 {
                    let step = degree_slack(d + n + p - 1, p, n).unwrap();
                    // one full period adds n+p−1 to d and 2(p−1) to the bound
                    assert_eq!(step, degree_slack(d, p, n).unwrap() + n - p + 1);
                    assert!(step >= degree_slack(d, p, n).unwrap());
                }
            }
        }
        let a = a_start(1, 9);
        assert_eq!(degree_slack(a, 1, 9).unwrap(), a - 2);
    }
}

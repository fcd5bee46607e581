//! The Picard lattice of the plane blown up in `s+1` general points.
//!
//! A class is written `(a; b_0, …, b_s)` meaning `a·l − Σ b_i·e_i`, with the
//! form `l² = 1`, `e_i² = −1` and all mixed products zero.

use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{genus_poly, min_band_p};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DivisorClass {
    pub a: i64,
    pub b: Vec<i64>,
}

impl DivisorClass {
    pub fn new(a: i64, b: Vec<i64>) -> Self {
        Self { a, b }
    }

    pub fn zero(len: usize) -> Self {
        Self { a: 0, b: vec![0; len] }
    }

    /// `(a+2; a, 1^ones, 0, …, 0)` with `len` multiplicities; its
    /// arithmetic genus is `a`.
    pub fn family(a: i64, ones: usize, len: usize) -> Self {
        assert!(ones < len, "family needs ones < len");
        let mut b = vec![0; len];
        b[0] = a;
        b[1..=ones].fill(1);
        Self { a: a + 2, b }
    }

    pub fn len(&self) -> usize {
        self.b.len()
    }

    pub fn is_empty(&self) -> bool {
        self.b.is_empty()
    }

    /// `self + k·other`; both must have the same length.
    pub fn add_scaled(&self, other: &DivisorClass, k: i64) -> Result<DivisorClass> {
        if self.len() != other.len() {
            return Err(Error::SizeMismatch {
                expected: self.len(),
                got: other.len(),
            });
        }
        Ok(DivisorClass {
            a: self.a + k * other.a,
            b: self.b.iter().zip(&other.b).map(|(x, y)| x + k * y).collect(),
        })
    }

    /// The same class viewed on a surface with one more blown-up point,
    /// carrying multiplicity `value` there.
    pub fn appended(&self, value: i64) -> DivisorClass {
        let mut b = self.b.clone();
        b.push(value);
        DivisorClass { a: self.a, b }
    }

    /// Copy with `b_1..b_s` sorted descending (`b_0` stays in place).
    pub fn sorted_tail(&self) -> DivisorClass {
        let mut b = self.b.clone();
        if b.len() > 1 {
            b[1..].sort_unstable_by(|x, y| y.cmp(x));
        }
        DivisorClass { a: self.a, b }
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({};", self.a)?;
        for (i, x) in self.b.iter().enumerate() {
            write!(f, "{}{}", if i == 0 { " " } else { "," }, x)?;
        }
        write!(f, ")")
    }
}

/// Surface `X^n_p`: the plane blown up in `3p−n+6` points, embedded by
/// `H = (p+2; p, 1^s)` with `s = 3p−n+5`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SurfaceSpec {
    pub n: i64,
    pub p: i64,
    pub s: i64,
}

impl SurfaceSpec {
    /// A construction surface: `n ≥ 5` and `⌈n/3⌉ ≤ p ≤ n−4`.
    pub fn new(n: i64, p: i64) -> Result<Self> {
        if n < 5 || p < min_band_p(n) || p > n - 4 {
            return Err(Error::Domain(format!(
                "X^n_p needs n >= 5 and ceil(n/3) <= p <= n-4, got n = {n}, p = {p}"
            )));
        }
        Self::exploratory(n, p)
    }

    /// Any `(n,p)` with `p ≥ 1` and a non-negative point count `s = 3p−n+5`.
    pub fn exploratory(n: i64, p: i64) -> Result<Self> {
        let s = 3 * p - n + 5;
        if p < 1 || s < 0 {
            return Err(Error::Domain(format!("X^{n}_{p} has s = {s} < 0 or p < 1")));
        }
        Ok(Self { n, p, s })
    }

    /// Number of multiplicities `b_0..b_s`.
    pub fn len(&self) -> usize {
        (self.s + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn hyperplane(&self) -> DivisorClass {
        let mut b = vec![1; self.len()];
        b[0] = self.p;
        DivisorClass { a: self.p + 2, b }
    }

    pub fn canonical(&self) -> DivisorClass {
        DivisorClass {
            a: -3,
            b: vec![-1; self.len()],
        }
    }

    fn check(&self, d: &DivisorClass) -> Result<()> {
        if d.len() != self.len() {
            return Err(Error::SizeMismatch {
                expected: self.len(),
                got: d.len(),
            });
        }
        Ok(())
    }

    pub fn intersect(&self, d1: &DivisorClass, d2: &DivisorClass) -> Result<i64> {
        self.check(d1)?;
        self.check(d2)?;
        Ok(d1.a * d2.a - d1.b.iter().zip(&d2.b).map(|(x, y)| x * y).sum::<i64>())
    }

    /// `D·H`.
    pub fn degree(&self, d: &DivisorClass) -> Result<i64> {
        self.check(d)?;
        Ok(d.a * (self.p + 2) - d.b[0] * self.p - d.b[1..].iter().sum::<i64>())
    }

    /// `p_a(D) = (a−1)(a−2)/2 − Σ b_i(b_i−1)/2`.
    pub fn arithmetic_genus(&self, d: &DivisorClass) -> Result<i64> {
        self.check(d)?;
        Ok(class_genus(d))
    }

    pub fn to_gp(&self, d: &DivisorClass) -> Result<GpCoords> {
        let deg = self.degree(d)?;
        let r = d.a - d.b[0];
        let theta2 = d.b[1..].iter().map(|bi| r - 2 * bi).collect();
        Ok(GpCoords { d: deg, r, theta2 })
    }

    /// Inverse of [`SurfaceSpec::to_gp`]. Fails when the half-integrality
    /// condition or the degree parity condition does not hold.
    pub fn from_gp(&self, c: &GpCoords) -> Result<DivisorClass> {
        if c.theta2.len() != self.s as usize {
            return Err(Error::SizeMismatch {
                expected: self.s as usize,
                got: c.theta2.len(),
            });
        }
        if let Some(i) = c.theta2.iter().position(|t| (t - c.r).rem_euclid(2) != 0) {
            return Err(Error::NonIntegral(format!(
                "theta_{} = {}/2 is not congruent to r/2 = {}/2 mod 1",
                i + 1,
                c.theta2[i],
                c.r
            )));
        }
        // 4a = 2d − r(n−p−5) − Σ 2θ_i
        let four_a = 2 * c.d - c.r * (self.n - self.p - 5) - c.theta2.iter().sum::<i64>();
        if four_a.rem_euclid(4) != 0 {
            return Err(Error::NonIntegral(format!("degree parity fails: 4a = {four_a}")));
        }
        let a = four_a / 4;
        let mut b = Vec::with_capacity(self.len());
        b.push(a - c.r);
        b.extend(c.theta2.iter().map(|t| (c.r - t) / 2));
        Ok(DivisorClass { a, b })
    }

    /// Genus read off Gruson–Peskine coordinates: `F_d(r) − ½Σθ_i²`.
    pub fn gp_genus(&self, c: &GpCoords) -> Ratio<i64> {
        let sq: i64 = c.theta2.iter().map(|t| t * t).sum();
        genus_poly(c.d, c.r, self.p, self.n) - Ratio::new(sq, 8)
    }
}

impl fmt::Display for SurfaceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "X^{}_{}", self.n, self.p)
    }
}

/// Adjunction genus of a class, independent of the surface.
pub fn class_genus(d: &DivisorClass) -> i64 {
    (d.a - 1) * (d.a - 2) / 2 - d.b.iter().map(|x| x * (x - 1) / 2).sum::<i64>()
}

/// Gruson–Peskine coordinates `(d, r; θ_1..θ_s)` with `r = a − b_0` and
/// `θ_i = r/2 − b_i`. Each `θ_i` is a half-integer, stored doubled.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GpCoords {
    pub d: i64,
    pub r: i64,
    pub theta2: Vec<i64>,
}

impl GpCoords {
    /// Coordinates with integral `θ` (requires even `r` for integrality).
    pub fn integral(d: i64, r: i64, theta: &[i64]) -> Self {
        Self {
            d,
            r,
            theta2: theta.iter().map(|t| 2 * t).collect(),
        }
    }

    pub fn theta(&self, i: usize) -> Ratio<i64> {
        Ratio::new(self.theta2[i], 2)
    }

    /// `θ` as integers, when they all are.
    pub fn theta_integral(&self) -> Option<Vec<i64>> {
        self.theta2.iter().map(|t| (t % 2 == 0).then_some(t / 2)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn x93() -> SurfaceSpec {
        SurfaceSpec::new(9, 3).unwrap()
    }

    fn e(i: usize, len: usize) -> DivisorClass {
        let mut b = vec![0; len];
        b[i] = -1;
        DivisorClass::new(0, b)
    }

    #[test]
    fn intersection_examples() {
        let s = x93();
        assert_eq!(s.s, 5);
        let h = s.hyperplane();
        assert_eq!(h, DivisorClass::new(5, vec![3, 1, 1, 1, 1, 1]));
        assert_eq!(s.intersect(&h, &h).unwrap(), 11);
        assert_eq!(s.intersect(&e(1, 6), &e(2, 6)).unwrap(), 0);
        assert_eq!(s.intersect(&e(1, 6), &e(1, 6)).unwrap(), -1);
        assert_eq!(s.intersect(&h, &e(5, 6)).unwrap(), 1);
        assert!(s.intersect(&h, &DivisorClass::zero(5)).is_err());
    }

    #[test]
    fn degree_and_genus_examples() {
        let s = x93();
        let h = s.hyperplane();
        assert_eq!(s.degree(&h).unwrap(), 11);
        assert_eq!(s.arithmetic_genus(&h).unwrap(), 3);
        assert_eq!(s.degree(&DivisorClass::zero(6)).unwrap(), 0);
        assert_eq!(s.arithmetic_genus(&DivisorClass::new(1, vec![0; 6])).unwrap(), 0);
        for g in 0..20 {
            for u in 0..=5usize {
                let d = DivisorClass::family(g, u, 6);
                assert_eq!(d.b[1..].iter().filter(|&&x| x == 1).count(), u);
                assert_eq!(s.degree(&d).unwrap(), 2 * g + 2 * 3 + 4 - u as i64);
                assert_eq!(s.arithmetic_genus(&d).unwrap(), g);
            }
        }
    }

    #[test]
    fn surface_invariants() {
        for n in 5..30 {
            for p in min_band_p(n)..=n - 4 {
                let s = SurfaceSpec::new(n, p).unwrap();
                let h = s.hyperplane();
                assert_eq!(s.intersect(&h, &h).unwrap(), n + p - 1);
                assert_eq!(s.arithmetic_genus(&h).unwrap(), p);
            }
        }
        assert!(SurfaceSpec::new(9, 2).is_err());
        assert!(SurfaceSpec::exploratory(10, 3).is_ok());
    }

    #[test]
    fn gp_examples() {
        let s = x93();
        let c = s.to_gp(&s.hyperplane()).unwrap();
        assert_eq!(c, GpCoords::integral(11, 2, &[0; 5]));
        assert_eq!(s.from_gp(&c).unwrap(), s.hyperplane());
        assert_eq!(
            s.to_gp(&DivisorClass::zero(6)).unwrap(),
            GpCoords::integral(0, 0, &[0; 5])
        );

        let c = GpCoords::integral(19, 4, &[0, 0, 0, 0, 1]);
        let d = s.from_gp(&c).unwrap();
        assert_eq!(s.degree(&d).unwrap(), 19);
        assert_eq!(s.arithmetic_genus(&d).unwrap(), 11);
        assert_eq!(genus_poly(19, 4, 3, 9) - Ratio::new(1, 2), Ratio::from_integer(11));

        let bad = GpCoords {
            d: 19,
            r: 4,
            theta2: vec![0, 0, 0, 0, 1],
        };
        assert!(matches!(s.from_gp(&bad), Err(Error::NonIntegral(_))));
        let bad = GpCoords::integral(20, 4, &[0, 0, 0, 0, 1]);
        assert!(matches!(s.from_gp(&bad), Err(Error::NonIntegral(_))));
    }

    fn arb_surface() -> impl Strategy<Value = SurfaceSpec> {
        (6i64..20)
            .prop_flat_map(|n| (Just(n), min_band_p(n)..=n - 4))
            .prop_map(|(n, p)| SurfaceSpec::new(n, p).unwrap())
    }

    fn arb_class(len: usize) -> impl Strategy<Value = DivisorClass> {
        (-30i64..60, proptest::collection::vec(-10i64..30, len)).prop_map(|(a, b)| DivisorClass::new(a, b))
    }

    fn arb_surface_and_two() -> impl Strategy<Value = (SurfaceSpec, DivisorClass, DivisorClass)> {
        arb_surface().prop_flat_map(|s| (Just(s), arb_class(s.len()), arb_class(s.len())))
    }

    proptest! {
        #[test]
        fn adjunction_additivity((s, d1, d2) in arb_surface_and_two()) {
            let sum = d1.add_scaled(&d2, 1).unwrap();
            let lhs = s.arithmetic_genus(&sum).unwrap();
            let rhs = s.arithmetic_genus(&d1).unwrap() + s.arithmetic_genus(&d2).unwrap()
                + s.intersect(&d1, &d2).unwrap() - 1;
            prop_assert_eq!(lhs, rhs);
            // adjunction through the canonical class
            let k = s.canonical();
            let twice = s.intersect(&d1, &d1).unwrap() + s.intersect(&d1, &k).unwrap();
            prop_assert_eq!(2 * s.arithmetic_genus(&d1).unwrap(), twice + 2);
            prop_assert_eq!(s.degree(&d1).unwrap(), s.intersect(&d1, &s.hyperplane()).unwrap());
        }

        #[test]
        fn hyperplane_shifts((s, d, _d2) in arb_surface_and_two()) {
            let h = s.hyperplane();
            let (deg, g) = (s.degree(&d).unwrap(), s.arithmetic_genus(&d).unwrap());
            let dh = d.add_scaled(&h, 1).unwrap();
            prop_assert_eq!(s.degree(&dh).unwrap(), deg + s.n + s.p - 1);
            prop_assert_eq!(s.arithmetic_genus(&dh).unwrap(), g + deg + s.p - 1);

            let mut d0 = d.clone();
            *d0.b.last_mut().unwrap() = 0;
            let mut tilde = h.clone();
            *tilde.b.last_mut().unwrap() = 0;
            let (deg0, g0) = (s.degree(&d0).unwrap(), s.arithmetic_genus(&d0).unwrap());
            let dt = d0.add_scaled(&tilde, 1).unwrap();
            prop_assert_eq!(s.degree(&dt).unwrap(), deg0 + s.n + s.p);
            prop_assert_eq!(s.arithmetic_genus(&dt).unwrap(), g0 + deg0 + s.p - 1);
        }

        #[test]
        fn gp_genus_and_round_trip((s, d, _d2) in arb_surface_and_two()) {
            let c = s.to_gp(&d).unwrap();
            prop_assert_eq!(s.gp_genus(&c), Ratio::from_integer(s.arithmetic_genus(&d).unwrap()));
            prop_assert_eq!(&s.from_gp(&c).unwrap(), &d);
            let again = s.to_gp(&s.from_gp(&c).unwrap()).unwrap();
            prop_assert_eq!(again, c);
        }
    }
}

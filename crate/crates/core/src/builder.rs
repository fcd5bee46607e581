//! Explicit divisor classes realising band points `(d,g)`.
//!
//! A certificate records the class together with the trace that produced it:
//! a base class (a genus-`a` family or Gruson–Peskine coordinates) plus
//! non-negative multiples of six standard classes. The trace is replayable,
//! and degree and genus are always recomputed from the intersection form.

use serde::{Deserialize, Serialize};

use crate::domains::{classify, Tag};
use crate::error::{Error, Result};
use crate::numerics::{alpha, alpha_prime_p, alpha_x, beta_p, four_squares, four_squares_capped, genus_poly};
use crate::picard::{DivisorClass, GpCoords, SurfaceSpec};
use crate::smoothness::Verdict;

/// Which construction produced a class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    /// A family with free last point, shifted by `H̃ = (p+2; p, 1^{s−1}, 0)`.
    TildeShift,
    /// Family plus hyperplanes, with four-square many hyperplanes swapped
    /// for the ladder classes `(p+1; p−1, 1^{s−2−2m}, 0², 1^{2m})`.
    SquaresLadder,
    /// Inverse Gruson–Peskine coordinates with a four-square `θ` tail.
    GpTail,
    /// A class from `X^{n+1}_p` with one extra point of multiplicity 1.
    Lift,
    /// A class for `(d−(n+p−1), …)` plus one hyperplane, or a base family.
    HyperplaneShift,
    /// `(d, 4; 0^{s−t}, 1^t)` on the lowest surface.
    LowDegree,
}

/// Starting class of a trace.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Base {
    /// `(a+2; a, 1^u, 0, …, 0, eps)`: genus `a`, last multiplicity `eps`.
    Family { a: i64, u: i64, eps: i64 },
    /// Gruson–Peskine coordinates on the certificate's surface.
    Gp(GpCoords),
}

/// The six classes a trace may add: hyperplane, tilde hyperplane and the
/// four ladder classes (absent when the surface has too few points).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StandardSheaves {
    pub hyperplane: DivisorClass,
    pub tilde: DivisorClass,
    pub ladder: Option<[DivisorClass; 4]>,
}

fn ladder_class(surf: &SurfaceSpec, m: usize) -> Option<DivisorClass> {
    let ones = surf.s - 2 - 2 * m as i64;
    if ones < 0 {
        return None;
    }
    let mut b = vec![surf.p - 1];
    b.extend(std::iter::repeat_n(1, ones as usize));
    b.extend([0, 0]);
    b.extend(std::iter::repeat_n(1, 2 * m));
    Some(DivisorClass::new(surf.p + 1, b))
}

fn tilde_class(surf: &SurfaceSpec) -> DivisorClass {
    let mut h = surf.hyperplane();
    if let Some(last) = h.b.last_mut() {
        *last = 0;
    }
    h
}

impl StandardSheaves {
    /// Classes native to `surf`.
    pub fn new(surf: &SurfaceSpec) -> Self {
        let ladder = (1..=4).map(|m| ladder_class(surf, m)).collect::<Option<Vec<_>>>();
        Self {
            hyperplane: surf.hyperplane(),
            tilde: tilde_class(surf),
            ladder: ladder.map(|v| v.try_into().expect("four ladder classes")),
        }
    }

    /// Classes on `surf = X^n_p` inherited from `X^{n+1}_p` by appending a
    /// zero multiplicity. The inherited hyperplane is `surf`'s tilde class.
    pub fn lifted(surf: &SurfaceSpec) -> Result<Self> {
        let plus = SurfaceSpec::exploratory(surf.n + 1, surf.p)?;
        let ladder = (1..=4)
            .map(|m| ladder_class(&plus, m).map(|c| c.appended(0)))
            .collect::<Option<Vec<_>>>();
        Ok(Self {
            hyperplane: surf.hyperplane(),
            tilde: tilde_class(surf),
            ladder: ladder.map(|v| v.try_into().expect("four ladder classes")),
        })
    }

    pub fn get(&self, i: usize) -> Option<&DivisorClass> {
        match i {
            0 => Some(&self.hyperplane),
            1 => Some(&self.tilde),
            2..=5 => self.ladder.as_ref().map(|l| &l[i - 2]),
            _ => None,
        }
    }
}

/// Tracks `ε(D) = a − b_0 − b_{z1} − b_{z2}` for the two zero positions of
/// one ladder class; every addition of that class raises it by 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EpsilonTracker {
    zeros: (usize, usize),
    pub history: Vec<i64>,
}

impl EpsilonTracker {
    /// Tracker for ladder class `m ∈ 1..=4` on `surf`.
    pub fn for_ladder(surf: &SurfaceSpec, m: usize) -> Option<Self> {
        let ones = surf.s - 2 - 2 * m as i64;
        (ones >= 0).then(|| {
            let z = 1 + ones as usize;
            Self {
                zeros: (z, z + 1),
                history: Vec::new(),
            }
        })
    }

    pub fn value(&self, d: &DivisorClass) -> i64 {
        d.a - d.b[0] - d.b[self.zeros.0] - d.b[self.zeros.1]
    }

    pub fn record(&mut self, d: &DivisorClass) -> i64 {
        let v = self.value(d);
        self.history.push(v);
        v
    }

    /// True when consecutive records differ by exactly 2.
    pub fn steps_by_two(&self) -> bool {
        self.history.windows(2).all(|w| w[1] - w[0] == 2)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub n: i64,
    pub p: i64,
    pub d: i64,
    pub g: i64,
    pub route: Route,
    /// Outermost construction first.
    pub stages: Vec<Route>,
    pub base: Base,
    /// Multiples of hyperplane, tilde and the four ladder classes.
    pub counts: [i64; 6],
    pub class: DivisorClass,
    pub squares: Vec<[u64; 4]>,
    pub verdict: Option<Verdict>,
}

impl Certificate {
    pub fn surface(&self) -> Result<SurfaceSpec> {
        SurfaceSpec::exploratory(self.n, self.p)
    }

    pub fn is_lifted(&self) -> bool {
        self.stages.contains(&Route::Lift)
    }

    pub fn sheaves(&self) -> Result<StandardSheaves> {
        let surf = self.surface()?;
        if self.is_lifted() {
            StandardSheaves::lifted(&surf)
        } else {
            Ok(StandardSheaves::new(&surf))
        }
    }

    /// The class the trace starts from.
    pub fn base_class(&self) -> Result<DivisorClass> {
        let surf = self.surface()?;
        match &self.base {
            Base::Family { a, u, eps } => {
                let len = surf.len();
                let room = if *eps == 0 { len } else { len - 1 };
                if *u < 0 || *u as usize >= room {
                    return Err(Error::Shape(format!("family with u = {u} does not fit {surf}")));
                }
                let fam = DivisorClass::family(*a, *u as usize, room);
                Ok(if *eps == 0 { fam } else { fam.appended(*eps) })
            }
            Base::Gp(c) => surf.from_gp(c),
        }
    }

    /// Base class plus the counted standard classes.
    pub fn replay(&self) -> Result<DivisorClass> {
        let sheaves = self.sheaves()?;
        let mut cls = self.base_class()?;
        for (i, &t) in self.counts.iter().enumerate() {
            if t == 0 {
                continue;
            }
            let h = sheaves
                .get(i)
                .ok_or_else(|| Error::Shape(format!("standard class {} unavailable", i + 1)))?;
            cls = cls.add_scaled(h, t)?;
        }
        Ok(cls)
    }

    /// Recompute degree and genus from the class alone.
    pub fn recompute(&self) -> Result<(i64, i64)> {
        let surf = self.surface()?;
        Ok((surf.degree(&self.class)?, surf.arithmetic_genus(&self.class)?))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serialises")
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }
}

/// `3p ≥ n+6`: enough points for the ladder classes.
pub fn in_ladder_region(n: i64, p: i64) -> bool {
    3 * p >= n + 6
}

/// `3d < 2(3p+n+9)`: below the degree where the band pipeline applies.
pub fn below_pipeline_threshold(n: i64, p: i64, d: i64) -> bool {
    3 * d < 2 * (3 * p + n + 9)
}

fn check_target(surf: &SurfaceSpec, cls: &DivisorClass, d: i64, g: i64) -> Result<()> {
    let (dd, gg) = (surf.degree(cls)?, surf.arithmetic_genus(cls)?);
    if (dd, gg) != (d, g) {
        return Err(Error::Verification(format!(
            "class {cls} on {surf} has (d,g) = ({dd},{gg}), wanted ({d},{g})"
        )));
    }
    Ok(())
}

fn strip(d: i64, g: i64, lo: i64, hi: i64, what: &str) -> Result<()> {
    if lo <= g && g <= hi {
        Ok(())
    } else {
        Err(Error::OutOfStrip {
            d,
            g,
            detail: format!("{what}: need {lo} <= g <= {hi}"),
        })
    }
}

fn family_u(surf: &SurfaceSpec, d: i64, g: i64, allowed: std::ops::RangeInclusive<i64>) -> Result<i64> {
    let u = 2 * g + 2 * surf.p + 4 - d;
    if allowed.contains(&u) {
        Ok(u)
    } else {
        Err(Error::OutOfStrip {
            d,
            g,
            detail: format!("base family needs u in {allowed:?} on {surf}, got {u}"),
        })
    }
}

/// Families with a free last point shifted by tilde hyperplanes.
pub fn step1_build(surf: &SurfaceSpec, d: i64, g: i64) -> Result<Certificate> {
    let (n, p, s) = (surf.n, surf.p, surf.s);
    let lo = alpha_prime_p(p + 1, d - 1, n)?;
    let hi = beta_p(p + 1, d, n)? - alpha_x(p + 1, d, n)?;
    strip(d, g, lo, hi, "tilde shift strip")?;
    let (mut d0, mut g0, mut t2) = (d, g, 0);
    while alpha_x(p + 1, d0 - 1, n)? > 0 {
        d0 -= n + p;
        g0 -= d0 + p - 1;
        t2 += 1;
    }
    let u = family_u(surf, d0, g0, s - 3..=s - 1)?;
    let base = DivisorClass::family(g0, u as usize, surf.len());
    let cls = base.add_scaled(&tilde_class(surf), t2)?;
    check_target(surf, &cls, d, g)?;
    Ok(Certificate {
        n,
        p,
        d,
        g,
        route: Route::TildeShift,
        stages: vec![Route::TildeShift],
        base: Base::Family { a: g0, u, eps: 0 },
        counts: [0, t2, 0, 0, 0, 0],
        class: cls,
        squares: vec![],
        verdict: None,
    })
}

/// Four-square ladder on `plus = X^{n+1}_p` for
/// `α_p(d,n+1) − x_p(d,n+1) ≤ g ≤ α_p(d,n+1)`.
pub fn construction_a(plus: &SurfaceSpec, d: i64, g: i64) -> Result<Certificate> {
    let (n1, p, s) = (plus.n, plus.p, plus.s);
    if plus.s < 10 {
        return Err(Error::Region(format!(
            "ladder classes need at least 11 points, {plus} has {}",
            plus.s + 1
        )));
    }
    let x = alpha_x(p, d, n1)?;
    let top = alpha(p, d, n1)?;
    strip(d, g, top - x, top, "ladder strip")?;
    let sq = four_squares((top - g) as u64);
    let dbase = d - x * (n1 + p - 1);
    let g0 = (dbase - n1 + p).div_euclid(2);
    let u = family_u(plus, dbase, g0, s - 2..=s - 1)?;
    let sheaves = StandardSheaves::new(plus);
    let ladder = sheaves.ladder.as_ref().expect("s >= 10 gives ladder classes");

    let mut cls = DivisorClass::family(g0, u as usize, plus.len());
    let t1 = x - sq.iter().sum::<u64>() as i64;
    cls = cls.add_scaled(&sheaves.hyperplane, t1)?;
    for (m, (&c, h)) in sq.iter().zip(ladder).enumerate() {
        let mut eps = EpsilonTracker::for_ladder(plus, m + 1).expect("ladder fits");
        eps.record(&cls);
        for _ in 0..c {
            cls = cls.add_scaled(h, 1)?;
            eps.record(&cls);
        }
        if !eps.steps_by_two() {
            return Err(Error::Verification(format!(
                "epsilon trace {:?} not in steps of 2",
                eps.history
            )));
        }
    }
    check_target(plus, &cls, d, g)?;
    let [c1, c2, c3, c4] = sq.map(|c| c as i64);
    Ok(Certificate {
        n: n1,
        p,
        d,
        g,
        route: Route::SquaresLadder,
        stages: vec![Route::SquaresLadder],
        base: Base::Family { a: g0, u, eps: 0 },
        counts: [t1, 0, c1, c2, c3, c4],
        class: cls,
        squares: vec![sq],
        verdict: None,
    })
}

/// Gruson–Peskine construction on `plus = X^{n+1}_p`: `r = 2(x+1)` and a
/// four-square `θ` tail absorbing `2(F(d,r) − g)`.
pub fn construction_b(plus: &SurfaceSpec, d: i64, g: i64) -> Result<Certificate> {
    let (n1, p, s) = (plus.n, plus.p, plus.s);
    if s < 4 {
        return Err(Error::Region(format!("theta tail needs s >= 4, {plus} has s = {s}")));
    }
    let r = 2 * (alpha_x(p, d, n1)? + 1);
    let b = (genus_poly(d, r, p, n1) - g) * 2;
    if !b.is_integer() || *b.numer() < 1 || *b.numer() > r {
        return Err(Error::Region(format!("({d},{g}) needs 1 <= 2(F - g) <= {r}, got {b}")));
    }
    let b = b.to_integer() as u64;
    let sq = if r == 4 {
        // keep the top θ strictly below r/2
        four_squares_capped(b, (r / 2 - 1) as u64)
            .ok_or_else(|| Error::Region(format!("{b} has no four-square split with parts < 2")))?
    } else {
        four_squares(b)
    };
    let mut theta = vec![0; s as usize];
    for (j, &c) in sq.iter().enumerate() {
        theta[s as usize - 1 - j] = c as i64;
    }
    let gp = GpCoords::integral(d, r, &theta);
    let cls = plus.from_gp(&gp)?;
    check_target(plus, &cls, d, g)?;
    Ok(Certificate {
        n: n1,
        p,
        d,
        g,
        route: Route::GpTail,
        stages: vec![Route::GpTail],
        base: Base::Gp(gp),
        counts: [0; 6],
        class: cls,
        squares: vec![sq],
        verdict: None,
    })
}

/// Move a certificate from `X^{n+1}_p` to `X^n_p`: read the class on the
/// larger point set (multiplicity 0 at the new point) and put 1 there.
/// Genus is unchanged and the degree drops by 1. A class that already
/// carries a lifted point is refused.
pub fn step3_lift(cert: &Certificate) -> Result<Certificate> {
    if cert.is_lifted() {
        return Err(Error::Lift(cert.class.b.last().copied().unwrap_or(0)));
    }
    let surf = SurfaceSpec::exploratory(cert.n - 1, cert.p)?;
    let cls = cert.class.appended(1);
    let d = surf.degree(&cls)?;
    let g = surf.arithmetic_genus(&cls)?;
    if d != cert.d - 1 || g != cert.g {
        return Err(Error::Verification(format!(
            "lift moved ({},{}) to ({d},{g})",
            cert.d, cert.g
        )));
    }
    let (base, counts) = match &cert.base {
        Base::Family { a, u, eps: 0 } => {
            let c = cert.counts;
            // the hyperplane of X^{n+1}_p becomes the tilde class of X^n_p
            (
                Base::Family { a: *a, u: *u, eps: 1 },
                [0, c[0] + c[1], c[2], c[3], c[4], c[5]],
            )
        }
        Base::Gp(_) if cert.counts == [0; 6] => (Base::Gp(surf.to_gp(&cls)?), [0; 6]),
        _ => return Err(Error::Shape("lift needs a plain family or GP base".into())),
    };
    let mut stages = vec![Route::Lift];
    stages.extend(&cert.stages);
    Ok(Certificate {
        n: surf.n,
        p: surf.p,
        d,
        g,
        route: Route::Lift,
        stages,
        base,
        counts,
        class: cls,
        squares: cert.squares.clone(),
        verdict: None,
    })
}

/// Band pipeline on `surf = X^n_p` for `α_{p+1}(d−1,n) ≤ g ≤ α_p(d,n)`.
pub fn step4_fill(surf: &SurfaceSpec, d: i64, g: i64) -> Result<Certificate> {
    let (n, p) = (surf.n, surf.p);
    let lo = alpha(p + 1, d - 1, n)?;
    let hi = alpha(p, d, n)?;
    if g < lo || g > hi {
        return Err(Error::Unreachable { n, p, d, g });
    }
    fill(surf, d, g).map_err(|e| match e {
        Error::OutOfStrip { .. } | Error::Region(_) => Error::Unreachable { n, p, d, g },
        other => other,
    })
}

fn fill(surf: &SurfaceSpec, d: i64, g: i64) -> Result<Certificate> {
    let (n, p, s) = (surf.n, surf.p, surf.s);
    if alpha_x(p, d - 1, n)? == 0 {
        let u = family_u(surf, d, g, s - 2..=s)?;
        let cls = DivisorClass::family(g, u as usize, surf.len());
        check_target(surf, &cls, d, g)?;
        return Ok(Certificate {
            n,
            p,
            d,
            g,
            route: Route::HyperplaneShift,
            stages: vec![Route::HyperplaneShift],
            base: Base::Family { a: g, u, eps: 0 },
            counts: [0; 6],
            class: cls,
            squares: vec![],
            verdict: None,
        });
    }
    if g >= alpha(p + 1, d, n)? {
        let d2 = d - (n + p - 1);
        let inner = fill(surf, d2, g - d2 - p + 1)?;
        let cls = inner.class.add_scaled(&surf.hyperplane(), 1)?;
        check_target(surf, &cls, d, g)?;
        let mut counts = inner.counts;
        counts[0] += 1;
        let stages = if inner.route == Route::HyperplaneShift {
            inner.stages
        } else {
            std::iter::once(Route::HyperplaneShift).chain(inner.stages).collect()
        };
        return Ok(Certificate {
            d,
            g,
            route: Route::HyperplaneShift,
            stages,
            counts,
            class: cls,
            ..inner
        });
    }
    match step1_build(surf, d, g) {
        Ok(c) => Ok(c),
        Err(_) => lift_into(surf, d, g),
    }
}

fn lift_into(surf: &SurfaceSpec, d: i64, g: i64) -> Result<Certificate> {
    let (n, p) = (surf.n, surf.p);
    let top = alpha_prime_p(p + 1, d, n)?;
    strip(d, g, top - alpha_x(p + 1, d, n)?, top, "lift strip")?;
    let plus = SurfaceSpec::exploratory(n + 1, p)?;
    let inner = if in_ladder_region(n, p) {
        construction_a(&plus, d + 1, g)?
    } else {
        construction_b(&plus, d + 1, g)?
    };
    step3_lift(&inner)
}

/// `(d, 4; 0^{s−t}, 1^t)` on `X^n_k` (`n ≡ 0 mod 3`) or `X^n_{k+1}`.
pub fn low_degree_build(n: i64, d: i64, g: i64) -> Result<Certificate> {
    if n < 5 || d < 2 * n + 1 {
        return Err(Error::Region(format!(
            "low-degree classes need n >= 5, d >= 2n+1; got n = {n}, d = {d}"
        )));
    }
    let k = n / 3;
    let p = if n % 3 == 0 { k } else { k + 1 };
    let surf = SurfaceSpec::exploratory(n, p)?;
    let t = 3 * d - 4 * n + 2 - 2 * g;
    if !(1..=5).contains(&t) || t > surf.s {
        return Err(Error::Region(format!("({d},{g}) needs 1 <= t <= 5, got t = {t}")));
    }
    let mut theta = vec![0; surf.s as usize];
    let s = theta.len();
    theta[s - t as usize..].fill(1);
    let gp = GpCoords::integral(d, 4, &theta);
    let cls = surf.from_gp(&gp)?;
    check_target(&surf, &cls, d, g)?;
    Ok(Certificate {
        n,
        p,
        d,
        g,
        route: Route::LowDegree,
        stages: vec![Route::LowDegree],
        base: Base::Gp(gp),
        counts: [0; 6],
        class: cls,
        squares: vec![],
        verdict: None,
    })
}

/// Certificate for any `(n,d,g)` labelled `Band(p)`.
pub fn build(n: i64, d: i64, g: i64) -> Result<Certificate> {
    let label = classify(n, d, g)?;
    let Tag::Band(p) = label.tag else {
        return Err(Error::Delegated {
            n,
            d,
            g,
            label: label.tag.to_string(),
        });
    };
    let cert = if below_pipeline_threshold(n, p, d) {
        low_degree_build(n, d, g)?
    } else {
        step4_fill(&SurfaceSpec::new(n, p)?, d, g)?
    };
    let (dd, gg) = cert.recompute()?;
    if (dd, gg) != (d, g) {
        return Err(Error::Verification(format!("rebuilt ({dd},{gg}) for target ({d},{g})")));
    }
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{alpha_p, min_band_p};

    #[test]
    fn standard_classes_have_expected_degrees() {
        let surf = SurfaceSpec::new(10, 6).unwrap();
        let sh = StandardSheaves::new(&surf);
        assert_eq!(surf.degree(&sh.hyperplane).unwrap(), 15);
        assert_eq!(surf.degree(&sh.tilde).unwrap(), 16);
        for h in sh.ladder.as_ref().unwrap() {
            assert!(surf.degree(h).unwrap() >= surf.n + surf.p - 1);
        }
        let lifted = StandardSheaves::lifted(&surf).unwrap();
        assert_eq!(
            lifted.ladder.unwrap()[0],
            DivisorClass::new(7, vec![5, 1, 1, 1, 1, 1, 1, 1, 1, 0, 0, 1, 1, 0])
        );
    }

    #[test]
    fn tilde_shift_moves_degree_and_genus() {
        let surf = SurfaceSpec::new(9, 4).unwrap();
        let d0 = DivisorClass::family(2, 4, surf.len());
        let (d, g) = (surf.degree(&d0).unwrap(), surf.arithmetic_genus(&d0).unwrap());
        let shifted = d0.add_scaled(&tilde_class(&surf), 1).unwrap();
        assert_eq!(surf.degree(&shifted).unwrap(), d + surf.n + surf.p);
        assert_eq!(surf.arithmetic_genus(&shifted).unwrap(), g + d + surf.p - 1);
    }

    #[test]
    fn step1_base_case() {
        let surf = SurfaceSpec::new(9, 4).unwrap();
        // first d where the tilde strip is non-empty and x_{p+1}(d−1) = 0
        let d = 14;
        assert_eq!(alpha_x(5, d - 1, 9).unwrap(), 0);
        let g = (d - 9 + 4 - 1).div_euclid(2);
        let c = step1_build(&surf, d, g).unwrap();
        assert_eq!(c.counts[1], 0);
        assert_eq!(c.recompute().unwrap(), (d, g));
        assert!(matches!(step1_build(&surf, d, g + 10), Err(Error::OutOfStrip { .. })));
    }

    #[test]
    fn construction_a_edges() {
        let plus = SurfaceSpec::exploratory(11, 7).unwrap();
        let d = 60;
        let top = alpha(7, d, 11).unwrap();
        let x = alpha_x(7, d, 11).unwrap();
        let c = construction_a(&plus, d, top).unwrap();
        assert_eq!(c.squares, vec![[0, 0, 0, 0]]);
        assert_eq!(c.recompute().unwrap(), (d, top));
        let c = construction_a(&plus, d, top - x).unwrap();
        assert_eq!(c.recompute().unwrap(), (d, top - x));
        assert_eq!(c.replay().unwrap(), c.class);
        assert!(construction_a(&plus, d, top - x - 1).is_err());
        let small = SurfaceSpec::exploratory(10, 4).unwrap();
        assert!(matches!(construction_a(&small, 40, 20), Err(Error::Region(_))));
    }

    #[test]
    fn construction_b_examples() {
        let plus = SurfaceSpec::exploratory(10, 3).unwrap();
        let g = alpha(3, 22, 10).unwrap();
        let c = construction_b(&plus, 22, g).unwrap();
        // r = 4, F = 14, g = 13: b = 2(F − g) = 2 = 1² + 1²
        assert_eq!(c.squares, vec![[1, 1, 0, 0]]);
        let Base::Gp(gp) = &c.base else { panic!("gp base") };
        assert_eq!(gp.r, 4);
        assert_eq!(gp.theta2[gp.theta2.len() - 2..], [2, 2]);
        assert!(gp.theta2[..gp.theta2.len() - 2].iter().all(|&t| t == 0));
        assert_eq!(c.recompute().unwrap(), (22, g));
        assert!(matches!(construction_b(&plus, 22, g - 10), Err(Error::Region(_))));
    }

    #[test]
    fn construction_b_avoids_half_r_at_r4() {
        // find a point with r = 4 and b = 4
        let plus = SurfaceSpec::exploratory(10, 3).unwrap();
        let mut seen = false;
        for d in 20..40 {
            if alpha_x(3, d, 10).unwrap() != 1 {
                continue;
            }
            let f = genus_poly(d, 4, 3, 10);
            let g2 = f * 2 - 4;
            if g2.is_integer() && g2.to_integer() % 2 == 0 {
                let g = g2.to_integer() / 2;
                let c = construction_b(&plus, d, g).unwrap();
                assert_eq!(c.squares, vec![[1, 1, 1, 1]]);
                seen = true;
            }
        }
        assert!(seen);
    }

    #[test]
    fn lift_applies_once() {
        let plus = SurfaceSpec::exploratory(10, 3).unwrap();
        let g = alpha(3, 22, 10).unwrap();
        let c = construction_b(&plus, 22, g).unwrap();
        let l = step3_lift(&c).unwrap();
        assert_eq!((l.n, l.p, l.d, l.g), (9, 3, 21, g));
        assert_eq!(l.replay().unwrap(), l.class);
        assert!(matches!(step3_lift(&l), Err(Error::Lift(1))));
    }

    #[test]
    fn hyperplane_fill_examples() {
        let surf = SurfaceSpec::new(9, 3).unwrap();
        let g = alpha(3, 40, 9).unwrap();
        let c = step4_fill(&surf, 40, g).unwrap();
        assert_eq!(c.route, Route::HyperplaneShift);
        assert!(c.counts[0] >= 1);
        assert_eq!(c.recompute().unwrap(), (40, g));
        assert!(matches!(step4_fill(&surf, 40, g + 1), Err(Error::Unreachable { .. })));
    }

    #[test]
    fn low_degree_examples() {
        for (g, t) in [(11, 1), (10, 3), (9, 5)] {
            let c = low_degree_build(9, 19, g).unwrap();
            assert_eq!(c.p, 3);
            let Base::Gp(gp) = &c.base else { panic!() };
            assert_eq!(gp.r, 4);
            assert_eq!(gp.theta2.iter().filter(|&&x| x == 2).count(), t);
        }
        assert!(low_degree_build(9, 19, 8).is_err());
    }

    #[test]
    fn build_dispatch() {
        assert_eq!(build(9, 19, 11).unwrap().route, Route::LowDegree);
        let c = build(9, 40, alpha(3, 40, 9).unwrap()).unwrap();
        assert_eq!(c.route, Route::HyperplaneShift);
        assert!(matches!(build(9, 19, 12), Err(Error::Delegated { .. })));
        assert!(matches!(build(9, 18, 4), Err(Error::Delegated { .. })));
    }

    #[test]
    fn every_band_point_builds_small_grid() {
        for n in [8, 9, 12] {
            for d in 2 * n + 1..=4 * n {
                for p in min_band_p(n)..=n - 4 {
                    let lo = alpha(p + 1, d - 1, n).unwrap();
                    let hi = alpha_p(p, d, n).unwrap().value;
                    for g in lo.max(0)..=hi {
                        if classify(n, d, g).unwrap().tag != Tag::Band(p) {
                            continue;
                        }
                        let c = build(n, d, g).unwrap_or_else(|e| panic!("({n},{d},{g}): {e}"));
                        assert_eq!(c.replay().unwrap(), c.class, "({n},{d},{g})");
                    }
                }
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let c = build(11, 50, alpha(5, 50, 11).unwrap() - 1).unwrap();
        let back = Certificate::from_json(&c.to_json()).unwrap();
        assert_eq!(back, c);
        let text = c.to_json();
        let keys = [
            "n", "p", "d", "g", "route", "stages", "base", "counts", "class", "squares", "verdict",
        ];
        let pos: Vec<usize> = keys
            .iter()
            .map(|k| text.find(&format!("\n  \"{k}\":")).unwrap())
            .collect();
        assert!(pos.windows(2).all(|w| w[0] < w[1]));
    }
}

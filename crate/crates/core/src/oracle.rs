//! Brute-force cross-checks: exhaustive class enumeration on one surface, and
//! pointwise evaluation of the shift and floor identities of the profiles.
//!
//! Degree, genus and the Gruson–Peskine inequalities are recomputed inline
//! in `(a; b)` coordinates rather than through `picard`, so agreement with
//! the builder is not circular.

use std::collections::BTreeSet;
use std::io::Write;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::numerics::{a_start, alpha, alpha_prime_p, alpha_x, castelnuovo, genus_poly, min_band_p};
use crate::picard::{DivisorClass, SurfaceSpec};
use crate::smoothness::check_cubic;

pub const DEFAULT_CAP: u128 = 100_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleCriterion {
    GpInequalities,
    CubicSpecialization,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub n: i64,
    pub p: i64,
    pub a_max: i64,
    pub criterion: OracleCriterion,
    /// Classes visited, one per reordering orbit of `b_1..b_s`.
    pub visited: u64,
    /// Classes the orbits stand for, counting every ordering.
    pub represented: u128,
    pub pairs: BTreeSet<(i64, i64)>,
    /// Passing pairs with `g > π₀(d,n)`; only possible for degenerate curves.
    pub above_castelnuovo: Vec<(i64, i64)>,
}

impl SpectrumReport {
    /// Targets absent from the spectrum.
    pub fn misses<'a>(&self, targets: impl IntoIterator<Item = &'a (i64, i64)>) -> Vec<(i64, i64)> {
        targets
            .into_iter()
            .filter(|t| !self.pairs.contains(t))
            .copied()
            .collect()
    }

    pub fn write_csv<W: Write>(&self, out: W) -> std::io::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["d", "g"])?;
        for (d, g) in &self.pairs {
            w.write_record([d.to_string(), g.to_string()])?;
        }
        w.flush()
    }
}

fn binom(n: u128, k: u128) -> u128 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Number of classes `0 ≤ b_i ≤ a ≤ a_max` on `s+1` points.
pub fn search_size(a_max: i64, len: usize) -> u128 {
    (0..=a_max.max(-1)).map(|a| ((a + 1) as u128).pow(len as u32)).sum()
}

/// Inline `(d, g)` and Gruson–Peskine test for a class with `b_1..b_s`
/// sorted descending.
fn gp_pass(n: i64, p: i64, a: i64, b: &[i64]) -> (i64, i64, bool) {
    let tail = &b[1..];
    let d = a * (p + 2) - p * b[0] - tail.iter().sum::<i64>();
    let g = (a - 1) * (a - 2) / 2 - b.iter().map(|x| x * (x - 1) / 2).sum::<i64>();
    let r = a - b[0];
    // doubled θ_i = r − 2b_i, ascending because b is descending
    let th: Vec<i64> = tail.iter().map(|bi| r - 2 * bi).collect();
    let ordered = th.len() < 2 || th[0].abs() <= th[1];
    let capped = tail.last().is_none_or(|&bs| bs >= 0);
    let spread = match th.split_first() {
        Some((f, rest)) => rest.iter().sum::<i64>() - f,
        None => 0,
    };
    let ok = ordered && capped && spread <= 2 * d - (n - p + 1) * r && d >= (p - 1) * r + 2;
    (d, g, ok)
}

fn multisets(len: usize, top: i64, out: &mut Vec<Vec<i64>>, cur: &mut Vec<i64>) {
    if cur.len() == len {
        out.push(cur.clone());
        return;
    }
    for v in (0..=top).rev() {
        cur.push(v);
        multisets(len, v, out, cur);
        cur.pop();
    }
}

/// Orbit size of a descending tuple under reordering.
fn orbit(tail: &[i64]) -> u128 {
    let mut size = (1..=tail.len() as u128).product::<u128>();
    let mut i = 0;
    while i < tail.len() {
        let j = tail[i..].iter().take_while(|&&x| x == tail[i]).count();
        size /= (1..=j as u128).product::<u128>();
        i += j;
    }
    size
}

/// Every `(d, g)` realised by a class `0 ≤ b_i ≤ a ≤ a_max` on `surf` that
/// passes `criterion`. The tail `b_1..b_s` is enumerated up to reordering,
/// which changes neither degree, genus nor either criterion.
pub fn brute_spectrum(
    surf: &SurfaceSpec,
    a_max: i64,
    criterion: OracleCriterion,
    cap: u128,
    exec: Exec,
) -> Result<SpectrumReport> {
    let represented = search_size(a_max, surf.len());
    if represented > cap {
        return Err(Error::ResourceCap {
            requested: represented,
            cap,
        });
    }
    let (n, p, s) = (surf.n, surf.p, surf.s as usize);
    let per_a = exec.map((0..=a_max).collect(), |a| {
        let mut tails = Vec::with_capacity(binom(a as u128 + s as u128, s as u128) as usize);
        multisets(s, a, &mut tails, &mut Vec::with_capacity(s));
        let mut found = Vec::new();
        let mut visited = 0u64;
        let mut reps = 0u128;
        for b0 in (0..=a).rev() {
            for tail in &tails {
                visited += 1;
                reps += orbit(tail);
                let mut b = Vec::with_capacity(s + 1);
                b.push(b0);
                b.extend_from_slice(tail);
                let (d, g, ok) = match criterion {
                    OracleCriterion::GpInequalities => gp_pass(n, p, a, &b),
                    OracleCriterion::CubicSpecialization => {
                        let (d, g, _) = gp_pass(n, p, a, &b);
                        (d, g, check_cubic(&DivisorClass::new(a, b)).holds)
                    }
                };
                if ok {
                    found.push((d, g));
                }
            }
        }
        (found, visited, reps)
    });
    let mut pairs = BTreeSet::new();
    let mut visited = 0;
    let mut reps = 0;
    for (found, v, r) in per_a {
        pairs.extend(found);
        visited += v;
        reps += r;
    }
    debug_assert_eq!(reps, represented);
    let above_castelnuovo = pairs
        .iter()
        .filter(|&&(d, g)| d >= n && castelnuovo(d, n).is_ok_and(|pi| g > pi))
        .copied()
        .collect();
    Ok(SpectrumReport {
        n,
        p,
        a_max,
        criterion,
        visited,
        represented: reps,
        pairs,
        above_castelnuovo,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub identity: String,
    pub n: i64,
    pub p: i64,
    pub d: i64,
    pub r: Option<i64>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityAudit {
    pub evaluated: u64,
    pub violations: Vec<Violation>,
}

impl IdentityAudit {
    pub fn write_csv<W: Write>(&self, out: W) -> std::io::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["identity", "n", "p", "d", "r"])?;
        for v in &self.violations {
            let r = v.r.map(|r| r.to_string()).unwrap_or_default();
            w.write_record([v.identity.clone(), v.n.to_string(), v.p.to_string(), v.d.to_string(), r])?;
        }
        w.flush()
    }
}

fn audit_point(n: i64, p: i64, d: i64, r_max: i64) -> Result<(u64, Vec<Violation>)> {
    let mut out = Vec::new();
    let mut count = 0u64;
    let mut check = |name: &str, r: Option<i64>, ok: bool| {
        count += 1;
        if !ok {
            out.push(Violation {
                identity: name.into(),
                n,
                p,
                d,
                r,
            });
        }
    };
    let a = a_start(p, n);
    let period = n + p - 1;
    let d2 = d + period;
    check("shift_x", None, alpha_x(p, d2, n)? == alpha_x(p, d, n)? + 1);
    check("shift_alpha", None, alpha(p, d2, n)? == alpha(p, d, n)? + d + p - 1);
    check(
        "shift_alpha_prime",
        None,
        alpha_prime_p(p, d2, n)? == alpha_prime_p(p, d, n)? + d + p - 1,
    );
    if d > a {
        check("band_order", None, alpha(p + 1, d - 1, n)? <= alpha(p, d, n)?);
    }
    if d >= a + n + p {
        check("band_order_far", None, alpha(p + 1, d, n)? <= alpha(p, d, n)?);
    }
    if d >= a_start(p + 1, n) {
        let x1 = alpha_x(p + 1, d, n)?;
        let x0 = alpha_x(p, d + 1, n + 1)?;
        check("cross_x", None, x1 == x0);
        let t1 = d - 1 - x1 * (n + p);
        let t0 = d - x0 * (n + p);
        check("cross_t", None, t1 == t0 - 1);
        let gap = alpha(p, d + 1, n + 1)? - alpha(p + 1, d, n)?;
        check("cross_alpha", None, gap == -1 || gap == 0);
    }
    for r in 0..=r_max {
        check(
            "genus_poly_shift",
            Some(r),
            genus_poly(d2, r + 2, p, n) == genus_poly(d, r, p, n) + (d + p - 1),
        );
        check(
            "genus_poly_cross",
            Some(r),
            genus_poly(d, r, p, n + 1) == genus_poly(d - 1, r, p + 1, n) - Ratio::new(1, 2),
        );
    }
    let r = 2 * (alpha_x(p, d, n)? + 1);
    check(
        "alpha_floor",
        None,
        alpha(p, d, n)? == (genus_poly(d, r, p, n) - Ratio::new(1, 2)).floor().to_integer(),
    );
    if d > a_start(p + 1, n) {
        let r = 2 * (alpha_x(p + 1, d - 1, n)? + 1);
        check(
            "alpha_floor_cross",
            None,
            alpha(p + 1, d - 1, n)? == genus_poly(d, r, p, n + 1).floor().to_integer(),
        );
    }
    Ok((count, out))
}

/// Evaluate the shift, ordering, cross-index and floor identities for every
/// `n` in `ns`, every band index `⌈n/3⌉ ≤ p ≤ n−4` and `d_span` consecutive
/// degrees from `a^n_p`, with `r ≤ r_max` for the genus-polynomial ones.
pub fn identity_audit(ns: std::ops::RangeInclusive<i64>, d_span: i64, r_max: i64, exec: Exec) -> Result<IdentityAudit> {
    let mut cells = Vec::new();
    for n in ns {
        for p in min_band_p(n)..=n - 4 {
            let a = a_start(p, n);
            cells.extend((a..a + d_span).map(|d| (n, p, d)));
        }
    }
    let results = exec.map(cells, |(n, p, d)| audit_point(n, p, d, r_max));
    let mut audit = IdentityAudit::default();
    for r in results {
        let (c, v) = r?;
        audit.evaluated += c;
        audit.violations.extend(v);
    }
    Ok(audit)
}

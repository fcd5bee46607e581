//! Arithmetic smoothness criteria for linear systems on blown-up planes.
//!
//! Each check records the two integers it compared, so a verdict can be
//! audited without rerunning anything. Half-integral quantities (`θ`, `r/2`)
//! are compared doubled.

use serde::{Deserialize, Serialize};

use crate::builder::{below_pipeline_threshold, in_ladder_region, Base, Certificate, Route};
use crate::error::{Error, Result};
use crate::numerics::alpha_x;
use crate::picard::{DivisorClass, GpCoords, SurfaceSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Criterion {
    /// Points specialised on a plane cubic: base-point freeness from
    /// inequalities on sorted multiplicities.
    CubicSpecialization,
    /// `h¹ = 0` companion of the cubic criterion.
    CubicVanishing,
    /// `(p+2; p, 1^s)`: irreducible member for `s ≤ 3p+3`, very ample for `s ≤ 3p`.
    RationalPencil,
    /// The five Gruson–Peskine inequalities.
    GpInequalities,
    /// Family plus `t` standard classes: `3a ≥ u + n − 7 − (t+1)(n−4)`.
    StandardSheafSum,
    /// Normalised form `a ≥ b_0+b_1+b_2`, `b` sorted and non-negative, `a > b_0`.
    Normalized,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    Ge,
    Gt,
    Le,
    Lt,
    Eq,
}

impl Relation {
    fn eval(self, lhs: i64, rhs: i64) -> bool {
        match self {
            Relation::Ge => lhs >= rhs,
            Relation::Gt => lhs > rhs,
            Relation::Le => lhs <= rhs,
            Relation::Lt => lhs < rhs,
            Relation::Eq => lhs == rhs,
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            Relation::Ge => ">=",
            Relation::Gt => ">",
            Relation::Le => "<=",
            Relation::Lt => "<",
            Relation::Eq => "==",
        }
    }
}

/// One evaluated inequality. Informational checks (`required = false`) are
/// reported but do not affect the verdict.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub lhs: i64,
    pub relation: Relation,
    pub rhs: i64,
    pub holds: bool,
    pub required: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, lhs: i64, relation: Relation, rhs: i64) -> Self {
        Self {
            name: name.into(),
            lhs,
            relation,
            rhs,
            holds: relation.eval(lhs, rhs),
            required: true,
        }
    }

    pub fn info(name: impl Into<String>, lhs: i64, relation: Relation, rhs: i64) -> Self {
        Self {
            required: false,
            ..Self::new(name, lhs, relation, rhs)
        }
    }
}

impl std::fmt::Display for Check {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {} {} {}", self.name, self.lhs, self.relation.symbol(), self.rhs)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub criterion: Criterion,
    pub holds: bool,
    /// For either-or criteria, the alternative that passed.
    pub matched: Option<String>,
    /// Set when the arithmetic check fails but the point belongs to a family
    /// settled by a geometric argument outside this crate.
    pub annotation: Option<String>,
    pub checks: Vec<Check>,
}

impl Verdict {
    fn all_required(criterion: Criterion, checks: Vec<Check>) -> Self {
        let holds = checks.iter().all(|c| c.holds || !c.required);
        Self {
            criterion,
            holds,
            matched: None,
            annotation: None,
            checks,
        }
    }

    /// First required check that failed.
    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| c.required && !c.holds)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Sorted multiplicities with zeros dropped, or `None` when one is negative.
fn positive_sorted(d: &DivisorClass) -> Option<Vec<i64>> {
    if d.b.iter().any(|&x| x < 0) {
        return None;
    }
    let mut b: Vec<i64> = d.b.iter().copied().filter(|&x| x > 0).collect();
    b.sort_unstable_by(|x, y| y.cmp(x));
    Some(b)
}

struct Sums {
    a: i64,
    s: i64,
    all: i64,
    top3: i64,
    split: i64,
}

impl Sums {
    fn of(d: &DivisorClass) -> Option<Self> {
        let b = positive_sorted(d)?;
        let at = |i: usize| b.get(i).copied().unwrap_or(0);
        Some(Self {
            a: d.a,
            s: b.len() as i64 - 1,
            all: b.iter().sum(),
            top3: at(0) + at(1) + at(2),
            split: at(0) - at(1),
        })
    }
}

fn either_or(criterion: Criterion, groups: Vec<(&str, Vec<Check>)>) -> Verdict {
    let matched = groups
        .iter()
        .find(|(_, cs)| cs.iter().all(|c| c.holds))
        .map(|(n, _)| n.to_string());
    let checks = groups
        .into_iter()
        .flat_map(|(name, cs)| {
            cs.into_iter().map(move |c| Check {
                name: format!("{name}.{}", c.name),
                required: false,
                ..c
            })
        })
        .collect();
    Verdict {
        criterion,
        holds: matched.is_some(),
        matched,
        annotation: None,
        checks,
    }
}

fn not_applicable(criterion: Criterion, why: &str) -> Verdict {
    Verdict {
        criterion,
        holds: false,
        matched: None,
        annotation: Some(format!("not applicable: {why}")),
        checks: vec![],
    }
}

fn size(lo: i64, hi: Option<i64>, s: i64) -> Vec<Check> {
    let mut v = vec![Check::new("s_min", s, Relation::Ge, lo)];
    if let Some(hi) = hi {
        v.push(Check::new("s_max", s, Relation::Le, hi));
    }
    v
}

/// Base-point-free criterion for points specialised on a cubic. Zero
/// multiplicities are dropped; a negative one makes it inapplicable.
pub fn check_cubic(d: &DivisorClass) -> Verdict {
    let crit = Criterion::CubicSpecialization;
    let Some(x) = Sums::of(d) else {
        return not_applicable(crit, "negative multiplicity");
    };
    if x.s >= 0 && d.a < d.b.iter().copied().max().unwrap_or(0) {
        return not_applicable(crit, "a below the largest multiplicity");
    }
    let cubic = 3 * x.a - x.all;
    either_or(
        crit,
        vec![
            ("dominant", vec![Check::new("line", x.a, Relation::Ge, x.all)]),
            (
                "few_points",
                [
                    size(2, Some(6), x.s),
                    vec![Check::new("top3", x.a, Relation::Ge, x.top3)],
                ]
                .concat(),
            ),
            (
                "few_points_split",
                [
                    size(2, Some(7), x.s),
                    vec![
                        Check::new("top3", x.a - x.top3, Relation::Ge, -1),
                        Check::new("split", x.split, Relation::Ge, 2),
                    ],
                ]
                .concat(),
            ),
            (
                "many_points",
                [
                    size(7, None, x.s),
                    vec![
                        Check::new("top3", x.a, Relation::Ge, x.top3),
                        Check::new("cubic", cubic, Relation::Ge, 2),
                    ],
                ]
                .concat(),
            ),
            (
                "many_points_split",
                [
                    size(8, None, x.s),
                    vec![
                        Check::new("top3", x.a - x.top3, Relation::Ge, -1),
                        Check::new("cubic", cubic, Relation::Ge, 2),
                        Check::new("split", x.split, Relation::Ge, 2),
                    ],
                ]
                .concat(),
            ),
        ],
    )
}

/// The `h¹ = 0` alternatives that accompany [`check_cubic`].
pub fn check_vanishing(d: &DivisorClass) -> Verdict {
    let crit = Criterion::CubicVanishing;
    let Some(x) = Sums::of(d) else {
        return not_applicable(crit, "negative multiplicity");
    };
    let cubic = 3 * x.a - x.all;
    either_or(
        crit,
        vec![
            ("line", vec![Check::new("line", x.a - x.all, Relation::Ge, -1)]),
            (
                "few_points",
                [
                    size(2, Some(7), x.s),
                    vec![Check::new("top3", x.a, Relation::Ge, x.top3)],
                ]
                .concat(),
            ),
            (
                "few_points_split",
                [
                    size(2, Some(7), x.s),
                    vec![
                        Check::new("line", x.a - x.all, Relation::Ge, -1),
                        Check::new("split", x.split, Relation::Ge, 1),
                    ],
                ]
                .concat(),
            ),
            (
                "many_points",
                [
                    size(8, None, x.s),
                    vec![
                        Check::new("top3", x.a, Relation::Ge, x.top3),
                        Check::new("cubic", cubic, Relation::Ge, 1),
                    ],
                ]
                .concat(),
            ),
            (
                "many_points_split",
                [
                    size(8, None, x.s),
                    vec![
                        Check::new("top3", x.a - x.top3, Relation::Ge, -1),
                        Check::new("cubic", cubic, Relation::Ge, 1),
                        Check::new("split", x.split, Relation::Ge, 1),
                    ],
                ]
                .concat(),
            ),
        ],
    )
}

/// Criterion for `(p+2; p, 1^s)` (zero multiplicities allowed and ignored).
pub fn check_rational(d: &DivisorClass, p: i64) -> Result<Verdict> {
    let shaped = p >= 1 && d.a == p + 2 && d.b.first() == Some(&p) && d.b[1..].iter().all(|&x| x == 0 || x == 1);
    if !shaped {
        return Err(Error::Shape(format!(
            "{d} is not of the form (p+2; p, 1^s) with p = {p}"
        )));
    }
    let s = d.b[1..].iter().sum::<i64>();
    Ok(Verdict::all_required(
        Criterion::RationalPencil,
        vec![
            Check::new("irreducible_member", s, Relation::Le, 3 * p + 3),
            Check::info("very_ample", s, Relation::Le, 3 * p),
        ],
    ))
}

/// Normalised-class criterion `a ≥ b_0+b_1+b_2`, `a > b_0`, sorted `b ≥ 0`.
pub fn check_normalized(d: &DivisorClass) -> Verdict {
    let tail_sorted = d.b.len() < 2 || d.b[1..].windows(2).all(|w| w[0] >= w[1]);
    let at = |i: usize| d.b.get(i).copied().unwrap_or(0);
    Verdict::all_required(
        Criterion::Normalized,
        vec![
            Check::new("top3", d.a, Relation::Ge, at(0) + at(1) + at(2)),
            Check::new("first_sorted", at(0), Relation::Ge, at(1)),
            Check::new("tail_sorted", tail_sorted as i64, Relation::Eq, 1),
            Check::new("non_negative", d.b.iter().copied().min().unwrap_or(0), Relation::Ge, 0),
            Check::new("a_above_b0", d.a, Relation::Gt, at(0)),
        ],
    )
}

/// The five Gruson–Peskine inequalities on `surf`, after sorting `θ`
/// ascending. Also reports, without requiring it, `θ_max < r/2`.
pub fn check_c1c5(c: &GpCoords, surf: &SurfaceSpec) -> Verdict {
    let (n, p) = (surf.n, surf.p);
    let mut th = c.theta2.clone();
    th.sort_unstable();
    let r = c.r;
    let off_parity = th.iter().filter(|&&t| (t - r).rem_euclid(2) != 0).count() as i64;
    let parity = (2 * c.d + (p - n + 5) * r - th.iter().sum::<i64>()).rem_euclid(4);
    let mut disorder = 0;
    if th.len() >= 2 && th[0].abs() > th[1] {
        disorder += 1;
    }
    disorder += th.windows(2).skip(1).filter(|w| w[0] > w[1]).count() as i64;
    let top = th.last().copied().unwrap_or(i64::MIN);
    let spread = match th.split_first() {
        Some((first, rest)) => -first + rest.iter().sum::<i64>(),
        None => 0,
    };
    let mut checks = vec![
        Check::new("theta_half_integral", off_parity, Relation::Eq, 0),
        Check::new("degree_parity", parity, Relation::Eq, 0),
        Check::new("theta_ordered", disorder, Relation::Eq, 0),
        Check::new("theta_sum_bound", spread, Relation::Le, 2 * c.d - (n - p + 1) * r),
        Check::new("degree_lower_bound", c.d, Relation::Ge, (p - 1) * r + 2),
    ];
    if !th.is_empty() {
        checks.insert(3, Check::new("theta_cap", top, Relation::Le, r));
        checks.push(Check::info("theta_strict_cap", top, Relation::Lt, r));
    }
    Verdict::all_required(Criterion::GpInequalities, checks)
}

/// Standard-sheaf-sum criterion for a family-based trace.
pub fn check_lemma324(cert: &Certificate) -> Result<Verdict> {
    let Base::Family { a, u, eps } = cert.base else {
        return Err(Error::Shape("standard-sheaf criterion needs a family base".into()));
    };
    if !matches!(
        cert.route,
        Route::TildeShift | Route::SquaresLadder | Route::Lift | Route::HyperplaneShift
    ) || cert.counts.iter().any(|&t| t < 0)
        || !(0..=1).contains(&eps)
    {
        return Err(Error::Shape(
            "trace is not a family plus non-negative standard classes".into(),
        ));
    }
    let (n, p) = (cert.n, cert.p);
    let ones = u + eps;
    let t: i64 = cert.counts.iter().sum();
    let mut v = Verdict::all_required(
        Criterion::StandardSheafSum,
        vec![
            Check::new("sheaf_sum_bound", 3 * a, Relation::Ge, ones + n - 7 - (t + 1) * (n - 4)),
            Check::info(
                "sheaf_sum_bound_max_u",
                3 * a,
                Relation::Ge,
                3 * p - (t + 1) * (n - 4) - 2,
            ),
        ],
    );
    if !v.holds && t == 2 && p == n - 4 && a == -1 {
        v.holds = true;
        v.annotation = Some("p = n-4, a = -1, t = 2: settled by specialising to a cubic".into());
    }
    Ok(v)
}

/// Recompute everything a certificate claims and attach the verdict.
pub fn verify(cert: &Certificate) -> Result<Certificate> {
    let surf = cert.surface()?;
    let mut checks = Vec::new();
    let sized = cert.class.len() == surf.len();
    checks.push(Check::new(
        "class_length",
        cert.class.len() as i64,
        Relation::Eq,
        surf.len() as i64,
    ));
    if !sized {
        let v = Verdict::all_required(Criterion::GpInequalities, checks);
        return Ok(Certificate {
            verdict: Some(v),
            ..cert.clone()
        });
    }
    let (d, g) = cert.recompute()?;
    checks.push(Check::new("degree", d, Relation::Eq, cert.d));
    checks.push(Check::new("genus", g, Relation::Eq, cert.g));
    let mismatched = match cert.replay() {
        Ok(c) if c.len() == cert.class.len() => {
            (c.a != cert.class.a) as i64 + c.b.iter().zip(&cert.class.b).filter(|(x, y)| x != y).count() as i64
        }
        _ => -1,
    };
    checks.push(Check::new("trace_replay_mismatches", mismatched, Relation::Eq, 0));
    checks.push(Check::info(
        "exceeds_surface_degree",
        d,
        Relation::Gt,
        surf.n + surf.p - 1,
    ));
    if let Ok(x) = alpha_x(surf.p, d, surf.n) {
        checks.push(Check::info(
            "r_bound",
            cert.class.a - cert.class.b[0],
            Relation::Le,
            2 * (x + 1),
        ));
    }

    let family = matches!(cert.base, Base::Family { .. });
    let main = if in_ladder_region(cert.n, cert.p) && cert.route != Route::LowDegree && family {
        check_lemma324(cert)?
    } else {
        let sorted = cert.class.sorted_tail();
        let mut v = check_c1c5(&surf.to_gp(&sorted)?, &surf);
        v.checks.push(Check::info(
            "first_split",
            sorted.b[0],
            Relation::Ge,
            sorted.b.get(1).copied().unwrap_or(0),
        ));
        if cert.route != Route::LowDegree {
            let thr = 2 * (3 * surf.p + surf.n + 9);
            v.checks
                .push(Check::new("pipeline_threshold", 3 * d, Relation::Ge, thr));
            v.checks
                .push(Check::new("above_projection_range", d, Relation::Ge, 2 * surf.n + 1));
            v.holds = v.holds && !below_pipeline_threshold(surf.n, surf.p, d) && d > 2 * surf.n;
        }
        v
    };
    let holds = checks.iter().all(|c| c.holds || !c.required) && main.holds;
    checks.extend(main.checks);
    let verdict = Verdict {
        criterion: main.criterion,
        holds,
        matched: main.matched,
        annotation: main.annotation,
        checks,
    };
    Ok(Certificate {
        verdict: Some(verdict),
        ..cert.clone()
    })
}

/// [`verify`], turning a failed verdict into an error naming the first
/// failing inequality.
pub fn verify_strict(cert: &Certificate) -> Result<Certificate> {
    let out = verify(cert)?;
    let v = out.verdict.as_ref().expect("verify fills the verdict");
    if !v.holds {
        let why = v
            .first_failure()
            .map(|c| c.to_string())
            .unwrap_or_else(|| format!("{:?} failed", v.criterion));
        return Err(Error::Verification(why));
    }
    Ok(out)
}

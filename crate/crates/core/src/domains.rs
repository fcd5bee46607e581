//! Labels for the `(d,g)`-plane decomposition and the `n = 3` gap test.
//!
//! Overlaps between the defining inequalities are resolved by a fixed
//! precedence: bands (greatest `p` first), then the upper strip under `B`,
//! then the low-genus strip.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::numerics::{alpha, boundary, castelnuovo, min_band_p, pi_p};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "p")]
pub enum Tag {
    /// `d < n` or `g < 0`.
    OutOfRange,
    /// `g > π₀(d,n)`: no non-degenerate curve at all.
    AboveCastelnuovo,
    /// `n ≤ d ≤ 2n`, covered by projections.
    A0,
    /// `0 ≤ g ≤ α_{n−3}(d,n)`, the low-genus strip.
    APrime,
    /// `α_{p+1}(d−1,n) ≤ g ≤ α_p(d,n)`, built on `X^n_p`.
    Band(i64),
    /// `α_{k+1}(d−1,n) < g ≤ B(d,n)`, the strip just under the boundary.
    TildeAk,
    /// `B(d,n) < g ≤ π₀(d,n)`, the lacunary domain.
    D2,
    /// `n = 3`, `d ≥ 7`, `g ≤ π₁(d,3)`.
    NonLacunary,
    /// Under `B` but claimed by none of the strips (never expected).
    Uncovered,
}

impl Tag {
    pub fn name(&self) -> &'static str {
        match self {
            Tag::OutOfRange => "OutOfRange",
            Tag::AboveCastelnuovo => "AboveCastelnuovo",
            Tag::A0 => "A0",
            Tag::APrime => "APrime",
            Tag::Band(_) => "Band",
            Tag::TildeAk => "TildeAk",
            Tag::D2 => "D2",
            Tag::NonLacunary => "NonLacunary",
            Tag::Uncovered => "Uncovered",
        }
    }

    pub fn band(&self) -> Option<i64> {
        match self {
            Tag::Band(p) => Some(*p),
            _ => None,
        }
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tag::Band(p) => write!(f, "Band({p})"),
            t => f.write_str(t.name()),
        }
    }
}

/// Boundary values consulted while labelling a point.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witnesses {
    pub castelnuovo: Option<i64>,
    pub big_b: Option<i64>,
    /// `α_p(d,n)` for the winning band.
    pub band_upper: Option<i64>,
    /// `α_{p+1}(d−1,n)` for the winning band.
    pub band_lower: Option<i64>,
    /// `α_{k+1}(d−1,n)`, lower edge of the strip under `B`.
    pub tilde_lower: Option<i64>,
    /// `α_{n−3}(d,n)`, upper edge of the low-genus strip.
    pub low_upper: Option<i64>,
    /// The point also satisfies the upper-strip inequalities; only
    /// precedence decided the label.
    pub edge_overlap: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DomainLabel {
    pub n: i64,
    pub d: i64,
    pub g: i64,
    pub tag: Tag,
    pub witnesses: Witnesses,
}

/// Label `(n,d,g)` for `n ≥ 3`.
pub fn classify(n: i64, d: i64, g: i64) -> Result<DomainLabel> {
    if n < 3 {
        return Err(Error::Domain(format!("classify needs n >= 3, got {n}")));
    }
    let mut w = Witnesses::default();
    let label = |tag, witnesses| {
        Ok(DomainLabel {
            n,
            d,
            g,
            tag,
            witnesses,
        })
    };
    if d < n || g < 0 {
        return label(Tag::OutOfRange, w);
    }
    let pi0 = castelnuovo(d, n)?;
    w.castelnuovo = Some(pi0);
    if g > pi0 {
        return label(Tag::AboveCastelnuovo, w);
    }
    if d <= 2 * n {
        return label(Tag::A0, w);
    }
    if n == 3 {
        let pi1 = pi_p(1, d, 3)?.value;
        w.big_b = Some(pi1);
        let tag = if g <= pi1 { Tag::NonLacunary } else { Tag::D2 };
        return label(tag, w);
    }
    let big_b = boundary(n)?.big_b(d)?;
    w.big_b = Some(big_b);
    if g > big_b {
        return label(Tag::D2, w);
    }
    let k = n / 3;
    let tilde_lower = alpha(k + 1, d - 1, n)?;
    w.tilde_lower = Some(tilde_lower);
    let in_tilde = tilde_lower < g;
    for p in (min_band_p(n)..=n - 4).rev() {
        let lower = alpha(p + 1, d - 1, n)?;
        let upper = alpha(p, d, n)?;
        if lower <= g && g <= upper {
            w.band_lower = Some(lower);
            w.band_upper = Some(upper);
            w.edge_overlap = in_tilde;
            return label(Tag::Band(p), w);
        }
    }
    if in_tilde {
        return label(Tag::TildeAk, w);
    }
    let low_upper = alpha(n - 3, d, n)?;
    w.low_upper = Some(low_upper);
    if g <= low_upper {
        return label(Tag::APrime, w);
    }
    label(Tag::Uncovered, w)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GapStatus {
    /// `g ≤ π₁(d,3)`.
    NonLacunaryRegion,
    /// Above `π₁` with `(d−2)² − 4g` a perfect square.
    GapFree,
    /// Above `π₁` with `(d−2)² − 4g` not a square: no smooth space curve.
    Gap,
}

/// Gap test for space curves (`n = 3`).
pub fn n3_gap(d: i64, g: i64) -> Result<GapStatus> {
    if d < 3 || g < 0 {
        return Err(Error::Domain(format!("n3_gap needs d >= 3 and g >= 0, got ({d},{g})")));
    }
    let pi0 = castelnuovo(d, 3)?;
    if g > pi0 {
        return Err(Error::Domain(format!("g = {g} exceeds pi_0({d},3) = {pi0}")));
    }
    if g <= pi_p(1, d, 3)?.value {
        return Ok(GapStatus::NonLacunaryRegion);
    }
    let disc = (d - 2) * (d - 2) - 4 * g;
    let square = disc >= 0 && {
        let r = (disc as u64).isqrt();
        r * r == disc as u64
    };
    Ok(if square { GapStatus::GapFree } else { GapStatus::Gap })
}

/// Every labelled point with `n ≤ d ≤ d_max`, `0 ≤ g ≤ π₀(d,n)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AuditReport {
    pub n: i64,
    pub d_max: i64,
    pub rows: Vec<DomainLabel>,
    pub uncovered: Vec<(i64, i64)>,
    /// Points decided by precedence between a band and the upper strip.
    pub edge_overlaps: usize,
    pub counts: BTreeMap<String, usize>,
}

pub fn decomposition_audit(n: i64, d_max: i64, exec: Exec) -> Result<AuditReport> {
    let ds: Vec<i64> = (n..=d_max).collect();
    let columns = exec.map(ds, |d| -> Result<Vec<DomainLabel>> {
        let top = castelnuovo(d, n)?;
        (0..=top).map(|g| classify(n, d, g)).collect()
    });
    let mut rows = Vec::new();
    for c in columns {
        rows.extend(c?);
    }
    let mut counts = BTreeMap::new();
    let mut uncovered = Vec::new();
    let mut edge_overlaps = 0;
    for r in &rows {
        *counts.entry(r.tag.name().to_string()).or_insert(0) += 1;
        if r.tag == Tag::Uncovered {
            uncovered.push((r.d, r.g));
        }
        if r.witnesses.edge_overlap {
            edge_overlaps += 1;
        }
    }
    Ok(AuditReport {
        n,
        d_max,
        rows,
        uncovered,
        edge_overlaps,
        counts,
    })
}

#[derive(Serialize)]
struct CsvRow {
    d: i64,
    g: i64,
    tag: &'static str,
    p: Option<i64>,
    castelnuovo: Option<i64>,
    big_b: Option<i64>,
    band_upper: Option<i64>,
    band_lower: Option<i64>,
    tilde_lower: Option<i64>,
    low_upper: Option<i64>,
    edge_overlap: u8,
}

impl AuditReport {
    pub fn write_csv<W: Write>(&self, out: W) -> std::io::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for r in &self.rows {
            let x = &r.witnesses;
            w.serialize(CsvRow {
                d: r.d,
                g: r.g,
                tag: r.tag.name(),
                p: r.tag.band(),
                castelnuovo: x.castelnuovo,
                big_b: x.big_b,
                band_upper: x.band_upper,
                band_lower: x.band_lower,
                tilde_lower: x.tilde_lower,
                low_upper: x.low_upper,
                edge_overlap: x.edge_overlap as u8,
            })?;
        }
        w.flush()
    }
}

//! Grid sweeps over `(d,g)` for a fixed `n`: classify, build, verify.

use std::io::Write;

use serde::Serialize;

use crate::builder::{build, Certificate, Route};
use crate::domains::{classify, n3_gap, GapStatus, Tag};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::numerics::castelnuovo;
use crate::smoothness::verify;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Modes {
    pub build: bool,
    pub verify: bool,
}

impl Modes {
    pub const CLASSIFY: Modes = Modes {
        build: false,
        verify: false,
    };
    pub const ALL: Modes = Modes {
        build: true,
        verify: true,
    };
}

#[derive(Debug, Clone)]
pub struct ScanRow {
    pub d: i64,
    pub g: i64,
    pub tag: Tag,
    pub gap: Option<GapStatus>,
    pub cert: Option<Certificate>,
    pub error: Option<String>,
}

impl ScanRow {
    pub fn holds(&self) -> Option<bool> {
        self.cert.as_ref()?.verdict.as_ref().map(|v| v.holds)
    }

    pub fn annotated(&self) -> bool {
        self.cert
            .as_ref()
            .and_then(|c| c.verdict.as_ref())
            .is_some_and(|v| v.annotation.is_some())
    }

    /// Band point that failed to build, or whose verdict failed.
    pub fn failed(&self) -> bool {
        self.error.is_some() || self.holds() == Some(false)
    }
}

/// `(d, g)` for `d_lo ≤ d ≤ d_hi`, `0 ≤ g ≤ π₀(d,n)`, column by column.
pub fn grid(n: i64, d_lo: i64, d_hi: i64) -> Result<Vec<(i64, i64)>> {
    let mut pts = Vec::new();
    for d in d_lo.max(n)..=d_hi {
        let top = castelnuovo(d, n)?;
        pts.extend((0..=top).map(|g| (d, g)));
    }
    Ok(pts)
}

fn scan_point(n: i64, d: i64, g: i64, modes: Modes) -> Result<ScanRow> {
    let tag = classify(n, d, g)?.tag;
    let gap = if n == 3 && tag == Tag::D2 {
        Some(n3_gap(d, g)?)
    } else {
        None
    };
    let mut row = ScanRow {
        d,
        g,
        tag,
        gap,
        cert: None,
        error: None,
    };
    if !(modes.build || modes.verify) || tag.band().is_none() {
        return Ok(row);
    }
    match build(n, d, g) {
        Ok(c) => row.cert = Some(if modes.verify { verify(&c)? } else { c }),
        Err(e @ (Error::Unreachable { .. } | Error::Region(_) | Error::OutOfStrip { .. } | Error::Verification(_))) => {
            row.error = Some(e.to_string())
        }
        Err(e) => return Err(e),
    }
    Ok(row)
}

/// Classify (and optionally build and verify) every grid point. Row order
/// is the grid order regardless of `exec`.
pub fn scan(n: i64, d_lo: i64, d_hi: i64, modes: Modes, exec: Exec) -> Result<Vec<ScanRow>> {
    let pts = grid(n, d_lo, d_hi)?;
    exec.map(pts, |(d, g)| scan_point(n, d, g, modes)).into_iter().collect()
}

#[derive(Serialize)]
struct CsvRow<'a> {
    d: i64,
    g: i64,
    tag: &'a str,
    p: Option<i64>,
    gap: Option<&'a str>,
    route: Option<String>,
    surface_p: Option<i64>,
    holds: Option<u8>,
    annotated: u8,
    error: Option<&'a str>,
}

fn route_name(r: Route) -> String {
    serde_json::to_value(r)
        .ok()
        .and_then(|v| v.as_str().map(str::to_owned))
        .unwrap_or_default()
}

/// Columns: `d, g, tag, p, gap, route, surface_p, holds, annotated, error`.
pub fn write_csv<W: Write>(rows: &[ScanRow], out: W) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    if rows.is_empty() {
        w.write_record([
            "d",
            "g",
            "tag",
            "p",
            "gap",
            "route",
            "surface_p",
            "holds",
            "annotated",
            "error",
        ])?;
    }
    for r in rows {
        w.serialize(CsvRow {
            d: r.d,
            g: r.g,
            tag: r.tag.name(),
            p: r.tag.band(),
            gap: r.gap.map(|g| match g {
                GapStatus::Gap => "gap",
                GapStatus::GapFree => "gap_free",
                GapStatus::NonLacunaryRegion => "non_lacunary",
            }),
            route: r.cert.as_ref().map(|c| route_name(c.route)),
            surface_p: r.cert.as_ref().map(|c| c.p),
            holds: r.holds().map(u8::from),
            annotated: r.annotated() as u8,
            error: r.error.as_deref(),
        })?;
    }
    w.flush()
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub points: usize,
    pub band_points: usize,
    pub built: usize,
    pub verified: usize,
    pub annotated: usize,
    pub failures: usize,
}

pub fn summarize(rows: &[ScanRow]) -> Summary {
    let mut s = Summary {
        points: rows.len(),
        ..Summary::default()
    };
    for r in rows {
        s.band_points += r.tag.band().is_some() as usize;
        s.built += r.cert.is_some() as usize;
        s.verified += (r.holds() == Some(true)) as usize;
        s.annotated += r.annotated() as usize;
        s.failures += r.failed() as usize;
    }
    s
}

//! Static SVG of the `(d,g)`-plane for one `n`: boundary curves, band cells
//! and, for `n = 3`, gap markers. Output uses integer coordinates only, so
//! it is byte-stable for fixed input.

use std::fmt::Write;

use crate::domains::GapStatus;
use crate::numerics::{a_start, alpha, boundary, castelnuovo, min_band_p, pi_p};
use crate::sweep::ScanRow;

const CELL_W: i64 = 10;
const CELL_H: i64 = 4;
const MARGIN: i64 = 40;
const PALETTE: [&str; 8] = [
    "#4e79a7", "#f28e2b", "#59a14f", "#e15759", "#76b7b2", "#edc948", "#b07aa1", "#9c755f",
];

struct Frame {
    d_lo: i64,
    g_top: i64,
    width: i64,
    height: i64,
}

impl Frame {
    fn x(&self, d: i64) -> i64 {
        MARGIN + (d - self.d_lo) * CELL_W
    }

    fn y(&self, g: i64) -> i64 {
        MARGIN + (self.g_top - g) * CELL_H
    }
}

fn polyline(out: &mut String, f: &Frame, id: &str, color: &str, pts: &[(i64, i64)]) {
    if pts.is_empty() {
        return;
    }
    let coords: Vec<String> = pts.iter().map(|&(d, g)| format!("{},{}", f.x(d), f.y(g))).collect();
    let _ = writeln!(
        out,
        r#"<polyline id="{id}" fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
        coords.join(" ")
    );
}

fn curve(d_lo: i64, d_hi: i64, f: impl Fn(i64) -> Option<i64>) -> Vec<(i64, i64)> {
    (d_lo..=d_hi).filter_map(|d| f(d).map(|g| (d, g))).collect()
}

/// Render the chart for `n` over `d_lo..=d_hi` from scan rows.
pub fn render(n: i64, d_lo: i64, d_hi: i64, rows: &[ScanRow]) -> String {
    let d_lo = d_lo.max(n);
    let span = (d_hi - d_lo).max(0);
    let g_top = if d_hi >= d_lo {
        castelnuovo(d_hi, n).unwrap_or(0)
    } else {
        0
    };
    let f = Frame {
        d_lo,
        g_top,
        width: 2 * MARGIN + span * CELL_W,
        height: 2 * MARGIN + g_top * CELL_H,
    };
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
        w = f.width,
        h = f.height
    );
    let _ = writeln!(out, r#"<title>(d,g)-plane for n = {n}, d in {d_lo}..{d_hi}</title>"#);
    let (x0, x1, y0, y1) = (f.x(d_lo), f.x(d_lo + span), f.y(0), f.y(g_top));
    let _ = writeln!(out, r##"<g id="axes" stroke="#000" stroke-width="1">"##);
    let _ = writeln!(out, r#"<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}"/>"#);
    let _ = writeln!(out, r#"<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}"/>"#);
    let _ = writeln!(out, "</g>");
    let _ = writeln!(
        out,
        r#"<text x="{x1}" y="{}" font-size="10" text-anchor="end">d</text>"#,
        y0 + 20
    );
    let _ = writeln!(out, r#"<text x="{}" y="{y1}" font-size="10">g</text>"#, x0 - 20);

    if d_hi >= d_lo {
        let _ = writeln!(out, r#"<g id="band-cells" stroke="none">"#);
        for r in rows {
            if let Some(p) = r.tag.band() {
                let color = PALETTE[(p.rem_euclid(PALETTE.len() as i64)) as usize];
                let _ = writeln!(
                    out,
                    r#"<rect x="{}" y="{}" width="{CELL_W}" height="{CELL_H}" fill="{color}" fill-opacity="0.5"><title>({},{}) p={p}</title></rect>"#,
                    f.x(r.d) - CELL_W / 2,
                    f.y(r.g) - CELL_H / 2,
                    r.d,
                    r.g
                );
            }
        }
        let _ = writeln!(out, "</g>");

        polyline(
            &mut out,
            &f,
            "castelnuovo",
            "#000",
            &curve(d_lo, d_hi, |d| castelnuovo(d, n).ok()),
        );
        let bk = if n >= 4 {
            boundary(n).ok().map(|b| {
                curve(d_lo, d_hi, |d| {
                    if d <= 2 * n {
                        castelnuovo(d, n).ok()
                    } else {
                        b.big_b(d).ok()
                    }
                })
            })
        } else {
            Some(curve(d_lo, d_hi, |d| pi_p(1, d, 3).ok().map(|x| x.value)))
        };
        if let Some(pts) = bk {
            polyline(&mut out, &f, "lacunary-boundary", "#d62728", &pts);
        }
        for p in min_band_p(n)..=n - 4 {
            let color = PALETTE[(p.rem_euclid(PALETTE.len() as i64)) as usize];
            let pts = curve(d_lo.max(a_start(p, n)), d_hi, |d| alpha(p, d, n).ok());
            polyline(&mut out, &f, &format!("alpha-{p}"), color, &pts);
        }

        let gaps: Vec<&ScanRow> = rows.iter().filter(|r| r.gap == Some(GapStatus::Gap)).collect();
        if !gaps.is_empty() {
            let _ = writeln!(out, r##"<g id="gaps" fill="#d62728">"##);
            for r in gaps {
                let _ = writeln!(
                    out,
                    r#"<circle cx="{}" cy="{}" r="2"><title>gap ({},{})</title></circle>"#,
                    f.x(r.d),
                    f.y(r.g),
                    r.d,
                    r.g
                );
            }
            let _ = writeln!(out, "</g>");
        }
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exec::Exec;
    use crate::sweep::{scan, Modes};

    #[test]
    fn counts_cells_and_curves() {
        let rows = scan(9, 19, 30, Modes::CLASSIFY, Exec::Parallel).unwrap();
        let svg = render(9, 19, 30, &rows);
        let bands = rows.iter().filter(|r| r.tag.band().is_some()).count();
        assert_eq!(svg.matches("<rect").count(), bands);
        // Castelnuovo, boundary, and α_3, α_4, α_5
        assert_eq!(svg.matches("<polyline").count(), 5);
        assert!(svg.starts_with("<svg"));
    }

    #[test]
    fn gap_markers_for_space_curves() {
        let rows = scan(3, 3, 20, Modes::CLASSIFY, Exec::Sequential).unwrap();
        let svg = render(3, 3, 20, &rows);
        let gaps = rows.iter().filter(|r| r.gap == Some(GapStatus::Gap)).count();
        assert!(gaps > 0);
        assert_eq!(svg.matches("<circle").count(), gaps);
    }

    #[test]
    fn empty_range_is_axes_only() {
        let svg = render(9, 30, 29, &[]);
        assert!(!svg.contains("<polyline") && !svg.contains("<rect"));
        assert_eq!(svg.matches("<line").count(), 2);
    }
}

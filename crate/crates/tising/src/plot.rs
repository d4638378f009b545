//! Minimal SVG renderers for the CSV artifacts: line charts and a heat
//! table. No drawing dependency; the output is a few hundred SVG elements.

use crate::error::{Error, Result};

const W: f64 = 640.0;
const H: f64 = 420.0;
const MARGIN: f64 = 56.0;

const PALETTE: &[&str] = &[
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf",
];

/// One named line of `(x, y)` points.
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

fn bounds(series: &[Series]) -> (f64, f64, f64, f64) {
    let mut xmin = f64::INFINITY;
    let mut xmax = f64::NEG_INFINITY;
    let mut ymin = f64::INFINITY;
    let mut ymax = f64::NEG_INFINITY;
    for s in series {
        for &(x, y) in &s.points {
            xmin = xmin.min(x);
            xmax = xmax.max(x);
            ymin = ymin.min(y);
            ymax = ymax.max(y);
        }
    }
    if !xmin.is_finite() || xmax == xmin {
        xmax = xmin + 1.0;
    }
    if !ymin.is_finite() || ymax == ymin {
        ymax = ymin + 1.0;
    }
    (xmin, xmax, ymin, ymax)
}

/// Render a multi-series line chart.
pub fn line_chart(title: &str, xlabel: &str, ylabel: &str, series: &[Series]) -> String {
    let (xmin, xmax, ymin, ymax) = bounds(series);
    let sx = |x: f64| MARGIN + (x - xmin) / (xmax - xmin) * (W - 2.0 * MARGIN);
    let sy = |y: f64| H - MARGIN - (y - ymin) / (ymax - ymin) * (H - 2.0 * MARGIN);
    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" \
         viewBox=\"0 0 {W} {H}\" font-family=\"monospace\" font-size=\"12\">\n"
    ));
    out.push_str(&format!(
        "<rect width=\"{W}\" height=\"{H}\" fill=\"white\"/>\n\
         <text x=\"{}\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">{}</text>\n",
        W / 2.0,
        title
    ));
    // axes
    out.push_str(&format!(
        "<line x1=\"{m}\" y1=\"{b}\" x2=\"{r}\" y2=\"{b}\" stroke=\"black\"/>\n\
         <line x1=\"{m}\" y1=\"{t}\" x2=\"{m}\" y2=\"{b}\" stroke=\"black\"/>\n",
        m = MARGIN,
        b = H - MARGIN,
        r = W - MARGIN,
        t = MARGIN
    ));
    out.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n",
        W / 2.0,
        H - 12.0,
        xlabel
    ));
    out.push_str(&format!(
        "<text x=\"14\" y=\"{}\" text-anchor=\"middle\" transform=\"rotate(-90 14 {})\">{}</text>\n",
        H / 2.0,
        H / 2.0,
        ylabel
    ));
    for (tick, frac) in [(xmin, 0.0), (0.5 * (xmin + xmax), 0.5), (xmax, 1.0)] {
        let x = MARGIN + frac * (W - 2.0 * MARGIN);
        out.push_str(&format!(
            "<text x=\"{x}\" y=\"{}\" text-anchor=\"middle\">{tick:.3}</text>\n",
            H - MARGIN + 16.0
        ));
    }
    for (tick, frac) in [(ymin, 0.0), (0.5 * (ymin + ymax), 0.5), (ymax, 1.0)] {
        let y = H - MARGIN - frac * (H - 2.0 * MARGIN);
        out.push_str(&format!(
            "<text x=\"{}\" y=\"{y}\" text-anchor=\"end\">{tick:.3}</text>\n",
            MARGIN - 6.0
        ));
    }
    for (k, s) in series.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        let path: Vec<String> = s
            .points
            .iter()
            .enumerate()
            .map(|(i, &(x, y))| {
                format!("{}{:.2},{:.2}", if i == 0 { "M" } else { "L" }, sx(x), sy(y))
            })
            .collect();
        out.push_str(&format!(
            "<path d=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"/>\n",
            path.join(" ")
        ));
        for &(x, y) in &s.points {
            out.push_str(&format!(
                "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"2.4\" fill=\"{color}\"/>\n",
                sx(x),
                sy(y)
            ));
        }
        out.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" fill=\"{color}\">{}</text>\n",
            W - MARGIN + 4.0,
            MARGIN + 14.0 * k as f64,
            s.label
        ));
    }
    out.push_str("</svg>\n");
    out
}

/// Render a (p, h) -> value heat table with the value printed per cell.
pub fn heat_table(title: &str, cells: &[(f64, f64, Option<f64>)]) -> String {
    let mut ps: Vec<f64> = cells.iter().map(|c| c.0).collect();
    let mut hs: Vec<f64> = cells.iter().map(|c| c.1).collect();
    ps.sort_by(f64::total_cmp);
    ps.dedup();
    hs.sort_by(f64::total_cmp);
    hs.dedup();
    let finite: Vec<f64> = cells.iter().filter_map(|c| c.2).collect();
    let vmax = finite.iter().cloned().fold(1e-12, f64::max);
    let cw = (W - 2.0 * MARGIN) / ps.len() as f64;
    let ch = (H - 2.0 * MARGIN) / hs.len() as f64;
    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" \
         viewBox=\"0 0 {W} {H}\" font-family=\"monospace\" font-size=\"9\">\n\
         <rect width=\"{W}\" height=\"{H}\" fill=\"white\"/>\n\
         <text x=\"{}\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">{title}</text>\n",
        W / 2.0
    ));
    for &(p, h, v) in cells {
        let i = ps.iter().position(|&q| q == p).unwrap();
        let j = hs.iter().position(|&q| q == h).unwrap();
        let x = MARGIN + i as f64 * cw;
        let y = H - MARGIN - (j + 1) as f64 * ch;
        let (fill, label) = match v {
            Some(val) => {
                let t = (val / vmax).clamp(0.0, 1.0);
                let shade = (255.0 - t * 170.0) as u8;
                (format!("rgb(255,{shade},{shade})"), format!("{val:.3}"))
            }
            None => ("rgb(200,200,255)".to_string(), "inf".to_string()),
        };
        out.push_str(&format!(
            "<rect x=\"{x:.1}\" y=\"{y:.1}\" width=\"{cw:.1}\" height=\"{ch:.1}\" \
             fill=\"{fill}\" stroke=\"#999\"/>\n\
             <text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"middle\">{label}</text>\n",
            x + cw / 2.0,
            y + ch / 2.0 + 3.0
        ));
    }
    for (i, p) in ps.iter().enumerate() {
        out.push_str(&format!(
            "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"middle\">p={p}</text>\n",
            MARGIN + (i as f64 + 0.5) * cw,
            H - MARGIN + 14.0
        ));
    }
    for (j, h) in hs.iter().enumerate() {
        out.push_str(&format!(
            "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"end\">h={h}</text>\n",
            MARGIN - 4.0,
            H - MARGIN - (j as f64 + 0.5) * ch + 3.0
        ));
    }
    out.push_str("</svg>\n");
    out
}

/// Parse our own numeric CSVs: a header line then float columns (a cell
/// may be `inf` or empty).
pub fn read_csv(text: &str) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let mut lines = text.lines();
    let header: Vec<String> = lines
        .next()
        .ok_or_else(|| Error::Config("empty CSV".into()))?
        .split(',')
        .map(|s| s.trim().to_string())
        .collect();
    let mut rows = Vec::new();
    for (k, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let row: Vec<f64> = line
            .split(',')
            .map(|cell| {
                let cell = cell.trim();
                if cell.is_empty() {
                    Ok(f64::NAN)
                } else if cell == "inf" {
                    Ok(f64::INFINITY)
                } else {
                    cell.parse::<f64>().map_err(|_| {
                        Error::Config(format!("CSV row {}: bad number `{cell}`", k + 2))
                    })
                }
            })
            .collect::<Result<_>>()?;
        if row.len() != header.len() {
            return Err(Error::Config(format!("CSV row {} has wrong arity", k + 2)));
        }
        rows.push(row);
    }
    Ok((header, rows))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_chart_is_valid_svg() {
        let svg = line_chart(
            "t",
            "x",
            "y",
            &[Series {
                label: "a".into(),
                points: vec![(0.0, 0.0), (1.0, 0.5), (2.0, 0.25)],
            }],
        );
        assert!(svg.starts_with("<svg"));
        assert!(svg.ends_with("</svg>\n"));
        assert!(svg.contains("<path"));
    }

    #[test]
    fn heat_table_marks_flagged_cells() {
        let svg = heat_table(
            "ratios",
            &[(0.2, 0.0, Some(1.5)), (0.4, 0.0, None)],
        );
        assert!(svg.contains("inf"));
        assert!(svg.contains("1.500"));
    }

    #[test]
    fn csv_round_trip() {
        let (header, rows) = read_csv("a,b\n1,2\n3,inf\n").unwrap();
        assert_eq!(header, vec!["a", "b"]);
        assert_eq!(rows[0], vec![1.0, 2.0]);
        assert!(rows[1][1].is_infinite());
        assert!(read_csv("a,b\n1\n").is_err());
    }
}

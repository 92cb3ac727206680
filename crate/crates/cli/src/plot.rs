//! Deterministic SVG rendering of efficiency sweeps: one panel per
//! correlation value, one polyline per scale parameter, and a solid
//! horizontal line at the asymptote 1 - r²/2 in each panel.

use cokrig::efficiency::EfficiencyRecord;

const PANEL_WIDTH: f64 = 320.0;
const PANEL_HEIGHT: f64 = 260.0;
const MARGIN_LEFT: f64 = 58.0;
const MARGIN_RIGHT: f64 = 20.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 48.0;
const PANEL_GAP: f64 = 36.0;
const Y_MIN: f64 = 0.5;
const Y_MAX: f64 = 1.05;

const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
];

fn sorted_unique(values: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut v: Vec<f64> = values.collect();
    v.sort_by(|a, b| a.total_cmp(b));
    v.dedup();
    v
}

/// Renders the figure; identical input bytes produce identical output bytes.
pub fn render(records: &[EfficiencyRecord]) -> String {
    let rs = sorted_unique(records.iter().map(|r| r.r));
    let alphas = sorted_unique(records.iter().map(|r| r.alpha));
    let n_min = records.iter().map(|r| r.n).min().unwrap_or(2);
    let n_max = records.iter().map(|r| r.n).max().unwrap_or(2);

    let panels = rs.len().max(1);
    let width =
        MARGIN_LEFT + panels as f64 * PANEL_WIDTH + (panels - 1) as f64 * PANEL_GAP + MARGIN_RIGHT;
    let height = MARGIN_TOP + PANEL_HEIGHT + MARGIN_BOTTOM;

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{width:.0}\" height=\"{height:.0}\" viewBox=\"0 0 {width:.0} {height:.0}\">\n"
    ));
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    svg.push_str(&format!(
        "<text x=\"{:.1}\" y=\"20\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\">Relative efficiency of kriging to cokriging</text>\n",
        width / 2.0
    ));

    for (p, &r) in rs.iter().enumerate() {
        let x0 = MARGIN_LEFT + p as f64 * (PANEL_WIDTH + PANEL_GAP);
        let y0 = MARGIN_TOP;
        render_panel(&mut svg, records, r, &alphas, n_min, n_max, x0, y0);
    }

    svg.push_str("</svg>\n");
    svg
}

#[allow(clippy::too_many_arguments)]
fn render_panel(
    svg: &mut String,
    records: &[EfficiencyRecord],
    r: f64,
    alphas: &[f64],
    n_min: usize,
    n_max: usize,
    x0: f64,
    y0: f64,
) {
    let x_of = |n: usize| -> f64 {
        if n_max == n_min {
            x0 + PANEL_WIDTH / 2.0
        } else {
            x0 + (n - n_min) as f64 / (n_max - n_min) as f64 * PANEL_WIDTH
        }
    };
    let y_of = |v: f64| -> f64 {
        let clamped = v.clamp(Y_MIN, Y_MAX);
        y0 + PANEL_HEIGHT - (clamped - Y_MIN) / (Y_MAX - Y_MIN) * PANEL_HEIGHT
    };

    // frame
    svg.push_str(&format!(
        "<rect x=\"{x0:.1}\" y=\"{y0:.1}\" width=\"{PANEL_WIDTH:.1}\" height=\"{PANEL_HEIGHT:.1}\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n"
    ));
    svg.push_str(&format!(
        "<text x=\"{:.1}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">r = {r}</text>\n",
        x0 + PANEL_WIDTH / 2.0,
        y0 - 8.0
    ));

    // y ticks every 0.1
    let mut tick = Y_MIN;
    while tick <= Y_MAX + 1e-9 {
        let y = y_of(tick);
        svg.push_str(&format!(
            "<line x1=\"{:.1}\" y1=\"{y:.1}\" x2=\"{x0:.1}\" y2=\"{y:.1}\" stroke=\"black\" stroke-width=\"1\"/>\n",
            x0 - 4.0
        ));
        svg.push_str(&format!(
            "<text x=\"{:.1}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">{tick:.1}</text>\n",
            x0 - 7.0,
            y + 3.5
        ));
        tick += 0.1;
    }

    // x ticks at up to 5 positions
    let span = (n_max - n_min).max(1);
    let step = ((span as f64 / 4.0).ceil() as usize).max(1);
    let mut n = n_min;
    while n <= n_max {
        let x = x_of(n);
        let yb = y0 + PANEL_HEIGHT;
        svg.push_str(&format!(
            "<line x1=\"{x:.1}\" y1=\"{yb:.1}\" x2=\"{x:.1}\" y2=\"{:.1}\" stroke=\"black\" stroke-width=\"1\"/>\n",
            yb + 4.0
        ));
        svg.push_str(&format!(
            "<text x=\"{x:.1}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">{n}</text>\n",
            yb + 16.0
        ));
        if n == n_max {
            break;
        }
        n = (n + step).min(n_max);
    }

    // axis labels
    svg.push_str(&format!(
        "<text x=\"{:.1}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">n</text>\n",
        x0 + PANEL_WIDTH / 2.0,
        y0 + PANEL_HEIGHT + 34.0
    ));
    svg.push_str(&format!(
        "<text x=\"{:.1}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 {:.1} {:.1})\">relative efficiency</text>\n",
        x0 - 40.0,
        y0 + PANEL_HEIGHT / 2.0,
        x0 - 40.0,
        y0 + PANEL_HEIGHT / 2.0
    ));

    // solid horizontal asymptote 1 - r²/2
    let asym = records
        .iter()
        .find(|rec| rec.r == r)
        .map(|rec| rec.asymptote)
        .unwrap_or(1.0 - r * r / 2.0);
    let ya = y_of(asym);
    svg.push_str(&format!(
        "<line x1=\"{x0:.1}\" y1=\"{ya:.1}\" x2=\"{:.1}\" y2=\"{ya:.1}\" stroke=\"black\" stroke-width=\"1.5\" class=\"asymptote\"/>\n",
        x0 + PANEL_WIDTH
    ));

    // one curve per alpha
    for (ai, &alpha) in alphas.iter().enumerate() {
        let color = PALETTE[ai % PALETTE.len()];
        let mut pts: Vec<(usize, f64)> = records
            .iter()
            .filter(|rec| rec.r == r && rec.alpha == alpha)
            .map(|rec| (rec.n, rec.rel_eff))
            .collect();
        if pts.is_empty() {
            continue;
        }
        pts.sort_by_key(|&(n, _)| n);
        let path: Vec<String> = pts
            .iter()
            .map(|&(n, v)| format!("{:.2},{:.2}", x_of(n), y_of(v)))
            .collect();
        svg.push_str(&format!(
            "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"/>\n",
            path.join(" ")
        ));
        for &(n, v) in &pts {
            svg.push_str(&format!(
                "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"2\" fill=\"{color}\"/>\n",
                x_of(n),
                y_of(v)
            ));
        }
        // legend entry
        let lx = x0 + PANEL_WIDTH - 92.0;
        let ly = y0 + 14.0 + ai as f64 * 16.0;
        svg.push_str(&format!(
            "<line x1=\"{lx:.1}\" y1=\"{ly:.1}\" x2=\"{:.1}\" y2=\"{ly:.1}\" stroke=\"{color}\" stroke-width=\"1.5\"/>\n",
            lx + 22.0
        ));
        svg.push_str(&format!(
            "<text x=\"{:.1}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"11\">alpha = {alpha}</text>\n",
            lx + 27.0,
            ly + 3.5
        ));
    }
}

//! SVG charts emitted as plain text.
//!
//! Every reported quantity gets its own element with a stable `id` so the
//! output can be checked structurally.

use std::fmt::Write;

use crate::metrics::CircularityReport;
use crate::value::ValueAttribution;

use super::{format_percent, round_half_away};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const FONT: &str = "font-family=\"sans-serif\"";

pub(crate) fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

fn open(out: &mut String, title: &str) {
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\" font-size=\"12\">"
    );
    let _ = writeln!(out, "  <title>{}</title>", escape(title));
    let _ = writeln!(
        out,
        "  <rect x=\"0\" y=\"0\" width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>"
    );
}

fn footnotes(out: &mut String, notes: &[String], mut y: f64) {
    for (i, note) in notes.iter().enumerate() {
        let _ = writeln!(
            out,
            "  <text id=\"footnote-{}\" x=\"20\" y=\"{y}\" {FONT} font-size=\"10\" fill=\"#555\">{}</text>",
            i + 1,
            escape(note)
        );
        y += 14.0;
    }
}

fn num(v: f64) -> String {
    format!("{:.2}", v)
}

/// Waterfall of the three recoverable-input denominators, each bar
/// annotated with the circularity rate it produces.
pub fn waterfall(report: &CircularityReport, places: u32, notes: &[String]) -> String {
    let d = report.denominators;
    let top = 50.0;
    let plot_h = 240.0;
    let base = top + plot_h;
    let scale = if d.total > 0.0 { plot_h / d.total } else { 0.0 };
    let bar_w = 90.0;
    let gap = 70.0;
    let left = 60.0;

    let mut out = String::new();
    open(&mut out, "Circularity by recoverable input");
    let _ = writeln!(
        out,
        "  <text x=\"20\" y=\"28\" {FONT} font-size=\"15\" font-weight=\"bold\">Circularity by recoverable input</text>"
    );
    let _ = writeln!(
        out,
        "  <line x1=\"{left}\" y1=\"{base}\" x2=\"{}\" y2=\"{base}\" stroke=\"black\"/>",
        WIDTH - 20.0
    );

    // Removed chunks float in the gaps between consecutive bars.
    let x_at = |column: usize| left + 10.0 + column as f64 * (bar_w + gap);
    let columns = [
        ("total", "total input", d.total, report.apparent),
        (
            "non-dissipative",
            "minus energetic",
            d.non_dissipative,
            report.dissipative_adjusted,
        ),
        (
            "annually-recoverable",
            "minus stock additions",
            d.annually_recoverable,
            report.real_rate,
        ),
    ];
    let removed = [
        (
            "energetic",
            "energetic",
            d.total - d.non_dissipative,
            d.non_dissipative,
        ),
        (
            "stock-additions",
            "net stock additions",
            d.non_dissipative - d.annually_recoverable,
            d.annually_recoverable,
        ),
    ];

    for (i, (id, label, mass, rate)) in columns.iter().enumerate() {
        let x = x_at(i);
        let h = mass * scale;
        let y = base - h;
        let _ = writeln!(out, "  <g id=\"denominator-{id}\">");
        let _ = writeln!(
            out,
            "    <rect x=\"{}\" y=\"{}\" width=\"{bar_w}\" height=\"{}\" fill=\"#4e79a7\"><title>{label}: {} Gt</title></rect>",
            num(x),
            num(y),
            num(h),
            round_half_away(*mass, 1)
        );
        let _ = writeln!(
            out,
            "    <text class=\"mass\" x=\"{}\" y=\"{}\" {FONT} text-anchor=\"middle\">{} Gt</text>",
            num(x + bar_w / 2.0),
            num(y - 6.0),
            format_number(*mass, 1)
        );
        let _ = writeln!(
            out,
            "    <text class=\"rate\" x=\"{}\" y=\"{}\" {FONT} text-anchor=\"middle\" fill=\"white\" font-weight=\"bold\">{}</text>",
            num(x + bar_w / 2.0),
            num(base - 10.0),
            format_percent(*rate, places)
        );
        let _ = writeln!(
            out,
            "    <text class=\"label\" x=\"{}\" y=\"{}\" {FONT} text-anchor=\"middle\">{label}</text>",
            num(x + bar_w / 2.0),
            num(base + 16.0)
        );
        let _ = writeln!(out, "  </g>");
    }

    for (i, (id, label, mass, floor)) in removed.iter().enumerate() {
        let w = 40.0;
        let x = x_at(i) + bar_w + (gap - w) / 2.0;
        let h = mass * scale;
        let y = base - (floor + mass) * scale;
        let _ = writeln!(out, "  <g id=\"removed-{id}\">");
        let _ = writeln!(
            out,
            "    <rect x=\"{}\" y=\"{}\" width=\"{w}\" height=\"{}\" fill=\"#e15759\" opacity=\"0.7\"><title>{label}: {} Gt</title></rect>",
            num(x),
            num(y),
            num(h),
            round_half_away(*mass, 1)
        );
        let _ = writeln!(
            out,
            "    <text class=\"mass\" x=\"{}\" y=\"{}\" {FONT} text-anchor=\"middle\">-{} Gt</text>",
            num(x + w / 2.0),
            num(y - 6.0),
            format_number(*mass, 1)
        );
        let _ = writeln!(out, "  </g>");
    }

    let _ = writeln!(
        out,
        "  <text id=\"potential-ceiling\" x=\"20\" y=\"{}\" {FONT}>Potential ceiling (zero losses): {}</text>",
        num(base + 40.0),
        format_percent(report.potential_ceiling, places)
    );
    footnotes(&mut out, notes, base + 62.0);
    out.push_str("</svg>\n");
    out
}

/// One horizontal bar split into the five attribution segments.
pub fn attribution_bar(attribution: &ValueAttribution, places: u32, notes: &[String]) -> String {
    const COLOURS: [&str; 5] = ["#59a14f", "#f28e2b", "#4e79a7", "#bab0ac", "#76b7b2"];
    let left = 20.0;
    let bar_w = WIDTH - 40.0;
    let bar_y = 60.0;
    let bar_h = 50.0;
    let gdp = attribution.gdp.value();

    let mut out = String::new();
    open(&mut out, "GDP by resource category");
    let _ = writeln!(
        out,
        "  <text x=\"20\" y=\"36\" {FONT} font-size=\"15\" font-weight=\"bold\">GDP by resource category ({} T$)</text>",
        format_number(gdp, 1)
    );

    let mut x = left;
    for (i, (label, value)) in attribution.parts().iter().enumerate() {
        let share = value.value() / gdp;
        let w = share * bar_w;
        let id = label.replace(' ', "-");
        let _ = writeln!(out, "  <g id=\"segment-{id}\">");
        let _ = writeln!(
            out,
            "    <rect x=\"{}\" y=\"{bar_y}\" width=\"{}\" height=\"{bar_h}\" fill=\"{}\"><title>{label}: {} T$</title></rect>",
            num(x),
            num(w),
            COLOURS[i],
            format_number(value.value(), 2)
        );
        let legend_y = bar_y + bar_h + 30.0 + i as f64 * 20.0;
        let _ = writeln!(
            out,
            "    <rect x=\"{left}\" y=\"{}\" width=\"12\" height=\"12\" fill=\"{}\"/>",
            num(legend_y - 10.0),
            COLOURS[i]
        );
        let _ = writeln!(
            out,
            "    <text class=\"share\" x=\"{}\" y=\"{}\" {FONT}>{label}: {} ({} T$)</text>",
            left + 20.0,
            num(legend_y),
            format_percent(share, places),
            format_number(value.value(), places)
        );
        let _ = writeln!(out, "  </g>");
        x += w;
    }
    footnotes(&mut out, notes, bar_y + bar_h + 150.0);
    out.push_str("</svg>\n");
    out
}

fn format_number(v: f64, places: u32) -> String {
    format!("{:.*}", places as usize, round_half_away(v, places))
}

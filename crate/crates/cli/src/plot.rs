//! CSV and SVG renderings of a distribution function.

use std::fmt::Write;

use orlicz_core::StepFunction;

/// Rows `t,value`, one per breakpoint; the value holds until the next row.
pub fn csv(step: &StepFunction) -> String {
    let mut out = String::from("t,value\n");
    for (t, v) in step.breakpoints().iter().zip(step.values()) {
        writeln!(out, "{t},{v}").expect("writing to a String");
    }
    out
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 48.0;

/// Staircase plot with the tail drawn to 10% past the last breakpoint.
pub fn svg(step: &StepFunction) -> String {
    let bps = step.breakpoints();
    let vals = step.values();
    let t_end = bps.last().copied().unwrap_or(0.0).max(1e-12) * 1.1;
    let v_max = vals.first().copied().unwrap_or(0.0).max(1e-12);
    let x = |t: f64| MARGIN + t / t_end * (WIDTH - 2.0 * MARGIN);
    let y = |v: f64| HEIGHT - MARGIN - v / v_max * (HEIGHT - 2.0 * MARGIN);

    let mut path = String::new();
    for (j, (&t, &v)) in bps.iter().zip(vals).enumerate() {
        let next = bps.get(j + 1).copied().unwrap_or(t_end);
        let cmd = if j == 0 { 'M' } else { 'L' };
        write!(path, "{cmd}{:.2},{:.2} L{:.2},{:.2} ", x(t), y(v), x(next), y(v)).expect("String");
    }

    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    )
    .expect("String");
    writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#).expect("String");
    writeln!(
        out,
        r#"<path d="M{m},{b} L{r},{b} M{m},{b} L{m},{m}" stroke="black" fill="none"/>"#,
        m = MARGIN,
        b = HEIGHT - MARGIN,
        r = WIDTH - MARGIN,
    )
    .expect("String");
    writeln!(out, r#"<path d="{}" stroke="steelblue" stroke-width="2" fill="none"/>"#, path.trim_end())
        .expect("String");
    writeln!(
        out,
        r#"<text x="{}" y="{}" font-size="12" text-anchor="end">t = {:.4}</text>"#,
        WIDTH - MARGIN,
        HEIGHT - MARGIN / 3.0,
        t_end
    )
    .expect("String");
    writeln!(out, r#"<text x="4" y="{}" font-size="12">{:.4}</text>"#, MARGIN - 6.0, v_max).expect("String");
    out.push_str("</svg>\n");
    out
}

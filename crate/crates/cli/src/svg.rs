use std::fmt::Write;

const SIZE: f64 = 512.0;
const MARGIN: f64 = 16.0;

/// Scatter of `background` in grey with `marked` drawn on top in red and
/// joined as a closed polygon when there are at least two of them. The y axis
/// points up; both axes share one scale.
pub fn scatter(background: &[[f64; 2]], marked: &[[f64; 2]]) -> String {
    let all = background.iter().chain(marked);
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for p in all {
        for a in 0..2 {
            lo[a] = lo[a].min(p[a]);
            hi[a] = hi[a].max(p[a]);
        }
    }
    let span = (hi[0] - lo[0]).max(hi[1] - lo[1]);
    let scale = if span > 0.0 && span.is_finite() { (SIZE - 2.0 * MARGIN) / span } else { 1.0 };
    let map = |p: &[f64; 2]| (MARGIN + (p[0] - lo[0]) * scale, SIZE - MARGIN - (p[1] - lo[1]) * scale);

    let mut out = String::new();
    writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#).unwrap();
    writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
    writeln!(out, r##"<g fill="#888">"##).unwrap();
    for p in background {
        let (x, y) = map(p);
        writeln!(out, r#"<circle cx="{x:.3}" cy="{y:.3}" r="1.5"/>"#).unwrap();
    }
    writeln!(out, "</g>").unwrap();
    if marked.len() >= 2 {
        let pts: Vec<String> = marked.iter().map(|p| {
            let (x, y) = map(p);
            format!("{x:.3},{y:.3}")
        }).collect();
        writeln!(out, r##"<polygon points="{}" fill="none" stroke="#d22" stroke-width="1.5"/>"##, pts.join(" ")).unwrap();
    }
    writeln!(out, r##"<g fill="#d22">"##).unwrap();
    for p in marked {
        let (x, y) = map(p);
        writeln!(out, r#"<circle cx="{x:.3}" cy="{y:.3}" r="4"/>"#).unwrap();
    }
    writeln!(out, "</g>").unwrap();
    out.push_str("</svg>\n");
    out
}

use kiricap::geometry::{
    export_dxf, export_svg, generate_pattern, validate_layout, CutLayout, KirigamiParams, Vec2,
    Violation,
};
use proptest::prelude::*;

/// `(layer, start, end)` for every LINE entity.
fn dxf_lines(text: &str) -> Vec<(String, Vec2, Vec2)> {
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len() % 2, 0);
    let pairs: Vec<(i32, &str)> = lines
        .chunks(2)
        .map(|c| (c[0].trim().parse().unwrap(), c[1]))
        .collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < pairs.len() {
        if pairs[i] == (0, "LINE") {
            let mut layer = String::new();
            let mut v = [0.0; 4];
            i += 1;
            while i < pairs.len() && pairs[i].0 != 0 {
                let (code, value) = pairs[i];
                match code {
                    8 => layer = value.to_string(),
                    10 => v[0] = value.parse().unwrap(),
                    20 => v[1] = value.parse().unwrap(),
                    11 => v[2] = value.parse().unwrap(),
                    21 => v[3] = value.parse().unwrap(),
                    _ => {}
                }
                i += 1;
            }
            out.push((layer, Vec2::new(v[0], v[1]), Vec2::new(v[2], v[3])));
        } else {
            i += 1;
        }
    }
    out
}

/// Cut endpoints from the CUTS group, in drawing coordinates (y up).
fn svg_cuts(text: &str, height: f64) -> Vec<(Vec2, Vec2)> {
    let start = text.find("<g id=\"CUTS\"").expect("CUTS group");
    let group = &text[start..start + text[start..].find("</g>").unwrap()];
    group
        .lines()
        .filter_map(|l| l.trim().strip_prefix("<path d=\"M "))
        .map(|rest| {
            let body = rest.trim_end_matches("\"/>");
            let nums: Vec<f64> = body
                .split_whitespace()
                .filter(|t| *t != "L")
                .map(|t| t.parse().unwrap())
                .collect();
            assert_eq!(nums.len(), 4);
            (
                Vec2::new(nums[0], height - nums[1]),
                Vec2::new(nums[2], height - nums[3]),
            )
        })
        .collect()
}

fn close(a: Vec2, b: Vec2) -> bool {
    (a.x - b.x).abs() <= 5e-6 && (a.y - b.y).abs() <= 5e-6
}

fn check_round_trip(layout: &CutLayout) {
    let dxf = dxf_lines(&export_dxf(layout));
    let cuts: Vec<_> = dxf.iter().filter(|(l, _, _)| l == "CUTS").collect();
    assert_eq!(cuts.len(), layout.segments.len());
    for (seg, (_, a, b)) in layout.segments.iter().zip(&cuts) {
        assert!(close(seg.p_start, *a) && close(seg.p_end, *b));
    }
    assert_eq!(dxf.iter().filter(|(l, _, _)| l == "OUTLINE").count(), 4);

    let svg = export_svg(layout);
    if layout.segments.is_empty() {
        assert!(!svg.contains("CUTS"));
        return;
    }
    let parsed = svg_cuts(&svg, layout.params.h);
    assert_eq!(parsed.len(), layout.segments.len());
    for (seg, (a, b)) in layout.segments.iter().zip(&parsed) {
        assert!(close(seg.p_start, *a) && close(seg.p_end, *b));
    }
}

#[test]
fn default_layout_round_trips() {
    let layout = generate_pattern(&KirigamiParams::default(), 0.5).unwrap();
    assert!(!layout.segments.is_empty());
    check_round_trip(&layout);
    let svg = export_svg(&layout);
    assert!(svg.contains("width=\"50.00000mm\" height=\"7.50000mm\""));
    assert!(!svg.contains("-0.00000"));
}

#[test]
fn widening_the_strip_scales_the_count() {
    let p = KirigamiParams::default();
    let one = generate_pattern(&p, 0.5).unwrap();
    let two = generate_pattern(&KirigamiParams { w: 2.0 * p.w, ..p }, 0.5).unwrap();
    // cuts per row on the narrow strip bound the boundary loss
    let rows: std::collections::BTreeSet<_> = one
        .segments
        .iter()
        .map(|s| s.cell_index.0 - s.cell_index.1)
        .collect();
    let per_row = one.segments.len().div_ceil(rows.len());
    assert!(two.segments.len() + per_row >= 2 * one.segments.len());
}

#[test]
fn cut_ending_on_the_inset_edge_is_kept() {
    let mut layout = generate_pattern(&KirigamiParams::default(), 0.5).unwrap();
    let seg = layout.segments[0];
    let shift = Vec2::new(layout.params.w - 0.5 - seg.p_end.x, 0.0);
    layout.segments = vec![seg.translated(shift, seg.cell_index)];
    assert!(validate_layout(&layout).is_empty());

    layout.segments[0] = seg.translated(shift + Vec2::new(1e-9, 0.0), seg.cell_index);
    assert!(matches!(
        validate_layout(&layout).as_slice(),
        [Violation::OutsideInset { .. }]
    ));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn random_layouts_round_trip(
        l in 1.0..5.0f64,
        ratio in 0.05..0.45f64,
        gamma in 15.0..75.0f64,
        h in 2.0..12.0f64,
        w in 5.0..40.0f64,
        margin in 0.0..0.8f64,
    ) {
        let params = KirigamiParams { delta: ratio * l, l, gamma, h, w, t: 0.05 };
        let layout = generate_pattern(&params, margin).unwrap();
        prop_assert!(validate_layout(&layout).is_empty());
        check_round_trip(&layout);
    }
}

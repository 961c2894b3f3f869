//! Standalone SVG rendering of a scenario, search tree, path and sector.
//!
//! Output is assembled by hand with fixed three-decimal formatting so equal
//! inputs always produce equal bytes. World y points up; image y points down.

use std::f64::consts::PI;
use std::fmt::Write as _;

use sectorplan::{PlanResult, Point2, Scenario, Sector};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
pub struct SvgOptions {
    /// Pixel size of the longer map side.
    pub size: f64,
    pub show_tree: bool,
    pub show_sector: bool,
}

impl Default for SvgOptions {
    fn default() -> Self {
        Self {
            size: 800.0,
            show_tree: true,
            show_sector: true,
        }
    }
}

struct View {
    scale: f64,
    height: f64,
}

impl View {
    fn x(&self, p: Point2) -> f64 {
        p.x() * self.scale
    }

    fn y(&self, p: Point2) -> f64 {
        (self.height - p.y()) * self.scale
    }

    fn xy(&self, p: Point2) -> String {
        format!("{:.3},{:.3}", self.x(p), self.y(p))
    }
}

fn sector_outline(out: &mut String, v: &View, sector: &Sector) {
    let apex = sector.apex();
    let len = sector.length() * v.scale;
    if sector.is_full_disc() {
        writeln!(
            out,
            r#"<circle id="sector" cx="{:.3}" cy="{:.3}" r="{:.3}"/>"#,
            v.x(apex),
            v.y(apex),
            len
        )
        .unwrap();
        return;
    }
    let half = sector.half_angle();
    let left = apex.offset_polar(sector.heading() + half, sector.length());
    if half == 0.0 {
        writeln!(out, r#"<path id="sector" d="M{} L{}"/>"#, v.xy(apex), v.xy(left)).unwrap();
        return;
    }
    let right = apex.offset_polar(sector.heading() - half, sector.length());
    // Counter-clockwise in the world is clockwise on screen (sweep flag 1).
    let large = u8::from(2.0 * half > PI);
    writeln!(
        out,
        r#"<path id="sector" d="M{} L{} A{len:.3},{len:.3} 0 {large} 1 {} Z"/>"#,
        v.xy(apex),
        v.xy(right),
        v.xy(left)
    )
    .unwrap();
}

/// Renders `result` over `scenario`; fails if they come from different maps.
pub fn render_svg(result: &PlanResult, scenario: &Scenario, opts: &SvgOptions) -> Result<String, CliError> {
    let digest = scenario.digest();
    if digest != result.scenario_digest {
        return Err(CliError::DigestMismatch {
            result: result.scenario_digest.clone(),
            scenario: digest,
        });
    }
    let v = View {
        scale: opts.size / scenario.extent(),
        height: scenario.height(),
    };
    let (w, h) = (scenario.width() * v.scale, scenario.height() * v.scale);
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n");
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w:.3}" height="{h:.3}" viewBox="0 0 {w:.3} {h:.3}">"#
    )
    .unwrap();
    writeln!(
        out,
        "<title>{} seed {} on {}</title>",
        result.planner,
        result.seed,
        scenario.kind()
    )
    .unwrap();
    writeln!(
        out,
        r#"<rect id="frame" x="0" y="0" width="{w:.3}" height="{h:.3}" fill="white" stroke="black" stroke-width="1"/>"#
    )
    .unwrap();

    out.push_str("<g id=\"obstacles\" fill=\"#6b6b6b\">\n");
    for d in scenario.obstacles() {
        writeln!(
            out,
            r#"<circle cx="{:.3}" cy="{:.3}" r="{:.3}"/>"#,
            v.x(d.center()),
            v.y(d.center()),
            d.radius() * v.scale
        )
        .unwrap();
    }
    out.push_str("</g>\n");

    if opts.show_tree {
        out.push_str("<g id=\"tree\" stroke=\"#8fb3d9\" stroke-width=\"0.4\">\n");
        for vert in result.tree.vertices() {
            if let Some(p) = vert.parent {
                let a = result.tree.position(p);
                let b = vert.position;
                writeln!(
                    out,
                    r#"<line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}"/>"#,
                    v.x(a),
                    v.y(a),
                    v.x(b),
                    v.y(b)
                )
                .unwrap();
            }
        }
        out.push_str("</g>\n");
    }

    if opts.show_sector {
        if let Some(trace) = &result.directed {
            out.push_str(
                "<g id=\"region\" fill=\"none\" stroke=\"#e08a00\" stroke-width=\"1.5\" stroke-dasharray=\"6 4\">\n",
            );
            sector_outline(&mut out, &v, &trace.final_sector);
            out.push_str("</g>\n");
        }
    }

    if let Some(path) = &result.path {
        let pts: Vec<String> = path.waypoints().iter().map(|&p| v.xy(p)).collect();
        writeln!(
            out,
            r##"<polyline id="path" fill="none" stroke="#c0392b" stroke-width="3" points="{}"/>"##,
            pts.join(" ")
        )
        .unwrap();
    }

    for (id, p, color) in [
        ("source", scenario.source(), "#1e8449"),
        ("destination", scenario.destination(), "#7d3c98"),
    ] {
        writeln!(
            out,
            r#"<circle id="{id}" cx="{:.3}" cy="{:.3}" r="6" fill="{color}"/>"#,
            v.x(p),
            v.y(p)
        )
        .unwrap();
    }
    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use sectorplan::{
        generate_scenario, plan_ad_rrt_star, AdRrtStarConfig, PlanError, Scenario, ScenarioKind, ScenarioParams,
    };

    fn run(s: &Scenario) -> PlanResult {
        match plan_ad_rrt_star(s, &AdRrtStarConfig::for_scenario(s, 600, 1)) {
            Ok(r) => r,
            Err(PlanError::NoPathFound(r)) => *r,
            Err(e) => panic!("{e}"),
        }
    }

    #[test]
    fn y_axis_is_flipped() {
        let v = View {
            scale: 0.5,
            height: 1000.0,
        };
        assert_eq!(v.y(Point2::new(0.0, 1000.0)), 0.0);
        assert_eq!(v.y(Point2::new(0.0, 0.0)), 500.0);
        assert_eq!(v.xy(Point2::new(10.0, 990.0)), "5.000,5.000");
    }

    #[test]
    fn digest_mismatch_is_refused() {
        let a = generate_scenario(ScenarioKind::S4, 1, Default::default()).unwrap();
        let b = generate_scenario(ScenarioKind::S4, 2, Default::default()).unwrap();
        let r = run(&a);
        assert!(matches!(
            render_svg(&r, &b, &SvgOptions::default()),
            Err(CliError::DigestMismatch { .. })
        ));
    }

    #[test]
    fn empty_map_has_no_discs_and_output_is_stable() {
        let p = ScenarioParams::default();
        let s = Scenario::new(
            p.width,
            p.height,
            vec![],
            p.default_source(),
            p.default_destination(),
            ScenarioKind::Custom,
            0,
        )
        .unwrap();
        let r = run(&s);
        let a = render_svg(&r, &s, &SvgOptions::default()).unwrap();
        assert_eq!(a, render_svg(&r, &s, &SvgOptions::default()).unwrap());
        assert!(a.contains("<g id=\"obstacles\" fill=\"#6b6b6b\">\n</g>"));
        assert!(a.contains("id=\"sector\""));
    }
}

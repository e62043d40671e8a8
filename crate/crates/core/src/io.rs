//! File formats: trace and surface CSV, waypoint CSV, SVG trajectory plots.

use std::fmt::Write as _;
use std::io::{self, Write};
use std::path::Path;

use crate::controller::{PatientPosition, SurfacePoint, TrackBounds};
use crate::sim::{SimError, TraceRecord, TrackPath, TrackStatus};

pub const TRACE_HEADER: &str = "step,x,y,d_front,d_rear,d_left,d_right,steer_x,steer_y,cx,cy,status";
pub const SURFACE_HEADER: &str = "x,y,steer_x,steer_y";

// Six decimals; `+ 0.0` folds negative zero so output does not depend on sign
// of zero.
fn real(v: f64) -> String {
    format!("{:.6}", v + 0.0)
}

pub fn write_trace_csv<W: Write>(trace: &[TraceRecord], mut out: W) -> io::Result<()> {
    writeln!(out, "{TRACE_HEADER}")?;
    for r in trace {
        let reals = [r.x, r.y, r.d_front, r.d_rear, r.d_left, r.d_right, r.steer_x, r.steer_y, r.cx, r.cy];
        let reals: Vec<String> = reals.into_iter().map(real).collect();
        writeln!(out, "{},{},{}", r.step, reals.join(","), r.status.as_str())?;
    }
    Ok(())
}

pub fn write_surface_csv<W: Write>(grid: &[SurfacePoint], mut out: W) -> io::Result<()> {
    writeln!(out, "{SURFACE_HEADER}")?;
    for p in grid {
        writeln!(out, "{},{},{},{}", real(p.x), real(p.y), real(p.steer_x), real(p.steer_y))?;
    }
    Ok(())
}

/// Parses `x,y` waypoint rows. A first row that is not numeric is taken as
/// a header.
pub fn read_waypoints_csv(text: &str) -> Result<TrackPath, SimError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut points = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| SimError::Track(e.to_string()))?;
        let line = record.position().map_or(i as u64 + 1, |p| p.line());
        if record.len() != 2 {
            return Err(SimError::Track(format!("line {line}: expected 2 fields `x,y`, got {}", record.len())));
        }
        match (record[0].parse::<f64>(), record[1].parse::<f64>()) {
            (Ok(x), Ok(y)) => points.push(PatientPosition::new(x, y)),
            _ if i == 0 => continue,
            _ => {
                return Err(SimError::Track(format!("line {line}: `{},{}` is not a waypoint", &record[0], &record[1])))
            }
        }
    }
    TrackPath::new(points)
}

/// SVG plot of a trace: the field boundary, the walked path as a polyline,
/// a start marker, and a marker on the off-track record if there is one.
/// Track `y` grows upward in the plot; the view box is always `0 0 500 500`.
pub fn trajectory_svg(trace: &[TraceRecord], bounds: TrackBounds) -> String {
    const VIEW: f64 = 500.0;
    let sx = VIEW / bounds.width();
    let sy = VIEW / bounds.depth();
    let px = |x: f64, y: f64| (x * sx, VIEW - y * sy);

    let mut svg = String::new();
    svg.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    svg.push_str("<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 500 500\" width=\"500\" height=\"500\">\n");
    svg.push_str(
        "  <rect x=\"0\" y=\"0\" width=\"500\" height=\"500\" fill=\"white\" stroke=\"black\" stroke-width=\"2\"/>\n",
    );
    let points: Vec<String> = trace
        .iter()
        .map(|r| {
            let (x, y) = px(r.x, r.y);
            format!("{:.3},{:.3}", x + 0.0, y + 0.0)
        })
        .collect();
    let _ = writeln!(
        svg,
        "  <polyline fill=\"none\" stroke=\"blue\" stroke-width=\"1.5\" points=\"{}\"/>",
        points.join(" ")
    );
    if let Some(first) = trace.first() {
        let (x, y) = px(first.x, first.y);
        let _ = writeln!(svg, "  <circle class=\"start\" cx=\"{x:.3}\" cy=\"{y:.3}\" r=\"4\" fill=\"green\"/>");
    }
    if let Some(off) = trace.iter().find(|r| r.status == TrackStatus::OffTrack) {
        let (x, y) = px(off.x, off.y);
        let _ = writeln!(
            svg,
            "  <path class=\"off-track\" d=\"M {:.3} {:.3} l 12 12 m -12 0 l 12 -12\" stroke=\"red\" stroke-width=\"3\"/>",
            x - 6.0,
            y - 6.0
        );
    }
    svg.push_str("</svg>\n");
    svg
}

/// Writes through a temporary file in the destination directory, then renames.
pub fn write_atomic(path: &Path, contents: &[u8]) -> io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents)?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(step: usize, x: f64, status: TrackStatus) -> TraceRecord {
        TraceRecord {
            step,
            x,
            y: 250.0,
            d_front: 250.0,
            d_rear: 250.0,
            d_left: x,
            d_right: 500.0 - x,
            steer_x: 250.0,
            steer_y: 250.0,
            cx: -0.0,
            cy: 0.0,
            status,
        }
    }

    #[test]
    fn trace_csv_format() {
        let mut buf = Vec::new();
        write_trace_csv(&[record(0, 250.0, TrackStatus::Ok), record(1, 502.0, TrackStatus::OffTrack)], &mut buf)
            .unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], TRACE_HEADER);
        assert_eq!(
            lines[1],
            "0,250.000000,250.000000,250.000000,250.000000,250.000000,250.000000,250.000000,250.000000,0.000000,0.000000,OK"
        );
        assert!(lines[2].ends_with(",OFF_TRACK"));
        assert!(text.ends_with('\n'));
    }

    #[test]
    fn waypoints_with_and_without_header() {
        let a = read_waypoints_csv("x,y\n10,20\n30,40\n").unwrap();
        let b = read_waypoints_csv("10, 20\n\n30,40\n").unwrap();
        assert_eq!(a, b);
        assert_eq!(a.waypoints()[1], PatientPosition::new(30.0, 40.0));
    }

    #[test]
    fn waypoint_errors() {
        assert!(read_waypoints_csv("10,20\nfoo,40\n").is_err());
        assert!(read_waypoints_csv("10,20,30\n").is_err());
        assert!(read_waypoints_csv("10,20\n").is_err());
        assert!(read_waypoints_csv("").is_err());
    }

    #[test]
    fn svg_has_fixed_viewbox_and_marker() {
        let svg = trajectory_svg(
            &[record(0, 250.0, TrackStatus::Ok), record(1, 502.0, TrackStatus::OffTrack)],
            TrackBounds::default(),
        );
        assert!(svg.contains("viewBox=\"0 0 500 500\""));
        assert!(svg.contains("class=\"off-track\""));
        assert!(svg.contains("points=\"250.000,250.000 502.000,250.000\""));
        let empty = trajectory_svg(&[], TrackBounds::default());
        assert!(empty.contains("viewBox=\"0 0 500 500\"") && !empty.contains("circle"));
    }

    #[test]
    fn atomic_write_replaces_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.txt");
        write_atomic(&path, b"one").unwrap();
        write_atomic(&path, b"two").unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "two");
    }
}

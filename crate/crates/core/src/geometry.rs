//! Field shapes, sink trajectories and coverage geometry.
//!
//! Square fields are axis aligned with their lower-left corner at the origin,
//! so a `Field::Square { side: 100.0 }` spans `[0, 100] x [0, 100]`.
//! Trajectories are closed paths walked counter-clockwise and discretized
//! into equally spaced sojourn points (one per round).

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Result, SimError};

/// Slack used when checking that a path lies inside a field.
const CONTAINMENT_EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

/// Euclidean distance in meters.
pub fn distance(a: Point, b: Point) -> f64 {
    (a.x - b.x).hypot(a.y - b.y)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Field {
    Square { side: f64 },
    Circle { center: Point, radius: f64 },
}

impl Field {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Field::Square { side } if side.is_finite() && side > 0.0 => Ok(()),
            Field::Circle { center, radius }
                if center.is_finite() && radius.is_finite() && radius > 0.0 =>
            {
                Ok(())
            }
            _ => Err(SimError::config(format!("degenerate field {self:?}"))),
        }
    }

    /// Boundary-inclusive containment test.
    pub fn contains(&self, p: Point) -> bool {
        self.contains_with_slack(p, 0.0)
    }

    fn contains_with_slack(&self, p: Point, eps: f64) -> bool {
        match *self {
            Field::Square { side } => {
                p.x >= -eps && p.y >= -eps && p.x <= side + eps && p.y <= side + eps
            }
            Field::Circle { center, radius } => distance(p, center) <= radius + eps,
        }
    }

    pub fn center(&self) -> Point {
        match *self {
            Field::Square { side } => Point::new(side / 2.0, side / 2.0),
            Field::Circle { center, .. } => center,
        }
    }

    /// `(min, max)` corners of the axis-aligned bounding box.
    pub fn bounding_box(&self) -> (Point, Point) {
        match *self {
            Field::Square { side } => (Point::new(0.0, 0.0), Point::new(side, side)),
            Field::Circle { center, radius } => (
                Point::new(center.x - radius, center.y - radius),
                Point::new(center.x + radius, center.y + radius),
            ),
        }
    }

    fn corners(side: f64) -> [Point; 4] {
        [
            Point::new(0.0, 0.0),
            Point::new(side, 0.0),
            Point::new(side, side),
            Point::new(0.0, side),
        ]
    }

    /// Nearest point of the field to `p` (identity for points inside).
    pub fn project(&self, p: Point) -> Point {
        match *self {
            Field::Square { side } => Point::new(p.x.clamp(0.0, side), p.y.clamp(0.0, side)),
            Field::Circle { center, radius } => {
                let d = distance(p, center);
                if d <= radius {
                    p
                } else {
                    let s = radius / d;
                    Point::new(center.x + (p.x - center.x) * s, center.y + (p.y - center.y) * s)
                }
            }
        }
    }
}

/// Geometric shape of a sink tour.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SinkPath {
    SquarePerimeter { center: Point, side: f64 },
    Circle { center: Point, radius: f64 },
    StaticPoint(Point),
}

impl SinkPath {
    pub fn is_static(&self) -> bool {
        matches!(self, SinkPath::StaticPoint(_))
    }

    pub fn length(&self) -> f64 {
        match *self {
            SinkPath::SquarePerimeter { side, .. } => 4.0 * side,
            SinkPath::Circle { radius, .. } => 2.0 * PI * radius,
            SinkPath::StaticPoint(_) => 0.0,
        }
    }

    fn validate(&self) -> Result<()> {
        let ok = match *self {
            SinkPath::SquarePerimeter { center, side } => {
                center.is_finite() && side.is_finite() && side > 0.0
            }
            SinkPath::Circle { center, radius } => {
                center.is_finite() && radius.is_finite() && radius > 0.0
            }
            SinkPath::StaticPoint(p) => p.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            Err(SimError::config(format!("degenerate sink path {self:?}")))
        }
    }

    /// Point at fraction `u` in `[0, 1)` of the tour, measured by arc length
    /// from the canonical origin.
    fn point_at_fraction(&self, u: f64) -> Point {
        match *self {
            SinkPath::SquarePerimeter { center, side } => {
                let h = side / 2.0;
                let pos = u * 4.0;
                let edge = (pos.floor() as usize).min(3);
                let t = (pos - edge as f64) * side;
                match edge {
                    0 => Point::new(center.x - h + t, center.y - h),
                    1 => Point::new(center.x + h, center.y - h + t),
                    2 => Point::new(center.x + h - t, center.y + h),
                    _ => Point::new(center.x - h, center.y + h - t),
                }
            }
            SinkPath::Circle { center, radius } => {
                let theta = 2.0 * PI * u;
                Point::new(center.x + radius * theta.cos(), center.y + radius * theta.sin())
            }
            SinkPath::StaticPoint(p) => p,
        }
    }

    /// Distance from `q` to the continuous path.
    pub fn distance_to(&self, q: Point) -> f64 {
        match *self {
            SinkPath::SquarePerimeter { center, side } => {
                let h = side / 2.0;
                let dx = (q.x - center.x).abs() - h;
                let dy = (q.y - center.y).abs() - h;
                if dx > 0.0 || dy > 0.0 {
                    dx.max(0.0).hypot(dy.max(0.0))
                } else {
                    // inside the square: nearest edge
                    (-dx).min(-dy)
                }
            }
            SinkPath::Circle { center, radius } => (distance(q, center) - radius).abs(),
            SinkPath::StaticPoint(p) => distance(q, p),
        }
    }

    fn contained_in(&self, field: &Field) -> bool {
        match (*self, *field) {
            (SinkPath::StaticPoint(p), f) => f.contains_with_slack(p, CONTAINMENT_EPS),
            (SinkPath::SquarePerimeter { center, side }, f) => {
                let h = side / 2.0;
                [(-h, -h), (h, -h), (h, h), (-h, h)]
                    .iter()
                    .all(|&(ox, oy)| {
                        f.contains_with_slack(Point::new(center.x + ox, center.y + oy), CONTAINMENT_EPS)
                    })
            }
            (SinkPath::Circle { center, radius }, Field::Square { side }) => {
                center.x - radius >= -CONTAINMENT_EPS
                    && center.y - radius >= -CONTAINMENT_EPS
                    && center.x + radius <= side + CONTAINMENT_EPS
                    && center.y + radius <= side + CONTAINMENT_EPS
            }
            (SinkPath::Circle { center, radius }, Field::Circle { center: fc, radius: fr }) => {
                distance(center, fc) + radius <= fr + CONTAINMENT_EPS
            }
        }
    }
}

/// A sink tour: path, its discretization and the sink's sensing range.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub path: SinkPath,
    pub sojourn_count: usize,
    pub sensing_range_m: f64,
    /// Upper bound on the spacing between consecutive sojourn points.
    pub r_max_m: f64,
}

impl Trajectory {
    pub fn new(path: SinkPath, sojourn_count: usize, sensing_range_m: f64, r_max_m: f64) -> Result<Self> {
        let t = Trajectory {
            path,
            sojourn_count,
            sensing_range_m,
            r_max_m,
        };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        self.path.validate()?;
        if self.sojourn_count == 0 {
            return Err(SimError::config("sojourn_count must be positive"));
        }
        // A zero range is allowed: only nodes sitting on a sojourn point wake up.
        if !(self.sensing_range_m.is_finite() && self.sensing_range_m >= 0.0) {
            return Err(SimError::config(format!(
                "sensing range must be finite and non-negative, got {}",
                self.sensing_range_m
            )));
        }
        if !(self.r_max_m.is_finite() && self.r_max_m > 0.0) {
            return Err(SimError::config("r_max must be positive"));
        }
        let spacing = self.spacing();
        if spacing > self.r_max_m * (1.0 + 1e-12) {
            return Err(SimError::config(format!(
                "sojourn spacing {spacing:.4} m exceeds r_max {} m",
                self.r_max_m
            )));
        }
        Ok(())
    }

    /// Arc length between consecutive sojourn points.
    pub fn spacing(&self) -> f64 {
        self.path.length() / self.sojourn_count as f64
    }

    /// Number of distinct sojourn points (1 for a static sink).
    pub fn period(&self) -> usize {
        if self.path.is_static() {
            1
        } else {
            self.sojourn_count
        }
    }

    pub fn sojourn_point(&self, index: usize) -> Point {
        let n = self.period();
        self.path.point_at_fraction((index % n) as f64 / n as f64)
    }

    pub fn contained_in(&self, field: &Field) -> bool {
        self.path.contained_in(field)
    }
}

/// Sojourn points in tour order, starting at the canonical origin.
pub fn sojourn_points(t: &Trajectory) -> Vec<Point> {
    (0..t.period()).map(|i| t.sojourn_point(i)).collect()
}

/// Sink location during `round`: one sojourn point per round, wrapping.
pub fn sink_position(t: &Trajectory, round: u64) -> Point {
    let n = t.period() as u64;
    t.sojourn_point((round % n) as usize)
}

fn check_inside(path: &SinkPath, field: &Field) -> Result<()> {
    field.validate()?;
    path.validate()?;
    if path.contained_in(field) {
        Ok(())
    } else {
        Err(SimError::config(format!("trajectory {path:?} leaves field {field:?}")))
    }
}

/// Smallest sensing range such that every point of `field` comes within
/// range of the sink at some moment of the continuous tour.
///
/// Closed forms cover every pair except a square path inside a circular
/// field, which falls back to [`coverage_radius_numeric`].
pub fn coverage_radius(path: &SinkPath, field: &Field) -> Result<f64> {
    check_inside(path, field)?;
    let r = match (*path, *field) {
        (SinkPath::SquarePerimeter { side: s, .. }, Field::Square { side }) => {
            // Inside the path square the farthest point is its center; outside,
            // distance to the square is convex so the max sits on a field corner.
            Field::corners(side)
                .iter()
                .map(|&c| path.distance_to(c))
                .fold(s / 2.0, f64::max)
        }
        (SinkPath::Circle { center, radius }, Field::Square { side }) => Field::corners(side)
            .iter()
            .map(|&c| distance(c, center) - radius)
            .fold(radius, f64::max),
        (SinkPath::Circle { center, radius }, Field::Circle { center: fc, radius: fr }) => {
            radius.max(distance(fc, center) + fr - radius)
        }
        (SinkPath::StaticPoint(p), Field::Square { side }) => Field::corners(side)
            .iter()
            .map(|&c| distance(c, p))
            .fold(0.0, f64::max),
        (SinkPath::StaticPoint(p), Field::Circle { center, radius }) => distance(p, center) + radius,
        (SinkPath::SquarePerimeter { .. }, Field::Circle { .. }) => {
            coverage_radius_numeric(path, field, 1.0, 0.01)?
        }
    };
    Ok(r)
}

/// Distance from `q` to segment `ab`.
fn segment_distance(q: Point, a: Point, b: Point) -> f64 {
    let (vx, vy) = (b.x - a.x, b.y - a.y);
    let len2 = vx * vx + vy * vy;
    if len2 == 0.0 {
        return distance(q, a);
    }
    let t = (((q.x - a.x) * vx + (q.y - a.y) * vy) / len2).clamp(0.0, 1.0);
    distance(q, Point::new(a.x + t * vx, a.y + t * vy))
}

/// Polyline approximation of a path, used by the numeric coverage search.
fn polyline(path: &SinkPath) -> Vec<Point> {
    match *path {
        SinkPath::SquarePerimeter { center, side } => {
            let h = side / 2.0;
            vec![
                Point::new(center.x - h, center.y - h),
                Point::new(center.x + h, center.y - h),
                Point::new(center.x + h, center.y + h),
                Point::new(center.x - h, center.y + h),
                Point::new(center.x - h, center.y - h),
            ]
        }
        SinkPath::Circle { center, radius } => {
            const SEGMENTS: usize = 2048;
            (0..=SEGMENTS)
                .map(|i| {
                    let th = 2.0 * PI * i as f64 / SEGMENTS as f64;
                    Point::new(center.x + radius * th.cos(), center.y + radius * th.sin())
                })
                .collect()
        }
        SinkPath::StaticPoint(p) => vec![p, p],
    }
}

fn polyline_distance(poly: &[Point], q: Point) -> f64 {
    poly.windows(2)
        .map(|w| segment_distance(q, w[0], w[1]))
        .fold(f64::INFINITY, f64::min)
}

/// Brute-force coverage radius: evaluate a `coarse_step` grid over the field
/// (plus boundary samples), then refine the best candidates by pattern search
/// until the step drops below `tolerance`.
///
/// Distances are taken to a polyline approximation of the path (segments for
/// the square, a 2048-gon for circles), independent of the closed forms.
pub fn coverage_radius_numeric(
    path: &SinkPath,
    field: &Field,
    coarse_step: f64,
    tolerance: f64,
) -> Result<f64> {
    check_inside(path, field)?;
    if !(coarse_step > 0.0 && tolerance > 0.0) {
        return Err(SimError::Domain("grid steps must be positive".into()));
    }
    let poly = polyline(path);
    let eval = |q: Point| polyline_distance(&poly, q);

    let (lo, hi) = field.bounding_box();
    let nx = ((hi.x - lo.x) / coarse_step).ceil() as usize;
    let ny = ((hi.y - lo.y) / coarse_step).ceil() as usize;
    let mut samples: Vec<(f64, Point)> = Vec::with_capacity((nx + 1) * (ny + 1));
    for i in 0..=nx {
        for j in 0..=ny {
            let q = Point::new(
                (lo.x + i as f64 * coarse_step).min(hi.x),
                (lo.y + j as f64 * coarse_step).min(hi.y),
            );
            if field.contains(q) {
                samples.push((eval(q), q));
            }
        }
    }
    match *field {
        Field::Square { side } => {
            for c in Field::corners(side) {
                samples.push((eval(c), c));
            }
        }
        Field::Circle { center, radius } => {
            for k in 0..720 {
                let th = 2.0 * PI * k as f64 / 720.0;
                let q = Point::new(center.x + radius * th.cos(), center.y + radius * th.sin());
                samples.push((eval(q), q));
            }
        }
    }

    samples.sort_by(|a, b| b.0.total_cmp(&a.0));
    let best = samples[0].0;
    let mut result = best;
    for &(v0, start) in samples
        .iter()
        .take_while(|(v, _)| *v >= best - coarse_step)
        .take(64)
    {
        let (mut q, mut v) = (start, v0);
        let mut h = coarse_step / 2.0;
        while h >= tolerance / 4.0 {
            let mut moved = false;
            for (dx, dy) in [
                (1.0, 0.0),
                (-1.0, 0.0),
                (0.0, 1.0),
                (0.0, -1.0),
                (1.0, 1.0),
                (1.0, -1.0),
                (-1.0, 1.0),
                (-1.0, -1.0),
            ] {
                let cand = field.project(Point::new(q.x + dx * h, q.y + dy * h));
                let cv = eval(cand);
                if cv > v {
                    q = cand;
                    v = cv;
                    moved = true;
                }
            }
            if !moved {
                h /= 2.0;
            }
        }
        result = result.max(v);
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Point, b: Point) -> bool {
        distance(a, b) < 1e-9
    }

    fn square50() -> Trajectory {
        let path = SinkPath::SquarePerimeter {
            center: Point::new(50.0, 50.0),
            side: 50.0,
        };
        Trajectory::new(path, 4, 35.36, 50.0).unwrap()
    }

    fn circle40() -> Trajectory {
        let path = SinkPath::Circle {
            center: Point::new(50.0, 50.0),
            radius: 40.0,
        };
        Trajectory::new(path, 4, 40.0, 100.0).unwrap()
    }

    #[test]
    fn distance_examples() {
        assert_eq!(distance(Point::new(0.0, 0.0), Point::new(3.0, 4.0)), 5.0);
        assert_eq!(distance(Point::new(50.0, 50.0), Point::new(50.0, 50.0)), 0.0);
        let diag = distance(Point::new(0.0, 0.0), Point::new(100.0, 100.0));
        assert!((diag - 100.0 * 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn square_sojourns_are_corners() {
        let pts = sojourn_points(&square50());
        let want = [(25.0, 25.0), (75.0, 25.0), (75.0, 75.0), (25.0, 75.0)];
        assert_eq!(pts.len(), 4);
        for (p, (x, y)) in pts.iter().zip(want) {
            assert!(close(*p, Point::new(x, y)), "{p:?}");
        }
    }

    #[test]
    fn circle_sojourns_quarter_turns() {
        let pts = sojourn_points(&circle40());
        let want = [(90.0, 50.0), (50.0, 90.0), (10.0, 50.0), (50.0, 10.0)];
        for (p, (x, y)) in pts.iter().zip(want) {
            assert!(close(*p, Point::new(x, y)), "{p:?}");
        }
    }

    #[test]
    fn static_sink_has_one_sojourn() {
        let t = Trajectory::new(SinkPath::StaticPoint(Point::new(50.0, 50.0)), 8, 1.0, 5.0).unwrap();
        assert_eq!(sojourn_points(&t), vec![Point::new(50.0, 50.0)]);
        assert_eq!(sink_position(&t, 12345), Point::new(50.0, 50.0));
    }

    #[test]
    fn sink_position_wraps() {
        let sq = square50();
        assert!(close(sink_position(&sq, 0), Point::new(25.0, 25.0)));
        assert!(close(sink_position(&sq, 5), Point::new(75.0, 25.0)));
        assert!(close(sink_position(&circle40(), 2), Point::new(10.0, 50.0)));
    }

    #[test]
    fn spacing_above_r_max_is_rejected() {
        let path = SinkPath::Circle {
            center: Point::new(50.0, 50.0),
            radius: 40.0,
        };
        // 2*pi*40 / 36 ~ 6.98 m
        assert!(Trajectory::new(path, 36, 40.0, 5.0).is_err());
        assert!(Trajectory::new(path, 360, 40.0, 5.0).is_ok());
        assert!(Trajectory::new(path, 0, 40.0, 5.0).is_err());
        assert!(Trajectory::new(path, 360, -1.0, 5.0).is_err());
    }

    #[test]
    fn closed_form_preset_values() {
        let sq = Field::Square { side: 100.0 };
        let c = Point::new(50.0, 50.0);
        let ss = coverage_radius(&SinkPath::SquarePerimeter { center: c, side: 50.0 }, &sq).unwrap();
        assert!((ss - 25.0 * 2f64.sqrt()).abs() < 1e-12);
        let sc40 = coverage_radius(&SinkPath::Circle { center: c, radius: 40.0 }, &sq).unwrap();
        assert_eq!(sc40, 40.0);
        let sc20 = coverage_radius(&SinkPath::Circle { center: c, radius: 20.0 }, &sq).unwrap();
        assert!((sc20 - (50.0 * 2f64.sqrt() - 20.0)).abs() < 1e-12);
        let cf = Field::Circle { center: c, radius: 50.0 };
        let cc = coverage_radius(&SinkPath::Circle { center: c, radius: 25.0 }, &cf).unwrap();
        assert_eq!(cc, 25.0);
    }

    #[test]
    fn path_outside_field_is_rejected() {
        let cf = Field::Circle {
            center: Point::new(50.0, 50.0),
            radius: 50.0,
        };
        let path = SinkPath::Circle {
            center: Point::new(50.0, 50.0),
            radius: 60.0,
        };
        assert!(matches!(coverage_radius(&path, &cf), Err(SimError::InvalidConfig(_))));
        let off = SinkPath::SquarePerimeter {
            center: Point::new(90.0, 50.0),
            side: 30.0,
        };
        assert!(coverage_radius(&off, &Field::Square { side: 100.0 }).is_err());
    }

    #[test]
    fn square_path_in_circle_field_uses_numeric_route() {
        let cf = Field::Circle {
            center: Point::new(50.0, 50.0),
            radius: 50.0,
        };
        let path = SinkPath::SquarePerimeter {
            center: Point::new(50.0, 50.0),
            side: 50.0,
        };
        // farthest points are the boundary midpoints facing each edge: 50 - 25
        let r = coverage_radius(&path, &cf).unwrap();
        assert!((r - 25.0).abs() < 0.02, "{r}");
    }
}

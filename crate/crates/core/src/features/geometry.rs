//! Pitch geometry on the 120x80 StatsBomb frame. The goal line is `x = 120`
//! with posts at `y = 36` and `y = 44`.

use crate::error::{Error, Result};

pub const PITCH_LENGTH: f64 = 120.0;
pub const PITCH_WIDTH: f64 = 80.0;

/// A point on the pitch in StatsBomb units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn distance(&self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn in_bounds(&self) -> bool {
        (0.0..=PITCH_LENGTH).contains(&self.x) && (0.0..=PITCH_WIDTH).contains(&self.y)
    }

    pub fn check_bounds(self) -> Result<Self> {
        if self.in_bounds() {
            Ok(self)
        } else {
            Err(Error::OutOfBounds {
                x: self.x,
                y: self.y,
            })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GoalGeometry {
    pub goal_center: Point,
    pub post_low: Point,
    pub post_high: Point,
}

pub const GOAL: GoalGeometry = GoalGeometry {
    goal_center: Point::new(120.0, 40.0),
    post_low: Point::new(120.0, 36.0),
    post_high: Point::new(120.0, 44.0),
};

/// Euclidean distance from a pitch location to the centre of the goal.
pub fn distance_to_goal(location: Point) -> Result<f64> {
    Ok(location.check_bounds()?.distance(GOAL.goal_center))
}

/// Angle in degrees subtended at the shooter by the two posts, by the law of
/// cosines on the (shooter, post, post) triangle.
pub fn shot_angle(location: Point) -> Result<f64> {
    let location = location.check_bounds()?;
    if location.x >= PITCH_LENGTH {
        return Err(Error::GoalLineShot);
    }
    let a = location.distance(GOAL.post_low);
    let b = location.distance(GOAL.post_high);
    let c = GOAL.post_low.distance(GOAL.post_high);
    let cos = ((a * a + b * b - c * c) / (2.0 * a * b)).clamp(-1.0, 1.0);
    Ok(cos.acos().to_degrees())
}

fn cross(o: Point, a: Point, b: Point) -> f64 {
    (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)
}

/// Whether `point` lies in the closed triangle (shot location, low post,
/// high post). Edges and vertices count as inside.
pub fn point_in_shot_triangle(point: Point, shot_location: Point) -> bool {
    let d1 = cross(shot_location, GOAL.post_low, point);
    let d2 = cross(GOAL.post_low, GOAL.post_high, point);
    let d3 = cross(GOAL.post_high, shot_location, point);
    let has_neg = d1 < 0.0 || d2 < 0.0 || d3 < 0.0;
    let has_pos = d1 > 0.0 || d2 > 0.0 || d3 > 0.0;
    !(has_neg && has_pos)
}

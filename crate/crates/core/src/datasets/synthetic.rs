//! Seeded generators for the 2D benchmark datasets.
//!
//! Geometry for the polygon-based sets lives in `templates/*.json`. Where a
//! generator adds Gaussian noise its standard deviation is 2% of the
//! template's bounding diameter.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::Deserialize;

use super::polygon::{area, sample_in, Point};
use super::Dataset;
use crate::error::{Error, Result};
use crate::numerics::{Matrix, Rng};

pub const NOISE_FRACTION: f64 = 0.02;

const OLYMPIC_JSON: &str = include_str!("../../templates/olympic.json");
const SHAPE_JSON: &str = include_str!("../../templates/shape.json");
const WORLD_MAP_JSON: &str = include_str!("../../templates/world_map.json");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SyntheticKind {
    EllipticRing,
    Olympic,
    Spiral,
    Shape,
    WorldMap,
}

impl SyntheticKind {
    pub const ALL: [SyntheticKind; 5] = [
        SyntheticKind::EllipticRing,
        SyntheticKind::Olympic,
        SyntheticKind::Spiral,
        SyntheticKind::Shape,
        SyntheticKind::WorldMap,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SyntheticKind::EllipticRing => "elliptic_ring",
            SyntheticKind::Olympic => "olympic",
            SyntheticKind::Spiral => "spiral",
            SyntheticKind::Shape => "shape",
            SyntheticKind::WorldMap => "world_map",
        }
    }

    /// `(samples, classes)`.
    pub fn size(self) -> (usize, usize) {
        match self {
            SyntheticKind::EllipticRing => (1100, 3),
            SyntheticKind::Olympic => (2500, 5),
            SyntheticKind::Spiral => (312, 3),
            SyntheticKind::Shape => (2000, 5),
            SyntheticKind::WorldMap => (2843, 5),
        }
    }
}

impl fmt::Display for SyntheticKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SyntheticKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.to_ascii_lowercase().replace('-', "_");
        SyntheticKind::ALL
            .into_iter()
            .find(|k| k.name() == norm || k.name().replace('_', "") == norm)
            .ok_or_else(|| {
                Error::invalid(format!(
                    "unknown dataset kind {s:?}; expected one of elliptic_ring, olympic, spiral, shape, world_map"
                ))
            })
    }
}

pub fn gen_synthetic(kind: SyntheticKind, rng: &mut Rng) -> Dataset {
    let (points, labels) = match kind {
        SyntheticKind::EllipticRing => elliptic_ring(rng),
        SyntheticKind::Olympic => olympic(rng),
        SyntheticKind::Spiral => spiral(rng),
        SyntheticKind::Shape => polygon_classes(&shape_template(), rng),
        SyntheticKind::WorldMap => polygon_classes(&world_map_template(), rng),
    };
    let x = Matrix::from_rows(&points).expect("2D rows");
    Dataset {
        name: kind.name().to_string(),
        x,
        labels: Some(labels),
        feature_names: Some(vec!["x".into(), "y".into()]),
    }
}

fn elliptic_ring(rng: &mut Rng) -> (Vec<Point>, Vec<usize>) {
    const RING: usize = 700;
    const BALL: usize = 200;
    const SEMI_MAJOR: f64 = 2.0;
    const SEMI_MINOR: f64 = 1.2;
    const BALL_SIGMA: f64 = 0.15;
    let centers = [[-0.8, 0.0], [0.8, 0.0]];
    let sigma = NOISE_FRACTION * 2.0 * SEMI_MAJOR;

    let mut pts = Vec::with_capacity(RING + 2 * BALL);
    let mut labels = Vec::with_capacity(RING + 2 * BALL);
    for _ in 0..RING {
        let t = rng.uniform(0.0, 2.0 * PI);
        pts.push([
            SEMI_MAJOR * t.cos() + sigma * rng.normal(),
            SEMI_MINOR * t.sin() + sigma * rng.normal(),
        ]);
        labels.push(0);
    }
    for (c, center) in centers.iter().enumerate() {
        for _ in 0..BALL {
            pts.push([
                center[0] + BALL_SIGMA * rng.normal(),
                center[1] + BALL_SIGMA * rng.normal(),
            ]);
            labels.push(c + 1);
        }
    }
    (pts, labels)
}

#[derive(Debug, Deserialize)]
pub struct OlympicTemplate {
    pub radius: f64,
    pub points_per_ring: usize,
    pub centers: Vec<Point>,
}

impl OlympicTemplate {
    /// Width of the logo's bounding box.
    pub fn diameter(&self) -> f64 {
        let xs = self.centers.iter().map(|c| c[0]);
        let ys = self.centers.iter().map(|c| c[1]);
        let w = xs.clone().fold(f64::NEG_INFINITY, f64::max) - xs.fold(f64::INFINITY, f64::min);
        let h = ys.clone().fold(f64::NEG_INFINITY, f64::max) - ys.fold(f64::INFINITY, f64::min);
        w.max(h) + 2.0 * self.radius
    }

    pub fn noise_sigma(&self) -> f64 {
        NOISE_FRACTION * self.diameter()
    }
}

pub fn olympic_template() -> OlympicTemplate {
    serde_json::from_str(OLYMPIC_JSON).expect("valid olympic template")
}

fn olympic(rng: &mut Rng) -> (Vec<Point>, Vec<usize>) {
    let t = olympic_template();
    let sigma = t.noise_sigma();
    let m = t.points_per_ring;
    let mut pts = Vec::with_capacity(m * t.centers.len());
    let mut labels = Vec::with_capacity(m * t.centers.len());
    for (c, center) in t.centers.iter().enumerate() {
        // Evenly spaced angles with a random phase keep each ring's centroid
        // on its template center up to the Gaussian noise.
        let phase = rng.uniform(0.0, 2.0 * PI);
        for p in 0..m {
            let a = phase + 2.0 * PI * p as f64 / m as f64;
            pts.push([
                center[0] + t.radius * a.cos() + sigma * rng.normal(),
                center[1] + t.radius * a.sin() + sigma * rng.normal(),
            ]);
            labels.push(c);
        }
    }
    (pts, labels)
}

fn spiral(rng: &mut Rng) -> (Vec<Point>, Vec<usize>) {
    const ARMS: usize = 3;
    const PER_ARM: usize = 104;
    const THETA_START: f64 = 0.5 * PI;
    const THETA_END: f64 = 3.0 * PI;
    // r = θ / θ_end, so the outermost point sits on the unit circle.
    let sigma = NOISE_FRACTION * 2.0;
    let mut pts = Vec::with_capacity(ARMS * PER_ARM);
    let mut labels = Vec::with_capacity(ARMS * PER_ARM);
    for arm in 0..ARMS {
        let rot = 2.0 * PI * arm as f64 / ARMS as f64;
        for p in 0..PER_ARM {
            let theta = THETA_START + (THETA_END - THETA_START) * p as f64 / (PER_ARM - 1) as f64;
            let r = theta / THETA_END;
            pts.push([
                r * (theta + rot).cos() + sigma * rng.normal(),
                r * (theta + rot).sin() + sigma * rng.normal(),
            ]);
            labels.push(arm);
        }
    }
    (pts, labels)
}

#[derive(Debug, Deserialize)]
pub struct PolygonClass {
    pub name: String,
    #[serde(default)]
    pub points: Option<usize>,
    pub polygons: Vec<Vec<Point>>,
}

#[derive(Debug, Deserialize)]
pub struct PolygonTemplate {
    pub name: String,
    pub scale: f64,
    /// When set, points are apportioned to classes by polygon area.
    #[serde(default)]
    pub total_points: Option<usize>,
    pub classes: Vec<PolygonClass>,
}

impl PolygonTemplate {
    pub fn class_areas(&self) -> Vec<f64> {
        self.classes
            .iter()
            .map(|c| c.polygons.iter().map(|p| area(p)).sum())
            .collect()
    }

    /// Points per class: explicit counts, or largest-remainder apportionment
    /// of `total_points` by area.
    pub fn class_counts(&self) -> Vec<usize> {
        match self.total_points {
            None => self
                .classes
                .iter()
                .map(|c| c.points.expect("class point count"))
                .collect(),
            Some(total) => apportion(total, &self.class_areas()),
        }
    }
}

pub fn apportion(total: usize, weights: &[f64]) -> Vec<usize> {
    let sum: f64 = weights.iter().sum();
    let quotas: Vec<f64> = weights.iter().map(|w| w / sum * total as f64).collect();
    let mut counts: Vec<usize> = quotas.iter().map(|q| q.floor() as usize).collect();
    let mut rest = total - counts.iter().sum::<usize>();
    let mut order: Vec<usize> = (0..weights.len()).collect();
    order.sort_by(|&a, &b| {
        let ra = quotas[a] - quotas[a].floor();
        let rb = quotas[b] - quotas[b].floor();
        rb.partial_cmp(&ra).unwrap().then(a.cmp(&b))
    });
    for &i in &order {
        if rest == 0 {
            break;
        }
        counts[i] += 1;
        rest -= 1;
    }
    counts
}

pub fn shape_template() -> PolygonTemplate {
    serde_json::from_str(SHAPE_JSON).expect("valid shape template")
}

pub fn world_map_template() -> PolygonTemplate {
    serde_json::from_str(WORLD_MAP_JSON).expect("valid world map template")
}

fn polygon_classes(t: &PolygonTemplate, rng: &mut Rng) -> (Vec<Point>, Vec<usize>) {
    let counts = t.class_counts();
    let mut pts = Vec::with_capacity(counts.iter().sum());
    let mut labels = Vec::with_capacity(pts.capacity());
    for (c, (class, &count)) in t.classes.iter().zip(&counts).enumerate() {
        let areas: Vec<f64> = class.polygons.iter().map(|p| area(p)).collect();
        for _ in 0..count {
            let [x, y] = sample_in(&class.polygons, &areas, rng);
            pts.push([x * t.scale, y * t.scale]);
            labels.push(c);
        }
    }
    (pts, labels)
}

//! Exact initial volume fractions.

use super::plic::halfplane_fraction;
use super::VofField;
use crate::mesh::{CartesianMesh, Point};

/// `int_{-inf}^{x} sqrt(r^2 - t^2) dt` restricted to `|x| <= r`, up to a constant.
fn half_chord_primitive(x: f64, r: f64) -> f64 {
    let x = x.clamp(-r, r);
    0.5 * (x * (r * r - x * x).max(0.0).sqrt() + r * r * (x / r).asin())
}

/// Exact area of the intersection of a disc with an axis-aligned rectangle.
pub fn disc_rectangle_area(center: Point, r: f64, lo: Point, hi: Point) -> f64 {
    // work in coordinates centred on the disc
    let (x0, x1) = ((lo[0] - center[0]).max(-r), (hi[0] - center[0]).min(r));
    let (y0, y1) = (lo[1] - center[1], hi[1] - center[1]);
    if x0 >= x1 || y0 >= r || y1 <= -r {
        return 0.0;
    }
    // breakpoints where the chord ends cross y0 or y1
    let mut xs = vec![x0, x1];
    for y in [y0, y1] {
        if y.abs() < r {
            let s = (r * r - y * y).sqrt();
            for x in [-s, s] {
                if x > x0 && x < x1 {
                    xs.push(x);
                }
            }
        }
    }
    xs.sort_by(f64::total_cmp);
    let s = |x: f64| (r * r - x * x).max(0.0).sqrt();
    let mut area = 0.0;
    for w in xs.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b - a <= 0.0 {
            continue;
        }
        let m = 0.5 * (a + b);
        let sm = s(m);
        if sm.min(y1) <= (-sm).max(y0) {
            continue;
        }
        let prim = half_chord_primitive(b, r) - half_chord_primitive(a, r);
        // upper bound: either the arc +s or the line y1
        area += if sm < y1 { prim } else { y1 * (b - a) };
        // lower bound: either the arc -s or the line y0
        area -= if -sm > y0 { -prim } else { y0 * (b - a) };
    }
    area
}

/// Volume fractions of a disc of phase 2.
pub fn circle_fraction(mesh: &CartesianMesh, center: Point, r: f64) -> VofField {
    let chi = (0..mesh.num_cells())
        .map(|c| {
            let (lo, hi) = mesh.cell_bounds(c);
            (disc_rectangle_area(center, r, lo, hi) / mesh.cell_area()).clamp(0.0, 1.0)
        })
        .collect();
    VofField::new(chi)
}

/// Volume fractions of the half-plane `{normal . x <= offset}` of phase 2.
pub fn halfplane_fraction_field(mesh: &CartesianMesh, normal: Point, offset: f64) -> VofField {
    VofField::new((0..mesh.num_cells()).map(|c| halfplane_fraction(mesh, c, normal, offset)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn disc_areas() {
        let pi = std::f64::consts::PI;
        assert!((disc_rectangle_area([0.0, 0.0], 1.0, [-2.0, -2.0], [2.0, 2.0]) - pi).abs() < 1e-14);
        assert!((disc_rectangle_area([0.0, 0.0], 1.0, [0.0, 0.0], [2.0, 2.0]) - pi / 4.0).abs() < 1e-14);
        assert!((disc_rectangle_area([0.0, 0.0], 1.0, [-2.0, 0.5], [2.0, 2.0]) - (pi / 3.0 - 3f64.sqrt() / 4.0)).abs() < 1e-14);
        let inner = disc_rectangle_area([0.0, 0.0], 1.0, [-0.1, -0.2], [0.3, 0.1]);
        assert!((inner - 0.4 * 0.3).abs() < 1e-15);
        assert_eq!(disc_rectangle_area([0.0, 0.0], 1.0, [1.0, 1.0], [2.0, 2.0]), 0.0);
    }

    #[test]
    fn disc_area_matches_sampling() {
        // corner cell crossing the arc twice
        let lo = [0.6, 0.5];
        let hi = [0.9, 0.85];
        let exact = disc_rectangle_area([0.0, 0.0], 1.0, lo, hi);
        let n = 2000;
        let mut inside = 0usize;
        for a in 0..n {
            for b in 0..n {
                let x = lo[0] + (a as f64 + 0.5) / n as f64 * (hi[0] - lo[0]);
                let y = lo[1] + (b as f64 + 0.5) / n as f64 * (hi[1] - lo[1]);
                inside += usize::from(x * x + y * y < 1.0);
            }
        }
        let sampled = inside as f64 / (n * n) as f64 * (hi[0] - lo[0]) * (hi[1] - lo[1]);
        assert!((exact - sampled).abs() < 1e-5, "{exact} vs {sampled}");
    }

    #[test]
    fn bubble_mass_is_exact() {
        let mesh = CartesianMesh::new(40, 80, [0.0, 0.0], [1.0, 2.0]).unwrap();
        let f = circle_fraction(&mesh, [0.5, 0.5], 0.25);
        assert!((f.mass(&mesh) - std::f64::consts::PI / 16.0).abs() < 1e-13);
        assert!(f.chi.iter().all(|&c| (0.0..=1.0).contains(&c)));
    }
}

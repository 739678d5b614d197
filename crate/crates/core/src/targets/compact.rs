use std::f64::consts::PI;

use num_complex::Complex64;

use super::TargetError;

/// Default cap on the number of sample points in one grid.
pub const DEFAULT_POINT_CAP: usize = 2_000_000;

/// Shapes with connected complement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Shape {
    /// Closed disk `|s - center| ≤ radius`.
    Disk { center: Complex64, radius: f64 },
    /// Closed axis-parallel rectangle spanned by two opposite corners.
    Rectangle { corner1: Complex64, corner2: Complex64 },
    /// `{σ + it : σ_min ≤ σ ≤ σ_max}`.
    Segment { t: f64, sigma_min: f64, sigma_max: f64 },
}

impl Shape {
    fn validate(&self) -> Result<(), TargetError> {
        let finite = |z: Complex64| z.re.is_finite() && z.im.is_finite();
        match *self {
            Shape::Disk { center, radius } => {
                if !finite(center) || !(radius >= 0.0 && radius.is_finite()) {
                    return Err(TargetError::InvalidShape(format!(
                        "disk center {center}, radius {radius}"
                    )));
                }
            }
            Shape::Rectangle { corner1, corner2 } => {
                if !finite(corner1) || !finite(corner2) {
                    return Err(TargetError::InvalidShape("non-finite rectangle corner".into()));
                }
                if corner1.re == corner2.re || corner1.im == corner2.im {
                    return Err(TargetError::InvalidShape(format!(
                        "rectangle {corner1} .. {corner2} is degenerate; use a segment or disk"
                    )));
                }
            }
            Shape::Segment {
                t,
                sigma_min,
                sigma_max,
            } => {
                if !(t.is_finite() && sigma_min.is_finite() && sigma_min <= sigma_max && sigma_max.is_finite()) {
                    return Err(TargetError::InvalidShape(format!(
                        "segment [{sigma_min}, {sigma_max}] at t = {t}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// `(min Re s, max Re s)` over the shape.
    pub fn sigma_range(&self) -> (f64, f64) {
        match *self {
            Shape::Disk { center, radius } => (center.re - radius, center.re + radius),
            Shape::Rectangle { corner1, corner2 } => {
                (corner1.re.min(corner2.re), corner1.re.max(corner2.re))
            }
            Shape::Segment {
                sigma_min,
                sigma_max,
                ..
            } => (sigma_min, sigma_max),
        }
    }

    /// Membership with slack `tol`.
    pub fn contains(&self, s: Complex64, tol: f64) -> bool {
        match *self {
            Shape::Disk { center, radius } => (s - center).norm() <= radius + tol,
            Shape::Rectangle { corner1, corner2 } => {
                let (x0, x1) = (corner1.re.min(corner2.re), corner1.re.max(corner2.re));
                let (y0, y1) = (corner1.im.min(corner2.im), corner1.im.max(corner2.im));
                s.re >= x0 - tol && s.re <= x1 + tol && s.im >= y0 - tol && s.im <= y1 + tol
            }
            Shape::Segment {
                t,
                sigma_min,
                sigma_max,
            } => (s.im - t).abs() <= tol && s.re >= sigma_min - tol && s.re <= sigma_max + tol,
        }
    }
}

/// A compact set inside the open strip `a < σ < b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompactSet {
    shape: Shape,
    strip: (f64, f64),
}

impl CompactSet {
    pub fn new(shape: Shape, a: f64, b: f64) -> Result<Self, TargetError> {
        shape.validate()?;
        let (lo, hi) = shape.sigma_range();
        if !(a < b) || !(lo > a && hi < b) {
            return Err(TargetError::OutsideStrip { lo, hi, a, b });
        }
        Ok(Self {
            shape,
            strip: (a, b),
        })
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn strip(&self) -> (f64, f64) {
        self.strip
    }

    pub fn contains(&self, s: Complex64, tol: f64) -> bool {
        self.shape.contains(s, tol)
    }

    /// Checks containment in the open strip `a < σ < b`.
    pub fn check_in_strip(&self, a: f64, b: f64) -> Result<(), TargetError> {
        let (lo, hi) = self.shape.sigma_range();
        if lo > a && hi < b {
            Ok(())
        } else {
            Err(TargetError::OutsideStrip { lo, hi, a, b })
        }
    }
}

/// Sample points of a compact set.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleGrid {
    pub boundary: Vec<Complex64>,
    pub interior: Vec<Complex64>,
    pub mesh: f64,
    /// The maximum principle lets holomorphic integrands use the boundary
    /// points alone.
    pub boundary_suffices: bool,
}

impl SampleGrid {
    pub fn points(&self) -> impl Iterator<Item = &Complex64> {
        self.boundary.iter().chain(&self.interior)
    }

    pub fn len(&self) -> usize {
        self.boundary.len() + self.interior.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Boundary points only when that suffices, otherwise everything.
    pub fn essential(&self) -> SampleGrid {
        if self.boundary_suffices {
            SampleGrid {
                boundary: self.boundary.clone(),
                interior: Vec::new(),
                mesh: self.mesh,
                boundary_suffices: true,
            }
        } else {
            self.clone()
        }
    }
}

pub fn sample_points(k: &CompactSet, mesh: f64) -> Result<SampleGrid, TargetError> {
    sample_points_capped(k, mesh, DEFAULT_POINT_CAP)
}

/// Boundary with spacing `≤ mesh` plus an interior lattice of pitch `mesh`.
pub fn sample_points_capped(k: &CompactSet, mesh: f64, cap: usize) -> Result<SampleGrid, TargetError> {
    if !(mesh > 0.0 && mesh.is_finite()) {
        return Err(TargetError::InvalidMesh(mesh));
    }
    let too_fine = |points: f64| {
        if points > cap as f64 {
            Err(TargetError::MeshTooFine {
                points: points.min(usize::MAX as f64) as usize,
                cap,
            })
        } else {
            Ok(())
        }
    };
    match *k.shape() {
        Shape::Disk { center, radius } => {
            if radius == 0.0 {
                return Ok(SampleGrid {
                    boundary: vec![center],
                    interior: Vec::new(),
                    mesh,
                    boundary_suffices: true,
                });
            }
            let n = (2.0 * PI * radius / mesh).ceil().max(3.0);
            let cells = (radius / mesh).ceil();
            too_fine(n + (2.0 * cells + 1.0).powi(2))?;
            let n = n as usize;
            let boundary = (0..n)
                .map(|i| center + Complex64::from_polar(radius, 2.0 * PI * i as f64 / n as f64))
                .collect();
            let cells = cells as i64;
            let mut interior = Vec::new();
            for iy in -cells..=cells {
                for ix in -cells..=cells {
                    let d = Complex64::new(ix as f64 * mesh, iy as f64 * mesh);
                    if d.norm() < radius {
                        interior.push(center + d);
                    }
                }
            }
            Ok(SampleGrid {
                boundary,
                interior,
                mesh,
                boundary_suffices: true,
            })
        }
        Shape::Rectangle { corner1, corner2 } => {
            let (x0, x1) = (corner1.re.min(corner2.re), corner1.re.max(corner2.re));
            let (y0, y1) = (corner1.im.min(corner2.im), corner1.im.max(corner2.im));
            let nx = ((x1 - x0) / mesh).ceil().max(1.0);
            let ny = ((y1 - y0) / mesh).ceil().max(1.0);
            too_fine((nx + 1.0) * (ny + 1.0))?;
            let (nx, ny) = (nx as usize, ny as usize);
            let xs: Vec<f64> = (0..=nx)
                .map(|i| if i == nx { x1 } else { x0 + (x1 - x0) * i as f64 / nx as f64 })
                .collect();
            let ys: Vec<f64> = (0..=ny)
                .map(|i| if i == ny { y1 } else { y0 + (y1 - y0) * i as f64 / ny as f64 })
                .collect();
            let mut boundary = Vec::with_capacity(2 * (nx + ny));
            boundary.extend(xs.iter().map(|&x| Complex64::new(x, y0)));
            boundary.extend(ys[1..].iter().map(|&y| Complex64::new(x1, y)));
            boundary.extend(xs[..nx].iter().rev().map(|&x| Complex64::new(x, y1)));
            boundary.extend(ys[1..ny].iter().rev().map(|&y| Complex64::new(x0, y)));
            let mut interior = Vec::with_capacity((nx - 1) * (ny - 1));
            for &y in &ys[1..ny] {
                for &x in &xs[1..nx] {
                    interior.push(Complex64::new(x, y));
                }
            }
            Ok(SampleGrid {
                boundary,
                interior,
                mesh,
                boundary_suffices: true,
            })
        }
        Shape::Segment {
            t,
            sigma_min,
            sigma_max,
        } => {
            let n = ((sigma_max - sigma_min) / mesh).ceil();
            too_fine(n + 1.0)?;
            let n = n as usize;
            let boundary = (0..=n)
                .map(|i| {
                    let x = if i == n && n > 0 {
                        sigma_max
                    } else if n == 0 {
                        sigma_min
                    } else {
                        sigma_min + (sigma_max - sigma_min) * i as f64 / n as f64
                    };
                    Complex64::new(x, t)
                })
                .collect();
            Ok(SampleGrid {
                boundary,
                interior: Vec::new(),
                mesh,
                boundary_suffices: true,
            })
        }
    }
}

//! Plane renderings as binary portable pixmaps (P6): escape-time shading
//! with separators, landing points, region tints, and the singular orbit
//! overlaid. Everything is a pure function of the inputs, so identical
//! configurations produce byte-identical files.

use std::io::Write;
use std::path::Path;

use num_complex::Complex64;
use raysep::maps::{is_finite, Family, MapSpec, Rect};
use raysep::regions::{Located, RegionDecomposition};

pub struct RenderSpec {
    pub width: usize,
    pub height: usize,
    pub viewport: Rect,
    pub escape_iters: u32,
}

pub struct Canvas {
    pub width: usize,
    pub height: usize,
    rgb: Vec<u8>,
    viewport: Rect,
}

impl Canvas {
    fn pixel_center(&self, i: usize, j: usize) -> Complex64 {
        let x = self.viewport.x0 + (i as f64 + 0.5) / self.width as f64 * self.viewport.width();
        let y = self.viewport.y1 - (j as f64 + 0.5) / self.height as f64 * self.viewport.height();
        Complex64::new(x, y)
    }

    fn to_pixel(&self, z: Complex64) -> Option<(usize, usize)> {
        let i = (z.re - self.viewport.x0) / self.viewport.width() * self.width as f64;
        let j = (self.viewport.y1 - z.im) / self.viewport.height() * self.height as f64;
        if i >= 0.0 && j >= 0.0 && (i as usize) < self.width && (j as usize) < self.height {
            Some((i as usize, j as usize))
        } else {
            None
        }
    }

    fn put(&mut self, i: usize, j: usize, color: [u8; 3]) {
        let idx = 3 * (j * self.width + i);
        self.rgb[idx..idx + 3].copy_from_slice(&color);
    }

    fn blend(&mut self, i: usize, j: usize, color: [u8; 3], alpha: u32) {
        let idx = 3 * (j * self.width + i);
        for k in 0..3 {
            let old = self.rgb[idx + k] as u32;
            self.rgb[idx + k] = ((old * (255 - alpha) + color[k] as u32 * alpha) / 255) as u8;
        }
    }

    fn stamp(&mut self, z: Complex64, half: usize, color: [u8; 3]) {
        if let Some((ci, cj)) = self.to_pixel(z) {
            for dj in 0..=2 * half {
                for di in 0..=2 * half {
                    let i = ci as isize + di as isize - half as isize;
                    let j = cj as isize + dj as isize - half as isize;
                    if i >= 0 && j >= 0 && (i as usize) < self.width && (j as usize) < self.height
                    {
                        self.put(i as usize, j as usize, color);
                    }
                }
            }
        }
    }
}

fn escape_count(m: &MapSpec, z0: Complex64, max_iters: u32) -> Option<u32> {
    let bail = match m.family {
        Family::Exponential => 50.0, // Re z beyond this escapes for sure
        Family::Quadratic => 100.0,
    };
    let mut z = z0;
    for k in 0..max_iters {
        let gone = match m.family {
            Family::Exponential => z.re > bail,
            Family::Quadratic => z.norm() > bail,
        };
        if gone || !is_finite(z) {
            return Some(k);
        }
        z = m.eval(z);
    }
    None
}

fn escape_color(k: u32) -> [u8; 3] {
    [
        (55 + (k * 11) % 200) as u8,
        (30 + (k * 7) % 200) as u8,
        ((k * 5) % 160) as u8,
    ]
}

const REGION_TINTS: [[u8; 3]; 8] = [
    [255, 150, 40],
    [60, 130, 255],
    [90, 220, 120],
    [230, 90, 200],
    [250, 230, 80],
    [90, 220, 230],
    [200, 120, 90],
    [150, 150, 255],
];

fn region_tint(id: &str) -> [u8; 3] {
    let mut h: u32 = 5;
    for b in id.bytes() {
        h = h.wrapping_mul(31).wrapping_add(b as u32);
    }
    REGION_TINTS[(h % 8) as usize]
}

pub fn render_plane(
    m: &MapSpec,
    spec: &RenderSpec,
    decomp: Option<&RegionDecomposition>,
    orbit: &[Complex64],
) -> Canvas {
    let mut canvas = Canvas {
        width: spec.width,
        height: spec.height,
        rgb: vec![0; 3 * spec.width * spec.height],
        viewport: spec.viewport,
    };

    for j in 0..spec.height {
        for i in 0..spec.width {
            let z = canvas.pixel_center(i, j);
            let color = match escape_count(m, z, spec.escape_iters) {
                Some(k) => escape_color(k),
                None => [8, 8, 40],
            };
            canvas.put(i, j, color);
        }
    }

    if let Some(d) = decomp {
        if !d.separators.is_empty() {
            // region tints
            for j in 0..spec.height {
                for i in 0..spec.width {
                    let z = canvas.pixel_center(i, j);
                    if let Located::Region(id) = d.locate(z) {
                        canvas.blend(i, j, region_tint(&id), 70);
                    }
                }
            }
        }
        // separator polylines
        for sep in &d.separators {
            let boundary = &sep.polygon[..sep.boundary_len];
            for w in boundary.windows(2) {
                draw_segment(&mut canvas, w[0], w[1], [240, 240, 240]);
            }
        }
        // landing points
        for group in &d.groups {
            canvas.stamp(group.landing_point, 2, [255, 40, 40]);
        }
        for ray in &d.traced {
            if let Some(pt) = ray.landing.confident_point() {
                canvas.stamp(pt, 1, [255, 90, 90]);
            }
        }
    }

    for z in orbit.iter().take(400) {
        canvas.stamp(*z, 1, [255, 240, 60]);
    }

    canvas
}

fn draw_segment(canvas: &mut Canvas, a: Complex64, b: Complex64, color: [u8; 3]) {
    // clip cheaply: skip segments entirely outside a padded viewport
    let v = canvas.viewport;
    let pad_x = v.width() * 0.5;
    let pad_y = v.height() * 0.5;
    let inside = |z: Complex64| {
        z.re > v.x0 - pad_x && z.re < v.x1 + pad_x && z.im > v.y0 - pad_y && z.im < v.y1 + pad_y
    };
    if !inside(a) && !inside(b) {
        return;
    }
    let steps = {
        let di = (b.re - a.re).abs() / v.width() * canvas.width as f64;
        let dj = (b.im - a.im).abs() / v.height() * canvas.height as f64;
        (di.max(dj).ceil() as usize).clamp(1, 20_000)
    };
    for s in 0..=steps {
        let z = a + (b - a) * (s as f64 / steps as f64);
        if let Some((i, j)) = canvas.to_pixel(z) {
            canvas.put(i, j, color);
        }
    }
}

/// Binary P6 pixmap, written via a temporary file and an atomic rename.
pub fn write_ppm(path: &Path, canvas: &Canvas) -> std::io::Result<()> {
    let mut bytes = format!("P6\n{} {}\n255\n", canvas.width, canvas.height).into_bytes();
    bytes.extend_from_slice(&canvas.rgb);
    write_atomic(path, &bytes)
}

/// Write-then-rename so a crash never leaves a truncated file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let tmp = path.with_extension("tmp.partial");
    {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    std::fs::rename(&tmp, path)
}

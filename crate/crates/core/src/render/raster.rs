use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use crate::membership::OrderVector;

use super::{DomainBox, RenderError};

pub const BACKGROUND: [u8; 3] = [255, 255, 255];
pub const INK: [u8; 3] = [24, 24, 32];

/// RGB raster over a two-dimensional domain. Row 0 is the top edge (largest
/// second coordinate).
#[derive(Debug, Clone, PartialEq)]
pub struct RasterImage {
    width: usize,
    height: usize,
    pixels: Vec<[u8; 3]>,
    domain: DomainBox,
}

impl RasterImage {
    pub fn new(width: usize, height: usize, domain: DomainBox) -> Self {
        assert!(width >= 1 && height >= 1, "raster dimensions must be positive");
        assert_eq!(domain.dimension(), 2, "rasters cover two-dimensional domains");
        RasterImage { width, height, pixels: vec![BACKGROUND; width * height], domain }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn domain(&self) -> &DomainBox {
        &self.domain
    }

    pub fn get(&self, i: usize, j: usize) -> [u8; 3] {
        self.pixels[j * self.width + i]
    }

    pub fn set(&mut self, i: usize, j: usize, rgb: [u8; 3]) {
        self.pixels[j * self.width + i] = rgb;
    }

    pub fn is_painted(&self, i: usize, j: usize) -> bool {
        self.get(i, j) != BACKGROUND
    }

    pub fn painted_count(&self) -> usize {
        self.pixels.iter().filter(|p| **p != BACKGROUND).count()
    }

    /// Center of pixel `(i, j)`.
    pub fn pixel_center(&self, i: usize, j: usize) -> [f64; 2] {
        let d = &self.domain;
        [
            d.lo[0] + (i as f64 + 0.5) * d.width(0) / self.width as f64,
            d.hi[1] - (j as f64 + 0.5) * d.width(1) / self.height as f64,
        ]
    }

    /// Pixel containing `p`, if inside the domain.
    pub fn pixel_of(&self, p: [f64; 2]) -> Option<(usize, usize)> {
        let d = &self.domain;
        let u = (p[0] - d.lo[0]) / d.width(0);
        let v = (d.hi[1] - p[1]) / d.width(1);
        if !(0.0..=1.0).contains(&u) || !(0.0..=1.0).contains(&v) {
            return None;
        }
        let i = ((u * self.width as f64) as usize).min(self.width - 1);
        let j = ((v * self.height as f64) as usize).min(self.height - 1);
        Some((i, j))
    }

    /// Columns whose centers lie in `[a, b)`.
    pub fn column_range(&self, a: f64, b: f64) -> (usize, usize) {
        let d = &self.domain;
        let f = |x: f64| ((x - d.lo[0]) / d.width(0) * self.width as f64 - 0.5).ceil().clamp(0.0, self.width as f64) as usize;
        (f(a), f(b))
    }

    /// Rows whose centers lie in `(a, b]` of the second coordinate.
    pub fn row_range(&self, a: f64, b: f64) -> (usize, usize) {
        let d = &self.domain;
        let f = |y: f64| ((d.hi[1] - y) / d.width(1) * self.height as f64 - 0.5).ceil().clamp(0.0, self.height as f64) as usize;
        (f(b), f(a))
    }

    /// Binary PPM (P6, maxval 255).
    pub fn to_ppm(&self) -> Vec<u8> {
        let mut out = format!("P6\n{} {}\n255\n", self.width, self.height).into_bytes();
        out.reserve(self.pixels.len() * 3);
        for p in &self.pixels {
            out.extend_from_slice(p);
        }
        out
    }

    /// SVG 1.1 document: the raster as row runs plus optional overlay polylines.
    pub fn to_svg(&self, overlay: Option<&Overlay>) -> String {
        let (w, h) = (self.width, self.height);
        let mut s = String::new();
        let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}" shape-rendering="crispEdges">"#
        );
        for j in 0..h {
            let mut i = 0;
            while i < w {
                let c = self.get(i, j);
                let mut k = i + 1;
                while k < w && self.get(k, j) == c {
                    k += 1;
                }
                let _ = writeln!(
                    s,
                    r##"<rect x="{i}" y="{j}" width="{}" height="1" fill="#{:02x}{:02x}{:02x}"/>"##,
                    k - i,
                    c[0],
                    c[1],
                    c[2]
                );
                i = k;
            }
        }
        if let Some(ov) = overlay {
            for line in &ov.polylines {
                let pts: Vec<String> = line
                    .iter()
                    .map(|p| {
                        let (x, y) = self.to_canvas(*p);
                        format!("{x:.3},{y:.3}")
                    })
                    .collect();
                let _ = writeln!(
                    s,
                    r##"<polyline points="{}" fill="none" stroke="#d62728" stroke-width="1.5"/>"##,
                    pts.join(" ")
                );
            }
            for p in &ov.points {
                let (x, y) = self.to_canvas(*p);
                let _ = writeln!(s, r##"<circle cx="{x:.3}" cy="{y:.3}" r="2" fill="#1f77b4"/>"##);
            }
        }
        s.push_str("</svg>\n");
        s
    }

    fn to_canvas(&self, p: [f64; 2]) -> (f64, f64) {
        let d = &self.domain;
        (
            (p[0] - d.lo[0]) / d.width(0) * self.width as f64,
            (d.hi[1] - p[1]) / d.width(1) * self.height as f64,
        )
    }
}

/// Vector decorations drawn over a raster in SVG output.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overlay {
    pub polylines: Vec<Vec<[f64; 2]>>,
    pub points: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ImageFormat {
    Ppm,
    Svg,
}

pub fn write_image(
    image: &RasterImage,
    path: &Path,
    format: ImageFormat,
    overlay: Option<&Overlay>,
) -> Result<(), RenderError> {
    let bytes = match format {
        ImageFormat::Ppm => image.to_ppm(),
        ImageFormat::Svg => image.to_svg(overlay).into_bytes(),
    };
    let mut f = std::fs::File::create(path)?;
    f.write_all(&bytes)?;
    Ok(())
}

/// Flat color for a component order, hashed so it does not depend on which
/// other components exist.
pub fn order_color(order: &OrderVector) -> [u8; 3] {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for v in &order.0 {
        for b in v.to_le_bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
    }
    let hue = (h % 360) as f64;
    let sat = 0.55 + ((h >> 16) % 30) as f64 / 100.0;
    let val = 0.70 + ((h >> 32) % 25) as f64 / 100.0;
    hsv(hue, sat, val)
}

fn hsv(h: f64, s: f64, v: f64) -> [u8; 3] {
    let c = v * s;
    let x = c * (1.0 - ((h / 60.0) % 2.0 - 1.0).abs());
    let m = v - c;
    let (r, g, b) = match (h / 60.0) as u32 {
        0 => (c, x, 0.0),
        1 => (x, c, 0.0),
        2 => (0.0, c, x),
        3 => (0.0, x, c),
        4 => (x, 0.0, c),
        _ => (c, 0.0, x),
    };
    let q = |t: f64| ((t + m) * 255.0).round() as u8;
    [q(r), q(g), q(b)]
}

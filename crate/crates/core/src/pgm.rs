//! Binary PGM (P5, 8-bit) import/export for grids.
//!
//! Occupied cells are written as 255 and empty cells as 0. The physical
//! geometry travels in a comment line of the form
//! `# bounds=x0,y0,x1,y1 res=R`, so a grid round-trips exactly. Row 0 of the
//! image is the top of the bounds rectangle (max y).

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::geom::Rect;
use crate::grid::BitGrid;
use crate::scalar::Scalar;

pub fn to_bytes<T: Scalar>(g: &BitGrid<T>) -> Vec<u8> {
    let b = g.bounds();
    let mut out = format!(
        "P5\n# bounds={},{},{},{} res={}\n{} {}\n255\n",
        b.x0.as_f64(),
        b.y0.as_f64(),
        b.x1.as_f64(),
        b.y1.as_f64(),
        g.resolution().as_f64(),
        g.width(),
        g.height()
    )
    .into_bytes();
    out.reserve(g.width() * g.height());
    for iy in (0..g.height()).rev() {
        for ix in 0..g.width() {
            out.push(if g.get(ix, iy) { 255 } else { 0 });
        }
    }
    out
}

pub fn write<T: Scalar>(g: &BitGrid<T>, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, to_bytes(g))?;
    Ok(())
}

pub fn read<T: Scalar>(path: impl AsRef<Path>) -> Result<BitGrid<T>> {
    from_bytes(&fs::read(path)?)
}

pub fn from_bytes<T: Scalar>(data: &[u8]) -> Result<BitGrid<T>> {
    let mut parser = Parser { data, pos: 0, geometry: None };
    let magic = parser.token()?;
    if magic != b"P5" {
        return Err(Error::Pgm(format!(
            "expected P5 magic, found {:?}",
            String::from_utf8_lossy(magic)
        )));
    }
    let width: usize = parser.number()?;
    let height: usize = parser.number()?;
    let maxval: usize = parser.number()?;
    if maxval != 255 {
        return Err(Error::Pgm(format!("expected maxval 255, found {maxval}")));
    }
    // Exactly one whitespace byte separates the header from the raster.
    parser.pos += 1;
    let (bounds, resolution) = parser
        .geometry
        .ok_or_else(|| Error::Pgm("missing `# bounds=... res=...` comment".into()))?;

    let bounds = Rect::new(
        T::from_f64_lossy(bounds[0]),
        T::from_f64_lossy(bounds[1]),
        T::from_f64_lossy(bounds[2]),
        T::from_f64_lossy(bounds[3]),
    )?;
    let mut g = BitGrid::new(bounds, T::from_f64_lossy(resolution))?;
    if g.width() != width || g.height() != height {
        return Err(Error::Pgm(format!(
            "header size {}x{} disagrees with bounds/resolution ({}x{})",
            width,
            height,
            g.width(),
            g.height()
        )));
    }
    let raster = &data[parser.pos..];
    if raster.len() < width * height {
        return Err(Error::Pgm("truncated raster".into()));
    }
    for iy in 0..height {
        let row = height - 1 - iy;
        for ix in 0..width {
            if raster[iy * width + ix] != 0 {
                g.set(ix, row, true);
            }
        }
    }
    Ok(g)
}

struct Parser<'a> {
    data: &'a [u8],
    pos: usize,
    geometry: Option<([f64; 4], f64)>,
}

impl<'a> Parser<'a> {
    /// Next whitespace-separated token, consuming comments (and harvesting
    /// the geometry comment on the way).
    fn token(&mut self) -> Result<&'a [u8]> {
        loop {
            while self.pos < self.data.len() && self.data[self.pos].is_ascii_whitespace() {
                self.pos += 1;
            }
            if self.pos >= self.data.len() {
                return Err(Error::Pgm("unexpected end of header".into()));
            }
            if self.data[self.pos] == b'#' {
                let start = self.pos;
                while self.pos < self.data.len() && self.data[self.pos] != b'\n' {
                    self.pos += 1;
                }
                let comment = &self.data[start..self.pos];
                if let Some(geom) = parse_geometry_comment(comment) {
                    self.geometry = Some(geom);
                }
                continue;
            }
            let start = self.pos;
            while self.pos < self.data.len() && !self.data[self.pos].is_ascii_whitespace() {
                self.pos += 1;
            }
            return Ok(&self.data[start..self.pos]);
        }
    }

    fn number(&mut self) -> Result<usize> {
        let tok = self.token()?;
        std::str::from_utf8(tok)
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Pgm(format!("bad header number {:?}", String::from_utf8_lossy(tok))))
    }
}

fn parse_geometry_comment(comment: &[u8]) -> Option<([f64; 4], f64)> {
    let text = std::str::from_utf8(comment).ok()?;
    let rest = text.trim_start_matches('#').trim();
    let rest = rest.strip_prefix("bounds=")?;
    let (coords, res) = rest.split_once(" res=")?;
    let mut it = coords.split(',').map(|v| v.trim().parse::<f64>());
    let b = [
        it.next()?.ok()?,
        it.next()?.ok()?,
        it.next()?.ok()?,
        it.next()?.ok()?,
    ];
    if it.next().is_some() {
        return None;
    }
    Some((b, res.trim().parse().ok()?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{Point2, SeedRegion};

    #[test]
    fn round_trip_is_exact() {
        let bounds = Rect::new(-0.05, -0.05, 1.05, 0.95).unwrap();
        let g = BitGrid::with_seed(
            bounds,
            173.0,
            Some(SeedRegion::Disk {
                center: Point2::new(0.4, 0.3),
                radius: 0.22,
            }),
        )
        .unwrap();
        let bytes = to_bytes(&g);
        let back: BitGrid = from_bytes(&bytes).unwrap();
        assert_eq!(back, g);
        // And byte-stable through a second cycle.
        assert_eq!(to_bytes(&back), bytes);
    }

    #[test]
    fn header_carries_geometry() {
        let g = BitGrid::new(Rect::new(0.0, 0.0, 2.0, 1.0).unwrap(), 8.0).unwrap();
        let bytes = to_bytes(&g);
        let header = String::from_utf8_lossy(&bytes[..48]);
        assert!(header.starts_with("P5\n# bounds=0,0,2,1 res=8\n16 8\n255\n"), "{header}");
    }

    #[test]
    fn missing_geometry_comment_is_an_error() {
        let data = b"P5\n4 4\n255\n0000000000000000";
        assert!(matches!(from_bytes::<f64>(data), Err(Error::Pgm(_))));
    }

    #[test]
    fn file_io_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("g.pgm");
        let g = BitGrid::with_seed(
            Rect::unit(),
            64.0,
            Some(SeedRegion::Rect(Rect::new(0.25, 0.25, 0.75, 0.75).unwrap())),
        )
        .unwrap();
        write(&g, &path).unwrap();
        let back: BitGrid = read(&path).unwrap();
        assert_eq!(back, g);
    }
}

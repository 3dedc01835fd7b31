//! Exact Euclidean distance transform on the pixel lattice.
//!
//! Two 1-D passes (columns, then rows) of the lower-envelope-of-parabolas
//! transform. Squared distances are integers, so the result is exact; the
//! intermediate envelope bookkeeping uses `f64` only for parabola
//! intersection abscissas, which cannot change which parabola wins at an
//! integer sample point except at exact ties, where both choices agree.

/// Marker for "no feature cell anywhere".
pub const UNREACHED: u64 = u64::MAX;

/// Squared pixel distance from every cell to the nearest cell where
/// `feature` holds, in row-major order (`y * width + x`). Cells are
/// identified with their centers, so distances are between integer lattice
/// points. Returns `UNREACHED` everywhere when no feature cell exists.
pub fn squared_distances<F>(width: usize, height: usize, feature: F) -> Vec<u64>
where
    F: Fn(usize, usize) -> bool,
{
    assert!(width > 0 && height > 0);
    let far = (width + height + 1) as i64;
    let far_sq = far * far;

    // Pass 1: per column, squared vertical distance to the nearest feature.
    let mut col = vec![far_sq; width * height];
    for x in 0..width {
        let mut dist = far;
        for y in 0..height {
            dist = if feature(x, y) { 0 } else { (dist + 1).min(far) };
            col[y * width + x] = dist;
        }
        dist = far;
        for y in (0..height).rev() {
            dist = if feature(x, y) { 0 } else { (dist + 1).min(far) };
            let cell = &mut col[y * width + x];
            *cell = (*cell).min(dist);
        }
        for y in 0..height {
            let cell = &mut col[y * width + x];
            *cell = (*cell * *cell).min(far_sq);
        }
    }

    // Pass 2: per row, 1-D squared transform over parabolas rooted at the
    // vertical distances.
    let mut out = vec![0u64; width * height];
    let mut hull_x = vec![0usize; width];
    let mut hull_z = vec![0f64; width + 1];
    for y in 0..height {
        let row = &col[y * width..(y + 1) * width];
        let mut k = 0usize;
        hull_x[0] = 0;
        hull_z[0] = f64::NEG_INFINITY;
        hull_z[1] = f64::INFINITY;
        for q in 1..width {
            let fq = row[q] + (q * q) as i64;
            loop {
                let p = hull_x[k];
                let fp = row[p] + (p * p) as i64;
                let s = (fq - fp) as f64 / (2.0 * (q as f64 - p as f64));
                if s <= hull_z[k] {
                    if k == 0 {
                        hull_x[0] = q;
                        break;
                    }
                    k -= 1;
                } else {
                    k += 1;
                    hull_x[k] = q;
                    hull_z[k] = s;
                    hull_z[k + 1] = f64::INFINITY;
                    break;
                }
            }
        }
        let mut k = 0usize;
        for q in 0..width {
            while hull_z[k + 1] < q as f64 {
                k += 1;
            }
            let p = hull_x[k];
            let dx = q as i64 - p as i64;
            let d = dx * dx + row[p];
            out[y * width + q] = if d >= far_sq { UNREACHED } else { d as u64 };
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(width: usize, height: usize, feat: &[bool]) -> Vec<u64> {
        let mut out = vec![UNREACHED; width * height];
        for y in 0..height {
            for x in 0..width {
                let mut best = UNREACHED;
                for fy in 0..height {
                    for fx in 0..width {
                        if feat[fy * width + fx] {
                            let dx = x as i64 - fx as i64;
                            let dy = y as i64 - fy as i64;
                            best = best.min((dx * dx + dy * dy) as u64);
                        }
                    }
                }
                out[y * width + x] = best;
            }
        }
        out
    }

    #[test]
    fn matches_brute_force_on_random_masks() {
        // Deterministic xorshift so the test is reproducible.
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for (w, h) in [(1, 1), (7, 3), (16, 16), (31, 9)] {
            for density in [0, 1, 8, 32, 63] {
                let feat: Vec<bool> = (0..w * h).map(|_| next() % 64 < density).collect();
                let got = squared_distances(w, h, |x, y| feat[y * w + x]);
                assert_eq!(got, brute(w, h, &feat), "w={w} h={h} density={density}");
            }
        }
    }

    #[test]
    fn empty_mask_is_unreached() {
        let d = squared_distances(5, 4, |_, _| false);
        assert!(d.iter().all(|&v| v == UNREACHED));
    }
}

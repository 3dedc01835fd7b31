use fractop::geom::{Point2, Rect};
use fractop::grid::{BitGrid, Connectivity};

fn gasket_subdivision_render(depth: usize, res: f64) -> BitGrid {
    type Tri = [Point2; 3];
    let mut tris: Vec<Tri> = vec![[
        Point2::new(0.0, 0.0),
        Point2::new(1.0, 0.0),
        Point2::new(0.5, 3f64.sqrt() / 2.0),
    ]];
    let mid = |p: Point2, q: Point2| Point2::new((p.x + q.x) / 2.0, (p.y + q.y) / 2.0);
    for _ in 0..depth {
        let mut next = Vec::with_capacity(tris.len() * 3);
        for t in &tris {
            next.push([t[0], mid(t[0], t[1]), mid(t[0], t[2])]);
            next.push([mid(t[0], t[1]), t[1], mid(t[1], t[2])]);
            next.push([mid(t[0], t[2]), mid(t[1], t[2]), t[2]]);
        }
        tris = next;
    }
    let inside = |t: &Tri, p: Point2| {
        let sign = |a: Point2, b: Point2| (p.x - b.x) * (a.y - b.y) - (a.x - b.x) * (p.y - b.y);
        let d1 = sign(t[0], t[1]);
        let d2 = sign(t[1], t[2]);
        let d3 = sign(t[2], t[0]);
        let tol = 1e-12;
        let neg = d1 < -tol || d2 < -tol || d3 < -tol;
        let pos = d1 > tol || d2 > tol || d3 > tol;
        !(neg && pos)
    };
    let bounds = Rect::new(-0.05, -0.05, 1.05, 0.95).unwrap();
    BitGrid::from_fn(bounds, res, |p| tris.iter().any(|t| inside(t, p))).unwrap()
}

fn main() {
    for depth in 1..=4 {
        let g = gasket_subdivision_render(depth, 256.0);
        let rep = g.components(Connectivity::Eight);
        println!(
            "depth {depth}: set={} bounded={} occ={}",
            rep.set_components, rep.bounded_complement_components, g.occupied_count()
        );
        if depth == 1 {
            // dump the region around the bottom contact point (0.5, 0)
            let (cx, cy) = g.cell_of(Point2::new(0.5, 0.001)).unwrap();
            println!("around bottom contact ({cx},{cy}):");
            for iy in (cy.saturating_sub(3)..cy + 8).rev() {
                let mut row = String::new();
                for ix in cx - 8..cx + 8 {
                    row.push(if g.get(ix, iy) { '#' } else { '.' });
                }
                println!("  {row}");
            }
            // left mid edge contact (0.25, 0.433)
            let (cx, cy) = g.cell_of(Point2::new(0.25, 0.433)).unwrap();
            println!("around left contact ({cx},{cy}):");
            for iy in (cy.saturating_sub(6)..cy + 7).rev() {
                let mut row = String::new();
                for ix in cx - 8..cx + 8 {
                    row.push(if g.get(ix, iy) { '#' } else { '.' });
                }
                println!("  {row}");
            }
        }
    }
}

//! The quotient 2-complex obtained by gluing the domain surface along the
//! sistering, and the necessary conditions for a diagram to be filling.

use serde::Serialize;

use crate::diagram::{triple_points_unchecked, validate, Dart, JohanssonDiagram, Mode};
use crate::error::Result;
use crate::surface::{euler_genus_unchecked, trace_faces};

/// Oriented quotient edge occurrence: edge index and sign.
pub type SignedEdge = (usize, i8);

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuotientComplex {
    /// Triplet index of each crossing; the quotient vertices are triplets.
    pub vertex_of_crossing: Vec<usize>,
    pub vertices: usize,
    /// Orientation representative dart of each quotient edge.
    pub edge_rep: Vec<Dart>,
    /// `(tail, head)` vertex of each quotient edge along its representative.
    pub endpoints: Vec<(usize, usize)>,
    /// Quotient edge traversed by each dart, with the traversal sign.
    pub dart_edge: Vec<SignedEdge>,
    /// Face boundary words over oriented quotient edges.
    pub faces: Vec<Vec<SignedEdge>>,
}

impl QuotientComplex {
    pub fn edges(&self) -> usize {
        self.edge_rep.len()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertices as i64 - self.edges() as i64 + self.faces.len() as i64
    }

    /// Quotient vertex at the tail of a dart.
    pub fn vertex_of_dart(&self, x: Dart) -> usize {
        self.vertex_of_crossing[x / 4]
    }

    /// Image of a dart path as a word of oriented quotient edges.
    pub fn project_path(&self, path: &[Dart]) -> Vec<SignedEdge> {
        path.iter().map(|&x| self.dart_edge[x]).collect()
    }

    /// Integer boundary matrix from faces to edges (rows are faces).
    pub fn boundary_2(&self) -> Vec<Vec<i64>> {
        self.faces
            .iter()
            .map(|f| {
                let mut row = vec![0i64; self.edges()];
                for &(e, s) in f {
                    row[e] += s as i64;
                }
                row
            })
            .collect()
    }

    /// Integer boundary matrix from edges to vertices (rows are edges).
    pub fn boundary_1(&self) -> Vec<Vec<i64>> {
        self.endpoints
            .iter()
            .map(|&(t, h)| {
                let mut row = vec![0i64; self.vertices];
                row[h] += 1;
                row[t] -= 1;
                row
            })
            .collect()
    }
}

pub fn build_quotient(d: &JohanssonDiagram) -> Result<QuotientComplex> {
    validate(d, Mode::Strict).into_result()?;
    Ok(build_quotient_unchecked(d))
}

pub(crate) fn build_quotient_unchecked(d: &JohanssonDiagram) -> QuotientComplex {
    let tps = triple_points_unchecked(d);
    let mut vertex_of_crossing = vec![0; d.crossings()];
    for (i, t) in tps.iter().enumerate() {
        for &c in &t.crossings {
            vertex_of_crossing[c] = i;
        }
    }
    let n = d.darts();
    let mut dart_edge = vec![(usize::MAX, 0i8); n];
    let mut edge_rep = Vec::new();
    let mut endpoints = Vec::new();
    for x in 0..n {
        if dart_edge[x].0 != usize::MAX {
            continue;
        }
        // x is the smallest of {x, theta x, tau x, tau theta x}
        let id = edge_rep.len();
        let r = x;
        for y in [r, d.tau(r)] {
            dart_edge[y] = (id, 1);
            dart_edge[d.theta(y)] = (id, -1);
        }
        edge_rep.push(r);
        endpoints.push((
            vertex_of_crossing[r / 4],
            vertex_of_crossing[d.theta(r) / 4],
        ));
    }
    let faces = trace_faces(d)
        .faces
        .iter()
        .map(|f| f.iter().map(|&x| dart_edge[x]).collect())
        .collect();
    QuotientComplex {
        vertex_of_crossing,
        vertices: tps.len(),
        edge_rep,
        endpoints,
        dart_edge,
        faces,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FillingCondition {
    pub name: &'static str,
    pub pass: bool,
    pub witness: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FillingReport {
    pub q: usize,
    pub g: usize,
    /// Number of complementary regions a filling surface with these counts
    /// must have.
    pub r_required: i64,
    pub conditions: Vec<FillingCondition>,
}

impl FillingReport {
    /// Region-count check from the counts alone.
    pub fn from_counts(g: usize, q: usize) -> Self {
        let r_required = r_required(g, q);
        FillingReport {
            q,
            g,
            r_required,
            conditions: vec![FillingCondition {
                name: "regions",
                pass: r_required >= 1,
                witness: format!("r = q + 2 - 2g = {r_required}"),
            }],
        }
    }

    pub fn passes(&self) -> bool {
        self.conditions.iter().all(|c| c.pass)
    }
}

pub fn r_required(g: usize, q: usize) -> i64 {
    q as i64 + 2 - 2 * g as i64
}

pub fn filling_report(d: &JohanssonDiagram) -> Result<FillingReport> {
    validate(d, Mode::Strict).into_result()?;
    let (_, g) = euler_genus_unchecked(d);
    let mut report = FillingReport::from_counts(g, d.triple_points());
    // Every dart lives at a crossing, so every curve meets one.
    report.conditions.insert(
        0,
        FillingCondition {
            name: "curves_cross",
            pass: true,
            witness: "every curve passes through a crossing".into(),
        },
    );
    report.conditions.push(FillingCondition {
        name: "connected",
        pass: d.is_connected(),
        witness: format!("{} map component(s)", d.map_components().len()),
    });
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::{enumerate, EnumSpec};
    use crate::surface::euler_genus;

    #[test]
    fn counts_and_euler_identity() {
        for q in 1..=2 {
            for d in enumerate(&EnumSpec::new(q))
                .unwrap()
                .diagrams
                .iter()
                .take(300)
            {
                let c = build_quotient(d).unwrap();
                let (chi, g) = euler_genus(d).unwrap();
                assert_eq!((c.vertices, c.edges()), (q, 3 * q));
                assert_eq!(c.euler_characteristic(), chi + q as i64);
                assert_eq!(r_required(g, q), c.faces.len() as i64 - 2 * q as i64);
                // boundary of boundary vanishes
                let b2 = c.boundary_2();
                let b1 = c.boundary_1();
                for row in &b2 {
                    for v in 0..c.vertices {
                        let s: i64 = row.iter().zip(&b1).map(|(a, r)| a * r[v]).sum();
                        assert_eq!(s, 0);
                    }
                }
                // sistered darts land on the same edge with the same sign
                for x in 0..d.darts() {
                    assert_eq!(c.dart_edge[x], c.dart_edge[d.tau(x)]);
                    let (e, s) = c.dart_edge[x];
                    let (t, h) = c.endpoints[e];
                    let (a, b) = if s > 0 { (t, h) } else { (h, t) };
                    assert_eq!(a, c.vertex_of_dart(x));
                    assert_eq!(b, c.vertex_of_dart(d.theta(x)));
                }
            }
        }
    }

    #[test]
    fn region_formula() {
        assert_eq!(FillingReport::from_counts(1, 1).r_required, 1);
        assert_eq!(FillingReport::from_counts(0, 2).r_required, 4);
        let bad = FillingReport::from_counts(2, 1);
        assert_eq!(bad.r_required, -1);
        assert!(!bad.passes());
    }
}

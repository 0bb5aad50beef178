//! Topology of the domain surface: faces, Euler characteristic, genus,
//! first homology with curve classes, and checkerboards.

use serde::Serialize;

use crate::diagram::{validate, Curve, Dart, JohanssonDiagram, Mode};
use crate::error::Result;
use crate::group::Ring;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FaceSet {
    /// Face boundaries as dart cycles (orbits of `σ∘theta`), ordered by
    /// their minimal dart.
    pub faces: Vec<Vec<Dart>>,
    /// Face containing each dart.
    pub face_of: Vec<usize>,
}

impl FaceSet {
    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    /// Sorted multiset of face lengths.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.faces.iter().map(Vec::len).collect();
        v.sort_unstable();
        v
    }
}

pub fn trace_faces(d: &JohanssonDiagram) -> FaceSet {
    let n = d.darts();
    let mut face_of = vec![usize::MAX; n];
    let mut faces = Vec::new();
    for start in 0..n {
        if face_of[start] != usize::MAX {
            continue;
        }
        let id = faces.len();
        let mut cycle = Vec::new();
        let mut x = start;
        loop {
            face_of[x] = id;
            cycle.push(x);
            x = d.face_next(x);
            if x == start {
                break;
            }
        }
        faces.push(cycle);
    }
    FaceSet { faces, face_of }
}

fn require_connected(d: &JohanssonDiagram) -> Result<()> {
    validate(d, Mode::Strict).into_result()
}

/// Euler characteristic and genus of a valid connected diagram's domain.
pub fn euler_genus(d: &JohanssonDiagram) -> Result<(i64, usize)> {
    require_connected(d)?;
    Ok(euler_genus_unchecked(d))
}

pub(crate) fn euler_genus_unchecked(d: &JohanssonDiagram) -> (i64, usize) {
    let v = d.crossings() as i64;
    let f = trace_faces(d).len() as i64;
    let chi = v - 2 * v + f;
    assert!(
        chi % 2 == 0 && chi <= 2,
        "impossible Euler characteristic {chi}"
    );
    (chi, ((2 - chi) / 2) as usize)
}

/// Per-component `(χ, genus)` of the domain surface, in component order.
pub fn surface_components(d: &JohanssonDiagram) -> Vec<(i64, usize)> {
    let faces = trace_faces(d);
    d.map_components()
        .iter()
        .map(|comp| {
            let v = comp.len() as i64;
            let mut seen = std::collections::BTreeSet::new();
            for &c in comp {
                for x in 4 * c..4 * c + 4 {
                    seen.insert(faces.face_of[x]);
                }
            }
            let chi = v - 2 * v + seen.len() as i64;
            (chi, ((2 - chi) / 2) as usize)
        })
        .collect()
}

/// Spanning tree of the map, grown breadth-first from crossing 0 scanning
/// darts in ascending order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpanningTree {
    pub root: usize,
    /// For each crossing, the dart entering it from its parent (`None` at
    /// the root). The dart runs parent -> child.
    pub parent_dart: Vec<Option<Dart>>,
    /// Whether the edge with representative dart `r` lies in the tree,
    /// indexed by dart (true for both darts of tree edges).
    pub in_tree: Vec<bool>,
    /// Co-tree edge representatives in ascending order.
    pub cotree: Vec<Dart>,
    /// Index of each co-tree edge, by dart (both darts).
    pub cotree_index: Vec<Option<usize>>,
}

impl SpanningTree {
    pub fn new(d: &JohanssonDiagram) -> Self {
        let n = d.crossings();
        let mut parent_dart = vec![None; n];
        let mut seen = vec![false; n];
        let mut in_tree = vec![false; d.darts()];
        seen[0] = true;
        let mut queue = std::collections::VecDeque::from([0usize]);
        while let Some(v) = queue.pop_front() {
            for x in 4 * v..4 * v + 4 {
                let w = d.theta(x) / 4;
                if !seen[w] {
                    seen[w] = true;
                    parent_dart[w] = Some(x);
                    in_tree[x] = true;
                    in_tree[d.theta(x)] = true;
                    queue.push_back(w);
                }
            }
        }
        let mut cotree_index = vec![None; d.darts()];
        let mut cotree = Vec::new();
        for x in 0..d.darts() {
            if x < d.theta(x) && !in_tree[x] {
                cotree_index[x] = Some(cotree.len());
                cotree_index[d.theta(x)] = Some(cotree.len());
                cotree.push(x);
            }
        }
        SpanningTree {
            root: 0,
            parent_dart,
            in_tree,
            cotree,
            cotree_index,
        }
    }

    /// Dart path from the root to crossing `v` along the tree.
    pub fn path_to(&self, v: usize) -> Vec<Dart> {
        let mut path = Vec::new();
        let mut w = v;
        while let Some(x) = self.parent_dart[w] {
            path.push(x);
            w = x / 4;
        }
        path.reverse();
        path
    }

    /// Signed co-tree coordinates of a dart path.
    pub fn cotree_vector(&self, d: &JohanssonDiagram, path: &[Dart]) -> Vec<i64> {
        let mut v = vec![0i64; self.cotree.len()];
        for &x in path {
            if let Some(i) = self.cotree_index[x] {
                v[i] += if x < d.theta(x) { 1 } else { -1 };
            }
        }
        v
    }
}

/// Reverses a dart path: each dart traversed backwards is its theta partner.
pub fn reverse_path(d: &JohanssonDiagram, path: &[Dart]) -> Vec<Dart> {
    path.iter().rev().map(|&x| d.theta(x)).collect()
}

/// First homology of the domain surface, as a coordinate map from 1-cycles
/// (in co-tree coordinates) onto a basis of rank `2g`.
///
/// A spanning tree of the dual graph inside the co-tree leaves `2g` edges
/// over; their fundamental cycles form the basis. A dual tree edge is
/// rewritten through the boundary of the face subtree it cuts off, which
/// contains it with coefficient `±1`, so coordinates stay exact and small.
#[derive(Debug, Clone, Serialize)]
pub struct SurfaceHomology {
    pub ring: Ring,
    pub genus: usize,
    pub tree: SpanningTree,
    /// Co-tree indices of the basis edges.
    pub basis: Vec<usize>,
    /// Class of each co-tree edge, indexed by co-tree index.
    image: Vec<Vec<i64>>,
}

impl SurfaceHomology {
    pub fn rank(&self) -> usize {
        2 * self.genus
    }

    /// Coordinates of a 1-cycle given in co-tree coordinates.
    pub fn coordinates(&self, cotree_vec: &[i64]) -> Vec<i64> {
        let mut out = vec![0i64; self.rank()];
        for (&z, img) in cotree_vec.iter().zip(&self.image) {
            if z != 0 {
                for (o, &w) in out.iter_mut().zip(img) {
                    *o += z * w;
                }
            }
        }
        out.into_iter().map(|x| self.ring.reduce(x)).collect()
    }

    /// Coordinates of a closed dart path.
    pub fn path_class(&self, d: &JohanssonDiagram, path: &[Dart]) -> Vec<i64> {
        self.coordinates(&self.tree.cotree_vector(d, path))
    }
}

pub fn surface_homology(d: &JohanssonDiagram, ring: Ring) -> Result<SurfaceHomology> {
    require_connected(d)?;
    Ok(surface_homology_unchecked(d, ring))
}

pub(crate) fn surface_homology_unchecked(d: &JohanssonDiagram, ring: Ring) -> SurfaceHomology {
    let tree = SpanningTree::new(d);
    let faces = trace_faces(d);
    let nf = faces.len();
    let c = tree.cotree.len();

    // dual spanning tree over co-tree edges, breadth-first from face 0
    let mut parent_edge: Vec<Option<usize>> = vec![None; nf];
    let mut order = vec![0usize];
    let mut seen = vec![false; nf];
    let mut in_dual = vec![false; c];
    seen[0] = true;
    let mut head = 0;
    while head < order.len() {
        let f = order[head];
        head += 1;
        for &x in &faces.faces[f] {
            let Some(e) = tree.cotree_index[x] else {
                continue;
            };
            let g = faces.face_of[d.theta(x)];
            if !seen[g] {
                seen[g] = true;
                parent_edge[g] = Some(e);
                in_dual[e] = true;
                order.push(g);
            }
        }
    }
    let basis: Vec<usize> = (0..c).filter(|&e| !in_dual[e]).collect();
    let (_, genus) = euler_genus_unchecked(d);
    assert_eq!(
        basis.len(),
        2 * genus,
        "orientable surface homology has rank 2g"
    );
    let mut slot = vec![None; c];
    for (k, &e) in basis.iter().enumerate() {
        slot[e] = Some(k);
    }

    // subtree boundaries, accumulated leaves first: the basis part and the
    // coefficient of the parent edge
    let mut sub: Vec<Vec<i64>> = vec![vec![0; basis.len()]; nf];
    let mut parent_coef = vec![0i64; nf];
    for &f in order.iter().rev() {
        let boundary = tree.cotree_vector(d, &faces.faces[f]);
        for (e, &b) in boundary.iter().enumerate() {
            if let Some(k) = slot[e] {
                sub[f][k] += b;
            }
        }
        if let Some(e) = parent_edge[f] {
            parent_coef[f] = boundary[e];
        }
        let mine = std::mem::take(&mut sub[f]);
        if let Some(e) = parent_edge[f] {
            // the parent face is the other side of the parent edge
            let x = tree.cotree[e];
            let p = if faces.face_of[x] == f {
                faces.face_of[d.theta(x)]
            } else {
                faces.face_of[x]
            };
            for (t, &m) in sub[p].iter_mut().zip(&mine) {
                *t += m;
            }
        }
        sub[f] = mine;
    }

    let mut image = vec![vec![0i64; basis.len()]; c];
    for (k, &e) in basis.iter().enumerate() {
        image[e][k] = 1;
    }
    for f in 1..nf {
        let e = parent_edge[f].expect("connected dual graph");
        let s = parent_coef[f];
        assert!(s == 1 || s == -1, "dual tree edge appears once in its face");
        image[e] = sub[f].iter().map(|&x| -s * x).collect();
    }
    SurfaceHomology {
        ring,
        genus,
        tree,
        basis,
        image,
    }
}

/// Class of an oriented curve's edge cycle in the given homology basis.
pub fn curve_class(h: &SurfaceHomology, d: &JohanssonDiagram, curve: &Curve) -> Vec<i64> {
    h.path_class(d, &curve.darts)
}

/// Class of the whole diagram (every map edge once) over the integers mod 2.
pub fn diagram_class_mod2(h: &SurfaceHomology) -> Vec<i64> {
    let all: Vec<i64> = vec![1; h.tree.cotree.len()];
    h.coordinates(&all)
        .into_iter()
        .map(|x| x.rem_euclid(2))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Checkerboard {
    /// A face 2-coloring; `coloring[f]` is the color of face `f`.
    Colored { coloring: Vec<u8> },
    /// Odd cycle witness: two faces forced to the same color across the
    /// edge of `dart` (equal faces mean a self-adjacent face).
    NotCheckered { dart: Dart, faces: [usize; 2] },
}

impl Checkerboard {
    pub fn is_checkered(&self) -> bool {
        matches!(self, Checkerboard::Colored { .. })
    }
}

/// 2-colors the face adjacency multigraph, first face colored 0.
pub fn checkerboard(d: &JohanssonDiagram) -> Result<Checkerboard> {
    require_connected(d)?;
    Ok(checkerboard_unchecked(d, &trace_faces(d)))
}

pub(crate) fn checkerboard_unchecked(d: &JohanssonDiagram, faces: &FaceSet) -> Checkerboard {
    let nf = faces.len();
    let mut color = vec![u8::MAX; nf];
    for root in 0..nf {
        if color[root] != u8::MAX {
            continue;
        }
        color[root] = 0;
        let mut stack = vec![root];
        while let Some(f) = stack.pop() {
            for &x in &faces.faces[f] {
                let g = faces.face_of[d.theta(x)];
                if color[g] == u8::MAX {
                    color[g] = 1 - color[f];
                    stack.push(g);
                } else if color[g] == color[f] {
                    return Checkerboard::NotCheckered {
                        dart: x,
                        faces: [f, g],
                    };
                }
            }
        }
    }
    Checkerboard::Colored { coloring: color }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::curves;
    use crate::search::{enumerate, EnumSpec};

    #[test]
    fn q1_euler_arithmetic() {
        let all = enumerate(&EnumSpec::new(1)).unwrap().diagrams;
        assert!(all.iter().any(|d| euler_genus(d).unwrap().1 == 1));
        for d in &all {
            let (chi, g) = euler_genus(d).unwrap();
            let f = trace_faces(d).len() as i64;
            assert_eq!(f, 2 - 2 * g as i64 + 3);
            assert_eq!(chi, 2 - 2 * g as i64);
            if g == 1 {
                assert_eq!(f, 3);
            }
            let h = surface_homology(d, Ring::Z).unwrap();
            assert_eq!(h.rank(), 2 * g);
            for face in &trace_faces(d).faces {
                assert!(h.path_class(d, face).iter().all(|&x| x == 0));
            }
        }
    }

    #[test]
    fn relabeling_preserves_faces() {
        for d in enumerate(&EnumSpec::new(1)).unwrap().diagrams {
            let e = d.relabel(&[1, 2, 0], &[2, 1, 3]);
            assert_eq!(trace_faces(&d).cycle_type(), trace_faces(&e).cycle_type());
        }
    }

    #[test]
    fn curve_classes_sum_to_diagram_class() {
        for d in enumerate(&EnumSpec::new(1)).unwrap().diagrams {
            let h = surface_homology(&d, Ring::Z2).unwrap();
            let cs = curves(&d).unwrap();
            // one orientation per undirected curve covers every edge once
            let mut sum = vec![0i64; h.rank()];
            for c in &cs {
                for (s, x) in sum.iter_mut().zip(curve_class(&h, &d, c)) {
                    *s = (*s + x).rem_euclid(2);
                }
            }
            assert_eq!(sum, diagram_class_mod2(&h));
        }
    }

    #[test]
    fn colorings_are_proper_and_unique_up_to_swap() {
        for q in 1..=2 {
            let res = enumerate(&EnumSpec {
                q,
                ..EnumSpec::new(q)
            })
            .unwrap();
            for d in res.diagrams.iter().take(400) {
                let faces = trace_faces(d);
                match checkerboard(d).unwrap() {
                    Checkerboard::Colored { coloring } => {
                        assert_eq!(q % 2, 0);
                        for x in 0..d.darts() {
                            assert_ne!(
                                coloring[faces.face_of[x]],
                                coloring[faces.face_of[d.theta(x)]]
                            );
                        }
                        // the only other coloring is the global swap: fixing
                        // face 0's color forces every other face
                        assert_eq!(coloring[0], 0);
                    }
                    Checkerboard::NotCheckered {
                        dart,
                        faces: [f, g],
                    } => {
                        assert_eq!(faces.face_of[dart], f);
                        assert_eq!(faces.face_of[d.theta(dart)], g);
                    }
                }
            }
        }
    }
}

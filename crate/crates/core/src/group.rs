//! Group presentations of the quotient complex: the cellular presentation,
//! the presentation by surface and dual generators with relators R1 to R4,
//! its abelian form, and invariants used to compare presentations.

use std::collections::VecDeque;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::complex::{build_quotient_unchecked, QuotientComplex};
use crate::diagram::{
    curves_unchecked, triple_points_unchecked, validate, Curve, Dart, JohanssonDiagram, Mode,
    TriplePoint,
};
use crate::error::{Error, Result};
use crate::snf::{cokernel_factors, rank_mod2, Matrix};
use crate::surface::{
    reverse_path, surface_homology_unchecked, trace_faces, SpanningTree, SurfaceHomology,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Ring {
    #[serde(rename = "Z")]
    Z,
    #[serde(rename = "Z/2")]
    Z2,
}

impl Ring {
    pub fn reduce(self, x: i64) -> i64 {
        match self {
            Ring::Z => x,
            Ring::Z2 => x.rem_euclid(2),
        }
    }
}

impl std::str::FromStr for Ring {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "z" => Ok(Ring::Z),
            "z2" | "z/2" => Ok(Ring::Z2),
            _ => Err(Error::Unsupported(format!(
                "coefficient ring {s:?}; only z and z2 are supported"
            ))),
        }
    }
}

/// A word as signed one-based generator indices; `-i` is the inverse of
/// generator `i`.
pub type Word = Vec<i32>;

pub fn free_reduce(w: &[i32]) -> Word {
    let mut out: Word = Vec::with_capacity(w.len());
    for &x in w {
        if out.last() == Some(&-x) {
            out.pop();
        } else {
            out.push(x);
        }
    }
    out
}

pub fn invert(w: &[i32]) -> Word {
    w.iter().rev().map(|&x| -x).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RelatorKind {
    Face,
    R1,
    R2,
    R3,
    R4,
    Other,
}

/// Paths used to build the relators of the dual-loop presentation. All paths
/// are dart paths in the map of the domain surface starting at crossing
/// `base`.
#[derive(Debug, Clone, Serialize)]
pub struct BasingData {
    pub base: usize,
    pub tree: SpanningTree,
    pub curves: Vec<Curve>,
    /// Tree path from the base to each curve's basepoint crossing.
    pub lambda: Vec<Vec<Dart>>,
    pub triples: Vec<TripleBasing>,
}

/// Per-triple-point paths in the order alpha, tau alpha, beta, tau beta,
/// gamma, tau gamma.
#[derive(Debug, Clone, Serialize)]
pub struct TripleBasing {
    pub point: TriplePoint,
    /// Tree paths to P1, P2, P3.
    pub omega: [Vec<Dart>; 3],
    /// Oriented curve carrying each of the six branches.
    pub curve: [usize; 6],
    /// Along-curve paths from the triple point to the curve's basepoint.
    pub along: [Vec<Dart>; 6],
    /// Closed loops `omega . along . lambda^-1`.
    pub t: [Vec<Dart>; 6],
}

#[derive(Debug, Clone, Serialize)]
pub struct GroupPresentation {
    pub generators: Vec<String>,
    pub relators: Vec<Word>,
    pub kinds: Vec<RelatorKind>,
    #[serde(skip)]
    pub basing: Option<Box<BasingData>>,
}

impl GroupPresentation {
    pub fn new(generators: Vec<String>, relators: Vec<Word>) -> Self {
        let kinds = vec![RelatorKind::Other; relators.len()];
        let mut p = GroupPresentation {
            generators,
            relators: Vec::new(),
            kinds: Vec::new(),
            basing: None,
        };
        for (r, k) in relators.into_iter().zip(kinds) {
            p.push(r, k);
        }
        p
    }

    /// Appends a freely reduced relator, dropping it when it reduces to the
    /// empty word.
    pub fn push(&mut self, w: Word, kind: RelatorKind) {
        let w = free_reduce(&w);
        debug_assert!(w
            .iter()
            .all(|&x| x != 0 && x.unsigned_abs() as usize <= self.generators.len()));
        if !w.is_empty() {
            self.relators.push(w);
            self.kinds.push(kind);
        }
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    /// Exponent-sum matrix, one row per relator.
    pub fn abelian_matrix(&self) -> Matrix {
        self.relators
            .iter()
            .map(|w| {
                let mut row = vec![0i64; self.rank()];
                for &x in w {
                    row[x.unsigned_abs() as usize - 1] += x.signum() as i64;
                }
                row
            })
            .collect()
    }

    pub fn abelian_invariants(&self, ring: Ring) -> AbelianInvariants {
        AbelianInvariants::of_relations(&self.abelian_matrix(), self.rank(), ring)
    }

    /// Plain text export: a generator line, then one relator per line.
    pub fn to_text(&self) -> String {
        let mut s = format!("generators {}\n", self.generators.join(" "));
        for r in &self.relators {
            let parts: Vec<String> = r.iter().map(|x| x.to_string()).collect();
            s.push_str(&parts.join(" "));
            s.push('\n');
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AbelianInvariants {
    pub ring: Ring,
    /// Invariant factors other than 1, torsion first; `0` marks a free
    /// summand. Over `Z/2` every factor is 2.
    pub factors: Vec<i64>,
    /// Free rank over `Z`, dimension over `Z/2`.
    pub rank: usize,
}

impl AbelianInvariants {
    pub fn of_relations(rows: &Matrix, ngens: usize, ring: Ring) -> Self {
        match ring {
            Ring::Z => {
                let factors = cokernel_factors(rows, ngens);
                let rank = factors.iter().filter(|&&x| x == 0).count();
                AbelianInvariants {
                    ring,
                    factors,
                    rank,
                }
            }
            Ring::Z2 => {
                let dim = ngens - rank_mod2(rows, ngens);
                AbelianInvariants {
                    ring,
                    factors: vec![2; dim],
                    rank: dim,
                }
            }
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    /// Cyclic summands as text, e.g. `["Z/2", "Z"]`.
    pub fn labels(&self) -> Vec<String> {
        self.factors
            .iter()
            .map(|&f| {
                if f == 0 {
                    "Z".to_string()
                } else {
                    format!("Z/{f}")
                }
            })
            .collect()
    }
}

impl fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", self.labels().join(" + "))
        }
    }
}

// ---------------------------------------------------------------------------
// cellular presentation

/// Breadth-first spanning tree of the quotient 1-skeleton rooted at the
/// vertex of crossing 0. Returns the generator index of each non-tree edge.
pub(crate) fn cw_generators(c: &QuotientComplex) -> Vec<Option<usize>> {
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); c.vertices];
    for (e, &(t, h)) in c.endpoints.iter().enumerate() {
        adj[t].push((e, h));
        adj[h].push((e, t));
    }
    let root = c.vertex_of_crossing[0];
    let mut seen = vec![false; c.vertices];
    let mut in_tree = vec![false; c.edges()];
    seen[root] = true;
    let mut queue = VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        for &(e, w) in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                in_tree[e] = true;
                queue.push_back(w);
            }
        }
    }
    let mut next = 0;
    in_tree
        .iter()
        .map(|&t| {
            (!t).then(|| {
                next += 1;
                next - 1
            })
        })
        .collect()
}

fn cw_word(gen_of_edge: &[Option<usize>], c: &QuotientComplex, path: &[Dart]) -> Word {
    c.project_path(path)
        .into_iter()
        .filter_map(|(e, s)| gen_of_edge[e].map(|g| s as i32 * (g as i32 + 1)))
        .collect()
}

/// Presentation of the quotient complex: non-tree edges as generators,
/// face boundaries as relators.
pub fn pi1_cw(c: &QuotientComplex) -> GroupPresentation {
    let gens = cw_generators(c);
    let count = gens.iter().flatten().count();
    let mut p = GroupPresentation {
        generators: (1..=count).map(|i| format!("x{i}")).collect(),
        relators: Vec::new(),
        kinds: Vec::new(),
        basing: None,
    };
    for f in &c.faces {
        let w = f
            .iter()
            .filter_map(|&(e, s)| gens[e].map(|g| s as i32 * (g as i32 + 1)))
            .collect();
        p.push(w, RelatorKind::Face);
    }
    p
}

/// First homology of the quotient, from the cellular presentation.
pub fn h1_sigma(d: &JohanssonDiagram, ring: Ring) -> Result<AbelianInvariants> {
    validate(d, Mode::Strict).into_result()?;
    Ok(pi1_cw(&build_quotient_unchecked(d)).abelian_invariants(ring))
}

// ---------------------------------------------------------------------------
// dual-loop presentation

fn basing_data(d: &JohanssonDiagram) -> BasingData {
    let tree = SpanningTree::new(d);
    let curves = curves_unchecked(d);
    let lambda: Vec<Vec<Dart>> = curves
        .iter()
        .map(|c| tree.path_to(c.basepoint() / 4))
        .collect();
    // dart -> (curve, position) for the chosen orientations
    let mut at = vec![None; d.darts()];
    for (i, c) in curves.iter().enumerate() {
        for (p, &x) in c.darts.iter().enumerate() {
            at[x] = Some((i, p));
        }
    }
    let branch = |v: usize, strand: usize| -> (usize, usize) {
        let x = 4 * v + strand;
        at[x]
            .or(at[x + 2])
            .expect("one orientation of each strand is chosen")
    };
    let triples = triple_points_unchecked(d)
        .into_iter()
        .map(|tp| {
            let omega = tp.crossings.map(|v| tree.path_to(v));
            let mut curve = [0; 6];
            let mut along: [Vec<Dart>; 6] = Default::default();
            let mut t: [Vec<Dart>; 6] = Default::default();
            for i in 0..3 {
                let (ci, p) = branch(tp.crossings[i], tp.strands[i]);
                let si = curves[ci].sister;
                curve[2 * i] = ci;
                curve[2 * i + 1] = si;
                along[2 * i] = curves[ci].darts[p..].to_vec();
                along[2 * i + 1] = curves[si].darts[p..].to_vec();
                for j in [2 * i, 2 * i + 1] {
                    let start = if j % 2 == 0 { i } else { (i + 1) % 3 };
                    let mut path = omega[start].clone();
                    path.extend_from_slice(&along[j]);
                    path.extend(reverse_path(d, &lambda[curve[j]]));
                    t[j] = path;
                }
            }
            TripleBasing {
                point: tp,
                omega,
                curve,
                along,
                t,
            }
        })
        .collect();
    BasingData {
        base: 0,
        tree,
        curves,
        lambda,
        triples,
    }
}

fn surface_word(d: &JohanssonDiagram, tree: &SpanningTree, path: &[Dart]) -> Word {
    path.iter()
        .filter_map(|&x| {
            tree.cotree_index[x].map(|i| {
                let g = i as i32 + 1;
                if x < d.theta(x) {
                    g
                } else {
                    -g
                }
            })
        })
        .collect()
}

/// Closed loop along a whole curve, conjugated back to the base.
fn curve_loop(d: &JohanssonDiagram, b: &BasingData, c: usize) -> Vec<Dart> {
    let mut path = b.lambda[c].clone();
    path.extend_from_slice(&b.curves[c].darts);
    path.extend(reverse_path(d, &b.lambda[c]));
    path
}

/// Presentation with one surface generator per co-tree edge of the map
/// (`s1..`) and one dual generator per oriented curve (`a1..`), with
/// relators R1 (dual pairs), R2 (triple points), R3 (sister curves) and R4
/// (faces).
pub fn pi1_paper(d: &JohanssonDiagram) -> Result<GroupPresentation> {
    validate(d, Mode::Strict).into_result()?;
    Ok(pi1_paper_unchecked(d))
}

pub(crate) fn pi1_paper_unchecked(d: &JohanssonDiagram) -> GroupPresentation {
    let b = basing_data(d);
    let ns = b.tree.cotree.len();
    let mut generators: Vec<String> = (1..=ns).map(|i| format!("s{i}")).collect();
    generators.extend((1..=b.curves.len()).map(|i| format!("a{i}")));
    let dual = |c: usize| (ns + c + 1) as i32;
    let sw = |path: &[Dart]| surface_word(d, &b.tree, path);
    let mut p = GroupPresentation {
        generators,
        relators: Vec::new(),
        kinds: Vec::new(),
        basing: None,
    };
    let reps: Vec<usize> = (0..b.curves.len())
        .filter(|&c| b.curves[c].representative)
        .collect();
    for &c in &reps {
        p.push(vec![dual(b.curves[c].sister), dual(c)], RelatorKind::R1);
    }
    for tb in &b.triples {
        let mut w = Vec::new();
        for i in 0..3 {
            w.extend(sw(&tb.t[2 * i]));
            w.push(dual(tb.curve[2 * i]));
            w.extend(invert(&sw(&tb.t[2 * i + 1])));
        }
        p.push(w, RelatorKind::R2);
    }
    for &c in &reps {
        let s = b.curves[c].sister;
        let mut w = sw(&curve_loop(d, &b, c));
        w.push(dual(c));
        w.extend(invert(&sw(&curve_loop(d, &b, s))));
        w.push(-dual(c));
        p.push(w, RelatorKind::R3);
    }
    for f in &trace_faces(d).faces {
        p.push(sw(f), RelatorKind::R4);
    }
    p.basing = Some(Box::new(b));
    p
}

/// Words in the cellular generators for each generator of the dual-loop
/// presentation, realizing the natural map between the two groups.
pub fn paper_to_cw_words(d: &JohanssonDiagram) -> Result<Vec<Word>> {
    validate(d, Mode::Strict).into_result()?;
    let c = build_quotient_unchecked(d);
    let gens = cw_generators(&c);
    let b = basing_data(d);
    let mut out = Vec::new();
    for &r in &b.tree.cotree {
        let mut path = b.tree.path_to(r / 4);
        path.push(r);
        path.extend(reverse_path(d, &b.tree.path_to(d.theta(r) / 4)));
        out.push(free_reduce(&cw_word(&gens, &c, &path)));
    }
    for (i, cv) in b.curves.iter().enumerate() {
        let mut path = b.lambda[i].clone();
        path.extend(reverse_path(d, &b.lambda[cv.sister]));
        out.push(free_reduce(&cw_word(&gens, &c, &path)));
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// abelian form

/// Relation matrix of the abelianized dual-loop presentation after folding
/// each non-representative dual into its sister's negative.
#[derive(Debug, Clone, Serialize)]
pub struct ArTableau {
    pub ring: Ring,
    pub genus: usize,
    /// `s1..s2g` then one dual per sister pair.
    pub columns: Vec<String>,
    /// One row per sister pair: class of the curve minus class of its sister.
    pub ar3: Vec<Vec<i64>>,
    /// One row per triple point.
    pub ar2: Vec<Vec<i64>>,
}

impl ArTableau {
    /// Column sums of the sister-pair block over `Z/2`, surface columns only.
    pub fn ar3_column_sums_mod2(&self) -> Vec<i64> {
        (0..2 * self.genus)
            .map(|j| self.ar3.iter().map(|r| r[j]).sum::<i64>().rem_euclid(2))
            .collect()
    }

    pub fn rows(&self) -> Matrix {
        self.ar3.iter().chain(self.ar2.iter()).cloned().collect()
    }
}

pub fn h1_paper(d: &JohanssonDiagram, ring: Ring) -> Result<(ArTableau, AbelianInvariants)> {
    validate(d, Mode::Strict).into_result()?;
    let h = surface_homology_unchecked(d, Ring::Z);
    let b = basing_data(d);
    let tab = tableau(d, &h, &b, ring);
    let inv = AbelianInvariants::of_relations(&tab.rows(), tab.columns.len(), ring);
    Ok((tab, inv))
}

fn tableau(d: &JohanssonDiagram, h: &SurfaceHomology, b: &BasingData, ring: Ring) -> ArTableau {
    let g2 = h.rank();
    let reps: Vec<usize> = (0..b.curves.len())
        .filter(|&c| b.curves[c].representative)
        .collect();
    let mut rep_col = vec![(0usize, 0i64); b.curves.len()];
    for (j, &c) in reps.iter().enumerate() {
        rep_col[c] = (g2 + j, 1);
        rep_col[b.curves[c].sister] = (g2 + j, -1);
    }
    let ncols = g2 + reps.len();
    let class = |path: &[Dart]| h.path_class(d, path);
    let ar3 = reps
        .iter()
        .map(|&c| {
            let a = class(&b.curves[c].darts);
            let s = class(&b.curves[b.curves[c].sister].darts);
            let mut row = vec![0i64; ncols];
            for j in 0..g2 {
                row[j] = ring.reduce(a[j] - s[j]);
            }
            row
        })
        .collect();
    let ar2 = b
        .triples
        .iter()
        .map(|tb| {
            let mut row = vec![0i64; ncols];
            for (j, path) in tb.t.iter().enumerate() {
                let sign = if j % 2 == 0 { 1 } else { -1 };
                for (x, v) in row.iter_mut().zip(class(path)) {
                    *x += sign * v;
                }
            }
            for i in 0..3 {
                let (col, s) = rep_col[tb.curve[2 * i]];
                row[col] += s;
            }
            row.into_iter().map(|x| ring.reduce(x)).collect()
        })
        .collect();
    let mut columns: Vec<String> = (1..=g2).map(|i| format!("s{i}")).collect();
    columns.extend((1..=reps.len()).map(|i| format!("a{i}")));
    ArTableau {
        ring,
        genus: h.genus,
        columns,
        ar3,
        ar2,
    }
}

// ---------------------------------------------------------------------------
// finite groups and homomorphism counting

pub const MAX_TARGET_ORDER: usize = 24;

/// A finite group by multiplication table; `mul[a][b]` is `a` followed by
/// `b` (the right-action convention used for words read as paths).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiniteGroup {
    pub name: String,
    pub mul: Vec<Vec<usize>>,
    pub identity: usize,
    pub inverse: Vec<usize>,
    /// Permutations of `0..m` realizing the elements, when known.
    #[serde(skip)]
    pub perms: Option<Vec<Vec<usize>>>,
}

impl FiniteGroup {
    pub fn from_table(name: impl Into<String>, mul: Vec<Vec<usize>>) -> Result<Self> {
        let name = name.into();
        let n = mul.len();
        let bad = |m: &str| Error::NotAGroup(format!("{name}: {m}"));
        if n == 0 {
            return Err(bad("empty table"));
        }
        if mul
            .iter()
            .any(|r| r.len() != n || r.iter().any(|&x| x >= n))
        {
            return Err(bad("table is not closed"));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|a| mul[e][a] == a && mul[a][e] == a))
            .ok_or_else(|| bad("no identity"))?;
        let mut inverse = vec![0; n];
        for a in 0..n {
            inverse[a] = (0..n)
                .find(|&b| mul[a][b] == identity && mul[b][a] == identity)
                .ok_or_else(|| bad("missing inverse"))?;
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if mul[mul[a][b]][c] != mul[a][mul[b][c]] {
                        return Err(bad("not associative"));
                    }
                }
            }
        }
        Ok(FiniteGroup {
            name,
            mul,
            identity,
            inverse,
            perms: None,
        })
    }

    /// The group generated by permutations of `0..m`, elements in
    /// breadth-first discovery order from the identity.
    pub fn from_permutations(name: impl Into<String>, gens: &[Vec<usize>]) -> Result<Self> {
        let m = gens.first().map_or(0, Vec::len);
        let compose =
            |a: &[usize], b: &[usize]| -> Vec<usize> { a.iter().map(|&i| b[i]).collect() };
        let mut elems: Vec<Vec<usize>> = vec![(0..m).collect()];
        let mut i = 0;
        while i < elems.len() {
            for g in gens {
                let e = compose(&elems[i], g);
                if !elems.contains(&e) {
                    elems.push(e);
                }
            }
            i += 1;
            if elems.len() > 10_000 {
                return Err(Error::NotAGroup("permutation group too large".into()));
            }
        }
        let mul = elems
            .iter()
            .map(|a| {
                elems
                    .iter()
                    .map(|b| {
                        let c = compose(a, b);
                        elems.iter().position(|e| *e == c).unwrap()
                    })
                    .collect()
            })
            .collect();
        let mut g = FiniteGroup::from_table(name, mul)?;
        g.perms = Some(elems);
        Ok(g)
    }

    pub fn cyclic(n: usize) -> Self {
        let gen: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
        Self::from_permutations(format!("Z{n}"), &[gen]).expect("cyclic group")
    }

    pub fn symmetric3() -> Self {
        Self::from_permutations("S3", &[vec![1, 0, 2], vec![1, 2, 0]]).expect("S3")
    }

    /// Symmetries of a square acting on its corners.
    pub fn dihedral4() -> Self {
        Self::from_permutations("D4", &[vec![1, 2, 3, 0], vec![3, 2, 1, 0]]).expect("D4")
    }

    /// Direct product acting on the disjoint union of the factors' points.
    pub fn product(a: &FiniteGroup, b: &FiniteGroup) -> Self {
        let n = a.order() * b.order();
        let mul = (0..n)
            .map(|x| {
                (0..n)
                    .map(|y| {
                        let (xa, xb) = (x / b.order(), x % b.order());
                        let (ya, yb) = (y / b.order(), y % b.order());
                        a.mul[xa][ya] * b.order() + b.mul[xb][yb]
                    })
                    .collect()
            })
            .collect();
        let mut g = FiniteGroup::from_table(format!("{}x{}", a.name, b.name), mul)
            .expect("product of groups");
        if let (Some(pa), Some(pb)) = (&a.perms, &b.perms) {
            let ma = pa[0].len();
            g.perms = Some(
                (0..n)
                    .map(|x| {
                        let mut p = pa[x / b.order()].clone();
                        p.extend(pb[x % b.order()].iter().map(|&i| i + ma));
                        p
                    })
                    .collect(),
            );
        }
        g
    }

    /// Z2, Z3, Z4, Z2xZ2, S3, D4.
    pub fn battery() -> Vec<FiniteGroup> {
        let z2 = Self::cyclic(2);
        vec![
            z2.clone(),
            Self::cyclic(3),
            Self::cyclic(4),
            Self::product(&z2, &z2),
            Self::symmetric3(),
            Self::dihedral4(),
        ]
    }

    pub fn order(&self) -> usize {
        self.mul.len()
    }

    pub fn eval(&self, w: &[i32], images: &[usize]) -> usize {
        w.iter().fold(self.identity, |acc, &x| {
            let g = images[x.unsigned_abs() as usize - 1];
            self.mul[acc][if x > 0 { g } else { self.inverse[g] }]
        })
    }
}

const UNSET: usize = usize::MAX;

struct HomSearch<'a> {
    g: &'a FiniteGroup,
    rels: &'a [Word],
    ngens: usize,
}

impl HomSearch<'_> {
    /// Forces generators determined by a relator in which they are the only
    /// unknown and occur once; fails on a violated relator.
    fn propagate(&self, img: &mut [usize]) -> bool {
        let g = self.g;
        loop {
            let mut changed = false;
            for w in self.rels {
                let mut unknown: Option<(usize, usize)> = None;
                let mut multi = false;
                for (pos, &x) in w.iter().enumerate() {
                    let gi = x.unsigned_abs() as usize - 1;
                    if img[gi] == UNSET {
                        match unknown {
                            None => unknown = Some((gi, pos)),
                            Some((u, _)) if u == gi => multi = true,
                            Some(_) => multi = true,
                        }
                    }
                }
                match unknown {
                    None => {
                        if g.eval(w, img) != g.identity {
                            return false;
                        }
                    }
                    Some((gi, pos)) if !multi => {
                        // P x^e Q = 1  =>  x^e = P^-1 Q^-1
                        let p = g.eval(&w[..pos], img);
                        let q = g.eval(&w[pos + 1..], img);
                        let xe = g.mul[g.inverse[p]][g.inverse[q]];
                        img[gi] = if w[pos] > 0 { xe } else { g.inverse[xe] };
                        changed = true;
                    }
                    _ => {}
                }
            }
            if !changed {
                return true;
            }
        }
    }

    fn walk(&self, img: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        let saved = img.clone();
        if !self.propagate(img) {
            *img = saved;
            return true;
        }
        let keep_going = match img.iter().position(|&x| x == UNSET) {
            None => visit(img),
            Some(gi) => {
                let mut go = true;
                for v in 0..self.g.order() {
                    img[gi] = v;
                    if !self.walk(img, visit) {
                        go = false;
                        break;
                    }
                    img[gi] = UNSET;
                }
                go
            }
        };
        *img = saved;
        keep_going
    }

    fn count(&self, img: &mut Vec<usize>) -> u64 {
        let mut n = 0u64;
        self.walk(img, &mut |_| {
            n += 1;
            true
        });
        n
    }
}

fn check_target(g: &FiniteGroup) -> Result<()> {
    if g.order() > MAX_TARGET_ORDER {
        return Err(Error::Unsupported(format!(
            "target group of order {} exceeds the bound {MAX_TARGET_ORDER}",
            g.order()
        )));
    }
    Ok(())
}

/// Number of homomorphisms from the presented group to `g`.
pub fn count_homs(p: &GroupPresentation, g: &FiniteGroup) -> Result<u64> {
    check_target(g)?;
    let s = HomSearch {
        g,
        rels: &p.relators,
        ngens: p.rank(),
    };
    if s.ngens == 0 {
        return Ok(u64::from(p.relators.is_empty()));
    }
    let mut root = vec![UNSET; s.ngens];
    if !s.propagate(&mut root) {
        return Ok(0);
    }
    let Some(gi) = root.iter().position(|&x| x == UNSET) else {
        return Ok(1);
    };
    Ok((0..g.order())
        .into_par_iter()
        .map(|v| {
            let mut img = root.clone();
            img[gi] = v;
            s.count(&mut img)
        })
        .sum())
}

/// Calls `visit` with the generator images of each homomorphism to `g`, in
/// lexicographic search order, until it returns false.
pub fn for_each_hom(
    p: &GroupPresentation,
    g: &FiniteGroup,
    mut visit: impl FnMut(&[usize]) -> bool,
) -> Result<()> {
    check_target(g)?;
    let s = HomSearch {
        g,
        rels: &p.relators,
        ngens: p.rank(),
    };
    let mut img = vec![UNSET; s.ngens];
    s.walk(&mut img, &mut visit);
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
pub struct HomCount {
    pub group: String,
    pub left: u64,
    pub right: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Agreement {
    /// True when every computed invariant matches. This never asserts that
    /// the groups are isomorphic.
    pub consistent: bool,
    /// First invariant that differs.
    pub witness: Option<String>,
    pub h1_z: [AbelianInvariants; 2],
    pub h1_z2: [AbelianInvariants; 2],
    pub counts: Vec<HomCount>,
}

/// Compares abelian invariants and homomorphism counts into the small-group
/// battery.
pub fn presentations_agree(p1: &GroupPresentation, p2: &GroupPresentation) -> Agreement {
    let h1_z = [
        p1.abelian_invariants(Ring::Z),
        p2.abelian_invariants(Ring::Z),
    ];
    let h1_z2 = [
        p1.abelian_invariants(Ring::Z2),
        p2.abelian_invariants(Ring::Z2),
    ];
    let mut witness = None;
    if h1_z[0] != h1_z[1] {
        witness = Some(format!("H1 over Z: {} vs {}", h1_z[0], h1_z[1]));
    } else if h1_z2[0] != h1_z2[1] {
        witness = Some(format!("H1 over Z/2: {} vs {}", h1_z2[0], h1_z2[1]));
    }
    let mut counts = Vec::new();
    for g in FiniteGroup::battery() {
        let left = count_homs(p1, &g).expect("battery groups are small");
        let right = count_homs(p2, &g).expect("battery groups are small");
        if left != right && witness.is_none() {
            witness = Some(format!("homomorphisms to {}: {left} vs {right}", g.name));
        }
        counts.push(HomCount {
            group: g.name.clone(),
            left,
            right,
        });
    }
    Agreement {
        consistent: witness.is_none(),
        witness,
        h1_z,
        h1_z2,
        counts,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::{enumerate, EnumSpec};

    fn one_gen(rels: Vec<Word>) -> GroupPresentation {
        GroupPresentation::new(vec!["a".into()], rels)
    }

    #[test]
    fn small_counts() {
        assert_eq!(
            count_homs(&one_gen(vec![vec![1, 1]]), &FiniteGroup::symmetric3()).unwrap(),
            4
        );
        assert_eq!(
            count_homs(&one_gen(vec![]), &FiniteGroup::cyclic(3)).unwrap(),
            3
        );
        let free2 = GroupPresentation::new(vec!["a".into(), "b".into()], vec![]);
        assert_eq!(count_homs(&free2, &FiniteGroup::dihedral4()).unwrap(), 64);
        // Z x Z: commuting pairs in S3 number |S3| * (number of classes) = 18
        let zz = GroupPresentation::new(vec!["a".into(), "b".into()], vec![vec![1, 2, -1, -2]]);
        assert_eq!(count_homs(&zz, &FiniteGroup::symmetric3()).unwrap(), 18);
    }

    #[test]
    fn battery_groups() {
        let orders: Vec<usize> = FiniteGroup::battery()
            .iter()
            .map(FiniteGroup::order)
            .collect();
        assert_eq!(orders, vec![2, 3, 4, 4, 6, 8]);
        let bad = FiniteGroup::from_table("bad", vec![vec![0, 1], vec![1, 1]]);
        assert!(matches!(bad, Err(Error::NotAGroup(_))));
        let too_big = FiniteGroup::cyclic(25);
        assert!(count_homs(&one_gen(vec![]), &too_big).is_err());
    }

    #[test]
    fn agreement_verdicts() {
        let a2 = one_gen(vec![vec![1, 1]]);
        let a3 = one_gen(vec![vec![1, 1, 1]]);
        let v = presentations_agree(&a2, &a3);
        assert!(!v.consistent);
        let mut red = a2.clone();
        red.push(vec![1, 1, 1, 1], RelatorKind::Other);
        assert!(presentations_agree(&a2, &red).consistent);
    }

    #[test]
    fn reduction_and_text() {
        assert_eq!(free_reduce(&[1, 2, -2, -1, 3]), vec![3]);
        let p =
            GroupPresentation::new(vec!["a".into(), "b".into()], vec![vec![1, -2], vec![2, -2]]);
        assert_eq!(p.relators.len(), 1);
        assert_eq!(p.to_text(), "generators a b\n1 -2\n");
    }

    #[test]
    fn generator_counts_and_theorems_on_small_corpus() {
        for q in 1..=2 {
            for d in enumerate(&EnumSpec::new(q))
                .unwrap()
                .diagrams
                .iter()
                .step_by(7)
                .take(60)
            {
                let c = build_quotient_unchecked(d);
                let cw = pi1_cw(&c);
                assert_eq!(cw.rank(), 2 * q + 1);
                let pp = pi1_paper(d).unwrap();
                let k2 = curves_unchecked(d).len();
                assert_eq!(pp.rank(), 3 * q + 1 + k2);
                for ring in [Ring::Z, Ring::Z2] {
                    let (_, inv) = h1_paper(d, ring).unwrap();
                    assert_eq!(inv, cw.abelian_invariants(ring));
                    assert_eq!(pp.abelian_invariants(ring), inv);
                }
                // the substitution words carry every relator to the identity
                // of each finite quotient of the cellular group
                let eps = paper_to_cw_words(d).unwrap();
                for_each_hom(&cw, &FiniteGroup::symmetric3(), |img| {
                    let s3 = FiniteGroup::symmetric3();
                    let pimg: Vec<usize> = eps.iter().map(|w| s3.eval(w, img)).collect();
                    for r in &pp.relators {
                        assert_eq!(s3.eval(r, &pimg), s3.identity);
                    }
                    true
                })
                .unwrap();
            }
        }
    }
}

//! Dart-level encoding of abstract Johansson diagrams: parsing, validation,
//! curve and triplet extraction, and canonical forms.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

pub type Dart = usize;

const NONE: usize = usize::MAX;

#[inline]
pub fn vertex(d: Dart) -> usize {
    d / 4
}

#[inline]
pub fn rot(d: Dart) -> Dart {
    (d & !3) | ((d + 1) & 3)
}

#[inline]
pub fn rot_inv(d: Dart) -> Dart {
    (d & !3) | ((d + 3) & 3)
}

/// The other dart of the same strand at the crossing.
#[inline]
pub fn strand_partner(d: Dart) -> Dart {
    (d & !3) | ((d + 2) & 3)
}

/// Strand index (0 or 1) of a dart at its crossing.
#[inline]
pub fn strand(d: Dart) -> usize {
    d & 1
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct JohanssonDiagram {
    theta: Vec<Dart>,
    tau: Vec<Dart>,
}

impl fmt::Debug for JohanssonDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("JohanssonDiagram")
            .field("crossings", &self.crossings())
            .field("theta", &self.theta)
            .field("tau", &self.tau)
            .finish()
    }
}

impl Serialize for JohanssonDiagram {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("JohanssonDiagram", 3)?;
        st.serialize_field("crossings", &self.crossings())?;
        st.serialize_field("theta", self.theta_slice())?;
        st.serialize_field("tau", self.tau_slice())?;
        st.end()
    }
}

impl JohanssonDiagram {
    /// Builds a diagram from raw arrays, checking only lengths and index bounds.
    pub fn from_arrays(theta: Vec<Dart>, tau: Vec<Dart>) -> Result<Self> {
        if theta.is_empty() && tau.is_empty() {
            return Err(Error::EmptyDiagram);
        }
        if !theta.len().is_multiple_of(4) {
            return Err(Error::Length {
                field: "theta",
                expected: theta.len().next_multiple_of(4),
                found: theta.len(),
            });
        }
        let n = theta.len();
        if tau.len() != n {
            return Err(Error::Length {
                field: "tau",
                expected: n,
                found: tau.len(),
            });
        }
        for (field, arr) in [("theta", &theta), ("tau", &tau)] {
            if let Some((index, &value)) = arr.iter().enumerate().find(|(_, &v)| v >= n) {
                return Err(Error::OutOfRange {
                    field,
                    index,
                    value,
                    bound: n,
                });
            }
        }
        Ok(JohanssonDiagram { theta, tau })
    }

    pub fn crossings(&self) -> usize {
        self.theta.len() / 4
    }

    pub fn darts(&self) -> usize {
        self.theta.len()
    }

    /// Triple point count `q = n / 3` (meaningful for valid diagrams).
    pub fn triple_points(&self) -> usize {
        self.crossings() / 3
    }

    #[inline]
    pub fn theta(&self, d: Dart) -> Dart {
        self.theta[d]
    }

    #[inline]
    pub fn tau(&self, d: Dart) -> Dart {
        self.tau[d]
    }

    #[inline]
    pub fn adv(&self, d: Dart) -> Dart {
        strand_partner(self.theta[d])
    }

    #[inline]
    pub fn face_next(&self, d: Dart) -> Dart {
        rot(self.theta[d])
    }

    pub fn theta_slice(&self) -> &[Dart] {
        &self.theta
    }

    pub fn tau_slice(&self) -> &[Dart] {
        &self.tau
    }

    /// Edge representative: the smaller dart of `{d, theta(d)}`.
    #[inline]
    pub fn edge_rep(&self, d: Dart) -> Dart {
        d.min(self.theta[d])
    }

    /// Relabels crossings by `perm` (old crossing -> new crossing) and
    /// cyclically shifts dart positions at each crossing by `shift[old]`.
    pub fn relabel(&self, perm: &[usize], shift: &[usize]) -> JohanssonDiagram {
        let map = |d: Dart| 4 * perm[vertex(d)] + ((d % 4 + shift[vertex(d)]) % 4);
        let n = self.darts();
        let mut theta = vec![0; n];
        let mut tau = vec![0; n];
        for d in 0..n {
            theta[map(d)] = map(self.theta[d]);
            tau[map(d)] = map(self.tau[d]);
        }
        JohanssonDiagram { theta, tau }
    }

    /// Applies a dart bijection `map` that is rotation-compatible.
    pub fn map_darts(&self, map: &[Dart]) -> JohanssonDiagram {
        let n = self.darts();
        let mut theta = vec![0; n];
        let mut tau = vec![0; n];
        for d in 0..n {
            theta[map[d]] = map[self.theta[d]];
            tau[map[d]] = map[self.tau[d]];
        }
        JohanssonDiagram { theta, tau }
    }

    /// The same diagram on the oppositely oriented surface.
    pub fn mirror(&self) -> JohanssonDiagram {
        let map: Vec<Dart> = (0..self.darts())
            .map(|d| (d & !3) | ((4 - (d & 3)) & 3))
            .collect();
        self.map_darts(&map)
    }

    /// Connected components of the underlying map, as sorted crossing lists.
    pub fn map_components(&self) -> Vec<Vec<usize>> {
        let n = self.crossings();
        let mut comp = vec![NONE; n];
        let mut out = Vec::new();
        for start in 0..n {
            if comp[start] != NONE {
                continue;
            }
            let id = out.len();
            let mut members = vec![start];
            comp[start] = id;
            let mut i = 0;
            while i < members.len() {
                let v = members[i];
                i += 1;
                for d in 4 * v..4 * v + 4 {
                    let w = vertex(self.theta[d]);
                    if comp[w] == NONE {
                        comp[w] = id;
                        members.push(w);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.map_components().len() == 1
    }
}

// ---------------------------------------------------------------------------
// jd v1 text format

struct Token<'a> {
    text: &'a str,
    line: usize,
    col: usize,
}

fn tokenize(text: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    for (li, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        let mut start = None;
        for (ci, ch) in line
            .char_indices()
            .chain(std::iter::once((line.len(), ' ')))
        {
            if ch.is_whitespace() {
                if let Some(s) = start.take() {
                    out.push(Token {
                        text: &line[s..ci],
                        line: li + 1,
                        col: s + 1,
                    });
                }
            } else if start.is_none() {
                start = Some(ci);
            }
        }
    }
    out
}

fn parse_err(tok: Option<&Token>, eof: (usize, usize), msg: impl Into<String>) -> Error {
    let (line, col) = tok.map(|t| (t.line, t.col)).unwrap_or(eof);
    Error::Parse {
        line,
        col,
        msg: msg.into(),
    }
}

/// Parses a diagram in `jd v1` format. Only lengths and index bounds are
/// checked; use [`validate`] for the structural conditions.
pub fn parse_diagram(text: &str) -> Result<JohanssonDiagram> {
    let toks = tokenize(text);
    let eof = (text.lines().count().max(1), 1);
    let mut it = toks.iter().peekable();

    let mut expect = |word: &str| -> Result<()> {
        match it.next() {
            Some(t) if t.text == word => Ok(()),
            t => Err(parse_err(t, eof, format!("expected `{word}`"))),
        }
    };
    expect("jd")?;
    expect("v1")?;
    expect("crossings")?;
    let n = match it.next() {
        Some(t) => t
            .text
            .parse::<usize>()
            .map_err(|_| parse_err(Some(t), eof, format!("non-integer token `{}`", t.text)))?,
        None => return Err(parse_err(None, eof, "missing crossing count")),
    };
    if n == 0 {
        return Err(Error::EmptyDiagram);
    }

    let mut read_array = |name: &'static str, terminator: Option<&str>| -> Result<Vec<Dart>> {
        match it.next() {
            Some(t) if t.text == name => {}
            t => return Err(parse_err(t, eof, format!("expected `{name}`"))),
        }
        let mut vals = Vec::with_capacity(4 * n);
        while let Some(t) = it.peek() {
            if Some(t.text) == terminator {
                break;
            }
            let t = it.next().unwrap();
            let v = t
                .text
                .parse::<usize>()
                .map_err(|_| parse_err(Some(t), eof, format!("non-integer token `{}`", t.text)))?;
            if v >= 4 * n {
                return Err(parse_err(
                    Some(t),
                    eof,
                    format!("{name} index {v} outside [0, {})", 4 * n),
                ));
            }
            vals.push(v);
        }
        if vals.len() != 4 * n {
            return Err(Error::Length {
                field: name,
                expected: 4 * n,
                found: vals.len(),
            });
        }
        Ok(vals)
    };
    let theta = read_array("theta", Some("tau"))?;
    let tau = read_array("tau", None)?;
    JohanssonDiagram::from_arrays(theta, tau)
}

pub fn serialize_diagram(d: &JohanssonDiagram) -> String {
    let join = |v: &[Dart]| {
        v.iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    };
    format!(
        "jd v1\ncrossings {}\ntheta {}\ntau {}\n",
        d.crossings(),
        join(&d.theta),
        join(&d.tau)
    )
}

// ---------------------------------------------------------------------------
// validation

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Condition {
    V1,
    V2,
    V3,
    V4,
    V5,
    V6,
    V7,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// All of V1-V7; the map must be connected.
    Strict,
    /// V1-V6 only; the map may have several components.
    Components,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub condition: Condition,
    pub witness: Vec<usize>,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Stats {
    pub q: usize,
    pub k: usize,
    pub components: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub violations: Vec<Violation>,
    pub stats: Option<Stats>,
}

impl ValidationReport {
    pub fn first(&self) -> Option<&Violation> {
        self.violations.first()
    }

    pub fn has(&self, c: Condition) -> bool {
        self.violations.iter().any(|v| v.condition == c)
    }

    pub(crate) fn into_result(self) -> Result<()> {
        match self.violations.into_iter().next() {
            None => Ok(()),
            Some(v) => Err(Error::Invalid {
                condition: v.condition,
                msg: v.message,
            }),
        }
    }
}

fn involution_violation(arr: &[Dart], cond: Condition, name: &str) -> Option<Violation> {
    for d in 0..arr.len() {
        if arr[d] == d {
            return Some(Violation {
                condition: cond,
                witness: vec![d],
                message: format!("{name} fixes dart {d}"),
            });
        }
        if arr[arr[d]] != d {
            return Some(Violation {
                condition: cond,
                witness: vec![d, arr[d], arr[arr[d]]],
                message: format!("{name} is not an involution at dart {d}"),
            });
        }
    }
    None
}

/// Orbit id of every dart under the group generated by `s` and `theta`
/// (undirected curves).
fn undirected_curve_ids(d: &JohanssonDiagram) -> Vec<usize> {
    let n = d.darts();
    let mut id = vec![NONE; n];
    let mut next = 0;
    for start in 0..n {
        if id[start] != NONE {
            continue;
        }
        let mut stack = vec![start];
        id[start] = next;
        while let Some(x) = stack.pop() {
            for y in [strand_partner(x), d.theta(x)] {
                if id[y] == NONE {
                    id[y] = next;
                    stack.push(y);
                }
            }
        }
        next += 1;
    }
    id
}

/// Strand pair index `2v + strand`.
#[inline]
fn pair_of(d: Dart) -> usize {
    2 * vertex(d) + strand(d)
}

#[inline]
fn psi(d: &JohanssonDiagram, p: usize) -> usize {
    let dart = 4 * (p / 2) + (p % 2);
    pair_of(d.tau(dart))
}

/// Checks V1-V7 in order. Conditions whose prerequisites fail are skipped.
pub fn validate(d: &JohanssonDiagram, mode: Mode) -> ValidationReport {
    let mut violations = Vec::new();
    let n = d.darts();

    let v1 = involution_violation(&d.theta, Condition::V1, "theta");
    let v2 = involution_violation(&d.tau, Condition::V2, "tau");
    let theta_ok = v1.is_none();
    let tau_ok = v2.is_none();
    violations.extend(v1);
    violations.extend(v2);

    if theta_ok && tau_ok {
        if let Some(x) = (0..n).find(|&x| d.tau(d.theta(x)) != d.theta(d.tau(x))) {
            violations.push(Violation {
                condition: Condition::V3,
                witness: vec![x],
                message: format!("tau and theta do not commute at dart {x}"),
            });
        }
    }
    let mut v4_ok = false;
    if tau_ok {
        match (0..n).find(|&x| d.tau(strand_partner(x)) != strand_partner(d.tau(x))) {
            Some(x) => violations.push(Violation {
                condition: Condition::V4,
                witness: vec![x],
                message: format!("tau does not map the strand of dart {x} to a strand"),
            }),
            None => v4_ok = true,
        }
    }
    if theta_ok && tau_ok && violations.is_empty() {
        let und = undirected_curve_ids(d);
        if let Some(x) = (0..n).find(|&x| und[d.tau(x)] == und[x]) {
            violations.push(Violation {
                condition: Condition::V5,
                witness: vec![x, d.tau(x)],
                message: format!("dart {x} is sistered into its own curve"),
            });
        }
    }
    if tau_ok && v4_ok {
        if let Some(v) = triplet_violation(d) {
            violations.push(v);
        }
    }
    if mode == Mode::Strict && theta_ok {
        let comps = d.map_components();
        if comps.len() > 1 {
            violations.push(Violation {
                condition: Condition::V7,
                witness: comps.iter().map(|c| c[0]).collect(),
                message: format!("map has {} components", comps.len()),
            });
        }
    }

    let valid = violations.is_empty();
    let stats = valid.then(|| Stats {
        q: d.triple_points(),
        k: undirected_curve_count(d) / 2,
        components: d.map_components().len(),
    });
    ValidationReport {
        valid,
        violations,
        stats,
    }
}

fn undirected_curve_count(d: &JohanssonDiagram) -> usize {
    undirected_curve_ids(d)
        .into_iter()
        .max()
        .map_or(0, |m| m + 1)
}

fn triplet_violation(d: &JohanssonDiagram) -> Option<Violation> {
    let pairs = 2 * d.crossings();
    let mu = |p: usize| psi(d, p ^ 1);
    let mut triple_of = vec![None::<[usize; 3]>; d.crossings()];
    let mut seen = vec![false; pairs];
    for start in 0..pairs {
        if seen[start] {
            continue;
        }
        let mut orbit = vec![start];
        seen[start] = true;
        let mut p = mu(start);
        while p != start {
            if orbit.len() > pairs {
                break;
            }
            seen[p] = true;
            orbit.push(p);
            p = mu(p);
        }
        let crossings: Vec<usize> = orbit.iter().map(|p| p / 2).collect();
        if orbit.len() != 3 {
            return Some(Violation {
                condition: Condition::V6,
                witness: crossings,
                message: format!("triplet orbit has size {} instead of 3", orbit.len()),
            });
        }
        let mut t = [crossings[0], crossings[1], crossings[2]];
        t.sort_unstable();
        if t[0] == t[1] || t[1] == t[2] {
            return Some(Violation {
                condition: Condition::V6,
                witness: crossings,
                message: "triplet orbit repeats a crossing".into(),
            });
        }
        for &c in &t {
            match triple_of[c] {
                None => triple_of[c] = Some(t),
                Some(prev) if prev == t => {}
                Some(prev) => {
                    return Some(Violation {
                        condition: Condition::V6,
                        witness: vec![c, prev[0], prev[1], prev[2], t[0], t[1], t[2]],
                        message: format!("crossing {c} lies in two different triplets"),
                    })
                }
            }
        }
    }
    None
}

// ---------------------------------------------------------------------------
// curves and triplets

/// An oriented diagram curve. `darts[0]` is its basepoint dart, and the
/// sister curve's dart list is the index-wise tau image of this one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Curve {
    /// Minimal dart of the curve.
    pub id: Dart,
    pub darts: Vec<Dart>,
    /// Index of the sister curve in the list returned by [`curves`].
    pub sister: usize,
    /// Whether this curve is the chosen representative of its sister pair.
    pub representative: bool,
}

impl Curve {
    pub fn basepoint(&self) -> Dart {
        self.darts[0]
    }
}

/// The 2k oriented diagram curves, coherently oriented with their sisters,
/// sorted by minimal dart.
pub fn curves(d: &JohanssonDiagram) -> Result<Vec<Curve>> {
    let report = validate(d, Mode::Components);
    if report.has(Condition::V1)
        || report.has(Condition::V2)
        || report.has(Condition::V3)
        || report.has(Condition::V4)
        || report.has(Condition::V5)
    {
        report.into_result()?;
    }
    Ok(curves_unchecked(d))
}

pub(crate) fn curves_unchecked(d: &JohanssonDiagram) -> Vec<Curve> {
    let n = d.darts();
    let mut used = vec![false; n];
    let mut raw: Vec<(Vec<Dart>, bool)> = Vec::new();
    for start in 0..n {
        if used[start] {
            continue;
        }
        // `start` is the minimal dart of its whole sister group.
        let mut darts = vec![start];
        let mut x = d.adv(start);
        while x != start {
            darts.push(x);
            x = d.adv(x);
        }
        let sister: Vec<Dart> = darts.iter().map(|&x| d.tau(x)).collect();
        for &x in darts.iter().chain(sister.iter()) {
            used[x] = true;
            used[d.theta(x)] = true;
        }
        raw.push((darts, true));
        raw.push((sister, false));
    }
    let mut order: Vec<usize> = (0..raw.len()).collect();
    let mins: Vec<Dart> = raw.iter().map(|(v, _)| *v.iter().min().unwrap()).collect();
    order.sort_by_key(|&i| mins[i]);
    let mut pos = vec![0; raw.len()];
    for (p, &i) in order.iter().enumerate() {
        pos[i] = p;
    }
    order
        .iter()
        .map(|&i| Curve {
            id: mins[i],
            darts: raw[i].0.clone(),
            sister: pos[i ^ 1],
            representative: raw[i].1,
        })
        .collect()
}

/// Labelled triplet: crossings `P1, P2, P3` and strand darts such that the
/// strand of `alpha` at `P1` is sistered to `P2`, `beta` at `P2` to `P3`,
/// and `gamma` at `P3` to `P1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TriplePoint {
    pub crossings: [usize; 3],
    /// Strand indices of alpha at P1, beta at P2, gamma at P3.
    pub strands: [usize; 3],
}

impl TriplePoint {
    pub fn sorted(&self) -> [usize; 3] {
        let mut t = self.crossings;
        t.sort_unstable();
        t
    }
}

/// Triplets as sorted crossing triples, sorted lexicographically.
pub fn triplets(d: &JohanssonDiagram) -> Result<Vec<[usize; 3]>> {
    Ok(triple_points(d)?.iter().map(|t| t.sorted()).collect())
}

/// Labelled triple points in the order of [`triplets`].
pub fn triple_points(d: &JohanssonDiagram) -> Result<Vec<TriplePoint>> {
    let report = validate(d, Mode::Components);
    if !report.valid {
        report.into_result()?;
    }
    Ok(triple_points_unchecked(d))
}

pub(crate) fn triple_points_unchecked(d: &JohanssonDiagram) -> Vec<TriplePoint> {
    let mut done = vec![false; d.crossings()];
    let mut out = Vec::new();
    for p1 in 0..d.crossings() {
        if done[p1] {
            continue;
        }
        // (P1, alpha) -> chi.psi -> (P2, beta) -> chi.psi -> (P3, gamma)
        let s0 = 2 * p1;
        let s1 = psi(d, s0) ^ 1;
        let s2 = psi(d, s1) ^ 1;
        let t = TriplePoint {
            crossings: [s0 / 2, s1 / 2, s2 / 2],
            strands: [s0 % 2, s1 % 2, s2 % 2],
        };
        for c in t.crossings {
            done[c] = true;
        }
        out.push(t);
    }
    out.sort_by_key(|t| t.sorted());
    out
}

/// Index of the triplet containing each crossing.
pub fn triplet_index(d: &JohanssonDiagram) -> Result<Vec<usize>> {
    let trip = triplets(d)?;
    let mut idx = vec![0; d.crossings()];
    for (i, t) in trip.iter().enumerate() {
        for &c in t {
            idx[c] = i;
        }
    }
    Ok(idx)
}

// ---------------------------------------------------------------------------
// canonical forms

/// Rotation-preserving BFS labelling from `start`, following theta and tau.
/// Returns the visiting order of darts (new label = position).
fn bfs_order(d: &JohanssonDiagram, start: Dart, label: &mut [usize]) -> Vec<Dart> {
    fn push_vertex(x: Dart, order: &mut Vec<Dart>, label: &mut [usize]) {
        let mut y = x;
        for _ in 0..4 {
            label[y] = order.len();
            order.push(y);
            y = rot(y);
        }
    }
    let mut order = Vec::with_capacity(d.darts());
    push_vertex(start, &mut order, label);
    let mut i = 0;
    while i < order.len() {
        let x = order[i];
        i += 1;
        for y in [d.theta(x), d.tau(x)] {
            if label[y] == NONE {
                push_vertex(y, &mut order, label);
            }
        }
    }
    order
}

fn code_from(d: &JohanssonDiagram, start: Dart, label: &mut [usize]) -> (Vec<u32>, Vec<Dart>) {
    let order = bfs_order(d, start, label);
    let mut code = Vec::with_capacity(2 * order.len());
    for &x in &order {
        code.push(label[d.theta(x)] as u32);
        code.push(label[d.tau(x)] as u32);
    }
    (code, order)
}

/// Canonical code of a diagram whose theta/tau graph is connected, together
/// with a dart map realizing it (old dart -> canonical dart).
fn canonical_connected(d: &JohanssonDiagram, darts: &[Dart]) -> (Vec<u32>, Vec<Dart>) {
    let mut label = vec![NONE; d.darts()];
    let mut best: Option<(Vec<u32>, Vec<Dart>)> = None;
    for &s in darts {
        for &x in darts {
            label[x] = NONE;
        }
        let (code, order) = code_from(d, s, &mut label);
        if best.as_ref().is_none_or(|(b, _)| code < *b) {
            best = Some((code, order));
        }
    }
    best.expect("nonempty component")
}

/// Canonical form under orientation-preserving isomorphism: the code and
/// a dart map into canonical labels. Components (under theta and tau) are
/// canonicalized separately and concatenated in sorted order.
pub fn canonical_form(d: &JohanssonDiagram) -> (Vec<u32>, Vec<Dart>) {
    let n = d.darts();
    let mut label = vec![NONE; n];
    let mut comps: Vec<Vec<Dart>> = Vec::new();
    for s in 0..n {
        if label[s] == NONE {
            let order = bfs_order(d, s, &mut label);
            comps.push(order);
        }
    }
    if comps.len() == 1 {
        let (code, order) = canonical_connected(d, &comps[0]);
        let mut map = vec![0; n];
        for (i, &x) in order.iter().enumerate() {
            map[x] = i;
        }
        return (code, map);
    }
    let mut parts: Vec<(Vec<u32>, Vec<Dart>)> =
        comps.iter().map(|c| canonical_connected(d, c)).collect();
    parts.sort();
    let mut code = Vec::new();
    let mut map = vec![0; n];
    let mut base = 0;
    for (c, order) in &parts {
        code.push(u32::MAX);
        code.extend(c.iter().map(|&v| v + base as u32));
        for (i, &x) in order.iter().enumerate() {
            map[x] = base + i;
        }
        base += order.len();
    }
    (code, map)
}

pub fn canonical_code(d: &JohanssonDiagram) -> Vec<u32> {
    canonical_form(d).0
}

/// Relabels a diagram into its canonical representative.
pub fn canonicalize(d: &JohanssonDiagram) -> JohanssonDiagram {
    let (_, map) = canonical_form(d);
    d.map_darts(&map)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Isomorphism {
    /// `bijection[x]` is the dart of the second diagram matched with dart
    /// `x` of the first (after mirroring the first when `mirrored`).
    Isomorphic {
        bijection: Vec<Dart>,
        mirrored: bool,
    },
    NotIsomorphic,
}

impl Isomorphism {
    pub fn is_isomorphic(&self) -> bool {
        matches!(self, Isomorphism::Isomorphic { .. })
    }
}

/// Orientation-preserving isomorphism test; with `allow_mirror` also tries
/// reversing the rotation of the first diagram.
pub fn isomorphic(d1: &JohanssonDiagram, d2: &JohanssonDiagram, allow_mirror: bool) -> Isomorphism {
    if d1.darts() != d2.darts() {
        return Isomorphism::NotIsomorphic;
    }
    let (c2, m2) = canonical_form(d2);
    let mut inv2 = vec![0; m2.len()];
    for (x, &y) in m2.iter().enumerate() {
        inv2[y] = x;
    }
    let candidates: &[bool] = if allow_mirror {
        &[false, true]
    } else {
        &[false]
    };
    for &mirrored in candidates {
        let a = if mirrored { d1.mirror() } else { d1.clone() };
        let (c1, m1) = canonical_form(&a);
        if c1 == c2 {
            let bijection = m1.iter().map(|&y| inv2[y]).collect();
            return Isomorphism::Isomorphic {
                bijection,
                mirrored,
            };
        }
    }
    Isomorphism::NotIsomorphic
}

/// Multiset of lengths (in darts) of the oriented curves.
pub fn curve_lengths(d: &JohanssonDiagram) -> Vec<usize> {
    let mut v: Vec<usize> = curves_unchecked(d).iter().map(|c| c.darts.len()).collect();
    v.sort_unstable();
    v
}

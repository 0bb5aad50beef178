//! Corpus loading and independent oracles shared by the integration tests.
//! The oracles work from the raw arrays only and avoid the library's own
//! traversal helpers.

#![allow(dead_code)]

use std::path::PathBuf;

use dehn_core::{enumerate, parse_diagram, EnumSpec, JohanssonDiagram};

pub fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

pub fn load(name: &str) -> JohanssonDiagram {
    let path = corpus_dir().join(name);
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    parse_diagram(&text).unwrap()
}

pub fn sphere() -> JohanssonDiagram {
    load("s2xs1_sphere.jd")
}

pub fn torus() -> JohanssonDiagram {
    load("s2xs1_torus.jd")
}

pub fn q1() -> Vec<JohanssonDiagram> {
    enumerate(&EnumSpec::new(1)).unwrap().diagrams
}

pub fn q2() -> Vec<JohanssonDiagram> {
    enumerate(&EnumSpec::new(2)).unwrap().diagrams
}

fn rot(x: usize) -> usize {
    (x & !3) | ((x + 1) & 3)
}

fn partner(x: usize) -> usize {
    x ^ 2
}

/// Orbit labels of the group generated by `steps`.
fn orbits(n: usize, steps: &[&dyn Fn(usize) -> usize]) -> Vec<usize> {
    let mut label = vec![usize::MAX; n];
    let mut next = 0;
    for s in 0..n {
        if label[s] != usize::MAX {
            continue;
        }
        let mut stack = vec![s];
        label[s] = next;
        while let Some(x) = stack.pop() {
            for f in steps {
                let y = f(x);
                if label[y] == usize::MAX {
                    label[y] = next;
                    stack.push(y);
                }
            }
        }
        next += 1;
    }
    label
}

/// Face label of every dart: cycles of `x -> rot(theta(x))`.
pub fn faces(d: &JohanssonDiagram) -> Vec<usize> {
    let th = d.theta_slice();
    orbits(th.len(), &[&|x| rot(th[x])])
}

pub fn euler_characteristic(d: &JohanssonDiagram) -> i64 {
    let f = faces(d).into_iter().max().map_or(0, |m| m + 1) as i64;
    let v = d.crossings() as i64;
    v - 2 * v + f
}

/// Bipartiteness of the face adjacency graph, by BFS 2-coloring.
pub fn checkered(d: &JohanssonDiagram) -> bool {
    let th = d.theta_slice();
    let f = faces(d);
    let nf = f.iter().max().map_or(0, |m| m + 1);
    let mut adj = vec![Vec::new(); nf];
    for x in 0..th.len() {
        adj[f[x]].push(f[th[x]]);
    }
    let mut color = vec![u8::MAX; nf];
    for s in 0..nf {
        if color[s] != u8::MAX {
            continue;
        }
        color[s] = 0;
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(a) = queue.pop_front() {
            for &b in &adj[a] {
                if color[b] == u8::MAX {
                    color[b] = 1 - color[a];
                    queue.push_back(b);
                } else if color[b] == color[a] {
                    return false;
                }
            }
        }
    }
    true
}

fn is_involution(a: &[usize]) -> bool {
    (0..a.len()).all(|x| a[x] != x && a[a[x]] == x)
}

/// Every crossing `c` with strand sisters at crossings `a, b` spans the set
/// `{c, a, b}` of three distinct crossings, and every member spans the same
/// set.
pub fn triplets_ok(d: &JohanssonDiagram) -> bool {
    let tau = d.tau_slice();
    let span = |c: usize| {
        let mut s = [c, tau[4 * c] / 4, tau[4 * c + 1] / 4];
        s.sort_unstable();
        s
    };
    (0..d.crossings()).all(|c| {
        let s = span(c);
        s[0] != s[1] && s[1] != s[2] && s.iter().all(|&m| span(m) == s)
    })
}

/// Independent verdict on the named condition.
pub fn condition_holds(d: &JohanssonDiagram, cond: &str) -> bool {
    let th = d.theta_slice();
    let tau = d.tau_slice();
    let n = th.len();
    match cond {
        "V1" => is_involution(th),
        "V2" => is_involution(tau),
        "V3" => (0..n).all(|x| tau[th[x]] == th[tau[x]]),
        "V4" => (0..n).all(|x| tau[partner(x)] == partner(tau[x])),
        "V5" => {
            let c = orbits(n, &[&|x| partner(x), &|x| th[x]]);
            (0..n).all(|x| c[x] != c[tau[x]])
        }
        "V6" => triplets_ok(d),
        "V7" => {
            let c = orbits(n, &[&|x| rot(x), &|x| th[x]]);
            c.iter().all(|&l| l == 0)
        }
        _ => panic!("unknown condition {cond}"),
    }
}

pub fn all_conditions_hold(d: &JohanssonDiagram) -> bool {
    ["V1", "V2", "V3", "V4", "V5", "V6", "V7"]
        .iter()
        .all(|c| condition_holds(d, c))
}

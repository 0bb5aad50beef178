//! Handle piping: a local surgery at a triple point that adds a handle to
//! one sheet, raising the genus by one and the triple point count by two.
//!
//! Local model near the triple point, in ambient coordinates: sheet X is
//! `x = 0`, sheet Y is `y = 0`, sheet Z is `z = 0`. Two small disks of radius
//! `r` centred at `(±1, 0, 0)` are removed from Z and joined by a tube above
//! Z whose core is the unit half circle over the origin in the plane `y = 0`.
//! Y cuts the tube lengthwise in an inner and an outer arc; X cuts it in a
//! meridian. The new triple points are `T1 = (0, 0, 1 - r)` and
//! `T2 = (0, 0, 1 + r)`. Crossing names: `a` on X, `b` on Y, `c` on the tube,
//! index 1 at `T1` and 2 at `T2`.

use serde::Serialize;

use crate::diagram::{
    rot, rot_inv, strand_partner, triple_points_unchecked, validate, Dart, JohanssonDiagram, Mode,
};
use crate::error::{Error, Result};

/// Which sheet receives the tube, which of its strands runs along the tube's
/// core, and on which side of the sheet the tube sits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize)]
pub struct PipeChoice {
    /// Index into the triple point's crossings `[P1, P2, P3]`.
    pub piped: u8,
    /// Strand of the piped crossing that becomes the core direction.
    pub strand: u8,
    pub upward: bool,
}

impl PipeChoice {
    pub fn all() -> Vec<PipeChoice> {
        let mut v = Vec::new();
        for piped in 0..3 {
            for strand in 0..2 {
                for upward in [false, true] {
                    v.push(PipeChoice {
                        piped,
                        strand,
                        upward,
                    });
                }
            }
        }
        v
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Dir {
    PX,
    NX,
    PY,
    NY,
    PZ,
    NZ,
}

/// Counterclockwise direction list around a crossing on a sheet spanned by
/// axes `a, b` whose normal is `sign * (a x b)`.
fn ccw(a: (Dir, Dir), b: (Dir, Dir), sign: i8) -> [Dir; 4] {
    if sign > 0 {
        [a.0, b.0, a.1, b.1]
    } else {
        [a.0, b.1, a.1, b.0]
    }
}

const X: (Dir, Dir) = (Dir::PX, Dir::NX);
const Y: (Dir, Dir) = (Dir::PY, Dir::NY);
const Z: (Dir, Dir) = (Dir::PZ, Dir::NZ);

struct Patch {
    theta: Vec<Dart>,
    tau: Vec<Dart>,
    layout: [(usize, [Dir; 4]); 6],
}

impl Patch {
    fn dart(&self, k: usize, dir: Dir) -> Dart {
        let (c, dirs) = self.layout[k];
        4 * c
            + dirs
                .iter()
                .position(|&x| x == dir)
                .expect("direction at crossing")
    }

    fn connect(&mut self, x: Dart, y: Dart) {
        self.theta[x] = y;
        self.theta[y] = x;
    }

    fn sister(&mut self, x: Dart, y: Dart) {
        self.tau[x] = y;
        self.tau[y] = x;
    }

    /// Inserts crossings in series on the edge of `d`: `d - i1`, `o1 - i2`,
    /// `o2 - theta(d)`.
    fn split_series(&mut self, d: Dart, i1: Dart, o1: Dart, i2: Dart, o2: Dart) {
        let p = self.theta[d];
        self.connect(d, i1);
        self.connect(o1, i2);
        self.connect(o2, p);
    }

    /// Reroutes the edge of `d` through one crossing and its far end through
    /// another: `d - inner`, `outer - theta(d)`.
    fn split_pair(&mut self, d: Dart, inner: Dart, outer: Dart) {
        let p = self.theta[d];
        self.connect(d, inner);
        self.connect(outer, p);
    }
}

const A1: usize = 0;
const A2: usize = 1;
const B1: usize = 2;
const B2: usize = 3;
const C1: usize = 4;
const C2: usize = 5;

/// Pipes triple point `id` (in the order of
/// [`triplets`](crate::diagram::triplets)).
pub fn handle_pipe(
    d: &JohanssonDiagram,
    id: usize,
    choice: PipeChoice,
) -> Result<JohanssonDiagram> {
    validate(d, Mode::Strict).into_result()?;
    let tps = triple_points_unchecked(d);
    let tp = tps
        .get(id)
        .ok_or(Error::NoSuchTriplePoint { id, q: tps.len() })?;
    if choice.piped > 2 || choice.strand > 1 {
        return Err(Error::Unsupported(format!(
            "invalid piping choice {choice:?}"
        )));
    }
    let pz = tp.crossings[choice.piped as usize];
    let a = choice.strand as usize;
    let vz = 4 * pz + a; // +x on Z
    let wz = 4 * pz + 1 - a; // +y on Z
    let v = d.tau(vz); // +x on Y
    let w = d.tau(wz); // +y on X
    let u = if choice.upward { rot_inv(w) } else { rot(w) }; // +z on X
    let n_x: i8 = if rot(u) == w { -1 } else { 1 };
    let n_y: i8 = if rot(d.tau(u)) == v { 1 } else { -1 };
    let n_z: i8 = if rot(vz) == wz { 1 } else { -1 };

    let n = d.crossings();
    let mut p = Patch {
        theta: d.theta_slice().to_vec(),
        tau: d.tau_slice().to_vec(),
        layout: [
            (n, ccw(Y, Z, n_x)),
            (n + 1, ccw(Y, Z, n_x)),
            (n + 2, ccw(Z, X, n_y)),
            (n + 3, ccw(Z, X, n_y)),
            (n + 4, ccw(X, Y, -n_z)),
            (n + 5, ccw(X, Y, n_z)),
        ],
    };
    p.theta.resize(4 * (n + 6), usize::MAX);
    p.tau.resize(4 * (n + 6), usize::MAX);
    let dt = |k, dir| p.dart(k, dir);
    use Dir::*;

    let (a1nz, a1pz, a2nz, a2pz) = (dt(A1, NZ), dt(A1, PZ), dt(A2, NZ), dt(A2, PZ));
    let (b1nz, b1pz, b2nz, b2pz) = (dt(B1, NZ), dt(B1, PZ), dt(B2, NZ), dt(B2, PZ));
    let (b1px, b2px, b1nx, b2nx) = (dt(B1, PX), dt(B2, PX), dt(B1, NX), dt(B2, NX));
    let (c1px, c2px, c1nx, c2nx) = (dt(C1, PX), dt(C2, PX), dt(C1, NX), dt(C2, NX));
    let (a1py, a2py, a1ny, a2ny) = (dt(A1, PY), dt(A2, PY), dt(A1, NY), dt(A2, NY));
    let (c1py, c2py, c1ny, c2ny) = (dt(C1, PY), dt(C2, PY), dt(C1, NY), dt(C2, NY));

    // X: the +z ray from P_X meets the new circle twice
    p.split_series(u, a1nz, a1pz, a2nz, a2pz);
    // Y: the +z ray from P_Y meets both tube arcs
    p.split_series(d.tau(u), b1nz, b1pz, b2nz, b2pz);
    // Y and Z: the core line closes up over the inner arc; the outer arc
    // carries the rest of the line over the handle
    p.split_pair(v, b1px, b2px);
    p.split_pair(strand_partner(v), b1nx, b2nx);
    p.split_pair(vz, c1px, c2px);
    p.split_pair(strand_partner(vz), c1nx, c2nx);
    // the circle on X and the meridian on the tube
    p.connect(a1py, a2py);
    p.connect(a1ny, a2ny);
    p.connect(c1py, c2py);
    p.connect(c1ny, c2ny);

    for (ka, kb, kc) in [(A1, B1, C1), (A2, B2, C2)] {
        for (da, db) in [(PZ, PZ), (NZ, NZ)] {
            let (x, y) = (p.dart(ka, da), p.dart(kb, db));
            p.sister(x, y);
        }
        for dir in [PY, NY] {
            let (x, y) = (p.dart(ka, dir), p.dart(kc, dir));
            p.sister(x, y);
        }
        for dir in [PX, NX] {
            let (x, y) = (p.dart(kb, dir), p.dart(kc, dir));
            p.sister(x, y);
        }
    }

    let out = JohanssonDiagram::from_arrays(p.theta, p.tau)?;
    validate(&out, Mode::Strict).into_result()?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::filling_report;
    use crate::group::{h1_sigma, Ring};
    use crate::search::{enumerate, EnumSpec};
    use crate::surface::euler_genus;

    #[test]
    fn every_choice_meets_the_contract() {
        let mut ds = enumerate(&EnumSpec::new(1)).unwrap().diagrams;
        ds.extend(
            enumerate(&EnumSpec::new(2))
                .unwrap()
                .diagrams
                .into_iter()
                .step_by(37)
                .take(25),
        );
        for d in &ds {
            let (_, g) = euler_genus(d).unwrap();
            let r = filling_report(d).unwrap().r_required;
            let h = h1_sigma(d, Ring::Z).unwrap();
            for id in 0..d.triple_points() {
                for choice in PipeChoice::all() {
                    let e = handle_pipe(d, id, choice).unwrap();
                    assert_eq!(euler_genus(&e).unwrap().1, g + 1, "{choice:?}");
                    assert_eq!(e.triple_points(), d.triple_points() + 2);
                    assert_eq!(filling_report(&e).unwrap().r_required, r);
                    assert_eq!(h1_sigma(&e, Ring::Z).unwrap(), h, "{choice:?}");
                }
            }
        }
    }

    #[test]
    fn bad_triple_point() {
        let d = &enumerate(&EnumSpec::new(1)).unwrap().diagrams[0];
        assert_eq!(
            handle_pipe(d, 1, PipeChoice::default()),
            Err(Error::NoSuchTriplePoint { id: 1, q: 1 })
        );
    }
}

//! Finite covers of a diagram along permutation representations of the
//! dual-loop presentation.
//!
//! A lifted dart `(x, i)` (dart `x` on sheet `i`) has index `i * 4n + x`.

use serde::Serialize;

use crate::complex::build_quotient_unchecked;
use crate::diagram::{validate, Condition, Dart, JohanssonDiagram, Mode};
use crate::error::{Error, Result};
use crate::group::{
    paper_to_cw_words, pi1_cw, pi1_paper_unchecked, FiniteGroup, GroupPresentation, RelatorKind,
    Word,
};
use crate::surface::surface_components;

/// Permutations of `0..m` assigned to named generators. Text form is one
/// based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PermRep {
    pub sheets: usize,
    pub names: Vec<String>,
    /// `images[g][i]` is the sheet reached from sheet `i` along generator `g`.
    pub images: Vec<Vec<usize>>,
}

fn rep_err(line: usize, msg: impl std::fmt::Display) -> Error {
    Error::Rep(format!("line {line}: {msg}"))
}

impl PermRep {
    pub fn trivial(names: &[String], sheets: usize) -> Self {
        PermRep {
            sheets,
            names: names.to_vec(),
            images: vec![(0..sheets).collect(); names.len()],
        }
    }

    /// Representation through a permutation group's action on its points.
    pub fn from_hom(p: &GroupPresentation, g: &FiniteGroup, images: &[usize]) -> Result<Self> {
        let perms = g
            .perms
            .as_ref()
            .ok_or_else(|| Error::Rep(format!("{} has no permutation action", g.name)))?;
        Ok(PermRep {
            sheets: perms[0].len(),
            names: p.generators.clone(),
            images: images.iter().map(|&e| perms[e].clone()).collect(),
        })
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        match lines.next() {
            Some((_, "rep v1")) => {}
            Some((n, l)) => return Err(rep_err(n, format!("expected `rep v1`, found {l:?}"))),
            None => return Err(rep_err(1, "empty rep file")),
        }
        let (n, l) = lines
            .next()
            .ok_or_else(|| rep_err(2, "missing `sheets` line"))?;
        let sheets: usize = l
            .strip_prefix("sheets")
            .and_then(|s| s.trim().parse().ok())
            .filter(|&m| m >= 1)
            .ok_or_else(|| rep_err(n, format!("expected `sheets <m>`, found {l:?}")))?;
        let mut names = Vec::new();
        let mut images = Vec::new();
        for (n, l) in lines {
            let mut toks = l.split_whitespace();
            let name = toks.next().expect("nonempty line").to_string();
            let vals: Vec<usize> = toks
                .map(|t| {
                    t.parse::<usize>()
                        .map_err(|_| rep_err(n, format!("bad integer {t:?}")))
                })
                .collect::<Result<_>>()?;
            if vals.len() != sheets {
                return Err(rep_err(
                    n,
                    format!("{name} has {} images, expected {sheets}", vals.len()),
                ));
            }
            let perm: Vec<usize> = vals
                .iter()
                .map(|&v| v.checked_sub(1).filter(|&v| v < sheets))
                .collect::<Option<_>>()
                .ok_or_else(|| rep_err(n, format!("{name}: images must lie in 1..={sheets}")))?;
            let mut seen = vec![false; sheets];
            for &v in &perm {
                if std::mem::replace(&mut seen[v], true) {
                    return Err(rep_err(n, format!("{name} is not a permutation")));
                }
            }
            names.push(name);
            images.push(perm);
        }
        Ok(PermRep {
            sheets,
            names,
            images,
        })
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("rep v1\nsheets {}\n", self.sheets);
        for (name, perm) in self.names.iter().zip(&self.images) {
            s.push_str(name);
            for &v in perm {
                s.push_str(&format!(" {}", v + 1));
            }
            s.push('\n');
        }
        s
    }

    fn inverse(&self, g: usize) -> Vec<usize> {
        let mut inv = vec![0; self.sheets];
        for (i, &j) in self.images[g].iter().enumerate() {
            inv[j] = i;
        }
        inv
    }

    /// Sheet reached from `sheet` along a word read left to right.
    pub fn act(&self, w: &[i32], sheet: usize) -> usize {
        w.iter().fold(sheet, |i, &x| {
            let g = x.unsigned_abs() as usize - 1;
            if x > 0 {
                self.images[g][i]
            } else {
                self.images[g].iter().position(|&j| j == i).unwrap()
            }
        })
    }

    fn check_against(&self, p: &GroupPresentation) -> Result<()> {
        if self.names != p.generators {
            return Err(Error::Rep(format!(
                "generators {:?} do not match the presentation's {:?}",
                self.names, p.generators
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RepVerdict {
    pub valid: bool,
    /// First relator not sent to the identity.
    pub failing: Option<FailingRelator>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FailingRelator {
    pub index: usize,
    pub kind: RelatorKind,
    pub word: Word,
}

fn check_relators(p: &GroupPresentation, rep: &PermRep) -> Result<RepVerdict> {
    rep.check_against(p)?;
    for (index, w) in p.relators.iter().enumerate() {
        if (0..rep.sheets).any(|i| rep.act(w, i) != i) {
            return Ok(RepVerdict {
                valid: false,
                failing: Some(FailingRelator {
                    index,
                    kind: p.kinds[index],
                    word: w.clone(),
                }),
            });
        }
    }
    Ok(RepVerdict {
        valid: true,
        failing: None,
    })
}

/// Checks that a representation on the dual-loop generators kills every
/// relator.
pub fn validate_rep(d: &JohanssonDiagram, rep: &PermRep) -> Result<RepVerdict> {
    validate(d, Mode::Strict).into_result()?;
    check_relators(&pi1_paper_unchecked(d), rep)
}

/// Converts a representation on the cellular generators (`x1..`) into one on
/// the dual-loop generators. The input must kill the cellular relators.
pub fn rep_from_cw(d: &JohanssonDiagram, cw_rep: &PermRep) -> Result<PermRep> {
    validate(d, Mode::Strict).into_result()?;
    let cw = pi1_cw(&build_quotient_unchecked(d));
    let v = check_relators(&cw, cw_rep)?;
    if let Some(f) = v.failing {
        return Err(Error::Rep(format!(
            "cellular relator {} is not killed",
            f.index + 1
        )));
    }
    let words = paper_to_cw_words(d)?;
    let p = pi1_paper_unchecked(d);
    let images = words
        .iter()
        .map(|w| (0..cw_rep.sheets).map(|i| cw_rep.act(w, i)).collect())
        .collect();
    Ok(PermRep {
        sheets: cw_rep.sheets,
        names: p.generators,
        images,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoverComponent {
    pub crossings: usize,
    pub triple_points: usize,
    pub euler_characteristic: i64,
    pub genus: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct CoveringDiagram {
    pub sheets: usize,
    pub base_darts: usize,
    pub diagram: JohanssonDiagram,
    pub components: Vec<CoverComponent>,
    pub euler_characteristic: i64,
    pub triple_points: usize,
}

impl CoveringDiagram {
    pub fn project(&self, x: Dart) -> Dart {
        x % self.base_darts
    }

    pub fn sheet(&self, x: Dart) -> usize {
        x / self.base_darts
    }
}

const UNSET: usize = usize::MAX;

/// Lifts the diagram to the cover determined by `rep`, then re-validates
/// the lift component by component.
pub fn lift_diagram(d: &JohanssonDiagram, rep: &PermRep) -> Result<CoveringDiagram> {
    validate(d, Mode::Strict).into_result()?;
    let p = pi1_paper_unchecked(d);
    let verdict = check_relators(&p, rep)?;
    if let Some(f) = verdict.failing {
        return Err(Error::Rep(format!(
            "relator {} ({:?}) is not sent to the identity",
            f.index + 1,
            f.kind
        )));
    }
    let basing = p.basing.as_ref().expect("basing data");
    let n = d.darts();
    let m = rep.sheets;
    let lift = |x: Dart, i: usize| i * n + x;
    let ns = basing.tree.cotree.len();

    let mut theta = vec![UNSET; n * m];
    for x in 0..n {
        let voltage = basing.tree.cotree_index[x].map(|g| {
            if x < d.theta(x) {
                rep.images[g].clone()
            } else {
                rep.inverse(g)
            }
        });
        for i in 0..m {
            let j = voltage.as_ref().map_or(i, |v| v[i]);
            theta[lift(x, i)] = lift(d.theta(x), j);
        }
    }
    let adv = |y: usize| {
        let t = theta[y];
        let (x, i) = (t % n, t / n);
        lift(crate::diagram::strand_partner(x), i)
    };

    let mut tau = vec![UNSET; n * m];
    let curves = &basing.curves;
    for (c, curve) in curves.iter().enumerate() {
        let b = curve.basepoint();
        let a = &rep.images[ns + c];
        for i in 0..m {
            let mut y = lift(b, i);
            let mut z = lift(d.tau(b), a[i]);
            for _ in 0..curve.darts.len() {
                if tau[y] != UNSET && tau[y] != z {
                    return Err(Error::Lift {
                        claim: "sistering is well defined",
                        msg: format!("lifted dart {y} receives sisters {} and {z}", tau[y]),
                    });
                }
                tau[y] = z;
                y = adv(y);
                z = adv(z);
            }
            let i2 = y / n;
            if z != lift(d.tau(b), a[i2]) {
                return Err(Error::Lift {
                    claim: "sistering is well defined",
                    msg: format!(
                        "propagation around curve {c} from sheet {i} closes at {z}, not at the seed"
                    ),
                });
            }
        }
    }
    // reversed curves inherit the sistering through the edge involution
    let seeded = tau.clone();
    for y in 0..n * m {
        if seeded[y] == UNSET && seeded[theta[y]] != UNSET {
            tau[y] = theta[seeded[theta[y]]];
        }
    }
    if let Some(y) = tau.iter().position(|&t| t == UNSET) {
        return Err(Error::Lift {
            claim: "sistering is well defined",
            msg: format!("lifted dart {y} has no sister"),
        });
    }
    if let Some(y) = (0..n * m).find(|&y| tau[tau[y]] != y) {
        return Err(Error::Lift {
            claim: "sistering is an involution",
            msg: format!(
                "lifted dart {y} maps to {} which maps to {}",
                tau[y], tau[tau[y]]
            ),
        });
    }

    let diagram = JohanssonDiagram::from_arrays(theta, tau)?;
    let report = validate(&diagram, Mode::Components);
    if let Some(v) = report.first() {
        let claim = match v.condition {
            Condition::V2 => "sistering is an involution",
            Condition::V6 => "sistered points are related in triplets",
            _ => "lift is a diagram",
        };
        return Err(Error::Lift {
            claim,
            msg: format!("{}: {}", v.condition, v.message),
        });
    }
    let comps = diagram.map_components();
    let census = surface_components(&diagram);
    let components: Vec<CoverComponent> = comps
        .iter()
        .zip(census)
        .map(|(c, (chi, genus))| CoverComponent {
            crossings: c.len(),
            triple_points: c.len() / 3,
            euler_characteristic: chi,
            genus,
        })
        .collect();
    let euler_characteristic = components.iter().map(|c| c.euler_characteristic).sum();
    Ok(CoveringDiagram {
        sheets: m,
        base_darts: n,
        triple_points: diagram.triple_points(),
        diagram,
        components,
        euler_characteristic,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{isomorphic, strand_partner};
    use crate::group::{for_each_hom, pi1_paper};
    use crate::search::{enumerate, EnumSpec};
    use crate::surface::euler_genus;

    fn sample() -> Vec<JohanssonDiagram> {
        let mut v = enumerate(&EnumSpec::new(1)).unwrap().diagrams;
        v.extend(
            enumerate(&EnumSpec::new(2))
                .unwrap()
                .diagrams
                .into_iter()
                .step_by(50)
                .take(20),
        );
        v
    }

    #[test]
    fn trivial_reps() {
        for d in sample() {
            let p = pi1_paper(&d).unwrap();
            let one = lift_diagram(&d, &PermRep::trivial(&p.generators, 1)).unwrap();
            assert!(isomorphic(&one.diagram, &d, false).is_isomorphic());
            let two = lift_diagram(&d, &PermRep::trivial(&p.generators, 2)).unwrap();
            assert_eq!(two.components.len(), 2);
            let (chi, _) = euler_genus(&d).unwrap();
            assert_eq!(two.euler_characteristic, 2 * chi);
            assert_eq!(two.triple_points, 2 * d.triple_points());
        }
    }

    #[test]
    fn lifts_of_cyclic_homs_project() {
        for d in sample() {
            let p = pi1_paper(&d).unwrap();
            for g in [FiniteGroup::cyclic(2), FiniteGroup::cyclic(3)] {
                for_each_hom(&p, &g, |img| {
                    let rep = PermRep::from_hom(&p, &g, img).unwrap();
                    assert!(validate_rep(&d, &rep).unwrap().valid);
                    let cov = lift_diagram(&d, &rep).unwrap();
                    let (chi, _) = euler_genus(&d).unwrap();
                    assert_eq!(cov.euler_characteristic, rep.sheets as i64 * chi);
                    let l = &cov.diagram;
                    for y in 0..l.darts() {
                        assert_eq!(cov.project(l.theta(y)), d.theta(cov.project(y)));
                        assert_eq!(cov.project(l.tau(y)), d.tau(cov.project(y)));
                        assert_eq!(
                            cov.project(strand_partner(y)),
                            strand_partner(cov.project(y))
                        );
                    }
                    true
                })
                .unwrap();
            }
        }
    }

    #[test]
    fn mutated_rep_is_rejected() {
        let d = &enumerate(&EnumSpec::new(1)).unwrap().diagrams[0];
        let p = pi1_paper(d).unwrap();
        let mut rep = PermRep::trivial(&p.generators, 2);
        let r1 = p.kinds.iter().position(|&k| k == RelatorKind::R1).unwrap();
        let g = p.relators[r1][0].unsigned_abs() as usize - 1;
        rep.images[g] = vec![1, 0];
        let v = validate_rep(d, &rep).unwrap();
        assert!(!v.valid);
        assert!(lift_diagram(d, &rep).is_err());
        let text = rep.to_text();
        assert_eq!(PermRep::parse(&text).unwrap(), rep);
        assert!(PermRep::parse("rep v1\nsheets 2\ns1 1 1\n").is_err());
        let mut short = rep.clone();
        short.names.pop();
        short.images.pop();
        assert!(validate_rep(d, &short).is_err());
    }

    #[test]
    fn cellular_adapter() {
        for d in sample().into_iter().take(10) {
            let cw = pi1_cw(&build_quotient_unchecked(&d));
            let g = FiniteGroup::symmetric3();
            for_each_hom(&cw, &g, |img| {
                let rep = PermRep::from_hom(&cw, &g, img).unwrap();
                let prep = rep_from_cw(&d, &rep).unwrap();
                assert!(validate_rep(&d, &prep).unwrap().valid);
                lift_diagram(&d, &prep).unwrap();
                true
            })
            .unwrap();
        }
    }
}

//! Triple point bounds, diagram certification, and assembly of triple point
//! spectra from seed diagrams and lower-bound rules.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::complex::{build_quotient_unchecked, r_required};
use crate::diagram::{curves_unchecked, validate, JohanssonDiagram, Mode};
use crate::error::{Error, Result};
use crate::group::{h1_paper, pi1_cw, Ring};
use crate::surface::{
    checkerboard_unchecked, diagram_class_mod2, euler_genus_unchecked, surface_homology_unchecked,
    trace_faces,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Assumption {
    /// The surface fills the ambient manifold.
    Filling,
    /// Genus zero domains carry an even number of triple points.
    SphereDomainParity,
    /// The ambient manifold is checkered by the surface.
    Checkered,
    /// The ambient manifold is a homology 3-sphere with `Z/2` coefficients.
    Z2HomologySphereTarget,
}

impl Assumption {
    pub fn tag(self) -> &'static str {
        match self {
            Assumption::Filling => "filling",
            Assumption::SphereDomainParity => "sphere-domain-parity",
            Assumption::Checkered => "checkered",
            Assumption::Z2HomologySphereTarget => "z2-homology-sphere-target",
        }
    }

    /// Parses a comma separated tag list.
    pub fn parse_list(s: &str) -> Result<Vec<Assumption>> {
        let mut v: Vec<Assumption> = s
            .split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(str::parse)
            .collect::<Result<_>>()?;
        v.sort();
        v.dedup();
        Ok(v)
    }
}

impl FromStr for Assumption {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "filling" => Assumption::Filling,
            "sphere-domain-parity" | "parity" | "g0-parity" => Assumption::SphereDomainParity,
            "checkered" => Assumption::Checkered,
            "z2-homology-sphere-target" | "z2hs" => Assumption::Z2HomologySphereTarget,
            other => return Err(Error::UnknownAssumption(other.to_string())),
        })
    }
}

impl fmt::Display for Assumption {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundCertificate {
    pub genus: usize,
    pub assumptions: Vec<Assumption>,
    pub bound: usize,
    /// One line per rule that was applied, with the bound after it.
    pub trace: Vec<String>,
}

fn round_up_even(x: usize) -> usize {
    x + x % 2
}

/// Lower bound for the number of triple points of a genus `g` surface under
/// the given assumptions.
pub fn lower_bound(g: usize, assumptions: &[Assumption]) -> BoundCertificate {
    let has = |a| assumptions.contains(&a);
    let mut bound = 0usize;
    let mut trace = Vec::new();
    if has(Assumption::Filling) {
        bound = 1.max((2 * g).saturating_sub(1));
        trace.push(format!("filling: at least max(1, 2g-1) = {bound}"));
    }
    if has(Assumption::SphereDomainParity) {
        if g == 0 {
            bound = round_up_even(bound);
            trace.push(format!("sphere-domain-parity: even, so {bound}"));
        } else {
            trace.push("sphere-domain-parity: not applicable for g > 0".into());
        }
    }
    if has(Assumption::Checkered) {
        bound = round_up_even(bound.max(2 * g));
        trace.push(format!("checkered: even and at least 2g, so {bound}"));
    }
    if has(Assumption::Z2HomologySphereTarget) {
        bound = round_up_even(bound.max(2 * g + 2));
        trace.push(format!(
            "z2-homology-sphere-target: even and at least 2g+2, so {bound}"
        ));
    }
    let mut assumptions = assumptions.to_vec();
    assumptions.sort();
    assumptions.dedup();
    BoundCertificate {
        genus: g,
        assumptions,
        bound,
        trace,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CertifyReport {
    pub g: usize,
    pub q: usize,
    pub k: usize,
    pub faces: usize,
    pub chi: i64,
    pub r_required: i64,
    pub checkered: bool,
    pub h1: Vec<String>,
    pub h1_z2: Vec<String>,
    pub cannot_fill_any_manifold: bool,
    pub cannot_fill_z2_homology_sphere: bool,
    /// Checkered diagrams have an even number of triple points.
    pub parity_consistent: bool,
    /// Checkerboard, vanishing diagram class and vanishing tableau column
    /// sums agree.
    pub checker_criteria_agree: bool,
    /// A checkered diagram with `q = 2g` has nonzero first homology mod 2.
    pub rank_consistent: bool,
    pub verdicts: Vec<String>,
}

impl CertifyReport {
    pub fn consistent(&self) -> bool {
        self.parity_consistent && self.checker_criteria_agree && self.rank_consistent
    }
}

pub fn certify(d: &JohanssonDiagram) -> Result<CertifyReport> {
    validate(d, Mode::Strict).into_result()?;
    let (chi, g) = euler_genus_unchecked(d);
    let q = d.triple_points();
    let faces = trace_faces(d);
    let checkered = checkerboard_unchecked(d, &faces).is_checkered();
    let cw = pi1_cw(&build_quotient_unchecked(d));
    let h1 = cw.abelian_invariants(Ring::Z);
    let h1_z2 = cw.abelian_invariants(Ring::Z2);
    let hs = surface_homology_unchecked(d, Ring::Z2);
    let class_zero = diagram_class_mod2(&hs).iter().all(|&x| x == 0);
    let (tab, _) = h1_paper(d, Ring::Z2)?;
    let sums_zero = tab.ar3_column_sums_mod2().iter().all(|&x| x == 0);
    let r = r_required(g, q);

    let cannot_fill_any_manifold = r < 1;
    let cannot_fill_z2_homology_sphere = !h1_z2.is_trivial();
    let mut verdicts = Vec::new();
    if cannot_fill_any_manifold {
        verdicts.push(format!("cannot fill any manifold: r_required = {r} < 1"));
    }
    if cannot_fill_z2_homology_sphere {
        verdicts.push(format!(
            "cannot fill any Z/2-homology 3-sphere: H1(Z/2) = {h1_z2}"
        ));
    }
    Ok(CertifyReport {
        g,
        q,
        k: curves_unchecked(d).len() / 2,
        faces: faces.len(),
        chi,
        r_required: r,
        checkered,
        h1: h1.labels(),
        h1_z2: h1_z2.labels(),
        cannot_fill_any_manifold,
        cannot_fill_z2_homology_sphere,
        parity_consistent: !checkered || q.is_multiple_of(2),
        checker_criteria_agree: checkered == class_zero && class_zero == sums_zero,
        rank_consistent: !(checkered && q == 2 * g) || !h1_z2.is_trivial(),
        verdicts,
    })
}

/// A known surface used as an upper bound: either a diagram or an abstract
/// `(genus, q)` claim.
#[derive(Debug, Clone)]
pub enum Seed {
    Diagram {
        name: String,
        diagram: JohanssonDiagram,
    },
    Abstract {
        name: String,
        genus: usize,
        q: usize,
    },
}

impl Seed {
    pub fn diagram(name: impl Into<String>, diagram: JohanssonDiagram) -> Result<Self> {
        validate(&diagram, Mode::Strict).into_result()?;
        Ok(Seed::Diagram {
            name: name.into(),
            diagram,
        })
    }

    pub fn name(&self) -> &str {
        match self {
            Seed::Diagram { name, .. } | Seed::Abstract { name, .. } => name,
        }
    }

    /// `(genus, q)`.
    pub fn counts(&self) -> (usize, usize) {
        match self {
            Seed::Diagram { diagram, .. } => {
                (euler_genus_unchecked(diagram).1, diagram.triple_points())
            }
            Seed::Abstract { genus, q, .. } => (*genus, *q),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpectrumEntry {
    pub genus: usize,
    pub lower: usize,
    pub upper: Option<usize>,
    /// Set when both bounds agree.
    pub value: Option<usize>,
    pub lower_certificate: BoundCertificate,
    /// Seed and number of pipings realizing the upper bound.
    pub upper_source: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpectrumTable {
    pub entries: Vec<SpectrumEntry>,
}

impl SpectrumTable {
    /// A table of pinned values without certificates.
    pub fn from_values(values: &[usize]) -> Self {
        SpectrumTable {
            entries: values
                .iter()
                .enumerate()
                .map(|(g, &t)| SpectrumEntry {
                    genus: g,
                    lower: t,
                    upper: Some(t),
                    value: Some(t),
                    lower_certificate: BoundCertificate {
                        genus: g,
                        assumptions: Vec::new(),
                        bound: t,
                        trace: vec!["given".into()],
                    },
                    upper_source: Some("given".into()),
                })
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// The pinned prefix of the table.
    pub fn values(&self) -> Vec<usize> {
        self.entries.iter().map_while(|e| e.value).collect()
    }

    fn value(&self, g: usize) -> Result<usize> {
        let e = self.entries.get(g).ok_or(Error::TableIndex {
            genus: g,
            len: self.len(),
        })?;
        e.value
            .ok_or_else(|| Error::Unsupported(format!("entry for genus {g} is not pinned")))
    }

    /// Genera `g` where `t_{g+1} > t_g + 2` among pinned entries.
    pub fn inequality_violations(&self) -> Vec<usize> {
        let v = self.values();
        (0..v.len().saturating_sub(1))
            .filter(|&g| v[g + 1] > v[g] + 2)
            .collect()
    }

    /// Region counts `t_g + 2 - 2g` of the pinned prefix.
    pub fn regions(&self) -> Vec<i64> {
        self.values()
            .iter()
            .enumerate()
            .map(|(g, &t)| r_required(g, t))
            .collect()
    }
}

/// Whether genus `g >= 1` is exceptional: `t_g < t_{g-1} + 2`.
pub fn is_exceptional(t: &SpectrumTable, g: usize) -> Result<bool> {
    if g == 0 {
        return Err(Error::TableIndex {
            genus: 0,
            len: t.len(),
        });
    }
    Ok(t.value(g)? < t.value(g - 1)? + 2)
}

/// Highest exceptional genus in the pinned prefix, 0 if none.
pub fn height(t: &SpectrumTable) -> usize {
    let n = t.values().len();
    (1..n)
        .filter(|&g| is_exceptional(t, g).unwrap_or(false))
        .max()
        .unwrap_or(0)
}

/// Combines seed upper bounds (each seed piped up to the target genus) with
/// rule-based lower bounds for `g = 0..=max_genus`.
pub fn assemble_spectrum(
    seeds: &[Seed],
    rules: &[Assumption],
    max_genus: usize,
) -> Result<SpectrumTable> {
    for s in seeds {
        if let Seed::Diagram { diagram, .. } = s {
            validate(diagram, Mode::Strict).into_result()?;
        }
    }
    let entries = (0..=max_genus)
        .map(|g| {
            let cert = lower_bound(g, rules);
            let best = seeds
                .iter()
                .filter_map(|s| {
                    let (gs, qs) = s.counts();
                    (gs <= g).then(|| (qs + 2 * (g - gs), s.name(), g - gs))
                })
                .min_by_key(|&(u, _, _)| u);
            let upper = best.map(|b| b.0);
            SpectrumEntry {
                genus: g,
                lower: cert.bound,
                upper,
                value: upper.filter(|&u| u == cert.bound),
                upper_source: best.map(|(_, name, k)| format!("{name} piped {k} time(s)")),
                lower_certificate: cert,
            }
        })
        .collect();
    Ok(SpectrumTable { entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::{enumerate, EnumSpec};

    const S3: [Assumption; 2] = [Assumption::Filling, Assumption::Z2HomologySphereTarget];

    #[test]
    fn bounds() {
        assert_eq!(lower_bound(2, &S3).bound, 6);
        assert_eq!(lower_bound(1, &[Assumption::Filling]).bound, 1);
        assert_eq!(
            lower_bound(0, &[Assumption::Filling, Assumption::SphereDomainParity]).bound,
            2
        );
        assert_eq!(lower_bound(3, &[Assumption::Filling]).bound, 5);
        for g in 0..=10 {
            assert_eq!(lower_bound(g, &S3).bound, 2 + 2 * g);
        }
        assert!(matches!(
            Assumption::parse_list("filling,bogus"),
            Err(Error::UnknownAssumption(_))
        ));
        assert_eq!(
            Assumption::parse_list("z2hs, filling").unwrap(),
            S3.to_vec()
        );
    }

    #[test]
    fn exceptional_and_height() {
        let t = SpectrumTable::from_values(&[2, 1, 3, 5]);
        let ex: Vec<bool> = (1..4).map(|g| is_exceptional(&t, g).unwrap()).collect();
        assert_eq!(ex, vec![true, false, false]);
        assert_eq!(height(&t), 1);
        let t = SpectrumTable::from_values(&[2, 4, 6, 8]);
        assert_eq!(height(&t), 0);
        assert!(t.inequality_violations().is_empty());
        assert_eq!(
            SpectrumTable::from_values(&[2, 5]).inequality_violations(),
            vec![0]
        );
        assert!(is_exceptional(&t, 4).is_err());
        // exceptional genera are exactly the strict drops in region count
        let t = SpectrumTable::from_values(&[2, 1, 3, 5, 7]);
        let r = t.regions();
        for g in 1..r.len() {
            assert_eq!(is_exceptional(&t, g).unwrap(), r[g] < r[g - 1]);
        }
    }

    #[test]
    fn sphere_spectrum_from_abstract_seed() {
        let seed = Seed::Abstract {
            name: "t0".into(),
            genus: 0,
            q: 2,
        };
        let t = assemble_spectrum(&[seed], &S3, 3).unwrap();
        assert_eq!(t.values(), vec![2, 4, 6, 8]);
        assert_eq!(height(&t), 0);
        let none = assemble_spectrum(&[], &S3, 3).unwrap();
        assert!(none
            .entries
            .iter()
            .all(|e| e.upper.is_none() && e.value.is_none()));
    }

    #[test]
    fn certify_q1_corpus() {
        for d in enumerate(&EnumSpec::new(1)).unwrap().diagrams {
            let c = certify(&d).unwrap();
            assert!(!c.checkered);
            assert!(c.consistent());
            assert_eq!(c.r_required, c.faces as i64 - 2);
        }
    }
}

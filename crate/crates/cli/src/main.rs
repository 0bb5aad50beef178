mod input;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::result::Result;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dehn_core::diagram::curve_lengths;
use dehn_core::group::{h1_sigma, Word};
use dehn_core::spectrum::SpectrumTable;
use dehn_core::*;
use serde_json::{json, Value};

use input::{expand_inputs, load_diagram, read_text, Failure};
use report::Output;

#[derive(Parser)]
#[command(name = "dehn", version, about = "Johansson diagrams of Dehn surfaces")]
struct Cli {
    /// Emit JSON instead of human readable text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Batch {
    /// Diagram files or directories of `.jd` files. Defaults to `$JD_CORPUS`.
    paths: Vec<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Cw,
    Paper,
}

#[derive(Clone, Copy, ValueEnum)]
enum RingArg {
    Z,
    Z2,
}

impl From<RingArg> for Ring {
    fn from(r: RingArg) -> Ring {
        match r {
            RingArg::Z => Ring::Z,
            RingArg::Z2 => Ring::Z2,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Check the structural conditions V1-V7.
    Validate(Batch),
    /// Genus, triple points, curve pairs, faces, Euler characteristic and
    /// required region count.
    Info(Batch),
    /// Face 2-coloring, or a witness that none exists.
    Checker { path: PathBuf },
    /// Presentation of the fundamental group of the quotient complex.
    Pi1 {
        path: PathBuf,
        #[arg(long, value_enum, default_value = "cw")]
        method: Method,
    },
    /// First homology of the quotient complex.
    Homology {
        path: PathBuf,
        #[arg(long, value_enum, default_value = "z")]
        ring: RingArg,
        #[arg(long, value_enum, default_value = "cw")]
        method: Method,
        /// Include the relation tableau (paper method only).
        #[arg(long)]
        tableau: bool,
    },
    /// Compare the two presentations by abelian invariants and hom counts.
    Agree { path: PathBuf },
    /// Lift the diagram along a permutation representation.
    Cover {
        path: PathBuf,
        /// Representation file in `rep v1` format.
        #[arg(long)]
        rep: PathBuf,
        /// Which presentation's generators the representation names.
        #[arg(long, value_enum, default_value = "paper")]
        generators: Method,
        /// Write the lifted diagram here instead of standard output.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Pipe a handle at one triple point.
    Pipe {
        path: PathBuf,
        /// Triple point index, in the order listed by `info`.
        #[arg(long)]
        triple: usize,
        /// Which of the three crossings receives the tube (0, 1 or 2).
        #[arg(long, default_value_t = 0)]
        piped: u8,
        /// Strand of the piped crossing that runs along the tube (0 or 1).
        #[arg(long, default_value_t = 0)]
        strand: u8,
        /// Put the tube on the other side of the piped sheet.
        #[arg(long)]
        upward: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Lower bound on the triple point number of a genus g filling surface.
    Bounds {
        #[arg(long)]
        genus: usize,
        /// Comma separated assumptions: filling, parity, checkered, z2hs.
        #[arg(long, default_value = "")]
        assume: String,
        /// Print the derivation.
        #[arg(long)]
        explain: bool,
    },
    /// Invariants plus the checks that tie them together.
    Certify(Batch),
    /// Exhaustive search for diagrams with q triple points.
    Enumerate {
        #[arg(long)]
        q: usize,
        #[arg(long)]
        genus: Option<usize>,
        #[arg(long)]
        checkered: Option<bool>,
        /// Required H1 over the integers, e.g. `Z` or `Z/3,Z`; `0` for trivial.
        #[arg(long)]
        h1: Option<String>,
        #[arg(long)]
        max_candidates: Option<u64>,
        #[arg(long)]
        max_results: Option<usize>,
        /// Seconds.
        #[arg(long)]
        time_limit: Option<f64>,
    },
    /// Assemble a triple point spectrum from seeds and bound rules.
    Spectrum {
        /// Comma separated diagram paths or `abstract:G:Q` entries.
        #[arg(long)]
        seeds: String,
        #[arg(long, default_value = "filling")]
        rules: String,
        #[arg(long)]
        max_genus: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = Output::new(cli.json);
    let code = match run(cli.command, &mut out) {
        Ok(code) => code,
        Err(f) => {
            out.error(&f);
            f.code
        }
    };
    ExitCode::from(code)
}

type Run = Result<u8, Failure>;

fn run(cmd: Command, out: &mut Output) -> Run {
    match cmd {
        Command::Validate(b) => batch(&b, out, validate_one),
        Command::Info(b) => batch(&b, out, info_one),
        Command::Certify(b) => batch(&b, out, certify_one),
        Command::Checker { path } => {
            let d = load_diagram(&path)?;
            let c = checkerboard(&d).map_err(Failure::from)?;
            let human = match &c {
                Checkerboard::Colored { coloring } => format!("checkered: yes\ncoloring: {}", join(coloring)),
                Checkerboard::NotCheckered { dart, faces } if faces[0] == faces[1] => format!(
                    "checkered: no\nwitness: face {} lies on both sides of dart {dart}",
                    faces[0]
                ),
                Checkerboard::NotCheckered { dart, faces } => format!(
                    "checkered: no\nwitness: faces {} and {} are forced to one color across dart {dart}",
                    faces[0], faces[1]
                ),
            };
            let mut v = serde_json::to_value(&c).unwrap();
            v["checkered"] = json!(c.is_checkered());
            out.item(v, human);
            Ok(0)
        }
        Command::Pi1 { path, method } => {
            let d = load_diagram(&path)?;
            let p = presentation(&d, method)?;
            let mut human = format!("generators: {}\n", p.generators.join(" "));
            for (w, k) in p.relators.iter().zip(&p.kinds) {
                human.push_str(&format!("{k:?}: {}\n", word_text(w, &p.generators)));
            }
            out.item(
                serde_json::to_value(&p).unwrap(),
                human.trim_end().to_string(),
            );
            Ok(0)
        }
        Command::Homology {
            path,
            ring,
            method,
            tableau,
        } => {
            let d = load_diagram(&path)?;
            let ring = Ring::from(ring);
            let (h, tab) = match method {
                Method::Cw => (presentation(&d, Method::Cw)?.abelian_invariants(ring), None),
                Method::Paper => {
                    let (t, h) = h1_paper(&d, ring).map_err(Failure::from)?;
                    (h, tableau.then_some(t))
                }
            };
            let mut v = json!({
                "ring": ring,
                "method": method_name(method),
                "factors": h.factors,
                "rank": h.rank,
                "labels": h.labels(),
            });
            let mut human = format!("H1 = {h}");
            if let Some(t) = tab {
                human.push_str(&format!("\ncolumns: {}", t.columns.join(" ")));
                for (name, block) in [("AR3", &t.ar3), ("AR2", &t.ar2)] {
                    for row in block {
                        human.push_str(&format!("\n{name}: {}", join(row)));
                    }
                }
                let sums = t.ar3_column_sums_mod2();
                let sums = if sums.is_empty() {
                    "none".to_string()
                } else {
                    join(&sums)
                };
                human.push_str(&format!("\nAR3 column sums mod 2: {sums}"));
                v["tableau"] = json!({
                    "columns": t.columns,
                    "ar3": t.ar3,
                    "ar2": t.ar2,
                    "ar3_column_sums_mod2": t.ar3_column_sums_mod2(),
                });
            }
            out.item(v, human);
            Ok(0)
        }
        Command::Agree { path } => {
            let d = load_diagram(&path)?;
            let cw = presentation(&d, Method::Cw)?;
            let paper = presentation(&d, Method::Paper)?;
            let a = presentations_agree(&cw, &paper);
            let mut human = format!(
                "consistent: {}\nH1(Z): {} | {}\nH1(Z/2): {} | {}",
                a.consistent, a.h1_z[0], a.h1_z[1], a.h1_z2[0], a.h1_z2[1]
            );
            for c in &a.counts {
                human.push_str(&format!("\nhom to {}: {} | {}", c.group, c.left, c.right));
            }
            if let Some(w) = &a.witness {
                human.push_str(&format!("\nwitness: {w}"));
            }
            out.item(serde_json::to_value(&a).unwrap(), human);
            Ok(if a.consistent { 0 } else { 1 })
        }
        Command::Cover {
            path,
            rep,
            generators,
            output,
        } => {
            let d = load_diagram(&path)?;
            let text = read_text(&rep)?;
            let mut r = PermRep::parse(&text).map_err(|e| Failure::at(&rep, e))?;
            if let Method::Cw = generators {
                r = covers::rep_from_cw(&d, &r).map_err(Failure::from)?;
            }
            let verdict = validate_rep(&d, &r).map_err(Failure::from)?;
            if !verdict.valid {
                let f = verdict.failing.as_ref().expect("failing relator");
                out.item(
                    serde_json::to_value(&verdict).unwrap(),
                    format!("representation fails relator {} ({:?})", f.index, f.kind),
                );
                return Ok(1);
            }
            let lift = lift_diagram(&d, &r).map_err(Failure::from)?;
            let mut human = format!(
                "# sheets {}\n# euler characteristic {}\n# triple points {}\n",
                lift.sheets, lift.euler_characteristic, lift.triple_points
            );
            for (i, c) in lift.components.iter().enumerate() {
                human.push_str(&format!(
                    "# component {i}: genus {}, {} triple points\n",
                    c.genus, c.triple_points
                ));
            }
            let jd = serialize_diagram(&lift.diagram);
            human.push_str(&write_or_inline(output.as_ref(), &jd)?);
            out.item(
                json!({
                    "valid": true,
                    "sheets": lift.sheets,
                    "euler_characteristic": lift.euler_characteristic,
                    "triple_points": lift.triple_points,
                    "components": lift.components,
                    "diagram": lift.diagram,
                }),
                human.trim_end().to_string(),
            );
            Ok(0)
        }
        Command::Pipe {
            path,
            triple,
            piped,
            strand,
            upward,
            output,
        } => {
            let d = load_diagram(&path)?;
            let choice = PipeChoice {
                piped,
                strand,
                upward,
            };
            let e = handle_pipe(&d, triple, choice).map_err(Failure::from)?;
            let (chi, g) = euler_genus(&e).map_err(Failure::from)?;
            let r = filling_report(&e).map_err(Failure::from)?.r_required;
            let jd = serialize_diagram(&e);
            let human = format!(
                "# g {g}\n# q {}\n# chi {chi}\n# r_required {r}\n{}",
                e.triple_points(),
                write_or_inline(output.as_ref(), &jd)?
            );
            out.item(
                json!({
                    "triple": triple,
                    "choice": choice,
                    "g": g,
                    "q": e.triple_points(),
                    "chi": chi,
                    "r_required": r,
                    "diagram": e,
                }),
                human.trim_end().to_string(),
            );
            Ok(0)
        }
        Command::Bounds {
            genus,
            assume,
            explain,
        } => {
            let rules = Assumption::parse_list(&assume).map_err(Failure::usage)?;
            let c = lower_bound(genus, &rules);
            let mut human = c.bound.to_string();
            if explain {
                for t in &c.trace {
                    human.push_str(&format!("\n  {t}"));
                }
            }
            out.item(serde_json::to_value(&c).unwrap(), human);
            Ok(0)
        }
        Command::Enumerate {
            q,
            genus,
            checkered,
            h1,
            max_candidates,
            max_results,
            time_limit,
        } => {
            let mut spec = EnumSpec::new(q);
            spec.genus = genus;
            spec.checkered = checkered;
            spec.h1 = h1.as_deref().map(parse_h1).transpose()?;
            if max_candidates.is_some() {
                spec.max_candidates = max_candidates;
            }
            spec.max_results = max_results;
            spec.time_limit = time_limit.map(Duration::from_secs_f64);
            let r = enumerate(&spec).map_err(Failure::usage)?;
            let mut human = String::new();
            for (i, d) in r.diagrams.iter().enumerate() {
                let (_, g) = euler_genus(d).map_err(Failure::from)?;
                let h = h1_sigma(d, Ring::Z).map_err(Failure::from)?;
                human.push_str(&format!(
                    "# class {i}: g {g}, H1 {h}\n{}\n",
                    serialize_diagram(d)
                ));
            }
            human.push_str(&format!(
                "# {} diagrams, {} classes, {} of {} candidates valid, search {}",
                r.diagrams.len(),
                r.classes,
                r.labeled_valid,
                r.candidates,
                if r.complete { "complete" } else { "incomplete" }
            ));
            let mut v = serde_json::to_value(&r).unwrap();
            v["count"] = json!(r.diagrams.len());
            out.item(v, human);
            Ok(0)
        }
        Command::Spectrum {
            seeds,
            rules,
            max_genus,
        } => {
            let seeds = parse_seeds(&seeds)?;
            let rules = Assumption::parse_list(&rules).map_err(Failure::usage)?;
            let t = assemble_spectrum(&seeds, &rules, max_genus).map_err(Failure::from)?;
            out.item(spectrum_json(&t), spectrum_text(&t));
            Ok(0)
        }
    }
}

fn batch(
    b: &Batch,
    out: &mut Output,
    one: fn(&JohanssonDiagram, &mut Value, &mut String) -> u8,
) -> Run {
    let (files, single) = expand_inputs(&b.paths)?;
    let mut code = 0;
    for path in &files {
        let shown = path.display().to_string();
        let mut v = json!({ "path": shown });
        let mut human = if single {
            String::new()
        } else {
            format!("== {shown}\n")
        };
        match load_diagram(path) {
            Ok(d) => code = code.max(one(&d, &mut v, &mut human)),
            Err(f) => {
                v["error"] = json!(f.message);
                eprintln!("error: {}", f.message);
                code = code.max(f.code);
            }
        }
        out.batch_item(v, human.trim_end().to_string());
    }
    out.finish_batch(single);
    Ok(code)
}

fn merge(v: &mut Value, extra: Value) {
    if let (Value::Object(a), Value::Object(b)) = (v, extra) {
        a.extend(b);
    }
}

fn validate_one(d: &JohanssonDiagram, v: &mut Value, human: &mut String) -> u8 {
    let r = validate(d, Mode::Strict);
    merge(v, serde_json::to_value(&r).unwrap());
    if let Some(s) = &r.stats {
        human.push_str(&format!(
            "valid (q {}, k {}, components {})",
            s.q, s.k, s.components
        ));
        0
    } else {
        human.push_str("invalid");
        for viol in &r.violations {
            human.push_str(&format!(
                "\n  {}: {} (witness {})",
                viol.condition,
                viol.message,
                join(&viol.witness)
            ));
        }
        1
    }
}

fn invalid(r: &ValidationReport, v: &mut Value, human: &mut String) -> u8 {
    let f = r.first().expect("violation");
    v["error"] = json!(format!("diagram violates {}: {}", f.condition, f.message));
    human.push_str(&format!("invalid: {} {}", f.condition, f.message));
    1
}

fn info_one(d: &JohanssonDiagram, v: &mut Value, human: &mut String) -> u8 {
    let r = validate(d, Mode::Strict);
    let Some(stats) = &r.stats else {
        return invalid(&r, v, human);
    };
    let (chi, g) = euler_genus(d).expect("valid");
    let faces = trace_faces(d);
    let fr = filling_report(d).expect("valid");
    let tps = triplets(d).expect("valid");
    let lens = curve_lengths(d);
    merge(
        v,
        json!({
            "g": g,
            "q": stats.q,
            "k": stats.k,
            "faces": faces.len(),
            "chi": chi,
            "r_required": fr.r_required,
            "face_sizes": faces.cycle_type(),
            "curve_lengths": lens,
            "triplets": tps,
            "filling_conditions": fr.conditions,
        }),
    );
    human.push_str(&format!(
        "g {g}\nq {}\nk {}\nF {}\nchi {chi}\nr_required {}\nface sizes {}\ncurve lengths {}",
        stats.q,
        stats.k,
        faces.len(),
        fr.r_required,
        join(&faces.cycle_type()),
        join(&lens)
    ));
    for (i, t) in tps.iter().enumerate() {
        human.push_str(&format!("\ntriple point {i}: crossings {}", join(t)));
    }
    for c in fr.conditions.iter().filter(|c| !c.pass) {
        human.push_str(&format!(
            "\nnecessary filling condition fails: {} ({})",
            c.name, c.witness
        ));
    }
    0
}

fn certify_one(d: &JohanssonDiagram, v: &mut Value, human: &mut String) -> u8 {
    let r = validate(d, Mode::Strict);
    if !r.valid {
        return invalid(&r, v, human);
    }
    let c = certify(d).expect("valid");
    merge(v, serde_json::to_value(&c).unwrap());
    v["consistent"] = json!(c.consistent());
    let h = |l: &[String]| {
        if l.is_empty() {
            "0".to_string()
        } else {
            l.join(" + ")
        }
    };
    human.push_str(&format!(
        "g {}\nq {}\nk {}\nF {}\nchi {}\nr_required {}\ncheckered {}\nH1(Z) {}\nH1(Z/2) {}\nconsistent {}",
        c.g,
        c.q,
        c.k,
        c.faces,
        c.chi,
        c.r_required,
        c.checkered,
        h(&c.h1),
        h(&c.h1_z2),
        c.consistent()
    ));
    for verdict in &c.verdicts {
        human.push_str(&format!("\n{verdict}"));
    }
    if c.consistent() {
        0
    } else {
        1
    }
}

fn presentation(d: &JohanssonDiagram, m: Method) -> Result<GroupPresentation, Failure> {
    match m {
        Method::Cw => Ok(pi1_cw(&build_quotient(d).map_err(Failure::from)?)),
        Method::Paper => pi1_paper(d).map_err(Failure::from),
    }
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::Cw => "cw",
        Method::Paper => "paper",
    }
}

fn word_text(w: &Word, names: &[String]) -> String {
    w.iter()
        .map(|&x| {
            let n = &names[x.unsigned_abs() as usize - 1];
            if x < 0 {
                format!("{n}^-1")
            } else {
                n.clone()
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(T::to_string).collect::<Vec<_>>().join(" ")
}

fn write_or_inline(path: Option<&PathBuf>, text: &str) -> Result<String, Failure> {
    match path {
        Some(p) => {
            std::fs::write(p, text).map_err(|e| Failure::io(p, e))?;
            Ok(format!("# written to {}\n", p.display()))
        }
        None => Ok(text.to_string()),
    }
}

fn parse_h1(s: &str) -> Result<Vec<i64>, Failure> {
    let s = s.trim();
    if s == "0" || s.is_empty() {
        return Ok(Vec::new());
    }
    let mut v: Vec<i64> = s
        .split(',')
        .map(|t| match t.trim() {
            "Z" | "z" => Ok(0),
            t => t
                .strip_prefix("Z/")
                .or_else(|| t.strip_prefix("z/"))
                .and_then(|n| n.parse::<i64>().ok())
                .filter(|&n| n >= 2)
                .ok_or_else(|| Failure::usage(format!("bad H1 summand `{t}`"))),
        })
        .collect::<Result<_, _>>()?;
    // torsion first, in divisibility order, then free summands
    v.sort_by_key(|&f| if f == 0 { i64::MAX } else { f });
    Ok(v)
}

fn parse_seeds(s: &str) -> Result<Vec<Seed>, Failure> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            if let Some(rest) = t.strip_prefix("abstract:") {
                let nums: Vec<usize> = rest
                    .split(':')
                    .map(|x| {
                        x.parse()
                            .map_err(|_| Failure::usage(format!("bad seed `{t}`")))
                    })
                    .collect::<Result<_, _>>()?;
                let [genus, q] = nums[..] else {
                    return Err(Failure::usage(format!("seed `{t}` must be abstract:G:Q")));
                };
                Ok(Seed::Abstract {
                    name: t.to_string(),
                    genus,
                    q,
                })
            } else {
                let path = PathBuf::from(t);
                let d = load_diagram(&path)?;
                Seed::diagram(t, d).map_err(Failure::from)
            }
        })
        .collect()
}

fn spectrum_json(t: &SpectrumTable) -> Value {
    let exceptional: Vec<usize> = (1..t.values().len())
        .filter(|&g| is_exceptional(t, g).unwrap_or(false))
        .collect();
    json!({
        "entries": t.entries,
        "values": t.values(),
        "height": height(t),
        "exceptional": exceptional,
    })
}

fn spectrum_text(t: &SpectrumTable) -> String {
    let opt = |x: Option<usize>| x.map_or("-".to_string(), |v| v.to_string());
    let mut s = String::from("g\tlower\tupper\tvalue\tsource");
    for e in &t.entries {
        s.push_str(&format!(
            "\n{}\t{}\t{}\t{}\t{}",
            e.genus,
            e.lower,
            opt(e.upper),
            opt(e.value),
            e.upper_source.as_deref().unwrap_or("-")
        ));
    }
    s.push_str(&format!("\npinned {:?}\nheight {}", t.values(), height(t)));
    s
}

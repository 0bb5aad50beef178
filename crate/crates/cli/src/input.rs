//! Locating and reading input files.

use std::fmt::Display;
use std::path::{Path, PathBuf};

use dehn_core::{parse_diagram, Error, JohanssonDiagram};

pub const CORPUS_VAR: &str = "JD_CORPUS";

/// An error that ends the command with `code`.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn usage(e: impl Display) -> Self {
        Failure {
            code: 2,
            message: e.to_string(),
        }
    }

    pub fn io(path: &Path, e: impl Display) -> Self {
        Failure::usage(format!("{}: {e}", path.display()))
    }

    pub fn at(path: &Path, e: Error) -> Self {
        let mut f = Failure::from(e);
        f.message = format!("{}: {}", path.display(), f.message);
        f
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Invalid { .. } | Error::Lift { .. } => 1,
            _ => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

/// Finds `path` as given, or relative to `$JD_CORPUS`.
pub fn resolve(path: &Path) -> Result<PathBuf, Failure> {
    if path.exists() {
        return Ok(path.to_path_buf());
    }
    if path.is_relative() {
        if let Some(dir) = std::env::var_os(CORPUS_VAR) {
            let p = Path::new(&dir).join(path);
            if p.exists() {
                return Ok(p);
            }
        }
    }
    Err(Failure::io(path, "no such file or directory"))
}

pub fn read_text(path: &Path) -> Result<String, Failure> {
    let p = resolve(path)?;
    std::fs::read_to_string(&p).map_err(|e| Failure::io(&p, e))
}

pub fn load_diagram(path: &Path) -> Result<JohanssonDiagram, Failure> {
    let text = read_text(path)?;
    parse_diagram(&text).map_err(|e| Failure::at(path, e))
}

/// Expands directories into their `.jd` files (sorted). No paths means the
/// `$JD_CORPUS` directory. The flag is true for a single plain file.
pub fn expand_inputs(paths: &[PathBuf]) -> Result<(Vec<PathBuf>, bool), Failure> {
    let defaulted;
    let paths = if paths.is_empty() {
        let dir = std::env::var_os(CORPUS_VAR)
            .ok_or_else(|| Failure::usage(format!("no input given and {CORPUS_VAR} is not set")))?;
        defaulted = vec![PathBuf::from(dir)];
        &defaulted
    } else {
        paths
    };
    let mut files = Vec::new();
    let mut any_dir = false;
    for p in paths {
        let p = resolve(p)?;
        if p.is_dir() {
            any_dir = true;
            let mut found: Vec<PathBuf> = std::fs::read_dir(&p)
                .map_err(|e| Failure::io(&p, e))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|f| f.extension().is_some_and(|x| x == "jd"))
                .collect();
            found.sort();
            files.extend(found);
        } else {
            files.push(p);
        }
    }
    let single = files.len() == 1 && !any_dir;
    Ok((files, single))
}

//! Artifact emission: deterministic text formats, written through a
//! temp-and-rename step and tracked so a failed run leaves no partial
//! files behind.

use std::fs;
use std::path::{Path, PathBuf};

use findisp_core::{CurvePoint, Error, Result};

/// 17 significant digits: enough to round-trip every f64 exactly, so
/// identical inputs give byte-identical files.
pub fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

pub struct Artifacts {
    dir: PathBuf,
    written: Vec<PathBuf>,
}

impl Artifacts {
    pub fn new(dir: &Path) -> Result<Self> {
        fs::create_dir_all(dir)?;
        Ok(Self { dir: dir.to_path_buf(), written: Vec::new() })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn write_text(&mut self, name: &str, text: &str) -> Result<PathBuf> {
        let tmp = self.dir.join(format!(".{name}.tmp"));
        let along = self.dir.join(name);
        if let Err(e) = fs::write(&tmp, text) {
            let _ = fs::remove_file(&tmp);
            return Err(Error::Io(e));
        }
        if let Err(e) = fs::rename(&tmp, &along) {
            let _ = fs::remove_file(&tmp);
            return Err(Error::Io(e));
        }
        self.written.push(along.clone());
        Ok(along)
    }

    /// Best-effort removal of everything this run produced.
    pub fn discard(&mut self) {
        for p in self.written.drain(..) {
            let _ = fs::remove_file(p);
        }
    }
}

/// Dispersion-curve CSV. The header is part of the file contract; rows
/// must be sorted by kappa and every field finite.
pub fn curve_csv(points: &[CurvePoint]) -> Result<String> {
    if points.is_empty() {
        return Err(Error::invalid("empty curve: nothing to write".to_string()));
    }
    let mut out = String::from("kappa,omega,omega_inf,c_g,deviation_pct\n");
    let mut prev = f64::NEG_INFINITY;
    for p in points {
        for (v, name) in [
            (p.kappa, "kappa"),
            (p.omega, "omega"),
            (p.omega_inf, "omega_inf"),
            (p.c_g, "c_g"),
            (p.deviation_pct, "deviation_pct"),
        ] {
            if !v.is_finite() {
                return Err(Error::invalid(format!("non-finite {name} in curve row")));
            }
        }
        if p.kappa < prev {
            return Err(Error::invalid(
                "curve samples must be sorted by kappa".to_string(),
            ));
        }
        prev = p.kappa;
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            fmt(p.kappa),
            fmt(p.omega),
            fmt(p.omega_inf),
            fmt(p.c_g),
            fmt(p.deviation_pct)
        ));
    }
    Ok(out)
}

/// Pretty JSON with a trailing newline; key order is insertion order, so
/// output bytes are stable.
pub fn json_text(value: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("in-memory JSON");
    s.push('\n');
    s
}

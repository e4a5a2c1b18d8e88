//! JSON artifact reading/writing and fixed-column CSV emission.
//!
//! CSV layouts are stable for plotting scripts: (x,q), (k,re_s,im_s),
//! (k,delta), (lambda,density), (ell,delta_ell).

use std::io::Write;
use std::path::{Path, PathBuf};

use scatter_core::grid::PotentialGrid;
use scatter_core::types::{JostData, ScatteringData, SpectralFunction};

pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, String> {
    let text =
        std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
}

pub fn write_json<T: serde::Serialize>(dir: &Path, name: &str, value: &T) -> Result<PathBuf, String> {
    std::fs::create_dir_all(dir).map_err(|e| e.to_string())?;
    let path = dir.join(name);
    let text = serde_json::to_string_pretty(value).map_err(|e| e.to_string())?;
    std::fs::write(&path, text).map_err(|e| format!("{}: {e}", path.display()))?;
    Ok(path)
}

fn write_csv(dir: &Path, name: &str, header: &str, rows: impl Iterator<Item = String>) -> Result<PathBuf, String> {
    std::fs::create_dir_all(dir).map_err(|e| e.to_string())?;
    let path = dir.join(name);
    let mut out = std::io::BufWriter::new(
        std::fs::File::create(&path).map_err(|e| format!("{}: {e}", path.display()))?,
    );
    writeln!(out, "{header}").map_err(|e| e.to_string())?;
    for row in rows {
        writeln!(out, "{row}").map_err(|e| e.to_string())?;
    }
    Ok(path)
}

pub fn csv_potential(dir: &Path, name: &str, q: &PotentialGrid) -> Result<PathBuf, String> {
    write_csv(
        dir,
        name,
        "x,q",
        q.xs.iter()
            .zip(&q.qs)
            .map(|(x, v)| format!("{x:.12e},{v:.12e}")),
    )
}

pub fn csv_scattering(dir: &Path, name: &str, sd: &ScatteringData) -> Result<PathBuf, String> {
    write_csv(
        dir,
        name,
        "k,re_s,im_s",
        sd.ks
            .iter()
            .zip(&sd.s)
            .map(|(k, s)| format!("{k:.12e},{:.12e},{:.12e}", s.re, s.im)),
    )
}

pub fn csv_phase(dir: &Path, name: &str, ks: &[f64], delta: &[f64]) -> Result<PathBuf, String> {
    write_csv(
        dir,
        name,
        "k,delta",
        ks.iter()
            .zip(delta)
            .map(|(k, d)| format!("{k:.12e},{d:.12e}")),
    )
}

pub fn csv_density(dir: &Path, name: &str, sf: &SpectralFunction) -> Result<PathBuf, String> {
    write_csv(
        dir,
        name,
        "lambda,density",
        sf.lambdas
            .iter()
            .zip(&sf.density)
            .map(|(l, d)| format!("{l:.12e},{d:.12e}")),
    )
}

pub fn csv_phase_shifts(
    dir: &Path,
    name: &str,
    ells: &[usize],
    deltas: &[f64],
) -> Result<PathBuf, String> {
    write_csv(
        dir,
        name,
        "ell,delta_ell",
        ells.iter()
            .zip(deltas)
            .map(|(l, d)| format!("{l},{d:.12e}")),
    )
}

pub fn csv_jost(dir: &Path, name: &str, jd: &JostData) -> Result<PathBuf, String> {
    write_csv(
        dir,
        name,
        "k,re_f,im_f",
        jd.ks
            .iter()
            .zip(&jd.f)
            .map(|(k, f)| format!("{k:.12e},{:.12e},{:.12e}", f.re, f.im)),
    )
}

use std::fs;
use std::path::Path;

use poly_core::io::{from_jsonl, to_jsonl};
use poly_core::{FrequencyVector, LatticeConfig};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{FrontendError, Result};
use crate::hamiltonian::{BuildReport, Equation, Hamiltonian};

#[derive(Serialize, Deserialize)]
struct Meta {
    equation: Equation,
    lattice: LatticeConfig,
    report: BuildReport,
}

/// Writes `P.jsonl`, `frequencies.csv` and `hamiltonian.json` into `dir`.
pub fn write_hamiltonian(dir: &Path, h: &Hamiltonian, header: &Value) -> Result<()> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join("P.jsonl"), to_jsonl(&h.p, Some(header)))?;
    let mut csv = format!("# {header}\nj,omega\n");
    for (j, w) in h.lattice().modes().iter().zip(&h.h0.omega) {
        csv.push_str(&format!("{j},{w:e}\n"));
    }
    fs::write(dir.join("frequencies.csv"), csv)?;
    let meta = Meta { equation: h.equation, lattice: h.lattice(), report: h.report.clone() };
    let doc = serde_json::json!({ "header": header, "hamiltonian": meta, "omega": h.h0.omega });
    fs::write(dir.join("hamiltonian.json"), serde_json::to_string_pretty(&doc)?)?;
    Ok(())
}

pub fn read_hamiltonian(dir: &Path) -> Result<Hamiltonian> {
    let doc: Value = serde_json::from_str(&fs::read_to_string(dir.join("hamiltonian.json"))?)?;
    let meta: Meta = serde_json::from_value(doc["hamiltonian"].clone())?;
    let omega: Vec<f64> = serde_json::from_value(doc["omega"].clone())?;
    if omega.len() != meta.lattice.len() {
        return Err(FrontendError::InvalidSpec("frequency table does not match the lattice".into()));
    }
    let p = from_jsonl(meta.lattice, &fs::read_to_string(dir.join("P.jsonl"))?)?;
    Ok(Hamiltonian { equation: meta.equation, h0: FrequencyVector { lattice: meta.lattice, omega }, p, report: meta.report })
}

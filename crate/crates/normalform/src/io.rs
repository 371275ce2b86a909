//! Directory layout: `Z.jsonl`, `RN.jsonl`, `RT.jsonl`, `S_{r}.jsonl`, `diagnostics.json`, `omega.json`.

use std::fs;
use std::path::Path;

use serde_json::{json, Value};

use poly_core::io::{from_jsonl, to_jsonl};
use poly_core::FrequencyVector;

use crate::birkhoff::{Diagnostics, NormalFormResult};
use crate::error::{NormalFormError, Result};

fn io_err(e: impl std::fmt::Display) -> NormalFormError {
    NormalFormError::Io(e.to_string())
}

pub fn write_result(dir: &Path, result: &NormalFormResult, header: &Value) -> Result<()> {
    fs::create_dir_all(dir).map_err(io_err)?;
    let put = |name: &str, text: String| fs::write(dir.join(name), text).map_err(io_err);
    put("Z.jsonl", to_jsonl(&result.z, Some(header)))?;
    put("RN.jsonl", to_jsonl(&result.r_n, Some(header)))?;
    put("RT.jsonl", to_jsonl(&result.r_t, Some(header)))?;
    for (r, s) in result.generators.iter().enumerate() {
        put(&format!("S_{r}.jsonl"), to_jsonl(s, Some(header)))?;
    }
    let diag = json!({ "header": header, "diagnostics": result.diagnostics });
    put("diagnostics.json", serde_json::to_string_pretty(&diag).map_err(io_err)?)?;
    let omega = json!({ "header": header, "omega": result.omega });
    put("omega.json", serde_json::to_string_pretty(&omega).map_err(io_err)?)?;
    Ok(())
}

pub fn read_result(dir: &Path) -> Result<NormalFormResult> {
    let get = |name: &str| fs::read_to_string(dir.join(name)).map_err(io_err);
    let omega_doc: Value = serde_json::from_str(&get("omega.json")?).map_err(io_err)?;
    let omega: FrequencyVector = serde_json::from_value(omega_doc["omega"].clone()).map_err(io_err)?;
    let diag_doc: Value = serde_json::from_str(&get("diagnostics.json")?).map_err(io_err)?;
    let diagnostics: Diagnostics = serde_json::from_value(diag_doc["diagnostics"].clone()).map_err(io_err)?;
    let lattice = omega.lattice;
    let mut generators = Vec::new();
    for r in 0..diagnostics.stages.len() {
        generators.push(from_jsonl(lattice, &get(&format!("S_{r}.jsonl"))?)?);
    }
    Ok(NormalFormResult {
        z: from_jsonl(lattice, &get("Z.jsonl")?)?,
        r_n: from_jsonl(lattice, &get("RN.jsonl")?)?,
        r_t: from_jsonl(lattice, &get("RT.jsonl")?)?,
        omega,
        generators,
        diagnostics,
    })
}

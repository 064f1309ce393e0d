use std::fmt::Write;

use fmol_core::{catalog_list, UnitDescriptor};

fn schema_text(d: &UnitDescriptor) -> String {
    d.param_schema
        .iter()
        .map(|p| format!("{}[{}..{} {:?}]", p.name, p.min, p.max, p.curve).to_lowercase())
        .collect::<Vec<_>>()
        .join(" ")
}

/// One header line, then one row per unit in id order.
pub fn catalog_table() -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{:>4}  {:<9}  {:<24}  {:<14}  {:>3}  params", "id", "kind", "name", "family", "var");
    for d in catalog_list() {
        let _ = writeln!(
            out,
            "{:>4}  {:<9}  {:<24}  {:<14}  {:>3}  {}",
            d.unit_id,
            d.kind.as_str(),
            d.name,
            d.base_algorithm,
            d.variation,
            schema_text(d)
        );
    }
    out
}

pub fn catalog_json() -> String {
    serde_json::to_string_pretty(catalog_list()).expect("descriptors always serialize")
}

//! WebAssembly bindings for the demo page. Each export returns a JSON
//! string; the plain functions behind them are what the tests exercise.

use serde::Serialize;
use shallowperm_core::enumerate::{count, CountQuery, Statistic};
use shallowperm_core::series::{catalog_capped, CatalogEntry, GfName};
use shallowperm_core::{certify_shallow, PatternSpec, Permutation};
use wasm_bindgen::prelude::*;

/// Keeps the page responsive on a single thread.
pub const WEB_SIZE_CAP: usize = 10;
pub const WEB_ORDER_CAP: usize = 30;

#[derive(Serialize)]
struct CertifyView {
    word: Vec<u32>,
    shallow: bool,
    displacement: u64,
    inversions: u64,
    reflection_length: usize,
    steps: Vec<StepView>,
}

#[derive(Serialize)]
struct StepView {
    before: Vec<u32>,
    position_of_max: usize,
    moved_value: Option<u32>,
    classification: String,
}

pub fn certify_view(text: &str) -> Result<String, String> {
    let p: Permutation = text.parse().map_err(|e: shallowperm_core::PermError| e.to_string())?;
    if p.len() > 64 {
        return Err("at most 64 entries".into());
    }
    let cert = certify_shallow(&p);
    let stats = p.statistics();
    let mut current = p.clone();
    let mut steps = Vec::with_capacity(cert.steps.len());
    for s in &cert.steps {
        steps.push(StepView {
            before: current.as_slice().to_vec(),
            position_of_max: s.position_of_max,
            moved_value: s.moved_value,
            classification: format!("{:?}", s.classification),
        });
        current = shallowperm_core::r_operator(&current).map_err(|e| e.to_string())?;
    }
    let view = CertifyView {
        word: p.into_vec(),
        shallow: cert.verdict,
        displacement: stats.displacement,
        inversions: stats.inversions,
        reflection_length: stats.reflection_length,
        steps,
    };
    Ok(serde_json::to_string(&view).expect("view serializes"))
}

#[derive(Serialize)]
struct TableView {
    n_max: usize,
    avoid: Vec<String>,
    refine_by: Option<String>,
    /// `cells[n - 1][k]`, counts as decimal strings.
    cells: Vec<Vec<String>>,
    totals: Vec<String>,
}

/// `avoid` is a comma-separated list (may be empty); `by` is empty or a statistic name.
pub fn count_table_view(n_max: usize, avoid: &str, by: &str) -> Result<String, String> {
    if n_max == 0 || n_max > WEB_SIZE_CAP {
        return Err(format!("n must be between 1 and {WEB_SIZE_CAP}"));
    }
    let mut q = CountQuery::new(1..=n_max);
    for part in avoid.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        q = q.avoiding(part.parse::<PatternSpec>().map_err(|e| e.to_string())?);
    }
    if !by.trim().is_empty() {
        q = q.refined_by(by.trim().parse::<Statistic>()?);
    }
    let table = count(&q).map_err(|e| e.to_string())?;
    let cells =
        (1..=n_max).map(|n| table.rows.iter().filter(|r| r.n == n).map(|r| r.count.to_string()).collect()).collect();
    let view = TableView {
        n_max,
        avoid: q.avoid.iter().map(|p| p.to_string()).collect(),
        refine_by: q.refine_by.map(|s| s.to_string()),
        cells,
        totals: table.totals().into_iter().map(|(_, c)| c.to_string()).collect(),
    };
    Ok(serde_json::to_string(&view).expect("view serializes"))
}

#[derive(Serialize)]
struct SeriesView {
    name: String,
    size_variable: String,
    statistic_variable: Option<String>,
    /// One row per size; univariate rows have a single entry.
    rows: Vec<Vec<String>>,
}

pub fn gf_view(name: &str, order: usize) -> Result<String, String> {
    let name: GfName = name.parse()?;
    let entry = catalog_capped(name, order, WEB_ORDER_CAP).map_err(|e| e.to_string())?;
    let rows = match &entry {
        CatalogEntry::Univariate { series, .. } => series.coeffs().iter().map(|c| vec![c.to_string()]).collect(),
        CatalogEntry::Bivariate { table, .. } => {
            table.rows.iter().map(|r| r.iter().map(|c| c.to_string()).collect()).collect()
        }
    };
    let roles = entry.roles();
    let view = SeriesView {
        name: name.to_string(),
        size_variable: roles.size_variable.clone(),
        statistic_variable: roles.statistic_variable.clone(),
        rows,
    };
    Ok(serde_json::to_string(&view).expect("view serializes"))
}

pub fn gf_names() -> Vec<String> {
    GfName::ALL.iter().map(|n| n.to_string()).collect()
}

#[wasm_bindgen]
pub fn certify(text: &str) -> Result<String, JsError> {
    certify_view(text).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn count_table(n_max: usize, avoid: &str, by: &str) -> Result<String, JsError> {
    count_table_view(n_max, avoid, by).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn gf(name: &str, order: usize) -> Result<String, JsError> {
    gf_view(name, order).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn catalog_names() -> String {
    serde_json::to_string(&gf_names()).expect("names serialize")
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::Value;

    fn json(s: Result<String, String>) -> Value {
        serde_json::from_str(&s.unwrap()).unwrap()
    }

    #[test]
    fn certify_trace() {
        let v = json(certify_view("4,2,1,6,3,5"));
        assert_eq!(v["shallow"], true);
        assert_eq!(v["steps"].as_array().unwrap().len(), 5);
        assert_eq!(v["steps"][0]["classification"], "LeftToRightMax");
        assert_eq!(v["steps"][1]["before"], serde_json::json!([4, 2, 1, 5, 3]));
        let v = json(certify_view("3412"));
        assert_eq!(v["shallow"], false);
        assert_eq!(v["displacement"], 8);
        assert!(certify_view("1,1").is_err());
    }

    #[test]
    fn count_tables() {
        let v = json(count_table_view(6, "132", ""));
        assert_eq!(v["totals"], serde_json::json!(["1", "2", "5", "13", "34", "89"]));
        let v = json(count_table_view(4, "", "descents"));
        assert_eq!(v["cells"][3].as_array().unwrap().len(), 4);
        assert_eq!(v["totals"][3], "23");
        assert!(count_table_view(11, "", "").is_err());
        assert!(count_table_view(4, "13x", "").is_err());
        assert!(count_table_view(4, "", "height").is_err());
    }

    #[test]
    fn series_views() {
        let v = json(gf_view("T231", 5));
        assert_eq!(v["rows"], serde_json::json!([["1"], ["1"], ["2"], ["5"], ["14"], ["41"]]));
        let v = json(gf_view("A321xz", 3));
        assert_eq!(v["size_variable"], "z");
        assert_eq!(v["rows"][3], serde_json::json!(["1", "4", "0", "0"]));
        assert!(gf_view("nope", 3).is_err());
        assert!(gf_view("T231", 31).is_err());
        assert_eq!(gf_names().len(), 12);
    }
}

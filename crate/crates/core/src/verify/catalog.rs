//! Catalog files: a list of groups with expected labels and invariants.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{analyze_recipe, CaseLabel, GroupReport, Options, QOrderReading, Verdict, SCHEMA_VERSION};
use crate::error::{Error, Result};
use crate::group::recipe::{preset, GroupRecipe};

/// The catalog shipped with the crate.
pub const SHIPPED_CATALOG: &str = include_str!("../../data/catalog.json");

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RecipeSpec {
    Preset(String),
    Recipe(GroupRecipe),
}

impl RecipeSpec {
    pub fn resolve(&self) -> Result<GroupRecipe> {
        match self {
            RecipeSpec::Preset(name) => preset(name).ok_or_else(|| Error::Parse(format!("unknown preset {name:?}"))),
            RecipeSpec::Recipe(r) => Ok(r.clone()),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CatalogEntry {
    pub name: String,
    pub recipe: RecipeSpec,
    #[serde(default = "default_prime")]
    pub prime: u64,
    #[serde(default)]
    pub expected_case: Option<CaseLabel>,
    #[serde(default)]
    pub expected: BTreeMap<String, Value>,
    #[serde(default)]
    pub note: Option<String>,
}

fn default_prime() -> u64 {
    2
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Catalog {
    pub entries: Vec<CatalogEntry>,
}

impl Catalog {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn shipped() -> Self {
        Self::parse(SHIPPED_CATALOG).expect("shipped catalog parses")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Errored,
}

#[derive(Debug, Clone, Serialize)]
pub struct EntryOutcome {
    pub name: String,
    pub status: Status,
    pub expected_case: Option<CaseLabel>,
    pub expectations: Vec<Verdict>,
    pub report: Option<GroupReport>,
    pub error: Option<String>,
    #[serde(skip)]
    pub internal_error: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CatalogReport {
    pub schema: u32,
    pub seed: u64,
    pub q_order_reading: QOrderReading,
    pub entries: Vec<EntryOutcome>,
}

impl CatalogReport {
    /// 0 when everything passes, 2 when an internal check tripped, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.entries.iter().any(|e| e.internal_error) {
            2
        } else if self.entries.iter().any(|e| e.status != Status::Pass) {
            1
        } else {
            0
        }
    }

    pub fn entry(&self, name: &str) -> Option<&EntryOutcome> {
        self.entries.iter().find(|e| e.name == name)
    }

    pub fn summary(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            let label = e
                .report
                .as_ref()
                .and_then(|r| r.case_label)
                .map_or("-", CaseLabel::as_str);
            let status = match e.status {
                Status::Pass => "pass",
                Status::Fail => "FAIL",
                Status::Errored => "ERROR",
            };
            out.push_str(&format!("{status:<6} {:<12} {label:<30}", e.name));
            if let Some(r) = &e.report {
                let b = r.principal();
                out.push_str(&format!(" |G|={} k(b)={} l(b)={}", r.order, b.k, b.l));
            }
            if let Some(err) = &e.error {
                out.push_str(&format!(" {err}"));
            }
            out.push('\n');
            let failed = e
                .report
                .iter()
                .flat_map(|r| r.verdicts.iter())
                .chain(&e.expectations)
                .filter(|v| !v.pass);
            for v in failed {
                out.push_str(&format!("       failed: {} (expected {}, measured {})\n", v.check, v.expected, v.measured));
            }
        }
        let passed = self.entries.iter().filter(|e| e.status == Status::Pass).count();
        out.push_str(&format!(
            "{passed}/{} entries passed (|Q| bound read as {})\n",
            self.entries.len(),
            self.q_order_reading.bound()
        ));
        out
    }
}

/// Measured value for an expectation key.
pub fn measured_value(r: &GroupReport, key: &str) -> Option<Value> {
    let b = r.principal();
    let th = r.theorem.as_ref();
    let ev = r.evidence.as_ref();
    Some(match key {
        "order" => Value::from(r.order as u64),
        "num_classes" => Value::from(r.num_classes),
        "blocks" => Value::from(r.blocks.len()),
        "defects" => Value::from(r.blocks.iter().map(|b| b.defect).collect::<Vec<_>>()),
        "block_sizes" => Value::from(r.blocks.iter().map(|b| b.k).collect::<Vec<_>>()),
        "k_b" => Value::from(b.k),
        "l_b" => Value::from(b.l),
        "k_c" => Value::from(th?.c.k),
        "l_c" => Value::from(th?.c.l),
        "k_b0" => Value::from(th?.b0.k),
        "l_b0" => Value::from(th?.b0.l),
        "weights" => Value::from(b.weights?),
        "m_b_1" => Value::from(r.principal_multiplicity("1")?),
        "m_b_P" => Value::from(b.lower_defect.as_ref()?.last()?.multiplicity),
        "sylow" => Value::from(ev?.sylow.clone()),
        "hyperfocal" => Value::from(super::describe_invariants(&ev?.hyperfocal.abelian_invariants)),
        "q_order" => Value::from(ev?.q_order as u64),
        "essentials" => Value::from(ev?.essentials.len()),
        "essential_order" => Value::from(ev?.essentials.first()?.order as u64),
        "index_p_s" => Value::from(ev?.index_p_s? as u64),
        _ => return None,
    })
}

fn evaluate(entry: &CatalogEntry, opts: &Options) -> Result<(GroupReport, Vec<Verdict>)> {
    let recipe = entry.recipe.resolve()?;
    let report = analyze_recipe(&entry.name, &recipe, entry.prime, opts)?;
    let mut checks = Vec::new();
    if let Some(want) = entry.expected_case {
        let got = report.case_label.map_or("none", CaseLabel::as_str);
        checks.push(Verdict::new("expected case", want.as_str(), got, Some(want) == report.case_label));
    }
    for (key, want) in &entry.expected {
        let got = measured_value(&report, key);
        let measured = got.as_ref().map_or("unavailable".to_string(), Value::to_string);
        checks.push(Verdict::new(
            &format!("expected {key}"),
            want.to_string(),
            measured,
            got.as_ref() == Some(want),
        ));
    }
    Ok((report, checks))
}

/// Evaluates every entry (optionally only those with a given expected case).
/// Errors are recorded per entry and the run continues.
pub fn run_catalog(cat: &Catalog, filter: Option<CaseLabel>, opts: &Options) -> CatalogReport {
    let entries = cat
        .entries
        .iter()
        .filter(|e| filter.is_none() || e.expected_case == filter)
        .map(|e| match evaluate(e, opts) {
            Ok((report, expectations)) => {
                let pass = report.pass && expectations.iter().all(|v| v.pass);
                EntryOutcome {
                    name: e.name.clone(),
                    status: if pass { Status::Pass } else { Status::Fail },
                    expected_case: e.expected_case,
                    expectations,
                    report: Some(report),
                    error: None,
                    internal_error: false,
                }
            }
            Err(err) => EntryOutcome {
                name: e.name.clone(),
                status: Status::Errored,
                expected_case: e.expected_case,
                expectations: Vec::new(),
                report: None,
                error: Some(err.to_string()),
                internal_error: err.is_internal(),
            },
        })
        .collect();
    CatalogReport {
        schema: SCHEMA_VERSION,
        seed: opts.seed,
        q_order_reading: opts.q_reading,
        entries,
    }
}

//! The JSON exchange document: a category, optional Tannakian hints and
//! cocycle overrides, and (for condensation output) the decomposition of
//! `Φ` with its reports.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::condense::{verify_condensation, CheckReport, CocycleOverride, CondensationResult, Method, OrbitReport};
use crate::error::{Error, Result};
use crate::exactnum::CycloNum;
use crate::fusion::FusionRingData;
use crate::ribbon::CategorySpec;
use crate::tannakian::{Cocycle, FiniteGroup, GroupData, TannakianSubcat};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CategoryJson {
    pub labels: Vec<String>,
    pub unit: String,
    pub dual: Vec<String>,
    #[serde(rename = "N")]
    pub n: Vec<(String, String, String, u32)>,
    pub twists: Vec<CycloNum>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dims: Option<Vec<CycloNum>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupJson {
    pub order: usize,
    pub table: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CharacterTableJson {
    /// Conjugacy class sizes, classes ordered by smallest element.
    pub classes: Vec<usize>,
    pub chars: Vec<Vec<CycloNum>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TannakianHints {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<GroupJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub characters: Option<CharacterTableJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label_to_irrep: Option<BTreeMap<String, usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CocycleJson {
    ClassId { class_id: u64 },
    Values { values: Vec<Vec<CycloNum>> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CondensationJson {
    pub subcategory: Vec<String>,
    pub group_order: u64,
    pub method: Method,
    /// Original category labels, the row index of `phi`.
    pub source_labels: Vec<String>,
    /// `[η, x, multiplicity]` for every nonzero entry of `m`.
    pub phi: Vec<(String, String, u64)>,
    pub orbits: serde_json::Value,
    pub checks: serde_json::Value,
    pub modular: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExchangeDocument {
    pub schema_version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub category: CategoryJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tannakian: Option<TannakianHints>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cocycles: Option<BTreeMap<String, CocycleJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub condensation: Option<CondensationJson>,
}

impl CategoryJson {
    pub fn from_spec(spec: &CategorySpec) -> Self {
        let ring = spec.ring();
        let name = |a: usize| ring.name(a).to_string();
        CategoryJson {
            labels: ring.names().to_vec(),
            unit: name(ring.unit()),
            dual: (0..ring.rank()).map(|a| name(ring.dual(a))).collect(),
            n: ring
                .entries()
                .into_iter()
                .map(|(a, b, c, m)| (name(a), name(b), name(c), m))
                .collect(),
            twists: spec.twists().to_vec(),
            dims: spec.dims().map(<[CycloNum]>::to_vec),
        }
    }

    pub fn to_spec(&self) -> Result<CategorySpec> {
        let idx = |n: &str| {
            self.labels
                .iter()
                .position(|l| l == n)
                .ok_or_else(|| Error::UnknownLabel(n.to_string()))
        };
        let unit = idx(&self.unit)?;
        let dual = self.dual.iter().map(|d| idx(d)).collect::<Result<Vec<_>>>()?;
        let mut entries = Vec::with_capacity(self.n.len());
        for (a, b, c, m) in &self.n {
            entries.push((idx(a)?, idx(b)?, idx(c)?, *m));
        }
        let ring = FusionRingData::new(self.labels.clone(), unit, dual, entries)?;
        CategorySpec::new(ring, self.twists.clone(), self.dims.clone())
    }
}

impl GroupJson {
    pub fn from_group(g: &FiniteGroup) -> Self {
        GroupJson {
            order: g.order(),
            table: g.elements().map(|a| g.elements().map(|b| g.mul(a, b)).collect()).collect(),
        }
    }

    pub fn to_group(&self) -> Result<FiniteGroup> {
        if self.table.len() != self.order {
            return Err(Error::InvalidData(format!(
                "group order {} but the table has {} rows",
                self.order,
                self.table.len()
            )));
        }
        FiniteGroup::from_table(self.table.clone())
    }
}

impl ExchangeDocument {
    pub fn from_spec(spec: &CategorySpec, name: Option<&str>) -> Self {
        ExchangeDocument {
            schema_version: SCHEMA_VERSION,
            name: name.map(str::to_string),
            category: CategoryJson::from_spec(spec),
            tannakian: None,
            cocycles: None,
            condensation: None,
        }
    }

    /// Parses a document; any syntax or schema problem is a parse error.
    pub fn parse(text: &str) -> Result<Self> {
        let doc: ExchangeDocument = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if doc.schema_version != SCHEMA_VERSION {
            return Err(Error::Parse(format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                doc.schema_version
            )));
        }
        Ok(doc)
    }

    /// Pretty JSON with a trailing newline; field order is fixed, so equal
    /// documents serialize to identical bytes.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("documents always serialize");
        s.push('\n');
        s
    }

    pub fn spec(&self) -> Result<CategorySpec> {
        self.category.to_spec()
    }

    /// Attaches group data as Tannakian hints.
    pub fn with_group(mut self, labels: Option<Vec<String>>, data: &GroupData) -> Self {
        let classes = data.group.conjugacy_classes().iter().map(Vec::len).collect();
        self.tannakian = Some(TannakianHints {
            labels,
            group: Some(GroupJson::from_group(&data.group)),
            characters: Some(CharacterTableJson {
                classes,
                chars: data.characters.clone(),
            }),
            label_to_irrep: Some(data.label_to_irrep.clone()),
        });
        self
    }

    /// Group data from the hints, if a group is present.
    pub fn group_data(&self) -> Result<Option<GroupData>> {
        let Some(h) = &self.tannakian else { return Ok(None) };
        let Some(g) = &h.group else { return Ok(None) };
        let group = g.to_group()?;
        let table = h
            .characters
            .as_ref()
            .ok_or_else(|| Error::InvalidData("a group hint needs a character table".into()))?;
        let sizes: Vec<usize> = group.conjugacy_classes().iter().map(Vec::len).collect();
        if sizes != table.classes {
            return Err(Error::GroupMismatch {
                reason: format!(
                    "class sizes {:?} do not match the group's classes {sizes:?}",
                    table.classes
                ),
                triple: None,
            });
        }
        let label_to_irrep = h
            .label_to_irrep
            .clone()
            .ok_or_else(|| Error::InvalidData("a group hint needs label_to_irrep".into()))?;
        Ok(Some(GroupData {
            group,
            characters: table.chars.clone(),
            label_to_irrep,
        }))
    }

    pub fn subcategory_hint(&self) -> Option<&[String]> {
        self.tannakian.as_ref().and_then(|h| h.labels.as_deref())
    }

    pub fn cocycle_overrides(&self) -> Result<BTreeMap<String, CocycleOverride>> {
        let mut out = BTreeMap::new();
        for (k, v) in self.cocycles.iter().flatten() {
            let o = match v {
                CocycleJson::ClassId { class_id } => CocycleOverride::ClassId(*class_id),
                CocycleJson::Values { values } => CocycleOverride::Values(Cocycle::from_values(values)?),
            };
            out.insert(k.clone(), o);
        }
        Ok(out)
    }

    /// Document for a condensed category, with `Φ`, the orbit report and the
    /// re-verification.
    pub fn from_condensation(result: &CondensationResult, original: &CategorySpec, t: &TannakianSubcat) -> Self {
        let checks: CheckReport = verify_condensation(result, original, t);
        let orbits: &OrbitReport = &result.report;
        let mut doc = ExchangeDocument::from_spec(&result.condensed, None);
        doc.condensation = Some(CondensationJson {
            subcategory: result.subcategory.clone(),
            group_order: result.group_order,
            method: result.method,
            source_labels: original.ring().names().to_vec(),
            phi: result.phi_entries(original),
            orbits: serde_json::to_value(orbits).expect("reports serialize"),
            modular: checks.condensed_modular,
            checks: serde_json::to_value(&checks).expect("reports serialize"),
        });
        doc
    }
}

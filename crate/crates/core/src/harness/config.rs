use std::str::FromStr;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Deserializer, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::expr::parse_element;
use crate::heat::TGrid;
use crate::operators::BasisWindow;
use crate::torus::TorusElement;

fn flex<'de, D, T>(d: D) -> std::result::Result<Option<T>, D::Error>
where
    D: Deserializer<'de>,
    T: FromStr + DeserializeOwned,
    T::Err: std::fmt::Display,
{
    use serde::de::Error as _;
    match Option::<serde_json::Value>::deserialize(d)? {
        None | Some(serde_json::Value::Null) => Ok(None),
        Some(serde_json::Value::String(s)) => s.trim().parse().map(Some).map_err(D::Error::custom),
        Some(v) => serde_json::from_value(v)
            .map(Some)
            .map_err(D::Error::custom),
    }
}

/// Everything that determines a run. Keys are the `key=value` names.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: String,
    #[serde(
        default,
        deserialize_with = "flex",
        skip_serializing_if = "Option::is_none"
    )]
    pub theta: Option<f64>,
    #[serde(
        rename = "N",
        default,
        deserialize_with = "flex",
        skip_serializing_if = "Option::is_none"
    )]
    pub window: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r1: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r2: Option<String>,
    #[serde(
        default,
        deserialize_with = "flex",
        skip_serializing_if = "Option::is_none"
    )]
    pub t: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub times: Option<String>,
    #[serde(
        default,
        deserialize_with = "flex",
        skip_serializing_if = "Option::is_none"
    )]
    pub t_max: Option<f64>,
    #[serde(
        default,
        deserialize_with = "flex",
        skip_serializing_if = "Option::is_none"
    )]
    pub ratio: Option<f64>,
    #[serde(
        default,
        deserialize_with = "flex",
        skip_serializing_if = "Option::is_none"
    )]
    pub points: Option<usize>,
    #[serde(
        rename = "M",
        default,
        deserialize_with = "flex",
        skip_serializing_if = "Option::is_none"
    )]
    pub paths: Option<usize>,
    #[serde(
        default,
        deserialize_with = "flex",
        skip_serializing_if = "Option::is_none"
    )]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counts: Option<String>,
    #[serde(
        default,
        deserialize_with = "flex",
        skip_serializing_if = "Option::is_none"
    )]
    pub replicates: Option<usize>,
    #[serde(
        default,
        deserialize_with = "flex",
        skip_serializing_if = "Option::is_none"
    )]
    pub samples: Option<usize>,
    #[serde(
        default,
        deserialize_with = "flex",
        skip_serializing_if = "Option::is_none"
    )]
    pub z: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub windows: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<String>,
    #[serde(
        default,
        deserialize_with = "flex",
        skip_serializing_if = "Option::is_none"
    )]
    pub l_max: Option<i64>,
    #[serde(
        default,
        deserialize_with = "flex",
        skip_serializing_if = "Option::is_none"
    )]
    pub d: Option<usize>,
    #[serde(
        rename = "L",
        default,
        deserialize_with = "flex",
        skip_serializing_if = "Option::is_none"
    )]
    pub half_width: Option<f64>,
    #[serde(
        rename = "n",
        default,
        deserialize_with = "flex",
        skip_serializing_if = "Option::is_none"
    )]
    pub grid_points: Option<usize>,
    #[serde(
        default,
        deserialize_with = "flex",
        skip_serializing_if = "Option::is_none"
    )]
    pub sigma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<String>,
    #[serde(
        default,
        deserialize_with = "flex",
        skip_serializing_if = "Option::is_none"
    )]
    pub cutoff: Option<usize>,
    #[serde(
        default,
        deserialize_with = "flex",
        skip_serializing_if = "Option::is_none"
    )]
    pub side: Option<f64>,
    #[serde(
        default,
        deserialize_with = "flex",
        skip_serializing_if = "Option::is_none"
    )]
    pub radius: Option<f64>,
}

/// `key=value` items into a JSON object of strings; later keys win.
pub fn parse_assignments<'a>(
    items: impl IntoIterator<Item = &'a str>,
) -> Result<serde_json::Map<String, serde_json::Value>> {
    let mut map = serde_json::Map::new();
    for item in items {
        let item = item.trim();
        if item.is_empty() || item.starts_with('#') {
            continue;
        }
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("expected key=value, got `{item}`")))?;
        let k = k.trim();
        if k.is_empty() {
            return Err(Error::Parse(format!("empty key in `{item}`")));
        }
        map.insert(
            k.to_string(),
            serde_json::Value::String(v.trim().to_string()),
        );
    }
    Ok(map)
}

fn list<T: FromStr>(key: &str, s: &str) -> Result<Vec<T>> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse()
                .map_err(|_| Error::InvalidParameter(format!("`{key}`: cannot parse `{x}`")))
        })
        .collect()
}

fn missing(key: &str) -> Error {
    Error::InvalidParameter(format!("missing key `{key}` (pass {key}=...)"))
}

impl ExperimentConfig {
    /// Builds from a base text (one `key=value` per line) overlaid with extra items.
    pub fn from_layers(experiment: &str, base: &str, overrides: &[String]) -> Result<Self> {
        let mut map = parse_assignments(base.lines())?;
        map.extend(parse_assignments(overrides.iter().map(String::as_str))?);
        map.insert(
            "experiment".into(),
            serde_json::Value::String(experiment.into()),
        );
        serde_json::from_value(serde_json::Value::Object(map))
            .map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn canonical_json(&self) -> String {
        serde_json::to_string(self).expect("plain data")
    }

    /// SHA-256 of the canonical JSON, hex.
    pub fn hash(&self) -> String {
        Sha256::digest(self.canonical_json().as_bytes())
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }

    pub fn theta(&self) -> f64 {
        self.theta.unwrap_or(0.37)
    }

    pub fn window(&self) -> BasisWindow {
        BasisWindow::new(self.window.unwrap_or(48))
    }

    pub fn grid(&self) -> Result<TGrid> {
        let g = TGrid::matrix_default();
        TGrid::new(
            self.t_max.unwrap_or(g.t_max),
            self.ratio.unwrap_or(g.ratio),
            self.points.unwrap_or(g.points),
        )
    }

    pub fn element(&self, value: &Option<String>, key: &str) -> Result<TorusElement> {
        let src = value.as_deref().ok_or_else(|| missing(key))?;
        parse_element(src, self.theta())
            .map_err(|e| Error::InvalidParameter(format!("`{key}`: {e}")))
    }

    pub fn element_or_zero(&self, value: &Option<String>, key: &str) -> Result<TorusElement> {
        match value {
            Some(_) => self.element(value, key),
            None => TorusElement::zero(self.theta()),
        }
    }

    pub fn f64_list(&self, value: &Option<String>, key: &str) -> Result<Vec<f64>> {
        list(key, value.as_deref().ok_or_else(|| missing(key))?)
    }

    pub fn usize_list(&self, value: &Option<String>, key: &str) -> Result<Vec<usize>> {
        list(key, value.as_deref().ok_or_else(|| missing(key))?)
    }

    pub fn i64_list(&self, value: &Option<String>, key: &str) -> Result<Vec<i64>> {
        list(key, value.as_deref().ok_or_else(|| missing(key))?)
    }

    pub fn require<T: Copy>(value: Option<T>, key: &str) -> Result<T> {
        value.ok_or_else(|| missing(key))
    }
}

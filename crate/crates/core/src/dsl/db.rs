use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{parse_expr, ClosedExpr};
use crate::error::{Error, Result};
use crate::exact::{parse_rat, Affine, Rat};
use crate::hyper::{Params2F1, ParamsF1};

/// The identity table shipped with the crate.
pub const BUNDLED_JSON: &str = include_str!("../../data/identities.json");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SeriesKind {
    #[serde(rename = "2F1")]
    Gauss,
    #[serde(rename = "F1")]
    AppellF1,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Proved,
    Conjectural,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRecord {
    id: String,
    series: String,
    params: Vec<String>,
    x: String,
    #[serde(default)]
    y: Option<String>,
    #[serde(default)]
    subst_a: Option<String>,
    rhs: String,
    status: String,
    #[serde(default)]
    note: String,
    source: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityRecord {
    pub id: String,
    pub series: SeriesKind,
    pub params: Vec<Affine>,
    pub x: Rat,
    pub y: Option<Rat>,
    pub subst_a: Option<Rat>,
    pub rhs: ClosedExpr,
    pub rhs_text: String,
    pub status: Status,
    pub note: String,
    pub source: String,
}

impl IdentityRecord {
    /// Value used for `a` on both sides; zero when the record is `a`-free.
    pub fn a_value(&self) -> Rat {
        self.subst_a.clone().unwrap_or_default()
    }

    fn param(&self, i: usize) -> Rat {
        self.params[i].eval(&self.a_value())
    }

    pub fn params_2f1(&self) -> Option<Params2F1> {
        (self.series == SeriesKind::Gauss)
            .then(|| Params2F1::new(self.param(0), self.param(1), self.param(2)))
    }

    pub fn params_f1(&self) -> Option<ParamsF1> {
        (self.series == SeriesKind::AppellF1).then(|| {
            ParamsF1::new(self.param(0), self.param(1), self.param(2), self.param(3))
        })
    }

    fn from_raw(r: RawRecord) -> Result<IdentityRecord> {
        let id = r.id.clone();
        let bad = |msg: String| Error::Schema {
            id: id.clone(),
            msg,
        };
        let series = match r.series.as_str() {
            "2F1" => SeriesKind::Gauss,
            "F1" => SeriesKind::AppellF1,
            s => return Err(bad(format!("unknown series `{s}`"))),
        };
        let status = match r.status.as_str() {
            "proved" => Status::Proved,
            "conjectural" => Status::Conjectural,
            s => return Err(bad(format!("status must be proved or conjectural, got `{s}`"))),
        };
        let want = if series == SeriesKind::Gauss { 3 } else { 4 };
        if r.params.len() != want {
            return Err(bad(format!("{} parameters, expected {want}", r.params.len())));
        }
        let params = r
            .params
            .iter()
            .map(|p| Affine::parse(p).map_err(|e| bad(format!("parameter `{p}`: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        let rat = |s: &str, what: &str| parse_rat(s).map_err(|e| bad(format!("{what}: {e}")));
        let x = rat(&r.x, "x")?;
        let y = match (&r.y, series) {
            (Some(y), SeriesKind::AppellF1) => Some(rat(y, "y")?),
            (None, SeriesKind::Gauss) => None,
            (None, _) => return Err(bad("F1 record without y".into())),
            (Some(_), _) => return Err(bad("2F1 record with y".into())),
        };
        let subst_a = r.subst_a.as_deref().map(|s| rat(s, "subst_a")).transpose()?;
        let rhs = parse_expr(&r.rhs).map_err(|e| bad(format!("rhs: {e}")))?;
        let free = params.iter().all(Affine::is_constant) && !rhs.depends_on_a();
        if free && subst_a.is_some() {
            return Err(bad("subst_a given for an a-free record".into()));
        }
        if !free && subst_a.is_none() {
            return Err(bad("record depends on a but has no subst_a".into()));
        }
        Ok(IdentityRecord {
            id: r.id,
            series,
            params,
            x,
            y,
            subst_a,
            rhs,
            rhs_text: r.rhs,
            status,
            note: r.note,
            source: r.source,
        })
    }
}

/// Parses identity records from JSON text; empty input gives no records.
pub fn parse_identity_table(text: &str) -> Result<Vec<IdentityRecord>> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    let raw: Vec<serde_json::Value> = serde_json::from_str(text).map_err(|e| Error::Schema {
        id: "<file>".into(),
        msg: e.to_string(),
    })?;
    let mut out = Vec::with_capacity(raw.len());
    for (i, v) in raw.into_iter().enumerate() {
        let id = v
            .get("id")
            .and_then(|s| s.as_str())
            .map(str::to_string)
            .unwrap_or_else(|| format!("#{i}"));
        let r: RawRecord =
            serde_json::from_value(v).map_err(|e| Error::Schema { id, msg: e.to_string() })?;
        out.push(IdentityRecord::from_raw(r)?);
    }
    Ok(out)
}

pub fn load_identity_table(path: &Path) -> Result<Vec<IdentityRecord>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_identity_table(&text)
}

pub fn bundled_identities() -> Vec<IdentityRecord> {
    parse_identity_table(BUNDLED_JSON).expect("bundled identity table is valid")
}

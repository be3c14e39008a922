use std::fmt::Write as _;
use std::time::{Duration, SystemTime, UNIX_EPOCH};

use serde::Serialize;

use crate::ball::PrecCtx;

/// Version of the JSON report layout.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    DomainSkipped,
    ConjecturalPass,
    ConjecturalFail,
}

impl Verdict {
    pub fn passed(conjectural: bool) -> Verdict {
        if conjectural {
            Verdict::ConjecturalPass
        } else {
            Verdict::Pass
        }
    }

    pub fn failed(conjectural: bool) -> Verdict {
        if conjectural {
            Verdict::ConjecturalFail
        } else {
            Verdict::Fail
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::DomainSkipped => "domain-skipped",
            Verdict::ConjecturalPass => "conjectural-pass",
            Verdict::ConjecturalFail => "conjectural-fail",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReportRow {
    pub id: String,
    pub table: String,
    pub status_claimed: String,
    pub method: String,
    pub lhs: Option<String>,
    pub rhs: Option<String>,
    /// Upper bound for `|lhs - rhs|`.
    pub diff_bound: Option<String>,
    pub verdict: Verdict,
    pub detail: Option<String>,
}

impl ReportRow {
    pub(crate) fn new(id: &str, table: &str, status: &str) -> ReportRow {
        ReportRow {
            id: id.to_string(),
            table: table.to_string(),
            status_claimed: status.to_string(),
            method: "none".into(),
            lhs: None,
            rhs: None,
            diff_bound: None,
            verdict: Verdict::DomainSkipped,
            detail: None,
        }
    }

    pub(crate) fn finish(mut self, v: Verdict, detail: Option<String>) -> ReportRow {
        self.verdict = v;
        self.detail = detail;
        self
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub pass: usize,
    pub fail: usize,
    pub domain_skipped: usize,
    pub conjectural_pass: usize,
    pub conjectural_fail: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub schema_version: u32,
    pub digits: u32,
    pub working_bits: u32,
    pub summary: Summary,
    pub rows: Vec<ReportRow>,
    /// Seconds since the Unix epoch; with `wall_time_ms` the only
    /// run-dependent fields.
    pub timestamp: u64,
    pub wall_time_ms: u64,
}

impl VerifyReport {
    pub fn new(rows: Vec<ReportRow>, ctx: &PrecCtx, wall: Duration) -> VerifyReport {
        let mut s = Summary {
            total: rows.len(),
            ..Summary::default()
        };
        for r in &rows {
            match r.verdict {
                Verdict::Pass => s.pass += 1,
                Verdict::Fail => s.fail += 1,
                Verdict::DomainSkipped => s.domain_skipped += 1,
                Verdict::ConjecturalPass => s.conjectural_pass += 1,
                Verdict::ConjecturalFail => s.conjectural_fail += 1,
            }
        }
        VerifyReport {
            schema_version: SCHEMA_VERSION,
            digits: ctx.target_digits,
            working_bits: ctx.working_bits,
            summary: s,
            rows,
            timestamp: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map_or(0, |d| d.as_secs()),
            wall_time_ms: wall.as_millis() as u64,
        }
    }

    /// 1 when a non-conjectural record failed, else 0.
    pub fn exit_code(&self) -> i32 {
        i32::from(self.summary.fail > 0)
    }

    pub fn warnings(&self) -> Vec<String> {
        self.rows
            .iter()
            .filter(|r| r.verdict == Verdict::ConjecturalFail)
            .map(|r| format!("warning: conjectural record {} did not verify", r.id))
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let w = self.rows.iter().map(|r| r.id.len()).max().unwrap_or(0).max(4);
        for r in &self.rows {
            let _ = write!(out, "{:<16} {:<w$}  {:<13}", r.verdict.name(), r.id, r.method);
            if let Some(d) = &r.diff_bound {
                let _ = write!(out, "  |lhs-rhs| <= {d}");
            }
            if let Some(d) = &r.detail {
                let _ = write!(out, "  ({d})");
            }
            out.push('\n');
            if r.table != "table1" {
                if let (Some(l), Some(h)) = (&r.lhs, &r.rhs) {
                    let _ = writeln!(out, "{:16} {:w$}  lhs = {l}", "", "");
                    let _ = writeln!(out, "{:16} {:w$}  rhs = {h}", "", "");
                }
            }
        }
        let s = &self.summary;
        let _ = writeln!(
            out,
            "{} records at {} digits ({} bits): {} pass, {} fail, {} domain-skipped, {} conjectural-pass, {} conjectural-fail in {:.2} s",
            s.total,
            self.digits,
            self.working_bits,
            s.pass,
            s.fail,
            s.domain_skipped,
            s.conjectural_pass,
            s.conjectural_fail,
            self.wall_time_ms as f64 / 1000.0
        );
        for w in self.warnings() {
            out.push_str(&w);
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(id: &str, v: Verdict) -> ReportRow {
        ReportRow::new(id, "t", "proved").finish(v, None)
    }

    #[test]
    fn exit_codes_and_counts() {
        let ctx = PrecCtx::new(20);
        let rep = VerifyReport::new(
            vec![row("a", Verdict::Pass), row("b", Verdict::ConjecturalFail)],
            &ctx,
            Duration::ZERO,
        );
        assert_eq!(rep.exit_code(), 0);
        assert_eq!(rep.warnings().len(), 1);
        assert_eq!(rep.summary.conjectural_fail, 1);
        let rep = VerifyReport::new(vec![row("c", Verdict::Fail)], &ctx, Duration::ZERO);
        assert_eq!(rep.exit_code(), 1);
        let json: serde_json::Value = serde_json::from_str(&rep.to_json()).unwrap();
        assert_eq!(json["schema_version"], SCHEMA_VERSION);
        assert_eq!(json["rows"][0]["verdict"], "fail");
        assert!(rep.to_text().contains("1 fail"));
    }
}

//! Batch verification of the identity table and the closed-form families.

mod classical;
mod report;

use std::time::Instant;

use rayon::prelude::*;
use regex::Regex;

use crate::ball::{Mag, PrecCtx, Real};
use crate::contig::{check_case_vanishing, closed_ratio_numeric_check, table1, SextupleSpec};
use crate::dsl::{eval_expr, IdentityRecord, SeriesKind, Status};
use crate::error::{Error, Result};
use crate::hyper::{eval_2f1, eval_f1, EvalResult, F1Method};

pub use classical::{verify_classical, ClassicalCase};
pub use report::{ReportRow, Summary, Verdict, VerifyReport, SCHEMA_VERSION};

/// Which part of the database a run covers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableSel {
    All,
    Table(u8),
    Conj,
}

impl TableSel {
    pub fn parse(s: &str) -> Result<TableSel> {
        match s {
            "all" => Ok(TableSel::All),
            "conj" => Ok(TableSel::Conj),
            "1" | "2" | "3" | "4" | "5" => Ok(TableSel::Table(s.as_bytes()[0] - b'0')),
            _ => Err(Error::Domain(format!(
                "unknown table `{s}`, expected all, 1-5 or conj"
            ))),
        }
    }

    fn wants_table1(self) -> bool {
        matches!(self, TableSel::All | TableSel::Table(1))
    }

    fn wants(self, rec: &IdentityRecord) -> bool {
        match self {
            TableSel::All => true,
            TableSel::Conj => rec.source == "conjecture",
            TableSel::Table(n) => rec.source == format!("table{n}"),
        }
    }
}

/// Errors meaning the record lies outside every evaluation route.
fn is_domain(e: &Error) -> bool {
    matches!(e, Error::Domain(_) | Error::Divergent(_) | Error::Pole)
}

/// Pass rule: overlapping enclosures whose radii sum to at most
/// `10^(5-digits)`.
pub fn enclosures_agree(lhs: &Real, rhs: &Real, digits: u32) -> bool {
    let tol = PrecCtx::tolerance(digits.saturating_sub(5));
    lhs.overlaps(rhs) && lhs.radius().add(rhs.radius()) <= tol
}

fn diff_bound(lhs: &Real, rhs: &Real) -> Mag {
    lhs.sub_ref(rhs).abs_upper()
}

fn status_name(s: Status) -> &'static str {
    match s {
        Status::Proved => "proved",
        Status::Conjectural => "conjectural",
    }
}

fn eval_lhs(rec: &IdentityRecord, ctx: &PrecCtx) -> Result<EvalResult> {
    match rec.series {
        SeriesKind::Gauss => eval_2f1(&rec.params_2f1().expect("2F1 record"), &rec.x, ctx),
        SeriesKind::AppellF1 => {
            let y = rec.y.as_ref().expect("F1 record has y");
            eval_f1(
                &rec.params_f1().expect("F1 record"),
                &rec.x,
                y,
                F1Method::Auto,
                ctx,
            )
        }
    }
}

/// Evaluates both sides of one identity record and compares them.
pub fn verify_identity(rec: &IdentityRecord, ctx: &PrecCtx) -> ReportRow {
    let mut row = ReportRow::new(&rec.id, &rec.source, status_name(rec.status));
    let conj = rec.status == Status::Conjectural;
    let lhs = match eval_lhs(rec, ctx) {
        Ok(l) => l,
        Err(e) => {
            let v = if is_domain(&e) {
                Verdict::DomainSkipped
            } else {
                Verdict::failed(conj)
            };
            return row.finish(v, Some(format!("lhs: {e}")));
        }
    };
    row.method = lhs.method.name().to_string();
    row.lhs = Some(lhs.value.to_string());
    let rhs = match eval_expr(&rec.rhs, &rec.a_value(), ctx) {
        Ok(r) => r,
        Err(e) => {
            let v = if matches!(e, Error::Domain(_)) {
                Verdict::DomainSkipped
            } else {
                Verdict::failed(conj)
            };
            return row.finish(v, Some(format!("rhs: {e}")));
        }
    };
    row.rhs = Some(rhs.to_string());
    row.diff_bound = Some(diff_bound(&lhs.value, &rhs).to_string());
    if enclosures_agree(&lhs.value, &rhs, ctx.target_digits) {
        row.finish(Verdict::passed(conj), None)
    } else {
        let why = if lhs.value.overlaps(&rhs) {
            "enclosures overlap but are too wide"
        } else {
            "enclosures are disjoint"
        };
        row.finish(Verdict::failed(conj), Some(why.into()))
    }
}

/// Exact certification of a closed-form family, followed by numeric ratio
/// checks at the family's sample points.
pub fn verify_table1_row(s: &SextupleSpec, ctx: &PrecCtx) -> ReportRow {
    let mut row = ReportRow::new(&s.id, "table1", "proved");
    row.method = "exact".into();
    row.rhs = Some(s.ratio_expected.to_string());
    let cert = match check_case_vanishing(s) {
        Ok(c) => c,
        Err(e) => return row.finish(Verdict::Fail, Some(e.to_string())),
    };
    row.lhs = Some(cert.ratio.to_string());
    if !cert.certified {
        return row.finish(
            Verdict::Fail,
            Some(format!("q10 = {}, q01 = {} after the shift", cert.q10n, cert.q01n)),
        );
    }
    row.diff_bound = Some("0".into());
    let mut notes = Vec::new();
    let mut ok = true;
    let mut ran = 0;
    for a0 in &s.samples {
        match closed_ratio_numeric_check(s, a0, ctx) {
            Ok(rc) => {
                ran += 1;
                ok &= rc.pass;
                notes.push(format!(
                    "a={a0}: {} via {}/{}",
                    if rc.pass { "ok" } else { "MISMATCH" },
                    rc.methods[0].name(),
                    rc.methods[1].name()
                ));
            }
            Err(e) if is_domain(&e) => notes.push(format!("a={a0}: domain-skipped")),
            Err(e) => {
                ok = false;
                notes.push(format!("a={a0}: {e}"));
            }
        }
    }
    if ran > 0 {
        row.method = "exact+numeric".into();
    }
    let v = if ok { Verdict::Pass } else { Verdict::Fail };
    row.finish(v, (!notes.is_empty()).then(|| notes.join("; ")))
}

enum Job<'a> {
    Family(SextupleSpec),
    Record(&'a IdentityRecord),
}

impl Job<'_> {
    fn id(&self) -> &str {
        match self {
            Job::Family(s) => &s.id,
            Job::Record(r) => &r.id,
        }
    }

    fn run(&self, ctx: &PrecCtx) -> ReportRow {
        match self {
            Job::Family(s) => verify_table1_row(s, ctx),
            Job::Record(r) => verify_identity(r, ctx),
        }
    }
}

/// Verifies the selected part of `records` (plus the Table 1 families when
/// selected) on `jobs` worker threads. Rows keep the database order.
pub fn verify_all(
    records: &[IdentityRecord],
    sel: TableSel,
    filter: Option<&Regex>,
    ctx: &PrecCtx,
    jobs: usize,
) -> Result<VerifyReport> {
    let start = Instant::now();
    let mut work: Vec<Job> = Vec::new();
    if sel.wants_table1() {
        work.extend(table1().into_iter().map(Job::Family));
    }
    work.extend(records.iter().filter(|r| sel.wants(r)).map(Job::Record));
    if let Some(re) = filter {
        work.retain(|j| re.is_match(j.id()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Io(format!("thread pool: {e}")))?;
    let rows: Vec<ReportRow> = pool.install(|| work.par_iter().map(|j| j.run(ctx)).collect());
    Ok(VerifyReport::new(rows, ctx, start.elapsed()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contig::table1_row;
    use crate::dsl::{bundled_identities, parse_identity_table};

    fn record(id: &str) -> IdentityRecord {
        bundled_identities().into_iter().find(|r| r.id == id).unwrap()
    }

    #[test]
    fn table_selector() {
        assert_eq!(TableSel::parse("3").unwrap(), TableSel::Table(3));
        assert_eq!(TableSel::parse("conj").unwrap(), TableSel::Conj);
        assert!(TableSel::parse("6").is_err());
        assert!(TableSel::parse("").is_err());
    }

    #[test]
    fn identity_rows() {
        let ctx = PrecCtx::new(50);
        let r = verify_identity(&record("A''.3"), &ctx);
        assert_eq!(r.verdict, Verdict::Pass, "{r:?}");
        let r = verify_identity(&record("B''.3"), &ctx);
        assert_eq!(r.verdict, Verdict::Pass, "{r:?}");
        let r = verify_identity(&record("conj4"), &ctx);
        assert_eq!(r.verdict, Verdict::ConjecturalPass, "{r:?}");
    }

    #[test]
    fn wrong_rhs_fails() {
        let text = r#"[
          {"id":"bad","series":"2F1","params":["1/4","1/2","3/4"],"x":"80/81","rhs":"9/5+1/10^40","status":"proved","source":"t"},
          {"id":"badc","series":"2F1","params":["1/4","1/2","3/4"],"x":"80/81","rhs":"2","status":"conjectural","source":"conjecture"},
          {"id":"far","series":"2F1","params":["1","1","2"],"x":"3","rhs":"1","status":"proved","source":"t"}
        ]"#;
        let recs = parse_identity_table(text).unwrap();
        let ctx = PrecCtx::new(50);
        assert_eq!(verify_identity(&recs[0], &ctx).verdict, Verdict::Fail);
        assert_eq!(verify_identity(&recs[1], &ctx).verdict, Verdict::ConjecturalFail);
        assert_eq!(verify_identity(&recs[2], &ctx).verdict, Verdict::DomainSkipped);
        let rep = verify_all(&recs[1..], TableSel::All, Some(&Regex::new("^badc$").unwrap()), &ctx, 2)
            .unwrap();
        assert_eq!(rep.rows.len(), 1);
        assert_eq!(rep.exit_code(), 0);
        let rep = verify_all(&recs, TableSel::Table(2), None, &ctx, 1).unwrap();
        assert!(rep.rows.is_empty());
        assert_eq!(rep.exit_code(), 0);
    }

    #[test]
    fn family_rows() {
        let ctx = PrecCtx::new(30);
        let r = verify_table1_row(&table1_row("A.3").unwrap(), &ctx);
        assert_eq!(r.verdict, Verdict::Pass, "{r:?}");
        assert_eq!(r.method, "exact+numeric");
        let r = verify_table1_row(&table1_row("D.2").unwrap(), &ctx);
        assert_eq!(r.verdict, Verdict::Pass, "{r:?}");
    }

    #[test]
    fn pass_rule_tolerance() {
        let a = Real::from_rat(&crate::exact::rat(1, 3), 300);
        assert!(enclosures_agree(&a, &a, 50));
        let wide = a.clone().add_error(PrecCtx::tolerance(44));
        assert!(wide.overlaps(&a));
        assert!(!enclosures_agree(&wide, &a, 50));
    }
}

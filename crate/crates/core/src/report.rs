//! JSON and plain-text renderings of reports and check results.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::harmonics::{Flags, HarmonicReport};
use crate::manifold::ValidationReport;
use crate::verify::{CheckResult, CheckStatus, Sample, SweepResult, Witness};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Serialize)]
struct BettiJson<'a> {
    b: &'a [usize],
    b_plus: Option<usize>,
    b_minus: Option<usize>,
}

#[derive(Serialize)]
struct HJson<'a> {
    delbar: &'a [Vec<usize>],
    delta_k: &'a [usize],
    delta_deltabar_k: &'a [usize],
    d_pq: BTreeMap<String, usize>,
    d_dc_k: &'a [usize],
    del_delbar_pq: BTreeMap<String, usize>,
    #[serde(rename = "h_minus_J")]
    h_minus_j: usize,
}

#[derive(Serialize)]
struct ReportJson<'a> {
    #[serde(rename = "schema-version")]
    schema_version: u32,
    name: &'a str,
    #[serde(rename = "spec-digest")]
    spec_digest: &'a str,
    scope: &'static str,
    params: &'a BTreeMap<String, String>,
    flags: Flags,
    betti: BettiJson<'a>,
    h: HJson<'a>,
    #[serde(skip_serializing_if = "Option::is_none")]
    checks: Option<&'a [CheckResult]>,
}

fn keyed(grid: &[Vec<usize>]) -> BTreeMap<String, usize> {
    let mut out = BTreeMap::new();
    for (p, row) in grid.iter().enumerate() {
        for (q, v) in row.iter().enumerate() {
            out.insert(format!("{p},{q}"), *v);
        }
    }
    out
}

fn report_value<'a>(r: &'a HarmonicReport, checks: Option<&'a [CheckResult]>) -> ReportJson<'a> {
    ReportJson {
        schema_version: SCHEMA_VERSION,
        name: &r.name,
        spec_digest: &r.digest,
        scope: "invariant-level",
        params: &r.params,
        flags: r.flags,
        betti: BettiJson {
            b: &r.betti.b,
            b_plus: r.betti.b_plus,
            b_minus: r.betti.b_minus,
        },
        h: HJson {
            delbar: &r.delbar,
            delta_k: &r.deltabar_k,
            delta_deltabar_k: &r.delta_deltabar_k,
            d_pq: keyed(&r.d_pq),
            d_dc_k: &r.d_dc_k,
            del_delbar_pq: keyed(&r.del_delbar),
            h_minus_j: r.h_minus_j,
        },
        checks,
    }
}

pub fn report_json(r: &HarmonicReport, checks: Option<&[CheckResult]>) -> String {
    let mut s = serde_json::to_string_pretty(&report_value(r, checks)).expect("serializable");
    s.push('\n');
    s
}

fn row(out: &mut String, label: &str, cells: &[String]) {
    let _ = write!(out, "  {label:<18}");
    for c in cells {
        let _ = write!(out, "{c:>6}");
    }
    out.push('\n');
}

fn nums(v: &[usize]) -> Vec<String> {
    v.iter().map(usize::to_string).collect()
}

/// Table layout: one row per graded family, one per bigraded family.
pub fn report_table(r: &HarmonicReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{}  (invariant-level, dim {})", r.name, r.dim);
    if !r.params.is_empty() {
        let ps: Vec<String> = r.params.iter().map(|(k, v)| format!("{k} = {v}")).collect();
        let _ = writeln!(out, "params: {}", ps.join(", "));
    }
    let _ = writeln!(out, "digest: {}", r.digest);
    let _ = writeln!(
        out,
        "integrable: {}  almost Kähler: {}  unimodular: {}",
        r.flags.integrable, r.flags.almost_kahler, r.flags.unimodular
    );
    let show = |o: Option<usize>| o.map_or("-".to_string(), |v| v.to_string());
    let _ = writeln!(
        out,
        "betti: {}  b+ = {}  b- = {}  h-_J = {}",
        nums(&r.betti.b).join(" "),
        show(r.betti.b_plus),
        show(r.betti.b_minus),
        r.h_minus_j
    );
    out.push('\n');
    let header: Vec<String> = (0..=r.dim).map(|k| format!("k={k}")).collect();
    row(&mut out, "", &header);
    row(&mut out, "h^k_δ̄", &nums(&r.deltabar_k));
    row(&mut out, "h^k_{δ+δ̄}", &nums(&r.delta_deltabar_k));
    row(&mut out, "h^k_{d+d^c}", &nums(&r.d_dc_k));
    out.push('\n');

    let m = r.dim / 2;
    let mut bidegrees = Vec::new();
    for k in 1..r.dim {
        for p in (0..=m).rev() {
            if k >= p && k - p <= m {
                bidegrees.push((p, k - p));
            }
        }
    }
    let header: Vec<String> = bidegrees.iter().map(|(p, q)| format!("{p}{q}")).collect();
    row(&mut out, "(p,q)", &header);
    for (label, grid) in [("h^{p,q}_d", &r.d_pq), ("h^{p,q}_∂̄", &r.delbar), ("h^{p,q}_{∂+∂̄}", &r.del_delbar)] {
        let cells: Vec<String> = bidegrees.iter().map(|&(p, q)| grid[p][q].to_string()).collect();
        row(&mut out, label, &cells);
    }
    out
}

fn status_word(s: CheckStatus) -> &'static str {
    match s {
        CheckStatus::Pass => "pass",
        CheckStatus::Fail => "FAIL",
        CheckStatus::NotApplicable => "n/a",
    }
}

pub fn checks_table(checks: &[CheckResult]) -> String {
    let mut out = String::new();
    for c in checks {
        let _ = writeln!(out, "{:<5} {:<48} {}", status_word(c.status), c.id, c.statement);
        match &c.witness {
            Some(Witness::Dimensions { left, right }) => {
                let _ = writeln!(out, "      witness: {left} != {right}");
            }
            Some(Witness::Form { form, detail }) => {
                let _ = writeln!(out, "      witness: {form}  ({detail})");
            }
            None => {}
        }
    }
    let count = |s| checks.iter().filter(|c| c.status == s).count();
    let _ = writeln!(
        out,
        "{} passed, {} failed, {} not applicable",
        count(CheckStatus::Pass),
        count(CheckStatus::Fail),
        count(CheckStatus::NotApplicable)
    );
    out
}

#[derive(Serialize)]
struct ChecksJson<'a> {
    #[serde(rename = "schema-version")]
    schema_version: u32,
    name: &'a str,
    #[serde(rename = "spec-digest")]
    spec_digest: &'a str,
    checks: &'a [CheckResult],
}

pub fn checks_json(report: &HarmonicReport, checks: &[CheckResult]) -> String {
    let mut s = serde_json::to_string_pretty(&ChecksJson {
        schema_version: SCHEMA_VERSION,
        name: &report.name,
        spec_digest: &report.digest,
        checks,
    })
    .expect("serializable");
    s.push('\n');
    s
}

pub fn validation_table(v: &ValidationReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{}", v.name);
    for e in &v.entries {
        let _ = write!(out, "  {:<5} {}", if e.passed { "pass" } else { "FAIL" }, e.check);
        if let Some(w) = &e.witness {
            let _ = write!(out, "  ({w})");
        }
        out.push('\n');
    }
    let _ = writeln!(out, "  integrable: {}", v.integrable);
    for nv in &v.nijenhuis {
        let _ = writeln!(out, "  N_J(e{}, e{}) = ({})", nv.i, nv.j, nv.value.join(", "));
    }
    out
}

pub fn validation_json(v: &ValidationReport) -> String {
    #[derive(Serialize)]
    struct Wrapped<'a> {
        #[serde(rename = "schema-version")]
        schema_version: u32,
        passed: bool,
        #[serde(flatten)]
        report: &'a ValidationReport,
    }
    let mut s = serde_json::to_string_pretty(&Wrapped {
        schema_version: SCHEMA_VERSION,
        passed: v.passed(),
        report: v,
    })
    .expect("serializable");
    s.push('\n');
    s
}

pub fn sweep_table(r: &SweepResult) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "sweep over {} = {}", r.parameter, r.values.join(", "));
    for (v, s) in r.values.iter().zip(&r.samples) {
        match s {
            Sample::Valid { report } => {
                let _ = writeln!(
                    out,
                    "  {} = {v}: valid, almost Kähler: {}, h^1_{{d+d^c}} = {}",
                    r.parameter, report.flags.almost_kahler, report.d_dc_k[1]
                );
            }
            Sample::Invalid { reason } => {
                let _ = writeln!(out, "  {} = {v}: invalid ({reason})", r.parameter);
            }
        }
    }
    out.push_str("variation:\n");
    for (label, vals) in &r.variation {
        let list: Vec<String> = vals.iter().map(usize::to_string).collect();
        let mark = if vals.len() > 1 { "varies" } else { "constant" };
        let _ = writeln!(out, "  {label:<22} {mark:<9} {{{}}}", list.join(", "));
    }
    if r.independence_applies {
        out.push_str("metric independence asserted (fixed J, all samples almost Kähler):\n");
    } else {
        out.push_str("metric independence not asserted (observational sweep):\n");
    }
    out.push_str(&checks_table(&r.constancy));
    out
}

pub fn sweep_json(r: &SweepResult) -> String {
    #[derive(Serialize)]
    struct Wrapped<'a> {
        #[serde(rename = "schema-version")]
        schema_version: u32,
        #[serde(flatten)]
        sweep: &'a SweepResult,
    }
    let mut s = serde_json::to_string_pretty(&Wrapped {
        schema_version: SCHEMA_VERSION,
        sweep: r,
    })
    .expect("serializable");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{catalog, full_report};

    #[test]
    fn json_schema_fields() {
        let (_, r) = full_report(&catalog::instantiate("t4-kahler", &[]).unwrap()).unwrap();
        let v: serde_json::Value = serde_json::from_str(&report_json(&r, None)).unwrap();
        assert_eq!(v["schema-version"], 1);
        assert_eq!(v["h"]["d_dc_k"][1], 4);
        assert_eq!(v["h"]["h_minus_J"], 2);
        assert_eq!(v["h"]["d_pq"]["1,1"], 4);
        assert_eq!(v["betti"]["b_minus"], 3);
        assert_eq!(v["flags"]["almost_kahler"], true);
        assert_eq!(v["spec-digest"].as_str().unwrap().len(), 64);
    }

    #[test]
    fn table_has_graded_and_bigraded_rows() {
        let (_, r) = full_report(&catalog::instantiate("kodaira-thurston-ak", &[]).unwrap()).unwrap();
        let t = report_table(&r);
        assert!(t.contains("h^k_{d+d^c}"));
        assert!(t.contains("h^{p,q}_d"));
        assert!(t.contains("betti: 1 3 4 3 1"));
    }
}

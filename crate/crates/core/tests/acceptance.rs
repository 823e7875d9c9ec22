//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Exits nonzero if any criterion fails, except for failures listed in
//! `KNOWN` — those are asserted to fail in exactly the documented way.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use ahforms::exterior::mask_of;
use ahforms::harmonics::{report_for, solve, Family, HarmonicQuery};
use ahforms::verify::{self, table_cells, CheckResult, Sample};
use ahforms::{catalog, cli, specfile, OperatorSuite, Scalar, Subspace};
use num_traits::{One, Zero};

/// Table cells predicted as 0 that are 1 on the flat torus: `φ¹∧φ²` and its
/// conjugate are closed, coclosed (2,0)- and (0,2)-forms.
const KNOWN: &[(&str, &str)] = &[("t4-kahler", "d-20"), ("t4-kahler", "d-02")];

struct Line {
    number: u8,
    title: &'static str,
    failures: Vec<String>,
    note: String,
}

impl Line {
    fn new(number: u8, title: &'static str) -> Self {
        Self {
            number,
            title,
            failures: Vec::new(),
            note: String::new(),
        }
    }

    fn require(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(what());
        }
    }

    fn checks(&mut self, context: &str, checks: &[CheckResult], ids: &[&str]) {
        for id in ids {
            match checks.iter().find(|c| c.id == *id) {
                Some(c) if c.passed() => {}
                Some(c) => self.failures.push(format!("{context}: {id} is {:?} ({:?})", c.status, c.witness)),
                None => self.failures.push(format!("{context}: {id} missing")),
            }
        }
    }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let v = f();
    (v, start.elapsed())
}

fn dim4_catalog() -> Vec<(String, OperatorSuite)> {
    catalog::ids()
        .into_iter()
        .map(|id| (id.to_string(), OperatorSuite::assemble(&catalog::instantiate(id, &[]).unwrap()).unwrap()))
        .filter(|(_, s)| s.is_dim4())
        .collect()
}

fn criterion_1() -> Line {
    let mut line = Line::new(1, "structural identities on the catalog and 20 random structures per algebra");
    let ids = [
        "structural.nabla-mubar-squared",
        "structural.nabla-mubar-delbar",
        "structural.nabla-delbar-squared",
        "structural.nabla-mixed",
        "structural.d-split",
        "structural.d-squared",
        "structural.star-involution",
        "structural.dc-identity",
        "structural.d-delta-sum",
        "structural.delta-deltabar-4d",
    ];
    let (count, elapsed) = timed(|| {
        let mut specs = common::catalog_specs();
        specs.extend(common::random_specs(20));
        for spec in &specs {
            let suite = OperatorSuite::assemble(spec).unwrap();
            let checks = verify::verify_structural(&suite);
            line.checks(&spec.name, &checks, &ids);
            line.require(!checks.iter().any(CheckResult::failed), || format!("{}: a structural check failed", spec.name));
        }
        specs.len()
    });
    line.require(elapsed < Duration::from_secs(5), || format!("took {elapsed:?}"));

    // ∗∗ is the identity on even degrees and minus the identity on odd ones
    let suite = OperatorSuite::assemble(&catalog::instantiate("kodaira-thurston-ak", &[]).unwrap()).unwrap();
    let ss = &suite.star * &suite.star;
    let even = suite.masks_k(2);
    let odd = suite.masks_k(1);
    let identity_on = |masks: &[usize], sign: i64| {
        masks.iter().all(|&c| {
            (0..suite.size()).all(|r| ss[(r, c)] == if r == c { Scalar::from(ahforms::field::rat(sign, 1)) } else { Scalar::zero() })
        })
    };
    line.require(identity_on(&even, 1), || "∗∗ != id on 2-forms".into());
    line.require(identity_on(&odd, -1), || "∗∗ != -id on 1-forms".into());
    line.note = format!(
        "{count} structures in {:.2?}; ∗∗ = (−1)^{{k(4−k)}}: id on even degrees, −id on odd degrees (literal ∗∗ = id fails on odd degrees)",
        elapsed
    );
    line
}

fn criterion_2() -> Line {
    let mut line = Line::new(2, "two-form decompositions and the three-form splitting as subspace equalities");
    let mut names = Vec::new();
    for (id, suite) in dim4_catalog() {
        let report = report_for(&suite).unwrap();
        let checks = verify::verify_almost_hermitian(&suite, &report).unwrap();
        line.checks(
            &id,
            &checks,
            &[
                "almost-hermitian.two-forms-deltabar-split",
                "almost-hermitian.two-forms-bc-split",
                "almost-hermitian.three-forms-bc-split",
            ],
        );
        names.push(id);
    }
    line.require(names.iter().any(|n| n == "kodaira-thurston-ah"), || "non-almost-Kähler variant missing".into());
    line.note = format!("on {}", names.join(", "));
    line
}

fn span_of_masks(size: usize, masks: &[usize]) -> Subspace {
    Subspace::span(
        size,
        masks
            .iter()
            .map(|&m| {
                let mut v = vec![Scalar::zero(); size];
                v[m] = Scalar::one();
                v
            })
            .collect(),
    )
}

fn criterion_3() -> Line {
    let mut line = Line::new(3, "h²_{δ+δ̄} = b⁻ + 1 + h⁻_J");
    for (id, suite) in dim4_catalog() {
        let r = report_for(&suite).unwrap();
        let b_minus = r.betti.b_minus.unwrap();
        line.require(r.delta_deltabar_k[2] == b_minus + 1 + r.h_minus_j, || {
            format!("{id}: {} != {} + 1 + {}", r.delta_deltabar_k[2], b_minus, r.h_minus_j)
        });
    }
    // hand-computed kernels over the real frame e^1..e^4
    let t4 = OperatorSuite::assemble(&catalog::instantiate("t4-kahler", &[]).unwrap()).unwrap();
    let r = report_for(&t4).unwrap();
    line.require((r.delta_deltabar_k[2], r.betti.b_minus, r.h_minus_j) == (6, Some(3), 2), || "t4 values".into());
    let all_two_forms = span_of_masks(16, &ahforms::exterior::masks_of_degree(4, 2));
    let h2 = solve(&t4, &HarmonicQuery::total(Family::DeltaDeltabar, 2)).unwrap();
    line.require(h2 == all_two_forms.image(&t4.from_real), || "t4: kernel is not every 2-form".into());

    let kt = OperatorSuite::assemble(&catalog::instantiate("kodaira-thurston-ak", &[]).unwrap()).unwrap();
    let r = report_for(&kt).unwrap();
    line.require((r.delta_deltabar_k[2], r.betti.b_minus, r.h_minus_j) == (4, Some(2), 1), || "kt values".into());
    let fixture = span_of_masks(16, &[mask_of(&[0, 2]), mask_of(&[0, 3]), mask_of(&[1, 2]), mask_of(&[1, 3])]);
    let h2 = solve(&kt, &HarmonicQuery::total(Family::DeltaDeltabar, 2)).unwrap();
    line.require(h2 == fixture.image(&kt.from_real), || "kt: kernel differs from span{e13, e14, e23, e24}".into());
    line.note = "t4-kahler 6 = 3+1+2, kodaira-thurston-ak 4 = 2+1+1, kernels match hand fixtures".into();
    line
}

fn criterion_4() -> (Line, BTreeSet<(String, String)>) {
    let mut line = Line::new(4, "all table cells on every almost Kähler catalog spec");
    let mut failed_cells = BTreeSet::new();
    let mut summary = Vec::new();
    for (id, suite) in dim4_catalog().into_iter().filter(|(_, s)| s.almost_kahler) {
        let r = report_for(&suite).unwrap();
        let checks = verify::verify_almost_kahler(&suite, &r).unwrap();
        let cells = table_cells(&r);
        line.require(cells.len() == 16, || format!("{id}: {} cells", cells.len()));
        for cell in &cells {
            let check = checks.iter().find(|c| c.id == format!("almost-kahler.table.{}", cell.label)).unwrap();
            if !check.passed() {
                failed_cells.insert((id.clone(), cell.label.clone()));
                line.failures.push(format!("{id}: {} = {}, predicted {:?}", cell.label, cell.value, cell.predicted));
            }
        }
        line.checks(&id, &checks, &["almost-kahler.h1-dc-twice-h10-d", "almost-kahler.h10-spaces"]);
        let key = (r.betti.b[1], r.betti.b_minus.unwrap(), r.d_dc_k[1], r.h_minus_j);
        summary.push(format!("{id} {key:?}"));
        match id.as_str() {
            "t4-kahler" => line.require(key == (4, 3, 4, 2), || format!("t4 key {key:?}")),
            "kodaira-thurston-ak" => line.require(key == (3, 2, 2, 1), || format!("kt key {key:?}")),
            _ => {}
        }
    }
    line.note = format!("(b1, b-, h1, h-_J): {}", summary.join("; "));
    (line, failed_cells)
}

fn criterion_5() -> Line {
    let mut line = Line::new(5, "closed (1,0)-forms are harmonic; ∗ carries 𝓗^{1,0}_∂̄ onto 𝓗^{2,1}_{∂+∂̄}");
    for (id, suite) in dim4_catalog().into_iter().filter(|(_, s)| s.almost_kahler) {
        let r = report_for(&suite).unwrap();
        let checks = verify::verify_almost_kahler(&suite, &r).unwrap();
        line.checks(
            &id,
            &checks,
            &[
                "almost-kahler.closed-10-forms",
                "almost-kahler.star-image-21",
                "almost-kahler.star-image-12",
            ],
        );
    }
    line
}

fn criterion_6() -> Line {
    let mut line = Line::new(6, "table cells constant over almost Kähler metrics on kodaira-thurston-ak");
    let t = catalog::template("kodaira-thurston-ak").unwrap();
    let values = [common::q(1), common::q(2), common::q(3), ahforms::field::rat(5, 2)];
    let sweep = verify::sweep(&t, "t", &values).unwrap();
    line.require(sweep.independence_applies, || "sweep not recognised as almost Kähler with fixed J".into());
    let mut tables = Vec::new();
    for s in &sweep.samples {
        match s {
            Sample::Valid { report } => {
                line.require(report.flags.almost_kahler, || "sample not almost Kähler".into());
                tables.push(table_cells(report).into_iter().map(|c| (c.label, c.value)).collect::<Vec<_>>());
            }
            Sample::Invalid { reason } => line.failures.push(format!("invalid sample: {reason}")),
        }
    }
    line.require(tables.len() >= 3, || "fewer than 3 samples".into());
    line.require(tables.windows(2).all(|w| w[0] == w[1]), || "table differs between samples".into());
    line.require(!sweep.failed(), || format!("varying: {:?}", sweep.varying()));
    line.note = format!("t ∈ {{{}}}, {} constancy checks", sweep.values.join(", "), sweep.constancy.len());
    line
}

fn criterion_7() -> Line {
    let mut line = Line::new(7, "δ̄-duality in complementary degrees; 𝓗^k_δ̄ = 𝓗^k_{δ+δ̄} when almost Kähler");
    for (id, suite) in dim4_catalog() {
        let r = report_for(&suite).unwrap();
        let ah = verify::verify_almost_hermitian(&suite, &r).unwrap();
        line.checks(&id, &ah, &["almost-hermitian.deltabar-duality"]);
        line.require((0..=4).all(|k| r.deltabar_k[k] == r.deltabar_k[4 - k]), || format!("{id}: h^k_δ̄ not symmetric"));
        if suite.almost_kahler {
            let ak = verify::verify_almost_kahler(&suite, &r).unwrap();
            line.checks(&id, &ak, &["almost-kahler.deltabar-equals-bc"]);
        }
    }
    line
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn criterion_8() -> Line {
    let mut line = Line::new(8, "flat torus Dolbeault numbers are binom(2,p)·binom(2,q)");
    let (_, r) = ahforms::full_report(&catalog::instantiate("t4-kahler", &[]).unwrap()).unwrap();
    for p in 0..=2 {
        for q in 0..=2 {
            let want = binomial(2, p) * binomial(2, q);
            line.require(r.delbar[p][q] == want, || format!("h^{{{p},{q}}} = {} != {want}", r.delbar[p][q]));
        }
    }
    line
}

fn criterion_9() -> Line {
    let mut line = Line::new(9, "parse/serialize round trip and byte-identical JSON");
    for id in catalog::ids() {
        let spec = catalog::instantiate(id, &[]).unwrap();
        let text = specfile::serialize(&spec);
        let again = specfile::parse_spec(&text).unwrap();
        line.require(again == spec, || format!("{id}: round trip changed the spec"));
        line.require(specfile::serialize(&again) == text, || format!("{id}: serialization not idempotent"));
        let a = cli::run(["ahforms", "report", id, "--format", "json"]);
        let b = cli::run(["ahforms", "report", id, "--format", "json"]);
        line.require(a.code == 0 && a.stdout == b.stdout && !a.stdout.is_empty(), || format!("{id}: JSON differs"));
    }
    line
}

fn criterion_10() -> Line {
    let mut line = Line::new(10, "verify over the whole catalog");
    let (codes, elapsed) = timed(|| {
        catalog::ids()
            .into_iter()
            .map(|id| (id, cli::run(["ahforms", "verify", id]).code))
            .collect::<Vec<_>>()
    });
    line.require(elapsed < Duration::from_secs(30), || format!("took {elapsed:?}"));
    for (id, code) in &codes {
        let expected = if KNOWN.iter().any(|(k, _)| k == id) { 1 } else { 0 };
        line.require(*code == expected, || format!("{id}: exit {code}"));
    }
    line.note = format!("{} specs in {:.2?}", codes.len(), elapsed);
    line
}

fn main() {
    let (c4, failed_cells) = criterion_4();
    let lines = vec![
        criterion_1(),
        criterion_2(),
        criterion_3(),
        c4,
        criterion_5(),
        criterion_6(),
        criterion_7(),
        criterion_8(),
        criterion_9(),
        criterion_10(),
    ];
    let known: BTreeSet<(String, String)> = KNOWN.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect();
    let mut unexpected = false;
    let mut out = String::new();
    for l in &lines {
        let status = if l.failures.is_empty() { "PASS" } else { "FAIL" };
        out.push_str(&format!("criterion {:>2} {status}: {}", l.number, l.title));
        if !l.note.is_empty() {
            out.push_str(&format!(" [{}]", l.note));
        }
        out.push('\n');
        for f in &l.failures {
            out.push_str(&format!("    {f}\n"));
        }
        let documented = l.number == 4 && failed_cells == known;
        if !l.failures.is_empty() {
            if documented {
                out.push_str("    known failure: these cells are 1 on the flat torus (φ¹∧φ² is closed and coclosed)\n");
            } else {
                unexpected = true;
            }
        }
    }
    // the documented failure must stay exactly as analysed
    if failed_cells != known {
        unexpected = true;
        out.push_str(&format!("table failures {failed_cells:?} differ from the documented set\n"));
    }
    let t4 = OperatorSuite::assemble(&catalog::instantiate("t4-kahler", &[]).unwrap()).unwrap();
    let h20 = solve(&t4, &HarmonicQuery::bi(Family::D, 2, 0)).unwrap();
    let expected = span_of_masks(16, &[mask_of(&[0, 1])]);
    if h20 != expected {
        unexpected = true;
        out.push_str("t4 h^{2,0}_d is not spanned by φ¹∧φ²\n");
    }
    print!("{out}");
    if unexpected {
        std::process::exit(1);
    }
}

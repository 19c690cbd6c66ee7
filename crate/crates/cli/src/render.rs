//! Text and JSON renderings of command results.

use std::fmt::Write;

use iwagraph_core::phi::{LambdaSample, SampleBucket};
use iwagraph_core::VerifyReport;

/// Right-aligned table with a `|`-separated header and a dashed rule.
pub fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let widths: Vec<usize> = (0..header.len())
        .map(|c| rows.iter().map(|r| r[c].chars().count()).chain([header[c].chars().count()]).max().unwrap_or(0))
        .collect();
    let line = |cells: Vec<String>| {
        let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect();
        padded.join(" | ").trim_end().to_string() + "\n"
    };
    let mut s = line(header.iter().map(|h| h.to_string()).collect());
    let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
    s += &(rule.join("-+-") + "\n");
    for r in rows {
        s += &line(r.clone());
    }
    s
}

pub fn verify_footer(r: &VerifyReport) -> String {
    let mut s = format!("predicted λ={} μ={} | ", r.predicted.lambda, r.predicted.mu);
    match (&r.fitted, &r.fit_error) {
        (Some(f), _) => {
            let _ = write!(s, "fitted λ={} μ={} ν={} n0={}", f.lambda, f.mu, f.nu, f.n0);
        }
        (None, Some(e)) => {
            let _ = write!(s, "fitted none ({e})");
        }
        (None, None) => s.push_str("fitted none"),
    }
    s + if r.pass { " | PASS\n" } else { " | FAIL\n" }
}

pub fn verify_table(r: &VerifyReport, short: bool) -> String {
    let (header, rows): (Vec<&str>, Vec<Vec<String>>) = if short {
        (vec!["n", "ord_p"], r.rows.iter().map(|x| vec![x.n.to_string(), x.ord_p.to_string()]).collect())
    } else {
        (
            vec!["n", "kappa", "ord_p"],
            r.rows.iter().map(|x| vec![x.n.to_string(), x.kappa.to_string(), x.ord_p.to_string()]).collect(),
        )
    };
    table(&header, &rows) + &verify_footer(r)
}

pub fn verify_json(r: &VerifyReport) -> String {
    serde_json::to_string_pretty(r).expect("reports serialize")
}

pub fn sample_table(s: &LambdaSample) -> String {
    let mut rows = Vec::new();
    for k in 1..=s.cap {
        let b = SampleBucket::Lambda(k);
        rows.push(vec![
            format!("λ'={k}"),
            s.counts.get(&b).copied().unwrap_or(0).to_string(),
            format!("{:.5}", s.frequency(b)),
            format!("{:.5}", LambdaSample::expected_frequency(s.p, k)),
        ]);
    }
    let o = SampleBucket::Overflow;
    rows.push(vec![
        "overflow".into(),
        s.counts.get(&o).copied().unwrap_or(0).to_string(),
        format!("{:.5}", s.frequency(o)),
        "-".into(),
    ]);
    rows.push(vec!["μ>0".into(), s.mu_positive.to_string(), format!("{:.5}", s.mu_positive_frequency()), "-".into()]);
    format!("p={} trials={}\n", s.p, s.trials) + &table(&["bucket", "count", "frequency", "expected"], &rows)
}

use std::io::Write;
use std::path::Path;

use chansim::bounds::CapacityReport;
use serde::Serialize;

use crate::oracle::Comparison;
use crate::Failure;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Serialize)]
pub struct Metadata {
    pub command: &'static str,
    pub seed: u64,
    pub version: &'static str,
}

impl Metadata {
    pub fn new(command: &'static str, seed: u64) -> Self {
        Self {
            command,
            seed,
            version: env!("CARGO_PKG_VERSION"),
        }
    }
}

#[derive(Serialize)]
struct Wrapped<'a, T: Serialize> {
    #[serde(flatten)]
    body: &'a T,
    metadata: &'a Metadata,
}

/// `%.12g`-style formatting.
pub fn fmt_g(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    const SIG: i32 = 12;
    let sci = format!("{:.*e}", (SIG - 1) as usize, x);
    let (mant, exp) = sci.split_once('e').unwrap();
    let exp: i32 = exp.parse().unwrap();
    if (-4..SIG).contains(&exp) {
        let s = format!("{:.*}", (SIG - 1 - exp).max(0) as usize, x);
        trim_zeros(&s)
    } else {
        format!(
            "{}e{}{:02}",
            trim_zeros(mant),
            if exp < 0 { '-' } else { '+' },
            exp.abs()
        )
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

const HEADER: &str = "param1,param2,lower,upper,exact,method";

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn csv_row(p1: Option<f64>, p2: Option<f64>, r: &CapacityReport) -> String {
    let opt = |v: Option<f64>| v.map(fmt_g).unwrap_or_default();
    format!(
        "{},{},{},{},{},{}",
        opt(p1),
        opt(p2),
        opt(r.lower),
        fmt_g(r.upper),
        r.exact,
        csv_field(&r.method())
    )
}

pub fn sweep_csv(rows: &[(Vec<(String, f64)>, CapacityReport)]) -> String {
    let mut out = String::from(HEADER);
    out.push('\n');
    for (pt, r) in rows {
        out.push_str(&csv_row(pt.first().map(|x| x.1), pt.get(1).map(|x| x.1), r));
        out.push('\n');
    }
    out
}

pub fn render_report(r: &CapacityReport, meta: &Metadata, f: Format) -> Result<String, Failure> {
    match f {
        Format::Json => json(r, meta),
        Format::Csv => {
            let mut vals = r.params.values().copied();
            Ok(format!(
                "{HEADER}\n{}\n",
                csv_row(vals.next(), vals.next(), r)
            ))
        }
    }
}

pub fn render_oracle(c: &Comparison, meta: &Metadata, f: Format) -> Result<String, Failure> {
    match f {
        Format::Json => json(c, meta),
        Format::Csv => {
            let mut out = String::from("quantity,moments,fock,deviation\n");
            for (name, m, k) in c.rows() {
                out.push_str(&format!(
                    "{name},{},{},{}\n",
                    fmt_g(m),
                    fmt_g(k),
                    fmt_g((m - k).abs())
                ));
            }
            Ok(out)
        }
    }
}

fn json<T: Serialize>(body: &T, meta: &Metadata) -> Result<String, Failure> {
    let mut s = serde_json::to_string_pretty(&Wrapped {
        body,
        metadata: meta,
    })
    .map_err(|e| Failure::Usage(format!("serialization failed: {e}")))?;
    s.push('\n');
    Ok(s)
}

pub fn emit(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", p.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Usage(format!("cannot write to stdout: {e}"))),
    }
}

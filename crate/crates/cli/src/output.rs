use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use leaky_hurwitz::acceptance::CriterionReport;
use leaky_hurwitz::chambers::{ChamberFit, LatticePoint, Wall};
use leaky_hurwitz::cutjoin::CutJoinReport;
use leaky_hurwitz::hurwitz::HurwitzResult;
use leaky_hurwitz::rational::{display, to_parts};
use leaky_hurwitz::{Partition, Rational};

pub const CSV_HEADER: &str = "mu,nu,k,r,s,connected,num,den,genus,method,ms";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Plain,
}

fn parts_text(p: &Partition) -> String {
    p.parts().iter().map(u32::to_string).collect::<Vec<_>>().join(",")
}

fn ordered_text(v: &[i64]) -> String {
    v.iter().map(i64::to_string).collect::<Vec<_>>().join(",")
}

/// One computed number. Field order is the CSV column order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValueRecord {
    pub mu: String,
    pub nu: String,
    pub k: i64,
    pub r: u32,
    pub s: usize,
    pub connected: bool,
    pub num: String,
    pub den: String,
    pub genus: String,
    pub method: String,
    pub ms: u128,
}

impl ValueRecord {
    pub fn new(result: &HurwitzResult, timing: bool) -> Self {
        let q = &result.query;
        let (num, den) = to_parts(&result.value);
        ValueRecord {
            mu: parts_text(&q.mu),
            nu: parts_text(&q.nu),
            k: q.k,
            r: q.r,
            s: q.s,
            connected: q.connected,
            num,
            den,
            genus: display(&q.genus()),
            method: result.method.to_string(),
            ms: if timing { result.millis } else { 0 },
        }
    }

    fn csv_row(&self) -> String {
        let quote = |t: &str| if t.contains(',') { format!("\"{t}\"") } else { t.to_string() };
        format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            quote(&self.mu),
            quote(&self.nu),
            self.k,
            self.r,
            self.s,
            self.connected,
            self.num,
            self.den,
            self.genus,
            self.method,
            self.ms
        )
    }
}

#[derive(Serialize)]
#[serde(deny_unknown_fields)]
struct ChamberRecord {
    mu: String,
    nu: String,
    k: i64,
    r: u32,
    s: usize,
    degree_bound: i64,
    degrees: Vec<u32>,
    polynomial: String,
    samples: usize,
    held_out: usize,
    signs: String,
}

#[derive(Serialize)]
#[serde(deny_unknown_fields)]
struct WallRecord {
    wall: String,
    mu: String,
    nu: String,
    k: i64,
    delta: i64,
    num: String,
    den: String,
    genus0: Option<String>,
    chambers: Option<String>,
}

#[derive(Serialize)]
#[serde(deny_unknown_fields)]
struct CutJoinRecord {
    nu: String,
    k: i64,
    r: u32,
    s: usize,
    compared: usize,
    mismatches: usize,
}

#[derive(Serialize)]
#[serde(deny_unknown_fields)]
struct CriterionRecord {
    criterion: u8,
    title: String,
    passed: bool,
    detail: String,
    ms: u128,
}

#[derive(Serialize)]
#[serde(deny_unknown_fields)]
struct NoteRecord<'a> {
    summary: &'a str,
}

pub struct Printer {
    pub format: Format,
    pub timing: bool,
}

impl Printer {
    fn json<T: Serialize>(&self, record: &T) {
        println!("{}", serde_json::to_string(record).expect("records serialise"));
    }

    pub fn header(&self) {
        if self.format == Format::Csv {
            println!("{CSV_HEADER}");
        }
    }

    pub fn value(&self, record: &ValueRecord) {
        match self.format {
            Format::Json => self.json(record),
            Format::Csv => println!("{}", record.csv_row()),
            Format::Plain => println!(
                "h{}[mu=({}), nu=({}), k={}, r={}, s={}] = {}/{}  genus {}  {}{}",
                if record.connected { "°" } else { "" },
                record.mu,
                record.nu,
                record.k,
                record.r,
                record.s,
                record.num,
                record.den,
                record.genus,
                record.method,
                if self.timing { format!("  {} ms", record.ms) } else { String::new() }
            ),
        }
    }

    pub fn chamber(&self, base: &LatticePoint, r: u32, s: usize, fit: &ChamberFit) {
        let signs = leaky_hurwitz::chambers::sign_vector(base, s);
        let record = ChamberRecord {
            mu: ordered_text(&base.mu),
            nu: ordered_text(&base.nu),
            k: base.k,
            r,
            s,
            degree_bound: fit.poly.degree_bound,
            degrees: fit.poly.degrees().into_iter().collect(),
            polynomial: fit.poly.to_string(),
            samples: fit.samples.len(),
            held_out: fit.held_out.len(),
            signs: signs.to_string(),
        };
        match self.format {
            Format::Json => self.json(&record),
            _ => {
                println!("chamber of {base} (r={r}, s={s}), signs {}", record.signs);
                println!("  degree bound {}, degrees {:?}", record.degree_bound, record.degrees);
                println!("  P = {}", record.polynomial);
                println!("  {} samples, {} held-out points reproduced", record.samples, record.held_out);
            }
        }
    }

    pub fn wall(
        &self,
        wall: &Wall,
        point: &LatticePoint,
        delta: i64,
        value: &Rational,
        genus0: Option<&Rational>,
        chambers: Option<&Rational>,
    ) {
        let (num, den) = to_parts(value);
        let record = WallRecord {
            wall: wall.to_string(),
            mu: ordered_text(&point.mu),
            nu: ordered_text(&point.nu),
            k: point.k,
            delta,
            num,
            den,
            genus0: genus0.map(display),
            chambers: chambers.map(display),
        };
        match self.format {
            Format::Json => self.json(&record),
            _ => {
                let mut line = format!("{} at {point}: delta={delta} WC={}", record.wall, display(value));
                if let Some(g) = &record.genus0 {
                    line.push_str(&format!(" genus0={g}"));
                }
                if let Some(c) = &record.chambers {
                    line.push_str(&format!(" P+ - P-={c}"));
                }
                println!("{line}");
            }
        }
    }

    pub fn cutjoin(&self, report: &CutJoinReport) {
        match self.format {
            Format::Json => self.json(&CutJoinRecord {
                nu: parts_text(&report.nu),
                k: report.k,
                r: report.r,
                s: report.s,
                compared: report.compared,
                mismatches: report.mismatches.len(),
            }),
            _ => println!("{report}"),
        }
    }

    pub fn criterion(&self, report: &CriterionReport) {
        match self.format {
            Format::Json => self.json(&CriterionRecord {
                criterion: report.number,
                title: report.title.to_string(),
                passed: report.passed,
                detail: report.detail.clone(),
                ms: if self.timing { report.elapsed.as_millis() } else { 0 },
            }),
            _ => println!("{report}"),
        }
    }

    pub fn note(&self, text: &str) {
        match self.format {
            Format::Json => self.json(&NoteRecord { summary: text }),
            _ => println!("{text}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_fields_rejected() {
        let good = r#"{"mu":"5","nu":"1,1,1","k":1,"r":1,"s":2,"connected":true,"num":"9","den":"1","genus":"0","method":"engine","ms":0}"#;
        assert!(serde_json::from_str::<ValueRecord>(good).is_ok());
        let extra = good.replace("\"ms\":0", "\"ms\":0,\"extra\":1");
        assert!(serde_json::from_str::<ValueRecord>(&extra).is_err());
    }

    #[test]
    fn csv_quotes_part_lists() {
        let record = ValueRecord {
            mu: "2,1".into(),
            nu: "3".into(),
            k: 0,
            r: 1,
            s: 1,
            connected: false,
            num: "1".into(),
            den: "2".into(),
            genus: "0".into(),
            method: "engine".into(),
            ms: 0,
        };
        assert_eq!(record.csv_row(), "\"2,1\",3,0,1,1,false,1,2,0,engine,0");
        assert_eq!(CSV_HEADER.split(',').count(), 11);
    }
}

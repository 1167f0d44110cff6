//! Report assembly and emission. The JSON schema is
//! `{tool_version, config_echo, verdicts: [{name, parameters, pass,
//! witnesses, notes?, timing_ms}], betti_tables?, cache_entries?}`; CSV
//! flattens one record per row with a leading record-type column; text is a
//! human-readable rendering of the same data. With default flags the output
//! is byte-identical across runs and parallelism degrees (timings are zeroed
//! unless --timings is given).

use cehom::freelie::CacheEntryInfo;
use cehom::homology::BettiTable;
use cehom::CertificateReport;
use clap::ValueEnum;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
    Csv,
}

#[derive(Serialize)]
pub struct ReportBundle {
    pub tool_version: String,
    pub config_echo: serde_json::Value,
    pub verdicts: Vec<CertificateReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub betti_tables: Vec<BettiTable>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub cache_entries: Vec<CacheEntryInfo>,
}

impl ReportBundle {
    pub fn new(config_echo: serde_json::Value) -> Self {
        ReportBundle {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            config_echo,
            verdicts: Vec::new(),
            betti_tables: Vec::new(),
            cache_entries: Vec::new(),
        }
    }

    pub fn all_pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("bundle serializes");
                s.push('\n');
                s
            }
            OutputFormat::Csv => self.render_csv(),
            OutputFormat::Text => self.render_text(),
        }
    }

    fn render_csv(&self) -> String {
        let mut out = String::new();
        out.push_str("record,name,pass,timing_ms,parameters,witnesses,notes\n");
        for v in &self.verdicts {
            let params: Vec<String> = v
                .parameters
                .iter()
                .map(|(k, val)| format!("{k}={val}"))
                .collect();
            out.push_str(&format!(
                "verdict,{},{},{},{},{},{}\n",
                csv_field(&v.name),
                v.pass,
                v.timing_ms,
                csv_field(&params.join("|")),
                csv_field(&v.witnesses.join("|")),
                csv_field(&v.notes.join("|")),
            ));
        }
        for table in &self.betti_tables {
            for (&(p, n), &dim) in &table.entries {
                out.push_str(&format!(
                    "betti,{},{},{},{},{},{}\n",
                    csv_field(&table.algebra),
                    table
                        .occurrence_filter
                        .map_or("-".to_string(), |k| k.to_string()),
                    p,
                    n,
                    dim,
                    ""
                ));
            }
        }
        for e in &self.cache_entries {
            out.push_str(&format!(
                "cache,{},{},{},{},{},{}\n",
                csv_field(&e.file),
                e.valid,
                e.format_version,
                csv_field(&e.algebra),
                e.max_weight,
                e.entries,
            ));
        }
        out
    }

    fn render_text(&self) -> String {
        let mut out = format!("cehom {}\n", self.tool_version);
        out.push_str(&format!("config: {}\n", self.config_echo));
        for table in &self.betti_tables {
            out.push_str(&render_betti_text(table));
        }
        for e in &self.cache_entries {
            out.push_str(&format!(
                "cache entry {}: algebra={} max_weight={} entries={} {}\n",
                e.file,
                e.algebra,
                e.max_weight,
                e.entries,
                if e.valid { "ok" } else { &e.note }
            ));
        }
        for v in &self.verdicts {
            let status = if v.pass { "PASS" } else { "FAIL" };
            let params: Vec<String> = v
                .parameters
                .iter()
                .map(|(k, val)| format!("{k}={val}"))
                .collect();
            out.push_str(&format!("[{status}] {} ({})\n", v.name, params.join(", ")));
            for w in &v.witnesses {
                out.push_str(&format!("    {w}\n"));
            }
            for n in &v.notes {
                out.push_str(&format!("    note: {n}\n"));
            }
        }
        let status = if self.all_pass() { "PASS" } else { "FAIL" };
        out.push_str(&format!(
            "result: {status} ({} verdicts)\n",
            self.verdicts.len()
        ));
        out
    }
}

fn render_betti_text(table: &BettiTable) -> String {
    let occ = table
        .occurrence_filter
        .map_or(String::new(), |k| format!(", occurrence {k}"));
    let mut out = format!(
        "betti table: {}{occ}, weights 0..={}\n",
        table.algebra, table.truncation
    );
    let p_max = table.entries.keys().map(|&(p, _)| p).max().unwrap_or(0);
    out.push_str("      n:");
    for n in 0..=table.truncation {
        out.push_str(&format!(" {n:>3}"));
    }
    out.push('\n');
    for p in 0..=p_max {
        out.push_str(&format!("  H_{p}  :"));
        for n in 0..=table.truncation {
            match table.entries.get(&(p, n)) {
                Some(dim) => out.push_str(&format!(" {dim:>3}")),
                None => out.push_str("   ."),
            }
        }
        out.push('\n');
    }
    out
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Runs `f`, recording its wall time into the report when `timings` is set;
/// otherwise the field stays 0 and output is byte-stable.
pub fn timed(timings: bool, f: impl FnOnce() -> CertificateReport) -> CertificateReport {
    let start = std::time::Instant::now();
    let mut report = f();
    if timings {
        report.timing_ms = start.elapsed().as_millis();
    }
    report
}

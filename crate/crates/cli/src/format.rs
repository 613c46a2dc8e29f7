//! Channel files in, JSON and CSV out.

use std::fmt::Write as _;
use std::path::Path;

use anyhow::{anyhow, Context};
use augustin::{Channel, Distribution, Error, ExtendedReal, SolveReport};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

/// `{"W": [[...], ...], "P": [...]}`. Unknown fields are ignored, so solve
/// reports (which echo `W` and `P`) parse as channel files too.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChannelFile {
    #[serde(rename = "W")]
    pub w: Vec<Vec<f64>>,
    #[serde(rename = "P")]
    pub p: Vec<f64>,
}

impl ChannelFile {
    pub fn parse(text: &str) -> anyhow::Result<(Channel, Distribution)> {
        let file: ChannelFile = serde_json::from_str(text).context("malformed channel file")?;
        file.validate()
    }

    pub fn read(path: &Path) -> anyhow::Result<(Channel, Distribution)> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read channel file {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("in {}", path.display()))
    }

    pub fn validate(self) -> anyhow::Result<(Channel, Distribution)> {
        let channel = Channel::new(self.w).map_err(|e| match e {
            Error::InvalidRow { row, source } => anyhow!("field \"W\", row {row}: {source}"),
            other => anyhow!("field \"W\": {other}"),
        })?;
        let input = Distribution::new(self.p).map_err(|e| anyhow!("field \"P\": {e}"))?;
        if input.len() != channel.inputs() {
            return Err(anyhow!(
                "field \"P\" has {} entries but \"W\" has {} rows",
                input.len(),
                channel.inputs()
            ));
        }
        Ok((channel, input))
    }
}

/// Display unit for information values. Computation is always in nats.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Units {
    Nats,
    Bits,
}

impl Units {
    pub fn name(self) -> &'static str {
        match self {
            Units::Nats => "nats",
            Units::Bits => "bits",
        }
    }

    pub fn convert(self, nats: f64) -> f64 {
        match self {
            Units::Nats => nats,
            Units::Bits => nats / std::f64::consts::LN_2,
        }
    }

    pub fn convert_ext(self, nats: ExtendedReal) -> ExtendedReal {
        match nats {
            ExtendedReal::Finite(v) => ExtendedReal::Finite(self.convert(v)),
            ExtendedReal::Infinite => ExtendedReal::Infinite,
        }
    }
}

/// 17 significant digits, enough to round-trip any `f64`.
pub fn csv_number(v: f64) -> String {
    if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.to_string()
    } else if v.is_nan() {
        "nan".to_string()
    } else {
        format!("{v:.16e}")
    }
}

pub fn csv_ext(v: ExtendedReal) -> String {
    csv_number(v.to_f64())
}

pub fn json_ext(v: ExtendedReal) -> Value {
    match v {
        ExtendedReal::Finite(x) => json!(x),
        ExtendedReal::Infinite => json!("inf"),
    }
}

pub fn report_json(report: &SolveReport, channel: &Channel, input: &Distribution, units: Units) -> String {
    let value = json!({
        "alpha": report.alpha.value(),
        "beta": report.beta.value(),
        "units": units.name(),
        "information": json_ext(units.convert_ext(report.information)),
        "mean": report.mean.as_slice(),
        "iterations": report.iterations,
        "residual_tv": report.residual_tv,
        "converged": report.converged,
        "objective_trace": report.objective_trace.iter().map(|&v| units.convert(v)).collect::<Vec<_>>(),
        "W": channel.to_matrix(),
        "P": input.as_slice(),
    });
    let mut out = serde_json::to_string_pretty(&value).expect("report serializes");
    out.push('\n');
    out
}

pub fn report_csv(report: &SolveReport, units: Units) -> String {
    let mut out = String::from("alpha,beta,information,iterations,residual_tv,converged");
    for y in 0..report.mean.len() {
        write!(out, ",mean_{y}").unwrap();
    }
    out.push('\n');
    write!(
        out,
        "{},{},{},{},{},{}",
        csv_number(report.alpha.value()),
        csv_number(report.beta.value()),
        csv_ext(units.convert_ext(report.information)),
        report.iterations,
        csv_number(report.residual_tv),
        report.converged
    )
    .unwrap();
    for &m in report.mean.as_slice() {
        write!(out, ",{}", csv_number(m)).unwrap();
    }
    out.push('\n');
    out
}

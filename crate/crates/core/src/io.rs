//! Text formats for series, chains, proposal history and diagnostics output.
//!
//! Floats are written with Rust's shortest round-trip representation, so
//! reading a file back reproduces the values bit for bit.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::diagnostics::{AcfSeries, Histogram};
use crate::error::{Error, Result};
use crate::model::{QgarchParams, SeriesData, DIM, PARAM_NAMES};
use crate::sampler::{Chain, ProposalSnapshot, WindowAcceptance};

pub const CHAIN_HEADER: &str = "step,alpha,beta,omega,gamma,log_post,accepted";

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

pub fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

/// One observation per line, no header.
pub fn series_to_csv(data: &SeriesData) -> String {
    let mut out = String::with_capacity(data.len() * 22);
    for v in data.values() {
        writeln!(out, "{v}").unwrap();
    }
    out
}

pub fn series_from_csv(text: &str, path: &Path) -> Result<SeriesData> {
    let mut y = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let v: f64 = line.parse().map_err(|_| Error::Parse {
            path: path.to_path_buf(),
            line: i + 1,
            msg: format!("not a number: {line:?}"),
        })?;
        y.push(v);
    }
    SeriesData::new(y).map_err(|e| Error::Parse {
        path: path.to_path_buf(),
        line: 0,
        msg: e.to_string(),
    })
}

pub fn read_series(path: &Path) -> Result<SeriesData> {
    let text = read_file(path)?;
    if path.extension().is_some_and(|e| e == "json") {
        let doc: SeriesJson = serde_json::from_str(&text).map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            line: e.line(),
            msg: e.to_string(),
        })?;
        SeriesData::new(doc.y)
    } else {
        series_from_csv(&text, path)
    }
}

/// Provenance of a simulated series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesMeta {
    pub seed: u64,
    pub params: QgarchParams,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub burn_in: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config_hash: Option<String>,
}

/// `{"y": [...], "meta": {...}}`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesJson {
    pub y: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meta: Option<SeriesMeta>,
}

pub fn series_to_json(data: &SeriesData, meta: Option<SeriesMeta>) -> Result<String> {
    let doc = SeriesJson {
        y: data.values().to_vec(),
        meta,
    };
    Ok(serde_json::to_string(&doc)? + "\n")
}

pub fn chain_to_csv(chain: &Chain<DIM>) -> String {
    let mut out = String::with_capacity(chain.len() * 96);
    out.push_str(CHAIN_HEADER);
    out.push('\n');
    for (step, ((s, lp), acc)) in chain
        .samples
        .iter()
        .zip(&chain.log_post)
        .zip(&chain.accepted)
        .enumerate()
    {
        writeln!(
            out,
            "{step},{},{},{},{},{lp},{}",
            s[0],
            s[1],
            s[2],
            s[3],
            u8::from(*acc)
        )
        .unwrap();
    }
    out
}

pub fn chain_from_csv(text: &str, path: &Path) -> Result<Chain<DIM>> {
    let err = |line: usize, msg: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        msg,
    };
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim() == CHAIN_HEADER => {}
        _ => return Err(err(1, format!("expected header {CHAIN_HEADER:?}"))),
    }
    let mut chain = Chain::default();
    for (i, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.trim().split(',').collect();
        if fields.len() != 7 {
            return Err(err(
                i + 1,
                format!("expected 7 fields, got {}", fields.len()),
            ));
        }
        let num = |k: usize| -> Result<f64> {
            fields[k]
                .parse()
                .map_err(|_| err(i + 1, format!("bad number {:?}", fields[k])))
        };
        chain.samples.push([num(1)?, num(2)?, num(3)?, num(4)?]);
        chain.log_post.push(num(5)?);
        chain.accepted.push(match fields[6] {
            "1" => true,
            "0" => false,
            other => return Err(err(i + 1, format!("bad accept flag {other:?}"))),
        });
    }
    Ok(chain)
}

#[derive(Serialize)]
struct SnapshotLine<'a> {
    step: usize,
    #[serde(rename = "M")]
    mean: [f64; DIM],
    #[serde(rename = "Sigma")]
    sigma: [[f64; DIM]; DIM],
    #[serde(rename = "V")]
    v: [[f64; DIM]; DIM],
    acceptance_window: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    config_hash: Option<&'a str>,
}

/// One JSON object per line:
/// `{"step":..,"M":[4],"Sigma":[[4x4]],"V":[[4x4]],"acceptance_window":..}`.
pub fn history_to_jsonl(
    history: &[ProposalSnapshot<DIM>],
    config_hash: Option<&str>,
) -> Result<String> {
    let mut out = String::new();
    for snap in history {
        let line = SnapshotLine {
            step: snap.step,
            mean: snap.mean,
            sigma: snap.sigma,
            v: snap.v,
            acceptance_window: snap.acceptance_window,
            config_hash,
        };
        out.push_str(&serde_json::to_string(&line)?);
        out.push('\n');
    }
    Ok(out)
}

pub fn acf_to_csv(acf: &AcfSeries) -> String {
    let mut out = String::from("lag,acf\n");
    for (lag, v) in acf.values().iter().enumerate() {
        writeln!(out, "{lag},{v}").unwrap();
    }
    out
}

pub fn histogram_to_csv(h: &Histogram) -> String {
    let mut out = String::from("bin_left,bin_right,count\n");
    for (i, c) in h.counts.iter().enumerate() {
        writeln!(out, "{},{},{c}", h.edges[i], h.edges[i + 1]).unwrap();
    }
    out
}

pub fn acceptance_to_csv(trace: &[WindowAcceptance]) -> String {
    let mut out = String::from("step,acceptance\n");
    for w in trace {
        writeln!(out, "{},{}", w.step, w.acceptance).unwrap();
    }
    out
}

/// The ten distinct elements of `V` after each refresh.
pub fn v_history_to_csv(history: &[ProposalSnapshot<DIM>]) -> String {
    let mut out = String::from("step");
    for i in 0..DIM {
        for j in i..DIM {
            write!(out, ",v_{}_{}", PARAM_NAMES[i], PARAM_NAMES[j]).unwrap();
        }
    }
    out.push('\n');
    for snap in history {
        write!(out, "{}", snap.step).unwrap();
        for i in 0..DIM {
            for j in i..DIM {
                write!(out, ",{}", snap.v[i][j]).unwrap();
            }
        }
        out.push('\n');
    }
    out
}

//! CSV formats read and written by the command line.
//!
//! | file | columns |
//! |------|---------|
//! | dataset | `x1,...,xD,y` |
//! | trajectory | `box_index,coverage,density,n_train,n_val` |
//! | evaluation | `box_index,coverage,density,n_in,restricted_dims,volume` |
//! | mse summary | `box,mu_gt,mse_o,mse_am,n,k` |
//! | mse replications | `rep,mu_hat,bias,var` |

use crate::dataset::{Dataset, PointMatrix};
use crate::error::{Error, Result};
use crate::geometry::HyperBox;
use crate::metrics::TrajectoryPoint;
use crate::pipeline::MseReport;
use std::io::{Read, Write};

/// Schema identifiers recorded in run manifests.
pub const DATASET_SCHEMA: &str = "dataset/1: x1..xD,y";
pub const TRAJECTORY_SCHEMA: &str = "trajectory/1: box_index,coverage,density,n_train,n_val";
pub const EVALUATION_SCHEMA: &str = "evaluation/1: box_index,coverage,density,n_in,restricted_dims,volume";
pub const BOXES_SCHEMA: &str = "boxes/1: i:lower:upper ... val_mean";
pub const TABLE_SCHEMA: &str = "table/1: size,dgp,<methods>; summary rows avg,#1,#2";
pub const CELLS_SCHEMA: &str = "cells/1: dgp,size,rep,method,auc,density,restricted,volume,box";
pub const ERRORS_SCHEMA: &str = "errors/1: dgp,size,rep,method,message";
pub const MSE_SCHEMA: &str = "mse/1: box,mu_gt,mse_o,mse_am,n,k";
pub const MSE_REPS_SCHEMA: &str = "mse-reps/1: rep,mu_hat,bias,var";

fn csv_err(e: csv::Error) -> Error {
    match e.position() {
        Some(p) => Error::Data(format!("line {}: {e}", p.line())),
        None => Error::Data(e.to_string()),
    }
}

pub fn write_dataset<W: Write>(w: W, d: &Dataset) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    let mut header: Vec<String> = (1..=d.dim()).map(|i| format!("x{i}")).collect();
    header.push("y".into());
    out.write_record(&header).map_err(csv_err)?;
    for (row, y) in d.x.rows().zip(&d.y) {
        out.write_record(row.iter().chain([y]).map(|v| v.to_string())).map_err(csv_err)?;
    }
    out.flush()?;
    Ok(())
}

/// Raw rows and labels of a dataset CSV. Errors carry the offending line.
pub fn read_dataset_rows<R: Read>(r: R) -> Result<(Vec<Vec<f64>>, Vec<f64>)> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(r);
    let header = rdr.headers().map_err(csv_err)?.clone();
    let d = header.len().saturating_sub(1);
    let ok = d >= 1
        && header.iter().take(d).enumerate().all(|(i, h)| h == format!("x{}", i + 1))
        && header.get(d) == Some("y");
    if !ok {
        return Err(Error::Data("line 1: header must be x1,...,xD,y".into()));
    }
    let mut rows = Vec::new();
    let mut ys = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(csv_err)?;
        let line = rec.position().map_or(0, |p| p.line());
        let mut vals = Vec::with_capacity(d + 1);
        for (k, f) in rec.iter().enumerate() {
            let v: f64 = f
                .parse()
                .ok()
                .filter(|v: &f64| v.is_finite())
                .ok_or_else(|| Error::Data(format!("line {line}: column {} holds '{f}', not a finite number", k + 1)))?;
            vals.push(v);
        }
        let y = vals.pop().expect("non-empty record");
        if !(0.0..=1.0).contains(&y) {
            return Err(Error::Data(format!("line {line}: label {y} outside [0, 1]")));
        }
        rows.push(vals);
        ys.push(y);
    }
    if rows.is_empty() {
        return Err(Error::Data("dataset holds no rows".into()));
    }
    Ok((rows, ys))
}

/// Smallest box holding every row.
pub fn hull(rows: &[Vec<f64>]) -> Result<HyperBox> {
    let d = rows.first().map_or(0, |r| r.len());
    let mut lo = vec![f64::INFINITY; d];
    let mut hi = vec![f64::NEG_INFINITY; d];
    for r in rows {
        for i in 0..d {
            lo[i] = lo[i].min(r[i]);
            hi[i] = hi[i].max(r[i]);
        }
    }
    HyperBox::new(lo, hi)
}

/// Read a dataset; with no `box0` the points' bounding box is used.
pub fn read_dataset<R: Read>(r: R, box0: Option<&HyperBox>) -> Result<Dataset> {
    let (rows, ys) = read_dataset_rows(r)?;
    let b = match box0 {
        Some(b) => b.clone(),
        None => hull(&rows)?,
    };
    if b.dim() != rows[0].len() {
        return Err(Error::Data(format!("dataset has {} inputs but the input box has {}", rows[0].len(), b.dim())));
    }
    let x = PointMatrix::from_rows(&rows, b).map_err(|e| Error::Data(e.to_string()))?;
    Dataset::new(x, ys)
}

pub fn write_trajectory<W: Write>(w: W, points: &[TrajectoryPoint]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for p in points {
        out.serialize(p).map_err(csv_err)?;
    }
    if points.is_empty() {
        out.write_record(["box_index", "coverage", "density", "n_train", "n_val"]).map_err(csv_err)?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_trajectory<R: Read>(r: R) -> Result<Vec<TrajectoryPoint>> {
    csv::Reader::from_reader(r).deserialize().map(|p| p.map_err(csv_err)).collect()
}

pub fn write_mse<W: Write>(w: W, r: &MseReport) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["box", "mu_gt", "mse_o", "mse_am", "n", "k"]).map_err(csv_err)?;
    out.write_record([
        r.box_b.to_string(),
        r.mu_gt.to_string(),
        r.mse_o.to_string(),
        r.mse_am.to_string(),
        r.n.to_string(),
        r.k.to_string(),
    ])
    .map_err(csv_err)?;
    out.flush()?;
    Ok(())
}

pub fn write_mse_reps<W: Write>(w: W, r: &MseReport) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["rep", "mu_hat", "bias", "var"]).map_err(csv_err)?;
    for (i, ((m, b), v)) in r.mu_hat.iter().zip(&r.bias).zip(&r.var).enumerate() {
        out.write_record([i.to_string(), m.to_string(), b.to_string(), v.to_string()]).map_err(csv_err)?;
    }
    out.flush()?;
    Ok(())
}

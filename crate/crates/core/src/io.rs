//! Membership CSV: UTF-8, header `mention_id,cluster_id[,weight]`, one row
//! per mention, RFC-4180 quoting.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use crate::clustering::MembershipVector;
use crate::error::{Error, Result};

pub const MENTION_COLUMN: &str = "mention_id";
pub const CLUSTER_COLUMN: &str = "cluster_id";
pub const WEIGHT_COLUMN: &str = "weight";

/// A parsed membership file. `weights` holds one sampling weight per cluster
/// id when the optional `weight` column is present.
#[derive(Debug, Clone, PartialEq)]
pub struct MembershipTable {
    pub membership: MembershipVector,
    pub weights: Option<BTreeMap<String, f64>>,
}

impl MembershipTable {
    /// Weights in cluster-id order, matching [`MembershipVector::groups`].
    pub fn cluster_weights(&self) -> Option<Vec<f64>> {
        self.weights.as_ref().map(|w| w.values().copied().collect())
    }
}

fn parse_err(line: u64, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

fn csv_err(e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line());
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        csv::ErrorKind::Utf8 { err, .. } => parse_err(line, format!("invalid UTF-8 in field {}", err.field() + 1)),
        csv::ErrorKind::UnequalLengths { expected_len, len, .. } => {
            parse_err(line, format!("expected {expected_len} fields, found {len}"))
        }
        other => parse_err(line, format!("{other:?}")),
    }
}

pub fn read_membership<R: Read>(reader: R) -> Result<MembershipTable> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
    let headers = rdr.headers().map_err(csv_err)?.clone();
    let names: Vec<&str> = headers.iter().collect();
    let has_weight = match names.as_slice() {
        [MENTION_COLUMN, CLUSTER_COLUMN] => false,
        [MENTION_COLUMN, CLUSTER_COLUMN, WEIGHT_COLUMN] => true,
        [] | [""] => return Err(parse_err(1, "missing header line")),
        _ => {
            return Err(parse_err(
                1,
                format!("expected header `mention_id,cluster_id[,weight]`, found `{}`", names.join(",")),
            ))
        }
    };
    let mut membership = MembershipVector::new();
    let mut weights: BTreeMap<String, f64> = BTreeMap::new();
    for row in rdr.records() {
        let row = row.map_err(csv_err)?;
        let line = row.position().map_or(0, |p| p.line());
        let (mention, cluster) = (&row[0], &row[1]);
        if mention.is_empty() {
            return Err(parse_err(line, "empty mention_id"));
        }
        membership.insert(mention, cluster).map_err(|e| match e {
            Error::DuplicateMention(m) => parse_err(line, format!("duplicate mention_id `{m}`")),
            Error::EmptyClusterId(m) => parse_err(line, format!("empty cluster_id for mention `{m}`")),
            other => other,
        })?;
        if has_weight {
            let w: f64 = row[2]
                .trim()
                .parse()
                .map_err(|_| parse_err(line, format!("weight `{}` is not a number", &row[2])))?;
            if !(w > 0.0 && w.is_finite()) {
                return Err(parse_err(line, format!("weight {w} is not positive")));
            }
            match weights.get(cluster) {
                Some(&prev) if prev != w => {
                    return Err(parse_err(
                        line,
                        format!("weight {w} differs from {prev} given earlier for cluster `{cluster}`"),
                    ))
                }
                Some(_) => {}
                None => {
                    weights.insert(cluster.to_owned(), w);
                }
            }
        }
    }
    Ok(MembershipTable { membership, weights: has_weight.then_some(weights) })
}

pub fn read_membership_file(path: impl AsRef<Path>) -> Result<MembershipTable> {
    read_membership(File::open(path)?)
}

pub fn write_membership<W: Write>(writer: W, membership: &MembershipVector) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record([MENTION_COLUMN, CLUSTER_COLUMN]).map_err(csv_err)?;
    for (m, c) in membership.iter() {
        w.write_record([m, c]).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_membership_file(path: impl AsRef<Path>, membership: &MembershipVector) -> Result<()> {
    write_membership(File::create(path)?, membership)
}

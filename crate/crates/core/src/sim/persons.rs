//! Synthetic person records with duplicates and attribute noise, and the
//! three-rule matcher evaluated against them.

use std::collections::HashMap;
use std::io::{Read, Write};
use std::sync::OnceLock;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::union_find::UnionFind;
use crate::clustering::Clustering;
use crate::error::{Error, Result};

const FIRST_NAMES: &str = include_str!("../../data/first_names.txt");
const LAST_NAMES: &str = include_str!("../../data/last_names.txt");
pub const BIRTH_YEARS: std::ops::RangeInclusive<u16> = 1940..=2005;

pub const ATTRIBUTE_COLUMNS: [&str; 6] =
    ["mention_id", "first_name", "last_name", "birth_day", "birth_month", "birth_year"];

fn pool(text: &'static str) -> Vec<&'static str> {
    text.lines().map(str::trim).filter(|l| !l.is_empty()).collect()
}

pub fn first_name_pool() -> &'static [&'static str] {
    static POOL: OnceLock<Vec<&'static str>> = OnceLock::new();
    POOL.get_or_init(|| pool(FIRST_NAMES))
}

pub fn last_name_pool() -> &'static [&'static str] {
    static POOL: OnceLock<Vec<&'static str>> = OnceLock::new();
    POOL.get_or_init(|| pool(LAST_NAMES))
}

/// Per-attribute corruption probabilities applied to duplicate records.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseConfig {
    pub first_name_typo: f64,
    pub last_name_typo: f64,
    pub birth_day: f64,
    pub birth_month: f64,
    pub birth_year: f64,
}

impl NoiseConfig {
    pub fn none() -> Self {
        Self { first_name_typo: 0.0, last_name_typo: 0.0, birth_day: 0.0, birth_month: 0.0, birth_year: 0.0 }
    }
}

impl Default for NoiseConfig {
    fn default() -> Self {
        Self { first_name_typo: 0.1, last_name_typo: 0.1, birth_day: 0.05, birth_month: 0.05, birth_year: 0.05 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SyntheticPersonConfig {
    pub population_size: usize,
    /// Probability that a record duplicates an earlier entity.
    pub duplication_rate: f64,
    #[serde(default)]
    pub noise: NoiseConfig,
    /// Names are drawn with weight `1/rank^exponent`; 0 is uniform.
    #[serde(default = "default_name_exponent")]
    pub name_frequency_exponent: f64,
}

fn default_name_exponent() -> f64 {
    0.8
}

impl Default for SyntheticPersonConfig {
    fn default() -> Self {
        Self {
            population_size: 10_000,
            duplication_rate: 0.1,
            noise: NoiseConfig::default(),
            name_frequency_exponent: default_name_exponent(),
        }
    }
}

impl SyntheticPersonConfig {
    pub fn validate(&self) -> Result<()> {
        let mut problems = Vec::new();
        if self.population_size == 0 {
            problems.push("population_size must be positive".to_string());
        }
        if !(0.0..1.0).contains(&self.duplication_rate) {
            problems.push(format!("duplication_rate {} must be in [0, 1)", self.duplication_rate));
        }
        let n = &self.noise;
        for (name, p) in [
            ("noise.first_name_typo", n.first_name_typo),
            ("noise.last_name_typo", n.last_name_typo),
            ("noise.birth_day", n.birth_day),
            ("noise.birth_month", n.birth_month),
            ("noise.birth_year", n.birth_year),
        ] {
            if !(0.0..=1.0).contains(&p) {
                problems.push(format!("{name} {p} must be in [0, 1]"));
            }
        }
        if !(self.name_frequency_exponent >= 0.0 && self.name_frequency_exponent.is_finite()) {
            problems.push("name_frequency_exponent must be a non-negative number".into());
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidInput(problems.join("; ")))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PersonRecord {
    pub mention_id: String,
    pub first_name: String,
    pub last_name: String,
    pub birth_day: u8,
    pub birth_month: u8,
    pub birth_year: u16,
}

fn typo<R: Rng + ?Sized>(name: &str, rng: &mut R) -> String {
    let mut chars: Vec<char> = name.chars().collect();
    let letter = (b'a' + rng.random_range(0..26u8)) as char;
    let len = chars.len();
    match rng.random_range(0..4) {
        0 if len > 0 => {
            let i = rng.random_range(0..len);
            chars[i] = if chars[i].to_ascii_lowercase() == letter { ((letter as u8 - b'a' + 1) % 26 + b'a') as char } else { letter };
        }
        1 if len > 2 => {
            chars.remove(rng.random_range(0..len));
        }
        2 if len > 1 => {
            let i = rng.random_range(0..len - 1);
            if chars[i] == chars[i + 1] {
                chars.insert(i, letter);
            } else {
                chars.swap(i, i + 1);
            }
        }
        _ => chars.insert(rng.random_range(0..=len), letter),
    }
    chars.into_iter().collect()
}

fn other_in<R: Rng + ?Sized>(value: u16, lo: u16, hi: u16, rng: &mut R) -> u16 {
    let v = rng.random_range(lo..hi);
    if v >= value {
        v + 1
    } else {
        v
    }
}

/// Birth year with one of its last two digits changed, kept in range.
fn perturb_year<R: Rng + ?Sized>(year: u16, rng: &mut R) -> u16 {
    let (lo, hi) = (*BIRTH_YEARS.start(), *BIRTH_YEARS.end());
    loop {
        let place = if rng.random_bool(0.5) { 1 } else { 10 };
        let digit = (year / place) % 10;
        let new_digit = other_in(digit, 0, 9, rng);
        let y = year - digit * place + new_digit * place;
        if (lo..=hi).contains(&y) {
            return y;
        }
    }
}

/// Records and their ground truth. Each record after the first duplicates a
/// uniformly chosen earlier entity with probability `duplication_rate`,
/// copying that entity's original record and corrupting it with the
/// configured noise; otherwise it starts a new entity.
pub fn generate_synthetic_population<R: Rng + ?Sized>(
    cfg: &SyntheticPersonConfig,
    rng: &mut R,
) -> Result<(Vec<PersonRecord>, Clustering)> {
    cfg.validate()?;
    let weights = |n: usize| {
        WeightedIndex::new((1..=n).map(|r| (r as f64).powf(-cfg.name_frequency_exponent)))
            .map_err(|e| Error::InvalidInput(format!("name weights: {e}")))
    };
    let (firsts, lasts) = (first_name_pool(), last_name_pool());
    let (first_dist, last_dist) = (weights(firsts.len())?, weights(lasts.len())?);
    let width = cfg.population_size.to_string().len().max(5);

    let mut records = Vec::with_capacity(cfg.population_size);
    let mut originals: Vec<usize> = Vec::new();
    let mut entity_of = Vec::with_capacity(cfg.population_size);
    for i in 0..cfg.population_size {
        let mention_id = format!("r{i:0width$}");
        if !originals.is_empty() && rng.random_bool(cfg.duplication_rate) {
            let entity = rng.random_range(0..originals.len());
            let src: &PersonRecord = &records[originals[entity]];
            let mut rec = PersonRecord { mention_id, ..src.clone() };
            let noise = &cfg.noise;
            if rng.random_bool(noise.first_name_typo) {
                rec.first_name = typo(&rec.first_name, rng);
            }
            if rng.random_bool(noise.last_name_typo) {
                rec.last_name = typo(&rec.last_name, rng);
            }
            if rng.random_bool(noise.birth_day) {
                rec.birth_day = other_in(rec.birth_day as u16, 1, 28, rng) as u8;
            }
            if rng.random_bool(noise.birth_month) {
                rec.birth_month = other_in(rec.birth_month as u16, 1, 12, rng) as u8;
            }
            if rng.random_bool(noise.birth_year) {
                rec.birth_year = perturb_year(rec.birth_year, rng);
            }
            records.push(rec);
            entity_of.push(entity as u32);
        } else {
            entity_of.push(originals.len() as u32);
            originals.push(records.len());
            records.push(PersonRecord {
                mention_id,
                first_name: firsts[first_dist.sample(rng)].to_owned(),
                last_name: lasts[last_dist.sample(rng)].to_owned(),
                birth_day: rng.random_range(1..=28),
                birth_month: rng.random_range(1..=12),
                birth_year: rng.random_range(BIRTH_YEARS),
            });
        }
    }
    let universe = records.iter().map(|r| r.mention_id.clone()).collect();
    let labels: Vec<String> = originals.iter().map(|&i| records[i].mention_id.clone()).collect();
    Ok((records, Clustering::from_dense(universe, &entity_of, &labels)))
}

/// Connected components of the pairwise rule: two records match when they
/// agree on (first name, last name, birth year), on (first name, birth day,
/// birth year), or on (last name, birth day, birth year). Each cluster is
/// labelled by its smallest mention id.
pub fn rule_based_matcher(records: &[PersonRecord]) -> Result<Clustering> {
    let mut uf = UnionFind::new(records.len());
    let mut by_name: HashMap<(&str, &str, u16), usize> = HashMap::new();
    let mut by_first: HashMap<(&str, u8, u16), usize> = HashMap::new();
    let mut by_last: HashMap<(&str, u8, u16), usize> = HashMap::new();
    for (i, r) in records.iter().enumerate() {
        let keys = [
            *by_name.entry((&r.first_name, &r.last_name, r.birth_year)).or_insert(i),
            *by_first.entry((&r.first_name, r.birth_day, r.birth_year)).or_insert(i),
            *by_last.entry((&r.last_name, r.birth_day, r.birth_year)).or_insert(i),
        ];
        for k in keys {
            uf.union(i, k);
        }
    }
    let mut groups: HashMap<usize, Vec<&str>> = HashMap::new();
    for (i, r) in records.iter().enumerate() {
        groups.entry(uf.find(i)).or_default().push(&r.mention_id);
    }
    Clustering::from_groups(&groups.into_values().collect::<Vec<_>>())
}

pub fn write_attributes<W: Write>(writer: W, records: &[PersonRecord]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(ATTRIBUTE_COLUMNS).map_err(|e| Error::InvalidInput(e.to_string()))?;
    for r in records {
        w.write_record([
            r.mention_id.as_str(),
            &r.first_name,
            &r.last_name,
            &r.birth_day.to_string(),
            &r.birth_month.to_string(),
            &r.birth_year.to_string(),
        ])
        .map_err(|e| Error::InvalidInput(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

/// Reads an attribute table; columns are found by name, in any order.
pub fn read_attributes<R: Read>(reader: R) -> Result<Vec<PersonRecord>> {
    let mut rdr = csv::Reader::from_reader(reader);
    let headers = rdr.headers().map_err(|e| Error::Parse { line: 1, message: e.to_string() })?.clone();
    let mut idx = [0usize; 6];
    let missing: Vec<&str> = ATTRIBUTE_COLUMNS
        .iter()
        .enumerate()
        .filter_map(|(k, name)| match headers.iter().position(|h| h == *name) {
            Some(p) => {
                idx[k] = p;
                None
            }
            None => Some(*name),
        })
        .collect();
    if !missing.is_empty() {
        return Err(Error::Schema(format!("missing column(s): {}", missing.join(", "))));
    }
    let mut out = Vec::new();
    for row in rdr.records() {
        let row = row.map_err(|e| Error::Parse {
            line: e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })?;
        let line = row.position().map_or(0, |p| p.line());
        let num = |k: usize| -> Result<u16> {
            row[idx[k]].trim().parse().map_err(|_| Error::Parse {
                line,
                message: format!("{} `{}` is not an integer", ATTRIBUTE_COLUMNS[k], &row[idx[k]]),
            })
        };
        out.push(PersonRecord {
            mention_id: row[idx[0]].to_owned(),
            first_name: row[idx[1]].to_owned(),
            last_name: row[idx[2]].to_owned(),
            birth_day: num(3)? as u8,
            birth_month: num(4)? as u8,
            birth_year: num(5)?,
        });
    }
    Ok(out)
}

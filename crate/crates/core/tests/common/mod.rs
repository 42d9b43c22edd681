#![allow(dead_code)]

pub mod props;

use std::path::{Path, PathBuf};

use facmatch::pipeline::RunConfig;
use facmatch::validate::{labeled_candidates, read_labeled_pairs, LabeledPair};

pub fn fixture(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(rel)
}

/// The seven-line fixture run, writing into `out`.
pub fn fixture_config(out: &Path) -> RunConfig {
    let mut config = RunConfig::load(&fixture("config/appendix-e.toml")).expect("fixture config loads");
    config.output_dir = out.to_path_buf();
    config
}

pub fn labeled_fixture() -> Vec<LabeledPair> {
    let file = std::fs::File::open(fixture("validation/aas_pds_30.jsonl")).expect("labeled fixture");
    let pairs = read_labeled_pairs(std::io::BufReader::new(file)).expect("labeled fixture parses");
    labeled_candidates(&pairs).expect("labeled ids are consistent");
    pairs
}

/// Textbook O(nm) edit distance over chars.
pub fn edit_distance(a: &str, b: &str) -> usize {
    let (a, b): (Vec<char>, Vec<char>) = (a.chars().collect(), b.chars().collect());
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    for i in 1..=a.len() {
        let mut cur = vec![i; b.len() + 1];
        for j in 1..=b.len() {
            let sub = prev[j - 1] + usize::from(a[i - 1] != b[j - 1]);
            cur[j] = sub.min(prev[j] + 1).min(cur[j - 1] + 1);
        }
        prev = cur;
    }
    prev[b.len()]
}

pub fn levenshtein_oracle(a: &str, b: &str) -> f64 {
    let (a, b) = (a.to_lowercase(), b.to_lowercase());
    let n = a.chars().count().max(b.chars().count());
    if n == 0 {
        return 1.0;
    }
    1.0 - edit_distance(&a, &b) as f64 / n as f64
}

pub fn cosine_oracle(u: &[f64], v: &[f64]) -> f64 {
    let dot: f64 = u.iter().zip(v).map(|(a, b)| a * b).sum();
    let nu = u.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nv = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if nu == 0.0 || nv == 0.0 {
        0.0
    } else {
        dot / (nu * nv)
    }
}

/// atan2 form, so it shares no code path with the library's asin form.
pub fn haversine_oracle(lat1: f64, lon1: f64, lat2: f64, lon2: f64) -> f64 {
    let r = 6371.0088;
    let (p1, p2) = (lat1.to_radians(), lat2.to_radians());
    let a = ((p2 - p1) / 2.0).sin().powi(2) + p1.cos() * p2.cos() * ((lon2 - lon1).to_radians() / 2.0).sin().powi(2);
    2.0 * r * a.sqrt().atan2((1.0 - a).sqrt())
}

/// Degrees of latitude spanning `km` along a meridian.
pub fn km_to_lat_degrees(km: f64) -> f64 {
    km / (6371.0088 * std::f64::consts::PI / 180.0)
}

/// The SSSOM text block for one record, from its `obsf:<uuid>` line to the
/// terminating ` .`.
pub fn sssom_block<'a>(text: &'a str, subject: &str) -> Option<&'a str> {
    text.split("\n\n")
        .find(|b| b.lines().any(|l| l.trim() == format!("sssom:subject_id {subject} ;") || l.trim() == format!("sssom:subject_id {subject} .")))
}

/// Predicate names of an SSSOM block, in order.
pub fn sssom_fields(block: &str) -> Vec<String> {
    block
        .lines()
        .skip(1)
        .filter_map(|l| l.split_whitespace().next())
        .filter(|p| p.contains(':'))
        .map(str::to_owned)
        .collect()
}

//! File formats: presentation ingestion, table and record serialization.
//!
//! Presentation files are strict JSON (unknown keys rejected, every field
//! validated with a named diagnostic). Scan results persist as append-only
//! JSON lines keyed by (group label, character id), which makes re-runs
//! idempotent and scans resumable. Cyclotomic integers serialize as
//! `{"e": conductor, "c": [decimal strings]}`; coefficients are strings so
//! downstream consumers never truncate them to 64-bit floats.

use std::collections::{BTreeMap, HashSet};
use std::fs;
use std::io::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::chartab::CharacterTable;
use crate::cyclo::CycInt;
use crate::error::{Error, Result};
use crate::group::PcPresentation;
use crate::zeros::ZeroProfile;

// ---------------------------------------------------------------------------
// Presentation files
// ---------------------------------------------------------------------------

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PcpFileRaw {
    prime: u64,
    ngens: usize,
    rel_orders: Vec<u64>,
    #[serde(default)]
    powers: BTreeMap<String, Vec<u64>>,
    #[serde(default)]
    commutators: BTreeMap<String, Vec<u64>>,
    #[serde(default)]
    label: Option<String>,
}

/// Parse and validate a presentation file. Diagnostics name the first
/// offending field.
pub fn parse_pcp(path: &Path) -> Result<PcPresentation> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    let fallback = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "pcp".to_string());
    parse_pcp_str(&text, &fallback)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

/// Parse a presentation from JSON text; `fallback_label` is used when the
/// file carries no label.
pub fn parse_pcp_str(text: &str, fallback_label: &str) -> Result<PcPresentation> {
    let raw: PcpFileRaw =
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let mut powers = BTreeMap::new();
    for (key, word) in raw.powers {
        let i: usize = key
            .parse()
            .map_err(|_| Error::Parse(format!("powers key '{key}' is not a generator index")))?;
        powers.insert(i, word);
    }
    let mut commutators = BTreeMap::new();
    for (key, word) in raw.commutators {
        let parts: Vec<&str> = key.split(',').collect();
        let pair: Option<(usize, usize)> = match parts.as_slice() {
            [j, i] => j.trim().parse().ok().zip(i.trim().parse().ok()),
            _ => None,
        };
        let (j, i) = pair.ok_or_else(|| {
            Error::Parse(format!("commutators key '{key}' is not of the form \"j,i\""))
        })?;
        if j <= i || i < 1 {
            return Err(Error::Parse(format!(
                "commutators key '{key}' requires j > i >= 1"
            )));
        }
        commutators.insert((j, i), word);
    }
    let pres = PcPresentation {
        prime: raw.prime,
        ngens: raw.ngens,
        rel_orders: raw.rel_orders,
        powers,
        commutators,
        label: raw.label.unwrap_or_else(|| fallback_label.to_string()),
    };
    pres.validate().map_err(|e| Error::Parse(e.to_string()))?;
    Ok(pres)
}

/// Canonical serialization: compact JSON with sorted keys and trivial
/// relations omitted. `serialize(parse(f))` is byte-identical for files
/// already in this form.
pub fn serialize_pcp(p: &PcPresentation) -> String {
    let mut powers = serde_json::Map::new();
    for (i, w) in &p.powers {
        if w.iter().any(|&a| a > 0) {
            powers.insert(i.to_string(), json!(w));
        }
    }
    let mut commutators = serde_json::Map::new();
    for ((j, i), w) in &p.commutators {
        if w.iter().any(|&a| a > 0) {
            commutators.insert(format!("{j},{i}"), json!(w));
        }
    }
    let doc = json!({
        "prime": p.prime,
        "ngens": p.ngens,
        "rel_orders": p.rel_orders,
        "powers": Value::Object(powers),
        "commutators": Value::Object(commutators),
        "label": p.label,
    });
    doc.to_string()
}

// ---------------------------------------------------------------------------
// Result records (JSON lines)
// ---------------------------------------------------------------------------

/// One persisted (group, character) analysis record.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub group: String,
    pub order: u64,
    pub prime: Option<u64>,
    pub n: Option<u32>,
    #[serde(rename = "char")]
    pub char_id: String,
    pub degree: u64,
    pub faithful: bool,
    pub zero_elements: u64,
    pub zero_classes: u32,
    pub root_of_unity_elements: u64,
    pub miller_numerator: u64,
    pub miller_denominator: u64,
    pub flags: Vec<String>,
}

/// Build the record for one character profile of a table.
pub fn profile_record(t: &CharacterTable, profile: &ZeroProfile) -> ResultRecord {
    let mut flags = Vec::new();
    if profile.linear {
        flags.push("linear".to_string());
    }
    if let Some((p, n)) = t.prime_power {
        if !profile.linear
            && profile.zero_elements == crate::zeros::vanishing_bound(p, n)
        {
            flags.push("attains-bound".to_string());
        }
    }
    ResultRecord {
        group: t.label.clone(),
        order: t.order,
        prime: t.prime_power.map(|(p, _)| p),
        n: t.prime_power.map(|(_, n)| n),
        char_id: profile.char_id.clone(),
        degree: profile.degree,
        faithful: profile.faithful,
        zero_elements: profile.zero_elements,
        zero_classes: profile.zero_class_count,
        root_of_unity_elements: profile.root_of_unity_elements,
        miller_numerator: profile.miller.num,
        miller_denominator: profile.miller.den,
        flags,
    }
}

pub fn read_records(path: &Path) -> Result<Vec<ResultRecord>> {
    let text = fs::read_to_string(path)?;
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let rec: ResultRecord = serde_json::from_str(line).map_err(|e| {
            Error::Parse(format!("{}:{}: {e}", path.display(), lineno + 1))
        })?;
        out.push(rec);
    }
    Ok(out)
}

/// Append records not already present (keyed by group label and character
/// id). Returns (appended, skipped).
pub fn append_records(path: &Path, records: &[ResultRecord]) -> Result<(usize, usize)> {
    let mut existing: HashSet<(String, String)> = HashSet::new();
    if path.exists() {
        for rec in read_records(path)? {
            existing.insert((rec.group, rec.char_id));
        }
    }
    let mut file = fs::OpenOptions::new().create(true).append(true).open(path)?;
    let mut appended = 0;
    let mut skipped = 0;
    for rec in records {
        let key = (rec.group.clone(), rec.char_id.clone());
        if existing.contains(&key) {
            skipped += 1;
            continue;
        }
        existing.insert(key);
        writeln!(file, "{}", serde_json::to_string(rec).expect("record serializes"))?;
        appended += 1;
    }
    Ok((appended, skipped))
}

pub fn record_to_jsonl(rec: &ResultRecord) -> String {
    serde_json::to_string(rec).expect("record serializes")
}

// ---------------------------------------------------------------------------
// CSV helpers (hand-rolled; fields with separators are quoted)
// ---------------------------------------------------------------------------

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub const RECORD_CSV_HEADER: &str = "group,order,prime,n,char,degree,faithful,zero_elements,zero_classes,root_of_unity_elements,miller_numerator,miller_denominator,flags";

pub fn record_to_csv(rec: &ResultRecord) -> String {
    let opt = |v: Option<u64>| v.map_or(String::new(), |x| x.to_string());
    [
        csv_field(&rec.group),
        rec.order.to_string(),
        opt(rec.prime),
        opt(rec.n.map(u64::from)),
        csv_field(&rec.char_id),
        rec.degree.to_string(),
        rec.faithful.to_string(),
        rec.zero_elements.to_string(),
        rec.zero_classes.to_string(),
        rec.root_of_unity_elements.to_string(),
        rec.miller_numerator.to_string(),
        rec.miller_denominator.to_string(),
        csv_field(&rec.flags.join(";")),
    ]
    .join(",")
}

// ---------------------------------------------------------------------------
// Table serialization
// ---------------------------------------------------------------------------

/// `{"e": conductor, "c": ["…"]}` with decimal-string coefficients.
pub fn cyc_to_json(v: &CycInt) -> Value {
    json!({
        "e": v.conductor(),
        "c": v.coeffs().iter().map(|c| c.to_string()).collect::<Vec<String>>(),
    })
}

pub fn table_to_json(t: &CharacterTable) -> Value {
    let classes: Vec<Value> = (0..t.classes.count())
        .map(|i| {
            json!({
                "index": i,
                "size": t.classes.sizes[i],
                "rep_order": t.classes.rep_orders[i],
                "centralizer": t.classes.centralizer_orders[i],
            })
        })
        .collect();
    let characters: Vec<Value> = t
        .rows
        .iter()
        .enumerate()
        .map(|(i, row)| {
            json!({
                "id": t.char_id(i),
                "degree": row.degree,
                "linear": row.linear,
                "faithful": row.faithful,
                "values": row.values.iter().map(cyc_to_json).collect::<Vec<Value>>(),
            })
        })
        .collect();
    json!({
        "label": t.label,
        "order": t.order,
        "prime": t.prime_power.map(|(p, _)| p),
        "n": t.prime_power.map(|(_, n)| n),
        "exponent": t.exponent,
        "num_classes": t.classes.count(),
        "classes": classes,
        "characters": characters,
    })
}

/// CSV rendering: one row per character; class columns carry size and
/// representative order in the header, values in compact cyclotomic form.
pub fn table_to_csv(t: &CharacterTable) -> String {
    let mut out = String::new();
    out.push_str("id,degree,linear,faithful");
    for i in 0..t.classes.count() {
        out.push_str(&format!(
            ",c{}_s{}_o{}",
            i, t.classes.sizes[i], t.classes.rep_orders[i]
        ));
    }
    out.push('\n');
    for (i, row) in t.rows.iter().enumerate() {
        out.push_str(&format!(
            "{},{},{},{}",
            t.char_id(i),
            row.degree,
            row.linear,
            row.faithful
        ));
        for v in &row.values {
            out.push(',');
            out.push_str(&csv_field(&v.display_string()));
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chartab::character_table;
    use crate::group::{build_family, build_from_pcp, FamilySpec};
    use crate::zeros::zero_profiles;

    const HEISENBERG_27: &str = r#"{
        "prime": 3,
        "ngens": 3,
        "rel_orders": [3, 3, 3],
        "commutators": {"2,1": [0, 0, 2]},
        "label": "heisenberg:27"
    }"#;

    #[test]
    fn heisenberg_file_parses_and_builds() {
        let pres = parse_pcp_str(HEISENBERG_27, "x").unwrap();
        let g = build_from_pcp(&pres).unwrap();
        assert_eq!(g.order(), 27);
        assert_eq!(g.label(), "heisenberg:27");
    }

    #[test]
    fn out_of_range_exponent_is_named() {
        let bad = r#"{"prime":3,"ngens":3,"rel_orders":[3,3,3],"commutators":{"2,1":[0,0,3]}}"#;
        match parse_pcp_str(bad, "bad") {
            Err(Error::Parse(msg)) => assert!(msg.contains("exponent out of range"), "{msg}"),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn reversed_commutator_key_is_rejected() {
        let bad = r#"{"prime":3,"ngens":3,"rel_orders":[3,3,3],"commutators":{"1,2":[0,0,1]}}"#;
        match parse_pcp_str(bad, "bad") {
            Err(Error::Parse(msg)) => assert!(msg.contains("requires j > i"), "{msg}"),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let bad = r#"{"prime":3,"ngens":1,"rel_orders":[3],"generator_names":["a"]}"#;
        assert!(matches!(parse_pcp_str(bad, "bad"), Err(Error::Parse(_))));
    }

    #[test]
    fn canonical_serialization_round_trips() {
        let pres = parse_pcp_str(HEISENBERG_27, "x").unwrap();
        let canon = serialize_pcp(&pres);
        let reparsed = parse_pcp_str(&canon, "x").unwrap();
        assert_eq!(reparsed, pres);
        assert_eq!(serialize_pcp(&reparsed), canon, "byte-identical round trip");
    }

    #[test]
    fn records_append_idempotently() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("records.jsonl");
        let g = build_family(&FamilySpec::Dihedral(8)).unwrap();
        let t = character_table(&g).unwrap();
        let records: Vec<ResultRecord> = zero_profiles(&t)
            .unwrap()
            .iter()
            .map(|p| profile_record(&t, p))
            .collect();
        let (a1, s1) = append_records(&path, &records).unwrap();
        assert_eq!((a1, s1), (5, 0));
        let (a2, s2) = append_records(&path, &records).unwrap();
        assert_eq!((a2, s2), (0, 5));
        let back = read_records(&path).unwrap();
        assert_eq!(back, records);
    }

    #[test]
    fn csv_quotes_fields_with_separators() {
        assert_eq!(csv_field("plain"), "plain");
        assert_eq!(csv_field("a,b"), "\"a,b\"");
        assert_eq!(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
    }

    #[test]
    fn table_serialization_has_expected_shape() {
        let g = build_family(&FamilySpec::GeneralizedQuaternion(8)).unwrap();
        let t = character_table(&g).unwrap();
        let v = table_to_json(&t);
        assert_eq!(v["order"], 8);
        assert_eq!(v["num_classes"], 5);
        assert_eq!(v["characters"].as_array().unwrap().len(), 5);
        assert_eq!(v["characters"][0]["values"][0]["c"][0], "1");
        let csv = table_to_csv(&t);
        assert_eq!(csv.lines().count(), 6);
        assert!(csv.lines().nth(5).unwrap().contains("-2"));
    }
}

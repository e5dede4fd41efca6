use std::collections::HashMap;
use std::io::Read;

use datarank_core::eval::{EvalError, UsageKind, UsageTable};

use super::delimited::two_column_strict;
use super::{normalize_accession, IngestError};

/// Reads `external_id,count` rows. Versioned accessions (`U00096.2`) are
/// stored under their unversioned form, so two versions of one accession
/// collide as duplicates.
pub fn parse_usage_table<R: Read>(input: R, kind: UsageKind) -> Result<UsageTable, IngestError> {
    let mut table = UsageTable::new(kind);
    for (line, id, count) in two_column_strict(input)? {
        let id = normalize_accession(&id).to_owned();
        let count: i128 = count.parse().map_err(|_| IngestError::MalformedRow {
            line,
            reason: format!("count `{count}` is not an integer"),
        })?;
        if count < 0 {
            return Err(IngestError::NegativeCount { line, id });
        }
        let count = u64::try_from(count).map_err(|_| IngestError::MalformedRow {
            line,
            reason: "count out of range".into(),
        })?;
        table.insert(id, count).map_err(|e| match e {
            EvalError::DuplicateId(id) => IngestError::DuplicateId { line, id },
            other => IngestError::MalformedRow {
                line,
                reason: other.to_string(),
            },
        })?;
    }
    Ok(table)
}

/// Reads a two-column `pmid,doi` mapping.
pub fn parse_id_map<R: Read>(input: R) -> Result<HashMap<String, String>, IngestError> {
    let mut map = HashMap::new();
    for (line, from, to) in two_column_strict(input)? {
        if to.is_empty() {
            return Err(IngestError::MalformedRow {
                line,
                reason: "empty target id".into(),
            });
        }
        if map.insert(from.clone(), to).is_some() {
            return Err(IngestError::DuplicateId { line, id: from });
        }
    }
    Ok(map)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<UsageTable, IngestError> {
        parse_usage_table(text.as_bytes(), UsageKind::Visits)
    }

    #[test]
    fn reads_counts() {
        let t = parse("id,count\nU00096,5000\nAB123456.3,7\n").unwrap();
        assert_eq!(t.get("U00096"), Some(5000));
        assert_eq!(t.get("AB123456"), Some(7));
        assert_eq!(t.kind(), UsageKind::Visits);
    }

    #[test]
    fn rejects_duplicates() {
        let err = parse("id,count\nU00096,1\nU00096.2,2\n").unwrap_err();
        assert!(matches!(err, IngestError::DuplicateId { line: 3, ref id } if id == "U00096"));
    }

    #[test]
    fn rejects_negative() {
        assert!(matches!(
            parse("id,count\nX,-3\n"),
            Err(IngestError::NegativeCount { line: 2, .. })
        ));
    }

    #[test]
    fn id_map() {
        let m = parse_id_map("pmid,doi\n1,10.1/a\n2,10.1/b\n".as_bytes()).unwrap();
        assert_eq!(m["2"], "10.1/b");
        assert!(parse_id_map("pmid,doi\n1,a\n1,b\n".as_bytes()).is_err());
    }

    #[test]
    fn rejects_non_integer() {
        assert!(matches!(
            parse("id,count\nX,many\n"),
            Err(IngestError::MalformedRow { line: 2, .. })
        ));
    }
}

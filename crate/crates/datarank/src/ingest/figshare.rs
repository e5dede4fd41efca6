use std::collections::HashSet;
use std::io::Read;

use super::delimited::two_column_strict;
use super::IngestError;

/// Item type code Figshare assigns to datasets.
pub const FIGSHARE_DATASET_TYPE: u32 = 3;

/// Ids containing "figshare" in any case, first occurrence kept. DOIs
/// compare case-insensitively, so `10.6084/M9.FIGSHARE.1` duplicates
/// `10.6084/m9.figshare.1`.
pub fn detect_figshare_dois<'a, I>(cited_ids: I) -> Vec<String>
where
    I: IntoIterator<Item = &'a str>,
{
    let mut seen = HashSet::new();
    cited_ids
        .into_iter()
        .filter(|id| id.to_ascii_lowercase().contains("figshare"))
        .filter(|id| seen.insert(id.to_ascii_lowercase()))
        .map(str::to_owned)
        .collect()
}

pub fn filter_figshare_by_type<'a, I>(doi_metadata: I) -> Vec<String>
where
    I: IntoIterator<Item = &'a (String, u32)>,
{
    doi_metadata
        .into_iter()
        .filter(|(_, code)| *code == FIGSHARE_DATASET_TYPE)
        .map(|(doi, _)| doi.clone())
        .collect()
}

/// Reads a `doi,type_code` export.
pub fn parse_figshare_metadata<R: Read>(input: R) -> Result<Vec<(String, u32)>, IngestError> {
    two_column_strict(input)?
        .into_iter()
        .map(|(line, doi, code)| {
            let code = code.parse().map_err(|_| IngestError::MalformedRow {
                line,
                reason: format!("type code `{code}` is not a non-negative integer"),
            })?;
            Ok((doi, code))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn detects_and_dedups() {
        let ids = [
            "10.6084/m9.figshare.6741260",
            "10.1/x",
            "10.6084/M9.Figshare.6741260",
            "10.6084/m9.figshare.6741260",
        ];
        assert_eq!(detect_figshare_dois(ids), ["10.6084/m9.figshare.6741260"]);
        assert!(detect_figshare_dois([]).is_empty());
    }

    #[test]
    fn keeps_type_three() {
        let rows = vec![("d1".to_owned(), 3), ("d2".to_owned(), 1)];
        assert_eq!(filter_figshare_by_type(&rows), ["d1"]);
        assert!(filter_figshare_by_type(&Vec::new()).is_empty());
    }

    #[test]
    fn parses_metadata() {
        let rows =
            parse_figshare_metadata("doi,type_code\n10.6084/m9.figshare.1,3\n10.6084/m9.figshare.2,1\n".as_bytes())
                .unwrap();
        assert_eq!(
            rows,
            [
                ("10.6084/m9.figshare.1".to_owned(), 3),
                ("10.6084/m9.figshare.2".to_owned(), 1)
            ]
        );
        assert!(parse_figshare_metadata("doi,type_code\nx,three\n".as_bytes()).is_err());
    }
}

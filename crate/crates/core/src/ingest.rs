//! Game-log CSV ingestion and season aggregation.
//!
//! Expected format, one row per team-game (each physical game appears twice,
//! once per participating team):
//!
//! ```text
//! date,team_id,opponent_id,runs_scored,runs_allowed
//! 2012-04-05,PIT,PHI,0,1
//! ```
//!
//! UTF-8, LF or CRLF line endings, header required.

use crate::error::{Error, Result, RowError};
use crate::fit::TeamSeason;

use serde::{Deserialize, Serialize};

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

pub const GAME_LOG_HEADER: &str = "date,team_id,opponent_id,runs_scored,runs_allowed";

/// Share of invalid data rows above which the whole log is rejected.
const MAX_INVALID_FRACTION: f64 = 0.05;

/// One team-game from a game log.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameLogRecord {
    pub date: String,
    pub team_id: String,
    pub opponent_id: String,
    pub runs_scored: u32,
    pub runs_allowed: u32,
}

/// Successfully parsed records plus the rows that were rejected (when few
/// enough to keep going).
#[derive(Debug, Clone)]
pub struct ParsedLog {
    pub records: Vec<GameLogRecord>,
    pub row_errors: Vec<RowError>,
}

pub fn parse_game_log_path(path: &Path) -> Result<ParsedLog> {
    parse_game_log(BufReader::new(File::open(path)?))
}

/// Parses a game log, collecting per-row errors with line numbers. Fails
/// outright on a bad header or when more than 5% of data rows are invalid.
pub fn parse_game_log<R: BufRead>(reader: R) -> Result<ParsedLog> {
    let mut lines = reader.lines();
    let header = match lines.next() {
        Some(line) => line?,
        None => return Err(Error::Input("empty game log: missing header".into())),
    };
    let header = header.trim_end_matches('\r').trim_start_matches('\u{feff}');
    if header != GAME_LOG_HEADER {
        return Err(Error::Input(format!(
            "unexpected header {header:?}; expected {GAME_LOG_HEADER:?}"
        )));
    }

    let mut records = Vec::new();
    let mut row_errors = Vec::new();
    let mut data_rows = 0usize;
    for (idx, line) in lines.enumerate() {
        let line_no = idx + 2; // header is line 1
        let line = line?;
        let line = line.trim_end_matches('\r');
        if line.is_empty() {
            continue;
        }
        data_rows += 1;
        match parse_row(line) {
            Ok(rec) => records.push(rec),
            Err(message) => row_errors.push(RowError {
                line: line_no,
                message,
            }),
        }
    }

    if data_rows > 0 && row_errors.len() as f64 > MAX_INVALID_FRACTION * data_rows as f64 {
        return Err(Error::MalformedLog {
            total_rows: data_rows,
            errors: row_errors,
        });
    }
    Ok(ParsedLog {
        records,
        row_errors,
    })
}

fn parse_row(line: &str) -> std::result::Result<GameLogRecord, String> {
    let fields: Vec<&str> = line.split(',').collect();
    if fields.len() != 5 {
        return Err(format!("expected 5 columns, got {}", fields.len()));
    }
    let date = fields[0].trim();
    if !is_iso_date(date) {
        return Err(format!("date {date:?} is not ISO-8601 (YYYY-MM-DD)"));
    }
    let team_id = fields[1].trim();
    let opponent_id = fields[2].trim();
    if team_id.is_empty() || opponent_id.is_empty() {
        return Err("team_id and opponent_id must be nonempty".into());
    }
    if team_id == opponent_id {
        return Err(format!("team {team_id:?} cannot play itself"));
    }
    let runs_scored: u32 = fields[3]
        .trim()
        .parse()
        .map_err(|_| format!("runs_scored {:?} is not a nonnegative integer", fields[3]))?;
    let runs_allowed: u32 = fields[4]
        .trim()
        .parse()
        .map_err(|_| format!("runs_allowed {:?} is not a nonnegative integer", fields[4]))?;
    if runs_scored == runs_allowed {
        return Err(format!(
            "tie violation: runs_scored == runs_allowed == {runs_scored}"
        ));
    }
    Ok(GameLogRecord {
        date: date.to_string(),
        team_id: team_id.to_string(),
        opponent_id: opponent_id.to_string(),
        runs_scored,
        runs_allowed,
    })
}

fn is_iso_date(s: &str) -> bool {
    let b = s.as_bytes();
    if b.len() != 10 || b[4] != b'-' || b[7] != b'-' {
        return false;
    }
    let digits = |range: std::ops::Range<usize>| b[range].iter().all(u8::is_ascii_digit);
    if !digits(0..4) || !digits(5..7) || !digits(8..10) {
        return false;
    }
    let month: u32 = s[5..7].parse().unwrap_or(0);
    let day: u32 = s[8..10].parse().unwrap_or(0);
    (1..=12).contains(&month) && (1..=31).contains(&day)
}

/// Cross-checks paired perspectives: when both teams of a game appear in the
/// log, their score lines must mirror each other. Returns human-readable
/// warnings; doubleheaders are handled by comparing multisets per day.
pub fn validate_pairs(records: &[GameLogRecord]) -> Vec<String> {
    type Key<'a> = (&'a str, &'a str, &'a str);
    let mut sides: BTreeMap<Key, (Vec<(u32, u32)>, Vec<(u32, u32)>)> = BTreeMap::new();
    for r in records {
        let (first, second) = if r.team_id <= r.opponent_id {
            (r.team_id.as_str(), r.opponent_id.as_str())
        } else {
            (r.opponent_id.as_str(), r.team_id.as_str())
        };
        let entry = sides
            .entry((r.date.as_str(), first, second))
            .or_default();
        if r.team_id.as_str() == first {
            entry.0.push((r.runs_scored, r.runs_allowed));
        } else {
            entry.1.push((r.runs_scored, r.runs_allowed));
        }
    }

    let mut warnings = Vec::new();
    for ((date, a, b), (mut from_a, from_b)) in sides {
        if from_a.is_empty() || from_b.is_empty() {
            continue; // single-perspective log; nothing to cross-check
        }
        let mut mirrored: Vec<(u32, u32)> =
            from_b.iter().map(|&(rs, ra)| (ra, rs)).collect();
        from_a.sort_unstable();
        mirrored.sort_unstable();
        if from_a != mirrored {
            warnings.push(format!(
                "{date}: {a} vs {b}: paired rows disagree ({from_a:?} vs mirrored {mirrored:?})"
            ));
        }
    }
    warnings
}

/// Groups records into one season per team id, in team-id order.
pub fn aggregate_seasons(records: &[GameLogRecord]) -> Result<Vec<TeamSeason>> {
    let mut by_team: BTreeMap<&str, Vec<(u32, u32)>> = BTreeMap::new();
    for r in records {
        by_team
            .entry(r.team_id.as_str())
            .or_default()
            .push((r.runs_scored, r.runs_allowed));
    }
    by_team
        .into_iter()
        .map(|(team, games)| TeamSeason::new(team, games))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Cursor;

    fn parse(text: &str) -> Result<ParsedLog> {
        parse_game_log(Cursor::new(text.to_string()))
    }

    #[test]
    fn empty_log_with_header() {
        let out = parse("date,team_id,opponent_id,runs_scored,runs_allowed\n").unwrap();
        assert!(out.records.is_empty());
        assert!(out.row_errors.is_empty());
    }

    #[test]
    fn parses_single_row() {
        let out = parse(
            "date,team_id,opponent_id,runs_scored,runs_allowed\n2012-04-05,PIT,PHI,0,1\n",
        )
        .unwrap();
        assert_eq!(out.records.len(), 1);
        let r = &out.records[0];
        assert_eq!(r.team_id, "PIT");
        assert_eq!(r.opponent_id, "PHI");
        assert_eq!(r.runs_scored, 0);
        assert_eq!(r.runs_allowed, 1);
    }

    #[test]
    fn accepts_crlf() {
        let out = parse(
            "date,team_id,opponent_id,runs_scored,runs_allowed\r\n2012-04-05,PIT,PHI,2,1\r\n",
        )
        .unwrap();
        assert_eq!(out.records.len(), 1);
    }

    #[test]
    fn missing_header_is_fatal() {
        assert!(parse("2012-04-05,PIT,PHI,0,1\n").is_err());
        assert!(parse("").is_err());
    }

    #[test]
    fn tie_rows_are_rejected_with_line_numbers() {
        let out = parse(
            "date,team_id,opponent_id,runs_scored,runs_allowed\n\
             2012-04-05,PIT,PHI,3,1\n\
             2012-04-06,PIT,PHI,4,4\n\
             2012-04-07,PIT,PHI,2,5\n\
             2012-04-08,PIT,PHI,1,0\n\
             2012-04-09,PIT,PHI,6,2\n\
             2012-04-10,PIT,PHI,3,2\n\
             2012-04-11,PIT,PHI,0,8\n\
             2012-04-12,PIT,PHI,5,4\n\
             2012-04-13,PIT,PHI,2,1\n\
             2012-04-14,PIT,PHI,7,3\n\
             2012-04-15,PIT,PHI,1,2\n\
             2012-04-16,PIT,PHI,4,6\n\
             2012-04-17,PIT,PHI,2,0\n\
             2012-04-18,PIT,PHI,3,5\n\
             2012-04-19,PIT,PHI,9,1\n\
             2012-04-20,PIT,PHI,0,3\n\
             2012-04-21,PIT,PHI,5,2\n\
             2012-04-22,PIT,PHI,1,4\n\
             2012-04-23,PIT,PHI,6,0\n\
             2012-04-24,PIT,PHI,2,7\n",
        )
        .unwrap();
        assert_eq!(out.records.len(), 19);
        assert_eq!(out.row_errors.len(), 1);
        assert_eq!(out.row_errors[0].line, 3);
        assert!(out.row_errors[0].message.contains("tie"));
    }

    #[test]
    fn too_many_bad_rows_is_fatal() {
        let err = parse(
            "date,team_id,opponent_id,runs_scored,runs_allowed\n\
             2012-04-05,PIT,PHI,3,3\n\
             2012-04-06,PIT,PHI,x,1\n\
             2012-04-07,PIT,PHI,2,5\n",
        )
        .unwrap_err();
        match err {
            Error::MalformedLog { total_rows, errors } => {
                assert_eq!(total_rows, 3);
                assert_eq!(errors.len(), 2);
            }
            other => panic!("expected MalformedLog, got {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_dates_and_columns() {
        let out = parse(
            "date,team_id,opponent_id,runs_scored,runs_allowed\n\
             2012-13-05,PIT,PHI,3,1\n\
             2012-04-05,PIT,PHI,3\n\
             20120405,PIT,PHI,3,1\n\
             2012-04-05,PIT,PIT,3,1\n\
             2012-04-05,PIT,PHI,3,1\n\
             2012-04-06,PIT,PHI,1,0\n\
             2012-04-07,PIT,PHI,2,8\n\
            ",
        );
        // 4 bad of 7 rows: fatal.
        assert!(out.is_err());
    }

    #[test]
    fn pair_validation_flags_mismatches() {
        let log = parse(
            "date,team_id,opponent_id,runs_scored,runs_allowed\n\
             2012-04-05,PIT,PHI,3,1\n\
             2012-04-05,PHI,PIT,1,3\n\
             2012-04-06,PIT,PHI,2,5\n\
             2012-04-06,PHI,PIT,4,2\n",
        )
        .unwrap();
        let warnings = validate_pairs(&log.records);
        assert_eq!(warnings.len(), 1);
        assert!(warnings[0].contains("2012-04-06"));
    }

    #[test]
    fn pair_validation_handles_doubleheaders() {
        let log = parse(
            "date,team_id,opponent_id,runs_scored,runs_allowed\n\
             2012-04-05,PIT,PHI,3,1\n\
             2012-04-05,PIT,PHI,2,6\n\
             2012-04-05,PHI,PIT,6,2\n\
             2012-04-05,PHI,PIT,1,3\n",
        )
        .unwrap();
        assert!(validate_pairs(&log.records).is_empty());
    }

    #[test]
    fn single_perspective_log_passes_pair_check() {
        let log = parse(
            "date,team_id,opponent_id,runs_scored,runs_allowed\n\
             2012-04-05,PIT,PHI,3,1\n",
        )
        .unwrap();
        assert!(validate_pairs(&log.records).is_empty());
    }

    #[test]
    fn aggregation_groups_and_counts_wins() {
        let log = parse(
            "date,team_id,opponent_id,runs_scored,runs_allowed\n\
             2012-04-05,PIT,PHI,3,1\n\
             2012-04-05,PHI,PIT,1,3\n\
             2012-04-06,PIT,PHI,2,5\n\
             2012-04-06,PHI,PIT,5,2\n\
             2012-04-07,ATL,NYN,4,0\n",
        )
        .unwrap();
        let seasons = aggregate_seasons(&log.records).unwrap();
        assert_eq!(seasons.len(), 3);
        assert_eq!(seasons[0].team_id(), "ATL");
        assert_eq!(seasons[1].team_id(), "PHI");
        assert_eq!(seasons[2].team_id(), "PIT");
        let pit = &seasons[2];
        assert_eq!(pit.n_games(), 2);
        assert_eq!(pit.wins(), 1);
    }
}

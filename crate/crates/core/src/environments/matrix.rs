//! Plain-text loss matrices: one round per line, `K` comma-separated
//! decimals, `#` starts a comment, blank lines are skipped, no header.

use std::path::Path;

use super::EnvironmentError;
use crate::simplex::LossRange;

pub fn parse_loss_matrix(text: &str, range: LossRange) -> Result<Vec<Vec<f64>>, EnvironmentError> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let row = line
            .split(',')
            .map(|field| {
                let field = field.trim();
                field.parse::<f64>().map_err(|_| {
                    EnvironmentError::Input(format!("line {}: cannot parse {field:?}", lineno + 1))
                })
            })
            .collect::<Result<Vec<f64>, _>>()?;
        if row.len() < 2 {
            return Err(EnvironmentError::Input(format!(
                "line {}: need at least two losses",
                lineno + 1
            )));
        }
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(EnvironmentError::Input(format!(
                    "line {}: {} losses, earlier rows have {}",
                    lineno + 1,
                    row.len(),
                    first.len()
                )));
            }
        }
        if let Some(bad) = row.iter().find(|l| !range.contains(**l)) {
            return Err(EnvironmentError::Input(format!(
                "line {}: loss {bad} outside {range:?}",
                lineno + 1
            )));
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(EnvironmentError::Input("loss matrix has no rows".into()));
    }
    Ok(rows)
}

pub fn load_loss_matrix(path: &Path, range: LossRange) -> Result<Vec<Vec<f64>>, EnvironmentError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| EnvironmentError::Io(format!("{}: {e}", path.display())))?;
    parse_loss_matrix(&text, range)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_rows_and_comments() {
        let text = "# two arms\n0.2,0.8\n\n 1, 0 # trailing\n";
        let rows = parse_loss_matrix(text, LossRange::Unit).unwrap();
        assert_eq!(rows, vec![vec![0.2, 0.8], vec![1.0, 0.0]]);
    }

    #[test]
    fn rejects_ragged_and_out_of_range() {
        assert!(parse_loss_matrix("0.1,0.2\n0.3\n", LossRange::Unit).is_err());
        assert!(parse_loss_matrix("0.1,0.2\n0.3,0.1,0.5\n", LossRange::Unit).is_err());
        assert!(parse_loss_matrix("-0.5,0.2\n", LossRange::Unit).is_err());
        assert!(parse_loss_matrix("-0.5,0.2\n", LossRange::Signed).is_ok());
        assert!(parse_loss_matrix("a,b\n", LossRange::Unit).is_err());
        assert!(parse_loss_matrix("# nothing\n", LossRange::Unit).is_err());
    }
}

//! Plain-text CSV exchange: `row,col,re,im` for matrices and
//! `index,re,im` for fields.

use std::fmt::Write as _;

use num_complex::Complex64;

use super::field::Field;
use super::grid::GridSpec;
use super::sparse::SparseMatrix;
use crate::error::LatticeError;

pub const MATRIX_HEADER: &str = "row,col,re,im";
pub const FIELD_HEADER: &str = "index,re,im";

pub fn matrix_to_csv(m: &SparseMatrix) -> String {
    let mut out = format!("{MATRIX_HEADER}\n");
    for (r, c, v) in m.triplets() {
        let _ = writeln!(out, "{r},{c},{:e},{:e}", v.re, v.im);
    }
    out
}

fn bad(line: usize, what: &str) -> LatticeError {
    LatticeError::Csv(format!("line {line}: {what}"))
}

fn records(text: &str, header: &str, width: usize) -> Result<Vec<(usize, Vec<String>)>, LatticeError> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim() == header => {}
        _ => return Err(bad(1, &format!("expected header `{header}`"))),
    }
    lines
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            let cells: Vec<String> = l.split(',').map(|c| c.trim().to_string()).collect();
            if cells.len() != width {
                return Err(bad(i + 1, &format!("expected {width} cells")));
            }
            Ok((i + 1, cells))
        })
        .collect()
}

fn num<T: std::str::FromStr>(line: usize, cell: &str) -> Result<T, LatticeError> {
    cell.parse().map_err(|_| bad(line, &format!("cannot parse `{cell}`")))
}

pub fn matrix_from_csv(text: &str, rows: usize, cols: usize) -> Result<SparseMatrix, LatticeError> {
    let mut triplets = Vec::new();
    for (line, cells) in records(text, MATRIX_HEADER, 4)? {
        let (r, c): (usize, usize) = (num(line, &cells[0])?, num(line, &cells[1])?);
        if r >= rows || c >= cols {
            return Err(bad(line, "index outside matrix"));
        }
        triplets.push((r, c, Complex64::new(num(line, &cells[2])?, num(line, &cells[3])?)));
    }
    Ok(SparseMatrix::from_triplets(rows, cols, triplets))
}

pub fn field_to_csv(f: &Field) -> String {
    let mut out = format!("{FIELD_HEADER}\n");
    for (i, v) in f.values().iter().enumerate() {
        let _ = writeln!(out, "{i},{:e},{:e}", v.re, v.im);
    }
    out
}

pub fn field_from_csv(text: &str, grid: GridSpec, components: usize) -> Result<Field, LatticeError> {
    let len = components * grid.nodes();
    let mut values = vec![Complex64::new(0.0, 0.0); len];
    let mut seen = vec![false; len];
    for (line, cells) in records(text, FIELD_HEADER, 3)? {
        let i: usize = num(line, &cells[0])?;
        if i >= len || seen[i] {
            return Err(bad(line, "index out of range or repeated"));
        }
        seen[i] = true;
        values[i] = Complex64::new(num(line, &cells[1])?, num(line, &cells[2])?);
    }
    if seen.iter().any(|s| !s) {
        return Err(LatticeError::Csv("field csv is missing indices".into()));
    }
    Field::new(grid, components, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn matrix_csv_round_trips(entries in proptest::collection::vec((0usize..5, 0usize..4, -1e3f64..1e3, -1e3f64..1e3), 0..20)) {
            let m = SparseMatrix::from_triplets(5, 4, entries.into_iter().map(|(r, c, a, b)| (r, c, Complex64::new(a, b))));
            prop_assert_eq!(matrix_from_csv(&matrix_to_csv(&m), 5, 4).unwrap(), m);
        }
    }

    #[test]
    fn field_csv_round_trips() {
        let g = GridSpec::new(1.5, 8).unwrap();
        let f = Field::from_fn(g, 2, |c, z| z * (c as f64 + 0.1));
        assert_eq!(field_from_csv(&field_to_csv(&f), g, 2).unwrap(), f);
    }

    #[test]
    fn malformed_input() {
        assert!(matrix_from_csv("r,c\n", 2, 2).is_err());
        assert!(matrix_from_csv("row,col,re,im\n5,0,1,0\n", 2, 2).is_err());
        let g = GridSpec::new(1.0, 8).unwrap();
        assert!(field_from_csv("index,re,im\n0,1,0\n", g, 1).is_err());
    }
}

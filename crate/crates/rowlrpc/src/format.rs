//! Plain-text serializations.
//!
//! * element: coordinates least degree first, comma separated: `1,0,1`
//! * vector: elements separated by single spaces on one line
//! * matrix: one vector per line
//! * subspace: one canonical basis element per line (empty for `{0}`)
//! * code: a header line `q m n k rho <modulus>` followed by the parity
//!   check matrix, the modulus written like an element of length `m + 1`
//!
//! Blank lines and lines starting with `#` are skipped when reading.

use rowlrpc_core::codes::RowLrpcCode;
use rowlrpc_core::linalg::VectorFqm;
use rowlrpc_core::{FieldContext, FieldElement, MatrixFqm, Subspace};

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Core(#[from] rowlrpc_core::Error),
}

fn parse_err(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Parse { line, msg: msg.into() }
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_digits(s: &str, line: usize) -> Result<Vec<u8>, FormatError> {
    s.split(',')
        .map(|c| c.trim().parse::<u8>().map_err(|e| parse_err(line, format!("bad coordinate {c:?}: {e}"))))
        .collect()
}

pub fn element_to_string(a: &FieldElement) -> String {
    a.to_string()
}

pub fn parse_element(ctx: &FieldContext, s: &str) -> Result<FieldElement, FormatError> {
    parse_element_at(ctx, s, 1)
}

fn parse_element_at(ctx: &FieldContext, s: &str, line: usize) -> Result<FieldElement, FormatError> {
    let coords = parse_digits(s, line)?;
    ctx.element(&coords).map_err(|e| parse_err(line, format!("{e}")))
}

pub fn vector_to_string(v: &[FieldElement]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

fn parse_vector_at(ctx: &FieldContext, s: &str, line: usize) -> Result<VectorFqm, FormatError> {
    s.split_whitespace().map(|t| parse_element_at(ctx, t, line)).collect()
}

/// Reads the first content line as a vector.
pub fn parse_vector(ctx: &FieldContext, text: &str) -> Result<VectorFqm, FormatError> {
    match content_lines(text).next() {
        Some((line, l)) => parse_vector_at(ctx, l, line),
        None => Ok(Vec::new()),
    }
}

pub fn matrix_to_string(m: &MatrixFqm) -> String {
    let mut out = String::new();
    for i in 0..m.rows() {
        out.push_str(&vector_to_string(m.row(i)));
        out.push('\n');
    }
    out
}

pub fn parse_matrix(ctx: &FieldContext, text: &str) -> Result<MatrixFqm, FormatError> {
    let rows = content_lines(text).map(|(line, l)| parse_vector_at(ctx, l, line)).collect::<Result<Vec<_>, _>>()?;
    Ok(MatrixFqm::from_rows(rows)?)
}

pub fn subspace_to_string(v: &Subspace) -> String {
    v.basis().iter().map(|b| format!("{b}\n")).collect()
}

/// Parses basis lines and returns their span (canonicalized).
pub fn parse_subspace(ctx: &FieldContext, text: &str) -> Result<Subspace, FormatError> {
    let elems = content_lines(text).map(|(line, l)| parse_element_at(ctx, l, line)).collect::<Result<Vec<_>, _>>()?;
    Ok(Subspace::span(ctx, &elems)?)
}

pub fn code_to_string(code: &RowLrpcCode) -> String {
    let ctx = code.ctx();
    let modulus = ctx.modulus().iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",");
    format!(
        "{} {} {} {} {} {}\n{}",
        ctx.q(),
        ctx.m(),
        code.n(),
        code.k(),
        code.rho(),
        modulus,
        matrix_to_string(code.parity_check())
    )
}

/// Reads a code file. Row supports are taken as the spans of the rows.
pub fn parse_code(text: &str) -> Result<RowLrpcCode, FormatError> {
    let mut lines = content_lines(text);
    let (hline, header) = lines.next().ok_or_else(|| parse_err(1, "missing header"))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 6 {
        return Err(parse_err(hline, "header must be `q m n k rho modulus`"));
    }
    let num = |s: &str| s.parse::<usize>().map_err(|e| parse_err(hline, format!("bad header field {s:?}: {e}")));
    let (q, m, n, k, rho) = (num(fields[0])?, num(fields[1])?, num(fields[2])?, num(fields[3])?, num(fields[4])?);
    let modulus = parse_digits(fields[5], hline)?;
    let q = u32::try_from(q).map_err(|_| parse_err(hline, "q out of range"))?;
    let ctx = FieldContext::new(q, m, &modulus)?;
    let rows = lines.map(|(line, l)| parse_vector_at(&ctx, l, line)).collect::<Result<Vec<_>, _>>()?;
    if rows.len() + k != n || rows.iter().any(|r| r.len() != n) {
        return Err(parse_err(hline, "parity check matrix must be (n-k) x n"));
    }
    let h = MatrixFqm::from_rows(rows)?;
    Ok(RowLrpcCode::from_parity_check(&ctx, n, k, rho, h)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rowlrpc_core::codes::sample_row_lrpc;

    #[test]
    fn element_roundtrip() {
        let ctx = FieldContext::new(2, 3, &[1, 1, 0, 1]).unwrap();
        let a = ctx.element(&[1, 0, 1]).unwrap();
        assert_eq!(element_to_string(&a), "1,0,1");
        assert_eq!(parse_element(&ctx, "1,0,1").unwrap(), a);
        assert!(parse_element(&ctx, "1,0").is_err());
        assert!(parse_element(&ctx, "1,2,0").is_err());
        assert!(parse_element(&ctx, "1,x,0").is_err());
    }

    #[test]
    fn code_roundtrip() {
        let ctx = FieldContext::with_default_modulus(3, 7).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let code = sample_row_lrpc(&ctx, 9, 5, 2, &mut rng).unwrap();
        let text = code_to_string(&code);
        assert!(text.starts_with("3 7 9 5 2 "));
        let back = parse_code(&format!("# comment\n\n{text}")).unwrap();
        assert_eq!(back, code);
    }

    #[test]
    fn subspace_and_vector_roundtrip() {
        let ctx = FieldContext::with_default_modulus(2, 10).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let v = Subspace::random(&ctx, 3, &mut rng).unwrap();
        assert_eq!(parse_subspace(&ctx, &subspace_to_string(&v)).unwrap(), v);
        assert_eq!(parse_subspace(&ctx, "").unwrap(), Subspace::zero());
        let vec: Vec<_> = (0..5).map(|_| ctx.random_element(&mut rng)).collect();
        assert_eq!(parse_vector(&ctx, &vector_to_string(&vec)).unwrap(), vec);
    }

    #[test]
    fn bad_code_files() {
        assert!(parse_code("").is_err());
        assert!(parse_code("2 3 4 2 1").is_err());
        assert!(parse_code("2 3 4 2 1 1,1,0,1\n1,0,0 0,0,0 0,0,0 0,0,0\n").is_err());
        let err = parse_code("2 3 2 1 1 1,1,0,1\n1,0,0 0,1,0\n").unwrap_err();
        assert!(matches!(err, FormatError::Core(_)), "{err}");
    }
}

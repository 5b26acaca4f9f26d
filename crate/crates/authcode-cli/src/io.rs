//! Text file formats.
//!
//! All formats are decimal integers separated by whitespace, with `#`
//! starting a comment that runs to the end of the line. Indices are
//! 1-based. Parse errors carry the line and column of the offending
//! token.
//!
//! - code file: `q V k`, then `k` rows of `V` integers in `[0, q)`
//! - key matrix file: `q M k`, then `M+1` rows of `k` integers
//! - distributed key file: `q M k V`, then `M+1` rows of `V` integers
//! - receiver key file: `i`, then `M+1` integers
//! - tagged message line: `s t_1 ... t_k`
//! - scenario file: `key = value` lines (see [`parse_scenario`])

use std::fmt;
use std::path::PathBuf;

use authcode::code::LinearCode;
use authcode::field::FieldSpec;
use authcode::matrix::Matrix;
use authcode::scheme::{PrivateKey, TaggedMessage};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    fn at(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError { line, column, message: message.into() }
    }

    fn eof(message: impl Into<String>) -> Self {
        ParseError { line: 0, column: 0, message: message.into() }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            write!(f, "unexpected end of input: {}", self.message)
        } else {
            write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    line: usize,
    column: usize,
    text: String,
}

fn tokenize(content: &str) -> Vec<Token> {
    let mut out = Vec::new();
    for (li, raw) in content.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        let mut col = 0;
        for piece in line.split_whitespace() {
            let column = line[col..].find(piece).map(|p| col + p).unwrap_or(col);
            col = column + piece.len();
            out.push(Token { line: li + 1, column: column + 1, text: piece.to_string() });
        }
    }
    out
}

struct Tokens {
    items: Vec<Token>,
    pos: usize,
}

impl Tokens {
    fn new(content: &str) -> Self {
        Tokens { items: tokenize(content), pos: 0 }
    }

    fn next_u64(&mut self, what: &str) -> Result<(u64, usize, usize), ParseError> {
        let Some(tok) = self.items.get(self.pos) else {
            return Err(ParseError::eof(format!("expected {what}")));
        };
        self.pos += 1;
        match tok.text.parse::<u64>() {
            Ok(v) => Ok((v, tok.line, tok.column)),
            Err(_) => Err(ParseError::at(
                tok.line,
                tok.column,
                format!("expected {what}, found `{}`", tok.text),
            )),
        }
    }

    fn finish(&self) -> Result<(), ParseError> {
        match self.items.get(self.pos) {
            None => Ok(()),
            Some(tok) => Err(ParseError::at(
                tok.line,
                tok.column,
                format!("unexpected trailing token `{}`", tok.text),
            )),
        }
    }

    fn residue(&mut self, q: u64, what: &str) -> Result<u64, ParseError> {
        let (v, line, column) = self.next_u64(what)?;
        if v >= q {
            return Err(ParseError::at(
                line,
                column,
                format!("{what} {v} is out of range 0..{q}"),
            ));
        }
        Ok(v)
    }
}

fn read_rows(tokens: &mut Tokens, q: u64, rows: usize, cols: usize) -> Result<Vec<Vec<u64>>, ParseError> {
    let mut out = Vec::with_capacity(rows);
    for r in 0..rows {
        let mut row = Vec::with_capacity(cols);
        for c in 0..cols {
            row.push(tokens.residue(q, &format!("entry ({},{})", r + 1, c + 1))?);
        }
        out.push(row);
    }
    Ok(out)
}

/// Parse a code file: `q V k`, then `k` rows of `V` integers in `[0, q)`.
pub fn parse_code(content: &str) -> Result<LinearCode, ParseError> {
    let mut tokens = Tokens::new(content);
    let (q, ql, qc) = tokens.next_u64("field size q")?;
    let (v, vl, vc) = tokens.next_u64("code length V")?;
    let (k, kl, kc) = tokens.next_u64("code dimension k")?;
    if v == 0 {
        return Err(ParseError::at(vl, vc, "code length must be positive"));
    }
    if k == 0 || k > v {
        return Err(ParseError::at(kl, kc, format!("dimension k must satisfy 1 <= k <= {v}")));
    }
    let rows = read_rows(&mut tokens, q, k as usize, v as usize)?;
    tokens.finish()?;
    LinearCode::from_rows(q, &rows).map_err(|e| ParseError::at(ql, qc, e.to_string()))
}

/// Parse a key matrix file: `q M k`, then `M+1` rows of `k` integers.
pub fn parse_key_matrix(content: &str) -> Result<(FieldSpec, usize, Matrix), ParseError> {
    let mut tokens = Tokens::new(content);
    let (q, ql, qc) = tokens.next_u64("field size q")?;
    let (m, ml, mc) = tokens.next_u64("message budget M")?;
    let (k, kl, kc) = tokens.next_u64("code dimension k")?;
    if m == 0 {
        return Err(ParseError::at(ml, mc, "message budget M must be at least 1"));
    }
    if k == 0 {
        return Err(ParseError::at(kl, kc, "dimension k must be positive"));
    }
    let spec = FieldSpec::new(q).map_err(|e| ParseError::at(ql, qc, e.to_string()))?;
    let rows = read_rows(&mut tokens, q, m as usize + 1, k as usize)?;
    tokens.finish()?;
    let matrix = Matrix::from_rows(spec, &rows).map_err(|e| ParseError::at(ql, qc, e.to_string()))?;
    Ok((spec, m as usize, matrix))
}

/// Parse a distributed key file: `q M k V`, then `M+1` rows of `V`
/// integers (the matrix `B`).
pub fn parse_distributed(content: &str) -> Result<(FieldSpec, usize, usize, Matrix), ParseError> {
    let mut tokens = Tokens::new(content);
    let (q, ql, qc) = tokens.next_u64("field size q")?;
    let (m, ml, mc) = tokens.next_u64("message budget M")?;
    let (k, kl, kc) = tokens.next_u64("code dimension k")?;
    let (v, vl, vc) = tokens.next_u64("code length V")?;
    if m == 0 {
        return Err(ParseError::at(ml, mc, "message budget M must be at least 1"));
    }
    if k == 0 {
        return Err(ParseError::at(kl, kc, "dimension k must be positive"));
    }
    if v == 0 {
        return Err(ParseError::at(vl, vc, "length V must be positive"));
    }
    let spec = FieldSpec::new(q).map_err(|e| ParseError::at(ql, qc, e.to_string()))?;
    let rows = read_rows(&mut tokens, q, m as usize + 1, v as usize)?;
    tokens.finish()?;
    let matrix = Matrix::from_rows(spec, &rows).map_err(|e| ParseError::at(ql, qc, e.to_string()))?;
    Ok((spec, m as usize, k as usize, matrix))
}

/// Parse a per-receiver key file: `i`, then `M+1` integers. The field and
/// budget come from context (the code file and the tag width).
pub fn parse_receiver_key(content: &str, spec: FieldSpec) -> Result<PrivateKey, ParseError> {
    let mut tokens = Tokens::new(content);
    let (i, il, ic) = tokens.next_u64("receiver index")?;
    if i == 0 {
        return Err(ParseError::at(il, ic, "receiver index is 1-based"));
    }
    let q = u64::from(spec.modulus());
    let mut column = Vec::new();
    while tokens.pos < tokens.items.len() {
        column.push(spec.element(tokens.residue(q, "key entry")?));
    }
    if column.is_empty() {
        return Err(ParseError::eof("receiver key needs at least one entry"));
    }
    Ok(PrivateKey::new(i as usize, column))
}

/// Parse a tagged message line `s t_1 ... t_k`.
pub fn parse_tagged(content: &str, spec: FieldSpec, k: usize) -> Result<TaggedMessage, ParseError> {
    let mut tokens = Tokens::new(content);
    let q = u64::from(spec.modulus());
    let s = spec.element(tokens.residue(q, "message s")?);
    let mut tag = Vec::with_capacity(k);
    for j in 0..k {
        tag.push(spec.element(tokens.residue(q, &format!("tag coordinate {}", j + 1))?));
    }
    tokens.finish()?;
    Ok(TaggedMessage { message: s, tag })
}

/// An attack scenario, from a file or from flags.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scenario {
    pub code: PathBuf,
    pub messages: usize,
    pub seed: u64,
    pub coalition: Vec<usize>,
    pub target: usize,
    pub observed: Vec<u64>,
    pub fresh: u64,
}

/// Parse a scenario file of `key = value` lines. Keys: `code`,
/// `messages`, `seed`, `coalition`, `target`, `observed`, `fresh`.
/// List values are comma-separated. `observed` may be empty or absent
/// (pure impersonation).
pub fn parse_scenario(content: &str) -> Result<Scenario, ParseError> {
    let mut code = None;
    let mut messages = None;
    let mut seed = 0u64;
    let mut coalition = None;
    let mut target = None;
    let mut observed = Vec::new();
    let mut fresh = None;

    for (li, raw) in content.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let lineno = li + 1;
        let Some((key, value)) = line.split_once('=') else {
            return Err(ParseError::at(lineno, 1, "expected `key = value`"));
        };
        let key = key.trim();
        let value = value.trim();
        let col = raw.find('=').map(|p| p + 2).unwrap_or(1);
        match key {
            "code" => code = Some(PathBuf::from(value)),
            "messages" => {
                messages = Some(parse_number(value, lineno, col, "messages")? as usize)
            }
            "seed" => seed = parse_number(value, lineno, col, "seed")?,
            "coalition" => coalition = Some(parse_list(value, lineno, col, "coalition")?),
            "target" => target = Some(parse_number(value, lineno, col, "target")? as usize),
            "observed" => {
                observed = parse_list(value, lineno, col, "observed")?;
            }
            "fresh" => fresh = Some(parse_number(value, lineno, col, "fresh")?),
            other => {
                return Err(ParseError::at(lineno, 1, format!("unknown scenario key `{other}`")))
            }
        }
    }

    Ok(Scenario {
        code: code.ok_or_else(|| ParseError::eof("scenario is missing `code`"))?,
        messages: messages.ok_or_else(|| ParseError::eof("scenario is missing `messages`"))?,
        seed,
        coalition: coalition
            .ok_or_else(|| ParseError::eof("scenario is missing `coalition`"))?
            .iter()
            .map(|&v| v as usize)
            .collect(),
        target: target.ok_or_else(|| ParseError::eof("scenario is missing `target`"))?,
        observed,
        fresh: fresh.ok_or_else(|| ParseError::eof("scenario is missing `fresh`"))?,
    })
}

fn parse_number(value: &str, line: usize, col: usize, what: &str) -> Result<u64, ParseError> {
    value
        .parse::<u64>()
        .map_err(|_| ParseError::at(line, col, format!("{what}: expected an integer, found `{value}`")))
}

fn parse_list(value: &str, line: usize, col: usize, what: &str) -> Result<Vec<u64>, ParseError> {
    if value.is_empty() {
        return Ok(Vec::new());
    }
    value
        .split(',')
        .map(|piece| {
            piece.trim().parse::<u64>().map_err(|_| {
                ParseError::at(line, col, format!("{what}: expected an integer, found `{piece}`"))
            })
        })
        .collect()
}

/// Comma-separated list flag (`1,2,3`).
pub fn parse_index_list(value: &str) -> Result<Vec<usize>, String> {
    if value.trim().is_empty() {
        return Ok(Vec::new());
    }
    value
        .split(',')
        .map(|piece| {
            piece
                .trim()
                .parse::<usize>()
                .map_err(|_| format!("expected an integer, found `{piece}`"))
        })
        .collect()
}

pub fn parse_value_list(value: &str) -> Result<Vec<u64>, String> {
    if value.trim().is_empty() {
        return Ok(Vec::new());
    }
    value
        .split(',')
        .map(|piece| {
            piece
                .trim()
                .parse::<u64>()
                .map_err(|_| format!("expected an integer, found `{piece}`"))
        })
        .collect()
}

// --------------------------------------------------------------------------
// writers
// --------------------------------------------------------------------------

pub fn render_code(code: &LinearCode) -> String {
    let mut s = format!("{} {} {}\n", code.spec().modulus(), code.length(), code.dimension());
    for r in 0..code.dimension() {
        s.push_str(&row_text(code.generator().row(r)));
        s.push('\n');
    }
    s
}

pub fn render_key_matrix(q: u16, m: usize, matrix: &Matrix) -> String {
    let mut s = format!("{} {} {}\n", q, m, matrix.cols());
    for r in 0..matrix.rows() {
        s.push_str(&row_text(matrix.row(r)));
        s.push('\n');
    }
    s
}

pub fn render_distributed(q: u16, m: usize, k: usize, b: &Matrix) -> String {
    let mut s = format!("{} {} {} {}\n", q, m, k, b.cols());
    for r in 0..b.rows() {
        s.push_str(&row_text(b.row(r)));
        s.push('\n');
    }
    s
}

pub fn render_receiver_key(key: &PrivateKey) -> String {
    format!("{}\n{}\n", key.receiver(), row_text(key.column()))
}

pub fn render_tagged(msg: &TaggedMessage) -> String {
    let mut parts = vec![msg.message.to_string()];
    parts.extend(msg.tag.iter().map(|e| e.to_string()));
    parts.join(" ")
}

fn row_text(row: &[authcode::field::FieldElement]) -> String {
    row.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(" ")
}

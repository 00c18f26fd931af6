//! MMP hypergraph notation.
//!
//! ```text
//! hypergraph := edge ("," edge)* "." [ws coordblock]
//! edge       := label+
//! coordblock := "{" assign ("," assign)* "}"
//! assign     := label "=" "{" component ("," component)* "}"
//! label      := "+"* char
//! ```
//!
//! `char` ranges over a fixed 90-symbol alphabet; vertex `k` is drawn with
//! `k / 90` plus signs in front of symbol `k % 90`. Whitespace is allowed
//! between coordinate-block tokens only.

use std::collections::HashMap;
use std::io::BufRead;
use std::sync::Arc;

use crate::cyclotomic::{infer_field_order, parse_component, FieldContext};
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::ray::Ray;

pub use crate::hypergraph::mmp_violations as validate_mmp_condition;

pub const ALPHABET: &[u8; 90] = b"123456789ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz!\"#$%&'()*-/:;<=>?@[\\]^_`{|}~";

fn symbol_index(b: u8) -> Option<usize> {
    ALPHABET.iter().position(|&c| c == b)
}

pub fn label_for(index: usize) -> String {
    let depth = index / ALPHABET.len();
    let mut s = "+".repeat(depth);
    s.push(ALPHABET[index % ALPHABET.len()] as char);
    s
}

pub fn index_for(label: &str) -> Option<usize> {
    let bytes = label.as_bytes();
    let depth = bytes.iter().take_while(|&&b| b == b'+').count();
    match &bytes[depth..] {
        [c] => symbol_index(*c).map(|i| depth * ALPHABET.len() + i),
        _ => None,
    }
}

struct Cursor<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b) if b.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn label(&mut self) -> Result<&'a str> {
        let start = self.pos;
        while self.peek() == Some(b'+') {
            self.pos += 1;
        }
        match self.peek() {
            Some(b) if symbol_index(b).is_some() => {
                self.pos += 1;
                // alphabet is ASCII, so this slice is valid UTF-8
                Ok(std::str::from_utf8(&self.src[start..self.pos]).unwrap())
            }
            None if self.pos > start => Err(Error::MalformedLabel(start)),
            None => Err(Error::Unterminated),
            _ => Err(Error::MalformedLabel(start)),
        }
    }

    fn expect(&mut self, b: u8) -> Result<()> {
        self.skip_ws();
        match self.peek() {
            Some(c) if c == b => {
                self.pos += 1;
                Ok(())
            }
            None => Err(Error::UnexpectedEnd),
            Some(_) => Err(Error::Syntax {
                pos: self.pos,
                msg: format!("expected `{}`", b as char),
            }),
        }
    }
}

/// Parse one hypergraph, inferring the coordinate field from the tokens.
pub fn parse_hypergraph(text: &str) -> Result<Hypergraph> {
    parse_hypergraph_in(text, None)
}

/// Parse one hypergraph; coordinate tokens are read in `Q(zeta_order)` when
/// `field_order` is given.
pub fn parse_hypergraph_in(text: &str, field_order: Option<u32>) -> Result<Hypergraph> {
    let text = text.trim();
    let mut cur = Cursor {
        src: text.as_bytes(),
        pos: 0,
    };
    let mut index: HashMap<&str, u32> = HashMap::new();
    let mut labels: Vec<String> = Vec::new();
    let mut edges: Vec<Vec<u32>> = Vec::new();
    let mut edge: Vec<u32> = Vec::new();
    loop {
        match cur.peek() {
            None => return Err(Error::Unterminated),
            Some(b @ (b',' | b'.')) => {
                if edge.is_empty() {
                    return Err(Error::EmptyEdge(edges.len()));
                }
                edges.push(std::mem::take(&mut edge));
                cur.pos += 1;
                if b == b'.' {
                    break;
                }
            }
            Some(_) => {
                let l = cur.label()?;
                let v = *index.entry(l).or_insert_with(|| {
                    labels.push(l.to_string());
                    labels.len() as u32 - 1
                });
                if edge.contains(&v) {
                    return Err(Error::DuplicateVertex {
                        label: l.to_string(),
                        edge: edges.len(),
                    });
                }
                edge.push(v);
            }
        }
    }
    let mut h = Hypergraph::with_labels(labels.len(), edges, labels)?;

    cur.skip_ws();
    if cur.peek().is_none() {
        return Ok(h);
    }
    let raw = parse_coord_block(&mut cur)?;
    cur.skip_ws();
    if cur.peek().is_some() {
        return Err(Error::Syntax {
            pos: cur.pos,
            msg: "trailing input after coordinatization".into(),
        });
    }

    let order = match field_order {
        Some(n) => n,
        None => {
            let tokens: Vec<&str> = raw.iter().flat_map(|(_, t)| t.iter().copied()).collect();
            infer_field_order(&tokens)?
        }
    };
    let ctx = FieldContext::new(order)?;
    let mut coords: Vec<Option<Ray>> = vec![None; h.vertex_count()];
    for (label, tokens) in raw {
        let v = *index
            .get(label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))?;
        if coords[v as usize].is_some() {
            return Err(Error::BadCoordinates(format!(
                "vertex `{label}` given twice"
            )));
        }
        let ray = parse_ray(&tokens, &ctx)?;
        if let Some(first) = coords.iter().flatten().next() {
            if first.dim() != ray.dim() {
                return Err(Error::BadCoordinates(format!(
                    "vertex `{label}` has {} components, expected {}",
                    ray.dim(),
                    first.dim()
                )));
            }
        }
        coords[v as usize] = Some(ray);
    }
    h.set_coordinatization(coords);
    Ok(h)
}

fn parse_ray(tokens: &[&str], ctx: &Arc<FieldContext>) -> Result<Ray> {
    let entries = tokens
        .iter()
        .map(|t| parse_component(t, ctx))
        .collect::<Result<Vec<_>>>()?;
    Ray::new(entries)
}

type RawAssign<'a> = (&'a str, Vec<&'a str>);

fn parse_coord_block<'a>(cur: &mut Cursor<'a>) -> Result<Vec<RawAssign<'a>>> {
    cur.expect(b'{')?;
    let mut out = Vec::new();
    loop {
        cur.skip_ws();
        if cur.peek().is_none() {
            return Err(Error::UnexpectedEnd);
        }
        let label = cur.label().map_err(|e| match e {
            Error::Unterminated => Error::UnexpectedEnd,
            e => e,
        })?;
        cur.expect(b'=')?;
        cur.expect(b'{')?;
        let mut tokens = Vec::new();
        loop {
            cur.skip_ws();
            let start = cur.pos;
            while matches!(cur.peek(), Some(b) if b != b',' && b != b'}' && b != b'{') {
                cur.pos += 1;
            }
            let tok = std::str::from_utf8(&cur.src[start..cur.pos])
                .map_err(|_| Error::Syntax {
                    pos: start,
                    msg: "non-UTF-8 component".into(),
                })?
                .trim();
            if cur.peek().is_none() {
                return Err(Error::UnexpectedEnd);
            }
            if tok.is_empty() {
                return Err(Error::Syntax {
                    pos: start,
                    msg: "empty component".into(),
                });
            }
            tokens.push(tok);
            match cur.peek() {
                Some(b',') => cur.pos += 1,
                Some(b'}') => {
                    cur.pos += 1;
                    break;
                }
                _ => {
                    return Err(Error::Syntax {
                        pos: cur.pos,
                        msg: "unexpected `{` in component list".into(),
                    })
                }
            }
        }
        out.push((label, tokens));
        cur.skip_ws();
        match cur.peek() {
            Some(b',') => cur.pos += 1,
            Some(b'}') => {
                cur.pos += 1;
                return Ok(out);
            }
            None => return Err(Error::UnexpectedEnd),
            Some(_) => {
                return Err(Error::Syntax {
                    pos: cur.pos,
                    msg: "expected `,` or `}` between assignments".into(),
                })
            }
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct SerializeOptions {
    pub coordinates: bool,
    /// Largest number of `+` prefixes allowed on a label; `None` is unlimited.
    pub max_prefix: Option<usize>,
}

pub fn serialize_hypergraph(h: &Hypergraph, include_coordinatization: bool) -> String {
    serialize_with(
        h,
        &SerializeOptions {
            coordinates: include_coordinatization,
            max_prefix: None,
        },
    )
    .expect("unlimited prefix depth cannot fail")
}

pub fn serialize_with(h: &Hypergraph, opts: &SerializeOptions) -> Result<String> {
    if let Some(cap) = opts.max_prefix {
        for (v, l) in h.labels().iter().enumerate() {
            let depth = l.bytes().take_while(|&b| b == b'+').count();
            if depth > cap {
                return Err(Error::PrefixDepth(v, depth, cap));
            }
        }
    }
    let mut out = String::new();
    for (i, e) in h.edges().iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        for &v in e {
            out.push_str(h.label(v as usize));
        }
    }
    out.push('.');
    if opts.coordinates {
        if let Some(coords) = h.coordinatization() {
            let mut first = true;
            out.push('{');
            for (v, r) in coords.iter().enumerate() {
                if let Some(r) = r {
                    if !first {
                        out.push(',');
                    }
                    first = false;
                    out.push_str(h.label(v));
                    out.push('=');
                    out.push_str(&r.to_string());
                }
            }
            out.push('}');
        }
    }
    Ok(out)
}

/// Reads a multi-hypergraph file: one hypergraph per line, with blank lines
/// and `#` comments skipped. A coordinatization block may span lines.
///
/// Yields `(line number, result)`, the line number being where the record starts.
pub struct HypergraphReader<R> {
    inner: R,
    line_no: usize,
    field_order: Option<u32>,
}

impl<R: BufRead> HypergraphReader<R> {
    pub fn new(inner: R) -> Self {
        HypergraphReader {
            inner,
            line_no: 0,
            field_order: None,
        }
    }

    pub fn with_field_order(mut self, order: Option<u32>) -> Self {
        self.field_order = order;
        self
    }

    fn next_line(&mut self) -> Option<std::io::Result<String>> {
        let mut buf = String::new();
        match self.inner.read_line(&mut buf) {
            Ok(0) => None,
            Ok(_) => {
                self.line_no += 1;
                Some(Ok(buf))
            }
            Err(e) => Some(Err(e)),
        }
    }
}

impl<R: BufRead> Iterator for HypergraphReader<R> {
    type Item = (usize, std::result::Result<Hypergraph, ReadError>);

    fn next(&mut self) -> Option<Self::Item> {
        let mut record = loop {
            match self.next_line()? {
                Err(e) => return Some((self.line_no, Err(ReadError::Io(e.to_string())))),
                Ok(l) => {
                    let t = l.trim();
                    if t.is_empty() || t.starts_with('#') {
                        continue;
                    }
                    break l;
                }
            }
        };
        let start = self.line_no;
        loop {
            match parse_hypergraph_in(&record, self.field_order) {
                Err(Error::UnexpectedEnd) => match self.next_line() {
                    Some(Ok(l)) => record.push_str(&l),
                    Some(Err(e)) => return Some((start, Err(ReadError::Io(e.to_string())))),
                    None => return Some((start, Err(ReadError::Parse(Error::UnexpectedEnd)))),
                },
                other => return Some((start, other.map_err(ReadError::Parse))),
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ReadError {
    #[error("{0}")]
    Parse(#[from] Error),
    #[error("i/o error: {0}")]
    Io(String),
}

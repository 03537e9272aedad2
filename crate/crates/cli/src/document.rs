//! The text format for factorizations, structures and morphisms.
//!
//! ```text
//! # comments run to the end of the line
//! vars: x y
//! potential "w": x*y
//! mf "M" potential "w" { phi: [[x]] psi: [[y]] }
//! structure "B" on "M" { kind: untwisted; sign: +1; b0: [[1]]; b1: [[-1]] }
//! morphism "f" from "M" to "M" degree even { S: [[1]] T: [[1]] }
//! ```
//!
//! A potential runs to the end of its line. Everything else is free-form.
//! Matrix entries are polynomial expressions separated by commas.

use std::fmt::{self, Write as _};
use std::sync::Arc;

use mfkit::bilinear::{BilinearStructure, Sign, StructureKind};
use mfkit::{MatrixFactorization, MorphismPair, Parity, PolyMatrix, Polynomial, Vars};

use crate::error::CliError;

#[derive(Clone, Debug, PartialEq)]
pub struct NamedPotential {
    pub name: String,
    pub poly: Polynomial,
}

#[derive(Clone, Debug, PartialEq)]
pub struct NamedMf {
    pub name: String,
    pub potential: String,
    pub mf: Arc<MatrixFactorization>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct NamedStructure {
    pub name: String,
    pub host: String,
    pub structure: BilinearStructure,
}

#[derive(Clone, Debug, PartialEq)]
pub struct NamedMorphism {
    pub name: String,
    pub source: String,
    pub target: String,
    pub morphism: MorphismPair,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Document {
    pub vars: Vars,
    pub potentials: Vec<NamedPotential>,
    pub mfs: Vec<NamedMf>,
    pub structures: Vec<NamedStructure>,
    pub morphisms: Vec<NamedMorphism>,
}

impl Document {
    pub fn new(vars: Vars) -> Self {
        Document {
            vars,
            potentials: Vec::new(),
            mfs: Vec::new(),
            structures: Vec::new(),
            morphisms: Vec::new(),
        }
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        Parser::new(text).document()
    }

    pub fn potential(&self, name: &str) -> Result<&NamedPotential, CliError> {
        self.potentials
            .iter()
            .find(|p| p.name == name)
            .ok_or_else(|| CliError::Undefined(format!("potential \"{name}\"")))
    }

    pub fn mf(&self, name: &str) -> Result<&NamedMf, CliError> {
        self.mfs
            .iter()
            .find(|p| p.name == name)
            .ok_or_else(|| CliError::Undefined(format!("mf \"{name}\"")))
    }

    pub fn structure(&self, name: &str) -> Result<&NamedStructure, CliError> {
        self.structures
            .iter()
            .find(|p| p.name == name)
            .ok_or_else(|| CliError::Undefined(format!("structure \"{name}\"")))
    }

    pub fn morphism(&self, name: &str) -> Result<&NamedMorphism, CliError> {
        self.morphisms
            .iter()
            .find(|p| p.name == name)
            .ok_or_else(|| CliError::Undefined(format!("morphism \"{name}\"")))
    }

    /// Adds a factorization, reusing an existing potential with the same
    /// polynomial or creating one named `potential_name`.
    pub fn push_mf(&mut self, name: &str, potential_name: &str, mf: MatrixFactorization) {
        let existing = self.potentials.iter().find(|p| &p.poly == mf.potential()).map(|p| p.name.clone());
        let potential = existing.unwrap_or_else(|| {
            self.potentials.push(NamedPotential {
                name: potential_name.to_string(),
                poly: mf.potential().clone(),
            });
            potential_name.to_string()
        });
        self.mfs.push(NamedMf {
            name: name.to_string(),
            potential,
            mf: Arc::new(mf),
        });
    }

    pub fn push_structure(&mut self, name: &str, host: &str, structure: BilinearStructure) {
        self.structures.push(NamedStructure {
            name: name.to_string(),
            host: host.to_string(),
            structure,
        });
    }
}

fn write_matrix(out: &mut String, m: &PolyMatrix) {
    out.push('[');
    for i in 0..m.rows() {
        if i > 0 {
            out.push_str(", ");
        }
        out.push('[');
        for j in 0..m.cols() {
            if j > 0 {
                out.push_str(", ");
            }
            let _ = write!(out, "{}", m.get(i, j));
        }
        out.push(']');
    }
    out.push(']');
}

impl fmt::Display for Document {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        let _ = writeln!(out, "vars: {}", self.vars.names().join(" "));
        for p in &self.potentials {
            let _ = writeln!(out, "potential \"{}\": {}", p.name, p.poly);
        }
        for m in &self.mfs {
            let _ = writeln!(out, "mf \"{}\" potential \"{}\" {{", m.name, m.potential);
            out.push_str("  phi: ");
            write_matrix(&mut out, m.mf.phi());
            out.push_str("\n  psi: ");
            write_matrix(&mut out, m.mf.psi());
            out.push_str("\n}\n");
        }
        for s in &self.structures {
            let b = &s.structure;
            let _ = writeln!(out, "structure \"{}\" on \"{}\" {{", s.name, s.host);
            let _ = writeln!(out, "  kind: {}; sign: {}", b.kind(), b.sign());
            out.push_str("  b0: ");
            write_matrix(&mut out, b.b0());
            out.push_str("\n  b1: ");
            write_matrix(&mut out, b.b1());
            out.push_str("\n}\n");
        }
        for m in &self.morphisms {
            let _ = writeln!(
                out,
                "morphism \"{}\" from \"{}\" to \"{}\" degree {} {{",
                m.name,
                m.source,
                m.target,
                m.morphism.parity()
            );
            out.push_str("  S: ");
            write_matrix(&mut out, m.morphism.s());
            out.push_str("\n  T: ");
            write_matrix(&mut out, m.morphism.t());
            out.push_str("\n}\n");
        }
        f.write_str(&out)
    }
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser { text, pos: 0 }
    }

    fn location(&self, pos: usize) -> (usize, usize) {
        let before = &self.text[..pos];
        let line = before.matches('\n').count() + 1;
        let column = before.rfind('\n').map_or(before.chars().count(), |i| before[i + 1..].chars().count()) + 1;
        (line, column)
    }

    fn error_at(&self, pos: usize, message: impl Into<String>) -> CliError {
        let (line, column) = self.location(pos);
        CliError::Parse {
            line,
            column,
            message: message.into(),
        }
    }

    fn rest(&self) -> &'a str {
        &self.text[self.pos..]
    }

    fn skip_ws(&mut self) {
        loop {
            let rest = self.rest();
            let trimmed = rest.trim_start();
            self.pos += rest.len() - trimmed.len();
            if trimmed.starts_with('#') {
                self.pos += trimmed.find('\n').unwrap_or(trimmed.len());
            } else {
                break;
            }
        }
    }

    /// Skips spaces and tabs only.
    fn skip_inline_ws(&mut self) {
        let rest = self.rest();
        let trimmed = rest.trim_start_matches([' ', '\t']);
        self.pos += rest.len() - trimmed.len();
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos >= self.text.len()
    }

    fn peek_char(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    fn expect_char(&mut self, c: char) -> Result<(), CliError> {
        self.skip_ws();
        if self.rest().starts_with(c) {
            self.pos += c.len_utf8();
            Ok(())
        } else {
            Err(self.error_at(self.pos, format!("expected `{c}`, found {}", self.describe_next())))
        }
    }

    fn eat_char(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.rest().starts_with(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn describe_next(&self) -> String {
        match self.rest().chars().next() {
            None => "end of input".into(),
            Some(c) => format!("`{c}`"),
        }
    }

    fn word(&mut self) -> Result<(usize, &'a str), CliError> {
        self.skip_ws();
        let start = self.pos;
        let len = self
            .rest()
            .find(|c: char| !(c.is_alphanumeric() || c == '_'))
            .unwrap_or(self.rest().len());
        if len == 0 {
            return Err(self.error_at(start, format!("expected a word, found {}", self.describe_next())));
        }
        self.pos += len;
        Ok((start, &self.text[start..start + len]))
    }

    fn keyword(&mut self, kw: &str) -> Result<(), CliError> {
        let (at, w) = self.word()?;
        if w == kw {
            Ok(())
        } else {
            Err(self.error_at(at, format!("expected `{kw}`, found `{w}`")))
        }
    }

    fn string(&mut self) -> Result<(usize, String), CliError> {
        self.skip_ws();
        let start = self.pos;
        if !self.rest().starts_with('"') {
            return Err(self.error_at(start, format!("expected a quoted name, found {}", self.describe_next())));
        }
        let body = &self.rest()[1..];
        let Some(end) = body.find(['"', '\n']).filter(|&i| body[i..].starts_with('"')) else {
            return Err(self.error_at(start, "unterminated name"));
        };
        let name = body[..end].to_string();
        if name.is_empty() {
            return Err(self.error_at(start, "empty name"));
        }
        self.pos += end + 2;
        Ok((start, name))
    }

    fn polynomial(&self, start: usize, text: &str, vars: &Vars) -> Result<Polynomial, CliError> {
        Polynomial::parse(text, vars).map_err(|e| match e {
            mfkit::Error::Parse { column, message } => {
                let lead = text.len() - text.trim_start().len();
                self.error_at(start + lead + column.saturating_sub(1).min(text.trim_start().len()), message)
            }
            other => self.error_at(start, other.to_string()),
        })
    }

    fn matrix(&mut self, vars: &Vars) -> Result<(usize, PolyMatrix), CliError> {
        self.skip_ws();
        let start = self.pos;
        self.expect_char('[')?;
        let mut rows: Vec<Vec<Polynomial>> = Vec::new();
        let mut row_starts = Vec::new();
        loop {
            self.skip_ws();
            row_starts.push(self.pos);
            self.expect_char('[')?;
            let mut row = Vec::new();
            loop {
                self.skip_ws();
                let at = self.pos;
                let len = self.rest().find([',', ']', '[', '\n', '#']).unwrap_or(self.rest().len());
                let raw = &self.text[at..at + len];
                if raw.trim().is_empty() {
                    return Err(self.error_at(at, format!("expected a matrix entry, found {}", self.describe_next())));
                }
                self.pos += len;
                row.push(self.polynomial(at, raw.trim_end(), vars)?);
                if self.eat_char(',') {
                    continue;
                }
                self.expect_char(']')?;
                break;
            }
            rows.push(row);
            if self.eat_char(',') {
                continue;
            }
            self.expect_char(']')?;
            break;
        }
        let width = rows[0].len();
        if let Some(i) = rows.iter().position(|r| r.len() != width) {
            return Err(self.error_at(
                row_starts[i],
                format!("row {} has {} entries, expected {width}", i + 1, rows[i].len()),
            ));
        }
        let m = PolyMatrix::from_rows(vars, rows).map_err(|e| self.error_at(start, e.to_string()))?;
        Ok((start, m))
    }

    /// Reads `name: <matrix>` fields until `}` in any order; separators
    /// `;` and `,` are optional.
    fn fields(&mut self, allowed: &[&str], vars: &Vars) -> Result<Vec<(usize, String, FieldValue)>, CliError> {
        self.expect_char('{')?;
        let mut out: Vec<(usize, String, FieldValue)> = Vec::new();
        loop {
            while self.eat_char(';') || self.eat_char(',') {}
            if self.eat_char('}') {
                break;
            }
            let (at, key) = self.word()?;
            if !allowed.contains(&key) {
                return Err(self.error_at(at, format!("unexpected field `{key}`; expected one of {}", allowed.join(", "))));
            }
            if out.iter().any(|(_, k, _)| k == key) {
                return Err(self.error_at(at, format!("duplicate field `{key}`")));
            }
            self.expect_char(':')?;
            let value = if self.peek_char() == Some('[') {
                FieldValue::Matrix(self.matrix(vars)?.1)
            } else {
                self.skip_ws();
                let start = self.pos;
                let len = self
                    .rest()
                    .find(|c: char| c.is_whitespace() || c == ';' || c == ',' || c == '}')
                    .unwrap_or(self.rest().len());
                self.pos += len;
                FieldValue::Word(start, self.text[start..start + len].to_string())
            };
            out.push((at, key.to_string(), value));
        }
        for key in allowed {
            if !out.iter().any(|(_, k, _)| k == key) {
                return Err(self.error_at(self.pos - 1, format!("missing field `{key}`")));
            }
        }
        Ok(out)
    }

    fn document(mut self) -> Result<Document, CliError> {
        if self.at_end() {
            return Err(self.error_at(self.pos, "empty document; expected `vars:`"));
        }
        self.keyword("vars")?;
        self.expect_char(':')?;
        self.skip_inline_ws();
        let start = self.pos;
        let line_len = self.rest().find(['\n', '#']).unwrap_or(self.rest().len());
        let names: Vec<&str> = self.text[start..start + line_len].split_whitespace().collect();
        self.pos += line_len;
        if names.is_empty() {
            return Err(self.error_at(start, "expected at least one variable name"));
        }
        let vars = Vars::new(&names).map_err(|e| self.error_at(start, e.to_string()))?;
        let mut doc = Document::new(vars.clone());
        let mut seen: std::collections::HashSet<String> = std::collections::HashSet::new();
        let mut claim = |p: &Parser, at: usize, name: &str| -> Result<(), CliError> {
            if seen.insert(name.to_string()) {
                Ok(())
            } else {
                let (line, column) = p.location(at);
                Err(CliError::Duplicate {
                    name: name.to_string(),
                    line,
                    column,
                })
            }
        };
        while !self.at_end() {
            let (at, kw) = self.word()?;
            match kw {
                "potential" => {
                    let (nat, name) = self.string()?;
                    claim(&self, nat, &name)?;
                    self.expect_char(':')?;
                    self.skip_inline_ws();
                    let start = self.pos;
                    let len = self.rest().find(['\n', '#']).unwrap_or(self.rest().len());
                    let raw = &self.text[start..start + len];
                    if raw.trim().is_empty() {
                        return Err(self.error_at(start, "expected a polynomial"));
                    }
                    self.pos += len;
                    let poly = self.polynomial(start, raw.trim_end(), &vars)?;
                    doc.potentials.push(NamedPotential { name, poly });
                }
                "mf" => {
                    let (nat, name) = self.string()?;
                    claim(&self, nat, &name)?;
                    self.keyword("potential")?;
                    let (pat, pname) = self.string()?;
                    let w = doc
                        .potential(&pname)
                        .map_err(|e| self.located(pat, e))?
                        .poly
                        .clone();
                    let fields = self.fields(&["phi", "psi"], &vars)?;
                    let phi = take_matrix(&self, &fields, "phi")?;
                    let psi = take_matrix(&self, &fields, "psi")?;
                    let mf = MatrixFactorization::new(phi, psi, w).map_err(|e| self.error_at(nat, e.to_string()))?;
                    doc.mfs.push(NamedMf {
                        name,
                        potential: pname,
                        mf: Arc::new(mf),
                    });
                }
                "structure" => {
                    let (nat, name) = self.string()?;
                    claim(&self, nat, &name)?;
                    self.keyword("on")?;
                    let (hat, host) = self.string()?;
                    let mf = doc.mf(&host).map_err(|e| self.located(hat, e))?.mf.clone();
                    let fields = self.fields(&["kind", "sign", "b0", "b1"], &vars)?;
                    let kind = match take_word(&self, &fields, "kind")? {
                        (_, "untwisted") => StructureKind::Untwisted,
                        (_, "twisted") => StructureKind::Twisted,
                        (p, other) => {
                            return Err(self.error_at(p, format!("expected `untwisted` or `twisted`, found `{other}`")))
                        }
                    };
                    let sign = match take_word(&self, &fields, "sign")? {
                        (_, "+1") => Sign::Plus,
                        (_, "-1") => Sign::Minus,
                        (p, other) => return Err(self.error_at(p, format!("expected `+1` or `-1`, found `{other}`"))),
                    };
                    let b0 = take_matrix(&self, &fields, "b0")?;
                    let b1 = take_matrix(&self, &fields, "b1")?;
                    let structure =
                        BilinearStructure::new(mf, kind, sign, b0, b1).map_err(|e| self.error_at(nat, e.to_string()))?;
                    doc.structures.push(NamedStructure { name, host, structure });
                }
                "morphism" => {
                    let (nat, name) = self.string()?;
                    claim(&self, nat, &name)?;
                    self.keyword("from")?;
                    let (sat, source) = self.string()?;
                    self.keyword("to")?;
                    let (tat, target) = self.string()?;
                    self.keyword("degree")?;
                    let (dat, deg) = self.word()?;
                    let parity = match deg {
                        "even" => Parity::Even,
                        "odd" => Parity::Odd,
                        other => return Err(self.error_at(dat, format!("expected `even` or `odd`, found `{other}`"))),
                    };
                    let src = doc.mf(&source).map_err(|e| self.located(sat, e))?.mf.clone();
                    let tgt = doc.mf(&target).map_err(|e| self.located(tat, e))?.mf.clone();
                    let fields = self.fields(&["S", "T"], &vars)?;
                    let s = take_matrix(&self, &fields, "S")?;
                    let t = take_matrix(&self, &fields, "T")?;
                    let morphism =
                        MorphismPair::new(src, tgt, parity, s, t).map_err(|e| self.error_at(nat, e.to_string()))?;
                    doc.morphisms.push(NamedMorphism {
                        name,
                        source,
                        target,
                        morphism,
                    });
                }
                other => {
                    return Err(self.error_at(
                        at,
                        format!("expected `potential`, `mf`, `structure` or `morphism`, found `{other}`"),
                    ))
                }
            }
        }
        Ok(doc)
    }

    fn located(&self, at: usize, e: CliError) -> CliError {
        let (line, column) = self.location(at);
        match e {
            CliError::Undefined(what) => CliError::UndefinedAt { what, line, column },
            other => other,
        }
    }
}

enum FieldValue {
    Matrix(PolyMatrix),
    Word(usize, String),
}

fn find<'f>(
    p: &Parser,
    fields: &'f [(usize, String, FieldValue)],
    key: &str,
) -> Result<&'f (usize, String, FieldValue), CliError> {
    fields
        .iter()
        .find(|(_, k, _)| k == key)
        .ok_or_else(|| p.error_at(p.pos, format!("missing field `{key}`")))
}

fn take_matrix(p: &Parser, fields: &[(usize, String, FieldValue)], key: &str) -> Result<PolyMatrix, CliError> {
    match find(p, fields, key)? {
        (_, _, FieldValue::Matrix(m)) => Ok(m.clone()),
        (at, _, FieldValue::Word(..)) => Err(p.error_at(*at, format!("field `{key}` must be a matrix"))),
    }
}

fn take_word<'f>(p: &Parser, fields: &'f [(usize, String, FieldValue)], key: &str) -> Result<(usize, &'f str), CliError> {
    match find(p, fields, key)? {
        (_, _, FieldValue::Word(at, w)) => Ok((*at, w.as_str())),
        (at, _, FieldValue::Matrix(_)) => Err(p.error_at(*at, format!("field `{key}` must be a word"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const NODE: &str = "\
# the node
vars: x y
potential \"w\": x*y
mf \"M\" potential \"w\" { phi: [[x]] psi: [[y]] }
structure \"B\" on \"M\" { kind: untwisted; sign: +1; b0: [[1]]; b1: [[-1]] }
morphism \"f\" from \"M\" to \"M\" degree even { S: [[1]] T: [[1]] }
";

    #[test]
    fn parses_and_round_trips() {
        let doc = Document::parse(NODE).unwrap();
        assert_eq!(doc.mfs.len(), 1);
        assert!(doc.mfs[0].mf.is_valid());
        assert!(doc.structures[0].structure.is_valid());
        let again = Document::parse(&doc.to_string()).unwrap();
        assert_eq!(doc, again);
        assert_eq!(again.to_string(), doc.to_string());
    }

    #[test]
    fn row_length_mismatch_has_position() {
        let text = "vars: x y\npotential \"w\": x*y\nmf \"M\" potential \"w\" {\n  phi: [[x, 0], [0]]\n  psi: [[y]]\n}\n";
        match Document::parse(text) {
            Err(CliError::Parse { line, column, message }) => {
                assert_eq!((line, column), (4, 17), "{message}");
                assert!(message.contains("row 2"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn undefined_and_duplicate_names() {
        let text = "vars: x y\npotential \"w\": x*y\nstructure \"B\" on \"N\" { kind: untwisted; sign: +1; b0: [[1]]; b1: [[-1]] }\n";
        assert!(matches!(
            Document::parse(text),
            Err(CliError::UndefinedAt { line: 3, column: 18, .. })
        ));
        let text = "vars: x y\npotential \"w\": x*y\npotential \"w\": x\n";
        assert!(matches!(Document::parse(text), Err(CliError::Duplicate { line: 3, .. })));
    }

    #[test]
    fn polynomial_errors_point_into_the_line() {
        let text = "vars: x y\npotential \"w\": x*q\n";
        match Document::parse(text) {
            Err(CliError::Parse { line, column, .. }) => assert_eq!((line, column), (2, 18)),
            other => panic!("unexpected {other:?}"),
        }
    }
}

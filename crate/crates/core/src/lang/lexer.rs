//! Tokenizer shared by specification files, configurations and formulas.

use super::Diagnostic;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TokenKind {
    Ident(String),
    Nat(u64),
    /// Punctuation, possibly multi-character (`->`, `/\`, `<=`, ...).
    Sym(String),
}

#[derive(Clone, Debug)]
pub struct Token {
    pub kind: TokenKind,
    pub line: usize,
    pub col: usize,
    /// Byte offsets into the source.
    pub start: usize,
    pub end: usize,
}

impl Token {
    pub fn is_sym(&self, s: &str) -> bool {
        matches!(&self.kind, TokenKind::Sym(x) if x == s)
    }

    pub fn is_ident(&self, s: &str) -> bool {
        matches!(&self.kind, TokenKind::Ident(x) if x == s)
    }

    pub fn describe(&self) -> String {
        match &self.kind {
            TokenKind::Ident(s) | TokenKind::Sym(s) => format!("'{s}'"),
            TokenKind::Nat(n) => format!("'{n}'"),
        }
    }
}

const MULTI: [&str; 5] = ["->", "/\\", "\\/", "<=", ">="];

fn is_ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

/// Splits `src` into tokens. Lines starting (after whitespace) with `***`
/// and anything following `***` are comments.
pub fn tokenize(src: &str) -> Result<Vec<Token>, Diagnostic> {
    let mut out = Vec::new();
    let mut line = 1;
    let mut col = 1;
    let mut it = src.char_indices().peekable();

    while let Some(&(i, c)) = it.peek() {
        if c == '\n' {
            it.next();
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            it.next();
            col += 1;
            continue;
        }
        if src[i..].starts_with("***") {
            while let Some(&(_, c)) = it.peek() {
                if c == '\n' {
                    break;
                }
                it.next();
            }
            continue;
        }
        let (tok_line, tok_col) = (line, col);
        let kind;
        let end;
        if c.is_ascii_digit() {
            let mut j = i;
            while let Some(&(k, d)) = it.peek() {
                if !d.is_ascii_digit() {
                    break;
                }
                j = k + d.len_utf8();
                it.next();
                col += 1;
            }
            let n = src[i..j].parse::<u64>().map_err(|_| {
                Diagnostic::new(tok_line, tok_col, format!("number too large: {}", &src[i..j]))
            })?;
            kind = TokenKind::Nat(n);
            end = j;
        } else if is_ident_start(c) {
            let mut j = i;
            while let Some(&(k, d)) = it.peek() {
                if !is_ident_char(d) {
                    break;
                }
                j = k + d.len_utf8();
                it.next();
                col += 1;
            }
            kind = TokenKind::Ident(src[i..j].to_string());
            end = j;
        } else if let Some(m) = MULTI.iter().find(|m| src[i..].starts_with(**m)) {
            for _ in 0..m.len() {
                it.next();
                col += 1;
            }
            kind = TokenKind::Sym(m.to_string());
            end = i + m.len();
        } else {
            it.next();
            col += 1;
            kind = TokenKind::Sym(c.to_string());
            end = i + c.len_utf8();
        }
        out.push(Token {
            kind,
            line: tok_line,
            col: tok_col,
            start: i,
            end,
        });
    }
    Ok(out)
}

//! Recursive-descent parsers for `.memb` files and configuration terms.

use std::collections::BTreeSet;

use super::ast::*;
use super::lexer::{tokenize, Token, TokenKind};
use super::validate::validate_spec;
use super::Diagnostic;
use crate::model::{
    Argument, Label, Membrane, MembraneName, Multiset, Object, Soup, Symbol, Target, TargetMessage,
    DELTA,
};

pub(super) struct Cursor<'a> {
    toks: &'a [Token],
    pub(super) pos: usize,
    eof: (usize, usize),
}

impl<'a> Cursor<'a> {
    pub(super) fn new(toks: &'a [Token], src: &str) -> Self {
        let eof = toks.last().map_or((1, 1), |t| {
            let tail = &src[t.start..t.end];
            (t.line, t.col + tail.chars().count())
        });
        Cursor { toks, pos: 0, eof }
    }

    pub(super) fn peek(&self) -> Option<&'a Token> {
        self.toks.get(self.pos)
    }

    pub(super) fn peek_at(&self, n: usize) -> Option<&'a Token> {
        self.toks.get(self.pos + n)
    }

    pub(super) fn next(&mut self) -> Option<&'a Token> {
        let t = self.toks.get(self.pos);
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    /// An opening parenthesis glued to the previous token, as in `f(x)`.
    /// With whitespace, `b (c, out)` is juxtaposition instead.
    pub(super) fn at_call_paren(&self) -> bool {
        match (self.pos.checked_sub(1).map(|i| &self.toks[i]), self.peek()) {
            (Some(prev), Some(t)) => t.is_sym("(") && t.start == prev.end,
            _ => false,
        }
    }

    pub(super) fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    pub(super) fn at_sym(&self, s: &str) -> bool {
        self.peek().is_some_and(|t| t.is_sym(s))
    }

    pub(super) fn at_ident(&self, s: &str) -> bool {
        self.peek().is_some_and(|t| t.is_ident(s))
    }

    pub(super) fn eat_sym(&mut self, s: &str) -> bool {
        if self.at_sym(s) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub(super) fn eat_ident(&mut self, s: &str) -> bool {
        if self.at_ident(s) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub(super) fn error(&self, msg: impl Into<String>) -> Diagnostic {
        let (line, col) = self.peek().map_or(self.eof, |t| (t.line, t.col));
        Diagnostic::new(line, col, msg)
    }

    pub(super) fn unexpected(&self, wanted: &str) -> Diagnostic {
        match self.peek() {
            Some(t) => self.error(format!("expected {wanted}, found {}", t.describe())),
            None => self.error(format!("expected {wanted}, found end of input")),
        }
    }

    pub(super) fn expect_sym(&mut self, s: &str) -> Result<&'a Token, Diagnostic> {
        if self.at_sym(s) {
            Ok(self.next().unwrap())
        } else {
            Err(self.unexpected(&format!("'{s}'")))
        }
    }

    pub(super) fn expect_keyword(&mut self, s: &str) -> Result<(), Diagnostic> {
        if self.eat_ident(s) {
            Ok(())
        } else {
            Err(self.unexpected(&format!("'{s}'")))
        }
    }

    pub(super) fn expect_ident(&mut self, what: &str) -> Result<(&'a str, &'a Token), Diagnostic> {
        match self.peek() {
            Some(t @ Token {
                kind: TokenKind::Ident(s),
                ..
            }) => {
                self.pos += 1;
                Ok((s.as_str(), t))
            }
            _ => Err(self.unexpected(what)),
        }
    }

    pub(super) fn expect_nat(&mut self) -> Result<u64, Diagnostic> {
        match self.peek().map(|t| &t.kind) {
            Some(TokenKind::Nat(n)) => {
                self.pos += 1;
                Ok(*n)
            }
            _ => Err(self.unexpected("a number")),
        }
    }

    /// Skips past the next `.` (error recovery).
    fn skip_statement(&mut self) {
        while let Some(t) = self.next() {
            if t.is_sym(".") {
                break;
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Specification files

/// Parses and validates a specification file.
pub fn parse_spec(text: &str) -> Result<SystemSpec, Vec<Diagnostic>> {
    let spec = parse_spec_unchecked(text)?;
    let diags = validate_spec(&spec);
    if diags.is_empty() {
        Ok(spec)
    } else {
        Err(diags)
    }
}

/// Parses a specification file without the semantic checks.
pub fn parse_spec_unchecked(text: &str) -> Result<SystemSpec, Vec<Diagnostic>> {
    let toks = tokenize(text).map_err(|d| vec![d])?;
    let mut cur = Cursor::new(&toks, text);
    let mut spec = SystemSpec::default();
    let mut diags = Vec::new();

    while let Some(t) = cur.peek() {
        if t.is_ident("signature") && cur.peek_at(1).is_some_and(|n| n.is_ident("is")) {
            cur.pos += 2;
            if spec.signature.declared {
                diags.push(Diagnostic::new(t.line, t.col, "duplicate signature block"));
            }
            spec.signature.declared = true;
            parse_signature(&mut cur, &mut spec.signature, &mut diags);
        } else if t.is_ident("membrane") && cur.peek_at(2).is_some_and(|n| n.is_ident("is")) {
            cur.pos += 1;
            let (name, _) = cur.expect_ident("a membrane name").map_err(|d| vec![d])?;
            cur.pos += 1;
            let name = MembraneName::new(name);
            if spec.membrane(&name).is_some() {
                diags.push(Diagnostic::new(
                    t.line,
                    t.col,
                    format!("duplicate membrane name {name}"),
                ));
            }
            let mut def = MembraneDef::new(name);
            def.line = t.line;
            parse_membrane_body(&mut cur, &spec.signature, &mut def, &mut diags);
            spec.membranes.push(def);
        } else {
            spec.commands.push(take_command(&mut cur, text));
        }
    }
    if diags.is_empty() {
        Ok(spec)
    } else {
        Err(diags)
    }
}

/// Commands that take a term argument and run until a line ending in `.`.
pub(crate) const TERM_COMMANDS: [&str; 4] = ["trans", "compute", "dfs", "check"];

fn take_command(cur: &mut Cursor<'_>, text: &str) -> CommandLine {
    let first = cur.next().unwrap();
    let mut last = first;
    let multi_line = matches!(&first.kind, TokenKind::Ident(s) if TERM_COMMANDS.contains(&s.as_str()));
    if multi_line {
        if !(first.is_sym(".") && cur.peek().is_none_or(|n| n.line > first.line)) {
            while let Some(t) = cur.next() {
                last = t;
                let ends_line = cur.peek().is_none_or(|n| n.line > t.line);
                if t.is_sym(".") && ends_line {
                    break;
                }
            }
        }
    } else {
        while let Some(t) = cur.peek() {
            if t.line != first.line {
                break;
            }
            last = cur.next().unwrap();
        }
    }
    CommandLine {
        text: text[first.start..last.end].to_string(),
        line: first.line,
    }
}

fn parse_signature(cur: &mut Cursor<'_>, sig: &mut Signature, diags: &mut Vec<Diagnostic>) {
    loop {
        let Some(t) = cur.peek() else {
            diags.push(cur.error("unterminated signature block, expected 'end'"));
            return;
        };
        if cur.eat_ident("end") {
            return;
        }
        let res = if cur.eat_ident("import") {
            parse_import(cur, sig)
        } else if cur.eat_ident("ob") || cur.eat_ident("obs") {
            parse_ob_decl(cur, sig)
        } else {
            Err(Diagnostic::new(
                t.line,
                t.col,
                format!("expected 'ob', 'obs', 'import' or 'end', found {}", t.describe()),
            ))
        };
        if let Err(d) = res {
            diags.push(d);
            cur.skip_statement();
        }
    }
}

fn parse_import(cur: &mut Cursor<'_>, sig: &mut Signature) -> Result<(), Diagnostic> {
    let (name, tok) = cur.expect_ident("a module name")?;
    if name != "NAT" {
        return Err(Diagnostic::new(
            tok.line,
            tok.col,
            format!("unsupported import {name}, only NAT is available"),
        ));
    }
    cur.expect_sym(".")?;
    sig.import_nat = true;
    Ok(())
}

fn parse_sort(cur: &mut Cursor<'_>) -> Result<Sort, Diagnostic> {
    let (s, tok) = cur.expect_ident("a sort")?;
    match s {
        "Nat" => Ok(Sort::Nat),
        "Bool" => Ok(Sort::Bool),
        "Obj" => Ok(Sort::Obj),
        _ => Err(Diagnostic::new(tok.line, tok.col, format!("unknown sort {s}"))),
    }
}

fn parse_ob_decl(cur: &mut Cursor<'_>, sig: &mut Signature) -> Result<(), Diagnostic> {
    // Mixfix `_·_` is the only operator form accepted.
    if cur.at_ident("_") {
        let start = cur.peek().unwrap();
        cur.pos += 1;
        if !cur.eat_sym("·") || !cur.eat_ident("_") {
            return Err(Diagnostic::new(
                start.line,
                start.col,
                "the only supported mixfix object operator is _·_",
            ));
        }
        cur.expect_sym(":")?;
        let a = parse_sort(cur)?;
        let b = parse_sort(cur)?;
        if (a, b) != (Sort::Obj, Sort::Obj) {
            return Err(Diagnostic::new(start.line, start.col, "_·_ must have sorts Obj Obj"));
        }
        let identity = parse_seq_attrs(cur)?;
        cur.expect_sym(".")?;
        if sig.seq_identity().is_some() {
            return Err(Diagnostic::new(start.line, start.col, "_·_ declared twice"));
        }
        sig.decls.push(SignatureDecl::Seq { identity });
        return Ok(());
    }

    let mut names = Vec::new();
    while let Some(Token {
        kind: TokenKind::Ident(s),
        ..
    }) = cur.peek()
    {
        names.push(Symbol::new(s));
        cur.pos += 1;
    }
    if names.is_empty() {
        return Err(cur.unexpected("an object symbol"));
    }
    let mut sorts = Vec::new();
    if cur.eat_sym(":") {
        while cur.peek().is_some_and(|t| matches!(t.kind, TokenKind::Ident(_))) {
            sorts.push(parse_sort(cur)?);
        }
    }
    if cur.at_sym("[") {
        return Err(cur.error("attributes are only supported on _·_"));
    }
    cur.expect_sym(".")?;
    if sorts.is_empty() {
        sig.decls.push(SignatureDecl::Atoms(names));
    } else {
        for symbol in names {
            sig.decls.push(SignatureDecl::Compound {
                symbol,
                args: sorts.clone(),
            });
        }
    }
    Ok(())
}

fn parse_seq_attrs(cur: &mut Cursor<'_>) -> Result<Symbol, Diagnostic> {
    let open = cur.expect_sym("[")?;
    let mut assoc = false;
    let mut identity = None;
    while !cur.eat_sym("]") {
        let (attr, tok) = cur.expect_ident("an attribute")?;
        match attr {
            "assoc" => assoc = true,
            "id" => {
                cur.expect_sym(":")?;
                let (id, _) = cur.expect_ident("an identity symbol")?;
                identity = Some(Symbol::new(id));
            }
            "prec" => {
                cur.expect_nat()?;
            }
            _ => {
                return Err(Diagnostic::new(
                    tok.line,
                    tok.col,
                    format!("unsupported attribute {attr}"),
                ))
            }
        }
    }
    match (assoc, identity) {
        (true, Some(id)) => Ok(id),
        _ => Err(Diagnostic::new(
            open.line,
            open.col,
            "_·_ requires the attributes assoc and id:",
        )),
    }
}

fn parse_membrane_body(
    cur: &mut Cursor<'_>,
    sig: &Signature,
    def: &mut MembraneDef,
    diags: &mut Vec<Diagnostic>,
) {
    loop {
        let Some(t) = cur.peek() else {
            diags.push(cur.error(format!("unterminated membrane {}, expected 'end'", def.name)));
            return;
        };
        // `end` closes the block only here, at the start of a statement;
        // elsewhere it is an ordinary label.
        if cur.eat_ident("end") {
            return;
        }
        let res = match &t.kind {
            TokenKind::Ident(k) if k == "var" || k == "vars" => {
                cur.pos += 1;
                parse_var_decl(cur, def)
            }
            TokenKind::Ident(k) if k == "ev" || k == "xev" || k == "cev" => {
                cur.pos += 1;
                let kind = match k.as_str() {
                    "ev" => RuleKind::Ev,
                    "xev" => RuleKind::Xev,
                    _ => RuleKind::Cev,
                };
                parse_rule(cur, sig, def, kind, t).map(|r| def.rules.push(r))
            }
            TokenKind::Ident(k) if k == "pr" => {
                cur.pos += 1;
                parse_priority(cur, def)
            }
            _ => Err(Diagnostic::new(
                t.line,
                t.col,
                format!(
                    "expected 'var', 'ev', 'xev', 'cev', 'pr' or 'end', found {}",
                    t.describe()
                ),
            )),
        };
        if let Err(d) = res {
            diags.push(d);
            cur.skip_statement();
        }
    }
}

fn parse_var_decl(cur: &mut Cursor<'_>, def: &mut MembraneDef) -> Result<(), Diagnostic> {
    let mut names = Vec::new();
    while !cur.at_sym(":") {
        let (n, tok) = cur.expect_ident("a variable name")?;
        if def.vars.iter().any(|v| v.name == n) || names.iter().any(|(m, _)| m == n) {
            return Err(Diagnostic::new(tok.line, tok.col, format!("variable {n} declared twice")));
        }
        names.push((n.to_string(), tok));
    }
    if names.is_empty() {
        return Err(cur.unexpected("a variable name"));
    }
    cur.expect_sym(":")?;
    let sort_tok = cur.peek();
    let sort = parse_sort(cur)?;
    if sort == Sort::Obj {
        let t = sort_tok.unwrap();
        return Err(Diagnostic::new(t.line, t.col, "variables must have sort Nat or Bool"));
    }
    cur.expect_sym(".")?;
    def.vars
        .extend(names.into_iter().map(|(name, _)| VarDecl { name, sort }));
    Ok(())
}

fn parse_priority(cur: &mut Cursor<'_>, def: &mut MembraneDef) -> Result<(), Diagnostic> {
    let mut hi = Vec::new();
    while !cur.at_sym(">") {
        hi.push(Label::new(cur.expect_ident("a rule label")?.0));
    }
    cur.expect_sym(">")?;
    let mut lo = Vec::new();
    while !cur.at_sym(".") {
        lo.push(Label::new(cur.expect_ident("a rule label")?.0));
    }
    cur.expect_sym(".")?;
    if hi.is_empty() || lo.is_empty() {
        return Err(cur.error("priority statements need labels on both sides of '>'"));
    }
    for h in &hi {
        for l in &lo {
            def.priorities.push((h.clone(), l.clone()));
        }
    }
    Ok(())
}

fn parse_rule(
    cur: &mut Cursor<'_>,
    sig: &Signature,
    def: &MembraneDef,
    kind: RuleKind,
    start: &Token,
) -> Result<RuleDef, Diagnostic> {
    let (label, _) = cur.expect_ident("a rule label")?;
    cur.expect_sym(":")?;
    let ctx = PatternCtx { sig, vars: &def.vars };
    let lhs = ctx.soup(cur)?;
    cur.expect_sym("->")?;
    let rhs = ctx.rhs(cur)?;
    let mut promoters = Vec::new();
    let mut inhibitors = Vec::new();
    let mut has_inhibitors = false;
    if cur.at_ident("with") || cur.at_ident("without") {
        if kind != RuleKind::Cev {
            return Err(cur.error("promoters and inhibitors require a 'cev' rule"));
        }
        if cur.eat_ident("with") {
            promoters = ctx.soup(cur)?;
        }
        if cur.eat_ident("without") {
            has_inhibitors = true;
            inhibitors = ctx.soup(cur)?;
        }
    }
    cur.expect_sym(".")?;
    Ok(RuleDef {
        label: Label::new(label),
        kind,
        lhs: sorted(lhs),
        rhs,
        promoters: sorted(promoters),
        inhibitors: sorted(inhibitors),
        has_inhibitors,
        line: start.line,
        col: start.col,
    })
}

fn sorted(mut v: PatternSoup) -> PatternSoup {
    v.sort();
    v
}

struct PatternCtx<'s> {
    sig: &'s Signature,
    vars: &'s [VarDecl],
}

impl PatternCtx<'_> {
    fn at_soup_end(cur: &Cursor<'_>) -> bool {
        match cur.peek() {
            None => true,
            Some(t) => match &t.kind {
                TokenKind::Ident(s) => s == "with" || s == "without",
                TokenKind::Sym(s) => s != "(",
                TokenKind::Nat(_) => true,
            },
        }
    }

    /// Juxtaposed object patterns; parentheses only group.
    fn soup(&self, cur: &mut Cursor<'_>) -> Result<PatternSoup, Diagnostic> {
        let mut out = Vec::new();
        while !Self::at_soup_end(cur) {
            if cur.eat_sym("(") {
                out.extend(self.soup(cur)?);
                cur.expect_sym(")")?;
            } else if cur.eat_ident("empty") {
            } else {
                out.push(self.object(cur)?);
            }
        }
        Ok(out)
    }

    fn rhs(&self, cur: &mut Cursor<'_>) -> Result<Vec<RhsPart>, Diagnostic> {
        let mut here = Vec::new();
        let mut parts = Vec::new();
        while !Self::at_soup_end(cur) {
            if cur.eat_sym("(") {
                let first = self.soup(cur)?;
                if cur.eat_sym(")") {
                    here.extend(first);
                    continue;
                }
                cur.expect_sym(",")?;
                if let Some(target) = peek_target(cur) {
                    parts.push(RhsPart::Directed(sorted(first), target));
                    continue;
                }
                let second = self.soup(cur)?;
                cur.expect_sym(",")?;
                cur.expect_keyword("div")?;
                cur.expect_sym(")")?;
                parts.push(RhsPart::Division(sorted(first), sorted(second)));
            } else if cur.eat_ident("empty") {
            } else {
                here.push(self.object(cur)?);
            }
        }
        if !here.is_empty() {
            parts.insert(0, RhsPart::Directed(sorted(here), Target::Here));
        }
        Ok(parts)
    }

    fn object(&self, cur: &mut Cursor<'_>) -> Result<ObjectPattern, Diagnostic> {
        let (name, _) = cur.expect_ident("an object")?;
        if cur.at_call_paren() {
            cur.pos += 1;
            let mut args = Vec::new();
            if !cur.at_sym(")") {
                loop {
                    args.push(self.arg(cur)?);
                    if !cur.eat_sym(",") {
                        break;
                    }
                }
            }
            cur.expect_sym(")")?;
            return Ok(ObjectPattern::Compound(Symbol::new(name), args));
        }
        if cur.at_sym("·") {
            let mut atoms = vec![Symbol::new(name)];
            while cur.eat_sym("·") {
                atoms.push(Symbol::new(cur.expect_ident("an atom")?.0));
            }
            return Ok(normalize_seq_pattern(atoms, self.sig.seq_identity()));
        }
        Ok(ObjectPattern::Atom(Symbol::new(name)))
    }

    fn arg(&self, cur: &mut Cursor<'_>) -> Result<ArgExpr, Diagnostic> {
        if let Some(TokenKind::Nat(n)) = cur.peek().map(|t| &t.kind) {
            cur.pos += 1;
            return Ok(ArgExpr::Nat(*n));
        }
        if cur.eat_sym("(") {
            let a = self.arg(cur)?;
            cur.expect_sym(")")?;
            return Ok(a);
        }
        let (name, _) = cur.expect_ident("an argument")?;
        if let Some(i) = self.vars.iter().position(|v| v.name == name) {
            return Ok(ArgExpr::Var(VarId(i)));
        }
        Ok(match name {
            "true" => ArgExpr::Bool(true),
            "false" => ArgExpr::Bool(false),
            "not" => ArgExpr::Not(Box::new(self.arg(cur)?)),
            "s" if cur.at_sym("(") => {
                cur.pos += 1;
                let a = self.arg(cur)?;
                cur.expect_sym(")")?;
                ArgExpr::Succ(Box::new(a))
            }
            _ => ArgExpr::Atom(Symbol::new(name)),
        })
    }
}

fn normalize_seq_pattern(atoms: Vec<Symbol>, identity: Option<&Symbol>) -> ObjectPattern {
    match Object::seq(atoms, identity) {
        Object::Atom(s) => ObjectPattern::Atom(s),
        Object::Seq(v) => ObjectPattern::Seq(v),
        Object::Compound(..) => unreachable!(),
    }
}

/// Consumes `here )`, `out )` or `in NAME )` if present.
fn peek_target(cur: &mut Cursor<'_>) -> Option<Target> {
    let t = cur.peek()?;
    let close = |n: usize| cur.peek_at(n).is_some_and(|t| t.is_sym(")"));
    if t.is_ident("here") && close(1) {
        cur.pos += 2;
        return Some(Target::Here);
    }
    if t.is_ident("out") && close(1) {
        cur.pos += 2;
        return Some(Target::Out);
    }
    if t.is_ident("in") && close(2) {
        if let Some(TokenKind::Ident(n)) = cur.peek_at(1).map(|t| &t.kind) {
            let target = Target::In(MembraneName::new(n));
            cur.pos += 3;
            return Some(target);
        }
    }
    None
}

// ---------------------------------------------------------------------------
// Configurations

/// Parses a configuration term against a loaded specification.
pub fn parse_configuration(text: &str, spec: &SystemSpec) -> Result<Soup, Diagnostic> {
    let toks = tokenize(text)?;
    let mut cur = Cursor::new(&toks, text);
    let soup = ConfigParser { spec: Some(spec) }.soup(&mut cur)?;
    if !cur.at_end() {
        return Err(cur.unexpected("end of configuration"));
    }
    Ok(soup)
}

/// Ground-term parsing. Without a spec, any symbol and membrane name is
/// accepted (used for formulas, which are parsed before a spec is known).
pub(super) struct ConfigParser<'s> {
    pub(super) spec: Option<&'s SystemSpec>,
}

impl ConfigParser<'_> {
    fn at_end(cur: &Cursor<'_>) -> bool {
        match cur.peek() {
            None => true,
            Some(t) => match &t.kind {
                TokenKind::Ident(_) => false,
                TokenKind::Sym(s) => s != "(" && s != "<",
                TokenKind::Nat(_) => true,
            },
        }
    }

    fn identity(&self) -> Option<&Symbol> {
        self.spec.and_then(|s| s.signature.seq_identity())
    }

    pub(super) fn soup(&self, cur: &mut Cursor<'_>) -> Result<Soup, Diagnostic> {
        let mut objects = Multiset::new();
        let mut messages = Vec::new();
        let mut membranes = Vec::new();
        while !Self::at_end(cur) {
            if cur.eat_sym("<") {
                let (name, tok) = cur.expect_ident("a membrane name")?;
                let name = MembraneName::new(name);
                if let Some(spec) = self.spec {
                    if spec.membrane(&name).is_none() {
                        return Err(Diagnostic::new(
                            tok.line,
                            tok.col,
                            format!("unknown membrane name {name}"),
                        ));
                    }
                }
                cur.expect_sym("|")?;
                let contents = self.soup(cur)?;
                cur.expect_sym(">")?;
                membranes.push(Membrane::new(name, contents));
            } else if cur.eat_sym("(") {
                let first = self.objects(cur)?;
                if cur.eat_sym(")") {
                    objects.add_all(&first);
                    continue;
                }
                cur.expect_sym(",")?;
                if let Some(target) = peek_target(cur) {
                    if let (Some(spec), Target::In(n)) = (self.spec, &target) {
                        if spec.membrane(n).is_none() {
                            return Err(cur.error(format!("unknown membrane name {n}")));
                        }
                    }
                    messages.push(TargetMessage::Directed {
                        payload: first,
                        target,
                    });
                    continue;
                }
                let second = self.objects(cur)?;
                cur.expect_sym(",")?;
                cur.expect_keyword("div")?;
                cur.expect_sym(")")?;
                messages.push(TargetMessage::Division {
                    left: first,
                    right: second,
                });
            } else if cur.eat_ident("empty") {
            } else {
                let (o, n) = self.object_rep(cur)?;
                objects.insert_n(o, n);
            }
        }
        Ok(Soup::from_parts(objects, messages, membranes))
    }

    /// Objects only (message payloads, proposition arguments).
    pub(super) fn objects(&self, cur: &mut Cursor<'_>) -> Result<Multiset<Object>, Diagnostic> {
        let mut out = Multiset::new();
        loop {
            match cur.peek() {
                Some(t) if t.is_sym("(") => {
                    cur.pos += 1;
                    out.add_all(&self.objects(cur)?);
                    cur.expect_sym(")")?;
                }
                Some(t) if t.is_ident("empty") => cur.pos += 1,
                Some(Token {
                    kind: TokenKind::Ident(_),
                    ..
                }) => {
                    let (o, n) = self.object_rep(cur)?;
                    out.insert_n(o, n);
                }
                _ => return Ok(out),
            }
        }
    }

    /// An object, optionally followed by `^ n` for repetition.
    fn object_rep(&self, cur: &mut Cursor<'_>) -> Result<(Object, usize), Diagnostic> {
        let o = self.object(cur)?;
        if cur.eat_sym("^") {
            let n = cur.expect_nat()?;
            return Ok((o, n as usize));
        }
        Ok((o, 1))
    }

    fn object(&self, cur: &mut Cursor<'_>) -> Result<Object, Diagnostic> {
        let (name, tok) = cur.expect_ident("an object")?;
        let sig = self.spec.map(|s| &s.signature).filter(|s| s.declared);
        if cur.at_call_paren() {
            cur.pos += 1;
            let mut args = Vec::new();
            if !cur.at_sym(")") {
                loop {
                    args.push(self.ground_arg(cur)?);
                    if !cur.eat_sym(",") {
                        break;
                    }
                }
            }
            cur.expect_sym(")")?;
            if let Some(sig) = sig {
                let Some(sorts) = sig.compound(name) else {
                    return Err(Diagnostic::new(tok.line, tok.col, format!("unknown symbol {name}")));
                };
                check_ground_args(name, sorts, &args)
                    .map_err(|m| Diagnostic::new(tok.line, tok.col, m))?;
            }
            return Ok(Object::Compound(Symbol::new(name), args));
        }
        let mut atoms = vec![(Symbol::new(name), tok)];
        while cur.eat_sym("·") {
            let (a, t) = cur.expect_ident("an atom")?;
            atoms.push((Symbol::new(a), t));
        }
        if let Some(sig) = sig {
            if atoms.len() > 1 && sig.seq_identity().is_none() {
                return Err(Diagnostic::new(tok.line, tok.col, "no string operator _·_ declared"));
            }
            for (a, t) in &atoms {
                if a.as_str() != DELTA && !sig.is_atom(a.as_str()) {
                    return Err(Diagnostic::new(t.line, t.col, format!("unknown symbol {a}")));
                }
            }
        }
        let atoms = atoms.into_iter().map(|(a, _)| a).collect();
        Ok(Object::seq(atoms, self.identity()))
    }

    fn ground_arg(&self, cur: &mut Cursor<'_>) -> Result<Argument, Diagnostic> {
        if let Some(TokenKind::Nat(n)) = cur.peek().map(|t| &t.kind) {
            cur.pos += 1;
            return Ok(Argument::Nat(*n));
        }
        if cur.eat_sym("(") {
            let a = self.ground_arg(cur)?;
            cur.expect_sym(")")?;
            return Ok(a);
        }
        let (name, tok) = cur.expect_ident("an argument")?;
        Ok(match name {
            "true" => Argument::Bool(true),
            "false" => Argument::Bool(false),
            "not" => match self.ground_arg(cur)? {
                Argument::Bool(b) => Argument::Bool(!b),
                _ => return Err(Diagnostic::new(tok.line, tok.col, "not expects a Bool")),
            },
            "s" if cur.at_sym("(") => {
                cur.pos += 1;
                let a = self.ground_arg(cur)?;
                cur.expect_sym(")")?;
                match a {
                    Argument::Nat(n) => Argument::Nat(n + 1),
                    _ => return Err(Diagnostic::new(tok.line, tok.col, "s expects a Nat")),
                }
            }
            _ => Argument::Atom(Symbol::new(name)),
        })
    }
}

fn check_ground_args(name: &str, sorts: &[Sort], args: &[Argument]) -> Result<(), String> {
    if sorts.len() != args.len() {
        return Err(format!(
            "{name} expects {} arguments, found {}",
            sorts.len(),
            args.len()
        ));
    }
    for (i, (s, a)) in sorts.iter().zip(args).enumerate() {
        let ok = matches!(
            (s, a),
            (Sort::Nat, Argument::Nat(_)) | (Sort::Bool, Argument::Bool(_)) | (Sort::Obj, Argument::Atom(_))
        );
        if !ok {
            return Err(format!("argument {} of {name} must have sort {s}", i + 1));
        }
    }
    Ok(())
}

/// Collects the variables of a pattern soup.
pub(super) fn soup_vars(soup: &[ObjectPattern]) -> BTreeSet<VarId> {
    let mut out = BTreeSet::new();
    for p in soup {
        p.vars(&mut out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const DIVISORS_M2: &str = "
membrane M2 is
  ev r21 : d a -> c .        ev r22 : c   -> d .
  ev r23 : tic -> tac .      ev r24 : a tac -> a tic .
  ev r25 : d tac -> d .      ev r26 : tac -> delta .
  pr r24 > r26 .
  pr r25 > r26 .
end
";

    #[test]
    fn divisors_membrane() {
        let spec = parse_spec(DIVISORS_M2).unwrap();
        let m2 = &spec.membranes[0];
        assert_eq!(m2.rules.len(), 6);
        assert_eq!(
            m2.priorities,
            vec![
                (Label::new("r24"), Label::new("r26")),
                (Label::new("r25"), Label::new("r26"))
            ]
        );
        assert_eq!(spec.priority_mode, PriorityMode::Strong);
    }

    #[test]
    fn empty_membrane() {
        let spec = parse_spec("membrane M1 is end").unwrap();
        assert_eq!(spec.membranes.len(), 1);
        assert!(spec.membranes[0].rules.is_empty());
    }

    #[test]
    fn end_is_a_label_inside_statements() {
        let spec = parse_spec(
            "membrane M is var B : Bool . ev end : c(0, B) -> c(0, B) delta . ev split : x -> y . pr end > split . end",
        )
        .unwrap();
        assert_eq!(spec.membranes[0].rules.len(), 2);
        assert_eq!(spec.membranes[0].priorities.len(), 1);
    }

    #[test]
    fn multi_label_priority_is_a_cross_product() {
        let spec =
            parse_spec("membrane M is ev a : x -> y . ev b : y -> x . ev c : z -> z . pr a b > c . end")
                .unwrap();
        assert_eq!(spec.membranes[0].priorities.len(), 2);
    }

    #[test]
    fn rhs_targets_and_division() {
        let spec = parse_spec(
            "membrane M1 is ev r : a a -> (a a d, in M2) b (c, out) . end membrane M2 is ev q : s -> (t, f, div) . end",
        )
        .unwrap();
        let r = &spec.membranes[0].rules[0];
        assert_eq!(r.rhs.len(), 3);
        assert!(matches!(&r.rhs[0], RhsPart::Directed(s, Target::Here) if s.len() == 1));
        let q = &spec.membranes[1].rules[0];
        assert!(matches!(&q.rhs[0], RhsPart::Division(..)));
    }

    #[test]
    fn commands_run_until_a_terminating_line() {
        let spec = parse_spec(
            "membrane M1 is end\nshow membranes\ntrans < M1 |\n  a > .\nset priority weak",
        )
        .unwrap();
        let texts: Vec<&str> = spec.commands.iter().map(|c| c.text.as_str()).collect();
        assert_eq!(texts, vec!["show membranes", "trans < M1 |\n  a > .", "set priority weak"]);
    }

    #[test]
    fn configuration_nesting() {
        let spec = parse_spec("membrane M1 is end membrane M2 is end").unwrap();
        let c = parse_configuration("< M1 | a a a tic < M2 | d tac > >", &spec).unwrap();
        assert_eq!(c.to_string(), "< M1 | a a a tic < M2 | d tac > >");
        let e = parse_configuration("< M2 | empty >", &spec).unwrap();
        assert_eq!(e.to_string(), "< M2 | empty >");
        assert!(parse_configuration("< M9 | a >", &spec).is_err());
    }

    #[test]
    fn configuration_repetition_shorthand() {
        let spec = parse_spec("membrane M1 is end").unwrap();
        let a = parse_configuration("< M1 | a^3 tic >", &spec).unwrap();
        let b = parse_configuration("< M1 | a a a tic >", &spec).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn compound_objects_with_signature() {
        let spec = parse_spec(
            "signature is import NAT . ob var : Nat . ob not : Nat Nat . obs and : Nat Nat Nat . end membrane M1 is end",
        )
        .unwrap();
        let c = parse_configuration("< M1 | and(0, 1, 2) var(1) not(2, 1) >", &spec).unwrap();
        assert_eq!(c.membranes()[0].contents.objects().len(), 3);
        assert!(parse_configuration("< M1 | and(0, 1) >", &spec).is_err());
        assert!(parse_configuration("< M1 | foo >", &spec).is_err());
    }

    #[test]
    fn string_objects_normalize() {
        let spec = parse_spec(
            "signature is ob _·_ : Obj Obj [assoc id: eps prec 30] . obs a b c eps . end membrane M1 is end",
        )
        .unwrap();
        let c = parse_configuration("< M1 | (a · a · b · a) b (a · eps) >", &spec).unwrap();
        assert_eq!(c.to_string(), "< M1 | (a · a · b · a) a b >");
    }

    #[test]
    fn syntax_errors_carry_locations() {
        let err = parse_spec("membrane M is\n  ev r : a -> .\n  ev q : -> b c d ( .\nend").unwrap_err();
        assert!(!err.is_empty());
        assert!(err.iter().all(|d| d.line >= 2));
    }
}

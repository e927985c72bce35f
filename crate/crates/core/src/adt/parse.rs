//! Parser for the Scala-like ADT declaration subset, primitive desugaring,
//! and the translation of a declaration into a [`Domain`].

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use super::{Domain, DomainError, RankedAlphabet, RankedSymbol, StateId, SymbolId, Transition};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Primitive {
    String,
    Int,
    Boolean,
}

impl Primitive {
    fn from_name(name: &str) -> Option<Primitive> {
        match name {
            "String" => Some(Primitive::String),
            "Int" => Some(Primitive::Int),
            "Boolean" => Some(Primitive::Boolean),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Primitive::String => "String",
            Primitive::Int => "Int",
            Primitive::Boolean => "Boolean",
        }
    }

    /// The two stand-in values: printed outputs, neither a prefix of the other.
    pub fn stand_ins(self) -> [&'static str; 2] {
        match self {
            Primitive::String => ["foo", "bar"],
            Primitive::Int => ["1", "2"],
            Primitive::Boolean => ["true", "false"],
        }
    }

    /// Constructor names of the stand-in cases as they appear in trees.
    pub fn stand_in_names(self) -> [&'static str; 2] {
        match self {
            Primitive::String => ["\"foo\"", "\"bar\""],
            Primitive::Int => ["1", "2"],
            Primitive::Boolean => ["true", "false"],
        }
    }
}

impl fmt::Display for Primitive {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FieldType {
    Class(String),
    Primitive(Primitive),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Field {
    pub name: String,
    pub ty: FieldType,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ClassKind {
    Abstract,
    Case {
        fields: Vec<Field>,
        parent: Option<String>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ClassDecl {
    pub name: String,
    pub kind: ClassKind,
    /// 1-based source line, 0 for synthesized classes.
    pub line: usize,
    /// Known output of a synthesized primitive stand-in case.
    pub fixed_output: Option<String>,
    /// Primitive type this synthesized class stands in for.
    pub stands_for: Option<Primitive>,
}

impl ClassDecl {
    pub fn is_abstract(&self) -> bool {
        matches!(self.kind, ClassKind::Abstract)
    }

    pub fn fields(&self) -> &[Field] {
        match &self.kind {
            ClassKind::Abstract => &[],
            ClassKind::Case { fields, .. } => fields,
        }
    }

    pub fn parent(&self) -> Option<&str> {
        match &self.kind {
            ClassKind::Abstract => None,
            ClassKind::Case { parent, .. } => parent.as_deref(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct AdtDeclaration {
    pub classes: Vec<ClassDecl>,
}

impl AdtDeclaration {
    pub fn get(&self, name: &str) -> Option<&ClassDecl> {
        self.classes.iter().find(|c| c.name == name)
    }

    pub fn case_classes(&self) -> impl Iterator<Item = &ClassDecl> {
        self.classes.iter().filter(|c| !c.is_abstract())
    }

    pub fn abstract_classes(&self) -> impl Iterator<Item = &ClassDecl> {
        self.classes.iter().filter(|c| c.is_abstract())
    }

    /// Case classes without a parent.
    pub fn standalone_classes(&self) -> impl Iterator<Item = &ClassDecl> {
        self.case_classes().filter(|c| c.parent().is_none())
    }

    /// Primitive types mentioned by any field.
    pub fn primitives_used(&self) -> Vec<Primitive> {
        let mut out = Vec::new();
        for c in &self.classes {
            for f in c.fields() {
                if let FieldType::Primitive(p) = f.ty {
                    if !out.contains(&p) {
                        out.push(p);
                    }
                }
            }
        }
        out
    }

    /// Primitive types that were replaced by stand-in classes.
    pub fn stand_in_primitives(&self) -> Vec<Primitive> {
        let mut out = Vec::new();
        for c in &self.classes {
            if let Some(p) = c.stands_for {
                if !out.contains(&p) {
                    out.push(p);
                }
            }
        }
        out
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AdtError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: duplicate class `{name}`")]
    DuplicateClass { line: usize, name: String },
    #[error("line {line}: class `{class}` extends undeclared class `{parent}`")]
    UndeclaredParent {
        line: usize,
        class: String,
        parent: String,
    },
    #[error("line {line}: class `{class}` extends `{parent}`, which is not abstract")]
    ParentNotAbstract {
        line: usize,
        class: String,
        parent: String,
    },
    #[error("line {line}: field `{field}` of `{class}` has undeclared type `{ty}`")]
    UnknownFieldType {
        line: usize,
        class: String,
        field: String,
        ty: String,
    },
    #[error("line {line}: duplicate field `{field}` in `{class}`")]
    DuplicateField {
        line: usize,
        class: String,
        field: String,
    },
    #[error("field of `{class}` still has primitive type `{primitive}`; desugar first")]
    PrimitiveField { class: String, primitive: Primitive },
    #[error("the declaration contains no case class")]
    NoCaseClass,
    #[error(transparent)]
    Domain(#[from] DomainError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Punct(char),
}

struct Lexer {
    toks: Vec<(Tok, usize)>,
}

impl Lexer {
    fn new(source: &str) -> Result<Lexer, AdtError> {
        let mut toks = Vec::new();
        for (i, raw) in source.lines().enumerate() {
            let line = i + 1;
            let text = match raw.find("//") {
                Some(p) => &raw[..p],
                None => raw,
            };
            let mut chars = text.char_indices().peekable();
            while let Some(&(start, c)) = chars.peek() {
                if c.is_whitespace() {
                    chars.next();
                } else if c.is_alphabetic() || c == '_' {
                    let mut end = start;
                    while let Some(&(j, d)) = chars.peek() {
                        if d.is_alphanumeric() || d == '_' {
                            end = j + d.len_utf8();
                            chars.next();
                        } else {
                            break;
                        }
                    }
                    toks.push((Tok::Ident(text[start..end].to_string()), line));
                } else if matches!(c, '(' | ')' | ':' | ',' | ';' | '{' | '}') {
                    toks.push((Tok::Punct(c), line));
                    chars.next();
                } else {
                    return Err(AdtError::Syntax {
                        line,
                        message: format!("unexpected character `{c}`"),
                    });
                }
            }
        }
        Ok(Lexer { toks })
    }
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn line(&self) -> usize {
        self.toks
            .get(self.pos)
            .or_else(|| self.toks.last())
            .map(|(_, l)| *l)
            .unwrap_or(1)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, AdtError> {
        Err(AdtError::Syntax {
            line: self.line(),
            message: message.into(),
        })
    }

    fn eat_keyword(&mut self, kw: &str) -> bool {
        if matches!(self.peek(), Some(Tok::Ident(s)) if s == kw) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn eat_punct(&mut self, p: char) -> bool {
        if self.peek() == Some(&Tok::Punct(p)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_punct(&mut self, p: char) -> Result<(), AdtError> {
        if self.eat_punct(p) {
            Ok(())
        } else {
            self.err(format!("expected `{p}`"))
        }
    }

    fn ident(&mut self, what: &str) -> Result<String, AdtError> {
        match self.peek() {
            Some(Tok::Ident(s)) if !is_keyword(s) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => self.err(format!("expected {what}")),
        }
    }

    fn declaration(&mut self) -> Result<ClassDecl, AdtError> {
        let line = self.line();
        self.eat_keyword("sealed");
        if self.eat_keyword("abstract") {
            if !self.eat_keyword("class") {
                return self.err("expected `class` after `abstract`");
            }
            let name = self.ident("class name")?;
            return Ok(abstract_decl(name, line));
        }
        if self.eat_keyword("trait") {
            let name = self.ident("trait name")?;
            return Ok(abstract_decl(name, line));
        }
        if !self.eat_keyword("case") {
            return self.err("expected `abstract class`, `trait` or `case class`");
        }
        if !self.eat_keyword("class") {
            return self.err("expected `class` after `case`");
        }
        let name = self.ident("class name")?;
        let mut fields = Vec::new();
        if self.eat_punct('(') && !self.eat_punct(')') {
            loop {
                self.eat_keyword("val");
                let fname = self.ident("field name")?;
                self.expect_punct(':')?;
                let tname = self.ident("field type")?;
                let ty = match Primitive::from_name(&tname) {
                    Some(p) => FieldType::Primitive(p),
                    None => FieldType::Class(tname),
                };
                fields.push(Field { name: fname, ty });
                if self.eat_punct(')') {
                    break;
                }
                self.expect_punct(',')?;
            }
        }
        let parent = if self.eat_keyword("extends") {
            Some(self.ident("parent class name")?)
        } else {
            None
        };
        Ok(ClassDecl {
            name,
            kind: ClassKind::Case { fields, parent },
            line,
            fixed_output: None,
            stands_for: None,
        })
    }
}

fn is_keyword(s: &str) -> bool {
    matches!(
        s,
        "abstract" | "case" | "class" | "extends" | "sealed" | "trait" | "val"
    )
}

fn abstract_decl(name: String, line: usize) -> ClassDecl {
    ClassDecl {
        name,
        kind: ClassKind::Abstract,
        line,
        fixed_output: None,
        stands_for: None,
    }
}

/// Parses a declaration file. Class bodies (`{}`) and semicolons are allowed
/// but must be empty.
pub fn parse_adt(source: &str) -> Result<AdtDeclaration, AdtError> {
    let toks = Lexer::new(source)?.toks;
    let mut p = Parser { toks, pos: 0 };
    let mut classes: Vec<ClassDecl> = Vec::new();
    while p.peek().is_some() {
        if p.eat_punct(';') {
            continue;
        }
        let decl = p.declaration()?;
        if p.eat_punct('{') {
            p.expect_punct('}')?;
        }
        if classes.iter().any(|c| c.name == decl.name) {
            return Err(AdtError::DuplicateClass {
                line: decl.line,
                name: decl.name,
            });
        }
        classes.push(decl);
    }
    // a user class named like a primitive shadows the primitive
    let declared: HashSet<String> = classes.iter().map(|c| c.name.clone()).collect();
    for c in &mut classes {
        if let ClassKind::Case { fields, .. } = &mut c.kind {
            for f in fields {
                if let FieldType::Primitive(p) = f.ty {
                    if declared.contains(p.name()) {
                        f.ty = FieldType::Class(p.name().to_string());
                    }
                }
            }
        }
    }
    let decl = AdtDeclaration { classes };
    check_semantics(&decl)?;
    Ok(decl)
}

fn check_semantics(decl: &AdtDeclaration) -> Result<(), AdtError> {
    for c in &decl.classes {
        if let Some(parent) = c.parent() {
            match decl.get(parent) {
                None => {
                    return Err(AdtError::UndeclaredParent {
                        line: c.line,
                        class: c.name.clone(),
                        parent: parent.to_string(),
                    })
                }
                Some(p) if !p.is_abstract() => {
                    return Err(AdtError::ParentNotAbstract {
                        line: c.line,
                        class: c.name.clone(),
                        parent: parent.to_string(),
                    })
                }
                Some(_) => {}
            }
        }
        let mut seen = HashSet::new();
        for f in c.fields() {
            if !seen.insert(f.name.as_str()) {
                return Err(AdtError::DuplicateField {
                    line: c.line,
                    class: c.name.clone(),
                    field: f.name.clone(),
                });
            }
            if let FieldType::Class(t) = &f.ty {
                if decl.get(t).is_none() {
                    return Err(AdtError::UnknownFieldType {
                        line: c.line,
                        class: c.name.clone(),
                        field: f.name.clone(),
                        ty: t.clone(),
                    });
                }
            }
        }
    }
    Ok(())
}

/// Replaces every primitive field type by a synthesized abstract class with
/// two nullary stand-in cases whose outputs are fixed.
pub fn desugar_primitives(decl: &AdtDeclaration) -> AdtDeclaration {
    let used = decl.primitives_used();
    if used.is_empty() {
        return decl.clone();
    }
    let mut taken: HashSet<String> = decl.classes.iter().map(|c| c.name.clone()).collect();
    let mut renamed: HashMap<Primitive, String> = HashMap::new();
    let mut extra = Vec::new();
    for p in used {
        let mut name = p.name().to_string();
        while taken.contains(&name) {
            name.push('_');
        }
        taken.insert(name.clone());
        extra.push(ClassDecl {
            name: name.clone(),
            kind: ClassKind::Abstract,
            line: 0,
            fixed_output: None,
            stands_for: Some(p),
        });
        for (case_name, output) in p.stand_in_names().iter().zip(p.stand_ins()) {
            let mut case_name = case_name.to_string();
            while taken.contains(&case_name) {
                case_name.push('_');
            }
            taken.insert(case_name.clone());
            extra.push(ClassDecl {
                name: case_name,
                kind: ClassKind::Case {
                    fields: Vec::new(),
                    parent: Some(name.clone()),
                },
                line: 0,
                fixed_output: Some(output.to_string()),
                stands_for: Some(p),
            });
        }
        renamed.insert(p, name);
    }
    let mut classes: Vec<ClassDecl> = decl
        .classes
        .iter()
        .map(|c| {
            let mut c = c.clone();
            if let ClassKind::Case { fields, .. } = &mut c.kind {
                for f in fields {
                    if let FieldType::Primitive(p) = f.ty {
                        f.ty = FieldType::Class(renamed[&p].clone());
                    }
                }
            }
            c
        })
        .collect();
    classes.extend(extra);
    AdtDeclaration { classes }
}

/// Builds the domain of a primitive-free declaration.
///
/// States: one per abstract class, one per standalone case class, and one
/// per case class that is used directly as a field type. Every case class
/// yields a transition into its parent's state and, when it has one, into its
/// own state. All states are initial.
pub fn domain_of(decl: &AdtDeclaration) -> Result<Domain, AdtError> {
    let referenced: HashSet<&str> = decl
        .classes
        .iter()
        .flat_map(|c| c.fields())
        .filter_map(|f| match &f.ty {
            FieldType::Class(t) => Some(t.as_str()),
            FieldType::Primitive(_) => None,
        })
        .collect();
    for c in &decl.classes {
        for f in c.fields() {
            if let FieldType::Primitive(p) = f.ty {
                return Err(AdtError::PrimitiveField {
                    class: c.name.clone(),
                    primitive: p,
                });
            }
        }
    }
    if decl.case_classes().next().is_none() {
        return Err(AdtError::NoCaseClass);
    }

    let mut states = Vec::new();
    let mut state_of: HashMap<&str, StateId> = HashMap::new();
    for c in &decl.classes {
        let own = c.is_abstract() || c.parent().is_none() || referenced.contains(c.name.as_str());
        if own {
            state_of.insert(&c.name, StateId(states.len() as u32));
            states.push(c.name.clone());
        }
    }

    let mut symbols = Vec::new();
    let mut transitions = Vec::new();
    for c in decl.case_classes() {
        let id = SymbolId(symbols.len() as u32);
        let mut sym = RankedSymbol::new(c.name.clone(), c.fields().len());
        sym.fixed_output = c.fixed_output.clone();
        symbols.push(sym);
        let children: Vec<StateId> = c
            .fields()
            .iter()
            .map(|f| match &f.ty {
                FieldType::Class(t) => state_of[t.as_str()],
                FieldType::Primitive(_) => unreachable!("checked above"),
            })
            .collect();
        if let Some(parent) = c.parent() {
            transitions.push(Transition {
                symbol: id,
                state: state_of[parent],
                children: children.clone(),
            });
        }
        if let Some(own) = state_of.get(c.name.as_str()) {
            transitions.push(Transition {
                symbol: id,
                state: *own,
                children,
            });
        }
    }
    let alphabet = Arc::new(RankedAlphabet::new(symbols)?);
    let domain = Domain::all_initial(alphabet, states, transitions)?;
    domain.check_productive()?;
    Ok(domain)
}

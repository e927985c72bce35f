use std::fmt::Write as _;

use crate::adt::{AdtDeclaration, ClassKind, Primitive, Tree};
use crate::morphism::OneSts;

/// How pattern variables are named in emitted match cases.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum FieldNames {
    /// `t1, t2, ...`
    #[default]
    Positional,
    /// The field names of the declaration.
    Declared,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EmitOptions {
    pub field_names: FieldNames,
}

/// The hint shown while a question is open: the non-empty child outputs in
/// order, separated and surrounded by `[...]`. `None` if all are empty.
pub fn make_hint<S: AsRef<str>>(child_outputs: &[S]) -> Option<String> {
    let parts: Vec<&str> = child_outputs
        .iter()
        .map(AsRef::as_ref)
        .filter(|s| !s.is_empty())
        .collect();
    if parts.is_empty() {
        return None;
    }
    Some(format!("[...]{}[...]", parts.join("[...]")))
}

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '\n' => out.push_str("\\n"),
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn primitive_case(p: Primitive) -> &'static str {
    match p {
        Primitive::String => "case s: String ⇒ s",
        Primitive::Int => "case i: Int ⇒ i.toString",
        Primitive::Boolean => "case b: Boolean ⇒ b.toString",
    }
}

/// Scala source for the printer `sts`, one case per case class of `decl` in
/// declaration order, followed by an `ensuring` contract listing `asked`.
///
/// `sts` must be built over the desugared domain of `decl`.
pub fn emit_code(
    sts: &OneSts,
    decl: &AdtDeclaration,
    asked: &[(Tree, String)],
    options: EmitOptions,
) -> String {
    let alphabet = sts.alphabet();
    let mut out = String::from("def print(t: Any): String = t match {\n");
    for class in decl.case_classes() {
        let ClassKind::Case { fields, .. } = &class.kind else {
            continue;
        };
        let Some(id) = alphabet.lookup(&class.name) else {
            continue;
        };
        let vars: Vec<String> = match options.field_names {
            FieldNames::Positional => (1..=fields.len()).map(|i| format!("t{i}")).collect(),
            FieldNames::Declared => fields.iter().map(|f| f.name.clone()).collect(),
        };
        let consts = sts.constants(id);
        let mut parts: Vec<String> = Vec::new();
        if !consts[0].is_empty() {
            parts.push(quote(&consts[0]));
        }
        for (v, u) in vars.iter().zip(&consts[1..]) {
            parts.push(format!("print({v})"));
            if !u.is_empty() {
                parts.push(quote(u));
            }
        }
        let body = if parts.is_empty() {
            "\"\"".to_string()
        } else {
            parts.join(" + ")
        };
        let _ = writeln!(out, "  case {}({}) ⇒ {}", class.name, vars.join(","), body);
    }
    for p in decl.primitives_used() {
        let _ = writeln!(out, "  {}", primitive_case(p));
    }
    out.push_str("} // the part below is a contract, not needed to execute the recursive function\n");
    out.push_str("ensuring { (res: String) => res == (t match {\n");
    for (t, w) in asked {
        let _ = writeln!(out, "  case {} => {}", t.display_scala(alphabet), quote(w));
    }
    out.push_str("  case _ => res})\n}\n");
    out
}

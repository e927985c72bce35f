#![allow(dead_code)]

use printsynth::adt::{desugar_primitives, domain_of, grammar_source, parse_adt, parse_tree, Domain};
use printsynth::OneSts;

pub fn domain(src: &str) -> Domain {
    domain_of(&desugar_primitives(&parse_adt(src).unwrap())).unwrap()
}

/// Terminals in backquotes, nonterminals prefixed by `N`, one rule per line.
pub fn grammar_printer() -> OneSts {
    let d = domain(grammar_source());
    OneSts::from_rows(
        d.alphabet_arc(),
        [
            ("a", vec!["a"]),
            ("b", vec!["b"]),
            ("NilChar", vec![""]),
            ("ConsChar", vec!["", "", ""]),
            ("Terminal", vec!["`", "`"]),
            ("NonTerminal", vec!["N", ""]),
            ("Rule", vec!["", " ->", ""]),
            ("ConsRule", vec!["\n", "", ""]),
            ("NilRule", vec![""]),
            ("ConsSymbol", vec![" ", "", ""]),
            ("NilSymbol", vec![""]),
            ("Grammar", vec!["Start: ", "", ""]),
        ],
    )
    .unwrap()
}

/// The reference output for a question's tree text.
pub fn reference_answer(printer: &OneSts, tree_text: &str) -> String {
    printer.apply(&parse_tree(printer.alphabet(), tree_text).unwrap()).unwrap()
}

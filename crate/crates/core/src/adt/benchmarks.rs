//! Built-in declarations used by the benchmarks and tests.

const HTML: &str = "\
abstract class Node
case class node(t: Tag, l: List) extends Node

abstract class Tag
case class div() extends Tag
case class pre() extends Tag
case class span() extends Tag

abstract class List
case class cons(n: Node, l: List) extends List
case class nil() extends List
";

const GRAMMAR: &str = "\
abstract class Char
case class a() extends Char
case class b() extends Char

abstract class CharList
case class NilChar() extends CharList
case class ConsChar(c: Char, l: CharList) extends CharList

abstract class Symbol
case class Terminal(t: Char) extends Symbol
case class NonTerminal(s: CharList) extends Symbol

case class Rule(lhs: NonTerminal, rhs: ListSymbol)

abstract class ListRule
case class ConsRule(r: Rule, tail: ListRule) extends ListRule
case class NilRule() extends ListRule

abstract class ListSymbol
case class ConsSymbol(s: Symbol, tail: ListSymbol) extends ListSymbol
case class NilSymbol() extends ListSymbol

case class Grammar(s: NonTerminal, r: ListRule)
";

const BINARY: &str = "\
abstract class Binary
case class Empty() extends Binary
case class Zero(x: Binary) extends Binary
case class One(x: Binary) extends Binary
";

/// HTML-like trees: a tagged node with a list of children.
pub fn html_source() -> &'static str {
    HTML
}

/// A context-free grammar described as an ADT.
pub fn grammar_source() -> &'static str {
    GRAMMAR
}

/// Binary numbers built from `Empty`, `Zero(x)` and `One(x)`.
pub fn binary_source() -> &'static str {
    BINARY
}

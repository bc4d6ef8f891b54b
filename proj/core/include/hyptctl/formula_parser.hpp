#pragma once

#include <string>

#include "hyptctl/formula.hpp"
#include "hyptctl/model_parser.hpp"  // ParseError

namespace hyptctl {

/// Parses the ASCII formula grammar:
///
///   top     := quantified | or-chain of unary with '|', '&', '->'
///   quant   := ('exists'|'forall') p '.' top
///   unary   := '~' unary | '(' top ')' | temporal | atom | param-cmp
///   temporal:= ('E'|'A') [('<>'|'[]') [bound]] '[' pi,... ']' '(' body ')'
///   body    := bool | bool ('U'|'R'|'W') [bound] bool
///   bound   := '{' rel (param | nat) '}'
///   atom    := Prop '@' pi
///            | LAST(a@pi) - LAST(b@pi') rel lt | ... ('not')? 'in' [lo, hi]
///            | count-combination rel nat
///            | '(' count-combination ')' 'mod' N (rel nat | ('not')? 'in' {d,...})
///
/// Boolean operands admit '~ & | -> = !=' with '->' weakest, then '|',
/// '&', and '~' strongest; '=' / '!=' compare two Boolean operands.
TopPtr parse_formula(const std::string& text);

/// Reads and parses a formula file ('#' comments allowed).
TopPtr load_formula_file(const std::string& path);

}  // namespace hyptctl

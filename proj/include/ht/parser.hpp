#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "ht/formula.hpp"

namespace ht {

struct ParseError : Error {
  ParseError(const std::string& what, int line, int col)
      : Error(what + " at " + std::to_string(line) + ":" + std::to_string(col)),
        line(line),
        col(col) {}
  int line;
  int col;
};

// Grammar:
//   formula := imp ; imp := or ("->" imp)? ; or := and ("|" and)* ;
//   and := unary ("&" unary)* ;
//   unary := "~" unary | "Prov" "(" "#" formula "#" ")" | "(" formula ")"
//          | "0=1" | IDENT
//   IDENT := [A-Za-z][A-Za-z0-9_']*
// Identifiers bound in `env` become Name nodes, all others Atoms. Name
// resolution is purely lexical here; unbound identifiers are not an error.
FormulaPtr parse_formula(std::string_view text);
FormulaPtr parse_formula(std::string_view text, const DefEnv& env);

// Same grammar plus "@" for a template hole.
FormulaPtr parse_template(std::string_view text, const DefEnv& env);

// DefEnv file: one directive per line, `#` comment lines, UTF-8.
//   def <IDENT> := <formula>
//   diag <IDENT> := <formula with @ for the hole>
// Names may be referenced before their defining line.
DefEnv parse_defenv(std::istream& in, const std::string& source_name);
DefEnv load_defenv(const std::string& path);

} // namespace ht

#include "ht/parser.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "ht/diagonal.hpp"

namespace ht {

namespace {

enum class Tok { LParen, RParen, Hash, Tilde, Amp, Pipe, Arrow, Falsum, Prov, Ident, Hole, End };

struct Token {
  Tok tok;
  std::string text;
  int line;
  int col;
};

class Lexer {
 public:
  Lexer(std::string_view src, int base_line) : src_(src), line_(base_line) {}

  Token next() {
    skip_space();
    int line = line_, col = col_;
    if (pos_ >= src_.size()) return {Tok::End, "", line, col};
    char c = src_[pos_];
    switch (c) {
      case '(': advance(); return {Tok::LParen, "(", line, col};
      case ')': advance(); return {Tok::RParen, ")", line, col};
      case '#': advance(); return {Tok::Hash, "#", line, col};
      case '~': advance(); return {Tok::Tilde, "~", line, col};
      case '&': advance(); return {Tok::Amp, "&", line, col};
      case '|': advance(); return {Tok::Pipe, "|", line, col};
      case '@': advance(); return {Tok::Hole, "@", line, col};
      case '-':
        advance();
        if (pos_ < src_.size() && src_[pos_] == '>') {
          advance();
          return {Tok::Arrow, "->", line, col};
        }
        throw ParseError("expected '->'", line, col);
      case '0':
        if (src_.substr(pos_, 3) == "0=1") {
          advance(); advance(); advance();
          return {Tok::Falsum, "0=1", line, col};
        }
        throw ParseError("expected '0=1'", line, col);
      default:
        break;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::string id;
      while (pos_ < src_.size()) {
        char d = src_[pos_];
        if (std::isalnum(static_cast<unsigned char>(d)) || d == '_' || d == '\'') {
          id.push_back(d);
          advance();
        } else {
          break;
        }
      }
      if (id == "Prov") return {Tok::Prov, id, line, col};
      return {Tok::Ident, id, line, col};
    }
    throw ParseError(std::string("unexpected character '") + c + "'", line, col);
  }

 private:
  void advance() {
    if (src_[pos_] == '\n') {
      line_++;
      col_ = 1;
    } else {
      col_++;
    }
    pos_++;
  }

  void skip_space() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) advance();
  }

  std::string_view src_;
  size_t pos_ = 0;
  int line_;
  int col_ = 1;
};

class Parser {
 public:
  Parser(std::string_view src, const DefEnv* env, bool allow_hole, int base_line)
      : lex_(src, base_line), env_(env), allow_hole_(allow_hole) {
    cur_ = lex_.next();
  }

  FormulaPtr parse() {
    FormulaPtr f = imp();
    expect(Tok::End, "end of formula");
    return f;
  }

 private:
  FormulaPtr imp() {
    FormulaPtr l = disj();
    if (cur_.tok == Tok::Arrow) {
      bump();
      return Formula::imp(l, imp()); // right-associative
    }
    return l;
  }

  FormulaPtr disj() {
    FormulaPtr l = conj();
    while (cur_.tok == Tok::Pipe) {
      bump();
      l = Formula::disj(l, conj());
    }
    return l;
  }

  FormulaPtr conj() {
    FormulaPtr l = unary();
    while (cur_.tok == Tok::Amp) {
      bump();
      l = Formula::conj(l, unary());
    }
    return l;
  }

  FormulaPtr unary() {
    switch (cur_.tok) {
      case Tok::Tilde:
        bump();
        return neg(unary());
      case Tok::Prov: {
        bump();
        expect(Tok::LParen, "'('");
        expect(Tok::Hash, "'#'");
        FormulaPtr q = imp();
        expect(Tok::Hash, "'#'");
        expect(Tok::RParen, "')'");
        return Formula::prov(q);
      }
      case Tok::LParen: {
        bump();
        FormulaPtr f = imp();
        expect(Tok::RParen, "')'");
        return f;
      }
      case Tok::Falsum:
        bump();
        return Formula::falsum();
      case Tok::Hole:
        if (!allow_hole_) throw ParseError("'@' is only valid in templates", cur_.line, cur_.col);
        bump();
        return Formula::hole();
      case Tok::Ident: {
        std::string id = cur_.text;
        bump();
        if (env_ && env_->contains(id)) return Formula::name(id);
        return Formula::atom(id);
      }
      default:
        throw ParseError("expected a formula, got '" + cur_.text + "'", cur_.line, cur_.col);
    }
  }

  void bump() { cur_ = lex_.next(); }

  void expect(Tok t, const std::string& what) {
    if (cur_.tok != t)
      throw ParseError("expected " + what + ", got '" +
                           (cur_.tok == Tok::End ? std::string("end of input") : cur_.text) + "'",
                       cur_.line, cur_.col);
    if (t != Tok::End) bump();
  }

  Lexer lex_;
  Token cur_{Tok::End, "", 0, 0};
  const DefEnv* env_;
  bool allow_hole_;
};

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool is_ident(const std::string& s) {
  if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '\'') return false;
  return true;
}

} // namespace

FormulaPtr parse_formula(std::string_view text) {
  return Parser(text, nullptr, false, 1).parse();
}

FormulaPtr parse_formula(std::string_view text, const DefEnv& env) {
  return Parser(text, &env, false, 1).parse();
}

FormulaPtr parse_template(std::string_view text, const DefEnv& env) {
  return Parser(text, &env, true, 1).parse();
}

DefEnv parse_defenv(std::istream& in, const std::string& source_name) {
  struct Line {
    bool is_diag;
    std::string name;
    std::string body;
    int number;
  };
  std::vector<Line> directives;
  DefEnv name_scope; // names only; marks identifiers as Name nodes while parsing

  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    lineno++;
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    bool is_diag = line.rfind("diag ", 0) == 0;
    bool is_def = line.rfind("def ", 0) == 0;
    if (!is_diag && !is_def)
      throw ParseError(source_name + ": expected 'def' or 'diag' directive", lineno, 1);
    std::string rest = trim(line.substr(is_diag ? 5 : 4));
    size_t assign = rest.find(":=");
    if (assign == std::string::npos)
      throw ParseError(source_name + ": expected ':=' in directive", lineno, 1);
    std::string name = trim(rest.substr(0, assign));
    std::string body = trim(rest.substr(assign + 2));
    if (!is_ident(name))
      throw ParseError(source_name + ": invalid binding name '" + name + "'", lineno, 1);
    if (name_scope.contains(name)) throw DuplicateBindingError(name);
    name_scope.bind(name, Formula::falsum()); // placeholder; only the key matters
    directives.push_back({is_diag, name, body, lineno});
  }

  // Bodies may reference any name in the file, including later ones, so parse
  // in a second pass against the full name scope.
  DefEnv env;
  for (const Line& d : directives) {
    if (d.is_diag) {
      FormulaPtr tmpl = Parser(d.body, &name_scope, true, d.number).parse();
      env = diagonalize(d.name, Template(tmpl), env);
    } else {
      FormulaPtr body = Parser(d.body, &name_scope, false, d.number).parse();
      env.bind(d.name, body);
    }
  }
  return env;
}

DefEnv load_defenv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open definition file: " + path);
  return parse_defenv(in, path);
}

} // namespace ht

#include "ht/script.hpp"

#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ht/parser.hpp"

namespace ht {

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool parse_bool(const std::string& v, int line) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ParseError("expected true/false, got '" + v + "'", line, 1);
}

void set_config_key(LogicConfig& cfg, const std::string& key, const std::string& value,
                    int line) {
  if (key == "ex_falso") cfg.ex_falso = parse_bool(value, line);
  else if (key == "excluded_middle") cfg.excluded_middle = parse_bool(value, line);
  else if (key == "reflection") cfg.reflection = parse_bool(value, line);
  else if (key == "prov_axioms") cfg.prov_axioms = parse_bool(value, line);
  else throw ParseError("unknown config key '" + key + "'", line, 1);
}

// `<formula tail>  (subst A=..., B=...)` -> formula text + substitution map.
// The subst clause, when present, is the last parenthesized group opening
// with the word `subst`.
std::pair<std::string, Subst> split_subst(const std::string& tail, const DefEnv& env, int line) {
  size_t at = tail.rfind("(subst ");
  if (at == std::string::npos) at = tail.rfind("(subst\t");
  if (at == std::string::npos) return {trim(tail), {}};

  std::string formula = trim(tail.substr(0, at));
  std::string clause = trim(tail.substr(at));
  if (clause.back() != ')') throw ParseError("unterminated subst clause", line, 1);
  clause = trim(clause.substr(6, clause.size() - 7)); // drop "(subst" and ")"

  Subst subst;
  size_t pos = 0;
  while (pos < clause.size()) {
    size_t eq = clause.find('=', pos);
    if (eq == std::string::npos) throw ParseError("expected 'X=<formula>' in subst", line, 1);
    std::string var = trim(clause.substr(pos, eq - pos));
    if (!var.empty() && var.front() == ',') var = trim(var.substr(1));
    size_t next = clause.find(", ", eq);
    // A metavariable entry ends before ", <capital>=".
    while (next != std::string::npos) {
      size_t v = next + 2;
      size_t ve = v;
      while (ve < clause.size() && (std::isalnum(static_cast<unsigned char>(clause[ve])) ||
                                    clause[ve] == '_' || clause[ve] == '\''))
        ve++;
      if (ve > v && ve < clause.size() && clause[ve] == '=') break;
      next = clause.find(", ", next + 1);
    }
    std::string value = next == std::string::npos ? clause.substr(eq + 1)
                                                  : clause.substr(eq + 1, next - eq - 1);
    subst[var] = parse_formula(trim(value), env);
    pos = next == std::string::npos ? clause.size() : next + 2;
  }
  return {formula, subst};
}

int parse_int(const std::string& s, int line, const char* what) {
  try {
    size_t used = 0;
    int v = std::stoi(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError(std::string("expected ") + what + ", got '" + s + "'", line, 1);
  }
}

Sequent parse_sequent(const std::string& text, const DefEnv& env, int line) {
  size_t turnstile = text.find("|-");
  if (turnstile == std::string::npos)
    throw ParseError("expected '|-' in sequent", line, 1);
  std::string hyp_part = trim(text.substr(0, turnstile));
  std::string concl_part = trim(text.substr(turnstile + 2));

  Sequent s;
  s.concl = parse_formula(concl_part, env);
  if (!hyp_part.empty()) {
    if (hyp_part.front() != '[' || hyp_part.back() != ']')
      throw ParseError("hypotheses must be bracketed: [f1, f2]", line, 1);
    std::string inner = trim(hyp_part.substr(1, hyp_part.size() - 2));
    size_t pos = 0;
    while (pos < inner.size()) {
      size_t comma = inner.find(',', pos); // formulas contain no commas
      std::string item =
          comma == std::string::npos ? inner.substr(pos) : inner.substr(pos, comma - pos);
      item = trim(item);
      if (!item.empty()) {
        FormulaPtr f = parse_formula(item, env);
        if (!s.has_hyp(f)) s.hyps.push_back(f);
      }
      pos = comma == std::string::npos ? inner.size() : comma + 1;
    }
  }
  return s;
}

} // namespace

ScriptFile parse_script(std::istream& in, const std::string& source_name,
                        const std::string& base_dir) {
  ScriptFile out;
  out.script.source_name = source_name;
  bool saw_goal = false;
  bool saw_directive = false;

  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    lineno++;
    std::string line = trim(raw);
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (!saw_directive) {
        std::string body = trim(line.substr(1));
        size_t colon = body.find(':');
        if (colon != std::string::npos) {
          std::string key = trim(body.substr(0, colon));
          std::string value = trim(body.substr(colon + 1));
          if (!key.empty() && key.find(' ') == std::string::npos)
            out.annotations[key] = value;
        }
      }
      continue;
    }

    if (line.rfind("use ", 0) == 0) {
      saw_directive = true;
      std::string rel = trim(line.substr(4));
      std::filesystem::path p(rel);
      if (p.is_relative() && !base_dir.empty()) p = std::filesystem::path(base_dir) / p;
      DefEnv loaded = load_defenv(p.string());
      for (const auto& [n, b] : loaded.bindings()) out.script.env.bind(n, b);
      continue;
    }

    if (line.rfind("config", 0) == 0 &&
        (line.size() == 6 || std::isspace(static_cast<unsigned char>(line[6])))) {
      saw_directive = true;
      std::istringstream fields(line.substr(6));
      std::string kv;
      while (fields >> kv) {
        size_t eq = kv.find('=');
        if (eq == std::string::npos)
          throw ParseError("expected key=value in config line", lineno, 1);
        set_config_key(out.script.config, kv.substr(0, eq), kv.substr(eq + 1), lineno);
      }
      continue;
    }

    if (line.rfind("goal ", 0) == 0) {
      saw_directive = true;
      out.script.goal = parse_sequent(trim(line.substr(5)), out.script.env, lineno);
      saw_goal = true;
      continue;
    }

    // Step line: `<n>. <rule> [...] (discharge <k>)? : <tail>`.
    saw_directive = true;
    if (!std::isdigit(static_cast<unsigned char>(line[0])))
      throw ParseError("expected a step line or directive", lineno, 1);
    size_t dot = line.find('.');
    if (dot == std::string::npos) throw ParseError("expected '.' after step number", lineno, 1);
    ProofStep step;
    step.index = parse_int(trim(line.substr(0, dot)), lineno, "a step number");

    size_t colon = line.find(" : ", dot);
    if (colon == std::string::npos) {
      colon = line.find(':', dot);
      if (colon == std::string::npos)
        throw ParseError("expected ':' before the step formula", lineno, 1);
    }
    std::string head = trim(line.substr(dot + 1, colon - dot - 1));
    std::string tail = trim(line.substr(line[colon] == ' ' ? colon + 3 : colon + 1));

    std::istringstream head_in(head);
    std::string rule_tok;
    head_in >> rule_tok;
    auto rule = rule_from_name(rule_tok);
    if (!rule) throw ParseError("unknown rule '" + rule_tok + "'", lineno, 1);
    step.rule = *rule;

    std::string rest;
    std::getline(head_in, rest);
    rest = trim(rest);
    if (!rest.empty() && rest[0] == '[') {
      size_t close = rest.find(']');
      if (close == std::string::npos) throw ParseError("unterminated premise list", lineno, 1);
      std::string inner = rest.substr(1, close - 1);
      std::istringstream prems(inner);
      std::string tok;
      while (std::getline(prems, tok, ',')) {
        tok = trim(tok);
        if (!tok.empty()) step.premises.push_back(parse_int(tok, lineno, "a premise index"));
      }
      rest = trim(rest.substr(close + 1));
    }
    if (rest.rfind("discharge", 0) == 0) {
      std::string num = trim(rest.substr(9));
      if (num.empty()) throw ParseError("discharge needs a step number", lineno, 1);
      step.discharge = parse_int(num, lineno, "a step number");
      rest = "";
    }
    if (!rest.empty()) throw ParseError("unexpected text '" + rest + "' in step head", lineno, 1);

    auto [formula_text, subst] = split_subst(tail, out.script.env, lineno);
    step.formula = parse_formula(formula_text, out.script.env);
    step.subst = std::move(subst);
    out.script.steps.push_back(std::move(step));
  }

  if (!saw_goal) throw ParseError(source_name + ": script has no goal line", lineno, 1);
  return out;
}

ScriptFile load_script(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open proof script: " + path);
  std::filesystem::path p(path);
  return parse_script(in, path, p.parent_path().string());
}

LogicConfig apply_config_overrides(LogicConfig base,
                                   const std::map<std::string, std::string>& overrides) {
  for (const auto& [k, v] : overrides) set_config_key(base, k, v, 0);
  return base;
}

std::string render_script(const ProofScript& script, const std::string& use_line) {
  std::ostringstream out;
  if (!use_line.empty()) out << "use " << use_line << "\n";
  const LogicConfig& c = script.config;
  out << "config ex_falso=" << (c.ex_falso ? "true" : "false")
      << " excluded_middle=" << (c.excluded_middle ? "true" : "false")
      << " reflection=" << (c.reflection ? "true" : "false")
      << " prov_axioms=" << (c.prov_axioms ? "true" : "false") << "\n";
  out << "goal " << script.goal.text() << "\n";
  for (const ProofStep& s : script.steps) {
    out << s.index << ". " << rule_name(s.rule);
    if (!s.premises.empty()) {
      out << " [";
      for (size_t i = 0; i < s.premises.size(); i++) out << (i ? ", " : "") << s.premises[i];
      out << "]";
    }
    if (s.discharge) out << " discharge " << *s.discharge;
    out << " : " << s.formula->text();
    if (!s.subst.empty()) {
      out << "  (subst ";
      bool first = true;
      for (const auto& [var, value] : s.subst) {
        if (!first) out << ", ";
        first = false;
        out << var << "=" << value->text();
      }
      out << ")";
    }
    out << "\n";
  }
  return out.str();
}

} // namespace ht

#pragma once

#include "ht/formula.hpp"

namespace ht {

struct TemplateError : Error {
  explicit TemplateError(const std::string& what) : Error(what) {}
};

// A formula with at least one Hole leaf, e.g. Prov(#~@#).
class Template {
 public:
  explicit Template(FormulaPtr body) : body_(std::move(body)) {
    if (!body_->has_hole()) throw TemplateError("template has no hole");
  }
  const FormulaPtr& body() const { return body_; }

 private:
  FormulaPtr body_;
};

// Extends env with name := t[@ := name]. Every hole is filled with the same
// Name node, so unfold_once(Name(name), env', name) gives back the filled
// template: the fixed point holds by construction.
DefEnv diagonalize(const std::string& name, const Template& t, const DefEnv& env);

} // namespace ht

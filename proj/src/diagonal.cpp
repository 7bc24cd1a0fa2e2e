#include "ht/diagonal.hpp"

namespace ht {

DefEnv diagonalize(const std::string& name, const Template& t, const DefEnv& env) {
  if (env.contains(name)) throw DuplicateBindingError(name);
  DefEnv extended = env;
  extended.bind(name, fill_holes(t.body(), Formula::name(name)));
  return extended;
}

} // namespace ht

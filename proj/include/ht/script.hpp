#pragma once

#include <iosfwd>
#include <map>
#include <string>

#include "ht/kernel.hpp"

namespace ht {

// A parsed .ht proof script plus its header-comment annotations. Annotations
// are comment lines of the form `# key: value` appearing before the first
// directive; the bundled scripts use `expect` (ok | rejected) and
// `fails-under` (config overrides that flip the verdict).
struct ScriptFile {
  ProofScript script;
  std::map<std::string, std::string> annotations;
};

// Line-oriented format:
//   use <defenv-file>            (path relative to the script)
//   config ex_falso=<bool> excluded_middle=<bool> reflection=<bool> prov_axioms=<bool>
//   goal [f1, f2] |- f           (or `goal |- f`)
//   <n>. <rule> [<premises>] (discharge <k>)? : <formula>  (subst A=<f>, B=<f>)
// `assume` introduces a hypothesis; premise brackets may be omitted when empty.
// Lines whose first non-blank character is '#' are comments.
ScriptFile parse_script(std::istream& in, const std::string& source_name,
                        const std::string& base_dir);
ScriptFile load_script(const std::string& path);

// Applies `key=value` overrides (same keys as the config line) on top of the
// script's own config.
LogicConfig apply_config_overrides(LogicConfig base,
                                   const std::map<std::string, std::string>& overrides);

// Renders a script in the file format. Re-parsing checks identically provided
// the use line (if any) reproduces the script's definitions.
std::string render_script(const ProofScript& script, const std::string& use_line = "");

} // namespace ht

#include <string>

#include "archproof/dsl.hpp"

namespace archproof {

std::string render(const Architecture& arch) {
  std::string out;
  auto line = [&out](const std::string& s) {
    out += s;
    out += "\n";
  };

  for (const ComponentId& c : arch.components) line("component " + c + ";");
  for (const VariableDecl& v : arch.variables)
    line("var " + v.name + " range " + std::to_string(v.range) + ";");
  for (const std::string& c : arch.constants) line("const " + c + ";");
  for (const FunctionDecl& f : arch.functions)
    line("fun " + f.name + "/" + std::to_string(f.arity) + ";");

  for (const Primitive& p : arch.primitives) line(to_string(p) + ";");

  for (const DepEntry& d : arch.deps) line(to_string(d) + ";");
  for (const DeductiveRule& r : arch.rules) line(to_string(r) + ";");

  if (!arch.functionality.empty()) {
    std::string eqs;
    for (std::size_t i = 0; i < arch.functionality.size(); ++i) {
      if (i) eqs += "; ";
      eqs += to_string(arch.functionality[i]);
    }
    line("functionality {" + eqs + "};");
  }
  return out;
}

}  // namespace archproof

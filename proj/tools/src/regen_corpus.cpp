// Regenerates the corpus/ directory from the built-in architectures with
// their default parameters.  Run from the repository root (or pass the
// target directory); the checked-in files must match this output byte for
// byte.
#include <fstream>
#include <iostream>
#include <string>

#include "archproof/corpus.hpp"
#include "archproof/dsl.hpp"

int main(int argc, char** argv) {
  std::string dir = argc > 1 ? argv[1] : "corpus";
  for (const std::string& name : archproof::corpus_names()) {
    std::string path = dir + "/" + name + ".parch";
    std::ofstream out(path, std::ios::binary);
    if (!out) {
      std::cerr << "error: cannot write " << path << "\n";
      return 1;
    }
    out << archproof::render(archproof::instantiate_corpus(name));
    std::cout << "wrote " << path << "\n";
  }
  return 0;
}

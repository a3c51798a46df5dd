// SPDX-License-Identifier: Apache-2.0
// Prints path, qualified name, span, cc and sloc of every callable, one
// tab-separated line each, in the format of oracles/cc_oracle.py.
#include <fstream>
#include <iostream>
#include <sstream>

#include "slopscope/common/error.hpp"
#include "slopscope/source/adapter.hpp"

int main(int argc, char** argv) {
  const auto registry = slopscope::source::AdapterRegistry::builtin();
  const auto* python = registry.by_language("python");
  int status = 0;
  for (int i = 1; i < argc; ++i) {
    std::ifstream in(argv[i], std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    try {
      const auto parsed = python->parse(ss.str());
      for (const auto& c : parsed->callables(argv[i])) {
        std::cout << c.file << '\t' << c.qualified_name << '\t' << c.span.start_line << '\t' << c.span.end_line
                  << '\t' << c.cc << '\t' << c.sloc << '\n';
      }
    } catch (const slopscope::ParseError& e) {
      std::cerr << argv[i] << ": " << e.what() << '\n';
      status = 1;
    }
  }
  return status;
}

#pragma once

#include <string>
#include <vector>

#include "minicog/ffi.hpp"
#include "minicog/typecheck.hpp"

namespace minicog {

/// Registry with the array library, the generic loop, and machine/shallow
/// forms of every corpus function registered.
Registry make_standard_registry();

/// Shared declarations and combinator bodies available to generated programs.
const std::string& prelude_source();

struct CorpusProgram {
  std::string name;   // "sum", "binsearch", "bump", "poly_demo"
  std::string entry;  // entry function
  std::string source;
  TypedProgram prog;
};

const std::vector<CorpusProgram>& corpus_programs();
const CorpusProgram& corpus_program(const std::string& name);

}  // namespace minicog

#pragma once

#include <stdexcept>
#include <string>

#include "minicog/ast.hpp"

namespace minicog {

struct ParseError : std::runtime_error {
  int line = 0, col = 0;
  ParseError(std::string msg, int l, int c)
      : std::runtime_error(std::move(msg) + " at " + std::to_string(l) + ":" + std::to_string(c)),
        line(l),
        col(c) {}
};

/// Parses a whole source file. Also resolves names: duplicate definitions,
/// unbound variables/functions/type constructors and arity mismatches on
/// declared abstract types are reported here.
Program parse_program(const std::string& text);

std::string pretty_print(const Program& p);
std::string pretty_print(const Expr& e);

}  // namespace minicog

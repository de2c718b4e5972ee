#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dglift/algebra.hpp"
#include "dglift/module.hpp"
#include "dglift/scalar.hpp"

namespace dglift {

struct SourceLocation {
  int line = 0;
  int column = 0;
};

struct InstanceLimits {
  std::optional<int> max_degree;
  std::optional<int> max_tensor;
  std::optional<int> lbound;
};

struct NamedModule {
  std::string name;
  SemifreeModule module;
  SourceLocation where;
};

/// A parsed instance file: one algebra and the modules over it.
///
///   # comment
///   [base]
///   ring = k[a]/(a^2)          (or just k)
///   [algebra]
///   X : 1, d = a               name : degree [, d = expression]
///   Y : 2, d = a*X
///   subalgebra = X             a prefix of the variables, default none
///   [module K]
///   e0 : 0
///   e1 : 1, d = e0*a           generators in triangular order
///   [limits]
///   max_degree = 10
///   max_tensor = 3
///   lbound = 3
///
/// Expressions use +, -, * (or juxtaposition), ^ on algebra factors,
/// parentheses and rational constants such as 3/2. In module differentials
/// each term carries one generator as its leftmost non-scalar factor.
struct Instance {
  std::string source;
  Algebra algebra;
  std::vector<NamedModule> modules;
  InstanceLimits limits;

  /// Throws Error(InvalidInstance) for an unknown name.
  const NamedModule& module(const std::string& name) const;
};

struct ParseOptions {
  Field field = Field::rationals();
  /// Overrides the file's max_degree when set.
  std::optional<int> max_degree;
};

/// Throws Error(InvalidInstance) with "source:line:column: message".
Instance parse_instance(std::string_view text, const ParseOptions& opts = {}, const std::string& source = "<input>");
Instance load_instance(const std::string& path, const ParseOptions& opts = {});

}  // namespace dglift

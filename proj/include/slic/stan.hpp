#pragma once

#include <string>

#include "slic/ast.hpp"

namespace slic {

// Stan spelling of a declaration type: int<lower=1,upper=K>, array[n, m] real.
[[nodiscard]] std::string stan_type(const BaseType& t);

// Block-structured Stan text. Requires no discrete model-level parameter;
// placeholders are inferred first.
[[nodiscard]] std::string emit_stan(const Program& p);

// Collapses whitespace runs and drops spaces around punctuation, for golden
// comparisons.
[[nodiscard]] std::string normalize_whitespace(const std::string& text);

}  // namespace slic

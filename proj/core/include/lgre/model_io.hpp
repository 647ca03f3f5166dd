#pragma once

#include <string>

#include "lgre/model.hpp"

namespace lgre {

/// Line-oriented model text:
///
///     domain: a b c
///     unary dog: a b
///     binary sniffs: (a,b) (b,a)
///
/// `#` starts a comment. Every failure, including duplicate elements and
/// tuples over undeclared elements, is a ParseError at the offending token.
RelationalModel parse_model(const std::string& text);

/// Canonical text form; relations sorted by name, tuples sorted.
std::string render_model(const RelationalModel& m);

/// `{"domain": [...], "unary": {"p": [...]}, "binary": {"r": [["a","b"], ...]}}`
RelationalModel model_from_json(const std::string& text);
std::string model_to_json(const RelationalModel& m);

/// Chooses JSON for a `.json` extension and the text format otherwise.
RelationalModel load_model(const std::string& path);
void save_model(const RelationalModel& m, const std::string& path);

}  // namespace lgre

#pragma once

#include <string>
#include <string_view>

#include "holmatch/library.hpp"
#include "holmatch/term.hpp"
#include "holmatch/type.hpp"

namespace holmatch {

// Parses an exchange-format document.  When `name` is empty the library name
// is derived from the first declared qualified name (segment one, category
// prefix stripped).  Signatures may appear anywhere in the document; every
// constant used by a theorem must have one.
Library parse_library(std::string_view text, std::string_view name = {});
Library parse_library_file(const std::string& path, std::string_view name = {});

// Standalone term parser (all variables must be bound); mirrors thm payloads.
TermPtr parse_term(std::string_view text);

// Standalone type parser; variables renumbered by first occurrence.
TypePtr parse_type(std::string_view text);

// Inverse of parse_term: binders numbered by binding depth.
std::string write_term(const TermPtr& t);

}  // namespace holmatch

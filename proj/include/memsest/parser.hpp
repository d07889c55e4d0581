#pragma once

#include <string_view>

#include "memsest/ast.hpp"

namespace memsest {

/// Parses and name-resolves a MiniC translation unit. Throws ParseError with
/// one or more diagnostics on failure.
Ast parse(std::string_view source);

/// Parses a standalone expression. Identifiers are left unresolved (used for
/// condition text in path files and sweep grid expressions).
ExprPtr parse_expression(std::string_view text);

} // namespace memsest

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace memsest {

/// Array input generator: `sorted`, `reversed`, `const:<v>`, `random:<seed>` or
/// `list:<v>,<v>,...`, each optionally suffixed with `@<len>`. The native
/// harness implements the same generators bit-for-bit.
struct ArrayGen {
  enum class Kind { Sorted, Reversed, Const, Random, List };

  Kind kind = Kind::Sorted;
  std::int64_t arg = 0;
  std::optional<std::int64_t> len;
  std::vector<std::int64_t> values;   // List
  std::string spec;                   // original text
};

ArrayGen parse_array_gen(std::string_view spec);

/// Materializes the array. An explicit `@len` wins over `declared_len`; a list
/// without either takes its own length. Throws InvalidInput if no length is known.
std::vector<std::int64_t> generate(const ArrayGen& gen, std::optional<std::int64_t> declared_len);

} // namespace memsest

#include "memsest/generators.hpp"

#include <charconv>

#include "memsest/error.hpp"

namespace memsest {

namespace {

std::int64_t parse_num(std::string_view s, std::string_view spec) {
  std::int64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || s.empty())
    throw Error(Errc::InvalidInput, "bad number '" + std::string(s) + "' in array generator '" +
                                        std::string(spec) + "'");
  return v;
}

} // namespace

ArrayGen parse_array_gen(std::string_view spec) {
  ArrayGen g;
  g.spec = std::string(spec);
  std::string_view body = spec;
  if (auto at = body.find('@'); at != std::string_view::npos) {
    g.len = parse_num(body.substr(at + 1), spec);
    if (*g.len < 0)
      throw Error(Errc::InvalidInput, "negative array length in '" + std::string(spec) + "'");
    body = body.substr(0, at);
  }
  std::string_view kind = body;
  std::string_view arg;
  bool has_arg = false;
  if (auto colon = body.find(':'); colon != std::string_view::npos) {
    kind = body.substr(0, colon);
    arg = body.substr(colon + 1);
    has_arg = true;
  }
  if (kind == "sorted" || kind == "reversed") {
    g.kind = kind == "sorted" ? ArrayGen::Kind::Sorted : ArrayGen::Kind::Reversed;
    if (has_arg)
      throw Error(Errc::InvalidInput, "generator '" + std::string(kind) + "' takes no argument");
  } else if (kind == "const" || kind == "random") {
    g.kind = kind == "const" ? ArrayGen::Kind::Const : ArrayGen::Kind::Random;
    if (!has_arg)
      throw Error(Errc::InvalidInput, "generator '" + std::string(kind) + "' needs ':<value>'");
    g.arg = parse_num(arg, spec);
  } else if (kind == "list") {
    g.kind = ArrayGen::Kind::List;
    std::size_t pos = 0;
    while (pos <= arg.size()) {
      std::size_t comma = arg.find(',', pos);
      if (comma == std::string_view::npos)
        comma = arg.size();
      g.values.push_back(parse_num(arg.substr(pos, comma - pos), spec));
      pos = comma + 1;
    }
  } else {
    throw Error(Errc::InvalidInput, "unknown array generator '" + std::string(spec) +
                                        "' (expected sorted, reversed, const:V, random:SEED, list:...)");
  }
  return g;
}

std::vector<std::int64_t> generate(const ArrayGen& gen, std::optional<std::int64_t> declared_len) {
  std::optional<std::int64_t> len = gen.len ? gen.len : declared_len;
  if (gen.kind == ArrayGen::Kind::List && !len)
    len = static_cast<std::int64_t>(gen.values.size());
  if (!len)
    throw Error(Errc::InvalidInput, "array length unknown for generator '" + gen.spec + "'; append @<len>");
  if (*len < 0)
    throw Error(Errc::IndexOutOfBounds, "negative array length for generator '" + gen.spec + "'");
  std::vector<std::int64_t> out(static_cast<std::size_t>(*len), 0);
  std::uint64_t state = static_cast<std::uint64_t>(gen.arg);
  for (std::int64_t i = 0; i < *len; ++i) {
    std::int64_t v = 0;
    switch (gen.kind) {
      case ArrayGen::Kind::Sorted: v = static_cast<std::int32_t>(i); break;
      case ArrayGen::Kind::Reversed: v = static_cast<std::int32_t>(*len - 1 - i); break;
      case ArrayGen::Kind::Const: v = static_cast<std::int32_t>(gen.arg); break;
      case ArrayGen::Kind::Random:
        state = state * 6364136223846793005ULL + 1442695040888963407ULL;
        v = static_cast<std::int32_t>((state >> 33) % 1000);
        break;
      case ArrayGen::Kind::List:
        v = i < static_cast<std::int64_t>(gen.values.size()) ? static_cast<std::int32_t>(gen.values[static_cast<std::size_t>(i)]) : 0;
        break;
    }
    out[static_cast<std::size_t>(i)] = v;
  }
  return out;
}

} // namespace memsest

#pragma once

#include <string>

#include "memsest/pathex.hpp"

namespace memsest {

/// Line-oriented export of a PathSet:
///
///   mems-paths 1
///   function <name>
///   domain <var> <lo> <hi>            (one per variable)
///   assume <lhs> <rel> <rhs>          (zero or more)
///   truncated none|PathLimitExceeded|UnrollLimitExceeded
///   site <id> <condition text>        (sites used by any path)
///   path <path id>
///   decisions s<id>=T|F|t|f ...       (upper case: logged by the instrumented program)
///   condition <text>
///   constraint <lhs> <rel> <rhs>      (zero or more)
///   path_len <n>
///   pind <n>
///   end
std::string write_paths(const PathSet& set);
PathSet read_paths(const std::string& text);

/// `path_<index>`
std::string path_id(std::size_t index);

} // namespace memsest

#pragma once

#include "msflow/flow_system.hpp"

#include <istream>
#include <string>
#include <string_view>

// Line-oriented .msf reader and writer.
//
//   dim <n>
//   label <free text to end of line>
//   expect-betti <b0> <b1> ... <bn>
//   rest <name> <index>
//   orbit <name> <index> <twisted|untwisted>
//   conn <source-name> <target-name> <count>
//
// '#' starts a comment. Unknown directives are errors.

namespace msflow::flow {

/// Syntax-level parse only; semantic rules are left to validate() so that
/// broken systems can still be loaded and diagnosed. Throws ParseError.
FlowSystem parse_msf(std::string_view text);
FlowSystem parse_msf(std::istream& in);
FlowSystem load_msf(const std::string& path);

/// Deterministic output: elements in declaration order, conn lines sorted by
/// (source, target) name.
std::string serialize_msf(const FlowSystem& s);

bool is_valid_name(std::string_view name);

} // namespace msflow::flow

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "revelio/petri_net.hpp"

namespace revelio {

struct ParseError : std::runtime_error {
  ParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line(line) {}
  int line;
};

enum class InputFormat { canonical, llnet, prefix_dump };

/// Detects the format from the first line: "PEP" -> llnet, "net " -> canonical,
/// "# prefix" -> prefix dump. Throws ParseError otherwise.
InputFormat detect_format(std::string_view text);

/// Canonical line-oriented format:
///   net <name>
///   place <name> [*]
///   trans <name>
///   arc <a> -> <b>
PetriNet parse_canonical(const std::string& text);

std::string serialize_canonical(const PetriNet& net);

/// PEP low-level format, FORMAT_N2 subset. Initial marking from M1 annotations.
PetriNet parse_llnet(const std::string& text);

}  // namespace revelio

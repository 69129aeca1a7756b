#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "sc/derivation.hpp"
#include "sc/structure.hpp"

namespace sc {

// Line-based .struct text:
//   oriented                      (optional header flag)
//   part <id> <type> [k=v ...] [@payload]
//   rel <id> <id> <label> [k=v ...]
// '#' starts a comment. serialize() emits the canonical layout, so
// serialize(parse(serialize(s))) == serialize(s).
Structure parse_struct(std::string_view text);
std::string serialize_struct(const Structure& s);

// Parses the struct lines of a text and hands any other line to `extra`
// (used by the .schema reader). `extra` returns false for unknown keywords.
Structure parse_struct_lines(std::string_view text,
                             const std::function<bool(const std::vector<std::string>&, int)>& extra);

// Sidecar lines: masks and partition blocks.
//   mask drop-attr <name> | mask drop-part-attr <name> | mask drop-rel-attr <name>
//   mask merge-type <t1> [<t2> ...] -> <t> | mask merge-label <l1> [...] -> <l>
//   block <id> [<id> ...]
struct Sidecar {
  MorphismMask mask;
  std::vector<std::vector<std::string>> blocks;
};

Sidecar parse_sidecar(std::string_view text);
std::string serialize_sidecar(const Sidecar& sc);
std::string serialize_mask(const MorphismMask& m);

std::vector<std::string> split_ws(std::string_view line);
// Drops a trailing "# ..." comment; "#word" tokens are kept unless they open the line.
std::string_view strip_comment(std::string_view line);
std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

}  // namespace sc

#include "sc/struct_io.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "sc/error.hpp"

namespace sc {

std::vector<std::string> split_ws(std::string_view line) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.emplace_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(0, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << content;
}

namespace {

}  // namespace

// A '#' opens a comment at the start of a line or when followed by a blank,
// so schema literals such as "#red" survive.
std::string_view strip_comment(std::string_view line) {
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] != '#') continue;
    const bool lead = line.find_first_not_of(" \t") == i;
    if (lead || i + 1 == line.size() || std::isspace(static_cast<unsigned char>(line[i + 1]))) return line.substr(0, i);
  }
  return line;
}

namespace {

bool plain_token(std::string_view t) {
  if (t.empty() || t.front() == '@') return false;
  for (char c : t) {
    if (std::isspace(static_cast<unsigned char>(c)) || c == '=' || c == '#') return false;
  }
  return true;
}

void require_token(std::string_view t, const char* what) {
  if (!plain_token(t)) throw ValidationError(std::string("cannot serialize ") + what + " '" + std::string(t) + "'");
}

std::pair<std::string, int> parse_attr(const std::string& tok, int line) {
  auto eq = tok.find('=');
  if (eq == std::string::npos || eq == 0) throw ParseError(line, "expected <name>=<int>, got '" + tok + "'");
  const std::string name = tok.substr(0, eq);
  const std::string value = tok.substr(eq + 1);
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(value, &used);
  } catch (const std::exception&) {
    throw ParseError(line, "attribute '" + name + "' is not an integer");
  }
  if (used != value.size()) throw ParseError(line, "attribute '" + name + "' is not an integer");
  return {name, v};
}

}  // namespace

Structure parse_struct_lines(std::string_view text,
                             const std::function<bool(const std::vector<std::string>&, int)>& extra) {
  Structure s;
  bool seen_part = false;
  int lineno = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++lineno;
    auto toks = split_ws(strip_comment(text.substr(start, end - start)));
    start = end + 1;
    if (toks.empty()) {
      if (end == text.size()) break;
      continue;
    }
    const auto& kw = toks[0];
    if (kw == "oriented") {
      if (toks.size() != 1) throw ParseError(lineno, "'oriented' takes no arguments");
      if (seen_part) throw ParseError(lineno, "'oriented' must precede parts");
      s.set_oriented(true);
    } else if (kw == "part") {
      if (toks.size() < 3) throw ParseError(lineno, "expected: part <id> <type> [attr=int ...]");
      AttrMap attrs;
      std::string payload;
      for (std::size_t i = 3; i < toks.size(); ++i) {
        if (toks[i][0] == '@') {
          if (!payload.empty() || toks[i].size() == 1) throw ParseError(lineno, "bad payload");
          payload = toks[i].substr(1);
          continue;
        }
        auto [k, v] = parse_attr(toks[i], lineno);
        if (!attrs.emplace(k, v).second) throw ParseError(lineno, "duplicate attribute '" + k + "'");
      }
      if (s.index_of(toks[1])) throw ParseError(lineno, "duplicate part id '" + toks[1] + "'");
      s.add_part(toks[1], toks[2], std::move(attrs), std::move(payload));
      seen_part = true;
    } else if (kw == "rel") {
      if (toks.size() < 4) throw ParseError(lineno, "expected: rel <id> <id> <label> [attr=int ...]");
      auto a = s.index_of(toks[1]);
      auto b = s.index_of(toks[2]);
      if (!a) throw ParseError(lineno, "unknown part '" + toks[1] + "'");
      if (!b) throw ParseError(lineno, "unknown part '" + toks[2] + "'");
      AttrMap attrs;
      for (std::size_t i = 4; i < toks.size(); ++i) {
        auto [k, v] = parse_attr(toks[i], lineno);
        if (!attrs.emplace(k, v).second) throw ParseError(lineno, "duplicate attribute '" + k + "'");
      }
      s.add_relation(*a, *b, toks[3], std::move(attrs));
    } else if (!extra || !extra(toks, lineno)) {
      throw ParseError(lineno, "unknown keyword '" + kw + "'");
    }
  }
  return s;
}

Structure parse_struct(std::string_view text) { return parse_struct_lines(text, nullptr); }

std::string serialize_struct(const Structure& s) {
  std::string out;
  if (s.oriented()) out += "oriented\n";
  for (const auto& p : s.parts()) {
    require_token(p.id, "part id");
    require_token(p.type, "type");
    out += "part " + p.id + " " + p.type;
    for (const auto& [k, v] : p.attrs) {
      require_token(k, "attribute");
      out += " " + k + "=" + std::to_string(v);
    }
    if (!p.payload.empty()) {
      require_token(p.payload, "payload");
      out += " @" + p.payload;
    }
    out += '\n';
  }
  for (const auto& r : s.relations()) {
    require_token(r.label, "label");
    out += "rel " + s.part(r.from).id + " " + s.part(r.to).id + " " + r.label;
    for (const auto& [k, v] : r.attrs) out += " " + k + "=" + std::to_string(v);
    out += '\n';
  }
  return out;
}

Sidecar parse_sidecar(std::string_view text) {
  Sidecar sc;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto toks = split_ws(strip_comment(line));
    if (toks.empty()) continue;
    if (toks[0] == "block") {
      if (toks.size() < 2) throw ParseError(lineno, "empty block");
      sc.blocks.emplace_back(toks.begin() + 1, toks.end());
      continue;
    }
    if (toks[0] != "mask" || toks.size() < 3) throw ParseError(lineno, "expected 'mask <op> ...' or 'block <ids>'");
    const auto& op = toks[1];
    if (op == "drop-attr" || op == "drop-part-attr" || op == "drop-rel-attr") {
      if (toks.size() != 3) throw ParseError(lineno, op + " takes one attribute name");
      auto& set = op == "drop-attr" ? sc.mask.drop_attrs
                  : op == "drop-part-attr" ? sc.mask.drop_part_attrs
                                           : sc.mask.drop_rel_attrs;
      set.insert(toks[2]);
    } else if (op == "merge-type" || op == "merge-label") {
      if (toks.size() < 5 || toks[toks.size() - 2] != "->") {
        throw ParseError(lineno, op + " expects <a> [<b> ...] -> <target>");
      }
      auto& map = op == "merge-type" ? sc.mask.merge_types : sc.mask.merge_labels;
      for (std::size_t i = 2; i + 2 < toks.size(); ++i) {
        auto [it, fresh] = map.emplace(toks[i], toks.back());
        if (!fresh && it->second != toks.back()) {
          throw ParseError(lineno, "'" + toks[i] + "' already mapped to '" + it->second + "'");
        }
      }
    } else {
      throw ParseError(lineno, "unknown mask operation '" + op + "'");
    }
  }
  return sc;
}

std::string serialize_mask(const MorphismMask& m) {
  std::string out;
  for (const auto& a : m.drop_attrs) out += "mask drop-attr " + a + "\n";
  for (const auto& a : m.drop_part_attrs) out += "mask drop-part-attr " + a + "\n";
  for (const auto& a : m.drop_rel_attrs) out += "mask drop-rel-attr " + a + "\n";
  for (const auto& [from, to] : m.merge_types) out += "mask merge-type " + from + " -> " + to + "\n";
  for (const auto& [from, to] : m.merge_labels) out += "mask merge-label " + from + " -> " + to + "\n";
  return out;
}

std::string serialize_sidecar(const Sidecar& sc) {
  std::string out = serialize_mask(sc.mask);
  for (const auto& b : sc.blocks) {
    out += "block";
    for (const auto& id : b) out += " " + id;
    out += "\n";
  }
  return out;
}

}  // namespace sc

#include "sc/nand.hpp"

#include <map>
#include <regex>
#include <set>

#include "sc/error.hpp"
#include "sc/struct_io.hpp"

namespace sc {

TruthTable truth_table(int inputs, std::uint64_t bits) {
  if (inputs < 1 || inputs > 6) throw PreconditionError("truth table needs 1..6 inputs");
  TruthTable t;
  t.inputs = inputs;
  for (int r = 0; r < (1 << inputs); ++r) t.rows.push_back((bits >> r) & 1);
  return t;
}

namespace {

class Builder {
 public:
  explicit Builder(NandNet& net) : net_(net) {}

  std::string nand(const std::string& a, const std::string& b) {
    auto key = a < b ? std::make_pair(a, b) : std::make_pair(b, a);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    std::string id = "g" + std::to_string(net_.gates.size());
    net_.gates.push_back({id, a, b});
    cache_.emplace(key, id);
    return id;
  }
  std::string inv(const std::string& a) { return nand(a, a); }
  // NAND of any number of signals: NOT(AND(all)).
  std::string nand_all(const std::vector<std::string>& xs) {
    if (xs.size() == 1) return inv(xs[0]);
    std::string acc = xs[0];
    for (std::size_t i = 1; i + 1 < xs.size(); ++i) acc = inv(nand(acc, xs[i]));
    return nand(acc, xs.back());
  }

 private:
  NandNet& net_;
  std::map<std::pair<std::string, std::string>, std::string> cache_;
};

}  // namespace

NandNet compile_to_nand(const TruthTable& table) {
  if (table.inputs > 4) throw LimitError("NAND compilation is limited to 4 inputs");
  if (table.inputs < 1) throw PreconditionError("truth table needs at least one input");
  if (table.rows.size() != (std::size_t{1} << table.inputs)) throw PreconditionError("incomplete truth table");
  NandNet net;
  for (int i = 0; i < table.inputs; ++i) net.inputs.push_back(std::string(1, static_cast<char>('a' + i)));
  Builder b(net);
  const std::string& x = net.inputs[0];
  std::vector<std::string> terms;
  bool all = true;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    if (!table.rows[r]) {
      all = false;
      continue;
    }
    std::vector<std::string> lits;
    for (int i = 0; i < table.inputs; ++i) lits.push_back((r >> i) & 1 ? net.inputs[i] : b.inv(net.inputs[i]));
    terms.push_back(b.nand_all(lits));
  }
  std::string out;
  if (all) {
    out = b.nand(x, b.inv(x));  // constant 1
  } else if (terms.empty()) {
    out = b.inv(b.nand(x, b.inv(x)));  // constant 0
  } else {
    // OR of minterms = NAND of the minterm NANDs.
    out = b.nand_all(terms);
  }
  net.outputs.push_back({"f", out});
  return net;
}

std::vector<bool> evaluate(const NandNet& net, const std::vector<bool>& inputs) {
  if (inputs.size() != net.inputs.size()) throw PreconditionError("wrong number of inputs");
  std::map<std::string, bool> v;
  for (std::size_t i = 0; i < inputs.size(); ++i) v[net.inputs[i]] = inputs[i];
  auto get = [&](const std::string& n) {
    auto it = v.find(n);
    if (it == v.end()) throw ValidationError("undefined signal '" + n + "'");
    return it->second;
  };
  for (const auto& g : net.gates) v[g.id] = !(get(g.a) && get(g.b));
  std::vector<bool> out;
  for (const auto& o : net.outputs) out.push_back(get(o.source));
  return out;
}

void validate_net(const NandNet& net) {
  std::set<std::string> defined;
  std::map<std::string, bool> from_input;
  for (const auto& i : net.inputs) {
    if (!defined.insert(i).second) throw ValidationError("duplicate signal '" + i + "'");
    from_input[i] = true;
  }
  for (const auto& g : net.gates) {
    for (const auto* src : {&g.a, &g.b}) {
      if (!defined.count(*src)) throw ValidationError("gate '" + g.id + "' reads undefined or later signal '" + *src + "'");
    }
    if (!defined.insert(g.id).second) throw ValidationError("duplicate signal '" + g.id + "'");
    from_input[g.id] = from_input[g.a] || from_input[g.b];
  }
  if (net.outputs.empty()) throw ValidationError("net has no outputs");
  for (const auto& o : net.outputs) {
    if (!defined.count(o.source)) throw ValidationError("output '" + o.name + "' reads undefined signal");
    if (!from_input[o.source]) throw ValidationError("output '" + o.name + "' is not reachable from any input");
  }
}

std::string serialize_net(const NandNet& net) {
  std::string out = "input";
  for (const auto& i : net.inputs) out += " " + i;
  out += "\n";
  for (const auto& g : net.gates) out += "gate " + g.id + " = NAND(" + g.a + "," + g.b + ")\n";
  for (const auto& o : net.outputs) out += "output " + o.name + " = " + o.source + "\n";
  return out;
}

NandNet parse_net(std::string_view text) {
  static const std::regex gate_re(R"(^\s*gate\s+(\S+)\s*=\s*NAND\(\s*([^,\s]+)\s*,\s*([^)\s]+)\s*\)\s*$)");
  static const std::regex out_re(R"(^\s*output\s+(\S+)\s*=\s*(\S+)\s*$)");
  NandNet net;
  int lineno = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string line(text.substr(start, end - start));
    start = end + 1;
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    auto toks = split_ws(line);
    if (toks.empty()) continue;
    std::smatch m;
    if (toks[0] == "input") {
      net.inputs.insert(net.inputs.end(), toks.begin() + 1, toks.end());
    } else if (std::regex_match(line, m, gate_re)) {
      net.gates.push_back({m[1], m[2], m[3]});
    } else if (std::regex_match(line, m, out_re)) {
      net.outputs.push_back({m[1], m[2]});
    } else {
      throw ParseError(lineno, "expected 'input', 'gate <id> = NAND(a,b)' or 'output <name> = <signal>'");
    }
  }
  try {
    validate_net(net);
  } catch (const ValidationError& e) {
    throw ParseError(lineno, e.what());
  }
  return net;
}

}  // namespace sc

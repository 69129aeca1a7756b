#include "sc/schema.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "sc/canonical.hpp"
#include "sc/error.hpp"
#include "sc/struct_io.hpp"

namespace sc {

const char* to_string(Op op) {
  switch (op) {
    case Op::MemStore: return "MEM_STORE";
    case Op::MemLoad: return "MEM_LOAD";
    case Op::Compare: return "COMPARE";
    case Op::Move: return "MOVE";
    case Op::Copy: return "COPY";
    case Op::Bind: return "BIND";
    case Op::Call: return "CALL";
  }
  return "?";
}

std::optional<Op> parse_op(std::string_view name) {
  for (Op op : {Op::MemStore, Op::MemLoad, Op::Compare, Op::Move, Op::Copy, Op::Bind, Op::Call}) {
    if (name == to_string(op)) return op;
  }
  return std::nullopt;
}

bool Schema::is_base() const {
  return std::none_of(bindings.begin(), bindings.end(), [](const auto& b) { return b.second.op == Op::Call; });
}

namespace {

bool is_register(const std::string& s) { return s.size() > 1 && s[0] == '$'; }
bool is_literal(const std::string& s) { return s.size() > 1 && s[0] == '#'; }

bool valid_move(const std::string& s) {
  return s == "first" || s == "last" || s == "next" || s == "prev" ||
         (s.rfind("along:", 0) == 0 && s.size() > 6);
}

struct Control {
  std::optional<std::size_t> next, if1, if0;
};

std::vector<Control> control_of(const Structure& body) {
  std::vector<Control> c(body.size());
  for (const auto& r : body.relations()) {
    auto& slot = r.label == "next" ? c[r.from].next : r.label == "if1" ? c[r.from].if1 : c[r.from].if0;
    slot = r.to;
  }
  return c;
}

}  // namespace

void validate_schema(const Schema& s) {
  const std::string where = "schema '" + s.name + "': ";
  if (!s.body.oriented()) throw ValidationError(where + "body must be oriented");
  auto report = validate(s.body);
  if (!report.ok()) throw ValidationError(where + report.summary());
  std::set<std::pair<std::size_t, std::string>> out_edges;
  for (const auto& r : s.body.relations()) {
    if (r.label != "next" && r.label != "if1" && r.label != "if0") {
      throw ValidationError(where + "unknown control label '" + r.label + "'");
    }
    if (!out_edges.insert({r.from, r.label}).second) {
      throw ValidationError(where + "part '" + s.body.part(r.from).id + "' has two '" + r.label + "' edges");
    }
  }
  for (const auto& p : s.body.parts()) {
    if (!s.bindings.count(p.id)) throw ValidationError(where + "unbound symbol '" + p.id + "'");
  }
  for (const auto& [id, b] : s.bindings) {
    if (!s.body.index_of(id)) throw ValidationError(where + "binding for unknown part '" + id + "'");
    const auto& o = b.operand;
    bool ok = true;
    switch (b.op) {
      case Op::MemStore:
      case Op::Bind: ok = is_register(o); break;
      case Op::MemLoad:
      case Op::Compare:
      case Op::Copy: ok = is_register(o) || is_literal(o); break;
      case Op::Move: ok = valid_move(o); break;
      case Op::Call: ok = !o.empty(); break;
    }
    if (!ok) throw ValidationError(where + "bad operand '" + o + "' for " + to_string(b.op) + " at '" + id + "'");
  }
  if (!s.output.empty() && !is_register(s.output)) throw ValidationError(where + "output must be a register");
}

SchemaLibrary parse_schemas(std::string_view text, std::string* entry) {
  // Split into sections while keeping line numbers: every section sees the
  // whole text with foreign lines blanked.
  std::vector<std::string> lines;
  {
    std::size_t start = 0;
    while (start <= text.size()) {
      auto end = text.find('\n', start);
      if (end == std::string_view::npos) end = text.size();
      lines.emplace_back(text.substr(start, end - start));
      start = end + 1;
    }
  }
  std::vector<std::pair<std::string, std::size_t>> heads;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    auto toks = split_ws(strip_comment(lines[i]));
    if (!toks.empty() && toks[0] == "schema") {
      if (toks.size() != 2) throw ParseError(static_cast<int>(i) + 1, "expected: schema <name>");
      heads.push_back({toks[1], i});
    } else if (heads.empty() && !toks.empty()) {
      throw ParseError(static_cast<int>(i) + 1, "content before the first 'schema' line");
    }
  }
  if (heads.empty()) throw ParseError(1, "no schema section");
  SchemaLibrary lib;
  for (std::size_t h = 0; h < heads.size(); ++h) {
    const std::size_t from = heads[h].second + 1;
    const std::size_t to = h + 1 < heads.size() ? heads[h + 1].second : lines.size();
    std::string section;
    for (std::size_t i = 0; i < lines.size(); ++i) {
      if (i >= from && i < to) section += lines[i];
      section += '\n';
    }
    Schema s;
    s.name = heads[h].first;
    std::vector<std::pair<int, std::vector<std::string>>> binds;
    s.body = parse_struct_lines(section, [&](const std::vector<std::string>& toks, int line) {
      if (toks[0] == "bind") {
        binds.push_back({line, toks});
        return true;
      }
      if (toks[0] == "output") {
        if (toks.size() != 2 || !is_register(toks[1])) throw ParseError(line, "expected: output $reg");
        s.output = toks[1];
        return true;
      }
      return false;
    });
    s.body.set_oriented(true);
    for (const auto& [line, toks] : binds) {
      if (toks.size() < 3 || toks.size() > 4) throw ParseError(line, "expected: bind <part> <OP> [operand]");
      auto op = parse_op(toks[2]);
      if (!op) throw ParseError(line, "unknown operation '" + toks[2] + "'");
      if (!s.body.index_of(toks[1])) throw ParseError(line, "bind names unknown part '" + toks[1] + "'");
      if (!s.bindings.emplace(toks[1], Binding{*op, toks.size() == 4 ? toks[3] : ""}).second) {
        throw ParseError(line, "part '" + toks[1] + "' bound twice");
      }
    }
    validate_schema(s);
    if (!lib.emplace(s.name, std::move(s)).second) {
      throw ParseError(static_cast<int>(heads[h].second) + 1, "duplicate schema '" + heads[h].first + "'");
    }
  }
  if (entry) *entry = heads.front().first;
  return lib;
}

std::string serialize_schemas(const SchemaLibrary& lib, const std::string& entry) {
  std::vector<std::string> order{entry};
  for (const auto& [name, s] : lib)
    if (name != entry) order.push_back(name);
  std::string out;
  for (const auto& name : order) {
    const Schema& s = lib.at(name);
    out += "schema " + name + "\n";
    std::string body = serialize_struct(s.body);
    if (body.rfind("oriented\n", 0) == 0) body.erase(0, 9);
    out += body;
    for (const auto& p : s.body.parts()) {
      const auto& b = s.bindings.at(p.id);
      out += "bind " + p.id + " " + to_string(b.op);
      if (!b.operand.empty()) out += " " + b.operand;
      out += "\n";
    }
    if (!s.output.empty()) out += "output " + s.output + "\n";
  }
  return out;
}

namespace {

struct Content {
  std::string type;
  AttrMap attrs;
  bool operator==(const Content&) const = default;
};

struct Machine {
  Structure w;
  std::size_t cursor = 0;
  bool flag = false;
  std::map<std::string, Content> regs;
  std::uint64_t steps = 0;
  std::uint64_t fuel = 0;
};

Content resolve(const Machine& m, const std::string& src) {
  if (is_literal(src)) return {src.substr(1), {}};
  auto it = m.regs.find(src);
  if (it == m.regs.end()) throw ValidationError("unbound symbol '" + src + "'");
  return it->second;
}

void step(Machine& m, const Binding& b) {
  const auto& part = m.w.part(m.cursor);
  switch (b.op) {
    case Op::MemStore: m.regs[b.operand] = {part.type, part.attrs}; break;
    case Op::MemLoad: {
      auto c = resolve(m, b.operand);
      m.w.set_content(m.cursor, c.type, c.attrs);
      break;
    }
    case Op::Compare: m.flag = resolve(m, b.operand) == Content{part.type, part.attrs}; break;
    case Op::Bind: m.regs[b.operand] = {m.flag ? "1" : "0", {}}; break;
    case Op::Copy: {
      auto c = resolve(m, b.operand);
      const std::size_t fresh = m.w.add_part("n" + std::to_string(m.w.size()), c.type, c.attrs);
      m.w.add_relation(m.cursor, fresh, "adj");
      break;
    }
    case Op::Move: {
      const std::size_t n = m.w.size();
      const auto& o = b.operand;
      m.flag = true;
      if (o == "first") {
        m.cursor = 0;
      } else if (o == "last") {
        m.cursor = n - 1;
      } else if (o == "next") {
        m.flag = m.cursor + 1 < n;
        if (m.flag) ++m.cursor;
      } else if (o == "prev") {
        m.flag = m.cursor > 0;
        if (m.flag) --m.cursor;
      } else {
        const std::string label = o.substr(6);
        std::optional<std::size_t> best;
        for (const auto& r : m.w.relations()) {
          if (r.label != label) continue;
          std::optional<std::size_t> target;
          if (r.from == m.cursor) target = r.to;
          else if (!m.w.oriented() && r.to == m.cursor) target = r.from;
          if (target && (!best || *target < *best)) best = target;
        }
        m.flag = best.has_value();
        if (best) m.cursor = *best;
      }
      break;
    }
    case Op::Call: break;
  }
}

// Returns false when fuel ran out.
bool run(const SchemaLibrary& lib, const Schema& s, Machine& m, std::vector<std::string>& stack) {
  if (std::find(stack.begin(), stack.end(), s.name) != stack.end()) {
    throw ValidationError("cyclic schema nesting through '" + s.name + "'");
  }
  stack.push_back(s.name);
  const auto control = control_of(s.body);
  std::optional<std::size_t> pc = 0;
  while (pc) {
    const auto& b = s.bindings.at(s.body.part(*pc).id);
    if (b.op == Op::Call) {
      auto it = lib.find(b.operand);
      if (it == lib.end()) throw ValidationError("unbound symbol: no schema '" + b.operand + "'");
      if (!run(lib, it->second, m, stack)) return false;
    } else {
      if (m.steps >= m.fuel) return false;
      ++m.steps;
      step(m, b);
    }
    const auto& c = control[*pc];
    pc = m.flag ? (c.if1 ? c.if1 : c.next) : (c.if0 ? c.if0 : c.next);
  }
  stack.pop_back();
  return true;
}

Structure canonical_relabel(const Structure& s) {
  const auto canon = canonical_form(s);
  const Structure ordered = s.induced(canon.order);
  Structure out(s.oriented());
  for (std::size_t i = 0; i < ordered.size(); ++i) {
    const auto& p = ordered.part(i);
    out.add_part("n" + std::to_string(i), p.type, p.attrs, p.payload);
  }
  for (const auto& r : ordered.relations()) out.add_relation(r.from, r.to, r.label, r.attrs);
  return out;
}

}  // namespace

ExecResult execute(const SchemaLibrary& lib, const std::string& name, const Structure& input, std::uint64_t fuel) {
  auto it = lib.find(name);
  if (it == lib.end()) throw ValidationError("no schema '" + name + "'");
  validate_schema(it->second);
  require_valid(input);
  Machine m;
  m.w = canonical_relabel(input);
  m.fuel = fuel;
  std::vector<std::string> stack;
  ExecResult r;
  const bool finished = run(lib, it->second, m, stack);
  r.steps = m.steps;
  if (!finished) {
    r.status = ExecStatus::OutOfFuel;
    return r;
  }
  if (it->second.output.empty()) {
    r.output = std::move(m.w);
  } else {
    auto c = resolve(m, it->second.output);
    r.output.add_part("o", c.type, c.attrs);
  }
  return r;
}

namespace {

Schema flatten_rec(const SchemaLibrary& lib, const std::string& name, std::vector<std::string>& stack) {
  if (std::find(stack.begin(), stack.end(), name) != stack.end()) {
    throw ValidationError("cyclic schema nesting through '" + name + "'");
  }
  auto it = lib.find(name);
  if (it == lib.end()) throw ValidationError("unbound symbol: no schema '" + name + "'");
  const Schema& s = it->second;
  validate_schema(s);
  if (s.is_base()) return s;
  stack.push_back(name);

  Schema out;
  out.name = s.name;
  out.output = s.output;
  const auto control = control_of(s.body);
  std::map<std::size_t, Schema> inlined;
  std::vector<std::string> entry(s.body.size());
  for (std::size_t i = 0; i < s.body.size(); ++i) {
    const auto& p = s.body.part(i);
    const auto& b = s.bindings.at(p.id);
    if (b.op != Op::Call) {
      out.body.add_part(p.id, p.type, p.attrs);
      out.bindings[p.id] = b;
      entry[i] = p.id;
      continue;
    }
    Schema callee = flatten_rec(lib, b.operand, stack);
    for (const auto& q : callee.body.parts()) {
      const std::string id = p.id + "/" + q.id;
      out.body.add_part(id, q.type, q.attrs);
      out.bindings[id] = callee.bindings.at(q.id);
    }
    entry[i] = p.id + "/" + callee.body.part(0).id;
    inlined.emplace(i, std::move(callee));
  }
  for (const auto& r : s.body.relations()) {
    if (inlined.count(r.from)) continue;
    out.body.add_relation(entry[r.from], entry[r.to], r.label);
  }
  for (const auto& [i, callee] : inlined) {
    const std::string& prefix = s.body.part(i).id;
    for (const auto& r : callee.body.relations()) {
      out.body.add_relation(prefix + "/" + callee.body.part(r.from).id, prefix + "/" + callee.body.part(r.to).id,
                            r.label);
    }
    // Where the callee halts, the caller continues from the call site.
    const auto& c = control[i];
    std::optional<std::string> t1, t0;
    if (auto t = c.if1 ? c.if1 : c.next) t1 = entry[*t];
    if (auto t = c.if0 ? c.if0 : c.next) t0 = entry[*t];
    const auto inner = control_of(callee.body);
    for (std::size_t q = 0; q < callee.body.size(); ++q) {
      const bool halt1 = !inner[q].if1 && !inner[q].next;
      const bool halt0 = !inner[q].if0 && !inner[q].next;
      const std::string from = prefix + "/" + callee.body.part(q).id;
      if (halt1 && halt0 && t1 && t0 && *t1 == *t0) {
        out.body.add_relation(from, *t1, "next");
        continue;
      }
      if (halt1 && t1) out.body.add_relation(from, *t1, "if1");
      if (halt0 && t0) out.body.add_relation(from, *t0, "if0");
    }
  }
  stack.pop_back();
  validate_schema(out);
  return out;
}

Structure annotated(const Schema& s) {
  Structure a(true);
  for (std::size_t i = 0; i < s.body.size(); ++i) {
    const auto& b = s.bindings.at(s.body.part(i).id);
    AttrMap attrs;
    if (i == 0) attrs["entry"] = 1;
    a.add_part(s.body.part(i).id, std::string(to_string(b.op)) + ":" + b.operand, attrs);
  }
  for (const auto& r : s.body.relations()) a.add_relation(r.from, r.to, r.label);
  return a;
}

}  // namespace

Schema flatten(const SchemaLibrary& lib, const std::string& name) {
  std::vector<std::string> stack;
  return flatten_rec(lib, name, stack);
}

bool schemas_coincide(const SchemaLibrary& la, const std::string& a, const SchemaLibrary& lb, const std::string& b) {
  const Schema fa = flatten(la, a);
  const Schema fb = flatten(lb, b);
  if (!isomorphic_unchecked(annotated(fa), annotated(fb))) return false;
  SchemaLibrary only_a{{fa.name, fa}}, only_b{{fb.name, fb}};
  return operations_coincide(only_a, fa.name, only_b, fb.name, pinned_battery());
}

bool operations_coincide(const SchemaLibrary& la, const std::string& a, const SchemaLibrary& lb, const std::string& b,
                         const std::vector<Structure>& battery, std::uint64_t fuel) {
  if (battery.empty()) throw PreconditionError("operation coincidence needs a non-empty battery");
  for (std::size_t i = 0; i < battery.size(); ++i) {
    std::vector<ExecResult> results;
    for (std::uint64_t v = 0; v < 3; ++v) {
      const Structure input = v == 0 ? battery[i] : shuffled_copy(battery[i], 1000 * i + v);
      results.push_back(execute(la, a, input, fuel));
      results.push_back(execute(lb, b, input, fuel));
    }
    for (const auto& r : results) {
      if (r.status != results.front().status) return false;
      if (r.status == ExecStatus::Ok && !isomorphic_unchecked(r.output, results.front().output)) return false;
    }
  }
  return true;
}

std::vector<Structure> pinned_battery() {
  std::vector<Structure> out;
  auto path = [](const std::vector<std::string>& types, bool oriented = false) {
    Structure s(oriented);
    for (std::size_t i = 0; i < types.size(); ++i) s.add_part("x" + std::to_string(i), types[i]);
    for (std::size_t i = 0; i + 1 < types.size(); ++i) s.add_relation(i, i + 1, "e");
    return s;
  };
  out.push_back(path({"a"}));
  out.push_back(path({"a", "a"}));
  out.push_back(path({"a", "b"}));
  out.push_back(path({"c", "c", "c", "c", "c"}));
  out.push_back(path({"a", "b", "a"}, true));
  Structure cycle = path({"a", "a", "b"});
  cycle.add_relation(2, 0, "f");
  out.push_back(cycle);
  Structure star;
  star.add_part("h", "b");
  for (int i = 0; i < 3; ++i) {
    star.add_part("l" + std::to_string(i), i == 0 ? "a" : "c", {{"w", i}});
    star.add_relation(0, static_cast<std::size_t>(i + 1), "e");
  }
  out.push_back(star);
  return out;
}

Structure shuffled_copy(const Structure& s, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> perm(s.size());
  std::iota(perm.begin(), perm.end(), 0);
  for (std::size_t i = perm.size(); i > 1; --i) std::swap(perm[i - 1], perm[rng() % i]);
  std::vector<std::size_t> where(s.size());
  Structure out(s.oriented());
  for (std::size_t k = 0; k < perm.size(); ++k) {
    const auto& p = s.part(perm[k]);
    where[perm[k]] = k;
    out.add_part("r" + std::to_string(k), p.type, p.attrs, p.payload);
  }
  std::vector<std::size_t> rel(s.relations().size());
  std::iota(rel.begin(), rel.end(), 0);
  for (std::size_t i = rel.size(); i > 1; --i) std::swap(rel[i - 1], rel[rng() % i]);
  for (auto ri : rel) {
    const auto& r = s.relations()[ri];
    if (!s.oriented() && (rng() & 1)) out.add_relation(where[r.to], where[r.from], r.label, r.attrs);
    else out.add_relation(where[r.from], where[r.to], r.label, r.attrs);
  }
  return out;
}

}  // namespace sc

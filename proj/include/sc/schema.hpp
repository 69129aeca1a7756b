#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sc/structure.hpp"

namespace sc {

enum class Op { MemStore, MemLoad, Compare, Move, Copy, Bind, Call };

const char* to_string(Op op);
std::optional<Op> parse_op(std::string_view name);

struct Binding {
  Op op = Op::Compare;
  // "$reg", "#Type", a MOVE target (first|last|next|prev|along:<label>) or,
  // for CALL, the callee schema name.
  std::string operand;
  bool operator==(const Binding&) const = default;
};

// A second-kind structure. The body is an oriented structure whose parts
// are op symbols; control flows along "next", "if1" and "if0" relations
// starting at the first part and halts where no edge applies.
struct Schema {
  std::string name;
  Structure body{true};
  std::map<std::string, Binding> bindings;  // by body part id
  std::string output;                       // register name, or empty for the working structure

  bool is_base() const;
};

// Named schemas; CALL operands resolve here.
using SchemaLibrary = std::map<std::string, Schema>;

// Throws ValidationError on unbound parts, bad operands, unknown control
// labels or ambiguous control flow.
void validate_schema(const Schema& s);

// `.schema` text: "schema <name>" sections holding .struct lines plus
// "bind <part> <OP> [operand]" and "output $reg". The first section is the
// entry schema; its name is returned through `entry`.
SchemaLibrary parse_schemas(std::string_view text, std::string* entry = nullptr);
std::string serialize_schemas(const SchemaLibrary& lib, const std::string& entry);

enum class ExecStatus { Ok, OutOfFuel };

struct ExecResult {
  ExecStatus status = ExecStatus::Ok;
  Structure output;
  std::uint64_t steps = 0;
};

// Runs on a canonically relabelled copy of the input ("n0", "n1", ... in
// canonical order), so isomorphic inputs give identical outputs.
ExecResult execute(const SchemaLibrary& lib, const std::string& name, const Structure& input,
                   std::uint64_t fuel = 1000000);

// Inlines every CALL; the result binds only primitive operations.
Schema flatten(const SchemaLibrary& lib, const std::string& name);

// Flattened bodies isomorphic with matching bindings and entries, and the
// operations coincide on the pinned battery.
bool schemas_coincide(const SchemaLibrary& la, const std::string& a, const SchemaLibrary& lb,
                      const std::string& b);

// For every battery element and a few isomorphic variants of it, both
// schemas produce isomorphic outputs (or both run out of fuel).
bool operations_coincide(const SchemaLibrary& la, const std::string& a, const SchemaLibrary& lb,
                         const std::string& b, const std::vector<Structure>& battery,
                         std::uint64_t fuel = 1000000);

// Small fixed set of inputs used for extensional checks.
std::vector<Structure> pinned_battery();

// Uniformly relabelled copy (random part order and ids), same class.
Structure shuffled_copy(const Structure& s, std::uint64_t seed);

}  // namespace sc

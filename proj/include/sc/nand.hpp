#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace sc {

struct NandGate {
  std::string id;
  std::string a;
  std::string b;
};

struct NandOutput {
  std::string name;
  std::string source;  // a gate id or an input name
};

// 2-input NAND gates; a gate may only read inputs and earlier gates, so the
// net is acyclic by construction.
struct NandNet {
  std::vector<std::string> inputs;
  std::vector<NandGate> gates;
  std::vector<NandOutput> outputs;
};

// rows[r] is the value for the assignment where input i = (r >> i) & 1.
struct TruthTable {
  int inputs = 0;
  std::vector<bool> rows;
};

TruthTable truth_table(int inputs, std::uint64_t bits);

// Sum of products rewritten with De Morgan into NANDs; inverters are shared.
// Rejects more than four inputs.
NandNet compile_to_nand(const TruthTable& table);

// Values of the outputs, in order, for one input assignment.
std::vector<bool> evaluate(const NandNet& net, const std::vector<bool>& inputs);

// Throws ValidationError on forward references, unknown names or outputs
// that no input reaches.
void validate_net(const NandNet& net);

//   input a b c
//   gate g0 = NAND(a,b)
//   output f = g0
std::string serialize_net(const NandNet& net);
NandNet parse_net(std::string_view text);

}  // namespace sc

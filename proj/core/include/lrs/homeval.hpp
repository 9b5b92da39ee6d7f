#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "lrs/zq.hpp"

namespace lrs {

// Wires 0..inputs-1 are inputs; gate g defines wire inputs + g as
// NAND(left, right). Both operands must be strictly smaller wires.
class NandCircuit {
 public:
  using Gate = std::pair<std::uint32_t, std::uint32_t>;

  NandCircuit() = default;
  explicit NandCircuit(std::size_t inputs, std::vector<Gate> gates = {});

  // Appends a gate and returns its wire index.
  std::uint32_t add_gate(std::uint32_t left, std::uint32_t right);

  std::size_t inputs() const { return inputs_; }
  const std::vector<Gate>& gates() const { return gates_; }
  std::size_t wire_count() const { return inputs_ + gates_.size(); }
  // Last gate, or the last input when there are no gates.
  std::size_t output_wire() const;
  std::size_t depth() const;

  bool operator==(const NandCircuit& o) const { return inputs_ == o.inputs_ && gates_ == o.gates_; }

 private:
  std::size_t inputs_ = 0;
  std::vector<Gate> gates_;
  std::vector<std::size_t> depth_;  // per wire
};

std::uint8_t eval_bits(const NandCircuit& c, const std::vector<std::uint8_t>& bits);

// Gate rule A_w = G - A_u g_inverse(A_v) (mod q), with the padded gadget G of
// the wires' shape.
ZqMatrix eval_public(const NandCircuit& c, const std::vector<ZqMatrix>& wires);

struct TrackResult {
  IntMatrix r;
  std::uint8_t b = 0;
};

// Wire i is A R_i + b_i G. Per gate R_w = -R_u g_inverse(A_v) - b_u R_v and
// b_w = 1 - b_u b_v, so eval_public(wires) = A R_C + b_C G.
TrackResult eval_track(const NandCircuit& c, const ZqMatrix& a, const std::vector<IntMatrix>& rs,
                       const std::vector<std::uint8_t>& bits);

// Fold of N_w = m N_u + N_v with N_input = input_norm.
long double eval_norm_bound(const NandCircuit& c, long double input_norm, std::size_t m);

// A_u * g_inverse(A_v) (mod q) without materializing the bit matrix.
ZqMatrix mul_g_inverse(const ZqMatrix& left, const ZqMatrix& right);

}  // namespace lrs

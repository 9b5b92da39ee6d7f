#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "lrs/homeval.hpp"

namespace lrs {

// Key wires first, then message wires.
struct PrfSpec {
  std::size_t k = 0;
  std::size_t t = 0;
  NandCircuit circuit;
  std::string name;
};

std::uint8_t prf_eval(const PrfSpec& spec, const std::vector<std::uint8_t>& key, const std::vector<std::uint8_t>& msg);

// Fixed toy network over W = max(k, t) lanes (3 when that is 2):
//   lane i = key_i XOR msg_i (4 NANDs; a lone bit passes through, and the
//   extra third lane copies input 0),
//   `rounds` layers of lane i = NAND(lane i, lane (i + 1) mod W),
//   then a balanced XOR tree over the lanes.
PrfSpec toy_prf(std::size_t k, std::size_t t, std::size_t rounds);

// LRSCIR1: magic, u32 k, u32 t, u32 gate count, gates as u32 pairs.
std::vector<std::uint8_t> serialize_circuit(const PrfSpec& spec);
PrfSpec parse_circuit(const std::vector<std::uint8_t>& bytes);

}  // namespace lrs

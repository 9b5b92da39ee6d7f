#include "lrs/prf.hpp"

#include <algorithm>

#include "lrs/codec.hpp"

namespace lrs {

std::uint8_t prf_eval(const PrfSpec& spec, const std::vector<std::uint8_t>& key, const std::vector<std::uint8_t>& msg) {
  if (key.size() != spec.k) throw Error(Errc::length_mismatch, "key length " + std::to_string(key.size()));
  if (msg.size() != spec.t) throw Error(Errc::length_mismatch, "message length " + std::to_string(msg.size()));
  std::vector<std::uint8_t> bits(key);
  bits.insert(bits.end(), msg.begin(), msg.end());
  return eval_bits(spec.circuit, bits);
}

namespace {

std::uint32_t xor_gate(NandCircuit& c, std::uint32_t a, std::uint32_t b) {
  const std::uint32_t n = c.add_gate(a, b);
  return c.add_gate(c.add_gate(a, n), c.add_gate(b, n));
}

}  // namespace

PrfSpec toy_prf(std::size_t k, std::size_t t, std::size_t rounds) {
  if (k < 1 || t < 1) throw Error(Errc::invalid_argument, "k and t must be positive");
  if (rounds < 2) throw Error(Errc::invalid_argument, "rounds must be at least 2");
  NandCircuit c(k + t);
  // Two lanes collapse under rotation mixing, so they get a third lane.
  const std::size_t base = std::max(k, t);
  const std::size_t w = base == 2 ? 3 : base;
  std::vector<std::uint32_t> lane(w);
  for (std::size_t i = 0; i < w; ++i) {
    if (i < k && i < t) lane[i] = xor_gate(c, static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(k + i));
    else if (i < k) lane[i] = static_cast<std::uint32_t>(i);
    else if (i < t) lane[i] = static_cast<std::uint32_t>(k + i);
    else lane[i] = static_cast<std::uint32_t>((i - base) % (k + t));
  }
  for (std::size_t r = 0; r < rounds; ++r) {
    std::vector<std::uint32_t> next(w);
    for (std::size_t i = 0; i < w; ++i) next[i] = c.add_gate(lane[i], lane[(i + 1) % w]);
    lane = std::move(next);
  }
  while (lane.size() > 1) {
    std::vector<std::uint32_t> next;
    for (std::size_t i = 0; i + 1 < lane.size(); i += 2) next.push_back(xor_gate(c, lane[i], lane[i + 1]));
    if (lane.size() % 2) next.push_back(lane.back());
    lane = std::move(next);
  }
  if (c.gates().empty() || c.output_wire() != lane[0]) {
    // Single-lane networks end on a copy of the lane: NAND(NAND(x, x), NAND(x, x)) = x.
    const std::uint32_t n = c.add_gate(lane[0], lane[0]);
    c.add_gate(n, n);
  }
  PrfSpec spec;
  spec.k = k;
  spec.t = t;
  spec.circuit = std::move(c);
  spec.name = "toy-nand-k" + std::to_string(k) + "-t" + std::to_string(t) + "-r" + std::to_string(rounds);
  return spec;
}

std::vector<std::uint8_t> serialize_circuit(const PrfSpec& spec) {
  ByteWriter w;
  w.magic("LRSCIR1");
  w.u32(static_cast<std::uint32_t>(spec.k));
  w.u32(static_cast<std::uint32_t>(spec.t));
  w.u32(static_cast<std::uint32_t>(spec.circuit.gates().size()));
  for (const auto& g : spec.circuit.gates()) {
    w.u32(g.first);
    w.u32(g.second);
  }
  return w.bytes();
}

PrfSpec parse_circuit(const std::vector<std::uint8_t>& bytes) {
  ByteReader r(bytes);
  r.expect_magic("LRSCIR1");
  PrfSpec spec;
  spec.k = r.u32();
  spec.t = r.u32();
  const std::uint32_t gates = r.u32();
  if (gates > r.remaining() / 8) throw Error(Errc::bad_format, "gate count exceeds file size");
  if (spec.k + spec.t == 0) throw Error(Errc::bad_format, "circuit without inputs");
  NandCircuit c(spec.k + spec.t);
  for (std::uint32_t i = 0; i < gates; ++i) {
    const std::uint32_t a = r.u32();
    const std::uint32_t b = r.u32();
    try {
      c.add_gate(a, b);
    } catch (const Error& e) {
      throw Error(Errc::bad_format, e.what());
    }
  }
  r.expect_end();
  spec.circuit = std::move(c);
  spec.name = "file";
  return spec;
}

}  // namespace lrs

#include "lrs/homeval.hpp"

#include <algorithm>
#include <string>

#include "lrs/trapdoor.hpp"

namespace lrs {

NandCircuit::NandCircuit(std::size_t inputs, std::vector<Gate> gates) : inputs_(inputs) {
  depth_.assign(inputs, 0);
  for (const Gate& g : gates) add_gate(g.first, g.second);
}

std::uint32_t NandCircuit::add_gate(std::uint32_t left, std::uint32_t right) {
  const std::size_t w = wire_count();
  if (left >= w || right >= w) {
    throw Error(Errc::invalid_argument, "gate " + std::to_string(gates_.size()) + " references a later wire");
  }
  gates_.emplace_back(left, right);
  depth_.push_back(1 + std::max(depth_[left], depth_[right]));
  return static_cast<std::uint32_t>(w);
}

std::size_t NandCircuit::output_wire() const {
  if (wire_count() == 0) throw Error(Errc::invalid_argument, "empty circuit");
  return wire_count() - 1;
}

std::size_t NandCircuit::depth() const { return wire_count() == 0 ? 0 : depth_[output_wire()]; }

std::uint8_t eval_bits(const NandCircuit& c, const std::vector<std::uint8_t>& bits) {
  if (bits.size() != c.inputs()) throw Error(Errc::arity_mismatch, "circuit expects " + std::to_string(c.inputs()) + " bits");
  std::vector<std::uint8_t> w(bits);
  for (std::uint8_t& b : w) b = b ? 1 : 0;
  for (const auto& g : c.gates()) w.push_back(static_cast<std::uint8_t>(1 - (w[g.first] & w[g.second])));
  return w[c.output_wire()];
}

ZqMatrix mul_g_inverse(const ZqMatrix& left, const ZqMatrix& right) {
  const std::uint64_t q = left.modulus();
  const std::size_t n = right.rows();
  const std::size_t k = gadget_bits(q);
  if (left.cols() < n * k || left.rows() != n || right.modulus() != q) {
    throw Error(Errc::dimension_mismatch, "A_u g_inverse(A_v) shapes");
  }
  ZqMatrix out(left.rows(), right.cols(), q);
  std::vector<std::uint64_t> acc(left.rows());
  for (std::size_t c = 0; c < right.cols(); ++c) {
    std::fill(acc.begin(), acc.end(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      std::uint64_t v = right(i, c);
      for (std::size_t b = 0; v != 0; ++b, v >>= 1) {
        if (!(v & 1)) continue;
        const std::size_t col = i * k + b;
        for (std::size_t r = 0; r < left.rows(); ++r) acc[r] += left(r, col);
      }
    }
    for (std::size_t r = 0; r < left.rows(); ++r) out.set(r, c, acc[r] % q);
  }
  return out;
}

namespace {

void check_wires(const NandCircuit& c, const std::vector<ZqMatrix>& wires) {
  if (wires.size() != c.inputs()) throw Error(Errc::arity_mismatch, "wire count differs from circuit inputs");
  for (const ZqMatrix& w : wires) {
    if (w.rows() != wires[0].rows() || w.cols() != wires[0].cols() || w.modulus() != wires[0].modulus()) {
      throw Error(Errc::dimension_mismatch, "wire shapes differ");
    }
  }
}

std::vector<ZqMatrix> public_wires(const NandCircuit& c, std::vector<ZqMatrix> w) {
  const ZqMatrix g = gadget_matrix(w[0].rows(), w[0].modulus(), w[0].cols());
  w.reserve(c.wire_count());
  for (const auto& gate : c.gates()) w.push_back(sub_mod(g, mul_g_inverse(w[gate.first], w[gate.second])));
  return w;
}

}  // namespace

ZqMatrix eval_public(const NandCircuit& c, const std::vector<ZqMatrix>& wires) {
  check_wires(c, wires);
  if (wires.empty()) throw Error(Errc::arity_mismatch, "circuit has no inputs");
  return public_wires(c, wires)[c.output_wire()];
}

TrackResult eval_track(const NandCircuit& c, const ZqMatrix& a, const std::vector<IntMatrix>& rs,
                       const std::vector<std::uint8_t>& bits) {
  if (rs.size() != c.inputs() || bits.size() != c.inputs()) throw Error(Errc::arity_mismatch, "tracked input count");
  const std::size_t n = a.rows();
  const std::size_t m = a.cols();
  const std::uint64_t q = a.modulus();
  const std::size_t k = gadget_bits(q);
  const ZqMatrix g = gadget_matrix(n, q, m);
  std::vector<ZqMatrix> wires;
  std::vector<IntMatrix> r(rs);
  std::vector<std::uint8_t> b;
  for (std::size_t i = 0; i < rs.size(); ++i) {
    if (rs[i].rows() != m || rs[i].cols() != m) throw Error(Errc::dimension_mismatch, "R_i must be m x m");
    b.push_back(bits[i] ? 1 : 0);
    ZqMatrix w = mat_mul_mod(a, rs[i]);
    if (b.back()) w = add_mod(w, g);
    wires.push_back(std::move(w));
  }
  wires = public_wires(c, std::move(wires));
  for (const auto& gate : c.gates()) {
    const IntMatrix& ru = r[gate.first];
    const ZqMatrix& av = wires[gate.second];
    IntMatrix out(m, m);
    for (std::size_t col = 0; col < m; ++col) {
      for (std::size_t i = 0; i < n; ++i) {
        std::uint64_t v = av(i, col);
        for (std::size_t bit = 0; v != 0; ++bit, v >>= 1) {
          if (!(v & 1)) continue;
          const std::size_t src = i * k + bit;
          for (std::size_t row = 0; row < m; ++row) out(row, col) -= ru(row, src);
        }
      }
    }
    if (b[gate.first]) out = out - r[gate.second];
    r.push_back(std::move(out));
    b.push_back(static_cast<std::uint8_t>(1 - (b[gate.first] & b[gate.second])));
  }
  const std::size_t o = c.output_wire();
  return TrackResult{std::move(r[o]), b[o]};
}

long double eval_norm_bound(const NandCircuit& c, long double input_norm, std::size_t m) {
  std::vector<long double> nrm(c.inputs(), input_norm);
  const long double ml = static_cast<long double>(m);
  for (const auto& gate : c.gates()) nrm.push_back(ml * nrm[gate.first] + nrm[gate.second]);
  return nrm[c.output_wire()];
}

}  // namespace lrs

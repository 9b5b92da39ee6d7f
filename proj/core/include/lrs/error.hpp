#pragma once

#include <stdexcept>
#include <string>

namespace lrs {

enum class Errc {
  dimension_mismatch,
  rank_deficient,
  linearly_dependent,
  invalid_modulus,
  out_of_support,
  bad_trapdoor,
  sigma_too_small,
  not_in_coset,
  tail_exceeded,
  dimension_too_small,
  rank_failure,
  block_not_spanning,
  independence_timeout,
  arity_mismatch,
  length_mismatch,
  unsatisfiable_params,
  signer_not_in_ring,
  prf_bit_mismatch,
  tape_exhausted,
  bad_format,
  invalid_argument,
  overflow,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace lrs

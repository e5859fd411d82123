#pragma once

#include <stdexcept>
#include <string>

namespace coarselab {

/// Error categories surfaced by the library. The CLI maps these onto its
/// exit-code contract (usage/IO problems vs. failed certificates).
enum class errc {
  size,                 // point cap exceeded
  connectivity,         // graph has no finite path metric
  validation,           // space invariant violated (symmetry, triangle, ...)
  domain,               // mismatched spaces or out-of-range point ids
  injectivity,          // map required to be injective has a collision
  group_axiom,          // permutation set is not a group
  frame,                // supplied frame not orthonormal / wrong span
  malformed_embedding,  // embedding table violates *-homomorphism invariants
  decomposition,        // no valid companion point; boundary contamination
  invariant_violation,  // internal bound exceeded (signals a bug)
  numeric,              // iterative solver did not converge
  io,                   // file or JSON parse problem
};

const char* errc_name(errc code) noexcept;

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) {
  throw error(code, what);
}

}  // namespace coarselab

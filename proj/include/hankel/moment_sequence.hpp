#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hankel {

class Measure;

/// Known asymptotic behaviour of q_n, attached by named-family constructors.
enum class DecayClass {
  tends_to_zero,         // q_n -> 0 but not O(1/n)
  inverse_n,             // O(1/n), not o(1/n)
  little_o_inverse_n,    // o(1/n)
  geometric,             // O(a^n) with rate a
  little_o_geometric,    // o(a^n) with rate a
  bounded_not_decaying,  // bounded, q_n does not tend to 0
  unknown,
};

struct DecayDescriptor {
  DecayClass kind = DecayClass::unknown;
  double rate = 0.0;  // only meaningful for the geometric classes

  friend bool operator==(const DecayDescriptor&, const DecayDescriptor&) = default;
};

/// Wire symbols: "tends_to_zero", "O(1/n)", "o(1/n)", "O(a^n)", "o(a^n)",
/// "bounded_not_decaying", "unknown".
std::string_view decay_symbol(DecayClass kind);
/// Throws SchemaError on an unrecognized symbol.
DecayClass parse_decay_symbol(std::string_view symbol);

/// Finite prefix (q_0, ..., q_{N-1}) of a real moment sequence.
struct MomentSequence {
  std::vector<double> values;
  std::optional<DecayDescriptor> decay;
  std::shared_ptr<const Measure> origin;

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t n) const { return values[n]; }
};

/// Checks finiteness of the values and the decay/origin consistency rule
/// (tends_to_zero requires support in [-1, 1] without atoms at +-1).
/// Throws ArgumentError.
void validate(const MomentSequence& q);

/// Exact moment sequences of the named families, with decay descriptors.
namespace families {
MomentSequence all_ones(std::size_t count);        // atom at 1
MomentSequence hilbert(std::size_t count);         // 1/(n+1), Lebesgue on [0,1]
MomentSequence compact(std::size_t count);         // 1/((n+1)(n+2)), density 1-x on [0,1]
MomentSequence slow(std::size_t count);            // (n+1)^{-1/2}
MomentSequence inverse_square(std::size_t count);  // (n+1)^{-2}, density -log x on [0,1]
MomentSequence geometric(std::size_t count, double rate);  // rate^n, atom at rate
}  // namespace families

}  // namespace hankel

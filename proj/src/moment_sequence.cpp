#include "hankel/moment_sequence.hpp"

#include <cmath>
#include <string>

#include "hankel/errors.hpp"
#include "hankel/measure.hpp"

namespace hankel {

std::string_view decay_symbol(DecayClass kind) {
  switch (kind) {
    case DecayClass::tends_to_zero: return "tends_to_zero";
    case DecayClass::inverse_n: return "O(1/n)";
    case DecayClass::little_o_inverse_n: return "o(1/n)";
    case DecayClass::geometric: return "O(a^n)";
    case DecayClass::little_o_geometric: return "o(a^n)";
    case DecayClass::bounded_not_decaying: return "bounded_not_decaying";
    case DecayClass::unknown: return "unknown";
  }
  return "unknown";
}

DecayClass parse_decay_symbol(std::string_view symbol) {
  for (DecayClass k : {DecayClass::tends_to_zero, DecayClass::inverse_n,
                       DecayClass::little_o_inverse_n, DecayClass::geometric,
                       DecayClass::little_o_geometric, DecayClass::bounded_not_decaying,
                       DecayClass::unknown}) {
    if (decay_symbol(k) == symbol) return k;
  }
  throw SchemaError("unknown decay symbol '" + std::string(symbol) + "'");
}

void validate(const MomentSequence& q) {
  for (std::size_t n = 0; n < q.values.size(); ++n) {
    if (!std::isfinite(q.values[n])) {
      throw ArgumentError("moment sequence: q_" + std::to_string(n) + " is not finite");
    }
  }
  if (q.decay && (q.decay->kind == DecayClass::geometric ||
                  q.decay->kind == DecayClass::little_o_geometric)) {
    if (!(q.decay->rate >= 0.0)) throw ArgumentError("moment sequence: geometric rate must be >= 0");
  }
  if (q.decay && q.decay->kind == DecayClass::tends_to_zero && q.origin) {
    const Interval& s = q.origin->support();
    if (s.lo < -1.0 || s.hi > 1.0) {
      throw ArgumentError("moment sequence: q_n -> 0 requires support within [-1, 1]");
    }
    for (const Atom& a : q.origin->atoms()) {
      if (std::abs(a.x) == 1.0 && a.w > 0.0) {
        throw ArgumentError("moment sequence: q_n -> 0 excludes atoms at +-1");
      }
    }
  }
}

namespace families {
namespace {

template <class F>
MomentSequence generate(std::size_t count, DecayDescriptor decay, F f) {
  MomentSequence q;
  q.values.resize(count);
  for (std::size_t n = 0; n < count; ++n) q.values[n] = f(static_cast<double>(n));
  q.decay = decay;
  return q;
}

}  // namespace

MomentSequence all_ones(std::size_t count) {
  return generate(count, {DecayClass::bounded_not_decaying}, [](double) { return 1.0; });
}

MomentSequence hilbert(std::size_t count) {
  return generate(count, {DecayClass::inverse_n}, [](double n) { return 1.0 / (n + 1.0); });
}

MomentSequence compact(std::size_t count) {
  return generate(count, {DecayClass::little_o_inverse_n},
                  [](double n) { return 1.0 / ((n + 1.0) * (n + 2.0)); });
}

MomentSequence slow(std::size_t count) {
  return generate(count, {DecayClass::tends_to_zero},
                  [](double n) { return 1.0 / std::sqrt(n + 1.0); });
}

MomentSequence inverse_square(std::size_t count) {
  return generate(count, {DecayClass::little_o_inverse_n},
                  [](double n) { return 1.0 / ((n + 1.0) * (n + 1.0)); });
}

MomentSequence geometric(std::size_t count, double rate) {
  if (!(rate >= 0.0)) throw ArgumentError("geometric family: rate must be >= 0");
  DecayDescriptor d{DecayClass::geometric, rate};
  if (rate == 1.0) d = {DecayClass::bounded_not_decaying};
  if (rate > 1.0) d = {DecayClass::unknown};
  return generate(count, d, [rate](double n) { return std::pow(rate, n); });
}

}  // namespace families
}  // namespace hankel

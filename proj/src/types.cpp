#include "iva/types.hpp"

#include <cmath>
#include <sstream>

namespace iva {

SignalProfile::SignalProfile(std::vector<double> signals) : signals_(std::move(signals)) {
  for (std::size_t i = 0; i < signals_.size(); ++i) {
    if (!std::isfinite(signals_[i]) || signals_[i] < 0) {
      std::ostringstream msg;
      msg << "signal " << i << " must be a finite non-negative real, got " << signals_[i];
      throw std::invalid_argument(msg.str());
    }
  }
}

SignalProfile SignalProfile::with(int i, double value) const {
  if (i < 0 || i >= size()) throw std::out_of_range("signal index out of range");
  if (!std::isfinite(value) || value < 0) {
    throw std::invalid_argument("replacement signal must be a finite non-negative real");
  }
  std::vector<double> copy = signals_;
  copy[static_cast<std::size_t>(i)] = value;
  SignalProfile result;
  result.signals_ = std::move(copy);
  return result;
}

namespace {
std::string subset_message(const std::vector<int>& subset, int t) {
  std::ostringstream msg;
  msg << "no partition into " << t << " independent sets; violating subset {";
  for (std::size_t i = 0; i < subset.size(); ++i) {
    if (i > 0) msg << ",";
    msg << subset[i];
  }
  msg << "} has size " << subset.size();
  return msg.str();
}
}  // namespace

PartitionInfeasible::PartitionInfeasible(std::vector<int> violating_subset, int t)
    : std::runtime_error(subset_message(violating_subset, t)),
      violating_subset_(std::move(violating_subset)),
      t_(t) {}

void require(bool condition, const std::string& message) {
  if (!condition) throw std::invalid_argument(message);
}

}  // namespace iva

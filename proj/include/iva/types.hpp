#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace iva {

/// Per-bidder non-negative weights fed to eat() and greedy(). Entry j is
/// bidder j's weight; zero entries are legal (a zero-weight bidder never
/// starts eating, but is still scanned by greedy).
using WeightFunction = std::vector<double>;

/// Vector of non-negative real signals, one per bidder.
class SignalProfile {
 public:
  SignalProfile() = default;
  explicit SignalProfile(std::vector<double> signals);

  int size() const { return static_cast<int>(signals_.size()); }
  double operator[](int i) const { return signals_.at(static_cast<std::size_t>(i)); }
  const std::vector<double>& values() const { return signals_; }

  /// Copy of this profile with coordinate i replaced by value (value >= 0).
  SignalProfile with(int i, double value) const;

  bool operator==(const SignalProfile& other) const { return signals_ == other.signals_; }

 private:
  std::vector<double> signals_;
};

/// An oracle returned a negative or non-finite value, or was queried off its
/// declared domain.
class OracleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The independence oracle contradicted the matroid axioms.
class MatroidAxiomError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// No partition into t independent sets exists; carries the violating subset
/// S' with |S'| > t * rank(S') as the certificate.
class PartitionInfeasible : public std::runtime_error {
 public:
  PartitionInfeasible(std::vector<int> violating_subset, int t);
  const std::vector<int>& violating_subset() const { return violating_subset_; }
  int parts() const { return t_; }

 private:
  std::vector<int> violating_subset_;
  int t_ = 0;
};

void require(bool condition, const std::string& message);

}  // namespace iva

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace trieclt {

using Letter = std::uint16_t;

struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const Rational&, const Rational&) = default;
};

// Letter distribution of an i.i.d. source. Immutable once built.
class ProbModel {
 public:
  explicit ProbModel(std::vector<double> probs,
                     std::optional<double> declared_span = std::nullopt,
                     std::string label = {});

  static ProbModel from_rationals(std::vector<Rational> probs,
                                  std::optional<double> declared_span = std::nullopt,
                                  std::string label = {});
  static ProbModel symmetric(std::size_t r);

  std::size_t size() const noexcept { return probs_.size(); }
  double p(Letter a) const { return probs_.at(a); }
  std::span<const double> probs() const noexcept { return probs_; }
  const std::optional<std::vector<Rational>>& rationals() const noexcept { return rationals_; }
  std::optional<double> declared_span() const noexcept { return declared_span_; }
  const std::string& label() const noexcept { return label_; }

  double pmin() const noexcept { return pmin_; }
  double pmax() const noexcept { return pmax_; }
  bool is_symmetric() const noexcept { return pmin_ == pmax_; }

  // P(alpha) for a letter path.
  double path_probability(std::span<const Letter> path) const;

 private:
  std::vector<double> probs_;
  std::optional<std::vector<Rational>> rationals_;
  std::optional<double> declared_span_;
  std::string label_;
  double pmin_ = 0;
  double pmax_ = 0;
};

}  // namespace trieclt

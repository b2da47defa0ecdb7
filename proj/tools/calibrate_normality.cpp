// Null distribution of the normality statistics used by the CLT checks: draws normal samples of
// the experiment size and prints the 99th percentile of |skew|, |excess kurtosis| and KS.
#include <algorithm>
#include <iostream>
#include <random>
#include <vector>

#include <CLI11.hpp>

#include "trieclt/stats.hpp"

int main(int argc, char** argv) {
  CLI::App app{"calibrate normality thresholds"};
  std::size_t sample_size = 5000, reps = 2000;
  std::uint64_t seed = 1;
  double level = 0.99;
  app.add_option("--size", sample_size, "observations per sample");
  app.add_option("--reps", reps, "number of null samples");
  app.add_option("--seed", seed, "seed");
  app.add_option("--level", level, "quantile level")->check(CLI::Range(0.5, 1.0));
  CLI11_PARSE(app, argc, argv);

  std::mt19937_64 gen(seed);
  std::normal_distribution<double> z;
  std::vector<double> skew, kurt, ks, x(sample_size);
  for (std::size_t r = 0; r < reps; ++r) {
    for (auto& v : x) v = z(gen);
    auto m = trieclt::mc::sample_moments(x);
    skew.push_back(std::abs(m.skew));
    kurt.push_back(std::abs(m.exkurt));
    ks.push_back(trieclt::mc::ks_to_fitted_normal(x));
  }
  auto q = [level](std::vector<double>& v) {
    std::size_t i = std::min(v.size() - 1, static_cast<std::size_t>(level * v.size()));
    std::nth_element(v.begin(), v.begin() + i, v.end());
    return v[i];
  };
  std::cout << "size " << sample_size << " reps " << reps << " level " << level << '\n'
            << "abs_skew " << q(skew) << '\n'
            << "abs_exkurt " << q(kurt) << '\n'
            << "ks " << q(ks) << '\n';
}

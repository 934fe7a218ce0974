#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "repeaterscope/cascade.hpp"
#include "repeaterscope/errors.hpp"
#include "repeaterscope/oracle/monte_carlo.hpp"

using namespace repeaterscope;
using namespace repeaterscope::cascade;

namespace {

PairCountDistribution random_dist(std::mt19937_64& rng, int max_count) {
  std::exponential_distribution<double> e(1.0);
  Eigen::VectorXd p(max_count + 1);
  for (int k = 0; k <= max_count; ++k) p[k] = e(rng);
  return PairCountDistribution(p / p.sum());
}

struct ExactCase {
  CascadeConfig config;
  double completion;
  double expected_end;
  std::vector<double> end_pmf;
};

// Exact rational enumeration over every link's generation count and every
// distillation outcome.
std::vector<ExactCase> exact_cases() {
  std::vector<ExactCase> out;
  out.push_back({CascadeConfig::plain(1, 4, 0.3), 0.57744801000000001, 0.70583220000000002,
                 {0, 0.78991547654653793, 0.19795236630913318, 0.012018536525911658, 0.00011362061841723206}});
  CascadeConfig distilled = CascadeConfig::plain(2, 4, 0.3);
  distilled.distill = {true, false, false};
  distilled.distill_success = {0.9, 1.0, 1.0};
  out.push_back({distilled, 0.0097458381315247769, 0.0097458399845449656, {0, 0.99999980986548676, 1.9013451319880769e-07}});
  out.push_back({CascadeConfig::plain(2, 3, 0.5), 0.586181640625, 0.64892578125,
                 {0, 0.89337775926697205, 0.10620574760516452, 0.00041649312786339027}});
  return out;
}

}  // namespace

TEST_CASE("generation distribution is binomial") {
  const auto g = generation_distribution(10, 0.25);
  CHECK(g.mass() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(g[3] == doctest::Approx(120.0 * std::pow(0.25, 3) * std::pow(0.75, 7)).epsilon(1e-13));
  CHECK(g.mean() == doctest::Approx(2.5).epsilon(1e-13));
  CHECK(generation_distribution(5, 0.0)[0] == 1.0);
  CHECK(generation_distribution(5, 1.0)[5] == 1.0);
  const auto big = generation_distribution(1024, 0.3);
  CHECK(big.mass() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("pair minimum matches brute force over all pairs") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const auto d = random_dist(rng, 1 + trial % 12);
    const auto m = pair_minimum(d);
    Eigen::VectorXd brute = Eigen::VectorXd::Zero(d.probs.size());
    for (int j1 = 0; j1 <= d.max_count(); ++j1)
      for (int j2 = 0; j2 <= d.max_count(); ++j2) brute[std::min(j1, j2)] += d[j1] * d[j2];
    CHECK((m.probs - brute).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(std::abs(m.mass() - 1.0) < 1e-14);
  }
}

TEST_CASE("distillation thinning conserves mass and halves support") {
  std::mt19937_64 rng(9);
  const auto d = random_dist(rng, 16);
  const auto t = distillation_thinning(d, true, 0.8, 8);
  CHECK(t.max_count() == 8);
  CHECK(std::abs(t.mass() - 1.0) < 1e-14);
  double attempts = 0.0;
  for (int k = 0; k <= 16; ++k) attempts += (k / 2) * d[k];
  CHECK(t.mean() == doctest::Approx(0.8 * attempts).epsilon(1e-13));
  CHECK(distillation_thinning(d, false, 0.5, 16).probs == d.probs);
  CHECK(distillation_thinning(d, true, 1.0, 8)[1] == doctest::Approx(d[2] + d[3]));
}

TEST_CASE("reset profile") {
  const auto p = reset_probability_f({0.1, 0.2, 0.05}, 4);
  const double s0 = std::pow(0.9, 4), s1 = std::pow(0.8, 2), s2 = 0.95;
  CHECK(p.f[0] == doctest::Approx(1 - s0));
  CHECK(p.f[1] == doctest::Approx((1 - s1) * s0));
  CHECK(p.f[2] == doctest::Approx((1 - s2) * s0 * s1));
  CHECK(p.completion_prob == doctest::Approx(s0 * s1 * s2));
  double total = p.completion_prob;
  for (double f : p.f) total += f;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("cascade matches exact enumeration") {
  for (const auto& c : exact_cases()) {
    const auto rep = run_cascade(c.config);
    CHECK(rep.completion_prob == doctest::Approx(c.completion).epsilon(1e-12));
    CHECK(rep.expected_end_pairs == doctest::Approx(c.expected_end).epsilon(1e-12));
    const auto& end = rep.p_cond.back();
    for (int k = 0; k < static_cast<int>(c.end_pmf.size()); ++k) CHECK(std::abs(end[k] - c.end_pmf[k]) < 1e-12);
    CHECK(rep.max_mass_defect() < 1e-12);
  }
}

TEST_CASE("conditional distributions have unit mass") {
  CascadeConfig cfg = CascadeConfig::plain(3, 32, 0.2);
  cfg.distill = {true, true, false, false};
  cfg.distill_success = {0.8, 0.7, 1.0, 1.0};
  const auto rep = run_cascade(cfg);
  for (const auto& d : rep.p_cond) CHECK(std::abs(d.mass() - 1.0) < 1e-12);
  for (const auto& d : rep.q_cond) CHECK(std::abs(d.mass() - 1.0) < 1e-12);
  for (const auto& d : rep.p) CHECK(std::abs(d.mass() - 1.0) < 1e-12);
  CHECK(rep.capacity == std::vector<int>{32, 16, 8, 8});
}

TEST_CASE("literal reset rule") {
  SUBCASE("agrees with the consistent rule without distillation") {
    CascadeConfig cfg = CascadeConfig::plain(2, 16, 0.3);
    const auto a = run_cascade(cfg);
    cfg.reset_rule = ResetRule::Literal;
    const auto b = run_cascade(cfg);
    CHECK(a.completion_prob == doctest::Approx(b.completion_prob).epsilon(1e-14));
    CHECK(b.max_mass_defect() < 1e-14);
  }
  SUBCASE("leaves a mass defect once distillation can empty a segment") {
    CascadeConfig cfg = CascadeConfig::plain(2, 16, 0.1);
    cfg.distill = {true, false, false};
    cfg.distill_success = {0.9, 1.0, 1.0};
    cfg.reset_rule = ResetRule::Literal;
    CHECK(run_cascade(cfg).max_mass_defect() > 1e-3);
  }
}

TEST_CASE("configuration errors") {
  CascadeConfig cfg = CascadeConfig::plain(2, 2, 0.3);
  cfg.distill = {true, true, false};
  CHECK_THROWS_AS(run_cascade(cfg), ScheduleError);
  cfg = CascadeConfig::plain(1, 4, 0.3);
  cfg.distill = {false, true};
  CHECK_THROWS_AS(run_cascade(cfg), ConfigError);
  CHECK_THROWS_AS(run_cascade(CascadeConfig::plain(1, 4, 0.0)), CertainReset);
  CHECK_THROWS_AS(run_cascade(CascadeConfig::plain(1, 0, 0.5)), ConfigError);
}

TEST_CASE("expected end pairs never exceed the mean minimum of the links") {
  for (double pi0 : {0.1, 0.4, 0.8}) {
    const auto rep = run_cascade(CascadeConfig::plain(2, 16, pi0));
    oracle::MonteCarloConfig mc{20000, 5};
    const auto sim = oracle::mc_cascade(CascadeConfig::plain(2, 16, pi0), mc);
    CHECK(rep.expected_end_pairs <= 16.0 * pi0);
    CHECK(std::abs(rep.expected_end_pairs - sim.end_pairs.mean) < 4.0 * sim.end_pairs.se + 1e-12);
  }
}

TEST_CASE("certain success has no randomness") {
  CascadeConfig cfg = CascadeConfig::plain(2, 8, 1.0);
  cfg.distill = {true, false, false};
  cfg.distill_success = {1.0, 1.0, 1.0};
  const auto rep = run_cascade(cfg);
  CHECK(rep.completion_prob == 1.0);
  CHECK(rep.expected_end_pairs == 4.0);
  const auto sim = oracle::mc_cascade(cfg, {1000, 1});
  CHECK(sim.completion.mean == 1.0);
  CHECK(sim.end_pairs.mean == 4.0);
  CHECK(sim.end_pairs.se == 0.0);
}

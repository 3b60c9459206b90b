#include <doctest.h>

#include <stdexcept>

#include "gef/experiments.hpp"
#include "gef/parallel/kernels.hpp"

using namespace gef;

TEST_SUITE("parallel") {

TEST_CASE("parallel map equals the serial reference") {
  const auto f = [](std::uint64_t i) { return static_cast<double>(i * i % 97); };
  const auto s = map_samples_serial<double>(5, 1000, f);
  for (int t : {1, 2, 4}) CHECK(map_samples<double>(5, 1000, t, f) == s);
}

TEST_CASE("the lowest failing index wins") {
  const auto f = [](std::uint64_t i) -> int {
    if (i == 300 || i == 700) throw std::runtime_error("fail " + std::to_string(i));
    return 0;
  };
  for (int t : {1, 3}) CHECK_THROWS_WITH(map_samples<int>(0, 1000, t, f), "fail 300");
}

TEST_CASE("zero counts do not depend on the thread count") {
  const auto p = VarianceProfile::constant_one();
  BatchOptions one, four;
  one.threads = 1;
  four.threads = 4;
  const auto ref = zero_counts_serial(p, 3.0, 901, 0, 200);
  CHECK(zero_counts(p, 3.0, 901, 0, 200, one) == ref);
  CHECK(zero_counts(p, 3.0, 901, 0, 200, four) == ref);
  // A sub-range reproduces the same per-index values.
  const auto mid = zero_counts(p, 3.0, 901, 50, 20, four);
  CHECK(std::vector<int>(ref.begin() + 50, ref.begin() + 70) == mid);
}

TEST_CASE("campaign output does not depend on the thread count") {
  for (Experiment e : {Experiment::mean_check, Experiment::tail_scan, Experiment::lemma_suite}) {
    CampaignConfig c;
    c.experiment = e;
    c.R_list = {2.0, 3.0};
    c.alpha_list = {0.75};
    c.n_samples = 150;
    c.master_seed = 902;
    c.threads = 1;
    const auto a = run_campaign(c);
    c.threads = 3;
    const auto b = run_campaign(c);
    REQUIRE(a.status == 0);
    CHECK(a.table.to_csv() == b.table.to_csv());
    CHECK(a.table.to_json().dump() == b.table.to_json().dump());
  }
}

}  // TEST_SUITE

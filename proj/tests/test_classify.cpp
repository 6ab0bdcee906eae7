#include <doctest.h>

#include "support.hpp"
#include "anharmonic/oracle.hpp"
#include "anharmonic/report.hpp"

using namespace anharmonic;
using testing_support::big;
using testing_support::ctx100;

namespace {

// At a = 7.5 and 100 digits, N = 400 leaves a last-term ratio ~1e-53, short
// of the 1e-105 adequacy rule; the solver escalates to N = 600 on its own.
Classification classify_paper(int n, const BigReal& E) {
  return classify_energy(testing_support::paper_params(), {n}, E, big("7.5"), 600, ctx100());
}

}  // namespace

TEST_SUITE("classify") {
  TEST_CASE("level target geometry") {
    CHECK(LevelTarget{0}.positive_nodes() == 0);
    CHECK(LevelTarget{1}.positive_nodes() == 0);
    CHECK(LevelTarget{2}.positive_nodes() == 1);
    CHECK(LevelTarget{9}.positive_nodes() == 4);
    CHECK(LevelTarget{9}.parity() == Parity::Odd);
    CHECK(LevelTarget{4}.parity() == Parity::Even);
  }

  TEST_CASE("paper n=0: E=1.1 Above, E=1.0 Below (shooting oracle agrees)") {
    const auto p = testing_support::paper_params();
    // [DERIVED] independent double-precision shooting brackets E_0.
    const ShootingResult s_hi = shooting_check(p, 1.1, 7.5, Parity::Even);
    const ShootingResult s_lo = shooting_check(p, 1.0, 7.5, Parity::Even);
    REQUIRE(s_hi.nodes == 1);
    REQUIRE(s_lo.nodes == 0);

    const Classification hi = classify_paper(0, big("1.1"));
    CHECK(hi.verdict == Verdict::Above);
    CHECK(hi.node_count == 1);
    REQUIRE(hi.entering_zero.has_value());
    const Classification lo = classify_paper(0, big("1.0"));
    CHECK(lo.verdict == Verdict::Below);
    CHECK(lo.node_count == 0);
    REQUIRE(lo.sink.has_value());
    CHECK(lo.sink->ratio < lo.sink->wkb);
  }

  TEST_CASE("harmonic n=0: 0.9 Below, 1.1 Above, exact eigenvalue Indeterminate") {
    const auto h = testing_support::harmonic_params();
    const BigReal a = big("7.5");
    CHECK(classify_energy(h, {0}, big("0.9"), a, 400, ctx100()).verdict == Verdict::Below);
    CHECK(classify_energy(h, {0}, big("1.1"), a, 400, ctx100()).verdict == Verdict::Above);
    const Classification exact = classify_energy(h, {0}, big("1"), a, 400, ctx100());
    CHECK(exact.verdict == Verdict::Indeterminate);
    CHECK(exact.limit != Limit::None);
  }

  TEST_CASE("paper n=1: verdicts flip across Table 1 +- 1e-20") {
    const BigReal E1 = big(table1_values()[1]);
    CHECK(classify_paper(1, E1 - big("1e-20")).verdict == Verdict::Below);
    CHECK(classify_paper(1, E1 + big("1e-20")).verdict == Verdict::Above);
  }

  TEST_CASE("sink_entry examples") {
    const auto h = testing_support::harmonic_params();
    const BigReal a = big("6");
    const SeriesState exact = build_series(h, {big("1"), Parity::Even}, 400, ctx100());
    CHECK_FALSE(sink_entry(h, exact, big("1"), a).has_value());

    const SeriesState low = build_series(h, {big("0.99"), Parity::Even}, 400, ctx100());
    const auto entry = sink_entry(h, low, turning_point(h, big("0.99")), a);
    REQUIRE(entry.has_value());
    CHECK(entry->x.to_double() < 6.0);

    const auto again = sink_entry(h, low, entry->x, a);
    REQUIRE(again.has_value());
    CHECK(again->x.to_double() == doctest::Approx(entry->x.to_double()).epsilon(1e-2));
  }

  TEST_CASE("double well is refused without the experimental flag") {
    const auto dw = PotentialParams::from_strings(ctx100(), "0.5", "-1", "0.1", "1");
    const Classification c = classify_energy(dw, {0}, big("0.5"), big("7.5"), 400, ctx100());
    CHECK(c.verdict == Verdict::Indeterminate);
    CHECK(c.limit == Limit::DoubleWell);
  }

  TEST_CASE("inadequate resources yield Indeterminate with a reason") {
    const Classification n400 = classify_energy(testing_support::paper_params(), {0}, big("1.0"),
                                                big("7.5"), 400, ctx100());
    CHECK(n400.verdict == Verdict::Indeterminate);
    CHECK(n400.limit == Limit::Tail);
    const Classification tail = classify_energy(testing_support::paper_params(), {9}, big("26"),
                                                big("7.5"), 150, ctx100());
    CHECK(tail.verdict == Verdict::Indeterminate);
    CHECK(tail.limit == Limit::Tail);
    const Classification cut = classify_energy(testing_support::paper_params(), {0}, big("1.0"),
                                               big("1.0"), 400, ctx100());
    CHECK(cut.verdict == Verdict::Indeterminate);
    CHECK(cut.limit == Limit::Cutoff);
  }

  TEST_CASE("trace line carries E, verdict, node count and resources") {
    const Classification c = classify_paper(0, big("1.1"));
    const std::string line = trace_line(c, 0);
    for (const char* key : {"E=1.1", "verdict=Above", "node_count=1", "zero=", "N=600", "a=7.5", "digits=100"}) {
      CHECK(line.find(key) != std::string::npos);
    }
  }

  TEST_CASE("property: exclusivity and forbidden-region node exclusion over a sweep") {
    const auto p = testing_support::paper_params();
    const BigReal E0 = big(table1_values()[0]);
    const BigReal step = big("1e-3");
    int phase = 0;  // 0 Below, 1 Indeterminate, 2 Above
    for (int i = -6; i <= 6; ++i) {
      const BigReal E = E0 + step * i + big("1e-7");
      const Classification c = classify_paper(0, E);
      const int now = c.verdict == Verdict::Below ? 0 : c.verdict == Verdict::Above ? 2 : 1;
      CHECK(now >= phase);
      phase = std::max(phase, now);
      if (c.verdict == Verdict::Below) {
        const BigReal xt = turning_point(p, E);
        for (const BigReal& z : c.zeros) CHECK(z < xt);
      }
      if (c.verdict == Verdict::Above) CHECK(c.node_count > 0);
    }
    CHECK(phase == 2);
  }

  TEST_CASE("property: harmonic family agrees with the closed-form spectrum") {
    for (const char* lam : {"0", "1e-30"}) {
      const auto h = PotentialParams::from_strings(ctx100(), "0.5", "4", lam, "1");
      for (int n : {0, 3, 6, 9}) {
        const BigReal En(ctx100(), 2L * n + 1);
        const BigReal a = big(n < 5 ? "7.5" : "10");
        const Classification lo = classify_energy(h, {n}, En - big("0.05"), a, 700, ctx100());
        const Classification hi = classify_energy(h, {n}, En + big("0.05"), a, 700, ctx100());
        CHECK_MESSAGE(lo.verdict == Verdict::Below, "lambda=" << lam << " n=" << n);
        CHECK_MESSAGE(hi.verdict == Verdict::Above, "lambda=" << lam << " n=" << n);
      }
    }
  }
}

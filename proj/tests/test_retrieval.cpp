#include <doctest.h>

#include <cmath>
#include <map>
#include <numbers>

#include "qam/error.hpp"
#include "qam/memory.hpp"
#include "qam/retrieval.hpp"
#include "support/dense_oracle.hpp"
#include "support/fixtures.hpp"

using namespace qam;
using fixtures::closed_form;
using fixtures::from_index;
using fixtures::random_set;

namespace {

constexpr double kPi = std::numbers::pi;

Pattern P(const char* s) { return Pattern::parse(s); }

PatternSet S(std::initializer_list<const char*> pats) {
    std::vector<Pattern> v;
    for (auto p : pats) v.push_back(P(p));
    return PatternSet(v);
}

}  // namespace

TEST_CASE("round gate counts") {
    for (std::size_t n = 1; n <= 6; ++n) {
        const auto in = Pattern::zeros(n);
        const auto with = retrieval_layout(n, 1, true);
        const auto without = retrieval_layout(n, 1, false);
        CHECK(retrieval_round_circuit(in, with, 0).size() == 6 * n + 2);
        CHECK(retrieval_round_circuit(in, without, 0).size() == 4 * n + 2);
    }
}

TEST_CASE("one round on an exact match leaves nothing on c = 1") {
    const auto set = S({"101"});
    const auto in = P("101");
    const auto state = prepared_retrieval_state(set, in, 1);
    const auto& ctrl = state.layout().section("control");
    for (const auto& [k, a] : state.terms())
        if (section_pattern(k, ctrl)[0] == 1) CHECK(std::abs(a) < 1e-12);
}

TEST_CASE("analytic distribution examples") {
    const auto exact = analytic_distribution(S({"000", "111"}), P("000"), 1);
    CHECK(exact.p_rec == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(exact.probs[0].second == doctest::Approx(1.0));
    CHECK(exact.probs[1].second == doctest::Approx(0.0));

    const auto near = analytic_distribution(S({"000", "111"}), P("100"), 1);
    CHECK(near.p_rec == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(near.probs[0].second == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(near.probs[1].second == doctest::Approx(0.25).epsilon(1e-12));

    // Full set: the binomial average of cos^{2b}(pi d / 6) over d. It equals
    // 1/2 at b = 1 by the d <-> n - d symmetry, and not 2^-b beyond that.
    std::vector<Pattern> all;
    for (std::uint64_t v = 0; v < 8; ++v) all.push_back(from_index(v, 3));
    const PatternSet full(all);
    for (std::size_t b = 1; b <= 4; ++b) {
        double want = 0;
        const double binom[] = {1, 3, 3, 1};
        for (int d = 0; d < 3; ++d) want += binom[d] * std::pow(std::cos(kPi * d / 6), 2.0 * double(b)) / 8;
        for (std::uint64_t v = 0; v < 8; ++v)
            CHECK(analytic_distribution(full, from_index(v, 3), b).p_rec == doctest::Approx(want).epsilon(1e-12));
    }
    CHECK(analytic_distribution(full, from_index(5, 3), 1).p_rec == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("b = 0 is the uniform case") {
    const auto d = analytic_distribution(S({"00", "01", "11"}), P("00"), 0);
    CHECK(d.p_rec == doctest::Approx(1.0));
    for (const auto& [p, x] : d.probs) CHECK(x == doctest::Approx(1.0 / 3));
    const auto sim = simulated_distribution(S({"00", "01", "11"}), P("00"), 0);
    for (const auto& [p, x] : sim.dist.probs) CHECK(x == doctest::Approx(1.0 / 3));
}

TEST_CASE("gate-level distribution matches the closed form on random sets") {
    Rng rng(31);
    for (int t = 0; t < 60; ++t) {
        const std::size_t n = 1 + uniform_below(rng, 4);
        const std::size_t p = 1 + uniform_below(rng, std::min<std::uint64_t>(5, std::uint64_t{1} << n));
        const std::size_t b = uniform_below(rng, 4);
        const auto set = random_set(n, p, rng);
        const auto in = from_index(uniform_below(rng, std::uint64_t{1} << n), n);
        const auto [p_rec, probs] = closed_form(set, in, b);
        for (bool reg : {true, false}) {
            const auto sim = simulated_distribution(set, in, b, reg);
            CHECK(sim.dist.p_rec == doctest::Approx(p_rec).epsilon(1e-9));
            CHECK(sim.spurious_probability < 1e-12);
            // With every pattern at distance n nothing is recognized and the
            // conditional distribution is undefined.
            if (p_rec < 1e-12) continue;
            for (std::size_t k = 0; k < p; ++k) CHECK(std::abs(sim.dist.probs[k].second - probs[k]) < 1e-9);
        }
    }
}

TEST_CASE("retrieval circuit agrees with the dense oracle") {
    Rng rng(77);
    for (int t = 0; t < 12; ++t) {
        const std::size_t n = 2 + uniform_below(rng, 2);
        const std::size_t b = 1 + uniform_below(rng, 2);
        const auto set = random_set(n, 1 + uniform_below(rng, 3), rng);
        const auto in = from_index(uniform_below(rng, std::uint64_t{1} << n), n);
        const auto layout = retrieval_layout(n, b, true);
        const auto circuit = retrieval_circuit(set, in, layout);
        oracle::DenseState dense(layout.total(), retrieval_initial_key(layout, in));
        dense.apply(circuit);
        CHECK(dense.distance(prepared_retrieval_state(set, in, b)) < 1e-12);

        // Probability of the all-zero control outcome, from the dense vector.
        const auto& ctrl = layout.section("control");
        double p0 = 0;
        for (std::uint64_t k = 0; k < dense.dim(); ++k)
            if (section_pattern(k, ctrl) == Pattern::zeros(b)) p0 += std::norm(dense[k]);
        CHECK(p0 == doctest::Approx(closed_form(set, in, b).first).epsilon(1e-9));
    }
}

TEST_CASE("masked retrieval") {
    const auto set = S({"1100", "0011", "1111"});
    const auto in = P("1000");
    const Mask known({0, 1}, 4);
    const auto d = analytic_distribution(set, in, 2, known);
    const auto [p_rec, probs] = closed_form(set, in, 2, {0, 1});
    CHECK(d.p_rec == doctest::Approx(p_rec).epsilon(1e-12));
    for (std::size_t k = 0; k < 3; ++k) CHECK(d.probs[k].second == doctest::Approx(probs[k]).epsilon(1e-12));
    const auto sim = simulated_distribution(set, in, 2, true, known);
    for (std::size_t k = 0; k < 3; ++k) CHECK(std::abs(sim.dist.probs[k].second - probs[k]) < 1e-9);

    const auto full = analytic_distribution(set, in, 2, Mask::full(4));
    const auto plain = analytic_distribution(set, in, 2);
    CHECK(full.p_rec == doctest::Approx(plain.p_rec).epsilon(1e-15));
    const auto sim_full = simulated_distribution(set, in, 2, true, Mask::full(4));
    const auto sim_plain = simulated_distribution(set, in, 2, true);
    for (std::size_t k = 0; k < 3; ++k)
        CHECK(std::abs(sim_full.dist.probs[k].second - sim_plain.dist.probs[k].second) < 1e-12);
}

TEST_CASE("probability of the nearest pattern grows with b") {
    const auto set = S({"00000", "00111", "11111"});
    const auto in = P("10000");
    double prev = 0;
    for (std::size_t b : {1, 4, 16, 64}) {
        const double x = analytic_distribution(set, in, b).probs[0].second;
        CHECK(x >= prev);
        prev = x;
    }
    CHECK(prev > 0.99);
    const auto lim = limiting_distribution(set, in);
    CHECK(lim.probs[0].second == 1.0);

    // Two patterns at the same minimal distance share the limit equally.
    const auto tie = limiting_distribution(S({"011", "110", "000"}), P("010"));
    CHECK(tie.probs[0].second == doctest::Approx(1.0 / 3));
    CHECK(tie.probs[1].second == doctest::Approx(1.0 / 3));
    CHECK(tie.probs[2].second == doctest::Approx(1.0 / 3));
}

TEST_CASE("recognition lower bound") {
    CHECK(recognition_lower_bound(1, 5, 3).bound == 0.0);
    CHECK(recognition_lower_bound(4, 5, 0).bound == doctest::Approx(0.75));
    Rng rng(5);
    for (int t = 0; t < 300; ++t) {
        const std::size_t n = 2 + uniform_below(rng, 5);
        const std::size_t p = 1 + uniform_below(rng, std::min<std::uint64_t>(8, std::uint64_t{1} << n));
        const std::size_t b = uniform_below(rng, 4);
        const auto set = random_set(n, p, rng);
        const auto in = from_index(uniform_below(rng, std::uint64_t{1} << n), n);
        CHECK(recognition_lower_bound(p, n, b).bound <= analytic_distribution(set, in, b).p_rec + 1e-12);
    }
}

TEST_CASE("retrieve on a single stored pattern") {
    const auto set = S({"0110"});
    RetrievalConfig cfg;
    cfg.b = 3;
    cfg.T = 5;
    const auto r = retrieve(set, P("0110"), cfg, 1);
    CHECK(r.recognized);
    CHECK(r.attempts == 1);
    REQUIRE(r.output);
    CHECK(*r.output == P("0110"));
    CHECK(r.analytic_p_rec == doctest::Approx(1.0));
}

TEST_CASE("repeat mode recognition rate follows the geometric law") {
    const auto set = S({"000", "111"});
    RetrievalConfig cfg;
    cfg.b = 1;
    cfg.T = 3;
    Retriever exact(set, P("000"), cfg);
    int hits = 0;
    const int runs = 4000;
    for (int s = 0; s < runs; ++s) {
        Rng rng(derive_seed(42, s));
        const auto r = exact.run(rng);
        if (r.recognized) {
            ++hits;
            CHECK(*r.output == P("000"));
        }
    }
    const double expect = 1 - std::pow(0.5, 3);
    const double sigma = std::sqrt(expect * (1 - expect) / runs);
    CHECK(std::abs(hits / double(runs) - expect) < 4 * sigma);

    cfg.T = 50;
    Retriever near(set, P("100"), cfg);
    std::map<std::string, int> counts;
    int rec = 0;
    for (int s = 0; s < runs; ++s) {
        Rng rng(derive_seed(43, s));
        const auto r = near.run(rng);
        if (!r.recognized) continue;
        ++rec;
        ++counts[r.output->str()];
    }
    const double f = counts["000"] / double(rec);
    CHECK(std::abs(f - 0.75) < 4 * std::sqrt(0.75 * 0.25 / rec));
    CHECK(counts["000"] + counts["111"] == rec);
}

TEST_CASE("retrieval is reproducible for a fixed seed") {
    const auto set = S({"0011", "0101", "1001", "1110"});
    RetrievalConfig cfg;
    cfg.b = 2;
    cfg.T = 20;
    const auto a = retrieve(set, P("0001"), cfg, 123);
    const auto b = retrieve(set, P("0001"), cfg, 123);
    CHECK(retrieval_report_json(a) == retrieval_report_json(b));
}

TEST_CASE("amplitude amplification follows the rotation law") {
    struct Case {
        PatternSet set;
        Pattern in;
        std::size_t b;
    };
    const std::vector<Case> cases{{S({"000", "111"}), P("000"), 1},
                                  {S({"01", "10", "11"}), P("00"), 3},
                                  {S({"0011", "0101", "1000"}), P("0000"), 2},
                                  {S({"101"}), P("010"), 1}};
    for (const auto& c : cases) {
        const double p_rec = closed_form(c.set, c.in, c.b).first;
        const double theta = std::asin(std::sqrt(p_rec));
        for (long j = 0; j <= 6; ++j) {
            const auto r = amplitude_amplify(c.set, c.in, c.b, j);
            CHECK(r.theta == doctest::Approx(theta).epsilon(1e-12));
            CHECK(std::abs(r.success_probability - std::pow(std::sin((2 * j + 1) * theta), 2)) < 1e-9);
        }
    }
    const auto half = amplitude_amplify(S({"000", "111"}), P("000"), 1, 0);
    CHECK(half.success_probability == doctest::Approx(0.5));
    CHECK(amplitude_amplify(S({"000", "111"}), P("000"), 1, 1).success_probability == doctest::Approx(0.5));
    CHECK(amplitude_amplify(S({"011"}), P("011"), 2, 0).success_probability >= 1 - 1e-10);
}

TEST_CASE("phase-matched amplification reaches certainty") {
    const auto set = S({"01", "10", "11"});
    for (std::size_t b : {3, 5}) {
        const double p_rec = closed_form(set, P("00"), b).first;
        const auto sched = zero_failure_schedule(p_rec);
        const auto r = amplitude_amplify_phase(set, P("00"), b, static_cast<long>(sched.iterations), sched.phi);
        CHECK(r.success_probability == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("complexity estimate") {
    CHECK(complexity_estimate(1, 2, 1, 1, RetrievalMode::RepeatMeasure) == 112);
    for (std::uint64_t p = 1; p <= 4; ++p)
        for (std::uint64_t n = 1; n <= 4; ++n)
            for (std::uint64_t b = 1; b <= 3; ++b)
                CHECK(complexity_estimate(p, n, b, 0, RetrievalMode::AmplitudeAmplify) ==
                      p * (2 * n + 3) + b * (4 * n + 2) + 1);
    const auto base = complexity_estimate(2, 3, 2, 5, RetrievalMode::RepeatMeasure);
    CHECK(complexity_estimate(3, 3, 2, 5, RetrievalMode::RepeatMeasure) > base);
    CHECK(complexity_estimate(2, 4, 2, 5, RetrievalMode::RepeatMeasure) > base);
    CHECK(complexity_estimate(2, 3, 3, 5, RetrievalMode::RepeatMeasure) > base);
    CHECK(complexity_estimate(2, 3, 2, 6, RetrievalMode::RepeatMeasure) > base);
    const auto amp = complexity_estimate(2, 3, 2, 5, RetrievalMode::AmplitudeAmplify);
    CHECK(complexity_estimate(2, 3, 2, 6, RetrievalMode::AmplitudeAmplify) > amp);
}

TEST_CASE("retrieval input validation") {
    CHECK_THROWS_AS(analytic_distribution(S({"00", "11"}), P("000"), 1), ValidationError);
    CHECK_THROWS_AS(parse_mode("sideways"), ValidationError);
    CHECK(parse_mode("amplify") == RetrievalMode::AmplitudeAmplify);
}

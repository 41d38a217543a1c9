#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qam/error.hpp"
#include "qam/simulator.hpp"
#include "support/dense_oracle.hpp"

using namespace qam;

namespace {

RegisterLayout flat(std::size_t n) {
    RegisterLayout l;
    l.add("q", n);
    return l;
}

RegisterLayout two_sections(std::size_t a, std::size_t b) {
    RegisterLayout l;
    l.add("a", a).add("b", b);
    return l;
}

SparseState random_state(const RegisterLayout& layout, std::size_t terms, Rng& rng) {
    std::vector<SparseState::Term> t;
    const std::uint64_t dim = std::uint64_t{1} << layout.total();
    double norm = 0;
    for (std::size_t i = 0; i < terms; ++i) {
        const BasisKey k = uniform_below(rng, dim);
        bool seen = false;
        for (const auto& [kk, a] : t) seen |= kk == k;
        if (seen) continue;
        const Amplitude a(uniform01(rng) - 0.5, uniform01(rng) - 0.5);
        norm += std::norm(a);
        t.emplace_back(k, a);
    }
    for (auto& [k, a] : t) a /= std::sqrt(norm);
    return SparseState::from_terms(layout, t);
}

Gate random_gate(std::size_t nq, Rng& rng) {
    auto q = [&] { return static_cast<std::size_t>(uniform_below(rng, nq)); };
    auto distinct = [&](std::size_t avoid) {
        std::size_t c;
        do c = q();
        while (c == avoid);
        return c;
    };
    const double angle = (uniform01(rng) - 0.5) * 4;
    const int idx = 1 + static_cast<int>(uniform_below(rng, 6));
    const std::size_t t = q();
    switch (uniform_below(rng, 11)) {
        case 0: return Gate::Not(t);
        case 1: return Gate::H(t);
        case 2: return Gate::Xor(distinct(t), t);
        case 3: {
            if (nq < 3) return Gate::Xor(distinct(t), t);
            const auto c1 = distinct(t);
            std::size_t c2;
            do c2 = q();
            while (c2 == t || c2 == c1);
            return Gate::Toffoli(c1, c2, t);
        }
        case 4: {
            std::vector<std::size_t> cs;
            std::vector<std::uint8_t> vals;
            for (std::size_t j = 0; j < nq; ++j)
                if (j != t && uniform_below(rng, 2)) {
                    cs.push_back(j);
                    vals.push_back(static_cast<std::uint8_t>(uniform_below(rng, 2)));
                }
            if (cs.empty()) return Gate::Not(t);
            return Gate::NXorMatch(cs, vals, t);
        }
        case 5: return Gate::CS(idx, distinct(t), t);
        case 6: return Gate::CSInv(idx, distinct(t), t);
        case 7: return Gate::U(angle, t);
        case 8: return Gate::CUInv2(angle, distinct(t), t);
        case 9: return Gate::RotY(angle, t);
        default: return Gate::CRotY(angle, distinct(t), t);
    }
}

}  // namespace

TEST_CASE("basis states") {
    const auto s = basis_state(flat(2), "00");
    CHECK(s.size() == 1);
    CHECK(s.amplitude(0) == Amplitude(1.0));
    const auto one = basis_state(flat(1), "1");
    CHECK(one.amplitude(1) == Amplitude(1.0));
    CHECK(one.norm() == doctest::Approx(1.0));
    CHECK_THROWS_AS(basis_state(flat(2), "012"), ValidationError);
}

TEST_CASE("single gate examples") {
    auto s = basis_state(flat(1), "0");
    apply(s, Gate::H(0));
    CHECK(std::abs(s.amplitude(0) - 1 / std::sqrt(2.0)) < 1e-15);
    CHECK(std::abs(s.amplitude(1) - 1 / std::sqrt(2.0)) < 1e-15);

    auto x = basis_state(flat(2), "11");
    apply(x, Gate::Xor(0, 1));
    CHECK(x.size() == 1);
    CHECK(x.amplitude(0b01) == Amplitude(1.0));

    // S^1 = [[0, 1], [-1, 0]] acting on target 0 sends |0> to -|1>.
    auto cs = basis_state(flat(2), "10");
    apply(cs, Gate::CS(1, 0, 1));
    CHECK(cs.size() == 1);
    CHECK(std::abs(cs.amplitude(0b11) - Amplitude(-1.0)) < 1e-15);
}

TEST_CASE("circuit identities") {
    const auto layout = flat(2);
    Circuit empty(layout);
    auto s = basis_state(layout, "10");
    apply_circuit(s, empty);
    CHECK(s.amplitude(1) == Amplitude(1.0));

    Circuit nn(layout);
    nn.add(Gate::Not(0)).add(Gate::Not(0));
    apply_circuit(s, nn);
    CHECK(s.amplitude(1) == Amplitude(1.0));

    Circuit hh(layout);
    hh.add(Gate::H(0)).add(Gate::H(0));
    apply_circuit(s, hh);
    CHECK(s.size() == 1);
    CHECK(std::abs(s.amplitude(1) - 1.0) < 1e-12);

    Circuit bad(layout);
    CHECK_THROWS_AS(bad.add(Gate::Not(2)), ValidationError);
    CHECK_THROWS_AS(bad.add(Gate::Xor(1, 1)), ValidationError);
}

TEST_CASE("gate followed by its inverse is the identity") {
    Rng rng(11);
    const auto layout = flat(5);
    for (int trial = 0; trial < 400; ++trial) {
        const auto s0 = random_state(layout, 6, rng);
        const Gate g = random_gate(5, rng);
        auto s = s0;
        apply(s, g);
        CHECK(s.norm() == doctest::Approx(1.0).epsilon(1e-12));
        apply(s, g.inverse());
        CHECK(oracle::DenseState::from_sparse(s0).distance(s) < 1e-12);
    }
}

TEST_CASE("multi-controlled NOT matches a truth table") {
    for (std::size_t nc = 1; nc <= 4; ++nc) {
        const std::size_t nq = nc + 1;
        std::vector<std::size_t> controls(nc);
        for (std::size_t j = 0; j < nc; ++j) controls[j] = j;
        for (std::uint64_t v = 0; v < (std::uint64_t{1} << nq); ++v) {
            auto s = basis_state(flat(nq), BasisKey{v});
            apply(s, Gate::NXor(controls, nc));
            const bool all = (v & ((std::uint64_t{1} << nc) - 1)) == (std::uint64_t{1} << nc) - 1;
            const std::uint64_t expect = all ? v ^ (std::uint64_t{1} << nc) : v;
            REQUIRE(s.size() == 1);
            CHECK(s.amplitude(expect) == Amplitude(1.0));
        }
    }
}

TEST_CASE("negated controls fire on zero") {
    auto s = basis_state(flat(3), "010");
    apply(s, Gate::NXorMatch({0, 1}, {0, 1}, 2));
    CHECK(s.amplitude(0b110) == Amplitude(1.0));
    CHECK(Gate::NXorMatch({0, 1}, {0, 1}, 2).str().find("!0") != std::string::npos);
}

TEST_CASE("sparse and dense evaluation agree on random circuits") {
    Rng rng(2024);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t nq = 2 + uniform_below(rng, 11);
        const auto layout = flat(nq);
        Circuit c(layout);
        for (int k = 0; k < 40; ++k) c.add(random_gate(nq, rng));
        const auto s0 = random_state(layout, 5, rng);
        auto sparse = s0;
        apply_circuit(sparse, c);
        auto dense = oracle::DenseState::from_sparse(s0);
        dense.apply(c);
        CHECK(dense.distance(sparse) < 1e-12);
        CHECK(sparse.norm() == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("circuit inverse undoes the circuit") {
    Rng rng(5);
    const auto layout = flat(6);
    Circuit c(layout);
    for (int k = 0; k < 30; ++k) c.add(random_gate(6, rng));
    const auto s0 = random_state(layout, 8, rng);
    auto s = s0;
    apply_circuit(s, c);
    apply_circuit(s, c.inverse());
    CHECK(oracle::DenseState::from_sparse(s0).distance(s) < 1e-12);
}

TEST_CASE("measurement") {
    const auto layout = two_sections(1, 1);
    Rng rng(3);
    const auto basis = basis_state(layout, "10");
    const auto m = measure_section(basis, "a", rng);
    CHECK(m.outcome.str() == "1");
    CHECK(m.probability == doctest::Approx(1.0));

    const double h = 1 / std::sqrt(2.0);
    const auto bell = SparseState::from_terms(layout, {{0b00, h}, {0b11, h}});
    int ones = 0;
    const int draws = 10'000;
    for (int i = 0; i < draws; ++i) {
        const auto r = measure_section(bell, "a", rng);
        ones += r.outcome[0];
        CHECK(r.state.norm() == doctest::Approx(1.0).epsilon(1e-10));
    }
    // Exact marginal is 1/2.
    CHECK(std::abs(ones / double(draws) - 0.5) < 0.02);
}

TEST_CASE("postselection") {
    const auto layout = two_sections(1, 1);
    const auto basis = basis_state(layout, "01");
    const auto self = postselect(basis, "b", Pattern::parse("1"));
    CHECK(self.probability == doctest::Approx(1.0));
    REQUIRE(self.state);
    CHECK(self.state->amplitude(0b10) == Amplitude(1.0));

    const double h = 1 / std::sqrt(2.0);
    const auto bell = SparseState::from_terms(layout, {{0b00, h}, {0b11, h}});
    const auto zero = postselect(bell, "a", Pattern::parse("0"));
    const auto one = postselect(bell, "a", Pattern::parse("1"));
    CHECK(zero.probability == doctest::Approx(0.5));
    REQUIRE(zero.state);
    CHECK(std::abs(zero.state->amplitude(0) - 1.0) < 1e-12);
    CHECK(std::abs(zero.probability + one.probability - 1.0) < 1e-12);

    const auto none = postselect(basis, "b", Pattern::parse("0"));
    CHECK(none.probability == 0.0);
    CHECK_FALSE(none.state);
}

TEST_CASE("overlap") {
    const auto layout = flat(3);
    Rng rng(8);
    const auto x = random_state(layout, 5, rng);
    CHECK(std::abs(overlap(x, x) - 1.0) < 1e-12);
    CHECK(std::abs(overlap(basis_state(layout, "010"), basis_state(layout, "011"))) == 0.0);
}

TEST_CASE("states reject bad norms") {
    CHECK_THROWS_AS(SparseState::from_terms(flat(1), {{0, 0.5}}), ValidationError);
}

TEST_CASE("section helpers") {
    const auto layout = two_sections(2, 3);
    const auto& b = layout.section("b");
    const BasisKey k = with_section(0, b, Pattern::parse("101"));
    CHECK(k == 0b10100);
    CHECK(section_pattern(k, b).str() == "101");
    CHECK_THROWS(layout.section("c"));
}

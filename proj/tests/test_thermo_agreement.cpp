#include <doctest.h>

#include <cmath>

#include "qam/thermo.hpp"

using namespace qam;

// Discrete sum and continuum integral, compared at the smallest size where
// they are expected to agree to 1e-4 relative.
TEST_CASE("discrete and continuum partition functions agree for n >= 1e4") {
    for (std::size_t n : {10'000, 100'000, 8'000'000})
        for (double d_over_n : {0.0, 0.01, 0.2})
            for (double b : {0.01, 1.0, 100.0, 1e4}) {
                const auto d = distance_from_ratio(d_over_n, n);
                const auto disc = potentials(b, d, n, ThermoMethod::Discrete);
                const auto cont = potentials(b, d, n, ThermoMethod::Continuum);
                CAPTURE(n);
                CAPTURE(d_over_n);
                CAPTURE(b);
                CHECK(std::abs(std::expm1(disc.log_Z_ratio - cont.log_Z_ratio)) < 1e-4);
                CHECK(std::abs(disc.D_eff / cont.D_eff - 1) < 1e-4);
            }
}

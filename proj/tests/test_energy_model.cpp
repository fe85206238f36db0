#include "bciov/energy_model.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace bciov;

namespace {

EnergyParams params(int hops, int records, double e_r, int kinds = 3, double e_c = 2580.0, double requests = 2.0)
{
    EnergyParams p;
    p.hop_count = hops;
    p.records_per_tx = records;
    p.per_record_energy = e_r;
    p.message_kinds = kinds;
    p.per_request_energy = e_c;
    p.requests = requests;
    return p;
}

}  // namespace

TEST_SUITE("energy_model") {

TEST_CASE("ledger update energy")
{
    CHECK(ledger_update_energy(params(10, 1, 2580)) == 25800.0);
    CHECK(ledger_update_energy(params(0, 5, 2580)) == 0.0);
    CHECK(ledger_update_energy(params(1, 2, 2580)) == 5160.0);
}

TEST_CASE("transmission energy")
{
    CHECK(transmission_energy(params(1, 1, 2580, 1, 2.0, 3.0)) == 6.0);
    CHECK(transmission_energy(params(10, 1, 2580, 3, 2580, 0.0)) == 0.0);
    CHECK(transmission_energy(params(10, 1, 2580, 3, 2580, 2.0)) == 154800.0);
}

TEST_CASE("per-kind override sums the kinds")
{
    EnergyParams p = params(2, 1, 2580, 3, 0.0, 1.5);
    p.per_kind_request_energy = {1.0, 2.0, 3.0};
    CHECK(transmission_energy(p) == doctest::Approx(2 * 1.5 * 6.0));
    p.per_kind_request_energy = {2580.0, 2580.0, 2580.0};
    p.per_request_energy = 2580.0;
    EnergyParams uniform = p;
    uniform.per_kind_request_energy.clear();
    CHECK(transmission_energy(p) == doctest::Approx(transmission_energy(uniform)));
    p.per_kind_request_energy = {1.0};
    CHECK_THROWS_AS(transmission_energy(p), DomainError);
}

TEST_CASE("total blockchain energy")
{
    EnergyParams p = params(10, 1, 2580);
    p.security_cost = 0.625;
    p.app_count = 1;
    CHECK(total_blockchain_energy(p) == doctest::Approx(180600.625).epsilon(1e-15));
    p.app_count = 10;
    CHECK(total_blockchain_energy(p) == doctest::Approx(1806006.25).epsilon(1e-15));

    EnergyParams zero = params(0, 0, 0, 1, 0.0, 0.0);
    zero.security_cost = 0.0;
    zero.app_count = 1;
    CHECK(total_blockchain_energy(zero) == 0.0);
}

TEST_CASE("invalid energy parameters")
{
    EnergyParams p;
    p.app_count = 0;
    CHECK_THROWS_AS(total_blockchain_energy(p), DomainError);
    p = EnergyParams{};
    p.per_record_energy = -1.0;
    CHECK_THROWS_AS(ledger_update_energy(p), DomainError);
    p = EnergyParams{};
    p.requests = std::nan("");
    CHECK_THROWS_AS(transmission_energy(p), DomainError);
    p = EnergyParams{};
    p.message_kinds = 0;
    CHECK_THROWS_AS(transmission_energy(p), DomainError);
}

TEST_CASE("doubling any factor doubles the hop-linear terms exactly")
{
    const EnergyParams base = params(3, 2, 2580, 3, 2580, 1.25);
    EnergyParams h = base;
    h.hop_count *= 2;
    CHECK(ledger_update_energy(h) == 2 * ledger_update_energy(base));
    CHECK(transmission_energy(h) == 2 * transmission_energy(base));
    EnergyParams r = base;
    r.records_per_tx *= 2;
    CHECK(ledger_update_energy(r) == 2 * ledger_update_energy(base));
    EnergyParams g = base;
    g.requests *= 2;
    CHECK(transmission_energy(g) == 2 * transmission_energy(base));
    EnergyParams k = base;
    k.message_kinds *= 2;
    CHECK(transmission_energy(k) == 2 * transmission_energy(base));
}

TEST_CASE("total energy is monotone in every parameter")
{
    const EnergyParams base = params(3, 2, 2580, 3, 2580, 1.25);
    const double e0 = total_blockchain_energy(base);
    std::vector<EnergyParams> bumped(8, base);
    bumped[0].hop_count += 1;
    bumped[1].records_per_tx += 1;
    bumped[2].per_record_energy += 1;
    bumped[3].message_kinds += 1;
    bumped[4].per_request_energy += 1;
    bumped[5].requests += 0.5;
    bumped[6].security_cost += 0.1;
    bumped[7].app_count += 1;
    for (const auto& p : bumped) CHECK(total_blockchain_energy(p) >= e0);
}

TEST_CASE("heston step examples")
{
    HestonParams hp{0.0, 0.0, 0.0, 0.0};
    EnergyLedger ledger(100.0, 100.0, 0.0);
    CHECK(heston_step(ledger, hp, 1.0, 1.7).current() == 100.0);

    hp.request_rate = 1.0;
    EnergyLedger offset(100.0, 102.0, 0.0);
    const EnergyLedger next = heston_step(offset, hp, 1.0, 0.3);
    CHECK(next.current() == 104.0);
    CHECK(next.time() == 1.0);
    CHECK(next.history().size() == 2);
}

TEST_CASE("zero variance ignores the noise sample")
{
    HestonParams hp{0.5, 2.0, 0.0, 3.0};
    EnergyLedger ledger(10.0, 12.0, 0.0);
    CHECK(heston_step(ledger, hp, 0.1, -2.0).current() == heston_step(ledger, hp, 0.1, 5.0).current());
    hp.energy_stddev = 4.0;
    hp.request_change_rate = 0.0;
    CHECK(heston_step(ledger, hp, 0.1, -2.0).current() == heston_step(ledger, hp, 0.1, 5.0).current());
}

TEST_CASE("Euler stepping converges at first order to the exponential solution")
{
    const double lambda = 0.8;
    const double initial = 5.0;
    const double start = 6.0;
    const double horizon = 1.0;
    HestonParams hp{lambda, 0.0, 0.0, 0.0};
    const double exact = initial + (start - initial) * std::exp(lambda * horizon);

    std::vector<double> log_dt;
    std::vector<double> log_err;
    for (int n = 16; n <= 4096; n *= 2) {
        EnergyLedger ledger(initial, start, 0.0);
        const double dt = horizon / n;
        for (int i = 0; i < n; ++i) ledger = heston_step(ledger, hp, dt, 0.0);
        log_dt.push_back(std::log(dt));
        log_err.push_back(std::log(std::abs(ledger.current() - exact)));
    }
    // Least-squares slope of log(error) against log(dt).
    const double n = static_cast<double>(log_dt.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < log_dt.size(); ++i) {
        sx += log_dt[i];
        sy += log_err[i];
        sxx += log_dt[i] * log_dt[i];
        sxy += log_dt[i] * log_err[i];
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    CHECK(slope == doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("ledger history is strictly increasing")
{
    EnergyLedger ledger(10.0, 0.0);
    ledger.record(1.0, 9.0);
    CHECK_THROWS_AS(ledger.record(1.0, 8.0), DomainError);
    CHECK_THROWS_AS(ledger.record(0.5, 8.0), DomainError);
    CHECK(ledger.current() == 9.0);

    HestonParams hp{};
    CHECK_THROWS_AS(heston_step(ledger, hp, 0.0, 0.0), DomainError);
    CHECK_THROWS_AS(heston_step(ledger, hp, 1.0, std::nan("")), DomainError);
    hp.energy_stddev = -1.0;
    CHECK_THROWS_AS(heston_step(ledger, hp, 1.0, 0.0), DomainError);
}

}

#include <doctest.h>

#include <cmath>
#include <complex>
#include <cstring>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "lmem/kernel.hpp"
#include "lmem/params.hpp"
#include "lmem/readout.hpp"
#include "lmem/writing.hpp"

using namespace lmem;

namespace {

DimensionlessConfig cfg(double L, double Tw, double Tr, int nt, int nz) {
    DimensionlessConfig c;
    c.L_tilde = L;
    c.Tw_tilde = Tw;
    c.Tr_tilde = Tr;
    c.nt = nt;
    c.nz = nz;
    return c;
}

const DimensionlessConfig& small_cfg() {
    static const DimensionlessConfig c = cfg(3.0, 3.0, 3.0, 100, 150);
    return c;
}

const KernelTable& small_table() {
    static const KernelTable t = build_table(small_cfg(), 3.0);
    return t;
}

// a smooth complex profile on the table's z grid
std::vector<std::complex<double>> bump_profile(const KernelTable& table, double center) {
    std::vector<std::complex<double>> s(table.cols);
    for (int j = 0; j < table.cols; ++j) {
        const double z = j * table.dz;
        s[j] = std::complex<double>(0.3, 0.1) * std::exp(-(z - center) * (z - center));
    }
    return s;
}

double trapz_intensity(const std::vector<double>& v, double dt) {
    double acc = 0.0;
    for (std::size_t k = 1; k < v.size(); ++k) acc += 0.5 * dt * (v[k - 1] + v[k]);
    return acc;
}

} // namespace

TEST_SUITE("readout") {

TEST_CASE("zero profile reads out nothing") {
    const std::vector<std::complex<double>> zero(small_table().cols, {0.0, 0.0});
    const RetrievalResult r =
        retrieve(zero, small_table(), small_cfg(), Direction::forward);
    for (const auto& v : r.out_field) CHECK(v == std::complex<double>(0.0, 0.0));
    CHECK(r.efficiency == 0.0);
}

TEST_CASE("entrance-face coherences follow the documented closed forms") {
    const auto profile = bump_profile(small_table(), 1.2);
    const ReadoutCoherences rc =
        readout_coherences(profile, small_table(), small_cfg(), Direction::forward);
    for (int k = 0; k < rc.rows; k += 9) {
        const double t = k * rc.dt;
        // no sources sit before z = 0, so the face field vanishes ...
        CHECK(rc.a(k, 0) == std::complex<double>(0.0, 0.0));
        // ... and the coherences rotate freely at the drive rate
        CHECK(std::abs(rc.s12(k, 0) - profile[0] * std::cos(t)) <= 1e-12);
        CHECK(std::abs(rc.s13(k, 0) - profile[0] * std::sin(t)) <= 1e-12);
    }
    // backward reading sees the profile reversed
    const ReadoutCoherences rb =
        readout_coherences(profile, small_table(), small_cfg(), Direction::backward);
    CHECK(std::abs(rb.s12(10, 0) - profile.back() * std::cos(10 * rb.dt)) <= 1e-12);
}

TEST_CASE("free rotation identity holds at interior depths") {
    // d(s12)/dt = -s13 in the shared profile units; check a centered
    // difference at a few stations
    const auto profile = bump_profile(small_table(), 1.2);
    const ReadoutCoherences rc =
        readout_coherences(profile, small_table(), small_cfg(), Direction::forward);
    const double dt = rc.dt;
    for (int j : {20, 75, 140})
        for (int k = 40; k <= 240; k += 67) {
            const std::complex<double> lhs =
                (rc.s12(k + 1, j) - rc.s12(k - 1, j)) / (2.0 * dt);
            CHECK(std::abs(lhs + rc.s13(k, j)) <= 5e-4);
        }
}

TEST_CASE("a symmetric profile reads the same both ways") {
    // mirror the upper half onto the lower so the reversal is bit-exact
    auto profile = bump_profile(small_table(), 1.5);
    const std::size_t n = profile.size();
    for (std::size_t j = 0; j < n / 2; ++j) profile[n - 1 - j] = profile[j];
    const RetrievalResult fwd =
        retrieve(profile, small_table(), small_cfg(), Direction::forward);
    const RetrievalResult bwd =
        retrieve(profile, small_table(), small_cfg(), Direction::backward);
    REQUIRE(fwd.out_field.size() == bwd.out_field.size());
    for (std::size_t k = 0; k < fwd.out_field.size(); ++k)
        CHECK(fwd.out_field[k] == bwd.out_field[k]);
    CHECK(fwd.efficiency == bwd.efficiency);
}

TEST_CASE("efficiency grows with the read window") {
    const DimensionlessConfig c3 = cfg(3.0, 2.0, 3.0, 100, 150);
    const KernelTable table = build_table(c3, 6.0);
    const WriteSolution sol = solve_write(table, c3);
    const auto profile = sol.stored_profile();
    double prev = -1.0;
    for (double Tr : {1.0, 2.0, 4.0, 6.0}) {
        DimensionlessConfig c = c3;
        c.Tr_tilde = Tr;
        const RetrievalResult r = retrieve(profile, table, c, Direction::backward);
        CHECK(r.efficiency > prev);
        prev = r.efficiency;
    }
}

TEST_CASE("retrieved energy never exceeds what was stored") {
    const DimensionlessConfig c = cfg(6.7, 2.9, 2.9, 100, 150);
    const KernelTable table = build_table(c, 29.0);
    const WriteSolution sol = solve_write(table, c);
    const double loss = write_loss(sol);
    DimensionlessConfig read = c;
    read.Tr_tilde = 29.0;
    for (Direction d : {Direction::forward, Direction::backward}) {
        const RetrievalResult r = retrieve(sol.stored_profile(), table, read, d);
        CHECK(r.efficiency <= 100.0 - loss + 0.5);
    }
}

TEST_CASE("efficiency is the windowed intensity integral") {
    const auto profile = bump_profile(small_table(), 1.0);
    const RetrievalResult r =
        retrieve(profile, small_table(), small_cfg(), Direction::backward);
    const double eff =
        100.0 * trapz_intensity(r.intensity, r.dt) / small_cfg().Tw_tilde;
    CHECK(r.efficiency == doctest::Approx(eff).epsilon(1e-12));
    CHECK(retrieval_efficiency(r, small_cfg().Tw_tilde) ==
          doctest::Approx(r.efficiency).epsilon(1e-12));
    // intensity is |out|^2
    for (std::size_t k = 0; k < r.intensity.size(); k += 41)
        CHECK(r.intensity[k] == doctest::Approx(std::norm(r.out_field[k])).epsilon(1e-13));
}

TEST_CASE("co-propagating read-out carries the transverse phase globally") {
    const auto profile = bump_profile(small_table(), 1.0);
    QContext q;
    q.mode = TransverseMode{std::sqrt(0.05), 0.0};
    q.k_signal = 1.0;
    q.L_meters = 1.0; // q^2 L / k_s = 0.05
    const RetrievalResult plain =
        retrieve(profile, small_table(), small_cfg(), Direction::forward);
    const RetrievalResult shifted =
        retrieve(profile, small_table(), small_cfg(), Direction::forward, q);

    // intensities must match bit for bit
    REQUIRE(plain.intensity.size() == shifted.intensity.size());
    CHECK(std::memcmp(plain.intensity.data(), shifted.intensity.data(),
                      plain.intensity.size() * sizeof(double)) == 0);
    // and the fields differ by exactly the global factor e^{-i q^2 L/(2 k)}
    const std::complex<double> phase(std::cos(0.025), -std::sin(0.025));
    for (std::size_t k = 1; k < plain.out_field.size(); k += 50)
        CHECK(std::abs(shifted.out_field[k] - phase * plain.out_field[k]) <= 1e-15);
}

TEST_CASE("counter-propagating read-out barely moves in the paraxial regime") {
    const auto profile = bump_profile(small_table(), 1.0);
    QContext q;
    q.mode = TransverseMode{0.1, 0.0};
    q.k_signal = 1.0;
    q.L_meters = 1.0; // q^2 L / k_s = 0.01
    const double eff0 =
        retrieve(profile, small_table(), small_cfg(), Direction::backward).efficiency;
    const double effq =
        retrieve(profile, small_table(), small_cfg(), Direction::backward, q).efficiency;
    CHECK(std::abs(effq - eff0) < 0.5);
    CHECK(q.q2_L_over_ks() == doctest::Approx(0.01).epsilon(1e-12));
}

TEST_CASE("input validation") {
    std::vector<std::complex<double>> short_profile(10, {1.0, 0.0});
    CHECK_THROWS_AS(retrieve(short_profile, small_table(), small_cfg(),
                             Direction::forward),
                    std::invalid_argument);
    DimensionlessConfig too_long = small_cfg();
    too_long.Tr_tilde = 10.0; // table covers 3
    const std::vector<std::complex<double>> ok(small_table().cols, {1.0, 0.0});
    CHECK_THROWS_AS(retrieve(ok, small_table(), too_long, Direction::forward),
                    std::invalid_argument);
    DimensionlessConfig zero_r = small_cfg();
    zero_r.Tr_tilde = 0.0;
    CHECK_THROWS_AS(retrieve(ok, small_table(), zero_r, Direction::forward),
                    std::invalid_argument);
}

TEST_CASE("csv and json summaries") {
    const auto profile = bump_profile(small_table(), 1.0);
    const RetrievalResult r =
        retrieve(profile, small_table(), small_cfg(), Direction::backward);
    std::ostringstream out;
    export_csv(r, out);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "t_tilde,re_a,im_a,intensity");
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == static_cast<int>(r.out_field.size()));

    const auto doc = nlohmann::json::parse(retrieval_summary_json(r, 3.0, 12.5));
    CHECK(doc.at("direction").get<std::string>() == "backward");
    CHECK(doc.at("L_tilde").get<double>() == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(doc.at("loss_percent").get<double>() == doctest::Approx(12.5).epsilon(1e-15));
    CHECK(doc.at("eff_percent").get<double>() ==
          doctest::Approx(r.efficiency).epsilon(1e-12));
    CHECK(doc.at("Tr_tilde").get<double>() == doctest::Approx(3.0).epsilon(1e-15));
}

} // TEST_SUITE

#include <doctest.h>

#include "labelshift/error.hpp"
#include "labelshift/gaussian_kernel.hpp"
#include "labelshift/simd/kernels.hpp"

#include <cmath>
#include <random>
#include <vector>

using namespace labelshift;
namespace simd = labelshift::simd;

namespace {

std::vector<double> uniform(std::size_t n, double lo, double hi, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> v(n);
    for (auto& x : v) x = u(rng);
    return v;
}

double rel_diff(double a, double b) {
    const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
    return std::abs(a - b) / scale;
}

}  // namespace

TEST_CASE("scalar table is always available and listed first") {
    const auto isas = simd::available_isas();
    REQUIRE(!isas.empty());
    CHECK(isas.front() == simd::Isa::Scalar);
    CHECK(simd::isa_available(simd::Isa::Scalar));
    CHECK(simd::kernels_for(simd::Isa::Scalar).isa == simd::Isa::Scalar);
}

TEST_CASE("unavailable variant throws") {
    if (!simd::isa_available(simd::Isa::Avx2)) {
        CHECK_THROWS_AS(simd::kernels_for(simd::Isa::Avx2), std::invalid_argument);
    }
}

TEST_CASE("exp matches std::exp on every variant") {
    // Odd length exercises the tail; the range covers underflow to zero.
    std::vector<double> x = uniform(1027, -745.0, 5.0, 1);
    x.insert(x.end(), {0.0, -0.0, -1e-300, -708.3, -745.2, -800.0, 1e-16});
    for (simd::Isa isa : simd::available_isas()) {
        CAPTURE(simd::isa_name(isa));
        std::vector<double> v = x;
        simd::kernels_for(isa).exp_inplace(v);
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double ref = std::exp(x[i]);
            if (ref < 1e-300) {
                CHECK(v[i] <= 1e-300);
            } else {
                CHECK(rel_diff(v[i], ref) < 4e-15);
            }
        }
    }
}

TEST_CASE("gaussian gram and weighted sums agree across variants") {
    const auto a = uniform(37, -2.0, 2.0, 2);
    const auto b = uniform(53, -2.0, 2.0, 3);
    const auto w = uniform(53, -1.0, 1.0, 4);
    const double gamma = 1.7;
    const auto& ref = simd::kernels_for(simd::Isa::Scalar);
    std::vector<double> gram_ref(a.size() * b.size());
    std::vector<double> sums_ref(a.size());
    ref.gaussian_gram(a, b, gamma, gram_ref.data());
    ref.gaussian_weighted_sums(a, b, w, gamma, sums_ref);

    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) {
            const double d = a[i] - b[j];
            CHECK(rel_diff(gram_ref[i + j * a.size()], std::exp(-gamma * d * d)) < 1e-15);
        }
    }

    for (simd::Isa isa : simd::available_isas()) {
        CAPTURE(simd::isa_name(isa));
        const auto& t = simd::kernels_for(isa);
        std::vector<double> gram(a.size() * b.size());
        std::vector<double> sums(a.size());
        t.gaussian_gram(a, b, gamma, gram.data());
        t.gaussian_weighted_sums(a, b, w, gamma, sums);
        for (std::size_t i = 0; i < gram.size(); ++i) CHECK(rel_diff(gram[i], gram_ref[i]) < 4e-15);
        for (std::size_t i = 0; i < sums.size(); ++i) CHECK(std::abs(sums[i] - sums_ref[i]) < 1e-13);
    }
}

TEST_CASE("degenerate sizes") {
    for (simd::Isa isa : simd::available_isas()) {
        const auto& t = simd::kernels_for(isa);
        std::vector<double> empty;
        t.exp_inplace(empty);
        std::vector<double> one{0.25};
        std::vector<double> out(1, 7.0);
        t.gaussian_weighted_sums(one, empty, empty, 1.0, out);
        CHECK(out[0] == 0.0);
        double g = 0.0;
        t.gaussian_gram(one, one, 3.0, &g);
        CHECK(g == 1.0);
    }
}

TEST_CASE("kernel class uses the bandwidth convention") {
    GaussianKernel k(0.5);
    CHECK(k.gamma() == doctest::Approx(2.0));
    CHECK(k(0.0, 0.0) == 1.0);
    // Distance sigma sqrt(2 ln 2) gives exactly one half.
    const double d = 0.5 * std::sqrt(2.0 * std::log(2.0));
    CHECK(k(0.1, 0.1 + d) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK_THROWS_AS(GaussianKernel(0.0), ConfigError);
    CHECK_THROWS_AS(GaussianKernel(-1.0), ConfigError);

    Eigen::VectorXd a(3), b(2), w(2);
    a << 0.0, 0.5, 1.0;
    b << 0.2, 0.9;
    w << 2.0, -1.0;
    const Eigen::MatrixXd G = k.gram(a, b);
    const Eigen::VectorXd s = k.weighted_sums(a, b, w);
    CHECK((G * w - s).norm() < 1e-14);
    CHECK((k.row_sums(a, b) - G.rowwise().sum()).norm() < 1e-14);
}

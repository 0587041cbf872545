#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace wtgeprp {

enum class Basis { haar, db10, sym8, coif5 };

// Boundary handling for the transform.  `symmetric` is half-point mirroring
// (the boundary sample is repeated); `periodic` wraps around.
enum class Extension { symmetric, periodic };

inline constexpr std::array<Basis, 4> kAllBases{Basis::haar, Basis::db10, Basis::sym8,
                                                Basis::coif5};

inline const char* basis_name(Basis b) {
    switch (b) {
        case Basis::haar: return "haar";
        case Basis::db10: return "db10";
        case Basis::sym8: return "sym8";
        case Basis::coif5: return "coif5";
    }
    return "?";
}

inline std::optional<Basis> parse_basis(std::string_view s) {
    for (Basis b : kAllBases)
        if (s == basis_name(b)) return b;
    return std::nullopt;
}

inline const char* extension_name(Extension e) {
    return e == Extension::symmetric ? "symmetric" : "periodic";
}

inline std::optional<Extension> parse_extension(std::string_view s) {
    if (s == "symmetric") return Extension::symmetric;
    if (s == "periodic") return Extension::periodic;
    return std::nullopt;
}

namespace detail {

// Scaling (synthesis low-pass) coefficients, classic table orientation.
// Generated by tools/gen_filter_coeffs.py; each table satisfies
// sum = sqrt(2), orthonormality under even shifts, and the family's
// vanishing-moment conditions to ~1e-15.

inline constexpr std::array<double, 2> kHaarScaling = {
    0.7071067811865476,
    0.7071067811865476,
};

inline constexpr std::array<double, 20> kDb10Scaling = {
    0.02667005790055154,
    0.18817680007767001,
    0.5272011889316905,
    0.6884590394536081,
    0.28117234366064137,
    -0.24984642432728402,
    -0.19594627437742065,
    0.12736934033577307,
    0.09305736460360416,
    -0.07139414716639188,
    -0.02945753682189568,
    0.03321267405934394,
    0.003606553566965447,
    -0.010733175483334615,
    0.0013953517470501314,
    0.0019924052951873824,
    -0.0006858566949593602,
    -0.00011646685513000579,
    9.358867032017744e-05,
    -1.3264202894380923e-05,
};

inline constexpr std::array<double, 16> kSym8Scaling = {
    0.0018899503327685315,
    -0.0003029205147241198,
    -0.014952258337077728,
    0.0038087520138539014,
    0.04913717967367995,
    -0.027219029917218845,
    -0.05194583810818801,
    0.36444189483581124,
    0.7771857516995995,
    0.48135965125943264,
    -0.0612733590674261,
    -0.1432942383511355,
    0.0076074873249811804,
    0.03169508781153043,
    -0.0005421323317897885,
    -0.003382415951002125,
};

inline constexpr std::array<double, 30> kCoif5Scaling = {
    -0.0002120818429830321,
    0.0003585777089020632,
    0.0021782942044828646,
    -0.00415931230929203,
    -0.010131584162551673,
    0.023408320709318652,
    0.028169742763975852,
    -0.09192158437249127,
    -0.052046668332743,
    0.42157126042595044,
    0.7742936217035271,
    0.4379823140125713,
    -0.062037751963670555,
    -0.10556315722741781,
    0.0412875318813178,
    0.03267480272104433,
    -0.01975839291039278,
    -0.009159508525774594,
    0.006761520898667702,
    0.002431575727703567,
    -0.0016616275182375114,
    -0.0006375589827369591,
    0.00030185798549936337,
    0.0001403563434625921,
    -4.121986905841111e-05,
    -2.127022541845384e-05,
    3.7007287107533055e-06,
    2.0612208615919198e-06,
    -1.623799970522541e-07,
    -9.604013591346467e-08,
};

}  // namespace detail

// Orthogonal analysis/synthesis filter quadruple.
//   h0, h1: analysis low/high-pass;  g0, g1: synthesis counterparts.
struct FilterBank {
    std::string name;
    std::vector<double> h0, h1, g0, g1;

    std::size_t length() const { return h0.size(); }
};

// High-pass from low-pass via the quadrature mirror relation
// g_k = (-1)^k h_{1-k}, index-shifted onto the support of h0:
// h1[m] = (-1)^m h0[L-1-m] (L even).
inline std::vector<double> qmf_highpass(const std::vector<double>& h0) {
    if (h0.empty() || h0.size() % 2 != 0)
        throw std::invalid_argument("qmf_highpass: filter must be nonempty with even length");
    const std::size_t len = h0.size();
    std::vector<double> h1(len);
    for (std::size_t m = 0; m < len; ++m) {
        const double sign = (m % 2 == 0) ? 1.0 : -1.0;
        h1[m] = sign * h0[len - 1 - m];
    }
    return h1;
}

// Startup gates for a filter bank: sum = sqrt(2), orthonormality under all
// even shifts, the QMF relation, zero-sum high-pass, low/high cross
// orthogonality, and synthesis filters equal to time-reversed analysis
// filters.  Tolerance 1e-10.  Throws std::runtime_error naming the failed
// gate.
inline void validate_filter_bank(const FilterBank& fb) {
    constexpr double kTol = 1e-10;
    const std::size_t len = fb.length();
    auto fail = [&](const std::string& what) {
        throw std::runtime_error("filter bank " + fb.name + ": " + what);
    };
    if (len < 2 || len % 2 != 0) fail("length must be even and >= 2");
    if (fb.h1.size() != len || fb.g0.size() != len || fb.g1.size() != len)
        fail("filter lengths disagree");

    double sum0 = 0.0, sum1 = 0.0;
    for (std::size_t k = 0; k < len; ++k) {
        sum0 += fb.h0[k];
        sum1 += fb.h1[k];
    }
    if (std::abs(sum0 - std::sqrt(2.0)) > kTol) fail("low-pass sum != sqrt(2)");
    if (std::abs(sum1) > kTol) fail("high-pass sum != 0");

    for (std::size_t m = 0; m < len / 2; ++m) {
        double auto0 = 0.0, cross = 0.0;
        for (std::size_t k = 2 * m; k < len; ++k) {
            auto0 += fb.h0[k] * fb.h0[k - 2 * m];
            cross += fb.h0[k] * fb.h1[k - 2 * m];
        }
        // the cross sum over the other shift direction
        double cross2 = 0.0;
        for (std::size_t k = 2 * m; k < len; ++k) cross2 += fb.h1[k] * fb.h0[k - 2 * m];
        const double want = (m == 0) ? 1.0 : 0.0;
        if (std::abs(auto0 - want) > kTol) fail("orthonormality failed at shift " + std::to_string(m));
        if (std::abs(cross) > kTol || std::abs(cross2) > kTol)
            fail("low/high cross-orthogonality failed at shift " + std::to_string(m));
    }

    const std::vector<double> qmf = qmf_highpass(fb.h0);
    for (std::size_t k = 0; k < len; ++k) {
        if (fb.h1[k] != qmf[k]) fail("QMF relation violated");
        if (fb.g0[k] != fb.h0[len - 1 - k]) fail("synthesis low-pass is not reversed analysis");
        if (fb.g1[k] != fb.h1[len - 1 - k]) fail("synthesis high-pass is not reversed analysis");
    }
}

inline FilterBank make_filter_bank(Basis basis) {
    auto from_scaling = [&](const double* data, std::size_t n) {
        FilterBank fb;
        fb.name = basis_name(basis);
        fb.g0.assign(data, data + n);
        fb.h0.assign(fb.g0.rbegin(), fb.g0.rend());
        fb.h1 = qmf_highpass(fb.h0);
        fb.g1.assign(fb.h1.rbegin(), fb.h1.rend());
        return fb;
    };
    FilterBank fb;
    switch (basis) {
        case Basis::haar:
            fb = from_scaling(detail::kHaarScaling.data(), detail::kHaarScaling.size());
            break;
        case Basis::db10:
            fb = from_scaling(detail::kDb10Scaling.data(), detail::kDb10Scaling.size());
            break;
        case Basis::sym8:
            fb = from_scaling(detail::kSym8Scaling.data(), detail::kSym8Scaling.size());
            break;
        case Basis::coif5:
            fb = from_scaling(detail::kCoif5Scaling.data(), detail::kCoif5Scaling.size());
            break;
    }
    validate_filter_bank(fb);
    return fb;
}

}  // namespace wtgeprp

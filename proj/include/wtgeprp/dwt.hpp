#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "wtgeprp/wavelet.hpp"

namespace wtgeprp {

// Coefficient pyramid from the recursive analysis: only the approximation
// branch is re-decomposed, so one approximation band at the deepest level
// plus one detail band per level.
struct CoeffPyramid {
    std::vector<double> approx;                // deepest-level approximation
    std::vector<std::vector<double>> details;  // D1..Dn, shallow to deep
    std::size_t levels = 0;
    std::size_t original_len = 0;
};

// Full-length additive components: D1..Dn followed by An, each of
// original_len samples, summing elementwise to the analysed series.
struct Decomposition {
    std::vector<std::vector<double>> components;
    std::size_t levels = 0;
};

// Band length per analysis step: floor((n + L - 1) / 2).  One step extends
// the signal by L-1 samples on each side, convolves (valid part only) and
// keeps the odd-phase samples.
inline std::size_t band_length(std::size_t n, std::size_t filter_len) {
    return (n + filter_len - 1) / 2;
}

inline std::string component_label(std::size_t index, std::size_t levels) {
    if (index < levels) return "D" + std::to_string(index + 1);
    return "A" + std::to_string(levels);
}

namespace detail {

// Map an out-of-range index into [0, n) under the extension mode.
// Symmetric mode is half-point mirroring with period 2n, so arbitrarily
// short signals fold as many times as needed.
inline std::size_t extended_index(std::ptrdiff_t i, std::size_t n, Extension ext) {
    const auto sn = static_cast<std::ptrdiff_t>(n);
    if (ext == Extension::periodic) {
        std::ptrdiff_t m = i % sn;
        if (m < 0) m += sn;
        return static_cast<std::size_t>(m);
    }
    std::ptrdiff_t p = i % (2 * sn);
    if (p < 0) p += 2 * sn;
    if (p >= sn) p = 2 * sn - 1 - p;
    return static_cast<std::size_t>(p);
}

// One analysis step: out[k] = sum_m f[m] * x[2k + 1 - m] on the extended
// signal.  The +1 phase matches the pinned haar values (see dwt tests).
inline std::vector<double> analyze(std::span<const double> x, const std::vector<double>& f,
                                   Extension ext) {
    const std::size_t n = x.size();
    const std::size_t len = f.size();
    std::vector<double> out(band_length(n, len));
    for (std::size_t k = 0; k < out.size(); ++k) {
        double acc = 0.0;
        const std::ptrdiff_t base = static_cast<std::ptrdiff_t>(2 * k + 1);
        for (std::size_t m = 0; m < len; ++m)
            acc += f[m] * x[extended_index(base - static_cast<std::ptrdiff_t>(m), n, ext)];
        out[k] = acc;
    }
    return out;
}

// One synthesis step: upsample both bands by two, convolve with the
// synthesis pair, sum, and keep the centred window of parent_len samples.
inline std::vector<double> synthesize(std::span<const double> approx,
                                      std::span<const double> det, const FilterBank& fb,
                                      std::size_t parent_len) {
    if (approx.size() != det.size())
        throw std::invalid_argument("synthesize: approximation/detail band lengths differ");
    const std::size_t len = fb.length();
    const std::size_t la = approx.size();
    const std::size_t ulen = 2 * la + len - 2;
    if (ulen < parent_len)
        throw std::invalid_argument("synthesize: bands too short for parent length");
    const std::size_t start = (ulen - parent_len) / 2;
    std::vector<double> out(parent_len, 0.0);
    for (std::size_t j = 0; j < la; ++j) {
        const double a = approx[j];
        const double d = det[j];
        for (std::size_t m = 0; m < len; ++m) {
            const std::size_t idx = 2 * j + m;
            if (idx < start || idx >= start + parent_len) continue;
            out[idx - start] += a * fb.g0[m] + d * fb.g1[m];
        }
    }
    return out;
}

inline void require_finite(std::span<const double> x) {
    for (std::size_t i = 0; i < x.size(); ++i)
        if (!std::isfinite(x[i]))
            throw std::invalid_argument("series has non-finite sample at index " +
                                        std::to_string(i));
}

inline std::vector<std::size_t> band_lengths(std::size_t original_len, std::size_t filter_len,
                                             std::size_t levels) {
    std::vector<std::size_t> lens{original_len};
    for (std::size_t j = 0; j < levels; ++j) lens.push_back(band_length(lens.back(), filter_len));
    return lens;
}

}  // namespace detail

inline CoeffPyramid decompose(std::span<const double> x, const FilterBank& bank,
                              std::size_t levels, Extension ext = Extension::symmetric) {
    if (levels < 1) throw std::invalid_argument("decompose: levels must be >= 1");
    if (x.size() < (std::size_t{1} << levels))
        throw std::invalid_argument("decompose: series of length " + std::to_string(x.size()) +
                                    " too short for " + std::to_string(levels) + " levels");
    detail::require_finite(x);

    CoeffPyramid p;
    p.levels = levels;
    p.original_len = x.size();
    std::vector<double> cur(x.begin(), x.end());
    for (std::size_t j = 0; j < levels; ++j) {
        p.details.push_back(detail::analyze(cur, bank.h1, ext));
        cur = detail::analyze(cur, bank.h0, ext);
    }
    p.approx = std::move(cur);
    return p;
}

inline std::vector<double> reconstruct(const CoeffPyramid& p, const FilterBank& bank) {
    if (p.levels < 1 || p.details.size() != p.levels)
        throw std::invalid_argument("reconstruct: malformed pyramid");
    const auto lens = detail::band_lengths(p.original_len, bank.length(), p.levels);
    if (p.approx.size() != lens[p.levels])
        throw std::invalid_argument("reconstruct: approximation band length inconsistent with "
                                    "declared convention");
    for (std::size_t j = 0; j < p.levels; ++j)
        if (p.details[j].size() != lens[j + 1])
            throw std::invalid_argument("reconstruct: detail band " + std::to_string(j + 1) +
                                        " length inconsistent with declared convention");

    std::vector<double> cur = p.approx;
    for (std::size_t j = p.levels; j-- > 0;)
        cur = detail::synthesize(cur, p.details[j], bank, lens[j]);
    return cur;
}

// Reconstructs each coefficient band on its own (all other bands zeroed),
// yielding levels+1 series of original length whose elementwise sum equals
// the input; this is what makes same-index addition of per-component
// forecasts a valid reconstruction.
inline Decomposition components(std::span<const double> x, const FilterBank& bank,
                                std::size_t levels, Extension ext = Extension::symmetric) {
    const CoeffPyramid p = decompose(x, bank, levels, ext);
    Decomposition dec;
    dec.levels = levels;
    for (std::size_t band = 0; band <= levels; ++band) {
        CoeffPyramid one;
        one.levels = p.levels;
        one.original_len = p.original_len;
        one.approx.assign(p.approx.size(), 0.0);
        for (std::size_t j = 0; j < levels; ++j)
            one.details.emplace_back(p.details[j].size(), 0.0);
        if (band < levels)
            one.details[band] = p.details[band];
        else
            one.approx = p.approx;
        dec.components.push_back(reconstruct(one, bank));
    }
    return dec;
}

}  // namespace wtgeprp

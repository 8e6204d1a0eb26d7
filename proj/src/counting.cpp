#include "kempner/counting.hpp"

#include "kempner/rng.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace kempner {

namespace {

// Multiply the coefficient vector by (a + b x) in place.
void multiply_linear(std::vector<BigInt>& poly, const BigInt& a, const BigInt& b) {
    poly.push_back(0);
    for (std::size_t j = poly.size() - 1; j > 0; --j) poly[j] = poly[j] * a + poly[j - 1] * b;
    poly[0] *= a;
}

std::pair<BigInt, BigInt> factor_at(const LambdaFamily& fam, std::size_t i) {
    const std::uint32_t d = fam.sequence().quotient(i);
    const std::size_t u = fam.forbidden().size_at(i);
    return {BigInt(d - u), BigInt(u)};
}

// Top digit ranges over [1, d-1], so digit 0 leaves both counts.
std::pair<BigInt, BigInt> top_factor_at(const LambdaFamily& fam, std::size_t i) {
    const std::uint32_t d = fam.sequence().quotient(i);
    const auto& set = fam.forbidden().at(i);
    const std::size_t bad = set.size() - (set.front() == 0 ? 1 : 0);
    return {BigInt(d - 1 - bad), BigInt(bad)};
}

BigInt tail_count(const std::vector<BigInt>& counts, std::uint64_t threshold) {
    BigInt sum = 0;
    for (std::size_t j = 0; j < counts.size() && j <= threshold; ++j) sum += counts[j];
    return sum;
}

} // namespace

ViolationDistribution violation_distribution(const LambdaFamily& fam, std::size_t m) {
    if (m == 0) throw std::domain_error("level m must be >= 1");
    ViolationDistribution dist;
    dist.m = m;
    dist.counts = {BigInt(1)};
    dist.counts.reserve(m + 1);
    dist.total = 1;
    for (std::size_t i = 0; i < m; ++i) {
        const auto [good, bad] = factor_at(fam, i);
        multiply_linear(dist.counts, good, bad);
        dist.total *= BigInt(fam.sequence().quotient(i));
    }
    return dist;
}

BigRat lower_tail(const ViolationDistribution& dist, const BigRat& threshold) {
    BigInt sum = 0;
    const BigInt num = rat_num(threshold), den = rat_den(threshold);
    for (std::size_t j = 0; j < dist.counts.size(); ++j)
        if (BigInt(static_cast<std::uint64_t>(j)) * den <= num) sum += dist.counts[j];
    return BigRat(sum, dist.total);
}

LevelCount count_members_level(const LambdaFamily& fam, std::size_t m) {
    LevelCounter counter(fam);
    counter.advance_to(m);
    return counter.current();
}

LevelCounter::LevelCounter(LambdaFamily fam)
    : fam_(std::move(fam)), partial_{BigInt(1)}, full_{BigInt(1)}, g_top_(1) {}

void LevelCounter::advance_to(std::size_t m) {
    if (m < m_) throw std::invalid_argument("LevelCounter cannot move backwards");
    while (m_ < m) {
        if (m_ >= 1) {
            const auto [good, bad] = factor_at(fam_, m_ - 1);
            multiply_linear(partial_, good, bad);
        }
        const auto [good, bad] = factor_at(fam_, m_);
        multiply_linear(full_, good, bad);
        g_top_ *= BigInt(fam_.sequence().quotient(m_));
        ++m_;
    }
}

LevelCount LevelCounter::current() const {
    if (m_ == 0) throw std::domain_error("level m must be >= 1");
    const std::uint64_t threshold = fam_.violation_threshold(m_);

    std::vector<BigInt> im = partial_;
    const auto [good, bad] = top_factor_at(fam_, m_ - 1);
    multiply_linear(im, good, bad);

    LevelCount out;
    out.m = m_;
    out.members_in_Im = tail_count(im, threshold);
    out.members_in_Jm = tail_count(full_, threshold);
    return out;
}

ViolationDistribution LevelCounter::distribution() const {
    if (m_ == 0) throw std::domain_error("level m must be >= 1");
    return {m_, full_, g_top_};
}

BigRat tail_probability(const LambdaFamily& fam, std::size_t m) {
    const ViolationDistribution dist = violation_distribution(fam, m);
    return lower_tail(dist, fam.lambda() * BigInt(static_cast<std::uint64_t>(m)));
}

McEstimate monte_carlo_tail(const LambdaFamily& fam, std::size_t m, std::uint64_t samples,
                            std::uint64_t seed) {
    if (m == 0) throw std::domain_error("level m must be >= 1");
    if (samples == 0) throw std::domain_error("samples must be >= 1");

    std::vector<std::uint32_t> radix(m);
    for (std::size_t i = 0; i < m; ++i) radix[i] = fam.sequence().quotient(i);
    const std::uint64_t threshold = fam.violation_threshold(m);
    const auto& forb = fam.forbidden();

    std::uint64_t successes = 0;
    const std::uint64_t chunks = (samples + kMcChunkSize - 1) / kMcChunkSize;
    for (std::uint64_t c = 0; c < chunks; ++c) {
        SplitMix64 rng(chunk_seed(seed, c));
        const std::uint64_t lo = c * kMcChunkSize;
        const std::uint64_t hi = std::min(samples, lo + kMcChunkSize);
        for (std::uint64_t s = lo; s < hi; ++s) {
            std::uint64_t violations = 0;
            for (std::size_t i = 0; i < m; ++i) {
                const std::uint32_t digit = static_cast<std::uint32_t>(rng.below(radix[i]));
                if (forb.forbids(i, digit)) ++violations;
            }
            if (violations <= threshold) ++successes;
        }
    }

    McEstimate est;
    est.successes = successes;
    est.samples = samples;
    est.estimate = static_cast<double>(successes) / static_cast<double>(samples);
    est.std_error = std::sqrt(est.estimate * (1.0 - est.estimate) / static_cast<double>(samples));
    return est;
}

} // namespace kempner
